//! The inverse-Mellin main terms
//!
//! ```text
//! (ω_F/2πi) ∫_(σ) γ(s) L(2−2s+2iτ, χ̄²)/L^{(2q)}(3−2s+2iτ, χ̄²) P(s) (πx/qD)^{s−1/2} m(s) ds
//! ```
//!
//! with `m(s) = 1/s` (sharp cutoff) or `Γ(s/2)/2` (Gaussian weight), as a
//! trapezoid sum over equispaced `t ∈ [−T, T]`. Everything except the
//! `(πx/qD)^{s−1/2}` factor is tabulated once per configuration.

#[allow(unused_imports)]
use num_traits::Float as _;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use super::{omega_family, OmegaMode};
use crate::arith::PrimeTable;
use crate::characters::DirichletCharacter;
use crate::complexfn::{log_gamma, QuadratureSpec};
use crate::discriminants::DiscriminantFamily;
use crate::lfunc::euler::residue_factor;
use crate::lfunc::{removed_factor, GL1Representation, LineSeries, PrimeProductLine};
use crate::sum::Pairwise;
use crate::{Error, Result};

/// Nodes per independently computed block.
pub const BLOCK: usize = 1024;

/// Which of the two main terms to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum RhsMode {
    /// `Σ_{n<x}`, measure `ds/s`, plus the residue term for real `χ`.
    Sharp,
    /// `Σ_n e^{−(n/x)²}`, measure `Γ(s/2)/2 ds`.
    Smoothed,
}

impl RhsMode {
    /// `3/4` for the sharp term, `1/10` for the smoothed one.
    pub fn default_abscissa(self) -> f64 {
        match self {
            RhsMode::Sharp => 0.75,
            RhsMode::Smoothed => 0.1,
        }
    }
}

/// Everything needed to tabulate the integrand block by block.
#[derive(Debug, Clone)]
pub struct RhsPlan {
    spec: QuadratureSpec,
    mode: RhsMode,
    kappa: Complex64,
    tau: f64,
    q: u64,
    d1: f64,
    chi2_bar: DirichletCharacter,
    omega_f: Complex64,
    residue: Option<Complex64>,
    numerator: LineSeries,
    denominator: LineSeries,
    product: PrimeProductLine,
}

impl RhsPlan {
    pub fn new(
        rep: &GL1Representation,
        family: &DiscriminantFamily,
        spec: &QuadratureSpec,
        mode: RhsMode,
    ) -> Result<Self> {
        spec.validate()?;
        let sigma = spec.abscissa;
        if !(sigma > 0.0 && sigma < 1.0) {
            return Err(Error::QuadratureSpecInvalid(alloc::format!(
                "abscissa must lie in (0, 1), got {sigma}"
            )));
        }
        if mode == RhsMode::Sharp && sigma <= 0.5 {
            return Err(Error::QuadratureSpecInvalid(
                "the sharp main term is integrated right of Re s = 1/2".into(),
            ));
        }
        let omega_f = omega_family(rep, family, OmegaMode::Leading)?;
        let q = rep.conductor();
        let tau = rep.tau();
        let chi2 = rep.chi().square();
        let chi2_bar = chi2.conj();
        let bound = 2.0 * spec.t_max + 2.0 * tau.abs();
        let sieve = PrimeTable::new(spec.prime_cutoff.max(2));
        let primes: Vec<u64> = sieve
            .primes()
            .iter()
            .copied()
            .filter(|&p| p < spec.prime_cutoff && (2 * q) % p != 0)
            .collect();
        let residue = (mode == RhsMode::Sharp && rep.chi().square_is_trivial())
            .then(|| residue_factor(rep, family.d1, q as f64 * family.d1 / PI, spec.prime_cutoff));
        Ok(RhsPlan {
            spec: *spec,
            mode,
            kappa: rep.kappa(),
            tau,
            q,
            d1: family.d1,
            numerator: LineSeries::new(chi2_bar.values(), 2.0 - 2.0 * sigma, bound),
            denominator: LineSeries::new(chi2_bar.values(), 3.0 - 2.0 * sigma, bound),
            product: PrimeProductLine::new(chi2.values(), &primes, 3.0 - 2.0 * sigma),
            chi2_bar,
            omega_f,
            residue,
        })
    }

    pub fn block_count(&self) -> usize {
        self.spec.nodes.div_ceil(BLOCK)
    }

    /// Bound on the relative error from truncating the prime product.
    pub fn product_tail(&self) -> f64 {
        self.product.tail_bound()
    }

    /// Integrand values (times trapezoid weight and `Δt/2π`) for block `b`.
    pub fn block(&self, b: usize) -> Result<Vec<Complex64>> {
        let start = b * BLOCK;
        let end = ((b + 1) * BLOCK).min(self.spec.nodes);
        if start >= end {
            return Ok(Vec::new());
        }
        let count = end - start;
        let dt = self.spec.step();
        let sigma = self.spec.abscissa;
        let t_start = self.spec.node(start);
        // Every L and product argument has imaginary part 2τ − 2t.
        let w0 = 2.0 * self.tau - 2.0 * t_start;
        let num = self.numerator.block(w0, -2.0 * dt, count)?;
        let den = self.denominator.block(w0, -2.0 * dt, count)?;
        let prod = self.product.block(w0, -2.0 * dt, count);
        let mut out = Vec::with_capacity(count);
        for j in 0..count {
            let k = start + j;
            let t = self.spec.node(k);
            let s = Complex64::new(sigma, t);
            let w_den = Complex64::new(3.0 - 2.0 * sigma, 2.0 * self.tau - 2.0 * t);
            let removed = removed_factor(self.chi2_bar.values(), w_den, 2 * self.q);
            let mut log_g = log_gamma((1.0 - s + self.kappa.conj()) / 2.0)? - log_gamma((s + self.kappa) / 2.0)?;
            let measure = match self.mode {
                RhsMode::Sharp => 1.0 / s,
                RhsMode::Smoothed => {
                    log_g += log_gamma(s / 2.0)?;
                    Complex64::new(0.5, 0.0)
                }
            };
            let weight = if k == 0 || k + 1 == self.spec.nodes { 0.5 } else { 1.0 };
            let h = log_g.exp() * num[j] / (den[j] * removed) * prod[j] * measure;
            out.push(h * (weight * dt / (2.0 * PI)));
        }
        Ok(out)
    }

    /// Assemble the integrand from all blocks, in order.
    pub fn finish(self, blocks: Vec<Vec<Complex64>>) -> Result<RhsIntegrand> {
        let values: Vec<Complex64> = blocks.into_iter().flatten().collect();
        if values.len() != self.spec.nodes {
            return Err(Error::QuadratureSpecInvalid(alloc::format!(
                "expected {} integrand values, got {}",
                self.spec.nodes,
                values.len()
            )));
        }
        Ok(RhsIntegrand {
            spec: self.spec,
            mode: self.mode,
            q: self.q,
            d1: self.d1,
            tau: self.tau,
            omega_f: self.omega_f,
            residue: self.residue,
            residue_sign: 1.0,
            product_tail: self.product.tail_bound(),
            values,
        })
    }
}

/// The tabulated main-term integrand.
#[derive(Debug, Clone)]
pub struct RhsIntegrand {
    spec: QuadratureSpec,
    mode: RhsMode,
    q: u64,
    d1: f64,
    tau: f64,
    omega_f: Complex64,
    /// Residue term at `πx/qD = 1`, without `ω_F`.
    residue: Option<Complex64>,
    residue_sign: f64,
    product_tail: f64,
    values: Vec<Complex64>,
}

impl RhsIntegrand {
    /// Serial tabulation.
    pub fn build(
        rep: &GL1Representation,
        family: &DiscriminantFamily,
        spec: &QuadratureSpec,
        mode: RhsMode,
    ) -> Result<Self> {
        let plan = RhsPlan::new(rep, family, spec, mode)?;
        let blocks = (0..plan.block_count()).map(|b| plan.block(b)).collect::<Result<Vec<_>>>()?;
        plan.finish(blocks)
    }

    /// Flip the sign of the residue term (`+1` adds it as written).
    pub fn with_residue_sign(mut self, sign: f64) -> Self {
        self.residue_sign = sign;
        self
    }

    pub fn mode(&self) -> RhsMode {
        self.mode
    }

    pub fn omega_family(&self) -> Complex64 {
        self.omega_f
    }

    pub fn product_tail(&self) -> f64 {
        self.product_tail
    }

    /// The residue term at `x` (zero unless `χ` is real and the mode is sharp).
    pub fn residue_at(&self, x: f64) -> Complex64 {
        match self.residue {
            Some(r) => {
                let log_ratio = (PI * x / (self.q as f64 * self.d1)).ln();
                self.residue_sign * self.omega_f * r * Complex64::new(0.0, self.tau * log_ratio).exp()
            }
            None => Complex64::new(0.0, 0.0),
        }
    }

    /// Main term at `x > 0`.
    pub fn eval(&self, x: f64) -> Result<Complex64> {
        if !(x > 0.0 && x.is_finite()) {
            return Err(crate::error::domain!("need x > 0, got {x}"));
        }
        let log_ratio = (PI * x / (self.q as f64 * self.d1)).ln();
        let sigma = self.spec.abscissa;
        let scale = ((sigma - 0.5) * log_ratio).exp();
        let integral = self
            .values
            .iter()
            .enumerate()
            .map(|(k, v)| v * Complex64::new(0.0, self.spec.node(k) * log_ratio).exp())
            .collect::<Pairwise<_>>()
            .finish();
        Ok(self.omega_f * integral * scale + self.residue_at(x))
    }
}

/// The main term at one `x`.
pub fn rhs_integral(
    rep: &GL1Representation,
    family: &DiscriminantFamily,
    x: f64,
    spec: &QuadratureSpec,
    mode: RhsMode,
) -> Result<Complex64> {
    RhsIntegrand::build(rep, family, spec, mode)?.eval(x)
}
