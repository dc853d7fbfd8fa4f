//! Family means of `L(s, φ⊗χ_d)` through the approximate functional equation.

#[allow(unused_imports)]
use num_traits::Float as _;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use super::afe::twisted_root_number;
use super::GL1Representation;
use crate::arith::{gcd, kronecker_table, PrimeTable};
use crate::complexfn::{gamma_ratio_half, AfeParameters, VKernel, VTable};
use crate::discriminants::DiscriminantFamily;
use crate::sum::Pairwise;
use crate::{Error, Result};

/// Truncation of the twisted sums. Across the family the dropped terms have
/// essentially random signs, so this is far looser than a single evaluation.
pub const MEAN_VALUE_TOLERANCE: f64 = 1e-6;
const TABLE_STEP: f64 = 0.002;

/// Everything in the twisted AFE sums that does not depend on `d`.
#[derive(Debug, Clone)]
pub struct MeanValueKit {
    rep: GL1Representation,
    s: Complex64,
    log_xi: Complex64,
    cut1: f64,
    cut2: f64,
    table1: VTable,
    table2: VTable,
    gamma: Complex64,
    /// `log n`, `a(n) n^{−s}` and `ā(n) n^{s−1}`, index `n`.
    ln: Vec<f64>,
    first: Vec<Complex64>,
    second: Vec<Complex64>,
    sieve: PrimeTable,
    d_max: u64,
}

fn half_log(q: u64, d: u64) -> f64 {
    0.5 * (PI / (q as f64 * d as f64)).ln()
}

impl MeanValueKit {
    /// Kit for discriminants `d ≤ d_max`.
    pub fn new(
        rep: &GL1Representation,
        s: Complex64,
        p: &AfeParameters,
        d_max: u64,
        tol: f64,
    ) -> Result<Self> {
        if !(s.re > 0.0 && s.re < 1.0) {
            return Err(crate::error::domain!("AFE needs 0 < Re s < 1, got {s}"));
        }
        if !(tol > 0.0) {
            return Err(crate::error::domain!("tolerance must be positive"));
        }
        if d_max < 2 {
            return Err(crate::error::domain!("need d_max >= 2"));
        }
        let q = rep.conductor();
        let kappa = rep.kappa();
        let log_xi = p.log_xi(s)?;
        let low = half_log(q, d_max);

        let k1 = VKernel::new(p, s, kappa, false)?;
        let cut1 = k1.cutoff(-log_xi.im, tol);
        let k2 = VKernel::new(p, s, kappa, true)?;
        let cut2 = k2.cutoff(log_xi.im, tol);
        let u1 = low - log_xi.re;
        let u2 = low + log_xi.re;
        let n_cap = ((cut1 - u1).exp().max((cut2 - u2).exp()).floor() as u64).max(1);
        let table1 = VTable::new(k1, -log_xi.im, u1 - TABLE_STEP, cut1.max(u1) + TABLE_STEP, TABLE_STEP);
        let table2 = VTable::new(k2, log_xi.im, u2 - TABLE_STEP, cut2.max(u2) + TABLE_STEP, TABLE_STEP);

        let mut ln = Vec::with_capacity(n_cap as usize + 1);
        let mut first = Vec::with_capacity(n_cap as usize + 1);
        let mut second = Vec::with_capacity(n_cap as usize + 1);
        ln.push(0.0);
        first.push(Complex64::new(0.0, 0.0));
        second.push(Complex64::new(0.0, 0.0));
        for n in 1..=n_cap {
            let l = (n as f64).ln();
            let a = rep.coefficient(n);
            ln.push(l);
            first.push(a * (-s * l).exp());
            second.push(a.conj() * ((s - 1.0) * l).exp());
        }
        Ok(MeanValueKit {
            rep: rep.clone(),
            s,
            log_xi,
            cut1,
            cut2,
            table1,
            table2,
            gamma: gamma_ratio_half(s, kappa)?,
            ln,
            first,
            second,
            sieve: PrimeTable::new(n_cap.max(2)),
            d_max,
        })
    }

    /// Largest `n` used in either sum for any `d ≤ d_max`.
    pub fn max_terms(&self) -> usize {
        self.ln.len() - 1
    }

    /// `L(s, φ⊗χ_d)` for a fundamental `d ≤ d_max` coprime to `q`.
    pub fn twisted_value(&self, d: u64) -> Result<Complex64> {
        let q = self.rep.conductor();
        if d > self.d_max || d < 2 {
            return Err(crate::error::domain!("discriminant {d} outside the kit range"));
        }
        if gcd(d, q) != 1 {
            return Err(Error::InvalidResidue { residue: d, modulus: q });
        }
        let half = half_log(q, d);
        let u1 = half - self.log_xi.re;
        let u2 = half + self.log_xi.re;
        let n1 = ((self.cut1 - u1).exp().floor() as usize).clamp(1, self.max_terms());
        let n2 = ((self.cut2 - u2).exp().floor() as usize).clamp(1, self.max_terms());
        let chi_d = kronecker_table(d as i64, n1.max(n2), &self.sieve);

        let mut a = Pairwise::new();
        for n in 1..=n1 {
            let k = chi_d[n];
            if k != 0 && self.first[n] != Complex64::new(0.0, 0.0) {
                a.push(self.first[n] * (k as f64) * self.table1.eval(self.ln[n] + u1));
            }
        }
        let mut b = Pairwise::new();
        for n in 1..=n2 {
            let k = chi_d[n];
            if k != 0 && self.second[n] != Complex64::new(0.0, 0.0) {
                b.push(self.second[n] * (k as f64) * self.table2.eval(self.ln[n] + u2));
            }
        }
        let omega = twisted_root_number(&self.rep, d);
        let pre = omega * ((self.s - 0.5) * (2.0 * half)).exp() * self.gamma;
        Ok(a.finish() + pre * b.finish())
    }
}

/// `(1/#F) Σ_{d ∈ F} L(s, φ⊗χ_d)`, `1/2 < Re s < 1`.
pub fn mean_value_empirical(
    rep: &GL1Representation,
    family: &DiscriminantFamily,
    s: Complex64,
    p: &AfeParameters,
) -> Result<Complex64> {
    if !(s.re > 0.5 && s.re < 1.0) {
        return Err(crate::error::domain!("mean value needs 1/2 < Re s < 1, got {s}"));
    }
    if rep.chi().is_trivial() {
        return Err(Error::NotEntire);
    }
    let d_max = *family.members.last().ok_or(Error::EmptyFamily)?;
    let kit = MeanValueKit::new(rep, s, p, d_max, MEAN_VALUE_TOLERANCE)?;
    let mut acc = Pairwise::new();
    for &d in &family.members {
        acc.push(kit.twisted_value(d)?);
    }
    Ok(acc.finish() / family.len() as f64)
}
