//! The approximate functional equation
//!
//! ```text
//! L(s) = Σ a(n) n^{−s} V_s(√(π/q) n/ξ) + ω (π/q)^{s−1/2} γ(s) Σ ā(n) n^{s−1} V*_{1−s}(√(π/q) ξ n)
//! ```
//!
//! with `γ(s) = Γ((1−s+κ̄)/2)/Γ((s+κ)/2)`. Both sums stop once `|V|` stays
//! below the tolerance.

#[allow(unused_imports)]
use num_traits::Float as _;
use core::f64::consts::PI;

use num_complex::Complex64;

use super::GL1Representation;
use crate::arith::{gcd, kronecker};
use crate::complexfn::{gamma_ratio_half, AfeParameters, VKernel, VTable};
use crate::discriminants::is_fundamental;
use crate::sum::Pairwise;
use crate::{Error, Result};

/// Default truncation: drop terms once `|V| < 10⁻¹⁴`.
pub const AFE_TOLERANCE: f64 = 1e-14;

/// Below this many terms the weights are evaluated directly.
const DIRECT_TERMS: f64 = 2000.0;
const TABLE_STEP: f64 = 0.002;

/// Conductor, gamma shift and root number of a degree-one L-function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AfeTarget {
    pub conductor: f64,
    pub kappa: Complex64,
    pub omega: Complex64,
}

impl From<&GL1Representation> for AfeTarget {
    fn from(rep: &GL1Representation) -> Self {
        AfeTarget {
            conductor: rep.conductor() as f64,
            kappa: rep.kappa(),
            omega: rep.omega(),
        }
    }
}

/// The weights of one of the two sums, tabulated when the sum is long.
struct Weights {
    kernel: Option<VKernel>,
    table: Option<VTable>,
    mu: f64,
}

impl Weights {
    fn new(kernel: VKernel, mu: f64, u_min: f64, u_max: f64) -> Self {
        if (u_max - u_min).exp() <= DIRECT_TERMS {
            Weights {
                kernel: Some(kernel),
                table: None,
                mu,
            }
        } else {
            Weights {
                kernel: None,
                table: Some(VTable::new(kernel, mu, u_min - TABLE_STEP, u_max + TABLE_STEP, TABLE_STEP)),
                mu,
            }
        }
    }

    fn eval(&self, u: f64) -> Complex64 {
        match (&self.table, &self.kernel) {
            (Some(t), _) => t.eval(u),
            (None, Some(k)) => k.eval_log(Complex64::new(u, self.mu)),
            _ => unreachable!(),
        }
    }
}

/// Number of terms needed in one sum: largest `n` with `u(n) ≤ cutoff`.
fn length(u1: f64, cutoff: f64) -> u64 {
    let n = (cutoff - u1).exp().floor();
    if n < 1.0 {
        1
    } else {
        n as u64
    }
}

/// `L(s)` for an entire degree-one L-function with coefficients `a(n)`.
pub fn l_afe_with<F>(
    target: &AfeTarget,
    coeff: F,
    s: Complex64,
    p: &AfeParameters,
    tol: f64,
) -> Result<Complex64>
where
    F: Fn(u64) -> Complex64,
{
    if !(s.re > 0.0 && s.re < 1.0) {
        return Err(crate::error::domain!("AFE needs 0 < Re s < 1, got {s}"));
    }
    if !(tol > 0.0) {
        return Err(crate::error::domain!("AFE tolerance must be positive"));
    }
    let log_xi = p.log_xi(s)?;
    let half = 0.5 * (PI / target.conductor).ln();

    // log y = log n + half ∓ log ξ
    let mu1 = -log_xi.im;
    let u1 = half - log_xi.re;
    let k1 = VKernel::new(p, s, target.kappa, false)?;
    let cut1 = k1.cutoff(mu1, tol).max(u1);
    let n1 = length(u1, cut1);
    let w1 = Weights::new(k1, mu1, u1, cut1);

    let mu2 = log_xi.im;
    let u2 = half + log_xi.re;
    let k2 = VKernel::new(p, s, target.kappa, true)?;
    let cut2 = k2.cutoff(mu2, tol).max(u2);
    let n2 = length(u2, cut2);
    let w2 = Weights::new(k2, mu2, u2, cut2);

    let mut first = Pairwise::new();
    for n in 1..=n1 {
        let a = coeff(n);
        if a == Complex64::new(0.0, 0.0) {
            continue;
        }
        let ln = (n as f64).ln();
        first.push(a * (-s * ln).exp() * w1.eval(ln + u1));
    }
    let mut second = Pairwise::new();
    for n in 1..=n2 {
        let a = coeff(n);
        if a == Complex64::new(0.0, 0.0) {
            continue;
        }
        let ln = (n as f64).ln();
        second.push(a.conj() * ((s - 1.0) * ln).exp() * w2.eval(ln + u2));
    }
    let pre = target.omega * ((s - 0.5) * (2.0 * half)).exp() * gamma_ratio_half(s, target.kappa)?;
    Ok(first.finish() + pre * second.finish())
}

/// `L(s, φ)` by the approximate functional equation.
pub fn l_afe(rep: &GL1Representation, s: Complex64, p: &AfeParameters) -> Result<Complex64> {
    if rep.chi().is_trivial() {
        return Err(Error::NotEntire);
    }
    l_afe_with(&AfeTarget::from(rep), |n| rep.coefficient(n), s, p, AFE_TOLERANCE)
}

/// `φ ⊗ χ_d` for a positive fundamental discriminant `d` coprime to `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwistedRepresentation {
    rep: GL1Representation,
    d: u64,
    omega: Complex64,
}

impl TwistedRepresentation {
    pub fn new(rep: &GL1Representation, d: u64) -> Result<Self> {
        if !is_fundamental(d) || d == 1 {
            return Err(crate::error::domain!("{d} is not a fundamental discriminant > 1"));
        }
        let q = rep.conductor();
        if gcd(d, q) != 1 {
            return Err(Error::InvalidResidue { residue: d, modulus: q });
        }
        let omega = twisted_root_number(rep, d);
        Ok(TwistedRepresentation {
            rep: rep.clone(),
            d,
            omega,
        })
    }

    pub fn discriminant(&self) -> u64 {
        self.d
    }

    pub fn base(&self) -> &GL1Representation {
        &self.rep
    }

    /// `ω_{φ⊗χ_d}`.
    pub fn omega(&self) -> Complex64 {
        self.omega
    }

    pub fn target(&self) -> AfeTarget {
        AfeTarget {
            conductor: (self.rep.conductor() * self.d) as f64,
            kappa: self.rep.kappa(),
            omega: self.omega,
        }
    }

    pub fn coefficient(&self, n: u64) -> Complex64 {
        self.rep.coefficient(n) * kronecker(self.d as i64, n) as f64
    }

    pub fn l_afe(&self, s: Complex64, p: &AfeParameters) -> Result<Complex64> {
        l_afe_with(&self.target(), |n| self.coefficient(n), s, p, AFE_TOLERANCE)
    }
}

/// `ω_{φ⊗χ_d} = χ(d) d^{iτ} χ_d(q) ω_φ`.
pub fn twisted_root_number(rep: &GL1Representation, d: u64) -> Complex64 {
    let q = rep.conductor();
    rep.coefficient(d) * kronecker(d as i64, q) as f64 * rep.omega()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::{primitive_characters, DirichletCharacter};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn matches_reference_for_small_moduli() {
        let p = AfeParameters::numeric();
        for q in [4, 5, 7] {
            for chi in primitive_characters(q) {
                let rep = GL1Representation::new(chi, 0.0).unwrap();
                for s in [c(0.5, 0.0), c(0.5, 10.0), c(0.75, 3.0)] {
                    let a = l_afe(&rep, s, &p).unwrap();
                    let b = rep.l_reference(s).unwrap();
                    assert!((a - b).norm() < 1e-9, "q={q} s={s}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn rebalancing_does_not_change_the_value() {
        let chi = primitive_characters(7).into_iter().find(|c| c.order() == 6).unwrap();
        let rep = GL1Representation::new(chi, 2.0).unwrap();
        let s = c(0.6, 4.0);
        let a = l_afe(&rep, s, &AfeParameters::numeric()).unwrap();
        let b = l_afe(&rep, s, &AfeParameters::numeric().with_beta(1.0 / 16.0)).unwrap();
        let r = rep.l_reference(s).unwrap();
        assert!((a - b).norm() < 1e-9, "{a} {b}");
        assert!((a - r).norm() < 1e-9, "{a} {r}");
    }

    #[test]
    fn trivial_character_is_rejected() {
        let rep = GL1Representation::new(DirichletCharacter::trivial(1), 0.0).unwrap();
        assert_eq!(
            l_afe(&rep, c(0.5, 0.0), &AfeParameters::numeric()),
            Err(Error::NotEntire)
        );
    }

    #[test]
    fn twisted_root_number_law() {
        // The product character χχ_d mod qd is primitive, so its completed
        // L-function gives an independent root number.
        let chi = primitive_characters(7).into_iter().find(|c| c.order() == 6).unwrap();
        let rep = GL1Representation::new(chi.clone(), 2.0).unwrap();
        for d in [5u64, 8, 12, 13] {
            let tw = TwistedRepresentation::new(&rep, d).unwrap();
            let prod = DirichletCharacter::kronecker(d as i64).unwrap().mul(&chi);
            assert!(prod.is_primitive());
            let twisted = GL1Representation::new(prod, 2.0).unwrap();
            let s = c(0.3, 1.5);
            let lhs = twisted.completed(s).unwrap();
            let rhs = twisted.dual().completed(1.0 - s).unwrap();
            let fitted = lhs / rhs;
            assert!((fitted - tw.omega()).norm() < 1e-6, "d={d}: {fitted} {}", tw.omega());
        }
    }

    #[test]
    fn twisted_afe_matches_reference() {
        let chi = primitive_characters(5).into_iter().find(|c| c.order() == 2).unwrap();
        let rep = GL1Representation::new(chi.clone(), 0.0).unwrap();
        let tw = TwistedRepresentation::new(&rep, 12).unwrap();
        let prod = DirichletCharacter::kronecker(12).unwrap().mul(&chi);
        let s = c(0.75, 0.0);
        let a = tw.l_afe(s, &AfeParameters::numeric()).unwrap();
        let b = crate::lfunc::l_reference(&prod, s).unwrap();
        assert!((a - b).norm() < 1e-9, "{a} {b}");
        assert!(TwistedRepresentation::new(&rep, 15).is_err());
        assert!(TwistedRepresentation::new(&rep, 9).is_err());
    }
}
