//! Euler products attached to `φ^{(2)}`: the local murmuration product, the
//! identity expressing `Σ a_φ(n²) n^{−2s} ∏ p/(p+1)` as an L-ratio times a
//! convergent product, the residue term and the mean-value main term.

#[allow(unused_imports)]
use num_traits::Float as _;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use super::line::tail_bound;
use super::{l_reference, removed_factor, GL1Representation};
use crate::arith::PrimeTable;
use crate::characters::DirichletCharacter;
use crate::discriminants::DiscriminantFamily;
use crate::sum::Pairwise;
use crate::Result;

/// A truncated product together with a bound on the neglected tail of its
/// logarithm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductValue {
    pub value: Complex64,
    pub tail: f64,
}

/// `1 − 1/((p+1)(1 − z))`.
fn local_factor(p: u64, z: Complex64) -> Complex64 {
    1.0 - 1.0 / ((p as f64 + 1.0) * (1.0 - z))
}

/// Primes `p < cutoff` with `p ∤ m`.
fn primes_below(cutoff: u64, m: u64) -> Vec<u64> {
    let table = PrimeTable::new(cutoff.max(2));
    table
        .primes()
        .iter()
        .copied()
        .filter(|&p| p < cutoff && m % p != 0)
        .collect()
}

/// `∏_{p ∤ 2q, p < P} (1 − 1/((p+1)(1 − χ²(p) p^{3−2s+2iτ})))`.
pub fn local_murmur_product(
    chi: &DirichletCharacter,
    tau: f64,
    s: Complex64,
    prime_cutoff: u64,
) -> ProductValue {
    let q = chi.modulus();
    let w = 3.0 - 2.0 * s + Complex64::new(0.0, 2.0 * tau);
    let psi = chi.square();
    let value = primes_below(prime_cutoff, 2 * q)
        .into_iter()
        .map(|p| local_factor(p, psi.value_u(p) * (w * (p as f64).ln()).exp()))
        .product();
    ProductValue {
        value,
        tail: tail_bound(prime_cutoff, w.re),
    }
}

/// `L(2s, φ^{(2)}) / L^{(2q)}(2s+1, φ^{(2)}) ∏_{p ∤ 2q, p < P}(1 − 1/((p+1)(1 − α(p)^{−2} p^{2s+1})))`
/// with `L(w, φ^{(2)}) = L(w − 2iτ, χ²)` and `α(p) = χ(p) p^{iτ}`.
fn square_ratio(rep: &GL1Representation, s: Complex64, prime_cutoff: u64) -> Result<ProductValue> {
    let q = rep.conductor();
    let shift = Complex64::new(0.0, 2.0 * rep.tau());
    let psi = rep.chi().square();
    let num = l_reference(&psi, 2.0 * s - shift)?;
    let den_arg = 2.0 * s + 1.0 - shift;
    let den = l_reference(&psi, den_arg)? * removed_factor(psi.values(), den_arg, 2 * q);
    let psi_bar = psi.conj();
    let w = 2.0 * s + 1.0 - shift;
    let prod: Complex64 = primes_below(prime_cutoff, 2 * q)
        .into_iter()
        .map(|p| local_factor(p, psi_bar.value_u(p) * (w * (p as f64).ln()).exp()))
        .product();
    Ok(ProductValue {
        value: num / den * prod,
        tail: tail_bound(prime_cutoff, w.re),
    })
}

/// Both sides of the Euler-product identity for `Σ a_φ(n²) n^{−2s}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerCheck {
    pub lhs: Complex64,
    pub rhs: Complex64,
    /// Crude bound on the Dirichlet-series tail beyond `N`.
    pub lhs_tail: f64,
    pub rhs_tail: f64,
}

impl EulerCheck {
    pub fn relative_gap(&self) -> f64 {
        (self.lhs - self.rhs).norm() / self.rhs.norm()
    }
}

/// `Σ_{n ≤ N} a_φ(n²) n^{−2s} ∏_{p | n, p ∤ 2q} p/(p+1)` against the product
/// form truncated at `P`.
pub fn euler_identity_check(
    rep: &GL1Representation,
    s: Complex64,
    n_max: u64,
    prime_cutoff: u64,
) -> Result<EulerCheck> {
    if !(s.re > 0.5) {
        return Err(crate::error::domain!("Euler identity needs Re s > 1/2, got {s}"));
    }
    if n_max == 0 {
        return Err(crate::error::domain!("need at least one term"));
    }
    let q = rep.conductor();
    let sieve = PrimeTable::new(n_max.max(2));
    // weight(n) = ∏_{p | n, p ∤ 2q} p/(p+1), built along least prime factors
    let mut weight = vec![1.0f64; n_max as usize + 1];
    for n in 2..=n_max as usize {
        let p = sieve.least_factor(n as u64).unwrap() as usize;
        let rest = n / p;
        weight[n] = if rest % p == 0 || (2 * q) as usize % p == 0 {
            weight[rest]
        } else {
            weight[rest] * p as f64 / (p as f64 + 1.0)
        };
    }
    let psi = rep.chi().square();
    let exponent = -2.0 * s + Complex64::new(0.0, 2.0 * rep.tau());
    let lhs = (1..=n_max)
        .filter_map(|n| {
            let v = psi.value_u(n);
            (v != Complex64::new(0.0, 0.0))
                .then(|| v * weight[n as usize] * (exponent * (n as f64).ln()).exp())
        })
        .collect::<Pairwise<_>>()
        .finish();
    let rhs = square_ratio(rep, s, prime_cutoff)?;
    let sigma2 = 2.0 * s.re;
    Ok(EulerCheck {
        lhs,
        rhs: rhs.value,
        lhs_tail: (n_max as f64).powf(1.0 - sigma2) / (sigma2 - 1.0),
        rhs_tail: rhs.tail,
    })
}

/// Main term of the family mean of `L(s, φ⊗χ_d)`, `1/2 < Re s < 1`.
pub fn mean_value_main(rep: &GL1Representation, s: Complex64, prime_cutoff: u64) -> Result<ProductValue> {
    if !(s.re > 0.5 && s.re < 1.0) {
        return Err(crate::error::domain!("mean value needs 1/2 < Re s < 1, got {s}"));
    }
    square_ratio(rep, s, prime_cutoff)
}

/// [`mean_value_main`] with the `p = 2` factor matched to the family: for even
/// `d` every `χ_d(n²)` with `n` even vanishes, so only the odd members see the
/// local factor `(1 − α(2)² 2^{−2s})^{−1}`.
pub fn mean_value_main_for_family(
    rep: &GL1Representation,
    family: &DiscriminantFamily,
    s: Complex64,
    prime_cutoff: u64,
) -> Result<ProductValue> {
    if family.is_empty() {
        return Err(crate::Error::EmptyFamily);
    }
    let main = mean_value_main(rep, s, prime_cutoff)?;
    let even = family.members.iter().filter(|&&d| d % 2 == 0).count() as f64 / family.len() as f64;
    let alpha2_sq = rep.coefficient(2) * rep.coefficient(2);
    let local = 1.0 - alpha2_sq * (-2.0 * s * 2f64.ln()).exp();
    Ok(ProductValue {
        value: main.value * ((1.0 - even) + even * local),
        tail: main.tail,
    })
}

/// The term added when `χ̄²` is trivial:
/// `ω_F (6/π²) (1 + [2∤q]/5)/(1 + 2iτ) (πx/qD)^{iτ} ∏_{p|q} p/(p+1) ∏_{p∤q} (1 + 1/((p+1)(p²−1)))`,
/// with `ω_F` in leading form and the last product over `p < P`.
pub fn residue_term(
    rep: &GL1Representation,
    family: &DiscriminantFamily,
    x: f64,
    prime_cutoff: u64,
) -> Result<Complex64> {
    if !rep.chi().square_is_trivial() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let omega_f = crate::murmur::omega_family(rep, family, crate::murmur::OmegaMode::Leading)?;
    Ok(omega_f * residue_factor(rep, family.d1, x, prime_cutoff))
}

/// [`residue_term`] without `ω_F`.
pub(crate) fn residue_factor(rep: &GL1Representation, d1: f64, x: f64, prime_cutoff: u64) -> Complex64 {
    let q = rep.conductor();
    let tau = rep.tau();
    let odd = if q % 2 == 1 { 1.2 } else { 1.0 };
    let at_q: f64 = crate::arith::prime_divisors(q)
        .into_iter()
        .map(|p| p as f64 / (p as f64 + 1.0))
        .product();
    let away: f64 = primes_below(prime_cutoff, q)
        .into_iter()
        .map(|p| {
            let p = p as f64;
            1.0 + 1.0 / ((p + 1.0) * (p * p - 1.0))
        })
        .product();
    let scale = Complex64::new(0.0, tau * (PI * x / (q as f64 * d1)).ln()).exp();
    6.0 / (PI * PI) * odd / Complex64::new(1.0, 2.0 * tau) * scale * at_q * away
}
