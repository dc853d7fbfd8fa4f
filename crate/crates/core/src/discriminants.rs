//! Positive fundamental discriminants: classification, families in residue
//! classes, power sums with their asymptotic main terms, and a second-moment
//! probe for character sums over the family.

#[allow(unused_imports)]
use num_traits::Float as _;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use num_rational::Ratio;

use crate::arith::{gcd, is_squarefree, kronecker, prime_divisors, totient};
use crate::sum::{pairwise, Pairwise};
use crate::{Error, Result};

/// The three disjoint shapes of a positive fundamental discriminant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FundamentalClass {
    /// `d` squarefree, `d ≡ 1 mod 4`.
    OneModFour,
    /// `d = 8ℓ`, `ℓ` odd squarefree (`d ≡ 8 mod 16`).
    EightOdd,
    /// `d = 4ℓ`, `ℓ` squarefree `≡ 3 mod 4` (`d ≡ 12 mod 16`).
    FourThreeModFour,
}

pub fn classify(d: u64) -> Option<FundamentalClass> {
    if d == 0 {
        return None;
    }
    if d % 4 == 1 && is_squarefree(d) {
        Some(FundamentalClass::OneModFour)
    } else if d % 8 == 0 && (d / 8) % 2 == 1 && is_squarefree(d / 8) {
        Some(FundamentalClass::EightOdd)
    } else if d % 4 == 0 && (d / 4) % 4 == 3 && is_squarefree(d / 4) {
        Some(FundamentalClass::FourThreeModFour)
    } else {
        None
    }
}

pub fn is_fundamental(d: u64) -> bool {
    classify(d).is_some()
}

/// Squarefree flags for the integers in `[lo, hi)`.
pub fn squarefree_window(lo: u64, hi: u64) -> Vec<bool> {
    let lo = lo.max(1);
    if hi <= lo {
        return Vec::new();
    }
    let mut flags = vec![true; (hi - lo) as usize];
    let root = {
        let mut r = (hi as f64).sqrt() as u64;
        while r * r >= hi {
            r -= 1;
        }
        while (r + 1) * (r + 1) < hi {
            r += 1;
        }
        r
    };
    // Plain sieve of primes up to √hi.
    let mut composite = vec![false; root as usize + 1];
    for p in 2..=root {
        if composite[p as usize] {
            continue;
        }
        let mut k = p * p;
        while k <= root {
            composite[k as usize] = true;
            k += p;
        }
        let sq = p * p;
        let mut m = lo.div_ceil(sq) * sq;
        while m < hi {
            flags[(m - lo) as usize] = false;
            m += sq;
        }
    }
    flags
}

/// Fundamental discriminants in `[lo, hi)`, ascending, with their class.
pub fn fundamental_in_range(lo: u64, hi: u64) -> Vec<(u64, FundamentalClass)> {
    let lo = lo.max(1);
    if hi <= lo {
        return Vec::new();
    }
    let base = lo / 8;
    let sf = squarefree_window(base.max(1), hi);
    let is_sf = |n: u64| sf[(n - base.max(1)) as usize];
    let mut out = Vec::new();
    for d in lo..hi {
        let class = match d % 16 {
            1 | 5 | 9 | 13 if is_sf(d) => FundamentalClass::OneModFour,
            8 if is_sf(d / 8) => FundamentalClass::EightOdd,
            12 if is_sf(d / 4) => FundamentalClass::FourThreeModFour,
            _ => continue,
        };
        out.push((d, class));
    }
    out
}

/// `q* = 4q` when `2 ∥ q`, else `q`.
pub fn q_star(q: u64) -> u64 {
    if q % 4 == 2 {
        4 * q
    } else {
        q
    }
}

/// Positive fundamental discriminants `D₀ < d < D` with `d ≡ ℓ mod q*`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DiscriminantFamily {
    pub d0: f64,
    pub d1: f64,
    pub base_modulus: u64,
    pub residue: u64,
    pub q_star: u64,
    pub members: Vec<u64>,
}

impl DiscriminantFamily {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// `ΔD = D − D₀`.
    pub fn width(&self) -> f64 {
        self.d1 - self.d0
    }

    /// `χ_d(q)`, the same for every member since `(d/·)` at `q` only depends
    /// on `d mod q*`.
    pub fn kronecker_at_modulus(&self) -> i32 {
        kronecker(self.residue as i64, self.base_modulus)
    }
}

fn integer_bounds(d0: f64, d1: f64) -> (u64, u64) {
    // Strict inequalities on both ends.
    let lo = d0.floor() as u64 + 1;
    let hi = if d1 == d1.floor() {
        d1 as u64
    } else {
        d1.floor() as u64 + 1
    };
    (lo, hi.max(lo))
}


pub fn enumerate_family(d0: f64, d1: f64, q: u64, ell: i64) -> Result<DiscriminantFamily> {
    if q == 0 {
        return Err(Error::InvalidParameters("modulus must be positive".into()));
    }
    if !(d0 >= 1.0 && d1 >= d0 && d1.is_finite()) {
        return Err(Error::InvalidParameters(alloc::format!(
            "family bounds must satisfy 1 ≤ D₀ ≤ D, got ({d0}, {d1})"
        )));
    }
    let qs = q_star(q);
    let residue = ell.rem_euclid(qs as i64) as u64;
    if gcd(residue, qs) != 1 {
        return Err(Error::InvalidResidue {
            residue,
            modulus: qs,
        });
    }
    let (lo, hi) = integer_bounds(d0, d1);
    let members = fundamental_in_range(lo, hi)
        .into_iter()
        .map(|(d, _)| d)
        .filter(|d| d % qs == residue)
        .collect();
    Ok(DiscriminantFamily {
        d0,
        d1,
        base_modulus: q,
        residue,
        q_star: qs,
        members,
    })
}

/// `η_{m,f,ℓ} = ½[4∤f] + [4|f, ℓ ≡ 1 mod 4] + ¼[(mf, 2) = 1]`.
pub fn eta_coefficient(m: u64, f: u64, ell: i64) -> Ratio<i64> {
    let mut eta = Ratio::from_integer(0);
    if f % 4 != 0 {
        eta += Ratio::new(1, 2);
    }
    if f % 4 == 0 && ell.rem_euclid(4) == 1 {
        eta += Ratio::from_integer(1);
    }
    if (m * f) % 2 == 1 {
        eta += Ratio::new(1, 4);
    }
    eta
}

fn ratio_to_f64(r: Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// `∏_{p | n} p/(p+1)`.
pub fn local_density(n: u64) -> f64 {
    prime_divisors(n)
        .into_iter()
        .map(|p| p as f64 / (p as f64 + 1.0))
        .product()
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PowerSumResult {
    pub brute: Complex64,
    pub main: Complex64,
    pub eta: Ratio<i64>,
    pub error_scale: f64,
}

/// `Σ*_{0<d<X, d≡ℓ (q), (d,m)=1} d^z` and its main term
/// `η_{m,q,ℓ} X^{z+1}/(z+1) · 6/(π²φ(q)) · ∏_{p|4qm} p/(p+1)`.
pub fn disc_power_sum(d_max: f64, q: u64, ell: i64, m: u64, z: Complex64) -> Result<PowerSumResult> {
    if z.re <= -0.5 {
        return Err(crate::error::domain!("power-sum exponent needs Re z > -1/2, got {z}"));
    }
    if q == 0 || m == 0 || !(d_max > 0.0) {
        return Err(Error::InvalidParameters("q, m and d_max must be positive".into()));
    }
    let residue = ell.rem_euclid(q as i64) as u64;
    if gcd(residue, q) != 1 {
        return Err(Error::InvalidResidue { residue, modulus: q });
    }
    let (_, hi) = integer_bounds(0.0, d_max);
    let brute = pairwise(
        fundamental_in_range(1, hi)
            .into_iter()
            .filter(|&(d, _)| d % q == residue && gcd(d, m) == 1)
            .map(|(d, _)| (z * (d as f64).ln()).exp()),
    );
    let eta = eta_coefficient(m, q, ell);
    let zp1 = z + 1.0;
    let main = (zp1 * d_max.ln()).exp() / zp1
        * (ratio_to_f64(eta) * 6.0 / (PI * PI * totient(q) as f64) * local_density(4 * q * m));
    Ok(PowerSumResult {
        brute,
        main,
        eta,
        error_scale: d_max.powf(z.re + 0.5),
    })
}

/// Main term for `#F`: `ΔD · 6η_{q,q,ℓ}/(π²φ(q)) · ∏_{p|2q} p/(p+1)`.
pub fn family_size_main(family: &DiscriminantFamily) -> f64 {
    let q = family.base_modulus;
    let eta = eta_coefficient(q, q, family.residue as i64);
    family.width() * 6.0 * ratio_to_f64(eta) / (PI * PI * totient(q) as f64)
        * local_density(2 * q)
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SecondMomentProbe {
    pub lhs: f64,
    /// `(f N X (log X)⁴ log N, f^{1/3} N^{1/2} X min{X^{1/7}, f^{2/3}})`.
    pub bound_terms: (f64, f64),
}

impl SecondMomentProbe {
    pub fn ratio(&self) -> f64 {
        self.lhs / (self.bound_terms.0 + self.bound_terms.1)
    }
}

/// `Σ_{n<N, n≠□, (n,f)=1} |Σ*_{d<X, d≡ℓ (f)} χ_d(n)|²` by brute force.
pub fn second_moment_probe(n_max: f64, d_max: f64, f: u64, ell: i64) -> Result<SecondMomentProbe> {
    if !(n_max >= 4.0) || !(d_max > 3.0) {
        return Err(crate::error::domain!("second-moment probe needs N ≥ 4 and X > 3"));
    }
    if f == 0 {
        return Err(Error::InvalidParameters("modulus must be positive".into()));
    }
    let residue = ell.rem_euclid(f as i64) as u64;
    if gcd(residue, f) != 1 {
        return Err(Error::InvalidResidue { residue, modulus: f });
    }
    let (_, d_hi) = integer_bounds(0.0, d_max);
    let (_, n_hi) = integer_bounds(0.0, n_max);
    let ds: Vec<u64> = fundamental_in_range(1, d_hi)
        .into_iter()
        .map(|(d, _)| d)
        .filter(|d| d % f == residue)
        .collect();
    let mut acc = Pairwise::new();
    for n in 1..n_hi {
        let r = (n as f64).sqrt() as u64;
        let square = (r.saturating_sub(1)..=r + 1).any(|k| k * k == n);
        if square || gcd(n, f) != 1 {
            continue;
        }
        let s: i64 = ds.iter().map(|&d| kronecker(d as i64, n) as i64).sum();
        acc.push((s * s) as f64);
    }
    let ff = f as f64;
    let log_x = d_max.ln();
    let b1 = ff * n_max * d_max * log_x.powi(4) * n_max.ln();
    let b2 = ff.cbrt() * n_max.sqrt() * d_max * d_max.powf(1.0 / 7.0).min(ff.powf(2.0 / 3.0));
    Ok(SecondMomentProbe {
        lhs: acc.finish(),
        bound_terms: (b1, b2),
    })
}

/// Counts of fundamental `d ≤ D` in the classes `1 mod 4`, `8 mod 16`,
/// `12 mod 16`.
pub fn class_counts(d_max: u64) -> [u64; 3] {
    let mut counts = [0u64; 3];
    for (_, c) in fundamental_in_range(1, d_max + 1) {
        counts[match c {
            FundamentalClass::OneModFour => 0,
            FundamentalClass::EightOdd => 1,
            FundamentalClass::FourThreeModFour => 2,
        }] += 1;
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classification_examples() {
        assert!(is_fundamental(1));
        assert!(is_fundamental(12));
        assert!(!is_fundamental(9));
        assert!(!is_fundamental(4));
        assert!(is_fundamental(8));
        assert_eq!(classify(12), Some(FundamentalClass::FourThreeModFour));
        assert_eq!(classify(40), Some(FundamentalClass::EightOdd));
        assert_eq!(classify(16), None);
        assert_eq!(classify(20), None);
    }

    #[test]
    fn window_sieve_matches_classifier() {
        for (lo, hi) in [(1u64, 2000u64), (99_000, 101_000), (17, 18), (5, 5)] {
            let fast: Vec<u64> = fundamental_in_range(lo, hi).into_iter().map(|x| x.0).collect();
            let slow: Vec<u64> = (lo..hi).filter(|&d| is_fundamental(d)).collect();
            assert_eq!(fast, slow, "[{lo},{hi})");
        }
    }

    #[test]
    fn small_family() {
        let f = enumerate_family(1.5, 50.0, 1, 0).unwrap();
        assert_eq!(
            f.members,
            vec![5, 8, 12, 13, 17, 21, 24, 28, 29, 33, 37, 40, 41, 44]
        );
        assert!(enumerate_family(2.0, 3.0, 1, 0).unwrap().is_empty());
    }

    #[test]
    fn fig1_family() {
        let f = enumerate_family(99_000.0, 101_000.0, 7, 1).unwrap();
        assert_eq!(f.len(), 89);
        assert_eq!(f.q_star, 7);
        let main = family_size_main(&f);
        assert!((main - 88.65).abs() < 0.01, "{main}");
    }

    #[test]
    fn q_star_rule() {
        assert_eq!(q_star(7), 7);
        assert_eq!(q_star(6), 24);
        assert_eq!(q_star(4), 4);
        assert_eq!(q_star(1), 1);
        assert!(matches!(
            enumerate_family(10.0, 100.0, 6, 3),
            Err(Error::InvalidResidue { .. })
        ));
    }

    #[test]
    fn eta_examples() {
        assert_eq!(eta_coefficient(1, 1, 1), Ratio::new(3, 4));
        assert_eq!(eta_coefficient(7, 7, 1), Ratio::new(3, 4));
        // 5 ≡ 1 mod 4 with 4 | 8: only the middle indicator fires.
        assert_eq!(eta_coefficient(2, 8, 5), Ratio::from_integer(1));
        assert_eq!(eta_coefficient(2, 8, 3), Ratio::from_integer(0));
        assert_eq!(eta_coefficient(1, 4, 1), Ratio::from_integer(1));
    }

    #[test]
    fn power_sum_main_for_trivial_modulus() {
        let r = disc_power_sum(1e4, 1, 0, 1, Complex64::new(0.0, 0.0)).unwrap();
        assert!((r.main.re - 3e4 / (PI * PI)).abs() < 1e-9);
        assert!(disc_power_sum(1e4, 1, 0, 1, Complex64::new(-0.5, 0.0)).is_err());
    }

    #[test]
    fn second_moment_small() {
        let p = second_moment_probe(100.5, 500.5, 3, 1).unwrap();
        assert!(p.lhs > 0.0);
        assert!(p.ratio() <= 10.0);
        assert!(second_moment_probe(3.5, 500.5, 3, 1).is_err());
    }
}
