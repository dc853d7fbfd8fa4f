//! Both sides of the murmuration asymptotics for `φ ⊗ χ_d`, `d ∈ F`.

#[allow(unused_imports)]
use num_traits::Float as _;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use num_rational::Ratio;

use crate::arith::{kronecker_table, PrimeTable};
use crate::complexfn::QuadratureSpec;
use crate::discriminants::DiscriminantFamily;
use crate::lfunc::afe::twisted_root_number;
use crate::lfunc::GL1Representation;
use crate::sum::Pairwise;
use crate::{Error, Result};

mod rhs;

pub use rhs::{rhs_integral, RhsIntegrand, RhsMode, RhsPlan, BLOCK};

/// How `ω_F` is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum OmegaMode {
    /// Average of the individual root numbers.
    Exact,
    /// `i^{−κ_χ} τ(χ)/√q · (qD/π)^{iτ} χ_d(q) χ(ℓ)`.
    Leading,
}

/// `ω_F`, the family average of `ω_{φ⊗χ_d}`.
pub fn omega_family(rep: &GL1Representation, family: &DiscriminantFamily, mode: OmegaMode) -> Result<Complex64> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    match mode {
        OmegaMode::Exact => {
            let sum: Complex64 = family
                .members
                .iter()
                .map(|&d| twisted_root_number(rep, d))
                .collect::<Pairwise<_>>()
                .finish();
            Ok(sum / family.len() as f64)
        }
        OmegaMode::Leading => {
            let q = rep.conductor() as f64;
            let scale = Complex64::new(0.0, rep.tau() * (q * family.d1 / PI).ln()).exp();
            let chi_ell = rep.chi().value_u(family.residue);
            Ok(rep.root_data().omega_chi * scale * family.kronecker_at_modulus() as f64 * chi_ell)
        }
    }
}

/// Optimised exponents as functions of `δ = log #F / log D`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExponentSchedule {
    pub delta: Ratio<i64>,
    pub alpha_hat: Ratio<i64>,
    /// The sharp-cutoff exponents exist only for `5/6 < δ < 1`.
    pub beta_hat: Option<Ratio<i64>>,
    pub gamma_hat: Option<Ratio<i64>>,
    pub rho_hat: Option<Ratio<i64>>,
    pub rho: Option<Ratio<i64>>,
    pub rho_hat_f: Ratio<i64>,
    pub lambda: Ratio<i64>,
}

fn abs(r: Ratio<i64>) -> Ratio<i64> {
    if r < Ratio::from_integer(0) {
        -r
    } else {
        r
    }
}

/// Exact evaluation for `3/4 < δ < 1`.
pub fn exponent_schedule(delta: Ratio<i64>) -> Result<ExponentSchedule> {
    let r = |n: i64, d: i64| Ratio::new(n, d);
    if !(delta > r(3, 4) && delta < r(1, 1)) {
        return Err(crate::error::domain!("delta must lie in (3/4, 1), got {delta}"));
    }
    let one = r(1, 1);
    let e = delta - r(5, 6);
    let sharp = delta > r(5, 6);
    let rho_hat_f = if r(3, 4) - delta > delta - one {
        r(3, 4) - delta
    } else {
        delta - one
    };
    let rho_hat = if delta <= r(13, 14) { -r(3, 4) * e } else { delta - one };
    Ok(ExponentSchedule {
        delta,
        alpha_hat: r(0, 1),
        beta_hat: sharp.then(|| (r(2, 1) - r(3, 1) * e) / (r(24, 1) + r(36, 1) * e)),
        gamma_hat: sharp.then(|| r(1, 2) + r(3, 4) * e),
        rho_hat: sharp.then_some(rho_hat),
        rho: sharp.then(|| r(-1, 14) + r(1, 8) * (delta - r(13, 14)) + r(7, 8) * abs(delta - r(13, 14))),
        rho_hat_f,
        lambda: r(1, 6),
    })
}

/// `A(n) = Σ_{d ∈ F} χ_d(n)` for `0 ≤ n ≤ n_max`, exactly.
pub fn family_character_sums(family: &DiscriminantFamily, n_max: usize) -> Vec<i32> {
    let sieve = PrimeTable::new((n_max as u64).max(2));
    let mut acc = vec![0i32; n_max + 1];
    for &d in &family.members {
        for (a, k) in acc.iter_mut().zip(kronecker_table(d as i64, n_max, &sieve)) {
            *a += k as i32;
        }
    }
    acc
}

/// `b(n) = n^{iτ} χ(n) A(n)` at the `n ≤ n_max` where it is nonzero.
fn averaged_terms(rep: &GL1Representation, family: &DiscriminantFamily, n_max: usize) -> Vec<(u64, Complex64)> {
    family_character_sums(family, n_max)
        .into_iter()
        .enumerate()
        .skip(1)
        .filter(|&(_, a)| a != 0)
        .filter_map(|(n, a)| {
            let c = rep.coefficient(n as u64);
            (c != Complex64::new(0.0, 0.0)).then(|| (n as u64, c * a as f64))
        })
        .collect()
}

fn check_sharp_points(xs: &[f64]) -> Result<()> {
    for &x in xs {
        if !(x > 1.0 && x.is_finite()) || x == x.floor() {
            return Err(crate::error::domain!("sharp sums need non-integer x > 1, got {x}"));
        }
    }
    Ok(())
}

/// `(1/#F) Σ_d x^{−1/2} Σ_{n<x} n^{iτ} χ(n) χ_d(n)` at every `x` in `xs`.
pub fn lhs_sharp_grid(rep: &GL1Representation, family: &DiscriminantFamily, xs: &[f64]) -> Result<Vec<Complex64>> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    check_sharp_points(xs)?;
    let n_max = xs.iter().fold(1.0f64, |m, &x| m.max(x.floor())) as usize;
    let terms = averaged_terms(rep, family, n_max);
    // Partial sums at the sorted cut points, one pairwise segment at a time.
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut out = vec![Complex64::new(0.0, 0.0); xs.len()];
    let mut running = Complex64::new(0.0, 0.0);
    let mut idx = 0;
    for &i in &order {
        let bound = xs[i].floor() as u64;
        let mut seg = Pairwise::new();
        while idx < terms.len() && terms[idx].0 <= bound {
            seg.push(terms[idx].1);
            idx += 1;
        }
        running += seg.finish();
        out[i] = running / (xs[i].sqrt() * family.len() as f64);
    }
    Ok(out)
}

pub fn lhs_sharp(rep: &GL1Representation, family: &DiscriminantFamily, x: f64) -> Result<Complex64> {
    Ok(lhs_sharp_grid(rep, family, &[x])?[0])
}

/// `N(x) = ⌈x √(40 log 10)⌉`: beyond it `e^{−(n/x)²} < 10⁻⁴⁰`.
pub fn smoothed_length(x: f64) -> usize {
    (x * (40.0 * core::f64::consts::LN_10).sqrt()).ceil() as usize
}

/// `(1/#F) Σ_d x^{−1/2} Σ_n e^{−(n/x)²} n^{iτ} χ(n) χ_d(n)` at every `x`.
pub fn lhs_smoothed_grid(rep: &GL1Representation, family: &DiscriminantFamily, xs: &[f64]) -> Result<Vec<Complex64>> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    for &x in xs {
        if !(x > 0.0 && x.is_finite()) {
            return Err(crate::error::domain!("need x > 0, got {x}"));
        }
    }
    let n_max = xs.iter().map(|&x| smoothed_length(x)).max().unwrap_or(1).max(1);
    let terms = averaged_terms(rep, family, n_max);
    Ok(xs
        .iter()
        .map(|&x| {
            let cut = smoothed_length(x) as u64;
            let sum = terms
                .iter()
                .take_while(|(n, _)| *n <= cut)
                .map(|&(n, b)| {
                    let u = n as f64 / x;
                    b * (-u * u).exp()
                })
                .collect::<Pairwise<_>>()
                .finish();
            sum / (x.sqrt() * family.len() as f64)
        })
        .collect())
}

pub fn lhs_smoothed(rep: &GL1Representation, family: &DiscriminantFamily, x: f64) -> Result<Complex64> {
    Ok(lhs_smoothed_grid(rep, family, &[x])?[0])
}

/// One point of a comparison sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ComparisonRow {
    pub x: f64,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub residual: Complex64,
}

impl ComparisonRow {
    pub fn new(x: f64, lhs: Complex64, rhs: Complex64) -> Self {
        ComparisonRow {
            x,
            lhs,
            rhs,
            residual: lhs - rhs,
        }
    }
}

/// `‖lhs − rhs‖₂ / ‖rhs‖₂` over the rows.
pub fn l2_residual_ratio(rows: &[ComparisonRow]) -> f64 {
    let num: f64 = rows.iter().map(|r| r.residual.norm_sqr()).sum();
    let den: f64 = rows.iter().map(|r| r.rhs.norm_sqr()).sum();
    (num / den).sqrt()
}

/// `points` equispaced values on `[lo, hi]·qD/π`.
pub fn sweep_grid(rep: &GL1Representation, family: &DiscriminantFamily, lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let centre = rep.conductor() as f64 * family.d1 / PI;
    match points {
        0 => Vec::new(),
        1 => vec![lo * centre],
        _ => (0..points)
            .map(|k| (lo + (hi - lo) * k as f64 / (points - 1) as f64) * centre)
            .collect(),
    }
}

/// Left-hand side of the chosen mode on a grid.
pub fn lhs_grid(rep: &GL1Representation, family: &DiscriminantFamily, xs: &[f64], mode: RhsMode) -> Result<Vec<Complex64>> {
    match mode {
        RhsMode::Sharp => lhs_sharp_grid(rep, family, xs),
        RhsMode::Smoothed => lhs_smoothed_grid(rep, family, xs),
    }
}

/// Pair a tabulated main term with the matching averages on `xs`.
pub fn compare_with(
    rep: &GL1Representation,
    family: &DiscriminantFamily,
    xs: &[f64],
    integrand: &RhsIntegrand,
) -> Result<Vec<ComparisonRow>> {
    if xs.is_empty() {
        return Err(crate::error::domain!("empty x grid"));
    }
    if xs.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(crate::error::domain!("x grid must be strictly ascending"));
    }
    let lhs = lhs_grid(rep, family, xs, integrand.mode())?;
    xs.iter()
        .zip(lhs)
        .map(|(&x, l)| Ok(ComparisonRow::new(x, l, integrand.eval(x)?)))
        .collect()
}

/// Both sides on an ascending grid.
pub fn compare_sweep(
    rep: &GL1Representation,
    family: &DiscriminantFamily,
    xs: &[f64],
    spec: &QuadratureSpec,
    mode: RhsMode,
) -> Result<Vec<ComparisonRow>> {
    let integrand = RhsIntegrand::build(rep, family, spec, mode)?;
    compare_with(rep, family, xs, &integrand)
}
