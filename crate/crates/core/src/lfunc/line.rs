//! Dirichlet series and prime products along a vertical line.
//!
//! Equispaced points `w_k = σ + i(t₀ + kΔ)` share every power `n^{−w_k}` up
//! to the rotation `n^{−iΔ}`, so a block of points costs one complex product
//! per term and point instead of an `exp`. Each block starts from exactly
//! computed powers, so the rounding drift is bounded by the block length and
//! results do not depend on how blocks are scheduled.

#[allow(unused_imports)]
use num_traits::Float as _;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::{em_length, em_tail};
use crate::sum::Pairwise;
use crate::Result;

/// `Σ_n ψ(n) n^{−w}` on `Re w = σ` for `|Im w| ≤ t_bound`, `ψ` periodic.
#[derive(Debug, Clone)]
pub struct LineSeries {
    values: Vec<Complex64>,
    sigma: f64,
    n_len: u64,
    /// `(log n, ψ(n) n^{−σ})` for the nonzero head terms `n ≤ qN`.
    head: Vec<(f64, Complex64)>,
}

impl LineSeries {
    pub fn new(values: &[Complex64], sigma: f64, t_bound: f64) -> Self {
        let q = values.len() as u64;
        let n_len = em_length(t_bound);
        let head = (1..=n_len * q)
            .filter_map(|n| {
                let v = values[(n % q) as usize];
                (v != Complex64::new(0.0, 0.0)).then(|| {
                    let ln = (n as f64).ln();
                    (ln, v * (-sigma * ln).exp())
                })
            })
            .collect();
        LineSeries {
            values: values.to_vec(),
            sigma,
            n_len,
            head,
        }
    }

    fn finish(&self, head: Complex64, t: f64) -> Result<Complex64> {
        let w = Complex64::new(self.sigma, t);
        let (tail, mass) = em_tail(&self.values, self.n_len, w);
        let mut total = head + tail;
        if mass.norm() > 1e-12 {
            if w == Complex64::new(1.0, 0.0) {
                return Err(crate::Error::Pole("s = 1".into()));
            }
            total += mass / (self.values.len() as f64 * (w - 1.0));
        }
        Ok(total)
    }

    /// Value at `w = σ + it`.
    pub fn eval(&self, t: f64) -> Result<Complex64> {
        let head = self
            .head
            .iter()
            .map(|&(ln, c)| c * Complex64::new(0.0, -t * ln).exp())
            .collect::<Pairwise<_>>()
            .finish();
        self.finish(head, t)
    }

    /// Values at `t₀ + kΔ` for `k < count`.
    pub fn block(&self, t0: f64, dt: f64, count: usize) -> Result<Vec<Complex64>> {
        let mut cur: Vec<Complex64> = self
            .head
            .iter()
            .map(|&(ln, c)| c * Complex64::new(0.0, -t0 * ln).exp())
            .collect();
        let rot: Vec<Complex64> = self
            .head
            .iter()
            .map(|&(ln, _)| Complex64::new(0.0, -dt * ln).exp())
            .collect();
        let mut out = Vec::with_capacity(count);
        for k in 0..count {
            if k > 0 {
                for (c, r) in cur.iter_mut().zip(&rot) {
                    *c *= r;
                }
            }
            let head: Pairwise<Complex64> = cur.iter().copied().collect();
            out.push(self.finish(head.finish(), t0 + k as f64 * dt)?);
        }
        Ok(out)
    }
}

/// `∏_p (1 − 1/((p+1)(1 − ψ(p) p^{w})))` on `Re w = a > 0` over a fixed
/// prime set.
#[derive(Debug, Clone)]
pub struct PrimeProductLine {
    a: f64,
    /// `(log p, ψ(p) p^{a}, 1/(p+1))`
    entries: Vec<(f64, Complex64, f64)>,
    cutoff: u64,
}

impl PrimeProductLine {
    pub fn new(values: &[Complex64], primes: &[u64], a: f64) -> Self {
        let q = values.len() as u64;
        let entries = primes
            .iter()
            .map(|&p| {
                let ln = (p as f64).ln();
                (ln, values[(p % q) as usize] * (a * ln).exp(), 1.0 / (p as f64 + 1.0))
            })
            .collect();
        PrimeProductLine {
            a,
            entries,
            cutoff: primes.last().copied().unwrap_or(1),
        }
    }

    fn factor(z: Complex64, inv: f64) -> Complex64 {
        1.0 - inv / (1.0 - z)
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        self.entries
            .iter()
            .map(|&(ln, c, inv)| Self::factor(c * Complex64::new(0.0, t * ln).exp(), inv))
            .product()
    }

    /// Values at `Im w = t₀ + kΔ`.
    pub fn block(&self, t0: f64, dt: f64, count: usize) -> Vec<Complex64> {
        let mut cur: Vec<Complex64> = self
            .entries
            .iter()
            .map(|&(ln, c, _)| c * Complex64::new(0.0, t0 * ln).exp())
            .collect();
        let rot: Vec<Complex64> = self
            .entries
            .iter()
            .map(|&(ln, _, _)| Complex64::new(0.0, dt * ln).exp())
            .collect();
        let mut out = Vec::with_capacity(count);
        for k in 0..count {
            if k > 0 {
                for (c, r) in cur.iter_mut().zip(&rot) {
                    *c *= r;
                }
            }
            out.push(
                cur.iter()
                    .zip(&self.entries)
                    .map(|(&z, &(_, _, inv))| Self::factor(z, inv))
                    .product(),
            );
        }
        out
    }

    /// Bound on `|log(full product / truncated product)|`.
    pub fn tail_bound(&self) -> f64 {
        tail_bound(self.cutoff, self.a)
    }
}

/// `Σ_{p > P} 2/(p^{1+a})`, bounded by the integral `2 P^{−a}/(a log P)`.
pub(crate) fn tail_bound(cutoff: u64, a: f64) -> f64 {
    let p = (cutoff.max(2)) as f64;
    2.0 * p.powf(-a) / (a * p.ln())
}
