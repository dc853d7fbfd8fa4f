//! Complex special functions: log-Gamma, half-Gamma ratios, the rebalancing
//! weight `ξ`, the smoothing weights `V_s` / `V*_{1−s}` of the approximate
//! functional equation, and the Gaussian inverse-Mellin weight.

pub mod dd;
mod weight;

pub use weight::{weight_v, weight_v_on_line, VKernel, VTable};

#[allow(unused_imports)]
use num_traits::Float as _;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::{Error, Result};

/// `½ ln(2π)`.
const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_8;

/// `B_{2k} / (2k(2k−1))` for `k = 1..=10`.
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43_867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
];

/// Below this modulus (or left of the imaginary axis) the argument is shifted
/// before the asymptotic series is used.
const STIRLING_RADIUS: f64 = 15.0;

fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

fn stirling_series(z: Complex64) -> Complex64 {
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut acc = Complex64::new(0.0, 0.0);
    for &c in STIRLING.iter().rev() {
        acc = acc * inv2 + c;
    }
    (z - 0.5) * z.ln() - z + HALF_LN_TWO_PI + acc * inv
}

/// Principal branch of `log Γ(z)`, continuous on `C \ (−∞, 0]`.
///
/// On the negative real axis the value is the limit from above.
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(crate::error::domain!("log_gamma argument is not finite: {z}"));
    }
    if is_nonpositive_integer(z) {
        return Err(Error::Pole(alloc::format!("log_gamma({})", z.re)));
    }
    let shift = if z.im.abs() >= STIRLING_RADIUS {
        (-z.re).max(0.0).ceil()
    } else {
        (STIRLING_RADIUS - z.re).max(0.0).ceil()
    } as u32;
    // log Γ(z) = log Γ(z + N) − Σ log(z + k), one principal log per factor so
    // that the branch stays continuous.
    let mut correction = Complex64::new(0.0, 0.0);
    for k in 0..shift {
        let zk = z + k as f64;
        let zk = if zk.im == 0.0 {
            Complex64::new(zk.re, 0.0)
        } else {
            zk
        };
        correction += zk.ln();
    }
    Ok(stirling_series(z + shift as f64) - correction)
}

/// `Γ((1 − s + κ̄)/2) / Γ((s + κ)/2)`, combined in log space.
pub fn gamma_ratio_half(s: Complex64, kappa: Complex64) -> Result<Complex64> {
    let num = log_gamma((1.0 - s + kappa.conj()) / 2.0)?;
    let den = log_gamma((s + kappa) / 2.0)?;
    Ok((num - den).exp())
}

/// Shape parameters of the approximate functional equation.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AfeParameters {
    pub a: f64,
    pub b: u32,
    pub alpha: f64,
    pub beta: f64,
    pub s0: Complex64,
    pub c_v: f64,
    pub d_ref: f64,
}

impl AfeParameters {
    /// `A = 2, B = 16, s₀ = −1, c_V = 2`, with `α = 0` and `β = 1/16`.
    pub fn paper() -> Self {
        AfeParameters {
            a: 2.0,
            b: 16,
            alpha: 0.0,
            beta: 1.0 / 16.0,
            s0: Complex64::new(-1.0, 0.0),
            c_v: 2.0,
            d_ref: 1.0,
        }
    }

    /// `A = 6, B = 24, s₀ = −1, c_V = 1`, `α = β = 0`: a much sharper cutoff,
    /// so the two Dirichlet sums can be truncated after few terms.
    pub fn numeric() -> Self {
        AfeParameters {
            a: 6.0,
            b: 24,
            alpha: 0.0,
            beta: 0.0,
            s0: Complex64::new(-1.0, 0.0),
            c_v: 1.0,
            d_ref: 1.0,
        }
    }

    pub fn with_beta(mut self, beta: f64) -> Self {
        self.beta = beta;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidParameters(alloc::format!("AFE parameters: {msg}")));
        if !(self.a > 0.0 && self.a.is_finite()) {
            return bad("A must be positive");
        }
        if self.b == 0 {
            return bad("B must be a positive integer");
        }
        if !(self.beta.abs() < 1.0) || !self.alpha.is_finite() {
            return bad("need |beta| < 1 and finite alpha");
        }
        if !(self.s0.re < 0.0) {
            return bad("need Re(s0) < 0");
        }
        if !(self.c_v > 0.0 && self.c_v < PI * self.a / 3.0) {
            return bad("need 0 < c_V < pi A / 3");
        }
        if !(self.d_ref > 0.0 && self.d_ref.is_finite()) {
            return bad("D_ref must be positive");
        }
        Ok(())
    }

    /// `log ξ(s) = 2α log D + β Log((s − s₀)²)`.
    pub fn log_xi(&self, s: Complex64) -> Result<Complex64> {
        if !(s.re > 0.0) {
            return Err(crate::error::domain!("xi needs Re(s) > 0, got {s}"));
        }
        let z = (s - self.s0) * (s - self.s0);
        if z.im == 0.0 && z.re <= 0.0 {
            return Err(Error::Branch(alloc::format!("(s - s0)^2 = {z}")));
        }
        Ok(2.0 * self.alpha * self.d_ref.ln() + self.beta * z.ln())
    }
}

/// `ξ(s) = D^{2α} exp(β Log((s − s₀)²))`.
pub fn xi_eval(p: &AfeParameters, s: Complex64) -> Result<Complex64> {
    Ok(p.log_xi(s)?.exp())
}

/// Numerical recipe for the right-hand-side contour integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct QuadratureSpec {
    pub t_max: f64,
    pub nodes: usize,
    pub prime_cutoff: u64,
    pub abscissa: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self::fig1_full()
    }
}

impl QuadratureSpec {
    /// `|Im s| ≤ 1000`, 200001 points, primes below 30000, `Re s = 3/4`.
    pub fn fig1_full() -> Self {
        QuadratureSpec {
            t_max: 1000.0,
            nodes: 200_001,
            prime_cutoff: 30_000,
            abscissa: 0.75,
        }
    }

    pub fn fig1_desk() -> Self {
        QuadratureSpec {
            t_max: 300.0,
            nodes: 60_001,
            prime_cutoff: 10_000,
            abscissa: 0.75,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes < 3 || self.nodes % 2 == 0 {
            return Err(Error::QuadratureSpecInvalid(alloc::format!(
                "node count must be odd and at least 3, got {}",
                self.nodes
            )));
        }
        if !(self.t_max > 0.0 && self.t_max.is_finite()) {
            return Err(Error::QuadratureSpecInvalid("t_max must be positive".into()));
        }
        if self.prime_cutoff < 2 {
            return Err(Error::QuadratureSpecInvalid("prime cutoff must be at least 2".into()));
        }
        if !self.abscissa.is_finite() {
            return Err(Error::QuadratureSpecInvalid("abscissa must be finite".into()));
        }
        Ok(())
    }

    /// Node spacing of the endpoint-inclusive grid on `[−t_max, t_max]`.
    pub fn step(&self) -> f64 {
        2.0 * self.t_max / (self.nodes - 1) as f64
    }

    pub fn node(&self, k: usize) -> f64 {
        -self.t_max + k as f64 * self.step()
    }
}

/// `e^{−u²}`, the inverse Mellin transform of `Γ(s/2)/2`.
pub fn gaussian_weight(u: f64) -> f64 {
    (-u * u).exp()
}

/// `Q(s) = q |s + κ| / (2πe)`.
pub fn reduced_conductor(q: f64, s: Complex64, kappa: Complex64) -> f64 {
    q * (s + kappa).norm() / (2.0 * PI * core::f64::consts::E)
}
