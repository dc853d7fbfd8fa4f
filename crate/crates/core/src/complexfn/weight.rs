//! The smoothing weights
//!
//! ```text
//! V_s(y) = (1/2πi) ∫_(c) Γ((s+w+κ)/2)/Γ((s+κ)/2) · (2cos(w/A) − 1)^{−B} · y^{−w} dw/w
//! ```
//!
//! and `V*_{1−s}` (same with `s → 1−s`, `κ → κ̄`).
//!
//! The integrand is analytic in `−Re(s+κ) < Re w < πA/3` apart from the simple
//! pole at `w = 0` with residue 1, so every vertical line in that strip gives
//! the same value up to that residue. A line close to the `(2cos(w/A) − 1)^{−B}`
//! pole at `w = πA/3` makes the integrand enormous and the trapezoid sum
//! cancels catastrophically in `f64`; production evaluation therefore uses
//! `Re w = min(c_V, πA/6, 1)` for `|y| ≥ 1` and a line left of the origin
//! (plus the residue) for `|y| < 1`, where `y^{−w}` is small on the line.
//!
//! The integrand is tabulated once per `(s, κ)` without the `y^{−w}` factor;
//! an evaluation is then a Horner sum in `exp(−i h log y)`.

#[allow(unused_imports)]
use num_traits::Float as _;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use super::{log_gamma, AfeParameters};
use crate::{Error, Result};

/// Relative size below which integrand nodes are dropped.
const NODE_TOL: f64 = 1e-18;
const MAX_NODES: usize = 400_000;

/// `log((2cos(w/A) − 1)^{−B})`, stable for large `|Im w|`.
fn log_psi(w: Complex64, a: f64, b: u32) -> Complex64 {
    let z = w / a;
    let base = if z.im.abs() > 30.0 {
        // 2cos z − 1 = e^{∓iz}(1 − e^{±iz} + e^{±2iz}) with |e^{±iz}| tiny.
        let sgn = z.im.signum();
        let lead = Complex64::new(0.0, -sgn) * z;
        let small = (Complex64::new(0.0, sgn) * z).exp();
        lead + (1.0 - small + small * small).ln()
    } else {
        (2.0 * z.cos() - 1.0).ln()
    };
    -(b as f64) * base
}

/// One vertical contour with its tabulated integrand (without `y^{−w}`).
#[derive(Debug, Clone)]
struct Contour {
    c: f64,
    h: f64,
    k_min: i64,
    /// `Γ-ratio · ψ / w` at `w = c + i k h`.
    f: Vec<Complex64>,
    /// `−w ·` the above, for the derivative in `log y`.
    g: Vec<Complex64>,
    residue: f64,
}

impl Contour {
    fn build(
        shift: Complex64,
        lg0: Complex64,
        a: f64,
        b: u32,
        c: f64,
        h: f64,
        residue: f64,
        tilt: f64,
    ) -> Result<Self> {
        let integrand = |t: f64| -> Result<Complex64> {
            let w = Complex64::new(c, t);
            let lg = log_gamma((shift + w) / 2.0)? - lg0;
            Ok((lg + log_psi(w, a, b)).exp() / w)
        };
        // Past the Gamma-factor's centre both factors decay exponentially.
        let t0 = shift.im.abs() + 5.0;
        let mut peak = 0f64;
        let mut collect = |dir: i64| -> Result<Vec<(i64, Complex64)>> {
            let mut out = Vec::new();
            let mut quiet = 0;
            let mut k: i64 = if dir > 0 { 0 } else { -1 };
            loop {
                let t = k as f64 * h;
                let v = integrand(t)?;
                let mag = v.norm() * (tilt * t.abs()).exp();
                peak = peak.max(mag);
                out.push((k, v));
                if t.abs() > t0 && mag < NODE_TOL * peak {
                    quiet += 1;
                    if quiet >= 20 {
                        break;
                    }
                } else {
                    quiet = 0;
                }
                if out.len() > MAX_NODES {
                    return Err(Error::QuadratureNonConvergence(alloc::format!(
                        "V integrand on Re w = {c} did not decay within {MAX_NODES} nodes"
                    )));
                }
                k += dir;
            }
            Ok(out)
        };
        let up = collect(1)?;
        let down = collect(-1)?;
        let k_min = down.last().map(|x| x.0).unwrap_or(0);
        let mut f: Vec<Complex64> = down.iter().rev().map(|x| x.1).collect();
        f.extend(up.iter().map(|x| x.1));
        let g = f
            .iter()
            .enumerate()
            .map(|(j, &v)| -v * Complex64::new(c, (k_min + j as i64) as f64 * h))
            .collect();
        Ok(Contour {
            c,
            h,
            k_min,
            f,
            g,
            residue,
        })
    }

    fn horner(coef: &[Complex64], z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &v in coef.iter().rev() {
            acc = acc * z + v;
        }
        acc
    }

    /// `(value, d value / d log y)` at `log y = ell`.
    fn eval(&self, ell: Complex64, with_derivative: bool) -> (Complex64, Complex64) {
        let i = Complex64::new(0.0, 1.0);
        let z = (-i * self.h * ell).exp();
        let pre = (-(self.c + i * (self.k_min as f64 * self.h)) * ell).exp() * (self.h / (2.0 * PI));
        let v = pre * Self::horner(&self.f, z) + self.residue;
        let d = if with_derivative {
            pre * Self::horner(&self.g, z)
        } else {
            Complex64::new(0.0, 0.0)
        };
        (v, d)
    }
}

/// `V_s` (or `V*_{1−s}`) for fixed `s`, `κ` and shape parameters.
#[derive(Debug, Clone)]
pub struct VKernel {
    right: Contour,
    left: Contour,
}

impl VKernel {
    /// Kernel for `V_s` (`conjugate = false`) or `V*_{1−s}` (`conjugate = true`).
    ///
    /// `tilt` bounds `|Im log y|` for later evaluations; it only affects where
    /// the tabulated integrand is truncated.
    pub fn new(p: &AfeParameters, s: Complex64, kappa: Complex64, conjugate: bool) -> Result<Self> {
        let tilt = p.beta.abs() * PI + 1e-3;
        Self::with_tilt(p, s, kappa, conjugate, tilt)
    }

    pub fn with_tilt(
        p: &AfeParameters,
        s: Complex64,
        kappa: Complex64,
        conjugate: bool,
        tilt: f64,
    ) -> Result<Self> {
        p.validate()?;
        let shift = if conjugate { 1.0 - s + kappa.conj() } else { s + kappa };
        if !(shift.re > 0.0) {
            return Err(crate::error::domain!(
                "V weight needs Re(s + kappa) > 0 on its side of the strip, got {shift}"
            ));
        }
        let lg0 = log_gamma(shift / 2.0)?;
        let wall = PI * p.a / 3.0;
        let c_r = p.c_v.min(wall / 2.0).min(1.0);
        let d_r = c_r.min(wall - c_r);
        let right = Contour::build(shift, lg0, p.a, p.b, c_r, (d_r / 15.0).min(0.05), 0.0, tilt)?;
        let c_l = -0.5 * wall.min(shift.re);
        let left = Contour::build(shift, lg0, p.a, p.b, c_l, (-c_l / 15.0).min(0.05), 1.0, tilt)?;
        Ok(VKernel { right, left })
    }

    fn contour(&self, ell: Complex64) -> &Contour {
        if ell.re >= 0.0 {
            &self.right
        } else {
            &self.left
        }
    }

    /// `V(y)` at `log y = ell` (complex `ell` allows complex `ξ`).
    pub fn eval_log(&self, ell: Complex64) -> Complex64 {
        self.contour(ell).eval(ell, false).0
    }

    /// `(V, dV/d log y)` at `log y = ell`.
    pub fn eval_log_with_derivative(&self, ell: Complex64) -> (Complex64, Complex64) {
        self.contour(ell).eval(ell, true)
    }

    pub fn eval(&self, y: f64) -> Complex64 {
        self.eval_log(Complex64::new(y.ln(), 0.0))
    }

    /// Abscissae of the two production contours `(right, left)`.
    pub fn abscissae(&self) -> (f64, f64) {
        (self.right.c, self.left.c)
    }

    /// Smallest `u` on a grid of step 1/20 with `|V(e^{u'+iμ})| < tol` for
    /// every grid point `u' ∈ [u, u + 3]`.
    pub fn cutoff(&self, mu: f64, tol: f64) -> f64 {
        let step = 0.05;
        let window = 60;
        let mut u = 0.0;
        let mut quiet = 0;
        let mut start = u;
        for _ in 0..20_000 {
            let v = self.eval_log(Complex64::new(u, mu)).norm();
            if v < tol {
                if quiet == 0 {
                    start = u;
                }
                quiet += 1;
                if quiet >= window {
                    return start;
                }
            } else {
                quiet = 0;
            }
            u += step;
        }
        u
    }
}

/// Piecewise cubic Hermite table of `V` along `log y = u + iμ`, `μ` fixed.
#[derive(Debug, Clone)]
pub struct VTable {
    kernel: VKernel,
    mu: f64,
    u_min: f64,
    step: f64,
    values: Vec<Complex64>,
    derivs: Vec<Complex64>,
}

impl VTable {
    pub fn new(kernel: VKernel, mu: f64, u_min: f64, u_max: f64, step: f64) -> Self {
        let n = ((u_max - u_min) / step).ceil().max(1.0) as usize + 1;
        let mut values = Vec::with_capacity(n);
        let mut derivs = Vec::with_capacity(n);
        for j in 0..n {
            let u = u_min + j as f64 * step;
            let (v, d) = kernel.eval_log_with_derivative(Complex64::new(u, mu));
            values.push(v);
            derivs.push(d);
        }
        VTable {
            kernel,
            mu,
            u_min,
            step,
            values,
            derivs,
        }
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// `V` at `log y = u + iμ`; exact kernel evaluation outside the table.
    pub fn eval(&self, u: f64) -> Complex64 {
        let x = (u - self.u_min) / self.step;
        let j = x.floor();
        if !(j >= 0.0) || j as usize + 1 >= self.values.len() {
            return self.kernel.eval_log(Complex64::new(u, self.mu));
        }
        let j = j as usize;
        let t = x - j as f64;
        let (t2, t3) = (t * t, t * t * t);
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        self.values[j] * h00
            + self.derivs[j] * (h10 * self.step)
            + self.values[j + 1] * h01
            + self.derivs[j + 1] * (h11 * self.step)
    }
}

/// `V_s(y)` (or `V*_{1−s}(y)` when `conjugate`) for real `y > 0`.
pub fn weight_v(
    p: &AfeParameters,
    s: Complex64,
    kappa: Complex64,
    y: f64,
    conjugate: bool,
) -> Result<Complex64> {
    if !(y > 0.0 && y.is_finite()) {
        return Err(crate::error::domain!("V weight needs y > 0, got {y}"));
    }
    Ok(VKernel::new(p, s, kappa, conjugate)?.eval(y))
}

/// Trapezoid quadrature of the defining integral on an arbitrary line
/// `Re w = c` with step `h`, without any contour relocation.
///
/// Lines left of the origin pick up the residue 1 at `w = 0`.
pub fn weight_v_on_line(
    p: &AfeParameters,
    s: Complex64,
    kappa: Complex64,
    y: f64,
    conjugate: bool,
    c: f64,
    h: f64,
) -> Result<Complex64> {
    let shift = if conjugate { 1.0 - s + kappa.conj() } else { s + kappa };
    if !(c > -shift.re && c < PI * p.a / 3.0 && c != 0.0) {
        return Err(crate::error::domain!("line Re w = {c} leaves the analytic strip"));
    }
    let lg0 = log_gamma(shift / 2.0)?;
    let residue = if c < 0.0 { 1.0 } else { 0.0 };
    let contour = Contour::build(shift, lg0, p.a, p.b, c, h, residue, 0.0)?;
    Ok(contour.eval(Complex64::new(y.ln(), 0.0), false).0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn reference_value_at_unit_argument() {
        // Independent arbitrary-precision quadrature on Re w = 1/2.
        let p = AfeParameters::paper();
        let v = weight_v(&p, c(0.6, 0.0), c(0.0, 0.0), 1.0, false).unwrap();
        assert!((v - 0.301_909_847_977_0).norm() < 1e-11, "{v}");
    }

    #[test]
    fn left_and_right_lines_agree() {
        for p in [AfeParameters::paper(), AfeParameters::numeric()] {
            let k = VKernel::new(&p, c(0.5, 3.0), c(1.0, -2.0), false).unwrap();
            for u in [-3.0, -0.5, 0.0, 0.7, 4.0] {
                let l = Complex64::new(u, 0.0);
                let a = k.right.eval(l, false).0;
                let b = k.left.eval(l, false).0;
                assert!((a - b).norm() < 1e-10, "u={u}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn moderate_lines_agree() {
        let p = AfeParameters::paper();
        let s = c(0.6, 0.0);
        let z = c(0.0, 0.0);
        let base = weight_v_on_line(&p, s, z, 1.0, false, 0.5, 0.02).unwrap();
        let other = weight_v_on_line(&p, s, z, 1.0, false, 1.5, 0.01).unwrap();
        let left = weight_v_on_line(&p, s, z, 1.0, false, -0.2, 0.01).unwrap();
        assert!((base - other).norm() < 1e-10);
        assert!((base - left).norm() < 1e-10);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let k = VKernel::new(&AfeParameters::numeric(), c(0.75, 0.0), c(0.0, 0.0), true).unwrap();
        for u in [-2.0, 0.3, 2.5] {
            let (_, d) = k.eval_log_with_derivative(c(u, 0.1));
            let e = 1e-5;
            let fd = (k.eval_log(c(u + e, 0.1)) - k.eval_log(c(u - e, 0.1))) / (2.0 * e);
            assert!((d - fd).norm() < 1e-7, "u={u}");
        }
    }

    #[test]
    fn table_matches_kernel() {
        let k = VKernel::new(&AfeParameters::numeric(), c(0.75, 0.0), c(0.0, 0.0), false).unwrap();
        let table = VTable::new(k.clone(), 0.0, -8.0, 8.0, 0.01);
        for j in 0..400 {
            let u = -9.0 + j as f64 * 0.0437;
            let exact = k.eval_log(c(u, 0.0));
            assert!((table.eval(u) - exact).norm() < 1e-10, "u={u}");
        }
    }

    #[test]
    fn numeric_preset_has_short_tail() {
        let k = VKernel::new(&AfeParameters::numeric(), c(0.5, 0.0), c(0.0, 0.0), false).unwrap();
        // 1 − V decays only like y^{Re(s+κ)} towards y → 0.
        assert!((k.eval(1e-8) - 1.0).norm() < 1e-3);
        assert!(k.eval(1e3).norm() < 1e-7);
        let u = k.cutoff(0.0, 1e-12);
        assert!(u > 5.0 && u < 12.0, "{u}");
    }
}
