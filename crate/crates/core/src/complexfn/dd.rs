//! Double-double arithmetic (about 32 significant digits) for the few
//! computations that `f64` cannot do: the defining integral of `V` on a line
//! next to the pole of `(2cos(w/A) − 1)^{−B}`, where the integrand peaks near
//! `10¹⁷` while the integral is of order one.
//!
//! Algorithms follow the classical error-free transformations (Dekker, Knuth);
//! transcendental functions use argument reduction plus Taylor series.

#[allow(unused_imports)]
use num_traits::Float as _;
use core::cmp::Ordering;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

use super::AfeParameters;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

pub const PI: Dd = Dd {
    hi: 3.141_592_653_589_793,
    lo: 1.224_646_799_147_353_2e-16,
};
pub const HALF_PI: Dd = Dd {
    hi: 1.570_796_326_794_896_6,
    lo: 6.123_233_995_736_766e-17,
};
pub const LN_2: Dd = Dd {
    hi: 0.693_147_180_559_945_3,
    lo: 2.319_046_813_846_299_6e-17,
};

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub fn new(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    /// `num / den` for integers exactly representable in `f64`.
    pub fn ratio(num: f64, den: f64) -> Self {
        Dd::new(num) / Dd::new(den)
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn mul_f64(self, b: f64) -> Self {
        let (p1, p2) = two_prod(self.hi, b);
        let (s, e) = quick_two_sum(p1, p2 + self.lo * b);
        Dd { hi: s, lo: e }
    }

    pub fn sqr(self) -> Self {
        self * self
    }

    pub fn powi(self, n: u32) -> Self {
        let mut base = self;
        let mut acc = Dd::ONE;
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * base;
            }
            base = base.sqr();
            n >>= 1;
        }
        acc
    }

    /// `2^k · self`, exact.
    pub fn ldexp(self, k: i32) -> Self {
        let f = 2f64.powi(k);
        Dd {
            hi: self.hi * f,
            lo: self.lo * f,
        }
    }

    /// `exp(x) − 1` for `|x| ≤ ½ ln 2`, accurate in the relative sense.
    fn expm1_reduced(self) -> Self {
        const SQUARINGS: i32 = 6;
        let r = self.ldexp(-SQUARINGS);
        // Taylor series of e^r − 1.
        let mut term = r;
        let mut sum = r;
        for k in 2..=18 {
            term = (term * r) / Dd::new(k as f64);
            sum = sum + term;
            if term.hi.abs() < 1e-36 * sum.hi.abs() {
                break;
            }
        }
        // (1 + e)² − 1 = 2e + e².
        for _ in 0..SQUARINGS {
            sum = sum.ldexp(1) + sum.sqr();
        }
        sum
    }

    pub fn exp(self) -> Self {
        if self.hi > 709.0 {
            return Dd::new(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return Dd::ZERO;
        }
        let k = (self.hi / LN_2.hi).round();
        let r = self - LN_2.mul_f64(k);
        (r.expm1_reduced() + Dd::ONE).ldexp(k as i32)
    }

    /// Natural logarithm by one Newton step on `exp` from the `f64` guess
    /// (the step doubles the number of correct digits).
    pub fn ln(self) -> Self {
        assert!(self.hi > 0.0, "Dd::ln of a non-positive number");
        let y = Dd::new(self.hi.ln());
        let y = y + self * (-y).exp() - Dd::ONE;
        y + self * (-y).exp() - Dd::ONE
    }

    /// `(sin x, cos x)`.
    pub fn sin_cos(self) -> (Self, Self) {
        let k = (self.hi / HALF_PI.hi).round();
        let r = self - HALF_PI.mul_f64(k);
        let r2 = r.sqr();
        // sin r = r − r³/3! + …, cos r = 1 − r²/2! + …
        let mut s_term = r;
        let mut s = r;
        let mut c_term = Dd::ONE;
        let mut c = Dd::ONE;
        for j in 1..=16 {
            let n = 2 * j;
            c_term = -(c_term * r2) / Dd::new((n * (n - 1)) as f64);
            s_term = -(s_term * r2) / Dd::new((n * (n + 1)) as f64);
            c = c + c_term;
            s = s + s_term;
        }
        match (k as i64).rem_euclid(4) {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }

    /// `atan2(y, x)` refined from the `f64` value by one Newton step.
    pub fn atan2(y: Dd, x: Dd) -> Dd {
        let t0 = Dd::new(y.hi.atan2(x.hi));
        let (s, c) = t0.sin_cos();
        t0 + (y * c - x * s) / (x * c + y * s)
    }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Self {
        Dd::new(x)
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, b: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Dd { hi, lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, b: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, b.hi);
        let (hi, lo) = quick_two_sum(p1, p2 + (self.hi * b.lo + self.lo * b.hi));
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (q1, q2) = quick_two_sum(q1, q2);
        Dd { hi: q1, lo: q2 } + Dd::new(q3)
    }
}

impl PartialOrd for Dd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            o => o,
        }
    }
}

/// Complex double-double.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CDd {
    pub re: Dd,
    pub im: Dd,
}

impl CDd {
    pub fn new(re: Dd, im: Dd) -> Self {
        CDd { re, im }
    }

    pub fn from_c64(z: Complex64) -> Self {
        CDd::new(Dd::new(z.re), Dd::new(z.im))
    }

    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn norm_sqr(self) -> Dd {
        self.re.sqr() + self.im.sqr()
    }

    pub fn scale(self, k: Dd) -> Self {
        CDd::new(self.re * k, self.im * k)
    }

    pub fn inv(self) -> Self {
        let n = self.norm_sqr();
        CDd::new(self.re / n, -self.im / n)
    }

    pub fn exp(self) -> Self {
        let m = self.re.exp();
        let (s, c) = self.im.sin_cos();
        CDd::new(m * c, m * s)
    }

    /// Principal logarithm.
    pub fn ln(self) -> Self {
        CDd::new(self.norm_sqr().ln().ldexp(-1), Dd::atan2(self.im, self.re))
    }

    pub fn cos(self) -> Self {
        let (s, c) = self.re.sin_cos();
        let ep = self.im.exp();
        let em = (-self.im).exp();
        let ch = (ep + em).ldexp(-1);
        let sh = (ep - em).ldexp(-1);
        CDd::new(c * ch, -(s * sh))
    }

    pub fn powi(self, n: u32) -> Self {
        let mut base = self;
        let mut acc = CDd::new(Dd::ONE, Dd::ZERO);
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            n >>= 1;
        }
        acc
    }
}

impl Add for CDd {
    type Output = CDd;
    fn add(self, b: CDd) -> CDd {
        CDd::new(self.re + b.re, self.im + b.im)
    }
}

impl Sub for CDd {
    type Output = CDd;
    fn sub(self, b: CDd) -> CDd {
        CDd::new(self.re - b.re, self.im - b.im)
    }
}

impl Neg for CDd {
    type Output = CDd;
    fn neg(self) -> CDd {
        CDd::new(-self.re, -self.im)
    }
}

impl Mul for CDd {
    type Output = CDd;
    fn mul(self, b: CDd) -> CDd {
        CDd::new(
            self.re * b.re - self.im * b.im,
            self.re * b.im + self.im * b.re,
        )
    }
}

impl Div for CDd {
    type Output = CDd;
    fn div(self, b: CDd) -> CDd {
        self * b.inv()
    }
}

/// `(B_{2k} numerator, denominator)` for `k = 1..=15`.
const BERNOULLI: [(f64, f64); 15] = [
    (1.0, 6.0),
    (-1.0, 30.0),
    (1.0, 42.0),
    (-1.0, 30.0),
    (5.0, 66.0),
    (-691.0, 2730.0),
    (7.0, 6.0),
    (-3617.0, 510.0),
    (43_867.0, 798.0),
    (-174_611.0, 330.0),
    (854_513.0, 138.0),
    (-236_364_091.0, 2730.0),
    (8_553_103.0, 6.0),
    (-23_749_461_029.0, 870.0),
    (8_615_841_276_005.0, 14_322.0),
];

const DD_STIRLING_SHIFT: f64 = 30.0;

/// Principal `log Γ(z)` in double-double, for `z` off the non-positive reals.
pub fn log_gamma_dd(z: CDd) -> Result<CDd> {
    let zf = z.to_c64();
    if zf.im == 0.0 && zf.re <= 0.0 && zf.re == zf.re.round() {
        return Err(Error::Pole(alloc::format!("log_gamma({})", zf.re)));
    }
    let n = (DD_STIRLING_SHIFT - zf.re).max(0.0).ceil() as u32;
    // Σ log(z + k) as one logarithm of the product; the branch is restored
    // from the f64 sum of the individual arguments.
    let mut prod = CDd::new(Dd::ONE, Dd::ZERO);
    let mut arg_sum = 0.0;
    for k in 0..n {
        let zk = z + CDd::new(Dd::new(k as f64), Dd::ZERO);
        arg_sum += zk.im.hi.atan2(zk.re.hi);
        prod = prod * zk;
    }
    let mut correction = prod.ln();
    let wraps = ((arg_sum - correction.im.hi) / (2.0 * core::f64::consts::PI)).round();
    correction.im = correction.im + (PI.ldexp(1)).mul_f64(wraps);

    let w = z + CDd::new(Dd::new(n as f64), Dd::ZERO);
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut acc = CDd::default();
    for (k, &(num, den)) in BERNOULLI.iter().enumerate().rev() {
        let m = 2.0 * (k as f64 + 1.0);
        let coef = Dd::ratio(num, den * m * (m - 1.0));
        acc = acc * inv2 + CDd::new(coef, Dd::ZERO);
    }
    let half_ln_two_pi = PI.ldexp(1).ln().ldexp(-1);
    let half = CDd::new(Dd::new(0.5), Dd::ZERO);
    let series = (w - half) * w.ln() - w + CDd::new(half_ln_two_pi, Dd::ZERO) + acc * inv;
    Ok(series - correction)
}

/// Trapezoid quadrature of the defining integral of `V_s(y)` (or
/// `V*_{1−s}(y)`) on the line `Re w = c` with step `h`, entirely in
/// double-double arithmetic. Lines left of the origin add the residue 1.
/// The step is rounded down to a power of two.
pub fn weight_v_on_line_dd(
    p: &AfeParameters,
    s: Complex64,
    kappa: Complex64,
    y: f64,
    conjugate: bool,
    c: f64,
    h: f64,
) -> Result<Complex64> {
    let shift = if conjugate { 1.0 - s + kappa.conj() } else { s + kappa };
    let wall = core::f64::consts::PI * p.a / 3.0;
    if !(c > -shift.re && c < wall && c != 0.0) || !(h > 0.0) || !(y > 0.0) {
        return Err(crate::error::domain!("line Re w = {c} leaves the analytic strip"));
    }
    // Nodes k·h must be exact: next to the pole the integrand changes by
    // ~10¹⁸ per unit of t, so even 10⁻¹⁹ of node jitter would show. A power
    // of two makes every product k·h exact.
    let h = 2f64.powi(h.log2().floor() as i32);
    let shift = CDd::from_c64(shift);
    let half = Dd::new(0.5);
    let lg0 = log_gamma_dd(shift.scale(half))?;
    let log_y = Dd::new(y).ln();
    let inv_a = Dd::ONE / Dd::new(p.a);
    let one = CDd::new(Dd::ONE, Dd::ZERO);

    let integrand = |t: f64| -> Result<CDd> {
        let w = CDd::new(Dd::new(c), Dd::new(t));
        let gamma = (log_gamma_dd((shift + w).scale(half))? - lg0).exp();
        let base = w.scale(inv_a).cos().scale(Dd::new(2.0)) - one;
        let psi = base.powi(p.b).inv();
        let ypow = (-w.scale(log_y)).exp();
        Ok(gamma * psi * ypow / w)
    };

    let t0 = shift.im.hi.abs() + 5.0;
    let mut total = CDd::default();
    let mut peak = 0f64;
    for dir in [1i64, -1] {
        let mut k: i64 = if dir > 0 { 0 } else { -1 };
        let mut quiet = 0;
        let mut count = 0usize;
        loop {
            let t = k as f64 * h;
            let v = integrand(t)?;
            total = total + v;
            let mag = v.to_c64().norm();
            peak = peak.max(mag);
            if t.abs() > t0 && mag < 1e-30 * peak.max(1.0) {
                quiet += 1;
                if quiet >= 20 {
                    break;
                }
            } else {
                quiet = 0;
            }
            count += 1;
            if count > 2_000_000 {
                return Err(Error::QuadratureNonConvergence(alloc::format!(
                    "double-double V integrand on Re w = {c} did not decay"
                )));
            }
            k += dir;
        }
    }
    let scale = Dd::new(h) / PI.ldexp(1);
    let mut v = total.scale(scale);
    if c < 0.0 {
        v = v + one;
    }
    Ok(v.to_c64())
}
