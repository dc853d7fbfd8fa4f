//! Dirichlet L-functions: a Hurwitz/Euler–Maclaurin reference evaluator, the
//! approximate functional equation, Euler products and family mean values.

#[allow(unused_imports)]
use num_traits::Float as _;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::characters::{CharacterRootData, DirichletCharacter};
use crate::sum::Pairwise;
use crate::{Error, Result};

pub mod afe;
pub mod euler;
mod line;
pub mod mean;

pub use afe::{l_afe, l_afe_with, AfeTarget, TwistedRepresentation};
pub use euler::{
    euler_identity_check, local_murmur_product, mean_value_main, mean_value_main_for_family,
    residue_term, EulerCheck,
    ProductValue,
};
pub use line::{LineSeries, PrimeProductLine};
pub use mean::{mean_value_empirical, MeanValueKit};

/// `φ = |·|^{iτ} χ` for a primitive character `χ`.
#[derive(Debug, Clone, PartialEq)]
pub struct GL1Representation {
    chi: DirichletCharacter,
    tau: f64,
    root: CharacterRootData,
}

impl GL1Representation {
    pub fn new(chi: DirichletCharacter, tau: f64) -> Result<Self> {
        if !chi.is_primitive() {
            return Err(crate::error::domain!(
                "character mod {} is not primitive (conductor {})",
                chi.modulus(),
                chi.conductor()
            ));
        }
        if !tau.is_finite() {
            return Err(crate::error::domain!("tau must be finite"));
        }
        let root = chi.root_data();
        Ok(GL1Representation { chi, tau, root })
    }

    pub fn chi(&self) -> &DirichletCharacter {
        &self.chi
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn conductor(&self) -> u64 {
        self.chi.modulus()
    }

    pub fn root_data(&self) -> &CharacterRootData {
        &self.root
    }

    /// `κ = (1 − χ(−1))/2 − iτ`.
    pub fn kappa(&self) -> Complex64 {
        Complex64::new(self.root.kappa_chi as f64, -self.tau)
    }

    /// `ω_φ = ω_χ (q/π)^{iτ}`.
    pub fn omega(&self) -> Complex64 {
        let q = self.conductor() as f64;
        self.root.omega_chi * Complex64::new(0.0, self.tau * (q / PI).ln()).exp()
    }

    /// `a_φ(n) = χ(n) n^{iτ}`.
    pub fn coefficient(&self, n: u64) -> Complex64 {
        let c = self.chi.value_u(n);
        if c == Complex64::new(0.0, 0.0) || self.tau == 0.0 {
            return c;
        }
        c * Complex64::new(0.0, self.tau * (n as f64).ln()).exp()
    }

    /// `L(s, φ) = L(s − iτ, χ)` by the reference evaluator.
    pub fn l_reference(&self, s: Complex64) -> Result<Complex64> {
        l_reference(&self.chi, s - Complex64::new(0.0, self.tau))
    }

    /// `Λ(s, φ) = (q/π)^{s/2} Γ((s + κ)/2) L(s, φ)`.
    pub fn completed(&self, s: Complex64) -> Result<Complex64> {
        completed_from(self.conductor() as f64, self.kappa(), s, self.l_reference(s)?)
    }

    /// The contragredient `φ̄ = |·|^{−iτ} χ̄`.
    pub fn dual(&self) -> Self {
        let chi = self.chi.conj();
        let root = chi.root_data();
        GL1Representation {
            chi,
            tau: -self.tau,
            root,
        }
    }
}

const BERNOULLI_OVER_FACTORIAL: [f64; 6] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30_240.0,
    -1.0 / 1_209_600.0,
    1.0 / 47_900_160.0,
    -691.0 / 1_307_674_368_000.0,
];

/// Euler–Maclaurin length for `|Im s| = t`.
pub(crate) fn em_length(t: f64) -> u64 {
    (2.0 * t.abs()).ceil().max(30.0) as u64
}

/// `(e^z − 1)/z`.
fn exprel(z: Complex64) -> Complex64 {
    if z.norm() < 0.1 {
        let mut term = Complex64::new(1.0, 0.0);
        let mut acc = term;
        for k in 2..16 {
            term = term * z / k as f64;
            acc += term;
        }
        acc
    } else {
        (z.exp() - 1.0) / z
    }
}

/// Euler–Maclaurin remainder `Σ_{n > qN} ψ(n) n^{−s}` for a table `ψ` mod `q`,
/// with the `Σ_a ψ(a) / (q(s−1))` part returned separately as its numerator.
pub(crate) fn em_tail(values: &[Complex64], n_len: u64, s: Complex64) -> (Complex64, Complex64) {
    let q = values.len() as u64;
    let qf = q as f64;
    let mut tail = Pairwise::new();
    let mut mass = Complex64::new(0.0, 0.0);
    for a in 1..=q {
        let v = values[(a % q) as usize];
        if v == Complex64::new(0.0, 0.0) {
            continue;
        }
        mass += v;
        let m = (n_len * q + a) as f64;
        let lm = m.ln();
        let m_s = (-s * lm).exp();
        // (M^{1−s} − 1)/(q(s − 1)) = −log M · exprel((1 − s) log M)/q
        let mut acc = -lm * exprel((1.0 - s) * lm) / qf + m_s * 0.5;
        let mut rising = s;
        let mut pow = m_s * (qf / m);
        let ratio = (qf / m) * (qf / m);
        for (j, &b) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
            acc += rising * pow * b;
            let k = 2.0 * j as f64;
            rising = rising * (s + k + 1.0) * (s + k + 2.0);
            pow *= ratio;
        }
        tail.push(v * acc);
    }
    (tail.finish(), mass)
}

/// `Σ_n ψ(n) n^{−s}` for a periodic table `ψ` (any character mod `q`, not
/// necessarily primitive), continued analytically.
pub fn dirichlet_l(values: &[Complex64], s: Complex64) -> Result<Complex64> {
    if values.is_empty() {
        return Err(crate::error::domain!("empty character table"));
    }
    let q = values.len() as u64;
    let n_len = em_length(s.im);
    let mut head = Pairwise::new();
    for n in 1..=n_len * q {
        let v = values[(n % q) as usize];
        if v != Complex64::new(0.0, 0.0) {
            head.push(v * (-s * (n as f64).ln()).exp());
        }
    }
    let (tail, mass) = em_tail(values, n_len, s);
    let mut total = head.finish() + tail;
    if mass.norm() > 1e-12 {
        if s == Complex64::new(1.0, 0.0) {
            return Err(Error::Pole("s = 1".into()));
        }
        total += mass / (q as f64 * (s - 1.0));
    }
    Ok(total)
}

/// `L(s, χ)` by Hurwitz zeta values and Euler–Maclaurin summation.
pub fn l_reference(chi: &DirichletCharacter, s: Complex64) -> Result<Complex64> {
    dirichlet_l(chi.values(), s).map_err(|e| match e {
        Error::Pole(_) => Error::Pole(alloc::format!("L(s, chi mod {}) at s = 1", chi.modulus())),
        e => e,
    })
}

/// `L^{(m)}(s, χ) = L(s, χ) ∏_{p | m} (1 − χ(p) p^{−s})`, `Re s > 1`.
pub fn l_removed(chi: &DirichletCharacter, s: Complex64, m: u64) -> Result<Complex64> {
    if !(s.re > 1.0) {
        return Err(crate::error::domain!("removed L-function needs Re s > 1, got {s}"));
    }
    if m == 0 {
        return Err(crate::error::domain!("removed modulus must be positive"));
    }
    Ok(l_reference(chi, s)? * removed_factor(chi.values(), s, m))
}

/// `∏_{p | m} (1 − ψ(p) p^{−s})`.
pub(crate) fn removed_factor(values: &[Complex64], s: Complex64, m: u64) -> Complex64 {
    let q = values.len() as u64;
    crate::arith::prime_divisors(m)
        .into_iter()
        .map(|p| 1.0 - values[(p % q) as usize] * (-s * (p as f64).ln()).exp())
        .product()
}

fn completed_from(q: f64, kappa: Complex64, s: Complex64, l: Complex64) -> Result<Complex64> {
    let lg = crate::complexfn::log_gamma((s + kappa) / 2.0)?;
    Ok((s / 2.0 * (q / PI).ln() + lg).exp() * l)
}

/// `Λ(s, χ) = (q/π)^{s/2} Γ((s + κ_χ)/2) L(s, χ)` for primitive `χ`.
pub fn completed(chi: &DirichletCharacter, s: Complex64) -> Result<Complex64> {
    let kappa = if chi.is_even() { 0.0 } else { 1.0 };
    completed_from(chi.modulus() as f64, Complex64::new(kappa, 0.0), s, l_reference(chi, s)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::{primitive_characters, DirichletCharacter};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn chi4() -> DirichletCharacter {
        DirichletCharacter::kronecker(-4).unwrap()
    }

    #[test]
    fn catalan_and_class_number_values() {
        let catalan = 0.915_965_594_177_219_015_054_603_514_932_384_110_774;
        let v = l_reference(&chi4(), c(2.0, 0.0)).unwrap();
        assert!((v - catalan).norm() < 1e-12, "{v}");
        let chi3 = DirichletCharacter::kronecker(-3).unwrap();
        let v = l_reference(&chi3, c(1.0, 0.0)).unwrap();
        assert!((v - PI / (3.0 * 3f64.sqrt())).norm() < 1e-12, "{v}");
    }

    #[test]
    fn zeta_values_and_pole() {
        let zeta = DirichletCharacter::trivial(1);
        let v = l_reference(&zeta, c(2.0, 0.0)).unwrap();
        assert!((v - PI * PI / 6.0).norm() < 1e-13);
        // ζ(1/2 + 14.134725141734693i) ≈ 0 (first zero)
        let v = l_reference(&zeta, c(0.5, 14.134_725_141_734_693)).unwrap();
        assert!(v.norm() < 1e-12, "{v}");
        assert!(matches!(l_reference(&zeta, c(1.0, 0.0)), Err(Error::Pole(_))));
        // ζ(0) = −1/2
        let v = l_reference(&zeta, c(0.0, 0.0)).unwrap();
        assert!((v + 0.5).norm() < 1e-13);
    }

    #[test]
    fn high_on_the_line() {
        // ζ(1/2 + 1000i), mpmath reference
        let zeta = DirichletCharacter::trivial(1);
        let v = l_reference(&zeta, c(0.5, 1000.0)).unwrap();
        let want = c(0.356_334_367_194_396_06, 0.931_997_831_232_993_7);
        assert!((v - want).norm() < 1e-10, "{v}");
    }

    #[test]
    fn removed_factors() {
        let zeta = DirichletCharacter::trivial(1);
        let v = l_removed(&zeta, c(2.0, 0.0), 2).unwrap();
        assert!((v - PI * PI / 8.0).norm() < 1e-13);
        let v = l_removed(&zeta, c(2.0, 0.0), 1).unwrap();
        assert!((v - PI * PI / 6.0).norm() < 1e-13);
        assert!(l_removed(&zeta, c(0.9, 0.0), 2).is_err());
        // Imprimitive table: χ₀ mod 5 is ζ without the 5-factor.
        let chi0 = DirichletCharacter::trivial(5);
        let v = l_reference(&chi0, c(2.0, 0.0)).unwrap();
        assert!((v - PI * PI / 6.0 * (1.0 - 1.0 / 25.0)).norm() < 1e-13);
    }

    #[test]
    fn functional_equation_reference() {
        for q in [4, 5, 7, 8] {
            for chi in primitive_characters(q) {
                let omega = chi.root_data().omega_chi;
                let s = c(0.3, 2.0);
                let lhs = completed(&chi, s).unwrap();
                let rhs = omega * completed(&chi.conj(), 1.0 - s).unwrap();
                assert!((lhs - rhs).norm() < 1e-10 * lhs.norm().max(1.0), "q={q}: {lhs} {rhs}");
            }
        }
    }

    #[test]
    fn representation_shift() {
        let chi = primitive_characters(7).into_iter().find(|c| c.order() == 6).unwrap();
        let rep = GL1Representation::new(chi.clone(), 2.0).unwrap();
        assert!((rep.omega().norm() - 1.0).abs() < 1e-12);
        assert_eq!(rep.kappa(), c(1.0, -2.0));
        let s = c(0.7, 1.0);
        let a = rep.l_reference(s).unwrap();
        let b = l_reference(&chi, s - c(0.0, 2.0)).unwrap();
        assert_eq!(a, b);
        // Λ(s, φ) = ω_φ Λ(1 − s, φ̄)
        let lhs = rep.completed(s).unwrap();
        let rhs = rep.omega() * rep.dual().completed(1.0 - s).unwrap();
        assert!((lhs - rhs).norm() < 1e-10 * lhs.norm(), "{lhs} {rhs}");
        assert!(GL1Representation::new(DirichletCharacter::trivial(7), 0.0).is_err());
    }
}
