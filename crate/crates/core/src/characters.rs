//! Dirichlet characters as complete value tables.
//!
//! Values are kept as exact exponents `k` meaning `exp(2πi k / order)`, with a
//! complex snapshot alongside. Multiplicativity, conjugation, squaring and
//! triviality tests work on the exponents and never see rounding.

#[allow(unused_imports)]
use num_traits::Float as _;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::arith::{factorize_trial, gcd, pow_mod, totient};
use crate::sum::pairwise;
use crate::{Error, Result};

/// Value `exp(2πi·num/den)` assigned to the generator residue `g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GeneratorAssignment {
    pub g: u64,
    pub num: i64,
    pub den: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DirichletCharacter {
    modulus: u64,
    order: u64,
    exponents: Vec<Option<u32>>,
    values: Vec<Complex64>,
    parity: i32,
    conductor: u64,
}

/// Gauss sum and root number of a character.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacterRootData {
    pub gauss_sum: Complex64,
    pub kappa_chi: u32,
    pub omega_chi: Complex64,
}

/// `exp(2πi k/n)`, exact at multiples of a quarter turn.
pub fn root_of_unity(k: u64, n: u64) -> Complex64 {
    let k = k % n;
    if (4 * k) % n == 0 {
        return match 4 * k / n {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    // Reduce to a symmetric angle before calling sin/cos.
    let (k, sign) = if 2 * k > n { (n - k, -1.0) } else { (k, 1.0) };
    let theta = 2.0 * core::f64::consts::PI * (k as f64) / (n as f64);
    Complex64::new(theta.cos(), sign * theta.sin())
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Multiplicative order of `a` modulo `q` (`a` coprime to `q`).
pub fn multiplicative_order(a: u64, q: u64) -> u64 {
    if q == 1 {
        return 1;
    }
    let mut ord = totient(q);
    for (p, _) in factorize_trial(ord) {
        while ord % p == 0 && pow_mod(a, ord / p, q) == 1 {
            ord /= p;
        }
    }
    ord
}

fn primitive_root_prime_power(p: u64, k: u32) -> u64 {
    let pk = p.pow(k);
    let phi_p = p - 1;
    let factors = factorize_trial(phi_p);
    let mut g = 2;
    while !factors.iter().all(|&(r, _)| pow_mod(g, phi_p / r, p) != 1) {
        g += 1;
    }
    if k >= 2 && pow_mod(g, p - 1, p * p) == 1 {
        g += p;
    }
    g % pk
}

/// Solve `x ≡ a mod m`, `x ≡ 1 mod n` for coprime `m, n`.
fn crt_with_one(a: u64, m: u64, n: u64) -> u64 {
    let q = (m * n) as u128;
    let mut x = a as u128 % q;
    while x % n as u128 != 1 % n as u128 {
        x += m as u128;
    }
    (x % q) as u64
}

/// A generating set of `(Z/qZ)^×` as pairs `(residue, order)`; the group is the
/// direct product of the cyclic groups they generate.
pub fn generators(q: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for (p, k) in factorize_trial(q) {
        let pk = p.pow(k);
        let rest = q / pk;
        if p == 2 {
            if k >= 2 {
                out.push((crt_with_one(pk - 1, pk, rest), 2));
            }
            if k >= 3 {
                out.push((crt_with_one(5, pk, rest), 1 << (k - 2)));
            }
        } else {
            let g = primitive_root_prime_power(p, k);
            out.push((crt_with_one(g, pk, rest), pk / p * (p - 1)));
        }
    }
    out
}

impl DirichletCharacter {
    /// The unique character taking the assigned values on the listed
    /// residues.
    pub fn from_generator_map(q: u64, assignments: &[GeneratorAssignment]) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidParameters("modulus must be positive".into()));
        }
        let mut order = 1u64;
        for a in assignments {
            if a.den == 0 {
                return Err(Error::InvalidParameters("root-of-unity order must be positive".into()));
            }
            if gcd(a.g % q, q) != 1 {
                return Err(Error::InvalidResidue {
                    residue: a.g,
                    modulus: q,
                });
            }
            let num = a.num.rem_euclid(a.den as i64) as u64;
            let value_order = a.den / gcd(num, a.den);
            let generator_order = multiplicative_order(a.g % q, q);
            if generator_order % value_order != 0 {
                return Err(Error::OrderMismatch {
                    generator: a.g,
                    generator_order,
                    value_order,
                });
            }
            order = lcm(order, value_order);
        }
        let steps: Vec<(u64, u64)> = assignments
            .iter()
            .map(|a| {
                let num = a.num.rem_euclid(a.den as i64) as u64;
                let value_order = a.den / gcd(num, a.den);
                let reduced = num / (a.den / value_order);
                (a.g % q, reduced * (order / value_order) % order)
            })
            .collect();

        let mut exponents: Vec<Option<u32>> = vec![None; q as usize];
        let start = 1 % q;
        exponents[start as usize] = Some(0);
        let mut queue = vec![start];
        let mut head = 0;
        while head < queue.len() {
            let r = queue[head];
            head += 1;
            let e = exponents[r as usize].unwrap() as u64;
            for &(g, eg) in &steps {
                let next = ((r as u128 * g as u128) % q as u128) as u64;
                let ne = ((e + eg) % order) as u32;
                match exponents[next as usize] {
                    None => {
                        exponents[next as usize] = Some(ne);
                        queue.push(next);
                    }
                    Some(old) if old != ne => {
                        return Err(Error::InconsistentAssignment { residue: next });
                    }
                    Some(_) => {}
                }
            }
        }
        if queue.len() as u64 != totient(q) {
            return Err(Error::NotAGeneratingSet { modulus: q });
        }
        Ok(Self::from_exponents(q, order, exponents))
    }

    /// Builds a character from an exponent table; reduces the order to the
    /// exact order of the character.
    fn from_exponents(q: u64, order: u64, mut exponents: Vec<Option<u32>>) -> Self {
        let g = exponents
            .iter()
            .flatten()
            .fold(order, |acc, &e| gcd(acc, e as u64));
        let order = order / g;
        for e in exponents.iter_mut().flatten() {
            *e = (*e as u64 / g) as u32;
        }
        let values = exponents
            .iter()
            .map(|e| match e {
                Some(k) => root_of_unity(*k as u64, order),
                None => Complex64::new(0.0, 0.0),
            })
            .collect();
        let parity = match exponents[((q - 1) % q) as usize] {
            Some(0) => 1,
            _ => -1,
        };
        let mut chi = DirichletCharacter {
            modulus: q,
            order,
            exponents,
            values,
            parity,
            conductor: q,
        };
        chi.conductor = chi.compute_conductor();
        chi
    }

    fn compute_conductor(&self) -> u64 {
        let q = self.modulus;
        let mut divisors: Vec<u64> = (1..=q).filter(|d| q % d == 0).collect();
        divisors.sort_unstable();
        for d in divisors {
            let induced = (0..q)
                .filter(|&n| n % d == 1 % d && gcd(n, q) == 1)
                .all(|n| self.exponents[n as usize] == Some(0));
            if induced {
                return d;
            }
        }
        q
    }

    pub fn trivial(q: u64) -> Self {
        let exponents = (0..q)
            .map(|n| if gcd(n, q) == 1 { Some(0) } else { None })
            .collect();
        Self::from_exponents(q, 1, exponents)
    }

    /// The real character `n ↦ (d/n)` modulo `|d|`, `d` a fundamental
    /// discriminant.
    pub fn kronecker(d: i64) -> Result<Self> {
        let q = d.unsigned_abs();
        if q == 0 {
            return Err(Error::InvalidParameters("discriminant must be nonzero".into()));
        }
        let exponents = (0..q)
            .map(|n| match crate::arith::kronecker(d, n) {
                0 => None,
                1 => Some(0),
                _ => Some(1),
            })
            .collect();
        Ok(Self::from_exponents(q, 2, exponents))
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Order of the character as an element of the dual group.
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// `χ(−1)`.
    pub fn parity(&self) -> i32 {
        self.parity
    }

    pub fn is_even(&self) -> bool {
        self.parity == 1
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor == self.modulus
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    /// Exact exponent of `χ(n)`, `None` when `gcd(n, q) > 1`.
    pub fn exponent(&self, n: i64) -> Option<u32> {
        self.exponents[n.rem_euclid(self.modulus as i64) as usize]
    }

    pub fn value(&self, n: i64) -> Complex64 {
        self.values[n.rem_euclid(self.modulus as i64) as usize]
    }

    pub fn value_u(&self, n: u64) -> Complex64 {
        self.values[(n % self.modulus) as usize]
    }

    pub fn conj(&self) -> Self {
        let o = self.order as u32;
        let exponents = self
            .exponents
            .iter()
            .map(|e| e.map(|k| (o - k) % o))
            .collect();
        Self::from_exponents(self.modulus, self.order, exponents)
    }

    /// Product of two characters; the modulus is the lcm of the two moduli.
    pub fn mul(&self, other: &Self) -> Self {
        let q = lcm(self.modulus, other.modulus);
        let order = lcm(self.order, other.order);
        let (sa, sb) = (order / self.order, order / other.order);
        let exponents = (0..q)
            .map(|n| match (self.exponent(n as i64), other.exponent(n as i64)) {
                (Some(a), Some(b)) => {
                    Some(((a as u64 * sa + b as u64 * sb) % order) as u32)
                }
                _ => None,
            })
            .collect();
        Self::from_exponents(q, order, exponents)
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    /// True iff `χ²` is principal, i.e. `χ` is real.
    pub fn square_is_trivial(&self) -> bool {
        self.order <= 2
    }

    pub fn gauss_sum(&self) -> Complex64 {
        let q = self.modulus;
        pairwise((0..q).map(|a| self.values[a as usize] * root_of_unity(a, q)))
    }

    pub fn root_data(&self) -> CharacterRootData {
        let gauss_sum = self.gauss_sum();
        let kappa_chi = if self.is_even() { 0 } else { 1 };
        let i_pow = if kappa_chi == 0 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, -1.0)
        };
        CharacterRootData {
            gauss_sum,
            kappa_chi,
            omega_chi: i_pow * gauss_sum / (self.modulus as f64).sqrt(),
        }
    }
}

/// Builder wrapper matching the free-function style of the other modules.
pub fn char_from_generator_map(
    q: u64,
    assignments: &[GeneratorAssignment],
) -> Result<DirichletCharacter> {
    DirichletCharacter::from_generator_map(q, assignments)
}

pub fn gauss_sum(chi: &DirichletCharacter) -> Complex64 {
    chi.gauss_sum()
}

pub fn char_square_is_trivial(chi: &DirichletCharacter) -> bool {
    chi.square_is_trivial()
}

/// Every character modulo `q`, in lexicographic order of generator exponents.
pub fn all_characters(q: u64) -> Vec<DirichletCharacter> {
    let gens = generators(q);
    let mut out = Vec::new();
    let mut idx = vec![0u64; gens.len()];
    loop {
        let assignments: Vec<GeneratorAssignment> = gens
            .iter()
            .zip(&idx)
            .map(|(&(g, o), &k)| GeneratorAssignment {
                g,
                num: k as i64,
                den: o,
            })
            .collect();
        out.push(
            DirichletCharacter::from_generator_map(q, &assignments)
                .expect("canonical generators always form a consistent basis"),
        );
        let mut pos = 0;
        loop {
            if pos == gens.len() {
                return out;
            }
            idx[pos] += 1;
            if idx[pos] < gens[pos].1 {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

pub fn primitive_characters(q: u64) -> Vec<DirichletCharacter> {
    all_characters(q)
        .into_iter()
        .filter(DirichletCharacter::is_primitive)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    fn fig1_character() -> DirichletCharacter {
        char_from_generator_map(7, &[GeneratorAssignment { g: 3, num: 1, den: 6 }]).unwrap()
    }

    #[test]
    fn order_six_character_mod_seven() {
        let chi = fig1_character();
        let s3 = 3f64.sqrt();
        assert!(close(chi.value(3), Complex64::new(0.5, s3 / 2.0), 1e-15));
        assert_eq!(chi.value(6), Complex64::new(-1.0, 0.0));
        assert_eq!(chi.value(0), Complex64::new(0.0, 0.0));
        assert_eq!(chi.parity(), -1);
        assert!(chi.is_primitive());
        assert!(!chi.square_is_trivial());
        assert_eq!(chi.order(), 6);
        assert!(close(chi.square().value(3), root_of_unity(1, 3), 1e-15));
    }

    #[test]
    fn trivial_modulus_one() {
        let chi = char_from_generator_map(1, &[]).unwrap();
        assert_eq!(chi.value(0), Complex64::new(1.0, 0.0));
        assert_eq!(chi.value(17), Complex64::new(1.0, 0.0));
        assert!(chi.is_primitive());
        assert!(chi.square_is_trivial());
        assert_eq!(chi.gauss_sum(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn quadratic_mod_five() {
        let chi = char_from_generator_map(5, &[GeneratorAssignment { g: 2, num: 1, den: 2 }]).unwrap();
        for n in 0..5 {
            assert_eq!(chi.value(n).re as i32, crate::arith::kronecker(5, n as u64));
        }
        assert!(chi.square_is_trivial());
        assert!(close(chi.gauss_sum(), Complex64::new(5f64.sqrt(), 0.0), 1e-12));
        assert_eq!(chi, DirichletCharacter::kronecker(5).unwrap());
    }

    #[test]
    fn construction_errors() {
        // 2 has order 3 mod 7 and cannot carry a sixth root of unity.
        assert!(matches!(
            char_from_generator_map(7, &[GeneratorAssignment { g: 2, num: 1, den: 6 }]),
            Err(Error::OrderMismatch { .. })
        ));
        assert!(matches!(
            char_from_generator_map(7, &[GeneratorAssignment { g: 2, num: 1, den: 3 }]),
            Err(Error::NotAGeneratingSet { modulus: 7 })
        ));
        // 3 and 5 = 3^5 with values whose ratio is inconsistent.
        assert!(matches!(
            char_from_generator_map(
                7,
                &[
                    GeneratorAssignment { g: 3, num: 1, den: 6 },
                    GeneratorAssignment { g: 5, num: 1, den: 6 },
                ]
            ),
            Err(Error::InconsistentAssignment { .. })
        ));
        assert!(matches!(
            char_from_generator_map(8, &[GeneratorAssignment { g: 2, num: 1, den: 2 }]),
            Err(Error::InvalidResidue { .. })
        ));
    }

    #[test]
    fn generators_have_declared_orders() {
        for q in 1..=200u64 {
            let gens = generators(q);
            let product: u64 = gens.iter().map(|g| g.1).product();
            assert_eq!(product, totient(q), "q={q}");
            for &(g, o) in &gens {
                assert_eq!(multiplicative_order(g, q), o, "q={q} g={g}");
            }
        }
    }

    #[test]
    fn kronecker_characters_are_primitive() {
        for d in [5i64, 8, 12, 13, 24, 28, -3, -4, -8] {
            let chi = DirichletCharacter::kronecker(d).unwrap();
            assert!(chi.is_primitive(), "d={d}");
            assert_eq!(chi.parity(), if d > 0 { 1 } else { -1 });
        }
    }

    #[test]
    fn conductors() {
        assert_eq!(DirichletCharacter::trivial(12).conductor(), 1);
        let chi4 = DirichletCharacter::kronecker(-4).unwrap();
        let lifted = chi4.mul(&DirichletCharacter::trivial(12));
        assert_eq!(lifted.modulus(), 12);
        assert_eq!(lifted.conductor(), 4);
        assert_eq!(primitive_characters(8).len(), 2);
        assert_eq!(primitive_characters(4).len(), 1);
        assert_eq!(primitive_characters(2).len(), 0);
    }

    #[test]
    fn root_numbers() {
        let chi = fig1_character();
        let rd = chi.root_data();
        assert_eq!(rd.kappa_chi, 1);
        assert!((rd.omega_chi.norm() - 1.0).abs() < 1e-12);
        let chi5 = DirichletCharacter::kronecker(5).unwrap();
        assert!(close(chi5.root_data().omega_chi, Complex64::new(1.0, 0.0), 1e-12));
        let chi4 = DirichletCharacter::kronecker(-4).unwrap();
        assert!(close(chi4.root_data().omega_chi, Complex64::new(1.0, 0.0), 1e-12));
    }
}
