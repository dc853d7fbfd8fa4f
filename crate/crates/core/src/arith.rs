//! Exact integer arithmetic: gcd, Kronecker symbol, Möbius, totient, and a
//! least-prime-factor sieve.

#[allow(unused_imports)]
use num_traits::Float as _;
use alloc::vec;
use alloc::vec::Vec;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn gcd_i64(a: i64, b: i64) -> u64 {
    gcd(a.unsigned_abs(), b.unsigned_abs())
}

/// Modular exponentiation with 128-bit intermediates.
pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let m128 = m as u128;
    let mut acc: u128 = 1;
    let mut b = (base % m) as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

/// Jacobi symbol `(a/n)` for odd positive `n`.
fn jacobi(a: i64, n: u64) -> i32 {
    debug_assert!(n & 1 == 1);
    let mut a = a.rem_euclid(n as i64) as u64;
    let mut n = n;
    let mut result = 1i32;
    while a != 0 {
        let tz = a.trailing_zeros();
        a >>= tz;
        if tz & 1 == 1 && (n % 8 == 3 || n % 8 == 5) {
            result = -result;
        }
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        core::mem::swap(&mut a, &mut n);
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Kronecker symbol `(d/n)`.
///
/// `(d/2)` is 0 for even `d`, 1 for `d ≡ ±1 mod 8` and −1 for `d ≡ ±5 mod 8`;
/// `(d/0)` is 1 exactly when `d = ±1`.
pub fn kronecker(d: i64, n: u64) -> i32 {
    if n == 0 {
        return if d == 1 || d == -1 { 1 } else { 0 };
    }
    let tz = n.trailing_zeros();
    let odd = n >> tz;
    let mut result = 1i32;
    if tz > 0 {
        if d & 1 == 0 {
            return 0;
        }
        let r = d.rem_euclid(8);
        if (r == 3 || r == 5) && tz & 1 == 1 {
            result = -result;
        }
    }
    if odd == 1 {
        return result;
    }
    result * jacobi(d, odd)
}

/// Möbius function; `moebius(0)` is defined as 0.
pub fn moebius(n: u64) -> i32 {
    if n == 0 {
        return 0;
    }
    let mut mu = 1;
    for (_, e) in factorize_trial(n) {
        if e > 1 {
            return 0;
        }
        mu = -mu;
    }
    mu
}

pub fn is_squarefree(n: u64) -> bool {
    moebius(n) != 0
}

pub fn totient(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut phi = n;
    for (p, _) in factorize_trial(n) {
        phi = phi / p * (p - 1);
    }
    phi
}

/// Prime factorization `[(p, e)]` by trial division, ascending in `p`.
pub fn factorize_trial(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n <= 1 {
        return out;
    }
    let mut push = |p: u64, n: &mut u64| {
        let mut e = 0;
        while *n % p == 0 {
            *n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    };
    push(2, &mut n);
    push(3, &mut n);
    let mut p = 5u64;
    while p.saturating_mul(p) <= n {
        push(p, &mut n);
        push(p + 2, &mut n);
        p += 6;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Distinct prime divisors of `n`, ascending.
pub fn prime_divisors(n: u64) -> Vec<u64> {
    factorize_trial(n).into_iter().map(|(p, _)| p).collect()
}

/// Least-prime-factor sieve up to `limit`.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
    least_factor: Vec<u32>,
}

impl PrimeTable {
    pub const DEFAULT_LIMIT: u64 = 2_000_000;

    /// Linear sieve; `least_factor[n]` is the smallest prime dividing `n`
    /// (0 for `n < 2`).
    pub fn new(limit: u64) -> Self {
        let limit = limit.max(1);
        let len = limit as usize + 1;
        let mut least_factor = vec![0u32; len];
        let mut primes = Vec::new();
        for i in 2..len {
            if least_factor[i] == 0 {
                least_factor[i] = i as u32;
                primes.push(i as u64);
            }
            let lf = least_factor[i] as u64;
            for &p in &primes {
                if p > lf || p as usize * i >= len {
                    break;
                }
                least_factor[p as usize * i] = p as u32;
            }
        }
        PrimeTable {
            limit,
            primes,
            least_factor,
        }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Primes `p ≤ bound` (bound clamped to the table limit).
    pub fn primes_up_to(&self, bound: u64) -> &[u64] {
        let end = self.primes.partition_point(|&p| p <= bound);
        &self.primes[..end]
    }

    /// Smallest prime factor of `n` for `2 ≤ n ≤ limit`.
    pub fn least_factor(&self, n: u64) -> Option<u64> {
        if n < 2 || n > self.limit {
            None
        } else {
            Some(self.least_factor[n as usize] as u64)
        }
    }

    pub fn is_prime(&self, n: u64) -> bool {
        if n <= self.limit {
            n >= 2 && self.least_factor[n as usize] as u64 == n
        } else {
            factorize_trial(n) == [(n, 1)]
        }
    }

    /// Factorization through the sieve, falling back to trial division above
    /// the limit.
    pub fn factorize(&self, n: u64) -> Vec<(u64, u32)> {
        if n > self.limit {
            return factorize_trial(n);
        }
        let mut out: Vec<(u64, u32)> = Vec::new();
        let mut m = n;
        while m > 1 {
            let p = self.least_factor[m as usize] as u64;
            m /= p;
            match out.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }
}

/// Table of `χ_d(n) = (d/n)` for `0 ≤ n ≤ n_max`.
///
/// Values at primes come from the Jacobi symbol, everything else from
/// complete multiplicativity along the sieve.
pub fn kronecker_table(d: i64, n_max: usize, primes: &PrimeTable) -> Vec<i8> {
    assert!(
        n_max as u64 <= primes.limit(),
        "kronecker_table: sieve too small"
    );
    let mut table = vec![0i8; n_max + 1];
    table[0] = kronecker(d, 0) as i8;
    if n_max == 0 {
        return table;
    }
    table[1] = 1;
    for n in 2..=n_max {
        let p = primes.least_factor[n] as usize;
        table[n] = if p == n {
            kronecker(d, n as u64) as i8
        } else {
            table[p] * table[n / p]
        };
    }
    table
}
