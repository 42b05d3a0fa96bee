//! Elementary integer arithmetic: factorization, `ω`, Hall divisors, the
//! Kronecker symbol, and the multiplicative functions `φ` and `ψ`.
//!
//! Factorization uses a smallest-prime-factor table covering every value
//! the scan can produce (order discriminants go down to `-4 * 110011`),
//! falling back to trial division above it. Inputs are capped at
//! [`MAX_INPUT`] so that products of two factors never overflow.

use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Largest accepted input to [`factor`] and everything built on it.
pub const MAX_INPUT: u64 = 1 << 62;

/// Values `0..=SIEVE_LIMIT` are factored by table lookup.
pub const SIEVE_LIMIT: usize = 110_011 * 4;

fn spf_table() -> &'static [u32] {
    static TABLE: OnceLock<Vec<u32>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut spf = vec![0u32; SIEVE_LIMIT + 1];
        for i in 2..=SIEVE_LIMIT {
            if spf[i] != 0 {
                continue;
            }
            spf[i] = i as u32;
            let mut j = i * i;
            while j <= SIEVE_LIMIT {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
        spf
    })
}

/// A positive integer together with its prime factorization.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Factorization {
    value: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn value(&self) -> u64 {
        self.value
    }

    /// `(prime, exponent)` pairs with strictly increasing primes.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn omega(&self) -> usize {
        self.factors.len()
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    /// Exponent of `p` in the value (0 if `p` does not divide it).
    pub fn exponent(&self, p: u64) -> u32 {
        self.factors
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }

    /// Product of `prime^exponent` over the listed factors.
    pub fn reconstruct(&self) -> u64 {
        self.factors.iter().map(|&(p, e)| p.pow(e)).product()
    }

    pub fn totient(&self) -> u64 {
        // φ(n) ≤ n, so no overflow is possible.
        self.factors
            .iter()
            .map(|&(p, e)| p.pow(e - 1) * (p - 1))
            .product()
    }

    pub fn dedekind_psi(&self) -> Result<u64> {
        self.factors.iter().try_fold(1u64, |acc, &(p, e)| {
            acc.checked_mul(p.pow(e - 1) * (p + 1))
                .ok_or_else(|| Error::InvalidInput(format!("psi({}) overflows u64", self.value)))
        })
    }

    /// Hall divisors `d` of the value (`d | n` and `gcd(d, n/d) = 1`), ascending.
    pub fn hall_divisors(&self) -> Vec<u64> {
        let mut divisors = vec![1u64];
        for &(p, e) in &self.factors {
            let pe = p.pow(e);
            let len = divisors.len();
            for i in 0..len {
                divisors.push(divisors[i] * pe);
            }
        }
        divisors.sort_unstable();
        divisors
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, &(p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            if e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

fn check_input(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidInput("expected a positive integer, got 0".into()));
    }
    if n > MAX_INPUT {
        return Err(Error::InvalidInput(format!("{n} exceeds the supported bound 2^62")));
    }
    Ok(())
}

/// Prime factorization of `1 <= n <= 2^62`.
pub fn factor(n: u64) -> Result<Factorization> {
    check_input(n)?;
    let mut factors: Vec<(u64, u32)> = Vec::new();
    let mut push = |p: u64| match factors.last_mut() {
        Some((q, e)) if *q == p => *e += 1,
        _ => factors.push((p, 1)),
    };

    let mut rest = n;
    if rest as usize > SIEVE_LIMIT {
        let mut p = 2u64;
        while p * p <= rest {
            while rest % p == 0 {
                push(p);
                rest /= p;
            }
            if rest as usize <= SIEVE_LIMIT {
                break;
            }
            p += if p == 2 { 1 } else { 2 };
        }
        if rest as usize > SIEVE_LIMIT {
            // No factor up to sqrt(rest): rest is prime.
            push(rest);
            rest = 1;
        }
    }
    let spf = spf_table();
    while rest > 1 {
        let p = spf[rest as usize] as u64;
        push(p);
        rest /= p;
    }
    Ok(Factorization { value: n, factors })
}

/// Number of distinct prime divisors.
pub fn omega(n: u64) -> Result<usize> {
    Ok(factor(n)?.omega())
}

pub fn is_squarefree(n: u64) -> Result<bool> {
    Ok(factor(n)?.is_squarefree())
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factor(n).is_ok_and(|f| f.factors == [(n, 1)])
}

pub fn hall_divisors(n: u64) -> Result<Vec<u64>> {
    Ok(factor(n)?.hall_divisors())
}

/// True iff `d | n` and `gcd(d, n/d) = 1`.
pub fn is_hall_divisor(d: u64, n: u64) -> bool {
    d != 0 && n % d == 0 && gcd(d, n / d) == 1
}

/// Euler's totient.
pub fn totient(n: u64) -> Result<u64> {
    Ok(factor(n)?.totient())
}

/// Dedekind's `ψ(n) = n ∏_{p | n} (1 + 1/p)`.
pub fn dedekind_psi(n: u64) -> Result<u64> {
    factor(n)?.dedekind_psi()
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// The Kronecker symbol `(a/n)`.
///
/// Conventions: `(a/0) = 1` iff `a = ±1`, `(a/-1) = -1` iff `a < 0`, and at 2
/// the symbol is `0` for even `a`, `1` for `a ≡ ±1 (mod 8)` and `-1` for
/// `a ≡ ±3 (mod 8)`. The pair `(0, 0)` is rejected.
pub fn kronecker(a: i64, n: i64) -> Result<i32> {
    if a == 0 && n == 0 {
        return Err(Error::InvalidInput("kronecker symbol (0/0) is undefined".into()));
    }
    if n == 0 {
        return Ok(i32::from(a.unsigned_abs() == 1));
    }
    let sign = if n < 0 && a < 0 { -1 } else { 1 };
    Ok(sign * kronecker_unsigned(a, n.unsigned_abs()))
}

/// `(a/n)` for `n >= 1`; the building block for [`kronecker`].
pub(crate) fn kronecker_unsigned(a: i64, n: u64) -> i32 {
    debug_assert!(n >= 1);
    let twos = n.trailing_zeros();
    if twos > 0 && a % 2 == 0 {
        return 0;
    }
    let mut result = 1;
    if twos % 2 == 1 {
        // (a/2) for odd a, via the residue of a mod 8.
        result = match a.rem_euclid(8) {
            1 | 7 => 1,
            _ => -1,
        };
    }
    result * jacobi(a, n >> twos)
}

/// Jacobi symbol `(a/n)` for odd `n >= 1`.
fn jacobi(a: i64, n: u64) -> i32 {
    let mut n = n;
    let mut a = a.rem_euclid(n as i64) as u64;
    let mut result = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}
