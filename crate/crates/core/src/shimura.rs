//! Numerical invariants of the Shimura curve `X_0^D(N)`.

use std::fmt;

use crate::arith::{self, gcd, kronecker_unsigned, Factorization};
use crate::error::{Error, Result};

/// Euler–Mascheroni constant, as used by [`genus_lower_bound`].
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_86;

/// A pair `(D, N)`: quaternion discriminant and Eichler level.
///
/// `D > 1` is squarefree with an even number of prime factors, and
/// `gcd(D, N) = 1`. The level need not be squarefree, but most of
/// [`crate::cmfix`] and [`crate::scan`] require it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CurveLabel {
    disc: Factorization,
    level: Factorization,
}

impl CurveLabel {
    pub fn new(disc: u64, level: u64) -> Result<Self> {
        let invalid = |reason: &str| Error::InvalidLabel { disc, level, reason: reason.to_owned() };
        if disc <= 1 {
            return Err(invalid("D must be > 1"));
        }
        if level == 0 {
            return Err(invalid("N must be positive"));
        }
        let d = arith::factor(disc)?;
        let n = arith::factor(level)?;
        if d.omega() % 2 != 0 {
            return Err(invalid("omega(D) must be even and positive"));
        }
        if !d.is_squarefree() {
            return Err(invalid("D must be squarefree"));
        }
        if gcd(disc, level) != 1 {
            return Err(invalid("D and N must be coprime"));
        }
        if disc.checked_mul(level).map_or(true, |dn| dn > arith::MAX_INPUT) {
            return Err(invalid("DN exceeds 2^62"));
        }
        Ok(CurveLabel { disc: d, level: n })
    }

    pub fn disc(&self) -> u64 {
        self.disc.value()
    }

    pub fn level(&self) -> u64 {
        self.level.value()
    }

    pub fn dn(&self) -> u64 {
        self.disc() * self.level()
    }

    pub fn disc_factors(&self) -> &Factorization {
        &self.disc
    }

    pub fn level_factors(&self) -> &Factorization {
        &self.level
    }

    pub fn level_is_squarefree(&self) -> bool {
        self.level.is_squarefree()
    }

    /// Hall divisors of `DN`; these index the Atkin–Lehner group.
    pub fn hall_divisors(&self) -> Vec<u64> {
        // D and N are coprime, so the prime powers of DN are those of D and N.
        let mut divisors = vec![1u64];
        for &(p, e) in self.disc.factors().iter().chain(self.level.factors()) {
            let pe = p.pow(e);
            for i in 0..divisors.len() {
                divisors.push(divisors[i] * pe);
            }
        }
        divisors.sort_unstable();
        divisors
    }

    pub fn sort_key(&self) -> (u64, u64) {
        (self.dn(), self.disc())
    }
}

impl fmt::Display for CurveLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X_0^{}({})", self.disc(), self.level())
    }
}

/// `e_k(D, N)` for `k ∈ {3, 4}`: the number of elliptic points of order 3
/// (`k = 3`) or 2 (`k = 4`).
pub fn elliptic_count(label: &CurveLabel, k: u32) -> Result<u64> {
    if k != 3 && k != 4 {
        return Err(Error::InvalidInput(format!("elliptic_count needs k in {{3, 4}}, got {k}")));
    }
    let minus_k = -(k as i64);
    let mut count = 1u64;
    for p in label.disc.primes() {
        count *= (1 - kronecker_unsigned(minus_k, p)) as u64;
    }
    for &(q, e) in label.level.factors() {
        let chi = kronecker_unsigned(minus_k, q);
        count *= if e == 1 {
            (1 + chi) as u64
        } else if chi == 1 {
            2
        } else {
            0
        };
    }
    Ok(count)
}

/// Genus `1 + φ(D)ψ(N)/12 - e_4/4 - e_3/3`, evaluated exactly.
pub fn genus(label: &CurveLabel) -> Result<u64> {
    let phi = label.disc.totient() as i128;
    let psi = label.level.dedekind_psi()? as i128;
    let e4 = elliptic_count(label, 4)? as i128;
    let e3 = elliptic_count(label, 3)? as i128;
    let twelve_g = 12 + phi * psi - 3 * e4 - 4 * e3;
    if twelve_g % 12 != 0 || twelve_g < 0 {
        return Err(Error::Consistency(format!(
            "genus of {label} evaluates to {twelve_g}/12, not a nonnegative integer"
        )));
    }
    Ok((twelve_g / 12) as u64)
}

/// Lower bound for the genus of any `X_0^D(N)` with `DN = x`:
/// `1 + (x/12) / (e^γ log log x + 3 / log log 6) - 7√x / 3`.
pub fn genus_lower_bound(x: u64) -> Result<f64> {
    if x < 16 {
        return Err(Error::InvalidInput(format!("genus_lower_bound needs x >= 16, got {x}")));
    }
    Ok(lower_bound_unchecked(x as f64))
}

fn lower_bound_unchecked(x: f64) -> f64 {
    let denom = EULER_GAMMA.exp() * x.ln().ln() + 3.0 / 6f64.ln().ln();
    1.0 + x / 12.0 / denom - 7.0 * x.sqrt() / 3.0
}

/// Smallest `M` such that the genus lower bound exceeds `genus_cap` for every
/// integer `x` in `(M, search_limit]`.
///
/// The bound is stepped over the whole range; the result is rejected unless
/// it is nondecreasing on `[M + 1, search_limit]`.
pub fn dn_cutoff(genus_cap: u64, search_limit: u64) -> Result<u64> {
    if search_limit < 1_000_000 {
        return Err(Error::InvalidInput(format!("dn_cutoff needs search_limit >= 10^6, got {search_limit}")));
    }
    let cap = genus_cap as f64;
    // Values below 16 are not covered by the bound and count as "not above cap".
    let mut last_not_above = 15u64;
    for x in 16..=search_limit {
        if lower_bound_unchecked(x as f64) <= cap {
            last_not_above = x;
        }
    }
    if last_not_above == search_limit {
        return Err(Error::InvalidInput(format!(
            "genus bound never exceeds {genus_cap} below {search_limit}"
        )));
    }
    let mut prev = f64::NEG_INFINITY;
    for x in (last_not_above + 1).max(16)..=search_limit {
        let v = lower_bound_unchecked(x as f64);
        if v < prev {
            return Err(Error::Consistency(format!("genus lower bound decreases at x = {x}")));
        }
        prev = v;
    }
    Ok(last_not_above)
}
