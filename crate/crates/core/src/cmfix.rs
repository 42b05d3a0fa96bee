//! CM-point counts on `X_0^D(N)` and fixed points of Atkin–Lehner involutions.
//!
//! Two counting rules are provided. [`Variant::Paper`] applies the classical
//! formula as stated: the CM set of an order `R` is nonempty iff
//! `DN / (D(R) N*(R))` divides `Δ_R`, and then has `2^ω(D(R) N(R)) · h(R)`
//! points. [`Variant::Strict`] additionally declares the set empty when a
//! prime divides both `D` and the conductor of `R`, since such orders admit
//! no optimal embedding into the maximal order locally at that prime.
//!
//! All functions here require a squarefree level.

use std::fmt;
use std::str::FromStr;

use crate::arith::{self, kronecker_unsigned};
use crate::error::{Error, Result};
use crate::quadorders::{ClassNumberCache, OrderDisc};
use crate::shimura::CurveLabel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Paper,
    Strict,
}

impl Variant {
    pub const ALL: [Variant; 2] = [Variant::Paper, Variant::Strict];

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Paper => "paper",
            Variant::Strict => "strict",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(Variant::Paper),
            "strict" => Ok(Variant::Strict),
            other => Err(Error::InvalidInput(format!("unknown variant {other:?} (expected paper or strict)"))),
        }
    }
}

fn require_squarefree_level(label: &CurveLabel) -> Result<()> {
    if label.level_is_squarefree() {
        Ok(())
    } else {
        Err(Error::InvalidLabel {
            disc: label.disc(),
            level: label.level(),
            reason: "N must be squarefree for CM and fixed-point counts".into(),
        })
    }
}

/// Orders whose CM points make up the fixed locus of `w_m`:
/// `Z[i]` and `Z[√-2]` for `m = 2`, `Z[√-m]` and `Z[(1+√-m)/2]` for
/// `m ≡ 3 (mod 4)`, and `Z[√-m]` otherwise.
pub fn fixed_point_orders(m: u64) -> Result<Vec<OrderDisc>> {
    if m <= 1 {
        return Err(Error::InvalidInput(format!("involution index must be > 1, got {m}")));
    }
    if !arith::is_squarefree(m)? {
        return Err(Error::InvalidInput(format!("involution index {m} must be squarefree")));
    }
    let m = m as i64;
    let discs = if m == 2 {
        vec![-4, -8]
    } else if m % 4 == 3 {
        vec![-4 * m, -m]
    } else {
        vec![-4 * m]
    };
    discs.into_iter().map(OrderDisc::new).collect()
}

/// `(R/p)`: the Kronecker symbol `(Δ_K/p)` if `p ∤ f`, and 1 if `p | f`.
pub fn local_symbol(order: &OrderDisc, p: u64) -> i32 {
    if order.conductor() % p == 0 {
        1
    } else {
        kronecker_unsigned(order.fund_disc(), p)
    }
}

/// The products `D(R)`, `N(R)` and `N*(R)` entering the CM-point count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CmParts {
    /// Primes `p | D` with `(R/p) = -1`.
    pub disc_inert: u64,
    /// Primes `p | N` with `(R/p) = 1`.
    pub level_split: u64,
    /// Primes `p | N`, `p ∤ f`, with `(Δ_K/p) = 1`.
    pub level_split_unramified: u64,
}

pub fn cm_parts(label: &CurveLabel, order: &OrderDisc) -> Result<CmParts> {
    require_squarefree_level(label)?;
    let disc_inert = label.disc_factors().primes().filter(|&p| local_symbol(order, p) == -1).product();
    let level_split = label.level_factors().primes().filter(|&p| local_symbol(order, p) == 1).product();
    let level_split_unramified = label
        .level_factors()
        .primes()
        .filter(|&p| order.conductor() % p != 0 && kronecker_unsigned(order.fund_disc(), p) == 1)
        .product();
    Ok(CmParts { disc_inert, level_split, level_split_unramified })
}

/// Number of CM points by `order` on the curve.
pub fn cm_count(label: &CurveLabel, order: &OrderDisc, variant: Variant, cache: &ClassNumberCache) -> Result<u64> {
    let parts = cm_parts(label, order)?;
    let modulus = label.dn() / (parts.disc_inert * parts.level_split_unramified);
    if order.disc().unsigned_abs() % modulus != 0 {
        return Ok(0);
    }
    if variant == Variant::Strict && label.disc_factors().primes().any(|p| order.conductor() % p == 0) {
        return Ok(0);
    }
    let omega = arith::omega(parts.disc_inert * parts.level_split)?;
    Ok((1u64 << omega) * cache.class_number(order.disc())?)
}

fn check_index(label: &CurveLabel, m: u64) -> Result<()> {
    if m <= 1 || !arith::is_hall_divisor(m, label.dn()) {
        return Err(Error::NotHallDivisor { m, dn: label.dn() });
    }
    Ok(())
}

/// Number of points fixed by `w_m`.
pub fn fixed_point_count(label: &CurveLabel, m: u64, variant: Variant, cache: &ClassNumberCache) -> Result<u64> {
    require_squarefree_level(label)?;
    check_index(label, m)?;
    fixed_point_orders(m)?
        .iter()
        .map(|order| cm_count(label, order, variant, cache))
        .sum()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderCount {
    pub order: OrderDisc,
    pub paper: u64,
    pub strict: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileEntry {
    pub m: u64,
    pub orders: Vec<OrderCount>,
    pub total_paper: u64,
    pub total_strict: u64,
}

impl ProfileEntry {
    pub fn total(&self, variant: Variant) -> u64 {
        match variant {
            Variant::Paper => self.total_paper,
            Variant::Strict => self.total_strict,
        }
    }

    pub fn diverges(&self) -> bool {
        self.total_paper != self.total_strict
    }
}

/// Fixed-point counts of every nontrivial Atkin–Lehner involution, under both variants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedPointProfile {
    pub parent: CurveLabel,
    pub entries: Vec<ProfileEntry>,
}

pub fn fixed_point_entry(label: &CurveLabel, m: u64, cache: &ClassNumberCache) -> Result<ProfileEntry> {
    require_squarefree_level(label)?;
    check_index(label, m)?;
    let orders = fixed_point_orders(m)?
        .into_iter()
        .map(|order| {
            Ok(OrderCount {
                order,
                paper: cm_count(label, &order, Variant::Paper, cache)?,
                strict: cm_count(label, &order, Variant::Strict, cache)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ProfileEntry {
        m,
        total_paper: orders.iter().map(|o| o.paper).sum(),
        total_strict: orders.iter().map(|o| o.strict).sum(),
        orders,
    })
}

pub fn fixed_point_profile(label: &CurveLabel, cache: &ClassNumberCache) -> Result<FixedPointProfile> {
    require_squarefree_level(label)?;
    let entries = label
        .hall_divisors()
        .into_iter()
        .skip(1)
        .map(|m| fixed_point_entry(label, m, cache))
        .collect::<Result<Vec<_>>>()?;
    Ok(FixedPointProfile { parent: label.clone(), entries })
}
