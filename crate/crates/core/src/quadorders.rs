//! Imaginary quadratic orders, identified by their discriminant.
//!
//! Class numbers are counted directly as the number of reduced primitive
//! positive definite binary quadratic forms. [`class_number_via_conductor`]
//! recomputes them from the maximal order by the conductor formula and
//! serves as an independent check.

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::sync::RwLock;

use crate::arith::{self, gcd, kronecker_unsigned};
use crate::error::{Error, Result};

/// An imaginary quadratic order of discriminant `disc = conductor² · fund_disc`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrderDisc {
    disc: i64,
    fund_disc: i64,
    conductor: u64,
}

impl OrderDisc {
    /// Splits `disc` into its fundamental discriminant and conductor.
    pub fn new(disc: i64) -> Result<Self> {
        check_discriminant(disc)?;
        let abs = disc.unsigned_abs();
        let fact = arith::factor(abs)?;
        // Square part of |Δ|, then strip one factor 2 from the conductor if
        // the remaining core would not be a discriminant.
        let mut conductor = 1u64;
        let mut core = 1u64;
        for &(p, e) in fact.factors() {
            conductor *= p.pow(e / 2);
            if e % 2 == 1 {
                core *= p;
            }
        }
        // -core ≡ 1 (mod 4) is fundamental as is; otherwise 4 must be put back.
        if (core % 4) != 3 {
            debug_assert!(conductor % 2 == 0);
            conductor /= 2;
            core *= 4;
        }
        let order = OrderDisc { disc, fund_disc: -(core as i64), conductor };
        debug_assert!(is_fundamental(order.fund_disc));
        Ok(order)
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub fn fund_disc(&self) -> i64 {
        self.fund_disc
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn is_maximal(&self) -> bool {
        self.conductor == 1
    }
}

impl fmt::Display for OrderDisc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.disc)
    }
}

/// Same as [`OrderDisc::new`].
pub fn split_discriminant(disc: i64) -> Result<OrderDisc> {
    OrderDisc::new(disc)
}

fn check_discriminant(disc: i64) -> Result<()> {
    if disc >= 0 || !matches!(disc.rem_euclid(4), 0 | 1) || disc.unsigned_abs() > arith::MAX_INPUT {
        return Err(Error::NotDiscriminant(disc));
    }
    Ok(())
}

/// True iff `disc` is the discriminant of an imaginary quadratic field.
pub fn is_fundamental(disc: i64) -> bool {
    if disc >= 0 || disc.unsigned_abs() > arith::MAX_INPUT {
        return false;
    }
    match disc.rem_euclid(4) {
        1 => arith::is_squarefree(disc.unsigned_abs()).unwrap_or(false),
        0 => {
            let m = disc / 4;
            matches!(m.rem_euclid(4), 2 | 3) && arith::is_squarefree(m.unsigned_abs()).unwrap_or(false)
        }
        _ => false,
    }
}

/// The form `a x² + b xy + c y²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QuadForm {
    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_primitive(&self) -> bool {
        gcd(gcd(self.a.unsigned_abs(), self.b.unsigned_abs()), self.c.unsigned_abs()) == 1
    }

    /// `|b| <= a <= c`, with `b >= 0` when `|b| = a` or `a = c`.
    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        b.abs() <= a && a <= c && (b >= 0 || (b.abs() != a && a != c))
    }
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// All reduced primitive forms of discriminant `disc`, ordered by `a`, then
/// `|b|`, with `b` before `-b`.
pub fn reduced_forms(disc: i64) -> Result<Vec<QuadForm>> {
    check_discriminant(disc)?;
    let abs = disc.unsigned_abs() as i64;
    let parity = disc.rem_euclid(2);
    let mut forms = Vec::new();
    let mut a = 1i64;
    while 3 * a * a <= abs {
        // b runs over |b| ascending, positive first, within -a < b <= a.
        let mut b_abs = parity;
        while b_abs <= a {
            let signs: &[i64] = if b_abs == 0 { &[1] } else { &[1, -1] };
            for &sign in signs {
                let b = sign * b_abs;
                if b <= -a {
                    continue;
                }
                let num = b * b + abs;
                if num % (4 * a) != 0 {
                    continue;
                }
                let form = QuadForm { a, b, c: num / (4 * a) };
                if form.is_reduced() && form.is_primitive() {
                    forms.push(form);
                }
            }
            b_abs += 2;
        }
        a += 1;
    }
    Ok(forms)
}

/// Number of classes of primitive forms of discriminant `disc`.
pub fn class_number(disc: i64) -> Result<u64> {
    Ok(reduced_forms(disc)?.len() as u64)
}

/// `h(Δ) = h(Δ_K) · f · ∏_{p | f} (1 - (Δ_K/p)/p) / [O_K^× : O^×]`.
///
/// For maximal orders this is just [`class_number`].
pub fn class_number_via_conductor(disc: i64) -> Result<u64> {
    let order = OrderDisc::new(disc)?;
    let base = class_number(order.fund_disc)?;
    if order.is_maximal() {
        return Ok(base);
    }
    // f ∏ (1 - χ(p)/p) = ∏ p^(e-1) (p - χ(p)), exact in integers.
    let mut numer = base as i128;
    for &(p, e) in arith::factor(order.conductor)?.factors() {
        let chi = kronecker_unsigned(order.fund_disc, p) as i128;
        numer *= (p as i128).pow(e - 1) * (p as i128 - chi);
    }
    let unit_index = match order.fund_disc {
        -3 => 3,
        -4 => 2,
        _ => 1,
    };
    if numer % unit_index != 0 {
        return Err(Error::Consistency(format!(
            "conductor formula for {disc} gives non-integral {numer}/{unit_index}"
        )));
    }
    Ok((numer / unit_index) as u64)
}

/// Concurrent memo of `Δ -> h(Δ)`.
///
/// Inserts are idempotent: writing a key twice with the same value is a
/// no-op, with a different value a [`Error::Consistency`] fault.
#[derive(Debug, Default)]
pub struct ClassNumberCache {
    entries: RwLock<HashMap<i64, u64>>,
}

impl ClassNumberCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, disc: i64) -> Option<u64> {
        self.entries.read().unwrap().get(&disc).copied()
    }

    pub fn insert(&self, disc: i64, h: u64) -> Result<()> {
        let mut entries = self.entries.write().unwrap();
        match entries.get(&disc) {
            Some(&old) if old != h => Err(Error::Consistency(format!(
                "class number cache holds h({disc}) = {old}, refusing to overwrite with {h}"
            ))),
            Some(_) => Ok(()),
            None => {
                entries.insert(disc, h);
                Ok(())
            }
        }
    }

    /// Cached [`class_number`].
    pub fn class_number(&self, disc: i64) -> Result<u64> {
        if let Some(h) = self.get(disc) {
            return Ok(h);
        }
        let h = class_number(disc)?;
        self.insert(disc, h)?;
        Ok(h)
    }

    /// Entries sorted by `|Δ|` ascending.
    pub fn snapshot(&self) -> Vec<(i64, u64)> {
        let mut all: Vec<_> = self.entries.read().unwrap().iter().map(|(&d, &h)| (d, h)).collect();
        all.sort_unstable_by_key(|&(d, _)| d.unsigned_abs());
        all
    }

    /// Parses the `Δ<TAB>h` line format written by [`ClassNumberCache::save`].
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let cache = Self::new();
        let fault = |line: usize, reason: String| Error::Cache {
            path: path.to_owned(),
            reason: format!("line {line}: {reason}"),
        };
        let mut prev_abs = 0u64;
        for (i, line) in text.lines().enumerate() {
            let lineno = i + 1;
            if line.is_empty() {
                continue;
            }
            let (d, h) = line
                .split_once('\t')
                .ok_or_else(|| fault(lineno, format!("expected `disc<TAB>h`, got {line:?}")))?;
            let disc: i64 = d.parse().map_err(|e| fault(lineno, format!("bad discriminant: {e}")))?;
            let h: u64 = h.parse().map_err(|e| fault(lineno, format!("bad class number: {e}")))?;
            check_discriminant(disc).map_err(|e| fault(lineno, e.to_string()))?;
            if h == 0 {
                return Err(fault(lineno, "class number must be positive".into()));
            }
            if disc.unsigned_abs() <= prev_abs {
                return Err(fault(lineno, "records must be sorted by |disc| without duplicates".into()));
            }
            prev_abs = disc.unsigned_abs();
            cache.insert(disc, h)?;
        }
        Ok(cache)
    }

    /// Loads a cache file; a missing file yields an empty cache.
    pub fn load(path: &Path) -> Result<Self> {
        match fs::read_to_string(path) {
            Ok(text) => Self::parse(&text, path),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(Self::new()),
            Err(e) => Err(Error::Cache { path: path.to_owned(), reason: e.to_string() }),
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (d, h) in self.snapshot() {
            out.push_str(&format!("{d}\t{h}\n"));
        }
        out
    }

    /// Writes the cache through a temporary file renamed into place.
    pub fn save(&self, path: &Path) -> Result<()> {
        let io_fault = |e: std::io::Error| Error::Cache { path: path.to_owned(), reason: e.to_string() };
        let tmp = path.with_extension("tmp");
        {
            let mut file = fs::File::create(&tmp).map_err(io_fault)?;
            file.write_all(self.render().as_bytes()).map_err(io_fault)?;
            file.sync_all().map_err(io_fault)?;
        }
        fs::rename(&tmp, path).map_err(io_fault)
    }
}
