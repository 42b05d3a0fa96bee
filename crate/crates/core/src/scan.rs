//! Exhaustive search for Shimura curves that could be smooth plane curves.
//!
//! A smooth plane curve of degree `d` has genus `(d-1)(d-2)/2` and complex
//! gonality `d - 1`. Combined with the gonality lower bound
//! `(21/200)(g - 1) <= gon`, this caps `d` at [`max_plane_degree`] and the
//! genus at 190. The genus lower bound in [`crate::shimura`] then confines
//! `DN` to a finite range, and every remaining curve of genus `>= 3` is
//! ruled out because some Atkin–Lehner involution has the wrong number of
//! fixed points: an involution of a smooth plane curve of degree `d >= 4`
//! fixes exactly `d + (1 - (-1)^d)/2` points.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::arith;
use crate::cmfix::{self, FixedPointProfile, Variant};
use crate::error::{Error, Result};
use crate::quadorders::ClassNumberCache;
use crate::shimura::{self, CurveLabel};

/// `DN` bound used by the reference search.
pub const DEFAULT_DN_CUTOFF: u64 = 110_011;

/// Upper end of the range stepped by [`shimura::dn_cutoff`] in reports.
pub const CUTOFF_SEARCH_LIMIT: u64 = 1_000_000;

/// Gonality lower bound coefficient `21/200`.
pub const GONALITY_NUMER: i64 = 21;
pub const GONALITY_DENOM: i64 = 200;

fn plane_genus(d: u32) -> u64 {
    let d = d as u64;
    if d == 0 {
        return 0;
    }
    (d - 1) * d.saturating_sub(2) / 2
}

fn degree_allowed(d: u32) -> bool {
    // (21/200)(g - 1) <= d - 1, cleared of denominators.
    let g = plane_genus(d) as i64;
    GONALITY_NUMER * (g - 1) <= GONALITY_DENOM * (d as i64 - 1)
}

/// Largest `d >= 3` for which a smooth plane curve of degree `d` is
/// compatible with the gonality bound.
pub fn max_plane_degree() -> u32 {
    // The overshoot is quadratic in d, so the first failure is final.
    let mut d = 3;
    while degree_allowed(d + 1) {
        d += 1;
    }
    d
}

/// `{(d-1)(d-2)/2 : 1 <= d <= d_max}`.
pub fn admissible_genera(d_max: u32) -> BTreeSet<u64> {
    (1..=d_max).map(plane_genus).collect()
}

/// Inverts `g = (d-1)(d-2)/2` for `g >= 3`.
pub fn degree_from_genus(genus: u64) -> Result<u32> {
    if genus < 3 {
        return Err(Error::InvalidInput(format!("degree_from_genus needs genus >= 3, got {genus}")));
    }
    // d - 1.5 = sqrt(2g + 1/4); start near the root and check exactly.
    let approx = ((2.0 * genus as f64 + 0.25).sqrt() + 1.5).round() as u32;
    (approx.saturating_sub(1)..=approx + 1)
        .find(|&d| plane_genus(d) == genus)
        .ok_or_else(|| Error::InvalidInput(format!("{genus} is not the genus of a smooth plane curve")))
}

/// Fixed points of an involution on a smooth plane curve of degree `d >= 4`.
pub fn expected_fixed_count(d: u32) -> Result<u64> {
    if d < 4 {
        return Err(Error::InvalidInput(format!("fixed-point count needs degree >= 4, got {d}")));
    }
    Ok(d as u64 + (d as u64 % 2))
}

/// All `(D, N)` with `DN <= dn_cutoff` squarefree and genus in `genera`,
/// ordered by `(DN, D)`.
///
/// Each squarefree `n` is split into `D` (an even number, at least two, of
/// its primes) and `N` (the rest). Runs on the current rayon pool.
pub fn enumerate_candidates(dn_cutoff: u64, genera: &BTreeSet<u64>) -> Result<Vec<(CurveLabel, u64)>> {
    let per_n = (6..=dn_cutoff)
        .into_par_iter()
        .map(|n| candidates_with_dn(n, genera))
        .collect::<Result<Vec<_>>>()?;
    let mut all: Vec<_> = per_n.into_iter().flatten().collect();
    all.sort_by_key(|(label, _)| label.sort_key());
    Ok(all)
}

fn candidates_with_dn(n: u64, genera: &BTreeSet<u64>) -> Result<Vec<(CurveLabel, u64)>> {
    let fact = arith::factor(n)?;
    if !fact.is_squarefree() || fact.omega() < 2 {
        return Ok(Vec::new());
    }
    let primes: Vec<u64> = fact.primes().collect();
    let mut out = Vec::new();
    for mask in 1u32..(1 << primes.len()) {
        if mask.count_ones() % 2 != 0 {
            continue;
        }
        let disc: u64 = primes
            .iter()
            .enumerate()
            .filter(|&(i, _)| mask & (1 << i) != 0)
            .map(|(_, &p)| p)
            .product();
        let label = CurveLabel::new(disc, n / disc)?;
        let genus = shimura::genus(&label)?;
        if genera.contains(&genus) {
            out.push((label, genus));
        }
    }
    Ok(out)
}

/// An involution index at which Property (1) fails, with the actual count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Witness {
    pub m: u64,
    pub count: u64,
}

/// Outcome of testing "every `w_m`, `1 < m ∥ DN`, fixes exactly the
/// expected number of points".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyCheck {
    pub holds: bool,
    pub witnesses: Vec<Witness>,
}

pub fn check_property1(profile: &FixedPointProfile, degree: u32, variant: Variant) -> Result<PropertyCheck> {
    let expected = expected_fixed_count(degree)?;
    let witnesses: Vec<Witness> = profile
        .entries
        .iter()
        .filter(|e| e.total(variant) != expected)
        .map(|e| Witness { m: e.m, count: e.total(variant) })
        .collect();
    Ok(PropertyCheck { holds: witnesses.is_empty(), witnesses })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateRecord {
    pub label: CurveLabel,
    pub genus: u64,
    /// Present iff `genus >= 3`.
    pub degree: Option<u32>,
    pub expected_fixed: Option<u64>,
    pub profile: Option<FixedPointProfile>,
    pub passes_paper: Option<bool>,
    pub passes_strict: Option<bool>,
    /// Failing indices under the report's headline variant.
    pub witnesses: Vec<Witness>,
}

impl CandidateRecord {
    pub fn is_high_genus(&self) -> bool {
        self.genus >= 3
    }

    pub fn passes(&self, variant: Variant) -> Option<bool> {
        match variant {
            Variant::Paper => self.passes_paper,
            Variant::Strict => self.passes_strict,
        }
    }

    fn evaluate(label: CurveLabel, genus: u64, variant: Variant, cache: &ClassNumberCache) -> Result<Self> {
        if genus < 3 {
            return Ok(CandidateRecord {
                label,
                genus,
                degree: None,
                expected_fixed: None,
                profile: None,
                passes_paper: None,
                passes_strict: None,
                witnesses: Vec::new(),
            });
        }
        let degree = degree_from_genus(genus)?;
        let profile = cmfix::fixed_point_profile(&label, cache)?;
        let paper = check_property1(&profile, degree, Variant::Paper)?;
        let strict = check_property1(&profile, degree, Variant::Strict)?;
        let (passes_paper, passes_strict) = (paper.holds, strict.holds);
        let witnesses = match variant {
            Variant::Paper => paper.witnesses,
            Variant::Strict => strict.witnesses,
        };
        Ok(CandidateRecord {
            label,
            genus,
            degree: Some(degree),
            expected_fixed: Some(expected_fixed_count(degree)?),
            profile: Some(profile),
            passes_paper: Some(passes_paper),
            passes_strict: Some(passes_strict),
            witnesses,
        })
    }
}

/// A fixed-point count that differs between the two variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Divergence {
    pub disc: u64,
    pub level: u64,
    pub m: u64,
    pub paper: u64,
    pub strict: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanConfig {
    pub dn_cutoff: u64,
    /// Defaults to [`max_plane_degree`].
    pub degree_cap: Option<u32>,
    /// Variant behind the headline verdict and the witness lists.
    pub variant: Variant,
    /// Worker threads; 0 lets rayon decide. Never affects the report.
    pub jobs: usize,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig { dn_cutoff: DEFAULT_DN_CUTOFF, degree_cap: None, variant: Variant::Paper, jobs: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanParams {
    pub dn_cutoff: u64,
    /// Cutoff implied by the genus lower bound, if one exists below
    /// [`CUTOFF_SEARCH_LIMIT`]. Informational; the scan uses `dn_cutoff`.
    pub derived_dn_cutoff: Option<u64>,
    pub degree_cap: u32,
    pub genus_cap: u64,
    pub variant: Variant,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanReport {
    pub params: ScanParams,
    pub candidate_count: usize,
    pub high_genus_count: usize,
    pub low_genus_count: usize,
    pub max_disc: u64,
    pub max_level: u64,
    pub records: Vec<CandidateRecord>,
    pub verdict_paper: bool,
    pub verdict_strict: bool,
    pub diagnostics: Vec<Divergence>,
}

impl ScanReport {
    /// Headline verdict: no candidate of genus `>= 3` satisfies Property (1).
    pub fn verdict(&self) -> bool {
        self.verdict_for(self.params.variant)
    }

    pub fn verdict_for(&self, variant: Variant) -> bool {
        match variant {
            Variant::Paper => self.verdict_paper,
            Variant::Strict => self.verdict_strict,
        }
    }

    pub fn high_genus(&self) -> impl Iterator<Item = &CandidateRecord> {
        self.records.iter().filter(|r| r.is_high_genus())
    }

    pub fn low_genus(&self) -> impl Iterator<Item = &CandidateRecord> {
        self.records.iter().filter(|r| !r.is_high_genus())
    }

    /// Recomputes both verdicts from the records alone.
    pub fn recompute_verdicts(&self) -> (bool, bool) {
        let none_pass = |v: Variant| self.high_genus().all(|r| r.passes(v) == Some(false));
        (none_pass(Variant::Paper), none_pass(Variant::Strict))
    }

    /// Checks that every summary field agrees with the record list.
    pub fn check_consistency(&self) -> Result<()> {
        let fault = |what: &str| Err(Error::Consistency(format!("scan report: {what}")));
        if self.candidate_count != self.records.len() {
            return fault("candidate count differs from record count");
        }
        if self.high_genus_count != self.high_genus().count() || self.low_genus_count != self.low_genus().count() {
            return fault("genus tallies differ from records");
        }
        if self.candidate_count != self.high_genus_count + self.low_genus_count {
            return fault("high + low != candidates");
        }
        if (self.verdict_paper, self.verdict_strict) != self.recompute_verdicts() {
            return fault("verdicts differ from records");
        }
        if self.max_disc != self.records.iter().map(|r| r.label.disc()).max().unwrap_or(0)
            || self.max_level != self.records.iter().map(|r| r.label.level()).max().unwrap_or(0)
        {
            return fault("max D / max N differ from records");
        }
        for r in self.high_genus() {
            let d = r.degree.ok_or_else(|| Error::Consistency("high-genus record without degree".into()))?;
            if plane_genus(d) != r.genus {
                return fault("degree does not invert the genus-degree formula");
            }
        }
        Ok(())
    }
}

/// Runs the full search: caps, enumeration, fixed-point profiles, verdicts.
pub fn run_scan(config: &ScanConfig, cache: &ClassNumberCache) -> Result<ScanReport> {
    if config.dn_cutoff < 6 {
        return Err(Error::InvalidInput(format!("DN cutoff must be >= 6, got {}", config.dn_cutoff)));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| Error::InvalidInput(format!("cannot start {} workers: {e}", config.jobs)))?;
    pool.install(|| scan_in_pool(config, cache))
}

fn scan_in_pool(config: &ScanConfig, cache: &ClassNumberCache) -> Result<ScanReport> {
    let degree_cap = config.degree_cap.unwrap_or_else(max_plane_degree);
    if degree_cap == 0 {
        return Err(Error::InvalidInput("degree cap must be >= 1".into()));
    }
    let genera = admissible_genera(degree_cap);
    let genus_cap = *genera.last().expect("degree_cap >= 1");
    let derived_dn_cutoff = match shimura::dn_cutoff(genus_cap, CUTOFF_SEARCH_LIMIT) {
        Ok(m) => Some(m),
        Err(Error::InvalidInput(_)) => None,
        Err(e) => return Err(e),
    };

    let candidates = enumerate_candidates(config.dn_cutoff, &genera)?;
    let records = candidates
        .into_par_iter()
        .map(|(label, genus)| CandidateRecord::evaluate(label, genus, config.variant, cache))
        .collect::<Result<Vec<_>>>()?;

    let diagnostics = records
        .iter()
        .filter_map(|r| r.profile.as_ref())
        .flat_map(|p| {
            p.entries.iter().filter(|e| e.diverges()).map(|e| Divergence {
                disc: p.parent.disc(),
                level: p.parent.level(),
                m: e.m,
                paper: e.total_paper,
                strict: e.total_strict,
            })
        })
        .collect();

    let mut report = ScanReport {
        params: ScanParams {
            dn_cutoff: config.dn_cutoff,
            derived_dn_cutoff,
            degree_cap,
            genus_cap,
            variant: config.variant,
        },
        candidate_count: records.len(),
        high_genus_count: records.iter().filter(|r| r.is_high_genus()).count(),
        low_genus_count: records.iter().filter(|r| !r.is_high_genus()).count(),
        max_disc: records.iter().map(|r| r.label.disc()).max().unwrap_or(0),
        max_level: records.iter().map(|r| r.label.level()).max().unwrap_or(0),
        records,
        verdict_paper: false,
        verdict_strict: false,
        diagnostics,
    };
    (report.verdict_paper, report.verdict_strict) = report.recompute_verdicts();
    report.check_consistency()?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_cap_is_21() {
        assert_eq!(max_plane_degree(), 21);
        // 21/200 * 189 = 19.845 <= 20, 21/200 * 209 = 21.945 > 21.
        assert!(GONALITY_NUMER * 189 <= GONALITY_DENOM * 20);
        assert!(GONALITY_NUMER * 209 > GONALITY_DENOM * 21);
        assert!(degree_allowed(21) && !degree_allowed(22));
    }

    #[test]
    fn genera_sets() {
        let g = admissible_genera(21);
        assert_eq!(g.len(), 20);
        assert_eq!(g.last(), Some(&190));
        for x in [0, 1, 3, 6, 10] {
            assert!(g.contains(&x));
        }
        assert_eq!(admissible_genera(1).into_iter().collect::<Vec<_>>(), vec![0]);
        assert_eq!(admissible_genera(4).into_iter().collect::<Vec<_>>(), vec![0, 1, 3]);
    }

    #[test]
    fn degree_inversion() {
        assert_eq!(degree_from_genus(3).unwrap(), 4);
        assert_eq!(degree_from_genus(190).unwrap(), 21);
        assert!(degree_from_genus(4).is_err());
        assert!(degree_from_genus(1).is_err());
        for d in 4..200 {
            assert_eq!(degree_from_genus(plane_genus(d)).unwrap(), d);
        }
    }

    #[test]
    fn expected_counts() {
        assert_eq!(expected_fixed_count(4).unwrap(), 4);
        assert_eq!(expected_fixed_count(5).unwrap(), 6);
        assert_eq!(expected_fixed_count(21).unwrap(), 22);
        assert!(expected_fixed_count(3).is_err());
    }

    #[test]
    fn small_genus_zero_enumeration() {
        let labels: Vec<_> = enumerate_candidates(30, &BTreeSet::from([0]))
            .unwrap()
            .into_iter()
            .map(|(l, g)| (l.disc(), l.level(), g))
            .collect();
        assert_eq!(labels, vec![(6, 1, 0), (10, 1, 0), (22, 1, 0)]);
    }

    #[test]
    fn property_check_collects_witnesses() {
        let cache = ClassNumberCache::new();
        let label = CurveLabel::new(6, 1).unwrap();
        let profile = cmfix::fixed_point_profile(&label, &cache).unwrap();
        // Pretend the curve were a quartic: every w_m would need 4 fixed points.
        let check = check_property1(&profile, 4, Variant::Strict).unwrap();
        assert!(!check.holds);
        assert_eq!(check.witnesses.iter().map(|w| (w.m, w.count)).collect::<Vec<_>>(), vec![(2, 2), (3, 2), (6, 2)]);
        let check = check_property1(&profile, 4, Variant::Paper).unwrap();
        assert_eq!(check.witnesses[1], Witness { m: 3, count: 3 });
    }

    #[test]
    fn verdict_flips_when_a_record_passes() {
        let cache = ClassNumberCache::new();
        let config = ScanConfig { dn_cutoff: 600, ..ScanConfig::default() };
        let mut report = run_scan(&config, &cache).unwrap();
        assert!(report.verdict());
        assert!(report.high_genus_count > 0);
        let rec = report.records.iter_mut().find(|r| r.is_high_genus()).unwrap();
        rec.passes_paper = Some(true);
        assert_eq!(report.recompute_verdicts().0, false);
        assert!(report.check_consistency().is_err());
    }

    #[test]
    fn bad_configs() {
        let cache = ClassNumberCache::new();
        assert!(run_scan(&ScanConfig { dn_cutoff: 5, ..ScanConfig::default() }, &cache).is_err());
        assert!(run_scan(&ScanConfig { dn_cutoff: 100, degree_cap: Some(0), ..ScanConfig::default() }, &cache).is_err());
    }
}
