//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test -p shimura-cli --test acceptance`.

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, Output};

use shimura_core::cmfix::{self, Variant};
use shimura_core::quadorders::{self, OrderDisc};
use shimura_core::scan::{self, ScanConfig, ScanReport};
use shimura_core::shimura::{self, CurveLabel};
use shimura_core::{arith, ClassNumberCache};

const PAPER_DN_CUTOFF: u64 = 110_011;
const GENUS_ZERO: [(u64, u64); 3] = [(6, 1), (10, 1), (22, 1)];
const GENUS_ONE: [(u64, u64); 11] =
    [(14, 1), (15, 1), (21, 1), (6, 5), (10, 3), (33, 1), (34, 1), (6, 7), (46, 1), (10, 7), (6, 13)];
const CANDIDATES: usize = 312;
const HIGH_GENUS: usize = 298;
const LOW_GENUS: usize = 14;
const MAX_D: u64 = 6990;
const MAX_N: u64 = 1033;
const DEGREE_CAP: u32 = 21;
const GENUS_CAP: u64 = 190;
const BOUND_CHECK_LIMIT: u64 = 1_000_000;
const CLASS_NUMBER_RANGE: i64 = -10_000;
const ELLIPTIC_DN_LIMIT: u64 = 1_000;
const RIEMANN_HURWITZ_DN_LIMIT: u64 = 3_000;

/// `Ok` carries an optional note printed after the PASS line.
type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn pairs(labels: &[(CurveLabel, u64)]) -> BTreeSet<(u64, u64)> {
    labels.iter().map(|(l, _)| (l.disc(), l.level())).collect()
}

fn squarefree_labels(max_dn: u64) -> Vec<CurveLabel> {
    (6..=max_dn)
        .filter(|&n| arith::is_squarefree(n).unwrap())
        .flat_map(|n| arith::hall_divisors(n).unwrap().into_iter().filter_map(move |d| CurveLabel::new(d, n / d).ok()))
        .collect()
}

fn genus_zero_classification() -> Check {
    let found = scan::enumerate_candidates(PAPER_DN_CUTOFF, &BTreeSet::from([0])).map_err(|e| e.to_string())?;
    ensure(pairs(&found) == BTreeSet::from(GENUS_ZERO) && found.len() == 3, || format!("got {:?}", pairs(&found)))?;
    Ok(String::new())
}

fn genus_one_classification() -> Check {
    let found = scan::enumerate_candidates(PAPER_DN_CUTOFF, &BTreeSet::from([1])).map_err(|e| e.to_string())?;
    ensure(pairs(&found) == BTreeSet::from(GENUS_ONE) && found.len() == 11, || format!("got {:?}", pairs(&found)))?;
    Ok(String::new())
}

fn candidate_tallies(report: &ScanReport, verify_stdout: &str) -> Check {
    let got = (report.candidate_count, report.high_genus_count, report.low_genus_count, report.max_disc, report.max_level);
    ensure(got == (CANDIDATES, HIGH_GENUS, LOW_GENUS, MAX_D, MAX_N), || format!("got {got:?}"))?;
    let expected = format!("candidates={CANDIDATES} high={HIGH_GENUS} low={LOW_GENUS} verdict=PASS");
    ensure(verify_stdout.lines().last() == Some(expected.as_str()), || {
        format!("verify summary line was {:?}", verify_stdout.lines().last())
    })?;
    let low: BTreeSet<(u64, u64, u64)> =
        report.low_genus().map(|r| (r.label.disc(), r.label.level(), r.genus)).collect();
    let remark: BTreeSet<(u64, u64, u64)> = GENUS_ZERO
        .iter()
        .map(|&(d, n)| (d, n, 0))
        .chain(GENUS_ONE.iter().map(|&(d, n)| (d, n, 1)))
        .collect();
    ensure(low == remark, || format!("low-genus records {low:?}"))?;
    Ok(String::new())
}

fn main_theorem(report: &ScanReport) -> Check {
    let passing_paper: Vec<_> = report.high_genus().filter(|r| r.passes_paper != Some(false)).collect();
    ensure(passing_paper.is_empty(), || format!("{} records satisfy Property (1) (paper)", passing_paper.len()))?;
    let passing_strict: Vec<_> = report.high_genus().filter(|r| r.passes_strict != Some(false)).collect();
    ensure(passing_strict.is_empty(), || format!("{} records satisfy Property (1) (strict)", passing_strict.len()))?;
    ensure(report.verdict_paper && report.verdict_strict && report.verdict(), || "verdict is not PASS".into())?;
    ensure(report.high_genus().all(|r| !r.witnesses.is_empty()), || "a failing record has no witness".into())?;
    let stray: Vec<_> = report.diagnostics.iter().filter(|d| !(d.m % 4 == 3 && d.disc % 2 == 0)).collect();
    ensure(stray.is_empty(), || format!("divergences outside m = 3 mod 4, 2 | D: {stray:?}"))?;
    Ok(format!("{} per-m divergences between variants, all with m = 3 mod 4 and 2 | D", report.diagnostics.len()))
}

fn degree_cap() -> Check {
    let d = scan::max_plane_degree();
    let g = scan::admissible_genera(d).last().copied();
    ensure(d == DEGREE_CAP && g == Some(GENUS_CAP), || format!("d_max={d} g_max={g:?}"))?;
    Ok(String::new())
}

fn cutoff_consistency() -> Check {
    for x in PAPER_DN_CUTOFF + 1..=BOUND_CHECK_LIMIT {
        let v = shimura::genus_lower_bound(x).map_err(|e| e.to_string())?;
        ensure(v > GENUS_CAP as f64, || format!("bound({x}) = {v} <= {GENUS_CAP}"))?;
    }
    let derived = shimura::dn_cutoff(GENUS_CAP, BOUND_CHECK_LIMIT).map_err(|e| e.to_string())?;
    ensure(derived <= PAPER_DN_CUTOFF, || format!("derived cutoff {derived} exceeds {PAPER_DN_CUTOFF}"))?;
    Ok(format!("smallest safe cutoff from the bound: {derived}"))
}

fn class_number_oracle() -> Check {
    for disc in (CLASS_NUMBER_RANGE..=-3).filter(|d| matches!(d.rem_euclid(4), 0 | 1)) {
        let direct = quadorders::class_number(disc).map_err(|e| e.to_string())?;
        let formula = quadorders::class_number_via_conductor(disc).map_err(|e| e.to_string())?;
        ensure(direct == formula, || format!("h({disc}): forms {direct}, conductor formula {formula}"))?;
    }
    Ok(String::new())
}

fn elliptic_cm_consistency() -> Check {
    let cache = ClassNumberCache::new();
    let gaussian = OrderDisc::new(-4).unwrap();
    let eisenstein = OrderDisc::new(-3).unwrap();
    for label in squarefree_labels(ELLIPTIC_DN_LIMIT) {
        for v in Variant::ALL {
            let e4 = shimura::elliptic_count(&label, 4).unwrap();
            let e3 = shimura::elliptic_count(&label, 3).unwrap();
            let c4 = cmfix::cm_count(&label, &gaussian, v, &cache).unwrap();
            let c3 = cmfix::cm_count(&label, &eisenstein, v, &cache).unwrap();
            ensure(e4 == c4 && e3 == c3, || format!("{label} ({v}): e4={e4} cm(-4)={c4} e3={e3} cm(-3)={c3}"))?;
        }
    }
    Ok(String::new())
}

fn strict_geometry() -> Check {
    let cache = ClassNumberCache::new();
    for (d, n) in GENUS_ZERO {
        let label = CurveLabel::new(d, n).unwrap();
        for e in cmfix::fixed_point_profile(&label, &cache).unwrap().entries {
            ensure(e.total_strict == 2, || format!("{label} w_{} fixes {} points", e.m, e.total_strict))?;
        }
    }
    for label in squarefree_labels(RIEMANN_HURWITZ_DN_LIMIT) {
        let g = shimura::genus(&label).unwrap();
        for e in cmfix::fixed_point_profile(&label, &cache).unwrap().entries {
            let r = e.total_strict;
            ensure(r % 2 == 0 && r <= 2 * g + 2 && (2 * g + 2 - r) % 4 == 0, || {
                format!("{label} w_{}: r={r}, g={g}", e.m)
            })?;
        }
    }
    Ok(String::new())
}

fn run_verify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shimura"))
        .arg("verify")
        .args(args)
        .env_remove(shimura_cli::CACHE_ENV)
        .output()
        .expect("spawn shimura")
}

fn determinism(dir: &Path) -> Check {
    for format in ["table", "json", "csv"] {
        let runs: Vec<Output> = [["--jobs", "1"], ["--jobs", "4"], ["--jobs", "4"], ["--jobs", "0"]]
            .iter()
            .map(|jobs| run_verify(&["--format", format, jobs[0], jobs[1]]))
            .collect();
        for (i, out) in runs.iter().enumerate() {
            ensure(out.status.code() == Some(0), || format!("{format} run {i} exited with {:?}", out.status))?;
            ensure(out.stdout == runs[0].stdout, || format!("{format} run {i} differs from run 0"))?;
        }
    }
    let path = dir.join("report.json");
    let out = run_verify(&["--format", "json", "--out", path.to_str().unwrap()]);
    ensure(out.status.success(), || "verify --out failed".into())?;
    let file = std::fs::read(&path).map_err(|e| e.to_string())?;
    ensure(file == run_verify(&["--format", "json"]).stdout, || "--out file differs from stdout".into())?;
    let value: serde_json::Value = serde_json::from_slice(&file).map_err(|e| e.to_string())?;
    ensure(value["summary"]["candidates"] == CANDIDATES, || "json summary candidates".into())?;
    ensure(value["records"].as_array().map(Vec::len) == Some(CANDIDATES), || "json records length".into())?;
    Ok(String::new())
}

fn criterion(id: usize, name: &str, check: impl FnOnce() -> Check) -> bool {
    let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
        Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
    });
    match outcome {
        Ok(note) => {
            println!("[PASS] AC{id:<2} {name}");
            if !note.is_empty() {
                println!("       {note}");
            }
            true
        }
        Err(msg) => {
            println!("[FAIL] AC{id:<2} {name}: {msg}");
            false
        }
    }
}

fn main() {
    let cache = ClassNumberCache::new();
    let report = scan::run_scan(&ScanConfig::default(), &cache).expect("default scan runs");
    let verify = run_verify(&[]);
    let verify_stdout = String::from_utf8_lossy(&verify.stdout).into_owned();
    let dir = tempfile::tempdir().expect("temp dir");

    let results = [
        criterion(1, "genus-0 classification", genus_zero_classification),
        criterion(2, "genus-1 classification", genus_one_classification),
        criterion(3, "candidate tallies 312 / 298 / 14, max D 6990, max N 1033", || {
            candidate_tallies(&report, &verify_stdout)
        }),
        criterion(4, "Property (1) fails for every high-genus candidate", || main_theorem(&report)),
        criterion(5, "degree cap 21, genus cap 190", degree_cap),
        criterion(6, "genus bound > 190 on (110011, 10^6]", cutoff_consistency),
        criterion(7, "class numbers agree with conductor formula on [-10^4, -3]", class_number_oracle),
        criterion(8, "e_4, e_3 equal CM counts of Z[i], Z[zeta_3] for DN <= 1000", elliptic_cm_consistency),
        criterion(9, "strict variant: genus-0 involutions and Riemann-Hurwitz for DN <= 3000", strict_geometry),
        criterion(10, "verify output identical across runs and --jobs", || determinism(dir.path())),
    ];
    let failed = results.iter().filter(|ok| !**ok).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
