//! Report emitters for `shimura verify`.
//!
//! JSON documents have sorted keys and arrays ordered by `(DN, D, m)`, so
//! reports can be diffed against golden files. CSV carries one row per
//! candidate under a fixed header.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;
use shimura_core::{CandidateRecord, ScanReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Table,
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "table" => Ok(OutputFormat::Table),
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(format!("unknown format {other:?} (expected table, json or csv)")),
        }
    }
}

pub const CSV_HEADER: [&str; 9] =
    ["D", "N", "DN", "genus", "degree", "expected_fixed", "pass_paper", "pass_strict", "witnesses"];

#[derive(Serialize)]
struct JsonReport {
    params: JsonParams,
    summary: JsonSummary,
    records: Vec<JsonRecord>,
    diagnostics: Vec<JsonDivergence>,
}

#[derive(Serialize)]
struct JsonParams {
    dn_cutoff: u64,
    derived_dn_cutoff: Option<u64>,
    degree_cap: u32,
    genus_cap: u64,
    variant: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    timestamp: Option<u64>,
}

#[derive(Serialize)]
#[allow(non_snake_case)]
struct JsonSummary {
    candidates: usize,
    high_genus: usize,
    low_genus: usize,
    max_D: u64,
    max_N: u64,
    verdict_paper: bool,
    verdict_strict: bool,
}

#[derive(Serialize)]
#[allow(non_snake_case)]
struct JsonRecord {
    D: u64,
    N: u64,
    DN: u64,
    genus: u64,
    degree: Option<u32>,
    expected_fixed: Option<u64>,
    fixed: Vec<JsonFixed>,
    witnesses: Vec<u64>,
}

#[derive(Serialize)]
struct JsonFixed {
    m: u64,
    paper: u64,
    strict: u64,
}

#[derive(Serialize)]
#[allow(non_snake_case)]
struct JsonDivergence {
    D: u64,
    N: u64,
    m: u64,
    paper: u64,
    strict: u64,
}

fn json_record(r: &CandidateRecord) -> JsonRecord {
    JsonRecord {
        D: r.label.disc(),
        N: r.label.level(),
        DN: r.label.dn(),
        genus: r.genus,
        degree: r.degree,
        expected_fixed: r.expected_fixed,
        fixed: r
            .profile
            .iter()
            .flat_map(|p| &p.entries)
            .map(|e| JsonFixed { m: e.m, paper: e.total_paper, strict: e.total_strict })
            .collect(),
        witnesses: r.witnesses.iter().map(|w| w.m).collect(),
    }
}

/// Pretty-printed JSON document with lexicographically sorted keys.
pub fn render_json(report: &ScanReport, timestamp: Option<u64>) -> String {
    let doc = JsonReport {
        params: JsonParams {
            dn_cutoff: report.params.dn_cutoff,
            derived_dn_cutoff: report.params.derived_dn_cutoff,
            degree_cap: report.params.degree_cap,
            genus_cap: report.params.genus_cap,
            variant: report.params.variant.as_str(),
            timestamp,
        },
        summary: JsonSummary {
            candidates: report.candidate_count,
            high_genus: report.high_genus_count,
            low_genus: report.low_genus_count,
            max_D: report.max_disc,
            max_N: report.max_level,
            verdict_paper: report.verdict_paper,
            verdict_strict: report.verdict_strict,
        },
        records: report.records.iter().map(json_record).collect(),
        diagnostics: report
            .diagnostics
            .iter()
            .map(|d| JsonDivergence { D: d.disc, N: d.level, m: d.m, paper: d.paper, strict: d.strict })
            .collect(),
    };
    // Going through Value sorts object keys (serde_json's map is a BTreeMap).
    let value = serde_json::to_value(doc).expect("report serializes");
    let mut out = serde_json::to_string_pretty(&value).expect("value serializes");
    out.push('\n');
    out
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

pub fn render_csv(report: &ScanReport) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(CSV_HEADER).expect("in-memory write");
    for r in &report.records {
        let witnesses: Vec<String> = r.witnesses.iter().map(|w| w.m.to_string()).collect();
        writer
            .write_record([
                r.label.disc().to_string(),
                r.label.level().to_string(),
                r.label.dn().to_string(),
                r.genus.to_string(),
                opt(r.degree),
                opt(r.expected_fixed),
                opt(r.passes_paper),
                opt(r.passes_strict),
                witnesses.join(";"),
            ])
            .expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

/// `candidates=.. high=.. low=.. verdict=PASS|FAIL` for the headline variant.
pub fn summary_line(report: &ScanReport) -> String {
    format!(
        "candidates={} high={} low={} verdict={}",
        report.candidate_count,
        report.high_genus_count,
        report.low_genus_count,
        if report.verdict() { "PASS" } else { "FAIL" }
    )
}

pub fn render_table(report: &ScanReport, timestamp: Option<u64>) -> String {
    let p = &report.params;
    let mut out = String::new();
    if let Some(ts) = timestamp {
        writeln!(out, "timestamp: {ts}").unwrap();
    }
    writeln!(
        out,
        "dn_cutoff={} derived_dn_cutoff={} degree_cap={} genus_cap={} variant={}",
        p.dn_cutoff,
        p.derived_dn_cutoff.map_or_else(|| "none".to_owned(), |m| m.to_string()),
        p.degree_cap,
        p.genus_cap,
        p.variant
    )
    .unwrap();
    writeln!(out).unwrap();
    writeln!(
        out,
        "{:>6} {:>6} {:>7} {:>5} {:>3} {:>4} {:>5} {:>6}  witnesses (m:count)",
        "D", "N", "DN", "g", "d", "f", "paper", "strict"
    )
    .unwrap();
    let flag = |b: Option<bool>| match b {
        Some(true) => "pass",
        Some(false) => "fail",
        None => "-",
    };
    for r in &report.records {
        let witnesses: Vec<String> = r.witnesses.iter().map(|w| format!("{}:{}", w.m, w.count)).collect();
        writeln!(
            out,
            "{:>6} {:>6} {:>7} {:>5} {:>3} {:>4} {:>5} {:>6}  {}",
            r.label.disc(),
            r.label.level(),
            r.label.dn(),
            r.genus,
            r.degree.map_or_else(|| "-".to_owned(), |d| d.to_string()),
            r.expected_fixed.map_or_else(|| "-".to_owned(), |f| f.to_string()),
            flag(r.passes_paper),
            flag(r.passes_strict),
            witnesses.join(" ")
        )
        .unwrap();
    }
    writeln!(out).unwrap();
    writeln!(out, "diagnostics: {} fixed-point counts differ between variants", report.diagnostics.len()).unwrap();
    for d in &report.diagnostics {
        writeln!(out, "  D={} N={} m={} paper={} strict={}", d.disc, d.level, d.m, d.paper, d.strict).unwrap();
    }
    writeln!(
        out,
        "max_D={} max_N={} verdict_paper={} verdict_strict={}",
        report.max_disc, report.max_level, report.verdict_paper, report.verdict_strict
    )
    .unwrap();
    writeln!(out, "{}", summary_line(report)).unwrap();
    out
}
