use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand};

use shimura_cli::render::{self, OutputFormat};
use shimura_cli::{exit, CACHE_ENV};
use shimura_core::cmfix::{self, Variant};
use shimura_core::quadorders::{self, OrderDisc};
use shimura_core::scan::{self, ScanConfig};
use shimura_core::shimura::{self, CurveLabel};
use shimura_core::{ClassNumberCache, Error};

#[derive(Parser)]
#[command(name = "shimura", version, about = "Genus, CM points and Atkin-Lehner fixed points of Shimura curves X_0^D(N)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Genus and elliptic-point counts e_4, e_3 of X_0^D(N).
    Genus { disc: u64, level: u64 },
    /// Class number of the imaginary quadratic order of discriminant DISC (use `--` before negatives).
    Classno {
        #[arg(allow_negative_numbers = true)]
        disc: i64,
    },
    /// Fixed points of the Atkin-Lehner involutions w_m under both counting variants.
    Fixed { disc: u64, level: u64, m: Option<u64> },
    /// Run the full smooth plane model search.
    Verify(VerifyArgs),
}

#[derive(clap::Args)]
struct VerifyArgs {
    /// Largest DN to enumerate.
    #[arg(long, default_value_t = scan::DEFAULT_DN_CUTOFF)]
    max_dn: u64,
    /// Largest plane degree considered; derived from the gonality bound if omitted.
    #[arg(long)]
    degree_cap: Option<u32>,
    /// Counting variant behind the exit status and witness lists: paper or strict.
    #[arg(long, default_value = "paper")]
    variant: Variant,
    /// table, json or csv.
    #[arg(long, default_value = "table")]
    format: OutputFormat,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (0 = one per core). Does not change the output.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Class-number cache file, read if present and rewritten afterwards.
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Include a generation timestamp (table and json only).
    #[arg(long)]
    timestamps: bool,
}

enum Failure {
    Usage(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_internal() {
            Failure::Internal(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Internal(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Genus { disc, level } => cmd_genus(disc, level),
        Command::Classno { disc } => cmd_classno(disc),
        Command::Fixed { disc, level, m } => cmd_fixed(disc, level, m),
        Command::Verify(args) => cmd_verify(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(exit::USAGE)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(exit::INTERNAL)
        }
    }
}

fn squarefree_label(disc: u64, level: u64) -> Result<CurveLabel, Failure> {
    let label = CurveLabel::new(disc, level)?;
    if !label.level_is_squarefree() {
        return Err(Failure::Usage(format!("N={level} must be squarefree")));
    }
    Ok(label)
}

fn cmd_genus(disc: u64, level: u64) -> Result<u8, Failure> {
    let label = CurveLabel::new(disc, level)?;
    let g = shimura::genus(&label)?;
    let e4 = shimura::elliptic_count(&label, 4)?;
    let e3 = shimura::elliptic_count(&label, 3)?;
    println!("{label}: g={g} e4={e4} e3={e3}");
    Ok(exit::OK)
}

fn cmd_classno(disc: i64) -> Result<u8, Failure> {
    let order = OrderDisc::new(disc)?;
    let h = quadorders::class_number(disc)?;
    println!("h({disc})={h} fund_disc={} conductor={}", order.fund_disc(), order.conductor());
    Ok(exit::OK)
}

fn cmd_fixed(disc: u64, level: u64, m: Option<u64>) -> Result<u8, Failure> {
    let label = squarefree_label(disc, level)?;
    let cache = ClassNumberCache::new();
    let entries = match m {
        Some(m) => vec![cmfix::fixed_point_entry(&label, m, &cache)?],
        None => cmfix::fixed_point_profile(&label, &cache)?.entries,
    };
    println!("{label}, genus {}", shimura::genus(&label)?);
    println!("{:>8} {:>6} {:>6}  orders (disc:paper/strict)", "m", "paper", "strict");
    for e in &entries {
        let orders: Vec<String> =
            e.orders.iter().map(|o| format!("{}:{}/{}", o.order.disc(), o.paper, o.strict)).collect();
        let flag = if e.diverges() { "  divergent" } else { "" };
        println!("{:>8} {:>6} {:>6}  {}{flag}", e.m, e.total_paper, e.total_strict, orders.join(" "));
    }
    Ok(exit::OK)
}

fn cmd_verify(args: VerifyArgs) -> Result<u8, Failure> {
    // The environment variable wins over the flag.
    let cache_path = std::env::var_os(CACHE_ENV).map(PathBuf::from).or(args.cache);
    let cache = match &cache_path {
        Some(path) => ClassNumberCache::load(path)?,
        None => ClassNumberCache::new(),
    };
    let config = ScanConfig {
        dn_cutoff: args.max_dn,
        degree_cap: args.degree_cap,
        variant: args.variant,
        jobs: args.jobs,
    };
    let report = scan::run_scan(&config, &cache)?;
    report.check_consistency()?;
    if let Some(path) = &cache_path {
        cache.save(path)?;
    }

    let timestamp = args
        .timestamps
        .then(|| SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()));
    let text = match args.format {
        OutputFormat::Table => render::render_table(&report, timestamp),
        OutputFormat::Json => render::render_json(&report, timestamp),
        OutputFormat::Csv => render::render_csv(&report),
    };
    let summary = render::summary_line(&report);
    match &args.out {
        Some(path) => {
            fs::write(path, text)?;
            println!("{summary}");
        }
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            if args.format != OutputFormat::Table {
                eprintln!("{summary}");
            }
        }
    }
    Ok(if report.verdict() { exit::OK } else { exit::VERDICT_FAIL })
}
