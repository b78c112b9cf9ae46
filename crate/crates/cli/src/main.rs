use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use oppo_core::geometry::Caps;
use oppo_core::group::Series;
use oppo_core::homology::DEFAULT_BUDGET;
use oppo_core::pipeline::{
    betti_tables, regions, run_verification, stability_range_induction, Cache, PipelineError, RunConfig, StabilityRangeRule,
    SuiteKind,
};

const USAGE_ERROR: u8 = 3;

/// Exact homology of buildings, opposition complexes and stability
/// spectral sequences of classical groups over finite fields.
#[derive(Parser, Debug)]
#[command(name = "oppo", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the building and its opposition complex and check the geometry.
    Build(InstanceArgs),
    /// Reduced homology of the building and of its opposition complex.
    Homology(InstanceArgs),
    /// Run the verification suites and write a JSON report.
    Verify {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Restrict to these suites (repeatable).
        #[arg(long = "suite", value_enum)]
        suites: Vec<SuiteArg>,
    },
    /// Derive stability ranges from a range for general linear groups.
    Ranges {
        /// Target series; all of SL, U and SO when omitted.
        #[arg(long, value_enum)]
        series: Option<RangeSeries>,
        /// Input range for general linear groups.
        #[arg(long, value_enum, default_value_t = GlInput::Sah)]
        gl: GlInput,
        /// Largest homological degree k.
        #[arg(long, default_value_t = 8)]
        kmax: usize,
    },
    /// Inspect or clear the result cache.
    Cache {
        #[arg(value_enum)]
        action: CacheAction,
        #[arg(long)]
        cache: PathBuf,
    },
}

#[derive(Args, Debug)]
struct InstanceArgs {
    #[arg(long, value_enum, default_value_t = SeriesArg::Gl)]
    series: SeriesArg,
    /// Parameter n: the building has rank n + 1.
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// Order of the finite field.
    #[arg(long, default_value_t = 2)]
    q: usize,
    /// E^1 spots with p + q <= qmax are computed.
    #[arg(long, default_value_t = 2)]
    qmax: usize,
    /// Column budget for bar-complex computations.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u128,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the JSON output here as well as to stdout.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SeriesArg {
    Gl,
    Sl,
    Sp,
    So,
    U,
}

impl From<SeriesArg> for Series {
    fn from(s: SeriesArg) -> Series {
        match s {
            SeriesArg::Gl => Series::GL,
            SeriesArg::Sl => Series::SL,
            SeriesArg::Sp => Series::Sp,
            SeriesArg::So => Series::SO,
            SeriesArg::U => Series::U,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RangeSeries {
    Sl,
    U,
    So,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GlInput {
    /// n >= k, for division rings with infinite centre.
    Sah,
    /// n >= 2k, for any division ring.
    Vdk,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SuiteArg {
    Geometry,
    Sphericity,
    Exactness,
    E1,
    Lhs,
}

impl From<SuiteArg> for SuiteKind {
    fn from(s: SuiteArg) -> SuiteKind {
        match s {
            SuiteArg::Geometry => SuiteKind::Geometry,
            SuiteArg::Sphericity => SuiteKind::Sphericity,
            SuiteArg::Exactness => SuiteKind::Exactness,
            SuiteArg::E1 => SuiteKind::E1,
            SuiteArg::Lhs => SuiteKind::Lhs,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CacheAction {
    Inspect,
    Clear,
}

impl InstanceArgs {
    fn config(&self, suites: Vec<SuiteKind>) -> RunConfig {
        RunConfig {
            series: self.series.into(),
            n: self.n,
            q: self.q,
            qmax: self.qmax,
            budget: self.budget,
            caps: Caps::default(),
            seed: self.seed,
            suites,
            cache: self.cache.clone(),
            report: self.report.clone(),
        }
    }
}

fn fail(e: PipelineError) -> ExitCode {
    eprintln!("oppo: {e}");
    ExitCode::from(match e {
        PipelineError::Config(_) => USAGE_ERROR,
        ref e if e.is_cap() => 2,
        _ => 1,
    })
}

fn emit(text: &str, path: Option<&PathBuf>) -> Result<(), PipelineError> {
    print!("{text}");
    if let Some(p) = path {
        std::fs::write(p, text)?;
    }
    Ok(())
}

fn verify(config: &RunConfig) -> ExitCode {
    match run_verification(config) {
        Ok(report) => {
            print!("{}", report.to_json());
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => fail(e),
    }
}

fn ranges(series: Option<RangeSeries>, gl: GlInput, kmax: usize) -> ExitCode {
    if kmax == 0 {
        eprintln!("oppo: kmax must be positive");
        return ExitCode::from(USAGE_ERROR);
    }
    let input = match gl {
        GlInput::Sah => StabilityRangeRule::sah(kmax),
        GlInput::Vdk => StabilityRangeRule::van_der_kallen(kmax),
    };
    let targets: Vec<Series> = match series {
        Some(RangeSeries::Sl) => vec![Series::SL],
        Some(RangeSeries::U) => vec![Series::U],
        Some(RangeSeries::So) => vec![Series::SO],
        None => vec![Series::SL, Series::U, Series::SO],
    };
    let mut derived = Vec::new();
    for s in targets {
        match stability_range_induction(&input, s) {
            Ok(rule) => derived.push(json!({
                "series": s.to_string(),
                "thresholds": rule.thresholds,
                "range": rule.closed_form().to_string(),
                "regions": regions(s),
            })),
            Err(e) => {
                eprintln!("oppo: {e}");
                return ExitCode::from(1);
            }
        }
    }
    let out = json!({ "input": { "name": input.name, "thresholds": input.thresholds }, "derived": derived });
    println!("{}", serde_json::to_string_pretty(&out).expect("serializes"));
    ExitCode::SUCCESS
}

fn cache(action: CacheAction, dir: PathBuf) -> Result<(), PipelineError> {
    let cache = Cache::open(dir)?;
    match action {
        CacheAction::Inspect => {
            let entries: Vec<_> = cache.entries()?.into_iter().map(|e| json!({ "key": e.key, "bytes": e.bytes })).collect();
            println!("{}", serde_json::to_string_pretty(&json!({ "entries": entries })).expect("serializes"));
        }
        CacheAction::Clear => println!("{}", json!({ "removed": cache.clear()? })),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(USAGE_ERROR),
            };
        }
    };
    match cli.command {
        Command::Build(args) => verify(&args.config(vec![SuiteKind::Geometry])),
        Command::Verify { instance, suites } => {
            let suites = if suites.is_empty() { SuiteKind::ALL.to_vec() } else { suites.into_iter().map(Into::into).collect() };
            verify(&instance.config(suites))
        }
        Command::Homology(args) => {
            let config = args.config(SuiteKind::ALL.to_vec());
            match betti_tables(&config).and_then(|t| {
                let text = serde_json::to_string_pretty(&json!({ "complexes": t })).expect("serializes") + "\n";
                emit(&text, config.report.as_ref())
            }) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => fail(e),
            }
        }
        Command::Ranges { series, gl, kmax } => ranges(series, gl, kmax),
        Command::Cache { action, cache: dir } => match cache(action, dir) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => fail(e),
        },
    }
}
