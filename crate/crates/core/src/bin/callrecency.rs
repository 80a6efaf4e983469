use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use callrecency::report::{
    write_report_csv, write_report_json, write_segments_json, write_series_csv, write_series_json,
    Report,
};
use callrecency::{
    aggregate_recent, build_segments, detect_boundary, generate, parse_log, score_log, write_log,
    AnalysisConfig, CallRecord, DriftSpec, OutputFormat,
};

#[derive(Parser)]
#[command(
    name = "callrecency",
    version,
    about = "Find the recent behavioral data length of a phone call log"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score adjacent weeks, detect the boundary and report the recent window.
    Analyze(AnalysisArgs),
    /// Emit the adjacent-week conflict scores without a boundary decision.
    Score(AnalysisArgs),
    /// Print the time segmentation of a log as JSON.
    Segment {
        input: PathBuf,
        #[arg(long)]
        base_slot: Option<u32>,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Write a synthetic log with a planted behavior change.
    Gen(GenArgs),
}

#[derive(Args)]
struct AnalysisArgs {
    input: PathBuf,
    /// Conflict percentage above which a week pair counts as a change.
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long)]
    min_support: Option<u64>,
    /// Base time slot in minutes; must divide 1440.
    #[arg(long)]
    base_slot: Option<u32>,
    #[arg(long = "out")]
    format: Option<OutputFormat>,
    /// JSON config file; flags take precedence over its values.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    weeks: u32,
    /// Last week (counted from the oldest) that follows the old profile.
    #[arg(long)]
    drift_week: u32,
    #[arg(long)]
    per_week: u32,
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// Keep the old profile in every week.
    #[arg(long)]
    no_drift: bool,
    #[arg(long, default_value_t = callrecency::config::DEFAULT_MIN_SUPPORT)]
    min_support: u64,
    /// Segmentation slot the templates must fit into.
    #[arg(long, default_value_t = callrecency::segmentation::DEFAULT_BASE_SLOT)]
    base_slot: u32,
}

fn load_config(path: Option<&Path>) -> Result<AnalysisConfig> {
    match path {
        Some(p) => AnalysisConfig::from_json_file(p)
            .with_context(|| format!("reading config {}", p.display())),
        None => Ok(AnalysisConfig::default()),
    }
}

impl AnalysisArgs {
    fn config(&self) -> Result<AnalysisConfig> {
        let mut config = load_config(self.config.as_deref())?;
        if let Some(t) = self.threshold {
            config.threshold = t;
        }
        if let Some(k) = self.min_support {
            config.min_support = k;
        }
        if let Some(m) = self.base_slot {
            config.base_slot = m;
        }
        if let Some(f) = self.format {
            config.output_format = f;
        }
        config.validate()?;
        Ok(config)
    }
}

fn read_log(path: &Path, config: &AnalysisConfig) -> Result<Vec<CallRecord>> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let log =
        parse_log(file, &config.columns).with_context(|| format!("parsing {}", path.display()))?;
    for bad in &log.malformed {
        eprintln!("warning: skipped malformed row, {bad}");
    }
    Ok(log.records)
}

fn run(cli: Cli) -> Result<()> {
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    match cli.command {
        Command::Analyze(args) => {
            let config = args.config()?;
            let records = read_log(&args.input, &config)?;
            let scored = score_log(&records, &config)?;
            let boundary = detect_boundary(&scored.series, config.threshold);
            let result = aggregate_recent(&scored.weeks, scored.series, boundary)?;
            let report = Report::new(&result);
            match config.output_format {
                OutputFormat::Json => write_report_json(&mut out, &report)?,
                OutputFormat::Csv => write_report_csv(&mut out, &report)?,
            }
        }
        Command::Score(args) => {
            let config = args.config()?;
            let records = read_log(&args.input, &config)?;
            let scored = score_log(&records, &config)?;
            match config.output_format {
                OutputFormat::Json => write_series_json(&mut out, &scored.series)?,
                OutputFormat::Csv => write_series_csv(&mut out, &scored.series)?,
            }
        }
        Command::Segment {
            input,
            base_slot,
            config,
        } => {
            let mut config = load_config(config.as_deref())?;
            if let Some(m) = base_slot {
                config.base_slot = m;
            }
            let records = read_log(&input, &config)?;
            let segmentation = build_segments(&records, config.base_slot)?;
            write_segments_json(&mut out, segmentation.segments())?;
        }
        Command::Gen(args) => {
            let mut spec = DriftSpec::new(
                args.weeks,
                args.drift_week,
                args.per_week,
                args.noise,
                args.seed,
            );
            spec.min_support = args.min_support;
            spec.base_slot = args.base_slot;
            if args.no_drift {
                spec = spec.without_drift();
            }
            let records = generate(&spec)?;
            let file = File::create(&args.out)
                .with_context(|| format!("creating {}", args.out.display()))?;
            write_log(BufWriter::new(file), &records)?;
        }
    }
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
