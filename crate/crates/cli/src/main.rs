//! Command-line driver wiring the pipeline stages into reproducible runs.
//!
//! Exit codes: 0 success, 1 input/configuration/usage error, 2 numerical or
//! undefined-statistic error.

mod commands;
mod config;
mod io;
mod runlog;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use valuekit::error::{Error, Result};

use crate::runlog::RunLog;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
enum SummaryFormat {
    #[default]
    Json,
    Csv,
}

#[derive(Parser)]
#[command(name = "valuekit", version, about = "Value-detection pipeline toolkit")]
struct Cli {
    /// Pipeline TOML config; flags take precedence over config values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Override every stage seed with one value.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output directory for all emitted files.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Worker threads for parallel per-post stages (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Format of the run summary printed to stdout.
    #[arg(long, global = true, value_enum, default_value_t)]
    format: SummaryFormat,

    /// Emit SVG plots (default on; --no-svg disables).
    #[arg(long, global = true, overrides_with = "no_svg")]
    svg: bool,

    /// Skip SVG plot emission.
    #[arg(long, global = true)]
    no_svg: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse, scrub, and filter a corpus; emit verdicts and stage counts.
    Filter {
        #[arg(long)]
        corpus: Option<PathBuf>,
    },
    /// Collect repeated annotations from a provider (mock/replay/http).
    Annotate {
        #[arg(long)]
        corpus: Option<PathBuf>,
        /// Restrict to posts that pass the language gate and are not spam.
        #[arg(long)]
        verdicts: Option<PathBuf>,
        #[arg(long)]
        provider: Option<String>,
        #[arg(long)]
        mock_file: Option<PathBuf>,
        #[arg(long)]
        replay: Option<PathBuf>,
        #[arg(long)]
        endpoint: Option<String>,
        #[arg(long)]
        runs: Option<usize>,
        #[arg(long)]
        batch_size: Option<usize>,
    },
    /// Aggregate an annotation matrix into soft labels.
    Aggregate {
        #[arg(long)]
        annotations: Option<PathBuf>,
        #[arg(long)]
        runs: Option<usize>,
    },
    /// Agreement statistics between repeated annotations and expert labels.
    Agree {
        #[arg(long)]
        annotations: Option<PathBuf>,
        #[arg(long)]
        expert: Option<PathBuf>,
        #[arg(long)]
        runs: Option<usize>,
    },
    /// Train the multi-label classifier on soft labels.
    Train {
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long)]
        soft: Option<PathBuf>,
    },
    /// Predict per-value probabilities for a corpus.
    Predict {
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long)]
        model: Option<PathBuf>,
        /// Restrict to posts that pass the language gate and are not spam.
        #[arg(long)]
        verdicts: Option<PathBuf>,
    },
    /// Optimize binarization thresholds against reference labels.
    Thresholds {
        #[arg(long)]
        probas: Option<PathBuf>,
        #[arg(long)]
        reference: Option<PathBuf>,
        /// per_class or global.
        #[arg(long)]
        mode: Option<String>,
    },
    /// Evaluate predictions against reference labels.
    Evaluate {
        #[arg(long)]
        probas: Option<PathBuf>,
        #[arg(long)]
        reference: Option<PathBuf>,
        /// Threshold file; omitted = optimize on this data first.
        #[arg(long)]
        thresholds: Option<PathBuf>,
    },
    /// Value-circle coordinates, projections, and annotation distances.
    Circle {
        #[arg(long)]
        probas: Option<PathBuf>,
        #[arg(long)]
        soft: Option<PathBuf>,
        /// Corpus for the discrepancy-vs-length regression.
        #[arg(long)]
        corpus: Option<PathBuf>,
    },
    /// Correlation structure, MDS, Procrustes alignment, congruence.
    Structure {
        #[arg(long)]
        probas: Option<PathBuf>,
        /// Generate this many synthetic circle posts instead of reading probas.
        #[arg(long)]
        synthetic: Option<usize>,
    },
    /// Prevalence and soft-label distribution tables.
    Report {
        #[arg(long)]
        probas: Option<PathBuf>,
        #[arg(long)]
        thresholds: Option<PathBuf>,
        #[arg(long)]
        soft: Option<PathBuf>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Filter { .. } => "filter",
            Command::Annotate { .. } => "annotate",
            Command::Aggregate { .. } => "aggregate",
            Command::Agree { .. } => "agree",
            Command::Train { .. } => "train",
            Command::Predict { .. } => "predict",
            Command::Thresholds { .. } => "thresholds",
            Command::Evaluate { .. } => "evaluate",
            Command::Circle { .. } => "circle",
            Command::Structure { .. } => "structure",
            Command::Report { .. } => "report",
        }
    }
}

/// Shared command context: resolved config, output dir, emission flags.
pub struct Ctx {
    pub config: config::PipelineConfig,
    pub out: PathBuf,
    pub svg: bool,
    pub seed_override: Option<u64>,
    pub log: RunLog,
}

impl Ctx {
    pub fn seed(&self, from_config: u64) -> u64 {
        self.seed_override.unwrap_or(from_config)
    }

    pub fn out_path(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }
}

fn print_summary(format: SummaryFormat, summary: &serde_json::Value) {
    match format {
        SummaryFormat::Json => println!("{summary}"),
        SummaryFormat::Csv => {
            if let Some(map) = summary.as_object() {
                println!("key,value");
                for (k, v) in map {
                    println!("{k},{v}");
                }
            }
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(Error::Config("--threads must be >= 1".into()));
        }
        // a second configuration attempt in-process is harmless
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }

    let (pipeline_config, config_text) = config::load(cli.config.as_deref())?;
    std::fs::create_dir_all(&cli.out)?;

    let seed = cli.seed.unwrap_or(0);
    let log = RunLog::new(&cli.out, &config_text, cli.command.name(), seed)?;
    let mut ctx = Ctx {
        config: pipeline_config,
        out: cli.out.clone(),
        svg: !cli.no_svg,
        seed_override: cli.seed,
        log,
    };

    let name = cli.command.name();
    let summary = match cli.command {
        Command::Filter { corpus } => commands::filter::run(&mut ctx, corpus)?,
        Command::Annotate {
            corpus,
            verdicts,
            provider,
            mock_file,
            replay,
            endpoint,
            runs,
            batch_size,
        } => commands::annotate::run(
            &mut ctx,
            commands::annotate::Args {
                corpus,
                verdicts,
                provider,
                mock_file,
                replay,
                endpoint,
                runs,
                batch_size,
            },
        )?,
        Command::Aggregate { annotations, runs } => {
            commands::aggregate::run(&mut ctx, annotations, runs)?
        }
        Command::Agree { annotations, expert, runs } => {
            commands::agree::run(&mut ctx, annotations, expert, runs)?
        }
        Command::Train { corpus, soft } => commands::train::run(&mut ctx, corpus, soft)?,
        Command::Predict { corpus, model, verdicts } => {
            commands::predict::run(&mut ctx, corpus, model, verdicts)?
        }
        Command::Thresholds { probas, reference, mode } => {
            commands::thresholds::run(&mut ctx, probas, reference, mode)?
        }
        Command::Evaluate { probas, reference, thresholds } => {
            commands::evaluate::run(&mut ctx, probas, reference, thresholds)?
        }
        Command::Circle { probas, soft, corpus } => {
            commands::circle::run(&mut ctx, probas, soft, corpus)?
        }
        Command::Structure { probas, synthetic } => {
            commands::structure::run(&mut ctx, probas, synthetic)?
        }
        Command::Report { probas, thresholds, soft } => {
            commands::report::run(&mut ctx, probas, thresholds, soft)?
        }
    };

    io::write_json(&ctx.out_path(&format!("{name}_summary.json")), &summary)?;
    print_summary(cli.format, &summary);
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp
                | ErrorKind::DisplayVersion
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    let _ = e.print();
                    return ExitCode::SUCCESS;
                }
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 2 } else { 1 })
        }
    }
}
