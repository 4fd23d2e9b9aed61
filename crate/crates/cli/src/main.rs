use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use tom_core::ingest::InputFormat;
use tom_core::par::configure_threads;
use tom_core::pipeline::{default_config_toml, run_pipeline, PipelineConfig, Stage};
use tom_core::synthetic::{generate, write_jsonl, SyntheticParams};

/// Topic overlay maps from bibliographic records.
#[derive(Parser)]
#[command(name = "tom", version, about)]
struct Cli {
    /// TOML configuration; defaults apply when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Artifact directory, overriding `output.dir`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Layout seed, overriding `basemap.layout_seed`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Only report errors.
    #[arg(long, short, global = true)]
    quiet: bool,
    /// Worker thread cap; 1 runs every stage sequentially.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InputArgs {
    /// Input records, overriding `input.path`.
    #[arg(long)]
    input: Option<PathBuf>,
    /// jsonl, csv or wos-tab, overriding `input.format`.
    #[arg(long)]
    format: Option<InputFormat>,
}

#[derive(Subcommand)]
enum Command {
    /// Parse records and build the term-document matrix.
    Ingest(InputArgs),
    /// Build the co-word term graph.
    Termgraph,
    /// Partition the term graph into topics.
    Topics,
    /// Build the topic basemap and its layout.
    Basemap,
    /// Overlay every document on the basemap.
    Overlay,
    /// Cluster documents by overlay proximity.
    Cluster,
    /// Cluster documents by tf-idf cosine.
    Baseline,
    /// Per-cluster keyword and timeline profiles.
    Trends,
    /// Cross-tabulate the two clusterings.
    Crosstab,
    /// Render basemap, overlay and timeline SVGs.
    Render,
    /// Run every stage and write the manifest.
    Run(InputArgs),
    /// Print the default configuration.
    DefaultConfig,
    /// Write a synthetic corpus with planted topics as JSON lines.
    Synth {
        #[arg(long, default_value_t = 300)]
        docs: usize,
        #[arg(long, default_value_t = 1)]
        corpus_seed: u64,
        /// Destination file; stdout when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn load_config(cli: &Cli) -> Result<PipelineConfig> {
    let mut cfg = match &cli.config {
        Some(path) => PipelineConfig::load(path).with_context(|| format!("loading {}", path.display()))?,
        None => PipelineConfig::default(),
    };
    if let Some(out) = &cli.out {
        cfg.output.dir = out.clone();
    }
    if let Some(seed) = cli.seed {
        cfg.basemap.layout_seed = seed;
    }
    if let Some(t) = cli.threads.or(Some(cfg.execution.threads).filter(|&t| t > 0)) {
        cfg.execution.threads = t;
        if t == 1 {
            cfg.execution.parallel = false;
        }
    }
    if let Command::Ingest(args) | Command::Run(args) = &cli.command {
        if let Some(input) = &args.input {
            cfg.input.path = input.clone();
        }
        if let Some(format) = args.format {
            cfg.input.format = format;
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

fn stage_of(command: &Command) -> Option<Stage> {
    Some(match command {
        Command::Ingest(_) => Stage::Ingest,
        Command::Termgraph => Stage::TermGraph,
        Command::Topics => Stage::Topics,
        Command::Basemap => Stage::Basemap,
        Command::Overlay => Stage::Overlay,
        Command::Cluster => Stage::Cluster,
        Command::Baseline => Stage::Baseline,
        Command::Trends => Stage::Trends,
        Command::Crosstab => Stage::CrossTab,
        Command::Render => Stage::Render,
        _ => return None,
    })
}

fn execute(cli: Cli) -> Result<()> {
    match &cli.command {
        Command::DefaultConfig => {
            io::stdout().write_all(default_config_toml().as_bytes())?;
            return Ok(());
        }
        Command::Synth { docs, corpus_seed, output } => {
            let corpus = generate(&SyntheticParams { docs: *docs, seed: *corpus_seed, ..SyntheticParams::default() })?.corpus;
            match output {
                Some(path) => write_jsonl(&corpus, io::BufWriter::new(fs::File::create(path)?))?,
                None => write_jsonl(&corpus, io::stdout().lock())?,
            }
            return Ok(());
        }
        _ => {}
    }
    let cfg = load_config(&cli)?;
    if cfg.execution.threads > 0 {
        configure_threads(cfg.execution.threads).map_err(anyhow::Error::msg)?;
    }
    if let Some(stage) = stage_of(&cli.command) {
        let report = stage.run(&cfg, &cfg.output.dir).with_context(|| format!("stage `{stage}`"))?;
        for name in &report.outputs {
            log::info!("wrote {}", cfg.output.dir.join(name).display());
        }
        for (k, v) in &report.counts {
            log::info!("{stage}.{k} = {v}");
        }
    } else {
        let manifest = run_pipeline(&cfg)?;
        log::info!(
            "{} artifacts in {} ({} TOM clusters, {} VSM clusters)",
            manifest.artifacts.len(),
            cfg.output.dir.display(),
            manifest.counts["cluster"]["clusters"],
            manifest.counts["baseline"]["clusters"],
        );
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = if cli.quiet { "error" } else { "info" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).format_timestamp(None).init();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
