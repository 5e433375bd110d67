use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use anyhow::{Context, Result};
use chrono::{DateTime, Utc};
use clap::{Parser, Subcommand};
use radiometa_cli::*;
use radiometa_core::clock::AcceleratedClock;
use radiometa_core::domain::StationId;
use radiometa_core::sim::{generate_fleet, Fleet, ScriptParams};
use radiometa_core::store::{EventFilter, StationEdits};
use radiometa_net::{api_router, library_router, serve_forever, simulator_router};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "radiometa",
    version,
    about = "Collect, match, store and serve internet-radio metadata"
)]
struct Cli {
    /// Pipeline config (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Corpus directory; overrides corpus_path.
    #[arg(long, global = true)]
    corpus: Option<PathBuf>,
    /// Station sampling seed; overrides monitor.rng_seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Reliable-match threshold; overrides match_threshold.
    #[arg(long, global = true)]
    threshold: Option<f64>,
    /// collect: events per station. enrich: events scored this run.
    #[arg(long, global = true)]
    limit: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Monitor sampled stations and store accepted events.
    Collect,
    /// Match unscored events against the music library.
    Enrich,
    /// Edit a station record and optionally recompute its reliability.
    Review {
        station_id: String,
        /// Edits as JSON, or @path to a JSON file.
        #[arg(long, default_value = "{}")]
        edits: String,
        #[arg(long)]
        reliability: bool,
    },
    /// Write events as CSV: full, reliable or public-domain.
    Export {
        scope: ExportScope,
        out: PathBuf,
        /// Event filter as JSON.
        #[arg(long)]
        filter: Option<String>,
    },
    /// Load a full CSV export into the corpus.
    Import { csv: PathBuf },
    /// Fold the write-ahead log into the table files.
    Checkpoint,
    /// Serve the /v1 query API.
    Serve {
        #[arg(long, default_value = "127.0.0.1:8080")]
        addr: SocketAddr,
    },
    /// Generate a scripted station fleet.
    Fleet {
        out: PathBuf,
        #[arg(long, default_value_t = 20)]
        stations: usize,
        #[arg(long, default_value_t = 150)]
        entries: usize,
        #[arg(long, default_value = "2022-10-03T00:00:00Z")]
        epoch: DateTime<Utc>,
    },
    /// Serve a fleet directory as a station simulator.
    Simulate {
        fleet: PathBuf,
        #[arg(long, default_value = "127.0.0.1:8000")]
        addr: SocketAddr,
        /// Simulated seconds per real second.
        #[arg(long, default_value_t = 1.0)]
        factor: f64,
    },
    /// Serve a fixture catalog as a library search endpoint.
    Library {
        fixture: PathBuf,
        #[arg(long, default_value = "127.0.0.1:8001")]
        addr: SocketAddr,
    },
}

fn print<T: Serialize>(report: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(report)?);
    Ok(())
}

fn json_arg<T: serde::de::DeserializeOwned>(arg: &str) -> Result<T> {
    let text = match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?,
        None => arg.to_string(),
    };
    Ok(serde_json::from_str(&text)?)
}

fn config(cli: &Cli) -> Result<PipelineConfig> {
    let mut cfg = match &cli.config {
        Some(p) => PipelineConfig::load(p)?,
        None => PipelineConfig::default(),
    };
    if let Some(c) = &cli.corpus {
        cfg.corpus_path = c.clone();
    }
    if let Some(s) = cli.seed {
        cfg.monitor.rng_seed = s;
    }
    if let Some(t) = cli.threshold {
        cfg.match_threshold = t;
    }
    if let (Some(l), Command::Collect) = (cli.limit, &cli.command) {
        cfg.monitor.events_per_station = l as u32;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: Cli) -> Result<Outcome> {
    let cfg = config(&cli)?;
    match cli.command {
        Command::Collect => {
            let report = cmd_collect(&cfg)?;
            print(&report)?;
            Ok(report.outcome())
        }
        Command::Enrich => {
            let report = cmd_enrich(&cfg, cli.limit)?;
            print(&report)?;
            Ok(report.outcome())
        }
        Command::Review {
            station_id,
            edits,
            reliability,
        } => {
            let edits: StationEdits = json_arg(&edits)?;
            print(&cmd_review(&cfg, &StationId(station_id), &edits, reliability)?)?;
            Ok(Outcome::Complete)
        }
        Command::Export { scope, out, filter } => {
            let filter: EventFilter = filter.map(|f| json_arg(&f)).transpose()?.unwrap_or_default();
            print(&cmd_export(&cfg, scope, &filter, &out)?)?;
            Ok(Outcome::Complete)
        }
        Command::Import { csv } => {
            print(&cmd_import(&cfg, &csv)?)?;
            Ok(Outcome::Complete)
        }
        Command::Checkpoint => {
            cmd_checkpoint(&cfg)?;
            Ok(Outcome::Complete)
        }
        Command::Serve { addr } => {
            let _lock = CorpusLock::acquire(&cfg.corpus_path)?;
            let store = Arc::new(radiometa_core::store::Store::open(&cfg.corpus_path)?);
            serve_forever(api_router(store), addr, |a| eprintln!("serving /v1 on http://{a}"))?;
            Ok(Outcome::Complete)
        }
        Command::Fleet {
            out,
            stations,
            entries,
            epoch,
        } => {
            let params = ScriptParams {
                entries,
                ..ScriptParams::default()
            };
            let fleet = generate_fleet(stations, epoch, &params, cfg.monitor.rng_seed);
            fleet.save(&out)?;
            eprintln!("wrote {} stations to {}", fleet.stations.len(), out.display());
            Ok(Outcome::Complete)
        }
        Command::Simulate { fleet, addr, factor } => {
            anyhow::ensure!(factor.is_finite() && factor > 0.0, "factor must be positive");
            let fleet = Fleet::load(&fleet)?;
            let clock = Arc::new(AcceleratedClock::new(fleet.epoch, factor));
            serve_forever(simulator_router(&fleet, clock), addr, |a| {
                eprintln!("simulating on http://{a}")
            })?;
            Ok(Outcome::Complete)
        }
        Command::Library { fixture, addr } => {
            let client = library_client(&LibraryClientConfig::Fixture(fixture))?;
            serve_forever(library_router(client), addr, |a| eprintln!("library on http://{a}"))?;
            Ok(Outcome::Complete)
        }
    }
}

fn main() {
    let code = match run(Cli::parse()) {
        Ok(outcome) => outcome.exit_code(),
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_FAILURE
        }
    };
    std::process::exit(code);
}
