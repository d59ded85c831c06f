use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use netcorr::centrality;
use netcorr::generators::{Family, GeneratorSpec};
use netcorr::got::{self, GotConfig, LogBase, MeanConvention};
use netcorr::harness::{self, ExperimentConfig};
use netcorr::io::{self as nio, Format, ScoreFile, ScoreKind};
use netcorr::kpath::{self, KpathConfig, KpathMethod};
use netcorr::stats;
use netcorr::Graph;

#[derive(Parser)]
#[command(
    name = "netcorr",
    version,
    about = "Centrality measures and their correlations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random graph and write it as an edge list.
    Gen {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[arg(long)]
        n: usize,
        /// SF: edges per new node; SW: ring degree; ER: edge probability.
        #[arg(long)]
        param: f64,
        /// SF: triad probability; SW: shortcut probability.
        #[arg(long, default_value_t = 0.0)]
        aux_prob: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute one exact node centrality.
    Centrality {
        #[arg(long, value_enum)]
        measure: Measure,
        #[command(flatten)]
        input: GraphInput,
        #[command(flatten)]
        output: ScoreOutput,
    },
    /// Run the Game of Thieves; node scores go to --out, edge scores to --edge-out.
    Got {
        #[command(flatten)]
        input: GraphInput,
        #[command(flatten)]
        output: ScoreOutput,
        #[arg(long)]
        edge_out: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        thieves: usize,
        /// Defaults to the node count.
        #[arg(long)]
        vdiamonds: Option<u64>,
        /// Defaults to ceil(log(n)^3).
        #[arg(long)]
        epochs: Option<usize>,
        #[arg(long, default_value = "e", value_parser = parse_log_base)]
        epoch_log_base: LogBase,
        #[arg(long, default_value = "paper", value_parser = parse_mean)]
        mean_convention: MeanConvention,
        /// Write one JSON record per epoch to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Estimate k-path edge centrality with WERW-Kpath.
    Kpath {
        #[command(flatten)]
        input: GraphInput,
        #[command(flatten)]
        output: ScoreOutput,
        #[arg(long, default_value_t = 10)]
        k: usize,
        /// Number of walks; defaults to the edge count.
        #[arg(long)]
        rho: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// path-weighted or reinforced.
        #[arg(long, default_value = "path-weighted", value_parser = parse_method)]
        method: KpathMethod,
    },
    /// Correlate two score files.
    Correlate {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value = "csv", value_parser = parse_format)]
        format: Format,
    },
    /// Run an experiment matrix from a TOML config file.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        /// Output directory for reports.
        #[arg(long)]
        out: PathBuf,
        /// Also correlate exact measures with each other.
        #[arg(long)]
        all_pairs: bool,
        /// Override the node count of the config.
        #[arg(long)]
        n: Option<usize>,
        /// Override the base seed of the config.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_parser = parse_log_base)]
        epoch_log_base: Option<LogBase>,
        #[arg(long)]
        workers: Option<usize>,
    },
}

#[derive(clap::Args)]
struct GraphInput {
    /// Edge-list file.
    #[arg(long)]
    input: PathBuf,
    /// Node count; inferred from the largest id when absent.
    #[arg(long)]
    n: Option<usize>,
}

impl GraphInput {
    fn load(&self) -> Result<Graph> {
        nio::read_edge_list(&self.input, self.n)
            .with_context(|| format!("reading {}", self.input.display()))
    }
}

#[derive(clap::Args)]
struct ScoreOutput {
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "csv", value_parser = parse_format)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Measure {
    Dc,
    Bc,
    Cl,
    Cc,
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: netcorr::Error| e.to_string())
}

fn parse_log_base(s: &str) -> Result<LogBase, String> {
    s.parse().map_err(|e: netcorr::Error| e.to_string())
}

fn parse_mean(s: &str) -> Result<MeanConvention, String> {
    s.parse().map_err(|e: netcorr::Error| e.to_string())
}

fn parse_method(s: &str) -> Result<KpathMethod, String> {
    s.parse().map_err(|e: netcorr::Error| e.to_string())
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse().map_err(|e: netcorr::Error| e.to_string())
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(io::BufWriter::new(
            fs::File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn emit(kind: ScoreKind, values: Vec<f64>, path: Option<&Path>, format: Format) -> Result<()> {
    let file = ScoreFile { kind, values };
    nio::write_scores(&file, format, sink(path)?)?;
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Gen {
            family,
            n,
            param,
            aux_prob,
            seed,
            out,
        } => {
            let g = GeneratorSpec {
                family,
                n,
                param,
                aux_prob,
                seed,
            }
            .generate()?;
            nio::write_edge_list(&g, sink(out.as_deref())?)?;
        }
        Command::Centrality {
            measure,
            input,
            output,
        } => {
            let g = input.load()?;
            let scores = match measure {
                Measure::Dc => centrality::degree_centrality(&g)?,
                Measure::Bc => centrality::betweenness_centrality(&g),
                Measure::Cl => centrality::closeness_centrality(&g)?,
                Measure::Cc => centrality::clustering_coefficient(&g),
            };
            emit(
                ScoreKind::Node,
                scores.0,
                output.out.as_deref(),
                output.format,
            )?;
        }
        Command::Got {
            input,
            output,
            edge_out,
            seed,
            thieves,
            vdiamonds,
            epochs,
            epoch_log_base,
            mean_convention,
            trace,
        } => {
            let g = input.load()?;
            let base = GotConfig::standard(g.node_count(), epoch_log_base, seed);
            let cfg = GotConfig {
                thieves_per_node: thieves,
                vdiamonds_per_node: vdiamonds.unwrap_or(base.vdiamonds_per_node),
                epochs: epochs.unwrap_or(base.epochs),
                seed,
                mean_convention,
            };
            let out = got::run_got_with(&g, &cfg, trace.is_some())?;
            if let (Some(path), Some(records)) = (trace, out.trace) {
                let mut w = sink(Some(&path))?;
                for r in records {
                    serde_json::to_writer(&mut w, &r)?;
                    writeln!(w)?;
                }
            }
            emit(
                ScoreKind::Node,
                out.node.0,
                output.out.as_deref(),
                output.format,
            )?;
            if let Some(path) = edge_out {
                emit(ScoreKind::Edge, out.edge.0, Some(&path), output.format)?;
            }
        }
        Command::Kpath {
            input,
            output,
            k,
            rho,
            seed,
            method,
        } => {
            let g = input.load()?;
            let cfg = KpathConfig {
                k,
                rho,
                seed,
                method,
            };
            let scores = kpath::werw_kpath(&g, &cfg)?;
            emit(
                ScoreKind::Edge,
                scores.0,
                output.out.as_deref(),
                output.format,
            )?;
        }
        Command::Correlate { a, b, format } => {
            let sa = nio::read_scores(&a).with_context(|| format!("reading {}", a.display()))?;
            let sb = nio::read_scores(&b).with_context(|| format!("reading {}", b.display()))?;
            let res = stats::correlate(&sa.values, &sb.values)?;
            let mut out = io::stdout().lock();
            match format {
                Format::Json => {
                    serde_json::to_writer_pretty(&mut out, &res)?;
                    writeln!(out)?;
                }
                Format::Csv => {
                    let show = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
                    writeln!(out, "pearson,spearman,kendall")?;
                    writeln!(out, "{},{},{}", show(res.r), show(res.rho), show(res.tau))?;
                }
            }
        }
        Command::Experiment {
            config,
            out,
            all_pairs,
            n,
            seed,
            epoch_log_base,
            workers,
        } => {
            let mut cfg = ExperimentConfig::load(&config)
                .with_context(|| format!("loading {}", config.display()))?;
            cfg.all_pairs |= all_pairs;
            if let Some(n) = n {
                cfg.n = n;
            }
            if let Some(s) = seed {
                cfg.base_seed = s;
            }
            if let Some(b) = epoch_log_base {
                cfg.got.log_base = b;
            }
            if workers.is_some() {
                cfg.workers = workers;
            }
            let report = harness::run_experiment(&cfg)?;
            let paths = harness::write_report(&report, &out)?;
            let records: Vec<_> = report.records().cloned().collect();
            let mut stdout = io::stdout().lock();
            writeln!(stdout, "family\tparam\tpair\tcoefficient\tmean\tmin\tmax")?;
            for row in harness::summarize(&records) {
                let show = |v: Option<f64>| v.map(|x| format!("{x:+.3}")).unwrap_or("null".into());
                writeln!(
                    stdout,
                    "{}\t{}\t{}\t{}\t{}\t{}\t{}",
                    row.family,
                    row.param,
                    row.pair,
                    row.coefficient.name(),
                    show(row.mean),
                    show(row.min),
                    show(row.max)
                )?;
            }
            writeln!(
                stdout,
                "{} records from {} cells, {} failed; reports in {}",
                records.len(),
                report.cells.len(),
                report.failures.len(),
                paths.records_csv.parent().unwrap_or(&out).display()
            )?;
            if report.cells.is_empty() {
                bail!("every cell failed");
            }
        }
    }
    Ok(())
}
