//! Experiment matrix: generate graphs per (family, parameter, seed) cell,
//! compute exact and stochastic centralities on the largest connected
//! component, and correlate them.
//!
//! Each cell seed is split into three stage seeds with
//! [`rng::derive_seed`] using the tags `"gen"`, `"got"` and `"kpath"`.
//! Cells are independent and run on a bounded worker pool; reports are
//! assembled in cell order afterwards.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::centrality;
use crate::error::{Error, Result};
use crate::generators::{Family, GeneratorSpec};
use crate::got::{self, GotConfig, LogBase, MeanConvention};
use crate::graph::Graph;
use crate::kpath::{self, KpathConfig, KpathMethod};
use crate::rng;
use crate::stats::{self, Coefficient};

pub const SCHEMA_VERSION: u32 = 1;

/// Parameter list for one generator family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyParams {
    pub params: Vec<f64>,
    #[serde(default)]
    pub aux_prob: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GotOverrides {
    pub thieves_per_node: Option<usize>,
    /// Defaults to the component size.
    pub vdiamonds_per_node: Option<u64>,
    /// Defaults to `ceil(log(n)^3)` in `log_base`.
    pub epochs: Option<usize>,
    #[serde(default)]
    pub log_base: LogBase,
    #[serde(default)]
    pub mean_convention: MeanConvention,
}

impl GotOverrides {
    pub fn resolve(&self, n: usize, seed: u64) -> GotConfig {
        let base = GotConfig::standard(n, self.log_base, seed);
        GotConfig {
            thieves_per_node: self.thieves_per_node.unwrap_or(base.thieves_per_node),
            vdiamonds_per_node: self.vdiamonds_per_node.unwrap_or(base.vdiamonds_per_node),
            epochs: self.epochs.unwrap_or(base.epochs),
            seed,
            mean_convention: self.mean_convention,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KpathOverrides {
    #[serde(default = "default_k")]
    pub k: usize,
    /// Defaults to the component's edge count.
    pub rho: Option<usize>,
    #[serde(default)]
    pub method: KpathMethod,
}

fn default_k() -> usize {
    10
}

impl Default for KpathOverrides {
    fn default() -> Self {
        KpathOverrides {
            k: default_k(),
            rho: None,
            method: KpathMethod::default(),
        }
    }
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n: usize,
    #[serde(default = "one")]
    pub seeds_per_cell: usize,
    /// Replicate `r` of every cell uses seed `base_seed + r`.
    #[serde(default)]
    pub base_seed: u64,
    pub families: BTreeMap<Family, FamilyParams>,
    #[serde(default)]
    pub got: GotOverrides,
    #[serde(default)]
    pub kpath: KpathOverrides,
    /// Also correlate the exact measures with each other.
    #[serde(default)]
    pub all_pairs: bool,
    /// Worker threads; `None` uses all available cores.
    #[serde(default)]
    pub workers: Option<usize>,
}

impl ExperimentConfig {
    /// Full-size matrix: n = 10,000, 13 cells.
    pub fn full() -> Self {
        Self::with_lists(
            10_000,
            vec![5.0, 15.0, 25.0, 35.0, 50.0],
            vec![6.0, 18.0, 32.0, 64.0],
            vec![0.001, 0.003, 0.005, 0.010],
        )
    }

    /// Scaled matrix: n = 1,000, three parameters per family, five seeds.
    pub fn desk() -> Self {
        let mut cfg = Self::with_lists(
            1_000,
            vec![5.0, 15.0, 25.0],
            vec![6.0, 18.0, 32.0],
            vec![0.01, 0.03, 0.05],
        );
        cfg.seeds_per_cell = 5;
        cfg
    }

    fn with_lists(n: usize, sf: Vec<f64>, sw: Vec<f64>, er: Vec<f64>) -> Self {
        let mut families = BTreeMap::new();
        families.insert(
            Family::ScaleFree,
            FamilyParams {
                params: sf,
                aux_prob: 0.3,
            },
        );
        families.insert(
            Family::SmallWorld,
            FamilyParams {
                params: sw,
                aux_prob: 0.6,
            },
        );
        families.insert(
            Family::ErdosRenyi,
            FamilyParams {
                params: er,
                aux_prob: 0.0,
            },
        );
        ExperimentConfig {
            n,
            seeds_per_cell: 1,
            base_seed: 1,
            families,
            got: GotOverrides::default(),
            kpath: KpathOverrides::default(),
            all_pairs: false,
            workers: None,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.families.values().all(|f| f.params.is_empty()) {
            return Err(Error::Empty("no family parameters: nothing to run"));
        }
        if self.seeds_per_cell == 0 {
            return Err(Error::InvalidParameter(
                "seeds_per_cell must be at least 1".into(),
            ));
        }
        if self.kpath.k == 0 || self.kpath.rho == Some(0) {
            return Err(Error::InvalidParameter(
                "k-path k and rho must be positive".into(),
            ));
        }
        Ok(())
    }

    pub fn cells(&self) -> Vec<Cell> {
        let mut cells = Vec::new();
        for (&family, fp) in &self.families {
            for &param in &fp.params {
                for r in 0..self.seeds_per_cell {
                    cells.push(Cell {
                        family,
                        n: self.n,
                        param,
                        aux_prob: fp.aux_prob,
                        seed: self.base_seed.wrapping_add(r as u64),
                    });
                }
            }
        }
        cells
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub family: Family,
    pub n: usize,
    pub param: f64,
    pub aux_prob: f64,
    pub seed: u64,
}

impl Cell {
    fn describe(&self) -> String {
        format!(
            "cell {} n={} param={} seed={}",
            self.family, self.n, self.param, self.seed
        )
    }
}

/// Wall time of each cell stage, in milliseconds.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct StageTimes {
    pub generate: f64,
    pub lcc: f64,
    pub dc: f64,
    pub bc: f64,
    pub cl: f64,
    pub cc: f64,
    pub got: f64,
    pub kpath: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub schema_version: u32,
    pub family: Family,
    pub n: usize,
    pub param: f64,
    pub seed: u64,
    pub lcc_n: usize,
    pub lcc_m: usize,
    pub pair: String,
    pub coefficient: Coefficient,
    pub value: Option<f64>,
    /// Time spent computing both score vectors of the pair.
    pub wall_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub cell: Cell,
    pub lcc_n: usize,
    pub lcc_m: usize,
    pub stage_ms: StageTimes,
    pub records: Vec<ExperimentRecord>,
}

pub const GOT_NODE: &str = "GoT-node";
pub const GOT_EDGE: &str = "GoT-edge";
pub const WERW_KPATH: &str = "WERW-Kpath";
pub const EXACT_MEASURES: [&str; 4] = ["DC", "BC", "CL", "CC"];

pub fn pair_name(a: &str, b: &str) -> String {
    format!("{a}~{b}")
}

fn timed<T>(slot: &mut f64, f: impl FnOnce() -> T) -> T {
    let start = Instant::now();
    let out = f();
    *slot = start.elapsed().as_secs_f64() * 1e3;
    out
}

/// Runs one cell: 12 GoT-node records, 3 GoT-edge records, plus 18
/// exact-vs-exact records when `all_pairs` is set.
pub fn run_cell(
    cell: &Cell,
    got_cfg: &GotOverrides,
    kpath_cfg: &KpathOverrides,
    all_pairs: bool,
) -> Result<CellResult> {
    run_cell_inner(cell, got_cfg, kpath_cfg, all_pairs).map_err(|e| e.context(cell.describe()))
}

fn run_cell_inner(
    cell: &Cell,
    got_cfg: &GotOverrides,
    kpath_cfg: &KpathOverrides,
    all_pairs: bool,
) -> Result<CellResult> {
    let mut t = StageTimes::default();
    let spec = GeneratorSpec {
        family: cell.family,
        n: cell.n,
        param: cell.param,
        aux_prob: cell.aux_prob,
        seed: rng::derive_seed(cell.seed, "gen"),
    };
    let g = timed(&mut t.generate, || spec.generate())?;
    let (g, _) = timed(&mut t.lcc, || g.largest_connected_component())?;
    if g.edge_count() == 0 {
        return Err(Error::Empty("largest connected component has no edges"));
    }
    measure(cell, &g, got_cfg, kpath_cfg, all_pairs, t)
}

fn measure(
    cell: &Cell,
    g: &Graph,
    got_cfg: &GotOverrides,
    kpath_cfg: &KpathOverrides,
    all_pairs: bool,
    mut t: StageTimes,
) -> Result<CellResult> {
    let n = g.node_count();
    let dc = timed(&mut t.dc, || centrality::degree_centrality(g))?;
    let bc = timed(&mut t.bc, || centrality::betweenness_centrality(g));
    let cl = timed(&mut t.cl, || centrality::closeness_centrality(g))?;
    let cc = timed(&mut t.cc, || centrality::clustering_coefficient(g));

    let got_run = got_cfg.resolve(n, rng::derive_seed(cell.seed, "got"));
    let got = timed(&mut t.got, || got::run_got(g, &got_run))?;

    let kp_run = KpathConfig {
        k: kpath_cfg.k,
        rho: kpath_cfg.rho,
        seed: rng::derive_seed(cell.seed, "kpath"),
        method: kpath_cfg.method,
    };
    let werw = timed(&mut t.kpath, || kpath::werw_kpath(g, &kp_run))?;

    let exact: [(&str, &[f64], f64); 4] = [
        ("DC", &dc, t.dc),
        ("BC", &bc, t.bc),
        ("CL", &cl, t.cl),
        ("CC", &cc, t.cc),
    ];
    let mut records = Vec::with_capacity(33);
    let mut push = |a: &str, b: &str, x: &[f64], y: &[f64], ms: f64| -> Result<()> {
        let res = stats::correlate(x, y)?;
        for coef in Coefficient::ALL {
            records.push(ExperimentRecord {
                schema_version: SCHEMA_VERSION,
                family: cell.family,
                n: cell.n,
                param: cell.param,
                seed: cell.seed,
                lcc_n: n,
                lcc_m: g.edge_count(),
                pair: pair_name(a, b),
                coefficient: coef,
                value: coef.pick(&res),
                wall_ms: ms,
            });
        }
        Ok(())
    };
    for (name, scores, ms) in exact {
        push(GOT_NODE, name, &got.node, scores, t.got + ms)?;
    }
    push(GOT_EDGE, WERW_KPATH, &got.edge, &werw, t.got + t.kpath)?;
    if all_pairs {
        for i in 0..exact.len() {
            for j in i + 1..exact.len() {
                let (a, x, ta) = exact[i];
                let (b, y, tb) = exact[j];
                push(a, b, x, y, ta + tb)?;
            }
        }
    }

    Ok(CellResult {
        cell: *cell,
        lcc_n: n,
        lcc_m: g.edge_count(),
        stage_ms: t,
        records,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellFailure {
    pub cell: Cell,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema_version: u32,
    pub config: ExperimentConfig,
    pub cells: Vec<CellResult>,
    pub failures: Vec<CellFailure>,
}

impl ExperimentReport {
    pub fn records(&self) -> impl Iterator<Item = &ExperimentRecord> {
        self.cells.iter().flat_map(|c| c.records.iter())
    }
}

/// Runs every cell. Failed cells are reported, not fatal.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let cells = cfg.cells();
    let run = || -> Vec<Result<CellResult>> {
        cells
            .par_iter()
            .map(|c| run_cell(c, &cfg.got, &cfg.kpath, cfg.all_pairs))
            .collect()
    };
    let outcomes = match cfg.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("worker pool: {e}")))?
            .install(run),
        None => run(),
    };

    let mut report = ExperimentReport {
        schema_version: SCHEMA_VERSION,
        config: cfg.clone(),
        cells: Vec::new(),
        failures: Vec::new(),
    };
    for (cell, outcome) in cells.into_iter().zip(outcomes) {
        match outcome {
            Ok(res) => report.cells.push(res),
            Err(e) => report.failures.push(CellFailure {
                cell,
                error: e.to_string(),
            }),
        }
    }
    Ok(report)
}

pub fn write_records_csv<W: std::io::Write>(
    records: impl IntoIterator<Item = impl std::borrow::Borrow<ExperimentRecord>>,
    out: W,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r.borrow())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_records_csv<R: std::io::Read>(input: R) -> Result<Vec<ExperimentRecord>> {
    let mut rdr = csv::Reader::from_reader(input);
    let mut out = Vec::new();
    for row in rdr.deserialize() {
        out.push(row?);
    }
    Ok(out)
}

/// One row of a plot-data file. The family and coefficient are carried by
/// the file name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotRow {
    pub param: f64,
    pub seed: u64,
    pub lcc_n: usize,
    pub lcc_m: usize,
    pub pair: String,
    pub value: Option<f64>,
    pub wall_ms: f64,
}

pub fn plot_file_name(coefficient: Coefficient, family: Family) -> String {
    format!("plot_{}_{}.csv", coefficient.name(), family.tag())
}

/// Groups records by (coefficient, family), keeping record order.
pub fn plot_data(records: &[ExperimentRecord]) -> BTreeMap<(Coefficient, Family), Vec<PlotRow>> {
    let mut out: BTreeMap<_, Vec<PlotRow>> = BTreeMap::new();
    for r in records {
        out.entry((r.coefficient, r.family))
            .or_default()
            .push(PlotRow {
                param: r.param,
                seed: r.seed,
                lcc_n: r.lcc_n,
                lcc_m: r.lcc_m,
                pair: r.pair.clone(),
                value: r.value,
                wall_ms: r.wall_ms,
            });
    }
    out
}

/// Files written by [`write_report`].
#[derive(Debug, Clone)]
pub struct ReportPaths {
    pub records_csv: PathBuf,
    pub report_json: PathBuf,
    pub failures_csv: PathBuf,
    pub plots: Vec<PathBuf>,
}

/// Writes `records.csv`, `report.json`, `failures.csv` and one
/// `plot_<coefficient>_<family>.csv` per group into `dir`.
pub fn write_report(report: &ExperimentReport, dir: &Path) -> Result<ReportPaths> {
    fs::create_dir_all(dir)?;
    let records: Vec<ExperimentRecord> = report.records().cloned().collect();

    let records_csv = dir.join("records.csv");
    write_records_csv(&records, fs::File::create(&records_csv)?)?;

    let report_json = dir.join("report.json");
    serde_json::to_writer_pretty(fs::File::create(&report_json)?, report)?;

    let failures_csv = dir.join("failures.csv");
    let mut w = csv::Writer::from_path(&failures_csv)?;
    w.write_record(["family", "n", "param", "seed", "error"])?;
    for f in &report.failures {
        w.write_record([
            f.cell.family.tag().to_string(),
            f.cell.n.to_string(),
            f.cell.param.to_string(),
            f.cell.seed.to_string(),
            f.error.clone(),
        ])?;
    }
    w.flush()?;

    let mut plots = Vec::new();
    for ((coef, family), rows) in plot_data(&records) {
        let path = dir.join(plot_file_name(coef, family));
        let mut w = csv::Writer::from_path(&path)?;
        for row in rows {
            w.serialize(row)?;
        }
        w.flush()?;
        plots.push(path);
    }
    Ok(ReportPaths {
        records_csv,
        report_json,
        failures_csv,
        plots,
    })
}

/// Mean and range of a coefficient over the seeds of one
/// (family, param, pair) group.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub family: Family,
    pub param: f64,
    pub pair: String,
    pub coefficient: Coefficient,
    pub seeds: usize,
    pub mean: Option<f64>,
    pub min: Option<f64>,
    pub max: Option<f64>,
}

pub fn summarize(records: &[ExperimentRecord]) -> Vec<SummaryRow> {
    let mut groups: Vec<(SummaryKey, Vec<Option<f64>>)> = Vec::new();
    for r in records {
        let key = (r.family, r.param, r.pair.clone(), r.coefficient);
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, vals)) => vals.push(r.value),
            None => groups.push((key, vec![r.value])),
        }
    }
    groups
        .into_iter()
        .map(|((family, param, pair, coefficient), vals)| {
            let defined: Vec<f64> = vals.iter().flatten().copied().collect();
            let stat = |f: fn(f64, f64) -> f64| defined.iter().copied().reduce(f);
            SummaryRow {
                family,
                param,
                pair,
                coefficient,
                seeds: vals.len(),
                mean: (!defined.is_empty())
                    .then(|| defined.iter().sum::<f64>() / defined.len() as f64),
                min: stat(f64::min),
                max: stat(f64::max),
            }
        })
        .collect()
}

type SummaryKey = (Family, f64, String, Coefficient);
