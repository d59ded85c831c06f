//! Game of Thieves: an epoch-based multi-agent simulation.
//!
//! Every node starts with the same stock of vdiamonds and hosts the same
//! number of thieves. In each epoch every thief makes exactly one hop, in
//! ascending thief order and with immediate updates:
//!
//! - an empty-handed thief walks to a uniformly random neighbor and steals
//!   one vdiamond there if the node has any and is not its home;
//! - a loaded thief steps back along its outbound trail, and drops the
//!   vdiamond at home on arrival.
//!
//! Node score Φ is the time-averaged stock (low means central). Edge score
//! Ψ is the time-averaged number of loaded crossings. Both are averaged as
//! `(1/T) * sum_{e=0}^{T}` by default, i.e. `T + 1` snapshots over `T`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeScores, Graph, NodeScores};
use crate::rng::{self, SimRng};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum LogBase {
    #[default]
    #[serde(rename = "e")]
    E,
    #[serde(rename = "2")]
    Two,
    #[serde(rename = "10")]
    Ten,
}

impl LogBase {
    pub fn log(self, x: f64) -> f64 {
        match self {
            LogBase::E => x.ln(),
            LogBase::Two => x.log2(),
            LogBase::Ten => x.log10(),
        }
    }
}

impl std::str::FromStr for LogBase {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "e" | "E" | "ln" => Ok(LogBase::E),
            "2" => Ok(LogBase::Two),
            "10" => Ok(LogBase::Ten),
            other => Err(Error::InvalidParameter(format!(
                "log base must be one of e, 2, 10; got {other:?}"
            ))),
        }
    }
}

/// Divisor used when averaging the `T + 1` per-epoch snapshots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeanConvention {
    /// Divide by `T`.
    #[default]
    Paper,
    /// Divide by `T + 1`.
    Arithmetic,
}

impl std::str::FromStr for MeanConvention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(MeanConvention::Paper),
            "arithmetic" => Ok(MeanConvention::Arithmetic),
            other => Err(Error::InvalidParameter(format!(
                "mean convention must be paper or arithmetic; got {other:?}"
            ))),
        }
    }
}

/// `ceil(log(n)^3)`, at least 1.
pub fn default_epochs(n: usize, base: LogBase) -> usize {
    let l = base.log(n.max(1) as f64);
    ((l * l * l).ceil() as usize).max(1)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GotConfig {
    pub thieves_per_node: usize,
    pub vdiamonds_per_node: u64,
    pub epochs: usize,
    pub seed: u64,
    #[serde(default)]
    pub mean_convention: MeanConvention,
}

impl GotConfig {
    /// One thief per node, `n` vdiamonds per node, `ceil(log(n)^3)` epochs.
    pub fn standard(n: usize, base: LogBase, seed: u64) -> Self {
        GotConfig {
            thieves_per_node: 1,
            vdiamonds_per_node: n as u64,
            epochs: default_epochs(n, base),
            seed,
            mean_convention: MeanConvention::Paper,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.thieves_per_node == 0 || self.vdiamonds_per_node == 0 || self.epochs == 0 {
            return Err(Error::InvalidParameter(format!(
                "thieves, vdiamonds and epochs must all be positive: {self:?}"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThiefState {
    pub home: usize,
    pub position: usize,
    pub carrying: bool,
    /// Nodes visited since leaving home, starting at `home` and ending at
    /// `position`.
    pub path: Vec<usize>,
    /// Edge ids between consecutive entries of `path`.
    pub path_edges: Vec<usize>,
}

impl ThiefState {
    pub fn at_home(home: usize) -> Self {
        ThiefState {
            home,
            position: home,
            carrying: false,
            path: vec![home],
            path_edges: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GotState {
    pub vdiamonds: Vec<u64>,
    pub thieves: Vec<ThiefState>,
    pub epoch: usize,
    /// Loaded crossings per edge during the latest epoch.
    pub loaded_crossings: Vec<u64>,
}

impl GotState {
    /// Initial state; thief `t` lives at node `t / thieves_per_node`.
    pub fn new(g: &Graph, cfg: &GotConfig) -> Self {
        let n = g.node_count();
        GotState {
            vdiamonds: vec![cfg.vdiamonds_per_node; n],
            thieves: (0..n * cfg.thieves_per_node)
                .map(|t| ThiefState::at_home(t / cfg.thieves_per_node))
                .collect(),
            epoch: 0,
            loaded_crossings: vec![0; g.edge_count()],
        }
    }

    pub fn held(&self) -> u64 {
        self.vdiamonds.iter().sum()
    }

    pub fn carrying(&self) -> u64 {
        self.thieves.iter().filter(|t| t.carrying).count() as u64
    }

    pub fn total(&self) -> u64 {
        self.held() + self.carrying()
    }
}

/// Advances the game by one epoch.
pub fn epoch_step(g: &Graph, state: &mut GotState, rng: &mut SimRng) {
    state.loaded_crossings.iter_mut().for_each(|c| *c = 0);
    let GotState {
        vdiamonds,
        thieves,
        loaded_crossings,
        ..
    } = state;
    for thief in thieves.iter_mut() {
        if thief.carrying {
            thief.path.pop();
            let edge = thief.path_edges.pop().expect("loaded thief away from home");
            loaded_crossings[edge] += 1;
            thief.position = *thief.path.last().unwrap();
            if thief.position == thief.home && thief.path.len() == 1 {
                vdiamonds[thief.home] += 1;
                thief.carrying = false;
            }
        } else {
            let here = thief.position;
            let pick = rng.gen_range(0..g.degree(here));
            let next = g.neighbors(here)[pick];
            thief.path.push(next);
            thief.path_edges.push(g.incident_edges(here)[pick]);
            thief.position = next;
            if next != thief.home && vdiamonds[next] > 0 {
                vdiamonds[next] -= 1;
                thief.carrying = true;
            }
        }
    }
    state.epoch += 1;
}

/// Per-epoch summary emitted when tracing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EpochRecord {
    pub epoch: usize,
    pub held: u64,
    pub carrying: u64,
}

#[derive(Debug, Clone)]
pub struct GotOutcome {
    pub node: NodeScores,
    pub edge: EdgeScores,
    pub trace: Option<Vec<EpochRecord>>,
}

pub fn run_got(g: &Graph, cfg: &GotConfig) -> Result<GotOutcome> {
    run_got_with(g, cfg, false)
}

/// Runs the game; with `trace` set, also returns one record per epoch
/// (including epoch 0).
pub fn run_got_with(g: &Graph, cfg: &GotConfig, trace: bool) -> Result<GotOutcome> {
    cfg.validate()?;
    let n = g.node_count();
    if n < 2 {
        return Err(Error::TooFewNodes { need: 2, got: n });
    }
    let dist = g.bfs_distances(0);
    if let Some(to) = dist.iter().position(Option::is_none) {
        return Err(Error::Disconnected { from: 0, to });
    }

    let mut rng = rng::stream(cfg.seed);
    let mut state = GotState::new(g, cfg);
    let mut phi_sum: Vec<u64> = state.vdiamonds.clone();
    let mut psi_sum: Vec<u64> = vec![0; g.edge_count()];
    let mut records = trace.then(|| {
        vec![EpochRecord {
            epoch: 0,
            held: state.held(),
            carrying: 0,
        }]
    });

    for _ in 0..cfg.epochs {
        epoch_step(g, &mut state, &mut rng);
        for (s, &v) in phi_sum.iter_mut().zip(&state.vdiamonds) {
            *s += v;
        }
        for (s, &c) in psi_sum.iter_mut().zip(&state.loaded_crossings) {
            *s += c;
        }
        if let Some(r) = records.as_mut() {
            r.push(EpochRecord {
                epoch: state.epoch,
                held: state.held(),
                carrying: state.carrying(),
            });
        }
    }

    let divisor = match cfg.mean_convention {
        MeanConvention::Paper => cfg.epochs as f64,
        MeanConvention::Arithmetic => (cfg.epochs + 1) as f64,
    };
    Ok(GotOutcome {
        node: NodeScores(phi_sum.iter().map(|&s| s as f64 / divisor).collect()),
        edge: EdgeScores(psi_sum.iter().map(|&s| s as f64 / divisor).collect()),
        trace: records,
    })
}
