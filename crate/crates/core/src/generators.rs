//! Seeded random graph models: Erdős–Rényi G(n, p), Newman–Watts small
//! world, and Holme–Kim scale-free growth with triad formation.
//!
//! Every call consumes exactly one [`rng::stream`] built from its seed, so
//! a fixed seed yields the same edge list (and edge ids) everywhere.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::{self, SimRng};

/// Below this edge probability G(n, p) is sampled with geometric skips.
const SKIP_THRESHOLD: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    /// Holme–Kim scale-free.
    #[serde(rename = "SF")]
    ScaleFree,
    /// Newman–Watts small world.
    #[serde(rename = "SW")]
    SmallWorld,
    /// Erdős–Rényi G(n, p).
    #[serde(rename = "ER")]
    ErdosRenyi,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::ScaleFree, Family::SmallWorld, Family::ErdosRenyi];

    pub fn tag(self) -> &'static str {
        match self {
            Family::ScaleFree => "SF",
            Family::SmallWorld => "SW",
            Family::ErdosRenyi => "ER",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "SF" => Ok(Family::ScaleFree),
            "SW" => Ok(Family::SmallWorld),
            "ER" => Ok(Family::ErdosRenyi),
            other => Err(Error::InvalidParameter(format!("unknown family {other:?}"))),
        }
    }
}

/// Parameters for one generator invocation.
///
/// `param` is the edges-per-new-node count for SF, the ring degree for SW
/// and the edge probability for ER. `aux_prob` is the triad probability
/// for SF and the shortcut probability for SW; ER ignores it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub family: Family,
    pub n: usize,
    pub param: f64,
    pub aux_prob: f64,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn generate(&self) -> Result<Graph> {
        match self.family {
            Family::ErdosRenyi => erdos_renyi(self.n, self.param, self.seed),
            Family::SmallWorld => {
                newman_watts(self.n, integral(self.param, "k")?, self.aux_prob, self.seed)
            }
            Family::ScaleFree => {
                holme_kim(self.n, integral(self.param, "m")?, self.aux_prob, self.seed)
            }
        }
    }
}

fn integral(x: f64, name: &str) -> Result<usize> {
    if x >= 0.0 && x.fract() == 0.0 && x < u32::MAX as f64 {
        Ok(x as usize)
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must be a non-negative integer, got {x}"
        )))
    }
}

fn check_prob(p: f64, name: &str) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must lie in [0, 1], got {p}"
        )))
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    Ok(())
}

/// G(n, p): each unordered pair present independently with probability `p`.
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Graph> {
    check_n(n)?;
    check_prob(p, "p")?;
    let mut rng = rng::stream(seed);
    let mut edges = Vec::new();
    if p == 0.0 {
        return Graph::from_edges(n, &[]);
    }
    if p < SKIP_THRESHOLD {
        // Batagelj–Brandes: walk the lower triangle with geometric gaps.
        let log_q = (1.0 - p).ln();
        let (mut v, mut w) = (1usize, -1i64);
        while v < n {
            let r: f64 = rng.gen();
            w += 1 + ((1.0 - r).ln() / log_q).floor() as i64;
            while w >= v as i64 && v < n {
                w -= v as i64;
                v += 1;
            }
            if v < n {
                edges.push((w as usize, v));
            }
        }
    } else {
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    edges.push((u, v));
                }
            }
        }
    }
    Graph::from_edges(n, &edges)
}

/// Ring lattice of degree `k` plus, for each lattice edge with probability
/// `p`, one shortcut between a uniformly random non-adjacent pair. Lattice
/// edges are never removed.
pub fn newman_watts(n: usize, k: usize, p: f64, seed: u64) -> Result<Graph> {
    check_n(n)?;
    check_prob(p, "p")?;
    if k < 2 || !k.is_multiple_of(2) || k >= n {
        return Err(Error::InvalidParameter(format!(
            "ring degree k must be even with 2 <= k < n, got k={k}, n={n}"
        )));
    }
    let mut rng = rng::stream(seed);
    let mut present = HashSet::new();
    let mut edges = Vec::with_capacity(n * k / 2);
    for u in 0..n {
        for j in 1..=k / 2 {
            let v = (u + j) % n;
            present.insert((u.min(v), u.max(v)));
            edges.push((u, v));
        }
    }
    let lattice = edges.len();
    let max_edges = n * (n - 1) / 2;
    for _ in 0..lattice {
        if !rng.gen_bool(p) {
            continue;
        }
        if present.len() == max_edges {
            break;
        }
        loop {
            let u = rng.gen_range(0..n);
            let v = rng.gen_range(0..n);
            if u != v && present.insert((u.min(v), u.max(v))) {
                edges.push((u, v));
                break;
            }
        }
    }
    Graph::from_edges(n, &edges)
}

/// Holme–Kim growth: `m` isolated seed nodes, node `m` links to all of them,
/// then every new node adds `m` edges. The first goes to a degree-weighted
/// target; each further edge is, with probability `p`, closed into a
/// triangle through a random neighbor of the previous target, otherwise
/// degree-weighted again.
pub fn holme_kim(n: usize, m: usize, p: f64, seed: u64) -> Result<Graph> {
    check_prob(p, "p")?;
    if m < 1 || m >= n {
        return Err(Error::InvalidParameter(format!(
            "edges per node m must satisfy 1 <= m < n, got m={m}, n={n}"
        )));
    }
    let mut rng = rng::stream(seed);
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    // each edge contributes both endpoints, so uniform draws are degree-weighted
    let mut endpoints: Vec<usize> = Vec::with_capacity(2 * m * (n - m));
    let mut edges = Vec::with_capacity(m * (n - m));

    for t in 0..m {
        adj[m].push(t);
        adj[t].push(m);
        endpoints.extend([m, t]);
        edges.push((m, t));
    }

    let mut chosen: Vec<usize> = Vec::with_capacity(m);
    let mut candidates: Vec<usize> = Vec::new();
    for source in m + 1..n {
        chosen.clear();
        let mut prev = preferential(&mut rng, &endpoints, &chosen);
        chosen.push(prev);
        while chosen.len() < m {
            let mut target = None;
            if rng.gen_bool(p) {
                candidates.clear();
                candidates.extend(adj[prev].iter().copied().filter(|v| !chosen.contains(v)));
                target = candidates.choose(&mut rng).copied();
            }
            let target = match target {
                Some(t) => t,
                None => preferential(&mut rng, &endpoints, &chosen),
            };
            chosen.push(target);
            prev = target;
        }
        for &t in &chosen {
            adj[source].push(t);
            adj[t].push(source);
            endpoints.extend([source, t]);
            edges.push((source, t));
        }
    }
    Graph::from_edges(n, &edges)
}

fn preferential(rng: &mut SimRng, endpoints: &[usize], exclude: &[usize]) -> usize {
    loop {
        let v = endpoints[rng.gen_range(0..endpoints.len())];
        if !exclude.contains(&v) {
            return v;
        }
    }
}
