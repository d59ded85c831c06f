//! k-path edge centrality: WERW-Kpath random-walk estimators and an exact
//! oracle for tiny graphs.
//!
//! A k-path from a source is an edge-simple walk (a trail) of `1..=k`
//! edges. The k-path centrality of edge `l` sums, over sources `i`, the
//! fraction of `i`'s k-paths that traverse `l`.
//!
//! Two estimators share the walk machinery: every step picks among the
//! current node's edges not yet used by the walk, and a walk stops after
//! `k` steps or when no unused edge is left.
//!
//! - [`KpathMethod::PathWeighted`] (default) gives every source the same
//!   number of uniform walks and weights each walk prefix by the product of
//!   the branching counts seen so far. That weight is the inverse sampling
//!   probability of the prefix, so per source the weighted traversal counts
//!   divided by the weighted prefix counts converge to the k-path
//!   fractions. Scores are the per-source ratios summed over sources.
//! - [`KpathMethod::Reinforced`] starts every edge at weight `1/m`, starts
//!   each walk at a degree-weighted node, picks edges in proportion to
//!   their current weight and adds `1/rho` to each traversed edge. Scores
//!   are the final weights.

use num_rational::Ratio;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeScores, Graph};
use crate::rng::{self, SimRng};

pub const ORACLE_MAX_NODES: usize = 10;
pub const ORACLE_MAX_K: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KpathMethod {
    #[default]
    PathWeighted,
    Reinforced,
}

impl std::str::FromStr for KpathMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "path-weighted" => Ok(KpathMethod::PathWeighted),
            "reinforced" => Ok(KpathMethod::Reinforced),
            other => Err(Error::InvalidParameter(format!(
                "k-path method must be path-weighted or reinforced; got {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KpathConfig {
    /// Maximum walk length in edges.
    pub k: usize,
    /// Number of walks; `None` means one walk per edge.
    pub rho: Option<usize>,
    pub seed: u64,
    #[serde(default)]
    pub method: KpathMethod,
}

impl KpathConfig {
    pub fn new(k: usize, seed: u64) -> Self {
        KpathConfig {
            k,
            rho: None,
            seed,
            method: KpathMethod::default(),
        }
    }

    pub fn with_rho(self, rho: usize) -> Self {
        KpathConfig {
            rho: Some(rho),
            ..self
        }
    }

    pub fn with_method(self, method: KpathMethod) -> Self {
        KpathConfig { method, ..self }
    }

    pub fn walks(&self, g: &Graph) -> usize {
        self.rho.unwrap_or_else(|| g.edge_count())
    }
}

pub fn werw_kpath(g: &Graph, cfg: &KpathConfig) -> Result<EdgeScores> {
    if g.edge_count() == 0 {
        return Err(Error::Empty("graph has no edges"));
    }
    if cfg.k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let rho = cfg.walks(g);
    if rho == 0 {
        return Err(Error::InvalidParameter("rho must be at least 1".into()));
    }
    let mut walker = Walker::new(g, rng::stream(cfg.seed));
    let scores = match cfg.method {
        KpathMethod::PathWeighted => path_weighted(&mut walker, cfg.k, rho),
        KpathMethod::Reinforced => reinforced(&mut walker, cfg.k, rho),
    };
    Ok(EdgeScores(scores))
}

/// Trail bookkeeping shared by both estimators.
struct Walker<'g> {
    g: &'g Graph,
    rng: SimRng,
    /// Id of the last walk that used each edge.
    used_in: Vec<usize>,
    walk: usize,
    options: Vec<(usize, usize)>,
}

impl<'g> Walker<'g> {
    fn new(g: &'g Graph, rng: SimRng) -> Self {
        Walker {
            g,
            rng,
            used_in: vec![usize::MAX; g.edge_count()],
            walk: 0,
            options: Vec::new(),
        }
    }

    fn begin(&mut self) {
        self.walk += 1;
    }

    /// Collects the unused edges at `here`; returns how many there are.
    fn gather(&mut self, here: usize) -> usize {
        self.options.clear();
        for (&next, &e) in self
            .g
            .neighbors(here)
            .iter()
            .zip(self.g.incident_edges(here))
        {
            if self.used_in[e] != self.walk {
                self.options.push((next, e));
            }
        }
        self.options.len()
    }

    fn take(&mut self, idx: usize) -> (usize, usize) {
        let (next, e) = self.options[idx];
        self.used_in[e] = self.walk;
        (next, e)
    }
}

fn path_weighted(w: &mut Walker, k: usize, rho: usize) -> Vec<f64> {
    let g = w.g;
    let (n, m) = (g.node_count(), g.edge_count());
    let mut score = vec![0.0; m];
    let mut num = vec![0.0; m];
    let mut touched: Vec<usize> = Vec::new();
    let mut trail: Vec<usize> = Vec::with_capacity(k);
    let mut prefix_weight: Vec<f64> = Vec::with_capacity(k);

    for source in 0..n {
        let walks = rho / n + usize::from(source < rho % n);
        if walks == 0 || g.degree(source) == 0 {
            continue;
        }
        let mut den = 0.0;
        for _ in 0..walks {
            w.begin();
            trail.clear();
            prefix_weight.clear();
            let (mut here, mut weight) = (source, 1.0);
            for _ in 0..k {
                let choices = w.gather(here);
                if choices == 0 {
                    break;
                }
                weight *= choices as f64;
                let pick = w.rng.gen_range(0..choices);
                let (next, e) = w.take(pick);
                trail.push(e);
                prefix_weight.push(weight);
                here = next;
            }
            // edge j lies on every prefix of length > j
            let mut suffix = 0.0;
            for (&e, &pw) in trail.iter().zip(&prefix_weight).rev() {
                suffix += pw;
                if num[e] == 0.0 {
                    touched.push(e);
                }
                num[e] += suffix;
            }
            den += suffix;
        }
        for &e in &touched {
            score[e] += num[e] / den;
            num[e] = 0.0;
        }
        touched.clear();
    }
    score
}

fn reinforced(w: &mut Walker, k: usize, rho: usize) -> Vec<f64> {
    let g = w.g;
    let m = g.edge_count();
    let mut weight = vec![1.0 / m as f64; m];
    let bump = 1.0 / rho as f64;

    for _ in 0..rho {
        w.begin();
        // a uniform edge endpoint is a degree-weighted node
        let slot = w.rng.gen_range(0..2 * m);
        let (a, b) = g.edge(slot / 2);
        let mut here = if slot % 2 == 0 { a } else { b };
        for _ in 0..k {
            let choices = w.gather(here);
            if choices == 0 {
                break;
            }
            let total: f64 = w.options.iter().map(|&(_, e)| weight[e]).sum();
            let mut x = w.rng.gen::<f64>() * total;
            let mut pick = choices - 1;
            for (i, &(_, e)) in w.options.iter().enumerate() {
                x -= weight[e];
                if x < 0.0 {
                    pick = i;
                    break;
                }
            }
            let (next, e) = w.take(pick);
            weight[e] += bump;
            here = next;
        }
    }
    weight
}

/// Exact k-path centrality by enumerating every trail of length `1..=k`
/// from every source. Sources without trails contribute nothing.
///
/// Sums are exact rationals, so symmetric edges get bit-identical scores.
pub fn oracle_kpath(g: &Graph, k: usize) -> Result<EdgeScores> {
    let n = g.node_count();
    if n > ORACLE_MAX_NODES || k > ORACLE_MAX_K {
        return Err(Error::TooLarge(format!(
            "k-path oracle accepts n <= {ORACLE_MAX_NODES} and k <= {ORACLE_MAX_K}, got n={n}, k={k}"
        )));
    }
    let m = g.edge_count();
    let mut score = vec![Ratio::from_integer(0i64); m];
    let mut used = vec![false; m];
    let mut trail = Vec::with_capacity(k);
    for source in 0..n {
        let mut through = vec![0i64; m];
        let mut count = 0i64;
        enumerate(
            g,
            source,
            k,
            &mut used,
            &mut trail,
            &mut through,
            &mut count,
        );
        if count > 0 {
            for (s, &t) in score.iter_mut().zip(&through) {
                *s += Ratio::new(t, count);
            }
        }
    }
    Ok(EdgeScores(
        score
            .iter()
            .map(|r| *r.numer() as f64 / *r.denom() as f64)
            .collect(),
    ))
}

fn enumerate(
    g: &Graph,
    here: usize,
    budget: usize,
    used: &mut [bool],
    trail: &mut Vec<usize>,
    through: &mut [i64],
    count: &mut i64,
) {
    if budget == 0 {
        return;
    }
    for (&next, &e) in g.neighbors(here).iter().zip(g.incident_edges(here)) {
        if used[e] {
            continue;
        }
        used[e] = true;
        trail.push(e);
        *count += 1;
        for &t in trail.iter() {
            through[t] += 1;
        }
        enumerate(g, next, budget - 1, used, trail, through, count);
        trail.pop();
        used[e] = false;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_single_edge() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        assert_eq!(oracle_kpath(&g, 1).unwrap().0, vec![2.0]);
    }

    #[test]
    fn oracle_path_graph() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(oracle_kpath(&g, 1).unwrap().0, vec![1.5, 1.5]);
        // source 0: trails (0-1), (0-1-2): e0 in 2/2, e1 in 1/2
        // source 1: trails (1-0), (1-2): e0 in 1/2, e1 in 1/2
        // source 2: symmetric to 0
        assert_eq!(oracle_kpath(&g, 2).unwrap().0, vec![2.0, 2.0]);
    }

    #[test]
    fn oracle_ties_are_exact() {
        let star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        for k in 1..=4 {
            let s = oracle_kpath(&star, k).unwrap();
            assert!(s.iter().all(|&x| x == s[0]), "k={k}: {:?}", s.0);
        }
    }

    #[test]
    fn oracle_guards() {
        let e: Vec<_> = (1..11).map(|i| (i - 1, i)).collect();
        let g = Graph::from_edges(11, &e).unwrap();
        assert!(matches!(oracle_kpath(&g, 2), Err(Error::TooLarge(_))));
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        assert!(matches!(oracle_kpath(&g, 7), Err(Error::TooLarge(_))));
    }

    #[test]
    fn oracle_isolated_source_contributes_nothing() {
        let g = Graph::from_edges(3, &[(0, 1)]).unwrap();
        assert_eq!(oracle_kpath(&g, 2).unwrap().0, vec![2.0]);
    }

    #[test]
    fn single_edge_walks_are_forced() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let cfg = KpathConfig::new(10, 3).with_rho(4);
        // one forced walk per source, each a full k-path fraction of 1
        assert_eq!(werw_kpath(&g, &cfg).unwrap().0, vec![2.0]);
        // prior 1/m = 1 plus four traversals of 1/rho each
        let cfg = cfg.with_method(KpathMethod::Reinforced);
        assert!((werw_kpath(&g, &cfg).unwrap()[0] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_empty_and_bad_config() {
        let g = Graph::from_edges(3, &[]).unwrap();
        assert!(matches!(
            werw_kpath(&g, &KpathConfig::new(2, 0)),
            Err(Error::Empty(_))
        ));
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        assert!(werw_kpath(&g, &KpathConfig::new(0, 0)).is_err());
        assert!(werw_kpath(&g, &KpathConfig::new(1, 0).with_rho(0)).is_err());
    }

    #[test]
    fn path_weighted_exact_on_trees_with_k1() {
        // with k = 1 every walk from a leaf is forced, and the centre's
        // ratio is exact once its walks cover both edges
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let s = werw_kpath(&g, &KpathConfig::new(1, 9).with_rho(3_000)).unwrap();
        for x in s.iter() {
            assert!((x - 1.5).abs() < 0.05, "{:?}", s.0);
        }
    }

    #[test]
    fn path_weighted_converges_to_oracle() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 4)]).unwrap();
        for k in 1..=3 {
            let exact = oracle_kpath(&g, k).unwrap();
            let est = werw_kpath(&g, &KpathConfig::new(k, 4).with_rho(50_000)).unwrap();
            for (a, b) in est.iter().zip(exact.iter()) {
                assert!(
                    (a - b).abs() < 0.03 * b,
                    "k={k}: {:?} vs {:?}",
                    est.0,
                    exact.0
                );
            }
        }
    }

    #[test]
    fn total_mass_bounds() {
        let g = crate::generators::holme_kim(60, 3, 0.3, 8).unwrap();
        let m = g.edge_count() as f64;
        for k in [1, 3, 10] {
            let base = KpathConfig::new(k, 21);
            let s = werw_kpath(&g, &base.with_method(KpathMethod::Reinforced)).unwrap();
            let added: f64 = s.iter().map(|w| w - 1.0 / m).sum();
            assert!(added <= k as f64 + 1e-9);
            assert!(s.iter().all(|&w| w >= 1.0 / m));

            // each source contributes a weighted mean trail length <= k
            let s = werw_kpath(&g, &base).unwrap();
            let total: f64 = s.iter().sum();
            assert!(total <= (g.node_count() * k) as f64 + 1e-9);
            assert!(s.iter().all(|&x| x >= 0.0));
        }
    }

    #[test]
    fn reinforced_path_graph_matches_urn_expectation() {
        // P3 with k = 1: ends always take their own edge, the centre picks
        // edge 0 with probability w0 / (w0 + w1). Exact expectation by
        // dynamic programming over the traversal count of edge 0.
        let rho = 40usize;
        let mut dist = vec![0.0f64; rho + 1];
        dist[0] = 1.0;
        for t in 0..rho {
            let mut next = vec![0.0; rho + 1];
            for a in 0..=t {
                let p = dist[a];
                if p == 0.0 {
                    continue;
                }
                let w0 = 0.5 + a as f64 / rho as f64;
                let w1 = 0.5 + (t - a) as f64 / rho as f64;
                let up = 0.25 + 0.5 * w0 / (w0 + w1);
                next[a + 1] += p * up;
                next[a] += p * (1.0 - up);
            }
            dist = next;
        }
        let expected: f64 = 0.5
            + dist
                .iter()
                .enumerate()
                .map(|(a, p)| p * a as f64)
                .sum::<f64>()
                / rho as f64;
        assert!((expected - 1.0).abs() < 1e-12);

        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let runs = 2_000;
        let mean: f64 = (0..runs)
            .map(|seed| {
                let cfg = KpathConfig::new(1, seed)
                    .with_rho(rho)
                    .with_method(KpathMethod::Reinforced);
                werw_kpath(&g, &cfg).unwrap()[0]
            })
            .sum::<f64>()
            / runs as f64;
        // per-run sd is below 0.25, so 4 standard errors is under 0.025
        assert!((mean - expected).abs() < 0.025, "mean {mean}");
    }

    #[test]
    fn equivariant_under_edge_relabeling() {
        let g = crate::generators::erdos_renyi(20, 0.3, 2).unwrap();
        let mut rev: Vec<_> = g.edges().to_vec();
        rev.reverse();
        let h = Graph::from_edges(20, &rev).unwrap();
        let cfg = KpathConfig::new(4, 6).with_rho(500);
        let a = werw_kpath(&g, &cfg).unwrap();
        let b = werw_kpath(&h, &cfg).unwrap();
        let m = g.edge_count();
        for e in 0..m {
            assert_eq!(a[e], b[m - 1 - e]);
        }
    }
}
