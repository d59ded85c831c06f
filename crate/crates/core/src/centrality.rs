//! Exact node centralities: degree, betweenness (Brandes), closeness and
//! local clustering, plus a brute-force betweenness oracle for testing.
//!
//! Conventions:
//! - betweenness sums over unordered pairs `{h, k}` with `h, k != i`, is not
//!   normalized, and unreachable pairs contribute nothing;
//! - closeness is `n / sum_j d(i, j)` with numerator `n`, not `n - 1`;
//! - clustering is 0 for nodes of degree below 2.

use std::collections::VecDeque;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeScores};

/// Sources per parallel Brandes task. Partial sums are folded in chunk
/// order, so results do not depend on the thread count.
const SOURCE_CHUNK: usize = 64;

/// Largest graph accepted by [`oracle_betweenness`].
pub const ORACLE_MAX_NODES: usize = 200;

pub fn degree_centrality(g: &Graph) -> Result<NodeScores> {
    let n = g.node_count();
    if n < 2 {
        return Err(Error::TooFewNodes { need: 2, got: n });
    }
    let denom = (n - 1) as f64;
    Ok(NodeScores(
        (0..n).map(|u| g.degree(u) as f64 / denom).collect(),
    ))
}

/// Brandes betweenness, O(nm) for unweighted graphs.
pub fn betweenness_centrality(g: &Graph) -> NodeScores {
    let sources: Vec<usize> = (0..g.node_count()).collect();
    let partials: Vec<Vec<f64>> = sources
        .par_chunks(SOURCE_CHUNK)
        .map(|chunk| brandes_chunk(g, chunk))
        .collect();
    fold_partials(g.node_count(), partials)
}

/// Single-threaded [`betweenness_centrality`], bit-identical output.
pub fn betweenness_centrality_serial(g: &Graph) -> NodeScores {
    let sources: Vec<usize> = (0..g.node_count()).collect();
    let partials = sources
        .chunks(SOURCE_CHUNK)
        .map(|chunk| brandes_chunk(g, chunk))
        .collect();
    fold_partials(g.node_count(), partials)
}

fn brandes_chunk(g: &Graph, sources: &[usize]) -> Vec<f64> {
    let mut work = BrandesWork::new(g.node_count());
    let mut acc = vec![0.0; g.node_count()];
    for &s in sources {
        work.accumulate(g, s, &mut acc);
    }
    acc
}

fn fold_partials(n: usize, partials: Vec<Vec<f64>>) -> NodeScores {
    let mut bc = vec![0.0; n];
    for part in partials {
        for (b, p) in bc.iter_mut().zip(part) {
            *b += p;
        }
    }
    // every unordered pair was seen from both endpoints
    for b in &mut bc {
        *b /= 2.0;
    }
    NodeScores(bc)
}

struct BrandesWork {
    dist: Vec<usize>,
    sigma: Vec<f64>,
    delta: Vec<f64>,
    order: Vec<usize>,
    queue: VecDeque<usize>,
}

impl BrandesWork {
    fn new(n: usize) -> Self {
        BrandesWork {
            dist: vec![usize::MAX; n],
            sigma: vec![0.0; n],
            delta: vec![0.0; n],
            order: Vec::with_capacity(n),
            queue: VecDeque::with_capacity(n),
        }
    }

    fn accumulate(&mut self, g: &Graph, s: usize, acc: &mut [f64]) {
        for &v in &self.order {
            self.dist[v] = usize::MAX;
            self.sigma[v] = 0.0;
            self.delta[v] = 0.0;
        }
        self.order.clear();

        self.dist[s] = 0;
        self.sigma[s] = 1.0;
        self.queue.push_back(s);
        while let Some(v) = self.queue.pop_front() {
            self.order.push(v);
            let dv = self.dist[v];
            for &w in g.neighbors(v) {
                if self.dist[w] == usize::MAX {
                    self.dist[w] = dv + 1;
                    self.queue.push_back(w);
                }
                if self.dist[w] == dv + 1 {
                    self.sigma[w] += self.sigma[v];
                }
            }
        }

        // predecessors are recovered from distances instead of stored lists
        for &w in self.order.iter().rev() {
            let dw = self.dist[w];
            let coeff = (1.0 + self.delta[w]) / self.sigma[w];
            for &v in g.neighbors(w) {
                if self.dist[v] != usize::MAX && self.dist[v] + 1 == dw {
                    self.delta[v] += self.sigma[v] * coeff;
                }
            }
            if w != s {
                acc[w] += self.delta[w];
            }
        }
    }
}

/// `n / sum_j d(i, j)` for every node of a connected graph.
pub fn closeness_centrality(g: &Graph) -> Result<NodeScores> {
    let n = g.node_count();
    if n == 0 {
        return Err(Error::Empty("graph has no nodes"));
    }
    if n < 2 {
        return Err(Error::TooFewNodes { need: 2, got: n });
    }
    let totals: Vec<Result<usize>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let dist = g.bfs_distances(i);
            let mut total = 0;
            for (j, d) in dist.iter().enumerate() {
                match d {
                    Some(d) => total += d,
                    None => return Err(Error::Disconnected { from: i, to: j }),
                }
            }
            Ok(total)
        })
        .collect();
    let mut cl = Vec::with_capacity(n);
    for total in totals {
        cl.push(n as f64 / total? as f64);
    }
    Ok(NodeScores(cl))
}

/// Number of triangles through each node.
pub fn triangle_counts(g: &Graph) -> Vec<usize> {
    let n = g.node_count();
    let mut t = vec![0usize; n];
    for u in 0..n {
        let nu = g.neighbors(u);
        for &v in nu.iter().filter(|&&v| v > u) {
            let nv = g.neighbors(v);
            // merge the sorted tails above v
            let (mut a, mut b) = (
                nu.partition_point(|&x| x <= v),
                nv.partition_point(|&x| x <= v),
            );
            while a < nu.len() && b < nv.len() {
                match nu[a].cmp(&nv[b]) {
                    std::cmp::Ordering::Less => a += 1,
                    std::cmp::Ordering::Greater => b += 1,
                    std::cmp::Ordering::Equal => {
                        t[u] += 1;
                        t[v] += 1;
                        t[nu[a]] += 1;
                        a += 1;
                        b += 1;
                    }
                }
            }
        }
    }
    t
}

pub fn clustering_coefficient(g: &Graph) -> NodeScores {
    let tri = triangle_counts(g);
    NodeScores(
        tri.iter()
            .enumerate()
            .map(|(i, &t)| {
                let d = g.degree(i);
                if d < 2 {
                    0.0
                } else {
                    2.0 * t as f64 / (d * (d - 1)) as f64
                }
            })
            .collect(),
    )
}

/// All-pairs hop distances and shortest-path counts.
#[derive(Debug, Clone)]
pub struct ShortestPathCounts {
    dist: Vec<Vec<Option<usize>>>,
    count: Vec<Vec<f64>>,
}

impl ShortestPathCounts {
    pub fn new(g: &Graph) -> Self {
        let n = g.node_count();
        let mut dist = Vec::with_capacity(n);
        let mut count = Vec::with_capacity(n);
        for s in 0..n {
            let d = g.bfs_distances(s);
            // counts follow BFS layers: sigma(w) = sum over v one layer closer
            let mut by_layer: Vec<usize> = (0..n).filter(|&v| d[v].is_some()).collect();
            by_layer.sort_by_key(|&v| d[v]);
            let mut c = vec![0.0; n];
            c[s] = 1.0;
            for &w in by_layer.iter().skip(1) {
                let dw = d[w].unwrap();
                c[w] = g
                    .neighbors(w)
                    .iter()
                    .filter(|&&v| d[v] == Some(dw - 1))
                    .map(|&v| c[v])
                    .sum();
            }
            dist.push(d);
            count.push(c);
        }
        ShortestPathCounts { dist, count }
    }

    pub fn distance(&self, h: usize, k: usize) -> Option<usize> {
        self.dist[h][k]
    }

    /// Number of shortest `h`–`k` paths, 0 if unreachable.
    pub fn paths(&self, h: usize, k: usize) -> f64 {
        self.count[h][k]
    }

    /// Number of shortest `h`–`k` paths with `i` as an interior node.
    pub fn paths_through(&self, h: usize, k: usize, i: usize) -> f64 {
        if i == h || i == k {
            return 0.0;
        }
        match (self.dist[h][k], self.dist[h][i], self.dist[i][k]) {
            (Some(hk), Some(hi), Some(ik)) if hi + ik == hk => self.count[h][i] * self.count[i][k],
            _ => 0.0,
        }
    }
}

/// Betweenness by explicit pair enumeration; no dependency accumulation.
pub fn oracle_betweenness(g: &Graph) -> Result<NodeScores> {
    let n = g.node_count();
    if n > ORACLE_MAX_NODES {
        return Err(Error::TooLarge(format!(
            "betweenness oracle accepts at most {ORACLE_MAX_NODES} nodes, got {n}"
        )));
    }
    let spc = ShortestPathCounts::new(g);
    let mut bc = vec![0.0; n];
    for h in 0..n {
        for k in h + 1..n {
            let total = spc.paths(h, k);
            if total == 0.0 {
                continue;
            }
            for (i, b) in bc.iter_mut().enumerate() {
                let through = spc.paths_through(h, k, i);
                if through > 0.0 {
                    *b += through / total;
                }
            }
        }
    }
    Ok(NodeScores(bc))
}
