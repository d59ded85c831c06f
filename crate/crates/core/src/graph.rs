//! Immutable undirected simple graph in compressed adjacency form.
//!
//! Node ids are dense `0..n`. Edge ids are dense `0..m` and follow the
//! order in which edges were passed to [`Graph::from_edges`]. Each adjacency
//! entry carries the id of the edge it belongs to, so walkers can update
//! per-edge state without a lookup.

use std::collections::{HashSet, VecDeque};
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    /// Endpoints of each edge, stored as `(min, max)`.
    edges: Vec<(usize, usize)>,
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
    incident: Vec<usize>,
}

impl Graph {
    /// Builds a simple graph on `n` nodes.
    ///
    /// Rejects self-loops, ids `>= n` and duplicate unordered pairs.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut seen = HashSet::with_capacity(edges.len());
        let mut norm = Vec::with_capacity(edges.len());
        let mut degree = vec![0usize; n];
        for &(u, v) in edges {
            for id in [u, v] {
                if id >= n {
                    return Err(Error::NodeOutOfRange { id, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            let key = (u.min(v), u.max(v));
            if !seen.insert(key) {
                return Err(Error::DuplicateEdge(key.0, key.1));
            }
            degree[u] += 1;
            degree[v] += 1;
            norm.push(key);
        }

        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut slots: Vec<(usize, usize)> = vec![(0, 0); 2 * norm.len()];
        let mut cursor = offsets[..n].to_vec();
        for (id, &(u, v)) in norm.iter().enumerate() {
            slots[cursor[u]] = (v, id);
            cursor[u] += 1;
            slots[cursor[v]] = (u, id);
            cursor[v] += 1;
        }
        for u in 0..n {
            slots[offsets[u]..offsets[u + 1]].sort_unstable();
        }
        let (neighbors, incident) = slots.into_iter().unzip();

        Ok(Graph {
            n,
            edges: norm,
            offsets,
            neighbors,
            incident,
        })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn degree(&self, u: usize) -> usize {
        self.offsets[u + 1] - self.offsets[u]
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|u| self.degree(u)).collect()
    }

    /// Neighbors of `u`, sorted ascending.
    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.neighbors[self.offsets[u]..self.offsets[u + 1]]
    }

    /// Edge ids of the edges incident to `u`, aligned with [`Graph::neighbors`].
    pub fn incident_edges(&self, u: usize) -> &[usize] {
        &self.incident[self.offsets[u]..self.offsets[u + 1]]
    }

    pub fn edge(&self, id: usize) -> (usize, usize) {
        self.edges[id]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_id(&self, u: usize, v: usize) -> Option<usize> {
        if u >= self.n || v >= self.n {
            return None;
        }
        let nbrs = self.neighbors(u);
        nbrs.binary_search(&v)
            .ok()
            .map(|pos| self.incident_edges(u)[pos])
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_id(u, v).is_some()
    }

    /// Hop distances from `source`; `None` marks unreachable nodes.
    pub fn bfs_distances(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        let mut queue = VecDeque::new();
        dist[source] = Some(0);
        queue.push_back(source);
        while let Some(v) = queue.pop_front() {
            let dv = dist[v].unwrap();
            for &w in self.neighbors(v) {
                if dist[w].is_none() {
                    dist[w] = Some(dv + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Component label per node. Labels are assigned in order of each
    /// component's smallest node id, starting at 0.
    pub fn components(&self) -> Vec<usize> {
        let mut label = vec![usize::MAX; self.n];
        let mut next = 0;
        let mut queue = VecDeque::new();
        for start in 0..self.n {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = next;
            queue.push_back(start);
            while let Some(v) = queue.pop_front() {
                for &w in self.neighbors(v) {
                    if label[w] == usize::MAX {
                        label[w] = next;
                        queue.push_back(w);
                    }
                }
            }
            next += 1;
        }
        label
    }

    pub fn is_connected(&self) -> bool {
        self.n > 0 && self.components().iter().all(|&c| c == 0)
    }

    /// Induced subgraph on the largest connected component.
    ///
    /// Ties go to the component with the smallest node id. Kept nodes are
    /// relabeled densely in ascending original order and kept edges retain
    /// their relative id order. The returned mapping is indexed by the
    /// original node id.
    pub fn largest_connected_component(&self) -> Result<(Graph, Vec<Option<usize>>)> {
        if self.n == 0 {
            return Err(Error::Empty("graph has no nodes"));
        }
        let label = self.components();
        let count = label.iter().max().unwrap() + 1;
        let mut sizes = vec![0usize; count];
        for &c in &label {
            sizes[c] += 1;
        }
        // labels follow smallest member id, so the first maximum wins ties
        let mut best = 0;
        for c in 1..count {
            if sizes[c] > sizes[best] {
                best = c;
            }
        }

        let mut mapping = vec![None; self.n];
        let mut next = 0;
        for u in 0..self.n {
            if label[u] == best {
                mapping[u] = Some(next);
                next += 1;
            }
        }
        let edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .filter(|&&(u, _)| label[u] == best)
            .map(|&(u, v)| (mapping[u].unwrap(), mapping[v].unwrap()))
            .collect();
        Ok((Graph::from_edges(next, &edges)?, mapping))
    }
}

/// One real score per node id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeScores(pub Vec<f64>);

/// One non-negative real score per edge id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeScores(pub Vec<f64>);

impl Deref for NodeScores {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl Deref for EdgeScores {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}
