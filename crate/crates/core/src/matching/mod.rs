//! Exact maximum-weight matching on general graphs.

mod blossom;

pub(crate) use blossom::max_weight_mates;

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};

/// A graph with a non-negative integer weight on every edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedGraph {
    base: Graph,
    /// Parallel to `base.edges()`.
    weights: Vec<i64>,
}

impl WeightedGraph {
    /// Pairs `base` with weights listed in the order of `base.edges()`.
    pub fn new(base: Graph, weights: Vec<i64>) -> Result<Self> {
        if weights.len() != base.m() {
            return Err(Error::InvalidParameter(format!(
                "{} weights for {} edges",
                weights.len(),
                base.m()
            )));
        }
        if let Some(w) = weights.iter().find(|&&w| w < 0) {
            return Err(Error::InvalidParameter(format!("negative weight {w}")));
        }
        Ok(WeightedGraph { base, weights })
    }

    /// Builds from `(u, v, w)` triples; a repeated edge keeps its last weight.
    pub fn from_weighted_edges(n: usize, edges: &[(usize, usize, i64)]) -> Result<Self> {
        let base = Graph::from_edges(n, edges.iter().map(|&(u, v, _)| (u, v)))?;
        let mut weights = vec![0; base.m()];
        for &(u, v, w) in edges {
            weights[base.edge_index(u, v).expect("edge was inserted")] = w;
        }
        Self::new(base, weights)
    }

    /// The same graph with every edge weighted 1.
    pub fn unit(base: Graph) -> Self {
        let weights = vec![1; base.m()];
        WeightedGraph { base, weights }
    }

    pub fn base(&self) -> &Graph {
        &self.base
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    /// Weight of `{u, v}`, if it is an edge.
    pub fn weight(&self, u: usize, v: usize) -> Option<i64> {
        self.base.edge_index(u, v).map(|i| self.weights[i])
    }

    fn triples(&self) -> Vec<(usize, usize, i64)> {
        self.base
            .edges()
            .iter()
            .zip(&self.weights)
            .map(|(e, &w)| (e.0, e.1, w))
            .collect()
    }
}

/// A set of pairwise endpoint-disjoint edges together with its weight.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Matching {
    pub edges: Vec<Edge>,
    pub weight: i64,
}

impl Matching {
    fn from_edges(wg: &WeightedGraph, mut edges: Vec<Edge>) -> Self {
        edges.sort_unstable();
        let weight = edges.iter().map(|e| wg.weight(e.0, e.1).unwrap()).sum();
        Matching { edges, weight }
    }

    /// True when no two edges share an endpoint and all are edges of `g`.
    pub fn is_valid_in(&self, g: &Graph) -> bool {
        let mut used = vec![false; g.n()];
        for e in &self.edges {
            if !g.has_edge(e.0, e.1) || used[e.0] || used[e.1] {
                return false;
            }
            used[e.0] = true;
            used[e.1] = true;
        }
        true
    }
}

/// A maximum-weight matching (not necessarily of maximum cardinality).
pub fn max_weight_matching(wg: &WeightedGraph) -> Matching {
    let mates = max_weight_mates(wg.base.n(), &wg.triples());
    let edges = mates
        .iter()
        .enumerate()
        .filter_map(|(v, m)| m.filter(|&u| v < u).map(|u| Edge(v, u)))
        .collect();
    Matching::from_edges(wg, edges)
}

/// Largest vertex count accepted by [`brute_force_matching`].
pub const BRUTE_FORCE_MATCHING_LIMIT: usize = 16;

/// Exhaustive maximum-weight matching; test oracle for small graphs.
pub fn brute_force_matching(wg: &WeightedGraph) -> Result<Matching> {
    let n = wg.base.n();
    if n > BRUTE_FORCE_MATCHING_LIMIT {
        return Err(Error::LimitExceeded {
            what: "vertex count",
            actual: n,
            limit: BRUTE_FORCE_MATCHING_LIMIT,
        });
    }
    let mut matched = vec![false; n];
    let mut current = Vec::new();
    let mut best = (0, Vec::new());
    enumerate(wg, 0, 0, &mut matched, &mut current, &mut best);
    Ok(Matching::from_edges(wg, best.1))
}

/// Decides vertex `v` (unmatched, or matched to a higher undecided neighbour),
/// then recurses on `v + 1`.
fn enumerate(
    wg: &WeightedGraph,
    v: usize,
    weight: i64,
    matched: &mut [bool],
    current: &mut Vec<Edge>,
    best: &mut (i64, Vec<Edge>),
) {
    let n = matched.len();
    if v == n {
        if weight > best.0 {
            *best = (weight, current.clone());
        }
        return;
    }
    enumerate(wg, v + 1, weight, matched, current, best);
    if matched[v] {
        return;
    }
    for &u in wg.base.neighbors(v) {
        if u > v && !matched[u] {
            matched[v] = true;
            matched[u] = true;
            current.push(Edge(v, u));
            let w = wg.weight(v, u).unwrap();
            enumerate(wg, v + 1, weight + w, matched, current, best);
            current.pop();
            matched[v] = false;
            matched[u] = false;
        }
    }
}
