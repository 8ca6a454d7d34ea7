//! Maximum-weight [f,g]-factors by reduction to weighted matching.
//!
//! Every edge `e = {u, v}` becomes two port nodes `p(e,u)`, `p(e,v)` joined by
//! an "unused" edge; every vertex `v` becomes `min(g(v), deg v)` socket nodes,
//! the first `f(v)` of which are mandatory. Port `p(e,v)` connects to every
//! socket of `v`. Taking `e` means matching both of its ports to sockets.
//!
//! A large bonus `B` is paid for every matched port and every matched
//! mandatory socket; the original weights ride underneath it, doubled. A
//! factor exists iff the optimum collects the full bonus
//! `B * (2m + sum f)`, and among matchings that do, the weight part is twice
//! the factor weight.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Edge;
use crate::matching::{max_weight_mates, WeightedGraph};

/// Per-vertex degree bounds `f(v) <= deg(v) <= g(v)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeBounds {
    pub lower: Vec<usize>,
    pub upper: Vec<usize>,
}

impl DegreeBounds {
    /// The same bounds at every vertex.
    pub fn uniform(n: usize, lower: usize, upper: usize) -> Self {
        DegreeBounds {
            lower: vec![lower; n],
            upper: vec![upper; n],
        }
    }

    fn validate(&self, n: usize) -> Result<()> {
        if self.lower.len() != n || self.upper.len() != n {
            return Err(Error::InvalidParameter(format!(
                "degree bounds cover {} / {} vertices, graph has {n}",
                self.lower.len(),
                self.upper.len()
            )));
        }
        match (0..n).find(|&v| self.lower[v] > self.upper[v]) {
            Some(v) => Err(Error::InvalidBounds(v)),
            None => Ok(()),
        }
    }
}

/// Role of a vertex in a saturation gadget instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GadgetTag {
    Original,
    /// First hub of short cycle `i`.
    HubX(usize),
    /// Second hub of short cycle `i`.
    HubY(usize),
    /// Bonus vertex of short cycle `i`.
    Bonus(usize),
}

/// A weighted graph with degree bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorInstance {
    pub wg: WeightedGraph,
    pub bounds: DegreeBounds,
    /// One tag per vertex; all `Original` unless built as a gadget.
    pub tags: Vec<GadgetTag>,
}

impl FactorInstance {
    pub fn new(wg: WeightedGraph, bounds: DegreeBounds) -> Result<Self> {
        bounds.validate(wg.base().n())?;
        let tags = vec![GadgetTag::Original; wg.base().n()];
        Ok(FactorInstance { wg, bounds, tags })
    }

    /// True when `edges` is a subgraph of the instance within the bounds.
    pub fn is_factor(&self, edges: &[Edge]) -> bool {
        let g = self.wg.base();
        let mut deg = vec![0; g.n()];
        for e in edges {
            if !g.has_edge(e.0, e.1) {
                return false;
            }
            deg[e.0] += 1;
            deg[e.1] += 1;
        }
        let mut sorted = edges.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        sorted.len() == edges.len()
            && (0..g.n()).all(|v| self.bounds.lower[v] <= deg[v] && deg[v] <= self.bounds.upper[v])
    }

    pub fn weight_of(&self, edges: &[Edge]) -> i64 {
        edges
            .iter()
            .map(|e| self.wg.weight(e.0, e.1).unwrap_or(0))
            .sum()
    }
}

/// An optimal factor: its sorted edge set and total weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factor {
    pub edges: Vec<Edge>,
    pub weight: i64,
}

/// Computes a maximum-weight [f,g]-factor, or [`Error::Infeasible`].
pub fn max_weight_fg_factor(inst: &FactorInstance) -> Result<Factor> {
    let g = inst.wg.base();
    let n = g.n();
    inst.bounds.validate(n)?;
    let (lower, upper) = (&inst.bounds.lower, &inst.bounds.upper);
    if (0..n).any(|v| lower[v] > g.degree(v)) {
        return Err(Error::Infeasible);
    }

    let m = g.m();
    let total: i64 = inst.wg.weights().iter().sum();
    let bonus = 2 * total + 1;

    // Socket layout: sockets of v occupy socket_start[v]..socket_start[v+1].
    let mut socket_start = Vec::with_capacity(n + 1);
    let mut next = 2 * m;
    for (v, &cap) in upper.iter().enumerate() {
        socket_start.push(next);
        next += cap.min(g.degree(v));
    }
    socket_start.push(next);
    let nodes = next;

    let mut edges = Vec::new();
    for (idx, (e, &w)) in g.edges().iter().zip(inst.wg.weights()).enumerate() {
        let (pu, pv) = (2 * idx, 2 * idx + 1);
        edges.push((pu, pv, 2 * bonus));
        for (port, v) in [(pu, e.0), (pv, e.1)] {
            for (slot, s) in (socket_start[v]..socket_start[v + 1]).enumerate() {
                let mandatory = if slot < lower[v] { bonus } else { 0 };
                edges.push((port, s, bonus + mandatory + w));
            }
        }
    }

    let mates = max_weight_mates(nodes, &edges);
    let mut gained = 0i64;
    for &(a, b, w) in &edges {
        if mates[a] == Some(b) {
            gained += w;
        }
    }
    let required = 2 * m as i64 + lower.iter().sum::<usize>() as i64;
    if gained / bonus < required {
        return Err(Error::Infeasible);
    }

    let chosen: Vec<Edge> = g
        .edges()
        .iter()
        .enumerate()
        .filter(|&(idx, _)| mates[2 * idx].is_some_and(|s| s >= 2 * m))
        .map(|(_, &e)| e)
        .collect();
    let weight = inst.weight_of(&chosen);
    debug_assert_eq!(2 * weight, gained - bonus * required);
    Ok(Factor {
        edges: chosen,
        weight,
    })
}
