//! Simple undirected graphs on dense vertex ids, with the plain-text
//! edge-list format used by the CLI.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An undirected edge, stored with the smaller endpoint first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge(pub usize, pub usize);

impl Edge {
    /// Builds the normalized edge `{u, v}`.
    pub fn new(u: usize, v: usize) -> Self {
        if u <= v {
            Edge(u, v)
        } else {
            Edge(v, u)
        }
    }

    /// The endpoint opposite to `x`. `x` must be an endpoint.
    pub fn other(self, x: usize) -> usize {
        if self.0 == x {
            self.1
        } else {
            self.0
        }
    }

    pub fn touches(self, x: usize) -> bool {
        self.0 == x || self.1 == x
    }
}

/// A simple undirected graph on vertices `0..n`.
///
/// Edges are kept sorted and neighbour lists ascending, so every iteration
/// order derived from a `Graph` is deterministic.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    /// Builds a graph from an edge iterator. Duplicates collapse; self-loops
    /// and out-of-range endpoints are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut list = Vec::new();
        for (u, v) in edges {
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            list.push(Edge::new(u, v));
        }
        Ok(Self::from_normalized(n, list))
    }

    fn from_normalized(n: usize, mut edges: Vec<Edge>) -> Self {
        edges.sort_unstable();
        edges.dedup();
        let mut adj = vec![Vec::new(); n];
        for e in &edges {
            adj[e.0].push(e.1);
            adj[e.1].push(e.0);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Graph { n, edges, adj }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Edges in ascending lexicographic order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Ascending neighbour list of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    /// Position of `{u, v}` in [`Graph::edges`], if present.
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        self.edges.binary_search(&Edge::new(u, v)).ok()
    }

    /// The subgraph induced by `keep`, relabelled to `0..keep.len()` in
    /// ascending parent order.
    pub fn induced_subgraph(&self, keep: &[usize]) -> (Graph, VertexMapping) {
        let mut forward: Vec<usize> = keep.to_vec();
        forward.sort_unstable();
        forward.dedup();
        let mut inverse = vec![None; self.n];
        for (i, &v) in forward.iter().enumerate() {
            inverse[v] = Some(i);
        }
        let edges = self
            .edges
            .iter()
            .filter_map(|e| match (inverse[e.0], inverse[e.1]) {
                (Some(a), Some(b)) => Some(Edge::new(a, b)),
                _ => None,
            })
            .collect();
        let sub = Graph::from_normalized(forward.len(), edges);
        (sub, VertexMapping { forward, inverse })
    }

    /// Vertex sets of the connected components, each ascending, ordered by
    /// smallest vertex.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                let v = comp[i];
                i += 1;
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.connected_components().len() == 1
    }

    /// Serializes to the edge-list format accepted by [`parse_edge_list`].
    pub fn to_edge_list(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {}", self.n, self.m());
        for e in &self.edges {
            let _ = writeln!(s, "{} {}", e.0, e.1);
        }
        s
    }
}

/// Relates the vertices of an induced subgraph to those of its parent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexMapping {
    /// `forward[i]` is the parent vertex of sub-vertex `i`.
    pub forward: Vec<usize>,
    /// `inverse[v]` is the sub-vertex of parent vertex `v`, if kept.
    pub inverse: Vec<Option<usize>>,
}

impl VertexMapping {
    pub fn to_parent(&self, v: usize) -> usize {
        self.forward[v]
    }

    pub fn to_sub(&self, v: usize) -> Option<usize> {
        self.inverse.get(v).copied().flatten()
    }
}

/// Parses the edge-list format: the first non-comment line is `n m`, each
/// further line `u v`. Text after `#` is ignored and duplicate edges
/// collapse. The declared `m` is not checked against the number of lines.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut header: Option<usize> = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(Error::Format {
                line: line_no,
                msg: format!("expected two integers, found {:?}", line),
            });
        }
        let parse = |s: &str| {
            s.parse::<usize>().map_err(|_| Error::Format {
                line: line_no,
                msg: format!("not a non-negative integer: {s:?}"),
            })
        };
        let (a, b) = (parse(fields[0])?, parse(fields[1])?);
        match header {
            None => header = Some(a),
            Some(n) => {
                if a == b {
                    return Err(Error::Format {
                        line: line_no,
                        msg: format!("self-loop at vertex {a}"),
                    });
                }
                if a >= n || b >= n {
                    return Err(Error::Format {
                        line: line_no,
                        msg: format!("vertex {} out of range (n = {n})", a.max(b)),
                    });
                }
                edges.push((a, b));
            }
        }
    }
    let n = header.ok_or(Error::Format {
        line: 0,
        msg: "missing \"n m\" header".into(),
    })?;
    Graph::from_edges(n, edges)
}
