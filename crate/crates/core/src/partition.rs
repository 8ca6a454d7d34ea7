//! Path partitions with bounded path order, and a feasibility checker.

use std::fmt;

use serde::Serialize;

use crate::graph::Graph;

/// A set of vertex-disjoint paths, each with at most `k` vertices.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct PathPartition {
    pub paths: Vec<Vec<usize>>,
}

impl PathPartition {
    pub fn new(paths: Vec<Vec<usize>>) -> Self {
        PathPartition { paths }
    }

    pub fn num_paths(&self) -> usize {
        self.paths.len()
    }

    pub fn num_edges(&self) -> usize {
        self.paths.iter().map(|p| p.len().saturating_sub(1)).sum()
    }

    pub fn num_vertices(&self) -> usize {
        self.paths.iter().map(Vec::len).sum()
    }

    pub fn extend(&mut self, other: PathPartition) {
        self.paths.extend(other.paths);
    }

    /// Orients every path to start at its smaller endpoint and sorts the paths.
    pub fn canonicalize(&mut self) {
        for p in &mut self.paths {
            if p.len() > 1 && p[0] > p[p.len() - 1] {
                p.reverse();
            }
        }
        self.paths.sort();
    }

    pub fn canonical(mut self) -> Self {
        self.canonicalize();
        self
    }

    /// Relabels vertices through `f`.
    pub fn map_vertices(self, f: impl Fn(usize) -> usize) -> Self {
        PathPartition {
            paths: self
                .paths
                .into_iter()
                .map(|p| p.into_iter().map(&f).collect())
                .collect(),
        }
    }
}

/// A reason a [`PathPartition`] is not a valid k-path partition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Violation {
    EmptyPath {
        path: usize,
    },
    OverLength {
        path: usize,
        order: usize,
        k: usize,
    },
    NonAdjacent {
        path: usize,
        u: usize,
        v: usize,
    },
    OutOfRange {
        vertex: usize,
    },
    Duplicate {
        vertex: usize,
    },
    Missing {
        vertex: usize,
    },
    /// `paths + edges` differs from the number of covered vertices.
    CountMismatch {
        paths: usize,
        edges: usize,
        vertices: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyPath { path } => write!(f, "path {path} is empty"),
            Violation::OverLength { path, order, k } => {
                write!(
                    f,
                    "over-length: path {path} has {order} vertices, limit {k}"
                )
            }
            Violation::NonAdjacent { path, u, v } => {
                write!(
                    f,
                    "non-adjacent: {u} and {v} are consecutive in path {path} but not adjacent"
                )
            }
            Violation::OutOfRange { vertex } => write!(f, "vertex {vertex} is out of range"),
            Violation::Duplicate { vertex } => {
                write!(f, "duplicate: vertex {vertex} appears more than once")
            }
            Violation::Missing { vertex } => write!(f, "coverage: vertex {vertex} is not covered"),
            Violation::CountMismatch {
                paths,
                edges,
                vertices,
            } => {
                write!(
                    f,
                    "count mismatch: {paths} paths + {edges} edges != {vertices} vertices"
                )
            }
        }
    }
}

/// Lists every way `pp` fails to be a k-path partition of `g`; empty means valid.
pub fn verify_partition(pp: &PathPartition, g: &Graph, k: usize) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut seen = vec![0usize; g.n()];
    for (i, p) in pp.paths.iter().enumerate() {
        if p.is_empty() {
            out.push(Violation::EmptyPath { path: i });
        }
        if p.len() > k {
            out.push(Violation::OverLength {
                path: i,
                order: p.len(),
                k,
            });
        }
        for &v in p {
            if v >= g.n() {
                out.push(Violation::OutOfRange { vertex: v });
            } else {
                seen[v] += 1;
            }
        }
        for w in p.windows(2) {
            if !g.has_edge(w[0], w[1]) {
                out.push(Violation::NonAdjacent {
                    path: i,
                    u: w[0],
                    v: w[1],
                });
            }
        }
    }
    let mut distinct = 0;
    for (v, &c) in seen.iter().enumerate() {
        match c {
            0 => out.push(Violation::Missing { vertex: v }),
            1 => distinct += 1,
            _ => {
                distinct += 1;
                out.push(Violation::Duplicate { vertex: v });
            }
        }
    }
    let (paths, edges) = (pp.num_paths(), pp.num_edges());
    if paths + edges != distinct {
        out.push(Violation::CountMismatch {
            paths,
            edges,
            vertices: distinct,
        });
    }
    out
}

/// Cuts a vertex sequence forming a path into consecutive pieces of at most
/// `k` vertices, keeping `l - ceil(l / k)` of its `l - 1` edges.
pub fn cut_path(seq: &[usize], k: usize) -> PathPartition {
    assert!(k >= 1, "k must be positive");
    PathPartition::new(seq.chunks(k).map(<[usize]>::to_vec).collect())
}

/// Cuts a cycle (given in cyclic order) by dropping the edge between its
/// last and first vertex, then cutting the resulting path.
pub fn cut_cycle(seq: &[usize], k: usize) -> PathPartition {
    cut_path(seq, k)
}

/// Edge count produced by [`cut_path`] on a path with `order` vertices.
pub fn cut_edge_count(order: usize, k: usize) -> usize {
    order - order.div_ceil(k)
}
