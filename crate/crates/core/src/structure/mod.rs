//! The auxiliary graph of a triangle-free cover, saturation of its short
//! cycles, and the decomposition of the combined cover into components.

mod decompose;

pub use decompose::{
    combine_and_decompose, split_segment, ComponentView, Critical, MetaShape, Satellite, Segment,
    Skeleton,
};

use crate::cover::{build_saturation_instance, extract_cover, PathCycleCover};
use crate::error::Result;
use crate::factor::max_weight_fg_factor;
use crate::graph::{Edge, Graph};

/// Edges of `G` that join different components of a cover `F` and touch one
/// of its short cycles (4- and 5-cycles).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuxiliaryGraph {
    pub gprime: Graph,
    /// Short cycles of `F` in their cover traversal order, ordered by smallest vertex.
    pub short_cycles: Vec<Vec<usize>>,
    /// Index into `short_cycles` for each vertex on a short cycle.
    pub cycle_of: Vec<Option<usize>>,
}

impl AuxiliaryGraph {
    pub fn cycle_order(&self, i: usize) -> usize {
        self.short_cycles[i].len()
    }

    /// Weight a saturated cycle contributes: 1 for 4-cycles, `eta` for 5-cycles.
    pub fn cycle_weight(&self, i: usize, eta: u8) -> usize {
        if self.short_cycles[i].len() == 4 {
            1
        } else {
            eta as usize
        }
    }
}

/// Builds the auxiliary graph of `g` with respect to the cover `f`.
pub fn build_auxiliary_graph(g: &Graph, f: &PathCycleCover) -> AuxiliaryGraph {
    let mut short_cycles = Vec::new();
    let mut cycle_of = vec![None; g.n()];
    for c in f.components() {
        if c.is_short_cycle() {
            for &v in &c.vertices {
                cycle_of[v] = Some(short_cycles.len());
            }
            short_cycles.push(c.vertices.clone());
        }
    }
    let gprime = Graph::from_edges(
        g.n(),
        g.edges()
            .iter()
            .filter(|e| {
                f.component_of(e.0) != f.component_of(e.1)
                    && (cycle_of[e.0].is_some() || cycle_of[e.1].is_some())
            })
            .map(|e| (e.0, e.1)),
    )
    .expect("subgraph of a valid graph");
    AuxiliaryGraph {
        gprime,
        short_cycles,
        cycle_of,
    }
}

/// Number of saturated 4-cycles plus `eta` times the number of saturated
/// 5-cycles, where a cycle is saturated when some edge touches it.
pub fn saturation_weight(edges: &[Edge], aux: &AuxiliaryGraph, eta: u8) -> usize {
    let mut hit = vec![false; aux.short_cycles.len()];
    for e in edges {
        for x in [e.0, e.1] {
            if let Some(i) = aux.cycle_of[x] {
                hit[i] = true;
            }
        }
    }
    hit.iter()
        .enumerate()
        .filter(|&(_, &h)| h)
        .map(|(i, _)| aux.cycle_weight(i, eta))
        .sum()
}

/// Per-cycle count of edge endpoints lying on the cycle.
fn touch_counts(edges: &[Edge], aux: &AuxiliaryGraph) -> Vec<usize> {
    let mut count = vec![0; aux.short_cycles.len()];
    for e in edges {
        for x in [e.0, e.1] {
            if let Some(i) = aux.cycle_of[x] {
                count[i] += 1;
            }
        }
    }
    count
}

/// True when the edge is the only one saturating some weighted cycle.
fn is_needed(e: Edge, count: &[usize], aux: &AuxiliaryGraph, eta: u8) -> bool {
    [e.0, e.1]
        .into_iter()
        .filter_map(|x| aux.cycle_of[x])
        .any(|i| count[i] == 1 && aux.cycle_weight(i, eta) > 0)
}

/// Removes edges (in ascending order) whose removal keeps the saturation
/// weight, until every remaining edge is needed.
pub fn stingy_reduce(w: &PathCycleCover, aux: &AuxiliaryGraph, eta: u8) -> PathCycleCover {
    let mut kept: Vec<Edge> = w.edges().to_vec();
    let mut count = touch_counts(&kept, aux);
    // Once needed, an edge stays needed as counts only decrease, so a single
    // pass reaches a fixpoint.
    kept.retain(|&e| {
        if is_needed(e, &count, aux, eta) {
            true
        } else {
            for x in [e.0, e.1] {
                if let Some(i) = aux.cycle_of[x] {
                    count[i] -= 1;
                }
            }
            false
        }
    });
    PathCycleCover::from_edges(w.n(), kept).expect("subset of a cover")
}

/// True when removing any single edge lowers the saturation weight.
pub fn is_stingy(edges: &[Edge], aux: &AuxiliaryGraph, eta: u8) -> bool {
    let count = touch_counts(edges, aux);
    edges.iter().all(|&e| is_needed(e, &count, aux, eta))
}

/// A path-cycle cover of the auxiliary graph with maximum saturation weight,
/// via a maximum-weight factor of the saturation gadget.
pub fn max_saturation_cover(aux: &AuxiliaryGraph, eta: u8) -> Result<PathCycleCover> {
    let inst = build_saturation_instance(&aux.gprime, &aux.short_cycles, eta)?;
    let factor = max_weight_fg_factor(&inst)?;
    let w = extract_cover(&factor.edges, &aux.gprime)?;
    debug_assert_eq!(saturation_weight(w.edges(), aux, eta) as i64, factor.weight);
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cover(n: usize, edges: &[(usize, usize)]) -> PathCycleCover {
        PathCycleCover::from_edges(n, edges.iter().map(|&(u, v)| Edge::new(u, v))).unwrap()
    }

    #[test]
    fn auxiliary_graph_examples() {
        // 6-cycle plus a 4-path: no short cycles, G' empty.
        let f = cover(
            10,
            &[
                (0, 1),
                (1, 2),
                (2, 3),
                (3, 4),
                (4, 5),
                (5, 0),
                (6, 7),
                (7, 8),
                (8, 9),
            ],
        );
        let g = Graph::from_edges(
            10,
            f.edges().iter().map(|e| (e.0, e.1)).chain([(0, 6), (2, 9)]),
        )
        .unwrap();
        let aux = build_auxiliary_graph(&g, &f);
        assert_eq!(aux.gprime.m(), 0);
        assert!(aux.short_cycles.is_empty());

        // 4-cycle plus an isolated vertex; chord inside the cycle is excluded.
        let f = cover(5, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (0, 4)]).unwrap();
        let aux = build_auxiliary_graph(&g, &f);
        assert_eq!(aux.gprime.edges(), &[Edge(0, 4)]);
        assert_eq!(aux.short_cycles, vec![vec![0, 1, 2, 3]]);
    }

    fn two_cycle_aux() -> AuxiliaryGraph {
        // 4-cycle 0..3, 5-cycle 4..8, free vertices 9, 10.
        let f = cover(
            11,
            &[
                (0, 1),
                (1, 2),
                (2, 3),
                (3, 0),
                (4, 5),
                (5, 6),
                (6, 7),
                (7, 8),
                (8, 4),
            ],
        );
        let mut edges: Vec<(usize, usize)> = f.edges().iter().map(|e| (e.0, e.1)).collect();
        edges.extend([(0, 9), (1, 10), (4, 9), (5, 10), (2, 6)]);
        let g = Graph::from_edges(11, edges).unwrap();
        build_auxiliary_graph(&g, &f)
    }

    #[test]
    fn saturation_examples() {
        let aux = two_cycle_aux();
        assert_eq!(saturation_weight(&[], &aux, 1), 0);
        assert_eq!(saturation_weight(&[Edge(0, 9)], &aux, 0), 1);
        assert_eq!(saturation_weight(&[Edge(4, 9), Edge(5, 10)], &aux, 1), 1);
        assert_eq!(saturation_weight(&[Edge(4, 9), Edge(5, 10)], &aux, 0), 0);
        assert_eq!(saturation_weight(&[Edge(2, 6)], &aux, 1), 2);
    }

    #[test]
    fn stingy_examples() {
        let aux = two_cycle_aux();
        let useless = cover(11, &[(4, 9)]);
        assert_eq!(stingy_reduce(&useless, &aux, 0).num_edges(), 0);

        let doubled = cover(11, &[(4, 9), (5, 10)]);
        let reduced = stingy_reduce(&doubled, &aux, 1);
        assert_eq!(reduced.num_edges(), 1);
        assert_eq!(saturation_weight(reduced.edges(), &aux, 1), 1);
        assert!(is_stingy(reduced.edges(), &aux, 1));
        assert_eq!(stingy_reduce(&reduced, &aux, 1), reduced);
    }

    #[test]
    fn saturation_cover_is_optimal_here() {
        let aux = two_cycle_aux();
        for eta in [0, 1] {
            let w = max_saturation_cover(&aux, eta).unwrap();
            assert_eq!(saturation_weight(w.edges(), &aux, eta), 1 + eta as usize);
        }
    }
}
