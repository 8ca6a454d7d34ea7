//! Simple uncertified k-path partition heuristics used as benchmark baselines
//! and as the fallback for `k < 9`.

use crate::cover::{ComponentKind, PathCycleCover};
use crate::graph::Graph;
use crate::matching::{max_weight_matching, WeightedGraph};
use crate::partition::{cut_cycle, cut_path, PathPartition};

/// Cuts every component of a path-cycle cover into pieces of at most `k`
/// vertices (cycles lose one edge first).
pub fn cut_cover(cover: &PathCycleCover, k: usize) -> PathPartition {
    let mut pp = PathPartition::default();
    for c in cover.components() {
        pp.extend(match c.kind {
            ComponentKind::Path => cut_path(&c.vertices, k),
            ComponentKind::Cycle => cut_cycle(&c.vertices, k),
        });
    }
    pp
}

/// A maximum matching as a 2-path partition; optimal for `k = 2`.
pub fn matching_partition(g: &Graph) -> PathPartition {
    let m = max_weight_matching(&WeightedGraph::unit(g.clone()));
    let mut matched = vec![false; g.n()];
    let mut paths = Vec::new();
    for e in &m.edges {
        matched[e.0] = true;
        matched[e.1] = true;
        paths.push(vec![e.0, e.1]);
    }
    paths.extend((0..g.n()).filter(|&v| !matched[v]).map(|v| vec![v]));
    PathPartition::new(paths).canonical()
}

/// Starts from a maximum matching and repeatedly joins two paths through an
/// edge between their endpoints while the result has at most `k` vertices.
pub fn matching_then_join(g: &Graph, k: usize) -> PathPartition {
    let mut paths = matching_partition(g).paths;
    if k <= 2 {
        return PathPartition::new(paths);
    }
    let mut owner = vec![0usize; g.n()];
    loop {
        for (i, p) in paths.iter().enumerate() {
            for &v in p {
                owner[v] = i;
            }
        }
        let is_end = |p: &[usize], v: usize| p[0] == v || p[p.len() - 1] == v;
        let join = g.edges().iter().find(|e| {
            let (a, b) = (owner[e.0], owner[e.1]);
            a != b
                && paths[a].len() + paths[b].len() <= k
                && is_end(&paths[a], e.0)
                && is_end(&paths[b], e.1)
        });
        let Some(&e) = join else { break };
        let (a, b) = (owner[e.0], owner[e.1]);
        let mut left = std::mem::take(&mut paths[a]);
        let mut right = std::mem::take(&mut paths[b]);
        if left[left.len() - 1] != e.0 {
            left.reverse();
        }
        if right[0] != e.1 {
            right.reverse();
        }
        left.extend(right);
        paths[a] = left;
        paths.swap_remove(b);
    }
    PathPartition::new(paths).canonical()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::verify_partition;

    #[test]
    fn join_builds_long_paths() {
        let g = Graph::from_edges(6, (1..6).map(|i| (i - 1, i))).unwrap();
        let pp = matching_then_join(&g, 6);
        assert!(verify_partition(&pp, &g, 6).is_empty());
        assert_eq!(pp.num_paths(), 1);
        let pp = matching_then_join(&g, 4);
        assert!(verify_partition(&pp, &g, 4).is_empty());
        assert_eq!(pp.num_paths(), 2);
    }

    #[test]
    fn matching_partition_on_star() {
        let g = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let pp = matching_partition(&g);
        assert_eq!(pp.num_paths(), 3);
        assert_eq!(pp.num_edges(), 1);
    }
}
