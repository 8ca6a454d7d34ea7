//! Exponential-time ground truth for small instances: optimal k-path
//! partitions, optimal (triangle-free) covers, and optimal weighted covers
//! of the auxiliary graph.

use std::collections::HashMap;

use crate::cover::PathCycleCover;
use crate::error::{Error, Result};
use crate::factor::{Factor, FactorInstance};
use crate::graph::{Edge, Graph};
use crate::partition::PathPartition;
use crate::structure::{saturation_weight, AuxiliaryGraph};

/// Size limits checked before any exponential work starts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    /// Vertices for the subset dynamic program over partitions.
    pub partition_n: usize,
    /// Vertices for the naive partition enumerator.
    pub naive_partition_n: usize,
    /// Vertices for triangle-free cover enumeration.
    pub cover_n: usize,
    /// Edges of the auxiliary graph for weighted cover enumeration.
    pub weighted_cover_m: usize,
    /// Edges for [f,g]-factor enumeration.
    pub factor_m: usize,
}

pub const LIMITS: OracleLimits = OracleLimits {
    partition_n: 18,
    naive_partition_n: 10,
    cover_n: 14,
    weighted_cover_m: 24,
    factor_m: 24,
};

fn check(what: &'static str, actual: usize, limit: usize) -> Result<()> {
    if actual > limit {
        return Err(Error::LimitExceeded {
            what,
            actual,
            limit,
        });
    }
    Ok(())
}

/// For every vertex subset of at most `k` vertices, the bitmask of vertices
/// at which a Hamiltonian path of the induced subgraph can end.
fn path_ends(g: &Graph, k: usize) -> Vec<u32> {
    let n = g.n();
    let adj: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &u| m | 1 << u))
        .collect();
    let mut ends = vec![0u32; 1 << n];
    for v in 0..n {
        ends[1 << v] = 1 << v;
    }
    for s in 1u32..(1 << n) {
        let e = ends[s as usize];
        if e == 0 || s.count_ones() as usize >= k {
            continue;
        }
        let mut it = e;
        while it != 0 {
            let v = it.trailing_zeros() as usize;
            it &= it - 1;
            let mut ext = adj[v] & !s;
            while ext != 0 {
                let u = ext.trailing_zeros();
                ext &= ext - 1;
                ends[(s | 1 << u) as usize] |= 1 << u;
            }
        }
    }
    ends
}

/// Recovers a Hamiltonian path of `G[s]` ending at the smallest feasible end.
fn recover_path(g: &Graph, ends: &[u32], mut s: u32) -> Vec<usize> {
    let mut v = ends[s as usize].trailing_zeros() as usize;
    let mut rev = vec![v];
    while s.count_ones() > 1 {
        let rest = s & !(1 << v);
        let e = ends[rest as usize];
        let u = g
            .neighbors(v)
            .iter()
            .copied()
            .find(|&u| e & (1 << u) != 0)
            .expect("path table is consistent");
        rev.push(u);
        s = rest;
        v = u;
    }
    rev.reverse();
    rev
}

/// A k-path partition with the fewest paths, which by `paths + edges = n`
/// is also one with the most edges.
fn optimal_partition(g: &Graph, k: usize) -> Result<PathPartition> {
    if k == 0 {
        return Err(Error::InvalidK(k));
    }
    check(
        "vertices for the partition oracle",
        g.n(),
        LIMITS.partition_n,
    )?;
    let n = g.n();
    if n == 0 {
        return Ok(PathPartition::default());
    }
    let ends = path_ends(g, k);
    let full = (1u32 << n) - 1;
    let mut best = vec![u8::MAX; 1 << n];
    let mut choice = vec![0u32; 1 << n];
    best[0] = 0;
    for s in 1..=full {
        let low = s & s.wrapping_neg();
        let rest = s & !low;
        // Enumerate parts `low | sub` for every submask `sub` of `rest`.
        let mut sub = rest;
        loop {
            let part = low | sub;
            if ends[part as usize] != 0 {
                let cand = best[(s & !part) as usize].saturating_add(1);
                if cand < best[s as usize] {
                    best[s as usize] = cand;
                    choice[s as usize] = part;
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }
    let mut paths = Vec::new();
    let mut s = full;
    while s != 0 {
        let part = choice[s as usize];
        paths.push(recover_path(g, &ends, part));
        s &= !part;
    }
    Ok(PathPartition::new(paths).canonical())
}

/// A k-path partition with the minimum number of paths.
pub fn optimal_kpp(g: &Graph, k: usize) -> Result<PathPartition> {
    optimal_partition(g, k)
}

/// A k-path partition with the maximum number of edges.
pub fn optimal_kppe(g: &Graph, k: usize) -> Result<PathPartition> {
    let pp = optimal_partition(g, k)?;
    debug_assert_eq!(pp.num_paths() + pp.num_edges(), g.n());
    Ok(pp)
}

/// Minimum number of paths, by enumerating every set partition and testing
/// each block for a Hamiltonian path. Independent of the subset DP.
pub fn naive_min_paths(g: &Graph, k: usize) -> Result<usize> {
    if k == 0 {
        return Err(Error::InvalidK(k));
    }
    check(
        "vertices for the naive partition oracle",
        g.n(),
        LIMITS.naive_partition_n,
    )?;

    fn has_ham_path(g: &Graph, block: &[usize], memo: &mut HashMap<Vec<usize>, bool>) -> bool {
        if let Some(&b) = memo.get(block) {
            return b;
        }
        fn extend(
            g: &Graph,
            block: &[usize],
            used: &mut Vec<bool>,
            last: usize,
            len: usize,
        ) -> bool {
            if len == block.len() {
                return true;
            }
            for (i, &u) in block.iter().enumerate() {
                if !used[i] && g.has_edge(last, u) {
                    used[i] = true;
                    if extend(g, block, used, u, len + 1) {
                        return true;
                    }
                    used[i] = false;
                }
            }
            false
        }
        let found = (0..block.len()).any(|start| {
            let mut used = vec![false; block.len()];
            used[start] = true;
            extend(g, block, &mut used, block[start], 1)
        });
        memo.insert(block.to_vec(), found);
        found
    }

    fn assign(
        g: &Graph,
        k: usize,
        v: usize,
        blocks: &mut Vec<Vec<usize>>,
        best: &mut usize,
        memo: &mut HashMap<Vec<usize>, bool>,
    ) {
        if blocks.len() >= *best {
            return;
        }
        if v == g.n() {
            if blocks.iter().all(|b| has_ham_path(g, b, memo)) {
                *best = blocks.len();
            }
            return;
        }
        for i in 0..blocks.len() {
            if blocks[i].len() < k {
                blocks[i].push(v);
                assign(g, k, v + 1, blocks, best, memo);
                blocks[i].pop();
            }
        }
        blocks.push(vec![v]);
        assign(g, k, v + 1, blocks, best, memo);
        blocks.pop();
    }

    let mut best = g.n() + 1;
    let mut memo = HashMap::new();
    assign(g, k, 0, &mut Vec::new(), &mut best, &mut memo);
    Ok(best.min(g.n()))
}

/// Shared state of the edge-subset searches below.
struct Search<'a> {
    edges: &'a [Edge],
    deg: Vec<usize>,
    cap: Vec<usize>,
    chosen: Vec<Edge>,
}

impl Search<'_> {
    fn can_add(&self, e: Edge) -> bool {
        self.deg[e.0] < self.cap[e.0] && self.deg[e.1] < self.cap[e.1]
    }

    fn push(&mut self, e: Edge) {
        self.deg[e.0] += 1;
        self.deg[e.1] += 1;
        self.chosen.push(e);
    }

    fn pop(&mut self) {
        let e = self.chosen.pop().unwrap();
        self.deg[e.0] -= 1;
        self.deg[e.1] -= 1;
    }

    /// Would adding `e` close a triangle of chosen edges?
    fn closes_triangle(&self, e: Edge) -> bool {
        let nbrs = |x: usize| {
            self.chosen
                .iter()
                .filter(move |c| c.touches(x))
                .map(move |c| c.other(x))
        };
        nbrs(e.0).any(|a| nbrs(e.1).any(|b| a == b))
    }
}

/// A maximum-edge triangle-free path-cycle cover by pruned enumeration.
pub fn brute_triangle_free_cover(g: &Graph) -> Result<PathCycleCover> {
    check("vertices for the cover oracle", g.n(), LIMITS.cover_n)?;
    let edges = g.edges();
    let mut st = Search {
        edges,
        deg: vec![0; g.n()],
        cap: vec![2; g.n()],
        chosen: Vec::new(),
    };
    // remaining[i][v]: edges at index >= i incident to v.
    let mut remaining = vec![vec![0usize; g.n()]; edges.len() + 1];
    for i in (0..edges.len()).rev() {
        remaining[i] = remaining[i + 1].clone();
        remaining[i][edges[i].0] += 1;
        remaining[i][edges[i].1] += 1;
    }
    let mut best: Vec<Edge> = Vec::new();

    fn go(st: &mut Search, i: usize, remaining: &[Vec<usize>], best: &mut Vec<Edge>) {
        if st.chosen.len() > best.len() {
            *best = st.chosen.clone();
        }
        if i == st.edges.len() {
            return;
        }
        let room: usize = (0..st.deg.len())
            .map(|v| (st.cap[v] - st.deg[v]).min(remaining[i][v]))
            .sum();
        if st.chosen.len() + room / 2 <= best.len() {
            return;
        }
        let e = st.edges[i];
        if st.can_add(e) && !st.closes_triangle(e) {
            st.push(e);
            go(st, i + 1, remaining, best);
            st.pop();
        }
        go(st, i + 1, remaining, best);
    }

    go(&mut st, 0, &remaining, &mut best);
    PathCycleCover::from_edges(g.n(), best)
}

/// A path-cycle cover of the auxiliary graph with maximum saturation weight,
/// by pruned enumeration of edge subsets.
pub fn brute_max_weight_cover(aux: &AuxiliaryGraph, eta: u8) -> Result<PathCycleCover> {
    let gp = &aux.gprime;
    check(
        "auxiliary edges for the weighted cover oracle",
        gp.m(),
        LIMITS.weighted_cover_m,
    )?;
    let edges = gp.edges();
    let mut st = Search {
        edges,
        deg: vec![0; gp.n()],
        cap: vec![2; gp.n()],
        chosen: Vec::new(),
    };
    // Weight still reachable by edges from index i on, per cycle.
    let cycles_after: Vec<Vec<usize>> = (0..=edges.len())
        .map(|i| {
            let mut ids: Vec<usize> = edges[i..]
                .iter()
                .flat_map(|e| [e.0, e.1])
                .filter_map(|x| aux.cycle_of[x])
                .collect();
            ids.sort_unstable();
            ids.dedup();
            ids
        })
        .collect();
    let mut best = (0usize, Vec::new());

    fn go(
        st: &mut Search,
        i: usize,
        aux: &AuxiliaryGraph,
        eta: u8,
        cycles_after: &[Vec<usize>],
        best: &mut (usize, Vec<Edge>),
    ) {
        let current = saturation_weight(&st.chosen, aux, eta);
        if current > best.0 {
            *best = (current, st.chosen.clone());
        }
        if i == st.edges.len() {
            return;
        }
        let hit: Vec<bool> = {
            let mut h = vec![false; aux.short_cycles.len()];
            for e in &st.chosen {
                for x in [e.0, e.1] {
                    if let Some(c) = aux.cycle_of[x] {
                        h[c] = true;
                    }
                }
            }
            h
        };
        let reachable: usize = cycles_after[i]
            .iter()
            .filter(|&&c| !hit[c])
            .map(|&c| aux.cycle_weight(c, eta))
            .sum();
        if current + reachable <= best.0 {
            return;
        }
        let e = st.edges[i];
        if st.can_add(e) {
            st.push(e);
            go(st, i + 1, aux, eta, cycles_after, best);
            st.pop();
        }
        go(st, i + 1, aux, eta, cycles_after, best);
    }

    go(&mut st, 0, aux, eta, &cycles_after, &mut best);
    PathCycleCover::from_edges(gp.n(), best.1)
}

/// A maximum-weight [f,g]-factor by subset enumeration, or
/// [`Error::Infeasible`] when none exists.
pub fn brute_force_fg_factor(inst: &FactorInstance) -> Result<Factor> {
    let g = inst.wg.base();
    check("edges for the factor oracle", g.m(), LIMITS.factor_m)?;
    let (lower, upper) = (&inst.bounds.lower, &inst.bounds.upper);
    let edges = g.edges();
    let weights = inst.wg.weights();
    let mut st = Search {
        edges,
        deg: vec![0; g.n()],
        cap: upper.clone(),
        chosen: Vec::new(),
    };
    let mut remaining = vec![vec![0usize; g.n()]; edges.len() + 1];
    for i in (0..edges.len()).rev() {
        remaining[i] = remaining[i + 1].clone();
        remaining[i][edges[i].0] += 1;
        remaining[i][edges[i].1] += 1;
    }
    let mut best: Option<(i64, Vec<Edge>)> = None;

    #[allow(clippy::too_many_arguments)]
    fn go(
        st: &mut Search,
        i: usize,
        weight: i64,
        weights: &[i64],
        lower: &[usize],
        remaining: &[Vec<usize>],
        best: &mut Option<(i64, Vec<Edge>)>,
    ) {
        // Some vertex can no longer reach its lower bound.
        if (0..st.deg.len()).any(|v| st.deg[v] + remaining[i][v] < lower[v]) {
            return;
        }
        if i == st.edges.len() {
            if best.as_ref().is_none_or(|b| weight > b.0) {
                *best = Some((weight, st.chosen.clone()));
            }
            return;
        }
        let e = st.edges[i];
        if st.can_add(e) {
            st.push(e);
            go(
                st,
                i + 1,
                weight + weights[i],
                weights,
                lower,
                remaining,
                best,
            );
            st.pop();
        }
        go(st, i + 1, weight, weights, lower, remaining, best);
    }

    go(&mut st, 0, 0, weights, lower, &remaining, &mut best);
    match best {
        Some((weight, mut edges)) => {
            edges.sort_unstable();
            Ok(Factor { edges, weight })
        }
        None => Err(Error::Infeasible),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::{max_triangle_free_cover, CoverTier};
    use crate::generate::{random_graph, Family};
    use crate::partition::verify_partition;

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    fn complete(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
    }

    fn petersen() -> Graph {
        let mut e = Vec::new();
        for i in 0..5 {
            e.push((i, (i + 1) % 5));
            e.push((i, i + 5));
            e.push((5 + i, 5 + (i + 2) % 5));
        }
        Graph::from_edges(10, e).unwrap()
    }

    #[test]
    fn partition_examples() {
        assert_eq!(optimal_kpp(&path(9), 9).unwrap().num_paths(), 1);
        assert_eq!(optimal_kpp(&path(10), 9).unwrap().num_paths(), 2);
        assert_eq!(optimal_kppe(&Graph::empty(5), 9).unwrap().num_edges(), 0);
        let c4 = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(optimal_kppe(&c4, 9).unwrap().num_edges(), 3);
        let p = petersen();
        let pp = optimal_kpp(&p, 9).unwrap();
        assert!(verify_partition(&pp, &p, 9).is_empty());
        assert_eq!(pp.num_paths(), naive_min_paths(&p, 9).unwrap());
        assert!(matches!(
            optimal_kpp(&Graph::empty(19), 9),
            Err(Error::LimitExceeded { .. })
        ));
    }

    #[test]
    fn dp_matches_naive_enumeration() {
        for seed in 0..200u64 {
            let n = 3 + (seed % 6) as usize;
            let g = random_graph(n, Family::Gnp(0.4), seed).unwrap();
            for k in [2, 3, 5, 9] {
                let pp = optimal_kpp(&g, k).unwrap();
                assert!(verify_partition(&pp, &g, k).is_empty());
                assert_eq!(
                    pp.num_paths(),
                    naive_min_paths(&g, k).unwrap(),
                    "seed {seed} k {k}"
                );
            }
        }
    }

    #[test]
    fn triangle_free_cover_examples() {
        assert_eq!(
            brute_triangle_free_cover(&complete(3)).unwrap().num_edges(),
            2
        );
        assert_eq!(
            brute_triangle_free_cover(&complete(4)).unwrap().num_edges(),
            4
        );
        let c4 = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(brute_triangle_free_cover(&c4).unwrap().num_edges(), 4);
    }

    #[test]
    fn exact_tier_matches_brute_force() {
        for seed in 0..150u64 {
            let n = 4 + (seed % 8) as usize;
            let g = random_graph(n, Family::Gnp(0.35), seed).unwrap();
            let brute = brute_triangle_free_cover(&g).unwrap();
            let exact = max_triangle_free_cover(&g, CoverTier::Exact, 64).unwrap();
            assert!(exact.is_triangle_free() && exact.is_subgraph_of(&g));
            assert_eq!(exact.num_edges(), brute.num_edges(), "seed {seed}");
        }
    }
}
