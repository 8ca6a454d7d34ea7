//! Path-cycle covers: spanning subgraphs of maximum degree two.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::factor::{max_weight_fg_factor, DegreeBounds, FactorInstance, GadgetTag};
use crate::graph::{Edge, Graph};
use crate::matching::WeightedGraph;

/// Shape of a connected component of a cover.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ComponentKind {
    Path,
    Cycle,
}

/// One component with its vertices in traversal order.
///
/// Paths start at the endpoint with the smaller id. Cycles start at their
/// smallest vertex and continue towards its smaller neighbour.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverComponent {
    pub kind: ComponentKind,
    pub vertices: Vec<usize>,
}

impl CoverComponent {
    pub fn order(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        match self.kind {
            ComponentKind::Path => self.vertices.len() - 1,
            ComponentKind::Cycle => self.vertices.len(),
        }
    }

    pub fn is_cycle_of_order(&self, order: usize) -> bool {
        self.kind == ComponentKind::Cycle && self.vertices.len() == order
    }

    /// A 4-cycle or a 5-cycle.
    pub fn is_short_cycle(&self) -> bool {
        self.is_cycle_of_order(4) || self.is_cycle_of_order(5)
    }
}

/// A spanning subgraph in which every vertex has degree at most two.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathCycleCover {
    n: usize,
    edges: Vec<Edge>,
    nbrs: Vec<Vec<usize>>,
    comp_of: Vec<usize>,
    components: Vec<CoverComponent>,
}

impl PathCycleCover {
    /// Builds a cover on `n` vertices; fails if some degree exceeds two.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let mut edges: Vec<Edge> = edges.into_iter().collect();
        edges.sort_unstable();
        edges.dedup();
        let mut nbrs = vec![Vec::with_capacity(2); n];
        for e in &edges {
            if e.0 == e.1 {
                return Err(Error::SelfLoop(e.0));
            }
            if e.1 >= n {
                return Err(Error::VertexOutOfRange { vertex: e.1, n });
            }
            nbrs[e.0].push(e.1);
            nbrs[e.1].push(e.0);
        }
        if let Some(v) = (0..n).find(|&v| nbrs[v].len() > 2) {
            return Err(Error::Invariant(format!(
                "vertex {v} has degree {} in a cover",
                nbrs[v].len()
            )));
        }
        for list in &mut nbrs {
            list.sort_unstable();
        }
        let mut cover = PathCycleCover {
            n,
            edges,
            nbrs,
            comp_of: vec![usize::MAX; n],
            components: Vec::new(),
        };
        cover.classify();
        Ok(cover)
    }

    /// The cover with no edges.
    pub fn empty(n: usize) -> Self {
        Self::from_edges(n, []).expect("edgeless cover is valid")
    }

    fn classify(&mut self) {
        for s in 0..self.n {
            if self.comp_of[s] != usize::MAX {
                continue;
            }
            // Find the component, then pick its canonical start.
            let mut members = vec![s];
            self.comp_of[s] = usize::MAX - 1;
            let mut i = 0;
            while i < members.len() {
                let v = members[i];
                i += 1;
                for &w in &self.nbrs[v] {
                    if self.comp_of[w] == usize::MAX {
                        self.comp_of[w] = usize::MAX - 1;
                        members.push(w);
                    }
                }
            }
            let is_cycle = members.len() >= 3 && members.iter().all(|&v| self.nbrs[v].len() == 2);
            let start = if is_cycle {
                *members.iter().min().unwrap()
            } else {
                *members
                    .iter()
                    .filter(|&&v| self.nbrs[v].len() <= 1)
                    .min()
                    .unwrap()
            };
            let mut order = vec![start];
            let mut prev = usize::MAX;
            let mut cur = start;
            // The neighbour lists are sorted, so the first unvisited choice at a
            // cycle start is the smaller neighbour.
            loop {
                let next = self.nbrs[cur]
                    .iter()
                    .copied()
                    .find(|&w| w != prev && w != start);
                match next {
                    Some(w) if order.len() < members.len() => {
                        order.push(w);
                        prev = cur;
                        cur = w;
                    }
                    _ => break,
                }
            }
            let id = self.components.len();
            for &v in &order {
                self.comp_of[v] = id;
            }
            self.components.push(CoverComponent {
                kind: if is_cycle {
                    ComponentKind::Cycle
                } else {
                    ComponentKind::Path
                },
                vertices: order,
            });
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.nbrs[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.nbrs[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.nbrs[u].contains(&v)
    }

    /// Components ordered by their smallest vertex.
    pub fn components(&self) -> &[CoverComponent] {
        &self.components
    }

    pub fn component_of(&self, v: usize) -> usize {
        self.comp_of[v]
    }

    pub fn component(&self, id: usize) -> &CoverComponent {
        &self.components[id]
    }

    pub fn is_triangle_free(&self) -> bool {
        self.components.iter().all(|c| !c.is_cycle_of_order(3))
    }

    /// True when every cover edge is an edge of `g`.
    pub fn is_subgraph_of(&self, g: &Graph) -> bool {
        self.n == g.n() && self.edges.iter().all(|e| g.has_edge(e.0, e.1))
    }
}

/// A maximum path-cycle cover (triangles allowed).
pub fn max_path_cycle_cover(g: &Graph) -> PathCycleCover {
    let inst = FactorInstance::new(
        WeightedGraph::unit(g.clone()),
        DegreeBounds::uniform(g.n(), 0, 2),
    )
    .expect("uniform bounds are valid");
    let factor = max_weight_fg_factor(&inst).expect("the empty subgraph is a [0,2]-factor");
    PathCycleCover::from_edges(g.n(), factor.edges).expect("factor has maximum degree two")
}

/// How a triangle-free cover is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CoverTier {
    /// Provably maximum; limited to small graphs.
    Exact,
    /// Triangle-free but not necessarily maximum.
    Heuristic,
}

/// Default vertex limit of the exact tier.
pub const DEFAULT_EXACT_THRESHOLD: usize = 14;

/// A triangle-free path-cycle cover of `g`.
///
/// The exact tier runs branch and bound over maximum covers of subgraphs:
/// whenever the relaxed optimum contains a triangle component, one of its
/// three edges must be absent from every triangle-free cover, giving a
/// three-way branch. It refuses graphs with more than `exact_threshold`
/// vertices.
pub fn max_triangle_free_cover(
    g: &Graph,
    tier: CoverTier,
    exact_threshold: usize,
) -> Result<PathCycleCover> {
    match tier {
        CoverTier::Heuristic => Ok(heuristic_triangle_free_cover(g)),
        CoverTier::Exact => {
            if g.n() > exact_threshold {
                return Err(Error::LimitExceeded {
                    what: "vertex count for the exact cover tier",
                    actual: g.n(),
                    limit: exact_threshold,
                });
            }
            Ok(exact_triangle_free_cover(g))
        }
    }
}

fn exact_triangle_free_cover(g: &Graph) -> PathCycleCover {
    let mut best = heuristic_triangle_free_cover(g);
    let mut stack: Vec<Vec<Edge>> = vec![Vec::new()];
    while let Some(forbidden) = stack.pop() {
        let sub = Graph::from_edges(
            g.n(),
            g.edges()
                .iter()
                .filter(|e| !forbidden.contains(e))
                .map(|e| (e.0, e.1)),
        )
        .expect("subgraph of a valid graph");
        let relaxed = max_path_cycle_cover(&sub);
        if relaxed.num_edges() <= best.num_edges() {
            continue;
        }
        match relaxed.components().iter().find(|c| c.is_cycle_of_order(3)) {
            None => best = relaxed,
            Some(tri) => {
                let v = &tri.vertices;
                for (a, b) in [(v[0], v[1]), (v[1], v[2]), (v[2], v[0])] {
                    let mut next = forbidden.clone();
                    next.push(Edge::new(a, b));
                    stack.push(next);
                }
            }
        }
    }
    best
}

/// Maximum cover, minus the smallest edge of each triangle, followed by one
/// greedy pass that re-adds edges of `g` where degrees allow and no triangle
/// forms.
fn heuristic_triangle_free_cover(g: &Graph) -> PathCycleCover {
    let cover = max_path_cycle_cover(g);
    let mut edges: Vec<Edge> = cover.edges().to_vec();
    let mut dropped = Vec::new();
    for c in cover.components() {
        if c.is_cycle_of_order(3) {
            let v = &c.vertices;
            let smallest = [
                Edge::new(v[0], v[1]),
                Edge::new(v[1], v[2]),
                Edge::new(v[2], v[0]),
            ]
            .into_iter()
            .min()
            .unwrap();
            dropped.push(smallest);
        }
    }
    if dropped.is_empty() {
        return cover;
    }
    edges.retain(|e| !dropped.contains(e));

    // Greedy augmentation using a union-find over current path components.
    let n = g.n();
    let mut deg = vec![0usize; n];
    let mut parent: Vec<usize> = (0..n).collect();
    let mut size = vec![1usize; n];
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for e in &edges {
        deg[e.0] += 1;
        deg[e.1] += 1;
        let (a, b) = (find(&mut parent, e.0), find(&mut parent, e.1));
        if a != b {
            parent[a] = b;
            size[b] += size[a];
        }
    }
    let present: std::collections::HashSet<Edge> = edges.iter().copied().collect();
    for &e in g.edges() {
        if present.contains(&e) || deg[e.0] >= 2 || deg[e.1] >= 2 {
            continue;
        }
        let (a, b) = (find(&mut parent, e.0), find(&mut parent, e.1));
        if a == b {
            // Closing a path into a cycle: allowed only for order >= 4.
            if size[a] < 4 {
                continue;
            }
        } else {
            parent[a] = b;
            size[b] += size[a];
        }
        deg[e.0] += 1;
        deg[e.1] += 1;
        edges.push(e);
    }
    PathCycleCover::from_edges(n, edges).expect("degrees kept at most two")
}

/// Builds the saturation gadget for the short cycles of a cover.
///
/// Vertices `0..n` are those of `gprime`; short cycle `i` adds hubs
/// `x_i = n + 3i`, `y_i = n + 3i + 1` and a bonus vertex `z_i = n + 3i + 2`.
/// Both hubs connect to every vertex of the cycle at weight 0, and to `z_i`
/// at weight 1 for a 4-cycle or `eta` for a 5-cycle. Cycle vertices must
/// have degree exactly 2, other original vertices at most 2; hubs at most
/// the cycle order and `z_i` at most 1. A maximum-weight factor then
/// saturates the largest possible weight of short cycles with its `gprime`
/// edges.
pub fn build_saturation_instance(
    gprime: &Graph,
    short_cycles: &[Vec<usize>],
    eta: u8,
) -> Result<FactorInstance> {
    let n = gprime.n();
    let s = short_cycles.len();
    let mut owner = vec![None; n];
    for (i, c) in short_cycles.iter().enumerate() {
        if c.len() != 4 && c.len() != 5 {
            return Err(Error::InvalidParameter(format!(
                "short cycle {i} has order {}",
                c.len()
            )));
        }
        for &v in c {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            if owner[v].is_some() {
                return Err(Error::OverlappingCycles(v));
            }
            owner[v] = Some(i);
        }
    }
    let total = n + 3 * s;
    let mut weighted: Vec<(usize, usize, i64)> =
        gprime.edges().iter().map(|e| (e.0, e.1, 0)).collect();
    let mut lower = vec![0; total];
    let mut upper = vec![2; total];
    let mut tags = vec![GadgetTag::Original; total];
    for (i, c) in short_cycles.iter().enumerate() {
        let (x, y, z) = (n + 3 * i, n + 3 * i + 1, n + 3 * i + 2);
        tags[x] = GadgetTag::HubX(i);
        tags[y] = GadgetTag::HubY(i);
        tags[z] = GadgetTag::Bonus(i);
        for &v in c {
            weighted.push((x, v, 0));
            weighted.push((y, v, 0));
            lower[v] = 2;
        }
        let w = if c.len() == 4 { 1 } else { i64::from(eta) };
        weighted.push((x, z, w));
        weighted.push((y, z, w));
        upper[x] = c.len();
        upper[y] = c.len();
        upper[z] = 1;
    }
    let wg = WeightedGraph::from_weighted_edges(total, &weighted)?;
    let mut inst = FactorInstance::new(wg, DegreeBounds { lower, upper })?;
    inst.tags = tags;
    Ok(inst)
}

/// Restricts a gadget solution to the edges of `gprime`.
pub fn extract_cover(solution: &[Edge], gprime: &Graph) -> Result<PathCycleCover> {
    PathCycleCover::from_edges(
        gprime.n(),
        solution
            .iter()
            .copied()
            .filter(|e| e.1 < gprime.n() && gprime.has_edge(e.0, e.1)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, edges: &[(usize, usize)]) -> Graph {
        Graph::from_edges(n, edges.iter().copied()).unwrap()
    }

    fn complete(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
    }

    #[test]
    fn component_traversal_order() {
        let c = PathCycleCover::from_edges(
            7,
            [Edge(2, 5), Edge(0, 5), Edge(1, 3), Edge(3, 6), Edge(1, 6)],
        )
        .unwrap();
        assert_eq!(c.components().len(), 3);
        assert_eq!(c.component(0).vertices, vec![0, 5, 2]);
        assert_eq!(c.component(0).kind, ComponentKind::Path);
        assert_eq!(c.component(1).vertices, vec![1, 3, 6]);
        assert_eq!(c.component(1).kind, ComponentKind::Cycle);
        assert_eq!(c.component(2).vertices, vec![4]);
        assert!(!c.is_triangle_free());
        assert!(PathCycleCover::from_edges(4, [Edge(0, 1), Edge(0, 2), Edge(0, 3)]).is_err());
    }

    #[test]
    fn max_cover_examples() {
        let c5 = graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        assert_eq!(max_path_cycle_cover(&c5).num_edges(), 5);
        let star = graph(4, &[(0, 1), (0, 2), (0, 3)]);
        assert_eq!(max_path_cycle_cover(&star).num_edges(), 2);
        assert_eq!(max_path_cycle_cover(&complete(4)).num_edges(), 4);
    }

    #[test]
    fn triangle_free_examples() {
        for tier in [CoverTier::Exact, CoverTier::Heuristic] {
            let c = max_triangle_free_cover(&complete(3), tier, 14).unwrap();
            assert_eq!(c.num_edges(), 2);
            assert!(c.is_triangle_free());
        }
        let c4 = graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert_eq!(
            max_triangle_free_cover(&c4, CoverTier::Exact, 14)
                .unwrap()
                .num_edges(),
            4
        );
        let k4 = max_triangle_free_cover(&complete(4), CoverTier::Exact, 14).unwrap();
        assert_eq!(k4.num_edges(), 4);
        assert!(k4.is_triangle_free());
        assert!(max_triangle_free_cover(&Graph::empty(15), CoverTier::Exact, 14).is_err());
    }

    #[test]
    fn two_triangles_joined() {
        // Two triangles joined by an edge: a Hamiltonian 6-path exists.
        let g = graph(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)]);
        let c = max_triangle_free_cover(&g, CoverTier::Exact, 14).unwrap();
        assert_eq!(c.num_edges(), 5);
        assert!(c.is_triangle_free());
    }

    #[test]
    fn gadget_shapes() {
        let g = Graph::empty(10);
        let one = build_saturation_instance(&g, &[vec![0, 1, 2, 3]], 0).unwrap();
        assert_eq!(one.wg.base().n(), 13);
        let f2: Vec<_> = one.wg.base().edges().iter().filter(|e| e.1 == 12).collect();
        assert_eq!(one.wg.base().m(), 10);
        assert_eq!(f2.len(), 2);
        assert!(f2.iter().all(|e| one.wg.weight(e.0, e.1) == Some(1)));

        let five = build_saturation_instance(&g, &[vec![0, 1, 2, 3, 4]], 0).unwrap();
        assert_eq!(five.wg.weight(11, 12), Some(0));
        assert_eq!(five.wg.weight(10, 12), Some(0));

        let two = build_saturation_instance(&g, &[vec![0, 1, 2, 3], vec![4, 5, 6, 7]], 1).unwrap();
        assert_eq!(two.wg.base().n(), 16);
        assert_eq!(two.wg.base().m(), 20);
        let bonus_edges = two.wg.weights().iter().filter(|&&w| w == 1).count();
        assert_eq!(bonus_edges, 4);

        assert_eq!(
            build_saturation_instance(&g, &[vec![0, 1, 2, 3], vec![3, 4, 5, 6]], 1),
            Err(Error::OverlappingCycles(3))
        );
    }

    #[test]
    fn extraction() {
        let g = Graph::empty(4);
        let inst = build_saturation_instance(&g, &[vec![0, 1, 2, 3]], 0).unwrap();
        let f = max_weight_fg_factor(&inst).unwrap();
        assert_eq!(f.weight, 0);
        assert_eq!(extract_cover(&f.edges, &g).unwrap().num_edges(), 0);

        // 4-cycle {0..3} with a pendant edge to 4 in G': saturation possible.
        let gp = graph(5, &[(0, 4)]);
        let inst = build_saturation_instance(&gp, &[vec![0, 1, 2, 3]], 0).unwrap();
        let f = max_weight_fg_factor(&inst).unwrap();
        assert_eq!(f.weight, 1);
        let w = extract_cover(&f.edges, &gp).unwrap();
        assert_eq!(w.edges(), &[Edge(0, 4)]);
    }
}
