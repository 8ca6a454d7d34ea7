//! Decomposition of `F + W` into components with a center element and
//! short-cycle satellites hanging off it.

use serde::Serialize;

use crate::cover::{ComponentKind, PathCycleCover};
use crate::error::{invariant, Error, Result};
use crate::graph::Edge;

/// A short cycle of `F` attached to the center by exactly one `W` edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Satellite {
    /// Vertices in cyclic order.
    pub cycle: Vec<usize>,
    /// The cycle vertex incident to the attaching edge.
    pub nu: usize,
    /// The center vertex incident to the attaching edge.
    pub anchor: usize,
}

impl Satellite {
    pub fn order(&self) -> usize {
        self.cycle.len()
    }

    pub fn is_four_cycle(&self) -> bool {
        self.cycle.len() == 4
    }

    /// The attaching `W` edge.
    pub fn attaching_edge(&self) -> Edge {
        Edge::new(self.anchor, self.nu)
    }

    /// The cycle turned into a path ending at `nu`, by dropping the edge from
    /// `nu` to its cyclic successor.
    pub fn opened(&self) -> Vec<usize> {
        let len = self.cycle.len();
        let p = self
            .cycle
            .iter()
            .position(|&x| x == self.nu)
            .expect("nu lies on its cycle");
        (1..=len).map(|d| self.cycle[(p + d) % len]).collect()
    }

    fn min_vertex(&self) -> usize {
        *self.cycle.iter().min().unwrap()
    }
}

/// A center element (path or cycle `v_1 .. v_l`) together with the
/// satellites attached at each of its vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Skeleton {
    pub center: Vec<usize>,
    pub cyclic: bool,
    /// `attached[i]` are the satellites whose attaching edge meets `center[i]`,
    /// ordered by smallest vertex.
    pub attached: Vec<Vec<Satellite>>,
}

impl Skeleton {
    pub fn len(&self) -> usize {
        self.center.len()
    }

    pub fn is_empty(&self) -> bool {
        self.center.is_empty()
    }

    /// Number of satellites at position `i` (its anchor degree).
    pub fn degree(&self, i: usize) -> usize {
        self.attached[i].len()
    }

    /// The satellite at a position of anchor degree one.
    pub fn single(&self, i: usize) -> Option<&Satellite> {
        match self.attached[i].as_slice() {
            [s] => Some(s),
            _ => None,
        }
    }

    /// Position `i` is a 1-anchor whose satellite has the given order.
    pub fn single_of_order(&self, i: usize, order: usize) -> bool {
        self.single(i).is_some_and(|s| s.order() == order)
    }

    pub fn center_edges(&self) -> usize {
        match (self.cyclic, self.center.len()) {
            (_, 0) => 0,
            (true, l) => l,
            (false, l) => l - 1,
        }
    }

    /// Edges of `F` inside the skeleton.
    pub fn f_edges(&self) -> usize {
        self.center_edges() + self.satellites().map(Satellite::order).sum::<usize>()
    }

    pub fn satellites(&self) -> impl Iterator<Item = &Satellite> {
        self.attached.iter().flatten()
    }

    pub fn has_satellites(&self) -> bool {
        self.attached.iter().any(|a| !a.is_empty())
    }

    pub fn count_of_degree(&self, d: usize) -> usize {
        self.attached.iter().filter(|a| a.len() == d).count()
    }

    pub fn vertices(&self) -> Vec<usize> {
        let mut out = self.center.clone();
        for s in self.satellites() {
            out.extend(&s.cycle);
        }
        out
    }

    /// Re-indexes a cyclic center so that position `shift` becomes the first.
    pub fn rotated(&self, shift: usize) -> Skeleton {
        debug_assert!(self.cyclic);
        let mut center = self.center.clone();
        let mut attached = self.attached.clone();
        center.rotate_left(shift);
        attached.rotate_left(shift);
        Skeleton {
            center,
            cyclic: true,
            attached,
        }
    }

    /// The same path center traversed backwards.
    pub fn reversed(&self) -> Skeleton {
        debug_assert!(!self.cyclic);
        let mut center = self.center.clone();
        let mut attached = self.attached.clone();
        center.reverse();
        attached.reverse();
        Skeleton {
            center,
            cyclic: false,
            attached,
        }
    }

    /// The part spanned by center positions `first..=last` (0-based) with
    /// their satellites; the center of the result is always a path.
    pub fn segment(&self, first: usize, last: usize) -> Skeleton {
        Skeleton {
            center: self.center[first..=last].to_vec(),
            cyclic: false,
            attached: self.attached[first..=last].to_vec(),
        }
    }
}

/// Shape of the metagraph obtained by contracting each `F` component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MetaShape {
    SingleNode,
    Edge,
    Star,
}

/// Class of a critical component: a short cycle of `F` left unsaturated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Critical {
    FourCycle,
    FiveCycle,
}

/// One connected component of `F + W`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentView {
    pub id: usize,
    pub shape: MetaShape,
    pub skeleton: Skeleton,
    pub critical: Option<Critical>,
    /// Center is a short cycle with exactly one 2-anchor and no 1-anchors.
    pub balanced: bool,
}

impl ComponentView {
    pub fn vertices(&self) -> Vec<usize> {
        self.skeleton.vertices()
    }

    /// Recomputes the derived flags after the skeleton changed.
    pub fn refresh(&mut self) {
        let s = &self.skeleton;
        let short_center = s.cyclic && (s.len() == 4 || s.len() == 5);
        self.critical = match (short_center && !s.has_satellites(), s.len()) {
            (true, 4) => Some(Critical::FourCycle),
            (true, 5) => Some(Critical::FiveCycle),
            _ => None,
        };
        self.balanced = short_center && s.count_of_degree(2) == 1 && s.count_of_degree(1) == 0;
        let sats = s.satellites().count();
        self.shape = match sats {
            0 => MetaShape::SingleNode,
            1 => MetaShape::Edge,
            _ => MetaShape::Star,
        };
    }
}

/// A piece `K[first..=last]` of a component, always with a path center.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Segment {
    pub skeleton: Skeleton,
    pub parent: usize,
    pub first: usize,
    pub last: usize,
}

/// Extracts center positions `first..=last` (0-based, inclusive) of a component.
pub fn split_segment(cv: &ComponentView, first: usize, last: usize) -> Result<Segment> {
    if first > last || last >= cv.skeleton.len() {
        return Err(Error::InvalidParameter(format!(
            "segment {first}..={last} of a center with {} vertices",
            cv.skeleton.len()
        )));
    }
    Ok(Segment {
        skeleton: cv.skeleton.segment(first, last),
        parent: cv.id,
        first,
        last,
    })
}

/// Decomposes `F + W` into components, checking the star structure that a
/// stingy `W` guarantees: each metagraph is a single node, an edge or a
/// star whose satellites are short cycles (4-cycles when `eta = 0`).
pub fn combine_and_decompose(
    f: &PathCycleCover,
    w: &PathCycleCover,
    eta: u8,
) -> Result<Vec<ComponentView>> {
    let comps = f.components();
    let nc = comps.len();
    let mut parent: Vec<usize> = (0..nc).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut meta_edges: Vec<(usize, usize, Edge)> = Vec::new();
    for &e in w.edges() {
        let (a, b) = (f.component_of(e.0), f.component_of(e.1));
        if a == b {
            return Err(invariant(format!(
                "W edge {e:?} lies inside one F component"
            )));
        }
        meta_edges.push((a, b, e));
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
        }
    }

    // Group F components; groups are ordered by their smallest F component.
    let mut group_of_root = vec![usize::MAX; nc];
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for c in 0..nc {
        let r = find(&mut parent, c);
        if group_of_root[r] == usize::MAX {
            group_of_root[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[group_of_root[r]].push(c);
    }
    let mut edges_of_group: Vec<Vec<(usize, usize, Edge)>> = vec![Vec::new(); groups.len()];
    for &(a, b, e) in &meta_edges {
        let r = find(&mut parent, a);
        edges_of_group[group_of_root[r]].push((a, b, e));
    }

    let eligible = |c: usize| {
        let comp = &comps[c];
        comp.is_cycle_of_order(4) || (eta == 1 && comp.is_cycle_of_order(5))
    };

    let mut views = Vec::with_capacity(groups.len());
    for (id, (nodes, medges)) in groups.iter().zip(&edges_of_group).enumerate() {
        if medges.len() + 1 != nodes.len() {
            return Err(invariant(format!(
                "component {id}: metagraph with {} nodes and {} edges is not a tree",
                nodes.len(),
                medges.len()
            )));
        }
        let (shape, center) = match nodes.len() {
            1 => (MetaShape::SingleNode, nodes[0]),
            2 => {
                let (a, b) = (nodes[0], nodes[1]);
                // Nodes are ordered by smallest vertex, so `a` wins ties as satellite.
                let center = match (eligible(a), eligible(b)) {
                    (true, _) => b,
                    (false, true) => a,
                    (false, false) => {
                        return Err(invariant(format!(
                            "component {id}: edge metagraph without a short cycle"
                        )))
                    }
                };
                (MetaShape::Edge, center)
            }
            _ => {
                let hub = nodes
                    .iter()
                    .copied()
                    .find(|&c| medges.iter().all(|&(a, b, _)| a == c || b == c));
                match hub {
                    Some(c) => (MetaShape::Star, c),
                    None => {
                        return Err(invariant(format!(
                            "component {id}: metagraph is not a star"
                        )))
                    }
                }
            }
        };

        let center_comp = &comps[center];
        let mut pos = std::collections::HashMap::new();
        for (i, &v) in center_comp.vertices.iter().enumerate() {
            pos.insert(v, i);
        }
        let mut attached: Vec<Vec<Satellite>> = vec![Vec::new(); center_comp.order()];
        for &(a, b, e) in medges {
            let (sat, anchor, nu) = if a == center {
                let anchor = if f.component_of(e.0) == center {
                    e.0
                } else {
                    e.1
                };
                (b, anchor, e.other(anchor))
            } else if b == center {
                let anchor = if f.component_of(e.0) == center {
                    e.0
                } else {
                    e.1
                };
                (a, anchor, e.other(anchor))
            } else {
                return Err(invariant(format!(
                    "component {id}: W edge {e:?} misses the center"
                )));
            };
            if !eligible(sat) {
                return Err(invariant(format!(
                    "component {id}: satellite with {} vertices is not an admissible short cycle",
                    comps[sat].order()
                )));
            }
            attached[pos[&anchor]].push(Satellite {
                cycle: comps[sat].vertices.clone(),
                nu,
                anchor,
            });
        }
        for list in &mut attached {
            list.sort_by_key(Satellite::min_vertex);
        }
        let mut view = ComponentView {
            id,
            shape,
            skeleton: Skeleton {
                center: center_comp.vertices.clone(),
                cyclic: center_comp.kind == ComponentKind::Cycle,
                attached,
            },
            critical: None,
            balanced: false,
        };
        view.refresh();
        debug_assert_eq!(view.shape, shape);
        views.push(view);
    }
    Ok(views)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cover(n: usize, edges: &[(usize, usize)]) -> PathCycleCover {
        PathCycleCover::from_edges(n, edges.iter().map(|&(u, v)| Edge::new(u, v))).unwrap()
    }

    fn cycle_edges(vs: &[usize]) -> Vec<(usize, usize)> {
        (0..vs.len())
            .map(|i| (vs[i], vs[(i + 1) % vs.len()]))
            .collect()
    }

    /// 3-path 0-1-2 with three 4-cycles: two at vertex 0, one at vertex 1.
    fn three_satellites() -> (PathCycleCover, PathCycleCover) {
        let mut fe = vec![(0, 1), (1, 2)];
        for base in [3, 7, 11] {
            fe.extend(cycle_edges(&[base, base + 1, base + 2, base + 3]));
        }
        let f = cover(15, &fe);
        let w = cover(15, &[(0, 3), (0, 7), (1, 11)]);
        (f, w)
    }

    #[test]
    fn star_with_double_anchor() {
        let (f, w) = three_satellites();
        let views = combine_and_decompose(&f, &w, 0).unwrap();
        assert_eq!(views.len(), 1);
        let v = &views[0];
        assert_eq!(v.shape, MetaShape::Star);
        assert_eq!(v.skeleton.center, vec![0, 1, 2]);
        assert_eq!(
            (0..3).map(|i| v.skeleton.degree(i)).collect::<Vec<_>>(),
            vec![2, 1, 0]
        );
        assert_eq!(v.skeleton.f_edges(), 14);
        assert!(!v.balanced && v.critical.is_none());
    }

    #[test]
    fn unsaturated_short_cycle_is_critical() {
        let f = cover(4, &cycle_edges(&[0, 1, 2, 3]));
        let views = combine_and_decompose(&f, &PathCycleCover::empty(4), 0).unwrap();
        assert_eq!(views[0].critical, Some(Critical::FourCycle));
        assert_eq!(views[0].shape, MetaShape::SingleNode);
    }

    #[test]
    fn edge_metagraph_center_choice() {
        // 7-path 0..6 and a 4-cycle 7..10 joined by {3, 8}.
        let mut fe: Vec<(usize, usize)> = (0..6).map(|i| (i, i + 1)).collect();
        fe.extend(cycle_edges(&[7, 8, 9, 10]));
        let f = cover(11, &fe);
        let w = cover(11, &[(3, 8)]);
        let v = &combine_and_decompose(&f, &w, 1).unwrap()[0];
        assert_eq!(v.shape, MetaShape::Edge);
        assert_eq!(v.skeleton.center, (0..7).collect::<Vec<_>>());
        let sat = v.skeleton.single(3).unwrap();
        assert_eq!((sat.anchor, sat.nu), (3, 8));
        assert_eq!(sat.opened(), vec![9, 10, 7, 8]);

        // Two 4-cycles: the one with the smaller vertex becomes the satellite.
        let mut fe = cycle_edges(&[0, 1, 2, 3]);
        fe.extend(cycle_edges(&[4, 5, 6, 7]));
        let f = cover(8, &fe);
        let v = &combine_and_decompose(&f, &cover(8, &[(2, 5)]), 0).unwrap()[0];
        assert_eq!(v.skeleton.center, vec![4, 5, 6, 7]);
        assert!(v.skeleton.cyclic);
    }

    #[test]
    fn rejects_non_star() {
        // Path of three metagraph edges: 4-cycle - 4-cycle - 4-cycle - 4-cycle.
        let mut fe = Vec::new();
        for base in [0, 4, 8, 12] {
            fe.extend(cycle_edges(&[base, base + 1, base + 2, base + 3]));
        }
        let f = cover(16, &fe);
        let w = cover(16, &[(1, 5), (6, 9), (10, 13)]);
        assert!(matches!(
            combine_and_decompose(&f, &w, 0),
            Err(Error::Invariant(_))
        ));
    }

    #[test]
    fn rejects_five_cycle_satellite_without_eta() {
        let mut fe: Vec<(usize, usize)> = vec![(0, 1), (1, 2)];
        fe.extend(cycle_edges(&[3, 4, 5, 6, 7]));
        let f = cover(8, &fe);
        let w = cover(8, &[(1, 3)]);
        assert!(combine_and_decompose(&f, &w, 0).is_err());
        assert!(combine_and_decompose(&f, &w, 1).is_ok());
    }

    #[test]
    fn segments() {
        let (f, w) = three_satellites();
        let v = &combine_and_decompose(&f, &w, 0).unwrap()[0];
        let s = split_segment(v, 1, 1).unwrap();
        assert_eq!(s.skeleton.center, vec![1]);
        assert_eq!(s.skeleton.f_edges(), 4);
        let whole = split_segment(v, 0, 2).unwrap();
        assert_eq!(whole.skeleton, v.skeleton);
        assert!(split_segment(v, 2, 3).is_err());

        let f = cover(6, &cycle_edges(&[0, 1, 2, 3, 4, 5]));
        let v = &combine_and_decompose(&f, &PathCycleCover::empty(6), 0).unwrap()[0];
        let s = split_segment(v, 0, 5).unwrap();
        assert!(!s.skeleton.cyclic);
        assert_eq!(s.skeleton.center_edges(), 5);
    }

    #[test]
    fn balanced_detection() {
        // 4-cycle center 0..3 with two 4-cycles at vertex 0.
        let mut fe = cycle_edges(&[0, 1, 2, 3]);
        fe.extend(cycle_edges(&[4, 5, 6, 7]));
        fe.extend(cycle_edges(&[8, 9, 10, 11]));
        let f = cover(12, &fe);
        let v = &combine_and_decompose(&f, &cover(12, &[(0, 4), (0, 8)]), 1).unwrap()[0];
        assert!(v.balanced);
        assert_eq!(v.skeleton.center, vec![0, 1, 2, 3]);
    }
}
