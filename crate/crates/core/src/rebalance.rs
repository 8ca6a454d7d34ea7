//! Rewiring of `W` that removes 2-anchors from unbalanced components while
//! keeping `W` a stingy maximum-weight cover of the auxiliary graph.

use serde::Serialize;

use crate::cover::PathCycleCover;
use crate::error::{invariant, Result};
use crate::exact::Surd;
use crate::graph::{Edge, Graph};
use crate::structure::{
    combine_and_decompose, is_stingy, saturation_weight, AuxiliaryGraph, ComponentView, MetaShape,
    Satellite,
};

/// Which rewiring was applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Operation {
    /// Reattach a satellite of a 2-anchor to a bare center vertex.
    ToBareAnchor,
    /// Join a satellite of a 2-anchor directly to another satellite.
    JoinSatellites,
    /// Reattach a satellite of a 2-anchor to the satellite of a two-cycle component.
    ToPairedCycle,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AppliedOp {
    pub operation: Operation,
    pub removed: Vec<Edge>,
    pub added: Edge,
}

/// A 2-anchor of an unbalanced component with its two satellites; `first`
/// is the 5-cycle whenever exactly one of them is.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DoubleAnchor {
    pub component: usize,
    pub anchor: usize,
    pub first: Satellite,
    pub second: Satellite,
}

/// Anchor statistics steering the choice between the direct construction
/// and recursion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counters {
    /// 2-anchors of unbalanced components with two 4-cycle satellites.
    pub b1: usize,
    /// 2-anchors of unbalanced components with at least one 5-cycle satellite.
    pub b2: usize,
    /// 1-anchors anywhere.
    pub g1: usize,
    /// 2-anchors of balanced components (one per balanced component).
    pub g2: usize,
    /// Counted 2-anchors together with their satellites' vertices, sorted.
    pub v_b: Vec<usize>,
    pub double_anchors: Vec<DoubleAnchor>,
}

impl Counters {
    /// True when the direct construction is taken: `2 b1 + b2 = 0` or
    /// `(g1 + g2) / (2 b1 + b2) >= (2 - 2r) / r`, compared without division.
    pub fn prefers_direct(&self) -> bool {
        let weighted = 2 * self.b1 + self.b2;
        if weighted == 0 {
            return true;
        }
        let r = Surd::r();
        (self.g1 + self.g2) * r >= weighted * (Surd::int(2) - Surd::int(2) * r)
    }
}

/// Where a vertex sits in the decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Role {
    Center {
        comp: usize,
        pos: usize,
    },
    Satellite {
        comp: usize,
        pos: usize,
        slot: usize,
    },
}

/// `W` together with its decomposition and the log of applied operations.
#[derive(Debug, Clone)]
pub struct RebalanceState {
    pub g: Graph,
    pub f: PathCycleCover,
    pub w: PathCycleCover,
    pub aux: AuxiliaryGraph,
    pub eta: u8,
    pub views: Vec<ComponentView>,
    pub log: Vec<AppliedOp>,
    roles: Vec<Role>,
    weight: usize,
}

fn is_short_center(view: &ComponentView) -> bool {
    let s = &view.skeleton;
    s.cyclic && (s.len() == 4 || s.len() == 5)
}

/// `(2-anchors overall, 2-anchors in unbalanced components)`; every
/// operation decreases it lexicographically.
fn potential(views: &[ComponentView]) -> (usize, usize) {
    let total = views.iter().map(|v| v.skeleton.count_of_degree(2)).sum();
    let unbalanced = views
        .iter()
        .filter(|v| !v.balanced)
        .map(|v| v.skeleton.count_of_degree(2))
        .sum();
    (total, unbalanced)
}

impl RebalanceState {
    pub fn new(
        g: &Graph,
        f: PathCycleCover,
        w: PathCycleCover,
        aux: AuxiliaryGraph,
        eta: u8,
    ) -> Result<Self> {
        let views = combine_and_decompose(&f, &w, eta)?;
        let weight = saturation_weight(w.edges(), &aux, eta);
        let mut state = RebalanceState {
            g: g.clone(),
            f,
            w,
            aux,
            eta,
            views,
            log: Vec::new(),
            roles: Vec::new(),
            weight,
        };
        state.roles = state.compute_roles();
        Ok(state)
    }

    fn compute_roles(&self) -> Vec<Role> {
        let mut roles = vec![Role::Center { comp: 0, pos: 0 }; self.g.n()];
        for (comp, view) in self.views.iter().enumerate() {
            let s = &view.skeleton;
            for (pos, &v) in s.center.iter().enumerate() {
                roles[v] = Role::Center { comp, pos };
                for (slot, sat) in s.attached[pos].iter().enumerate() {
                    for &x in &sat.cycle {
                        roles[x] = Role::Satellite { comp, pos, slot };
                    }
                }
            }
        }
        roles
    }

    fn satellite(&self, comp: usize, pos: usize, slot: usize) -> &Satellite {
        &self.views[comp].skeleton.attached[pos][slot]
    }

    /// 2-anchors of unbalanced components as `(component, position)`, by
    /// ascending vertex id.
    fn unbalanced_double_anchors(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize, usize)> = Vec::new();
        for (comp, view) in self.views.iter().enumerate() {
            if view.balanced {
                continue;
            }
            for pos in 0..view.skeleton.len() {
                if view.skeleton.degree(pos) == 2 {
                    out.push((view.skeleton.center[pos], comp, pos));
                }
            }
        }
        out.sort_unstable();
        out.into_iter().map(|(_, c, p)| (c, p)).collect()
    }

    /// Edges `{w, v}` of `G` outside `F + W` with `w` on a satellite of the
    /// given 2-anchor and `v` off that satellite, in lexicographic order,
    /// each with the slot of the satellite containing `w`.
    fn candidates(&self, comp: usize, pos: usize) -> Vec<(Edge, usize, usize, usize)> {
        let mut out = Vec::new();
        for (slot, sat) in self.views[comp].skeleton.attached[pos].iter().enumerate() {
            for &w in &sat.cycle {
                for &v in self.g.neighbors(w) {
                    if sat.cycle.contains(&v) || self.w.has_edge(w, v) || self.f.has_edge(w, v) {
                        continue;
                    }
                    out.push((Edge::new(w, v), slot, w, v));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Finds the first applicable instance of `op` in scan order.
    fn find(&self, op: Operation) -> Option<AppliedOp> {
        for (comp, pos) in self.unbalanced_double_anchors() {
            for (edge, slot, _w, v) in self.candidates(comp, pos) {
                let own = self.satellite(comp, pos, slot);
                let removed_own = own.attaching_edge();
                match (op, self.roles[v]) {
                    (Operation::ToBareAnchor, Role::Center { comp: c2, pos: p2 }) => {
                        if self.views[c2].skeleton.degree(p2) == 0 {
                            return Some(AppliedOp {
                                operation: op,
                                removed: vec![removed_own],
                                added: edge,
                            });
                        }
                    }
                    (
                        Operation::JoinSatellites | Operation::ToPairedCycle,
                        Role::Satellite {
                            comp: c2,
                            pos: p2,
                            slot: s2,
                        },
                    ) => {
                        if (c2, p2, s2) == (comp, pos, slot) {
                            continue;
                        }
                        let target = &self.views[c2];
                        let paired = target.shape == MetaShape::Edge && is_short_center(target);
                        if op == Operation::JoinSatellites && !paired {
                            let other = self.satellite(c2, p2, s2).attaching_edge();
                            return Some(AppliedOp {
                                operation: op,
                                removed: vec![removed_own, other],
                                added: edge,
                            });
                        }
                        if op == Operation::ToPairedCycle && paired {
                            return Some(AppliedOp {
                                operation: op,
                                removed: vec![removed_own],
                                added: edge,
                            });
                        }
                    }
                    _ => {}
                }
            }
        }
        None
    }

    fn apply(&mut self, op: AppliedOp) -> Result<()> {
        let before = potential(&self.views);
        let edges = self
            .w
            .edges()
            .iter()
            .copied()
            .filter(|e| !op.removed.contains(e))
            .chain([op.added]);
        let w = PathCycleCover::from_edges(self.g.n(), edges)
            .map_err(|e| invariant(format!("{:?} broke the cover: {e}", op.operation)))?;
        let weight = saturation_weight(w.edges(), &self.aux, self.eta);
        if weight != self.weight {
            return Err(invariant(format!(
                "{:?} changed the saturation weight from {} to {weight}",
                op.operation, self.weight
            )));
        }
        if !is_stingy(w.edges(), &self.aux, self.eta) {
            return Err(invariant(format!("{:?} left W not stingy", op.operation)));
        }
        let views = combine_and_decompose(&self.f, &w, self.eta)?;
        let after = potential(&views);
        if after >= before {
            return Err(invariant(format!(
                "{:?} did not decrease the 2-anchor potential: {before:?} -> {after:?}",
                op.operation
            )));
        }
        self.w = w;
        self.views = views;
        self.roles = self.compute_roles();
        self.log.push(op);
        Ok(())
    }

    pub fn try_operation1(&mut self) -> Result<Option<AppliedOp>> {
        self.try_op(Operation::ToBareAnchor)
    }

    pub fn try_operation2(&mut self) -> Result<Option<AppliedOp>> {
        self.try_op(Operation::JoinSatellites)
    }

    /// Only fires when neither of the other two operations applies anywhere.
    pub fn try_operation3(&mut self) -> Result<Option<AppliedOp>> {
        if self.find(Operation::ToBareAnchor).is_some()
            || self.find(Operation::JoinSatellites).is_some()
        {
            return Ok(None);
        }
        self.try_op(Operation::ToPairedCycle)
    }

    fn try_op(&mut self, op: Operation) -> Result<Option<AppliedOp>> {
        match self.find(op) {
            Some(applied) => {
                self.apply(applied.clone())?;
                Ok(Some(applied))
            }
            None => Ok(None),
        }
    }

    /// Applies operations until none is applicable; at most `n` may fire.
    pub fn rebalance_fixpoint(&mut self) -> Result<()> {
        loop {
            if self.try_operation1()?.is_none()
                && self.try_operation2()?.is_none()
                && self.try_operation3()?.is_none()
            {
                return Ok(());
            }
            if self.log.len() > self.g.n() {
                return Err(invariant(format!(
                    "{} operations on {} vertices",
                    self.log.len(),
                    self.g.n()
                )));
            }
        }
    }

    /// Edges violating the fixpoint property: `{w, v}` outside `F + W`
    /// with `w` on a satellite of an unbalanced 2-anchor and `v` neither on
    /// that satellite nor a 1- or 2-anchor. Empty at a fixpoint.
    pub fn fixpoint_violations(&self) -> Vec<Edge> {
        let mut out = Vec::new();
        for (comp, pos) in self.unbalanced_double_anchors() {
            for (edge, _, _, v) in self.candidates(comp, pos) {
                let anchored = match self.roles[v] {
                    Role::Center { comp: c, pos: p } => self.views[c].skeleton.degree(p) > 0,
                    Role::Satellite { .. } => false,
                };
                if !anchored {
                    out.push(edge);
                }
            }
        }
        out
    }

    pub fn compute_counters(&self) -> Counters {
        let mut c = Counters {
            b1: 0,
            b2: 0,
            g1: 0,
            g2: 0,
            v_b: Vec::new(),
            double_anchors: Vec::new(),
        };
        for (comp, view) in self.views.iter().enumerate() {
            let s = &view.skeleton;
            c.g1 += s.count_of_degree(1);
            if view.balanced {
                c.g2 += 1;
                continue;
            }
            for pos in 0..s.len() {
                let [a, b] = s.attached[pos].as_slice() else {
                    continue;
                };
                let (first, second) = if b.order() == 5 && a.order() != 5 {
                    (b, a)
                } else {
                    (a, b)
                };
                if first.order() == 4 {
                    c.b1 += 1;
                } else {
                    c.b2 += 1;
                }
                c.v_b.push(s.center[pos]);
                c.v_b.extend(&first.cycle);
                c.v_b.extend(&second.cycle);
                c.double_anchors.push(DoubleAnchor {
                    component: comp,
                    anchor: s.center[pos],
                    first: first.clone(),
                    second: second.clone(),
                });
            }
        }
        c.v_b.sort_unstable();
        c
    }
}
