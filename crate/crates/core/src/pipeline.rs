//! Top-level solvers: the cover stage, the 4/5-approximation for
//! `k` in {9, 10}, the recursive r-approximation for `k >= 11`, and dispatch.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::baseline::{cut_cover, matching_partition};
use crate::construct::{
    build_11, build_910, cluster_path, open_short_cycle, Construction, EdgeGuarantee,
};
use crate::cover::{max_triangle_free_cover, CoverTier, PathCycleCover, DEFAULT_EXACT_THRESHOLD};
use crate::error::{invariant, Error, Result};
use crate::exact::{certified_alpha, kpp_ratio_bound, Surd};
use crate::graph::{Edge, Graph};
use crate::partition::PathPartition;
use crate::rebalance::{AppliedOp, Counters, RebalanceState};
use crate::structure::{
    build_auxiliary_graph, combine_and_decompose, max_saturation_cover, stingy_reduce,
    AuxiliaryGraph, ComponentView, Critical,
};

/// Environment variable overriding [`DEFAULT_EXACT_THRESHOLD`].
pub const EXACT_THRESHOLD_ENV: &str = "KPP_EXACT_THRESHOLD";

/// Which triangle-free cover tier to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TierChoice {
    Exact,
    Heuristic,
    /// Exact on connected components up to the threshold, heuristic above.
    Auto,
}

impl FromStr for TierChoice {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(TierChoice::Exact),
            "heuristic" => Ok(TierChoice::Heuristic),
            "auto" => Ok(TierChoice::Auto),
            _ => Err(Error::InvalidParameter(format!("unknown tier {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SolveConfig {
    pub tier: TierChoice,
    /// Largest component (in vertices) the exact tier accepts.
    pub exact_threshold: usize,
}

impl Default for SolveConfig {
    /// Auto tier; the threshold comes from `KPP_EXACT_THRESHOLD` if set.
    fn default() -> Self {
        let exact_threshold = std::env::var(EXACT_THRESHOLD_ENV)
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .unwrap_or(DEFAULT_EXACT_THRESHOLD);
        SolveConfig {
            tier: TierChoice::Auto,
            exact_threshold,
        }
    }
}

impl SolveConfig {
    pub fn with_tier(tier: TierChoice) -> Self {
        SolveConfig {
            tier,
            ..SolveConfig::default()
        }
    }

    fn tier_for(&self, n: usize) -> CoverTier {
        match self.tier {
            TierChoice::Exact => CoverTier::Exact,
            TierChoice::Heuristic => CoverTier::Heuristic,
            TierChoice::Auto if n <= self.exact_threshold => CoverTier::Exact,
            TierChoice::Auto => CoverTier::Heuristic,
        }
    }
}

/// Whether the triangle-free cover behind a solution was provably maximum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CoverMode {
    ExactCover,
    HeuristicCover,
}

impl fmt::Display for CoverMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CoverMode::ExactCover => "exact_cover",
            CoverMode::HeuristicCover => "heuristic_cover",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolveReport {
    pub k: usize,
    pub n: usize,
    pub partition: PathPartition,
    pub paths: usize,
    pub edges: usize,
    pub mode: CoverMode,
    /// Proven kPPE ratio; present only when every cover was exact.
    pub certified_alpha: Option<Surd>,
    /// The matching kPP ratio `(1 - alpha) k + alpha`.
    pub ratio_bound: Option<Surd>,
    pub recursion_depth: usize,
    pub counters_trace: Vec<Counters>,
    pub guarantees: Vec<EdgeGuarantee>,
    pub operations: Vec<AppliedOp>,
}

impl SolveReport {
    pub fn all_guarantees_hold(&self) -> bool {
        self.guarantees.iter().all(EdgeGuarantee::holds)
    }
}

/// Output of the cover stage on one graph.
#[derive(Debug, Clone)]
pub struct CoverStage {
    pub f: PathCycleCover,
    pub w: PathCycleCover,
    pub aux: AuxiliaryGraph,
    pub eta: u8,
    pub tier: CoverTier,
}

/// Triangle-free cover `F`, auxiliary graph, and a stingy maximum-weight
/// saturating cover `W` (5-cycles count only when `k >= 11`).
pub fn approx1(g: &Graph, k: usize, cfg: &SolveConfig) -> Result<CoverStage> {
    let eta = u8::from(k >= 11);
    let tier = cfg.tier_for(g.n());
    let f = max_triangle_free_cover(g, tier, cfg.exact_threshold)?;
    let aux = build_auxiliary_graph(g, &f);
    let w = stingy_reduce(&max_saturation_cover(&aux, eta)?, &aux, eta);
    Ok(CoverStage {
        f,
        w,
        aux,
        eta,
        tier,
    })
}

/// Per-graph result before it is mapped back into the parent graph.
#[derive(Default)]
struct Partial {
    paths: Vec<Vec<usize>>,
    heuristic: bool,
    depth: usize,
    counters: Vec<Counters>,
    guarantees: Vec<EdgeGuarantee>,
    operations: Vec<AppliedOp>,
}

impl Partial {
    fn absorb(&mut self, other: Partial, map: impl Fn(usize) -> usize) {
        self.paths.extend(
            other
                .paths
                .into_iter()
                .map(|p| p.into_iter().map(&map).collect()),
        );
        self.heuristic |= other.heuristic;
        self.depth = self.depth.max(other.depth);
        self.counters.extend(other.counters);
        self.guarantees.extend(other.guarantees);
        self.operations
            .extend(other.operations.into_iter().map(|op| {
                AppliedOp {
                    removed: op
                        .removed
                        .iter()
                        .map(|e| Edge::new(map(e.0), map(e.1)))
                        .collect(),
                    added: Edge::new(map(op.added.0), map(op.added.1)),
                    operation: op.operation,
                }
            }));
    }
}

fn critical_counts(views: &[ComponentView]) -> (usize, usize) {
    let count = |c| views.iter().filter(|v| v.critical == Some(c)).count();
    (count(Critical::FourCycle), count(Critical::FiveCycle))
}

fn is_bare_short_cycle(v: &ComponentView) -> bool {
    let s = &v.skeleton;
    s.cyclic && (s.len() == 4 || s.len() == 5) && !s.has_satellites()
}

/// The 4/5-approximation on one connected graph.
fn component_910(g: &Graph, k: usize, cfg: &SolveConfig) -> Result<Partial> {
    let stage = approx1(g, k, cfg)?;
    let views = combine_and_decompose(&stage.f, &stage.w, stage.eta)?;
    let mut out = Partial {
        heuristic: stage.tier == CoverTier::Heuristic,
        ..Partial::default()
    };
    for view in &views {
        let built = if view.critical == Some(Critical::FourCycle) {
            open_short_cycle(&view.skeleton.center)
        } else {
            build_910(view, k)?
        };
        out.paths.extend(built.partition.paths);
        out.guarantees.extend(built.trace);
    }
    let (i4, _) = critical_counts(&views);
    let promised =
        Surd::ratio(4, 5) * Surd::from(stage.f.num_edges() - 4 * i4) + Surd::from(3 * i4);
    out.guarantees.push(combined(&out.paths, promised));
    checked(out, g.n())
}

fn combined(paths: &[Vec<usize>], promised: Surd) -> EdgeGuarantee {
    EdgeGuarantee {
        construction: Construction::Combined,
        achieved: paths.iter().map(|p| p.len() - 1).sum(),
        promised,
    }
}

/// The recursive r-approximation on one graph.
fn approx2(g: &Graph, k: usize, cfg: &SolveConfig) -> Result<Partial> {
    let n = g.n();
    if n <= 1 {
        return Ok(Partial {
            paths: (0..n).map(|v| vec![v]).collect(),
            ..Partial::default()
        });
    }
    let stage = approx1(g, k, cfg)?;
    let heuristic = stage.tier == CoverTier::Heuristic;
    let f_edges = stage.f.num_edges();
    let mut state = RebalanceState::new(g, stage.f, stage.w, stage.aux, stage.eta)?;
    state.rebalance_fixpoint()?;
    if let Some(e) = state.fixpoint_violations().first() {
        return Err(invariant(format!(
            "edge {e:?} still admits an operation at the fixpoint"
        )));
    }
    let counters = state.compute_counters();
    let mut out = Partial {
        heuristic,
        operations: std::mem::take(&mut state.log),
        counters: vec![counters.clone()],
        ..Partial::default()
    };

    if counters.prefers_direct() {
        let views = detach_first_satellites(&state, &counters)?;
        let short = |order: usize| {
            views
                .iter()
                .filter(|v| is_bare_short_cycle(v) && v.skeleton.len() == order)
                .count()
        };
        let (c4, c5) = (short(4), short(5));
        let (b1, b2) = (counters.b1, counters.b2);
        for view in &views {
            let built = if is_bare_short_cycle(view) {
                open_short_cycle(&view.skeleton.center)
            } else {
                build_11(view, k)?
            };
            out.paths.extend(built.partition.paths);
            out.guarantees.extend(built.trace);
        }
        let r = Surd::r();
        let rest = f_edges - 4 * c4 - 5 * c5;
        let anchors = counters.g1 + counters.g2 + b1 + b2;
        let promised =
            rest * r + anchors * (Surd::int(5) - Surd::int(6) * r) + Surd::from(3 * c4 + 4 * c5);
        out.guarantees.push(combined(&out.paths, promised));
        return checked(out, n);
    }

    // Recurse on the graph without the clusters, then add one path per cluster.
    let keep: Vec<usize> = {
        let mut in_vb = vec![false; n];
        for &v in &counters.v_b {
            in_vb[v] = true;
        }
        (0..n).filter(|&v| !in_vb[v]).collect()
    };
    let (gb, map) = g.induced_subgraph(&keep);
    for comp in gb.connected_components() {
        let (sub, sub_map) = gb.induced_subgraph(&comp);
        let mut rec = approx2(&sub, k, cfg)?;
        rec.depth += 1;
        out.absorb(rec, |v| map.to_parent(sub_map.to_parent(v)));
    }
    out.depth = out.depth.max(1);
    for d in &counters.double_anchors {
        let built = cluster_path(d.anchor, &d.first, &d.second);
        out.paths.extend(built.partition.paths);
        out.guarantees.extend(built.trace);
    }
    checked(out, n)
}

/// The paths-plus-edges identity, asserted at every recursion level.
fn checked(out: Partial, n: usize) -> Result<Partial> {
    let covered: usize = out.paths.iter().map(Vec::len).sum();
    if covered != n {
        return Err(invariant(format!(
            "recursion level covers {covered} of {n} vertices"
        )));
    }
    Ok(out)
}

/// Removes the attaching edge of the first satellite at every counted
/// 2-anchor and re-decomposes. Each such satellite becomes a bare short
/// cycle, so the number of bare 4-cycles (5-cycles) must grow from the
/// critical count by `b1` (`b2`); a mismatch is an invariant error.
pub fn detach_first_satellites(
    state: &RebalanceState,
    counters: &Counters,
) -> Result<Vec<ComponentView>> {
    let detached: Vec<Edge> = counters
        .double_anchors
        .iter()
        .map(|d| d.first.attaching_edge())
        .collect();
    let w = PathCycleCover::from_edges(
        state.g.n(),
        state
            .w
            .edges()
            .iter()
            .copied()
            .filter(|e| !detached.contains(e)),
    )?;
    let (i4, i5) = critical_counts(&state.views);
    let views = combine_and_decompose(&state.f, &w, state.eta)?;
    let short = |order: usize| {
        views
            .iter()
            .filter(|v| is_bare_short_cycle(v) && v.skeleton.len() == order)
            .count()
    };
    let (c4, c5) = (short(4), short(5));
    if (c4, c5) != (i4 + counters.b1, i5 + counters.b2) {
        return Err(invariant(format!(
            "after detaching: {c4} 4-cycles and {c5} 5-cycles, expected {} and {}",
            i4 + counters.b1,
            i5 + counters.b2
        )));
    }
    Ok(views)
}

/// Uncertified fallback for `3 <= k <= 8`: cut a triangle-free cover.
fn component_cover_cut(g: &Graph, k: usize, cfg: &SolveConfig) -> Result<Partial> {
    let tier = cfg.tier_for(g.n());
    let f = max_triangle_free_cover(g, tier, cfg.exact_threshold)?;
    Ok(Partial {
        paths: cut_cover(&f, k).paths,
        heuristic: tier == CoverTier::Heuristic,
        ..Partial::default()
    })
}

fn solve_components(
    g: &Graph,
    k: usize,
    per: impl Fn(&Graph) -> Result<Partial>,
) -> Result<SolveReport> {
    let mut all = Partial::default();
    for comp in g.connected_components() {
        let (sub, map) = g.induced_subgraph(&comp);
        all.absorb(per(&sub)?, |v| map.to_parent(v));
    }
    let partition = PathPartition::new(all.paths).canonical();
    let (paths, edges) = (partition.num_paths(), partition.num_edges());
    if paths + edges != g.n() {
        return Err(invariant(format!(
            "{paths} paths + {edges} edges != {} vertices",
            g.n()
        )));
    }
    let mode = if all.heuristic {
        CoverMode::HeuristicCover
    } else {
        CoverMode::ExactCover
    };
    let certified = match (mode, k) {
        (CoverMode::HeuristicCover, _) => None,
        (_, 1 | 2) => Some(Surd::int(1)),
        _ => certified_alpha(k),
    };
    let ratio_bound = match k {
        1 | 2 => certified,
        _ => certified.and(kpp_ratio_bound(k)),
    };
    Ok(SolveReport {
        k,
        n: g.n(),
        partition,
        paths,
        edges,
        mode,
        certified_alpha: certified,
        ratio_bound,
        recursion_depth: all.depth,
        counters_trace: all.counters,
        guarantees: all.guarantees,
        operations: all.operations,
    })
}

/// The 4/5-approximation for kPPE with `k` in {9, 10}.
pub fn solve_910(g: &Graph, k: usize, cfg: &SolveConfig) -> Result<SolveReport> {
    if k != 9 && k != 10 {
        return Err(Error::InvalidK(k));
    }
    solve_components(g, k, |sub| component_910(sub, k, cfg))
}

/// The recursive `(9 - √11) / 7`-approximation for kPPE with `k >= 11`.
pub fn solve_11plus(g: &Graph, k: usize, cfg: &SolveConfig) -> Result<SolveReport> {
    if k < 11 {
        return Err(Error::InvalidK(k));
    }
    solve_components(g, k, |sub| approx2(sub, k, cfg))
}

/// Solves kPP for any `k >= 1`; components are solved independently.
pub fn solve(g: &Graph, k: usize, cfg: &SolveConfig) -> Result<SolveReport> {
    match k {
        0 => Err(Error::InvalidK(k)),
        1 => solve_components(g, k, |sub| {
            Ok(Partial {
                paths: (0..sub.n()).map(|v| vec![v]).collect(),
                ..Partial::default()
            })
        }),
        2 => solve_components(g, k, |sub| {
            Ok(Partial {
                paths: matching_partition(sub).paths,
                ..Partial::default()
            })
        }),
        3..=8 => solve_components(g, k, |sub| component_cover_cut(sub, k, cfg)),
        9 | 10 => solve_910(g, k, cfg),
        _ => solve_11plus(g, k, cfg),
    }
}

/// One row of the ratio table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioEntry {
    pub k: usize,
    pub exact: Surd,
    pub value: f64,
    /// `value` rounded half-up to three decimals.
    pub rounded: String,
}

/// The proven kPP approximation ratio for `k >= 9`.
pub fn ratio_bound(k: usize) -> Result<RatioEntry> {
    let exact = kpp_ratio_bound(k).ok_or(Error::InvalidK(k))?;
    let value = exact.to_f64();
    Ok(RatioEntry {
        k,
        exact,
        value,
        rounded: format!("{:.3}", (value * 1000.0).round() / 1000.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::verify_partition;

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn twelve_path_k9() {
        let r = solve(&path(12), 9, &SolveConfig::with_tier(TierChoice::Exact)).unwrap();
        assert_eq!((r.paths, r.edges), (2, 10));
        assert_eq!(r.certified_alpha, Some(Surd::ratio(4, 5)));
        assert!(r.all_guarantees_hold());
    }

    #[test]
    fn isolated_four_cycle_k9() {
        let g = cycle(4);
        let r = solve(&g, 9, &SolveConfig::with_tier(TierChoice::Exact)).unwrap();
        assert_eq!(r.edges, 3);
        assert!(verify_partition(&r.partition, &g, 9).is_empty());
    }

    #[test]
    fn six_cycle_k11() {
        let r = solve(&cycle(6), 11, &SolveConfig::with_tier(TierChoice::Exact)).unwrap();
        assert_eq!((r.paths, r.edges), (1, 5));
        assert_eq!(r.certified_alpha, Some(Surd::r()));
    }

    #[test]
    fn small_k_dispatch() {
        let g = path(6);
        let cfg = SolveConfig::with_tier(TierChoice::Exact);
        assert_eq!(solve(&g, 1, &cfg).unwrap().edges, 0);
        assert_eq!(solve(&g, 2, &cfg).unwrap().paths, 3);
        let r = solve(&g, 4, &cfg).unwrap();
        assert!(r.certified_alpha.is_none());
        assert!(verify_partition(&r.partition, &g, 4).is_empty());
        assert!(matches!(solve(&g, 0, &cfg), Err(Error::InvalidK(0))));
    }

    #[test]
    fn disconnected_union() {
        let g = Graph::from_edges(9, [(0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (6, 7)]).unwrap();
        let r = solve(&g, 11, &SolveConfig::default()).unwrap();
        assert!(verify_partition(&r.partition, &g, 11).is_empty());
        assert_eq!(r.paths + r.edges, 9);
    }

    #[test]
    fn ratio_entries() {
        assert_eq!(ratio_bound(9).unwrap().rounded, "2.600");
        assert_eq!(ratio_bound(11).unwrap().rounded, "2.881");
        assert_eq!(ratio_bound(12).unwrap().rounded, "3.069");
        assert_eq!(ratio_bound(12).unwrap().exact, Surd::new(-15, 7, 11, 7));
        assert!(ratio_bound(8).is_err());
    }
}
