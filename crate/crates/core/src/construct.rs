//! Constructions turning a component of `F + W` (or a piece of one) into a
//! k-path partition whose edge count is certified against an exact bound.
//!
//! Every construction appends an [`EdgeGuarantee`] to the trace, so callers
//! can audit each step, not just the final count.

use serde::Serialize;

use crate::error::{invariant, Error, Result};
use crate::exact::Surd;
use crate::partition::PathPartition;
use crate::structure::{ComponentView, Satellite, Segment, Skeleton};

/// The construction that produced a set of paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Construction {
    /// A path or long cycle without satellites, cut into pieces of `k` vertices.
    BareElement,
    /// An opened satellite followed by the center run up to the next anchor.
    AnchoredPiece,
    /// Center split before every 1-anchor (no 2-anchors present), `k` in {9, 10}.
    SplitAtSingleAnchors,
    /// A 2-anchor with both of its satellites opened into one path.
    DoubleAnchorPiece,
    /// Center split around every 2-anchor, `k` in {9, 10}.
    SplitAtDoubleAnchors,
    /// Center split before every 1-anchor when all satellites are 5-cycles.
    FiveCycleSplit,
    /// One of the four special shapes handled by dedicated long paths.
    SpecialShape,
    /// A path piece led by one or two 4-cycle satellites.
    LeadingFourCycle,
    /// The last vertex of a path center together with its satellite.
    AnchoredEndpoint,
    /// Greedy left-to-right segmentation of a path center.
    PathSegmentation,
    /// Segmentation of a cycle center, possibly peeling a special prefix first.
    CycleSegmentation,
    /// A short-cycle center with exactly one 2-anchor.
    Balanced,
    /// A short cycle with one edge dropped.
    ShortCycle,
    /// A 2-anchor with its two satellites, removed before recursing.
    Cluster,
    /// Whole-graph total of the direct construction, checked against the
    /// bound stated in terms of the triangle-free cover.
    Combined,
}

/// An achieved edge count next to the bound its construction promises.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeGuarantee {
    pub construction: Construction,
    pub achieved: usize,
    pub promised: Surd,
}

impl EdgeGuarantee {
    pub fn holds(&self) -> bool {
        Surd::from(self.achieved) >= self.promised
    }
}

/// Result of building a k-path partition for one component or segment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Built {
    pub partition: PathPartition,
    /// Guarantee of the outermost construction.
    pub guarantee: EdgeGuarantee,
    /// Every guarantee recorded on the way, innermost first; ends with `guarantee`.
    pub trace: Vec<EdgeGuarantee>,
}

/// Something carrying a skeleton: a whole component or a segment of one.
pub trait Piece {
    fn skeleton(&self) -> &Skeleton;
    /// Identifier of the component the piece comes from.
    fn origin(&self) -> usize;
}

impl Piece for ComponentView {
    fn skeleton(&self) -> &Skeleton {
        &self.skeleton
    }
    fn origin(&self) -> usize {
        self.id
    }
}

impl Piece for Segment {
    fn skeleton(&self) -> &Skeleton {
        &self.skeleton
    }
    fn origin(&self) -> usize {
        self.parent
    }
}

/// The special shapes of a path center whose first vertex carries a 4-cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SpecialKind {
    /// Two vertices: a 4-cycle, then a 5-cycle.
    FourThenFive,
    /// Three vertices: 4-cycle, bare vertex, 4-cycle.
    FourGapFour,
    /// Four vertices: 4-cycle, 4-cycle, bare vertex, 5-cycle.
    FourFourGapFive,
    /// The first `anchored` vertices carry 4-cycles, the rest are bare.
    FourCyclePrefix { anchored: usize },
}

/// Classifies a path skeleton as one of the special shapes, if it is one.
pub fn detect_special(s: &Skeleton) -> Option<SpecialKind> {
    let l = s.len();
    if s.cyclic || l == 0 || !s.single_of_order(0, 4) || (0..l).any(|i| s.degree(i) > 1) {
        return None;
    }
    let four = |i: usize| s.single_of_order(i, 4);
    let five = |i: usize| s.single_of_order(i, 5);
    let bare = |i: usize| s.degree(i) == 0;
    match l {
        2 if five(1) => return Some(SpecialKind::FourThenFive),
        3 if bare(1) && four(2) => return Some(SpecialKind::FourGapFour),
        4 if four(1) && bare(2) && five(3) => return Some(SpecialKind::FourFourGapFive),
        _ => {}
    }
    let anchored = (0..l).take_while(|&i| four(i)).count();
    (anchored..l)
        .all(bare)
        .then_some(SpecialKind::FourCyclePrefix { anchored })
}

/// Builds a k-path partition with at least `4/5 |F_K|` edges, for `k` in {9, 10}.
pub fn build_910<P: Piece>(piece: &P, k: usize) -> Result<Built> {
    if k != 9 && k != 10 {
        return Err(Error::InvalidK(k));
    }
    let s = piece.skeleton();
    if s.cyclic && s.len() == 4 && !s.has_satellites() {
        return Err(Error::CriticalComponent(piece.origin()));
    }
    let mut b = Builder::new(k);
    let paths = b.four_fifths(s);
    Ok(b.finish(paths))
}

/// Builds a k-path partition with at least `r |F_K| + (5 - 6r) |O_K|` edges
/// (`r |F_K| + 5 - 6r` for balanced components), for `k >= 11`.
pub fn build_11<P: Piece>(piece: &P, k: usize) -> Result<Built> {
    if k < 11 {
        return Err(Error::InvalidK(k));
    }
    let s = piece.skeleton();
    let short_center = s.cyclic && (s.len() == 4 || s.len() == 5);
    if short_center && !s.has_satellites() {
        return Err(Error::CriticalComponent(piece.origin()));
    }
    let mut b = Builder::new(k);
    let paths = if short_center && s.count_of_degree(2) == 1 && s.count_of_degree(1) == 0 {
        b.balanced(s)
    } else if s.count_of_degree(2) > 0 {
        return Err(Error::UnbalancedDoubleAnchor(piece.origin()));
    } else {
        b.no_double_anchors(s)?
    };
    Ok(b.finish(paths))
}

/// A short cycle turned into a path by dropping its closing edge.
pub fn open_short_cycle(cycle: &[usize]) -> Built {
    let mut b = Builder::new(cycle.len());
    let paths = vec![cycle.to_vec()];
    b.record(
        Construction::ShortCycle,
        &paths,
        Surd::from(cycle.len() - 1),
    );
    b.finish(paths)
}

/// The path through a 2-anchor and both of its satellites.
pub fn cluster_path(anchor: usize, first: &Satellite, second: &Satellite) -> Built {
    let mut b = Builder::new(usize::MAX);
    let paths = vec![through(first, anchor, second)];
    b.record(
        Construction::Cluster,
        &paths,
        Surd::from(first.order() + second.order()),
    );
    b.finish(paths)
}

type Paths = Vec<Vec<usize>>;

fn edge_count(paths: &[Vec<usize>]) -> usize {
    paths.iter().map(|p| p.len().saturating_sub(1)).sum()
}

/// `open(C) v rev(open(C'))`: a path entering `v` from one satellite and
/// leaving into the other.
fn through(first: &Satellite, v: usize, second: &Satellite) -> Vec<usize> {
    let mut seq = first.opened();
    seq.push(v);
    seq.extend(second.opened().into_iter().rev());
    seq
}

fn r_bound(f: usize, o: usize) -> Surd {
    let r = Surd::r();
    f * r + o * (Surd::int(5) - Surd::int(6) * r)
}

fn ones(s: &Skeleton) -> usize {
    s.count_of_degree(1)
}

struct Builder {
    k: usize,
    trace: Vec<EdgeGuarantee>,
}

impl Builder {
    fn new(k: usize) -> Self {
        Builder {
            k,
            trace: Vec::new(),
        }
    }

    fn record(&mut self, construction: Construction, paths: &[Vec<usize>], promised: Surd) {
        self.trace.push(EdgeGuarantee {
            construction,
            achieved: edge_count(paths),
            promised,
        });
    }

    fn finish(self, paths: Paths) -> Built {
        let guarantee = self
            .trace
            .last()
            .cloned()
            .expect("every build records a guarantee");
        Built {
            partition: PathPartition::new(paths),
            guarantee,
            trace: self.trace,
        }
    }

    fn cut(&self, seq: &[usize]) -> Paths {
        seq.chunks(self.k).map(<[usize]>::to_vec).collect()
    }

    /// Splits a skeleton without 2-anchors before each 1-anchor; each piece is
    /// the anchor's opened satellite followed by the center run up to the
    /// next anchor. A path center not starting at an anchor yields a leading
    /// bare piece. Cyclic centers are rotated to start at their first anchor.
    fn split_before_anchors(
        &mut self,
        s: &Skeleton,
        piece_bound: impl Fn(usize) -> Surd,
        bare_bound: impl Fn(usize) -> Surd,
    ) -> Paths {
        let first = (0..s.len())
            .find(|&i| s.degree(i) == 1)
            .expect("skeleton has an anchor");
        let rotated;
        let s = if s.cyclic {
            rotated = s.rotated(first);
            &rotated
        } else {
            s
        };
        let anchors: Vec<usize> = (0..s.len()).filter(|&i| s.degree(i) == 1).collect();
        let mut out = Vec::new();
        if anchors[0] > 0 {
            let paths = self.cut(&s.center[..anchors[0]]);
            self.record(
                Construction::BareElement,
                &paths,
                bare_bound(anchors[0] - 1),
            );
            out.extend(paths);
        }
        for (t, &a) in anchors.iter().enumerate() {
            let end = anchors.get(t + 1).copied().unwrap_or(s.len());
            let sat = s.single(a).unwrap();
            let mut seq = sat.opened();
            seq.extend(&s.center[a..end]);
            let paths = self.cut(&seq);
            self.record(
                Construction::AnchoredPiece,
                &paths,
                piece_bound(end - 1 - a + sat.order()),
            );
            out.extend(paths);
        }
        out
    }

    // ----- k in {9, 10} -----

    fn four_fifths(&mut self, s: &Skeleton) -> Paths {
        let ff = Surd::ratio(4, 5);
        let f = s.f_edges();
        if !s.has_satellites() {
            let paths = self.cut(&s.center);
            self.record(Construction::BareElement, &paths, f * ff);
            return paths;
        }
        if s.count_of_degree(2) == 0 {
            let paths = self.split_before_anchors(s, |fh| fh * ff + ff, |fh| fh * ff);
            let lead = !s.cyclic && s.degree(0) == 1;
            let promised = f * ff + if lead { ff } else { Surd::zero() };
            self.record(Construction::SplitAtSingleAnchors, &paths, promised);
            return paths;
        }

        let rotated;
        let s = if s.cyclic {
            let first = (0..s.len()).find(|&i| s.degree(i) == 2).unwrap();
            rotated = s.rotated(first);
            &rotated
        } else {
            s
        };
        let mut out = Vec::new();
        let mut run_start = None;
        for i in 0..=s.len() {
            if i < s.len() && s.degree(i) != 2 {
                run_start.get_or_insert(i);
                continue;
            }
            if let Some(a) = run_start.take() {
                out.extend(self.four_fifths(&s.segment(a, i - 1)));
            }
            if i < s.len() {
                let (c1, c2) = (&s.attached[i][0], &s.attached[i][1]);
                let paths = self.cut(&through(c1, s.center[i], c2));
                let fh = c1.order() + c2.order();
                self.record(
                    Construction::DoubleAnchorPiece,
                    &paths,
                    fh * ff + Surd::ratio(8, 5),
                );
                out.extend(paths);
            }
        }
        self.record(Construction::SplitAtDoubleAnchors, &out, f * ff);
        out
    }

    // ----- k >= 11 -----

    fn balanced(&mut self, s: &Skeleton) -> Paths {
        let at = (0..s.len()).find(|&i| s.degree(i) == 2).unwrap();
        let s = s.rotated(at);
        let (c1, c2) = (&s.attached[0][0], &s.attached[0][1]);
        let paths = vec![through(c1, s.center[0], c2), s.center[1..].to_vec()];
        let r = Surd::r();
        let promised = s.f_edges() * r + Surd::int(5) - Surd::int(6) * r;
        self.record(Construction::Balanced, &paths, promised);
        paths
    }

    fn no_double_anchors(&mut self, s: &Skeleton) -> Result<Paths> {
        if !s.satellites().any(Satellite::is_four_cycle) {
            Ok(self.five_cycle_split(s))
        } else if s.cyclic {
            self.cycle_segmentation(s)
        } else {
            self.path_segmentation(s)
        }
    }

    /// All satellites are 5-cycles (or there are none).
    fn five_cycle_split(&mut self, s: &Skeleton) -> Paths {
        let r = Surd::r();
        let f = s.f_edges();
        if !s.has_satellites() {
            let paths = self.cut(&s.center);
            self.record(Construction::BareElement, &paths, f * r);
            return paths;
        }
        let paths = self.split_before_anchors(
            s,
            |fh| fh * r + Surd::int(5) - Surd::int(5) * r,
            |fh| fh * r,
        );
        let lead = !s.cyclic && s.degree(0) == 1;
        let promised = r_bound(f, ones(s)) + if lead { r } else { Surd::zero() };
        self.record(Construction::FiveCycleSplit, &paths, promised);
        paths
    }

    /// A special shape of type 1-3, or four 4-cycle anchors on a 4-vertex path.
    fn special_shape(&mut self, s: &Skeleton) -> Result<Paths> {
        let c = |i: usize| s.single(i).expect("anchored position");
        let v = &s.center;
        let paths = match detect_special(s) {
            Some(SpecialKind::FourThenFive) => vec![pair_path(c(0), v[0], v[1], c(1))],
            Some(SpecialKind::FourGapFour) => {
                let mut seq = c(0).opened();
                seq.extend([v[0], v[1], v[2]]);
                seq.extend(c(2).opened().into_iter().rev());
                vec![seq]
            }
            Some(SpecialKind::FourFourGapFive) => {
                let mut seq = vec![v[2], v[3]];
                seq.extend(c(3).opened().into_iter().rev());
                vec![pair_path(c(0), v[0], v[1], c(1)), seq]
            }
            Some(SpecialKind::FourCyclePrefix { anchored: 4 }) if s.len() == 4 => {
                vec![
                    pair_path(c(0), v[0], v[1], c(1)),
                    pair_path(c(2), v[2], v[3], c(3)),
                ]
            }
            other => return Err(invariant(format!("not a special shape: {other:?}"))),
        };
        let r = Surd::r();
        let promised = r_bound(s.f_edges(), ones(s)) + Surd::int(2) * r;
        self.record(Construction::SpecialShape, &paths, promised);
        Ok(paths)
    }

    /// A path piece whose 1-anchors are `v1` alone (at least two vertices), or
    /// exactly `v1` and `v2` with 4-cycles (two or at least four vertices).
    fn leading_four_cycle(&mut self, s: &Skeleton) -> Result<Paths> {
        let l = s.len();
        let anchors: Vec<usize> = (0..l).filter(|&i| s.degree(i) > 0).collect();
        let kind = detect_special(s);
        let paths = match (anchors.as_slice(), kind) {
            ([0], Some(SpecialKind::FourCyclePrefix { anchored: 1 })) if l >= 2 => {
                let mut seq = s.single(0).unwrap().opened();
                seq.extend(&s.center);
                self.cut(&seq)
            }
            ([0, 1], Some(SpecialKind::FourCyclePrefix { anchored: 2 })) if l != 3 => {
                let (c1, c2) = (s.single(0).unwrap(), s.single(1).unwrap());
                let mut paths = vec![pair_path(c1, s.center[0], s.center[1], c2)];
                if l >= 4 {
                    paths.extend(self.cut(&s.center[2..]));
                }
                paths
            }
            _ => {
                return Err(invariant(format!(
                    "leading 4-cycle construction needs one or two leading 4-cycle anchors, got anchors {anchors:?} on {l} vertices"
                )))
            }
        };
        let promised = r_bound(s.f_edges(), ones(s)) + Surd::r();
        self.record(Construction::LeadingFourCycle, &paths, promised);
        Ok(paths)
    }

    fn path_segmentation(&mut self, s: &Skeleton) -> Result<Paths> {
        let l = s.len();
        if ones(s) == 0 {
            return Ok(self.five_cycle_split(s));
        }
        let anchored = |i: usize| s.degree(i) == 1;
        let mut out = Vec::new();
        let mut i = 0;
        loop {
            if i == l - 1 || !(i..l).any(anchored) {
                out.extend(self.final_piece(&s.segment(i, l - 1)));
                break;
            }
            let j;
            if s.single_of_order(i, 5) {
                j = i;
                out.extend(self.five_cycle_split(&s.segment(i, j)));
            } else if anchored(i) {
                j = i + 1;
                let piece = s.segment(i, j);
                if s.single_of_order(j, 5) {
                    out.extend(self.special_shape(&piece)?);
                } else {
                    out.extend(self.leading_four_cycle(&piece)?);
                }
            } else {
                j = (i + 1..l).find(|&t| anchored(t)).unwrap();
                let piece = s.segment(i, j).reversed();
                if piece.single_of_order(0, 4) {
                    out.extend(self.leading_four_cycle(&piece)?);
                } else {
                    out.extend(self.five_cycle_split(&piece));
                }
            }
            if j == l - 1 {
                break;
            }
            i = j + 1;
        }
        self.record(
            Construction::PathSegmentation,
            &out,
            r_bound(s.f_edges(), ones(s)),
        );
        Ok(out)
    }

    /// The last piece of a path segmentation: either anchor-free or a single
    /// anchored vertex.
    fn final_piece(&mut self, s: &Skeleton) -> Paths {
        if ones(s) == 0 {
            return self.five_cycle_split(s);
        }
        debug_assert_eq!(s.len(), 1);
        let sat = s.single(0).unwrap();
        let mut seq = sat.opened();
        seq.push(s.center[0]);
        let paths = vec![seq];
        self.record(
            Construction::AnchoredEndpoint,
            &paths,
            r_bound(s.f_edges(), 1),
        );
        paths
    }

    fn cycle_segmentation(&mut self, s: &Skeleton) -> Result<Paths> {
        let l = s.len();
        let at = |i: usize| i % l;
        let anchored = |i: usize| s.degree(at(i)) == 1;
        let four = |i: usize| s.single_of_order(at(i), 4);
        let five = |i: usize| s.single_of_order(at(i), 5);

        // Peel a special prefix `K[i, i + h]` when one exists.
        let prefixes: [(usize, &dyn Fn(usize) -> bool); 4] = [
            (1, &|i| four(i) && five(i + 1)),
            (2, &|i| four(i) && !anchored(i + 1) && four(i + 2)),
            (3, &|i| {
                four(i) && four(i + 1) && !anchored(i + 2) && five(i + 3)
            }),
            (3, &|i| (i..i + 4).all(four)),
        ];
        for (h, matches) in prefixes {
            if let Some(i) = (0..l).find(|&i| matches(i)) {
                let s = s.rotated(i);
                let mut out = self.special_shape(&s.segment(0, h))?;
                if h + 1 < l {
                    out.extend(self.path_segmentation(&s.segment(h + 1, l - 1))?);
                }
                self.record(
                    Construction::CycleSegmentation,
                    &out,
                    r_bound(s.f_edges(), ones(&s)),
                );
                return Ok(out);
            }
        }

        // No special prefix: start right after a bare vertex and cut the
        // cycle into runs, each led by an anchor.
        let start = (0..l)
            .find(|&i| anchored(i) && !anchored(i + l - 1))
            .ok_or_else(|| invariant("cycle center without special prefix has no bare vertex"))?;
        let s = s.rotated(start);
        let anchored = |i: usize| i < l && s.degree(i) == 1;
        let run_end = |from: usize| {
            let mut j = from;
            while j + 1 < l && !anchored(j + 1) {
                j += 1;
            }
            j
        };
        let mut out = Vec::new();
        let mut i = 0;
        while i < l {
            if !anchored(i) {
                return Err(invariant(format!(
                    "cycle segmentation reached bare position {i}"
                )));
            }
            let j;
            if s.single_of_order(i, 5) || !anchored(i + 1) {
                j = run_end(i);
                let piece = s.segment(i, j);
                if s.single_of_order(i, 5) {
                    out.extend(self.five_cycle_split(&piece));
                } else {
                    out.extend(self.leading_four_cycle(&piece)?);
                }
            } else {
                if !s.single_of_order(i + 1, 4) {
                    return Err(invariant(
                        "4-cycle followed by 5-cycle left after prefix search",
                    ));
                }
                if anchored(i + 2) {
                    j = i + 1;
                } else {
                    if anchored(i + 3) || i + 3 >= l {
                        return Err(invariant(
                            "two 4-cycles before a single bare vertex left after prefix search",
                        ));
                    }
                    j = run_end(i + 2);
                }
                out.extend(self.leading_four_cycle(&s.segment(i, j))?);
            }
            i = j + 1;
        }
        self.record(
            Construction::CycleSegmentation,
            &out,
            r_bound(s.f_edges(), ones(&s)),
        );
        Ok(out)
    }
}

/// `open(C1) v1 v2 rev(open(C2))` for adjacent center vertices `v1`, `v2`.
fn pair_path(c1: &Satellite, v1: usize, v2: usize, c2: &Satellite) -> Vec<usize> {
    let mut seq = c1.opened();
    seq.extend([v1, v2]);
    seq.extend(c2.opened().into_iter().rev());
    seq
}
