//! The clipped Hausdorff distance between boundary complexes and the tiling metric built on it.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::certified::CertifiedValue;
use crate::error::{Error, Result};
use crate::exact::Point;
use crate::tiling::{boundary_complex, support_boundary, support_radius, Patch, TilingSystem};

/// A finite union of closed segments. Degenerate segments stand for points.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SegmentComplex {
    pub segments: Vec<(Point, Point)>,
}

type Seg = ([f64; 2], [f64; 2]);

impl SegmentComplex {
    pub fn new(segments: Vec<(Point, Point)>) -> SegmentComplex {
        SegmentComplex { segments }
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn to_f64(&self) -> Vec<Seg> {
        self.segments.iter().map(|(a, b)| (a.to_f64(), b.to_f64())).collect()
    }
}

/// Part of a segment inside the closed disk of radius `r` about the origin.
pub fn clip_segment(s: &Seg, r: f64) -> Option<Seg> {
    let (a, b) = *s;
    let d = [b[0] - a[0], b[1] - a[1]];
    let qa = d[0] * d[0] + d[1] * d[1];
    let qb = 2.0 * (a[0] * d[0] + a[1] * d[1]);
    let qc = a[0] * a[0] + a[1] * a[1] - r * r;
    if qa == 0.0 {
        return (qc <= 0.0).then_some(*s);
    }
    let disc = qb * qb - 4.0 * qa * qc;
    if disc < 0.0 {
        return None;
    }
    let sq = disc.sqrt();
    let t0 = ((-qb - sq) / (2.0 * qa)).max(0.0);
    let t1 = ((-qb + sq) / (2.0 * qa)).min(1.0);
    if t0 > t1 {
        return None;
    }
    let at = |t: f64| [a[0] + t * d[0], a[1] + t * d[1]];
    Some((at(t0), at(t1)))
}

pub fn clip(segs: &[Seg], r: f64) -> Vec<Seg> {
    segs.iter().filter_map(|s| clip_segment(s, r)).collect()
}

fn dist(p: [f64; 2], s: &Seg) -> f64 {
    crate::geometry::sq_dist_point_segment_f64(p, s.0, s.1).sqrt()
}

struct Node {
    ub: f64,
    a: [f64; 2],
    b: [f64; 2],
    // Active targets with their distances to `a` and `b`.
    active: Vec<(usize, f64, f64)>,
}

impl PartialEq for Node {
    fn eq(&self, o: &Self) -> bool {
        self.ub == o.ub
    }
}
impl Eq for Node {}
impl PartialOrd for Node {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Node {
    fn cmp(&self, o: &Self) -> Ordering {
        self.ub.total_cmp(&o.ub)
    }
}

fn node(a: [f64; 2], b: [f64; 2], cands: impl Iterator<Item = (usize, f64, f64)>) -> (Node, f64) {
    let len = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
    let all: Vec<(usize, f64, f64)> = cands.collect();
    // Distance to a segment is convex along a segment, so each target is bounded by its endpoint max.
    let ub = all.iter().map(|&(_, x, y)| x.max(y)).fold(f64::INFINITY, f64::min);
    let lo = all.iter().map(|&(_, x, _)| x).fold(f64::INFINITY, f64::min).max(all.iter().map(|&(_, _, y)| y).fold(f64::INFINITY, f64::min));
    // A target can be the nearest somewhere on [a, b] only if its Lipschitz floor stays below `ub`.
    let active = all.into_iter().filter(|&(_, x, y)| (x + y - len) / 2.0 <= ub).collect();
    (Node { ub, a, b, active }, lo)
}

/// `sup_{p ∈ A} inf_{q ∈ B} ‖p − q‖` to within `eps`, with `B` nonempty.
pub fn one_sided(a: &[Seg], b: &[Seg], eps: f64) -> CertifiedValue {
    assert!(!b.is_empty(), "target set must be nonempty");
    let mut heap = BinaryHeap::new();
    let mut lower = 0.0f64;
    for s in a {
        let (n, lo) = node(s.0, s.1, b.iter().enumerate().map(|(j, t)| (j, dist(s.0, t), dist(s.1, t))));
        lower = lower.max(lo);
        heap.push(n);
    }
    let mut steps = 0usize;
    while let Some(top) = heap.peek() {
        if top.ub <= lower + eps || steps > 5_000_000 {
            break;
        }
        let top = heap.pop().expect("peeked");
        steps += 1;
        let m = [(top.a[0] + top.b[0]) / 2.0, (top.a[1] + top.b[1]) / 2.0];
        let dm: Vec<f64> = top.active.iter().map(|&(j, _, _)| dist(m, &b[j])).collect();
        let (left, lo_l) = node(top.a, m, top.active.iter().zip(&dm).map(|(&(j, x, _), &z)| (j, x, z)));
        let (right, lo_r) = node(m, top.b, top.active.iter().zip(&dm).map(|(&(j, _, y), &z)| (j, z, y)));
        lower = lower.max(lo_l).max(lo_r);
        for n in [left, right] {
            if n.ub > lower + eps * 0.5 {
                heap.push(n);
            }
        }
    }
    let upper = heap.peek().map_or(lower, |t| t.ub.max(lower));
    widen(lower, upper)
}

// Absorb floating-point error in the distance evaluations.
fn widen(lo: f64, hi: f64) -> CertifiedValue {
    let pad = 1e-12 * (1.0 + hi.abs());
    CertifiedValue::new((lo - pad).max(0.0), hi + pad)
}

/// Hausdorff distance between `A ∩ B_n` and `B ∩ B_n` (closed ball about the origin), to within `eps`.
pub fn hausdorff_clipped(a: &SegmentComplex, b: &SegmentComplex, n: f64, eps: f64) -> Result<CertifiedValue> {
    if !(eps > 0.0) || !(n > 0.0) {
        return Err(Error::InvalidArgument("radius and tolerance must be positive".into()));
    }
    let ca = clip(&a.to_f64(), n);
    let cb = clip(&b.to_f64(), n);
    if ca.is_empty() || cb.is_empty() {
        return Err(Error::EmptyAfterClipping { radius: n });
    }
    if a == b {
        return Ok(CertifiedValue::exact(0.0));
    }
    Ok(hausdorff_f64(&ca, &cb, eps))
}

/// Hausdorff distance between two nonempty float segment sets.
pub fn hausdorff_f64(a: &[Seg], b: &[Seg], eps: f64) -> CertifiedValue {
    let (x, y) = if crate::par::is_parallel() {
        join(|| one_sided(a, b, eps), || one_sided(b, a, eps))
    } else {
        (one_sided(a, b, eps), one_sided(b, a, eps))
    };
    CertifiedValue::new(x.lo.max(y.lo), x.hi.max(y.hi))
}

#[cfg(feature = "parallel")]
fn join<A: Send, B: Send>(f: impl FnOnce() -> A + Send, g: impl FnOnce() -> B + Send) -> (A, B) {
    rayon::join(f, g)
}

#[cfg(not(feature = "parallel"))]
fn join<A, B>(f: impl FnOnce() -> A, g: impl FnOnce() -> B) -> (A, B) {
    (f(), g())
}

#[derive(Debug, Clone, Serialize)]
pub struct PatchMetric {
    pub value: CertifiedValue,
    /// Per-radius terms `m_H[B_n ∩ ∂x, B_n ∩ ∂y] / n` for `n = 1..=⌊R⌋`.
    pub terms: Vec<CertifiedValue>,
    pub horizon: f64,
    pub eps: f64,
    /// The value is a lower bound for the supremum over all radii.
    pub horizon_limited: bool,
}

/// The tiling metric truncated to integer radii `1..=⌊R⌋` about the origin.
///
/// A radius where exactly one side is empty contributes 2; where both are empty, 0.
pub fn patch_metric(sys: &TilingSystem, x: &Patch, y: &Patch, horizon: f64, eps: f64) -> Result<PatchMetric> {
    if !(horizon >= 1.0) || !(eps > 0.0) {
        return Err(Error::InvalidArgument("horizon must be at least 1 and eps positive".into()));
    }
    let origin = Point::origin(&sys.field);
    for (name, p) in [("first", x), ("second", y)] {
        let rad = support_radius(sys, p, &support_boundary(sys, p), &origin);
        if horizon > rad {
            return Err(Error::InvalidArgument(format!(
                "horizon {horizon} exceeds the {name} patch's support radius {rad:.6} about the origin"
            )));
        }
    }
    let bx = boundary_complex(sys, x);
    let by = boundary_complex(sys, y);
    Ok(metric_from_complexes(&bx, &by, horizon, eps))
}

/// [`patch_metric`] on boundary complexes, without the support check.
pub fn metric_from_complexes(bx: &SegmentComplex, by: &SegmentComplex, horizon: f64, eps: f64) -> PatchMetric {
    let same = bx == by;
    let (fx, fy) = (bx.to_f64(), by.to_f64());
    let radii: Vec<usize> = (1..=horizon.floor() as usize).collect();
    let terms = crate::par::map(&radii, |&n| {
        let r = n as f64;
        if same {
            return CertifiedValue::exact(0.0);
        }
        let (cx, cy) = (clip(&fx, r), clip(&fy, r));
        match (cx.is_empty(), cy.is_empty()) {
            (true, true) => CertifiedValue::exact(0.0),
            (true, false) | (false, true) => CertifiedValue::exact(2.0),
            _ => {
                let h = hausdorff_f64(&cx, &cy, eps * r);
                CertifiedValue::new(h.lo / r, h.hi / r)
            }
        }
    });
    let value = if terms.iter().all(|t| t.exact && t.lo == 0.0) {
        CertifiedValue::exact(0.0)
    } else {
        CertifiedValue::new(
            terms.iter().map(|t| t.lo).fold(0.0, f64::max),
            terms.iter().map(|t| t.hi).fold(0.0, f64::max),
        )
    };
    PatchMetric { value, terms, horizon, eps, horizon_limited: true }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seg(a: [f64; 2], b: [f64; 2]) -> Seg {
        (a, b)
    }

    #[test]
    fn parallel_segments() {
        let a = [seg([0.0, 0.0], [1.0, 0.0])];
        let b = [seg([0.0, 0.3], [1.0, 0.3])];
        let h = hausdorff_f64(&a, &b, 1e-9);
        assert!(h.contains(0.3), "{h:?}");
        assert!(h.width() < 1e-8);
    }

    #[test]
    fn medial_axis_maximum() {
        // Points of the long segment are closest to one of two short ones; the worst is halfway.
        let a = [seg([0.0, 1.0], [4.0, 1.0])];
        let b = [seg([0.0, 0.0], [0.0, 0.0]), seg([4.0, 0.0], [4.0, 0.0])];
        let h = one_sided(&a, &b, 1e-9);
        assert!(h.contains(5f64.sqrt()), "{h:?}");
    }

    #[test]
    fn clipping() {
        let s = seg([-3.0, 0.0], [3.0, 0.0]);
        let c = clip_segment(&s, 1.0).unwrap();
        assert!((c.0[0] + 1.0).abs() < 1e-15 && (c.1[0] - 1.0).abs() < 1e-15);
        assert!(clip_segment(&seg([2.0, 2.0], [3.0, 2.0]), 1.0).is_none());
    }
}
