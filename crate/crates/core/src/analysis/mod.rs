//! Patch statistics and searches: enumeration up to congruence, repetitivity, periods,
//! predecessor sets, recognizability and the sliding-block radius of the canonical code.

mod canonical;
mod code;
mod enumerate;
mod periods;
mod predecessors;
mod recognize;

use crate::exact::{Motion, Point};
use crate::geometry::sq_dist_point_segment_f64;
use crate::tiling::{support_boundary, Dimension, Patch, PatchIndex, PlacedTile, TilingSystem};

pub use canonical::{canonicalize, CanonicalPatch, CanonicalSummary};
pub(crate) use canonical::self_congruences;
pub(crate) use enumerate::classify;
pub use code::{agreement_radius, code_radius_profile, CodeProfile, CodeRadiusRow};
pub use enumerate::{
    enumerate_patches, enumerate_patches_direct, local_admissibility, repetitivity_radius, sample_centers, AdmissibilityReport, PatchLibrary,
    RepetitivityReport,
};
pub use periods::{find_periods, is_period, period_bound_report, PeriodBoundReport, PeriodLevel, PeriodSearch};
pub use predecessors::{predecessor_sets, stabilization, PredecessorSet, Stabilization};
pub use recognize::{
    decompose, recognizability_radius, DecompositionResult, ParentAssignment, RecognizabilityReport, RungResult,
};

/// Float motion `[cos, sin, tx, ty]`.
pub(crate) type MotionF = [f64; 4];

pub(crate) fn apply_f(g: &MotionF, p: [f64; 2]) -> [f64; 2] {
    [g[0] * p[0] - g[1] * p[1] + g[2], g[1] * p[0] + g[0] * p[1] + g[3]]
}

pub(crate) fn compose_f(g: &MotionF, h: &MotionF) -> MotionF {
    let t = apply_f(g, [h[2], h[3]]);
    [g[0] * h[0] - g[1] * h[1], g[1] * h[0] + g[0] * h[1], t[0], t[1]]
}

pub(crate) fn inverse_f(g: &MotionF) -> MotionF {
    let (c, s) = (g[0], -g[1]);
    [c, s, -(c * g[2] - s * g[3]), -(s * g[2] + c * g[3])]
}

pub(crate) fn dist_f(a: [f64; 2], b: [f64; 2]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

/// Distances to the boundary of a patch's support.
pub(crate) struct Support {
    segs: Vec<([f64; 2], [f64; 2])>,
}

impl Support {
    pub fn new(sys: &TilingSystem, patch: &Patch) -> Support {
        let segs = support_boundary(sys, patch).iter().map(|(a, b)| (a.to_f64(), b.to_f64())).collect();
        Support { segs }
    }

    /// Distance from a point of the support to its boundary.
    pub fn radius(&self, p: &Point) -> f64 {
        self.radius_f(p.to_f64())
    }

    pub fn radius_f(&self, p: [f64; 2]) -> f64 {
        self.segs.iter().map(|(a, b)| sq_dist_point_segment_f64(p, *a, *b)).fold(f64::INFINITY, f64::min).sqrt()
    }
}

/// How a tile sits relative to a patch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Fit {
    /// Equal to this tile of the patch.
    Equal(usize),
    /// Interior-disjoint from every tile of the patch.
    Clear,
    /// Overlaps this tile of the patch without being equal to it.
    Conflict(usize),
}

const MARGIN: f64 = 1e-7;

/// A patch with float geometry and an exact lookup table, for fast tile-vs-patch queries.
pub(crate) struct Layout<'a> {
    pub sys: &'a TilingSystem,
    pub patch: &'a Patch,
    pub index: PatchIndex,
    pub norm: Vec<PlacedTile>,
    pub poses: Vec<MotionF>,
    pub centers: Vec<[f64; 2]>,
}

impl<'a> Layout<'a> {
    pub fn new(sys: &'a TilingSystem, patch: &'a Patch) -> Layout<'a> {
        let index = PatchIndex::new(sys, patch);
        let norm = crate::par::map(&patch.tiles, |t| sys.normalize(t));
        let poses = patch.tiles.iter().map(|t| t.pose.to_f64()).collect();
        let centers = (0..patch.len()).map(|i| centroid_f(index.vertices_f64(i))).collect();
        Layout { sys, patch, index, norm, poses, centers }
    }

    pub fn len(&self) -> usize {
        self.patch.len()
    }

    /// Index of a tile equal to `t` (float vertices `tf`), matched in floats and confirmed exactly.
    pub fn locate(&self, t: &PlacedTile, tf: &[[f64; 2]]) -> Option<usize> {
        let b = crate::geometry::bbox_f64(tf);
        let norm = self.sys.normalize(t);
        self.index.query_box(&b).into_iter().find(|&q| {
            self.patch.tiles[q].proto == t.proto
                && same_vertex_set(tf, self.index.vertices_f64(q))
                && self.norm[q] == norm
        })
    }

    /// Float vertices of prototile `proto` under a float motion.
    pub fn vertices_under(&self, proto: usize, g: &MotionF) -> Vec<[f64; 2]> {
        self.sys.prototiles[proto].vertices.iter().map(|v| apply_f(g, v.to_f64())).collect()
    }

    /// Relation of tile `t` (with float vertices `tf`) to the patch.
    pub fn fit(&self, t: &PlacedTile, tf: &[[f64; 2]]) -> Fit {
        let b = crate::geometry::bbox_f64(tf);
        let mut conflict = None;
        for q in self.index.query_box(&b) {
            let qf = self.index.vertices_f64(q);
            let sep = separation_f(self.sys.dim, tf, qf);
            if sep > MARGIN {
                continue;
            }
            if self.patch.tiles[q].proto == t.proto && same_vertex_set(tf, qf) {
                if self.sys.normalize(t) == self.norm[q] {
                    return Fit::Equal(q);
                }
                conflict.get_or_insert(q);
                continue;
            }
            if sep < -MARGIN || !self.sys.interiors_disjoint(t, &self.patch.tiles[q]) {
                conflict.get_or_insert(q);
            }
        }
        match conflict {
            Some(q) => Fit::Conflict(q),
            None => Fit::Clear,
        }
    }

    /// Relation of the tile `g·(tile i)` to the patch.
    pub fn fit_moved(&self, g: &Motion, gf: &MotionF, tile: &PlacedTile) -> Fit {
        let moved = PlacedTile { proto: tile.proto, pose: g.compose(&tile.pose) };
        let tf = self.vertices_under(tile.proto, &compose_f(gf, &tile.pose.to_f64()));
        self.fit(&moved, &tf)
    }
}

pub(crate) fn centroid_f(v: &[[f64; 2]]) -> [f64; 2] {
    let n = v.len() as f64;
    [v.iter().map(|p| p[0]).sum::<f64>() / n, v.iter().map(|p| p[1]).sum::<f64>() / n]
}

fn same_vertex_set(a: &[[f64; 2]], b: &[[f64; 2]]) -> bool {
    a.len() == b.len() && a.iter().all(|p| b.iter().any(|q| dist_f(*p, *q) < MARGIN))
}

/// Largest separation along an edge normal of either convex polygon: positive when apart,
/// negative by the penetration depth when overlapping.
pub(crate) fn separation_f(dim: Dimension, a: &[[f64; 2]], b: &[[f64; 2]]) -> f64 {
    if dim == Dimension::One {
        let (a0, a1) = (a[0][0].min(a[1][0]), a[0][0].max(a[1][0]));
        let (b0, b1) = (b[0][0].min(b[1][0]), b[0][0].max(b[1][0]));
        return (b0 - a1).max(a0 - b1);
    }
    fn one_way(a: &[[f64; 2]], b: &[[f64; 2]]) -> f64 {
        let n = a.len();
        (0..n)
            .map(|i| {
                let (p, q) = (a[i], a[(i + 1) % n]);
                let (dx, dy) = (q[0] - p[0], q[1] - p[1]);
                let len = (dx * dx + dy * dy).sqrt();
                let nrm = [dy / len, -dx / len];
                b.iter().map(|v| nrm[0] * (v[0] - p[0]) + nrm[1] * (v[1] - p[1])).fold(f64::INFINITY, f64::min)
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }
    one_way(a, b).max(one_way(b, a))
}

/// Convex hull (counterclockwise, no collinear points) of a float point set.
pub(crate) fn convex_hull_f(pts: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let mut p: Vec<[f64; 2]> = pts.to_vec();
    p.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    p.dedup();
    if p.len() < 3 {
        return p;
    }
    let cross = |o: [f64; 2], a: [f64; 2], b: [f64; 2]| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    let mut hull: Vec<[f64; 2]> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &[f64; 2]>> = if pass == 0 { Box::new(p.iter()) } else { Box::new(p.iter().rev()) };
        for &q in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], q) <= 0.0 {
                hull.pop();
            }
            hull.push(q);
        }
        hull.pop();
    }
    hull
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_motion_algebra() {
        let g = [0.6, 0.8, 1.0, -2.0];
        let h = [0.0, 1.0, 0.5, 0.25];
        let p = [0.3, -0.7];
        let lhs = apply_f(&compose_f(&g, &h), p);
        let rhs = apply_f(&g, apply_f(&h, p));
        assert!(dist_f(lhs, rhs) < 1e-12);
        let back = apply_f(&inverse_f(&g), apply_f(&g, p));
        assert!(dist_f(back, p) < 1e-12);
    }

    #[test]
    fn hull_of_square_with_interior_point() {
        let h = convex_hull_f(&[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0], [0.5, 0.5], [0.5, 0.0]]);
        assert_eq!(h.len(), 4);
    }

    #[test]
    fn separation_signs() {
        let a = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];
        let far = [[2.0, 0.0], [3.0, 0.0], [2.0, 1.0]];
        let over = [[0.2, 0.2], [1.2, 0.2], [0.2, 1.2]];
        assert!(separation_f(Dimension::Two, &a, &far) > 0.9);
        assert!(separation_f(Dimension::Two, &a, &over) < -0.1);
    }
}
