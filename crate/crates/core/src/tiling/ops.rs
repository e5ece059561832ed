use std::collections::BTreeSet;

use super::{Dimension, Patch, PatchIndex, PlacedTile, SupertileAddress, TilingSystem};
use crate::error::{Error, Result};
use crate::exact::Point;
use crate::metric::SegmentComplex;

pub const DEFAULT_TILE_CAP: usize = 1_000_000;

/// One substitution step `φ(P)`. Provenance, when present, gains one digit per tile.
pub fn substitute(sys: &TilingSystem, patch: &Patch) -> Patch {
    let idx: Vec<usize> = (0..patch.tiles.len()).collect();
    let pieces: Vec<(PlacedTile, Option<SupertileAddress>)> = crate::par::flat_map(&idx, |&i| {
        let kids = sys.children_of(&patch.tiles[i]);
        let addr = patch.provenance.as_ref().map(|p| &p[i]);
        kids.into_iter()
            .enumerate()
            .map(|(j, t)| {
                let a = addr.map(|a| {
                    let mut a = a.clone();
                    a.digits.push(j as u32);
                    a
                });
                (t, a)
            })
            .collect()
    });
    let has_prov = patch.provenance.is_some();
    let (tiles, prov): (Vec<_>, Vec<_>) = pieces.into_iter().unzip();
    Patch { tiles, provenance: has_prov.then(|| prov.into_iter().map(|a| a.expect("provenance")).collect()) }
}

/// `φⁿ(T)` with full provenance, refusing to exceed `cap` tiles.
pub fn supertile(sys: &TilingSystem, proto: usize, n: usize, cap: usize) -> Result<Patch> {
    if proto >= sys.prototiles.len() {
        return Err(Error::InvalidArgument(format!("no prototile {}", proto)));
    }
    let mut patch = Patch {
        tiles: vec![sys.identity_tile(proto)],
        provenance: Some(vec![SupertileAddress { root: proto, digits: Vec::new() }]),
    };
    for _ in 0..n {
        let next: usize = patch.tiles.iter().map(|t| sys.rule.children[t.proto].len()).sum();
        if next > cap {
            return Err(Error::ResourceLimit(format!("level would hold {} tiles, cap is {}", next, cap)));
        }
        patch = substitute(sys, &patch);
    }
    Ok(patch)
}

/// Checks that the tiles of `patch` have pairwise disjoint interiors, exactly.
///
/// Candidate pairs come from a sweep over float bounding boxes widened by a small margin.
pub fn check_patch(sys: &TilingSystem, patch: &Patch) -> Result<()> {
    let boxes: Vec<[f64; 4]> = patch
        .tiles
        .iter()
        .map(|t| {
            let v = sys.tile_vertices_f64(t);
            let mut b = [f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY];
            for p in v {
                b = [b[0].min(p[0]), b[1].min(p[1]), b[2].max(p[0]), b[3].max(p[1])];
            }
            b
        })
        .collect();
    let mut order: Vec<usize> = (0..boxes.len()).collect();
    order.sort_by(|&a, &b| boxes[a][0].total_cmp(&boxes[b][0]));
    const SLACK: f64 = 1e-9;
    for (k, &i) in order.iter().enumerate() {
        for &j in &order[k + 1..] {
            if boxes[j][0] > boxes[i][2] + SLACK {
                break;
            }
            if boxes[j][1] > boxes[i][3] + SLACK || boxes[i][1] > boxes[j][3] + SLACK {
                continue;
            }
            if !sys.interiors_disjoint(&patch.tiles[i], &patch.tiles[j]) {
                return Err(Error::InvalidPatch(format!("tiles {} and {} overlap", i.min(j), i.max(j))));
            }
        }
    }
    Ok(())
}

/// Tiles of `patch` whose closed region meets the open ball of radius `r` about `a`.
pub fn ball_patch(sys: &TilingSystem, patch: &Patch, a: &Point, r: f64) -> Patch {
    let index = PatchIndex::new(sys, patch);
    patch.select(&index.ball(sys, patch, a, r))
}

/// `∂P`: all tile edges and color markings, each segment once.
pub fn boundary_complex(sys: &TilingSystem, patch: &Patch) -> SegmentComplex {
    let mut set = BTreeSet::new();
    let mut push = |a: Point, b: Point| {
        if a <= b {
            set.insert((a, b));
        } else {
            set.insert((b, a));
        }
    };
    for t in &patch.tiles {
        let v = sys.tile_vertices(t);
        match sys.dim {
            // The boundary of an interval is its two endpoints.
            Dimension::One => {
                for p in v {
                    push(p.clone(), p);
                }
            }
            Dimension::Two => {
                for i in 0..v.len() {
                    push(v[i].clone(), v[(i + 1) % v.len()].clone());
                }
            }
        }
        if let Some((a, b)) = sys.tile_mark(t) {
            push(a, b);
        }
    }
    SegmentComplex::new(set.into_iter().collect())
}

/// Whether `P ∪ Q` is a patch: every pair of tiles coincides or has disjoint interiors.
pub fn patches_agree_on_overlap(sys: &TilingSystem, p: &Patch, q: &Patch) -> bool {
    if p.is_empty() || q.is_empty() {
        return true;
    }
    let qi = PatchIndex::new(sys, q);
    let pv: Vec<[f64; 4]> = p.tiles.iter().map(|t| crate::geometry::bbox_f64(&sys.tile_vertices_f64(t))).collect();
    let idx: Vec<usize> = (0..p.tiles.len()).collect();
    let bad = crate::par::map(&idx, |&i| {
        let a = &p.tiles[i];
        let na = sys.normalize(a);
        qi.query_box(&pv[i]).into_iter().any(|j| {
            let b = &q.tiles[j];
            if a.proto == b.proto && na == sys.normalize(b) {
                return false;
            }
            !sys.interiors_disjoint(a, b)
        })
    });
    !bad.into_iter().any(|b| b)
}

/// Boundary of the support of the patch, as exact segments.
///
/// A tile edge contributes whatever part of it is not covered by collinear edges of other
/// tiles. One-dimensional patches contribute unshared endpoints as degenerate segments.
pub fn support_boundary(sys: &TilingSystem, patch: &Patch) -> Vec<(Point, Point)> {
    let index = PatchIndex::new(sys, patch);
    let idx: Vec<usize> = (0..patch.tiles.len()).collect();
    crate::par::flat_map(&idx, |&i| {
        let verts = sys.tile_vertices(&patch.tiles[i]);
        let near: Vec<usize> = index.query_box(index.bbox(i)).into_iter().filter(|&j| j != i).collect();
        let mut out = Vec::new();
        if sys.dim == Dimension::One {
            for p in &verts {
                let shared = near.iter().any(|&j| sys.tile_vertices(&patch.tiles[j]).contains(p));
                if !shared {
                    out.push((p.clone(), p.clone()));
                }
            }
            return out;
        }
        let others: Vec<Vec<Point>> = near.iter().map(|&j| sys.tile_vertices(&patch.tiles[j])).collect();
        let n = verts.len();
        for e in 0..n {
            let (a, b) = (&verts[e], &verts[(e + 1) % n]);
            out.extend(uncovered_parts(a, b, &others));
        }
        out
    })
}

fn uncovered_parts(a: &Point, b: &Point, others: &[Vec<Point>]) -> Vec<(Point, Point)> {
    use crate::exact::Scalar;
    let ab = b.sub(a);
    let len2 = ab.norm2();
    let inv = len2.try_inv().expect("nondegenerate edge");
    let (af, bf) = (a.to_f64(), b.to_f64());
    let lf = ((bf[0] - af[0]).powi(2) + (bf[1] - af[1]).powi(2)).sqrt();
    let near_line = |p: [f64; 2]| ((bf[0] - af[0]) * (p[1] - af[1]) - (bf[1] - af[1]) * (p[0] - af[0])).abs() / lf < 1e-7;
    let zero = Scalar::zero(a.field());
    let one = Scalar::one(a.field());
    let mut covered: Vec<(Scalar, Scalar)> = Vec::new();
    for poly in others {
        let m = poly.len();
        for k in 0..m {
            let (c, d) = (&poly[k], &poly[(k + 1) % m]);
            if !near_line(c.to_f64()) || !near_line(d.to_f64()) {
                continue;
            }
            if crate::geometry::orient(a, b, c) != 0 || crate::geometry::orient(a, b, d) != 0 {
                continue;
            }
            let tc = c.sub(a).dot(&ab) * &inv;
            let td = d.sub(a).dot(&ab) * &inv;
            let (lo, hi) = if tc.cmp_value(&td).is_le() { (tc, td) } else { (td, tc) };
            let lo = if lo.cmp_value(&zero).is_lt() { zero.clone() } else { lo };
            let hi = if hi.cmp_value(&one).is_gt() { one.clone() } else { hi };
            if lo.cmp_value(&hi).is_lt() {
                covered.push((lo, hi));
            }
        }
    }
    covered.sort_by(|x, y| x.0.cmp_value(&y.0));
    let mut out = Vec::new();
    let mut at = zero;
    let point = |t: &Scalar| a.add(&ab.scale(t));
    for (lo, hi) in covered {
        if lo.cmp_value(&at).is_gt() {
            out.push((point(&at), point(&lo)));
        }
        if hi.cmp_value(&at).is_gt() {
            at = hi;
        }
    }
    if at.cmp_value(&one).is_lt() {
        out.push((point(&at), b.clone()));
    }
    out
}

/// Radius of the largest ball about `center` inside the support (zero when `center` is outside).
pub fn support_radius(sys: &TilingSystem, patch: &Patch, boundary: &[(Point, Point)], center: &Point) -> f64 {
    let index = PatchIndex::new(sys, patch);
    if index.containing(sys, patch, center).is_empty() {
        return 0.0;
    }
    let c = center.to_f64();
    boundary
        .iter()
        .map(|(a, b)| crate::geometry::sq_dist_point_segment_f64(c, a.to_f64(), b.to_f64()).sqrt())
        .fold(f64::INFINITY, f64::min)
}
