//! Exact predicates on points, segments and convex polygons.

use crate::exact::{Point, Scalar};

/// Sign of the turn `a → b → c`: `1` counterclockwise, `-1` clockwise, `0` collinear.
pub fn orient(a: &Point, b: &Point, c: &Point) -> i32 {
    b.sub(a).cross(&c.sub(a)).sign()
}

/// Twice the signed area (shoelace).
pub fn area2(poly: &[Point]) -> Scalar {
    let f = poly[0].field();
    let mut acc = Scalar::zero(f);
    for i in 0..poly.len() {
        let j = (i + 1) % poly.len();
        acc = acc + poly[i].cross(&poly[j]);
    }
    acc
}

/// Strictly convex and counterclockwise (no repeated or collinear consecutive vertices).
pub fn is_strictly_convex_ccw(poly: &[Point]) -> bool {
    let n = poly.len();
    if n < 3 {
        return false;
    }
    (0..n).all(|i| orient(&poly[i], &poly[(i + 1) % n], &poly[(i + 2) % n]) > 0)
        && winding_once(poly)
}

/// Rejects star-shaped self-overlapping vertex sequences whose turns are all left.
fn winding_once(poly: &[Point]) -> bool {
    // For a locally convex closed polyline, total turning is 2π·k; k = 1 iff every vertex
    // lies on the nonnegative side of every edge.
    let n = poly.len();
    (0..n).all(|i| {
        let (a, b) = (&poly[i], &poly[(i + 1) % n]);
        poly.iter().all(|p| orient(a, b, p) >= 0)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Inside,
    Boundary,
    Outside,
}

/// Location of `p` relative to a convex counterclockwise polygon.
pub fn locate_in_convex(poly: &[Point], p: &Point) -> Location {
    let n = poly.len();
    let mut on_edge = false;
    for i in 0..n {
        match orient(&poly[i], &poly[(i + 1) % n], p) {
            -1 => return Location::Outside,
            0 => on_edge = true,
            _ => {}
        }
    }
    if on_edge {
        Location::Boundary
    } else {
        Location::Inside
    }
}

/// Whether two convex counterclockwise polygons have disjoint interiors.
///
/// Separating-axis test restricted to edge lines, which is complete for convex polygons.
pub fn convex_interiors_disjoint(a: &[Point], b: &[Point]) -> bool {
    separated_by_edge_of(a, b) || separated_by_edge_of(b, a)
}

fn separated_by_edge_of(a: &[Point], b: &[Point]) -> bool {
    let n = a.len();
    (0..n).any(|i| {
        let (p, q) = (&a[i], &a[(i + 1) % n]);
        b.iter().all(|v| orient(p, q, v) <= 0)
    })
}

/// Squared distance from `p` to the closed segment `[a, b]`.
pub fn sq_dist_point_segment(p: &Point, a: &Point, b: &Point) -> Scalar {
    let ab = b.sub(a);
    let ap = p.sub(a);
    let len2 = ab.norm2();
    if len2.is_zero() {
        return ap.norm2();
    }
    let t = ap.dot(&ab);
    if t.sign() <= 0 {
        return ap.norm2();
    }
    if t.cmp_value(&len2).is_ge() {
        return p.sub(b).norm2();
    }
    // |ap|² - (ap·ab)²/|ab|²
    let cross = ap.cross(&ab);
    &cross * &cross * len2.try_inv().expect("nonzero length")
}

/// Squared distance from `p` to a closed convex polygon (zero inside).
pub fn sq_dist_point_convex(poly: &[Point], p: &Point) -> Scalar {
    if poly.len() >= 3 && locate_in_convex(poly, p) != Location::Outside {
        return Scalar::zero(p.field());
    }
    let n = poly.len();
    let mut best: Option<Scalar> = None;
    for i in 0..n {
        let j = (i + 1) % n;
        if n == 2 && i == 1 {
            break;
        }
        let d = sq_dist_point_segment(p, &poly[i], &poly[j]);
        best = Some(match best {
            Some(b) if b.cmp_value(&d).is_le() => b,
            _ => d,
        });
    }
    best.expect("nonempty polygon")
}

/// Approximate squared distance in floating point (filter for exact tests).
pub fn sq_dist_point_segment_f64(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let ab = [b[0] - a[0], b[1] - a[1]];
    let ap = [p[0] - a[0], p[1] - a[1]];
    let len2 = ab[0] * ab[0] + ab[1] * ab[1];
    let t = if len2 > 0.0 { ((ap[0] * ab[0] + ap[1] * ab[1]) / len2).clamp(0.0, 1.0) } else { 0.0 };
    let d = [ap[0] - t * ab[0], ap[1] - t * ab[1]];
    d[0] * d[0] + d[1] * d[1]
}

/// Approximate distance from `p` to a convex polygon (or segment) given as floats.
pub fn dist_point_convex_f64(poly: &[[f64; 2]], p: [f64; 2]) -> f64 {
    let n = poly.len();
    if n >= 3 {
        let inside = (0..n).all(|i| {
            let a = poly[i];
            let b = poly[(i + 1) % n];
            (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]) >= 0.0
        });
        if inside {
            return 0.0;
        }
    }
    let edges = if n == 2 { 1 } else { n };
    (0..edges)
        .map(|i| sq_dist_point_segment_f64(p, poly[i], poly[(i + 1) % n]))
        .fold(f64::INFINITY, f64::min)
        .sqrt()
}

/// Axis-aligned bounding box `[minx, miny, maxx, maxy]`.
pub fn bbox_f64(pts: &[[f64; 2]]) -> [f64; 4] {
    let mut b = [f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY];
    for p in pts {
        b[0] = b[0].min(p[0]);
        b[1] = b[1].min(p[1]);
        b[2] = b[2].max(p[0]);
        b[3] = b[3].max(p[1]);
    }
    b
}

pub fn bboxes_overlap(a: &[f64; 4], b: &[f64; 4], slack: f64) -> bool {
    a[0] <= b[2] + slack && b[0] <= a[2] + slack && a[1] <= b[3] + slack && b[1] <= a[3] + slack
}

/// Centroid of the vertex set.
pub fn vertex_centroid(poly: &[Point]) -> Point {
    let f = poly[0].field();
    let mut acc = Point::origin(f);
    for p in poly {
        acc = acc.add(p);
    }
    acc.scale_ratio(1, poly.len() as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::NumberField;
    use std::sync::Arc;

    fn pts(f: &Arc<NumberField>, v: &[(i64, i64)]) -> Vec<Point> {
        v.iter().map(|&(x, y)| Point::from_ints(f, x, y)).collect()
    }

    #[test]
    fn convexity_and_area() {
        let f = Arc::new(NumberField::rationals());
        let sq = pts(&f, &[(0, 0), (2, 0), (2, 2), (0, 2)]);
        assert!(is_strictly_convex_ccw(&sq));
        assert_eq!(area2(&sq), Scalar::from_int(&f, 8));
        let cw: Vec<Point> = sq.iter().rev().cloned().collect();
        assert!(!is_strictly_convex_ccw(&cw));
        let degenerate = pts(&f, &[(0, 0), (1, 0), (2, 0), (0, 1)]);
        assert!(!is_strictly_convex_ccw(&degenerate));
    }

    #[test]
    fn disjointness_cases() {
        let f = Arc::new(NumberField::rationals());
        let a = pts(&f, &[(0, 0), (2, 0), (0, 2)]);
        let touching = pts(&f, &[(2, 0), (2, 2), (0, 2)]);
        let overlapping = pts(&f, &[(1, 0), (3, 0), (1, 2)]);
        assert!(convex_interiors_disjoint(&a, &touching));
        assert!(!convex_interiors_disjoint(&a, &overlapping));
        assert!(!convex_interiors_disjoint(&a, &a));
    }

    #[test]
    fn distances() {
        let f = Arc::new(NumberField::rationals());
        let tri = pts(&f, &[(0, 0), (4, 0), (0, 4)]);
        assert!(sq_dist_point_convex(&tri, &Point::from_ints(&f, 1, 1)).is_zero());
        assert_eq!(sq_dist_point_convex(&tri, &Point::from_ints(&f, -3, 0)), Scalar::from_int(&f, 9));
        assert_eq!(sq_dist_point_convex(&tri, &Point::from_ints(&f, 4, 4)), Scalar::from_int(&f, 8));
        assert_eq!(locate_in_convex(&tri, &Point::from_ints(&f, 2, 2)), Location::Boundary);
    }
}
