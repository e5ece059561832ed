use std::collections::BTreeSet;

use serde::Serialize;

use super::{Dimension, PlacedTile, TilingSystem};
use crate::exact::{Point, Rotation, Scalar};
use crate::geometry::{self, Location};

/// Exact-cover checks for one prototile's decomposition.
#[derive(Debug, Clone, Serialize)]
pub struct CoverVerdict {
    pub proto: usize,
    pub children: usize,
    pub area_identity: bool,
    pub disjoint: bool,
    pub contained: bool,
}

impl CoverVerdict {
    pub fn ok(&self) -> bool {
        self.area_identity && self.disjoint && self.contained
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub cover: Vec<CoverVerdict>,
    pub geometry_errors: Vec<String>,
    pub transition_matrix: Vec<Vec<u64>>,
    pub primitive: bool,
    /// Least `k` with every entry of the `k`-th matrix power positive.
    pub primitive_power: Option<usize>,
    /// Least level containing a same-type tile parallel to the root, per prototile.
    pub parallel_return: Vec<Option<usize>>,
    pub parallel_bound: usize,
}

impl ValidationReport {
    pub fn cover_ok(&self) -> bool {
        self.cover.iter().all(CoverVerdict::ok)
    }

    pub fn is_valid(&self) -> bool {
        self.cover_ok() && self.geometry_errors.is_empty() && self.primitive && self.parallel_return.iter().all(Option::is_some)
    }
}

/// Entry `(i, j)` counts the type-`i` children of prototile `j`.
pub fn transition_matrix(sys: &TilingSystem) -> Vec<Vec<u64>> {
    let k = sys.prototiles.len();
    let mut m = vec![vec![0u64; k]; k];
    for (j, kids) in sys.rule.children.iter().enumerate() {
        for c in kids {
            m[c.proto][j] += 1;
        }
    }
    m
}

pub fn validate_system(sys: &TilingSystem, parallel_bound: usize) -> ValidationReport {
    let geometry_errors = geometry_errors(sys);
    let protos: Vec<usize> = (0..sys.prototiles.len()).collect();
    let cover = if geometry_errors.is_empty() {
        crate::par::map(&protos, |&p| cover_verdict(sys, p))
    } else {
        Vec::new()
    };
    let tm = transition_matrix(sys);
    let primitive_power = primitivity(&tm);
    let parallel_return = protos.iter().map(|&p| parallel_return(sys, p, parallel_bound)).collect();
    ValidationReport {
        cover,
        geometry_errors,
        transition_matrix: tm,
        primitive: primitive_power.is_some(),
        primitive_power,
        parallel_return,
        parallel_bound,
    }
}

fn geometry_errors(sys: &TilingSystem) -> Vec<String> {
    let mut errs = Vec::new();
    let m2 = sys.max_diameter.square();
    let mut mark_lengths: Vec<(u32, Scalar)> = Vec::new();
    for p in &sys.prototiles {
        let v = &p.vertices;
        match sys.dim {
            Dimension::Two => {
                if !geometry::is_strictly_convex_ccw(v) {
                    errs.push(format!("prototile {} is not a convex counterclockwise polygon", p.id));
                    continue;
                }
            }
            Dimension::One => {
                let on_axis = v.iter().all(|q| q.y.is_zero());
                if !on_axis || !v[0].x.is_zero() || !v[1].x.is_positive() {
                    errs.push(format!("prototile {} must be an interval [0, len] on the x-axis", p.id));
                    continue;
                }
            }
        }
        for a in v {
            for b in v {
                if a.sub(b).norm2().cmp_value(&m2).is_gt() {
                    errs.push(format!("prototile {} is wider than the declared max diameter", p.id));
                }
            }
        }
        if sys.inner_radius_f64() > inscribed_lower_bound(sys, v) + 1e-12 {
            errs.push(format!("prototile {} has no ball of the declared inner radius", p.id));
        }
        if let Some(mark) = &p.mark {
            let inside = |q: &Point| match sys.dim {
                Dimension::Two => geometry::locate_in_convex(v, q) == Location::Inside,
                Dimension::One => q.y.is_zero() && q.x.is_positive() && q.x.cmp_value(&v[1].x).is_lt(),
            };
            if !inside(&mark.from) || !inside(&mark.to) {
                errs.push(format!("mark of prototile {} is not strictly interior", p.id));
            }
            let len2 = mark.to.sub(&mark.from).norm2();
            for (c, l) in &mark_lengths {
                if (*c == mark.color) != (l == &len2) {
                    errs.push(format!("mark length of prototile {} does not identify its color", p.id));
                }
            }
            mark_lengths.push((mark.color, len2));
        }
    }
    errs.sort();
    errs.dedup();
    errs
}

// Radius of a ball about the vertex centroid that stays inside (or the exact inradius of a triangle).
fn inscribed_lower_bound(sys: &TilingSystem, v: &[Point]) -> f64 {
    let f: Vec<[f64; 2]> = v.iter().map(Point::to_f64).collect();
    if sys.dim == Dimension::One {
        return (f[1][0] - f[0][0]).abs() / 2.0;
    }
    let n = f.len();
    let edge = |i: usize| {
        let (a, b) = (f[i], f[(i + 1) % n]);
        ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt()
    };
    if n == 3 {
        let area = ((f[1][0] - f[0][0]) * (f[2][1] - f[0][1]) - (f[2][0] - f[0][0]) * (f[1][1] - f[0][1])).abs();
        return area / (edge(0) + edge(1) + edge(2));
    }
    let c = [f.iter().map(|p| p[0]).sum::<f64>() / n as f64, f.iter().map(|p| p[1]).sum::<f64>() / n as f64];
    (0..n)
        .map(|i| {
            let (a, b) = (f[i], f[(i + 1) % n]);
            ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])) / edge(i)
        })
        .fold(f64::INFINITY, f64::min)
}

fn cover_verdict(sys: &TilingSystem, proto: usize) -> CoverVerdict {
    let kids: Vec<PlacedTile> = sys.rule.children[proto]
        .iter()
        .map(|c| PlacedTile { proto: c.proto, pose: c.pose.clone() })
        .collect();
    let lambda = sys.lambda();

    let mut total = Scalar::zero(&sys.field);
    for k in &kids {
        total = total + sys.measure(k.proto);
    }
    let area_identity = total == sys.measure_factor() * sys.measure(proto);

    let mut disjoint = true;
    'outer: for i in 0..kids.len() {
        for j in i + 1..kids.len() {
            if !sys.interiors_disjoint(&kids[i], &kids[j]) {
                disjoint = false;
                break 'outer;
            }
        }
    }

    let big: Vec<Point> = sys.prototiles[proto].vertices.iter().map(|v| v.scale(lambda)).collect();
    let contained = kids.iter().all(|k| {
        sys.tile_vertices(k).iter().all(|q| match sys.dim {
            Dimension::Two => geometry::locate_in_convex(&big, q) != Location::Outside,
            Dimension::One => q.y.is_zero() && q.x.sign() >= 0 && q.x.cmp_value(&big[1].x).is_le(),
        }) && (sys.dim == Dimension::Two || k.pose.rot.is_identity())
    });

    CoverVerdict { proto, children: kids.len(), area_identity, disjoint, contained }
}

/// Least `k ≤ (n−1)²+1` with `Mᵏ > 0`, which exists iff `M` is primitive.
fn primitivity(m: &[Vec<u64>]) -> Option<usize> {
    let n = m.len();
    let b: Vec<Vec<bool>> = m.iter().map(|r| r.iter().map(|&x| x > 0).collect()).collect();
    let mut p = b.clone();
    let bound = (n - 1) * (n - 1) + 1;
    for k in 1..=bound {
        if p.iter().all(|r| r.iter().all(|&x| x)) {
            return Some(k);
        }
        let mut q = vec![vec![false; n]; n];
        for i in 0..n {
            for j in 0..n {
                q[i][j] = (0..n).any(|l| p[i][l] && b[l][j]);
            }
        }
        p = q;
    }
    None
}

/// Least `n ≥ 1` such that `φⁿ(T)` holds a type-`T` tile parallel to `T`.
///
/// Only the (type, orientation) content of each level matters, so the search runs on that set.
fn parallel_return(sys: &TilingSystem, proto: usize, bound: usize) -> Option<usize> {
    let key = |p: usize, r: &Rotation| -> (usize, Rotation) {
        let best = sys.symmetries(p).iter().map(|s| r.compose(&s.rot)).min().expect("identity");
        (p, best)
    };
    let target = key(proto, &Rotation::identity(&sys.field));
    let mut level: BTreeSet<(usize, Rotation)> = BTreeSet::from([target.clone()]);
    for n in 1..=bound {
        let mut next = BTreeSet::new();
        for (p, r) in &level {
            for c in &sys.rule.children[*p] {
                next.insert(key(c.proto, &r.compose(&c.pose.rot)));
            }
        }
        if next.contains(&target) {
            return Some(n);
        }
        level = next;
    }
    None
}
