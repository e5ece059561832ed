
use super::Labeled;
use crate::error::{Error, Result};
use crate::exact::{NumberField, Point, Scalar};
use crate::tiling::{Child, Dimension, Prototile, SubstitutionRule, TilingSystem};

/// The `(m, n)`-pinwheel: right triangles with legs `m < n`, inflated by `√(m²+n²)`.
///
/// The inflated triangle is split by the altitude into copies scaled by `m` and `n`. A copy
/// scaled by `k` is cut into a `k × k` grid of rectangles; rectangles on the hypotenuse
/// contribute their lower half, and full rectangles are cut along the other diagonal into
/// two mirror-image triangles.
pub fn make_pinwheel(m: u64, n: u64) -> Result<TilingSystem> {
    if m == 0 || m >= n || n > 1 << 20 {
        return Err(Error::InvalidArgument(format!("pinwheel needs 0 < m < n, got ({m}, {n})")));
    }
    let s = m * m + n * n;
    let (q, d) = split_square(s);
    let field = (if d == 1 { NumberField::rationals() } else { NumberField::real_quadratic(d)? }).interned();
    let lambda = if d == 1 {
        Scalar::from_int(&field, q as i64)
    } else {
        Scalar::generator(&field) * Scalar::from_int(&field, q as i64)
    };
    let (mi, ni) = (m as i64, n as i64);
    let o = Point::origin(&field);
    // Corners: right angle, end of the long leg, end of the short leg.
    let left = Labeled([o.clone(), Point::from_ints(&field, ni, 0), Point::from_ints(&field, 0, mi)]);
    let right = Labeled([o, Point::from_ints(&field, ni, 0), Point::from_ints(&field, 0, -mi)]);
    let shapes = [left, right];

    let mut children = Vec::new();
    for shape in &shapes {
        let big = Labeled(shape.0.clone().map(|p| p.scale(&lambda)));
        let mut kids = Vec::new();
        for (sub, k) in altitude_split(&big, m, n) {
            for piece in grid(&sub, k) {
                let proto = if piece.orientation() == shapes[0].orientation() { 0 } else { 1 };
                kids.push(Child { proto, pose: shapes[proto].motion_to(&piece) });
            }
        }
        children.push(kids);
    }

    let prototiles = shapes
        .iter()
        .enumerate()
        .map(|(id, l)| Prototile { id, name: ["L", "R"][id].into(), vertices: l.ccw(), mark: None })
        .collect();
    // Inradius of a right triangle: (a + b − c) / 2.
    let inner = (Scalar::from_int(&field, (m + n) as i64) - &lambda).scale_ratio(1, 2);
    TilingSystem::new(
        format!("pinwheel:{m},{n}"),
        field,
        Dimension::Two,
        prototiles,
        SubstitutionRule { lambda: lambda.clone(), children },
        inner,
        lambda,
    )
}

/// `s = q²·d` with `d` squarefree.
fn split_square(s: u64) -> (u64, u64) {
    let (mut q, mut d) = (1, s);
    let mut p = 2;
    while p * p <= d {
        while d % (p * p) == 0 {
            d /= p * p;
            q *= p;
        }
        p += 1;
    }
    (q, d)
}

/// The two similar pieces cut off by the altitude, with their scale relative to the prototile.
fn altitude_split(big: &Labeled, m: u64, n: u64) -> [(Labeled, u64); 2] {
    let [r, s, l] = big.0.clone();
    let sl = l.sub(&s);
    let t = r.sub(&s).dot(&sl) * sl.norm2().try_inv().expect("nondegenerate");
    let foot = s.add(&sl.scale(&t));
    [(Labeled([foot.clone(), s, r.clone()]), n), (Labeled([foot, r, l]), m)]
}

fn grid(tri: &Labeled, k: u64) -> Vec<Labeled> {
    let [r, s, l] = tri.0.clone();
    let ki = k as i64;
    let u = s.sub(&r).scale_ratio(1, ki);
    let v = l.sub(&r).scale_ratio(1, ki);
    let mut out = Vec::new();
    for i in 0..ki {
        for j in 0..ki - i {
            let c = r.add(&u.scale_ratio(i, 1)).add(&v.scale_ratio(j, 1));
            if i + j == ki - 1 {
                out.push(Labeled([c.clone(), c.add(&u), c.add(&v)]));
            } else {
                let far = c.add(&u).add(&v);
                out.push(Labeled([c.add(&u), c.clone(), far.clone()]));
                out.push(Labeled([c.add(&v), far, c]));
            }
        }
    }
    out
}
