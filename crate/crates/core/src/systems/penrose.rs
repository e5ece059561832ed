
use num_bigint::BigInt;
use num_rational::BigRational;

use super::Labeled;
use crate::exact::{NumberField, Point, Scalar};
use crate::tiling::{Child, ColorMark, Dimension, Prototile, SubstitutionRule, TilingSystem};

/// `Q(θ)` with `θ = 4 sin 36° = √(10 − 2√5)`, root of `x⁴ − 20x² + 80`.
///
/// It holds `√5 = (10 − θ²)/2` together with the sine and cosine of every multiple of 18°.
pub fn penrose_field() -> NumberField {
    let c = |v: i64| BigInt::from(v);
    NumberField::new(
        vec![c(80), c(0), c(-20), c(0), c(1)],
        BigRational::from_integer(c(2)),
        BigRational::from_integer(c(3)),
    )
    .expect("valid quartic field")
}

/// Robinson triangles: thin (36° apex) and fat (108° apex) in both chiralities.
///
/// Corners are labeled apex first. A thin triangle `(A, B, C)` splits at `P = A + (B − A)/τ`
/// into thin `(C, P, B)` and fat `(P, C, A)`. A fat one splits at `Q = B + (A − B)/τ` and
/// `R = B + (C − B)/τ` into fat `(R, C, A)`, fat `(Q, R, B)` and thin `(R, Q, A)`.
pub fn make_penrose() -> TilingSystem {
    let f = penrose_field().interned();
    let theta = Scalar::generator(&f);
    let t2 = theta.square();
    let int = |v: i64| Scalar::from_int(&f, v);
    let tau = (int(12) - &t2).scale_ratio(1, 4);
    let cos36 = tau.scale_ratio(1, 2);
    let sin36 = theta.scale_ratio(1, 4);
    let cos108 = (&t2 - int(8)).scale_ratio(1, 8);
    let sin108 = &theta * (int(12) - &t2).scale_ratio(1, 16);

    let o = Point::origin(&f);
    let b = Point::from_ints(&f, 1, 0);
    let thin = |s: i64| Labeled([o.clone(), b.clone(), Point::new(cos36.clone(), sin36.scale_ratio(s, 1))]);
    let fat = |s: i64| Labeled([o.clone(), b.clone(), Point::new(cos108.clone(), sin108.scale_ratio(s, 1))]);
    // Prototile order: thin+, fat+, thin−, fat−; `fat` flags the 108° shape.
    let shapes = [(thin(1), false), (fat(1), true), (thin(-1), false), (fat(-1), true)];
    let type_of = |is_fat: bool, tri: &Labeled| -> usize {
        let plus = tri.orientation() > 0;
        match (is_fat, plus) {
            (false, true) => 0,
            (true, true) => 1,
            (false, false) => 2,
            (true, false) => 3,
        }
    };

    let inv_tau = &tau - int(1);
    let toward = |from: &Point, to: &Point| from.add(&to.sub(from).scale(&inv_tau));
    let mut children = Vec::new();
    for (shape, is_fat) in &shapes {
        let [a, b, c] = shape.0.clone().map(|p| p.scale(&tau));
        let pieces: Vec<(bool, Labeled)> = if *is_fat {
            let q = toward(&b, &a);
            let r = toward(&b, &c);
            vec![
                (true, Labeled([r.clone(), c, a.clone()])),
                (true, Labeled([q.clone(), r.clone(), b])),
                (false, Labeled([r, q, a])),
            ]
        } else {
            let p = toward(&a, &b);
            vec![(false, Labeled([c.clone(), p.clone(), b])), (true, Labeled([p, c, a]))]
        };
        let kids = pieces
            .iter()
            .map(|(fat_piece, tri)| {
                let proto = type_of(*fat_piece, tri);
                Child { proto, pose: shapes[proto].0.motion_to(tri) }
            })
            .collect();
        children.push(kids);
    }

    let names = ["thin+", "fat+", "thin-", "fat-"];
    let prototiles = shapes
        .iter()
        .enumerate()
        .map(|(id, (tri, _))| {
            let [a, b, c] = &tri.0;
            // A segment from the centroid toward B, of a length particular to the type.
            let g = a.add(b).add(c).scale_ratio(1, 3);
            let t = if id < 2 { (1, 2) } else { (1, 3) };
            let end = g.add(&b.sub(&g).scale_ratio(t.0, t.1));
            Prototile {
                id,
                name: names[id].into(),
                vertices: tri.ccw(),
                mark: Some(ColorMark { color: id as u32, from: g, to: end }),
            }
        })
        .collect();

    // Inradius of the thin triangle, (½ sin 36°)·2 / (2 + 1/τ) = sin 36° / τ².
    let inner = sin36 * tau.square().try_inv().expect("nonzero");
    TilingSystem::new("penrose", f, Dimension::Two, prototiles, SubstitutionRule { lambda: tau.clone(), children }, inner, tau)
        .expect("penrose data is consistent")
}
