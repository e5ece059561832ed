
use crate::exact::{Motion, NumberField, Point, Scalar};
use crate::tiling::{Child, Dimension, Prototile, SubstitutionRule, TilingSystem};

/// Intervals `T0 = [0, 1]` and `T1 = [0, τ]` with `T0 ↦ T1` and `T1 ↦ T0 T1`.
pub fn make_fibonacci() -> TilingSystem {
    let f = NumberField::real_quadratic(5).expect("5 is not a square").interned();
    let tau = (Scalar::generator(&f) + Scalar::one(&f)).scale_ratio(1, 2);
    let o = Point::origin(&f);
    let interval = |id: usize, len: Scalar| Prototile {
        id,
        name: format!("T{id}"),
        vertices: vec![o.clone(), Point::new(len, Scalar::zero(&f))],
        mark: None,
    };
    let prototiles = vec![interval(0, Scalar::one(&f)), interval(1, tau.clone())];
    let at = |x: i64| Motion::translation(Point::from_ints(&f, x, 0));
    let children = vec![
        vec![Child { proto: 1, pose: at(0) }],
        vec![Child { proto: 0, pose: at(0) }, Child { proto: 1, pose: at(1) }],
    ];
    TilingSystem::new(
        "fibonacci",
        f.clone(),
        Dimension::One,
        prototiles,
        SubstitutionRule { lambda: tau.clone(), children },
        Scalar::from_ratio(&f, 1, 2),
        tau,
    )
    .expect("fibonacci data is consistent")
}
