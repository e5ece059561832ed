
use crate::exact::{Motion, NumberField, Point, Scalar};
use crate::tiling::{Child, Dimension, Prototile, SubstitutionRule, TilingSystem};

/// Periodic control: the unit square cut into four half-size squares.
pub fn make_square_grid() -> TilingSystem {
    let f = NumberField::rationals().interned();
    let p = |x, y| Point::from_ints(&f, x, y);
    let square = Prototile { id: 0, name: "square".into(), vertices: vec![p(0, 0), p(1, 0), p(1, 1), p(0, 1)], mark: None };
    let children = [(0, 0), (1, 0), (0, 1), (1, 1)]
        .iter()
        .map(|&(x, y)| Child { proto: 0, pose: Motion::translation(p(x, y)) })
        .collect();
    TilingSystem::new(
        "square",
        f.clone(),
        Dimension::Two,
        vec![square],
        SubstitutionRule { lambda: Scalar::from_int(&f, 2), children: vec![children] },
        Scalar::from_ratio(&f, 1, 2),
        Scalar::from_ratio(&f, 3, 2),
    )
    .expect("square data is consistent")
}
