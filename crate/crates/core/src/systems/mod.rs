//! Built-in substitution systems.

mod fibonacci;
mod penrose;
mod pinwheel;
mod square;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{Motion, Point};
use crate::geometry::orient;
use crate::tiling::TilingSystem;

pub use fibonacci::make_fibonacci;
pub use penrose::{make_penrose, penrose_field};
pub use pinwheel::make_pinwheel;
pub use square::make_square_grid;

/// Facts a catalog system is expected to satisfy.
#[derive(Debug, Clone, Serialize)]
pub struct SystemCatalogEntry {
    pub name: String,
    pub lambda: f64,
    pub prototiles: usize,
    pub children: Vec<usize>,
    /// `(k, r)` for the orientation group `Z_k ⊕ Z^r`.
    pub orientation_group: (u64, usize),
}

/// Resolves `penrose`, `pinwheel:m,n`, `fibonacci` or `square`.
pub fn by_name(name: &str) -> Result<TilingSystem> {
    let name = name.trim();
    match name {
        "penrose" => Ok(make_penrose()),
        "fibonacci" => Ok(make_fibonacci()),
        "square" => Ok(make_square_grid()),
        _ => {
            let Some(args) = name.strip_prefix("pinwheel:") else {
                return Err(Error::InvalidArgument(format!("unknown system {name:?}")));
            };
            let (m, n) = args
                .split_once(',')
                .and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)))
                .ok_or_else(|| Error::InvalidArgument(format!("expected pinwheel:m,n, got {name:?}")))?;
            make_pinwheel(m, n)
        }
    }
}

pub fn catalog() -> Vec<SystemCatalogEntry> {
    let tau = (1.0 + 5f64.sqrt()) / 2.0;
    vec![
        SystemCatalogEntry {
            name: "penrose".into(),
            lambda: tau,
            prototiles: 4,
            children: vec![2, 3, 2, 3],
            orientation_group: (10, 0),
        },
        SystemCatalogEntry {
            name: "pinwheel:1,2".into(),
            lambda: 5f64.sqrt(),
            prototiles: 2,
            children: vec![5, 5],
            orientation_group: (4, 1),
        },
        SystemCatalogEntry {
            name: "pinwheel:3,4".into(),
            lambda: 5.0,
            prototiles: 2,
            children: vec![25, 25],
            orientation_group: (4, 1),
        },
        SystemCatalogEntry {
            name: "fibonacci".into(),
            lambda: tau,
            prototiles: 2,
            children: vec![1, 2],
            orientation_group: (1, 0),
        },
        SystemCatalogEntry {
            name: "square".into(),
            lambda: 2.0,
            prototiles: 1,
            children: vec![4],
            orientation_group: (4, 0),
        },
    ]
}

/// A triangle with labeled corners, used to place children by corner correspondence.
#[derive(Debug, Clone)]
pub(crate) struct Labeled(pub [Point; 3]);

impl Labeled {
    pub fn orientation(&self) -> i32 {
        orient(&self.0[0], &self.0[1], &self.0[2])
    }

    /// The motion carrying `self`'s corners onto `to`'s, which must be directly congruent.
    pub fn motion_to(&self, to: &Labeled) -> Motion {
        let g = Motion::from_pairs(&self.0[0], &self.0[1], &to.0[0], &to.0[1]).expect("congruent corners");
        assert_eq!(g.apply(&self.0[2]), to.0[2], "labeled triangles are not directly congruent");
        g
    }

    /// Counterclockwise vertex list.
    pub fn ccw(&self) -> Vec<Point> {
        let [a, b, c] = self.0.clone();
        if self.orientation() > 0 {
            vec![a, b, c]
        } else {
            vec![a, c, b]
        }
    }
}
