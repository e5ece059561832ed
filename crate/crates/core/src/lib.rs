//! Substitution tiling systems with exact arithmetic.
//!
//! Coordinates live in a real number field, so covers, overlaps and congruences are decided
//! exactly. Floating point is used only as a filter in front of exact predicates and for
//! certified enclosures of metric quantities.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod certified;
pub mod error;
pub mod exact;
pub mod format;
pub mod geometry;
pub mod groups;
pub mod metric;
pub mod par;
pub mod systems;
pub mod tiling;

pub use certified::CertifiedValue;
pub use error::{Error, Result};
pub use exact::{Motion, NumberField, Point, Rotation, Scalar};
pub use tiling::{Patch, PlacedTile, Prototile, TilingSystem};
