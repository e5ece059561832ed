//! Exact arithmetic in real number fields and the rigid motions of the plane
//! built on top of it.

mod field;
mod motion;
mod scalar;

pub use field::NumberField;
pub use motion::{Motion, Point, Rotation};
pub use scalar::{ArithOp, Scalar};
