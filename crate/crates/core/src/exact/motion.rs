use std::fmt;
use std::sync::Arc;

use super::field::NumberField;
use super::scalar::Scalar;
use crate::certified::CertifiedValue;
use crate::error::{Error, Result};

/// A point of the plane with exact coordinates. One-dimensional systems keep `y = 0`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: Scalar,
    pub y: Scalar,
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:.6}, {:.6})", self.x.to_f64(), self.y.to_f64())
    }
}

impl Point {
    pub fn new(x: Scalar, y: Scalar) -> Point {
        Point { x, y }
    }

    pub fn origin(field: &Arc<NumberField>) -> Point {
        Point { x: Scalar::zero(field), y: Scalar::zero(field) }
    }

    pub fn from_ints(field: &Arc<NumberField>, x: i64, y: i64) -> Point {
        Point { x: Scalar::from_int(field, x), y: Scalar::from_int(field, y) }
    }

    pub fn field(&self) -> &Arc<NumberField> {
        self.x.field()
    }

    pub fn add(&self, o: &Point) -> Point {
        Point { x: &self.x + &o.x, y: &self.y + &o.y }
    }

    pub fn sub(&self, o: &Point) -> Point {
        Point { x: &self.x - &o.x, y: &self.y - &o.y }
    }

    pub fn scale(&self, k: &Scalar) -> Point {
        Point { x: &self.x * k, y: &self.y * k }
    }

    pub fn scale_ratio(&self, n: i64, d: i64) -> Point {
        Point { x: self.x.scale_ratio(n, d), y: self.y.scale_ratio(n, d) }
    }

    pub fn neg(&self) -> Point {
        Point { x: -&self.x, y: -&self.y }
    }

    pub fn dot(&self, o: &Point) -> Scalar {
        &self.x * &o.x + &self.y * &o.y
    }

    pub fn cross(&self, o: &Point) -> Scalar {
        &self.x * &o.y - &self.y * &o.x
    }

    pub fn norm2(&self) -> Scalar {
        self.dot(self)
    }

    pub fn to_f64(&self) -> [f64; 2] {
        [self.x.to_f64(), self.y.to_f64()]
    }

    pub fn midpoint(&self, o: &Point) -> Point {
        self.add(o).scale_ratio(1, 2)
    }
}

/// A rotation `(c, s) = (cos θ, sin θ)` with `c² + s² = 1` exactly.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rotation {
    c: Scalar,
    s: Scalar,
}

impl fmt::Debug for Rotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Rot({}, {})", self.c, self.s)
    }
}

impl Rotation {
    pub fn new(c: Scalar, s: Scalar) -> Result<Rotation> {
        let n = &c * &c + &s * &s;
        if n != Scalar::one(c.field()) {
            return Err(Error::InvalidRotation);
        }
        Ok(Rotation { c, s })
    }

    pub fn identity(field: &Arc<NumberField>) -> Rotation {
        Rotation { c: Scalar::one(field), s: Scalar::zero(field) }
    }

    /// Rotation by a multiple of a quarter turn.
    pub fn quarter_turns(field: &Arc<NumberField>, k: i32) -> Rotation {
        let (c, s) = match k.rem_euclid(4) {
            0 => (1, 0),
            1 => (0, 1),
            2 => (-1, 0),
            _ => (0, -1),
        };
        Rotation { c: Scalar::from_int(field, c), s: Scalar::from_int(field, s) }
    }

    /// The rotation taking direction `from` to direction `to`, when both have equal length.
    pub fn between(from: &Point, to: &Point) -> Result<Rotation> {
        let n = from.norm2();
        if n.is_zero() || n != to.norm2() {
            return Err(Error::InvalidRotation);
        }
        let inv = n.try_inv()?;
        Rotation::new(from.dot(to) * &inv, from.cross(to) * &inv)
    }

    pub fn cos(&self) -> &Scalar {
        &self.c
    }

    pub fn sin(&self) -> &Scalar {
        &self.s
    }

    pub fn is_identity(&self) -> bool {
        self.s.is_zero() && self.c.is_positive()
    }

    pub fn compose(&self, o: &Rotation) -> Rotation {
        Rotation { c: &self.c * &o.c - &self.s * &o.s, s: &self.s * &o.c + &self.c * &o.s }
    }

    pub fn inverse(&self) -> Rotation {
        Rotation { c: self.c.clone(), s: -&self.s }
    }

    pub fn pow(&self, k: i64) -> Rotation {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = Rotation::identity(self.c.field());
        for _ in 0..k.unsigned_abs() {
            acc = acc.compose(&base);
        }
        acc
    }

    pub fn apply(&self, p: &Point) -> Point {
        Point { x: &self.c * &p.x - &self.s * &p.y, y: &self.s * &p.x + &self.c * &p.y }
    }

    pub fn angle_f64(&self) -> f64 {
        self.s.to_f64().atan2(self.c.to_f64())
    }
}

/// An orientation-preserving rigid motion `a ↦ αa + s`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Motion {
    pub rot: Rotation,
    pub trans: Point,
}

impl fmt::Debug for Motion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Motion(θ={:.6}, t={:?})", self.rot.angle_f64(), self.trans)
    }
}

impl Motion {
    pub fn new(rot: Rotation, trans: Point) -> Motion {
        Motion { rot, trans }
    }

    pub fn identity(field: &Arc<NumberField>) -> Motion {
        Motion { rot: Rotation::identity(field), trans: Point::origin(field) }
    }

    pub fn translation(t: Point) -> Motion {
        Motion { rot: Rotation::identity(t.field()), trans: t }
    }

    pub fn rotation(rot: Rotation) -> Motion {
        let f = rot.cos().field().clone();
        Motion { rot, trans: Point::origin(&f) }
    }

    pub fn field(&self) -> &Arc<NumberField> {
        self.trans.field()
    }

    pub fn is_identity(&self) -> bool {
        self.rot.is_identity() && self.trans.x.is_zero() && self.trans.y.is_zero()
    }

    /// `[cos, sin, tx, ty]` in floating point.
    pub fn to_f64(&self) -> [f64; 4] {
        [self.rot.cos().to_f64(), self.rot.sin().to_f64(), self.trans.x.to_f64(), self.trans.y.to_f64()]
    }

    pub fn apply(&self, p: &Point) -> Point {
        self.rot.apply(p).add(&self.trans)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Motion) -> Motion {
        Motion { rot: self.rot.compose(&other.rot), trans: self.rot.apply(&other.trans).add(&self.trans) }
    }

    pub fn try_compose(&self, other: &Motion) -> Result<Motion> {
        if self.field() != other.field() {
            return Err(Error::FieldMismatch);
        }
        Ok(self.compose(other))
    }

    pub fn inverse(&self) -> Motion {
        let rinv = self.rot.inverse();
        let t = rinv.apply(&self.trans).neg();
        Motion { rot: rinv, trans: t }
    }

    /// The motion `H(g)` with `φ(g x) = H(g) φ(x)` for a substitution with
    /// expansion `λ`: same rotation, translation stretched by `λ`.
    pub fn expansion_conjugate(&self, lambda: &Scalar) -> Motion {
        Motion { rot: self.rot.clone(), trans: self.trans.scale(lambda) }
    }

    /// Inverse of [`Motion::expansion_conjugate`], given `1/λ`.
    pub fn contraction_conjugate(&self, inv_lambda: &Scalar) -> Motion {
        Motion { rot: self.rot.clone(), trans: self.trans.scale(inv_lambda) }
    }

    /// Motion taking `p0 ↦ q0` and `p1 ↦ q1`, if one exists.
    pub fn from_pairs(p0: &Point, p1: &Point, q0: &Point, q1: &Point) -> Option<Motion> {
        let rot = Rotation::between(&p1.sub(p0), &q1.sub(q0)).ok()?;
        let trans = q0.sub(&rot.apply(p0));
        Some(Motion { rot, trans })
    }

    /// `ℓ(g) = ‖α − I‖ + ‖s‖` with the Euclidean operator norm, enclosed to within `tol`.
    pub fn magnitude(&self, tol: f64) -> CertifiedValue {
        let f = self.field();
        // ‖α − I‖² = 2 − 2c for a plane rotation.
        let rot_sq = Scalar::from_int(f, 2) - self.rot.cos().scale_ratio(2, 1);
        let trans_sq = self.trans.norm2();
        let mut bits = 64;
        loop {
            let a = rot_sq.enclose(bits);
            let b = trans_sq.enclose(bits);
            let lo = a.0.max(0.0).sqrt() + b.0.max(0.0).sqrt();
            let hi = a.1.max(0.0).sqrt() + b.1.max(0.0).sqrt();
            let (lo, hi) = (lo * (1.0 - 4.0 * f64::EPSILON), hi * (1.0 + 4.0 * f64::EPSILON));
            let exact = rot_sq.is_zero() && trans_sq.is_zero();
            if exact {
                return CertifiedValue::exact(0.0);
            }
            if hi - lo <= tol || bits > 4096 {
                return CertifiedValue::new(lo, hi);
            }
            bits *= 2;
        }
    }
}
