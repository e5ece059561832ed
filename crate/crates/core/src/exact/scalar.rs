use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::field::{poly_rem, rational_to_f64, NumberField};
use crate::error::{Error, Result};

/// An exact element of a real number field, stored as an integer vector in
/// the power basis over a positive common denominator.
///
/// The representation is normalized (`gcd(num, den) = 1`, zero has `den = 1`),
/// so structural equality is value equality. `Ord` is a canonical structural
/// order used for sorting and hashing keys; use [`Scalar::cmp_value`] for the
/// order of the real numbers.
#[derive(Clone)]
pub struct Scalar {
    field: Arc<NumberField>,
    num: Vec<BigInt>,
    den: BigInt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl Scalar {
    fn normalized(field: Arc<NumberField>, mut num: Vec<BigInt>, mut den: BigInt) -> Scalar {
        if den.is_negative() {
            den = -den;
            for c in num.iter_mut() {
                *c = -c.clone();
            }
        }
        let mut g = den.clone();
        for c in &num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if num.iter().all(Zero::is_zero) {
            den = BigInt::one();
        } else if !g.is_one() {
            for c in num.iter_mut() {
                *c = &*c / &g;
            }
            den /= g;
        }
        Scalar { field, num, den }
    }

    pub fn zero(field: &Arc<NumberField>) -> Scalar {
        Scalar { field: field.clone(), num: vec![BigInt::zero(); field.degree()], den: BigInt::one() }
    }

    pub fn one(field: &Arc<NumberField>) -> Scalar {
        Scalar::from_int(field, 1)
    }

    pub fn from_int(field: &Arc<NumberField>, n: i64) -> Scalar {
        Scalar::from_rational(field, BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(field: &Arc<NumberField>, n: i64, d: i64) -> Scalar {
        Scalar::from_rational(field, BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn from_rational(field: &Arc<NumberField>, q: BigRational) -> Scalar {
        let mut num = vec![BigInt::zero(); field.degree()];
        num[0] = q.numer().clone();
        Scalar::normalized(field.clone(), num, q.denom().clone())
    }

    /// The field generator `θ`.
    pub fn generator(field: &Arc<NumberField>) -> Scalar {
        if field.degree() == 1 {
            // θ is the rational root of x + c0.
            return Scalar::from_rational(field, BigRational::from_integer(-field.min_poly()[0].clone()));
        }
        let mut num = vec![BigInt::zero(); field.degree()];
        num[1] = BigInt::one();
        Scalar { field: field.clone(), num, den: BigInt::one() }
    }

    /// Builds an element from rational power-basis coordinates.
    pub fn from_coeffs(field: &Arc<NumberField>, coeffs: &[BigRational]) -> Result<Scalar> {
        if coeffs.len() > field.degree() {
            return Err(Error::Parse(format!(
                "{} coefficients for a degree-{} field",
                coeffs.len(),
                field.degree()
            )));
        }
        let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut num: Vec<BigInt> = coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        num.resize(field.degree(), BigInt::zero());
        Ok(Scalar::normalized(field.clone(), num, den))
    }

    /// Exact conversion of a finite binary float.
    pub fn from_f64(field: &Arc<NumberField>, x: f64) -> Result<Scalar> {
        let q = BigRational::from_float(x).ok_or_else(|| Error::Parse(format!("non-finite value {x}")))?;
        Ok(Scalar::from_rational(field, q))
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    /// Rational power-basis coordinates.
    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num.iter().map(|c| BigRational::new(c.clone(), self.den.clone())).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    /// `Some(q)` when the element lies in the rational subfield.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.num.iter().skip(1).all(Zero::is_zero) {
            Some(BigRational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    fn same_field(&self, other: &Scalar) -> bool {
        Arc::ptr_eq(&self.field, &other.field) || *self.field == *other.field
    }

    fn check_field(&self, other: &Scalar) -> Result<()> {
        if self.same_field(other) {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar> {
        self.check_field(other)?;
        let num = if self.den == other.den {
            self.num.iter().zip(&other.num).map(|(a, b)| a + b).collect()
        } else {
            self.num.iter().zip(&other.num).map(|(a, b)| a * &other.den + b * &self.den).collect()
        };
        let den = if self.den == other.den { self.den.clone() } else { &self.den * &other.den };
        Ok(Scalar::normalized(self.field.clone(), num, den))
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar> {
        self.check_field(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Scalar::zero(&self.field));
        }
        let d = self.field.degree();
        let mut prod = vec![BigInt::zero(); 2 * d - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.num.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        self.field.reduce(&mut prod);
        Ok(Scalar::normalized(self.field.clone(), prod, &self.den * &other.den))
    }

    /// Multiplicative inverse via the extended Euclidean algorithm over `Q[x]`.
    pub fn try_inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let d = self.field.degree();
        if d == 1 {
            let q = BigRational::new(self.den.clone(), self.num[0].clone());
            return Ok(Scalar::from_rational(&self.field, q));
        }
        let f: Vec<BigRational> =
            self.field.min_poly().iter().map(|c| BigRational::from_integer(c.clone())).collect();
        let mut a: Vec<BigRational> = self.num.iter().map(|c| BigRational::from_integer(c.clone())).collect();
        while a.last().is_some_and(Zero::is_zero) {
            a.pop();
        }
        // Invariant: s_i * a ≡ r_i (mod f).
        let (mut r0, mut r1) = (f, a);
        let (mut s0, mut s1): (Vec<BigRational>, Vec<BigRational>) = (vec![], vec![BigRational::one()]);
        while r1.len() > 1 {
            let (q, r) = poly_divmod(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r1 is a nonzero constant because the minimal polynomial is irreducible.
        // (num/den)^-1 = den * num^-1
        let c = r1[0].clone() / BigRational::from_integer(self.den.clone());
        let coeffs: Vec<BigRational> = s1.iter().map(|x| x / &c).collect();
        // s1 may exceed degree d-1 only transiently; reduce modulo f.
        let reduced = poly_rem(&coeffs, &self.field.min_poly().iter().map(|c| BigRational::from_integer(c.clone())).collect::<Vec<_>>());
        Scalar::from_coeffs(&self.field, &reduced)
    }

    pub fn try_div(&self, other: &Scalar) -> Result<Scalar> {
        self.check_field(other)?;
        self.try_mul(&other.try_inv()?)
    }

    pub fn arith(&self, other: &Scalar, op: ArithOp) -> Result<Scalar> {
        match op {
            ArithOp::Add => self.try_add(other),
            ArithOp::Sub => self.try_sub(other),
            ArithOp::Mul => self.try_mul(other),
            ArithOp::Div => self.try_div(other),
        }
    }

    pub fn square(&self) -> Scalar {
        self * self
    }

    /// Multiplication by a rational constant, without touching the field structure.
    pub fn scale_ratio(&self, n: i64, d: i64) -> Scalar {
        let num = self.num.iter().map(|c| c * n).collect();
        Scalar::normalized(self.field.clone(), num, &self.den * d)
    }

    /// Floating approximation (correct to a few ulps when coefficients are moderate).
    pub fn to_f64(&self) -> f64 {
        let (v, _) = self.approx();
        v
    }

    /// Approximate value with an absolute error bound, or `None` on overflow.
    fn approx(&self) -> (f64, f64) {
        let theta = self.field.generator_f64();
        let den = self.den.to_f64().unwrap_or(f64::INFINITY);
        let mut sum = 0.0f64;
        let mut mag = 0.0f64;
        let mut pow = 1.0f64;
        for c in &self.num {
            let cf = c.to_f64().unwrap_or(f64::INFINITY);
            let term = cf * pow;
            sum += term;
            mag += term.abs();
            pow *= theta;
        }
        if !den.is_finite() || !mag.is_finite() || den == 0.0 {
            let q = self.coeffs();
            let v: f64 = q.iter().enumerate().map(|(i, c)| rational_to_f64(c) * theta.powi(i as i32)).sum();
            return (v, f64::INFINITY);
        }
        (sum / den, mag / den * 1e-12 + f64::MIN_POSITIVE)
    }

    /// Sign under the designated real embedding: `-1`, `0` or `1`.
    ///
    /// Uses a floating filter first, then exact interval evaluation over a
    /// successively refined rational enclosure of the generator.
    pub fn sign(&self) -> i32 {
        if self.is_zero() {
            return 0;
        }
        let (v, err) = self.approx();
        if v.abs() > err {
            return if v > 0.0 { 1 } else { -1 };
        }
        self.exact_sign()
    }

    fn exact_sign(&self) -> i32 {
        if self.field.degree() == 1 {
            return if self.num[0].is_positive() { 1 } else { -1 };
        }
        let mut bits = 64;
        loop {
            let (lo, hi) = self.field.root_interval_bits(bits);
            let (vlo, vhi) = eval_interval(&self.num, &lo, &hi);
            if vlo.is_positive() {
                return 1;
            }
            if vhi.is_negative() {
                return -1;
            }
            bits *= 2;
        }
    }

    /// Outward-rounded floating enclosure of the value, from a rational
    /// enclosure of the generator of width `2^-bits`.
    pub fn enclose(&self, bits: u64) -> (f64, f64) {
        let (lo, hi) = if self.field.degree() == 1 {
            let q = BigRational::new(self.num[0].clone(), self.den.clone());
            (q.clone(), q)
        } else {
            let (rlo, rhi) = self.field.root_interval_bits(bits);
            let (a, b) = eval_interval(&self.num, &rlo, &rhi);
            let d = BigRational::from_integer(self.den.clone());
            (a / &d, b / d)
        };
        let (l, h) = (rational_to_f64(&lo), rational_to_f64(&hi));
        let pad = |x: f64| x.abs() * 4.0 * f64::EPSILON + f64::MIN_POSITIVE;
        (l - pad(l), h + pad(h))
    }

    /// Order of the real embeddings.
    pub fn cmp_value(&self, other: &Scalar) -> Ordering {
        match (self - other).sign() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }

    pub fn abs(&self) -> Scalar {
        if self.sign() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.sign() < 0
    }

    /// Compares with a rational given as `f64` (exactly converted).
    pub fn cmp_f64(&self, x: f64) -> Ordering {
        let q = Scalar::from_f64(&self.field, x).expect("finite comparison bound");
        self.cmp_value(&q)
    }
}

/// Interval evaluation of `Σ num_i x^i` over `x ∈ [lo, hi]`, exact in rationals.
fn eval_interval(num: &[BigInt], lo: &BigRational, hi: &BigRational) -> (BigRational, BigRational) {
    let mut acc_lo = BigRational::zero();
    let mut acc_hi = BigRational::zero();
    for c in num.iter().rev() {
        let cands = [&acc_lo * lo, &acc_lo * hi, &acc_hi * lo, &acc_hi * hi];
        let mut mn = cands[0].clone();
        let mut mx = cands[0].clone();
        for v in &cands[1..] {
            if *v < mn {
                mn = v.clone();
            }
            if *v > mx {
                mx = v.clone();
            }
        }
        let cq = BigRational::from_integer(c.clone());
        acc_lo = mn + &cq;
        acc_hi = mx + cq;
    }
    (acc_lo, acc_hi)
}

fn poly_trim(p: &mut Vec<BigRational>) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn poly_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let db = b.len() - 1;
    if r.len() <= db {
        return (vec![], r);
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    let lead = b.last().unwrap();
    while r.len() > db && !r.is_empty() {
        let shift = r.len() - 1 - db;
        let c = r.last().unwrap() / lead;
        for (i, bc) in b.iter().enumerate() {
            r[shift + i] -= &c * bc;
        }
        q[shift] = c;
        r.pop();
        poly_trim(&mut r);
    }
    (q, r)
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    poly_trim(&mut out);
    out
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut out: Vec<BigRational> = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
            let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
            x - y
        })
        .collect();
    poly_trim(&mut out);
    out
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.den == other.den && self.num == other.num
    }
}

impl Eq for Scalar {}

impl Hash for Scalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.num.hash(state);
        self.den.hash(state);
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        self.den.cmp(&other.den).then_with(|| self.num.cmp(&other.num))
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            parts.push(match i {
                0 => c.to_string(),
                1 => format!("{c}θ"),
                _ => format!("{c}θ^{i}"),
            });
        }
        let body = if parts.is_empty() { "0".to_string() } else { parts.join(" + ") };
        if self.den.is_one() {
            write!(f, "{body}")
        } else {
            write!(f, "({body})/{}", self.den)
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $try:ident) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.$try(rhs).expect("scalar operands from different fields")
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { field: self.field.clone(), num: self.num.iter().map(|c| -c).collect(), den: self.den.clone() }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qsqrt5() -> Arc<NumberField> {
        Arc::new(NumberField::real_quadratic(5).unwrap())
    }

    #[test]
    fn sqrt5_squared_is_five() {
        let f = qsqrt5();
        let r5 = Scalar::generator(&f);
        assert_eq!(&r5 * &r5, Scalar::from_int(&f, 5));
    }

    #[test]
    fn golden_ratio_identities() {
        let f = qsqrt5();
        let tau = (Scalar::one(&f) + Scalar::generator(&f)).scale_ratio(1, 2);
        assert_eq!(&tau * &tau, &tau + Scalar::one(&f));
        assert_eq!(tau.try_inv().unwrap(), &tau - Scalar::one(&f));
    }

    #[test]
    fn signs_against_bisection() {
        let f = qsqrt5();
        let r5 = Scalar::generator(&f);
        let tau = (Scalar::one(&f) + &r5).scale_ratio(1, 2);
        assert_eq!(Scalar::zero(&f).sign(), 0);
        assert_eq!((Scalar::from_int(&f, 2) - &r5).sign(), -1);
        assert_eq!((&tau - Scalar::one(&f)).sign(), 1);
    }

    #[test]
    fn exact_sign_below_float_resolution() {
        // Even-index continued-fraction convergent of √5: p² - 5q² = -1, so p/q < √5
        // by about 7e-19, well below what the float filter can certify.
        let f = qsqrt5();
        let x = Scalar::generator(&f) - Scalar::from_ratio(&f, 1_268_860_318, 567_451_585);
        assert_eq!(x.exact_sign(), 1);
        assert_eq!(x.sign(), 1);
        assert_eq!((-x).sign(), -1);
    }

    #[test]
    fn division_by_zero_errors() {
        let f = qsqrt5();
        assert!(matches!(Scalar::one(&f).try_div(&Scalar::zero(&f)), Err(Error::DivisionByZero)));
    }

    #[test]
    fn field_mismatch_errors() {
        let a = Scalar::one(&qsqrt5());
        let g = Arc::new(NumberField::real_quadratic(2).unwrap());
        let b = Scalar::one(&g);
        assert!(matches!(a.try_add(&b), Err(Error::FieldMismatch)));
    }

    #[test]
    fn inverse_in_quartic_field() {
        let f = Arc::new(
            NumberField::new(
                [80, 0, -20, 0, 1].iter().map(|&x| BigInt::from(x)).collect(),
                BigRational::from_integer(2.into()),
                BigRational::from_integer(3.into()),
            )
            .unwrap(),
        );
        let t = Scalar::generator(&f);
        let x = &t * &t - Scalar::from_int(&f, 3) + &t;
        let y = x.try_inv().unwrap();
        assert_eq!(&x * &y, Scalar::one(&f));
    }
}
