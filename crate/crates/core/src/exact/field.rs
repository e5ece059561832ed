use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Bits of precision kept in the stored isolating interval of the generator.
const STORED_ROOT_BITS: u64 = 120;

/// A real number field `Q(θ)` given by the monic minimal polynomial of `θ`
/// together with a rational isolating interval that pins down which real
/// root is meant.
#[derive(Clone)]
pub struct NumberField {
    /// Integer coefficients, lowest degree first. Monic.
    min_poly: Vec<BigInt>,
    root_lo: BigRational,
    root_hi: BigRational,
    root_f64: f64,
    irreducible_checked: bool,
}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NumberField")
            .field("min_poly", &self.min_poly.iter().map(|c| c.to_string()).collect::<Vec<_>>())
            .field("root", &self.root_f64)
            .finish()
    }
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.min_poly == other.min_poly
            && self.root_lo <= other.root_hi
            && other.root_lo <= self.root_hi
    }
}

impl Eq for NumberField {}

impl NumberField {
    /// Builds `Q(θ)` where `θ` is the unique root of `min_poly` in `(lo, hi]`.
    pub fn new(min_poly: Vec<BigInt>, lo: BigRational, hi: BigRational) -> Result<Self> {
        let mut poly = min_poly;
        while poly.len() > 1 && poly.last().is_some_and(Zero::is_zero) {
            poly.pop();
        }
        if poly.len() < 2 {
            return Err(Error::InvalidField("minimal polynomial must have degree >= 1".into()));
        }
        if !poly.last().unwrap().is_one() {
            return Err(Error::InvalidField("minimal polynomial must be monic".into()));
        }
        if lo > hi {
            return Err(Error::InvalidField("empty embedding interval".into()));
        }
        // A degenerate interval pins an exact rational root.
        let roots = if lo == hi { usize::from(eval_rational(&poly, &hi).is_zero()) } else { sturm_count(&poly, &lo, &hi) };
        if roots != 1 {
            return Err(Error::InvalidField(format!(
                "embedding interval contains {roots} roots, expected exactly 1"
            )));
        }
        let irreducible_checked = match check_irreducible(&poly) {
            Some(false) => {
                return Err(Error::InvalidField("minimal polynomial is reducible".into()));
            }
            Some(true) => true,
            None => false,
        };
        let (root_lo, root_hi) = refine_root(&poly, lo, hi, STORED_ROOT_BITS);
        let mid = (&root_lo + &root_hi) / BigInt::from(2);
        let root_f64 = rational_to_f64(&mid);
        Ok(NumberField { min_poly: poly, root_lo, root_hi, root_f64, irreducible_checked })
    }

    /// A shared handle, reusing an earlier equal field so that later field checks hit the
    /// pointer-equality fast path.
    pub fn interned(self) -> Arc<NumberField> {
        static TABLE: OnceLock<Mutex<Vec<Arc<NumberField>>>> = OnceLock::new();
        let mut table = TABLE.get_or_init(Default::default).lock().unwrap_or_else(|e| e.into_inner());
        // Identical representation, not mere equality, so serialized intervals are preserved.
        let same = |f: &NumberField| f.min_poly == self.min_poly && f.root_lo == self.root_lo && f.root_hi == self.root_hi;
        if let Some(f) = table.iter().find(|f| same(f)) {
            return f.clone();
        }
        let f = Arc::new(self);
        table.push(f.clone());
        f
    }

    /// The rational numbers, presented as `Q(θ)` with `θ = 0`.
    pub fn rationals() -> Self {
        NumberField::new(
            vec![BigInt::zero(), BigInt::one()],
            BigRational::from_integer(BigInt::from(-1)),
            BigRational::from_integer(BigInt::one()),
        )
        .expect("x is a valid minimal polynomial")
    }

    /// `Q(√d)` with the positive square root. `d` must not be a perfect square.
    pub fn real_quadratic(d: u64) -> Result<Self> {
        let r = d.isqrt();
        if r * r == d {
            return Err(Error::InvalidField(format!("{d} is a perfect square")));
        }
        NumberField::new(
            vec![BigInt::from(-(d as i128)), BigInt::zero(), BigInt::one()],
            BigRational::from_integer(BigInt::from(r)),
            BigRational::from_integer(BigInt::from(r + 1)),
        )
    }

    pub fn degree(&self) -> usize {
        self.min_poly.len() - 1
    }

    pub fn min_poly(&self) -> &[BigInt] {
        &self.min_poly
    }

    /// Stored isolating interval of the generator.
    pub fn root_interval(&self) -> (&BigRational, &BigRational) {
        (&self.root_lo, &self.root_hi)
    }

    pub fn generator_f64(&self) -> f64 {
        self.root_f64
    }

    /// Whether irreducibility of the minimal polynomial was verified (degree <= 4).
    pub fn irreducibility_verified(&self) -> bool {
        self.irreducible_checked
    }

    /// Reduces an integer polynomial modulo the (monic) minimal polynomial in place.
    pub(crate) fn reduce(&self, coeffs: &mut Vec<BigInt>) {
        let d = self.degree();
        while coeffs.len() > d {
            let top = coeffs.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let shift = coeffs.len() - d;
            for i in 0..d {
                let c = &self.min_poly[i];
                if !c.is_zero() {
                    coeffs[shift + i] -= &top * c;
                }
            }
        }
        coeffs.resize(d, BigInt::zero());
    }

    /// Interval containing `θ` of width at most `2^-bits`.
    pub(crate) fn root_interval_bits(&self, bits: u64) -> (BigRational, BigRational) {
        if bits <= STORED_ROOT_BITS {
            (self.root_lo.clone(), self.root_hi.clone())
        } else {
            refine_root(&self.min_poly, self.root_lo.clone(), self.root_hi.clone(), bits)
        }
    }
}

pub(crate) fn rational_to_f64(q: &BigRational) -> f64 {
    // Scale to keep both parts inside f64 range before dividing.
    let n = q.numer();
    let d = q.denom();
    match (n.to_f64(), d.to_f64()) {
        (Some(a), Some(b)) if a.is_finite() && b.is_finite() && b != 0.0 => a / b,
        _ => {
            let shift = (n.bits().max(d.bits()) as i64 - 900).max(0) as usize;
            let a = (n >> shift).to_f64().unwrap_or(f64::NAN);
            let b = (d >> shift).to_f64().unwrap_or(f64::NAN);
            a / b
        }
    }
}

fn eval_rational(poly: &[BigInt], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in poly.iter().rev() {
        acc = acc * x + BigRational::from_integer(c.clone());
    }
    acc
}

fn eval_rational_poly(poly: &[BigRational], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in poly.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Bisects `(lo, hi]` until its width is below `2^-bits`, keeping the unique root inside.
fn refine_root(poly: &[BigInt], mut lo: BigRational, mut hi: BigRational, bits: u64) -> (BigRational, BigRational) {
    let target = BigRational::new(BigInt::one(), BigInt::one() << bits);
    let two = BigInt::from(2);
    let mut sign_hi = eval_rational(poly, &hi).signum();
    if sign_hi.is_zero() {
        return (hi.clone(), hi);
    }
    while &hi - &lo > target {
        let mid = (&lo + &hi) / &two;
        let s = eval_rational(poly, &mid).signum();
        if s.is_zero() {
            return (mid.clone(), mid);
        }
        if s == sign_hi {
            hi = mid;
            sign_hi = s;
        } else {
            lo = mid;
        }
    }
    (lo, hi)
}

fn to_rational_poly(poly: &[BigInt]) -> Vec<BigRational> {
    poly.iter().map(|c| BigRational::from_integer(c.clone())).collect()
}

fn trim(p: &mut Vec<BigRational>) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn derivative(p: &[BigRational]) -> Vec<BigRational> {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
        .collect()
}

/// Remainder of polynomial division over Q.
pub(crate) fn poly_rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lead = b.last().unwrap();
    while r.len() > db && !r.is_empty() {
        let shift = r.len() - 1 - db;
        let q = r.last().unwrap() / lead;
        for (i, c) in b.iter().enumerate() {
            r[shift + i] -= &q * c;
        }
        r.pop();
        trim(&mut r);
    }
    r
}

/// Number of distinct real roots of `poly` in `(lo, hi]` by Sturm's theorem.
fn sturm_count(poly: &[BigInt], lo: &BigRational, hi: &BigRational) -> usize {
    let p0 = to_rational_poly(poly);
    let mut chain = vec![p0.clone(), derivative(&p0)];
    loop {
        let n = chain.len();
        let mut r = poly_rem(&chain[n - 2], &chain[n - 1]);
        if r.is_empty() {
            break;
        }
        for c in r.iter_mut() {
            *c = -c.clone();
        }
        chain.push(r);
    }
    let variations = |x: &BigRational| {
        let signs: Vec<i32> = chain
            .iter()
            .map(|p| {
                let v = eval_rational_poly(p, x);
                if v.is_zero() {
                    0
                } else if v.is_positive() {
                    1
                } else {
                    -1
                }
            })
            .filter(|s| *s != 0)
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    };
    variations(lo).saturating_sub(variations(hi))
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut out = Vec::new();
    if n.is_zero() {
        return out;
    }
    let mut i = BigInt::one();
    while &i * &i <= n {
        if (&n % &i).is_zero() {
            out.push(i.clone());
            out.push(-i.clone());
            let j = &n / &i;
            if j != i {
                out.push(j.clone());
                out.push(-j);
            }
        }
        i += 1;
    }
    out
}

/// Exact irreducibility test for monic integer polynomials of degree <= 4.
/// Returns `None` when the degree is out of range.
fn check_irreducible(poly: &[BigInt]) -> Option<bool> {
    let deg = poly.len() - 1;
    if deg == 1 {
        return Some(true);
    }
    if deg > 4 {
        return None;
    }
    // Rational roots of a monic integer polynomial are integer divisors of the constant term.
    if poly[0].is_zero() {
        return Some(false);
    }
    for r in divisors(&poly[0]) {
        let v = eval_rational(poly, &BigRational::from_integer(r));
        if v.is_zero() {
            return Some(false);
        }
    }
    if deg < 4 {
        return Some(true);
    }
    // Quartic: look for (x^2 + a x + b)(x^2 + c x + d) over Z.
    let (s, r, q, p) = (&poly[0], &poly[1], &poly[2], &poly[3]);
    for b in divisors(s) {
        let d = s / &b;
        // a^2 - p a + (q - b - d) = 0
        let disc = p * p - BigInt::from(4) * (q - &b - &d);
        if disc.is_negative() {
            continue;
        }
        let root = disc.sqrt();
        if &root * &root != disc {
            continue;
        }
        for sgn in [1i32, -1] {
            let num = p + &root * BigInt::from(sgn);
            if num.is_even() {
                let a = num / 2;
                let c = p - &a;
                if &a * &d + &b * &c == *r {
                    return Some(false);
                }
            }
        }
    }
    Some(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn quadratic_root_is_positive_sqrt() {
        let f = NumberField::real_quadratic(5).unwrap();
        assert!((f.generator_f64() - 5f64.sqrt()).abs() < 1e-15);
        assert!(f.irreducibility_verified());
    }

    #[test]
    fn rejects_interval_with_two_roots() {
        let err = NumberField::new(ints(&[-5, 0, 1]), q(-3, 1), q(3, 1));
        assert!(err.is_err());
    }

    #[test]
    fn rejects_reducible_quartic() {
        // (x^2 - 2)(x^2 - 3)
        let err = NumberField::new(ints(&[6, 0, -5, 0, 1]), q(1, 1), q(3, 2));
        assert!(matches!(err, Err(Error::InvalidField(_))));
    }

    #[test]
    fn accepts_cyclotomic_real_quartic() {
        let f = NumberField::new(ints(&[80, 0, -20, 0, 1]), q(2, 1), q(3, 1)).unwrap();
        let expected = (10.0 - 2.0 * 5f64.sqrt()).sqrt();
        assert!((f.generator_f64() - expected).abs() < 1e-14);
        assert!(f.irreducibility_verified());
    }

    #[test]
    fn perfect_square_is_rejected() {
        assert!(NumberField::real_quadratic(25).is_err());
    }

    #[test]
    fn reduce_is_mod_min_poly() {
        let f = NumberField::real_quadratic(5).unwrap();
        let mut v = ints(&[1, 2, 3]); // 1 + 2x + 3x^2 = 16 + 2x
        f.reduce(&mut v);
        assert_eq!(v, ints(&[16, 2]));
    }
}
