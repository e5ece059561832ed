use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::UnitRotation;
use crate::error::{Error, Result};

/// Gaussian integer `re + im·i`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Gi {
    re: BigInt,
    im: BigInt,
}

impl Gi {
    fn new(re: BigInt, im: BigInt) -> Gi {
        Gi { re, im }
    }

    fn mul(&self, o: &Gi) -> Gi {
        Gi::new(&self.re * &o.re - &self.im * &o.im, &self.re * &o.im + &self.im * &o.re)
    }

    fn conj(&self) -> Gi {
        Gi::new(self.re.clone(), -&self.im)
    }

    fn pow(&self, e: u64) -> Gi {
        let mut acc = Gi::new(BigInt::one(), BigInt::zero());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// `self / d` when exact.
    fn div_exact(&self, d: &Gi) -> Option<Gi> {
        let n = &d.re * &d.re + &d.im * &d.im;
        let p = self.mul(&d.conj());
        if (&p.re % &n).is_zero() && (&p.im % &n).is_zero() {
            Some(Gi::new(&p.re / &n, &p.im / &n))
        } else {
            None
        }
    }
}

/// `z = i^t · Π_p (π_p / π̄_p)^{k_p}` with `π_p = a + bi`, `a > b > 0`, `a² + b² = p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussianExponents {
    pub t: u8,
    pub k: BTreeMap<BigInt, BigInt>,
}

impl GaussianExponents {
    /// `(k_p for p in primes…, t)`.
    pub fn dense(&self, primes: &[BigInt]) -> Vec<BigInt> {
        let mut v = super::exponent_map(&self.k, primes);
        v.push(BigInt::from(self.t));
        v
    }
}

/// Largest value trial division will reach before giving up.
const TRIAL_LIMIT: u64 = 10_000_000;

fn factor(n: &BigInt) -> Result<Vec<BigInt>> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        if p > BigInt::from(TRIAL_LIMIT) {
            return Err(Error::ResourceLimit(format!("cannot factor {n} by trial division")));
        }
        if (&n % &p).is_zero() {
            out.push(p.clone());
            while (&n % &p).is_zero() {
                n /= &p;
            }
        }
        p += 1;
    }
    if n > BigInt::one() {
        out.push(n);
    }
    Ok(out)
}

/// The canonical Gaussian prime over a split prime `p ≡ 1 (mod 4)`.
fn split(p: &BigInt) -> Gi {
    let mut b = BigInt::one();
    loop {
        let a2 = p - &b * &b;
        let a = a2.sqrt();
        if &a * &a == a2 {
            return if a > b { Gi::new(a, b) } else { Gi::new(b, a) };
        }
        b += 1;
    }
}

/// Exponent vector of the Gaussian-rational unit `c + is`.
pub fn gaussian_exponents((c, s): &(BigRational, BigRational)) -> Result<GaussianExponents> {
    if c * c + s * s != BigRational::one() {
        return Err(Error::InvalidRotation);
    }
    let d = c.denom().lcm(s.denom());
    let n = Gi::new(c.numer() * (&d / c.denom()), s.numer() * (&d / s.denom()));
    let mut k = BTreeMap::new();
    // w accumulates z · Π (π/π̄)^{-k_p} as num / den.
    let mut num = n.clone();
    let mut den = d.clone();
    for p in factor(&d)? {
        if !(&p % 4u32 == BigInt::one()) {
            continue;
        }
        let pi = split(&p);
        let (mut x, mut vp) = (n.clone(), 0i64);
        while let Some(q) = x.div_exact(&pi) {
            x = q;
            vp += 1;
        }
        let (mut y, mut vq) = (n.clone(), 0i64);
        while let Some(q) = y.div_exact(&pi.conj()) {
            y = q;
            vq += 1;
        }
        let kp = (vp - vq) / 2;
        if kp != 0 {
            let f = if kp > 0 { pi.conj() } else { pi.clone() };
            num = num.mul(&f.pow(2 * kp.unsigned_abs()));
            den *= p.pow(kp.unsigned_abs() as u32);
            k.insert(p, BigInt::from(kp));
        }
    }
    let g = num.re.gcd(&num.im).gcd(&den);
    let (re, im, den) = (&num.re / &g, &num.im / &g, &den / &g);
    let t = match (re.to_i64(), im.to_i64(), den.to_i64()) {
        (Some(1), Some(0), Some(1)) => 0,
        (Some(0), Some(1), Some(1)) => 1,
        (Some(-1), Some(0), Some(1)) => 2,
        (Some(0), Some(-1), Some(1)) => 3,
        _ => return Err(Error::Inconsistent("residual of the factorization is not a unit".into())),
    };
    Ok(GaussianExponents { t, k })
}

/// Rebuilds the rotation with exponent vector `(k_p…, t)`.
pub(super) fn unit_from_dense(primes: &[BigInt], row: &[BigInt]) -> UnitRotation {
    let mut num = Gi::new(BigInt::one(), BigInt::zero());
    let mut den = BigInt::one();
    for (p, e) in primes.iter().zip(row) {
        let pi = split(p);
        let e = e.to_i64().expect("small exponent");
        let f = if e > 0 { pi } else { pi.conj() };
        num = num.mul(&f.pow(2 * e.unsigned_abs()));
        den *= p.pow(e.unsigned_abs() as u32);
    }
    let t = row.last().expect("t column").mod_floor(&BigInt::from(4)).to_u64().expect("small");
    num = num.mul(&Gi::new(BigInt::zero(), BigInt::one()).pow(t));
    UnitRotation::from_rational(BigRational::new(num.re, den.clone()), BigRational::new(num.im, den))
        .expect("unit modulus by construction")
}

/// `(a+bi)/d` in lowest terms.
pub(super) fn format_unit(c: &BigRational, s: &BigRational) -> String {
    let d = c.denom().lcm(s.denom());
    let a = c.numer() * (&d / c.denom());
    let b = s.numer() * (&d / s.denom());
    let im = if b.is_negative() { format!("-{}i", -b) } else { format!("+{b}i") };
    if d.is_one() {
        format!("{a}{im}")
    } else {
        format!("({a}{im})/{d}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn three_four_five() {
        let e = gaussian_exponents(&(q(3, 5), q(4, 5))).unwrap();
        assert_eq!(e.t, 0);
        assert_eq!(e.k.get(&BigInt::from(5)), Some(&BigInt::from(1)));
        let e = gaussian_exponents(&(q(7, 25), q(24, 25))).unwrap();
        assert_eq!((e.t, e.k[&BigInt::from(5)].clone()), (2, BigInt::from(-2)));
    }

    #[test]
    fn units_and_round_trip() {
        assert_eq!(gaussian_exponents(&(q(0, 1), q(-1, 1))).unwrap().t, 3);
        for (c, s) in [(q(-5, 13), q(12, 13)), (q(33, 65), q(-56, 65)), (q(-1, 1), q(0, 1))] {
            let e = gaussian_exponents(&(c.clone(), s.clone())).unwrap();
            let primes: Vec<BigInt> = e.k.keys().cloned().collect();
            let u = unit_from_dense(&primes, &e.dense(&primes));
            assert_eq!(u.rational(), Some(&(c, s)));
        }
    }

    #[test]
    fn formatting() {
        assert_eq!(format_unit(&q(3, 5), &q(-4, 5)), "(3-4i)/5");
        assert_eq!(format_unit(&q(0, 1), &q(1, 1)), "0+1i");
    }
}
