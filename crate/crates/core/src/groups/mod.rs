//! Finitely generated subgroups of SO(2) with exact membership, comparison and structure.
//!
//! Two arithmetic classes are supported. Rotations with rational `(c, s)` are Gaussian-rational
//! units `z = c + is`; unique factorization in `Z[i]` writes each as `i^t · Π (π_p/π̄_p)^{k_p}`
//! over split primes `p ≡ 1 (mod 4)`, so the group is a lattice in `Z/4 × Z^P`. Rotations of finite
//! order with irrational coordinates form finite cyclic groups and are handled by order
//! arithmetic. Mixing an irrational root of unity with an infinite-order generator is rejected.

mod gaussian;
mod orientation;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{NumberField, Rotation, Scalar};

pub use gaussian::{gaussian_exponents, GaussianExponents};
pub use orientation::{relative_orientation_group, OrientationReport};

/// A rotation with its exact arithmetic classification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitRotation {
    rot: Rotation,
    order: Option<u64>,
    rational: Option<(BigRational, BigRational)>,
}

impl UnitRotation {
    /// Classifies a rotation: its order when finite and its coordinates when rational.
    pub fn new(rot: Rotation) -> UnitRotation {
        let rational = match (rot.cos().as_rational(), rot.sin().as_rational()) {
            (Some(c), Some(s)) => Some((c, s)),
            _ => None,
        };
        let order = match &rational {
            Some((c, s)) => rational_order(c, s),
            None => finite_order(&rot),
        };
        UnitRotation { rot, order, rational }
    }

    /// The Gaussian-rational unit `(c + is)` in the rationals.
    pub fn from_rational(c: BigRational, s: BigRational) -> Result<UnitRotation> {
        let f = NumberField::rationals().interned();
        let rot = Rotation::new(Scalar::from_rational(&f, c), Scalar::from_rational(&f, s))?;
        Ok(UnitRotation::new(rot))
    }

    pub fn from_ratio(c: (i64, i64), s: (i64, i64)) -> Result<UnitRotation> {
        let q = |(n, d): (i64, i64)| BigRational::new(n.into(), d.into());
        UnitRotation::from_rational(q(c), q(s))
    }

    pub fn rotation(&self) -> &Rotation {
        &self.rot
    }

    pub fn order(&self) -> Option<u64> {
        self.order
    }

    pub fn is_rational(&self) -> bool {
        self.rational.is_some()
    }

    pub fn rational(&self) -> Option<&(BigRational, BigRational)> {
        self.rational.as_ref()
    }

    pub fn angle_f64(&self) -> f64 {
        self.rot.angle_f64()
    }
}

impl fmt::Display for UnitRotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.rational {
            Some((c, s)) => write!(f, "{}", gaussian::format_unit(c, s)),
            None => write!(f, "exp({:.12}i)", self.angle_f64()),
        }
    }
}

fn rational_order(c: &BigRational, s: &BigRational) -> Option<u64> {
    if s.is_zero() {
        Some(if c.is_positive() { 1 } else { 2 })
    } else if c.is_zero() {
        Some(4)
    } else {
        None
    }
}

/// Order of a rotation with coordinates in a degree-`d` field; `φ(m) ≤ 2d` forces `m ≤ 8d²`.
fn finite_order(rot: &Rotation) -> Option<u64> {
    let d = rot.cos().field().degree() as u64;
    let bound = 8 * d * d + 8;
    let mut acc = rot.clone();
    for m in 1..=bound {
        if acc.is_identity() {
            return Some(m);
        }
        acc = acc.compose(rot);
    }
    None
}

/// A subgroup of SO(2) in normal form.
#[derive(Debug, Clone)]
pub struct RotationSubgroup {
    generators: Vec<UnitRotation>,
    repr: Repr,
}

#[derive(Debug, Clone)]
enum Repr {
    /// Finite cyclic group with an explicit generator.
    Cyclic { order: u64, generator: Rotation },
    /// Lattice of exponent vectors `(k_p…, t)` over `primes`, in Hermite normal form, with the
    /// relation `(0, …, 0, 4)` included.
    Gaussian { primes: Vec<BigInt>, hnf: Vec<Vec<BigInt>> },
}

impl RotationSubgroup {
    /// The subgroup generated by `gens`.
    pub fn from_generators(gens: Vec<UnitRotation>) -> Result<RotationSubgroup> {
        let all_rational = gens.iter().all(UnitRotation::is_rational);
        if all_rational {
            let vecs: Vec<GaussianExponents> =
                gens.iter().map(|g| gaussian_exponents(g.rational().expect("rational"))).collect::<Result<_>>()?;
            let primes: Vec<BigInt> =
                vecs.iter().flat_map(|v| v.k.keys().cloned()).collect::<BTreeSet<_>>().into_iter().collect();
            let rows = vecs.iter().map(|v| v.dense(&primes)).collect();
            return Ok(RotationSubgroup { generators: gens, repr: Repr::Gaussian { hnf: lattice(rows, primes.len()), primes } });
        }
        if gens.iter().any(|g| g.order.is_none()) {
            return Err(Error::UnsupportedClass(
                "generators mix an irrational root of unity with an infinite-order rotation".into(),
            ));
        }
        let order = gens.iter().map(|g| g.order.expect("finite")).fold(1, |a, b| a.lcm(&b));
        let generator = cyclic_generator(&gens, order)?;
        Ok(RotationSubgroup { generators: gens, repr: Repr::Cyclic { order, generator } })
    }

    pub fn generators(&self) -> &[UnitRotation] {
        &self.generators
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> u64 {
        match &self.repr {
            Repr::Cyclic { order, .. } => *order,
            Repr::Gaussian { hnf, .. } => {
                let g = hnf.last().expect("relation row")[hnf[0].len() - 1].to_u64().expect("divides 4");
                4 / g
            }
        }
    }

    /// Free rank.
    pub fn rank(&self) -> usize {
        match &self.repr {
            Repr::Cyclic { .. } => 0,
            Repr::Gaussian { hnf, .. } => hnf.len() - 1,
        }
    }

    /// `(k, r)` with the group isomorphic to `Z_k ⊕ Z^r`.
    pub fn abstract_type(&self) -> (u64, usize) {
        (self.torsion_order(), self.rank())
    }

    /// A generator of the torsion subgroup.
    pub fn torsion_generator(&self) -> UnitRotation {
        match &self.repr {
            Repr::Cyclic { generator, .. } => UnitRotation::new(generator.clone()),
            Repr::Gaussian { .. } => {
                let k = self.torsion_order() as i32;
                let f = NumberField::rationals().interned();
                UnitRotation::new(Rotation::quarter_turns(&f, 4 / k))
            }
        }
    }

    /// Infinite-order basis elements, independent modulo torsion.
    pub fn free_basis(&self) -> Vec<UnitRotation> {
        match &self.repr {
            Repr::Cyclic { .. } => Vec::new(),
            Repr::Gaussian { primes, hnf } => {
                hnf[..hnf.len() - 1].iter().map(|row| gaussian::unit_from_dense(primes, row)).collect()
            }
        }
    }

    fn is_finite(&self) -> bool {
        self.rank() == 0
    }

    /// Whether `r` lies in the group, with exponents `r = t^a · Π f_i^{b_i}` over
    /// [`torsion_generator`](Self::torsion_generator) and [`free_basis`](Self::free_basis).
    pub fn member(&self, r: &UnitRotation) -> Result<Membership> {
        match (&self.repr, r.rational()) {
            (Repr::Gaussian { primes, hnf }, Some(q)) => {
                let v = gaussian_exponents(q)?;
                if v.k.keys().any(|p| !primes.contains(p)) {
                    return Ok(Membership::no("a prime of the element does not occur in the group"));
                }
                let mut x = v.dense(primes);
                let n = primes.len();
                let mut free = Vec::new();
                for row in &hnf[..hnf.len() - 1] {
                    let c = row.iter().position(|e| !e.is_zero()).expect("pivot");
                    let (q, rem) = x[c].div_rem(&row[c]);
                    if !rem.is_zero() {
                        return Ok(Membership::no("exponent not a multiple of the lattice pivot"));
                    }
                    for (xi, ri) in x.iter_mut().zip(row) {
                        *xi -= &q * ri;
                    }
                    free.push(q);
                }
                if x[..n].iter().any(|e| !e.is_zero()) {
                    return Ok(Membership::no("exponent vector outside the lattice"));
                }
                let g = &hnf.last().expect("relation row")[n];
                let t = x[n].mod_floor(&BigInt::from(4));
                if !(&t % g).is_zero() {
                    return Ok(Membership::no("quarter-turn exponent not in the torsion part"));
                }
                Ok(Membership::yes((&t / g).to_i64().expect("small"), free))
            }
            _ => {
                let Some(m) = r.order else {
                    return Err(Error::UnsupportedClass(
                        "membership of an irrational infinite-order rotation".into(),
                    ));
                };
                let k = self.torsion_order();
                if !k.is_multiple_of(m) {
                    return Ok(Membership::no("order does not divide the torsion order"));
                }
                let t = self.torsion_generator();
                let a = power_index(t.rotation(), r.rotation(), k)
                    .ok_or_else(|| Error::Inconsistent("finite-order element not a power of the generator".into()))?;
                Ok(Membership::yes(a as i64, vec![BigInt::zero(); self.rank()]))
            }
        }
    }

    /// Whether every generator of `other` lies in `self`.
    pub fn contains(&self, other: &RotationSubgroup) -> Result<bool> {
        // SO(2) has one finite subgroup of each order, and a group's finite elements are its torsion.
        if other.is_finite() {
            return Ok(self.torsion_order().is_multiple_of(other.torsion_order()));
        }
        if self.is_finite() {
            return Ok(false);
        }
        for g in &other.generators {
            if !self.member(g)?.member {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `[self : sub]` for a subgroup of equal rank.
    fn index_of(&self, sub: &RotationSubgroup) -> BigInt {
        match (&self.repr, &sub.repr) {
            (Repr::Gaussian { primes: pa, .. }, Repr::Gaussian { primes: pb, .. }) if self.rank() > 0 => {
                let primes: Vec<BigInt> = pa.iter().chain(pb).cloned().collect::<BTreeSet<_>>().into_iter().collect();
                let covol = |g: &RotationSubgroup| -> BigInt {
                    let rows = g
                        .generators
                        .iter()
                        .map(|u| gaussian_exponents(u.rational().expect("rational")).expect("factored").dense(&primes))
                        .collect();
                    lattice(rows, primes.len()).iter().map(|r| r.iter().find(|e| !e.is_zero()).cloned().expect("pivot")).product()
                };
                covol(sub) / covol(self)
            }
            _ => BigInt::from(self.torsion_order() / sub.torsion_order()),
        }
    }

    /// Descriptor of `G_rel`: the closure of the rotations together with all translations.
    pub fn g_rel(&self) -> GRel {
        if self.rank() == 0 {
            GRel::Cyclic { k: self.torsion_order() }
        } else {
            GRel::FullCircle
        }
    }

    pub fn descriptor(&self) -> GroupDescriptor {
        let (k, r) = self.abstract_type();
        GroupDescriptor {
            class: match self.repr {
                Repr::Cyclic { .. } => "cyclic",
                Repr::Gaussian { .. } => "gaussian-rational",
            }
            .into(),
            torsion_order: k,
            rank: r,
            torsion_generator: self.torsion_generator().to_string(),
            free_basis: self.free_basis().iter().map(ToString::to_string).collect(),
            generators: self.generators.len(),
            g_rel: self.g_rel(),
        }
    }
}

/// Smallest `a ≥ 0` with `t^a = r`, searching `a < k`.
fn power_index(t: &Rotation, r: &Rotation, k: u64) -> Option<u64> {
    let (rc, rs) = (r.cos().to_f64(), r.sin().to_f64());
    let mut acc = Rotation::identity(t.cos().field());
    for a in 0..k {
        let (ac, as_) = (acc.cos().to_f64(), acc.sin().to_f64());
        if (ac - rc).abs() < 1e-9 && (as_ - rs).abs() < 1e-9 && same_rotation(&acc, r) {
            return Some(a);
        }
        acc = acc.compose(t);
    }
    None
}

// Rotations from different fields agree when their coordinates do; rationals compare exactly.
fn same_rotation(a: &Rotation, b: &Rotation) -> bool {
    if Arc::ptr_eq(a.cos().field(), b.cos().field()) || a.cos().field() == b.cos().field() {
        return a == b;
    }
    match (a.cos().as_rational(), a.sin().as_rational(), b.cos().as_rational(), b.sin().as_rational()) {
        (Some(ac), Some(as_), Some(bc), Some(bs)) => ac == bc && as_ == bs,
        _ => false,
    }
}

/// An element of order `order` in the cyclic group generated by `gens`.
fn cyclic_generator(gens: &[UnitRotation], order: u64) -> Result<Rotation> {
    let field = gens.first().map(|g| g.rot.cos().field().clone()).unwrap_or_else(|| NumberField::rationals().interned());
    // Combine generators pairwise: for x, y of coprime-reduced orders, x^{a}·y^{b} has the lcm order.
    let mut acc = Rotation::identity(&field);
    let mut acc_order = 1u64;
    for g in gens {
        let m = g.order.expect("finite");
        if acc_order.is_multiple_of(m) {
            continue;
        }
        // Split lcm(acc_order, m) into coprime factors taken from each side.
        let l = acc_order.lcm(&m);
        let (mut a_part, mut b_part) = (1u64, 1u64);
        for (p, e) in factor_u64(l) {
            let pe = p.pow(e);
            if acc_order.is_multiple_of(pe) {
                a_part *= pe;
            } else {
                b_part *= pe;
            }
        }
        let x = acc.pow((acc_order / a_part) as i64);
        let y = g.rot.pow((m / b_part) as i64);
        acc = x.compose(&y);
        acc_order = l;
    }
    if acc_order != order {
        return Err(Error::Inconsistent("cyclic generator has the wrong order".into()));
    }
    Ok(acc)
}

fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Row Hermite normal form of the lattice spanned by `rows` and `(0, …, 0, 4)` in `Z^{n+1}`.
/// Zero rows are dropped; the last row has its pivot in the final column.
fn lattice(mut rows: Vec<Vec<BigInt>>, n: usize) -> Vec<Vec<BigInt>> {
    let mut rel = vec![BigInt::zero(); n + 1];
    rel[n] = BigInt::from(4);
    rows.push(rel);
    let mut out: Vec<Vec<BigInt>> = Vec::new();
    for col in 0..=n {
        // Euclid on the column among the remaining rows.
        loop {
            let mut nz: Vec<usize> = (0..rows.len()).filter(|&i| !rows[i][col].is_zero()).collect();
            if nz.len() <= 1 {
                break;
            }
            nz.sort_by(|&a, &b| rows[a][col].abs().cmp(&rows[b][col].abs()));
            let p = nz[0];
            let piv = rows[p][col].clone();
            let prow = rows[p].clone();
            for &i in &nz[1..] {
                let q = rows[i][col].div_floor(&piv);
                for (x, y) in rows[i].iter_mut().zip(&prow) {
                    *x -= &q * y;
                }
            }
        }
        if let Some(i) = (0..rows.len()).find(|&i| !rows[i][col].is_zero()) {
            let mut r = rows.swap_remove(i);
            if r[col].is_negative() {
                r.iter_mut().for_each(|x| *x = -x.clone());
            }
            out.push(r);
        }
    }
    // Reduce entries above each pivot.
    for i in 0..out.len() {
        let c = out[i].iter().position(|e| !e.is_zero()).expect("pivot");
        let piv = out[i][c].clone();
        let row = out[i].clone();
        for prev in out.iter_mut().take(i) {
            let q = prev[c].div_floor(&piv);
            if !q.is_zero() {
                for (x, y) in prev.iter_mut().zip(&row) {
                    *x -= &q * y;
                }
            }
        }
    }
    out
}

/// Result of a membership query.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Membership {
    pub member: bool,
    /// Exponent of the torsion generator.
    pub torsion_exponent: Option<i64>,
    /// Exponents of the free basis, as decimal strings.
    #[serde(serialize_with = "ser_bigints")]
    pub free_exponents: Vec<BigInt>,
    pub obstruction: Option<String>,
}

fn ser_bigints<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|b| b.to_string()))
}

impl Membership {
    fn yes(a: i64, free: Vec<BigInt>) -> Membership {
        Membership { member: true, torsion_exponent: Some(a), free_exponents: free, obstruction: None }
    }

    fn no(why: &str) -> Membership {
        Membership { member: false, torsion_exponent: None, free_exponents: Vec::new(), obstruction: Some(why.into()) }
    }
}

/// How two subgroups sit relative to each other.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "relation", rename_all = "kebab-case")]
pub enum SubgroupRelation {
    Equal,
    /// The `inner` group (`"first"` or `"second"`) has index `n` in the other.
    Index { n: u64, inner: String },
    InfiniteIndex { inner: String },
    Incomparable,
}

pub fn subgroup_relation(g: &RotationSubgroup, h: &RotationSubgroup) -> Result<SubgroupRelation> {
    let h_in_g = g.contains(h)?;
    let g_in_h = h.contains(g)?;
    let rel = |outer: &RotationSubgroup, inner: &RotationSubgroup, name: &str| {
        if outer.rank() != inner.rank() {
            SubgroupRelation::InfiniteIndex { inner: name.into() }
        } else {
            let n = outer.index_of(inner).to_u64().expect("index fits");
            SubgroupRelation::Index { n, inner: name.into() }
        }
    };
    Ok(match (h_in_g, g_in_h) {
        (true, true) => SubgroupRelation::Equal,
        (true, false) => rel(g, h, "second"),
        (false, true) => rel(h, g, "first"),
        (false, false) => SubgroupRelation::Incomparable,
    })
}

/// Rotational part of `G_rel`; translations are always all of `R²`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "rotations", rename_all = "kebab-case")]
pub enum GRel {
    Cyclic { k: u64 },
    FullCircle,
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupDescriptor {
    pub class: String,
    pub torsion_order: u64,
    pub rank: usize,
    pub torsion_generator: String,
    pub free_basis: Vec<String>,
    pub generators: usize,
    pub g_rel: GRel,
}

/// Groups attached to catalog systems by construction.
pub fn expected_group(name: &str) -> Option<RotationSubgroup> {
    let i = UnitRotation::from_ratio((0, 1), (1, 1)).ok()?;
    let gens = match name {
        "pinwheel:1,2" => vec![i, UnitRotation::from_ratio((3, 5), (4, 5)).ok()?],
        "pinwheel:3,4" => vec![i, UnitRotation::from_ratio((7, 25), (24, 25)).ok()?],
        "penrose" => {
            let f = crate::systems::penrose_field().interned();
            let theta = Scalar::generator(&f);
            let t2 = theta.square();
            // cos 36° = τ/2, sin 36° = θ/4.
            let tau = (Scalar::from_int(&f, 12) - &t2).scale_ratio(1, 4);
            vec![UnitRotation::new(Rotation::new(tau.scale_ratio(1, 2), theta.scale_ratio(1, 4)).ok()?)]
        }
        "square" => vec![i],
        "fibonacci" => Vec::new(),
        _ => return None,
    };
    RotationSubgroup::from_generators(gens).ok()
}

pub(crate) fn exponent_map(k: &BTreeMap<BigInt, BigInt>, primes: &[BigInt]) -> Vec<BigInt> {
    primes.iter().map(|p| k.get(p).cloned().unwrap_or_default()).collect()
}
