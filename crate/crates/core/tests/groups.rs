use std::sync::Arc;

use num_bigint::BigInt;
use proptest::prelude::*;
use tilesys::groups::{expected_group, subgroup_relation, RotationSubgroup, SubgroupRelation, UnitRotation};
use tilesys::systems::{make_penrose, penrose_field};
use tilesys::{NumberField, Rotation, Scalar};

fn q() -> Arc<NumberField> {
    Arc::new(NumberField::rationals())
}

fn i_rot() -> UnitRotation {
    UnitRotation::from_ratio((0, 1), (1, 1)).unwrap()
}

fn u() -> UnitRotation {
    UnitRotation::from_ratio((3, 5), (4, 5)).unwrap()
}

fn v() -> UnitRotation {
    UnitRotation::from_ratio((5, 13), (12, 13)).unwrap()
}

/// `i^t · u^a · v^b`.
fn word(t: i64, a: i64, b: i64) -> UnitRotation {
    let r = Rotation::quarter_turns(&q(), t.rem_euclid(4) as i32)
        .compose(&u().rotation().pow(a))
        .compose(&v().rotation().pow(b));
    UnitRotation::new(r)
}

fn group(gens: Vec<UnitRotation>) -> RotationSubgroup {
    RotationSubgroup::from_generators(gens).unwrap()
}

/// `t^a · Π f_i^{b_i}` from a membership witness.
fn rebuild(g: &RotationSubgroup, a: i64, free: &[BigInt]) -> Rotation {
    let mut acc = g.torsion_generator().rotation().pow(a);
    for (f, e) in g.free_basis().iter().zip(free) {
        acc = acc.compose(&f.rotation().pow(i64::try_from(e.clone()).unwrap()));
    }
    acc
}

fn zeta10() -> UnitRotation {
    let f = Arc::new(penrose_field());
    let sys = make_penrose();
    // The rotation by 2π/10 is the rotational part of some child pose of the Penrose rule.
    let rot = sys
        .rule
        .children
        .iter()
        .flatten()
        .map(|c| UnitRotation::new(c.pose.rot.clone()))
        .find(|r| r.order() == Some(10))
        .unwrap_or_else(|| {
            let c = Scalar::generator(&f);
            UnitRotation::new(Rotation::new(c.clone(), c).unwrap())
        });
    assert_eq!(rot.order(), Some(10));
    rot
}

#[test]
fn generator_examples() {
    assert_eq!(group(vec![i_rot()]).abstract_type(), (4, 0));
    assert_eq!(group(vec![i_rot(), u()]).abstract_type(), (4, 1));
    assert_eq!(group(vec![zeta10()]).abstract_type(), (10, 0));
    assert_eq!(group(vec![UnitRotation::from_ratio((-7, 25), (24, 25)).unwrap(), i_rot()]).abstract_type(), (4, 1));
}

#[test]
fn membership_of_seven_twenty_four() {
    let g = group(vec![i_rot(), u()]);
    let r = UnitRotation::from_ratio((7, 25), (24, 25)).unwrap();
    let m = g.member(&r).unwrap();
    assert!(m.member);
    let a = m.torsion_exponent.unwrap();
    assert_eq!(rebuild(&g, a, &m.free_exponents), *r.rotation());
    // In the basis {i, u} the witness is i² · u⁻².
    if *g.free_basis()[0].rotation() == *u().rotation() {
        assert_eq!((a, m.free_exponents[0].clone()), (2, BigInt::from(-2)));
    }
    assert_eq!(*word(2, -2, 0).rotation(), *r.rotation());
}

#[test]
fn odd_exponent_is_not_a_member() {
    let g = group(vec![i_rot(), UnitRotation::from_ratio((7, 25), (24, 25)).unwrap()]);
    let m = g.member(&u()).unwrap();
    assert!(!m.member);
    assert!(m.obstruction.is_some());
}

#[test]
fn identity_is_a_member_with_zero_exponents() {
    let g = group(vec![i_rot(), u()]);
    let m = g.member(&word(0, 0, 0)).unwrap();
    assert!(m.member);
    assert_eq!(m.torsion_exponent, Some(0));
    assert!(m.free_exponents.iter().all(|e| *e == BigInt::from(0)));
}

#[test]
fn catalog_relations() {
    let g12 = expected_group("pinwheel:1,2").unwrap();
    let g34 = expected_group("pinwheel:3,4").unwrap();
    assert_eq!(subgroup_relation(&g12, &g34).unwrap(), SubgroupRelation::Index { n: 2, inner: "second".into() });
    assert_eq!(subgroup_relation(&g34, &g12).unwrap(), SubgroupRelation::Index { n: 2, inner: "first".into() });
    assert_eq!(subgroup_relation(&g12, &g12).unwrap(), SubgroupRelation::Equal);
    let z10 = group(vec![zeta10()]);
    assert_eq!(subgroup_relation(&z10, &g12).unwrap(), SubgroupRelation::Incomparable);
    assert!(!g12.member(&zeta10()).unwrap().member);
    assert!(!z10.member(&i_rot()).unwrap().member);
}

#[test]
fn g_rel_descriptors() {
    use tilesys::groups::GRel;
    assert_eq!(group(vec![zeta10()]).g_rel(), GRel::Cyclic { k: 10 });
    assert_eq!(expected_group("pinwheel:1,2").unwrap().g_rel(), GRel::FullCircle);
    assert_eq!(group(vec![]).g_rel(), GRel::Cyclic { k: 1 });
}

#[test]
fn mixed_classes_are_rejected() {
    let err = RotationSubgroup::from_generators(vec![zeta10(), u()]);
    assert!(matches!(err, Err(tilesys::Error::UnsupportedClass(_))));
}

/// Index of the row lattice of `m` in `Z^n`, as the gcd of the maximal minors (0 if rank deficient).
fn lattice_index(m: &[[i64; 3]]) -> i64 {
    fn det(a: [i64; 3], b: [i64; 3], c: [i64; 3]) -> i64 {
        a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0])
    }
    fn gcd(a: i64, b: i64) -> i64 {
        if b == 0 { a.abs() } else { gcd(b, a % b) }
    }
    let mut g = 0;
    for x in 0..m.len() {
        for y in x + 1..m.len() {
            for z in y + 1..m.len() {
                g = gcd(g, det(m[x], m[y], m[z]));
            }
        }
    }
    g
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn membership_witness_rebuilds(t in 0i64..4, a in -4i64..5, b in -3i64..4) {
        let g = group(vec![i_rot(), u(), v()]);
        let r = word(t, a, b);
        let m = g.member(&r).unwrap();
        prop_assert!(m.member);
        prop_assert_eq!(rebuild(&g, m.torsion_exponent.unwrap(), &m.free_exponents), r.rotation().clone());
    }

    #[test]
    fn membership_is_closed_under_products(
        gens in prop::collection::vec((0i64..4, -2i64..3, -2i64..3), 1..3),
        x in prop::collection::vec(-2i64..3, 2),
    ) {
        let g = group(gens.iter().map(|&(t, a, b)| word(t, a, b)).collect());
        let e0 = g.generators()[0].rotation().pow(x[0]);
        let e1 = g.generators()[gens.len() - 1].rotation().pow(x[1]);
        let m0 = g.member(&UnitRotation::new(e0.clone())).unwrap();
        let m1 = g.member(&UnitRotation::new(e1.clone())).unwrap();
        let m01 = g.member(&UnitRotation::new(e0.compose(&e1))).unwrap();
        prop_assert!(m0.member && m1.member && m01.member);
        let sum: Vec<BigInt> = m0.free_exponents.iter().zip(&m1.free_exponents).map(|(p, q)| p + q).collect();
        prop_assert_eq!(&m01.free_exponents, &sum);
        let k = g.torsion_order() as i64;
        prop_assert_eq!(m01.torsion_exponent.unwrap().rem_euclid(k), (m0.torsion_exponent.unwrap() + m1.torsion_exponent.unwrap()).rem_euclid(k));
    }

    #[test]
    fn index_matches_lattice_oracle(gens in prop::collection::vec((0i64..4, -3i64..4, -3i64..4), 1..4)) {
        let full = group(vec![i_rot(), u(), v()]);
        let sub = group(gens.iter().map(|&(t, a, b)| word(t, a, b)).collect());
        let mut rows: Vec<[i64; 3]> = gens.iter().map(|&(t, a, b)| [t, a, b]).collect();
        rows.push([4, 0, 0]);
        let n = lattice_index(&rows);
        let rel = subgroup_relation(&full, &sub).unwrap();
        match n {
            0 => prop_assert_eq!(rel, SubgroupRelation::InfiniteIndex { inner: "second".into() }),
            1 => prop_assert_eq!(rel, SubgroupRelation::Equal),
            n => prop_assert_eq!(rel, SubgroupRelation::Index { n: n as u64, inner: "second".into() }),
        }
    }

    #[test]
    fn relation_is_antisymmetric_and_transitive(
        a in prop::collection::vec((0i64..4, -2i64..3, -2i64..3), 1..3),
        extra in (0i64..4, -2i64..3, -2i64..3),
        more in (0i64..4, -2i64..3, -2i64..3),
    ) {
        let ga: Vec<UnitRotation> = a.iter().map(|&(t, x, y)| word(t, x, y)).collect();
        let mut gb = ga.clone();
        gb.push(word(extra.0, extra.1, extra.2));
        let mut gc = gb.clone();
        gc.push(word(more.0, more.1, more.2));
        let (ha, hb, hc) = (group(ga), group(gb), group(gc));
        prop_assert!(hb.contains(&ha).unwrap() && hc.contains(&hb).unwrap() && hc.contains(&ha).unwrap());
        let ab = subgroup_relation(&ha, &hb).unwrap();
        let ba = subgroup_relation(&hb, &ha).unwrap();
        let flip = |r: &SubgroupRelation| match r {
            SubgroupRelation::Index { n, inner } => SubgroupRelation::Index { n: *n, inner: if inner == "first" { "second".into() } else { "first".into() } },
            SubgroupRelation::InfiniteIndex { inner } => SubgroupRelation::InfiniteIndex { inner: if inner == "first" { "second".into() } else { "first".into() } },
            other => other.clone(),
        };
        prop_assert_eq!(flip(&ab), ba);
        if let (SubgroupRelation::Index { n: n1, .. }, SubgroupRelation::Index { n: n2, .. }) =
            (&ab, &subgroup_relation(&hb, &hc).unwrap())
        {
            prop_assert_eq!(subgroup_relation(&ha, &hc).unwrap(), SubgroupRelation::Index { n: n1 * n2, inner: "first".into() });
        }
    }
}
