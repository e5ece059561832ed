use tilesys::exact::{Point, Rotation, Scalar};
use tilesys::systems::{by_name, catalog, make_fibonacci, make_penrose, make_pinwheel, make_square_grid};
use tilesys::tiling::{supertile, transition_matrix, validate_system, DEFAULT_TILE_CAP};

fn perron(m: &[Vec<u64>]) -> f64 {
    let n = m.len();
    let mut v = vec![1.0; n];
    let mut lam = 0.0;
    for _ in 0..500 {
        let w: Vec<f64> = (0..n).map(|i| (0..n).map(|j| m[i][j] as f64 * v[j]).sum()).collect();
        let norm = w.iter().cloned().fold(0.0, f64::max);
        lam = norm / v.iter().cloned().fold(0.0, f64::max);
        v = w.iter().map(|x| x / norm).collect();
    }
    lam
}

#[test]
fn every_catalog_system_validates() {
    for entry in catalog() {
        let sys = by_name(&entry.name).unwrap();
        let report = validate_system(&sys, 12);
        assert!(report.geometry_errors.is_empty(), "{}: {:?}", entry.name, report.geometry_errors);
        assert!(report.cover_ok(), "{}: {:?}", entry.name, report.cover);
        assert!(report.primitive, "{}", entry.name);
        assert!(report.primitive_power.unwrap() <= entry.prototiles * entry.prototiles);
        assert!(report.parallel_return.iter().all(Option::is_some), "{}: {:?}", entry.name, report.parallel_return);
        let counts: Vec<usize> = sys.rule.children.iter().map(Vec::len).collect();
        assert_eq!(counts, entry.children, "{}", entry.name);
        assert!((sys.lambda_f64() - entry.lambda).abs() < 1e-12);
        assert_eq!(sys.prototiles.len(), entry.prototiles);
    }
}

#[test]
fn perron_eigenvalue_is_area_scaling() {
    for entry in catalog() {
        let sys = by_name(&entry.name).unwrap();
        let expected = sys.measure_factor().to_f64();
        assert!((perron(&transition_matrix(&sys)) - expected).abs() < 1e-9, "{}", entry.name);
    }
}

#[test]
fn deleting_a_child_breaks_the_cover() {
    let mut sys = make_pinwheel(1, 2).unwrap();
    sys.rule.children[0].pop();
    let report = validate_system(&sys, 4);
    assert!(!report.cover[0].area_identity);
    assert!(!report.cover_ok());
}

#[test]
fn fibonacci_matrix_and_lengths() {
    let sys = make_fibonacci();
    assert_eq!(transition_matrix(&sys), vec![vec![0, 1], vec![1, 1]]);
    let ratio = sys.measure(1) * sys.measure(0).try_inv().unwrap();
    assert_eq!(&ratio, sys.lambda());
    let one = Scalar::one(&sys.field);
    assert_eq!(sys.lambda().square(), sys.lambda() + &one);
}

#[test]
fn pinwheel_center_child_is_rotated_by_arctan_half() {
    let sys = make_pinwheel(1, 2).unwrap();
    let f = &sys.field;
    let sqrt5 = Scalar::generator(f);
    let c = Scalar::from_int(f, 2) * sqrt5.try_inv().unwrap();
    let s = sqrt5.try_inv().unwrap();
    let alpha = Rotation::new(c, s).unwrap();
    let found = sys.rule.children.iter().flatten().any(|k| k.pose.rot == alpha);
    assert!(found);
}

#[test]
fn pinwheel_level_two_holds_parallel_copy() {
    let sys = make_pinwheel(1, 2).unwrap();
    for t in 0..2 {
        let p = supertile(&sys, t, 2, DEFAULT_TILE_CAP).unwrap();
        let id = sys.normalize(&sys.identity_tile(t)).pose.rot;
        assert!(p.tiles.iter().any(|x| x.proto == t && sys.normalize(x).pose.rot == id));
    }
}

#[test]
fn supertile_counts_follow_matrix_powers() {
    for sys in [make_penrose(), make_pinwheel(1, 2).unwrap(), make_fibonacci(), make_square_grid()] {
        let m = transition_matrix(&sys);
        let k = m.len();
        for t in 0..k {
            let mut v = vec![0u64; k];
            v[t] = 1;
            for n in 0..=4 {
                let p = supertile(&sys, t, n, DEFAULT_TILE_CAP).unwrap();
                let mut counts = vec![0u64; k];
                for x in &p.tiles {
                    counts[x.proto] += 1;
                }
                assert_eq!(counts, v, "{} T{} level {}", sys.name, t, n);
                let expected = sys.measure_factor();
                let mut scale = Scalar::one(&sys.field);
                for _ in 0..n {
                    scale = scale * &expected;
                }
                assert_eq!(sys.patch_measure(&p), scale * sys.measure(t));
                v = (0..k).map(|i| (0..k).map(|j| m[i][j] * v[j]).sum()).collect();
            }
        }
    }
}

#[test]
fn pinwheel_three_four_has_lambda_five() {
    let sys = make_pinwheel(3, 4).unwrap();
    assert_eq!(sys.lambda(), &Scalar::from_int(&sys.field, 5));
    let _ = Point::origin(&sys.field);
}
