mod common;

use std::sync::Arc;

use common::{centered_supertile, dense_hausdorff, dense_metric, random_motion, Seg};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tilesys::exact::{Motion, Point, Scalar};
use tilesys::metric::{hausdorff_clipped, patch_metric, SegmentComplex};
use tilesys::systems::by_name;
use tilesys::tiling::boundary_complex;
use tilesys::{Error, NumberField};

const EPS: f64 = 1e-6;

fn q() -> Arc<NumberField> {
    Arc::new(NumberField::rationals())
}

fn pt(f: &Arc<NumberField>, x: (i64, i64), y: (i64, i64)) -> Point {
    Point::new(Scalar::from_ratio(f, x.0, x.1), Scalar::from_ratio(f, y.0, y.1))
}

fn complex(segs: &[((i64, i64), (i64, i64))], den: i64) -> SegmentComplex {
    let f = q();
    SegmentComplex::new(segs.iter().map(|&((a, b), (c, d))| (pt(&f, (a, den), (b, den)), pt(&f, (c, den), (d, den)))).collect())
}

#[test]
fn identical_sets_are_at_distance_zero() {
    let a = complex(&[((0, 0), (10, 0)), ((0, 0), (3, 7))], 10);
    let v = hausdorff_clipped(&a, &a, 2.0, EPS).unwrap();
    assert!(v.exact && v.lo == 0.0 && v.hi == 0.0);
}

#[test]
fn degenerate_segments_are_points() {
    let a = complex(&[((1, 2), (1, 2))], 10);
    let b = complex(&[((-3, 4), (-3, 4))], 10);
    let v = hausdorff_clipped(&a, &b, 5.0, EPS).unwrap();
    let d = (0.4f64.powi(2) + 0.2f64.powi(2)).sqrt();
    assert!(v.lo - EPS <= d && d <= v.hi + EPS, "{v:?} vs {d}");
}

#[test]
fn parallel_segments() {
    let a = complex(&[((0, 0), (10, 0))], 10);
    let b = complex(&[((0, 3), (10, 3))], 10);
    let v = hausdorff_clipped(&a, &b, 100.0, EPS).unwrap();
    let oracle = dense_hausdorff(&a.to_f64(), &b.to_f64(), 100.0, 10_000);
    assert!((v.mid() - 0.3).abs() <= EPS && (v.mid() - oracle).abs() <= 2.0 * EPS, "{v:?} {oracle}");
}

#[test]
fn empty_after_clipping_is_reported() {
    let a = complex(&[((50, 0), (60, 0))], 10);
    let b = complex(&[((0, 0), (1, 0))], 10);
    assert!(matches!(hausdorff_clipped(&a, &b, 1.0, EPS), Err(Error::EmptyAfterClipping { .. })));
}

/// Twenty random segment-set pairs against the sampling oracle.
#[test]
fn clipped_hausdorff_matches_dense_sampling() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let f = q();
    let mut checked = 0;
    while checked < 20 {
        let mut set = |k: usize| {
            let segs: Vec<(Point, Point)> = (0..k)
                .map(|_| {
                    let mut r = || rng.gen_range(-3000..=3000);
                    (pt(&f, (r(), 1000), (r(), 1000)), pt(&f, (r(), 1000), (r(), 1000)))
                })
                .collect();
            SegmentComplex::new(segs)
        };
        let (a, b) = (set(3), set(4));
        let n = 2.0;
        let Ok(v) = hausdorff_clipped(&a, &b, n, EPS) else { continue };
        let oracle = dense_hausdorff(&a.to_f64(), &b.to_f64(), n, 10_000);
        assert!(v.lo - 2.0 * EPS <= oracle && oracle <= v.hi + 2.0 * EPS, "{v:?} vs {oracle}");
        assert!(v.width() <= EPS + 1e-9);
        checked += 1;
    }
}

#[test]
fn metric_identity_is_exact() {
    let sys = by_name("pinwheel:1,2").unwrap();
    let x = centered_supertile(&sys, 0, 3);
    let m = patch_metric(&sys, &x, &x, 3.0, EPS).unwrap();
    assert!(m.value.exact && m.value.hi == 0.0);
    assert!(m.horizon_limited);
}

#[test]
fn horizon_beyond_support_is_rejected() {
    let sys = by_name("pinwheel:1,2").unwrap();
    let x = centered_supertile(&sys, 0, 1);
    assert!(matches!(patch_metric(&sys, &x, &x, 3.0, EPS), Err(Error::InvalidArgument(_))));
}

#[test]
fn small_translation_is_close_and_matches_oracle() {
    let sys = by_name("pinwheel:1,2").unwrap();
    let f = &sys.field;
    let x = centered_supertile(&sys, 0, 3);
    let t = Point::new(Scalar::from_ratio(f, 3, 100), Scalar::from_ratio(f, -1, 100));
    let y = x.transformed(&sys, &Motion::translation(t.clone()));
    let m = patch_metric(&sys, &x, &y, 3.0, EPS).unwrap();
    let tn = t.to_f64()[0].hypot(t.to_f64()[1]);
    // Clipping can expose a boundary point whose partner left the ball; that costs at most √(2n|t|)/n.
    assert!(m.value.hi <= tn + (2.0 * tn).sqrt() + EPS, "{:?}", m.value);
    assert!(m.value.lo > 0.0);
    let oracle = dense_metric(&boundary_complex(&sys, &x).to_f64(), &boundary_complex(&sys, &y).to_f64(), 3.0, 10_000);
    assert!((m.value.mid() - oracle).abs() <= 2.0 * EPS, "{:?} vs {oracle}", m.value);
}

#[test]
fn mirror_supertiles_are_far_apart() {
    let sys = by_name("pinwheel:1,2").unwrap();
    let x = centered_supertile(&sys, 0, 4);
    let y = centered_supertile(&sys, 1, 4);
    let m = patch_metric(&sys, &x, &y, 3.0, EPS).unwrap();
    assert!(m.value.lo > 0.01, "{:?}", m.value);
}

fn sample_patch(seed: u64) -> (tilesys::TilingSystem, tilesys::Patch) {
    let sys = by_name("pinwheel:1,2").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let proto = rng.gen_range(0..2);
    let g = random_motion(&sys, &mut rng, 0.5);
    let p = centered_supertile(&sys, proto, 4).transformed(&sys, &g);
    (sys, p)
}

fn boundary(sys: &tilesys::TilingSystem, p: &tilesys::Patch) -> Vec<Seg> {
    boundary_complex(sys, p).to_f64()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn metric_is_symmetric(s1 in 0u64..1000, s2 in 0u64..1000) {
        let (sys, x) = sample_patch(s1);
        let (_, y) = sample_patch(s2);
        let a = patch_metric(&sys, &x, &y, 3.0, EPS).unwrap();
        let b = patch_metric(&sys, &y, &x, 3.0, EPS).unwrap();
        prop_assert!((a.value.mid() - b.value.mid()).abs() <= 2.0 * EPS);
    }

    #[test]
    fn metric_triangle_inequality(s1 in 0u64..1000, s2 in 0u64..1000, s3 in 0u64..1000) {
        let (sys, x) = sample_patch(s1);
        let (_, y) = sample_patch(s2);
        let (_, z) = sample_patch(s3);
        let d = |a: &tilesys::Patch, b: &tilesys::Patch| patch_metric(&sys, a, b, 3.0, EPS).unwrap().value.mid();
        prop_assert!(d(&x, &z) <= d(&x, &y) + d(&y, &z) + 3.0 * EPS);
    }

    /// Agreement after a motion of size δ bounds the unclipped boundary distance by δ. The
    /// clipped terms can be larger, since clipping cuts the two boundaries at different places.
    #[test]
    fn agreement_under_small_motion_bounds_the_boundary_distance(seed in 0u64..1000) {
        let (sys, x) = sample_patch(seed);
        let f = &sys.field;
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let t = Point::new(Scalar::from_ratio(f, rng.gen_range(-20..=20), 1000), Scalar::from_ratio(f, rng.gen_range(-20..=20), 1000));
        let y = x.transformed(&sys, &Motion::translation(t.clone()));
        let delta = t.to_f64()[0].hypot(t.to_f64()[1]);
        let (bx, by) = (boundary_complex(&sys, &x), boundary_complex(&sys, &y));
        let whole = hausdorff_clipped(&bx, &by, 1e3, EPS).unwrap();
        prop_assert!(whole.lo <= delta + EPS, "{:?} vs {}", whole, delta);
        let m = patch_metric(&sys, &x, &y, 3.0, EPS).unwrap();
        prop_assert!(m.value.hi <= 2.0 + EPS);
        let oracle = dense_metric(&boundary(&sys, &x), &boundary(&sys, &y), 3.0, 2_000);
        prop_assert!(oracle <= m.value.hi + 2.0 * EPS);
    }
}
