use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::{apply_f, compose_f, convex_hull_f, dist_f, inverse_f, Fit, Layout, MotionF};
use crate::error::Result;
use crate::exact::{Motion, Point, Scalar};
use crate::tiling::{ball_patch, supertile, Dimension, Patch, TilingSystem};

/// Controls for [`find_periods`].
#[derive(Debug, Clone)]
pub struct PeriodSearch {
    /// Upper bound on `sup_{b ∈ supp P} ‖g b − b‖`.
    pub max_disp: f64,
    /// Extra candidates beyond the tile-to-tile motions, such as vacuous translations.
    pub extra: Vec<Motion>,
}

impl PeriodSearch {
    pub fn new(max_disp: f64) -> PeriodSearch {
        PeriodSearch { max_disp, extra: Vec::new() }
    }
}

/// Whether `P ∪ gP` is a patch.
pub fn is_period(sys: &TilingSystem, patch: &Patch, g: &Motion) -> bool {
    let layout = Layout::new(sys, patch);
    agrees_under(&layout, g, &g.to_f64(), None)
}

// Tiles nearest `anchor` are tried first so most non-periods fail after a few checks.
fn agrees_under(layout: &Layout, g: &Motion, gf: &MotionF, anchor: Option<[f64; 2]>) -> bool {
    let mut order: Vec<usize> = (0..layout.len()).collect();
    if let Some(a) = anchor {
        order.sort_by(|&i, &j| dist_f(layout.centers[i], a).total_cmp(&dist_f(layout.centers[j], a)));
    }
    order.into_iter().all(|i| !matches!(layout.fit_moved(g, gf, &layout.patch.tiles[i]), Fit::Conflict(_)))
}

fn hull_of(layout: &Layout) -> Vec<[f64; 2]> {
    let pts: Vec<[f64; 2]> = (0..layout.len()).flat_map(|i| layout.index.vertices_f64(i).to_vec()).collect();
    convex_hull_f(&pts)
}

fn displacement_f(g: &MotionF, hull: &[[f64; 2]]) -> f64 {
    hull.iter().map(|&b| dist_f(apply_f(g, b), b)).fold(0.0, f64::max)
}

/// Periods of `patch` among tile-to-tile motions, the identity and `search.extra`, with
/// displacement over the support at most `search.max_disp`. Sorted by displacement.
pub fn find_periods(sys: &TilingSystem, patch: &Patch, search: &PeriodSearch) -> Vec<(Motion, f64)> {
    if patch.is_empty() {
        return vec![(Motion::identity(&sys.field), 0.0)];
    }
    let layout = Layout::new(sys, patch);
    let hull = hull_of(&layout);
    let tol = 1e-9 * (1.0 + search.max_disp);
    let n = layout.len();

    // Centroid grid for pairing tiles that a small motion could exchange.
    let cell = search.max_disp.max(sys.max_diameter_f64());
    let key = |p: [f64; 2]| ((p[0] / cell).floor() as i64, (p[1] / cell).floor() as i64);
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for i in 0..n {
        grid.entry(key(layout.centers[i])).or_default().push(i);
    }
    let idx: Vec<usize> = (0..n).collect();
    let found: Vec<(MotionF, usize, usize, usize)> = crate::par::flat_map(&idx, |&i| {
        let ti = &layout.patch.tiles[i];
        let inv_i = inverse_f(&layout.poses[i]);
        let (cx, cy) = key(layout.centers[i]);
        let mut out = Vec::new();
        for dx in -1..=1 {
            for dy in -1..=1 {
                for &j in grid.get(&(cx + dx, cy + dy)).map(Vec::as_slice).unwrap_or(&[]) {
                    let tj = &layout.patch.tiles[j];
                    if tj.proto != ti.proto || dist_f(layout.centers[i], layout.centers[j]) > search.max_disp + tol {
                        continue;
                    }
                    for (k, s) in sys.symmetries(ti.proto).iter().enumerate() {
                        let gf = compose_f(&compose_f(&layout.poses[j], &s.to_f64()), &inv_i);
                        if displacement_f(&gf, &hull) <= search.max_disp + tol {
                            out.push((gf, i, j, k));
                        }
                    }
                }
            }
        }
        out
    });

    // Deduplicate in floats, then exactly.
    let mut by_key: BTreeMap<[i64; 4], (usize, usize, usize)> = BTreeMap::new();
    for (gf, i, j, k) in found {
        let q = gf.map(|x| (x * 1e6).round() as i64);
        by_key.entry(q).or_insert((i, j, k));
    }
    let mut cands: Vec<Motion> = by_key
        .values()
        .map(|&(i, j, k)| {
            let (ti, tj) = (&layout.patch.tiles[i], &layout.patch.tiles[j]);
            tj.pose.compose(&sys.symmetries(ti.proto)[k]).compose(&ti.pose.inverse())
        })
        .collect();
    cands.push(Motion::identity(&sys.field));
    for g in &search.extra {
        if displacement_f(&g.to_f64(), &hull) <= search.max_disp + tol {
            cands.push(g.clone());
        }
    }
    cands.sort();
    cands.dedup();

    let hull_exact = exact_hull(&layout, &hull);
    let max2 = Scalar::from_f64(&sys.field, search.max_disp).map(|m| m.square()).ok();
    let mut periods: Vec<(Motion, f64)> = crate::par::map(&cands, |g| {
        let gf = g.to_f64();
        let d = displacement_f(&gf, &hull);
        if (d - search.max_disp).abs() <= tol {
            // Borderline: decide the displacement bound exactly on hull vertices.
            if let Some(m2) = &max2 {
                if hull_exact.iter().any(|b| g.apply(b).sub(b).norm2().cmp_value(m2).is_gt()) {
                    return None;
                }
            }
        }
        let anchor = apply_f(&inverse_f(&gf), layout.centers[0]);
        agrees_under(&layout, g, &gf, Some(anchor)).then_some((g.clone(), d))
    })
    .into_iter()
    .flatten()
    .collect();
    periods.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    periods
}

// Exact tile vertices closest to the float hull vertices.
fn exact_hull(layout: &Layout, hull: &[[f64; 2]]) -> Vec<Point> {
    let mut out = Vec::new();
    for h in hull {
        'search: for i in 0..layout.len() {
            for (k, v) in layout.index.vertices_f64(i).iter().enumerate() {
                if dist_f(*v, *h) < 1e-12 {
                    out.push(layout.sys.tile_vertices(&layout.patch.tiles[i])[k].clone());
                    break 'search;
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct PeriodLevel {
    pub level: usize,
    /// Radius of the inscribed ball whose patch was searched.
    pub radius: f64,
    pub tiles: usize,
    pub candidates_ratio_cap: f64,
    /// Least displacement of a non-identity period divided by the radius, if one was found
    /// below the cap.
    pub min_ratio: Option<f64>,
    pub periods_found: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct PeriodBoundReport {
    pub system: String,
    pub proto: usize,
    pub inner_radius: f64,
    pub max_diameter: f64,
    pub levels: Vec<PeriodLevel>,
    /// Least ratio over levels; the cap stands in for levels where none was found.
    pub k_empirical: f64,
}

/// Incenter and inradius of a prototile, in floats.
fn inscribed_ball(sys: &TilingSystem, proto: usize) -> ([f64; 2], f64) {
    let v: Vec<[f64; 2]> = sys.prototiles[proto].vertices.iter().map(Point::to_f64).collect();
    if sys.dim == Dimension::One {
        return ([(v[0][0] + v[1][0]) / 2.0, 0.0], (v[1][0] - v[0][0]).abs() / 2.0);
    }
    if v.len() == 3 {
        let side = |i: usize, j: usize| dist_f(v[i], v[j]);
        let (a, b, c) = (side(1, 2), side(0, 2), side(0, 1));
        let p = a + b + c;
        let center = [(a * v[0][0] + b * v[1][0] + c * v[2][0]) / p, (a * v[0][1] + b * v[1][1] + c * v[2][1]) / p];
        let area = ((v[1][0] - v[0][0]) * (v[2][1] - v[0][1]) - (v[2][0] - v[0][0]) * (v[1][1] - v[0][1])).abs();
        return (center, area / p);
    }
    let c = super::centroid_f(&v);
    let n = v.len();
    let r = (0..n)
        .map(|i| crate::geometry::sq_dist_point_segment_f64(c, v[i], v[(i + 1) % n]).sqrt())
        .fold(f64::INFINITY, f64::min);
    (c, r)
}

/// The empirical period bound: for each level, periods of the inscribed-ball patch of the
/// supertile `φⁿ(T)` with displacement at most `cap · r`.
pub fn period_bound_report(
    sys: &TilingSystem,
    proto: usize,
    levels: &[usize],
    cap_ratio: f64,
    tile_cap: usize,
) -> Result<PeriodBoundReport> {
    let (c0, r0) = inscribed_ball(sys, proto);
    let lam = sys.lambda_f64();
    let mut rows = Vec::new();
    for &level in levels {
        let p = supertile(sys, proto, level, tile_cap)?;
        let s = lam.powi(level as i32);
        let r = r0 * s * (1.0 - 1e-9);
        let center = Point::new(
            Scalar::from_f64(&sys.field, c0[0] * s)?,
            Scalar::from_f64(&sys.field, c0[1] * s)?,
        );
        let ball = ball_patch(sys, &p, &center, r);
        let periods = find_periods(sys, &ball, &PeriodSearch::new(cap_ratio * r));
        let nontrivial: Vec<f64> = periods.iter().filter(|(g, _)| !g.is_identity()).map(|(_, d)| *d / r).collect();
        rows.push(PeriodLevel {
            level,
            radius: r,
            tiles: ball.len(),
            candidates_ratio_cap: cap_ratio,
            min_ratio: nontrivial.iter().cloned().reduce(f64::min),
            periods_found: nontrivial.len(),
        });
    }
    let k_empirical = rows.iter().map(|r| r.min_ratio.unwrap_or(cap_ratio)).fold(f64::INFINITY, f64::min);
    Ok(PeriodBoundReport {
        system: sys.name.clone(),
        proto,
        inner_radius: sys.inner_radius_f64(),
        max_diameter: sys.max_diameter_f64(),
        levels: rows,
        k_empirical,
    })
}
