//! Oracles and fixtures shared by the integration tests.
#![allow(dead_code)]

use rand::Rng;
use tilesys::exact::{Motion, Point, Rotation, Scalar};
use tilesys::tiling::{supertile, DEFAULT_TILE_CAP};
use tilesys::{Patch, TilingSystem};

pub type Seg = ([f64; 2], [f64; 2]);

fn lerp(a: [f64; 2], b: [f64; 2], t: f64) -> [f64; 2] {
    [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]
}

fn norm(p: [f64; 2]) -> f64 {
    p[0].hypot(p[1])
}

/// Parameter interval of `s` inside the closed disk of radius `r`, found by bisection from the
/// point of the segment nearest the origin.
fn inside_range(s: &Seg, r: f64) -> Option<(f64, f64)> {
    let (a, b) = *s;
    let d = [b[0] - a[0], b[1] - a[1]];
    let l2 = d[0] * d[0] + d[1] * d[1];
    let t_near = if l2 == 0.0 { 0.0 } else { (-(a[0] * d[0] + a[1] * d[1]) / l2).clamp(0.0, 1.0) };
    if norm(lerp(a, b, t_near)) > r {
        return None;
    }
    let edge = |target: f64| {
        if norm(lerp(a, b, target)) <= r {
            return target;
        }
        let (mut inn, mut out) = (t_near, target);
        for _ in 0..80 {
            let m = 0.5 * (inn + out);
            if norm(lerp(a, b, m)) <= r {
                inn = m;
            } else {
                out = m;
            }
        }
        inn
    };
    Some((edge(0.0), edge(1.0)))
}

fn point_seg_dist(p: [f64; 2], s: &Seg) -> f64 {
    let (a, b) = *s;
    let d = [b[0] - a[0], b[1] - a[1]];
    let l2 = d[0] * d[0] + d[1] * d[1];
    let t = if l2 == 0.0 { 0.0 } else { (((p[0] - a[0]) * d[0] + (p[1] - a[1]) * d[1]) / l2).clamp(0.0, 1.0) };
    norm([p[0] - a[0] - t * d[0], p[1] - a[1] - t * d[1]])
}

/// Segments clipped to the closed disk of radius `r`.
pub fn clip_oracle(segs: &[Seg], r: f64) -> Vec<Seg> {
    segs.iter()
        .filter_map(|s| inside_range(s, r).map(|(t0, t1)| (lerp(s.0, s.1, t0), lerp(s.0, s.1, t1))))
        .collect()
}

fn dist_to_set(p: [f64; 2], set: &[Seg]) -> f64 {
    set.iter().map(|s| point_seg_dist(p, s)).fold(f64::INFINITY, f64::min)
}

/// `sup_{p ∈ A} d(p, B)` from `samples` points per segment, with the three best samples of
/// each segment polished by golden-section search on their neighbourhood.
pub fn dense_one_sided(a: &[Seg], b: &[Seg], samples: usize) -> f64 {
    let mut best = 0.0f64;
    for s in a {
        let f = |t: f64| dist_to_set(lerp(s.0, s.1, t), b);
        let n = samples.max(2);
        let vals: Vec<(f64, f64)> = (0..n).map(|k| {
            let t = k as f64 / (n - 1) as f64;
            (f(t), t)
        }).collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&x, &y| vals[y].0.total_cmp(&vals[x].0));
        for &k in order.iter().take(3) {
            best = best.max(vals[k].0);
            let h = 1.0 / (n - 1) as f64;
            let (mut lo, mut hi) = ((vals[k].1 - h).max(0.0), (vals[k].1 + h).min(1.0));
            let g = (5f64.sqrt() - 1.0) / 2.0;
            for _ in 0..60 {
                let (m1, m2) = (hi - g * (hi - lo), lo + g * (hi - lo));
                if f(m1) < f(m2) { lo = m1 } else { hi = m2 }
            }
            best = best.max(f(0.5 * (lo + hi)));
        }
    }
    best
}

/// Hausdorff distance of `A ∩ B_n` and `B ∩ B_n` by dense sampling.
pub fn dense_hausdorff(a: &[Seg], b: &[Seg], n: f64, samples: usize) -> f64 {
    let (ca, cb) = (clip_oracle(a, n), clip_oracle(b, n));
    dense_one_sided(&ca, &cb, samples).max(dense_one_sided(&cb, &ca, samples))
}

/// Tiling metric truncated at horizon `r`, using the oracle for each term.
pub fn dense_metric(a: &[Seg], b: &[Seg], horizon: f64, samples: usize) -> f64 {
    (1..=horizon.floor() as usize)
        .map(|n| {
            let (ca, cb) = (clip_oracle(a, n as f64), clip_oracle(b, n as f64));
            match (ca.is_empty(), cb.is_empty()) {
                (true, true) => 0.0,
                (true, false) | (false, true) => 2.0,
                _ => dense_one_sided(&ca, &cb, samples).max(dense_one_sided(&cb, &ca, samples)) / n as f64,
            }
        })
        .fold(0.0, f64::max)
}

/// `φⁿ(T)` translated so that the vertex centroid of the supertile is the origin.
pub fn centered_supertile(sys: &TilingSystem, proto: usize, level: usize) -> Patch {
    let p = supertile(sys, proto, level, DEFAULT_TILE_CAP).unwrap();
    let verts = &sys.prototiles[proto].vertices;
    let mut c = Point::origin(&sys.field);
    for v in verts {
        c = c.add(v);
    }
    let mut c = c.scale_ratio(1, verts.len() as i64);
    for _ in 0..level {
        c = c.scale(sys.lambda());
    }
    p.transformed(sys, &Motion::translation(c.neg()))
}

const TRIPLES: [(i64, i64, i64); 5] = [(3, 4, 5), (5, 12, 13), (8, 15, 17), (7, 24, 25), (20, 21, 29)];

/// A random exact motion: a Pythagorean rotation (or none) and a rational translation of size at most `t_max`.
pub fn random_motion(sys: &TilingSystem, rng: &mut impl Rng, t_max: f64) -> Motion {
    let f = &sys.field;
    let rot = match rng.gen_range(0..=TRIPLES.len()) {
        0 => Rotation::quarter_turns(f, rng.gen_range(0..4)),
        k => {
            let (a, b, c) = TRIPLES[k - 1];
            let sa = if rng.gen_bool(0.5) { 1 } else { -1 };
            let sb = if rng.gen_bool(0.5) { 1 } else { -1 };
            Rotation::new(Scalar::from_ratio(f, sa * a, c), Scalar::from_ratio(f, sb * b, c)).unwrap()
        }
    };
    let den = 1000;
    let m = (t_max / std::f64::consts::SQRT_2 * den as f64) as i64;
    let t = Point::new(Scalar::from_ratio(f, rng.gen_range(-m..=m), den), Scalar::from_ratio(f, rng.gen_range(-m..=m), den));
    Motion::new(rot, t)
}
