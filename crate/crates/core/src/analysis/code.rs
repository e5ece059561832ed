use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{apply_f, compose_f, inverse_f, Layout, MotionF, Support};
use crate::error::{Error, Result};
use crate::exact::{Motion, Point};
use crate::geometry::dist_point_convex_f64;
use crate::tiling::{supertile, Patch, PlacedTile, TilingSystem};

/// A patch viewed from a base point, with its lookup structures.
struct Pointed<'a> {
    layout: Layout<'a>,
    support: Support,
}

impl<'a> Pointed<'a> {
    fn new(sys: &'a TilingSystem, patch: &'a Patch) -> Pointed<'a> {
        Pointed { layout: Layout::new(sys, patch), support: Support::new(sys, patch) }
    }
}

// Tiles of `a` meeting `B_cap(c)` that are missing from `b` after moving `b` by `g`; returns
// the least distance from `c` to such a tile.
fn first_missing(a: &Pointed, b: &Pointed, g: &Motion, gf: &MotionF, c: [f64; 2], cap: f64) -> f64 {
    let ginv = g.inverse();
    let ginv_f = inverse_f(gf);
    let mut near: Vec<(f64, usize)> = a
        .layout
        .index
        .query_box(&[c[0] - cap, c[1] - cap, c[0] + cap, c[1] + cap])
        .into_iter()
        .map(|i| (dist_point_convex_f64(a.layout.index.vertices_f64(i), c), i))
        .filter(|(d, _)| *d < cap)
        .collect();
    near.sort_by(|x, y| x.0.total_cmp(&y.0));
    for (d, i) in near {
        let t = &a.layout.patch.tiles[i];
        let moved = PlacedTile { proto: t.proto, pose: ginv.compose(&t.pose) };
        let tf = b.layout.vertices_under(t.proto, &compose_f(&ginv_f, &a.layout.poses[i]));
        if b.layout.locate(&moved, &tf).is_none() {
            return d;
        }
    }
    cap
}

// Radius about `c` (in `a`'s frame) on which `a` and `g·b` have the same tiles, capped by
// both supports and by `cap`.
fn agreement(a: &Pointed, b: &Pointed, g: &Motion, c: [f64; 2], cap: f64) -> f64 {
    let gf = g.to_f64();
    let cb = apply_f(&inverse_f(&gf), c);
    let horizon = a.support.radius_f(c).min(b.support.radius_f(cb)).min(cap);
    let ginv = g.inverse();
    let ab = first_missing(a, b, g, &gf, c, horizon);
    let ba = first_missing(b, a, &ginv, &ginv.to_f64(), cb, horizon);
    ab.min(ba)
}

/// Radius of agreement about the origin of the pointed patches `g1⁻¹·P1` and `g2⁻¹·P2`, capped
/// by both supports and by `cap`.
pub fn agreement_radius(sys: &TilingSystem, p1: &Patch, g1: &Motion, p2: &Patch, g2: &Motion, cap: f64) -> f64 {
    let a = Pointed::new(sys, p1);
    let b = Pointed::new(sys, p2);
    let c = g1.apply(&Point::origin(&sys.field)).to_f64();
    agreement(&a, &b, &g1.compose(&g2.inverse()), c, cap)
}

#[derive(Debug, Clone, Serialize)]
pub struct CodeRadiusRow {
    pub n_prime: f64,
    /// Least ladder radius, in preimage units, that forces image agreement on `B_{n'}`.
    pub n: f64,
    /// `n'/λ`, the radius that always suffices because children lie inside their parents.
    pub bound: f64,
    pub pairs: usize,
    /// Pairs whose preimages agree on `B_n`.
    pub pairs_at_n: usize,
    pub violations: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CodeProfile {
    pub system: String,
    pub level: usize,
    pub seed: u64,
    pub step: f64,
    pub rows: Vec<CodeRadiusRow>,
    pub monotone: bool,
}

/// One sampled pair: preimage and image agreement radii.
#[derive(Debug, Clone, Copy)]
struct PairSample {
    pre: f64,
    image: f64,
}

/// Empirical sliding-block radii of the code `λx ↦ φ(x)`.
///
/// Pairs of pointed tilings are drawn from level-`level` supertiles, based at the centers of two
/// tiles of the same type. Half the pairs sit at the same address inside level-`k` supertiles of
/// the same type, so they agree on large balls; the rest are random. Preimage radii are measured
/// in the units of `x`, image radii in those of `φ(x)`.
pub fn code_radius_profile(
    sys: &TilingSystem,
    n_primes: &[f64],
    samples: usize,
    seed: u64,
    level: usize,
) -> Result<CodeProfile> {
    if level < 2 {
        return Err(Error::InvalidArgument("code profile needs level >= 2".into()));
    }
    if n_primes.iter().any(|&n| !(n > 0.0) || !n.is_finite()) {
        return Err(Error::InvalidArgument("n' must be positive".into()));
    }
    let lam = sys.lambda_f64();
    let top = n_primes.iter().cloned().fold(0.0, f64::max);
    let pre_cap = top / lam + 1.0;
    let image_cap = top + 1.0;
    let step = sys.inner_radius_f64() / 16.0;

    let roots = sys.prototiles.len();
    let pre: Vec<Patch> = (0..roots).map(|s| supertile(sys, s, level, usize::MAX)).collect::<Result<_>>()?;
    let img: Vec<Patch> = (0..roots).map(|s| supertile(sys, s, level + 1, usize::MAX)).collect::<Result<_>>()?;
    let pre_p: Vec<Pointed> = pre.iter().map(|p| Pointed::new(sys, p)).collect();
    let img_p: Vec<Pointed> = img.iter().map(|p| Pointed::new(sys, p)).collect();
    let by_addr: Vec<HashMap<&[u32], usize>> = pre
        .iter()
        .map(|p| {
            let prov = p.provenance.as_ref().expect("supertiles carry provenance");
            prov.iter().enumerate().map(|(i, a)| (a.digits.as_slice(), i)).collect()
        })
        .collect();
    // Ancestor type at each depth along an address.
    let ancestor_type = |root: usize, digits: &[u32]| -> usize {
        digits.iter().fold(root, |t, &d| sys.rule.children[t][d as usize].proto)
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs: Vec<((usize, usize), (usize, usize))> = Vec::new();
    let mut guard = 0;
    while pairs.len() < samples && guard < samples * 50 {
        guard += 1;
        let s1 = rng.gen_range(0..roots);
        let i1 = rng.gen_range(0..pre[s1].len());
        let s2 = rng.gen_range(0..roots);
        let d1 = &pre[s1].provenance.as_ref().unwrap()[i1].digits;
        if pairs.len().is_multiple_of(2) {
            // Same relative address inside congruent level-k supertiles.
            let k = rng.gen_range(1..level);
            let cut = level - k;
            let a_type = ancestor_type(s1, &d1[..cut]);
            let prefixes: Vec<&[u32]> = pre[s2]
                .provenance
                .as_ref()
                .unwrap()
                .iter()
                .map(|a| &a.digits[..cut])
                .filter(|p| ancestor_type(s2, p) == a_type)
                .collect();
            if prefixes.is_empty() {
                continue;
            }
            let mut addr = prefixes[rng.gen_range(0..prefixes.len())].to_vec();
            addr.extend_from_slice(&d1[cut..]);
            let Some(&i2) = by_addr[s2].get(addr.as_slice()) else { continue };
            if (s1, i1) == (s2, i2) {
                continue;
            }
            pairs.push(((s1, i1), (s2, i2)));
        } else {
            let proto = pre[s1].tiles[i1].proto;
            let same: Vec<usize> = (0..pre[s2].len()).filter(|&j| pre[s2].tiles[j].proto == proto).collect();
            if same.is_empty() {
                continue;
            }
            let i2 = same[rng.gen_range(0..same.len())];
            if (s1, i1) == (s2, i2) {
                continue;
            }
            pairs.push(((s1, i1), (s2, i2)));
        }
    }

    let measured: Vec<PairSample> = crate::par::map(&pairs, |&((s1, i1), (s2, i2))| {
        let (t1, t2) = (&pre[s1].tiles[i1], &pre[s2].tiles[i2]);
        let g = t1.pose.compose(&t2.pose.inverse());
        let c = pre_p[s1].layout.centers[i1];
        let pre_a = agreement(&pre_p[s1], &pre_p[s2], &g, c, pre_cap);
        let h = g.expansion_conjugate(sys.lambda());
        let ci = [c[0] * lam, c[1] * lam];
        let image = agreement(&img_p[s1], &img_p[s2], &h, ci, image_cap);
        PairSample { pre: pre_a, image }
    });

    let rows: Vec<CodeRadiusRow> = n_primes
        .iter()
        .map(|&np| {
            let worst = measured.iter().filter(|p| p.image < np - 1e-9).map(|p| p.pre).fold(0.0, f64::max);
            let n = ((worst + 1e-9) / step).floor() * step + step;
            let at_n: Vec<&PairSample> = measured.iter().filter(|p| p.pre >= n).collect();
            CodeRadiusRow {
                n_prime: np,
                n,
                bound: np / lam,
                pairs: measured.len(),
                pairs_at_n: at_n.len(),
                violations: at_n.iter().filter(|p| p.image < np - 1e-9).count(),
            }
        })
        .collect();
    let mut sorted = rows.clone();
    sorted.sort_by(|a, b| a.n_prime.total_cmp(&b.n_prime));
    let monotone = sorted.windows(2).all(|w| w[0].n <= w[1].n);
    Ok(CodeProfile { system: sys.name.clone(), level, seed, step, rows, monotone })
}
