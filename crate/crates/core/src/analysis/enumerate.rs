use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::Serialize;

use super::canonical::{canonicalize, CanonicalPatch};
use super::Support;
use crate::certified::CertifiedValue;
use crate::error::{Error, Result};
use crate::exact::Point;
use crate::geometry::sq_dist_point_segment_f64;
use crate::tiling::{substitute, supertile, Dimension, Patch, PatchIndex, PlacedTile, TilingSystem};

/// Candidate ball centers: every vertex, edge midpoint and vertex centroid of the patch.
pub fn sample_centers(sys: &TilingSystem, patch: &Patch) -> Vec<Point> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for t in &patch.tiles {
        let v = sys.tile_vertices(t);
        let n = v.len();
        let mut push = |p: Point| {
            if seen.insert(p.clone()) {
                out.push(p);
            }
        };
        for i in 0..n {
            push(v[i].clone());
            if sys.dim == Dimension::Two {
                push(v[i].midpoint(&v[(i + 1) % n]));
            }
        }
        push(sys.tile_center(t));
    }
    out
}

/// Canonical `r`-ball patches about every sampled center whose ball lies inside the support.
pub(crate) fn classify(sys: &TilingSystem, patch: &Patch, r: f64) -> Vec<(Point, f64, CanonicalPatch)> {
    let support = Support::new(sys, patch);
    let index = PatchIndex::new(sys, patch);
    let centers: Vec<(Point, f64)> = sample_centers(sys, patch)
        .into_iter()
        .map(|c| {
            let d = support.radius(&c);
            (c, d)
        })
        .filter(|(_, d)| *d > r + 1e-9)
        .collect();
    crate::par::map(&centers, |(c, d)| {
        let ball = patch.select(&index.ball(sys, patch, c, r));
        (c.clone(), *d, canonicalize(sys, &ball).expect("a ball about a tile point is nonempty"))
    })
}

/// The set of `r`-ball patch types seen in level-`level` supertiles of every prototile.
#[derive(Debug, Clone, Serialize)]
pub struct PatchLibrary {
    pub system: String,
    pub radius: f64,
    pub level: usize,
    pub centers_sampled: usize,
    pub count: usize,
    #[serde(skip)]
    pub patches: BTreeSet<CanonicalPatch>,
}

impl PatchLibrary {
    pub fn contains(&self, p: &CanonicalPatch) -> bool {
        self.patches.contains(p)
    }
}

/// `r`-ball patch types of the level-`level` supertiles, found without building them.
///
/// A tile's neighborhood is the set of tiles within `ρ` of it, in the frame of the tile. The
/// children of a tile only see children of tiles in its neighborhood, since `ρ/λ < ρ`, so the
/// neighborhood types of level `n + 1` come from substituting those of level `n`. Each ball about
/// a sample point of a tile lies within `ρ > r` of that tile, so its patch, and whether it stays in
/// the supertile, can be read off the neighborhood. The result equals
/// [`enumerate_patches_direct`]; the cost grows with the number of neighborhood types rather
/// than with the size of the supertile.
pub fn enumerate_patches(sys: &TilingSystem, r: f64, level: usize, cap: usize) -> Result<PatchLibrary> {
    if !(r > 0.0) {
        return Err(Error::InvalidArgument("radius must be positive".into()));
    }
    let reach = r * 1.001 + 1e-6;
    let mut types: BTreeSet<Neighborhood> =
        (0..sys.prototiles.len()).map(|t| Neighborhood { center: t, tiles: vec![sys.identity_tile(t)] }).collect();
    for _ in 0..level {
        let list: Vec<&Neighborhood> = types.iter().collect();
        types = crate::par::flat_map(&list, |n| n.children(sys, reach)).into_iter().collect();
        if types.len() > cap {
            return Err(Error::ResourceLimit(format!("more than {cap} neighborhood types")));
        }
    }
    let list: Vec<&Neighborhood> = types.iter().collect();
    let found = crate::par::flat_map(&list, |n| n.balls(sys, r));
    let sampled = found.len();
    let patches: BTreeSet<CanonicalPatch> = found.into_iter().collect();
    Ok(PatchLibrary { system: sys.name.clone(), radius: r, level, centers_sampled: sampled, count: patches.len(), patches })
}

/// A tile and the tiles within some reach of it, moved so that the tile sits at its standard pose.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Neighborhood {
    center: usize,
    tiles: Vec<PlacedTile>,
}

impl Neighborhood {
    fn around(sys: &TilingSystem, center: &PlacedTile, pool: &[PlacedTile], pool_f: &[Vec<[f64; 2]>], reach: f64) -> Neighborhood {
        let cf = sys.tile_vertices_f64(center);
        let near: Vec<&PlacedTile> =
            pool.iter().zip(pool_f).filter(|(_, v)| polygon_gap(&cf, v) <= reach + 1e-9).map(|(t, _)| t).collect();
        let tiles = sys
            .symmetries(center.proto)
            .iter()
            .map(|s| {
                let back = center.pose.compose(s).inverse();
                let mut v: Vec<PlacedTile> =
                    near.iter().map(|t| sys.normalize(&PlacedTile { proto: t.proto, pose: back.compose(&t.pose) })).collect();
                v.sort();
                v
            })
            .min()
            .expect("identity symmetry");
        Neighborhood { center: center.proto, tiles }
    }

    fn children(&self, sys: &TilingSystem, reach: f64) -> Vec<Neighborhood> {
        let grown = substitute(sys, &Patch::new(self.tiles.clone()));
        let f: Vec<Vec<[f64; 2]>> = grown.tiles.iter().map(|t| sys.tile_vertices_f64(t)).collect();
        sys.children_of(&sys.identity_tile(self.center))
            .iter()
            .map(|c| Neighborhood::around(sys, c, &grown.tiles, &f, reach))
            .collect()
    }

    /// Canonical balls about the sample points of the center tile that stay inside the tiles.
    fn balls(&self, sys: &TilingSystem, r: f64) -> Vec<CanonicalPatch> {
        let patch = Patch::new(self.tiles.clone());
        let support = Support::new(sys, &patch);
        let index = PatchIndex::new(sys, &patch);
        sample_centers(sys, &Patch::new(vec![sys.identity_tile(self.center)]))
            .into_iter()
            .filter(|c| support.radius(c) > r + 1e-9)
            .map(|c| canonicalize(sys, &patch.select(&index.ball(sys, &patch, &c, r))).expect("nonempty ball"))
            .collect()
    }
}

/// Distance between two polygons with disjoint interiors (or the same polygon).
fn polygon_gap(a: &[[f64; 2]], b: &[[f64; 2]]) -> f64 {
    let one = |p: &[[f64; 2]], q: &[[f64; 2]]| {
        let n = q.len();
        p.iter()
            .flat_map(|&v| (0..n).map(move |i| sq_dist_point_segment_f64(v, q[i], q[(i + 1) % n])))
            .fold(f64::INFINITY, f64::min)
    };
    one(a, b).min(one(b, a)).sqrt()
}

/// Reference enumeration over the sample points of the full supertiles.
pub fn enumerate_patches_direct(sys: &TilingSystem, r: f64, level: usize, cap: usize) -> Result<PatchLibrary> {
    if !(r > 0.0) {
        return Err(Error::InvalidArgument("radius must be positive".into()));
    }
    let mut patches = BTreeSet::new();
    let mut sampled = 0;
    for t in 0..sys.prototiles.len() {
        let p = supertile(sys, t, level, cap)?;
        let found = classify(sys, &p, r);
        sampled += found.len();
        patches.extend(found.into_iter().map(|(_, _, c)| c));
    }
    Ok(PatchLibrary {
        system: sys.name.clone(),
        radius: r,
        level,
        centers_sampled: sampled,
        count: patches.len(),
        patches,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct RepetitivityReport {
    pub system: String,
    pub r: f64,
    pub level: usize,
    pub patch_types: usize,
    pub anchors: usize,
    /// Least `R'` such that every sampled `R'`-ball holds every `r`-patch type.
    pub radius: Option<CertifiedValue>,
    /// `R' / r`.
    pub constant: Option<f64>,
}

/// Least radius `R'` such that each `R'`-ball in a level-`level` supertile holds a copy of every
/// `r`-ball patch type.
///
/// Anchors are the sampled centers at least half the deepest center depth inside the support.
/// A type counts as present in `B_R'(a)` when some center `c` of that type has
/// `|c − a| + r ≤ R'`.
pub fn repetitivity_radius(sys: &TilingSystem, r: f64, level: usize, cap: usize) -> Result<RepetitivityReport> {
    if !(r > 0.0) {
        return Err(Error::InvalidArgument("radius must be positive".into()));
    }
    let mut ids: BTreeMap<CanonicalPatch, usize> = BTreeMap::new();
    let mut per_root = Vec::new();
    for t in 0..sys.prototiles.len() {
        let p = supertile(sys, t, level, cap)?;
        let found = classify(sys, &p, r);
        let typed: Vec<([f64; 2], f64, usize)> = found
            .into_iter()
            .map(|(c, d, k)| {
                let n = ids.len();
                let id = *ids.entry(k).or_insert(n);
                (c.to_f64(), d, id)
            })
            .collect();
        per_root.push(typed);
    }
    let types = ids.len();
    let mut worst: Option<f64> = Some(0.0);
    let mut anchors = 0;
    for typed in &per_root {
        if typed.is_empty() {
            continue;
        }
        let deepest = typed.iter().map(|x| x.1).fold(0.0, f64::max);
        let stride = (typed.iter().filter(|x| x.1 >= deepest / 2.0).count() / 1500).max(1);
        let anchor_pts: Vec<[f64; 2]> =
            typed.iter().filter(|x| x.1 >= deepest / 2.0).step_by(stride).map(|x| x.0).collect();
        anchors += anchor_pts.len();
        let needs = crate::par::map(&anchor_pts, |a| {
            let mut best = vec![f64::INFINITY; types];
            for (c, _, id) in typed {
                let d = ((c[0] - a[0]).powi(2) + (c[1] - a[1]).powi(2)).sqrt();
                if d < best[*id] {
                    best[*id] = d;
                }
            }
            best.into_iter().fold(0.0, f64::max) + r
        });
        for n in needs {
            worst = match worst {
                Some(w) if n.is_finite() => Some(w.max(n)),
                _ => None,
            };
        }
    }
    let radius = worst.filter(|_| anchors > 0).map(|w| CertifiedValue::new(w * (1.0 - 1e-12), w * (1.0 + 1e-12)));
    Ok(RepetitivityReport {
        system: sys.name.clone(),
        r,
        level,
        patch_types: types,
        anchors,
        constant: radius.map(|v| v.hi / r),
        radius,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    pub balls_checked: usize,
    /// A center whose ball patch is missing from the library.
    pub witness: Option<[f64; 2]>,
}

/// Whether every sampled `r`-ball patch of `patch` is congruent to a library member.
pub fn local_admissibility(sys: &TilingSystem, patch: &Patch, r: f64, library: &PatchLibrary) -> Result<AdmissibilityReport> {
    if (library.radius - r).abs() > 1e-12 * r.max(1.0) {
        return Err(Error::InvalidArgument(format!(
            "library was built at radius {} but radius {} was requested",
            library.radius, r
        )));
    }
    if library.system != sys.name {
        return Err(Error::InvalidArgument(format!("library belongs to {}, not {}", library.system, sys.name)));
    }
    if patch.is_empty() {
        return Ok(AdmissibilityReport { admissible: true, balls_checked: 0, witness: None });
    }
    let found = classify(sys, patch, r);
    let witness = found.iter().find(|(_, _, c)| !library.contains(c)).map(|(p, _, _)| p.to_f64());
    Ok(AdmissibilityReport { admissible: witness.is_none(), balls_checked: found.len(), witness })
}
