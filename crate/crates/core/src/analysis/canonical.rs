use std::cmp::Ordering;
use std::hash::{Hash, Hasher};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{Motion, Point};
use crate::geometry::vertex_centroid;
use crate::tiling::{Patch, PlacedTile, TilingSystem};

/// A patch moved to a standard position. Equal encodings mean congruent patches.
#[derive(Debug, Clone)]
pub struct CanonicalPatch {
    /// Sorted normalized tiles after applying `motion`.
    pub encoding: Vec<PlacedTile>,
    /// The motion taking the input patch onto the encoding.
    pub motion: Motion,
    /// Number of (reference tile, symmetry) choices reaching the encoding; above one when the
    /// patch has a nontrivial rotational self-congruence.
    pub stabilizer: usize,
}

impl PartialEq for CanonicalPatch {
    fn eq(&self, o: &Self) -> bool {
        self.encoding == o.encoding
    }
}
impl Eq for CanonicalPatch {}
impl Hash for CanonicalPatch {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.encoding.hash(h)
    }
}
impl PartialOrd for CanonicalPatch {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for CanonicalPatch {
    fn cmp(&self, o: &Self) -> Ordering {
        (self.encoding.len(), &self.encoding).cmp(&(o.encoding.len(), &o.encoding))
    }
}

/// Summary of a canonical patch for reports.
#[derive(Debug, Clone, Serialize)]
pub struct CanonicalSummary {
    pub tiles: usize,
    pub types: Vec<usize>,
    pub stabilizer: usize,
}

impl CanonicalPatch {
    pub fn summary(&self) -> CanonicalSummary {
        CanonicalSummary {
            tiles: self.encoding.len(),
            types: self.encoding.iter().map(|t| t.proto).collect(),
            stabilizer: self.stabilizer,
        }
    }

    pub fn as_patch(&self) -> Patch {
        Patch::new(self.encoding.clone())
    }
}

/// Canonical form of a nonempty patch under orientation-preserving motions.
///
/// Reference tiles are those minimizing (squared distance from the tile's vertex centroid to
/// the mean of all such centroids, prototile id); each is moved to its prototile's standard
/// pose in every symmetric way and the least sorted encoding wins.
pub fn canonicalize(sys: &TilingSystem, patch: &Patch) -> Result<CanonicalPatch> {
    if patch.is_empty() {
        return Err(Error::InvalidPatch("cannot canonicalize an empty patch".into()));
    }
    let centers: Vec<Point> = patch.tiles.iter().map(|t| sys.tile_center(t)).collect();
    let mean = vertex_centroid(&centers);
    let mf = mean.to_f64();
    let approx: Vec<f64> = centers
        .iter()
        .map(|c| {
            let p = c.to_f64();
            (p[0] - mf[0]).powi(2) + (p[1] - mf[1]).powi(2)
        })
        .collect();
    let min_f = approx.iter().cloned().fold(f64::INFINITY, f64::min);
    let tol = 1e-9 * (1.0 + min_f);
    let near: Vec<usize> = (0..patch.len()).filter(|&i| approx[i] <= min_f + tol).collect();
    let exact: Vec<_> = near.iter().map(|&i| (centers[i].sub(&mean).norm2(), patch.tiles[i].proto, i)).collect();
    let best = exact
        .iter()
        .min_by(|a, b| a.0.cmp_value(&b.0).then(a.1.cmp(&b.1)))
        .map(|b| (b.0.clone(), b.1))
        .expect("nonempty");
    let refs: Vec<usize> = exact
        .iter()
        .filter(|e| e.1 == best.1 && e.0 == best.0)
        .map(|e| e.2)
        .collect();

    let (encoding, motions) = best_encoding(sys, patch, &refs);
    Ok(CanonicalPatch { encoding, motion: motions[0].clone(), stabilizer: motions.len() })
}

/// The least encoding over the reference tiles and every motion reaching it.
fn best_encoding(sys: &TilingSystem, patch: &Patch, refs: &[usize]) -> (Vec<PlacedTile>, Vec<Motion>) {
    let mut winner: Option<(Vec<PlacedTile>, Vec<Motion>)> = None;
    for &i in refs {
        let t = &patch.tiles[i];
        for s in sys.symmetries(t.proto) {
            let g = t.pose.compose(s).inverse();
            let mut enc: Vec<PlacedTile> = patch
                .tiles
                .iter()
                .map(|x| sys.normalize(&PlacedTile { proto: x.proto, pose: g.compose(&x.pose) }))
                .collect();
            enc.sort();
            match &mut winner {
                Some((w, _)) if *w < enc => {}
                Some((w, ms)) if *w == enc => ms.push(g),
                _ => winner = Some((enc, vec![g])),
            }
        }
    }
    winner.expect("at least one reference tile")
}

/// Orientation-preserving motions mapping a nonempty patch onto itself.
pub(crate) fn self_congruences(sys: &TilingSystem, patch: &Patch) -> Result<Vec<Motion>> {
    let c = canonicalize(sys, patch)?;
    if c.stabilizer == 1 {
        return Ok(vec![Motion::identity(&sys.field)]);
    }
    // Each motion reaching the encoding differs from the first by a self-congruence.
    let all: Vec<usize> = (0..patch.len()).collect();
    let (_, motions) = best_encoding(sys, patch, &all);
    let inv = motions[0].inverse();
    let mut out: Vec<Motion> = motions.iter().map(|m| inv.compose(m)).collect();
    out.sort();
    out.dedup();
    Ok(out)
}
