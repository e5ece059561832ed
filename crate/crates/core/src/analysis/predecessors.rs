use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use super::{compose_f, inverse_f, Layout};
use crate::error::{Error, Result};
use crate::exact::{Motion, Scalar};
use crate::tiling::{supertile, PlacedTile, TilingSystem};

/// `P_n(T)`: minimal patches `P` with `φⁿ(T) ⊂ φⁿ(P)`, positioned so that `T` sits at its
/// standard pose.
#[derive(Debug, Clone, Serialize)]
pub struct PredecessorSet {
    pub proto: usize,
    pub level: usize,
    /// Extra substitution depth used when searching for occurrences.
    pub depth: usize,
    #[serde(skip)]
    pub patches: BTreeSet<Vec<PlacedTile>>,
    pub count: usize,
    pub occurrences: usize,
}

/// Finds every occurrence of `φⁿ(T)` inside `φ^{n+k}(S)` for all `S` and reads off the level-`n`
/// ancestors of the occurring tiles.
pub fn predecessor_sets(sys: &TilingSystem, proto: usize, n: usize, k: usize, cap: usize) -> Result<PredecessorSet> {
    if proto >= sys.prototiles.len() {
        return Err(Error::InvalidArgument(format!("no prototile {proto}")));
    }
    let pattern = supertile(sys, proto, n, cap)?;
    let anchor = pattern.tiles[0].clone();
    let anchor_inv = anchor.pose.inverse();
    let anchor_inv_f = inverse_f(&anchor.pose.to_f64());
    let mut lam_n = Scalar::one(&sys.field);
    for _ in 0..n {
        lam_n = lam_n * sys.inv_lambda();
    }
    // Pattern tiles ordered by distance from the anchor, for early rejection.
    let ac = sys.tile_center(&anchor).to_f64();
    let mut order: Vec<usize> = (1..pattern.len()).collect();
    order.sort_by(|&a, &b| {
        let da = super::dist_f(sys.tile_center(&pattern.tiles[a]).to_f64(), ac);
        let db = super::dist_f(sys.tile_center(&pattern.tiles[b]).to_f64(), ac);
        da.total_cmp(&db)
    });

    let mut patches = BTreeSet::new();
    let mut occurrences = 0;
    for root in 0..sys.prototiles.len() {
        let big = supertile(sys, root, n + k, cap)?;
        let layer = supertile(sys, root, k, cap)?;
        let by_addr: HashMap<&[u32], usize> = layer
            .provenance
            .as_ref()
            .expect("supertiles carry provenance")
            .iter()
            .enumerate()
            .map(|(i, a)| (a.digits.as_slice(), i))
            .collect();
        let layout = Layout::new(sys, &big);
        let prov = big.provenance.as_ref().expect("supertiles carry provenance");
        let starts: Vec<usize> = (0..big.len()).filter(|&i| big.tiles[i].proto == anchor.proto).collect();
        let hits: Vec<Vec<PlacedTile>> = crate::par::flat_map(&starts, |&i| {
            let t = &big.tiles[i];
            let mut out = Vec::new();
            for s in sys.symmetries(anchor.proto) {
                let g: Motion = t.pose.compose(s).compose(&anchor_inv);
                let gf = compose_f(&compose_f(&layout.poses[i], &s.to_f64()), &anchor_inv_f);
                let mut matched = vec![i];
                let mut ok = true;
                for &j in &order {
                    let pt = &pattern.tiles[j];
                    let moved = PlacedTile { proto: pt.proto, pose: g.compose(&pt.pose) };
                    let tf = layout.vertices_under(pt.proto, &compose_f(&gf, &pt.pose.to_f64()));
                    match layout.locate(&moved, &tf) {
                        Some(q) => matched.push(q),
                        None => {
                            ok = false;
                            break;
                        }
                    }
                }
                if !ok {
                    continue;
                }
                let mut ancestors: Vec<usize> = matched
                    .iter()
                    .map(|&q| {
                        let d = &prov[q].digits;
                        by_addr[&d[..d.len() - n]]
                    })
                    .collect();
                ancestors.sort_unstable();
                ancestors.dedup();
                // g = Hⁿ(h); move the ancestors by h⁻¹ so that T sits at its standard pose.
                let h = g.contraction_conjugate(&lam_n);
                let rep = sys
                    .symmetries(proto)
                    .iter()
                    .map(|sym| {
                        let back = h.compose(sym).inverse();
                        let mut v: Vec<PlacedTile> = ancestors
                            .iter()
                            .map(|&a| {
                                let x = &layer.tiles[a];
                                sys.normalize(&PlacedTile { proto: x.proto, pose: back.compose(&x.pose) })
                            })
                            .collect();
                        v.sort();
                        v
                    })
                    .min()
                    .expect("identity symmetry");
                out.push(rep);
            }
            out
        });
        occurrences += hits.len();
        patches.extend(hits);
    }
    Ok(PredecessorSet { proto, level: n, depth: k, count: patches.len(), patches, occurrences })
}

#[derive(Debug, Clone, Serialize)]
pub struct Stabilization {
    pub proto: usize,
    pub depth: usize,
    pub counts: Vec<usize>,
    /// `P_n ⊆ P_{n+1}` for every computed `n`.
    pub nested: bool,
    /// Least `N` with `P_N = P_{N+1}`.
    pub first_repeat: Option<usize>,
    /// Least `N < n_max` with `P_N = P_{N+1} = ⋯ = P_{n_max}`.
    pub stabilized_at: Option<usize>,
    /// Whether searching one level deeper reproduced every set.
    pub depth_certified: bool,
    #[serde(skip)]
    pub sets: Vec<PredecessorSet>,
}

/// Computes `P_0(T), …, P_{n_max}(T)` at depth `k` and again at depth `k + 1`.
pub fn stabilization(sys: &TilingSystem, proto: usize, n_max: usize, k: usize, cap: usize) -> Result<Stabilization> {
    let mut sets = Vec::new();
    let mut depth_certified = true;
    for n in 0..=n_max {
        let a = predecessor_sets(sys, proto, n, k, cap)?;
        let b = predecessor_sets(sys, proto, n, k + 1, cap)?;
        depth_certified &= a.patches == b.patches;
        sets.push(b);
    }
    let nested = sets.windows(2).all(|w| w[0].patches.is_subset(&w[1].patches));
    let first_repeat = sets.windows(2).position(|w| w[0].patches == w[1].patches);
    let last = &sets[n_max].patches;
    let tail = sets.iter().rposition(|s| s.patches != *last).map_or(0, |i| i + 1);
    let stabilized_at = (tail < n_max).then_some(tail);
    Ok(Stabilization {
        proto,
        depth: k,
        counts: sets.iter().map(|s| s.count).collect(),
        nested,
        first_repeat,
        stabilized_at,
        depth_certified,
        sets,
    })
}
