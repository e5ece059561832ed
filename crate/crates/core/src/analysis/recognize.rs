use std::collections::{HashMap, HashSet};

use serde::Serialize;

use super::{centroid_f, separation_f, Layout, Support};
use crate::certified::CertifiedValue;
use crate::error::{Error, Result};
use crate::tiling::{supertile, Patch, PlacedTile, TilingSystem};

/// Level-one parent of a tile, or why none was fixed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParentAssignment {
    Determined { parent: PlacedTile, child_index: usize },
    /// The radius-`D` ball about the tile leaves the patch.
    NoCollar,
    /// Several parents are consistent with the ball.
    Ambiguous { candidates: usize },
}

impl ParentAssignment {
    pub fn parent(&self) -> Option<&PlacedTile> {
        match self {
            ParentAssignment::Determined { parent, .. } => Some(parent),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct DecompositionResult {
    pub radius: f64,
    pub assignments: Vec<ParentAssignment>,
    /// The distinct determined parents.
    pub parents: Patch,
}

impl DecompositionResult {
    pub fn determined(&self) -> usize {
        self.assignments.iter().filter(|a| a.parent().is_some()).count()
    }
}

/// A parent placement covering some tile, with its relation to the patch.
struct Candidate {
    tile: PlacedTile,
    verts: Vec<[f64; 2]>,
    /// Patch tiles equal to a child of this parent.
    covers: Vec<usize>,
    /// Patch tiles overlapping some child without being equal to it.
    conflicts: Vec<usize>,
}

struct Candidates {
    list: Vec<Candidate>,
    /// For each patch tile, candidate ids and the child index the tile would take.
    of_tile: Vec<Vec<(usize, usize)>>,
}

fn candidates(sys: &TilingSystem, layout: &Layout) -> Candidates {
    let n = layout.len();
    // Distinct parent placements proposed by each tile.
    let proposals: Vec<Vec<(PlacedTile, usize)>> = crate::par::map_range(n, |i| {
        let t = &layout.patch.tiles[i];
        let mut out = Vec::new();
        for (parent, kids) in sys.rule.children.iter().enumerate() {
            for (j, c) in kids.iter().enumerate() {
                if c.proto != t.proto {
                    continue;
                }
                for s in sys.symmetries(t.proto) {
                    let posed = PlacedTile { proto: t.proto, pose: t.pose.compose(s) };
                    out.push((sys.normalize(&sys.parent_for(&posed, parent, j)), j));
                }
            }
        }
        out.sort();
        out.dedup();
        out
    });
    let mut ids: HashMap<PlacedTile, usize> = HashMap::new();
    let mut tiles = Vec::new();
    let mut of_tile = vec![Vec::new(); n];
    for (i, props) in proposals.into_iter().enumerate() {
        for (p, j) in props {
            let id = *ids.entry(p.clone()).or_insert_with(|| {
                tiles.push(p);
                tiles.len() - 1
            });
            of_tile[i].push((id, j));
        }
    }
    let list = crate::par::map(&tiles, |p| {
        let mut covers = Vec::new();
        let mut conflicts = Vec::new();
        for child in sys.children_of(p) {
            let cf = sys.tile_vertices_f64(&child);
            let b = crate::geometry::bbox_f64(&cf);
            for q in layout.index.query_box(&b) {
                let qf = layout.index.vertices_f64(q);
                let sep = separation_f(sys.dim, &cf, qf);
                if sep > 1e-7 {
                    continue;
                }
                if layout.norm[q] == child {
                    covers.push(q);
                } else if sep < -1e-7 || !sys.interiors_disjoint(&child, &layout.patch.tiles[q]) {
                    conflicts.push(q);
                }
            }
        }
        covers.sort_unstable();
        conflicts.sort_unstable();
        conflicts.dedup();
        Candidate { tile: p.clone(), verts: sys.tile_vertices_f64(p), covers, conflicts }
    });
    Candidates { list, of_tile }
}

/// Search state for covering the tiles of one ball by pairwise disjoint parents.
struct Cover<'a> {
    sys: &'a TilingSystem,
    cands: &'a Candidates,
    ball: &'a HashSet<usize>,
    order: &'a [usize],
    covered: HashMap<usize, usize>,
    chosen: Vec<usize>,
    budget: usize,
}

impl Cover<'_> {
    fn usable(&self, id: usize) -> bool {
        let c = &self.cands.list[id];
        c.conflicts.iter().all(|q| !self.ball.contains(q))
            && c.covers.iter().all(|q| !self.covered.contains_key(q))
            && self.chosen.iter().all(|&o| self.disjoint(id, o))
    }

    fn disjoint(&self, a: usize, b: usize) -> bool {
        let (ca, cb) = (&self.cands.list[a], &self.cands.list[b]);
        let sep = separation_f(self.sys.dim, &ca.verts, &cb.verts);
        if sep > 1e-7 {
            return true;
        }
        if sep < -1e-7 {
            return false;
        }
        self.sys.interiors_disjoint(&ca.tile, &cb.tile)
    }

    fn push(&mut self, id: usize) {
        for &q in &self.cands.list[id].covers {
            self.covered.insert(q, id);
        }
        self.chosen.push(id);
    }

    fn pop(&mut self) {
        let id = self.chosen.pop().expect("nonempty");
        for q in &self.cands.list[id].covers {
            self.covered.remove(q);
        }
    }

    /// Whether the remaining ball tiles can be covered. `None` when the budget runs out.
    fn solve(&mut self) -> Option<bool> {
        if self.budget == 0 {
            return None;
        }
        self.budget -= 1;
        let Some(&t) = self.order.iter().find(|q| !self.covered.contains_key(q)) else {
            return Some(true);
        };
        for &(id, _) in &self.cands.of_tile[t] {
            if !self.usable(id) {
                continue;
            }
            self.push(id);
            let r = self.solve();
            self.pop();
            if r != Some(false) {
                return r;
            }
        }
        Some(false)
    }
}

const SEARCH_BUDGET: usize = 20_000;

fn assign(
    sys: &TilingSystem,
    layout: &Layout,
    support: &Support,
    cands: &Candidates,
    i: usize,
    radius: f64,
) -> Result<ParentAssignment> {
    let t = &layout.patch.tiles[i];
    let center = sys.tile_center(t);
    if support.radius(&center) < radius {
        return Ok(ParentAssignment::NoCollar);
    }
    let members = layout.index.ball(sys, layout.patch, &center, radius);
    let c = centroid_f(layout.index.vertices_f64(i));
    let mut order = members.clone();
    order.sort_by(|&a, &b| {
        super::dist_f(layout.centers[a], c).total_cmp(&super::dist_f(layout.centers[b], c))
    });
    let ball: HashSet<usize> = members.into_iter().collect();
    let mut feasible = Vec::new();
    let mut exhausted = false;
    for &(id, j) in &cands.of_tile[i] {
        let mut cover = Cover {
            sys,
            cands,
            ball: &ball,
            order: &order,
            covered: HashMap::new(),
            chosen: Vec::new(),
            budget: SEARCH_BUDGET,
        };
        if !cover.usable(id) {
            continue;
        }
        cover.push(id);
        match cover.solve() {
            Some(true) => feasible.push((id, j)),
            Some(false) => {}
            None => exhausted = true,
        }
        if feasible.len() > 1 {
            break;
        }
    }
    match (feasible.as_slice(), exhausted) {
        ([(id, j)], false) => Ok(ParentAssignment::Determined { parent: cands.list[*id].tile.clone(), child_index: *j }),
        ([], false) => Err(Error::Inconsistent(format!("no parent placement is consistent with the ball about tile {i}"))),
        (f, _) => Ok(ParentAssignment::Ambiguous { candidates: f.len().max(2) }),
    }
}

/// Level-one parents of every tile whose radius-`radius` ball about its center lies in the patch,
/// decided by an exact-cover search over that ball.
pub fn decompose(sys: &TilingSystem, patch: &Patch, radius: f64) -> Result<DecompositionResult> {
    let layout = Layout::new(sys, patch);
    let support = Support::new(sys, patch);
    let cands = candidates(sys, &layout);
    decompose_with(sys, &layout, &support, &cands, radius, &(0..patch.len()).collect::<Vec<_>>())
}

fn decompose_with(
    sys: &TilingSystem,
    layout: &Layout,
    support: &Support,
    cands: &Candidates,
    radius: f64,
    which: &[usize],
) -> Result<DecompositionResult> {
    let mut assignments = vec![ParentAssignment::NoCollar; layout.len()];
    let found = crate::par::map(which, |&i| assign(sys, layout, support, cands, i, radius));
    for (&i, a) in which.iter().zip(found) {
        assignments[i] = a?;
    }
    let mut parents: Vec<PlacedTile> = assignments.iter().filter_map(|a| a.parent().cloned()).collect();
    parents.sort();
    parents.dedup();
    Ok(DecompositionResult { radius, assignments, parents: Patch::new(parents) })
}

#[derive(Debug, Clone, Serialize)]
pub struct RungResult {
    pub radius: f64,
    pub collared: usize,
    pub determined: usize,
    pub ambiguous: usize,
    /// Determined parents that differ from the supertile's own level-one layer.
    pub mismatched: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct RecognizabilityReport {
    pub system: String,
    pub level: usize,
    pub tiles: usize,
    pub rungs: Vec<RungResult>,
    /// Least ladder radius at which every collared tile had a unique parent; bounded below by the
    /// previous rung.
    pub radius: Option<CertifiedValue>,
}

/// Tries `D = m, 2m, 4m, …` on every tile of the level-`level` supertiles. A rung succeeds when
/// each tile with a full `D`-collar has a unique consistent parent; the ladder stops when no tile
/// has a collar.
pub fn recognizability_radius(sys: &TilingSystem, level: usize, cap: usize) -> Result<RecognizabilityReport> {
    if level < 2 {
        return Err(Error::InvalidArgument("recognizability needs level >= 2".into()));
    }
    struct Root<'a> {
        layout: Layout<'a>,
        support: Support,
        cands: Candidates,
        expected: Vec<PlacedTile>,
        depth: Vec<f64>,
    }
    let patches: Vec<Patch> = (0..sys.prototiles.len()).map(|s| supertile(sys, s, level, cap)).collect::<Result<_>>()?;
    let mut roots = Vec::new();
    for (s, p) in patches.iter().enumerate() {
        let layer = supertile(sys, s, level - 1, cap)?;
        let by_addr: HashMap<&[u32], &PlacedTile> = layer
            .provenance
            .as_ref()
            .expect("supertiles carry provenance")
            .iter()
            .zip(&layer.tiles)
            .map(|(a, t)| (a.digits.as_slice(), t))
            .collect();
        let expected = p
            .provenance
            .as_ref()
            .expect("supertiles carry provenance")
            .iter()
            .map(|a| sys.normalize(by_addr[&a.digits[..a.digits.len() - 1]]))
            .collect();
        let layout = Layout::new(sys, p);
        let support = Support::new(sys, p);
        let depth = p.tiles.iter().map(|t| support.radius(&sys.tile_center(t))).collect();
        let cands = candidates(sys, &layout);
        roots.push(Root { layout, support, cands, expected, depth });
    }

    let mut rungs = Vec::new();
    let mut radius = None;
    let mut d = sys.inner_radius_f64();
    let mut prev = 0.0;
    loop {
        let mut row = RungResult { radius: d, collared: 0, determined: 0, ambiguous: 0, mismatched: 0 };
        for r in &roots {
            let which: Vec<usize> = (0..r.layout.len()).filter(|&i| r.depth[i] >= d).collect();
            row.collared += which.len();
            let res = decompose_with(sys, &r.layout, &r.support, &r.cands, d, &which)?;
            for &i in &which {
                match &res.assignments[i] {
                    ParentAssignment::Determined { parent, .. } => {
                        row.determined += 1;
                        if *parent != r.expected[i] {
                            row.mismatched += 1;
                        }
                    }
                    _ => row.ambiguous += 1,
                }
            }
        }
        let collared = row.collared;
        let ok = collared > 0 && row.ambiguous == 0 && row.mismatched == 0;
        rungs.push(row);
        if ok {
            radius = Some(CertifiedValue::new(prev, d));
            break;
        }
        if collared == 0 {
            break;
        }
        prev = d;
        d *= 2.0;
    }
    Ok(RecognizabilityReport {
        system: sys.name.clone(),
        level,
        tiles: patches.iter().map(Patch::len).sum(),
        rungs,
        radius,
    })
}
