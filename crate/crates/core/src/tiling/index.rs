use std::collections::HashMap;

use super::{Patch, TilingSystem};
use crate::geometry::{bbox_f64, bboxes_overlap, dist_point_convex_f64};
use crate::exact::{Point, Scalar};

/// Uniform grid over tile bounding boxes, for candidate filtering before exact tests.
#[derive(Debug, Clone)]
pub struct PatchIndex {
    cell: f64,
    verts: Vec<Vec<[f64; 2]>>,
    boxes: Vec<[f64; 4]>,
    grid: HashMap<(i64, i64), Vec<usize>>,
}

/// Float tolerance separating the cheap verdicts from the exact ones.
pub(crate) const SLACK: f64 = 1e-7;

impl PatchIndex {
    pub fn new(sys: &TilingSystem, patch: &Patch) -> PatchIndex {
        let verts: Vec<Vec<[f64; 2]>> = crate::par::map(&patch.tiles, |t| sys.tile_vertices_f64(t));
        let boxes: Vec<[f64; 4]> = verts.iter().map(|v| bbox_f64(v)).collect();
        let cell = sys.max_diameter_f64().max(1e-6);
        let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        for (i, b) in boxes.iter().enumerate() {
            let (x0, y0) = cell_of(cell, b[0], b[1]);
            let (x1, y1) = cell_of(cell, b[2], b[3]);
            for cx in x0..=x1 {
                for cy in y0..=y1 {
                    grid.entry((cx, cy)).or_default().push(i);
                }
            }
        }
        PatchIndex { cell, verts, boxes, grid }
    }

    pub fn len(&self) -> usize {
        self.verts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.verts.is_empty()
    }

    pub fn vertices_f64(&self, i: usize) -> &[[f64; 2]] {
        &self.verts[i]
    }

    pub fn bbox(&self, i: usize) -> &[f64; 4] {
        &self.boxes[i]
    }

    /// Bounding box of all tiles.
    pub fn extent(&self) -> [f64; 4] {
        let mut b = [f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY];
        for t in &self.boxes {
            b[0] = b[0].min(t[0]);
            b[1] = b[1].min(t[1]);
            b[2] = b[2].max(t[2]);
            b[3] = b[3].max(t[3]);
        }
        b
    }

    /// Indices of tiles whose bounding boxes meet `b` (sorted, deduplicated).
    pub fn query_box(&self, b: &[f64; 4]) -> Vec<usize> {
        let (x0, y0) = cell_of(self.cell, b[0] - SLACK, b[1] - SLACK);
        let (x1, y1) = cell_of(self.cell, b[2] + SLACK, b[3] + SLACK);
        let mut out = Vec::new();
        if (x1 - x0 + 1).saturating_mul(y1 - y0 + 1) > 4 * self.grid.len() as i64 {
            out.extend((0..self.boxes.len()).filter(|&i| bboxes_overlap(&self.boxes[i], b, SLACK)));
            return out;
        }
        for cx in x0..=x1 {
            for cy in y0..=y1 {
                if let Some(v) = self.grid.get(&(cx, cy)) {
                    out.extend(v.iter().copied().filter(|&i| bboxes_overlap(&self.boxes[i], b, SLACK)));
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Indices of tiles whose closed region meets the open ball `B_r(a)`, decided exactly.
    pub fn ball(&self, sys: &TilingSystem, patch: &Patch, a: &Point, r: f64) -> Vec<usize> {
        let af = a.to_f64();
        let cands = self.query_box(&[af[0] - r, af[1] - r, af[0] + r, af[1] + r]);
        let mut r2: Option<Scalar> = None;
        cands
            .into_iter()
            .filter(|&i| {
                let d = dist_point_convex_f64(&self.verts[i], af);
                if d < r - SLACK {
                    return true;
                }
                if d > r + SLACK {
                    return false;
                }
                let r2 = r2.get_or_insert_with(|| {
                    let rs = Scalar::from_f64(a.field(), r).expect("finite radius");
                    rs.square()
                });
                sys.sq_dist_to_tile(&patch.tiles[i], a).cmp_value(r2).is_lt()
            })
            .collect()
    }

    /// Indices of tiles whose closed region contains `a` (one tile, or several on shared boundaries).
    pub fn containing(&self, sys: &TilingSystem, patch: &Patch, a: &Point) -> Vec<usize> {
        let af = a.to_f64();
        self.query_box(&[af[0], af[1], af[0], af[1]])
            .into_iter()
            .filter(|&i| {
                let d = dist_point_convex_f64(&self.verts[i], af);
                d <= SLACK && sys.sq_dist_to_tile(&patch.tiles[i], a).is_zero()
            })
            .collect()
    }
}

fn cell_of(cell: f64, x: f64, y: f64) -> (i64, i64) {
    ((x / cell).floor() as i64, (y / cell).floor() as i64)
}
