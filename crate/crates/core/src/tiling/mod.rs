//! Prototiles, placed tiles, patches and substitution rules.

mod index;
mod ops;
mod validate;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{Motion, NumberField, Point, Scalar};
use crate::geometry;

pub use index::PatchIndex;
pub use ops::{
    ball_patch, boundary_complex, check_patch, patches_agree_on_overlap, substitute, support_boundary, support_radius, supertile,
    DEFAULT_TILE_CAP,
};
pub use validate::{transition_matrix, validate_system, CoverVerdict, ValidationReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Dimension {
    One,
    Two,
}

/// A color marking: a segment strictly inside the tile, with a length specific to its color.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ColorMark {
    pub color: u32,
    pub from: Point,
    pub to: Point,
}

/// A reference tile. Two-dimensional prototiles are strictly convex
/// counterclockwise polygons; one-dimensional prototiles are intervals
/// `[(0,0), (len,0)]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prototile {
    pub id: usize,
    pub name: String,
    pub vertices: Vec<Point>,
    pub mark: Option<ColorMark>,
}

/// A congruent copy `pose(prototile)` of a prototile.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlacedTile {
    pub proto: usize,
    pub pose: Motion,
}

/// Position of a tile inside the supertile it was generated from.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SupertileAddress {
    pub root: usize,
    /// Child index at each substitution step, outermost first.
    pub digits: Vec<u32>,
}

impl SupertileAddress {
    /// Address of the ancestor `levels` steps up.
    pub fn ancestor(&self, levels: usize) -> SupertileAddress {
        let keep = self.digits.len().saturating_sub(levels);
        SupertileAddress { root: self.root, digits: self.digits[..keep].to_vec() }
    }
}

/// A finite set of tiles with pairwise disjoint interiors.
#[derive(Debug, Clone, Default)]
pub struct Patch {
    pub tiles: Vec<PlacedTile>,
    pub provenance: Option<Vec<SupertileAddress>>,
}

impl Patch {
    pub fn new(tiles: Vec<PlacedTile>) -> Patch {
        Patch { tiles, provenance: None }
    }

    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    /// The image of the patch under a motion; provenance is kept.
    pub fn transformed(&self, sys: &TilingSystem, g: &Motion) -> Patch {
        let tiles = crate::par::map(&self.tiles, |t| sys.normalize(&PlacedTile { proto: t.proto, pose: g.compose(&t.pose) }));
        Patch { tiles, provenance: self.provenance.clone() }
    }

    /// Tile set as a sorted vector of normalized tiles (the set identity of the patch).
    pub fn tile_set(&self, sys: &TilingSystem) -> Vec<PlacedTile> {
        let mut v: Vec<PlacedTile> = self.tiles.iter().map(|t| sys.normalize(t)).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn same_tiles(&self, other: &Patch, sys: &TilingSystem) -> bool {
        self.tile_set(sys) == other.tile_set(sys)
    }

    /// Sub-patch with the given tile indices, provenance carried along.
    pub fn select(&self, idx: &[usize]) -> Patch {
        Patch {
            tiles: idx.iter().map(|&i| self.tiles[i].clone()).collect(),
            provenance: self.provenance.as_ref().map(|p| idx.iter().map(|&i| p[i].clone()).collect()),
        }
    }
}

/// One tile of the decomposition of an inflated prototile.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Child {
    pub proto: usize,
    pub pose: Motion,
}

/// `λ·T = ⋃ children(T)` for every prototile `T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubstitutionRule {
    pub lambda: Scalar,
    pub children: Vec<Vec<Child>>,
}

/// Alphabet, substitution and the geometric constants of a substitution tiling system.
#[derive(Debug, Clone)]
pub struct TilingSystem {
    pub name: String,
    pub field: Arc<NumberField>,
    pub dim: Dimension,
    pub prototiles: Vec<Prototile>,
    pub rule: SubstitutionRule,
    /// Every prototile contains an open ball of this radius.
    pub inner_radius: Scalar,
    /// Upper bound on prototile diameters.
    pub max_diameter: Scalar,
    inv_lambda: Scalar,
    symmetries: Vec<Vec<Motion>>,
}

impl TilingSystem {
    pub fn new(
        name: impl Into<String>,
        field: Arc<NumberField>,
        dim: Dimension,
        prototiles: Vec<Prototile>,
        rule: SubstitutionRule,
        inner_radius: Scalar,
        max_diameter: Scalar,
    ) -> Result<TilingSystem> {
        if prototiles.is_empty() {
            return Err(Error::InvalidSystem("empty alphabet".into()));
        }
        for (i, p) in prototiles.iter().enumerate() {
            if p.id != i {
                return Err(Error::InvalidSystem(format!("prototile {} has id {}", i, p.id)));
            }
            let min_vertices = if dim == Dimension::One { 2 } else { 3 };
            if p.vertices.len() < min_vertices || (dim == Dimension::One && p.vertices.len() != 2) {
                return Err(Error::InvalidSystem(format!("prototile {} has {} vertices", i, p.vertices.len())));
            }
        }
        if rule.children.len() != prototiles.len() {
            return Err(Error::InvalidSystem("rule must list children for every prototile".into()));
        }
        for kids in &rule.children {
            if kids.iter().any(|c| c.proto >= prototiles.len()) {
                return Err(Error::InvalidSystem("child refers to unknown prototile".into()));
            }
        }
        if rule.lambda.cmp_value(&Scalar::one(&field)).is_le() {
            return Err(Error::InvalidSystem("expansion factor must exceed 1".into()));
        }
        if !inner_radius.is_positive() {
            return Err(Error::InvalidSystem("inner radius must be positive".into()));
        }
        let inv_lambda = rule.lambda.try_inv()?;
        let symmetries = prototiles.iter().map(proto_symmetries).collect();
        Ok(TilingSystem {
            name: name.into(),
            field,
            dim,
            prototiles,
            rule,
            inner_radius,
            max_diameter,
            inv_lambda,
            symmetries,
        })
    }

    pub fn lambda(&self) -> &Scalar {
        &self.rule.lambda
    }

    pub fn inv_lambda(&self) -> &Scalar {
        &self.inv_lambda
    }

    pub fn lambda_f64(&self) -> f64 {
        self.rule.lambda.to_f64()
    }

    pub fn inner_radius_f64(&self) -> f64 {
        self.inner_radius.to_f64()
    }

    pub fn max_diameter_f64(&self) -> f64 {
        self.max_diameter.to_f64()
    }

    /// Orientation-preserving self-congruences of a prototile (marks included).
    pub fn symmetries(&self, proto: usize) -> &[Motion] {
        &self.symmetries[proto]
    }

    /// Canonical pose among those describing the same tile.
    pub fn normalize(&self, tile: &PlacedTile) -> PlacedTile {
        let syms = &self.symmetries[tile.proto];
        if syms.len() == 1 {
            return tile.clone();
        }
        syms.iter()
            .map(|s| PlacedTile { proto: tile.proto, pose: tile.pose.compose(s) })
            .min()
            .expect("identity symmetry")
    }

    pub fn identity_tile(&self, proto: usize) -> PlacedTile {
        PlacedTile { proto, pose: Motion::identity(&self.field) }
    }

    pub fn tile_vertices(&self, tile: &PlacedTile) -> Vec<Point> {
        self.prototiles[tile.proto].vertices.iter().map(|v| tile.pose.apply(v)).collect()
    }

    pub fn tile_vertices_f64(&self, tile: &PlacedTile) -> Vec<[f64; 2]> {
        self.tile_vertices(tile).iter().map(Point::to_f64).collect()
    }

    pub fn tile_mark(&self, tile: &PlacedTile) -> Option<(Point, Point)> {
        self.prototiles[tile.proto].mark.as_ref().map(|m| (tile.pose.apply(&m.from), tile.pose.apply(&m.to)))
    }

    /// Area (2-D) or length (1-D) of a prototile.
    pub fn measure(&self, proto: usize) -> Scalar {
        let v = &self.prototiles[proto].vertices;
        match self.dim {
            Dimension::Two => geometry::area2(v).scale_ratio(1, 2),
            Dimension::One => (&v[1].x - &v[0].x).abs(),
        }
    }

    pub fn patch_measure(&self, patch: &Patch) -> Scalar {
        let mut acc = Scalar::zero(&self.field);
        for t in &patch.tiles {
            acc = acc + self.measure(t.proto);
        }
        acc
    }

    /// `λ^k` for the area scaling of a substitution step (`λ²` in the plane, `λ` on the line).
    pub fn measure_factor(&self) -> Scalar {
        match self.dim {
            Dimension::Two => self.lambda().square(),
            Dimension::One => self.lambda().clone(),
        }
    }

    /// Centroid of the tile's vertices (an interior point).
    pub fn tile_center(&self, tile: &PlacedTile) -> Point {
        geometry::vertex_centroid(&self.tile_vertices(tile))
    }

    /// Whether two tiles have disjoint interiors, exactly.
    pub fn interiors_disjoint(&self, a: &PlacedTile, b: &PlacedTile) -> bool {
        let va = self.tile_vertices(a);
        let vb = self.tile_vertices(b);
        match self.dim {
            Dimension::Two => geometry::convex_interiors_disjoint(&va, &vb),
            Dimension::One => {
                let (a0, a1) = ordered(&va[0].x, &va[1].x);
                let (b0, b1) = ordered(&vb[0].x, &vb[1].x);
                a1.cmp_value(b0).is_le() || b1.cmp_value(a0).is_le()
            }
        }
    }

    /// Squared distance from a point to the closed tile.
    pub fn sq_dist_to_tile(&self, tile: &PlacedTile, p: &Point) -> Scalar {
        geometry::sq_dist_point_convex(&self.tile_vertices(tile), p)
    }

    /// Region of the level-one supertile `H(g)(λ·T)` of a tile `g·T`.
    pub fn inflated_vertices(&self, tile: &PlacedTile) -> Vec<Point> {
        let h = tile.pose.expansion_conjugate(self.lambda());
        self.prototiles[tile.proto].vertices.iter().map(|v| h.apply(&v.scale(self.lambda()))).collect()
    }

    /// Children of a placed tile, normalized, in rule order.
    pub fn children_of(&self, tile: &PlacedTile) -> Vec<PlacedTile> {
        let h = tile.pose.expansion_conjugate(self.lambda());
        self.rule.children[tile.proto]
            .iter()
            .map(|c| self.normalize(&PlacedTile { proto: c.proto, pose: h.compose(&c.pose) }))
            .collect()
    }

    /// Parent placement making `tile` the `index`-th child of prototile `parent`.
    pub fn parent_for(&self, tile: &PlacedTile, parent: usize, index: usize) -> PlacedTile {
        let c = &self.rule.children[parent][index];
        let h = tile.pose.compose(&c.pose.inverse());
        PlacedTile { proto: parent, pose: h.contraction_conjugate(&self.inv_lambda) }
    }
}

fn ordered<'a>(a: &'a Scalar, b: &'a Scalar) -> (&'a Scalar, &'a Scalar) {
    if a.cmp_value(b).is_le() {
        (a, b)
    } else {
        (b, a)
    }
}

/// Rotations about some point mapping the prototile (with its mark) onto itself.
fn proto_symmetries(p: &Prototile) -> Vec<Motion> {
    let f = p.vertices[0].field().clone();
    let mut out = vec![Motion::identity(&f)];
    let n = p.vertices.len();
    if n < 3 {
        return out;
    }
    for k in 1..n {
        let Some(g) = Motion::from_pairs(&p.vertices[0], &p.vertices[1], &p.vertices[k], &p.vertices[(k + 1) % n])
        else {
            continue;
        };
        let maps_polygon = (0..n).all(|i| g.apply(&p.vertices[i]) == p.vertices[(i + k) % n]);
        let maps_mark = match &p.mark {
            None => true,
            Some(m) => {
                let (a, b) = (g.apply(&m.from), g.apply(&m.to));
                (a == m.from && b == m.to) || (a == m.to && b == m.from)
            }
        };
        if maps_polygon && maps_mark {
            out.push(g);
        }
    }
    out
}
