//! JSON file formats for systems and patches.
//!
//! Exact scalars are written as rational coefficient vectors over the field basis
//! `1, θ, θ², ...`, never as floats. Integers that fit in `i64` are JSON numbers, larger ones
//! are decimal strings, so `serialize(parse(serialize(x)))` is byte-identical.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{Motion, NumberField, Point, Rotation, Scalar};
use crate::systems;
use crate::tiling::{Child, ColorMark, Dimension, Patch, PlacedTile, Prototile, SubstitutionRule, SupertileAddress, TilingSystem};

pub const SYSTEM_FORMAT: &str = "tilesys-system/1";
pub const PATCH_FORMAT: &str = "tilesys-patch/1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Int {
    Small(i64),
    Big(String),
}

impl Int {
    fn from_big(n: &BigInt) -> Int {
        match n.to_i64() {
            Some(v) => Int::Small(v),
            None => Int::Big(n.to_string()),
        }
    }

    fn to_big(&self) -> Result<BigInt> {
        match self {
            Int::Small(v) => Ok(BigInt::from(*v)),
            Int::Big(s) => s.parse().map_err(|_| Error::Parse(format!("bad integer {s:?}"))),
        }
    }
}

/// A rational as `[numerator, denominator]`.
pub type RationalJson = [Int; 2];

fn rational_json(q: &BigRational) -> RationalJson {
    [Int::from_big(q.numer()), Int::from_big(q.denom())]
}

fn rational_from(q: &RationalJson) -> Result<BigRational> {
    let d = q[1].to_big()?;
    if d == BigInt::from(0) {
        return Err(Error::Parse("zero denominator".into()));
    }
    Ok(BigRational::new(q[0].to_big()?, d))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalarJson {
    pub coeffs: Vec<RationalJson>,
}

impl ScalarJson {
    pub fn from_scalar(x: &Scalar) -> ScalarJson {
        ScalarJson { coeffs: x.coeffs().iter().map(rational_json).collect() }
    }

    pub fn to_scalar(&self, field: &Arc<NumberField>) -> Result<Scalar> {
        if self.coeffs.len() > field.degree() {
            return Err(Error::Parse(format!("{} coefficients for a degree {} field", self.coeffs.len(), field.degree())));
        }
        let q = self.coeffs.iter().map(rational_from).collect::<Result<Vec<_>>>()?;
        Scalar::from_coeffs(field, &q)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointJson(pub ScalarJson, pub ScalarJson);

impl PointJson {
    fn from_point(p: &Point) -> PointJson {
        PointJson(ScalarJson::from_scalar(&p.x), ScalarJson::from_scalar(&p.y))
    }

    fn to_point(&self, f: &Arc<NumberField>) -> Result<Point> {
        Ok(Point::new(self.0.to_scalar(f)?, self.1.to_scalar(f)?))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoseJson {
    pub c: ScalarJson,
    pub s: ScalarJson,
    pub tx: ScalarJson,
    pub ty: ScalarJson,
}

impl PoseJson {
    pub fn from_motion(m: &Motion) -> PoseJson {
        PoseJson {
            c: ScalarJson::from_scalar(m.rot.cos()),
            s: ScalarJson::from_scalar(m.rot.sin()),
            tx: ScalarJson::from_scalar(&m.trans.x),
            ty: ScalarJson::from_scalar(&m.trans.y),
        }
    }

    pub fn to_motion(&self, f: &Arc<NumberField>) -> Result<Motion> {
        let rot = Rotation::new(self.c.to_scalar(f)?, self.s.to_scalar(f)?)?;
        Ok(Motion::new(rot, Point::new(self.tx.to_scalar(f)?, self.ty.to_scalar(f)?)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldJson {
    pub min_poly: Vec<Int>,
    /// Isolating interval `(lo, hi]` of the embedded root.
    pub embedding: [RationalJson; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkJson {
    pub color: u32,
    pub from: PointJson,
    pub to: PointJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrototileJson {
    pub name: String,
    pub vertices: Vec<PointJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mark: Option<MarkJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChildJson {
    pub proto: usize,
    pub pose: PoseJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleJson {
    pub lambda: ScalarJson,
    pub children: Vec<Vec<ChildJson>>,
}

/// A complete system definition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemFile {
    pub format: String,
    pub name: String,
    pub dimension: Dimension,
    pub field: FieldJson,
    pub prototiles: Vec<PrototileJson>,
    pub rule: RuleJson,
    pub inner_radius: ScalarJson,
    pub max_diameter: ScalarJson,
    /// Informational only; recomputed on every write.
    #[serde(default)]
    pub metadata: BTreeMap<String, serde_json::Value>,
}

impl SystemFile {
    pub fn from_system(sys: &TilingSystem) -> SystemFile {
        let (lo, hi) = sys.field.root_interval();
        let mut metadata = BTreeMap::new();
        metadata.insert("lambda_approx".to_string(), serde_json::json!(sys.lambda_f64()));
        metadata.insert(
            "children_per_prototile".to_string(),
            serde_json::json!(sys.rule.children.iter().map(Vec::len).collect::<Vec<_>>()),
        );
        SystemFile {
            format: SYSTEM_FORMAT.to_string(),
            name: sys.name.clone(),
            dimension: sys.dim,
            field: FieldJson {
                min_poly: sys.field.min_poly().iter().map(Int::from_big).collect(),
                embedding: [rational_json(lo), rational_json(hi)],
            },
            prototiles: sys
                .prototiles
                .iter()
                .map(|p| PrototileJson {
                    name: p.name.clone(),
                    vertices: p.vertices.iter().map(PointJson::from_point).collect(),
                    mark: p.mark.as_ref().map(|m| MarkJson {
                        color: m.color,
                        from: PointJson::from_point(&m.from),
                        to: PointJson::from_point(&m.to),
                    }),
                })
                .collect(),
            rule: RuleJson {
                lambda: ScalarJson::from_scalar(sys.lambda()),
                children: sys
                    .rule
                    .children
                    .iter()
                    .map(|kids| kids.iter().map(|c| ChildJson { proto: c.proto, pose: PoseJson::from_motion(&c.pose) }).collect())
                    .collect(),
            },
            inner_radius: ScalarJson::from_scalar(&sys.inner_radius),
            max_diameter: ScalarJson::from_scalar(&sys.max_diameter),
            metadata,
        }
    }

    pub fn to_system(&self) -> Result<TilingSystem> {
        if self.format != SYSTEM_FORMAT {
            return Err(Error::Parse(format!("unsupported system format {:?}", self.format)));
        }
        let poly = self.field.min_poly.iter().map(Int::to_big).collect::<Result<Vec<_>>>()?;
        let field = NumberField::new(
            poly,
            rational_from(&self.field.embedding[0])?,
            rational_from(&self.field.embedding[1])?,
        )?.interned();
        let f = &field;
        let prototiles = self
            .prototiles
            .iter()
            .enumerate()
            .map(|(id, p)| {
                Ok(Prototile {
                    id,
                    name: p.name.clone(),
                    vertices: p.vertices.iter().map(|v| v.to_point(f)).collect::<Result<_>>()?,
                    mark: match &p.mark {
                        None => None,
                        Some(m) => Some(ColorMark { color: m.color, from: m.from.to_point(f)?, to: m.to.to_point(f)? }),
                    },
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let children = self
            .rule
            .children
            .iter()
            .map(|kids| kids.iter().map(|c| Ok(Child { proto: c.proto, pose: c.pose.to_motion(f)? })).collect())
            .collect::<Result<Vec<Vec<Child>>>>()?;
        let rule = SubstitutionRule { lambda: self.rule.lambda.to_scalar(f)?, children };
        TilingSystem::new(
            self.name.clone(),
            field.clone(),
            self.dimension,
            prototiles,
            rule,
            self.inner_radius.to_scalar(f)?,
            self.max_diameter.to_scalar(f)?,
        )
    }
}

/// Which system a patch belongs to: a catalog name, or a full embedded definition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemRef {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub definition: Option<SystemFile>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TileJson {
    pub proto: usize,
    pub pose: PoseJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatchFile {
    pub format: String,
    pub system: SystemRef,
    pub tiles: Vec<TileJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Vec<SupertileAddress>>,
}

impl PatchFile {
    /// Catalog systems are referenced by name; anything else is embedded.
    pub fn from_patch(sys: &TilingSystem, patch: &Patch) -> PatchFile {
        let own = SystemFile::from_system(sys);
        let catalog_match = systems::by_name(&sys.name).is_ok_and(|c| SystemFile::from_system(&c) == own);
        PatchFile {
            format: PATCH_FORMAT.to_string(),
            system: SystemRef { name: sys.name.clone(), definition: (!catalog_match).then_some(own) },
            tiles: patch.tiles.iter().map(|t| TileJson { proto: t.proto, pose: PoseJson::from_motion(&t.pose) }).collect(),
            provenance: patch.provenance.clone(),
        }
    }

    pub fn resolve_system(&self) -> Result<TilingSystem> {
        match &self.system.definition {
            Some(def) => def.to_system(),
            None => systems::by_name(&self.system.name),
        }
    }

    /// Rebuilds the patch against `sys`, which must be the referenced system.
    pub fn to_patch(&self, sys: &TilingSystem) -> Result<Patch> {
        if self.format != PATCH_FORMAT {
            return Err(Error::Parse(format!("unsupported patch format {:?}", self.format)));
        }
        let tiles = self
            .tiles
            .iter()
            .map(|t| {
                if t.proto >= sys.prototiles.len() {
                    return Err(Error::Parse(format!("unknown prototile {}", t.proto)));
                }
                Ok(PlacedTile { proto: t.proto, pose: t.pose.to_motion(&sys.field)? })
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(p) = &self.provenance {
            if p.len() != tiles.len() {
                return Err(Error::Parse("provenance length differs from tile count".into()));
            }
        }
        Ok(Patch { tiles, provenance: self.provenance.clone() })
    }
}

fn to_text<T: Serialize>(x: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(x)?;
    s.push('\n');
    Ok(s)
}

pub fn write_system(sys: &TilingSystem) -> Result<String> {
    to_text(&SystemFile::from_system(sys))
}

pub fn read_system(text: &str) -> Result<TilingSystem> {
    serde_json::from_str::<SystemFile>(text)?.to_system()
}

pub fn write_patch(sys: &TilingSystem, patch: &Patch) -> Result<String> {
    to_text(&PatchFile::from_patch(sys, patch))
}

pub fn read_patch(text: &str) -> Result<(TilingSystem, Patch)> {
    let file: PatchFile = serde_json::from_str(text)?;
    let sys = file.resolve_system()?;
    let patch = file.to_patch(&sys)?;
    Ok((sys, patch))
}

/// Accepts either a catalog name or a path to a system file.
pub fn load_system(name_or_path: &str) -> Result<TilingSystem> {
    match systems::by_name(name_or_path) {
        Ok(s) => Ok(s),
        Err(e) => {
            let path = std::path::Path::new(name_or_path);
            if path.exists() {
                read_system(&std::fs::read_to_string(path)?)
            } else {
                Err(e)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tiling::supertile;

    #[test]
    fn catalog_systems_round_trip() {
        for name in ["penrose", "fibonacci", "square", "pinwheel:1,2", "pinwheel:3,4"] {
            let sys = systems::by_name(name).unwrap();
            let a = write_system(&sys).unwrap();
            let back = read_system(&a).unwrap();
            assert_eq!(write_system(&back).unwrap(), a, "{name}");
            assert_eq!(back.rule, sys.rule);
        }
    }

    #[test]
    fn catalog_patch_is_referenced_by_name() {
        let sys = systems::by_name("pinwheel:1,2").unwrap();
        let p = supertile(&sys, 0, 2, 1000).unwrap();
        let text = write_patch(&sys, &p).unwrap();
        let file: PatchFile = serde_json::from_str(&text).unwrap();
        assert!(file.system.definition.is_none());
        let (s2, p2) = read_patch(&text).unwrap();
        assert_eq!(p2.tiles, p.tiles);
        assert_eq!(p2.provenance, p.provenance);
        assert_eq!(write_patch(&s2, &p2).unwrap(), text);
    }

    #[test]
    fn renamed_system_is_embedded() {
        let mut sys = systems::by_name("fibonacci").unwrap();
        sys.name = "my-fib".into();
        let p = supertile(&sys, 1, 3, 100).unwrap();
        let text = write_patch(&sys, &p).unwrap();
        assert!(text.contains("\"definition\""));
        let (s2, p2) = read_patch(&text).unwrap();
        assert_eq!(s2.name, "my-fib");
        assert_eq!(write_patch(&s2, &p2).unwrap(), text);
    }

    #[test]
    fn big_integers_become_strings() {
        let big: BigInt = BigInt::from(i64::MAX) * 3;
        let j = serde_json::to_string(&Int::from_big(&big)).unwrap();
        assert_eq!(j, format!("\"{big}\""));
        let back: Int = serde_json::from_str(&j).unwrap();
        assert_eq!(back.to_big().unwrap(), big);
        assert_eq!(serde_json::to_string(&Int::from_big(&BigInt::from(-7))).unwrap(), "-7");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(read_patch("{").is_err());
        let sys = systems::by_name("square").unwrap();
        let text = write_system(&sys).unwrap().replace(SYSTEM_FORMAT, "other/9");
        assert!(matches!(read_system(&text), Err(Error::Parse(_))));
    }
}
