use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::{expected_group, subgroup_relation, GroupDescriptor, RotationSubgroup, SubgroupRelation, UnitRotation};
use crate::analysis::{classify, self_congruences, CanonicalPatch};
use crate::error::Result;
use crate::exact::Rotation;
use crate::tiling::{supertile, TilingSystem};

#[derive(Debug, Clone, Serialize)]
pub struct OrientationReport {
    pub system: String,
    pub radius: f64,
    pub level: usize,
    pub patch_types: usize,
    pub distinct_rotations: usize,
    pub group: GroupDescriptor,
    /// Relation to the group the catalog expects, first = computed.
    pub catalog_relation: Option<SubgroupRelation>,
}

/// The group generated by rotational parts of motions carrying one sampled `r`-ball patch onto
/// a congruent one, over the level-`level` supertiles.
pub fn relative_orientation_group(
    sys: &TilingSystem,
    r: f64,
    level: usize,
    cap: usize,
) -> Result<(RotationSubgroup, OrientationReport)> {
    let mut first: BTreeMap<CanonicalPatch, Rotation> = BTreeMap::new();
    let mut rots: BTreeSet<Rotation> = BTreeSet::new();
    for t in 0..sys.prototiles.len() {
        let p = supertile(sys, t, level, cap)?;
        for (_, _, c) in classify(sys, &p, r) {
            // The canonical motion carries the ball to the encoding; compare with the first one seen.
            let rot = c.motion.rot.clone();
            match first.get(&c) {
                Some(r0) => {
                    rots.insert(r0.inverse().compose(&rot));
                }
                None => {
                    if c.stabilizer > 1 {
                        for h in self_congruences(sys, &c.as_patch())? {
                            rots.insert(h.rot);
                        }
                    }
                    first.insert(c, rot);
                }
            }
        }
    }
    rots.retain(|r| !r.is_identity());
    let gens: Vec<UnitRotation> = rots.iter().cloned().map(UnitRotation::new).collect();
    let group = RotationSubgroup::from_generators(gens)?;
    let catalog_relation = match expected_group(&sys.name) {
        Some(e) => Some(subgroup_relation(&group, &e)?),
        None => None,
    };
    let report = OrientationReport {
        system: sys.name.clone(),
        radius: r,
        level,
        patch_types: first.len(),
        distinct_rotations: rots.len(),
        group: group.descriptor(),
        catalog_relation,
    };
    Ok((group, report))
}
