use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::lattice::{dot, IntVec};

use super::{FanAtlas, KlyachkoError, KlyachkoFamily};

/// A free module `Kⁿ` with one decreasing filtration per ray, given by jump
/// values: `E^ρ(i) = span{e_k : i ≤ jumps[ρ][k]}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaKlyachkoSpace {
    atlas: Arc<FanAtlas>,
    rank: usize,
    jumps: Vec<IntVec>,
}

#[derive(Serialize, Deserialize)]
struct SpaceJson {
    rank: usize,
    jumps: BTreeMap<usize, IntVec>,
}

impl Serialize for DeltaKlyachkoSpace {
    fn serialize<Z: serde::Serializer>(&self, s: Z) -> Result<Z::Ok, Z::Error> {
        SpaceJson {
            rank: self.rank,
            jumps: self.jumps.iter().cloned().enumerate().collect(),
        }
        .serialize(s)
    }
}

impl DeltaKlyachkoSpace {
    /// Checks shape only; use [`space_to_tuple`] for the compatibility test.
    pub fn new(atlas: Arc<FanAtlas>, rank: usize, jumps: Vec<IntVec>) -> Result<Self, KlyachkoError> {
        if jumps.len() != atlas.num_rays() {
            return Err(KlyachkoError::ShapeMismatch(format!(
                "{} jump rows for {} rays",
                jumps.len(),
                atlas.num_rays()
            )));
        }
        if let Some(r) = jumps.iter().position(|row| row.len() != rank) {
            return Err(KlyachkoError::ShapeMismatch(format!("ray {r} has {} jumps, rank is {rank}", jumps[r].len())));
        }
        Ok(DeltaKlyachkoSpace { atlas, rank, jumps })
    }

    pub fn from_json(atlas: Arc<FanAtlas>, value: &serde_json::Value) -> Result<Self, KlyachkoError> {
        let j: SpaceJson =
            serde_json::from_value(value.clone()).map_err(|e| KlyachkoError::ShapeMismatch(e.to_string()))?;
        let mut rows = Vec::with_capacity(atlas.num_rays());
        for r in 0..atlas.num_rays() {
            rows.push(
                j.jumps
                    .get(&r)
                    .cloned()
                    .ok_or_else(|| KlyachkoError::ShapeMismatch(format!("no jumps for ray {r}")))?,
            );
        }
        Self::new(atlas, j.rank, rows)
    }

    pub fn atlas(&self) -> &Arc<FanAtlas> {
        &self.atlas
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn jumps(&self) -> &[IntVec] {
        &self.jumps
    }

    /// Basis indices spanning `E^ρ(i)`.
    pub fn filtration(&self, ray: usize, i: i64) -> Vec<usize> {
        (0..self.rank).filter(|&k| i <= self.jumps[ray][k]).collect()
    }

    fn column(&self, k: usize) -> IntVec {
        self.jumps.iter().map(|row| row[k]).collect()
    }

    /// Each column with the given permutation applied: column `k` of the
    /// result is column `perm[k]` of `self`.
    pub fn permute_columns(&self, perm: &[usize]) -> Self {
        let jumps = self.jumps.iter().map(|row| perm.iter().map(|&k| row[k]).collect()).collect();
        DeltaKlyachkoSpace {
            atlas: self.atlas.clone(),
            rank: self.rank,
            jumps,
        }
    }

    pub fn with_jump(&self, ray: usize, k: usize, value: i64) -> Self {
        let mut out = self.clone();
        out.jumps[ray][k] = value;
        out
    }

    /// The isotypic decomposition `E = ⊕ E_{[u]}` over cone `σ`, as classes
    /// `[u]` (reduced representatives) with the basis indices they carry.
    /// Also checks `E^ρ(i) = Σ_{⟨[u], v_ρ⟩ ≥ i} E_{[u]}` for every ray of `σ`.
    pub fn isotypic_decomposition(&self, cone: usize) -> Result<Vec<(IntVec, Vec<usize>)>, KlyachkoError> {
        let tuple = space_to_tuple(self)?;
        let mut groups: BTreeMap<IntVec, Vec<usize>> = BTreeMap::new();
        for (k, f) in tuple.iter().enumerate() {
            groups.entry(f.rep(cone).clone()).or_default().push(k);
        }
        for &r in self.atlas.rays_of(cone) {
            let v = self.atlas.ray(r);
            let mut thresholds: BTreeSet<i64> = self.jumps[r].iter().copied().collect();
            thresholds.extend(self.jumps[r].iter().map(|j| j + 1));
            for i in thresholds {
                let mut from_groups: Vec<usize> = groups
                    .iter()
                    .filter(|(u, _)| dot(u, v) >= i)
                    .flat_map(|(_, ks)| ks.iter().copied())
                    .collect();
                from_groups.sort_unstable();
                assert_eq!(from_groups, self.filtration(r, i), "isotypic decomposition");
            }
        }
        Ok(groups.into_iter().collect())
    }
}

/// `i[ρ][k] = ⟨u_{ρ,k}, v_ρ⟩`.
pub fn tuple_to_space(tuple: &[KlyachkoFamily]) -> Result<DeltaKlyachkoSpace, KlyachkoError> {
    let first = tuple.first().ok_or(KlyachkoError::EmptyTuple)?;
    let atlas = first.atlas().clone();
    if tuple.iter().any(|f| *f.atlas() != atlas) {
        return Err(KlyachkoError::FanMismatch);
    }
    let jumps = (0..atlas.num_rays())
        .map(|r| tuple.iter().map(|f| f.ray_value(r)).collect())
        .collect();
    Ok(DeltaKlyachkoSpace {
        atlas,
        rank: tuple.len(),
        jumps,
    })
}

/// One family per basis vector, solving `⟨u, v_ρ⟩ = i[ρ][k]` on each cone.
pub fn space_to_tuple(s: &DeltaKlyachkoSpace) -> Result<Vec<KlyachkoFamily>, KlyachkoError> {
    (0..s.rank)
        .map(|k| KlyachkoFamily::from_ray_values_indexed(s.atlas.clone(), &s.column(k), k))
        .collect()
}

/// Equality of the multisets of jump columns.
pub fn space_iso(a: &DeltaKlyachkoSpace, b: &DeltaKlyachkoSpace) -> Result<bool, KlyachkoError> {
    if a.atlas != b.atlas {
        return Err(KlyachkoError::FanMismatch);
    }
    if a.rank != b.rank {
        return Err(KlyachkoError::ShapeMismatch(format!("ranks {} and {}", a.rank, b.rank)));
    }
    let cols = |s: &DeltaKlyachkoSpace| {
        let mut c: Vec<IntVec> = (0..s.rank).map(|k| s.column(k)).collect();
        c.sort();
        c
    };
    Ok(cols(a) == cols(b))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainStep {
    pub i: i64,
    pub flat: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RayChain {
    pub ray: usize,
    pub chain: Vec<ChainStep>,
}

impl RayChain {
    /// Decreasing, starting at the full ground set and ending at `∅`.
    pub fn is_valid(&self, ground: usize) -> bool {
        let full: Vec<usize> = (0..ground).collect();
        let nested = self.chain.windows(2).all(|w| {
            w[0].i < w[1].i && w[1].flat.len() < w[0].flat.len() && w[1].flat.iter().all(|k| w[0].flat.contains(k))
        });
        nested
            && self.chain.first().is_some_and(|s| s.flat == full)
            && self.chain.last().is_some_and(|s| s.flat.is_empty())
    }
}

/// The free matroid on `n` elements with one chain of flats per ray.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatroidBundle {
    pub ground: usize,
    pub rays: Vec<RayChain>,
}

impl MatroidBundle {
    pub fn is_valid(&self) -> bool {
        self.rays.iter().all(|c| c.is_valid(self.ground))
    }
}

/// Each distinct jump `t` of a ray contributes the flat `E^ρ(t)`; the chain
/// closes with `∅` one step above the largest jump.
pub fn space_to_matroid_bundle(s: &DeltaKlyachkoSpace) -> MatroidBundle {
    let rays = (0..s.atlas.num_rays())
        .map(|r| {
            let distinct: BTreeSet<i64> = s.jumps[r].iter().copied().collect();
            let mut chain: Vec<ChainStep> = distinct
                .iter()
                .map(|&t| ChainStep {
                    i: t,
                    flat: s.filtration(r, t),
                })
                .collect();
            let top = distinct.last().map_or(0, |t| t + 1);
            chain.push(ChainStep { i: top, flat: Vec::new() });
            RayChain { ray: r, chain }
        })
        .collect();
    MatroidBundle { ground: s.rank, rays }
}
