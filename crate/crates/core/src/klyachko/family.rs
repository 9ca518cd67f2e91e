use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::lattice::{dot, solve_integer, IntVec};
use crate::toric::Fan;

use super::{FanAtlas, KlyachkoError};

/// A cone `σ` and a ray `ρ ⪯ σ` on which `⟨u_σ, v_ρ⟩ ≠ ⟨u_ρ, v_ρ⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FamilyViolation {
    pub cone: usize,
    pub ray: usize,
}

/// The three equivalent compatibility tests, each with its first failure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompatibilityReport {
    /// `u_σ − u_τ ∈ Λ ∩ τ^⊥` for every face `τ ⪯ σ`; failing `(σ, τ)`.
    pub congruence: Option<(usize, usize)>,
    /// `⟨u_σ, v⟩ = ⟨u_τ, v⟩` for every ray generator `v` of every face `τ ⪯ σ`;
    /// failing `(σ, τ)`.
    pub pairing: Option<(usize, usize)>,
    /// `⟨u_σ, v_ρ⟩ = ⟨u_ρ, v_ρ⟩` for every ray `ρ ⪯ σ`.
    pub ray: Option<FamilyViolation>,
}

impl CompatibilityReport {
    pub fn is_valid(&self) -> bool {
        self.ray.is_none()
    }

    pub fn conditions_agree(&self) -> bool {
        let c = [self.congruence.is_none(), self.pairing.is_none(), self.ray.is_none()];
        c.iter().all(|&x| x == c[0])
    }
}

fn checked_reps(atlas: &FanAtlas, reps: &BTreeMap<usize, IntVec>) -> Result<Vec<IntVec>, KlyachkoError> {
    let n = atlas.rank();
    (0..atlas.num_cones())
        .map(|cone| {
            let u = reps.get(&cone).ok_or(KlyachkoError::MissingCone { cone })?;
            if u.len() != n {
                return Err(KlyachkoError::WrongLength {
                    cone,
                    expected: n,
                    found: u.len(),
                });
            }
            Ok(u.clone())
        })
        .collect()
}

fn report(atlas: &FanAtlas, reps: &[IntVec]) -> CompatibilityReport {
    let mut out = CompatibilityReport {
        congruence: None,
        pairing: None,
        ray: None,
    };
    for sigma in 0..atlas.num_cones() {
        for tau in 0..atlas.num_cones() {
            if tau == sigma || !atlas.is_face(tau, sigma) {
                continue;
            }
            if out.congruence.is_none() {
                let diff: IntVec = reps[sigma].iter().zip(&reps[tau]).map(|(a, b)| a - b).collect();
                if !atlas.perp(tau).contains(&diff) {
                    out.congruence = Some((sigma, tau));
                }
            }
            if out.pairing.is_none()
                && atlas
                    .cone(tau)
                    .rays()
                    .iter()
                    .any(|v| dot(&reps[sigma], v) != dot(&reps[tau], v))
            {
                out.pairing = Some((sigma, tau));
            }
        }
        if out.ray.is_none() {
            for &r in atlas.rays_of(sigma) {
                let Some(rc) = atlas.ray_cone(r) else { continue };
                let v = atlas.ray(r);
                if dot(&reps[sigma], v) != dot(&reps[rc], v) {
                    out.ray = Some(FamilyViolation { cone: sigma, ray: r });
                    break;
                }
            }
        }
    }
    out
}

/// Runs the three compatibility tests on candidate representatives.
pub fn check_family(atlas: &FanAtlas, reps: &BTreeMap<usize, IntVec>) -> Result<CompatibilityReport, KlyachkoError> {
    let reps = checked_reps(atlas, reps)?;
    Ok(report(atlas, &reps))
}

/// A compatible family of classes `[u_σ] ∈ Λ / (Λ ∩ σ^⊥)`, one per cone,
/// each stored as its reduced representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KlyachkoFamily {
    atlas: Arc<FanAtlas>,
    reps: Vec<IntVec>,
}

#[derive(Serialize, Deserialize)]
struct FamilyJson {
    fan: Fan,
    reps: BTreeMap<usize, IntVec>,
}

impl Serialize for KlyachkoFamily {
    fn serialize<Z: serde::Serializer>(&self, s: Z) -> Result<Z::Ok, Z::Error> {
        FamilyJson {
            fan: self.atlas.fan().clone(),
            reps: self.reps.iter().cloned().enumerate().collect(),
        }
        .serialize(s)
    }
}

impl KlyachkoFamily {
    /// Validates and canonicalizes.
    pub fn new(atlas: Arc<FanAtlas>, reps: &BTreeMap<usize, IntVec>) -> Result<Self, KlyachkoError> {
        let reps = checked_reps(&atlas, reps)?;
        if let Some(v) = report(&atlas, &reps).ray {
            return Err(KlyachkoError::InvalidFamily(v));
        }
        Ok(Self::canonical(atlas, reps))
    }

    pub fn from_vec(atlas: Arc<FanAtlas>, reps: Vec<IntVec>) -> Result<Self, KlyachkoError> {
        let map = reps.into_iter().enumerate().collect();
        Self::new(atlas, &map)
    }

    fn canonical(atlas: Arc<FanAtlas>, reps: Vec<IntVec>) -> Self {
        let reps = reps.iter().enumerate().map(|(i, u)| atlas.perp(i).reduce(u)).collect();
        KlyachkoFamily { atlas, reps }
    }

    pub fn trivial(atlas: Arc<FanAtlas>) -> Self {
        let n = atlas.rank();
        let reps = vec![vec![0; n]; atlas.num_cones()];
        KlyachkoFamily { atlas, reps }
    }

    /// The constant family `u_σ = x`.
    pub fn from_character(atlas: Arc<FanAtlas>, x: &[i64]) -> Self {
        let reps = vec![x.to_vec(); atlas.num_cones()];
        Self::canonical(atlas, reps)
    }

    /// Solves `⟨u_σ, v_ρ⟩ = values[ρ]` on every cone. Always solvable on
    /// smooth fans.
    pub fn from_ray_values(atlas: Arc<FanAtlas>, values: &[i64]) -> Result<Self, KlyachkoError> {
        Self::from_ray_values_indexed(atlas, values, 0)
    }

    pub(crate) fn from_ray_values_indexed(
        atlas: Arc<FanAtlas>,
        values: &[i64],
        index: usize,
    ) -> Result<Self, KlyachkoError> {
        if values.len() != atlas.num_rays() {
            return Err(KlyachkoError::ShapeMismatch(format!(
                "{} ray values for {} rays",
                values.len(),
                atlas.num_rays()
            )));
        }
        let n = atlas.rank();
        let mut reps = Vec::with_capacity(atlas.num_cones());
        for cone in 0..atlas.num_cones() {
            let rays = atlas.rays_of(cone);
            let u = if rays.is_empty() {
                vec![0; n]
            } else {
                let a: Vec<IntVec> = rays.iter().map(|&r| atlas.ray(r).clone()).collect();
                let b: IntVec = rays.iter().map(|&r| values[r]).collect();
                solve_integer(&a, n, &b).ok_or(KlyachkoError::NoSolution { cone, index })?
            };
            reps.push(u);
        }
        Ok(Self::canonical(atlas, reps))
    }

    pub fn atlas(&self) -> &Arc<FanAtlas> {
        &self.atlas
    }

    pub fn reps(&self) -> &[IntVec] {
        &self.reps
    }

    pub fn rep(&self, cone: usize) -> &IntVec {
        &self.reps[cone]
    }

    /// `⟨u_ρ, v_ρ⟩`, well defined by compatibility.
    pub fn ray_value(&self, ray: usize) -> i64 {
        let cone = self
            .atlas
            .ray_cone(ray)
            .expect("every ray of a valid fan is a cone");
        dot(&self.reps[cone], self.atlas.ray(ray))
    }

    pub fn ray_values(&self) -> IntVec {
        (0..self.atlas.num_rays()).map(|r| self.ray_value(r)).collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.reps.iter().flatten().all(|&x| x == 0)
    }

    pub fn mul(&self, other: &Self) -> Result<Self, KlyachkoError> {
        if self.atlas != other.atlas {
            return Err(KlyachkoError::FanMismatch);
        }
        let reps = self
            .reps
            .iter()
            .zip(&other.reps)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        Ok(Self::canonical(self.atlas.clone(), reps))
    }

    pub fn inv(&self) -> Self {
        let reps = self.reps.iter().map(|u| u.iter().map(|x| -x).collect()).collect();
        Self::canonical(self.atlas.clone(), reps)
    }

    pub fn from_json(atlas: Arc<FanAtlas>, value: &serde_json::Value) -> Result<Self, KlyachkoError> {
        let reps: BTreeMap<usize, IntVec> = serde_json::from_value(value["reps"].clone())
            .map_err(|e| KlyachkoError::ShapeMismatch(e.to_string()))?;
        Self::new(atlas, &reps)
    }
}

pub fn family_mul(f: &KlyachkoFamily, g: &KlyachkoFamily) -> Result<KlyachkoFamily, KlyachkoError> {
    f.mul(g)
}

pub fn family_inv(f: &KlyachkoFamily) -> KlyachkoFamily {
    f.inv()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toric::corpus;
    use proptest::prelude::*;

    fn atlas(f: Fan) -> Arc<FanAtlas> {
        FanAtlas::new(f).unwrap()
    }

    fn map(reps: &[&[i64]]) -> BTreeMap<usize, IntVec> {
        reps.iter().map(|r| r.to_vec()).enumerate().collect()
    }

    #[test]
    fn p1_every_pair_is_compatible() {
        let a = atlas(corpus::p1());
        let r = check_family(&a, &map(&[&[0], &[3], &[-1]])).unwrap();
        assert!(r.is_valid() && r.conditions_agree());
        let f = KlyachkoFamily::new(a, &map(&[&[0], &[3], &[-1]])).unwrap();
        assert_eq!(f.ray_values(), vec![3, 1]);
    }

    #[test]
    fn trivial_is_valid_everywhere() {
        for (_, fan) in corpus::all() {
            let a = atlas(fan);
            let zero: BTreeMap<usize, IntVec> = (0..a.num_cones()).map(|i| (i, vec![0; a.rank()])).collect();
            assert!(check_family(&a, &zero).unwrap().is_valid());
        }
    }

    #[test]
    fn perturbed_p2_names_the_pair() {
        let a = atlas(corpus::p2());
        let f = KlyachkoFamily::from_ray_values(a.clone(), &[1, 2, 3]).unwrap();
        let mut reps: BTreeMap<usize, IntVec> = f.reps().iter().cloned().enumerate().collect();
        // cone 4 = {ρ0, ρ1}; (1,0) pairs nontrivially with ρ0
        reps.get_mut(&4).unwrap()[0] += 1;
        let r = check_family(&a, &reps).unwrap();
        assert!(r.conditions_agree());
        assert_eq!(r.ray, Some(FamilyViolation { cone: 4, ray: 0 }));
        assert_eq!(r.congruence, Some((4, 1)));
        assert!(matches!(
            KlyachkoFamily::new(a, &reps),
            Err(KlyachkoError::InvalidFamily(FamilyViolation { cone: 4, ray: 0 }))
        ));
    }

    #[test]
    fn missing_cone() {
        let a = atlas(corpus::p1());
        let mut m = map(&[&[0], &[3], &[-1]]);
        m.remove(&2);
        assert_eq!(check_family(&a, &m), Err(KlyachkoError::MissingCone { cone: 2 }));
    }

    #[test]
    fn canonical_reps_on_faces() {
        let a = atlas(corpus::p2());
        let x = KlyachkoFamily::from_character(a.clone(), &[5, -7]);
        assert!(x.rep(0).iter().all(|&v| v == 0));
        assert_eq!(x.rep(4), &vec![5, -7]);
        assert_eq!(x.ray_values(), vec![5, -7, 2]);
    }

    #[test]
    fn json_round_trip() {
        let a = atlas(corpus::p1());
        let f = KlyachkoFamily::from_ray_values(a.clone(), &[2, -5]).unwrap();
        let v = serde_json::to_value(&f).unwrap();
        assert_eq!(v["reps"]["1"], serde_json::json!([2]));
        assert_eq!(KlyachkoFamily::from_json(a, &v).unwrap(), f);
    }

    proptest! {
        #[test]
        fn group_axioms_p2(a in prop::collection::vec(-5i64..6, 3), b in prop::collection::vec(-5i64..6, 3), c in prop::collection::vec(-5i64..6, 3)) {
            let at = atlas(corpus::p2());
            let f = KlyachkoFamily::from_ray_values(at.clone(), &a).unwrap();
            let g = KlyachkoFamily::from_ray_values(at.clone(), &b).unwrap();
            let h = KlyachkoFamily::from_ray_values(at.clone(), &c).unwrap();
            let one = KlyachkoFamily::trivial(at);
            prop_assert_eq!(f.mul(&g).unwrap().mul(&h).unwrap(), f.mul(&g.mul(&h).unwrap()).unwrap());
            prop_assert_eq!(f.mul(&one).unwrap(), f.clone());
            prop_assert!(f.mul(&f.inv()).unwrap().is_trivial());
            prop_assert_eq!(f.mul(&g).unwrap(), g.mul(&f).unwrap());
        }

        #[test]
        fn conditions_agree_on_f1(reps in prop::collection::vec(prop::collection::vec(-2i64..3, 2), 9)) {
            let at = atlas(corpus::hirzebruch_f1());
            let r = check_family(&at, &reps.into_iter().enumerate().collect()).unwrap();
            prop_assert!(r.conditions_agree());
        }
    }
}
