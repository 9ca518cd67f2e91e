use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::lattice::{smith, vec_gcd, IntVec};

use super::{Cone, ToricError, MAX_RANK};

/// A fan given by its rays and, for each cone, the indices of its extremal
/// rays. The zero cone is the empty list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fan {
    pub rank: usize,
    pub rays: Vec<IntVec>,
    pub cones: Vec<Vec<usize>>,
}

/// The first defect found by [`validate_fan`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FanViolation {
    BadRank { rank: usize },
    WrongLength { ray: usize },
    ZeroRay { ray: usize },
    NonPrimitiveRay { ray: usize },
    DuplicateRay { first: usize, second: usize },
    BadRayIndex { cone: usize, index: usize },
    DuplicateCone { first: usize, second: usize },
    NotStronglyConvex { cone: usize },
    RedundantRay { cone: usize, ray: usize },
    FaceNotInFan { cone: usize, face: Vec<usize> },
    OrphanRay { ray: usize },
    BadIntersection { first: usize, second: usize },
}

impl fmt::Display for FanViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::BadRank { rank } => write!(f, "lattice rank {rank} outside 1..={MAX_RANK}"),
            Self::WrongLength { ray } => write!(f, "ray {ray} has the wrong length"),
            Self::ZeroRay { ray } => write!(f, "ray {ray} is zero"),
            Self::NonPrimitiveRay { ray } => write!(f, "ray {ray} is not primitive"),
            Self::DuplicateRay { first, second } => write!(f, "rays {first} and {second} coincide"),
            Self::BadRayIndex { cone, index } => write!(f, "cone {cone} refers to missing ray {index}"),
            Self::DuplicateCone { first, second } => write!(f, "cones {first} and {second} coincide"),
            Self::NotStronglyConvex { cone } => write!(f, "cone {cone} contains a line"),
            Self::RedundantRay { cone, ray } => write!(f, "ray {ray} is not extremal in cone {cone}"),
            Self::FaceNotInFan { cone, face } => {
                write!(f, "faces not closed: face {face:?} of cone {cone} is missing")
            }
            Self::OrphanRay { ray } => write!(f, "ray {ray} belongs to no cone"),
            Self::BadIntersection { first, second } => {
                write!(f, "cones {first} and {second} do not meet in a common face")
            }
        }
    }
}

impl Fan {
    pub fn new(rank: usize, rays: Vec<IntVec>, cones: Vec<Vec<usize>>) -> Self {
        Fan { rank, rays, cones }
    }

    /// The fan of all faces of a single cone given by (extremal) rays.
    pub fn face_fan(rank: usize, rays: Vec<IntVec>) -> Self {
        let n = rays.len();
        let mut cones = Vec::new();
        for mask in (0u32..(1 << n)).rev() {
            cones.push((0..n).filter(|&i| mask & (1 << i) != 0).collect());
        }
        Fan { rank, rays, cones }
    }

    pub fn cone_rays(&self, i: usize) -> Vec<usize> {
        let mut r = self.cones[i].clone();
        r.sort_unstable();
        r.dedup();
        r
    }

    pub fn cone(&self, i: usize) -> Result<Cone, ToricError> {
        Cone::new(self.rank, self.cones[i].iter().map(|&r| self.rays[r].clone()).collect())
    }

    pub fn find_cone(&self, rays: &[usize]) -> Option<usize> {
        let want: BTreeSet<usize> = rays.iter().copied().collect();
        (0..self.cones.len()).find(|&i| self.cones[i].iter().copied().collect::<BTreeSet<_>>() == want)
    }

    pub fn zero_cone(&self) -> Option<usize> {
        self.find_cone(&[])
    }

    /// Index of the one-dimensional cone spanned by ray `r`.
    pub fn ray_cone(&self, r: usize) -> Option<usize> {
        self.find_cone(&[r])
    }

    /// `τ ⪯ σ` for cones of a validated fan.
    pub fn is_face(&self, tau: usize, sigma: usize) -> bool {
        self.cones[tau].iter().all(|r| self.cones[sigma].contains(r))
    }

    /// Cones that are not proper faces of another cone, in index order.
    pub fn maximal_cones(&self) -> Vec<usize> {
        (0..self.cones.len())
            .filter(|&i| {
                let ri = self.cone_rays(i);
                !(0..self.cones.len()).any(|j| {
                    let rj = self.cone_rays(j);
                    rj.len() > ri.len() && ri.iter().all(|r| rj.contains(r))
                })
            })
            .collect()
    }

    /// Every maximal cone is unimodular.
    pub fn is_smooth(&self) -> bool {
        self.maximal_cones().iter().all(|&i| {
            let m: Vec<IntVec> = self.cones[i].iter().map(|&r| self.rays[r].clone()).collect();
            let s = smith(&m, self.rank);
            s.rank() == m.len() && s.diagonal.iter().all(|&d| d == 1)
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("fan serializes")
    }
}

/// Checks rays, strong convexity and extremality of each cone, closure under
/// faces, and that any two cones meet in a common face.
pub fn validate_fan(fan: &Fan) -> Result<(), FanViolation> {
    if fan.rank == 0 || fan.rank > MAX_RANK {
        return Err(FanViolation::BadRank { rank: fan.rank });
    }
    for (i, r) in fan.rays.iter().enumerate() {
        if r.len() != fan.rank {
            return Err(FanViolation::WrongLength { ray: i });
        }
        match vec_gcd(r) {
            0 => return Err(FanViolation::ZeroRay { ray: i }),
            1 => {}
            _ => return Err(FanViolation::NonPrimitiveRay { ray: i }),
        }
        if let Some(j) = fan.rays[..i].iter().position(|s| s == r) {
            return Err(FanViolation::DuplicateRay { first: j, second: i });
        }
    }
    let sets: Vec<BTreeSet<usize>> = fan.cones.iter().map(|c| c.iter().copied().collect()).collect();
    for (i, c) in fan.cones.iter().enumerate() {
        if let Some(&index) = c.iter().find(|&&r| r >= fan.rays.len()) {
            return Err(FanViolation::BadRayIndex { cone: i, index });
        }
        if let Some(j) = sets[..i].iter().position(|s| *s == sets[i]) {
            return Err(FanViolation::DuplicateCone { first: j, second: i });
        }
    }
    let mut geometric = Vec::with_capacity(fan.cones.len());
    for i in 0..fan.cones.len() {
        let cone = fan.cone(i).expect("rank and rays already checked");
        if !cone.is_strongly_convex() {
            return Err(FanViolation::NotStronglyConvex { cone: i });
        }
        if let Some(&ray) = sets[i].iter().find(|&&r| !cone.rays().contains(&fan.rays[r])) {
            return Err(FanViolation::RedundantRay { cone: i, ray });
        }
        geometric.push(cone);
    }
    let index_of = |c: &Cone| -> BTreeSet<usize> {
        c.rays()
            .iter()
            .map(|v| fan.rays.iter().position(|r| r == v).expect("face rays are cone rays"))
            .collect()
    };
    if fan.zero_cone().is_none() {
        return Err(FanViolation::FaceNotInFan {
            cone: 0,
            face: Vec::new(),
        });
    }
    let mut face_lists = Vec::with_capacity(geometric.len());
    for (i, cone) in geometric.iter().enumerate() {
        let faces = cone.faces().expect("rank bounded");
        for face in &faces {
            let idx = index_of(face);
            if !sets.contains(&idx) {
                return Err(FanViolation::FaceNotInFan {
                    cone: i,
                    face: idx.into_iter().collect(),
                });
            }
        }
        face_lists.push(faces);
    }
    for ray in 0..fan.rays.len() {
        if fan.ray_cone(ray).is_none() {
            return Err(FanViolation::OrphanRay { ray });
        }
    }
    for i in 0..geometric.len() {
        for j in i + 1..geometric.len() {
            let meet = geometric[i].intersection(&geometric[j]).expect("rank bounded");
            if !face_lists[i].contains(&meet) || !face_lists[j].contains(&meet) {
                return Err(FanViolation::BadIntersection { first: i, second: j });
            }
        }
    }
    Ok(())
}
