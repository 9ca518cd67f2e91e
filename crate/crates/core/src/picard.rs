//! The equivariant and ordinary Picard groups and the four-term sequence
//! `0 → ⋂_σ (Λ ∩ σ^⊥) → Λ → Pic_G(X) → Pic(X) → 0`.
//!
//! `Pic_G` is computed as the subgroup of `⊕_{σ maximal} Λ/(Λ ∩ σ^⊥)` cut out
//! by the ray equations `⟨u_σ, v_ρ⟩ = ⟨u_τ, v_ρ⟩`. It is always free.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::lattice::{
    dot, identity, integer_kernel, lattice_quotient, mat_vec, rank, transpose, vec_mat, AbelianGroupPresentation,
    IntMatrix, IntVec, Sublattice,
};
use crate::klyachko::{CocycleWitness, FanAtlas, KlyachkoFamily, LineCocycle};
use crate::semiring::Semiring;
use crate::toric::Fan;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PicardError {
    #[error("exactness check `{check}` failed")]
    ExactnessViolation { check: &'static str, dump: serde_json::Value },
    #[error("not a cocycle: {0:?}")]
    NotACocycle(CocycleWitness),
    #[error("no chart contains cone {cone}")]
    NotACover { cone: usize },
    #[error("objects live on different fans")]
    FanMismatch,
}

impl PicardError {
    pub fn code(&self) -> &'static str {
        match self {
            Self::ExactnessViolation { .. } => "ExactnessViolation",
            Self::NotACocycle(_) => "NotACocycle",
            Self::NotACover { .. } => "NotACover",
            Self::FanMismatch => "FanMismatch",
        }
    }

    pub fn witness(&self) -> serde_json::Value {
        use serde_json::json;
        match self {
            Self::ExactnessViolation { check, dump } => json!({ "check": check, "dump": dump }),
            Self::NotACocycle(w) => json!(w),
            Self::NotACover { cone } => json!({ "cone": cone }),
            Self::FanMismatch => serde_json::Value::Null,
        }
    }
}

/// `⋂_σ Λ ∩ σ^⊥`, i.e. the characters vanishing on every ray.
pub fn psi_kernel(fan: &Fan) -> Sublattice {
    Sublattice::new(fan.rank, integer_kernel(&fan.rays, fan.rank))
}

/// `Pic_G(X) ≅ ℤ^k` with coordinates on families and explicit generators.
#[derive(Debug, Clone)]
pub struct EquivariantPicard {
    atlas: Arc<FanAtlas>,
    /// `(σ, Λ → Λ/(Λ∩σ^⊥), offset)` for each maximal cone.
    charts: Vec<(usize, AbelianGroupPresentation, usize)>,
    kernel: Sublattice,
    group: AbelianGroupPresentation,
    generators: Vec<KlyachkoFamily>,
}

#[derive(Serialize)]
struct EquivariantJson<'a> {
    free_rank: usize,
    torsion: &'a [i64],
    generators: Vec<BTreeMap<usize, IntVec>>,
}

impl Serialize for EquivariantPicard {
    fn serialize<Z: serde::Serializer>(&self, s: Z) -> Result<Z::Ok, Z::Error> {
        EquivariantJson {
            free_rank: self.group.free_rank,
            torsion: &self.group.invariant_factors,
            generators: self
                .generators
                .iter()
                .map(|f| f.reps().iter().cloned().enumerate().collect())
                .collect(),
        }
        .serialize(s)
    }
}

pub fn equivariant_picard(atlas: &Arc<FanAtlas>) -> EquivariantPicard {
    let n = atlas.rank();
    let mut charts = Vec::new();
    let mut dim = 0;
    for &sigma in atlas.maximal() {
        let q = lattice_quotient(n, &atlas.perp(sigma).basis);
        debug_assert!(q.invariant_factors.is_empty(), "σ^⊥ is saturated");
        let width = q.free_rank;
        charts.push((sigma, q, dim));
        dim += width;
    }
    // ⟨u_σ, v⟩ = Σ_i y_i ⟨lift(e_i), v⟩ since lift∘project ≡ id mod σ^⊥.
    let pairing_row = |(_, q, offset): &(usize, AbelianGroupPresentation, usize), v: &[i64], sign: i64, row: &mut [i64]| {
        for i in 0..q.free_rank {
            let mut e = vec![0; q.free_rank];
            e[i] = 1;
            row[offset + i] += sign * dot(&q.lift(&e), v);
        }
    };
    let mut constraints: IntMatrix = Vec::new();
    for r in 0..atlas.num_rays() {
        let v = atlas.ray(r);
        let holders: Vec<&(usize, AbelianGroupPresentation, usize)> =
            charts.iter().filter(|(s, _, _)| atlas.rays_of(*s).contains(&r)).collect();
        for pair in holders.windows(2) {
            let mut row = vec![0; dim];
            pairing_row(pair[0], v, 1, &mut row);
            pairing_row(pair[1], v, -1, &mut row);
            constraints.push(row);
        }
    }
    let kernel = if constraints.is_empty() {
        Sublattice::new(dim, identity(dim))
    } else {
        Sublattice::new(dim, integer_kernel(&constraints, dim))
    };
    let group = lattice_quotient(kernel.rank(), &[]);
    let mut out = EquivariantPicard {
        atlas: atlas.clone(),
        charts,
        kernel,
        group,
        generators: Vec::new(),
    };
    out.generators = (0..out.rank())
        .map(|i| {
            let mut e = vec![0; out.rank()];
            e[i] = 1;
            out.family(&e)
        })
        .collect();
    out
}

impl EquivariantPicard {
    pub fn atlas(&self) -> &Arc<FanAtlas> {
        &self.atlas
    }

    pub fn rank(&self) -> usize {
        self.kernel.rank()
    }

    pub fn group(&self) -> &AbelianGroupPresentation {
        &self.group
    }

    /// One family per basis vector of `Pic_G`.
    pub fn generators(&self) -> &[KlyachkoFamily] {
        &self.generators
    }

    fn stacked(&self, u_of: impl Fn(usize) -> IntVec) -> IntVec {
        self.charts.iter().flat_map(|(s, q, _)| q.project(&u_of(*s))).collect()
    }

    /// Coordinates of a family in `Pic_G ≅ ℤ^k`.
    pub fn coords(&self, f: &KlyachkoFamily) -> Result<IntVec, PicardError> {
        if *f.atlas() != self.atlas {
            return Err(PicardError::FanMismatch);
        }
        Ok(self.coords_unchecked(&self.stacked(|s| f.rep(s).clone())))
    }

    fn coords_unchecked(&self, y: &[i64]) -> IntVec {
        self.kernel
            .coordinates(y)
            .expect("compatible families satisfy the ray equations")
    }

    /// `ψ(x)` in coordinates.
    pub fn character_coords(&self, x: &[i64]) -> IntVec {
        self.coords_unchecked(&self.stacked(|_| x.to_vec()))
    }

    /// The family with the given coordinates; faces inherit from the first
    /// maximal cone containing them.
    pub fn family(&self, coords: &[i64]) -> KlyachkoFamily {
        let y = vec_mat(coords, &self.kernel.basis, self.kernel.ambient);
        let lifts: BTreeMap<usize, IntVec> = self
            .charts
            .iter()
            .map(|(s, q, offset)| (*s, q.lift(&y[*offset..offset + q.free_rank])))
            .collect();
        let reps = (0..self.atlas.num_cones())
            .map(|tau| {
                let sigma = self
                    .charts
                    .iter()
                    .map(|(s, _, _)| *s)
                    .find(|&s| self.atlas.is_face(tau, s))
                    .expect("every cone lies in a maximal cone");
                (tau, lifts[&sigma].clone())
            })
            .collect();
        KlyachkoFamily::new(self.atlas.clone(), &reps).expect("kernel points are compatible")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KernelReport {
    pub free_rank: usize,
    pub torsion: Vec<i64>,
    pub basis: IntMatrix,
}

/// The full four-term sequence. `psi` is `k × rank Λ` (columns are the
/// images of the standard characters); `forget` is the projection
/// `Pic_G → Pic` on coordinates, torsion rows first.
#[derive(Debug, Clone, Serialize)]
pub struct PicardReport {
    pub kernel: KernelReport,
    pub pic_g: AbelianGroupPresentation,
    pub pic: AbelianGroupPresentation,
    pub psi: IntMatrix,
    pub forget: IntMatrix,
    #[serde(skip)]
    equivariant: EquivariantPicard,
}

/// Outcome of [`classify_line_bundle`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LineBundleClass {
    /// Element of `Pic` in the report's output coordinates.
    pub class: IntVec,
    /// Coordinates of `lift` in `Pic_G`.
    pub equivariant_class: IntVec,
    pub lift: KlyachkoFamily,
}

pub fn picard(atlas: &Arc<FanAtlas>) -> Result<PicardReport, PicardError> {
    let n = atlas.rank();
    let eq = equivariant_picard(atlas);
    let k = eq.rank();
    let columns: IntMatrix = (0..n)
        .map(|j| {
            let mut e = vec![0; n];
            e[j] = 1;
            eq.character_coords(&e)
        })
        .collect();
    let psi = transpose(&columns, k);
    let pic = lattice_quotient(k, &columns);
    let kernel = psi_kernel(atlas.fan());
    let report = PicardReport {
        kernel: KernelReport {
            free_rank: kernel.rank(),
            torsion: Vec::new(),
            basis: kernel.basis.clone(),
        },
        pic_g: eq.group.clone(),
        forget: pic.projection.clone(),
        pic,
        psi,
        equivariant: eq,
    };
    report.check_exactness(&kernel, &columns)?;
    Ok(report)
}

impl PicardReport {
    pub fn equivariant(&self) -> &EquivariantPicard {
        &self.equivariant
    }

    fn violation(&self, check: &'static str) -> PicardError {
        PicardError::ExactnessViolation {
            check,
            dump: serde_json::to_value(self).unwrap_or(serde_json::Value::Null),
        }
    }

    fn check_exactness(&self, kernel: &Sublattice, columns: &IntMatrix) -> Result<(), PicardError> {
        let n = self.equivariant.atlas.rank();
        let k = self.equivariant.rank();
        let ker_psi = if k == 0 {
            Sublattice::new(n, identity(n))
        } else {
            Sublattice::new(n, integer_kernel(&self.psi, n))
        };
        if ker_psi != *kernel {
            return Err(self.violation("kernel"));
        }
        if kernel.rank() + rank(columns, k) != n {
            return Err(self.violation("rank"));
        }
        // ker(forget) = {x : P_free x = 0, P_tors x ∈ D ℤ^t}
        let t = self.pic.invariant_factors.len();
        let stacked: IntMatrix = self
            .forget
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut r = row.clone();
                r.extend((0..t).map(|j| if i == j { -self.pic.invariant_factors[i] } else { 0 }));
                r
            })
            .collect();
        let ker_forget = if stacked.is_empty() {
            Sublattice::new(k, identity(k))
        } else {
            let gens = integer_kernel(&stacked, k + t)
                .into_iter()
                .map(|row| row[..k].to_vec())
                .collect();
            Sublattice::new(k, gens)
        };
        if ker_forget != Sublattice::new(k, columns.clone()) {
            return Err(self.violation("image"));
        }
        let m = self.forget.len();
        for i in 0..m {
            let mut e = vec![0; m];
            e[i] = 1;
            if self.pic.project(&self.pic.lift(&e)) != self.pic.normalize(&e) {
                return Err(self.violation("surjective"));
            }
        }
        Ok(())
    }

    /// Image in `Pic` of a `Pic_G` coordinate vector.
    pub fn forget_coords(&self, coords: &[i64]) -> IntVec {
        self.pic.project(coords)
    }

    pub fn forget(&self, f: &KlyachkoFamily) -> Result<IntVec, PicardError> {
        Ok(self.forget_coords(&self.equivariant.coords(f)?))
    }

    /// `ψ(x)` as a family.
    pub fn psi_family(&self, x: &[i64]) -> KlyachkoFamily {
        let c = mat_vec(&self.psi, x);
        self.equivariant.family(&c)
    }

    /// Scalars are ignored: on a cover whose charts pairwise overlap they form
    /// a coboundary. The lift is `u_a = φ_{a₀a}` for the first chart `a₀`.
    pub fn classify<S: Semiring>(&self, c: &LineCocycle<S>) -> Result<LineBundleClass, PicardError> {
        let atlas = c.atlas();
        if *atlas != self.equivariant.atlas {
            return Err(PicardError::FanMismatch);
        }
        c.check().map_err(PicardError::NotACocycle)?;
        let charts = c.charts();
        let mut reps = BTreeMap::new();
        for tau in 0..atlas.num_cones() {
            let chart = charts
                .iter()
                .copied()
                .find(|&a| atlas.is_face(tau, a))
                .ok_or(PicardError::NotACover { cone: tau })?;
            let u = c
                .transition(charts[0], chart)
                .expect("checked cocycles are total")
                .exponent
                .clone();
            reps.insert(tau, u);
        }
        let lift = KlyachkoFamily::new(self.equivariant.atlas.clone(), &reps)
            .expect("cocycle identities make the lift compatible");
        let equivariant_class = self.equivariant.coords(&lift)?;
        Ok(LineBundleClass {
            class: self.forget_coords(&equivariant_class),
            equivariant_class,
            lift,
        })
    }
}

pub fn classify_line_bundle<S: Semiring>(c: &LineCocycle<S>) -> Result<LineBundleClass, PicardError> {
    picard(c.atlas())?.classify(c)
}
