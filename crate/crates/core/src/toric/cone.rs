use serde::{Deserialize, Serialize};

use crate::lattice::{dot, integer_kernel, rank, vec_gcd, IntMatrix, IntVec, Sublattice};

use super::ToricError;

/// Largest lattice rank the enumeration routines accept.
pub const MAX_RANK: usize = 4;

pub fn primitive_ray(v: &[i64]) -> Result<IntVec, ToricError> {
    let g = vec_gcd(v);
    if g == 0 {
        return Err(ToricError::ZeroVector);
    }
    Ok(v.iter().map(|x| x / g).collect())
}

/// All `k`-element subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn canonical_set<T: Ord>(mut rays: Vec<T>) -> Vec<T> {
    rays.sort();
    rays.dedup();
    rays
}

/// Generators of `{w : ⟨w, r⟩ ≥ 0 for all r}`: the extreme rays of the pointed
/// part followed by `±` a basis of the lineality space.
fn raw_dual(n: usize, gens: &[IntVec]) -> Result<IntMatrix, ToricError> {
    if n > MAX_RANK {
        return Err(ToricError::RankTooHigh(n));
    }
    let lineality = integer_kernel(gens, n);
    let d = n - lineality.len();
    let mut out: IntMatrix = Vec::new();
    if d > 0 {
        for subset in combinations(gens.len(), d - 1) {
            let mut system: IntMatrix = subset.iter().map(|&j| gens[j].clone()).collect();
            system.extend(lineality.iter().cloned());
            let k = integer_kernel(&system, n);
            if k.len() != 1 {
                continue;
            }
            let w = &k[0];
            if gens.iter().all(|g| dot(w, g) >= 0) {
                out.push(w.clone());
            } else if gens.iter().all(|g| dot(w, g) <= 0) {
                out.push(w.iter().map(|x| -x).collect());
            }
        }
    }
    for l in &lineality {
        out.push(l.clone());
        out.push(l.iter().map(|x| -x).collect());
    }
    Ok(canonical_set(out))
}

/// A rational polyhedral cone in `N_ℝ`, stored by its canonical generators.
///
/// For a strongly convex cone the generators are its primitive extremal rays
/// in lexicographic order. The defining inequalities (generators of the dual
/// cone) are cached alongside.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "ConeRepr", into = "ConeRepr")]
pub struct Cone {
    rank: usize,
    rays: IntMatrix,
    dual: IntMatrix,
}

#[derive(Serialize, Deserialize)]
struct ConeRepr {
    rank: usize,
    rays: IntMatrix,
}

impl TryFrom<ConeRepr> for Cone {
    type Error = ToricError;

    fn try_from(r: ConeRepr) -> Result<Self, Self::Error> {
        Cone::new(r.rank, r.rays)
    }
}

impl From<Cone> for ConeRepr {
    fn from(c: Cone) -> Self {
        ConeRepr {
            rank: c.rank,
            rays: c.rays,
        }
    }
}

impl Cone {
    /// The cone generated by `gens`, reduced to canonical form.
    pub fn new(rank: usize, gens: IntMatrix) -> Result<Self, ToricError> {
        let mut prim = Vec::with_capacity(gens.len());
        for g in &gens {
            if g.len() != rank {
                return Err(ToricError::DimensionMismatch {
                    expected: rank,
                    found: g.len(),
                });
            }
            prim.push(primitive_ray(g)?);
        }
        let prim = canonical_set(prim);
        let dual = raw_dual(rank, &prim)?;
        let rays = raw_dual(rank, &dual)?;
        Ok(Cone { rank, rays, dual })
    }

    /// The cone cut out by `⟨w, ·⟩ ≥ 0` for every `w` in `inequalities`.
    pub fn from_inequalities(rank: usize, inequalities: &[IntVec]) -> Result<Self, ToricError> {
        let nonzero: IntMatrix = inequalities.iter().filter(|w| w.iter().any(|&x| x != 0)).cloned().collect();
        let gens = raw_dual(rank, &nonzero)?;
        Cone::new(rank, gens)
    }

    pub fn zero(rank: usize) -> Self {
        let mut dual = Vec::new();
        for i in 0..rank {
            let mut e = vec![0; rank];
            e[i] = 1;
            dual.push(e.clone());
            e[i] = -1;
            dual.push(e);
        }
        Cone {
            rank,
            rays: Vec::new(),
            dual: canonical_set(dual),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rays(&self) -> &[IntVec] {
        &self.rays
    }

    /// Generators of `σ^∨`.
    pub fn dual_generators(&self) -> &[IntVec] {
        &self.dual
    }

    /// Dimension of the linear span.
    pub fn dim(&self) -> usize {
        rank(&self.rays, self.rank)
    }

    pub fn is_zero(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn is_strongly_convex(&self) -> bool {
        rank(&self.dual, self.rank) == self.rank
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.dual.iter().all(|w| dot(w, v) >= 0)
    }

    pub fn contains_cone(&self, other: &Cone) -> bool {
        other.rays.iter().all(|r| self.contains(r))
    }

    /// Integer basis (Hermite form) of `Λ ∩ σ^⊥`.
    pub fn perp_lattice(&self) -> IntMatrix {
        integer_kernel(&self.rays, self.rank)
    }

    pub fn perp_sublattice(&self) -> Sublattice {
        Sublattice::new(self.rank, self.perp_lattice())
    }

    /// `σ ∩ τ`, as the dual of `σ^∨ + τ^∨`.
    pub fn intersection(&self, other: &Cone) -> Result<Cone, ToricError> {
        let mut ineq = self.dual.clone();
        ineq.extend(other.dual.iter().cloned());
        Cone::from_inequalities(self.rank, &ineq)
    }

    /// All faces `σ ∩ w^⊥` for `w ∈ σ^∨`, sorted by dimension then rays.
    pub fn faces(&self) -> Result<Vec<Cone>, ToricError> {
        if self.rank > MAX_RANK {
            return Err(ToricError::RankTooHigh(self.rank));
        }
        let mut out = Vec::new();
        let m = self.dual.len();
        for mask in 0u64..(1u64 << m) {
            let tight: IntMatrix = self
                .rays
                .iter()
                .filter(|r| (0..m).all(|j| mask & (1 << j) == 0 || dot(&self.dual[j], r) == 0))
                .cloned()
                .collect();
            out.push(tight);
        }
        let mut faces = Vec::new();
        for rays in canonical_set(out) {
            faces.push(Cone::new(self.rank, rays)?);
        }
        faces.sort_by(|a, b| (a.dim(), &a.rays).cmp(&(b.dim(), &b.rays)));
        faces.dedup();
        Ok(faces)
    }

    pub fn is_face_of(&self, other: &Cone) -> Result<bool, ToricError> {
        Ok(other.faces()?.contains(self))
    }
}

pub fn dual_cone(sigma: &Cone) -> Result<Cone, ToricError> {
    Cone::new(sigma.rank, sigma.dual.clone())
}

pub fn faces(sigma: &Cone) -> Result<Vec<Cone>, ToricError> {
    sigma.faces()
}

pub fn cone_perp_lattice(sigma: &Cone) -> IntMatrix {
    sigma.perp_lattice()
}

/// The monomial prime of `S_σ = σ^∨ ∩ Λ` attached to a face `τ`: all `m` with
/// `⟨m, v⟩ > 0` for some `v ∈ τ`. Its complement is the face `σ^∨ ∩ τ^⊥`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitPrime {
    pub face: Cone,
    pub complement: Cone,
    /// Codimension of the orbit closure, `dim τ`.
    pub height: usize,
}

impl OrbitPrime {
    pub fn contains(&self, m: &[i64]) -> bool {
        self.face.rays().iter().any(|v| dot(m, v) > 0)
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.face.is_zero()
    }
}

pub fn orbit_cone_primes(sigma: &Cone) -> Result<Vec<OrbitPrime>, ToricError> {
    let mut out = Vec::new();
    for tau in sigma.faces()? {
        let perp: IntMatrix = sigma
            .dual
            .iter()
            .filter(|w| tau.rays.iter().all(|r| dot(w, r) == 0))
            .cloned()
            .collect();
        let complement = if perp.is_empty() {
            Cone::zero(sigma.rank)
        } else {
            Cone::new(sigma.rank, perp)?
        };
        out.push(OrbitPrime {
            height: tau.dim(),
            face: tau,
            complement,
        });
    }
    Ok(out)
}

/// Connectivity of the graph on `cones` whose edges are proper face relations.
pub fn cover_graph_connected(cones: &[Cone]) -> Result<bool, ToricError> {
    let n = cones.len();
    if n == 0 {
        return Ok(true);
    }
    let mut adj = vec![Vec::new(); n];
    for i in 0..n {
        let fi = cones[i].faces()?;
        for j in 0..n {
            if i != j && fi.contains(&cones[j]) {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for &j in &adj[i] {
            if !std::mem::replace(&mut seen[j], true) {
                stack.push(j);
            }
        }
    }
    Ok(seen.into_iter().all(|s| s))
}
