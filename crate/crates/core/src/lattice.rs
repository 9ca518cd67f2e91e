//! Exact integer linear algebra on lattices `ℤⁿ`.
//!
//! Row-style Hermite normal form, Smith normal form with both transforms,
//! integer kernels, sublattices with canonical bases, and finitely generated
//! abelian group presentations for quotients `ℤⁿ / L`.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

pub type IntVec = Vec<i64>;
pub type IntMatrix = Vec<Vec<i64>>;

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `(g, x, y)` with `g = gcd(a, b) ≥ 0` and `a·x + b·y = g`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let e = a.extended_gcd(&b);
    if e.gcd < 0 {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

pub fn vec_gcd(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

pub fn transpose(m: &[Vec<i64>], cols: usize) -> IntMatrix {
    (0..cols).map(|j| m.iter().map(|row| row[j]).collect()).collect()
}

pub fn mat_vec(m: &[Vec<i64>], v: &[i64]) -> IntVec {
    m.iter().map(|row| dot(row, v)).collect()
}

/// Row vector times matrix: `v · M`.
pub fn vec_mat(v: &[i64], m: &[Vec<i64>], cols: usize) -> IntVec {
    let mut out = vec![0; cols];
    for (vi, row) in v.iter().zip(m) {
        if *vi != 0 {
            for (o, r) in out.iter_mut().zip(row) {
                *o += vi * r;
            }
        }
    }
    out
}

pub fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>], cols: usize) -> IntMatrix {
    a.iter().map(|row| vec_mat(row, b, cols)).collect()
}

/// Rank over ℚ.
pub fn rank(m: &[Vec<i64>], cols: usize) -> usize {
    hermite(m, cols).rank
}

/// Result of a row Hermite reduction `transform · input = form`.
#[derive(Clone, Debug)]
pub struct Hermite {
    pub form: IntMatrix,
    pub transform: IntMatrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

/// Row Hermite normal form: pivots are positive, entries above a pivot lie in
/// `[0, pivot)`, zero rows come last. The transform is unimodular.
pub fn hermite(m: &[Vec<i64>], cols: usize) -> Hermite {
    let rows = m.len();
    let mut h: IntMatrix = m.to_vec();
    let mut t = identity(rows);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        // Fold every entry below r in column c into row r with gcd steps.
        for i in (r + 1)..rows {
            if h[i][c] == 0 {
                continue;
            }
            let (a, b) = (h[r][c], h[i][c]);
            let (g, x, y) = ext_gcd(a, b);
            let (p, q) = (a / g, b / g);
            // [x y; -q p] has determinant x·p + y·q = 1.
            for mat in [&mut h, &mut t] {
                let (row_r, row_i) = (mat[r].clone(), mat[i].clone());
                for k in 0..row_r.len() {
                    mat[r][k] = x * row_r[k] + y * row_i[k];
                    mat[i][k] = -q * row_r[k] + p * row_i[k];
                }
            }
        }
        if h[r][c] == 0 {
            continue;
        }
        if h[r][c] < 0 {
            for mat in [&mut h, &mut t] {
                for v in mat[r].iter_mut() {
                    *v = -*v;
                }
            }
        }
        let piv = h[r][c];
        for i in 0..r {
            let q = Integer::div_floor(&h[i][c], &piv);
            if q != 0 {
                for mat in [&mut h, &mut t] {
                    let row_r = mat[r].clone();
                    for (v, s) in mat[i].iter_mut().zip(row_r) {
                        *v -= q * s;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    Hermite {
        form: h,
        transform: t,
        pivots,
        rank: r,
    }
}

/// Basis (in Hermite form) of the integer right kernel `{x ∈ ℤⁿ : A x = 0}`.
pub fn integer_kernel(a: &[Vec<i64>], cols: usize) -> IntMatrix {
    if a.is_empty() {
        return identity(cols);
    }
    // U · Aᵀ = H; rows of U against zero rows of H span the kernel.
    let at = transpose(a, cols);
    let h = hermite(&at, a.len());
    let kernel: IntMatrix = h.transform[h.rank..].to_vec();
    Sublattice::new(cols, kernel).basis
}

/// Smith normal form `left · input · right = diag(d)`.
#[derive(Clone, Debug)]
pub struct Smith {
    /// Nonzero diagonal entries `d₁ | d₂ | …`, all positive.
    pub diagonal: Vec<i64>,
    pub left: IntMatrix,
    pub right: IntMatrix,
    pub right_inverse: IntMatrix,
}

impl Smith {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }
}

pub fn smith(m: &[Vec<i64>], cols: usize) -> Smith {
    let rows = m.len();
    let mut a: IntMatrix = m.to_vec();
    let mut left = identity(rows);
    let mut right = identity(cols);
    let mut right_inv = identity(cols);
    let mut diagonal = Vec::new();

    fn col_op(mats: [&mut IntMatrix; 2], inv: &mut IntMatrix, i: usize, j: usize, coef: [i64; 4]) {
        // new_i = x·col_i + y·col_j, new_j = nq·col_i + p·col_j, determinant 1.
        let [x, y, nq, p] = coef;
        for mat in mats {
            for row in mat.iter_mut() {
                let (ci, cj) = (row[i], row[j]);
                row[i] = x * ci + y * cj;
                row[j] = nq * ci + p * cj;
            }
        }
        // Inverse acts on rows i, j of the inverse matrix. The 2x2 applied
        // on the right is [[x, nq], [y, p]]; its inverse is [[p, -nq], [-y, x]]
        // (determinant 1), applied on the left.
        let (ri, rj) = (inv[i].clone(), inv[j].clone());
        for k in 0..ri.len() {
            inv[i][k] = p * ri[k] - nq * rj[k];
            inv[j][k] = -y * ri[k] + x * rj[k];
        }
    }

    fn row_op(mats: [&mut IntMatrix; 2], i: usize, j: usize, coef: [i64; 4]) {
        let [x, y, nq, p] = coef;
        for mat in mats {
            let (ri, rj) = (mat[i].clone(), mat[j].clone());
            for k in 0..ri.len() {
                mat[i][k] = x * ri[k] + y * rj[k];
                mat[j][k] = nq * ri[k] + p * rj[k];
            }
        }
    }

    let mut t = 0;
    while t < rows.min(cols) {
        // Pivot: smallest nonzero magnitude in the trailing block.
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        if pi != t {
            a.swap(pi, t);
            left.swap(pi, t);
        }
        if pj != t {
            for row in a.iter_mut().chain(right.iter_mut()) {
                row.swap(t, pj);
            }
            right_inv.swap(t, pj);
        }
        loop {
            let mut dirty = false;
            for i in (t + 1)..rows {
                if a[i][t] % a[t][t] == 0 {
                    let q = a[i][t] / a[t][t];
                    if q != 0 {
                        row_op([&mut a, &mut left], t, i, [1, 0, -q, 1]);
                    }
                } else {
                    let (g, x, y) = ext_gcd(a[t][t], a[i][t]);
                    let (p, q) = (a[t][t] / g, a[i][t] / g);
                    row_op([&mut a, &mut left], t, i, [x, y, -q, p]);
                    dirty = true;
                }
            }
            for j in (t + 1)..cols {
                if a[t][j] % a[t][t] == 0 {
                    let q = a[t][j] / a[t][t];
                    if q != 0 {
                        col_op([&mut a, &mut right], &mut right_inv, t, j, [1, 0, -q, 1]);
                    }
                } else {
                    let (g, x, y) = ext_gcd(a[t][t], a[t][j]);
                    let (p, q) = (a[t][t] / g, a[t][j] / g);
                    col_op([&mut a, &mut right], &mut right_inv, t, j, [x, y, -q, p]);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // Divisibility: pull a row with a non-multiple into row t.
            let piv = a[t][t];
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| a[i][j] % piv != 0));
            match bad {
                Some(i) => {
                    row_op([&mut a, &mut left], t, i, [1, 1, 0, 1]);
                }
                None => break,
            }
        }
        if a[t][t] < 0 {
            for v in a[t].iter_mut() {
                *v = -*v;
            }
            for v in left[t].iter_mut() {
                *v = -*v;
            }
        }
        diagonal.push(a[t][t]);
        t += 1;
    }
    Smith {
        diagonal,
        left,
        right,
        right_inverse: right_inv,
    }
}

/// One integer solution of `A x = b`, if any exists.
pub fn solve_integer(a: &[Vec<i64>], cols: usize, b: &[i64]) -> Option<IntVec> {
    let s = smith(a, cols);
    let ub = mat_vec(&s.left, b);
    let mut y = vec![0; cols];
    for (i, &v) in ub.iter().enumerate() {
        if i < s.rank() {
            let d = s.diagonal[i];
            if v % d != 0 {
                return None;
            }
            y[i] = v / d;
        } else if v != 0 {
            return None;
        }
    }
    Some(mat_vec(&s.right, &y))
}

/// A sublattice of `ℤⁿ` stored by its (unique) Hermite basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Sublattice {
    pub ambient: usize,
    pub basis: IntMatrix,
}

impl Sublattice {
    pub fn new(ambient: usize, generators: IntMatrix) -> Self {
        let h = hermite(&generators, ambient);
        let basis = h.form[..h.rank].to_vec();
        Sublattice { ambient, basis }
    }

    pub fn zero(ambient: usize) -> Self {
        Sublattice {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    fn pivot(row: &[i64]) -> usize {
        row.iter().position(|&x| x != 0).expect("nonzero basis row")
    }

    /// Canonical representative of `v + L`: each pivot coordinate reduced into
    /// `[0, pivot)`.
    pub fn reduce(&self, v: &[i64]) -> IntVec {
        let mut out = v.to_vec();
        for row in &self.basis {
            let p = Self::pivot(row);
            let q = Integer::div_floor(&out[p], &row[p]);
            if q != 0 {
                for (o, r) in out.iter_mut().zip(row) {
                    *o -= q * r;
                }
            }
        }
        out
    }

    /// Coordinates of `v` in the basis, or `None` when `v ∉ L`.
    pub fn coordinates(&self, v: &[i64]) -> Option<IntVec> {
        let mut rest = v.to_vec();
        let mut coords = Vec::with_capacity(self.rank());
        for row in &self.basis {
            let p = Self::pivot(row);
            if rest[p] % row[p] != 0 {
                return None;
            }
            let c = rest[p] / row[p];
            for (o, r) in rest.iter_mut().zip(row) {
                *o -= c * r;
            }
            coords.push(c);
        }
        rest.iter().all(|&x| x == 0).then_some(coords)
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn is_subset_of(&self, other: &Sublattice) -> bool {
        self.basis.iter().all(|b| other.contains(b))
    }

    pub fn intersection(&self, other: &Sublattice) -> Sublattice {
        // x = Σ a_i b_i = Σ c_j d_j  <=>  (a, -c) in the kernel of [B; D]ᵀ.
        let k = self.rank();
        let mut stacked: IntMatrix = self.basis.clone();
        stacked.extend(other.basis.iter().map(|r| r.iter().map(|x| -x).collect()));
        if stacked.is_empty() {
            return Sublattice::zero(self.ambient);
        }
        let kern = integer_kernel(&transpose(&stacked, self.ambient), stacked.len());
        let gens = kern
            .iter()
            .map(|c| vec_mat(&c[..k], &self.basis, self.ambient))
            .collect();
        Sublattice::new(self.ambient, gens)
    }
}

/// A finitely generated abelian group `ℤ^r ⊕ ⊕ ℤ/dᵢ` presented as a quotient
/// of an ambient lattice, with the projection map onto it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianGroupPresentation {
    pub free_rank: usize,
    #[serde(rename = "torsion")]
    pub invariant_factors: Vec<i64>,
    /// One row per output coordinate (torsion coordinates first). An ambient
    /// vector `x` maps to `(row · x)` with torsion coordinates reduced.
    pub projection: IntMatrix,
    #[serde(skip)]
    section: IntMatrix,
    #[serde(skip)]
    ambient: usize,
}

impl AbelianGroupPresentation {
    pub fn ambient_rank(&self) -> usize {
        self.ambient
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> i64 {
        self.invariant_factors.iter().product()
    }

    /// Group-theoretic isomorphism type: free rank and invariant factors.
    pub fn same_group(&self, other: &Self) -> bool {
        self.free_rank == other.free_rank && self.invariant_factors == other.invariant_factors
    }

    pub fn project(&self, x: &[i64]) -> IntVec {
        let mut y = mat_vec(&self.projection, x);
        for (v, d) in y.iter_mut().zip(&self.invariant_factors) {
            *v = v.mod_floor(d);
        }
        y
    }

    /// An ambient vector whose projection is `y`.
    pub fn lift(&self, y: &[i64]) -> IntVec {
        vec_mat(y, &self.section, self.ambient)
    }

    /// Canonical form of a group element given in output coordinates.
    pub fn normalize(&self, y: &[i64]) -> IntVec {
        let mut y = y.to_vec();
        for (v, d) in y.iter_mut().zip(&self.invariant_factors) {
            *v = v.mod_floor(d);
        }
        y
    }
}

/// `ℤⁿ / ⟨subgroup⟩` in Smith normal form.
pub fn lattice_quotient(rank: usize, subgroup: &[Vec<i64>]) -> AbelianGroupPresentation {
    let s = smith(subgroup, rank);
    // x ↦ y = x · right; the subgroup becomes ⊕ dᵢ ℤ eᵢ.
    let mut torsion_idx = Vec::new();
    let mut factors = Vec::new();
    for (i, &d) in s.diagonal.iter().enumerate() {
        if d > 1 {
            torsion_idx.push(i);
            factors.push(d);
        }
    }
    let free_idx: Vec<usize> = (s.rank()..rank).collect();
    let kept: Vec<usize> = torsion_idx.iter().chain(&free_idx).copied().collect();
    let projection = kept
        .iter()
        .map(|&i| (0..rank).map(|l| s.right[l][i]).collect())
        .collect();
    let section = kept.iter().map(|&i| s.right_inverse[i].clone()).collect();
    AbelianGroupPresentation {
        free_rank: free_idx.len(),
        invariant_factors: factors,
        projection,
        section,
        ambient: rank,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn det(m: &[Vec<i64>]) -> i64 {
        let n = m.len();
        if n == 0 {
            return 1;
        }
        (0..n)
            .map(|j| {
                let minor: IntMatrix = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, v)| *v).collect())
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * det(&minor)
            })
            .sum()
    }

    #[test]
    fn kernel_of_single_ray() {
        assert_eq!(integer_kernel(&[vec![1, 0]], 2), vec![vec![0, 1]]);
        assert_eq!(integer_kernel(&[], 2), identity(2));
        assert!(integer_kernel(&[vec![1, 0], vec![0, 1]], 2).is_empty());
    }

    #[test]
    fn quotient_examples() {
        let q = lattice_quotient(2, &[vec![0, 1]]);
        assert_eq!((q.free_rank, q.invariant_factors.clone()), (1, vec![]));
        assert_eq!(q.project(&[5, 7]).len(), 1);
        assert_eq!(q.project(&[0, 7]), vec![0]);
        assert_eq!(q.project(&[1, 0]).iter().map(|x| x.abs()).collect::<Vec<_>>(), vec![1]);

        let q = lattice_quotient(2, &[vec![2, 0], vec![0, 1]]);
        assert_eq!((q.free_rank, q.invariant_factors.clone()), (0, vec![2]));

        let q = lattice_quotient(2, &[]);
        assert_eq!((q.free_rank, q.invariant_factors.clone()), (2, vec![]));
    }

    #[test]
    fn torsion_matches_coset_count() {
        // Brute force: count classes of the box [0, N)² modulo the subgroup
        // by canonical reduction.
        for gens in [
            vec![vec![2, 0], vec![0, 3]],
            vec![vec![2, 4], vec![6, 8]],
            vec![vec![3, 1], vec![1, 3]],
            vec![vec![4, 0], vec![0, 6]],
        ] {
            let q = lattice_quotient(2, &gens);
            assert_eq!(q.free_rank, 0);
            let l = Sublattice::new(2, gens.clone());
            let mut classes = std::collections::BTreeSet::new();
            for x in -20..20 {
                for y in -20..20 {
                    classes.insert(l.reduce(&[x, y]));
                }
            }
            assert_eq!(classes.len() as i64, q.torsion_order(), "{gens:?}");
            assert_eq!(q.torsion_order(), det(&gens).abs());
        }
    }

    #[test]
    fn solve_detects_parity_obstruction() {
        let a = vec![vec![1, 0], vec![1, 2]];
        assert!(solve_integer(&a, 2, &[1, 2]).is_none());
        let x = solve_integer(&a, 2, &[1, 3]).unwrap();
        assert_eq!(mat_vec(&a, &x), vec![1, 3]);
    }

    fn small_matrix() -> impl Strategy<Value = (usize, IntMatrix)> {
        (1usize..4, 1usize..5).prop_flat_map(|(r, c)| {
            (Just(c), prop::collection::vec(prop::collection::vec(-6i64..7, c), r))
        })
    }

    proptest! {
        #[test]
        fn smith_transforms_are_consistent((cols, m) in small_matrix()) {
            let s = smith(&m, cols);
            let d = mat_mul(&mat_mul(&s.left, &m, cols), &s.right, cols);
            for (i, row) in d.iter().enumerate() {
                for (j, &v) in row.iter().enumerate() {
                    let expect = if i == j && i < s.rank() { s.diagonal[i] } else { 0 };
                    prop_assert_eq!(v, expect);
                }
            }
            for w in s.diagonal.windows(2) {
                prop_assert_eq!(w[1] % w[0], 0);
            }
            prop_assert_eq!(mat_mul(&s.right, &s.right_inverse, cols), identity(cols));
            prop_assert_eq!(det(&s.left).abs(), 1);
        }

        #[test]
        fn kernel_is_annihilated_and_has_right_rank((cols, m) in small_matrix()) {
            let k = integer_kernel(&m, cols);
            for v in &k {
                prop_assert!(mat_vec(&m, v).iter().all(|&x| x == 0));
            }
            prop_assert_eq!(k.len() + rank(&m, cols), cols);
            // saturated: every lattice point of the rational kernel is in it
            let l = Sublattice::new(cols, k);
            for v in &l.basis {
                prop_assert_eq!(vec_gcd(v), 1);
            }
        }

        #[test]
        fn reduction_is_canonical((cols, m) in small_matrix(), x in prop::collection::vec(-9i64..10, 4), c in prop::collection::vec(-3i64..4, 3)) {
            let l = Sublattice::new(cols, m.clone());
            let x = &x[..cols];
            let shift = vec_mat(&c[..m.len()], &m, cols);
            let y: IntVec = x.iter().zip(&shift).map(|(a, b)| a + b).collect();
            prop_assert_eq!(l.reduce(x), l.reduce(&y));
            prop_assert!(l.contains(&shift));
        }

        #[test]
        fn quotient_kills_subgroup((cols, m) in small_matrix(), y in prop::collection::vec(-9i64..10, 4)) {
            let q = lattice_quotient(cols, &m);
            for g in &m {
                prop_assert!(q.project(g).iter().all(|&v| v == 0));
            }
            let y = q.normalize(&y[..q.free_rank + q.invariant_factors.len()]);
            prop_assert_eq!(q.project(&q.lift(&y)), y);
        }
    }
}
