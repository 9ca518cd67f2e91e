//! Matrices over zero-sum-free semirings and the structure of `GL_n`.
//!
//! Over a zero-sum-free semiring with only trivial idempotent pairs every
//! invertible matrix is a generalized permutation matrix, giving the split
//! exact sequence `1 → (R^×)ⁿ → GL_n(R) → S_n → 1`.
//!
//! Permutations compose right-to-left: `(σ∘τ)(i) = σ(τ(i))`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::semiring::{Boolean, Semiring};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinearError {
    #[error("dimension mismatch: {left:?} vs {right:?}")]
    DimensionMismatch { left: (usize, usize), right: (usize, usize) },
    #[error("matrix is not invertible: {0}")]
    NotInvertible(InvertibilityWitness),
    #[error("semiring must be zero-sum-free with only trivial idempotent pairs")]
    WrongTag,
    #[error("enumeration is limited to n <= 4, got {0}")]
    TooLarge(usize),
    #[error("selections of different sizes {0} and {1}")]
    SizeMismatch(usize, usize),
    #[error("invalid permutation {0:?}")]
    NotAPermutation(Vec<usize>),
    #[error("values do not select exactly one permutation")]
    NotASelection,
}

/// Why a square matrix fails the generalized-permutation structure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InvertibilityWitness {
    NotSquare { rows: usize, cols: usize },
    ZeroColumn { col: usize },
    MultipleNonzero { col: usize, rows: Vec<usize> },
    NonUnitEntry { row: usize, col: usize },
    RowCollision { row: usize, cols: Vec<usize> },
}

impl fmt::Display for InvertibilityWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NotSquare { rows, cols } => write!(f, "{rows}x{cols} matrix is not square"),
            Self::ZeroColumn { col } => write!(f, "column {col} is zero"),
            Self::MultipleNonzero { col, rows } => write!(f, "column {col} has nonzero entries in rows {rows:?}"),
            Self::NonUnitEntry { row, col } => write!(f, "entry ({row}, {col}) is not a unit"),
            Self::RowCollision { row, cols } => write!(f, "row {row} is hit by columns {cols:?}"),
        }
    }
}

/// A permutation of `{0, …, n−1}` stored as its image list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation(Vec<usize>);

impl TryFrom<Vec<usize>> for Permutation {
    type Error = LinearError;

    fn try_from(images: Vec<usize>) -> Result<Self, Self::Error> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(LinearError::NotAPermutation(images));
            }
        }
        Ok(Permutation(images))
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.0
    }
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut v: Vec<usize> = (0..n).collect();
        v.swap(a, b);
        Permutation(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Permutation(inv)
    }

    /// All permutations of `n` letters in lexicographic order.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..n).collect();
        loop {
            out.push(Permutation(cur.clone()));
            // next lexicographic permutation
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
            cur.swap(i, j);
            cur[i + 1..].reverse();
        }
        out
    }
}

/// Dense row-major matrix over a semiring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    entries: Vec<S>,
}

impl<S: Semiring> Matrix<S> {
    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self, LinearError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(LinearError::DimensionMismatch {
                left: (r, c),
                right: (1, bad.len()),
            });
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            entries: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, S::one());
        }
        m
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, r: usize, c: usize) -> &S {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: S) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        self.entries.chunks(self.cols.max(1)).take(self.rows).map(<[S]>::to_vec).collect()
    }

    pub fn mul(&self, rhs: &Matrix<S>) -> Result<Matrix<S>, LinearError> {
        mat_mul(self, rhs)
    }
}

pub fn mat_mul<S: Semiring>(a: &Matrix<S>, b: &Matrix<S>) -> Result<Matrix<S>, LinearError> {
    if a.cols != b.rows {
        return Err(LinearError::DimensionMismatch {
            left: a.shape(),
            right: b.shape(),
        });
    }
    let mut out = Matrix::<S>::zeros(a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let aik = a.get(i, k);
            if aik.is_zero() {
                continue;
            }
            for j in 0..b.cols {
                let term = aik.mul(b.get(k, j));
                let acc = out.get(i, j).add(&term);
                out.set(i, j, acc);
            }
        }
    }
    Ok(out)
}

/// A generalized permutation matrix: `A[perm(i)][i] = diag[i]`, all other
/// entries zero, every `diag[i]` a unit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenPermMatrix<S> {
    pub perm: Permutation,
    pub diag: Vec<S>,
}

impl<S: Semiring> GenPermMatrix<S> {
    pub fn new(perm: Permutation, diag: Vec<S>) -> Result<Self, LinearError> {
        if perm.len() != diag.len() {
            return Err(LinearError::DimensionMismatch {
                left: (perm.len(), perm.len()),
                right: (diag.len(), 1),
            });
        }
        if let Some(i) = diag.iter().position(|d| !d.is_unit()) {
            return Err(LinearError::NotInvertible(InvertibilityWitness::NonUnitEntry {
                row: perm.apply(i),
                col: i,
            }));
        }
        Ok(GenPermMatrix { perm, diag })
    }

    pub fn identity(n: usize) -> Self {
        GenPermMatrix {
            perm: Permutation::identity(n),
            diag: vec![S::one(); n],
        }
    }

    pub fn diagonal(diag: Vec<S>) -> Result<Self, LinearError> {
        Self::new(Permutation::identity(diag.len()), diag)
    }

    pub fn permutation(perm: Permutation) -> Self {
        let n = perm.len();
        GenPermMatrix {
            perm,
            diag: vec![S::one(); n],
        }
    }

    pub fn size(&self) -> usize {
        self.diag.len()
    }

    /// The dense matrix this denotes.
    pub fn to_matrix(&self) -> Matrix<S> {
        let n = self.size();
        let mut m = Matrix::zeros(n, n);
        for (i, d) in self.diag.iter().enumerate() {
            m.set(self.perm.apply(i), i, d.clone());
        }
        m
    }

    /// Product in `GL_n`: permutation parts compose, diagonals twist.
    pub fn mul(&self, rhs: &GenPermMatrix<S>) -> GenPermMatrix<S> {
        let perm = self.perm.compose(&rhs.perm);
        let diag = (0..rhs.size())
            .map(|j| self.diag[rhs.perm.apply(j)].mul(&rhs.diag[j]))
            .collect();
        GenPermMatrix { perm, diag }
    }

    pub fn inverse(&self) -> GenPermMatrix<S> {
        let perm = self.perm.inverse();
        let diag = (0..self.size())
            .map(|j| self.diag[perm.apply(j)].unit_inverse().expect("unit diagonal"))
            .collect();
        GenPermMatrix { perm, diag }
    }
}

/// Reads off the permutation/diagonal structure of an invertible matrix.
pub fn decompose_invertible<S: Semiring>(a: &Matrix<S>) -> Result<GenPermMatrix<S>, LinearError> {
    if !(S::FLAGS.zero_sum_free && S::FLAGS.trivial_idempotent_pairs) {
        return Err(LinearError::WrongTag);
    }
    let (rows, cols) = a.shape();
    if rows != cols {
        return Err(LinearError::NotInvertible(InvertibilityWitness::NotSquare { rows, cols }));
    }
    let n = rows;
    let mut images = Vec::with_capacity(n);
    let mut diag = Vec::with_capacity(n);
    let mut hit: Vec<Vec<usize>> = vec![Vec::new(); n];
    for col in 0..n {
        let nonzero: Vec<usize> = (0..n).filter(|&r| !a.get(r, col).is_zero()).collect();
        match nonzero.as_slice() {
            [] => return Err(LinearError::NotInvertible(InvertibilityWitness::ZeroColumn { col })),
            [row] => {
                let v = a.get(*row, col);
                if !v.is_unit() {
                    return Err(LinearError::NotInvertible(InvertibilityWitness::NonUnitEntry {
                        row: *row,
                        col,
                    }));
                }
                hit[*row].push(col);
                images.push(*row);
                diag.push(v.clone());
            }
            _ => {
                return Err(LinearError::NotInvertible(InvertibilityWitness::MultipleNonzero {
                    col,
                    rows: nonzero,
                }))
            }
        }
    }
    if let Some(row) = hit.iter().position(|cols| cols.len() != 1) {
        return Err(LinearError::NotInvertible(InvertibilityWitness::RowCollision {
            row,
            cols: hit[row].clone(),
        }));
    }
    Ok(GenPermMatrix {
        perm: Permutation(images),
        diag,
    })
}

/// `GL_n(𝔹)`: exactly the `n!` permutation matrices.
pub fn enumerate_gl(n: usize) -> Result<Vec<GenPermMatrix<Boolean>>, LinearError> {
    if n > 4 {
        return Err(LinearError::TooLarge(n));
    }
    Ok(Permutation::all(n).into_iter().map(GenPermMatrix::permutation).collect())
}

/// The maps of `1 → (R^×)ⁿ → GL_n(R) → S_n → 1`: `(diagonal part, g(A))`.
pub fn split_sequence_maps<S: Semiring>(a: &GenPermMatrix<S>) -> (Vec<S>, Permutation) {
    (a.diag.clone(), a.perm.clone())
}

/// A point of `Spec R_n` over a connected base, i.e. a homomorphism
/// `R_n → A` sending `e_σ ↦ 1` for exactly one `σ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SnSelection {
    pub sigma: Permutation,
}

impl SnSelection {
    pub fn new(sigma: Permutation) -> Self {
        SnSelection { sigma }
    }

    pub fn n(&self) -> usize {
        self.sigma.len()
    }

    /// The counit `ε`: `e_σ ↦ 1` iff `σ = id`.
    pub fn counit(n: usize) -> Self {
        SnSelection {
            sigma: Permutation::identity(n),
        }
    }

    /// Value of the homomorphism on the basis idempotent `e_τ`.
    pub fn value(&self, tau: &Permutation) -> u64 {
        u64::from(*tau == self.sigma)
    }

    /// Rebuilds a selection from its values on all `e_τ`; the values must be
    /// 0/1 with exactly one 1.
    pub fn from_values(n: usize, values: impl Fn(&Permutation) -> u64) -> Result<Self, LinearError> {
        let mut chosen = None;
        for tau in Permutation::all(n) {
            match values(&tau) {
                0 => {}
                1 if chosen.is_none() => chosen = Some(tau),
                _ => return Err(LinearError::NotASelection),
            }
        }
        chosen.map(SnSelection::new).ok_or(LinearError::NotASelection)
    }

    /// `f ∘ S` with the antipode `e_σ ↦ e_{σ⁻¹}`.
    pub fn antipode(&self) -> Self {
        let n = self.n();
        SnSelection::from_values(n, |s| self.value(&s.inverse())).expect("antipode of a selection")
    }
}

/// Convolution `(f*g)(e_σ) = Σ_τ f(e_τ)·g(e_{τ⁻¹σ})`, evaluated as a sum over
/// all of `S_n`.
pub fn sn_convolve(f: &SnSelection, g: &SnSelection) -> Result<SnSelection, LinearError> {
    if f.n() != g.n() {
        return Err(LinearError::SizeMismatch(f.n(), g.n()));
    }
    let n = f.n();
    let group = Permutation::all(n);
    SnSelection::from_values(n, |sigma| {
        group
            .iter()
            .map(|tau| f.value(tau) * g.value(&tau.inverse().compose(sigma)))
            .sum()
    })
}
