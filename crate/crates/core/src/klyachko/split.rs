use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::linear::{decompose_invertible, GenPermMatrix, InvertibilityWitness, LinearError, Matrix, Permutation};
use crate::poly::{MonoidPoly, Term};
use crate::semiring::{MonoidAlgebraUnit, Semiring};
use crate::toric::Fan;

use super::{FanAtlas, KlyachkoError, LineCocycle};

/// Rank-`n` transition matrices over `K[Λ]` on ordered pairs of charts, with
/// `A_συ = A_στ·A_τυ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankNCocycle<S> {
    atlas: Arc<FanAtlas>,
    charts: Vec<usize>,
    rank: usize,
    transitions: BTreeMap<(usize, usize), Matrix<MonoidPoly<S>>>,
}

#[derive(Serialize, Deserialize)]
struct MatrixJson<S> {
    from: usize,
    to: usize,
    matrix: Vec<Vec<Vec<Term<S>>>>,
}

#[derive(Serialize, Deserialize)]
struct RankNJson<S> {
    fan: Fan,
    charts: Vec<usize>,
    rank: usize,
    transitions: Vec<MatrixJson<S>>,
}

impl<S: Semiring + Serialize> Serialize for RankNCocycle<S> {
    fn serialize<Z: serde::Serializer>(&self, s: Z) -> Result<Z::Ok, Z::Error> {
        let lr = self.atlas.rank();
        RankNJson {
            fan: self.atlas.fan().clone(),
            charts: self.charts.clone(),
            rank: self.rank,
            transitions: self
                .transitions
                .iter()
                .map(|(&(from, to), m)| MatrixJson {
                    from,
                    to,
                    matrix: m
                        .to_rows()
                        .iter()
                        .map(|row| row.iter().map(|p| p.terms(lr)).collect())
                        .collect(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

fn unit_poly<S: Semiring>(u: &MonoidAlgebraUnit<S>) -> MonoidPoly<S> {
    MonoidPoly::from_unit(u)
}

impl<S: Semiring> RankNCocycle<S> {
    /// Stored as given; [`split_cocycle`] performs the checks.
    pub fn new(
        atlas: Arc<FanAtlas>,
        charts: Vec<usize>,
        rank: usize,
        transitions: BTreeMap<(usize, usize), Matrix<MonoidPoly<S>>>,
    ) -> Result<Self, KlyachkoError> {
        for &a in &charts {
            if a >= atlas.num_cones() {
                return Err(KlyachkoError::MissingCone { cone: a });
            }
            for &b in &charts {
                let m = transitions
                    .get(&(a, b))
                    .ok_or_else(|| KlyachkoError::ShapeMismatch(format!("missing transition {a} -> {b}")))?;
                if m.shape() != (rank, rank) {
                    return Err(KlyachkoError::ShapeMismatch(format!(
                        "transition {a} -> {b} has shape {:?}",
                        m.shape()
                    )));
                }
            }
        }
        Ok(RankNCocycle {
            atlas,
            charts,
            rank,
            transitions,
        })
    }

    /// Block-diagonal sum of line cocycles on a common chart list.
    pub fn direct_sum(lines: &[LineCocycle<S>]) -> Result<Self, KlyachkoError> {
        let first = lines.first().ok_or(KlyachkoError::EmptyTuple)?;
        let (atlas, charts) = (first.atlas().clone(), first.charts().to_vec());
        if lines.iter().any(|l| *l.atlas() != atlas || l.charts() != charts.as_slice()) {
            return Err(KlyachkoError::FanMismatch);
        }
        let n = lines.len();
        let mut transitions = BTreeMap::new();
        for &a in &charts {
            for &b in &charts {
                let mut m = Matrix::zeros(n, n);
                for (k, l) in lines.iter().enumerate() {
                    m.set(k, k, unit_poly(l.transition(a, b).expect("complete cocycle")));
                }
                transitions.insert((a, b), m);
            }
        }
        Ok(RankNCocycle {
            atlas,
            charts,
            rank: n,
            transitions,
        })
    }

    pub fn atlas(&self) -> &Arc<FanAtlas> {
        &self.atlas
    }

    pub fn charts(&self) -> &[usize] {
        &self.charts
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn transition(&self, from: usize, to: usize) -> Option<&Matrix<MonoidPoly<S>>> {
        self.transitions.get(&(from, to))
    }

    pub fn set_transition(&mut self, from: usize, to: usize, m: Matrix<MonoidPoly<S>>) {
        self.transitions.insert((from, to), m);
    }

    /// `A'_στ = g_σ⁻¹·A_στ·g_τ` for a 0-cochain `g` of invertible matrices.
    pub fn change_frames(&self, g: &BTreeMap<usize, GenPermMatrix<MonoidPoly<S>>>) -> Result<Self, KlyachkoError> {
        let mut out = self.clone();
        for &a in &self.charts {
            for &b in &self.charts {
                let (ga, gb) = match (g.get(&a), g.get(&b)) {
                    (Some(x), Some(y)) => (x, y),
                    _ => return Err(KlyachkoError::MissingChart { cone: if g.contains_key(&a) { b } else { a } }),
                };
                let m = ga
                    .inverse()
                    .to_matrix()
                    .mul(&self.transitions[&(a, b)])
                    .and_then(|m| m.mul(&gb.to_matrix()))
                    .map_err(|e| KlyachkoError::ShapeMismatch(e.to_string()))?;
                out.transitions.insert((a, b), m);
            }
        }
        Ok(out)
    }

    pub fn from_json(atlas: Arc<FanAtlas>, value: &serde_json::Value) -> Result<Self, KlyachkoError>
    where
        S: for<'de> Deserialize<'de>,
    {
        let j: RankNJson<S> =
            serde_json::from_value(value.clone()).map_err(|e| KlyachkoError::ShapeMismatch(e.to_string()))?;
        let mut transitions = BTreeMap::new();
        for t in j.transitions {
            let rows = t
                .matrix
                .into_iter()
                .map(|row| row.into_iter().map(MonoidPoly::from_terms).collect())
                .collect();
            let m = Matrix::from_rows(rows).map_err(|e| KlyachkoError::ShapeMismatch(e.to_string()))?;
            transitions.insert((t.from, t.to), m);
        }
        Self::new(atlas, j.charts, j.rank, transitions)
    }
}

/// Splits a rank-`n` cocycle into `n` line cocycles.
///
/// Every transition is a generalized permutation matrix. Its permutation
/// parts form a cocycle with values in the constant group `S_n`, trivialized
/// by `q_σ = p_σa` for the anchor chart `a`; after the frame change by
/// `q_σ` all transitions are diagonal, and summand `k` reads
/// `φ^{(k)}_στ = d_στ[q_τ(k)]`. The anchor defaults to the maximal cone with
/// the lexicographically smallest ray list.
pub fn split_cocycle<S: Semiring>(c: &RankNCocycle<S>, anchor: Option<usize>) -> Result<Vec<LineCocycle<S>>, KlyachkoError> {
    let atlas = &c.atlas;
    let lr = atlas.rank();
    let mut parts: BTreeMap<(usize, usize), GenPermMatrix<MonoidPoly<S>>> = BTreeMap::new();
    for (&(from, to), m) in &c.transitions {
        if !(c.charts.contains(&from) && c.charts.contains(&to)) {
            continue;
        }
        let g = decompose_invertible(m).map_err(|e| match e {
            LinearError::NotInvertible(witness) => KlyachkoError::NotInvertibleTransition { from, to, witness },
            other => KlyachkoError::ShapeMismatch(other.to_string()),
        })?;
        let overlap = atlas
            .overlap(from, to)
            .ok_or(KlyachkoError::NotACover { cone: from })?;
        for (col, d) in g.diag.iter().enumerate() {
            let unit = d.as_unit(lr).expect("decomposition yields units");
            if unit.exponent.len() != lr || !atlas.perp(overlap).contains(&unit.exponent) {
                return Err(KlyachkoError::NotInvertibleTransition {
                    from,
                    to,
                    witness: InvertibilityWitness::NonUnitEntry {
                        row: g.perm.apply(col),
                        col,
                    },
                });
            }
        }
        parts.insert((from, to), g);
    }
    let charts = &c.charts;
    for &a in charts {
        if !parts[&(a, a)].perm.is_identity() {
            return Err(KlyachkoError::InconsistentPermutationCocycle((a, a, a)));
        }
        for &b in charts {
            for &d in charts {
                if parts[&(a, b)].perm.compose(&parts[&(b, d)].perm) != parts[&(a, d)].perm {
                    return Err(KlyachkoError::InconsistentPermutationCocycle((a, b, d)));
                }
            }
        }
    }
    let anchor = match anchor {
        Some(a) => a,
        None => *charts
            .iter()
            .filter(|&&s| atlas.maximal().contains(&s))
            .min_by(|&&x, &&y| atlas.rays_of(x).cmp(atlas.rays_of(y)))
            .or_else(|| charts.first())
            .ok_or(KlyachkoError::EmptyTuple)?,
    };
    if !charts.contains(&anchor) {
        return Err(KlyachkoError::MissingChart { cone: anchor });
    }
    let q: BTreeMap<usize, Permutation> = charts.iter().map(|&s| (s, parts[&(s, anchor)].perm.clone())).collect();
    let mut out = Vec::with_capacity(c.rank);
    for k in 0..c.rank {
        let transitions = parts
            .iter()
            .map(|(&(a, b), g)| ((a, b), g.diag[q[&b].apply(k)].as_unit(lr).expect("unit")))
            .collect();
        let line = LineCocycle::new_unchecked(atlas.clone(), charts.clone(), transitions);
        line.check().map_err(KlyachkoError::NotACocycle)?;
        out.push(line);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::klyachko::{family_to_cocycle, KlyachkoFamily};
    use crate::semiring::Tropical;
    use crate::toric::corpus;

    type P = MonoidPoly<Tropical>;

    fn line(atlas: &Arc<FanAtlas>, values: &[i64]) -> LineCocycle<Tropical> {
        family_to_cocycle(&KlyachkoFamily::from_ray_values(atlas.clone(), values).unwrap())
    }

    #[test]
    fn trivial_sum_splits_trivially() {
        let a = FanAtlas::new(corpus::p2()).unwrap();
        let t = LineCocycle::<Tropical>::trivial(a);
        let c = RankNCocycle::direct_sum(&[t.clone(), t.clone(), t]).unwrap();
        let parts = split_cocycle(&c, None).unwrap();
        assert_eq!(parts.len(), 3);
        assert!(parts.iter().all(LineCocycle::is_trivial));
    }

    #[test]
    fn swapped_chart_recovers_summands() {
        let a = FanAtlas::new(corpus::p1()).unwrap();
        let (la, lb) = (line(&a, &[1, 0]), line(&a, &[0, 3]));
        let c = RankNCocycle::direct_sum(&[la.clone(), lb.clone()]).unwrap();
        let swap = GenPermMatrix::<P>::permutation(Permutation::transposition(2, 0, 1));
        let g = [(1, GenPermMatrix::identity(2)), (2, swap)].into();
        let twisted = c.change_frames(&g).unwrap();
        assert!(!twisted.transition(1, 2).unwrap().to_rows()[0][0].is_unit());
        for anchor in [1, 2] {
            let parts = split_cocycle(&twisted, Some(anchor)).unwrap();
            let got: Vec<Vec<i64>> = parts.iter().map(|l| l.transition(1, 2).unwrap().exponent.clone()).collect();
            let mut want = vec![la.transition(1, 2).unwrap().exponent.clone(), lb.transition(1, 2).unwrap().exponent.clone()];
            let mut got_sorted = got.clone();
            got_sorted.sort();
            want.sort();
            assert_eq!(got_sorted, want);
        }
    }

    #[test]
    fn non_monomial_transition() {
        let a = FanAtlas::new(corpus::p2()).unwrap();
        let t = LineCocycle::<Tropical>::trivial(a);
        let mut c = RankNCocycle::direct_sum(&[t.clone(), t.clone(), t]).unwrap();
        let mut m = c.transition(4, 5).unwrap().clone();
        m.set(0, 1, P::one());
        c.set_transition(4, 5, m);
        assert_eq!(
            split_cocycle(&c, None),
            Err(KlyachkoError::NotInvertibleTransition {
                from: 4,
                to: 5,
                witness: InvertibilityWitness::MultipleNonzero { col: 1, rows: vec![0, 1] }
            })
        );
    }

    #[test]
    fn inconsistent_permutations() {
        let a = FanAtlas::new(corpus::p1()).unwrap();
        let t = LineCocycle::<Tropical>::trivial(a);
        let mut c = RankNCocycle::direct_sum(&[t.clone(), t]).unwrap();
        let swap = GenPermMatrix::<P>::permutation(Permutation::transposition(2, 0, 1)).to_matrix();
        c.set_transition(1, 2, swap);
        assert!(matches!(
            split_cocycle(&c, None),
            Err(KlyachkoError::InconsistentPermutationCocycle(_))
        ));
    }

    #[test]
    fn json_round_trip() {
        let a = FanAtlas::new(corpus::p1()).unwrap();
        let c = RankNCocycle::direct_sum(&[line(&a, &[1, 0]), line(&a, &[2, 2])]).unwrap();
        let v = serde_json::to_value(&c).unwrap();
        assert_eq!(RankNCocycle::<Tropical>::from_json(a, &v).unwrap(), c);
    }
}
