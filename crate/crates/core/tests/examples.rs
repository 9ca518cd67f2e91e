use std::collections::BTreeMap;

use tropvb::klyachko::{
    check_family, family_to_cocycle, space_to_matroid_bundle, space_to_tuple, split_cocycle, trivialize_affine,
    tuple_to_space, DeltaKlyachkoSpace, FamilyViolation, FanAtlas, KlyachkoError, KlyachkoFamily, LineCocycle,
    RankNCocycle, Trivialization,
};
use tropvb::lattice::lattice_quotient;
use tropvb::linear::{decompose_invertible, enumerate_gl, sn_convolve, InvertibilityWitness, LinearError, Matrix, Permutation, SnSelection};
use tropvb::picard::{equivariant_picard, picard, psi_kernel};
use tropvb::poly::MonoidPoly;
use tropvb::semiring::{
    factor_unit, is_idempotent_pair, monoid_algebra_units, Boolean, MonoidAlgebraUnit, PairKind, Semiring, SemiringTag,
    Tropical,
};
use tropvb::toric::{corpus, cover_graph_connected, dual_cone, faces, orbit_cone_primes, primitive_ray, validate_fan, Cone, Fan, FanViolation};
use tropvb::Error;

fn t(v: i64) -> Tropical {
    Tropical::int(v)
}

fn tm(rows: &[&[Option<i64>]]) -> Matrix<Tropical> {
    Matrix::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|x| x.map_or(Tropical::NegInfinity, Tropical::int)).collect())
            .collect(),
    )
    .unwrap()
}

fn bm(rows: &[&[u8]]) -> Matrix<Boolean> {
    Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| Boolean(x == 1)).collect()).collect()).unwrap()
}

#[test]
fn scalar_arithmetic() {
    assert_eq!(t(3).add(&t(5)), t(5));
    assert_eq!(t(3).mul(&t(5)), t(8));
    assert_eq!(Boolean(true).add(&Boolean(true)), Boolean(true));
    assert_eq!(is_idempotent_pair(&Boolean(true), &Boolean(false)), PairKind::TrivialPair);
    assert_eq!(is_idempotent_pair(&Boolean(true), &Boolean(true)), PairKind::NotPair);
    assert_eq!(is_idempotent_pair(&Tropical::NegInfinity, &t(0)), PairKind::TrivialPair);
}

#[test]
fn chart_units_and_factoring() {
    let quadrant = Cone::new(2, vec![vec![1, 0], vec![0, 1]]).unwrap();
    assert!(monoid_algebra_units(SemiringTag::TropicalRational, &quadrant).unwrap().exponent_basis.is_empty());
    let ray = Cone::new(2, vec![vec![1, 0]]).unwrap();
    assert_eq!(monoid_algebra_units(SemiringTag::TropicalRational, &ray).unwrap().exponent_basis, vec![vec![0, 1]]);
    let zero = Cone::zero(2);
    assert_eq!(monoid_algebra_units(SemiringTag::TropicalRational, &zero).unwrap().exponent_basis.len(), 2);

    let u = MonoidAlgebraUnit::new(t(7), vec![2, 0, 0, 3]).unwrap();
    let (a, b) = factor_unit(&u, 2, 2).unwrap();
    assert_eq!(a, MonoidAlgebraUnit::new(t(7), vec![2, 0]).unwrap());
    assert_eq!(b, MonoidAlgebraUnit::monomial(vec![0, 3]));
}

#[test]
fn matrices() {
    let id = tm(&[&[Some(0), None], &[None, Some(0)]]);
    let m = tm(&[&[Some(4), Some(-1)], &[None, Some(3)]]);
    assert_eq!(id.mul(&m).unwrap(), m);
    assert_eq!(
        bm(&[&[1, 1], &[0, 1]]).mul(&bm(&[&[1, 0], &[1, 1]])).unwrap(),
        bm(&[&[1, 1], &[1, 1]])
    );
    assert_eq!(tm(&[&[Some(2)]]).mul(&tm(&[&[Some(3)]])).unwrap(), tm(&[&[Some(5)]]));

    let a = tm(&[&[None, Some(2)], &[Some(7), None]]);
    let g = decompose_invertible(&a).unwrap();
    assert_eq!(g.perm, Permutation::transposition(2, 0, 1));
    assert_eq!(g.diag, vec![t(7), t(2)]);
    assert_eq!(a.mul(&g.inverse().to_matrix()).unwrap(), id);

    assert!(matches!(
        decompose_invertible(&bm(&[&[1, 1], &[1, 0]])),
        Err(LinearError::NotInvertible(InvertibilityWitness::MultipleNonzero { .. }))
    ));
    for (n, k) in [(1, 1), (2, 2), (3, 6)] {
        assert_eq!(enumerate_gl(n).unwrap().len(), k);
    }
}

#[test]
fn s3_convolution_follows_composition() {
    let a = Permutation::transposition(3, 0, 1);
    let b = Permutation::transposition(3, 1, 2);
    let c = sn_convolve(&SnSelection::new(a.clone()), &SnSelection::new(b.clone())).unwrap();
    // (a∘b)(i) = a(b(i)): 0 ↦ 1, 1 ↦ 2, 2 ↦ 0
    assert_eq!(c.sigma.images(), &[1, 2, 0]);
    assert_eq!(sn_convolve(&SnSelection::counit(3), &SnSelection::new(b.clone())).unwrap().sigma, b);
}

#[test]
fn cones() {
    assert_eq!(primitive_ray(&[2, 4]).unwrap(), vec![1, 2]);
    assert_eq!(primitive_ray(&[-3, 6, 9]).unwrap(), vec![-1, 2, 3]);
    let quadrant = Cone::new(2, vec![vec![1, 0], vec![0, 1]]).unwrap();
    assert_eq!(dual_cone(&quadrant).unwrap(), quadrant);
    let s = Cone::new(2, vec![vec![1, 0], vec![1, 2]]).unwrap();
    assert_eq!(dual_cone(&s).unwrap().rays(), &[vec![0, 1], vec![2, -1]]);
    assert_eq!(dual_cone(&Cone::zero(2)).unwrap().rays().len(), 4);
    assert_eq!(faces(&quadrant).unwrap().len(), 4);
    let orthant = Cone::new(3, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
    assert_eq!(faces(&orthant).unwrap().len(), 8);
    assert_eq!(lattice_quotient(2, &[vec![2, 0], vec![0, 1]]).invariant_factors, vec![2]);

    let primes = orbit_cone_primes(&quadrant).unwrap();
    let generic = primes.iter().find(|p| p.face.is_zero()).unwrap();
    assert!(generic.is_zero_ideal());
    let closed = primes.iter().find(|p| p.face == quadrant).unwrap();
    assert!(closed.complement.is_zero());
    assert!(closed.contains(&[1, 0]) && !closed.contains(&[0, 0]));
    assert_eq!(orbit_cone_primes(&Cone::new(2, vec![vec![1, 0]]).unwrap()).unwrap().len(), 2);
}

#[test]
fn fans() {
    assert!(validate_fan(&corpus::p1()).is_ok());
    let mut broken = corpus::p2();
    broken.cones.remove(0);
    assert_eq!(validate_fan(&broken), Err(FanViolation::FaceNotInFan { cone: 0, face: vec![] }));
    let overlap = Fan::new(
        2,
        vec![vec![1, 0], vec![0, 1], vec![1, 1]],
        vec![vec![], vec![0], vec![1], vec![2], vec![0, 1], vec![0, 2]],
    );
    assert_eq!(validate_fan(&overlap), Err(FanViolation::BadIntersection { first: 3, second: 4 }));
    for (_, f) in corpus::all() {
        let cones: Vec<Cone> = (0..f.cones.len()).map(|i| f.cone(i).unwrap()).collect();
        assert!(cover_graph_connected(&cones).unwrap());
    }
}

#[test]
fn families_and_cocycles() {
    let p1 = FanAtlas::new(corpus::p1()).unwrap();
    let reps: BTreeMap<usize, Vec<i64>> = [(0, vec![0]), (1, vec![3]), (2, vec![-1])].into();
    assert!(check_family(&p1, &reps).unwrap().is_valid());
    let f = KlyachkoFamily::new(p1.clone(), &reps).unwrap();
    let c: LineCocycle<Tropical> = family_to_cocycle(&f);
    assert_eq!(c.transition(1, 2).unwrap().exponent, vec![-4]);

    let p2 = FanAtlas::new(corpus::p2()).unwrap();
    let mut reps: BTreeMap<usize, Vec<i64>> = (0..p2.num_cones()).map(|i| (i, vec![0, 0])).collect();
    reps.insert(4, vec![1, 0]);
    assert_eq!(
        KlyachkoFamily::new(p2.clone(), &reps),
        Err(KlyachkoError::InvalidFamily(FamilyViolation { cone: 4, ray: 0 }))
    );
    let g = KlyachkoFamily::from_ray_values(p2.clone(), &[1, 2, 3]).unwrap();
    assert!(g.mul(&g.inv()).unwrap().is_trivial());
    let cg: LineCocycle<Boolean> = family_to_cocycle(&g);
    assert_eq!(cg.charts().len(), 3);
    assert!(cg.check().is_ok());
}

#[test]
fn affine_obstruction() {
    let a2 = FanAtlas::new(corpus::affine_plane()).unwrap();
    let c = LineCocycle::<Tropical>::trivial(a2);
    assert!(matches!(trivialize_affine(&c, Some(&[0, 0])).unwrap(), Trivialization::Trivialized { .. }));
    assert_eq!(
        trivialize_affine(&c, Some(&[1, 0])).unwrap(),
        Trivialization::Obstructed { ray: 0, pairing: 1 }
    );
}

#[test]
fn splitting_rejects_non_monomial_transitions() {
    let p1 = FanAtlas::new(corpus::p1()).unwrap();
    let l = LineCocycle::<Tropical>::trivial(p1);
    let mut c = RankNCocycle::direct_sum(&[l.clone(), l.clone(), l]).unwrap();
    let mut m = c.transition(1, 2).unwrap().clone();
    m.set(0, 1, MonoidPoly::monomial(t(0), vec![0]));
    c.set_transition(1, 2, m);
    assert!(matches!(split_cocycle(&c, None), Err(KlyachkoError::NotInvertibleTransition { from: 1, to: 2, .. })));
}

#[test]
fn spaces() {
    let p2 = FanAtlas::new(corpus::p2()).unwrap();
    let zero = DeltaKlyachkoSpace::new(p2.clone(), 3, vec![vec![0; 3]; 3]).unwrap();
    assert!(space_to_tuple(&zero).unwrap().iter().all(KlyachkoFamily::is_trivial));
    let tuple: Vec<KlyachkoFamily> = [[1, 0, -2], [0, 3, 1], [2, 2, 2]]
        .iter()
        .map(|v| KlyachkoFamily::from_ray_values(p2.clone(), v).unwrap())
        .collect();
    let s = tuple_to_space(&tuple).unwrap();
    assert_eq!(space_to_tuple(&s).unwrap(), tuple);
    assert!(space_to_matroid_bundle(&s).is_valid());
}

#[test]
fn picard_groups() {
    let p2 = FanAtlas::new(corpus::p2()).unwrap();
    assert_eq!(equivariant_picard(&p2).rank(), 3);
    assert_eq!(equivariant_picard(&FanAtlas::new(corpus::p1()).unwrap()).rank(), 2);
    assert_eq!(equivariant_picard(&FanAtlas::new(corpus::affine_plane()).unwrap()).rank(), 2);
    let r = picard(&p2).unwrap();
    let v = serde_json::to_value(&r).unwrap();
    assert_eq!(v["pic"]["free_rank"], 1);
    assert_eq!(v["pic"]["torsion"], serde_json::json!([]));
    assert_eq!(v["pic_g"]["free_rank"], 3);
    assert!(psi_kernel(&corpus::p2()).basis.is_empty());
    assert_eq!(psi_kernel(&corpus::single_ray()).basis, vec![vec![0, 1]]);
}

#[test]
fn error_envelope() {
    let e = Error::from(KlyachkoError::NoSolution { cone: 3, index: 0 });
    let j = e.to_json();
    assert_eq!(j["code"], "NoSolution");
    assert_eq!(j["witness"], serde_json::json!({"cone": 3, "index": 0}));
    let e = Error::from(LinearError::NotInvertible(InvertibilityWitness::ZeroColumn { col: 1 }));
    assert_eq!(e.to_json()["witness"], serde_json::json!({"kind": "zero_column", "col": 1}));
}
