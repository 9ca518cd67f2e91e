//! Exact arithmetic for the closed-world semirings 𝔹, 𝕋 and ℕ.
//!
//! 𝕋 is the max-plus semifield `ℚ ∪ {−∞}`: addition is `max`, multiplication
//! is ordinary addition, `−∞` is the additive identity and `0` the
//! multiplicative one. Values are exact rationals, never floats.

use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::toric::Cone;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemiringError {
    #[error("semirings expose no subtraction or division")]
    DivisionRequested,
    #[error("scalar {found} does not belong to {expected:?}")]
    WrongSemiring { expected: SemiringTag, found: String },
    #[error("{0:?} is not a semifield")]
    NotSemifield(SemiringTag),
    #[error("{0} is not a unit")]
    NotAUnit(String),
    #[error("exponent of length {len} does not split as {left} + {right}")]
    BadSplit { len: usize, left: usize, right: usize },
    #[error("cannot parse scalar {0:?}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SemiringTag {
    Boolean,
    #[serde(rename = "tropical")]
    TropicalRational,
    Naturals,
}

/// Structural flags of a semiring. These are table-driven facts about the
/// closed-world semirings, not runtime proofs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SemiringFlags {
    pub idempotent: bool,
    pub zero_sum_free: bool,
    pub semifield: bool,
    /// `Spec` is connected, i.e. every idempotent pair is trivial.
    pub trivial_idempotent_pairs: bool,
}

impl SemiringTag {
    pub const fn flags(self) -> SemiringFlags {
        match self {
            SemiringTag::Boolean | SemiringTag::TropicalRational => SemiringFlags {
                idempotent: true,
                zero_sum_free: true,
                semifield: true,
                trivial_idempotent_pairs: true,
            },
            SemiringTag::Naturals => SemiringFlags {
                idempotent: false,
                zero_sum_free: true,
                semifield: false,
                trivial_idempotent_pairs: true,
            },
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SemiringTag::Boolean => "boolean",
            SemiringTag::TropicalRational => "tropical",
            SemiringTag::Naturals => "naturals",
        }
    }
}

impl FromStr for SemiringTag {
    type Err = SemiringError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "b" | "bool" | "boolean" => Ok(SemiringTag::Boolean),
            "t" | "trop" | "tropical" => Ok(SemiringTag::TropicalRational),
            "n" | "nat" | "naturals" => Ok(SemiringTag::Naturals),
            _ => Err(SemiringError::Parse(s.to_string())),
        }
    }
}

/// A commutative semiring with `1 ≠ 0`.
pub trait Semiring: Clone + PartialEq + Eq + fmt::Debug + fmt::Display {
    const FLAGS: SemiringFlags;

    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;

    fn is_zero(&self) -> bool {
        *self == Self::zero()
    }

    /// Multiplicative inverse when `self` is a unit.
    fn unit_inverse(&self) -> Option<Self>;

    fn is_unit(&self) -> bool {
        self.unit_inverse().is_some()
    }

    fn sum<'a, I: IntoIterator<Item = &'a Self>>(items: I) -> Self
    where
        Self: 'a,
    {
        items.into_iter().fold(Self::zero(), |acc, x| acc.add(x))
    }
}

/// A semiring in which every nonzero element is a unit.
pub trait Semifield: Semiring {
    const TAG: SemiringTag;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Boolean(pub bool);

impl Semiring for Boolean {
    const FLAGS: SemiringFlags = SemiringTag::Boolean.flags();

    fn zero() -> Self {
        Boolean(false)
    }
    fn one() -> Self {
        Boolean(true)
    }
    fn add(&self, rhs: &Self) -> Self {
        Boolean(self.0 || rhs.0)
    }
    fn mul(&self, rhs: &Self) -> Self {
        Boolean(self.0 && rhs.0)
    }
    fn unit_inverse(&self) -> Option<Self> {
        self.0.then_some(*self)
    }
}

impl Semifield for Boolean {
    const TAG: SemiringTag = SemiringTag::Boolean;
}

impl fmt::Display for Boolean {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", u8::from(self.0))
    }
}

impl FromStr for Boolean {
    type Err = SemiringError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "0" => Ok(Boolean(false)),
            "1" => Ok(Boolean(true)),
            _ => Err(SemiringError::Parse(s.to_string())),
        }
    }
}

impl Serialize for Boolean {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u8(u8::from(self.0))
    }
}

impl<'de> Deserialize<'de> for Boolean {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match u8::deserialize(d)? {
            0 => Ok(Boolean(false)),
            1 => Ok(Boolean(true)),
            other => Err(serde::de::Error::custom(format!("boolean scalar must be 0 or 1, got {other}"))),
        }
    }
}

/// Element of the tropical semifield 𝕋.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tropical {
    NegInfinity,
    Finite(Rational64),
}

impl Tropical {
    pub fn int(v: i64) -> Self {
        Tropical::Finite(Rational64::from_integer(v))
    }

    pub fn ratio(p: i64, q: i64) -> Self {
        Tropical::Finite(Rational64::new(p, q))
    }

    pub fn value(&self) -> Option<Rational64> {
        match self {
            Tropical::NegInfinity => None,
            Tropical::Finite(r) => Some(*r),
        }
    }
}

impl Semiring for Tropical {
    const FLAGS: SemiringFlags = SemiringTag::TropicalRational.flags();

    fn zero() -> Self {
        Tropical::NegInfinity
    }
    fn one() -> Self {
        Tropical::Finite(Rational64::zero())
    }
    fn add(&self, rhs: &Self) -> Self {
        (*self).max(*rhs)
    }
    fn mul(&self, rhs: &Self) -> Self {
        match (self, rhs) {
            (Tropical::Finite(a), Tropical::Finite(b)) => Tropical::Finite(a + b),
            _ => Tropical::NegInfinity,
        }
    }
    fn unit_inverse(&self) -> Option<Self> {
        match self {
            Tropical::NegInfinity => None,
            Tropical::Finite(a) => Some(Tropical::Finite(-a)),
        }
    }
}

impl Semifield for Tropical {
    const TAG: SemiringTag = SemiringTag::TropicalRational;
}

impl fmt::Display for Tropical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tropical::NegInfinity => write!(f, "-inf"),
            Tropical::Finite(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl FromStr for Tropical {
    type Err = SemiringError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t == "-inf" || t == "-∞" {
            return Ok(Tropical::NegInfinity);
        }
        let bad = || SemiringError::Parse(s.to_string());
        let r = match t.split_once('/') {
            Some((p, q)) => {
                let p: i64 = p.trim().parse().map_err(|_| bad())?;
                let q: i64 = q.trim().parse().map_err(|_| bad())?;
                if q == 0 {
                    return Err(bad());
                }
                Rational64::new(p, q)
            }
            None => Rational64::from_integer(t.parse().map_err(|_| bad())?),
        };
        Ok(Tropical::Finite(r))
    }
}

#[derive(Serialize, Deserialize)]
struct TropicalRepr {
    t: String,
}

impl Serialize for Tropical {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        TropicalRepr { t: self.to_string() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Tropical {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = TropicalRepr::deserialize(d)?;
        repr.t.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Natural(pub u64);

impl Semiring for Natural {
    const FLAGS: SemiringFlags = SemiringTag::Naturals.flags();

    fn zero() -> Self {
        Natural(0)
    }
    fn one() -> Self {
        Natural(1)
    }
    fn add(&self, rhs: &Self) -> Self {
        Natural(self.0 + rhs.0)
    }
    fn mul(&self, rhs: &Self) -> Self {
        Natural(self.0 * rhs.0)
    }
    fn unit_inverse(&self) -> Option<Self> {
        (self.0 == 1).then_some(*self)
    }
}

impl fmt::Display for Natural {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A scalar of any closed-world semiring, tagged at runtime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Tropical(Tropical),
    Boolean(Boolean),
    Natural(Natural),
}

impl Scalar {
    pub fn tag(&self) -> SemiringTag {
        match self {
            Scalar::Boolean(_) => SemiringTag::Boolean,
            Scalar::Tropical(_) => SemiringTag::TropicalRational,
            Scalar::Natural(_) => SemiringTag::Naturals,
        }
    }

    pub fn zero(tag: SemiringTag) -> Self {
        match tag {
            SemiringTag::Boolean => Scalar::Boolean(Boolean::zero()),
            SemiringTag::TropicalRational => Scalar::Tropical(Tropical::zero()),
            SemiringTag::Naturals => Scalar::Natural(Natural::zero()),
        }
    }

    pub fn one(tag: SemiringTag) -> Self {
        match tag {
            SemiringTag::Boolean => Scalar::Boolean(Boolean::one()),
            SemiringTag::TropicalRational => Scalar::Tropical(Tropical::one()),
            SemiringTag::Naturals => Scalar::Natural(Natural::one()),
        }
    }

    fn binary(&self, rhs: &Self, add: bool) -> Result<Self, SemiringError> {
        use Scalar::*;
        Ok(match (self, rhs) {
            (Boolean(a), Boolean(b)) => Boolean(if add { a.add(b) } else { a.mul(b) }),
            (Tropical(a), Tropical(b)) => Tropical(if add { a.add(b) } else { a.mul(b) }),
            (Natural(a), Natural(b)) => Natural(if add { a.add(b) } else { a.mul(b) }),
            _ => {
                return Err(SemiringError::WrongSemiring {
                    expected: self.tag(),
                    found: rhs.to_string(),
                })
            }
        })
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, SemiringError> {
        self.binary(rhs, true)
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self, SemiringError> {
        self.binary(rhs, false)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Boolean(b) => b.fmt(f),
            Scalar::Tropical(t) => t.fmt(f),
            Scalar::Natural(n) => n.fmt(f),
        }
    }
}

/// Arithmetic expression over semiring scalars.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(Scalar),
    Zero,
    One,
    Add(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn add(a: Expr, b: Expr) -> Expr {
        Expr::Add(Box::new(a), Box::new(b))
    }
    pub fn mul(a: Expr, b: Expr) -> Expr {
        Expr::Mul(Box::new(a), Box::new(b))
    }
}

pub fn semiring_eval(tag: SemiringTag, expr: &Expr) -> Result<Scalar, SemiringError> {
    match expr {
        Expr::Const(s) if s.tag() == tag => Ok(*s),
        Expr::Const(s) => Err(SemiringError::WrongSemiring {
            expected: tag,
            found: s.to_string(),
        }),
        Expr::Zero => Ok(Scalar::zero(tag)),
        Expr::One => Ok(Scalar::one(tag)),
        Expr::Add(a, b) => semiring_eval(tag, a)?.add(&semiring_eval(tag, b)?),
        Expr::Mul(a, b) => semiring_eval(tag, a)?.mul(&semiring_eval(tag, b)?),
        Expr::Sub(..) | Expr::Div(..) => Err(SemiringError::DivisionRequested),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PairKind {
    NotPair,
    TrivialPair,
    NontrivialPair,
}

/// Classifies `(e, f)` against `e + f = 1`, `e·f = 0`.
pub fn is_idempotent_pair<S: Semiring>(e: &S, f: &S) -> PairKind {
    if e.add(f) != S::one() || !e.mul(f).is_zero() {
        return PairKind::NotPair;
    }
    let trivial = (e.is_zero() && *f == S::one()) || (f.is_zero() && *e == S::one());
    if trivial {
        PairKind::TrivialPair
    } else {
        PairKind::NontrivialPair
    }
}

/// A unit `c·χ^m` of a monoid algebra `K[M]`: a nonzero scalar times a
/// monomial whose exponent is invertible in `M`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MonoidAlgebraUnit<S> {
    pub scalar: S,
    pub exponent: Vec<i64>,
}

impl<S: Semiring> MonoidAlgebraUnit<S> {
    pub fn new(scalar: S, exponent: Vec<i64>) -> Result<Self, SemiringError> {
        if !scalar.is_unit() {
            return Err(SemiringError::NotAUnit(scalar.to_string()));
        }
        Ok(MonoidAlgebraUnit { scalar, exponent })
    }

    pub fn monomial(exponent: Vec<i64>) -> Self {
        MonoidAlgebraUnit {
            scalar: S::one(),
            exponent,
        }
    }

    pub fn identity(rank: usize) -> Self {
        Self::monomial(vec![0; rank])
    }

    pub fn is_identity(&self) -> bool {
        self.scalar == S::one() && self.exponent.iter().all(|&x| x == 0)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        MonoidAlgebraUnit {
            scalar: self.scalar.mul(&rhs.scalar),
            exponent: self.exponent.iter().zip(&rhs.exponent).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        MonoidAlgebraUnit {
            scalar: self.scalar.unit_inverse().expect("unit scalar"),
            exponent: self.exponent.iter().map(|x| -x).collect(),
        }
    }
}

/// Splits a unit over `M₁ ⊗ M₂ = Λ₁ ⊕ Λ₂` (coordinates `[..left]` and
/// `[left..]`) into its two factors. The scalar is placed in the first
/// factor; the second has scalar 1.
pub fn factor_unit<S: Semiring>(
    u: &MonoidAlgebraUnit<S>,
    left: usize,
    right: usize,
) -> Result<(MonoidAlgebraUnit<S>, MonoidAlgebraUnit<S>), SemiringError> {
    if u.exponent.len() != left + right {
        return Err(SemiringError::BadSplit {
            len: u.exponent.len(),
            left,
            right,
        });
    }
    let (a, b) = u.exponent.split_at(left);
    Ok((
        MonoidAlgebraUnit {
            scalar: u.scalar.clone(),
            exponent: a.to_vec(),
        },
        MonoidAlgebraUnit::monomial(b.to_vec()),
    ))
}

/// Inverse of [`factor_unit`]: the unit `α ⊗ β` over the product.
pub fn join_units<S: Semiring>(a: &MonoidAlgebraUnit<S>, b: &MonoidAlgebraUnit<S>) -> MonoidAlgebraUnit<S> {
    MonoidAlgebraUnit {
        scalar: a.scalar.mul(&b.scalar),
        exponent: a.exponent.iter().chain(&b.exponent).copied().collect(),
    }
}

/// The unit group `K^× × (Λ ∩ σ^⊥)` of `K[σ^∨ ∩ Λ]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnitGroup {
    pub scalars: SemiringTag,
    pub exponent_basis: Vec<Vec<i64>>,
}

impl UnitGroup {
    pub fn contains<S: Semiring>(&self, u: &MonoidAlgebraUnit<S>) -> bool {
        let lattice = crate::lattice::Sublattice::new(u.exponent.len(), self.exponent_basis.clone());
        u.scalar.is_unit() && lattice.contains(&u.exponent)
    }
}

pub fn monoid_algebra_units(tag: SemiringTag, cone: &Cone) -> Result<UnitGroup, SemiringError> {
    if !tag.flags().semifield {
        return Err(SemiringError::NotSemifield(tag));
    }
    Ok(UnitGroup {
        scalars: tag,
        exponent_basis: cone.perp_lattice(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t(v: i64) -> Scalar {
        Scalar::Tropical(Tropical::int(v))
    }

    #[test]
    fn eval_examples() {
        let tt = SemiringTag::TropicalRational;
        let c = |v| Expr::Const(t(v));
        assert_eq!(semiring_eval(tt, &Expr::add(c(3), c(5))).unwrap(), t(5));
        assert_eq!(semiring_eval(tt, &Expr::mul(c(3), c(5))).unwrap(), t(8));
        let b1 = Expr::Const(Scalar::Boolean(Boolean(true)));
        assert_eq!(
            semiring_eval(SemiringTag::Boolean, &Expr::add(b1.clone(), b1)).unwrap(),
            Scalar::Boolean(Boolean(true))
        );
        assert_eq!(
            semiring_eval(tt, &Expr::Div(Box::new(c(1)), Box::new(c(2)))),
            Err(SemiringError::DivisionRequested)
        );
        assert!(matches!(
            semiring_eval(SemiringTag::Boolean, &c(1)),
            Err(SemiringError::WrongSemiring { .. })
        ));
        assert_eq!(semiring_eval(tt, &Expr::add(Expr::Zero, c(4))).unwrap(), t(4));
        assert_eq!(semiring_eval(tt, &Expr::mul(Expr::One, c(4))).unwrap(), t(4));
    }

    #[test]
    fn idempotent_pairs() {
        assert_eq!(is_idempotent_pair(&Boolean(true), &Boolean(false)), PairKind::TrivialPair);
        assert_eq!(is_idempotent_pair(&Boolean(true), &Boolean(true)), PairKind::NotPair);
        assert_eq!(is_idempotent_pair(&Tropical::zero(), &Tropical::one()), PairKind::TrivialPair);
        for e in [false, true] {
            for f in [false, true] {
                assert_ne!(is_idempotent_pair(&Boolean(e), &Boolean(f)), PairKind::NontrivialPair);
            }
        }
        assert_eq!(is_idempotent_pair(&Natural(1), &Natural(0)), PairKind::TrivialPair);
    }

    #[test]
    fn tropical_json() {
        let v: Tropical = serde_json::from_str(r#"{"t": "-inf"}"#).unwrap();
        assert_eq!(v, Tropical::NegInfinity);
        let v: Tropical = serde_json::from_str(r#"{"t": "6/4"}"#).unwrap();
        assert_eq!(v, Tropical::ratio(3, 2));
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"{"t":"3/2"}"#);
        let v: Tropical = serde_json::from_str(r#"{"t": "7"}"#).unwrap();
        assert_eq!(v, Tropical::int(7));
        assert!(serde_json::from_str::<Tropical>(r#"{"t": "1/0"}"#).is_err());
        let b: Boolean = serde_json::from_str("1").unwrap();
        assert_eq!(b, Boolean(true));
        assert!(serde_json::from_str::<Boolean>("2").is_err());
    }

    #[test]
    fn unit_groups_of_cones() {
        let tt = SemiringTag::TropicalRational;
        let quadrant = Cone::new(2, vec![vec![1, 0], vec![0, 1]]).unwrap();
        assert!(monoid_algebra_units(tt, &quadrant).unwrap().exponent_basis.is_empty());
        let ray = Cone::new(2, vec![vec![1, 0]]).unwrap();
        assert_eq!(monoid_algebra_units(tt, &ray).unwrap().exponent_basis, vec![vec![0, 1]]);
        let zero = Cone::zero(2);
        assert_eq!(
            monoid_algebra_units(tt, &zero).unwrap().exponent_basis,
            vec![vec![1, 0], vec![0, 1]]
        );
        assert_eq!(
            monoid_algebra_units(SemiringTag::Naturals, &zero),
            Err(SemiringError::NotSemifield(SemiringTag::Naturals))
        );
    }

    #[test]
    fn factor_examples() {
        let u = MonoidAlgebraUnit::new(Tropical::int(7), vec![2, 0, 0, 3]).unwrap();
        let (a, b) = factor_unit(&u, 2, 2).unwrap();
        assert_eq!(a, MonoidAlgebraUnit::new(Tropical::int(7), vec![2, 0]).unwrap());
        assert_eq!(b, MonoidAlgebraUnit::monomial(vec![0, 3]));
        let id = MonoidAlgebraUnit::<Tropical>::identity(4);
        let (a, b) = factor_unit(&id, 2, 2).unwrap();
        assert!(a.is_identity() && b.is_identity());
        assert!(matches!(factor_unit(&u, 1, 2), Err(SemiringError::BadSplit { .. })));
        assert!(MonoidAlgebraUnit::new(Tropical::NegInfinity, vec![0]).is_err());
    }

    fn tropical() -> impl Strategy<Value = Tropical> {
        prop_oneof![
            1 => Just(Tropical::NegInfinity),
            6 => (-20i64..20, 1i64..6).prop_map(|(p, q)| Tropical::ratio(p, q)),
        ]
    }

    proptest! {
        #[test]
        fn tropical_laws(a in tropical(), b in tropical(), c in tropical()) {
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert_eq!(a.add(&a), a);
            prop_assert_eq!(a.mul(&Tropical::zero()), Tropical::zero());
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&Tropical::one()), a);
        }

        #[test]
        fn tropical_pairs_are_never_nontrivial(e in tropical(), f in tropical()) {
            prop_assert_ne!(is_idempotent_pair(&e, &f), PairKind::NontrivialPair);
        }

        #[test]
        fn factor_round_trip(p in -9i64..9, q in 1i64..5, exp in prop::collection::vec(-9i64..9, 5), left in 0usize..=5) {
            let u = MonoidAlgebraUnit::new(Tropical::ratio(p, q), exp).unwrap();
            let (a, b) = factor_unit(&u, left, 5 - left).unwrap();
            prop_assert_eq!(join_units(&a, &b), u.clone());
            prop_assert_eq!(factor_unit(&join_units(&a, &b), a.exponent.len(), b.exponent.len()).unwrap(), (a, b));
        }
    }
}
