//! Exact scalar arithmetic over prime fields `GF(p)` and the rationals.
//!
//! Two layers live here. [`FieldSpec`] and [`FieldElement`] are the dynamic,
//! self-describing values used at API and serialization boundaries: every
//! element knows which field it belongs to and mixing fields is an error.
//! The [`Field`] trait is the typed layer the linear algebra is written
//! against; [`PrimeField`] stores residues as `u32` and [`Rationals`] stores
//! arbitrary-precision fractions.

use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not a prime; only prime fields GF(p) are supported")]
    NotPrime(u32),
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("field mismatch: {0} vs {1}")]
    Mismatch(FieldSpec, FieldSpec),
    #[error("cannot parse field spec {0:?} (expected gf<p> or rational)")]
    BadSpec(String),
    #[error("cannot parse {value:?} as an element of {field}")]
    BadElement { field: FieldSpec, value: String },
}

pub(crate) fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let p = p as u64;
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Which field a computation runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldSpec {
    /// `GF(p)`; the characteristic is checked prime at construction.
    Prime(u32),
    Rational,
}

impl FieldSpec {
    pub fn prime(p: u32) -> Result<Self, FieldError> {
        if is_prime(p) {
            Ok(FieldSpec::Prime(p))
        } else {
            Err(FieldError::NotPrime(p))
        }
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            FieldSpec::Prime(p) => *p,
            FieldSpec::Rational => 0,
        }
    }

    /// Finite fields admit exhaustive subspace enumeration; the rationals do not.
    pub fn is_finite(&self) -> bool {
        matches!(self, FieldSpec::Prime(_))
    }

    pub fn zero(&self) -> FieldElement {
        self.element(0)
    }

    pub fn one(&self) -> FieldElement {
        self.element(1)
    }

    pub fn element(&self, v: i64) -> FieldElement {
        match *self {
            FieldSpec::Prime(p) => FieldElement::Residue {
                modulus: p,
                value: v.rem_euclid(p as i64) as u32,
            },
            FieldSpec::Rational => FieldElement::Rational(BigRational::from_integer(v.into())),
        }
    }

    /// Parses the textual form produced by `FieldElement`'s `Display`.
    pub fn parse_element(&self, s: &str) -> Result<FieldElement, FieldError> {
        let bad = || FieldError::BadElement {
            field: *self,
            value: s.to_string(),
        };
        let s = s.trim();
        match *self {
            FieldSpec::Prime(p) => {
                let v: i64 = s.parse().map_err(|_| bad())?;
                Ok(FieldElement::Residue {
                    modulus: p,
                    value: v.rem_euclid(p as i64) as u32,
                })
            }
            FieldSpec::Rational => parse_rational(s).map(FieldElement::Rational).ok_or_else(bad),
        }
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

/// `n` for integers, `n/d` otherwise; denominators are always positive.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Prime(p) => write!(f, "gf{p}"),
            FieldSpec::Rational => f.write_str("rational"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().to_ascii_lowercase();
        if t == "rational" {
            return Ok(FieldSpec::Rational);
        }
        let p: u32 = t
            .strip_prefix("gf")
            .and_then(|d| d.parse().ok())
            .ok_or_else(|| FieldError::BadSpec(s.to_string()))?;
        FieldSpec::prime(p)
    }
}

impl Serialize for FieldSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A scalar tagged with its field. Canonical: residues lie in `[0, p)`,
/// fractions are reduced with positive denominator, so `==` is field equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldElement {
    Residue { modulus: u32, value: u32 },
    Rational(BigRational),
}

impl FieldElement {
    pub fn spec(&self) -> FieldSpec {
        match self {
            FieldElement::Residue { modulus, .. } => FieldSpec::Prime(*modulus),
            FieldElement::Rational(_) => FieldSpec::Rational,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElement::Residue { value, .. } => *value == 0,
            FieldElement::Rational(r) => r.is_zero(),
        }
    }

    fn check(&self, other: &Self) -> Result<(), FieldError> {
        if self.spec() == other.spec() {
            Ok(())
        } else {
            Err(FieldError::Mismatch(self.spec(), other.spec()))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(match (self, other) {
            (FieldElement::Residue { modulus, value: a }, FieldElement::Residue { value: b, .. }) => {
                FieldElement::Residue {
                    modulus: *modulus,
                    value: PrimeField::unchecked(*modulus).add(a, b),
                }
            }
            (FieldElement::Rational(a), FieldElement::Rational(b)) => FieldElement::Rational(a + b),
            _ => unreachable!(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(match (self, other) {
            (FieldElement::Residue { modulus, value: a }, FieldElement::Residue { value: b, .. }) => {
                FieldElement::Residue {
                    modulus: *modulus,
                    value: PrimeField::unchecked(*modulus).mul(a, b),
                }
            }
            (FieldElement::Rational(a), FieldElement::Rational(b)) => FieldElement::Rational(a * b),
            _ => unreachable!(),
        })
    }

    pub fn neg(&self) -> Self {
        match self {
            FieldElement::Residue { modulus, value } => FieldElement::Residue {
                modulus: *modulus,
                value: PrimeField::unchecked(*modulus).neg(value),
            },
            FieldElement::Rational(r) => FieldElement::Rational(-r),
        }
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        match self {
            FieldElement::Residue { modulus, value } => PrimeField::unchecked(*modulus)
                .inv(value)
                .map(|value| FieldElement::Residue {
                    modulus: *modulus,
                    value,
                })
                .ok_or(FieldError::ZeroInverse),
            FieldElement::Rational(r) if r.is_zero() => Err(FieldError::ZeroInverse),
            FieldElement::Rational(r) => Ok(FieldElement::Rational(r.recip())),
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElement::Residue { value, .. } => write!(f, "{value}"),
            FieldElement::Rational(r) => f.write_str(&format_rational(r)),
        }
    }
}

/// Typed field arithmetic. Implementors are cheap handles (a modulus, or
/// nothing) passed by reference into the linear algebra. The `from_*`
/// methods build elements, so they need the handle.
#[allow(clippy::wrong_self_convention)]
pub trait Field: Clone + fmt::Debug + PartialEq + Eq + Hash + Send + Sync {
    type Elem: Clone + fmt::Debug + PartialEq + Eq + Hash + Send + Sync;

    fn spec(&self) -> FieldSpec;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `None` exactly for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn from_i64(&self, v: i64) -> Self::Elem;

    fn to_element(&self, a: &Self::Elem) -> FieldElement;
    fn from_element(&self, e: &FieldElement) -> Result<Self::Elem, FieldError>;

    /// Residues serialize as JSON integers, fractions as `"n/d"` strings.
    fn to_json(&self, a: &Self::Elem) -> Value;
    fn from_json(&self, v: &Value) -> Result<Self::Elem, FieldError>;
}

/// `GF(p)` with residues in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self, FieldError> {
        if is_prime(p) {
            Ok(PrimeField { p })
        } else {
            Err(FieldError::NotPrime(p))
        }
    }

    pub(crate) fn unchecked(p: u32) -> Self {
        PrimeField { p }
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    /// Number of field elements.
    pub fn order(&self) -> u64 {
        self.p as u64
    }
}

impl Field for PrimeField {
    type Elem = u32;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Prime(self.p)
    }

    #[inline]
    fn zero(&self) -> u32 {
        0
    }

    #[inline]
    fn one(&self) -> u32 {
        1 % self.p
    }

    #[inline]
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }

    #[inline]
    fn add(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 + *b as u64) % self.p as u64) as u32
    }

    #[inline]
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 + self.p as u64 - *b as u64) % self.p as u64) as u32
    }

    #[inline]
    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 * *b as u64) % self.p as u64) as u32
    }

    fn inv(&self, a: &u32) -> Option<u32> {
        if (*a).is_multiple_of(self.p) {
            return None;
        }
        // extended Euclid on (a, p)
        let (mut r0, mut r1) = (self.p as i64, *a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        Some(t0.rem_euclid(self.p as i64) as u32)
    }

    fn from_i64(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    fn to_element(&self, a: &u32) -> FieldElement {
        FieldElement::Residue {
            modulus: self.p,
            value: *a,
        }
    }

    fn from_element(&self, e: &FieldElement) -> Result<u32, FieldError> {
        match e {
            FieldElement::Residue { modulus, value } if *modulus == self.p => Ok(*value),
            other => Err(FieldError::Mismatch(self.spec(), other.spec())),
        }
    }

    fn to_json(&self, a: &u32) -> Value {
        Value::from(*a)
    }

    fn from_json(&self, v: &Value) -> Result<u32, FieldError> {
        let bad = || FieldError::BadElement {
            field: self.spec(),
            value: v.to_string(),
        };
        match v {
            Value::Number(n) => n.as_i64().map(|x| self.from_i64(x)).ok_or_else(bad),
            Value::String(s) => self.from_element(&self.spec().parse_element(s)?),
            _ => Err(bad()),
        }
    }
}

/// The field of rational numbers with arbitrary-precision numerators and denominators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Rational
    }

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }

    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    fn to_element(&self, a: &BigRational) -> FieldElement {
        FieldElement::Rational(a.clone())
    }

    fn from_element(&self, e: &FieldElement) -> Result<BigRational, FieldError> {
        match e {
            FieldElement::Rational(r) => Ok(r.clone()),
            other => Err(FieldError::Mismatch(FieldSpec::Rational, other.spec())),
        }
    }

    fn to_json(&self, a: &BigRational) -> Value {
        Value::String(format_rational(a))
    }

    fn from_json(&self, v: &Value) -> Result<BigRational, FieldError> {
        let bad = || FieldError::BadElement {
            field: FieldSpec::Rational,
            value: v.to_string(),
        };
        match v {
            Value::Number(n) => n.as_i64().map(|x| self.from_i64(x)).ok_or_else(bad),
            Value::String(s) => parse_rational(s).ok_or_else(bad),
            _ => Err(bad()),
        }
    }
}

/// Converts an exact rational to the nearest `f64`, for display only.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) => n / d,
        _ => f64::NAN,
    }
}

/// Rational from a small fraction; `den` must be nonzero.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(num.into(), den.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn gf2_one_plus_one_is_zero() {
        let f = FieldSpec::prime(2).unwrap();
        assert!(f.one().add(&f.one()).unwrap().is_zero());
    }

    #[test]
    fn gf5_inverse_of_two() {
        let f = FieldSpec::prime(5).unwrap();
        let two = f.element(2);
        let inv = two.inv().unwrap();
        assert_eq!(inv, f.element(3));
        assert_eq!(two.mul(&inv).unwrap(), f.one());
    }

    #[test]
    fn rational_reciprocal() {
        let q = FieldSpec::Rational;
        let x = q.parse_element("2/3").unwrap();
        assert_eq!(x.inv().unwrap(), q.parse_element("3/2").unwrap());
    }

    #[test]
    fn zero_has_no_inverse() {
        assert_eq!(FieldSpec::Prime(7).zero().inv(), Err(FieldError::ZeroInverse));
        assert_eq!(FieldSpec::Rational.zero().inv(), Err(FieldError::ZeroInverse));
        assert_eq!(PrimeField::new(3).unwrap().inv(&0), None);
    }

    #[test]
    fn mixing_fields_is_rejected() {
        let a = FieldSpec::Prime(3).one();
        let b = FieldSpec::Prime(5).one();
        assert!(matches!(a.add(&b), Err(FieldError::Mismatch(_, _))));
        assert!(a.mul(&FieldSpec::Rational.one()).is_err());
    }

    #[test]
    fn composite_modulus_rejected() {
        assert_eq!(FieldSpec::prime(4), Err(FieldError::NotPrime(4)));
        assert!(PrimeField::new(1).is_err());
        assert!("gf6".parse::<FieldSpec>().is_err());
    }

    #[test]
    fn spec_strings() {
        for s in ["gf2", "gf3", "gf5", "gf7", "rational"] {
            let f: FieldSpec = s.parse().unwrap();
            assert_eq!(f.to_string(), s);
        }
        assert!("q".parse::<FieldSpec>().is_err());
        assert_eq!(serde_json::to_string(&FieldSpec::Prime(3)).unwrap(), "\"gf3\"");
    }

    #[test]
    fn rational_canonical_form() {
        let q = FieldSpec::Rational;
        assert_eq!(q.parse_element("2/4").unwrap(), q.parse_element("1/2").unwrap());
        assert_eq!(q.parse_element("3/-6").unwrap().to_string(), "-1/2");
        assert_eq!(q.parse_element("4/2").unwrap().to_string(), "2");
        assert!(q.parse_element("1/0").is_err());
    }

    fn arb_prime() -> impl Strategy<Value = u32> {
        prop::sample::select(vec![2u32, 3, 5, 7, 11, 13, 101, 65_521])
    }

    fn arb_rational() -> impl Strategy<Value = FieldElement> {
        (-1000i64..1000, 1i64..1000).prop_map(|(n, d)| FieldElement::Rational(ratio(n, d)))
    }

    fn arb_residues() -> impl Strategy<Value = (u32, u32, u32, u32)> {
        arb_prime().prop_flat_map(|p| (Just(p), 0..p, 0..p, 0..p))
    }

    proptest! {
        #[test]
        fn prime_field_axioms((p, a, b, c) in arb_residues()) {
            let f = FieldSpec::Prime(p);
            let (a, b, c) = (f.element(a as i64), f.element(b as i64), f.element(c as i64));
            prop_assert_eq!(a.add(&b)?, b.add(&a)?);
            prop_assert_eq!(a.mul(&b)?, b.mul(&a)?);
            prop_assert_eq!(a.add(&b)?.add(&c)?, a.add(&b.add(&c)?)?);
            prop_assert_eq!(a.mul(&b)?.mul(&c)?, a.mul(&b.mul(&c)?)?);
            prop_assert_eq!(a.mul(&b.add(&c)?)?, a.mul(&b)?.add(&a.mul(&c)?)?);
            prop_assert!(a.add(&a.neg())?.is_zero());
            if !a.is_zero() {
                prop_assert_eq!(a.mul(&a.inv()?)?, f.one());
            }
            prop_assert_eq!(f.parse_element(&a.to_string())?, a);
        }

        #[test]
        fn rational_field_axioms(a in arb_rational(), b in arb_rational(), c in arb_rational()) {
            let one = FieldSpec::Rational.one();
            prop_assert_eq!(a.add(&b)?, b.add(&a)?);
            prop_assert_eq!(a.mul(&b)?, b.mul(&a)?);
            prop_assert_eq!(a.add(&b)?.add(&c)?, a.add(&b.add(&c)?)?);
            prop_assert_eq!(a.mul(&b)?.mul(&c)?, a.mul(&b.mul(&c)?)?);
            prop_assert_eq!(a.mul(&b.add(&c)?)?, a.mul(&b)?.add(&a.mul(&c)?)?);
            if !a.is_zero() {
                prop_assert_eq!(a.mul(&a.inv()?)?, one);
            }
            prop_assert_eq!(FieldSpec::Rational.parse_element(&a.to_string())?, a);
        }

        #[test]
        fn typed_inverse_matches_brute_force((p, a, _, _) in arb_residues()) {
            let f = PrimeField::new(p).unwrap();
            if a != 0 && p < 1000 {
                let brute = (1..p).find(|x| (a as u64 * *x as u64) % p as u64 == 1);
                prop_assert_eq!(f.inv(&a), brute);
            }
        }
    }
}
