//! Exact coefficient fields: the rationals and the two-element field.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub trait Field: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Panics on zero.
    fn inv(&self) -> Self;

    fn div(&self, rhs: &Self) -> Self {
        self.mul(&rhs.inv())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    Q,
    F2,
}

/// Exact rational number. Values whose reduced numerator and denominator
/// fit in `i64` are stored inline; the rest fall back to big integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rational(Repr);

/// Always canonical: `Small` whenever the value fits, denominator > 0,
/// fraction reduced. Derived equality and hashing rely on this.
#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Small(i64, i64),
    Big(BigRational),
}

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_i128(num as i128, den as i128)
    }

    pub fn from_int(v: i64) -> Self {
        Self(Repr::Small(v, 1))
    }

    fn from_i128(num: i128, den: i128) -> Self {
        let g = num.gcd(&den);
        let (mut n, mut d) = (num / g, den / g);
        if d < 0 {
            n = -n;
            d = -d;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Self(Repr::Small(n, d)),
            _ => Self(Repr::Big(BigRational::new(BigInt::from(n), BigInt::from(d)))),
        }
    }

    fn from_big(v: BigRational) -> Self {
        match (v.numer().to_i64(), v.denom().to_i64()) {
            (Some(n), Some(d)) => Self(Repr::Small(n, d)),
            _ => Self(Repr::Big(v)),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(b) => b.clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, _) => BigInt::from(*n),
            Repr::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, d) => BigInt::from(*d),
            Repr::Big(b) => b.denom().clone(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_, d) => *d == 1,
            Repr::Big(b) => b.is_integer(),
        }
    }

    /// Integer value, if this is an integer that fits in `i64`.
    pub fn to_i64(&self) -> Option<i64> {
        match self.0 {
            Repr::Small(n, 1) => Some(n),
            _ => None,
        }
    }

    /// `(numerator, denominator)` as machine integers, if they fit.
    pub fn to_pair(&self) -> Option<(i64, i64)> {
        match self.0 {
            Repr::Small(n, d) => Some((n, d)),
            Repr::Big(_) => None,
        }
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            Field::neg(self)
        } else {
            self.clone()
        }
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small(n, _) => *n < 0,
            Repr::Big(b) => b.is_negative(),
        }
    }

    pub fn zero() -> Self {
        Self(Repr::Small(0, 1))
    }

    pub fn one() -> Self {
        Self(Repr::Small(1, 1))
    }

    /// Shortcut for two integers when the result fits.
    fn int_op(&self, rhs: &Self, op: fn(i64, i64) -> Option<i64>) -> Option<Self> {
        match (&self.0, &rhs.0) {
            (Repr::Small(a, 1), Repr::Small(c, 1)) => op(*a, *c).map(|v| Self(Repr::Small(v, 1))),
            _ => None,
        }
    }

    fn combine(
        &self,
        rhs: &Self,
        small: impl Fn(i128, i128, i128, i128) -> Option<(i128, i128)>,
        big: impl Fn(&BigRational, &BigRational) -> BigRational,
    ) -> Self {
        if let (Repr::Small(a, b), Repr::Small(c, d)) = (&self.0, &rhs.0) {
            if let Some((n, d)) = small(*a as i128, *b as i128, *c as i128, *d as i128) {
                return Self::from_i128(n, d);
            }
        }
        Self::from_big(big(&self.to_big(), &rhs.to_big()))
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128)),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Self::from_int(v)
    }
}

impl From<i32> for Rational {
    fn from(v: i32) -> Self {
        Self::from_int(v as i64)
    }
}

impl From<BigRational> for Rational {
    fn from(v: BigRational) -> Self {
        Self::from_big(v)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

macro_rules! rational_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Field::$method(&self, &rhs)
            }
        }
        impl<'a> $trait<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Field::$method(self, rhs)
            }
        }
    };
}

rational_binop!(Add, add);
rational_binop!(Sub, sub);
rational_binop!(Mul, mul);
rational_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Field::neg(&self)
    }
}

impl Field for Rational {
    fn zero() -> Self {
        Rational::zero()
    }
    fn one() -> Self {
        Rational::one()
    }
    fn from_i64(v: i64) -> Self {
        Rational::from_int(v)
    }
    fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }
    fn add(&self, rhs: &Self) -> Self {
        if let Some(v) = self.int_op(rhs, i64::checked_add) {
            return v;
        }
        self.combine(rhs, |a, b, c, d| Some((a.checked_mul(d)?.checked_add(c.checked_mul(b)?)?, b.checked_mul(d)?)), |x, y| x + y)
    }
    fn sub(&self, rhs: &Self) -> Self {
        if let Some(v) = self.int_op(rhs, i64::checked_sub) {
            return v;
        }
        self.combine(rhs, |a, b, c, d| Some((a.checked_mul(d)?.checked_sub(c.checked_mul(b)?)?, b.checked_mul(d)?)), |x, y| x - y)
    }
    fn mul(&self, rhs: &Self) -> Self {
        if let Some(v) = self.int_op(rhs, i64::checked_mul) {
            return v;
        }
        self.combine(rhs, |a, b, c, d| Some((a.checked_mul(c)?, b.checked_mul(d)?)), |x, y| x * y)
    }
    fn div(&self, rhs: &Self) -> Self {
        assert!(!Field::is_zero(rhs), "division by zero");
        match (&self.0, &rhs.0) {
            (Repr::Small(a, b), Repr::Small(1, 1)) => return Self(Repr::Small(*a, *b)),
            (Repr::Small(a, b), Repr::Small(-1, 1)) if *a != i64::MIN => return Self(Repr::Small(-a, *b)),
            _ => {}
        }
        self.combine(rhs, |a, b, c, d| Some((a.checked_mul(d)?, b.checked_mul(c)?)), |x, y| x / y)
    }
    fn neg(&self) -> Self {
        match &self.0 {
            Repr::Small(n, d) => match n.checked_neg() {
                Some(m) => Self(Repr::Small(m, *d)),
                None => Self::from_big(-self.to_big()),
            },
            Repr::Big(b) => Self::from_big(-b),
        }
    }
    fn inv(&self) -> Self {
        assert!(!Field::is_zero(self), "inverse of zero");
        Field::div(&Rational::one(), self)
    }
}

#[derive(Serialize, Deserialize)]
struct RationalRepr {
    den: BigIntRepr,
    num: BigIntRepr,
}

/// Integers serialize as JSON numbers when they fit in `i64`, else as strings.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum BigIntRepr {
    Small(i64),
    Big(String),
}

impl From<&BigInt> for BigIntRepr {
    fn from(v: &BigInt) -> Self {
        match v.to_i64() {
            Some(x) => Self::Small(x),
            None => Self::Big(v.to_string()),
        }
    }
}

impl BigIntRepr {
    fn to_bigint(&self) -> Option<BigInt> {
        match self {
            Self::Small(x) => Some(BigInt::from(*x)),
            Self::Big(s) => s.parse().ok(),
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RationalRepr {
            den: (&self.denom()).into(),
            num: (&self.numer()).into(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = RationalRepr::deserialize(d)?;
        let num = repr.num.to_bigint().ok_or_else(|| D::Error::custom("bad numerator"))?;
        let den = repr.den.to_bigint().ok_or_else(|| D::Error::custom("bad denominator"))?;
        if den.is_zero() {
            return Err(D::Error::custom("zero denominator"));
        }
        Ok(Rational::from_big(BigRational::new(num, den)))
    }
}

/// The field with two elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct F2(pub bool);

impl Field for F2 {
    fn zero() -> Self {
        F2(false)
    }
    fn one() -> Self {
        F2(true)
    }
    fn from_i64(v: i64) -> Self {
        F2(v.rem_euclid(2) == 1)
    }
    fn is_zero(&self) -> bool {
        !self.0
    }
    fn add(&self, rhs: &Self) -> Self {
        F2(self.0 ^ rhs.0)
    }
    fn sub(&self, rhs: &Self) -> Self {
        F2(self.0 ^ rhs.0)
    }
    fn mul(&self, rhs: &Self) -> Self {
        F2(self.0 & rhs.0)
    }
    fn neg(&self) -> Self {
        *self
    }
    fn inv(&self) -> Self {
        assert!(self.0, "inverse of zero");
        *self
    }
}

/// Exact comparison of `a - t*b` against `c - t*d` for rational `t`.
pub fn cmp_affine(a: i64, b: i64, c: i64, d: i64, t: &Rational) -> Ordering {
    let lhs = Rational::from_int(a) - t * &Rational::from_int(b);
    let rhs = Rational::from_int(c) - t * &Rational::from_int(d);
    lhs.cmp(&rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_json_is_reduced() {
        let r = Rational::new(4, -6);
        assert_eq!(serde_json::to_string(&r).unwrap(), r#"{"den":3,"num":-2}"#);
        let back: Rational = serde_json::from_str(r#"{"num":-2,"den":3}"#).unwrap();
        assert_eq!(back, r);
        assert!(serde_json::from_str::<Rational>(r#"{"num":1,"den":0}"#).is_err());
    }

    #[test]
    fn f2_arithmetic() {
        assert_eq!(F2::from_i64(-1), F2::one());
        assert_eq!(F2::one().add(&F2::one()), F2::zero());
    }

    #[test]
    fn rational_field_ops() {
        let a = Rational::new(1, 2);
        let b = Rational::new(1, 3);
        assert_eq!(Field::add(&a, &b), Rational::new(5, 6));
        assert_eq!(Field::div(&a, &b), Rational::new(3, 2));
        assert_eq!(Field::inv(&Rational::from_int(-4)), Rational::new(-1, 4));
        assert_eq!(Rational::new(6, 3).to_i64(), Some(2));
        assert_eq!(Rational::new(7, 3).to_string(), "7/3");
    }

    #[test]
    fn big_fallback() {
        let big = Rational::from_int(i64::MAX);
        let sum = Field::add(&big, &big);
        assert!(sum.to_pair().is_none());
        assert_eq!(Field::sub(&sum, &big), big);
        assert_eq!(Field::neg(&Rational::from_int(i64::MIN)).to_string(), "9223372036854775808");
        assert!(sum > big);
        let back: Rational = serde_json::from_str(&serde_json::to_string(&sum).unwrap()).unwrap();
        assert_eq!(back, sum);
    }

    #[test]
    fn affine_compare() {
        let t = Rational::new(1, 2);
        assert_eq!(cmp_affine(1, 0, 3, 4, &t), Ordering::Equal);
        assert_eq!(cmp_affine(1, 1, 3, 4, &t), Ordering::Less);
    }
}
