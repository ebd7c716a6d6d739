//! Exact scalars over a small prime field or the rationals.
//!
//! A [`Scalar`] carries enough of its field to do arithmetic on its own, so
//! the usual operators work directly. Mixing scalars of different fields is
//! a programming error and panics.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest prime accepted for `FieldSpec::Prime`.
pub const MAX_PRIME: u32 = 97;

/// The ground field: `F_p` for a small prime `p`, or `Q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawField", into = "RawField")]
pub enum FieldSpec {
    Prime { p: u32 },
    Rational,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum RawField {
    Prime { p: u32 },
    Rational,
}

impl TryFrom<RawField> for FieldSpec {
    type Error = Error;
    fn try_from(raw: RawField) -> Result<Self> {
        match raw {
            RawField::Prime { p } => FieldSpec::prime(p),
            RawField::Rational => Ok(FieldSpec::Rational),
        }
    }
}

impl From<FieldSpec> for RawField {
    fn from(f: FieldSpec) -> Self {
        match f {
            FieldSpec::Prime { p } => RawField::Prime { p },
            FieldSpec::Rational => RawField::Rational,
        }
    }
}

impl FieldSpec {
    /// `F_p`, rejecting composite numbers and primes above [`MAX_PRIME`].
    pub fn prime(p: u32) -> Result<Self> {
        if p < 2 || p > MAX_PRIME || !(2..p).take_while(|d| d * d <= p).all(|d| p % d != 0) {
            return Err(Error::UnsupportedField(format!(
                "{p} is not a prime in [2, {MAX_PRIME}]"
            )));
        }
        Ok(FieldSpec::Prime { p })
    }

    pub fn rational() -> Self {
        FieldSpec::Rational
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            FieldSpec::Prime { p } => *p,
            FieldSpec::Rational => 0,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match *self {
            FieldSpec::Prime { p } => Scalar::Mod {
                value: n.rem_euclid(p as i64) as u32,
                p,
            },
            FieldSpec::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
        }
    }

    pub fn from_ratio(&self, num: i64, den: i64) -> Result<Scalar> {
        let d = self.from_i64(den);
        let inv = d
            .inv()
            .ok_or_else(|| Error::InvalidParameter(format!("denominator {den} vanishes")))?;
        Ok(self.from_i64(num) * inv)
    }

    /// All elements of a prime field, in residue order.
    pub fn elements(&self) -> Option<Vec<Scalar>> {
        match *self {
            FieldSpec::Prime { p } => Some((0..p).map(|v| Scalar::Mod { value: v, p }).collect()),
            FieldSpec::Rational => None,
        }
    }

    /// Parses a decimal string (`"3"`, `"-2"`, `"1/2"`).
    pub fn parse(&self, text: &str) -> Result<Scalar> {
        let bad = || Error::Parse(format!("bad scalar {text:?}"));
        let (num, den) = match text.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (text.trim(), "1"),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        match *self {
            FieldSpec::Prime { p } => {
                let reduce = |b: &BigInt| -> u32 {
                    let m = BigInt::from(p);
                    let r = ((b % &m) + &m) % &m;
                    u32::try_from(r).unwrap_or(0)
                };
                let n = Scalar::Mod { value: reduce(&num), p };
                let d = Scalar::Mod { value: reduce(&den), p };
                Ok(n * d.inv().ok_or_else(bad)?)
            }
            FieldSpec::Rational => Ok(Scalar::Rational(BigRational::new(num, den))),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Prime { p } => write!(f, "F_{p}"),
            FieldSpec::Rational => write!(f, "Q"),
        }
    }
}

/// An exact field element in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    /// Residue `value` in `[0, p)`.
    Mod { value: u32, p: u32 },
    /// Always-reduced fraction.
    Rational(BigRational),
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Mod { p, .. } => FieldSpec::Prime { p: *p },
            Scalar::Rational(_) => FieldSpec::Rational,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Mod { value, .. } => *value == 0,
            Scalar::Rational(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Mod { value, .. } => *value == 1,
            Scalar::Rational(r) => r.is_one(),
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        match self {
            Scalar::Mod { value, p } => {
                let (mut base, mut exp, mut acc) = (*value as u64, *p as u64 - 2, 1u64);
                while exp > 0 {
                    if exp & 1 == 1 {
                        acc = acc * base % *p as u64;
                    }
                    base = base * base % *p as u64;
                    exp >>= 1;
                }
                Some(Scalar::Mod { value: acc as u32, p: *p })
            }
            Scalar::Rational(r) => Some(Scalar::Rational(r.recip())),
        }
    }

    pub fn pow(&self, exp: u32) -> Scalar {
        let mut acc = self.field().one();
        for _ in 0..exp {
            acc = acc * self;
        }
        acc
    }

    fn combine(&self, other: &Scalar, op: Op) -> Scalar {
        match (self, other) {
            (Scalar::Mod { value: a, p }, Scalar::Mod { value: b, p: q }) => {
                assert_eq!(p, q, "scalars from different fields");
                let (a, b, m) = (*a as u64, *b as u64, *p as u64);
                let value = match op {
                    Op::Add => (a + b) % m,
                    Op::Sub => (a + m - b) % m,
                    Op::Mul => a * b % m,
                };
                Scalar::Mod { value: value as u32, p: *p }
            }
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(match op {
                Op::Add => a + b,
                Op::Sub => a - b,
                Op::Mul => a * b,
            }),
            _ => panic!("scalars from different fields"),
        }
    }
}

#[derive(Clone, Copy)]
enum Op {
    Add,
    Sub,
    Mul,
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Mod { value, .. } => write!(f, "{value}"),
            Scalar::Rational(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Scalar::Rational(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl Scalar {
    /// Display form used inside formulas: residues above `p/2` print as
    /// negatives, so `-1` reads better than `4` in `F_5`.
    pub fn signed_string(&self) -> String {
        match self {
            Scalar::Mod { value, p } if *value > p / 2 => format!("-{}", p - value),
            Scalar::Rational(r) if r.is_negative() => self.to_string(),
            _ => self.to_string(),
        }
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $assign:ident, $assign_method:ident, $op:expr) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.combine(rhs, $op)
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.combine(&rhs, $op)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.combine(rhs, $op)
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.combine(&rhs, $op)
            }
        }
        impl $assign<&Scalar> for Scalar {
            fn $assign_method(&mut self, rhs: &Scalar) {
                *self = self.combine(rhs, $op);
            }
        }
        impl $assign<Scalar> for Scalar {
            fn $assign_method(&mut self, rhs: Scalar) {
                *self = self.combine(&rhs, $op);
            }
        }
    };
}

binop!(Add, add, AddAssign, add_assign, Op::Add);
binop!(Sub, sub, SubAssign, sub_assign, Op::Sub);
binop!(Mul, mul, MulAssign, mul_assign, Op::Mul);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.field().zero() - self
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

/// `i!` as a field element (zero in characteristic `p` once `i >= p`).
pub fn factorial(i: u32, field: FieldSpec) -> Scalar {
    (1..=i).fold(field.one(), |acc, k| acc * field.from_i64(k as i64))
}

/// The inverse of `i!`, as used in the Taylor-type coefficients `(I!)^{-1}`.
pub fn factorial_inverse(i: u32, field: FieldSpec) -> Result<Scalar> {
    let p = field.characteristic();
    if p > 0 && i >= p {
        return Err(Error::FactorialNotInvertible { value: i, p });
    }
    Ok(factorial(i, field).inv().expect("i! is a unit below the characteristic"))
}
