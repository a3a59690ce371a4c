//! Exact base fields: prime fields `F_p` and the rationals.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The base field `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    /// `F_p`, elements stored as reduced residues `0..p`.
    Prime(u64),
    /// `Q` with arbitrary-precision numerators and denominators.
    Rationals,
}

/// A field element. Which variant is valid depends on the owning [`Field`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Residue(u64),
    Rational(BigRational),
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    /// `F_p`; fails unless `p` is prime. Moduli are capped at 2^31 so that
    /// products of residues fit comfortably in `u64` accumulators.
    pub fn prime(p: u64) -> Result<Field> {
        if p >= 1 << 31 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Field::Prime(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Prime(p) => *p,
            Field::Rationals => 0,
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            Field::Prime(_) => Scalar::Residue(0),
            Field::Rationals => Scalar::Rational(BigRational::zero()),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self {
            Field::Prime(p) => Scalar::Residue(v.rem_euclid(*p as i64) as u64),
            Field::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
        }
    }

    /// Binomial coefficient `C(n, k)` as a field element.
    pub fn binomial(&self, n: u64, k: u64) -> Scalar {
        if k > n {
            return self.zero();
        }
        let mut acc = BigInt::one();
        for i in 0..k {
            acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
        }
        match self {
            Field::Prime(p) => {
                let r = acc % BigInt::from(*p);
                Scalar::Residue(r.try_into().unwrap_or(0))
            }
            Field::Rationals => Scalar::Rational(BigRational::from_integer(acc)),
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Residue(v) => *v == 0,
            Scalar::Rational(q) => q.is_zero(),
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (Field::Prime(p), Scalar::Residue(x), Scalar::Residue(y)) => {
                Scalar::Residue((x + y) % p)
            }
            (Field::Rationals, Scalar::Rational(x), Scalar::Rational(y)) => {
                Scalar::Rational(x + y)
            }
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (Field::Prime(p), Scalar::Residue(x)) => Scalar::Residue((p - x) % p),
            (Field::Rationals, Scalar::Rational(x)) => Scalar::Rational(-x),
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (Field::Prime(p), Scalar::Residue(x), Scalar::Residue(y)) => {
                Scalar::Residue(x * y % p)
            }
            (Field::Rationals, Scalar::Rational(x), Scalar::Rational(y)) => {
                Scalar::Rational(x * y)
            }
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        if self.is_zero(a) {
            return None;
        }
        match (self, a) {
            (Field::Prime(p), Scalar::Residue(x)) => Some(Scalar::Residue(pow_mod(*x, p - 2, *p))),
            (Field::Rationals, Scalar::Rational(x)) => Some(Scalar::Rational(x.recip())),
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    /// A uniformly random residue over `F_p`; a small integer in `[-3, 3]` over `Q`.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Scalar {
        match self {
            Field::Prime(p) => Scalar::Residue(rng.random_range(0..*p)),
            Field::Rationals => self.from_i64(rng.random_range(-3..=3)),
        }
    }

    /// Parses a decimal residue (`F_p`) or `num/den` (`Q`).
    pub fn parse(&self, s: &str) -> Result<Scalar> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid {self} element {s:?}"));
        match self {
            Field::Prime(p) => {
                let v = BigInt::from_str(s).map_err(|_| bad())?;
                let r = ((v % BigInt::from(*p)) + BigInt::from(*p)) % BigInt::from(*p);
                Ok(Scalar::Residue(r.try_into().map_err(|_| bad())?))
            }
            Field::Rationals => {
                let q = match s.split_once('/') {
                    Some((n, d)) => {
                        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
                        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
                        if d.is_zero() {
                            return Err(bad());
                        }
                        BigRational::new(n, d)
                    }
                    None => BigRational::from_integer(BigInt::from_str(s).map_err(|_| bad())?),
                };
                Ok(Scalar::Rational(q))
            }
        }
    }

    /// Canonical text form: the residue for `F_p`, `num/den` (or `num` when
    /// the denominator is one) for `Q`.
    pub fn format(&self, a: &Scalar) -> String {
        match a {
            Scalar::Residue(v) => v.to_string(),
            Scalar::Rational(q) => {
                if q.denom().is_one() {
                    q.numer().to_string()
                } else {
                    format!("{}/{}", q.numer(), q.denom())
                }
            }
        }
    }

    pub(crate) fn residue(a: &Scalar) -> u64 {
        match a {
            Scalar::Residue(v) => *v,
            Scalar::Rational(_) => panic!("expected a residue"),
        }
    }

    pub(crate) fn rational(a: &Scalar) -> &BigRational {
        match a {
            Scalar::Rational(q) => q,
            Scalar::Residue(_) => panic!("expected a rational"),
        }
    }
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Prime(p) => write!(f, "F_{p}"),
            Field::Rationals => write!(f, "Q"),
        }
    }
}

/// JSON form: `{"p": 5}` or `{"rationals": true}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum FieldDoc {
    Prime { p: u64 },
    Rationals { rationals: bool },
}

impl FieldDoc {
    pub fn to_field(&self) -> Result<Field> {
        match self {
            FieldDoc::Prime { p } => Field::prime(*p),
            FieldDoc::Rationals { rationals: true } => Ok(Field::Rationals),
            FieldDoc::Rationals { rationals: false } => {
                Err(Error::Parse("\"rationals\" must be true".into()))
            }
        }
    }
}

impl From<Field> for FieldDoc {
    fn from(f: Field) -> Self {
        match f {
            Field::Prime(p) => FieldDoc::Prime { p },
            Field::Rationals => FieldDoc::Rationals { rationals: true },
        }
    }
}
