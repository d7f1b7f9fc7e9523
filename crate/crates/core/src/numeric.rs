//! Exact scalars, polynomials and eventually-polynomial sequences.
//!
//! Everything here is exact: [`Rational`] is an arbitrary-precision reduced
//! fraction and no operation in the crate ever rounds.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Reduced fraction with positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Rational(BigRational::new(numer.into(), denom.into()))
    }

    pub fn from_integer(n: i64) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn from_big(n: BigInt) -> Self {
        Rational(BigRational::from_integer(n))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Rational(self.0.recip()))
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        Rational(num_traits::pow(self.0.clone(), exp as usize))
    }

    /// Smallest integer `>= self`.
    pub fn ceil(&self) -> BigInt {
        self.numer().div_ceil(self.denom())
    }

    /// Lossy conversion, only used for display purposes.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
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

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("invalid rational {s:?}"));
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        Ok(Rational(BigRational::new(n, d)))
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($Trait:ident, $method:ident) => {
        impl $Trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $Trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $Trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl $Trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl std::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> std::iter::Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl std::iter::Product for Rational {
    fn product<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::one(), |acc, x| acc * x)
    }
}

/// Binomial coefficient `C(n, k)` as an exact integer.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for t in 0..k {
        acc = acc * BigInt::from(n - t) / BigInt::from(t + 1);
    }
    acc
}

/// `Σ_{p=0}^{m} (-1)^p C(m, p) values[p]` where `m = values.len() - 1`.
pub fn alt_binomial_sum(values: &[Rational]) -> Result<Rational> {
    if values.is_empty() {
        return Err(Error::Domain("alternating binomial sum of an empty list".into()));
    }
    let m = values.len() - 1;
    let mut acc = Rational::zero();
    for (p, v) in values.iter().enumerate() {
        let term = Rational::from_big(binomial(m, p)) * v;
        if p % 2 == 0 {
            acc = acc + term;
        } else {
            acc = acc - term;
        }
    }
    Ok(acc)
}

/// Polynomial degree; the zero polynomial sits below every finite degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(usize),
}

impl Degree {
    /// `self <= bound`, where `bound = -1` means "identically zero".
    pub fn at_most(self, bound: i64) -> bool {
        match self {
            Degree::NegInfinity => true,
            Degree::Finite(d) => bound >= 0 && d as i64 <= bound,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => f.write_str("-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// Polynomial with rational coefficients, lowest degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Rational::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Polynomial::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn identity() -> Self {
        Polynomial::new(vec![Rational::zero(), Rational::one()])
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Polynomial::new(coeffs.iter().map(|&c| Rational::from_integer(c)).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::NegInfinity,
            n => Degree::Finite(n - 1),
        }
    }

    pub fn leading_coefficient(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_at(&self, x: i64) -> Rational {
        self.eval(&Rational::from_integer(x))
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        Polynomial::new(self.coeffs.iter().map(|c| c * factor).collect())
    }

    /// `p(x + d)`, by Horner's scheme on polynomials.
    pub fn shifted(&self, d: i64) -> Self {
        let step = Polynomial::new(vec![Rational::from_integer(d), Rational::one()]);
        let mut acc = Polynomial::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&step).add(&Polynomial::constant(c.clone()));
        }
        acc
    }

    pub fn add(&self, other: &Polynomial) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Rational::zero();
        Polynomial::new(
            (0..n)
                .map(|t| self.coeffs.get(t).unwrap_or(&zero) + other.coeffs.get(t).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Polynomial) -> Self {
        self.add(&other.scale(&Rational::from_integer(-1)))
    }

    pub fn mul(&self, other: &Polynomial) -> Self {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (a, ca) in self.coeffs.iter().enumerate() {
            for (b, cb) in other.coeffs.iter().enumerate() {
                out[a + b] = &out[a + b] + ca * cb;
            }
        }
        Polynomial::new(out)
    }

    /// Forward difference `p(x + 1) - p(x)`.
    pub fn forward_difference(&self) -> Self {
        self.shifted(1).sub(self)
    }

    /// Cauchy bound `1 + max |a_i / a_n|`: every complex root has modulus strictly below it.
    /// `None` for the zero polynomial.
    pub fn cauchy_bound(&self) -> Option<Rational> {
        let lead = self.leading_coefficient()?;
        let max = self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(|c| (c / lead).abs())
            .max()
            .unwrap_or_else(Rational::zero);
        Some(Rational::one() + max)
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial{:?}", self.coeffs)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (t, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match t {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})j")?,
                _ => write!(f, "({c})j^{t}")?,
            }
        }
        Ok(())
    }
}

/// A sequence indexed from 1: explicit values for `1..=prefix.len()`, then a polynomial rule.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EventuallyPolynomialSeq {
    prefix: Vec<Rational>,
    tail: Polynomial,
}

impl EventuallyPolynomialSeq {
    pub fn new(prefix: Vec<Rational>, tail: Polynomial) -> Self {
        EventuallyPolynomialSeq { prefix, tail }
    }

    pub fn polynomial(tail: Polynomial) -> Self {
        Self::new(Vec::new(), tail)
    }

    pub fn constant(c: Rational) -> Self {
        Self::polynomial(Polynomial::constant(c))
    }

    pub fn prefix(&self) -> &[Rational] {
        &self.prefix
    }

    pub fn tail(&self) -> &Polynomial {
        &self.tail
    }

    /// Number of explicit prefix values (`J0`).
    pub fn prefix_len(&self) -> usize {
        self.prefix.len()
    }

    pub fn at(&self, j: usize) -> Result<Rational> {
        if j < 1 {
            return Err(Error::Domain("sequence index must be >= 1".into()));
        }
        Ok(match self.prefix.get(j - 1) {
            Some(v) => v.clone(),
            None => self.tail.eval_at(j as i64),
        })
    }

    /// `j ↦ self(j + d)`.
    pub fn shift(&self, d: usize) -> Self {
        let prefix = self.prefix.iter().skip(d).cloned().collect();
        Self::new(prefix, self.tail.shifted(d as i64))
    }

    /// `j ↦ self(j + 1) - self(j)`.
    pub fn delta(&self) -> Self {
        let n = self.prefix.len();
        let prefix = (1..=n)
            .map(|j| self.value(j + 1) - self.value(j))
            .collect();
        Self::new(prefix, self.tail.forward_difference())
    }

    /// Pointwise product with another eventually-polynomial sequence.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.prefix.len().max(other.prefix.len());
        let prefix = (1..=n).map(|j| self.value(j) * other.value(j)).collect();
        Self::new(prefix, self.tail.mul(&other.tail))
    }

    /// Like [`at`](Self::at) for an index already known to be `>= 1`.
    fn value(&self, j: usize) -> Rational {
        self.at(j).expect("index >= 1")
    }

    /// `Some(deg tail)` when the whole sequence agrees with its tail polynomial, else `None`.
    pub fn polynomial_degree(&self) -> Option<Degree> {
        let consistent = self
            .prefix
            .iter()
            .enumerate()
            .all(|(t, v)| *v == self.tail.eval_at(t as i64 + 1));
        consistent.then(|| self.tail.degree())
    }

    /// True iff the whole sequence equals a single polynomial of degree `<= d` (`d = -1`: zero).
    pub fn is_polynomial_of_degree_at_most(&self, d: i64) -> bool {
        self.polynomial_degree().is_some_and(|deg| deg.at_most(d))
    }

    /// True iff every term is zero.
    pub fn is_zero_sequence(&self) -> bool {
        self.is_polynomial_of_degree_at_most(-1)
    }

    /// Pointwise equality as functions on `j >= 1`.
    pub fn same_values(&self, other: &Self) -> bool {
        let n = self.prefix.len().max(other.prefix.len());
        self.tail == other.tail && (1..=n).all(|j| self.value(j) == other.value(j))
    }
}
