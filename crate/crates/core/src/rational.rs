//! Arbitrary-precision rationals kept in lowest terms.

use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

/// A reduced fraction with positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactRational(BigRational);

impl ExactRational {
    pub fn new(numerator: impl Into<BigInt>, denominator: impl Into<BigInt>) -> Self {
        ExactRational(BigRational::new(numerator.into(), denominator.into()))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        ExactRational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        ExactRational(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactRational(BigRational::one())
    }

    pub fn numerator(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denominator(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn as_big_rational(&self) -> &BigRational {
        &self.0
    }

    /// Nearest-ish `f64`; accurate to a couple of ulps even when numerator
    /// and denominator are far outside the `f64` range.
    pub fn to_f64(&self) -> f64 {
        ratio_to_f64(self.0.numer(), self.0.denom())
    }

    /// Fixed-point decimal with `digits` places after the point (truncated).
    pub fn to_decimal(&self, digits: usize) -> String {
        let scale = num_traits::pow(BigInt::from(10u32), digits);
        let neg = self.0.is_negative();
        let scaled = (self.0.numer().abs() * &scale) / self.0.denom();
        let int_part = &scaled / &scale;
        let frac_part = &scaled % &scale;
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        out.push_str(&int_part.to_string());
        if digits > 0 {
            out.push('.');
            out.push_str(&format!("{:0>width$}", frac_part.to_string(), width = digits));
        }
        out
    }

    /// Product of many factors, multiplied as a balanced tree and reduced once.
    pub fn product<'a>(factors: impl IntoIterator<Item = &'a ExactRational>) -> ExactRational {
        let mut nums = Vec::new();
        let mut dens = Vec::new();
        for f in factors {
            nums.push(f.0.numer().clone());
            dens.push(f.0.denom().clone());
        }
        let n = product_tree(nums);
        if n.is_zero() {
            return ExactRational::zero();
        }
        ExactRational(BigRational::new(n, product_tree(dens)))
    }
}

fn product_tree(mut xs: Vec<BigInt>) -> BigInt {
    if xs.is_empty() {
        return BigInt::one();
    }
    while xs.len() > 1 {
        let mut next = Vec::with_capacity(xs.len().div_ceil(2));
        let mut it = xs.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(a * b),
                None => next.push(a),
            }
        }
        xs = next;
    }
    xs.pop().unwrap()
}

pub(crate) fn ratio_to_f64(num: &BigInt, den: &BigInt) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let sign = if (num.sign() == Sign::Minus) != (den.sign() == Sign::Minus) {
        -1.0
    } else {
        1.0
    };
    let n: BigUint = num.magnitude().clone();
    let d: BigUint = den.magnitude().clone();
    // Scale so the integer quotient carries ~64 significant bits.
    let shift = 64i64 - (n.bits() as i64 - d.bits() as i64);
    let q = if shift >= 0 {
        (n << shift as usize) / d
    } else {
        n / (d << (-shift) as usize)
    };
    let q = q.to_f64().unwrap_or(f64::INFINITY);
    sign * q * 2f64.powi(-shift as i32)
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl Serialize for ExactRational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl From<BigRational> for ExactRational {
    fn from(r: BigRational) -> Self {
        ExactRational(r)
    }
}

impl Mul for ExactRational {
    type Output = ExactRational;
    fn mul(self, rhs: ExactRational) -> ExactRational {
        ExactRational(self.0 * rhs.0)
    }
}

impl<'a> Mul<&'a ExactRational> for &'a ExactRational {
    type Output = ExactRational;
    fn mul(self, rhs: &ExactRational) -> ExactRational {
        ExactRational(&self.0 * &rhs.0)
    }
}

impl Add for ExactRational {
    type Output = ExactRational;
    fn add(self, rhs: ExactRational) -> ExactRational {
        ExactRational(self.0 + rhs.0)
    }
}
