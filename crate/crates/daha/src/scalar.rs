//! Ground-field abstraction for polynomial coefficients.
//!
//! Two fields are used: arbitrary-precision rationals (the generic `q,t`
//! engine) and cyclotomic fields (roots-of-unity specializations). Both are
//! context-free value types so that the polynomial and matrix layers can stay
//! generic without threading a ring handle through every call.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use std::fmt::{Debug, Display};

/// An exact field element.
pub trait Scalar: Clone + PartialEq + Debug + Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse. Panics on zero (callers check first).
    fn inv(&self) -> Self;
    fn from_i64(v: i64) -> Self;

    /// A "content" for coefficient-growth control in polynomial remainder
    /// sequences: a common factor such that dividing it out keeps
    /// coefficients small. Fields without a canonical content return `None`.
    fn content_pair(_a: &Self, _b: &Self) -> Option<Self> {
        None
    }
}

/// Arbitrary-precision rational scalar.
pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    BigRational::from(BigInt::from(n))
}

impl Scalar for BigRational {
    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }
    fn one() -> Self {
        <BigRational as One>::one()
    }
    fn is_zero(&self) -> bool {
        <BigRational as Zero>::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Self {
        assert!(!<BigRational as Zero>::is_zero(self), "inverse of zero");
        self.recip()
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from(BigInt::from(v))
    }
    fn content_pair(a: &Self, b: &Self) -> Option<Self> {
        // gcd(numerators) / lcm(denominators): dividing both by this yields
        // coprime integers, which keeps remainder sequences primitive.
        use num::Integer;
        let num = a.numer().gcd(b.numer());
        let den = a.denom().lcm(b.denom());
        Some(BigRational::new(num, den))
    }
}

/// True if the rational is a nonnegative integer.
pub fn is_nonneg_int(r: &Rat) -> bool {
    r.is_integer() && !r.is_negative()
}

// Qualified helpers for files where both `Scalar` and the `num` traits would
// otherwise be in scope for `Rat`.
pub fn rat_zero() -> Rat {
    <Rat as Zero>::zero()
}
pub fn rat_one() -> Rat {
    <Rat as One>::one()
}
pub fn rat_is_zero(r: &Rat) -> bool {
    <Rat as Zero>::is_zero(r)
}
pub fn rat_is_one(r: &Rat) -> bool {
    <Rat as One>::is_one(r)
}

/// Exact integer value of a rational known to be integral.
pub fn to_i64(r: &Rat) -> i64 {
    assert!(r.is_integer(), "expected integer, got {r}");
    let n = r.to_integer();
    i64::try_from(n).expect("integer out of i64 range")
}
