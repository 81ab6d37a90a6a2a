use std::fmt::Debug;

use num_traits::{One, Zero};

use super::rational::Rational;

/// The commutative ring operations the Pfaffian routines need.
///
/// Implemented for rationals, polynomials and truncated jets over either, so
/// that one Laplace expansion serves every coefficient ring in the crate.
pub trait CommRing: Clone + PartialEq + Debug {
    fn ring_zero() -> Self;
    fn ring_one() -> Self;
    fn is_ring_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negate(&self) -> Self;
    fn from_rational(r: &Rational) -> Self;

    fn scale(&self, r: &Rational) -> Self {
        self.times(&Self::from_rational(r))
    }
}

impl CommRing for Rational {
    fn ring_zero() -> Self {
        Zero::zero()
    }
    fn ring_one() -> Self {
        One::one()
    }
    fn is_ring_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negate(&self) -> Self {
        -self
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
}
