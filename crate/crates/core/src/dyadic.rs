//! Exact dyadic rationals, `n / 2^k`.
//!
//! Program weights are always powers of one half, so every sum of them is
//! dyadic. Values are kept reduced: the numerator is odd or the value is zero
//! with exponent 0.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    numerator: BigUint,
    exponent: u32,
}

impl Dyadic {
    pub fn zero() -> Self {
        Self {
            numerator: BigUint::zero(),
            exponent: 0,
        }
    }

    pub fn one() -> Self {
        Self::pow2_neg(0)
    }

    /// `2^-k`, the weight of a `k`-bit program.
    pub fn pow2_neg(k: u32) -> Self {
        Self {
            numerator: BigUint::one(),
            exponent: k,
        }
    }

    pub fn new(numerator: impl Into<BigUint>, exponent: u32) -> Self {
        let mut d = Self {
            numerator: numerator.into(),
            exponent,
        };
        d.reduce();
        d
    }

    pub fn numerator(&self) -> &BigUint {
        &self.numerator
    }

    /// Base-two logarithm of the denominator.
    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn denominator(&self) -> BigUint {
        BigUint::one() << self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(
            BigInt::from(self.numerator.clone()),
            BigInt::from(self.denominator()),
        )
    }

    pub fn to_f64(&self) -> f64 {
        self.to_rational().to_f64().unwrap_or(f64::NAN)
    }

    fn reduce(&mut self) {
        if self.numerator.is_zero() {
            self.exponent = 0;
            return;
        }
        let tz = self.numerator.trailing_zeros().unwrap_or(0);
        let shift = tz.min(u64::from(self.exponent)) as u32;
        if shift > 0 {
            self.numerator >>= shift;
            self.exponent -= shift;
        }
    }

    fn scaled_to(&self, exponent: u32) -> BigUint {
        debug_assert!(exponent >= self.exponent);
        &self.numerator << (exponent - self.exponent)
    }
}

impl Default for Dyadic {
    fn default() -> Self {
        Self::zero()
    }
}

impl Add<&Dyadic> for &Dyadic {
    type Output = Dyadic;

    fn add(self, rhs: &Dyadic) -> Dyadic {
        let e = self.exponent.max(rhs.exponent);
        Dyadic::new(self.scaled_to(e) + rhs.scaled_to(e), e)
    }
}

impl Add for Dyadic {
    type Output = Dyadic;

    fn add(self, rhs: Dyadic) -> Dyadic {
        &self + &rhs
    }
}

impl AddAssign<&Dyadic> for Dyadic {
    fn add_assign(&mut self, rhs: &Dyadic) {
        if rhs.exponent <= self.exponent {
            self.numerator += rhs.scaled_to(self.exponent);
        } else {
            self.numerator = self.scaled_to(rhs.exponent) + &rhs.numerator;
            self.exponent = rhs.exponent;
        }
        self.reduce();
    }
}

impl AddAssign for Dyadic {
    fn add_assign(&mut self, rhs: Dyadic) {
        *self += &rhs;
    }
}

impl Sum for Dyadic {
    fn sum<I: Iterator<Item = Dyadic>>(iter: I) -> Self {
        iter.fold(Dyadic::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Dyadic> for Dyadic {
    fn sum<I: Iterator<Item = &'a Dyadic>>(iter: I) -> Self {
        iter.fold(Dyadic::zero(), |mut acc, x| {
            acc += x;
            acc
        })
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exponent.max(other.exponent);
        self.scaled_to(e).cmp(&other.scaled_to(e))
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Always `numerator/denominator`, including `0/1` and `1/1`.
impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator())
    }
}
