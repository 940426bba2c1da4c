//! Reals with a 128-bit mantissa and an unbounded exponent.
//!
//! Quantities such as `n!^m · E_{n,m,r}` leave the `f64` range long before
//! the formulas stop being interesting, and their logarithms need more than
//! 53 bits to keep a 1e-12 relative error once multiplied by `C(n,2)`.

use std::cmp::Ordering;
use std::fmt;

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Signed;
use serde::{Serialize, Serializer};

/// Mantissa bits carried through every operation.
pub const PRECISION_BITS: usize = 128;

type Float = FBig<HalfEven, 2>;

#[derive(Clone, PartialEq, PartialOrd)]
pub struct BigReal(Float);

fn to_ubig(x: &BigUint) -> dashu_int::UBig {
    dashu_int::UBig::from_le_bytes(&x.to_bytes_le())
}

impl BigReal {
    fn wrap(x: Float) -> Self {
        BigReal(x.with_precision(PRECISION_BITS).value())
    }

    pub fn zero() -> Self {
        Self::wrap(Float::ZERO)
    }

    pub fn one() -> Self {
        Self::wrap(Float::ONE)
    }

    pub fn from_u64(x: u64) -> Self {
        Self::wrap(Float::from(x))
    }

    pub fn from_biguint(x: &BigUint) -> Self {
        Self::wrap(Float::from(to_ubig(x)))
    }

    pub fn from_f64(x: f64) -> Self {
        Self::wrap(Float::try_from(x).expect("finite f64"))
    }

    /// Nearest representable value to a rational; the rational's sign is
    /// kept.
    pub fn from_ratio(x: &BigRational) -> Self {
        let num = Self::from_biguint(x.numer().magnitude());
        let den = Self::from_biguint(x.denom().magnitude());
        let q = num.0 / den.0;
        if x.is_negative() {
            Self::wrap(-q)
        } else {
            Self::wrap(q)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0 == Float::ZERO
    }

    pub fn ln(&self) -> Self {
        Self::wrap(self.0.ln())
    }

    pub fn exp(&self) -> Self {
        Self::wrap(self.0.exp())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::wrap(&self.0 * &other.0)
    }

    pub fn div(&self, other: &Self) -> Self {
        Self::wrap(&self.0 / &other.0)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::wrap(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::wrap(&self.0 - &other.0)
    }

    pub fn neg(&self) -> Self {
        Self::wrap(-self.0.clone())
    }

    pub fn abs(&self) -> Self {
        if self.0 < Float::ZERO {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Nearest `f64`; underflows to 0 and overflows to infinity.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().value()
    }

    /// Natural logarithm as an `f64` (`-inf` for zero), usable when the value
    /// itself does not fit in an `f64`.
    pub fn ln_f64(&self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            self.0.ln().to_f64().value()
        }
    }

    /// `|self - other| / |other|`; infinite when `other` is zero and `self`
    /// is not.
    pub fn relative_error(&self, other: &Self) -> f64 {
        if other.is_zero() {
            return if self.is_zero() { 0.0 } else { f64::INFINITY };
        }
        self.sub(other).div(other).abs().to_f64()
    }

    /// Scientific notation with `digits` significant decimal digits.
    pub fn to_scientific(&self, digits: usize) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let dec = self.0.to_decimal().value().with_precision(digits).value();
        format!("{dec:e}")
    }
}

impl fmt::Debug for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigReal({})", self.to_scientific(25))
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_scientific(20))
    }
}

impl Serialize for BigReal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_scientific(20))
    }
}

impl BigReal {
    pub fn cmp_total(&self, other: &Self) -> Ordering {
        self.partial_cmp(other).unwrap_or(Ordering::Equal)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn basic_arithmetic() {
        let three = BigReal::from_u64(3);
        let half = BigReal::from_ratio(&BigRational::new(BigInt::from(1), BigInt::from(2)));
        assert!((three.mul(&half).to_f64() - 1.5).abs() < 1e-15);
        assert!((three.ln().to_f64() - 3f64.ln()).abs() < 1e-15);
        assert!((three.ln().exp().to_f64() - 3.0).abs() < 1e-14);
        assert_eq!(BigReal::zero().ln_f64(), f64::NEG_INFINITY);
    }

    #[test]
    fn huge_exponents_survive() {
        let tiny = BigReal::from_f64(-5.0e6).exp();
        assert_eq!(tiny.to_f64(), 0.0);
        assert!((tiny.ln_f64() + 5.0e6).abs() < 1e-6);
        assert!(tiny.to_string().contains("e-2171473"), "{tiny}");
    }

    #[test]
    fn relative_error_of_equal_values_is_zero() {
        let x = BigReal::from_u64(7).ln();
        assert_eq!(x.relative_error(&x), 0.0);
        assert_eq!(BigReal::zero().relative_error(&BigReal::zero()), 0.0);
        assert!(BigReal::one().relative_error(&BigReal::zero()).is_infinite());
    }
}
