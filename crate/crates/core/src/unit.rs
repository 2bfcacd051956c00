//! Exact scalars on the unit interval.
//!
//! Every coordinate and membership grade in this crate lives in `[0, 1]`.
//! They are kept as arbitrary-precision rationals so that piecewise-affine
//! manipulation (cut extraction, envelopes, meets, equality) is exact;
//! sampling engines convert to `f64` at their boundary.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use std::fmt;

use crate::error::{Error, Result};

/// Exact rational scalar, the crate's working number type.
pub type Q = BigRational;

pub fn q_zero() -> Q {
    Q::zero()
}

pub fn q_one() -> Q {
    Q::one()
}

/// Rational from an integer pair, `num/den`.
pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// Exact conversion; every finite `f64` is a rational.
pub fn q_from_f64(x: f64) -> Option<Q> {
    Q::from_f64(x)
}

pub fn q_to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn q_min(a: &Q, b: &Q) -> Q {
    if a <= b {
        a.clone()
    } else {
        b.clone()
    }
}

pub fn q_max(a: &Q, b: &Q) -> Q {
    if a >= b {
        a.clone()
    } else {
        b.clone()
    }
}

/// A value in the closed unit interval.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UnitValue(Q);

impl UnitValue {
    /// Wraps a rational, rejecting anything outside `[0, 1]`.
    pub fn new(value: Q) -> Result<Self> {
        if value.is_negative() || value > Q::one() {
            return Err(Error::invalid_field(
                "value",
                format!("{} is outside [0, 1]", q_to_f64(&value)),
            ));
        }
        Ok(UnitValue(value))
    }

    pub fn zero() -> Self {
        UnitValue(Q::zero())
    }

    pub fn one() -> Self {
        UnitValue(Q::one())
    }

    /// `num/den`, checked against `[0, 1]`.
    pub fn from_ratio(num: i64, den: i64) -> Result<Self> {
        Self::new(q(num, den))
    }

    pub fn from_f64(x: f64) -> Result<Self> {
        let r = q_from_f64(x)
            .ok_or_else(|| Error::invalid_field("value", format!("{x} is not finite")))?;
        Self::new(r)
    }

    pub fn as_q(&self) -> &Q {
        &self.0
    }

    pub fn into_q(self) -> Q {
        self.0
    }

    pub fn to_f64(&self) -> f64 {
        q_to_f64(&self.0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }
}

impl fmt::Debug for UnitValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UnitValue({})", self.0)
    }
}

impl fmt::Display for UnitValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64())
    }
}

impl From<UnitValue> for f64 {
    fn from(v: UnitValue) -> f64 {
        v.to_f64()
    }
}

// Serialized as plain numbers; exact dyadic values survive the round trip.
impl serde::Serialize for UnitValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_f64(self.to_f64())
    }
}

impl<'de> serde::Deserialize<'de> for UnitValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let x = f64::deserialize(d)?;
        UnitValue::from_f64(x).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_out_of_range() {
        assert!(UnitValue::from_f64(-0.1).is_err());
        assert!(UnitValue::from_f64(1.5).is_err());
        assert!(UnitValue::from_f64(f64::NAN).is_err());
        assert!(UnitValue::from_f64(0.0).is_ok());
        assert!(UnitValue::from_f64(1.0).is_ok());
    }

    #[test]
    fn f64_round_trip_is_exact_on_dyadics() {
        for i in 0..=64 {
            let x = i as f64 / 64.0;
            let u = UnitValue::from_f64(x).unwrap();
            assert_eq!(u.to_f64(), x);
            assert_eq!(u, UnitValue::from_ratio(i, 64).unwrap());
        }
    }

    #[test]
    fn ordering_matches_rationals() {
        let a = UnitValue::from_ratio(1, 3).unwrap();
        let b = UnitValue::from_ratio(1, 2).unwrap();
        assert!(a < b);
        assert_eq!(q_min(a.as_q(), b.as_q()), *a.as_q());
        assert_eq!(q_max(a.as_q(), b.as_q()), *b.as_q());
    }
}
