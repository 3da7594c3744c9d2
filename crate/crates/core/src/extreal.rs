//! Non-negative extended reals: traces, widths and weights that may be `+∞`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A value in `[0, ∞]`. Infinity is a distinct variant, never a large float.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtReal {
    Finite(f64),
    Infinite,
}

pub use ExtReal::{Finite, Infinite};

impl ExtReal {
    pub const ZERO: ExtReal = Finite(0.0);

    pub fn is_finite(self) -> bool {
        matches!(self, Finite(_))
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Finite(v) => Some(v),
            Infinite => None,
        }
    }

    /// Multiplication by a non-negative real, with `∞·0 = 0`.
    pub fn times(self, k: f64) -> ExtReal {
        match self {
            Finite(v) => Finite(v * k),
            Infinite if k == 0.0 => Finite(0.0),
            Infinite => Infinite,
        }
    }

    pub fn min(self, other: ExtReal) -> ExtReal {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: ExtReal) -> ExtReal {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// `self - other`, assuming `self >= other` and `other` finite.
    pub fn minus(self, other: f64) -> ExtReal {
        match self {
            Finite(v) => Finite(v - other),
            Infinite => Infinite,
        }
    }

    /// Relative comparison; infinities only equal infinities.
    pub fn approx_eq(self, other: ExtReal, rel: f64) -> bool {
        match (self, other) {
            (Finite(a), Finite(b)) => (a - b).abs() <= rel * (1.0 + a.abs().max(b.abs())),
            (Infinite, Infinite) => true,
            _ => false,
        }
    }
}

impl From<f64> for ExtReal {
    fn from(v: f64) -> Self {
        Finite(v)
    }
}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Finite(a), Finite(b)) => a.partial_cmp(b),
            (Finite(_), Infinite) => Some(Ordering::Less),
            (Infinite, Finite(_)) => Some(Ordering::Greater),
            (Infinite, Infinite) => Some(Ordering::Equal),
        }
    }
}

impl PartialEq<f64> for ExtReal {
    fn eq(&self, other: &f64) -> bool {
        *self == Finite(*other)
    }
}

impl PartialOrd<f64> for ExtReal {
    fn partial_cmp(&self, other: &f64) -> Option<Ordering> {
        self.partial_cmp(&Finite(*other))
    }
}

impl Add for ExtReal {
    type Output = ExtReal;
    fn add(self, rhs: ExtReal) -> ExtReal {
        match (self, rhs) {
            (Finite(a), Finite(b)) => Finite(a + b),
            _ => Infinite,
        }
    }
}

impl Add<f64> for ExtReal {
    type Output = ExtReal;
    fn add(self, rhs: f64) -> ExtReal {
        self + Finite(rhs)
    }
}

impl Mul<f64> for ExtReal {
    type Output = ExtReal;
    fn mul(self, rhs: f64) -> ExtReal {
        self.times(rhs)
    }
}

impl std::iter::Sum for ExtReal {
    fn sum<I: Iterator<Item = ExtReal>>(iter: I) -> Self {
        iter.fold(ExtReal::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Finite(v) => write!(f, "{v}"),
            Infinite => f.write_str("inf"),
        }
    }
}

/// Serialized as a JSON number or the string `"inf"`.
impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Finite(v) => s.serialize_f64(*v),
            Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtReal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(Finite(v)),
            Repr::Str(s) if s == "inf" => Ok(Infinite),
            Repr::Str(s) => Err(serde::de::Error::custom(format!(
                "expected a number or \"inf\", found \"{s}\""
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinity_times_zero_is_zero() {
        assert_eq!(Infinite.times(0.0), Finite(0.0));
        assert_eq!(Infinite.times(2.0), Infinite);
    }

    #[test]
    fn ordering() {
        assert!(Finite(1e300) < Infinite);
        assert!(Finite(1.0) < Finite(2.0));
        assert_eq!(Finite(3.0).min(Infinite), Finite(3.0));
    }

    #[test]
    fn json_forms() {
        assert_eq!(serde_json::to_string(&Infinite).unwrap(), "\"inf\"");
        let v: ExtReal = serde_json::from_str("2.5").unwrap();
        assert_eq!(v, Finite(2.5));
        let v: ExtReal = serde_json::from_str("\"inf\"").unwrap();
        assert_eq!(v, Infinite);
        assert!(serde_json::from_str::<ExtReal>("\"nan\"").is_err());
    }
}
