//! Extended nonnegative reals `[0, ∞]`.
//!
//! `∞` is a dedicated variant rather than an IEEE infinity, so that the
//! distance `|∞ − ∞| = 0` falls out of case analysis instead of NaN rules.
//! Addition absorbs into `∞`, and the distance between two values is the
//! smallest `z` with `a ≤ b + z` and `b ≤ a + z`.

use core::cmp::Ordering;
use core::fmt;
use core::ops::Add;

use crate::error::Error;

/// Global comparison tolerance for validation and approximate equality.
pub const TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
enum Repr {
    Finite(f64),
    Inf,
}

/// A value in `[0, ∞]`. Finite values are never negative or NaN.
#[derive(Clone, Copy, PartialEq)]
pub struct ExtReal(Repr);

impl ExtReal {
    pub const ZERO: ExtReal = ExtReal(Repr::Finite(0.0));
    pub const INF: ExtReal = ExtReal(Repr::Inf);

    /// Finite value; rejects negative, NaN and IEEE-infinite input.
    pub fn new(value: f64) -> Result<Self, Error> {
        if value.is_finite() && value >= 0.0 {
            // normalise -0.0
            Ok(ExtReal(Repr::Finite(value + 0.0)))
        } else {
            Err(Error::InvalidExtReal(value))
        }
    }

    /// Like [`ExtReal::new`] but maps `f64::INFINITY` to `∞`.
    pub fn from_f64(value: f64) -> Result<Self, Error> {
        if value == f64::INFINITY {
            Ok(Self::INF)
        } else {
            Self::new(value)
        }
    }

    /// Clamps to zero; intended for values known nonnegative up to rounding.
    pub(crate) fn clamped(value: f64) -> Self {
        debug_assert!(!value.is_nan());
        if value == f64::INFINITY {
            Self::INF
        } else if value > 0.0 {
            ExtReal(Repr::Finite(value))
        } else {
            Self::ZERO
        }
    }

    pub fn is_inf(self) -> bool {
        matches!(self.0, Repr::Inf)
    }

    pub fn is_finite(self) -> bool {
        !self.is_inf()
    }

    pub fn finite(self) -> Option<f64> {
        match self.0 {
            Repr::Finite(v) => Some(v),
            Repr::Inf => None,
        }
    }

    /// `f64` view, with `∞` mapped to `f64::INFINITY`.
    pub fn to_f64(self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }

    /// `|a − b|` under the two-inequality convention, so `|∞ − ∞| = 0`.
    pub fn dist(self, other: ExtReal) -> ExtReal {
        match (self.0, other.0) {
            (Repr::Inf, Repr::Inf) => Self::ZERO,
            (Repr::Finite(a), Repr::Finite(b)) => ExtReal(Repr::Finite((a - b).abs())),
            _ => Self::INF,
        }
    }

    /// Truncated subtraction `(a − b) ∨ 0`, with `∞ − finite = ∞` and
    /// `anything − ∞ = 0`.
    pub fn monus(self, other: ExtReal) -> ExtReal {
        match (self.0, other.0) {
            (_, Repr::Inf) => Self::ZERO,
            (Repr::Inf, Repr::Finite(_)) => Self::INF,
            (Repr::Finite(a), Repr::Finite(b)) => Self::clamped(a - b),
        }
    }

    /// Multiplication by a strictly positive real, `ℓ·∞ = ∞`.
    pub fn scale(self, factor: f64) -> Result<ExtReal, Error> {
        if !(factor.is_finite() && factor > 0.0) {
            return Err(Error::NonPositiveFactor(factor));
        }
        Ok(match self.0 {
            Repr::Inf => Self::INF,
            Repr::Finite(v) => ExtReal(Repr::Finite(v * factor)),
        })
    }

    /// `a ≤ b + tol`, with `∞ ≤ ∞`.
    pub fn le_tol(self, other: ExtReal, tol: f64) -> bool {
        match (self.0, other.0) {
            (_, Repr::Inf) => true,
            (Repr::Inf, Repr::Finite(_)) => false,
            (Repr::Finite(a), Repr::Finite(b)) => a <= b + tol,
        }
    }

    /// Both infinite, or both finite and within `tol`.
    pub fn approx_eq(self, other: ExtReal, tol: f64) -> bool {
        self.dist(other).le_tol(Self::ZERO, tol)
    }
}

impl Eq for ExtReal {}

impl Ord for ExtReal {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.0, other.0) {
            (Repr::Inf, Repr::Inf) => Ordering::Equal,
            (Repr::Inf, Repr::Finite(_)) => Ordering::Greater,
            (Repr::Finite(_), Repr::Inf) => Ordering::Less,
            (Repr::Finite(a), Repr::Finite(b)) => a.total_cmp(&b),
        }
    }
}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for ExtReal {
    type Output = ExtReal;

    fn add(self, rhs: ExtReal) -> ExtReal {
        match (self.0, rhs.0) {
            (Repr::Finite(a), Repr::Finite(b)) => ExtReal(Repr::Finite(a + b)),
            _ => Self::INF,
        }
    }
}

impl Default for ExtReal {
    fn default() -> Self {
        Self::ZERO
    }
}

impl fmt::Debug for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Repr::Finite(v) => fmt::Display::fmt(&v, f),
            Repr::Inf => f.write_str("inf"),
        }
    }
}

impl TryFrom<f64> for ExtReal {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self, Error> {
        Self::from_f64(value)
    }
}

/// `|a − b|` on extended reals.
pub fn ext_dist(a: ExtReal, b: ExtReal) -> ExtReal {
    a.dist(b)
}

/// Maximum of an iterator, `0` when empty.
pub(crate) fn max_of<I: IntoIterator<Item = ExtReal>>(iter: I) -> ExtReal {
    iter.into_iter().fold(ExtReal::ZERO, ExtReal::max)
}

#[cfg(feature = "serde")]
mod serde_impl {
    use super::ExtReal;
    use core::fmt;
    use serde::de::{self, Visitor};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    /// Finite values are JSON numbers; `∞` is the string `"inf"`.
    impl Serialize for ExtReal {
        fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
            match self.finite() {
                Some(v) => serializer.serialize_f64(v),
                None => serializer.serialize_str("inf"),
            }
        }
    }

    struct ExtRealVisitor;

    impl Visitor<'_> for ExtRealVisitor {
        type Value = ExtReal;

        fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            f.write_str("a nonnegative number or the string \"inf\"")
        }

        fn visit_f64<E: de::Error>(self, v: f64) -> Result<ExtReal, E> {
            ExtReal::new(v).map_err(|_| E::custom(format_args!("invalid extended real {v}")))
        }

        fn visit_u64<E: de::Error>(self, v: u64) -> Result<ExtReal, E> {
            self.visit_f64(v as f64)
        }

        fn visit_i64<E: de::Error>(self, v: i64) -> Result<ExtReal, E> {
            self.visit_f64(v as f64)
        }

        fn visit_str<E: de::Error>(self, v: &str) -> Result<ExtReal, E> {
            if v == "inf" {
                Ok(ExtReal::INF)
            } else {
                Err(E::invalid_value(de::Unexpected::Str(v), &self))
            }
        }
    }

    impl<'de> Deserialize<'de> for ExtReal {
        fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<ExtReal, D::Error> {
            deserializer.deserialize_any(ExtRealVisitor)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(v: f64) -> ExtReal {
        ExtReal::new(v).unwrap()
    }

    #[test]
    fn dist_examples() {
        assert_eq!(ext_dist(ExtReal::INF, ExtReal::INF), ExtReal::ZERO);
        assert_eq!(ext_dist(e(5.0), e(5.0)), ExtReal::ZERO);
        assert_eq!(ext_dist(ExtReal::INF, e(3.0)), ExtReal::INF);
        assert_eq!(ext_dist(e(3.0), ExtReal::INF), ExtReal::INF);
        assert_eq!(ext_dist(e(1.5), e(4.0)), e(2.5));
    }

    #[test]
    fn rejects_invalid() {
        assert!(ExtReal::new(-1.0).is_err());
        assert!(ExtReal::new(f64::NAN).is_err());
        assert!(ExtReal::new(f64::INFINITY).is_err());
        assert_eq!(ExtReal::from_f64(f64::INFINITY).unwrap(), ExtReal::INF);
        assert_eq!(ExtReal::new(-0.0).unwrap().to_f64().to_bits(), 0.0f64.to_bits());
    }

    #[test]
    fn arithmetic() {
        assert_eq!(ExtReal::INF + e(2.0), ExtReal::INF);
        assert_eq!(e(2.0) + ExtReal::INF, ExtReal::INF);
        assert!(e(1e300) < ExtReal::INF);
        assert_eq!(ExtReal::INF.monus(e(3.0)), ExtReal::INF);
        assert_eq!(ExtReal::INF.monus(ExtReal::INF), ExtReal::ZERO);
        assert_eq!(e(2.0).monus(e(3.0)), ExtReal::ZERO);
        assert_eq!(ExtReal::INF.scale(0.5).unwrap(), ExtReal::INF);
        assert!(e(1.0).scale(0.0).is_err());
        assert!(e(1.0).scale(-2.0).is_err());
    }

    #[test]
    fn metric_axioms_exhaustive() {
        let vals = [
            ExtReal::ZERO,
            e(0.5),
            e(1.0),
            e(2.75),
            e(10.0),
            ExtReal::INF,
        ];
        for &a in &vals {
            for &b in &vals {
                assert_eq!(a.dist(b), b.dist(a));
                assert_eq!(a.dist(b) == ExtReal::ZERO, a == b);
                for &c in &vals {
                    assert!(a.dist(c) <= a.dist(b) + b.dist(c));
                }
            }
        }
    }
}
