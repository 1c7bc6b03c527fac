use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exponent `p` in `[1, ∞]`. Infinity is stored exactly and selects the
/// operator-norm branch wherever it appears.
#[derive(Clone, Copy, PartialEq, PartialOrd)]
pub struct Exponent(f64);

impl Exponent {
    pub const ONE: Exponent = Exponent(1.0);
    pub const TWO: Exponent = Exponent(2.0);
    pub const INFINITY: Exponent = Exponent(f64::INFINITY);

    pub fn new(value: f64) -> Result<Self> {
        if value.is_nan() || value < 1.0 {
            return Err(Error::InvalidExponent { value, constraint: "p >= 1" });
        }
        Ok(Self(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    /// Finite value, or `None` for `∞`.
    pub fn finite(self) -> Option<f64> {
        if self.is_infinite() {
            None
        } else {
            Some(self.0)
        }
    }

    /// The conjugate exponent `p'` with `1/p + 1/p' = 1`.
    pub fn conjugate(self) -> Exponent {
        conjugate_exponent(self)
    }
}

/// `1 ↦ ∞`, `∞ ↦ 1`, otherwise `p / (p - 1)`.
pub fn conjugate_exponent(p: Exponent) -> Exponent {
    if p.is_infinite() {
        Exponent::ONE
    } else if p.0 == 1.0 {
        Exponent::INFINITY
    } else {
        Exponent(p.0 / (p.0 - 1.0))
    }
}

impl fmt::Debug for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl TryFrom<f64> for Exponent {
    type Error = Error;
    fn try_from(value: f64) -> Result<Self> {
        Exponent::new(value)
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        if self.is_infinite() {
            serializer.serialize_str("inf")
        } else {
            serializer.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct ExponentVisitor;

        impl Visitor<'_> for ExponentVisitor {
            type Value = Exponent;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a real number >= 1 or the string \"inf\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Exponent, E> {
                Exponent::new(v).map_err(E::custom)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Exponent, E> {
                self.visit_f64(v as f64)
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Exponent, E> {
                self.visit_f64(v as f64)
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Exponent, E> {
                match v {
                    "inf" | "infinity" | "Infinity" | "∞" => Ok(Exponent::INFINITY),
                    other => Err(E::custom(format!("expected \"inf\", found \"{other}\""))),
                }
            }
        }

        deserializer.deserialize_any(ExponentVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjugate_examples() {
        assert_eq!(conjugate_exponent(Exponent::TWO), Exponent::TWO);
        assert_eq!(conjugate_exponent(Exponent::ONE), Exponent::INFINITY);
        assert_eq!(conjugate_exponent(Exponent::INFINITY), Exponent::ONE);
        assert_eq!(conjugate_exponent(Exponent::new(3.0).unwrap()).value(), 1.5);
    }

    #[test]
    fn conjugate_is_an_involution() {
        for p in [1.0, 1.25, 1.5, 2.0, 3.0, 7.5, 100.0, f64::INFINITY] {
            let p = Exponent::new(p).unwrap();
            let back = p.conjugate().conjugate();
            if p.is_infinite() {
                assert!(back.is_infinite());
            } else {
                assert!((back.value() - p.value()).abs() <= 1e-12 * p.value());
                let sum = 1.0 / p.value() + 1.0 / p.conjugate().value();
                assert!((sum - 1.0).abs() <= 1e-15);
            }
        }
    }

    #[test]
    fn rejects_below_one() {
        assert!(Exponent::new(0.5).is_err());
        assert!(Exponent::new(f64::NAN).is_err());
        assert!(serde_json::from_str::<Exponent>("0.5").is_err());
        assert_eq!(serde_json::from_str::<Exponent>("\"inf\"").unwrap(), Exponent::INFINITY);
        assert_eq!(serde_json::from_str::<Exponent>("2").unwrap(), Exponent::TWO);
        assert_eq!(serde_json::to_string(&Exponent::INFINITY).unwrap(), "\"inf\"");
    }
}
