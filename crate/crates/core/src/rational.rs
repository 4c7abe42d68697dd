//! Exact rational scalar used by all template arithmetic.
//!
//! Membership in the slope sets `Z(j)` and detection of intervals of equality
//! are equality tests, so the template layer cannot tolerate rounding;
//! everything is carried as arbitrary-precision rationals and reduced to
//! floating point only at the boundary (lattice computations, optimizers,
//! CSV output).

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Arbitrary-precision rational, always stored reduced with positive
/// denominator (the backing type maintains that invariant).
pub type Rational = num_rational::BigRational;

/// Rational from an integer pair. Panics on zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    assert!(den != 0, "zero denominator");
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Rational from an integer.
pub fn int(num: i64) -> Rational {
    Rational::from_integer(BigInt::from(num))
}

/// Lossy conversion for reporting and numeric cross-checks.
pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // Fall back to a quotient of approximations for enormous terms.
        let n = x.numer().to_f64().unwrap_or(f64::NAN);
        let d = x.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Exact rational from a float (every finite f64 is a dyadic rational).
pub fn from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

/// Renders as `p/q`, or just `p` when the denominator is one.
pub fn format_ratio(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `p/q` or `p` (optionally signed). The serialized form of every
/// rational in the JSON interfaces.
pub fn parse_ratio(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (num_s, den_s) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num_s
        .parse()
        .map_err(|_| Error::Malformed(format!("bad rational numerator in {s:?}")))?;
    let den: BigInt = den_s
        .parse()
        .map_err(|_| Error::Malformed(format!("bad rational denominator in {s:?}")))?;
    if den.is_zero() {
        return Err(Error::Malformed(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(num, den))
}

/// Exact fractional part `{x} = x - floor(x)`, in `[0, 1)`.
pub fn fract(x: &Rational) -> Rational {
    x - x.floor()
}

/// True when `x` is a (possibly negative) integer.
pub fn is_integer(x: &Rational) -> bool {
    x.denom().is_one()
}

/// Serde adapter serializing rationals as exact `"p/q"` strings.
pub mod serde_ratio {
    use super::*;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(x: &Rational, ser: S) -> std::result::Result<S::Ok, S::Error> {
        format_ratio(x).serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        de: D,
    ) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(de)?;
        parse_ratio(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Vec<Rational>`.
pub mod serde_ratio_vec {
    use super::*;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(
        xs: &[Rational],
        ser: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        xs.iter()
            .map(format_ratio)
            .collect::<Vec<_>>()
            .serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        de: D,
    ) -> std::result::Result<Vec<Rational>, D::Error> {
        let ss = Vec::<String>::deserialize(de)?;
        ss.iter()
            .map(|s| parse_ratio(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Serde adapter for `Vec<Vec<Rational>>`.
pub mod serde_ratio_mat {
    use super::*;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(
        xs: &[Vec<Rational>],
        ser: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        xs.iter()
            .map(|row| row.iter().map(format_ratio).collect::<Vec<_>>())
            .collect::<Vec<_>>()
            .serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        de: D,
    ) -> std::result::Result<Vec<Vec<Rational>>, D::Error> {
        let ss = Vec::<Vec<String>>::deserialize(de)?;
        ss.iter()
            .map(|row| {
                row.iter()
                    .map(|s| parse_ratio(s).map_err(serde::de::Error::custom))
                    .collect()
            })
            .collect()
    }
}

/// Signum as an integer rational, handy for branch splits.
pub fn signum(x: &Rational) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}
