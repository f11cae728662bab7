//! Scalar arithmetic: exact rationals for replay, a generic `Scalar` trait so
//! vectors and orbits can run either exactly or in floating point.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

/// Arbitrary precision rational; the exact scalar of the crate.
pub type Rational = BigRational;

/// Scalar entries usable in sparse vectors and orbit simulation.
///
/// Weights and Köthe entries are always produced exactly and converted with
/// [`Scalar::from_exact`]; for `f64`/`f32` that conversion rounds.
pub trait Scalar:
    Clone + Debug + PartialOrd + Signed + Send + Sync + 'static
{
    /// True when arithmetic on this type never rounds.
    const EXACT: bool;

    fn from_exact(q: &Rational) -> Self;

    /// The exact value, when the type carries one.
    fn to_exact(&self) -> Option<Rational>;

    fn to_f64(&self) -> f64;

    /// Natural log of the absolute value; `-inf` for zero. Never overflows.
    fn ln_abs(&self) -> f64;
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_exact(q: &Rational) -> Self {
        q.clone()
    }

    fn to_exact(&self) -> Option<Rational> {
        Some(self.clone())
    }

    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }

    fn ln_abs(&self) -> f64 {
        ln_abs_rational(self)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_exact(q: &Rational) -> Self {
        rational_to_f64(q)
    }

    fn to_exact(&self) -> Option<Rational> {
        None
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn ln_abs(&self) -> f64 {
        self.abs().ln()
    }
}

impl Scalar for f32 {
    const EXACT: bool = false;

    fn from_exact(q: &Rational) -> Self {
        rational_to_f64(q) as f32
    }

    fn to_exact(&self) -> Option<Rational> {
        None
    }

    fn to_f64(&self) -> f64 {
        *self as f64
    }

    fn ln_abs(&self) -> f64 {
        (self.abs() as f64).ln()
    }
}

/// `ln |n|` for a big integer without converting through `f64` first.
pub fn ln_abs_bigint(n: &BigInt) -> f64 {
    if n.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = n.bits();
    if bits <= 1000 {
        return n.abs().to_f64().map(f64::ln).unwrap_or(f64::INFINITY);
    }
    let shift = bits - 64;
    let top = (n.abs() >> shift).to_f64().unwrap_or(f64::MAX);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn ln_abs_rational(q: &Rational) -> f64 {
    if q.is_zero() {
        return f64::NEG_INFINITY;
    }
    ln_abs_bigint(q.numer()) - ln_abs_bigint(q.denom())
}

/// Nearest float; saturates to `±inf` / `0` outside the `f64` range.
pub fn rational_to_f64(q: &Rational) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    if let (Some(n), Some(d)) = (q.numer().to_f64(), q.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let sign = if q.is_negative() { -1.0 } else { 1.0 };
    sign * ln_abs_rational(q).exp()
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `2^e` for any signed exponent.
pub fn pow2(e: i64) -> Rational {
    let two = int(2);
    if e >= 0 {
        num_traits::pow(two, e as usize)
    } else {
        Rational::one() / num_traits::pow(two, (-e) as usize)
    }
}

/// Integer power with a signed exponent. Panics on `0^negative`.
pub fn powi(base: &Rational, e: i64) -> Rational {
    if e >= 0 {
        num_traits::pow(base.clone(), e as usize)
    } else {
        assert!(!base.is_zero(), "zero to a negative power");
        Rational::one() / num_traits::pow(base.clone(), (-e) as usize)
    }
}

/// Parses `"3"`, `"-1/2"`, or a decimal such as `"0.25"` exactly.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let negative = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), frac);
        let n: BigInt = digits.parse().ok()?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let q = Rational::new(n, d);
        return Some(if negative { -q } else { q });
    }
    s.parse::<BigInt>().ok().map(Rational::from_integer)
}

pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Exact conversion of a finite float.
pub fn rational_from_f64(x: f64) -> Option<Rational> {
    Rational::from_f64(x)
}

pub fn is_unimodular(q: &Rational) -> bool {
    q.abs().is_one()
}

/// Serde adapters: rationals travel as strings (`"3/2"`), integers as plain
/// JSON numbers are accepted on input.
pub mod serde_rational {
    use super::*;
    use serde::de::{self, Deserializer, Visitor};
    use serde::Serializer;
    use std::fmt;

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        d.deserialize_any(RationalVisitor)
    }

    pub(crate) struct RationalVisitor;

    impl<'de> Visitor<'de> for RationalVisitor {
        type Value = Rational;

        fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
            f.write_str("a rational as a string like \"3/2\" or an integer")
        }

        fn visit_str<E: de::Error>(self, v: &str) -> Result<Rational, E> {
            parse_rational(v).ok_or_else(|| E::custom(format!("invalid rational {v:?}")))
        }

        fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rational, E> {
            Ok(int(v))
        }

        fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rational, E> {
            Ok(Rational::from_integer(BigInt::from(v)))
        }

        fn visit_f64<E: de::Error>(self, v: f64) -> Result<Rational, E> {
            rational_from_f64(v).ok_or_else(|| E::custom("non-finite number"))
        }
    }

    #[derive(serde::Serialize, serde::Deserialize)]
    #[serde(transparent)]
    pub(crate) struct Wrap(#[serde(with = "super::serde_rational")] pub Rational);

    pub mod vec {
        use super::*;
        use serde::{Deserialize, Serialize};

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            let w: Vec<Wrap> = v.iter().cloned().map(Wrap).collect();
            w.serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            let w: Vec<Wrap> = Vec::deserialize(d)?;
            Ok(w.into_iter().map(|w| w.0).collect())
        }
    }

    pub mod map {
        use super::*;
        use serde::{Deserialize, Serialize};
        use std::collections::BTreeMap;

        pub fn serialize<S: Serializer>(
            m: &BTreeMap<i64, Rational>,
            s: S,
        ) -> Result<S::Ok, S::Error> {
            let w: BTreeMap<i64, Wrap> = m.iter().map(|(k, v)| (*k, Wrap(v.clone()))).collect();
            w.serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> Result<BTreeMap<i64, Rational>, D::Error> {
            // string keys: internally tagged enums buffer maps and lose the
            // integer key coercion
            let w: BTreeMap<String, Wrap> = BTreeMap::deserialize(d)?;
            w.into_iter()
                .map(|(k, v)| Ok((k.trim().parse().map_err(serde::de::Error::custom)?, v.0)))
                .collect()
        }
    }

    pub mod option {
        use super::*;
        use serde::{Deserialize, Serialize};

        pub fn serialize<S: Serializer>(v: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
            v.as_ref().map(|q| Wrap(q.clone())).serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
            let w: Option<Wrap> = Option::deserialize(d)?;
            Ok(w.map(|w| w.0))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_of_huge_rationals_stays_finite() {
        let big = pow2(5000);
        let ln = ln_abs_rational(&big);
        assert!((ln - 5000.0 * std::f64::consts::LN_2).abs() < 1e-9);
        let tiny = pow2(-5000);
        assert!((ln_abs_rational(&tiny) + 5000.0 * std::f64::consts::LN_2).abs() < 1e-9);
        assert_eq!(rational_to_f64(&big), f64::INFINITY);
        assert_eq!(rational_to_f64(&tiny), 0.0);
    }

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("-1/2"), Some(ratio(-1, 2)));
        assert_eq!(parse_rational("0.25"), Some(ratio(1, 4)));
        assert_eq!(parse_rational("-0.5"), Some(ratio(-1, 2)));
        assert_eq!(parse_rational("7"), Some(int(7)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(format_rational(&ratio(6, 4)), "3/2");
    }

    #[test]
    fn float_and_exact_scalars_agree_on_logs() {
        let q = ratio(8, 3);
        assert!((q.ln_abs() - Scalar::ln_abs(&(8.0f64 / 3.0))).abs() < 1e-12);
    }
}
