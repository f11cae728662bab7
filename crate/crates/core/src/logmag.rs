//! Log-magnitude values for long products.

use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::scalar::{ln_abs_rational, Rational};

/// Relative tolerance for comparisons made in the log domain.
pub const LOG_TOLERANCE: f64 = 1e-12;

/// `ln |x|`, with `-inf` standing for an exact zero.
///
/// Serialized as a number, or `null` for zero.
#[derive(Clone, Copy, PartialEq, PartialOrd)]
pub struct LogMag {
    log_abs: f64,
}

impl LogMag {
    pub const ZERO: LogMag = LogMag {
        log_abs: f64::NEG_INFINITY,
    };
    pub const ONE: LogMag = LogMag { log_abs: 0.0 };

    /// Panics on NaN or `+inf`.
    pub fn from_log(log_abs: f64) -> Self {
        assert!(
            !log_abs.is_nan() && log_abs != f64::INFINITY,
            "invalid log magnitude {log_abs}"
        );
        LogMag { log_abs }
    }

    pub fn of_f64(x: f64) -> Self {
        LogMag::from_log(x.abs().ln())
    }

    pub fn log_abs(self) -> f64 {
        self.log_abs
    }

    pub fn is_zero(self) -> bool {
        self.log_abs == f64::NEG_INFINITY
    }

    /// Saturates to `inf` / `0.0`.
    pub fn to_f64(self) -> f64 {
        self.log_abs.exp()
    }

    pub fn powf(self, p: f64) -> Self {
        if self.is_zero() {
            return self;
        }
        LogMag::from_log(self.log_abs * p)
    }

    pub fn div(self, other: LogMag) -> Self {
        assert!(!other.is_zero(), "division by a zero magnitude");
        if self.is_zero() {
            return self;
        }
        LogMag::from_log(self.log_abs - other.log_abs)
    }
}

impl Mul for LogMag {
    type Output = LogMag;

    fn mul(self, rhs: LogMag) -> LogMag {
        if self.is_zero() || rhs.is_zero() {
            LogMag::ZERO
        } else {
            LogMag::from_log(self.log_abs + rhs.log_abs)
        }
    }
}

impl fmt::Debug for LogMag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "LogMag(0)")
        } else {
            write!(f, "LogMag(e^{})", self.log_abs)
        }
    }
}

impl Serialize for LogMag {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.is_zero() {
            s.serialize_none()
        } else {
            s.serialize_f64(self.log_abs)
        }
    }
}

impl<'de> Deserialize<'de> for LogMag {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v: Option<f64> = Option::deserialize(d)?;
        Ok(v.map(LogMag::from_log).unwrap_or(LogMag::ZERO))
    }
}

pub fn logmag_of(x: &Rational) -> LogMag {
    LogMag::from_log(ln_abs_rational(x))
}

pub fn logmag_product<I: IntoIterator<Item = LogMag>>(xs: I) -> LogMag {
    let mut acc = 0.0;
    for x in xs {
        if x.is_zero() {
            return LogMag::ZERO;
        }
        acc += x.log_abs;
    }
    LogMag::from_log(acc)
}

/// Strict `|x| > threshold`, decided on logs.
pub fn exceeds(x: LogMag, threshold: f64) -> bool {
    assert!(threshold > 0.0, "threshold must be positive");
    exceeds_log(x, threshold.ln())
}

/// Strict comparison against a threshold given as a logarithm. Values within
/// [`LOG_TOLERANCE`] (relative) of the threshold count as equal.
pub fn exceeds_log(x: LogMag, log_threshold: f64) -> bool {
    if x.is_zero() {
        return false;
    }
    let slack = LOG_TOLERANCE * log_threshold.abs().max(x.log_abs.abs()).max(1.0);
    x.log_abs > log_threshold + slack
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};
    use proptest::prelude::*;

    #[test]
    fn logmag_of_examples() {
        assert_eq!(logmag_of(&int(1)).log_abs(), 0.0);
        assert!(logmag_of(&int(0)).is_zero());
        assert!((logmag_of(&int(8)).log_abs() - 2.0794415416798357).abs() < 1e-12);
    }

    #[test]
    fn product_examples() {
        let l2 = LogMag::from_log(2f64.ln());
        let p = logmag_product([l2, l2, l2]);
        assert!((p.log_abs() - 8f64.ln()).abs() < 1e-12);
        assert_eq!(logmag_product([]), LogMag::ONE);
        assert!(logmag_product([l2, LogMag::ZERO]).is_zero());
    }

    #[test]
    fn exceeds_is_strict() {
        let l8 = LogMag::from_log(8f64.ln());
        assert!(exceeds(l8, 4.0));
        assert!(!exceeds(l8, 8.0));
        assert!(!exceeds(LogMag::ZERO, 1e-300));
        // three factors of two land on ln 8 up to rounding
        let l2 = LogMag::from_log(2f64.ln());
        assert!(!exceeds(l2 * l2 * l2, 8.0));
    }

    #[test]
    fn zero_absorbs() {
        let x = LogMag::from_log(3.5);
        assert!((LogMag::ZERO * x).is_zero());
        assert!((x * LogMag::ZERO).is_zero());
    }

    #[test]
    fn json_round_trip_keeps_zero() {
        let v = vec![LogMag::ZERO, LogMag::from_log(-1.25)];
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, "[null,-1.25]");
        let back: Vec<LogMag> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
    }

    proptest! {
        #[test]
        fn product_matches_exact_rational(entries in prop::collection::vec((1i64..=8, 1i64..=8), 0..64)) {
            let exact = entries.iter().fold(int(1), |acc, &(n, d)| acc * ratio(n, d));
            let lm = logmag_product(entries.iter().map(|&(n, d)| logmag_of(&ratio(n, d))));
            prop_assert!((lm.log_abs() - ln_abs_rational(&exact)).abs() < 1e-10);
        }

        #[test]
        fn mul_commutes_and_associates(a in -50.0f64..50.0, b in -50.0f64..50.0, c in -50.0f64..50.0) {
            let (a, b, c) = (LogMag::from_log(a), LogMag::from_log(b), LogMag::from_log(c));
            let l = ((a * b) * c).log_abs();
            let r = (a * (b * c)).log_abs();
            prop_assert!((l - r).abs() <= 1e-12 * l.abs().max(1.0));
            prop_assert_eq!((a * b).log_abs(), (b * a).log_abs());
        }

        #[test]
        fn exceeds_monotone(x in -20.0f64..20.0, dx in 0.0f64..5.0, t in 0.01f64..100.0, dt in 0.0f64..5.0) {
            let lo = LogMag::from_log(x);
            let hi = LogMag::from_log(x + dx);
            if exceeds(lo, t) { prop_assert!(exceeds(hi, t)); }
            if exceeds(lo, t + dt) { prop_assert!(exceeds(lo, t)); }
        }
    }
}
