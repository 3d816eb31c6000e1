//! Fixed-point timestamps.
//!
//! Every endpoint in a link stream is an input timestamp shifted by a
//! half-window, so storing time as integer microseconds keeps all interval
//! comparisons exact: touching intervals really touch, and a gap of exactly
//! one second is never off by an ulp.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

pub const MICROS_PER_SECOND: i64 = 1_000_000;

/// A point in time (or a span) in whole microseconds.
#[derive(
    Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct Time(i64);

impl Time {
    pub const ZERO: Time = Time(0);
    pub const MIN: Time = Time(i64::MIN);
    pub const MAX: Time = Time(i64::MAX);

    pub const fn from_micros(us: i64) -> Self {
        Time(us)
    }

    pub const fn from_secs(s: i64) -> Self {
        Time(s * MICROS_PER_SECOND)
    }

    /// Rounds to the nearest microsecond.
    pub fn from_secs_f64(s: f64) -> Self {
        Time((s * MICROS_PER_SECOND as f64).round() as i64)
    }

    pub const fn as_micros(self) -> i64 {
        self.0
    }

    pub fn as_secs_f64(self) -> f64 {
        self.0 as f64 / MICROS_PER_SECOND as f64
    }

    /// Index of the whole-second bin `[k, k+1)` holding this instant.
    pub fn floor_second(self) -> i64 {
        self.0.div_euclid(MICROS_PER_SECOND)
    }
}

impl Add for Time {
    type Output = Time;
    fn add(self, rhs: Time) -> Time {
        Time(self.0 + rhs.0)
    }
}

impl Sub for Time {
    type Output = Time;
    fn sub(self, rhs: Time) -> Time {
        Time(self.0 - rhs.0)
    }
}

impl Neg for Time {
    type Output = Time;
    fn neg(self) -> Time {
        Time(-self.0)
    }
}

impl fmt::Display for Time {
    /// Seconds with exactly six decimals.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.0 < 0 { "-" } else { "" };
        let abs = self.0.unsigned_abs();
        let per = MICROS_PER_SECOND as u64;
        write!(f, "{}{}.{:06}", sign, abs / per, abs % per)
    }
}

impl FromStr for Time {
    type Err = Error;

    /// Parses a decimal number of seconds (`.` separator). Digits beyond the
    /// sixth decimal are rounded half away from zero.
    fn from_str(raw: &str) -> Result<Self, Error> {
        let bad = || Error::Parse(format!("invalid timestamp {raw:?}"));
        let s = raw.trim();
        let (negative, digits) = match s.as_bytes().first() {
            Some(b'-') => (true, &s[1..]),
            Some(b'+') => (false, &s[1..]),
            _ => (false, s),
        };
        let (int_part, frac_part) = match digits.split_once('.') {
            Some((i, f)) => (i, f),
            None => (digits, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if !int_part.bytes().all(|b| b.is_ascii_digit())
            || !frac_part.bytes().all(|b| b.is_ascii_digit())
        {
            return Err(bad());
        }
        let whole: i64 = if int_part.is_empty() {
            0
        } else {
            int_part.parse().map_err(|_| bad())?
        };
        let mut micros: i64 = 0;
        for (i, b) in frac_part.bytes().take(6).enumerate() {
            micros += i64::from(b - b'0') * 10i64.pow(5 - i as u32);
        }
        if let Some(b) = frac_part.as_bytes().get(6) {
            if *b >= b'5' {
                micros += 1;
            }
        }
        let total = whole
            .checked_mul(MICROS_PER_SECOND)
            .and_then(|w| w.checked_add(micros))
            .ok_or_else(bad)?;
        Ok(Time(if negative { -total } else { total }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let t: Time = "2.8".parse().unwrap();
        assert_eq!(t.as_micros(), 2_800_000);
        assert_eq!(t.to_string(), "2.800000");
        assert_eq!("-0.5".parse::<Time>().unwrap().to_string(), "-0.500000");
        assert_eq!("1045.75".parse::<Time>().unwrap(), Time::from_micros(1_045_750_000));
        assert_eq!(".25".parse::<Time>().unwrap(), Time::from_micros(250_000));
        assert_eq!("7".parse::<Time>().unwrap(), Time::from_secs(7));
    }

    #[test]
    fn sub_microsecond_digits_round() {
        assert_eq!("0.0000004".parse::<Time>().unwrap(), Time::ZERO);
        assert_eq!("0.0000005".parse::<Time>().unwrap(), Time::from_micros(1));
        assert_eq!("1372110300.123456789".parse::<Time>().unwrap().as_micros(), 1_372_110_300_123_457);
    }

    #[test]
    fn rejects_garbage() {
        for s in ["x", "", ".", "1.2.3", "1e3", "--1", "1,5"] {
            assert!(s.parse::<Time>().is_err(), "{s}");
        }
    }

    #[test]
    fn floor_second_is_euclidean() {
        assert_eq!(Time::from_micros(-1).floor_second(), -1);
        assert_eq!(Time::from_secs(3).floor_second(), 3);
        assert_eq!(Time::from_micros(3_999_999).floor_second(), 3);
    }
}
