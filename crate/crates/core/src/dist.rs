//! Exact non-negative rational distances.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedMul, Signed, Zero};

use crate::error::Error;

/// A distance value, stored as a rational in lowest terms.
///
/// Comparison is exact. Values are parsed from integers (`"3"`), decimals
/// (`"0.25"`) or fractions (`"7/4"`); exponent notation is refused.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Dist(Ratio<i128>);

impl Dist {
    pub const ZERO: Dist = Dist(Ratio::new_raw(0, 1));

    pub fn from_int(v: u64) -> Dist {
        Dist(Ratio::from_integer(v as i128))
    }

    /// Builds `num/den`; fails on a zero denominator or a negative value.
    pub fn ratio(num: i128, den: i128) -> Result<Dist, Error> {
        if den == 0 {
            return Err(bad(&format!("{num}/{den}"), "zero denominator"));
        }
        let r = Ratio::new(num, den);
        if r.is_negative() {
            return Err(bad(&format!("{num}/{den}"), "negative"));
        }
        Ok(Dist(r))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn numer(&self) -> i128 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i128 {
        *self.0.denom()
    }

    pub fn checked_add(&self, other: &Dist) -> Option<Dist> {
        self.0.checked_add(&other.0).map(Dist)
    }

    pub fn checked_mul(&self, other: &Dist) -> Option<Dist> {
        self.0.checked_mul(&other.0).map(Dist)
    }

    pub fn half(&self) -> Dist {
        Dist(self.0 / 2)
    }
}

fn bad(value: &str, reason: &str) -> Error {
    Error::BadNumeral {
        value: value.to_string(),
        reason: reason.to_string(),
    }
}

fn parse_uint(s: &str, whole: &str) -> Result<i128, Error> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad(whole, "expected decimal digits"));
    }
    s.parse::<i128>().map_err(|_| bad(whole, "overflow"))
}

impl FromStr for Dist {
    type Err = Error;

    fn from_str(raw: &str) -> Result<Dist, Error> {
        let s = raw.trim();
        if s.starts_with('-') {
            return Err(bad(raw, "negative"));
        }
        let s = s.strip_prefix('+').unwrap_or(s);
        if let Some((n, d)) = s.split_once('/') {
            let n = parse_uint(n.trim(), raw)?;
            let d = parse_uint(d.trim(), raw)?;
            return Dist::ratio(n, d);
        }
        if let Some((int, frac)) = s.split_once('.') {
            let int_part = if int.is_empty() { 0 } else { parse_uint(int, raw)? };
            if frac.is_empty() {
                return Ok(Dist(Ratio::from_integer(int_part)));
            }
            let frac_part = parse_uint(frac, raw)?;
            let scale = 10i128
                .checked_pow(frac.len() as u32)
                .ok_or_else(|| bad(raw, "too many decimal places"))?;
            let num = int_part
                .checked_mul(scale)
                .and_then(|v| v.checked_add(frac_part))
                .ok_or_else(|| bad(raw, "overflow"))?;
            return Dist::ratio(num, scale);
        }
        Ok(Dist(Ratio::from_integer(parse_uint(s, raw)?)))
    }
}

impl fmt::Display for Dist {
    /// Integers print bare, everything else as `p/q` in lowest terms.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Dist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<u32> for Dist {
    fn from(v: u32) -> Dist {
        Dist::from_int(v as u64)
    }
}

impl serde::Serialize for Dist {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
