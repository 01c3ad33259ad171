//! Exact membership grades in the closed unit interval.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// Maximum number of fractional digits accepted (and emitted) in decimal form.
pub const MAX_DECIMAL_DIGITS: u32 = 18;

/// A membership grade: an exact rational number in `[0, 1]`.
///
/// Only `min` and `max` are ever applied to grades, so no arithmetic can
/// produce a value that was not already present in the input.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Grade(Ratio<u64>);

impl Grade {
    pub const ZERO: Grade = Grade(Ratio::new_raw(0, 1));
    pub const ONE: Grade = Grade(Ratio::new_raw(1, 1));

    /// Builds `numer / denom`, rejecting a zero denominator or a value above one.
    pub fn new(numer: u64, denom: u64) -> Result<Self, Error> {
        if denom == 0 {
            return Err(Error::InvalidGrade(format!("{numer}/{denom}: zero denominator")));
        }
        if numer > denom {
            return Err(Error::InvalidGrade(format!("{numer}/{denom}: exceeds 1")));
        }
        Ok(Grade(Ratio::new(numer, denom)))
    }

    /// Shorthand for tests and fixtures; panics on an invalid grade.
    pub fn ratio(numer: u64, denom: u64) -> Self {
        Self::new(numer, denom).expect("valid grade")
    }

    pub fn numer(&self) -> u64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> u64 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.numer() == 0
    }

    pub fn is_positive(&self) -> bool {
        !self.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.numer() == self.denom()
    }

    /// Lattice meet (`∧`, minimum).
    pub fn meet(self, other: Grade) -> Grade {
        self.min(other)
    }

    /// Lattice join (`∨`, maximum).
    pub fn join(self, other: Grade) -> Grade {
        self.max(other)
    }

    /// Approximate value, for display and diagnostics only.
    pub fn to_f64(&self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }

    /// Terminating decimal expansion with at most [`MAX_DECIMAL_DIGITS`]
    /// fractional digits, if one exists.
    fn decimal_form(&self) -> Option<String> {
        let (n, d) = (self.numer(), self.denom());
        if n == d {
            return Some("1".to_string());
        }
        if n == 0 {
            return Some("0".to_string());
        }
        let mut rest = d;
        let (mut twos, mut fives) = (0u32, 0u32);
        while rest % 2 == 0 {
            rest /= 2;
            twos += 1;
        }
        while rest % 5 == 0 {
            rest /= 5;
            fives += 1;
        }
        if rest != 1 {
            return None;
        }
        let digits = twos.max(fives);
        if digits > MAX_DECIMAL_DIGITS {
            return None;
        }
        // n/d = n * (10^digits / d) / 10^digits, and n < d keeps this below 10^18.
        let scale = 10u128.pow(digits) / d as u128;
        let scaled = n as u128 * scale;
        let mut frac = format!("{scaled:0width$}", width = digits as usize);
        while frac.ends_with('0') {
            frac.pop();
        }
        Some(format!("0.{frac}"))
    }
}

impl Default for Grade {
    fn default() -> Self {
        Grade::ZERO
    }
}

/// Canonical text: shortest decimal when the expansion terminates within
/// [`MAX_DECIMAL_DIGITS`] digits, otherwise the lowest-terms fraction `p/q`.
impl fmt::Display for Grade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.decimal_form() {
            Some(s) => f.write_str(&s),
            None => write!(f, "{}/{}", self.numer(), self.denom()),
        }
    }
}

impl fmt::Debug for Grade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_u64(text: &str, whole: &str) -> Result<u64, Error> {
    if text.is_empty() || !text.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::InvalidGrade(format!("{whole:?}: not a number")));
    }
    text.parse::<u64>().map_err(|_| Error::InvalidGrade(format!("{whole:?}: out of range")))
}

impl FromStr for Grade {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let text = s.trim();
        if let Some((p, q)) = text.split_once('/') {
            let numer = parse_u64(p.trim(), s)?;
            let denom = parse_u64(q.trim(), s)?;
            return Grade::new(numer, denom);
        }
        let (int_part, frac_part) = match text.split_once('.') {
            Some((i, f)) => (i, f),
            None => (text, ""),
        };
        let int_part = if int_part.is_empty() && !frac_part.is_empty() { "0" } else { int_part };
        let int_value = parse_u64(int_part, s)?;
        if frac_part.len() > MAX_DECIMAL_DIGITS as usize {
            return Err(Error::InvalidGrade(format!("{s:?}: more than {MAX_DECIMAL_DIGITS} fractional digits")));
        }
        if text.contains('.') && frac_part.is_empty() {
            return Err(Error::InvalidGrade(format!("{s:?}: missing fractional digits")));
        }
        let frac_value = if frac_part.is_empty() { 0 } else { parse_u64(frac_part, s)? };
        let denom = 10u64.pow(frac_part.len() as u32);
        if int_value > 1 || (int_value == 1 && frac_value != 0) {
            return Err(Error::InvalidGrade(format!("{s:?}: exceeds 1")));
        }
        let numer = int_value * denom + frac_value;
        let g = numer.gcd(&denom);
        Grade::new(numer / g, denom / g)
    }
}

impl Serialize for Grade {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Grade {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Meet of an iterator of grades; the empty meet is one.
pub fn meet_all<I: IntoIterator<Item = Grade>>(grades: I) -> Grade {
    grades.into_iter().fold(Grade::ONE, Grade::meet)
}

/// Join of an iterator of grades; the empty join is zero.
pub fn join_all<I: IntoIterator<Item = Grade>>(grades: I) -> Grade {
    grades.into_iter().fold(Grade::ZERO, Grade::join)
}
