//! Minimal exact rational used for baselines, means, and report values.
//!
//! All solver-facing quantities are scaled integers; the only places a true
//! rational appears are `|E|/n`-style bounds and enumeration means, so a
//! reduced `i128` fraction is enough. Overflow on these magnitudes would
//! require edge weights far beyond the parser's 64-bit range, so arithmetic
//! panics rather than returning errors.

use std::cmp::Ordering;
use std::fmt;

/// A reduced exact fraction with a strictly positive denominator.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Ratio {
    num: i128,
    den: i128,
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Ratio {
    pub fn new(num: i128, den: i128) -> Self {
        assert!(den != 0, "zero denominator");
        let sign = if den < 0 { -1 } else { 1 };
        let g = gcd(num, den).max(1);
        Ratio {
            num: sign * num / g,
            den: sign * den / g,
        }
    }

    pub fn from_int(v: i128) -> Self {
        Ratio { num: v, den: 1 }
    }

    pub fn zero() -> Self {
        Ratio { num: 0, den: 1 }
    }

    pub fn numer(&self) -> i128 {
        self.num
    }

    pub fn denom(&self) -> i128 {
        self.den
    }

    pub fn is_integer(&self) -> bool {
        self.den == 1
    }

    pub fn add(&self, other: &Ratio) -> Ratio {
        let num = self
            .num
            .checked_mul(other.den)
            .and_then(|a| other.num.checked_mul(self.den).and_then(|b| a.checked_add(b)))
            .expect("ratio overflow");
        let den = self.den.checked_mul(other.den).expect("ratio overflow");
        Ratio::new(num, den)
    }

    pub fn sub(&self, other: &Ratio) -> Ratio {
        self.add(&Ratio::new(-other.num, other.den))
    }

    pub fn mul_int(&self, k: i128) -> Ratio {
        Ratio::new(self.num.checked_mul(k).expect("ratio overflow"), self.den)
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> Ordering {
        let lhs = self.num.checked_mul(other.den).expect("ratio overflow");
        let rhs = other.num.checked_mul(self.den).expect("ratio overflow");
        lhs.cmp(&rhs)
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}
