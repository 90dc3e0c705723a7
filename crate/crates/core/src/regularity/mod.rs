//! Valuation-exact regularity probes: Hölder exponents, boundedness of
//! divided differences over separation sweeps, and the packaged
//! counterexample separating the fixed-direction calculus from the
//! divided-difference calculus.

mod counterexample;
mod holder;
mod scans;

pub use counterexample::{counterexample_report, CounterexampleReport};
pub use holder::{holder_estimate, HolderReport};
pub use scans::{
    blowup_law_holds, blowup_probe, c2_blowup_scan, dd_boundedness_scan, BlowupRow, ScanRow,
};

use serde::Serialize;

/// Exact rational, reduced with positive denominator.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct Rational {
    pub num: i64,
    pub den: i64,
}

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0);
        let sign = if den < 0 { -1 } else { 1 };
        let g = gcd(num.unsigned_abs(), den.unsigned_abs()) as i64;
        Rational {
            num: sign * num / g,
            den: sign * den / g,
        }
    }

    /// self < other, exactly.
    pub fn lt(&self, other: &Rational) -> bool {
        self.num * other.den < other.num * self.den
    }
}

impl std::fmt::Display for Rational {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn ceil_div(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    a.div_euclid(b) + if a.rem_euclid(b) != 0 { 1 } else { 0 }
}
