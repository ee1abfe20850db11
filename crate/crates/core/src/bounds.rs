//! Exact first-moment bound for the randomized extension stage.
//!
//! For a window `t` and a zero-sum-free subset of size `ell`, the expected
//! number of window collisions in a uniformly random tail ordering is at
//! most
//!
//! ```text
//! t^2/ell + (t (ell + t) / ell) * (1 - (ell - (t-1))^t / (ell + t)^t)
//! ```
//!
//! evaluated here in exact rational arithmetic. The bound drops below 1 at
//! `min_ell(t)`, which is where a Las Vegas retry loop gets a constant
//! per-attempt success probability.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use thiserror::Error;

/// Scan cap for [`min_ell`].
pub const MIN_ELL_SCAN_CAP: u64 = 10_000_000;

#[derive(Debug, Error)]
pub enum BoundsError {
    #[error("no ell below the scan cap {cap} brings the t={t} bound under 1")]
    ScanCapExceeded { t: u32, cap: u64 },
}

/// The bound for one `(t, ell)` pair.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub t: u32,
    pub ell: u64,
    pub bound: BigRational,
}

impl BoundReport {
    pub fn bound_f64(&self) -> f64 {
        self.bound.to_f64().unwrap_or(f64::INFINITY)
    }

    /// `num/den` in lowest terms.
    pub fn bound_rational(&self) -> String {
        if self.bound.is_integer() {
            self.bound.numer().to_string()
        } else {
            format!("{}/{}", self.bound.numer(), self.bound.denom())
        }
    }
}

fn big(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Evaluates the collision-expectation bound exactly. Both arguments must
/// be at least 1.
pub fn expectation_bound(t: u32, ell: u64) -> BoundReport {
    assert!(t >= 1, "window must be at least 1");
    assert!(ell >= 1, "subset size must be at least 1");
    let tq = big(t as i64);
    let ellq = big(ell as i64);
    let ratio = (&ellq - (&tq - big(1))).pow(t as i32) / (&ellq + &tq).pow(t as i32);
    let bound =
        &tq * &tq / &ellq + &tq * (&ellq + &tq) / &ellq * (big(1) - ratio);
    BoundReport { t, ell, bound }
}

/// Smallest `ell` whose bound is strictly below 1, scanning upward.
pub fn min_ell(t: u32) -> Result<u64, BoundsError> {
    min_ell_capped(t, MIN_ELL_SCAN_CAP)
}

pub fn min_ell_capped(t: u32, cap: u64) -> Result<u64, BoundsError> {
    for ell in 1..=cap {
        if expectation_bound(t, ell).bound < BigRational::one() {
            return Ok(ell);
        }
    }
    Err(BoundsError::ScanCapExceeded { t, cap })
}

/// A bound is meaningful for retry loops only when positive; exposed for
/// reporting sanity checks.
pub fn bound_is_positive(report: &BoundReport) -> bool {
    report.bound.is_positive()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: the same expression as a single i128 fraction,
    ///   [t^2 B + t (ell+t) (B - A)] / (ell B)
    /// with A = (ell-(t-1))^t and B = (ell+t)^t. Valid for t <= 5 and
    /// ell <= 10^4 without overflow.
    fn oracle_fraction(t: u32, ell: u64) -> (i128, i128) {
        let t = t as i128;
        let ell = ell as i128;
        let a = (ell - (t - 1)).pow(t as u32);
        let b = (ell + t).pow(t as u32);
        (t * t * b + t * (ell + t) * (b - a), ell * b)
    }

    fn oracle_lt_one(t: u32, ell: u64) -> bool {
        let (num, den) = oracle_fraction(t, ell);
        num < den
    }

    #[test]
    fn frozen_values_for_t1() {
        let r = expectation_bound(1, 4);
        assert_eq!(r.bound_rational(), "1/2");
        assert_eq!(r.bound_f64(), 0.5);
        let r = expectation_bound(1, 2);
        assert_eq!(r.bound_rational(), "1");
    }

    #[test]
    fn t1_bound_is_exactly_two_over_ell() {
        for ell in 1..=1000u64 {
            let r = expectation_bound(1, ell);
            assert_eq!(r.bound, big(2) / big(ell as i64), "ell={ell}");
        }
    }

    #[test]
    fn matches_i128_oracle() {
        for t in 1..=5u32 {
            for ell in 1..=400u64 {
                let (num, den) = oracle_fraction(t, ell);
                let expect = BigRational::new(BigInt::from(num), BigInt::from(den));
                assert_eq!(expectation_bound(t, ell).bound, expect, "t={t} ell={ell}");
            }
        }
    }

    #[test]
    fn min_ell_frozen_and_oracle_checked() {
        assert_eq!(min_ell(1).unwrap(), 3);
        assert_eq!(min_ell(2).unwrap(), 15);
        for t in 1..=5u32 {
            let got = min_ell(t).unwrap();
            let scan = (1..).find(|&ell| oracle_lt_one(t, ell)).unwrap();
            assert_eq!(got, scan, "t={t}");
        }
    }

    #[test]
    fn scan_cap_reported() {
        assert!(matches!(
            min_ell_capped(3, 5),
            Err(BoundsError::ScanCapExceeded { t: 3, cap: 5 })
        ));
    }

    #[test]
    fn monotone_decreasing_past_min_ell() {
        for t in 1..=4u32 {
            let start = min_ell(t).unwrap();
            let mut prev = expectation_bound(t, start).bound;
            for ell in (start + 1)..=(10 * start) {
                let next = expectation_bound(t, ell).bound;
                assert!(next < prev, "t={t} ell={ell}");
                prev = next;
            }
        }
    }

    #[test]
    fn rational_tracks_floating_evaluation() {
        for t in 1..=5u32 {
            for ell in [1u64, 2, 3, 7, 50, 313, 9999] {
                let tf = t as f64;
                let ef = ell as f64;
                let float = tf * tf / ef
                    + tf * (ef + tf) / ef * (1.0 - ((ef - (tf - 1.0)) / (ef + tf)).powi(t as i32));
                let exact = expectation_bound(t, ell).bound_f64();
                let denom = exact.abs().max(1e-12);
                assert!(
                    ((exact - float) / denom).abs() < 1e-9,
                    "t={t} ell={ell}: {exact} vs {float}"
                );
            }
        }
    }
}
