//! t-weak sequencing verification.
//!
//! A sequencing `y_1, ..., y_m` is t-weak when its partial sums satisfy
//! `s_i != s_j` for all `0 <= i < j <= m` with `j - i <= t`.

use crate::group::{Element, Group};
use crate::multiset::Sequencing;

/// Outcome of a t-weakness check. A violation reports the lexicographically
/// first offending index pair into the partial-sum list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeqVerdict {
    Ok,
    Violation { i: usize, j: usize },
}

impl SeqVerdict {
    pub fn is_ok(self) -> bool {
        matches!(self, SeqVerdict::Ok)
    }
}

/// Left-accumulated partial sums of a sequencing, starting at the identity.
pub fn partial_sums(g: &Group, seq: &Sequencing) -> Vec<Element> {
    seq.partial_sums(g)
}

/// Lexicographically first pair of equal points at index distance 1..=t.
pub fn first_window_collision(points: &[Element], t: u32) -> Option<(usize, usize)> {
    let t = t as usize;
    for i in 0..points.len() {
        let hi = (i + t).min(points.len().saturating_sub(1));
        for j in (i + 1)..=hi {
            if points[i] == points[j] {
                return Some((i, j));
            }
        }
    }
    None
}

/// Number of pairs of equal points at index distance 1..=t.
pub fn count_window_collisions(points: &[Element], t: u32) -> u64 {
    let t = t as usize;
    let mut count = 0;
    for i in 0..points.len() {
        let hi = (i + t).min(points.len().saturating_sub(1));
        for j in (i + 1)..=hi {
            if points[i] == points[j] {
                count += 1;
            }
        }
    }
    count
}

/// Checks the window condition on a precomputed partial-sum list.
pub fn verify_sums_t_weak(sums: &[Element], t: u32) -> SeqVerdict {
    match first_window_collision(sums, t) {
        Some((i, j)) => SeqVerdict::Violation { i, j },
        None => SeqVerdict::Ok,
    }
}

/// Checks whether a sequencing is t-weak.
pub fn verify_t_weak(g: &Group, seq: &Sequencing, t: u32) -> SeqVerdict {
    verify_sums_t_weak(&seq.partial_sums(g), t)
}
