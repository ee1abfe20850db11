//! Constructive t-weak sequencing.
//!
//! The pipeline splits a multiset `M` with support `S` into `M1` (every
//! element with multiplicity reduced by one) and the single remaining copy
//! of each support element, then
//!
//! 1. [`sequence_blocks`] lays out `M1` as runs of equal elements, buying a
//!    separator from a budget multiset whenever no remaining run fits;
//! 2. [`extend_greedy`] appends pool elements one at a time, always taking
//!    the first candidate that keeps the window condition;
//! 3. [`extend_randomized`] plants a zero-sum-free subset at the end in a
//!    uniformly random order, retrying until the whole sequencing checks
//!    out.
//!
//! [`sequence_multiset`] wires the stages together and falls back to the
//! exhaustive search for instances too small to meet the preconditions.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::bounds::{self, BoundsError};
use crate::group::{Element, Group};
use crate::multiset::{Multiset, MultisetError, Sequencing};
use crate::search::{self, SearchError, SearchOutcome};
use crate::seq::{verify_sums_t_weak, verify_t_weak};

#[derive(Debug, Error)]
pub enum SeqError {
    #[error(transparent)]
    Multiset(#[from] MultisetError),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error("group's smallest prime divisor {p} does not exceed the window t={t}")]
    SmallestPrimeTooSmall { p: u64, t: u32 },
    #[error("support size {n} does not exceed 2t^2 = {min} for t={t}")]
    SupportTooSmall { n: usize, t: u32, min: usize },
    #[error("pool of {have} elements is too small; at least {need} required")]
    PoolTooSmall { need: usize, have: usize },
    #[error("candidate pool must not contain the identity")]
    IdentityInPool,
    #[error("candidate pool entries must be distinct")]
    DuplicateInPool,
    #[error("subset must be drawn from the pool")]
    SubsetNotInPool,
    #[error("input sequencing is not t-weak for t={t}")]
    InputNotTWeak { t: u32 },
    #[error("separator budget exhausted after placing {placed} elements")]
    SeparatorExhausted { placed: usize },
    #[error("no zero-sum-free subset of size {ell} in the remaining pool")]
    NoZeroSumFreeSubset { ell: u64 },
    #[error("no valid tail ordering found in {attempts} attempts")]
    RetriesExhausted { attempts: u64 },
    #[error("exhaustive search proved that no t-weak sequencing exists")]
    ProvenImpossible,
    #[error("exhaustive search exceeded its node budget of {budget}")]
    Undecided { budget: u64 },
}

/// Which pipeline produced a sequencing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeqRoute {
    Constructive { separators: u64, attempts: u64 },
    BruteForce,
}

impl SeqRoute {
    pub fn label(&self) -> &'static str {
        match self {
            SeqRoute::Constructive { .. } => "constructive",
            SeqRoute::BruteForce => "brute-force",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SequenceResult {
    pub sequencing: Sequencing,
    pub route: SeqRoute,
}

/// Output of the block stage: the sequencing covers `m1` plus the
/// separators drawn from the budget.
#[derive(Debug, Clone)]
pub struct BlocksResult {
    pub sequencing: Sequencing,
    pub separators: Multiset,
}

/// True when appending `reps` copies of `x` keeps the window condition.
fn block_fits(g: &Group, sums: &[Element], x: Element, reps: u32, t: u32) -> bool {
    let t = t as usize;
    let mut recent: Vec<Element> = sums[sums.len().saturating_sub(t)..].to_vec();
    let mut acc = *sums.last().expect("sums start at the identity");
    for _ in 0..reps {
        acc = g.add(acc, x);
        if recent.contains(&acc) {
            return false;
        }
        recent.push(acc);
        if recent.len() > t {
            recent.remove(0);
        }
    }
    true
}

/// Sequences `m1` as contiguous runs of equal elements, preferring runs of
/// higher multiplicity (ties broken canonically). When no remaining run can
/// be appended, one separator is bought from `budget`: the first element,
/// in canonical order, that keeps the window condition *and* unblocks at
/// least one run. Each separator is therefore followed by a run, which caps
/// the number of separators by the number of runs still open at the first
/// blockage — at most t(t+1)/2 <= t^2, because a blocked run value is pinned
/// by one of at most t(t+1)/2 window constraints and `k·x` is injective in
/// `x` for `k <= t` below the smallest prime divisor.
pub fn sequence_blocks(
    g: &Group,
    m1: &Multiset,
    budget: &Multiset,
    t: u32,
) -> Result<BlocksResult, SeqError> {
    assert!(t >= 1, "window must be at least 1");
    let p = g.smallest_prime_divisor();
    if p <= t as u64 {
        return Err(SeqError::SmallestPrimeTooSmall { p, t });
    }

    let mut blocks: Vec<(Element, u32)> = m1.entries().to_vec();
    blocks.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));

    let mut order: Vec<Element> = Vec::with_capacity(m1.len() as usize);
    let mut sums: Vec<Element> = vec![g.zero()];
    let mut remaining_budget = budget.clone();
    let mut separators = Multiset::empty();

    let append = |order: &mut Vec<Element>, sums: &mut Vec<Element>, x: Element, reps: u32| {
        for _ in 0..reps {
            let next = g.add(*sums.last().unwrap(), x);
            order.push(x);
            sums.push(next);
        }
    };

    while !blocks.is_empty() {
        if let Some(i) = (0..blocks.len()).find(|&i| block_fits(g, &sums, blocks[i].0, blocks[i].1, t)) {
            let (x, reps) = blocks.remove(i);
            append(&mut order, &mut sums, x, reps);
            continue;
        }
        let separator = remaining_budget.entries().iter().map(|&(y, _)| y).find(|&y| {
            if !block_fits(g, &sums, y, 1, t) {
                return false;
            }
            let mut trial = sums.clone();
            trial.push(g.add(*sums.last().unwrap(), y));
            blocks.iter().any(|&(x, reps)| block_fits(g, &trial, x, reps, t))
        });
        match separator {
            Some(y) => {
                append(&mut order, &mut sums, y, 1);
                let one = Multiset::new(g, [(y, 1)])?;
                remaining_budget = remaining_budget.difference(&one);
                separators = separators.union(&one);
            }
            None => return Err(SeqError::SeparatorExhausted { placed: order.len() }),
        }
    }

    let sequencing = Sequencing::new(g, order, m1.union(&separators))?;
    Ok(BlocksResult { sequencing, separators })
}

fn validated_pool(g: &Group, pool: &[Element]) -> Result<Vec<Element>, SeqError> {
    if pool.iter().any(|&e| g.is_zero(e)) {
        return Err(SeqError::IdentityInPool);
    }
    let mut sorted = pool.to_vec();
    sorted.sort();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(SeqError::DuplicateInPool);
    }
    Ok(sorted)
}

/// Appends `h` elements of `pool` to a t-weak sequencing, each time taking
/// the first candidate in canonical order whose new partial sum avoids the
/// previous t sums. Needs `h <= |pool| - (t-1)`: a step excludes at most
/// t-1 candidates (the new sum already differs from its predecessor), so a
/// candidate always remains. Returns the extension and the unused pool.
pub fn extend_greedy(
    g: &Group,
    seq: &Sequencing,
    pool: &[Element],
    h: usize,
    t: u32,
) -> Result<(Sequencing, Vec<Element>), SeqError> {
    assert!(t >= 1, "window must be at least 1");
    let mut remaining = validated_pool(g, pool)?;
    if h + (t as usize - 1) > remaining.len() {
        return Err(SeqError::PoolTooSmall {
            need: h + t as usize - 1,
            have: remaining.len(),
        });
    }
    let mut sums = seq.partial_sums(g);
    if !verify_sums_t_weak(&sums, t).is_ok() {
        return Err(SeqError::InputNotTWeak { t });
    }
    let mut out = seq.clone();
    for _ in 0..h {
        let lo = sums.len().saturating_sub(t as usize);
        let pick = remaining
            .iter()
            .position(|&c| !sums[lo..].contains(&g.add(*sums.last().unwrap(), c)))
            .expect("window excludes at most t-1 of at least t candidates");
        let c = remaining.remove(pick);
        sums.push(g.add(*sums.last().unwrap(), c));
        out.push(g, c);
    }
    Ok((out, remaining))
}

/// Greedily extends by all of `pool \ subset` except t-1 leftovers, then
/// appends the leftovers and `subset` in a uniformly random order, retrying
/// until the full sequencing is t-weak. When `subset` is zero-sum-free of
/// size ell, each attempt fails with probability at most
/// `expectation_bound(t, ell)`, so for ell >= min_ell(t) this is a Las
/// Vegas loop; the property is not rechecked here because the check itself
/// is exponential in t and correctness of the output never depends on it.
/// Returns the sequencing and the number of attempts used.
pub fn extend_randomized(
    g: &Group,
    seq: &Sequencing,
    pool: &[Element],
    subset: &[Element],
    t: u32,
    max_attempts: u64,
    rng: &mut impl Rng,
) -> Result<(Sequencing, u64), SeqError> {
    assert!(t >= 1, "window must be at least 1");
    let pool = validated_pool(g, pool)?;
    let subset = validated_pool(g, subset)?;
    if subset.iter().any(|e| pool.binary_search(e).is_err()) {
        return Err(SeqError::SubsetNotInPool);
    }
    let rest: Vec<Element> = pool
        .iter()
        .copied()
        .filter(|e| subset.binary_search(e).is_err())
        .collect();
    let spare = t as usize - 1;
    if rest.len() < spare {
        return Err(SeqError::PoolTooSmall { need: spare, have: rest.len() });
    }
    let (base, leftovers) = extend_greedy(g, seq, &rest, rest.len() - spare, t)?;

    let mut tail: Vec<Element> = leftovers;
    tail.extend_from_slice(&subset);
    for attempt in 1..=max_attempts {
        let mut shuffled = tail.clone();
        shuffled.shuffle(rng);
        let mut candidate = base.clone();
        for &e in &shuffled {
            candidate.push(g, e);
        }
        if verify_t_weak(g, &candidate, t).is_ok() {
            return Ok((candidate, attempt));
        }
    }
    Err(SeqError::RetriesExhausted { attempts: max_attempts })
}

fn constructive(
    g: &Group,
    m: &Multiset,
    t: u32,
    seed: u64,
    max_attempts: u64,
) -> Result<SequenceResult, SeqError> {
    let m1 = Multiset::new(
        g,
        m.entries()
            .iter()
            .filter(|&&(_, mult)| mult > 1)
            .map(|&(e, mult)| (e, mult - 1)),
    )?;
    let support = m.support();
    let budget = Multiset::from_elements(g, support.iter().copied())?;
    let blocks = sequence_blocks(g, &m1, &budget, t)?;

    let pool: Vec<Element> = support
        .into_iter()
        .filter(|&e| !blocks.separators.contains(e))
        .collect();
    let ell = bounds::min_ell(t)?;
    let need = ell as usize + t as usize - 1;
    if pool.len() < need {
        return Err(SeqError::PoolTooSmall { need, have: pool.len() });
    }
    let subset = search::find_zero_sum_free_subset(g, &pool, t, ell as usize)?
        .ok_or(SeqError::NoZeroSumFreeSubset { ell })?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (sequencing, attempts) =
        extend_randomized(g, &blocks.sequencing, &pool, &subset, t, max_attempts, &mut rng)?;
    debug_assert_eq!(sequencing.source(), m);
    Ok(SequenceResult {
        sequencing,
        route: SeqRoute::Constructive {
            separators: blocks.separators.len(),
            attempts,
        },
    })
}

fn brute_force(g: &Group, m: &Multiset, t: u32) -> Result<SequenceResult, SeqError> {
    match search::brute_force_sequence(g, m, t, search::DEFAULT_NODE_BUDGET)? {
        SearchOutcome::Found(sequencing) => Ok(SequenceResult {
            sequencing,
            route: SeqRoute::BruteForce,
        }),
        SearchOutcome::ExhaustedNone => Err(SeqError::ProvenImpossible),
        SearchOutcome::BudgetExceeded => Err(SeqError::Undecided {
            budget: search::DEFAULT_NODE_BUDGET,
        }),
    }
}

/// Finds a t-weak sequencing of `m`. The constructive pipeline applies when
/// the smallest prime divisor exceeds t and the support has more than 2t^2
/// elements; otherwise — or when the pipeline cannot gather its pools — the
/// exhaustive search takes over for multisets within its size cap.
pub fn sequence_multiset(
    g: &Group,
    m: &Multiset,
    t: u32,
    seed: u64,
    max_attempts: u64,
) -> Result<SequenceResult, SeqError> {
    assert!(t >= 1, "window must be at least 1");
    let p = g.smallest_prime_divisor();
    let n = m.distinct_len();
    let small = m.len() <= search::MAX_SEQUENCE_SIZE;

    if p > t as u64 && n > 2 * (t as usize).pow(2) {
        match constructive(g, m, t, seed, max_attempts) {
            Ok(result) => return Ok(result),
            Err(
                e @ (SeqError::PoolTooSmall { .. }
                | SeqError::NoZeroSumFreeSubset { .. }
                | SeqError::SeparatorExhausted { .. }),
            ) => {
                if !small {
                    return Err(e);
                }
            }
            Err(e) => return Err(e),
        }
    } else if !small {
        if p <= t as u64 {
            return Err(SeqError::SmallestPrimeTooSmall { p, t });
        }
        return Err(SeqError::SupportTooSmall {
            n,
            t,
            min: 2 * (t as usize).pow(2),
        });
    }
    brute_force(g, m, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::verify_t_weak;

    fn cyc(v: u64) -> Group {
        Group::cyclic(v).unwrap()
    }

    fn els(g: &Group, xs: &[u64]) -> Vec<Element> {
        xs.iter().map(|&x| g.element(x)).collect()
    }

    fn order_indices(seq: &Sequencing) -> Vec<u64> {
        seq.order().iter().map(|e| e.index()).collect()
    }

    #[test]
    fn blocks_single_run() {
        let g = cyc(7);
        let m1 = Multiset::parse(&g, "1^2").unwrap();
        let budget = Multiset::parse(&g, "1,2,3,4,5,6").unwrap();
        let out = sequence_blocks(&g, &m1, &budget, 1).unwrap();
        assert_eq!(order_indices(&out.sequencing), vec![1, 1]);
        assert!(out.separators.is_empty());
    }

    #[test]
    fn blocks_follow_multiplicity_preference() {
        let g = cyc(11);
        let m1 = Multiset::parse(&g, "1^3,2^2,3").unwrap();
        let budget = Multiset::parse(&g, "4,5,6").unwrap();
        let out = sequence_blocks(&g, &m1, &budget, 1).unwrap();
        assert_eq!(order_indices(&out.sequencing), vec![1, 1, 1, 2, 2, 3]);
        assert!(out.separators.is_empty());

        let g7 = cyc(7);
        let m1 = Multiset::parse(&g7, "1,2^3").unwrap();
        let out = sequence_blocks(&g7, &m1, &Multiset::empty(), 1).unwrap();
        assert_eq!(order_indices(&out.sequencing), vec![2, 2, 2, 1]);

        // equal multiplicities fall back to canonical order
        let m1 = Multiset::parse(&g7, "5^2,3^2").unwrap();
        let out = sequence_blocks(&g7, &m1, &Multiset::empty(), 1).unwrap();
        assert_eq!(order_indices(&out.sequencing), vec![3, 3, 5, 5]);
    }

    #[test]
    fn blocks_empty_input() {
        let g = cyc(7);
        let out = sequence_blocks(&g, &Multiset::empty(), &Multiset::empty(), 2).unwrap();
        assert!(out.sequencing.is_empty());
        assert!(out.separators.is_empty());
    }

    #[test]
    fn blocks_buy_a_separator_when_stuck() {
        // After (1,1) the run of 10 collides two sums back: 2+10 = 1 = s_1.
        // Separator 1 keeps the window but still blocks 10 (3+10 = 2 = s_2),
        // so the canonical scan settles on 2.
        let g = cyc(11);
        let m1 = Multiset::parse(&g, "1^2,10").unwrap();
        let budget = Multiset::parse(&g, "1,2,3,4,5,6,7,8,9,10").unwrap();
        let out = sequence_blocks(&g, &m1, &budget, 2).unwrap();
        assert_eq!(order_indices(&out.sequencing), vec![1, 1, 2, 10]);
        assert_eq!(out.separators, Multiset::parse(&g, "2").unwrap());
        assert!(verify_t_weak(&g, &out.sequencing, 2).is_ok());
    }

    #[test]
    fn blocks_error_when_budget_cannot_unblock() {
        let g = cyc(11);
        let m1 = Multiset::parse(&g, "1^2,10").unwrap();
        let budget = Multiset::parse(&g, "1").unwrap();
        assert!(matches!(
            sequence_blocks(&g, &m1, &budget, 2),
            Err(SeqError::SeparatorExhausted { placed: 2 })
        ));
    }

    #[test]
    fn blocks_reject_small_prime() {
        let g = cyc(4);
        let m1 = Multiset::parse(&g, "1^2").unwrap();
        assert!(matches!(
            sequence_blocks(&g, &m1, &Multiset::empty(), 2),
            Err(SeqError::SmallestPrimeTooSmall { p: 2, t: 2 })
        ));
        assert!(sequence_blocks(&g, &m1, &Multiset::empty(), 1).is_ok());
    }

    #[test]
    fn greedy_takes_first_fitting_candidate() {
        let g = cyc(7);
        let seq = Sequencing::from_order(&g, els(&g, &[1])).unwrap();
        let (out, unused) = extend_greedy(&g, &seq, &els(&g, &[2, 3, 4]), 2, 1).unwrap();
        assert_eq!(order_indices(&out), vec![1, 2, 3]);
        assert_eq!(unused, els(&g, &[4]));

        let seq = Sequencing::from_order(&g, els(&g, &[3, 5, 1])).unwrap();
        let (out, _) = extend_greedy(&g, &seq, &els(&g, &[1, 2, 6]), 1, 1).unwrap();
        assert_eq!(order_indices(&out), vec![3, 5, 1, 1]);
    }

    #[test]
    fn greedy_skips_blocked_candidates() {
        // sums are (0, 3); candidate 4 would land on s_0 at distance 2
        let g = cyc(7);
        let seq = Sequencing::from_order(&g, els(&g, &[3])).unwrap();
        let (out, unused) = extend_greedy(&g, &seq, &els(&g, &[4, 5]), 1, 2).unwrap();
        assert_eq!(order_indices(&out), vec![3, 5]);
        assert_eq!(unused, els(&g, &[4]));
    }

    #[test]
    fn greedy_validates_inputs() {
        let g = cyc(7);
        let seq = Sequencing::empty();
        assert!(matches!(
            extend_greedy(&g, &seq, &els(&g, &[1, 2]), 2, 2),
            Err(SeqError::PoolTooSmall { need: 3, have: 2 })
        ));
        assert!(matches!(
            extend_greedy(&g, &seq, &els(&g, &[0, 1]), 1, 1),
            Err(SeqError::IdentityInPool)
        ));
        assert!(matches!(
            extend_greedy(&g, &seq, &els(&g, &[1, 1]), 1, 1),
            Err(SeqError::DuplicateInPool)
        ));
        let bad = Sequencing::from_order(&g, els(&g, &[1, 6])).unwrap();
        assert!(matches!(
            extend_greedy(&g, &bad, &els(&g, &[2, 3]), 1, 2),
            Err(SeqError::InputNotTWeak { t: 2 })
        ));
    }

    #[test]
    fn randomized_tail_covers_the_pool() {
        let g = cyc(7);
        let pool = els(&g, &[1, 2, 3]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (out, attempts) =
            extend_randomized(&g, &Sequencing::empty(), &pool, &pool, 1, 10, &mut rng).unwrap();
        assert_eq!(attempts, 1, "any ordering of nonzero elements is 1-weak");
        assert!(verify_t_weak(&g, &out, 1).is_ok());
        assert_eq!(out.source(), &Multiset::from_elements(&g, pool).unwrap());
    }

    #[test]
    fn randomized_window_two() {
        let g = cyc(11);
        let pool = els(&g, &[1, 2, 3, 4, 5, 6]);
        let subset = els(&g, &[1, 2, 3, 4, 5]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (out, attempts) =
            extend_randomized(&g, &Sequencing::empty(), &pool, &subset, 2, 500, &mut rng)
                .unwrap();
        assert!(attempts >= 1);
        assert!(verify_t_weak(&g, &out, 2).is_ok());
        assert_eq!(out.len(), 6);
    }

    #[test]
    fn randomized_needs_leftover_room() {
        // pool == subset leaves nothing for the t-1 leftovers when t=2
        let g = cyc(7);
        let pool = els(&g, &[1, 2, 3]);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(
            extend_randomized(&g, &Sequencing::empty(), &pool, &pool, 2, 10, &mut rng),
            Err(SeqError::PoolTooSmall { need: 1, have: 0 })
        ));
    }

    #[test]
    fn randomized_rejects_foreign_subset() {
        let g = cyc(7);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(
            extend_randomized(
                &g,
                &Sequencing::empty(),
                &els(&g, &[1, 2]),
                &els(&g, &[3]),
                1,
                10,
                &mut rng
            ),
            Err(SeqError::SubsetNotInPool)
        ));
    }

    #[test]
    fn pipeline_all_singletons() {
        let g = cyc(7);
        let m = Multiset::parse(&g, "1,2,3").unwrap();
        let r = sequence_multiset(&g, &m, 1, 0, 100).unwrap();
        assert!(matches!(r.route, SeqRoute::Constructive { separators: 0, attempts: 1 }));
        assert!(verify_t_weak(&g, &r.sequencing, 1).is_ok());
        assert_eq!(r.sequencing.source(), &m);
    }

    #[test]
    fn pipeline_window_two() {
        let g = cyc(101);
        let m = Multiset::new(
            &g,
            (1..=20).map(|x| (g.element(x), if x <= 3 { 2 } else { 1 })),
        )
        .unwrap();
        let r = sequence_multiset(&g, &m, 2, 7, 50_000).unwrap();
        match r.route {
            SeqRoute::Constructive { attempts, .. } => assert!(attempts >= 1),
            SeqRoute::BruteForce => panic!("expected the constructive route"),
        }
        assert!(verify_t_weak(&g, &r.sequencing, 2).is_ok());
        assert_eq!(r.sequencing.source(), &m);
    }

    #[test]
    fn pipeline_small_instances_take_brute_force() {
        let g = cyc(5);
        let m = Multiset::parse(&g, "1^2,2").unwrap();
        let r = sequence_multiset(&g, &m, 2, 0, 100).unwrap();
        assert_eq!(r.route, SeqRoute::BruteForce);
        assert!(verify_t_weak(&g, &r.sequencing, 2).is_ok());
    }

    #[test]
    fn pipeline_reports_proven_impossibility() {
        // (1,4) and (4,1) both revisit the identity two steps apart
        let g = cyc(5);
        let m = Multiset::parse(&g, "1,4").unwrap();
        assert!(matches!(
            sequence_multiset(&g, &m, 2, 0, 100),
            Err(SeqError::ProvenImpossible)
        ));
    }

    #[test]
    fn pipeline_rejects_oversized_without_preconditions() {
        let g = cyc(5);
        let m = Multiset::parse(&g, "1^13").unwrap();
        assert!(matches!(
            sequence_multiset(&g, &m, 2, 0, 100),
            Err(SeqError::SupportTooSmall { n: 1, t: 2, min: 8 })
        ));
        let g4 = cyc(4);
        let m = Multiset::parse(&g4, "1^13").unwrap();
        assert!(matches!(
            sequence_multiset(&g4, &m, 2, 0, 100),
            Err(SeqError::SmallestPrimeTooSmall { p: 2, t: 2 })
        ));
    }

    #[test]
    fn pipeline_is_deterministic_per_seed() {
        let g = cyc(101);
        let m = Multiset::new(&g, (1..=20).map(|x| (g.element(x), 1))).unwrap();
        let a = sequence_multiset(&g, &m, 2, 42, 50_000).unwrap();
        let b = sequence_multiset(&g, &m, 2, 42, 50_000).unwrap();
        assert_eq!(a.sequencing.order(), b.sequencing.order());
        let c = sequence_multiset(&g, &m, 2, 43, 50_000).unwrap();
        assert!(verify_t_weak(&g, &c.sequencing, 2).is_ok());
    }

    #[test]
    fn pipeline_handles_empty_multiset() {
        let g = cyc(7);
        let r = sequence_multiset(&g, &Multiset::empty(), 3, 0, 10).unwrap();
        assert!(r.sequencing.is_empty());
        assert_eq!(r.route, SeqRoute::BruteForce);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_blocks_case() -> impl Strategy<Value = (u64, Vec<(u64, u32)>, u32)> {
            let primes = prop_oneof![Just(5u64), Just(7), Just(11), Just(13)];
            (primes, 1u32..3).prop_flat_map(|(v, t)| {
                let entries = proptest::collection::vec((1..v, 1u32..4), 0..4);
                (Just(v), entries, Just(t))
            })
        }

        proptest! {
            #[test]
            fn blocks_respect_separator_cap((v, raw, t) in arb_blocks_case()) {
                let g = Group::cyclic(v).unwrap();
                let m1 = match Multiset::new(&g, raw.iter().map(|&(x, c)| (g.element(x), c))) {
                    Ok(m) => m,
                    Err(_) => return Ok(()),
                };
                let budget = Multiset::from_elements(&g, g.elements().skip(1)).unwrap();
                if let Ok(out) = sequence_blocks(&g, &m1, &budget, t) {
                    prop_assert!(out.separators.len() <= (t as u64).pow(2));
                    prop_assert!(verify_t_weak(&g, &out.sequencing, t).is_ok());
                    prop_assert!(m1.subset_of(out.sequencing.source()));
                    prop_assert_eq!(
                        &out.sequencing.source().difference(&m1),
                        &out.separators
                    );
                }
            }
        }
    }
}
