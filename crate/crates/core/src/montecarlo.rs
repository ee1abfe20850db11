//! Monte Carlo simulation of the randomized tail stage.
//!
//! The experiment mirrors the production pipeline exactly: a fixed t-weak
//! prefix, then a uniformly random ordering of `tail_pool` (the t-1
//! elements the greedy stage left over, together with a zero-sum-free
//! subset of size ell). The random variable X counts partial-sum pairs at
//! index distance <= t that coincide; `expectation_bound(t, ell)` is an
//! upper bound on E(X), and the harness reports how the empirical mean
//! compares.
//!
//! Trials use one ChaCha stream per trial index, so the parallel and
//! sequential runners produce identical reports (the accumulators are
//! exact integers, making the merge order irrelevant).

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use thiserror::Error;

use crate::bounds::{expectation_bound, BoundReport, BoundsError};
use crate::construct::{extend_greedy, SeqError};
use crate::group::{Element, Group};
use crate::multiset::Sequencing;
use crate::search::{find_zero_sum_free_subset, SearchError};
use crate::seq::{count_window_collisions, first_window_collision};

#[derive(Debug, Error)]
pub enum McError {
    #[error("at least one trial is required")]
    NoTrials,
    #[error("the zero-sum-free subset must be nonempty")]
    EmptySubset,
    #[error("tail pool must hold exactly t-1 = {need} elements beyond the subset, found {have}")]
    TailPoolSize { have: usize, need: usize },
    #[error("subset is not contained in the tail pool")]
    SubsetNotInTail,
    #[error("scenario sets are inconsistent: {0}")]
    PoolMismatch(&'static str),
    #[error("scenario sets may not contain the identity")]
    IdentityInPool,
    #[error("scenario sets must have distinct elements")]
    DuplicateInPool,
    #[error("prefix is not t-weak: partial sums {i} and {j} coincide")]
    PrefixHasCollisions { i: usize, j: usize },
    #[error("scenario needs at least ell + t - 1 = {need} elements, requested {have}")]
    SetTooSmall { need: usize, have: usize },
    #[error("requested {want} distinct non-identity elements but the group has {available}")]
    SetTooLarge { want: usize, available: u64 },
    #[error("found no zero-sum-free subset of size {ell} in the sampled set")]
    NoZeroSumFreeSubset { ell: u64 },
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Seq(#[from] SeqError),
}

/// Pooled collision statistics against the analytical bound. The integer
/// sums are the ground truth; mean and standard error are derived views.
#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloReport {
    pub t: u32,
    pub ell: u64,
    pub trials: u64,
    pub sum_x: u64,
    pub sum_x_sq: u128,
    pub bound: BoundReport,
}

impl MonteCarloReport {
    pub fn mean_x(&self) -> f64 {
        self.sum_x as f64 / self.trials as f64
    }

    pub fn std_err(&self) -> f64 {
        if self.trials < 2 {
            return 0.0;
        }
        let n = self.trials as f64;
        let mean = self.mean_x();
        let var = (self.sum_x_sq as f64 - n * mean * mean) / (n - 1.0);
        (var.max(0.0) / n).sqrt()
    }

    /// Whether the empirical mean stays below the bound plus `k` standard
    /// errors.
    pub fn within_std_err(&self, k: f64) -> bool {
        self.mean_x() <= self.bound.bound_f64() + k * self.std_err()
    }
}

fn validated_set(set: &[Element], g: &Group) -> Result<Vec<Element>, McError> {
    if set.iter().any(|&e| g.is_zero(e)) {
        return Err(McError::IdentityInPool);
    }
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(McError::DuplicateInPool);
    }
    Ok(sorted)
}

struct Prepared {
    base_sums: Vec<Element>,
    tail: Vec<Element>,
    bound: BoundReport,
}

fn prepare(
    g: &Group,
    prefix: &Sequencing,
    u_prime: &[Element],
    tail_pool: &[Element],
    subset: &[Element],
    t: u32,
    trials: u64,
) -> Result<Prepared, McError> {
    assert!(t >= 1, "window must be at least 1");
    if trials == 0 {
        return Err(McError::NoTrials);
    }
    if subset.is_empty() {
        return Err(McError::EmptySubset);
    }
    let tail_sorted = validated_set(tail_pool, g)?;
    let subset_sorted = validated_set(subset, g)?;
    let pool_sorted = validated_set(u_prime, g)?;
    if !subset_sorted.iter().all(|e| tail_sorted.binary_search(e).is_ok()) {
        return Err(McError::SubsetNotInTail);
    }
    let leftovers = tail_sorted.len() - subset_sorted.len();
    if leftovers != t as usize - 1 {
        return Err(McError::TailPoolSize { have: leftovers, need: t as usize - 1 });
    }
    if !tail_sorted.iter().all(|e| pool_sorted.binary_search(e).is_ok()) {
        return Err(McError::PoolMismatch("tail pool escapes the stage pool"));
    }
    let placed: Vec<Element> = prefix.order().to_vec();
    if pool_sorted
        .iter()
        .any(|e| tail_sorted.binary_search(e).is_err() && !placed.contains(e))
    {
        return Err(McError::PoolMismatch("stage pool element neither placed nor in the tail"));
    }

    let base_sums = prefix.partial_sums(g);
    if let Some((i, j)) = first_window_collision(&base_sums, t) {
        return Err(McError::PrefixHasCollisions { i, j });
    }
    let bound = expectation_bound(t, subset_sorted.len() as u64);
    Ok(Prepared { base_sums, tail: tail_sorted, bound })
}

fn run_trial(g: &Group, prep: &Prepared, t: u32, seed: u64, trial: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let mut order = prep.tail.clone();
    order.shuffle(&mut rng);
    let mut points = prep.base_sums.clone();
    let mut acc = *points.last().expect("partial sums include s_0");
    for &y in &order {
        acc = g.add(acc, y);
        points.push(acc);
    }
    count_window_collisions(&points, t)
}

fn assemble(t: u32, trials: u64, bound: BoundReport, sums: (u64, u128)) -> MonteCarloReport {
    MonteCarloReport {
        t,
        ell: bound.ell,
        trials,
        sum_x: sums.0,
        sum_x_sq: sums.1,
        bound,
    }
}

#[allow(clippy::too_many_arguments)]
pub fn monte_carlo_sequential(
    g: &Group,
    prefix: &Sequencing,
    u_prime: &[Element],
    tail_pool: &[Element],
    subset: &[Element],
    t: u32,
    trials: u64,
    seed: u64,
) -> Result<MonteCarloReport, McError> {
    let prep = prepare(g, prefix, u_prime, tail_pool, subset, t, trials)?;
    let mut sum_x = 0u64;
    let mut sum_x_sq = 0u128;
    for i in 0..trials {
        let x = run_trial(g, &prep, t, seed, i);
        sum_x += x;
        sum_x_sq += (x as u128) * (x as u128);
    }
    Ok(assemble(t, trials, prep.bound, (sum_x, sum_x_sq)))
}

#[cfg(feature = "parallel")]
#[allow(clippy::too_many_arguments)]
pub fn monte_carlo_parallel(
    g: &Group,
    prefix: &Sequencing,
    u_prime: &[Element],
    tail_pool: &[Element],
    subset: &[Element],
    t: u32,
    trials: u64,
    seed: u64,
) -> Result<MonteCarloReport, McError> {
    let prep = prepare(g, prefix, u_prime, tail_pool, subset, t, trials)?;
    let sums = (0..trials)
        .into_par_iter()
        .map(|i| {
            let x = run_trial(g, &prep, t, seed, i);
            (x, (x as u128) * (x as u128))
        })
        .reduce(|| (0u64, 0u128), |a, b| (a.0 + b.0, a.1 + b.1));
    Ok(assemble(t, trials, prep.bound, sums))
}

/// Runs the collision experiment: `trials` uniform orderings of
/// `tail_pool` appended to the fixed `prefix`. `u_prime` is the full pool
/// of the randomized stage, `subset` its zero-sum-free part of size ell.
/// Dispatches to the parallel runner when the feature is enabled; both
/// runners produce identical reports for the same seed.
#[allow(clippy::too_many_arguments)]
pub fn monte_carlo_expectation(
    g: &Group,
    prefix: &Sequencing,
    u_prime: &[Element],
    tail_pool: &[Element],
    subset: &[Element],
    t: u32,
    trials: u64,
    seed: u64,
) -> Result<MonteCarloReport, McError> {
    #[cfg(feature = "parallel")]
    {
        monte_carlo_parallel(g, prefix, u_prime, tail_pool, subset, t, trials, seed)
    }
    #[cfg(not(feature = "parallel"))]
    {
        monte_carlo_sequential(g, prefix, u_prime, tail_pool, subset, t, trials, seed)
    }
}

/// A self-contained instance of the experiment over one group.
#[derive(Debug, Clone)]
pub struct Scenario<'a> {
    pub group: &'a Group,
    pub prefix: Sequencing,
    pub u_prime: Vec<Element>,
    pub tail_pool: Vec<Element>,
    pub subset: Vec<Element>,
    pub t: u32,
}

impl Scenario<'_> {
    pub fn run(&self, trials: u64, seed: u64) -> Result<MonteCarloReport, McError> {
        monte_carlo_expectation(
            self.group,
            &self.prefix,
            &self.u_prime,
            &self.tail_pool,
            &self.subset,
            self.t,
            trials,
            seed,
        )
    }
}

/// Samples `set_size` distinct non-identity elements, carves out a
/// zero-sum-free subset of size `ell`, runs the greedy stage on the rest
/// (holding back t-1 leftovers) and packages everything as a [`Scenario`].
/// The sample is drawn on a dedicated ChaCha stream so trial streams stay
/// untouched.
pub fn build_scenario(
    g: &Group,
    t: u32,
    ell: u64,
    set_size: usize,
    seed: u64,
) -> Result<Scenario<'_>, McError> {
    assert!(t >= 1, "window must be at least 1");
    assert!(ell >= 1, "subset size must be at least 1");
    let need = ell as usize + t as usize - 1;
    if set_size < need {
        return Err(McError::SetTooSmall { need, have: set_size });
    }
    let available = g.order() - 1;
    if set_size as u64 > available {
        return Err(McError::SetTooLarge { want: set_size, available });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(u64::MAX);
    let mut sample: Vec<Element> = rand::seq::index::sample(&mut rng, available as usize, set_size)
        .iter()
        .map(|i| g.element(i as u64 + 1))
        .collect();
    sample.sort_unstable();

    let subset = find_zero_sum_free_subset(g, &sample, t, ell as usize)?
        .ok_or(McError::NoZeroSumFreeSubset { ell })?;
    let rest: Vec<Element> = sample
        .iter()
        .copied()
        .filter(|e| subset.binary_search(e).is_err())
        .collect();
    let h = rest.len() - (t as usize - 1);
    let (prefix, leftovers) = extend_greedy(g, &Sequencing::empty(), &rest, h, t)?;
    let mut tail_pool = leftovers;
    tail_pool.extend(&subset);
    tail_pool.sort_unstable();

    Ok(Scenario { group: g, prefix, u_prime: sample, tail_pool, subset, t })
}
