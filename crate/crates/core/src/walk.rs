//! Walk realizations of difference multisets.
//!
//! A walk `w_0 = 0, w_1, ..., w_m` realizes a multiset `M` at window `t`
//! when its left differences `d_i = -w_{i-1} + w_i` satisfy
//! `Δ(W) ∪ -Δ(W) = M ∪ -M` and no two vertices at index distance 1..=t
//! coincide. Walks built from a t-weak sequencing take the partial sums as
//! vertices; for a dominant element the walk is assembled from two-element
//! pieces that start and end with straight runs and are glued end to end.
//!
//! The delicate case is a piece whose two step views overlap. There the
//! middle steps go forward or backward depending on which window next to a
//! straight run stays clear; [`free_window_direction`] decides that on the
//! residue line of the run's view.

use thiserror::Error;

use crate::construct::{self, SeqError, SeqRoute};
use crate::group::{subgroup_intersection, Element, Group, GroupError};
use crate::multiset::{Multiset, MultisetError};
use crate::search::{self, SearchError, SearchOutcome};
use crate::seq::first_window_collision;

/// Size cap for the exhaustive walk search.
pub const MAX_WALK_SIZE: u64 = 10;

#[derive(Debug, Error)]
pub enum WalkError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Multiset(#[from] MultisetError),
    #[error(transparent)]
    Seq(#[from] SeqError),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error("a walk needs at least its starting vertex")]
    EmptyWalk,
    #[error("pair realization requires an abelian group")]
    NonAbelian,
    #[error("pair elements must not be the identity")]
    ZeroElement,
    #[error("element order {ord} does not exceed the window t={t}")]
    OrderAtMostWindow { ord: u64, t: u32 },
    #[error("leading multiplicity {lambda1} is below the required 2t = {min}")]
    MultiplicityTooSmall { lambda1: u32, min: u32 },
    #[error("second multiplicity must be at least 1")]
    SecondMultiplicityZero,
    #[error("window arguments rejected: {0}")]
    BadWindowArgs(&'static str),
    #[error("{a} is not a unit modulo {v}")]
    NotAUnit { a: u64, v: u64 },
    #[error("span {d} does not divide the modulus {v}")]
    SpanNotDivisor { d: u64, v: u64 },
    #[error("neither window is free for v={v}, a={a}, d={d}, t={t}")]
    BothWindowsBlocked { v: u64, a: u64, d: u64, t: u32 },
    #[error("dominant multiplicity {have} must exceed 2nt = {need}")]
    GlueBaseTooSmall { have: u32, need: u64 },
    #[error("glue input rejected: {0}")]
    GlueShape(&'static str),
    #[error("no construction applies and size {size} exceeds the search cap {cap}")]
    RouteUnavailable { size: u64, cap: u64 },
    #[error("exhaustive search proved that no t-weak realization exists")]
    ProvenImpossible,
    #[error("exhaustive search exceeded its node budget of {budget}")]
    Undecided { budget: u64 },
    #[error("construction produced an invalid walk: {0}")]
    Internal(&'static str),
}

/// A walk given by its vertex list (one more vertex than steps).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Walk {
    vertices: Vec<Element>,
}

impl Walk {
    /// The length-zero walk sitting at the identity.
    pub fn trivial(g: &Group) -> Walk {
        Walk { vertices: vec![g.zero()] }
    }

    pub fn from_vertices(vertices: Vec<Element>) -> Result<Walk, WalkError> {
        if vertices.is_empty() {
            return Err(WalkError::EmptyWalk);
        }
        Ok(Walk { vertices })
    }

    /// Walk starting at the identity with the given steps.
    pub fn from_steps(g: &Group, steps: &[Element]) -> Walk {
        let mut vertices = Vec::with_capacity(steps.len() + 1);
        let mut acc = g.zero();
        vertices.push(acc);
        for &s in steps {
            acc = g.add(acc, s);
            vertices.push(acc);
        }
        Walk { vertices }
    }

    pub fn vertices(&self) -> &[Element] {
        &self.vertices
    }

    pub fn num_steps(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn end(&self) -> Element {
        *self.vertices.last().expect("walks are never empty")
    }

    /// Left differences `-w_{i-1} + w_i`.
    pub fn delta(&self, g: &Group) -> Vec<Element> {
        self.vertices
            .windows(2)
            .map(|w| g.add(g.neg(w[0]), w[1]))
            .collect()
    }

    /// Left-translates so the walk starts at the identity; differences and
    /// window coincidences are unchanged.
    pub fn normalized(&self, g: &Group) -> Walk {
        let shift = g.neg(self.vertices[0]);
        Walk {
            vertices: self.vertices.iter().map(|&w| g.add(shift, w)).collect(),
        }
    }
}

/// Outcome of checking a walk against a multiset: (a) the signed difference
/// multisets must agree, (b) no window coincidence, (c) one step per
/// multiset copy. Reported failures pick the first check that broke.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RealVerdict {
    Ok,
    LengthMismatch { steps: usize, expected: u64 },
    DeltaMismatch,
    Collision { i: usize, j: usize },
}

impl RealVerdict {
    pub fn is_ok(self) -> bool {
        matches!(self, RealVerdict::Ok)
    }
}

pub fn verify_realization(g: &Group, walk: &Walk, m: &Multiset, t: u32) -> RealVerdict {
    let steps = walk.num_steps();
    if steps as u64 != m.len() {
        return RealVerdict::LengthMismatch { steps, expected: m.len() };
    }
    let diffs = walk.delta(g);
    let mut signed: Vec<Element> = diffs.iter().map(|&d| g.neg(d)).collect();
    signed.extend(diffs);
    signed.sort_unstable();
    let mut target = m.expanded();
    target.extend(m.negated(g).expanded());
    target.sort_unstable();
    if signed != target {
        return RealVerdict::DeltaMismatch;
    }
    match first_window_collision(walk.vertices(), t) {
        Some((i, j)) => RealVerdict::Collision { i, j },
        None => RealVerdict::Ok,
    }
}

/// Which side of a straight run the middle steps may extend to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Positive,
    Negative,
}

impl Direction {
    pub fn label(&self) -> &'static str {
        match self {
            Direction::Positive => "positive",
            Direction::Negative => "negative",
        }
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Inverse of `a` modulo `m` (m >= 2), or None when gcd(a, m) != 1.
fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(m as i128) as u64)
}

/// On the residue line Z_v, takes the straight run `0, a, 2a, ..., ta` of a
/// unit `a` and checks which of the two windows of d·t consecutive residues
/// flanking `ta` avoids the run: the positive window `ta + {1..dt}` or the
/// negative window `ta - {1..dt}`. The positive side wins ties. For
/// `v >= d·t·(2t+1)` at least one side is always free; smaller moduli are
/// still evaluated faithfully and may reject both.
pub fn free_window_direction(v: u64, a: u64, d: u64, t: u32) -> Result<Direction, WalkError> {
    assert!(t >= 1, "window must be at least 1");
    if v < 2 {
        return Err(WalkError::BadWindowArgs("modulus must be at least 2"));
    }
    if a == 0 || a >= v {
        return Err(WalkError::BadWindowArgs("generator must lie in 1..v"));
    }
    if gcd(a, v) != 1 {
        return Err(WalkError::NotAUnit { a, v });
    }
    if d == 0 || v % d != 0 {
        return Err(WalkError::SpanNotDivisor { d, v });
    }
    let span = d
        .checked_mul(t as u64)
        .ok_or(WalkError::BadWindowArgs("window span overflows"))?;
    let run: Vec<u64> = (0..=t as u64).map(|i| (i % v) * a % v).collect();
    let base = run[t as usize];
    let clear = |offset: &dyn Fn(u64) -> u64| (1..=span).all(|j| !run.contains(&offset(j % v)));
    if clear(&|off| (base + off) % v) {
        Ok(Direction::Positive)
    } else if clear(&|off| (base + v - off) % v) {
        Ok(Direction::Negative)
    } else {
        Err(WalkError::BothWindowsBlocked { v, a, d, t })
    }
}

/// How the two step views of a pair sit inside each other. Writing
/// `n = ord(a1)` and indexing `<a1>` by discrete log, the intersection of
/// the views is generated at index `stride`, `first_mult` is the least
/// k >= 1 with `k·a2` in `<a1>`, that multiple sits at index
/// `stride · scale`, and `unit` inverts `scale` on the index line (lifted
/// to a unit mod n). Cross collisions between a2-steps and a straight
/// a1-run then live exactly in the windows checked by
/// [`free_window_direction`] with `(v, a, d) = (n, unit, stride)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Overlap {
    pub order_a1: u64,
    pub stride: u64,
    pub first_mult: u64,
    pub scale: u64,
    pub unit: u64,
}

/// `None` when the views intersect trivially (the disjoint case).
pub fn overlap_profile(g: &Group, a1: Element, a2: Element) -> Result<Option<Overlap>, WalkError> {
    let view1 = g.cyclic_subgroup(a1);
    let view2 = g.cyclic_subgroup(a2);
    let (gen, gen_order) = subgroup_intersection(g, &view1, &view2);
    if gen_order == 1 {
        return Ok(None);
    }
    let n = view1.order();
    let stride = view1.dlog(gen).ok_or(WalkError::Internal(
        "intersection generator escapes its own view",
    ))?;
    if stride == 0 || n % stride != 0 {
        return Err(WalkError::Internal("intersection index does not divide the view order"));
    }
    let first_mult = (1..=view2.order())
        .find(|&k| view1.contains(g.scalar_mul(k as i64, a2)))
        .ok_or(WalkError::Internal("nontrivial intersection has no a2 multiple"))?;
    let hit = view1
        .dlog(g.scalar_mul(first_mult as i64, a2))
        .ok_or(WalkError::Internal("first multiple escapes the view"))?;
    if hit % stride != 0 {
        return Err(WalkError::Internal("first multiple off the intersection grid"));
    }
    let scale = hit / stride;
    let modulus = n / stride;
    let inv = mod_inverse(scale % modulus, modulus)
        .ok_or(WalkError::Internal("intersection scale is not invertible"))?;
    // lift to a unit mod n; the reduction U(Z_n) -> U(Z_modulus) is onto
    let unit = (0..stride)
        .map(|k| inv + k * modulus)
        .find(|&u| u != 0 && gcd(u, n) == 1)
        .ok_or(WalkError::Internal("no unit lift of the inverse scale"))?;
    Ok(Some(Overlap { order_a1: n, stride, first_mult, scale, unit }))
}

/// How a two-element realization was laid out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairKind {
    Straight,
    Disjoint,
    Overlapping,
}

#[derive(Debug, Clone)]
pub struct PairWalk {
    pub walk: Walk,
    pub direction: Direction,
    pub kind: PairKind,
}

/// Realizes `[a1^lambda1, a2^lambda2]` with straight a1-runs around the
/// a2-steps. Disjoint views commute freely; overlapping views consult
/// [`free_window_direction`] and send the a2-steps backward when only the
/// negative window is clear. Requires `lambda1 >= 2t` so every piece can
/// both open and close with a full run.
pub fn realize_pair(
    g: &Group,
    a1: Element,
    a2: Element,
    lambda1: u32,
    lambda2: u32,
    t: u32,
) -> Result<PairWalk, WalkError> {
    assert!(t >= 1, "window must be at least 1");
    if !g.is_abelian() {
        return Err(WalkError::NonAbelian);
    }
    if g.is_zero(a1) || g.is_zero(a2) {
        return Err(WalkError::ZeroElement);
    }
    if lambda1 < 2 * t {
        return Err(WalkError::MultiplicityTooSmall { lambda1, min: 2 * t });
    }
    if lambda2 == 0 {
        return Err(WalkError::SecondMultiplicityZero);
    }
    for a in [a1, a2] {
        let ord = g.element_order(a);
        if ord <= t as u64 {
            return Err(WalkError::OrderAtMostWindow { ord, t });
        }
    }

    let (kind, direction) = if a1 == a2 {
        (PairKind::Straight, Direction::Positive)
    } else {
        match overlap_profile(g, a1, a2)? {
            None => (PairKind::Disjoint, Direction::Positive),
            Some(ov) => {
                // the first possible cross collision pairs one a2-multiple
                // with stride-many a1-steps; windows shorter than that are
                // safe without consulting the residue line
                let dir = if ov.first_mult + ov.stride > t as u64 {
                    Direction::Positive
                } else {
                    free_window_direction(ov.order_a1, ov.unit, ov.stride, t)?
                };
                (PairKind::Overlapping, dir)
            }
        }
    };

    let mid = match direction {
        Direction::Positive => a2,
        Direction::Negative => g.neg(a2),
    };
    let mut steps = Vec::with_capacity((lambda1 + lambda2) as usize);
    match kind {
        PairKind::Straight => steps.resize((lambda1 + lambda2) as usize, a1),
        PairKind::Disjoint => {
            steps.extend(std::iter::repeat(a1).take((lambda1 - t) as usize));
            steps.extend(std::iter::repeat(mid).take(lambda2 as usize));
            steps.extend(std::iter::repeat(a1).take(t as usize));
        }
        PairKind::Overlapping => {
            steps.extend(std::iter::repeat(a1).take(t as usize));
            steps.extend(std::iter::repeat(mid).take(lambda2 as usize));
            steps.extend(std::iter::repeat(a1).take((lambda1 - t) as usize));
        }
    }
    let walk = Walk::from_steps(g, &steps);

    let m = Multiset::new(g, [(a1, lambda1), (a2, lambda2)])?;
    if !verify_realization(g, &walk, &m, t).is_ok() {
        return Err(WalkError::Internal("pair walk failed its own verification"));
    }
    Ok(PairWalk { walk, direction, kind })
}

#[derive(Debug, Clone)]
pub struct GlueRealization {
    pub pieces: Vec<PairWalk>,
    pub walk: Walk,
}

/// Realizes `[base^base_mult] ∪ others` by splitting the dominant element
/// across one pair per other element — `2t` copies each, the remainder to
/// the last — and chaining the translated pieces. Every junction is flanked
/// by straight base-runs of length >= t on both sides, so gluing cannot
/// introduce window coincidences. Requires `base_mult > 2nt` where n counts
/// the distinct elements overall.
pub fn realize_glue(
    g: &Group,
    t: u32,
    base: Element,
    base_mult: u32,
    others: &[(Element, u32)],
) -> Result<GlueRealization, WalkError> {
    assert!(t >= 1, "window must be at least 1");
    if others.is_empty() {
        return Err(WalkError::GlueShape("at least one non-dominant element is required"));
    }
    if others.iter().any(|&(e, _)| e == base) {
        return Err(WalkError::GlueShape("the dominant element may not recur"));
    }
    if others.iter().any(|&(_, mult)| mult == 0) {
        return Err(WalkError::GlueShape("multiplicities must be positive"));
    }
    let mut seen: Vec<Element> = others.iter().map(|&(e, _)| e).collect();
    seen.sort_unstable();
    if seen.windows(2).any(|w| w[0] == w[1]) {
        return Err(WalkError::GlueShape("non-dominant elements must be distinct"));
    }
    let n = others.len() as u64 + 1;
    let need = 2 * n * t as u64;
    if base_mult as u64 <= need {
        return Err(WalkError::GlueBaseTooSmall { have: base_mult, need });
    }

    let head_pieces = others.len() as u32 - 1;
    let mut pieces = Vec::with_capacity(others.len());
    for (i, &(x, mult)) in others.iter().enumerate() {
        let lambda1 = if (i as u32) < head_pieces {
            2 * t
        } else {
            base_mult - 2 * t * head_pieces
        };
        pieces.push(realize_pair(g, base, x, lambda1, mult, t)?);
    }

    let mut vertices = pieces[0].walk.vertices().to_vec();
    for piece in &pieces[1..] {
        let z = *vertices.last().unwrap();
        vertices.extend(piece.walk.vertices()[1..].iter().map(|&w| g.add(z, w)));
    }
    let walk = Walk::from_vertices(vertices)?;

    let mut all = Multiset::new(g, [(base, base_mult)])?;
    all = all.union(&Multiset::new(g, others.iter().copied())?);
    if !verify_realization(g, &walk, &all, t).is_ok() {
        return Err(WalkError::Internal("glued walk failed its own verification"));
    }
    Ok(GlueRealization { pieces, walk })
}

/// Which construction produced a realization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RealizeRoute {
    Straight,
    Glue { pieces: usize },
    Sequencing { stage: SeqRoute },
    BruteForce,
}

impl RealizeRoute {
    pub fn label(&self) -> &'static str {
        match self {
            RealizeRoute::Straight => "straight",
            RealizeRoute::Glue { .. } => "glue",
            RealizeRoute::Sequencing { .. } => "sequencing",
            RealizeRoute::BruteForce => "brute-force",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Realized {
    pub walk: Walk,
    pub route: RealizeRoute,
}

/// Realizes a multiset as a t-weak walk. Routes, in order of preference:
/// a single straight run for one-element supports; the glue construction
/// when some multiplicity dominates (`> 2nt`) and the smallest prime
/// divisor exceeds `t(2t+1)`; partial sums of a t-weak sequencing when the
/// sequencing pipeline applies; otherwise exhaustive search for multisets
/// of size at most [`MAX_WALK_SIZE`]. A failed construction falls through
/// to the search, whose negative answer is a proof.
pub fn realize_multiset(
    g: &Group,
    m: &Multiset,
    t: u32,
    seed: u64,
    max_attempts: u64,
) -> Result<Realized, WalkError> {
    assert!(t >= 1, "window must be at least 1");
    if m.is_empty() {
        return Ok(Realized { walk: Walk::trivial(g), route: RealizeRoute::Straight });
    }
    let p = g.smallest_prime_divisor();
    let n = m.distinct_len();
    let small = m.len() <= MAX_WALK_SIZE;
    let mut last_err: Option<WalkError> = None;

    if n == 1 {
        let (x, mult) = m.entries()[0];
        let ord = g.element_order(x);
        if ord > t as u64 {
            let steps = vec![x; mult as usize];
            return Ok(Realized {
                walk: Walk::from_steps(g, &steps),
                route: RealizeRoute::Straight,
            });
        }
        last_err = Some(WalkError::OrderAtMostWindow { ord, t });
    }

    if n >= 2 && p > t as u64 * (2 * t as u64 + 1) {
        let (base, base_mult) = m
            .entries()
            .iter()
            .copied()
            .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
            .expect("nonempty multiset");
        if base_mult as u64 > 2 * n as u64 * t as u64 {
            let others: Vec<(Element, u32)> = m
                .entries()
                .iter()
                .copied()
                .filter(|&(e, _)| e != base)
                .collect();
            match realize_glue(g, t, base, base_mult, &others) {
                Ok(glued) => {
                    return Ok(Realized {
                        walk: glued.walk,
                        route: RealizeRoute::Glue { pieces: glued.pieces.len() },
                    })
                }
                Err(e) => last_err = Some(e),
            }
        }
    }

    if p > t as u64 && n > 2 * (t as usize).pow(2) {
        match construct::sequence_multiset(g, m, t, seed, max_attempts) {
            Ok(r) => {
                let sums = r.sequencing.partial_sums(g);
                return Ok(Realized {
                    walk: Walk::from_vertices(sums)?,
                    route: RealizeRoute::Sequencing { stage: r.route },
                });
            }
            Err(e) => last_err = Some(WalkError::Seq(e)),
        }
    }

    if small {
        return match brute_force_realize(g, m, t, search::DEFAULT_NODE_BUDGET)? {
            SearchOutcome::Found(walk) => Ok(Realized { walk, route: RealizeRoute::BruteForce }),
            SearchOutcome::ExhaustedNone => Err(WalkError::ProvenImpossible),
            SearchOutcome::BudgetExceeded => {
                Err(WalkError::Undecided { budget: search::DEFAULT_NODE_BUDGET })
            }
        };
    }
    Err(last_err.unwrap_or(WalkError::RouteUnavailable { size: m.len(), cap: MAX_WALK_SIZE }))
}

struct WalkSearch<'a> {
    g: &'a Group,
    t: usize,
    counts: Vec<(Element, u32)>,
    vertices: Vec<Element>,
    nodes: u64,
    budget: u64,
    truncated: bool,
}

impl WalkSearch<'_> {
    fn run(&mut self, remaining: u64) -> bool {
        if remaining == 0 {
            return true;
        }
        for slot in 0..self.counts.len() {
            let (e, c) = self.counts[slot];
            if c == 0 {
                continue;
            }
            let mut steps = [e, self.g.neg(e)];
            steps.sort_unstable();
            let take = if steps[0] == steps[1] { 1 } else { 2 };
            for &step in &steps[..take] {
                if self.nodes >= self.budget {
                    self.truncated = true;
                    return false;
                }
                self.nodes += 1;
                let next = self.g.add(*self.vertices.last().unwrap(), step);
                let lo = self.vertices.len().saturating_sub(self.t);
                if self.vertices[lo..].contains(&next) {
                    continue;
                }
                self.counts[slot].1 -= 1;
                self.vertices.push(next);
                if self.run(remaining - 1) {
                    return true;
                }
                self.vertices.pop();
                self.counts[slot].1 += 1;
            }
        }
        false
    }
}

/// Exhaustive search over step orderings and signs. Prunes on window
/// coincidences, so a `Found` walk is a valid realization by construction;
/// `ExhaustedNone` proves none exists.
pub fn brute_force_realize(
    g: &Group,
    m: &Multiset,
    t: u32,
    budget: u64,
) -> Result<SearchOutcome<Walk>, SearchError> {
    if m.len() > MAX_WALK_SIZE {
        return Err(SearchError::SizeOverCap { size: m.len(), cap: MAX_WALK_SIZE });
    }
    let mut search = WalkSearch {
        g,
        t: t as usize,
        counts: m.entries().to_vec(),
        vertices: vec![g.zero()],
        nodes: 0,
        budget,
        truncated: false,
    };
    if search.run(m.len()) {
        Ok(SearchOutcome::Found(Walk { vertices: search.vertices }))
    } else if search.truncated {
        Ok(SearchOutcome::BudgetExceeded)
    } else {
        Ok(SearchOutcome::ExhaustedNone)
    }
}
