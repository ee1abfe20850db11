//! Finite groups in additive notation: cyclic groups, direct products of
//! cyclic groups, and arbitrary groups given by a Cayley table.
//!
//! Elements are opaque handles tied to the context that created them.
//! Every kind enumerates its elements canonically (residue order for cyclic
//! groups, lexicographic tuple order for products, row order for tables), so
//! a handle is just an index into that enumeration.

use std::fmt;
use std::fs;
use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};

use thiserror::Error;

static NEXT_CTX_ID: AtomicU64 = AtomicU64::new(1);

/// Largest Cayley table accepted; the group axioms are checked exhaustively,
/// which is cubic in the order.
pub const MAX_TABLE_ORDER: usize = 512;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("cannot parse group spec `{0}`")]
    BadSpec(String),
    #[error("group order must be at least 2, got {0}")]
    OrderTooSmall(u64),
    #[error("cayley table rejected: {0}")]
    BadTable(String),
    #[error("cayley table of order {0} exceeds the maximum {MAX_TABLE_ORDER}")]
    TableTooLarge(usize),
    #[error("cannot read cayley table `{path}`: {source}")]
    TableIo {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot parse element `{literal}` for group {group}: {reason}")]
    BadElement {
        literal: String,
        group: String,
        reason: String,
    },
}

#[derive(Debug, Clone)]
enum Kind {
    Cyclic(u64),
    Product(Vec<u64>),
    Table { n: usize, add: Vec<u32>, neg: Vec<u32> },
}

/// An element handle. Valid only for the [`Group`] that produced it;
/// operations panic if handles from different contexts are mixed.
///
/// The derived ordering is the canonical element order of the group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element {
    ctx: u64,
    index: u64,
}

impl Element {
    /// Position of this element in the group's canonical enumeration.
    pub fn index(self) -> u64 {
        self.index
    }
}

/// Immutable group context. Cloning preserves the context identity, so
/// elements remain valid across clones; contexts are freely shareable
/// between threads.
#[derive(Debug, Clone)]
pub struct Group {
    id: u64,
    kind: Kind,
    order: u64,
    smallest_prime: u64,
    abelian: bool,
    spec: String,
}

fn smallest_prime_divisor(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return d;
        }
        d += 2;
    }
    n
}

impl Group {
    fn new(kind: Kind, order: u64, abelian: bool, spec: String) -> Group {
        Group {
            id: NEXT_CTX_ID.fetch_add(1, Ordering::Relaxed),
            kind,
            order,
            smallest_prime: smallest_prime_divisor(order),
            abelian,
            spec,
        }
    }

    /// Cyclic group of order `v`, written `Z<v>`.
    pub fn cyclic(v: u64) -> Result<Group, GroupError> {
        if v < 2 {
            return Err(GroupError::OrderTooSmall(v));
        }
        Ok(Group::new(Kind::Cyclic(v), v, true, format!("Z{v}")))
    }

    /// Direct product of cyclic groups, written `Z<a>xZ<b>[xZ<c>...]`.
    pub fn product(orders: &[u64]) -> Result<Group, GroupError> {
        if orders.len() < 2 {
            return Err(GroupError::BadSpec(format!("{orders:?}")));
        }
        let mut total: u64 = 1;
        for &v in orders {
            if v < 2 {
                return Err(GroupError::OrderTooSmall(v));
            }
            total = total
                .checked_mul(v)
                .ok_or_else(|| GroupError::BadSpec(format!("{orders:?}")))?;
        }
        let spec = orders
            .iter()
            .map(|v| format!("Z{v}"))
            .collect::<Vec<_>>()
            .join("x");
        Ok(Group::new(
            Kind::Product(orders.to_vec()),
            total,
            true,
            spec,
        ))
    }

    /// Group given by an addition table (`rows[a][b] = a + b`), with the
    /// identity at index 0. All group axioms are verified exhaustively.
    pub fn from_table(rows: &[Vec<u32>]) -> Result<Group, GroupError> {
        let n = rows.len();
        if n < 2 {
            return Err(GroupError::OrderTooSmall(n as u64));
        }
        if n > MAX_TABLE_ORDER {
            return Err(GroupError::TableTooLarge(n));
        }
        let mut add = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::BadTable(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for &x in row {
                if x as usize >= n {
                    return Err(GroupError::BadTable(format!(
                        "entry {x} in row {i} out of range"
                    )));
                }
                add.push(x);
            }
        }
        let at = |a: usize, b: usize| add[a * n + b] as usize;
        for a in 0..n {
            if at(0, a) != a || at(a, 0) != a {
                return Err(GroupError::BadTable(format!(
                    "index 0 is not an identity at element {a}"
                )));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if at(at(a, b), c) != at(a, at(b, c)) {
                        return Err(GroupError::BadTable(format!(
                            "associativity fails at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let mut neg = vec![u32::MAX; n];
        for a in 0..n {
            match (0..n).find(|&b| at(a, b) == 0 && at(b, a) == 0) {
                Some(b) => neg[a] = b as u32,
                None => {
                    return Err(GroupError::BadTable(format!("element {a} has no inverse")))
                }
            }
        }
        let abelian = (0..n).all(|a| (0..n).all(|b| at(a, b) == at(b, a)));
        Ok(Group::new(
            Kind::Table { n, add, neg },
            n as u64,
            abelian,
            format!("table of order {n}"),
        ))
    }

    /// Loads a Cayley table file: first line the order `n`, then `n` lines
    /// of `n` indices each, identity at index 0.
    pub fn from_table_file(path: &Path) -> Result<Group, GroupError> {
        let text = fs::read_to_string(path).map_err(|source| GroupError::TableIo {
            path: path.display().to_string(),
            source,
        })?;
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let n: usize = lines
            .next()
            .and_then(|l| l.trim().parse().ok())
            .ok_or_else(|| GroupError::BadTable("missing order line".into()))?;
        let mut rows = Vec::with_capacity(n);
        for _ in 0..n {
            let line = lines
                .next()
                .ok_or_else(|| GroupError::BadTable("missing table row".into()))?;
            let row: Result<Vec<u32>, _> =
                line.split_whitespace().map(|tok| tok.parse()).collect();
            rows.push(row.map_err(|_| {
                GroupError::BadTable(format!("non-numeric entry in row `{line}`"))
            })?);
        }
        let mut g = Group::from_table(&rows)?;
        g.spec = format!("cayley:{}", path.display());
        Ok(g)
    }

    /// Parses a group spec: `Z<v>`, `Z<a>xZ<b>[xZ<c>...]`, or `cayley:<path>`.
    pub fn parse(spec: &str) -> Result<Group, GroupError> {
        let spec = spec.trim();
        if let Some(path) = spec.strip_prefix("cayley:") {
            return Group::from_table_file(Path::new(path));
        }
        let parse_factor = |tok: &str| -> Result<u64, GroupError> {
            tok.strip_prefix('Z')
                .and_then(|digits| digits.parse::<u64>().ok())
                .ok_or_else(|| GroupError::BadSpec(spec.to_string()))
        };
        if spec.contains('x') {
            let orders: Result<Vec<u64>, _> = spec.split('x').map(parse_factor).collect();
            Group::product(&orders?)
        } else {
            Group::cyclic(parse_factor(spec)?)
        }
    }

    /// The spec string this group renders as (`Z7`, `Z5xZ7`, `cayley:<path>`).
    pub fn spec(&self) -> &str {
        &self.spec
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn smallest_prime_divisor(&self) -> u64 {
        self.smallest_prime
    }

    pub fn is_abelian(&self) -> bool {
        self.abelian
    }

    pub fn is_table(&self) -> bool {
        matches!(self.kind, Kind::Table { .. })
    }

    pub fn is_cyclic(&self) -> bool {
        matches!(self.kind, Kind::Cyclic(_))
    }

    fn check(&self, e: Element) -> u64 {
        assert_eq!(
            e.ctx, self.id,
            "element used with a group context that did not create it"
        );
        e.index
    }

    fn wrap(&self, index: u64) -> Element {
        debug_assert!(index < self.order);
        Element { ctx: self.id, index }
    }

    /// Element at position `index` in the canonical enumeration.
    pub fn element(&self, index: u64) -> Element {
        assert!(index < self.order, "element index {index} out of range");
        self.wrap(index)
    }

    /// Iterates all elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.order).map(|i| self.wrap(i))
    }

    pub fn zero(&self) -> Element {
        self.wrap(0)
    }

    pub fn is_zero(&self, e: Element) -> bool {
        self.check(e) == 0
    }

    fn decode(&self, orders: &[u64], mut index: u64) -> Vec<u64> {
        let mut tuple = vec![0; orders.len()];
        for i in (0..orders.len()).rev() {
            tuple[i] = index % orders[i];
            index /= orders[i];
        }
        tuple
    }

    fn encode(&self, orders: &[u64], tuple: &[u64]) -> u64 {
        tuple
            .iter()
            .zip(orders)
            .fold(0, |acc, (&c, &v)| acc * v + c)
    }

    pub fn add(&self, a: Element, b: Element) -> Element {
        let (ia, ib) = (self.check(a), self.check(b));
        let index = match &self.kind {
            Kind::Cyclic(v) => (ia + ib) % v,
            Kind::Product(orders) => {
                let (ta, tb) = (self.decode(orders, ia), self.decode(orders, ib));
                let sum: Vec<u64> = ta
                    .iter()
                    .zip(&tb)
                    .zip(orders)
                    .map(|((&x, &y), &v)| (x + y) % v)
                    .collect();
                self.encode(orders, &sum)
            }
            Kind::Table { n, add, .. } => add[ia as usize * n + ib as usize] as u64,
        };
        self.wrap(index)
    }

    pub fn neg(&self, a: Element) -> Element {
        let ia = self.check(a);
        let index = match &self.kind {
            Kind::Cyclic(v) => (v - ia) % v,
            Kind::Product(orders) => {
                let t = self.decode(orders, ia);
                let n: Vec<u64> = t.iter().zip(orders).map(|(&x, &v)| (v - x) % v).collect();
                self.encode(orders, &n)
            }
            Kind::Table { neg, .. } => neg[ia as usize] as u64,
        };
        self.wrap(index)
    }

    pub fn sub(&self, a: Element, b: Element) -> Element {
        self.add(a, self.neg(b))
    }

    /// `k * a` as repeated addition; negative `k` uses the inverse.
    pub fn scalar_mul(&self, k: i64, a: Element) -> Element {
        let base = if k < 0 { self.neg(a) } else { a };
        let mut reps = k.unsigned_abs() % self.order_of_cycle(base);
        let mut acc = self.zero();
        while reps > 0 {
            acc = self.add(acc, base);
            reps -= 1;
        }
        acc
    }

    fn order_of_cycle(&self, a: Element) -> u64 {
        self.element_order(a)
    }

    /// Multiplicative order of `a`: smallest `k >= 1` with `k * a = 0`.
    pub fn element_order(&self, a: Element) -> u64 {
        self.check(a);
        let mut acc = a;
        let mut k = 1;
        while !self.is_zero(acc) {
            acc = self.add(acc, a);
            k += 1;
        }
        k
    }

    /// The cyclic subgroup generated by `a`, enumerated as `0, a, 2a, ...`.
    pub fn cyclic_subgroup(&self, a: Element) -> CyclicView {
        self.check(a);
        let mut elements = vec![self.zero()];
        let mut acc = a;
        while !self.is_zero(acc) {
            elements.push(acc);
            acc = self.add(acc, a);
        }
        CyclicView {
            generator: a,
            elements,
        }
    }

    /// Renders an element in the literal syntax `parse_element` accepts.
    pub fn element_literal(&self, e: Element) -> String {
        let i = self.check(e);
        match &self.kind {
            Kind::Cyclic(_) | Kind::Table { .. } => i.to_string(),
            Kind::Product(orders) => {
                let t = self.decode(orders, i);
                format!(
                    "({})",
                    t.iter()
                        .map(|c| c.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                )
            }
        }
    }

    /// Parses an element literal: an integer for cyclic groups (negative
    /// values are normalized mod v), a `(c1,c2,...)` tuple for products,
    /// and a table index for table groups.
    pub fn parse_element(&self, literal: &str) -> Result<Element, GroupError> {
        let lit = literal.trim();
        let err = |reason: &str| GroupError::BadElement {
            literal: literal.to_string(),
            group: self.spec.clone(),
            reason: reason.to_string(),
        };
        match &self.kind {
            Kind::Cyclic(v) => {
                let raw: i64 = lit.parse().map_err(|_| err("expected an integer"))?;
                Ok(self.wrap(raw.rem_euclid(*v as i64) as u64))
            }
            Kind::Table { n, .. } => {
                let raw: u64 = lit
                    .parse()
                    .map_err(|_| err("expected a non-negative table index"))?;
                if raw >= *n as u64 {
                    return Err(err("table index out of range"));
                }
                Ok(self.wrap(raw))
            }
            Kind::Product(orders) => {
                let inner = lit
                    .strip_prefix('(')
                    .and_then(|s| s.strip_suffix(')'))
                    .ok_or_else(|| err("expected a (c1,c2,...) tuple"))?;
                let comps: Result<Vec<i64>, _> =
                    inner.split(',').map(|c| c.trim().parse()).collect();
                let comps = comps.map_err(|_| err("tuple components must be integers"))?;
                if comps.len() != orders.len() {
                    return Err(err("wrong number of tuple components"));
                }
                let tuple: Vec<u64> = comps
                    .iter()
                    .zip(orders)
                    .map(|(&c, &v)| c.rem_euclid(v as i64) as u64)
                    .collect();
                Ok(self.wrap(self.encode(orders, &tuple)))
            }
        }
    }

    /// Parses a comma-separated element list, respecting tuple parentheses.
    pub fn parse_element_list(&self, s: &str) -> Result<Vec<Element>, GroupError> {
        split_top_level(s)
            .into_iter()
            .map(|tok| self.parse_element(&tok))
            .collect()
    }
}

/// Splits on commas that are not nested inside parentheses; an empty or
/// all-whitespace input yields no tokens.
pub fn split_top_level(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
            }
            ')' => {
                depth = depth.saturating_sub(1);
                cur.push(ch);
            }
            ',' if depth == 0 => {
                out.push(std::mem::take(&mut cur));
            }
            _ => cur.push(ch),
        }
    }
    if !cur.trim().is_empty() || !out.is_empty() {
        out.push(cur);
    }
    out.into_iter()
        .map(|t| t.trim().to_string())
        .filter(|t| !t.is_empty())
        .collect()
}

/// The cyclic subgroup `<a>` with its canonical enumeration `i -> i*a`,
/// identifying it with `Z_v` for `v = |<a>|`.
#[derive(Debug, Clone)]
pub struct CyclicView {
    generator: Element,
    elements: Vec<Element>,
}

impl CyclicView {
    pub fn generator(&self) -> Element {
        self.generator
    }

    /// `v = |<a>|`.
    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    /// `i * a` for `0 <= i < v`.
    pub fn element(&self, i: u64) -> Element {
        self.elements[(i % self.order()) as usize]
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    /// Discrete log: the `i` with `i * a = x`, if `x` lies in the subgroup.
    pub fn dlog(&self, x: Element) -> Option<u64> {
        self.elements.iter().position(|&e| e == x).map(|i| i as u64)
    }

    pub fn contains(&self, x: Element) -> bool {
        self.dlog(x).is_some()
    }
}

/// Intersection of two cyclic subgroups of the same group: returns a
/// generator together with the intersection size.
///
/// The generator is the intersection element with the smallest positive
/// dlog in `v1`; for a trivial intersection it is the identity and the
/// size is 1. The smallest positive dlog `e` always divides `v1.order()`
/// and the intersection is exactly `{0, e*a1, 2e*a1, ...}`.
pub fn subgroup_intersection(g: &Group, v1: &CyclicView, v2: &CyclicView) -> (Element, u64) {
    let mut in_v2: Vec<Element> = v2.elements().to_vec();
    in_v2.sort_unstable();
    let mut generator = g.zero();
    let mut size = 0u64;
    for (i, &x) in v1.elements().iter().enumerate() {
        if in_v2.binary_search(&x).is_ok() {
            size += 1;
            if i > 0 && size == 2 {
                generator = x;
            }
        }
    }
    if size <= 1 {
        (g.zero(), 1)
    } else {
        (generator, size)
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec)
    }
}
