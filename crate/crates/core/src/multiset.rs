//! Multisets of non-identity group elements and their sequencings.

use thiserror::Error;

use crate::group::{split_top_level, Element, Group, GroupError};

#[derive(Debug, Error)]
pub enum MultisetError {
    #[error("multiset entries must not be the identity")]
    IdentityEntry,
    #[error("multiplicity must be at least 1 in `{0}`")]
    ZeroMultiplicity(String),
    #[error("cannot parse multiset term `{0}`")]
    BadTerm(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("sequencing entries do not match the source multiset")]
    NotAPermutation,
}

/// A finite multiset of non-identity elements, stored as `(element,
/// multiplicity)` pairs sorted in canonical element order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multiset {
    entries: Vec<(Element, u32)>,
}

impl Multiset {
    pub fn empty() -> Multiset {
        Multiset { entries: Vec::new() }
    }

    /// Builds a multiset from `(element, multiplicity)` pairs; duplicate
    /// elements are merged and identity entries rejected.
    pub fn new(
        g: &Group,
        pairs: impl IntoIterator<Item = (Element, u32)>,
    ) -> Result<Multiset, MultisetError> {
        let mut entries: Vec<(Element, u32)> = Vec::new();
        for (e, mult) in pairs {
            if mult == 0 {
                return Err(MultisetError::ZeroMultiplicity(g.element_literal(e)));
            }
            if g.is_zero(e) {
                return Err(MultisetError::IdentityEntry);
            }
            entries.push((e, mult));
        }
        entries.sort_by_key(|&(e, _)| e);
        let mut merged: Vec<(Element, u32)> = Vec::new();
        for (e, mult) in entries {
            match merged.last_mut() {
                Some((prev, m)) if *prev == e => *m += mult,
                _ => merged.push((e, mult)),
            }
        }
        Ok(Multiset { entries: merged })
    }

    /// Counts occurrences in an element list.
    pub fn from_elements(
        g: &Group,
        elems: impl IntoIterator<Item = Element>,
    ) -> Result<Multiset, MultisetError> {
        Multiset::new(g, elems.into_iter().map(|e| (e, 1)))
    }

    /// Parses `elem^mult` terms separated by commas; `^1` may be omitted.
    pub fn parse(g: &Group, s: &str) -> Result<Multiset, MultisetError> {
        let mut pairs = Vec::new();
        for term in split_top_level(s) {
            let (elem_part, mult) = match term.rfind('^') {
                // A '^' inside a tuple literal never occurs, so the last one
                // separates the multiplicity.
                Some(pos) => {
                    let m: u32 = term[pos + 1..]
                        .trim()
                        .parse()
                        .map_err(|_| MultisetError::BadTerm(term.clone()))?;
                    (term[..pos].to_string(), m)
                }
                None => (term.clone(), 1),
            };
            if mult == 0 {
                return Err(MultisetError::ZeroMultiplicity(term));
            }
            pairs.push((g.parse_element(&elem_part)?, mult));
        }
        Multiset::new(g, pairs)
    }

    pub fn entries(&self) -> &[(Element, u32)] {
        &self.entries
    }

    /// Number of distinct elements `n`.
    pub fn distinct_len(&self) -> usize {
        self.entries.len()
    }

    /// Total size `m` counting multiplicity.
    pub fn len(&self) -> u64 {
        self.entries.iter().map(|&(_, m)| m as u64).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn multiplicity(&self, e: Element) -> u32 {
        self.entries
            .binary_search_by_key(&e, |&(x, _)| x)
            .map(|i| self.entries[i].1)
            .unwrap_or(0)
    }

    pub fn contains(&self, e: Element) -> bool {
        self.multiplicity(e) > 0
    }

    /// The underlying set in canonical order.
    pub fn support(&self) -> Vec<Element> {
        self.entries.iter().map(|&(e, _)| e).collect()
    }

    /// All entries expanded with multiplicity, in canonical order.
    pub fn expanded(&self) -> Vec<Element> {
        let mut out = Vec::with_capacity(self.len() as usize);
        for &(e, m) in &self.entries {
            out.extend(std::iter::repeat(e).take(m as usize));
        }
        out
    }

    /// `{-x : x in self}` with the same multiplicities.
    pub fn negated(&self, g: &Group) -> Multiset {
        Multiset::new(g, self.entries.iter().map(|&(e, m)| (g.neg(e), m)))
            .expect("negation preserves multiset invariants")
    }

    /// Multiset union (multiplicities add).
    pub fn union(&self, other: &Multiset) -> Multiset {
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().copied());
        entries.sort_by_key(|&(e, _)| e);
        let mut merged: Vec<(Element, u32)> = Vec::new();
        for (e, m) in entries {
            match merged.last_mut() {
                Some((prev, pm)) if *prev == e => *pm += m,
                _ => merged.push((e, m)),
            }
        }
        Multiset { entries: merged }
    }

    /// Multiset difference (multiplicities saturate at zero).
    pub fn difference(&self, other: &Multiset) -> Multiset {
        let entries = self
            .entries
            .iter()
            .filter_map(|&(e, m)| {
                let rest = m.saturating_sub(other.multiplicity(e));
                (rest > 0).then_some((e, rest))
            })
            .collect();
        Multiset { entries }
    }

    /// True when every multiplicity here is at most the one in `other`.
    pub fn subset_of(&self, other: &Multiset) -> bool {
        self.entries
            .iter()
            .all(|&(e, m)| m <= other.multiplicity(e))
    }

    pub fn display(&self, g: &Group) -> String {
        self.entries
            .iter()
            .map(|&(e, m)| {
                if m == 1 {
                    g.element_literal(e)
                } else {
                    format!("{}^{m}", g.element_literal(e))
                }
            })
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// An ordering of a multiset. The entries of `order` are exactly the
/// source multiset, permuted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sequencing {
    order: Vec<Element>,
    source: Multiset,
}

impl Sequencing {
    pub fn empty() -> Sequencing {
        Sequencing {
            order: Vec::new(),
            source: Multiset::empty(),
        }
    }

    /// Checks that `order` is a permutation of `source`.
    pub fn new(
        g: &Group,
        order: Vec<Element>,
        source: Multiset,
    ) -> Result<Sequencing, MultisetError> {
        let counted = Multiset::from_elements(g, order.iter().copied())?;
        if counted != source {
            return Err(MultisetError::NotAPermutation);
        }
        Ok(Sequencing { order, source })
    }

    /// Derives the source multiset from the order itself.
    pub fn from_order(g: &Group, order: Vec<Element>) -> Result<Sequencing, MultisetError> {
        let source = Multiset::from_elements(g, order.iter().copied())?;
        Ok(Sequencing { order, source })
    }

    pub fn order(&self) -> &[Element] {
        &self.order
    }

    pub fn source(&self) -> &Multiset {
        &self.source
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Left-accumulated partial sums `s_0 = 0, s_i = s_{i-1} + y_i`; the
    /// result has one more entry than the sequencing.
    pub fn partial_sums(&self, g: &Group) -> Vec<Element> {
        let mut sums = Vec::with_capacity(self.order.len() + 1);
        let mut acc = g.zero();
        sums.push(acc);
        for &y in &self.order {
            acc = g.add(acc, y);
            sums.push(acc);
        }
        sums
    }

    /// Appends an element, updating the source multiset.
    pub fn push(&mut self, g: &Group, e: Element) {
        assert!(!g.is_zero(e), "sequencing entries must not be the identity");
        self.order.push(e);
        self.source = self
            .source
            .union(&Multiset::new(g, [(e, 1)]).expect("non-identity entry"));
    }
}
