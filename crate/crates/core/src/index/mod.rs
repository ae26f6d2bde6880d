//! Indices (finite compositions of positive integers) and the operations the
//! transport algorithms perform on them.
//!
//! An index `k = (k_1, ..., k_a)` is written `3,2` in canonical text form and
//! `∅` when empty. Nested sums run over `0 < n_1 < ... < n_a`, so an index is
//! *admissible* when its **last** entry is at least 2.

mod arrow;
mod formal;
pub mod oracle;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use arrow::{Arrow, ArrowOp, ArrowWord};
pub use formal::FormalSum;

/// Symbol used for the empty index in text form.
pub const EMPTY_SYMBOL: &str = "∅";

/// A finite sequence of positive integers. Ordering is lexicographic on the
/// entries, with `∅` smallest.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize)]
#[serde(transparent)]
pub struct Index(Vec<u32>);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IndexClass {
    Empty,
    NonAdmissible,
    Admissible,
}

impl Index {
    pub fn empty() -> Self {
        Index(Vec::new())
    }

    pub fn new(entries: Vec<u32>) -> Result<Self> {
        if let Some(pos) = entries.iter().position(|&e| e == 0) {
            return Err(Error::Parse {
                token: "0".into(),
                reason: format!("entry {} is zero; entries must be positive", pos + 1),
            });
        }
        Ok(Index(entries))
    }

    /// Builds an index from entries known to be positive.
    ///
    /// Panics on a zero entry; use [`Index::new`] for untrusted input.
    pub fn from_slice(entries: &[u32]) -> Self {
        assert!(entries.iter().all(|&e| e >= 1), "index entries must be positive: {entries:?}");
        Index(entries.to_vec())
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<u32> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<u32> {
        self.0.last().copied()
    }

    pub fn classify(&self) -> IndexClass {
        match self.last() {
            None => IndexClass::Empty,
            Some(1) => IndexClass::NonAdmissible,
            Some(_) => IndexClass::Admissible,
        }
    }

    /// Membership in `I'`: nonempty with last entry at least 2.
    pub fn is_admissible(&self) -> bool {
        self.classify() == IndexClass::Admissible
    }

    /// Membership in `I \ I'`: nonempty with last entry 1.
    pub fn is_non_admissible(&self) -> bool {
        self.classify() == IndexClass::NonAdmissible
    }

    /// True for the one-entry index `(1)`.
    pub fn is_unit(&self) -> bool {
        self.0 == [1]
    }

    /// `k_→ = (k_1, ..., k_a, 1)`.
    pub fn append_one(&self) -> Index {
        let mut v = self.0.clone();
        v.push(1);
        Index(v)
    }

    /// `←k = (1, k_1, ..., k_a)`.
    pub fn prepend_one(&self) -> Index {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(1);
        v.extend_from_slice(&self.0);
        Index(v)
    }

    /// `k_↑`; a no-op on `∅`.
    pub fn raise_last(&self) -> Index {
        self.raise_last_by(1)
    }

    pub fn raise_last_by(&self, j: u32) -> Index {
        let mut v = self.0.clone();
        if let Some(x) = v.last_mut() {
            *x += j;
        }
        Index(v)
    }

    /// `↑k`; a no-op on `∅`.
    pub fn raise_first(&self) -> Index {
        self.raise_first_by(1)
    }

    pub fn raise_first_by(&self, j: u32) -> Index {
        let mut v = self.0.clone();
        if let Some(x) = v.first_mut() {
            *x += j;
        }
        Index(v)
    }

    /// `k_↓`; a no-op on `∅`, an error when the last entry is 1.
    pub fn lower_last(&self) -> Result<Index> {
        self.lower_last_by(1)
    }

    pub fn lower_last_by(&self, j: u32) -> Result<Index> {
        let mut v = self.0.clone();
        if let Some(x) = v.last_mut() {
            if *x <= j {
                return Err(self.inapplicable(ArrowOp::DownLast(j)));
            }
            *x -= j;
        }
        Ok(Index(v))
    }

    /// `↓k`; a no-op on `∅`, an error when the first entry is 1.
    pub fn lower_first(&self) -> Result<Index> {
        self.lower_first_by(1)
    }

    pub fn lower_first_by(&self, j: u32) -> Result<Index> {
        let mut v = self.0.clone();
        if let Some(x) = v.first_mut() {
            if *x <= j {
                return Err(self.inapplicable(ArrowOp::DownFirst(j)));
            }
            *x -= j;
        }
        Ok(Index(v))
    }

    /// Removes a trailing 1: the `k` with `k_→ = self`.
    pub fn strip_last_one(&self) -> Option<Index> {
        match self.0.split_last() {
            Some((1, rest)) => Some(Index(rest.to_vec())),
            _ => None,
        }
    }

    /// Removes a leading 1: the `k` with `←k = self`.
    pub fn strip_first_one(&self) -> Option<Index> {
        match self.0.split_first() {
            Some((1, rest)) => Some(Index(rest.to_vec())),
            _ => None,
        }
    }

    pub fn apply(&self, op: ArrowOp) -> Result<Index> {
        op.apply(self)
    }

    /// `k̄ = (k_a, ..., k_1)`.
    pub fn reversed(&self) -> Index {
        Index(self.0.iter().rev().copied().collect())
    }

    /// `k_(i) = (k_1, ..., k_i)`.
    pub fn prefix(&self, i: usize) -> Index {
        Index(self.0[..i].to_vec())
    }

    /// `k^(i) = (k_{i+1}, ..., k_a)`.
    pub fn suffix(&self, i: usize) -> Index {
        Index(self.0[i..].to_vec())
    }

    /// `k^σ = (k_a, k_1, ..., k_{a-1})`.
    pub fn rotated(&self) -> Index {
        let mut v = self.0.clone();
        if !v.is_empty() {
            v.rotate_right(1);
        }
        Index(v)
    }

    pub fn concat(&self, other: &Index) -> Index {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Index(v)
    }

    /// Raw exponent vector with the last entry lowered by one (entries may become 0).
    pub(crate) fn exps_last_lowered(&self) -> Vec<u32> {
        let mut v = self.0.clone();
        if let Some(x) = v.last_mut() {
            *x -= 1;
        }
        v
    }

    /// Raw exponent vector with the first entry lowered by one.
    pub(crate) fn exps_first_lowered(&self) -> Vec<u32> {
        let mut v = self.0.clone();
        if let Some(x) = v.first_mut() {
            *x -= 1;
        }
        v
    }

    fn inapplicable(&self, op: ArrowOp) -> Error {
        Error::InapplicableArrow { op: op.to_string(), index: format!("({self})") }
    }

    /// All indices of weight exactly `w`, in lexicographic order.
    pub fn all_of_weight(w: u32) -> Vec<Index> {
        fn rec(rem: u32, cur: &mut Vec<u32>, out: &mut Vec<Index>) {
            if rem == 0 {
                out.push(Index(cur.clone()));
                return;
            }
            for e in 1..=rem {
                cur.push(e);
                rec(rem - e, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(w, &mut Vec::new(), &mut out);
        out
    }

    /// All indices with weight at most `max_weight`, including `∅`.
    pub fn all_up_to_weight(max_weight: u32) -> Vec<Index> {
        (0..=max_weight).flat_map(Index::all_of_weight).collect()
    }

    /// Wraps the canonical form in parentheses, `∅` stays bare: `(3,2)`.
    pub fn paren(&self) -> Paren<'_> {
        Paren(self)
    }
}

/// Parses `"3,2"`, `"(3,2)"`, `"∅"`, `""` or `"[]"`.
impl FromStr for Index {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let t = text.trim();
        let t = t
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .or_else(|| t.strip_prefix('[').and_then(|s| s.strip_suffix(']')))
            .unwrap_or(t)
            .trim();
        if t.is_empty() || t == EMPTY_SYMBOL {
            return Ok(Index::empty());
        }
        let mut entries = Vec::new();
        for tok in t.split(',') {
            let tok = tok.trim();
            let value: u32 = tok.parse().map_err(|_| Error::Parse {
                token: tok.to_string(),
                reason: "expected a positive decimal integer".into(),
            })?;
            if value == 0 {
                return Err(Error::Parse {
                    token: tok.to_string(),
                    reason: "entries must be positive".into(),
                });
            }
            entries.push(value);
        }
        Ok(Index(entries))
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str(EMPTY_SYMBOL);
        }
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.paren())
    }
}

pub struct Paren<'a>(&'a Index);

impl fmt::Display for Paren<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            f.write_str(EMPTY_SYMBOL)
        } else {
            write!(f, "({})", self.0)
        }
    }
}

impl<'de> Deserialize<'de> for Index {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let entries = Vec::<u32>::deserialize(d)?;
        Index::new(entries).map_err(serde::de::Error::custom)
    }
}

impl TryFrom<Vec<u32>> for Index {
    type Error = Error;

    fn try_from(v: Vec<u32>) -> Result<Self> {
        Index::new(v)
    }
}

/// Distinct cyclic rotations of a nonempty index, sorted.
pub fn cyclic_class(k: &Index) -> Result<Vec<Index>> {
    if k.is_empty() {
        return Err(Error::domain("cyclic class of the empty index"));
    }
    let mut out = Vec::with_capacity(k.depth());
    let mut cur = k.clone();
    for _ in 0..k.depth() {
        out.push(cur.clone());
        cur = cur.rotated();
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// `ind!(3, 2)` builds an index from literal positive entries.
#[macro_export]
macro_rules! ind {
    () => { $crate::Index::empty() };
    ($($e:expr),+ $(,)?) => { $crate::Index::from_slice(&[$($e),+]) };
}
