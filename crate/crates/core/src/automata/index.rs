use std::fmt;

use crate::error::{Error, Result};

pub type Priority = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IndexKind {
    /// Accept iff the largest priority seen infinitely often is even.
    Strong,
    /// Accept iff the largest priority seen at all is even.
    Weak,
}

/// A parity index: a kind and a closed priority range `lo..=hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParityIndex {
    pub kind: IndexKind,
    pub lo: Priority,
    pub hi: Priority,
}

impl ParityIndex {
    pub fn new(kind: IndexKind, lo: Priority, hi: Priority) -> Result<Self> {
        if lo > hi {
            return Err(Error::UnsupportedIndex(format!("empty range {lo}..{hi}")));
        }
        Ok(ParityIndex { kind, lo, hi })
    }

    pub fn strong(lo: Priority, hi: Priority) -> Self {
        ParityIndex::new(IndexKind::Strong, lo, hi).unwrap()
    }

    pub fn weak(lo: Priority, hi: Priority) -> Self {
        ParityIndex::new(IndexKind::Weak, lo, hi).unwrap()
    }

    pub fn contains(&self, k: Priority) -> bool {
        self.lo <= k && k <= self.hi
    }

    pub fn priorities(&self) -> impl Iterator<Item = Priority> {
        self.lo..=self.hi
    }

    pub fn size(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    /// Same index with the range shifted down by the largest even number not
    /// above `lo`, so that `lo` becomes 0 or 1.
    pub fn shifted(&self) -> Self {
        let d = self.lo - self.lo % 2;
        ParityIndex { kind: self.kind, lo: self.lo - d, hi: self.hi - d }
    }

    /// Membership of a priority sequence `u v^ω` in the index language.
    pub fn accepts(&self, prefix: &[Priority], period: &[Priority]) -> bool {
        let top = match self.kind {
            IndexKind::Strong => period.iter().copied().max(),
            IndexKind::Weak => prefix.iter().chain(period).copied().max(),
        };
        top.is_some_and(|k| k % 2 == 0)
    }
}

impl fmt::Display for ParityIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            IndexKind::Strong => "strong",
            IndexKind::Weak => "weak",
        };
        write!(f, "{k} {} {}", self.lo, self.hi)
    }
}
