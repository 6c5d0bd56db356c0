//! Integer partitions, Young-diagram combinatorics, and streaming enumeration.
//!
//! A [`Partition`] stores its parts as weakly decreasing positive `u16`
//! values (sizes up to 2^16 are assumed throughout) with the size cached.
//! Enumeration is reverse-lexicographic — `(n)` first, `(1^n)` last — and
//! can be restricted to a band of largest parts so scans shard cleanly
//! across workers.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fingerprint::{fingerprint_u16s, TAG_HOOKS};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PartitionError {
    #[error("parts must be weakly decreasing: part {position} is {part} after {previous}")]
    NotDecreasing {
        position: usize,
        part: u16,
        previous: u16,
    },
    #[error("parts must be positive")]
    ZeroPart,
    #[error("invalid partition literal {literal:?}: {reason}")]
    BadLiteral { literal: String, reason: String },
}

/// A partition of a nonnegative integer into weakly decreasing positive parts.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u16>", into = "Vec<u16>")]
pub struct Partition {
    parts: Vec<u16>,
    n: u32,
}

impl Partition {
    /// Builds a partition, panicking if `parts` is not weakly decreasing
    /// and positive. Use [`Partition::try_new`] for untrusted input.
    pub fn new(parts: Vec<u16>) -> Self {
        Self::try_new(parts).expect("invalid partition")
    }

    pub fn try_new(parts: Vec<u16>) -> Result<Self, PartitionError> {
        let mut previous = u16::MAX;
        for (position, &part) in parts.iter().enumerate() {
            if part == 0 {
                return Err(PartitionError::ZeroPart);
            }
            if part > previous {
                return Err(PartitionError::NotDecreasing {
                    position,
                    part,
                    previous,
                });
            }
            previous = part;
        }
        let n = parts.iter().map(|&p| u32::from(p)).sum();
        Ok(Partition { parts, n })
    }

    pub fn empty() -> Self {
        Partition {
            parts: Vec::new(),
            n: 0,
        }
    }

    /// The integer being partitioned.
    pub fn size(&self) -> u32 {
        self.n
    }

    pub fn parts(&self) -> &[u16] {
        &self.parts
    }

    /// Number of rows of the Young diagram.
    pub fn rows(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Part at 1-based row `i`, zero beyond the last row.
    pub fn part(&self, i: usize) -> u16 {
        if i >= 1 && i <= self.parts.len() {
            self.parts[i - 1]
        } else {
            0
        }
    }

    /// Writes the conjugate partition's parts into `out`.
    pub fn conjugate_into(&self, out: &mut Vec<u16>) {
        conjugate_parts(&self.parts, out);
    }

    /// The conjugate partition (transpose of the Young diagram).
    pub fn conjugate(&self) -> Partition {
        let mut parts = Vec::new();
        self.conjugate_into(&mut parts);
        Partition {
            parts,
            n: self.n,
        }
    }

    pub fn is_self_conjugate(&self) -> bool {
        let mut conj = Vec::with_capacity(self.parts.len());
        self.conjugate_into(&mut conj);
        conj == self.parts
    }

    /// Hook lengths in row-major order (unsorted), written into `out`.
    /// `conj_scratch` is reused to hold the conjugate parts.
    pub fn hooks_into(&self, conj_scratch: &mut Vec<u16>, out: &mut Vec<u16>) {
        hooks_of_parts(&self.parts, conj_scratch, out);
    }

    /// The multiset of all hook lengths, sorted descending, with its
    /// 128-bit fingerprint.
    pub fn hook_multiset(&self) -> HookMultiset {
        let mut conj = Vec::new();
        let mut hooks = Vec::new();
        self.hooks_into(&mut conj, &mut hooks);
        HookMultiset::from_unsorted(hooks)
    }

    /// Boxes whose removal leaves a partition; exactly the hook-length-1 boxes.
    pub fn removable_boxes(&self) -> Vec<BoxPosition> {
        let mut boxes = Vec::new();
        for (i, &part) in self.parts.iter().enumerate() {
            let below = self.parts.get(i + 1).copied().unwrap_or(0);
            if part > below {
                boxes.push(BoxPosition {
                    row: i as u32 + 1,
                    column: u32::from(part),
                });
            }
        }
        boxes
    }

    /// Positions outside the diagram whose addition leaves a partition.
    pub fn addable_boxes(&self) -> Vec<BoxPosition> {
        let mut boxes = Vec::new();
        for i in 0..=self.parts.len() {
            let here = self.parts.get(i).copied().unwrap_or(0);
            let above = if i == 0 { u16::MAX } else { self.parts[i - 1] };
            if here < above {
                boxes.push(BoxPosition {
                    row: i as u32 + 1,
                    column: u32::from(here) + 1,
                });
            }
        }
        boxes
    }

    /// The partition of n-1 obtained by removing the box at `pos`.
    /// Panics if `pos` is not removable.
    pub fn remove_box(&self, pos: BoxPosition) -> Partition {
        let i = pos.row as usize - 1;
        assert!(
            i < self.parts.len() && u32::from(self.parts[i]) == pos.column,
            "box {pos:?} is not removable from {self}"
        );
        let mut parts = self.parts.clone();
        if parts[i] == 1 {
            parts.remove(i);
        } else {
            parts[i] -= 1;
        }
        let p = Partition::try_new(parts).expect("box was not removable");
        debug_assert_eq!(p.size(), self.n - 1);
        p
    }

    /// The partition of n+1 obtained by adding the box at `pos`.
    /// Panics if `pos` is not addable.
    pub fn add_box(&self, pos: BoxPosition) -> Partition {
        let i = pos.row as usize - 1;
        assert!(i <= self.parts.len(), "box {pos:?} is not addable to {self}");
        let mut parts = self.parts.clone();
        if i == parts.len() {
            assert_eq!(pos.column, 1, "box {pos:?} is not addable to {self}");
            parts.push(1);
        } else {
            assert_eq!(
                u32::from(parts[i]) + 1,
                pos.column,
                "box {pos:?} is not addable to {self}"
            );
            parts[i] += 1;
        }
        Partition::try_new(parts).expect("box was not addable")
    }

    /// Minimum number of boxes to remove so that a self-conjugate partition
    /// contained in this one remains. Computed as `n - |λ ∧ λ'|` where
    /// `λ ∧ λ'` takes the rowwise minimum with the conjugate; that meet is
    /// itself self-conjugate and contains every self-conjugate sub-partition.
    pub fn self_conjugate_defect(&self) -> u32 {
        let mut conj = Vec::new();
        self.conjugate_into(&mut conj);
        let meet: u32 = self
            .parts
            .iter()
            .zip(conj.iter())
            .map(|(&a, &b)| u32::from(a.min(b)))
            .sum();
        self.n - meet
    }

    /// Containment of Young diagrams: every row of `other` fits inside ours.
    pub fn contains(&self, other: &Partition) -> bool {
        other.parts.len() <= self.parts.len()
            && other
                .parts
                .iter()
                .zip(self.parts.iter())
                .all(|(&o, &s)| o <= s)
    }
}

/// Orders partitions by size, then by enumeration (reverse-lexicographic)
/// position: `(n)` sorts first among partitions of n, `(1^n)` last.
impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n
            .cmp(&other.n)
            .then_with(|| other.parts.cmp(&self.parts))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "-");
        }
        for (i, part) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ".")?;
            }
            write!(f, "{part}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Partition({})", self)
    }
}

/// Parses the CLI literal format: dot-separated parts, largest first,
/// e.g. `5.4.1`.
impl FromStr for Partition {
    type Err = PartitionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let literal = s.trim();
        if literal.is_empty() {
            return Err(PartitionError::BadLiteral {
                literal: s.to_string(),
                reason: "empty literal".to_string(),
            });
        }
        let mut parts = Vec::new();
        for piece in literal.split('.') {
            let part: u16 = piece.parse().map_err(|_| PartitionError::BadLiteral {
                literal: s.to_string(),
                reason: format!("bad part {piece:?}"),
            })?;
            parts.push(part);
        }
        Partition::try_new(parts)
    }
}

impl TryFrom<Vec<u16>> for Partition {
    type Error = PartitionError;

    fn try_from(parts: Vec<u16>) -> Result<Self, Self::Error> {
        Partition::try_new(parts)
    }
}

impl From<Partition> for Vec<u16> {
    fn from(p: Partition) -> Vec<u16> {
        p.parts
    }
}

pub(crate) fn conjugate_parts(parts: &[u16], out: &mut Vec<u16>) {
    out.clear();
    let Some(&first) = parts.first() else {
        return;
    };
    out.reserve(first as usize);
    // Column j (1-based) has #\{i : parts[i] >= j\} boxes.
    let mut row = parts.len();
    for j in 1..=first {
        while parts[row - 1] < j {
            row -= 1;
        }
        out.push(row as u16);
    }
}

pub(crate) fn hooks_of_parts(parts: &[u16], conj_scratch: &mut Vec<u16>, out: &mut Vec<u16>) {
    conjugate_parts(parts, conj_scratch);
    out.clear();
    for (i, &part) in parts.iter().enumerate() {
        let i = i as u16;
        for j in 0..part {
            // arm + leg + 1 with 0-based (i, j)
            out.push(part - j + conj_scratch[j as usize] - i - 1);
        }
    }
}

/// Sorts hook lengths descending via counting sort (values are <= n).
fn sort_hooks_descending(hooks: &mut Vec<u16>) {
    let max = hooks.iter().copied().max().unwrap_or(0) as usize;
    let mut counts = vec![0u32; max + 1];
    for &h in hooks.iter() {
        counts[h as usize] += 1;
    }
    hooks.clear();
    for value in (1..=max).rev() {
        for _ in 0..counts[value] {
            hooks.push(value as u16);
        }
    }
}

/// The multiset of hook lengths of a partition, sorted descending,
/// carrying a 128-bit fingerprint of the sorted sequence.
#[derive(Clone, Eq, Serialize, Deserialize)]
pub struct HookMultiset {
    lengths: Vec<u16>,
    fingerprint: u128,
}

impl HookMultiset {
    pub fn from_unsorted(mut hooks: Vec<u16>) -> Self {
        sort_hooks_descending(&mut hooks);
        let fingerprint = fingerprint_u16s(TAG_HOOKS, &hooks);
        HookMultiset {
            lengths: hooks,
            fingerprint,
        }
    }

    /// Hook lengths sorted descending; one entry per box.
    pub fn lengths(&self) -> &[u16] {
        &self.lengths
    }

    pub fn fingerprint(&self) -> u128 {
        self.fingerprint
    }

    pub fn len(&self) -> usize {
        self.lengths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lengths.is_empty()
    }
}

impl PartialEq for HookMultiset {
    fn eq(&self, other: &Self) -> bool {
        self.fingerprint == other.fingerprint && self.lengths == other.lengths
    }
}

impl fmt::Debug for HookMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HookMultiset{:?}", self.lengths)
    }
}

/// 1-based box coordinates in a Young diagram.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BoxPosition {
    pub row: u32,
    pub column: u32,
}

/// Streams every partition of `n` in reverse-lexicographic order, optionally
/// restricted to largest part within `[largest_min, largest_max]`.
///
/// The iterator yields owned [`Partition`]s; hot scans should prefer
/// [`PartitionIter::for_each_parts`], which lends out the internal buffer.
pub struct PartitionIter {
    current: Vec<u16>,
    largest_min: u16,
    started: bool,
    done: bool,
}

/// All partitions of `n`, reverse-lexicographically: `(n)` first, `(1^n)` last.
pub fn enumerate_partitions(n: u32, shard: Option<(u16, u16)>) -> PartitionIter {
    let (lo, hi) = shard.unwrap_or((1, u16::MAX));
    let n16 = u16::try_from(n).expect("partition sizes are limited to 2^16 - 1");
    if n == 0 {
        // The empty partition has no largest part; any shard excludes it.
        return PartitionIter {
            current: Vec::new(),
            largest_min: 0,
            started: false,
            done: shard.is_some(),
        };
    }
    let hi = hi.min(n16);
    if lo > hi {
        return PartitionIter {
            current: Vec::new(),
            largest_min: 1,
            started: false,
            done: true,
        };
    }
    // First partition with largest part <= hi: greedily fill with hi.
    let mut current = Vec::with_capacity((n / u32::from(hi) + 2) as usize);
    let mut remaining = n;
    while remaining > 0 {
        let next = (u32::from(hi)).min(remaining) as u16;
        current.push(next);
        remaining -= u32::from(next);
    }
    PartitionIter {
        current,
        largest_min: lo,
        started: false,
        done: false,
    }
}

impl PartitionIter {
    /// Advances to the next partition in place. Returns false when exhausted.
    fn advance(&mut self) -> bool {
        if self.done {
            return false;
        }
        if !self.started {
            self.started = true;
        } else if !next_partition(&mut self.current) {
            self.done = true;
            return false;
        }
        if self.current.first().copied().unwrap_or(0) < self.largest_min {
            self.done = true;
            return false;
        }
        true
    }

    /// Visits each partition's parts without allocating per item.
    pub fn for_each_parts(mut self, mut f: impl FnMut(&[u16])) {
        while self.advance() {
            f(&self.current);
        }
    }
}

impl Iterator for PartitionIter {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if !self.advance() {
            return None;
        }
        let parts = self.current.clone();
        let n = parts.iter().map(|&p| u32::from(p)).sum();
        Some(Partition { parts, n })
    }
}

/// Rewrites `parts` into its reverse-lexicographic successor.
/// Returns false at `(1^n)`.
fn next_partition(parts: &mut Vec<u16>) -> bool {
    // Everything after the rightmost part > 1 is a run of 1s.
    let Some(pivot) = parts.iter().rposition(|&p| p > 1) else {
        return false;
    };
    let ones = parts.len() - pivot - 1;
    let cap = parts[pivot] - 1;
    parts[pivot] = cap;
    parts.truncate(pivot + 1);
    let mut remaining = ones as u32 + 1;
    while remaining > 0 {
        let next = u32::from(cap).min(remaining) as u16;
        parts.push(next);
        remaining -= u32::from(next);
    }
    true
}

/// p(n) by the pentagonal-number recurrence
/// p(n) = sum_k (-1)^(k+1) [p(n - k(3k-1)/2) + p(n - k(3k+1)/2)].
pub fn partition_count(n: u32) -> BigUint {
    partition_counts_up_to(n).pop().unwrap()
}

/// p(0), p(1), ..., p(n) in one pass of the recurrence.
pub fn partition_counts_up_to(n: u32) -> Vec<BigUint> {
    let n = n as usize;
    let mut table: Vec<BigUint> = Vec::with_capacity(n + 1);
    table.push(BigUint::one());
    for i in 1..=n {
        let mut acc = BigUint::zero();
        let mut neg = BigUint::zero();
        let mut k = 1usize;
        loop {
            let g1 = k * (3 * k - 1) / 2;
            if g1 > i {
                break;
            }
            let g2 = k * (3 * k + 1) / 2;
            if k % 2 == 1 {
                acc += &table[i - g1];
                if g2 <= i {
                    acc += &table[i - g2];
                }
            } else {
                neg += &table[i - g1];
                if g2 <= i {
                    neg += &table[i - g2];
                }
            }
            k += 1;
        }
        table.push(acc - neg);
    }
    table
}

/// Splits `1..=n` largest-part values into contiguous shard ranges, one per
/// largest part, largest first, so concatenating shard streams reproduces
/// the full enumeration order.
pub fn shard_ranges(n: u32) -> Vec<(u16, u16)> {
    let n16 = n.min(u32::from(u16::MAX)) as u16;
    (1..=n16).rev().map(|k| (k, k)).collect()
}
