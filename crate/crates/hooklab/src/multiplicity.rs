//! Maximal and average multiplicities of character degrees and conjugacy
//! class sizes.
//!
//! m(n) grouping never materializes big integers: partitions are grouped by
//! the 128-bit fingerprint of their degree exponent vector in a counting
//! pass, then witnesses are re-derived only for the winning fingerprints
//! and confirmed by exact vector equality. Class sizes are likewise
//! compared through exact prime-exponent vectors of the centralizer order.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_rational::Ratio;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::degree::{factorial_prime_exponent, DegreeContext, DegreeVector};
use crate::fingerprint::{fingerprint_u32s, TAG_CLASS_SIZE};
use crate::partition::{enumerate_partitions, hooks_of_parts, shard_ranges, Partition};

/// The largest group of equal-degree characters of S_n.
#[derive(Clone, Debug)]
pub struct MultiplicityReport {
    pub n: u32,
    pub max_multiplicity: usize,
    pub witness_degree: BigUint,
    pub witness_partitions: Vec<Partition>,
    pub ignore_self_conjugate: bool,
}

/// Per-shard fingerprint tallies of degree vectors, merged associatively.
fn degree_fingerprint_counts(
    ctx: &DegreeContext,
    ignore_self_conjugate: bool,
) -> HashMap<u128, u32> {
    shard_ranges(ctx.n())
        .into_par_iter()
        .map(|shard| {
            let mut local: HashMap<u128, u32> = HashMap::new();
            let mut conj = Vec::new();
            let mut hooks = Vec::new();
            enumerate_partitions(ctx.n(), Some(shard)).for_each_parts(|parts| {
                hooks_of_parts(parts, &mut conj, &mut hooks);
                if ignore_self_conjugate && conj[..] == parts[..] {
                    return;
                }
                let fp = ctx.degree_vector_from_hooks(&hooks).fingerprint();
                *local.entry(fp).or_insert(0) += 1;
            });
            local
        })
        .reduce(HashMap::new, |mut a, b| {
            for (fp, c) in b {
                *a.entry(fp).or_insert(0) += c;
            }
            a
        })
}

/// m(n): the maximal multiplicity of an irreducible character degree of
/// S_n, with one witness group. With `ignore_self_conjugate`, characters
/// labelled by self-conjugate partitions are excluded before grouping.
pub fn max_multiplicity(n: u32, ignore_self_conjugate: bool) -> MultiplicityReport {
    assert!(n >= 1);
    let ctx = DegreeContext::new(n);
    let counts = degree_fingerprint_counts(&ctx, ignore_self_conjugate);

    // Fingerprint counts upper-bound exact group sizes; if the winning
    // fingerprint splits on exact confirmation, widen the candidate set
    // until no unexamined count can beat the best exact group.
    let mut threshold = counts.values().copied().max().unwrap_or(0);
    loop {
        let candidates: Vec<u128> = counts
            .iter()
            .filter(|(_, &c)| c >= threshold)
            .map(|(&fp, _)| fp)
            .collect();
        let mut witnesses: HashMap<u128, Vec<Partition>> =
            candidates.iter().map(|&fp| (fp, Vec::new())).collect();
        for p in enumerate_partitions(n, None) {
            if ignore_self_conjugate && p.is_self_conjugate() {
                continue;
            }
            let fp = ctx.degree_vector(&p).fingerprint();
            if let Some(bucket) = witnesses.get_mut(&fp) {
                bucket.push(p);
            }
        }
        let mut best: Option<(DegreeVector, Vec<Partition>)> = None;
        for (_, bucket) in witnesses {
            let mut exact: HashMap<Box<[u32]>, Vec<Partition>> = HashMap::new();
            for p in bucket {
                let v = ctx.degree_vector(&p);
                exact.entry(v.exponents().into()).or_default().push(p);
            }
            for (_, group) in exact {
                let better = match &best {
                    None => true,
                    Some((_, b)) => {
                        group.len() > b.len() || (group.len() == b.len() && group[0] < b[0])
                    }
                };
                if better {
                    let v = ctx.degree_vector(&group[0]);
                    best = Some((v, group));
                }
            }
        }
        let (vector, mut group) = best.expect("at least one degree group exists");
        // No collision: the exact winner dominates every other fingerprint.
        if group.len() as u32 >= threshold
            || counts.values().all(|&c| c <= group.len() as u32)
        {
            group.sort();
            return MultiplicityReport {
                n,
                max_multiplicity: group.len(),
                witness_degree: ctx.degree_bigint(&vector),
                witness_partitions: group,
                ignore_self_conjugate,
            };
        }
        threshold = group.len() as u32;
    }
}

/// Early-exit test for m(n) >= k; returns a verified witness list of k
/// equal-degree partitions when true.
pub fn multiplicity_at_least(
    n: u32,
    k: usize,
    ignore_self_conjugate: bool,
) -> Option<Vec<Partition>> {
    assert!(n >= 1 && k >= 1);
    let ctx = DegreeContext::new(n);
    let mut groups: HashMap<u128, Vec<Partition>> = HashMap::new();
    for p in enumerate_partitions(n, None) {
        if ignore_self_conjugate && p.is_self_conjugate() {
            continue;
        }
        let v = ctx.degree_vector(&p);
        let bucket = groups.entry(v.fingerprint()).or_default();
        bucket.push(p);
        if bucket.len() >= k {
            // Confirm exactly: the bucket could mix colliding vectors.
            let mut exact: HashMap<Box<[u32]>, Vec<Partition>> = HashMap::new();
            for q in bucket.iter() {
                exact
                    .entry(ctx.degree_vector(q).exponents().into())
                    .or_default()
                    .push(q.clone());
            }
            if let Some(group) = exact.into_values().find(|g| g.len() >= k) {
                return Some(group);
            }
        }
    }
    None
}

/// Exact average multiplicity data: a class count over a distinct count.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AvgMultiplicity {
    pub n: u32,
    /// k(S_n) = p(n).
    pub num_classes: u64,
    /// Distinct character degrees or distinct class sizes.
    pub num_distinct: u64,
}

impl AvgMultiplicity {
    /// The ratio as an exact (reduced) rational.
    pub fn ratio(&self) -> Ratio<BigInt> {
        Ratio::new(
            BigInt::from(self.num_classes),
            BigInt::from(self.num_distinct),
        )
    }

    /// Raw counts as "p/q", unreduced.
    pub fn fraction_string(&self) -> String {
        format!("{}/{}", self.num_classes, self.num_distinct)
    }
}

/// Streaming distinct-count of exponent vectors: fingerprint buckets with
/// exact confirmation inside each bucket.
struct DistinctCounter {
    groups: HashMap<u128, Vec<Box<[u32]>>>,
    total: u64,
}

impl DistinctCounter {
    fn new() -> Self {
        DistinctCounter {
            groups: HashMap::new(),
            total: 0,
        }
    }

    fn add(&mut self, fp: u128, exps: &[u32]) {
        self.total += 1;
        let bucket = self.groups.entry(fp).or_default();
        if !bucket.iter().any(|seen| seen.as_ref() == exps) {
            bucket.push(exps.into());
        }
    }

    fn counts(&self) -> (u64, u64) {
        let distinct = self.groups.values().map(|b| b.len() as u64).sum();
        (self.total, distinct)
    }
}

/// p(n) / |cd(S_n)|: the average multiplicity of a character degree.
pub fn avg_cd_ratio(n: u32) -> AvgMultiplicity {
    assert!(n >= 1);
    let ctx = DegreeContext::new(n);
    let mut conj = Vec::new();
    let mut hooks = Vec::new();
    let mut counter = DistinctCounter::new();
    enumerate_partitions(n, None).for_each_parts(|parts| {
        hooks_of_parts(parts, &mut conj, &mut hooks);
        let v = ctx.degree_vector_from_hooks(&hooks);
        counter.add(v.fingerprint(), v.exponents());
    });
    let (total, distinct) = counter.counts();
    AvgMultiplicity {
        n,
        num_classes: total,
        num_distinct: distinct,
    }
}

/// A partition of n read as the cycle type of a conjugacy class of S_n.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycleType {
    partition: Partition,
}

impl CycleType {
    pub fn new(partition: Partition) -> Self {
        CycleType { partition }
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn n(&self) -> u32 {
        self.partition.size()
    }

    /// Cycle lengths, largest first.
    pub fn cycles(&self) -> &[u16] {
        self.partition.parts()
    }

    /// (cycle length, multiplicity) pairs, lengths descending.
    pub fn multiplicities(&self) -> Vec<(u16, u32)> {
        let mut out: Vec<(u16, u32)> = Vec::new();
        for &len in self.partition.parts() {
            match out.last_mut() {
                Some((l, m)) if *l == len => *m += 1,
                _ => out.push((len, 1)),
            }
        }
        out
    }

    /// Centralizer order z(t) = prod_i i^(m_i) * m_i!.
    pub fn centralizer_order(&self) -> BigUint {
        let mut z = BigUint::one();
        for (len, mult) in self.multiplicities() {
            z *= BigUint::from(len).pow(mult);
            for f in 1..=mult {
                z *= BigUint::from(f);
            }
        }
        z
    }

    /// Class size n!/z(t).
    pub fn class_size(&self) -> BigUint {
        let mut factorial = BigUint::one();
        for m in 1..=self.n() {
            factorial *= BigUint::from(m);
        }
        factorial / self.centralizer_order()
    }

    /// Sign of the class: (-1)^(n - #cycles).
    pub fn sign(&self) -> i32 {
        if (self.n() as usize - self.partition.rows()) % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Prime-exponent vector of z(t) over the primes of `ctx`; class sizes
    /// of one n are equal exactly when these vectors are equal.
    pub fn centralizer_exponents(&self, ctx: &DegreeContext) -> Vec<u32> {
        let mut exps = vec![0u32; ctx.primes().len()];
        for (len, mult) in self.multiplicities() {
            for &(pi, e) in ctx.factor(u32::from(len)) {
                exps[pi as usize] += u32::from(e) * mult;
            }
            for (i, &p) in ctx.primes().iter().enumerate() {
                if p > mult {
                    break;
                }
                exps[i] += factorial_prime_exponent(mult, p);
            }
        }
        exps
    }
}

/// p(n) / |cc(S_n)|: the average multiplicity of a conjugacy class size.
pub fn avg_cc_ratio(n: u32) -> AvgMultiplicity {
    assert!(n >= 1);
    let ctx = DegreeContext::new(n);
    let mut counter = DistinctCounter::new();
    for p in enumerate_partitions(n, None) {
        let t = CycleType::new(p);
        let exps = t.centralizer_exponents(&ctx);
        counter.add(fingerprint_u32s(TAG_CLASS_SIZE, &exps), &exps);
    }
    let (total, distinct) = counter.counts();
    AvgMultiplicity {
        n,
        num_classes: total,
        num_distinct: distinct,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use std::collections::HashSet;

    #[test]
    fn m_of_small_n() {
        assert_eq!(max_multiplicity(2, false).max_multiplicity, 2);
        assert_eq!(max_multiplicity(6, false).max_multiplicity, 4);
        assert_eq!(max_multiplicity(9, false).max_multiplicity, 3);
    }

    #[test]
    fn m_of_29_is_22() {
        let report = max_multiplicity(29, false);
        assert_eq!(report.max_multiplicity, 22);
        assert_eq!(report.witness_partitions.len(), 22);
        // every witness re-verifies to the same exact degree vector
        let ctx = DegreeContext::new(29);
        let v0 = ctx.degree_vector(&report.witness_partitions[0]);
        for w in &report.witness_partitions {
            assert_eq!(ctx.degree_vector(w), v0);
        }
        assert_eq!(ctx.degree_bigint(&v0), report.witness_degree);
    }

    #[test]
    fn degree_five_witnesses_at_n6() {
        let report = max_multiplicity(6, false);
        assert_eq!(report.witness_degree, BigUint::from(5u32));
        let names: HashSet<String> = report
            .witness_partitions
            .iter()
            .map(|p| p.to_string())
            .collect();
        let expected: HashSet<String> = ["5.1", "3.3", "2.2.2", "2.1.1.1.1"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(names, expected);
    }

    #[test]
    fn at_least_boundaries() {
        assert!(multiplicity_at_least(11, 4, false).is_some());
        assert!(multiplicity_at_least(10, 4, false).is_none());
        assert!(multiplicity_at_least(16, 6, false).is_none());
        assert!(multiplicity_at_least(17, 6, false).is_some());
        let witnesses = multiplicity_at_least(21, 8, true).unwrap();
        assert!(witnesses.len() >= 8);
        assert!(witnesses.iter().all(|p| !p.is_self_conjugate()));
        let ctx = DegreeContext::new(21);
        let v0 = ctx.degree_vector(&witnesses[0]);
        for w in &witnesses {
            assert_eq!(ctx.degree_vector(w), v0);
        }
    }

    #[test]
    fn ignore_self_conjugate_never_returns_self_conjugate_witnesses() {
        for n in [9u32, 12, 16] {
            let report = max_multiplicity(n, true);
            assert!(report
                .witness_partitions
                .iter()
                .all(|p| !p.is_self_conjugate()));
        }
    }

    #[test]
    fn avg_cd_small_values() {
        assert_eq!(avg_cd_ratio(1).fraction_string(), "1/1");
        let s6 = avg_cd_ratio(6);
        assert_eq!((s6.num_classes, s6.num_distinct), (11, 5));
        // S4 degrees are {1,3,2,3,1}: distinct {1,2,3}.
        let s4 = avg_cd_ratio(4);
        assert_eq!((s4.num_classes, s4.num_distinct), (5, 3));
    }

    #[test]
    fn class_sizes_of_s4_and_friends() {
        let id = CycleType::new(Partition::new(vec![1, 1, 1, 1]));
        assert_eq!(id.class_size(), BigUint::one());
        let transpositions = CycleType::new(Partition::new(vec![2, 1, 1]));
        assert_eq!(transpositions.class_size(), BigUint::from(6u32));
        let seven_cycles = CycleType::new(Partition::new(vec![7]));
        assert_eq!(seven_cycles.class_size(), BigUint::from(720u32)); // (n-1)!
    }

    #[test]
    fn class_sizes_sum_to_group_order() {
        for n in 1..=30u32 {
            let mut sum = BigUint::zero();
            for p in enumerate_partitions(n, None) {
                sum += CycleType::new(p).class_size();
            }
            let mut factorial = BigUint::one();
            for m in 1..=n {
                factorial *= BigUint::from(m);
            }
            assert_eq!(sum, factorial, "class equation at n = {n}");
        }
    }

    #[test]
    fn centralizer_exponents_match_bigints() {
        for n in [6u32, 10, 14] {
            let ctx = DegreeContext::new(n);
            for p in enumerate_partitions(n, None) {
                let t = CycleType::new(p);
                let exps = t.centralizer_exponents(&ctx);
                let mut product = BigUint::one();
                for (i, &e) in exps.iter().enumerate() {
                    product *= BigUint::from(ctx.primes()[i]).pow(e);
                }
                assert_eq!(product, t.centralizer_order());
            }
        }
    }

    #[test]
    fn avg_cc_small_values() {
        assert_eq!(avg_cc_ratio(1).fraction_string(), "1/1");
        let s4 = avg_cc_ratio(4);
        assert_eq!((s4.num_classes, s4.num_distinct), (5, 4));
        // S5 sizes {1,10,15,20,20,30,24} have 6 distinct values.
        let s5 = avg_cc_ratio(5);
        assert_eq!((s5.num_classes, s5.num_distinct), (7, 6));
    }

    #[test]
    fn avg_cc_distinct_matches_bigint_oracle() {
        for n in 1..=20u32 {
            let sizes: HashSet<BigUint> = enumerate_partitions(n, None)
                .map(|p| CycleType::new(p).class_size())
                .collect();
            assert_eq!(avg_cc_ratio(n).num_distinct as usize, sizes.len());
        }
    }

    #[test]
    fn signs() {
        assert_eq!(CycleType::new(Partition::new(vec![2, 1, 1])).sign(), -1);
        assert_eq!(CycleType::new(Partition::new(vec![3, 1])).sign(), 1);
        assert_eq!(CycleType::new(Partition::new(vec![1; 5])).sign(), 1);
    }
}
