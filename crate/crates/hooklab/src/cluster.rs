//! Clusters of partitions with equal hook multisets, periodicity checks,
//! and the periodic-cluster database.
//!
//! A cluster of size n and order m is a set of m distinct partitions of n
//! sharing one hook-length multiset. A cluster is periodic of period p when
//! adding any number of boxes to each of the first p rows of all members
//! again yields a cluster; two checkable criteria certify this:
//!
//! 1. deleting the first p parts of every member leaves partitions with
//!    pairwise equal hook multisets, and
//! 2. the multisets `{(λ_i - λ_j) - (i - j) : 1 <= i < j <= p}` agree
//!    across members.
//!
//! Members with fewer than p parts are padded with zero parts for both
//! criteria, and extension by m turns each zero row into a row of length m,
//! so a unit extension always adds exactly p boxes.

use std::collections::HashMap;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::partition::{
    enumerate_partitions, hooks_of_parts, shard_ranges, HookMultiset, Partition, PartitionError,
};

#[derive(Debug, Error)]
pub enum ClusterError {
    #[error("a cluster needs at least two distinct members, got {0}")]
    TooFewMembers(usize),
    #[error("member {member} is a partition of {got}, expected {expected}")]
    WrongSize {
        member: String,
        got: u32,
        expected: u32,
    },
    #[error("members {a} and {b} have different hook multisets")]
    HookMismatch { a: String, b: String },
    #[error("duplicate member {0}")]
    DuplicateMember(String),
    #[error("period must be at least 1")]
    ZeroPeriod,
    #[error("cluster is not periodic of period {period}: {reason}")]
    NotPeriodic { period: u16, reason: String },
    #[error("line {line}: {source}")]
    Parse {
        line: usize,
        #[source]
        source: serde_json::Error,
    },
    #[error("line {line}: invalid member: {source}")]
    BadMember {
        line: usize,
        #[source]
        source: PartitionError,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A maximal (or verified) set of >= 2 partitions of one n sharing a hook
/// multiset. Members are kept in enumeration order.
#[derive(Clone, Debug)]
pub struct Cluster {
    size: u32,
    members: Vec<Partition>,
    shared_hooks: HookMultiset,
}

impl Cluster {
    /// Validates the cluster invariants: order >= 2, pairwise distinct
    /// members of equal size with identical hook multisets.
    pub fn new(mut members: Vec<Partition>) -> Result<Self, ClusterError> {
        if members.len() < 2 {
            return Err(ClusterError::TooFewMembers(members.len()));
        }
        members.sort();
        let size = members[0].size();
        let shared_hooks = members[0].hook_multiset();
        for pair in members.windows(2) {
            if pair[0] == pair[1] {
                return Err(ClusterError::DuplicateMember(pair[1].to_string()));
            }
        }
        for member in &members[1..] {
            if member.size() != size {
                return Err(ClusterError::WrongSize {
                    member: member.to_string(),
                    got: member.size(),
                    expected: size,
                });
            }
            if member.hook_multiset() != shared_hooks {
                return Err(ClusterError::HookMismatch {
                    a: members[0].to_string(),
                    b: member.to_string(),
                });
            }
        }
        Ok(Cluster {
            size,
            members,
            shared_hooks,
        })
    }

    /// Size of the member partitions (the paper's n).
    pub fn size(&self) -> u32 {
        self.size
    }

    /// Number of members.
    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[Partition] {
        &self.members
    }

    pub fn shared_hooks(&self) -> &HookMultiset {
        &self.shared_hooks
    }
}

/// All maximal clusters of size n with order >= `min_order`, in enumeration
/// order of their leading members. `min_order = 1` also reports the
/// partitions whose hook multiset is unique.
pub fn find_clusters(n: u32, min_order: usize) -> Vec<Cluster> {
    assert!(n >= 1, "clusters are defined for n >= 1");
    let min_order = min_order.max(1);

    // Pass 1: per-shard fingerprint tallies, merged associatively.
    let counts: HashMap<u128, u32> = shard_ranges(n)
        .into_par_iter()
        .map(|shard| {
            let mut local: HashMap<u128, u32> = HashMap::new();
            let mut conj = Vec::new();
            let mut hooks = Vec::new();
            enumerate_partitions(n, Some(shard)).for_each_parts(|parts| {
                hooks_of_parts(parts, &mut conj, &mut hooks);
                let fp = HookMultiset::from_unsorted(hooks.clone()).fingerprint();
                *local.entry(fp).or_insert(0) += 1;
            });
            local
        })
        .reduce(HashMap::new, |mut a, b| {
            for (fp, c) in b {
                *a.entry(fp).or_insert(0) += c;
            }
            a
        });

    // Pass 2: collect members only for fingerprints that can reach the
    // requested order, then confirm with exact hook multisets.
    let mut groups: HashMap<u128, Vec<Partition>> = HashMap::new();
    for p in enumerate_partitions(n, None) {
        let fp = p.hook_multiset().fingerprint();
        if counts[&fp] as usize >= min_order {
            groups.entry(fp).or_default().push(p);
        }
    }

    let mut clusters: Vec<Cluster> = Vec::new();
    for (_, candidates) in groups {
        // Split by exact multiset in case two multisets share a fingerprint.
        let mut exact: HashMap<Vec<u16>, Vec<Partition>> = HashMap::new();
        for p in candidates {
            exact
                .entry(p.hook_multiset().lengths().to_vec())
                .or_default()
                .push(p);
        }
        for (_, members) in exact {
            if members.len() >= min_order && members.len() >= 2 {
                clusters.push(Cluster::new(members).expect("grouped members form a cluster"));
            } else if members.len() >= min_order {
                // Singleton classes only appear for min_order = 1.
                let shared_hooks = members[0].hook_multiset();
                clusters.push(Cluster {
                    size: n,
                    members,
                    shared_hooks,
                });
            }
        }
    }
    clusters.sort_by(|a, b| a.members[0].cmp(&b.members[0]));
    clusters
}

/// Parts of `member` with the first `period` parts removed.
fn tail_parts(member: &Partition, period: usize) -> Vec<u16> {
    member.parts().iter().skip(period).copied().collect()
}

/// The multiset `{(λ_i - λ_j) - (i - j) : 1 <= i < j <= p}` with zero
/// padding beyond the last part, sorted for comparison.
fn head_differences(member: &Partition, period: usize) -> Vec<i64> {
    let mut diffs = Vec::with_capacity(period * (period - 1) / 2);
    for i in 1..=period {
        for j in (i + 1)..=period {
            let li = i64::from(member.part(i));
            let lj = i64::from(member.part(j));
            diffs.push((li - lj) - (i as i64 - j as i64));
        }
    }
    diffs.sort_unstable();
    diffs
}

/// Checks the two periodicity criteria for period `p`.
pub fn verify_periodic(cluster: &Cluster, period: u16) -> bool {
    periodicity_failure(cluster, period).is_none()
}

/// Like [`verify_periodic`] but names the first criterion that fails.
pub fn periodicity_failure(cluster: &Cluster, period: u16) -> Option<String> {
    assert!(period >= 1, "period must be at least 1");
    let p = period as usize;
    let members = cluster.members();

    let reference_hooks = {
        let mut conj = Vec::new();
        let mut hooks = Vec::new();
        let tail = tail_parts(&members[0], p);
        hooks_of_parts(&tail, &mut conj, &mut hooks);
        HookMultiset::from_unsorted(hooks)
    };
    for member in &members[1..] {
        let mut conj = Vec::new();
        let mut hooks = Vec::new();
        let tail = tail_parts(member, p);
        hooks_of_parts(&tail, &mut conj, &mut hooks);
        if HookMultiset::from_unsorted(hooks) != reference_hooks {
            return Some(format!(
                "removing the first {period} parts of {} and {} leaves different hook multisets",
                members[0], member
            ));
        }
    }

    let reference_diffs = head_differences(&members[0], p);
    for member in &members[1..] {
        if head_differences(member, p) != reference_diffs {
            return Some(format!(
                "leading difference multisets of {} and {} disagree at period {period}",
                members[0], member
            ));
        }
    }
    None
}

/// A cluster with a verified period; construction re-checks the criteria
/// and spot-verifies extensions for m = 0..=5 against the exact
/// hook-multiset test.
#[derive(Clone, Debug)]
pub struct PeriodicCluster {
    base: Cluster,
    period: u16,
}

impl PeriodicCluster {
    pub fn new(base: Cluster, period: u16) -> Result<Self, ClusterError> {
        if period == 0 {
            return Err(ClusterError::ZeroPeriod);
        }
        if let Some(reason) = periodicity_failure(&base, period) {
            return Err(ClusterError::NotPeriodic { period, reason });
        }
        let pc = PeriodicCluster { base, period };
        for m in 0..=5 {
            pc.extend_checked(m).map_err(|e| ClusterError::NotPeriodic {
                period,
                reason: format!("extension by {m} is not a cluster: {e}"),
            })?;
        }
        Ok(pc)
    }

    pub fn base(&self) -> &Cluster {
        &self.base
    }

    pub fn period(&self) -> u16 {
        self.period
    }

    /// Adds `m` boxes to each of the first `period` rows of every member
    /// (zero rows become rows of length m). The result is validated as a
    /// cluster by exact hook-multiset equality, independently of the
    /// periodicity criteria.
    pub fn extend_checked(&self, m: u16) -> Result<Cluster, ClusterError> {
        let members = self
            .base
            .members()
            .iter()
            .map(|member| extend_member(member, self.period, m))
            .collect();
        let cluster = Cluster::new(members)?;
        debug_assert_eq!(
            cluster.size(),
            self.base.size() + u32::from(self.period) * u32::from(m)
        );
        Ok(cluster)
    }

    /// Infallible extension; valid for every m once construction verified
    /// the criteria (spot-checked through m = 5).
    pub fn extend(&self, m: u16) -> Cluster {
        self.extend_checked(m)
            .expect("verified periodic cluster extends to a cluster")
    }
}

fn extend_member(member: &Partition, period: u16, m: u16) -> Partition {
    if m == 0 {
        return member.clone();
    }
    let p = period as usize;
    let mut parts: Vec<u16> = Vec::with_capacity(member.rows().max(p));
    for i in 0..member.rows().max(p) {
        let base = member.parts().get(i).copied().unwrap_or(0);
        let part = if i < p { base + m } else { base };
        if part > 0 {
            parts.push(part);
        }
    }
    Partition::new(parts)
}

/// One line of the periodic-cluster database.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DbRecord {
    pub size: u32,
    pub period: u16,
    pub members: Vec<Vec<u16>>,
    pub source: String,
}

/// Outcome of re-verifying one database record.
#[derive(Clone, Debug, Serialize)]
pub struct RecordReport {
    pub line: usize,
    pub size: u32,
    pub period: u16,
    pub source: String,
    pub passed: bool,
    pub failure: Option<String>,
}

/// Full re-verification of a periodic-cluster database: cluster invariants,
/// both periodicity criteria, and extension checks for m = 0..=5 per record.
#[derive(Clone, Debug, Serialize)]
pub struct DbReport {
    pub records: Vec<RecordReport>,
}

impl DbReport {
    pub fn all_passed(&self) -> bool {
        self.records.iter().all(|r| r.passed)
    }
}

pub fn parse_database(reader: impl Read) -> Result<Vec<(usize, DbRecord)>, ClusterError> {
    let mut records = Vec::new();
    for (idx, line) in BufReader::new(reader).lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: DbRecord = serde_json::from_str(&line).map_err(|source| {
            ClusterError::Parse {
                line: line_no,
                source,
            }
        })?;
        records.push((line_no, record));
    }
    Ok(records)
}

pub fn verify_database(path: impl AsRef<Path>) -> Result<DbReport, ClusterError> {
    let file = std::fs::File::open(path)?;
    let records = parse_database(file)?;
    let mut reports = Vec::with_capacity(records.len());
    for (line, record) in records {
        reports.push(verify_record(line, &record)?);
    }
    Ok(DbReport { records: reports })
}

fn verify_record(line: usize, record: &DbRecord) -> Result<RecordReport, ClusterError> {
    let mut members = Vec::with_capacity(record.members.len());
    for raw in &record.members {
        let member = Partition::try_new(raw.clone())
            .map_err(|source| ClusterError::BadMember { line, source })?;
        members.push(member);
    }

    let mut failure = None;
    match Cluster::new(members) {
        Ok(cluster) => {
            if cluster.size() != record.size {
                failure = Some(format!(
                    "record says size {}, members have size {}",
                    record.size,
                    cluster.size()
                ));
            } else if let Err(e) = PeriodicCluster::new(cluster, record.period) {
                failure = Some(e.to_string());
            }
        }
        Err(e) => failure = Some(e.to_string()),
    }

    Ok(RecordReport {
        line,
        size: record.size,
        period: record.period,
        source: record.source.clone(),
        passed: failure.is_none(),
        failure,
    })
}
