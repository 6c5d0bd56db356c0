//! Exact character degrees as prime-exponent vectors.
//!
//! The hook formula gives `deg(λ) = n! / prod(H(λ))`. Rather than carry big
//! integers through every scan, a [`DegreeVector`] stores the exponent of
//! each prime p <= n in the factored degree: `e_p = e_p(n!) - Σ_h e_p(h)`.
//! Degrees are equal exactly when their exponent vectors are equal, which
//! keeps grouping by degree allocation-light at scale. Comparison uses a
//! floating log-sum fast path with an exact big-integer fallback whenever
//! the log difference is inside a safety margin.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::One;

use crate::fingerprint::{fingerprint_u32s, TAG_DEGREE};
use crate::partition::Partition;

/// Natural-log margin under which the comparison falls back to exact
/// big-integer arithmetic. Accumulated f64 error over a degree's log is
/// orders of magnitude below this at any size the scans reach.
pub const LOG_COMPARE_MARGIN: f64 = 1e-6;

/// Ascending list of all primes up to `bound`.
#[derive(Clone, Debug)]
pub struct PrimeSieve {
    bound: u32,
    primes: Vec<u32>,
}

impl PrimeSieve {
    pub fn new(bound: u32) -> Self {
        let mut composite = vec![false; bound as usize + 1];
        let mut primes = Vec::new();
        for candidate in 2..=bound as usize {
            if !composite[candidate] {
                primes.push(candidate as u32);
                let mut multiple = candidate * candidate;
                while multiple <= bound as usize {
                    composite[multiple] = true;
                    multiple += candidate;
                }
            }
        }
        PrimeSieve { bound, primes }
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }
}

/// The degree of the character labelled by a partition of `n`, stored as
/// one exponent per prime <= n (sieve order).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DegreeVector {
    n: u32,
    exponents: Box<[u32]>,
}

impl DegreeVector {
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Exponents aligned with the primes <= n, ascending.
    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn fingerprint(&self) -> u128 {
        fingerprint_u32s(TAG_DEGREE, &self.exponents)
    }

    /// True for the degree-1 characters `(n)` and `(1^n)`.
    pub fn is_one(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }
}

/// Legendre's formula: exponent of `p` in `n!`.
pub fn factorial_prime_exponent(n: u32, p: u32) -> u32 {
    let mut total = 0;
    let mut power = u64::from(p);
    while power <= u64::from(n) {
        total += n / power as u32;
        power *= u64::from(p);
    }
    total
}

/// Per-size tables for computing and comparing degree vectors of one `n`.
pub struct DegreeContext {
    n: u32,
    sieve: PrimeSieve,
    /// factors[m] = factorization of m as (prime index, exponent) pairs.
    factors: Vec<Vec<(u16, u8)>>,
    /// Exponent of each prime in n!.
    factorial_exponents: Vec<u32>,
    ln_primes: Vec<f64>,
    /// ln(m) for 0 < m <= n (index 0 unused).
    ln_ints: Vec<f64>,
    ln_factorial: f64,
}

impl DegreeContext {
    pub fn new(n: u32) -> Self {
        let sieve = PrimeSieve::new(n.max(2));
        let num_primes = sieve.primes.iter().take_while(|&&p| p <= n).count();
        let primes = &sieve.primes[..num_primes];

        // Smallest-prime-factor sieve drives the factor table.
        let mut spf = vec![0u32; n as usize + 1];
        for &p in primes {
            let mut m = p as usize;
            while m <= n as usize {
                if spf[m] == 0 {
                    spf[m] = p;
                }
                m += p as usize;
            }
        }
        let mut prime_index = vec![0u16; n as usize + 1];
        for (i, &p) in primes.iter().enumerate() {
            prime_index[p as usize] = i as u16;
        }
        let mut factors: Vec<Vec<(u16, u8)>> = vec![Vec::new(); n as usize + 1];
        for m in 2..=n as usize {
            let mut rest = m;
            let entry = &mut factors[m];
            while rest > 1 {
                let p = spf[rest] as usize;
                let mut exp = 0u8;
                while rest % p == 0 {
                    rest /= p;
                    exp += 1;
                }
                entry.push((prime_index[p], exp));
            }
        }

        let factorial_exponents = primes
            .iter()
            .map(|&p| factorial_prime_exponent(n, p))
            .collect();
        let ln_primes = primes.iter().map(|&p| f64::from(p).ln()).collect();
        let mut ln_ints = vec![0.0; n as usize + 1];
        let mut ln_factorial = 0.0;
        for m in 1..=n as usize {
            ln_ints[m] = (m as f64).ln();
            ln_factorial += ln_ints[m];
        }

        DegreeContext {
            n,
            sieve,
            factors,
            factorial_exponents,
            ln_primes,
            ln_ints,
            ln_factorial,
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn sieve(&self) -> &PrimeSieve {
        &self.sieve
    }

    /// Primes <= n, ascending; the coordinate system of all vectors here.
    pub fn primes(&self) -> &[u32] {
        &self.sieve.primes[..self.factorial_exponents.len()]
    }

    /// ln(n!).
    pub fn ln_factorial(&self) -> f64 {
        self.ln_factorial
    }

    /// Exponent vector of n! (Legendre), the starting point of every degree.
    pub fn factorial_exponents(&self) -> &[u32] {
        &self.factorial_exponents
    }

    /// Factorization of `m <= n` as (prime index, exponent) pairs.
    pub fn factor(&self, m: u32) -> &[(u16, u8)] {
        &self.factors[m as usize]
    }

    /// Subtracts the factorization of each hook from the exponents of n!.
    /// The running values never go negative: each prime's final exponent is
    /// the exponent in the integer degree.
    pub fn degree_vector_from_hooks(&self, hooks: &[u16]) -> DegreeVector {
        debug_assert_eq!(hooks.len() as u32, self.n);
        let mut exponents = self.factorial_exponents.clone();
        for &h in hooks {
            for &(pi, e) in &self.factors[h as usize] {
                exponents[pi as usize] -= u32::from(e);
            }
        }
        DegreeVector {
            n: self.n,
            exponents: exponents.into_boxed_slice(),
        }
    }

    pub fn degree_vector(&self, partition: &Partition) -> DegreeVector {
        assert_eq!(
            partition.size(),
            self.n,
            "degree context is for n = {}, got a partition of {}",
            self.n,
            partition.size()
        );
        let mut conj = Vec::new();
        let mut hooks = Vec::new();
        partition.hooks_into(&mut conj, &mut hooks);
        self.degree_vector_from_hooks(&hooks)
    }

    /// Materializes the exact degree `prod p^(e_p)`.
    pub fn degree_bigint(&self, v: &DegreeVector) -> BigUint {
        let mut value = BigUint::one();
        for (i, &e) in v.exponents.iter().enumerate() {
            if e > 0 {
                value *= BigUint::from(self.primes()[i]).pow(e);
            }
        }
        value
    }

    /// ln of the degree from its exponent vector.
    pub fn log_degree(&self, v: &DegreeVector) -> f64 {
        v.exponents
            .iter()
            .zip(self.ln_primes.iter())
            .map(|(&e, &lp)| f64::from(e) * lp)
            .sum()
    }

    /// ln of the degree straight from unsorted hook lengths:
    /// ln(n!) - Σ ln(h).
    pub fn log_degree_from_hooks(&self, hooks: &[u16]) -> f64 {
        let hook_sum: f64 = hooks.iter().map(|&h| self.ln_ints[h as usize]).sum();
        self.ln_factorial - hook_sum
    }

    /// Orders two degrees of the same n exactly. Log fast path; exact
    /// big-integer comparison whenever the logs are within
    /// [`LOG_COMPARE_MARGIN`].
    pub fn compare_degrees(&self, a: &DegreeVector, b: &DegreeVector) -> Ordering {
        assert_eq!(a.n, b.n, "degree vectors must share n");
        if a.exponents == b.exponents {
            return Ordering::Equal;
        }
        let delta = self.log_degree(a) - self.log_degree(b);
        if delta > LOG_COMPARE_MARGIN {
            return Ordering::Greater;
        }
        if delta < -LOG_COMPARE_MARGIN {
            return Ordering::Less;
        }
        self.compare_degrees_exact(&a.exponents, &b.exponents)
    }

    /// Compares `prod p^(a_i)` with `prod p^(b_i)` by multiplying out only
    /// the exponent differences.
    fn compare_degrees_exact(&self, a: &[u32], b: &[u32]) -> Ordering {
        let mut left = BigUint::one();
        let mut right = BigUint::one();
        for (i, (&ea, &eb)) in a.iter().zip(b.iter()).enumerate() {
            if ea > eb {
                left *= BigUint::from(self.primes()[i]).pow(ea - eb);
            } else if eb > ea {
                right *= BigUint::from(self.primes()[i]).pow(eb - ea);
            }
        }
        left.cmp(&right)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::enumerate_partitions;
    use num_traits::Zero;
    use std::collections::HashMap;

    /// Independent oracle: the hook-formula quotient with big integers
    /// and hand-counted hooks from the Young grid.
    fn degree_oracle(p: &Partition) -> BigUint {
        let n = p.size();
        let grid: Vec<Vec<bool>> = p
            .parts()
            .iter()
            .map(|&len| vec![true; len as usize])
            .collect();
        let mut product = BigUint::one();
        for (i, row) in grid.iter().enumerate() {
            for j in 0..row.len() {
                let arm = row.len() - j - 1;
                let leg = grid[i + 1..].iter().filter(|r| r.len() > j).count();
                product *= BigUint::from(arm + leg + 1);
            }
        }
        let mut factorial = BigUint::one();
        for m in 1..=n {
            factorial *= BigUint::from(m);
        }
        factorial / product
    }

    #[test]
    fn trivial_character_has_degree_one() {
        let ctx = DegreeContext::new(9);
        let v = ctx.degree_vector(&Partition::new(vec![9]));
        assert!(v.is_one());
        assert_eq!(ctx.degree_bigint(&v), BigUint::one());
    }

    #[test]
    fn rectangle_and_hook_share_degree_462() {
        let ctx = DegreeContext::new(12);
        let rect = ctx.degree_vector(&Partition::new(vec![4, 4, 4]));
        let hook = ctx.degree_vector(&Partition::new(vec![7, 1, 1, 1, 1, 1]));
        assert_eq!(ctx.degree_bigint(&rect), BigUint::from(462u32));
        assert_eq!(rect, hook);
        assert_eq!(ctx.compare_degrees(&rect, &hook), Ordering::Equal);
        // 462 = 2 * 3 * 7 * 11
        let exps: HashMap<u32, u32> = ctx
            .primes()
            .iter()
            .copied()
            .zip(rect.exponents().iter().copied())
            .collect();
        assert_eq!(exps[&2], 1);
        assert_eq!(exps[&3], 1);
        assert_eq!(exps[&5], 0);
        assert_eq!(exps[&7], 1);
        assert_eq!(exps[&11], 1);
    }

    #[test]
    fn staircase_degree_16() {
        let ctx = DegreeContext::new(6);
        let v = ctx.degree_vector(&Partition::new(vec![3, 2, 1]));
        assert_eq!(ctx.degree_bigint(&v), BigUint::from(16u32));
        let w = ctx.degree_vector(&Partition::new(vec![2, 2, 2]));
        assert_eq!(ctx.degree_bigint(&w), BigUint::from(5u32));
        assert_eq!(ctx.compare_degrees(&v, &w), Ordering::Greater);
    }

    #[test]
    fn matches_bigint_oracle_up_to_12() {
        for n in 1..=12 {
            let ctx = DegreeContext::new(n);
            for p in enumerate_partitions(n, None) {
                let v = ctx.degree_vector(&p);
                assert_eq!(ctx.degree_bigint(&v), degree_oracle(&p), "degree of {p}");
            }
        }
    }

    #[test]
    fn conjugates_share_degree() {
        for n in 1..=14 {
            let ctx = DegreeContext::new(n);
            for p in enumerate_partitions(n, None) {
                assert_eq!(ctx.degree_vector(&p), ctx.degree_vector(&p.conjugate()));
            }
        }
    }

    #[test]
    fn degree_squares_sum_to_factorial() {
        for n in 1..=10u32 {
            let ctx = DegreeContext::new(n);
            let mut sum = BigUint::zero();
            for p in enumerate_partitions(n, None) {
                let d = ctx.degree_bigint(&ctx.degree_vector(&p));
                sum += &d * &d;
            }
            let mut factorial = BigUint::one();
            for m in 1..=n {
                factorial *= BigUint::from(m);
            }
            assert_eq!(sum, factorial, "column orthogonality at n = {n}");
        }
    }

    #[test]
    fn branching_rule_degree_sums() {
        for n in 2..=12u32 {
            let ctx = DegreeContext::new(n);
            let ctx_below = DegreeContext::new(n - 1);
            for p in enumerate_partitions(n, None) {
                let whole = ctx.degree_bigint(&ctx.degree_vector(&p));
                let mut sum = BigUint::zero();
                for b in p.removable_boxes() {
                    let below = p.remove_box(b);
                    sum += ctx_below.degree_bigint(&ctx_below.degree_vector(&below));
                }
                assert_eq!(whole, sum, "branching at {p}");
            }
        }
    }

    #[test]
    fn legendre_formula_spot_checks() {
        assert_eq!(factorial_prime_exponent(10, 2), 8);
        assert_eq!(factorial_prime_exponent(10, 5), 2);
        assert_eq!(factorial_prime_exponent(100, 97), 1);
        assert_eq!(factorial_prime_exponent(4, 5), 0);
    }

    #[test]
    fn compare_is_total_order_consistent_with_bigints() {
        use rand::prelude::*;
        let n = 40;
        let ctx = DegreeContext::new(n);
        let all: Vec<DegreeVector> = enumerate_partitions(n, None)
            .map(|p| ctx.degree_vector(&p))
            .collect();
        let mut rng = rand::rngs::StdRng::seed_from_u64(0x600d5eed);
        for _ in 0..10_000 {
            let a = &all[rng.gen_range(0..all.len())];
            let b = &all[rng.gen_range(0..all.len())];
            let expected = ctx.degree_bigint(a).cmp(&ctx.degree_bigint(b));
            assert_eq!(ctx.compare_degrees(a, b), expected);
        }
    }

    #[test]
    fn log_degree_routes_agree() {
        let n = 24;
        let ctx = DegreeContext::new(n);
        for p in enumerate_partitions(n, None).take(500) {
            let mut conj = Vec::new();
            let mut hooks = Vec::new();
            p.hooks_into(&mut conj, &mut hooks);
            let via_hooks = ctx.log_degree_from_hooks(&hooks);
            let via_vector = ctx.log_degree(&ctx.degree_vector(&p));
            assert!((via_hooks - via_vector).abs() < 1e-9);
        }
    }
}
