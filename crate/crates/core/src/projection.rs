//! Projection constants `λ(B_𝒮^N) = E|Σ_{S∈𝒮} χ_S|`.
//!
//! The exact routes accumulate the integer values `|Σ_S x^S|` and divide by
//! `2^N` once at the end, so nothing is ever rounded.

use alloc::vec::Vec;
use core::ops::Range;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::combinatorics::{level_prefix_sum_at, level_sum_at};
use crate::cube::{
    fwht_in_place, FamilySpec, GrayCode, SupportFamily, MAX_ENUMERATION_DIMENSION,
    MAX_TRANSFORM_DIMENSION,
};
use crate::error::{Error, Result};
use crate::primes;
use crate::rational::{binomial_row, dyadic, to_f64, ExactRational};
use crate::rng::CounterRng;

/// Exact-degree (`|S| = d`) or up-to-degree (`|S| ≤ d`) homogeneous families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LevelMode {
    ExactDegree,
    UpToDegree,
}

/// Gray-code sweep of the cube for a fixed family.
///
/// Each coordinate keeps a bucket of the sets containing it. Flipping
/// coordinate `i` negates exactly the characters in bucket `i`, so the
/// running value `g(x) = Σ_S x^S` changes by twice their (new) sum.
#[derive(Debug, Clone)]
pub struct ExactSweep {
    n: usize,
    sets: Vec<u32>,
    buckets: Vec<Vec<u32>>,
}

impl ExactSweep {
    pub fn new(family: &SupportFamily) -> Result<Self> {
        Self::with_limit(family, MAX_ENUMERATION_DIMENSION)
    }

    /// Like [`ExactSweep::new`] with a tighter dimension guard.
    pub fn with_limit(family: &SupportFamily, max_n: usize) -> Result<Self> {
        let n = family.dim();
        let limit = max_n.min(MAX_ENUMERATION_DIMENSION);
        if n > limit {
            return Err(Error::guard("N", n, limit));
        }
        let sets: Vec<u32> = family.sets().iter().map(|s| s.bits() as u32).collect();
        let buckets = (0..n)
            .map(|i| sets.iter().copied().filter(|s| s >> i & 1 == 1).collect())
            .collect();
        Ok(ExactSweep { n, sets, buckets })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// `Σ |g(x)|` over the sub-cube whose top `split` coordinates are the
    /// bits of `block`.
    pub fn block_sum(&self, split: usize, block: u64) -> Result<u128> {
        let mut walk = GrayCode::block(self.n, split, block)?;
        let start = walk.next().expect("a walk visits at least one point");
        let x0 = start.point.bits() as u32;
        let mut g: i64 = self
            .sets
            .iter()
            .map(|&s| 1 - 2 * ((s & x0).count_ones() & 1) as i64)
            .sum();
        let mut total = g.unsigned_abs() as u128;
        for step in walk {
            let i = step.flipped.expect("only the first step has no flip");
            let x = step.point.bits() as u32;
            let bucket = &self.buckets[i];
            let odd: i64 = bucket
                .iter()
                .map(|&s| ((s & x).count_ones() & 1) as i64)
                .sum();
            // the bucket now sums to len - 2*odd; before the flip it was the negative
            g += 2 * (bucket.len() as i64 - 2 * odd);
            total += g.unsigned_abs() as u128;
        }
        Ok(total)
    }

    /// Turns a full-cube total into `λ`.
    pub fn finish(&self, total: u128) -> ExactRational {
        dyadic(BigInt::from(total), self.n)
    }
}

/// `λ(B_𝒮^N)` exactly, by Gray-code enumeration of the cube.
pub fn lambda_exact(family: &SupportFamily) -> Result<ExactRational> {
    let sweep = ExactSweep::new(family)?;
    let total = sweep.block_sum(0, 0)?;
    Ok(sweep.finish(total))
}

/// `λ(B_𝒮^N)` exactly through the values of `Σ_S χ_S` obtained from one
/// inverse Walsh-Hadamard transform of the indicator of `𝒮` (`N ≤ 24`).
pub fn lambda_exact_transform(family: &SupportFamily) -> Result<ExactRational> {
    let n = family.dim();
    if n > MAX_TRANSFORM_DIMENSION {
        return Err(Error::guard("N", n, MAX_TRANSFORM_DIMENSION));
    }
    let mut table = alloc::vec![0i64; 1 << n];
    for s in family.sets() {
        table[s.bits() as usize] = 1;
    }
    fwht_in_place(&mut table);
    let total: u128 = table.iter().map(|v| v.unsigned_abs() as u128).sum();
    Ok(dyadic(BigInt::from(total), n))
}

pub const MAX_LEVEL_DIMENSION: usize = 100_000;

/// `λ` of the exact-degree or up-to-degree family on `N` coordinates using
/// that `Σ_{|S|=k} x^S` depends only on the number `m` of `+1` coordinates:
/// `λ = 2^{-N} Σ_m C(N,m) |t(m)|`.
pub fn lambda_level_exact(n: usize, d: usize, mode: LevelMode) -> Result<ExactRational> {
    if n == 0 {
        return Err(Error::domain("N must be at least 1"));
    }
    if d == 0 || d > n {
        return Err(Error::domain(alloc::format!(
            "degree d = {d} must satisfy 1 <= d <= N = {n}"
        )));
    }
    if n > MAX_LEVEL_DIMENSION {
        return Err(Error::guard("N", n, MAX_LEVEL_DIMENSION));
    }
    let mut weight = BigUint::one();
    let mut total = BigUint::zero();
    for m in 0..=n {
        let t = match mode {
            LevelMode::ExactDegree => level_sum_at(n, d, m)?,
            LevelMode::UpToDegree => level_prefix_sum_at(n, d, m)?,
        };
        total += &weight * t.magnitude();
        weight = weight * (n - m) / (m + 1);
    }
    Ok(dyadic(BigInt::from(total), n))
}

/// Exact partial sums of `|g|` and `g²` over a range of Monte Carlo samples.
///
/// Because the summands are integers, merging partials in any grouping
/// gives the same totals, which is what makes the estimate independent of
/// how samples are spread over workers.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct McPartial {
    pub count: u64,
    pub sum: u128,
    pub sum_sq: u128,
}

impl McPartial {
    pub fn push(&mut self, value: u64) {
        self.count += 1;
        self.sum += value as u128;
        self.sum_sq += (value as u128) * (value as u128);
    }

    pub fn merge(self, other: McPartial) -> McPartial {
        McPartial {
            count: self.count + other.count,
            sum: self.sum + other.sum,
            sum_sq: self.sum_sq + other.sum_sq,
        }
    }

    /// Mean, standard error and normal-approximation 95% interval.
    pub fn finish(&self, seed: u64) -> Result<McEstimate> {
        if self.count < 2 {
            return Err(Error::domain("an estimate needs at least two samples"));
        }
        let n = self.count as f64;
        let mean = self.sum as f64 / n;
        // n Σg² - (Σg)² is computed exactly when it fits
        let spread = (self.count as u128)
            .checked_mul(self.sum_sq)
            .zip(self.sum.checked_mul(self.sum))
            .map(|(a, b)| (a - b) as f64)
            .unwrap_or_else(|| n * self.sum_sq as f64 - (self.sum as f64) * (self.sum as f64))
            .max(0.0);
        let variance = spread / (n * (n - 1.0));
        let stderr = libm::sqrt(variance / n);
        Ok(McEstimate {
            mean,
            stderr,
            ci95: (mean - Z95 * stderr, mean + Z95 * stderr),
            samples: self.count,
            seed,
        })
    }
}

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.96;
pub const MIN_MC_SAMPLES: u64 = 100;

/// Monte Carlo estimate with its uncertainty.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub ci95: (f64, f64),
    pub samples: u64,
    pub seed: u64,
}

/// Family prepared for Monte Carlo sampling of `|Σ_S x^S|`.
#[derive(Debug, Clone)]
pub struct McSampler {
    n: usize,
    sets: Vec<u128>,
    rng: CounterRng,
}

impl McSampler {
    pub fn new(family: &SupportFamily, seed: u64) -> Self {
        McSampler {
            n: family.dim(),
            sets: family.sets().iter().map(|s| s.bits()).collect(),
            rng: CounterRng::new(seed),
        }
    }

    /// Uniform cube point number `index` (words `2i`, `2i+1` of the stream).
    fn point(&self, index: u64) -> u128 {
        let lo = self.rng.word(2 * index) as u128;
        let hi = if self.n > 64 {
            (self.rng.word(2 * index + 1) as u128) << 64
        } else {
            0
        };
        let bits = lo | hi;
        if self.n >= 128 {
            bits
        } else {
            bits & ((1u128 << self.n) - 1)
        }
    }

    pub fn sample(&self, index: u64) -> u64 {
        let x = self.point(index);
        let g: i64 = self
            .sets
            .iter()
            .map(|&s| 1 - 2 * ((s & x).count_ones() & 1) as i64)
            .sum();
        g.unsigned_abs()
    }

    pub fn partial(&self, range: Range<u64>) -> McPartial {
        let mut acc = McPartial::default();
        for i in range {
            acc.push(self.sample(i));
        }
        acc
    }
}

/// Monte Carlo estimate of `λ(B_𝒮^N)` from `samples` uniform points.
pub fn lambda_mc(family: &SupportFamily, samples: u64, seed: u64) -> Result<McEstimate> {
    if samples < MIN_MC_SAMPLES {
        return Err(Error::domain(alloc::format!(
            "at least {MIN_MC_SAMPLES} samples are required, got {samples}"
        )));
    }
    McSampler::new(family, seed).partial(0..samples).finish(seed)
}

/// `(λ(ℓ_1^n), λ(ℓ_2^n))` over the reals from the Gamma-function formula.
pub fn lambda_closed_forms(n: usize) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(Error::domain("n must be at least 1"));
    }
    let l2 = |k: usize| -> f64 {
        let a = (k as f64 + 2.0) / 2.0;
        let b = (k as f64 + 1.0) / 2.0;
        let ratio = if k < 150 {
            libm::tgamma(a) / libm::tgamma(b)
        } else {
            libm::exp(libm::lgamma(a) - libm::lgamma(b))
        };
        2.0 / libm::sqrt(core::f64::consts::PI) * ratio
    };
    let l1 = if n % 2 == 1 { l2(n) } else { l2(n - 1) };
    Ok((l1, l2(n)))
}

pub const MAX_HAAGERUP_N: usize = 10_000;

/// `λ` of `n` one-point sets, `(2/π)∫_0^∞ t^{-2}(1 - cos^n t) dt`, in the
/// closed form `2^{-n} Σ_k C(n,k) |n - 2k|`.
pub fn haagerup_lambda(n: usize) -> Result<ExactRational> {
    if n == 0 {
        return Err(Error::domain("n must be at least 1"));
    }
    if n > MAX_HAAGERUP_N {
        return Err(Error::guard("n", n, MAX_HAAGERUP_N));
    }
    let total: BigUint = binomial_row(n as u64)
        .into_iter()
        .enumerate()
        .map(|(k, c)| c * (n as i64 - 2 * k as i64).unsigned_abs())
        .sum();
    Ok(dyadic(BigInt::from(total), n))
}

/// `λ` of the prime one-point sets up to `N` and its normalization by
/// `√(N / log N)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PrimeSingletonReport {
    pub n: usize,
    pub prime_count: usize,
    pub lambda: ExactRational,
    pub ratio: f64,
}

pub fn prime_singleton_report(n: usize) -> Result<PrimeSingletonReport> {
    if n < 3 {
        return Err(Error::domain("N must be at least 3"));
    }
    let prime_count = primes::prime_count(n);
    let lambda = haagerup_lambda(prime_count)?;
    let nf = n as f64;
    let ratio = to_f64(&lambda) / libm::sqrt(nf / libm::log(nf));
    Ok(PrimeSingletonReport {
        n,
        prime_count,
        lambda,
        ratio,
    })
}

pub const MIN_SQUAREFREE_N: usize = 16;
pub const MIN_SQUAREFREE_SAMPLES: u64 = 1000;
/// Largest prime count for which the exact cross-check is run.
pub const SQUAREFREE_EXACT_PRIMES: usize = 24;
pub const MAX_SQUAREFREE_N: usize = 10_000_000;

/// Sampler of `|Σ_{n ≤ N square-free} Π_{p | n} ε_p|` for random signs `ε_p`.
#[derive(Debug, Clone)]
pub struct SquarefreeSampler {
    n: usize,
    spf: Vec<usize>,
    prime_index: Vec<usize>,
    words_per_sample: u64,
    rng: CounterRng,
}

impl SquarefreeSampler {
    pub fn new(n: usize, seed: u64) -> Self {
        let spf = primes::smallest_prime_factors(n);
        let mut prime_index = alloc::vec![usize::MAX; n + 1];
        let mut count = 0;
        for p in 2..=n {
            if spf[p] == p {
                prime_index[p] = count;
                count += 1;
            }
        }
        SquarefreeSampler {
            n,
            spf,
            prime_index,
            words_per_sample: count.div_ceil(64).max(1) as u64,
            rng: CounterRng::new(seed),
        }
    }

    pub fn sample(&self, index: u64) -> u64 {
        let base = index * self.words_per_sample;
        let words: Vec<u64> = (0..self.words_per_sample)
            .map(|w| self.rng.word(base + w))
            .collect();
        let mut sign = alloc::vec![0i8; self.n + 1];
        sign[1] = 1;
        let mut g: i64 = 1;
        for k in 2..=self.n {
            let p = self.spf[k];
            let m = k / p;
            if m.is_multiple_of(p) || sign[m] == 0 {
                continue;
            }
            let j = self.prime_index[p];
            let eps = if words[j / 64] >> (j % 64) & 1 == 1 { -1 } else { 1 };
            sign[k] = sign[m] * eps;
            g += sign[k] as i64;
        }
        g.unsigned_abs()
    }

    pub fn partial(&self, range: Range<u64>) -> McPartial {
        let mut acc = McPartial::default();
        for i in range {
            acc.push(self.sample(i));
        }
        acc
    }
}

/// Monte Carlo of the square-free family with its asymptotic normalization.
#[derive(Debug, Clone, PartialEq)]
pub struct SquarefreeReport {
    pub n: usize,
    pub family_size: usize,
    pub prime_count: usize,
    pub estimate: McEstimate,
    /// `mean / (√N / (log log N)^{1/4})`.
    pub ratio: f64,
    /// Exact `λ` when the primes up to `N` are few enough to enumerate.
    pub exact: Option<ExactRational>,
    /// Whether the estimate lies within four standard errors of `exact`.
    pub within_4se: Option<bool>,
}

/// Checks the arguments of [`squarefree_mc`].
pub fn check_squarefree_args(n: usize, samples: u64) -> Result<()> {
    if n < MIN_SQUAREFREE_N {
        return Err(Error::domain(alloc::format!(
            "N must be at least {MIN_SQUAREFREE_N}"
        )));
    }
    if n > MAX_SQUAREFREE_N {
        return Err(Error::guard("N", n, MAX_SQUAREFREE_N));
    }
    if samples < MIN_SQUAREFREE_SAMPLES {
        return Err(Error::domain(alloc::format!(
            "at least {MIN_SQUAREFREE_SAMPLES} samples are required"
        )));
    }
    Ok(())
}

/// Builds the report from a finished estimate.
pub fn squarefree_report(n: usize, estimate: McEstimate) -> Result<SquarefreeReport> {
    let prime_list = primes::primes_up_to(n);
    let sets = primes::squarefree_prime_sets(n);
    let family_size = sets.len();
    let nf = n as f64;
    let ratio = estimate.mean / (libm::sqrt(nf) / libm::pow(libm::log(libm::log(nf)), 0.25));
    let exact = if prime_list.len() <= SQUAREFREE_EXACT_PRIMES {
        // relabel the primes as coordinates 1..=π(N); unused coordinates of
        // [N] only repeat every value and do not change the expectation
        let relabeled = sets
            .iter()
            .map(|s| {
                s.iter()
                    .map(|p| prime_list.binary_search(p).map(|i| i + 1).unwrap_or(0))
                    .collect()
            })
            .collect();
        let family = crate::cube::make_family(&FamilySpec::Explicit {
            n: prime_list.len(),
            sets: relabeled,
        })?;
        Some(lambda_exact(&family)?)
    } else {
        None
    };
    let within_4se = exact
        .as_ref()
        .map(|e| (estimate.mean - to_f64(e)).abs() <= 4.0 * estimate.stderr);
    Ok(SquarefreeReport {
        n,
        family_size,
        prime_count: prime_list.len(),
        estimate,
        ratio,
        exact,
        within_4se,
    })
}

/// Monte Carlo of `λ` for the square-free family up to `N`.
pub fn squarefree_mc(n: usize, samples: u64, seed: u64) -> Result<SquarefreeReport> {
    check_squarefree_args(n, samples)?;
    let estimate = SquarefreeSampler::new(n, seed)
        .partial(0..samples)
        .finish(seed)?;
    squarefree_report(n, estimate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::{make_family, FamilySpec};

    fn q(a: i64, b: i64) -> ExactRational {
        ExactRational::new(BigInt::from(a), BigInt::from(b))
    }

    fn all_subsets(n: usize) -> SupportFamily {
        make_family(&FamilySpec::UpTo { n, d: n }).unwrap()
    }

    #[test]
    fn exact_examples() {
        for n in 1..=6 {
            assert_eq!(lambda_exact(&all_subsets(n)).unwrap(), q(1, 1));
        }
        let h32 = make_family(&FamilySpec::Homogeneous { n: 3, d: 2 }).unwrap();
        assert_eq!(lambda_exact(&h32).unwrap(), q(3, 2));
        let h31 = make_family(&FamilySpec::Homogeneous { n: 3, d: 1 }).unwrap();
        assert_eq!(lambda_exact(&h31).unwrap(), q(3, 2));
    }

    #[test]
    fn exact_guards() {
        let big = make_family(&FamilySpec::Homogeneous { n: 31, d: 1 }).unwrap();
        assert!(matches!(lambda_exact(&big), Err(Error::Guard { .. })));
        let h = make_family(&FamilySpec::Homogeneous { n: 10, d: 1 }).unwrap();
        assert!(ExactSweep::with_limit(&h, 8).is_err());
    }

    #[test]
    fn transform_route_agrees() {
        for n in 1..=8 {
            for d in 1..=n {
                let f = make_family(&FamilySpec::Homogeneous { n, d }).unwrap();
                assert_eq!(lambda_exact(&f).unwrap(), lambda_exact_transform(&f).unwrap());
            }
        }
    }

    #[test]
    fn block_sums_add_up() {
        let f = make_family(&FamilySpec::UpTo { n: 9, d: 3 }).unwrap();
        let sweep = ExactSweep::new(&f).unwrap();
        let whole = sweep.block_sum(0, 0).unwrap();
        for split in 1..=4 {
            let parts: u128 = (0..1u64 << split)
                .map(|b| sweep.block_sum(split, b).unwrap())
                .sum();
            assert_eq!(parts, whole);
        }
    }

    #[test]
    fn level_examples() {
        assert_eq!(lambda_level_exact(3, 2, LevelMode::ExactDegree).unwrap(), q(3, 2));
        assert_eq!(lambda_level_exact(4, 2, LevelMode::ExactDegree).unwrap(), q(3, 2));
        assert_eq!(lambda_level_exact(2, 1, LevelMode::UpToDegree).unwrap(), q(3, 2));
        assert!(lambda_level_exact(3, 4, LevelMode::ExactDegree).is_err());
        assert!(lambda_level_exact(0, 1, LevelMode::UpToDegree).is_err());
    }

    #[test]
    fn mc_examples() {
        let single = make_family(&FamilySpec::Explicit { n: 3, sets: alloc::vec![alloc::vec![]] }).unwrap();
        let est = lambda_mc(&single, 1000, 3).unwrap();
        assert_eq!(est.mean, 1.0);
        assert_eq!(est.stderr, 0.0);
        assert!(lambda_mc(&single, 99, 3).is_err());

        let h = make_family(&FamilySpec::Homogeneous { n: 12, d: 2 }).unwrap();
        let exact = to_f64(&lambda_exact(&h).unwrap());
        let est = lambda_mc(&h, 100_000, 42).unwrap();
        assert!((est.mean - exact).abs() <= 4.0 * est.stderr, "{est:?} vs {exact}");
        assert!((est.ci95.0 - (est.mean - 1.96 * est.stderr)).abs() < 1e-12);
    }

    #[test]
    fn mc_partition_invariance() {
        let h = make_family(&FamilySpec::UpTo { n: 70, d: 1 }).unwrap();
        let sampler = McSampler::new(&h, 9);
        let whole = sampler.partial(0..10_000);
        let pieces = (0..8u64)
            .map(|k| sampler.partial(k * 1250..(k + 1) * 1250))
            .fold(McPartial::default(), McPartial::merge);
        assert_eq!(whole, pieces);
        assert_eq!(whole.finish(9).unwrap(), pieces.finish(9).unwrap());
    }

    #[test]
    fn closed_form_examples() {
        assert!((lambda_closed_forms(1).unwrap().0 - 1.0).abs() < 1e-14);
        assert!((lambda_closed_forms(3).unwrap().0 - 1.5).abs() < 1e-14);
        assert!((lambda_closed_forms(4).unwrap().0 - 1.5).abs() < 1e-14);
        assert!(lambda_closed_forms(0).is_err());
        // large n goes through log-gamma and still approaches √(2n/π)
        let (l1, _) = lambda_closed_forms(10_001).unwrap();
        let asym = libm::sqrt(2.0 * 10_001.0 / core::f64::consts::PI);
        assert!((l1 / asym - 1.0).abs() < 1e-4);
    }

    #[test]
    fn haagerup_examples() {
        assert_eq!(haagerup_lambda(3).unwrap(), q(3, 2));
        assert_eq!(haagerup_lambda(4).unwrap(), q(3, 2));
        assert_eq!(haagerup_lambda(2).unwrap(), q(1, 1));
        assert!(haagerup_lambda(0).is_err());
        assert!(haagerup_lambda(10_001).is_err());
    }

    #[test]
    fn prime_examples() {
        let r = prime_singleton_report(10).unwrap();
        assert_eq!(r.lambda, q(3, 2));
        assert_eq!(r.prime_count, 4);
        assert!(prime_singleton_report(2).is_err());
    }

    #[test]
    fn squarefree_small() {
        let r = squarefree_mc(16, 20_000, 5).unwrap();
        assert_eq!(r.family_size, 11);
        assert_eq!(r.prime_count, 6);
        assert_eq!(r.within_4se, Some(true), "{r:?}");
        assert!(squarefree_mc(15, 20_000, 5).is_err());
        assert!(squarefree_mc(16, 999, 5).is_err());
        // the exact cross-check agrees with the family built on [N] directly
        let fam = make_family(&FamilySpec::SquareFree { n: 16 }).unwrap();
        assert_eq!(r.exact.unwrap(), lambda_exact(&fam).unwrap());
    }
}
