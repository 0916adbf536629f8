//! Multi-index machinery for monomials on the cube.
//!
//! A multi-index `α ∈ ℕ^N` of order `d = |α|` stands for the monomial
//! `x^α`. On the cube `x_i² = 1`, so only the tetrahedral part (entries in
//! `{0, 1}`) survives; expanding `(Σ x_i)^d` therefore produces the level sum
//! `Σ_{|S|=d} x^S` plus lower levels `Σ_{|S|=d-2k} x^S` weighted by the
//! coefficients `C_{d,k,N}` computed here.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::hermite::hermite_values;
use crate::linalg::least_squares;
use crate::rational::{binomial_prefix, factorial};

/// A multi-index `α = (α_1, ..., α_N)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    entries: Vec<u32>,
}

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        MultiIndex { entries }
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    /// `|α| = Σ α_i`.
    pub fn order(&self) -> u64 {
        self.entries.iter().map(|&e| e as u64).sum()
    }

    pub fn is_tetrahedral(&self) -> bool {
        self.entries.iter().all(|&e| e <= 1)
    }

    pub fn is_even(&self) -> bool {
        self.entries.iter().all(|&e| e % 2 == 0)
    }

    /// Splits `α = α_T + α_E` with `α_T` tetrahedral and `α_E` even.
    pub fn split(&self) -> (MultiIndex, MultiIndex) {
        let t = self.entries.iter().map(|&e| e % 2).collect();
        let e = self.entries.iter().map(|&e| e - e % 2).collect();
        (MultiIndex::new(t), MultiIndex::new(e))
    }
}

/// Size of the class `[α]` of index tuples with the same multiset of
/// coordinates: `|α|! / Π α_i!`.
pub fn class_size(alpha: &MultiIndex) -> BigUint {
    let denom = alpha
        .entries
        .iter()
        .fold(BigUint::one(), |acc, &e| acc * factorial(e as u64));
    factorial(alpha.order()) / denom
}

fn check_level(n: usize, d: usize, m: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::domain("N must be at least 1"));
    }
    if d > n || m > n {
        return Err(Error::domain(alloc::format!(
            "need 0 <= d <= N and 0 <= m <= N (N = {n}, d = {d}, m = {m})"
        )));
    }
    Ok(())
}

/// Coefficient of `z^d` in `(1 + z)^a (1 - z)^b`.
fn signed_convolution(a: u64, b: u64, d: u64) -> BigInt {
    let left = binomial_prefix(a, d);
    let right = binomial_prefix(b, d);
    let mut acc = BigInt::zero();
    for j in 0..=d as usize {
        let term = BigInt::from(&left[j] * &right[d as usize - j]);
        if (d as usize - j).is_multiple_of(2) {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// `Σ_{|S|=d} x^S` at any point with exactly `m` coordinates equal to `+1`:
/// `Σ_j (-1)^{d-j} C(m, j) C(N-m, d-j)`.
pub fn level_sum_at(n: usize, d: usize, m: usize) -> Result<BigInt> {
    check_level(n, d, m)?;
    Ok(signed_convolution(m as u64, (n - m) as u64, d as u64))
}

/// `Σ_{|S|≤d} x^S` at a point with `m` coordinates equal to `+1`.
///
/// Partial sums of the coefficients of `(1+z)^m (1-z)^{N-m}` are the
/// coefficients of `(1+z)^m (1-z)^{N-m-1}`, so one convolution suffices
/// unless `m = N`, where the value is `Σ_{k≤d} C(N, k)`.
pub fn level_prefix_sum_at(n: usize, d: usize, m: usize) -> Result<BigInt> {
    check_level(n, d, m)?;
    if m == n {
        let total: BigUint = binomial_prefix(n as u64, d as u64).into_iter().sum();
        return Ok(BigInt::from(total));
    }
    Ok(signed_convolution(m as u64, (n - m - 1) as u64, d as u64))
}

pub const MAX_C_DEGREE: usize = 10;
pub const MAX_C_DIMENSION: usize = 200;
/// Largest number of even indices `|Λ_E(2k, N)| = C(N+k-1, k)` enumerated.
pub const MAX_C_ENUMERATION: u64 = 5_000_000;

/// Visits every nondecreasing `k`-tuple over `0..n` (a multiset of size k).
fn for_each_multiset(n: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    if k == 0 {
        visit(&[]);
        return;
    }
    let mut idx = vec![0usize; k];
    loop {
        visit(&idx);
        let mut pos = k;
        while pos > 0 && idx[pos - 1] == n - 1 {
            pos -= 1;
        }
        if pos == 0 {
            return;
        }
        let v = idx[pos - 1] + 1;
        for slot in &mut idx[pos - 1..] {
            *slot = v;
        }
    }
}

/// `Σ_{α_E ∈ Λ_E(2k, N)} |[α_T + α_E]|` for the tetrahedral `α_T` given by
/// `support` (a sorted list of coordinates).
fn class_sum(d: usize, k: usize, n: usize, support: &[usize]) -> u128 {
    let fact: Vec<u128> = (0..=d as u128)
        .scan(1u128, |acc, i| {
            if i > 0 {
                *acc *= i;
            }
            Some(*acc)
        })
        .collect();
    let mut total = 0u128;
    let mut counts: Vec<(usize, u32)> = Vec::with_capacity(k);
    for_each_multiset(n, k, |beta| {
        counts.clear();
        for &i in beta {
            match counts.last_mut() {
                Some((j, c)) if *j == i => *c += 2,
                _ => counts.push((i, 2)),
            }
        }
        let mut denom = 1u128;
        for &(i, c) in &counts {
            let extra = support.binary_search(&i).is_ok() as u32;
            denom *= fact[(c + extra) as usize];
        }
        total += fact[d] / denom;
    });
    total
}

/// `C_{d,k,N}`: the weight of `Σ_{|S|=d-2k} x^S` in the expansion of
/// `(Σ x_i)^d`, obtained by enumerating the even indices of order `2k`.
/// The result is recomputed for a second representative `α_T` and an error
/// is returned if the two disagree.
pub fn c_coefficient(d: usize, k: usize, n: usize) -> Result<u128> {
    if k == 0 || 2 * k > d {
        return Err(Error::domain(alloc::format!(
            "need 1 <= k <= d/2 (d = {d}, k = {k})"
        )));
    }
    if d > n {
        return Err(Error::domain("need d <= N"));
    }
    if d > MAX_C_DEGREE {
        return Err(Error::guard("d", d, MAX_C_DEGREE));
    }
    if n > MAX_C_DIMENSION {
        return Err(Error::guard("N", n, MAX_C_DIMENSION));
    }
    let count = binomial_prefix((n + k - 1) as u64, k as u64)[k]
        .to_u64()
        .unwrap_or(u64::MAX);
    if count > MAX_C_ENUMERATION {
        return Err(Error::guard("even index count", count, MAX_C_ENUMERATION));
    }
    let t = d - 2 * k;
    let first: Vec<usize> = (0..t).collect();
    let last: Vec<usize> = (n - t..n).collect();
    let a = class_sum(d, k, n, &first);
    let b = class_sum(d, k, n, &last);
    if a != b {
        return Err(Error::Numeric(alloc::format!(
            "C_(d,k,N) depends on the representative: {a} vs {b}"
        )));
    }
    Ok(a)
}

/// Elementary symmetric sums `e_0, ..., e_d` of the coordinates of `x`.
fn elementary_symmetric(x_bits: u64, n: usize, d: usize) -> Vec<i128> {
    let mut e = vec![0i128; d + 1];
    e[0] = 1;
    for i in 0..n {
        let xi: i128 = if x_bits >> i & 1 == 1 { -1 } else { 1 };
        for j in (1..=d).rev() {
            e[j] += xi * e[j - 1];
        }
    }
    e
}

/// Outcome of checking `d! Σ_{|S|=d} x^S = (Σx_i)^d - Σ_k C_{d,k,N} Σ_{|S|=d-2k} x^S`
/// at every point of the cube.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerIdentityReport {
    pub d: usize,
    pub n: usize,
    pub points: u64,
    pub c: Vec<u128>,
    pub max_discrepancy: u128,
    pub pass: bool,
}

pub const MAX_IDENTITY_DEGREE: usize = 6;
pub const MAX_IDENTITY_DIMENSION: usize = 14;

pub fn verify_power_identity(d: usize, n: usize) -> Result<PowerIdentityReport> {
    if d == 0 || d > n {
        return Err(Error::domain("need 1 <= d <= N"));
    }
    if d > MAX_IDENTITY_DEGREE {
        return Err(Error::guard("d", d, MAX_IDENTITY_DEGREE));
    }
    if n > MAX_IDENTITY_DIMENSION {
        return Err(Error::guard("N", n, MAX_IDENTITY_DIMENSION));
    }
    let c: Vec<u128> = (1..=d / 2)
        .map(|k| c_coefficient(d, k, n))
        .collect::<Result<_>>()?;
    let d_fact: i128 = (1..=d as i128).product();
    let mut max_discrepancy = 0u128;
    for x in 0..1u64 << n {
        let e = elementary_symmetric(x, n, d);
        let p = n as i128 - 2 * x.count_ones() as i128;
        let mut rhs = p.pow(d as u32);
        for (k, &ck) in c.iter().enumerate() {
            rhs -= ck as i128 * e[d - 2 * (k + 1)];
        }
        max_discrepancy = max_discrepancy.max((d_fact * e[d] - rhs).unsigned_abs());
    }
    Ok(PowerIdentityReport {
        d,
        n,
        points: 1 << n,
        c,
        max_discrepancy,
        pass: max_discrepancy == 0,
    })
}

/// Fitted coefficients of
/// `N^{-d/2} Σ_{|S|=d} x^S = (1/d!) (h_d(s) + (1/N) Σ_k a_{d,k,N} h_{d-2k}(s))`
/// with `s = (Σ x_i)/√N`.
#[derive(Debug, Clone, PartialEq)]
pub struct BecknerFit {
    pub d: usize,
    pub n: usize,
    /// Fitted weight of `h_d`; 1 up to rounding.
    pub leading: f64,
    /// `a_{d,k,N}` for `k = 1..=⌊d/2⌋`.
    pub a: Vec<f64>,
    /// Largest misfit over the `N + 1` attainable values of `s`, relative
    /// to `max(1, |value|)`.
    pub residual: f64,
}

pub const BECKNER_RESIDUAL_LIMIT: f64 = 1e-8;
pub const MAX_BECKNER_DEGREE: usize = 10;
pub const MAX_BECKNER_DIMENSION: usize = 200;

pub fn beckner_coefficients(d: usize, n: usize) -> Result<BecknerFit> {
    if d < 2 || d > n {
        return Err(Error::domain("need 2 <= d <= N"));
    }
    if d > MAX_BECKNER_DEGREE {
        return Err(Error::guard("d", d, MAX_BECKNER_DEGREE));
    }
    if n > MAX_BECKNER_DIMENSION {
        return Err(Error::guard("N", n, MAX_BECKNER_DIMENSION));
    }
    let nf = n as f64;
    let sqrt_n = libm::sqrt(nf);
    let scale = libm::pow(nf, d as f64 / 2.0);
    let d_fact: f64 = (1..=d).map(|i| i as f64).product();
    let half = d / 2;
    let mut rows = Vec::with_capacity(n + 1);
    let mut values = Vec::with_capacity(n + 1);
    for m in 0..=n {
        let s = (2.0 * m as f64 - nf) / sqrt_n;
        let h = hermite_values(d, s);
        rows.push((0..=half).map(|k| h[d - 2 * k] / d_fact).collect::<Vec<f64>>());
        let level = level_sum_at(n, d, m)?;
        values.push(level.to_f64().unwrap_or(f64::NAN) / scale);
    }
    let coef = least_squares(&rows, &values)
        .ok_or_else(|| Error::Numeric("Hermite basis fit is singular".into()))?;
    let residual = rows
        .iter()
        .zip(&values)
        .map(|(row, v)| {
            let fit: f64 = row.iter().zip(&coef).map(|(r, c)| r * c).sum();
            (fit - v).abs() / v.abs().max(1.0)
        })
        .fold(0.0, f64::max);
    if !(residual < BECKNER_RESIDUAL_LIMIT) {
        return Err(Error::Numeric(alloc::format!(
            "Hermite basis fit residual {residual:e} exceeds {BECKNER_RESIDUAL_LIMIT:e}"
        )));
    }
    Ok(BecknerFit {
        d,
        n,
        leading: coef[0],
        a: coef[1..].iter().map(|c| c * nf).collect(),
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::{evaluate, make_family, CubePoint, FamilySpec, WalshPolynomial};

    #[test]
    fn class_sizes() {
        assert_eq!(class_size(&MultiIndex::new(vec![1, 1, 0])), BigUint::from(2u32));
        assert_eq!(class_size(&MultiIndex::new(vec![2, 0])), BigUint::one());
        // α_T on two coordinates, α_E = 2β with β tetrahedral on three others
        let alpha = MultiIndex::new(vec![1, 1, 2, 2, 2, 0]);
        let (t, e) = alpha.split();
        assert!(t.is_tetrahedral() && e.is_even());
        assert_eq!(alpha.order(), 8);
        assert_eq!(class_size(&alpha), factorial(8) / BigUint::from(8u32));
    }

    fn brute_level(n: usize, d: usize, m: usize, up_to: bool) -> i64 {
        // point with the first m coordinates +1
        let x = CubePoint::new(n, ((1u128 << n) - 1) ^ ((1u128 << m) - 1)).unwrap();
        let spec = if up_to {
            FamilySpec::UpTo { n, d }
        } else {
            FamilySpec::Homogeneous { n, d }
        };
        let f = WalshPolynomial::constant_coefficients(make_family(&spec).unwrap(), 1i64);
        evaluate(&f, x).unwrap()
    }

    #[test]
    fn level_sums_match_evaluation() {
        assert_eq!(level_sum_at(4, 2, 3).unwrap(), BigInt::zero());
        assert_eq!(level_sum_at(3, 2, 2).unwrap(), BigInt::from(-1));
        assert_eq!(level_sum_at(7, 3, 7).unwrap(), BigInt::from(35));
        for n in 1..=9 {
            for d in 1..=n {
                for m in 0..=n {
                    assert_eq!(level_sum_at(n, d, m).unwrap(), BigInt::from(brute_level(n, d, m, false)));
                    assert_eq!(
                        level_prefix_sum_at(n, d, m).unwrap(),
                        BigInt::from(brute_level(n, d, m, true))
                    );
                }
            }
        }
        assert!(level_sum_at(3, 4, 0).is_err());
        assert!(level_sum_at(3, 1, 4).is_err());
    }

    #[test]
    fn c_examples() {
        for n in 2..=20 {
            assert_eq!(c_coefficient(2, 1, n).unwrap(), n as u128);
            assert_eq!(c_coefficient(3, 1, n.max(3)).unwrap(), 3 * n.max(3) as u128 - 2);
        }
        // hand expansion of e_4: C_{4,1} = 12N - 16 and C_{4,2} = 3N² - 2N
        assert_eq!(c_coefficient(4, 1, 8).unwrap(), 80);
        assert_eq!(c_coefficient(4, 2, 8).unwrap(), 176);
        assert!(c_coefficient(4, 3, 8).is_err());
        assert!(c_coefficient(4, 1, 3).is_err());
        assert!(c_coefficient(12, 1, 20).is_err());
    }

    #[test]
    fn c_bounds_d4() {
        let (d, k, n) = (4u64, 2u64, 8u64);
        let v = c_coefficient(4, 2, 8).unwrap();
        let lower = binomial_prefix(n - d + 2 * k, k)[k as usize].to_u128().unwrap() * 24 / 4;
        let upper = lower + (n as u128).pow(k as u32 - 1) * 2 * d as u128 * 24;
        assert!(lower <= v && v <= upper, "{lower} <= {v} <= {upper}");
    }

    #[test]
    fn power_identity_small() {
        for (d, n) in [(2, 5), (3, 6), (5, 9)] {
            let r = verify_power_identity(d, n).unwrap();
            assert!(r.pass && r.max_discrepancy == 0, "{r:?}");
        }
        assert!(verify_power_identity(7, 9).is_err());
        assert!(verify_power_identity(3, 15).is_err());
    }

    #[test]
    fn beckner_examples() {
        for n in [10, 20, 40] {
            let f2 = beckner_coefficients(2, n).unwrap();
            assert!(f2.a[0].abs() < 1e-8);
            assert!((f2.leading - 1.0).abs() < 1e-10);
            let f3 = beckner_coefficients(3, n).unwrap();
            assert!((f3.a[0] - 2.0).abs() < 1e-8, "{f3:?}");
            // e_4 = (p^4 - 6Np^2 + 3N^2 + 8p^2 - 6N)/24 gives a = (8, 2)
            let f4 = beckner_coefficients(4, n).unwrap();
            assert!((f4.a[0] - 8.0).abs() < 1e-7 && (f4.a[1] - 2.0).abs() < 1e-7, "{f4:?}");
        }
        assert!(beckner_coefficients(1, 10).is_err());
        assert!(beckner_coefficients(11, 20).is_err());
    }

    #[test]
    fn multisets_counted() {
        let mut count = 0;
        for_each_multiset(5, 3, |_| count += 1);
        assert_eq!(count, 35);
        let mut count = 0;
        for_each_multiset(1, 4, |_| count += 1);
        assert_eq!(count, 1);
    }
}
