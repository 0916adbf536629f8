//! Probabilist's Hermite polynomials, the rescaled family `P_d = h_d / d!`,
//! and absolute Gaussian moments `E|p(Z)|` of polynomials.
//!
//! `E|P_d(Z)|` is the limit of `λ(B_{=d}^N) / N^{d/2}` as `N → ∞`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::quadrature::integrate;
use crate::rational::{to_f64, ExactRational};

/// Dense polynomial with exact rational coefficients, lowest degree first.
/// The leading coefficient is nonzero unless the polynomial is zero, in
/// which case the coefficient list is empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPolynomial {
    coeffs: Vec<ExactRational>,
}

impl RationalPolynomial {
    pub fn new(mut coeffs: Vec<ExactRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RationalPolynomial { coeffs }
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| ExactRational::from_integer(BigInt::from(c))).collect())
    }

    pub fn zero() -> Self {
        RationalPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_integers(&[1])
    }

    /// The monomial `t^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![ExactRational::zero(); k + 1];
        coeffs[k] = ExactRational::one();
        RationalPolynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[ExactRational] {
        &self.coeffs
    }

    /// Coefficient of `t^k` (zero past the degree).
    pub fn coeff(&self, k: usize) -> ExactRational {
        self.coeffs.get(k).cloned().unwrap_or_else(ExactRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..len).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..len).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    pub fn scale(&self, c: &ExactRational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// `t · p(t)`.
    pub fn shift(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(ExactRational::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        RationalPolynomial { coeffs }
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(to_f64).collect()
    }

    /// Horner evaluation in floating point.
    pub fn eval_f64(&self, t: f64) -> f64 {
        horner(&self.to_f64_coeffs(), t)
    }
}

fn horner(coeffs: &[f64], t: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
}

pub const MAX_POLY_DEGREE: usize = 200;

fn check_degree(d: usize, cap: usize) -> Result<()> {
    if d > cap {
        return Err(Error::guard("d", d, cap));
    }
    Ok(())
}

/// `h_0, ..., h_d` from `h_{n+1} = t h_n - n h_{n-1}`.
fn hermite_table(d: usize) -> Vec<RationalPolynomial> {
    let mut table = vec![RationalPolynomial::one()];
    if d >= 1 {
        table.push(RationalPolynomial::monomial(1));
    }
    for n in 1..d {
        let next = table[n]
            .shift()
            .sub(&table[n - 1].scale(&ExactRational::from_integer(BigInt::from(n))));
        table.push(next);
    }
    table
}

/// The probabilist's Hermite polynomial `h_d` (integer coefficients).
pub fn hermite_poly(d: usize) -> Result<RationalPolynomial> {
    check_degree(d, MAX_POLY_DEGREE)?;
    Ok(hermite_table(d).pop().expect("table holds h_0..=h_d"))
}

/// `P_d = t^d/d! - Σ_{k=1}^{⌊d/2⌋} P_{d-2k} / (k! 2^k)`, `P_0 = 1`, `P_1 = t`.
pub fn p_poly(d: usize) -> Result<RationalPolynomial> {
    check_degree(d, MAX_POLY_DEGREE)?;
    let mut table: Vec<RationalPolynomial> = Vec::with_capacity(d + 1);
    let mut fact = BigInt::one();
    for j in 0..=d {
        if j > 0 {
            fact *= j;
        }
        let mut p = RationalPolynomial::monomial(j)
            .scale(&ExactRational::new(BigInt::one(), fact.clone()));
        let mut k_fact_2k = BigInt::one();
        for k in 1..=j / 2 {
            k_fact_2k *= 2 * k;
            let w = ExactRational::new(BigInt::one(), k_fact_2k.clone());
            p = p.sub(&table[j - 2 * k].scale(&w));
        }
        table.push(p);
    }
    Ok(table.pop().expect("table holds P_0..=P_d"))
}

/// Floating-point values `h_0(t), ..., h_d(t)`.
pub fn hermite_values(d: usize, t: f64) -> Vec<f64> {
    let mut h = Vec::with_capacity(d + 1);
    h.push(1.0);
    if d >= 1 {
        h.push(t);
    }
    for n in 1..d {
        h.push(t * h[n] - n as f64 * h[n - 1]);
    }
    h
}

/// `(h̃_d(t), h̃_{d-1}(t))` for the orthonormal `h̃_n = h_n / √(n!)`.
pub fn orthonormal_hermite(d: usize, t: f64) -> (f64, f64) {
    if d == 0 {
        return (1.0, 0.0);
    }
    let (mut prev, mut cur) = (1.0, t);
    for n in 1..d {
        let next = (t * cur - libm::sqrt(n as f64) * prev) / libm::sqrt(n as f64 + 1.0);
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

pub const MAX_ROOT_DEGREE: usize = 60;

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// The `d` real roots of `h_d`, increasing, found by bisection on the
/// brackets given by the roots of `h_{d-1}` (the two sets interlace).
pub fn hermite_roots(d: usize) -> Result<Vec<f64>> {
    if d == 0 {
        return Err(Error::domain("h_0 has no roots"));
    }
    check_degree(d, MAX_ROOT_DEGREE)?;
    let mut roots = vec![0.0];
    for n in 2..=d {
        let bound = libm::sqrt(4.0 * n as f64 + 2.0) + 1.0;
        let mut edges = Vec::with_capacity(n + 1);
        edges.push(-bound);
        edges.extend_from_slice(&roots);
        edges.push(bound);
        let mut next: Vec<f64> = edges
            .windows(2)
            .map(|w| bisect(|t| orthonormal_hermite(n, t).0, w[0], w[1]))
            .collect();
        // h_n is even or odd; enforce the mirror symmetry exactly
        for i in 0..n / 2 {
            let r = 0.5 * (next[n - 1 - i] - next[i]);
            next[i] = -r;
            next[n - 1 - i] = r;
        }
        if n % 2 == 1 {
            next[n / 2] = 0.0;
        }
        roots = next;
    }
    Ok(roots)
}

/// Real roots of a floating-point polynomial, increasing. Roots of even
/// multiplicity (where the sign does not change) may be omitted; they do
/// not create kinks in `|p|`.
fn real_roots(coeffs: &[f64]) -> Vec<f64> {
    let mut c = coeffs.to_vec();
    while c.last().is_some_and(|&v| v == 0.0) {
        c.pop();
    }
    if c.len() <= 1 {
        return Vec::new();
    }
    if c.len() == 2 {
        return vec![-c[0] / c[1]];
    }
    let lead = c[c.len() - 1];
    let bound = 1.0 + c[..c.len() - 1].iter().map(|a| (a / lead).abs()).fold(0.0, f64::max);
    let deriv: Vec<f64> = c.iter().enumerate().skip(1).map(|(k, &a)| k as f64 * a).collect();
    let mut edges = vec![-bound];
    edges.extend(real_roots(&deriv).into_iter().filter(|r| r.abs() < bound));
    edges.push(bound);
    let mut roots = Vec::new();
    for w in edges.windows(2) {
        let (a, b) = (horner(&c, w[0]), horner(&c, w[1]));
        if a == 0.0 {
            if roots.last() != Some(&w[0]) {
                roots.push(w[0]);
            }
        } else if (a < 0.0) != (b < 0.0) && b != 0.0 {
            roots.push(bisect(|t| horner(&c, t), w[0], w[1]));
        }
    }
    roots
}

/// `∫_T^∞ t^k φ(t) dt` for `k = 0..=d`, with `φ` the standard normal density.
fn upper_tail_moments(t: f64, d: usize) -> Vec<f64> {
    let phi = libm::exp(-0.5 * t * t) / libm::sqrt(2.0 * PI);
    let mut j = Vec::with_capacity(d + 1);
    j.push(0.5 * libm::erfc(t / core::f64::consts::SQRT_2));
    if d >= 1 {
        j.push(phi);
    }
    for k in 2..=d {
        let v = libm::pow(t, (k - 1) as f64) * phi + (k - 1) as f64 * j[k - 2];
        j.push(v);
    }
    j
}

pub const MIN_TOLERANCE: f64 = 1e-13;

fn gaussian_density(t: f64) -> f64 {
    libm::exp(-0.5 * t * t) / libm::sqrt(2.0 * PI)
}

/// `∫ |f| φ` over `[-cut, cut]`, split at the given sign changes.
fn piecewise_abs(f: impl Fn(f64) -> f64, roots: &[f64], cut: f64, tol: f64) -> f64 {
    let mut edges = vec![-cut];
    edges.extend(roots.iter().copied());
    edges.push(cut);
    let pieces = (edges.len() - 1) as f64;
    let mut sum = 0.0;
    let mut comp = 0.0;
    for w in edges.windows(2) {
        let (v, _) = integrate(|t| f(t).abs() * gaussian_density(t), w[0], w[1], tol / pieces);
        // compensated summation in fixed interval order
        let y = v - comp;
        let s = sum + y;
        comp = (s - sum) - y;
        sum = s;
    }
    sum
}

/// `E|p(Z)|` for a standard normal `Z`.
///
/// `|p|` is smooth between consecutive real roots, so each piece goes to
/// adaptive quadrature; beyond `max(12, outermost root + 8)` the sign of
/// `p` is constant and the tails are summed from the closed-form truncated
/// Gaussian moments.
pub fn abs_gaussian_moment(p: &RationalPolynomial, tol: f64) -> Result<f64> {
    if !(tol >= MIN_TOLERANCE) {
        return Err(Error::domain(alloc::format!(
            "tolerance must be at least {MIN_TOLERANCE:e}"
        )));
    }
    if p.is_zero() {
        return Ok(0.0);
    }
    let c = p.to_f64_coeffs();
    let roots = real_roots(&c);
    let extent = roots.iter().fold(0.0f64, |m, r| m.max(r.abs()));
    let cut = (extent + 8.0).max(12.0);
    let body = piecewise_abs(|t| horner(&c, t), &roots, cut, tol);
    let j = upper_tail_moments(cut, c.len() - 1);
    let upper: f64 = c.iter().zip(&j).map(|(a, m)| a * m).sum();
    let lower: f64 = c
        .iter()
        .zip(&j)
        .enumerate()
        .map(|(k, (a, m))| if k % 2 == 0 { a * m } else { -a * m })
        .sum();
    Ok(body + upper.abs() + lower.abs())
}

pub const LIMIT_TOLERANCE: f64 = 1e-11;
/// Above this degree `P_d` is evaluated through the orthonormal recurrence.
const MONOMIAL_DEGREE_LIMIT: usize = 20;

fn check_limit_degree(d: usize) -> Result<()> {
    if d == 0 {
        return Err(Error::domain("d must be at least 1"));
    }
    check_degree(d, MAX_ROOT_DEGREE)
}

/// `E|h̃_d(Z)| = E|h_d(Z)| / √(d!)`.
pub fn normalized_limit_constant(d: usize) -> Result<f64> {
    check_limit_degree(d)?;
    let roots = hermite_roots(d)?;
    let cut = (roots[d - 1] + 8.0).max(12.0);
    let body = piecewise_abs(|t| orthonormal_hermite(d, t).0, &roots, cut, LIMIT_TOLERANCE);
    // ∫_T^∞ h_d φ = h_{d-1}(T) φ(T), and |h_d| is even
    let tail = orthonormal_hermite(d, cut).1 * gaussian_density(cut) / libm::sqrt(d as f64);
    Ok(body + 2.0 * tail.abs())
}

/// `lim_N λ(B_{=d}^N) / N^{d/2} = E|P_d(Z)|`.
pub fn limit_constant(d: usize) -> Result<f64> {
    check_limit_degree(d)?;
    if d <= MONOMIAL_DEGREE_LIMIT {
        return abs_gaussian_moment(&p_poly(d)?, LIMIT_TOLERANCE);
    }
    let log_fact = libm::lgamma(d as f64 + 1.0);
    Ok(normalized_limit_constant(d)? * libm::exp(-0.5 * log_fact))
}

/// `E|h̃_d(Z)|` divided by its asymptotic form `2^{7/4} π^{-5/4} d^{-1/4}`.
pub fn larsson_cohn_ratio(d: usize) -> Result<f64> {
    let normalized = normalized_limit_constant(d)?;
    Ok(normalized * libm::pow(d as f64, 0.25) * libm::pow(PI, 1.25) / libm::pow(2.0, 1.75))
}

/// Exact identity check `t^d = d! Σ_k h_{d-2k}(t) / (k! 2^k (d-2k)!)`.
pub fn inverse_expansion_holds(d: usize) -> Result<bool> {
    check_degree(d, MAX_POLY_DEGREE)?;
    let table = hermite_table(d);
    let mut sum = RationalPolynomial::zero();
    let mut fact = vec![BigInt::one()];
    for i in 1..=d {
        let next = &fact[i - 1] * i;
        fact.push(next);
    }
    for k in 0..=d / 2 {
        let denom = &fact[k] * (BigInt::one() << k) * &fact[d - 2 * k];
        let w = ExactRational::new(fact[d].clone(), denom);
        sum = sum.add(&table[d - 2 * k].scale(&w));
    }
    Ok(sum == RationalPolynomial::monomial(d))
}

/// Whether `h_{n+1} - t h_n + n h_{n-1}` vanishes identically for all
/// `1 ≤ n < d`.
pub fn recurrence_holds(d: usize) -> Result<bool> {
    check_degree(d, MAX_POLY_DEGREE)?;
    let table = hermite_table(d);
    Ok((1..d).all(|n| {
        table[n + 1]
            .sub(&table[n].shift())
            .add(&table[n - 1].scale(&ExactRational::from_integer(BigInt::from(n))))
            .is_zero()
    }))
}

/// Whether every coefficient of `p` is an integer.
pub fn has_integer_coefficients(p: &RationalPolynomial) -> bool {
    p.coeffs.iter().all(|c| c.denom().abs().is_one())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> ExactRational {
        ExactRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn hermite_examples() {
        assert_eq!(hermite_poly(0).unwrap(), RationalPolynomial::one());
        assert_eq!(hermite_poly(2).unwrap(), RationalPolynomial::from_integers(&[-1, 0, 1]));
        assert_eq!(hermite_poly(3).unwrap(), RationalPolynomial::from_integers(&[0, -3, 0, 1]));
        assert_eq!(
            hermite_poly(6).unwrap(),
            RationalPolynomial::from_integers(&[-15, 0, 45, 0, -15, 0, 1])
        );
        assert!(has_integer_coefficients(&hermite_poly(40).unwrap()));
        assert!(hermite_poly(201).is_err());
    }

    #[test]
    fn p_examples() {
        assert_eq!(p_poly(1).unwrap(), RationalPolynomial::monomial(1));
        assert_eq!(p_poly(2).unwrap(), RationalPolynomial::new(vec![q(-1, 2), q(0, 1), q(1, 2)]));
        assert_eq!(p_poly(4).unwrap(), hermite_poly(4).unwrap().scale(&q(1, 24)));
        assert!(p_poly(201).is_err());
    }

    #[test]
    fn identities() {
        assert!(inverse_expansion_holds(12).unwrap());
        assert!(recurrence_holds(30).unwrap());
    }

    #[test]
    fn root_examples() {
        let r2 = hermite_roots(2).unwrap();
        assert!((r2[0] + 1.0).abs() < 1e-13 && (r2[1] - 1.0).abs() < 1e-13);
        let r3 = hermite_roots(3).unwrap();
        let s3 = libm::sqrt(3.0);
        assert!((r3[0] + s3).abs() < 1e-13 && r3[1] == 0.0 && (r3[2] - s3).abs() < 1e-13);
        let r9 = hermite_roots(9).unwrap();
        let r10 = hermite_roots(10).unwrap();
        assert_eq!(r10.len(), 10);
        for i in 0..9 {
            assert!(r10[i] < r9[i] && r9[i] < r10[i + 1]);
        }
        assert!(hermite_roots(0).is_err());
        assert!(hermite_roots(61).is_err());
    }

    #[test]
    fn moments() {
        let sqrt_2_over_pi = libm::sqrt(2.0 / PI);
        let m = abs_gaussian_moment(&RationalPolynomial::monomial(1), 1e-12).unwrap();
        assert!((m - sqrt_2_over_pi).abs() < 1e-11);
        let m = abs_gaussian_moment(&p_poly(2).unwrap(), 1e-12).unwrap();
        assert!((m - libm::sqrt(2.0 / (PI * core::f64::consts::E))).abs() < 1e-11);
        assert!((abs_gaussian_moment(&RationalPolynomial::one(), 1e-12).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(abs_gaussian_moment(&RationalPolynomial::zero(), 1e-12).unwrap(), 0.0);
        assert!(abs_gaussian_moment(&RationalPolynomial::one(), 1e-14).is_err());
        // sign-constant polynomial: E(Z² + 1) = 2
        let m = abs_gaussian_moment(&RationalPolynomial::from_integers(&[1, 0, 1]), 1e-12).unwrap();
        assert!((m - 2.0).abs() < 1e-11);
    }

    #[test]
    fn limit_examples() {
        let e = core::f64::consts::E;
        let l2 = limit_constant(2).unwrap();
        assert!((l2 - libm::sqrt(2.0 / (PI * e))).abs() < 1e-10);
        let n2 = normalized_limit_constant(2).unwrap();
        assert!((n2 - 2.0 / libm::sqrt(PI * e)).abs() < 1e-10);
        let l3 = limit_constant(3).unwrap();
        let closed = (1.0 + 4.0 * libm::exp(-1.5)) / (3.0 * libm::sqrt(2.0 * PI));
        assert!((l3 - closed).abs() < 1e-10);
        // the two evaluation routes agree where both apply
        for d in 1..=20 {
            let via_norm = normalized_limit_constant(d).unwrap()
                / libm::sqrt((1..=d).map(|i| i as f64).product::<f64>());
            let direct = limit_constant(d).unwrap();
            assert!((via_norm - direct).abs() < 1e-9 * direct.max(1e-3), "d = {d}");
        }
        assert!(limit_constant(0).is_err());
        assert!(limit_constant(61).is_err());
    }

    #[test]
    fn larsson_cohn_examples() {
        let r1 = larsson_cohn_ratio(1).unwrap();
        let closed = libm::sqrt(2.0 / PI) * libm::pow(PI, 1.25) / libm::pow(2.0, 1.75);
        assert!((r1 - closed).abs() < 1e-10);
        assert!((r1 - 0.99).abs() < 0.005);
        assert!((larsson_cohn_ratio(20).unwrap() - 1.0).abs() < 0.01);
    }
}
