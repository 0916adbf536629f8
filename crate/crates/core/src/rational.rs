//! Exact big-integer and rational helpers.

use alloc::vec::Vec;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Arbitrary-precision rational, always kept in lowest terms with a
/// positive denominator.
pub type ExactRational = BigRational;

/// `C(n, k)` exactly; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// The row `C(n, 0), ..., C(n, n)`.
pub fn binomial_row(n: u64) -> Vec<BigUint> {
    let mut row = Vec::with_capacity(n as usize + 1);
    let mut c = BigUint::one();
    row.push(c.clone());
    for k in 0..n {
        c = c * (n - k) / (k + 1);
        row.push(c.clone());
    }
    row
}

/// `C(n, 0), ..., C(n, kmax)` (entries past `n` are zero).
pub fn binomial_prefix(n: u64, kmax: u64) -> Vec<BigUint> {
    let mut row = Vec::with_capacity(kmax as usize + 1);
    let mut c = BigUint::one();
    row.push(c.clone());
    for k in 0..kmax {
        if k < n {
            c = c * (n - k) / (k + 1);
        } else {
            c = BigUint::zero();
        }
        row.push(c.clone());
    }
    row
}

pub fn factorial(n: u64) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// `num / 2^shift` as a reduced rational.
pub fn dyadic(num: BigInt, shift: usize) -> ExactRational {
    ExactRational::new(num, BigInt::one() << shift)
}

/// Nearest double to an exact rational. Handles numerators and
/// denominators far outside the `f64` range as long as the quotient fits.
pub fn to_f64(q: &ExactRational) -> f64 {
    if let Some(v) = q.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    ratio_f64(q.numer(), q.denom())
}

/// `num / den` for big integers via their leading bits.
pub fn ratio_f64(num: &BigInt, den: &BigInt) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let nb = num.bits() as i64;
    let db = den.bits() as i64;
    // keep about 64 significant bits of the quotient
    let shift = 64 - (nb - db);
    let q = if shift >= 0 {
        (num << shift as usize) / den
    } else {
        num / (den << (-shift) as usize)
    };
    q.to_f64().unwrap_or(f64::NAN) * libm::exp2(-shift as f64)
}

/// Natural logarithm of a positive big integer.
pub fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return libm::log(x.to_f64().unwrap_or(f64::INFINITY));
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap_or(f64::NAN);
    libm::log(top) + shift as f64 * core::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), BigUint::from(6u32));
        assert_eq!(binomial(3, 5), BigUint::zero());
        assert_eq!(binomial(0, 0), BigUint::one());
        let row = binomial_row(10);
        assert_eq!(row[5], BigUint::from(252u32));
        let sum: BigUint = binomial_row(60).into_iter().sum();
        assert_eq!(sum, BigUint::one() << 60usize);
        assert_eq!(binomial_prefix(3, 5)[4], BigUint::zero());
        assert_eq!(binomial_prefix(3, 5)[3], BigUint::one());
    }

    #[test]
    fn huge_ratios_convert() {
        let num = BigInt::from(binomial(4000, 2000)) * 3;
        let den = BigInt::from(binomial(4000, 2000));
        let q = ExactRational::new(num, den);
        assert_eq!(to_f64(&q), 3.0);
        let big = BigInt::one() << 5000usize;
        let x = ratio_f64(&(big.clone() * 7), &(big * 2));
        assert!((x - 3.5).abs() < 1e-15);
        let l = ln_big(&(BigUint::one() << 3000usize));
        assert!((l - 3000.0 * core::f64::consts::LN_2).abs() < 1e-9);
    }
}
