//! Numerical checks of the known inequalities for projection constants and
//! binomial sums: Kadets-Snobar and the hypercontractive envelopes, the
//! McKay representation of partial binomial sums with its function `Y`,
//! a geometric-series bound on partial binomial sums, and Klimek's bound on
//! homogeneous parts.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::cube::{fwht_in_place, MAX_TRANSFORM_DIMENSION};
use crate::error::{Error, Result};
use crate::projection::{lambda_level_exact, LevelMode};
use crate::rational::{binomial, binomial_prefix, ln_big, to_f64, ExactRational};
use crate::rng::CounterRng;

/// Relative slack for floating-point comparisons.
pub const FLOAT_SLACK: f64 = 1e-12;
/// `L_2 ≤ C^d L_1` constant for functions of degree at most `d`.
pub const DEGREE_HYPERCONTRACTIVE: f64 = 2.69076;

/// One inequality `lhs ≤ rhs`, with exact sides when both are rational.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundsReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub exact_lhs: Option<ExactRational>,
    pub exact_rhs: Option<ExactRational>,
    pub pass: bool,
    pub context: Vec<(&'static str, String)>,
}

impl BoundsReport {
    fn float(name: &str, lhs: f64, rhs: f64, context: Vec<(&'static str, String)>) -> Self {
        BoundsReport {
            name: name.to_string(),
            lhs,
            rhs,
            exact_lhs: None,
            exact_rhs: None,
            pass: float_le(lhs, rhs),
            context,
        }
    }

    fn exact(name: &str, lhs: ExactRational, rhs: ExactRational, context: Vec<(&'static str, String)>) -> Self {
        BoundsReport {
            name: name.to_string(),
            lhs: to_f64(&lhs),
            rhs: to_f64(&rhs),
            pass: lhs <= rhs,
            exact_lhs: Some(lhs),
            exact_rhs: Some(rhs),
            context,
        }
    }
}

/// `a ≤ b` up to [`FLOAT_SLACK`] relative.
pub fn float_le(a: f64, b: f64) -> bool {
    a <= b + FLOAT_SLACK * a.abs().max(b.abs())
}

fn integer(v: impl Into<BigInt>) -> ExactRational {
    ExactRational::from_integer(v.into())
}

fn mode_name(mode: LevelMode) -> &'static str {
    match mode {
        LevelMode::ExactDegree => "homogeneous",
        LevelMode::UpToDegree => "up-to",
    }
}

/// Kadets-Snobar and hypercontractive envelopes for `λ(B_{=d}^N)` or
/// `λ(B_{≤d}^N)`.
pub fn check_range_bounds(n: usize, d: usize, mode: LevelMode) -> Result<Vec<BoundsReport>> {
    if d == 0 || d > n {
        return Err(Error::domain("the envelopes need 1 <= d <= N"));
    }
    let lambda = lambda_level_exact(n, d, mode)?;
    let lf = to_f64(&lambda);
    let card: BigUint = match mode {
        LevelMode::ExactDegree => binomial(n as u64, d as u64),
        LevelMode::UpToDegree => binomial_prefix(n as u64, d as u64).into_iter().sum(),
    };
    let context = || {
        vec![
            ("N", n.to_string()),
            ("d", d.to_string()),
            ("mode", mode_name(mode).to_string()),
        ]
    };
    let df = d as f64;
    let sqrt_card = libm::exp(0.5 * ln_big(&card));
    let power = libm::pow(n as f64 / df, df / 2.0);
    let shrink = match mode {
        LevelMode::ExactDegree => libm::exp(df / 2.0),
        LevelMode::UpToDegree => libm::pow(DEGREE_HYPERCONTRACTIVE, df),
    };
    // λ ≤ √|𝒮| decided exactly as λ² ≤ |𝒮|
    let upper = BoundsReport {
        name: "kadets-snobar upper".to_string(),
        lhs: lf,
        rhs: sqrt_card,
        pass: &lambda * &lambda <= integer(BigInt::from(card)),
        exact_lhs: Some(lambda.clone()),
        exact_rhs: None,
        context: context(),
    };
    Ok(vec![
        BoundsReport::exact("kadets-snobar lower", ExactRational::one(), lambda.clone(), context()),
        upper,
        BoundsReport::float("hypercontractive lower", sqrt_card / shrink, lf, context()),
        BoundsReport::float("power lower", power / shrink, lf, context()),
        BoundsReport::float("power upper", lf, libm::exp(df / 2.0) * power, context()),
    ])
}

/// `Y(x) = e^{x²/2} ∫_x^∞ e^{-t²/2} dt` for `x ≥ 0`.
///
/// Below 6 this is `√(π/2)·e^{x²/2}·erfc(x/√2)`, where the product loses
/// only a few ulps; above, the Mills-ratio continued fraction
/// `1/(x + 1/(x + 2/(x + 3/(x + …))))` converges in a few dozen terms.
pub fn y_function(x: f64) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::domain("Y is defined for finite x >= 0"));
    }
    if x < 6.0 {
        let scale = libm::sqrt(core::f64::consts::FRAC_PI_2);
        return Ok(scale * libm::exp(0.5 * x * x) * libm::erfc(x / core::f64::consts::SQRT_2));
    }
    // modified Lentz for b0 + a1/(b1 + a2/(b2 + …)) with b_k = x, a_k = k-1
    let tiny = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut dd = 0.0;
    for k in 1..200 {
        let a = k as f64;
        dd = x + a * dd;
        if dd.abs() < tiny {
            dd = tiny;
        }
        c = x + a / c;
        if c.abs() < tiny {
            c = tiny;
        }
        dd = 1.0 / dd;
        let delta = c * dd;
        f *= delta;
        if (delta - 1.0).abs() < 1e-17 {
            break;
        }
    }
    Ok(1.0 / f)
}

/// Szarek's bounds `2/(x + √(x²+4)) ≤ Y(x) ≤ 4/(3x + √(x²+8))`.
pub fn szarek_bounds(x: f64) -> (f64, f64) {
    (
        2.0 / (x + libm::sqrt(x * x + 4.0)),
        4.0 / (3.0 * x + libm::sqrt(x * x + 8.0)),
    )
}

/// Both Szarek bounds over a grid, summarized by the worst ratios
/// `lower/Y` and `Y/upper` (each must stay at most 1).
pub fn check_szarek_bounds(grid: &[f64]) -> Result<Vec<BoundsReport>> {
    let mut worst_lower = (f64::NEG_INFINITY, 0.0);
    let mut worst_upper = (f64::NEG_INFINITY, 0.0);
    for &x in grid {
        let y = y_function(x)?;
        let (lo, hi) = szarek_bounds(x);
        if lo / y > worst_lower.0 {
            worst_lower = (lo / y, x);
        }
        if y / hi > worst_upper.0 {
            worst_upper = (y / hi, x);
        }
    }
    let ctx = |x: f64| vec![("points", grid.len().to_string()), ("worst_x", alloc::format!("{x}"))];
    Ok(vec![
        BoundsReport::float("szarek lower / Y", worst_lower.0, 1.0, ctx(worst_lower.1)),
        BoundsReport::float("Y / szarek upper", worst_upper.0, 1.0, ctx(worst_upper.1)),
    ])
}

pub const MAX_MCKAY_N: usize = 4001;

fn check_mckay_args(n: usize, alpha: usize) -> Result<usize> {
    if n > MAX_MCKAY_N {
        return Err(Error::guard("McKay N", n, MAX_MCKAY_N));
    }
    if alpha >= n {
        return Err(Error::domain("McKay needs 0 <= alpha < N"));
    }
    if (n - alpha).is_multiple_of(2) {
        return Err(Error::domain("McKay needs N - alpha odd"));
    }
    Ok((n - alpha - 1) / 2)
}

fn mckay_from_sums(n: usize, alpha: usize, lhs: &BigUint, binom: &BigUint) -> Result<BoundsReport> {
    let nf = n as f64;
    let y = y_function((alpha as f64 + 1.0) / libm::sqrt(nf))?;
    let log_ratio = ln_big(lhs) - ln_big(binom) - 0.5 * libm::log(nf) - libm::log(y);
    let c = libm::sqrt(nf) * log_ratio;
    let upper = libm::sqrt(core::f64::consts::FRAC_PI_2);
    let mut report = BoundsReport::float(
        "mckay c",
        c,
        upper,
        vec![("N", n.to_string()), ("alpha", alpha.to_string())],
    );
    report.pass = report.pass && c >= -FLOAT_SLACK;
    Ok(report)
}

/// `c_{α,N}` from `Σ_{k≤(N-α-1)/2} C(N,k) = √N·C(N-1,(N-α-1)/2)·Y((α+1)/√N)·e^{c/√N}`;
/// passes when `0 ≤ c ≤ √(π/2)`.
pub fn mckay_constant(n: usize, alpha: usize) -> Result<BoundsReport> {
    let k = check_mckay_args(n, alpha)?;
    let lhs: BigUint = binomial_prefix(n as u64, k as u64).into_iter().sum();
    mckay_from_sums(n, alpha, &lhs, &binomial(n as u64 - 1, k as u64))
}

/// Every admissible `N ≤ max_n` for one `α`, summarized by the largest
/// `c`; the smallest `c` is recorded in the context and must be `≥ 0`.
pub fn mckay_sweep(max_n: usize, alpha: usize) -> Result<BoundsReport> {
    if max_n > MAX_MCKAY_N {
        return Err(Error::guard("McKay N", max_n, MAX_MCKAY_N));
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut count = 0usize;
    let mut all_pass = true;
    // rows of Pascal's triangle built in place
    let mut row: Vec<BigUint> = vec![BigUint::one()];
    for n in 1..=max_n {
        let mut next = Vec::with_capacity(n + 1);
        next.push(BigUint::one());
        for k in 1..n {
            next.push(&row[k - 1] + &row[k]);
        }
        next.push(BigUint::one());
        if n > alpha && (n - alpha) % 2 == 1 {
            let k = (n - alpha - 1) / 2;
            let lhs: BigUint = next[..=k].iter().sum();
            let r = mckay_from_sums(n, alpha, &lhs, &row[k])?;
            all_pass &= r.pass;
            lo = lo.min(r.lhs);
            hi = hi.max(r.lhs);
            count += 1;
        }
        row = next;
    }
    if count == 0 {
        return Err(Error::domain("no admissible N in the range"));
    }
    Ok(BoundsReport {
        name: "mckay c (max over N)".to_string(),
        lhs: hi,
        rhs: libm::sqrt(core::f64::consts::FRAC_PI_2),
        exact_lhs: None,
        exact_rhs: None,
        pass: all_pass,
        context: vec![
            ("alpha", alpha.to_string()),
            ("max_N", max_n.to_string()),
            ("points", count.to_string()),
            ("min_c", alloc::format!("{lo}")),
        ],
    })
}

/// `Σ_{k≤d} C(N,k) ≤ C(N,d)(N-d+1)/(N-2d+1)` for `2d - 1 < N`, exactly.
pub fn check_desigforo(n: usize, d: usize) -> Result<BoundsReport> {
    if 2 * d > n {
        return Err(Error::domain("the bound needs 2d - 1 < N"));
    }
    let lhs: BigUint = binomial_prefix(n as u64, d as u64).into_iter().sum();
    let rhs = ExactRational::new(
        BigInt::from(binomial(n as u64, d as u64) * BigUint::from(n - d + 1)),
        BigInt::from(n + 1 - 2 * d),
    );
    Ok(BoundsReport::exact(
        "partial binomial sum",
        integer(BigInt::from(lhs)),
        rhs,
        vec![("N", n.to_string()), ("d", d.to_string())],
    ))
}

/// The partial-sum bound for every `N ≤ max_n` and every `d` with
/// `2d - 1 < N`, summarized by the largest ratio `lhs/rhs`; each case is
/// decided exactly.
pub fn desigforo_sweep(max_n: usize) -> Result<BoundsReport> {
    let mut worst = 0.0f64;
    let mut worst_at = (0, 0);
    let mut all_pass = true;
    let mut count = 0usize;
    for n in 1..=max_n {
        let row: Vec<BigUint> = crate::rational::binomial_row(n as u64);
        let mut prefix = BigUint::zero();
        for d in 0..=n {
            prefix += &row[d];
            if 2 * d > n {
                break;
            }
            // Σ_{k≤d} C(N,k)·(N-2d+1) ≤ C(N,d)·(N-d+1)
            let lhs = &prefix * BigUint::from(n + 1 - 2 * d);
            let rhs = &row[d] * BigUint::from(n - d + 1);
            all_pass &= lhs <= rhs;
            let ratio = libm::exp(ln_big(&lhs) - ln_big(&rhs));
            if ratio > worst {
                worst = ratio;
                worst_at = (n, d);
            }
            count += 1;
        }
    }
    if count == 0 {
        return Err(Error::domain("no admissible (N, d) in the range"));
    }
    Ok(BoundsReport {
        name: "partial binomial sum / bound (max)".to_string(),
        lhs: worst,
        rhs: 1.0,
        exact_lhs: None,
        exact_rhs: None,
        pass: all_pass,
        context: vec![
            ("max_N", max_n.to_string()),
            ("points", count.to_string()),
            ("worst_N", worst_at.0.to_string()),
            ("worst_d", worst_at.1.to_string()),
        ],
    })
}

pub const MAX_KLIMEK_N: usize = 14;

/// Largest `‖f_k‖_∞/‖f‖_∞` over homogeneous parts `k ≤ d` of random `f`
/// of degree `≤ d` (coefficients uniform in `[-1, 1]`), against
/// `(1+√2)^d`.
pub fn check_klimek(n: usize, d: usize, trials: u64, seed: u64) -> Result<BoundsReport> {
    if n > MAX_KLIMEK_N {
        return Err(Error::guard("Klimek N", n, MAX_KLIMEK_N));
    }
    if d > n {
        return Err(Error::domain("d must not exceed N"));
    }
    if trials == 0 {
        return Err(Error::domain("at least one trial is needed"));
    }
    debug_assert!(n <= MAX_TRANSFORM_DIMENSION);
    let size = 1usize << n;
    let rng = CounterRng::new(seed);
    let mut worst = 0.0f64;
    let mut coeffs = vec![0.0f64; size];
    let mut values = vec![0.0f64; size];
    for trial in 0..trials {
        for (s, c) in coeffs.iter_mut().enumerate() {
            *c = if (s.count_ones() as usize) <= d {
                rng.symmetric(trial * size as u64 + s as u64)
            } else {
                0.0
            };
        }
        values.copy_from_slice(&coeffs);
        fwht_in_place(&mut values);
        let sup = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if sup == 0.0 {
            continue;
        }
        for k in 0..=d {
            for (s, v) in values.iter_mut().enumerate() {
                *v = if s.count_ones() as usize == k { coeffs[s] } else { 0.0 };
            }
            fwht_in_place(&mut values);
            let part = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            worst = worst.max(part / sup);
        }
    }
    Ok(BoundsReport::float(
        "homogeneous part / sup",
        worst,
        libm::pow(1.0 + core::f64::consts::SQRT_2, d as f64),
        vec![
            ("N", n.to_string()),
            ("d", d.to_string()),
            ("trials", trials.to_string()),
            ("seed", seed.to_string()),
        ],
    ))
}

/// `λ(B_{=d}^N) ≤ (1+√2)^d λ(B_{≤d}^N)`.
pub fn check_homog_vs_upto(n: usize, d: usize) -> Result<BoundsReport> {
    let homog = lambda_level_exact(n, d, LevelMode::ExactDegree)?;
    let upto = lambda_level_exact(n, d, LevelMode::UpToDegree)?;
    let factor = libm::pow(1.0 + core::f64::consts::SQRT_2, d as f64);
    let mut report = BoundsReport::float(
        "homogeneous vs up-to",
        to_f64(&homog),
        factor * to_f64(&upto),
        vec![("N", n.to_string()), ("d", d.to_string())],
    );
    report.exact_lhs = Some(homog);
    if upto.is_zero() {
        report.pass = false;
    }
    Ok(report)
}
