//! Sidon constants `sid(B_𝒮^N) = sup { Σ_S |f̂(S)| : ‖f‖_∞ ≤ 1 }` and the
//! related bounds: the prime constant κ, the comparison of the Sidon
//! constant of `B_{=d}^N` with the projection constant of `B_{=d-1}^N`,
//! the Bohnenblust-Hille functional and Kahane-Salem-Zygmund sign search.
//!
//! The Sidon constant is the maximum of the convex function `‖a‖_1` over
//! the polytope `K = { a : |Σ_S a_S x^S| ≤ 1 for all x }`, so it equals the
//! largest of the linear programs `max σ·a` over sign patterns `σ`. The
//! translations `a_S ↦ y^S a_S` and `a ↦ -a` preserve `K`, so only one sign
//! pattern per orbit is solved. Orbits are cosets of the subspace
//! `W ⊂ GF(2)^𝒮` spanned by the coordinate patterns `(1[i ∈ S])_S` and the
//! all-ones pattern; the representative of each coset is the unique pattern
//! vanishing on the pivot positions of a reduced basis of `W`.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::cube::{fwht_in_place, parity_sign, SupportFamily, WalshPolynomial};
use crate::error::{Error, Result};
use crate::lp::LpProblem;
use crate::primes::sieve;
use crate::projection::{lambda_level_exact, LevelMode};
use crate::rational::{to_f64, ExactRational};
use crate::rng::CounterRng;

pub const MAX_SIDON_DIMENSION: usize = 12;
pub const MAX_SIDON_SETS: usize = 64;
pub const DEFAULT_MAX_ORTHANTS: u64 = 1 << 22;
/// Sign-pattern representatives handled by one cold-started solver.
pub const CHUNK_SIZE: u64 = 1 << 12;
pub const MIN_SIDON_TOLERANCE: f64 = 1e-12;
pub const MAX_SIDON_TOLERANCE: f64 = 1e-3;

/// The orbit-reduced family of linear programs whose maximum is the Sidon
/// constant of one support family.
#[derive(Debug, Clone)]
pub struct SidonProblem {
    family: SupportFamily,
    /// Distinct value patterns `(x^S)_S` up to sign, bit `s` set for `-1`.
    patterns: Vec<u64>,
    lp: LpProblem,
    /// One sign pattern per orbit, in enumeration order.
    reps: Vec<u64>,
    /// Sign patterns enumerated before the permutation reduction.
    candidates: u64,
    automorphisms: usize,
}

/// Best vertex found inside one chunk of sign patterns.
#[derive(Debug, Clone, PartialEq)]
pub struct ChunkBest {
    pub value: f64,
    pub representative: u64,
    pub basis: Vec<usize>,
    pub solved: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SidonResult {
    pub value: f64,
    /// `Σ|a_S|` of the exactly re-solved witness, when it is exactly
    /// feasible.
    pub exact_value: Option<ExactRational>,
    pub witness: WalshPolynomial<f64>,
    pub exact_witness: Option<Vec<ExactRational>>,
    /// `‖witness‖_∞`, computed exactly when the exact witness exists.
    pub witness_sup: f64,
    pub orthants_solved: u64,
    pub tol: f64,
}

fn pattern_of(family: &SupportFamily, x: u128) -> u64 {
    family
        .sets()
        .iter()
        .enumerate()
        .fold(0u64, |acc, (s, set)| {
            if parity_sign(set.bits() & x) < 0 {
                acc | 1 << s
            } else {
                acc
            }
        })
}

fn full_mask(m: usize) -> u64 {
    if m == 64 {
        u64::MAX
    } else {
        (1u64 << m) - 1
    }
}

fn sign(pattern: u64, s: usize) -> f64 {
    if pattern >> s & 1 == 1 {
        -1.0
    } else {
        1.0
    }
}

fn check_tolerance(tol: f64) -> Result<()> {
    if !(MIN_SIDON_TOLERANCE..=MAX_SIDON_TOLERANCE).contains(&tol) {
        return Err(Error::domain(alloc::format!(
            "tolerance must lie in [{MIN_SIDON_TOLERANCE:e}, {MAX_SIDON_TOLERANCE:e}]"
        )));
    }
    Ok(())
}

impl SidonProblem {
    pub fn new(family: &SupportFamily, max_orthants: u64) -> Result<Self> {
        let n = family.dim();
        let m = family.len();
        if n > MAX_SIDON_DIMENSION {
            return Err(Error::guard("Sidon dimension", n, MAX_SIDON_DIMENSION));
        }
        if m == 0 {
            return Err(Error::domain("the family is empty"));
        }
        if m > MAX_SIDON_SETS {
            return Err(Error::guard("Sidon family size", m, MAX_SIDON_SETS));
        }
        let full = full_mask(m);
        // reduced row echelon basis of W, pivot = highest set bit
        let mut basis: Vec<u64> = Vec::new();
        let generators = (0..n).map(|i| pattern_of(family, 1u128 << i)).chain([full]);
        for g in generators {
            let mut v = g;
            for &b in &basis {
                if v >> (63 - b.leading_zeros()) & 1 == 1 {
                    v ^= b;
                }
            }
            if v == 0 {
                continue;
            }
            let top = 63 - v.leading_zeros();
            for b in &mut basis {
                if *b >> top & 1 == 1 {
                    *b ^= v;
                }
            }
            basis.push(v);
        }
        let pivots: u64 = basis.iter().fold(0, |acc, b| acc | 1 << (63 - b.leading_zeros()));
        let free_bits: Vec<usize> = (0..m).filter(|&s| pivots >> s & 1 == 0).collect();
        let candidates = 1u128 << free_bits.len();
        if candidates > max_orthants as u128 {
            return Err(Error::guard(
                "sign-pattern orbits",
                u64::try_from(candidates).unwrap_or(u64::MAX),
                max_orthants,
            ));
        }
        let automorphisms = set_automorphisms(family, MAX_AUTOMORPHISMS);
        let reps = orbit_representatives(&basis, &free_bits, &automorphisms);
        let mut patterns: Vec<u64> = (0..1u128 << n)
            .map(|x| {
                let p = pattern_of(family, x);
                if p & 1 == 1 {
                    !p & full
                } else {
                    p
                }
            })
            .collect();
        patterns.sort_unstable();
        patterns.dedup();
        let mut rows = Vec::with_capacity(2 * patterns.len());
        for &p in &patterns {
            let row: Vec<f64> = (0..m).map(|s| sign(p, s)).collect();
            let neg: Vec<f64> = row.iter().map(|v| -v).collect();
            rows.push(row);
            rows.push(neg);
        }
        let rhs = vec![1.0; rows.len()];
        let lp = LpProblem::new(rows, rhs)?;
        Ok(SidonProblem {
            family: family.clone(),
            patterns,
            lp,
            reps,
            candidates: candidates as u64,
            automorphisms: automorphisms.len() + 1,
        })
    }

    pub fn family(&self) -> &SupportFamily {
        &self.family
    }

    /// Number of sign-pattern orbits, one LP each.
    pub fn orbit_count(&self) -> u64 {
        self.reps.len() as u64
    }

    /// Sign patterns left after the translation and negation reduction.
    pub fn candidate_count(&self) -> u64 {
        self.candidates
    }

    /// Size of the coordinate-permutation symmetry group used (possibly a
    /// subset of the full group, identity included).
    pub fn automorphism_count(&self) -> usize {
        self.automorphisms
    }

    pub fn chunk_count(&self) -> u64 {
        self.orbit_count().div_ceil(CHUNK_SIZE)
    }

    /// Sign pattern of orbit representative number `r`.
    pub fn representative(&self, r: u64) -> u64 {
        self.reps[r as usize]
    }

    fn objective(&self, pattern: u64) -> Vec<f64> {
        (0..self.family.len()).map(|s| sign(pattern, s)).collect()
    }

    /// Solves chunk `k` with a solver that starts cold and then warm-starts
    /// along the chunk, so the result does not depend on how chunks are
    /// scheduled.
    pub fn solve_chunk(&self, k: u64, tol: f64) -> Result<ChunkBest> {
        check_tolerance(tol)?;
        let start = k * CHUNK_SIZE;
        let end = (start + CHUNK_SIZE).min(self.orbit_count());
        if start >= end {
            return Err(Error::guard("chunk index", k, self.chunk_count()));
        }
        let mut solver = self.lp.solver(tol);
        let mut best: Option<ChunkBest> = None;
        for r in start..end {
            let sol = solver.maximize(&self.objective(self.representative(r)))?;
            if best.as_ref().is_none_or(|b| sol.optimum > b.value) {
                best = Some(ChunkBest {
                    value: sol.optimum,
                    representative: r,
                    basis: sol.basis,
                    solved: 0,
                });
            }
        }
        let mut best = best.expect("chunk is nonempty");
        best.solved = end - start;
        Ok(best)
    }

    /// Combines chunk maxima (in any order) and certifies the winner with
    /// an exact rational re-solve of its basis.
    pub fn finish(&self, chunks: Vec<ChunkBest>, tol: f64) -> Result<SidonResult> {
        check_tolerance(tol)?;
        let solved: u64 = chunks.iter().map(|c| c.solved).sum();
        let best = chunks
            .into_iter()
            .reduce(|a, b| {
                if b.value > a.value || (b.value == a.value && b.representative < a.representative) {
                    b
                } else {
                    a
                }
            })
            .ok_or_else(|| Error::domain("no chunks were solved"))?;
        let pattern = self.representative(best.representative);
        let m = self.family.len();
        let rows = self.lp.rows();
        let float_witness: Vec<f64> = {
            let b: Vec<Vec<f64>> = best.basis.iter().map(|&i| rows[i].clone()).collect();
            crate::linalg::Lu::factor(b, 1e-12)
                .ok_or_else(|| Error::Numeric("optimal basis is singular".into()))?
                .solve(&vec![1.0; m])
        };
        let exact = exact_vertex(&best.basis.iter().map(|&i| &rows[i]).collect::<Vec<_>>());
        let (exact_value, exact_witness, witness_sup) = match exact {
            Some(a) => {
                let sup = self
                    .patterns
                    .iter()
                    .map(|&p| {
                        let s: ExactRational = a
                            .iter()
                            .enumerate()
                            .map(|(k, v)| if p >> k & 1 == 1 { -v.clone() } else { v.clone() })
                            .sum();
                        s.abs()
                    })
                    .max()
                    .unwrap_or_else(ExactRational::zero);
                if sup <= ExactRational::from_integer(BigInt::from(1)) {
                    let value: ExactRational = a
                        .iter()
                        .enumerate()
                        .map(|(k, v)| if pattern >> k & 1 == 1 { -v.clone() } else { v.clone() })
                        .sum();
                    (Some(value), Some(a), to_f64(&sup))
                } else {
                    (None, None, self.float_sup(&float_witness))
                }
            }
            None => (None, None, self.float_sup(&float_witness)),
        };
        let value = match &exact_value {
            Some(v) => to_f64(v),
            None => best.value,
        };
        Ok(SidonResult {
            value,
            exact_value,
            witness: WalshPolynomial::new(self.family.clone(), float_witness)?,
            exact_witness,
            witness_sup,
            orthants_solved: solved,
            tol,
        })
    }

    fn float_sup(&self, a: &[f64]) -> f64 {
        self.patterns
            .iter()
            .map(|&p| a.iter().enumerate().map(|(k, v)| sign(p, k) * v).sum::<f64>().abs())
            .fold(0.0, f64::max)
    }
}

/// Cap on the number of coordinate permutations collected; a partial
/// group still gives a valid (if weaker) reduction.
pub const MAX_AUTOMORPHISMS: usize = 1 << 16;

/// Non-identity coordinate permutations mapping the family onto itself,
/// each given as the induced permutation of set indices.
fn set_automorphisms(family: &SupportFamily, cap: usize) -> Vec<Vec<usize>> {
    let n = family.dim();
    let sets: Vec<u128> = family.sets().iter().map(|s| s.bits()).collect();
    let mut found = Vec::new();
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    extend_automorphism(&sets, 0, &mut image, &mut used, &mut found, cap);
    found
}

fn map_set(set: u128, image: &[usize]) -> u128 {
    let mut out = 0u128;
    let mut rest = set;
    while rest != 0 {
        let i = rest.trailing_zeros() as usize;
        out |= 1 << image[i];
        rest &= rest - 1;
    }
    out
}

fn extend_automorphism(
    sets: &[u128],
    level: usize,
    image: &mut [usize],
    used: &mut [bool],
    found: &mut Vec<Vec<usize>>,
    cap: usize,
) {
    let n = image.len();
    if found.len() >= cap {
        return;
    }
    // sets whose largest element was just assigned must land in the family
    if level > 0 {
        for &s in sets {
            if s != 0
                && 127 - s.leading_zeros() as usize == level - 1
                && sets.binary_search(&map_set(s, image)).is_err()
            {
                return;
            }
        }
    }
    if level == n {
        if image.iter().enumerate().any(|(i, &j)| i != j) {
            let index: Vec<usize> = sets
                .iter()
                .map(|&s| sets.binary_search(&map_set(s, image)).expect("checked above"))
                .collect();
            found.push(index);
        }
        return;
    }
    for j in 0..n {
        if !used[j] {
            used[j] = true;
            image[level] = j;
            extend_automorphism(sets, level + 1, image, used, found, cap);
            used[j] = false;
            image[level] = usize::MAX;
        }
    }
}

/// Enumerates the coset representatives (patterns vanishing on the pivots
/// of `basis`) and keeps the first member of each orbit under `perms`.
fn orbit_representatives(basis: &[u64], free_bits: &[usize], perms: &[Vec<usize>]) -> Vec<u64> {
    let count = 1u64 << free_bits.len();
    let mut position = [usize::MAX; 64];
    for (k, &s) in free_bits.iter().enumerate() {
        position[s] = k;
    }
    let reduce = |mut v: u64| {
        for &b in basis {
            if v >> (63 - b.leading_zeros()) & 1 == 1 {
                v ^= b;
            }
        }
        v
    };
    let index_of = |v: u64| {
        let mut r = 0u64;
        let mut rest = v;
        while rest != 0 {
            let s = rest.trailing_zeros() as usize;
            r |= 1 << position[s];
            rest &= rest - 1;
        }
        r
    };
    let pattern_at = |r: u64| {
        free_bits
            .iter()
            .enumerate()
            .fold(0u64, |acc, (k, &s)| acc | ((r >> k) & 1) << s)
    };
    if perms.is_empty() {
        return (0..count).map(pattern_at).collect();
    }
    let mut seen = vec![0u64; count.div_ceil(64) as usize];
    let mut reps = Vec::new();
    for r in 0..count {
        if seen[(r / 64) as usize] >> (r % 64) & 1 == 1 {
            continue;
        }
        let v = pattern_at(r);
        reps.push(v);
        for perm in perms {
            let mut w = 0u64;
            let mut rest = v;
            while rest != 0 {
                let s = rest.trailing_zeros() as usize;
                w |= 1 << perm[s];
                rest &= rest - 1;
            }
            let t = index_of(reduce(w));
            seen[(t / 64) as usize] |= 1 << (t % 64);
        }
    }
    reps
}

/// Solves `B a = 1` exactly for a `±1` basis matrix.
fn exact_vertex(rows: &[&Vec<f64>]) -> Option<Vec<ExactRational>> {
    let n = rows.len();
    let mut a: Vec<Vec<ExactRational>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|&v| ExactRational::from_integer(BigInt::from(v as i64)))
                .chain([ExactRational::from_integer(BigInt::from(1))])
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        let p = a[col][col].clone();
        for v in &mut a[col][col..] {
            *v = &*v / &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..=n {
                    let delta = &f * &a[col][c];
                    a[r][c] -= delta;
                }
            }
        }
    }
    Some(a.into_iter().map(|mut r| r.pop().expect("augmented column")).collect())
}

/// Exact Sidon constant with the default orbit budget.
pub fn sidon_exact(family: &SupportFamily, tol: f64) -> Result<SidonResult> {
    sidon_exact_with_limit(family, tol, DEFAULT_MAX_ORTHANTS)
}

pub fn sidon_exact_with_limit(family: &SupportFamily, tol: f64, max_orthants: u64) -> Result<SidonResult> {
    check_tolerance(tol)?;
    let problem = SidonProblem::new(family, max_orthants)?;
    let chunks = (0..problem.chunk_count())
        .map(|k| problem.solve_chunk(k, tol))
        .collect::<Result<Vec<_>>>()?;
    problem.finish(chunks, tol)
}

pub const MIN_KAPPA_TOLERANCE: f64 = 1e-7;
pub const MAX_KAPPA_TOLERANCE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KappaEstimate {
    pub value: f64,
    /// Certified bound on `|κ - value|`.
    pub error_bound: f64,
    /// Largest prime included in the partial product.
    pub cutoff: usize,
}

/// `-log(sin x / x)` without cancellation for small `x`.
fn neg_log_sinc(x: f64) -> f64 {
    if x < 1e-2 {
        let x2 = x * x;
        // x²/6 + x⁴/180 + x⁶/2835 + x⁸/37800
        x2 * (1.0 / 6.0 + x2 * (1.0 / 180.0 + x2 * (1.0 / 2835.0 + x2 / 37800.0)))
    } else {
        -libm::log(libm::sin(x) / x)
    }
}

/// `κ = Π_p sinc(π/p)^{-1}` over all primes, with error below `tol`.
///
/// For `x ≤ π/2`, `-log sinc x ≤ 1.04·x²/6`, so the primes above `P`
/// contribute at most `ε = 1.04·(π²/6)/P` to `log κ`, and the partial
/// product is within `κ_P(e^ε - 1)` of the limit.
pub fn kappa_estimate(tol: f64) -> Result<KappaEstimate> {
    if !(MIN_KAPPA_TOLERANCE..=MAX_KAPPA_TOLERANCE).contains(&tol) {
        return Err(Error::domain(alloc::format!(
            "tolerance must lie in [{MIN_KAPPA_TOLERANCE:e}, {MAX_KAPPA_TOLERANCE:e}]"
        )));
    }
    let pi = core::f64::consts::PI;
    let tail_constant = 1.04 * pi * pi / 6.0;
    let mut cutoff = libm::ceil(tail_constant * 2.5 / tol) as usize;
    loop {
        let is_prime = sieve(cutoff);
        let mut sum = 0.0f64;
        let mut comp = 0.0f64;
        for (p, &prime) in is_prime.iter().enumerate() {
            if prime {
                let y = neg_log_sinc(pi / p as f64) - comp;
                let t = sum + y;
                comp = (t - sum) - y;
                sum = t;
            }
        }
        let value = libm::exp(sum);
        let eps = tail_constant / cutoff as f64;
        // rounding in the sum is far below the tail
        let error_bound = value * libm::expm1(eps) + 1e-12 * value;
        if error_bound < tol {
            return Ok(KappaEstimate {
                value,
                error_bound,
                cutoff,
            });
        }
        cutoff *= 2;
    }
}

pub fn kappa_constant(tol: f64) -> Result<f64> {
    Ok(kappa_estimate(tol)?.value)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionBoundReport {
    pub n: usize,
    pub d: usize,
    pub sidon: f64,
    pub lambda: ExactRational,
    pub kappa: f64,
    pub constant: f64,
    pub rhs: f64,
    pub pass: bool,
}

/// `sid(B_{=d}^N) ≤ e^d (2d) κ^d 2^{d-1} λ(B_{=d-1}^N)`.
pub fn check_sidon_projection_bound(n: usize, d: usize) -> Result<ProjectionBoundReport> {
    if !(2..=3).contains(&d) {
        return Err(Error::domain("the bound is checked for d = 2 and d = 3"));
    }
    if n > 8 {
        return Err(Error::guard("Sidon bound dimension", n, 8));
    }
    if d > n {
        return Err(Error::domain("d must not exceed N"));
    }
    let family = crate::cube::make_family(&crate::cube::FamilySpec::Homogeneous { n, d })?;
    let sidon = sidon_exact(&family, crate::lp::DEFAULT_TOLERANCE)?.value;
    let lambda = lambda_level_exact(n, d - 1, LevelMode::ExactDegree)?;
    let kappa = kappa_estimate(1e-6)?;
    let df = d as f64;
    // the larger κ keeps the right-hand side an upper envelope
    let constant = libm::exp(df)
        * 2.0
        * df
        * libm::pow(kappa.value + kappa.error_bound, df)
        * libm::exp2(df - 1.0);
    let rhs = constant * to_f64(&lambda);
    Ok(ProjectionBoundReport {
        n,
        d,
        sidon,
        lambda,
        kappa: kappa.value,
        constant,
        rhs,
        pass: sidon <= rhs,
    })
}

fn sup_norm(f: &WalshPolynomial<f64>) -> Result<f64> {
    let table = crate::cube::dense_coefficients(f)?;
    let mut values = table;
    fwht_in_place(&mut values);
    Ok(values.iter().fold(0.0f64, |m, v| m.max(v.abs())))
}

/// `(Σ|f̂(S)|^{2d/(d+1)})^{(d+1)/(2d)} / ‖f‖_∞`.
pub fn bh_functional(f: &WalshPolynomial<f64>, d: usize) -> Result<f64> {
    if d == 0 {
        return Err(Error::domain("d must be at least 1"));
    }
    let degree = f.family().degree();
    if degree > d {
        return Err(Error::domain(alloc::format!("f has degree {degree} > d = {d}")));
    }
    let sup = sup_norm(f)?;
    if sup == 0.0 {
        return Err(Error::domain("f vanishes identically"));
    }
    let p = 2.0 * d as f64 / (d as f64 + 1.0);
    let sum: f64 = f.coeffs().iter().map(|c| libm::pow(c.abs(), p)).sum();
    Ok(libm::pow(sum, 1.0 / p) / sup)
}

#[derive(Debug, Clone, PartialEq)]
pub struct KszReport {
    pub signs: Vec<i8>,
    pub supnorm: i64,
    /// `6√(log 2)·√N·√|𝒮|`.
    pub bound: f64,
    pub trials_used: u64,
    pub pass: bool,
}

/// Random search for signs `ε_S` with `‖Σ ε_S χ_S‖_∞ ≤ 6√(log 2)√N√|𝒮|`.
/// Stops at the first success; otherwise reports the best signs seen.
pub fn ksz_signs(family: &SupportFamily, trials: u64, seed: u64) -> Result<KszReport> {
    let n = family.dim();
    if n > crate::cube::MAX_TRANSFORM_DIMENSION {
        return Err(Error::guard("transform dimension", n, crate::cube::MAX_TRANSFORM_DIMENSION));
    }
    if trials == 0 {
        return Err(Error::domain("at least one trial is needed"));
    }
    let m = family.len();
    let bound = 6.0 * libm::sqrt(core::f64::consts::LN_2) * libm::sqrt(n as f64) * libm::sqrt(m as f64);
    let rng = CounterRng::new(seed);
    let mut best: Option<(Vec<i8>, i64)> = None;
    let mut table = vec![0i64; 1 << n];
    for trial in 0..trials {
        let signs: Vec<i8> = (0..m as u64)
            .map(|s| if rng.word(trial * m as u64 + s) >> 63 == 1 { -1 } else { 1 })
            .collect();
        table.iter_mut().for_each(|v| *v = 0);
        for (set, &e) in family.sets().iter().zip(&signs) {
            table[set.bits() as usize] = e as i64;
        }
        fwht_in_place(&mut table);
        let sup = table.iter().map(|v| v.abs()).max().unwrap_or(0);
        if best.as_ref().is_none_or(|(_, b)| sup < *b) {
            best = Some((signs, sup));
        }
        let (signs, sup) = best.as_ref().expect("set above");
        if (*sup as f64) <= bound {
            return Ok(KszReport {
                signs: signs.clone(),
                supnorm: *sup,
                bound,
                trials_used: trial + 1,
                pass: true,
            });
        }
    }
    let (signs, supnorm) = best.expect("trials >= 1");
    Ok(KszReport {
        signs,
        supnorm,
        bound,
        trials_used: trials,
        pass: false,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityReport {
    pub n: usize,
    pub d: usize,
    pub size: usize,
    /// Every set has at most `d` elements.
    pub degree_ok: bool,
    /// `(N/d)^{d/2} ≤ |𝒮|`.
    pub precondition: bool,
    /// `|𝒮|^{1/2}/√N`.
    pub pivot: f64,
    /// `|𝒮|^{1/2}/(6√(log 2)√N)`.
    pub ksz_lower: f64,
    pub exact: Option<f64>,
    pub lower_bound_holds: Option<bool>,
}

/// Reference quantities for the growth `sid ≍ |𝒮|^{1/2}/√N`; the exact
/// constant is attached when the orbit enumeration fits the default budget.
pub fn sidon_density_bounds(family: &SupportFamily, d: usize) -> Result<DensityReport> {
    if d == 0 {
        return Err(Error::domain("d must be at least 1"));
    }
    let n = family.dim();
    let size = family.len();
    let nf = n as f64;
    let sf = size as f64;
    let precondition = libm::pow(nf / d as f64, d as f64 / 2.0) <= sf;
    let pivot = libm::sqrt(sf) / libm::sqrt(nf);
    let ksz_lower = pivot / (6.0 * libm::sqrt(core::f64::consts::LN_2));
    let exact = if n <= MAX_SIDON_DIMENSION && size <= MAX_SIDON_SETS && size > 0 {
        match sidon_exact(family, crate::lp::DEFAULT_TOLERANCE) {
            Ok(r) => Some(r.value),
            Err(Error::Guard { .. }) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    Ok(DensityReport {
        n,
        d,
        size,
        degree_ok: family.degree() <= d,
        precondition,
        pivot,
        ksz_lower,
        exact,
        lower_bound_holds: exact.map(|v| v + crate::lp::DEFAULT_TOLERANCE >= ksz_lower),
    })
}
