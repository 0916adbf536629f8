//! Points of the Boolean cube, subsets of `[N]`, Walsh characters, the
//! Walsh-Hadamard transform and the support families used throughout.
//!
//! Coordinates are stored as bits: bit `i` of a [`CubePoint`] is set when
//! `x_{i+1} = -1`, and bit `i` of a [`SubsetMask`] is set when `i+1 ∈ S`.
//! With this encoding `χ_S(x) = (-1)^{popcount(S & x)}`.

use alloc::vec::Vec;
use core::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::primes;
use crate::rational::ExactRational;

/// Largest dimension representable by masks and points.
pub const MAX_DIMENSION: usize = 128;
/// Largest dimension for which the whole cube is enumerated.
pub const MAX_ENUMERATION_DIMENSION: usize = 30;
/// Largest dimension for the in-memory transform.
pub const MAX_TRANSFORM_DIMENSION: usize = 24;
/// Largest number of sets a generated family may hold.
pub const MAX_FAMILY_SIZE: usize = 1 << 24;

fn check_dimension(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::domain("the dimension N must be at least 1"));
    }
    if n > MAX_DIMENSION {
        return Err(Error::guard("N", n, MAX_DIMENSION));
    }
    Ok(())
}

#[inline]
fn width_mask(n: usize) -> u128 {
    if n >= 128 {
        u128::MAX
    } else {
        (1u128 << n) - 1
    }
}

/// A point `x ∈ {-1, +1}^N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CubePoint {
    bits: u128,
    n: usize,
}

impl CubePoint {
    pub fn new(n: usize, bits: u128) -> Result<Self> {
        check_dimension(n)?;
        if bits & !width_mask(n) != 0 {
            return Err(Error::domain("point has coordinates beyond N"));
        }
        Ok(CubePoint { bits, n })
    }

    /// The all `+1` point.
    pub fn ones(n: usize) -> Result<Self> {
        Self::new(n, 0)
    }

    /// Builds a point from its signs, `signs[i] < 0` meaning `x_{i+1} = -1`.
    pub fn from_signs(signs: &[i8]) -> Result<Self> {
        let mut bits = 0u128;
        for (i, &s) in signs.iter().enumerate() {
            if s < 0 {
                bits |= 1 << i;
            }
        }
        Self::new(signs.len(), bits)
    }

    pub fn bits(&self) -> u128 {
        self.bits
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Coordinate `x_{i+1}` as `±1`.
    pub fn coordinate(&self, i: usize) -> i8 {
        if self.bits >> i & 1 == 1 {
            -1
        } else {
            1
        }
    }

    /// Number of coordinates equal to `+1`.
    pub fn plus_ones(&self) -> usize {
        self.n - self.bits.count_ones() as usize
    }
}

/// A subset `S ⊆ [N]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetMask {
    bits: u128,
    n: usize,
}

impl SubsetMask {
    pub fn new(n: usize, bits: u128) -> Result<Self> {
        check_dimension(n)?;
        if bits & !width_mask(n) != 0 {
            return Err(Error::domain("subset has elements beyond N"));
        }
        Ok(SubsetMask { bits, n })
    }

    pub fn empty(n: usize) -> Result<Self> {
        Self::new(n, 0)
    }

    /// Builds `S` from 1-based indices. Repeated indices are rejected.
    pub fn from_indices(n: usize, indices: &[usize]) -> Result<Self> {
        check_dimension(n)?;
        let mut bits = 0u128;
        for &i in indices {
            if i == 0 || i > n {
                return Err(Error::domain(alloc::format!(
                    "index {i} is outside [1, {n}]"
                )));
            }
            let b = 1u128 << (i - 1);
            if bits & b != 0 {
                return Err(Error::domain(alloc::format!("index {i} repeated")));
            }
            bits |= b;
        }
        Ok(SubsetMask { bits, n })
    }

    pub fn bits(&self) -> u128 {
        self.bits
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn contains(&self, index: usize) -> bool {
        index >= 1 && index <= self.n && self.bits >> (index - 1) & 1 == 1
    }

    /// Elements of `S` as increasing 1-based indices.
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(|&i| self.bits >> i & 1 == 1).map(|i| i + 1)
    }
}

/// `χ_S(x)` as `±1`.
pub fn character_eval(s: SubsetMask, x: CubePoint) -> Result<i8> {
    if s.n != x.n {
        return Err(Error::DimensionMismatch {
            expected: s.n,
            found: x.n,
        });
    }
    Ok(parity_sign(s.bits & x.bits))
}

#[inline]
pub(crate) fn parity_sign(bits: u128) -> i8 {
    1 - 2 * (bits.count_ones() & 1) as i8
}

/// Which construction produced a family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    Explicit,
    Homogeneous(usize),
    UpTo(usize),
    PrimeSingletons,
    SquareFree,
}

/// Description of a family to build with [`make_family`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilySpec {
    /// Sets given as 1-based index lists.
    Explicit { n: usize, sets: Vec<Vec<usize>> },
    /// All `S` with `|S| = d`.
    Homogeneous { n: usize, d: usize },
    /// All `S` with `|S| ≤ d`, including `∅`.
    UpTo { n: usize, d: usize },
    /// `{{p} : p ≤ N prime}`.
    PrimeSingletons { n: usize },
    /// All sets of primes whose product is at most `N`.
    SquareFree { n: usize },
}

/// A nonempty family `𝒮` of distinct subsets of `[N]`, sorted by mask value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportFamily {
    n: usize,
    sets: Vec<SubsetMask>,
    kind: FamilyKind,
}

impl SupportFamily {
    /// Wraps an arbitrary list of subsets as an explicit family.
    pub fn explicit(n: usize, sets: Vec<SubsetMask>) -> Result<Self> {
        check_dimension(n)?;
        for s in &sets {
            if s.n != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: s.n,
                });
            }
        }
        Self::from_parts(n, sets, FamilyKind::Explicit)
    }

    fn from_parts(n: usize, mut sets: Vec<SubsetMask>, kind: FamilyKind) -> Result<Self> {
        if sets.is_empty() {
            return Err(Error::domain("a support family must be nonempty"));
        }
        sets.sort_unstable();
        if sets.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::domain("support family contains a repeated set"));
        }
        Ok(SupportFamily { n, sets, kind })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn sets(&self) -> &[SubsetMask] {
        &self.sets
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    /// Always false; families are nonempty by construction.
    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Largest `|S|` over the family.
    pub fn degree(&self) -> usize {
        self.sets.iter().map(SubsetMask::len).max().unwrap_or(0)
    }

    /// Position of `s` in [`Self::sets`].
    pub fn position(&self, s: SubsetMask) -> Option<usize> {
        self.sets.binary_search(&s).ok()
    }

    /// Applies a permutation of coordinates (`perm[i]` is the new 0-based
    /// position of coordinate `i`) to every set. The result is explicit.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: perm.len(),
            });
        }
        let mut seen = 0u128;
        for &p in perm {
            if p >= self.n || seen >> p & 1 == 1 {
                return Err(Error::domain("not a permutation of the coordinates"));
            }
            seen |= 1 << p;
        }
        let sets = self
            .sets
            .iter()
            .map(|s| {
                let mut bits = 0u128;
                for (i, &p) in perm.iter().enumerate() {
                    if s.bits >> i & 1 == 1 {
                        bits |= 1 << p;
                    }
                }
                SubsetMask { bits, n: self.n }
            })
            .collect();
        Self::from_parts(self.n, sets, FamilyKind::Explicit)
    }

    /// Sets as 1-based index lists, in family order.
    pub fn index_lists(&self) -> Vec<Vec<usize>> {
        self.sets.iter().map(|s| s.indices().collect()).collect()
    }
}

fn combinations_into(n: usize, d: usize, start: usize, acc: u128, out: &mut Vec<SubsetMask>) {
    if d == 0 {
        out.push(SubsetMask { bits: acc, n });
        return;
    }
    for i in start..=n - d {
        combinations_into(n, d - 1, i + 1, acc | 1 << i, out);
    }
}

fn count_up_to(n: usize, d: usize) -> u128 {
    let mut total = 0u128;
    let mut c = 1u128;
    for k in 0..=d {
        total = total.saturating_add(c);
        c = c.saturating_mul((n - k) as u128) / (k as u128 + 1);
    }
    total
}

/// Builds a support family.
pub fn make_family(spec: &FamilySpec) -> Result<SupportFamily> {
    match spec {
        FamilySpec::Explicit { n, sets } => {
            check_dimension(*n)?;
            let masks = sets
                .iter()
                .map(|s| SubsetMask::from_indices(*n, s))
                .collect::<Result<Vec<_>>>()?;
            SupportFamily::from_parts(*n, masks, FamilyKind::Explicit)
        }
        &FamilySpec::Homogeneous { n, d } | &FamilySpec::UpTo { n, d } => {
            check_dimension(n)?;
            if d == 0 || d > n {
                return Err(Error::domain(alloc::format!(
                    "degree d = {d} must satisfy 1 <= d <= N = {n}"
                )));
            }
            let homogeneous = matches!(spec, FamilySpec::Homogeneous { .. });
            let size = if homogeneous {
                count_up_to(n, d) - count_up_to(n, d - 1)
            } else {
                count_up_to(n, d)
            };
            if size > MAX_FAMILY_SIZE as u128 {
                return Err(Error::guard("family size", size, MAX_FAMILY_SIZE));
            }
            let mut sets = Vec::with_capacity(size as usize);
            if homogeneous {
                combinations_into(n, d, 0, 0, &mut sets);
                SupportFamily::from_parts(n, sets, FamilyKind::Homogeneous(d))
            } else {
                for k in 0..=d {
                    combinations_into(n, k, 0, 0, &mut sets);
                }
                SupportFamily::from_parts(n, sets, FamilyKind::UpTo(d))
            }
        }
        &FamilySpec::PrimeSingletons { n } => {
            check_dimension(n)?;
            let sets: Vec<_> = primes::primes_up_to(n)
                .into_iter()
                .map(|p| SubsetMask {
                    bits: 1 << (p - 1),
                    n,
                })
                .collect();
            if sets.is_empty() {
                return Err(Error::domain("there are no primes <= N"));
            }
            SupportFamily::from_parts(n, sets, FamilyKind::PrimeSingletons)
        }
        &FamilySpec::SquareFree { n } => {
            check_dimension(n)?;
            let sets = primes::squarefree_prime_sets(n)
                .into_iter()
                .map(|ps| SubsetMask {
                    bits: ps.iter().fold(0u128, |acc, p| acc | 1 << (p - 1)),
                    n,
                })
                .collect();
            SupportFamily::from_parts(n, sets, FamilyKind::SquareFree)
        }
    }
}

/// `f = Σ_S f̂(S) χ_S` with coefficients aligned to `family.sets()`.
#[derive(Debug, Clone, PartialEq)]
pub struct WalshPolynomial<T> {
    family: SupportFamily,
    coeffs: Vec<T>,
}

impl<T> WalshPolynomial<T> {
    pub fn new(family: SupportFamily, coeffs: Vec<T>) -> Result<Self> {
        if coeffs.len() != family.len() {
            return Err(Error::DimensionMismatch {
                expected: family.len(),
                found: coeffs.len(),
            });
        }
        Ok(WalshPolynomial { family, coeffs })
    }

    pub fn family(&self) -> &SupportFamily {
        &self.family
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn dim(&self) -> usize {
        self.family.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (SubsetMask, &T)> {
        self.family.sets.iter().copied().zip(self.coeffs.iter())
    }
}

impl<T: Clone> WalshPolynomial<T> {
    /// `Σ_{S ∈ 𝒮} c χ_S`.
    pub fn constant_coefficients(family: SupportFamily, c: T) -> Self {
        let coeffs = alloc::vec![c; family.len()];
        WalshPolynomial { family, coeffs }
    }
}

/// `f(x) = Σ_S f̂(S) χ_S(x)`.
pub fn evaluate<T>(f: &WalshPolynomial<T>, x: CubePoint) -> Result<T>
where
    T: Clone + Zero + Neg<Output = T>,
{
    if f.dim() != x.n {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            found: x.n,
        });
    }
    let mut acc = T::zero();
    for (s, c) in f.terms() {
        if parity_sign(s.bits & x.bits) > 0 {
            acc = acc + c.clone();
        } else {
            acc = acc + (-c.clone());
        }
    }
    Ok(acc)
}

/// Scalars the normalized transform can divide by `2^N`.
pub trait WalshScalar: Clone + Add<Output = Self> + Sub<Output = Self> {
    /// `self / 2^n`.
    fn div_pow2(self, n: u32) -> Self;
}

impl WalshScalar for f64 {
    fn div_pow2(self, n: u32) -> Self {
        self * libm::exp2(-(n as f64))
    }
}

impl WalshScalar for ExactRational {
    fn div_pow2(self, n: u32) -> Self {
        self / ExactRational::from_integer(BigInt::one() << n as usize)
    }
}

/// Unnormalized in-place Walsh-Hadamard butterfly:
/// `data[S] ← Σ_x data[x] (-1)^{|S ∩ x|}`. `data.len()` must be a power of
/// two; this is not checked beyond a debug assertion.
pub fn fwht_in_place<T>(data: &mut [T])
where
    T: Clone + Add<Output = T> + Sub<Output = T>,
{
    debug_assert!(data.len().is_power_of_two());
    let len = data.len();
    let mut half = 1;
    while half < len {
        for block in (0..len).step_by(2 * half) {
            for i in block..block + half {
                let a = data[i].clone();
                let b = data[i + half].clone();
                data[i] = a.clone() + b.clone();
                data[i + half] = a - b;
            }
        }
        half *= 2;
    }
}

fn transform_dimension(len: usize) -> Result<u32> {
    if len == 0 || !len.is_power_of_two() {
        return Err(Error::domain(alloc::format!(
            "transform length {len} is not a power of two"
        )));
    }
    let n = len.trailing_zeros();
    if n as usize > MAX_TRANSFORM_DIMENSION {
        return Err(Error::guard("transform dimension", n, MAX_TRANSFORM_DIMENSION));
    }
    Ok(n)
}

/// Fourier-Walsh coefficients `f̂(S) = 2^{-N} Σ_x f(x) χ_S(x)` of the
/// function whose value at the point with bit pattern `x` is `values[x]`.
pub fn walsh_transform<T: WalshScalar>(values: &[T]) -> Result<Vec<T>> {
    let n = transform_dimension(values.len())?;
    let mut data = values.to_vec();
    fwht_in_place(&mut data);
    Ok(data.into_iter().map(|v| v.div_pow2(n)).collect())
}

/// Values `f(x) = Σ_S f̂(S) χ_S(x)` from the full coefficient table.
pub fn inverse_walsh_transform<T: WalshScalar>(coeffs: &[T]) -> Result<Vec<T>> {
    transform_dimension(coeffs.len())?;
    let mut data = coeffs.to_vec();
    fwht_in_place(&mut data);
    Ok(data)
}

/// Dense coefficient table of `f` indexed by mask (for `N ≤ 24`).
pub fn dense_coefficients<T: Clone + Zero>(f: &WalshPolynomial<T>) -> Result<Vec<T>> {
    let n = f.dim();
    if n > MAX_TRANSFORM_DIMENSION {
        return Err(Error::guard("transform dimension", n, MAX_TRANSFORM_DIMENSION));
    }
    let mut table = alloc::vec![T::zero(); 1 << n];
    for (s, c) in f.terms() {
        table[s.bits as usize] = c.clone();
    }
    Ok(table)
}

/// One step of a Gray-code walk over the cube.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GrayStep {
    pub point: CubePoint,
    /// 0-based coordinate flipped to reach `point`; `None` for the start.
    pub flipped: Option<usize>,
}

/// Reflected binary Gray code over the low `free` coordinates of the cube,
/// with the remaining high coordinates held at a fixed prefix.
///
/// `GrayCode::new(n)` walks the whole cube starting at the all `+1` point.
/// Splitting the cube into `2^k` blocks with [`GrayCode::block`] gives
/// independent walks whose union is the cube.
#[derive(Debug, Clone)]
pub struct GrayCode {
    n: usize,
    free: usize,
    next: u64,
    current: u128,
}

impl GrayCode {
    pub fn new(n: usize) -> Result<Self> {
        Self::block(n, 0, 0)
    }

    /// Walk of the sub-cube whose top `split` coordinates equal the bits
    /// of `block`.
    pub fn block(n: usize, split: usize, block: u64) -> Result<Self> {
        check_dimension(n)?;
        if n > MAX_ENUMERATION_DIMENSION {
            return Err(Error::guard("N", n, MAX_ENUMERATION_DIMENSION));
        }
        if split > n || (split < 64 && block >> split != 0) {
            return Err(Error::domain("block index outside the split"));
        }
        let free = n - split;
        let prefix = (block as u128) << free;
        Ok(GrayCode {
            n,
            free,
            next: 0,
            current: prefix,
        })
    }

    /// Number of points the walk visits.
    pub fn len(&self) -> u64 {
        1u64 << self.free
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl Iterator for GrayCode {
    type Item = GrayStep;

    fn next(&mut self) -> Option<GrayStep> {
        if self.next >= 1u64 << self.free {
            return None;
        }
        let flipped = if self.next == 0 {
            None
        } else {
            let bit = self.next.trailing_zeros() as usize;
            self.current ^= 1 << bit;
            Some(bit)
        };
        self.next += 1;
        Some(GrayStep {
            point: CubePoint {
                bits: self.current,
                n: self.n,
            },
            flipped,
        })
    }
}
