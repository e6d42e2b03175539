//! Young diagrams: Frobenius coordinates, contents, hooks, dimensions,
//! enumeration and the two embeddings (into configurations on the
//! half-integer lattice and into the Thoma simplex).

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Largest `n` accepted by [`enumerate_partitions`].
pub const DEFAULT_ENUMERATION_CAP: usize = 60;

/// An integer partition, stored as its weakly decreasing positive parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a partition from parts; trailing zeros are dropped.
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Malformed(format!("parts {parts:?} are not weakly decreasing")));
        }
        if parts.contains(&0) {
            return Err(Error::Malformed("zero part before a positive part".into()));
        }
        Ok(Self { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Number of boxes `|λ|`.
    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of nonzero rows.
    pub fn length(&self) -> usize {
        self.parts.len()
    }

    /// Row length `λ_i` with 1-based `i`; zero past the last row.
    pub fn row(&self, i: usize) -> usize {
        if i == 0 {
            return 0;
        }
        self.parts.get(i - 1).copied().unwrap_or(0)
    }

    /// Column length `λ'_j` with 1-based `j`.
    pub fn column(&self, j: usize) -> usize {
        if j == 0 {
            return 0;
        }
        self.parts.iter().take_while(|&&r| r >= j).count()
    }

    pub fn contains(&self, b: Box) -> bool {
        b.row >= 1 && b.col >= 1 && self.row(b.row) >= b.col
    }

    /// Boxes in row-major order.
    pub fn boxes(&self) -> impl Iterator<Item = Box> + '_ {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(i, &len)| (1..=len).map(move |j| Box { row: i + 1, col: j }))
    }

    /// Number of diagonal boxes `d(λ)`.
    pub fn diagonal(&self) -> usize {
        self.parts.iter().enumerate().take_while(|(i, &r)| r > *i).count()
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;
    fn try_from(parts: Vec<usize>) -> Result<Self> {
        Self::new(parts)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "()");
        }
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// A cell of a Young diagram, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Box {
    pub row: usize,
    pub col: usize,
}

impl Box {
    pub fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }
}

/// Frobenius coordinates `(p_1, …, p_d | q_1, …, q_d)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FrobeniusCoords {
    p: Vec<usize>,
    q: Vec<usize>,
}

impl FrobeniusCoords {
    pub fn new(p: Vec<usize>, q: Vec<usize>) -> Result<Self> {
        if p.len() != q.len() {
            return Err(Error::InvalidFrobenius(format!(
                "arm and leg sequences differ in length ({} vs {})",
                p.len(),
                q.len()
            )));
        }
        for (name, seq) in [("p", &p), ("q", &q)] {
            if seq.windows(2).any(|w| w[0] <= w[1]) {
                return Err(Error::InvalidFrobenius(format!("{name} = {seq:?} is not strictly decreasing")));
            }
        }
        Ok(Self { p, q })
    }

    pub fn p(&self) -> &[usize] {
        &self.p
    }

    pub fn q(&self) -> &[usize] {
        &self.q
    }

    pub fn d(&self) -> usize {
        self.p.len()
    }

    /// `Σ (p_i + q_i + 1)`, the size of the diagram.
    pub fn size(&self) -> usize {
        self.p.iter().zip(&self.q).map(|(p, q)| p + q + 1).sum()
    }

    pub fn transpose(&self) -> Self {
        Self { p: self.q.clone(), q: self.p.clone() }
    }
}

pub fn frobenius(lambda: &Partition) -> FrobeniusCoords {
    let d = lambda.diagonal();
    let p = (1..=d).map(|i| lambda.row(i) - i).collect();
    let q = (1..=d).map(|i| lambda.column(i) - i).collect();
    FrobeniusCoords { p, q }
}

pub fn from_frobenius(f: &FrobeniusCoords) -> Result<Partition> {
    // Re-validate: the fields may come from deserialization.
    let f = FrobeniusCoords::new(f.p.clone(), f.q.clone())?;
    let d = f.d();
    if d == 0 {
        return Ok(Partition::empty());
    }
    // Rows 1..=d are p_i + i; rows below the diagonal square are read off the legs.
    let mut parts: Vec<usize> = (0..d).map(|i| f.p[i] + i + 1).collect();
    let rows = f.q[0] + 1;
    for i in d + 1..=rows {
        // Row i (> d) has as many boxes as there are legs reaching it.
        let len = f.q.iter().enumerate().filter(|(j, &q)| q + j + 1 >= i).count();
        parts.push(len);
    }
    Partition::new(parts).map_err(|e| Error::InvalidFrobenius(e.to_string()))
}

pub fn transpose(lambda: &Partition) -> Partition {
    let cols = lambda.row(1);
    Partition { parts: (1..=cols).map(|j| lambda.column(j)).collect() }
}

/// Content `c(b) = j − i`.
pub fn content(lambda: &Partition, b: Box) -> Result<i64> {
    if !lambda.contains(b) {
        return Err(Error::BoxOutsideDiagram { row: b.row, col: b.col });
    }
    Ok(b.col as i64 - b.row as i64)
}

/// Hook length `h(b) = (λ_i − j) + (λ'_j − i) + 1`.
pub fn hook(lambda: &Partition, b: Box) -> Result<usize> {
    if !lambda.contains(b) {
        return Err(Error::BoxOutsideDiagram { row: b.row, col: b.col });
    }
    Ok(hook_unchecked(lambda, b))
}

pub(crate) fn hook_unchecked(lambda: &Partition, b: Box) -> usize {
    (lambda.row(b.row) - b.col) + (lambda.column(b.col) - b.row) + 1
}

/// All `(content, hook)` pairs, row-major. Column lengths are computed once.
pub(crate) fn contents_and_hooks(lambda: &Partition) -> Vec<(i64, usize)> {
    let cols: Vec<usize> = (1..=lambda.row(1)).map(|j| lambda.column(j)).collect();
    let mut out = Vec::with_capacity(lambda.size());
    for (i0, &len) in lambda.parts.iter().enumerate() {
        for j0 in 0..len {
            let h = (len - j0 - 1) + (cols[j0] - i0 - 1) + 1;
            out.push((j0 as i64 - i0 as i64, h));
        }
    }
    out
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n as u64).fold(BigUint::one(), |acc, k| acc * k)
}

/// Number of standard Young tableaux of shape `λ`, by the hook formula.
pub fn dim(lambda: &Partition) -> BigUint {
    let hooks = contents_and_hooks(lambda)
        .into_iter()
        .fold(BigUint::one(), |acc, (_, h)| acc * h as u64);
    factorial(lambda.size()) / hooks
}

/// `ln dim λ`, for large-scale floating work where exact dims are wasteful.
pub fn log_dim(lambda: &Partition) -> f64 {
    let n = lambda.size();
    let log_fact: f64 = (2..=n).map(|k| (k as f64).ln()).sum();
    let log_hooks: f64 = contents_and_hooks(lambda).into_iter().map(|(_, h)| (h as f64).ln()).sum();
    log_fact - log_hooks
}

/// Iterator over the partitions of `n` in reverse lexicographic order,
/// starting from `(n)` and ending at `(1^n)`.
#[derive(Debug, Clone)]
pub struct PartitionsOf {
    current: Option<Vec<usize>>,
}

impl PartitionsOf {
    pub fn new(n: usize) -> Self {
        let first = if n == 0 { Vec::new() } else { vec![n] };
        Self { current: Some(first) }
    }
}

impl Iterator for PartitionsOf {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        let cur = self.current.take()?;
        // Successor: strip trailing ones, decrement the last part > 1 and
        // refill greedily with copies of the new value.
        let mut next = cur.clone();
        let mut ones = 0;
        while next.last() == Some(&1) {
            next.pop();
            ones += 1;
        }
        if let Some(last) = next.last_mut() {
            *last -= 1;
            let m = *last;
            let mut rest = ones + 1;
            while rest > 0 {
                let take = rest.min(m);
                next.push(take);
                rest -= take;
            }
            self.current = Some(next);
        }
        Some(Partition { parts: cur })
    }
}

/// All partitions of `n` in reverse lexicographic order.
pub fn enumerate_partitions(n: usize) -> Result<Vec<Partition>> {
    enumerate_partitions_capped(n, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_partitions_capped(n: usize, cap: usize) -> Result<Vec<Partition>> {
    if n > cap {
        return Err(Error::CapExceeded { requested: n, cap });
    }
    Ok(PartitionsOf::new(n).collect())
}

/// Partitions of `n` with at most `rows` nonzero parts, reverse lexicographic.
pub fn partitions_with_at_most_rows(n: usize, rows: usize) -> Vec<Partition> {
    fn rec(n: usize, max_part: usize, rows: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if n == 0 {
            out.push(Partition { parts: prefix.clone() });
            return;
        }
        if rows == 0 {
            return;
        }
        for part in (1..=max_part.min(n)).rev() {
            // Remaining rows must be able to absorb what is left.
            if part * rows < n {
                break;
            }
            prefix.push(part);
            rec(n - part, part, rows - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, rows, &mut Vec::new(), &mut out);
    out
}

/// A point of `ℤ' = ℤ + 1/2`, stored as the odd integer `2x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HalfInt(i64);

impl HalfInt {
    /// The half-integer `twice / 2`; `twice` must be odd.
    pub fn from_twice(twice: i64) -> Result<Self> {
        if twice % 2 == 0 {
            return Err(Error::Malformed(format!("{twice}/2 is not a half-integer")));
        }
        Ok(Self(twice))
    }

    /// `k + 1/2` for `k ≥ 0`.
    pub fn positive(k: usize) -> Self {
        Self(2 * k as i64 + 1)
    }

    /// `−k − 1/2` for `k ≥ 0`.
    pub fn negative(k: usize) -> Self {
        Self(-(2 * k as i64) - 1)
    }

    pub fn twice(self) -> i64 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    /// The index `k ∈ ℤ_+` under `±(k + 1/2) ↔ k`.
    pub fn index(self) -> usize {
        ((self.0.abs() - 1) / 2) as usize
    }

    pub fn try_from_f64(x: f64) -> Result<Self> {
        let twice = 2.0 * x;
        let r = twice.round();
        if (twice - r).abs() > 1e-9 || (r as i64) % 2 == 0 {
            return Err(Error::OutsidePhaseSpace(x));
        }
        Ok(Self(r as i64))
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2", self.0)
    }
}

/// The phase spaces the kernels live on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PhaseSpace {
    /// Half-integers `ℤ + 1/2`.
    ZPrime,
    /// Positive half-integers.
    ZPrimePlus,
    /// Nonnegative integers.
    ZPlus,
    Z,
    R,
    /// Positive reals.
    RPlus,
    /// The punctured line `ℝ \ {0}`.
    RStar,
}

impl PhaseSpace {
    pub fn contains(self, x: f64) -> bool {
        if !x.is_finite() {
            return false;
        }
        let is_int = (x - x.round()).abs() < 1e-9;
        let is_half = HalfInt::try_from_f64(x).is_ok();
        match self {
            PhaseSpace::ZPrime => is_half,
            PhaseSpace::ZPrimePlus => is_half && x > 0.0,
            PhaseSpace::ZPlus => is_int && x > -0.5,
            PhaseSpace::Z => is_int,
            PhaseSpace::R => true,
            PhaseSpace::RPlus => x > 0.0,
            PhaseSpace::RStar => x != 0.0,
        }
    }

    pub fn is_discrete(self) -> bool {
        matches!(self, PhaseSpace::ZPrime | PhaseSpace::ZPrimePlus | PhaseSpace::ZPlus | PhaseSpace::Z)
    }
}

/// A finite point configuration in a phase space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointConfiguration {
    pub space: PhaseSpace,
    pub points: Vec<f64>,
}

impl PointConfiguration {
    pub fn new(space: PhaseSpace, points: Vec<f64>) -> Result<Self> {
        if let Some(&x) = points.iter().find(|&&x| !space.contains(x)) {
            return Err(Error::OutsidePhaseSpace(x));
        }
        Ok(Self { space, points })
    }

    pub fn from_half_integers(points: &[HalfInt]) -> Self {
        Self { space: PhaseSpace::ZPrime, points: points.iter().map(|h| h.value()).collect() }
    }

    /// The points as half-integers; fails outside `ℤ'`.
    pub fn half_integers(&self) -> Result<Vec<HalfInt>> {
        self.points.iter().map(|&x| HalfInt::try_from_f64(x)).collect()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Equal numbers of positive and negative points.
    pub fn is_balanced(&self) -> bool {
        let pos = self.points.iter().filter(|&&x| x > 0.0).count();
        2 * pos == self.points.len()
    }
}

/// `λ ↦ {p_i + 1/2} ∪ {−q_i − 1/2}`, sorted in decreasing order.
pub fn embed_config(lambda: &Partition) -> PointConfiguration {
    PointConfiguration::from_half_integers(&embed_half_integers(lambda))
}

pub fn embed_half_integers(lambda: &Partition) -> Vec<HalfInt> {
    let f = frobenius(lambda);
    let mut pts: Vec<HalfInt> = f.p.iter().map(|&p| HalfInt::positive(p)).collect();
    pts.extend(f.q.iter().rev().map(|&q| HalfInt::negative(q)));
    pts
}

/// A point `(α, β)` of the Thoma simplex; only the nonzero prefix is stored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimplexPoint {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
}

impl SimplexPoint {
    pub fn mass(&self) -> f64 {
        self.alpha.iter().chain(&self.beta).sum()
    }
}

/// `α_i = (p_i + 1/2)/n`, `β_i = (q_i + 1/2)/n`.
pub fn embed_simplex(lambda: &Partition, n: usize) -> Result<SimplexPoint> {
    if n == 0 {
        return Err(Error::InvalidParameter("simplex embedding requires n > 0".into()));
    }
    if lambda.size() != n {
        return Err(Error::SizeMismatch { expected: n, actual: lambda.size() });
    }
    let f = frobenius(lambda);
    let scale = |v: &[usize]| v.iter().map(|&c| (c as f64 + 0.5) / n as f64).collect();
    Ok(SimplexPoint { alpha: scale(&f.p), beta: scale(&f.q) })
}
