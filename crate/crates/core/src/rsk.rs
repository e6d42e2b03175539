//! Robinson–Schensted–Knuth correspondences for nonnegative integer
//! matrices, words and permutations, all running through one row-insertion
//! core on lexicographically ordered two-line arrays.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::partitions::{
    contents_and_hooks, dim, enumerate_partitions_capped, factorial, Partition,
    DEFAULT_ENUMERATION_CAP,
};
use crate::{Error, Rational, Result};

/// A `k × l` matrix of nonnegative integers (an element of `B^n_{k,l}`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NonNegMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
}

impl NonNegMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<u64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Malformed("matrix must have at least one row and column".into()));
        }
        if entries.len() != rows * cols {
            return Err(Error::SizeMismatch { expected: rows * cols, actual: entries.len() });
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn from_rows(rows: &[Vec<u64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Malformed("ragged matrix rows".into()));
        }
        Self::new(r, c, rows.concat())
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        Self::new(rows, cols, vec![0; rows * cols])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Entry at 1-based `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[(i - 1) * self.cols + (j - 1)]
    }

    fn get_mut(&mut self, i: usize, j: usize) -> &mut u64 {
        &mut self.entries[(i - 1) * self.cols + (j - 1)]
    }

    /// Total entry sum `n`.
    pub fn total(&self) -> u64 {
        self.entries.iter().sum()
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        self.entries.chunks(self.cols).map(<[u64]>::to_vec).collect()
    }

    /// The two-line array: each `(i, j)` repeated `a_ij` times, lexicographic.
    pub fn two_line_array(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.total() as usize);
        for i in 1..=self.rows {
            for j in 1..=self.cols {
                for _ in 0..self.get(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

/// A word of length `n` over `{1, …, k}` (an element of `B^n_{k,∞}`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word {
    alphabet: usize,
    letters: Vec<usize>,
}

impl Word {
    pub fn new(alphabet: usize, letters: Vec<usize>) -> Result<Self> {
        if alphabet == 0 {
            return Err(Error::InvalidParameter("alphabet size must be positive".into()));
        }
        if let Some(&bad) = letters.iter().find(|&&c| c == 0 || c > alphabet) {
            return Err(Error::Malformed(format!("letter {bad} outside 1..={alphabet}")));
        }
        Ok(Self { alphabet, letters })
    }

    /// Alphabet taken as the largest letter present.
    pub fn from_letters(letters: Vec<usize>) -> Result<Self> {
        let k = letters.iter().copied().max().unwrap_or(1);
        Self::new(k, letters)
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// The `n × k` matrix with a single 1 per row at `(position, letter)`.
    pub fn to_matrix(&self) -> Result<NonNegMatrix> {
        let mut m = NonNegMatrix::zeros(self.len().max(1), self.alphabet)?;
        for (pos, &c) in self.letters.iter().enumerate() {
            *m.get_mut(pos + 1, c) = 1;
        }
        Ok(m)
    }
}

/// A permutation of `{1, …, n}` given by its images.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            if v == 0 || v > n || seen[v - 1] {
                return Err(Error::Malformed(format!("{images:?} is not a permutation of 1..={n}")));
            }
            seen[v - 1] = true;
        }
        Ok(Self { images })
    }

    pub fn identity(n: usize) -> Self {
        Self { images: (1..=n).collect() }
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn to_matrix(&self) -> Result<NonNegMatrix> {
        let n = self.len().max(1);
        let mut m = NonNegMatrix::zeros(n, n)?;
        for (i, &v) in self.images.iter().enumerate() {
            *m.get_mut(i + 1, v) = 1;
        }
        Ok(m)
    }

    /// All permutations of `{1..n}` in lexicographic order.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut cur: Vec<usize> = (1..=n).collect();
        let mut out = vec![Permutation { images: cur.clone() }];
        // Standard next-permutation step.
        loop {
            let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else { break };
            let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
            cur.swap(i - 1, j);
            cur[i..].reverse();
            out.push(Permutation { images: cur.clone() });
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TableauKind {
    Semistandard,
    Standard,
}

/// A Young tableau with entries in `{1, …, alphabet}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Tableau {
    kind: TableauKind,
    alphabet: usize,
    rows: Vec<Vec<usize>>,
}

impl Tableau {
    /// Validates row/column monotonicity for the declared kind.
    pub fn new(kind: TableauKind, alphabet: usize, rows: Vec<Vec<usize>>) -> Result<Self> {
        let t = Self { kind, alphabet, rows };
        t.validate()?;
        Ok(t)
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::Malformed(format!("tableau {:?}: {msg}", self.rows)));
        self.shape().map_err(|_| Error::Malformed("rows are not weakly decreasing in length".into()))?;
        for row in &self.rows {
            if row.is_empty() {
                return bad("empty row");
            }
            if row.iter().any(|&e| e == 0 || e > self.alphabet) {
                return bad("entry outside the alphabet");
            }
            let ok = match self.kind {
                TableauKind::Semistandard => row.windows(2).all(|w| w[0] <= w[1]),
                TableauKind::Standard => row.windows(2).all(|w| w[0] < w[1]),
            };
            if !ok {
                return bad("row not increasing");
            }
        }
        for pair in self.rows.windows(2) {
            if pair[1].iter().zip(&pair[0]).any(|(below, above)| below <= above) {
                return bad("column not strictly increasing");
            }
        }
        if self.kind == TableauKind::Standard {
            let n = self.size();
            if self.alphabet != n {
                return bad("standard tableau alphabet must equal its size");
            }
            let mut seen = vec![false; n];
            for &e in self.rows.iter().flatten() {
                if seen[e - 1] {
                    return bad("repeated entry in standard tableau");
                }
                seen[e - 1] = true;
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> TableauKind {
        self.kind
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn size(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn shape(&self) -> Result<Partition> {
        Partition::new(self.rows.iter().map(Vec::len).collect())
    }
}

impl fmt::Display for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            write!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// The RSK output: insertion tableau `P` and recording tableau `Q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TableauPair {
    pub p: Tableau,
    pub q: Tableau,
}

impl TableauPair {
    pub fn new(p: Tableau, q: Tableau) -> Result<Self> {
        if p.shape()? != q.shape()? {
            return Err(Error::Malformed("P and Q have different shapes".into()));
        }
        Ok(Self { p, q })
    }

    pub fn shape(&self) -> Partition {
        self.p.shape().expect("validated on construction")
    }
}

/// Row-inserts `value`, returning the row index where the tableau grew.
fn row_insert(rows: &mut Vec<Vec<usize>>, mut value: usize) -> usize {
    for (r, row) in rows.iter_mut().enumerate() {
        // Bump the leftmost entry strictly greater than `value`.
        let pos = row.partition_point(|&e| e <= value);
        if pos == row.len() {
            row.push(value);
            return r;
        }
        value = std::mem::replace(&mut row[pos], value);
    }
    rows.push(vec![value]);
    rows.len() - 1
}

/// Insertion core over a lexicographically ordered two-line array.
fn insert_two_line(pairs: &[(usize, usize)]) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
    let mut p: Vec<Vec<usize>> = Vec::new();
    let mut q: Vec<Vec<usize>> = Vec::new();
    for &(i, j) in pairs {
        let r = row_insert(&mut p, j);
        if r == q.len() {
            q.push(Vec::new());
        }
        q[r].push(i);
    }
    (p, q)
}

/// Inverse of the insertion core: recovers the two-line array.
fn extract_two_line(pair: &TableauPair) -> Vec<(usize, usize)> {
    let mut p = pair.p.rows.clone();
    let mut q = pair.q.rows.clone();
    let n = pair.p.size();
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        // The largest recording entry; among ties the rightmost one, which is
        // always a corner of a semistandard tableau.
        let mut best: Option<(usize, usize, usize)> = None; // (value, col, row)
        for (r, row) in q.iter().enumerate() {
            let last = row.len() - 1;
            let cand = (row[last], last, r);
            if best.is_none_or(|b| (cand.0, cand.1) > (b.0, b.1)) {
                best = Some(cand);
            }
        }
        let (i, _, r) = best.expect("nonempty tableau");
        q[r].pop();
        let mut value = p[r].pop().expect("shapes agree");
        if q[r].is_empty() {
            q.pop();
            p.pop();
        }
        for row in p[..r].iter_mut().rev() {
            // Reverse bump: the rightmost entry strictly smaller than `value`.
            let pos = row.partition_point(|&e| e < value) - 1;
            value = std::mem::replace(&mut row[pos], value);
        }
        out.push((i, value));
    }
    out.reverse();
    out
}

pub fn rsk_matrix(a: &NonNegMatrix) -> TableauPair {
    let (p, q) = insert_two_line(&a.two_line_array());
    TableauPair {
        p: Tableau { kind: TableauKind::Semistandard, alphabet: a.cols, rows: p },
        q: Tableau { kind: TableauKind::Semistandard, alphabet: a.rows, rows: q },
    }
}

/// Rebuilds the `Q.alphabet × P.alphabet` matrix from a semistandard pair.
pub fn rsk_matrix_inverse(pair: &TableauPair) -> Result<NonNegMatrix> {
    // Re-validate: the pair may have been deserialized.
    let pair = TableauPair::new(
        Tableau::new(TableauKind::Semistandard, pair.p.alphabet, pair.p.rows.clone())?,
        Tableau::new(TableauKind::Semistandard, pair.q.alphabet, pair.q.rows.clone())?,
    )?;
    let mut m = NonNegMatrix::zeros(pair.q.alphabet, pair.p.alphabet)?;
    for (i, j) in extract_two_line(&pair) {
        *m.get_mut(i, j) += 1;
    }
    Ok(m)
}

/// RSK of a word: `P` semistandard over the alphabet, `Q` standard.
pub fn rsk_word(w: &Word) -> TableauPair {
    let pairs: Vec<(usize, usize)> = w.letters.iter().enumerate().map(|(i, &c)| (i + 1, c)).collect();
    let (p, q) = insert_two_line(&pairs);
    TableauPair {
        p: Tableau { kind: TableauKind::Semistandard, alphabet: w.alphabet, rows: p },
        q: Tableau { kind: TableauKind::Standard, alphabet: w.len(), rows: q },
    }
}

pub fn rsk_word_inverse(pair: &TableauPair) -> Result<Word> {
    let p = Tableau::new(TableauKind::Semistandard, pair.p.alphabet, pair.p.rows.clone())?;
    let q = Tableau::new(TableauKind::Standard, pair.q.size(), pair.q.rows.clone())?;
    let pair = TableauPair::new(p, q)?;
    let letters = extract_two_line(&pair).into_iter().map(|(_, c)| c).collect();
    Word::new(pair.p.alphabet, letters)
}

/// RSK of a permutation: both tableaux standard.
pub fn rsk_permutation(sigma: &Permutation) -> TableauPair {
    let pairs: Vec<(usize, usize)> =
        sigma.images.iter().enumerate().map(|(i, &v)| (i + 1, v)).collect();
    let (p, q) = insert_two_line(&pairs);
    let n = sigma.len();
    TableauPair {
        p: Tableau { kind: TableauKind::Standard, alphabet: n, rows: p },
        q: Tableau { kind: TableauKind::Standard, alphabet: n, rows: q },
    }
}

pub fn rsk_permutation_inverse(pair: &TableauPair) -> Result<Permutation> {
    let n = pair.p.size();
    let p = Tableau::new(TableauKind::Standard, n, pair.p.rows.clone())?;
    let q = Tableau::new(TableauKind::Standard, n, pair.q.rows.clone())?;
    let pair = TableauPair::new(p, q)?;
    Permutation::new(extract_two_line(&pair).into_iter().map(|(_, v)| v).collect())
}

/// Shape only, by row insertion without a recording tableau.
pub fn rsk_shape(values: impl IntoIterator<Item = usize>) -> Partition {
    let mut rows: Vec<Vec<usize>> = Vec::new();
    for v in values {
        row_insert(&mut rows, v);
    }
    Partition::new(rows.iter().map(Vec::len).collect()).expect("insertion keeps the shape valid")
}

/// Length of the longest weakly increasing subsequence, by patience sorting.
pub fn lis(values: &[usize]) -> Result<usize> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut tops: Vec<usize> = Vec::new();
    for &v in values {
        let pos = tops.partition_point(|&t| t <= v);
        if pos == tops.len() {
            tops.push(v);
        } else {
            tops[pos] = v;
        }
    }
    Ok(tops.len())
}

pub fn lis_word(w: &Word) -> Result<usize> {
    lis(&w.letters)
}

pub fn lis_permutation(sigma: &Permutation) -> Result<usize> {
    lis(&sigma.images)
}

/// Longest chain of two-line-array pairs weakly increasing in both entries.
pub fn lis_matrix(a: &NonNegMatrix) -> Result<usize> {
    let js: Vec<usize> = a.two_line_array().into_iter().map(|(_, j)| j).collect();
    lis(&js)
}

/// Number of semistandard tableaux of shape `λ` over `{1..k}`: `Π (c(b)+k)/h(b)`.
pub fn count_ssyt(lambda: &Partition, k: usize) -> BigUint {
    if lambda.length() > k {
        return BigUint::zero();
    }
    let (num, den) = contents_and_hooks(lambda).into_iter().fold(
        (BigUint::one(), BigUint::one()),
        |(num, den), (c, h)| (num * (c + k as i64) as u64, den * h as u64),
    );
    num / den
}

/// `|B^n_{k,l}| = C(kl + n − 1, n)`, the number of `k × l` matrices with sum `n`.
pub fn matrix_count(k: usize, l: usize, n: usize) -> BigUint {
    binomial(BigUint::from(k * l + n) - 1u32, BigUint::from(n))
}

/// Every `k × l` nonnegative matrix with entry sum `n`, lexicographic in the entries.
pub fn enumerate_matrices(k: usize, l: usize, n: usize) -> Result<Vec<NonNegMatrix>> {
    let cells = k * l;
    if cells == 0 {
        return Err(Error::InvalidParameter("matrix dimensions must be positive".into()));
    }
    let mut out = Vec::new();
    let mut entries = vec![0u64; cells];
    fn rec(idx: usize, left: u64, entries: &mut [u64], k: usize, l: usize, out: &mut Vec<NonNegMatrix>) {
        if idx + 1 == entries.len() {
            entries[idx] = left;
            out.push(NonNegMatrix { rows: k, cols: l, entries: entries.to_vec() });
            return;
        }
        for v in (0..=left).rev() {
            entries[idx] = v;
            rec(idx + 1, left - v, entries, k, l, out);
        }
    }
    rec(0, n as u64, &mut entries, k, l, &mut out);
    Ok(out)
}

/// Which uniform measure is pushed forward through RSK.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ShapeSource {
    /// Uniform on `k × l` matrices with sum `n`.
    Matrix { k: usize, l: usize },
    /// Uniform on words of length `n` over `k` letters.
    Word { k: usize },
    /// Uniform on `S_n`.
    Permutation,
}

/// Exact RSK pushforward of the uniform measure onto shapes of size `n`,
/// listed in the canonical partition order (zero-mass shapes included).
pub fn pushforward_shape_distribution(source: ShapeSource, n: usize) -> Result<Vec<(Partition, Rational)>> {
    let shapes = enumerate_partitions_capped(n, DEFAULT_ENUMERATION_CAP)?;
    let total: BigUint = match source {
        ShapeSource::Matrix { k, l } => {
            check_positive(k, l)?;
            matrix_count(k, l, n)
        }
        ShapeSource::Word { k } => {
            check_positive(k, 1)?;
            num_traits::pow(BigUint::from(k), n)
        }
        ShapeSource::Permutation => factorial(n),
    };
    let den = BigInt::from(total);
    Ok(shapes
        .into_iter()
        .map(|lambda| {
            let count = match source {
                ShapeSource::Matrix { k, l } => count_ssyt(&lambda, k) * count_ssyt(&lambda, l),
                ShapeSource::Word { k } => count_ssyt(&lambda, k) * dim(&lambda),
                ShapeSource::Permutation => {
                    let d = dim(&lambda);
                    &d * &d
                }
            };
            let prob = Rational::new(BigInt::from(count), den.clone());
            (lambda, prob)
        })
        .collect())
}

fn check_positive(k: usize, l: usize) -> Result<()> {
    if k == 0 || l == 0 {
        return Err(Error::InvalidParameter("alphabet sizes must be positive".into()));
    }
    Ok(())
}

/// The same distribution obtained by running RSK over every element of the
/// finite set; the exhaustive oracle for [`pushforward_shape_distribution`].
pub fn shape_distribution_by_enumeration(source: ShapeSource, n: usize) -> Result<BTreeMap<Partition, Rational>> {
    let mut counts: BTreeMap<Partition, u64> = BTreeMap::new();
    let mut total = 0u64;
    let mut tally = |shape: Partition| {
        *counts.entry(shape).or_default() += 1;
        total += 1;
    };
    match source {
        ShapeSource::Matrix { k, l } => {
            for a in enumerate_matrices(k, l, n)? {
                tally(rsk_matrix(&a).shape());
            }
        }
        ShapeSource::Word { k } => {
            check_positive(k, 1)?;
            let count = (k as u64).pow(n as u32);
            for code in 0..count {
                let mut c = code;
                let letters = (0..n)
                    .map(|_| {
                        let d = (c % k as u64) as usize + 1;
                        c /= k as u64;
                        d
                    })
                    .collect();
                tally(rsk_word(&Word::new(k, letters)?).shape());
            }
        }
        ShapeSource::Permutation => {
            for s in Permutation::all(n) {
                tally(rsk_permutation(&s).shape());
            }
        }
    }
    Ok(counts
        .into_iter()
        .map(|(shape, c)| (shape, Rational::new(c.into(), total.into())))
        .collect())
}

/// Converts a small exact count to `u64` where callers need it.
pub fn to_u64(x: &BigUint) -> Option<u64> {
    x.to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::{enumerate_partitions, Box as Cell};
    use std::collections::HashSet;

    fn part(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    /// Brute-force longest weakly increasing subsequence over all subsets.
    fn lis_brute(v: &[usize]) -> usize {
        let n = v.len();
        (1u32..(1 << n))
            .filter_map(|mask| {
                let sub: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| v[i]).collect();
                sub.windows(2).all(|w| w[0] <= w[1]).then_some(sub.len())
            })
            .max()
            .unwrap_or(0)
    }

    /// Exhaustive SSYT count by filling cells in row-major order.
    fn ssyt_brute(lambda: &Partition, k: usize) -> u64 {
        let cells: Vec<Cell> = lambda.boxes().collect();
        fn rec(idx: usize, cells: &[Cell], fill: &mut Vec<Vec<usize>>, k: usize) -> u64 {
            if idx == cells.len() {
                return 1;
            }
            let Cell { row, col } = cells[idx];
            let left = if col > 1 { fill[row - 1][col - 2] } else { 1 };
            let above = if row > 1 { fill[row - 2][col - 1] + 1 } else { 1 };
            let lo = left.max(above);
            let mut total = 0;
            for v in lo..=k {
                fill[row - 1][col - 1] = v;
                total += rec(idx + 1, cells, fill, k);
            }
            total
        }
        let mut fill: Vec<Vec<usize>> = lambda.parts().iter().map(|&len| vec![0; len]).collect();
        rec(0, &cells, &mut fill, k)
    }

    #[test]
    fn rsk_matrix_examples() {
        let one = NonNegMatrix::from_rows(&[vec![1]]).unwrap();
        let pair = rsk_matrix(&one);
        assert_eq!(pair.p.rows(), &[vec![1]]);
        assert_eq!(pair.q.rows(), &[vec![1]]);
        assert_eq!(rsk_matrix_inverse(&pair).unwrap(), one);

        let id = NonNegMatrix::from_rows(&[vec![1, 0], vec![0, 1]]).unwrap();
        let pair = rsk_matrix(&id);
        assert_eq!(pair.shape(), part(&[2]));
        assert_eq!(pair.p.rows(), &[vec![1, 2]]);
        assert_eq!(pair.q.rows(), &[vec![1, 2]]);
        assert_eq!(rsk_matrix_inverse(&pair).unwrap(), id);

        let anti = NonNegMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap();
        let pair = rsk_matrix(&anti);
        assert_eq!(pair.shape(), part(&[1, 1]));
        assert_eq!(rsk_matrix_inverse(&pair).unwrap(), anti);
    }

    #[test]
    fn rsk_word_and_permutation_examples() {
        let w = Word::new(1, vec![1]).unwrap();
        assert_eq!(rsk_word(&w).shape(), part(&[1]));
        assert_eq!(rsk_word(&Word::new(2, vec![2, 1]).unwrap()).shape(), part(&[1, 1]));
        assert_eq!(rsk_word(&Word::new(2, vec![1, 1]).unwrap()).shape(), part(&[2]));

        assert_eq!(rsk_permutation(&Permutation::identity(1)).shape(), part(&[1]));
        assert_eq!(rsk_permutation(&Permutation::new(vec![2, 1]).unwrap()).shape(), part(&[1, 1]));
        let s = Permutation::new(vec![3, 1, 2]).unwrap();
        let pair = rsk_permutation(&s);
        assert_eq!(pair.shape(), part(&[2, 1]));
        assert_eq!(pair.p.kind(), TableauKind::Standard);
        assert_eq!(rsk_permutation_inverse(&pair).unwrap(), s);
    }

    #[test]
    fn inverse_rejects_malformed_pairs() {
        let p = Tableau::new(TableauKind::Semistandard, 2, vec![vec![1, 2]]).unwrap();
        let q = Tableau::new(TableauKind::Semistandard, 2, vec![vec![1], vec![2]]).unwrap();
        assert!(TableauPair::new(p.clone(), q).is_err());
        assert!(Tableau::new(TableauKind::Semistandard, 2, vec![vec![2, 1]]).is_err());
        assert!(Tableau::new(TableauKind::Semistandard, 2, vec![vec![1, 1], vec![1]]).is_err());
        assert!(Tableau::new(TableauKind::Semistandard, 1, vec![vec![1, 2]]).is_err());
        assert!(Tableau::new(TableauKind::Standard, 2, vec![vec![1, 1]]).is_err());
        let forged = TableauPair {
            p: Tableau { kind: TableauKind::Semistandard, alphabet: 2, rows: vec![vec![2, 1]] },
            q: p.clone(),
        };
        assert!(rsk_matrix_inverse(&forged).is_err());
    }

    #[test]
    fn matrix_rsk_is_a_bijection_onto_ssyt_pairs() {
        for n in 0..=5 {
            let all = enumerate_matrices(2, 2, n).unwrap();
            assert_eq!(BigUint::from(all.len()), matrix_count(2, 2, n));
            let mut images = HashSet::new();
            for a in &all {
                let pair = rsk_matrix(a);
                assert_eq!(pair.shape().size(), n);
                assert!(pair.p.rows().iter().flatten().all(|&e| e <= 2));
                assert_eq!(rsk_matrix_inverse(&pair).unwrap(), *a);
                assert!(images.insert(pair));
            }
            // Image size equals the number of same-shape SSYT pairs.
            let pairs: BigUint = enumerate_partitions(n)
                .unwrap()
                .iter()
                .map(|l| count_ssyt(l, 2) * count_ssyt(l, 2))
                .sum();
            assert_eq!(BigUint::from(images.len()), pairs);
        }
    }

    #[test]
    fn word_rsk_roundtrip() {
        for n in 1..=5 {
            for code in 0..3u32.pow(n) {
                let mut c = code;
                let letters = (0..n).map(|_| { let d = (c % 3) as usize + 1; c /= 3; d }).collect();
                let w = Word::new(3, letters).unwrap();
                let pair = rsk_word(&w);
                assert_eq!(pair.q.kind(), TableauKind::Standard);
                assert_eq!(rsk_word_inverse(&pair).unwrap(), w);
            }
        }
    }

    #[test]
    fn lis_examples() {
        assert_eq!(lis_permutation(&Permutation::identity(9)).unwrap(), 9);
        assert_eq!(lis(&[3, 1, 2]).unwrap(), 2);
        assert_eq!(lis_brute(&[3, 1, 2]), 2);
        assert_eq!(lis(&[2, 2, 1, 2]).unwrap(), 3);
        assert_eq!(lis_brute(&[2, 2, 1, 2]), 3);
        assert_eq!(lis(&[]), Err(Error::EmptyInput));
    }

    #[test]
    fn schensted_on_small_inputs() {
        for n in 1..=6 {
            for s in Permutation::all(n) {
                let shape = rsk_permutation(&s).shape();
                assert_eq!(lis_permutation(&s).unwrap(), shape.row(1));
                assert_eq!(lis_brute(s.images()), shape.row(1));
            }
        }
        for code in 0..3u32.pow(5) {
            let mut c = code;
            let letters: Vec<usize> = (0..5).map(|_| { let d = (c % 3) as usize + 1; c /= 3; d }).collect();
            let w = Word::new(3, letters.clone()).unwrap();
            assert_eq!(lis_word(&w).unwrap(), rsk_word(&w).shape().row(1));
            assert_eq!(lis_brute(&letters), rsk_word(&w).shape().row(1));
        }
        for a in enumerate_matrices(2, 3, 4).unwrap() {
            assert_eq!(lis_matrix(&a).unwrap(), rsk_matrix(&a).shape().row(1));
        }
    }

    #[test]
    fn count_ssyt_examples() {
        assert_eq!(count_ssyt(&part(&[1]), 1), BigUint::from(1u32));
        assert_eq!(count_ssyt(&part(&[2, 1]), 2), BigUint::from(ssyt_brute(&part(&[2, 1]), 2)));
        assert_eq!(ssyt_brute(&part(&[2, 1]), 2), 2);
        assert_eq!(count_ssyt(&part(&[1, 1, 1]), 2), BigUint::zero());
    }

    #[test]
    fn count_ssyt_matches_brute_force() {
        for n in 0..=6 {
            for l in enumerate_partitions(n).unwrap() {
                for k in 1..=4 {
                    assert_eq!(count_ssyt(&l, k), BigUint::from(ssyt_brute(&l, k)), "{l} k={k}");
                }
            }
        }
    }

    #[test]
    fn pushforward_examples() {
        let perm = pushforward_shape_distribution(ShapeSource::Permutation, 2).unwrap();
        assert_eq!(perm, vec![(part(&[2]), r(1, 2)), (part(&[1, 1]), r(1, 2))]);

        for n in 0..=6 {
            let m = pushforward_shape_distribution(ShapeSource::Matrix { k: 1, l: 1 }, n).unwrap();
            for (shape, p) in m {
                let expected = if shape.length() <= 1 { r(1, 1) } else { r(0, 1) };
                assert_eq!(p, expected);
            }
        }

        let w = pushforward_shape_distribution(ShapeSource::Word { k: 2 }, 2).unwrap();
        assert_eq!(w, vec![(part(&[2]), r(3, 4)), (part(&[1, 1]), r(1, 4))]);
        let brute = shape_distribution_by_enumeration(ShapeSource::Word { k: 2 }, 2).unwrap();
        assert_eq!(brute[&part(&[2])], r(3, 4));
    }

    #[test]
    fn pushforward_matches_exhaustive_rsk() {
        let sources = [
            ShapeSource::Matrix { k: 2, l: 3 },
            ShapeSource::Word { k: 3 },
            ShapeSource::Permutation,
        ];
        for source in sources {
            for n in 0..=5 {
                let exact = pushforward_shape_distribution(source, n).unwrap();
                let brute = shape_distribution_by_enumeration(source, n).unwrap();
                let total: Rational = exact.iter().map(|(_, p)| p.clone()).sum();
                assert_eq!(total, r(1, 1));
                for (shape, p) in exact {
                    let b = brute.get(&shape).cloned().unwrap_or_else(|| r(0, 1));
                    assert_eq!(p, b, "{source:?} {shape}");
                }
            }
        }
    }

    #[test]
    fn support_is_bounded_by_min_alphabet() {
        let d = pushforward_shape_distribution(ShapeSource::Matrix { k: 2, l: 3 }, 6).unwrap();
        for (shape, p) in d {
            assert_eq!(p.is_zero(), shape.length() > 2, "{shape}");
        }
    }

    #[test]
    fn invalid_inputs() {
        assert!(Permutation::new(vec![1, 1]).is_err());
        assert!(Permutation::new(vec![0, 1]).is_err());
        assert!(Word::new(2, vec![3]).is_err());
        assert!(NonNegMatrix::new(2, 2, vec![1]).is_err());
        assert!(NonNegMatrix::from_rows(&[vec![1, 2], vec![1]]).is_err());
        assert_eq!(Permutation::all(4).len(), 24);
    }
}
