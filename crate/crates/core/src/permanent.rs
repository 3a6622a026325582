//! Exact permanents.
//!
//! [`per_naive`] sums all diagonal products and serves as the oracle.
//! [`per_ryser`] uses Ryser's inclusion-exclusion formula walked in Gray-code
//! order, so each step updates the row sums by one column. The Gray-code range
//! is cut into a number of chunks that depends only on `n`; chunk partial sums
//! are added in chunk order, which makes the result independent of how many
//! worker threads evaluate the chunks.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::subset::IndexSubset;

/// Largest matrix accepted by [`per_naive`].
pub const NAIVE_CAP: usize = 10;
/// Default cap for [`per_ryser`]; cost is `O(2^n n)`.
pub const DEFAULT_EXACT_CAP: usize = 30;

/// Below this size the Gray-code walk runs as a single chunk.
const CHUNKED_FROM: usize = 14;
const CHUNK_BITS: u32 = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Naive,
    Ryser,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PermanentResult {
    pub value: Complex64,
    pub algorithm: Algorithm,
    pub n: usize,
}

/// Knobs for [`per_ryser_with`].
#[derive(Clone, Copy, Debug)]
pub struct RyserOptions {
    pub cap: usize,
    /// `None` runs chunks on the global rayon pool, `Some(1)` on the calling
    /// thread, `Some(w)` on a dedicated pool of `w` threads.
    pub workers: Option<usize>,
}

impl Default for RyserOptions {
    fn default() -> Self {
        Self { cap: DEFAULT_EXACT_CAP, workers: None }
    }
}

pub fn permanent(z: &ComplexMatrix, algorithm: Algorithm, cap: usize) -> Result<PermanentResult> {
    let n = z.square_size()?;
    let value = match algorithm {
        Algorithm::Naive => per_naive(z)?,
        Algorithm::Ryser => per_ryser_with(z, RyserOptions { cap, workers: None })?,
    };
    Ok(PermanentResult { value, algorithm, n })
}

/// Sum over all permutations in ascending lexicographic order.
pub fn per_naive(z: &ComplexMatrix) -> Result<Complex64> {
    let n = z.square_size()?;
    if n > NAIVE_CAP {
        return Err(Error::SizeExceeded { n, cap: NAIVE_CAP });
    }
    if n == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let mut sum = Complex64::new(0.0, 0.0);
    naive_rec(z, 0, 0, Complex64::new(1.0, 0.0), &mut sum);
    Ok(sum)
}

fn naive_rec(z: &ComplexMatrix, row: usize, used: u64, prefix: Complex64, sum: &mut Complex64) {
    let n = z.n_rows();
    if row == n {
        *sum += prefix;
        return;
    }
    for col in 0..n {
        if used >> col & 1 == 0 {
            naive_rec(z, row + 1, used | 1 << col, prefix * z.get(row, col), sum);
        }
    }
}

pub fn per_ryser(z: &ComplexMatrix) -> Result<Complex64> {
    per_ryser_with(z, RyserOptions::default())
}

pub fn per_ryser_with(z: &ComplexMatrix, opts: RyserOptions) -> Result<Complex64> {
    let n = z.square_size()?;
    if n > opts.cap || n > 62 {
        return Err(Error::SizeExceeded { n, cap: opts.cap.min(62) });
    }
    if n == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let columns: Vec<Vec<Complex64>> = (0..n).map(|r| (0..n).map(|j| z.get(j, r)).collect()).collect();
    let total: u64 = 1 << n;
    let chunks: u64 = if n >= CHUNKED_FROM { 1 << CHUNK_BITS } else { 1 };
    let len = total / chunks;
    let run = |c: u64| gray_chunk(&columns, c * len, (c + 1) * len);

    let partials: Vec<Complex64> = match opts.workers {
        Some(1) => (0..chunks).map(run).collect(),
        None => (0..chunks).into_par_iter().map(run).collect(),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w.max(1))
                .build()
                .map_err(|e| Error::DimensionMismatch(format!("thread pool: {e}")))?;
            pool.install(|| (0..chunks).into_par_iter().map(run).collect())
        }
    };
    let sum = partials.into_iter().fold(Complex64::new(0.0, 0.0), |a, b| a + b);
    Ok(if n % 2 == 1 { -sum } else { sum })
}

/// Signed Ryser terms for Gray-code steps `k` in `[start, end)`, skipping `k = 0`.
fn gray_chunk(columns: &[Vec<Complex64>], start: u64, end: u64) -> Complex64 {
    let n = columns.len();
    let first = start.max(1);
    if first >= end {
        return Complex64::new(0.0, 0.0);
    }
    // row sums for the subset gray(first - 1)
    let g0 = (first - 1) ^ ((first - 1) >> 1);
    let mut sums = vec![Complex64::new(0.0, 0.0); n];
    for (r, col) in columns.iter().enumerate() {
        if g0 >> r & 1 == 1 {
            for (s, &v) in sums.iter_mut().zip(col) {
                *s += v;
            }
        }
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for k in first..end {
        let bit = k.trailing_zeros() as usize;
        let gray = k ^ (k >> 1);
        let col = &columns[bit];
        if gray >> bit & 1 == 1 {
            for (s, &v) in sums.iter_mut().zip(col) {
                *s += v;
            }
        } else {
            for (s, &v) in sums.iter_mut().zip(col) {
                *s -= v;
            }
        }
        let mut prod = sums[0];
        for s in &sums[1..] {
            prod *= s;
        }
        // popcount(gray(k)) has the parity of k
        if k & 1 == 1 {
            acc -= prod;
        } else {
            acc += prod;
        }
    }
    acc
}

/// Permanent of `Z[rows, cols]`; 1 for empty index sets.
pub fn per_sub(z: &ComplexMatrix, rows: IndexSubset, cols: IndexSubset) -> Result<Complex64> {
    if rows.len() != cols.len() {
        return Err(Error::CardinalityMismatch { rows: rows.len(), cols: cols.len() });
    }
    if rows.is_empty() {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let sub = z.submatrix(rows, cols)?;
    per_ryser_with(&sub, RyserOptions { cap: DEFAULT_EXACT_CAP, workers: Some(1) })
}

/// `sum_{I ⊆ J, |I| = |M|} per(Z[I, M]) per(Z[J \ I, L \ M])`, which equals
/// `per(Z[J, L])`.
pub fn laplace_expand(z: &ComplexMatrix, j: IndexSubset, l: IndexSubset, m: IndexSubset) -> Result<Complex64> {
    if !m.is_subset_of(l) {
        return Err(Error::Containment(format!("M = {m} is not contained in L = {l}")));
    }
    if j.len() != l.len() {
        return Err(Error::CardinalityMismatch { rows: j.len(), cols: l.len() });
    }
    let rest = l.difference(m);
    let mut sum = Complex64::new(0.0, 0.0);
    for i in j.subsets_of_size(m.len()) {
        let a = per_sub(z, i, m)?;
        if a == Complex64::new(0.0, 0.0) {
            continue;
        }
        sum += a * per_sub(z, j.difference(i), rest)?;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::{gaussian_complex, trial_rng};

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * (1.0 + b.norm())
    }

    #[test]
    fn identity_and_ones() {
        assert_eq!(per_naive(&ComplexMatrix::identity(2)).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(per_naive(&ComplexMatrix::ones(3, 3)).unwrap(), Complex64::new(6.0, 0.0));
        assert_eq!(per_ryser(&ComplexMatrix::identity(4)).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(per_ryser(&ComplexMatrix::ones(5, 5)).unwrap(), Complex64::new(120.0, 0.0));
    }

    #[test]
    fn two_by_two_formula() {
        let z = ComplexMatrix::from_rows(&[
            vec![Complex64::new(1.0, 2.0), Complex64::new(-0.5, 0.3)],
            vec![Complex64::new(0.7, -1.1), Complex64::new(2.0, 0.0)],
        ])
        .unwrap();
        let expected = z.get(0, 0) * z.get(1, 1) + z.get(0, 1) * z.get(1, 0);
        assert!(close(per_naive(&z).unwrap(), expected, 1e-15));
        assert!(close(per_ryser(&z).unwrap(), expected, 1e-15));
    }

    #[test]
    fn empty_matrix_is_one() {
        let z = ComplexMatrix::new(0, 0, vec![]).unwrap();
        assert_eq!(per_naive(&z).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(per_ryser(&z).unwrap(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn caps_and_shape_errors() {
        assert!(matches!(per_naive(&ComplexMatrix::ones(11, 11)), Err(Error::SizeExceeded { .. })));
        let opts = RyserOptions { cap: 4, workers: Some(1) };
        assert!(matches!(per_ryser_with(&ComplexMatrix::ones(5, 5), opts), Err(Error::SizeExceeded { .. })));
        assert!(matches!(per_ryser(&ComplexMatrix::ones(2, 3)), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn ryser_matches_naive_8x8() {
        let mut rng = trial_rng(7, 0, 0);
        let z = gaussian_complex(&mut rng, 8, 8);
        assert!(close(per_ryser(&z).unwrap(), per_naive(&z).unwrap(), 1e-10));
    }

    #[test]
    fn chunked_path_agrees_across_workers() {
        let mut rng = trial_rng(11, 0, 0);
        let z = gaussian_complex(&mut rng, 15, 15);
        let one = per_ryser_with(&z, RyserOptions { cap: 30, workers: Some(1) }).unwrap();
        let three = per_ryser_with(&z, RyserOptions { cap: 30, workers: Some(3) }).unwrap();
        let global = per_ryser(&z).unwrap();
        assert_eq!(one, three);
        assert_eq!(one, global);
        // ones matrix exercises the chunk seeding
        let ones = per_ryser_with(&ComplexMatrix::ones(14, 14), RyserOptions { cap: 30, workers: Some(2) }).unwrap();
        let fact14: f64 = (1..=14).map(|k| k as f64).product();
        assert!(close(ones, Complex64::new(fact14, 0.0), 1e-12));
    }

    #[test]
    fn per_sub_small_cases() {
        let mut rng = trial_rng(3, 0, 0);
        let z = gaussian_complex(&mut rng, 5, 5);
        let e = IndexSubset::empty(5);
        assert_eq!(per_sub(&z, e, e).unwrap(), Complex64::new(1.0, 0.0));
        let j = IndexSubset::singleton(2, 5).unwrap();
        let r = IndexSubset::singleton(4, 5).unwrap();
        assert_eq!(per_sub(&z, j, r).unwrap(), z.get(2, 4));
        let rows = IndexSubset::from_indices(&[0, 2], 5).unwrap();
        let cols = IndexSubset::from_indices(&[1, 3], 5).unwrap();
        let sel = z.submatrix(rows, cols).unwrap();
        assert!(close(per_sub(&z, rows, cols).unwrap(), per_naive(&sel).unwrap(), 1e-12));
        assert!(matches!(per_sub(&z, rows, r), Err(Error::CardinalityMismatch { .. })));
    }

    #[test]
    fn laplace_edge_cases() {
        let mut rng = trial_rng(5, 0, 0);
        let z = gaussian_complex(&mut rng, 6, 6);
        let j = IndexSubset::from_indices(&[0, 1, 3, 5], 6).unwrap();
        let l = IndexSubset::from_indices(&[1, 2, 3, 4], 6).unwrap();
        let whole = per_sub(&z, j, l).unwrap();
        assert!(close(laplace_expand(&z, j, l, l).unwrap(), whole, 1e-12));
        assert!(close(laplace_expand(&z, j, l, IndexSubset::empty(6)).unwrap(), whole, 1e-12));
        let m = IndexSubset::from_indices(&[2, 4], 6).unwrap();
        assert!(close(laplace_expand(&z, j, l, m).unwrap(), whole, 1e-10));
        let bad = IndexSubset::from_indices(&[0], 6).unwrap();
        assert!(matches!(laplace_expand(&z, j, l, bad), Err(Error::Containment(_))));
    }
}
