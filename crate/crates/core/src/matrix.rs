//! Dense complex matrices and their file formats.
//!
//! JSON: `{"rows": n, "cols": m, "entries": [[re, im], ...]}` in row-major order.
//! CSV: one row per line, comma separated tokens of the form `a`, `bi`, `a+bi`
//! or `a-bi`; surrounding whitespace is ignored, blank lines are skipped.

use std::fmt;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::subset::IndexSubset;

/// Row-major dense matrix of finite complex doubles.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    n_rows: usize,
    n_cols: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(n_rows: usize, n_cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != n_rows * n_cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {n_rows}x{n_cols} matrix",
                entries.len()
            )));
        }
        if let Some(pos) = entries.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { row: pos / n_cols.max(1), col: pos % n_cols.max(1) });
        }
        Ok(Self { n_rows, n_cols, entries })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n_cols) {
            return Err(Error::DimensionMismatch(format!(
                "row {i} has {} entries, expected {n_cols}",
                r.len()
            )));
        }
        Self::new(n_rows, n_cols, rows.concat())
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    /// Panics if `f` produces a non-finite value.
    pub fn from_fn(n_rows: usize, n_cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut entries = Vec::with_capacity(n_rows * n_cols);
        for j in 0..n_rows {
            for r in 0..n_cols {
                entries.push(f(j, r));
            }
        }
        Self::new(n_rows, n_cols, entries).expect("from_fn produced a non-finite entry")
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |j, r| if j == r { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) })
    }

    pub fn ones(n_rows: usize, n_cols: usize) -> Self {
        Self::from_fn(n_rows, n_cols, |_, _| Complex64::new(1.0, 0.0))
    }

    #[inline]
    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    #[inline]
    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn is_square(&self) -> bool {
        self.n_rows == self.n_cols
    }

    /// Side length of a square matrix.
    pub fn square_size(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.n_rows)
        } else {
            Err(Error::NotSquare { rows: self.n_rows, cols: self.n_cols })
        }
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.n_cols + col]
    }

    #[inline]
    pub fn row(&self, row: usize) -> &[Complex64] {
        &self.entries[row * self.n_cols..(row + 1) * self.n_cols]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Squared modulus `|z_{j,r}|^2`.
    #[inline]
    pub fn norm_sqr(&self, row: usize, col: usize) -> f64 {
        self.get(row, col).norm_sqr()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n_cols, self.n_rows, |j, r| self.get(r, j))
    }

    /// Entrywise modulus.
    pub fn abs(&self) -> Self {
        Self::from_fn(self.n_rows, self.n_cols, |j, r| Complex64::new(self.get(j, r).norm(), 0.0))
    }

    pub fn row_universe(&self) -> IndexSubset {
        IndexSubset::full(self.n_rows)
    }

    pub fn col_universe(&self) -> IndexSubset {
        IndexSubset::full(self.n_cols)
    }

    /// `Z[rows, cols]` with both index sets in ascending order.
    pub fn submatrix(&self, rows: IndexSubset, cols: IndexSubset) -> Result<Self> {
        check_within(rows, self.n_rows)?;
        check_within(cols, self.n_cols)?;
        let mut entries = Vec::with_capacity(rows.len() * cols.len());
        for j in rows.iter() {
            for r in cols.iter() {
                entries.push(self.get(j, r));
            }
        }
        Ok(Self { n_rows: rows.len(), n_cols: cols.len(), entries })
    }

    /// Matrix whose `r`-th column is column `columns[r]` of `self`.
    pub fn select_columns(&self, columns: &[usize]) -> Result<Self> {
        if let Some(&c) = columns.iter().find(|&&c| c >= self.n_cols) {
            return Err(Error::OutOfRange { index: c, size: self.n_cols });
        }
        Ok(Self::from_fn(self.n_rows, columns.len(), |j, r| self.get(j, columns[r])))
    }

    /// Same matrix with row `row` multiplied by `c`.
    pub fn scale_row(&self, row: usize, c: Complex64) -> Self {
        Self::from_fn(self.n_rows, self.n_cols, |j, r| if j == row { self.get(j, r) * c } else { self.get(j, r) })
    }

    /// True when every entry has zero imaginary part and real part 0 or 1.
    pub fn is_binary(&self) -> bool {
        self.entries.iter().all(|z| z.im == 0.0 && (z.re == 0.0 || z.re == 1.0))
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&MatrixFile::from(self)).expect("matrix serialization")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: MatrixFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        file.try_into()
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let row = line
                .split(',')
                .map(|tok| {
                    parse_complex(tok).map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        Self::from_rows(&rows)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for j in 0..self.n_rows {
            let line: Vec<String> = self.row(j).iter().map(|z| format_complex(*z)).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    /// Parse JSON when the text starts with `{`, CSV otherwise.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            Self::from_json(text)
        } else {
            Self::from_csv(text)
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.n_rows, self.n_cols)?;
        for j in 0..self.n_rows {
            let line: Vec<String> = self.row(j).iter().map(|z| format_complex(*z)).collect();
            writeln!(f, "  {}", line.join(", "))?;
        }
        write!(f, "]")
    }
}

fn check_within(s: IndexSubset, size: usize) -> Result<()> {
    match s.iter().find(|&i| i >= size) {
        Some(index) => Err(Error::OutOfRange { index, size }),
        None => Ok(()),
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixFile {
    rows: usize,
    cols: usize,
    entries: Vec<[f64; 2]>,
}

impl From<&ComplexMatrix> for MatrixFile {
    fn from(m: &ComplexMatrix) -> Self {
        Self { rows: m.n_rows, cols: m.n_cols, entries: m.entries.iter().map(|z| [z.re, z.im]).collect() }
    }
}

impl TryFrom<MatrixFile> for ComplexMatrix {
    type Error = Error;

    fn try_from(f: MatrixFile) -> Result<Self> {
        let entries = f.entries.into_iter().map(|[re, im]| Complex64::new(re, im)).collect();
        ComplexMatrix::new(f.rows, f.cols, entries)
    }
}

/// Parse `a`, `bi`, `a+bi`, `a-bi` (also `i`, `-i`); whitespace inside the
/// token is ignored. Non-finite parts are rejected.
pub fn parse_complex(token: &str) -> Result<Complex64> {
    let s: String = token.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty token".into()));
    }
    let bad = || Error::Parse(format!("cannot parse `{token}` as a complex number"));
    let parse_real = |t: &str| -> Result<f64> {
        let lower = t.to_ascii_lowercase();
        if lower.contains("inf") || lower.contains("nan") {
            return Err(bad());
        }
        let v: f64 = t.parse().map_err(|_| bad())?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(bad())
        }
    };
    let parse_imag = |t: &str| -> Result<f64> {
        match t {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => parse_real(t),
        }
    };
    let Some(body) = s.strip_suffix(['i', 'j']) else {
        return Ok(Complex64::new(parse_real(&s)?, 0.0));
    };
    // split at the last sign that is not a leading sign or an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&p| (bytes[p] == b'+' || bytes[p] == b'-') && !matches!(bytes[p - 1], b'e' | b'E'));
    match split {
        Some(p) => Ok(Complex64::new(parse_real(&body[..p])?, parse_imag(&body[p..])?)),
        None => Ok(Complex64::new(0.0, parse_imag(body)?)),
    }
}

/// Inverse of [`parse_complex`], lossless for finite doubles.
pub fn format_complex(z: Complex64) -> String {
    if z.im.is_sign_negative() {
        format!("{:?}{:?}i", z.re, z.im)
    } else {
        format!("{:?}+{:?}i", z.re, z.im)
    }
}
