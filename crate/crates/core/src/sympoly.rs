//! Elementary symmetric polynomials of nonnegative weights and the
//! block-averaged column statistics that feed the partition bounds.

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::partition::ColumnPartition;
use crate::subset::binomial_u64;

/// Switch to log-domain accumulation once a plain value exceeds this.
const OVERFLOW_GUARD: f64 = 1e300;

/// Nonnegative finite weights `y_1..y_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::InvalidWeight(format!("{v} is not a finite nonnegative number")));
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `e_m(y)` by the prefix recurrence `e_k <- e_k + y_j e_{k-1}`.
///
/// Falls back to log-domain accumulation when intermediate values exceed
/// `1e300`; the result may then be `+inf`.
pub fn esym(y: &WeightVector, m: usize) -> Result<f64> {
    let n = y.len();
    if m > n {
        return Err(Error::InvalidCardinality { n, k: m });
    }
    match esym_plain(y.values(), m) {
        Some(v) => Ok(v),
        None => Ok(ln_esym_logdomain(y.values(), m).exp()),
    }
}

/// `ln e_m(y)`; `-inf` when `e_m(y) = 0`.
pub fn ln_esym(y: &WeightVector, m: usize) -> Result<f64> {
    let n = y.len();
    if m > n {
        return Err(Error::InvalidCardinality { n, k: m });
    }
    match esym_plain(y.values(), m) {
        Some(v) if v <= 0.0 => Ok(f64::NEG_INFINITY),
        Some(v) if v < OVERFLOW_GUARD => Ok(v.ln()),
        _ => Ok(ln_esym_logdomain(y.values(), m)),
    }
}

fn esym_plain(y: &[f64], m: usize) -> Option<f64> {
    let mut e = vec![0.0; m + 1];
    e[0] = 1.0;
    for (j, &yj) in y.iter().enumerate() {
        for k in (1..=m.min(j + 1)).rev() {
            e[k] += yj * e[k - 1];
        }
        if e.iter().any(|v| *v > OVERFLOW_GUARD) {
            return None;
        }
    }
    Some(e[m])
}

fn ln_esym_logdomain(y: &[f64], m: usize) -> f64 {
    let mut l = vec![f64::NEG_INFINITY; m + 1];
    l[0] = 0.0;
    for (j, &yj) in y.iter().enumerate() {
        let ly = yj.ln();
        for k in (1..=m.min(j + 1)).rev() {
            l[k] = log_add_exp(l[k], ly + l[k - 1]);
        }
    }
    l[m]
}

fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let hi = a.max(b);
    hi + (-(a - b).abs()).exp().ln_1p()
}

/// `S_m = e_m(y) / C(n, m)`.
pub fn maclaurin_mean(y: &WeightVector, m: usize) -> Result<f64> {
    let n = y.len();
    if m == 0 || m > n {
        return Err(Error::InvalidCardinality { n, k: m });
    }
    Ok((ln_esym(y, m)? - ln_binomial(n, m)).exp())
}

/// `ln n!`.
pub fn ln_factorial(n: usize) -> f64 {
    if n <= 170 {
        (2..=n).map(|k| k as f64).product::<f64>().ln()
    } else {
        ln_factorial(170) + (171..=n).map(|k| (k as f64).ln()).sum::<f64>()
    }
}

/// `ln C(n, k)`, from the exact integer when it fits in 64 bits.
pub fn ln_binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    if n <= 62 {
        (binomial_u64(n, k) as f64).ln()
    } else {
        ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
    }
}

/// `alpha[j][k] = (1/m_k) sum_{r in M_k} |z_{j,r}|^2`.
#[derive(Clone, Debug)]
pub struct BlockColumnMeans {
    alpha: Vec<Vec<f64>>,
    partition: ColumnPartition,
}

impl BlockColumnMeans {
    pub fn alpha(&self, row: usize, block: usize) -> f64 {
        self.alpha[row][block]
    }

    pub fn partition(&self) -> &ColumnPartition {
        &self.partition
    }

    pub fn n_rows(&self) -> usize {
        self.alpha.len()
    }

    /// The weights `alpha[., k]` of one block.
    pub fn block_weights(&self, block: usize) -> WeightVector {
        WeightVector(self.alpha.iter().map(|row| row[block]).collect())
    }
}

pub fn compute_alpha(z: &ComplexMatrix, partition: &ColumnPartition) -> Result<BlockColumnMeans> {
    if let Some(c) = partition.universe().iter().find(|&c| c >= z.n_cols()) {
        return Err(Error::DimensionMismatch(format!(
            "partition uses column {c} but the matrix has {} columns",
            z.n_cols()
        )));
    }
    let alpha = (0..z.n_rows())
        .map(|j| {
            partition
                .blocks()
                .iter()
                .map(|b| b.iter().map(|r| z.norm_sqr(j, r)).sum::<f64>() / b.len() as f64)
                .collect()
        })
        .collect();
    Ok(BlockColumnMeans { alpha, partition: partition.clone() })
}
