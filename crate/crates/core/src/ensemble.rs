//! Seeded random instances.
//!
//! Every trial draws from its own ChaCha stream keyed by `(seed, tag)` and
//! selected by the trial index, so trials can be generated in any order or in
//! parallel with identical results.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::partition::ColumnPartition;
use crate::subset::IndexSubset;

/// Generator for trial `trial` of the experiment `(seed, tag)`.
pub fn trial_rng(seed: u64, tag: u64, trial: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&tag.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(trial);
    rng
}

/// Independent standard normal real and imaginary parts.
pub fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R, n_rows: usize, n_cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n_rows, n_cols, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Fair Bernoulli 0/1 entries.
pub fn bernoulli01<R: Rng + ?Sized>(rng: &mut R, n_rows: usize, n_cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n_rows, n_cols, |_, _| Complex64::new(if rng.random_bool(0.5) { 1.0 } else { 0.0 }, 0.0))
}

pub fn unit_phase<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::from_polar(1.0, rng.random_range(0.0..2.0 * PI))
}

/// Random phases with `|z_{j,r}| = rho_{j,k}` for every `r` in block `k`.
pub fn block_constant_modulus<R: Rng + ?Sized>(rng: &mut R, n_rows: usize, partition: &ColumnPartition) -> ComplexMatrix {
    let n_cols = partition.universe().universe_size();
    let block_of = block_index(partition, n_cols);
    let rho: Vec<Vec<f64>> = (0..n_rows)
        .map(|_| (0..partition.len()).map(|_| rng.random_range(0.1..2.0)).collect())
        .collect();
    ComplexMatrix::from_fn(n_rows, n_cols, |j, r| {
        let k = block_of[r].expect("partition covers every column");
        unit_phase(rng) * rho[j][k]
    })
}

/// `z_{j,r} = xi_j zeta_r y_k` for `r` in block `k`, unit-modulus `xi`, `zeta`
/// and positive `y`: the equality family of the partition bound.
pub fn rank_one_phase<R: Rng + ?Sized>(rng: &mut R, n_rows: usize, partition: &ColumnPartition) -> ComplexMatrix {
    let n_cols = partition.universe().universe_size();
    let block_of = block_index(partition, n_cols);
    let xi: Vec<Complex64> = (0..n_rows).map(|_| unit_phase(rng)).collect();
    let zeta: Vec<Complex64> = (0..n_cols).map(|_| unit_phase(rng)).collect();
    let y: Vec<f64> = (0..partition.len()).map(|_| rng.random_range(0.2..2.0)).collect();
    ComplexMatrix::from_fn(n_rows, n_cols, |j, r| {
        let k = block_of[r].expect("partition covers every column");
        xi[j] * zeta[r] * y[k]
    })
}

fn block_index(partition: &ColumnPartition, n_cols: usize) -> Vec<Option<usize>> {
    let mut out = vec![None; n_cols];
    for (k, b) in partition.blocks().iter().enumerate() {
        for r in b.iter() {
            out[r] = Some(k);
        }
    }
    out
}

/// Uniformly shuffled columns of `columns` cut into random consecutive sizes.
pub fn random_partition<R: Rng + ?Sized>(rng: &mut R, columns: IndexSubset) -> ColumnPartition {
    let mut members = columns.to_vec();
    members.shuffle(rng);
    let mut blocks = Vec::new();
    let mut current = Vec::new();
    for (i, &c) in members.iter().enumerate() {
        current.push(c);
        if i + 1 == members.len() || rng.random_bool(0.4) {
            blocks.push(IndexSubset::from_indices(&current, columns.universe_size()).expect("in range"));
            current.clear();
        }
    }
    ColumnPartition::new(blocks).expect("random blocks are disjoint and nonempty")
}

/// Uniform random subset of `{0..n-1}` with `k` elements.
pub fn random_subset<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> IndexSubset {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(rng);
    IndexSubset::from_indices(&idx[..k], n).expect("in range")
}

/// Named matrix ensembles used by the benchmark and verification commands.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Ensemble {
    GaussianComplex,
    Bernoulli01,
    BlockConstantModulus,
    RankOnePhase,
    /// Nonnegative with `z_{j,0} = z_{j,1}` for every row.
    TwinColumns,
    /// Nonnegative with all rows equal.
    ConstantColumns,
}

impl Ensemble {
    pub const ALL: [Ensemble; 6] = [
        Ensemble::GaussianComplex,
        Ensemble::Bernoulli01,
        Ensemble::BlockConstantModulus,
        Ensemble::RankOnePhase,
        Ensemble::TwinColumns,
        Ensemble::ConstantColumns,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Ensemble::GaussianComplex => "gaussian-complex",
            Ensemble::Bernoulli01 => "bernoulli01",
            Ensemble::BlockConstantModulus => "block-constant-modulus",
            Ensemble::RankOnePhase => "rank-one-phase",
            Ensemble::TwinColumns => "twin-columns",
            Ensemble::ConstantColumns => "constant-columns",
        }
    }

    /// Square `n x n` sample; `partition` must cover `{0..n-1}`.
    pub fn sample<R: Rng + ?Sized>(self, rng: &mut R, n: usize, partition: &ColumnPartition) -> ComplexMatrix {
        match self {
            Ensemble::GaussianComplex => gaussian_complex(rng, n, n),
            Ensemble::Bernoulli01 => bernoulli01(rng, n, n),
            Ensemble::BlockConstantModulus => block_constant_modulus(rng, n, partition),
            Ensemble::RankOnePhase => rank_one_phase(rng, n, partition),
            Ensemble::TwinColumns => {
                let base: Vec<Vec<f64>> = (0..n).map(|_| (0..n).map(|_| rng.random_range(0.0..2.0)).collect()).collect();
                ComplexMatrix::from_fn(n, n, |j, r| {
                    let c = if r == 1 { 0 } else { r };
                    Complex64::new(base[j][c], 0.0)
                })
            }
            Ensemble::ConstantColumns => {
                let row: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..2.0)).collect();
                ComplexMatrix::from_fn(n, n, |_, r| Complex64::new(row[r], 0.0))
            }
        }
    }
}

impl fmt::Display for Ensemble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Ensemble {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ensemble::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::UnknownEnsemble(s.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a = gaussian_complex(&mut trial_rng(1, 2, 3), 3, 3);
        let b = gaussian_complex(&mut trial_rng(1, 2, 3), 3, 3);
        let c = gaussian_complex(&mut trial_rng(1, 2, 4), 3, 3);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn block_modulus_is_constant_per_block() {
        let p = ColumnPartition::consecutive(&[2, 3], IndexSubset::full(5)).unwrap();
        let z = block_constant_modulus(&mut trial_rng(0, 0, 0), 5, &p);
        for j in 0..5 {
            assert!((z.get(j, 0).norm() - z.get(j, 1).norm()).abs() < 1e-14);
            assert!((z.get(j, 2).norm() - z.get(j, 4).norm()).abs() < 1e-14);
        }
    }

    #[test]
    fn ensemble_names_round_trip() {
        for e in Ensemble::ALL {
            assert_eq!(e.name().parse::<Ensemble>().unwrap(), e);
        }
        assert!("nope".parse::<Ensemble>().is_err());
    }

    #[test]
    fn random_partition_covers() {
        let cols = IndexSubset::from_indices(&[0, 2, 3, 5], 6).unwrap();
        for t in 0..20 {
            let p = random_partition(&mut trial_rng(9, 0, t), cols);
            assert_eq!(p.universe(), cols);
        }
    }
}
