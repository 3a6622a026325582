//! Upper bounds on `|per(Z)|` and on sums of squared sub-permanents.
//!
//! Every bound is evaluated as a logarithm first (`ln_*`), so factorials and
//! binomials never overflow; the plain variants exponentiate at the end.

use std::collections::BTreeSet;
use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::convolution::constant_c;
use crate::error::{Error, Result};
use crate::exact::ExactRational;
use crate::matrix::ComplexMatrix;
use crate::partition::ColumnPartition;
use crate::permanent::{per_ryser, per_sub};
use crate::subset::{binomial_u64, iter_subsets, IndexSubset};
use crate::sympoly::{compute_alpha, ln_binomial, ln_esym, ln_factorial, WeightVector};

/// Default work budget for exhaustive sub-permanent sums, in units of
/// `C(n, l) 2^l`.
pub const DEFAULT_BUDGET: u128 = 1 << 32;

/// Relative tolerance for the block-constant modulus precondition of
/// [`bound_corollary`].
pub const MODULUS_TOL: f64 = 1e-9;

/// `ln Q(Z) = sum_r ln ||column r||`.
pub fn ln_column_norm_product(z: &ComplexMatrix) -> f64 {
    (0..z.n_cols()).map(|r| 0.5 * column_sq(z, r).ln()).sum()
}

/// `Q(Z)`, the product of the Euclidean column norms.
pub fn column_norm_product(z: &ComplexMatrix) -> f64 {
    ln_column_norm_product(z).exp()
}

fn column_sq(z: &ComplexMatrix, r: usize) -> f64 {
    (0..z.n_rows()).map(|j| z.norm_sqr(j, r)).sum()
}

/// `ln( n! prod_r ((1/n) sum_j |z_{j,r}|^2)^{1/2} )`.
pub fn ln_bound_classic(z: &ComplexMatrix) -> Result<f64> {
    let n = z.square_size()?;
    let nf = n as f64;
    Ok(ln_factorial(n) + (0..n).map(|r| 0.5 * (column_sq(z, r) / nf).ln()).sum::<f64>())
}

pub fn bound_classic(z: &ComplexMatrix) -> Result<f64> {
    Ok(ln_bound_classic(z)?.exp())
}

fn check_full_partition(n: usize, partition: &ColumnPartition) -> Result<()> {
    if partition.universe() != IndexSubset::full(n) {
        return Err(Error::InvalidPartition(format!(
            "partition covers {} but the matrix has columns {}",
            partition.universe(),
            IndexSubset::full(n)
        )));
    }
    Ok(())
}

/// `sum_k ( ln e_{m_k}(w_k) - ln C(n, m_k) )` for per-block weights `w_k`.
fn ln_block_means(n: usize, blocks: impl Iterator<Item = (usize, WeightVector)>) -> Result<f64> {
    let mut acc = 0.0;
    for (m, w) in blocks {
        acc += ln_esym(&w, m)? - ln_binomial(n, m);
    }
    Ok(acc)
}

/// `ln` of `n! prod_k ( e_{m_k}(alpha_{.,k}) / C(n, m_k) )^{1/2}`.
pub fn ln_bound_partition(z: &ComplexMatrix, partition: &ColumnPartition) -> Result<f64> {
    let n = z.square_size()?;
    check_full_partition(n, partition)?;
    let alpha = compute_alpha(z, partition)?;
    let sizes = partition.sizes();
    let s = ln_block_means(n, sizes.iter().enumerate().map(|(k, &m)| (m, alpha.block_weights(k))))?;
    Ok(ln_factorial(n) + 0.5 * s)
}

pub fn bound_partition(z: &ComplexMatrix, partition: &ColumnPartition) -> Result<f64> {
    Ok(ln_bound_partition(z, partition)?.exp())
}

fn check_columns(z: &ComplexMatrix, l: IndexSubset) -> Result<()> {
    if l.universe_size() != z.n_cols() {
        return Err(Error::DimensionMismatch(format!(
            "column set lives in a universe of {} but the matrix has {} columns",
            l.universe_size(),
            z.n_cols()
        )));
    }
    if l.len() > z.n_rows() {
        return Err(Error::InvalidCardinality { n: z.n_rows(), k: l.len() });
    }
    Ok(())
}

/// `ln` of `(l!)^2 C(n, l) prod_k ( e_{m_k}(alpha_{.,k}) / C(n, m_k) )`, which
/// bounds `sum_{|J| = l} |per(Z[J, L])|^2` for a partition of `L`.
pub fn ln_bound_subsum(z: &ComplexMatrix, l: IndexSubset, partition: &ColumnPartition) -> Result<f64> {
    check_columns(z, l)?;
    if l.is_empty() {
        return Err(Error::InvalidCardinality { n: z.n_rows(), k: 0 });
    }
    if partition.universe() != l {
        return Err(Error::InvalidPartition(format!("partition covers {} instead of {l}", partition.universe())));
    }
    let n = z.n_rows();
    let alpha = compute_alpha(z, partition)?;
    let sizes = partition.sizes();
    let s = ln_block_means(n, sizes.iter().enumerate().map(|(k, &m)| (m, alpha.block_weights(k))))?;
    Ok(2.0 * ln_factorial(l.len()) + ln_binomial(n, l.len()) + s)
}

pub fn bound_subsum(z: &ComplexMatrix, l: IndexSubset, partition: &ColumnPartition) -> Result<f64> {
    Ok(ln_bound_subsum(z, l, partition)?.exp())
}

/// `sum_{|J| = |L|} |per(Z[J, L])|^2` by exhaustive enumeration, refused when
/// `C(n, l) 2^l` exceeds `budget`. Terms are added in subset order.
pub fn subsum_lhs(z: &ComplexMatrix, l: IndexSubset, budget: u128) -> Result<f64> {
    check_columns(z, l)?;
    let n = z.n_rows();
    let needed = binomial_u64(n, l.len()) as u128 * (1u128 << l.len());
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let rows: Vec<IndexSubset> = iter_subsets(n, l.len())?.collect();
    let terms: Vec<f64> = rows
        .par_iter()
        .map(|&j| per_sub(z, j, l).map(|p| p.norm_sqr()))
        .collect::<Result<_>>()?;
    Ok(terms.iter().sum())
}

/// Both sides of a sub-permanent square-sum inequality.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SideBySide {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl SideBySide {
    fn new(lhs: f64, rhs: f64) -> Self {
        Self { lhs, rhs, holds: lhs <= rhs * (1.0 + 1e-12) }
    }
}

pub fn verify_subsum(z: &ComplexMatrix, l: IndexSubset, partition: &ColumnPartition, budget: u128) -> Result<SideBySide> {
    let rhs = bound_subsum(z, l, partition)?;
    Ok(SideBySide::new(subsum_lhs(z, l, budget)?, rhs))
}

/// Right-hand side of the single-block reduction step together with its
/// constant `C(l, m, n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct StepBound {
    pub rhs: f64,
    pub c: ExactRational,
}

/// `(m!)^2 C(l,m,n) e_m(alpha_M) sum_{|K| = l-m} |per(Z[K, L \ M])|^2` with
/// `alpha_{j,M} = (1/m) sum_{r in M} |z_{j,r}|^2`.
pub fn bound_step(z: &ComplexMatrix, l: IndexSubset, m: IndexSubset, budget: u128) -> Result<StepBound> {
    check_columns(z, l)?;
    if m.is_empty() || !m.is_subset_of(l) {
        return Err(Error::Containment(format!("need nonempty M = {m} inside L = {l}")));
    }
    let n = z.n_rows();
    let (lc, mc) = (l.len(), m.len());
    let c = constant_c(lc as u32, mc as u32, n as u32);
    let c_f = ratio_to_f64(&c);
    let alpha = WeightVector::new(
        (0..n).map(|j| m.iter().map(|r| z.norm_sqr(j, r)).sum::<f64>() / mc as f64).collect(),
    )?;
    let ln_e = ln_esym(&alpha, mc)?;
    let h_sq = subsum_lhs(z, l.difference(m), budget)?;
    let rhs = (2.0 * ln_factorial(mc) + c_f.ln() + ln_e).exp() * h_sq;
    Ok(StepBound { rhs, c })
}

pub fn verify_step(z: &ComplexMatrix, l: IndexSubset, m: IndexSubset, budget: u128) -> Result<SideBySide> {
    let step = bound_step(z, l, m, budget)?;
    Ok(SideBySide::new(subsum_lhs(z, l, budget)?, step.rhs))
}

pub(crate) fn ratio_to_f64(r: &ExactRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// `ln` of `n! prod_k ( e_{m_k}(|z_{., s_k}|^2) / C(n, m_k) )^{1/2}`, valid when
/// the modulus is constant along every block: `|z_{j,r}| = |z_{j,s_k}|` for
/// `r` in block `k`.
pub fn ln_bound_corollary(z: &ComplexMatrix, partition: &ColumnPartition, representatives: &[usize]) -> Result<f64> {
    let n = z.square_size()?;
    check_full_partition(n, partition)?;
    if representatives.len() != partition.len() {
        return Err(Error::InvalidPartition(format!(
            "{} representatives for {} blocks",
            representatives.len(),
            partition.len()
        )));
    }
    for (b, &s) in partition.blocks().iter().zip(representatives) {
        if !b.contains(s) {
            return Err(Error::InvalidPartition(format!("representative {s} is not in block {b}")));
        }
        for j in 0..n {
            let base = z.get(j, s).norm();
            for r in b.iter() {
                let v = z.get(j, r).norm();
                if (v - base).abs() > MODULUS_TOL * v.max(base) {
                    return Err(Error::ModulusPattern { row: j, col: r });
                }
            }
        }
    }
    let blocks = partition.blocks().iter().zip(representatives).map(|(b, &s)| {
        (b.len(), WeightVector::new((0..n).map(|j| z.norm_sqr(j, s)).collect()).expect("finite"))
    });
    Ok(ln_factorial(n) + 0.5 * ln_block_means(n, blocks)?)
}

pub fn bound_corollary(z: &ComplexMatrix, partition: &ColumnPartition, representatives: &[usize]) -> Result<f64> {
    Ok(ln_bound_corollary(z, partition, representatives)?.exp())
}

/// Memoized `eta(k) = (k!)^{1/k}` with `eta(0) = 0`, stored as logarithms.
#[derive(Clone, Debug)]
pub struct EtaTable {
    ln_eta: Vec<f64>,
}

impl EtaTable {
    pub fn new(max_k: usize) -> Self {
        let mut ln_eta = vec![f64::NEG_INFINITY; max_k + 1];
        let mut ln_fact = 0.0;
        for (k, slot) in ln_eta.iter_mut().enumerate().skip(1) {
            ln_fact += (k as f64).ln();
            *slot = ln_fact / k as f64;
        }
        Self { ln_eta }
    }

    pub fn max_k(&self) -> usize {
        self.ln_eta.len() - 1
    }

    pub fn ln_eta(&self, k: usize) -> f64 {
        self.ln_eta[k]
    }

    pub fn eta(&self, k: usize) -> f64 {
        self.ln_eta[k].exp()
    }
}

pub fn ln_bound_bregman_minc(z: &ComplexMatrix) -> Result<f64> {
    let n = z.square_size()?;
    if let Some(p) = z.entries().iter().position(|v| *v != Complex64::new(0.0, 0.0) && *v != Complex64::new(1.0, 0.0)) {
        return Err(Error::NonBinary { row: p / n, col: p % n });
    }
    let eta = EtaTable::new(n);
    Ok((0..n)
        .map(|j| eta.ln_eta(z.row(j).iter().filter(|v| v.re == 1.0).count()))
        .sum())
}

/// `prod_j eta(lambda_j)` over the row sums of a 0/1 matrix.
pub fn bound_bregman_minc(z: &ComplexMatrix) -> Result<f64> {
    Ok(ln_bound_bregman_minc(z)?.exp())
}

/// Row and column phases witnessing `z_{j,r} = xi_j zeta_r |z_{j,r}|`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhaseFactorization {
    pub factorizable: bool,
    pub xi: Vec<Complex64>,
    pub zeta: Vec<Complex64>,
}

/// Takes `zeta` from row 0 and `xi` from column 0, then checks every entry's
/// phase against `xi_j zeta_r` within `tol`. The witnesses are returned only
/// when the check succeeds.
pub fn check_phase_factorizable(z: &ComplexMatrix, tol: f64) -> Result<PhaseFactorization> {
    for j in 0..z.n_rows() {
        for r in 0..z.n_cols() {
            if z.get(j, r).norm() <= tol {
                return Err(Error::ZeroEntry { row: j, col: r });
            }
        }
    }
    let phase = |v: Complex64| v / v.norm();
    let zeta: Vec<Complex64> = (0..z.n_cols()).map(|r| phase(z.get(0, r))).collect();
    let xi: Vec<Complex64> = (0..z.n_rows()).map(|j| phase(z.get(j, 0)) / zeta[0]).collect();
    let factorizable =
        (0..z.n_rows()).all(|j| (0..z.n_cols()).all(|r| (phase(z.get(j, r)) - xi[j] * zeta[r]).norm() <= tol));
    if factorizable {
        Ok(PhaseFactorization { factorizable, xi, zeta })
    } else {
        Ok(PhaseFactorization { factorizable, xi: Vec::new(), zeta: Vec::new() })
    }
}

/// Sufficient conditions for equality in the partition bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum PartitionEquality {
    /// Some block has at least `n - m_k + 1` rows vanishing on it; both sides
    /// are zero.
    A,
    /// `z_{j,r} = xi_j zeta_r y_k` with unit phases and `y_k > 0`.
    B,
}

impl fmt::Display for PartitionEquality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PartitionEquality::A => "A",
            PartitionEquality::B => "B",
        })
    }
}

/// Detected sufficient conditions; entries count as zero when their modulus
/// is at most `tol` times the largest modulus. An empty set asserts nothing.
pub fn classify_partition_equality(z: &ComplexMatrix, partition: &ColumnPartition, tol: f64) -> BTreeSet<PartitionEquality> {
    let mut out = BTreeSet::new();
    let Ok(n) = z.square_size() else { return out };
    if check_full_partition(n, partition).is_err() {
        return out;
    }
    let scale = z.max_abs();
    let zero = tol * scale;
    let a = partition.blocks().iter().any(|b| {
        let zero_rows = (0..n).filter(|&j| b.iter().all(|r| z.get(j, r).norm() <= zero)).count();
        zero_rows + b.len() > n
    });
    if a {
        out.insert(PartitionEquality::A);
    }
    if scale > 0.0 {
        let normalized = ComplexMatrix::from_fn(n, n, |j, r| z.get(j, r) / scale);
        let factorizable = check_phase_factorizable(&normalized, tol).map(|p| p.factorizable).unwrap_or(false);
        let block_constant = partition.blocks().iter().all(|b| {
            let r0 = b.iter().next().expect("blocks are nonempty");
            let y = z.get(0, r0).norm();
            (0..n).all(|j| b.iter().all(|r| (z.get(j, r).norm() - y).abs() <= tol * scale))
        });
        if factorizable && block_constant {
            out.insert(PartitionEquality::B);
        }
    }
    out
}

/// One named bound inside a [`BoundReport`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundEntry {
    pub name: String,
    pub value: f64,
    pub log_value: f64,
    pub tightness: Option<f64>,
    pub equality_flags: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub per_abs: Option<f64>,
    pub bounds: Vec<BoundEntry>,
}

impl BoundReport {
    pub fn get(&self, name: &str) -> Option<&BoundEntry> {
        self.bounds.iter().find(|b| b.name == name)
    }
}

fn tightness(per_abs: Option<f64>, value: f64) -> Option<f64> {
    per_abs.map(|p| if value == 0.0 && p == 0.0 { 1.0 } else { p / value })
}

fn entry(name: &str, log_value: f64, per_abs: Option<f64>, flags: Vec<String>) -> BoundEntry {
    let value = log_value.exp();
    BoundEntry { name: name.into(), value, log_value, tightness: tightness(per_abs, value), equality_flags: flags }
}

/// Every bound applicable to `z`: classic always; partition when a partition
/// is given; the block-constant-modulus form when its precondition holds;
/// the 0/1 bound for binary matrices. `|per|` is included when `n <= exact_cap`.
pub fn bound_report(
    z: &ComplexMatrix,
    partition: Option<&ColumnPartition>,
    exact_cap: usize,
    tol: f64,
) -> Result<BoundReport> {
    let n = z.square_size()?;
    let per_abs = if n <= exact_cap { Some(per_ryser(z)?.norm()) } else { None };
    let singles = ColumnPartition::singletons(IndexSubset::full(n));
    let mut bounds = vec![entry("classic", ln_bound_classic(z)?, per_abs, flags(z, &singles, tol))];
    if let Some(p) = partition {
        bounds.push(entry("partition", ln_bound_partition(z, p)?, per_abs, flags(z, p, tol)));
        let reps: Vec<usize> = p.blocks().iter().map(|b| b.iter().next().expect("nonempty")).collect();
        if let Ok(v) = ln_bound_corollary(z, p, &reps) {
            bounds.push(entry("corollary", v, per_abs, flags(z, p, tol)));
        }
    }
    if z.is_binary() {
        bounds.push(entry("bregman_minc", ln_bound_bregman_minc(z)?, per_abs, Vec::new()));
    }
    Ok(BoundReport { per_abs, bounds })
}

fn flags(z: &ComplexMatrix, p: &ColumnPartition, tol: f64) -> Vec<String> {
    classify_partition_equality(z, p, tol).into_iter().map(|f| f.to_string()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::{gaussian_complex, rank_one_phase, trial_rng};
    use crate::permanent::per_naive;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn norm_product_examples() {
        assert!(rel(column_norm_product(&ComplexMatrix::identity(4)), 1.0) < 1e-15);
        assert!(rel(column_norm_product(&ComplexMatrix::ones(3, 3)), 3.0 * 3f64.sqrt()) < 1e-15);
        let z = ComplexMatrix::from_real_rows(&[vec![1.0, 0.0], vec![2.0, 0.0]]).unwrap();
        assert_eq!(column_norm_product(&z), 0.0);
    }

    #[test]
    fn classic_examples() {
        assert!(rel(bound_classic(&ComplexMatrix::ones(2, 2)).unwrap(), 2.0) < 1e-15);
        let anti = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert!(rel(bound_classic(&anti).unwrap(), 1.0) < 1e-15);
        let z = gaussian_complex(&mut trial_rng(3, 0, 0), 6, 6);
        assert!(per_ryser(&z).unwrap().norm() <= bound_classic(&z).unwrap());
        assert!(bound_classic(&ComplexMatrix::ones(2, 3)).is_err());
    }

    #[test]
    fn partition_specializations() {
        let z = gaussian_complex(&mut trial_rng(4, 0, 0), 5, 5);
        let full = IndexSubset::full(5);
        let single = bound_partition(&z, &ColumnPartition::singletons(full)).unwrap();
        assert!(rel(single, bound_classic(&z).unwrap()) < 1e-12);
        let whole = bound_partition(&z, &ColumnPartition::whole(full).unwrap()).unwrap();
        assert!(rel(whole, bound_classic(&z.transpose()).unwrap()) < 1e-12);
    }

    #[test]
    fn partition_equality_family() {
        let p = ColumnPartition::consecutive(&[2, 1, 2], IndexSubset::full(5)).unwrap();
        let z = rank_one_phase(&mut trial_rng(5, 0, 0), 5, &p);
        let per = per_ryser(&z).unwrap().norm();
        assert!(rel(bound_partition(&z, &p).unwrap(), per) < 1e-12);
        assert!(classify_partition_equality(&z, &p, 1e-9).contains(&PartitionEquality::B));
    }

    #[test]
    fn partition_zero_rows() {
        // block {0,1}, n=3: 3-2+1 = 2 rows vanishing on it
        let z = ComplexMatrix::from_real_rows(&[vec![0.0, 0.0, 1.0], vec![0.0, 0.0, 2.0], vec![1.0, 3.0, 1.0]]).unwrap();
        let p = ColumnPartition::consecutive(&[2, 1], IndexSubset::full(3)).unwrap();
        assert_eq!(bound_partition(&z, &p).unwrap(), 0.0);
        assert_eq!(per_ryser(&z).unwrap().norm(), 0.0);
        assert_eq!(classify_partition_equality(&z, &p, 1e-9), BTreeSet::from([PartitionEquality::A]));
    }

    #[test]
    fn generic_is_unflagged() {
        let z = gaussian_complex(&mut trial_rng(6, 0, 0), 4, 4);
        let p = ColumnPartition::consecutive(&[2, 2], IndexSubset::full(4)).unwrap();
        assert!(classify_partition_equality(&z, &p, 1e-9).is_empty());
    }

    #[test]
    fn subsum_single_column_equality() {
        let z = gaussian_complex(&mut trial_rng(7, 0, 0), 5, 5);
        let l = IndexSubset::singleton(2, 5).unwrap();
        let r = verify_subsum(&z, l, &ColumnPartition::whole(l).unwrap(), DEFAULT_BUDGET).unwrap();
        let direct: f64 = (0..5).map(|j| z.norm_sqr(j, 2)).sum();
        assert!(rel(r.lhs, direct) < 1e-13 && rel(r.rhs, direct) < 1e-13);
    }

    #[test]
    fn subsum_full_is_classic_squared() {
        let z = gaussian_complex(&mut trial_rng(8, 0, 0), 5, 5);
        let l = IndexSubset::full(5);
        let r = verify_subsum(&z, l, &ColumnPartition::singletons(l), DEFAULT_BUDGET).unwrap();
        assert!(rel(r.lhs, per_naive(&z).unwrap().norm_sqr()) < 1e-12);
        assert!(rel(r.rhs, bound_classic(&z).unwrap().powi(2)) < 1e-12);
    }

    #[test]
    fn subsum_budget() {
        let z = gaussian_complex(&mut trial_rng(9, 0, 0), 6, 6);
        let l = IndexSubset::from_indices(&[0, 1, 2], 6).unwrap();
        assert!(matches!(subsum_lhs(&z, l, 10), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn step_specializations() {
        let z = gaussian_complex(&mut trial_rng(10, 0, 0), 6, 6);
        let l = IndexSubset::from_indices(&[0, 2, 3, 5], 6).unwrap();
        // |M| = 1 gives the factor l(n-l+1)/n
        let m = IndexSubset::singleton(3, 6).unwrap();
        let s = bound_step(&z, l, m, DEFAULT_BUDGET).unwrap();
        let col: f64 = (0..6).map(|j| z.norm_sqr(j, 3)).sum::<f64>() / 6.0;
        let rest = subsum_lhs(&z, l.difference(m), DEFAULT_BUDGET).unwrap();
        assert!(rel(s.rhs, 4.0 * 3.0 * col * rest) < 1e-12);
        // M = L gives (l!)^2 sum g
        let s = bound_step(&z, l, l, DEFAULT_BUDGET).unwrap();
        let alpha: Vec<f64> = (0..6).map(|j| l.iter().map(|r| z.norm_sqr(j, r)).sum::<f64>() / 4.0).collect();
        let g_sum: f64 = iter_subsets(6, 4).unwrap().map(|i| i.iter().map(|j| alpha[j]).product::<f64>()).sum();
        assert!(rel(s.rhs, 576.0 * g_sum) < 1e-12);
        let r = verify_step(&z, l, IndexSubset::from_indices(&[0, 5], 6).unwrap(), DEFAULT_BUDGET).unwrap();
        assert!(r.holds);
        assert!(bound_step(&z, l, IndexSubset::singleton(1, 6).unwrap(), DEFAULT_BUDGET).is_err());
    }

    #[test]
    fn corollary_examples() {
        let p = ColumnPartition::consecutive(&[1, 2], IndexSubset::full(3)).unwrap();
        assert!(rel(bound_corollary(&ComplexMatrix::ones(3, 3), &p, &[0, 1]).unwrap(), 6.0) < 1e-14);
        let z = gaussian_complex(&mut trial_rng(11, 0, 0), 3, 3);
        let s = ColumnPartition::singletons(IndexSubset::full(3));
        assert!(rel(bound_corollary(&z, &s, &[0, 1, 2]).unwrap(), bound_classic(&z).unwrap()) < 1e-12);
        assert!(matches!(bound_corollary(&z, &p, &[0, 1]), Err(Error::ModulusPattern { .. })));
    }

    #[test]
    fn eta_and_bregman() {
        let eta = EtaTable::new(10);
        assert_eq!(eta.eta(0), 0.0);
        assert!(rel(eta.eta(1), 1.0) < 1e-15);
        assert!((1..10).all(|k| eta.eta(k) <= eta.eta(k + 1)));
        assert!(rel(bound_bregman_minc(&ComplexMatrix::ones(5, 5)).unwrap(), 120.0) < 1e-13);
        assert!(rel(bound_bregman_minc(&ComplexMatrix::identity(5)).unwrap(), 1.0) < 1e-15);
        let z = ComplexMatrix::from_real_rows(&[vec![1.0, 0.0], vec![0.0, 0.0]]).unwrap();
        assert_eq!(bound_bregman_minc(&z).unwrap(), 0.0);
        let z = ComplexMatrix::from_real_rows(&[vec![1.0, 0.5], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(bound_bregman_minc(&z), Err(Error::NonBinary { row: 0, col: 1 })));
    }

    #[test]
    fn phase_examples() {
        let pos = ComplexMatrix::from_real_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let f = check_phase_factorizable(&pos, 1e-12).unwrap();
        assert!(f.factorizable);
        assert!(f.xi.iter().chain(&f.zeta).all(|p| (p - Complex64::new(1.0, 0.0)).norm() < 1e-15));

        let i = Complex64::i();
        let z = ComplexMatrix::from_fn(3, 3, |j, r| i.powu(j as u32) * (-1f64).powi(r as i32) * (j + r + 1) as f64);
        assert!(check_phase_factorizable(&z, 1e-12).unwrap().factorizable);

        let bad = ComplexMatrix::from_rows(&[vec![1.0.into(), 1.0.into()], vec![1.0.into(), i]]).unwrap();
        assert!(!check_phase_factorizable(&bad, 1e-12).unwrap().factorizable);
        let zero = ComplexMatrix::identity(2);
        assert!(matches!(check_phase_factorizable(&zero, 1e-12), Err(Error::ZeroEntry { .. })));
    }

    #[test]
    fn report_shape() {
        let p = ColumnPartition::consecutive(&[3], IndexSubset::full(3)).unwrap();
        let r = bound_report(&ComplexMatrix::ones(3, 3), Some(&p), 30, 1e-9).unwrap();
        assert_eq!(r.per_abs, Some(6.0));
        for name in ["classic", "partition", "corollary", "bregman_minc"] {
            let e = r.get(name).unwrap();
            assert!(rel(e.value, 6.0) < 1e-13, "{name}");
            assert!((e.value.ln() - e.log_value).abs() < 1e-9);
        }
        let json = serde_json::to_value(&r).unwrap();
        assert!(json["bounds"][0]["equality_flags"].is_array());
    }
}
