//! Coefficients of products of linear forms `prod_j (sum_k z_{j,k} x_k)`.
//!
//! The coefficient of `x^m` equals `per(Z') / m!`, where `Z'` repeats column
//! `k` of `Z` exactly `m_k` times, so the permanent bounds transfer directly.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::exact::factorial;
use crate::matrix::ComplexMatrix;
use crate::permanent::{per_ryser_with, RyserOptions, DEFAULT_EXACT_CAP};
use crate::sympoly::{ln_binomial, ln_esym, ln_factorial, WeightVector};

/// Exponents `m_1..m_d` of a monomial `x^m`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExponentVector(Vec<usize>);

impl ExponentVector {
    pub fn new(m: Vec<usize>) -> Self {
        Self(m)
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total degree `sum_k m_k`.
    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    /// `m! = prod_k m_k!`.
    pub fn multi_factorial(&self) -> BigUint {
        self.0.iter().map(|&k| factorial(k as u32)).product()
    }

    pub fn ln_multi_factorial(&self) -> f64 {
        self.0.iter().map(|&k| ln_factorial(k)).sum()
    }

    /// The nondecreasing sequence with weight `m`: `0` repeated `m_0` times,
    /// then `1` repeated `m_1` times, and so on.
    pub fn canonical_sequence(&self) -> Vec<usize> {
        self.0.iter().enumerate().flat_map(|(k, &c)| std::iter::repeat_n(k, c)).collect()
    }

    fn check_degree(&self, n: usize, d: usize) -> Result<()> {
        if self.len() != d {
            return Err(Error::DimensionMismatch(format!("exponent has {} parts for {d} variables", self.len())));
        }
        if self.total() != n {
            return Err(Error::DegreeMismatch { total: self.total(), expected: n });
        }
        Ok(())
    }
}

/// All exponent vectors of `d` parts summing to `n`, in lexicographic order.
pub fn exponent_vectors(n: usize, d: usize) -> Vec<ExponentVector> {
    fn rec(rest: usize, parts: usize, cur: &mut Vec<usize>, out: &mut Vec<ExponentVector>) {
        if parts == 1 {
            cur.push(rest);
            out.push(ExponentVector(cur.clone()));
            cur.pop();
            return;
        }
        for first in 0..=rest {
            cur.push(first);
            rec(rest - first, parts - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if d > 0 {
        rec(n, d, &mut Vec::with_capacity(d), &mut out);
    }
    out
}

/// Complex coefficients keyed by exponent vector.
#[derive(Clone, Debug, PartialEq)]
pub struct SparsePolynomial {
    vars: usize,
    terms: BTreeMap<ExponentVector, Complex64>,
}

impl SparsePolynomial {
    pub fn one(vars: usize) -> Self {
        Self { vars, terms: BTreeMap::from([(ExponentVector(vec![0; vars]), Complex64::new(1.0, 0.0))]) }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn terms(&self) -> &BTreeMap<ExponentVector, Complex64> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `x^m`; zero when absent.
    pub fn coeff(&self, m: &ExponentVector) -> Complex64 {
        self.terms.get(m).copied().unwrap_or_default()
    }

    /// Multiplies by `sum_k a_k x_k`.
    pub fn mul_linear(&self, a: &[Complex64]) -> Self {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            for (k, &ak) in a.iter().enumerate() {
                let mut f = e.0.clone();
                f[k] += 1;
                *terms.entry(ExponentVector(f)).or_insert_with(Complex64::default) += c * ak;
            }
        }
        Self { vars: self.vars, terms }
    }
}

/// Number of monomials of degree `n` in `d` variables, `C(n+d-1, d-1)`.
pub fn monomial_count(n: usize, d: usize) -> u128 {
    if d == 0 {
        return u128::from(n == 0);
    }
    let (top, k) = ((n + d - 1) as u128, (d - 1).min(n) as u128);
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(top - i) / (i + 1))
}

/// Fully expands `prod_j (sum_k z_{j,k} x_k)`; refused when the monomial
/// count exceeds `budget`.
pub fn expand_product(z: &ComplexMatrix, budget: u128) -> Result<SparsePolynomial> {
    let (n, d) = (z.n_rows(), z.n_cols());
    let needed = monomial_count(n, d);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    Ok((0..n).fold(SparsePolynomial::one(d), |p, j| p.mul_linear(z.row(j))))
}

/// `per(Z') / m!` with `Z'` built from the canonical sequence of `m`.
pub fn coeff_via_permanent(z: &ComplexMatrix, m: &ExponentVector) -> Result<Complex64> {
    m.check_degree(z.n_rows(), z.n_cols())?;
    coeff_via_sequence(z, &m.canonical_sequence())
}

/// `per(Z[., t]) / weight(t)!` for an explicit column sequence `t`.
pub fn coeff_via_sequence(z: &ComplexMatrix, t: &[usize]) -> Result<Complex64> {
    let d = z.n_cols();
    if t.len() != z.n_rows() {
        return Err(Error::DegreeMismatch { total: t.len(), expected: z.n_rows() });
    }
    let mut weight = vec![0; d];
    for &k in t {
        if k >= d {
            return Err(Error::OutOfRange { index: k, size: d });
        }
        weight[k] += 1;
    }
    let zp = z.select_columns(t)?;
    let per = per_ryser_with(&zp, RyserOptions { cap: DEFAULT_EXACT_CAP, workers: Some(1) })?;
    let mf = ExponentVector(weight).multi_factorial().to_f64().unwrap_or(f64::INFINITY);
    Ok(per / mf)
}

pub fn ln_coeff_bound(z: &ComplexMatrix, m: &ExponentVector) -> Result<f64> {
    let n = z.n_rows();
    m.check_degree(n, z.n_cols())?;
    let mut acc = ln_factorial(n) - m.ln_multi_factorial();
    for (k, &mk) in m.parts().iter().enumerate() {
        if mk == 0 {
            continue;
        }
        let w = WeightVector::new((0..n).map(|j| z.norm_sqr(j, k)).collect())?;
        acc += 0.5 * (ln_esym(&w, mk)? - ln_binomial(n, mk));
    }
    Ok(acc)
}

/// `(n!/m!) prod_{m_k >= 1} ( e_{m_k}(|z_{.,k}|^2) / C(n, m_k) )^{1/2}`.
pub fn coeff_bound(z: &ComplexMatrix, m: &ExponentVector) -> Result<f64> {
    Ok(ln_coeff_bound(z, m)?.exp())
}

/// Number of sequences in `{1..d}^n` with weight `m`: `n! / m!`.
pub fn weight_count(n: usize, m: &ExponentVector) -> Result<BigUint> {
    if m.total() != n {
        return Err(Error::DegreeMismatch { total: m.total(), expected: n });
    }
    Ok(factorial(n as u32) / m.multi_factorial())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::{gaussian_complex, trial_rng};
    use crate::permanent::per_naive;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn ev(v: &[usize]) -> ExponentVector {
        ExponentVector::new(v.to_vec())
    }

    #[test]
    fn single_factor() {
        let z = ComplexMatrix::from_rows(&[vec![c(1.0, 2.0), c(3.0, 0.0), c(0.0, -1.0)]]).unwrap();
        let p = expand_product(&z, 1000).unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p.coeff(&ev(&[0, 1, 0])), c(3.0, 0.0));
        assert_eq!(p.coeff(&ev(&[0, 0, 1])), c(0.0, -1.0));
    }

    #[test]
    fn two_by_two_hand_expansion() {
        let (a, b, cc, d) = (c(1.0, 1.0), c(2.0, 0.0), c(0.0, 3.0), c(-1.0, 0.5));
        let z = ComplexMatrix::from_rows(&[vec![a, b], vec![cc, d]]).unwrap();
        let p = expand_product(&z, 1000).unwrap();
        assert_eq!(p.coeff(&ev(&[1, 1])), a * d + b * cc);
        assert!((coeff_via_permanent(&z, &ev(&[2, 0])).unwrap() - a * cc).norm() < 1e-15);
    }

    #[test]
    fn binomial_theorem() {
        let p = expand_product(&ComplexMatrix::ones(6, 2), 1000).unwrap();
        for m1 in 0..=6 {
            let expected = crate::subset::binomial_u64(6, m1) as f64;
            assert_eq!(p.coeff(&ev(&[m1, 6 - m1])), c(expected, 0.0));
        }
    }

    #[test]
    fn all_ones_exponent_is_permanent() {
        let z = gaussian_complex(&mut trial_rng(1, 0, 0), 5, 5);
        let direct = per_naive(&z).unwrap();
        assert!((coeff_via_permanent(&z, &ev(&[1; 5])).unwrap() - direct).norm() < 1e-12 * direct.norm());
    }

    #[test]
    fn sequence_choice_is_irrelevant() {
        let z = gaussian_complex(&mut trial_rng(2, 0, 0), 5, 3);
        let a = coeff_via_sequence(&z, &[0, 0, 1, 2, 2]).unwrap();
        let b = coeff_via_sequence(&z, &[2, 0, 1, 2, 0]).unwrap();
        assert!((a - b).norm() <= 1e-12 * a.norm());
    }

    #[test]
    fn degree_checked() {
        let z = ComplexMatrix::ones(3, 2);
        assert!(matches!(coeff_via_permanent(&z, &ev(&[1, 1])), Err(Error::DegreeMismatch { .. })));
        assert!(matches!(coeff_bound(&z, &ev(&[4, 0])), Err(Error::DegreeMismatch { .. })));
        assert!(weight_count(3, &ev(&[1, 1])).is_err());
    }

    #[test]
    fn bound_on_equality_family() {
        let mut rng = trial_rng(3, 0, 0);
        let xi: Vec<Complex64> = (0..4).map(|_| crate::ensemble::unit_phase(&mut rng)).collect();
        let y = [c(0.5, 1.0), c(-2.0, 0.1), c(0.3, 0.0)];
        let z = ComplexMatrix::from_fn(4, 3, |j, k| xi[j] * y[k]);
        for m in exponent_vectors(4, 3) {
            let coeff = coeff_via_permanent(&z, &m).unwrap().norm();
            let bound = coeff_bound(&z, &m).unwrap();
            assert!((coeff - bound).abs() <= 1e-12 * bound, "{m:?}");
        }
    }

    #[test]
    fn weight_counts() {
        assert_eq!(weight_count(3, &ev(&[2, 1])).unwrap(), BigUint::from(3u32));
        assert_eq!(weight_count(5, &ev(&[5, 0, 0])).unwrap(), BigUint::from(1u32));
        assert_eq!(weight_count(8, &ev(&[3, 3, 2])).unwrap(), BigUint::from(560u32));
        let total: BigUint = exponent_vectors(6, 3).iter().map(|m| weight_count(6, m).unwrap()).sum();
        assert_eq!(total, BigUint::from(729u32));
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(monomial_count(4, 3), 15);
        assert_eq!(exponent_vectors(4, 3).len(), 15);
        assert_eq!(monomial_count(0, 0), 1);
        let z = ComplexMatrix::ones(10, 6);
        assert!(matches!(expand_product(&z, 100), Err(Error::BudgetExceeded { .. })));
    }
}
