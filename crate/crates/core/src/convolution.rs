//! Subset m-convolution of a product-form set function with a set function on
//! fixed-cardinality subsets, the mean-square inequality it satisfies, its
//! equality conditions, and the exact coefficient identities behind it.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fmt;

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{binomial_exact, binomial_int, ExactRational};
use crate::subset::{binomial_u64, iter_subsets, IndexSubset};
use crate::sympoly::WeightVector;

/// Default relative tolerance for [`classify_equality`].
pub const DEFAULT_EQUALITY_TOL: f64 = 1e-9;

/// Nonnegative values on all `k`-subsets of `{0..n-1}`, stored densely by
/// colexicographic rank.
#[derive(Clone, Debug, PartialEq)]
pub struct SetFunction {
    n: usize,
    k: usize,
    table: Vec<f64>,
}

impl SetFunction {
    pub fn new(n: usize, k: usize, table: Vec<f64>) -> Result<Self> {
        if k > n || n > 63 {
            return Err(Error::InvalidCardinality { n, k });
        }
        let expected = binomial_u64(n, k) as usize;
        if table.len() != expected {
            return Err(Error::DimensionMismatch(format!(
                "set function on {k}-subsets of {n} needs {expected} values, got {}",
                table.len()
            )));
        }
        if let Some(v) = table.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::InvalidWeight(format!("set function value {v}")));
        }
        Ok(Self { n, k, table })
    }

    pub fn from_fn(n: usize, k: usize, mut f: impl FnMut(IndexSubset) -> f64) -> Result<Self> {
        let table = iter_subsets(n, k)?.map(&mut f).collect();
        Self::new(n, k, table)
    }

    pub fn constant(n: usize, k: usize, value: f64) -> Result<Self> {
        Self::new(n, k, vec![value; binomial_u64(n, k) as usize])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cardinality(&self) -> usize {
        self.k
    }

    /// Value at `s`; `s` must have cardinality `k`.
    #[inline]
    pub fn get(&self, s: IndexSubset) -> f64 {
        debug_assert_eq!(s.len(), self.k);
        self.table[s.colex_rank()]
    }

    pub fn values(&self) -> &[f64] {
        &self.table
    }

    pub fn sum_of_squares(&self) -> f64 {
        self.table.iter().map(|v| v * v).sum()
    }
}

/// `g(I) = prod_{j in I} g_j` with nonnegative `g_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductSetFunction {
    weights: WeightVector,
}

impl ProductSetFunction {
    pub fn new(weights: WeightVector) -> Self {
        Self { weights }
    }

    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        Ok(Self::new(WeightVector::new(values)?))
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &WeightVector {
        &self.weights
    }

    #[inline]
    pub fn eval(&self, s: IndexSubset) -> f64 {
        let w = self.weights.values();
        s.iter().map(|j| w[j]).product()
    }
}

/// `(g *_m h)(J) = sum_{I ⊆ J, |I| = m} g(I) h(J \ I)`.
pub fn conv_m(g: &ProductSetFunction, h: &SetFunction, m: usize, j: IndexSubset) -> Result<f64> {
    check_shape(g, h, j.len(), m)?;
    if let Some(i) = j.iter().find(|&i| i >= g.n()) {
        return Err(Error::OutOfRange { index: i, size: g.n() });
    }
    Ok(conv_unchecked(g, h, m, j))
}

fn conv_unchecked(g: &ProductSetFunction, h: &SetFunction, m: usize, j: IndexSubset) -> f64 {
    j.subsets_of_size(m).map(|i| g.eval(i) * h.get(j.difference(i))).sum()
}

fn check_shape(g: &ProductSetFunction, h: &SetFunction, l: usize, m: usize) -> Result<()> {
    let n = g.n();
    if h.n() != n {
        return Err(Error::DimensionMismatch(format!("g has {n} weights but h lives on subsets of {}", h.n())));
    }
    if m > l || l > n {
        return Err(Error::InvalidCardinality { n, k: l });
    }
    if h.cardinality() != l - m {
        return Err(Error::CardinalityMismatch { rows: h.cardinality(), cols: l - m });
    }
    Ok(())
}

/// Both sides of the normalized mean-square inequality
/// `C(n,l)^-1 sum_J ((g *_m h)(J) / C(l,m))^2
///  <= (C(n,m)^-1 sum_I g(I)^2) (C(n,l-m)^-1 sum_K h(K)^2)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MasterReport {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
    pub slack: f64,
}

impl MasterReport {
    fn new(lhs: f64, rhs: f64) -> Self {
        Self { lhs, rhs, holds: lhs <= rhs * (1.0 + 1e-12), slack: rhs - lhs }
    }
}

pub fn master_inequality_check(
    g: &ProductSetFunction,
    h: &SetFunction,
    n: usize,
    l: usize,
    m: usize,
) -> Result<MasterReport> {
    if g.n() != n {
        return Err(Error::DimensionMismatch(format!("g has {} weights, expected {n}", g.n())));
    }
    check_shape(g, h, l, m)?;
    let norm_conv = binomial_u64(l, m) as f64;
    let lhs_sum = ordered_sum(n, l, |j| {
        let c = conv_unchecked(g, h, m, j) / norm_conv;
        c * c
    });
    let lhs = lhs_sum / binomial_u64(n, l) as f64;
    let g_sq: f64 = iter_subsets(n, m)?.map(|i| g.eval(i).powi(2)).sum();
    let rhs = (g_sq / binomial_u64(n, m) as f64) * (h.sum_of_squares() / binomial_u64(n, l - m) as f64);
    Ok(MasterReport::new(lhs, rhs))
}

/// Experimental: the same two sides with an arbitrary set function `g` on
/// `m`-subsets instead of a product form. Whether the inequality survives is
/// unknown, so this is a probe only.
pub fn probe_general_g(g: &SetFunction, h: &SetFunction, l: usize, m: usize) -> Result<MasterReport> {
    let n = g.n();
    if h.n() != n || g.cardinality() != m || h.cardinality() + m != l || l > n {
        return Err(Error::DimensionMismatch("general-g probe shape".into()));
    }
    let norm_conv = binomial_u64(l, m) as f64;
    let lhs_sum = ordered_sum(n, l, |j| {
        let c: f64 = j.subsets_of_size(m).map(|i| g.get(i) * h.get(j.difference(i))).sum::<f64>() / norm_conv;
        c * c
    });
    let lhs = lhs_sum / binomial_u64(n, l) as f64;
    let rhs = (g.sum_of_squares() / binomial_u64(n, m) as f64) * (h.sum_of_squares() / binomial_u64(n, l - m) as f64);
    Ok(MasterReport::new(lhs, rhs))
}

/// Sum of `f` over all `l`-subsets, added in subset order regardless of
/// whether the terms were computed in parallel.
fn ordered_sum(n: usize, l: usize, f: impl Fn(IndexSubset) -> f64 + Sync) -> f64 {
    let count = binomial_u64(n, l);
    let terms: Vec<f64> = if count >= 4096 {
        let subsets: Vec<IndexSubset> = iter_subsets(n, l).expect("valid shape").collect();
        subsets.par_iter().map(|&j| f(j)).collect()
    } else {
        iter_subsets(n, l).expect("valid shape").map(f).collect()
    };
    terms.iter().sum()
}

/// The five sufficient (and, per the theory, necessary) equality conditions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum EqualityCondition {
    /// `m = 0` or `m = l`.
    #[serde(rename = "i")]
    TrivialOrder,
    /// Fewer than `m` positive weights, so every `g(I)` vanishes.
    #[serde(rename = "ii")]
    FewPositiveWeights,
    /// `h` vanishes identically.
    #[serde(rename = "iii")]
    ZeroH,
    /// `l = n` and `g(I) = x h(complement of I)` for some `x >= 0`.
    #[serde(rename = "iv")]
    ProportionalComplement,
    /// All `g_j` equal and `h` constant.
    #[serde(rename = "v")]
    Constant,
}

impl EqualityCondition {
    pub fn label(self) -> &'static str {
        match self {
            EqualityCondition::TrivialOrder => "i",
            EqualityCondition::FewPositiveWeights => "ii",
            EqualityCondition::ZeroH => "iii",
            EqualityCondition::ProportionalComplement => "iv",
            EqualityCondition::Constant => "v",
        }
    }
}

impl fmt::Display for EqualityCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Which equality conditions hold, each tested within relative tolerance `tol`.
/// An empty set means none was detected.
pub fn classify_equality(
    g: &ProductSetFunction,
    h: &SetFunction,
    n: usize,
    l: usize,
    m: usize,
    tol: f64,
) -> BTreeSet<EqualityCondition> {
    let mut out = BTreeSet::new();
    if g.n() != n || check_shape(g, h, l, m).is_err() {
        return out;
    }
    if m == 0 || m == l {
        out.insert(EqualityCondition::TrivialOrder);
    }
    let gw = g.weights().values();
    let g_scale = gw.iter().cloned().fold(0.0, f64::max).max(1.0);
    let positive = gw.iter().filter(|&&v| v > tol * g_scale).count();
    if positive < m {
        out.insert(EqualityCondition::FewPositiveWeights);
    }
    let h_max = h.values().iter().cloned().fold(0.0, f64::max);
    let h_zero_tol = tol * h_max.max(1.0);
    if h_max <= tol {
        out.insert(EqualityCondition::ZeroH);
    }
    if l == n && proportional_to_complement(g, h, n, m, tol, h_zero_tol) {
        out.insert(EqualityCondition::ProportionalComplement);
    }
    let g_equal = gw.iter().all(|&v| approx_eq(v, gw[0], tol));
    let h_vals = h.values();
    let h_const = h_vals.iter().all(|&v| approx_eq(v, h_vals[0], tol));
    if g_equal && h_const {
        out.insert(EqualityCondition::Constant);
    }
    out
}

fn approx_eq(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

fn proportional_to_complement(g: &ProductSetFunction, h: &SetFunction, n: usize, m: usize, tol: f64, h_zero: f64) -> bool {
    let pairs: Vec<(f64, f64)> = iter_subsets(n, m)
        .expect("valid shape")
        .map(|i| (g.eval(i), h.get(i.complement())))
        .collect();
    let x = pairs.iter().find(|(_, hv)| *hv > h_zero).map(|(gv, hv)| gv / hv);
    let Some(x) = x else {
        // h vanishes, so g(I) = x * 0 requires g to vanish too
        let g_scale = pairs.iter().map(|p| p.0).fold(0.0, f64::max);
        return g_scale <= tol;
    };
    let scale = pairs.iter().map(|(gv, hv)| gv.max(x * hv)).fold(0.0, f64::max);
    pairs.iter().all(|(gv, hv)| (gv - x * hv).abs() <= tol * scale.max(f64::MIN_POSITIVE))
}

/// Exact coefficients `f(a, b)` and the constant `C(l, m, n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvCoefficients {
    pub l: u32,
    pub m: u32,
    pub n: u32,
    pub c: ExactRational,
    f: BTreeMap<(u32, u32), ExactRational>,
}

impl ConvCoefficients {
    /// `f(a, b)` for `a + b <= m`.
    pub fn f(&self, a: u32, b: u32) -> Option<&ExactRational> {
        self.f.get(&(a, b))
    }

    pub fn table(&self) -> &BTreeMap<(u32, u32), ExactRational> {
        &self.f
    }
}

fn b(n: i64, k: i64) -> ExactRational {
    binomial_int(n, k)
}

/// `C(l, m, n) = C(l, m) C(n - l + m, m) / C(n, m)`.
pub fn constant_c(l: u32, m: u32, n: u32) -> ExactRational {
    let (l, m, n) = (l as i64, m as i64, n as i64);
    b(l, m) * b(n - l + m, m) / b(n, m)
}

/// The alternate form `C(n, l) C(l, m)^2 / (C(n, m) C(n, l - m))`.
pub fn constant_c_alternate(l: u32, m: u32, n: u32) -> ExactRational {
    let (l, m, n) = (l as i64, m as i64, n as i64);
    let blm = b(l, m);
    b(n, l) * &blm * &blm / (b(n, m) * b(n, l - m))
}

/// `f(a, b) = C(n - l, m - a - b) C(l, b) / (C(m - a, b)^2 C(n, m - a))`.
pub fn coefficient_f(l: u32, m: u32, n: u32, a: u32, bb: u32) -> ExactRational {
    let (l, m, n, a, bb) = (l as i64, m as i64, n as i64, a as i64, bb as i64);
    let denom = b(m - a, bb);
    b(n - l, m - a - bb) * b(l, bb) / (&denom * &denom * b(n, m - a))
}

/// Builds the coefficient table and checks, exactly, the row identity
/// `sum_b f(a,b) C(m-a,b)^2 = 1`, the column identity summing to `C`, and the
/// alternate form of `C`. A failure means a bug in this module.
pub fn conv_coefficients(l: u32, m: u32, n: u32) -> Result<ConvCoefficients> {
    if m > l || l > n {
        return Err(Error::InvalidCardinality { n: n as usize, k: l as usize });
    }
    let c = constant_c(l, m, n);
    let mut f = BTreeMap::new();
    for a in 0..=m {
        for bb in 0..=m - a {
            let v = coefficient_f(l, m, n, a, bb);
            if v.is_negative() {
                return Err(Error::IdentityViolation(format!("f({a},{bb}) < 0 for (l,m,n)=({l},{m},{n})")));
            }
            f.insert((a, bb), v);
        }
    }
    let (li, mi, ni) = (l as i64, m as i64, n as i64);
    for a in 0..=m {
        let row: ExactRational = (0..=m - a)
            .map(|bb| {
                let w = b(mi - a as i64, bb as i64);
                &f[&(a, bb)] * &w * &w
            })
            .sum();
        if row != ExactRational::from_integer(1.into()) {
            return Err(Error::IdentityViolation(format!("row sum for a={a} is {row} at (l,m,n)=({l},{m},{n})")));
        }
    }
    for bb in 0..=m.min(l - m) {
        let lo = (2 * mi - li).max(0) as u32;
        let bi = bb as i64;
        let col: ExactRational = (lo..=m - bb)
            .map(|a| {
                let ai = a as i64;
                &f[&(a, bb)] * b(mi - bi, ai) * b(li - mi - bi, mi - ai - bi) * b(ni - li + bi, bi)
            })
            .sum();
        if col != c {
            return Err(Error::IdentityViolation(format!(
                "column sum for b={bb} is {col}, expected {c} at (l,m,n)=({l},{m},{n})"
            )));
        }
    }
    if n > 0 && constant_c_alternate(l, m, n) != c {
        return Err(Error::IdentityViolation(format!("alternate form of C disagrees at (l,m,n)=({l},{m},{n})")));
    }
    Ok(ConvCoefficients { l, m, n, c, f })
}

/// `f(a, b) > 0` exactly when `m - a - b <= n - l`.
pub fn f_positive_expected(l: u32, m: u32, n: u32, a: u32, bb: u32) -> bool {
    m - a - bb <= n - l
}

#[derive(Clone, Debug, PartialEq)]
pub struct PfaffReport {
    pub lhs: ExactRational,
    pub rhs: ExactRational,
    pub equal: bool,
}

/// `sum_{k=0}^{min(m,n)} C(x, m-k) C(y, n-k) C(x+y+k, k)` against
/// `C(x+n, m) C(y+m, n)`, in exact rationals.
pub fn pfaff_saalschutz_check(x: &ExactRational, y: &ExactRational, m: u32, n: u32) -> PfaffReport {
    let xy = x + y;
    let mut lhs = ExactRational::zero();
    for k in 0..=m.min(n) {
        let kk = ExactRational::from_integer(k.into());
        lhs += binomial_exact(x, m - k) * binomial_exact(y, n - k) * binomial_exact(&(&xy + &kk), k);
    }
    let rhs = binomial_exact(&(x + ExactRational::from_integer(n.into())), m)
        * binomial_exact(&(y + ExactRational::from_integer(m.into())), n);
    let equal = lhs == rhs;
    PfaffReport { lhs, rhs, equal }
}
