//! Command-line front end. Each command is a plain library function returning
//! a serializable report; [`run`] parses arguments, renders the report and
//! maps errors to exit codes (0 ok, 1 verification failure, 2 usage or parse
//! error, 3 size or budget exceeded).

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{self, bound_report, BoundReport, DEFAULT_BUDGET};
use crate::convolution::{
    self, classify_equality, conv_coefficients, master_inequality_check, pfaff_saalschutz_check, probe_general_g,
    EqualityCondition, ProductSetFunction, SetFunction,
};
use crate::ensemble::{
    bernoulli01, block_constant_modulus, gaussian_complex, random_partition, random_subset, rank_one_phase, trial_rng,
    unit_phase, Ensemble,
};
use crate::error::{Error, Result};
use crate::exact::{integer, rational, ExactRational};
use crate::linforms::{coeff_bound, coeff_via_permanent, expand_product, exponent_vectors, ExponentVector};
use crate::matrix::ComplexMatrix;
use crate::partition::ColumnPartition;
use crate::permanent::{permanent, per_ryser, Algorithm};
use crate::subset::{binomial_u64, IndexSubset};

const TAG_VERIFY: u64 = 1;
const TAG_BENCH: u64 = 2;
const TAG_IDENTITIES: u64 = 3;

/// Monomial budget for the expansion cross-check in `coeff`.
const EXPANSION_BUDGET: u128 = 1 << 20;

#[derive(Parser, Debug)]
#[command(name = "permabound", version, about = "Exact permanents and Hadamard-type upper bounds")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = OutputFormat::Json, global = true)]
    pub output: OutputFormat,
    /// Largest n for which exact permanents are computed.
    #[arg(long, env = "PERMABOUND_EXACT_CAP", default_value_t = crate::permanent::DEFAULT_EXACT_CAP, global = true)]
    pub exact_cap: usize,
    #[arg(long, default_value_t = 1e-9, global = true)]
    pub tolerance: f64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Table,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AlgoArg {
    Ryser,
    Naive,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact permanent of a square matrix file (JSON or CSV, `-` for stdin).
    Per {
        matrix: PathBuf,
        #[arg(long, value_enum, default_value_t = AlgoArg::Ryser)]
        algo: AlgoArg,
    },
    /// All applicable upper bounds, with |per| and tightness when feasible.
    Bound {
        matrix: PathBuf,
        /// Consecutive block sizes, e.g. `1,1,2` for {1},{2},{3,4}.
        #[arg(long, conflicts_with = "blocks")]
        partition: Option<String>,
        /// Explicit 1-based column groups, e.g. `1,3|2|4`.
        #[arg(long)]
        blocks: Option<String>,
    },
    /// Randomized soundness sweep over every inequality.
    Verify {
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value = "gaussian-complex")]
        ensemble: String,
        /// Also probe the mean-square inequality with non-product g
        /// (reported only; never affects the exit code).
        #[arg(long)]
        general_g_probe: bool,
    },
    /// Coefficient of x^m in prod_j (sum_k z_jk x_k) and its bound.
    Coeff {
        matrix: PathBuf,
        #[arg(long)]
        exponent: String,
    },
    /// Exact-arithmetic sweep of the binomial coefficient identities.
    Identities {
        #[arg(long, default_value_t = 12)]
        max_n: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        random_pairs: u64,
        /// Print the coefficient table of a single shape `l,m,n`.
        #[arg(long)]
        case: Option<String>,
    },
    /// Bound tightness over a random ensemble.
    Bench {
        #[arg(long)]
        ensemble: String,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, conflicts_with = "blocks")]
        partition: Option<String>,
        #[arg(long)]
        blocks: Option<String>,
    },
}

/// Parses `--partition` (consecutive sizes) or `--blocks` (1-based groups)
/// over `n` columns.
pub fn parse_partition(sizes: Option<&str>, blocks: Option<&str>, n: usize) -> Result<Option<ColumnPartition>> {
    let full = IndexSubset::full(n);
    if let Some(s) = sizes {
        let sizes = parse_usize_list(s)?;
        if sizes.iter().sum::<usize>() != n {
            return Err(Error::InvalidPartition(format!("block sizes {s} do not sum to {n}")));
        }
        return ColumnPartition::consecutive(&sizes, full).map(Some);
    }
    if let Some(b) = blocks {
        let mut out = Vec::new();
        for group in b.split('|') {
            let cols = parse_usize_list(group)?;
            if cols.iter().any(|&c| c == 0 || c > n) {
                return Err(Error::InvalidPartition(format!("column in `{group}` outside 1..={n}")));
            }
            let zero_based: Vec<usize> = cols.iter().map(|c| c - 1).collect();
            out.push(IndexSubset::from_indices(&zero_based, n)?);
        }
        return ColumnPartition::covering(out, full).map(Some);
    }
    Ok(None)
}

fn parse_usize_list(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| Error::Parse(format!("expected a nonnegative integer, got `{t}`"))))
        .collect()
}

fn load_matrix(path: &Path) -> Result<ComplexMatrix> {
    if path.as_os_str() == "-" {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text)?;
        return ComplexMatrix::parse(&text);
    }
    ComplexMatrix::load(path)
}

/// Something a command can print.
pub trait Render: Serialize {
    fn table(&self) -> String;

    fn csv(&self) -> Option<String> {
        None
    }

    /// Whether the exit code should signal a failed check.
    fn failed(&self) -> bool {
        false
    }
}

pub fn render<R: Render>(report: &R, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => serde_json::to_string_pretty(report).expect("reports serialize") + "\n",
        OutputFormat::Table => report.table(),
        OutputFormat::Csv => report.csv().unwrap_or_else(|| report.table()),
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.6e}")).unwrap_or_else(|| "-".into())
}

// ---- per ----

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PerOutput {
    pub value_re: f64,
    pub value_im: f64,
    pub algorithm: Algorithm,
    pub n: usize,
    pub elapsed_ms: f64,
}

pub fn cmd_per(z: &ComplexMatrix, algorithm: Algorithm, exact_cap: usize) -> Result<PerOutput> {
    let start = Instant::now();
    let r = permanent(z, algorithm, exact_cap)?;
    Ok(PerOutput {
        value_re: r.value.re,
        value_im: r.value.im,
        algorithm: r.algorithm,
        n: r.n,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

impl Render for PerOutput {
    fn table(&self) -> String {
        format!(
            "n          {}\nalgorithm  {:?}\nvalue      {:?}{:+?}i\nelapsed_ms {:.3}\n",
            self.n, self.algorithm, self.value_re, self.value_im, self.elapsed_ms
        )
    }
}

// ---- bound ----

pub fn cmd_bound(z: &ComplexMatrix, partition: Option<&ColumnPartition>, exact_cap: usize, tol: f64) -> Result<BoundReport> {
    bound_report(z, partition, exact_cap, tol)
}

impl Render for BoundReport {
    fn table(&self) -> String {
        let mut s = format!("|per| = {}\n", opt(self.per_abs));
        s += &format!("{:<14} {:>14} {:>14} {:>12}  flags\n", "bound", "value", "log_value", "tightness");
        for b in &self.bounds {
            s += &format!(
                "{:<14} {:>14.6e} {:>14.6} {:>12}  {}\n",
                b.name,
                b.value,
                b.log_value,
                b.tightness.map(|t| format!("{t:.9}")).unwrap_or_else(|| "-".into()),
                b.equality_flags.join(",")
            );
        }
        s
    }
}

// ---- verify ----

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    pub ensemble: Ensemble,
    pub tolerance: f64,
    pub exact_cap: usize,
    pub general_g_probe: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            n: 6,
            trials: 100,
            seed: 42,
            ensemble: Ensemble::GaussianComplex,
            tolerance: 1e-9,
            exact_cap: crate::permanent::DEFAULT_EXACT_CAP,
            general_g_probe: false,
        }
    }
}

/// Worst case of one inequality `lhs <= rhs` over the sweep.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InequalityStat {
    pub name: String,
    pub checked: u64,
    pub violations: u64,
    /// Largest `lhs / rhs` seen (0 when every rhs vanished with lhs).
    pub worst_ratio: f64,
    /// Smallest relative slack `(rhs - lhs) / rhs`.
    pub worst_slack: f64,
}

/// A constructed equality case: tightness should be 1.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EqualityStat {
    pub name: String,
    pub checked: u64,
    pub failures: u64,
    pub min_tightness: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeStat {
    pub checked: u64,
    pub exceeded: u64,
    pub worst_ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    pub ensemble: Ensemble,
    pub tolerance: f64,
    pub inequalities: Vec<InequalityStat>,
    pub equalities: Vec<EqualityStat>,
    pub violations: u64,
    pub general_g_probe: Option<ProbeStat>,
}

#[derive(Default)]
struct TrialOutcome {
    sides: Vec<(&'static str, f64, f64)>,
    equal: Vec<(&'static str, f64, bool)>,
    probe: Option<(f64, f64)>,
}

fn random_weights<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n).map(|_| if rng.random_bool(0.1) { 0.0 } else { rng.random_range(0.0..2.0) }).collect()
}

fn random_h<R: Rng>(rng: &mut R, n: usize, k: usize) -> SetFunction {
    let count = binomial_u64(n, k) as usize;
    SetFunction::new(n, k, (0..count).map(|_| rng.random_range(0.0..1.0)).collect()).expect("valid shape")
}

fn verify_trial(cfg: &VerifyConfig, t: u64) -> Result<TrialOutcome> {
    let n = cfg.n;
    let mut rng = trial_rng(cfg.seed, TAG_VERIFY, t);
    let mut out = TrialOutcome::default();
    let full = IndexSubset::full(n);

    let p = random_partition(&mut rng, full);
    let z = cfg.ensemble.sample(&mut rng, n, &p);
    let per = per_ryser(&z)?.norm();
    out.sides.push(("classic", per, bounds::bound_classic(&z)?));
    out.sides.push(("partition", per, bounds::bound_partition(&z, &p)?));

    let zb = block_constant_modulus(&mut rng, n, &p);
    let reps: Vec<usize> = p.blocks().iter().map(|b| b.iter().next().expect("nonempty")).collect();
    let cor = bounds::bound_corollary(&zb, &p, &reps)?;
    out.sides.push(("corollary", per_ryser(&zb)?.norm(), cor));
    out.sides.push(("corollary_vs_classic", cor, bounds::bound_classic(&zb)?));

    let z01 = bernoulli01(&mut rng, n, n);
    out.sides.push(("bregman_minc", per_ryser(&z01)?.norm(), bounds::bound_bregman_minc(&z01)?));

    let l_size = rng.random_range(1..=n);
    let l = random_subset(&mut rng, n, l_size);
    let pl = random_partition(&mut rng, l);
    let sub = bounds::verify_subsum(&z, l, &pl, DEFAULT_BUDGET)?;
    out.sides.push(("subsum", sub.lhs, sub.rhs));
    let m_size = rng.random_range(1..=l_size);
    let members = l.to_vec();
    let picked: Vec<usize> = random_subset(&mut rng, l_size, m_size).iter().map(|i| members[i]).collect();
    let m = IndexSubset::from_indices(&picked, n)?;
    let step = bounds::bound_step(&z, l, m, DEFAULT_BUDGET)?;
    out.sides.push(("step", sub.lhs, step.rhs));

    let ml = rng.random_range(0..=n);
    let mm = rng.random_range(0..=ml);
    let g = ProductSetFunction::from_values(random_weights(&mut rng, n))?;
    let h = random_h(&mut rng, n, ml - mm);
    let r = master_inequality_check(&g, &h, n, ml, mm)?;
    out.sides.push(("master", r.lhs, r.rhs));

    let d = rng.random_range(1..=4usize);
    let zc = gaussian_complex(&mut rng, n, d);
    let exps = exponent_vectors(n, d);
    let mv = &exps[rng.random_range(0..exps.len())];
    out.sides.push(("coeff", coeff_via_permanent(&zc, mv)?.norm(), coeff_bound(&zc, mv)?));

    // constructed equality cases
    let zr = rank_one_phase(&mut rng, n, &p);
    out.equal.push(("partition_rank_one_phase", ratio(per_ryser(&zr)?.norm(), bounds::bound_partition(&zr, &p)?), true));

    let l0 = rng.random_range(0..=n);
    let g0 = ProductSetFunction::from_values(random_weights(&mut rng, n))?;
    let h0 = random_h(&mut rng, n, l0);
    let r0 = master_inequality_check(&g0, &h0, n, l0, 0)?;
    let flagged = classify_equality(&g0, &h0, n, l0, 0, cfg.tolerance).contains(&EqualityCondition::TrivialOrder);
    out.equal.push(("master_m0_condition_i", ratio(r0.lhs, r0.rhs), flagged));

    let xi: Vec<Complex64> = (0..n).map(|_| unit_phase(&mut rng)).collect();
    let y: Vec<Complex64> = (0..d).map(|_| unit_phase(&mut rng) * rng.random_range(0.2..2.0)).collect();
    let zy = ComplexMatrix::from_fn(n, d, |j, k| xi[j] * y[k]);
    out.equal.push(("coeff_rank_one", ratio(coeff_via_permanent(&zy, mv)?.norm(), coeff_bound(&zy, mv)?), true));

    if cfg.general_g_probe {
        let pl = rng.random_range(1..=n);
        let pm = rng.random_range(1..=pl);
        let gt = random_h(&mut rng, n, pm);
        let ht = random_h(&mut rng, n, pl - pm);
        let r = probe_general_g(&gt, &ht, pl, pm)?;
        out.probe = Some((r.lhs, r.rhs));
    }
    Ok(out)
}

fn ratio(lhs: f64, rhs: f64) -> f64 {
    if rhs == 0.0 {
        if lhs == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        lhs / rhs
    }
}

pub fn cmd_verify(cfg: &VerifyConfig) -> Result<VerifyReport> {
    if cfg.n == 0 || cfg.trials == 0 {
        return Err(Error::InvalidCardinality { n: cfg.n, k: cfg.trials as usize });
    }
    if cfg.n > cfg.exact_cap {
        return Err(Error::SizeExceeded { n: cfg.n, cap: cfg.exact_cap });
    }
    let outcomes: Vec<TrialOutcome> = (0..cfg.trials).into_par_iter().map(|t| verify_trial(cfg, t)).collect::<Result<_>>()?;

    let mut ineq: BTreeMap<&str, InequalityStat> = BTreeMap::new();
    let mut eq: BTreeMap<&str, EqualityStat> = BTreeMap::new();
    let mut probe = cfg.general_g_probe.then_some(ProbeStat { checked: 0, exceeded: 0, worst_ratio: 0.0 });
    for o in &outcomes {
        for &(name, lhs, rhs) in &o.sides {
            let s = ineq.entry(name).or_insert_with(|| InequalityStat {
                name: name.into(),
                checked: 0,
                violations: 0,
                worst_ratio: 0.0,
                worst_slack: f64::INFINITY,
            });
            s.checked += 1;
            if lhs > rhs * (1.0 + cfg.tolerance) {
                s.violations += 1;
            }
            let r = if rhs == 0.0 && lhs == 0.0 { 0.0 } else { ratio(lhs, rhs) };
            s.worst_ratio = s.worst_ratio.max(r);
            let slack = if rhs == 0.0 { if lhs == 0.0 { 0.0 } else { f64::NEG_INFINITY } } else { (rhs - lhs) / rhs };
            s.worst_slack = s.worst_slack.min(slack);
        }
        for &(name, tight, flagged) in &o.equal {
            let s = eq.entry(name).or_insert_with(|| EqualityStat {
                name: name.into(),
                checked: 0,
                failures: 0,
                min_tightness: f64::INFINITY,
            });
            s.checked += 1;
            if (tight - 1.0).abs() > 1e-10 || !flagged {
                s.failures += 1;
            }
            s.min_tightness = s.min_tightness.min(tight);
        }
        if let (Some(p), Some((lhs, rhs))) = (probe.as_mut(), o.probe) {
            p.checked += 1;
            if lhs > rhs * (1.0 + cfg.tolerance) {
                p.exceeded += 1;
            }
            p.worst_ratio = p.worst_ratio.max(ratio(lhs, rhs));
        }
    }
    let inequalities: Vec<InequalityStat> = ineq.into_values().collect();
    let equalities: Vec<EqualityStat> = eq.into_values().collect();
    let violations = inequalities.iter().map(|s| s.violations).sum::<u64>() + equalities.iter().map(|s| s.failures).sum::<u64>();
    Ok(VerifyReport {
        n: cfg.n,
        trials: cfg.trials,
        seed: cfg.seed,
        ensemble: cfg.ensemble,
        tolerance: cfg.tolerance,
        inequalities,
        equalities,
        violations,
        general_g_probe: probe,
    })
}

impl Render for VerifyReport {
    fn table(&self) -> String {
        let mut s = format!(
            "n={} trials={} seed={} ensemble={} violations={}\n",
            self.n, self.trials, self.seed, self.ensemble, self.violations
        );
        s += &format!("{:<24} {:>8} {:>10} {:>14} {:>14}\n", "inequality", "checked", "violations", "worst_ratio", "worst_slack");
        for i in &self.inequalities {
            s += &format!(
                "{:<24} {:>8} {:>10} {:>14.9} {:>14.3e}\n",
                i.name, i.checked, i.violations, i.worst_ratio, i.worst_slack
            );
        }
        s += &format!("{:<24} {:>8} {:>10} {:>14}\n", "equality case", "checked", "failures", "min_tightness");
        for e in &self.equalities {
            s += &format!("{:<24} {:>8} {:>10} {:>14.12}\n", e.name, e.checked, e.failures, e.min_tightness);
        }
        if let Some(p) = &self.general_g_probe {
            s += &format!(
                "general-g probe (experimental): checked={} exceeded={} worst_ratio={:.9}\n",
                p.checked, p.exceeded, p.worst_ratio
            );
        }
        s
    }

    fn failed(&self) -> bool {
        self.violations > 0
    }
}

// ---- coeff ----

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoeffOutput {
    pub coeff_re: f64,
    pub coeff_im: f64,
    pub bound: f64,
    /// `|coeff|` reaches the bound within the tolerance.
    pub tight: bool,
    pub expansion_re: Option<f64>,
    pub expansion_im: Option<f64>,
    pub expansion_agrees: Option<bool>,
}

pub fn parse_exponent(s: &str) -> Result<ExponentVector> {
    Ok(ExponentVector::new(parse_usize_list(s)?))
}

pub fn cmd_coeff(z: &ComplexMatrix, m: &ExponentVector, tol: f64) -> Result<CoeffOutput> {
    let coeff = coeff_via_permanent(z, m)?;
    let bound = coeff_bound(z, m)?;
    let tight = (bound - coeff.norm()).abs() <= tol.max(1e-12) * bound.max(f64::MIN_POSITIVE) || (bound == 0.0 && coeff.norm() == 0.0);
    let expansion = match expand_product(z, EXPANSION_BUDGET) {
        Ok(p) => Some(p.coeff(m)),
        Err(Error::BudgetExceeded { .. }) => None,
        Err(e) => return Err(e),
    };
    let agrees = expansion.map(|e| (e - coeff).norm() <= 1e-10 * (1.0 + coeff.norm().max(e.norm())));
    Ok(CoeffOutput {
        coeff_re: coeff.re,
        coeff_im: coeff.im,
        bound,
        tight,
        expansion_re: expansion.map(|e| e.re),
        expansion_im: expansion.map(|e| e.im),
        expansion_agrees: agrees,
    })
}

impl Render for CoeffOutput {
    fn table(&self) -> String {
        format!(
            "coeff      {:?}{:+?}i\nbound      {:?}\ntight      {}\nexpansion  {}\n",
            self.coeff_re,
            self.coeff_im,
            self.bound,
            self.tight,
            match (self.expansion_re, self.expansion_im, self.expansion_agrees) {
                (Some(re), Some(im), Some(ok)) => format!("{re:?}{im:+?}i (agrees: {ok})"),
                _ => "skipped (over budget)".into(),
            }
        )
    }

    fn failed(&self) -> bool {
        self.expansion_agrees == Some(false)
    }
}

// ---- identities ----

#[derive(Clone, Debug)]
pub struct IdentitiesConfig {
    pub max_n: u32,
    pub seed: u64,
    pub random_pairs: u64,
    pub pfaff_range: (i64, i64),
    pub pfaff_max_mn: u32,
    pub case: Option<(u32, u32, u32)>,
}

impl Default for IdentitiesConfig {
    fn default() -> Self {
        Self { max_n: 12, seed: 0, random_pairs: 100, pfaff_range: (-5, 10), pfaff_max_mn: 6, case: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoefficientEntry {
    pub a: u32,
    pub b: u32,
    pub f: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseReport {
    pub l: u32,
    pub m: u32,
    pub n: u32,
    pub c: String,
    pub f: Vec<CoefficientEntry>,
    pub row_sums: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentitiesReport {
    pub max_n: u32,
    pub shapes_checked: u64,
    pub identity_failures: Vec<String>,
    pub positivity_failures: Vec<String>,
    pub single_step_failures: Vec<String>,
    pub pfaff_checked: u64,
    pub pfaff_failures: Vec<String>,
    pub pass: bool,
    pub case: Option<CaseReport>,
}

pub fn cmd_identities(cfg: &IdentitiesConfig) -> Result<IdentitiesReport> {
    let shapes: Vec<(u32, u32, u32)> =
        (0..=cfg.max_n).flat_map(|n| (0..=n).flat_map(move |l| (0..=l).map(move |m| (l, m, n)))).collect();
    let results: Vec<(Option<String>, Vec<String>)> = shapes
        .par_iter()
        .map(|&(l, m, n)| match conv_coefficients(l, m, n) {
            Err(e) => (Some(e.to_string()), Vec::new()),
            Ok(cc) => {
                let bad = cc
                    .table()
                    .iter()
                    .filter(|((a, b), v)| {
                        let positive = num_traits::Signed::is_positive(*v);
                        positive != convolution::f_positive_expected(l, m, n, *a, *b)
                    })
                    .map(|((a, b), _)| format!("f({a},{b}) at (l,m,n)=({l},{m},{n})"))
                    .collect();
                (None, bad)
            }
        })
        .collect();
    let identity_failures: Vec<String> = results.iter().filter_map(|r| r.0.clone()).collect();
    let positivity_failures: Vec<String> = results.into_iter().flat_map(|r| r.1).collect();

    let mut single_step_failures = Vec::new();
    for n in 1..=cfg.max_n {
        for l in 1..=n {
            if convolution::constant_c(l, 1, n) != rational((l * (n - l + 1)) as i64, n as i64) {
                single_step_failures.push(format!("C({l},1,{n})"));
            }
        }
    }

    let mut pairs: Vec<(ExactRational, ExactRational)> = Vec::new();
    for x in cfg.pfaff_range.0..=cfg.pfaff_range.1 {
        for y in cfg.pfaff_range.0..=cfg.pfaff_range.1 {
            pairs.push((integer(x), integer(y)));
        }
    }
    for t in 0..cfg.random_pairs {
        let mut rng = trial_rng(cfg.seed, TAG_IDENTITIES, t);
        let mut q = || rational(rng.random_range(-60..=60), rng.random_range(1..=24));
        pairs.push((q(), q()));
    }
    let max_mn = cfg.pfaff_max_mn;
    let pfaff: Vec<Vec<String>> = pairs
        .par_iter()
        .map(|(x, y)| {
            let mut bad = Vec::new();
            for m in 0..=max_mn {
                for n in 0..=max_mn {
                    if !pfaff_saalschutz_check(x, y, m, n).equal {
                        bad.push(format!("x={x} y={y} m={m} n={n}"));
                    }
                }
            }
            bad
        })
        .collect();
    let pfaff_checked = pairs.len() as u64 * u64::from(max_mn + 1).pow(2);
    let pfaff_failures: Vec<String> = pfaff.into_iter().flatten().collect();

    let case = match cfg.case {
        None => None,
        Some((l, m, n)) => {
            let cc = conv_coefficients(l, m, n)?;
            let f = cc.table().iter().map(|(&(a, b), v)| CoefficientEntry { a, b, f: v.to_string() }).collect();
            let row_sums = (0..=m)
                .map(|a| {
                    (0..=m - a)
                        .map(|b| {
                            let w = crate::exact::binomial_int(i64::from(m - a), i64::from(b));
                            cc.f(a, b).expect("in table") * &w * &w
                        })
                        .sum::<ExactRational>()
                        .to_string()
                })
                .collect();
            Some(CaseReport { l, m, n, c: cc.c.to_string(), f, row_sums })
        }
    };

    let pass = identity_failures.is_empty()
        && positivity_failures.is_empty()
        && single_step_failures.is_empty()
        && pfaff_failures.is_empty();
    Ok(IdentitiesReport {
        max_n: cfg.max_n,
        shapes_checked: shapes.len() as u64,
        identity_failures,
        positivity_failures,
        single_step_failures,
        pfaff_checked,
        pfaff_failures,
        pass,
        case,
    })
}

impl Render for IdentitiesReport {
    fn table(&self) -> String {
        let mut s = format!(
            "shapes (l,m,n) with n <= {}: {} checked, {} identity failures, {} positivity failures\n",
            self.max_n,
            self.shapes_checked,
            self.identity_failures.len(),
            self.positivity_failures.len()
        );
        s += &format!("single-step constant failures: {}\n", self.single_step_failures.len());
        s += &format!("Pfaff-Saalschutz: {} checked, {} failures\n", self.pfaff_checked, self.pfaff_failures.len());
        for line in self.identity_failures.iter().chain(&self.positivity_failures).chain(&self.pfaff_failures) {
            s += &format!("  FAIL {line}\n");
        }
        if let Some(c) = &self.case {
            s += &format!("case (l,m,n)=({},{},{}): C = {}\n", c.l, c.m, c.n, c.c);
            for e in &c.f {
                s += &format!("  f({},{}) = {}\n", e.a, e.b, e.f);
            }
        }
        s += if self.pass { "PASS\n" } else { "FAIL\n" };
        s
    }

    fn failed(&self) -> bool {
        !self.pass
    }
}

// ---- bench ----

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub ensemble: Ensemble,
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    pub partition: ColumnPartition,
    pub exact_cap: usize,
}

impl BenchConfig {
    /// Default partition: one block of `n - 1` columns followed by a singleton.
    pub fn default_partition(n: usize) -> ColumnPartition {
        let sizes = if n >= 2 { vec![n - 1, 1] } else { vec![n] };
        ColumnPartition::consecutive(&sizes, IndexSubset::full(n)).expect("sizes sum to n")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRecord {
    pub trial: u64,
    pub ensemble: Ensemble,
    pub n: usize,
    pub per_abs: Option<f64>,
    pub classic: f64,
    pub partition: f64,
    pub corollary: Option<f64>,
    pub bregman_minc: Option<f64>,
    pub tightness_classic: Option<f64>,
    pub tightness_partition: Option<f64>,
    /// `partition^2 - classic^2`.
    pub gain: f64,
    /// Sign of `gain`, with `|gain| <= 1e-12 classic^2` counted as 0.
    pub w_sign: i8,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchSummary {
    pub trials: u64,
    pub partition_beats_classic: f64,
    pub w_negative: u64,
    pub w_zero: u64,
    pub w_positive: u64,
    pub max_tightness: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchReport {
    pub ensemble: Ensemble,
    pub n: usize,
    pub seed: u64,
    pub partition: Vec<Vec<usize>>,
    pub records: Vec<BenchRecord>,
    pub summary: BenchSummary,
}

fn bench_trial(cfg: &BenchConfig, t: u64) -> Result<BenchRecord> {
    let mut rng = trial_rng(cfg.seed, TAG_BENCH, t);
    let z = cfg.ensemble.sample(&mut rng, cfg.n, &cfg.partition);
    let per_abs = if cfg.n <= cfg.exact_cap { Some(per_ryser(&z)?.norm()) } else { None };
    let classic = bounds::bound_classic(&z)?;
    let partition = bounds::bound_partition(&z, &cfg.partition)?;
    let reps: Vec<usize> = cfg.partition.blocks().iter().map(|b| b.iter().next().expect("nonempty")).collect();
    let corollary = bounds::bound_corollary(&z, &cfg.partition, &reps).ok();
    let bregman_minc = if z.is_binary() { Some(bounds::bound_bregman_minc(&z)?) } else { None };
    let gain = partition * partition - classic * classic;
    let w_sign = if gain.abs() <= 1e-12 * classic * classic { 0 } else if gain < 0.0 { -1 } else { 1 };
    Ok(BenchRecord {
        trial: t,
        ensemble: cfg.ensemble,
        n: cfg.n,
        per_abs,
        classic,
        partition,
        corollary,
        bregman_minc,
        tightness_classic: per_abs.map(|p| ratio(p, classic)),
        tightness_partition: per_abs.map(|p| ratio(p, partition)),
        gain,
        w_sign,
    })
}

pub fn cmd_bench(cfg: &BenchConfig) -> Result<BenchReport> {
    if cfg.n == 0 {
        return Err(Error::InvalidCardinality { n: 0, k: 0 });
    }
    if cfg.partition.universe() != IndexSubset::full(cfg.n) {
        return Err(Error::InvalidPartition(format!("partition does not cover {} columns", cfg.n)));
    }
    let records: Vec<BenchRecord> = (0..cfg.trials).into_par_iter().map(|t| bench_trial(cfg, t)).collect::<Result<_>>()?;
    let count = |s: i8| records.iter().filter(|r| r.w_sign == s).count() as u64;
    let max_tightness = records
        .iter()
        .flat_map(|r| [r.tightness_classic, r.tightness_partition])
        .flatten()
        .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.max(v))));
    let summary = BenchSummary {
        trials: cfg.trials,
        partition_beats_classic: if records.is_empty() { 0.0 } else { count(-1) as f64 / records.len() as f64 },
        w_negative: count(-1),
        w_zero: count(0),
        w_positive: count(1),
        max_tightness,
    };
    Ok(BenchReport {
        ensemble: cfg.ensemble,
        n: cfg.n,
        seed: cfg.seed,
        partition: cfg.partition.blocks().iter().map(|b| b.iter().map(|c| c + 1).collect()).collect(),
        records,
        summary,
    })
}

impl Render for BenchReport {
    fn table(&self) -> String {
        let mut s = format!("ensemble={} n={} seed={}\n", self.ensemble, self.n, self.seed);
        s += &format!(
            "{:>6} {:>14} {:>14} {:>14} {:>12} {:>12} {:>3}\n",
            "trial", "|per|", "classic", "partition", "tight_cls", "tight_part", "W"
        );
        for r in &self.records {
            s += &format!(
                "{:>6} {:>14} {:>14.6e} {:>14.6e} {:>12} {:>12} {:>3}\n",
                r.trial,
                opt(r.per_abs),
                r.classic,
                r.partition,
                r.tightness_classic.map(|t| format!("{t:.6}")).unwrap_or_else(|| "-".into()),
                r.tightness_partition.map(|t| format!("{t:.6}")).unwrap_or_else(|| "-".into()),
                r.w_sign
            );
        }
        let m = &self.summary;
        s += &format!(
            "partition beats classic in {:.4} of trials (W<0: {}, W=0: {}, W>0: {})\n",
            m.partition_beats_classic, m.w_negative, m.w_zero, m.w_positive
        );
        s
    }

    fn csv(&self) -> Option<String> {
        let mut s = String::from(
            "trial,ensemble,n,per_abs,classic,partition,corollary,bregman_minc,tightness_classic,tightness_partition,gain,w_sign\n",
        );
        let f = |v: Option<f64>| v.map(|x| format!("{x:?}")).unwrap_or_default();
        for r in &self.records {
            s += &format!(
                "{},{},{},{},{:?},{:?},{},{},{},{},{:?},{}\n",
                r.trial,
                r.ensemble,
                r.n,
                f(r.per_abs),
                r.classic,
                r.partition,
                f(r.corollary),
                f(r.bregman_minc),
                f(r.tightness_classic),
                f(r.tightness_partition),
                r.gain,
                r.w_sign
            );
        }
        Some(s)
    }
}

// ---- dispatch ----

/// Runs one command and writes its report to `out`; returns the exit code.
pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let text_and_failed = |text: String, failed: bool, out: &mut dyn Write| -> Result<i32> {
        out.write_all(text.as_bytes())?;
        Ok(if failed { 1 } else { 0 })
    };
    match &cli.command {
        Command::Per { matrix, algo } => {
            let z = load_matrix(matrix)?;
            let alg = match algo {
                AlgoArg::Ryser => Algorithm::Ryser,
                AlgoArg::Naive => Algorithm::Naive,
            };
            let r = cmd_per(&z, alg, cli.exact_cap)?;
            text_and_failed(render(&r, cli.output), r.failed(), out)
        }
        Command::Bound { matrix, partition, blocks } => {
            let z = load_matrix(matrix)?;
            let n = z.square_size()?;
            let p = parse_partition(partition.as_deref(), blocks.as_deref(), n)?;
            let r = cmd_bound(&z, p.as_ref(), cli.exact_cap, cli.tolerance)?;
            text_and_failed(render(&r, cli.output), r.failed(), out)
        }
        Command::Verify { n, trials, seed, ensemble, general_g_probe } => {
            let cfg = VerifyConfig {
                n: *n,
                trials: *trials,
                seed: *seed,
                ensemble: ensemble.parse()?,
                tolerance: cli.tolerance,
                exact_cap: cli.exact_cap,
                general_g_probe: *general_g_probe,
            };
            let r = cmd_verify(&cfg)?;
            text_and_failed(render(&r, cli.output), r.failed(), out)
        }
        Command::Coeff { matrix, exponent } => {
            let z = load_matrix(matrix)?;
            let r = cmd_coeff(&z, &parse_exponent(exponent)?, cli.tolerance)?;
            text_and_failed(render(&r, cli.output), r.failed(), out)
        }
        Command::Identities { max_n, seed, random_pairs, case } => {
            let case = match case {
                None => None,
                Some(s) => match parse_usize_list(s)?.as_slice() {
                    &[l, m, n] => Some((l as u32, m as u32, n as u32)),
                    _ => return Err(Error::Parse(format!("--case expects l,m,n, got `{s}`"))),
                },
            };
            let cfg = IdentitiesConfig { max_n: *max_n, seed: *seed, random_pairs: *random_pairs, case, ..Default::default() };
            let r = cmd_identities(&cfg)?;
            text_and_failed(render(&r, cli.output), r.failed(), out)
        }
        Command::Bench { ensemble, n, trials, seed, partition, blocks } => {
            let ensemble: Ensemble = ensemble.parse()?;
            let p = parse_partition(partition.as_deref(), blocks.as_deref(), *n)?
                .unwrap_or_else(|| BenchConfig::default_partition(*n));
            let cfg = BenchConfig { ensemble, n: *n, trials: *trials, seed: *seed, partition: p, exact_cap: cli.exact_cap };
            let r = cmd_bench(&cfg)?;
            text_and_failed(render(&r, cli.output), r.failed(), out)
        }
    }
}

/// Parses `args`, executes, prints, and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match execute(&cli, &mut lock) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
