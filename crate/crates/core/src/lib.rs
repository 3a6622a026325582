//! Exact matrix permanents and certified Hadamard-type upper bounds.
//!
//! The crate computes `per(Z)` exactly (naive oracle and Gray-code Ryser),
//! evaluates a family of upper bounds built from column and block-averaged row
//! statistics, checks the binomial identities behind them in exact rational
//! arithmetic, and applies the bounds to coefficients of products of linear
//! forms. See `examples/` for one runnable program per capability.

pub mod bounds;
pub mod cli;
pub mod convolution;
pub mod ensemble;
pub mod error;
pub mod exact;
pub mod linforms;
pub mod matrix;
pub mod partition;
pub mod permanent;
pub mod subset;
pub mod sympoly;

pub use bounds::{
    bound_bregman_minc, bound_classic, bound_corollary, bound_partition, bound_step, bound_subsum,
    check_phase_factorizable, classify_partition_equality, column_norm_product, BoundReport, PartitionEquality,
};
pub use convolution::{
    classify_equality, conv_coefficients, conv_m, master_inequality_check, pfaff_saalschutz_check,
    EqualityCondition, ProductSetFunction, SetFunction,
};
pub use ensemble::{trial_rng, Ensemble};
pub use error::{Error, Result};
pub use exact::ExactRational;
pub use linforms::{coeff_bound, coeff_via_permanent, expand_product, weight_count, ExponentVector, SparsePolynomial};
pub use matrix::ComplexMatrix;
pub use partition::ColumnPartition;
pub use permanent::{laplace_expand, per_naive, per_ryser, per_sub};
pub use subset::IndexSubset;
pub use sympoly::{esym, maclaurin_mean, WeightVector};
