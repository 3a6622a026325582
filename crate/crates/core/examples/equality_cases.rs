//! When does splitting columns {1,2},{3} beat the classic bound on 3x3
//! matrices? W is the gap of squared bounds divided by |h|^2.

use num_complex::Complex64;
use rand::Rng;

use permabound::bounds::{bound_classic, bound_partition};
use permabound::ensemble::{gaussian_complex, trial_rng};
use permabound::{ColumnPartition, ComplexMatrix, IndexSubset};

fn w(z: &ComplexMatrix, p: &ColumnPartition) -> f64 {
    let h: f64 = (0..3).map(|j| z.norm_sqr(j, 2)).sum();
    (bound_partition(z, p).unwrap().powi(2) - bound_classic(z).unwrap().powi(2)) / h
}

fn main() -> permabound::Result<()> {
    let p = ColumnPartition::consecutive(&[2, 1], IndexSubset::full(3))?;
    let mut rng = trial_rng(9, 0, 0);
    for _ in 0..3 {
        let b: Vec<f64> = (0..3).map(|_| rng.random_range(0.0..2.0)).collect();
        let twin = ComplexMatrix::from_fn(3, 3, |j, r| Complex64::new(if r < 2 { b[j] } else { 1.0 }, 0.0));
        let (u, v) = (rng.random_range(0.0..2.0), rng.random_range(0.0..2.0));
        let cst = ComplexMatrix::from_fn(3, 3, |_, r| Complex64::new([u, v, 1.0][r], 0.0));
        let g = gaussian_complex(&mut rng, 3, 3);
        println!("twin columns {:+.4}  constant columns {:+.4}  gaussian {:+.4}", w(&twin, &p), w(&cst, &p), w(&g, &p));
    }
    Ok(())
}
