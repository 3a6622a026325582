//! Sums of squared sub-permanents over all row subsets, and the one-step
//! Laplace refinement.

use permabound::bounds::{verify_step, verify_subsum, DEFAULT_BUDGET};
use permabound::ensemble::{gaussian_complex, random_partition, trial_rng};
use permabound::IndexSubset;

fn main() -> permabound::Result<()> {
    let n = 7;
    let mut rng = trial_rng(4, 0, 0);
    let z = gaussian_complex(&mut rng, n, n);
    let l = IndexSubset::from_indices(&[0, 2, 3, 5], n)?;
    for _ in 0..4 {
        let p = random_partition(&mut rng, l);
        let s = verify_subsum(&z, l, &p, DEFAULT_BUDGET)?;
        println!("blocks {:?}: {:.6} <= {:.6} ({})", p.sizes(), s.lhs, s.rhs, s.holds);
    }
    for m in [IndexSubset::from_indices(&[2], n)?, IndexSubset::from_indices(&[0, 5], n)?] {
        let s = verify_step(&z, l, m, DEFAULT_BUDGET)?;
        println!("step over {:?}: {:.6} <= {:.6} ({})", m.to_vec(), s.lhs, s.rhs, s.holds);
    }
    Ok(())
}
