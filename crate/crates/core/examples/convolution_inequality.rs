//! Product-form set functions convolved against arbitrary ones.

use rand::Rng;

use permabound::convolution::{classify_equality, master_inequality_check, ProductSetFunction, SetFunction};
use permabound::ensemble::trial_rng;

fn main() -> permabound::Result<()> {
    let (n, l, m) = (7, 4, 2);
    let mut rng = trial_rng(5, 0, 0);
    let g = ProductSetFunction::from_values((0..n).map(|_| rng.random_range(0.0..2.0)).collect())?;
    let h = SetFunction::from_fn(n, l - m, |_| rng.random_range(0.0..1.0))?;
    let r = master_inequality_check(&g, &h, n, l, m)?;
    println!("random: lhs {:.6} rhs {:.6} holds {} slack {:.3e}", r.lhs, r.rhs, r.holds, r.slack);

    // equal weights and constant h sit on the boundary
    let g = ProductSetFunction::from_values(vec![1.5; n])?;
    let h = SetFunction::constant(n, l - m, 0.7)?;
    let r = master_inequality_check(&g, &h, n, l, m)?;
    let why: Vec<_> = classify_equality(&g, &h, n, l, m, 1e-9).into_iter().map(|c| c.label()).collect();
    println!("constant: lhs {:.6} rhs {:.6}, conditions {why:?}", r.lhs, r.rhs);
    Ok(())
}
