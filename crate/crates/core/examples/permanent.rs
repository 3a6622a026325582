//! Permanents by brute force and by Ryser's formula.

use std::time::Instant;

use permabound::ensemble::{gaussian_complex, trial_rng};
use permabound::permanent::{per_naive, per_ryser, per_ryser_with, RyserOptions};
use permabound::ComplexMatrix;

fn main() -> permabound::Result<()> {
    for n in 1..=6 {
        let ones = ComplexMatrix::ones(n, n);
        println!("per(J_{n}) = {}", per_ryser(&ones)?.re);
    }

    let z = gaussian_complex(&mut trial_rng(1, 0, 0), 7, 7);
    let a = per_naive(&z)?;
    let b = per_ryser(&z)?;
    println!("random 7x7: naive {a:.6}, ryser {b:.6}, |diff| {:.2e}", (a - b).norm());

    let z = gaussian_complex(&mut trial_rng(1, 0, 1), 20, 20);
    let t = Instant::now();
    let single = per_ryser_with(&z, RyserOptions { workers: Some(1), ..Default::default() })?;
    let t1 = t.elapsed();
    let t = Instant::now();
    let pooled = per_ryser(&z)?;
    println!("20x20: {single:.6e} in {t1:?} on one thread, {:?} on the pool, identical: {}", t.elapsed(), single == pooled);
    Ok(())
}
