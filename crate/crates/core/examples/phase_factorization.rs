//! Matrices whose phases split as row phase times column phase.

use permabound::bounds::{bound_partition, check_phase_factorizable, classify_partition_equality};
use permabound::ensemble::{gaussian_complex, random_partition, rank_one_phase, trial_rng};
use permabound::permanent::per_ryser;
use permabound::IndexSubset;

fn main() -> permabound::Result<()> {
    let n = 5;
    let mut rng = trial_rng(8, 0, 0);
    let p = random_partition(&mut rng, IndexSubset::full(n));
    let z = rank_one_phase(&mut rng, n, &p);
    let f = check_phase_factorizable(&z, 1e-9)?;
    println!("blocks {:?}, factorizable {}", p.sizes(), f.factorizable);
    println!("|per| {:.9} bound {:.9}", per_ryser(&z)?.norm(), bound_partition(&z, &p)?);
    println!("detected: {:?}", classify_partition_equality(&z, &p, 1e-9));

    let g = gaussian_complex(&mut rng, n, n);
    println!("gaussian factorizable: {}", check_phase_factorizable(&g, 1e-9)?.factorizable);
    Ok(())
}
