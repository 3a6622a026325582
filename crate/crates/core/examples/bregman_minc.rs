//! The row-sum bound for 0/1 matrices.

use permabound::bounds::{bound_bregman_minc, EtaTable};
use permabound::ensemble::{bernoulli01, trial_rng};
use permabound::permanent::per_ryser;

fn main() -> permabound::Result<()> {
    let eta = EtaTable::new(8);
    for k in 1..=8 {
        println!("(k!)^(1/k) for k={k}: {:.6}", eta.eta(k));
    }
    for t in 0..6 {
        let z = bernoulli01(&mut trial_rng(7, 0, t), 8, 8);
        let per = per_ryser(&z)?.re;
        let b = bound_bregman_minc(&z)?;
        println!("trial {t}: per {per:>6} bound {b:>10.3}");
    }
    Ok(())
}
