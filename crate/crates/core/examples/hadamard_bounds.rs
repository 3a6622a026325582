//! Classic column-norm bound against partition bounds.

use permabound::ensemble::{gaussian_complex, trial_rng};
use permabound::partition::compositions;
use permabound::bounds::bound_report;
use permabound::{ColumnPartition, IndexSubset};

fn main() -> permabound::Result<()> {
    let n = 5;
    let z = gaussian_complex(&mut trial_rng(3, 0, 0), n, n);
    let report = bound_report(&z, None, 30, 1e-9)?;
    let per = report.per_abs.unwrap();
    let classic = report.get("classic").unwrap().value;
    println!("|per| = {per:.6}, classic = {classic:.6}");

    // every consecutive block layout, best first
    let mut rows = Vec::new();
    for sizes in compositions(n) {
        let p = ColumnPartition::consecutive(&sizes, IndexSubset::full(n))?;
        let b = permabound::bound_partition(&z, &p)?;
        rows.push((b, sizes));
    }
    rows.sort_by(|a, b| a.0.total_cmp(&b.0));
    for (b, sizes) in rows.iter().take(6) {
        println!("{sizes:?}: {b:.6}  tightness {:.4}", per / b);
    }
    println!("(singletons reproduce the classic bound; {} layouts in total)", rows.len());
    Ok(())
}
