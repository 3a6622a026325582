//! Exact coefficient tables behind the convolution inequality.

use permabound::convolution::{conv_coefficients, constant_c, constant_c_alternate, pfaff_saalschutz_check};
use permabound::exact::rational;

fn main() -> permabound::Result<()> {
    let (l, m, n) = (3, 2, 6);
    let t = conv_coefficients(l, m, n)?;
    println!("C({l},{m},{n}) = {} (alternate form {})", t.c, constant_c_alternate(l, m, n));
    for ((a, b), f) in t.table() {
        println!("  f({a},{b}) = {f}");
    }
    println!("C(2,1,4) = {}", constant_c(2, 1, 4));

    let r = pfaff_saalschutz_check(&rational(1, 3), &rational(-5, 2), 3, 4);
    println!("Pfaff-Saalschutz at x=1/3, y=-5/2: {} = {} ({})", r.lhs, r.rhs, r.equal);
    Ok(())
}
