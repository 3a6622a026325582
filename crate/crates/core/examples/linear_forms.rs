//! Coefficients of a product of linear forms.

use permabound::ensemble::{gaussian_complex, trial_rng};
use permabound::linforms::{coeff_bound, coeff_via_permanent, expand_product, weight_count, ExponentVector};

fn main() -> permabound::Result<()> {
    let z = gaussian_complex(&mut trial_rng(6, 0, 0), 4, 3);
    let poly = expand_product(&z, 1 << 20)?;
    println!("{} monomials of degree 4 in 3 variables", poly.len());
    for (m, c) in poly.terms() {
        let via_per = coeff_via_permanent(&z, m)?;
        let bound = coeff_bound(&z, m)?;
        println!(
            "{:?}: {:.5}  |diff| {:.1e}  |c|/bound {:.4}  ({} weights)",
            m.parts(),
            c,
            (c - via_per).norm(),
            c.norm() / bound,
            weight_count(4, m)?
        );
    }
    let m = ExponentVector::new(vec![2, 2, 0]);
    println!("x1^2 x2^2 coefficient {:.5}", poly.coeff(&m));
    Ok(())
}
