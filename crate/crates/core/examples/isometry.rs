//! Multiplying by the outer function maps the weighted space onto H^p.

use num_complex::Complex64;
use pshlab::factorize::{isometry_apply, isometry_check, isometry_inverse};
use pshlab::functions::AnalyticFunction;
use pshlab::measures::RieszMeasure;

fn main() -> pshlab::Result<()> {
    let f = AnalyticFunction::affine(1.0, 1.0);
    let nu = RieszMeasure::atom(Complex64::new(0.5, 0.0), 1.0)?;
    for p in [0.5, 1.0, 2.0, 4.0] {
        let c = isometry_check(&f, p, &nu)?;
        let back = isometry_inverse(&isometry_apply(&f, p, &nu)?, p, &nu)?;
        let z = Complex64::new(0.2, -0.3);
        println!(
            "p = {p}: weighted {:.12}, image {:.12}, gap {:.2e}, round trip {:.1e}",
            c.weighted,
            c.classical_image,
            c.relative_gap,
            (back.eval(z) - f.eval(z)).norm()
        );
    }
    Ok(())
}
