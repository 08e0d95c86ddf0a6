//! Dividing out zeros keeps the weighted norm.

use num_complex::Complex64;
use pshlab::factorize::deflate;
use pshlab::functions::AnalyticFunction;
use pshlab::measures::RieszMeasure;

fn main() -> pshlab::Result<()> {
    let f = AnalyticFunction::affine(-0.5, 1.0).mul(&AnalyticFunction::affine(Complex64::new(0.0, -0.4), 1.0));
    let nu = RieszMeasure::atom(Complex64::new(0.3, 0.0), 1.0)?;
    for p in [0.5, 1.0, 2.0] {
        let d = deflate(&f, p, &nu)?;
        let r = &d.report;
        println!(
            "p = {p}: ||f|| = {:.12}, ||g|| = {:.12} ({}), gap {:.2e}, min |g| {:.4}",
            r.norm_f, r.norm_g, r.route, r.relative_gap, r.min_abs_g
        );
    }
    Ok(())
}
