//! The outer function whose boundary modulus is the density.

use num_complex::Complex64;
use pshlab::factorize::{outer_eval, OuterFunction};
use pshlab::measures::RieszMeasure;

fn main() -> pshlab::Result<()> {
    let a = Complex64::new(0.4, -0.3);
    let nu = RieszMeasure::atom(a, 2.0)?;
    let outer = OuterFunction::from_measure(&nu)?;
    println!(
        "geometric mean {:.12} (exact {:.12})",
        outer.geometric_mean()?,
        2.0 * (1.0 - a.norm_sqr())
    );
    println!("grid lower bound of alpha {:.6}", outer.lower_bound());
    for z in [
        Complex64::new(0.0, 0.0),
        Complex64::new(0.5, 0.5),
        Complex64::new(-0.9, 0.0),
    ] {
        println!("A({z}) = {:.9}", outer_eval(&outer, z)?);
    }
    let theta = 1.0;
    println!(
        "log |A*({theta})| = {:.12}, log alpha({theta}) = {:.12}",
        outer.boundary_log(theta).re,
        nu.boundary_density(theta)?.ln()
    );
    Ok(())
}
