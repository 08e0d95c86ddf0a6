//! Sublevel functionals increasing towards the boundary measure.

use num_complex::Complex64;
use pshlab::functions::AnalyticFunction;
use pshlab::hardy::{demailly_functional, AbsPow, Hardy};
use pshlab::measures::RieszMeasure;

fn main() -> pshlab::Result<()> {
    let nu = RieszMeasure::atom(Complex64::new(0.5, 0.0), 1.0)?;
    let phi = AbsPow::new(AnalyticFunction::affine(1.0, 1.0), 2.0);
    let limit = Hardy::default().boundary_functional(&nu, &phi)?.value();
    println!("mu_u(|1+z|^2) = {limit:.9}");
    for r in [-1.0, -0.3, -0.1, -0.03, -0.01, -0.003, -0.001] {
        let v = demailly_functional(&nu, r, &phi)?.value;
        println!("r = {r:>7}: {v:.9}  gap {:.3e}", limit - v);
    }
    Ok(())
}
