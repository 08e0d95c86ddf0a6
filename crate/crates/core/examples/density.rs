//! Boundary density of a mixed weight: an atom plus a radial exhaustion.

use num_complex::Complex64;
use pshlab::measures::RieszMeasure;
use std::f64::consts::PI;

fn main() -> pshlab::Result<()> {
    let nu = RieszMeasure::atom(Complex64::new(0.6, 0.2), 1.0)?.sum(&RieszMeasure::u_beta(0.5)?);
    let alpha = nu.density();
    println!("nu(D) = {:.6}", nu.total_mass());
    for k in 0..8 {
        let theta = 2.0 * PI * k as f64 / 8.0;
        println!("alpha({theta:.4}) = {:.6}", alpha.value(theta));
    }
    for n in [512, 1024, 2048, 4096] {
        println!("min alpha on {n} angles: {:.6}", alpha.lower_bound(n)?);
    }
    if let Some(fit) = alpha.fit_asymptotics(&[1e-4, 3e-4, 1e-3, 3e-3]) {
        println!(
            "alpha ~ {:.4} |theta|^-{:.4} near theta = {}",
            fit.constant, fit.exponent, fit.angle
        );
    }
    Ok(())
}
