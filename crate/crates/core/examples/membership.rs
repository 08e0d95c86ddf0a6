//! A function in classical H^2 that leaves the weighted space.

use pshlab::functions::AnalyticFunction;
use pshlab::hardy::{classical_norm, membership};
use pshlab::measures::RieszMeasure;

fn main() -> pshlab::Result<()> {
    let f = AnalyticFunction::power_branch(0.3)?;
    println!("||f||_2 classical = {:.8}", classical_norm(&f, 2.0)?.value());
    for beta in [0.2, 0.39, 0.5] {
        let m = membership(&f, 2.0, &RieszMeasure::u_beta(beta)?)?;
        println!("beta = {beta}: {}", m.summary());
        if let Some(fit) = &m.fit {
            println!("  shell mass slope {:.5} (predicted {:.5})", fit.slope, fit.predicted);
        }
    }
    Ok(())
}
