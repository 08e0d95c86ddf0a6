//! Weak-star convergence of the sublevel measures against harmonic data.

use pshlab::functions::{AnalyticFunction, HarmonicFunction};
use pshlab::hardy::weak_star_gap;
use pshlab::measures::RieszMeasure;

fn main() -> pshlab::Result<()> {
    let nu = RieszMeasure::u_beta(0.3)?;
    let h = HarmonicFunction::real_part(AnalyticFunction::affine(1.0, 0.5));
    for (name, phi) in [
        ("1", HarmonicFunction::constant(1.0)),
        ("Re z", HarmonicFunction::real_part(AnalyticFunction::identity())),
    ] {
        for r in [-0.3, -0.1, -0.03, -0.01] {
            let g = weak_star_gap(&nu, &h, &phi, r)?;
            println!(
                "phi = {name}, r = {r}: level {:.9}, limit {:.9}, gap {:.3e}",
                g.level, g.limit, g.gap
            );
        }
    }
    Ok(())
}
