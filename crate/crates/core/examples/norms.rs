//! Weighted norm of a function by the boundary and interior routes.

use pshlab::hardy::{membership, norm_report};
use pshlab::parse::{parse_function, parse_weight};

fn main() -> pshlab::Result<()> {
    let f = parse_function("(mul affine 1 0.5 pow 0.2)")?;
    let nu = parse_weight("atom 0.3 1 + radial 0.4")?;
    for p in [1.0, 2.0, 2.5, 3.0] {
        let m = membership(&f, p, &nu)?;
        if m.exponent >= 1.0 {
            println!("p = {p}: {}", m.summary());
            continue;
        }
        let rep = norm_report(&f, p, &nu)?;
        println!(
            "p = {p}: boundary {:.12}, interior {:.12}, classical {:.12}, gap {:.2e}",
            rep.boundary_value.value,
            rep.interior_value.map_or(f64::NAN, |q| q.value),
            rep.classical_value.map_or(f64::NAN, |q| q.value),
            rep.agreement_gap,
        );
    }
    Ok(())
}
