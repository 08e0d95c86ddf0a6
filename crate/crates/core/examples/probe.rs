//! Probing the unit ball of a union of weighted spaces with Green weights.

use pshlab::factorize::ball_probe;
use pshlab::parse::parse_function;

fn main() -> pshlab::Result<()> {
    let t = [0.1, 0.3, 0.5, 0.7, 0.9];
    for spec in ["affine 0.5 1", "scale 0.9 z"] {
        let rep = ball_probe(&parse_function(spec)?, 2.0, &t, 0.0)?;
        println!(
            "{spec}: max {:.6}, witness {:?}, within ball {}",
            rep.max_value, rep.witness, rep.within_unit_ball
        );
        for row in &rep.rows {
            println!("  t = {}: {:.12}", row.t, row.value);
        }
    }
    Ok(())
}
