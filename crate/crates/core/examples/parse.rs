//! Text forms of functions and weights, and their error positions.

use pshlab::parse::{parse_function, parse_weight};

fn main() {
    for src in [
        "(mul affine -0.5 1 pow 0.3)",
        "powr 0.5 (mul affine 2 1 pow 0.3)",
        "powr 0.5 (add const 2 z)",
        "(blaschke 1 0.5i)",
    ] {
        match parse_function(src) {
            Ok(f) => println!("{src:<32} -> {f}  f(0.25) = {:.9}", f.eval(0.25)),
            Err(e) => println!("{src:<32} -> {e}"),
        }
    }
    for src in ["atom 0 1", "2 * radial 0.5 + atom 0.3i 0.5", "atom 0.5 0 1 +\nradial x"] {
        match parse_weight(src) {
            Ok(nu) => println!("{src:?} -> {nu} (mass {:.6})", nu.total_mass()),
            Err(e) => println!("{src:?} -> {e}"),
        }
    }
}
