use num_complex::Complex64;
use proptest::prelude::*;
use pshlab::kernels::poisson;
use pshlab::measures::{mu_u, RieszMeasure};
use std::f64::consts::PI;

fn disk_point() -> impl Strategy<Value = Complex64> {
    (0.0..0.9f64, 0.0..2.0 * PI).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn atom_density_is_the_poisson_kernel(a in disk_point(), m in 0.1..3.0f64, theta in 0.0..2.0 * PI) {
        let nu = RieszMeasure::atom(a, m).unwrap();
        let got = nu.boundary_density(theta).unwrap();
        let want = m * poisson(a, theta).unwrap();
        prop_assert!((got - want).abs() <= 1e-12 * want, "{got} vs {want}");
    }

    #[test]
    fn density_integrates_to_total_mass(a in disk_point(), beta in 0.0..0.8f64, kappa in 0.2..2.0f64) {
        // int alpha dlambda = nu(D)
        let nu = RieszMeasure::atom(a, 1.0).unwrap().sum(&RieszMeasure::radial(beta, kappa, 1.0).unwrap());
        let total = mu_u(&nu, |_| 1.0, &[]).unwrap().value();
        let mass = 1.0 + kappa / (1.0 - beta);
        prop_assert!((nu.total_mass() - mass).abs() <= 1e-12 * mass);
        prop_assert!((total - mass).abs() <= 1e-6 * mass, "{total} vs {mass}");
    }

    #[test]
    fn density_is_linear_in_the_measure(
        a in disk_point(),
        beta in 0.0..0.8f64,
        c in 0.1..5.0f64,
        theta in 0.01..2.0 * PI - 0.01,
    ) {
        let n1 = RieszMeasure::atom(a, 0.7).unwrap();
        let n2 = RieszMeasure::u_beta(beta).unwrap();
        let sum = n1.sum(&n2).boundary_density(theta).unwrap();
        let parts = n1.boundary_density(theta).unwrap() + n2.boundary_density(theta).unwrap();
        prop_assert!((sum - parts).abs() <= 1e-9 * parts);
        let scaled = n2.scale(c).unwrap().boundary_density(theta).unwrap();
        let direct = c * n2.boundary_density(theta).unwrap();
        prop_assert!((scaled - direct).abs() <= 1e-9 * direct);
    }

    #[test]
    fn larger_measures_give_smaller_potentials(z in disk_point(), beta in 0.0..0.8f64, kappa in 0.1..2.0f64) {
        // G <= 0, so adding mass can only lower u
        let small = RieszMeasure::classical();
        let big = small.sum(&RieszMeasure::radial(beta, kappa, 1.0).unwrap());
        let (us, ub) = (small.evaluate_u(z).unwrap(), big.evaluate_u(z).unwrap());
        prop_assert!(ub <= us + 1e-12, "{ub} > {us}");
    }

    #[test]
    fn refining_the_grid_never_raises_the_lower_bound(a in disk_point(), k in 4u32..8) {
        let nu = RieszMeasure::atom(a, 1.0).unwrap().sum(&RieszMeasure::u_beta(0.3).unwrap());
        let d = nu.density();
        let n = 1usize << k;
        prop_assert!(d.lower_bound(2 * n).unwrap() <= d.lower_bound(n).unwrap());
    }
}

#[test]
fn classical_density_is_one() {
    let nu = RieszMeasure::classical();
    for k in 0..64 {
        let v = nu.boundary_density(2.0 * PI * k as f64 / 64.0).unwrap();
        assert!((v - 1.0).abs() <= 1e-15, "{v}");
    }
}

#[test]
fn potential_is_minus_infinity_at_an_atom() {
    let a = Complex64::new(0.3, -0.2);
    let nu = RieszMeasure::atom(a, 2.0).unwrap();
    assert_eq!(nu.evaluate_u(a).unwrap(), f64::NEG_INFINITY);
}

#[test]
fn radial_density_is_infinite_only_at_one() {
    let nu = RieszMeasure::u_beta(0.5).unwrap();
    assert_eq!(nu.boundary_density(0.0).unwrap(), f64::INFINITY);
    let near = nu.boundary_density(1e-9).unwrap();
    assert!(near.is_finite() && near > nu.boundary_density(1e-3).unwrap());
}

#[test]
fn radial_potential_at_the_origin_has_a_closed_form() {
    // u(0) = int_0^1 log(s) (1 - s)^{-1/2} ds = -sum 1 / (n (n + 1/2)) = -(4 - 4 log 2)
    let nu = RieszMeasure::u_beta(0.5).unwrap();
    let got = nu.evaluate_u(0.0).unwrap();
    let want = -(4.0 - 4.0 * 2f64.ln());
    assert!((got - want).abs() <= 1e-10 * want.abs(), "{got} vs {want}");
}
