//! Verification suites. `core` runs the fast structural checks at the
//! user's tolerance; `acceptance` runs the full criterion list with its
//! fixed tolerances.

use crate::error::{Error, Result};
use crate::factorize::{ball_probe, check_grid, deflate, isometry_apply, isometry_check, isometry_inverse};
use crate::functions::{AnalyticFunction, HarmonicFunction};
use crate::hardy::{
    classical_norm, demailly_functional, membership, weak_star_gap, weighted_norm_boundary, weighted_norm_interior,
    AbsPow, Hardy, Verdict, DEFAULT_R_GRID,
};
use crate::measures::{density_lower_bound, mu_u, RieszMeasure};
use crate::DiskPoint;
use num_complex::Complex64;
use rayon::prelude::*;
use statrs::function::gamma::gamma;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Core,
    Acceptance,
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "core" => Ok(Suite::Core),
            "acceptance" => Ok(Suite::Acceptance),
            _ => Err(Error::Config(format!("unknown suite `{s}` (use core or acceptance)"))),
        }
    }
}

/// Outcome of one check, tagged with the property it exercises.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub property: &'static str,
    pub ok: bool,
    pub detail: String,
}

type CheckFn = fn(f64) -> Result<(bool, String)>;

const CORE: &[(&str, &str, CheckFn)] = &[
    ("classical anchor", "classical-anchor", core_classical),
    ("norm routes agree", "norm-identity", core_routes),
    ("Lelong-Jensen monotone in r", "lelong-jensen-monotone", core_monotone),
    ("deflation preserves the norm", "deflation", core_deflation),
    ("isometry onto classical H^p", "isometry", core_isometry),
];

const ACCEPTANCE: &[(&str, &str, CheckFn)] = &[
    ("criterion 1", "classical-anchor", |_| criterion_1()),
    ("criterion 2", "norm-identity", |_| criterion_2()),
    ("criterion 3", "lelong-jensen-limit", |_| criterion_3()),
    ("criterion 4", "counterexample", |_| criterion_4()),
    ("criterion 5", "radial-limit", |_| criterion_5()),
    ("criterion 6", "density-properties", |_| criterion_6()),
    ("criterion 7", "weak-star", |_| criterion_7()),
    ("criterion 8", "deflation", |_| criterion_8()),
    ("criterion 9", "isometry", |_| criterion_9()),
    ("criterion 10", "ball-probe", |_| criterion_10()),
    ("criterion 11", "semicontinuity", |_| criterion_11()),
];

/// Runs the suite; checks run concurrently and come back in list order.
pub fn run_suite(suite: Suite, tol: f64) -> Vec<Check> {
    let list = match suite {
        Suite::Core => CORE,
        Suite::Acceptance => ACCEPTANCE,
    };
    list.par_iter()
        .map(|&(name, property, f)| {
            let (ok, detail) = f(tol).unwrap_or_else(|e| (false, format!("error: {e}")));
            Check {
                name,
                property,
                ok,
                detail,
            }
        })
        .collect()
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn fleet() -> Result<Vec<(&'static str, AnalyticFunction)>> {
    Ok(vec![
        ("z", AnalyticFunction::identity()),
        ("1+z", AnalyticFunction::affine(1.0, 1.0)),
        ("(1-z)^-0.2", AnalyticFunction::power_branch(0.2)?),
        ("z-0.5", AnalyticFunction::affine(-0.5, 1.0)),
    ])
}

fn atoms(locs: &[Complex64]) -> Result<RieszMeasure> {
    let mut nu = RieszMeasure::atom(locs[0], 1.0)?;
    for &a in &locs[1..] {
        nu = nu.sum(&RieszMeasure::atom(a, 1.0)?);
    }
    Ok(nu)
}

/// `||(1 - z)^{-a}||_{H^2}` from the Fourier coefficients.
fn power_branch_classical(a: f64) -> f64 {
    (gamma(1.0 - 2.0 * a) / gamma(1.0 - a).powi(2)).sqrt()
}

fn core_classical(tol: f64) -> Result<(bool, String)> {
    let nu = RieszMeasure::classical();
    let want = [1.0, 2f64.sqrt(), power_branch_classical(0.2), 1.25f64.sqrt()];
    let mut worst = 0.0f64;
    for ((_, f), w) in fleet()?.iter().zip(want) {
        let b = weighted_norm_boundary(f, 2.0, &nu)?.value();
        let i = weighted_norm_interior(f, 2.0, &nu)?.value();
        let k = classical_norm(f, 2.0)?.value();
        worst = worst.max(rel(b, w)).max(rel(i, w)).max(rel(k, w));
    }
    Ok((worst <= tol, format!("worst relative gap to closed forms {worst:.3e}")))
}

fn core_routes(tol: f64) -> Result<(bool, String)> {
    let weights = [atoms(&[c(0.5, 0.0)])?, atoms(&[c(0.3, 0.0), c(0.0, -0.4)])?];
    let mut worst = 0.0f64;
    for nu in &weights {
        for (_, f) in fleet()? {
            let b = weighted_norm_boundary(&f, 2.0, nu)?.value();
            let i = weighted_norm_interior(&f, 2.0, nu)?.value();
            worst = worst.max(rel(i, b));
        }
    }
    Ok((
        worst <= tol,
        format!("worst |boundary - interior| / boundary {worst:.3e}"),
    ))
}

fn monotone_over_grid(nu: &RieszMeasure, f: &AnalyticFunction) -> Result<(bool, Vec<f64>)> {
    let phi = AbsPow::new(f.clone(), 2.0);
    let vals = DEFAULT_R_GRID
        .iter()
        .map(|&r| demailly_functional(nu, r, &phi))
        .collect::<Result<Vec<_>>>()?;
    let ok = vals
        .windows(2)
        .all(|w| w[1].value >= w[0].value - 2.0 * (w[0].error_estimate + w[1].error_estimate));
    Ok((ok, vals.iter().map(|v| v.value).collect()))
}

fn core_monotone(_tol: f64) -> Result<(bool, String)> {
    let (a, va) = monotone_over_grid(&RieszMeasure::classical(), &AnalyticFunction::identity())?;
    let (b, vb) = monotone_over_grid(&atoms(&[c(0.5, 0.0)])?, &AnalyticFunction::affine(1.0, 1.0))?;
    Ok((
        a && b,
        format!(
            "delta_0 |z|^2: {:.6} -> {:.6}; delta_0.5 |1+z|^2: {:.6} -> {:.6}",
            va[0],
            va[va.len() - 1],
            vb[0],
            vb[vb.len() - 1]
        ),
    ))
}

fn core_deflation(tol: f64) -> Result<(bool, String)> {
    let nu = atoms(&[c(0.3, 0.0)])?;
    let f = AnalyticFunction::affine(-0.5, 1.0);
    let mut worst = 0.0f64;
    for p in [0.5, 1.0, 2.0] {
        worst = worst.max(deflate(&f, p, &nu)?.report.relative_gap);
    }
    Ok((
        worst <= tol,
        format!("z-0.5 under delta_0.3, p in {{0.5, 1, 2}}: worst gap {worst:.3e}"),
    ))
}

fn isometry_case(f: &AnalyticFunction, p: f64, nu: &RieszMeasure) -> Result<(f64, f64)> {
    let chk = isometry_check(f, p, nu)?;
    let back = isometry_inverse(&isometry_apply(f, p, nu)?, p, nu)?;
    let trip = check_grid(16)
        .iter()
        .map(|&z| (back.eval(z) - f.eval(z)).norm())
        .fold(0.0, f64::max);
    Ok((chk.relative_gap, trip))
}

fn core_isometry(tol: f64) -> Result<(bool, String)> {
    let nu = atoms(&[c(0.5, 0.0)])?;
    let (gap, trip) = isometry_case(&AnalyticFunction::affine(1.0, 1.0), 2.0, &nu)?;
    Ok((
        gap <= tol && trip <= 1e-10,
        format!("1+z under delta_0.5, p = 2: gap {gap:.3e}, round trip {trip:.1e}"),
    ))
}

fn criterion_1() -> Result<(bool, String)> {
    let nu = RieszMeasure::classical();
    let want = [1.0, 2f64.sqrt(), power_branch_classical(0.2), 1.25f64.sqrt()];
    let mut worst = 0.0f64;
    let mut anchored = true;
    for ((_, f), w) in fleet()?.iter().zip(want) {
        let b = weighted_norm_boundary(f, 2.0, &nu)?.value();
        let i = weighted_norm_interior(f, 2.0, &nu)?.value();
        let k = classical_norm(f, 2.0)?.value();
        worst = worst.max(rel(b, i)).max(rel(b, k)).max(rel(i, k));
        anchored &= rel(k, w) <= 1e-6;
    }
    Ok((
        worst <= 1e-6 && anchored,
        format!("worst pairwise relative gap {worst:.3e}; closed forms matched: {anchored}"),
    ))
}

fn criterion_2() -> Result<(bool, String)> {
    let weights = [
        atoms(&[c(0.5, 0.0)])?,
        atoms(&[c(0.3, 0.0), c(0.0, -0.4)])?,
        RieszMeasure::u_beta(0.5)?,
    ];
    let mut worst = 0.0f64;
    for nu in &weights {
        for (_, f) in fleet()? {
            let b = weighted_norm_boundary(&f, 2.0, nu)?;
            if b.is_divergent() {
                continue;
            }
            let i = weighted_norm_interior(&f, 2.0, nu)?;
            worst = worst.max(rel(i.value(), b.value()));
        }
    }
    Ok((
        worst <= 1e-3,
        format!("worst |boundary - interior| / boundary {worst:.3e}"),
    ))
}

fn criterion_3() -> Result<(bool, String)> {
    let cases = [
        (RieszMeasure::classical(), AnalyticFunction::identity()),
        (atoms(&[c(0.5, 0.0)])?, AnalyticFunction::identity()),
        (atoms(&[c(0.5, 0.0)])?, AnalyticFunction::affine(1.0, 1.0)),
    ];
    let mut monotone = true;
    let mut worst = 0.0f64;
    for (nu, f) in &cases {
        let (ok, vals) = monotone_over_grid(nu, f)?;
        monotone &= ok;
        let limit = weighted_norm_boundary(f, 2.0, nu)?.value().powi(2);
        worst = worst.max((vals[vals.len() - 1] - limit).abs());
    }
    Ok((
        monotone && worst <= 1e-3,
        format!("nondecreasing: {monotone}; worst gap to mu_u at r = -0.001 {worst:.3e} (tol 1e-3)"),
    ))
}

fn criterion_4() -> Result<(bool, String)> {
    let f = AnalyticFunction::power_branch(0.3)?;
    let nu = RieszMeasure::u_beta(0.5)?;
    let classical = classical_norm(&f, 2.0)?.value();
    let closed = power_branch_classical(0.3);
    let m = membership(&f, 2.0, &nu)?;
    let slope = m.fit.as_ref().map_or(f64::NAN, |s| s.slope);
    let ok = rel(classical, closed) <= 1e-4
        && m.verdict == Verdict::NonMember
        && (m.exponent - 1.1).abs() < 1e-12
        && (slope + 0.1).abs() <= 0.01;
    Ok((
        ok,
        format!(
            "classical {classical:.8} vs {closed:.8}; verdict {}; exponent {}; slope {slope:.5}",
            m.verdict, m.exponent
        ),
    ))
}

fn criterion_5() -> Result<(bool, String)> {
    let nu = RieszMeasure::u_beta(0.5)?;
    let mut pts = Vec::new();
    let mut ordered = true;
    let mut prev = f64::NEG_INFINITY;
    for k in 1..=4 {
        let eps = 10f64.powi(-k);
        let u = nu.evaluate_u(DiskPoint::from_boundary_distance(eps, 0.0))?;
        ordered &= u < 0.0 && u > prev;
        prev = u;
        pts.push((eps.ln(), (-u).ln()));
    }
    let slope = least_squares_slope(&pts);
    let c0 = (pts[0].1 - 0.4 * pts[0].0).exp();
    let bounded = pts.iter().all(|p| p.1.exp() <= c0 * (0.4 * p.0).exp() * (1.0 + 1e-12));
    Ok((
        ordered && bounded && rel(slope, 0.5) <= 0.15,
        format!("negative and increasing: {ordered}; bounded: {bounded}; exponent {slope:.4}"),
    ))
}

fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>()
}

fn criterion_6() -> Result<(bool, String)> {
    let nu = RieszMeasure::u_beta(0.5)?;
    let lb = density_lower_bound(&nu, 4096)?;
    let lb2 = density_lower_bound(&nu, 8192)?;
    let stable = lb > 0.0 && rel(lb, lb2) < 5e-4;
    let meta = nu.density().singular_angles();
    let sentinel = nu.boundary_density(0.0)? == f64::INFINITY && meta.len() == 1 && meta[0].behavior.exponent() == 0.5;
    let fubini = (mu_u(&nu, |_| 1.0, &[])?.value() - nu.total_mass()).abs();
    let slope = nu
        .density()
        .fit_asymptotics(&[1e-4, 1e-5, 1e-6, 1e-7, 1e-8])
        .map_or(f64::NAN, |f| -f.exponent);
    Ok((
        stable && sentinel && fubini <= 1e-8 && rel(slope, -0.5) <= 0.05,
        format!("min alpha {lb:.6} stable: {stable}; sentinel: {sentinel}; Fubini {fubini:.2e}; slope {slope:.4}"),
    ))
}

fn criterion_7() -> Result<(bool, String)> {
    let nu = atoms(&[c(0.5, 0.0)])?;
    let h = HarmonicFunction::real_part(AnalyticFunction::mobius(
        c(1.0, 0.0),
        c(0.0, 0.0),
        c(1.0, 0.0),
        c(-0.8, 0.0),
    )?);
    let phis = [
        HarmonicFunction::constant(1.0),
        HarmonicFunction::real_part(AnalyticFunction::identity()),
    ];
    let mut ok = true;
    let mut finals = Vec::new();
    for phi in &phis {
        let gaps = DEFAULT_R_GRID
            .iter()
            .map(|&r| weak_star_gap(&nu, &h, phi, r))
            .collect::<Result<Vec<_>>>()?;
        let decreasing = gaps
            .windows(2)
            .all(|w| w[1].gap < w[0].gap || w[1].gap <= w[1].error_estimate.max(1e-14));
        let last = gaps[gaps.len() - 1].gap;
        ok &= decreasing && last <= 1e-2;
        finals.push(format!("{last:.2e}"));
    }
    Ok((ok, format!("final gaps for phi = 1, Re z: {}", finals.join(", "))))
}

fn criterion_8() -> Result<(bool, String)> {
    let nu = atoms(&[c(0.3, 0.0)])?;
    let fs = [
        AnalyticFunction::affine(-0.5, 1.0),
        AnalyticFunction::affine(-0.5, 1.0).mul(&AnalyticFunction::affine(c(0.0, 0.5), 1.0)),
    ];
    let mut worst = 0.0f64;
    let mut nonvanishing = true;
    for f in &fs {
        for p in [0.5, 1.0, 2.0] {
            let d = deflate(f, p, &nu)?;
            worst = worst.max(d.report.relative_gap);
            nonvanishing &= check_grid(64).iter().all(|&z| d.g.eval(z).norm() > 0.0);
        }
    }
    Ok((
        worst <= 1e-3 && nonvanishing,
        format!("worst gap {worst:.3e}; g nonvanishing: {nonvanishing}"),
    ))
}

fn criterion_9() -> Result<(bool, String)> {
    let weights = [atoms(&[c(0.5, 0.0)])?, atoms(&[c(0.3, 0.0), c(0.0, -0.4)])?];
    let fs = [
        AnalyticFunction::constant(1.0),
        AnalyticFunction::affine(1.0, 1.0),
        AnalyticFunction::affine(-0.5, 1.0),
    ];
    let mut cases = Vec::new();
    for nu in &weights {
        for f in &fs {
            for p in [1.5, 2.0] {
                cases.push((nu, f, p));
            }
        }
    }
    let results = cases
        .par_iter()
        .map(|&(nu, f, p)| isometry_case(f, p, nu))
        .collect::<Result<Vec<_>>>()?;
    let gap = results.iter().map(|r| r.0).fold(0.0, f64::max);
    let trip = results.iter().map(|r| r.1).fold(0.0, f64::max);
    Ok((
        gap <= 1e-3 && trip <= 1e-10,
        format!("worst gap {gap:.3e}; worst round trip {trip:.1e}"),
    ))
}

fn criterion_10() -> Result<(bool, String)> {
    let ts = [0.9, 0.99, 0.999, 0.9999];
    let r = ball_probe(&AnalyticFunction::affine(0.5, 1.0), 2.0, &ts, 0.0)?;
    let increasing = r.rows.windows(2).all(|w| w[1].value > w[0].value);
    let approaching = 2.25 - r.rows[r.rows.len() - 1].value < 1e-3;
    let r2 = ball_probe(&AnalyticFunction::identity().scale(0.9), 2.0, &ts, 0.0)?;
    let ok = increasing && approaching && r.witness.is_some() && r2.within_unit_ball;
    Ok((
        ok,
        format!(
            "z+0.5 increasing to 2.25: {}; witness {:?}; 0.9z within ball: {}",
            increasing && approaching,
            r.witness,
            r2.within_unit_ball
        ),
    ))
}

/// `||(1 - z)^{-a}||^2_{H^2_{u_{1/2}}} = 2D (2 F - 1)` with
/// `F = 3F2(a, 1, 1; 1 - a, 3/2; 1)`, `D = Gamma(1 - 2a) / Gamma(1 - a)^2`;
/// the slowly converging series is extrapolated from three partial sums.
fn power_branch_weighted_sq(a: f64) -> f64 {
    let e0 = 0.5 - 2.0 * a;
    let base = 1usize << 16;
    let ks = [base, 2 * base, 4 * base];
    let mut sums = [0.0; 3];
    let (mut term, mut sum, mut k) = (1.0, 1.0, 0usize);
    for (slot, &kk) in sums.iter_mut().zip(&ks) {
        while k < kk {
            let x = k as f64;
            term *= (a + x) * (1.0 + x) / ((1.0 - a + x) * (1.5 + x));
            sum += term;
            k += 1;
        }
        *slot = sum;
    }
    let row = |kk: usize| [(kk as f64).powf(-e0), (kk as f64).powf(-e0 - 1.0)];
    let det = |a: [f64; 2], b: [f64; 2]| a[0] * b[1] - a[1] * b[0];
    let (r0, r1, r2) = (row(ks[0]), row(ks[1]), row(ks[2]));
    let f = (sums[0] * det(r1, r2) - sums[1] * det(r0, r2) + sums[2] * det(r0, r1))
        / (det(r1, r2) - det(r0, r2) + det(r0, r1));
    let d = gamma(1.0 - 2.0 * a) / gamma(1.0 - a).powi(2);
    2.0 * d * (2.0 * f - 1.0)
}

fn criterion_11() -> Result<(bool, String)> {
    let nu = RieszMeasure::u_beta(0.5)?;
    let full = weighted_norm_boundary(&AnalyticFunction::power_branch(0.2)?, 2.0, &nu)?.value();
    let exact = power_branch_weighted_sq(0.2).sqrt();
    let hardy = Hardy::default();
    let norms = [8usize, 32, 128]
        .iter()
        .map(|&n| {
            Ok(hardy
                .weighted_norm_boundary(&AnalyticFunction::power_branch_taylor(0.2, n)?, 2.0, &nu)?
                .value())
        })
        .collect::<Result<Vec<_>>>()?;
    let sup = norms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let bounded = norms.iter().all(|v| v.is_finite());
    let matches = rel(full, exact) < 1e-6;
    Ok((
        bounded && matches && full <= sup + 1e-3,
        format!(
            "||f_N|| = {:.6}, {:.6}, {:.6}; ||f|| = {full:.6} (closed form {exact:.6}); sup + 1e-3 = {:.6}",
            norms[0],
            norms[1],
            norms[2],
            sup + 1e-3
        ),
    ))
}
