//! Poisson, Green and Herglotz kernels of the unit disk and single Blaschke
//! factors.
//!
//! Everything in the crate uses one normalization: boundary integrals are
//! taken against `dlambda = dtheta / 2 pi`, and the Laplacian is scaled so
//! that `Delta log|z - a|` is the unit point mass at `a`. The scaled
//! Laplacian of a function is therefore its classical Laplacian divided by
//! `2 pi`, as a density against area measure.

use crate::error::{Error, Result};
use crate::point::DiskPoint;
use num_complex::Complex64;
use std::f64::consts::PI;

/// The fixed normalization record.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Normalization {
    /// `lambda` is the probability measure `dtheta / 2 pi`.
    pub lambda_is_normalized: bool,
    /// Factor turning the classical Laplacian into the scaled one.
    pub laplacian_scale: f64,
}

pub const NORMALIZATION: Normalization = Normalization {
    lambda_is_normalized: true,
    laplacian_scale: 1.0 / (2.0 * PI),
};

fn check_interior(p: &DiskPoint, what: &str) -> Result<()> {
    if p.is_interior() {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "{what}: point {} is not in the open unit disk",
            p.z()
        )))
    }
}

/// `P(z, e^{i theta}) = (1 - |z|^2) / |e^{i theta} - z|^2`.
pub fn poisson(z: impl Into<DiskPoint>, theta: f64) -> Result<f64> {
    let p = z.into();
    check_interior(&p, "poisson")?;
    Ok(poisson_at(&p, theta))
}

#[inline]
pub(crate) fn poisson_at(p: &DiskPoint, theta: f64) -> f64 {
    p.one_minus_abs2() / p.from_unit(theta).norm_sqr()
}

/// `G(z, w) = log |(z - w) / (1 - conj(w) z)|`; `-inf` when `z = w`.
pub fn green(z: impl Into<DiskPoint>, w: impl Into<DiskPoint>) -> Result<f64> {
    let (p, q) = (z.into(), w.into());
    check_interior(&p, "green")?;
    check_interior(&q, "green")?;
    Ok(green_at(&p, &q))
}

/// Uses `|1 - conj(w) z|^2 = |z - w|^2 + (1 - |z|^2)(1 - |w|^2)`, which
/// turns the kernel into `-log1p(D / |z - w|^2) / 2` and keeps every digit
/// when both points approach the circle.
#[inline]
pub(crate) fn green_at(p: &DiskPoint, q: &DiskPoint) -> f64 {
    let d2 = p.diff(q).norm_sqr();
    if d2 == 0.0 {
        return f64::NEG_INFINITY;
    }
    let cross = p.one_minus_abs2() * q.one_minus_abs2();
    -0.5 * (cross / d2).ln_1p()
}

/// `(e^{i theta} + z) / (e^{i theta} - z)`.
pub fn herglotz(z: impl Into<DiskPoint>, theta: f64) -> Result<Complex64> {
    let p = z.into();
    check_interior(&p, "herglotz")?;
    Ok(herglotz_at(&p, theta))
}

/// Real part is written as the Poisson kernel itself, imaginary part as
/// `2 Im(z e^{-i theta}) / |e^{i theta} - z|^2`.
#[inline]
pub(crate) fn herglotz_at(p: &DiskPoint, theta: f64) -> Complex64 {
    let d2 = p.from_unit(theta).norm_sqr();
    let im = 2.0 * (p.z() * Complex64::from_polar(1.0, -theta)).im;
    Complex64::new(p.one_minus_abs2() / d2, im / d2)
}

/// Derivative in `z` of the Herglotz kernel: `2 e^{i theta} / (e^{i theta} - z)^2`.
#[inline]
pub(crate) fn herglotz_derivative_at(p: &DiskPoint, theta: f64) -> Complex64 {
    let d = p.from_unit(theta);
    Complex64::from_polar(2.0, theta) / (d * d)
}

/// `(-conj(a)/|a|) (z - a) / (1 - conj(a) z)` for `0 < |a| < 1` and `|z| <= 1`.
pub fn blaschke_factor(z: Complex64, a: Complex64) -> Result<Complex64> {
    let m = a.norm();
    if m == 0.0 {
        return Err(Error::domain(
            "blaschke_factor: a zero at the origin is carried by the monomial z^m",
        ));
    }
    if m >= 1.0 {
        return Err(Error::domain(format!(
            "blaschke_factor: zero {a} is not inside the disk"
        )));
    }
    if z.norm() > 1.0 + 1e-12 {
        return Err(Error::domain(format!(
            "blaschke_factor: point {z} is outside the closed disk"
        )));
    }
    Ok(blaschke_factor_unchecked(z, a))
}

#[inline]
pub(crate) fn blaschke_factor_unchecked(z: Complex64, a: Complex64) -> Complex64 {
    let unit = -a.conj() / a.norm();
    unit * (z - a) / (Complex64::new(1.0, 0.0) - a.conj() * z)
}

/// Derivative of a single factor: `unit (1 - |a|^2) / (1 - conj(a) z)^2`.
#[inline]
pub(crate) fn blaschke_factor_derivative(z: Complex64, a: Complex64) -> Complex64 {
    let unit = -a.conj() / a.norm();
    let d = Complex64::new(1.0, 0.0) - a.conj() * z;
    unit * (1.0 - a.norm_sqr()) / (d * d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn poisson_examples() {
        assert!((poisson(0.0, 1.234).unwrap() - 1.0).abs() < 1e-15);
        assert!((poisson(0.5, 0.0).unwrap() - 3.0).abs() < 1e-15);
        assert!((poisson(0.5, PI).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!(poisson(1.0, 0.0).is_err());
        assert!(poisson(c(0.8, 0.8), 0.0).is_err());
    }

    #[test]
    fn green_examples() {
        let w = c(0.3, -0.4);
        assert!((green(0.0, w).unwrap() - w.norm().ln()).abs() < 1e-15);
        assert!((green(0.5, 0.0).unwrap() - 0.5f64.ln()).abs() < 1e-15);
        let z = c(-0.2, 0.7);
        assert!((green(z, w).unwrap() - green(w, z).unwrap()).abs() < 1e-15);
        assert_eq!(green(w, w).unwrap(), f64::NEG_INFINITY);
        assert!(green(c(1.0, 0.0), w).is_err());
    }

    #[test]
    fn green_near_boundary_keeps_digits() {
        // log|(z-w)/(1-wz)| for z = 1 - 1e-12, w = 0.5 is about -(1-|z|^2) (1-|w|^2)/|1-wz|^2 / 2
        let z = DiskPoint::from_boundary_distance(1e-12, 0.0);
        let w = DiskPoint::real(0.5);
        let g = green_at(&z, &w);
        let expected = -0.5 * (2e-12 - 1e-24) * 0.75 / 0.25;
        assert!(((g - expected) / expected).abs() < 1e-9, "{g} vs {expected}");
    }

    #[test]
    fn herglotz_examples() {
        assert!((herglotz(0.0, 0.3).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        assert!((herglotz(0.5, 0.0).unwrap() - c(3.0, 0.0)).norm() < 1e-14);
        assert!((herglotz(0.5, PI).unwrap() - c(1.0 / 3.0, 0.0)).norm() < 1e-14);
        let z = c(0.3, 0.6);
        let direct = (Complex64::from_polar(1.0, 0.9) + z) / (Complex64::from_polar(1.0, 0.9) - z);
        assert!((herglotz(z, 0.9).unwrap() - direct).norm() < 1e-14);
    }

    #[test]
    fn blaschke_examples() {
        let a = c(0.5, 0.0);
        assert_eq!(blaschke_factor(a, a).unwrap(), c(0.0, 0.0));
        assert!((blaschke_factor(c(0.0, 0.0), a).unwrap() - c(0.5, 0.0)).norm() < 1e-15);
        for k in 0..16 {
            let z = Complex64::from_polar(1.0, k as f64 * 0.4);
            assert!((blaschke_factor(z, a).unwrap().norm() - 1.0).abs() < 1e-14);
        }
        assert!(blaschke_factor(c(0.1, 0.0), c(0.0, 0.0)).is_err());
        assert!(blaschke_factor(c(0.1, 0.0), c(1.0, 0.0)).is_err());
    }

    #[test]
    fn normalization_record() {
        const { assert!(NORMALIZATION.lambda_is_normalized) };
        assert!((NORMALIZATION.laplacian_scale * 2.0 * PI - 1.0).abs() < 1e-16);
    }
}
