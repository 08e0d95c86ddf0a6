//! Points of the closed unit disk carried with the quantities that lose
//! precision near the boundary.
//!
//! Near `|z| = 1` the numbers `1 - |z|^2` and `1 - z` cannot be recovered
//! from `z` once it has been rounded, yet every kernel in this crate depends
//! on them. A [`DiskPoint`] stores them alongside `z`, computed by whoever
//! produced the point from coordinates that still hold them exactly.

use num_complex::Complex64;
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiskPoint {
    z: Complex64,
    one_minus_z: Complex64,
    one_minus_abs2: f64,
}

/// `1 - e^{i theta}` without cancellation.
pub fn one_minus_unit(theta: f64) -> Complex64 {
    let half = 0.5 * theta;
    Complex64::new(0.0, -2.0 * half.sin()) * Complex64::from_polar(1.0, half)
}

impl DiskPoint {
    pub fn new(z: Complex64) -> Self {
        let r = z.norm();
        Self {
            z,
            one_minus_z: Complex64::new(1.0, 0.0) - z,
            one_minus_abs2: (1.0 - r) * (1.0 + r),
        }
    }

    pub fn real(x: f64) -> Self {
        Self {
            z: Complex64::new(x, 0.0),
            one_minus_z: Complex64::new(1.0 - x, 0.0),
            one_minus_abs2: (1.0 - x) * (1.0 + x),
        }
    }

    pub fn polar(r: f64, phi: f64) -> Self {
        Self::from_boundary_distance(1.0 - r, phi)
    }

    /// The point `(1 - eta) e^{i phi}`, exact in `eta`.
    pub fn from_boundary_distance(eta: f64, phi: f64) -> Self {
        let e = Complex64::from_polar(1.0, phi);
        Self {
            z: e * (1.0 - eta),
            one_minus_z: one_minus_unit(phi) + e * eta,
            one_minus_abs2: eta * (2.0 - eta),
        }
    }

    /// The point `1 - zeta`, exact in `zeta`.
    pub fn near_one(zeta: Complex64) -> Self {
        let one_minus_abs2 = 2.0 * zeta.re - zeta.norm_sqr();
        Self {
            z: Complex64::new(1.0, 0.0) - zeta,
            one_minus_z: zeta,
            one_minus_abs2,
        }
    }

    /// Polar coordinates centred on the boundary point `e^{i anchor}`:
    /// `z = e^{i anchor} (1 - rho e^{i psi})`. The disk is exactly
    /// `|psi| < pi/2, 0 < rho < 2 cos psi`.
    pub fn anchored(anchor: f64, rho: f64, psi: f64) -> Self {
        let e = Complex64::from_polar(1.0, anchor);
        let w = Complex64::from_polar(rho, psi);
        let one_minus_abs2 = rho * (2.0 * psi.cos() - rho);
        Self {
            z: e * (Complex64::new(1.0, 0.0) - w),
            one_minus_z: one_minus_unit(anchor) + e * w,
            one_minus_abs2,
        }
    }

    pub fn boundary(theta: f64) -> Self {
        Self {
            z: Complex64::from_polar(1.0, theta),
            one_minus_z: one_minus_unit(theta),
            one_minus_abs2: 0.0,
        }
    }

    #[inline]
    pub fn z(&self) -> Complex64 {
        self.z
    }

    #[inline]
    pub fn one_minus_z(&self) -> Complex64 {
        self.one_minus_z
    }

    #[inline]
    pub fn one_minus_abs2(&self) -> f64 {
        self.one_minus_abs2
    }

    #[inline]
    pub fn is_interior(&self) -> bool {
        self.one_minus_abs2 > 0.0
    }

    #[inline]
    pub fn is_boundary(&self) -> bool {
        self.one_minus_abs2 == 0.0
    }

    /// Argument in `[0, 2 pi)`.
    pub fn angle(&self) -> f64 {
        normalize_angle(self.z.arg())
    }

    /// `self - other`, taken through `1 - z` when both points sit near 1.
    pub fn diff(&self, other: &DiskPoint) -> Complex64 {
        if self.one_minus_z.norm_sqr() < 0.25 && other.one_minus_z.norm_sqr() < 0.25 {
            other.one_minus_z - self.one_minus_z
        } else {
            self.z - other.z
        }
    }

    /// `e^{i theta} - z`, accurate when both are close to 1.
    pub fn from_unit(&self, theta: f64) -> Complex64 {
        if self.one_minus_z.norm_sqr() < 0.25 {
            self.one_minus_z - one_minus_unit(theta)
        } else {
            Complex64::from_polar(1.0, theta) - self.z
        }
    }
}

impl From<Complex64> for DiskPoint {
    fn from(z: Complex64) -> Self {
        DiskPoint::new(z)
    }
}

impl From<f64> for DiskPoint {
    fn from(x: f64) -> Self {
        DiskPoint::real(x)
    }
}

impl From<&DiskPoint> for DiskPoint {
    fn from(p: &DiskPoint) -> Self {
        *p
    }
}

/// Reduce an angle to `[0, 2 pi)`.
pub fn normalize_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(2.0 * PI);
    if t >= 2.0 * PI {
        0.0
    } else {
        t
    }
}

/// Distance between two angles on the circle, in `[0, pi]`.
pub fn angular_distance(a: f64, b: f64) -> f64 {
    // `%` keeps tiny differences exact, unlike a reduction to `[0, 2 pi)`.
    let d = ((a - b) % (2.0 * PI)).abs();
    d.min(2.0 * PI - d)
}
