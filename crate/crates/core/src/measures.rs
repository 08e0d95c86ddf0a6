//! Exhaustion functions described by their Riesz measures.
//!
//! A [`RieszMeasure`] is a finite sum of point masses and radial densities
//! `kappa (1 - s)^{-beta} ds` on `[0, s_max]`. From it we get the
//! exhaustion `u` (its Green potential), the boundary density
//! `alpha(theta) = int P(w, e^{i theta}) dnu(w)` and the limit measure
//! `mu_u = alpha dlambda`.
//!
//! Radial densities are integrated in the variable `eps = 1 - s`. Near the
//! point 1 the interesting scales of `alpha` and `u` sit far below the
//! spacing of doubles around 1, and only `eps` resolves them.

use crate::error::{Error, Result};
use crate::kernels::{green_at, poisson_at};
use crate::point::{angular_distance, normalize_angle, DiskPoint};
use crate::quadrature::{CircleSpec, Endpoint, Integral, Integrator, QuadratureResult, SingularAngle, Tolerance};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::fmt;

/// Point mass `mass * delta_location`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Atom {
    pub location: Complex64,
    pub mass: f64,
}

/// Density `kappa (1 - s)^{-beta} ds` on the radius `[0, s_max]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadialComponent {
    pub beta: f64,
    pub kappa: f64,
    pub s_max: f64,
}

impl RadialComponent {
    /// Lower end of the `eps = 1 - s` range.
    fn eps_min(&self) -> f64 {
        1.0 - self.s_max
    }

    fn reaches_boundary(&self) -> bool {
        self.s_max >= 1.0
    }

    pub fn mass(&self) -> f64 {
        let lo = self.eps_min();
        let b = self.beta;
        if (b - 1.0).abs() < 1e-15 {
            -self.kappa * lo.ln()
        } else {
            self.kappa * (1.0 - lo.powf(1.0 - b)) / (1.0 - b)
        }
    }

    /// `kappa int g(eps) eps^{-beta} deps` over the support, with an
    /// optional feature at `peak` where `g` is peaked or log-singular.
    fn integrate<G: Fn(f64) -> f64>(&self, g: G, peak: Option<f64>, integ: &Integrator) -> QuadratureResult {
        let lo = self.eps_min();
        let beta = self.beta;
        let kappa = self.kappa;
        let h = |eps: f64| kappa * g(eps) * eps.powf(-beta);
        let lo_behavior = if lo == 0.0 {
            Endpoint::from_exponent(beta)
        } else {
            Endpoint::Regular
        };
        let mut total = QuadratureResult::exact(0.0);
        let add = |total: &mut QuadratureResult, r: Result<QuadratureResult>| {
            *total = total.plus(r.unwrap_or(QuadratureResult {
                value: f64::NAN,
                error_estimate: f64::INFINITY,
                nodes_used: 0,
                converged: false,
            }));
        };
        match peak.filter(|&p| p > lo && p < 1.0) {
            None => add(&mut total, integ.interval(h, lo, 1.0, (lo_behavior, Endpoint::Regular))),
            Some(p) => {
                add(&mut total, integ.interval(h, lo, p, (lo_behavior, Endpoint::Log)));
                let near = (2.0 * p).min(1.0);
                add(
                    &mut total,
                    integ.interval(h, p, near, (Endpoint::Log, Endpoint::Regular)),
                );
                if near < 1.0 {
                    if near < 1e-3 {
                        add(&mut total, integ.log_scale(h, near, 1.0));
                    } else {
                        add(
                            &mut total,
                            integ.interval(h, near, 1.0, (Endpoint::Regular, Endpoint::Regular)),
                        );
                    }
                }
            }
        }
        total
    }

    /// `alpha` contribution at `theta`; `+inf` at `theta = 0` when the
    /// density reaches the boundary.
    fn density(&self, theta: f64, integ: &Integrator) -> QuadratureResult {
        let half = 0.5 * (theta % (2.0 * PI));
        let sh = half.sin().abs();
        if self.reaches_boundary() {
            if sh == 0.0 {
                return QuadratureResult::exact(f64::INFINITY);
            }
            if sh < 1e-6 {
                return self.density_scaled(sh, integ);
            }
        }
        let sin2 = sh * sh;
        // P(1 - eps, theta) = eps (2 - eps) / (eps^2 + 4 (1 - eps) sin^2(theta/2))
        let poisson = |eps: f64| eps * (2.0 - eps) / (eps * eps + 4.0 * (1.0 - eps) * sin2);
        let peak = 2.0 * sin2.sqrt();
        self.integrate(poisson, Some(peak), integ)
    }

    /// Density near the singular angle in the variable `x = eps / sin(theta/2)`,
    /// which keeps every factor representable as `theta` underflows.
    fn density_scaled(&self, sh: f64, integ: &Integrator) -> QuadratureResult {
        let beta = self.beta;
        let h = |x: f64| {
            let sx = sh * x;
            x.powf(1.0 - beta) * (2.0 - sx) / (x * x + 4.0 * (1.0 - sx))
        };
        let top = 1.0 / sh.max(1e-300);
        let fail = QuadratureResult {
            value: f64::NAN,
            error_estimate: f64::INFINITY,
            nodes_used: 0,
            converged: false,
        };
        let head = integ
            .interval(h, 0.0, 2.0, (Endpoint::Regular, Endpoint::Regular))
            .unwrap_or(fail);
        let tail = integ.log_scale(h, 2.0, top).unwrap_or(fail);
        let scale = self.kappa * sh.powf(-beta);
        let sum = head.plus(tail);
        QuadratureResult {
            value: scale * sum.value,
            error_estimate: scale * sum.error_estimate,
            nodes_used: sum.nodes_used,
            converged: sum.converged,
        }
    }

    fn potential(&self, p: &DiskPoint, integ: &Integrator) -> QuadratureResult {
        let zeta = p.one_minus_z();
        let green = |eps: f64| green_at(p, &DiskPoint::near_one(Complex64::new(eps, 0.0)));
        let peak = zeta.re.max(zeta.norm() * 1e-3);
        self.integrate(green, Some(peak), integ)
    }
}

/// Riesz measure `nu = Delta u` of an exhaustion function in the class of
/// finite total mass.
#[derive(Clone, Debug, PartialEq)]
pub struct RieszMeasure {
    atoms: Vec<Atom>,
    radial: Vec<RadialComponent>,
    integrator: Integrator,
}

/// Tolerance of the inner integrals defining `u` and `alpha`.
pub const INNER_TOLERANCE: Tolerance = Tolerance { abs: 1e-14, rel: 1e-12 };

impl RieszMeasure {
    fn from_parts(atoms: Vec<Atom>, radial: Vec<RadialComponent>) -> Self {
        Self {
            atoms,
            radial,
            integrator: Integrator::new(INNER_TOLERANCE),
        }
    }

    /// `mass * delta_a`.
    pub fn atom(location: Complex64, mass: f64) -> Result<Self> {
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::domain(format!("atom mass must be positive, got {mass}")));
        }
        if !(location.norm() < 1.0) {
            return Err(Error::domain(format!(
                "atom location {location} is not inside the disk"
            )));
        }
        Ok(Self::from_parts(vec![Atom { location, mass }], Vec::new()))
    }

    /// `kappa (1 - s)^{-beta} ds` on `[0, s_max]`.
    pub fn radial(beta: f64, kappa: f64, s_max: f64) -> Result<Self> {
        if !(kappa > 0.0 && kappa.is_finite()) {
            return Err(Error::domain(format!("radial scale must be positive, got {kappa}")));
        }
        if !(s_max > 0.0 && s_max <= 1.0) {
            return Err(Error::domain(format!("s_max must lie in (0, 1], got {s_max}")));
        }
        if !(beta >= 0.0 && beta.is_finite()) {
            return Err(Error::domain(format!("beta must be nonnegative, got {beta}")));
        }
        if beta >= 1.0 && s_max >= 1.0 {
            return Err(Error::InfiniteMass(format!("int_0^1 (1 - s)^(-{beta}) ds diverges")));
        }
        Ok(Self::from_parts(
            Vec::new(),
            vec![RadialComponent { beta, kappa, s_max }],
        ))
    }

    /// The exhaustion whose Riesz measure is `(1 - s)^{-beta} ds` on `[0, 1)`.
    pub fn u_beta(beta: f64) -> Result<Self> {
        Self::radial(beta, 1.0, 1.0)
    }

    /// `log |z|`.
    pub fn classical() -> Self {
        Self::atom(Complex64::new(0.0, 0.0), 1.0).expect("unit atom at origin")
    }

    pub fn sum(&self, other: &RieszMeasure) -> Self {
        let mut atoms = self.atoms.clone();
        atoms.extend_from_slice(&other.atoms);
        let mut radial = self.radial.clone();
        radial.extend_from_slice(&other.radial);
        Self {
            atoms,
            radial,
            integrator: self.integrator,
        }
    }

    pub fn scale(&self, c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::domain(format!("scale factor must be positive, got {c}")));
        }
        Ok(Self {
            atoms: self
                .atoms
                .iter()
                .map(|a| Atom {
                    location: a.location,
                    mass: a.mass * c,
                })
                .collect(),
            radial: self
                .radial
                .iter()
                .map(|r| RadialComponent {
                    kappa: r.kappa * c,
                    ..*r
                })
                .collect(),
            integrator: self.integrator,
        })
    }

    pub fn with_tolerance(mut self, tol: impl Into<Tolerance>) -> Self {
        self.integrator = self.integrator.with_tol(tol);
        self
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn radial_components(&self) -> &[RadialComponent] {
        &self.radial
    }

    pub fn integrator(&self) -> &Integrator {
        &self.integrator
    }

    pub fn is_atomic(&self) -> bool {
        self.radial.is_empty()
    }

    /// `nu(D)`.
    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass).sum::<f64>() + self.radial.iter().map(RadialComponent::mass).sum::<f64>()
    }

    /// `(beta, s_max)` of the strongest radial component, for grading
    /// disk rules.
    pub fn radial_weight(&self) -> Option<(f64, f64)> {
        self.radial
            .iter()
            .max_by(|a, b| (a.s_max >= 1.0).cmp(&(b.s_max >= 1.0)).then(a.beta.total_cmp(&b.beta)))
            .map(|r| (r.beta, r.s_max))
    }

    /// `u(z) = int G(z, w) dnu(w)`; `-inf` at an atom.
    pub fn evaluate_u(&self, z: impl Into<DiskPoint>) -> Result<f64> {
        let p = z.into();
        if !p.is_interior() {
            return Err(Error::domain(format!("u is evaluated inside the disk, got {}", p.z())));
        }
        let r = self.potential(&p);
        if r.value == f64::NEG_INFINITY {
            return Ok(r.value);
        }
        r.require_converged("evaluate_u").map(|r| r.value)
    }

    /// `u` at a point with its quadrature diagnostics.
    pub fn potential(&self, p: &DiskPoint) -> QuadratureResult {
        let mut total = QuadratureResult::exact(0.0);
        for a in &self.atoms {
            let g = green_at(p, &DiskPoint::new(a.location));
            if g == f64::NEG_INFINITY {
                return QuadratureResult::exact(f64::NEG_INFINITY);
            }
            total.value += a.mass * g;
        }
        for r in &self.radial {
            total = total.plus(r.potential(p, &self.integrator));
        }
        total
    }

    /// `alpha(theta)`; `+inf` at a singular angle.
    pub fn boundary_density(&self, theta: f64) -> Result<f64> {
        let r = self.density_with_error(theta);
        if r.value == f64::INFINITY {
            return Ok(r.value);
        }
        r.require_converged("boundary_density").map(|r| r.value)
    }

    /// `alpha(theta)` with quadrature diagnostics.
    pub fn density_with_error(&self, theta: f64) -> QuadratureResult {
        let mut total = QuadratureResult::exact(0.0);
        for a in &self.atoms {
            total.value += a.mass * poisson_at(&DiskPoint::new(a.location), theta);
        }
        for r in &self.radial {
            total = total.plus(r.density(theta, &self.integrator));
        }
        total
    }

    pub fn density(&self) -> BoundaryDensity {
        BoundaryDensity::new(self.clone())
    }

    /// `int g(w) dnu(w)` for an integrand on the disk that is smooth along
    /// the radial support, with the exponent `e` of `|g| ~ (1 - s)^{-e}` at
    /// `s -> 1`. Returns the divergence verdict when the combined exponent
    /// reaches 1.
    pub fn integrate_against<G: Fn(&DiskPoint) -> f64>(&self, g: G, exponent_at_one: f64) -> Integral {
        let mut total = QuadratureResult::exact(0.0);
        for a in &self.atoms {
            total.value += a.mass * g(&DiskPoint::new(a.location));
        }
        for r in &self.radial {
            let e = r.beta + exponent_at_one;
            if r.reaches_boundary() && e >= 1.0 {
                return Integral::Divergent {
                    angle: 0.0,
                    exponent: e,
                };
            }
            let sub = RadialComponent {
                beta: r.beta
                    + if r.reaches_boundary() {
                        exponent_at_one.max(0.0)
                    } else {
                        0.0
                    },
                ..*r
            };
            let shift = sub.beta - r.beta;
            let q = sub.integrate(
                |eps| g(&DiskPoint::near_one(Complex64::new(eps, 0.0))) * eps.powf(shift),
                None,
                &self.integrator,
            );
            total = total.plus(q);
        }
        Integral::Finite(total)
    }

    /// Parts of the radial support `eps = 1 - s` where `u < r`, as
    /// intervals of `eps`, one list per radial component.
    pub fn radial_sublevel(&self, r: f64) -> Vec<Vec<(f64, f64)>> {
        self.radial
            .iter()
            .map(|c| {
                let lo = c.eps_min().max(1e-14);
                let n = 48;
                let grid: Vec<f64> = (0..=n)
                    .map(|k| (lo.ln() + (1.0f64.ln() - lo.ln()) * k as f64 / n as f64).exp())
                    .collect();
                let below = |eps: f64| {
                    let p = DiskPoint::near_one(Complex64::new(eps, 0.0));
                    self.potential(&p).value < r
                };
                let flags: Vec<bool> = grid.iter().map(|&e| below(e)).collect();
                let mut intervals = Vec::new();
                let mut start = if flags[0] { Some(c.eps_min()) } else { None };
                for k in 1..grid.len() {
                    if flags[k] != flags[k - 1] {
                        // bisection in log eps
                        let (mut a, mut b) = (grid[k - 1].ln(), grid[k].ln());
                        for _ in 0..64 {
                            let m = 0.5 * (a + b);
                            if below(m.exp()) == flags[k - 1] {
                                a = m;
                            } else {
                                b = m;
                            }
                        }
                        let x = (0.5 * (a + b)).exp();
                        if flags[k] {
                            start = Some(x);
                        } else if let Some(s) = start.take() {
                            intervals.push((s, x));
                        }
                    }
                }
                if let Some(s) = start {
                    intervals.push((s, 1.0));
                }
                intervals
            })
            .collect()
    }

    /// `int_{B_{u,r}} g dnu` for `g` on the disk. Atoms always lie in the
    /// sublevel set since `u = -inf` there.
    pub fn integrate_over_sublevel<G: Fn(&DiskPoint) -> f64>(&self, g: G, r: f64) -> QuadratureResult {
        let mut total = QuadratureResult::exact(0.0);
        for a in &self.atoms {
            total.value += a.mass * g(&DiskPoint::new(a.location));
        }
        let sets = self.radial_sublevel(r);
        for (c, set) in self.radial.iter().zip(sets) {
            for (e0, e1) in set {
                let lo = if e0 <= c.eps_min() {
                    if c.eps_min() == 0.0 {
                        Endpoint::from_exponent(c.beta)
                    } else {
                        Endpoint::Regular
                    }
                } else {
                    Endpoint::Regular
                };
                let q = self
                    .integrator
                    .interval(
                        |eps| c.kappa * g(&DiskPoint::near_one(Complex64::new(eps, 0.0))) * eps.powf(-c.beta),
                        e0,
                        e1,
                        (lo, Endpoint::Regular),
                    )
                    .unwrap_or(QuadratureResult {
                        value: f64::NAN,
                        error_estimate: f64::INFINITY,
                        nodes_used: 0,
                        converged: false,
                    });
                total = total.plus(q);
            }
        }
        total
    }
}

/// The density `alpha = dmu_u / dlambda` together with what is known about
/// its singularities.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryDensity {
    source: RieszMeasure,
}

/// `alpha(theta) ~ constant * |theta - angle|^{-exponent}` near a singular
/// angle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityAsymptotics {
    pub angle: f64,
    pub exponent: f64,
    pub constant: f64,
}

impl BoundaryDensity {
    pub fn new(source: RieszMeasure) -> Self {
        Self { source }
    }

    pub fn source(&self) -> &RieszMeasure {
        &self.source
    }

    /// `alpha(theta)`, best available estimate.
    pub fn value(&self, theta: f64) -> f64 {
        self.source.density_with_error(theta).value
    }

    /// Angles where `alpha` is unbounded, with their behaviour.
    pub fn singular_angles(&self) -> Vec<SingularAngle> {
        let mut best: Option<Endpoint> = None;
        for r in self.source.radial.iter().filter(|r| r.reaches_boundary()) {
            let e = if r.beta > 0.0 {
                Endpoint::Algebraic(r.beta)
            } else {
                Endpoint::Log
            };
            best = Some(match (best, e) {
                (None, e) => e,
                (Some(Endpoint::Algebraic(a)), Endpoint::Algebraic(b)) => Endpoint::Algebraic(a.max(b)),
                (Some(Endpoint::Algebraic(a)), _) => Endpoint::Algebraic(a),
                (Some(_), e) => e,
            });
        }
        best.map(|b| vec![SingularAngle::new(0.0, b)]).unwrap_or_default()
    }

    /// Angles where `alpha` is smooth but sharply peaked (atoms close to
    /// the circle).
    pub fn peak_angles(&self) -> Vec<f64> {
        self.source
            .atoms
            .iter()
            .filter(|a| a.location.norm() > 0.75)
            .map(|a| normalize_angle(a.location.arg()))
            .collect()
    }

    pub fn is_singular_at(&self, theta: f64) -> bool {
        self.singular_angles()
            .iter()
            .any(|s| angular_distance(s.angle, theta) == 0.0)
    }

    /// Circle rule for `phi * alpha` where `phi` has the given singular
    /// angles.
    pub fn circle_spec(&self, phi_singular: &[SingularAngle]) -> CircleSpec {
        CircleSpec {
            singular: combine_singular(phi_singular, &self.singular_angles()),
            breaks: self.peak_angles(),
        }
    }

    /// Minimum of `alpha` over `grid_size` equispaced angles.
    pub fn lower_bound(&self, grid_size: usize) -> Result<f64> {
        if grid_size < 16 {
            return Err(Error::domain(format!("grid size must be at least 16, got {grid_size}")));
        }
        let mut min = f64::INFINITY;
        for k in 0..grid_size {
            let v = self.value(2.0 * PI * k as f64 / grid_size as f64);
            if v < min {
                min = v;
            }
        }
        Ok(min)
    }

    /// Fit `log alpha` against `log |theta - angle|` near the singular
    /// angle on the given offsets.
    pub fn fit_asymptotics(&self, offsets: &[f64]) -> Option<DensityAsymptotics> {
        let s = *self.singular_angles().first()?;
        let pts: Vec<(f64, f64)> = offsets
            .iter()
            .map(|&d| (d.ln(), self.value(s.angle + d).ln()))
            .collect();
        let (slope, intercept) = least_squares(&pts)?;
        Some(DensityAsymptotics {
            angle: s.angle,
            exponent: -slope,
            constant: intercept.exp(),
        })
    }

    /// `mu_u(phi) = int phi alpha dlambda`.
    pub fn mu<F: Fn(f64) -> f64>(
        &self,
        phi: F,
        phi_singular: &[SingularAngle],
        integ: &Integrator,
    ) -> Result<Integral> {
        let spec = self.circle_spec(phi_singular);
        integ.circle(|t| phi(t) * self.value(t), &spec)
    }
}

/// Union of two singular-angle lists; behaviours at the same angle
/// combine as for a product.
pub fn combine_singular(a: &[SingularAngle], b: &[SingularAngle]) -> Vec<SingularAngle> {
    let mut out: Vec<SingularAngle> = a.to_vec();
    for s in b {
        if let Some(t) = out.iter_mut().find(|t| angular_distance(t.angle, s.angle) < 1e-14) {
            t.behavior = t.behavior.combine(s.behavior);
        } else {
            out.push(*s);
        }
    }
    out.sort_by(|x, y| x.angle.total_cmp(&y.angle));
    out
}

/// Ordinary least squares slope and intercept.
pub fn least_squares(pts: &[(f64, f64)]) -> Option<(f64, f64)> {
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return None;
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

/// Free-function form of [`RieszMeasure::total_mass`].
pub fn total_mass(nu: &RieszMeasure) -> f64 {
    nu.total_mass()
}

pub fn evaluate_u(nu: &RieszMeasure, z: impl Into<DiskPoint>) -> Result<f64> {
    nu.evaluate_u(z)
}

pub fn boundary_density(nu: &RieszMeasure, theta: f64) -> Result<f64> {
    nu.boundary_density(theta)
}

pub fn density_lower_bound(nu: &RieszMeasure, grid_size: usize) -> Result<f64> {
    nu.density().lower_bound(grid_size)
}

/// `mu_u(phi)` with the default boundary tolerance.
pub fn mu_u<F: Fn(f64) -> f64>(nu: &RieszMeasure, phi: F, phi_singular: &[SingularAngle]) -> Result<Integral> {
    nu.density().mu(phi, phi_singular, &Integrator::new(1e-10))
}

impl fmt::Display for RieszMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for a in &self.atoms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "atom {} {} {}", a.location.re, a.location.im, a.mass)?;
        }
        for r in &self.radial {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "radial {} {} {}", r.beta, r.kappa, r.s_max)?;
        }
        Ok(())
    }
}
