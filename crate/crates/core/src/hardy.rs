//! Weighted and classical Hardy norms, the Lelong-Jensen functional
//! `mu_{u,r}`, weak-* gaps and membership verdicts.
//!
//! Norms come by two independent routes: the boundary integral
//! `int |f*|^p alpha dlambda` and the interior formula
//! `int |f|^p dnu - int u Delta~|f|^p dA`.

use crate::error::{Error, Result};
use crate::functions::{AnalyticFunction, HarmonicFunction};
use crate::kernels::poisson_at;
use crate::measures::{combine_singular, least_squares, RieszMeasure};
use crate::point::{angular_distance, normalize_angle, DiskPoint};
use crate::quadrature::{
    CircleSpec, DiskRule, Endpoint, Integral, Integrator, Knot, QuadratureResult, SingularAngle, Tolerance,
};
use num_complex::Complex64;
use std::cell::Cell;
use std::f64::consts::PI;
use std::fmt;

/// Default per-integral tolerance.
pub const DEFAULT_TOLERANCE: Tolerance = Tolerance { abs: 1e-12, rel: 1e-8 };

/// Default `r` grid for level-set sweeps.
pub const DEFAULT_R_GRID: [f64; 7] = [-1.0, -0.3, -0.1, -0.03, -0.01, -0.003, -0.001];

/// A norm together with the integral it came from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormValue {
    pub norm: f64,
    /// The integral equal to `norm^p`.
    pub power: QuadratureResult,
    pub p: f64,
}

impl NormValue {
    fn from_power(power: QuadratureResult, p: f64) -> Self {
        Self {
            norm: power.value.max(0.0).powf(1.0 / p),
            power,
            p,
        }
    }

    /// Error estimate carried over to the norm.
    pub fn error_estimate(&self) -> f64 {
        if self.power.value <= 0.0 {
            return self.power.error_estimate.powf(1.0 / self.p);
        }
        self.norm / (self.p * self.power.value) * self.power.error_estimate
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Norm {
    Finite(NormValue),
    Divergent { angle: f64, exponent: f64 },
}

impl Norm {
    fn from_integral(i: Integral, p: f64) -> Self {
        match i {
            Integral::Finite(q) => Norm::Finite(NormValue::from_power(q, p)),
            Integral::Divergent { angle, exponent } => Norm::Divergent { angle, exponent },
        }
    }

    /// The norm, `inf` when divergent.
    pub fn value(&self) -> f64 {
        match self {
            Norm::Finite(v) => v.norm,
            Norm::Divergent { .. } => f64::INFINITY,
        }
    }

    pub fn is_divergent(&self) -> bool {
        matches!(self, Norm::Divergent { .. })
    }

    pub fn finite(&self) -> Option<&NormValue> {
        match self {
            Norm::Finite(v) => Some(v),
            Norm::Divergent { .. } => None,
        }
    }
}

/// Both routes for one `(f, p, nu)`, plus the classical norm.
#[derive(Clone, Debug, PartialEq)]
pub struct NormReport {
    pub boundary_value: QuadratureResult,
    pub interior_value: Option<QuadratureResult>,
    pub classical_value: Option<QuadratureResult>,
    /// `|boundary - interior| / max(1, boundary)`.
    pub agreement_gap: f64,
}

fn as_norm_result(v: &NormValue) -> QuadratureResult {
    QuadratureResult {
        value: v.norm,
        error_estimate: v.error_estimate(),
        nodes_used: v.power.nodes_used,
        converged: v.power.converged,
    }
}

fn check_p(p: f64) -> Result<()> {
    if p > 0.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("p must be positive, got {p}")))
    }
}

/// Integration settings for the norm routines.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Hardy {
    pub boundary: Integrator,
    pub interior: Integrator,
}

impl Default for Hardy {
    fn default() -> Self {
        Self::new(DEFAULT_TOLERANCE)
    }
}

impl Hardy {
    pub fn new(tol: impl Into<Tolerance>) -> Self {
        let tol = tol.into();
        Self {
            boundary: Integrator::new(tol.scaled(0.01)),
            interior: Integrator::new(tol),
        }
    }

    fn function_singular(f: &AnalyticFunction, p: f64) -> Vec<SingularAngle> {
        f.boundary_singularities()
            .into_iter()
            .map(|s| SingularAngle::algebraic(s.angle, p * s.exponent))
            .collect()
    }

    /// `(int |f(r e^{i theta})|^p dlambda)` for `r <= 1`.
    pub fn circle_mean(&self, f: &AnalyticFunction, p: f64, r: f64) -> Result<Integral> {
        check_p(p)?;
        if !(r > 0.0 && r <= 1.0) {
            return Err(Error::domain(format!("radius must lie in (0, 1], got {r}")));
        }
        if r == 1.0 {
            let spec = CircleSpec {
                singular: Self::function_singular(f, p),
                breaks: f.feature_angles(),
            };
            return self.boundary.circle(|t| f.boundary_abs(t).powf(p), &spec);
        }
        let spec = CircleSpec {
            singular: Vec::new(),
            breaks: f
                .boundary_singularities()
                .iter()
                .map(|s| s.angle)
                .chain(f.feature_angles())
                .collect(),
        };
        self.boundary
            .circle(|t| f.eval(DiskPoint::polar(r, t)).norm().powf(p), &spec)
    }

    /// `sup_r` of the circle means, attained at the boundary trace.
    pub fn classical_norm(&self, f: &AnalyticFunction, p: f64) -> Result<Norm> {
        Ok(Norm::from_integral(self.circle_mean(f, p, 1.0)?, p))
    }

    /// `(int |f*|^p alpha dlambda)^{1/p}`.
    pub fn weighted_norm_boundary(&self, f: &AnalyticFunction, p: f64, nu: &RieszMeasure) -> Result<Norm> {
        check_p(p)?;
        let density = nu.density();
        let mut spec = density.circle_spec(&Self::function_singular(f, p));
        spec.breaks.extend(f.feature_angles());
        let g = |t: f64| {
            let m = f.boundary_abs(t);
            if m == 0.0 {
                return 0.0;
            }
            m.powf(p) * density.value(t)
        };
        Ok(Norm::from_integral(self.boundary.circle(g, &spec)?, p))
    }

    /// `(int |f|^p dnu - int u Delta~|f|^p dA)^{1/p}`; for `p <= 1` this goes
    /// through the deflated factor `g` and `g^{p/2}`.
    pub fn weighted_norm_interior(&self, f: &AnalyticFunction, p: f64, nu: &RieszMeasure) -> Result<Norm> {
        check_p(p)?;
        if p <= 1.0 {
            let g = if f.is_nonvanishing() {
                f.clone()
            } else {
                f.divide_out_zeros()
                    .ok_or_else(|| Error::Unsupported(format!("zeros of {f} are not structurally known")))?
            };
            return self.norm_via_half_power(&g, p, nu);
        }
        let power = self.interior_power(f, p, nu, |z| f.eval(z).norm().powf(p), |z| f.laplacian_abs_p(p, z))?;
        Ok(Norm::from_integral(power, p))
    }

    /// `||g||_p = ||g^{p/2}||_2^{2/p}` for nonvanishing `g`, with the
    /// right-hand side by the interior route.
    pub fn norm_via_half_power(&self, g: &AnalyticFunction, p: f64, nu: &RieszMeasure) -> Result<Norm> {
        check_p(p)?;
        let h = g.powr(p / 2.0)?;
        let power = self.interior_power(&h, 2.0, nu, |z| h.eval(z).norm_sqr(), |z| h.laplacian_abs_p(2.0, z))?;
        Ok(Norm::from_integral(power, p))
    }

    /// `int phi dnu - int u Delta~phi dA` for `phi = |f|^p`-like data of `f`.
    fn interior_power<V, L>(
        &self,
        f: &AnalyticFunction,
        p: f64,
        nu: &RieszMeasure,
        value: V,
        lap: L,
    ) -> Result<Integral>
    where
        V: Fn(&DiskPoint) -> f64,
        L: Fn(&DiskPoint) -> f64,
    {
        let sing = f.boundary_singularities();
        let at_zero = sing
            .iter()
            .filter(|s| angular_distance(s.angle, 0.0) < 1e-14)
            .map(|s| s.exponent * p)
            .fold(0.0, f64::max);
        let mass = match nu.integrate_against(&value, at_zero) {
            Integral::Finite(q) => q,
            d => return Ok(d),
        };
        let mut points: Vec<Complex64> = nu.atoms().iter().map(|a| a.location).collect();
        if let Some(z) = f.zeros() {
            points.extend(z.zeros);
            if z.origin_order > 0 {
                points.push(Complex64::new(0.0, 0.0));
            }
        }
        let rule = interior_rule(nu, &sing, &f.boundary_zeros(), p, &points);
        if let DiskRule::Anchored { exponent, angle, .. } = rule {
            if exponent >= 1.0 {
                return Ok(Integral::Divergent { angle, exponent });
            }
        }
        let integrand = |z: &DiskPoint| {
            let l = lap(z);
            if l == 0.0 {
                return 0.0;
            }
            -nu.potential(z).value * l
        };
        let area = self.interior.disk(integrand, &rule)?;
        Ok(Integral::Finite(mass.plus(area)))
    }

    pub fn norm_report(&self, f: &AnalyticFunction, p: f64, nu: &RieszMeasure) -> Result<NormReport> {
        let boundary = match self.weighted_norm_boundary(f, p, nu)? {
            Norm::Finite(v) => v,
            Norm::Divergent { angle, exponent } => return Err(Error::Divergent { angle, exponent }),
        };
        let interior = self.weighted_norm_interior(f, p, nu)?.finite().copied();
        let classical = self.classical_norm(f, p)?.finite().copied();
        let agreement_gap = interior
            .map(|i| (boundary.norm - i.norm).abs() / boundary.norm.max(1.0))
            .unwrap_or(f64::NAN);
        Ok(NormReport {
            boundary_value: as_norm_result(&boundary),
            interior_value: interior.as_ref().map(as_norm_result),
            classical_value: classical.as_ref().map(as_norm_result),
            agreement_gap,
        })
    }

    /// `(int |h*|^p alpha dlambda)^{1/p}`, `p > 1`.
    pub fn harmonic_norm(&self, h: &HarmonicFunction, p: f64, nu: &RieszMeasure) -> Result<Norm> {
        if !(p > 1.0) {
            return Err(Error::domain(format!("harmonic norms need p > 1, got {p}")));
        }
        let density = nu.density();
        let f_sing: Vec<SingularAngle> = h
            .boundary_singularities()
            .into_iter()
            .map(|s| SingularAngle::algebraic(s.angle, p * s.exponent))
            .collect();
        let spec = density.circle_spec(&f_sing);
        let g = |t: f64| h.boundary(t).abs().powf(p) * density.value(t);
        Ok(Norm::from_integral(self.boundary.circle(g, &spec)?, p))
    }

    /// Interior cross-check `int |h|^p dnu - int u Delta~|h|^p dA`.
    pub fn harmonic_norm_interior(&self, h: &HarmonicFunction, p: f64, nu: &RieszMeasure) -> Result<Norm> {
        if !(p > 1.0) {
            return Err(Error::domain(format!("harmonic norms need p > 1, got {p}")));
        }
        let sing = h.boundary_singularities();
        let at_zero = sing
            .iter()
            .filter(|s| angular_distance(s.angle, 0.0) < 1e-14)
            .map(|s| s.exponent * p)
            .fold(0.0, f64::max);
        let mass = match nu.integrate_against(|z| h.eval(*z).abs().powf(p), at_zero) {
            Integral::Finite(q) => q,
            Integral::Divergent { angle, exponent } => return Ok(Norm::Divergent { angle, exponent }),
        };
        let points: Vec<Complex64> = nu.atoms().iter().map(|a| a.location).collect();
        let rule = interior_rule(nu, &sing, &[], p, &points);
        let area = self
            .interior
            .disk(|z| -nu.potential(z).value * h.laplacian_abs_p(p, z), &rule)?;
        Ok(Norm::from_integral(Integral::Finite(mass.plus(area)), p))
    }

    /// `mu_{u,r}(phi) = int_B phi dnu + int_B (r - u) Delta~phi dA`,
    /// `B = {u < r}`.
    pub fn demailly_functional(&self, nu: &RieszMeasure, r: f64, phi: &dyn TestDensity) -> Result<QuadratureResult> {
        if !(r < 0.0) {
            return Err(Error::domain(format!("level r must be negative, got {r}")));
        }
        let mass = nu.integrate_over_sublevel(|z| phi.value(z), r);
        if phi.is_harmonic() {
            return Ok(mass);
        }
        let area = sublevel_area_integral(nu, r, &self.interior, |z, u| (r - u) * phi.laplacian(z))?;
        Ok(mass.plus(area))
    }

    /// `mu_u(phi*) = int phi* alpha dlambda`.
    pub fn boundary_functional(&self, nu: &RieszMeasure, phi: &dyn TestDensity) -> Result<Integral> {
        nu.density().mu(
            |t| phi.value(&DiskPoint::boundary(t)),
            &phi.boundary_singularities(),
            &self.boundary,
        )
    }

    /// `p_r(theta) = int_B P(z, theta) dnu(z)`.
    pub fn partial_density(&self, nu: &RieszMeasure, r: f64, theta: f64) -> Result<QuadratureResult> {
        if !(r < 0.0) {
            return Err(Error::domain(format!("level r must be negative, got {r}")));
        }
        Ok(nu.integrate_over_sublevel(|z| poisson_at(z, theta), r))
    }

    /// `|mu_{u,r}(phi h) - mu_u(phi h*)|`.
    pub fn weak_star_gap(
        &self,
        nu: &RieszMeasure,
        h: &HarmonicFunction,
        phi: &HarmonicFunction,
        r: f64,
    ) -> Result<WeakStarGap> {
        let density = HarmonicProduct::new(phi.clone(), h.clone());
        let level = self.demailly_functional(nu, r, &density)?;
        let limit = match self.boundary_functional(nu, &density)? {
            Integral::Finite(q) => q,
            Integral::Divergent { angle, exponent } => return Err(Error::Divergent { angle, exponent }),
        };
        Ok(WeakStarGap {
            r,
            level: level.value,
            limit: limit.value,
            gap: (level.value - limit.value).abs(),
            error_estimate: level.error_estimate + limit.error_estimate,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeakStarGap {
    pub r: f64,
    /// `mu_{u,r}(phi h)`.
    pub level: f64,
    /// `mu_u(phi h*)`.
    pub limit: f64,
    pub gap: f64,
    pub error_estimate: f64,
}

/// Disk rule for `u Delta~|f|^p`: anchored at the strongest boundary
/// singularity of the integrand when there is one.
/// Polar rule for `-u Delta~|f|^p`: anchored at the strongest boundary
/// singularity, else at a boundary zero of order `m` with `p m < 2` (where
/// the Laplacian blows up like `rho^{p m - 2}`), else centred.
fn interior_rule(
    nu: &RieszMeasure,
    sing: &[crate::functions::BoundarySingularity],
    zeros: &[(f64, f64)],
    p: f64,
    points: &[Complex64],
) -> DiskRule {
    let mut cands: Vec<(f64, f64)> = sing.iter().map(|s| (s.angle, p * s.exponent)).collect();
    for c in nu.radial_components() {
        if c.s_max >= 1.0 {
            if let Some(x) = cands.iter_mut().find(|x| angular_distance(x.0, 0.0) < 1e-14) {
                x.1 += c.beta;
            } else {
                cands.push((0.0, c.beta));
            }
        }
    }
    let radial_anchor = nu.radial_components().iter().any(|c| c.s_max >= 1.0);
    let zero_anchor = || {
        zeros
            .iter()
            .filter(|&&(_, m)| p * m < 2.0)
            .map(|&(angle, m)| (angle, (1.0 - p * m).max(0.0)))
            .max_by(|a, b| a.1.total_cmp(&b.1))
    };
    let best = cands
        .into_iter()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .filter(|&(_, e)| e > 0.0 || radial_anchor)
        .or_else(zero_anchor);
    match best {
        Some((angle, exponent)) => DiskRule::Anchored {
            angle,
            exponent,
            interior_points: points.to_vec(),
        },
        None => {
            let mut rule = DiskRule::for_radial_weight(nu.radial_weight()).with_points(points);
            if let DiskRule::Centered { angular_breaks, .. } = &mut rule {
                angular_breaks.extend(sing.iter().map(|s| s.angle));
            }
            rule
        }
    }
}

/// `int_{u < r} F(z, u(z)) dA` in polar coordinates about a centre
/// (the atom of a one-atom measure, else the origin). Each ray is cut at
/// the crossings of the level `r`, so the inner integrands are smooth.
pub fn sublevel_area_integral<F>(nu: &RieszMeasure, r: f64, integ: &Integrator, f: F) -> Result<QuadratureResult>
where
    F: Fn(&DiskPoint, f64) -> f64,
{
    let centre = match (nu.atoms(), nu.radial_components()) {
        ([a], []) => a.location,
        _ => Complex64::new(0.0, 0.0),
    };
    let centre_is_atom = nu.atoms().iter().any(|a| a.location == centre);
    let others: Vec<Complex64> = nu
        .atoms()
        .iter()
        .map(|a| a.location - centre)
        .filter(|d| d.norm() > 0.0)
        .collect();
    let inner = integ.with_tol(integ.tol.scaled(0.1));
    let worst = Cell::new(0.0f64);
    let failed = Cell::new(false);
    let nodes = Cell::new(0usize);
    let u_at = |z: Complex64| nu.potential(&DiskPoint::new(z)).value;

    let ray = |psi: f64| -> f64 {
        let e = Complex64::from_polar(1.0, psi);
        let b = (centre.conj() * e).re;
        let reach = -b + (b * b + 1.0 - centre.norm_sqr()).sqrt();
        // sample positions along the ray, as fractions of the reach
        let mut s: Vec<f64> = (1..32).map(|j| j as f64 / 32.0).collect();
        s.extend((5..48).map(|k| 1.0 - 0.5f64.powi(k)));
        for d in &others {
            let t = (d * e.conj()).re / reach;
            if t > 0.0 && t < 1.0 {
                s.push(t);
            }
        }
        s.sort_by(f64::total_cmp);
        s.dedup();
        let point = |t: f64| centre + e * (reach * t);
        let below = |t: f64| u_at(point(t)) < r;
        let mut flags: Vec<bool> = s.iter().map(|&t| below(t)).collect();
        // the centre itself
        let start_in = if centre_is_atom { true } else { u_at(centre) < r };
        s.insert(0, 0.0);
        flags.insert(0, start_in);
        let mut pieces: Vec<(f64, f64)> = Vec::new();
        let mut open: Option<f64> = start_in.then_some(0.0);
        for k in 1..s.len() {
            if flags[k] != flags[k - 1] {
                let (mut a, mut b) = (s[k - 1], s[k]);
                for _ in 0..80 {
                    let m = 0.5 * (a + b);
                    if m <= a || m >= b {
                        break;
                    }
                    if below(m) == flags[k - 1] {
                        a = m;
                    } else {
                        b = m;
                    }
                }
                let x = 0.5 * (a + b);
                if flags[k] {
                    open = Some(x);
                } else if let Some(o) = open.take() {
                    pieces.push((o, x));
                }
            }
        }
        if let Some(o) = open {
            pieces.push((o, 1.0));
        }
        let mut total = 0.0;
        for (t0, t1) in pieces {
            let mut knots = vec![Knot::new(
                reach * t0,
                if t0 == 0.0 && centre_is_atom {
                    Endpoint::Log
                } else {
                    Endpoint::Regular
                },
            )];
            for d in &others {
                let t = (d * e.conj()).re / reach;
                if t > t0 && t < t1 {
                    knots.push(Knot::new(reach * t, Endpoint::Log));
                }
            }
            knots.push(Knot::regular(reach * t1));
            let g = |rho: f64| {
                let z = centre + e * rho;
                let p = DiskPoint::new(z);
                let u = nu.potential(&p).value;
                if u >= r {
                    return 0.0;
                }
                rho * f(&p, u)
            };
            match inner.knots(g, &knots) {
                Ok(q) => {
                    worst.set(worst.get().max(q.error_estimate));
                    nodes.set(nodes.get() + q.nodes_used);
                    if !q.converged {
                        failed.set(true);
                    }
                    total += q.value;
                }
                Err(_) => failed.set(true),
            }
        }
        total
    };
    let spec = CircleSpec {
        singular: others
            .iter()
            .map(|d| SingularAngle::new(d.arg(), Endpoint::Log))
            .chain((!nu.radial_components().is_empty()).then(|| SingularAngle::new(0.0, Endpoint::Log)))
            .collect(),
        breaks: Vec::new(),
    };
    let mut q = match integ.circle(ray, &spec)? {
        Integral::Finite(q) => q.scale(2.0 * PI),
        Integral::Divergent { angle, exponent } => return Err(Error::Divergent { angle, exponent }),
    };
    q.error_estimate += 2.0 * PI * worst.get();
    q.nodes_used += nodes.get();
    q.converged = q.converged && !failed.get();
    Ok(q)
}

/// A test function `phi` on the closed disk with computable `Delta~ phi`.
pub trait TestDensity {
    fn value(&self, z: &DiskPoint) -> f64;
    fn laplacian(&self, z: &DiskPoint) -> f64;
    fn is_harmonic(&self) -> bool {
        false
    }
    fn boundary_singularities(&self) -> Vec<SingularAngle> {
        Vec::new()
    }
}

/// `|f|^p`.
#[derive(Clone, Debug)]
pub struct AbsPow {
    pub f: AnalyticFunction,
    pub p: f64,
}

impl AbsPow {
    pub fn new(f: AnalyticFunction, p: f64) -> Self {
        Self { f, p }
    }
}

impl TestDensity for AbsPow {
    fn value(&self, z: &DiskPoint) -> f64 {
        if z.is_boundary() {
            return self.f.boundary_abs(z.angle()).powf(self.p);
        }
        self.f.eval(*z).norm().powf(self.p)
    }

    fn laplacian(&self, z: &DiskPoint) -> f64 {
        self.f.laplacian_abs_p(self.p, z)
    }

    fn boundary_singularities(&self) -> Vec<SingularAngle> {
        Hardy::function_singular(&self.f, self.p)
    }
}

/// A constant test function.
#[derive(Clone, Copy, Debug)]
pub struct ConstantDensity(pub f64);

impl TestDensity for ConstantDensity {
    fn value(&self, _: &DiskPoint) -> f64 {
        self.0
    }

    fn laplacian(&self, _: &DiskPoint) -> f64 {
        0.0
    }

    fn is_harmonic(&self) -> bool {
        true
    }
}

/// `phi h` for harmonic `phi` and `h`; `Delta~(phi h) = grad phi . grad h / pi`.
#[derive(Clone, Debug)]
pub struct HarmonicProduct {
    pub phi: HarmonicFunction,
    pub h: HarmonicFunction,
}

impl HarmonicProduct {
    pub fn new(phi: HarmonicFunction, h: HarmonicFunction) -> Self {
        Self { phi, h }
    }

    fn phi_is_constant(&self) -> bool {
        let (_, x, y) = self
            .phi
            .eval_with_gradient(&DiskPoint::new(Complex64::new(0.31, -0.17)));
        let (_, x2, y2) = self.phi.eval_with_gradient(&DiskPoint::new(Complex64::new(-0.4, 0.23)));
        x == 0.0 && y == 0.0 && x2 == 0.0 && y2 == 0.0
    }
}

impl TestDensity for HarmonicProduct {
    fn value(&self, z: &DiskPoint) -> f64 {
        self.phi.eval(*z) * self.h.eval(*z)
    }

    fn laplacian(&self, z: &DiskPoint) -> f64 {
        let (_, px, py) = self.phi.eval_with_gradient(z);
        let (_, hx, hy) = self.h.eval_with_gradient(z);
        (px * hx + py * hy) / PI
    }

    fn is_harmonic(&self) -> bool {
        self.phi_is_constant()
    }

    fn boundary_singularities(&self) -> Vec<SingularAngle> {
        let a: Vec<SingularAngle> = self
            .phi
            .boundary_singularities()
            .into_iter()
            .map(|s| SingularAngle::algebraic(s.angle, s.exponent))
            .collect();
        let b: Vec<SingularAngle> = self
            .h
            .boundary_singularities()
            .into_iter()
            .map(|s| SingularAngle::algebraic(s.angle, s.exponent))
            .collect();
        combine_singular(&a, &b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Member,
    NonMember,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Member => "member",
            Verdict::NonMember => "non_member",
        })
    }
}

/// Log-log slope of the shell masses of the truncated interior integral.
#[derive(Clone, Debug, PartialEq)]
pub struct SlopeFit {
    /// Fitted exponent of `M(rho) ~ (1 - rho)^{slope}`.
    pub slope: f64,
    pub predicted: f64,
    /// `(1 - rho, M(rho))` samples.
    pub samples: Vec<(f64, f64)>,
}

impl SlopeFit {
    pub fn relative_error(&self) -> f64 {
        (self.slope - self.predicted).abs() / self.predicted.abs().max(f64::MIN_POSITIVE)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Membership {
    pub verdict: Verdict,
    /// Largest combined exponent `p e_f + e_alpha` over the circle.
    pub exponent: f64,
    pub angle: f64,
    pub classical_member: bool,
    pub fit: Option<SlopeFit>,
    pub note: String,
}

impl Membership {
    pub fn summary(&self) -> String {
        format!(
            "{} (exponent {:.6} at angle {:.6}): {}",
            self.verdict, self.exponent, self.angle, self.note
        )
    }
}

/// `f in H^p_u` iff `f* in L^p(mu_u)`, decided by exponent arithmetic.
pub fn membership(f: &AnalyticFunction, p: f64, nu: &RieszMeasure) -> Result<Membership> {
    check_p(p)?;
    let f_sing: Vec<(f64, f64)> = f
        .boundary_singularities()
        .into_iter()
        .map(|s| (s.angle, p * s.exponent))
        .collect();
    let classical_member = f_sing.iter().all(|&(_, e)| e < 1.0);
    let mut combined = f_sing.clone();
    for s in nu.density().singular_angles() {
        let e = s.behavior.exponent();
        if let Some(x) = combined.iter_mut().find(|x| angular_distance(x.0, s.angle) < 1e-14) {
            x.1 += e;
        } else {
            combined.push((s.angle, e));
        }
    }
    let (angle, exponent) = combined
        .iter()
        .copied()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap_or((0.0, 0.0));
    let verdict = if classical_member && exponent < 1.0 {
        Verdict::Member
    } else {
        Verdict::NonMember
    };
    let note = if !classical_member {
        format!("not in H^{p} classically; non-member of every weighted space")
    } else if exponent >= 1.0 {
        format!("int |f*|^{p} alpha dlambda diverges at angle {angle:.6}")
    } else {
        "boundary integral converges".to_string()
    };
    let at_zero = f_sing
        .iter()
        .filter(|x| angular_distance(x.0, 0.0) < 1e-14)
        .map(|x| x.1)
        .fold(0.0, f64::max);
    let fit = truncated_mass_fit(f, p, nu, at_zero);
    Ok(Membership {
        verdict,
        exponent,
        angle: normalize_angle(angle),
        classical_member,
        fit,
        note,
    })
}

/// Shell masses `int_{eps_{k+1}}^{eps_k} |f(1 - eps)|^p dnu` over decades
/// of `eps = 1 - rho`; their log-log slope is the exponent of the
/// truncated interior mass `M(rho) = int_{s < rho} |f|^p dnu`.
fn truncated_mass_fit(f: &AnalyticFunction, p: f64, nu: &RieszMeasure, f_exponent: f64) -> Option<SlopeFit> {
    let c = nu.radial_components().iter().find(|c| c.s_max >= 1.0)?;
    let integ = Integrator::new(Tolerance::new(1e-300, 1e-10));
    let shells: Vec<(f64, f64)> = (2..10)
        .filter_map(|k| {
            let hi = 10f64.powi(-k);
            let lo = hi / 10.0;
            let g = |eps: f64| {
                c.kappa * f.eval(DiskPoint::near_one(Complex64::new(eps, 0.0))).norm().powf(p) * eps.powf(-c.beta)
            };
            let q = integ.log_scale(g, lo, hi).ok()?;
            (q.value > 0.0).then_some((hi, q.value))
        })
        .collect();
    let pts: Vec<(f64, f64)> = shells.iter().map(|&(e, m)| (e.ln(), m.ln())).collect();
    let (slope, _) = least_squares(&pts)?;
    Some(SlopeFit {
        slope,
        predicted: 1.0 - f_exponent - c.beta,
        samples: shells,
    })
}

pub fn classical_norm(f: &AnalyticFunction, p: f64) -> Result<Norm> {
    Hardy::default().classical_norm(f, p)
}

pub fn weighted_norm_boundary(f: &AnalyticFunction, p: f64, nu: &RieszMeasure) -> Result<Norm> {
    Hardy::default().weighted_norm_boundary(f, p, nu)
}

pub fn weighted_norm_interior(f: &AnalyticFunction, p: f64, nu: &RieszMeasure) -> Result<Norm> {
    Hardy::default().weighted_norm_interior(f, p, nu)
}

pub(crate) fn norm_via_half_power(g: &AnalyticFunction, p: f64, nu: &RieszMeasure) -> Result<Norm> {
    Hardy::default().norm_via_half_power(g, p, nu)
}

pub fn norm_report(f: &AnalyticFunction, p: f64, nu: &RieszMeasure) -> Result<NormReport> {
    Hardy::default().norm_report(f, p, nu)
}

pub fn harmonic_norm(h: &HarmonicFunction, p: f64, nu: &RieszMeasure) -> Result<Norm> {
    Hardy::default().harmonic_norm(h, p, nu)
}

pub fn demailly_functional(nu: &RieszMeasure, r: f64, phi: &dyn TestDensity) -> Result<QuadratureResult> {
    Hardy::default().demailly_functional(nu, r, phi)
}

pub fn partial_density(nu: &RieszMeasure, r: f64, theta: f64) -> Result<f64> {
    let q = Hardy::default().partial_density(nu, r, theta)?;
    Ok(q.value)
}

pub fn weak_star_gap(nu: &RieszMeasure, h: &HarmonicFunction, phi: &HarmonicFunction, r: f64) -> Result<WeakStarGap> {
    Hardy::default().weak_star_gap(nu, h, phi, r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn classical_examples() {
        let n = classical_norm(&AnalyticFunction::identity(), 2.0).unwrap().value();
        assert!((n - 1.0).abs() < 1e-12);
        let n = classical_norm(&AnalyticFunction::affine(1.0, 1.0), 2.0)
            .unwrap()
            .value();
        assert!((n - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn weighted_boundary_of_constant() {
        let nu = RieszMeasure::atom(c(0.5, 0.0), 1.0)
            .unwrap()
            .sum(&RieszMeasure::u_beta(0.5).unwrap());
        let n = weighted_norm_boundary(&AnalyticFunction::constant(3.0), 2.0, &nu).unwrap();
        assert!((n.value() - 3.0 * 3f64.sqrt()).abs() < 1e-7, "{n:?}");
    }

    #[test]
    fn divergence_verdicts() {
        let f = AnalyticFunction::power_branch(0.3).unwrap();
        let nu = RieszMeasure::u_beta(0.5).unwrap();
        assert!(weighted_norm_boundary(&f, 2.0, &nu).unwrap().is_divergent());
        assert!(weighted_norm_interior(&f, 2.0, &nu).unwrap().is_divergent());
        let m = membership(&f, 2.0, &nu).unwrap();
        assert_eq!(m.verdict, Verdict::NonMember);
        assert!((m.exponent - 1.1).abs() < 1e-12);
        let m = membership(&AnalyticFunction::power_branch(0.2).unwrap(), 2.0, &nu).unwrap();
        assert_eq!(m.verdict, Verdict::Member);
        let m = membership(&f, 2.0, &RieszMeasure::classical()).unwrap();
        assert_eq!(m.verdict, Verdict::Member);
    }

    #[test]
    fn interior_route_classical() {
        let n = weighted_norm_interior(&AnalyticFunction::identity(), 2.0, &RieszMeasure::classical()).unwrap();
        assert!((n.value() - 1.0).abs() < 1e-7, "{n:?}");
    }

    #[test]
    fn interior_of_constant() {
        let nu = RieszMeasure::atom(c(0.3, 0.0), 2.0).unwrap();
        let n = weighted_norm_interior(&AnalyticFunction::constant(2.0), 2.0, &nu).unwrap();
        assert!((n.value() - 2.0 * 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn routes_agree_for_atom() {
        let f = AnalyticFunction::affine(1.0, 1.0);
        let nu = RieszMeasure::atom(c(0.5, 0.0), 1.0).unwrap();
        let r = norm_report(&f, 2.0, &nu).unwrap();
        assert!(r.agreement_gap < 1e-6, "{r:?}");
    }

    #[test]
    fn demailly_for_origin() {
        let nu = RieszMeasure::classical();
        let phi = AbsPow::new(AnalyticFunction::identity(), 2.0);
        for rho in [0.3f64, 0.8] {
            let v = demailly_functional(&nu, rho.ln(), &phi).unwrap();
            assert!((v.value - rho * rho).abs() < 1e-8, "{v:?}");
        }
        let v = demailly_functional(&nu, -0.5, &ConstantDensity(1.0)).unwrap();
        assert_eq!(v.value, 1.0);
    }

    #[test]
    fn partial_density_examples() {
        let a = c(0.2, 0.6);
        let nu = RieszMeasure::atom(a, 1.0).unwrap();
        let v = partial_density(&nu, -0.3, 1.0).unwrap();
        assert!((v - crate::kernels::poisson(a, 1.0).unwrap()).abs() < 1e-15);
        let nu = RieszMeasure::u_beta(0.5).unwrap();
        let p1 = partial_density(&nu, -0.1, PI).unwrap();
        let p2 = partial_density(&nu, -0.01, PI).unwrap();
        let alpha = nu.boundary_density(PI).unwrap();
        assert!(p1 <= p2 && p2 <= alpha, "{p1} {p2} {alpha}");
    }

    #[test]
    fn harmonic_examples() {
        let h = HarmonicFunction::real_part(AnalyticFunction::identity());
        let n = harmonic_norm(&h, 2.0, &RieszMeasure::classical()).unwrap();
        assert!((n.value() - 0.5f64.sqrt()).abs() < 1e-10);
        let n = harmonic_norm(
            &HarmonicFunction::constant(2.0),
            3.0,
            &RieszMeasure::atom(c(0.1, 0.1), 8.0).unwrap(),
        )
        .unwrap();
        assert!((n.value() - 4.0).abs() < 1e-10);
    }

    #[test]
    fn slope_fit_for_counterexample() {
        let f = AnalyticFunction::power_branch(0.3).unwrap();
        let m = membership(&f, 2.0, &RieszMeasure::u_beta(0.5).unwrap()).unwrap();
        let fit = m.fit.unwrap();
        assert!((fit.predicted + 0.1).abs() < 1e-12);
        assert!(fit.relative_error() < 0.1, "{fit:?}");
    }
}
