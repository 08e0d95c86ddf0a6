//! Blaschke deflation, the outer function with modulus `alpha` on the
//! circle, the isometry `f -> A^{1/p} f` onto classical `H^p`, and the
//! probe over Green-function weights.

use crate::error::{Error, Result};
use crate::functions::AnalyticFunction;
use crate::hardy::{self, membership, Norm, Verdict};
use crate::kernels::{herglotz_at, herglotz_derivative_at, poisson_at};
use crate::measures::{BoundaryDensity, RieszMeasure};
use crate::point::{normalize_angle, DiskPoint};
use crate::quadrature::{CircleSpec, Endpoint, Integral, Integrator, QuadratureResult, SingularAngle, Tolerance};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::Arc;

/// `A(z) = exp(int H(z, theta) log alpha(theta) dlambda(theta))`.
#[derive(Clone, Debug)]
pub struct OuterFunction {
    density: BoundaryDensity,
    integrator: Integrator,
    lower_bound: f64,
}

const OUTER_TOLERANCE: Tolerance = Tolerance { abs: 1e-13, rel: 1e-12 };

impl OuterFunction {
    /// Requires `alpha` bounded below on a 64-point grid.
    pub fn new(density: BoundaryDensity) -> Result<Self> {
        let lower_bound = density.lower_bound(64)?;
        if !(lower_bound > 0.0) {
            return Err(Error::domain(format!(
                "boundary density has no positive lower bound (grid minimum {lower_bound})"
            )));
        }
        Ok(Self {
            density,
            integrator: Integrator::new(OUTER_TOLERANCE),
            lower_bound,
        })
    }

    pub fn from_measure(nu: &RieszMeasure) -> Result<Self> {
        Self::new(nu.density())
    }

    pub fn density(&self) -> &BoundaryDensity {
        &self.density
    }

    /// Grid minimum of `alpha` found at construction.
    pub fn lower_bound(&self) -> f64 {
        self.lower_bound
    }

    fn log_alpha(&self, t: f64) -> f64 {
        self.density.value(t).ln()
    }

    /// `log alpha` is log-singular where `alpha` blows up.
    fn spec(&self, extra_break: Option<f64>) -> CircleSpec {
        let singular: Vec<SingularAngle> = self
            .density
            .singular_angles()
            .into_iter()
            .map(|s| SingularAngle::new(s.angle, Endpoint::Log))
            .collect();
        let mut breaks = self.density.peak_angles();
        breaks.extend(extra_break);
        CircleSpec { singular, breaks }
    }

    /// `int K(theta) (log alpha(theta) - L0 - c sin(theta - theta0)) dlambda`
    /// for a complex kernel, with `L0 = log alpha(theta0)` when finite. With
    /// `linear = Some((k, eta))`, `c` is a difference estimate of the slope
    /// of `log alpha` at `theta0` and `k = int K sin(. - theta0) dlambda` must
    /// be given in closed form; `c k` is added back, so any `c` is exact and a
    /// good one only removes cancellation. The kernel is then taken to peak
    /// like `eta^{-2}` over a width `eta`, which bounds the attainable
    /// absolute accuracy by about `eps |L0| / eta`.
    fn subtracted<K: Fn(f64) -> Complex64>(
        &self,
        kernel: K,
        theta0: f64,
        near: bool,
        linear: Option<(Complex64, f64)>,
    ) -> (Complex64, f64, f64, bool) {
        let raw = self.log_alpha(theta0);
        let l0 = if raw.is_finite() { raw } else { 0.0 };
        let slope = if linear.is_some() && raw.is_finite() {
            let h = 1e-5;
            let c = (self.log_alpha(theta0 + h) - self.log_alpha(theta0 - h)) / (2.0 * h);
            if c.is_finite() {
                c
            } else {
                0.0
            }
        } else {
            0.0
        };
        let spec = self.spec(near.then_some(theta0));
        let integrator = match linear {
            Some((_, eta)) => {
                let floor = 64.0 * f64::EPSILON * (l0.abs() + 1.0) / eta;
                self.integrator.with_tol(Tolerance {
                    abs: OUTER_TOLERANCE.abs.max(floor),
                    ..OUTER_TOLERANCE
                })
            }
            None => self.integrator,
        };
        let part = |im: bool| -> (f64, f64, bool) {
            let g = |t: f64| {
                let k = kernel(t);
                let l = self.log_alpha(t) - l0 - slope * (t - theta0).sin();
                if l == 0.0 {
                    return 0.0;
                }
                (if im { k.im } else { k.re }) * l
            };
            match integrator.circle(g, &spec) {
                Ok(Integral::Finite(q)) => (q.value, q.error_estimate, q.converged),
                _ => (f64::NAN, f64::INFINITY, false),
            }
        };
        let (re, e1, c1) = part(false);
        let (im, e2, c2) = part(true);
        let back = linear.map_or(Complex64::new(0.0, 0.0), |(k, _)| slope * k);
        (Complex64::new(re, im) + back, l0, e1 + e2, c1 && c2)
    }

    /// `alpha~(z) = log A(z)` with error estimate and convergence flag.
    pub fn log_eval_checked(&self, p: &DiskPoint) -> (Complex64, f64, bool) {
        let near = p.z().norm() > 0.5;
        let (v, l0, err, ok) = self.subtracted(|t| herglotz_at(p, t), p.angle(), near, None);
        // int H dlambda = H's value at the centre = 1
        (v + l0, err, ok)
    }

    pub fn log_eval(&self, p: &DiskPoint) -> Complex64 {
        self.log_eval_checked(p).0
    }

    /// `d/dz alpha~(z)`; the kernel derivative has zero mean.
    pub fn log_derivative(&self, p: &DiskPoint) -> Complex64 {
        let near = p.z().norm() > 0.5;
        // H = 1 + 2 sum z^n e^{-int}, so int H' sin(. - theta0) dlambda = -i e^{-i theta0}
        let theta0 = p.angle();
        let k = -Complex64::i() * Complex64::from_polar(1.0, -theta0);
        let eta = 0.5 * p.one_minus_abs2();
        let linear = near.then_some((k, eta));
        self.subtracted(|t| herglotz_derivative_at(p, t), theta0, near, linear)
            .0
    }

    /// `log A*(e^{i theta}) = log alpha(theta) + i (conjugate of log alpha)(theta)`,
    /// the conjugate taken as a principal value by subtracting the value
    /// at `theta`.
    pub fn boundary_log(&self, theta: f64) -> Complex64 {
        let l0 = self.log_alpha(theta);
        if !l0.is_finite() {
            return Complex64::new(l0, 0.0);
        }
        let spec = self.spec(Some(theta));
        let g = |t: f64| {
            let l = self.log_alpha(t) - l0;
            if l == 0.0 {
                return 0.0;
            }
            l / (0.5 * (theta - t)).tan()
        };
        let conj = match self.integrator.circle(g, &spec) {
            Ok(Integral::Finite(q)) => q.value,
            _ => f64::NAN,
        };
        Complex64::new(l0, conj)
    }

    pub fn eval(&self, z: impl Into<DiskPoint>) -> Complex64 {
        self.log_eval(&z.into()).exp()
    }

    /// Algebraic blow-up exponents of `alpha`, as `(angle, e)`.
    pub fn density_exponents(&self) -> Vec<(f64, f64)> {
        self.density
            .singular_angles()
            .into_iter()
            .filter_map(|s| match s.behavior {
                Endpoint::Algebraic(e) => Some((s.angle, e)),
                _ => None,
            })
            .collect()
    }

    /// `A^s` as a tree node.
    pub fn power(self: &Arc<Self>, s: f64) -> AnalyticFunction {
        AnalyticFunction::outer(self.clone(), s)
    }

    /// `|A(0)| = exp(int log alpha dlambda)`.
    pub fn geometric_mean(&self) -> Result<f64> {
        match self.integrator.circle(|t| self.log_alpha(t), &self.spec(None))? {
            Integral::Finite(q) => Ok(q.value.exp()),
            Integral::Divergent { .. } => Ok(0.0),
        }
    }
}

/// `A(z)` with a convergence check.
pub fn outer_eval(a: &OuterFunction, z: impl Into<DiskPoint>) -> Result<Complex64> {
    let p = z.into();
    if !p.is_interior() {
        return Err(Error::domain(format!("outer_eval needs |z| < 1, got {}", p.z())));
    }
    let (l, err, ok) = a.log_eval_checked(&p);
    if !ok {
        return Err(Error::Quadrature(format!(
            "outer function at {}: estimated error {err:e}",
            p.z()
        )));
    }
    Ok(l.exp())
}

/// `z^m prod_j b_{a_j}(z)`.
pub fn blaschke_product(zeros: &[Complex64], origin_order: u32) -> Result<AnalyticFunction> {
    AnalyticFunction::blaschke(zeros.to_vec(), origin_order)
}

/// Truncation of an infinite Blaschke product.
#[derive(Clone, Debug)]
pub struct TruncatedBlaschke {
    pub product: AnalyticFunction,
    pub terms: usize,
    /// Fitted decay exponent `q` of `1 - |a_j| ~ C j^{-q}`.
    pub decay_exponent: f64,
    /// Estimate of `sum_{j > terms} (1 - |a_j|)`.
    pub tail: f64,
}

/// First `terms` factors of the product over the zero sequence
/// `zero(1), zero(2), ...`, after checking the Blaschke condition
/// `sum (1 - |a_j|) < inf` from the decay of the tail.
pub fn blaschke_sequence(zero: impl Fn(usize) -> Complex64, terms: usize) -> Result<TruncatedBlaschke> {
    if terms < 16 {
        return Err(Error::domain("a truncated Blaschke product needs at least 16 terms"));
    }
    let zeros: Vec<Complex64> = (1..=terms).map(&zero).collect();
    let pts: Vec<(f64, f64)> = (terms / 2..=terms)
        .step_by((terms / 64).max(1))
        .map(|j| {
            let d = 1.0 - zero(j).norm();
            ((j as f64).ln(), d.ln())
        })
        .collect();
    let (slope, intercept) =
        crate::measures::least_squares(&pts).ok_or_else(|| Error::domain("cannot fit the zero sequence"))?;
    let q = -slope;
    if q <= 1.0 + 1e-3 {
        return Err(Error::BlaschkeCondition(format!(
            "1 - |a_j| decays like j^(-{q:.4}); the sum diverges"
        )));
    }
    let tail = intercept.exp() * (terms as f64).powf(1.0 - q) / (q - 1.0);
    Ok(TruncatedBlaschke {
        product: AnalyticFunction::blaschke(zeros, 0)?,
        terms,
        decay_exponent: q,
        tail,
    })
}

/// Outcome of dividing the zeros out of `f`.
#[derive(Clone, Debug)]
pub struct Deflation {
    pub blaschke: AnalyticFunction,
    pub g: AnalyticFunction,
    pub report: DeflationReport,
}

#[derive(Clone, Debug)]
pub struct DeflationReport {
    pub norm_f: f64,
    pub norm_g: f64,
    /// `|norm_g - norm_f| / norm_f`.
    pub relative_gap: f64,
    /// Smallest `|g|` on the 64 x 64 polar check grid.
    pub min_abs_g: f64,
    /// How `norm_g` was computed.
    pub route: &'static str,
}

/// Grid of `n x n` polar points strictly inside the disk, offset so
/// that it avoids the origin and the real axis.
pub fn check_grid(n: usize) -> Vec<Complex64> {
    let mut pts = Vec::with_capacity(n * n);
    for i in 0..n {
        let r = (i as f64 + 0.5) / n as f64;
        for j in 0..n {
            let t = 2.0 * PI * (j as f64 + 0.5) / n as f64;
            pts.push(Complex64::from_polar(r, t));
        }
    }
    pts
}

/// `f = beta g` with `beta` the Blaschke product of the zeros of `f`.
/// `norm_f` comes from the boundary route on `f`; `norm_g` from the
/// interior route, through `g^{p/2}` for `p <= 1`.
pub fn deflate(f: &AnalyticFunction, p: f64, nu: &RieszMeasure) -> Result<Deflation> {
    let zeros = f
        .zeros()
        .ok_or_else(|| Error::Unsupported(format!("zeros of {f} are not structurally known")))?;
    let g = f
        .divide_out_zeros()
        .ok_or_else(|| Error::Unsupported(format!("cannot divide the zeros out of {f}")))?;
    if !g.is_nonvanishing() {
        return Err(Error::Unsupported(format!("deflated factor {g} may still vanish")));
    }
    let min_abs_g = check_grid(64)
        .into_iter()
        .map(|z| g.eval(z).norm())
        .fold(f64::INFINITY, f64::min);
    if !(min_abs_g > 0.0) {
        return Err(Error::Unsupported(format!("deflated factor {g} vanishes on the grid")));
    }
    let blaschke = AnalyticFunction::blaschke(zeros.zeros, zeros.origin_order)?;
    let norm_f = hardy::weighted_norm_boundary(f, p, nu)?.require_finite()?;
    let (norm_g, route) = if p <= 1.0 {
        (
            hardy::norm_via_half_power(&g, p, nu)?.require_finite()?,
            "interior via g^(p/2)",
        )
    } else {
        (hardy::weighted_norm_interior(&g, p, nu)?.require_finite()?, "interior")
    };
    Ok(Deflation {
        blaschke,
        g,
        report: DeflationReport {
            norm_f,
            norm_g,
            relative_gap: (norm_g - norm_f).abs() / norm_f,
            min_abs_g,
            route,
        },
    })
}

/// `f -> A^{1/p} f` from `H^p_u` onto `H^p`.
pub fn isometry_apply(f: &AnalyticFunction, p: f64, nu: &RieszMeasure) -> Result<AnalyticFunction> {
    let m = membership(f, p, nu)?;
    if m.verdict != Verdict::Member {
        return Err(Error::NonMember(m.summary()));
    }
    let a = Arc::new(OuterFunction::from_measure(nu)?);
    Ok(a.power(1.0 / p).mul(f))
}

/// `F -> A^{-1/p} F` from `H^p` into `H^p_u`.
pub fn isometry_inverse(f: &AnalyticFunction, p: f64, nu: &RieszMeasure) -> Result<AnalyticFunction> {
    if !(p > 0.0) {
        return Err(Error::domain(format!("p must be positive, got {p}")));
    }
    let a = Arc::new(OuterFunction::from_measure(nu)?);
    Ok(a.power(-1.0 / p).mul(f))
}

/// Both sides of the isometry for one `(f, p, nu)`.
#[derive(Clone, Debug)]
pub struct IsometryCheck {
    /// `||f||_{H^p_u}` by the boundary route.
    pub weighted: f64,
    /// `||A^{1/p} f||_{H^p}` by the interior route for `u = log |z|`, which
    /// evaluates `A` inside the disk rather than on the circle.
    pub classical_image: f64,
    pub relative_gap: f64,
}

pub fn isometry_check(f: &AnalyticFunction, p: f64, nu: &RieszMeasure) -> Result<IsometryCheck> {
    let image = isometry_apply(f, p, nu)?;
    let weighted = hardy::weighted_norm_boundary(f, p, nu)?.require_finite()?;
    let classical_image = hardy::weighted_norm_interior(&image, p, &RieszMeasure::classical())?.require_finite()?;
    Ok(IsometryCheck {
        weighted,
        classical_image,
        relative_gap: (classical_image - weighted).abs() / weighted.max(f64::MIN_POSITIVE),
    })
}

/// One probe weight `G(., t e^{i angle})`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProbeRow {
    pub t: f64,
    /// `||f||^p_{H^p_u}` for `u = G(., t e^{i angle})`.
    pub value: f64,
    pub error_estimate: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProbeReport {
    pub angle: f64,
    pub rows: Vec<ProbeRow>,
    pub max_value: f64,
    /// First `t` whose value exceeds 1.
    pub witness: Option<f64>,
    /// Every value is at most `1 + 1e-10`.
    pub within_unit_ball: bool,
}

/// Weighted norms of `f` over the Green-function weights
/// `u_t = G(., t e^{i angle})`, each of unit Riesz mass.
pub fn ball_probe(f: &AnalyticFunction, p: f64, t_grid: &[f64], angle: f64) -> Result<ProbeReport> {
    let angle = normalize_angle(angle);
    let mut rows = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::domain(format!("probe parameter must lie in (0, 1), got {t}")));
        }
        let a = DiskPoint::new(Complex64::from_polar(t, angle));
        let spec = probe_spec(f, p, angle);
        let g = |theta: f64| poisson_at(&a, theta) * f.boundary(theta).norm().powf(p);
        let q: QuadratureResult = match Integrator::new(Tolerance::new(1e-14, 1e-12)).circle(g, &spec)? {
            Integral::Finite(q) => q,
            Integral::Divergent { angle, exponent } => {
                return Err(Error::Divergent { angle, exponent });
            }
        };
        rows.push(ProbeRow {
            t,
            value: q.value,
            error_estimate: q.error_estimate,
        });
    }
    let max_value = rows.iter().map(|r| r.value).fold(f64::NEG_INFINITY, f64::max);
    let witness = rows.iter().find(|r| r.value > 1.0).map(|r| r.t);
    Ok(ProbeReport {
        angle,
        within_unit_ball: rows.iter().all(|r| r.value <= 1.0 + 1e-10),
        rows,
        max_value,
        witness,
    })
}

fn probe_spec(f: &AnalyticFunction, p: f64, angle: f64) -> CircleSpec {
    let singular = f
        .boundary_singularities()
        .into_iter()
        .map(|s| SingularAngle::algebraic(s.angle, p * s.exponent))
        .collect();
    CircleSpec {
        singular,
        breaks: vec![angle],
    }
}

/// Probe weight as a Riesz measure: the unit atom at `t e^{i angle}`.
pub fn probe_measure(t: f64, angle: f64) -> Result<RieszMeasure> {
    RieszMeasure::atom(Complex64::from_polar(t, angle), 1.0)
}

impl Norm {
    pub fn require_finite(self) -> Result<f64> {
        match self {
            Norm::Finite(v) => Ok(v.norm),
            Norm::Divergent { angle, exponent } => Err(Error::Divergent { angle, exponent }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn outer_of_constant_density() {
        let a = OuterFunction::from_measure(&RieszMeasure::classical()).unwrap();
        for z in [c(0.0, 0.0), c(0.5, -0.3), c(-0.9, 0.1)] {
            assert!((outer_eval(&a, z).unwrap() - c(1.0, 0.0)).norm() < 1e-14);
        }
        let nu = RieszMeasure::classical().scale(2.5).unwrap();
        let a = OuterFunction::from_measure(&nu).unwrap();
        assert!((outer_eval(&a, c(0.3, 0.3)).unwrap() - c(2.5, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn outer_geometric_mean_for_atom() {
        // int log P(a, .) dlambda = log(1 - |a|^2) since log|1 - conj(a) z|^2 is harmonic
        for a in [c(0.5, 0.0), c(0.3, -0.4)] {
            let nu = RieszMeasure::atom(a, 1.0).unwrap();
            let outer = OuterFunction::from_measure(&nu).unwrap();
            let v = outer_eval(&outer, c(0.0, 0.0)).unwrap();
            assert!((v.norm() - (1.0 - a.norm_sqr())).abs() < 1e-12);
            assert!((outer.geometric_mean().unwrap() - (1.0 - a.norm_sqr())).abs() < 1e-12);
        }
    }

    #[test]
    fn outer_matches_closed_form_for_atom() {
        // alpha = P(a, .) = |1 - conj(a) z|^{-2}(1 - |a|^2) on the circle, so
        // A(z) = (1 - |a|^2) / (1 - conj(a) z)^2
        let a = c(0.5, 0.2);
        let outer = OuterFunction::from_measure(&RieszMeasure::atom(a, 1.0).unwrap()).unwrap();
        for z in [c(0.1, 0.2), c(-0.6, 0.3), Complex64::from_polar(0.99, 0.4)] {
            let d = c(1.0, 0.0) - a.conj() * z;
            let want = (1.0 - a.norm_sqr()) / (d * d);
            let got = outer.eval(z);
            assert!((got - want).norm() < 1e-10 * want.norm(), "{z}: {got} vs {want}");
            let dwant = 2.0 * a.conj() / d;
            let dgot = outer.log_derivative(&DiskPoint::new(z));
            assert!((dgot - dwant).norm() < 1e-8, "{z}: {dgot} vs {dwant}");
        }
        let t = 1.3;
        let e = Complex64::from_polar(1.0, t);
        let d = c(1.0, 0.0) - a.conj() * e;
        let want = ((1.0 - a.norm_sqr()) / (d * d)).ln();
        let got = outer.boundary_log(t);
        assert!((got - want).norm() < 1e-9, "{got} vs {want}");
    }

    #[test]
    fn blaschke_examples() {
        let b = blaschke_product(&[c(0.5, 0.0)], 0).unwrap();
        assert!((b.eval(0.0) - c(0.5, 0.0)).norm() < 1e-15);
        let b = blaschke_product(&[], 2).unwrap();
        assert_eq!(b.eval(c(0.3, 0.1)), c(0.3, 0.1) * c(0.3, 0.1));
        let b = blaschke_product(&[c(0.5, 0.0), c(0.0, -0.5)], 0).unwrap();
        for k in 0..1024 {
            let m = b.boundary(2.0 * PI * k as f64 / 1024.0).norm();
            assert!((m - 1.0).abs() < 1e-12);
        }
        assert!(blaschke_product(&[c(1.0, 0.0)], 0).is_err());
    }

    #[test]
    fn blaschke_condition() {
        let ok = blaschke_sequence(|j| c(1.0 - 1.0 / (j as f64 + 1.0).powi(2), 0.0), 256).unwrap();
        assert!((ok.decay_exponent - 2.0).abs() < 0.05);
        assert!(ok.tail > 0.0 && ok.tail < 0.01);
        let bad = blaschke_sequence(|j| c(1.0 - 1.0 / (j as f64 + 1.0), 0.0), 256);
        assert!(matches!(bad, Err(Error::BlaschkeCondition(_))));
    }

    #[test]
    fn probe_constant() {
        let f = AnalyticFunction::constant(1.2);
        let r = ball_probe(&f, 2.0, &[0.5, 0.9], 0.0).unwrap();
        for row in &r.rows {
            assert!((row.value - 1.44).abs() < 1e-12);
        }
        assert_eq!(r.witness, Some(0.5));
        let f = AnalyticFunction::identity().scale(0.9);
        let r = ball_probe(&f, 2.0, &[0.9, 0.99, 0.999, 0.9999], 0.0).unwrap();
        assert!(r.within_unit_ball);
    }

    #[test]
    fn probe_unit_mass() {
        assert_eq!(probe_measure(0.99, 0.0).unwrap().total_mass(), 1.0);
    }
}
