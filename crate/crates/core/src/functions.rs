//! Analytic and harmonic test functions as expression trees.
//!
//! Every node knows its value, its derivative, its zeros inside the disk
//! (when they are structurally visible) and how fast it blows up at the
//! circle. Fractional powers are only formed over trees that provably do
//! not vanish, where a continuous logarithm exists.

use crate::error::{Error, Result};
use crate::factorize::OuterFunction;
use crate::kernels::{blaschke_factor_derivative, blaschke_factor_unchecked};
use crate::point::{normalize_angle, DiskPoint};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Value returned at a boundary singularity.
pub const SINGULAR: Complex64 = Complex64::new(f64::INFINITY, 0.0);

/// Finite Blaschke product `z^m prod_j b_{a_j}(z)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlaschkeProduct {
    pub zeros: Vec<Complex64>,
    pub origin_order: u32,
}

/// Zeros inside the open disk, with multiplicity; zeros at the origin
/// are counted separately.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ZeroSet {
    pub origin_order: u32,
    pub zeros: Vec<Complex64>,
}

impl ZeroSet {
    pub fn is_empty(&self) -> bool {
        self.origin_order == 0 && self.zeros.is_empty()
    }

    fn push(&mut self, a: Complex64) {
        if a == ZERO {
            self.origin_order += 1;
        } else {
            self.zeros.push(a);
        }
    }

    fn extend(&mut self, other: ZeroSet) {
        self.origin_order += other.origin_order;
        self.zeros.extend(other.zeros);
    }
}

/// `|f| ~ |theta - angle|^{-exponent}` near `e^{i angle}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundarySingularity {
    pub angle: f64,
    pub exponent: f64,
}

#[derive(Debug)]
enum Node {
    Constant(Complex64),
    Identity,
    Monomial(u32),
    /// `a + b z`
    Affine(Complex64, Complex64),
    /// `(a + b z) / (c + d z)` with the pole outside the closed disk.
    Mobius([Complex64; 4]),
    /// `(1 - z)^{-a_pow}`
    PowerBranch(f64),
    Polynomial(Vec<Complex64>),
    Blaschke(BlaschkeProduct),
    /// `A^s`
    Outer(Arc<OuterFunction>, f64),
    Product(Vec<AnalyticFunction>),
    Sum(Vec<AnalyticFunction>),
    /// Real power of a nonvanishing tree along its continuous logarithm.
    Power(AnalyticFunction, f64),
    Scale(Complex64, AnalyticFunction),
}

/// Analytic function on the disk, cheap to clone.
#[derive(Clone, Debug)]
pub struct AnalyticFunction(Arc<Node>);

fn affine_zero(a: Complex64, b: Complex64) -> Option<Complex64> {
    if b == ZERO {
        None
    } else {
        Some(-a / b)
    }
}

fn check_coeff(c: Complex64, what: &str) -> Result<()> {
    if c.re.is_finite() && c.im.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{what} must be finite, got {c}")))
    }
}

impl AnalyticFunction {
    fn node(n: Node) -> Self {
        Self(Arc::new(n))
    }

    pub fn constant(c: impl Into<Complex64>) -> Self {
        Self::node(Node::Constant(c.into()))
    }

    pub fn identity() -> Self {
        Self::node(Node::Identity)
    }

    pub fn monomial(m: u32) -> Self {
        match m {
            0 => Self::constant(1.0),
            1 => Self::identity(),
            _ => Self::node(Node::Monomial(m)),
        }
    }

    /// `a + b z`.
    pub fn affine(a: impl Into<Complex64>, b: impl Into<Complex64>) -> Self {
        Self::node(Node::Affine(a.into(), b.into()))
    }

    /// `(a + b z) / (c + d z)`; the pole must lie outside the closed disk.
    pub fn mobius(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        for x in [a, b, c, d] {
            check_coeff(x, "Mobius coefficient")?;
        }
        if !(d.norm() < c.norm()) {
            return Err(Error::domain(format!(
                "pole of ({a} + {b} z)/({c} + {d} z) is not outside the closed disk"
            )));
        }
        Ok(Self::node(Node::Mobius([a, b, c, d])))
    }

    /// `(1 - z)^{-a_pow}` on the principal branch, `0 < a_pow < 1`.
    pub fn power_branch(a_pow: f64) -> Result<Self> {
        if !(a_pow > 0.0 && a_pow < 1.0) {
            return Err(Error::domain(format!("a_pow must lie in (0, 1), got {a_pow}")));
        }
        Ok(Self::node(Node::PowerBranch(a_pow)))
    }

    /// `sum_k coeffs[k] z^k`.
    pub fn polynomial(coeffs: Vec<Complex64>) -> Result<Self> {
        for &c in &coeffs {
            check_coeff(c, "coefficient")?;
        }
        let mut coeffs = coeffs;
        while coeffs.len() > 1 && *coeffs.last().unwrap() == ZERO {
            coeffs.pop();
        }
        Ok(match coeffs.len() {
            0 => Self::constant(0.0),
            1 => Self::constant(coeffs[0]),
            2 => Self::affine(coeffs[0], coeffs[1]),
            _ => Self::node(Node::Polynomial(coeffs)),
        })
    }

    /// Degree-`n` Taylor polynomial of `(1 - z)^{-a_pow}` at 0.
    pub fn power_branch_taylor(a_pow: f64, n: usize) -> Result<Self> {
        if !(a_pow > 0.0 && a_pow < 1.0) {
            return Err(Error::domain(format!("a_pow must lie in (0, 1), got {a_pow}")));
        }
        let mut c = Vec::with_capacity(n + 1);
        let mut ck = 1.0;
        c.push(Complex64::new(1.0, 0.0));
        for k in 1..=n {
            ck *= (k as f64 - 1.0 + a_pow) / k as f64;
            c.push(Complex64::new(ck, 0.0));
        }
        Self::polynomial(c)
    }

    pub fn blaschke(zeros: Vec<Complex64>, origin_order: u32) -> Result<Self> {
        for &a in &zeros {
            let r = a.norm();
            if !(r > 0.0 && r < 1.0) {
                return Err(Error::domain(format!(
                    "Blaschke zeros must satisfy 0 < |a| < 1, got {a}"
                )));
            }
        }
        if zeros.is_empty() {
            return Ok(Self::monomial(origin_order));
        }
        Ok(Self::node(Node::Blaschke(BlaschkeProduct { zeros, origin_order })))
    }

    /// `A^s` for an outer function `A`.
    pub fn outer(outer: Arc<OuterFunction>, s: f64) -> Self {
        Self::node(Node::Outer(outer, s))
    }

    pub fn product(factors: Vec<AnalyticFunction>) -> Self {
        if factors.len() == 1 {
            return factors.into_iter().next().unwrap();
        }
        Self::node(Node::Product(factors))
    }

    pub fn sum(terms: Vec<AnalyticFunction>) -> Self {
        if terms.len() == 1 {
            return terms.into_iter().next().unwrap();
        }
        Self::node(Node::Sum(terms))
    }

    pub fn mul(&self, other: &AnalyticFunction) -> Self {
        Self::product(vec![self.clone(), other.clone()])
    }

    pub fn add(&self, other: &AnalyticFunction) -> Self {
        Self::sum(vec![self.clone(), other.clone()])
    }

    pub fn scale(&self, c: impl Into<Complex64>) -> Self {
        Self::node(Node::Scale(c.into(), self.clone()))
    }

    /// `self^e`; `self` must be structurally nonvanishing.
    pub fn powr(&self, e: f64) -> Result<Self> {
        if !e.is_finite() {
            return Err(Error::domain(format!("exponent must be finite, got {e}")));
        }
        if !self.is_nonvanishing() {
            return Err(Error::domain(format!(
                "real power {e} of a tree that may vanish: {self}"
            )));
        }
        Ok(Self::node(Node::Power(self.clone(), e)))
    }

    /// `f(z)`; [`SINGULAR`] at a boundary singularity.
    pub fn eval(&self, z: impl Into<DiskPoint>) -> Complex64 {
        self.eval_with_derivative(&z.into()).0
    }

    /// Checked evaluation: `|z| <= 1` required.
    pub fn try_eval(&self, z: impl Into<DiskPoint>) -> Result<Complex64> {
        let p = z.into();
        if p.one_minus_abs2() < -1e-12 {
            return Err(Error::domain(format!("{} lies outside the closed disk", p.z())));
        }
        Ok(self.eval(p))
    }

    /// Value on the circle at angle `theta`.
    pub fn boundary(&self, theta: f64) -> Complex64 {
        self.eval(DiskPoint::boundary(theta))
    }

    /// `(f(z), f'(z))`.
    pub fn eval_with_derivative(&self, p: &DiskPoint) -> (Complex64, Complex64) {
        let z = p.z();
        match &*self.0 {
            Node::Constant(c) => (*c, ZERO),
            Node::Identity => (z, ONE),
            Node::Monomial(m) => {
                let zm1 = z.powu(m - 1);
                (zm1 * z, zm1 * *m as f64)
            }
            Node::Affine(a, b) => (a + b * z, *b),
            Node::Mobius([a, b, c, d]) => {
                let n = a + b * z;
                let den = c + d * z;
                (n / den, (b * den - d * n) / (den * den))
            }
            Node::PowerBranch(a) => {
                let w = p.one_minus_z();
                if w == ZERO {
                    return (SINGULAR, SINGULAR);
                }
                let f = (-*a * w.ln()).exp();
                (f, *a * f / w)
            }
            Node::Polynomial(c) => {
                let mut f = ZERO;
                let mut df = ZERO;
                for &ck in c.iter().rev() {
                    df = df * z + f;
                    f = f * z + ck;
                }
                (f, df)
            }
            Node::Blaschke(b) => {
                let mut factors: Vec<(Complex64, Complex64)> = b
                    .zeros
                    .iter()
                    .map(|&a| (blaschke_factor_unchecked(z, a), blaschke_factor_derivative(z, a)))
                    .collect();
                if b.origin_order > 0 {
                    let m = b.origin_order;
                    let zm1 = z.powu(m - 1);
                    factors.push((zm1 * z, zm1 * m as f64));
                }
                product_rule(&factors)
            }
            Node::Outer(a, s) => {
                if p.is_boundary() {
                    let l = a.boundary_log(p.angle());
                    if l.re.is_infinite() {
                        return (SINGULAR, SINGULAR);
                    }
                    ((*s * l).exp(), Complex64::new(f64::NAN, f64::NAN))
                } else {
                    let f = (*s * a.log_eval(p)).exp();
                    (f, *s * a.log_derivative(p) * f)
                }
            }
            Node::Product(fs) => {
                let factors: Vec<_> = fs.iter().map(|f| f.eval_with_derivative(p)).collect();
                product_rule(&factors)
            }
            Node::Sum(fs) => fs.iter().fold((ZERO, ZERO), |(f, df), g| {
                let (v, dv) = g.eval_with_derivative(p);
                (f + v, df + dv)
            }),
            Node::Power(base, e) => {
                let l = base.log_eval(p).expect("power base is nonvanishing");
                if l.re.is_infinite() {
                    if l.re > 0.0 && *e > 0.0 || l.re < 0.0 && *e < 0.0 {
                        return (SINGULAR, SINGULAR);
                    }
                    return (ZERO, ZERO);
                }
                let f = (*e * l).exp();
                let (b, db) = base.eval_with_derivative(p);
                (f, *e * f * db / b)
            }
            Node::Scale(c, f) => {
                let (v, dv) = f.eval_with_derivative(p);
                (c * v, c * dv)
            }
        }
    }

    /// `f'(z)`.
    pub fn derivative(&self, z: impl Into<DiskPoint>) -> Complex64 {
        self.eval_with_derivative(&z.into()).1
    }

    /// Continuous logarithm on the disk, for structurally nonvanishing
    /// trees; `None` otherwise.
    pub fn log_eval(&self, p: &DiskPoint) -> Option<Complex64> {
        let z = p.z();
        match &*self.0 {
            Node::Constant(c) => (*c != ZERO).then(|| c.ln()),
            Node::Identity | Node::Monomial(_) => None,
            Node::Affine(a, b) => affine_log(*a, *b, z),
            Node::Mobius([a, b, c, d]) => Some(affine_log(*a, *b, z)? - affine_log(*c, *d, z)?),
            Node::PowerBranch(a) => {
                let w = p.one_minus_z();
                Some(if w == ZERO {
                    Complex64::new(f64::INFINITY, 0.0)
                } else {
                    -*a * w.ln()
                })
            }
            Node::Polynomial(c) => {
                // only the degree-0/1 cases are normalised away at
                // construction; quadratics are split by their roots
                let roots = quadratic_roots(c)?;
                let mut l = c[2].ln();
                for r in roots {
                    l += affine_log(-r, ONE, z)?;
                }
                Some(l)
            }
            Node::Blaschke(_) => None,
            Node::Outer(a, s) => Some(if p.is_boundary() {
                *s * a.boundary_log(p.angle())
            } else {
                *s * a.log_eval(p)
            }),
            Node::Product(fs) => fs.iter().try_fold(ZERO, |acc, f| Some(acc + f.log_eval(p)?)),
            Node::Sum(_) => None,
            Node::Power(base, e) => Some(*e * base.log_eval(p)?),
            Node::Scale(c, f) => {
                if *c == ZERO {
                    None
                } else {
                    Some(c.ln() + f.log_eval(p)?)
                }
            }
        }
    }

    /// Whether the tree is known not to vanish on the open disk.
    pub fn is_nonvanishing(&self) -> bool {
        match &*self.0 {
            Node::Constant(c) => *c != ZERO,
            Node::Identity | Node::Monomial(_) | Node::Blaschke(_) | Node::Sum(_) => false,
            Node::Affine(a, b) => affine_nonvanishing(*a, *b),
            Node::Mobius([a, b, ..]) => affine_nonvanishing(*a, *b),
            Node::PowerBranch(_) | Node::Outer(..) | Node::Power(..) => true,
            Node::Polynomial(c) => quadratic_roots(c)
                .map(|r| r.iter().all(|x| x.norm() >= 1.0))
                .unwrap_or(false),
            Node::Product(fs) => fs.iter().all(|f| f.is_nonvanishing()),
            Node::Scale(c, f) => *c != ZERO && f.is_nonvanishing(),
        }
    }

    /// Zeros inside the open disk, when the tree exposes them.
    pub fn zeros(&self) -> Option<ZeroSet> {
        let mut out = ZeroSet::default();
        match &*self.0 {
            Node::Constant(c) => {
                if *c == ZERO {
                    return None;
                }
            }
            Node::Identity => out.origin_order = 1,
            Node::Monomial(m) => out.origin_order = *m,
            Node::Affine(a, b) | Node::Mobius([a, b, _, _]) => {
                if *a == ZERO && *b == ZERO {
                    return None;
                }
                if let Some(r) = affine_zero(*a, *b).filter(|r| r.norm() < 1.0) {
                    out.push(r);
                }
            }
            Node::PowerBranch(_) | Node::Outer(..) | Node::Power(..) => {}
            Node::Polynomial(c) => {
                for r in quadratic_roots(c)? {
                    if r.norm() < 1.0 {
                        out.push(r);
                    }
                }
            }
            Node::Blaschke(b) => {
                out.origin_order = b.origin_order;
                out.zeros = b.zeros.clone();
            }
            Node::Product(fs) => {
                for f in fs {
                    out.extend(f.zeros()?);
                }
            }
            Node::Sum(_) => return None,
            Node::Scale(c, f) => {
                if *c == ZERO {
                    return None;
                }
                out = f.zeros()?;
            }
        }
        Some(out)
    }

    /// Signed growth orders at the circle: positive means blow-up,
    /// negative a boundary zero.
    fn growth(&self) -> Vec<BoundarySingularity> {
        match &*self.0 {
            Node::PowerBranch(a) => vec![BoundarySingularity {
                angle: 0.0,
                exponent: *a,
            }],
            Node::Outer(a, s) => a
                .density_exponents()
                .into_iter()
                .map(|(angle, e)| BoundarySingularity { angle, exponent: s * e })
                .collect(),
            Node::Affine(a, b) | Node::Mobius([a, b, _, _]) => affine_zero(*a, *b)
                .filter(|r| (r.norm() - 1.0).abs() < 1e-14)
                .map(|r| {
                    vec![BoundarySingularity {
                        angle: normalize_angle(r.arg()),
                        exponent: -1.0,
                    }]
                })
                .unwrap_or_default(),
            Node::Product(fs) => {
                let mut acc = Vec::new();
                for f in fs {
                    merge(&mut acc, f.growth(), |x, y| x + y);
                }
                acc
            }
            Node::Sum(fs) => {
                let mut acc = Vec::new();
                for f in fs {
                    let g: Vec<_> = f.growth().into_iter().filter(|s| s.exponent > 0.0).collect();
                    merge(&mut acc, g, f64::max);
                }
                acc
            }
            Node::Power(base, e) => base
                .growth()
                .into_iter()
                .map(|s| BoundarySingularity {
                    exponent: s.exponent * e,
                    ..s
                })
                .collect(),
            Node::Scale(_, f) => f.growth(),
            _ => Vec::new(),
        }
    }

    /// Angles where `|f|` blows up, with exponents.
    pub fn boundary_singularities(&self) -> Vec<BoundarySingularity> {
        let mut g: Vec<_> = self.growth().into_iter().filter(|s| s.exponent > 0.0).collect();
        g.sort_by(|a, b| a.angle.total_cmp(&b.angle));
        g
    }

    /// Zeros on the circle as `(angle, order)`, where `|f| ~ |theta - angle|^order`.
    pub fn boundary_zeros(&self) -> Vec<(f64, f64)> {
        let mut z: Vec<_> = self
            .growth()
            .into_iter()
            .filter(|s| s.exponent < 0.0)
            .map(|s| (s.angle, -s.exponent))
            .collect();
        z.sort_by(|a, b| a.0.total_cmp(&b.0));
        z
    }

    /// Whether `f` is a polynomial-like tree without any boundary
    /// singularity, so that circle means converge spectrally.
    pub fn is_bounded(&self) -> bool {
        self.boundary_singularities().is_empty()
    }

    /// `f / beta` with the Blaschke product of the zeros divided out
    /// factor by factor. `None` when the zeros are not structurally known.
    pub fn divide_out_zeros(&self) -> Option<AnalyticFunction> {
        Some(match &*self.0 {
            Node::Identity | Node::Monomial(_) | Node::Blaschke(_) => Self::constant(1.0),
            Node::Affine(a, b) => deflate_affine(*a, *b),
            Node::Mobius([a, b, c, d]) => {
                let num = deflate_affine(*a, *b);
                num.mul(&Self::mobius(ONE, ZERO, *c, *d).ok()?)
            }
            Node::Polynomial(c) => {
                let roots = quadratic_roots(c)?;
                let factors = roots.iter().map(|&r| deflate_affine(-r, ONE)).collect::<Vec<_>>();
                Self::product(factors).scale(c[2])
            }
            Node::Product(fs) => Self::product(fs.iter().map(|f| f.divide_out_zeros()).collect::<Option<Vec<_>>>()?),
            Node::Scale(c, f) => f.divide_out_zeros()?.scale(*c),
            Node::Sum(_) => return None,
            Node::Constant(c) if *c == ZERO => return None,
            _ => self.clone(),
        })
    }

    /// `|f*(e^{i theta})|`, without forming phases where the tree allows.
    pub fn boundary_abs(&self, theta: f64) -> f64 {
        match &*self.0 {
            Node::Outer(a, s) => a.density().value(theta).powf(*s),
            Node::Product(fs) => fs.iter().map(|f| f.boundary_abs(theta)).product(),
            Node::Power(base, e) => base.boundary_abs(theta).powf(*e),
            Node::Scale(c, f) => c.norm() * f.boundary_abs(theta),
            Node::Blaschke(_) => 1.0,
            _ => self.boundary(theta).norm(),
        }
    }

    /// Angles where `|f*|` is smooth but sharply varying: zeros and poles
    /// close to the circle, peaks of outer densities.
    pub fn feature_angles(&self) -> Vec<f64> {
        let near = |a: Complex64| {
            let m = a.norm();
            (m > 0.75 && m < 1.0 / 0.75).then(|| normalize_angle(a.arg()))
        };
        match &*self.0 {
            Node::Affine(a, b) => affine_zero(*a, *b).and_then(near).into_iter().collect(),
            Node::Mobius([a, b, c, d]) => affine_zero(*a, *b)
                .and_then(near)
                .into_iter()
                .chain(affine_zero(*c, *d).and_then(near))
                .collect(),
            Node::Polynomial(c) => quadratic_roots(c)
                .map(|r| r.into_iter().filter_map(near).collect())
                .unwrap_or_default(),
            Node::Blaschke(b) => b.zeros.iter().filter_map(|&a| near(a)).collect(),
            Node::Outer(a, _) => a.density().peak_angles(),
            Node::Product(fs) | Node::Sum(fs) => fs.iter().flat_map(|f| f.feature_angles()).collect(),
            Node::Power(f, _) | Node::Scale(_, f) => f.feature_angles(),
            _ => Vec::new(),
        }
    }

    /// `Delta~ |f|^p = (p^2 / 2 pi) |f|^{p-2} |f'|^2`; zero at zeros of `f`.
    pub fn laplacian_abs_p(&self, p: f64, z: &DiskPoint) -> f64 {
        laplacian_abs_p(self, p, z)
    }
}

fn product_rule(factors: &[(Complex64, Complex64)]) -> (Complex64, Complex64) {
    let mut f = ONE;
    let mut df = ZERO;
    for &(v, dv) in factors {
        df = df * v + f * dv;
        f *= v;
    }
    (f, df)
}

fn affine_nonvanishing(a: Complex64, b: Complex64) -> bool {
    a != ZERO && b.norm() <= a.norm()
}

/// `log(a + b z)` continuous on the disk when `|b| <= |a|`.
fn affine_log(a: Complex64, b: Complex64, z: Complex64) -> Option<Complex64> {
    if !affine_nonvanishing(a, b) {
        return None;
    }
    Some(a.ln() + (ONE + b / a * z).ln())
}

/// Roots of a quadratic, `None` for other degrees.
fn quadratic_roots(c: &[Complex64]) -> Option<[Complex64; 2]> {
    if c.len() != 3 || c[2] == ZERO {
        return None;
    }
    let (a, b, cc) = (c[2], c[1], c[0]);
    let disc = (b * b - 4.0 * a * cc).sqrt();
    // pick the sign avoiding cancellation
    let q = if (b.conj() * disc).re >= 0.0 {
        -0.5 * (b + disc)
    } else {
        -0.5 * (b - disc)
    };
    if q == ZERO {
        return Some([ZERO, ZERO]);
    }
    Some([q / a, cc / q])
}

/// `(a + b z) / b_r(z)` for the zero `r = -a/b` when it lies in the disk.
fn deflate_affine(a: Complex64, b: Complex64) -> AnalyticFunction {
    match affine_zero(a, b) {
        Some(r) if r.norm() < 1.0 => {
            if r == ZERO {
                AnalyticFunction::constant(b)
            } else {
                // b (z - r) / [(-conj r/|r|)(z - r)/(1 - conj r z)] = k (1 - conj r z)
                let k = -b * r.norm() / r.conj();
                AnalyticFunction::affine(k, -k * r.conj())
            }
        }
        _ => AnalyticFunction::affine(a, b),
    }
}

fn merge(acc: &mut Vec<BoundarySingularity>, new: Vec<BoundarySingularity>, op: impl Fn(f64, f64) -> f64) {
    for s in new {
        if let Some(t) = acc
            .iter_mut()
            .find(|t| crate::point::angular_distance(t.angle, s.angle) < 1e-14)
        {
            t.exponent = op(t.exponent, s.exponent);
        } else {
            acc.push(s);
        }
    }
}

/// `Delta~ |f|^p` at `z`.
pub fn laplacian_abs_p(f: &AnalyticFunction, p: f64, z: &DiskPoint) -> f64 {
    let (v, dv) = f.eval_with_derivative(z);
    let m = v.norm();
    if m == 0.0 {
        return if p == 2.0 { 2.0 / PI * dv.norm_sqr() } else { 0.0 };
    }
    p * p / (2.0 * PI) * m.powf(p - 2.0) * dv.norm_sqr()
}

pub fn eval(f: &AnalyticFunction, z: impl Into<DiskPoint>) -> Complex64 {
    f.eval(z)
}

pub fn boundary_singularities(f: &AnalyticFunction) -> Vec<BoundarySingularity> {
    f.boundary_singularities()
}

fn fmt_complex(c: Complex64) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else if c.re == 0.0 {
        format!("{}i", c.im)
    } else if c.im < 0.0 {
        format!("{}{}i", c.re, c.im)
    } else {
        format!("{}+{}i", c.re, c.im)
    }
}

impl fmt::Display for AnalyticFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            Node::Constant(c) => write!(f, "const {}", fmt_complex(*c)),
            Node::Identity => write!(f, "z"),
            Node::Monomial(m) => write!(f, "mono {m}"),
            Node::Affine(a, b) => write!(f, "affine {} {}", fmt_complex(*a), fmt_complex(*b)),
            Node::Mobius(c) => write!(
                f,
                "mobius {} {} {} {}",
                fmt_complex(c[0]),
                fmt_complex(c[1]),
                fmt_complex(c[2]),
                fmt_complex(c[3])
            ),
            Node::PowerBranch(a) => write!(f, "pow {a}"),
            Node::Polynomial(c) => {
                write!(f, "(poly")?;
                for x in c {
                    write!(f, " {}", fmt_complex(*x))?;
                }
                write!(f, ")")
            }
            Node::Blaschke(b) => {
                write!(f, "(blaschke {}", b.origin_order)?;
                for x in &b.zeros {
                    write!(f, " {}", fmt_complex(*x))?;
                }
                write!(f, ")")
            }
            Node::Outer(a, s) => write!(f, "outer {s} ({})", a.density().source()),
            Node::Product(fs) => write_nary(f, "mul", fs),
            Node::Sum(fs) => write_nary(f, "add", fs),
            Node::Power(base, e) => write!(f, "powr {e} {base}"),
            Node::Scale(c, g) => write!(f, "scale {} {g}", fmt_complex(*c)),
        }
    }
}

fn write_nary(f: &mut fmt::Formatter<'_>, op: &str, fs: &[AnalyticFunction]) -> fmt::Result {
    write!(f, "({op}")?;
    for g in fs {
        write!(f, " {g}")?;
    }
    write!(f, ")")
}

/// Real-valued harmonic function on the disk.
#[derive(Clone, Debug)]
pub enum HarmonicFunction {
    RealPart(AnalyticFunction),
    ImagPart(AnalyticFunction),
    /// Poisson extension of equispaced boundary samples, stored as the
    /// real part of the analytic polynomial with the same Fourier
    /// coefficients.
    PoissonExtension {
        samples: usize,
        analytic: AnalyticFunction,
    },
}

impl HarmonicFunction {
    pub fn real_part(f: AnalyticFunction) -> Self {
        HarmonicFunction::RealPart(f)
    }

    pub fn imag_part(f: AnalyticFunction) -> Self {
        HarmonicFunction::ImagPart(f)
    }

    pub fn constant(c: f64) -> Self {
        HarmonicFunction::RealPart(AnalyticFunction::constant(c))
    }

    /// Poisson extension of `samples[k] = h(2 pi k / n)` through its
    /// discrete Fourier coefficients.
    pub fn poisson_extension(samples: &[f64]) -> Result<Self> {
        let n = samples.len();
        if n < 3 {
            return Err(Error::domain("need at least 3 boundary samples"));
        }
        let half = (n - 1) / 2;
        let mut coeffs = Vec::with_capacity(half + 1);
        for k in 0..=half {
            let mut c = ZERO;
            for (j, &s) in samples.iter().enumerate() {
                let t = -2.0 * PI * (k * j) as f64 / n as f64;
                c += s * Complex64::new(t.cos(), t.sin());
            }
            c /= n as f64;
            coeffs.push(if k == 0 { c } else { 2.0 * c });
        }
        Ok(HarmonicFunction::PoissonExtension {
            samples: n,
            analytic: AnalyticFunction::polynomial(coeffs)?,
        })
    }

    fn analytic(&self) -> &AnalyticFunction {
        match self {
            HarmonicFunction::RealPart(f) | HarmonicFunction::ImagPart(f) => f,
            HarmonicFunction::PoissonExtension { analytic, .. } => analytic,
        }
    }

    pub fn eval(&self, z: impl Into<DiskPoint>) -> f64 {
        let v = self.analytic().eval(z);
        match self {
            HarmonicFunction::ImagPart(_) => v.im,
            _ => v.re,
        }
    }

    pub fn boundary(&self, theta: f64) -> f64 {
        self.eval(DiskPoint::boundary(theta))
    }

    /// `(h, dh/dx, dh/dy)`.
    pub fn eval_with_gradient(&self, z: &DiskPoint) -> (f64, f64, f64) {
        let (v, dv) = self.analytic().eval_with_derivative(z);
        match self {
            HarmonicFunction::ImagPart(_) => (v.im, dv.im, dv.re),
            _ => (v.re, dv.re, -dv.im),
        }
    }

    /// `Delta~ |h|^p = (p (p - 1) / 2 pi) |h|^{p-2} |grad h|^2` away from
    /// zeros of `h`.
    pub fn laplacian_abs_p(&self, p: f64, z: &DiskPoint) -> f64 {
        let (h, hx, hy) = self.eval_with_gradient(z);
        let g2 = hx * hx + hy * hy;
        if h == 0.0 {
            return if p == 2.0 { g2 / PI } else { 0.0 };
        }
        p * (p - 1.0) / (2.0 * PI) * h.abs().powf(p - 2.0) * g2
    }

    pub fn boundary_singularities(&self) -> Vec<BoundarySingularity> {
        self.analytic().boundary_singularities()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn fixtures() -> Vec<AnalyticFunction> {
        let pb = AnalyticFunction::power_branch(0.3).unwrap();
        vec![
            AnalyticFunction::identity(),
            AnalyticFunction::affine(1.0, 1.0),
            AnalyticFunction::monomial(3),
            pb.clone(),
            pb.powr(2.0).unwrap(),
            AnalyticFunction::blaschke(vec![c(0.5, 0.0), c(0.0, -0.5)], 1).unwrap(),
            AnalyticFunction::mobius(ONE, ZERO, ONE, c(-0.8, 0.0)).unwrap(),
            AnalyticFunction::polynomial(vec![c(1.0, 0.0), c(0.0, 2.0), c(-0.5, 0.1), c(0.3, 0.0)]).unwrap(),
            AnalyticFunction::affine(-0.5, 1.0)
                .mul(&pb)
                .add(&AnalyticFunction::constant(c(0.2, 0.1))),
            AnalyticFunction::affine(2.0, 0.5).powr(0.7).unwrap().scale(c(0.0, 1.5)),
        ]
    }

    #[test]
    fn spec_values() {
        assert_eq!(AnalyticFunction::identity().eval(0.3), c(0.3, 0.0));
        assert_eq!(AnalyticFunction::power_branch(0.3).unwrap().eval(0.0), ONE);
        let b = AnalyticFunction::blaschke(vec![c(0.5, 0.0)], 0).unwrap();
        assert!((b.eval(0.0) - c(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn singular_sentinel() {
        let f = AnalyticFunction::power_branch(0.3).unwrap();
        assert_eq!(f.boundary(0.0), SINGULAR);
        assert!(f.boundary(0.5).norm().is_finite());
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let h = 1e-6;
        for f in fixtures() {
            for k in 0..100 {
                let r = 0.9 * ((k * 37 % 100) as f64 / 100.0);
                let t = 2.0 * PI * (k * 61 % 100) as f64 / 100.0;
                let z = Complex64::from_polar(r, t);
                let fd = (f.eval(z + h) - f.eval(z - h)) / (2.0 * h);
                let d = f.derivative(z);
                assert!((fd - d).norm() <= 1e-6 * d.norm().max(1.0), "{f} at {z}: {fd} vs {d}");
            }
        }
    }

    #[test]
    fn singularity_exponents() {
        let f = AnalyticFunction::power_branch(0.3).unwrap();
        assert_eq!(
            f.boundary_singularities(),
            vec![BoundarySingularity {
                angle: 0.0,
                exponent: 0.3
            }]
        );
        let f2 = f.mul(&f);
        assert!((f2.boundary_singularities()[0].exponent - 0.6).abs() < 1e-15);
        let f2 = f.powr(2.0).unwrap();
        assert!((f2.boundary_singularities()[0].exponent - 0.6).abs() < 1e-15);
        let poly = AnalyticFunction::polynomial(vec![ONE, ONE, ONE]).unwrap();
        assert!(poly.boundary_singularities().is_empty());
        assert!(AnalyticFunction::affine(1.0, 1.0).boundary_singularities().is_empty());
        // a boundary zero cancels part of the blow-up
        let g = AnalyticFunction::affine(1.0, -1.0).mul(&f);
        assert!(g.boundary_singularities().is_empty());
    }

    #[test]
    fn zero_sets() {
        let f = AnalyticFunction::affine(-0.5, 1.0).mul(&AnalyticFunction::affine(c(0.0, 0.5), ONE));
        let z = f.zeros().unwrap();
        assert_eq!(z.zeros, vec![c(0.5, 0.0), c(0.0, -0.5)]);
        assert_eq!(AnalyticFunction::monomial(2).zeros().unwrap().origin_order, 2);
        assert!(AnalyticFunction::affine(1.0, 1.0)
            .add(&AnalyticFunction::identity())
            .zeros()
            .is_none());
        let q = AnalyticFunction::polynomial(vec![c(-0.25, 0.0), ZERO, ONE]).unwrap();
        let mut zs = q.zeros().unwrap().zeros;
        zs.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert!((zs[0] - c(-0.5, 0.0)).norm() < 1e-15 && (zs[1] - c(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn deflation_is_structural() {
        let f = AnalyticFunction::affine(-0.5, 1.0);
        let g = f.divide_out_zeros().unwrap();
        assert!(g.is_nonvanishing());
        // z - 0.5 = b(z) * (-(1 - 0.5 z))
        assert!((g.eval(0.0) - c(-1.0, 0.0)).norm() < 1e-15);
        assert!((g.eval(0.7) - c(-(1.0 - 0.35), 0.0)).norm() < 1e-15);
        for k in 0..32 {
            let t = 2.0 * PI * k as f64 / 32.0;
            assert!((f.boundary(t).norm() - g.boundary(t).norm()).abs() < 1e-14);
        }
    }

    #[test]
    fn power_tree_against_modulus() {
        let g = AnalyticFunction::affine(1.0, 0.6).mul(&AnalyticFunction::power_branch(0.2).unwrap());
        for p in [0.5, 1.0, 1.5] {
            let h = g.powr(p / 2.0).unwrap();
            for k in 0..20 {
                let z = Complex64::from_polar(0.05 * k as f64, k as f64);
                let v = g.eval(z);
                let w = h.eval(z);
                assert!((w.norm_sqr() - v.norm().powf(p)).abs() < 1e-12);
                let phase = (v / v.norm()).powf(p);
                assert!((w * w - v.norm().powf(p) * phase).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn powers_rejected_on_vanishing_trees() {
        assert!(AnalyticFunction::identity().powr(0.5).is_err());
        assert!(AnalyticFunction::affine(-0.5, 1.0).powr(0.5).is_err());
        assert!(AnalyticFunction::affine(1.0, 0.5).powr(0.5).is_ok());
    }

    #[test]
    fn laplacian_examples() {
        let p = DiskPoint::new(c(0.3, 0.4));
        assert_eq!(AnalyticFunction::constant(2.0).laplacian_abs_p(1.5, &p), 0.0);
        assert!((AnalyticFunction::identity().laplacian_abs_p(2.0, &p) - 2.0 / PI).abs() < 1e-15);
        let z2 = AnalyticFunction::monomial(2);
        assert!((z2.laplacian_abs_p(2.0, &p) - 8.0 / PI * 0.25).abs() < 1e-15);
        assert_eq!(
            AnalyticFunction::identity().laplacian_abs_p(1.0, &DiskPoint::new(ZERO)),
            0.0
        );
    }

    #[test]
    fn boundary_trace_is_radial_limit() {
        for f in [
            AnalyticFunction::affine(1.0, 1.0),
            AnalyticFunction::blaschke(vec![c(0.5, 0.0)], 0).unwrap(),
            AnalyticFunction::mobius(ONE, ZERO, ONE, c(-0.5, 0.0)).unwrap(),
        ] {
            let gap = |r: f64| {
                (0..512)
                    .map(|k| {
                        let t = 2.0 * PI * k as f64 / 512.0;
                        (f.eval(Complex64::from_polar(r, t)) - f.boundary(t)).norm()
                    })
                    .fold(0.0, f64::max)
            };
            let (g1, g2) = (gap(0.99), gap(0.999));
            assert!(g2 <= 1e-2 && g2 < g1, "{f}: {g1} {g2}");
        }
    }

    #[test]
    fn harmonic_mean_value_and_gradient() {
        let f = AnalyticFunction::mobius(ONE, ZERO, ONE, c(-0.8, 0.0)).unwrap();
        let h = HarmonicFunction::real_part(f);
        let n = 256;
        let mean = (0..n).map(|k| h.boundary(2.0 * PI * k as f64 / n as f64)).sum::<f64>() / n as f64;
        assert!((mean - h.eval(0.0)).abs() < 1e-12);
        let z = DiskPoint::new(c(0.2, -0.3));
        let (_, hx, hy) = h.eval_with_gradient(&z);
        let e = 1e-6;
        let fx = (h.eval(c(0.2 + e, -0.3)) - h.eval(c(0.2 - e, -0.3))) / (2.0 * e);
        let fy = (h.eval(c(0.2, -0.3 + e)) - h.eval(c(0.2, -0.3 - e))) / (2.0 * e);
        assert!((hx - fx).abs() < 1e-7 && (hy - fy).abs() < 1e-7);
        let hi = HarmonicFunction::imag_part(AnalyticFunction::monomial(2));
        let (_, hx, hy) = hi.eval_with_gradient(&z);
        // Im z^2 = 2xy
        assert!((hx - 2.0 * -0.3).abs() < 1e-15 && (hy - 2.0 * 0.2).abs() < 1e-15);
    }

    #[test]
    fn poisson_extension_reproduces_trig_polynomial() {
        let n = 64;
        let samples: Vec<f64> = (0..n)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / n as f64;
                1.0 + (2.0 * t).cos() - 0.5 * (3.0 * t).sin()
            })
            .collect();
        let h = HarmonicFunction::poisson_extension(&samples).unwrap();
        let z = Complex64::from_polar(0.5, 0.7);
        let want = 1.0 + 0.25 * (1.4f64).cos() - 0.5 * 0.125 * (2.1f64).sin();
        assert!((h.eval(z) - want).abs() < 1e-13);
    }

    #[test]
    fn taylor_coefficients() {
        let f = AnalyticFunction::power_branch_taylor(0.2, 200).unwrap();
        let g = AnalyticFunction::power_branch(0.2).unwrap();
        assert!((f.eval(0.3) - g.eval(0.3)).norm() < 1e-14);
    }
}
