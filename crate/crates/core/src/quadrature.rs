//! Numerical integration.
//!
//! Every integral in the crate goes through the adaptive Gauss-Kronrod
//! (7, 15) engine below. Endpoint singularities are removed by explicit
//! changes of variable before the smooth rule is applied:
//!
//! * algebraic `(x - a)^{-e}`: `x = a + h t^q` with `q = 1 / (1 - e)`, which
//!   turns the singular factor into a constant times `t^0`;
//! * logarithmic: `x = a + h t^2`, leaving the mild `t log t`.
//!
//! Integrals whose integrand decays over many decades use an exponential
//! map instead (`x = e^y`). Subdivision order, tie-breaking and final
//! summation are fixed, so identical inputs give bit-identical output.
//!
//! Divergence is never detected by watching values grow: a singular angle
//! or endpoint with exponent `>= 1` is reported as divergent from the
//! metadata alone.

use crate::error::{Error, Result};
use crate::point::{normalize_angle, DiskPoint};
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

/// Default evaluation budget per integral.
pub const DEFAULT_BUDGET: usize = 1 << 20;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Behaviour of an integrand at an endpoint (or singular angle).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Endpoint {
    Regular,
    /// `|x - a|^{-e}` with `e < 1`.
    Algebraic(f64),
    /// `log |x - a|`.
    Log,
}

impl Endpoint {
    pub fn from_exponent(e: f64) -> Self {
        if e > 0.0 {
            Endpoint::Algebraic(e)
        } else {
            Endpoint::Regular
        }
    }

    /// Algebraic blow-up exponent; logarithms count as zero.
    pub fn exponent(&self) -> f64 {
        match *self {
            Endpoint::Algebraic(e) => e,
            _ => 0.0,
        }
    }

    pub fn is_singular(&self) -> bool {
        !matches!(self, Endpoint::Regular)
    }

    /// Behaviour of a product of two integrand factors at the same point.
    pub fn combine(self, other: Endpoint) -> Endpoint {
        let e = self.exponent() + other.exponent();
        if e > 0.0 {
            Endpoint::Algebraic(e)
        } else if self == Endpoint::Log || other == Endpoint::Log {
            Endpoint::Log
        } else {
            Endpoint::Regular
        }
    }

    fn power(&self) -> Option<f64> {
        match *self {
            Endpoint::Regular => None,
            Endpoint::Log => Some(2.0),
            Endpoint::Algebraic(e) if e <= 0.0 => None,
            Endpoint::Algebraic(e) => Some(1.0 / (1.0 - e)),
        }
    }
}

/// Absolute and relative tolerance; the requested accuracy for a value `v`
/// is `max(abs, rel * |v|)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64) -> Self {
        Self { abs, rel }
    }

    pub fn target(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value.abs())
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            abs: self.abs * factor,
            rel: self.rel * factor,
        }
    }
}

impl From<f64> for Tolerance {
    fn from(tol: f64) -> Self {
        Self { abs: tol, rel: tol }
    }
}

/// Value of an integral with its error estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub nodes_used: usize,
    pub converged: bool,
}

impl QuadratureResult {
    pub fn exact(value: f64) -> Self {
        Self {
            value,
            error_estimate: 0.0,
            nodes_used: 0,
            converged: true,
        }
    }

    pub fn plus(self, other: QuadratureResult) -> Self {
        Self {
            value: self.value + other.value,
            error_estimate: self.error_estimate + other.error_estimate,
            nodes_used: self.nodes_used + other.nodes_used,
            converged: self.converged && other.converged,
        }
    }

    pub fn scale(self, c: f64) -> Self {
        Self {
            value: self.value * c,
            error_estimate: self.error_estimate * c.abs(),
            ..self
        }
    }

    /// Turn a non-converged result into an error.
    pub fn require_converged(self, what: &str) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::Quadrature(format!(
                "{what}: value {:.6e}, error estimate {:.3e} after {} nodes",
                self.value, self.error_estimate, self.nodes_used
            )))
        }
    }
}

/// A circle integral: either a value or a divergence verdict.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Integral {
    Finite(QuadratureResult),
    Divergent { angle: f64, exponent: f64 },
}

impl Integral {
    pub fn finite(&self) -> Option<&QuadratureResult> {
        match self {
            Integral::Finite(r) => Some(r),
            Integral::Divergent { .. } => None,
        }
    }

    pub fn is_divergent(&self) -> bool {
        matches!(self, Integral::Divergent { .. })
    }

    pub fn value(&self) -> f64 {
        match self {
            Integral::Finite(r) => r.value,
            Integral::Divergent { .. } => f64::INFINITY,
        }
    }
}

/// A breakpoint of a piecewise integration range.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Knot {
    pub x: f64,
    pub behavior: Endpoint,
}

impl Knot {
    pub fn regular(x: f64) -> Self {
        Self {
            x,
            behavior: Endpoint::Regular,
        }
    }

    pub fn new(x: f64, behavior: Endpoint) -> Self {
        Self { x, behavior }
    }
}

/// Neumaier compensated sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

#[derive(Clone, Copy, Debug)]
enum Map {
    Linear {
        a: f64,
        b: f64,
    },
    /// `x = a + h t^q`
    FromLeft {
        a: f64,
        h: f64,
        q: f64,
        end: f64,
    },
    /// `x = b - h t^q`
    FromRight {
        b: f64,
        h: f64,
        q: f64,
        end: f64,
    },
    /// `x = exp(y)`, `y` linear in `t`
    Exponential {
        ln_a: f64,
        ln_b: f64,
    },
}

impl Map {
    /// Returns `(x, dx/dt)` for `t` in `[0, 1]`.
    #[inline]
    fn apply(&self, t: f64) -> (f64, f64) {
        match *self {
            Map::Linear { a, b } => (a + (b - a) * t, b - a),
            Map::FromLeft { a, h, q, end } => {
                let tq = t.powf(q);
                let mut x = a + h * tq;
                if x <= a {
                    x = a.next_up();
                }
                if x > end {
                    x = end;
                }
                // Jacobian at the offset x actually carries, so nodes that
                // round near the endpoint keep a consistent weight
                (x, offset_jacobian(x - a, h, q))
            }
            Map::FromRight { b, h, q, end } => {
                let tq = t.powf(q);
                let mut x = b - h * tq;
                if x >= b {
                    x = b.next_down();
                }
                if x < end {
                    x = end;
                }
                (x, offset_jacobian(b - x, h, q))
            }
            Map::Exponential { ln_a, ln_b } => {
                let y = ln_a + (ln_b - ln_a) * t;
                let x = y.exp();
                (x, x * (ln_b - ln_a))
            }
        }
    }
}

/// `dx/dt` for `x = h t^q` written in terms of the offset: `q h^(1/q) y^(1 - 1/q)`.
#[inline]
fn offset_jacobian(y: f64, h: f64, q: f64) -> f64 {
    q * h.powf(1.0 / q) * y.powf(1.0 - 1.0 / q)
}

fn pieces_for(a: f64, b: f64, left: Endpoint, right: Endpoint, out: &mut Vec<Map>) {
    match (left.power(), right.power()) {
        (None, None) => out.push(Map::Linear { a, b }),
        (Some(q), None) => out.push(Map::FromLeft { a, h: b - a, q, end: b }),
        (None, Some(q)) => out.push(Map::FromRight { b, h: b - a, q, end: a }),
        (Some(ql), Some(qr)) => {
            let m = 0.5 * (a + b);
            out.push(Map::FromLeft {
                a,
                h: m - a,
                q: ql,
                end: m,
            });
            out.push(Map::FromRight {
                b,
                h: b - m,
                q: qr,
                end: m,
            });
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Segment {
    piece: usize,
    t0: f64,
    t1: f64,
    value: f64,
    error: f64,
    floor: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    // largest error first; ties resolved by position so the order is total
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.piece.cmp(&self.piece))
            .then_with(|| other.t0.total_cmp(&self.t0))
    }
}

/// Returns `(value, error, roundoff floor)` on one segment.
fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, map: &Map, t0: f64, t1: f64) -> (f64, f64, f64) {
    let center = 0.5 * (t0 + t1);
    let half = 0.5 * (t1 - t0);
    let eval = |t: f64| {
        let (x, jac) = map.apply(t);
        if jac == 0.0 {
            return 0.0;
        }
        let v = f(x) * jac;
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    let fc = eval(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs = kronrod.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = eval(center - dx);
        let f2 = eval(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let result = kronrod * half;
    let res_abs = abs * half.abs();
    let res_asc = asc * half.abs();
    let mut err = ((kronrod - gauss) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * res_abs;
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(floor);
    }
    (result, err, floor)
}

/// Adaptive integration engine with a fixed budget.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Integrator {
    pub tol: Tolerance,
    pub budget: usize,
}

impl Default for Integrator {
    fn default() -> Self {
        Self {
            tol: Tolerance::from(1e-10),
            budget: DEFAULT_BUDGET,
        }
    }
}

impl Integrator {
    pub fn new(tol: impl Into<Tolerance>) -> Self {
        Self {
            tol: tol.into(),
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_tol(mut self, tol: impl Into<Tolerance>) -> Self {
        self.tol = tol.into();
        self
    }

    fn run<F: Fn(f64) -> f64>(&self, f: &F, maps: &[Map]) -> QuadratureResult {
        const NODES: usize = 15;
        let mut heap = BinaryHeap::with_capacity(64);
        let mut nodes = 0;
        for (i, map) in maps.iter().enumerate() {
            let (value, error, floor) = gauss_kronrod(f, map, 0.0, 1.0);
            nodes += NODES;
            heap.push(Segment {
                piece: i,
                t0: 0.0,
                t1: 1.0,
                value,
                error,
                floor,
            });
        }
        let totals = |heap: &BinaryHeap<Segment>| {
            let mut v = CompensatedSum::default();
            let mut e = 0.0;
            let mut fl = 0.0;
            for s in heap.iter() {
                v.add(s.value);
                e += s.error;
                fl += s.floor;
            }
            (v.value(), e, fl)
        };
        let (mut value, mut error, mut floor) = totals(&heap);
        let mut since_refresh = 0;
        // below twice the summed roundoff floor no refinement can help
        while error > self.tol.target(value).max(2.0 * floor) {
            if nodes + 2 * NODES > self.budget {
                break;
            }
            let worst = heap.pop().expect("nonempty heap");
            let mid = 0.5 * (worst.t0 + worst.t1);
            if !(mid > worst.t0 && mid < worst.t1) || worst.t1 - worst.t0 < 1e-15 {
                heap.push(worst);
                break;
            }
            let map = &maps[worst.piece];
            let (v1, e1, f1) = gauss_kronrod(f, map, worst.t0, mid);
            let (v2, e2, f2) = gauss_kronrod(f, map, mid, worst.t1);
            nodes += 2 * NODES;
            value += v1 + v2 - worst.value;
            error += e1 + e2 - worst.error;
            floor += f1 + f2 - worst.floor;
            heap.push(Segment {
                piece: worst.piece,
                t0: worst.t0,
                t1: mid,
                value: v1,
                error: e1,
                floor: f1,
            });
            heap.push(Segment {
                piece: worst.piece,
                t0: mid,
                t1: worst.t1,
                value: v2,
                error: e2,
                floor: f2,
            });
            since_refresh += 1;
            if since_refresh == 50 {
                (value, error, floor) = totals(&heap);
                since_refresh = 0;
            }
        }
        let mut segments = heap.into_vec();
        segments.sort_by(|a, b| a.piece.cmp(&b.piece).then(a.t0.total_cmp(&b.t0)));
        let mut sum = CompensatedSum::default();
        let mut err = 0.0;
        let mut floor = 0.0;
        for s in &segments {
            sum.add(s.value);
            err += s.error;
            floor += s.floor;
        }
        let value = sum.value();
        let converged = err <= self.tol.target(value).max(2.0 * floor) && value.is_finite();
        QuadratureResult {
            value,
            error_estimate: err,
            nodes_used: nodes,
            converged,
        }
    }

    /// `int_a^b f` with the given endpoint behaviour.
    pub fn interval<F: Fn(f64) -> f64>(
        &self,
        f: F,
        a: f64,
        b: f64,
        endpoints: (Endpoint, Endpoint),
    ) -> Result<QuadratureResult> {
        self.knots(f, &[Knot::new(a, endpoints.0), Knot::new(b, endpoints.1)])
    }

    /// Integrate over consecutive knots; each knot's behaviour applies to
    /// both neighbouring pieces.
    pub fn knots<F: Fn(f64) -> f64>(&self, f: F, knots: &[Knot]) -> Result<QuadratureResult> {
        if knots.len() < 2 {
            return Err(Error::domain("integration needs at least two knots"));
        }
        for k in knots {
            if k.behavior.exponent() >= 1.0 {
                return Err(Error::Divergent {
                    angle: k.x,
                    exponent: k.behavior.exponent(),
                });
            }
            if !k.x.is_finite() {
                return Err(Error::domain("integration limits must be finite"));
            }
        }
        let mut maps = Vec::with_capacity(knots.len());
        for w in knots.windows(2) {
            let (l, r) = (w[0], w[1]);
            if r.x < l.x {
                return Err(Error::domain(format!("knots out of order: {} > {}", l.x, r.x)));
            }
            if r.x > l.x {
                pieces_for(l.x, r.x, l.behavior, r.behavior, &mut maps);
            }
        }
        if maps.is_empty() {
            return Ok(QuadratureResult::exact(0.0));
        }
        Ok(self.run(&f, &maps))
    }

    /// `int_a^b f` for `0 < a < b`, integrating in `log x`; suited to
    /// integrands spread over many decades.
    pub fn log_scale<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> Result<QuadratureResult> {
        if !(a > 0.0 && b > a) {
            return Err(Error::domain(format!(
                "log-scale integration needs 0 < a < b, got [{a}, {b}]"
            )));
        }
        let decades = (b / a).log10().ceil().max(1.0) as usize;
        let (la, lb) = (a.ln(), b.ln());
        let maps: Vec<Map> = (0..decades)
            .map(|i| {
                let y0 = la + (lb - la) * i as f64 / decades as f64;
                let y1 = la + (lb - la) * (i + 1) as f64 / decades as f64;
                Map::Exponential { ln_a: y0, ln_b: y1 }
            })
            .collect();
        Ok(self.run(&f, &maps))
    }

    /// `int g dlambda` over the unit circle.
    pub fn circle<F: Fn(f64) -> f64>(&self, g: F, spec: &CircleSpec) -> Result<Integral> {
        for s in &spec.singular {
            let e = s.behavior.exponent();
            if e >= 1.0 {
                return Ok(Integral::Divergent {
                    angle: normalize_angle(s.angle),
                    exponent: e,
                });
            }
        }
        let knots = spec.merged_knots();
        if knots.is_empty() {
            if let Some(r) = self.periodic_trapezoid(&g) {
                return Ok(Integral::Finite(r));
            }
            let uniform: Vec<Knot> = (0..=16).map(|k| Knot::regular(2.0 * PI * k as f64 / 16.0)).collect();
            let r = self.knots(&g, &uniform)?;
            return Ok(Integral::Finite(r.scale(1.0 / (2.0 * PI))));
        }
        // The piece closing the ring ends on the first knot. It is integrated
        // in absolute angles up to `start` when `start > 0` (offsets from a
        // representable endpoint are exact), and as offsets below zero
        // otherwise, so no node ever rounds onto the knot.
        let start = knots[0].x;
        let last = knots[knots.len() - 1].x;
        let mid = 0.5 * (last + start + 2.0 * PI);
        let mut ring = knots.clone();
        ring.push(Knot::regular(mid));
        let inner = self.with_tol(self.tol.scaled(2.0 * PI));
        let head = inner.knots(|t| g(normalize_angle(t)), &ring)?;
        let behavior = knots[0].behavior;
        let tail = if start > 0.0 {
            let lo = mid - 2.0 * PI;
            let near = inner.interval(&g, lo.max(0.0), start, (Endpoint::Regular, behavior))?;
            if lo < 0.0 {
                near.plus(inner.interval(&g, mid, 2.0 * PI, (Endpoint::Regular, Endpoint::Regular))?)
            } else {
                near
            }
        } else {
            inner.interval(|x| g(-x), 0.0, 2.0 * PI - mid, (behavior, Endpoint::Regular))?
        };
        Ok(Integral::Finite(head.plus(tail).scale(1.0 / (2.0 * PI))))
    }

    /// Trapezoid rule with doubling; spectrally accurate for smooth
    /// periodic integrands. Returns `None` when it does not settle within
    /// its own cap.
    fn periodic_trapezoid<F: Fn(f64) -> f64>(&self, g: &F) -> Option<QuadratureResult> {
        const CAP: usize = 1 << 13;
        let mut n = 16;
        let mut sum = CompensatedSum::default();
        for k in 0..n {
            sum.add(g(2.0 * PI * k as f64 / n as f64));
        }
        let mut prev = sum.value() / n as f64;
        let mut used = n;
        while 2 * n <= CAP.min(self.budget) {
            for k in 0..n {
                sum.add(g(2.0 * PI * (2 * k + 1) as f64 / (2 * n) as f64));
            }
            used += n;
            n *= 2;
            let cur = sum.value() / n as f64;
            let err = (cur - prev).abs();
            if !cur.is_finite() {
                return None;
            }
            if n >= 64 && err <= self.tol.target(cur) {
                return Some(QuadratureResult {
                    value: cur,
                    error_estimate: err.max(4.0 * f64::EPSILON * cur.abs()),
                    nodes_used: used,
                    converged: true,
                });
            }
            prev = cur;
        }
        None
    }

    /// `int int_D F dA` by a polar product rule.
    pub fn disk<F: Fn(&DiskPoint) -> f64>(&self, f: F, rule: &DiskRule) -> Result<QuadratureResult> {
        match rule {
            DiskRule::Centered {
                radial_breaks,
                angular_breaks,
                boundary_exponent,
            } => self.disk_centered(&f, radial_breaks, angular_breaks, *boundary_exponent),
            DiskRule::Anchored {
                angle,
                exponent,
                interior_points,
            } => self.disk_anchored(&f, *angle, *exponent, interior_points),
        }
    }

    fn disk_centered<F: Fn(&DiskPoint) -> f64>(
        &self,
        f: &F,
        radial_breaks: &[f64],
        angular_breaks: &[f64],
        boundary_exponent: f64,
    ) -> Result<QuadratureResult> {
        let inner_tol = self.tol.scaled(0.1);
        let inner = self.with_tol(inner_tol);
        let spec = CircleSpec {
            singular: angular_breaks
                .iter()
                .map(|&a| SingularAngle::new(a, Endpoint::Log))
                .collect(),
            breaks: Vec::new(),
        };
        let worst_inner = std::cell::Cell::new(0.0f64);
        let inner_nodes = std::cell::Cell::new(0usize);
        let failed = std::cell::Cell::new(false);
        // outer variable is the distance to the boundary, eta = 1 - r
        let outer = |eta: f64| {
            let r = 1.0 - eta;
            match inner.circle(|phi| f(&DiskPoint::from_boundary_distance(eta, phi)), &spec) {
                Ok(Integral::Finite(q)) => {
                    worst_inner.set(worst_inner.get().max(q.error_estimate * 2.0 * PI));
                    inner_nodes.set(inner_nodes.get() + q.nodes_used);
                    if !q.converged {
                        failed.set(true);
                    }
                    2.0 * PI * r * q.value
                }
                _ => {
                    failed.set(true);
                    0.0
                }
            }
        };
        let mut knots = vec![Knot::new(0.0, Endpoint::from_exponent(boundary_exponent))];
        let mut etas: Vec<f64> = radial_breaks
            .iter()
            .filter(|&&r| r > 0.0 && r < 1.0)
            .map(|&r| 1.0 - r)
            .collect();
        etas.sort_by(f64::total_cmp);
        etas.dedup();
        knots.extend(etas.into_iter().map(|e| Knot::new(e, Endpoint::Log)));
        knots.push(Knot::regular(1.0));
        let mut r = self.knots(outer, &knots)?;
        r.error_estimate += worst_inner.get();
        r.nodes_used += inner_nodes.get();
        r.converged = r.converged && !failed.get() && r.error_estimate <= self.tol.target(r.value) * 2.0;
        Ok(r)
    }

    fn disk_anchored<F: Fn(&DiskPoint) -> f64>(
        &self,
        f: &F,
        angle: f64,
        exponent: f64,
        interior_points: &[num_complex::Complex64],
    ) -> Result<QuadratureResult> {
        // w = 1 - z e^{-i angle}; rho = |w|, psi = arg w
        let rotation = num_complex::Complex64::from_polar(1.0, -angle);
        let local: Vec<(f64, f64)> = interior_points
            .iter()
            .map(|&a| {
                let w = num_complex::Complex64::new(1.0, 0.0) - a * rotation;
                (w.norm(), w.arg())
            })
            .collect();
        let inner = self.with_tol(self.tol.scaled(0.1));
        let worst_inner = std::cell::Cell::new(0.0f64);
        let inner_nodes = std::cell::Cell::new(0usize);
        let failed = std::cell::Cell::new(false);
        let outer = |psi: f64| {
            let c = 2.0 * psi.cos();
            if c <= 0.0 {
                return 0.0;
            }
            let mut knots = vec![Knot::new(0.0, Endpoint::from_exponent(exponent))];
            let mut sigmas: Vec<f64> = local
                .iter()
                .map(|&(rho, _)| rho / c)
                .filter(|&s| s > 0.0 && s < 1.0)
                .collect();
            sigmas.sort_by(f64::total_cmp);
            sigmas.dedup();
            knots.extend(sigmas.into_iter().map(|s| Knot::new(s, Endpoint::Log)));
            knots.push(Knot::regular(1.0));
            let g = |sigma: f64| {
                let rho = c * sigma;
                rho * c * f(&DiskPoint::anchored(angle, rho, psi))
            };
            match inner.knots(g, &knots) {
                Ok(q) => {
                    worst_inner.set(worst_inner.get().max(q.error_estimate));
                    inner_nodes.set(inner_nodes.get() + q.nodes_used);
                    if !q.converged {
                        failed.set(true);
                    }
                    q.value
                }
                Err(_) => {
                    failed.set(true);
                    0.0
                }
            }
        };
        let mut knots = vec![Knot::regular(-0.5 * PI)];
        let mut psis: Vec<f64> = local
            .iter()
            .map(|&(_, psi)| psi)
            .filter(|&p| p > -0.5 * PI && p < 0.5 * PI)
            .collect();
        psis.push(0.0);
        psis.sort_by(f64::total_cmp);
        psis.dedup();
        knots.extend(psis.into_iter().map(|p| Knot::new(p, Endpoint::Log)));
        knots.push(Knot::regular(0.5 * PI));
        let mut r = self.knots(outer, &knots)?;
        r.error_estimate += worst_inner.get() * PI;
        r.nodes_used += inner_nodes.get();
        r.converged = r.converged && !failed.get() && r.error_estimate <= self.tol.target(r.value) * 2.0;
        Ok(r)
    }
}

/// An angle where a boundary integrand is singular.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SingularAngle {
    pub angle: f64,
    pub behavior: Endpoint,
}

impl SingularAngle {
    pub fn new(angle: f64, behavior: Endpoint) -> Self {
        Self {
            angle: normalize_angle(angle),
            behavior,
        }
    }

    pub fn algebraic(angle: f64, exponent: f64) -> Self {
        Self::new(angle, Endpoint::from_exponent(exponent))
    }
}

/// Singular angles and plain breakpoints of a circle integrand.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CircleSpec {
    pub singular: Vec<SingularAngle>,
    /// Angles where the integrand is smooth but sharply peaked.
    pub breaks: Vec<f64>,
}

impl CircleSpec {
    pub fn smooth() -> Self {
        Self::default()
    }

    pub fn with_singular(singular: Vec<SingularAngle>) -> Self {
        Self {
            singular,
            breaks: Vec::new(),
        }
    }

    pub fn from_exponents(pairs: &[(f64, f64)]) -> Self {
        Self::with_singular(pairs.iter().map(|&(a, e)| SingularAngle::algebraic(a, e)).collect())
    }

    pub fn with_breaks(mut self, breaks: impl IntoIterator<Item = f64>) -> Self {
        self.breaks.extend(breaks);
        self
    }

    /// Sorted knots in `[0, 2 pi)`; coincident singular angles keep the
    /// strongest behaviour.
    fn merged_knots(&self) -> Vec<Knot> {
        let mut all: Vec<Knot> = self
            .singular
            .iter()
            .map(|s| Knot::new(normalize_angle(s.angle), s.behavior))
            .chain(self.breaks.iter().map(|&b| Knot::regular(normalize_angle(b))))
            .collect();
        all.sort_by(|a, b| a.x.total_cmp(&b.x));
        let mut out: Vec<Knot> = Vec::with_capacity(all.len());
        for k in all {
            if let Some(last) = out.last_mut() {
                if (k.x - last.x).abs() < 1e-14 {
                    last.behavior = strongest(last.behavior, k.behavior);
                    continue;
                }
            }
            out.push(k);
        }
        if out.len() > 1 {
            let first = out[0];
            let last = *out.last().unwrap();
            if 2.0 * PI - last.x + first.x < 1e-14 {
                out[0].behavior = strongest(first.behavior, last.behavior);
                out.pop();
            }
        }
        out
    }
}

fn strongest(a: Endpoint, b: Endpoint) -> Endpoint {
    match (a, b) {
        (Endpoint::Algebraic(x), Endpoint::Algebraic(y)) => Endpoint::Algebraic(x.max(y)),
        (Endpoint::Algebraic(x), _) | (_, Endpoint::Algebraic(x)) => Endpoint::Algebraic(x),
        (Endpoint::Log, _) | (_, Endpoint::Log) => Endpoint::Log,
        _ => Endpoint::Regular,
    }
}

/// How to lay a polar product rule over the disk.
#[derive(Clone, Debug, PartialEq)]
pub enum DiskRule {
    /// Polar coordinates about the origin; the outer variable is the
    /// distance to the circle.
    Centered {
        radial_breaks: Vec<f64>,
        angular_breaks: Vec<f64>,
        /// The angular integral behaves like `(1 - r)^{-e}` as `r -> 1`.
        boundary_exponent: f64,
    },
    /// Polar coordinates `(rho, psi)` about the boundary point
    /// `e^{i angle}`, for integrands singular there. `exponent` is the
    /// blow-up of `rho F` as `rho -> 0`.
    Anchored {
        angle: f64,
        exponent: f64,
        interior_points: Vec<num_complex::Complex64>,
    },
}

impl DiskRule {
    pub fn centered() -> Self {
        DiskRule::Centered {
            radial_breaks: Vec::new(),
            angular_breaks: Vec::new(),
            boundary_exponent: 0.0,
        }
    }

    /// Rule suited to a radial mass `(1 - s)^{-beta} ds` on `[0, s_max]`.
    pub fn for_radial_weight(radial_weight: Option<(f64, f64)>) -> Self {
        match radial_weight {
            Some((beta, s_max)) if s_max >= 1.0 => DiskRule::Anchored {
                angle: 0.0,
                exponent: beta.max(0.0),
                interior_points: Vec::new(),
            },
            Some((_, s_max)) => DiskRule::Centered {
                radial_breaks: vec![s_max],
                angular_breaks: vec![0.0],
                boundary_exponent: 0.0,
            },
            None => DiskRule::centered(),
        }
    }

    /// Add interior points (atoms, zeros) near which the integrand is
    /// not smooth.
    pub fn with_points(mut self, points: &[num_complex::Complex64]) -> Self {
        match &mut self {
            DiskRule::Centered {
                radial_breaks,
                angular_breaks,
                ..
            } => {
                for p in points {
                    if p.norm() > 0.0 {
                        radial_breaks.push(p.norm());
                        angular_breaks.push(normalize_angle(p.arg()));
                    }
                }
            }
            DiskRule::Anchored { interior_points, .. } => interior_points.extend_from_slice(points),
        }
        self
    }
}

/// `int_a^b f` with endpoint exponents, default budget.
pub fn integrate_interval<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    endpoint_exponents: (f64, f64),
    tol: f64,
) -> Result<QuadratureResult> {
    Integrator::new(tol).interval(
        f,
        a,
        b,
        (
            Endpoint::from_exponent(endpoint_exponents.0),
            Endpoint::from_exponent(endpoint_exponents.1),
        ),
    )
}

/// `int g dlambda` with `(angle, exponent)` singularities.
pub fn integrate_circle<F: Fn(f64) -> f64>(g: F, singular_angles: &[(f64, f64)], tol: f64) -> Result<Integral> {
    Integrator::new(tol).circle(g, &CircleSpec::from_exponents(singular_angles))
}

/// `int int_D F dA`, optionally graded for a radial weight `(beta, s_max)`.
pub fn integrate_disk<F: Fn(&DiskPoint) -> f64>(
    f: F,
    radial_weight: Option<(f64, f64)>,
    tol: f64,
) -> Result<QuadratureResult> {
    Integrator::new(tol).disk(f, &DiskRule::for_radial_weight(radial_weight))
}
