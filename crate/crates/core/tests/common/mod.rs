//! Independent oracles shared by the integration tests. Nothing here
//! calls the library's quadrature.
#![allow(dead_code)]

use std::f64::consts::PI;

/// Lanczos approximation (g = 7, n = 9), accurate to ~1e-15 for x > 0.
pub fn gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const C: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    let x = x - 1.0;
    let mut a = C[0];
    let t = x + G + 0.5;
    for (i, &c) in C.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
}

/// `B(a, b)` through log-gamma-free recursion for `a` a positive integer.
pub fn beta_int(k: usize, b: f64) -> f64 {
    // B(1, b) = 1/b, B(k+1, b) = B(k, b) k / (k + b)
    let mut v = 1.0 / b;
    for j in 1..k {
        v *= j as f64 / (j as f64 + b);
    }
    v
}

/// Gauss-Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// Composite Gauss-Legendre over panels geometrically graded toward `a`
/// (ratio 1/2, down to width `min_width`), then uniform up to `b`.
pub fn graded_toward_left<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, min_width: f64) -> f64 {
    let gl = gauss_legendre(20);
    let mut edges = vec![b];
    let mut w = (b - a) / 2.0;
    while w > min_width {
        edges.push(a + w);
        w /= 2.0;
    }
    edges.push(a);
    edges.reverse();
    let mut s = 0.0;
    for pair in edges.windows(2) {
        let (l, r) = (pair[0], pair[1]);
        let (m, h) = (0.5 * (l + r), 0.5 * (r - l));
        for &(x, wt) in &gl {
            s += wt * h * f(m + h * x);
        }
    }
    s
}

/// `int_a^b f` for an integrand singular (integrably) at both ends.
pub fn graded_both<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, min_width: f64) -> f64 {
    let m = 0.5 * (a + b);
    graded_toward_left(&f, a, m, min_width) + graded_toward_left(|x| f(a + b - x), a, m, min_width)
}

/// `int |1 - e^{i theta}|^{-2a} dlambda` on a graded mesh toward both
/// ends of `(0, 2 pi)`.
pub fn boundary_power_oracle(a: f64) -> f64 {
    graded_both(
        |t| (2.0 * (0.5 * t).sin()).powf(-2.0 * a),
        0.0,
        2.0 * PI,
        1e-300_f64.max(1e-14),
    ) / (2.0 * PI)
}

/// Green function `log |z - w| / |1 - conj(w) z|`.
pub fn green(z: num_complex::Complex64, w: num_complex::Complex64) -> f64 {
    ((z - w) / (num_complex::Complex64::new(1.0, 0.0) - w.conj() * z))
        .norm()
        .ln()
}

pub fn poisson(a: num_complex::Complex64, theta: f64) -> f64 {
    (1.0 - a.norm_sqr()) / (num_complex::Complex64::from_polar(1.0, theta) - a).norm_sqr()
}

/// Taylor coefficients of `(1 - z)^{-a}`.
pub fn power_branch_coeffs(a: f64, n: usize) -> Vec<f64> {
    let mut c = vec![1.0];
    for k in 1..=n {
        let prev = c[k - 1];
        c.push(prev * (k as f64 - 1.0 + a) / k as f64);
    }
    c
}

/// `||sum c_k z^k||^2` in `H^2_{u_beta}`, using the Fourier coefficients
/// `alpha^(k) = B(|k| + 1, 1 - beta)` of the boundary density.
pub fn weighted_h2_norm_sq(c: &[f64], beta: f64) -> f64 {
    let n = c.len();
    let b: Vec<f64> = (0..n).map(|k| beta_int(k + 1, 1.0 - beta)).collect();
    let mut s = 0.0;
    for j in 0..n {
        for k in 0..n {
            s += c[j] * c[k] * b[j.abs_diff(k)];
        }
    }
    s
}

pub fn report(criterion: u32, ok: bool, detail: &str) {
    println!(
        "criterion {criterion:>2}: {} | {detail}",
        if ok { "PASS" } else { "FAIL" }
    );
}
