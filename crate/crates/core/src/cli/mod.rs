//! Config-driven experiment runner behind the `pshlab` binary.
//!
//! Every subcommand writes `<out>/<command>.csv` and a human-readable
//! `<out>/<command>_report.txt`. Exit codes: 0 success, 1 a verification
//! failed, 2 usage or config error.

pub mod config;
pub mod table;
pub mod verify;

use crate::error::{Error, Result};
use crate::factorize::{ball_probe, check_grid, deflate, isometry_apply, isometry_check, isometry_inverse};
use crate::functions::{AnalyticFunction, HarmonicFunction};
use crate::hardy::{membership, AbsPow, Hardy, Norm, DEFAULT_R_GRID, DEFAULT_TOLERANCE};
use crate::measures::RieszMeasure;
use crate::parse::{parse_function, parse_harmonic, parse_weight};
use crate::quadrature::Tolerance;
use crate::DiskPoint;
use clap::{Args, Parser, Subcommand};
use config::ExperimentConfig;
use rayon::prelude::*;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use table::{Cell, Table};
use verify::Suite;

const DEFAULT_T_GRID: [f64; 4] = [0.9, 0.99, 0.999, 0.9999];
const DEFAULT_DENSITY_GRID: usize = 4096;

#[derive(Debug, Parser)]
#[command(
    name = "pshlab",
    version,
    about = "Weighted Hardy spaces on the unit disk: norms, densities, factorizations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Options,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
enum Command {
    /// Boundary density alpha on an equispaced grid.
    Density,
    /// Weighted norms by the boundary and interior routes, and the classical norm.
    Norm,
    /// Riesz mass, density bound, u along a ray and the Lelong-Jensen sweep.
    Measure,
    /// Membership verdict with the divergence-slope fit.
    Membership,
    /// Blaschke deflation and the norm of the zero-free factor.
    Deflate,
    /// The isometry f -> A^{1/p} f onto classical H^p.
    Isometry,
    /// Norms over the Green-function weights G(., t e^{i angle}).
    Probe,
    /// Run a verification suite.
    Verify,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Density => "density",
            Command::Norm => "norm",
            Command::Measure => "measure",
            Command::Membership => "membership",
            Command::Deflate => "deflate",
            Command::Isometry => "isometry",
            Command::Probe => "probe",
            Command::Verify => "verify",
        }
    }
}

#[derive(Debug, Args)]
struct Options {
    /// TOML experiment config; flags override its keys.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Weight spec, e.g. "atom 0.5 0 1 + radial 0.5"; repeatable.
    #[arg(long, global = true)]
    weight: Vec<String>,
    /// Function spec, e.g. "pow 0.3" or "(mul z affine 1 1)"; repeatable.
    #[arg(long = "f", global = true)]
    function: Vec<String>,
    /// Harmonic spec ("re F", "im F", "const c") for `measure`: the first is
    /// h, the rest are test functions for the weak-star gap; repeatable.
    #[arg(long = "h", global = true)]
    harmonic: Vec<String>,
    /// Exponents p, comma-separated.
    #[arg(long, global = true, value_delimiter = ',')]
    p: Vec<f64>,
    /// Levels r < 0, comma-separated.
    #[arg(long = "r-grid", global = true, value_delimiter = ',', allow_hyphen_values = true)]
    r_grid: Vec<f64>,
    /// Probe or ray parameters in (0, 1), comma-separated.
    #[arg(long = "t-grid", global = true, value_delimiter = ',')]
    t_grid: Vec<f64>,
    /// Relative tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<String>,
    /// Verification suite: core or acceptance.
    #[arg(long, global = true)]
    suite: Option<String>,
    /// Number of angles for the density grid.
    #[arg(long, global = true)]
    grid: Option<usize>,
    /// Witness angle for the probe, ray angle for measure.
    #[arg(long, global = true, allow_hyphen_values = true)]
    angle: Option<f64>,
}

impl Options {
    fn into_config(self) -> Result<ExperimentConfig> {
        let flags = ExperimentConfig {
            weights: self.weight,
            functions: self.function,
            harmonics: self.harmonic,
            p: self.p,
            r_grid: self.r_grid,
            t_grid: self.t_grid,
            tol: self.tol,
            out: self.out,
            suite: self.suite,
            grid: self.grid,
            angle: self.angle,
        };
        let base = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        Ok(base.overridden_by(flags))
    }
}

/// Output of one subcommand before it is written.
pub struct Outcome {
    pub table: Table,
    pub report: String,
    /// Property tags of failed checks; nonempty means exit code 1.
    pub failures: Vec<String>,
}

/// Parses `argv` (including the program name), runs, and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    configure_threads();
    let command = cli.command;
    let outcome = cli.opts.into_config().and_then(|cfg| {
        let outcome = execute(command, &cfg)?;
        let dir = PathBuf::from(cfg.out.as_deref().unwrap_or("pshlab-out"));
        write_outputs(&dir, command.name(), &outcome)?;
        Ok(outcome)
    });
    match outcome {
        Ok(o) => {
            print!("{}", o.report);
            if o.failures.is_empty() {
                0
            } else {
                eprintln!("verification failed: {}", o.failures.join(", "));
                1
            }
        }
        Err(e) => {
            eprintln!("pshlab: {e}");
            2
        }
    }
}

/// `PSHLAB_THREADS` caps the worker pool.
fn configure_threads() {
    if let Some(n) = std::env::var("PSHLAB_THREADS")
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
    {
        if n > 0 {
            // a second call in the same process keeps the first pool
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn write_outputs(dir: &Path, name: &str, o: &Outcome) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    o.table.write(&dir.join(format!("{name}.csv")))?;
    std::fs::write(dir.join(format!("{name}_report.txt")), &o.report)?;
    Ok(())
}

/// Runs one subcommand on a resolved config without touching the disk.
pub fn execute_named(command: &str, cfg: &ExperimentConfig) -> Result<Outcome> {
    let cmd = match command {
        "density" => Command::Density,
        "norm" => Command::Norm,
        "measure" => Command::Measure,
        "membership" => Command::Membership,
        "deflate" => Command::Deflate,
        "isometry" => Command::Isometry,
        "probe" => Command::Probe,
        "verify" => Command::Verify,
        _ => return Err(Error::Config(format!("unknown command `{command}`"))),
    };
    execute(cmd, cfg)
}

fn execute(command: Command, cfg: &ExperimentConfig) -> Result<Outcome> {
    if let Some(t) = cfg.tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::Config(format!("tol must be positive, got {t}")));
        }
    }
    match command {
        Command::Density => density(cfg),
        Command::Norm => norm(cfg),
        Command::Measure => measure(cfg),
        Command::Membership => membership_cmd(cfg),
        Command::Deflate => deflate_cmd(cfg),
        Command::Isometry => isometry_cmd(cfg),
        Command::Probe => probe(cfg),
        Command::Verify => verify_cmd(cfg),
    }
}

/// Parsed inputs with their spec strings, which label the CSV rows.
struct Inputs {
    weights: Vec<(String, RieszMeasure)>,
    functions: Vec<(String, AnalyticFunction)>,
}

fn located(what: &str, index: usize, e: Error) -> Error {
    match e {
        Error::Parse { line, column, message } => Error::Parse {
            line,
            column,
            message: format!("{what}[{index}]: {message}"),
        },
        e => Error::Config(format!("{what}[{index}]: {e}")),
    }
}

fn inputs(cfg: &ExperimentConfig, need_weight: bool, need_function: bool) -> Result<Inputs> {
    let weights = cfg
        .weights
        .iter()
        .enumerate()
        .map(|(i, s)| {
            parse_weight(s)
                .map(|w| (s.clone(), w))
                .map_err(|e| located("weight", i, e))
        })
        .collect::<Result<Vec<_>>>()?;
    let functions = cfg
        .functions
        .iter()
        .enumerate()
        .map(|(i, s)| {
            parse_function(s)
                .map(|f| (s.clone(), f))
                .map_err(|e| located("function", i, e))
        })
        .collect::<Result<Vec<_>>>()?;
    if need_weight && weights.is_empty() {
        return Err(Error::Config("at least one --weight is required".into()));
    }
    if need_function && functions.is_empty() {
        return Err(Error::Config("at least one --f is required".into()));
    }
    Ok(Inputs { weights, functions })
}

fn ps(cfg: &ExperimentConfig) -> Result<Vec<f64>> {
    let p = if cfg.p.is_empty() { vec![2.0] } else { cfg.p.clone() };
    if let Some(bad) = p.iter().find(|&&x| !(x > 0.0 && x.is_finite())) {
        return Err(Error::Config(format!("p must be positive, got {bad}")));
    }
    Ok(p)
}

fn t_grid(cfg: &ExperimentConfig) -> Result<Vec<f64>> {
    let t = if cfg.t_grid.is_empty() {
        DEFAULT_T_GRID.to_vec()
    } else {
        cfg.t_grid.clone()
    };
    if let Some(bad) = t.iter().find(|&&x| !(x > 0.0 && x < 1.0)) {
        return Err(Error::Config(format!("t-grid values must lie in (0, 1), got {bad}")));
    }
    Ok(t)
}

fn r_grid(cfg: &ExperimentConfig) -> Result<Vec<f64>> {
    let r = if cfg.r_grid.is_empty() {
        DEFAULT_R_GRID.to_vec()
    } else {
        cfg.r_grid.clone()
    };
    if let Some(bad) = r.iter().find(|&&x| !(x < 0.0 && x.is_finite())) {
        return Err(Error::Config(format!("r-grid values must be negative, got {bad}")));
    }
    Ok(r)
}

fn hardy_for(cfg: &ExperimentConfig) -> Hardy {
    match cfg.tol {
        Some(rel) => Hardy::new(Tolerance {
            abs: DEFAULT_TOLERANCE.abs.min(rel * 1e-4),
            rel: rel.min(DEFAULT_TOLERANCE.rel),
        }),
        None => Hardy::default(),
    }
}

/// `(value cell, verdict)` for a norm; divergent norms print as `inf`.
fn norm_cells(n: &Result<Norm>) -> (Cell, &'static str) {
    match n {
        Ok(Norm::Divergent { .. }) => (Cell::Num(f64::INFINITY), "divergent"),
        Ok(n) => (Cell::Num(n.value()), "finite"),
        Err(_) => (Cell::text("error"), "error"),
    }
}

type Case<'a> = (&'a (String, RieszMeasure), &'a (String, AnalyticFunction), f64);

fn sweep<'a>(inp: &'a Inputs, p: &[f64]) -> Vec<Case<'a>> {
    let mut out = Vec::new();
    for w in &inp.weights {
        for f in &inp.functions {
            for &q in p {
                out.push((w, f, q));
            }
        }
    }
    out
}

fn density(cfg: &ExperimentConfig) -> Result<Outcome> {
    let inp = inputs(cfg, true, false)?;
    let n = cfg.grid.unwrap_or(DEFAULT_DENSITY_GRID);
    if n == 0 {
        return Err(Error::Config("grid must be positive".into()));
    }
    let mut table = Table::new(&["weight", "k", "theta", "alpha", "verdict", "property"]);
    let mut report = header("density", cfg);
    for (spec, nu) in &inp.weights {
        let values: Vec<(f64, Result<f64>)> = (0..n)
            .into_par_iter()
            .map(|k| {
                let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
                (theta, nu.boundary_density(theta))
            })
            .collect();
        let mut min = f64::INFINITY;
        let mut max = 0.0f64;
        for (k, (theta, a)) in values.iter().enumerate() {
            let (cell, verdict) = match a {
                Ok(v) if v.is_infinite() => (Cell::Num(*v), "inf"),
                Ok(v) => {
                    min = min.min(*v);
                    max = max.max(*v);
                    (Cell::Num(*v), "finite")
                }
                Err(_) => (Cell::text("error"), "error"),
            };
            table.push(vec![
                spec.as_str().into(),
                k.into(),
                (*theta).into(),
                cell,
                verdict.into(),
                "boundary-density".into(),
            ]);
        }
        let sing: Vec<String> = nu
            .density()
            .singular_angles()
            .iter()
            .map(|s| format!("{:.6} ({:?})", s.angle, s.behavior))
            .collect();
        let _ = writeln!(
            report,
            "weight {spec}: total mass {:.12}, alpha on {n} angles in [{min:.12}, {max:.12}] (finite values), singular angles [{}]",
            nu.total_mass(),
            sing.join(", ")
        );
    }
    Ok(Outcome {
        table,
        report,
        failures: Vec::new(),
    })
}

fn header(name: &str, cfg: &ExperimentConfig) -> String {
    let mut s = format!("pshlab {name}\n");
    for w in &cfg.weights {
        let _ = writeln!(s, "  weight: {w}");
    }
    for f in &cfg.functions {
        let _ = writeln!(s, "  function: {f}");
    }
    if !cfg.p.is_empty() {
        let _ = writeln!(s, "  p: {:?}", cfg.p);
    }
    if let Some(t) = cfg.tol {
        let _ = writeln!(s, "  tol: {t:e}");
    }
    s
}

fn norm(cfg: &ExperimentConfig) -> Result<Outcome> {
    let inp = inputs(cfg, true, true)?;
    let p = ps(cfg)?;
    let h = hardy_for(cfg);
    let rows: Vec<_> = sweep(&inp, &p)
        .into_par_iter()
        .map(|(w, f, q)| {
            let b = h.weighted_norm_boundary(&f.1, q, &w.1);
            let i = match &b {
                Ok(Norm::Divergent { angle, exponent }) => Ok(Norm::Divergent {
                    angle: *angle,
                    exponent: *exponent,
                }),
                _ => h.weighted_norm_interior(&f.1, q, &w.1),
            };
            let k = h.classical_norm(&f.1, q);
            (w, f, q, b, i, k)
        })
        .collect();
    let mut table = Table::new(&[
        "weight",
        "f",
        "p",
        "boundary",
        "interior",
        "classical",
        "relative_gap",
        "verdict",
        "property",
    ]);
    let mut report = header("norm", cfg);
    for (w, f, q, b, i, k) in rows {
        let (bc, verdict) = norm_cells(&b);
        let (ic, _) = norm_cells(&i);
        let (kc, _) = norm_cells(&k);
        let gap = match (&b, &i) {
            (Ok(Norm::Finite(x)), Ok(Norm::Finite(y))) => {
                Cell::Num((x.norm - y.norm).abs() / x.norm.max(f64::MIN_POSITIVE))
            }
            (Ok(Norm::Divergent { .. }), _) => Cell::Num(f64::INFINITY),
            _ => Cell::text("error"),
        };
        let _ = writeln!(
            report,
            "{} | {} | p={q}: boundary {} interior {} classical {} ({verdict})",
            w.0,
            f.0,
            show(&b),
            show(&i),
            show(&k)
        );
        table.push(vec![
            w.0.as_str().into(),
            f.0.as_str().into(),
            q.into(),
            bc,
            ic,
            kc,
            gap,
            verdict.into(),
            "norm-identity".into(),
        ]);
    }
    Ok(Outcome {
        table,
        report,
        failures: Vec::new(),
    })
}

fn show(n: &Result<Norm>) -> String {
    match n {
        Ok(Norm::Divergent { angle, exponent }) => format!("inf (exponent {exponent} at angle {angle})"),
        Ok(n) => format!("{:.12}", n.value()),
        Err(e) => format!("error: {e}"),
    }
}

fn measure(cfg: &ExperimentConfig) -> Result<Outcome> {
    let inp = inputs(cfg, true, false)?;
    let ts = t_grid(cfg)?;
    let rs = r_grid(cfg)?;
    let grid = cfg.grid.unwrap_or(DEFAULT_DENSITY_GRID);
    let angle = cfg.angle.unwrap_or(0.0);
    let h = hardy_for(cfg);
    let p = ps(cfg)?;
    let harmonics = cfg
        .harmonics
        .iter()
        .enumerate()
        .map(|(i, s)| {
            parse_harmonic(s)
                .map(|f| (s.clone(), f))
                .map_err(|e| located("harmonic", i, e))
        })
        .collect::<Result<Vec<_>>>()?;
    let phi_f = match inp.functions.first() {
        Some((s, f)) => (s.clone(), f.clone()),
        None => ("const 1".to_string(), AnalyticFunction::constant(1.0)),
    };
    let mut table = Table::new(&["weight", "quantity", "x", "value", "error_estimate", "property"]);
    let mut report = header("measure", cfg);
    for (spec, nu) in &inp.weights {
        let row = |q: &str, x: f64, v: Cell, e: f64, tag: &str| -> Vec<Cell> {
            vec![spec.as_str().into(), q.into(), x.into(), v, e.into(), tag.into()]
        };
        let mass = nu.total_mass();
        table.push(row("total_mass", 0.0, mass.into(), 0.0, "riesz-mass"));
        let lb = crate::measures::density_lower_bound(nu, grid.max(16));
        let lb_cell = lb.as_ref().map_or(Cell::text("error"), |v| Cell::Num(*v));
        table.push(row(
            "density_lower_bound",
            grid as f64,
            lb_cell,
            0.0,
            "density-lower-bound",
        ));
        let fubini = crate::measures::mu_u(nu, |_| 1.0, &[]);
        let (fv, fe) = match &fubini {
            Ok(crate::quadrature::Integral::Finite(q)) => (Cell::Num(q.value), q.error_estimate),
            Ok(_) => (Cell::Num(f64::INFINITY), 0.0),
            Err(_) => (Cell::text("error"), 0.0),
        };
        table.push(row("mu_u_one", 0.0, fv, fe, "fubini"));
        let us: Vec<_> = ts
            .par_iter()
            .map(|&t| nu.evaluate_u(DiskPoint::from_boundary_distance(1.0 - t, angle)))
            .collect();
        for (&t, u) in ts.iter().zip(&us) {
            let v = u.as_ref().map_or(Cell::text("error"), |v| Cell::Num(*v));
            table.push(row("u", t, v, 0.0, "radial-limit"));
        }
        let phi = AbsPow::new(phi_f.1.clone(), 2.0);
        let lj: Vec<_> = rs.par_iter().map(|&r| h.demailly_functional(nu, r, &phi)).collect();
        for (&r, v) in rs.iter().zip(&lj) {
            let (c, e) = v
                .as_ref()
                .map_or((Cell::text("error"), 0.0), |q| (Cell::Num(q.value), q.error_estimate));
            table.push(row("demailly", r, c, e, "lelong-jensen"));
        }
        let limit = h.weighted_norm_boundary(&phi_f.1, 2.0, nu);
        let lc = match &limit {
            Ok(n) => Cell::Num(n.value().powi(2)),
            Err(_) => Cell::text("error"),
        };
        table.push(row("mu_u_limit", 0.0, lc, 0.0, "lelong-jensen"));
        if let Some((hs, hf)) = harmonics.first() {
            for &q in p.iter().filter(|&&q| q > 1.0) {
                let n = h.harmonic_norm(hf, q, nu);
                let (c, _) = norm_cells(&n);
                table.push(row("harmonic_norm", q, c, 0.0, "harmonic-norm"));
                let _ = writeln!(report, "weight {spec}: ||{hs}||_(h^{q}_u) = {}", show(&n));
            }
            let consts = [("const 1".to_string(), HarmonicFunction::constant(1.0))];
            let phis = if harmonics.len() > 1 {
                &harmonics[1..]
            } else {
                &consts[..]
            };
            for (k, (ps_, phi)) in phis.iter().enumerate() {
                let gaps: Vec<_> = rs.par_iter().map(|&r| h.weak_star_gap(nu, hf, phi, r)).collect();
                for (&r, g) in rs.iter().zip(&gaps) {
                    let (c, e) = g
                        .as_ref()
                        .map_or((Cell::text("error"), 0.0), |g| (Cell::Num(g.gap), g.error_estimate));
                    table.push(row(&format!("weak_star_gap[{k}]"), r, c, e, "weak-star"));
                }
                let _ = writeln!(
                    report,
                    "weight {spec}: weak-star gap of {hs} against {ps_} over {} levels",
                    rs.len()
                );
            }
        }
        let _ = writeln!(
            report,
            "weight {spec}: mass {mass:.12}; Lelong-Jensen sweep of |{}|^2 over {} levels",
            phi_f.0,
            rs.len()
        );
    }
    Ok(Outcome {
        table,
        report,
        failures: Vec::new(),
    })
}

fn membership_cmd(cfg: &ExperimentConfig) -> Result<Outcome> {
    let inp = inputs(cfg, true, true)?;
    let p = ps(cfg)?;
    let rows: Vec<_> = sweep(&inp, &p)
        .into_par_iter()
        .map(|(w, f, q)| (w, f, q, membership(&f.1, q, &w.1)))
        .collect();
    let mut table = Table::new(&[
        "weight",
        "f",
        "p",
        "verdict",
        "exponent",
        "angle",
        "classical_member",
        "fit_slope",
        "predicted_slope",
        "property",
    ]);
    let mut report = header("membership", cfg);
    for (w, f, q, m) in rows {
        let m = m?;
        let (slope, pred) = m.fit.as_ref().map_or((Cell::text(""), Cell::text("")), |s| {
            (s.slope.into(), s.predicted.into())
        });
        let _ = writeln!(report, "{} | {} | p={q}: {}", w.0, f.0, m.summary());
        table.push(vec![
            w.0.as_str().into(),
            f.0.as_str().into(),
            q.into(),
            m.verdict.to_string().into(),
            m.exponent.into(),
            m.angle.into(),
            m.classical_member.to_string().into(),
            slope,
            pred,
            "membership".into(),
        ]);
    }
    Ok(Outcome {
        table,
        report,
        failures: Vec::new(),
    })
}

fn deflate_cmd(cfg: &ExperimentConfig) -> Result<Outcome> {
    let inp = inputs(cfg, true, true)?;
    let p = ps(cfg)?;
    let rows: Vec<_> = sweep(&inp, &p)
        .into_par_iter()
        .map(|(w, f, q)| (w, f, q, deflate(&f.1, q, &w.1)))
        .collect();
    let mut table = Table::new(&[
        "weight",
        "f",
        "p",
        "norm_f",
        "norm_g",
        "relative_gap",
        "min_abs_g",
        "route",
        "blaschke",
        "property",
    ]);
    let mut report = header("deflate", cfg);
    for (w, f, q, d) in rows {
        let d = d?;
        let r = &d.report;
        let _ = writeln!(
            report,
            "{} | {} | p={q}: ||f|| {:.12} ||g|| {:.12} gap {:.3e} via {}; B = {}",
            w.0, f.0, r.norm_f, r.norm_g, r.relative_gap, r.route, d.blaschke
        );
        table.push(vec![
            w.0.as_str().into(),
            f.0.as_str().into(),
            q.into(),
            r.norm_f.into(),
            r.norm_g.into(),
            r.relative_gap.into(),
            r.min_abs_g.into(),
            r.route.into(),
            d.blaschke.to_string().into(),
            "deflation".into(),
        ]);
    }
    Ok(Outcome {
        table,
        report,
        failures: Vec::new(),
    })
}

fn isometry_cmd(cfg: &ExperimentConfig) -> Result<Outcome> {
    let inp = inputs(cfg, true, true)?;
    let p = ps(cfg)?;
    let rows: Vec<_> = sweep(&inp, &p)
        .into_par_iter()
        .map(|(w, f, q)| {
            let r = isometry_check(&f.1, q, &w.1).and_then(|chk| {
                let back = isometry_inverse(&isometry_apply(&f.1, q, &w.1)?, q, &w.1)?;
                let trip = check_grid(16)
                    .iter()
                    .map(|&z| (back.eval(z) - f.1.eval(z)).norm())
                    .fold(0.0, f64::max);
                Ok((chk, trip))
            });
            (w, f, q, r)
        })
        .collect();
    let mut table = Table::new(&[
        "weight",
        "f",
        "p",
        "weighted",
        "classical_image",
        "relative_gap",
        "round_trip",
        "property",
    ]);
    let mut report = header("isometry", cfg);
    for (w, f, q, r) in rows {
        let (chk, trip) = r?;
        let _ = writeln!(
            report,
            "{} | {} | p={q}: ||f||_u {:.12} ||A^(1/p) f|| {:.12} gap {:.3e} round trip {trip:.1e}",
            w.0, f.0, chk.weighted, chk.classical_image, chk.relative_gap
        );
        table.push(vec![
            w.0.as_str().into(),
            f.0.as_str().into(),
            q.into(),
            chk.weighted.into(),
            chk.classical_image.into(),
            chk.relative_gap.into(),
            trip.into(),
            "isometry".into(),
        ]);
    }
    Ok(Outcome {
        table,
        report,
        failures: Vec::new(),
    })
}

fn probe(cfg: &ExperimentConfig) -> Result<Outcome> {
    let inp = inputs(cfg, false, true)?;
    let p = ps(cfg)?;
    let ts = t_grid(cfg)?;
    let angle = cfg.angle.unwrap_or(0.0);
    let mut table = Table::new(&[
        "f",
        "p",
        "angle",
        "t",
        "value",
        "error_estimate",
        "exceeds_one",
        "property",
    ]);
    let mut report = header("probe", cfg);
    for (spec, f) in &inp.functions {
        for &q in &p {
            let r = ball_probe(f, q, &ts, angle)?;
            for row in &r.rows {
                table.push(vec![
                    spec.as_str().into(),
                    q.into(),
                    r.angle.into(),
                    row.t.into(),
                    row.value.into(),
                    row.error_estimate.into(),
                    (row.value > 1.0).to_string().into(),
                    "ball-probe".into(),
                ]);
            }
            let _ = writeln!(
                report,
                "{spec} | p={q}: max {:.12}; witness {}; within unit ball: {}",
                r.max_value,
                r.witness.map_or("none".to_string(), |t| t.to_string()),
                r.within_unit_ball
            );
        }
    }
    Ok(Outcome {
        table,
        report,
        failures: Vec::new(),
    })
}

fn verify_cmd(cfg: &ExperimentConfig) -> Result<Outcome> {
    let suite: Suite = cfg.suite.as_deref().unwrap_or("core").parse()?;
    let tol = cfg.tol.unwrap_or(1e-3);
    let checks = verify::run_suite(suite, tol);
    let mut table = Table::new(&["check", "status", "detail", "property"]);
    let mut report = format!(
        "pshlab verify --suite {} --tol {tol:e}\n",
        cfg.suite.as_deref().unwrap_or("core")
    );
    let mut failures = Vec::new();
    for c in &checks {
        let status = if c.ok { "PASS" } else { "FAIL" };
        let _ = writeln!(report, "{status}  [{}] {}: {}", c.property, c.name, c.detail);
        table.push(vec![
            c.name.into(),
            status.into(),
            c.detail.as_str().into(),
            c.property.into(),
        ]);
        if !c.ok {
            failures.push(c.property.to_string());
        }
    }
    let _ = writeln!(
        report,
        "{} of {} checks passed",
        checks.len() - failures.len(),
        checks.len()
    );
    Ok(Outcome {
        table,
        report,
        failures,
    })
}
