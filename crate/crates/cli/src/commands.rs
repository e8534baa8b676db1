//! The six commands. Each returns the full report text; the caller decides
//! where it goes.

use std::fmt::Write as _;

use fourgeom::curvature::analyze_point;
use fourgeom::deformation::{rigidity_report, LinearDeformation, RigidityReport};
use fourgeom::geometry::{FrameField, Geometry};
use fourgeom::invariants::{hitchin_thorpe, integrate_invariants, refined_ht, refined_identity_residual, RefinedHt};
use fourgeom::linalg::Mat3;
use fourgeom::quadrature::QuadratureSpec;
use fourgeom::shooting::{selfdual_shoot, ShootStatus, ShootingProblem, TrajectoryPoint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::config::{Format, RangeSpec, RunConfig};
use crate::error::{CliError, CliResult};
use crate::registry::{build_geometry, chart_point, resolve_params};

pub const SCHEMA: u32 = 1;

/// Sweep sample points cover this fraction band of every non-cyclic axis.
pub const SAMPLE_BAND: (f64, f64) = (0.2, 0.8);

/// Einstein tolerance on the relative L2 norm of `f₊₋` before the
/// Hitchin-Thorpe chain is reported.
pub const EINSTEIN_L2_TOL: f64 = 1e-6;

/// Named reals serialized as a JSON object in the given order.
#[derive(Debug, Clone, PartialEq)]
pub struct Pairs(pub Vec<(String, f64)>);

impl Pairs {
    fn of(p: &[(&str, f64)]) -> Self {
        Pairs(p.iter().map(|(k, v)| (k.to_string(), *v)).collect())
    }
}

impl Serialize for Pairs {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            m.serialize_entry(k, v)?;
        }
        m.end()
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Sides<T> {
    pub plus: T,
    pub minus: T,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalyzeReport {
    pub schema: u32,
    pub command: &'static str,
    pub geometry: String,
    pub params: Pairs,
    pub point: Pairs,
    pub volume_density: f64,
    pub fpp: Mat3<f64>,
    pub fpm: Mat3<f64>,
    pub fmp: Mat3<f64>,
    pub fmm: Mat3<f64>,
    pub ricci: [[f64; 4]; 4],
    pub scalar: f64,
    pub lambda_est: f64,
    pub weyl_eigenvalues: Sides<[f64; 3]>,
    pub densities: Sides<f64>,
    pub einstein_residual: f64,
    pub ricci_residual: f64,
    pub bianchi_residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct QuadratureInfo {
    pub nodes: usize,
    pub refined_nodes: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Margins {
    pub ht_plus: f64,
    pub ht_minus: f64,
    pub refined: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Residuals {
    pub chi_int: f64,
    pub tau_int: f64,
    pub refine_delta: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct HtChain {
    pub plus_identity: f64,
    pub minus_identity: f64,
    pub holds: bool,
    pub refined_identity_residual: Sides<f64>,
    pub refined: RefinedHt<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct InvariantsReport {
    pub schema: u32,
    pub command: &'static str,
    pub geometry: String,
    pub params: Pairs,
    pub quadrature: QuadratureInfo,
    pub chi: f64,
    pub tau: f64,
    pub volume: f64,
    pub margins: Margins,
    pub residuals: Residuals,
    pub chi_nearest: i64,
    pub tau_nearest: i64,
    pub lambda_mean: f64,
    pub einstein_l2: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hitchin_thorpe: Option<HtChain>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub value: f64,
    pub max_einstein_residual: f64,
    pub rho_plus_min: f64,
    pub rho_plus_max: f64,
    pub rho_minus_min: f64,
    pub rho_minus_max: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub schema: u32,
    pub command: &'static str,
    pub geometry: String,
    pub params: Pairs,
    pub vary: RangeSpec,
    pub samples: usize,
    pub rows: Vec<SweepRow>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DeformReport {
    pub schema: u32,
    pub command: &'static str,
    pub nodes: usize,
    pub passed: bool,
    #[serde(flatten)]
    pub report: RigidityReport<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ShootReport {
    pub schema: u32,
    pub command: &'static str,
    pub problem: ShootingProblem<f64>,
    pub status: ShootStatus<f64>,
    pub match_deficit: f64,
    pub tolerance: f64,
    pub closes: bool,
    pub steps: usize,
    pub end: TrajectoryPoint<f64>,
}

/// Serializes to pretty JSON; a non-finite number anywhere is a numeric failure.
pub fn to_json<T: Serialize>(v: &T) -> CliResult<String> {
    let value = serde_json::to_value(v).map_err(|e| CliError::Numeric(e.to_string()))?;
    if let Some(path) = find_null(&value, String::new()) {
        return Err(CliError::Numeric(format!("non-finite value at {path}")));
    }
    let mut s = serde_json::to_string_pretty(&value).map_err(|e| CliError::Numeric(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn find_null(v: &serde_json::Value, path: String) -> Option<String> {
    match v {
        serde_json::Value::Null => Some(if path.is_empty() { "/".into() } else { path }),
        serde_json::Value::Array(a) => a.iter().enumerate().find_map(|(i, x)| find_null(x, format!("{path}/{i}"))),
        serde_json::Value::Object(m) => m.iter().find_map(|(k, x)| find_null(x, format!("{path}/{k}"))),
        _ => None,
    }
}

fn finite(name: &str, v: f64) -> CliResult<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Numeric(format!("{name} is not finite")))
    }
}

fn json_only(cfg: &RunConfig) -> CliResult<()> {
    match cfg.format {
        Format::Json => Ok(()),
        Format::Csv => Err(CliError::Usage(format!("{:?} writes json only", cfg.command).to_lowercase())),
    }
}

fn geometry_params(g: &Geometry<f64>) -> Pairs {
    Pairs::of(&g.params())
}

pub fn cmd_analyze(cfg: &RunConfig) -> CliResult<String> {
    json_only(cfg)?;
    let g = build_geometry(&cfg.geometry, &cfg.params)?;
    let x = match &cfg.point {
        Some(named) => chart_point(&g, named)?,
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let u: [f64; 4] = std::array::from_fn(|_| rng.gen_range(0.05..0.95));
            g.chart().at_fraction(&u)
        }
    };
    let p = analyze_point(&g, &x)?;
    let c = &p.coeffs;
    let (wp, wm) = c.weyl_eigenvalues();
    let (rp, rm) = p.densities();
    let names = g.chart().coord_names;
    let report = AnalyzeReport {
        schema: SCHEMA,
        command: "analyze",
        geometry: cfg.geometry.clone(),
        params: geometry_params(&g),
        point: Pairs((0..4).map(|k| (names[k].to_string(), x[k])).collect()),
        volume_density: p.det,
        fpp: c.fpp,
        fpm: c.fpm,
        fmp: c.fmp,
        fmm: c.fmm,
        ricci: c.ricci(),
        scalar: c.scalar(),
        lambda_est: c.lambda_est(),
        weyl_eigenvalues: Sides { plus: wp, minus: wm },
        densities: Sides { plus: rp, minus: rm },
        einstein_residual: p.einstein_residual(),
        ricci_residual: c.ricci_residual(),
        bianchi_residual: c.bianchi_residual(),
    };
    to_json(&report)
}

pub fn cmd_invariants(cfg: &RunConfig) -> CliResult<String> {
    json_only(cfg)?;
    let g = build_geometry(&cfg.geometry, &cfg.params)?;
    let q = QuadratureSpec::uniform(cfg.nodes);
    let rep = integrate_invariants(&g, &q)?;
    finite("chi", rep.chi)?;
    finite("tau", rep.tau)?;
    let einstein_tol = cfg.tol.unwrap_or(EINSTEIN_L2_TOL);
    let hitchin_thorpe = match hitchin_thorpe(&rep, einstein_tol) {
        Ok(m) => {
            let (rp, rm) = refined_identity_residual(&rep);
            Some(HtChain {
                plus_identity: m.plus_identity,
                minus_identity: m.minus_identity,
                holds: m.holds(einstein_tol),
                refined_identity_residual: Sides { plus: rp, minus: rm },
                refined: refined_ht(&rep, rep.lambda_mean(), einstein_tol.max(1e-9))?,
            })
        }
        Err(_) => None,
    };
    let fine = q.refined(g.chart());
    let report = InvariantsReport {
        schema: SCHEMA,
        command: "invariants",
        geometry: cfg.geometry.clone(),
        params: geometry_params(&g),
        quadrature: QuadratureInfo { nodes: cfg.nodes, refined_nodes: fine.nodes.iter().copied().max().unwrap_or(0) },
        chi: rep.chi,
        tau: rep.tau,
        volume: rep.volume,
        margins: Margins { ht_plus: rep.ht_margin_plus, ht_minus: rep.ht_margin_minus, refined: rep.refined_lhs },
        residuals: Residuals {
            chi_int: rep.chi_residual,
            tau_int: rep.tau_residual,
            refine_delta: rep.chi_refine_delta.abs().max(rep.tau_refine_delta.abs()),
        },
        chi_nearest: rep.chi_nearest,
        tau_nearest: rep.tau_nearest,
        lambda_mean: rep.lambda_mean(),
        einstein_l2: rep.integrals.einstein_l2,
        hitchin_thorpe,
    };
    to_json(&report)
}

/// Points on a `samples`-per-axis grid over the non-cyclic axes; cyclic axes
/// sit at mid-range.
pub fn sample_grid(g: &Geometry<f64>, samples: usize) -> Vec<[f64; 4]> {
    let chart = g.chart();
    let (lo, hi) = SAMPLE_BAND;
    let fractions: Vec<f64> = if samples == 1 {
        vec![0.5]
    } else {
        (0..samples).map(|k| lo + (hi - lo) * k as f64 / (samples - 1) as f64).collect()
    };
    let axes: Vec<Vec<f64>> = (0..4).map(|k| if chart.cyclic[k] { vec![0.5] } else { fractions.clone() }).collect();
    let mut out = Vec::new();
    for &a in &axes[0] {
        for &b in &axes[1] {
            for &c in &axes[2] {
                for &d in &axes[3] {
                    out.push(chart.at_fraction(&[a, b, c, d]));
                }
            }
        }
    }
    out
}

fn sweep_row(cfg: &RunConfig, vary: &RangeSpec, value: f64) -> CliResult<SweepRow> {
    let mut params: Vec<(String, f64)> = cfg.params.iter().filter(|(k, _)| *k != vary.name).cloned().collect();
    params.push((vary.name.clone(), value));
    let g = build_geometry(&cfg.geometry, &params)?;
    let mut row = SweepRow {
        value,
        max_einstein_residual: 0.0,
        rho_plus_min: f64::INFINITY,
        rho_plus_max: f64::NEG_INFINITY,
        rho_minus_min: f64::INFINITY,
        rho_minus_max: f64::NEG_INFINITY,
        chi: None,
        tau: None,
    };
    for x in sample_grid(&g, cfg.samples) {
        let p = analyze_point(&g, &x)?;
        let (rp, rm) = p.densities();
        row.max_einstein_residual = row.max_einstein_residual.max(finite("einstein residual", p.einstein_residual())?);
        row.rho_plus_min = row.rho_plus_min.min(finite("rho+", rp)?);
        row.rho_plus_max = row.rho_plus_max.max(rp);
        row.rho_minus_min = row.rho_minus_min.min(finite("rho-", rm)?);
        row.rho_minus_max = row.rho_minus_max.max(rm);
    }
    if cfg.with_invariants {
        let rep = integrate_invariants(&g, &QuadratureSpec::uniform(cfg.nodes))?;
        row.chi = Some(finite("chi", rep.chi)?);
        row.tau = Some(finite("tau", rep.tau)?);
    }
    Ok(row)
}

pub fn cmd_sweep(cfg: &RunConfig) -> CliResult<String> {
    let vary = cfg.vary.clone().ok_or_else(|| CliError::Usage("sweep needs --vary name=lo:hi:count".into()))?;
    let base = resolve_params(&cfg.geometry, &cfg.params)?;
    if !base.iter().any(|(k, _)| *k == vary.name) {
        return Err(CliError::Usage(format!("{} has no parameter '{}'", cfg.geometry, vary.name)));
    }
    let rows = vary.values().par_iter().map(|&v| sweep_row(cfg, &vary, v)).collect::<CliResult<Vec<_>>>()?;
    match cfg.format {
        Format::Json => to_json(&SweepReport {
            schema: SCHEMA,
            command: "sweep",
            geometry: cfg.geometry.clone(),
            params: Pairs::of(&base),
            vary,
            samples: cfg.samples,
            rows,
        }),
        Format::Csv => {
            let mut out =
                format!("{},max_einstein_residual,rho_plus_min,rho_plus_max,rho_minus_min,rho_minus_max", vary.name);
            if cfg.with_invariants {
                out.push_str(",chi,tau");
            }
            out.push('\n');
            for r in &rows {
                let mut cells = vec![
                    r.value,
                    r.max_einstein_residual,
                    r.rho_plus_min,
                    r.rho_plus_max,
                    r.rho_minus_min,
                    r.rho_minus_max,
                ];
                cells.extend(r.chi.into_iter().chain(r.tau));
                let line: Vec<String> = cells.iter().map(|v| format!("{v:e}")).collect();
                let _ = writeln!(out, "{}", line.join(","));
            }
            Ok(out)
        }
    }
}

pub fn cmd_deform(cfg: &RunConfig) -> CliResult<String> {
    if cfg.geometry != "biaxial-s4" {
        return Err(CliError::Usage(format!("deform works on biaxial-s4, not {}", cfg.geometry)));
    }
    let p = resolve_params("biaxial-s4", &cfg.params)?;
    let d = LinearDeformation::regular(p[0].1, p[1].1, p[2].1);
    let report = rigidity_report(&d, &QuadratureSpec::uniform(cfg.nodes))?;
    match cfg.format {
        Format::Json => to_json(&DeformReport {
            schema: SCHEMA,
            command: "deform",
            nodes: cfg.nodes,
            passed: report.passed(),
            report,
        }),
        Format::Csv => {
            let mut out = String::from("check,value,tolerance,pass\n");
            for c in &report.checks {
                let _ = writeln!(out, "{},{:e},{:e},{}", c.name, c.value, c.tolerance, c.pass);
            }
            Ok(out)
        }
    }
}

pub const SHOOT_PARAMS: [(&str, f64); 3] = [("k", 1.0), ("ratio", 1.0), ("r0", 1e-4)];
pub const SHOOT_TOL: f64 = 1e-6;

pub fn shooting_problem(params: &[(String, f64)]) -> CliResult<ShootingProblem<f64>> {
    let mut p = SHOOT_PARAMS;
    for (name, v) in params {
        let slot = p
            .iter_mut()
            .find(|(k, _)| k == name)
            .ok_or_else(|| CliError::Usage(format!("shoot has no parameter '{name}' (known: k, ratio, r0)")))?;
        slot.1 = *v;
    }
    let [(_, k), (_, ratio), (_, r0)] = p;
    if !(k > 0.0) {
        return Err(CliError::Usage(format!("k must be positive, got {k}")));
    }
    let sp = ShootingProblem { r0, ..ShootingProblem::sphere(k).with_slope_ratio(ratio) };
    sp.validate()?;
    Ok(sp)
}

pub fn cmd_shoot(cfg: &RunConfig) -> CliResult<String> {
    let sp = shooting_problem(&cfg.params)?;
    let res = selfdual_shoot(&sp)?;
    match cfg.format {
        Format::Csv => Ok(res.to_csv()),
        Format::Json => {
            let tolerance = cfg.tol.unwrap_or(SHOOT_TOL);
            let end = *res.trajectory.last().ok_or_else(|| CliError::Numeric("empty trajectory".into()))?;
            // an exploded solution is reported, not treated as a failure
            let match_deficit = res.match_deficit.min(f64::MAX);
            to_json(&ShootReport {
                schema: SCHEMA,
                command: "shoot",
                problem: sp,
                status: res.status,
                match_deficit,
                tolerance,
                closes: res.closes(tolerance),
                steps: res.trajectory.len(),
                end,
            })
        }
    }
}
