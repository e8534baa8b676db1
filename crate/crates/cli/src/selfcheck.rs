//! The built-in suite run by `check`: algebra identities, torsion, Page
//! closed forms, curvature consistency, ellipsoid closed forms and the
//! Hitchin-Thorpe chain. Checks run in a fixed order and the first failure
//! names the run.

use std::sync::Arc;

use fourgeom::algebra::ThooftTables;
use fourgeom::connection::{connection_jets, spin_connection, split_connection, torsion_residual, SpinConnection};
use fourgeom::curvature::{
    analyze_point, gauge_and_field_strengths, riemann_cartan, riemann_from_field_strengths, riemann_max_diff,
};
use fourgeom::deformation::{rigidity_report, LinearDeformation};
use fourgeom::geometry::{
    page_nu, page_quartic, round_s4, BiaxialS4, Chart, EllipsoidS4, FrameField, Geometry, PageParams, PageSpace,
    Profile, S2xS2, SineProfile,
};
use fourgeom::invariants::{
    hitchin_thorpe, integrate_invariants, refined_identity_residual, spectral_point, strong_ht_check,
};
use fourgeom::quadrature::QuadratureSpec;
use fourgeom::shooting::{selfdual_shoot, ShootingProblem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::CliResult;

/// How a check compares its value with the tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Bound {
    /// `value < tolerance`; overridden by `--tol`.
    Below,
    /// `value > tolerance`; a lower bound, not overridden.
    Above,
    /// `value == 0` in integer arithmetic.
    Exact,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub value: f64,
    pub tolerance: f64,
    pub bound: Bound,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckSummary {
    pub schema: u32,
    pub command: &'static str,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<&'static str>,
    pub checks: Vec<CheckOutcome>,
}

struct Suite {
    tol: Option<f64>,
    checks: Vec<CheckOutcome>,
}

impl Suite {
    fn push(&mut self, name: &'static str, value: f64, default_tol: f64, bound: Bound) {
        let tolerance = match (bound, self.tol) {
            (Bound::Below, Some(t)) => t,
            _ => default_tol,
        };
        let pass = match bound {
            Bound::Below => value.is_finite() && value < tolerance,
            Bound::Above => value.is_finite() && value > tolerance,
            Bound::Exact => value == 0.0,
        };
        self.checks.push(CheckOutcome { name, value, tolerance, bound, pass });
    }

    fn below(&mut self, name: &'static str, value: f64, tol: f64) {
        self.push(name, value, tol, Bound::Below);
    }
}

/// Swaps the sign of `η¹₀₃` and `η¹₃₀`; antisymmetry survives, self-duality does not.
pub fn flipped_tables() -> ThooftTables {
    let mut t = ThooftTables::default();
    t.eta[0][0][3] = -t.eta[0][0][3];
    t.eta[0][3][0] = -t.eta[0][3][0];
    t
}

pub fn catalog() -> Vec<Geometry<f64>> {
    let f: Arc<dyn Profile<f64>> = Arc::new(SineProfile { amp: 1.0, rate: 1.0 });
    let g: Arc<dyn Profile<f64>> = Arc::new(SineProfile { amp: 0.5, rate: 1.0 });
    vec![
        round_s4(1.3).unwrap().into(),
        EllipsoidS4::new(1.0, 0.8, 1.4).unwrap().into(),
        BiaxialS4::new(f, g, std::f64::consts::PI).unwrap().into(),
        PageSpace::new(PageParams::standard()).into(),
        S2xS2::new(1.0, 0.7).unwrap().into(),
    ]
}

pub fn interior_point(chart: &Chart<f64>, rng: &mut ChaCha8Rng) -> [f64; 4] {
    let u: [f64; 4] = std::array::from_fn(|_| rng.gen_range(0.05..0.95));
    chart.at_fraction(&u)
}

fn algebra(s: &mut Suite, tables: &ThooftTables) {
    const NAMES: [&str; 5] = ["antisymmetry", "self-duality", "normalization", "orthogonality", "intersection"];
    match tables.first_violation() {
        Some(bad) => {
            for name in NAMES {
                if name == bad {
                    s.push(name, 1.0, 0.0, Bound::Exact);
                    return;
                }
                s.push(name, 0.0, 0.0, Bound::Exact);
            }
        }
        None => NAMES.iter().for_each(|n| s.push(n, 0.0, 0.0, Bound::Exact)),
    }
}

fn torsion(s: &mut Suite, rng: &mut ChaCha8Rng) -> CliResult<()> {
    let mut worst: f64 = 0.0;
    for g in catalog() {
        for _ in 0..50 {
            let x = interior_point(g.chart(), rng);
            let w = spin_connection(&g, &x)?;
            worst = worst.max(torsion_residual(&g, &w, &x)?);
        }
    }
    s.below("torsion", worst, 1e-9);
    Ok(())
}

fn page(s: &mut Suite, rng: &mut ChaCha8Rng) -> CliResult<()> {
    let nu = page_nu::<f64>();
    s.below("page-nu-root", page_quartic(nu).abs(), 1e-14);
    s.below("page-nu-value", (nu - 0.2817).abs(), 5e-5);
    let (mut conn, mut gauge, mut coeff, mut ricci) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for lambda in [None, Some(0.6)] {
        let p0 = PageParams::standard();
        let params = match lambda {
            Some(l) => PageParams::new(p0.nu, l)?,
            None => p0,
        };
        let page = PageSpace::new(params);
        for _ in 0..30 {
            let x = interior_point(page.chart(), rng);
            let (theta, chi) = (x[0], x[3]);
            let w = spin_connection(&page, &x)?;
            conn = conn.max(w.max_abs_diff(&SpinConnection { omega: page.omega_closed_form(chi, theta) }));
            let a = split_connection(&w);
            let (ap, am) = page.gauge_closed_form(chi, theta);
            for i in 0..3 {
                for c in 0..4 {
                    gauge = gauge.max((a.aplus[i][c] - ap[i][c]).abs()).max((a.aminus[i][c] - am[i][c]).abs());
                }
            }
            let p = analyze_point(&page, &x)?;
            let (p1, p3) = page.psi_closed_form(chi, 1.0);
            let (m1, m3) = page.psi_closed_form(chi, -1.0);
            let (want_pp, want_mm) = ([p1, p1, p3], [-m1, -m1, -m3]);
            for i in 0..3 {
                for j in 0..3 {
                    let (wp, wm) = if i == j { (want_pp[i], want_mm[i]) } else { (0.0, 0.0) };
                    coeff = coeff.max((p.coeffs.fpp[i][j] - wp).abs()).max((p.coeffs.fmm[i][j] - wm).abs());
                }
            }
            let ric = p.coeffs.ricci();
            for a in 0..4 {
                for b in 0..4 {
                    let want = if a == b { params.lambda } else { 0.0 };
                    ricci = ricci.max((ric[a][b] - want).abs());
                }
            }
        }
    }
    s.below("page-spin-connection", conn, 1e-8);
    s.below("page-gauge-fields", gauge, 1e-8);
    s.below("page-curvature", coeff, 1e-8);
    s.below("page-ricci", ricci, 1e-9);
    Ok(())
}

fn curvature(s: &mut Suite, rng: &mut ChaCha8Rng) -> CliResult<()> {
    let (mut routes, mut bianchi, mut symmetry) = (0.0f64, 0.0f64, 0.0f64);
    for g in catalog() {
        for _ in 0..20 {
            let x = interior_point(g.chart(), rng);
            let cj = connection_jets(&g, &x)?;
            let (_, fs) = gauge_and_field_strengths(&cj);
            let coeffs = fourgeom::curvature::decompose(&fs);
            let from_fs = riemann_from_field_strengths(&fs);
            routes = routes
                .max(riemann_max_diff(&riemann_cartan(&cj), &from_fs))
                .max(riemann_max_diff(&coeffs.riemann(), &from_fs));
            bianchi = bianchi.max(coeffs.bianchi_residual());
            let ric = coeffs.ricci();
            for a in 0..4 {
                for b in 0..4 {
                    symmetry = symmetry.max((ric[a][b] - ric[b][a]).abs());
                }
            }
        }
    }
    s.below("riemann-routes", routes, 1e-9);
    s.below("bianchi", bianchi, 1e-9);
    s.below("ricci-symmetry", symmetry, 1e-9);
    Ok(())
}

fn ellipsoid(s: &mut Suite, rng: &mut ChaCha8Rng) -> CliResult<()> {
    let (mut density, mut coeff, mut round) = (0.0f64, 0.0f64, 0.0f64);
    let mut squashed = f64::INFINITY;
    for _ in 0..10 {
        let (a, b, c) = (rng.gen_range(0.6..1.6), rng.gen_range(0.6..1.6), rng.gen_range(0.6..1.6));
        let e = EllipsoidS4::new(a, b, c)?;
        for _ in 0..10 {
            let x = interior_point(e.chart(), rng);
            let (theta, rho) = (x[2], x[3]);
            let p = analyze_point(&e, &x)?;
            let (rp, rm) = p.densities();
            let want = e.density_closed_form(rho, theta);
            density = density.max((rp - want).abs().max((rm - want).abs()) / want.max(1.0));
            let k = e.coeffs_closed_form(rho, theta);
            let (pm, mp) = (p.coeffs.fpm, p.coeffs.fmp);
            let scale = pm.iter().flatten().fold(1.0f64, |m, v| m.max(v.abs()));
            let pairs = [
                (pm[0][0], k.f11),
                (pm[1][1], k.f22),
                (pm[2][2], k.f33),
                (pm[0][1], k.f12),
                (mp[0][0], k.f11),
                (mp[1][1], k.f22),
                (mp[2][2], k.f33),
                (mp[0][1], -k.f12),
            ];
            for (got, want) in pairs {
                coeff = coeff.max((got - want).abs() / scale);
            }
        }
    }
    let e = EllipsoidS4::new(1.0, 1.0, 1.0)?;
    let squashed_e = EllipsoidS4::new(1.0, 1.0, 1.2)?;
    for _ in 0..20 {
        let u: [f64; 4] = std::array::from_fn(|_| rng.gen_range(0.1..0.9));
        round = round.max(analyze_point(&e, &e.chart().at_fraction(&u))?.einstein_residual());
        squashed = squashed.min(analyze_point(&squashed_e, &squashed_e.chart().at_fraction(&u))?.einstein_residual());
    }
    s.below("ellipsoid-density", density, 1e-8);
    s.below("ellipsoid-coefficients", coeff, 1e-8);
    s.below("ellipsoid-round-einstein", round, 1e-10);
    s.push("ellipsoid-squashed-not-einstein", squashed, 1e-3, Bound::Above);
    Ok(())
}

fn hitchin_thorpe_chain(s: &mut Suite, rng: &mut ChaCha8Rng) -> CliResult<()> {
    let q = QuadratureSpec::uniform(24);
    let pi2 = std::f64::consts::PI.powi(2);
    let s4 = integrate_invariants(&round_s4(1.0f64)?, &q)?;
    s.below("chi-s4", (s4.chi - 2.0).abs(), 1e-6);
    s.below("tau-s4", s4.tau.abs(), 1e-8);
    let s2 = integrate_invariants(&S2xS2::new(1.0f64, 1.0)?, &q)?;
    s.below("chi-s2xs2", (s2.chi - 4.0).abs(), 1e-6);
    let page = integrate_invariants(&PageSpace::new(PageParams::<f64>::standard()), &q)?;
    s.below("chi-page", (page.chi - 4.0).abs(), 1e-3);
    s.below("tau-page", page.tau.abs(), 1e-3);

    let (mut identity, mut refined, mut margin) = (0.0f64, 0.0f64, 0.0f64);
    for rep in [&s4, &s2, &page] {
        let m = hitchin_thorpe(rep, 1e-6)?;
        identity = identity.max((m.plus - m.plus_identity).abs()).max((m.minus - m.minus_identity).abs());
        let (rp, rm) = refined_identity_residual(rep);
        refined = refined.max(rp.abs()).max(rm.abs());
        margin = margin.max(-m.plus).max(-m.minus);
    }
    s.below("ht-identity", identity, 1e-5);
    s.below("refined-identity", refined, 1e-5);
    s.push("ht-margin", margin, 0.0, Bound::Exact);
    let lam = s4.lambda_mean();
    s.below("s4-saturation", (lam * lam * s4.volume / (12.0 * pi2) - 2.0).abs(), 1e-6);
    let lam = page.lambda_mean();
    s.push("page-volume-bound", 48.0 * pi2 / (lam * lam) - page.volume, 0.0, Bound::Above);

    let mut violations = 0.0;
    for g in
        [round_s4(1.0)?.into(), S2xS2::new(1.0, 1.0)?.into(), Geometry::from(PageSpace::new(PageParams::standard()))]
    {
        for _ in 0..100 {
            let x = interior_point(g.chart(), rng);
            let sp = spectral_point(&analyze_point(&g, &x)?.coeffs, 1e-7)?;
            if sp.sectional_nonneg && !strong_ht_check(&sp)?.passes {
                violations += 1.0;
            }
        }
    }
    s.push("strong-ht-pointwise", violations, 0.0, Bound::Exact);
    Ok(())
}

fn rigidity(s: &mut Suite) -> CliResult<()> {
    let rep = rigidity_report(&LinearDeformation::regular(0.0, 1.0, 1e-3), &QuadratureSpec::uniform(16))?;
    let worst = rep.checks.iter().filter(|c| !c.pass).count();
    s.push("linearized-rigidity", worst as f64, 0.0, Bound::Exact);
    let sphere = selfdual_shoot(&ShootingProblem::sphere(1.0f64))?;
    s.below("shooting-sphere", sphere.match_deficit, 1e-6);
    let bent = selfdual_shoot(&ShootingProblem::sphere(1.0f64).with_slope_ratio(1.05))?;
    s.push("shooting-perturbed", bent.match_deficit.min(f64::MAX), 1e-2, Bound::Above);
    Ok(())
}

/// Runs the suite. `tol` replaces every upper-bound tolerance.
pub fn run_suite(tol: Option<f64>, seed: u64, tables: &ThooftTables) -> CliResult<CheckSummary> {
    let mut s = Suite { tol, checks: Vec::new() };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    algebra(&mut s, tables);
    torsion(&mut s, &mut rng)?;
    page(&mut s, &mut rng)?;
    curvature(&mut s, &mut rng)?;
    ellipsoid(&mut s, &mut rng)?;
    hitchin_thorpe_chain(&mut s, &mut rng)?;
    rigidity(&mut s)?;
    let first_failure = s.checks.iter().find(|c| !c.pass).map(|c| c.name);
    Ok(CheckSummary {
        schema: crate::commands::SCHEMA,
        command: "check",
        passed: first_failure.is_none(),
        first_failure,
        checks: s.checks,
    })
}
