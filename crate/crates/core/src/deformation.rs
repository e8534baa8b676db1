//! Infinitesimal deformations of the round four-sphere inside the biaxial
//! family and the checks showing they only rescale it.

use std::sync::Arc;

use serde::Serialize;

use crate::curvature::{analyze_point, weyl_blocks};
use crate::error::{GeomError, Result};
use crate::geometry::{BiaxialS4, Profile};
use crate::invariants::integrate_invariants;
use crate::jet::{univariate, Jet2};
use crate::linalg::max_abs;
use crate::quadrature::QuadratureSpec;
use crate::scalar::{lit, Real, Scalar};

/// `f = sin r + ε p`, `g = sin r + ε q` with regular amplitudes `c1, c2` and
/// singular amplitudes `a1, a2`. The singular part enters only through
/// `h = p − q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearDeformation<T> {
    pub c1: T,
    pub c2: T,
    pub a1: T,
    pub a2: T,
    pub epsilon: T,
}

impl<T: Real> LinearDeformation<T> {
    pub fn regular(c1: T, c2: T, epsilon: T) -> Self {
        Self { c1, c2, a1: T::zero(), a2: T::zero(), epsilon }
    }

    pub fn with_epsilon(&self, epsilon: T) -> Self {
        Self { epsilon, ..*self }
    }

    pub fn is_regular(&self) -> bool {
        self.a1 == T::zero() && self.a2 == T::zero()
    }

    /// `c1 cos r + c2 (sin r − r cos r)`.
    pub fn p<S: Scalar<T>>(&self, r: S) -> S {
        r.cos().scale(self.c1) + (r.sin() - r * r.cos()).scale(self.c2)
    }

    /// `(c2 r − c1) sin r`.
    pub fn p_prime(&self, r: T) -> T {
        (self.c2 * r - self.c1) * r.sin()
    }

    /// `(a1 cos r + a2 (4 sin²r + sin⁴r − 8)) / sin³r`.
    pub fn h<S: Scalar<T>>(&self, r: S) -> S {
        let s2 = r.sin().sq();
        let num = r.cos().scale(self.a1) + (s2.scale(lit(4.0)) + s2 * s2 - S::cst(lit(8.0))).scale(self.a2);
        num / (s2 * r.sin())
    }

    pub fn q<S: Scalar<T>>(&self, r: S) -> S {
        self.p(r) - self.h(r)
    }

    /// `max |p|` on `[0, π]`, by dense sampling.
    pub fn p_sup(&self) -> T {
        let n = 512;
        (0..=n)
            .map(|k| self.p(T::PI() * T::from_usize(k).unwrap() / T::from_usize(n).unwrap()).abs())
            .fold(T::zero(), T::max)
    }
}

fn require_open_interval<T: Real>(r: T) -> Result<()> {
    if !(r > T::zero() && r < T::PI()) || r.sin() == T::zero() {
        return Err(GeomError::Domain(format!("r = {r} must lie in (0, pi)")));
    }
    Ok(())
}

/// Residuals of the linearized Einstein equations
/// `p'' − q − (p'+q')cot r − 3(p−q)/sin²r` and
/// `q'' + q − 2p − 2p' cot r + 6(p−q)/sin²r`.
pub fn linearized_residual<T: Real>(
    p: impl Fn(Jet2<T>) -> Jet2<T>,
    q: impl Fn(Jet2<T>) -> Jet2<T>,
    r: T,
) -> Result<[T; 2]> {
    require_open_interval(r)?;
    let [p0, p1, p2] = univariate(p, r);
    let [q0, q1, q2] = univariate(q, r);
    let (s, c) = r.sin_cos();
    let cot = c / s;
    let h = (p0 - q0) / (s * s);
    Ok([
        p2 - q0 - (p1 + q1) * cot - lit::<T>(3.0) * h,
        q2 + q0 - lit::<T>(2.0) * p0 - lit::<T>(2.0) * p1 * cot + lit::<T>(6.0) * h,
    ])
}

/// Residual of `h'' + h' cot r + (2 − 9/sin²r) h = 0` for the closed-form `h`.
pub fn h_mode_residual<T: Real>(a1: T, a2: T, r: T) -> Result<T> {
    require_open_interval(r)?;
    let d = LinearDeformation { c1: T::zero(), c2: T::zero(), a1, a2, epsilon: T::zero() };
    let [h0, h1, h2] = univariate(|x| d.h(x), r);
    let (s, c) = r.sin_cos();
    Ok(h2 + h1 * c / s + (lit::<T>(2.0) - lit::<T>(9.0) / (s * s)) * h0)
}

/// `sin r + ε p(r)` as a profile with analytic derivatives.
#[derive(Debug, Clone, Copy)]
pub struct DeformedProfile<T> {
    pub d: LinearDeformation<T>,
}

impl<T: Real> Profile<T> for DeformedProfile<T> {
    fn jet(&self, r: T) -> [T; 3] {
        let LinearDeformation { c1, c2, epsilon, .. } = self.d;
        let (s, c) = r.sin_cos();
        let p = c1 * c + c2 * (s - r * c);
        let p1 = (c2 * r - c1) * s;
        let p2 = (c2 * r - c1) * c + c2 * s;
        [s + epsilon * p, c + epsilon * p1, -s + epsilon * p2]
    }
}

/// The biaxial frame with `f = g = sin r + ε p(r)`.
pub fn deformed_geometry<T: Real>(d: &LinearDeformation<T>) -> Result<BiaxialS4<T>> {
    if !d.is_regular() {
        return Err(GeomError::Contract(format!(
            "singular modes must vanish for a smooth deformation (a1 = {}, a2 = {})",
            d.a1, d.a2
        )));
    }
    if !d.epsilon.is_finite() || d.epsilon.abs() * d.p_sup() >= lit(0.1) {
        return Err(GeomError::ParameterDomain(format!(
            "|epsilon| max|p| = {} leaves the perturbative regime (< 0.1)",
            d.epsilon.abs() * d.p_sup()
        )));
    }
    let prof: Arc<dyn Profile<T>> = Arc::new(DeformedProfile { d: *d });
    let params = vec![("c1", d.c1), ("c2", d.c2), ("epsilon", d.epsilon)];
    Ok(BiaxialS4::new(prof.clone(), prof, T::PI())?.labelled("deformed-s4", params))
}

/// Outcome of one rigidity check.
#[derive(Debug, Clone, Serialize)]
pub struct Check<T> {
    pub name: &'static str,
    pub value: T,
    pub tolerance: T,
    pub pass: bool,
}

impl<T: Real> Check<T> {
    fn below(name: &'static str, value: T, tolerance: T) -> Self {
        Self { name, value, tolerance, pass: value.is_finite() && value < tolerance }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RigidityReport<T> {
    pub deformation: LinearDeformation<T>,
    pub checks: Vec<Check<T>>,
    pub chi: T,
    pub tau: T,
    /// `max |f₊₋|` at the sample points, all orders in `ε`.
    pub einstein_residual_raw: T,
    /// `max |f₊₊ − (½ − εc₂)·1|` at the sample points, all orders in `ε`.
    pub coefficient_deviation_raw: T,
    /// Largest first-order coefficient `|∂_ε f₊₊ⁱⁱ|`, by Richardson
    /// extrapolation from `ε`, `ε/2` and `ε/4`.
    pub coefficient_slope: T,
}

impl<T: Real> RigidityReport<T> {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Sample points with `θ` and `r` in the central part of their ranges.
pub fn sample_points<T: Real>(n_theta: usize, n_r: usize, lo: T, hi: T) -> Vec<[T; 4]> {
    let pi = T::PI();
    let frac = |k: usize, n: usize| lo + (hi - lo) * T::from_usize(k).unwrap() / T::from_usize(n.max(2) - 1).unwrap();
    let mut pts = Vec::with_capacity(n_theta * n_r);
    for i in 0..n_theta {
        for j in 0..n_r {
            pts.push([pi * frac(i, n_theta), lit(0.3), lit(1.1), pi * frac(j, n_r)]);
        }
    }
    pts
}

/// Per-point `(f₊₊, f₊₋)` of a deformation.
fn blocks<T: Real>(d: &LinearDeformation<T>, pts: &[[T; 4]]) -> Result<Vec<([[T; 3]; 3], [[T; 3]; 3])>> {
    let g = deformed_geometry(d)?;
    pts.iter().map(|x| analyze_point(&g, x).map(|p| (p.coeffs.fpp, p.coeffs.fpm))).collect()
}

/// First-order part `ε ∂_ε X` of `X(ε) − X(0)` by Richardson extrapolation
/// from `X(ε)`, `X(ε/2)` and `X(ε/4)`; the `ε²` and `ε³` terms cancel.
fn first_order<T: Real>(x: [T; 3], base: T) -> T {
    let d = x.map(|v| v - base);
    d[0] / lit(3.0) - lit::<T>(4.0) * d[1] + lit::<T>(32.0) / lit(3.0) * d[2]
}

/// Checks (i)–(v): first-order Einstein condition, `f₊₊ = (½ − εc₂)·1` at
/// first order, vanishing Weyl blocks, unchanged `χ` and `τ`, and the gauge
/// field pattern `A^(±)1_θ = ¼(−1 ± f')` with `f' = cos r + ε(c₂r − c₁)sin r`.
pub fn rigidity_report<T: Real>(d: &LinearDeformation<T>, q: &QuadratureSpec) -> Result<RigidityReport<T>> {
    let g = deformed_geometry(d)?;
    let pts = sample_points::<T>(9, 17, lit(0.2), lit(0.8));
    let eps = d.epsilon;
    let half = lit::<T>(0.5);
    let full = blocks(d, &pts)?;
    let halfstep = blocks(&d.with_epsilon(eps * half), &pts)?;
    let quarter = blocks(&d.with_epsilon(eps * lit(0.25)), &pts)?;

    let mut first_order_fpm = T::zero();
    let mut first_order_dev = T::zero();
    let mut slope = T::zero();
    let mut raw_res = T::zero();
    let mut raw_dev = T::zero();
    let target = half - eps * d.c2;
    for (((fpp, fpm), (hpp, hpm)), (qpp, qpm)) in full.iter().zip(&halfstep).zip(&quarter) {
        raw_res = raw_res.max(max_abs(fpm));
        for i in 0..3 {
            for j in 0..3 {
                first_order_fpm = first_order_fpm.max(first_order([fpm[i][j], hpm[i][j], qpm[i][j]], T::zero()).abs());
                let base = if i == j { half } else { T::zero() };
                let want = if i == j { target } else { T::zero() };
                let lin = base + first_order([fpp[i][j], hpp[i][j], qpp[i][j]], base);
                first_order_dev = first_order_dev.max((lin - want).abs());
                raw_dev = raw_dev.max((fpp[i][j] - want).abs());
                if i == j && eps != T::zero() {
                    slope = slope.max(((lin - base) / eps).abs());
                }
            }
        }
    }

    let mut weyl = T::zero();
    let mut gauge = T::zero();
    for x in &pts {
        let p = analyze_point(&g, x)?;
        let (wp, wm) = weyl_blocks(&p.coeffs);
        weyl = weyl.max(max_abs(&wp)).max(max_abs(&wm));
        let r = x[3];
        let fprime = r.cos() + eps * d.p_prime(r);
        let f = g.profiles(r).0[0];
        let quarter = lit::<T>(0.25);
        for (fields, sign) in [(&p.gauge.aplus, T::one()), (&p.gauge.aminus, -T::one())] {
            let got = fields[0][0] * f * half;
            gauge = gauge.max((got - quarter * (-T::one() + sign * fprime)).abs());
        }
    }

    let rep = integrate_invariants(&g, q)?;
    let two = lit::<T>(2.0);
    let checks = vec![
        Check::below("einstein-first-order", first_order_fpm, lit(1e-7)),
        Check::below("coefficient-first-order", first_order_dev, lit(1e-6)),
        Check::below("weyl-vanishes", weyl, lit(1e-7)),
        Check::below("chi-unchanged", (rep.chi - two).abs(), lit(1e-5)),
        Check::below("tau-unchanged", rep.tau.abs(), lit(1e-5)),
        Check::below("gauge-pattern", gauge, lit(1e-9)),
    ];
    Ok(RigidityReport {
        deformation: *d,
        checks,
        chi: rep.chi,
        tau: rep.tau,
        einstein_residual_raw: raw_res,
        coefficient_deviation_raw: raw_dev,
        coefficient_slope: slope,
    })
}

/// `max |f₊₋|` of the deformed geometry over the central sample grid.
pub fn sampled_einstein_residual<T: Real>(d: &LinearDeformation<T>, lo: T, hi: T) -> Result<T> {
    let pts = sample_points::<T>(9, 17, lo, hi);
    Ok(blocks(d, &pts)?.iter().map(|(_, fpm)| max_abs(fpm)).fold(T::zero(), T::max))
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope<T: Real>(xs: &[T], ys: &[T]) -> T {
    let lx: Vec<T> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<T> = ys.iter().map(|y| y.ln()).collect();
    let n = T::from_usize(lx.len()).unwrap();
    let mx = lx.iter().copied().sum::<T>() / n;
    let my = ly.iter().copied().sum::<T>() / n;
    let sxy: T = lx.iter().zip(&ly).map(|(x, y)| (*x - mx) * (*y - my)).sum();
    let sxx: T = lx.iter().map(|x| (*x - mx) * (*x - mx)).sum();
    sxy / sxx
}
