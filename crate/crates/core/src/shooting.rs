//! Shooting for the nonlinear self-duality equations of the biaxial family,
//! `f'' = f'g'/g − g²/f³`, `g'' = g(f'² − 4)/f² + 3g³/f⁴`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{GeomError, Result};
use crate::scalar::{lit, Real};

/// Initial data `f = f₁r + f₃r³`, `g = g₁r + g₃r³` at `r = r0`, integrated
/// up to `r_end − r0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShootingProblem<T> {
    pub f1: T,
    pub g1: T,
    pub f3: T,
    pub g3: T,
    pub r0: T,
    pub r_end: T,
    pub rtol: T,
    pub atol: T,
    pub max_steps: usize,
}

impl<T: Real> ShootingProblem<T> {
    /// Start data of `f = g = k sin(r/k)` on `[0, kπ]`.
    pub fn sphere(k: T) -> Self {
        let f3 = -(lit::<T>(6.0) * k * k).recip();
        Self {
            f1: T::one(),
            g1: T::one(),
            f3,
            g3: f3,
            r0: lit(1e-4),
            r_end: k * T::PI(),
            rtol: lit(1e-10),
            atol: lit(1e-24),
            max_steps: 200_000,
        }
    }

    /// Same start but with `g'(0) = ratio · f'(0)`.
    pub fn with_slope_ratio(self, ratio: T) -> Self {
        Self { g1: self.f1 * ratio, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.f1 > T::zero()
            && self.g1 > T::zero()
            && self.r0 > T::zero()
            && self.r_end > self.r0 + self.r0
            && self.rtol > T::zero()
            && self.atol > T::zero()
            && self.f3.is_finite()
            && self.g3.is_finite()
            && self.max_steps > 0;
        if ok {
            Ok(())
        } else {
            Err(GeomError::ParameterDomain(format!("invalid shooting problem {self:?}")))
        }
    }

    /// Series start in the reduced variables of [`reduced_rhs`].
    fn initial_state(&self) -> [T; 4] {
        let r = self.r0;
        let r2 = r * r;
        let three = lit::<T>(3.0);
        let f = self.f1 * r + self.f3 * r2 * r;
        let fp = self.f1 + three * self.f3 * r2;
        let gp = self.g1 + three * self.g3 * r2;
        let w = ((self.g1 - self.f1) + (self.g3 - self.f3) * r2) / (self.f1 + self.f3 * r2);
        let u = (T::one() - self.f1) - three * self.f3 * r2;
        [f, w, u, (gp - (T::one() + w) * fp) / f]
    }
}

/// Right-hand side in the state `[f, g, f', g']`.
pub fn selfdual_rhs<T: Real>(y: &[T; 4]) -> [T; 4] {
    let [f, g, fp, gp] = *y;
    let f2 = f * f;
    let fpp = fp * gp / g - g * g / (f2 * f);
    let gpp = g * (fp * fp - lit(4.0)) / f2 + lit::<T>(3.0) * g * g * g / (f2 * f2);
    [fp, gp, fpp, gpp]
}

/// The same system in `[f, w, u, w']` with `w = g/f − 1` and `u = 1 − f'`:
/// `u' = −f''`, `f'' = f'w'/(1+w) − (u + w)(2 − u + w)/f`,
/// `w'' = 4w(1+w)(2+w)/f² − 3w'f'/f`.
///
/// Near the first pole `u ≈ r²/2` carries the sphere radius and keeps full
/// relative precision, and the set `w = w' = 0` (that is `g = f`) is
/// invariant in floating point as well as in exact arithmetic.
pub fn reduced_rhs<T: Real>(z: &[T; 4]) -> [T; 4] {
    let [f, w, u, wp] = *z;
    let one = T::one();
    let two = lit::<T>(2.0);
    let fp = one - u;
    let fpp = fp * wp / (one + w) - (u + w) * (two - u + w) / f;
    let wpp = lit::<T>(4.0) * w * (one + w) * (two + w) / (f * f) - lit::<T>(3.0) * wp * fp / f;
    [fp, wp, -fpp, wpp]
}

fn from_reduced<T: Real>(z: &[T; 4]) -> [T; 4] {
    let [f, w, u, wp] = *z;
    let fp = T::one() - u;
    [f, f + w * f, fp, wp * f + (T::one() + w) * fp]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ShootStatus<T> {
    /// Reached the far end.
    Completed,
    /// `f` or `g` reached zero or the solution stopped being finite.
    Singular { r: T },
    /// The step size collapsed or the step budget ran out.
    Stalled { r: T },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectoryPoint<T> {
    pub r: T,
    pub f: T,
    pub g: T,
    pub fp: T,
    pub gp: T,
    /// [`closure_deficit`] at this radius.
    pub deficit: T,
}

#[derive(Debug, Clone, Serialize)]
pub struct ShootResult<T> {
    pub problem: ShootingProblem<T>,
    pub status: ShootStatus<T>,
    pub trajectory: Vec<TrajectoryPoint<T>>,
    /// Closure deficit at the last accepted point.
    pub match_deficit: T,
}

impl<T: Real> ShootResult<T> {
    pub fn closes(&self, tol: T) -> bool {
        matches!(self.status, ShootStatus::Completed) && self.match_deficit < tol
    }

    /// Comma-separated dump with a header row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("r,f,g,fp,gp,deficit\n");
        for p in &self.trajectory {
            let row = [p.r, p.f, p.g, p.fp, p.gp, p.deficit].map(|v| format!("{:e}", v.to_f64_lossy()));
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Distance from smooth closure at a far pole, where `f' = g' = −1` and
/// `g/f = 1`: the Euclidean norm of `(f' + 1, g' + 1, (g − f)/f)`.
pub fn closure_deficit<T: Real>(y: &[T; 4]) -> T {
    let [f, g, fp, gp] = *y;
    let a = fp + T::one();
    let b = gp + T::one();
    let c = (g - f) / f;
    (a * a + b * b + c * c).sqrt()
}

// Dormand-Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] =
    [5179.0 / 57600.0, 0.0, 7571.0 / 16695.0, 393.0 / 640.0, -92097.0 / 339200.0, 187.0 / 2100.0, 1.0 / 40.0];

/// One Dormand-Prince step: the fifth-order solution and the error estimate.
fn dp_step<T: Real, const N: usize>(rhs: &impl Fn(T, &[T; N]) -> [T; N], t: T, y: &[T; N], h: T) -> ([T; N], [T; N]) {
    let mut k = [[T::zero(); N]; 7];
    for s in 0..7 {
        let mut ys = *y;
        for (j, kj) in k.iter().enumerate().take(s) {
            let a = lit::<T>(A[s][j]);
            if a != T::zero() {
                for n in 0..N {
                    ys[n] = ys[n] + h * a * kj[n];
                }
            }
        }
        k[s] = rhs(t + h * lit(C[s]), &ys);
    }
    let mut y5 = *y;
    let mut err = [T::zero(); N];
    for s in 0..7 {
        let (b5, db) = (lit::<T>(B5[s]), lit::<T>(B5[s] - B4[s]));
        for n in 0..N {
            y5[n] = y5[n] + h * b5 * k[s][n];
            err[n] = err[n] + h * db * k[s][n];
        }
    }
    (y5, err)
}

/// Integrates the self-duality system from the series start.
pub fn selfdual_shoot<T: Real>(sp: &ShootingProblem<T>) -> Result<ShootResult<T>> {
    sp.validate()?;
    let rhs = |_: T, y: &[T; 4]| reduced_rhs(y);
    let t_end = sp.r_end - sp.r0;
    let mut t = sp.r0;
    let mut y = sp.initial_state();
    let point = |t: T, y: &[T; 4]| {
        let x = from_reduced(y);
        TrajectoryPoint { r: t, f: x[0], g: x[1], fp: x[2], gp: x[3], deficit: closure_deficit(&x) }
    };
    let mut trajectory = vec![point(t, &y)];
    let mut h = sp.r0;
    let h_min = (t_end - sp.r0) * T::epsilon() * lit(16.0);
    let safety = lit::<T>(0.9);
    let fifth = lit::<T>(0.2);
    let mut status = ShootStatus::Stalled { r: t };
    for _ in 0..sp.max_steps {
        if t >= t_end {
            status = ShootStatus::Completed;
            break;
        }
        h = h.min(t_end - t);
        let (y5, err) = dp_step(&rhs, t, &y, h);
        let finite = y5.iter().chain(err.iter()).all(|v| v.is_finite());
        let ratio = if finite {
            let mut m = T::zero();
            for n in 0..4 {
                let scale = sp.atol + sp.rtol * y[n].abs().max(y5[n].abs());
                m = m.max((err[n] / scale).abs());
            }
            m
        } else {
            T::infinity()
        };
        if ratio <= T::one() {
            t = t + h;
            y = y5;
            if !(y[0] > T::zero() && y[1] > -T::one()) {
                status = ShootStatus::Singular { r: t };
                trajectory.push(point(t, &y));
                break;
            }
            trajectory.push(point(t, &y));
            let grow = if ratio == T::zero() { lit(5.0) } else { (safety * ratio.powf(-fifth)).min(lit(5.0)) };
            h = h * grow;
        } else {
            let shrink = if ratio.is_finite() { (safety * ratio.powf(-fifth)).max(lit(0.1)) } else { lit(0.1) };
            h = h * shrink;
            if h < h_min {
                status = ShootStatus::Singular { r: t };
                break;
            }
        }
    }
    if t >= t_end {
        status = ShootStatus::Completed;
    }
    let last = trajectory.last().copied().expect("trajectory starts with the initial point");
    let deficit = if last.deficit.is_finite() { last.deficit } else { T::max_value() };
    Ok(ShootResult { problem: *sp, status, trajectory, match_deficit: deficit })
}

/// Runs independent problems in parallel; results keep the input order.
pub fn shoot_many<T: Real>(problems: &[ShootingProblem<T>]) -> Vec<Result<ShootResult<T>>> {
    problems.par_iter().map(selfdual_shoot).collect()
}
