use super::{require_positive, Chart, FrameField};
use crate::error::Result;
use crate::linalg::Mat4;
use crate::scalar::{lit, Real, Scalar};

/// Three-axis squashed four-sphere
/// `x₀²/r² + (x₁² + x₂²)/l² + (x₃² + x₄²)/l̃² = 1`, with coframe
/// `{sinρ σ̃¹, sinρ σ̃², sinρ σ̃³ + h dρ, g dρ}` and
/// `σ̃ = (l cosθ dφ, l̃ sinθ dχ, f dθ)`, in coordinates `(φ, χ, θ, ρ)`.
#[derive(Debug, Clone)]
pub struct EllipsoidS4<T> {
    pub r: T,
    pub l: T,
    pub lt: T,
    chart: Chart<T>,
}

/// First-order deformation coefficients `f^{ij}_{(+−)}` in closed form.
/// The `(−+)` block has `f¹²` with opposite sign; `f¹³ = f²³ = 0`.
#[derive(Debug, Clone, Copy)]
pub struct EllipsoidCoeffs<T> {
    pub f11: T,
    pub f12: T,
    pub f22: T,
    pub f33: T,
}

impl<T: Real> EllipsoidS4<T> {
    pub fn new(r: T, l: T, lt: T) -> Result<Self> {
        require_positive("r", r)?;
        require_positive("l", l)?;
        require_positive("lt", lt)?;
        let pi = T::PI();
        let chart = Chart {
            coord_names: ["phi", "chi", "theta", "rho"],
            lower: [T::zero(); 4],
            upper: [pi + pi, pi + pi, pi * lit(0.5), pi],
            periodic: [true, true, false, false],
            cyclic: [true, true, false, false],
            singular_loci: "theta = 0, pi/2; rho = 0, pi",
        };
        Ok(Self { r, l, lt, chart })
    }

    /// `f = √(l² sin²θ + l̃² cos²θ)`.
    pub fn f<S: Scalar<T>>(&self, theta: S) -> S {
        (theta.sin().sq().scale(self.l * self.l) + theta.cos().sq().scale(self.lt * self.lt)).sqrt()
    }

    /// `g = √(r² sin²ρ + l² l̃² cos²ρ / f²)`.
    pub fn g<S: Scalar<T>>(&self, rho: S, theta: S) -> S {
        let f = self.f(theta);
        let ll = self.l * self.l * self.lt * self.lt;
        (rho.sin().sq().scale(self.r * self.r) + (rho.cos().sq() / (f * f)).scale(ll)).sqrt()
    }

    /// `h = (l̃² − l²) cosρ sinθ cosθ / f`.
    pub fn h<S: Scalar<T>>(&self, rho: S, theta: S) -> S {
        let f = self.f(theta);
        (rho.cos() * theta.sin() * theta.cos() / f).scale(self.lt * self.lt - self.l * self.l)
    }

    /// `ψ = cosρ / (g f²)`.
    pub fn psi(&self, rho: T, theta: T) -> T {
        let f = self.f(theta);
        rho.cos() / (self.g(rho, theta) * f * f)
    }

    /// Instanton density `ρ^(±) = (3/4) l² l̃² r⁴ / (f⁶ g⁶)`.
    pub fn density_closed_form(&self, rho: T, theta: T) -> T {
        let f = self.f(theta);
        let g = self.g(rho, theta);
        lit::<T>(0.75) * (self.l * self.lt).powi(2) * self.r.powi(4) / (f * g).powi(6)
    }

    /// Closed-form `f_{(+−)}` entries.
    pub fn coeffs_closed_form(&self, rho: T, theta: T) -> EllipsoidCoeffs<T> {
        let (l2, lt2, r2) = (self.l * self.l, self.lt * self.lt, self.r * self.r);
        let f = self.f(theta);
        let g = self.g(rho, theta);
        let h = self.h(rho, theta);
        let psi = self.psi(rho, theta);
        let (sr, cr) = rho.sin_cos();
        let s2t = (theta + theta).sin();
        let four = lit::<T>(4.0);
        let k = lit::<T>(2.0) * g * g * f * f - l2 * lt2 * cr * cr;
        let b = r2 / g.powi(3) * sr * sr + h * h / (g.powi(3) * f.powi(4)) * k - (lt2 - l2) * h / (f + f) * psi * s2t;
        let f11 = -lt2 / (four * g * f * f * sr * sr) * b + l2 * r2 / (four * f.powi(4) * g * g);
        let f22 = -l2 / (four * g * f * f * sr * sr) * b + lt2 * r2 / (four * f.powi(4) * g * g);
        let f12 = (l2 + lt2) / (lit::<T>(8.0) * f.powi(3) * sr * sr)
            * (h / (g.powi(3) * f.powi(3)) * k - (lt2 - l2) * lit(0.5) * psi * s2t
                + r2 * h / (f * g.powi(3)) * sr * sr);
        let f33 = r2 / (four * f * f * g * g) * (T::one() - l2 * lt2 / (f * f * g * g));
        EllipsoidCoeffs { f11, f12, f22, f33 }
    }

    /// Closed-form gauge fields `A^(±)i_c`, returned as `(plus, minus)`.
    pub fn gauge_closed_form(&self, rho: T, theta: T) -> ([[T; 4]; 3], [[T; 4]; 3]) {
        let (l2, lt2) = (self.l * self.l, self.lt * self.lt);
        let f = self.f(theta);
        let g = self.g(rho, theta);
        let h = self.h(rho, theta);
        let (sr, cr) = rho.sin_cos();
        let cot_r = cr / sr;
        let half = lit::<T>(0.5);
        let build = |s: T| {
            let mut a = [[T::zero(); 4]; 3];
            a[0][0] = s * lt2 / (lit::<T>(2.0) * g * f * f) * cot_r;
            a[0][1] = half / (f * sr) * theta.cos() / theta.sin();
            a[1][1] = s * l2 / (lit::<T>(2.0) * g * f * f) * cot_r;
            a[1][0] = half / (f * sr) * theta.tan();
            let c3 = s * l2 * lt2 / (lit::<T>(2.0) * g * f.powi(4)) * cot_r;
            a[2][2] = c3;
            a[2][3] = -c3 * h / g;
            a
        };
        (build(T::one()), build(-T::one()))
    }

    /// Closed-form `F^(±)3`: coefficients of `(e¹∧e², e³∧e⁴)`.
    pub fn f3_closed_form(&self, rho: T, theta: T, sign: T) -> (T, T) {
        let f = self.f(theta);
        let g = self.g(rho, theta);
        let pre = self.r * self.r / (lit::<T>(2.0) * f * f * g * g);
        (pre, pre * sign * (self.l * self.lt).powi(2) / (f * f * g * g))
    }
}

impl<T: Real> FrameField<T> for EllipsoidS4<T> {
    fn id(&self) -> &'static str {
        "ellipsoid-s4"
    }

    fn chart(&self) -> &Chart<T> {
        &self.chart
    }

    fn params(&self) -> Vec<(&'static str, T)> {
        vec![("r", self.r), ("l", self.l), ("lt", self.lt)]
    }

    fn coframe<S: Scalar<T>>(&self, x: &[S; 4]) -> Mat4<S> {
        let [_, _, theta, rho] = *x;
        let sr = rho.sin();
        let z = S::zero();
        [
            [(sr * theta.cos()).scale(self.l), z, z, z],
            [z, (sr * theta.sin()).scale(self.lt), z, z],
            [z, z, sr * self.f(theta), self.h(rho, theta)],
            [z, z, z, self.g(rho, theta)],
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn auxiliary_functions_at_sample_points() {
        let e = EllipsoidS4::new(1.0, 1.0, 2.0).unwrap();
        assert_relative_eq!(e.f(PI / 4.0), (2.5f64).sqrt(), epsilon = 1e-14);
        assert!(e.h(PI / 2.0, PI / 4.0).abs() < 1e-15);
        let e = EllipsoidS4::new(1.0, 2.0, 3.0).unwrap();
        assert_relative_eq!(e.f(0.0), 3.0, epsilon = 1e-15);
        assert_relative_eq!(e.g(0.0, 0.0), 2.0, epsilon = 1e-15);
    }

    #[test]
    fn parameters_must_be_positive() {
        assert!(EllipsoidS4::new(1.0, 0.0, 1.0).is_err());
        assert!(EllipsoidS4::new(1.0, 1.0, -2.0).is_err());
    }
}
