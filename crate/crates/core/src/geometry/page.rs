use super::{Chart, FrameField};
use crate::error::{GeomError, Result};
use crate::linalg::Mat4;
use crate::scalar::{lit, Real, Scalar};

/// `ν⁴ + 4ν³ − 6ν² + 12ν − 3`.
pub fn page_quartic<T: Real>(nu: T) -> T {
    (((nu + lit(4.0)) * nu - lit(6.0)) * nu + lit(12.0)) * nu - lit(3.0)
}

fn page_quartic_deriv<T: Real>(nu: T) -> T {
    ((lit::<T>(4.0) * nu + lit(12.0)) * nu - lit(12.0)) * nu + lit(12.0)
}

/// The root of [`page_quartic`] in `(0, 1)`, by bisection on the sign change
/// followed by Newton polishing.
pub fn page_nu<T: Real>() -> T {
    let (mut lo, mut hi) = (T::zero(), T::one());
    for _ in 0..200 {
        let mid = (lo + hi) * lit(0.5);
        if mid <= lo || mid >= hi {
            break;
        }
        if page_quartic(mid) < T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut nu = (lo + hi) * lit(0.5);
    for _ in 0..3 {
        let step = page_quartic(nu) / page_quartic_deriv(nu);
        let next = nu - step;
        if next > lo - T::epsilon() && next < hi + T::epsilon() {
            nu = next;
        }
    }
    nu
}

/// Parameters of the Page metric.
#[derive(Debug, Clone, Copy)]
pub struct PageParams<T> {
    pub nu: T,
    pub lambda: T,
}

impl<T: Real> PageParams<T> {
    /// Einstein constant at which the overall metric factor is one.
    pub fn natural_lambda(nu: T) -> T {
        lit::<T>(3.0) * (T::one() + nu * nu) / (lit::<T>(3.0) + nu * nu)
    }

    pub fn new(nu: T, lambda: T) -> Result<Self> {
        if !(nu > T::zero() && nu < T::one()) {
            return Err(GeomError::ParameterDomain(format!("nu must lie in (0, 1), got {nu}")));
        }
        let tol = lit::<T>(1e-14).max(T::epsilon() * lit(64.0));
        let q = page_quartic(nu);
        if q.abs() > tol {
            return Err(GeomError::ParameterDomain(format!("nu = {nu} is not a root of the quartic (residual {q})")));
        }
        if !(lambda > T::zero() && lambda.is_finite()) {
            return Err(GeomError::ParameterDomain(format!("lambda must be positive, got {lambda}")));
        }
        Ok(Self { nu, lambda })
    }

    /// The computed root with the natural Einstein constant.
    pub fn standard() -> Self {
        let nu = page_nu();
        Self { nu, lambda: Self::natural_lambda(nu) }
    }

    /// Overall metric factor `K = (3/λ)(1+ν²)/(3+ν²)`.
    pub fn scale(&self) -> T {
        Self::natural_lambda(self.nu) / self.lambda
    }

    /// `U(χ) = 1 − 2ν² sin²χ / ((3+ν²)(1 − ν² cos²χ))`.
    pub fn u<S: Scalar<T>>(&self, chi: S) -> S {
        let n2 = self.nu * self.nu;
        let d = S::cst(T::one()) - chi.cos().sq().scale(n2);
        S::cst(T::one()) - (chi.sin().sq() / d).scale(lit::<T>(2.0) * n2 / (lit::<T>(3.0) + n2))
    }

    /// `U'(χ)`.
    pub fn u_prime(&self, chi: T) -> T {
        let n2 = self.nu * self.nu;
        let (s, c) = chi.sin_cos();
        let d = T::one() - n2 * c * c;
        -lit::<T>(4.0) * n2 * (T::one() - n2) * s * c / ((lit::<T>(3.0) + n2) * d * d)
    }
}

/// Page's Einstein metric on `CP² # CP̄²`, in coordinates `(θ, φ, ψ, χ)`.
#[derive(Debug, Clone)]
pub struct PageSpace<T> {
    pub params: PageParams<T>,
    chart: Chart<T>,
}

/// Default period of the fibre angle `ψ`.
pub const PAGE_PSI_PERIOD: f64 = 4.0 * std::f64::consts::PI;

/// Closed-form connection data at a point, in frame components of the
/// metric with unit overall factor. Divide by `√K` (connections) or `K`
/// (curvatures) for general `λ`.
#[derive(Debug, Clone, Copy)]
pub struct PageClosedForm<T> {
    pub f: T,
    pub g: T,
    /// `√(4ν / (1 − ν² cos²χ)) cot θ`.
    pub cot_term: T,
    /// Coefficient of `e³` in `ω₃₄`.
    pub w34: T,
}

impl<T: Real> PageSpace<T> {
    pub fn new(params: PageParams<T>) -> Self {
        Self::with_psi_period(params, lit(PAGE_PSI_PERIOD))
    }

    pub fn with_psi_period(params: PageParams<T>, psi_period: T) -> Self {
        let pi = T::PI();
        let chart = Chart {
            coord_names: ["theta", "phi", "psi", "chi"],
            lower: [T::zero(); 4],
            upper: [pi, pi + pi, psi_period, pi],
            periodic: [false, true, true, false],
            cyclic: [false, true, true, false],
            singular_loci: "theta = 0, pi; chi = 0, pi",
        };
        Self { params, chart }
    }

    pub fn closed_form(&self, chi: T, theta: T) -> PageClosedForm<T> {
        let nu = self.params.nu;
        let n2 = nu * nu;
        let (s, c) = chi.sin_cos();
        let d = T::one() - n2 * c * c;
        let u = self.params.u(chi);
        let su = u.sqrt();
        let f = su * nu * s / d;
        let g = f * nu * c;
        let cot_term = (lit::<T>(4.0) * nu / d).sqrt() * theta.cos() / theta.sin();
        let w34 = su * c / s + lit::<T>(2.0) * (n2 - T::one()) / (u * (lit::<T>(3.0) + n2) * d) * g;
        PageClosedForm { f, g, cot_term, w34 }
    }

    /// Closed-form spin connection `ω_{ab,c}` (zero-based frame indices).
    pub fn omega_closed_form(&self, chi: T, theta: T) -> [[[T; 4]; 4]; 4] {
        let PageClosedForm { f, g, cot_term, w34 } = self.closed_form(chi, theta);
        let k = self.params.scale().sqrt().recip();
        let mut w = [[[T::zero(); 4]; 4]; 4];
        let mut set = |a: usize, b: usize, c: usize, v: T| {
            w[a][b][c] = v * k;
            w[b][a][c] = -v * k;
        };
        set(0, 1, 1, -cot_term);
        set(0, 1, 2, f);
        set(0, 2, 1, f);
        set(1, 2, 0, -f);
        set(0, 3, 0, g);
        set(1, 3, 1, g);
        set(2, 3, 2, w34);
        w
    }

    /// Closed-form gauge fields `A^(±)i_c`, returned as `(plus, minus)`.
    pub fn gauge_closed_form(&self, chi: T, theta: T) -> ([[T; 4]; 3], [[T; 4]; 3]) {
        let PageClosedForm { f, g, cot_term, w34 } = self.closed_form(chi, theta);
        let k = self.params.scale().sqrt().recip();
        let half = lit::<T>(0.5) * k;
        let build = |s: T| {
            let mut a = [[T::zero(); 4]; 3];
            a[0][0] = half * (-f + s * g);
            a[1][1] = half * (-f + s * g);
            a[2][1] = -half * cot_term;
            a[2][2] = half * (f + s * w34);
            a
        };
        (build(T::one()), build(-T::one()))
    }

    /// `(ψ¹_(±), ψ³_(±))` for `sign = ±1`; `ψ² = ψ¹`.
    pub fn psi_closed_form(&self, chi: T, sign: T) -> (T, T) {
        let nu = self.params.nu;
        let n2 = nu * nu;
        let (s, c) = chi.sin_cos();
        let d = T::one() - n2 * c * c;
        let u = self.params.u(chi);
        let up = self.params.u_prime(chi);
        let one = T::one();
        let two = lit::<T>(2.0);
        let psi1 = u / two * (nu * (one - n2) * c - sign * n2 * (c * c - s * s) + sign * n2 * n2 * c.powi(4)) / (d * d)
            - nu * n2 * (one - n2) * c * s * s / ((lit::<T>(3.0) + n2) * d.powi(3)) * (one - sign * nu * c);
        let pre = nu / (two * d);
        let psi3 = -pre * (up * s + two * (one - n2) * u * c / d)
            + sign * pre * (lit::<T>(4.0) - nu * u * s * s * (lit::<T>(3.0) + n2 * c * c) / d);
        let k = self.params.scale().recip();
        (psi1 * k, psi3 * k)
    }
}

impl<T: Real> FrameField<T> for PageSpace<T> {
    fn id(&self) -> &'static str {
        "page"
    }

    fn chart(&self) -> &Chart<T> {
        &self.chart
    }

    fn params(&self) -> Vec<(&'static str, T)> {
        vec![("nu", self.params.nu), ("lambda", self.params.lambda), ("psi_period", self.chart.upper[2])]
    }

    fn coframe<S: Scalar<T>>(&self, x: &[S; 4]) -> Mat4<S> {
        let [theta, _, _, chi] = *x;
        let p = &self.params;
        let k = p.scale().sqrt();
        let nu = p.nu;
        let u = p.u(chi);
        let su = u.sqrt();
        let a = (S::cst(T::one()) - chi.cos().sq().scale(nu * nu)).scale((lit::<T>(4.0) * nu).recip()).sqrt().scale(k);
        let c3 = (su * chi.sin()).scale(lit::<T>(0.5) * k);
        let z = S::zero();
        [[a, z, z, z], [z, a * theta.sin(), z, z], [z, c3 * theta.cos(), c3, z], [z, z, z, su.recip().scale(k)]]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn quartic_root() {
        let nu: f64 = page_nu();
        assert!(page_quartic(nu).abs() < 1e-14);
        assert_eq!((nu * 1e4).round() / 1e4, 0.2817);
        assert_relative_eq!(PageParams::natural_lambda(nu), 1.0516, epsilon = 1e-4);
        let nu32: f32 = page_nu();
        assert!((nu32 as f64 - nu).abs() < 1e-6);
    }

    #[test]
    fn u_at_equator() {
        let p = PageParams::<f64>::standard();
        let n2 = p.nu * p.nu;
        assert_relative_eq!(p.u(std::f64::consts::FRAC_PI_2), 1.0 - 2.0 * n2 / (3.0 + n2), epsilon = 1e-15);
        assert_relative_eq!(p.u(std::f64::consts::FRAC_PI_2), 0.9484, epsilon = 1e-4);
    }

    #[test]
    fn u_prime_matches_jet() {
        let p = PageParams::<f64>::standard();
        for chi in [0.3, 1.1, 2.0] {
            let j = p.u(crate::jet::Jet2::variable(chi, 0));
            assert_relative_eq!(j.grad[0], p.u_prime(chi), epsilon = 1e-14);
        }
    }

    #[test]
    fn invalid_parameters() {
        assert!(PageParams::new(0.3f64, 1.0).is_err());
        assert!(PageParams::new(1.5f64, 1.0).is_err());
        let nu = page_nu::<f64>();
        assert!(PageParams::new(nu, -1.0).is_err());
        assert!(PageParams::new(nu, 2.0).is_ok());
    }
}
