//! Topological invariants by quadrature, the Hitchin-Thorpe inequality and
//! its strong and refined forms.

use serde::Serialize;

use crate::curvature::{analyze_point, einstein_residual, symmetrize, weyl_blocks, CurvatureCoeffs};
use crate::error::{GeomError, Result};
use crate::geometry::FrameField;
use crate::linalg::{frob_sq, sym_eigen};
use crate::quadrature::{integrate, QuadratureSpec, TensorGrid};
use crate::scalar::{lit, Real};

/// `(2/3)^{3/2}`.
pub fn strong_ht_bound<T: Real>() -> T {
    lit::<T>(2.0 / 3.0).powf(lit(1.5))
}

/// Integrated curvature quantities of one quadrature run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Integrals<T> {
    pub chi: T,
    pub tau: T,
    pub volume: T,
    /// `∫ |f₊₊|² dμ`, `∫ |f₋₋|² dμ`.
    pub fpp_sq: T,
    pub fmm_sq: T,
    /// `∫ |f̃₊₊|² dμ`, `∫ |f̃₋₋|² dμ`.
    pub weyl_pp_sq: T,
    pub weyl_mm_sq: T,
    /// `∫ R dμ`, `∫ R² dμ`.
    pub scalar: T,
    pub scalar_sq: T,
    /// Largest pointwise `max |f₊₋|` over the nodes.
    pub max_einstein_residual: T,
    /// `(∫ |f₊₋|² dμ / ∫ (|f₊₊|² + |f₋₋|²) dμ)^{1/2}`. Unlike the pointwise
    /// maximum it is insensitive to round-off at nodes close to a pole.
    pub einstein_l2: T,
}

const N_INT: usize = 10;

fn node_values<T: Real, F: FrameField<T> + ?Sized>(frame: &F, x: &[T; 4]) -> Result<([T; N_INT], T)> {
    let p = analyze_point(frame, x)?;
    let (rp, rm) = p.densities();
    let c = &p.coeffs;
    let (wp, wm) = weyl_blocks(c);
    let r = c.scalar();
    let d = p.det;
    Ok((
        [
            d * (rp + rm),
            d * (rp - rm),
            d,
            d * frob_sq(&c.fpp),
            d * frob_sq(&c.fmm),
            d * frob_sq(&wp),
            d * frob_sq(&wm),
            d * r,
            d * r * r,
            d * frob_sq(&c.fpm),
        ],
        einstein_residual(c),
    ))
}

/// Integrates `χ = (1/2π²)∫(ρ⁺ + ρ⁻)dμ`, `τ = (1/3π²)∫(ρ⁺ − ρ⁻)dμ` and the
/// auxiliary square integrals on a tensor grid.
pub fn integrate_once<T: Real, F: FrameField<T> + ?Sized>(frame: &F, q: &QuadratureSpec) -> Result<Integrals<T>> {
    let grid = TensorGrid::new(frame.chart(), q)?;
    let (s, peak) = integrate(&grid, |x| node_values(frame, x))?;
    let pi2 = T::PI() * T::PI();
    let total = s[3] + s[4];
    let einstein_l2 = if total > T::zero() { (s[9] / total).sqrt() } else { s[9].sqrt() };
    Ok(Integrals {
        chi: s[0] / (lit::<T>(2.0) * pi2),
        tau: s[1] / (lit::<T>(3.0) * pi2),
        volume: s[2],
        fpp_sq: s[3],
        fmm_sq: s[4],
        weyl_pp_sq: s[5],
        weyl_mm_sq: s[6],
        scalar: s[7],
        scalar_sq: s[8],
        max_einstein_residual: peak,
        einstein_l2,
    })
}

/// Invariants of a geometry with error estimates and inequality margins.
#[derive(Debug, Clone, Serialize)]
pub struct TopoReport<T> {
    pub geometry: String,
    pub params: Vec<(String, T)>,
    pub quadrature: QuadratureSpec,
    pub chi: T,
    pub tau: T,
    pub volume: T,
    /// Value at doubled resolution minus value.
    pub chi_refine_delta: T,
    pub tau_refine_delta: T,
    /// `χ ± (3/2)τ`.
    pub ht_margin_plus: T,
    pub ht_margin_minus: T,
    /// `χ − λ² vol / 12π²` with `λ = ∫R dμ / (4 vol)`.
    pub refined_lhs: T,
    pub chi_nearest: i64,
    pub tau_nearest: i64,
    pub chi_residual: T,
    pub tau_residual: T,
    pub integrals: Integrals<T>,
}

impl<T: Real> TopoReport<T> {
    /// Mean of `R/4` over the manifold.
    pub fn lambda_mean(&self) -> T {
        self.integrals.scalar / (lit::<T>(4.0) * self.volume)
    }
}

fn nearest<T: Real>(v: T) -> (i64, T) {
    let n = v.round();
    (n.to_i64().unwrap_or(0), v - n)
}

pub fn integrate_invariants<T: Real, F: FrameField<T> + ?Sized>(
    frame: &F,
    q: &QuadratureSpec,
) -> Result<TopoReport<T>> {
    let base = integrate_once(frame, q)?;
    let fine = integrate_once(frame, &q.refined(frame.chart()))?;
    let (chi_nearest, chi_residual) = nearest(base.chi);
    let (tau_nearest, tau_residual) = nearest(base.tau);
    let three_halves = lit::<T>(1.5);
    let lambda = base.scalar / (lit::<T>(4.0) * base.volume);
    let pi2 = T::PI() * T::PI();
    Ok(TopoReport {
        geometry: frame.id().to_string(),
        params: frame.params().into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
        quadrature: *q,
        chi: base.chi,
        tau: base.tau,
        volume: base.volume,
        chi_refine_delta: fine.chi - base.chi,
        tau_refine_delta: fine.tau - base.tau,
        ht_margin_plus: base.chi + three_halves * base.tau,
        ht_margin_minus: base.chi - three_halves * base.tau,
        refined_lhs: base.chi - lambda * lambda * base.volume / (lit::<T>(12.0) * pi2),
        chi_nearest,
        tau_nearest,
        chi_residual,
        tau_residual,
        integrals: base,
    })
}

/// Both sides of `χ ± (3/2)τ = (1/π²)∫ |f_{(±±)}|² dμ`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct HtMargins<T> {
    pub plus: T,
    pub minus: T,
    pub plus_identity: T,
    pub minus_identity: T,
    /// `∫ |f_{(±±)}|² < tol`: the geometry is half-flat.
    pub half_flat_plus: bool,
    pub half_flat_minus: bool,
}

impl<T: Real> HtMargins<T> {
    pub fn holds(&self, tol: T) -> bool {
        self.plus >= -tol && self.minus >= -tol
    }
}

/// The identity is derived for Einstein metrics; other inputs are rejected.
pub fn hitchin_thorpe<T: Real>(report: &TopoReport<T>, einstein_tol: T) -> Result<HtMargins<T>> {
    if !(report.integrals.einstein_l2 <= einstein_tol) {
        return Err(GeomError::Contract(format!(
            "Hitchin-Thorpe identity needs an Einstein metric; relative L2 norm of f(+-) = {}",
            report.integrals.einstein_l2
        )));
    }
    let pi2 = T::PI() * T::PI();
    let tol = einstein_tol.max(T::epsilon().sqrt());
    Ok(HtMargins {
        plus: report.ht_margin_plus,
        minus: report.ht_margin_minus,
        plus_identity: report.integrals.fpp_sq / pi2,
        minus_identity: report.integrals.fmm_sq / pi2,
        half_flat_plus: report.integrals.fpp_sq < tol,
        half_flat_minus: report.integrals.fmm_sq < tol,
    })
}

/// `χ ± (3/2)τ − [(1/π²)∫ |f̃_{(±±)}|² dμ + ∫R² dμ / 192π²]`.
pub fn refined_identity_residual<T: Real>(report: &TopoReport<T>) -> (T, T) {
    let pi2 = T::PI() * T::PI();
    let r2 = report.integrals.scalar_sq / (lit::<T>(192.0) * pi2);
    (
        report.ht_margin_plus - (report.integrals.weyl_pp_sq / pi2 + r2),
        report.ht_margin_minus - (report.integrals.weyl_mm_sq / pi2 + r2),
    )
}

/// `χ − λ² vol/12π² ≥ (3/2)|τ|` and the Page volume bound.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RefinedHt<T> {
    pub lhs: T,
    pub rhs: T,
    pub holds: bool,
    /// Conformally half-flat: one Weyl block integrates to zero.
    pub equality: bool,
    /// `λ² vol / 12π²`.
    pub volume_term: T,
    /// `48π²/λ²`.
    pub volume_bound: T,
    pub volume_ok: bool,
}

pub fn refined_ht<T: Real>(report: &TopoReport<T>, lambda: T, tol: T) -> Result<RefinedHt<T>> {
    if !(lambda > T::zero()) {
        return Err(GeomError::Contract(format!("refined inequality needs lambda > 0, got {lambda}")));
    }
    let pi2 = T::PI() * T::PI();
    let volume_term = lambda * lambda * report.volume / (lit::<T>(12.0) * pi2);
    let lhs = report.chi - volume_term;
    let rhs = lit::<T>(1.5) * report.tau.abs();
    let volume_bound = lit::<T>(48.0) * pi2 / (lambda * lambda);
    Ok(RefinedHt {
        lhs,
        rhs,
        holds: lhs >= rhs - tol,
        equality: report.integrals.weyl_pp_sq.min(report.integrals.weyl_mm_sq) < tol,
        volume_term,
        volume_bound,
        volume_ok: report.volume <= volume_bound * (T::one() + tol),
    })
}

/// Eigen-data of the Einstein curvature operator at a point.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SpectralData<T> {
    /// Eigenvalues of `f₊₊` and `f₋₋`, descending.
    pub aplus_eigs: [T; 3],
    pub aminus_eigs: [T; 3],
    /// `λ_i = a₊ + a₋`, `μ_i = a₊ − a₋`, sorted by descending `λ`.
    pub lambda_vec: [T; 3],
    pub mu_vec: [T; 3],
    /// All `λ_i ≥ 0`.
    pub sectional_nonneg: bool,
    /// Eigenvalues of the 6×6 operator `R(eᵃ∧eᵇ) = ½ R_{abcd} eᶜ∧eᵈ`, descending.
    pub operator_eigs: [T; 6],
}

/// The canonical 2-form basis `{e¹², e³¹, e²³, e³⁴, e²⁴, e¹⁴}` (zero-based pairs).
const BASIS6: [(usize, usize); 6] = [(0, 1), (2, 0), (1, 2), (2, 3), (1, 3), (0, 3)];

pub fn spectral_point<T: Real>(c: &CurvatureCoeffs<T>, tol: T) -> Result<SpectralData<T>> {
    let res = einstein_residual(c);
    if res > tol {
        return Err(GeomError::Contract(format!("spectral data needs an Einstein point; max |f(+-)| = {res}")));
    }
    let diagonal = |m: &[[T; 3]; 3]| (0..3).all(|i| (0..3).all(|j| i == j || m[i][j].abs() <= tol));
    let (ap, am) = if diagonal(&c.fpp) && diagonal(&c.fmm) {
        // shared canonical basis, λ₁ = a₊³ + a₋³, λ₂ = a₊² + a₋², λ₃ = a₊¹ + a₋¹
        ([c.fpp[2][2], c.fpp[1][1], c.fpp[0][0]], [c.fmm[2][2], c.fmm[1][1], c.fmm[0][0]])
    } else {
        (sym_eigen(&symmetrize(&c.fpp)).0, sym_eigen(&symmetrize(&c.fmm)).0)
    };
    let mut pairs: [(T, T); 3] = std::array::from_fn(|i| (ap[i] + am[i], ap[i] - am[i]));
    pairs.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap_or(std::cmp::Ordering::Equal));
    let lambda_vec = pairs.map(|p| p.0);
    let mu_vec = pairs.map(|p| p.1);
    let r = c.riemann();
    let op: [[T; 6]; 6] =
        std::array::from_fn(|p| std::array::from_fn(|q| r[BASIS6[p].0][BASIS6[p].1][BASIS6[q].0][BASIS6[q].1]));
    Ok(SpectralData {
        aplus_eigs: sym_eigen(&symmetrize(&c.fpp)).0,
        aminus_eigs: sym_eigen(&symmetrize(&c.fmm)).0,
        lambda_vec,
        mu_vec,
        sectional_nonneg: lambda_vec.iter().all(|&l| l >= -tol),
        operator_eigs: sym_eigen(&op).0,
    })
}

/// Pointwise strong Hitchin-Thorpe check `ρ_τ ≤ (2/3)^{3/2} ρ_χ`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct StrongHt<T> {
    /// `4π² ρ_χ = |λ|² + |μ|²`, `3π² ρ_τ = λ·μ`.
    pub rho_chi: T,
    pub rho_tau: T,
    pub ratio: T,
    /// `cos∠(λ, μ)`, zero when either vector vanishes.
    pub cos_angle: T,
    pub passes: bool,
    /// `ρ_χ = 0`: the inequality is vacuous.
    pub flat: bool,
}

pub fn strong_ht_check<T: Real>(s: &SpectralData<T>) -> Result<StrongHt<T>> {
    if !s.sectional_nonneg {
        return Err(GeomError::Contract("strong Hitchin-Thorpe needs nonnegative sectional curvature".into()));
    }
    let dot = |a: &[T; 3], b: &[T; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    let (l, m) = (&s.lambda_vec, &s.mu_vec);
    let pi2 = T::PI() * T::PI();
    let rho_chi = (dot(l, l) + dot(m, m)) / (lit::<T>(4.0) * pi2);
    let rho_tau = dot(l, m) / (lit::<T>(3.0) * pi2);
    let norms = (dot(l, l) * dot(m, m)).sqrt();
    // μ at round-off level has no direction
    let mu_negligible = dot(m, m) <= T::epsilon() * dot(l, l);
    let cos_angle = if norms > T::zero() && !mu_negligible { dot(l, m) / norms } else { T::zero() };
    if rho_chi <= T::zero() {
        return Ok(StrongHt { rho_chi, rho_tau, ratio: T::zero(), cos_angle, passes: true, flat: true });
    }
    let ratio = rho_tau / rho_chi;
    let slack = T::epsilon() * lit(64.0);
    Ok(StrongHt { rho_chi, rho_tau, ratio, cos_angle, passes: ratio <= strong_ht_bound::<T>() + slack, flat: false })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::analyze_point;
    use crate::geometry::{round_s4, S2xS2};
    use approx::assert_relative_eq;

    #[test]
    fn bound_constant() {
        assert_relative_eq!(strong_ht_bound::<f64>(), 0.5443310539518174, epsilon = 1e-15);
    }

    #[test]
    fn round_sphere_spectrum() {
        let g = round_s4(1.0f64).unwrap();
        let p = analyze_point(&g, &[1.0, 0.5, 0.5, 1.0]).unwrap();
        let s = spectral_point(&p.coeffs, 1e-9).unwrap();
        for i in 0..3 {
            assert_relative_eq!(s.lambda_vec[i], 1.0, epsilon = 1e-12);
            assert!(s.mu_vec[i].abs() < 1e-12);
        }
        for e in s.operator_eigs {
            assert_relative_eq!(e, 1.0, epsilon = 1e-12);
        }
        let h = strong_ht_check(&s).unwrap();
        assert!(h.passes && h.ratio.abs() < 1e-12);
    }

    #[test]
    fn product_spectrum() {
        let g = S2xS2::new(1.0f64, 1.0).unwrap();
        let p = analyze_point(&g, &[1.0, 0.5, 2.0, 1.0]).unwrap();
        let s = spectral_point(&p.coeffs, 1e-9).unwrap();
        let want = [1.0, 0.0, 0.0];
        for i in 0..3 {
            assert!((s.lambda_vec[i] - want[i]).abs() < 1e-12);
            assert!(s.mu_vec[i].abs() < 1e-12);
        }
    }

    #[test]
    fn non_einstein_point_is_rejected() {
        let g = S2xS2::new(1.0f64, 2.0).unwrap();
        let p = analyze_point(&g, &[1.0, 0.5, 2.0, 1.0]).unwrap();
        assert!(matches!(spectral_point(&p.coeffs, 1e-9), Err(GeomError::Contract(_))));
    }
}
