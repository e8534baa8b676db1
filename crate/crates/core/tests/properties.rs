use proptest::prelude::*;

use fourgeom::connection::{connection_jets, spin_connection, torsion_residual};
use fourgeom::curvature::{analyze_point, riemann_cartan, riemann_from_field_strengths, riemann_max_diff};
use fourgeom::deformation::{linearized_residual, LinearDeformation};
use fourgeom::geometry::{page_nu, round_s4, EllipsoidS4, FrameField, PageParams, PageSpace, S2xS2};
use fourgeom::invariants::{integrate_invariants, spectral_point, strong_ht_bound, strong_ht_check};
use fourgeom::quadrature::{gauss_legendre, QuadratureSpec};
use fourgeom::shooting::{selfdual_shoot, ShootingProblem};

fn fractions() -> impl Strategy<Value = [f64; 4]> {
    [0.05..0.95f64, 0.05..0.95f64, 0.05..0.95f64, 0.05..0.95f64]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ellipsoid_curvature_routes_agree(r in 0.5..2.0f64, l in 0.5..2.0f64, lt in 0.5..2.0f64, u in fractions()) {
        let g = EllipsoidS4::new(r, l, lt).unwrap();
        let x = g.chart().at_fraction(&u);
        let cj = connection_jets(&g, &x).unwrap();
        let p = analyze_point(&g, &x).unwrap();
        let a = riemann_from_field_strengths(&p.fs);
        let b = riemann_cartan(&cj);
        let scale = 1.0 + fourgeom::linalg::max_abs(&p.coeffs.fpp).max(fourgeom::linalg::max_abs(&p.coeffs.fpm));
        prop_assert!(riemann_max_diff(&a, &b) < 1e-8 * scale);
        prop_assert!(p.coeffs.bianchi_residual() < 1e-8 * scale);
        let ric = p.coeffs.ricci();
        for i in 0..4 {
            for j in 0..4 {
                prop_assert!((ric[i][j] - ric[j][i]).abs() < 1e-8 * scale);
            }
        }
        let w = spin_connection(&g, &x).unwrap();
        prop_assert!(torsion_residual(&g, &w, &x).unwrap() < 1e-9 * scale);
    }

    #[test]
    fn einstein_spectral_identities(which in 0usize..3, u in fractions(), lambda in 0.3..3.0f64) {
        let g: fourgeom::Geometry = match which {
            0 => round_s4(lambda).unwrap().into(),
            1 => S2xS2::new(lambda, lambda).unwrap().into(),
            _ => PageSpace::new(PageParams::new(page_nu(), lambda).unwrap()).into(),
        };
        let x = g.chart().at_fraction(&u);
        let p = analyze_point(&g, &x).unwrap();
        let s = spectral_point(&p.coeffs, 1e-7).unwrap();
        let scale = 1.0 + s.lambda_vec.iter().map(|v| v.abs()).fold(0.0, f64::max);
        let sp: f64 = s.aplus_eigs.iter().sum();
        let sm: f64 = s.aminus_eigs.iter().sum();
        prop_assert!((sp - sm).abs() < 1e-8 * scale);
        prop_assert!(s.mu_vec.iter().sum::<f64>().abs() < 1e-8 * scale);
        let (rp, rm) = p.densities();
        for (sg, rho) in [(1.0, rp), (-1.0, rm)] {
            let n: f64 = (0..3).map(|k| (s.lambda_vec[k] + sg * s.mu_vec[k]).powi(2)).sum();
            prop_assert!((n - 4.0 * rho).abs() < 1e-8 * scale * scale);
            prop_assert!(n >= 0.0);
        }
        if s.sectional_nonneg {
            let h = strong_ht_check(&s).unwrap();
            prop_assert!(h.passes);
            prop_assert!(h.flat || h.ratio <= strong_ht_bound::<f64>() + 1e-12);
            prop_assert!(h.cos_angle <= (2.0f64 / 3.0).sqrt() + 1e-9);
        }
    }

    #[test]
    fn page_ricci_is_lambda(lambda in 0.2..4.0f64, u in fractions()) {
        let g = PageSpace::new(PageParams::new(page_nu(), lambda).unwrap());
        let x = g.chart().at_fraction(&u);
        let p = analyze_point(&g, &x).unwrap();
        prop_assert!(p.coeffs.ricci_residual() < 1e-8 * (1.0 + lambda));
        prop_assert!((p.coeffs.lambda_est() - lambda).abs() < 1e-8 * (1.0 + lambda));
    }

    #[test]
    fn linearized_modes(c1 in -3.0..3.0f64, c2 in -3.0..3.0f64, r in 1e-2..(std::f64::consts::PI - 1e-2)) {
        let d = LinearDeformation::regular(c1, c2, 0.0);
        let res = linearized_residual(|x| d.p(x), |x| d.q(x), r).unwrap();
        prop_assert!(res[0].abs() < 1e-10 && res[1].abs() < 1e-10);
    }

    #[test]
    fn gauss_legendre_is_exact(n in 1usize..40, deg_frac in 0.0..1.0f64) {
        let deg = ((2 * n - 1) as f64 * deg_frac) as i32;
        let (x, w) = gauss_legendre::<f64>(n);
        let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg)).sum();
        let want = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
        prop_assert!((got - want).abs() < 1e-13);
    }

    #[test]
    fn rescaled_spheres_close(k in 0.3..3.0f64) {
        let res = selfdual_shoot(&ShootingProblem::sphere(k)).unwrap();
        prop_assert!(res.closes(1e-6), "k = {k}: {}", res.match_deficit);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn quadrature_ignores_thread_count(r in 0.7..1.4f64, l in 0.7..1.4f64, lt in 0.7..1.4f64, threads in 2usize..5) {
        let g = EllipsoidS4::new(r, l, lt).unwrap();
        let q = QuadratureSpec::uniform(10);
        let run = |n: usize| {
            rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap()
                .install(|| integrate_invariants(&g, &q).unwrap())
        };
        let (a, b) = (run(1), run(threads));
        prop_assert_eq!(a.chi.to_bits(), b.chi.to_bits());
        prop_assert_eq!(a.tau.to_bits(), b.tau.to_bits());
        prop_assert_eq!(a.volume.to_bits(), b.volume.to_bits());
        prop_assert_eq!(a.chi_refine_delta.to_bits(), b.chi_refine_delta.to_bits());
    }
}
