mod common;

use common::{catalog, interior_point, rng};
use fourgeom::algebra::{hodge_dual, wedge, Chirality, TwoForm};
use fourgeom::connection::{connection_jets, spin_connection, split_connection};
use fourgeom::curvature::{
    analyze_point, gauge_and_field_strengths, ricci_contraction, riemann_cartan, riemann_from_field_strengths,
    riemann_max_diff, weyl_blocks,
};
use fourgeom::geometry::{round_s4, EllipsoidS4, FrameField, PageParams, PageSpace, S2xS2};
use rand::Rng;

#[test]
fn three_riemann_routes_agree() {
    let mut r = rng(77);
    for g in catalog() {
        for _ in 0..50 {
            let x = interior_point(g.chart(), &mut r);
            let cj = connection_jets(&g, &x).unwrap();
            let (_, fs) = gauge_and_field_strengths(&cj);
            let coeffs = fourgeom::curvature::decompose(&fs);
            let cartan = riemann_cartan(&cj);
            let from_fs = riemann_from_field_strengths(&fs);
            let from_blocks = coeffs.riemann();
            assert!(riemann_max_diff(&cartan, &from_fs) < 1e-9, "{} cartan vs F", g.id());
            assert!(riemann_max_diff(&from_blocks, &from_fs) < 1e-9, "{} blocks vs F", g.id());
            let ric = ricci_contraction(&cartan);
            let ric2 = coeffs.ricci();
            for a in 0..4 {
                for b in 0..4 {
                    assert!((ric[a][b] - ric2[a][b]).abs() < 1e-9, "{} ricci", g.id());
                }
            }
            assert!(coeffs.bianchi_residual() < 1e-9, "{} bianchi", g.id());
        }
    }
}

#[test]
fn einstein_points_are_self_dual() {
    let mut r = rng(3);
    let geoms: Vec<fourgeom::geometry::Geometry<f64>> = vec![
        round_s4(0.7).unwrap().into(),
        PageSpace::new(PageParams::standard()).into(),
        S2xS2::new(1.2, 1.2).unwrap().into(),
    ];
    for g in geoms {
        for _ in 0..20 {
            let x = interior_point(g.chart(), &mut r);
            let p = analyze_point(&g, &x).unwrap();
            assert!(p.einstein_residual() < 1e-9);
            let lambda = p.coeffs.lambda_est();
            let mut trace_p = 0.0;
            let mut trace_m = 0.0;
            for i in 0..3 {
                assert!(hodge_dual(&p.fs.fplus[i]).max_abs_diff(&p.fs.fplus[i]) < 1e-8);
                assert!(hodge_dual(&p.fs.fminus[i]).max_abs_diff(&p.fs.fminus[i].scaled(-1.0)) < 1e-8);
                trace_p += wedge(&p.fs.fplus[i], &TwoForm::zeta(Chirality::SelfDual, i));
                trace_m += wedge(&p.fs.fminus[i], &TwoForm::zeta(Chirality::AntiSelfDual, i));
            }
            // F^(±)i ∧ ζ^i_± = ±2 tr f_(±±) dμ = ±λ dμ
            assert!((trace_p - lambda).abs() < 1e-9, "{} {trace_p} {lambda}", g.id());
            assert!((trace_m + lambda).abs() < 1e-9);
        }
    }
}

#[test]
fn page_curvature_matches_closed_form() {
    for lambda in [None, Some(0.6)] {
        let p0 = PageParams::standard();
        let params = lambda.map(|l| PageParams::new(p0.nu, l).unwrap()).unwrap_or(p0);
        let page = PageSpace::new(params);
        let mut r = rng(9);
        for _ in 0..30 {
            let x = interior_point(page.chart(), &mut r);
            let p = analyze_point(&page, &x).unwrap();
            let (psi1p, psi3p) = page.psi_closed_form(x[3], 1.0);
            let (psi1m, psi3m) = page.psi_closed_form(x[3], -1.0);
            let c = &p.coeffs;
            let want_pp = [psi1p, psi1p, psi3p];
            let want_mm = [-psi1m, -psi1m, -psi3m];
            for i in 0..3 {
                for j in 0..3 {
                    let (wp, wm) = if i == j { (want_pp[i], want_mm[i]) } else { (0.0, 0.0) };
                    assert!((c.fpp[i][j] - wp).abs() < 1e-8, "fpp[{i}][{j}] {} vs {wp}", c.fpp[i][j]);
                    assert!((c.fmm[i][j] - wm).abs() < 1e-8, "fmm[{i}][{j}] {} vs {wm}", c.fmm[i][j]);
                }
            }
            let ric = c.ricci();
            for a in 0..4 {
                for b in 0..4 {
                    let want = if a == b { params.lambda } else { 0.0 };
                    assert!((ric[a][b] - want).abs() < 1e-9, "ricci[{a}][{b}] = {}", ric[a][b]);
                }
            }
        }
    }
}

#[test]
fn page_weyl_has_two_distinct_eigenvalues() {
    let page = PageSpace::new(PageParams::<f64>::standard());
    let mut r = rng(21);
    for _ in 0..40 {
        let x = interior_point(page.chart(), &mut r);
        let p = analyze_point(&page, &x).unwrap();
        let (ep, em) = p.coeffs.weyl_eigenvalues();
        for e in [ep, em] {
            let gaps = [(e[0] - e[1]).abs(), (e[1] - e[2]).abs()];
            let equal = gaps.iter().filter(|g| **g < 1e-9).count();
            assert_eq!(equal, 1, "{e:?}");
        }
    }
}

#[test]
fn ellipsoid_closed_forms() {
    let mut r = rng(31);
    for _ in 0..10 {
        let (a, b, c) = (r.gen_range(0.6..1.6), r.gen_range(0.6..1.6), r.gen_range(0.6..1.6));
        let e = EllipsoidS4::new(a, b, c).unwrap();
        for _ in 0..50 {
            let x = interior_point(e.chart(), &mut r);
            let (theta, rho) = (x[2], x[3]);
            let p = analyze_point(&e, &x).unwrap();
            let (rp, rm) = p.densities();
            let want = e.density_closed_form(rho, theta);
            assert!((rp - want).abs() < 1e-8 * want.max(1.0), "rho+ {rp} vs {want}");
            assert!((rm - want).abs() < 1e-8 * want.max(1.0), "rho- {rm} vs {want}");
            let k = e.coeffs_closed_form(rho, theta);
            let pm = p.coeffs.fpm;
            let mp = p.coeffs.fmp;
            let scale = 1e-8 * pm.iter().flatten().fold(1.0f64, |m, v| m.max(v.abs()));
            let check =
                |got: f64, want: f64, what: &str| assert!((got - want).abs() < scale, "{what}: {got} vs {want}");
            check(pm[0][0], k.f11, "f11+-");
            check(pm[1][1], k.f22, "f22+-");
            check(pm[2][2], k.f33, "f33+-");
            check(pm[0][1], k.f12, "f12+-");
            check(mp[0][0], k.f11, "f11-+");
            check(mp[1][1], k.f22, "f22-+");
            check(mp[2][2], k.f33, "f33-+");
            check(mp[0][1], -k.f12, "f12-+");
            check(pm[1][0], -k.f12, "f21+-");
            check(mp[1][0], k.f12, "f21-+");
            for (i, j) in [(0, 2), (1, 2), (2, 0), (2, 1)] {
                check(pm[i][j], 0.0, "f+- off block");
                check(mp[i][j], 0.0, "f-+ off block");
            }
            let a = split_connection(&spin_connection(&e, &x).unwrap());
            let (ap, am) = e.gauge_closed_form(rho, theta);
            for i in 0..3 {
                for c in 0..4 {
                    assert!((a.aplus[i][c] - ap[i][c]).abs() < 1e-8, "A+{i}{c}: {} vs {}", a.aplus[i][c], ap[i][c]);
                    assert!((a.aminus[i][c] - am[i][c]).abs() < 1e-8, "A-{i}{c}: {} vs {}", a.aminus[i][c], am[i][c]);
                }
            }
            for (s, f3) in [(1.0, &p.fs.fplus[2]), (-1.0, &p.fs.fminus[2])] {
                let (c12, c34) = e.f3_closed_form(rho, theta, s);
                assert!((f3.comp[0][1] - c12).abs() < 1e-8 && (f3.comp[2][3] - c34).abs() < 1e-8);
            }
        }
    }
}

#[test]
fn round_ellipsoid_is_einstein_and_matches_round_sphere() {
    let e = EllipsoidS4::new(1.0f64, 1.0, 1.0).unwrap();
    let s = round_s4(1.0f64).unwrap();
    let mut r = rng(8);
    for _ in 0..50 {
        let xb = interior_point(s.chart(), &mut r);
        let (theta, phi, psi, rr) = (xb[0], xb[1], xb[2], xb[3]);
        let xe = [(psi + phi) / 2.0, (psi - phi) / 2.0, theta / 2.0, rr];
        let p = analyze_point(
            &e,
            &[xe[0].rem_euclid(std::f64::consts::TAU), xe[1].rem_euclid(std::f64::consts::TAU), xe[2], xe[3]],
        )
        .unwrap();
        assert!(p.einstein_residual() < 1e-12);
        // lengths of coordinate vectors pulled back through the chart map
        let ge = e.metric(&p.x).unwrap();
        let gb = s.metric(&xb).unwrap();
        // Jacobian ∂x_e/∂x_b
        let mut jac = [[0.0; 4]; 4];
        jac[0][1] = 0.5;
        jac[0][2] = 0.5;
        jac[1][1] = -0.5;
        jac[1][2] = 0.5;
        jac[2][0] = 0.5;
        jac[3][3] = 1.0;
        for m in 0..4 {
            for n in 0..4 {
                let mut pulled = 0.0;
                for a in 0..4 {
                    for b in 0..4 {
                        pulled += jac[a][m] * ge[a][b] * jac[b][n];
                    }
                }
                assert!((pulled - gb[m][n]).abs() < 1e-12, "g[{m}][{n}] {pulled} vs {}", gb[m][n]);
            }
        }
    }
}

#[test]
fn ellipsoid_residual_detects_squashing() {
    let e = EllipsoidS4::new(1.0f64, 1.0, 1.2).unwrap();
    let x = [0.3, 0.4, std::f64::consts::PI / 5.0, std::f64::consts::PI / 3.0];
    assert!(analyze_point(&e, &x).unwrap().einstein_residual() > 1e-3);
}

#[test]
fn product_weyl_block() {
    let g = S2xS2::new(1.0f64, 1.0).unwrap();
    let p = analyze_point(&g, &[0.9, 1.0, 2.1, 0.2]).unwrap();
    let (wp, wm) = weyl_blocks(&p.coeffs);
    let want = [-1.0 / 6.0, -1.0 / 6.0, 2.0 / 6.0];
    for i in 0..3 {
        assert!((wp[i][i] - want[i]).abs() < 1e-12);
        assert!((wm[i][i] - want[i]).abs() < 1e-12);
    }
}
