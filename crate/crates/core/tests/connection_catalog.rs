mod common;

use common::{catalog, interior_point, rng};
use fourgeom::connection::{spin_connection, split_connection, torsion_residual, SpinConnection};
use fourgeom::geometry::{round_s4, FrameField, PageParams, PageSpace};

#[test]
fn torsion_vanishes_on_every_catalog_geometry() {
    let mut r = rng(2024);
    for g in catalog() {
        let mut worst: f64 = 0.0;
        for _ in 0..50 {
            let x = interior_point(g.chart(), &mut r);
            let w = spin_connection(&g, &x).unwrap();
            worst = worst.max(torsion_residual(&g, &w, &x).unwrap());
        }
        assert!(worst < 1e-9, "{}: torsion {worst:e}", g.id());
    }
}

#[test]
fn page_connection_matches_closed_form() {
    for lambda in [None, Some(2.5)] {
        let p = PageParams::standard();
        let p = match lambda {
            Some(l) => PageParams::new(p.nu, l).unwrap(),
            None => p,
        };
        let page = PageSpace::new(p);
        let mut r = rng(5);
        for _ in 0..30 {
            let x = interior_point(page.chart(), &mut r);
            let (theta, chi) = (x[0], x[3]);
            let w = spin_connection(&page, &x).unwrap();
            let closed = SpinConnection { omega: page.omega_closed_form(chi, theta) };
            assert!(w.max_abs_diff(&closed) < 1e-9, "omega at {x:?}: {:e}", w.max_abs_diff(&closed));
            let a = split_connection(&w);
            let (ap, am) = page.gauge_closed_form(chi, theta);
            for i in 0..3 {
                for c in 0..4 {
                    assert!((a.aplus[i][c] - ap[i][c]).abs() < 1e-9);
                    assert!((a.aminus[i][c] - am[i][c]).abs() < 1e-9);
                }
            }
        }
    }
}

#[test]
fn page_example_point() {
    let page = PageSpace::new(PageParams::<f64>::standard());
    let (chi, theta) = (std::f64::consts::PI / 3.0, std::f64::consts::PI / 4.0);
    let w = spin_connection(&page, &[theta, 0.0, 0.0, chi]).unwrap();
    let cf = page.closed_form(chi, theta);
    // ω₁₃ = f e²
    assert!((w.omega[0][2][1] - cf.f).abs() < 1e-12);
}

#[test]
fn round_sphere_gauge_fields() {
    let g = round_s4(1.0f64).unwrap();
    for r in [0.4, 1.3, 2.7] {
        let x = [1.1, 0.3, 0.2, r];
        let a = split_connection(&spin_connection(&g, &x).unwrap());
        // ¼(−1 ± cos r) dθ with dθ = (2/sin r) e¹
        let want = |s: f64| 0.25 * (-1.0 + s * r.cos()) * 2.0 / r.sin();
        assert!((a.aplus[0][0] - want(1.0)).abs() < 1e-12);
        assert!((a.aminus[0][0] - want(-1.0)).abs() < 1e-12);
    }
}
