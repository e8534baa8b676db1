//! SU(2)± field strengths and the irreducible decomposition of the Riemann
//! tensor into the blocks `f_{(++)}`, `f_{(+−)}`, `f_{(−+)}`, `f_{(−−)}`.

use serde::Serialize;

use crate::algebra::{epsilon3, wedge, Symbol, TwoForm, ETA, ETA_BAR};
use crate::connection::{connection_jets, split_omega, ConnectionJets, GaugeFields, SpinConnection};
use crate::error::Result;
use crate::geometry::FrameField;
use crate::jet::Jet1;
use crate::linalg::{frob_sq, max_abs, sym_eigen, trace3, Mat3};
use crate::scalar::{lit, Real};

/// `R[a][b][c][d] = R_{ab,cd}` in frame components.
pub type Riemann<T> = [[[[T; 4]; 4]; 4]; 4];

/// Frame components `F^(±)i_{cd}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FieldStrengths<T> {
    pub fplus: [TwoForm<T>; 3],
    pub fminus: [TwoForm<T>; 3],
}

/// The four 3×3 coefficient blocks at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvatureCoeffs<T> {
    pub fpp: Mat3<T>,
    pub fpm: Mat3<T>,
    pub fmp: Mat3<T>,
    pub fmm: Mat3<T>,
}

#[inline]
fn sym<T: Real>(s: &Symbol, i: usize, a: usize, b: usize) -> T {
    T::from_i8(s[i][a][b]).unwrap()
}

/// `F = dA − ε^{ijk} A^j ∧ A^k` for one chirality, from jets of the frame
/// components of `A`.
fn curvature_of<T: Real>(cj: &ConnectionJets<T>, a: &[[Jet1<T>; 4]; 3]) -> [TwoForm<T>; 3] {
    std::array::from_fn(|i| {
        let mut f = TwoForm { comp: cj.exterior_derivative(&a[i]) };
        for j in 0..3 {
            for k in 0..3 {
                let e = epsilon3(i, j, k);
                if e == 0 {
                    continue;
                }
                let e = T::from_i8(e).unwrap();
                for c in 0..4 {
                    for d in 0..4 {
                        let w = a[j][c].val * a[k][d].val - a[j][d].val * a[k][c].val;
                        f.comp[c][d] = f.comp[c][d] - e * w;
                    }
                }
            }
        }
        f
    })
}

/// Gauge fields and their field strengths from connection jets.
pub fn gauge_and_field_strengths<T: Real>(cj: &ConnectionJets<T>) -> (GaugeFields<T>, FieldStrengths<T>) {
    let aj = split_omega::<T, Jet1<T>>(&cj.omega);
    let fs = FieldStrengths { fplus: curvature_of(cj, &aj.aplus), fminus: curvature_of(cj, &aj.aminus) };
    let vals = |m: [[Jet1<T>; 4]; 3]| m.map(|r| r.map(|v| v.val));
    (GaugeFields { aplus: vals(aj.aplus), aminus: vals(aj.aminus) }, fs)
}

pub fn field_strengths<T: Real, F: FrameField<T> + ?Sized>(frame: &F, x: &[T; 4]) -> Result<FieldStrengths<T>> {
    let cj = connection_jets(frame, x)?;
    Ok(gauge_and_field_strengths(&cj).1)
}

/// `f^{ij}_{(±·)} = ¼ F^(±)i_{cd} (η or η̄)^j_{cd}`.
pub fn decompose<T: Real>(fs: &FieldStrengths<T>) -> CurvatureCoeffs<T> {
    let q = lit::<T>(0.25);
    let block = |f: &[TwoForm<T>; 3], s: &Symbol| -> Mat3<T> {
        std::array::from_fn(|i| std::array::from_fn(|j| q * f[i].contract_symbol(s, j)))
    };
    CurvatureCoeffs {
        fpp: block(&fs.fplus, &ETA),
        fpm: block(&fs.fplus, &ETA_BAR),
        fmp: block(&fs.fminus, &ETA),
        fmm: block(&fs.fminus, &ETA_BAR),
    }
}

/// `max |f_{(+−)}|`; zero exactly for Einstein metrics.
pub fn einstein_residual<T: Real>(c: &CurvatureCoeffs<T>) -> T {
    max_abs(&c.fpm)
}

/// `(ρ^(+), ρ^(−))` with `F^(±)i ∧ F^(±)i = ±2 ρ^(±) dμ`.
pub fn instanton_density<T: Real>(fs: &FieldStrengths<T>) -> (T, T) {
    let half = lit::<T>(0.5);
    let mut p = T::zero();
    let mut m = T::zero();
    for i in 0..3 {
        p = p + wedge(&fs.fplus[i], &fs.fplus[i]);
        m = m + wedge(&fs.fminus[i], &fs.fminus[i]);
    }
    (half * p, -half * m)
}

fn traceless<T: Real>(f: &Mat3<T>) -> Mat3<T> {
    let t = trace3(f) / lit::<T>(3.0);
    std::array::from_fn(|i| std::array::from_fn(|j| if i == j { f[i][j] - t } else { f[i][j] }))
}

/// Traceless parts `f̃_{(++)}`, `f̃_{(−−)}` carrying the Weyl tensor.
pub fn weyl_blocks<T: Real>(c: &CurvatureCoeffs<T>) -> (Mat3<T>, Mat3<T>) {
    (traceless(&c.fpp), traceless(&c.fmm))
}

impl<T: Real> CurvatureCoeffs<T> {
    pub fn scalar(&self) -> T {
        lit::<T>(4.0) * (trace3(&self.fpp) + trace3(&self.fmm))
    }

    /// `R/4`; the Einstein constant when [`einstein_residual`] vanishes.
    pub fn lambda_est(&self) -> T {
        self.scalar() / lit(4.0)
    }

    /// `R_{ab} = (tr f₊₊ + tr f₋₋) δ_{ab} + 2 f^{ij}_{(+−)} η^i_{ac} η̄^j_{bc}`.
    pub fn ricci(&self) -> [[T; 4]; 4] {
        let tr = trace3(&self.fpp) + trace3(&self.fmm);
        let two = lit::<T>(2.0);
        std::array::from_fn(|a| {
            std::array::from_fn(|b| {
                let mut s = if a == b { tr } else { T::zero() };
                for i in 0..3 {
                    for j in 0..3 {
                        let f = self.fpm[i][j];
                        if f == T::zero() {
                            continue;
                        }
                        let mut k = T::zero();
                        for c in 0..4 {
                            k = k + sym::<T>(&ETA, i, a, c) * sym::<T>(&ETA_BAR, j, b, c);
                        }
                        s = s + two * f * k;
                    }
                }
                s
            })
        })
    }

    /// `max |R_{ab} − (R/4) δ_{ab}|`.
    pub fn ricci_residual(&self) -> T {
        let ric = self.ricci();
        let l = self.lambda_est();
        let mut m = T::zero();
        for a in 0..4 {
            for b in 0..4 {
                let target = if a == b { l } else { T::zero() };
                m = m.max((ric[a][b] - target).abs());
            }
        }
        m
    }

    /// Riemann tensor assembled from the four blocks.
    pub fn riemann(&self) -> Riemann<T> {
        let mut r = [[[[T::zero(); 4]; 4]; 4]; 4];
        let blocks = [
            (&self.fpp, &ETA, &ETA),
            (&self.fpm, &ETA, &ETA_BAR),
            (&self.fmp, &ETA_BAR, &ETA),
            (&self.fmm, &ETA_BAR, &ETA_BAR),
        ];
        for (f, s1, s2) in blocks {
            for i in 0..3 {
                for j in 0..3 {
                    let v = f[i][j];
                    if v == T::zero() {
                        continue;
                    }
                    for a in 0..4 {
                        for b in 0..4 {
                            if s1[i][a][b] == 0 {
                                continue;
                            }
                            for c in 0..4 {
                                for d in 0..4 {
                                    if s2[j][c][d] != 0 {
                                        r[a][b][c][d] =
                                            r[a][b][c][d] + v * sym::<T>(s1, i, a, b) * sym::<T>(s2, j, c, d);
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        r
    }

    /// Largest violation of the first Bianchi identity in block form:
    /// symmetry of `f₊₊`, `f₋₋`, `f₊₋ = f₋₊ᵀ`, and `tr f₊₊ = tr f₋₋`.
    pub fn bianchi_residual(&self) -> T {
        let mut m = (trace3(&self.fpp) - trace3(&self.fmm)).abs();
        for i in 0..3 {
            for j in 0..3 {
                m = m
                    .max((self.fpp[i][j] - self.fpp[j][i]).abs())
                    .max((self.fmm[i][j] - self.fmm[j][i]).abs())
                    .max((self.fpm[i][j] - self.fmp[j][i]).abs());
            }
        }
        m
    }

    /// Eigenvalues of the Weyl blocks, each sorted descending.
    pub fn weyl_eigenvalues(&self) -> ([T; 3], [T; 3]) {
        let (wp, wm) = weyl_blocks(self);
        (sym_eigen(&symmetrize(&wp)).0, sym_eigen(&symmetrize(&wm)).0)
    }

    /// `(|f₊₊|², |f₋₋|², |f₊₋|²)`.
    pub fn squares(&self) -> (T, T, T) {
        (frob_sq(&self.fpp), frob_sq(&self.fmm), frob_sq(&self.fpm))
    }
}

pub(crate) fn symmetrize<T: Real>(m: &Mat3<T>) -> Mat3<T> {
    let h = lit::<T>(0.5);
    std::array::from_fn(|i| std::array::from_fn(|j| h * (m[i][j] + m[j][i])))
}

/// Riemann tensor assembled from the field strengths,
/// `R_{ab,cd} = F^(+)i_{cd} η^i_{ab} + F^(−)i_{cd} η̄^i_{ab}`.
pub fn riemann_from_field_strengths<T: Real>(fs: &FieldStrengths<T>) -> Riemann<T> {
    let mut r = [[[[T::zero(); 4]; 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for i in 0..3 {
                let (p, m) = (ETA[i][a][b], ETA_BAR[i][a][b]);
                for c in 0..4 {
                    for d in 0..4 {
                        let mut v = r[a][b][c][d];
                        if p != 0 {
                            v = v + T::from_i8(p).unwrap() * fs.fplus[i].comp[c][d];
                        }
                        if m != 0 {
                            v = v + T::from_i8(m).unwrap() * fs.fminus[i].comp[c][d];
                        }
                        r[a][b][c][d] = v;
                    }
                }
            }
        }
    }
    r
}

/// Riemann tensor straight from the structure equation
/// `R_{ab} = dω_{ab} + ω_{ac} ∧ ω_{cb}`, bypassing the SU(2) split.
pub fn riemann_cartan<T: Real>(cj: &ConnectionJets<T>) -> Riemann<T> {
    let w = &cj.omega;
    let mut r = [[[[T::zero(); 4]; 4]; 4]; 4];
    for a in 0..4 {
        for b in a + 1..4 {
            let dw = cj.exterior_derivative(&w[a][b]);
            for c in 0..4 {
                for d in 0..4 {
                    let mut v = dw[c][d];
                    for e in 0..4 {
                        v = v + w[a][e][c].val * w[e][b][d].val - w[a][e][d].val * w[e][b][c].val;
                    }
                    r[a][b][c][d] = v;
                    r[b][a][c][d] = -v;
                }
            }
        }
    }
    r
}

/// Ricci tensor by direct contraction `R_{ab} = R_{ac,bc}`.
pub fn ricci_contraction<T: Real>(r: &Riemann<T>) -> [[T; 4]; 4] {
    std::array::from_fn(|a| std::array::from_fn(|b| (0..4).fold(T::zero(), |s, c| s + r[a][c][b][c])))
}

pub fn riemann_max_diff<T: Real>(x: &Riemann<T>, y: &Riemann<T>) -> T {
    let mut m = T::zero();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    m = m.max((x[a][b][c][d] - y[a][b][c][d]).abs());
                }
            }
        }
    }
    m
}

/// Everything the curvature module knows about one point.
#[derive(Debug, Clone)]
pub struct PointCurvature<T> {
    pub x: [T; 4],
    /// Volume density `det e^a_μ`.
    pub det: T,
    pub omega: SpinConnection<T>,
    pub gauge: GaugeFields<T>,
    pub fs: FieldStrengths<T>,
    pub coeffs: CurvatureCoeffs<T>,
}

impl<T: Real> PointCurvature<T> {
    pub fn einstein_residual(&self) -> T {
        einstein_residual(&self.coeffs)
    }

    pub fn densities(&self) -> (T, T) {
        instanton_density(&self.fs)
    }
}

pub fn analyze_point<T: Real, F: FrameField<T> + ?Sized>(frame: &F, x: &[T; 4]) -> Result<PointCurvature<T>> {
    let cj = connection_jets(frame, x)?;
    let (gauge, fs) = gauge_and_field_strengths(&cj);
    Ok(PointCurvature { x: *x, det: cj.frame.det, omega: cj.spin_connection(), gauge, coeffs: decompose(&fs), fs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{round_s4, FlatBox, S2xS2};
    use approx::assert_relative_eq;

    fn assert_block(m: &Mat3<f64>, want: &Mat3<f64>, tol: f64) {
        for i in 0..3 {
            for j in 0..3 {
                assert!((m[i][j] - want[i][j]).abs() < tol, "[{i}][{j}] {} vs {}", m[i][j], want[i][j]);
            }
        }
    }

    #[test]
    fn round_sphere_blocks() {
        let g = round_s4(1.0f64).unwrap();
        let p = analyze_point(&g, &[1.0, 1.0, 1.0, 1.0]).unwrap();
        let half = [[0.5, 0.0, 0.0], [0.0, 0.5, 0.0], [0.0, 0.0, 0.5]];
        assert_block(&p.coeffs.fpp, &half, 1e-12);
        assert_block(&p.coeffs.fmm, &half, 1e-12);
        assert_block(&p.coeffs.fpm, &[[0.0; 3]; 3], 1e-12);
        assert_relative_eq!(p.coeffs.scalar(), 12.0, epsilon = 1e-12);
        let (rp, rm) = p.densities();
        assert_relative_eq!(rp, 0.75, epsilon = 1e-12);
        assert_relative_eq!(rm, 0.75, epsilon = 1e-12);
    }

    #[test]
    fn product_of_spheres_blocks() {
        let g = S2xS2::new(1.0f64, 1.0).unwrap();
        let p = analyze_point(&g, &[0.8, 0.3, 2.0, 1.0]).unwrap();
        let want = [[0.0; 3], [0.0; 3], [0.0, 0.0, 0.5]];
        assert_block(&p.coeffs.fpp, &want, 1e-12);
        assert_block(&p.coeffs.fmm, &want, 1e-12);
        let g = S2xS2::new(1.0f64, 2.0).unwrap();
        let p = analyze_point(&g, &[0.8, 0.3, 2.0, 1.0]).unwrap();
        assert_relative_eq!(p.coeffs.fpm[2][2].abs(), (1.0 - 0.25) / 4.0, epsilon = 1e-12);
    }

    #[test]
    fn flat_densities_vanish() {
        let g = FlatBox::new(2.0f64);
        let p = analyze_point(&g, &[0.1, 0.2, 0.3, 0.4]).unwrap();
        assert_eq!(p.densities(), (0.0, 0.0));
    }

    #[test]
    fn weyl_blocks_are_traceless() {
        let g = S2xS2::new(1.0f64, 1.5).unwrap();
        let p = analyze_point(&g, &[0.8, 0.3, 2.0, 1.0]).unwrap();
        let (wp, wm) = weyl_blocks(&p.coeffs);
        assert!(trace3(&wp).abs() < 1e-12 && trace3(&wm).abs() < 1e-12);
    }
}
