//! Spin connection from a frame field and its SU(2)± split.
//!
//! The frame is evaluated on second-order jets; everything downstream of the
//! vierbein is carried as [`Jet1`] so that one more exterior derivative (for
//! curvature) is available without finite differences.

use crate::algebra::{ETA, ETA_BAR};
use crate::error::{GeomError, Result};
use crate::geometry::FrameField;
use crate::jet::{Jet1, Jet2};
use crate::linalg::{invert4, Mat4};
use crate::scalar::{lit, Real, Scalar};

/// `X[a][b][c]` with three frame indices.
pub type Tensor3<S> = [[[S; 4]; 4]; 4];

/// Vierbein, its first partials and its inverse at a point, all as jets.
#[derive(Debug, Clone)]
pub struct FrameJets<T> {
    pub x: [T; 4],
    /// `e^a_μ`.
    pub e: Mat4<Jet1<T>>,
    /// `de[ν][a][μ] = ∂_ν e^a_μ`.
    pub de: [Mat4<Jet1<T>>; 4],
    /// `inv[μ][a] = E_a^μ`, the dual frame.
    pub inv: Mat4<Jet1<T>>,
    pub det: T,
}

impl<T: Real> FrameJets<T> {
    pub fn values(&self) -> Mat4<T> {
        self.e.map(|row| row.map(|v| v.val))
    }

    pub fn inv_values(&self) -> Mat4<T> {
        self.inv.map(|row| row.map(|v| v.val))
    }
}

pub fn frame_jets<T: Real, F: FrameField<T> + ?Sized>(frame: &F, x: &[T; 4]) -> Result<FrameJets<T>> {
    frame.chart().check_interior(x)?;
    let e2 = frame.coframe(&Jet2::seed(x));
    let vals = e2.map(|row| row.map(|v| v.val));
    crate::geometry::check_frame(x, &vals)?;
    let e = e2.map(|row| row.map(|v| v.first_order()));
    let de = std::array::from_fn(|nu| e2.map(|row| row.map(|v| v.partial(nu))));
    let (inv, det) = invert4::<T, Jet1<T>>(&e)
        .ok_or_else(|| GeomError::DegenerateFrame { point: x.map(|v| v.to_f64_lossy()), det: 0.0 })?;
    if !inv.iter().flatten().all(|v| v.val.is_finite() && v.grad.iter().all(|g| g.is_finite())) {
        return Err(GeomError::NumericFailure { node: x.map(|v| v.to_f64_lossy()) });
    }
    Ok(FrameJets { x: *x, e, de, inv, det: det.val })
}

/// `Λ^a_{bc}` with `de^a = ½ Λ^a_{bc} e^b ∧ e^c`.
pub fn anholonomy_of<T: Real, S: Scalar<T>>(de: &[Mat4<S>; 4], inv: &Mat4<S>) -> Tensor3<S> {
    // curl[a][ν][μ] = ∂_ν e^a_μ − ∂_μ e^a_ν
    let mut curl = [[[S::zero(); 4]; 4]; 4];
    for a in 0..4 {
        for nu in 0..4 {
            for mu in nu + 1..4 {
                let c = de[nu][a][mu] - de[mu][a][nu];
                curl[a][nu][mu] = c;
                curl[a][mu][nu] = -c;
            }
        }
    }
    let mut lam = [[[S::zero(); 4]; 4]; 4];
    for a in 0..4 {
        // half[ν][c] = curl[a][ν][μ] inv[μ][c]
        let mut half = [[S::zero(); 4]; 4];
        for nu in 0..4 {
            for c in 0..4 {
                let mut s = S::zero();
                for mu in 0..4 {
                    s = s + curl[a][nu][mu] * inv[mu][c];
                }
                half[nu][c] = s;
            }
        }
        for b in 0..4 {
            for c in b + 1..4 {
                let mut s = S::zero();
                for nu in 0..4 {
                    s = s + inv[nu][b] * half[nu][c];
                }
                lam[a][b][c] = s;
                lam[a][c][b] = -s;
            }
        }
    }
    lam
}

/// Torsion-free solution `ω_{ab,c} = ½(Λ_{abc} − Λ_{bac} − Λ_{cab})`.
pub fn omega_from_anholonomy<T: Real, S: Scalar<T>>(lam: &Tensor3<S>) -> Tensor3<S> {
    let half = lit::<T>(0.5);
    let mut w = [[[S::zero(); 4]; 4]; 4];
    for a in 0..4 {
        for b in a + 1..4 {
            for c in 0..4 {
                let v = (lam[a][b][c] - lam[b][a][c] - lam[c][a][b]).scale(half);
                w[a][b][c] = v;
                w[b][a][c] = -v;
            }
        }
    }
    w
}

pub fn anholonomy<T: Real, F: FrameField<T> + ?Sized>(frame: &F, x: &[T; 4]) -> Result<Tensor3<T>> {
    let fj = frame_jets(frame, x)?;
    let de = fj.de.map(|m| m.map(|row| row.map(|v| v.val)));
    Ok(anholonomy_of(&de, &fj.inv_values()))
}

/// Frame components `ω_{ab,c}` of the Levi-Civita spin connection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinConnection<T> {
    pub omega: Tensor3<T>,
}

impl<T: Real> SpinConnection<T> {
    pub fn zero() -> Self {
        Self { omega: [[[T::zero(); 4]; 4]; 4] }
    }

    pub fn max_abs_diff(&self, o: &Self) -> T {
        let mut m = T::zero();
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    m = m.max((self.omega[a][b][c] - o.omega[a][b][c]).abs());
                }
            }
        }
        m
    }
}

pub fn spin_connection<T: Real, F: FrameField<T> + ?Sized>(frame: &F, x: &[T; 4]) -> Result<SpinConnection<T>> {
    Ok(SpinConnection { omega: omega_from_anholonomy(&anholonomy(frame, x)?) })
}

/// Frame components `A^(±)i_c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaugeFields<S> {
    pub aplus: [[S; 4]; 3],
    pub aminus: [[S; 4]; 3],
}

/// `A^(±)i_c = ¼ (η or η̄)^i_{ab} ω_{ab,c}`.
pub fn split_omega<T: Real, S: Scalar<T>>(omega: &Tensor3<S>) -> GaugeFields<S> {
    let quarter = lit::<T>(0.25);
    let project = |sym: &crate::algebra::Symbol| {
        std::array::from_fn(|i| {
            std::array::from_fn(|c| {
                let mut s = S::zero();
                for a in 0..4 {
                    for b in 0..4 {
                        match sym[i][a][b] {
                            1 => s = s + omega[a][b][c],
                            -1 => s = s - omega[a][b][c],
                            _ => {}
                        }
                    }
                }
                s.scale(quarter)
            })
        })
    };
    GaugeFields { aplus: project(&ETA), aminus: project(&ETA_BAR) }
}

pub fn split_connection<T: Real>(omega: &SpinConnection<T>) -> GaugeFields<T> {
    split_omega(&omega.omega)
}

impl<T: Real> GaugeFields<T> {
    /// `ω_{ab,c} = A^(+)i_c η^i_{ab} + A^(−)i_c η̄^i_{ab}`.
    pub fn reconstruct(&self) -> SpinConnection<T> {
        let mut w = [[[T::zero(); 4]; 4]; 4];
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    let mut s = T::zero();
                    for i in 0..3 {
                        s = s
                            + self.aplus[i][c] * T::from_i8(ETA[i][a][b]).unwrap()
                            + self.aminus[i][c] * T::from_i8(ETA_BAR[i][a][b]).unwrap();
                    }
                    w[a][b][c] = s;
                }
            }
        }
        SpinConnection { omega: w }
    }
}

/// Max-norm of the frame components `T^a_{cd}` of
/// `T^a = de^a + ω^a_b ∧ e^b` for a given connection.
pub fn torsion_residual<T: Real, F: FrameField<T> + ?Sized>(
    frame: &F,
    omega: &SpinConnection<T>,
    x: &[T; 4],
) -> Result<T> {
    let fj = frame_jets(frame, x)?;
    let e = fj.values();
    let inv = fj.inv_values();
    let w = &omega.omega;
    // coordinate components ω_{abμ} = ω_{ab,c} e^c_μ
    let mut wc = [[[T::zero(); 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for mu in 0..4 {
                wc[a][b][mu] = (0..4).fold(T::zero(), |s, c| s + w[a][b][c] * e[c][mu]);
            }
        }
    }
    let mut worst = T::zero();
    for a in 0..4 {
        let mut tc = [[T::zero(); 4]; 4];
        for mu in 0..4 {
            for nu in 0..4 {
                let mut t = fj.de[mu][a][nu].val - fj.de[nu][a][mu].val;
                for b in 0..4 {
                    t = t + wc[a][b][mu] * e[b][nu] - wc[a][b][nu] * e[b][mu];
                }
                tc[mu][nu] = t;
            }
        }
        for c in 0..4 {
            for d in c + 1..4 {
                let mut s = T::zero();
                for mu in 0..4 {
                    for nu in 0..4 {
                        s = s + tc[mu][nu] * inv[mu][c] * inv[nu][d];
                    }
                }
                worst = worst.max(s.abs());
            }
        }
    }
    Ok(worst)
}

/// Spin connection with first derivatives, plus the frame data it came from.
#[derive(Debug, Clone)]
pub struct ConnectionJets<T> {
    pub frame: FrameJets<T>,
    pub omega: Tensor3<Jet1<T>>,
}

pub fn connection_jets<T: Real, F: FrameField<T> + ?Sized>(frame: &F, x: &[T; 4]) -> Result<ConnectionJets<T>> {
    let fj = frame_jets(frame, x)?;
    let lam = anholonomy_of(&fj.de, &fj.inv);
    let omega = omega_from_anholonomy(&lam);
    Ok(ConnectionJets { frame: fj, omega })
}

impl<T: Real> ConnectionJets<T> {
    pub fn spin_connection(&self) -> SpinConnection<T> {
        SpinConnection { omega: self.omega.map(|m| m.map(|row| row.map(|v| v.val))) }
    }

    /// Frame components `(dα)_{cd}` of the exterior derivative of a 1-form
    /// given by its frame components `α_c` as jets.
    pub fn exterior_derivative(&self, alpha: &[Jet1<T>; 4]) -> [[T; 4]; 4] {
        let e = &self.frame.e;
        // coordinate components α_μ = α_c e^c_μ, as jets
        let coord: [Jet1<T>; 4] =
            std::array::from_fn(|mu| (0..4).fold(Jet1::constant(T::zero()), |s, c| s + alpha[c] * e[c][mu]));
        let inv = self.frame.inv_values();
        let mut d = [[T::zero(); 4]; 4];
        for c in 0..4 {
            for dd in c + 1..4 {
                let mut s = T::zero();
                for mu in 0..4 {
                    for nu in 0..4 {
                        if mu != nu {
                            s = s + (coord[nu].grad[mu] - coord[mu].grad[nu]) * inv[mu][c] * inv[nu][dd];
                        }
                    }
                }
                d[c][dd] = s;
                d[dd][c] = -s;
            }
        }
        d
    }
}
