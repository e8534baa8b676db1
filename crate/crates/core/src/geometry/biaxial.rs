use std::fmt;
use std::sync::Arc;

use super::{require_positive, Chart, FrameField};
use crate::error::{GeomError, Result};
use crate::jet::{univariate, Jet2};
use crate::linalg::Mat4;
use crate::scalar::{lit, Real, Scalar};

/// A radial profile function with two derivatives: `jet(r) = [φ, φ', φ'']`.
pub trait Profile<T: Real>: Send + Sync + fmt::Debug {
    fn jet(&self, r: T) -> [T; 3];
}

/// `amp · sin(rate · r)`.
#[derive(Debug, Clone, Copy)]
pub struct SineProfile<T> {
    pub amp: T,
    pub rate: T,
}

impl<T: Real> Profile<T> for SineProfile<T> {
    fn jet(&self, r: T) -> [T; 3] {
        let (s, c) = (self.rate * r).sin_cos();
        let k = self.rate;
        [self.amp * s, self.amp * k * c, -self.amp * k * k * s]
    }
}

/// A profile given as a map on jets, so derivatives come out of the
/// forward-mode engine.
pub struct JetProfile<T: Real> {
    label: String,
    map: Box<dyn Fn(Jet2<T>) -> Jet2<T> + Send + Sync>,
}

impl<T: Real> JetProfile<T> {
    pub fn new(label: impl Into<String>, map: impl Fn(Jet2<T>) -> Jet2<T> + Send + Sync + 'static) -> Self {
        Self { label: label.into(), map: Box::new(map) }
    }
}

impl<T: Real> fmt::Debug for JetProfile<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "JetProfile({})", self.label)
    }
}

impl<T: Real> Profile<T> for JetProfile<T> {
    fn jet(&self, r: T) -> [T; 3] {
        univariate(&self.map, r)
    }
}

/// The SU(2)×U(1)-invariant family
/// `{(f/2)dθ, (f/2)sinθ dφ, (g/2)(dψ + cosθ dφ), dr}` in coordinates
/// `(θ, φ, ψ, r)`, with `ψ ∈ [0, 4π]`.
#[derive(Debug, Clone)]
pub struct BiaxialS4<T: Real> {
    id: &'static str,
    f: Arc<dyn Profile<T>>,
    g: Arc<dyn Profile<T>>,
    params: Vec<(&'static str, T)>,
    chart: Chart<T>,
}

impl<T: Real> BiaxialS4<T> {
    /// Builds the family for profiles on `r ∈ (0, r_max)`. Both profiles must
    /// be positive on the interior; this is checked on a sample grid.
    pub fn new(f: Arc<dyn Profile<T>>, g: Arc<dyn Profile<T>>, r_max: T) -> Result<Self> {
        require_positive("r_max", r_max)?;
        const SAMPLES: usize = 64;
        for k in 1..SAMPLES {
            let r = r_max * T::from_usize(k).unwrap() / T::from_usize(SAMPLES).unwrap();
            for (name, p) in [("f", &f), ("g", &g)] {
                let v = p.jet(r)[0];
                if !(v > T::zero() && v.is_finite()) {
                    return Err(GeomError::ParameterDomain(format!(
                        "profile {name} must be positive on the interior, {name}({r}) = {v}"
                    )));
                }
            }
        }
        let pi = T::PI();
        let chart = Chart {
            coord_names: ["theta", "phi", "psi", "r"],
            lower: [T::zero(); 4],
            upper: [pi, pi + pi, lit::<T>(4.0) * pi, r_max],
            periodic: [false, true, true, false],
            cyclic: [false, true, true, false],
            singular_loci: "theta = 0, pi; r = 0, r_max",
        };
        Ok(Self { id: "biaxial-s4", f, g, params: vec![("r_max", r_max)], chart })
    }

    pub(crate) fn labelled(mut self, id: &'static str, params: Vec<(&'static str, T)>) -> Self {
        self.id = id;
        self.params = params;
        self
    }

    /// `[f, f', f'']` and `[g, g', g'']` at `r`.
    pub fn profiles(&self, r: T) -> ([T; 3], [T; 3]) {
        (self.f.jet(r), self.g.jet(r))
    }
}

/// Round four-sphere of the given radius as a biaxial frame,
/// `f = g = radius · sin(r / radius)`.
pub fn round_s4<T: Real>(radius: T) -> Result<BiaxialS4<T>> {
    require_positive("radius", radius)?;
    let p: Arc<dyn Profile<T>> = Arc::new(SineProfile { amp: radius, rate: radius.recip() });
    Ok(BiaxialS4::new(p.clone(), p, T::PI() * radius)?.labelled("round-s4", vec![("radius", radius)]))
}

impl<T: Real> FrameField<T> for BiaxialS4<T> {
    fn id(&self) -> &'static str {
        self.id
    }

    fn chart(&self) -> &Chart<T> {
        &self.chart
    }

    fn params(&self) -> Vec<(&'static str, T)> {
        self.params.clone()
    }

    fn coframe<S: Scalar<T>>(&self, x: &[S; 4]) -> Mat4<S> {
        let [theta, _, _, r] = *x;
        let [f0, f1, f2] = self.f.jet(r.value());
        let [g0, g1, g2] = self.g.jet(r.value());
        let half = lit::<T>(0.5);
        let fh = r.chain(f0, f1, f2).scale(half);
        let gh = r.chain(g0, g1, g2).scale(half);
        let z = S::zero();
        [[fh, z, z, z], [z, fh * theta.sin(), z, z], [z, gh * theta.cos(), gh, z], [z, z, z, S::cst(T::one())]]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn sine_profile_derivatives() {
        let p = SineProfile { amp: 2.0, rate: 0.5 };
        let j = JetProfile::new("2 sin(r/2)", |r: Jet2<f64>| Scalar::sin(r.scale(0.5)).scale(2.0));
        for r in [0.3, 1.0, 2.5] {
            let a = p.jet(r);
            let b = j.jet(r);
            for k in 0..3 {
                assert_relative_eq!(a[k], b[k], epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn nonpositive_profile_is_rejected() {
        let f: Arc<dyn Profile<f64>> = Arc::new(SineProfile { amp: 1.0, rate: 1.0 });
        let g: Arc<dyn Profile<f64>> = Arc::new(SineProfile { amp: 1.0, rate: 2.0 });
        assert!(matches!(BiaxialS4::new(f, g, std::f64::consts::PI), Err(GeomError::ParameterDomain(_))));
        assert!(round_s4(-1.0f64).is_err());
    }

    #[test]
    fn round_volume_density() {
        let g = round_s4(1.0f64).unwrap();
        let x = [0.7, 0.1, 0.2, 1.3];
        let d = g.volume_density(&x).unwrap();
        let s = 1.3f64.sin();
        assert_relative_eq!(d, s.powi(3) * 0.7f64.sin() / 8.0, epsilon = 1e-15);
    }
}
