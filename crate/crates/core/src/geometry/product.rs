use super::{require_positive, Chart, FrameField};
use crate::error::Result;
use crate::linalg::Mat4;
use crate::scalar::{Real, Scalar};

/// Product of round two-spheres of radii `r1`, `r2`, in coordinates
/// `(θ₁, φ₁, θ₂, φ₂)`.
#[derive(Debug, Clone)]
pub struct S2xS2<T> {
    pub r1: T,
    pub r2: T,
    chart: Chart<T>,
}

impl<T: Real> S2xS2<T> {
    pub fn new(r1: T, r2: T) -> Result<Self> {
        require_positive("r1", r1)?;
        require_positive("r2", r2)?;
        let pi = T::PI();
        let chart = Chart {
            coord_names: ["theta1", "phi1", "theta2", "phi2"],
            lower: [T::zero(); 4],
            upper: [pi, pi + pi, pi, pi + pi],
            periodic: [false, true, false, true],
            cyclic: [false, true, false, true],
            singular_loci: "theta1 = 0, pi; theta2 = 0, pi",
        };
        Ok(Self { r1, r2, chart })
    }
}

impl<T: Real> FrameField<T> for S2xS2<T> {
    fn id(&self) -> &'static str {
        "s2xs2"
    }

    fn chart(&self) -> &Chart<T> {
        &self.chart
    }

    fn params(&self) -> Vec<(&'static str, T)> {
        vec![("r1", self.r1), ("r2", self.r2)]
    }

    fn coframe<S: Scalar<T>>(&self, x: &[S; 4]) -> Mat4<S> {
        let z = S::zero();
        [
            [S::cst(self.r1), z, z, z],
            [z, x[0].sin().scale(self.r1), z, z],
            [z, z, S::cst(self.r2), z],
            [z, z, z, x[2].sin().scale(self.r2)],
        ]
    }
}
