//! Catalog of four-geometries given as orthonormal coframes over a chart.
//!
//! Every geometry implements [`FrameField`]: `coframe(x)` returns the
//! vierbein `e^a_μ(x)` (row `a` = frame index, column `μ` = chart coordinate)
//! and is generic over [`Scalar`], so the same code yields values and
//! derivatives. Coordinates are ordered so that `det e^a_μ > 0`.

mod biaxial;
mod ellipsoid;
mod page;
mod product;

use std::fmt::Debug;

use serde::Serialize;

pub use biaxial::{round_s4, BiaxialS4, JetProfile, Profile, SineProfile};
pub use ellipsoid::{EllipsoidCoeffs, EllipsoidS4};
pub use page::{page_nu, page_quartic, PageClosedForm, PageParams, PageSpace, PAGE_PSI_PERIOD};
pub use product::S2xS2;

use crate::error::{GeomError, Result};
use crate::linalg::{invert4, Mat4};
use crate::scalar::{Real, Scalar};

/// Coordinate chart of a catalog geometry.
#[derive(Debug, Clone, Serialize)]
pub struct Chart<T> {
    pub coord_names: [&'static str; 4],
    pub lower: [T; 4],
    pub upper: [T; 4],
    pub periodic: [bool; 4],
    /// Coordinates the metric does not depend on (Killing directions).
    pub cyclic: [bool; 4],
    pub singular_loci: &'static str,
}

impl<T: Real> Chart<T> {
    pub fn axis(&self, name: &str) -> Option<usize> {
        self.coord_names.iter().position(|n| *n == name)
    }

    /// Rejects points outside the open coordinate box. Periodic coordinates
    /// are accepted anywhere.
    pub fn check_interior(&self, x: &[T; 4]) -> Result<()> {
        for k in 0..4 {
            if !x[k].is_finite() {
                return Err(self.outside(x, format!("{} is not finite", self.coord_names[k])));
            }
            if self.periodic[k] {
                continue;
            }
            if !(x[k] > self.lower[k] && x[k] < self.upper[k]) {
                return Err(self.outside(
                    x,
                    format!("{} must lie in ({}, {})", self.coord_names[k], self.lower[k], self.upper[k]),
                ));
            }
        }
        Ok(())
    }

    fn outside(&self, x: &[T; 4], reason: String) -> GeomError {
        GeomError::OutsideChart { point: x.map(|v| v.to_f64_lossy()), reason }
    }

    /// Maps fractions in `[0, 1]` of each coordinate range to a chart point.
    pub fn at_fraction(&self, u: &[T; 4]) -> [T; 4] {
        std::array::from_fn(|k| self.lower[k] + u[k] * (self.upper[k] - self.lower[k]))
    }
}

/// An orthonormal coframe `eᵃ = e^a_μ dx^μ` over a chart.
pub trait FrameField<T: Real>: Send + Sync {
    /// Catalog identifier, as used on the command line.
    fn id(&self) -> &'static str;

    fn chart(&self) -> &Chart<T>;

    /// Named parameters of the family.
    fn params(&self) -> Vec<(&'static str, T)>;

    /// Vierbein `e^a_μ` at `x`, without any domain checks.
    fn coframe<S: Scalar<T>>(&self, x: &[S; 4]) -> Mat4<S>;

    /// Vierbein at an interior point, with the orientation checked.
    fn vierbein(&self, x: &[T; 4]) -> Result<Mat4<T>> {
        self.chart().check_interior(x)?;
        let e = self.coframe(x);
        check_frame(x, &e)?;
        Ok(e)
    }

    /// Induced metric `g_{μν} = Σ_a e^a_μ e^a_ν`.
    fn metric(&self, x: &[T; 4]) -> Result<Mat4<T>> {
        let e = self.vierbein(x)?;
        Ok(induced_metric(&e))
    }

    /// Volume density `det e^a_μ`.
    fn volume_density(&self, x: &[T; 4]) -> Result<T> {
        let e = self.vierbein(x)?;
        Ok(invert4::<T, T>(&e).map(|(_, d)| d).unwrap_or(T::zero()))
    }
}

pub fn induced_metric<T: Real>(e: &Mat4<T>) -> Mat4<T> {
    let mut g = [[T::zero(); 4]; 4];
    for m in 0..4 {
        for n in 0..4 {
            g[m][n] = (0..4).fold(T::zero(), |s, a| s + e[a][m] * e[a][n]);
        }
    }
    g
}

/// A frame is usable when it is invertible and orientation preserving.
pub(crate) fn check_frame<T: Real>(x: &[T; 4], e: &Mat4<T>) -> Result<()> {
    let scale = e.iter().flatten().fold(T::zero(), |m, v| m.max(v.abs()));
    let det = invert4::<T, T>(e).map(|(_, d)| d).unwrap_or(T::zero());
    let floor = T::epsilon() * scale.powi(4) * T::from_f64(16.0).unwrap();
    if !det.is_finite() || det <= floor {
        return Err(GeomError::DegenerateFrame { point: x.map(|v| v.to_f64_lossy()), det: det.to_f64_lossy() });
    }
    Ok(())
}

pub(crate) fn require_positive<T: Real>(name: &str, v: T) -> Result<()> {
    if v > T::zero() && v.is_finite() {
        Ok(())
    } else {
        Err(GeomError::ParameterDomain(format!("{name} must be positive and finite, got {v}")))
    }
}

/// Closed set of catalog geometries, for callers that select by name.
#[derive(Debug, Clone)]
pub enum Geometry<T: Real> {
    Biaxial(BiaxialS4<T>),
    Ellipsoid(EllipsoidS4<T>),
    Page(PageSpace<T>),
    Product(S2xS2<T>),
}

macro_rules! dispatch {
    ($self:ident, $g:ident => $e:expr) => {
        match $self {
            Geometry::Biaxial($g) => $e,
            Geometry::Ellipsoid($g) => $e,
            Geometry::Page($g) => $e,
            Geometry::Product($g) => $e,
        }
    };
}

impl<T: Real> FrameField<T> for Geometry<T> {
    fn id(&self) -> &'static str {
        dispatch!(self, g => g.id())
    }
    fn chart(&self) -> &Chart<T> {
        dispatch!(self, g => g.chart())
    }
    fn params(&self) -> Vec<(&'static str, T)> {
        dispatch!(self, g => g.params())
    }
    fn coframe<S: Scalar<T>>(&self, x: &[S; 4]) -> Mat4<S> {
        dispatch!(self, g => g.coframe(x))
    }
}

impl<T: Real> From<BiaxialS4<T>> for Geometry<T> {
    fn from(g: BiaxialS4<T>) -> Self {
        Geometry::Biaxial(g)
    }
}
impl<T: Real> From<EllipsoidS4<T>> for Geometry<T> {
    fn from(g: EllipsoidS4<T>) -> Self {
        Geometry::Ellipsoid(g)
    }
}
impl<T: Real> From<PageSpace<T>> for Geometry<T> {
    fn from(g: PageSpace<T>) -> Self {
        Geometry::Page(g)
    }
}
impl<T: Real> From<S2xS2<T>> for Geometry<T> {
    fn from(g: S2xS2<T>) -> Self {
        Geometry::Product(g)
    }
}

/// A flat frame `e^a_μ = δ^a_μ` on a unit box, used as a baseline.
#[derive(Debug, Clone)]
pub struct FlatBox<T> {
    chart: Chart<T>,
    scale: T,
}

impl<T: Real> FlatBox<T> {
    pub fn new(scale: T) -> Self {
        let chart = Chart {
            coord_names: ["x1", "x2", "x3", "x4"],
            lower: [T::zero(); 4],
            upper: [T::one(); 4],
            periodic: [true; 4],
            cyclic: [true; 4],
            singular_loci: "none",
        };
        Self { chart, scale }
    }
}

impl<T: Real> FrameField<T> for FlatBox<T> {
    fn id(&self) -> &'static str {
        "flat"
    }
    fn chart(&self) -> &Chart<T> {
        &self.chart
    }
    fn params(&self) -> Vec<(&'static str, T)> {
        vec![("scale", self.scale)]
    }
    fn coframe<S: Scalar<T>>(&self, _x: &[S; 4]) -> Mat4<S> {
        std::array::from_fn(|a| std::array::from_fn(|m| if a == m { S::cst(self.scale) } else { S::zero() }))
    }
}
