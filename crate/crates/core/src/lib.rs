//! Numerical laboratory for four-dimensional Riemannian geometry in the
//! SU(2)₊ × SU(2)₋ gauge-theory picture.
//!
//! Everything is generic over the floating point type; the aliases below fix
//! it to `f64`, with `f32` variants for the main geometry types.

pub mod algebra;
pub mod connection;
pub mod curvature;
pub mod deformation;
pub mod error;
pub mod geometry;
pub mod invariants;
pub mod jet;
pub mod linalg;
pub mod quadrature;
pub mod scalar;
pub mod shooting;

pub use error::{GeomError, Result};
pub use quadrature::QuadratureSpec;
pub use scalar::{Real, Scalar};

pub type Geometry = geometry::Geometry<f64>;
pub type Geometry32 = geometry::Geometry<f32>;
pub type Biaxial = geometry::BiaxialS4<f64>;
pub type Ellipsoid = geometry::EllipsoidS4<f64>;
pub type Ellipsoid32 = geometry::EllipsoidS4<f32>;
pub type Page = geometry::PageSpace<f64>;
pub type Page32 = geometry::PageSpace<f32>;
pub type Product = geometry::S2xS2<f64>;
pub type Chart = geometry::Chart<f64>;
pub type Coeffs = curvature::CurvatureCoeffs<f64>;
pub type PointCurvature = curvature::PointCurvature<f64>;
pub type TopoReport = invariants::TopoReport<f64>;
pub type SpectralData = invariants::SpectralData<f64>;
pub type Deformation = deformation::LinearDeformation<f64>;
pub type RigidityReport = deformation::RigidityReport<f64>;
pub type ShootingProblem = shooting::ShootingProblem<f64>;
pub type ShootResult = shooting::ShootResult<f64>;
