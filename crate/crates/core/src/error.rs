use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("parameter out of domain: {0}")]
    ParameterDomain(String),
    #[error("point {point:?} is outside the open chart ({reason})")]
    OutsideChart { point: [f64; 4], reason: String },
    #[error("degenerate frame at {point:?} (det = {det:e})")]
    DegenerateFrame { point: [f64; 4], det: f64 },
    #[error("non-finite value at quadrature node {node:?}")]
    NumericFailure { node: [f64; 4] },
    #[error("contract violated: {0}")]
    Contract(String),
    #[error("argument outside the open domain: {0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, GeomError>;
