use thiserror::Error;

/// Failures raised by the geometry kernels.
///
/// Numeric payloads are stored as `f64` whatever the scalar type of the
/// computation that produced them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("non-finite value at node {node} (abscissa {at})")]
    NonFinite { node: usize, at: f64 },

    #[error("frame undefined at singularity (latitude {latitude})")]
    Singularity { latitude: f64 },

    #[error("undersampled: angular step {gap} at index {index} exceeds {limit}")]
    Undersampled { index: usize, gap: f64, limit: f64 },

    #[error("stencil at index {index} leaves the sample grid of length {len}")]
    StencilOutOfRange { index: usize, len: usize },

    #[error("not a section image: third column off by {defect}")]
    NotSection { defect: f64 },

    #[error("coordinate singularity at ({x}, {y}): EG - F^2 = {det}")]
    CoordinateSingularity { x: f64, y: f64, det: f64 },

    #[error("not an angle-linear field: fit residual {residual}")]
    NotAngleLinear { residual: f64 },

    #[error("identification failed for k1={k1}, k2={k2}: base defect {p_defect}, vector defect {v_defect}")]
    Identification {
        k1: i64,
        k2: i64,
        p_defect: f64,
        v_defect: f64,
    },

    #[error("unmatched sample ({x}, {y}): nearest distance {distance}")]
    Unmatched { x: f64, y: f64, distance: f64 },

    #[error("wrong family: {0}")]
    Family(String),
}

pub type Result<T> = std::result::Result<T, Error>;
