use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("ply parse error: {0}")]
    PlyParse(String),

    #[error("object appears static; check eps_static_factor")]
    ObjectStatic,

    #[error("degenerate revolute joint: rotation angle below 1e-6 rad")]
    DegenerateRevolute,

    #[error("degenerate prismatic joint: translation magnitude below 1e-9")]
    DegeneratePrismatic,

    #[error("non-finite gradient in parameter group `{0}`")]
    NonFiniteGradient(&'static str),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("image error: {0}")]
    Image(#[from] image::ImageError),
}

pub type Result<T> = std::result::Result<T, Error>;
