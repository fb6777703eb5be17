use thiserror::Error;

/// Errors raised by the library. Numeric payloads are carried as `f64`
/// regardless of the scalar type in use.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("non-finite input: {0}")]
    NonFinite(&'static str),

    #[error("vector is not a unit vector (norm {norm})")]
    NotUnit { norm: f64 },

    #[error("axes are not orthogonal (dot product {dot})")]
    NotOrthogonal { dot: f64 },

    #[error("direction set is not a spherical 2-design: {0}")]
    NotDesign(MomentDeficiency),

    #[error("need at least {required} quadrature nodes for order {order}, got {nodes}")]
    InsufficientNodes {
        order: usize,
        nodes: usize,
        required: usize,
    },

    #[error("seed (alpha={alpha}, gamma={gamma}) has a negative outcome density")]
    InadmissibleSeed { alpha: f64, gamma: f64 },

    #[error("matrix is not Hermitian (deviation {0})")]
    NotHermitian(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// How far a direction set is from satisfying the 2-design moment conditions.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentDeficiency {
    pub count: usize,
    /// Max-norm of the mean direction.
    pub first_moment: f64,
    /// Max-norm of `mean(n nᵀ) - I/3`.
    pub second_moment: f64,
    pub tolerance: f64,
}

impl std::fmt::Display for MomentDeficiency {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} directions, first-moment deviation {:.3e}, second-moment deviation {:.3e} (tolerance {:.1e})",
            self.count, self.first_moment, self.second_moment, self.tolerance
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
