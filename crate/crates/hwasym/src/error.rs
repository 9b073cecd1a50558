use thiserror::Error;

/// Errors reported by the numerical routines.
#[derive(Error, Debug, Clone)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("quadrature did not converge: achieved {achieved:.3e}, requested {requested:.3e}")]
    Quadrature { achieved: f64, requested: f64 },

    #[error("no sign change on bracket [{a}, {b}]: {what}")]
    Bracket { a: f64, b: f64, what: String },

    #[error("too close to a pole: nearest is {nearest}")]
    NearPole { nearest: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("oscillatory integral not resolvable: {0}")]
    Oscillatory(String),

    #[error("root count mismatch: expected {expected}, found {found} ({where_})")]
    RootCount {
        expected: usize,
        found: usize,
        where_: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
