use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input violates a precondition (non-positive density, c_v <= 1/2, wrong ordering, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// The two rarefaction branches cannot meet at positive pressure.
    #[error("vacuum: velocity gap {gap} exceeds the rarefaction bound {bound}")]
    Vacuum { gap: f64, bound: f64 },

    /// A search exhausted its ladder. Not a proof of nonexistence.
    #[error("not found: {0}")]
    NotFound(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
