use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input: bad vertex ids, overlapping sets, invalid divisions, parse failures.
    #[error("input error: {0}")]
    Input(String),

    /// An exact oracle was asked to run beyond its configured cap.
    /// The oracles never silently approximate.
    #[error("oracle cap exceeded: {oracle} requires {required} but cap is {cap}")]
    OracleCap {
        oracle: &'static str,
        required: usize,
        cap: usize,
    },

    /// A caller promised a structural property (e.g. cograph input) that does not hold.
    #[error("promise violated: {0}")]
    PromiseViolated(String),

    /// An internal invariant of the coloring engine failed. Always a bug, never silent.
    #[error("engine bug: {0}")]
    EngineBug(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
}
