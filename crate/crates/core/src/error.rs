use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} must be {requirement}, got {value}")]
    Domain {
        name: &'static str,
        requirement: &'static str,
        value: f64,
    },

    #[error("singular configuration: {0}")]
    Singular(&'static str),

    #[error("efficiency formula has a pole at ratio {pole}")]
    Pole { pole: f64 },

    #[error("cycle does not operate as an engine: {0}")]
    NonEngine(&'static str),

    #[error("figure of merit has no interior maximum (stationary point at t = {t})")]
    NoInteriorOptimum { t: f64 },

    #[error("no sign change on [{lo}, {hi}] (f_lo = {f_lo}, f_hi = {f_hi})")]
    NoSignChange { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("function is not unimodal on the bracket: sample at {at} beats the located optimum")]
    NotUnimodal { at: f64 },
}

impl Error {
    pub(crate) fn domain(name: &'static str, requirement: &'static str, value: f64) -> Self {
        Error::Domain {
            name,
            requirement,
            value,
        }
    }
}
