use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter or state fell outside its documented domain.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unknown preparation setting `{0}` (expected one of 0_Z, 1_Z, 0_X)")]
    UnknownSetting(String),

    /// The reference set produces a virtual state with zero weight.
    #[error("degenerate reference set: {0}")]
    Degenerate(String),

    #[error("reference matrix S is ill-conditioned (cond = {cond:.3e}, ceiling {ceiling:.1e})")]
    IllConditioned { cond: f64, ceiling: f64 },

    #[error("no signal: {0}")]
    NoSignal(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Short stable tag used in machine-readable error summaries.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "invalid_input",
            Error::UnknownSetting(_) => "unknown_setting",
            Error::Degenerate(_) => "degenerate",
            Error::IllConditioned { .. } => "ill_conditioned",
            Error::NoSignal(_) => "no_signal",
            Error::Config(_) => "config",
            Error::Io(_) => "io",
        }
    }
}

pub(crate) fn check_unit(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{name} = {v} is outside [0, 1]")))
    }
}
