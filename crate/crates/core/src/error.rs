use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("x0 = {x0} lies outside the profile domain {domain}")]
    Domain { x0: f64, domain: String },

    #[error("point has |x|^2 = 0: the chart origin has no image in the other pole chart")]
    SingularPoint,

    #[error("chart/profile mismatch: {0}")]
    ChartProfileMismatch(String),

    #[error("finite-difference step {h} exceeds the maximum {max}")]
    StepTooLarge { h: f64, max: f64 },

    #[error("rank is unstable: singular value {sigma:e} lies within a factor of 10 of the threshold {threshold:e}")]
    RankUnstable { sigma: f64, threshold: f64 },

    #[error("path leaves the chart domain at tau = {tau}")]
    ChartExit { tau: f64 },

    #[error("the zero combination has no causal character")]
    ZeroField,

    #[error("no non-timelike witness found for trial {trial} (smallest g(X,X) = {best:e})")]
    WitnessNotFound { trial: usize, best: f64 },

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
