use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter {name}: {value} (must be finite and strictly positive)")]
    InvalidParameter { name: &'static str, value: f64 },

    #[error("invalid mode (k = {k}, xi = {xi}): k must be nonzero and xi finite")]
    InvalidMode { k: i32, xi: f64 },

    #[error("invalid time grid: {0}")]
    InvalidTimeGrid(String),

    #[error("step size underflow for mode (k = {k}, xi = {xi}) at t = {t}: dt = {dt:e}")]
    StepSizeUnderflow { k: i32, xi: f64, t: f64, dt: f64 },

    #[error("unknown initial profile '{0}'")]
    UnknownProfile(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("no trajectory for mode (k = {k}, xi = {xi}) at t = {t}")]
    MissingMode { k: i32, xi: f64, t: f64 },

    #[error("series too short: t_max = {t_max} < {required}")]
    SeriesTooShort { t_max: f64, required: f64 },

    #[error("degenerate data: lower-bound functional norm {norm:e} at t = {t}")]
    DegenerateData { t: f64, norm: f64 },

    #[error("config error: {0}")]
    ConfigParse(String),

    #[error("unknown sweep axis '{0}'")]
    UnknownAxis(String),

    #[error("i/o failure on {path}: {source}")]
    IoFailure {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("serialization failure: {0}")]
    Serialization(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
