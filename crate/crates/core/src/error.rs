use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("lot index {index} out of range for a network with {n_lots} lots")]
    LotOutOfRange { index: usize, n_lots: usize },

    #[error("the origin (lot 0) is not a valid action target")]
    OriginTarget,

    #[error("probability for {what} is {value}, model requires p in (0, 1]")]
    InvalidProbability { what: String, value: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid network: {0}")]
    InvalidNetwork(String),

    #[error("empty trajectory has no time-to-arrive")]
    EmptyTrajectory,

    #[error("trace for lot {lot} exhausted at minute {clock:.3} (span is [{start:.3}, {end:.3}])")]
    TraceExhausted {
        lot: usize,
        clock: f64,
        start: f64,
        end: f64,
    },

    #[error("episode did not terminate within {attempts} attempts")]
    EpisodeLimit { attempts: usize },

    #[error("value iteration did not converge within {sweeps} sweeps (last change {delta:e})")]
    NotConverged { sweeps: usize, delta: f64 },

    #[error("missing data files: {0}")]
    MissingData(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Toml(#[from] toml::de::Error),
}

pub(crate) fn check_probability(what: impl Into<String>, value: f64) -> Result<f64> {
    if value > 0.0 && value <= 1.0 {
        Ok(value)
    } else {
        Err(Error::InvalidProbability {
            what: what.into(),
            value,
        })
    }
}
