use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("coincident transmitter and receiver positions")]
    CoincidentPoints,

    #[error("empty ABS list")]
    EmptyAbsList,

    #[error("fly grid is empty: spacing {spacing} m exceeds the region extent")]
    EmptyFlyGrid { spacing: f64 },

    #[error("minimum rate {min_rate_bps} bit/s unachievable at altitude {altitude_m} m; lower the altitude or the minimum rate")]
    MinRateUnachievable { min_rate_bps: f64, altitude_m: f64 },

    #[error("instance too large for the exact oracle: {n} GTs (limit {limit})")]
    InstanceTooLarge { n: usize, limit: usize },

    #[error("GTs {0:?} are uncoverable from every allowed fly-grid point")]
    UncoverableGts(Vec<u32>),

    #[error("infeasible with up to {max_abs} ABSs")]
    Infeasible { max_abs: usize },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("malformed {what} file: {detail}")]
    Parse { what: String, detail: String },
}
