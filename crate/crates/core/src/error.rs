use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("not a density matrix: {0}")]
    InvalidState(String),

    #[error("Bloch vector does not describe a positive state (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("cannot factor dimension {dim} as {left}x{right}")]
    BadFactorization { dim: usize, left: usize, right: usize },

    #[error("both amplitudes vanish")]
    ZeroAmplitudes,

    #[error("{name} is not a unit vector (|n| = {norm})")]
    NotUnit { name: &'static str, norm: f64 },

    #[error("polarization length {0} exceeds 1")]
    PolarizationTooLong(f64),

    #[error("parameter {name} = {value} out of range")]
    OutOfRange { name: &'static str, value: f64 },

    #[error("sign of gamma ({stored}) contradicts cos(phi) for phi = {phi}")]
    GammaSignMismatch { stored: i8, phi: f64 },

    #[error("need at least {needed} events, got {got}")]
    TooFewEvents { needed: usize, got: usize },

    #[error("event {event_id}: {reason}")]
    EventMismatch { event_id: u64, reason: String },

    #[error("asymmetry product is zero; cannot renormalize correlations")]
    ZeroAsymmetry,

    #[error("settings do not match inequality {name}: expected {expected_a}+{expected_b}, got {got_a}+{got_b}")]
    SettingsMismatch {
        name: String,
        expected_a: usize,
        expected_b: usize,
        got_a: usize,
        got_b: usize,
    },

    #[error("no sign change of the maximal value on [0, 1]")]
    NoThreshold,

    #[error("event count must be at least 1")]
    NoEvents,

    #[error("{path}: line {line}, column {column}: {message}")]
    Parse {
        path: String,
        line: u64,
        column: usize,
        message: String,
    },

    #[error("{path}: row {row}, field `{field}`: {message}")]
    Invalid {
        path: String,
        row: u64,
        field: &'static str,
        message: String,
    },

    #[error("{path}: line {line}: malformed event ({message}); last good event id: {}", last_good_label(.last_good))]
    MalformedEvent {
        path: String,
        line: u64,
        last_good: Option<u64>,
        message: String,
    },

    #[error("unknown channel `{0}`")]
    UnknownChannel(String),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

fn last_good_label(id: &Option<u64>) -> String {
    id.map_or_else(|| "none".to_string(), |i| i.to_string())
}
