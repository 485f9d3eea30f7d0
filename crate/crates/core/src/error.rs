use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("precision of {digits} digits is below the minimum of {minimum}")]
    Precision { digits: u32, minimum: u32 },

    #[error("angle {0} is outside (0, pi/2]")]
    AngleOutOfDomain(String),

    #[error("could not parse {what}: {reason}")]
    Parse { what: &'static str, reason: String },

    #[error("duplicate link name `{0}` in catalog")]
    DuplicateName(String),

    #[error("invalid link `{name}`: {reason}")]
    InvalidLink { name: String, reason: String },

    #[error("invalid volume: {0}")]
    InvalidVolume(String),

    #[error("no link named `{0}` in catalog")]
    UnknownLink(String),

    #[error("invalid recipe: {0}")]
    InvalidRecipe(String),

    #[error("augmentation count {0} is below the minimum of 2")]
    TooFewAugmentations(u64),

    #[error("{0} must be at least 1")]
    NonPositive(&'static str),

    #[error("base links have equal modified density; no interpolation is possible")]
    DegeneratePair,

    #[error("target {target} lies outside [{lower}, {upper}]")]
    TargetOutOfRange {
        target: String,
        lower: String,
        upper: String,
    },

    #[error("alpha {0} is an endpoint; use a pure self-sum instead of a ratio")]
    EndpointAlpha(String),

    #[error("tolerance must be positive, got {0}")]
    NonPositiveTolerance(String),

    #[error("no convergent reached the tolerance with denominator at most {cap}")]
    DenominatorCapExceeded { cap: u64 },

    #[error("density {0} is below v_oct, outside the spectrum")]
    BelowSpectrum(String),

    #[error("density {0} is at or above 2*v_oct; no finite certificate exists in the dense window")]
    NoFiniteCertificate(String),

    #[error("scan would emit about {estimate} rows, more than the cap of {cap}")]
    ScanTooLarge { estimate: u128, cap: u128 },

    #[error("could not decide the sign of {0} up to {1} digits")]
    Undecided(String, u32),

    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
