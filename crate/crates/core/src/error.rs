use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the simulator can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |M - M^dagger| = {0:e})")]
    NonHermitianInput(f64),

    #[error("Jacobi eigensolver did not converge within {0} sweeps")]
    NoConvergence(usize),

    #[error("matrix is not positive semidefinite (smallest eigenvalue {0:e})")]
    NotPositiveSemidefinite(f64),

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("X-state parameters lie outside the physical region (smallest eigenvalue {0:e})")]
    InvalidXState(f64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("emitter separation must be positive, got zeta = {0}")]
    InvalidSeparation(f64),

    #[error("degenerate case: {0}")]
    DegenerateCase(String),

    #[error("closed form is singular for |gamma| = Gamma; integrate the master equation instead")]
    DegenerateRates,

    #[error("state lies outside the solution family: {0}")]
    FamilyViolation(String),

    #[error("positivity lost at t = {time}: smallest eigenvalue {min_eigenvalue:e}")]
    PositivityLost { time: f64, min_eigenvalue: f64 },

    #[error("invalid time grid: {0}")]
    InvalidTimeGrid(String),

    #[error("closed form and integrator disagree by {deviation:e} at t = {time}")]
    VerificationFailed { time: f64, deviation: f64 },

    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error("no records to write")]
    EmptyRecords,

    #[error("I/O error on {path}: {message}")]
    Io { path: String, message: String },

    #[error("scenario `{scenario}`: {source}")]
    Scenario {
        scenario: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            message: message.into(),
        }
    }

    pub fn io(path: impl AsRef<std::path::Path>, err: &std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            message: err.to_string(),
        }
    }

    pub(crate) fn in_scenario(self, scenario: &str) -> Self {
        match self {
            e @ Error::Scenario { .. } => e,
            e => Error::Scenario {
                scenario: scenario.to_string(),
                source: Box::new(e),
            },
        }
    }

    /// Process exit code: 2 for I/O failures, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } => 2,
            Error::Scenario { source, .. } => source.exit_code(),
            _ => 1,
        }
    }
}
