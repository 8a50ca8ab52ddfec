use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate subsystem label `{0}`")]
    DuplicateLabel(String),

    #[error("subsystem `{label}` has dimension {dim}; at least 2 levels are required")]
    DimensionTooSmall { label: String, dim: usize },

    #[error("ladder dimension {0} is below 2")]
    LadderDimension(usize),

    #[error("unknown subsystem label `{0}`")]
    UnknownLabel(String),

    #[error("operator for `{label}` is {got}x{got} but the subsystem has {expected} levels")]
    LocalDimension { label: String, expected: usize, got: usize },

    #[error("matrix is {rows}x{cols}, expected {expected}x{expected}")]
    MatrixShape { rows: usize, cols: usize, expected: usize },

    #[error("operands live on different Hilbert spaces")]
    SpaceMismatch,

    #[error("subsystem `{label}` appears with dimensions {a} and {b}")]
    IncompatibleSubsystem { label: String, a: usize, b: usize },

    #[error("target space lacks subsystem `{0}`")]
    MissingSubsystem(String),

    #[error("excitation number {requested} exceeds the maximum {max} of this space")]
    ExcitationOutOfRange { requested: usize, max: usize },

    #[error("{what} is not Hermitian (max |M - M^dag| = {deviation:.3e})")]
    NotHermitian { what: &'static str, deviation: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("port count mismatch: {0} vs {1}")]
    PortMismatch(usize, usize),

    #[error("scattering matrix is not unitary (deviation {0:.3e})")]
    NotUnitary(f64),

    #[error("scattering matrix is {rows}x{cols} but there are {ports} coupling operators")]
    ScatteringShape { rows: usize, cols: usize, ports: usize },

    #[error("bare Hamiltonian of `{0}` would be included twice")]
    HamiltonianDoubleCounted(String),

    #[error("negative rate {0}")]
    NegativeRate(f64),

    #[error("Hilbert space dimension {dim} exceeds the dense-solver capacity of {max}")]
    Capacity { dim: usize, max: usize },

    #[error(
        "integration failed at t = {t:.6} ns ({reason}); the problem looks stiff, \
         use the spectral T1 path (slowest_decay_mode / t1_spectral) instead"
    )]
    Stiff { t: f64, reason: String },

    #[error("time grid must be non-empty, finite and non-decreasing")]
    TimeGrid,

    #[error("stationary manifold is degenerate: {multiplicity} zero eigenvalues")]
    DegenerateSteadyState { multiplicity: usize },

    #[error("no decay mode overlaps the observable")]
    NoDecayMode,

    #[error("eigenvector selection is ambiguous (overlaps {0:.6} and {1:.6})")]
    AmbiguousMode(f64, f64),

    #[error("triplet is not excitation conserving: {0}")]
    NotExcitationConserving(String),

    #[error("fit failed: {0}")]
    Fit(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("linear algebra failure: {0}")]
    Numerical(String),
}
