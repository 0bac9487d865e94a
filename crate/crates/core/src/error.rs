use thiserror::Error;

/// Errors raised by the mesh, physics, simulator and collocation layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error(
        "cross-section area non-positive at node {node} (x = {x} m): area spread A_sigma = {a_sigma} \
         must exceed 1/sqrt(2*pi) ~ 0.3989"
    )]
    NonPositiveArea { a_sigma: f64, node: usize, x: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("Dirichlet condition only supported at boundary nodes (node {node} of {n_nodes})")]
    InteriorDirichlet { node: usize, n_nodes: usize },

    #[error("singular system: zero pivot at row {pivot}")]
    SingularSystem { pivot: usize },

    #[error("material severed near x = {x} m: degraded stiffness vanishes")]
    MaterialSevered { x: f64 },

    #[error("conductor electrically severed near x = {x} m: conductivity vanishes")]
    ConductorSevered { x: f64 },

    #[error("no convective cooling (zero wind): steady thermal system is singular")]
    NoCooling,

    #[error("non-physical temperature {theta} K: 1 + alpha*(theta - theta0) must be positive")]
    NonPhysicalTemperature { theta: f64 },

    #[error("unknown scenario id {0} (expected 1-4)")]
    UnknownScenario(u8),

    #[error(
        "sag-chain breakdown: conductor contracted taut at delta_theta = {delta_theta} K \
         (requires delta_theta > {bound} K)"
    )]
    SagChainBreakdown { delta_theta: f64, bound: f64 },

    #[error("unsupported unit conversion {from} -> {to}")]
    UnsupportedConversion { from: String, to: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("step {step} (t = {time} yr): {source}")]
    AtStep {
        step: usize,
        time: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("incomplete ensemble: expected {expected} realizations, found {found}")]
    IncompleteEnsemble { expected: usize, found: usize },

    #[error("realization {realization} has {len} time points, expected {expected}")]
    RaggedSeries {
        realization: usize,
        len: usize,
        expected: usize,
    },

    #[error("tensor grid with {dims} dimensions exceeds the supported maximum of {max}")]
    TooManyDimensions { dims: usize, max: usize },

    #[error("reference field has zero norm")]
    ZeroReferenceNorm,

    #[error("realization {index} ({point}): {source}")]
    InRealization {
        index: usize,
        point: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Wraps a solver error with time-step context.
    pub fn at_step(self, step: usize, time: f64) -> Self {
        Error::AtStep {
            step,
            time,
            source: Box::new(self),
        }
    }

    /// Innermost error, skipping step and realization context.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtStep { source, .. } | Error::InRealization { source, .. } => source.root(),
            e => e,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
