use thiserror::Error;

/// Errors raised by the geometry engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("degenerate subspace: {0}")]
    DegenerateSubspace(String),

    #[error("basis vectors are linearly dependent (rank {rank} < {count})")]
    LinearlyDependent { rank: usize, count: usize },

    #[error("structure axiom {axiom} fails: residual {residual:e}")]
    StructureAxiomFailure { axiom: u8, residual: f64 },

    #[error("point is off the manifold: constraint residual {residual:e}")]
    PointOffManifold { residual: f64 },

    #[error("frame construction failed: {0}")]
    FrameConstructionFailure(String),

    #[error("induced metric is degenerate (|det g| = {det:e})")]
    DegenerateInducedMetric { det: f64 },

    #[error("jacobian has rank {rank}, expected {expected}")]
    RankDeficientJacobian { rank: usize, expected: usize },

    #[error("field is not normal: tangential part {residual:e}")]
    NotNormal { residual: f64 },

    #[error("plane spanned by tangent directions {i} and {j} is degenerate")]
    DegeneratePlane { i: usize, j: usize },

    #[error("coordinate plane is not invariant under the para-hypercomplex structure: {0}")]
    PlaneNotInvariant(String),

    #[error("subspace is not totally real: {0}")]
    SubspaceNotTotallyReal(String),

    #[error("no non-null direction found in the distribution after {attempts} samples")]
    NullDirection { attempts: usize },

    #[error("unknown check id `{0}`")]
    UnknownCheckId(String),

    #[error("unknown example id `{0}`")]
    UnknownExample(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
