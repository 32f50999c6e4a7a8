use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("point lies on the excluded pole of the {0} chart")]
    Pole(&'static str),
    #[error("point is not on the unit sphere (|norm - 1| = {0:.3e})")]
    NotOnSphere(f64),
    #[error("loop passes through the chart hole of the {0} section")]
    ChartHole(&'static str),
    #[error("quaternion sample vanished, cannot normalise")]
    ZeroQuaternion,
    #[error("quaternion is not a unit (norm {0})")]
    NonUnit(f64),
    #[error("sample count {0} is not a power of two >= 8")]
    SampleCount(usize),

    #[error("subspace is not Lagrangian (overlap with its conjugate {0:.3e})")]
    NotLagrangian(f64),
    #[error("loop band leaks {leakage:.3e} of Fourier mass outside the cutoff")]
    BandTooWide { leakage: f64 },
    #[error("C_g is singular (smallest singular value {0:.3e})")]
    SingularC(f64),
    #[error("unitary structures too far apart (|K - J| = {0:.6})")]
    TooFar(f64),
    #[error("operator is not orthogonal (defect {0:.3e})")]
    NonOrthogonal(f64),
    #[error("operator is not in Sym(Σ(L)) (defect {0:.3e})")]
    NotSym(f64),
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("intertwining residual {0:.3e} exceeds tolerance")]
    NonConverged(f64),
    #[error("intertwiner solution space has dimension {0}, expected 1")]
    DegenerateSolution(usize),
    #[error("Lagrangian frames do not live in orthogonal mode blocks")]
    NonOrthogonalBlocks,

    #[error("torsor tag mismatch: {0} vs {1}")]
    TagMismatch(String, String),
    #[error("cover nerve lacks tuple {0:?}")]
    NerveIncomplete(Vec<i64>),
    #[error("cover index {0} is reserved for suspension caps")]
    ReservedIndex(i64),
    #[error("section on {0:?} is not inverse to its reversal (defect {1:.3e})")]
    InverseConvention((i64, i64), f64),
    #[error("sample grids do not align: {0}")]
    GridMismatch(String),
    #[error("cocycle support cannot be handled by the suspension chase: {0}")]
    SupportShape(String),
    #[error("phase step {0:.3} rad between adjacent samples, refine the grid")]
    Refine(f64),
    #[error("C_g singular at {} grid point(s)", .0.len())]
    DegeneratePoint(Vec<usize>),

    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
