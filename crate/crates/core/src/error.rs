use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed model: {0}")]
    MalformedModel(String),
    #[error("unsupported model: {0}")]
    UnsupportedModel(String),
    #[error("invalid descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("no cohomology oracle: {0}")]
    NoOracle(String),
    #[error("degree-0 twist of {0} needs an explicit triviality flag")]
    UnknownSlopeZero(String),
    #[error("spinor tables are available for quadrics of dimension 2 and 3, not {0}")]
    UnsupportedQuadricDim(u32),
    #[error("numerical class is not determined: {0}")]
    Indeterminate(String),
    #[error("degenerate linear system")]
    DegenerateSystem,
    #[error("model mismatch: {0} vs {1}")]
    ModelMismatch(String, String),
    #[error("incomplete table: {0}")]
    IncompleteTable(String),
    #[error("unsupported product: {0}")]
    UnsupportedProduct(String),
    #[error("no restriction rule for {0}")]
    NoRestrictionRule(String),
    #[error("dimension mismatch: source has dimension {source_dim}, target {target_dim}")]
    DimensionMismatch { source_dim: u32, target_dim: u32 },
    #[error("direct and sheafwise Ulrich verdicts disagree (direct: {direct}, sheafwise: {sheafwise})")]
    ModeDisagreement { direct: bool, sheafwise: bool },
    #[error("object is not Ulrich: {0}")]
    NotUlrich(String),
    #[error("h^{degree} = {dim} is not divisible by {unit}")]
    NonDivisibleRank { degree: i64, dim: u64, unit: u64 },
    #[error("no dual rule for {0}")]
    NoDualRule(String),
    #[error("Ext^{0} vanishes, no Yoneda extension exists")]
    ZeroExt(u32),
    #[error("Yoneda input is not an Ulrich sheaf: {0}")]
    NotUlrichInput(String),
    #[error("a degree-1 extension is a sheaf, build its descriptor instead")]
    DegenerateYoneda,
    #[error("rank of the numerical Grothendieck group is unknown for {0}")]
    UnknownK0Rank(String),
    #[error("t must be positive")]
    NonpositiveT,
    #[error("unknown slope convention {0:?}")]
    MissingConvention(String),
    #[error("no slope for {0}")]
    NoSlope(String),
    #[error("empty grid")]
    EmptyGrid,
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Errors caused by asking for something outside the modelled scope.
    pub fn is_unsupported(&self) -> bool {
        matches!(
            self,
            Error::UnsupportedModel(_)
                | Error::UnsupportedQuadricDim(_)
                | Error::NoOracle(_)
                | Error::UnsupportedProduct(_)
                | Error::NoRestrictionRule(_)
                | Error::NoDualRule(_)
                | Error::UnknownK0Rank(_)
        )
    }
}
