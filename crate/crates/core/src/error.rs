use thiserror::Error;

/// Errors surfaced by the exact-algebra, Groebner, and scene layers.
///
/// Variants are grouped by how the CLI maps them to exit codes:
/// input/shape problems (exit 3) and resource caps (exit 4).
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    // -- input / shape problems --
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid field spec: {0}")]
    InvalidField(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("integer matrix is not unimodular (det {0})")]
    NotUnimodular(String),
    #[error("group generators mix kinds or dimensions: {0}")]
    MixedKind(String),
    #[error("scene has no component list and no irreducible flag")]
    MissingComponents,
    #[error("candidate is not invariant: {0}")]
    NotInvariant(String),
    #[error("scene field is not finite: {0}")]
    NonFiniteField(String),
    #[error("unsupported field extension: {0}")]
    UnsupportedExtension(String),
    #[error("action is not linear: {0}")]
    NonLinearAction(String),
    #[error("modular characteristic: field characteristic divides the group order {0}")]
    ModularCharacteristic(u64),
    #[error("missing hypothesis flags: {0}")]
    HypothesisMissing(String),
    #[error("degree bound exceeded: {0}")]
    DegreeBound(String),

    // -- resource caps --
    #[error("group closure cap exceeded ({0} elements)")]
    ClosureCap(usize),
    #[error("Groebner resource cap: {0}")]
    GroebnerCap(String),
    #[error("point enumeration cap: {0}")]
    EnumerationCap(String),
}

impl Error {
    /// True for the variants that signal a configured resource cap rather
    /// than malformed input.
    pub fn is_resource_cap(&self) -> bool {
        matches!(
            self,
            Error::ClosureCap(_) | Error::GroebnerCap(_) | Error::EnumerationCap(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
