use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("cannot parse scalar `{0}`")]
    Scalar(String),
    #[error("invalid document: {0}")]
    Document(String),
}

/// Errors from jet arithmetic and group actions.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("jet truncated at order {have} but order {need} requested")]
    OrderUnderflow { have: u32, need: u32 },
    #[error("linear part is singular")]
    SingularLinearPart,
    #[error("nonzero constant term in coordinate {0}")]
    NonzeroConstant(usize),
    #[error("invalid jet: {0}")]
    InvalidJet(String),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NormalFormError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("spectrum is not attracting: |λ_{index}| = {modulus} ≥ 1 or λ = 0")]
    NonAttracting { index: usize, modulus: String },
    #[error("germ does not satisfy f∘γ = γ^{k}∘f (residual {residual})")]
    NonCommuting { k: i64, residual: String },
    #[error("vanishing denominator at non-resonant monomial {monomial:?} of coordinate {coordinate}")]
    InconsistentResonance { coordinate: usize, monomial: Vec<u32> },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid Koenigs family: {0}")]
    InvalidFamily(String),
    #[error("gcd condition violated: {0}")]
    Gcd(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("invalid graph: {0}")]
    Invalid(String),
    #[error("graph is not connected")]
    NotConnected,
    #[error("vertex {0} not found")]
    UnknownVertex(i64),
    #[error("vertex {0} is not a smooth rational (-1)-curve")]
    NotExceptional(i64),
    #[error("contraction left the simple normal crossing class at vertex {0}")]
    SncExit(i64),
    #[error("configuration is not contractible: intersection form is not negative definite")]
    NotContractible,
    #[error("legs must consist of rational curves, vertex {0} has positive genus")]
    NonRationalLeg(i64),
    #[error("invalid cyclic quotient data: {0}")]
    CyclicQuotient(String),
    #[error("invalid continued fraction entry {0} (must be ≥ 2)")]
    ContinuedFraction(i64),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DynamicsError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("vanishing order must be ≥ 1")]
    BadVanishingOrder,
    #[error("hyperbolic matching broken at corner {0}: λ_j·μ_(j-1) ≠ 1")]
    MatchingViolated(usize),
    #[error("vanishing orders disagree between consecutive corners at {0}")]
    InconsistentOrders(usize),
    #[error("empty cycle")]
    EmptyCycle,
    #[error("graph is not a tree")]
    NotATree,
    #[error("vertex {0} is not the center but meets three or more components")]
    NonCenterBranch(i64),
    #[error("vertex {0} has two neighbors closer to the center")]
    NonUniqueParent(i64),
    #[error("annotated corner {edge:?} contradicts the propagated orientation: {reason}")]
    AnnotationMismatch { edge: [i64; 2], reason: String },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrbifoldError {
    #[error("multiplicity must be ≥ 1, got {0}")]
    BadMultiplicity(i64),
    #[error("bad orbifold has no smooth finite cover")]
    BadOrbifold,
    #[error("cover degree {degree} is not admissible: {reason}")]
    CoverDegree { degree: i64, reason: String },
    #[error("invalid orbibundle data: {0}")]
    Bundle(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Orbifold(#[from] OrbifoldError),
    #[error(transparent)]
    NormalForm(#[from] NormalFormError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("cycle of rational curves cannot carry a contracting automorphism (weighted log sum {certificate})")]
    CycleExcluded { certificate: String },
    #[error("dual graph has two or more branch vertices")]
    TwoBranchPoints,
    #[error("central component rejected: {0}")]
    CentralComponent(String),
    #[error("orbibundle degree {0} is not negative")]
    NonNegativeDegree(String),
    #[error("inconsistent input: {0}")]
    Inconsistent(String),
    #[error("covering degree must be ≥ 1, got {0}")]
    CoverDegree(i64),
}
