use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("chart mismatch: {0}")]
    ChartMismatch(String),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("invalid chart: {0}")]
    InvalidChart(String),
    #[error("term violates chart invariants: {0}")]
    InvalidTerm(String),
    #[error("branch incompatibility: {0}")]
    BranchIncompatible(String),
    #[error("point outside chart domain: {0}")]
    OutsideDomain(String),
    #[error("non-periodic axis {0} requested for torus integration")]
    NonPeriodicAxis(usize),
    #[error("form is not closed: d(omega) = {0}")]
    NotClosed(String),
    #[error("no Hamiltonian solution: {0}")]
    NotHamiltonian(String),
    #[error("omega has non-constant coefficients")]
    NonConstantOmega,
    #[error("invalid arity: {0}")]
    Arity(String),
    #[error("not a cocycle: {0}")]
    NotACocycle(String),
    #[error("local curvature forms do not glue: {0}")]
    GluingFailure(String),
    #[error("not a chain complex: {0}")]
    NotAComplex(String),
    #[error("linear solve left the Laurent ring: {0}")]
    OutsideLaurent(String),
    #[error("not a primitive: {0}")]
    NotAPrimitive(String),
    #[error("nerve mismatch: {0}")]
    NerveMismatch(String),
    #[error("wrong nerve: {0}")]
    WrongNerve(String),
    #[error("invalid L-infinity data: {0}")]
    InvalidAlgebra(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
    #[error("invalid override: {0}")]
    InvalidOverride(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
