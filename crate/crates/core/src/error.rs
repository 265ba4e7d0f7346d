//! Error type shared by every module of the crate.

use crate::dictionary::AtomId;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("p = {value} is not usable: {reason}")]
    InvalidPrime { value: u64, reason: &'static str },

    #[error("a dictionary needs at least one basis")]
    NoBases,

    #[error("basis {basis_index} has {got} vectors, expected {expected}")]
    BasisSizeMismatch {
        basis_index: usize,
        got: usize,
        expected: usize,
    },

    #[error("basis {basis_index} fails orthonormality: {detail}")]
    BasisNotOrthonormal { basis_index: usize, detail: String },

    #[error("atom id {id} is out of range (bases: {num_bases}, vectors per basis: {p})")]
    InvalidAtomId {
        id: AtomId,
        num_bases: usize,
        p: u64,
    },

    #[error("duplicate atom id {id} in support")]
    DuplicateAtomId { id: AtomId },

    #[error("support must contain at least one atom")]
    EmptySupport,

    #[error("quadratic coefficient must be nonzero mod p")]
    ZeroQuadraticCoefficient,

    #[error("vector length {got} does not match signal dimension {expected}")]
    DimensionMismatch { got: usize, expected: usize },

    #[error("matrix is not Hermitian: max |a_ij - conj(a_ji)| = {defect:.3e}")]
    NotHermitian { defect: f64 },

    #[error(
        "eigensolver did not converge in {sweeps} sweeps: off-diagonal mass {offdiag_mass:.3e} \
         above target {target:.3e}"
    )]
    NoConvergence {
        sweeps: usize,
        offdiag_mass: f64,
        target: f64,
    },

    #[error("{subsets} subsets of size <= {n_max} exceed the enumeration budget of {budget}")]
    EnumerationBudgetExceeded {
        subsets: u128,
        budget: u64,
        n_max: usize,
    },

    #[error("invalid configuration ({field}): {message}")]
    Config {
        field: &'static str,
        message: String,
    },

    #[error("support size {requested} not drawable: {reason}")]
    SupportSize { requested: usize, reason: String },

    #[error("insufficient nonzero tail estimates: {usable} usable point(s), need at least 2")]
    InsufficientDecayPoints { usable: usize },

    #[error("empty sample")]
    EmptySample,

    #[error("normal equations singular after selecting {selected} atoms")]
    SingularNormalEquations { selected: usize },

    #[error("sparsity {k} out of range, must satisfy 1 <= k <= {p}")]
    SparsityOutOfRange { k: usize, p: u64 },

    #[error("{path}:{line}: parse error at `{token}`: {message}")]
    Parse {
        path: String,
        line: usize,
        token: String,
        message: String,
    },

    #[error(
        "random basis generation broke down at basis {basis_index}, vector {vector_index} \
         (near-dependent draw)"
    )]
    OrthogonalizationBreakdown {
        basis_index: usize,
        vector_index: usize,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
