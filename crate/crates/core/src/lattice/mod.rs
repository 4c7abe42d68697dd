//! Successive minima of unimodular lattices under the diagonal flow.
//!
//! Floating point throughout: the flow matrix is transcendental, so the
//! exactness discipline of the template modules does not apply here.
//! Reliability comes from reduction before enumeration, explicit search
//! budgets (never a silent wrong answer), and a brute-force reference
//! implementation for cross-checking.

pub mod bruteforce;
pub mod enumerate;
pub mod mat;
pub mod minima;
pub mod profile;
pub mod reduce;

pub use minima::{successive_minima, Minima, Witness};
pub use profile::{
    approx_template_check, h_profile, minkowski_check, rational_subspace_covolume,
    template_distance, ApproxTemplateReport, FlowMatrix, MinimaProfile,
};

use std::fmt;

/// Errors from the numeric lattice computations.
#[derive(Clone, Debug, PartialEq)]
pub enum LatticeError {
    /// Enumeration node budget exhausted before the search completed.
    BudgetExceeded { explored: u64, budget: u64 },
    /// Basis numerically singular or wrong shape.
    BadBasis(String),
    /// Vectors supplied to a covolume computation are dependent.
    DependentVectors,
    /// Dimension outside the supported range.
    Dimension(String),
    /// Grids or domains that do not overlap, and similar usage errors.
    Usage(String),
}

impl fmt::Display for LatticeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeError::BudgetExceeded { explored, budget } => write!(
                f,
                "enumeration budget exceeded: {explored} nodes explored of {budget} allowed"
            ),
            LatticeError::BadBasis(s) => write!(f, "bad basis: {s}"),
            LatticeError::DependentVectors => write!(f, "vectors are linearly dependent"),
            LatticeError::Dimension(s) => write!(f, "dimension error: {s}"),
            LatticeError::Usage(s) => write!(f, "usage error: {s}"),
        }
    }
}

impl std::error::Error for LatticeError {}

/// Largest lattice dimension the enumeration accepts.
pub const MAX_DIM: usize = 8;

/// Default enumeration node budget.
pub const DEFAULT_BUDGET: u64 = 50_000_000;

/// A lattice given by basis vectors with a cached log-determinant.
#[derive(Clone, Debug)]
pub struct LatticeState {
    /// Basis vectors (each of length `d`).
    pub basis: Vec<Vec<f64>>,
    /// `log |det|` of the basis matrix.
    pub det_log: f64,
}

impl LatticeState {
    pub fn new(basis: Vec<Vec<f64>>) -> Result<Self, LatticeError> {
        let d = basis.len();
        if d == 0 || d > MAX_DIM {
            return Err(LatticeError::Dimension(format!(
                "dimension {d} outside [1, {MAX_DIM}]"
            )));
        }
        if basis.iter().any(|v| v.len() != d) {
            return Err(LatticeError::BadBasis("basis is not square".into()));
        }
        if basis
            .iter()
            .any(|v| v.iter().any(|x| !x.is_finite()))
        {
            return Err(LatticeError::BadBasis("non-finite entry".into()));
        }
        let det = mat::determinant(&basis);
        if det.abs() < 1e-300 {
            return Err(LatticeError::BadBasis("numerically singular basis".into()));
        }
        Ok(LatticeState {
            basis,
            det_log: det.abs().ln(),
        })
    }
}
