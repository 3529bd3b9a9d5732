//! Weak and strong monogamy of entanglement for permutation-invariant
//! Gaussian states.

pub mod comparison;
pub mod decomposition;
pub mod molecular;
pub mod residual;
pub mod scan;

pub use comparison::{
    comparison_alternating_sum, comparison_bounds, comparison_value, gamma_closed_form, ComparisonBounds,
    ComparisonSequence,
};
pub use decomposition::{
    closed_form_sum, gaussian_decomposition, recursive_decomposition, recursive_decomposition_exact,
    resolve_recursion, symmetric_closed_form, Decomposition, DecompositionTerm, Weight,
};
pub use molecular::{molecular_residual, partitions_of, MolecularReport, MoleculePartition};
pub use residual::{
    residual_contangle, residual_contangle_with, weak_ckw_residual, ResidualEvaluation, ResidualEvaluator,
    ResidualTerm,
};
pub use scan::{
    evaluate_cube, monotonicity_of, monotonicity_scan, positivity_of, positivity_scan, Axis, GridPoint,
    MonotonicityReport, MonotonicityViolation, PositivityReport, ResidualCube, ScanGrid,
};
