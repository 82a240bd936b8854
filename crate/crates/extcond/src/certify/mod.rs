//! PSD feasibility systems equivalent to, or sufficient for, the polynomial
//! sign conditions of the strengthened checks, together with a
//! self-contained solver.

pub mod builders;
pub mod identity;
pub mod problem;
pub mod solver;

pub use builders::{
    build_blockwise_sos, build_loja_sos, build_op_cocoercive_sos, build_op_monotone_sos, certify_blockwise,
    certify_loja, certify_op_cocoercive, certify_op_monotone, DatasetCertificate, InstanceCertificate,
    OPERATOR_BASIS,
};
pub use identity::{build_identity, GramBlock, Poly};
pub use problem::{AffineEntry, MatrixTemplate, PsdFeasibilityProblem};
pub use solver::{min_eigenvalue, solve_psd_feasibility, PsdOptions, PsdVerdict};
