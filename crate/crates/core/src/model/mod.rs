//! Left-invariant geometry on metric Lie algebras.

mod connection;
mod hermitian;
mod lie;

pub use connection::{
    bismut, bismut_ricci, curvature_tensor, levi_civita, ricci_form, ricci_trace, BismutRicci,
    ConnectionData, CurvatureData, RicciStatus,
};
pub use hermitian::{
    nijenhuis_residual, validate, HermitianModel, InvariantCheck, ValidationReport, STRUCTURE_TOL,
};
pub use lie::LieAlgebraModel;
