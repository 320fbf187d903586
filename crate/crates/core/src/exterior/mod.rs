//! Multilinear algebra of alternating forms on an oriented inner-product space.

mod complex;
mod form;
mod frame;

pub use complex::ComplexOperator;
pub use form::{binomial, AlternatingForm, MAX_DIM};
pub use frame::FrameSpace;

pub(crate) use form::{indices_of, rank, subset_masks};
