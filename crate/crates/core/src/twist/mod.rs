//! Torus twists: construction of the twisted model, torsion transport,
//! integer conditions on `β` and torus-base realizations.

mod diophantine;
mod families;
mod spec;

pub use diophantine::{
    diophantine_check, enumerate_beta, fiber_gram, scyt_constants, scyt_general, Condition,
    DiophantineInstance, DiophantineOutcome, RewrittenCheck, ScytCase, ScytConstants,
};
pub use families::{
    base_factors, closed_loop, closed_loop_case, solution_twists, torus_family, LoopCase,
};
pub use spec::{
    dw_square_residual, lift_check, twist_model, verify_hw, HwReport, LiftCheck, LiftReport,
    TwistSpec,
};
