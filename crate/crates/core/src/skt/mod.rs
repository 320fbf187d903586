//! Torsion invariants, the `α_k` functions, classification and identity checks.

mod alpha;
mod classify;
mod identities;
mod torsion;

pub use alpha::{alpha_k, alpha_kl, d_omega_power_h, star_top, AlphaRoute};
pub use classify::{
    classify, lck_detect, lck_gauduchon_alpha, lck_residual, lk_entry, lk_form, skt_classify,
    vanishing_margin, zero_scale, AlphaValues, LckReport, LkEntry, MarginReport, SktClassification,
    Verdict,
};
pub use identities::{
    double_trace_sides, four_form_trace_sides, identity_suite, model_identities,
    synthetic_identities, IdentityCheck, IdentityReport, IDENTITY_TOL,
};
pub use torsion::{
    bidegree_contraction, chern_torsion_norm, close, lambda_form, lee_form,
    lee_form_codifferential, lee_form_contraction, relative_gap, torsion_h, TorsionPackage,
    DEFAULT_TOL,
};
