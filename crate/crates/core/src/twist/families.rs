//! Torus-base realizations of the integer conditions: flat products of tori
//! whose Kähler forms and null classes stand in for the curvature classes,
//! twisted by a `T²` fiber. Each such twist is a 2-step nilpotent model.

use nalgebra::DMatrix;
use rayon::prelude::*;

use super::diophantine::{diophantine_check, enumerate_beta, Condition, DiophantineInstance};
use super::spec::{dw_square_residual, lift_check, twist_model, verify_hw, TwistSpec};
use crate::catalog::flat_torus;
use crate::error::{Error, Result};
use crate::exterior::AlternatingForm;
use crate::skt::{lk_entry, DEFAULT_TOL};

/// Real dimensions of the two base factors.
pub fn base_factors(condition: Condition, k: u32) -> (usize, usize) {
    let k = k as usize;
    match condition {
        Condition::TwoSkt => (4, 2),
        Condition::KSkt | Condition::KSktKahler => (2 * k, 2),
        Condition::KPlusOneSkt => (2 * k, 4),
    }
}

/// `ω` restricted to the coordinates `start..start+len`.
fn kahler_block(omega: &AlternatingForm, start: usize, len: usize) -> AlternatingForm {
    let mut out = AlternatingForm::zero(omega.dim(), 2);
    for (idx, c) in omega.terms() {
        if idx.iter().all(|i| (start..start + len).contains(i)) {
            out.set_component(&idx, c);
        }
    }
    out
}

/// The twist whose 2-form data realizes `inst`. The fiber is the last
/// complex line, `ξ₁ = e_{d-2}`, `ξ₂ = e_{d-1}`, orthonormal.
///
/// Null classes are single planes `e^{s} ∧ e^{s+1}`. For the `(k+1)`-SKT
/// family they are scaled so their pairings with the Kähler forms match
/// those of the Kähler classes, which is what the weights assume.
pub fn torus_family(inst: &DiophantineInstance) -> Result<TwistSpec> {
    let k = inst.k;
    if k == 0 {
        return Err(Error::Domain("k must be at least 1".into()));
    }
    let (a, b) = base_factors(inst.condition, k);
    let dim = a + b + 2;
    if dim > crate::exterior::MAX_DIM {
        return Err(Error::Domain(format!(
            "{} with k = {k} needs dimension {dim}",
            inst.condition
        )));
    }
    let base = flat_torus(dim / 2)?;
    let omega = base.omega();
    let plane = |s: usize| AlternatingForm::basis(dim, &[s, s + 1]);
    let (f1, f2) = match inst.condition {
        Condition::TwoSkt | Condition::KSkt if inst.null_f1 => (plane(0), plane(a)),
        Condition::KPlusOneSkt => (
            if inst.null_f1 {
                plane(0) * -(k as f64)
            } else {
                kahler_block(omega, 0, a)
            },
            if inst.null_f2 {
                plane(a) * -2.0
            } else {
                kahler_block(omega, a, b)
            },
        ),
        _ => (kahler_block(omega, 0, a), kahler_block(omega, a, b)),
    };
    let unit = |i: usize| {
        let mut v = vec![0.0; dim];
        v[i] = 1.0;
        v
    };
    let beta_inverse = DMatrix::from_row_slice(
        2,
        2,
        &[
            inst.p1 as f64,
            inst.q1 as f64,
            inst.p2 as f64,
            inst.q2 as f64,
        ],
    );
    TwistSpec::from_beta_inverse(
        base,
        vec![unit(dim - 2), unit(dim - 1)],
        vec![f1, f2],
        beta_inverse,
    )
}

/// One closed-loop comparison: the integer condition versus the SKT
/// condition evaluated on the constructed twist.
#[derive(Clone, Debug)]
pub struct LoopCase {
    pub instance: DiophantineInstance,
    pub predicted: bool,
    pub observed: bool,
    /// `max |d_W(ω^{k-1} ∧ H_W)|` at the condition's SKT level.
    pub skt_residual: f64,
    pub dw_square: f64,
    pub hw_residual: f64,
    pub nilpotent: bool,
}

impl LoopCase {
    pub fn agrees(&self) -> bool {
        self.predicted == self.observed
    }
}

pub fn closed_loop_case(inst: &DiophantineInstance) -> Result<LoopCase> {
    let predicted = diophantine_check(inst)?.satisfied;
    let spec = torus_family(inst)?;
    let lift = lift_check(&spec);
    if !lift.all_passed() {
        return Err(Error::Construction(
            "torus family violates the lift conditions".into(),
        ));
    }
    let w = twist_model(&spec)?;
    let hw = verify_hw(&spec, &w)?;
    let level = inst.condition.skt_level(inst.k) as usize;
    let entry = lk_entry(&w, &hw.h_w, level, 0, DEFAULT_TOL);
    Ok(LoopCase {
        instance: *inst,
        predicted,
        observed: entry.holds,
        skt_residual: entry.residual,
        dw_square: dw_square_residual(&w),
        hw_residual: hw.residual(),
        nilpotent: w.algebra().nilpotency_class(1e-9).is_some(),
    })
}

/// Every invertible `β⁻¹` with entries in `[-bound, bound]`, in lexicographic order.
pub fn closed_loop(
    condition: Condition,
    k: u32,
    bound: u32,
    null_f1: bool,
    null_f2: bool,
) -> Result<Vec<LoopCase>> {
    let b = i64::from(bound);
    let mut boxes = Vec::new();
    for p1 in -b..=b {
        for p2 in -b..=b {
            for q1 in -b..=b {
                for q2 in -b..=b {
                    if p1 * q2 - p2 * q1 != 0 {
                        boxes.push(
                            DiophantineInstance::new(condition, k, [p1, p2, q1, q2])
                                .with_null_classes(null_f1, null_f2),
                        );
                    }
                }
            }
        }
    }
    boxes.par_iter().map(closed_loop_case).collect()
}

/// Solutions from [`enumerate_beta`] paired with their twists.
pub fn solution_twists(
    condition: Condition,
    k: u32,
    bound: u32,
    null_f1: bool,
    null_f2: bool,
) -> Result<Vec<(DiophantineInstance, TwistSpec)>> {
    enumerate_beta(condition, k, bound, null_f1, null_f2)
        .into_iter()
        .map(|inst| torus_family(&inst).map(|s| (inst, s)))
        .collect()
}
