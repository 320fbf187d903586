//! Torsion invariants of a Hermitian model: `H`, `θ`, `λ` and their norms.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::exterior::{AlternatingForm, ComplexOperator, FrameSpace};
use crate::model::HermitianModel;

/// Default zero threshold for forms and scalar cross-checks.
pub const DEFAULT_TOL: f64 = 1e-9;

/// `|a - b| ≤ tol (1 + |a| + |b|)`.
pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs() + b.abs())
}

/// `|a - b| / (1 + |a| + |b|)`.
pub fn relative_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / (1.0 + a.abs() + b.abs())
}

/// `H = J dω = -dω(J·, J·, J·)`. Fails if `H` has a `(3,0)+(0,3)` part,
/// which happens exactly when `J` is not integrable.
pub fn torsion_h(model: &HermitianModel) -> Result<AlternatingForm> {
    let j = model.complex_structure();
    let h = j.j_transform(&model.d(model.omega()));
    let bad = j.pq_part(&h, 3, 0).max_abs();
    if bad > DEFAULT_TOL * (1.0 + h.max_abs()) {
        return Err(Error::Integrability(format!(
            "torsion has a (3,0)+(0,3) component of size {bad:e}"
        )));
    }
    Ok(h)
}

/// `τ(X) = Σ_i F(X, e_i, J e_i)` for a 3-form.
fn one_trace(j: &ComplexOperator, space: &FrameSpace, h: &AlternatingForm) -> AlternatingForm {
    j.ei_jei_trace(h, space, 1).expect("degree 3")
}

/// Lee form from the contraction `θ(X) = -½ H(JX, e_i, J e_i)`.
pub fn lee_form_contraction(model: &HermitianModel, h: &AlternatingForm) -> AlternatingForm {
    let j = model.complex_structure();
    let tau = one_trace(j, model.space(), h);
    // -½ τ(JX) = ½ (Jτ)(X)
    j.j_transform(&tau) * 0.5
}

/// Lee form from the codifferential, `θ(X) = δω(JX)`.
pub fn lee_form_codifferential(model: &HermitianModel) -> Result<AlternatingForm> {
    let dw = model.codifferential(model.omega())?;
    Ok(dw.pull_back(model.complex_structure().matrix()))
}

/// The Lee form, with the contraction and codifferential routes required to agree.
pub fn lee_form(model: &HermitianModel, h: &AlternatingForm) -> Result<AlternatingForm> {
    let a = lee_form_contraction(model, h);
    let b = lee_form_codifferential(model)?;
    let gap = a.distance(&b);
    if gap > DEFAULT_TOL * (1.0 + a.max_abs() + b.max_abs()) {
        return Err(Error::Consistency {
            what: "Lee form contraction and codifferential routes".into(),
            residual: gap,
        });
    }
    Ok(a)
}

/// `λ(X, Y) = dH(X, Y, e_i, J e_i)` and its trace `Σ λ(e_i, J e_i)`.
pub fn lambda_form(model: &HermitianModel, dh: &AlternatingForm) -> (AlternatingForm, f64) {
    let j = model.complex_structure();
    let lambda = j.ei_jei_trace(dh, model.space(), 1).expect("degree 4");
    let trace = j
        .ei_jei_trace(&lambda, model.space(), 1)
        .expect("degree 2")
        .scalar_value();
    (lambda, trace)
}

/// Components `T_{abc}` of a 3-form in the orthonormal frame, all orderings.
fn dense_three(space: &FrameSpace, h: &AlternatingForm) -> Vec<f64> {
    let d = space.dim();
    let ho = space.to_orthonormal(h);
    let mut t = vec![0.0; d * d * d];
    for (idx, c) in ho.terms() {
        let (a, b, e) = (idx[0], idx[1], idx[2]);
        for (p, s) in [
            ((a, b, e), 1.0),
            ((b, e, a), 1.0),
            ((e, a, b), 1.0),
            ((b, a, e), -1.0),
            ((a, e, b), -1.0),
            ((e, b, a), -1.0),
        ] {
            t[(p.0 * d + p.1) * d + p.2] = s * c;
        }
    }
    t
}

/// `J` expressed in the orthonormal frame.
fn orthonormal_j(space: &FrameSpace, j: &ComplexOperator) -> DMatrix<f64> {
    let p = space.orthonormal_frame();
    p.clone().try_inverse().expect("frame is invertible") * j.matrix() * p
}

/// Contract slot `slot` of a dense 3-tensor with `J` (argument `X ↦ JX`).
fn apply_j(t: &[f64], j: &DMatrix<f64>, d: usize, slot: usize) -> Vec<f64> {
    let mut out = vec![0.0; d * d * d];
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                let mut s = 0.0;
                for m in 0..d {
                    let w = match slot {
                        0 => j[(m, a)],
                        1 => j[(m, b)],
                        _ => j[(m, c)],
                    };
                    if w != 0.0 {
                        let (x, y, z) = match slot {
                            0 => (m, b, c),
                            1 => (a, m, c),
                            _ => (a, b, m),
                        };
                        s += w * t[(x * d + y) * d + z];
                    }
                }
                out[(a * d + b) * d + c] = s;
            }
        }
    }
    out
}

/// `‖C‖² = Σ C_{ijk}²` with `g(C(X,Y),Z) = ½H(X,JY,JZ) + ½H(JX,Y,JZ)`.
pub fn chern_torsion_norm(model: &HermitianModel, h: &AlternatingForm) -> f64 {
    let space = model.space();
    let d = space.dim();
    let j = orthonormal_j(space, model.complex_structure());
    let t = dense_three(space, h);
    let t_z = apply_j(&t, &j, d, 2);
    let first = apply_j(&t_z, &j, d, 1);
    let second = apply_j(&t_z, &j, d, 0);
    first
        .iter()
        .zip(&second)
        .map(|(a, b)| (0.5 * a + 0.5 * b).powi(2))
        .sum()
}

/// `Σ H(Je_k, Je_i, e_j) H(e_k, e_i, e_j)` over an orthonormal frame.
pub fn bidegree_contraction(model: &HermitianModel, h: &AlternatingForm) -> f64 {
    let space = model.space();
    let d = space.dim();
    let j = orthonormal_j(space, model.complex_structure());
    let t = dense_three(space, h);
    let tj = apply_j(&apply_j(&t, &j, d, 0), &j, d, 1);
    tj.iter().zip(&t).map(|(a, b)| a * b).sum()
}

/// Every torsion-derived quantity of one Hermitian model.
#[derive(Clone, Debug)]
pub struct TorsionPackage {
    pub h: AlternatingForm,
    pub dh: AlternatingForm,
    pub theta: AlternatingForm,
    pub delta_theta: f64,
    pub lambda: AlternatingForm,
    pub lambda_trace: f64,
    pub norm_h_sq: f64,
    pub norm_theta_sq: f64,
    pub norm_c_sq: f64,
}

impl TorsionPackage {
    pub fn compute(model: &HermitianModel) -> Result<Self> {
        let h = torsion_h(model)?;
        let dh = model.d(&h);
        let theta = lee_form(model, &h)?;
        let delta_theta = model.codifferential(&theta)?.scalar_value();
        let (lambda, lambda_trace) = lambda_form(model, &dh);
        let space = model.space();
        Ok(Self {
            norm_h_sq: space.contraction_norm(&h),
            norm_theta_sq: space.contraction_norm(&theta),
            norm_c_sq: chern_torsion_norm(model, &h),
            h,
            dh,
            theta,
            delta_theta,
            lambda,
            lambda_trace,
        })
    }
}
