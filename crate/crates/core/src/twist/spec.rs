//! Torus twists of a Hermitian model at the level of invariant forms.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::exterior::{AlternatingForm, ComplexOperator};
use crate::model::{HermitianModel, STRUCTURE_TOL};
use crate::skt::torsion_h;

/// Data of a twist: base model, torus generators `ξ_A`, curvatures `F^A` and `β`.
#[derive(Clone, Debug)]
pub struct TwistSpec {
    base: HermitianModel,
    xi: Vec<Vec<f64>>,
    curvature: Vec<AlternatingForm>,
    beta: DMatrix<f64>,
    beta_inverse: DMatrix<f64>,
}

impl TwistSpec {
    pub fn new(
        base: HermitianModel,
        xi: Vec<Vec<f64>>,
        curvature: Vec<AlternatingForm>,
        beta: DMatrix<f64>,
    ) -> Result<Self> {
        let dim = base.dim();
        let m = xi.len();
        if curvature.len() != m {
            return Err(Error::Dimension {
                expected: m,
                found: curvature.len(),
            });
        }
        if beta.nrows() != m || beta.ncols() != m {
            return Err(Error::Dimension {
                expected: m,
                found: beta.nrows().max(beta.ncols()),
            });
        }
        if let Some(v) = xi.iter().find(|v| v.len() != dim) {
            return Err(Error::Dimension {
                expected: dim,
                found: v.len(),
            });
        }
        for f in &curvature {
            if f.dim() != dim {
                return Err(Error::Dimension {
                    expected: dim,
                    found: f.dim(),
                });
            }
            if f.degree() != 2 {
                return Err(Error::Degree(format!(
                    "curvature must be a 2-form, got degree {}",
                    f.degree()
                )));
            }
        }
        let det = beta.determinant();
        let scale = 1.0 + beta.amax().powi(m as i32);
        if det.abs() <= STRUCTURE_TOL * scale {
            return Err(Error::Precondition(format!(
                "beta is not invertible (det = {det:e})"
            )));
        }
        let beta_inverse = beta
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Precondition("beta is not invertible".into()))?;
        Ok(Self {
            base,
            xi,
            curvature,
            beta,
            beta_inverse,
        })
    }

    /// Same as [`TwistSpec::new`], with `β⁻¹` given.
    pub fn from_beta_inverse(
        base: HermitianModel,
        xi: Vec<Vec<f64>>,
        curvature: Vec<AlternatingForm>,
        beta_inverse: DMatrix<f64>,
    ) -> Result<Self> {
        let beta = beta_inverse
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Precondition("beta inverse is singular".into()))?;
        Self::new(base, xi, curvature, beta)
    }

    pub fn base(&self) -> &HermitianModel {
        &self.base
    }

    pub fn action_vectors(&self) -> &[Vec<f64>] {
        &self.xi
    }

    pub fn curvature(&self) -> &[AlternatingForm] {
        &self.curvature
    }

    pub fn beta(&self) -> &DMatrix<f64> {
        &self.beta
    }

    pub fn beta_inverse(&self) -> &DMatrix<f64> {
        &self.beta_inverse
    }

    /// Torus rank `m`.
    pub fn rank(&self) -> usize {
        self.xi.len()
    }

    /// `η_A = g(ξ_A, ·)`.
    pub fn eta(&self) -> Vec<AlternatingForm> {
        self.xi.iter().map(|v| self.base.space().lower(v)).collect()
    }

    /// `𝓕^A = Σ_B (β⁻¹)_{AB} F^B`.
    pub fn twisted_curvature(&self) -> Vec<AlternatingForm> {
        let dim = self.base.dim();
        (0..self.rank())
            .map(|a| {
                let mut f = AlternatingForm::zero(dim, 2);
                for (b, fb) in self.curvature.iter().enumerate() {
                    f += &(fb * self.beta_inverse[(a, b)]);
                }
                f
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LiftCheck {
    pub name: &'static str,
    pub residual: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LiftReport {
    pub checks: Vec<LiftCheck>,
}

impl LiftReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&LiftCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// `L_X α = d i_X α + i_X dα` for an invariant vector field `X`.
fn lie_derivative(model: &HermitianModel, x: &[f64], f: &AlternatingForm) -> AlternatingForm {
    let inner = f.interior(x).expect("positive degree");
    let outer = model.d(f).interior(x).expect("positive degree");
    model.d(&inner) + outer
}

/// Checks the torus action and curvature conditions a constant-`β` twist needs.
pub fn lift_check(spec: &TwistSpec) -> LiftReport {
    let model = spec.base();
    let g = model.space().metric();
    let j = model.complex_structure().matrix();
    let algebra = model.algebra();
    let cmax = algebra
        .bracket_terms()
        .iter()
        .fold(0.0f64, |a, t| a.max(t.3.abs()));
    let fmax = spec
        .curvature()
        .iter()
        .fold(0.0f64, |a, f| a.max(f.max_abs()));
    let tol = STRUCTURE_TOL * (1.0 + cmax) * (1.0 + fmax) * (1.0 + g.amax());

    let mut commuting: f64 = 0.0;
    let mut killing: f64 = 0.0;
    let mut holomorphic: f64 = 0.0;
    let mut omega_inv: f64 = 0.0;
    let mut f_inv: f64 = 0.0;
    let mut horizontal: f64 = 0.0;
    let mut double: f64 = 0.0;
    let mut closed: f64 = 0.0;
    for f in spec.curvature() {
        closed = closed.max(model.d(f).max_abs());
    }
    for (a, xa) in spec.action_vectors().iter().enumerate() {
        let ad = algebra.ad_vector(xa);
        killing = killing.max((ad.transpose() * g + g * &ad).amax());
        holomorphic = holomorphic.max((&ad * j - j * &ad).amax());
        omega_inv = omega_inv.max(lie_derivative(model, xa, model.omega()).max_abs());
        for (b, xb) in spec.action_vectors().iter().enumerate() {
            if b > a {
                let br = algebra.bracket(xa, xb);
                commuting = br.iter().fold(commuting, |m, v| m.max(v.abs()));
            }
        }
        for f in spec.curvature() {
            f_inv = f_inv.max(lie_derivative(model, xa, f).max_abs());
            let inner = f.interior(xa).expect("degree 2");
            horizontal = horizontal.max(inner.max_abs());
            for xb in spec.action_vectors() {
                double = double.max(inner.interior(xb).expect("degree 1").max_abs());
            }
        }
    }
    let mk = |name, residual: f64| LiftCheck {
        name,
        residual,
        passed: residual <= tol,
    };
    LiftReport {
        checks: vec![
            mk("commuting generators", commuting),
            mk("killing", killing),
            mk("holomorphic", holomorphic),
            mk("hermitian form invariant", omega_inv),
            mk("curvature invariant", f_inv),
            mk("curvature closed", closed),
            mk("horizontal curvature", horizontal),
            mk("double interior", double),
        ],
    }
}

/// Builds `W`: same frame, metric and `J`, with differential
/// `d_W χ = dχ - 𝓕^A ∧ i_{ξ_A} χ`, i.e. `c'^k_{ij} = c^k_{ij} + Σ_A ξ_A^k 𝓕^A_{ij}`.
pub fn twist_model(spec: &TwistSpec) -> Result<HermitianModel> {
    let base = spec.base();
    let dim = base.dim();
    let twisted = spec.twisted_curvature();
    let mut delta = Vec::new();
    for (xa, fa) in spec.action_vectors().iter().zip(&twisted) {
        for (idx, c) in fa.terms() {
            for (k, &x) in xa.iter().enumerate() {
                if x != 0.0 {
                    delta.push((idx[0], idx[1], k, c * x));
                }
            }
        }
    }
    let algebra = base.algebra().with_extra_brackets(&delta)?;
    let scale = 1.0
        + algebra
            .bracket_terms()
            .iter()
            .fold(0.0f64, |a, t| a.max(t.3.abs()));
    let jacobi = algebra.jacobi_residual();
    if jacobi > STRUCTURE_TOL * scale * scale {
        return Err(Error::Construction(format!(
            "twisted differential does not square to zero (residual {jacobi:e})"
        )));
    }
    let j = base.complex_structure().clone();
    let w = HermitianModel::unchecked(algebra, j.clone())?;
    let nij = w.nijenhuis_residual();
    if nij > STRUCTURE_TOL * scale * (1.0 + j.matrix().amax()).powi(2) {
        let bad = twisted
            .iter()
            .map(|f| j.pq_part(f, 2, 0).max_abs())
            .fold(0.0, f64::max);
        return Err(Error::Integrability(format!(
            "twisted complex structure is not integrable: curvature (2,0)+(0,2) part {bad:e}, Nijenhuis {nij:e}"
        )));
    }
    debug_assert_eq!(w.dim(), dim);
    Ok(w)
}

/// `max |d_W d_W e^k|`, evaluated on the coframe.
pub fn dw_square_residual(w: &HermitianModel) -> f64 {
    let dim = w.dim();
    (0..dim)
        .map(|k| w.d(&w.d(&AlternatingForm::basis(dim, &[k]))).max_abs())
        .fold(0.0, f64::max)
}

#[derive(Clone, Debug)]
pub struct HwReport {
    /// `H_W` computed from `d_W ω`.
    pub h_w: AlternatingForm,
    /// `H - 𝓕^A ∧ η_A`.
    pub short_form: AlternatingForm,
    /// `H + i_J 𝓕^A ∧ i_{ξ_A} ω - 𝓕^A ∧ η_A`.
    pub full_form: AlternatingForm,
    /// Whether every `𝓕^A` is of type `(1,1)`.
    pub type_11: bool,
    pub short_residual: f64,
    pub full_residual: f64,
}

impl HwReport {
    /// The residual that applies: short form for `(1,1)` curvature, full form otherwise.
    pub fn residual(&self) -> f64 {
        if self.type_11 {
            self.short_residual
        } else {
            self.full_residual
        }
    }
}

/// Compares `H_W` with the torsion predicted from the base and the twist data.
pub fn verify_hw(spec: &TwistSpec, w: &HermitianModel) -> Result<HwReport> {
    let base = spec.base();
    if w.dim() != base.dim() {
        return Err(Error::Dimension {
            expected: base.dim(),
            found: w.dim(),
        });
    }
    let h = torsion_h(base)?;
    let h_w = torsion_h(w)?;
    let j = base.complex_structure();
    let twisted = spec.twisted_curvature();
    let eta = spec.eta();
    let mut short_form = h.clone();
    let mut full_form = h;
    let mut type_11 = true;
    for ((fa, xa), ea) in twisted.iter().zip(spec.action_vectors()).zip(&eta) {
        let fe = fa.wedge(ea)?;
        short_form -= &fe;
        full_form -= &fe;
        let ij = ComplexOperator::derivation(j.matrix(), fa);
        full_form += &ij.wedge(&base.omega().interior(xa)?)?;
        let off = j.pq_part(fa, 2, 0).max_abs();
        if off > STRUCTURE_TOL * (1.0 + fa.max_abs()) {
            type_11 = false;
        }
    }
    Ok(HwReport {
        short_residual: h_w.distance(&short_form),
        full_residual: h_w.distance(&full_form),
        h_w,
        short_form,
        full_form,
        type_11,
    })
}
