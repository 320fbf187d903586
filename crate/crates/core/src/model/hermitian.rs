//! Hermitian structures on metric Lie algebras.

use nalgebra::DMatrix;

use super::lie::LieAlgebraModel;
use crate::error::{Error, Result};
use crate::exterior::{AlternatingForm, ComplexOperator, FrameSpace};

/// Absolute threshold for the structural checks in [`ValidationReport`].
pub const STRUCTURE_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct InvariantCheck {
    pub name: &'static str,
    pub residual: f64,
    pub passed: bool,
}

/// Per-invariant outcome of validating a candidate Hermitian model.
#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub checks: Vec<InvariantCheck>,
}

impl ValidationReport {
    /// Every check other than unimodularity passed.
    pub fn usable(&self) -> bool {
        self.checks
            .iter()
            .all(|c| c.passed || c.name == "unimodular")
    }

    pub fn unimodular(&self) -> bool {
        self.checks
            .iter()
            .any(|c| c.name == "unimodular" && c.passed)
    }

    pub fn first_failure(&self) -> Option<&InvariantCheck> {
        self.checks
            .iter()
            .find(|c| !c.passed && c.name != "unimodular")
    }
}

/// A metric Lie algebra with a compatible almost-complex structure.
/// The frame orientation is chosen so that `ω^n/n!` is the positive volume form.
#[derive(Clone, Debug)]
pub struct HermitianModel {
    algebra: LieAlgebraModel,
    j: ComplexOperator,
    omega: AlternatingForm,
}

fn scale(m: &DMatrix<f64>) -> f64 {
    1.0 + m.amax()
}

/// Validates `(algebra, J)` without constructing a model.
pub fn validate(algebra: &LieAlgebraModel, j: &DMatrix<f64>) -> ValidationReport {
    let dim = algebra.dim();
    let mut checks = Vec::new();
    let mut push = |name, residual: f64, tol: f64| {
        checks.push(InvariantCheck {
            name,
            residual,
            passed: residual <= tol,
        })
    };
    let cscale = algebra
        .bracket_terms()
        .iter()
        .fold(1.0f64, |acc, t| acc.max(t.3.abs()));
    push(
        "jacobi",
        algebra.jacobi_residual(),
        STRUCTURE_TOL * cscale * cscale,
    );
    push("positive definite metric", 0.0, 0.0);
    let shape_ok = j.nrows() == dim && j.ncols() == dim;
    if !shape_ok {
        push("J^2 = -1", f64::INFINITY, 0.0);
        return ValidationReport { checks };
    }
    let square = (j * j + DMatrix::identity(dim, dim)).amax();
    push("J^2 = -1", square, STRUCTURE_TOL * scale(j).powi(2));
    let g = algebra.space().metric();
    let compat = (j.transpose() * g * j - g).amax();
    push(
        "metric compatibility",
        compat,
        STRUCTURE_TOL * scale(g) * scale(j).powi(2),
    );
    let nij = nijenhuis_residual(algebra, j);
    push("nijenhuis", nij, STRUCTURE_TOL * cscale * scale(j).powi(2));
    push(
        "unimodular",
        algebra.unimodularity_residual(),
        STRUCTURE_TOL * cscale,
    );
    ValidationReport { checks }
}

/// `max |N(e_a, e_b)|` with `N(X,Y) = [JX,JY] - J[JX,Y] - J[X,JY] - [X,Y]`.
pub fn nijenhuis_residual(algebra: &LieAlgebraModel, j: &DMatrix<f64>) -> f64 {
    let dim = algebra.dim();
    let mut worst: f64 = 0.0;
    let col = |m: &DMatrix<f64>, a: usize| -> Vec<f64> { m.column(a).iter().copied().collect() };
    let apply =
        |v: Vec<f64>| -> Vec<f64> { (j * nalgebra::DVector::from_vec(v)).as_slice().to_vec() };
    let id = DMatrix::<f64>::identity(dim, dim);
    for a in 0..dim {
        for b in (a + 1)..dim {
            let (x, y) = (col(&id, a), col(&id, b));
            let (jx, jy) = (col(j, a), col(j, b));
            let t1 = algebra.bracket(&jx, &jy);
            let t2 = apply(algebra.bracket(&jx, &y));
            let t3 = apply(algebra.bracket(&x, &jy));
            let t4 = algebra.bracket(&x, &y);
            for k in 0..dim {
                worst = worst.max((t1[k] - t2[k] - t3[k] - t4[k]).abs());
            }
        }
    }
    worst
}

impl HermitianModel {
    /// Validates and assembles the model; the first failing invariant is
    /// reported by name. Non-unimodular algebras are accepted.
    pub fn new(algebra: LieAlgebraModel, j: ComplexOperator) -> Result<Self> {
        let report = validate(&algebra, j.matrix());
        if let Some(fail) = report.first_failure() {
            return Err(Error::Invariant {
                invariant: fail.name.to_string(),
                residual: fail.residual,
            });
        }
        Ok(Self::assemble(algebra, j))
    }

    /// Assembles without the Jacobi and Nijenhuis checks. Used to study
    /// non-integrable structures; downstream type checks then fail loudly.
    pub fn unchecked(algebra: LieAlgebraModel, j: ComplexOperator) -> Result<Self> {
        if j.dim() != algebra.dim() {
            return Err(Error::Dimension {
                expected: algebra.dim(),
                found: j.dim(),
            });
        }
        let compat = j.compatibility_residual(algebra.space());
        if compat > STRUCTURE_TOL * scale(algebra.space().metric()) * scale(j.matrix()).powi(2) {
            return Err(Error::Invariant {
                invariant: "metric compatibility".into(),
                residual: compat,
            });
        }
        Ok(Self::assemble(algebra, j))
    }

    fn assemble(algebra: LieAlgebraModel, j: ComplexOperator) -> Self {
        let omega = j.hermitian_form(algebra.space());
        let n = algebra.dim() / 2;
        let top = omega.power(n).top_coefficient();
        let space = algebra.space().clone().with_orientation(top);
        let algebra = algebra.with_space(space).expect("same dimension");
        Self { algebra, j, omega }
    }

    /// Same brackets and `J`, new compatible metric.
    pub fn with_metric(&self, metric: DMatrix<f64>) -> Result<Self> {
        let space = FrameSpace::new(metric)?;
        let algebra = self.algebra.with_space(space)?;
        Self::new(algebra, self.j.clone())
    }

    pub fn algebra(&self) -> &LieAlgebraModel {
        &self.algebra
    }

    pub fn space(&self) -> &FrameSpace {
        self.algebra.space()
    }

    pub fn complex_structure(&self) -> &ComplexOperator {
        &self.j
    }

    pub fn omega(&self) -> &AlternatingForm {
        &self.omega
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// Complex dimension `n`.
    pub fn n(&self) -> usize {
        self.dim() / 2
    }

    pub fn d(&self, f: &AlternatingForm) -> AlternatingForm {
        self.algebra.ce_differential(f)
    }

    pub fn codifferential(&self, f: &AlternatingForm) -> Result<AlternatingForm> {
        self.algebra.codifferential(f)
    }

    pub fn validation(&self) -> ValidationReport {
        validate(&self.algebra, self.j.matrix())
    }

    /// `max |N|` of the complex structure.
    pub fn nijenhuis_residual(&self) -> f64 {
        nijenhuis_residual(&self.algebra, self.j.matrix())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_torus_orientation() {
        for dim in [4, 6] {
            let space = FrameSpace::euclidean(dim).unwrap();
            let m = HermitianModel::new(
                LieAlgebraModel::abelian(space),
                ComplexOperator::standard(dim).unwrap(),
            )
            .unwrap();
            let n = dim / 2;
            let fact: f64 = (1..=n).map(|x| x as f64).product();
            let vol = m.omega().power(n) * (1.0 / fact);
            assert!(vol.distance(&m.space().volume_form()) < 1e-14);
            assert!(m.validation().usable());
        }
    }

    #[test]
    fn nijenhuis_failure_reported() {
        let space = FrameSpace::euclidean(4).unwrap();
        let g = LieAlgebraModel::new(space, &[(0, 1, 2, 1.0)]).unwrap();
        let j = ComplexOperator::from_pairs(4, &[(0, 2), (1, 3)]).unwrap();
        let err = HermitianModel::new(g, j).unwrap_err();
        match err {
            Error::Invariant { invariant, .. } => assert_eq!(invariant, "nijenhuis"),
            other => panic!("unexpected {other:?}"),
        }
    }
}
