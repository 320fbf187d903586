//! Almost-complex operators and their action on forms: the `J`-transform,
//! real bidegree projections and `(e_i, Je_i)` traces.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use super::form::AlternatingForm;
use super::frame::FrameSpace;
use crate::error::{Error, Result};

const STRUCTURE_TOL: f64 = 1e-12;

/// A linear map `J` on frame vectors with `J² = -1`; `J e_i` is column `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexOperator {
    matrix: DMatrix<f64>,
}

impl ComplexOperator {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        let dim = matrix.nrows();
        if matrix.ncols() != dim {
            return Err(Error::Dimension {
                expected: dim,
                found: matrix.ncols(),
            });
        }
        let residual = (&matrix * &matrix + DMatrix::identity(dim, dim)).amax();
        if residual > STRUCTURE_TOL * (1.0 + matrix.amax().powi(2)) {
            return Err(Error::Invariant {
                invariant: "J^2 = -1".into(),
                residual,
            });
        }
        Ok(Self { matrix })
    }

    /// `J e_{2a} = e_{2a+1}`, `J e_{2a+1} = -e_{2a}`.
    pub fn standard(dim: usize) -> Result<Self> {
        let pairs: Vec<(usize, usize)> = (0..dim / 2).map(|a| (2 * a, 2 * a + 1)).collect();
        Self::from_pairs(dim, &pairs)
    }

    /// `J e_i = e_j` and `J e_j = -e_i` for each pair `(i, j)`.
    pub fn from_pairs(dim: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut m = DMatrix::zeros(dim, dim);
        let mut seen = vec![false; dim];
        for &(i, j) in pairs {
            if i >= dim || j >= dim || i == j || seen[i] || seen[j] {
                return Err(Error::Construction(format!(
                    "J pair ({i}, {j}) overlaps or leaves the frame"
                )));
            }
            seen[i] = true;
            seen[j] = true;
            m[(j, i)] = 1.0;
            m[(i, j)] = -1.0;
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Construction(
                "J pairs do not cover every basis vector".into(),
            ));
        }
        Self::new(m)
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        (&self.matrix * nalgebra::DVector::from_column_slice(v))
            .as_slice()
            .to_vec()
    }

    /// `max |Jᵀ g J - g|`.
    pub fn compatibility_residual(&self, space: &FrameSpace) -> f64 {
        let g = space.metric();
        (self.matrix.transpose() * g * &self.matrix - g).amax()
    }

    /// `ω(X, Y) = g(X, JY)`, i.e. `ω_ij = (g J)_ij`.
    pub fn hermitian_form(&self, space: &FrameSpace) -> AlternatingForm {
        let w = space.metric() * &self.matrix;
        let dim = self.dim();
        let mut omega = AlternatingForm::zero(dim, 2);
        for i in 0..dim {
            for j in (i + 1)..dim {
                omega.set_component(&[i, j], w[(i, j)]);
            }
        }
        omega
    }

    /// `JF(X₁, …, X_r) = (-1)^r F(JX₁, …, JX_r)`.
    pub fn j_transform(&self, f: &AlternatingForm) -> AlternatingForm {
        let pulled = f.pull_back(&self.matrix);
        if f.degree().is_multiple_of(2) {
            pulled
        } else {
            -pulled
        }
    }

    /// Pullback by `cos t + sin t J`.
    fn rotate(&self, f: &AlternatingForm, t: f64) -> AlternatingForm {
        let dim = self.dim();
        let r = DMatrix::identity(dim, dim) * t.cos() + &self.matrix * t.sin();
        f.pull_back(&r)
    }

    /// Real bidegree components of `F`: the entry labelled `(a, b)` with
    /// `a ≥ b` is the real part of type `(a,b) + (b,a)`. The list runs from
    /// the most unbalanced type to the most balanced one and sums to `F`.
    pub fn pq_components(&self, f: &AlternatingForm) -> Vec<((usize, usize), AlternatingForm)> {
        let p = f.degree();
        let samples = 2 * p + 1;
        let rotated: Vec<(f64, AlternatingForm)> = (0..samples)
            .map(|j| {
                let t = 2.0 * PI * j as f64 / samples as f64;
                (t, self.rotate(f, t))
            })
            .collect();
        let mut out = Vec::new();
        let mut a = p;
        while 2 * a >= p {
            let b = p - a;
            let m = (a - b) as f64;
            let weight = if a == b { 1.0 } else { 2.0 } / samples as f64;
            let mut part = AlternatingForm::zero(f.dim(), p);
            for (t, r) in &rotated {
                part += &(r * ((m * t).cos() * weight));
            }
            out.push(((a, b), part));
            if a == 0 {
                break;
            }
            a -= 1;
        }
        out
    }

    /// The real part of type `(a,b) + (b,a)` of `F`, or zero if absent.
    pub fn pq_part(&self, f: &AlternatingForm, a: usize, b: usize) -> AlternatingForm {
        let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
        self.pq_components(f)
            .into_iter()
            .find(|(ab, _)| *ab == (hi, lo))
            .map(|(_, part)| part)
            .unwrap_or_else(|| AlternatingForm::zero(f.dim(), f.degree()))
    }

    /// `Σ_i F(X₁, …, e_i, J e_i)` over a `g`-orthonormal frame, repeated
    /// `pairs` times. Computed frame-free as `Σ g^{ab} F(…, e_a, J e_b)`.
    pub fn ei_jei_trace(
        &self,
        f: &AlternatingForm,
        space: &FrameSpace,
        pairs: usize,
    ) -> Result<AlternatingForm> {
        if f.dim() != self.dim() || space.dim() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                found: f.dim(),
            });
        }
        if f.degree() < 2 * pairs {
            return Err(Error::Degree(format!(
                "trace of {pairs} pair(s) needs degree at least {}, got {}",
                2 * pairs,
                f.degree()
            )));
        }
        let dim = self.dim();
        let partner = &self.matrix * space.metric_inverse();
        let mut acc = f.clone();
        for _ in 0..pairs {
            let mut next = AlternatingForm::zero(dim, acc.degree() - 2);
            for a in 0..dim {
                let first = acc.interior_basis(a);
                let w: Vec<f64> = partner.column(a).iter().copied().collect();
                next += &first.interior(&w)?;
            }
            acc = next;
        }
        Ok(acc)
    }

    /// Derivation extension of an endomorphism: `i_L χ = Σ_a e^a ∧ i_{L e_a} χ`.
    pub fn derivation(l: &DMatrix<f64>, chi: &AlternatingForm) -> AlternatingForm {
        let dim = chi.dim();
        let mut out = AlternatingForm::zero(dim, chi.degree());
        if chi.degree() == 0 {
            return out;
        }
        for a in 0..dim {
            let v: Vec<f64> = l.column(a).iter().copied().collect();
            if v.iter().all(|x| *x == 0.0) {
                continue;
            }
            let inner = chi.interior(&v).expect("positive degree");
            out += &AlternatingForm::basis(dim, &[a])
                .wedge(&inner)
                .expect("same frame");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::form::binomial;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_form(rng: &mut ChaCha8Rng, dim: usize, p: usize) -> AlternatingForm {
        let coeffs = (0..binomial(dim, p))
            .map(|_| rng.random_range(-1.0..1.0))
            .collect();
        AlternatingForm::from_coeffs(dim, p, coeffs)
    }

    #[test]
    fn rejects_non_complex_matrix() {
        assert!(ComplexOperator::new(DMatrix::identity(4, 4)).is_err());
        assert!(ComplexOperator::from_pairs(4, &[(0, 1), (1, 2)]).is_err());
    }

    #[test]
    fn standard_hermitian_form() {
        let space = FrameSpace::euclidean(4).unwrap();
        let j = ComplexOperator::standard(4).unwrap();
        let omega = j.hermitian_form(&space);
        assert_eq!(omega.component(&[0, 1]), -1.0);
        assert_eq!(omega.component(&[2, 3]), -1.0);
        assert_eq!(omega.component(&[0, 2]), 0.0);
    }

    #[test]
    fn j_transform_signs() {
        let j = ComplexOperator::from_pairs(4, &[(0, 1), (2, 3)]).unwrap();
        let e0 = AlternatingForm::basis(4, &[0]);
        // (Je^0)(X) = -e^0(JX); e^0(J e_1) = -1.
        assert_eq!(j.j_transform(&e0), AlternatingForm::basis(4, &[1]));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let theta = random_form(&mut rng, 4, 1);
        assert!(j.j_transform(&j.j_transform(&theta)).distance(&-theta) < 1e-14);
        let space = FrameSpace::euclidean(4).unwrap();
        let omega = j.hermitian_form(&space);
        assert!(j.j_transform(&omega).distance(&omega) < 1e-14);
    }

    #[test]
    fn bidegree_projectors() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let j = ComplexOperator::standard(6).unwrap();
        for p in 1..=4 {
            let f = random_form(&mut rng, 6, p);
            let parts = j.pq_components(&f);
            let mut sum = AlternatingForm::zero(6, p);
            for (_, part) in &parts {
                sum += part;
            }
            assert!(sum.distance(&f) < 1e-12);
            for (ab, part) in &parts {
                let again = j.pq_part(part, ab.0, ab.1);
                assert!(again.distance(part) < 1e-12, "idempotent {ab:?}");
                for (cd, _) in &parts {
                    if cd != ab {
                        assert!(j.pq_part(part, cd.0, cd.1).max_abs() < 1e-12);
                    }
                }
            }
        }
        let space = FrameSpace::euclidean(6).unwrap();
        let omega = j.hermitian_form(&space);
        assert!(j.pq_part(&omega, 1, 1).distance(&omega) < 1e-13);
        assert!(j.pq_part(&omega, 2, 0).max_abs() < 1e-13);
    }

    #[test]
    fn trace_of_omega() {
        for dim in [4, 6] {
            let space = FrameSpace::euclidean(dim).unwrap();
            let j = ComplexOperator::standard(dim).unwrap();
            let omega = j.hermitian_form(&space);
            let t = j.ei_jei_trace(&omega, &space, 1).unwrap();
            assert!((t.scalar_value() + dim as f64).abs() < 1e-14);
        }
    }

    #[test]
    fn trace_is_frame_free() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let dim = 6;
        let space = FrameSpace::euclidean(dim).unwrap();
        let j = ComplexOperator::standard(dim).unwrap();
        let f = random_form(&mut rng, dim, 4);
        let fast = j.ei_jei_trace(&f, &space, 1).unwrap();
        // Explicit sum over a rotated unitary frame u_a = U e_a with UJ = JU.
        let x = DMatrix::from_fn(dim, dim, |_, _| rng.random_range(-1.0..1.0));
        let jm = j.matrix();
        let skew = (&x - x.transpose()) * 0.5;
        let gen = (&skew - jm * &skew * jm) * 0.5;
        let u = gen.exp();
        let mut slow = AlternatingForm::zero(dim, 2);
        for a in 0..dim {
            let e: Vec<f64> = u.column(a).iter().copied().collect();
            let je = j.apply(&e);
            let mut term = AlternatingForm::zero(dim, 2);
            for s in 0..dim {
                for t in (s + 1)..dim {
                    let mut xs = vec![0.0; dim];
                    let mut xt = vec![0.0; dim];
                    xs[s] = 1.0;
                    xt[t] = 1.0;
                    term.set_component(&[s, t], f.evaluate(&[&xs, &xt, &e, &je]));
                }
            }
            slow += &term;
        }
        assert!(fast.distance(&slow) < 1e-11);
        assert!(j.ei_jei_trace(&f, &space, 3).is_err());
    }

    #[test]
    fn derivation_on_one_forms() {
        let l = DMatrix::from_row_slice(
            4,
            4,
            &[
                0.0, 1.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 0.0, 0.0, 3.0, 0.0, 0.0, 0.0, 0.0, 0.0,
            ],
        );
        let chi = AlternatingForm::one_form(&[1.0, -1.0, 2.0, 0.5]);
        let got = ComplexOperator::derivation(&l, &chi);
        let want = nalgebra::DVector::from_column_slice(chi.coeffs());
        let want = l.transpose() * want;
        assert_eq!(got.coeffs(), want.as_slice());
    }
}
