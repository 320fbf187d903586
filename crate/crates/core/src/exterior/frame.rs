//! Oriented inner-product frame spaces and the metric operations on forms.

use nalgebra::{DMatrix, DVector};

use super::form::{binomial, merge_sign, rank, subset_masks, AlternatingForm, MAX_DIM};
use crate::error::{Error, Result};

const SYMMETRY_TOL: f64 = 1e-12;

/// A `2n`-dimensional real vector space with a positive-definite metric and
/// an orientation. The orientation is a sign `o`; the volume form is
/// `o · √det g · e^0∧…∧e^{2n-1}`.
#[derive(Clone, Debug)]
pub struct FrameSpace {
    metric: DMatrix<f64>,
    metric_inv: DMatrix<f64>,
    /// Columns are a `g`-orthonormal frame (upper triangular, positive diagonal).
    frame: DMatrix<f64>,
    frame_inv: DMatrix<f64>,
    orientation: f64,
    euclidean: bool,
}

impl FrameSpace {
    pub fn new(metric: DMatrix<f64>) -> Result<Self> {
        let dim = metric.nrows();
        if metric.ncols() != dim {
            return Err(Error::Dimension {
                expected: dim,
                found: metric.ncols(),
            });
        }
        if dim < 4 || !dim.is_multiple_of(2) || dim > MAX_DIM {
            return Err(Error::Domain(format!(
                "frame dimension must be even and within 4..={MAX_DIM}, got {dim}"
            )));
        }
        let asym = (&metric - metric.transpose()).amax();
        if asym > SYMMETRY_TOL * (1.0 + metric.amax()) {
            return Err(Error::Invariant {
                invariant: "metric symmetry".into(),
                residual: asym,
            });
        }
        let chol = metric.clone().cholesky().ok_or(Error::Definiteness)?;
        let l = chol.l();
        let frame = l.transpose().try_inverse().ok_or(Error::Definiteness)?;
        let frame_inv = l.transpose();
        let metric_inv = chol.inverse();
        let euclidean = metric == DMatrix::identity(dim, dim);
        Ok(Self {
            metric,
            metric_inv,
            frame,
            frame_inv,
            orientation: 1.0,
            euclidean,
        })
    }

    pub fn euclidean(dim: usize) -> Result<Self> {
        Self::new(DMatrix::identity(dim, dim))
    }

    /// Same metric, orientation sign replaced by the sign of `sign`.
    pub fn with_orientation(mut self, sign: f64) -> Self {
        self.orientation = if sign < 0.0 { -1.0 } else { 1.0 };
        self
    }

    pub fn dim(&self) -> usize {
        self.metric.nrows()
    }

    pub fn metric(&self) -> &DMatrix<f64> {
        &self.metric
    }

    pub fn metric_inverse(&self) -> &DMatrix<f64> {
        &self.metric_inv
    }

    /// Columns form an orthonormal frame, expressed in the original basis.
    pub fn orthonormal_frame(&self) -> &DMatrix<f64> {
        &self.frame
    }

    pub fn orientation(&self) -> f64 {
        self.orientation
    }

    pub fn is_euclidean(&self) -> bool {
        self.euclidean
    }

    pub fn inner_vectors(&self, x: &[f64], y: &[f64]) -> f64 {
        let x = DVector::from_column_slice(x);
        let y = DVector::from_column_slice(y);
        (x.transpose() * &self.metric * y)[(0, 0)]
    }

    /// Components of `F` in the orthonormal frame.
    pub fn to_orthonormal(&self, f: &AlternatingForm) -> AlternatingForm {
        if self.euclidean {
            f.clone()
        } else {
            f.pull_back(&self.frame)
        }
    }

    pub fn from_orthonormal(&self, f: &AlternatingForm) -> AlternatingForm {
        if self.euclidean {
            f.clone()
        } else {
            f.pull_back(&self.frame_inv)
        }
    }

    fn check(&self, f: &AlternatingForm) -> Result<()> {
        if f.dim() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                found: f.dim(),
            });
        }
        Ok(())
    }

    pub fn volume_form(&self) -> AlternatingForm {
        let dim = self.dim();
        let mut vol = AlternatingForm::zero(dim, dim);
        vol.set_component(&(0..dim).collect::<Vec<_>>(), self.orientation);
        self.from_orthonormal(&vol)
    }

    /// The Hodge pairing `g(F, G)`: full contraction divided by `p!`.
    pub fn inner(&self, f: &AlternatingForm, g: &AlternatingForm) -> Result<f64> {
        self.check(f)?;
        self.check(g)?;
        if f.degree() != g.degree() {
            return Err(Error::Degree(format!(
                "pairing forms of degree {} and {}",
                f.degree(),
                g.degree()
            )));
        }
        let a = self.to_orthonormal(f);
        let b = self.to_orthonormal(g);
        Ok(a.coeffs().iter().zip(b.coeffs()).map(|(x, y)| x * y).sum())
    }

    /// Full index contraction `F_{i₁…i_p} F^{i₁…i_p}` (no `1/p!`).
    pub fn contraction_norm(&self, f: &AlternatingForm) -> f64 {
        let p = f.degree();
        let factorial: f64 = (1..=p).map(|x| x as f64).product();
        factorial * self.inner(f, f).expect("same frame")
    }

    /// `F ∧ ⋆G = g(F, G) dvol`.
    pub fn hodge_star(&self, f: &AlternatingForm) -> Result<AlternatingForm> {
        self.check(f)?;
        let dim = self.dim();
        let p = f.degree();
        if p > dim {
            return Err(Error::Degree(format!("degree {p} exceeds dimension {dim}")));
        }
        let full = (1u32 << dim) - 1;
        let src = self.to_orthonormal(f);
        let mut out = vec![0.0; binomial(dim, dim - p)];
        for (mask, &c) in subset_masks(dim, p).iter().zip(src.coeffs()) {
            if c != 0.0 {
                let comp = full ^ mask;
                out[rank(comp)] += self.orientation * merge_sign(*mask, comp) * c;
            }
        }
        Ok(self.from_orthonormal(&AlternatingForm::from_coeffs(dim, dim - p, out)))
    }

    /// Metric dual `g⁻¹α` of a one-form.
    pub fn raise(&self, alpha: &AlternatingForm) -> DVector<f64> {
        assert_eq!(alpha.degree(), 1);
        &self.metric_inv * DVector::from_column_slice(alpha.coeffs())
    }

    /// `g(v, ·)`.
    pub fn lower(&self, v: &[f64]) -> AlternatingForm {
        let w = &self.metric * DVector::from_column_slice(v);
        AlternatingForm::one_form(w.as_slice())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_metric(rng: &mut ChaCha8Rng, dim: usize) -> DMatrix<f64> {
        let a = DMatrix::from_fn(dim, dim, |_, _| rng.random_range(-0.5..0.5));
        a.transpose() * &a + DMatrix::identity(dim, dim)
    }

    #[test]
    fn rejects_odd_and_indefinite() {
        assert!(FrameSpace::new(DMatrix::identity(5, 5)).is_err());
        let mut g = DMatrix::identity(4, 4);
        g[(2, 2)] = -1.0;
        assert_eq!(FrameSpace::new(g).unwrap_err(), Error::Definiteness);
    }

    #[test]
    fn frame_is_orthonormal() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let space = FrameSpace::new(random_metric(&mut rng, 6)).unwrap();
        let p = space.orthonormal_frame();
        let gram = p.transpose() * space.metric() * p;
        assert!((gram - DMatrix::identity(6, 6)).amax() < 1e-12);
    }

    #[test]
    fn norm_of_unit_three_form() {
        let space = FrameSpace::euclidean(6).unwrap();
        let e123 = AlternatingForm::basis(6, &[0, 1, 2]);
        assert_eq!(space.contraction_norm(&e123), 6.0);
        let theta = AlternatingForm::basis(6, &[0]) * 2.0;
        assert_eq!(space.contraction_norm(&theta), 4.0);
    }

    #[test]
    fn star_star_is_sign_of_degree() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let space = FrameSpace::new(random_metric(&mut rng, 6))
            .unwrap()
            .with_orientation(-1.0);
        for p in 0..=6 {
            let coeffs = (0..binomial(6, p))
                .map(|_| rng.random_range(-1.0..1.0))
                .collect();
            let f = AlternatingForm::from_coeffs(6, p, coeffs);
            let ss = space.hodge_star(&space.hodge_star(&f).unwrap()).unwrap();
            let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
            assert!(ss.distance(&(&f * sign)) < 1e-10, "p = {p}");
        }
    }

    #[test]
    fn star_defining_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let space = FrameSpace::new(random_metric(&mut rng, 4)).unwrap();
        let vol = space.volume_form();
        for p in 0..=4 {
            let mut draw = || {
                let coeffs = (0..binomial(4, p))
                    .map(|_| rng.random_range(-1.0..1.0))
                    .collect();
                AlternatingForm::from_coeffs(4, p, coeffs)
            };
            let (f, g) = (draw(), draw());
            let lhs = f.wedge(&space.hodge_star(&g).unwrap()).unwrap();
            let rhs = &vol * space.inner(&f, &g).unwrap();
            assert!(lhs.distance(&rhs) < 1e-10);
        }
    }

    #[test]
    fn star_of_one_is_volume() {
        let space = FrameSpace::euclidean(4).unwrap();
        let star = space.hodge_star(&AlternatingForm::scalar(4, 1.0)).unwrap();
        assert_eq!(star, space.volume_form());
    }
}
