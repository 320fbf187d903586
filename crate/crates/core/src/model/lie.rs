//! Metric Lie algebras and their Chevalley–Eilenberg calculus.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::exterior::{binomial, indices_of, rank, subset_masks, AlternatingForm, FrameSpace};

/// Structure constants `[e_i, e_j] = Σ_k c^k_{ij} e_k` on a metric frame space.
#[derive(Clone, Debug)]
pub struct LieAlgebraModel {
    space: FrameSpace,
    /// `c[(i * dim + j) * dim + k] = c^k_{ij}`.
    constants: Vec<f64>,
    /// Nonzero `(k, c^k_{ij})` for each ordered pair `i < j`, keyed `i * dim + j`.
    sparse: Vec<Vec<(usize, f64)>>,
}

impl LieAlgebraModel {
    /// Builds the algebra from additive bracket terms `[e_i, e_j] += c e_k`.
    /// Terms with `i > j` are stored antisymmetrically.
    pub fn new(space: FrameSpace, brackets: &[(usize, usize, usize, f64)]) -> Result<Self> {
        let dim = space.dim();
        let mut constants = vec![0.0; dim * dim * dim];
        for &(i, j, k, c) in brackets {
            if i >= dim || j >= dim || k >= dim {
                return Err(Error::Construction(format!(
                    "bracket [{i}, {j}] -> {k} leaves the {dim}-dimensional frame"
                )));
            }
            if i == j {
                return Err(Error::Invariant {
                    invariant: "bracket antisymmetry".into(),
                    residual: c.abs(),
                });
            }
            constants[(i * dim + j) * dim + k] += c;
            constants[(j * dim + i) * dim + k] -= c;
        }
        Ok(Self::from_table(space, constants))
    }

    fn from_table(space: FrameSpace, constants: Vec<f64>) -> Self {
        let dim = space.dim();
        let mut sparse = vec![Vec::new(); dim * dim];
        for i in 0..dim {
            for j in (i + 1)..dim {
                for k in 0..dim {
                    let c = constants[(i * dim + j) * dim + k];
                    if c != 0.0 {
                        sparse[i * dim + j].push((k, c));
                    }
                }
            }
        }
        Self {
            space,
            constants,
            sparse,
        }
    }

    pub fn abelian(space: FrameSpace) -> Self {
        let dim = space.dim();
        Self::from_table(space, vec![0.0; dim * dim * dim])
    }

    pub fn space(&self) -> &FrameSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// `c^k_{ij}`.
    pub fn constant(&self, i: usize, j: usize, k: usize) -> f64 {
        let dim = self.dim();
        self.constants[(i * dim + j) * dim + k]
    }

    /// Nonzero constants with `i < j`, in lexicographic order.
    pub fn bracket_terms(&self) -> Vec<(usize, usize, usize, f64)> {
        let dim = self.dim();
        let mut out = Vec::new();
        for i in 0..dim {
            for j in (i + 1)..dim {
                for &(k, c) in &self.sparse[i * dim + j] {
                    out.push((i, j, k, c));
                }
            }
        }
        out
    }

    /// Same brackets, different metric.
    pub fn with_space(&self, space: FrameSpace) -> Result<Self> {
        if space.dim() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                found: space.dim(),
            });
        }
        Ok(Self::from_table(space, self.constants.clone()))
    }

    /// Same metric, constants replaced by `c + delta`.
    pub fn with_extra_brackets(&self, delta: &[(usize, usize, usize, f64)]) -> Result<Self> {
        let mut out = Self::new(self.space.clone(), delta)?;
        for (slot, c) in out.constants.iter_mut().zip(&self.constants) {
            *slot += c;
        }
        Ok(Self::from_table(out.space, out.constants))
    }

    pub fn bracket(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let dim = self.dim();
        let mut out = vec![0.0; dim];
        for i in 0..dim {
            if x[i] == 0.0 {
                continue;
            }
            for j in 0..dim {
                let w = x[i] * y[j];
                if w == 0.0 {
                    continue;
                }
                let base = (i * dim + j) * dim;
                for (k, slot) in out.iter_mut().enumerate() {
                    *slot += w * self.constants[base + k];
                }
            }
        }
        out
    }

    /// Matrix of `ad_{e_i}`: column `j` is `[e_i, e_j]`.
    pub fn ad(&self, i: usize) -> DMatrix<f64> {
        let dim = self.dim();
        DMatrix::from_fn(dim, dim, |k, j| self.constant(i, j, k))
    }

    pub fn ad_vector(&self, x: &[f64]) -> DMatrix<f64> {
        let dim = self.dim();
        let mut m = DMatrix::zeros(dim, dim);
        for (i, &xi) in x.iter().enumerate() {
            if xi != 0.0 {
                m += self.ad(i) * xi;
            }
        }
        m
    }

    /// `max |[[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j]|`.
    pub fn jacobi_residual(&self) -> f64 {
        let dim = self.dim();
        let ads: Vec<DMatrix<f64>> = (0..dim).map(|i| self.ad(i)).collect();
        let mut worst: f64 = 0.0;
        for i in 0..dim {
            for j in (i + 1)..dim {
                // ad_{[e_i,e_j]} - [ad_i, ad_j] vanishes iff Jacobi holds.
                let mut lhs = DMatrix::zeros(dim, dim);
                for m in 0..dim {
                    let c = self.constant(i, j, m);
                    if c != 0.0 {
                        lhs += &ads[m] * c;
                    }
                }
                let rhs = &ads[i] * &ads[j] - &ads[j] * &ads[i];
                worst = worst.max((lhs - rhs).amax());
            }
        }
        worst
    }

    /// `max_j |tr ad_{e_j}|`.
    pub fn unimodularity_residual(&self) -> f64 {
        (0..self.dim())
            .map(|j| self.ad(j).trace().abs())
            .fold(0.0, f64::max)
    }

    pub fn is_unimodular(&self, tol: f64) -> bool {
        self.unimodularity_residual() <= tol
    }

    /// Length of the lower central series `g ⊃ [g,g] ⊃ …` until it reaches zero,
    /// or `None` if it stabilizes at a nonzero ideal. Ranks use an SVD cutoff `tol`.
    pub fn nilpotency_class(&self, tol: f64) -> Option<usize> {
        let dim = self.dim();
        let mut current = DMatrix::<f64>::identity(dim, dim);
        let mut steps = 0;
        while current.ncols() > 0 {
            let mut cols = Vec::new();
            for i in 0..dim {
                let ad = self.ad(i);
                for c in current.column_iter() {
                    cols.push(&ad * c);
                }
            }
            let next = if cols.is_empty() {
                DMatrix::zeros(dim, 0)
            } else {
                span_basis(&DMatrix::from_columns(&cols), tol)
            };
            if next.ncols() == current.ncols() {
                return None;
            }
            current = next;
            steps += 1;
        }
        Some(steps)
    }

    /// `(dF)(X₀, …, X_p) = Σ_{a<b} (-1)^{a+b} F([X_a, X_b], X₀, …, X̂_a, …, X̂_b, …)`.
    pub fn ce_differential(&self, f: &AlternatingForm) -> AlternatingForm {
        let dim = self.dim();
        let p = f.degree();
        if p >= dim {
            return AlternatingForm::zero(dim, p + 1);
        }
        let coeffs = f.coeffs();
        let mut out = Vec::with_capacity(binomial(dim, p + 1));
        for &mask in subset_masks(dim, p + 1) {
            let idx = indices_of(mask);
            let mut sum = 0.0;
            for a in 0..idx.len() {
                for b in (a + 1)..idx.len() {
                    let terms = &self.sparse[idx[a] * dim + idx[b]];
                    if terms.is_empty() {
                        continue;
                    }
                    let rest = mask & !(1u32 << idx[a]) & !(1u32 << idx[b]);
                    let pair_sign = if (a + b) % 2 == 0 { 1.0 } else { -1.0 };
                    for &(m, c) in terms {
                        let bit = 1u32 << m;
                        if rest & bit != 0 {
                            continue;
                        }
                        let full = rest | bit;
                        let below = (rest & (bit - 1)).count_ones();
                        let front = if below.is_multiple_of(2) { 1.0 } else { -1.0 };
                        sum += pair_sign * c * front * coeffs[rank(full)];
                    }
                }
            }
            out.push(sum);
        }
        AlternatingForm::from_coeffs(dim, p + 1, out)
    }

    /// `δ = -⋆d⋆`.
    pub fn codifferential(&self, f: &AlternatingForm) -> Result<AlternatingForm> {
        if f.degree() == 0 {
            return Ok(AlternatingForm::scalar(self.dim(), 0.0));
        }
        let star = self.space.hodge_star(f)?;
        let d = self.ce_differential(&star);
        Ok(-self.space.hodge_star(&d)?)
    }
}

/// Orthonormal basis (as columns) of the column span of `m`.
fn span_basis(m: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("requested");
    let keep: Vec<_> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, s)| **s > tol)
        .map(|(i, _)| u.column(i).into_owned())
        .collect();
    if keep.is_empty() {
        DMatrix::zeros(m.nrows(), 0)
    } else {
        DMatrix::from_columns(&keep)
    }
}
