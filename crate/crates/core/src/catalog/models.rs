//! Constructors for the built-in Hermitian models.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::exterior::{ComplexOperator, FrameSpace};
use crate::model::{HermitianModel, LieAlgebraModel};

pub type Bracket = (usize, usize, usize, f64);

fn build(dim: usize, brackets: &[Bracket]) -> Result<HermitianModel> {
    let space = FrameSpace::euclidean(dim)?;
    let algebra = LieAlgebraModel::new(space, brackets)?;
    HermitianModel::new(algebra, ComplexOperator::standard(dim)?)
}

fn shifted(brackets: &[Bracket], offset: usize) -> Vec<Bracket> {
    brackets
        .iter()
        .map(|&(i, j, k, c)| (i + offset, j + offset, k + offset, c))
        .collect()
}

/// `[e_a, e_b] = 2 ε_{abc} e_c` on `e_1, e_2, e_3`, with `e_0` central.
pub fn hopf_brackets() -> Vec<Bracket> {
    vec![(1, 2, 3, 2.0), (2, 3, 1, 2.0), (3, 1, 2, 2.0)]
}

/// Complex Heisenberg algebra: `dφ³ = φ¹∧φ²` with `φ^a = e^{2a} + i e^{2a+1}`.
pub fn iwasawa_brackets() -> Vec<Bracket> {
    vec![
        (0, 2, 4, -1.0),
        (1, 3, 4, 1.0),
        (0, 3, 5, -1.0),
        (1, 2, 5, -1.0),
    ]
}

/// `h_{2n-1} ⊕ R`: `[e_{2a}, e_{2a+1}] = c e_{2n-2}` for `a < n-1`, `e_{2n-1}` central.
pub fn lck_nil_brackets(n: usize, c: f64) -> Vec<Bracket> {
    (0..n - 1)
        .map(|a| (2 * a, 2 * a + 1, 2 * n - 2, c))
        .collect()
}

/// `R ⋉ R^5` with `ad_{e_0} = diag(a, b, b, b, b)` on `e_1, …, e_5`.
pub fn solvable_brackets(a: f64, b: f64) -> Vec<Bracket> {
    let mut out = vec![(0, 1, 1, a)];
    out.extend((2..6).map(|i| (0, i, i, b)));
    out
}

pub fn flat_torus(n: usize) -> Result<HermitianModel> {
    if !(2..=6).contains(&n) {
        return Err(Error::Lookup(format!(
            "flat_torus needs 2 <= n <= 6, got {n}"
        )));
    }
    build(2 * n, &[])
}

pub fn hopf() -> Result<HermitianModel> {
    build(4, &hopf_brackets())
}

/// Flat `T^{2m}` (indices `0..2m`) times the Hopf model.
pub fn product_kahler_hopf(m: usize) -> Result<HermitianModel> {
    if !(1..=4).contains(&m) {
        return Err(Error::Lookup(format!(
            "product_kahler_hopf needs 1 <= m <= 4, got {m}"
        )));
    }
    build(2 * m + 4, &shifted(&hopf_brackets(), 2 * m))
}

/// Flat `T^{2m}` times the Iwasawa model.
pub fn product_kahler_iwasawa(m: usize) -> Result<HermitianModel> {
    if m > 3 {
        return Err(Error::Lookup(format!(
            "product_kahler_iwasawa needs m <= 3, got {m}"
        )));
    }
    build(2 * m + 6, &shifted(&iwasawa_brackets(), 2 * m))
}

pub fn iwasawa() -> Result<HermitianModel> {
    build(6, &iwasawa_brackets())
}

pub fn lck_nil(n: usize) -> Result<HermitianModel> {
    if !(2..=6).contains(&n) {
        return Err(Error::Lookup(format!("lck_nil needs 2 <= n <= 6, got {n}")));
    }
    build(2 * n, &lck_nil_brackets(n, 1.0))
}

pub fn solvable_nonunimodular(a: f64, b: f64) -> Result<HermitianModel> {
    if a == 0.0 && b == 0.0 {
        return Err(Error::Lookup(
            "solvable_nonunimodular needs (a, b) != (0, 0)".into(),
        ));
    }
    build(6, &solvable_brackets(a, b))
}

/// A random `J`-compatible metric `Aᵀ g A` with `A = 1 + s·½(X - JXJ)`, `X` uniform in `[-1,1]`.
pub fn random_compatible_metric(
    model: &HermitianModel,
    rng: &mut impl rand::Rng,
    strength: f64,
) -> DMatrix<f64> {
    let dim = model.dim();
    let j = model.complex_structure().matrix();
    let x = DMatrix::from_fn(dim, dim, |_, _| rng.random_range(-1.0..1.0));
    let commuting = (&x - j * &x * j) * 0.5;
    let a = DMatrix::identity(dim, dim) + commuting * strength;
    let g = a.transpose() * model.space().metric() * &a;
    (&g + g.transpose()) * 0.5
}
