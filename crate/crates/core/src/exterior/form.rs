//! Dense alternating forms over a fixed coframe `e^0, …, e^{N-1}`.
//!
//! A degree-`p` form is stored as one coefficient per strictly increasing
//! index tuple, i.e. `F = Σ_{i₁<…<i_p} F_{i₁…i_p} e^{i₁}∧…∧e^{i_p}` with
//! `F_{i₁…i_p} = F(e_{i₁}, …, e_{i_p})`. Tuples are encoded as bitmasks and
//! ordered colexicographically (numeric order of the masks).

use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::OnceLock;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Largest supported frame dimension (index tuples are stored as `u32` masks).
pub const MAX_DIM: usize = 16;

const fn binomial_table() -> [[usize; MAX_DIM + 1]; MAX_DIM + 1] {
    let mut t = [[0usize; MAX_DIM + 1]; MAX_DIM + 1];
    let mut n = 0;
    while n <= MAX_DIM {
        t[n][0] = 1;
        let mut k = 1;
        while k <= n {
            t[n][k] = t[n - 1][k - 1] + if k < n { t[n - 1][k] } else { 0 };
            k += 1;
        }
        n += 1;
    }
    t
}

static BINOMIAL: [[usize; MAX_DIM + 1]; MAX_DIM + 1] = binomial_table();

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n || n > MAX_DIM {
        0
    } else {
        BINOMIAL[n][k]
    }
}

/// Colex rank of a mask among masks of the same popcount.
#[inline]
pub(crate) fn rank(mask: u32) -> usize {
    let mut r = 0;
    let mut j = 0;
    let mut m = mask;
    while m != 0 {
        let i = m.trailing_zeros() as usize;
        j += 1;
        r += binomial(i, j);
        m &= m - 1;
    }
    r
}

/// All masks of popcount `degree` inside `0..dim`, in colex order.
pub(crate) fn subset_masks(dim: usize, degree: usize) -> &'static [u32] {
    static TABLE: OnceLock<Vec<Vec<u32>>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut by_degree = vec![Vec::new(); MAX_DIM + 1];
        for m in 0u32..(1u32 << MAX_DIM) {
            by_degree[m.count_ones() as usize].push(m);
        }
        by_degree
    });
    if degree > MAX_DIM {
        return &[];
    }
    &table[degree][..binomial(dim, degree)]
}

#[inline]
fn sign_of(count: u32) -> f64 {
    if count & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Sign of `e^a ∧ e^b = ± e^{a∪b}` for disjoint masks.
#[inline]
pub(crate) fn merge_sign(a: u32, b: u32) -> f64 {
    let mut count = 0;
    let mut m = b;
    while m != 0 {
        let j = m.trailing_zeros();
        count += (a >> j >> 1).count_ones();
        m &= m - 1;
    }
    sign_of(count)
}

/// Sign picked up by moving `e^k` to the front of the monomial `e^mask`.
#[inline]
pub(crate) fn front_sign(mask: u32, k: usize) -> f64 {
    sign_of((mask & ((1u32 << k) - 1)).count_ones())
}

pub(crate) fn mask_of(indices: &[usize]) -> Option<(u32, f64)> {
    let mut mask = 0u32;
    let mut inversions = 0u32;
    for (pos, &i) in indices.iter().enumerate() {
        let bit = 1u32 << i;
        if mask & bit != 0 {
            return None;
        }
        mask |= bit;
        inversions += indices[..pos].iter().filter(|&&j| j > i).count() as u32;
    }
    Some((mask, sign_of(inversions)))
}

pub(crate) fn indices_of(mask: u32) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut m = mask;
    while m != 0 {
        out.push(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlternatingForm {
    dim: usize,
    degree: usize,
    coeffs: Vec<f64>,
}

impl AlternatingForm {
    /// The zero form. Degrees above `dim` are allowed and carry no components.
    pub fn zero(dim: usize, degree: usize) -> Self {
        assert!(dim <= MAX_DIM, "frame dimension {dim} exceeds {MAX_DIM}");
        Self {
            dim,
            degree,
            coeffs: vec![0.0; binomial(dim, degree)],
        }
    }

    pub fn scalar(dim: usize, value: f64) -> Self {
        let mut f = Self::zero(dim, 0);
        f.coeffs[0] = value;
        f
    }

    pub fn one_form(components: &[f64]) -> Self {
        let mut f = Self::zero(components.len(), 1);
        f.coeffs.copy_from_slice(components);
        f
    }

    /// `e^{i₁}∧…∧e^{i_p}` for indices in any order.
    pub fn basis(dim: usize, indices: &[usize]) -> Self {
        let mut f = Self::zero(dim, indices.len());
        if let Some((mask, sign)) = mask_of(indices) {
            f.coeffs[rank(mask)] = sign;
        }
        f
    }

    /// Sum of `c · e^{I}` over the given terms.
    pub fn from_terms(dim: usize, degree: usize, terms: &[(&[usize], f64)]) -> Self {
        let mut f = Self::zero(dim, degree);
        for (indices, c) in terms {
            assert_eq!(indices.len(), degree, "term degree mismatch");
            if let Some((mask, sign)) = mask_of(indices) {
                f.coeffs[rank(mask)] += sign * c;
            }
        }
        f
    }

    /// Dense coefficients in the storage order of [`AlternatingForm::coeffs`].
    pub fn from_coeffs(dim: usize, degree: usize, coeffs: Vec<f64>) -> Self {
        assert_eq!(coeffs.len(), binomial(dim, degree), "coefficient count");
        Self {
            dim,
            degree,
            coeffs,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Coefficients over increasing index tuples in colex order.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// `F(e_{i₁}, …, e_{i_p})` for indices in any order.
    pub fn component(&self, indices: &[usize]) -> f64 {
        assert_eq!(indices.len(), self.degree, "component arity mismatch");
        match mask_of(indices) {
            Some((mask, sign)) => sign * self.coeffs[rank(mask)],
            None => 0.0,
        }
    }

    /// Sets the component so that `component(indices) == value` afterwards.
    pub fn set_component(&mut self, indices: &[usize], value: f64) {
        assert_eq!(indices.len(), self.degree, "component arity mismatch");
        if let Some((mask, sign)) = mask_of(indices) {
            self.coeffs[rank(mask)] = sign * value;
        }
    }

    pub(crate) fn mask_terms(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        let masks = subset_masks(self.dim, self.degree);
        self.coeffs
            .iter()
            .zip(masks)
            .filter(|(c, _)| **c != 0.0)
            .map(|(c, m)| (*m, *c))
    }

    /// Nonzero terms as (increasing indices, coefficient).
    pub fn terms(&self) -> Vec<(Vec<usize>, f64)> {
        self.mask_terms().map(|(m, c)| (indices_of(m), c)).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |acc, c| acc.max(c.abs()))
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.max_abs() <= tol
    }

    /// Coefficient of `e^0∧…∧e^{N-1}`; zero unless the degree is top.
    pub fn top_coefficient(&self) -> f64 {
        if self.degree == self.dim {
            self.coeffs[0]
        } else {
            0.0
        }
    }

    /// Value of a degree-0 form.
    pub fn scalar_value(&self) -> f64 {
        if self.degree == 0 {
            self.coeffs[0]
        } else {
            0.0
        }
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let degree = self.degree + other.degree;
        let mut out = Self::zero(self.dim, degree);
        if degree > self.dim {
            return Ok(out);
        }
        let rhs: Vec<(u32, f64)> = other.mask_terms().collect();
        for (a, ca) in self.mask_terms() {
            for &(b, cb) in &rhs {
                if a & b == 0 {
                    out.coeffs[rank(a | b)] += merge_sign(a, b) * ca * cb;
                }
            }
        }
        Ok(out)
    }

    /// `ω^k` under the wedge product, with `ω^0 = 1`.
    pub fn power(&self, k: usize) -> Self {
        let mut acc = Self::scalar(self.dim, 1.0);
        for _ in 0..k {
            acc = acc.wedge(self).expect("same frame");
        }
        acc
    }

    /// `(i_v F)(X₁…) = F(v, X₁, …)`.
    pub fn interior(&self, v: &[f64]) -> Result<Self> {
        if self.degree == 0 {
            return Err(Error::Degree("interior product of a degree-0 form".into()));
        }
        if v.len() != self.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                found: v.len(),
            });
        }
        let mut out = Self::zero(self.dim, self.degree - 1);
        for (mask, c) in self.mask_terms() {
            let mut m = mask;
            while m != 0 {
                let k = m.trailing_zeros() as usize;
                if v[k] != 0.0 {
                    out.coeffs[rank(mask ^ (1 << k))] += front_sign(mask, k) * v[k] * c;
                }
                m &= m - 1;
            }
        }
        Ok(out)
    }

    pub(crate) fn interior_basis(&self, k: usize) -> Self {
        let mut v = vec![0.0; self.dim];
        v[k] = 1.0;
        self.interior(&v).expect("degree checked by caller")
    }

    /// `F(v₁, …, v_p)` via minors of the matrix with columns `v_a`.
    pub fn evaluate(&self, vectors: &[&[f64]]) -> f64 {
        assert_eq!(vectors.len(), self.degree, "evaluate arity mismatch");
        if self.degree == 0 {
            return self.coeffs[0];
        }
        let p = self.degree;
        let mut sum = 0.0;
        for (mask, c) in self.mask_terms() {
            let rows = indices_of(mask);
            let sub = DMatrix::from_fn(p, p, |r, col| vectors[col][rows[r]]);
            sum += c * sub.determinant();
        }
        sum
    }

    /// `(A*F)(X₁, …) = F(A X₁, …)` for a linear map `A` on frame vectors.
    pub fn pull_back(&self, a: &DMatrix<f64>) -> Self {
        assert_eq!(a.nrows(), self.dim);
        assert_eq!(a.ncols(), self.dim);
        if self.degree == 0 || self.degree > self.dim {
            return self.clone();
        }
        match lu_factor(a) {
            Some(lu) => self.pull_back_lu(&lu),
            None => self.pull_back_minors(a),
        }
    }

    fn pull_back_lu(&self, lu: &LuFactors) -> Self {
        let n = self.dim;
        // A = Pᵀ L U with U = D U₁; the leftmost factor is pulled back first.
        let mut f = self.relabel(&lu.row_of);
        for j in 0..n.saturating_sub(1) {
            let adds: Vec<(usize, f64)> = ((j + 1)..n)
                .map(|k| (k, lu.lu[(k, j)]))
                .filter(|(_, c)| *c != 0.0)
                .collect();
            if !adds.is_empty() {
                f = f.shear(j, &adds);
            }
        }
        let diag: Vec<f64> = (0..n).map(|k| lu.lu[(k, k)]).collect();
        f = f.scale_indices(&diag);
        for j in (1..n).rev() {
            let adds: Vec<(usize, f64)> = (0..j)
                .map(|k| (k, lu.lu[(k, j)] / lu.lu[(k, k)]))
                .filter(|(_, c)| *c != 0.0)
                .collect();
            if !adds.is_empty() {
                f = f.shear(j, &adds);
            }
        }
        f
    }

    pub(crate) fn pull_back_minors(&self, a: &DMatrix<f64>) -> Self {
        let p = self.degree;
        let masks = subset_masks(self.dim, p);
        let mut out = Self::zero(self.dim, p);
        for (src, c) in self.mask_terms() {
            let rows = indices_of(src);
            for (slot, &dst) in masks.iter().enumerate() {
                let cols = indices_of(dst);
                let sub = DMatrix::from_fn(p, p, |r, col| a[(rows[r], cols[col])]);
                out.coeffs[slot] += c * sub.determinant();
            }
        }
        out
    }

    /// Pullback by the permutation sending coframe `e^k` to `e^{target[k]}`.
    fn relabel(&self, target: &[usize]) -> Self {
        let mut out = Self::zero(self.dim, self.degree);
        for (mask, c) in self.mask_terms() {
            let mapped: Vec<usize> = indices_of(mask).into_iter().map(|i| target[i]).collect();
            let (m, sign) = mask_of(&mapped).expect("permutation is injective");
            out.coeffs[rank(m)] += sign * c;
        }
        out
    }

    /// Pullback by the diagonal map `e^k ↦ d_k e^k`.
    fn scale_indices(&self, d: &[f64]) -> Self {
        let mut out = self.clone();
        for (slot, &mask) in subset_masks(self.dim, self.degree).iter().enumerate() {
            let mut factor = 1.0;
            let mut m = mask;
            while m != 0 {
                factor *= d[m.trailing_zeros() as usize];
                m &= m - 1;
            }
            out.coeffs[slot] *= factor;
        }
        out
    }

    /// Pullback by the substitution `e^k ↦ e^k + c_k e^j` for each `(k, c_k)`.
    fn shear(&self, j: usize, adds: &[(usize, f64)]) -> Self {
        let mut out = self.clone();
        let jbit = 1u32 << j;
        for (mask, x) in self.mask_terms() {
            if mask & jbit != 0 {
                continue;
            }
            for &(k, c) in adds {
                let kbit = 1u32 << k;
                if mask & kbit == 0 {
                    continue;
                }
                let (lo, hi) = if j < k { (j, k) } else { (k, j) };
                let between = mask & !((1u32 << (lo + 1)) - 1) & ((1u32 << hi) - 1);
                let target = (mask ^ kbit) | jbit;
                out.coeffs[rank(target)] += sign_of(between.count_ones()) * c * x;
            }
        }
        out
    }

    /// Relative-scale helper: `max |F|` of `self - other`.
    pub fn distance(&self, other: &Self) -> f64 {
        assert_eq!((self.dim, self.degree), (other.dim, other.degree));
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .fold(0.0, |acc, (a, b)| acc.max((a - b).abs()))
    }
}

/// Doolittle factors with partial pivoting, `P A = L U`, packed in one matrix.
struct LuFactors {
    lu: DMatrix<f64>,
    /// Coframe relabelling for the pullback by `Pᵀ`.
    row_of: Vec<usize>,
}

fn lu_factor(a: &DMatrix<f64>) -> Option<LuFactors> {
    let n = a.nrows();
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let scale = a.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1e-300);
    for col in 0..n {
        let (pivot, best) = (col..n)
            .map(|r| (r, lu[(r, col)].abs()))
            .fold((col, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best <= 1e-14 * scale {
            return None;
        }
        if pivot != col {
            lu.swap_rows(pivot, col);
            perm.swap(pivot, col);
        }
        for r in (col + 1)..n {
            let f = lu[(r, col)] / lu[(col, col)];
            lu[(r, col)] = f;
            for c in (col + 1)..n {
                let v = lu[(col, c)];
                lu[(r, c)] -= f * v;
            }
        }
    }
    // Row i of P A is row perm[i] of A, so Pᵀ e_i = e_{perm[i]} and the
    // pullback by Pᵀ sends e^{perm[i]} to e^i.
    let mut row_of = vec![0; n];
    for (i, &p) in perm.iter().enumerate() {
        row_of[p] = i;
    }
    Some(LuFactors { lu, row_of })
}

impl Add for &AlternatingForm {
    type Output = AlternatingForm;
    fn add(self, rhs: &AlternatingForm) -> AlternatingForm {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for AlternatingForm {
    type Output = AlternatingForm;
    fn add(mut self, rhs: AlternatingForm) -> AlternatingForm {
        self += &rhs;
        self
    }
}

impl AddAssign<&AlternatingForm> for AlternatingForm {
    fn add_assign(&mut self, rhs: &AlternatingForm) {
        assert_eq!(
            (self.dim, self.degree),
            (rhs.dim, rhs.degree),
            "adding forms of different shape"
        );
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl SubAssign<&AlternatingForm> for AlternatingForm {
    fn sub_assign(&mut self, rhs: &AlternatingForm) {
        assert_eq!(
            (self.dim, self.degree),
            (rhs.dim, rhs.degree),
            "subtracting forms of different shape"
        );
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
    }
}

impl Sub for &AlternatingForm {
    type Output = AlternatingForm;
    fn sub(self, rhs: &AlternatingForm) -> AlternatingForm {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for AlternatingForm {
    type Output = AlternatingForm;
    fn sub(mut self, rhs: AlternatingForm) -> AlternatingForm {
        self -= &rhs;
        self
    }
}

impl Neg for AlternatingForm {
    type Output = AlternatingForm;
    fn neg(mut self) -> AlternatingForm {
        self.coeffs.iter_mut().for_each(|c| *c = -*c);
        self
    }
}

impl Mul<f64> for &AlternatingForm {
    type Output = AlternatingForm;
    fn mul(self, rhs: f64) -> AlternatingForm {
        let mut out = self.clone();
        out.coeffs.iter_mut().for_each(|c| *c *= rhs);
        out
    }
}

impl Mul<f64> for AlternatingForm {
    type Output = AlternatingForm;
    fn mul(mut self, rhs: f64) -> AlternatingForm {
        self.coeffs.iter_mut().for_each(|c| *c *= rhs);
        self
    }
}
