//! Invariant connections, their curvature and the Bismut Ricci form.

use nalgebra::DMatrix;

use super::hermitian::HermitianModel;
use super::lie::LieAlgebraModel;
use crate::exterior::AlternatingForm;

/// `∇_{e_i} e_j = Σ_k Γ_i[(k, j)] e_k`.
#[derive(Clone, Debug)]
pub struct ConnectionData {
    pub gamma: Vec<DMatrix<f64>>,
}

impl ConnectionData {
    pub fn dim(&self) -> usize {
        self.gamma.len()
    }

    /// `max_i |g Γ_i + Γ_iᵀ g|`.
    pub fn metric_residual(&self, g: &DMatrix<f64>) -> f64 {
        self.gamma
            .iter()
            .map(|gi| {
                let lowered = g * gi;
                (&lowered + lowered.transpose()).amax()
            })
            .fold(0.0, f64::max)
    }

    /// `max_i |Γ_i J - J Γ_i|`.
    pub fn complex_residual(&self, j: &DMatrix<f64>) -> f64 {
        self.gamma
            .iter()
            .map(|gi| (gi * j - j * gi).amax())
            .fold(0.0, f64::max)
    }

    /// Lowered torsion `g(∇_{e_i}e_j - ∇_{e_j}e_i - [e_i,e_j], e_l)` as a table.
    pub fn torsion(&self, algebra: &LieAlgebraModel) -> Vec<f64> {
        let dim = self.dim();
        let g = algebra.space().metric();
        let mut out = vec![0.0; dim * dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                let mut t: Vec<f64> = (0..dim)
                    .map(|k| {
                        self.gamma[i][(k, j)] - self.gamma[j][(k, i)] - algebra.constant(i, j, k)
                    })
                    .collect();
                let v = g * nalgebra::DVector::from_vec(std::mem::take(&mut t));
                for l in 0..dim {
                    out[(i * dim + j) * dim + l] = v[l];
                }
            }
        }
        out
    }
}

/// `R(e_i, e_j, e_k, e_l) = g(R(e_i,e_j) e_k, e_l)`.
#[derive(Clone, Debug)]
pub struct CurvatureData {
    dim: usize,
    table: Vec<f64>,
}

impl CurvatureData {
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        let d = self.dim;
        self.table[((i * d + j) * d + k) * d + l]
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn max_abs(&self) -> f64 {
        self.table.iter().fold(0.0, |a, x| a.max(x.abs()))
    }

    /// `max |R(X,Y,·,·) + R(Y,X,·,·)|`.
    pub fn antisymmetry_residual(&self) -> f64 {
        let d = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        worst = worst.max((self.get(i, j, k, l) + self.get(j, i, k, l)).abs());
                    }
                }
            }
        }
        worst
    }

    /// `max |R(X,Y,Z) + R(Y,Z,X) + R(Z,X,Y)|` (first Bianchi defect).
    pub fn bianchi_defect(&self) -> f64 {
        let d = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        let s = self.get(i, j, k, l) + self.get(j, k, i, l) + self.get(k, i, j, l);
                        worst = worst.max(s.abs());
                    }
                }
            }
        }
        worst
    }
}

/// Koszul formula `2g(∇_X Y, Z) = g([X,Y],Z) - g([Y,Z],X) + g([Z,X],Y)`.
pub fn levi_civita(algebra: &LieAlgebraModel) -> ConnectionData {
    let dim = algebra.dim();
    let g = algebra.space().metric();
    let ginv = algebra.space().metric_inverse();
    // lowered[(i,j,l)] = g([e_i, e_j], e_l)
    let mut lowered = vec![0.0; dim * dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            for l in 0..dim {
                lowered[(i * dim + j) * dim + l] = (0..dim)
                    .map(|k| algebra.constant(i, j, k) * g[(k, l)])
                    .sum();
            }
        }
    }
    let c = |i: usize, j: usize, l: usize| lowered[(i * dim + j) * dim + l];
    let gamma = (0..dim)
        .map(|i| {
            let a = DMatrix::from_fn(dim, dim, |l, j| {
                0.5 * (c(i, j, l) - c(j, l, i) + c(l, i, j))
            });
            ginv * a
        })
        .collect();
    ConnectionData { gamma }
}

/// `g(∇̂_X Y, Z) = g(∇_X Y, Z) + ½ H(X, Y, Z)`.
pub fn bismut(algebra: &LieAlgebraModel, h: &AlternatingForm) -> ConnectionData {
    let dim = algebra.dim();
    let ginv = algebra.space().metric_inverse();
    let mut lc = levi_civita(algebra);
    let mut e = vec![0.0; dim];
    for i in 0..dim {
        e.iter_mut().for_each(|x| *x = 0.0);
        e[i] = 1.0;
        let hi = h.interior(&e).expect("H has degree 3");
        let a = DMatrix::from_fn(dim, dim, |l, j| 0.5 * hi.component(&[j, l]));
        lc.gamma[i] += ginv * a;
    }
    lc
}

/// `R(e_i,e_j) = [Γ_i, Γ_j] - Σ_m c^m_{ij} Γ_m`, lowered with `g`.
pub fn curvature_tensor(algebra: &LieAlgebraModel, conn: &ConnectionData) -> CurvatureData {
    let dim = algebra.dim();
    let g = algebra.space().metric();
    let mut table = vec![0.0; dim.pow(4)];
    for i in 0..dim {
        for j in 0..dim {
            let mut r = &conn.gamma[i] * &conn.gamma[j] - &conn.gamma[j] * &conn.gamma[i];
            for m in 0..dim {
                let c = algebra.constant(i, j, m);
                if c != 0.0 {
                    r -= &conn.gamma[m] * c;
                }
            }
            let low = g * r;
            for k in 0..dim {
                for l in 0..dim {
                    table[((i * dim + j) * dim + k) * dim + l] = low[(l, k)];
                }
            }
        }
    }
    CurvatureData { dim, table }
}

/// `ρ(X, Y) = Σ_a R(X, Y, e_a, J e_a)` over an orthonormal frame.
pub fn ricci_form(model: &HermitianModel, curv: &CurvatureData) -> AlternatingForm {
    let dim = model.dim();
    let ginv = model.space().metric_inverse();
    let j = model.complex_structure().matrix();
    // Σ_a R(X,Y,e_a,Je_a) = Σ_{a,b} g^{ab} R(X,Y,e_a,J e_b)
    let partner = j * ginv;
    let mut rho = AlternatingForm::zero(dim, 2);
    for x in 0..dim {
        for y in (x + 1)..dim {
            let mut s = 0.0;
            for a in 0..dim {
                for l in 0..dim {
                    let w = partner[(l, a)];
                    if w != 0.0 {
                        s += w * curv.get(x, y, a, l);
                    }
                }
            }
            rho.set_component(&[x, y], s);
        }
    }
    rho
}

/// `b = Σ_a ρ(J e_a, e_a)` over an orthonormal frame.
pub fn ricci_trace(model: &HermitianModel, rho: &AlternatingForm) -> f64 {
    let dim = model.dim();
    let ginv = model.space().metric_inverse();
    let j = model.complex_structure().matrix();
    let partner = j * ginv;
    let mut s = 0.0;
    for a in 0..dim {
        for m in 0..dim {
            let w = partner[(m, a)];
            if w != 0.0 {
                s += w * rho.component(&[m, a]);
            }
        }
    }
    s
}

/// Bismut Ricci form and its trace.
#[derive(Clone, Debug)]
pub struct BismutRicci {
    pub rho: AlternatingForm,
    pub b_hat: f64,
    /// The same trace taken as an explicit double sum over an orthonormal frame.
    pub b_hat_double_trace: f64,
}

/// Vanishing pattern of the Bismut Ricci form and its trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RicciStatus {
    /// `ρ = 0`, the necessary condition for Bismut holonomy in `SU(n)`.
    FormZero,
    /// `b = 0` with `ρ ≠ 0`.
    TraceZeroOnly,
    NonZero,
}

impl RicciStatus {
    pub fn name(self) -> &'static str {
        match self {
            RicciStatus::FormZero => "rho_zero",
            RicciStatus::TraceZeroOnly => "b_hat_zero_only",
            RicciStatus::NonZero => "nonzero",
        }
    }
}

impl BismutRicci {
    pub fn status(&self, tol: f64) -> RicciStatus {
        if self.rho.max_abs() <= tol {
            RicciStatus::FormZero
        } else if self.b_hat.abs() <= tol {
            RicciStatus::TraceZeroOnly
        } else {
            RicciStatus::NonZero
        }
    }
}

pub fn bismut_ricci(model: &HermitianModel, h: &AlternatingForm) -> BismutRicci {
    let conn = bismut(model.algebra(), h);
    let curv = curvature_tensor(model.algebra(), &conn);
    let rho = ricci_form(model, &curv);
    let b_hat = ricci_trace(model, &rho);
    let frame = model.space().orthonormal_frame();
    let j = model.complex_structure().matrix();
    let jf = j * frame;
    let dim = model.dim();
    // Σ_{a,b} R(J f_b, f_b, f_a, J f_a) expanded in the coordinate basis.
    let mut s = 0.0;
    for a in 0..dim {
        for b in 0..dim {
            let (x, y, z, w) = (jf.column(b), frame.column(b), frame.column(a), jf.column(a));
            for i in 0..dim {
                if x[i] == 0.0 {
                    continue;
                }
                for jj in 0..dim {
                    if y[jj] == 0.0 {
                        continue;
                    }
                    for k in 0..dim {
                        if z[k] == 0.0 {
                            continue;
                        }
                        for l in 0..dim {
                            if w[l] != 0.0 {
                                s += x[i] * y[jj] * z[k] * w[l] * curv.get(i, jj, k, l);
                            }
                        }
                    }
                }
            }
        }
    }
    BismutRicci {
        rho,
        b_hat,
        b_hat_double_trace: s,
    }
}
