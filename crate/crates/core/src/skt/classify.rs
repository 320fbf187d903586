//! Structure classification: `(ℓ|k)`-SKT table, generalized Gauduchon,
//! LCK, balanced and Kähler flags, and the vanishing-margin evaluator.

use super::alpha::{alpha_k, alpha_kl, d_omega_power_h, factorial, AlphaRoute};
use super::torsion::{TorsionPackage, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::exterior::AlternatingForm;
use crate::model::{bismut_ricci, HermitianModel};

/// Scale used by zero tests: `1 + max |ω^n|`.
pub fn zero_scale(model: &HermitianModel) -> f64 {
    1.0 + model.omega().power(model.n()).max_abs()
}

fn is_zero(f: &AlternatingForm, tol: f64, scale: f64) -> bool {
    f.max_abs() <= tol * scale
}

#[derive(Clone, Debug)]
pub struct LkEntry {
    pub k: usize,
    pub l: usize,
    pub residual: f64,
    pub holds: bool,
}

#[derive(Clone, Debug)]
pub struct AlphaValues {
    pub k: usize,
    /// Values in [`AlphaRoute::ALL`] order; `None` where a route is out of domain.
    pub routes: [Option<f64>; 3],
}

impl AlphaValues {
    pub fn definitional(&self) -> f64 {
        self.routes[0].expect("definitional route always runs")
    }

    /// Largest pairwise relative gap among the available routes.
    pub fn spread(&self) -> f64 {
        let vals: Vec<f64> = self.routes.iter().flatten().copied().collect();
        let mut worst: f64 = 0.0;
        for a in &vals {
            for b in &vals {
                worst = worst.max(super::torsion::relative_gap(*a, *b));
            }
        }
        worst
    }
}

#[derive(Clone, Debug)]
pub struct SktClassification {
    pub n: usize,
    pub tol: f64,
    pub lk_table: Vec<LkEntry>,
    pub gauduchon_k: Vec<usize>,
    pub lck: bool,
    pub lck_residual: f64,
    pub balanced: bool,
    pub kahler: bool,
    pub alpha_values: Vec<AlphaValues>,
    pub alpha_kl: Vec<(usize, usize, f64)>,
}

impl SktClassification {
    pub fn lk(&self, l: usize, k: usize) -> Option<&LkEntry> {
        self.lk_table.iter().find(|e| e.k == k && e.l == l)
    }

    /// `d(ω^{k-1} ∧ H) = 0`.
    pub fn is_k_skt(&self, k: usize) -> bool {
        self.lk(0, k).is_some_and(|e| e.holds)
    }

    /// `k`-SKT for every admissible `k`.
    pub fn k_skt_all(&self) -> bool {
        (1..self.n).all(|k| self.is_k_skt(k))
    }
}

/// `ω^ℓ ∧ d(ω^{k-1} ∧ H)`.
pub fn lk_form(model: &HermitianModel, h: &AlternatingForm, k: usize, l: usize) -> AlternatingForm {
    model
        .omega()
        .power(l)
        .wedge(&d_omega_power_h(model, h, k))
        .expect("same frame")
}

/// `max |H - (1/(n-1)) Jθ ∧ ω|`.
pub fn lck_residual(model: &HermitianModel, pkg: &TorsionPackage) -> f64 {
    let n = model.n() as f64;
    let jtheta = model.complex_structure().j_transform(&pkg.theta);
    let target = jtheta.wedge(model.omega()).expect("same frame") * (1.0 / (n - 1.0));
    pkg.h.distance(&target)
}

#[derive(Clone, Debug)]
pub struct LckReport {
    pub is_lck: bool,
    pub residual: f64,
    /// `(k, α_k)` from `(n-3)!(n-k-1)(n-2)/(n-1) ‖θ‖²` when the structure is
    /// LCK, Gauduchon and non-Kähler, `n ≥ 3`.
    pub alpha_prediction: Vec<(usize, f64)>,
}

/// `α_k = (n-3)!(n-k-1)(‖θ‖² - ‖H‖²/6)` with `‖H‖² = 6‖θ‖²/(n-1)` and `δθ = 0`.
pub fn lck_gauduchon_alpha(n: usize, k: usize, norm_theta_sq: f64) -> f64 {
    let nf = n as f64;
    factorial(n - 3) * (nf - k as f64 - 1.0) * (nf - 2.0) / (nf - 1.0) * norm_theta_sq
}

pub fn lck_detect(model: &HermitianModel, pkg: &TorsionPackage, tol: f64) -> LckReport {
    let n = model.n();
    let scale = 1.0 + pkg.h.max_abs() + pkg.theta.max_abs();
    let residual = lck_residual(model, pkg);
    let is_lck = residual <= tol * scale;
    let mut alpha_prediction = Vec::new();
    let gauduchon = pkg.delta_theta.abs() <= tol * (1.0 + pkg.norm_theta_sq);
    if is_lck && gauduchon && n >= 3 && pkg.theta.max_abs() > tol {
        for k in 1..n {
            alpha_prediction.push((k, lck_gauduchon_alpha(n, k, pkg.norm_theta_sq)));
        }
    }
    LckReport {
        is_lck,
        residual,
        alpha_prediction,
    }
}

/// The `(ℓ|k)` condition for one pair, thresholded at `tol (1 + max |ω^n|)`.
pub fn lk_entry(
    model: &HermitianModel,
    h: &AlternatingForm,
    k: usize,
    l: usize,
    tol: f64,
) -> LkEntry {
    let f = lk_form(model, h, k, l);
    LkEntry {
        k,
        l,
        residual: f.max_abs(),
        holds: is_zero(&f, tol, zero_scale(model)),
    }
}

pub fn skt_classify(model: &HermitianModel, pkg: &TorsionPackage, tol: f64) -> SktClassification {
    let n = model.n();
    let scale = zero_scale(model);
    let mut lk_table = Vec::new();
    for k in 1..n {
        for l in 0..(n - k) {
            lk_table.push(lk_entry(model, &pkg.h, k, l, tol));
        }
    }
    let mut alpha_values = Vec::new();
    let mut gauduchon_k = Vec::new();
    for k in 1..n {
        let mut routes = [None; 3];
        for (slot, route) in AlphaRoute::ALL.iter().enumerate() {
            routes[slot] = alpha_k(model, pkg, k, *route).ok();
        }
        let values = AlphaValues { k, routes };
        if values.definitional().abs() <= tol * scale {
            gauduchon_k.push(k);
        }
        alpha_values.push(values);
    }
    let mut alpha_kl_values = Vec::new();
    for k in 1..n {
        for l in 0..(n - k) {
            let v = alpha_kl(model, &pkg.h, k, l).expect("admissible pair");
            alpha_kl_values.push((k, l, v));
        }
    }
    let lck = lck_detect(model, pkg, tol);
    let dw = model.d(model.omega());
    SktClassification {
        n,
        tol,
        lk_table,
        gauduchon_k,
        lck: lck.is_lck,
        lck_residual: lck.residual,
        balanced: is_zero(&pkg.theta, tol, scale),
        kahler: is_zero(&dw, tol, scale),
        alpha_values,
        alpha_kl: alpha_kl_values,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Positive,
    Zero,
    Negative,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Positive => "positive",
            Verdict::Zero => "zero",
            Verdict::Negative => "negative",
        }
    }
}

#[derive(Clone, Debug)]
pub struct MarginReport {
    pub k: usize,
    /// `b̂ + (n-k-1)/(3(n-2))‖H‖² + 2(k-1)/(n-2)‖θ‖²`.
    pub margin: f64,
    pub verdict: Verdict,
    pub b_hat: f64,
    pub h_term: f64,
    pub theta_term: f64,
    /// `b̂ + ‖C‖² + ¼ Σ λ(e_i, J e_i)`.
    pub chern_expression: f64,
    /// Whether the model is `(ℓ|k)`-SKT for some `ℓ`, so the two expressions must agree.
    pub equality_asserted: bool,
}

pub fn vanishing_margin(
    model: &HermitianModel,
    pkg: &TorsionPackage,
    k: usize,
    tol: f64,
) -> Result<MarginReport> {
    let n = model.n();
    if n <= 2 {
        return Err(Error::Domain("the vanishing margin needs n > 2".into()));
    }
    if k == 0 || k >= n {
        return Err(Error::Domain(format!("k = {k} outside 1..={}", n - 1)));
    }
    let ricci = bismut_ricci(model, &pkg.h);
    let nf = n as f64;
    let kf = k as f64;
    let h_term = (nf - kf - 1.0) / (3.0 * (nf - 2.0)) * pkg.norm_h_sq;
    let theta_term = 2.0 * (kf - 1.0) / (nf - 2.0) * pkg.norm_theta_sq;
    let margin = ricci.b_hat + h_term + theta_term;
    let chern_expression = ricci.b_hat + pkg.norm_c_sq + 0.25 * pkg.lambda_trace;
    let scale = zero_scale(model);
    let equality_asserted =
        (0..(n - k)).any(|l| is_zero(&lk_form(model, &pkg.h, k, l), tol, scale));
    let verdict =
        if margin.abs() <= tol * (1.0 + ricci.b_hat.abs() + pkg.norm_h_sq + pkg.norm_theta_sq) {
            Verdict::Zero
        } else if margin > 0.0 {
            Verdict::Positive
        } else {
            Verdict::Negative
        };
    if equality_asserted {
        let gap = super::torsion::relative_gap(margin, chern_expression);
        if gap > 1e-8 {
            return Err(Error::Consistency {
                what: "vanishing margin and Chern-torsion expression".into(),
                residual: gap,
            });
        }
    }
    Ok(MarginReport {
        k,
        margin,
        verdict,
        b_hat: ricci.b_hat,
        h_term,
        theta_term,
        chern_expression,
        equality_asserted,
    })
}

/// Convenience: default-tolerance classification from a model alone.
pub fn classify(model: &HermitianModel) -> Result<(TorsionPackage, SktClassification)> {
    let pkg = TorsionPackage::compute(model)?;
    let c = skt_classify(model, &pkg, DEFAULT_TOL);
    Ok((pkg, c))
}
