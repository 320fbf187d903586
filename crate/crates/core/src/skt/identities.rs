//! Pointwise torsion identities, evaluated on a model and on random
//! compatible perturbations of its metric.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::alpha::{alpha_k, alpha_kl, factorial, AlphaRoute};
use super::classify::{lck_detect, lk_form, zero_scale};
use super::torsion::{
    bidegree_contraction, lee_form_codifferential, lee_form_contraction, TorsionPackage,
};
use crate::catalog::random_compatible_metric;
use crate::error::Result;
use crate::exterior::{AlternatingForm, FrameSpace};
use crate::model::HermitianModel;

/// Pass threshold on the normalized residual of every identity.
pub const IDENTITY_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityCheck {
    pub name: &'static str,
    /// The formula being checked, written out.
    pub formula: &'static str,
    /// Worst normalized residual over every evaluation.
    pub residual: f64,
    /// Number of (model, metric) evaluations where the identity applied.
    pub evaluated: usize,
}

impl IdentityCheck {
    pub fn passed(&self) -> bool {
        self.residual <= IDENTITY_TOL
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.evaluated == 0 || c.passed())
    }

    pub fn get(&self, name: &str) -> Option<&IdentityCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn record(&mut self, name: &'static str, formula: &'static str, residual: Option<f64>) {
        let slot = match self.checks.iter_mut().find(|c| c.name == name) {
            Some(s) => s,
            None => {
                self.checks.push(IdentityCheck {
                    name,
                    formula,
                    residual: 0.0,
                    evaluated: 0,
                });
                self.checks.last_mut().expect("just pushed")
            }
        };
        if let Some(r) = residual {
            slot.residual = slot.residual.max(r);
            slot.evaluated += 1;
        }
    }

    /// Combine per-check maxima; check order follows `self` then new names in `other`.
    pub fn merge(&mut self, other: &IdentityReport) {
        for c in &other.checks {
            self.record(c.name, c.formula, None);
            let slot = self
                .checks
                .iter_mut()
                .find(|s| s.name == c.name)
                .expect("recorded");
            slot.residual = slot.residual.max(c.residual);
            slot.evaluated += c.evaluated;
        }
    }
}

fn scalar_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / (1.0 + a.abs() + b.abs())
}

fn form_gap(a: &AlternatingForm, b: &AlternatingForm) -> f64 {
    a.distance(b) / (1.0 + a.max_abs() + b.max_abs())
}

/// Σ over an orthonormal frame `f_i` of `op(i_{f_i} F, i_{f_i} F)`.
fn frame_sum<F>(space: &FrameSpace, f: &AlternatingForm, mut op: F) -> Option<AlternatingForm>
where
    F: FnMut(&AlternatingForm, &AlternatingForm) -> AlternatingForm,
{
    let p = space.orthonormal_frame();
    let mut acc: Option<AlternatingForm> = None;
    for a in 0..space.dim() {
        let v: Vec<f64> = p.column(a).iter().copied().collect();
        let inner = f.interior(&v).ok()?;
        let term = op(&inner, &inner);
        acc = Some(match acc {
            Some(s) => s + term,
            None => term,
        });
    }
    acc
}

/// `Σ_i F(X, …, e_i, J e_i)` applied to `d(ω ∧ H)` once.
pub fn four_form_trace_sides(
    model: &HermitianModel,
    pkg: &TorsionPackage,
) -> (AlternatingForm, AlternatingForm) {
    let j = model.complex_structure();
    let space = model.space();
    let omega = model.omega();
    let n = model.n() as f64;
    let dwh = model.d(&omega.wedge(&pkg.h).expect("same frame"));
    let lhs = j.ei_jei_trace(&dwh, space, 1).expect("degree 6");
    let jh = j.j_transform(&pkg.h);
    let jtheta = j.j_transform(&pkg.theta);
    let w = |a: &AlternatingForm, b: &AlternatingForm| a.wedge(b).expect("same frame");
    let quad = frame_sum(space, &pkg.h, |a, b| w(&j.j_transform(a), b)).expect("degree 3");
    let rhs = &pkg.dh * (8.0 - 2.0 * n)
        + w(omega, &pkg.lambda)
        + w(&jh, &jtheta) * 2.0
        + w(&pkg.h, &pkg.theta) * 2.0
        + quad * 2.0;
    (lhs, rhs)
}

/// Both sides of the double-trace identity for `d(ω ∧ H)(e_i, Je_i, e_j, Je_j, X, Y)`.
pub fn double_trace_sides(
    model: &HermitianModel,
    pkg: &TorsionPackage,
) -> (AlternatingForm, AlternatingForm) {
    let j = model.complex_structure();
    let space = model.space();
    let omega = model.omega();
    let n = model.n() as f64;
    let dwh = model.d(&omega.wedge(&pkg.h).expect("same frame"));
    let lhs = j.ei_jei_trace(&dwh, space, 2).expect("degree 6");
    let jtheta = j.j_transform(&pkg.theta);
    let v: Vec<f64> = space.raise(&jtheta).iter().copied().collect();
    let vh = pkg.h.interior(&v).expect("degree 3");
    let p = space.orthonormal_frame();
    let dim = space.dim();
    let mut quad = AlternatingForm::zero(dim, 2);
    for a in 0..dim {
        let fa: Vec<f64> = p.column(a).iter().copied().collect();
        let ha = pkg.h.interior(&fa).expect("degree 3");
        for b in 0..dim {
            let fb: Vec<f64> = p.column(b).iter().copied().collect();
            let hab = ha.interior(&fb).expect("degree 2");
            quad += &j.j_transform(&hab).wedge(&hab).expect("same frame");
        }
    }
    let rhs = &pkg.lambda * (12.0 - 4.0 * n)
        + omega * pkg.lambda_trace
        + pkg.theta.wedge(&jtheta).expect("same frame") * 8.0
        - &vh * 8.0
        - j.j_transform(&vh) * 8.0
        + quad * 4.0;
    (lhs, rhs)
}

/// Evaluates every applicable model identity for one metric.
pub fn model_identities(model: &HermitianModel, tol: f64) -> Result<IdentityReport> {
    let pkg = TorsionPackage::compute(model)?;
    let mut r = IdentityReport { checks: Vec::new() };
    let n = model.n();
    let nf = n as f64;
    let scale = zero_scale(model);

    let a = lee_form_contraction(model, &pkg.h);
    let b = lee_form_codifferential(model)?;
    r.record(
        "lee_form_routes",
        "-1/2 H(JX, e_i, Je_i) = (delta omega)(JX)",
        Some(form_gap(&a, &b)),
    );

    let bad = model.complex_structure().pq_part(&pkg.h, 3, 0);
    r.record(
        "torsion_bidegree",
        "H has no (3,0)+(0,3) part",
        Some(bad.max_abs() / (1.0 + pkg.h.max_abs())),
    );

    let (l, rr) = four_form_trace_sides(model, &pkg);
    r.record(
        "trace_d_omega_h",
        "d(w^H)(.,e_i,Je_i) = (8-2n)dH + w^lambda + 2 JH^Jtheta + 2 H^theta + 2 J(e_i-|H)^(e_i-|H)",
        Some(form_gap(&l, &rr)),
    );

    let (l, rr) = double_trace_sides(model, &pkg);
    r.record(
        "double_trace_d_omega_h",
        "d(w^H)(e_i,Je_i,e_j,Je_j,.) = (12-4n)lambda + tr(lambda) w + 8 theta^Jtheta - 8 Jtheta-|H - 8 J(Jtheta-|H) + 4 J(e_ie_j-|H)^(e_ie_j-|H)",
        Some(form_gap(&l, &rr)),
    );

    r.record(
        "lambda_trace",
        "tr(lambda) = 8 delta theta + 8|theta|^2 - 4/3 |H|^2",
        Some(scalar_gap(
            pkg.lambda_trace,
            8.0 * pkg.delta_theta + 8.0 * pkg.norm_theta_sq - 4.0 / 3.0 * pkg.norm_h_sq,
        )),
    );

    r.record(
        "bidegree_h_contraction",
        "H(Je_k,Je_i,e_j) H(e_k,e_i,e_j) = |H|^2/3",
        Some(scalar_gap(
            bidegree_contraction(model, &pkg.h),
            pkg.norm_h_sq / 3.0,
        )),
    );

    r.record(
        "chern_torsion_norm",
        "|C|^2 = |H|^2/3",
        Some(scalar_gap(pkg.norm_c_sq, pkg.norm_h_sq / 3.0)),
    );

    let lambda_mixed = model.complex_structure().pq_part(&pkg.lambda, 2, 0);
    r.record(
        "lambda_bidegree",
        "lambda is of type (1,1)",
        Some(lambda_mixed.max_abs() / (1.0 + pkg.lambda.max_abs())),
    );

    let mut route_gap = None;
    let mut kl_gap = None;
    if n >= 3 {
        for k in 1..n {
            let vals: Vec<f64> = AlphaRoute::ALL
                .iter()
                .map(|rt| alpha_k(model, &pkg, k, *rt))
                .collect::<Result<_>>()?;
            let g = scalar_gap(vals[0], vals[1]).max(scalar_gap(vals[0], vals[2]));
            route_gap = Some(route_gap.unwrap_or(0.0f64).max(g));
        }
    }
    for k in 1..n {
        let ak = alpha_k(model, &pkg, k, AlphaRoute::Definitional)?;
        for l in 0..(n - k) {
            let m = k + l + 1;
            let akl = alpha_kl(model, &pkg.h, k, l)?;
            let g = scalar_gap(ak, factorial(n) / factorial(m) * akl);
            kl_gap = Some(kl_gap.unwrap_or(0.0f64).max(g));
        }
    }
    r.record(
        "alpha_routes",
        "*(d(w^{k-1}^H)^w^{n-k-1}) = lambda route = closed route",
        route_gap,
    );
    r.record(
        "alpha_kl_relation",
        "alpha_k = n!/(k+l+1)! alpha_{k,l}",
        kl_gap,
    );

    // Consequences of alpha_k = 0 on (l|k)-SKT structures.
    let mut lam_delta = None;
    let mut lam_norms = None;
    let mut surrogate = None;
    if n >= 3 {
        for k in 1..n {
            let lk = (0..(n - k)).any(|l| lk_form(model, &pkg.h, k, l).max_abs() <= tol * scale);
            if !lk {
                continue;
            }
            let kf = k as f64;
            let g1 = scalar_gap(
                (nf - kf - 1.0) * pkg.lambda_trace,
                -8.0 * (kf - 1.0) * pkg.delta_theta,
            );
            let g2 = scalar_gap(
                (nf - 2.0) * pkg.lambda_trace,
                8.0 * (kf - 1.0) * pkg.norm_theta_sq - 4.0 / 3.0 * (kf - 1.0) * pkg.norm_h_sq,
            );
            lam_delta = Some(lam_delta.unwrap_or(0.0f64).max(g1));
            lam_norms = Some(lam_norms.unwrap_or(0.0f64).max(g2));
            if k + 1 < n && model.algebra().is_unimodular(tol) {
                let g3 = scalar_gap(pkg.norm_theta_sq, pkg.norm_h_sq / 6.0);
                surrogate = Some(surrogate.unwrap_or(0.0f64).max(g3));
            }
        }
    }
    r.record(
        "skt_lambda_delta",
        "(n-k-1) tr(lambda) = -8(k-1) delta theta on (l|k)-SKT",
        lam_delta,
    );
    r.record(
        "skt_lambda_norms",
        "(n-2) tr(lambda) = 8(k-1)|theta|^2 - 4/3 (k-1)|H|^2 on (l|k)-SKT",
        lam_norms,
    );
    r.record(
        "gauduchon_surrogate",
        "|theta|^2 = |H|^2/6 on unimodular (l|k)-SKT, k < n-1",
        surrogate,
    );

    let lck = lck_detect(model, &pkg, tol);
    let mut ratio = None;
    let mut lck_alpha = None;
    if lck.is_lck && n >= 3 && pkg.theta.max_abs() > tol {
        ratio = Some(scalar_gap(
            pkg.norm_h_sq,
            6.0 / (nf - 1.0) * pkg.norm_theta_sq,
        ));
        for (k, predicted) in &lck.alpha_prediction {
            let a = alpha_k(model, &pkg, *k, AlphaRoute::Definitional)?;
            lck_alpha = Some(lck_alpha.unwrap_or(0.0f64).max(scalar_gap(a, *predicted)));
        }
    }
    r.record("lck_norm_ratio", "|H|^2 = 6/(n-1) |theta|^2 on LCK", ratio);
    r.record(
        "lck_alpha",
        "alpha_k = (n-3)!(n-k-1)(n-2)/(n-1) |theta|^2 on Gauduchon LCK",
        lck_alpha,
    );

    let mut balanced = None;
    if n >= 3 && pkg.theta.max_abs() <= tol * scale && pkg.h.max_abs() > tol {
        for k in 1..n {
            let a = alpha_k(model, &pkg, k, AlphaRoute::Definitional)?;
            let want = -factorial(n - 3) * (nf - k as f64 - 1.0) / 6.0 * pkg.norm_h_sq;
            balanced = Some(balanced.unwrap_or(0.0f64).max(scalar_gap(a, want)));
        }
    }
    r.record(
        "balanced_alpha",
        "alpha_k = -(n-3)!(n-k-1)/6 |H|^2 on balanced",
        balanced,
    );
    Ok(r)
}

/// Runs [`model_identities`] on the model and on `trials` random compatible
/// metrics (trial `t` seeded with `seed + t`). Results do not depend on
/// thread scheduling.
pub fn identity_suite(
    model: &HermitianModel,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<IdentityReport> {
    let mut report = model_identities(model, tol)?;
    let per_trial: Vec<Result<IdentityReport>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(t as u64));
            let g = random_compatible_metric(model, &mut rng, 0.3);
            let perturbed = model.with_metric(g)?;
            model_identities(&perturbed, tol)
        })
        .collect();
    for r in per_trial {
        report.merge(&r?);
    }
    Ok(report)
}

fn random_form(rng: &mut ChaCha8Rng, dim: usize, degree: usize) -> AlternatingForm {
    use rand::Rng;
    let coeffs = (0..crate::exterior::binomial(dim, degree))
        .map(|_| rng.random_range(-1.0..1.0))
        .collect();
    AlternatingForm::from_coeffs(dim, degree, coeffs)
}

/// Tensor identities on synthetic torsion over flat frames of complex
/// dimension `n` with random compatible metrics: random `(1,2)+(2,1)`
/// three-forms, and LCK torsion `H = Jθ∧ω/(n-1)` built from random `θ`.
pub fn synthetic_identities(n: usize, trials: usize, seed: u64) -> Result<IdentityReport> {
    let base = crate::catalog::flat_torus(n)?;
    let mut r = IdentityReport { checks: Vec::new() };
    let nf = n as f64;
    for t in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(t as u64));
        let model = if t == 0 {
            base.clone()
        } else {
            base.with_metric(random_compatible_metric(&base, &mut rng, 0.3))?
        };
        let space = model.space();
        let j = model.complex_structure();
        let dim = model.dim();

        let h = j.pq_part(&random_form(&mut rng, dim, 3), 2, 1);
        let norm = space.contraction_norm(&h);
        r.record(
            "synthetic_bidegree_h_contraction",
            "H(Je_k,Je_i,e_j) H(e_k,e_i,e_j) = |H|^2/3 for H of type (1,2)+(2,1)",
            Some(scalar_gap(bidegree_contraction(&model, &h), norm / 3.0)),
        );
        r.record(
            "synthetic_chern_torsion_norm",
            "|C|^2 = |H|^2/3 for H of type (1,2)+(2,1)",
            Some(scalar_gap(
                super::torsion::chern_torsion_norm(&model, &h),
                norm / 3.0,
            )),
        );

        let theta = random_form(&mut rng, dim, 1);
        let h = j
            .j_transform(&theta)
            .wedge(model.omega())
            .expect("same frame")
            * (1.0 / (nf - 1.0));
        let recovered = lee_form_contraction(&model, &h);
        r.record(
            "synthetic_lck_lee_form",
            "Lee form of H = Jtheta^w/(n-1) is theta",
            Some(form_gap(&recovered, &theta)),
        );
        let th2 = space.contraction_norm(&theta);
        let h2 = space.contraction_norm(&h);
        r.record(
            "synthetic_lck_norm_ratio",
            "|H|^2 = 6/(n-1) |theta|^2 for H = Jtheta^w/(n-1)",
            Some(scalar_gap(h2, 6.0 / (nf - 1.0) * th2)),
        );
        if n >= 3 {
            let mut worst: f64 = 0.0;
            for k in 1..n {
                let closed = factorial(n - 3) * (nf - k as f64 - 1.0) * (th2 - h2 / 6.0);
                worst = worst.max(scalar_gap(
                    closed,
                    super::classify::lck_gauduchon_alpha(n, k, th2),
                ));
            }
            r.record(
                "synthetic_lck_alpha",
                "(n-3)!(n-k-1)(|theta|^2 - |H|^2/6) = (n-3)!(n-k-1)(n-2)/(n-1) |theta|^2",
                Some(worst),
            );
        }
    }
    Ok(r)
}
