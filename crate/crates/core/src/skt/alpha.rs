//! The functions `α_k` and `α_{k,ℓ}` and their alternative closed forms.

use std::fmt;

use super::torsion::TorsionPackage;
use crate::error::{Error, Result};
use crate::exterior::AlternatingForm;
use crate::model::HermitianModel;

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).map(|x| x as f64).product()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AlphaRoute {
    /// `⋆(d(ω^{k-1}∧H) ∧ ω^{n-k-1})`.
    Definitional,
    /// `((n-3)!/8)[(n-2)Σλ(e_i,Je_i) - 8(k-1)‖θ‖² + (4/3)(k-1)‖H‖²]`.
    Lambda,
    /// `(n-3)![(n-2)δθ + (n-k-1)(‖θ‖² - ‖H‖²/6)]`.
    Closed,
}

impl AlphaRoute {
    pub const ALL: [AlphaRoute; 3] = [
        AlphaRoute::Definitional,
        AlphaRoute::Lambda,
        AlphaRoute::Closed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AlphaRoute::Definitional => "definitional",
            AlphaRoute::Lambda => "lambda",
            AlphaRoute::Closed => "closed",
        }
    }
}

impl fmt::Display for AlphaRoute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `d(ω^{k-1} ∧ H)`.
pub fn d_omega_power_h(model: &HermitianModel, h: &AlternatingForm, k: usize) -> AlternatingForm {
    let wk = model.omega().power(k - 1);
    model.d(&wk.wedge(h).expect("same frame"))
}

/// Ratio of a top-degree form to `ω^n/n!`.
pub fn star_top(model: &HermitianModel, top: &AlternatingForm) -> f64 {
    let n = model.n();
    let vol = model.omega().power(n).top_coefficient() / factorial(n);
    top.top_coefficient() / vol
}

fn check_k(model: &HermitianModel, k: usize) -> Result<()> {
    let n = model.n();
    if k == 0 || k + 1 > n {
        return Err(Error::Domain(format!(
            "k = {k} outside 1..={} for n = {n}",
            n - 1
        )));
    }
    Ok(())
}

pub fn alpha_k(
    model: &HermitianModel,
    pkg: &TorsionPackage,
    k: usize,
    route: AlphaRoute,
) -> Result<f64> {
    check_k(model, k)?;
    let n = model.n();
    if n < 3 && route != AlphaRoute::Definitional {
        return Err(Error::Domain(format!(
            "the {route} route needs n >= 3, got n = {n}"
        )));
    }
    let kf = k as f64;
    let nf = n as f64;
    Ok(match route {
        AlphaRoute::Definitional => {
            let y = d_omega_power_h(model, &pkg.h, k);
            let top = y
                .wedge(&model.omega().power(n - k - 1))
                .expect("same frame");
            star_top(model, &top)
        }
        AlphaRoute::Lambda => {
            factorial(n - 3) / 8.0
                * ((nf - 2.0) * pkg.lambda_trace - 8.0 * (kf - 1.0) * pkg.norm_theta_sq
                    + 4.0 / 3.0 * (kf - 1.0) * pkg.norm_h_sq)
        }
        AlphaRoute::Closed => {
            factorial(n - 3)
                * ((nf - 2.0) * pkg.delta_theta
                    + (nf - kf - 1.0) * (pkg.norm_theta_sq - pkg.norm_h_sq / 6.0))
        }
    })
}

/// `α_{k,ℓ}` from `ω^ℓ ∧ d(ω^{k-1}∧H) = (1/m!) α_{k,ℓ} ω^m + (terms orthogonal to ω^m)`,
/// `m = k + ℓ + 1`, using the Hodge pairing. Satisfies `α_k = n!/m! · α_{k,ℓ}`.
pub fn alpha_kl(model: &HermitianModel, h: &AlternatingForm, k: usize, l: usize) -> Result<f64> {
    let n = model.n();
    if k == 0 || k + l + 1 > n {
        return Err(Error::Domain(format!(
            "(k, l) = ({k}, {l}) needs k >= 1 and k + l <= {}",
            n - 1
        )));
    }
    let m = k + l + 1;
    let y = model
        .omega()
        .power(l)
        .wedge(&d_omega_power_h(model, h, k))
        .expect("same frame");
    let wm = model.omega().power(m);
    let space = model.space();
    let norm = space.inner(&wm, &wm)?;
    if norm <= f64::MIN_POSITIVE {
        return Err(Error::Domain(
            "degenerate power of the Hermitian form".into(),
        ));
    }
    Ok(factorial(m) * space.inner(&y, &wm)? / norm)
}
