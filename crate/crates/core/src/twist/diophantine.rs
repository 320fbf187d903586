//! Integer conditions for `k`-SKT torus bundles over products of Kähler
//! factors, their enumeration, and the SCYT cosmological constants.
//!
//! With `β⁻¹ = [[p₁, q₁], [p₂, q₂]]` and orthonormal fiber metric, the
//! condition `Σ_A 𝓕^A ∧ 𝓕^A ∧ ω_X^{k-1} = 0` reduces to
//! `a·P + 2b·M + c·Q = 0` with `P = p₁² + p₂²`, `M = p₁q₁ + p₂q₂`,
//! `Q = q₁² + q₂²`. The weights `(a, b, c)` come from the intersection
//! numbers of the curvature classes with powers of the Kähler forms.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Condition {
    /// 2-SKT bundle over `X⁴ × X²`; `F¹` on `X⁴`, `F²` on `X²`. Ignores `k`.
    TwoSkt,
    /// `k`-SKT bundle over `X^{2k} × X²`; `F¹` on `X^{2k}`, `F²` on `X²`.
    KSkt,
    /// [`Condition::KSkt`] with `F¹ = ω_{(2k)}`, `F² = ω_{(2)}`.
    KSktKahler,
    /// `(k+1)`-SKT bundle over `X^{2k} × X⁴`; `F¹` on `X^{2k}`, `F²` on `X⁴`.
    KPlusOneSkt,
}

impl Condition {
    pub const ALL: [Condition; 4] = [
        Condition::TwoSkt,
        Condition::KSkt,
        Condition::KSktKahler,
        Condition::KPlusOneSkt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Condition::TwoSkt => "two-skt",
            Condition::KSkt => "k-skt",
            Condition::KSktKahler => "k-skt-kahler",
            Condition::KPlusOneSkt => "k-plus-one-skt",
        }
    }

    /// The polynomial in readable form.
    pub fn formula(self) -> &'static str {
        match self {
            Condition::TwoSkt => "[F1^2 != 0](p1^2+p2^2) + 2(p1 q1 + p2 q2) = 0",
            Condition::KSkt => "[F1^2 != 0](k-1)(p1^2+p2^2) + 2(p1 q1 + p2 q2) = 0",
            Condition::KSktKahler => "(k-1)(p1^2+p2^2) + 2(p1 q1 + p2 q2) = 0",
            Condition::KPlusOneSkt => {
                "[F1^2 != 0]k(k-1)/2 (p1^2+p2^2) + 2k(p1 q1 + p2 q2) + [F2^2 != 0](q1^2+q2^2) = 0"
            }
        }
    }

    /// The SKT level of the bundle the condition describes.
    pub fn skt_level(self, k: u32) -> u32 {
        match self {
            Condition::TwoSkt => 2,
            Condition::KSkt | Condition::KSktKahler => k,
            Condition::KPlusOneSkt => k + 1,
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Condition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Condition::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Lookup(format!("unknown condition `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiophantineInstance {
    pub condition: Condition,
    pub k: u32,
    pub p1: i64,
    pub p2: i64,
    pub q1: i64,
    pub q2: i64,
    /// `F¹ ∧ F¹ = 0` in cohomology.
    pub null_f1: bool,
    /// `F² ∧ F² = 0` in cohomology.
    pub null_f2: bool,
}

impl DiophantineInstance {
    pub fn new(condition: Condition, k: u32, [p1, p2, q1, q2]: [i64; 4]) -> Self {
        Self {
            condition,
            k,
            p1,
            p2,
            q1,
            q2,
            null_f1: false,
            null_f2: false,
        }
    }

    pub fn with_null_classes(mut self, null_f1: bool, null_f2: bool) -> Self {
        self.null_f1 = null_f1;
        self.null_f2 = null_f2;
        self
    }

    /// `(p₁, p₂, q₁, q₂)`.
    pub fn entries(&self) -> [i64; 4] {
        [self.p1, self.p2, self.q1, self.q2]
    }

    /// `det β⁻¹ = p₁q₂ - p₂q₁`.
    pub fn det(&self) -> BigInt {
        big(self.p1) * big(self.q2) - big(self.p2) * big(self.q1)
    }

    /// `(P, M, Q)`.
    pub fn quadratic_forms(&self) -> (BigInt, BigInt, BigInt) {
        let (p1, p2, q1, q2) = (big(self.p1), big(self.p2), big(self.q1), big(self.q2));
        (
            &p1 * &p1 + &p2 * &p2,
            &p1 * &q1 + &p2 * &q2,
            &q1 * &q1 + &q2 * &q2,
        )
    }

    /// Weights `(a, b, c)` of `a·P + 2b·M + c·Q`.
    pub fn weights(&self) -> (BigInt, BigInt, BigInt) {
        let k = BigInt::from(self.k);
        let ind = |null: bool| if null { BigInt::zero() } else { BigInt::one() };
        match self.condition {
            Condition::TwoSkt => (ind(self.null_f1), BigInt::one(), BigInt::zero()),
            Condition::KSkt => (ind(self.null_f1) * (&k - 1), BigInt::one(), BigInt::zero()),
            Condition::KSktKahler => (&k - 1, BigInt::one(), BigInt::zero()),
            Condition::KPlusOneSkt => (ind(self.null_f1) * &k * (&k - 1) / 2, k, ind(self.null_f2)),
        }
    }
}

impl fmt::Display for DiophantineInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.p1, self.p2, self.q1, self.q2)
    }
}

fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

/// The `p₁ = 0` rewriting of the `(k+1)`-SKT condition,
/// `2q₁² + 2(kp₂ + q₂)² = k(k+1)p₂²`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewrittenCheck {
    pub lhs: BigInt,
    pub rhs: BigInt,
    pub satisfied: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiophantineOutcome {
    pub satisfied: bool,
    pub lhs: BigInt,
    pub rewritten: Option<RewrittenCheck>,
}

pub fn diophantine_check(inst: &DiophantineInstance) -> Result<DiophantineOutcome> {
    if inst.det().is_zero() {
        return Err(Error::Precondition(format!(
            "beta is not invertible for {inst}: p1 q2 - p2 q1 = 0"
        )));
    }
    if inst.k == 0 {
        return Err(Error::Domain("k must be at least 1".into()));
    }
    let (p, m, q) = inst.quadratic_forms();
    let (a, b, c) = inst.weights();
    let lhs = a * p + BigInt::from(2) * b * m + c * q;
    let satisfied = lhs.is_zero();
    let rewritten = (inst.condition == Condition::KPlusOneSkt
        && inst.p1 == 0
        && !inst.null_f1
        && !inst.null_f2)
        .then(|| {
            let k = BigInt::from(inst.k);
            let (p2, q1, q2) = (big(inst.p2), big(inst.q1), big(inst.q2));
            let s = &k * &p2 + &q2;
            let lhs = BigInt::from(2) * (&q1 * &q1 + &s * &s);
            let rhs = &k * (&k + 1) * &p2 * &p2;
            RewrittenCheck {
                satisfied: lhs == rhs,
                lhs,
                rhs,
            }
        });
    if let Some(r) = &rewritten {
        if r.satisfied != satisfied {
            return Err(Error::Consistency {
                what: "rewritten and direct forms of the condition".into(),
                residual: 1.0,
            });
        }
    }
    Ok(DiophantineOutcome {
        satisfied,
        lhs,
        rewritten,
    })
}

/// Every invertible `(p₁, p₂, q₁, q₂) ∈ [-bound, bound]⁴` satisfying the
/// condition, in lexicographic order.
pub fn enumerate_beta(
    condition: Condition,
    k: u32,
    bound: u32,
    null_f1: bool,
    null_f2: bool,
) -> Vec<DiophantineInstance> {
    let b = i64::from(bound);
    (-b..=b)
        .into_par_iter()
        .flat_map_iter(|p1| {
            let mut out = Vec::new();
            for p2 in -b..=b {
                for q1 in -b..=b {
                    for q2 in -b..=b {
                        let inst = DiophantineInstance::new(condition, k, [p1, p2, q1, q2])
                            .with_null_classes(null_f1, null_f2);
                        if let Ok(o) = diophantine_check(&inst) {
                            if o.satisfied {
                                out.push(inst);
                            }
                        }
                    }
                }
            }
            out
        })
        .collect()
}

/// Product of two Kähler–Einstein factors the SCYT relations are stated for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScytCase {
    /// `X^{2k} × X²`, `κ = (k, 1)`.
    WithSurface,
    /// `X^{2k} × X⁴`, `κ = (k, 2)`.
    WithFourfold,
}

impl ScytCase {
    pub fn kappa(self, k: u32) -> [BigInt; 2] {
        match self {
            ScytCase::WithSurface => [BigInt::from(k), BigInt::from(1)],
            ScytCase::WithFourfold => [BigInt::from(k), BigInt::from(2)],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScytConstants {
    pub l1: BigRational,
    pub l2: BigRational,
    /// `-(k+1)/2 (p₁² + p₂²)`, computed when the Kähler-class `k`-SKT condition holds.
    pub l1_simplified: Option<BigRational>,
    pub warning: Option<String>,
}

/// `h_{ab} = Σ_A (β⁻¹)_{Aa} (β⁻¹)_{Ab}` for an orthonormal fiber.
pub fn fiber_gram(inst: &DiophantineInstance) -> [[BigInt; 2]; 2] {
    let (p, m, q) = inst.quadratic_forms();
    [[p, m.clone()], [m, q]]
}

/// `ℓ_b = -Σ_a κ^a h_{ab}`.
pub fn scyt_general(kappa: &[BigInt; 2], h: &[[BigInt; 2]; 2]) -> [BigRational; 2] {
    let l = |b: usize| {
        let s: BigInt = (0..2).map(|a| &kappa[a] * &h[a][b]).sum();
        BigRational::from_integer(-s)
    };
    [l(0), l(1)]
}

pub fn scyt_constants(inst: &DiophantineInstance, case: ScytCase) -> Result<ScytConstants> {
    let [l1, l2] = scyt_general(&case.kappa(inst.k), &fiber_gram(inst));
    let mut l1_simplified = None;
    let mut warning = None;
    if case == ScytCase::WithSurface {
        let kahler = DiophantineInstance {
            condition: Condition::KSktKahler,
            ..*inst
        };
        if diophantine_check(&kahler)?.satisfied {
            let (p, _, _) = inst.quadratic_forms();
            let s = BigRational::new(-(BigInt::from(inst.k) + BigInt::one()) * p, BigInt::from(2));
            if s != l1 {
                return Err(Error::Consistency {
                    what: "general and simplified first cosmological constant".into(),
                    residual: 1.0,
                });
            }
            l1_simplified = Some(s);
        } else {
            warning = Some(format!(
                "{inst} does not satisfy {}; simplified form skipped",
                Condition::KSktKahler
            ));
        }
    }
    Ok(ScytConstants {
        l1,
        l2,
        l1_simplified,
        warning,
    })
}
