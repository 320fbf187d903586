//! Named catalog entries with parameters and self-checked classification flags.

use std::collections::BTreeMap;

use super::models::*;
use crate::error::{Error, Result};
use crate::model::HermitianModel;
use crate::skt::{classify, SktClassification};
use crate::twist::{closed_loop_case, torus_family, Condition, DiophantineInstance, TwistSpec};

/// Textual `key=value` parameters.
pub type Params = BTreeMap<String, String>;

/// Parses `k=v` pairs separated by commas or given as separate items.
pub fn parse_params<S: AsRef<str>>(items: &[S]) -> Result<Params> {
    let mut out = Params::new();
    for item in items {
        for part in item.as_ref().split(',').filter(|s| !s.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::Lookup(format!("parameter `{part}` is not key=value")))?;
            out.insert(k.trim().to_string(), v.trim().to_string());
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flag {
    Kahler,
    Balanced,
    Lck,
    /// `k`-SKT.
    Skt(usize),
    /// `k`-SKT for every `1 ≤ k ≤ n-1`.
    SktAll,
    /// `α_k = 0`.
    Gauduchon(usize),
}

impl Flag {
    pub fn label(self) -> String {
        match self {
            Flag::Kahler => "kahler".into(),
            Flag::Balanced => "balanced".into(),
            Flag::Lck => "lck".into(),
            Flag::Skt(k) => format!("{k}-skt"),
            Flag::SktAll => "k-skt for all k".into(),
            Flag::Gauduchon(k) => format!("gauduchon_{k}"),
        }
    }

    pub fn evaluate(self, c: &SktClassification) -> bool {
        match self {
            Flag::Kahler => c.kahler,
            Flag::Balanced => c.balanced,
            Flag::Lck => c.lck,
            Flag::Skt(k) => c.is_k_skt(k),
            Flag::SktAll => c.k_skt_all(),
            Flag::Gauduchon(k) => c.gauduchon_k.contains(&k),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ParamInfo {
    pub name: &'static str,
    pub default: &'static str,
    pub range: &'static str,
}

#[derive(Clone, Copy, Debug)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub params: &'static [ParamInfo],
}

const fn p(name: &'static str, default: &'static str, range: &'static str) -> ParamInfo {
    ParamInfo {
        name,
        default,
        range,
    }
}

const ENTRIES: &[CatalogEntry] = &[
    CatalogEntry {
        name: "flat_torus",
        description: "abelian R^{2n} with the standard Kähler structure",
        params: &[p("n", "3", "2..=6")],
    },
    CatalogEntry {
        name: "hopf",
        description: "u(1) + su(2), [e_a, e_b] = 2 e_c cyclic; the Hopf surface S^1 x S^3",
        params: &[],
    },
    CatalogEntry {
        name: "product_kahler_hopf",
        description: "flat T^{2m} times the Hopf model",
        params: &[p("m", "1", "1..=4")],
    },
    CatalogEntry {
        name: "product_kahler_iwasawa",
        description: "flat T^{2m} times the Iwasawa model",
        params: &[p("m", "1", "0..=3")],
    },
    CatalogEntry {
        name: "iwasawa",
        description: "complex Heisenberg algebra with its bi-invariant complex structure",
        params: &[],
    },
    CatalogEntry {
        name: "lck_nil",
        description: "Heisenberg h_{2n-1} + R with the Vaisman-type structure",
        params: &[p("n", "3", "2..=6")],
    },
    CatalogEntry {
        name: "solvable_nonunimodular",
        description: "R x R^5 with ad e_0 = diag(a, b, b, b, b)",
        params: &[p("a", "2", "real, (a, b) != (0, 0)"), p("b", "1", "real")],
    },
    CatalogEntry {
        name: "nilmanifold_twist",
        description: "T^2 bundle over a torus product realizing an integer condition on beta",
        params: &[
            p(
                "condition",
                "two-skt",
                "two-skt | k-skt | k-skt-kahler | k-plus-one-skt",
            ),
            p("k", "2", "1..=6 (k-plus-one-skt: 1..=5)"),
            p("p1", "1", "integer"),
            p("p2", "0", "integer"),
            p("q1", "0", "integer"),
            p("q2", "1", "integer"),
            p("null_f1", "false", "bool"),
            p("null_f2", "false", "bool"),
        ],
    },
];

pub fn catalog_list() -> &'static [CatalogEntry] {
    ENTRIES
}

fn entry(name: &str) -> Result<&'static CatalogEntry> {
    ENTRIES
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::Lookup(format!("no catalog entry named `{name}`")))
}

struct Args<'a> {
    entry: &'static CatalogEntry,
    given: &'a Params,
}

impl Args<'_> {
    fn raw(&self, key: &str) -> &str {
        self.given
            .get(key)
            .map(String::as_str)
            .or_else(|| {
                self.entry
                    .params
                    .iter()
                    .find(|p| p.name == key)
                    .map(|p| p.default)
            })
            .expect("declared parameter")
    }

    fn int(&self, key: &str) -> Result<i64> {
        let v = self.raw(key);
        v.parse()
            .map_err(|_| Error::Lookup(format!("parameter {key} = `{v}` is not an integer")))
    }

    fn index(&self, key: &str) -> Result<usize> {
        let v = self.int(key)?;
        usize::try_from(v).map_err(|_| Error::Lookup(format!("parameter {key} = {v} is negative")))
    }

    fn real(&self, key: &str) -> Result<f64> {
        let v = self.raw(key);
        v.parse()
            .map_err(|_| Error::Lookup(format!("parameter {key} = `{v}` is not a number")))
    }

    fn flag(&self, key: &str) -> Result<bool> {
        match self.raw(key) {
            "true" | "1" | "yes" => Ok(true),
            "false" | "0" | "no" => Ok(false),
            v => Err(Error::Lookup(format!(
                "parameter {key} = `{v}` is not a boolean"
            ))),
        }
    }
}

/// A catalog result: a Hermitian model, or a twist for the twist families.
#[derive(Clone, Debug)]
pub enum CatalogItem {
    Model(HermitianModel),
    Twist(TwistSpec),
}

impl CatalogItem {
    pub fn model(&self) -> Option<&HermitianModel> {
        match self {
            CatalogItem::Model(m) => Some(m),
            CatalogItem::Twist(_) => None,
        }
    }

    pub fn twist(&self) -> Option<&TwistSpec> {
        match self {
            CatalogItem::Twist(t) => Some(t),
            CatalogItem::Model(_) => None,
        }
    }
}

/// The documented classification of a model entry.
pub fn expected_flags(name: &str, model: &HermitianModel) -> Vec<(Flag, bool)> {
    let n = model.n();
    match name {
        "flat_torus" => vec![
            (Flag::Kahler, true),
            (Flag::Balanced, true),
            (Flag::SktAll, true),
        ],
        "hopf" => vec![
            (Flag::Kahler, false),
            (Flag::Skt(1), true),
            (Flag::Lck, true),
            (Flag::Balanced, false),
        ],
        "product_kahler_hopf" => vec![
            (Flag::Kahler, false),
            (Flag::SktAll, true),
            (Flag::Lck, false),
        ],
        "product_kahler_iwasawa" | "iwasawa" => vec![
            (Flag::Kahler, false),
            (Flag::Balanced, true),
            (Flag::Skt(1), false),
        ],
        "lck_nil" if n == 2 => vec![
            (Flag::Kahler, false),
            (Flag::Lck, true),
            (Flag::Skt(1), true),
        ],
        "lck_nil" => vec![
            (Flag::Kahler, false),
            (Flag::Lck, true),
            (Flag::Skt(1), false),
            (Flag::Gauduchon(n - 1), true),
            (Flag::Gauduchon(1), false),
        ],
        "solvable_nonunimodular" => vec![
            (Flag::Kahler, false),
            (Flag::Balanced, false),
            (Flag::Gauduchon(1), false),
        ],
        _ => Vec::new(),
    }
}

fn verify_flags(name: &str, model: &HermitianModel) -> Result<()> {
    let (_, c) = classify(model)?;
    for (flag, want) in expected_flags(name, model) {
        if flag.evaluate(&c) != want {
            return Err(Error::Consistency {
                what: format!("{name}: expected {} = {want}", flag.label()),
                residual: 1.0,
            });
        }
    }
    Ok(())
}

/// The twist-family instance described by `params`.
pub fn twist_instance(params: &Params) -> Result<DiophantineInstance> {
    let args = checked_args("nilmanifold_twist", params)?;
    let condition: Condition = args.raw("condition").parse()?;
    let k = u32::try_from(args.index("k")?)
        .map_err(|_| Error::Lookup("parameter k is too large".into()))?;
    Ok(DiophantineInstance::new(
        condition,
        k,
        [
            args.int("p1")?,
            args.int("p2")?,
            args.int("q1")?,
            args.int("q2")?,
        ],
    )
    .with_null_classes(args.flag("null_f1")?, args.flag("null_f2")?))
}

fn checked_args<'a>(name: &str, params: &'a Params) -> Result<Args<'a>> {
    let entry = entry(name)?;
    if let Some(key) = params
        .keys()
        .find(|k| !entry.params.iter().any(|p| p.name == *k))
    {
        return Err(Error::Lookup(format!("`{name}` has no parameter `{key}`")));
    }
    Ok(Args {
        entry,
        given: params,
    })
}

/// Builds a catalog entry and checks its documented flags.
pub fn catalog_get(name: &str, params: &Params) -> Result<CatalogItem> {
    let args = checked_args(name, params)?;
    let model = match name {
        "flat_torus" => flat_torus(args.index("n")?)?,
        "hopf" => hopf()?,
        "product_kahler_hopf" => product_kahler_hopf(args.index("m")?)?,
        "product_kahler_iwasawa" => product_kahler_iwasawa(args.index("m")?)?,
        "iwasawa" => iwasawa()?,
        "lck_nil" => lck_nil(args.index("n")?)?,
        "solvable_nonunimodular" => solvable_nonunimodular(args.real("a")?, args.real("b")?)?,
        "nilmanifold_twist" => {
            let inst = twist_instance(params)?;
            let spec = torus_family(&inst)?;
            let case = closed_loop_case(&inst)?;
            if !case.agrees() {
                return Err(Error::Consistency {
                    what: format!(
                        "{} at level {}: integer condition and twisted model",
                        inst.condition,
                        inst.condition.skt_level(inst.k)
                    ),
                    residual: case.skt_residual,
                });
            }
            return Ok(CatalogItem::Twist(spec));
        }
        _ => unreachable!("entry() rejects unknown names"),
    };
    verify_flags(name, &model)?;
    Ok(CatalogItem::Model(model))
}

/// Convenience for model entries.
pub fn catalog_model(name: &str, params: &Params) -> Result<HermitianModel> {
    match catalog_get(name, params)? {
        CatalogItem::Model(m) => Ok(m),
        CatalogItem::Twist(spec) => crate::twist::twist_model(&spec),
    }
}

/// Every model entry at its default parameters plus the parameter sweeps
/// that stay within the dimension limit, for whole-catalog checks.
pub fn catalog_sweep() -> Result<Vec<(String, HermitianModel)>> {
    let mut out = Vec::new();
    let mut push = |label: String, name: &str, kv: &[(&str, &str)]| -> Result<()> {
        let params: Params = kv
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect();
        out.push((label, catalog_model(name, &params)?));
        Ok(())
    };
    for n in 2..=6 {
        let v = n.to_string();
        push(format!("flat_torus(n={n})"), "flat_torus", &[("n", &v)])?;
    }
    push("hopf".into(), "hopf", &[])?;
    for m in 1..=4 {
        let v = m.to_string();
        push(
            format!("product_kahler_hopf(m={m})"),
            "product_kahler_hopf",
            &[("m", &v)],
        )?;
    }
    for m in 0..=3 {
        let v = m.to_string();
        push(
            format!("product_kahler_iwasawa(m={m})"),
            "product_kahler_iwasawa",
            &[("m", &v)],
        )?;
    }
    push("iwasawa".into(), "iwasawa", &[])?;
    for n in 2..=6 {
        let v = n.to_string();
        push(format!("lck_nil(n={n})"), "lck_nil", &[("n", &v)])?;
    }
    push(
        "solvable_nonunimodular".into(),
        "solvable_nonunimodular",
        &[],
    )?;
    let twists: [&[(&str, &str)]; 4] = [
        &[("condition", "two-skt"), ("null_f1", "true")],
        &[
            ("condition", "k-skt"),
            ("k", "3"),
            ("p1", "1"),
            ("p2", "1"),
            ("q1", "-1"),
            ("q2", "1"),
        ],
        &[
            ("condition", "k-skt-kahler"),
            ("k", "3"),
            ("p1", "0"),
            ("p2", "1"),
            ("q1", "5"),
            ("q2", "-1"),
        ],
        &[
            ("condition", "k-plus-one-skt"),
            ("k", "2"),
            ("p1", "0"),
            ("p2", "1"),
            ("q1", "1"),
            ("q2", "-1"),
        ],
    ];
    for kv in twists {
        let label = format!(
            "nilmanifold_twist({})",
            kv.iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect::<Vec<_>>()
                .join(",")
        );
        push(label, "nilmanifold_twist", kv)?;
    }
    Ok(out)
}
