//! Text format for Hermitian Lie-algebra models.
//!
//! ```text
//! # comment
//! dim 4
//! basis e0 e1 e2 e3
//! bracket 1 2 3 2          # [e_1, e_2] += 2 e_3; lines accumulate
//! metric diag 1 1 1 1      # or `metric row …` once per row
//! J pair 0 1               # J e_0 = e_1, J e_1 = -e_0; or `J row …` per row
//! J pair 2 3
//! meta name hopf
//! ```
//!
//! Scalars are decimal (`-1.25`, `3e-2`) or rational (`-5/4`) literals and are
//! kept exact. Indices are integers or basis names.

use std::fmt::Write as _;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exterior::{ComplexOperator, FrameSpace, MAX_DIM};
use crate::model::{HermitianModel, LieAlgebraModel};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MetricSpec {
    Diag(Vec<BigRational>),
    Rows(Vec<Vec<BigRational>>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComplexSpec {
    Pairs(Vec<(usize, usize)>),
    Rows(Vec<Vec<BigRational>>),
}

/// Parsed model document. Bracket constants are accumulated and stored
/// canonically as `(i, j, k, c)` with `i < j`, `c ≠ 0`, sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelFile {
    pub dim: usize,
    pub basis: Vec<String>,
    pub brackets: Vec<(usize, usize, usize, BigRational)>,
    pub metric: MetricSpec,
    pub complex: ComplexSpec,
    pub meta: Vec<(String, String)>,
}

/// Parses a decimal or `a/b` literal exactly.
pub fn parse_scalar(s: &str) -> std::result::Result<BigRational, String> {
    if let Some((a, b)) = s.split_once('/') {
        let num = BigInt::from_str(a).map_err(|_| format!("bad numerator in `{s}`"))?;
        let den = BigInt::from_str(b).map_err(|_| format!("bad denominator in `{s}`"))?;
        if den.is_zero() {
            return Err(format!("zero denominator in `{s}`"));
        }
        return Ok(BigRational::new(num, den));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (
            &s[..i],
            s[i + 1..]
                .parse::<i32>()
                .map_err(|_| format!("bad exponent in `{s}`"))?,
        ),
        None => (s, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part
            .chars()
            .chain(frac_part.chars())
            .all(|c| c.is_ascii_digit())
    {
        return Err(format!("`{s}` is not a number"));
    }
    let digits = format!("{int_part}{frac_part}");
    let mut num = BigInt::from_str(&digits).map_err(|_| format!("`{s}` is not a number"))?;
    if neg {
        num = -num;
    }
    let shift = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let scale = num_traits::pow(ten, shift.unsigned_abs() as usize);
    Ok(if shift >= 0 {
        BigRational::from_integer(num * scale)
    } else {
        BigRational::new(num, scale)
    })
}

/// Canonical rendering: an integer, or `a/b` in lowest terms.
pub fn format_scalar(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Exact rational value of a finite float.
pub fn rational_from_f64(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| Error::Domain(format!("{x} is not finite")))
}

struct Parser<'a> {
    line: usize,
    basis: &'a [String],
    dim: usize,
}

impl Parser<'_> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Syntax {
            line: self.line,
            message: message.into(),
        }
    }

    fn index(&self, tok: &str) -> Result<usize> {
        let i = match tok.parse::<usize>() {
            Ok(i) => i,
            Err(_) => self
                .basis
                .iter()
                .position(|b| b == tok)
                .ok_or_else(|| self.err(format!("unknown basis element `{tok}`")))?,
        };
        if i >= self.dim {
            return Err(self.err(format!("index {i} outside 0..{}", self.dim)));
        }
        Ok(i)
    }

    fn scalar(&self, tok: &str) -> Result<BigRational> {
        parse_scalar(tok).map_err(|m| self.err(m))
    }

    fn row(&self, toks: &[&str]) -> Result<Vec<BigRational>> {
        if toks.len() != self.dim {
            return Err(self.err(format!(
                "expected {} values, found {}",
                self.dim,
                toks.len()
            )));
        }
        toks.iter().map(|t| self.scalar(t)).collect()
    }
}

impl ModelFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut dim = None;
        let mut basis: Vec<String> = Vec::new();
        let mut raw_brackets: Vec<(usize, usize, usize, BigRational)> = Vec::new();
        let mut metric: Option<MetricSpec> = None;
        let mut complex: Option<ComplexSpec> = None;
        let mut meta = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let lineno = n + 1;
            let syntax = |m: String| Error::Syntax {
                line: lineno,
                message: m,
            };
            if toks[0] == "dim" {
                if dim.is_some() {
                    return Err(syntax("`dim` given twice".into()));
                }
                let d: usize = match toks.as_slice() {
                    [_, v] => v
                        .parse()
                        .map_err(|_| syntax(format!("bad dimension `{v}`")))?,
                    _ => return Err(syntax("expected `dim <2n>`".into())),
                };
                if d < 2 || !d.is_multiple_of(2) || d > MAX_DIM {
                    return Err(syntax(format!(
                        "dimension {d} must be even and at most {MAX_DIM}"
                    )));
                }
                dim = Some(d);
                continue;
            }
            let d = dim.ok_or_else(|| syntax("`dim` must come first".into()))?;
            let p = Parser {
                line: lineno,
                basis: &basis,
                dim: d,
            };
            match toks[0] {
                "basis" => {
                    if !basis.is_empty() {
                        return Err(p.err("`basis` given twice"));
                    }
                    if toks.len() != d + 1 {
                        return Err(p.err(format!("expected {d} basis names")));
                    }
                    let names: Vec<String> = toks[1..].iter().map(|s| s.to_string()).collect();
                    for (a, name) in names.iter().enumerate() {
                        if name.parse::<usize>().is_ok() || names[..a].contains(name) {
                            return Err(
                                p.err(format!("basis name `{name}` is numeric or repeated"))
                            );
                        }
                    }
                    basis = names;
                }
                "bracket" => {
                    let [_, i, j, k, c] = toks.as_slice() else {
                        return Err(p.err("expected `bracket <i> <j> <k> <c>`"));
                    };
                    let (i, j, k) = (p.index(i)?, p.index(j)?, p.index(k)?);
                    let c = p.scalar(c)?;
                    if i == j {
                        return Err(p.err(format!("bracket [e_{i}, e_{i}] violates antisymmetry")));
                    }
                    raw_brackets.push((i, j, k, c));
                }
                "metric" => match toks.get(1).copied() {
                    Some("diag") => {
                        if metric.is_some() {
                            return Err(p.err("metric given twice"));
                        }
                        metric = Some(MetricSpec::Diag(p.row(&toks[2..])?));
                    }
                    Some("row") => {
                        let row = p.row(&toks[2..])?;
                        match &mut metric {
                            None => metric = Some(MetricSpec::Rows(vec![row])),
                            Some(MetricSpec::Rows(rows)) if rows.len() < d => rows.push(row),
                            _ => return Err(p.err("too many metric rows")),
                        }
                    }
                    _ => return Err(p.err("expected `metric diag …` or `metric row …`")),
                },
                "J" => match toks.get(1).copied() {
                    Some("pair") => {
                        let [_, _, i, j] = toks.as_slice() else {
                            return Err(p.err("expected `J pair <i> <j>`"));
                        };
                        let pair = (p.index(i)?, p.index(j)?);
                        match &mut complex {
                            None => complex = Some(ComplexSpec::Pairs(vec![pair])),
                            Some(ComplexSpec::Pairs(v)) if v.len() < d / 2 => v.push(pair),
                            _ => return Err(p.err("too many J lines")),
                        }
                    }
                    Some("row") => {
                        let row = p.row(&toks[2..])?;
                        match &mut complex {
                            None => complex = Some(ComplexSpec::Rows(vec![row])),
                            Some(ComplexSpec::Rows(rows)) if rows.len() < d => rows.push(row),
                            _ => return Err(p.err("too many J rows")),
                        }
                    }
                    _ => return Err(p.err("expected `J pair …` or `J row …`")),
                },
                "meta" => {
                    let key = toks
                        .get(1)
                        .ok_or_else(|| p.err("expected `meta <key> <value>`"))?;
                    meta.push((key.to_string(), toks[2..].join(" ")));
                }
                other => return Err(p.err(format!("unknown key `{other}`"))),
            }
        }
        let dim = dim.ok_or_else(|| Error::Syntax {
            line: 0,
            message: "missing `dim`".into(),
        })?;
        let end = text.lines().count();
        let metric = metric.unwrap_or_else(|| MetricSpec::Diag(vec![BigRational::one(); dim]));
        if let MetricSpec::Rows(rows) = &metric {
            if rows.len() != dim {
                return Err(Error::Syntax {
                    line: end,
                    message: format!("expected {dim} metric rows, found {}", rows.len()),
                });
            }
        }
        let complex = complex.unwrap_or_else(|| {
            ComplexSpec::Pairs((0..dim / 2).map(|a| (2 * a, 2 * a + 1)).collect())
        });
        match &complex {
            ComplexSpec::Rows(rows) if rows.len() != dim => {
                return Err(Error::Syntax {
                    line: end,
                    message: format!("expected {dim} J rows, found {}", rows.len()),
                })
            }
            ComplexSpec::Pairs(v) if v.len() != dim / 2 => {
                return Err(Error::Syntax {
                    line: end,
                    message: format!("expected {} J pairs, found {}", dim / 2, v.len()),
                })
            }
            _ => {}
        }
        if basis.is_empty() {
            basis = (0..dim).map(|i| format!("e{i}")).collect();
        }
        Ok(Self {
            dim,
            basis,
            brackets: canonical_brackets(dim, &raw_brackets),
            metric,
            complex,
            meta,
        })
    }

    /// Canonical text; `parse(serialize(f)) == f`.
    pub fn serialize(&self) -> String {
        let mut s = String::new();
        writeln!(s, "dim {}", self.dim).unwrap();
        writeln!(s, "basis {}", self.basis.join(" ")).unwrap();
        for (i, j, k, c) in &self.brackets {
            writeln!(s, "bracket {i} {j} {k} {}", format_scalar(c)).unwrap();
        }
        let join =
            |row: &[BigRational]| row.iter().map(format_scalar).collect::<Vec<_>>().join(" ");
        match &self.metric {
            MetricSpec::Diag(d) => writeln!(s, "metric diag {}", join(d)).unwrap(),
            MetricSpec::Rows(rows) => {
                for r in rows {
                    writeln!(s, "metric row {}", join(r)).unwrap();
                }
            }
        }
        match &self.complex {
            ComplexSpec::Pairs(v) => {
                for (i, j) in v {
                    writeln!(s, "J pair {i} {j}").unwrap();
                }
            }
            ComplexSpec::Rows(rows) => {
                for r in rows {
                    writeln!(s, "J row {}", join(r)).unwrap();
                }
            }
        }
        for (k, v) in &self.meta {
            if v.is_empty() {
                writeln!(s, "meta {k}").unwrap();
            } else {
                writeln!(s, "meta {k} {v}").unwrap();
            }
        }
        s
    }

    pub fn metric_matrix(&self) -> DMatrix<f64> {
        match &self.metric {
            MetricSpec::Diag(d) => DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                self.dim,
                d.iter().map(to_f64),
            )),
            MetricSpec::Rows(rows) => {
                DMatrix::from_fn(self.dim, self.dim, |r, c| to_f64(&rows[r][c]))
            }
        }
    }

    pub fn complex_operator(&self) -> Result<ComplexOperator> {
        match &self.complex {
            ComplexSpec::Pairs(v) => ComplexOperator::from_pairs(self.dim, v),
            ComplexSpec::Rows(rows) => {
                ComplexOperator::new(DMatrix::from_fn(self.dim, self.dim, |r, c| {
                    to_f64(&rows[r][c])
                }))
            }
        }
    }

    /// Structure constants as floats, in canonical order.
    pub fn float_brackets(&self) -> Vec<(usize, usize, usize, f64)> {
        self.brackets
            .iter()
            .map(|(i, j, k, c)| (*i, *j, *k, to_f64(c)))
            .collect()
    }

    /// Validated model; failures name the offending invariant.
    pub fn to_model(&self) -> Result<HermitianModel> {
        let space = FrameSpace::new(self.metric_matrix())?;
        let algebra = LieAlgebraModel::new(space, &self.float_brackets())?;
        HermitianModel::new(algebra, self.complex_operator()?)
    }

    /// Exact export of a model whose entries are finite floats.
    pub fn from_model(model: &HermitianModel, meta: Vec<(String, String)>) -> Result<Self> {
        let dim = model.dim();
        let brackets = model
            .algebra()
            .bracket_terms()
            .into_iter()
            .map(|(i, j, k, c)| Ok((i, j, k, rational_from_f64(c)?)))
            .collect::<Result<Vec<_>>>()?;
        let g = model.space().metric();
        let diagonal = (0..dim).all(|r| (0..dim).all(|c| r == c || g[(r, c)] == 0.0));
        let metric = if diagonal {
            MetricSpec::Diag(
                (0..dim)
                    .map(|i| rational_from_f64(g[(i, i)]))
                    .collect::<Result<_>>()?,
            )
        } else {
            MetricSpec::Rows(matrix_rows(g)?)
        };
        let j = model.complex_structure().matrix();
        let complex = match pairs_of(j) {
            Some(p) => ComplexSpec::Pairs(p),
            None => ComplexSpec::Rows(matrix_rows(j)?),
        };
        Ok(Self {
            dim,
            basis: (0..dim).map(|i| format!("e{i}")).collect(),
            brackets: canonical_brackets(dim, &brackets),
            metric,
            complex,
            meta,
        })
    }
}

fn matrix_rows(m: &DMatrix<f64>) -> Result<Vec<Vec<BigRational>>> {
    m.row_iter()
        .map(|r| r.iter().map(|x| rational_from_f64(*x)).collect())
        .collect()
}

/// `J` as disjoint pairs `J e_i = e_j` when it has that shape.
fn pairs_of(j: &DMatrix<f64>) -> Option<Vec<(usize, usize)>> {
    let dim = j.nrows();
    let mut used = vec![false; dim];
    let mut out = Vec::new();
    for i in 0..dim {
        if used[i] {
            continue;
        }
        let col: Vec<f64> = j.column(i).iter().copied().collect();
        let nz: Vec<usize> = (0..dim).filter(|&r| col[r] != 0.0).collect();
        let [t] = nz.as_slice() else { return None };
        if col[*t] != 1.0 || used[*t] || j[(i, *t)] != -1.0 {
            return None;
        }
        if j.column(*t).iter().filter(|x| **x != 0.0).count() != 1 {
            return None;
        }
        used[i] = true;
        used[*t] = true;
        out.push((i, *t));
    }
    Some(out)
}

fn canonical_brackets(
    dim: usize,
    raw: &[(usize, usize, usize, BigRational)],
) -> Vec<(usize, usize, usize, BigRational)> {
    let mut table = vec![BigRational::zero(); dim * dim * dim];
    for (i, j, k, c) in raw {
        let (a, b, s) = if i < j {
            (*i, *j, c.clone())
        } else {
            (*j, *i, -c.clone())
        };
        table[(a * dim + b) * dim + k] += s;
    }
    let mut out = Vec::new();
    for a in 0..dim {
        for b in (a + 1)..dim {
            for k in 0..dim {
                let c = &table[(a * dim + b) * dim + k];
                if !c.is_zero() {
                    out.push((a, b, k, c.clone()));
                }
            }
        }
    }
    out
}

/// Reads `text` and builds the validated model.
pub fn parse_model_text(text: &str) -> Result<HermitianModel> {
    ModelFile::parse(text)?.to_model()
}
