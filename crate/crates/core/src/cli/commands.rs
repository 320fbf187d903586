//! The `skt` command line: argument parsing and command dispatch.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use nalgebra::DMatrix;
use num_traits::ToPrimitive;

use super::model_file::{parse_scalar, ModelFile};
use super::report::{format_real, Check, Format, Report, Status};
use crate::catalog::{catalog_get, catalog_list, parse_params, CatalogItem};
use crate::error::{Error, Result};
use crate::exterior::AlternatingForm;
use crate::model::{bismut_ricci, HermitianModel};
use crate::skt::{
    identity_suite, lck_detect, relative_gap, skt_classify, synthetic_identities, torsion_h,
    vanishing_margin, AlphaRoute, TorsionPackage, DEFAULT_TOL, IDENTITY_TOL,
};
use crate::twist::{
    diophantine_check, dw_square_residual, enumerate_beta, lift_check, scyt_constants, twist_model,
    verify_hw, Condition, ScytCase, TwistSpec,
};

/// Relative agreement required between the three `α_k` routes.
pub const ROUTE_TOL: f64 = 1e-8;

#[derive(Parser, Debug)]
#[command(
    name = "skt",
    version,
    about = "Torsion invariants, SKT classification and torus twists of Hermitian Lie-algebra models"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = FormatArg::Text, global = true)]
    pub format: FormatArg,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Text,
    Records,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ScytArg {
    /// `X^{2k} × X²`.
    Surface,
    /// `X^{2k} × X⁴`.
    Fourfold,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Torsion invariants, classification, α_k on all routes and the vanishing margin.
    Analyze {
        /// Model file path, or `catalog:<name>[:k=v,...]`.
        model: String,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Identity suite over random compatible metrics and synthetic torsion.
    Identities {
        /// Model file path, or `catalog:<name>[:k=v,...]`.
        model: String,
        #[arg(long, default_value_t = 5)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = IDENTITY_TOL)]
        tol: f64,
    },
    /// Twist a model by a torus action with curvature.
    Twist {
        /// Base model, as for `analyze`.
        model: String,
        /// Frame indices of the torus generators, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        xi: Vec<usize>,
        /// One curvature 2-form per generator, e.g. `0^1 - 1/2*2^3`.
        #[arg(long = "F", required = true, allow_hyphen_values = true)]
        curvature: Vec<String>,
        /// Entries of β⁻¹ column by column; for rank 2 this is `p1,p2,q1,q2`.
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        beta: Vec<String>,
        /// Also compare H_W with the torsion predicted from the base.
        #[arg(long)]
        check_hw: bool,
        /// Write the twisted model to this file.
        #[arg(long)]
        write: Option<PathBuf>,
    },
    /// Enumerate integer β⁻¹ satisfying an SKT condition on a torus bundle.
    Solve {
        /// One of `two-skt`, `k-skt`, `k-skt-kahler`, `k-plus-one-skt`.
        #[arg(long)]
        condition: String,
        #[arg(long, default_value_t = 2)]
        k: u32,
        /// Search β⁻¹ entries in `-bound..=bound`.
        #[arg(long)]
        bound: u32,
        /// Treat F¹ as a null class (F¹∧F¹ = 0).
        #[arg(long)]
        null_f1: bool,
        /// Treat F² as a null class (F²∧F² = 0).
        #[arg(long)]
        null_f2: bool,
        /// Also report the SCYT cosmological constants for each solution.
        #[arg(long, value_enum)]
        scyt: Option<ScytArg>,
    },
    /// Built-in models.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Subcommand, Debug)]
pub enum CatalogAction {
    /// Names, parameters and documented flags.
    List,
    /// Print an entry in the model file format.
    Get {
        name: String,
        /// Parameters as `key=value`.
        params: Vec<String>,
    },
}

/// Output of one invocation.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Exit code for bad input that is not a failed check.
fn input_error(e: &Error) -> bool {
    matches!(e, Error::Syntax { .. } | Error::Lookup(_))
}

/// Runs the CLI on `args` (including the program name) without touching the process.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let (stdout, stderr) = if code == 0 {
                (text, String::new())
            } else {
                (String::new(), text)
            };
            return Outcome {
                exit_code: code,
                stdout,
                stderr,
            };
        }
    };
    let format = match cli.format {
        FormatArg::Text => Format::Text,
        FormatArg::Records => Format::Records,
    };
    match execute(&cli.command) {
        Ok(Output::Report(r)) => Outcome {
            exit_code: if r.passed() { 0 } else { 1 },
            stdout: r.render(format),
            stderr: String::new(),
        },
        Ok(Output::Text(t)) => Outcome {
            exit_code: 0,
            stdout: t,
            stderr: String::new(),
        },
        Err(e) => Outcome {
            exit_code: if input_error(&e) { 2 } else { 1 },
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

enum Output {
    Report(Report),
    Text(String),
}

fn execute(cmd: &Command) -> Result<Output> {
    Ok(match cmd {
        Command::Analyze { model, tol } => {
            Output::Report(analyze(&load_model(model)?, model, *tol)?)
        }
        Command::Identities {
            model,
            trials,
            seed,
            tol,
        } => Output::Report(identities(
            &load_model(model)?,
            model,
            *trials,
            *seed,
            *tol,
        )?),
        Command::Twist {
            model,
            xi,
            curvature,
            beta,
            check_hw,
            write,
        } => Output::Report(twist(
            load_model(model)?,
            model,
            xi,
            curvature,
            beta,
            *check_hw,
            write.as_deref(),
        )?),
        Command::Solve {
            condition,
            k,
            bound,
            null_f1,
            null_f2,
            scyt,
        } => Output::Report(solve(condition, *k, *bound, *null_f1, *null_f2, *scyt)?),
        Command::Catalog { action } => match action {
            CatalogAction::List => Output::Text(catalog_listing()),
            CatalogAction::Get { name, params } => Output::Text(catalog_export(name, params)?),
        },
    })
}

/// Loads a model from a file path or a `catalog:<name>[:params]` reference.
pub fn load_model(arg: &str) -> Result<HermitianModel> {
    if let Some(rest) = arg.strip_prefix("catalog:") {
        let (name, params) = rest.split_once(':').unwrap_or((rest, ""));
        let item = catalog_get(name, &parse_params(&[params])?)?;
        return match item {
            CatalogItem::Model(m) => Ok(m),
            CatalogItem::Twist(spec) => twist_model(&spec),
        };
    }
    let text = std::fs::read_to_string(Path::new(arg))
        .map_err(|e| Error::Lookup(format!("cannot read `{arg}`: {e}")))?;
    ModelFile::parse(&text)?.to_model()
}

fn flag(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

fn slug(name: &str) -> String {
    match name {
        "J^2 = -1" => "complex_structure_squared".into(),
        other => other.replace(' ', "_"),
    }
}

pub fn analyze(model: &HermitianModel, label: &str, tol: f64) -> Result<Report> {
    let mut r = Report::new(format!("analyze {label}"));
    let n = model.n();
    r.push(Check::info("dim", model.dim().to_string()));
    for c in model.validation().checks {
        let status = if c.name == "unimodular" {
            Status::Info
        } else {
            Status::from_bool(c.passed)
        };
        r.push(
            Check::new(format!("model.{}", slug(c.name)), status)
                .residual(c.residual)
                .value(flag(c.passed)),
        );
    }
    let pkg = TorsionPackage::compute(model)?;
    let scalars = [
        ("norm_h_sq", pkg.norm_h_sq, "|H|^2 = (1/6) H_ijk H^ijk"),
        ("norm_theta_sq", pkg.norm_theta_sq, "|theta|^2"),
        ("delta_theta", pkg.delta_theta, "delta theta = -*d*theta"),
        ("lambda_trace", pkg.lambda_trace, "sum_i lambda(e_i, J e_i)"),
        ("norm_c_sq", pkg.norm_c_sq, "|C|^2, C the Chern torsion"),
    ];
    for (name, v, f) in scalars {
        r.push(Check::info(format!("torsion.{name}"), format_real(v)).formula(f));
    }
    let ricci = bismut_ricci(model, &pkg.h);
    let ricci_tol = tol * (1.0 + pkg.norm_h_sq);
    r.push(
        Check::info("ricci.rho_zero", flag(ricci.rho.max_abs() <= ricci_tol))
            .residual(ricci.rho.max_abs())
            .formula("rho(X, Y) = sum_a R(X, Y, e_a, J e_a)"),
    );
    r.push(
        Check::info("ricci.b_hat_zero", flag(ricci.b_hat.abs() <= ricci_tol))
            .residual(ricci.b_hat.abs())
            .formula("b = sum_a rho(J e_a, e_a)"),
    );
    r.push(Check::info("ricci.status", ricci.status(ricci_tol).name()));
    let c = skt_classify(model, &pkg, tol);
    for e in &c.lk_table {
        r.push(
            Check::info(format!("class.skt(l={},k={})", e.l, e.k), flag(e.holds))
                .residual(e.residual)
                .formula("omega^l ^ d(omega^(k-1) ^ H) = 0"),
        );
    }
    r.push(Check::info("class.kahler", flag(c.kahler)).formula("d omega = 0"));
    r.push(Check::info("class.balanced", flag(c.balanced)).formula("theta = 0"));
    r.push(
        Check::info("class.lck", flag(c.lck))
            .residual(c.lck_residual)
            .formula("H = (1/(n-1)) J theta ^ omega"),
    );
    let gk: Vec<String> = c.gauduchon_k.iter().map(|k| k.to_string()).collect();
    r.push(Check::info("class.gauduchon_k", gk.join(",")).formula("alpha_k = 0"));
    for a in &c.alpha_values {
        let spread = a.spread();
        let mut chk = Check::new(
            format!("alpha.k={}", a.k),
            Status::from_bool(spread <= ROUTE_TOL),
        )
        .residual(spread)
        .value(format_real(a.definitional()))
        .formula("definitional = lambda route = closed form");
        for (route, v) in AlphaRoute::ALL.iter().zip(&a.routes) {
            chk = chk.field(
                route.name(),
                v.map(format_real).unwrap_or_else(|| "n/a".into()),
            );
        }
        r.push(chk);
    }
    for (k, l, v) in &c.alpha_kl {
        r.push(
            Check::info(format!("alpha_kl.k={k},l={l}"), format_real(*v))
                .formula("omega^l ^ d(omega^(k-1) ^ H) = alpha_kl omega^(k+l+1)/(k+l+1)!")
                .field("exponent", "k-1"),
        );
    }
    let lck = lck_detect(model, &pkg, tol);
    for (k, predicted) in &lck.alpha_prediction {
        let actual = c.alpha_values[k - 1].definitional();
        let gap = relative_gap(actual, *predicted);
        r.push(
            Check::new(
                format!("lck_alpha.k={k}"),
                Status::from_bool(gap <= ROUTE_TOL),
            )
            .residual(gap)
            .value(format_real(*predicted))
            .formula("alpha_k = (n-3)! (n-k-1)(n-2)/(n-1) |theta|^2"),
        );
    }
    if n > 2 {
        for k in 1..n {
            let name = format!("margin.k={k}");
            match vanishing_margin(model, &pkg, k, tol) {
                Ok(m) => r.push(
                    Check::new(name, Status::Pass)
                        .residual(if m.equality_asserted {
                            relative_gap(m.margin, m.chern_expression)
                        } else {
                            0.0
                        })
                        .value(format_real(m.margin))
                        .formula("b + (n-k-1)/(3(n-2))|H|^2 + 2(k-1)/(n-2)|theta|^2")
                        .field("verdict", m.verdict.name())
                        .field("b_hat", format_real(m.b_hat))
                        .field("chern_expression", format_real(m.chern_expression))
                        .field("equality_asserted", flag(m.equality_asserted)),
                ),
                Err(Error::Consistency { residual, .. }) => r.push(
                    Check::new(name, Status::Fail)
                        .residual(residual)
                        .formula("margin = b + |C|^2 + (1/4) sum lambda(e_i, J e_i)"),
                ),
                Err(e) => return Err(e),
            }
        }
    }
    Ok(r)
}

pub fn identities(
    model: &HermitianModel,
    label: &str,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<Report> {
    let mut r = Report::new(format!("identities {label} trials={trials} seed={seed}"));
    let mut suite = identity_suite(model, trials, seed, DEFAULT_TOL)?;
    suite.merge(&synthetic_identities(model.n(), trials, seed)?);
    for c in &suite.checks {
        let status = if c.evaluated == 0 {
            Status::Info
        } else {
            Status::from_bool(c.residual <= tol)
        };
        r.push(
            Check::new(c.name, status)
                .residual(c.residual)
                .formula(c.formula)
                .field("evaluated", c.evaluated.to_string()),
        );
    }
    Ok(r)
}

/// Parses `c*i^j + …` (indices may carry an `e` prefix; `c` decimal or `a/b`).
pub fn parse_two_form(dim: usize, text: &str) -> Result<AlternatingForm> {
    let bad = |m: String| Error::Syntax {
        line: 0,
        message: m,
    };
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut terms = Vec::new();
    let mut cur = String::new();
    for ch in compact.chars() {
        if (ch == '+' || ch == '-') && !cur.is_empty() && !cur.ends_with('*') {
            terms.push(std::mem::take(&mut cur));
        }
        cur.push(ch);
    }
    if !cur.is_empty() {
        terms.push(cur);
    }
    let mut out = AlternatingForm::zero(dim, 2);
    for term in terms {
        let body = term.strip_prefix('+').unwrap_or(&term);
        let (coeff, pair) = match body.rsplit_once('*') {
            Some((c, p)) => (parse_scalar(c).map_err(bad)?, p.to_string()),
            None => match body.strip_prefix('-') {
                Some(p) => (parse_scalar("-1").map_err(bad)?, p.to_string()),
                None => (parse_scalar("1").map_err(bad)?, body.to_string()),
            },
        };
        let (a, b) = pair
            .split_once('^')
            .ok_or_else(|| bad(format!("term `{term}` is not of the form c*i^j")))?;
        let idx = |s: &str| -> Result<usize> {
            let s = s.strip_prefix('e').unwrap_or(s);
            let i: usize = s
                .parse()
                .map_err(|_| bad(format!("bad index `{s}` in `{term}`")))?;
            if i >= dim {
                return Err(bad(format!("index {i} outside 0..{dim}")));
            }
            Ok(i)
        };
        let (i, j) = (idx(a)?, idx(b)?);
        if i == j {
            return Err(bad(format!("repeated index in `{term}`")));
        }
        let c = coeff.to_f64().unwrap_or(f64::NAN);
        out += &(AlternatingForm::basis(dim, &[i, j]) * c);
    }
    Ok(out)
}

fn twist(
    base: HermitianModel,
    label: &str,
    xi: &[usize],
    curvature: &[String],
    beta: &[String],
    check_hw: bool,
    write: Option<&Path>,
) -> Result<Report> {
    let dim = base.dim();
    let m = xi.len();
    let usage = |m: String| Error::Lookup(m);
    if curvature.len() != m {
        return Err(usage(format!(
            "{m} generators but {} curvature forms",
            curvature.len()
        )));
    }
    if beta.len() != m * m {
        return Err(usage(format!(
            "beta needs {} entries, got {}",
            m * m,
            beta.len()
        )));
    }
    let vectors = xi
        .iter()
        .map(|&i| {
            if i >= dim {
                return Err(usage(format!("generator index {i} outside 0..{dim}")));
            }
            let mut v = vec![0.0; dim];
            v[i] = 1.0;
            Ok(v)
        })
        .collect::<Result<Vec<_>>>()?;
    let forms = curvature
        .iter()
        .map(|s| parse_two_form(dim, s))
        .collect::<Result<Vec<_>>>()?;
    let entries = beta
        .iter()
        .map(|s| {
            parse_scalar(s)
                .map(|x| x.to_f64().unwrap_or(f64::NAN))
                .map_err(|e| Error::Syntax {
                    line: 0,
                    message: e,
                })
        })
        .collect::<Result<Vec<_>>>()?;
    let beta_inverse = DMatrix::from_column_slice(m, m, &entries);
    let spec = TwistSpec::from_beta_inverse(base, vectors, forms, beta_inverse)?;
    let mut r = Report::new(format!("twist {label}"));
    let lift = lift_check(&spec);
    for c in &lift.checks {
        r.push(
            Check::new(
                format!("lift.{}", slug(c.name)),
                Status::from_bool(c.passed),
            )
            .residual(c.residual),
        );
    }
    if !lift.all_passed() {
        return Ok(r);
    }
    let w = match twist_model(&spec) {
        Ok(w) => w,
        Err(e @ (Error::Construction(_) | Error::Integrability(_))) => {
            r.push(Check::new("twist.construct", Status::Fail).value(e.to_string()));
            return Ok(r);
        }
        Err(e) => return Err(e),
    };
    let dw2 = dw_square_residual(&w);
    r.push(
        Check::new("twist.dw_squared", Status::from_bool(dw2 <= 1e-10))
            .residual(dw2)
            .formula("d_W d_W = 0"),
    );
    r.push(Check::info(
        "twist.nilpotency_class",
        match w.algebra().nilpotency_class(1e-9) {
            Some(s) => s.to_string(),
            None => "not nilpotent".into(),
        },
    ));
    if check_hw {
        let hw = verify_hw(&spec, &w)?;
        r.push(
            Check::new("twist.h_w", Status::from_bool(hw.residual() <= 1e-10))
                .residual(hw.residual())
                .formula(if hw.type_11 {
                    "H_W = H - F^A ^ eta_A"
                } else {
                    "H_W = H + i_J F^A ^ i_xi_A omega - F^A ^ eta_A"
                })
                .field("type_11", flag(hw.type_11)),
        );
    }
    let h = torsion_h(&w)?;
    let n = w.n();
    for k in 1..n {
        let e = crate::skt::lk_entry(&w, &h, k, 0, DEFAULT_TOL);
        r.push(
            Check::info(format!("twist.skt(k={k})"), flag(e.holds))
                .residual(e.residual)
                .formula("d_W(omega^(k-1) ^ H_W) = 0"),
        );
    }
    if let Some(path) = write {
        let file = ModelFile::from_model(&w, vec![("source".into(), format!("twist of {label}"))])?;
        std::fs::write(path, file.serialize())
            .map_err(|e| Error::Lookup(format!("cannot write `{}`: {e}", path.display())))?;
    }
    Ok(r)
}

fn solve(
    condition: &str,
    k: u32,
    bound: u32,
    null_f1: bool,
    null_f2: bool,
    scyt: Option<ScytArg>,
) -> Result<Report> {
    let cond: Condition = condition.parse()?;
    let mut r = Report::new(format!(
        "solve {cond} k={k} bound={bound} null_f1={} null_f2={}",
        flag(null_f1),
        flag(null_f2)
    ));
    let solutions = enumerate_beta(cond, k, bound, null_f1, null_f2);
    r.push(Check::info("solve.count", solutions.len().to_string()).formula(cond.formula()));
    for inst in &solutions {
        let out = diophantine_check(inst)?;
        let mut c = Check::new(format!("solution {inst}"), Status::from_bool(out.satisfied))
            .value(out.lhs.to_string());
        if let Some(rw) = &out.rewritten {
            c = c.field("rewritten", format!("{} = {}", rw.lhs, rw.rhs));
        }
        if let Some(case) = scyt {
            let case = match case {
                ScytArg::Surface => ScytCase::WithSurface,
                ScytArg::Fourfold => ScytCase::WithFourfold,
            };
            let s = scyt_constants(inst, case)?;
            c = c
                .field("l1", s.l1.to_string())
                .field("l2", s.l2.to_string());
            if let Some(simple) = &s.l1_simplified {
                c = c.field("l1_simplified", simple.to_string());
            }
        }
        r.push(c);
    }
    Ok(r)
}

fn catalog_listing() -> String {
    let mut out = String::new();
    for e in catalog_list() {
        out.push_str(e.name);
        out.push_str("  ");
        out.push_str(e.description);
        out.push('\n');
        for p in e.params {
            out.push_str(&format!("    {} = {} ({})\n", p.name, p.default, p.range));
        }
    }
    out
}

fn catalog_export(name: &str, params: &[String]) -> Result<String> {
    let parsed = parse_params(params)?;
    let model = match catalog_get(name, &parsed)? {
        CatalogItem::Model(m) => m,
        CatalogItem::Twist(spec) => twist_model(&spec)?,
    };
    let mut meta = vec![("name".to_string(), name.to_string())];
    for (k, v) in &parsed {
        meta.push(("param".into(), format!("{k}={v}")));
    }
    Ok(ModelFile::from_model(&model, meta)?.serialize())
}
