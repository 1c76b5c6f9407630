//! The `tftwb` command line. [`run`] does all the work and returns what to
//! print, so tests can drive it without spawning a process.

use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use tftwb_core::bordism::{self, evaluate, random_equivalent_decomposition};
use tftwb_core::deformation::{
    build_sym_t_model, degree3_solution_space, gauge_transform, mc_residual, mc_residual_dual, poisson_bivector_check,
    schouten_bracket, validate_dgla, DGLAElement, DGLAModel, SymTBounds,
};
use tftwb_core::frobenius::validate;
use tftwb_core::mfcat::{mf_hom, mf_tensor, MatrixFactorization};
use tftwb_core::statespace::{state_space_dim, CohomologyModel};
use tftwb_core::{PolyMatrix, RatMatrix};

use crate::doc;
use crate::report::{ErrorReport, InputDigest, RunReport};
use crate::selftest;

pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

/// Default Hom truncation when `--trunc` is absent.
pub const TRUNC_ENV: &str = "TFTWB_TRUNC_DEFAULT";
const TRUNC_DEFAULT: usize = 8;

#[derive(Parser, Debug)]
#[command(
    name = "tftwb",
    version,
    about = "Exact computations for 2d TFTs, matrix factorizations and deformations"
)]
struct Cli {
    /// Add wall-clock time to the report (the only nondeterministic field).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a bordism word on a Frobenius algebra.
    Eval(EvalArgs),
    /// Matrix factorizations.
    #[command(subcommand)]
    Mf(MfCommand),
    /// Maurer-Cartan residuals, gauge action, SymT windows and Schouten brackets.
    #[command(subcommand)]
    Mc(McCommand),
    /// Genus-g state space dimensions.
    States(StatesArgs),
    /// Run the acceptance suite.
    Selftest,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[arg(long)]
    algebra: PathBuf,
    /// A word, or the path of a file containing one.
    #[arg(long)]
    word: String,
    /// Also evaluate this many random equivalent decompositions.
    #[arg(long, requires = "seed")]
    check_moves: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum MfCommand {
    /// Hom(A, B) by truncated cohomology.
    Hom {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        trunc: Option<usize>,
    },
    /// The tensor product A ⊗ B.
    Tensor {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
    /// Validate a factorization document.
    Check { file: PathBuf },
}

#[derive(Subcommand, Debug)]
enum McCommand {
    /// The residual dβ + ½[β, β].
    Check {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        beta: PathBuf,
    },
    /// First order gauge action of a degree 0 element.
    Gauge {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        beta: PathBuf,
        #[arg(long)]
        a: PathBuf,
    },
    /// Degree-3 solutions in a truncated SymT window.
    Degree3 {
        /// For example `m=1,p=4,deg=6,charts=2`.
        #[arg(long)]
        symt: String,
    },
    /// [P, P] for one polyvector, or [P, Q] for two.
    Schouten {
        #[arg(long)]
        p: PathBuf,
        #[arg(long)]
        q: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct StatesArgs {
    #[arg(long, conflicts_with = "table", requires = "hodge")]
    dim: Option<usize>,
    #[arg(long, value_delimiter = ',', requires = "dim")]
    hodge: Option<Vec<u64>>,
    #[arg(long, requires = "dim")]
    trivial_tangent: bool,
    #[arg(long)]
    table: Option<PathBuf>,
    #[arg(long)]
    genus: u32,
}

/// What the process should print and return.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Usage(String),
    Invalid(ErrorReport),
}

fn invalid<E: fmt::Display + fmt::Debug>(kind: &str, e: E) -> Failure {
    Failure::Invalid(ErrorReport {
        kind: kind.into(),
        message: e.to_string(),
        witness: format!("{e:?}"),
    })
}

struct Ctx {
    digest: InputDigest,
}

impl Ctx {
    fn read(&mut self, label: &str, path: &Path) -> Result<String, Failure> {
        let text = std::fs::read_to_string(path).map_err(|e| invalid("io", format!("{}: {e}", path.display())))?;
        self.digest.add(label, text.as_bytes());
        Ok(text)
    }

    fn schema<T>(&self, path: &Path, r: Result<T, doc::SchemaError>) -> Result<T, Failure> {
        r.map_err(|e| {
            Failure::Invalid(ErrorReport {
                kind: "schema".into(),
                message: format!("{}: {e}", path.display()),
                witness: format!("{e:?}"),
            })
        })
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let command: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let mut ctx = Ctx {
        digest: InputDigest::default(),
    };
    let start = Instant::now();
    let outcome = dispatch(&cli.command, &mut ctx);
    let timing_ms = cli.timing.then(|| start.elapsed().as_millis());
    let (code, result, error) = match outcome {
        Ok((code, v)) => (code, Some(v), None),
        Err(Failure::Invalid(e)) => (EXIT_INVALID, None, Some(e)),
        Err(Failure::Usage(msg)) => {
            return Outcome {
                code: EXIT_USAGE,
                stdout: String::new(),
                stderr: format!("error: {msg}\n"),
            }
        }
    };
    let report = RunReport {
        command,
        inputs_digest: ctx.digest.finish(),
        result,
        error,
        timing_ms,
    };
    Outcome {
        code,
        stdout: report.to_json(),
        stderr: String::new(),
    }
}

type Handled = Result<(i32, Value), Failure>;

fn dispatch(cmd: &Command, ctx: &mut Ctx) -> Handled {
    match cmd {
        Command::Eval(a) => eval(a, ctx),
        Command::Mf(m) => mf(m, ctx),
        Command::Mc(m) => mc(m, ctx),
        Command::States(s) => states(s, ctx),
        Command::Selftest => {
            let results = selftest::run_all();
            let passed = results.iter().all(|c| c.passed);
            let code = if passed { 0 } else { EXIT_FAILURE };
            Ok((code, json!({ "passed": passed, "criteria": results })))
        }
    }
}

fn rat_matrix(m: &RatMatrix) -> Value {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.get(i, j).to_string()).collect::<Vec<_>>())
        .collect()
}

fn poly_matrix(m: &PolyMatrix) -> Value {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.get(i, j).to_string()).collect::<Vec<_>>())
        .collect()
}

fn eval(a: &EvalArgs, ctx: &mut Ctx) -> Handled {
    let text = ctx.read("algebra", &a.algebra)?;
    let raw = ctx.schema(&a.algebra, doc::frobenius_from_json(&text))?;
    let algebra = validate(&raw).map_err(|e| invalid("frobenius", e))?;
    let word_path = Path::new(&a.word);
    let source = if word_path.is_file() {
        ctx.read("word-file", word_path)?
    } else {
        ctx.digest.add("word", a.word.as_bytes());
        a.word.clone()
    };
    let word = bordism::parse(&source).map_err(|e| invalid("bordism", e))?;
    let z = evaluate(&word, &algebra);
    let mut result = json!({
        "word": word.to_string(),
        "source": word.source_circles(),
        "target": word.target_circles(),
        "matrix": rat_matrix(&z),
    });
    let mut code = 0;
    if let (Some(n), Some(seed)) = (a.check_moves, a.seed) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut mismatch = Value::Null;
        for i in 0..n {
            let s: u64 = rng.random();
            let v = random_equivalent_decomposition(&word, s);
            if evaluate(&v, &algebra) != z {
                mismatch = json!({ "index": i, "seed": s, "word": v.to_string() });
                code = EXIT_FAILURE;
                break;
            }
        }
        result["decompositions_checked"] = json!(n);
        result["all_equal"] = json!(mismatch.is_null());
        if !mismatch.is_null() {
            result["first_mismatch"] = mismatch;
        }
    }
    Ok((code, result))
}

fn load_mf(ctx: &mut Ctx, label: &str, path: &Path) -> Result<MatrixFactorization, Failure> {
    let text = ctx.read(label, path)?;
    let parts = ctx.schema(path, doc::mf_from_json(&text))?;
    parts.build().map_err(|e| invalid("mfcat", e))
}

fn default_truncation() -> Result<usize, Failure> {
    match std::env::var(TRUNC_ENV) {
        Err(_) => Ok(TRUNC_DEFAULT),
        Ok(v) => v
            .trim()
            .parse()
            .ok()
            .filter(|&n: &usize| n > 0)
            .ok_or_else(|| Failure::Usage(format!("{TRUNC_ENV} must be a positive integer, found `{v}`"))),
    }
}

fn mf(cmd: &MfCommand, ctx: &mut Ctx) -> Handled {
    match cmd {
        MfCommand::Hom { a, b, trunc } => {
            let trunc = match trunc {
                Some(0) => return Err(Failure::Usage("--trunc must be positive".into())),
                Some(n) => *n,
                None => default_truncation()?,
            };
            let ma = Arc::new(load_mf(ctx, "a", a)?);
            let mb = Arc::new(load_mf(ctx, "b", b)?);
            let t = mf_hom(&ma, &mb, trunc).map_err(|e| invalid("mfcat", e))?;
            let basis: Vec<Value> = t
                .basis()
                .iter()
                .map(|c| json!({ "parity": c.parity().to_string(), "representative": poly_matrix(c.representative()) }))
                .collect();
            Ok((
                0,
                json!({
                    "dims": { "even": t.dim_even(), "odd": t.dim_odd(), "stabilized": t.stabilized() },
                    "truncation": t.truncation_degree(),
                    "basis": basis,
                }),
            ))
        }
        MfCommand::Tensor { a, b, out } => {
            let ma = load_mf(ctx, "a", a)?;
            let mb = load_mf(ctx, "b", b)?;
            let t = mf_tensor(&ma, &mb).map_err(|e| invalid("mfcat", e))?;
            let mut result = json!({
                "rank": [t.rank_even(), t.rank_odd()],
                "c": t.c().to_string(),
                "w": t.potential().poly().to_string(),
            });
            match out {
                Some(path) => {
                    std::fs::write(path, doc::mf_to_json(&t))
                        .map_err(|e| invalid("io", format!("{}: {e}", path.display())))?;
                    result["written"] = json!(path.display().to_string());
                }
                None => result["object"] = doc::mf_to_value(&t),
            }
            Ok((0, result))
        }
        MfCommand::Check { file } => {
            let m = load_mf(ctx, "object", file)?;
            Ok((
                0,
                json!({
                    "valid": true,
                    "rank": [m.rank_even(), m.rank_odd()],
                    "c": m.c().to_string(),
                    "w": m.potential().poly().to_string(),
                }),
            ))
        }
    }
}

fn load_model(ctx: &mut Ctx, path: &Path) -> Result<Arc<DGLAModel>, Failure> {
    let text = ctx.read("model", path)?;
    let raw = ctx.schema(path, doc::dgla_from_json(&text))?;
    Ok(Arc::new(validate_dgla(&raw).map_err(|e| invalid("deformation", e))?))
}

fn load_element(ctx: &mut Ctx, label: &str, path: &Path, m: &Arc<DGLAModel>) -> Result<DGLAElement, Failure> {
    let text = ctx.read(label, path)?;
    let coeffs = ctx.schema(path, doc::element_from_json(&text))?;
    DGLAElement::new(m, coeffs).map_err(|e| invalid("deformation", e))
}

fn dual(x: &tftwb_core::deformation::DualElement) -> Value {
    json!({ "re": doc::element_to_value(x.re.coeffs()), "eps": doc::element_to_value(x.eps.coeffs()) })
}

fn parse_symt(spec: &str) -> Result<SymTBounds, Failure> {
    let mut m = None;
    let mut p = None;
    let mut deg = None;
    let mut charts = None;
    let bad = || Failure::Usage(format!("--symt expects m=..,p=..,deg=..,charts=.., found `{spec}`"));
    for part in spec.split(',') {
        let (k, v) = part.split_once('=').ok_or_else(bad)?;
        let v: u32 = v.trim().parse().map_err(|_| bad())?;
        let slot = match k.trim() {
            "m" => &mut m,
            "p" => &mut p,
            "deg" => &mut deg,
            "charts" => &mut charts,
            _ => return Err(bad()),
        };
        *slot = Some(v);
    }
    let (Some(m), Some(p), Some(deg)) = (m, p, deg) else {
        return Err(bad());
    };
    let charts = charts.unwrap_or(1);
    if m == 0 || !(1..=2).contains(&charts) {
        return Err(bad());
    }
    Ok(SymTBounds::new(m as usize, p, deg, charts as u8))
}

fn mc(cmd: &McCommand, ctx: &mut Ctx) -> Handled {
    match cmd {
        McCommand::Check { model, beta } => {
            let m = load_model(ctx, model)?;
            let b = load_element(ctx, "beta", beta, &m)?;
            let r = mc_residual(&b);
            Ok((
                0,
                json!({
                    "degree": b.degree().to_string(),
                    "residual": doc::element_to_value(r.coeffs()),
                    "is_solution": r.is_zero(),
                }),
            ))
        }
        McCommand::Gauge { model, beta, a } => {
            let m = load_model(ctx, model)?;
            let b = load_element(ctx, "beta", beta, &m)?;
            let g = load_element(ctx, "a", a, &m)?;
            let moved = gauge_transform(&b, &g).map_err(|e| invalid("deformation", e))?;
            let res = mc_residual_dual(&moved);
            let r = mc_residual(&b);
            let covariant = res.re == r && res.eps == r.bracket(&g).map_err(|e| invalid("deformation", e))?;
            Ok((
                if covariant { 0 } else { EXIT_FAILURE },
                json!({ "gauged": dual(&moved), "residual": dual(&res), "covariant": covariant }),
            ))
        }
        McCommand::Degree3 { symt } => {
            let bounds = parse_symt(symt)?;
            ctx.digest.add("symt", symt.as_bytes());
            let model = build_sym_t_model(bounds).map_err(|e| invalid("deformation", e))?;
            Ok((
                0,
                json!({
                    "bounds": {
                        "m": bounds.m, "min_p": bounds.min_p, "max_p": bounds.max_p,
                        "max_deg": bounds.max_deg, "charts": bounds.charts,
                    },
                    "cutoff": model.cutoff(),
                    "window": model.window_size(),
                    "dim": model.dim(),
                    "degree3": degree3_solution_space(&model),
                }),
            ))
        }
        McCommand::Schouten { p, q } => {
            let text = ctx.read("p", p)?;
            let pv = ctx.schema(p, doc::polyvector_from_json(&text))?;
            match q {
                Some(q) => {
                    let text = ctx.read("q", q)?;
                    let qv = ctx.schema(q, doc::polyvector_from_json(&text))?;
                    let b = schouten_bracket(&pv, &qv).map_err(|e| invalid("deformation", e))?;
                    Ok((0, json!({ "bracket": doc::polyvector_to_value(&b) })))
                }
                None => {
                    let r = poisson_bivector_check(&pv).map_err(|e| invalid("deformation", e))?;
                    Ok((
                        0,
                        json!({ "poisson": r.passed, "obstruction": doc::polyvector_to_value(&r.obstruction) }),
                    ))
                }
            }
        }
    }
}

fn states(s: &StatesArgs, ctx: &mut Ctx) -> Handled {
    let model = match (&s.table, s.dim, &s.hodge) {
        (Some(path), _, _) => {
            let text = ctx.read("table", path)?;
            ctx.schema(path, doc::cohomology_from_json(&text))?
        }
        (None, Some(n), Some(h)) => {
            let m = CohomologyModel::new(n, h.clone(), s.trivial_tangent, Default::default())
                .map_err(|e| invalid("statespace", e))?;
            ctx.digest.add("model", doc::cohomology_to_json(&m).as_bytes());
            m
        }
        _ => return Err(Failure::Usage("states needs --table or --dim with --hodge".into())),
    };
    let sp = state_space_dim(&model, s.genus).map_err(|e| invalid("statespace", e))?;
    Ok((
        0,
        json!({
            "genus": s.genus,
            "total": sp.total.to_string(),
            "by_degree": sp.by_degree.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
        }),
    ))
}
