//! The `mvlp` command line: argument parsing, grid expansion, parallel evaluation
//! and serialization of results.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use mvlp_core::arith::rational::{format_rational, parse_rational, Rational};
use mvlp_core::arith::CycloNumber;
use mvlp_core::bernoulli::{bernoulli, multi_bernoulli, multi_bernoulli_poly, BernoulliCache};
use mvlp_core::characters::{labeled, parse_label, teichmuller_modulus, DirichletCharacter};
use mvlp_core::classical::{gen_multi_bernoulli, gen_multi_bernoulli_oracle, l_numeric_cutoff, L_numeric, L_special};
use mvlp_core::padic::{PAdicArg, PAdicNumber};
use mvlp_core::padic_l::{
    default_modulus, embed_cyclo, kubota_leopoldt_special, multivariate_Lp, verify_theorem4,
    washington_Lp,
};
use mvlp_core::report::Comparison;
use mvlp_core::MathError;

pub type Record = Map<String, Value>;

pub const CACHE_ENV: &str = "MVLP_CACHE_DIR";
pub const CACHE_FILE: &str = "bernoulli.txt";

#[derive(Parser, Debug)]
#[command(name = "mvlp", version, about = "Multiple Bernoulli numbers, multivariate L-values and their p-adic interpolation")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Directory holding the Bernoulli cache file (overrides MVLP_CACHE_DIR).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Worker threads for grid evaluation (default: available processors).
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    #[value(name = "eq5-eq6")]
    GeneratingFunction,
    Theorem2,
    Lemma3,
    Theorem4,
    FStability,
}

/// Integers given as `3`, `1..4` (inclusive) or comma-separated mixtures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grid(pub Vec<i64>);

fn parse_grid(s: &str) -> Result<Grid, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        match part.split_once("..") {
            Some((a, b)) => {
                let a: i64 = a.trim().parse().map_err(|_| format!("bad range start in {part:?}"))?;
                let b: i64 = b.trim().parse().map_err(|_| format!("bad range end in {part:?}"))?;
                if b < a || b - a > 100_000 {
                    return Err(format!("bad range {part:?}"));
                }
                out.extend(a..=b);
            }
            None => out.push(part.parse().map_err(|_| format!("not an integer: {part:?}"))?),
        }
    }
    if out.is_empty() {
        return Err("empty grid".into());
    }
    out.sort_unstable();
    out.dedup();
    Ok(Grid(out))
}

/// Comma-separated character labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Labels(pub Vec<String>);

fn parse_labels(s: &str) -> Result<Labels, String> {
    let out: Vec<String> = s.split(',').map(|t| t.trim().to_string()).filter(|t| !t.is_empty()).collect();
    if out.is_empty() {
        return Err("empty character list".into());
    }
    Ok(Labels(out))
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Bernoulli numbers B_n.
    Bernoulli {
        #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
        n: Grid,
    },
    /// Order-r Bernoulli numbers B_n^{(r)}, or the polynomial value at --x.
    MultiBernoulli {
        #[arg(long, value_parser = parse_grid)]
        n: Grid,
        #[arg(long, value_parser = parse_grid)]
        r: Grid,
        #[arg(long, allow_hyphen_values = true)]
        x: Option<String>,
    },
    /// Generalized multiple Bernoulli numbers by closed form and generating function.
    GenBernoulli {
        #[arg(long, value_parser = parse_grid)]
        n: Grid,
        #[arg(long, value_parser = parse_grid)]
        r: Grid,
        #[arg(long, value_parser = parse_labels)]
        chi: Labels,
    },
    /// L_r(-n, χ) by assembly over shifted sums, checked against the closed form.
    LSpecial {
        #[arg(long, value_parser = parse_grid)]
        n: Grid,
        #[arg(long, value_parser = parse_grid)]
        r: Grid,
        #[arg(long, value_parser = parse_labels)]
        chi: Labels,
        #[arg(long = "F")]
        big_f: Option<u64>,
    },
    /// L_r(s, χ) for real s > r by direct summation.
    LNumeric {
        #[arg(long)]
        s: f64,
        #[arg(long)]
        r: u32,
        #[arg(long, default_value = "triv")]
        chi: String,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// p-adic L_{p,r}(s, χ) at an integer s.
    PadicL {
        #[arg(long, allow_hyphen_values = true)]
        s: i64,
        #[arg(long, default_value_t = 1)]
        r: u32,
        #[arg(long, default_value = "triv")]
        chi: String,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 12)]
        prec: u32,
        #[arg(long = "F")]
        big_f: Option<u64>,
        /// Treat s as a p-adic value (exp/log route) instead of an exact integer.
        #[arg(long)]
        tracked: bool,
    },
    /// Acceptance suites over parameter grids.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, value_parser = parse_grid)]
        p: Option<Grid>,
        #[arg(long, default_value_t = 12)]
        prec: u32,
        #[arg(long, value_parser = parse_grid)]
        r: Option<Grid>,
        #[arg(long, value_parser = parse_grid)]
        n: Option<Grid>,
        /// Character moduli for the classical suites.
        #[arg(long, value_parser = parse_grid)]
        f: Option<Grid>,
        #[arg(long, value_parser = parse_labels)]
        chi: Option<Labels>,
        #[arg(long = "F")]
        big_f: Option<u64>,
    },
}

/// Exit status and captured output of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOutcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub mod exit {
    pub const OK: i32 = 0;
    pub const CHECK_FAILED: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const UNKNOWN_CHARACTER: i32 = 3;
    pub const INVALID_PRIME: i32 = 4;
    pub const UNSUPPORTED_CHARACTER: i32 = 5;
    pub const OTHER: i32 = 6;
}

pub fn error_code(e: &MathError) -> i32 {
    match e {
        MathError::UnknownCharacter(_) => exit::UNKNOWN_CHARACTER,
        MathError::InvalidPrime(_) => exit::INVALID_PRIME,
        MathError::UnsupportedCharacter { .. } => exit::UNSUPPORTED_CHARACTER,
        MathError::InvariantViolation(_) => exit::CHECK_FAILED,
        _ => exit::OTHER,
    }
}

type Eval = Result<(Vec<Record>, bool), MathError>;

/// Runs the command line given the full argument vector (program name first).
pub fn run<I, T>(args: I) -> RunOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::OK };
            let text = e.to_string();
            return if e.use_stderr() {
                let line = text.lines().next().unwrap_or("usage error").to_string();
                RunOutcome { code, stdout: String::new(), stderr: line + "\n" }
            } else {
                RunOutcome { code, stdout: text, stderr: String::new() }
            };
        }
    };
    let fail = |e: MathError| RunOutcome {
        code: error_code(&e),
        stdout: String::new(),
        stderr: format!("error: {e}\n"),
    };
    let cache_path = cli
        .cache_dir
        .clone()
        .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
        .map(|d| d.join(CACHE_FILE));
    if let Some(path) = &cache_path {
        if let Err(e) = BernoulliCache::global().load(path) {
            return fail(e);
        }
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cli.jobs {
        builder = builder.num_threads(j.max(1));
    }
    let pool = match builder.build() {
        Ok(pool) => pool,
        Err(e) => return fail(MathError::Io(e.to_string())),
    };
    let result = pool.install(|| execute(&cli.command));
    if let Some(path) = &cache_path {
        if let Some(dir) = path.parent() {
            if let Err(e) = std::fs::create_dir_all(dir) {
                return fail(MathError::Io(e.to_string()));
            }
        }
        if let Err(e) = BernoulliCache::global().save(path) {
            return fail(e);
        }
    }
    match result {
        Ok((records, pass)) => RunOutcome {
            code: if pass { exit::OK } else { exit::CHECK_FAILED },
            stdout: render(&records, cli.format),
            stderr: String::new(),
        },
        Err(e) => fail(e),
    }
}

fn u32_of(x: i64, name: &str) -> Result<u32, MathError> {
    u32::try_from(x).map_err(|_| MathError::Domain(format!("{name} must be a nonnegative integer, got {x}")))
}

fn character(label: &str) -> Result<DirichletCharacter, MathError> {
    parse_label(label)
}

fn prime(p: i64) -> Result<u64, MathError> {
    let p = u64::try_from(p).map_err(|_| MathError::InvalidPrime(0))?;
    if !mvlp_core::arith::rational::is_prime(p) {
        return Err(MathError::InvalidPrime(p));
    }
    Ok(p)
}

pub fn rational_json(x: &Rational) -> Value {
    Value::String(format_rational(x))
}

/// Rational values as `"num/den"`; other field elements as `{"order", "coeffs"}`.
pub fn cyclo_json(x: &CycloNumber) -> Value {
    match x.as_rational() {
        Some(q) => rational_json(&q),
        None => json!({
            "order": x.order(),
            "coeffs": x.coeffs().iter().map(format_rational).collect::<Vec<_>>(),
        }),
    }
}

pub fn parse_cyclo_json(v: &Value) -> Result<CycloNumber, MathError> {
    let bad = || MathError::Parse(format!("not a cyclotomic value: {v}"));
    match v {
        Value::String(s) => Ok(CycloNumber::from_rational(1, parse_rational(s)?)),
        Value::Object(o) => {
            let order = o.get("order").and_then(Value::as_u64).ok_or_else(bad)?;
            let coeffs = o
                .get("coeffs")
                .and_then(Value::as_array)
                .ok_or_else(bad)?
                .iter()
                .map(|c| c.as_str().ok_or_else(bad).and_then(parse_rational))
                .collect::<Result<Vec<_>, _>>()?;
            CycloNumber::from_coeffs(order, coeffs)
        }
        _ => Err(bad()),
    }
}

/// `{"valuation", "unit", "precision"}` with absolute precision; exact zero has nulls.
pub fn padic_json(x: &PAdicNumber) -> Value {
    json!({
        "valuation": x.valuation_lower_bound(),
        "unit": x.unit().to_string(),
        "precision": x.abs_precision(),
    })
}

pub fn parse_padic_json(v: &Value, p: u64) -> Result<PAdicNumber, MathError> {
    let bad = || MathError::Parse(format!("not a p-adic value: {v}"));
    let unit: num_bigint::BigInt = v.get("unit").and_then(Value::as_str).ok_or_else(bad)?.parse().map_err(|_| bad())?;
    let precision = v.get("precision").ok_or_else(bad)?;
    let Some(abs) = precision.as_i64() else {
        return if precision.is_null() { Ok(PAdicNumber::zero(p)) } else { Err(bad()) };
    };
    let val = v.get("valuation").and_then(Value::as_i64).ok_or_else(bad)?;
    if unit == num_bigint::BigInt::from(0) {
        return Ok(PAdicNumber::big_oh(p, abs));
    }
    let out = PAdicNumber::from_residue(p, unit.clone(), val, abs);
    if out.unit() != unit || out.valuation_lower_bound() != Some(val) {
        return Err(bad());
    }
    Ok(out)
}

fn record(pairs: Vec<(&str, Value)>) -> Record {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn comparison_fields(rec: &mut Record, c: &Comparison) {
    rec.insert("diff_valuation".into(), json!(c.diff_valuation));
    rec.insert("guaranteed_precision".into(), json!(c.guaranteed));
    rec.insert("pass".into(), json!(c.pass));
}

fn all_pass(records: &[Record]) -> bool {
    records
        .iter()
        .all(|r| r.get("pass").and_then(Value::as_bool).unwrap_or(true))
}

/// Evaluates grid points in parallel, keeping the input order.
fn fan_out<P: Sync>(points: &[P], f: impl Fn(&P) -> Result<Record, MathError> + Sync + Send) -> Eval {
    let records = points.par_iter().map(f).collect::<Result<Vec<_>, _>>()?;
    let pass = all_pass(&records);
    Ok((records, pass))
}

fn execute(cmd: &Command) -> Eval {
    match cmd {
        Command::Bernoulli { n } => {
            let ns = n.0.iter().map(|&n| u32_of(n, "n")).collect::<Result<Vec<_>, _>>()?;
            fan_out(&ns, |&n| Ok(record(vec![("n", json!(n)), ("value", rational_json(&bernoulli(n)))])))
        }
        Command::MultiBernoulli { n, r, x } => {
            let x = x.as_deref().map(parse_rational).transpose()?;
            let points = pairs(n, r)?;
            fan_out(&points, |&(n, r)| {
                let mut rec = record(vec![("n", json!(n)), ("r", json!(r))]);
                let value = match &x {
                    Some(x) => {
                        rec.insert("x".into(), rational_json(x));
                        multi_bernoulli_poly(n, r, x)?
                    }
                    None => multi_bernoulli(n, r)?,
                };
                rec.insert("value".into(), rational_json(&value));
                Ok(rec)
            })
        }
        Command::GenBernoulli { n, r, chi } => {
            let points = labeled_points(&chi.0, &pairs(n, r)?)?;
            fan_out(&points, |(label, c, (n, r))| {
                let closed = gen_multi_bernoulli(*n, *r, c)?;
                let oracle = gen_multi_bernoulli_oracle(*n, *r, c)?;
                Ok(record(vec![
                    ("chi", json!(label)),
                    ("n", json!(n)),
                    ("r", json!(r)),
                    ("value", cyclo_json(&closed)),
                    ("routes", json!(["closed-form", "generating-function"])),
                    ("pass", json!(closed == oracle)),
                ]))
            })
        }
        Command::LSpecial { n, r, chi, big_f } => {
            let points = labeled_points(&chi.0, &pairs(n, r)?)?;
            fan_out(&points, |(label, c, (n, r))| {
                let big_f = big_f.unwrap_or(c.modulus());
                let value = L_special(*n, *r, c, big_f)?;
                Ok(record(vec![
                    ("chi", json!(label)),
                    ("n", json!(n)),
                    ("r", json!(r)),
                    ("F", json!(big_f)),
                    ("value", cyclo_json(&value)),
                    ("routes", json!(["closed-form", "shifted-sum-assembly"])),
                    ("pass", json!(true)),
                ]))
            })
        }
        Command::LNumeric { s, r, chi, tol } => {
            let c = character(chi)?;
            let (re, im) = L_numeric(*s, *r, &c, *tol)?;
            let rec = record(vec![
                ("chi", json!(chi)),
                ("s", json!(s)),
                ("r", json!(r)),
                ("tol", json!(tol)),
                ("terms", json!(l_numeric_cutoff(*s, *r, *tol)?)),
                ("re", json!(re)),
                ("im", json!(im)),
                ("route", json!("direct-summation")),
            ]);
            Ok((vec![rec], true))
        }
        Command::PadicL { s, r, chi, p, prec, big_f, tracked } => {
            let p = prime(*p as i64)?;
            let c = character(chi)?;
            let arg = if *tracked {
                PAdicArg::Value(PAdicNumber::from_integer(*s, p, *prec))
            } else {
                PAdicArg::Integer(*s)
            };
            let big_f = big_f.unwrap_or_else(|| default_modulus(&c, p));
            let value = if *r == 1 {
                washington_Lp(&arg, &c, p, *prec, Some(big_f))?
            } else {
                multivariate_Lp(&arg, &c, *r, p, *prec, Some(big_f))?
            };
            let rec = record(vec![
                ("chi", json!(chi)),
                ("p", json!(p)),
                ("N", json!(prec)),
                ("r", json!(r)),
                ("s", json!(s)),
                ("F", json!(big_f)),
                ("value", padic_json(&value)),
                ("text", json!(value.to_string())),
            ]);
            Ok((vec![rec], true))
        }
        Command::Verify { suite, p, prec, r, n, f, chi, big_f } => {
            verify(*suite, p.as_ref(), *prec, r.as_ref(), n.as_ref(), f.as_ref(), chi.as_ref().map(|c| c.0.as_slice()), *big_f)
        }
    }
}

fn pairs(n: &Grid, r: &Grid) -> Result<Vec<(u32, u32)>, MathError> {
    let mut out = Vec::new();
    for &nn in &n.0 {
        for &rr in &r.0 {
            out.push((u32_of(nn, "n")?, u32_of(rr, "r")?));
        }
    }
    Ok(out)
}

fn labeled_points<T: Clone>(labels: &[String], rest: &[T]) -> Result<Vec<(String, DirichletCharacter, T)>, MathError> {
    let mut out = Vec::new();
    for label in labels {
        let c = character(label)?;
        for t in rest {
            out.push((label.clone(), c.clone(), t.clone()));
        }
    }
    Ok(out)
}

fn grid_or(g: Option<&Grid>, default: &[i64]) -> Vec<i64> {
    g.map(|g| g.0.clone()).unwrap_or_else(|| default.to_vec())
}

/// Explicit labels, or every character mod each modulus.
fn characters_for(moduli: &[i64], chi: Option<&[String]>) -> Result<Vec<(String, DirichletCharacter)>, MathError> {
    match chi {
        Some(labels) => labels.iter().map(|l| Ok((l.clone(), character(l)?))).collect(),
        None => {
            let mut out = Vec::new();
            for &f in moduli {
                let f = u64::try_from(f).ok().filter(|&f| f >= 1).ok_or_else(|| MathError::Domain(format!("bad modulus {f}")))?;
                out.extend(labeled(f));
            }
            Ok(out)
        }
    }
}

/// The trivial character and the first quadratic character mod `q`.
fn theorem4_default_characters(p: u64) -> Vec<(String, DirichletCharacter)> {
    let mut out = vec![("triv".to_string(), DirichletCharacter::trivial())];
    if let Some(quad) = labeled(teichmuller_modulus(p)).into_iter().find(|(_, c)| c.order() == 2) {
        out.push(quad);
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn verify(
    suite: Suite,
    p: Option<&Grid>,
    prec: u32,
    r: Option<&Grid>,
    n: Option<&Grid>,
    f: Option<&Grid>,
    chi: Option<&[String]>,
    big_f: Option<u64>,
) -> Eval {
    let suite_name = suite.to_possible_value().expect("named").get_name().to_string();
    match suite {
        Suite::GeneratingFunction | Suite::Theorem2 => {
            let moduli = grid_or(f, &[1, 3, 4, 5, 7, 8]);
            let chars = characters_for(&moduli, chi)?;
            let rs = grid_or(r, &[1, 2, 3]);
            let ns = grid_or(n, if suite == Suite::Theorem2 { &[1, 2, 3, 4] } else { &[0, 1, 2, 3, 4, 5, 6, 7, 8] });
            let mut points = Vec::new();
            for (label, c) in &chars {
                for &rr in &rs {
                    for &nn in &ns {
                        let (rr, nn) = (u32_of(rr, "r")?, u32_of(nn, "n")?);
                        if suite == Suite::Theorem2 {
                            let moduli = match big_f {
                                Some(b) => vec![b],
                                None => vec![c.modulus(), 2 * c.modulus()],
                            };
                            for m in moduli {
                                points.push((label.clone(), c.clone(), rr, nn, m));
                            }
                        } else {
                            points.push((label.clone(), c.clone(), rr, nn, c.modulus()));
                        }
                    }
                }
            }
            fan_out(&points, |(label, c, rr, nn, m)| {
                let mut rec = record(vec![
                    ("suite", json!(suite_name)),
                    ("chi", json!(label)),
                    ("r", json!(rr)),
                    ("n", json!(nn)),
                ]);
                if suite == Suite::Theorem2 {
                    rec.insert("F".into(), json!(m));
                    match L_special(*nn, *rr, c, *m) {
                        Ok(v) => {
                            rec.insert("value".into(), cyclo_json(&v));
                            rec.insert("pass".into(), json!(true));
                        }
                        Err(MathError::InvariantViolation(msg)) => {
                            rec.insert("error".into(), json!(msg));
                            rec.insert("pass".into(), json!(false));
                        }
                        Err(e) => return Err(e),
                    }
                } else {
                    let closed = gen_multi_bernoulli(*nn, *rr, c)?;
                    let oracle = gen_multi_bernoulli_oracle(*nn, *rr, c)?;
                    rec.insert("closed".into(), cyclo_json(&closed));
                    rec.insert("oracle".into(), cyclo_json(&oracle));
                    rec.insert("pass".into(), json!(closed == oracle));
                }
                Ok(rec)
            })
        }
        Suite::Lemma3 => {
            let primes = grid_or(p, &[5, 7]).into_iter().map(prime).collect::<Result<Vec<_>, _>>()?;
            let ns = grid_or(n, &[1, 2, 3, 4, 5, 6]);
            let mut points = Vec::new();
            for &pp in &primes {
                for (label, c) in characters_for(&[pp as i64], chi)? {
                    for &nn in &ns {
                        points.push((pp, label.clone(), c.clone(), u32_of(nn, "n")?));
                    }
                }
            }
            fan_out(&points, |(pp, label, c, nn)| {
                if *nn == 0 {
                    return Err(MathError::Domain("n must be positive".into()));
                }
                let modulus = big_f.unwrap_or_else(|| default_modulus(c, *pp));
                let lhs = washington_Lp(&PAdicArg::Integer(1 - *nn as i64), c, *pp, prec, Some(modulus))?;
                let rhs = embed_cyclo(&kubota_leopoldt_special(*nn, c, *pp)?, *pp, prec)?;
                let mut rec = record(vec![
                    ("suite", json!(suite_name)),
                    ("p", json!(pp)),
                    ("N", json!(prec)),
                    ("r", json!(1)),
                    ("n", json!(nn)),
                    ("chi", json!(label)),
                    ("F", json!(modulus)),
                    ("lhs", padic_json(&lhs)),
                    ("rhs", padic_json(&rhs)),
                ]);
                comparison_fields(&mut rec, &Comparison::of(&lhs, &rhs));
                Ok(rec)
            })
        }
        Suite::Theorem4 | Suite::FStability => {
            let primes = grid_or(p, &[5, 7]).into_iter().map(prime).collect::<Result<Vec<_>, _>>()?;
            let rs = grid_or(r, &[2, 3]);
            let ns = grid_or(n, &[1, 2, 3, 4]);
            let mut points = Vec::new();
            for &pp in &primes {
                let chars = match chi {
                    Some(labels) => characters_for(&[], Some(labels))?,
                    None => theorem4_default_characters(pp),
                };
                for (label, c) in chars {
                    for &rr in &rs {
                        for &nn in &ns {
                            points.push((pp, label.clone(), c.clone(), u32_of(rr, "r")?, u32_of(nn, "n")?));
                        }
                    }
                }
            }
            fan_out(&points, |(pp, label, c, rr, nn)| {
                let modulus = big_f.unwrap_or_else(|| default_modulus(c, *pp));
                let mut rec = record(vec![
                    ("suite", json!(suite_name)),
                    ("p", json!(pp)),
                    ("N", json!(prec)),
                    ("r", json!(rr)),
                    ("n", json!(nn)),
                    ("chi", json!(label)),
                    ("F", json!(modulus)),
                ]);
                if suite == Suite::Theorem4 {
                    let rep = verify_theorem4(*nn, *rr, c, *pp, prec, Some(modulus))?;
                    rec.insert("lhs".into(), padic_json(&rep.lhs));
                    rec.insert("rhs".into(), padic_json(&rep.rhs));
                    comparison_fields(&mut rec, &rep.comparison);
                } else {
                    let at = |m: u64| multivariate_Lp(&PAdicArg::Integer(-(*nn as i64)), c, *rr, *pp, prec, Some(m));
                    let lhs = at(modulus)?;
                    let lhs2 = at(2 * modulus)?;
                    rec.insert("F2".into(), json!(2 * modulus));
                    rec.insert("lhs".into(), padic_json(&lhs));
                    rec.insert("lhs2".into(), padic_json(&lhs2));
                    comparison_fields(&mut rec, &Comparison::of(&lhs, &lhs2));
                }
                Ok(rec)
            })
        }
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Serializes records as JSON lines, CSV with a sorted header, or `key=value` text.
pub fn render(records: &[Record], format: Format) -> String {
    match format {
        Format::Json => records
            .iter()
            .map(|r| Value::Object(r.clone()).to_string() + "\n")
            .collect(),
        Format::Text => records
            .iter()
            .map(|r| {
                r.iter()
                    .map(|(k, v)| format!("{k}={}", cell(v)))
                    .collect::<Vec<_>>()
                    .join(" ")
                    + "\n"
            })
            .collect(),
        Format::Csv => {
            let mut keys: Vec<&String> = records.iter().flat_map(|r| r.keys()).collect();
            keys.sort();
            keys.dedup();
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(keys.iter().map(|k| k.as_str())).expect("in-memory write");
            for r in records {
                w.write_record(keys.iter().map(|k| r.get(*k).map(cell).unwrap_or_default()))
                    .expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use mvlp_core::arith::rational::rat;

    #[test]
    fn grids() {
        assert_eq!(parse_grid("1..4").unwrap(), Grid(vec![1, 2, 3, 4]));
        assert_eq!(parse_grid("7,5,5").unwrap(), Grid(vec![5, 7]));
        assert_eq!(parse_grid("-2..0,3").unwrap(), Grid(vec![-2, -1, 0, 3]));
        assert!(parse_grid("4..1").is_err());
        assert!(parse_grid("x").is_err());
        assert!(parse_grid("").is_err());
    }

    #[test]
    fn value_round_trips() {
        let z = CycloNumber::root_of_unity(4, 1).scale(&rat(-3, 7));
        assert_eq!(parse_cyclo_json(&cyclo_json(&z)).unwrap(), z);
        let q = CycloNumber::from_rational(1, rat(5, 6));
        assert_eq!(cyclo_json(&q), json!("5/6"));
        assert_eq!(parse_cyclo_json(&cyclo_json(&q)).unwrap(), q);
        for x in [
            PAdicNumber::from_rational(&rat(-7, 25), 5, 8),
            PAdicNumber::big_oh(7, 3),
            PAdicNumber::zero(3),
        ] {
            assert_eq!(parse_padic_json(&padic_json(&x), x.prime()).unwrap(), x);
        }
    }

    #[test]
    fn error_codes() {
        assert_eq!(error_code(&MathError::UnknownCharacter("x".into())), 3);
        assert_eq!(error_code(&MathError::InvalidPrime(4)), 4);
        assert_eq!(error_code(&MathError::UnsupportedCharacter { order: 4, p: 7 }), 5);
        assert_eq!(error_code(&MathError::Pole(1)), 6);
    }

    #[test]
    fn csv_layout() {
        let recs = vec![
            record(vec![("n", json!(1)), ("value", json!("-1/2"))]),
            record(vec![("n", json!(2)), ("value", json!("1/6")), ("x", json!("a,b"))]),
        ];
        assert_eq!(render(&recs, Format::Csv), "n,value,x\n1,-1/2,\n2,1/6,\"a,b\"\n");
        assert_eq!(render(&recs[..1], Format::Text), "n=1 value=-1/2\n");
    }
}
