//! The `ganz` command line. [`run`] returns the exit code and the report so
//! the binary, the self-test and the tests share one code path.
//!
//! Exit codes: 0 valid / pass / no violation, 1 invalid / refuted /
//! violation / unknown, 2 usage error, 3 degenerate input.

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::baer_krull::{sufficiency_pipeline, PipelineOutcome};
use crate::certificates::{
    cone_value, generator_value, handelman_search, verify_cone_pointwise, verify_radical_cert, Certificate, ConeCert,
    HandelmanOutcome, RadicalVerdict, SetDescription,
};
use crate::error::Error;
use crate::ovf::{KElem, Rat};
use crate::probe::{boundedness_probe, integrality_probe, ProbeReport, SampleStrategy, Verdict, DEFAULT_EPS_ORDERS};
use crate::ratfunc::{parse_kelem, parse_list, parse_point, parse_ratfunc, Point, RatFunc};
use crate::selftest;
use crate::valuations::{near_val_with_retry, ValuationHandle};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DEGENERATE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "ganz", version, about = "Exact integrality certificates over Q(eps)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Args, Debug)]
struct Sampling {
    /// Seed of the pseudorandom sampler
    #[arg(long)]
    seed: Option<u64>,
    /// Number of pseudorandom candidate points
    #[arg(long)]
    count: Option<usize>,
    /// Sample a grid with this step instead
    #[arg(long)]
    grid_step: Option<String>,
    /// Grid radius (default 2)
    #[arg(long)]
    radius: Option<String>,
    /// Powers of eps mixed into coordinates, e.g. "1,-1,2"
    #[arg(long, allow_hyphen_values = true)]
    eps_orders: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse an expression and print its canonical form
    Parse { expr: String },
    /// Valuation of h(b) in K, of a constant, or of h under a weighted Gauss valuation
    Val {
        #[arg(long, allow_hyphen_values = true)]
        h: String,
        #[arg(long, allow_hyphen_values = true)]
        b: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        w: Option<String>,
    },
    /// Sign of h(b) (or of a constant) in the order of K
    Sign {
        #[arg(long, allow_hyphen_values = true)]
        h: String,
        #[arg(long, allow_hyphen_values = true)]
        b: Option<String>,
    },
    /// Near-point valuation of h at b along d (retrying directions when d is omitted)
    NearVal {
        #[arg(long, allow_hyphen_values = true)]
        h: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long, allow_hyphen_values = true)]
        d: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Expand a cone certificate file; with --b also check it pointwise
    ConeVerify {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        b: Option<String>,
    },
    /// Search for a Handelman certificate of the polynomial h
    ConeSearch {
        #[arg(long)]
        set: String,
        #[arg(long, allow_hyphen_values = true)]
        h: String,
        #[arg(long, default_value_t = 2)]
        degree_bound: u32,
    },
    /// Verify a radical certificate file
    RadicalVerify { file: PathBuf },
    /// Build an order making every p_i positive (weighted Gauss with --w, near-point with --b)
    OrderPipeline {
        #[arg(long)]
        set: String,
        #[arg(long, allow_hyphen_values = true)]
        w: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        b: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        d: Option<String>,
        /// Cone certificate files whose generators 1/(1+f) are checked to be integral
        #[arg(long)]
        generator: Vec<PathBuf>,
    },
    /// Search S for a point where h is not integral
    ProbeIntegrality {
        #[arg(long, allow_hyphen_values = true)]
        h: String,
        #[arg(long)]
        set: String,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Search S for a point where nu(h(b)) < nu(a)
    ProbeBounded {
        #[arg(long, allow_hyphen_values = true)]
        h: String,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long)]
        set: String,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Run the acceptance suite
    Selftest {
        /// Run a single criterion
        #[arg(long)]
        criterion: Option<u8>,
    },
}

/// Key-value report lines in a fixed order.
struct Report {
    format: Format,
    lines: Vec<(String, String)>,
    raw: Option<String>,
}

impl Report {
    fn new(format: Format, command: &str) -> Self {
        Report {
            format,
            lines: vec![("command".into(), command.into())],
            raw: None,
        }
    }

    fn line(&mut self, key: &str, value: impl ToString) {
        self.lines.push((key.into(), value.to_string()));
    }

    fn render(&self) -> String {
        if let Some(raw) = &self.raw {
            return raw.clone();
        }
        match self.format {
            Format::Text => self.lines.iter().map(|(k, v)| format!("{k}: {v}\n")).collect(),
            Format::Structured => {
                let arr: Vec<serde_json::Value> = self
                    .lines
                    .iter()
                    .map(|(k, v)| serde_json::json!({ "key": k, "value": v }))
                    .collect();
                let mut s = serde_json::to_string_pretty(&serde_json::json!({ "report": arr })).expect("json");
                s.push('\n');
                s
            }
        }
    }
}

enum Failure {
    Usage(String),
    Compute(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Compute(e)
    }
}

type CliResult = std::result::Result<i32, Failure>;

fn usage<T>(what: &str, e: impl std::fmt::Display) -> std::result::Result<T, Failure> {
    Err(Failure::Usage(format!("{what}: {e}")))
}

fn expr(text: &str, what: &str) -> std::result::Result<RatFunc, Failure> {
    parse_ratfunc(text).or_else(|e| usage(&format!("--{what} `{text}`"), e))
}

fn constant(text: &str, what: &str) -> std::result::Result<KElem, Failure> {
    parse_kelem(text).or_else(|e| usage(&format!("--{what} `{text}`"), e))
}

fn rational(text: &str, what: &str) -> std::result::Result<Rat, Failure> {
    match constant(text, what)?.as_rational() {
        Some(q) => Ok(q),
        None => usage(&format!("--{what} `{text}`"), "expected a rational number"),
    }
}

fn point(text: &str, what: &str) -> std::result::Result<Point, Failure> {
    parse_point(text).or_else(|e| usage(&format!("--{what} `{text}`"), e))
}

fn ints(text: &str, what: &str) -> std::result::Result<Vec<i64>, Failure> {
    parse_list(text, ',')
        .into_iter()
        .map(|s| s.parse::<i64>().or_else(|e| usage(&format!("--{what} `{text}`"), e)))
        .collect()
}

fn set(text: &str) -> std::result::Result<SetDescription, Failure> {
    SetDescription::parse(text, 0).or_else(|e| usage(&format!("--set `{text}`"), e))
}

fn read_cert(path: &PathBuf) -> std::result::Result<Certificate, Failure> {
    let text = fs::read_to_string(path).or_else(|e| usage(&path.display().to_string(), e))?;
    Certificate::from_json(&text).or_else(|e| usage(&path.display().to_string(), e))
}

fn check_point_len(b: &Point, nvars: usize) -> std::result::Result<(), Failure> {
    if b.len() < nvars {
        return usage(
            "--b",
            format!("{} coordinates given but {nvars} variables are used", b.len()),
        );
    }
    Ok(())
}

fn sign_str(s: i8) -> &'static str {
    match s {
        1 => "+1",
        -1 => "-1",
        _ => "0",
    }
}

fn strategy(s: &Sampling) -> std::result::Result<SampleStrategy, Failure> {
    let orders = match &s.eps_orders {
        Some(t) => ints(t, "eps-orders")?,
        None => DEFAULT_EPS_ORDERS.to_vec(),
    };
    match &s.grid_step {
        Some(step) => {
            if s.seed.is_some() || s.count.is_some() {
                return usage("--grid-step", "cannot be combined with --seed or --count");
            }
            let step = rational(step, "grid-step")?;
            let radius = match &s.radius {
                Some(r) => rational(r, "radius")?,
                None => Rat::from_integer(2.into()),
            };
            SampleStrategy::grid(step, radius, orders).or_else(|e| usage("--grid-step", e))
        }
        None => {
            if s.radius.is_some() {
                return usage("--radius", "requires --grid-step");
            }
            Ok(SampleStrategy::pseudorandom(
                s.seed.unwrap_or(0),
                s.count.unwrap_or(500),
                orders,
            ))
        }
    }
}

fn probe_lines(rep: &mut Report, p: &ProbeReport) -> i32 {
    rep.line("candidates", p.candidates);
    if p.truncated {
        rep.line("truncated", "yes");
    }
    rep.line("tested", p.tested);
    rep.line("skipped-undefined", p.skipped_undefined);
    if p.nonemptiness_unknown {
        rep.line("result", "NonemptinessUnknown");
        rep.line("note", "no sampled point lies in the set");
        return EXIT_DEGENERATE;
    }
    match &p.verdict {
        Verdict::Violation { witness, value, val } => {
            rep.line("result", "Violation");
            rep.line("witness", witness.to_arg());
            rep.line("value", value);
            rep.line("nu", val);
            EXIT_FAIL
        }
        Verdict::NoViolationFound => {
            rep.line("result", "NoViolationFound");
            rep.line("note", "sampling found no counterexample; this is not a proof");
            EXIT_OK
        }
    }
}

fn execute(cli: Cli, rep: &mut Report) -> CliResult {
    match cli.command {
        Command::Parse { expr: text } => {
            let e = match parse_ratfunc(&text) {
                Ok(e) => e,
                Err(e) => return usage(&format!("`{text}`"), e),
            };
            rep.line("input", &text);
            rep.line("canonical", &e);
            rep.line("nvars", e.nvars());
            Ok(EXIT_OK)
        }
        Command::Val { h, b, w } => {
            let hf = expr(&h, "h")?;
            rep.line("h", &hf);
            match (b, w) {
                (Some(_), Some(_)) => usage("--b", "cannot be combined with --w"),
                (None, Some(w)) => {
                    let w = ints(&w, "w")?;
                    if hf.nvars() > w.len() {
                        return usage(
                            "--w",
                            format!("h uses {} variables but {} weights are given", hf.nvars(), w.len()),
                        );
                    }
                    let v = ValuationHandle::weighted_gauss(w);
                    rep.line("valuation", &v);
                    rep.line("value", v.val_of(&hf)?);
                    Ok(EXIT_OK)
                }
                (Some(b), None) => {
                    let b = point(&b, "b")?;
                    check_point_len(&b, hf.nvars())?;
                    rep.line("b", b.to_arg());
                    let at = hf.eval(b.coords())?;
                    rep.line("h(b)", &at);
                    rep.line("nu", at.val());
                    Ok(EXIT_OK)
                }
                (None, None) => {
                    let Some(c) = hf.as_constant() else {
                        return usage("--h", "not a constant; give --b or --w");
                    };
                    rep.line("nu", c.val());
                    Ok(EXIT_OK)
                }
            }
        }
        Command::Sign { h, b } => {
            let hf = expr(&h, "h")?;
            rep.line("h", &hf);
            let value = match b {
                Some(b) => {
                    let b = point(&b, "b")?;
                    check_point_len(&b, hf.nvars())?;
                    rep.line("b", b.to_arg());
                    let at = hf.eval(b.coords())?;
                    rep.line("h(b)", &at);
                    at
                }
                None => match hf.as_constant() {
                    Some(c) => c,
                    None => return usage("--h", "not a constant; give --b"),
                },
            };
            rep.line("sign", sign_str(value.sign()));
            Ok(EXIT_OK)
        }
        Command::NearVal { h, b, d, seed } => {
            let hf = expr(&h, "h")?;
            let b = point(&b, "b")?;
            check_point_len(&b, hf.nvars())?;
            let d = d.map(|d| point(&d, "d")).transpose()?;
            rep.line("h", &hf);
            rep.line("b", b.to_arg());
            let (d, value) = match d {
                Some(d) => {
                    if d.len() != b.len() {
                        return usage("--d", format!("{} coordinates, expected {}", d.len(), b.len()));
                    }
                    let v = ValuationHandle::near_point(b.clone(), d.clone())?;
                    let value = v.val_of(&hf)?;
                    (d, value)
                }
                None => {
                    rep.line("seed", seed);
                    near_val_with_retry(&b, &hf, seed, 64)?
                }
            };
            rep.line("d", d.to_arg());
            rep.line("value", value);
            Ok(EXIT_OK)
        }
        Command::ConeVerify { file, b } => {
            let Certificate::Cone { set, cert } = read_cert(&file)? else {
                return usage(&file.display().to_string(), "not a cone certificate");
            };
            let b = b.map(|b| point(&b, "b")).transpose()?;
            rep.line("file", file.display());
            rep.line("set", &set);
            rep.line("cone-value", cone_value(&cert, &set)?);
            rep.line("generator", generator_value(&cert, &set)?);
            match b {
                None => {
                    rep.line("result", "Expanded");
                    Ok(EXIT_OK)
                }
                Some(b) => {
                    check_point_len(&b, set.nvars)?;
                    rep.line("b", b.to_arg());
                    if verify_cone_pointwise(&cert, &set, &b)? {
                        rep.line("result", "Nonnegative");
                        Ok(EXIT_OK)
                    } else {
                        rep.line("result", "Negative");
                        Ok(EXIT_FAIL)
                    }
                }
            }
        }
        Command::ConeSearch {
            set: s,
            h,
            degree_bound,
        } => {
            let s = set(&s)?;
            let target = match expr(&h, "h")?.to_poly() {
                Ok(p) => p,
                Err(e) => return usage("--h", e),
            };
            let s = SetDescription::new(target.nvars(), s.p, s.g);
            rep.line("set", &s);
            rep.line("target", &target);
            rep.line("degree-bound", degree_bound);
            match handelman_search(&s, &target, degree_bound)? {
                HandelmanOutcome::Found(cert) => {
                    rep.line("result", "Found");
                    for (subset, sos) in &cert.terms {
                        let idx: Vec<String> = subset.iter().map(|i| (i + 1).to_string()).collect();
                        let parts: Vec<String> = sos.parts.iter().map(ToString::to_string).collect();
                        rep.line("block", format!("J={{{}}} sos=[{}]", idx.join(","), parts.join(", ")));
                    }
                    rep.line("cone-value", cone_value(&cert, &s)?);
                    if rep.format == Format::Structured {
                        rep.raw = Some(Certificate::Cone { set: s, cert }.to_json());
                    }
                    Ok(EXIT_OK)
                }
                HandelmanOutcome::Unknown => {
                    rep.line("result", "Unknown");
                    rep.line(
                        "note",
                        "no representation at this degree bound; this is not a proof of non-membership",
                    );
                    Ok(EXIT_FAIL)
                }
            }
        }
        Command::RadicalVerify { file } => {
            let Certificate::Radical { set, cert } = read_cert(&file)? else {
                return usage(&file.display().to_string(), "not a radical certificate");
            };
            rep.line("file", file.display());
            rep.line("set", &set);
            rep.line("h", &cert.h);
            rep.line("degree", cert.coeffs.len());
            match verify_radical_cert(&cert, &set) {
                Ok(RadicalVerdict::Valid) => {
                    rep.line("result", "Valid");
                    Ok(EXIT_OK)
                }
                Ok(RadicalVerdict::Invalid { residual }) => {
                    rep.line("result", "Invalid");
                    rep.line("residual", residual);
                    Ok(EXIT_FAIL)
                }
                Err(Error::Structural(msg)) => {
                    rep.line("result", "StructuralError");
                    rep.line("reason", msg);
                    Ok(EXIT_FAIL)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::OrderPipeline {
            set: s,
            w,
            b,
            d,
            generator,
        } => {
            let s = set(&s)?;
            let v = match (w, b) {
                (Some(w), None) => {
                    if d.is_some() {
                        return usage("--d", "only applies with --b");
                    }
                    let w = ints(&w, "w")?;
                    if s.nvars > w.len() {
                        return usage(
                            "--w",
                            format!("the set uses {} variables but {} weights are given", s.nvars, w.len()),
                        );
                    }
                    ValuationHandle::weighted_gauss(w)
                }
                (None, Some(b)) => {
                    let b = point(&b, "b")?;
                    check_point_len(&b, s.nvars)?;
                    let d = match d {
                        Some(d) => point(&d, "d")?,
                        None => Point::new(vec![KElem::one(); b.len()]),
                    };
                    if d.len() != b.len() {
                        return usage("--d", format!("{} coordinates, expected {}", d.len(), b.len()));
                    }
                    ValuationHandle::near_point(b, d)?
                }
                _ => return usage("order-pipeline", "give exactly one of --w and --b"),
            };
            let mut gens: Vec<ConeCert> = Vec::new();
            for path in &generator {
                match read_cert(path)? {
                    Certificate::Cone { cert, .. } => gens.push(cert),
                    Certificate::Radical { .. } => return usage(&path.display().to_string(), "not a cone certificate"),
                }
            }
            rep.line("valuation", &v);
            rep.line("set", &s);
            match sufficiency_pipeline(&v, &s, &gens)? {
                PipelineOutcome::Order(r) => {
                    for (i, g) in r.values.iter().enumerate() {
                        rep.line(&format!("nu(p{})", i + 1), g);
                    }
                    let chosen: Vec<String> = r.basis.chosen.iter().map(|i| format!("p{}", i + 1)).collect();
                    rep.line("forced", chosen.join(", "));
                    for (i, res) in &r.residues {
                        rep.line(&format!("residue(p{})", i + 1), res);
                    }
                    rep.line("residue-order", &r.order.residue_order);
                    for (g, u) in r.order.semisection.extension() {
                        rep.line("extension", format!("s({g}) = {u}"));
                    }
                    rep.line("checked-generators", r.checked_generators);
                    for (i, p) in s.p.iter().enumerate() {
                        let sg = r.order.sign(&RatFunc::from_poly(p.clone()))?;
                        rep.line(&format!("sign(p{})", i + 1), sign_str(sg));
                    }
                    rep.line("result", "Order");
                    Ok(EXIT_OK)
                }
                PipelineOutcome::NotFound { residues } => {
                    for (i, res) in &residues {
                        rep.line(&format!("residue(p{})", i + 1), res);
                    }
                    rep.line("result", "NotFound");
                    rep.line("note", "no catalog order makes every residue positive");
                    Ok(EXIT_DEGENERATE)
                }
            }
        }
        Command::ProbeIntegrality { h, set: s, sampling } => {
            let hf = expr(&h, "h")?;
            let s = set(&s)?;
            let strat = strategy(&sampling)?;
            rep.line("h", &hf);
            rep.line("set", &s);
            rep.line("strategy", &strat);
            let p = integrality_probe(&hf, &s, &strat)?;
            Ok(probe_lines(rep, &p))
        }
        Command::ProbeBounded { h, a, set: s, sampling } => {
            let hf = expr(&h, "h")?;
            let a = constant(&a, "a")?;
            if a.is_zero() {
                return usage("--a", "must be nonzero");
            }
            let s = set(&s)?;
            let strat = strategy(&sampling)?;
            rep.line("h", &hf);
            rep.line("a", &a);
            rep.line("nu(a)", a.val());
            rep.line("set", &s);
            rep.line("strategy", &strat);
            let p = boundedness_probe(&hf, &a, &s, &strat)?;
            Ok(probe_lines(rep, &p))
        }
        Command::Selftest { criterion } => {
            let results = match criterion {
                Some(id) if (1..=11).contains(&id) => vec![selftest::run_criterion(id)],
                Some(id) => return usage("--criterion", format!("{id} is not in 1..=11")),
                None => selftest::run_all(),
            };
            let passed = results.iter().filter(|r| r.passed).count();
            for r in &results {
                rep.line(
                    &format!("criterion {}", r.id),
                    format!("{} {}: {}", if r.passed { "PASS" } else { "FAIL" }, r.name, r.detail),
                );
            }
            rep.line("passed", format!("{passed}/{}", results.len()));
            Ok(if passed == results.len() { EXIT_OK } else { EXIT_FAIL })
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::DegenerateDirection
        | Error::LineInDenominatorLocus
        | Error::BudgetExceeded(_)
        | Error::NotDefinedAt
        | Error::Indeterminate => EXIT_DEGENERATE,
        _ => EXIT_FAIL,
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Parse { .. } => "parse",
        Command::Val { .. } => "val",
        Command::Sign { .. } => "sign",
        Command::NearVal { .. } => "near-val",
        Command::ConeVerify { .. } => "cone-verify",
        Command::ConeSearch { .. } => "cone-search",
        Command::RadicalVerify { .. } => "radical-verify",
        Command::OrderPipeline { .. } => "order-pipeline",
        Command::ProbeIntegrality { .. } => "probe-integrality",
        Command::ProbeBounded { .. } => "probe-bounded",
        Command::Selftest { .. } => "selftest",
    }
}

/// Parses `args` (including the program name) and runs one command.
pub fn run<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            return (code, e.render().to_string());
        }
    };
    let mut rep = Report::new(cli.format, command_name(&cli.command));
    match execute(cli, &mut rep) {
        Ok(code) => (code, rep.render()),
        Err(Failure::Usage(msg)) => {
            rep.line("result", "UsageError");
            rep.line("error", msg);
            (EXIT_USAGE, rep.render())
        }
        Err(Failure::Compute(e)) => {
            rep.line("result", "Error");
            rep.line("error", &e);
            (exit_code(&e), rep.render())
        }
    }
}
