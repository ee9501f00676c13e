//! Command-line front end: argument parsing, dispatch and report rendering.
//!
//! Exit codes: 0 ok, 1 usage or parse error, 2 math-domain error, 3 verification failure.

pub mod format;
pub mod verify;

use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::discfun::{
    act_fun, check_cutoff, eta, nu_integral, scalar_product, span_check, to_matrix, FinElement, FunElement,
};
use crate::error::{Error, Result};
use crate::hopf::star_uq;
use crate::laplace::{
    box0, casimir_correspondence, casimir_matches, classify_l, lambda_of_l, phi_l, phi_residual, spectrum, Zone,
};
use crate::scalar::{ExactScalar, NumericContext};

pub use format::{fmt_num, parse_expr, serialize, Element, Format, Kind};

#[derive(Debug, Parser)]
#[command(name = "qdisc", version, about = "Exact algebra and q-spectral analysis on the quantum disc")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Deformation parameter in (0, 1): a rational like 1/2 or a decimal.
    #[arg(long, global = true)]
    pub q: Option<String>,
    /// Truncation size N.
    #[arg(long, global = true)]
    pub cutoff: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse an element and print its canonical form.
    Normalize {
        #[arg(long, value_enum, default_value_t = Kind::Fun)]
        kind: Kind,
        expr: String,
    },
    /// Apply a U_q sl2 element to an element of Fun(U)_q.
    Act {
        #[arg(long, allow_hyphen_values = true)]
        op: String,
        #[arg(long, allow_hyphen_values = true)]
        on: String,
    },
    /// The involution on Fun(U)_q or U_q sl2.
    Star {
        #[arg(long, value_enum, default_value_t = Kind::Fun)]
        kind: Kind,
        expr: String,
    },
    /// Invariant integral of a finite function.
    #[command(group = clap::ArgGroup::new("which").required(true))]
    Integrate {
        #[arg(long, group = "which", allow_hyphen_values = true)]
        eta: Option<String>,
        #[arg(long, group = "which", allow_hyphen_values = true)]
        nu: Option<String>,
    },
    /// ν(f2* f1) for finite functions.
    ScalarProduct { f1: String, f2: String },
    /// Sparse matrix of an element on e_0 … e_(N-1).
    Matrix { expr: String },
    /// Radial Laplacian of a profile on layer 0.
    #[command(name = "box")]
    BoxOp { radial: String },
    /// Compare Ω on f(y) f0 with the radial Casimir.
    CasimirCheck { radial: String },
    /// Radial eigenfunction φ_l.
    Phi {
        #[arg(long, allow_hyphen_values = true)]
        l: String,
    },
    /// Truncated spectrum of the radial Laplacian.
    Spectrum,
    /// Whether U_q sl2 · f0 spans the window i, j ≤ m.
    Spanlattice {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        maxlen: Option<u32>,
    },
    /// Run the exact identity suite.
    Verify,
}

/// A rendered command result.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub text: String,
    pub json: Value,
    /// False when a verification did not hold.
    pub success: bool,
}

impl Report {
    fn ok(text: String, json: Value) -> Self {
        Report { text, json, success: true }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text.clone(),
            Format::Json => self.json.to_string(),
        }
    }
}

/// Parsed `--q`: the float, and the exact rational when one was given.
#[derive(Clone, Debug, PartialEq)]
pub struct QValue {
    pub ctx: NumericContext,
    pub rational: Option<BigRational>,
}

pub fn parse_q(s: &str) -> Result<QValue> {
    let s = s.trim();
    let (x, rational) = if s.contains('/') {
        let r: BigRational = s.parse().map_err(|_| Error::InvalidQ(s.to_string()))?;
        let x = num_traits::ToPrimitive::to_f64(&r).ok_or_else(|| Error::InvalidQ(s.to_string()))?;
        (x, Some(r))
    } else {
        let x: f64 = s.parse().map_err(|_| Error::InvalidQ(s.to_string()))?;
        (x, None)
    };
    let ctx = NumericContext::new(x).map_err(|_| Error::InvalidQ(s.to_string()))?;
    Ok(QValue { ctx, rational })
}

fn require_q(q: Option<&QValue>, cmd: &str) -> Result<NumericContext> {
    q.map(|q| q.ctx).ok_or_else(|| Error::Format(format!("`{cmd}` needs --q")))
}

/// Supplies element arguments, reading stdin at most once for `-`.
pub struct Inputs<'a> {
    stdin: &'a mut dyn Read,
    cached: Option<String>,
}

impl<'a> Inputs<'a> {
    pub fn new(stdin: &'a mut dyn Read) -> Self {
        Inputs { stdin, cached: None }
    }

    fn get(&mut self, arg: &str) -> Result<String> {
        if arg != "-" {
            return Ok(arg.to_string());
        }
        if self.cached.is_none() {
            let mut s = String::new();
            self.stdin.read_to_string(&mut s).map_err(|e| Error::Format(format!("reading stdin: {e}")))?;
            self.cached = Some(s);
        }
        Ok(self.cached.clone().unwrap_or_default())
    }
}

fn only_fin(f: FunElement, what: &str) -> Result<FinElement> {
    if f.pol.is_zero() {
        Ok(f.fin)
    } else {
        Err(Error::Format(format!("{what} needs a finite function, got polynomial part {}", f.pol)))
    }
}

/// Exact scalar with its value at `q` when one was given.
fn scalar_report(key: &str, c: &ExactScalar, q: Option<&QValue>) -> Result<Report> {
    let mut text = c.to_string();
    let mut obj = serde_json::Map::new();
    obj.insert(key.into(), Value::String(c.to_string()));
    if let Some(q) = q {
        let x = c.eval(&q.ctx)?;
        text.push_str(&format!("\n= {}", fmt_num(x)));
        if let Some(r) = q.rational.as_ref().map(|r| c.eval_rational(r)).transpose()?.flatten() {
            text.push_str(&format!(" = {r}"));
            obj.insert("rational".into(), Value::String(r.to_string()));
        }
        obj.insert("numeric".into(), json!(x));
    }
    Ok(Report::ok(text, Value::Object(obj)))
}

fn element_report(el: Element) -> Report {
    Report::ok(format::to_text(&el), format::to_json(&el))
}

fn complex_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn complex_text(z: Complex64) -> String {
    format!("{} {}", fmt_num(z.re), fmt_num(z.im))
}

pub fn run_command(cli: &Cli, inputs: &mut Inputs<'_>) -> Result<Report> {
    let q = cli.q.as_deref().map(parse_q).transpose()?;
    let q = q.as_ref();
    match &cli.command {
        Command::Normalize { kind, expr } => Ok(element_report(parse_expr(&inputs.get(expr)?, *kind)?)),
        Command::Act { op, on } => {
            let x = format::parse_uq(&inputs.get(op)?)?;
            let f = format::parse_fun(&inputs.get(on)?)?;
            Ok(element_report(Element::Fun(act_fun(&x, &f))))
        }
        Command::Star { kind, expr } => {
            let el = match parse_expr(&inputs.get(expr)?, *kind)? {
                Element::Fun(f) => Element::Fun(f.star()),
                Element::Uq(x) => Element::Uq(star_uq(&x)),
                Element::Radial(r) => Element::Radial(r),
            };
            Ok(element_report(el))
        }
        Command::Integrate { eta: e, nu } => {
            if let Some(src) = e {
                let f = only_fin(format::parse_fun(&inputs.get(src)?)?, "η")?;
                scalar_report("eta", &eta(&f), q)
            } else {
                let src = nu.as_deref().unwrap_or_default();
                let f = only_fin(format::parse_fun(&inputs.get(src)?)?, "ν")?;
                scalar_report("nu", &nu_integral(&f), q)
            }
        }
        Command::ScalarProduct { f1, f2 } => {
            let a = only_fin(format::parse_fun(&inputs.get(f1)?)?, "scalar-product")?;
            let b = only_fin(format::parse_fun(&inputs.get(f2)?)?, "scalar-product")?;
            scalar_report("value", &scalar_product(&a, &b), q)
        }
        Command::Matrix { expr } => {
            let n = cli.cutoff.unwrap_or(8);
            let f = format::parse_fun(&inputs.get(expr)?)?;
            check_cutoff(&f, n)?;
            let m = to_matrix(&f, n);
            let mut lines = Vec::new();
            let mut entries = Vec::new();
            for (&(r, c), v) in &m.entries {
                let mut entry = json!({"row": r, "col": c, "value": v.to_string()});
                let mut line = format!("{r} {c} {v}");
                if let Some(q) = q {
                    let x = v.eval(&q.ctx)?;
                    entry["numeric"] = json!(x);
                    line.push_str(&format!(" {}", fmt_num(x)));
                }
                lines.push(line);
                entries.push(entry);
            }
            let json = json!({"cutoff": n, "truncated": m.truncated, "entries": entries});
            Ok(Report::ok(lines.join("\n"), json))
        }
        Command::BoxOp { radial } => {
            let psi = format::parse_radial(&inputs.get(radial)?)?;
            let b = box0(&psi, &ExactScalar::q());
            let mut report = element_report(Element::Radial(b.clone()));
            if let Some(q) = q {
                let vals = b.values.iter().map(|v| v.eval(&q.ctx)).collect::<Result<Vec<_>>>()?;
                let shown: Vec<String> = vals.iter().map(|x| fmt_num(*x)).collect();
                report.text.push_str(&format!("\n= [{}]", shown.join(", ")));
                report.json["numeric"] = json!(vals);
            }
            Ok(report)
        }
        Command::CasimirCheck { radial } => {
            let psi = format::parse_radial(&inputs.get(radial)?)?;
            let ok = casimir_matches(&psi);
            let (lhs, rhs) = casimir_correspondence(&psi);
            let layer0 = lhs.get(&0).cloned().unwrap_or_else(|| crate::laplace::RadialFn::zeros(0));
            let text = format!(
                "{}\nOmega: {}\nradial: {}",
                if ok { "match" } else { "mismatch" },
                format::radial_text(&layer0),
                format::radial_text(&rhs)
            );
            let json = json!({
                "match": ok,
                "omega": format::radial_to_json(&layer0),
                "radial": format::radial_to_json(&rhs),
            });
            Ok(Report { text, json, success: ok })
        }
        Command::Phi { l } => {
            let ctx = require_q(q, "phi")?;
            let l: Complex64 =
                l.trim().parse().map_err(|_| Error::Format(format!("cannot read `{l}` as a complex number")))?;
            let n = cli.cutoff.unwrap_or(64);
            let p = classify_l(l, &ctx);
            let lam = lambda_of_l(&p, &ctx);
            let phi = phi_l(&p, n, &ctx)?;
            let res = phi_residual(&phi, lam, &ctx);
            let zone = match p.zone {
                Zone::L1 => "L1",
                Zone::L2 => "L2",
                Zone::L3 => "L3",
                Zone::Other => "other",
            };
            let mut text = format!(
                "l = {}\nzone = {zone}\nlambda = {}\nresidual = {}",
                complex_text(p.l),
                complex_text(lam),
                fmt_num(res)
            );
            for (m, v) in phi.values.iter().enumerate() {
                text.push_str(&format!("\n{m} {}", complex_text(*v)));
            }
            let json = json!({
                "l": complex_json(p.l),
                "zone": zone,
                "lambda": complex_json(lam),
                "residual": res,
                "values": phi.values.iter().map(|v| complex_json(*v)).collect::<Vec<_>>(),
            });
            Ok(Report::ok(text, json))
        }
        Command::Spectrum => {
            let ctx = require_q(q, "spectrum")?;
            let n = cli.cutoff.unwrap_or(400);
            let s = spectrum(n, &ctx)?;
            let total: f64 = s.weights.iter().sum();
            let text = format!(
                "q = {}\nN = {}\nc1 = {}\nc2 = {}\nsum of weights = {}",
                fmt_num(s.q),
                s.n,
                fmt_num(s.c1),
                fmt_num(s.c2),
                fmt_num(total)
            );
            let json = json!({"q": s.q, "N": s.n, "eigs": s.eigs, "weights": s.weights, "c1": s.c1, "c2": s.c2});
            Ok(Report::ok(text, json))
        }
        Command::Spanlattice { m, maxlen } => {
            let r = span_check(*m, maxlen.unwrap_or(2 * m));
            let text = format!(
                "{}\nm = {}\nmaxlen = {}\nrank = {}\nwindow = {}/{}",
                if r.contained { "spans" } else { "does not span" },
                r.m,
                r.maxlen,
                r.rank,
                r.window_rank,
                r.window_dim
            );
            let json = json!({
                "m": r.m,
                "maxlen": r.maxlen,
                "contained": r.contained,
                "rank": r.rank,
                "window_rank": r.window_rank,
                "window_dim": r.window_dim,
            });
            Ok(Report::ok(text, json))
        }
        Command::Verify => {
            let checks = verify::run_suite();
            let success = checks.iter().all(|c| c.pass);
            let text = checks
                .iter()
                .map(|c| match &c.detail {
                    None => format!("PASS {}", c.name),
                    Some(d) => format!("FAIL {}: {d}", c.name),
                })
                .collect::<Vec<_>>()
                .join("\n");
            let json = json!({
                "pass": success,
                "checks": checks.iter().map(|c| json!({"name": c.name, "pass": c.pass, "detail": c.detail})).collect::<Vec<_>>(),
            });
            Ok(Report { text, json, success })
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_math_domain() {
        2
    } else {
        1
    }
}

/// Parses `args`, runs the command and writes the report. Returns the process exit code.
pub fn main_with<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let mut inputs = Inputs::new(stdin);
    let report = match run_command(&cli, &mut inputs) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return exit_code(&e);
        }
    };
    let mut body = report.render(cli.format);
    body.push('\n');
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &body),
        None => stdout.write_all(body.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: writing output: {e}");
        return 1;
    }
    if report.success {
        0
    } else {
        3
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String, String) {
        run_with_stdin(args, "")
    }

    fn run_with_stdin(args: &[&str], input: &str) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("qdisc").chain(args.iter().copied());
        let code = main_with(argv, &mut input.as_bytes(), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn act_e_on_f0() {
        let (code, out, _) = run(&["act", "--op", "E", "--on", "f0", "--format", "json"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        let f = format::fun_from_json(&v).unwrap();
        let c = -(ExactScalar::q_half_pow(1) / (ExactScalar::one() - ExactScalar::q_pow(2)));
        assert_eq!(f, FunElement::from(FinElement::term(1, 0, c)));
    }

    #[test]
    fn eta_of_f0() {
        let (code, out, _) = run(&["integrate", "--eta", "f0"]);
        assert_eq!((code, out.as_str()), (0, "1\n"));
    }

    #[test]
    fn rational_q_gives_exact_value() {
        let (code, out, _) = run(&["integrate", "--nu", "f0", "--q", "1/2", "--format", "json"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["rational"], "3/4");
        assert_eq!(v["numeric"], 0.75);
    }

    #[test]
    fn stdin_input() {
        let (code, out, _) = run_with_stdin(&["normalize", "-"], "z' * z\n");
        assert_eq!((code, out.as_str()), (0, "q^2*z*z' + (1-q^2)\n"));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run(&["normalize", "z z'"]).0, 1);
        assert_eq!(run(&["normalize", "z*E"]).0, 1);
        assert_eq!(run(&["frobnicate"]).0, 1);
        assert_eq!(run(&["spectrum", "--q", "1.5"]).0, 2);
        assert_eq!(run(&["spectrum", "--q", "0"]).0, 2);
        assert_eq!(run(&["matrix", "z^5*f0", "--cutoff", "4"]).0, 2);
        assert_eq!(run(&["normalize", "1/(1-1)"]).0, 2);
        assert_eq!(run(&["--help"]).0, 0);
    }

    #[test]
    fn casimir_check_reports() {
        let (code, out, _) = run(&["casimir-check", "[1, 0, 1-q^2]"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("match"));
    }

    #[test]
    fn spectrum_small() {
        let (code, out, _) = run(&["spectrum", "--q", "1/2", "--cutoff", "40", "--format", "json"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["N"], 40);
        assert_eq!(v["eigs"].as_array().unwrap().len(), 40);
    }

    #[test]
    fn matrix_triplets() {
        let (code, out, _) = run(&["matrix", "z*f0", "--cutoff", "3", "--q", "1/2"]);
        assert_eq!(code, 0);
        assert_eq!(out, "1 0 1-q^2 0.75\n");
    }

    #[test]
    fn phi_needs_q() {
        assert_eq!(run(&["phi", "--l", "-0.5+1i"]).0, 1);
        let (code, out, _) = run(&["phi", "--l", "-0.5+1i", "--q", "0.5", "--cutoff", "16"]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("zone = L2"));
    }
}
