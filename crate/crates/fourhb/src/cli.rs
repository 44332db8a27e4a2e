//! Command-line front end: evaluate morphism words and diagrams, run the
//! verification suites, and print the invariant tables, in exact and numeric
//! form.
//!
//! Exit codes: 0 success (or expected outcome for `verify`), 1 verification
//! mismatch, 2 input error.

use crate::algdsl::{self, MorphismExpr};
use crate::cyclo::CycloScalar;
use crate::kirby::{self, SignedDiagram, SliceDiagram};
use crate::report::VerificationReport;
use crate::tensor::TensorElement;
use crate::transmute::TransmuteContext;
use crate::uqsl2::verify::VerifyConfig;
use crate::uqsl2::Monomial;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use std::io::Write;

#[derive(Debug, Parser)]
#[command(name = "fourhb", version, about = "Exact quantum invariants of 4-dimensional 2-handlebodies from u_q(sl2)")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a morphism word on tensor powers of the adjoint representation.
    Eval(EvalArgs),
    /// Evaluate the invariant of a closed diagram (optionally signed).
    Invariant(InvariantArgs),
    /// Run a verification suite and compare with the expected outcome.
    Verify(VerifyArgs),
    /// Tabulate computed values against their closed forms over a range of r.
    Table(TableArgs),
}

#[derive(Debug, Args)]
struct EvalArgs {
    /// Root-of-unity order r >= 3.
    #[arg(long)]
    r: u64,
    /// Expression text; mutually exclusive with --file.
    expr: Option<String>,
    /// Read the expression from a file (one expression, '#' comments).
    #[arg(long)]
    file: Option<std::path::PathBuf>,
    /// Basis input vector for open arities, e.g. "(1,0,0),(0,0,2)".
    #[arg(long)]
    basis: Option<String>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
}

#[derive(Debug, Args)]
struct InvariantArgs {
    #[arg(long)]
    r: u64,
    /// Diagram file (JSON rows of tiles).
    diagram: std::path::PathBuf,
    /// Signature defect n: evaluate the signed invariant lambda(v+)^{-n} J.
    #[arg(long)]
    signed: Option<i64>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteName {
    Hopf,
    Quasitriangular,
    Integral,
    Transmutation,
    Modular,
    ClosedForms,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    r: u64,
    #[arg(value_enum)]
    suite: SuiteName,
    /// Sample size for checks over tensor cubes.
    #[arg(long, default_value_t = 500)]
    sample: usize,
    /// Seed for the sampled checks.
    #[arg(long, default_value_t = crate::uqsl2::verify::DEFAULT_SEED)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableKind {
    Stabilization,
    Hopf,
    Factorizable,
}

#[derive(Debug, Args)]
struct TableArgs {
    /// Which table to produce.
    #[arg(long, value_enum)]
    what: TableKind,
    /// Inclusive range of orders, e.g. 3..8.
    #[arg(long, value_parser = parse_range)]
    r_range: (u64, u64),
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
}

fn parse_range(text: &str) -> Result<(u64, u64), String> {
    let (a, b) = text.split_once("..").ok_or("expected A..B")?;
    let a: u64 = a.trim().parse().map_err(|e| format!("bad range start: {e}"))?;
    let b: u64 = b.trim().parse().map_err(|e| format!("bad range end: {e}"))?;
    if a < 3 {
        return Err("range start must be >= 3".into());
    }
    if b < a {
        return Err("range end must be >= start".into());
    }
    Ok((a, b))
}

/// Entry point shared by the binary and the tests.
pub fn run<I, T>(args: I, out: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(out, "{e}");
            return 2;
        }
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(out, "error: {msg}");
            2
        }
    }
}

fn dispatch(cli: Cli, out: &mut impl Write) -> Result<i32, String> {
    match cli.command {
        Command::Eval(args) => cmd_eval(args, out),
        Command::Invariant(args) => cmd_invariant(args, out),
        Command::Verify(args) => cmd_verify(args, out),
        Command::Table(args) => cmd_table(args, out),
    }
}

fn context(r: u64) -> Result<TransmuteContext, String> {
    TransmuteContext::new(r).map_err(|e| e.to_string())
}

fn scalar_json(ctx: &TransmuteContext, value: &CycloScalar) -> serde_json::Value {
    let cyclo = ctx.uq().cyclo();
    let approx = cyclo.embed_numeric(value);
    json!({
        "exact": {
            "den": value.denominator().to_string(),
            "coeffs": value.numerator().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        },
        "approx": [approx.re, approx.im],
    })
}

fn print_scalar(
    ctx: &TransmuteContext,
    value: &CycloScalar,
    format: OutputFormat,
    out: &mut impl Write,
) -> Result<(), String> {
    let cyclo = ctx.uq().cyclo();
    match format {
        OutputFormat::Text => {
            let approx = cyclo.embed_numeric(value);
            writeln!(
                out,
                "exact: {}   (z = exp(2*pi*i/{}))",
                cyclo.format(value),
                cyclo.conductor()
            )
            .and_then(|_| writeln!(out, "approx: {:+.9} {:+.9}i", approx.re, approx.im))
            .map_err(|e| e.to_string())
        }
        OutputFormat::Json => writeln!(out, "{}", scalar_json(ctx, value)).map_err(|e| e.to_string()),
    }
}

fn parse_basis(ctx: &TransmuteContext, text: &str) -> Result<TensorElement, String> {
    let rp = ctx.uq().rprime();
    let mut key = Vec::new();
    let cleaned = text.replace(' ', "");
    let mut rest = cleaned.as_str();
    while !rest.is_empty() {
        let rest2 = rest.strip_prefix('(').ok_or("expected '(' in basis vector")?;
        let (triple, tail) = rest2.split_once(')').ok_or("expected ')' in basis vector")?;
        let parts: Vec<&str> = triple.split(',').collect();
        if parts.len() != 3 {
            return Err(format!("basis factor needs three exponents, got {triple:?}"));
        }
        let vals: Vec<u16> = parts
            .iter()
            .map(|p| p.parse::<u16>().map_err(|e| format!("bad exponent {p:?}: {e}")))
            .collect::<Result<_, _>>()?;
        if vals.iter().any(|&v| v >= rp) {
            return Err(format!("exponents must be < r' = {rp}"));
        }
        key.push(Monomial::new(vals[0], vals[1], vals[2]));
        rest = tail.strip_prefix(',').unwrap_or(tail);
    }
    Ok(TensorElement::basis_vector(ctx.uq().cyclo(), key))
}

fn cmd_eval(args: EvalArgs, out: &mut impl Write) -> Result<i32, String> {
    let ctx = context(args.r)?;
    let text = match (&args.expr, &args.file) {
        (Some(t), None) => t.clone(),
        (None, Some(path)) => std::fs::read_to_string(path).map_err(|e| e.to_string())?,
        _ => return Err("provide exactly one of an inline expression or --file".into()),
    };
    let expr: MorphismExpr = algdsl::parse(&text).map_err(|e| e.to_string())?;
    let (m, mp) = expr.arity();
    if (m, mp) == (0, 0) {
        let value = algdsl::evaluate_scalar(&ctx, &expr).map_err(|e| e.to_string())?;
        print_scalar(&ctx, &value, args.format, out)?;
        return Ok(0);
    }
    let Some(basis_text) = &args.basis else {
        return Err(format!(
            "expression has arity ({m},{mp}); supply --basis with {m} factor(s) to evaluate it"
        ));
    };
    let v = parse_basis(&ctx, basis_text)?;
    let result = algdsl::evaluate(&ctx, &expr, &v).map_err(|e| e.to_string())?;
    let cyclo = ctx.uq().cyclo();
    match args.format {
        OutputFormat::Text => {
            writeln!(out, "arity ({m},{mp}); {} term(s):", result.len()).map_err(|e| e.to_string())?;
            for (key, coeff) in result.terms() {
                let factors: Vec<String> = key.iter().map(|mm| format!("{mm}")).collect();
                writeln!(out, "  ({}) * [{}]", cyclo.format(coeff), factors.join(" (x) "))
                    .map_err(|e| e.to_string())?;
            }
        }
        OutputFormat::Json => {
            let terms: Vec<serde_json::Value> = result
                .terms()
                .map(|(key, coeff)| {
                    json!({
                        "factors": key.iter().map(|mm| [mm.e, mm.f, mm.k]).collect::<Vec<_>>(),
                        "den": coeff.denominator().to_string(),
                        "coeffs": coeff.numerator().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                    })
                })
                .collect();
            writeln!(out, "{}", json!({ "arity": [m, mp], "terms": terms }))
                .map_err(|e| e.to_string())?;
        }
    }
    Ok(0)
}

fn cmd_invariant(args: InvariantArgs, out: &mut impl Write) -> Result<i32, String> {
    let ctx = context(args.r)?;
    let text = std::fs::read_to_string(&args.diagram).map_err(|e| e.to_string())?;
    let diagram = SliceDiagram::from_json(&text).map_err(|e| e.to_string())?;
    let census = diagram.validate().map_err(|e| e.to_string())?;
    let value = match args.signed {
        None => kirby::evaluate_closed(ctx.uq(), &diagram).map_err(|e| e.to_string())?,
        Some(n) => kirby::evaluate_signed_closed(ctx.uq(), &SignedDiagram { diagram, n })
            .map_err(|e| e.to_string())?,
    };
    if args.format == OutputFormat::Text {
        writeln!(
            out,
            "components: {} undotted, {} dotted{}",
            census.undotted,
            census.dotted,
            match args.signed {
                Some(n) => format!("; signature defect {n}"),
                None => String::new(),
            }
        )
        .map_err(|e| e.to_string())?;
    }
    print_scalar(&ctx, &value, args.format, out)?;
    Ok(0)
}

fn render_report(
    report: &VerificationReport,
    expected_pass: bool,
    format: OutputFormat,
    out: &mut impl Write,
) -> Result<i32, String> {
    let passed = report.all_passed();
    let matches = passed == expected_pass;
    match format {
        OutputFormat::Text => {
            writeln!(out, "suite {} at r = {}:", report.suite, report.r).map_err(|e| e.to_string())?;
            for check in &report.checks {
                writeln!(
                    out,
                    "  [{}] {}{}{}",
                    if check.passed { "pass" } else { "FAIL" },
                    check.name,
                    if check.reformulation_based { " (reformulation-based)" } else { "" },
                    match &check.counterexample {
                        Some(w) => format!(" -- {w}"),
                        None => String::new(),
                    }
                )
                .map_err(|e| e.to_string())?;
            }
            writeln!(
                out,
                "outcome: {}; expected {}; {}",
                if passed { "all pass" } else { "failures" },
                if expected_pass { "all pass" } else { "failures" },
                if matches { "matches expectation" } else { "MISMATCH" }
            )
            .map_err(|e| e.to_string())?;
        }
        OutputFormat::Json => {
            let value = json!({
                "report": report,
                "expected_pass": expected_pass,
                "matches_expectation": matches,
            });
            writeln!(out, "{value}").map_err(|e| e.to_string())?;
        }
    }
    Ok(if matches { 0 } else { 1 })
}

fn cmd_verify(args: VerifyArgs, out: &mut impl Write) -> Result<i32, String> {
    let ctx = context(args.r)?;
    let cfg = VerifyConfig { sample: args.sample, seed: args.seed };
    let r = args.r;
    match args.suite {
        SuiteName::Hopf => {
            render_report(&ctx.uq().verify_hopf_axioms(&cfg), true, args.format, out)
        }
        SuiteName::Quasitriangular => {
            render_report(&ctx.uq().verify_quasitriangular(&cfg), true, args.format, out)
        }
        SuiteName::Integral => {
            render_report(&ctx.uq().verify_integral_laws(&cfg), true, args.format, out)
        }
        SuiteName::ClosedForms => {
            render_report(&ctx.uq().verify_closed_forms(), true, args.format, out)
        }
        SuiteName::Transmutation => {
            // braided Hopf + BP-ribbon + BP-unimodular hold for every order
            let mut joined = VerificationReport::new("transmutation", r);
            for rep in [
                ctx.verify_braided_hopf(&cfg),
                ctx.verify_bp_ribbon(&cfg),
                ctx.verify_bp_unimodular(&cfg),
            ] {
                for check in rep.checks {
                    let mut named = check;
                    named.name = format!("{}::{}", rep.suite, named.name);
                    joined.checks.push(named);
                }
            }
            render_report(&joined, true, args.format, out)
        }
        SuiteName::Modular => {
            // the classification: modular exactly when r != 0 mod 4
            let expected = r % 4 != 0;
            render_report(&ctx.verify_modular(), expected, args.format, out)
        }
    }
}

struct TableRow {
    r: u64,
    computed: String,
    closed_form: String,
    matches: bool,
}

fn table_rows(kind: TableKind, range: (u64, u64)) -> Result<Vec<TableRow>, String> {
    let mut rows = Vec::new();
    for r in range.0..=range.1 {
        let ctx = context(r)?;
        let uq = ctx.uq();
        let cyclo = uq.cyclo();
        let row = match kind {
            TableKind::Stabilization => {
                let computed = uq.integral(&uq.ribbon());
                let closed = uq.stabilization_closed_form();
                TableRow {
                    r,
                    matches: computed == closed,
                    computed: cyclo.format(&computed),
                    closed_form: cyclo.format(&closed),
                }
            }
            TableKind::Hopf => {
                let m = uq.m_matrix();
                let computed = m
                    .contract_integral(uq, 0)
                    .contract_integral(uq, 0)
                    .scalar_value(cyclo);
                let rp = uq.rprime() as i64;
                let closed = cyclo.from_int(if (rp - 1) % 2 == 0 { 1 } else { -1 });
                TableRow {
                    r,
                    matches: computed == closed,
                    computed: cyclo.format(&computed),
                    closed_form: cyclo.format(&closed),
                }
            }
            TableKind::Factorizable => {
                let computed = uq.is_factorizable();
                let predicted = r % 4 != 0;
                TableRow {
                    r,
                    matches: computed == predicted,
                    computed: computed.to_string(),
                    closed_form: predicted.to_string(),
                }
            }
        };
        rows.push(row);
    }
    Ok(rows)
}

fn cmd_table(args: TableArgs, out: &mut impl Write) -> Result<i32, String> {
    let rows = table_rows(args.what, args.r_range)?;
    let all_match = rows.iter().all(|row| row.matches);
    match args.format {
        OutputFormat::Text => {
            writeln!(out, "{:>4}  {:<40} {:<40} match", "r", "computed", "closed form")
                .map_err(|e| e.to_string())?;
            for row in &rows {
                writeln!(
                    out,
                    "{:>4}  {:<40} {:<40} {}",
                    row.r, row.computed, row.closed_form, row.matches
                )
                .map_err(|e| e.to_string())?;
            }
        }
        OutputFormat::Json => {
            let value: Vec<serde_json::Value> = rows
                .iter()
                .map(|row| {
                    json!({
                        "r": row.r,
                        "computed": row.computed,
                        "closed_form": row.closed_form,
                        "match": row.matches,
                    })
                })
                .collect();
            writeln!(out, "{}", json!(value)).map_err(|e| e.to_string())?;
        }
    }
    Ok(if all_match { 0 } else { 1 })
}

/// Reconstruct a scalar from the JSON wire format, for round-trip checks.
pub fn scalar_from_json(
    ctx: &TransmuteContext,
    value: &serde_json::Value,
) -> Result<CycloScalar, String> {
    let cyclo = ctx.uq().cyclo();
    let exact = value.get("exact").ok_or("missing 'exact'")?;
    let den: num_bigint::BigInt =
        exact.get("den").and_then(|d| d.as_str()).ok_or("missing 'den'")?.parse().map_err(
            |e| format!("bad den: {e}"),
        )?;
    let coeffs = exact.get("coeffs").and_then(|c| c.as_array()).ok_or("missing 'coeffs'")?;
    if coeffs.len() != cyclo.degree() {
        return Err(format!("expected {} coefficients, got {}", cyclo.degree(), coeffs.len()));
    }
    let num: Vec<num_bigint::BigInt> = coeffs
        .iter()
        .map(|c| {
            c.as_str()
                .ok_or_else(|| "coefficient must be a string".to_string())
                .and_then(|s| s.parse().map_err(|e| format!("bad coefficient: {e}")))
        })
        .collect::<Result<_, _>>()?;
    Ok(cyclo.from_parts(num, den))
}

/// Numeric helper for the acceptance cross-checks: the stabilization closed
/// form evaluated in floating point, fully independent of the exact field.
pub fn stabilization_numeric(r: u64) -> num_complex::Complex64 {
    use num_complex::Complex64;
    use std::f64::consts::PI;
    let i = Complex64::new(0.0, 1.0);
    let q = |num: f64, den: f64| Complex64::from_polar(1.0, 2.0 * PI * num / den);
    let rp = r / num_integer::gcd(r, 2);
    let rs = r / num_integer::gcd(r, 4);
    if r % 2 == 1 {
        i.powu(((r - 1) / 2) as u32) * q((r as f64 + 3.0) / 2.0, r as f64)
    } else if r % 4 == 2 {
        let jac = crate::cyclo::jacobi(2, rp).unwrap() as f64;
        jac * i.powu(((rp - 1) / 2) as u32) * q((rp as f64 + 3.0) / 2.0, r as f64)
    } else if r % 8 == 4 {
        -q((rs as f64 + 3.0) / 2.0, r as f64)
    } else {
        num_complex::Complex64::new(0.0, 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_cli(args: &[&str]) -> (i32, String) {
        let mut out = Vec::new();
        let full: Vec<String> =
            std::iter::once("fourhb".to_string()).chain(args.iter().map(|s| s.to_string())).collect();
        let code = run(full, &mut out);
        (code, String::from_utf8(out).unwrap())
    }

    #[test]
    fn eval_scalar_text_and_json() {
        let (code, text) = run_cli(&["eval", "--r", "3", "vplus ; lambda"]);
        assert_eq!(code, 0, "{text}");
        assert!(text.contains("exact: z^6"), "{text}");
        let (code, js) = run_cli(&["eval", "--r", "3", "--format", "json", "vplus ; lambda"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(js.trim()).unwrap();
        assert!(v.get("exact").is_some() && v.get("approx").is_some());
        // round trip back into an exact scalar
        let ctx = TransmuteContext::new(3).unwrap();
        let back = scalar_from_json(&ctx, &v).unwrap();
        assert_eq!(back, ctx.uq().cyclo().i_unit());
        let approx = v["approx"].as_array().unwrap();
        assert!((approx[0].as_f64().unwrap()).abs() < 1e-12);
        assert!((approx[1].as_f64().unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eval_examples_from_the_operation_contract() {
        let (code, text) = run_cli(&["eval", "--r", "5", "eta ; eps"]);
        assert_eq!(code, 0);
        assert!(text.contains("exact: 1"), "{text}");
        let (code, text) = run_cli(&["eval", "--r", "4", "wplus ; (lambda * lambda)"]);
        assert_eq!(code, 0);
        assert!(text.contains("exact: -1"), "{text}");
    }

    #[test]
    fn eval_open_arity_with_basis() {
        let (code, text) = run_cli(&["eval", "--r", "3", "S", "--basis", "(1,0,0)"]);
        assert_eq!(code, 0, "{text}");
        assert!(text.contains("term"), "{text}");
        // S(E) = -E K^{-1} = -E K^2 at r' = 3
        assert!(text.contains("E^1"), "{text}");
        let (code, text) = run_cli(&["eval", "--r", "3", "S"]);
        assert_eq!(code, 2, "{text}");
        assert!(text.contains("--basis"), "{text}");
    }

    #[test]
    fn eval_error_paths() {
        let (code, text) = run_cli(&["eval", "--r", "3", "mu ; mu"]);
        assert_eq!(code, 2);
        assert!(text.contains("arity mismatch"), "{text}");
        let (code, _) = run_cli(&["eval", "--r", "2", "eta ; eps"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn invariant_command() {
        let dir = std::env::temp_dir().join("fourhb-cli-test");
        std::fs::create_dir_all(&dir).unwrap();
        let hopf_path = dir.join("hopf.json");
        std::fs::write(&hopf_path, kirby::hopf().to_json()).unwrap();
        let (code, text) = run_cli(&["invariant", "--r", "3", hopf_path.to_str().unwrap()]);
        assert_eq!(code, 0, "{text}");
        assert!(text.contains("2 undotted"), "{text}");
        assert!(text.contains("exact: 1"), "{text}");
        let (code, text) = run_cli(&["invariant", "--r", "4", hopf_path.to_str().unwrap()]);
        assert_eq!(code, 0);
        assert!(text.contains("exact: -1"), "{text}");
        // signed evaluation is rejected at twist-degenerate orders
        let plus = dir.join("unknot_plus1.json");
        std::fs::write(&plus, kirby::unknot_plus1().to_json()).unwrap();
        let (code, text) =
            run_cli(&["invariant", "--r", "8", plus.to_str().unwrap(), "--signed", "1"]);
        assert_eq!(code, 2);
        assert!(text.contains("twist degenerate"), "{text}");
        // schema errors carry coordinates
        let bad = dir.join("bad.json");
        std::fs::write(&bad, r#"{"rows":[[{"t":"wat"}]]}"#).unwrap();
        let (code, text) = run_cli(&["invariant", "--r", "3", bad.to_str().unwrap()]);
        assert_eq!(code, 2);
        assert!(text.contains("column"), "{text}");
    }

    #[test]
    fn verify_command_expected_outcomes() {
        let (code, text) = run_cli(&["verify", "--r", "3", "modular"]);
        assert_eq!(code, 0, "{text}");
        assert!(text.contains("matches expectation"), "{text}");
        // r = 8 is twist degenerate: the failure is the expected outcome
        let (code, text) = run_cli(&["verify", "--r", "8", "modular"]);
        assert_eq!(code, 0, "{text}");
        assert!(text.contains("rank deficit"), "{text}");
        assert!(text.contains("matches expectation"), "{text}");
        let (code, text) =
            run_cli(&["verify", "--r", "4", "closed-forms", "--format", "json"]);
        assert_eq!(code, 0, "{text}");
        let v: serde_json::Value = serde_json::from_str(text.trim()).unwrap();
        assert_eq!(v["matches_expectation"], true);
    }

    #[test]
    fn table_command() {
        let (code, text) = run_cli(&["table", "--what", "hopf", "--r-range", "3..8"]);
        assert_eq!(code, 0, "{text}");
        for line in ["   3", "   8"] {
            assert!(text.contains(line), "{text}");
        }
        let (code, text) =
            run_cli(&["table", "--what", "factorizable", "--r-range", "3..8", "--format", "json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(text.trim()).unwrap();
        let rows = v.as_array().unwrap();
        assert_eq!(rows.len(), 6);
        for row in rows {
            assert_eq!(row["match"], true);
            let r = row["r"].as_u64().unwrap();
            assert_eq!(row["computed"] == "true", r % 4 != 0, "r = {r}");
        }
        let (code, _) = run_cli(&["table", "--what", "hopf", "--r-range", "2..3"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn stabilization_numeric_matches_exact() {
        for r in 3..=10u64 {
            let ctx = TransmuteContext::new(r).unwrap();
            let uq = ctx.uq();
            let exact = uq.cyclo().embed_numeric(&uq.stabilization_closed_form());
            let float = stabilization_numeric(r);
            assert!(
                (exact - float).norm() < 1e-9,
                "numeric stabilization mismatch at r={r}: {exact} vs {float}"
            );
        }
    }
}
