use std::fmt::Write as _;
use std::io::Write as _;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use quadrep_core::classpoly::{class_polynomial_with_diagnostics, frobenius_order, ClassPolyComputation};
use quadrep_core::decision::{decide_with, MethodChoice, ParityTerms, PrimeClassification};
use quadrep_core::local::{local_at_odd_prime, local_generic, LocalReport, LocalVerdict};
use quadrep_core::pell::{cf_sqrt, fundamental_solution, negative_pell, solve_pell_like, unit_hypothesis, unit_witness};
use quadrep_core::pell::{UnitHypothesis, UnitWitness};
use quadrep_core::quadfield::{check_radicand, oracle_search, OracleOutcome};
use quadrep_core::{
    class_polynomial, criterion_2_7, degree_pattern, local_everywhere, CfExpansion, DecisionReport, Error,
    FactorPattern, FormClassGroup, PellOutcome, PellSolution, QuadInt,
};

#[derive(Parser)]
#[command(name = "quadrep", version, about = "Decide whether n = ax² + by² and inspect the arithmetic behind the answer")]
#[command(allow_negative_numbers = true)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Auto,
    Classfield,
    Oracle,
}

impl From<MethodArg> for MethodChoice {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Auto => MethodChoice::Auto,
            MethodArg::Classfield => MethodChoice::ClassField,
            MethodArg::Oracle => MethodChoice::Oracle,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Decide n = ax² + by² over the integers.
    #[command(allow_negative_numbers = true)]
    Solve {
        #[arg(long)]
        a: BigInt,
        #[arg(long)]
        b: BigInt,
        #[arg(long)]
        n: BigInt,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
    },
    /// Decide n = 2x² + 7y² with the explicit conditions.
    #[command(name = "criterion-2-7", allow_negative_numbers = true)]
    Criterion27 {
        #[arg(long)]
        n: BigInt,
    },
    /// Local solvability at one prime or at every relevant place.
    #[command(allow_negative_numbers = true)]
    Local {
        #[arg(long)]
        a: BigInt,
        #[arg(long)]
        b: BigInt,
        #[arg(long)]
        n: BigInt,
        #[arg(long)]
        p: Option<BigInt>,
    },
    /// Reduced forms, class number, genus count and exponent.
    #[command(allow_negative_numbers = true)]
    Classgroup {
        #[arg(long)]
        disc: BigInt,
    },
    /// Ring class polynomial of a discriminant.
    #[command(allow_negative_numbers = true)]
    Classpoly {
        #[arg(long)]
        disc: BigInt,
    },
    /// Factor degrees of the class polynomial modulo a prime.
    #[command(allow_negative_numbers = true)]
    Pattern {
        #[arg(long)]
        disc: BigInt,
        #[arg(long)]
        p: BigInt,
    },
    /// Continued fraction of √N and solutions of x² - Ny² = m.
    #[command(allow_negative_numbers = true)]
    Pell {
        #[arg(long = "N")]
        big_n: BigInt,
        #[arg(long)]
        m: Option<BigInt>,
    },
    /// Unit-norm hypothesis for primes (p, q) and the witness x0² + q·y0² = -1 over ℤ[√-p].
    #[command(allow_negative_numbers = true)]
    Condition1 {
        #[arg(long)]
        p: BigInt,
        #[arg(long)]
        q: BigInt,
    },
    /// Bounded search for a·x² + b·y² = α over an imaginary quadratic ring of integers.
    #[command(name = "oracle-quadfield", allow_negative_numbers = true)]
    OracleQuadfield {
        /// Field discriminant, or a squarefree radicand.
        #[arg(long)]
        field_disc: BigInt,
        #[arg(long)]
        a: BigInt,
        #[arg(long)]
        b: BigInt,
        /// "U,V" for (U + V√D)/2.
        #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
        alpha: (BigInt, BigInt),
        #[arg(long)]
        bound: BigInt,
    },
}

fn parse_pair(s: &str) -> Result<(BigInt, BigInt), String> {
    let (u, v) = s.split_once(',').ok_or_else(|| format!("expected U,V, got {s:?}"))?;
    let parse = |t: &str| t.trim().parse::<BigInt>().map_err(|e| format!("{t:?}: {e}"));
    Ok((parse(u)?, parse(v)?))
}

struct Output {
    inputs: Value,
    result: Value,
    text: String,
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("reports serialize")
}

/// The serialized name of a unit enum variant.
fn label<T: Serialize>(t: &T) -> String {
    match to_value(t) {
        Value::String(s) => s,
        v => v.to_string(),
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn run(command: Command) -> quadrep_core::Result<Output> {
    match command {
        Command::Solve { a, b, n, method } => {
            let report = decide_with(&a, &b, &n, method.into())?;
            let inputs = json!({ "a": a.to_string(), "b": b.to_string(), "n": n.to_string(), "method": label(&MethodChoice::from(method)) });
            Ok(Output { inputs, result: to_value(&report), text: decision_text(&report) })
        }
        Command::Criterion27 { n } => {
            let report = criterion_2_7(&n)?;
            Ok(Output { inputs: json!({ "n": n.to_string() }), result: to_value(&report), text: decision_text(&report) })
        }
        Command::Local { a, b, n, p } => {
            let inputs = json!({ "a": a.to_string(), "b": b.to_string(), "n": n.to_string(), "p": p.as_ref().map(|p| p.to_string()) });
            match p {
                Some(p) => {
                    let closed_form_applies = !p.is_zero() && !(BigInt::from(2) * &a * &b % &p).is_zero();
                    let verdict = if closed_form_applies {
                        local_at_odd_prime(&a, &b, &n, &p)?
                    } else {
                        local_generic(&a, &b, &n, &p)?
                    };
                    let text = format!("{}x² + {}y² = {n}\n{}\n", a, b, local_line(&verdict));
                    Ok(Output { inputs, result: to_value(&verdict), text })
                }
                None => {
                    let report = local_everywhere(&a, &b, &n)?;
                    let text = format!("{}x² + {}y² = {n}\n{}", a, b, local_text(&report));
                    Ok(Output { inputs, result: to_value(&report), text })
                }
            }
        }
        Command::Classgroup { disc } => {
            let group = FormClassGroup::new(&disc)?;
            let summary = ClassGroupSummary { class_number: group.class_number(), cyclic: group.is_cyclic(), group };
            let mut text = format!(
                "discriminant {}\nclass number {}\ngenus count {}\nexponent {}\ncyclic {}\nreduced forms:\n",
                summary.group.discriminant,
                summary.class_number,
                summary.group.genus_count,
                summary.group.exponent,
                yes_no(summary.cyclic)
            );
            for f in &summary.group.reduced_reps {
                let _ = writeln!(text, "  {f}");
            }
            Ok(Output { inputs: json!({ "disc": disc.to_string() }), result: to_value(&summary), text })
        }
        Command::Classpoly { disc } => {
            let c: ClassPolyComputation = class_polynomial_with_diagnostics(&disc)?;
            let text = format!(
                "H(x) = {}\ndegree {}\nprecision {} bits, max rounding residual {:.3e}\n",
                c.polynomial,
                c.polynomial.degree(),
                c.precision_bits,
                c.max_residual
            );
            Ok(Output { inputs: json!({ "disc": disc.to_string() }), result: to_value(&c), text })
        }
        Command::Pattern { disc, p } => {
            let h = class_polynomial(&disc)?;
            let pattern = degree_pattern(&h, &p)?;
            let group = FormClassGroup::cached(&disc)?;
            let order = if group.is_cyclic() { Some(frobenius_order(&pattern, group.class_number())?) } else { None };
            let text = format!(
                "H(x) = {h}\nfactor degrees mod {p}: {:?}\nfrobenius order: {}\n",
                pattern.degrees,
                order.map_or("n/a (class group not cyclic)".to_string(), |k| k.to_string())
            );
            let summary = PatternSummary { pattern, frobenius_order: order };
            Ok(Output { inputs: json!({ "disc": disc.to_string(), "p": p.to_string() }), result: to_value(&summary), text })
        }
        Command::Pell { big_n, m } => {
            let inputs = json!({ "N": big_n.to_string(), "m": m.as_ref().map(|m| m.to_string()) });
            match m {
                Some(m) => {
                    let outcome = solve_pell_like(&big_n, &m)?;
                    let text = match &outcome {
                        PellOutcome::Found { solution } => format!("x² - {big_n}y² = {m}\n{}\n", pell_line(solution)),
                        PellOutcome::NotFoundComplete => format!("x² - {big_n}y² = {m}\nno solution (search complete)\n"),
                        PellOutcome::NotFoundBudget => format!("x² - {big_n}y² = {m}\nno solution found within the search budget\n"),
                    };
                    Ok(Output { inputs, result: to_value(&outcome), text })
                }
                None => {
                    let summary = PellSummary {
                        expansion: cf_sqrt(&big_n)?,
                        fundamental: fundamental_solution(&big_n)?,
                        negative: negative_pell(&big_n)?,
                    };
                    let e = &summary.expansion;
                    let period: Vec<String> = e.period.iter().map(|q| q.to_string()).collect();
                    let text = format!(
                        "√{big_n} = [{}; {}] (period {})\nx² - {big_n}y² = 1: {}\nx² - {big_n}y² = -1: {}\n",
                        e.a0,
                        period.join(", "),
                        e.period_len(),
                        pell_line(&summary.fundamental),
                        summary.negative.as_ref().map_or("no solution (even period)".to_string(), pell_line)
                    );
                    Ok(Output { inputs, result: to_value(&summary), text })
                }
            }
        }
        Command::Condition1 { p, q } => {
            let hypothesis = unit_hypothesis(&p, &q)?;
            let witness = if hypothesis.holds { Some(unit_witness(&p, &q)?) } else { None };
            let mut text = format!(
                "p = {p}, q = {q}\n(p/q) = {}, quartic symbol: {}\nhypothesis holds: {}\n",
                hypothesis.legendre,
                hypothesis.quartic.map_or("n/a".to_string(), |s| s.to_string()),
                yes_no(hypothesis.holds)
            );
            if let Some(w) = &witness {
                let _ = writeln!(
                    text,
                    "x0 = {}, y0 = {} in ℤ[√-{p}] (route {}, from {})",
                    w.x0,
                    w.y0,
                    label(&w.route),
                    pell_line(&w.source)
                );
            }
            let summary = UnitSummary { hypothesis, witness };
            Ok(Output { inputs: json!({ "p": p.to_string(), "q": q.to_string() }), result: to_value(&summary), text })
        }
        Command::OracleQuadfield { field_disc, a, b, alpha, bound } => {
            let (radicand, surd_scale) = radicand_of(&field_disc)?;
            let target = QuadInt::new(alpha.0.clone(), &alpha.1 * surd_scale, radicand)?;
            let outcome = oracle_search(&a, &b, &target, &bound)?;
            let mut text = format!("{a}·x² + {b}·y² = {target} over the integers of ℚ(√{})\n", target.d);
            match &outcome {
                OracleOutcome::Found { x, y, shell } => {
                    let _ = writeln!(text, "found: x = {x}, y = {y} (shell {shell})");
                }
                OracleOutcome::NotFoundWithinBound { bound } => {
                    let _ = writeln!(text, "not found within bound {bound}");
                }
            }
            let inputs = json!({
                "field_disc": field_disc.to_string(),
                "a": a.to_string(),
                "b": b.to_string(),
                "alpha": format!("{},{}", alpha.0, alpha.1),
                "bound": bound.to_string(),
            });
            Ok(Output { inputs, result: to_value(&outcome), text })
        }
    }
}

/// Accepts a field discriminant (`d` or `4d`) or a bare squarefree radicand.
/// Returns the radicand and the factor relating `√D` to it.
fn radicand_of(disc: &BigInt) -> quadrep_core::Result<(BigInt, i64)> {
    if check_radicand(disc).is_ok() {
        return Ok((disc.clone(), 1));
    }
    let four = BigInt::from(4);
    if (disc % &four).is_zero() {
        let m = disc / &four;
        let r = (&m % &four + &four) % &four;
        if (r == BigInt::from(2) || r == BigInt::from(3)) && check_radicand(&m).is_ok() {
            return Ok((m, 2));
        }
    }
    Err(Error::Domain(format!("{disc} is neither a negative field discriminant nor a squarefree radicand")))
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
struct ClassGroupSummary {
    #[serde(flatten)]
    group: FormClassGroup,
    class_number: usize,
    cyclic: bool,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
struct PatternSummary {
    #[serde(flatten)]
    pattern: FactorPattern,
    frobenius_order: Option<usize>,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
struct PellSummary {
    expansion: CfExpansion,
    fundamental: PellSolution,
    negative: Option<PellSolution>,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
struct UnitSummary {
    hypothesis: UnitHypothesis,
    witness: Option<UnitWitness>,
}

fn pell_line(s: &PellSolution) -> String {
    format!("x = {}, y = {} ({}² - {}·{}² = {})", s.x, s.y, s.x, s.n, s.y, s.m)
}

fn local_line(v: &LocalVerdict) -> String {
    let status = if v.solvable { "solvable" } else { "not solvable" };
    let mut line = format!("{}: {status} ({})", v.place, label(&v.method));
    if let Some(w) = &v.witness_mod {
        let _ = write!(line, ", lifts from ({}, {}) mod {}", w.x, w.y, w.modulus);
    }
    line
}

fn local_text(report: &LocalReport) -> String {
    let mut text = String::new();
    for v in &report.verdicts {
        let _ = writeln!(text, "  {}", local_line(v));
    }
    let _ = writeln!(text, "everywhere locally solvable: {}", yes_no(report.all_solvable));
    text
}

fn classification_line(c: &PrimeClassification) -> String {
    let order = c.frobenius_order.map_or(String::new(), |k| format!(", class order {k}"));
    format!("{}^{}: {}{order} (from {}{})", c.prime, c.exponent, label(&c.role), label(&c.source), if c.cross_checked { ", cross-checked" } else { "" })
}

fn parity_text(t: &ParityTerms) -> String {
    let ramified: Vec<String> =
        t.ramified.iter().map(|r| format!("{}^{} (class order {})", r.prime, r.exponent, r.class_order)).collect();
    format!(
        "order-4 primes present: {}, order-4 exponent sum {}, order-2 exponent sum {}, ramified [{}], target class order {}: {}",
        yes_no(t.order4_primes_present),
        t.order4_exponent_sum,
        t.order2_exponent_sum,
        ramified.join(", "),
        t.target_class_order,
        if t.holds { "holds" } else { "fails" }
    )
}

fn decision_text(r: &DecisionReport) -> String {
    let mut text = format!("{}x² + {}y² = {}\n", r.a, r.b, r.n);
    let _ = writeln!(text, "verdict: {}", label(&r.verdict));
    let _ = writeln!(text, "method: {}", label(&r.method));
    let _ = writeln!(text, "discriminant {} (class number {})", r.discriminant, r.class_number);
    let _ = writeln!(text, "local:");
    text.push_str(&local_text(&r.local));
    let failing: Vec<String> = r.failing_places.iter().map(|p| p.to_string()).collect();
    let _ = writeln!(text, "failing places: {}", if failing.is_empty() { "none".to_string() } else { failing.join(", ") });
    if !r.classifications.is_empty() {
        let _ = writeln!(text, "primes:");
        for c in &r.classifications {
            let _ = writeln!(text, "  {}", classification_line(c));
        }
    }
    if let Some(t) = &r.parity_terms {
        let _ = writeln!(text, "parity: {}", parity_text(t));
    }
    if let Some(c) = &r.conditions {
        let _ = writeln!(
            text,
            "conditions: s2 = {}, s7 = {}, 2-adic {}, 7-adic {}, odd-exponent primes split {}, parity {}, alternate quartic agrees {}",
            c.s2,
            c.s7,
            yes_no(c.two_adic),
            yes_no(c.seven_adic),
            yes_no(c.odd_exponent_primes_split),
            yes_no(c.parity),
            yes_no(c.alternate_quartic_agrees)
        );
    }
    match &r.witness {
        Some(w) => {
            let _ = writeln!(text, "witness: x = {}, y = {}", w.x, w.y);
        }
        None => text.push_str("witness: none\n"),
    }
    text
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(out) => {
            let rendered = match cli.format {
                Format::Text => out.text,
                Format::Json => {
                    let envelope = json!({
                        "tool": "quadrep",
                        "version": env!("CARGO_PKG_VERSION"),
                        "inputs": out.inputs,
                        "result": out.result,
                    });
                    serde_json::to_string_pretty(&envelope).expect("json output") + "\n"
                }
            };
            let _ = std::io::stdout().write_all(rendered.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_usage() {
                eprintln!("\nFor usage, try 'quadrep --help'.");
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
