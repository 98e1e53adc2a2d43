//! Command-line front end.
//!
//! Exit codes: 0 for an affirmative answer, 1 for a valid negative answer,
//! 2 for usage and domain errors. Output depends only on the arguments.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::cyclotomic::cyclotomic_poly;
use crate::error::Error;
use crate::factor::{factor, Factorization};
use crate::field::FieldCtx;
use crate::orders::{factorize, ord_bruteforce, ord_general, prime_power_parts};
use crate::poly::Polynomial;
use crate::sparsity::{
    enumerate_sparse, factor_xn1_structured, is_sparse_oracle, is_sparse_theorem,
    witness_nonsparse, SparsityReport,
};

#[derive(Debug, Parser)]
#[command(
    name = "trisparse",
    version,
    about = "Sparsity and factorization of X^n - 1 over finite fields of odd characteristic"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
struct FieldArgs {
    /// Field size q = r^k.
    #[arg(long)]
    q: u64,
    /// Modulus for F_q over F_r as base-r digits low-to-high, e.g. 1,0,1 for Y^2+1.
    #[arg(long, value_delimiter = ',')]
    modulus: Option<Vec<u64>>,
}

#[derive(Debug, Clone, Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Also write the JSON document to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Structured,
    Oracle,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide whether X^n - 1 is 3-sparse over F_q.
    Check {
        #[command(flatten)]
        field: FieldArgs,
        /// Exponent n; accepts products of powers such as 2^3*5.
        #[arg(long, value_parser = parse_int_expr)]
        n: u64,
        /// Also factor X^n - 1 and confirm the answer.
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Factor X^n - 1 over F_q.
    Factor {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_parser = parse_int_expr)]
        n: u64,
        #[arg(long, value_enum, default_value_t = Method::Oracle)]
        method: Method,
        /// Run both methods and fail if they disagree.
        #[arg(long)]
        cross_check: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Print the cyclotomic polynomial Phi_d over F_q.
    Cyclo {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_parser = parse_int_expr)]
        d: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Multiplicative order of base modulo mod.
    Order {
        #[arg(long)]
        base: u64,
        #[arg(long = "mod", value_parser = parse_int_expr)]
        modulus: u64,
        /// Compare the closed form with iterated multiplication.
        #[arg(long)]
        verify: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// List every n <= bound for which X^n - 1 is 3-sparse.
    Enumerate {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_parser = parse_int_expr)]
        bound: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Exhibit an irreducible factor of X^p - 1 with at least four terms.
    Witness {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

/// Parses `64`, `2^6` or `2^3*5`.
fn parse_int_expr(s: &str) -> Result<u64, String> {
    s.split('*').try_fold(1u64, |acc, term| {
        let term = term.trim();
        let (base, exp) = match term.split_once('^') {
            Some((b, e)) => (b.trim(), e.trim()),
            None => (term, "1"),
        };
        let base: u64 = base
            .parse()
            .map_err(|_| format!("invalid integer {base:?}"))?;
        let exp: u32 = exp
            .parse()
            .map_err(|_| format!("invalid exponent {exp:?}"))?;
        base.checked_pow(exp)
            .and_then(|v| acc.checked_mul(v))
            .ok_or_else(|| format!("{s} overflows 64 bits"))
    })
}

enum Failure {
    /// Valid input, negative answer.
    Negative(String),
    /// Usage or domain error.
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

struct Outcome {
    text: String,
    json: Value,
    status: i32,
}

/// Runs the CLI with the given arguments (including the program name) and
/// returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let output = match &cli.command {
        Command::Check { output, .. }
        | Command::Factor { output, .. }
        | Command::Cyclo { output, .. }
        | Command::Order { output, .. }
        | Command::Enumerate { output, .. }
        | Command::Witness { output, .. } => output.clone(),
    };
    match execute(cli.command) {
        Ok(outcome) => {
            if let Some(path) = &output.out {
                let doc = serde_json::to_string_pretty(&outcome.json).unwrap() + "\n";
                if let Err(e) = std::fs::write(path, doc) {
                    let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
                    return 2;
                }
            }
            let body = match output.format {
                Format::Text => outcome.text,
                Format::Json => serde_json::to_string_pretty(&outcome.json).unwrap(),
            };
            let _ = writeln!(stdout, "{body}");
            outcome.status
        }
        Err(Failure::Negative(msg)) => {
            let _ = writeln!(stderr, "{msg}");
            1
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            2
        }
    }
}

fn make_field(args: &FieldArgs) -> Result<FieldCtx, Failure> {
    if prime_power_parts(args.q).is_none() {
        return Err(Failure::Usage(format!(
            "q = {} is not a prime power",
            args.q
        )));
    }
    let ctx = FieldCtx::from_order(args.q, args.modulus.as_deref())?;
    if !ctx.is_odd() {
        return Err(Error::EvenCharacteristicUnsupported.into());
    }
    Ok(ctx)
}

fn field_json(ctx: &FieldCtx) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("q".into(), json!(ctx.order()));
    m.insert("r".into(), json!(ctx.characteristic()));
    m.insert("k".into(), json!(ctx.degree()));
    m.insert("modulus".into(), json!(ctx.modulus()));
    m
}

fn poly_json(p: &Polynomial, multiplicity: u32) -> Value {
    json!({
        "coeffs": p.to_digit_vectors(),
        "multiplicity": multiplicity,
        "weight": p.weight(),
        "degree": p.degree().unwrap_or(0),
    })
}

fn factorization_text(fac: &Factorization) -> String {
    fac.factors()
        .iter()
        .map(|(g, m)| match m {
            1 => g.to_string(),
            _ => format!("({g})^{m}"),
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn factorization_text_of_int(n: u64) -> String {
    if n == 1 {
        return "1".into();
    }
    factorize(n)
        .into_iter()
        .map(|(p, e)| match e {
            1 => p.to_string(),
            _ => format!("{p}^{e}"),
        })
        .collect::<Vec<_>>()
        .join(" * ")
}

fn execute(command: Command) -> Result<Outcome, Failure> {
    match command {
        Command::Check {
            field,
            n,
            verify,
            seed,
            ..
        } => check(&field, n, verify, seed),
        Command::Factor {
            field,
            n,
            method,
            cross_check,
            seed,
            ..
        } => factor_cmd(&field, n, method, cross_check, seed),
        Command::Cyclo { field, d, .. } => {
            let ctx = make_field(&field)?;
            let phi = cyclotomic_poly(&ctx, d)?;
            let mut doc = field_json(&ctx);
            doc.insert("d".into(), json!(d));
            doc.insert("polynomial".into(), poly_json(&phi, 1));
            Ok(Outcome {
                text: phi.to_string(),
                json: Value::Object(doc),
                status: 0,
            })
        }
        Command::Order {
            base,
            modulus,
            verify,
            ..
        } => {
            let order = ord_general(base, modulus)?;
            let mut text = order.to_string();
            let mut brute = Value::Null;
            if verify {
                let b = ord_bruteforce(base, modulus)?;
                if b != order {
                    return Err(Failure::Usage(format!(
                        "closed form gives {order} but iterated multiplication gives {b}"
                    )));
                }
                text.push_str(&format!(
                    "\nverified: iterated multiplication also gives {b}"
                ));
                brute = json!(b);
            }
            Ok(Outcome {
                text,
                json: json!({"base": base, "mod": modulus, "order": order, "bruteforce": brute}),
                status: 0,
            })
        }
        Command::Enumerate { field, bound, .. } => {
            let ctx = make_field(&field)?;
            let values = enumerate_sparse(&ctx, bound)?;
            let text = values
                .iter()
                .map(u64::to_string)
                .collect::<Vec<_>>()
                .join(", ");
            let mut doc = field_json(&ctx);
            doc.insert("bound".into(), json!(bound));
            doc.insert("values".into(), json!(values));
            Ok(Outcome {
                text,
                json: Value::Object(doc),
                status: 0,
            })
        }
        Command::Witness { field, p, seed, .. } => {
            let ctx = make_field(&field)?;
            let w = witness_nonsparse(&ctx, p, seed)?;
            let text = format!(
                "{}\nweight {} ≥ 4 ⇒ X^{p}−1 not 3-sparse over F_{}",
                w.factor,
                w.weight,
                ctx.order()
            );
            let mut doc = field_json(&ctx);
            doc.insert("p".into(), json!(p));
            doc.insert("factor".into(), poly_json(&w.factor, 1));
            doc.insert("closed_form_checks".into(), json!(w.closed_form_checks));
            Ok(Outcome {
                text,
                json: Value::Object(doc),
                status: 0,
            })
        }
    }
}

fn check(field: &FieldArgs, n: u64, verify: bool, seed: u64) -> Result<Outcome, Failure> {
    let ctx = make_field(field)?;
    let report = is_sparse_theorem(&ctx, n)?;
    let q2m1 = ctx.order() * ctx.order() - 1;
    let mut text = if report.sparse {
        let primes: Vec<String> = report.base_primes.keys().map(u64::to_string).collect();
        format!(
            "sparse: true ({n} = {}; base primes of {q2m1}: {{{}}})",
            factorization_text_of_int(n),
            primes.join(", ")
        )
    } else {
        format!(
            "sparse: false (offending prime {} ∤ {q2m1})",
            report
                .offending_prime
                .expect("non-sparse reports name a prime")
        )
    };
    let mut verified = Value::Null;
    if verify {
        let oracle = is_sparse_oracle(&ctx, n, seed)?;
        if oracle != report.sparse {
            return Err(Failure::Usage(format!(
                "criterion says {} but the factorization says {oracle}",
                report.sparse
            )));
        }
        text.push_str("\nverified: factorization agrees");
        verified = json!(true);
    }
    let mut doc = report_json(&ctx, &report);
    doc.insert("verified".into(), verified);
    Ok(Outcome {
        text,
        json: Value::Object(doc),
        status: if report.sparse { 0 } else { 1 },
    })
}

fn report_json(ctx: &FieldCtx, report: &SparsityReport) -> Map<String, Value> {
    let mut doc = field_json(ctx);
    doc.insert("n".into(), json!(report.n));
    doc.insert("sparse".into(), json!(report.sparse));
    let base: Map<String, Value> = report
        .base_primes
        .iter()
        .map(|(p, e)| (p.to_string(), json!(e)))
        .collect();
    doc.insert("base_primes".into(), Value::Object(base));
    doc.insert("offending_prime".into(), json!(report.offending_prime));
    doc
}

fn factor_cmd(
    field: &FieldArgs,
    n: u64,
    method: Method,
    cross_check: bool,
    seed: u64,
) -> Result<Outcome, Failure> {
    let ctx = make_field(field)?;
    if n == 0 {
        return Err(Failure::Usage("n must be positive".into()));
    }
    let structured = || -> Result<Factorization, Failure> {
        let report = is_sparse_theorem(&ctx, n)?;
        if let Some(p) = report.offending_prime {
            return Err(Failure::Negative(format!(
                "X^{n} - 1 is not 3-sparse over F_{} (prime {p} does not divide {}); \
                 use --method oracle",
                ctx.order(),
                ctx.order() * ctx.order() - 1
            )));
        }
        Ok(factor_xn1_structured(&ctx, n)?)
    };
    let oracle = || -> Result<Factorization, Failure> {
        Ok(factor(
            &Polynomial::x_pow_minus_one(&ctx, n as usize),
            seed,
        )?)
    };
    let fac = match method {
        Method::Structured => structured()?,
        Method::Oracle => oracle()?,
    };
    if cross_check {
        let other = match method {
            Method::Structured => oracle()?,
            Method::Oracle => structured()?,
        };
        if other != fac {
            return Err(Failure::Usage(
                "structured and oracle factorizations disagree".into(),
            ));
        }
    }
    let mut doc = field_json(&ctx);
    doc.insert("n".into(), json!(n));
    doc.insert("sparse".into(), json!(fac.max_weight() <= 3));
    doc.insert(
        "factors".into(),
        Value::Array(
            fac.factors()
                .iter()
                .map(|(g, m)| poly_json(g, *m))
                .collect(),
        ),
    );
    Ok(Outcome {
        text: factorization_text(&fac),
        json: Value::Object(doc),
        status: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_expressions() {
        assert_eq!(parse_int_expr("64"), Ok(64));
        assert_eq!(parse_int_expr("2^6"), Ok(64));
        assert_eq!(parse_int_expr("2^3*5"), Ok(40));
        assert!(parse_int_expr("2^x").is_err());
        assert!(parse_int_expr("2^70").is_err());
    }
}
