//! `pq`: command-line front end for the `(p,q)`-calculus engine.

mod fnspec;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use pqcalc::integration::check_convergence_hypothesis;
use pqcalc::scalars::format_rational;
use pqcalc::{
    bracket, bracket_alpha, heine_series_eval, integral, integral_improper, integral_to_infinity,
    parse_rational, pq_binomial, pq_derive_poly_k, pq_factorial, run_identities, taylor_expand,
    taylor_expand_reversed, IdentityConfig, Polynomial, PqError, PqParams, PqPowerExpr, Rational,
    TruncationPolicy,
};

use fnspec::FnSpec;

#[derive(Parser, Debug)]
#[command(name = "pq", version, about = "Exact and numeric (p,q)-calculus")]
struct Cli {
    /// Parameter p (integer or n/d).
    #[arg(long, global = true, default_value = "1", allow_hyphen_values = true)]
    p: String,
    /// Parameter q (integer or n/d).
    #[arg(long, global = true, default_value = "1/2", allow_hyphen_values = true)]
    q: String,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Series truncation: maximum number of terms.
    #[arg(long, global = true, default_value_t = 10_000)]
    max_terms: usize,
    /// Series truncation: stop once terms fall below this.
    #[arg(long, global = true, default_value_t = 1e-12)]
    tail_tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Twin-basic number [n]; a non-integer argument gives the real-valued [alpha].
    Bracket {
        #[arg(allow_hyphen_values = true)]
        n: String,
    },
    /// [n]! for n >= 0.
    Factorial { n: i64 },
    /// (p,q)-binomial coefficient.
    Binomial { n: i64, k: i64 },
    /// k-th (p,q)-derivative of a polynomial "c0,c1,..." or of "pqpow(a=..,n=..[,gamma=..])" / "pqpowrev(...)".
    Derive {
        expr: String,
        #[arg(long, default_value_t = 1)]
        k: i64,
    },
    /// Evaluate a polynomial or (p,q)-power expression exactly at x.
    Eval {
        expr: String,
        #[arg(allow_hyphen_values = true)]
        x: String,
    },
    /// Taylor expansion of a polynomial over (x ⊖ a)^k, or (a ⊖ x)^k with --reversed.
    Taylor {
        poly: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        a: String,
        #[arg(long)]
        reversed: bool,
    },
    /// (p,q)-integral of poly:c0,c1,... | recip | log | powneg:r.
    Integrate {
        func: String,
        a: Option<f64>,
        b: Option<f64>,
        /// Integrate over (0, ∞).
        #[arg(long, conflicts_with = "to_inf")]
        improper: bool,
        /// Integrate over (a, ∞).
        #[arg(long)]
        to_inf: bool,
    },
    /// Truncated Heine-type series Σ_j binom(n+j-1, j) p^{j-C(j,2)} x^j.
    Heine {
        n: i64,
        #[arg(allow_hyphen_values = true)]
        x: f64,
    },
    /// Heuristic boundedness of |f(x) x^alpha| near 0.
    Hypothesis {
        func: String,
        #[arg(long, default_value_t = 0.0)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        upper: f64,
        #[arg(long, default_value_t = 64)]
        samples: usize,
    },
    /// Run the seeded identity suite.
    Identities {
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        /// Run a single label (e.g. heine).
        #[arg(long)]
        only: Option<String>,
        /// Add an identity that always fails; the run must exit 1.
        #[arg(long)]
        self_test_fail: bool,
    },
}

enum Failure {
    Identities,
    Usage(PqError),
}

impl From<PqError> for Failure {
    fn from(e: PqError) -> Self {
        Failure::Usage(e)
    }
}

fn rat(r: &Rational) -> String {
    format_rational(r)
}

fn emit(cli: &Cli, human: String, machine: Value) {
    if cli.json {
        println!("{machine}");
    } else {
        println!("{human}");
    }
}

fn is_power_expr(s: &str) -> bool {
    s.trim_start().starts_with("pqpow")
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let params = PqParams::parse(&cli.p, &cli.q)?;
    let policy = TruncationPolicy::new(
        cli.max_terms,
        cli.tail_tol,
        TruncationPolicy::default().divergence_window,
    )?;

    match &cli.command {
        Command::Bracket { n } => match n.parse::<i64>() {
            Ok(n) => {
                let v = rat(&bracket(n, &params));
                emit(cli, v.clone(), json!({ "value": v }));
            }
            Err(_) => {
                let alpha: f64 = n
                    .parse()
                    .map_err(|_| PqError::Parse(format!("bad number '{n}'")))?;
                let v = bracket_alpha(alpha, &params)?.value;
                emit(cli, v.to_string(), json!({ "value": v }));
            }
        },
        Command::Factorial { n } => {
            let v = rat(&pq_factorial(*n, &params)?);
            emit(cli, v.clone(), json!({ "value": v }));
        }
        Command::Binomial { n, k } => {
            let v = rat(&pq_binomial(*n, *k, &params)?);
            emit(cli, v.clone(), json!({ "value": v }));
        }
        Command::Derive { expr, k } => {
            if is_power_expr(expr) {
                let e = PqPowerExpr::parse(expr, &params)?;
                let (c, next) = e.derive_k(*k)?;
                let (c, next) = (rat(&c), next.to_string());
                emit(
                    cli,
                    format!("{c} * {next}"),
                    json!({ "coeff": c, "expr": next }),
                );
            } else {
                if *k < 0 {
                    return Err(PqError::NegativeArgument(*k).into());
                }
                let f: Polynomial = expr.parse()?;
                let d = pq_derive_poly_k(&f, *k as usize, &params).to_string();
                emit(cli, d.clone(), json!({ "poly": d }));
            }
        }
        Command::Eval { expr, x } => {
            let x = parse_rational(x)?;
            let v = if is_power_expr(expr) {
                PqPowerExpr::parse(expr, &params)?.eval(&x)?
            } else {
                expr.parse::<Polynomial>()?.eval(&x)
            };
            let v = rat(&v);
            emit(cli, v.clone(), json!({ "value": v }));
        }
        Command::Taylor { poly, a, reversed } => {
            let f: Polynomial = poly.parse()?;
            let a = parse_rational(a)?;
            let e = if *reversed {
                taylor_expand_reversed(&f, &a, &params)?
            } else {
                taylor_expand(&f, &a, &params)?
            };
            let exact = e.reconstruct(&params)? == f;
            let mut v = serde_json::to_value(&e).expect("expansion serializes");
            v["exact"] = json!(exact);
            println!("{v}");
        }
        Command::Integrate {
            func,
            a,
            b,
            improper,
            to_inf,
        } => {
            let f = func.parse::<FnSpec>()?.to_numeric();
            let r = if *improper {
                if a.is_some() {
                    return Err(PqError::Parse("--improper takes no bounds".into()).into());
                }
                integral_improper(&f, &params, &policy)?
            } else if *to_inf {
                let a = a.ok_or_else(|| PqError::Parse("--to-inf needs a lower bound".into()))?;
                if b.is_some() {
                    return Err(PqError::Parse("--to-inf takes a single bound".into()).into());
                }
                integral_to_infinity(&f, a, &params, &policy)?
            } else {
                match (a, b) {
                    (Some(a), Some(b)) => integral(&f, *a, *b, &params, &policy)?,
                    _ => return Err(PqError::Parse("integrate needs bounds a b".into()).into()),
                }
            };
            println!("{}", serde_json::to_string(&r).expect("result serializes"));
        }
        Command::Heine { n, x } => {
            let s = heine_series_eval(*n, *x, &params, &policy)?;
            let status = serde_json::to_value(s.status).expect("status serializes");
            emit(
                cli,
                s.value.to_string(),
                json!({ "value": s.value, "terms": s.terms_used, "tail": s.tail_estimate, "status": status }),
            );
        }
        Command::Hypothesis {
            func,
            alpha,
            upper,
            samples,
        } => {
            let f = func.parse::<FnSpec>()?.to_numeric();
            let r = check_convergence_hypothesis(&f, *upper, *alpha, *samples, &params)?;
            let human = format!(
                "{} (observed bound {}, heuristic)",
                if r.bounded { "bounded" } else { "unbounded" },
                r.observed_bound
            );
            emit(
                cli,
                human,
                serde_json::to_value(r).expect("report serializes"),
            );
        }
        Command::Identities {
            seed,
            trials,
            only,
            self_test_fail,
        } => {
            let report = run_identities(&IdentityConfig {
                seed: *seed,
                trials: *trials,
                only: only.clone(),
                self_test_fail: *self_test_fail,
            })?;
            emit(
                cli,
                report.to_string(),
                serde_json::to_value(&report).expect("report serializes"),
            );
            if !report.all_passed() {
                return Err(Failure::Identities);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Identities) => ExitCode::from(1),
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
