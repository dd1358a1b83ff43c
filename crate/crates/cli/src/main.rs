//! `nassoc` — check, classify, derive, enumerate and verify n-ary
//! associative operations and multilinear polynomials.
//!
//! Exit codes: 0 success or suite pass, 1 well-formed negative result (not
//! associative, no matching form, suite fail), 2 malformed input, 3 scan
//! size over the bound. Tables and polynomials are read from a file path or
//! from standard input when the path is `-`.

use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use nassoc::boolcls::{classify_boolean, classify_by_probes, BoolForm, Probe};
use nassoc::enumerate::{
    enumerate_assoc_multilinear, enumerate_assoc_ops, idempotent_map_op, rectangular_band,
    verify_marmat, verify_proposition, verify_semigroup_count, verify_two_element_theorem,
    EnumerationReport,
};
use nassoc::finops::FiniteOp;
use nassoc::mlpoly::{MarMatForm, MultilinearPoly};
use nassoc::{Error, GuardRail};

#[derive(Parser)]
#[command(name = "nassoc", version, about = "n-ary associative operations toolkit")]
struct Cli {
    /// Emit JSON instead of human-readable text
    #[arg(long, global = true)]
    json: bool,

    /// Upper bound on scanned cells/tuples (minimum 1024)
    #[arg(long, global = true, value_name = "BOUND", value_parser = parse_bound,
          default_value_t = GuardRail::DEFAULT_MAX_CELLS)]
    max_cells: u64,

    /// Worker threads for scans (0 = automatic)
    #[arg(long, global = true, value_name = "T", default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check generalized associativity of an operation table
    Check {
        /// Path to the table JSON, or - for stdin
        input: String,
    },
    /// Classify a two-element operation into its canonical family
    Classify {
        /// Path to the table JSON, or - for stdin
        input: String,
        /// Use the constant-lookup probe tree and list the probed cells
        #[arg(long)]
        probes: bool,
    },
    /// Classify a multilinear polynomial into its canonical form
    ClassifyPoly {
        /// Path to the polynomial JSON, or - for stdin
        input: String,
    },
    /// Expand the ell-fold derived operation
    Derive {
        /// Path to the table JSON, or - for stdin
        input: String,
        /// Iteration count; 0 yields the unary identity
        #[arg(long)]
        ell: u32,
    },
    /// Enumerate associative operations (--k) or multilinear polynomials (--prime)
    Enumerate {
        /// Carrier size for a table scan
        #[arg(long)]
        k: Option<usize>,
        /// Field modulus for a polynomial scan
        #[arg(long)]
        prime: Option<u64>,
        /// Arity / variable count
        #[arg(long)]
        n: usize,
    },
    /// Run a verification suite
    Verify {
        #[command(subcommand)]
        suite: Suite,
    },
    /// Emit counterexample fixtures
    Fixtures {
        #[command(subcommand)]
        kind: FixtureKind,
    },
}

#[derive(Subcommand)]
enum Suite {
    /// Exhaustive two-element classification at one arity
    TwoElement {
        #[arg(long)]
        n: usize,
    },
    /// Multilinear classification scan against the golden counts
    Marmat {
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        n: usize,
    },
    /// Primitivity rule up to an arity
    Primitive {
        #[arg(long = "max-n")]
        max_n: usize,
    },
    /// Optimized vs naive associative-operation counts
    SemigroupCount {
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
}

#[derive(Subcommand)]
enum FixtureKind {
    /// Rectangular band on rows x cols elements
    Band { rows: usize, cols: usize },
    /// The operation (x1, .., xn) -> phi(x1) for an idempotent map phi
    Phi {
        /// The map as a JSON array, e.g. [0,1,0], or a comma list 0,1,0
        table: String,
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
}

fn parse_bound(s: &str) -> Result<u64, String> {
    let v: u64 = s.parse().map_err(|_| format!("not an integer: {s}"))?;
    if v < 1 << 10 {
        return Err(format!("bound {v} below the minimum of 1024"));
    }
    Ok(v)
}

// negative results are well-formed outcomes, separate from errors
enum Outcome {
    Positive,
    Negative,
}

impl Outcome {
    fn code(&self) -> u8 {
        match self {
            Outcome::Positive => 0,
            Outcome::Negative => 1,
        }
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::InfeasibleSize { .. } => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let rail = GuardRail::new(cli.max_cells);
    let run = || match dispatch(&cli, &rail) {
        Ok(outcome) => ExitCode::from(outcome.code()),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    };
    if cli.threads > 0 {
        match rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build() {
            Ok(pool) => pool.install(run),
            Err(err) => {
                eprintln!("error: {err}");
                ExitCode::from(2)
            }
        }
    } else {
        run()
    }
}

fn dispatch(cli: &Cli, rail: &GuardRail) -> Result<Outcome, Error> {
    match &cli.command {
        Command::Check { input } => cmd_check(input, cli.json, rail),
        Command::Classify { input, probes } => cmd_classify(input, *probes, cli.json, rail),
        Command::ClassifyPoly { input } => cmd_classify_poly(input, cli.json),
        Command::Derive { input, ell } => cmd_derive(input, *ell, rail),
        Command::Enumerate { k, prime, n } => cmd_enumerate(*k, *prime, *n, cli.json, rail),
        Command::Verify { suite } => cmd_verify(suite, cli.json, rail),
        Command::Fixtures { kind } => cmd_fixtures(kind, cli.json, rail),
    }
}

fn read_input(path: &str) -> Result<String, Error> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Error::InvalidInput(format!("reading stdin: {e}")))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("reading {path}: {e}")))
    }
}

fn parse_op(path: &str) -> Result<FiniteOp, Error> {
    let text = read_input(path)?;
    serde_json::from_str(&text).map_err(|e| Error::InvalidInput(e.to_string()))
}

fn parse_poly(path: &str) -> Result<MultilinearPoly, Error> {
    let text = read_input(path)?;
    serde_json::from_str(&text).map_err(|e| Error::InvalidInput(e.to_string()))
}

fn cmd_check(input: &str, json: bool, rail: &GuardRail) -> Result<Outcome, Error> {
    let op = parse_op(input)?;
    let associative = op.is_associative(rail)?;
    if json {
        println!("{}", json!({ "k": op.k(), "n": op.n(), "associative": associative }));
    } else {
        println!("{}", if associative { "associative" } else { "not associative" });
    }
    Ok(if associative { Outcome::Positive } else { Outcome::Negative })
}

fn probe_json(probes: &[Probe]) -> serde_json::Value {
    probes.iter().map(|p| json!({ "args": p.args, "value": p.value })).collect()
}

fn cmd_classify(input: &str, probes: bool, json: bool, rail: &GuardRail) -> Result<Outcome, Error> {
    let op = parse_op(input)?;
    let (form, trace) = if probes {
        let c = classify_by_probes(&op)?;
        (c.form, Some(c.probes))
    } else {
        (classify_boolean(&op, rail)?, None)
    };
    if json {
        let mut value = json!({ "form": form.name(), "n": op.n() });
        if let Some(trace) = &trace {
            value["probes"] = probe_json(trace);
        }
        println!("{value}");
    } else {
        println!("form: {} (n = {})", form.name(), op.n());
        if let Some(trace) = &trace {
            for p in trace {
                let args: Vec<String> = p.args.iter().map(|a| a.to_string()).collect();
                println!("probe ({}) -> {}", args.join(","), p.value);
            }
        }
    }
    Ok(if form == BoolForm::NotAssociative { Outcome::Negative } else { Outcome::Positive })
}

fn form_json(form: &MarMatForm) -> serde_json::Value {
    match form {
        MarMatForm::Constant(c) => json!({ "form": "constant", "c": c.to_string() }),
        MarMatForm::FirstProj => json!({ "form": "first_proj" }),
        MarMatForm::LastProj => json!({ "form": "last_proj" }),
        MarMatForm::ShiftedSum(c) => json!({ "form": "shifted_sum", "c": c.to_string() }),
        MarMatForm::OmegaSum(w) => json!({ "form": "omega_sum", "omega": w.to_string() }),
        MarMatForm::ProductForm { a, b } => {
            json!({ "form": "product_form", "a": a.to_string(), "b": b.to_string() })
        }
        MarMatForm::NoForm => json!({ "form": "no_form" }),
    }
}

fn cmd_classify_poly(input: &str, json: bool) -> Result<Outcome, Error> {
    let poly = parse_poly(input)?;
    let form = poly.classify_marmat()?;
    let associative = poly.is_associative()?;
    let matched = !matches!(form, MarMatForm::NoForm);
    // the classification theorem, enforced: a disagreement here is a bug,
    // not an input condition
    assert_eq!(
        matched, associative,
        "internal: classification and symbolic associativity disagree"
    );
    if json {
        let mut value = form_json(&form);
        value["associative"] = json!(associative);
        println!("{value}");
    } else {
        println!("{form}");
        println!("associative: {associative}");
    }
    Ok(if matched { Outcome::Positive } else { Outcome::Negative })
}

fn cmd_derive(input: &str, ell: u32, rail: &GuardRail) -> Result<Outcome, Error> {
    let op = parse_op(input)?;
    let derived = op.derive(ell, rail)?;
    // always the bare table JSON so the output pipes back into check/classify
    println!("{}", serde_json::to_string(&derived).expect("tables serialize"));
    Ok(Outcome::Positive)
}

fn human_report(rep: &EnumerationReport) -> String {
    let mut out = format!("scanned {} candidates, {} associative\n", rep.scanned, rep.associative);
    for (name, count) in &rep.histogram {
        out.push_str(&format!("  {name}: {count}\n"));
    }
    out.push_str(&format!("verdict: {} ({} ms)", if rep.passed() { "pass" } else { "fail" }, rep.elapsed_ms));
    out
}

fn report_outcome(rep: &EnumerationReport) -> Outcome {
    if rep.passed() {
        Outcome::Positive
    } else {
        Outcome::Negative
    }
}

fn cmd_enumerate(
    k: Option<usize>,
    prime: Option<u64>,
    n: usize,
    json: bool,
    rail: &GuardRail,
) -> Result<Outcome, Error> {
    match (k, prime) {
        (Some(k), None) => {
            let (ops, rep) = enumerate_assoc_ops(k, n, rail)?;
            if json {
                println!("{}", json!({ "report": rep, "ops": ops }));
            } else {
                println!("{}", human_report(&rep));
            }
            Ok(report_outcome(&rep))
        }
        (None, Some(p)) => {
            let (polys, rep) = enumerate_assoc_multilinear(p, n, rail)?;
            if json {
                println!("{}", json!({ "report": rep, "polys": polys }));
            } else {
                println!("{}", human_report(&rep));
            }
            Ok(report_outcome(&rep))
        }
        _ => Err(Error::InvalidInput("pass exactly one of --k or --prime".into())),
    }
}

fn cmd_verify(suite: &Suite, json: bool, rail: &GuardRail) -> Result<Outcome, Error> {
    let (rep, extra_human) = match suite {
        Suite::TwoElement { n } => (verify_two_element_theorem(*n, rail)?, None),
        Suite::Marmat { prime, n } => (verify_marmat(*prime, *n, rail)?, None),
        Suite::Primitive { max_n } => {
            let rep = verify_proposition(*max_n, rail)?;
            let arities: Vec<String> = (2..=*max_n)
                .filter(|&n| nassoc::boolcls::primitive_sumbar_arity(n))
                .map(|n| n.to_string())
                .collect();
            (rep, Some(format!("primitive complemented-xor arities: {}", arities.join(", "))))
        }
        Suite::SemigroupCount { k, n } => (verify_semigroup_count(*k, *n, rail)?, None),
    };
    if json {
        println!("{}", serde_json::to_string(&rep).expect("reports serialize"));
    } else {
        println!("{}", human_report(&rep));
        if let Some(extra) = extra_human {
            println!("{extra}");
        }
    }
    Ok(report_outcome(&rep))
}

fn parse_phi(table: &str) -> Result<Vec<u16>, Error> {
    if let Ok(vals) = serde_json::from_str::<Vec<u16>>(table) {
        return Ok(vals);
    }
    table
        .split(',')
        .map(|part| {
            part.trim()
                .parse::<u16>()
                .map_err(|_| Error::InvalidInput(format!("not a map entry: {part:?}")))
        })
        .collect()
}

fn cmd_fixtures(kind: &FixtureKind, json: bool, rail: &GuardRail) -> Result<Outcome, Error> {
    match kind {
        FixtureKind::Band { rows, cols } => {
            let op = rectangular_band(*rows, *cols, rail)?;
            let associative = op.is_associative(rail)?;
            if json {
                println!("{}", json!({ "op": op, "associative": associative }));
            } else {
                println!("{}", serde_json::to_string(&op).expect("tables serialize"));
                println!("associative: {associative}");
            }
            Ok(Outcome::Positive)
        }
        FixtureKind::Phi { table, n } => {
            let phi = parse_phi(table)?;
            let op = idempotent_map_op(&phi, *n, rail)?;
            let associative = op.is_associative(rail)?;
            // when the carrier is a prime field within scan range, say
            // whether any associative multilinear polynomial computes this
            // table
            let in_forms = multilinear_membership(&op, rail);
            if json {
                let mut value = json!({ "op": op, "associative": associative });
                if let Some(hit) = in_forms {
                    value["in_multilinear_forms"] = json!(hit);
                }
                println!("{value}");
            } else {
                println!("{}", serde_json::to_string(&op).expect("tables serialize"));
                println!("associative: {associative}");
                match in_forms {
                    Some(false) => println!("outside multilinear classification"),
                    Some(true) => println!("within multilinear classification"),
                    None => {}
                }
            }
            Ok(Outcome::Positive)
        }
    }
}

fn multilinear_membership(op: &FiniteOp, rail: &GuardRail) -> Option<bool> {
    if op.n() < 2 {
        return None;
    }
    let (polys, _) = enumerate_assoc_multilinear(op.k() as u64, op.n(), rail).ok()?;
    for poly in polys {
        if poly.value_table(rail).ok()? == *op {
            return Some(true);
        }
    }
    Some(false)
}
