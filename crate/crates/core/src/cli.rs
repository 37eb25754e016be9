//! Command-line front end. Exit codes: 0 success, 1 domain error (the error
//! name is printed), 2 usage error.

use std::collections::BTreeSet;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::catalog::equation_catalog;
use crate::controlize::{add, controlize, is_controlled_state_with, random_assignments};
use crate::derivative::{partial_c, partial_pair, partial_zx};
use crate::error::{Error, Result};
use crate::hamiltonian::{evolution_diagram, hamiltonian_diagram, ising_matrix, IsingHamiltonian};
use crate::io;
use crate::semantics::{dm, interp, interp_at, matrix_to_json, max_abs_diff, Assignment};
use crate::term::Term;

#[derive(Parser, Debug)]
#[command(name = "zxdiff", version, about = "Addition and differentiation of parametrized ZX-diagrams")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug)]
struct AtArgs {
    /// Values for the variables, bound in lexicographic order of their names.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    at: Vec<f64>,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Method {
    Controlizer,
    Factored,
    Pair,
    Matrix,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Emit {
    Evolution,
    Hamiltonian,
    Matrix,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Format {
    Json,
    Dot,
    Tikz,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Interpret a diagram: symbolic matrix, or numeric with --eval.
    Interp {
        file: String,
        #[arg(long)]
        eval: bool,
        #[command(flatten)]
        at: AtArgs,
    },
    /// Numeric matrix of a diagram at a point.
    Eval {
        file: String,
        #[command(flatten)]
        at: AtArgs,
    },
    /// Diagram whose interpretation is the sum of two diagrams.
    Add {
        a: String,
        b: String,
        #[arg(long)]
        eval: bool,
        #[command(flatten)]
        at: AtArgs,
    },
    /// Controlled state of a diagram.
    Controlize {
        file: String,
        #[arg(long)]
        eval: bool,
        #[command(flatten)]
        at: AtArgs,
    },
    /// Test whether a 1 → n diagram is a controlled state.
    CheckCs {
        file: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Derivative of a diagram; numeric when --at or --eval is given.
    Diff {
        file: String,
        #[arg(long, value_enum)]
        method: Method,
        #[arg(long)]
        var: String,
        #[arg(long)]
        eval: bool,
        #[command(flatten)]
        at: AtArgs,
    },
    /// Diagrams and matrices of an Ising Hamiltonian.
    Ising {
        file: String,
        #[arg(long, value_enum)]
        emit: Emit,
        #[arg(long, default_value = "beta")]
        var: String,
    },
    /// Check every catalogued equation at random assignments.
    AxiomsCheck {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Write a diagram as JSON, DOT or TikZ.
    Export {
        file: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

enum Failure {
    Domain(Error),
    Usage(String),
    /// Command ran but reports a negative result; the report goes to stdout.
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type CmdResult = std::result::Result<String, Failure>;

fn read(path: &str) -> std::result::Result<String, Failure> {
    if path == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s)
            .map_err(|e| Failure::Usage(format!("cannot read stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {path}: {e}")))
}

fn load(path: &str) -> std::result::Result<Term, Failure> {
    Ok(io::parse(&read(path)?)?)
}

/// Bind `values` to `vars` in order.
fn bind(vars: &BTreeSet<String>, values: &[f64]) -> std::result::Result<Assignment, Failure> {
    if values.len() > vars.len() {
        return Err(Failure::Usage(format!(
            "--at has {} values but there are only {} variables",
            values.len(),
            vars.len()
        )));
    }
    if let Some(v) = vars.iter().nth(values.len()) {
        return Err(Failure::Domain(Error::UnboundVariable(v.clone())));
    }
    Ok(vars.iter().cloned().zip(values.iter().copied()).collect())
}

fn line(v: &Value) -> String {
    format!("{v}\n")
}

fn numeric(t: &Term, vars: &BTreeSet<String>, at: &[f64]) -> CmdResult {
    let a = bind(vars, at)?;
    Ok(line(&matrix_to_json(&interp_at(t, &a)?)))
}

/// A diagram as JSON, or its numeric matrix when asked to evaluate.
fn diagram_or_matrix(t: &Term, eval: bool, at: &[f64]) -> CmdResult {
    if eval || !at.is_empty() {
        numeric(t, &t.vars(), at)
    } else {
        Ok(format!("{}\n", io::serialize(t)))
    }
}

fn dispatch(cmd: Command) -> CmdResult {
    match cmd {
        Command::Interp { file, eval, at } => {
            let t = load(&file)?;
            if eval || !at.at.is_empty() {
                numeric(&t, &t.vars(), &at.at)
            } else {
                Ok(line(&interp(&t)?.to_json()))
            }
        }
        Command::Eval { file, at } => {
            let t = load(&file)?;
            numeric(&t, &t.vars(), &at.at)
        }
        Command::Add { a, b, eval, at } => {
            let s = add(&load(&a)?, &load(&b)?)?;
            diagram_or_matrix(&s, eval, &at.at)
        }
        Command::Controlize { file, eval, at } => {
            let c = controlize(&load(&file)?);
            diagram_or_matrix(&c.term, eval, &at.at)
        }
        Command::CheckCs { file, seed, tol } => {
            let ok = is_controlled_state_with(&load(&file)?, seed, tol)?;
            Ok(line(&json!(ok)))
        }
        Command::Diff { file, method, var, eval, at } => {
            let t = load(&file)?;
            let mut vars = t.vars();
            vars.insert(var.clone());
            let numeric_out = eval || !at.at.is_empty();
            let d = match method {
                Method::Controlizer => partial_c(&t, &var)?,
                Method::Factored => partial_zx(&t, &var)?,
                Method::Pair => partial_pair(&t, &var)?,
                Method::Matrix => {
                    let m = interp(&t)?;
                    let m = m.with_vars(&vars.iter().cloned().collect::<Vec<_>>());
                    let d = dm(&m, &var);
                    return if numeric_out {
                        Ok(line(&matrix_to_json(&d.eval(&bind(&vars, &at.at)?)?)))
                    } else {
                        Ok(line(&d.to_json()))
                    };
                }
            };
            if numeric_out {
                numeric(&d, &vars, &at.at)
            } else {
                Ok(format!("{}\n", io::serialize(&d)))
            }
        }
        Command::Ising { file, emit, var } => {
            let h = IsingHamiltonian::from_json(&read(&file)?)?;
            match emit {
                Emit::Evolution => Ok(format!("{}\n", io::serialize(&evolution_diagram(&h, &var)?))),
                Emit::Hamiltonian => Ok(format!("{}\n", io::serialize(&hamiltonian_diagram(&h)?))),
                Emit::Matrix => Ok(line(&matrix_to_json(&ising_matrix(&h)?))),
            }
        }
        Command::AxiomsCheck { seed, tol } => axioms_check(seed, tol),
        Command::Export { file, format } => {
            let t = load(&file)?;
            Ok(match format {
                Format::Json => format!("{}\n", io::serialize(&t)),
                Format::Dot => io::to_dot(&t),
                Format::Tikz => io::to_tikz(&t),
            })
        }
    }
}

/// One line per entry: `PASS|FAIL <source> <name> <max diff>`.
pub fn axioms_check_report(seed: u64, tol: f64) -> Result<(String, bool)> {
    let mut out = String::new();
    let mut all = true;
    for e in equation_catalog() {
        let both = Term::tensor(&e.lhs, &e.rhs);
        let mut worst = 0.0f64;
        for a in random_assignments(&both, 10, seed) {
            let d = max_abs_diff(&interp_at(&e.lhs, &a)?, &interp_at(&e.rhs, &a)?).unwrap_or(f64::INFINITY);
            worst = worst.max(d);
        }
        let ok = worst <= tol;
        all &= ok;
        out.push_str(&format!(
            "{} {} {} {:.3e}\n",
            if ok { "PASS" } else { "FAIL" },
            e.source.as_str(),
            e.name,
            worst
        ));
    }
    Ok((out, all))
}

fn axioms_check(seed: u64, tol: f64) -> CmdResult {
    let (report, ok) = axioms_check_report(seed, tol)?;
    if ok {
        Ok(report)
    } else {
        Err(Failure::Check(report))
    }
}

/// Run with the given arguments (including the program name), writing to
/// `out` and `err`. Returns the exit code.
pub fn run_with<W: Write, E: Write>(argv: &[String], out: &mut W, err: &mut E) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            0
        }
        Err(Failure::Domain(e)) => {
            let _ = writeln!(err, "{}: {e}", e.name());
            1
        }
        Err(Failure::Check(report)) => {
            let _ = out.write_all(report.as_bytes());
            1
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "usage error: {msg}");
            2
        }
    }
}

/// Run against the process's stdout and stderr.
pub fn run(argv: &[String]) -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}
