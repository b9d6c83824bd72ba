//! `mixterm`: command-line front end for mixed inductive-coinductive terms.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use mixterm::nominal::Permutable;
use mixterm::syntax::{load, parse_permutation, Diagnostic, Printer, Symbols};
use mixterm::{alpha_distance, alpha_eq_upto, an_distance, subst, MixedTerm, Signature};

const DEFAULT_SIG: &str = include_str!("../sigs/lambda_001.sig");

#[derive(Parser)]
#[command(name = "mixterm", version, about = "Mixed inductive-coinductive terms with binders")]
struct Cli {
    /// Signature file (JSON). Defaults to the built-in lambda_001.
    #[arg(long, global = true, value_name = "FILE")]
    sig: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Inputs {
    /// Read a term from a file instead of the command line (repeatable).
    #[arg(long = "file", value_name = "FILE")]
    files: Vec<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Validate the signature and report whether it is non-trivial; load TERM if given.
    Check {
        term: Option<String>,
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Print the depth-n truncation of a term.
    Trunc {
        term: Option<String>,
        #[arg(long, default_value_t = 10)]
        depth: usize,
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Decide alpha-equivalence of two terms up to a depth.
    Alpha {
        terms: Vec<String>,
        #[arg(long, default_value_t = 10)]
        depth: usize,
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Arnold-Nivat distance between two terms.
    Dist {
        terms: Vec<String>,
        #[arg(long, default_value_t = 12)]
        precision: u32,
        /// Compare up to alpha-equivalence.
        #[arg(long)]
        alpha: bool,
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Substitute REPL for VAR in TERM and print a truncation of the result.
    Subst {
        /// TERM VAR REPL, or VAR REPL when TERM comes from --file.
        args: Vec<String>,
        #[arg(long, default_value_t = 10)]
        depth: usize,
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Free variables visible down to a depth.
    Fv {
        term: Option<String>,
        #[arg(long, default_value_t = 10)]
        depth: usize,
        #[command(flatten)]
        inputs: Inputs,
    },
    /// All atoms (free and bound) visible down to a depth.
    Support {
        term: Option<String>,
        #[arg(long, default_value_t = 10)]
        depth: usize,
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Apply a permutation such as "(x y)(u v)" and print a truncation.
    Act {
        term: Option<String>,
        #[arg(long)]
        perm: String,
        #[arg(long, default_value_t = 10)]
        depth: usize,
        #[command(flatten)]
        inputs: Inputs,
    },
}

/// A user-facing failure; exits with status 1.
struct Failure(String);

impl Failure {
    fn at(source: &str, d: Diagnostic) -> Failure {
        Failure(format!("{source}:{d}"))
    }
}

struct Session {
    sig: Signature,
    symbols: Symbols,
}

struct Source {
    label: String,
    text: String,
}

impl Session {
    fn open(path: Option<&PathBuf>) -> Result<Session, Failure> {
        let (label, text) = match path {
            Some(p) => (
                p.display().to_string(),
                fs::read_to_string(p).map_err(|e| Failure(format!("{}: {e}", p.display())))?,
            ),
            None => ("lambda_001.sig".to_string(), DEFAULT_SIG.to_string()),
        };
        let sig = Signature::from_json(&text).map_err(|e| Failure(format!("{label}: {e}")))?;
        Ok(Session { sig, symbols: Symbols::new() })
    }

    fn term(&mut self, src: &Source) -> Result<MixedTerm, Failure> {
        let env = load(&src.text, &self.sig, &mut self.symbols).map_err(|d| Failure::at(&src.label, d))?;
        // load has already checked the system, so this cannot fail
        Ok(MixedTerm::from_equations(&self.sig, &env).expect("checked environment"))
    }

    fn printer(&self) -> Printer<'_> {
        Printer::new(&self.symbols, &self.sig)
    }
}

/// File inputs first, in order, then the positional ones.
fn gather(inputs: &Inputs, positional: &[String]) -> Result<Vec<Source>, Failure> {
    let mut out = Vec::new();
    for p in &inputs.files {
        let text = fs::read_to_string(p).map_err(|e| Failure(format!("{}: {e}", p.display())))?;
        out.push(Source { label: p.display().to_string(), text });
    }
    for (i, t) in positional.iter().enumerate() {
        out.push(Source { label: format!("<arg{}>", i + 1), text: t.clone() });
    }
    Ok(out)
}

fn exactly<const N: usize>(sources: Vec<Source>, what: &str) -> Result<[Source; N], Failure> {
    let n = sources.len();
    sources
        .try_into()
        .map_err(|_| Failure(format!("expected {N} {what}, found {n}")))
}

fn one(inputs: &Inputs, term: &Option<String>) -> Result<Source, Failure> {
    let [s] = exactly::<1>(gather(inputs, term.as_slice())?, "term")?;
    Ok(s)
}

fn run(cli: Cli) -> Result<String, Failure> {
    let mut s = Session::open(cli.sig.as_ref())?;
    s.sig.validate().map_err(|e| Failure(e.to_string()))?;
    match cli.command {
        Command::Check { term, inputs } => {
            let n = s.sig.nontriviality();
            let mut out = if n.holds() {
                format!(
                    "non-trivial (ℓ={}, 𝔫={}, 𝔡={})",
                    n.binder.unwrap_or_default(),
                    n.branching.unwrap_or_default(),
                    n.coinductive.unwrap_or_default()
                )
            } else {
                format!("trivial: {}", n.missing().join(", "))
            };
            let sources = gather(&inputs, term.as_slice())?;
            for src in &sources {
                s.term(src)?;
                out.push_str(&format!("\n{}: guarded", src.label));
            }
            Ok(out)
        }
        Command::Trunc { term, depth, inputs } => {
            let t = s.term(&one(&inputs, &term)?)?;
            Ok(s.printer().term(&t.truncate(depth)))
        }
        Command::Alpha { terms, depth, inputs } => {
            let [a, b] = exactly::<2>(gather(&inputs, &terms)?, "terms")?;
            let (t, u) = (s.term(&a)?, s.term(&b)?);
            Ok(alpha_eq_upto(&t, &u, depth).to_string())
        }
        Command::Dist { terms, precision, alpha, inputs } => {
            let [a, b] = exactly::<2>(gather(&inputs, &terms)?, "terms")?;
            let (t, u) = (s.term(&a)?, s.term(&b)?);
            let d = if alpha { alpha_distance(&t, &u, precision) } else { an_distance(&t, &u, precision) };
            Ok(d.to_string())
        }
        Command::Subst { args, depth, inputs } => {
            let [target, var, repl] = exactly::<3>(gather(&inputs, &args)?, "arguments (TERM VAR REPL)")?;
            let t = s.term(&target)?;
            let x = variable(&mut s, &var)?;
            let r = s.term(&repl)?;
            Ok(s.printer().term(&subst(&t, x, &r).truncate(depth)))
        }
        Command::Fv { term, depth, inputs } => {
            let t = s.term(&one(&inputs, &term)?)?;
            Ok(s.printer().atoms(&t.free_vars(depth)))
        }
        Command::Support { term, depth, inputs } => {
            let t = s.term(&one(&inputs, &term)?)?;
            Ok(s.printer().atoms(&t.atoms_of(depth)))
        }
        Command::Act { term, perm, depth, inputs } => {
            let t = s.term(&one(&inputs, &term)?)?;
            let p = parse_permutation(&perm, &mut s.symbols).map_err(|d| Failure::at("--perm", d))?;
            Ok(s.printer().term(&t.act(&p).truncate(depth)))
        }
    }
}

/// VAR must be a single variable name.
fn variable(s: &mut Session, src: &Source) -> Result<mixterm::Atom, Failure> {
    let env = load(&src.text, &s.sig, &mut s.symbols).map_err(|d| Failure::at(&src.label, d))?;
    match (&env.root, env.equations.is_empty()) {
        (mixterm::Expr::Var(a), true) => Ok(*a),
        _ => Err(Failure(format!("{}: expected a variable name", src.label))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    std::panic::set_hook(Box::new(|info| {
        eprintln!("internal error: {info}");
    }));
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(out)) => {
            println!("{out}");
            ExitCode::SUCCESS
        }
        Ok(Err(Failure(msg))) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(_) => ExitCode::from(2),
    }
}
