//! Command-line interface. [`run`] parses arguments and returns the exit
//! code and the text to print, so it can be tested without a process.

use std::fmt::Write as _;
use std::fs;

use clap::{Parser, Subcommand, ValueEnum};

use crate::derivations::{replay_with_library, AnyScript};
use crate::enumerator::{classify, enumerate};
use crate::lattice::build_lattice;
use crate::models::{builtin, FiniteAlgebra};
use crate::terms::{normalize_is, parse_word, Identity, Mode};
use crate::varieties::{decide, variety_of, VarietyId};
use crate::verify;

/// Exit code for a check that ran and failed.
pub const EXIT_FAILURE: i32 = 1;
/// Exit code for bad arguments or unparsable input.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "varietylab", version, about = "Varieties of implication semigroups and zroupoids")]
struct Cli {
    /// Worker threads for parallel sweeps
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Is,
    Iz,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Is => Mode::IS,
            ModeArg::Iz => Mode::IZ,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide an IS identity in one of the sixteen varieties
    Check { variety: String, identity: String },
    /// Print the IS normal form of a word
    Normalize { word: String },
    /// Check an identity in finite algebras (files or builtin:NAME)
    Oracle {
        #[arg(required = true, num_args = 2.., value_name = "ALGEBRA... IDENTITY")]
        args: Vec<String>,
        #[arg(long, value_enum, default_value = "is")]
        mode: ModeArg,
    },
    /// Print the variety generated by an implication semigroup
    VarietyOf { algebra: String },
    /// Build and verify the subvariety lattice, then report its properties
    Lattice {
        /// Also write the Hasse diagram in DOT format
        #[arg(long)]
        dot: Option<String>,
    },
    /// List all algebras of an order up to isomorphism
    Enumerate {
        #[arg(long)]
        order: usize,
        #[arg(long, value_enum, default_value = "is")]
        mode: ModeArg,
    },
    /// Check a derivation script
    Replay { script: String },
    /// Run the acceptance criteria and worked examples
    #[command(alias = "verify-paper")]
    Verify,
}

struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

fn failed(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_FAILURE, message: message.into() }
}

fn load_algebra(source: &str) -> Result<FiniteAlgebra, Failure> {
    if let Some(name) = source.strip_prefix("builtin:") {
        return builtin(name).map_err(|e| usage(e.to_string()));
    }
    let text = fs::read_to_string(source).map_err(|e| usage(format!("{source}: {e}")))?;
    FiniteAlgebra::from_file_format(&text).map_err(|e| usage(format!("{source}: {e}")))
}

fn parse_identity(text: &str, mode: Mode) -> Result<Identity, Failure> {
    Identity::parse(text, mode).map_err(|e| usage(format!("{text:?}: {e}")))
}

fn lattice_report(dot: Option<&str>) -> Result<String, Failure> {
    let vl = build_lattice().map_err(|e| failed(e.to_string()))?;
    let lat = &vl.lattice;
    let names = |xs: &[usize]| xs.iter().map(|&x| lat.label(x)).collect::<Vec<_>>().join(",");
    let mut out = String::new();
    let n5 = lat.find_n5();
    writeln!(out, "elements={} covers={} modular={}", lat.len(), lat.covers().len(), n5.is_none()).unwrap();
    if let Some(p) = n5 {
        writeln!(
            out,
            "pentagon o={} a={} c={} b={} i={}",
            lat.label(p.o),
            lat.label(p.a),
            lat.label(p.c),
            lat.label(p.b),
            lat.label(p.i)
        )
        .unwrap();
    }
    match lat.distributivity_violation() {
        None => writeln!(out, "distributive=true").unwrap(),
        Some((x, y, z)) => writeln!(out, "distributive=false witness={}", names(&[x, y, z])).unwrap(),
    }
    match lat.zero_distributivity_violation() {
        None => writeln!(out, "zero-distributive=true").unwrap(),
        Some((x, y, z)) => writeln!(out, "zero-distributive=false witness={}", names(&[x, y, z])).unwrap(),
    }
    writeln!(out, "atoms={}", names(&lat.atoms())).unwrap();
    writeln!(out, "neutral={}", names(&lat.neutral_elements())).unwrap();
    for (x, y) in lat.covers() {
        writeln!(out, "cover {} < {}", lat.label(x), lat.label(y)).unwrap();
    }
    if let Some(path) = dot {
        fs::write(path, lat.to_dot("IS")).map_err(|e| usage(format!("{path}: {e}")))?;
        writeln!(out, "dot written to {path}").unwrap();
    }
    Ok(out)
}

fn dispatch(command: Command, jobs: usize) -> Result<String, Failure> {
    match command {
        Command::Check { variety, identity } => {
            let v: VarietyId = variety.parse().map_err(|e: crate::varieties::VarietyError| usage(e.to_string()))?;
            let id = parse_identity(&identity, Mode::IS)?;
            let holds = decide(v, &id).map_err(|e| usage(e.to_string()))?;
            Ok(format!("{}\n", if holds { "HOLDS" } else { "FAILS" }))
        }
        Command::Normalize { word } => {
            let w = parse_word(&word).map_err(|e| usage(format!("{word:?}: {e}")))?;
            Ok(format!("{}\n", normalize_is(&w)))
        }
        Command::Oracle { mut args, mode } => {
            let identity = args.pop().expect("clap requires two arguments");
            let id = parse_identity(&identity, mode.into())?;
            let algebras = args.iter().map(|s| load_algebra(s)).collect::<Result<Vec<_>, _>>()?;
            let single = algebras.len() == 1;
            let mut out = String::new();
            for (source, a) in args.iter().zip(&algebras) {
                let sat = if jobs > 1 { a.satisfies_par(&id) } else { a.satisfies(&id) };
                let verdict = match &sat.witness {
                    None => "HOLDS".to_string(),
                    Some(w) if w.is_empty() => "FAILS".to_string(),
                    Some(w) => format!("FAILS witness {}", a.describe(w)),
                };
                if single {
                    writeln!(out, "{verdict}").unwrap();
                } else {
                    writeln!(out, "{source}: {verdict}").unwrap();
                }
            }
            Ok(out)
        }
        Command::VarietyOf { algebra } => {
            let a = load_algebra(&algebra)?;
            let v = variety_of(&a).map_err(|e| failed(e.to_string()))?;
            Ok(format!("{v}\n"))
        }
        Command::Lattice { dot } => lattice_report(dot.as_deref()),
        Command::Enumerate { order, mode } => {
            let report = enumerate(order, mode.into()).map_err(|e| usage(e.to_string()))?;
            let classes = match report.mode {
                Mode::IS => Some(classify(&report).map_err(|e| failed(e.to_string()))?.varieties),
                Mode::IZ => None,
            };
            Ok(report.render(classes.as_deref()))
        }
        Command::Replay { script } => {
            let text = fs::read_to_string(&script).map_err(|e| usage(format!("{script}: {e}")))?;
            let parsed = AnyScript::parse(&text).map_err(|e| usage(format!("{script}: {e}")))?;
            match replay_with_library(&parsed) {
                Ok(()) => Ok(format!("PASS {} steps={}\n", parsed.name(), parsed.step_count())),
                Err(e) => Err(failed(format!("FAIL {}: {e}", parsed.name()))),
            }
        }
        Command::Verify => {
            let (ok, text) = verify::report(jobs);
            if ok {
                Ok(text)
            } else {
                Err(Failure { code: EXIT_FAILURE, message: text.trim_end().to_string() })
            }
        }
    }
}

/// Runs the command line `argv` (program name first).
pub fn run<I, S>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            return (code, e.render().to_string());
        }
    };
    let jobs = cli
        .jobs
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
        .max(1);
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(p) => p,
        Err(e) => return (EXIT_USAGE, format!("cannot start {jobs} workers: {e}\n")),
    };
    match pool.install(|| dispatch(cli.command, jobs)) {
        Ok(out) => (0, out),
        Err(f) => (f.code, format!("{}\n", f.message)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String) {
        run(std::iter::once("varietylab").chain(args.iter().copied()))
    }

    #[test]
    fn check_and_normalize() {
        assert_eq!(run_args(&["check", "IS", "xyz=zOxyzOO"]), (0, "HOLDS\n".into()));
        assert_eq!(run_args(&["check", "M", "xO=xx"]), (0, "FAILS\n".into()));
        assert_eq!(run_args(&["normalize", "xyx"]), (0, "yxO\n".into()));
    }

    #[test]
    fn oracle_reports_witness() {
        assert_eq!(run_args(&["oracle", "builtin:M", "xO=xx"]), (0, "FAILS witness x=b\n".into()));
        let (code, out) = run_args(&["oracle", "builtin:K", "builtin:L", "xy=yx"]);
        assert_eq!(code, 0);
        assert_eq!(out, "builtin:K: HOLDS\nbuiltin:L: FAILS witness x=a, y=b\n");
        let (code, out) = run_args(&["oracle", "--mode", "iz", "builtin:2b", "0=0'"]);
        assert_eq!((code, out.as_str()), (0, "FAILS\n"));
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_args(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["check", "Q", "x=x"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["check", "IS", "x="]).0, EXIT_USAGE);
        assert_eq!(run_args(&["oracle", "builtin:nope", "x=x"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["enumerate", "--order", "9"]).0, EXIT_USAGE);
    }

    #[test]
    fn lattice_report_header() {
        let (code, out) = run_args(&["lattice"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("elements=16 covers=25 modular=false\n"), "{out}");
        assert!(out.contains("zero-distributive=true"));
    }

    #[test]
    fn variety_of_rejects_non_semigroups() {
        assert_eq!(run_args(&["variety-of", "builtin:BxK_mod_I"]), (0, "L\n".into()));
        assert_eq!(run_args(&["variety-of", "builtin:2b"]).0, EXIT_FAILURE);
    }
}
