use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use simsynth::io::{automaton_dot, parse_aut, write_aut, write_trace};
use simsynth::operators::{Calculability, Operators};
use simsynth::oracle::{brute_force_supremal, BruteForce};
use simsynth::simulation::is_simulated_by;
use simsynth::synthesis::{synthesize, verify_result, Nonexistence, Outcome};
use simsynth::{Automaton, Mode, StatePairSet};

const EXIT_NONEXISTENT: u8 = 2;
const EXIT_NOT_CALCULABLE: u8 = 3;
const EXIT_INPUT: u8 = 1;

#[derive(Parser)]
#[command(
    name = "simsynth",
    version,
    about = "Simulation-based supervisory synthesis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    /// strong observable
    So,
    /// controllable and strong observable
    Cso,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::So => Mode::StrongObservable,
            ModeArg::Cso => Mode::ControllableStrongObservable,
        }
    }
}

#[derive(clap::Args)]
struct Inputs {
    #[arg(long)]
    plant: PathBuf,
    #[arg(long)]
    spec: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Report simulation, calculability and condition verdicts for the spec.
    Check {
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Compute the supremal subautomaton of the spec.
    Synthesize {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, value_enum)]
        mode: ModeArg,
        /// Write the result automaton here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the key=value iteration trace here.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Write the result as Graphviz DOT here.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Check a candidate subautomaton.
    Verify {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        candidate: PathBuf,
        /// Length bound for the language-level checks.
        #[arg(long)]
        bound: Option<usize>,
    },
    /// Exhaustive search for the supremal set (small instances only).
    Oracle {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, value_enum)]
        mode: ModeArg,
    },
}

struct Failure {
    code: u8,
    message: String,
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: message.into(),
    }
}

impl From<simsynth::Error> for Failure {
    fn from(e: simsynth::Error) -> Self {
        input_error(e.to_string())
    }
}

fn load(path: &Path) -> Result<Automaton, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    parse_aut(&text).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn load_pair(inputs: &Inputs) -> Result<(Automaton, Automaton), Failure> {
    let g = load(&inputs.plant)?;
    let r = load(&inputs.spec)?;
    r.alphabet().mismatch(g.alphabet()).map_or(Ok(()), |m| {
        Err(input_error(format!("alphabet mismatch: {m}")))
    })?;
    Ok((r, g))
}

/// Writes every file or none: contents go to temporaries next to their
/// targets and are renamed only once all of them were written.
fn write_all(files: Vec<(PathBuf, String)>) -> Result<(), Failure> {
    let mut staged = Vec::new();
    for (path, content) in files {
        let dir = match path.parent() {
            Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
            _ => PathBuf::from("."),
        };
        let mut tmp = tempfile::NamedTempFile::new_in(&dir)
            .map_err(|e| input_error(format!("{}: {e}", path.display())))?;
        tmp.write_all(content.as_bytes())
            .map_err(|e| input_error(format!("{}: {e}", path.display())))?;
        staged.push((tmp, path));
    }
    for (tmp, path) in staged {
        tmp.persist(&path)
            .map_err(|e| input_error(format!("{}: {}", path.display(), e.error)))?;
    }
    Ok(())
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "yes"
    } else {
        "no"
    }
}

fn calc_text(c: &Calculability, r: &Automaton, g: &Automaton) -> String {
    match c {
        Calculability::Calculable => "yes".into(),
        Calculability::NotCalculable(w) => format!(
            "no (state {} with plant {} on {})",
            r.state_name(w.state),
            g.state_name(w.plant),
            r.alphabet().name(w.event)
        ),
    }
}

fn check(inputs: &Inputs) -> Result<u8, Failure> {
    let (r, g) = load_pair(inputs)?;
    let ops = Operators::new(&r, &g)?;
    let full = StatePairSet::full(&r, &g);
    println!("simulated-by-plant: {}", verdict(is_simulated_by(&r, &g)?));
    println!(
        "calculable-controllable: {}",
        calc_text(&ops.is_calculable_controllable(), &r, &g)
    );
    println!(
        "calculable-strong-observable: {}",
        calc_text(&ops.is_calculable_strong_observable()?, &r, &g)
    );
    let render = |d: &simsynth::operators::RemovalDiagnostics| {
        d.removals
            .iter()
            .map(|x| {
                format!(
                    "{} ({})",
                    r.state_name(x.state),
                    x.reason.render(g.alphabet(), g.state_names())
                )
            })
            .collect::<Vec<_>>()
            .join(", ")
    };
    let qd = ops.q_d(&full)?;
    if qd.is_empty() {
        println!("controllable: yes");
    } else {
        println!("controllable: no, failing {}", render(&qd));
    }
    let qdp = ops.q_d_prime(&full)?;
    if qdp.is_empty() {
        println!("strong-observable: yes");
    } else {
        println!("strong-observable: no, failing {}", render(&qdp));
    }
    Ok(0)
}

fn synthesize_cmd(
    inputs: &Inputs,
    mode: Mode,
    out: Option<PathBuf>,
    trace_path: Option<PathBuf>,
    dot: Option<PathBuf>,
) -> Result<u8, Failure> {
    let (r, g) = load_pair(inputs)?;
    let trace = synthesize(&r, &g, mode)?;
    let mut files = Vec::new();
    if let Some(p) = trace_path {
        files.push((p, write_trace(&trace, &r, &g)));
    }
    let code = match &trace.outcome {
        Outcome::Result { automaton, .. } => {
            if let Some(p) = out {
                files.push((p, write_aut(automaton)));
            }
            if let Some(p) = dot {
                files.push((p, automaton_dot(automaton)));
            }
            println!(
                "result: {} states, {} transitions ({} iterations)",
                automaton.num_states(),
                automaton.num_transitions(),
                trace.iterations.len()
            );
            println!("states: {}", automaton.state_names().join(" "));
            0
        }
        Outcome::Nonexistent(Nonexistence::NotCalculable(c)) => {
            eprintln!("not calculable: {}", calc_text(c, &r, &g));
            println!("result: none (not calculable)");
            EXIT_NOT_CALCULABLE
        }
        Outcome::Nonexistent(Nonexistence::InitialPairRemoved) => {
            println!(
                "result: none (initial pair removed after {} iterations)",
                trace.iterations.len()
            );
            EXIT_NONEXISTENT
        }
    };
    write_all(files)?;
    Ok(code)
}

fn verify_cmd(inputs: &Inputs, candidate: &Path, bound: Option<usize>) -> Result<u8, Failure> {
    let (r, g) = load_pair(inputs)?;
    let sub = load(candidate)?;
    sub.alphabet().mismatch(g.alphabet()).map_or(Ok(()), |m| {
        Err(input_error(format!("alphabet mismatch: {m}")))
    })?;
    let report = verify_result(&r, &g, &sub, bound)?;
    print!("{report}");
    Ok(if report.passed() { 0 } else { EXIT_NONEXISTENT })
}

fn oracle_cmd(inputs: &Inputs, mode: Mode) -> Result<u8, Failure> {
    let (r, g) = load_pair(inputs)?;
    Ok(match brute_force_supremal(&r, &g, mode)? {
        BruteForce::Supremal(z) => {
            println!("supremal: {z}");
            println!("states: {}", z.spec_projection_names().join(" "));
            0
        }
        BruteForce::Nonexistent => {
            println!("supremal: none");
            EXIT_NONEXISTENT
        }
        BruteForce::NotClosed(z) => {
            println!("supremal: none (union of valid sets is not valid: {z})");
            EXIT_NONEXISTENT
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Check { inputs } => check(&inputs),
        Command::Synthesize {
            inputs,
            mode,
            out,
            trace,
            dot,
        } => synthesize_cmd(&inputs, mode.into(), out, trace, dot),
        Command::Verify {
            inputs,
            candidate,
            bound,
        } => verify_cmd(&inputs, &candidate, bound),
        Command::Oracle { inputs, mode } => oracle_cmd(&inputs, mode.into()),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
