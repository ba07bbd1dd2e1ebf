//! Command-line front end.
//!
//! Exit codes: 0 satisfiable or holds, 1 unsatisfiable or fails, 2 budget
//! exceeded, 3 no model within the oracle bounds, 64 usage, parse or model
//! errors, 65 a modalised concept given to `abstract`, 66 unreadable input.

use crate::abstraction::{sat_no_modal_concepts, AbstractionError, FragmentVerdict};
use crate::logics::{enumerate_pantheon, LogicSpec};
use crate::oracle::{sat_by_enumeration, Bounds, OracleResult, MAX_SEARCH_WORLDS};
use crate::semantics::{formula_holds, relational_formula_holds, DomainMode, NeighbourhoodModel, RelationalModel};
use crate::syntax::{parse_formula, Agent, Formula};
use crate::tableau::{Tableau, Verdict, DEFAULT_BUDGET};
use crate::translate::Mode;
use clap::{Parser, Subcommand, ValueEnum};
use std::io::Write;
use std::path::{Path, PathBuf};

pub const EXIT_SAT: i32 = 0;
pub const EXIT_UNSAT: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;
pub const EXIT_NO_MODEL: i32 = 3;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_MODAL_CONCEPT: i32 = 65;
pub const EXIT_NO_INPUT: i32 = 66;

#[derive(Parser)]
#[command(name = "nnmdl", version, about = "Reasoning in non-normal modal description logics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide satisfiability with the tableau.
    Check {
        /// Frame conditions, e.g. EMC.
        #[arg(long)]
        logic: String,
        #[arg(long, default_value_t = 1)]
        agents: Agent,
        /// Maximum number of rule applications.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Write the extracted model as JSON when satisfiable.
        #[arg(long)]
        model_out: Option<PathBuf>,
        /// Print the rule applications of the successful run.
        #[arg(long)]
        trace: bool,
        file: PathBuf,
    },
    /// Search all small models for one satisfying the formula.
    Oracle {
        #[arg(long)]
        logic: String,
        #[arg(long, default_value_t = 1)]
        agents: Agent,
        #[arg(long, default_value_t = 3)]
        max_worlds: usize,
        #[arg(long, default_value_t = 2)]
        max_domain: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Varying)]
        mode: ModeArg,
        file: PathBuf,
    },
    /// Evaluate a formula at a world of a model given as JSON.
    Modelcheck {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value_t = 0)]
        world: usize,
        file: PathBuf,
    },
    /// Print the relational translation of a formula.
    Translate {
        #[arg(long, value_enum)]
        mode: TranslationArg,
        #[arg(long, default_value_t = 1)]
        agents: Agent,
        file: PathBuf,
    },
    /// List the non-equivalent logics or name the representative of one.
    Pantheon {
        #[command(subcommand)]
        action: PantheonAction,
    },
    /// Decide a formula without modalised concepts by propositional
    /// abstraction.
    Abstract {
        #[arg(long)]
        logic: String,
        #[arg(long, default_value_t = 1)]
        agents: Agent,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        file: PathBuf,
    },
}

#[derive(Subcommand)]
enum PantheonAction {
    /// One line per class: representative, members, and the classes one
    /// condition above it.
    List,
    /// The representative of a specification's class.
    Canon { spec: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Varying,
    Constant,
}

#[derive(Clone, Copy, ValueEnum)]
enum TranslationArg {
    Dagger,
    Ddagger,
}

/// A failure that ends the command with the given exit code.
struct Failure(i32, String);

fn usage(msg: impl ToString) -> Failure {
    Failure(EXIT_USAGE, msg.to_string())
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure(EXIT_NO_INPUT, format!("{}: {e}", path.display())))
}

fn formula(path: &Path, agents: Agent) -> Result<Formula, Failure> {
    parse_formula(read(path)?.trim(), agents).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn logic(text: &str) -> Result<LogicSpec, Failure> {
    text.parse().map_err(usage)
}

/// Runs the command line `args` (program name first) and returns the exit
/// code. Results go to `out`, diagnostics to `err`.
pub fn run_with(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_SAT };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

/// [`run_with`] on the standard streams.
pub fn run(args: &[String]) -> i32 {
    run_with(args, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    let io = |e: std::io::Error| Failure(EXIT_NO_INPUT, e.to_string());
    match command {
        Command::Check {
            logic: spec,
            agents,
            budget,
            model_out,
            trace,
            file,
        } => {
            let spec = logic(&spec)?;
            let phi = formula(&file, agents)?.nnf();
            let tab = Tableau::new(&phi, spec).map_err(usage)?;
            let sol = tab.solve(budget);
            let code = match &sol.verdict {
                Verdict::Sat { model, .. } => {
                    writeln!(out, "sat").map_err(io)?;
                    if let Some(path) = model_out {
                        std::fs::write(&path, model.to_json()).map_err(io)?;
                    }
                    EXIT_SAT
                }
                Verdict::Unsat => {
                    writeln!(out, "unsat").map_err(io)?;
                    EXIT_UNSAT
                }
                Verdict::BudgetExceeded(stats) => {
                    writeln!(out, "budget exceeded after {} rule applications", stats.applications).map_err(io)?;
                    EXIT_BUDGET
                }
            };
            if trace {
                write!(out, "{}", tab.render_trace(&sol.trace)).map_err(io)?;
            }
            Ok(code)
        }
        Command::Oracle {
            logic: spec,
            agents,
            max_worlds,
            max_domain,
            mode,
            file,
        } => {
            let spec = logic(&spec)?;
            let phi = formula(&file, agents)?;
            if max_worlds == 0 || max_domain == 0 || max_worlds > MAX_SEARCH_WORLDS {
                return Err(usage(format!("bounds must satisfy 1 <= worlds <= {MAX_SEARCH_WORLDS} and domain >= 1")));
            }
            let mode = match mode {
                ModeArg::Varying => DomainMode::Varying,
                ModeArg::Constant => DomainMode::Constant,
            };
            match sat_by_enumeration(&phi, &spec, Bounds::new(max_worlds, max_domain), mode) {
                OracleResult::Sat { model, world } => {
                    writeln!(out, "sat at world {world}\n{}", model.to_json()).map_err(io)?;
                    Ok(EXIT_SAT)
                }
                OracleResult::NoModelWithinBounds => {
                    writeln!(out, "no model within bounds").map_err(io)?;
                    Ok(EXIT_NO_MODEL)
                }
            }
        }
        Command::Modelcheck { model, world, file } => {
            let text = read(&model)?;
            let holds = match NeighbourhoodModel::from_json(&text) {
                Ok(m) => {
                    m.validate().map_err(usage)?;
                    formula_holds(&m, world, &formula(&file, m.n_agents.max(1))?).map_err(usage)?
                }
                Err(nbhd_err) => {
                    let m = RelationalModel::from_json(&text)
                        .map_err(|_| usage(format!("{}: {nbhd_err}", model.display())))?;
                    m.validate().map_err(usage)?;
                    relational_formula_holds(&m, world, &formula(&file, m.n_agents.max(1))?).map_err(usage)?
                }
            };
            writeln!(out, "{}", if holds { "holds" } else { "fails" }).map_err(io)?;
            Ok(if holds { EXIT_SAT } else { EXIT_UNSAT })
        }
        Command::Translate { mode, agents, file } => {
            let phi = formula(&file, agents)?;
            let mode = match mode {
                TranslationArg::Dagger => Mode::Dagger,
                TranslationArg::Ddagger => Mode::Ddagger,
            };
            writeln!(out, "{}", mode.formula(&phi)).map_err(io)?;
            Ok(EXIT_SAT)
        }
        Command::Pantheon { action } => {
            match action {
                PantheonAction::List => {
                    let all = enumerate_pantheon();
                    for spec in &all {
                        let members: Vec<String> = spec.class_members().iter().map(|l| l.to_string()).collect();
                        // Classes strictly stronger with nothing in between.
                        let above: Vec<String> = all
                            .iter()
                            .filter(|b| b.closure() != spec.closure() && b.implies(spec))
                            .filter(|b| {
                                !all.iter().any(|c| {
                                    c.closure() != b.closure()
                                        && c.closure() != spec.closure()
                                        && b.implies(c)
                                        && c.implies(spec)
                                })
                            })
                            .map(|b| b.to_string())
                            .collect();
                        writeln!(out, "{spec}\tmembers: {}\tabove: {}", members.join(" "), above.join(" ")).map_err(io)?;
                    }
                }
                PantheonAction::Canon { spec } => {
                    writeln!(out, "{}", logic(&spec)?.canonical()).map_err(io)?;
                }
            }
            Ok(EXIT_SAT)
        }
        Command::Abstract {
            logic: spec,
            agents,
            budget,
            file,
        } => {
            let spec = logic(&spec)?;
            let phi = formula(&file, agents)?;
            match sat_no_modal_concepts(&phi, spec, budget) {
                Ok(FragmentVerdict::Sat(_)) => {
                    writeln!(out, "sat").map_err(io)?;
                    Ok(EXIT_SAT)
                }
                Ok(FragmentVerdict::Unsat) => {
                    writeln!(out, "unsat").map_err(io)?;
                    Ok(EXIT_UNSAT)
                }
                Ok(FragmentVerdict::BudgetExceeded) => {
                    writeln!(out, "budget exceeded").map_err(io)?;
                    Ok(EXIT_BUDGET)
                }
                Err(e @ AbstractionError::ModalisedConceptPresent(_)) => Err(Failure(EXIT_MODAL_CONCEPT, e.to_string())),
                Err(e) => Err(usage(e)),
            }
        }
    }
}
