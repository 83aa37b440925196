//! Command line interface.
//!
//! Exit codes: 0 success (or bisimilar / valid certificate), 1 not-bisimilar
//! for `check` and invalid for `validate`, 2 usage or parse errors, 3
//! internal invariant violations.

use clap::{Parser, Subcommand, ValueEnum};

use pibisim::bisim::{bisim, bisim_forest, top_context};
use pibisim::cert::CertificateReport;
use pibisim::formula::forest_to_df;
use pibisim::open_lts::{Ctx, EqC};
use pibisim::parse::{parse_formula, parse_process, ParseError};
use pibisim::pretty::{
    pp_bound_step, pp_bound_step_sym, pp_formula, pp_free_step, pp_free_step_sym, render_forest,
};
use pibisim::sat::om_sat;
use pibisim::syntax::{free_names_ordered, Form, NameSupply, Pr};
use pibisim::{id_lts, open_lts};

#[derive(Parser)]
#[command(name = "pibisim", version)]
#[command(about = "Open bisimilarity checker for the finite pi-calculus \
with distinguishing-formula certificates")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Fixed,
    Symbolic,
}

#[derive(Clone, Copy, ValueEnum, Default)]
enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide open bisimilarity of two processes
    Check {
        /// Left process (inline text or @file)
        p: String,
        /// Right process (inline text or @file)
        q: String,
    },
    /// Generate distinguishing-formula certificates for a non-bisimilar pair
    Distinguish {
        p: String,
        q: String,
        /// Emit every certificate pair instead of the first
        #[arg(long)]
        all: bool,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// List the one-step transitions of a process
    Steps {
        p: String,
        /// Transition semantics: in the current world, or symbolic over all
        /// possible worlds
        #[arg(long, value_enum)]
        mode: Mode,
        /// List bound steps (input and bound output) instead of free steps
        #[arg(long)]
        bound: bool,
    },
    /// Print the forest of bisimulation steps
    Forest {
        p: String,
        q: String,
        /// Stop expanding below this depth
        #[arg(long)]
        max_depth: Option<usize>,
    },
    /// Check a certificate pair: P must satisfy FL and fail FR, Q the converse
    Validate {
        p: String,
        q: String,
        fl: String,
        fr: String,
    },
    /// Check whether a process satisfies a formula
    Sat { p: String, f: String },
}

enum CliError {
    Parse { arg: &'static str, err: ParseError },
    Io { path: String, err: std::io::Error },
    Input(String),
    Internal(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Internal(_) => 3,
            _ => 2,
        }
    }

    fn emit(&self) {
        let msg = match self {
            CliError::Parse { arg, err } => serde_json::json!({
                "error": format!("parse error in {arg}: {}", err.message),
                "arg": arg,
                "line": err.line,
                "col": err.col,
            }),
            CliError::Io { path, err } => serde_json::json!({
                "error": format!("cannot read {path}: {err}"),
            }),
            CliError::Input(m) => serde_json::json!({ "error": m }),
            CliError::Internal(m) => serde_json::json!({
                "error": format!("internal invariant violation: {m}"),
            }),
        };
        eprintln!("{msg}");
    }
}

/// Arguments starting with `@` name a file holding the actual text.
fn read_arg(raw: &str) -> Result<String, CliError> {
    if let Some(path) = raw.strip_prefix('@') {
        std::fs::read_to_string(path).map_err(|err| CliError::Io {
            path: path.into(),
            err,
        })
    } else {
        Ok(raw.to_string())
    }
}

fn process_arg(raw: &str, arg: &'static str, supply: &mut NameSupply) -> Result<Pr, CliError> {
    let text = read_arg(raw)?;
    parse_process(&text, supply).map_err(|err| CliError::Parse { arg, err })
}

fn formula_arg(raw: &str, arg: &'static str, supply: &mut NameSupply) -> Result<Form, CliError> {
    let text = read_arg(raw)?;
    parse_formula(&text, supply).map_err(|err| CliError::Parse { arg, err })
}

/// The four satisfaction checks a certificate pair must pass.
fn check_pair(
    supply: &mut NameSupply,
    ctx: &Ctx,
    p: &Pr,
    q: &Pr,
    fl: &Form,
    fr: &Form,
) -> Result<[bool; 4], String> {
    let w = EqC::empty();
    let r = [
        om_sat(supply, ctx, &w, p, fl),
        om_sat(supply, ctx, &w, q, fl),
        om_sat(supply, ctx, &w, q, fr),
        om_sat(supply, ctx, &w, p, fr),
    ];
    let mut out = [false; 4];
    for (slot, res) in out.iter_mut().zip(r) {
        *slot = res.map_err(|e| e.to_string())?;
    }
    Ok(out)
}

fn pair_is_valid(results: &[bool; 4]) -> bool {
    results[0] && !results[1] && results[2] && !results[3]
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let mut supply = NameSupply::new();
    match cli.command {
        Cmd::Check { p, q } => {
            let p = process_arg(&p, "P", &mut supply)?;
            let q = process_arg(&q, "Q", &mut supply)?;
            let ctx = top_context(&p, &q);
            if bisim(&mut supply, &ctx, &p, &q) {
                println!("bisimilar");
                Ok(0)
            } else {
                println!("not-bisimilar");
                Ok(1)
            }
        }
        Cmd::Distinguish { p, q, all, format } => {
            let p = process_arg(&p, "P", &mut supply)?;
            let q = process_arg(&q, "Q", &mut supply)?;
            let ctx = top_context(&p, &q);
            let forest = bisim_forest(&mut supply, &ctx, &p, &q);
            let dfs = forest_to_df(&mut supply, &forest);
            let mut report = CertificateReport::new(&p, &q, dfs.is_empty());
            let selected: Vec<_> = if all {
                dfs
            } else {
                dfs.into_iter().take(1).collect()
            };
            for (fl, fr) in &selected {
                let results =
                    check_pair(&mut supply, &ctx, &p, &q, fl, fr).map_err(CliError::Internal)?;
                if !pair_is_valid(&results) {
                    return Err(CliError::Internal(format!(
                        "generated certificate failed self-validation: {} / {}",
                        pp_formula(fl),
                        pp_formula(fr)
                    )));
                }
                report.push(fl, fr, true);
            }
            match format {
                Format::Json => println!("{}", report.to_json()),
                Format::Text => {
                    if report.bisimilar {
                        println!("bisimilar: no distinguishing formula exists");
                    } else {
                        for (i, entry) in report.certificates.iter().enumerate() {
                            if i > 0 {
                                println!();
                            }
                            println!("left:  {}", entry.formula_left);
                            println!("right: {}", entry.formula_right);
                            println!("validated: {}", entry.validated);
                        }
                    }
                }
            }
            Ok(0)
        }
        Cmd::Steps { p, mode, bound } => {
            let p = process_arg(&p, "P", &mut supply)?;
            match mode {
                Mode::Fixed => {
                    if bound {
                        for (act, res) in id_lts::one_b(&mut supply, &p) {
                            println!("{}", pp_bound_step(&act, &res));
                        }
                    } else {
                        for (act, res) in id_lts::one(&mut supply, &p) {
                            println!("{}", pp_free_step(&act, &res));
                        }
                    }
                }
                Mode::Symbolic => {
                    let ctx = Ctx::forall(free_names_ordered(&p));
                    if bound {
                        for (sigma, (act, res)) in open_lts::one_b(&mut supply, &ctx, &p) {
                            println!("{}", pp_bound_step_sym(&sigma, &act, &res));
                        }
                    } else {
                        for (sigma, (act, res)) in open_lts::one(&mut supply, &ctx, &p) {
                            println!("{}", pp_free_step_sym(&sigma, &act, &res));
                        }
                    }
                }
            }
            Ok(0)
        }
        Cmd::Forest { p, q, max_depth } => {
            let p = process_arg(&p, "P", &mut supply)?;
            let q = process_arg(&q, "Q", &mut supply)?;
            let ctx = top_context(&p, &q);
            let forest = bisim_forest(&mut supply, &ctx, &p, &q);
            print!("{}", render_forest(&mut supply, &forest, max_depth));
            Ok(0)
        }
        Cmd::Validate { p, q, fl, fr } => {
            let p = process_arg(&p, "P", &mut supply)?;
            let q = process_arg(&q, "Q", &mut supply)?;
            let fl = formula_arg(&fl, "FL", &mut supply)?;
            let fr = formula_arg(&fr, "FR", &mut supply)?;
            // Context over every free name involved, first occurrence oldest.
            let names = free_names_ordered(&((p.clone(), q.clone()), (fl.clone(), fr.clone())));
            let ctx = Ctx::forall(names);
            let results =
                check_pair(&mut supply, &ctx, &p, &q, &fl, &fr).map_err(CliError::Input)?;
            println!("left  satisfies FL: {}", results[0]);
            println!("right satisfies FL: {}", results[1]);
            println!("right satisfies FR: {}", results[2]);
            println!("left  satisfies FR: {}", results[3]);
            let valid = pair_is_valid(&results);
            println!("verdict: {}", if valid { "valid" } else { "invalid" });
            Ok(if valid { 0 } else { 1 })
        }
        Cmd::Sat { p, f } => {
            let p = process_arg(&p, "P", &mut supply)?;
            let f = formula_arg(&f, "F", &mut supply)?;
            let names = free_names_ordered(&(p.clone(), f.clone()));
            let ctx = Ctx::forall(names);
            let holds = om_sat(&mut supply, &ctx, &EqC::empty(), &p, &f)
                .map_err(|e| CliError::Input(e.to_string()))?;
            println!("{holds}");
            Ok(0)
        }
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            err.emit();
            std::process::exit(err.code());
        }
    }
}
