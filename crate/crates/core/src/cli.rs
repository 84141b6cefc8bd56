//! Command-line surface of the `upcycle-net` binary.
//!
//! Exit codes: 0 success, 1 operational failure (including failed validation
//! or verification), 2 usage error.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::instance::{parse_instance, serialize_instance, validate_instance, Instance};
use crate::milp::{build_milp, write_dump, BuildOptions, CanonicalMilp, InstallCostMode};
use crate::model_io::{
    format_solution, parse_solution, run_external_solver, verify_solution, write_mps, ExternalConfig,
};
use crate::oracle::{solve_exact, OracleLimits};
use crate::report::ReportBundle;
use crate::scenario::{
    economies_of_scale_instance, generate, hand_chain_instance, six_node_instance, GenSpec,
};

#[derive(Parser, Debug)]
#[command(name = "upcycle-net", version, about = "Waste upcycling supply chain design MILP")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Screen an instance; exits 0 iff there are no errors.
    Validate {
        #[arg(long)]
        instance: PathBuf,
    },
    /// Write model.mps and model.txt (canonical dump) into --out.
    Build {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Solve with the exact oracle or an external solver; writes the solution file --out.
    Solve {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        out: PathBuf,
        /// Exhaustive enumeration (desk-scale instances only).
        #[arg(long, conflicts_with = "solver_cmd", required_unless_present = "solver_cmd")]
        oracle: bool,
        /// Shell template with {mps}, {sol} and {time_limit} placeholders.
        #[arg(long)]
        solver_cmd: Option<String>,
        /// Seconds before the external solver is killed.
        #[arg(long)]
        time_limit: Option<f64>,
    },
    /// Check a solution against the model; exits 0 iff it passes.
    Verify {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        solution: PathBuf,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Write cost breakdown, flow tables and layout files into --out.
    Report {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        solution: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate a synthetic instance document.
    Gen {
        /// Generator spec (TOML); the built-in pur-de pack when absent.
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Instance file to write; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print the effective generator spec instead of an instance.
        #[arg(long)]
        print_spec: bool,
        /// Emit a fixed built-in instance instead of generating one.
        #[arg(long, value_enum, conflicts_with_all = ["spec", "seed", "print_spec"])]
        preset: Option<Preset>,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Toggle {
    On,
    Off,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Preset {
    HandChain,
    SixNode,
    EconomiesOfScale,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum CostMode {
    AnnualizedTimesHorizon,
    Once,
}

#[derive(Args, Debug)]
struct ModelArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, value_enum, default_value = "on")]
    prune: Toggle,
    #[arg(long, value_enum, default_value = "annualized-times-horizon")]
    install_cost_mode: CostMode,
    /// Proceed even when validation reports errors.
    #[arg(long)]
    override_validation: bool,
}

impl ModelArgs {
    fn options(&self) -> BuildOptions {
        BuildOptions {
            prune: self.prune == Toggle::On,
            install_cost_mode: match self.install_cost_mode {
                CostMode::AnnualizedTimesHorizon => InstallCostMode::AnnualizedTimesHorizon,
                CostMode::Once => InstallCostMode::Once,
            },
        }
    }

    /// Loads, screens and builds. Validation errors stop here unless overridden.
    fn load(&self) -> Result<(Instance, CanonicalMilp)> {
        let inst = read_instance(&self.instance)?;
        let errors: Vec<_> = validate_instance(&inst).into_iter().filter(|f| f.is_error()).collect();
        if !errors.is_empty() {
            for f in &errors {
                eprintln!("{f}");
            }
            if !self.override_validation {
                return Err(Error::InvalidValue {
                    location: self.instance.display().to_string(),
                    message: format!(
                        "{} validation error(s); pass --override-validation to build anyway",
                        errors.len()
                    ),
                });
            }
        }
        let model = build_milp(&inst, self.options())?;
        Ok((inst, model))
    }
}

fn read_instance(path: &Path) -> Result<Instance> {
    parse_instance(&std::fs::read_to_string(path)?)
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, contents)?;
    Ok(())
}

/// Parses `args` (program name first) and runs the subcommand.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn execute(command: Command) -> Result<i32> {
    match command {
        Command::Validate { instance } => {
            let inst = read_instance(&instance)?;
            let findings = validate_instance(&inst);
            for f in &findings {
                println!("{f}");
            }
            let errors = findings.iter().filter(|f| f.is_error()).count();
            println!("{errors} error(s), {} warning(s)", findings.len() - errors);
            Ok(i32::from(errors > 0))
        }
        Command::Build { model, out } => {
            let (_, m) = model.load()?;
            std::fs::create_dir_all(&out)?;
            std::fs::write(out.join("model.mps"), write_mps(&m)?)?;
            std::fs::write(out.join("model.txt"), write_dump(&m))?;
            println!(
                "{} columns ({} binary), {} rows, {} nonzeros -> {}",
                m.columns.len(),
                m.binary_columns().count(),
                m.rows.len(),
                m.nonzeros(),
                out.display()
            );
            Ok(0)
        }
        Command::Solve {
            model,
            out,
            oracle,
            solver_cmd,
            time_limit,
        } => {
            let (inst, m) = model.load()?;
            let sol = if oracle {
                eprintln!("enumerating facility configurations...");
                let result = solve_exact(&inst, &m, &OracleLimits::default())?;
                eprintln!("{}", result.certificate);
                let cert = out.with_extension("certificate.json");
                write_file(&cert, &result.certificate.to_json())?;
                result.solution
            } else {
                let command = solver_cmd.expect("clap requires --solver-cmd without --oracle");
                if time_limit.is_some_and(|t| !(t > 0.0 && t.is_finite())) {
                    return Err(Error::InvalidValue {
                        location: "--time-limit".into(),
                        message: "must be a positive number of seconds".into(),
                    });
                }
                eprintln!("running external solver...");
                let run = run_external_solver(
                    &m,
                    &ExternalConfig {
                        command,
                        time_limit: time_limit.map(Duration::from_secs_f64),
                    },
                )?;
                for d in &run.diagnostics {
                    eprintln!("{d}");
                }
                if !run.stderr.trim().is_empty() {
                    eprintln!("solver stderr:\n{}", run.stderr.trim_end());
                }
                eprintln!("external solver finished in {:.3} s", run.wall.as_secs_f64());
                run.solution
            };
            write_file(&out, &format_solution(&sol, &m))?;
            println!(
                "status {} objective {}",
                sol.status,
                sol.objective_reported
                    .map_or_else(|| "n/a".to_string(), |o| o.to_string())
            );
            Ok(0)
        }
        Command::Verify { model, solution, tol } => {
            let (_, m) = model.load()?;
            let sol = parse_solution(&std::fs::read_to_string(&solution)?, &m)?;
            let report = verify_solution(&sol, &m, tol);
            println!("{report}");
            Ok(i32::from(!report.pass))
        }
        Command::Report { model, solution, out } => {
            let (inst, m) = model.load()?;
            let sol = parse_solution(&std::fs::read_to_string(&solution)?, &m)?;
            let bundle = ReportBundle::build(&sol, &m, &inst)?;
            println!("{}", bundle.costs);
            for p in bundle.write_to(&out, &inst)? {
                println!("wrote {}", p.display());
            }
            Ok(0)
        }
        Command::Gen {
            spec,
            seed,
            out,
            print_spec,
            preset,
        } => {
            if let Some(preset) = preset {
                let inst = match preset {
                    Preset::HandChain => hand_chain_instance(),
                    Preset::SixNode => six_node_instance(),
                    Preset::EconomiesOfScale => economies_of_scale_instance(),
                };
                let text = serialize_instance(&inst);
                match out {
                    Some(p) => write_file(&p, &text)?,
                    None => print!("{text}"),
                }
                return Ok(0);
            }
            let mut gen = match spec {
                Some(p) => GenSpec::from_toml(&std::fs::read_to_string(p)?)?,
                None => GenSpec::default(),
            };
            if let Some(seed) = seed {
                gen.seed = seed;
            }
            let text = if print_spec {
                gen.to_toml()
            } else {
                serialize_instance(&generate(&gen)?)
            };
            match out {
                Some(p) => write_file(&p, &text)?,
                None => print!("{text}"),
            }
            Ok(0)
        }
    }
}
