//! Runs an MPS-capable solver as a subprocess.
//!
//! The command template is handed to `sh -c` after substituting `{mps}`
//! (model file to read), `{sol}` (solution file to write, in the neutral
//! format) and `{time_limit}` (seconds, `inf` when unlimited). Each run gets
//! its own temporary directory.

use std::io::Read;
use std::os::unix::process::CommandExt;
use std::path::Path;
use std::process::{Command, Stdio};
use std::thread;
use std::time::{Duration, Instant};

use super::{parse_solution, write_mps, Solution, SolutionSource, SolveStatus};
use crate::error::{Error, Result};
use crate::milp::CanonicalMilp;

#[derive(Debug, Clone)]
pub struct ExternalConfig {
    pub command: String,
    pub time_limit: Option<Duration>,
}

#[derive(Debug, Clone)]
pub struct ExternalRun {
    pub solution: Solution,
    /// `None` when the process was killed.
    pub exit_code: Option<i32>,
    pub timed_out: bool,
    pub stdout: String,
    pub stderr: String,
    /// Problems found while collecting the result (missing or malformed
    /// solution file, nonzero exit).
    pub diagnostics: Vec<String>,
    pub wall: Duration,
}

fn shell_quote(path: &Path) -> String {
    format!("'{}'", path.display().to_string().replace('\'', r"'\''"))
}

fn kill_group(pid: u32) {
    // The child leads its own process group; take the whole group down.
    unsafe {
        libc::kill(-(pid as i32), libc::SIGKILL);
    }
}

pub fn run_external_solver(model: &CanonicalMilp, config: &ExternalConfig) -> Result<ExternalRun> {
    let dir = tempfile::Builder::new().prefix("upcycle-net-").tempdir()?;
    let mps_path = dir.path().join("model.mps");
    let sol_path = dir.path().join("model.sol");
    std::fs::write(&mps_path, write_mps(model)?)?;

    let limit = config
        .time_limit
        .map_or_else(|| "inf".to_string(), |d| format!("{}", d.as_secs_f64()));
    let command = config
        .command
        .replace("{mps}", &shell_quote(&mps_path))
        .replace("{sol}", &shell_quote(&sol_path))
        .replace("{time_limit}", &limit);

    let start = Instant::now();
    let mut child = Command::new("sh")
        .arg("-c")
        .arg(&command)
        .current_dir(dir.path())
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .process_group(0)
        .spawn()
        .map_err(|e| Error::ExternalSolver(format!("failed to spawn '{command}': {e}")))?;

    let drain = |mut r: Box<dyn Read + Send>| {
        thread::spawn(move || {
            let mut buf = Vec::new();
            let _ = r.read_to_end(&mut buf);
            String::from_utf8_lossy(&buf).into_owned()
        })
    };
    let out = drain(Box::new(child.stdout.take().expect("piped stdout")));
    let err = drain(Box::new(child.stderr.take().expect("piped stderr")));

    let mut timed_out = false;
    let status = loop {
        if let Some(status) = child.try_wait()? {
            break status;
        }
        if config.time_limit.is_some_and(|l| start.elapsed() > l) {
            timed_out = true;
            kill_group(child.id());
            break child.wait()?;
        }
        thread::sleep(Duration::from_millis(10));
    };
    let wall = start.elapsed();
    let stdout = out.join().unwrap_or_default();
    let stderr = err.join().unwrap_or_default();

    let mut diagnostics = Vec::new();
    let exit_code = if timed_out { None } else { status.code() };
    if timed_out {
        diagnostics.push(format!(
            "time limit of {:.3} s exceeded; solver killed",
            config.time_limit.unwrap_or_default().as_secs_f64()
        ));
    } else if !status.success() {
        diagnostics.push(format!("solver exited with {status}"));
    }

    let parsed = match std::fs::read_to_string(&sol_path) {
        Ok(text) if !text.trim().is_empty() => match parse_solution(&text, model) {
            Ok(sol) => Some((sol, text.lines().any(|l| l.trim_start().starts_with("=status=")))),
            Err(e) => {
                diagnostics.push(format!("solution file rejected: {e}"));
                None
            }
        },
        Ok(_) => {
            diagnostics.push("solution file is empty".into());
            None
        }
        Err(_) => {
            diagnostics.push("solver wrote no solution file".into());
            None
        }
    };

    let mut solution = match parsed {
        Some((mut sol, explicit_status)) => {
            if !timed_out && !status.success() {
                sol.status = SolveStatus::Unknown;
            } else if !explicit_status {
                // values without a status line: an incumbent, optimality unknown
                sol.status = SolveStatus::Feasible;
            }
            sol
        }
        None => Solution::zero(model, SolutionSource::External),
    };
    solution.source = SolutionSource::External;

    Ok(ExternalRun {
        solution,
        exit_code,
        timed_out,
        stdout,
        stderr,
        diagnostics,
        wall,
    })
}
