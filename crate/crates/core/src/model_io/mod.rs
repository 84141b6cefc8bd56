//! Model exchange: free-format MPS output, the neutral solution file format,
//! solution verification, and external solver invocation.

mod external;
mod mps;
mod solution;
mod verify;

pub use external::{run_external_solver, ExternalConfig, ExternalRun};
pub use mps::write_mps;
pub use solution::{
    format_solution, parse_solution, relative_gap, Solution, SolutionSource, SolveStatus,
};
pub use verify::{verify_solution, FamilyCheck, VerificationReport, INTEGRALITY_TOL};
