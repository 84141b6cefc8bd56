//! Design of multi-echelon waste upcycling supply chains as a mixed-integer
//! linear program.
//!
//! The crate covers the whole path from an instance document to analyst-ready
//! reports:
//!
//! * [`instance`] parses and screens problem instances (sources, four facility
//!   echelons, sinks, materials, periods and their parameters).
//! * [`geo`] derives great-circle leg distances.
//! * [`milp`] assembles the canonical sparse MILP (flows, installs, cost
//!   objective, and the demand / quota / source / balance / capacity /
//!   single-size row families).
//! * [`model_io`] writes free-format MPS, reads and verifies solutions, and
//!   drives external MPS-capable solvers.
//! * [`oracle`] solves desk-scale instances exactly by enumerating facility
//!   configurations and solving each flow LP with a dense simplex.
//! * [`scenario`] generates seeded synthetic instances.
//! * [`report`] turns solutions into cost breakdowns, flow tables and layouts.
//! * [`cli`] is the command-line surface used by the `upcycle-net` binary.

pub mod cli;
pub mod error;
pub mod geo;
pub mod instance;
pub mod milp;
pub mod model_io;
pub mod oracle;
pub mod report;
pub mod scenario;

pub use error::{Error, Result};
pub use instance::{Echelon, Instance};
pub use milp::{build_milp, BuildOptions, CanonicalMilp};
pub use model_io::Solution;
