//! Library side of the `blasius` binary: run manifests, tolerance tables and
//! profile export.

pub mod manifest;
pub mod profile;
pub mod table;

use blasius_core::Error;

pub use manifest::RunManifest;
pub use table::Case;

pub const UNPROVEN_WARNING: &str = "warning: theory unproven for p<1";

/// Process exit code for a solver error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Domain(_) => 2,
        Error::BracketFailure { .. }
        | Error::HorizonOverflow { .. }
        | Error::StepUnderflow { .. }
        | Error::NoDecay { .. } => 3,
    }
}
