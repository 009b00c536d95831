//! Document format, task runner and report verification for `dgw`.
//!
//! A document is a single JSON object; see `schema/dgw.schema.json` for the
//! grammar and `examples/` for complete inputs.

pub mod document;
pub mod goldens;
pub mod report;
pub mod tasks;

pub use document::{parse_document, DocError, Workspace};
pub use report::{run, verify_report, Report, VerifyError};
pub use tasks::{RunOptions, TaskSpec};

/// Exit codes of `dgw run` and `dgw verify`.
pub mod exit {
    pub const PASS: i32 = 0;
    pub const FAIL: i32 = 1;
    pub const UNDETERMINED: i32 = 2;
    pub const INPUT_ERROR: i32 = 3;
    pub const ANOMALY: i32 = 4;
}
