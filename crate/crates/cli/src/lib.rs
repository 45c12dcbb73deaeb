//! Batch front end for `hodgecalc`: construction scripts, reports and the
//! built-in self test.

pub mod render;
pub mod run;
pub mod script;
pub mod selftest;

pub use run::{run_script, run_text, RunReport};
pub use script::{parse_script, InputError, Script};

/// Process exit codes.
pub mod exit {
    pub const PASS: u8 = 0;
    pub const VERIFICATION_FAILED: u8 = 1;
    pub const INPUT_ERROR: u8 = 2;
}
