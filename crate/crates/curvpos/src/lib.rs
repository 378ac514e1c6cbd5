//! Spec parsing, bundle expression evaluation, certification reports and the
//! built-in check suites behind the `curvpos` command.

pub mod certify;
pub mod error;
pub mod expr;
pub mod report;
pub mod spec;
pub mod suite;

pub use certify::{certify, CertifyOptions};
pub use error::{exit, CliError, SpecError};
pub use report::Report;
pub use spec::{parse_spec, print_spec, Spec};
