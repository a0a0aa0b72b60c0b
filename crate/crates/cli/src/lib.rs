//! Command-line front end for `qshalg`: expression parsing, the example
//! pipelines and canonical JSON or text output.

pub mod app;
pub mod doc;
pub mod error;
pub mod parse;
pub mod pipelines;

pub use app::{run, Cli};
pub use doc::{emit, emit_json, emit_text, Format, ResultDocument};
pub use error::{CliError, ErrorKind};
pub use parse::{parse_expression, Kind, ParseError, Parsed};
