//! Model file format, reports and the `skt` command line.

mod commands;
mod model_file;
mod report;

pub use commands::{
    analyze, identities, load_model, parse_two_form, run, CatalogAction, Cli, Command, FormatArg,
    Outcome, ScytArg, ROUTE_TOL,
};
pub use model_file::{
    format_scalar, parse_model_text, parse_scalar, rational_from_f64, ComplexSpec, MetricSpec,
    ModelFile,
};
pub use report::{format_real, Check, Format, Report, Status};
