//! Problem bundles, query execution and deterministic reports for the
//! `movstab` tool.

pub mod bundle;
pub mod exec;
pub mod report;

pub use bundle::{parse_bundle, Bundle, Query, QuerySpec, SchemaError};
pub use exec::{run_bundle, run_query};
pub use report::{emit, emit_json, emit_text, parse_json, Format, Report};
