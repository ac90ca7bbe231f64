use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use movstab_cli::bundle::{parse_query, QuerySpec, SCHEMA_VERSION};
use movstab_cli::report::{ErrorClass, Report};
use movstab_cli::{emit, exec, parse_bundle, Bundle, Format, SchemaError};
use movstab_core::NsLattice;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "movstab", version, about = "Exact slope stability with respect to movable classes")]
struct Cli {
    /// Worker threads for parallel member evaluation (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

#[derive(Args)]
struct Common {
    /// Problem bundle (JSON, schema 1).
    bundle: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
}

#[derive(Subcommand)]
enum Command {
    /// Run every query of a bundle.
    Run {
        #[command(flatten)]
        common: Common,
        /// Only run queries with this command name.
        #[arg(long)]
        only: Option<String>,
    },
    /// Check a bundle against the schema without running it.
    Validate { bundle: PathBuf },
    /// Slope of the bundle's sheaf.
    Slope {
        #[command(flatten)]
        common: Common,
        #[arg(long, alias = "alpha")]
        at: String,
    },
    /// Semistability, stability and μ^max at a movable class.
    Stability {
        #[command(flatten)]
        common: Common,
        #[arg(long, alias = "alpha")]
        at: String,
    },
    /// Harder-Narasimhan filtration.
    Hn {
        #[command(flatten)]
        common: Common,
        #[arg(long, alias = "alpha")]
        at: String,
    },
    /// Jordan-Hölder filtration of a semistable sheaf.
    Jh {
        #[command(flatten)]
        common: Common,
        #[arg(long, alias = "alpha")]
        at: String,
    },
    /// Stable and semistable parameters along a segment of movable classes.
    Segment {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Wall functionals of the family.
    Walls {
        #[command(flatten)]
        common: Common,
    },
    /// Zariski decomposition of a pseudo-effective class.
    Zariski {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        divisor: String,
        /// JSON file with a list of curve classes, replacing the bundle's.
        #[arg(long)]
        curves: Option<PathBuf>,
    },
    /// Bogomolov-Gieseker verdict.
    Bgi {
        #[command(flatten)]
        common: Common,
        #[arg(long, alias = "at")]
        alpha: String,
    },
    /// Numeric flatness criterion on a surface.
    Flat {
        #[command(flatten)]
        common: Common,
        #[arg(long, alias = "at")]
        alpha: String,
    },
    /// Projective flatness criterion on a surface.
    Projflat {
        #[command(flatten)]
        common: Common,
        #[arg(long, alias = "at")]
        alpha: String,
    },
    /// Flatness gate from intersection numbers in dimension n.
    FlatHigher {
        #[arg(long)]
        n: u32,
        #[arg(long = "c1H", allow_hyphen_values = true)]
        c1_h: String,
        #[arg(long = "c1sqH", allow_hyphen_values = true)]
        c1sq_h: String,
        #[arg(long = "c2H", allow_hyphen_values = true)]
        c2_h: String,
        #[arg(long)]
        rank: Option<u32>,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
    },
    /// Torus quotient gate.
    TorusGate {
        #[arg(long)]
        n: u32,
        #[arg(long = "c2H", allow_hyphen_values = true)]
        c2_h: String,
        #[arg(long)]
        kx_trivial: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
    },
}

/// `"1, -1/2"`, `"(1,0)"` or `"[1 0]"` as a JSON list of rational strings.
fn class_arg(text: &str) -> Value {
    let inner = text.trim().trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
    Value::Array(
        inner
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| Value::String(s.to_string()))
            .collect(),
    )
}

fn schema_failure(e: &SchemaError) -> ExitCode {
    eprintln!("schema error: {e}");
    ExitCode::from(ErrorClass::Schema.exit_code() as u8)
}

fn load(path: &Path) -> Result<Bundle, SchemaError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| SchemaError::new("", format!("cannot read {}: {e}", path.display())))?;
    parse_bundle(&text)
}

fn finish(report: &Report, format: FormatArg) -> ExitCode {
    let format = match format {
        FormatArg::Json => Format::Json,
        FormatArg::Text => Format::Text,
    };
    print!("{}", emit(report, format));
    ExitCode::from(report.exit_code() as u8)
}

/// Runs one ad-hoc query against a bundle, ignoring the bundle's own queries.
fn single(common: &Common, query: Value) -> ExitCode {
    let bundle = match load(&common.bundle) {
        Ok(b) => b,
        Err(e) => return schema_failure(&e),
    };
    let spec = match parse_query(&bundle.lattice, 0, query) {
        Ok(s) => s,
        Err(e) => return schema_failure(&e),
    };
    let report = Report {
        schema: SCHEMA_VERSION,
        bundle: bundle.name.clone(),
        results: vec![exec::run_query(&bundle, &spec)],
    };
    finish(&report, common.format)
}

fn gate(query: Value, format: FormatArg) -> ExitCode {
    let unit = NsLattice::from_ints(&[&[1]], &[]).expect("unit lattice");
    let spec: QuerySpec = match parse_query(&unit, 0, query) {
        Ok(s) => s,
        Err(e) => return schema_failure(&e),
    };
    let result = exec::run_gate(&spec).expect("gate command");
    let report = Report { schema: SCHEMA_VERSION, bundle: String::new(), results: vec![result] };
    finish(&report, format)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("cannot configure thread pool: {e}");
            return ExitCode::from(1);
        }
    }
    match cli.command {
        Command::Run { common, only } => match load(&common.bundle) {
            Ok(b) => finish(&exec::run_bundle(&b, only.as_deref()), common.format),
            Err(e) => schema_failure(&e),
        },
        Command::Validate { bundle } => match load(&bundle) {
            Ok(b) => {
                println!("ok: {} queries", b.queries.len());
                ExitCode::SUCCESS
            }
            Err(e) => schema_failure(&e),
        },
        Command::Slope { common, at } => single(&common, json!({"cmd": "slope", "alpha": class_arg(&at)})),
        Command::Stability { common, at } => {
            single(&common, json!({"cmd": "stability", "alpha": class_arg(&at)}))
        }
        Command::Hn { common, at } => single(&common, json!({"cmd": "hn", "alpha": class_arg(&at)})),
        Command::Jh { common, at } => single(&common, json!({"cmd": "jh", "alpha": class_arg(&at)})),
        Command::Segment { common, from, to } => single(
            &common,
            json!({"cmd": "segment", "from": class_arg(&from), "to": class_arg(&to)}),
        ),
        Command::Walls { common } => single(&common, json!({"cmd": "walls"})),
        Command::Zariski { common, divisor, curves } => {
            let mut q = json!({"cmd": "zariski", "divisor": class_arg(&divisor)});
            if let Some(path) = curves {
                let parsed = std::fs::read_to_string(&path)
                    .map_err(|e| e.to_string())
                    .and_then(|t| serde_json::from_str::<Value>(&t).map_err(|e| e.to_string()));
                match parsed {
                    Ok(v) => q["curves"] = v,
                    Err(e) => {
                        return schema_failure(&SchemaError::new("--curves", e));
                    }
                }
            }
            single(&common, q)
        }
        Command::Bgi { common, alpha } => single(&common, json!({"cmd": "bgi", "alpha": class_arg(&alpha)})),
        Command::Flat { common, alpha } => single(&common, json!({"cmd": "flat", "alpha": class_arg(&alpha)})),
        Command::Projflat { common, alpha } => {
            single(&common, json!({"cmd": "projflat", "alpha": class_arg(&alpha)}))
        }
        Command::FlatHigher { n, c1_h, c1sq_h, c2_h, rank, format } => {
            let mut q = json!({"cmd": "flat_higher", "n": n, "c1H": c1_h, "c1sqH": c1sq_h, "c2H": c2_h});
            if let Some(r) = rank {
                q["rank"] = json!(r);
            }
            gate(q, format)
        }
        Command::TorusGate { n, c2_h, kx_trivial, format } => {
            gate(json!({"cmd": "torus_gate", "n": n, "c2H": c2_h, "kx_trivial": kx_trivial}), format)
        }
    }
}
