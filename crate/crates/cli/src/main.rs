//! `khb`: Khovanov-Lee invariants of braid closures from the command line.
//!
//! Results go to stdout as canonical JSON (sorted keys, exact rationals),
//! diagnostics to stderr. Exit codes: 0 success, 2 bad input, 3 resource
//! cap exceeded, 4 undetermined without a mirror normal form.

mod cache;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use khb_core::homology::Detail;
use khb_core::invariants::summarize_with_limit;
use khb_core::murasugi3::{classify3, Fallback};
use khb_core::registry::{CubeBackend, Registry, ScanBackend};
use khb_core::resolution::DEFAULT_CROSSING_LIMIT;
use khb_core::scanner::{ScanOptions, DEFAULT_OBJECT_CAP};
use khb_core::shapes::{enumerate_dt_shapes_with_cap, enumerate_upsilon_shapes_with_cap, DEFAULT_GENUS_CAP, DEFAULT_STRANDS_CAP};
use khb_core::{BraidWord, Error, FieldKind, MurasugiNF};

use cache::{Cache, ResultRecord};

#[derive(Parser)]
#[command(name = "khb", version, about = "Annular Khovanov-Lee invariants of braid closures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Khovanov homology dimensions of a braid closure.
    Kh(KhArgs),
    /// Writhe, components, self-linking, s, d_t and ψ of a braid closure.
    Invariants(InvariantsArgs),
    /// Catalog of possible d_t or Υ shapes.
    Shapes(ShapesArgs),
    /// s, d_t and ψ of a 3-braid from its Murasugi normal form.
    Classify3(Classify3Args),
}

#[derive(Args)]
struct KhArgs {
    /// Braid word such as "3: 1 -2 1".
    word: String,
    /// Backend name: cube or scan.
    #[arg(long, default_value = "cube")]
    backend: String,
    #[arg(long, value_enum, default_value_t = FieldArg::Q)]
    field: FieldArg,
    #[arg(long, value_enum, default_value_t = DetailArg::Ij)]
    detail: DetailArg,
    #[arg(long, default_value_t = DEFAULT_CROSSING_LIMIT)]
    max_crossings: usize,
    /// Object cap for the scan backend.
    #[arg(long, default_value_t = DEFAULT_OBJECT_CAP)]
    max_objects: usize,
    /// Scan by recursive halving instead of left to right.
    #[arg(long)]
    balanced: bool,
}

#[derive(Args)]
struct InvariantsArgs {
    word: String,
    /// Filtration-level solver: pivot-reduction or level-search.
    #[arg(long, default_value = "pivot-reduction")]
    solver: String,
    #[arg(long, default_value_t = DEFAULT_CROSSING_LIMIT)]
    max_crossings: usize,
}

#[derive(Args)]
struct ShapesArgs {
    /// Enumerate d_t shapes for braids on this many strands.
    #[arg(long, required_unless_present = "upsilon_genus", conflicts_with = "upsilon_genus")]
    strands: Option<usize>,
    /// Enumerate Υ shapes for this concordance genus.
    #[arg(long)]
    upsilon_genus: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_STRANDS_CAP)]
    max_strands: usize,
    #[arg(long, default_value_t = DEFAULT_GENUS_CAP)]
    max_genus: usize,
}

#[derive(Args)]
struct Classify3Args {
    /// Normal form such as "F2 d=1 m=-4" or "F1 d=0 a=1,2".
    nf: String,
    /// Normal form of the mirror braid, when known.
    #[arg(long)]
    mirror_nf: Option<String>,
    /// Compute s directly when the closed forms cannot decide.
    #[arg(long)]
    fallback: bool,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum FieldArg {
    Q,
    F2,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum DetailArg {
    I,
    Ij,
    Ijk,
}

/// A request reduced to its cache key parts and a way to compute it.
struct Job {
    operation: &'static str,
    input: String,
    parameters: Value,
    run: Box<dyn FnOnce() -> Result<Value, Error>>,
}

fn to_json<T: Serialize>(v: &T) -> Result<Value, Error> {
    serde_json::to_value(v).map_err(|e| Error::Internal(format!("serialization failed: {e}")))
}

fn job(command: Command) -> Result<Job, Error> {
    Ok(match command {
        Command::Kh(a) => {
            let w = BraidWord::parse(&a.word)?;
            let mut reg = Registry::empty();
            reg.register_backend(Box::new(CubeBackend {
                crossing_limit: a.max_crossings,
            }));
            reg.register_backend(Box::new(ScanBackend {
                options: ScanOptions {
                    object_cap: a.max_objects,
                    balanced: a.balanced,
                },
            }));
            // fail on an unknown name before touching the cache
            reg.backend(&a.backend)?;
            let field = match a.field {
                FieldArg::Q => FieldKind::Q,
                FieldArg::F2 => FieldKind::F2,
            };
            let detail = match a.detail {
                DetailArg::I => Detail::I,
                DetailArg::Ij => Detail::IJ,
                DetailArg::Ijk => Detail::IJK,
            };
            // the backend is left out of the key: every backend gives the same answer
            Job {
                operation: "kh",
                input: w.to_string(),
                parameters: json!({ "field": a.field, "detail": a.detail }),
                run: Box::new(move || to_json(&reg.backend(&a.backend)?.kh_dims(&w, field, detail)?)),
            }
        }
        Command::Invariants(a) => {
            let w = BraidWord::parse(&a.word)?;
            let reg = Registry::default();
            reg.solver(&a.solver)?;
            Job {
                operation: "invariants",
                input: w.to_string(),
                parameters: json!({}),
                run: Box::new(move || {
                    let solver = reg.solver(&a.solver)?;
                    to_json(&summarize_with_limit(&w, solver, a.max_crossings)?)
                }),
            }
        }
        Command::Shapes(a) => match (a.strands, a.upsilon_genus) {
            (Some(n), _) => Job {
                operation: "shapes",
                input: format!("strands={n}"),
                parameters: json!({}),
                run: Box::new(move || {
                    let set = enumerate_dt_shapes_with_cap(n, a.max_strands)?;
                    Ok(json!({ "kind": "dt", "strands": n, "count": set.len(), "shapes": to_json(&set)? }))
                }),
            },
            (None, Some(c)) => Job {
                operation: "shapes",
                input: format!("upsilon-genus={c}"),
                parameters: json!({}),
                run: Box::new(move || {
                    let set = enumerate_upsilon_shapes_with_cap(c, a.max_genus)?;
                    Ok(json!({ "kind": "upsilon", "genus": c, "count": set.len(), "shapes": to_json(&set)? }))
                }),
            },
            (None, None) => return Err(Error::Incompatible("give --strands or --upsilon-genus".into())),
        },
        Command::Classify3(a) => {
            let nf = MurasugiNF::parse(&a.nf)?;
            let mirror = a.mirror_nf.as_deref().map(MurasugiNF::parse).transpose()?;
            let fallback = if a.fallback { Fallback::Compute } else { Fallback::None };
            Job {
                operation: "classify3",
                input: nf.to_string(),
                parameters: json!({
                    "mirror_nf": mirror.as_ref().map(|m| m.to_string()),
                    "fallback": a.fallback,
                }),
                run: Box::new(move || to_json(&classify3(&nf, mirror.as_ref(), fallback)?)),
            }
        }
    })
}

fn execute(j: Job) -> Result<Value, Error> {
    let cache = Cache::from_env();
    let key = cache::key(j.operation, &j.input, &j.parameters);
    if let Some(rec) = cache.as_ref().and_then(|c| c.load(&key)) {
        return Ok(rec.output);
    }
    let start = Instant::now();
    let output = (j.run)()?;
    if let Some(c) = &cache {
        let rec = ResultRecord {
            input: j.input,
            operation: j.operation.to_string(),
            parameters: j.parameters,
            output: output.clone(),
            engine_version: env!("CARGO_PKG_VERSION").to_string(),
            elapsed_ms: start.elapsed().as_millis() as u64,
        };
        if let Err(e) = c.store(&rec) {
            eprintln!("warning: could not write cache entry: {e}");
        }
    }
    Ok(output)
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::LimitExceeded { .. } => 3,
        Error::Undetermined => 4,
        Error::Internal(_) | Error::NotACycle | Error::ZeroClass => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match job(cli.command).and_then(execute) {
        Ok(v) => {
            println!("{v}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
