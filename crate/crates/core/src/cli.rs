//! Command-line front end.

use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::complex::{build_cubical_capped, build_simplicial, stats, CellComplex, CellId};
use crate::io::{
    field_file, parse_facets, parse_field_json, parse_grid, parse_off, parse_values_csv,
    CancellationJson, DecompositionJson, FieldFileError, ParseError, RepairJson, RouteJson,
};
use crate::morse::{
    extend_from_vertex_values, extend_with_boundary, simplify, validate_field, BoundaryField,
    GradientField, MorseFunction, VertexValues,
};
use crate::pathfind::{route_to_maximum, Cost};
use crate::regions::{morse_smale_with, repair_to_disks, DecomposeOptions};

/// Default and hard dimension caps.
pub const DIMENSION_CAP: usize = 6;
pub const DIMENSION_HARD_CAP: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Off,
    Grid,
    Facets,
    FieldJson,
}

impl Format {
    fn infer(path: &Path) -> Option<Format> {
        let name = path.file_name()?.to_str()?.to_ascii_lowercase();
        if name.ends_with(".off") {
            Some(Format::Off)
        } else if name.ends_with(".grid") {
            Some(Format::Grid)
        } else if name.ends_with(".facets") || name.ends_with(".txt") {
            Some(Format::Facets)
        } else if name.ends_with(".json") {
            Some(Format::FieldJson)
        } else {
            None
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "morse-regions",
    version,
    about = "Descending, ascending and Morse-Smale regions of discrete gradient fields"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Input complex: OFF mesh, facet list, grid raster or field JSON.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Input format; inferred from the extension when omitted.
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    /// Vertex values as CSV `vertex_id,value`.
    #[arg(long, global = true)]
    pub values: Option<PathBuf>,
    /// Process the boundary separately and report boundary-critical cells.
    #[arg(long, global = true)]
    pub boundary: bool,
    /// Also compute ascending regions and Morse-Smale labels.
    #[arg(long, global = true)]
    pub ascending: bool,
    /// Push merge points until descending regions are disks.
    #[arg(long, global = true)]
    pub repair: bool,
    /// Cancel critical pairs with value gap below the threshold.
    #[arg(long, global = true, value_name = "T")]
    pub simplify: Option<f64>,
    /// Route from a cell to a top-dimensional critical cell.
    #[arg(long, global = true, num_args = 2, value_names = ["START", "TARGET"])]
    pub route: Option<Vec<u32>>,
    /// Output file; standard output when omitted.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads for region construction (0 uses all cores).
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    /// Allow complexes above dimension 6 (up to 8).
    #[arg(long, global = true)]
    pub allow_high_dim: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Descending (and optionally ascending) regions as JSON.
    Decompose,
    /// Simplified field as field JSON.
    Simplify,
    /// Saddle-routed path between maxima.
    Route,
    /// Size profile of the complex and field.
    Stats,
    /// Checks the field and reports violations.
    Validate,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io {
        path: PathBuf,
        message: String,
    },
    Parse {
        path: PathBuf,
        error: ParseError,
    },
    Pipeline {
        kind: &'static str,
        message: String,
    },
    /// Validation found violations; the report is the output.
    Invalid(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Io { path, message } => write!(f, "{}: {message}", path.display()),
            CliError::Parse { path, error } => write!(f, "{}: {error}", path.display()),
            CliError::Pipeline { message, .. } => write!(f, "{message}"),
            CliError::Invalid(_) => write!(f, "field is not a valid gradient field"),
        }
    }
}

impl std::error::Error for CliError {}

#[derive(Serialize)]
struct ErrorJson<'a> {
    error: &'a str,
    message: String,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Parse { .. } | CliError::Io { .. } => 2,
            CliError::Pipeline { .. } | CliError::Invalid(_) => 1,
        }
    }

    /// Structured form for pipeline errors; plain text otherwise.
    pub fn render(&self) -> String {
        match self {
            CliError::Pipeline { kind, message } => serde_json::to_string(&ErrorJson {
                error: kind,
                message: message.clone(),
            })
            .unwrap(),
            CliError::Invalid(report) => report.clone(),
            other => format!("morse-regions: {other}"),
        }
    }
}

fn pipeline<E: fmt::Display>(kind: &'static str) -> impl Fn(E) -> CliError {
    move |e| CliError::Pipeline {
        kind,
        message: e.to_string(),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

/// Loaded input: the complex, a field when given, and vertex values.
struct Loaded {
    complex: CellComplex,
    field: Option<GradientField>,
    values: Option<VertexValues>,
}

fn load(cli: &Cli) -> Result<Loaded, CliError> {
    let path = cli
        .input
        .as_deref()
        .ok_or_else(|| CliError::Usage("--input is required".into()))?;
    let format = cli
        .format
        .or_else(|| Format::infer(path))
        .ok_or_else(|| CliError::Usage("cannot infer the input format; pass --format".into()))?;
    let text = read(path)?;
    let parse_err = |error| CliError::Parse {
        path: path.to_path_buf(),
        error,
    };
    let cap = if cli.allow_high_dim {
        DIMENSION_HARD_CAP
    } else {
        DIMENSION_CAP
    };
    let (complex, field, mut values) = match format {
        Format::Off | Format::Facets => {
            let facets = if format == Format::Off {
                parse_off(&text)
            } else {
                parse_facets(&text)
            }
            .map_err(parse_err)?;
            let k = build_simplicial(&facets).map_err(pipeline("complex"))?;
            (k, None, None)
        }
        Format::Grid => {
            let grid = parse_grid(&text).map_err(parse_err)?;
            let k = build_cubical_capped(&grid.extents, cap).map_err(pipeline("complex"))?;
            let vals = VertexValues::from_vertex_order(&k, &grid.values);
            (k, None, Some(vals))
        }
        Format::FieldJson => match parse_field_json(&text) {
            Ok((k, v)) => (k, Some(v), None),
            Err(FieldFileError::Parse(e)) => return Err(parse_err(e)),
            Err(FieldFileError::Complex(e)) => return Err(pipeline("complex")(e)),
            Err(FieldFileError::Field(e)) => return Err(pipeline("field")(e)),
        },
    };
    if complex.dimension() > cap {
        return Err(CliError::Pipeline {
            kind: "complex",
            message: format!(
                "complex has dimension {}, above the cap of {cap} (see --allow-high-dim)",
                complex.dimension()
            ),
        });
    }
    if let Some(vpath) = &cli.values {
        let rows = parse_values_csv(&read(vpath)?).map_err(|error| CliError::Parse {
            path: vpath.clone(),
            error,
        })?;
        values = Some(VertexValues::from_keys(&complex, rows));
    }
    Ok(Loaded {
        complex,
        field,
        values,
    })
}

/// Field of the input plus the boundary field when requested.
fn gradient(cli: &Cli, input: &Loaded) -> Result<(GradientField, Option<BoundaryField>), CliError> {
    let k = &input.complex;
    match (&input.field, &input.values) {
        (Some(v), _) if !cli.boundary => Ok((v.clone(), None)),
        (_, Some(vals)) if cli.boundary => {
            let (v, bf) = extend_with_boundary(k, vals).map_err(pipeline("extension"))?;
            if let Some(given) = &input.field {
                if given != &v {
                    return Err(CliError::Pipeline {
                        kind: "boundary",
                        message:
                            "--boundary recomputes the field from values; the given field differs"
                                .into(),
                    });
                }
            }
            Ok((v, Some(bf)))
        }
        (None, Some(vals)) => Ok((
            extend_from_vertex_values(k, vals).map_err(pipeline("extension"))?,
            None,
        )),
        (_, None) if cli.boundary => Err(CliError::Usage(
            "--boundary needs vertex values (--values or a grid input)".into(),
        )),
        (None, None) => Err(CliError::Usage(
            "no field and no vertex values: pass --values or a field JSON input".into(),
        )),
        _ => unreachable!(),
    }
}

fn function(input: &Loaded) -> Option<Result<MorseFunction, CliError>> {
    input.values.as_ref().map(|vals| {
        MorseFunction::from_vertex_max(&input.complex, vals).map_err(pipeline("values"))
    })
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).unwrap();
    s.push('\n');
    s
}

/// Runs one subcommand and returns its output text.
pub fn execute(cli: &Cli) -> Result<String, CliError> {
    if let Some(t) = cli.simplify {
        if t.is_nan() || t < 0.0 {
            return Err(CliError::Usage("--simplify threshold must be >= 0".into()));
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
        .map_err(pipeline("threads"))?;
    pool.install(|| execute_in_pool(cli))
}

fn execute_in_pool(cli: &Cli) -> Result<String, CliError> {
    let input = load(cli)?;
    let (mut v, mut bf) = gradient(cli, &input)?;
    let mut k = input.complex.clone();
    let mut cancelled = Vec::new();

    if let Some(t) = cli.simplify {
        if t > 0.0 {
            let f = function(&input).ok_or_else(|| {
                CliError::Usage("--simplify needs vertex values to order cancellations".into())
            })??;
            let out = simplify(&k, &v, t, &f);
            cancelled = out
                .cancelled
                .iter()
                .map(|&(u, l)| CancellationJson {
                    upper: u.0,
                    lower: l.0,
                })
                .collect();
            v = out.field;
            // A simplified field no longer extends the boundary field.
            bf = None;
        }
    }

    match cli.command {
        Command::Simplify => Ok(to_json(&field_file(&k, &v))),
        Command::Stats => Ok(to_json(&stats(&k, Some(&v)))),
        Command::Validate => {
            let report = validate_field(&k, &v);
            let text = to_json(&report);
            if report.is_ok() {
                Ok(text)
            } else {
                Err(CliError::Invalid(text))
            }
        }
        Command::Decompose | Command::Route => {
            let mut repair = None;
            if cli.repair {
                let added_before = k.len();
                let (k2, v2, report) = repair_to_disks(&k, &v, None).map_err(pipeline("repair"))?;
                repair = Some(RepairJson::new(&report, k2.len() - added_before));
                k = k2;
                v = v2;
                bf = None;
            }
            let options = DecomposeOptions {
                ascending: cli.ascending || cli.command == Command::Route,
                parallel: cli.threads != 1,
            };
            let decomp =
                morse_smale_with(&k, &v, bf.as_ref(), options).map_err(pipeline("regions"))?;
            if cli.command == Command::Route {
                let [start, target] = cli
                    .route
                    .as_deref()
                    .and_then(|r| r.try_into().ok())
                    .ok_or_else(|| {
                        CliError::Usage("route needs --route <START> <TARGET>".into())
                    })?;
                let f = if repair.is_none() {
                    function(&input).transpose()?
                } else {
                    None
                };
                let cost = f.as_ref().map_or(Cost::Hops, Cost::Height);
                let route = route_to_maximum(&k, &decomp, CellId(start), CellId(target), cost)
                    .map_err(pipeline("route"))?;
                return Ok(to_json(&RouteJson::from(&route)));
            }
            let mut json = DecompositionJson::new(&decomp, stats(&k, Some(&v)));
            json.cancelled = cancelled;
            json.repair = repair;
            Ok(to_json(&json))
        }
    }
}

/// Runs and writes the output; returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    let result = execute(cli).and_then(|text| match &cli.output {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io {
            path: path.clone(),
            message: e.to_string(),
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", e.render());
            e.exit_code()
        }
    }
}
