//! Command-line surface over the polyconvex library.
//!
//! Exit codes: 0 success, 2 invalid arguments, 3 computation error,
//! 4 undecided verdict under `--strict`. Errors go to standard error as a
//! single JSON object.

pub mod output;
pub mod parse;
pub mod sweep;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use polyconvex::analysis::{
    curve_analysis, maslov_index_algebraic, maslov_index_winding, subharmonicity_check, write_coincidences_csv,
    write_curve_csv,
};
use polyconvex::certify::{kallin_verify, KallinCase};
use polyconvex::convexity::{classify_surface_with, three_plane_decider, Status, SurfaceKind};
use polyconvex::invariants::compute_invariants;
use polyconvex::planes::{factor_cubic_preimage, family_normal_form, verify_pullback, CubicCoefficients};
use polyconvex::{Config, HermitianPoly, RealMatrix2};
use serde::Deserialize;
use serde_json::{json, Value};

pub use sweep::SweepReport;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_COMPUTATION: i32 = 3;
pub const EXIT_UNKNOWN: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "polyconvex", version, about = "Local polynomial convexity of totally-real plane unions and cubic CR-singular surfaces")]
pub struct Cli {
    /// Exit with code 4 when a reported verdict is Unknown.
    #[arg(long, global = true)]
    pub strict: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Surface {
    Cubic,
    Perturbed,
}

impl From<Surface> for SurfaceKind {
    fn from(s: Surface) -> Self {
        match s {
            Surface::Cubic => SurfaceKind::ExactCubic,
            Surface::Perturbed => SurfaceKind::Perturbed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Algebraic,
    Winding,
    Both,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify the surface w = p_t(z, z̄) or its perturbation.
    Classify {
        #[arg(long, value_parser = parse::parse_positive, allow_hyphen_values = true)]
        t: f64,
        #[arg(long, value_enum, default_value = "cubic")]
        surface: Surface,
        /// Emit the full classification as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Invariants and three-plane verdict for a matrix pair.
    Planes {
        /// JSON file {"a1": [[..],[..]], "a2": [[..],[..]]}.
        #[arg(long, conflicts_with = "t", required_unless_present = "t")]
        matrices: Option<PathBuf>,
        /// Use the preimage planes of p_t.
        #[arg(long, value_parser = parse::parse_positive, allow_hyphen_values = true)]
        t: Option<f64>,
    },
    /// Index of the CR singularity of a homogeneous polynomial.
    Maslov {
        /// Terms `z2zb:v,zzb2:v,zb3:v` and/or `m,n:re,im`.
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        #[arg(long, value_enum, default_value = "both")]
        method: Method,
        #[arg(long, default_value_t = 4096)]
        samples: usize,
        #[arg(long, default_value_t = 1.0, value_parser = parse::parse_positive)]
        radius: f64,
    },
    /// Boundary-curve coincidence analysis of p_t.
    Curve {
        #[arg(long, value_parser = parse::parse_finite, allow_hyphen_values = true)]
        t: f64,
        #[arg(long, default_value_t = 2)]
        j: u32,
        #[arg(long, default_value_t = 4096)]
        samples: usize,
        /// Write curve samples here and refined pairs next to it.
        #[arg(long)]
        emit_csv: Option<PathBuf>,
    },
    /// Subharmonicity of Re(p_t / z^(j-1)) on an annulus grid.
    Subharmonic {
        #[arg(long, value_parser = parse::parse_finite, allow_hyphen_values = true)]
        t: f64,
        #[arg(long)]
        j: u32,
        #[arg(long, value_delimiter = ',', default_value = "0.25,0.5,1,2", value_parser = parse::parse_positive)]
        radii: Vec<f64>,
        #[arg(long, default_value_t = 720)]
        angles: usize,
    },
    /// Sampled separation certificate for one of the four cases.
    Kallin {
        #[arg(long)]
        case: KallinCase,
        #[arg(long, value_parser = parse::parse_positive, allow_hyphen_values = true)]
        t: Option<f64>,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 1.0, value_parser = parse::parse_positive)]
        radius: f64,
    },
    /// Classify a grid of t values and locate status changes.
    Sweep {
        #[arg(long, value_parser = parse::parse_positive, allow_hyphen_values = true)]
        t_min: f64,
        #[arg(long, value_parser = parse::parse_positive, allow_hyphen_values = true)]
        t_max: f64,
        #[arg(long, value_parser = parse::parse_positive, allow_hyphen_values = true)]
        step: f64,
        #[arg(long, value_enum, default_value = "cubic")]
        surface: Surface,
        /// Also write the report to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Split a1 z²z̄ + a2 z z̄² + a3 z̄³ into three planes.
    Factor {
        #[arg(long, value_parser = parse::parse_complex, allow_hyphen_values = true)]
        a1: Complex64,
        #[arg(long, value_parser = parse::parse_complex, allow_hyphen_values = true)]
        a2: Complex64,
        #[arg(long, value_parser = parse::parse_complex, allow_hyphen_values = true)]
        a3: Complex64,
    },
}

/// A failed command: exit code, machine-readable kind, message.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub kind: String,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, kind: "InvalidArguments".into(), message: message.into() }
    }

    fn io(path: &Path, e: std::io::Error) -> Self {
        Self { code: EXIT_COMPUTATION, kind: "Io".into(), message: format!("{}: {e}", path.display()) }
    }
}

impl From<polyconvex::Error> for Failure {
    fn from(e: polyconvex::Error) -> Self {
        Self { code: EXIT_COMPUTATION, kind: e.kind().into(), message: e.to_string() }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Self { code: EXIT_COMPUTATION, kind: "Serialization".into(), message: e.to_string() }
    }
}

/// Rendered output plus whether any verdict in it is undecided.
struct Outcome {
    text: String,
    unknown: bool,
}

impl Outcome {
    fn json(v: Value) -> Self {
        Self { text: output::render_value(&v), unknown: false }
    }
}

#[derive(Deserialize)]
struct MatrixPair {
    a1: RealMatrix2,
    a2: RealMatrix2,
}

fn with_flag(mut v: Value, key: &str, flag: Value) -> Value {
    if let Value::Object(map) = &mut v {
        map.insert(key.into(), flag);
    }
    v
}

/// Sibling path `<stem>_coincidences.csv`.
fn coincidence_path(curve: &Path) -> PathBuf {
    let stem = curve.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "curve".into());
    curve.with_file_name(format!("{stem}_coincidences.csv"))
}

fn execute(cmd: Command) -> Result<Outcome, Failure> {
    let cfg = Config::default();
    match cmd {
        Command::Classify { t, surface, json } => {
            let c = classify_surface_with(t, surface.into(), &cfg)?;
            let unknown = c.verdict.status == Status::Unknown;
            let text = if json {
                output::render(&c)?
            } else {
                let index = c.maslov_index.map_or_else(|| "undefined".to_string(), |i| i.to_string());
                format!(
                    "t = {}  status = {:?}  criterion = {}  index = {index}\n",
                    output::format_f64(c.t),
                    c.verdict.status,
                    c.verdict.criterion
                )
            };
            Ok(Outcome { text, unknown })
        }
        Command::Planes { matrices, t } => {
            let (a1, a2) = match (matrices, t) {
                (Some(path), _) => {
                    let raw = fs::read_to_string(&path).map_err(|e| Failure::io(&path, e))?;
                    let pair: MatrixPair = serde_json::from_str(&raw)
                        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
                    if !(pair.a1.is_finite() && pair.a2.is_finite()) {
                        return Err(Failure::usage("matrix entries must be finite"));
                    }
                    (pair.a1, pair.a2)
                }
                (None, Some(t)) => {
                    let nf = family_normal_form(t)?;
                    (nf.a1, nf.a2)
                }
                (None, None) => return Err(Failure::usage("one of --matrices or --t is required")),
            };
            let verdict = three_plane_decider(&a1, &a2);
            let unknown = verdict.status == Status::Unknown;
            let v = json!({
                "a1": a1,
                "a2": a2,
                "invariants": compute_invariants(&a1, &a2),
                "verdict": verdict,
            });
            Ok(Outcome { text: output::render_value(&v), unknown })
        }
        Command::Maslov { poly, method, samples, radius } => {
            let p = parse::parse_poly(&poly).map_err(Failure::usage)?;
            let mut v = serde_json::Map::new();
            if matches!(method, Method::Algebraic | Method::Both) {
                v.insert("algebraic".into(), json!(maslov_index_algebraic(&p)?));
            }
            if matches!(method, Method::Winding | Method::Both) {
                v.insert("winding".into(), json!(maslov_index_winding(&p, radius, samples)?));
            }
            Ok(Outcome::json(Value::Object(v)))
        }
        Command::Curve { t, j, samples, emit_csv } => {
            let p = HermitianPoly::cubic_family(t);
            let analysis = curve_analysis(&p, j, samples)?;
            if let Some(path) = emit_csv {
                let file = fs::File::create(&path).map_err(|e| Failure::io(&path, e))?;
                write_curve_csv(&p, samples, std::io::BufWriter::new(file)).map_err(|e| Failure::io(&path, e))?;
                let pairs = coincidence_path(&path);
                let file = fs::File::create(&pairs).map_err(|e| Failure::io(&pairs, e))?;
                write_coincidences_csv(&analysis, std::io::BufWriter::new(file)).map_err(|e| Failure::io(&pairs, e))?;
            }
            Ok(Outcome::json(serde_json::to_value(&analysis)?))
        }
        Command::Subharmonic { t, j, radii, angles } => {
            let r = subharmonicity_check(&HermitianPoly::cubic_family(t), j, &radii, angles)?;
            Ok(Outcome::json(serde_json::to_value(&r)?))
        }
        Command::Kallin { case, t, samples, radius } => {
            let planes = case.default_instance(t)?;
            let r = kallin_verify(case, &planes, samples, radius)?;
            let v = with_flag(serde_json::to_value(&r)?, "passed", json!(r.passed()));
            Ok(Outcome::json(v))
        }
        Command::Sweep { t_min, t_max, step, surface, out } => {
            if t_max < t_min {
                return Err(Failure::usage(format!("--t-max {t_max} is below --t-min {t_min}")));
            }
            let report = sweep::sweep(t_min, t_max, step, surface.into(), &cfg)?;
            let unknown = report.entries.iter().any(|e| e.verdict.status == Status::Unknown);
            let text = output::render(&report)?;
            if let Some(path) = out {
                fs::write(&path, &text).map_err(|e| Failure::io(&path, e))?;
            }
            Ok(Outcome { text, unknown })
        }
        Command::Factor { a1, a2, a3 } => {
            let c = CubicCoefficients::new(a1, a2, a3);
            let planes = factor_cubic_preimage(&c)?;
            let v = json!({
                "planes": planes,
                "pullback_residual": verify_pullback(&c, &planes, 200, cfg.seed),
                "seed": cfg.seed,
            });
            Ok(Outcome::json(v))
        }
    }
}

/// Runs the CLI on `argv` (program name first); returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{}", e.render());
                return EXIT_OK;
            }
            let message = e.render().to_string();
            let _ = err.write_all(output::error_object("InvalidArguments", message.trim(), EXIT_USAGE).as_bytes());
            return EXIT_USAGE;
        }
    };
    let strict = cli.strict;
    match execute(cli.command) {
        Ok(outcome) => {
            if let Err(e) = out.write_all(outcome.text.as_bytes()) {
                let _ = err.write_all(output::error_object("Io", &e.to_string(), EXIT_COMPUTATION).as_bytes());
                return EXIT_COMPUTATION;
            }
            if strict && outcome.unknown {
                EXIT_UNKNOWN
            } else {
                EXIT_OK
            }
        }
        Err(f) => {
            let _ = err.write_all(output::error_object(&f.kind, &f.message, f.code).as_bytes());
            f.code
        }
    }
}
