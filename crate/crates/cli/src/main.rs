//! `tilesys` command-line front end.
//!
//! Exit codes: 0 success, 1 usage, 2 validation or malformed input, 3 resource cap,
//! 4 inconclusive within the given bounds. JSON goes to stdout, diagnostics to stderr.

mod render;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use tilesys::analysis::{
    code_radius_profile, enumerate_patches, local_admissibility, period_bound_report, recognizability_radius, stabilization,
};
use tilesys::format::{self, ScalarJson};
use tilesys::groups::{relative_orientation_group, subgroup_relation};
use tilesys::metric::{metric_from_complexes, patch_metric};
use tilesys::tiling::{boundary_complex, check_patch, supertile, validate_system, DEFAULT_TILE_CAP};
use tilesys::{Error, Patch, TilingSystem};

#[derive(Parser)]
#[command(name = "tilesys", version, about = "Exact substitution tilings and their invariants")]
#[command(args_conflicts_with_subcommands = true, allow_negative_numbers = true)]
struct Cli {
    /// Compact single-line JSON instead of pretty printing.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a level-n supertile and write it as a patch file.
    Generate {
        /// Catalog name (penrose, fibonacci, square, pinwheel:m,n) or system file.
        system: String,
        /// Prototile name or index.
        prototile: String,
        level: Option<i64>,
        #[arg(long = "level", id = "level_flag")]
        level_flag: Option<i64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_TILE_CAP)]
        cap: usize,
    },
    /// Draw a patch file as SVG.
    Render {
        patch: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0.02)]
        stroke: f64,
        #[arg(long)]
        no_fill: bool,
        #[arg(long)]
        no_marks: bool,
    },
    /// Validate a system (exact cover, primitivity) or a patch file.
    Validate {
        target: String,
        /// Levels searched for a parallel same-type return.
        #[arg(long, default_value_t = 12)]
        level: usize,
    },
    /// Run an analysis and print a JSON report
    #[command(subcommand)]
    Analyze(Analyze),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    level: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_TILE_CAP)]
    cap: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Analyze {
    /// Count r-ball patch types in level supertiles.
    Patches {
        system: String,
        #[arg(short = 'r', long)]
        radius: f64,
        /// Also enumerate one level deeper and report whether the count is stable.
        #[arg(long)]
        compare_next: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Non-identity periods of the inscribed-ball patch of a supertile.
    Periods {
        system: String,
        #[arg(long, default_value = "0")]
        prototile: String,
        /// Largest displacement searched, as a fraction of the ball radius.
        #[arg(long, default_value_t = 0.5)]
        ratio: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Predecessor sets and their stabilization for every prototile.
    Predecessors {
        system: String,
        /// Depth of the occurrence search, in levels.
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Recognizability radius by the doubling ladder.
    Recognize {
        system: String,
        #[command(flatten)]
        common: Common,
    },
    /// Certified tiling metric between two patch files about the origin.
    Metric {
        a: PathBuf,
        b: PathBuf,
        #[arg(long = "R", default_value_t = 3.0)]
        horizon: f64,
        #[arg(long, default_value_t = 1e-6)]
        eps: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Relative orientation group, optionally compared with another system's.
    Group {
        system: String,
        #[arg(long)]
        compare: Option<String>,
        #[arg(short = 'r', long, default_value_t = 0.3)]
        radius: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Whether every r-ball patch of a patch file occurs in the system.
    Admissible {
        patch: PathBuf,
        #[arg(short = 'r', long)]
        radius: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Empirical sliding-block radii of the substitution code.
    Code {
        system: String,
        #[arg(long, value_delimiter = ',', default_value = "1,2,4")]
        n_prime: Vec<f64>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
}

/// A failure with its exit code.
struct Fail {
    code: u8,
    msg: String,
}

impl Fail {
    fn new(code: u8, msg: impl Into<String>) -> Fail {
        Fail { code, msg: msg.into() }
    }
}

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        let code = match e {
            Error::InvalidArgument(_) => 1,
            Error::ResourceLimit(_) => 3,
            _ => 2,
        };
        Fail::new(code, e.to_string())
    }
}

impl From<std::io::Error> for Fail {
    fn from(e: std::io::Error) -> Fail {
        Fail::new(2, e.to_string())
    }
}

type Out = std::result::Result<(Value, bool), Fail>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let compact = cli.json;
    match run(cli.command) {
        Ok((value, conclusive)) => {
            let text = if compact { value.to_string() } else { serde_json::to_string_pretty(&value).expect("json") };
            println!("{text}");
            if conclusive {
                ExitCode::SUCCESS
            } else {
                eprintln!("inconclusive within the given bounds");
                ExitCode::from(4)
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn load_system(name_or_path: &str) -> Result<TilingSystem, Fail> {
    Ok(format::load_system(name_or_path)?)
}

fn load_patch(path: &Path) -> Result<(TilingSystem, Patch), Fail> {
    let text = std::fs::read_to_string(path).map_err(|e| Fail::new(2, format!("{}: {e}", path.display())))?;
    let (sys, patch) = format::read_patch(&text)?;
    check_patch(&sys, &patch)?;
    Ok((sys, patch))
}

fn prototile_index(sys: &TilingSystem, name: &str) -> Result<usize, Fail> {
    if let Some(p) = sys.prototiles.iter().find(|p| p.name == name) {
        return Ok(p.id);
    }
    match name.parse::<usize>() {
        Ok(i) if i < sys.prototiles.len() => Ok(i),
        _ => {
            let names: Vec<&str> = sys.prototiles.iter().map(|p| p.name.as_str()).collect();
            Err(Fail::new(1, format!("unknown prototile {name:?}; expected one of {names:?} or an index")))
        }
    }
}

/// Default analysis level: the deepest with at most `budget` tiles in the largest supertile.
fn default_level(sys: &TilingSystem, budget: f64, min: usize) -> usize {
    let grow = sys.lambda_f64().powi(match sys.dim {
        tilesys::tiling::Dimension::One => 1,
        tilesys::tiling::Dimension::Two => 2,
    });
    let mut level = 0;
    while grow.powi(level as i32 + 1) <= budget {
        level += 1;
    }
    level.max(min)
}

/// Writes `value` to `out` when given and echoes it on stdout either way.
fn emit(value: Value, out: &Option<PathBuf>, conclusive: bool) -> Out {
    if let Some(path) = out {
        std::fs::write(path, serde_json::to_string_pretty(&value).expect("json") + "\n")?;
    }
    Ok((value, conclusive))
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn run(cmd: Command) -> Out {
    match cmd {
        Command::Generate { system, prototile, level, level_flag, out, cap } => {
            let level = match (level, level_flag) {
                (Some(a), Some(b)) if a != b => return Err(Fail::new(1, "conflicting levels")),
                (Some(a), _) | (None, Some(a)) => a,
                (None, None) => return Err(Fail::new(1, "a level is required")),
            };
            let level = usize::try_from(level).map_err(|_| Fail::new(1, format!("level must be non-negative, got {level}")))?;
            let sys = load_system(&system)?;
            let proto = prototile_index(&sys, &prototile)?;
            let patch = supertile(&sys, proto, level, cap)?;
            let path = out.unwrap_or_else(|| {
                let stem: String = sys.name.chars().map(|c| if c.is_ascii_alphanumeric() { c } else { '_' }).collect();
                PathBuf::from(format!("{stem}-{}-{level}.json", sys.prototiles[proto].name.replace(['+', '-'], "")))
            });
            std::fs::write(&path, format::write_patch(&sys, &patch)?)?;
            let area = sys.patch_measure(&patch);
            Ok((
                json!({
                    "system": sys.name,
                    "prototile": sys.prototiles[proto].name,
                    "level": level,
                    "tiles": patch.len(),
                    "area": ScalarJson::from_scalar(&area),
                    "area_approx": area.to_f64(),
                    "out": path.display().to_string(),
                }),
                true,
            ))
        }
        Command::Render { patch, out, stroke, no_fill, no_marks } => {
            let (sys, p) = load_patch(&patch)?;
            let opts = render::RenderOptions { stroke, fill: !no_fill, marks: !no_marks };
            let svg = render::render_svg(&sys, &p, &opts);
            std::fs::write(&out, &svg)?;
            Ok((json!({"system": sys.name, "tiles": p.len(), "out": out.display().to_string()}), true))
        }
        Command::Validate { target, level } => {
            let path = Path::new(&target);
            let is_patch = path.exists()
                && std::fs::read_to_string(path)
                    .ok()
                    .and_then(|t| serde_json::from_str::<Value>(&t).ok())
                    .is_some_and(|v| v.get("tiles").is_some());
            let (sys, patch_tiles) = if is_patch {
                let (sys, p) = load_patch(path)?;
                (sys, Some(p.len()))
            } else {
                (load_system(&target)?, None)
            };
            let report = validate_system(&sys, level);
            let valid = report.is_valid();
            let value = json!({"system": sys.name, "valid": valid, "patch_tiles": patch_tiles, "report": to_value(&report)});
            if !valid {
                println!("{}", serde_json::to_string_pretty(&value).expect("json"));
                return Err(Fail::new(2, format!("system {} failed validation", sys.name)));
            }
            Ok((value, true))
        }
        Command::Analyze(a) => analyze(a),
    }
}

fn analyze(cmd: Analyze) -> Out {
    match cmd {
        Analyze::Patches { system, radius, compare_next, common } => {
            let sys = load_system(&system)?;
            let level = common.level.unwrap_or_else(|| default_level(&sys, 700.0, 2));
            let lib = enumerate_patches(&sys, radius, level, common.cap)?;
            let mut v = json!({"system": sys.name, "radius": radius, "level": level, "report": to_value(&lib)});
            let mut conclusive = true;
            if compare_next {
                let next = enumerate_patches(&sys, radius, level + 1, common.cap)?;
                conclusive = next.patches == lib.patches;
                v["next_level_count"] = json!(next.count);
                v["stable"] = json!(conclusive);
            }
            emit(v, &common.out, conclusive)
        }
        Analyze::Periods { system, prototile, ratio, common } => {
            let sys = load_system(&system)?;
            let proto = prototile_index(&sys, &prototile)?;
            let level = common.level.unwrap_or(3);
            let report = period_bound_report(&sys, proto, &[level], ratio, common.cap)?;
            emit(json!({"system": sys.name, "level": level, "tolerance": 1e-9, "report": to_value(&report)}), &common.out, true)
        }
        Analyze::Predecessors { system, depth, common } => {
            let sys = load_system(&system)?;
            let n_max = common.level.unwrap_or(4);
            let mut rows = Vec::new();
            let mut conclusive = true;
            for t in 0..sys.prototiles.len() {
                let s = stabilization(&sys, t, n_max, depth, common.cap)?;
                conclusive &= s.stabilized_at.is_some() && s.depth_certified;
                let mut row = to_value(&s);
                row["prototile"] = json!(sys.prototiles[t].name);
                rows.push(row);
            }
            emit(json!({"system": sys.name, "n_max": n_max, "depth": depth, "prototiles": rows}), &common.out, conclusive)
        }
        Analyze::Recognize { system, common } => {
            let sys = load_system(&system)?;
            let level = common.level.unwrap_or(4);
            let report = recognizability_radius(&sys, level, common.cap)?;
            let found = report.radius.is_some();
            emit(json!({"system": sys.name, "level": level, "report": to_value(&report)}), &common.out, found)
        }
        Analyze::Metric { a, b, horizon, eps, out } => {
            let (sa, pa) = load_patch(&a)?;
            let (sb, pb) = load_patch(&b)?;
            if format::write_system(&sa)? != format::write_system(&sb)? {
                return Err(Fail::new(2, "patches belong to different systems"));
            }
            // Patches that do not cover the horizon ball are compared as finite boundary sets.
            let (m, covers) = match patch_metric(&sa, &pa, &pb, horizon, eps) {
                Ok(m) => (m, true),
                Err(Error::InvalidArgument(msg)) if msg.contains("support radius") && horizon >= 1.0 && eps > 0.0 => {
                    eprintln!("warning: {msg}; comparing the finite patch boundaries");
                    (metric_from_complexes(&boundary_complex(&sa, &pa), &boundary_complex(&sa, &pb), horizon, eps), false)
                }
                Err(e) => return Err(e.into()),
            };
            let mut v = to_value(&m.value);
            v["support_covers_horizon"] = json!(covers);
            v["system"] = json!(sa.name);
            v["horizon"] = json!(horizon);
            v["eps"] = json!(eps);
            v["horizon_limited"] = json!(m.horizon_limited);
            v["terms"] = to_value(&m.terms);
            emit(v, &out, true)
        }
        Analyze::Group { system, compare, radius, common } => {
            let sys = load_system(&system)?;
            let level = common.level.unwrap_or_else(|| default_level(&sys, 700.0, 2));
            let (g, report) = relative_orientation_group(&sys, radius, level, common.cap)?;
            let mut v = json!({"system": sys.name, "abstract_type": g.abstract_type(), "report": to_value(&report)});
            if let Some(other) = compare {
                let sys2 = load_system(&other)?;
                let level2 = common.level.unwrap_or_else(|| default_level(&sys2, 700.0, 2));
                let (h, report2) = relative_orientation_group(&sys2, radius, level2, common.cap)?;
                let rel = subgroup_relation(&g, &h)?;
                let mut r = to_value(&rel);
                r["equal"] = json!(matches!(rel, tilesys::groups::SubgroupRelation::Equal));
                r["first"] = json!(sys.name);
                r["second"] = json!(sys2.name);
                v["compare"] = json!({"system": sys2.name, "abstract_type": h.abstract_type(), "report": to_value(&report2)});
                v["relation"] = r;
            }
            emit(v, &common.out, true)
        }
        Analyze::Admissible { patch, radius, common } => {
            let (sys, p) = load_patch(&patch)?;
            let level = common.level.unwrap_or_else(|| default_level(&sys, 700.0, 2));
            let lib = enumerate_patches(&sys, radius, level, common.cap)?;
            let report = local_admissibility(&sys, &p, radius, &lib)?;
            emit(
                json!({"system": sys.name, "radius": radius, "library_level": level, "library_count": lib.count, "report": to_value(&report)}),
                &common.out,
                true,
            )
        }
        Analyze::Code { system, n_prime, samples, seed, common } => {
            let sys = load_system(&system)?;
            let level = common.level.unwrap_or(4);
            let profile = code_radius_profile(&sys, &n_prime, samples, seed, level)?;
            let ok = profile.monotone && profile.rows.iter().all(|r| r.violations == 0);
            emit(json!({"system": sys.name, "report": to_value(&profile)}), &common.out, ok)
        }
    }
}
