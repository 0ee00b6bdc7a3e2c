//! The `sb` command line.
//!
//! Exit status: 0 on success, 1 when a computation fails (invalid
//! certificate, unreadable or degenerate input), 2 on usage errors.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::bounds::{parse_metadata, render_table, TableFormat, TableSubset};
use crate::certificates::{find_certificate, verify_bundle, CertificateBundle, FindOutcome};
use crate::corpus::{load_certificate_document, load_realization, CorpusError, KNOT_METADATA};
use crate::format::{write_certificate, write_coords, CertificateDocument};
use crate::geometry::{normalize_pose, quantize, PolygonalKnot, QUANTIZE_WARNING};
use crate::search::{search_with, write_candidates, EquilateralSampler, SearchConfig};
use crate::superbridge::superbridge_number;

/// Version of every `--json` document.
pub const JSON_SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "sb",
    about = "Exact superbridge numbers and certificates of polygonal knots"
)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Verify a certificate file.
    Verify {
        path: PathBuf,
        /// Add 1 to entry ROW,COL (1-based) before verifying.
        #[arg(long, value_name = "ROW,COL", num_args = 0..=1, default_missing_value = "1,1")]
        tamper: Option<String>,
    },
    /// Compute the exact superbridge number of a realization.
    Exact { path: PathBuf },
    /// Search for a certificate of sb <= floor(n/2) - 1.
    Find {
        path: PathBuf,
        /// Write the certificate document here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random equilateral search for low-superbridge polygons.
    Search(SearchArgs),
    /// Render the superbridge index table.
    Table {
        /// Metadata CSV (default: the shipped table).
        #[arg(long)]
        metadata: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
        #[arg(long, value_enum, default_value_t = SubsetArg::All)]
        subset: SubsetArg,
    },
    /// Put a realization in standard pose, or quantize it with --digits.
    Normalize {
        path: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
        /// Round to integers with this many significant digits.
        #[arg(long)]
        digits: Option<u32>,
    },
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[arg(long)]
    edges: usize,
    #[arg(long)]
    target: usize,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1.5)]
    radius: f64,
    #[arg(long, default_value_t = 2000)]
    screen_samples: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SubsetArg {
    All,
    Rolfsen,
    Exact,
}

enum CliError {
    Usage(String),
    Failure(String),
}

impl From<CorpusError> for CliError {
    fn from(e: CorpusError) -> Self {
        CliError::Failure(e.to_string())
    }
}

type Out<'a> = &'a mut (dyn Write + Send);

/// Runs `sb` with `argv` (including the program name).
pub fn run_cli<I, T>(argv: I, out: Out, err: Out) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    let result = match cli.jobs {
        Some(0) => Err(CliError::Usage("--jobs must be at least 1".into())),
        Some(j) => match rayon::ThreadPoolBuilder::new().num_threads(j).build() {
            Ok(pool) => pool.install(|| dispatch(&cli, out, err)),
            Err(e) => Err(CliError::Failure(e.to_string())),
        },
        None => dispatch(&cli, out, err),
    };
    match result {
        Ok(code) => code,
        Err(CliError::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_USAGE
        }
        Err(CliError::Failure(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_FAILURE
        }
    }
}

fn emit_json(out: Out, value: &Value) {
    let _ = writeln!(
        out,
        "{}",
        serde_json::to_string_pretty(value).expect("json")
    );
}

/// `path` itself if it is a file, otherwise `path` with `ext` appended.
fn resolve(path: &Path, ext: &str) -> PathBuf {
    if path.is_file() {
        return path.to_path_buf();
    }
    let mut s = path.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    let with_ext = PathBuf::from(s);
    if with_ext.is_file() {
        with_ext
    } else {
        path.to_path_buf()
    }
}

fn is_certificate(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "cert")
}

/// A realization from a coordinate file or from the vertices of a
/// certificate document.
fn load_knot(path: &Path) -> Result<PolygonalKnot, CliError> {
    let mut resolved = resolve(path, "coords");
    if !resolved.is_file() {
        resolved = resolve(path, "cert");
    }
    if is_certificate(&resolved) {
        Ok(load_certificate_document(&resolved)?.knot)
    } else {
        Ok(load_realization(&resolved)?)
    }
}

fn parse_tamper(spec: &str) -> Result<(usize, usize), CliError> {
    let bad = || {
        CliError::Usage(format!(
            "--tamper expects ROW,COL with 1-based indices, got {spec:?}"
        ))
    };
    let (r, c) = spec.split_once(',').ok_or_else(bad)?;
    let r: usize = r.trim().parse().map_err(|_| bad())?;
    let c: usize = c.trim().parse().map_err(|_| bad())?;
    if r == 0 || c == 0 {
        return Err(bad());
    }
    Ok((r - 1, c - 1))
}

fn dispatch(cli: &Cli, out: Out, err: Out) -> Result<i32, CliError> {
    match &cli.command {
        Command::Verify { path, tamper } => verify(path, tamper.as_deref(), cli.json, out),
        Command::Exact { path } => exact(path, cli.json, out),
        Command::Find { path, out: dest } => find(path, dest.as_deref(), cli.json, out),
        Command::Search(args) => search(args, cli.json, out),
        Command::Table {
            metadata,
            format,
            subset,
        } => table(metadata.as_deref(), *format, *subset, cli.json, out),
        Command::Normalize {
            path,
            tolerance,
            digits,
        } => normalize(path, *tolerance, *digits, cli.json, out, err),
    }
}

fn verify(path: &Path, tamper: Option<&str>, as_json: bool, out: Out) -> Result<i32, CliError> {
    let path = resolve(path, "cert");
    let mut doc = load_certificate_document(&path)?;
    if let Some(spec) = tamper {
        let (r, c) = parse_tamper(spec)?;
        let entry = doc.bundle.entry_mut(r, c).ok_or_else(|| {
            CliError::Usage(format!("--tamper {spec}: entry outside the certificate"))
        })?;
        *entry += BigInt::from(1);
    }
    let n = doc.knot.len();
    let name = doc.knot.name().to_string();
    let result = verify_bundle(&doc.knot, &doc.bundle);
    if as_json {
        let mut v = json!({
            "schema_version": JSON_SCHEMA_VERSION,
            "knot": name,
            "n": n,
            "claim": doc.claim,
            "verified": result.is_ok(),
        });
        match &result {
            Ok(b) => v["value"] = json!(b.certified_upper),
            Err(e) => v["error"] = json!(e.to_string()),
        }
        emit_json(out, &v);
    }
    match result {
        Ok(bound) => {
            if !as_json {
                let _ = writeln!(out, "{name}: {bound}");
            }
            if let Some(claim) = doc.claim {
                if claim != bound.certified_upper {
                    return Err(CliError::Failure(format!(
                        "{name}: document claims sb ≤ {claim} but the certificate gives sb ≤ {}",
                        bound.certified_upper
                    )));
                }
            }
            Ok(EXIT_OK)
        }
        Err(e) => Err(CliError::Failure(format!("{name}: {e}"))),
    }
}

fn exact(path: &Path, as_json: bool, out: Out) -> Result<i32, CliError> {
    let knot = load_knot(path)?;
    let result = superbridge_number(&knot).map_err(|e| CliError::Failure(e.to_string()))?;
    if as_json {
        let histogram: serde_json::Map<String, Value> = result
            .histogram
            .iter()
            .map(|(d, c)| (d.to_string(), json!(c)))
            .collect();
        emit_json(
            out,
            &json!({
                "schema_version": JSON_SCHEMA_VERSION,
                "knot": knot.name(),
                "n": knot.len(),
                "verified": true,
                "value": result.value,
                "witness": result.witness_direction.vector().to_string(),
                "patterns": result.pattern_count,
                "histogram": histogram,
            }),
        );
    } else {
        let _ = writeln!(out, "knot: {}", knot.name());
        let _ = writeln!(out, "n: {}", knot.len());
        let _ = writeln!(out, "superbridge: {}", result.value);
        let _ = writeln!(out, "witness: {}", result.witness_direction);
        let _ = writeln!(out, "patterns: {}", result.pattern_count);
        for (d, c) in &result.histogram {
            let _ = writeln!(out, "  descents {d}: {c}");
        }
    }
    Ok(EXIT_OK)
}

fn find(path: &Path, dest: Option<&Path>, as_json: bool, out: Out) -> Result<i32, CliError> {
    let knot = load_knot(path)?;
    let n = knot.len();
    match find_certificate(&knot) {
        FindOutcome::Certified(bundle) => {
            let doc = CertificateDocument {
                claim: Some(n / 2 - 1),
                source: Some("solver".into()),
                knot: knot.clone(),
                bundle,
            };
            let text = write_certificate(&doc);
            if let Some(dest) = dest {
                std::fs::write(dest, &text)
                    .map_err(|e| CliError::Failure(format!("{}: {e}", dest.display())))?;
            }
            if as_json {
                emit_json(
                    out,
                    &json!({
                        "schema_version": JSON_SCHEMA_VERSION,
                        "knot": knot.name(),
                        "n": n,
                        "claim": n / 2 - 1,
                        "verified": true,
                        "certificate": bundle_json(&doc.bundle),
                    }),
                );
            } else if dest.is_none() {
                let _ = write!(out, "{text}");
            } else {
                let _ = writeln!(out, "{}: certified sb ≤ {}", knot.name(), n / 2 - 1);
            }
        }
        FindOutcome::JinBoundAttained(ev) => {
            if as_json {
                emit_json(
                    out,
                    &json!({
                        "schema_version": JSON_SCHEMA_VERSION,
                        "knot": knot.name(),
                        "n": n,
                        "verified": false,
                        "value": n / 2,
                        "witness": ev.direction.to_string(),
                        "shift": ev.shift,
                        "pattern": ev.pattern.to_string(),
                    }),
                );
            } else {
                let _ = writeln!(
                    out,
                    "{}: no certificate; sb = {} is attained",
                    knot.name(),
                    n / 2
                );
                if let Some(j) = ev.shift {
                    let _ = writeln!(out, "shift: {j}");
                }
                let _ = writeln!(out, "pattern: {}", ev.pattern);
                let _ = writeln!(out, "witness: {}", ev.direction);
            }
        }
    }
    Ok(EXIT_OK)
}

fn bundle_json(b: &CertificateBundle) -> Value {
    let ints = |v: &[BigInt]| v.iter().map(ToString::to_string).collect::<Vec<_>>();
    match b {
        CertificateBundle::Even(u) => json!({ "u": ints(u) }),
        CertificateBundle::Odd { layout, .. } => json!({
            "layout": layout.as_str(),
            "U": b.rows().iter().map(|r| ints(r)).collect::<Vec<_>>(),
        }),
    }
}

fn search(args: &SearchArgs, as_json: bool, out: Out) -> Result<i32, CliError> {
    let cfg = SearchConfig {
        n: args.edges,
        target: args.target,
        samples: args.samples,
        seed: args.seed,
        confinement_radius: args.radius,
        screen_samples: args.screen_samples,
    };
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let mut candidates = Vec::new();
    let stats = search_with(&cfg, &EquilateralSampler, |c| {
        if !as_json {
            let _ = writeln!(out, "{} sb = {}", c.knot.name(), c.exact_sb);
        }
        candidates.push(c);
    })
    .map_err(|e| CliError::Failure(e.to_string()))?;
    if let Some(dir) = &args.out {
        write_candidates(dir, &cfg, &candidates, stats)
            .map_err(|e| CliError::Failure(e.to_string()))?;
    }
    if as_json {
        emit_json(
            out,
            &json!({
                "schema_version": JSON_SCHEMA_VERSION,
                "config": cfg,
                "stats": stats,
                "candidates": candidates.iter().map(|c| json!({
                    "knot": c.knot.name(),
                    "n": c.knot.len(),
                    "value": c.exact_sb,
                    "certified": c.certificate.is_some(),
                    "coordinates": write_coords(&c.knot),
                })).collect::<Vec<_>>(),
            }),
        );
    } else {
        let _ = writeln!(
            out,
            "generated {} screened {} confirmed {}",
            stats.generated, stats.screened, stats.confirmed
        );
    }
    Ok(EXIT_OK)
}

fn table(
    metadata: Option<&Path>,
    format: FormatArg,
    subset: SubsetArg,
    as_json: bool,
    out: Out,
) -> Result<i32, CliError> {
    let text = match metadata {
        Some(p) => std::fs::read_to_string(p)
            .map_err(|e| CliError::Failure(format!("{}: {e}", p.display())))?,
        None => KNOT_METADATA.to_string(),
    };
    let records = parse_metadata(&text).map_err(|e| CliError::Failure(e.to_string()))?;
    let format = match (as_json, format) {
        (true, _) | (_, FormatArg::Json) => TableFormat::Json,
        (_, FormatArg::Csv) => TableFormat::Csv,
        (_, FormatArg::Text) => TableFormat::Text,
    };
    let subset = match subset {
        SubsetArg::All => TableSubset::All,
        SubsetArg::Rolfsen => TableSubset::Rolfsen,
        SubsetArg::Exact => TableSubset::Exact,
    };
    let doc =
        render_table(&records, format, subset).map_err(|e| CliError::Failure(e.to_string()))?;
    let _ = write!(out, "{doc}");
    Ok(EXIT_OK)
}

fn normalize(
    path: &Path,
    tolerance: f64,
    digits: Option<u32>,
    as_json: bool,
    out: Out,
    err: Out,
) -> Result<i32, CliError> {
    let knot = load_knot(path)?;
    if let Some(d) = digits {
        let q = quantize(&knot, d).map_err(|e| CliError::Failure(e.to_string()))?;
        let _ = writeln!(err, "{QUANTIZE_WARNING}");
        if as_json {
            emit_json(
                out,
                &json!({
                    "schema_version": JSON_SCHEMA_VERSION,
                    "knot": knot.name(),
                    "n": knot.len(),
                    "scale": crate::number::format_rational(&q.scale),
                    "coordinates": write_coords(&q.knot),
                }),
            );
        } else {
            let _ = write!(out, "{}", write_coords(&q.knot));
        }
        return Ok(EXIT_OK);
    }
    let pose = normalize_pose(&knot, tolerance).map_err(|e| CliError::Failure(e.to_string()))?;
    if as_json {
        emit_json(
            out,
            &json!({
                "schema_version": JSON_SCHEMA_VERSION,
                "knot": knot.name(),
                "n": knot.len(),
                "vertices": pose.vertices,
            }),
        );
    } else {
        let _ = writeln!(out, "# {}: standard pose", knot.name());
        for v in &pose.vertices {
            let _ = writeln!(out, "{} {} {}", v[0], v[1], v[2]);
        }
    }
    Ok(EXIT_OK)
}
