//! Random-ensemble search for low-superbridge realizations.
//!
//! Polygons are drawn by a [`Sampler`], quantized to integer coordinates,
//! screened by direction sampling and confirmed by exact enumeration. Each
//! polygon index gets its own ChaCha stream, so results do not depend on
//! the number of worker threads.

use std::fs;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::certificates::{find_certificate, CertificateBundle};
use crate::format::{write_certificate, write_coords, CertificateDocument};
use crate::geometry::{quantize_with_scale, PolygonalKnot};
use crate::number::{rational, Rational, Vec3};
use crate::superbridge::{sampled_lower_bound, superbridge_number};

/// Rejection attempts before [`SearchError::RetryExhausted`].
pub const MAX_ATTEMPTS: usize = 1_000_000;

/// Integer coordinates are unit-edge coordinates times this.
pub const COORDINATE_SCALE: i64 = 1000;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("no acceptable polygon after {0} attempts")]
    RetryExhausted(usize),
    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchConfig {
    pub n: usize,
    pub target: usize,
    /// Number of polygons to generate.
    pub samples: usize,
    pub seed: u64,
    /// Maximum vertex distance from the centroid, in edge lengths.
    pub confinement_radius: f64,
    pub screen_samples: usize,
}

impl SearchConfig {
    pub fn validate(&self) -> Result<(), SearchError> {
        let bad = |m: String| Err(SearchError::InvalidConfig(m));
        if self.n < 3 {
            return bad(format!("n = {} is below 3", self.n));
        }
        if self.target > self.n / 2 {
            return bad(format!(
                "target {} exceeds floor(n/2) = {}",
                self.target,
                self.n / 2
            ));
        }
        if self.confinement_radius.is_nan()
            || self.confinement_radius <= 0.0
            || !self.confinement_radius.is_finite()
        {
            return bad("confinement radius must be positive".into());
        }
        if self.screen_samples == 0 {
            return bad("screen_samples must be at least 1".into());
        }
        Ok(())
    }
}

/// Source of closed polygons in floating point.
pub trait Sampler: Sync {
    /// One attempt; `None` means the draw was rejected.
    fn attempt(&self, n: usize, radius: f64, rng: &mut ChaCha8Rng) -> Option<Vec<[f64; 3]>>;
}

/// Gaussian unit edges closed by repeatedly subtracting the mean edge and
/// renormalizing, then rejected unless every vertex lies within the
/// confinement radius of the centroid.
#[derive(Debug, Clone, Copy, Default)]
pub struct EquilateralSampler;

const CLOSURE_ROUNDS: usize = 200;
const CLOSURE_TOL: f64 = 1e-12;

fn norm(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

impl Sampler for EquilateralSampler {
    fn attempt(&self, n: usize, radius: f64, rng: &mut ChaCha8Rng) -> Option<Vec<[f64; 3]>> {
        let mut edges: Vec<[f64; 3]> = (0..n)
            .map(|_| [0; 3].map(|_| StandardNormal.sample(rng)))
            .collect();
        let mut closed = false;
        for _ in 0..CLOSURE_ROUNDS {
            for e in edges.iter_mut() {
                let l = norm(*e);
                if l < 1e-9 {
                    return None;
                }
                *e = e.map(|x| x / l);
            }
            let mut mean = [0.0; 3];
            for e in &edges {
                for k in 0..3 {
                    mean[k] += e[k] / n as f64;
                }
            }
            if norm(mean) * (n as f64) < CLOSURE_TOL {
                closed = true;
                break;
            }
            for e in edges.iter_mut() {
                for k in 0..3 {
                    e[k] -= mean[k];
                }
            }
        }
        if !closed {
            return None;
        }
        let mut vertices = Vec::with_capacity(n);
        let mut at = [0.0; 3];
        for e in &edges {
            vertices.push(at);
            for k in 0..3 {
                at[k] += e[k];
            }
        }
        let mut c = [0.0; 3];
        for v in &vertices {
            for k in 0..3 {
                c[k] += v[k] / n as f64;
            }
        }
        let ok = vertices
            .iter()
            .all(|v| norm([v[0] - c[0], v[1] - c[1], v[2] - c[2]]) <= radius);
        ok.then_some(vertices)
    }
}

fn to_integer_polygon(vertices: &[[f64; 3]]) -> Option<PolygonalKnot> {
    let exact: Option<Vec<Vec3>> = vertices
        .iter()
        .map(|v| {
            let c = v.map(Rational::from_float);
            let [x, y, z] = c;
            Some(Vec3::new(x?, y?, z?))
        })
        .collect();
    let p = PolygonalKnot::new("candidate", exact?, "equilateral-sampler").ok()?;
    let q = quantize_with_scale(&p, &rational(COORDINATE_SCALE)).ok()?;
    Some(q.knot)
}

/// Draws until the sampler accepts and the quantized polygon is
/// nondegenerate.
pub fn sample_polygon(
    sampler: &dyn Sampler,
    n: usize,
    radius: f64,
    rng: &mut ChaCha8Rng,
) -> Result<PolygonalKnot, SearchError> {
    for _ in 0..MAX_ATTEMPTS {
        if let Some(p) = sampler
            .attempt(n, radius, rng)
            .and_then(|v| to_integer_polygon(&v))
        {
            return Ok(p);
        }
    }
    Err(SearchError::RetryExhausted(MAX_ATTEMPTS))
}

/// A random equilateral `n`-gon with unit edges scaled to integer
/// coordinates by [`COORDINATE_SCALE`].
pub fn random_equilateral_polygon(
    n: usize,
    confinement_radius: f64,
    rng: &mut ChaCha8Rng,
) -> Result<PolygonalKnot, SearchError> {
    if n < 3 {
        return Err(SearchError::InvalidConfig(format!("n = {n} is below 3")));
    }
    sample_polygon(&EquilateralSampler, n, confinement_radius, rng)
}

/// RNG for polygon `index` of a run seeded with `seed`.
pub fn polygon_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn screen_seed(seed: u64, index: u64) -> u64 {
    seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub index: u64,
    pub knot: PolygonalKnot,
    pub exact_sb: usize,
    /// Present whenever `exact_sb < floor(n/2)`.
    pub certificate: Option<CertificateBundle>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub generated: usize,
    /// Polygons that passed the sampling screen.
    pub screened: usize,
    pub confirmed: usize,
}

const CHUNK: usize = 256;

/// Runs a search, calling `emit` for each candidate in index order.
pub fn search_with(
    cfg: &SearchConfig,
    sampler: &dyn Sampler,
    mut emit: impl FnMut(Candidate),
) -> Result<SearchStats, SearchError> {
    cfg.validate()?;
    let mut stats = SearchStats::default();
    let mut start = 0;
    while start < cfg.samples {
        let end = (start + CHUNK).min(cfg.samples);
        let screened: Vec<Result<Option<(u64, PolygonalKnot)>, SearchError>> = (start..end)
            .into_par_iter()
            .map(|i| {
                let i = i as u64;
                let mut rng = polygon_rng(cfg.seed, i);
                let p = sample_polygon(sampler, cfg.n, cfg.confinement_radius, &mut rng)?
                    .with_name(format!("candidate_{i:06}"));
                let lb = sampled_lower_bound(&p, cfg.screen_samples, screen_seed(cfg.seed, i));
                Ok((lb <= cfg.target).then_some((i, p)))
            })
            .collect();
        for item in screened {
            stats.generated += 1;
            let Some((index, knot)) = item? else { continue };
            stats.screened += 1;
            let exact = superbridge_number(&knot)
                .expect("sampled polygons are nondegenerate")
                .value;
            if exact <= cfg.target {
                stats.confirmed += 1;
                let certificate = if exact < cfg.n / 2 {
                    find_certificate(&knot).bundle().cloned()
                } else {
                    None
                };
                emit(Candidate {
                    index,
                    knot,
                    exact_sb: exact,
                    certificate,
                });
            }
        }
        start = end;
    }
    Ok(stats)
}

pub fn search(cfg: &SearchConfig) -> Result<(Vec<Candidate>, SearchStats), SearchError> {
    let mut out = Vec::new();
    let stats = search_with(cfg, &EquilateralSampler, |c| out.push(c))?;
    Ok((out, stats))
}

#[derive(Serialize)]
struct ManifestEntry {
    index: u64,
    file: String,
    certificate: Option<String>,
    exact_sb: usize,
}

#[derive(Serialize)]
struct Manifest<'a> {
    schema_version: u32,
    config: &'a SearchConfig,
    stats: SearchStats,
    candidates: Vec<ManifestEntry>,
}

/// Writes one coordinate file per candidate (plus a certificate file when
/// present) and `manifest.json` into `dir`.
pub fn write_candidates(
    dir: &Path,
    cfg: &SearchConfig,
    candidates: &[Candidate],
    stats: SearchStats,
) -> Result<(), SearchError> {
    let io = |path: &Path| {
        let path = path.display().to_string();
        move |source| SearchError::Io { path, source }
    };
    fs::create_dir_all(dir).map_err(io(dir))?;
    let mut entries = Vec::new();
    for c in candidates {
        let file = format!("{}.coords", c.knot.name());
        let path = dir.join(&file);
        fs::write(&path, write_coords(&c.knot)).map_err(io(&path))?;
        let certificate = match &c.certificate {
            Some(bundle) => {
                let cert_file = format!("{}.cert", c.knot.name());
                let doc = CertificateDocument {
                    knot: c.knot.clone(),
                    claim: Some(c.knot.len() / 2 - 1),
                    source: Some("search".into()),
                    bundle: bundle.clone(),
                };
                let path = dir.join(&cert_file);
                fs::write(&path, write_certificate(&doc)).map_err(io(&path))?;
                Some(cert_file)
            }
            None => None,
        };
        entries.push(ManifestEntry {
            index: c.index,
            file,
            certificate,
            exact_sb: c.exact_sb,
        });
    }
    let manifest = Manifest {
        schema_version: 1,
        config: cfg,
        stats,
        candidates: entries,
    };
    let path = dir.join("manifest.json");
    let text = serde_json::to_string_pretty(&manifest).expect("serializable") + "\n";
    fs::write(&path, text).map_err(io(&path))
}

/// Float edge lengths of a polygon, for invariant checks.
pub fn edge_lengths(p: &PolygonalKnot) -> Vec<f64> {
    p.edges().iter().map(|e| norm(e.to_f64())).collect()
}

/// Max vertex distance from the centroid, in the polygon's own units.
pub fn confinement(p: &PolygonalKnot) -> f64 {
    let vs: Vec<[f64; 3]> = p.vertices().iter().map(Vec3::to_f64).collect();
    let n = vs.len() as f64;
    let mut c = [0.0; 3];
    for v in &vs {
        for k in 0..3 {
            c[k] += v[k] / n;
        }
    }
    vs.iter()
        .map(|v| norm([v[0] - c[0], v[1] - c[1], v[2] - c[2]]))
        .fold(0.0, f64::max)
}
