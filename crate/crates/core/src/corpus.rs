//! Shipped realizations and certificates, plus file loading.

use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::certificates::{verify_bundle, CertificateBundle, CertificateError, VerifiedBound};
use crate::format::{
    parse_certificate, parse_coords, write_certificate, write_coords, CertificateDocument,
    FormatError,
};
use crate::geometry::PolygonalKnot;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Format { path: PathBuf, source: FormatError },
    #[error("unknown corpus knot {0:?}")]
    Unknown(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusEntry {
    pub knot: PolygonalKnot,
    pub certificate: Option<CertificateBundle>,
    pub claimed_sb: usize,
    pub source: String,
}

impl CorpusEntry {
    pub fn name(&self) -> &str {
        self.knot.name()
    }

    pub fn verify(&self) -> Option<Result<VerifiedBound, CertificateError>> {
        self.certificate
            .as_ref()
            .map(|b| verify_bundle(&self.knot, b))
    }
}

macro_rules! shipped {
    ($($name:literal => $cert:expr),* $(,)?) => {
        &[$(($name, include_str!(concat!("../../../data/", $name, ".coords")), $cert)),*]
    };
}

macro_rules! cert {
    ($name:literal) => {
        Some(include_str!(concat!("../../../data/", $name, ".cert")))
    };
}

type Shipped = (&'static str, &'static str, Option<&'static str>);

static SHIPPED: &[Shipped] = shipped! {
    "9_3" => cert!("9_3"),
    "9_4" => cert!("9_4"),
    "9_6" => cert!("9_6"),
    "9_9" => cert!("9_9"),
    "9_11" => cert!("9_11"),
    "9_13" => cert!("9_13"),
    "9_17" => cert!("9_17"),
    "9_18" => cert!("9_18"),
    "9_22" => cert!("9_22"),
    "9_23" => cert!("9_23"),
    "9_25" => cert!("9_25"),
    "9_27" => cert!("9_27"),
    "9_30" => cert!("9_30"),
    "9_31" => cert!("9_31"),
    "9_36" => cert!("9_36"),
    "11n_72" => None,
    "11n_77" => cert!("11n_77"),
    "12n_60" => cert!("12n_60"),
    "12n_66" => cert!("12n_66"),
    "12n_219" => cert!("12n_219"),
    "12n_225" => cert!("12n_225"),
    "12n_553" => None,
};

/// Shipped knot metadata, in the format read by [`crate::bounds::parse_metadata`].
pub const KNOT_METADATA: &str = include_str!("../../../data/knots.csv");

/// Value forced for the two certificate-free 11-stick realizations.
const SANDWICH_SB: usize = 5;

fn build(entry: &Shipped) -> CorpusEntry {
    let (name, coords, cert) = *entry;
    let knot = parse_coords(coords, name)
        .expect("shipped coordinates parse")
        .with_provenance("published-realization");
    match cert {
        Some(text) => {
            let doc = parse_certificate(text).expect("shipped certificate parses");
            CorpusEntry {
                knot,
                claimed_sb: doc.claim.expect("shipped certificates state a claim"),
                source: doc.source.unwrap_or_default(),
                certificate: Some(doc.bundle),
            }
        }
        None => CorpusEntry {
            knot,
            certificate: None,
            claimed_sb: SANDWICH_SB,
            source: "stick-bridge-sandwich".into(),
        },
    }
}

/// All shipped realizations, 9-crossing knots first.
pub fn corpus() -> Vec<CorpusEntry> {
    SHIPPED.iter().map(build).collect()
}

pub fn corpus_entry(name: &str) -> Result<CorpusEntry, CorpusError> {
    SHIPPED
        .iter()
        .find(|e| e.0 == name)
        .map(build)
        .ok_or_else(|| CorpusError::Unknown(name.to_string()))
}

/// The certificate document for a shipped knot, as text.
pub fn shipped_certificate_text(name: &str) -> Option<&'static str> {
    SHIPPED.iter().find(|e| e.0 == name).and_then(|e| e.2)
}

fn read(path: &Path) -> Result<String, CorpusError> {
    fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn format_error(path: &Path) -> impl FnOnce(FormatError) -> CorpusError + '_ {
    move |source| CorpusError::Format {
        path: path.to_path_buf(),
        source,
    }
}

/// Loads a coordinate file; the knot is named after the file stem.
pub fn load_realization(path: &Path) -> Result<PolygonalKnot, CorpusError> {
    let text = read(path)?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    Ok(parse_coords(&text, &name)
        .map_err(format_error(path))?
        .with_provenance(path.display().to_string()))
}

pub fn load_certificate_document(path: &Path) -> Result<CertificateDocument, CorpusError> {
    let text = read(path)?;
    parse_certificate(&text).map_err(format_error(path))
}

pub fn load_certificate(path: &Path) -> Result<CertificateBundle, CorpusError> {
    Ok(load_certificate_document(path)?.bundle)
}

pub fn save_realization(p: &PolygonalKnot, path: &Path) -> Result<(), CorpusError> {
    fs::write(path, write_coords(p)).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn save_certificate(doc: &CertificateDocument, path: &Path) -> Result<(), CorpusError> {
    fs::write(path, write_certificate(doc)).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })
}
