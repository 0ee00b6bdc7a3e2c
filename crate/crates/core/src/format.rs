//! Text formats for coordinate and certificate files.
//!
//! A coordinate file has one vertex per line, three whitespace-separated
//! numbers (integers, `p/q`, or decimals). Lines starting with `#` are
//! comments.
//!
//! A certificate document is a sequence of `key: value` fields:
//!
//! ```text
//! knot: 9_22
//! parity: even
//! claim: 4
//! vertices:
//! 0 0 0
//! ...
//! u: 107029574 1 1 ...
//! ```
//!
//! Odd documents replace `u:` with `U:` followed by `n` rows of `n` integers
//! (row `r` holds entry `r` of every column) and may carry
//! `layout: rotated | aligned` (default `aligned`).

use std::fmt::Write as _;

use num_bigint::BigInt;
use thiserror::Error;

use crate::certificates::{BundleLayout, CertificateBundle};
use crate::geometry::{GeometryError, PolygonalKnot};
use crate::number::{format_rational, parse_rational, Vec3};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("certificate shape mismatch: {0}")]
    DimensionMismatch(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

fn parse_err(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Parse {
        line,
        message: message.into(),
    }
}

fn significant(line: &str) -> Option<&str> {
    let t = line.trim();
    if t.is_empty() || t.starts_with('#') {
        None
    } else {
        Some(t)
    }
}

fn parse_vertex(text: &str, line: usize) -> Result<Vec3, FormatError> {
    let fields: Vec<&str> = text.split_whitespace().collect();
    if fields.len() != 3 {
        return Err(parse_err(
            line,
            format!("expected 3 coordinates, found {}", fields.len()),
        ));
    }
    let mut coords = Vec::with_capacity(3);
    for f in fields {
        coords.push(parse_rational(f).ok_or_else(|| parse_err(line, format!("bad number {f:?}")))?);
    }
    let z = coords.pop().unwrap();
    let y = coords.pop().unwrap();
    let x = coords.pop().unwrap();
    Ok(Vec3::new(x, y, z))
}

/// Parses a coordinate file into a knot called `name`.
pub fn parse_coords(text: &str, name: &str) -> Result<PolygonalKnot, FormatError> {
    let mut vertices = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        if let Some(t) = significant(raw) {
            vertices.push(parse_vertex(t, i + 1)?);
        }
    }
    Ok(PolygonalKnot::new(name, vertices, "coordinate file")?)
}

pub fn write_coords(p: &PolygonalKnot) -> String {
    let mut out = format!("# {}: {}-stick realization\n", p.name(), p.len());
    push_vertices(&mut out, p);
    out
}

fn push_vertices(out: &mut String, p: &PolygonalKnot) {
    for v in p.vertices() {
        let _ = writeln!(
            out,
            "{} {} {}",
            format_rational(v.x()),
            format_rational(v.y()),
            format_rational(v.z())
        );
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: usize) -> Self {
        if n.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateDocument {
    pub knot: PolygonalKnot,
    /// The bound the document claims, `sb <= claim`.
    pub claim: Option<usize>,
    pub source: Option<String>,
    pub bundle: CertificateBundle,
}

fn parse_ints(text: &str, line: usize) -> Result<Vec<BigInt>, FormatError> {
    text.split_whitespace()
        .map(|t| {
            let digits = t.strip_prefix(['-', '+']).unwrap_or(t);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(parse_err(line, format!("bad integer {t:?}")));
            }
            t.parse::<BigInt>()
                .map_err(|_| parse_err(line, format!("bad integer {t:?}")))
        })
        .collect()
}

enum Block {
    None,
    Vertices,
    Vector,
    Matrix,
}

pub fn parse_certificate(text: &str) -> Result<CertificateDocument, FormatError> {
    let mut name: Option<String> = None;
    let mut parity: Option<(Parity, usize)> = None;
    let mut claim = None;
    let mut source = None;
    let mut layout = None;
    let mut vertices = Vec::new();
    let mut vector: Option<Vec<BigInt>> = None;
    let mut rows: Option<Vec<(usize, Vec<BigInt>)>> = None;
    let mut block = Block::None;
    let mut last_line = 0;

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last_line = line;
        let Some(t) = significant(raw) else { continue };
        if let Some((key, value)) = t.split_once(':') {
            let key = key.trim();
            let value = value.trim();
            block = Block::None;
            match key {
                "knot" => name = Some(value.to_string()),
                "parity" => {
                    let p = match value {
                        "even" => Parity::Even,
                        "odd" => Parity::Odd,
                        _ => return Err(parse_err(line, format!("unknown parity {value:?}"))),
                    };
                    parity = Some((p, line));
                }
                "claim" => {
                    claim = Some(
                        value
                            .parse::<usize>()
                            .map_err(|_| parse_err(line, format!("bad claim {value:?}")))?,
                    )
                }
                "source" => source = Some(value.to_string()),
                "layout" => {
                    layout = Some(
                        BundleLayout::parse(value)
                            .ok_or_else(|| parse_err(line, format!("unknown layout {value:?}")))?,
                    )
                }
                "vertices" => {
                    if !value.is_empty() {
                        return Err(parse_err(line, "vertex list starts on the next line"));
                    }
                    block = Block::Vertices;
                }
                "u" => {
                    vector = Some(parse_ints(value, line)?);
                    block = Block::Vector;
                }
                "U" => {
                    if !value.is_empty() {
                        return Err(parse_err(line, "matrix rows start on the next line"));
                    }
                    rows = Some(Vec::new());
                    block = Block::Matrix;
                }
                _ => return Err(parse_err(line, format!("unknown field {key:?}"))),
            }
            continue;
        }
        match block {
            Block::Vertices => vertices.push(parse_vertex(t, line)?),
            Block::Vector => vector
                .as_mut()
                .expect("vector block")
                .extend(parse_ints(t, line)?),
            Block::Matrix => rows
                .as_mut()
                .expect("matrix block")
                .push((line, parse_ints(t, line)?)),
            Block::None => return Err(parse_err(line, "data outside a field")),
        }
    }

    let eof = last_line.max(1);
    let name = name.ok_or_else(|| parse_err(eof, "missing knot field"))?;
    if vertices.is_empty() {
        return Err(parse_err(eof, "missing vertices"));
    }
    let knot = PolygonalKnot::new(name, vertices, source.clone().unwrap_or_default())?;
    let n = knot.len();
    if let Some((p, line)) = parity {
        if p != Parity::of(n) {
            return Err(parse_err(
                line,
                format!("parity {} does not match {n} vertices", p.as_str()),
            ));
        }
    }

    let bundle = match (vector, rows) {
        (Some(_), Some(_)) => return Err(parse_err(eof, "both u and U present")),
        (None, None) => return Err(parse_err(eof, "missing u or U")),
        (Some(u), None) => {
            if Parity::of(n) != Parity::Even {
                return Err(FormatError::DimensionMismatch(format!(
                    "single vector for {n} (odd) vertices"
                )));
            }
            if u.len() != n {
                return Err(FormatError::DimensionMismatch(format!(
                    "u has {} entries, expected {n}",
                    u.len()
                )));
            }
            CertificateBundle::Even(u)
        }
        (None, Some(rows)) => {
            if Parity::of(n) != Parity::Odd {
                return Err(FormatError::DimensionMismatch(format!(
                    "matrix for {n} (even) vertices"
                )));
            }
            if rows.len() < n {
                return Err(parse_err(
                    eof,
                    format!("truncated matrix: {} of {n} rows", rows.len()),
                ));
            }
            if rows.len() > n {
                return Err(FormatError::DimensionMismatch(format!(
                    "U has {} rows, expected {n}",
                    rows.len()
                )));
            }
            if let Some((line, r)) = rows.iter().find(|(_, r)| r.len() != n) {
                return Err(FormatError::DimensionMismatch(format!(
                    "line {line}: row has {} entries, expected {n}",
                    r.len()
                )));
            }
            let rows: Vec<Vec<BigInt>> = rows.into_iter().map(|(_, r)| r).collect();
            CertificateBundle::odd_from_rows(&rows, layout.unwrap_or(BundleLayout::Aligned))
        }
    };

    Ok(CertificateDocument {
        knot,
        claim,
        source,
        bundle,
    })
}

pub fn write_certificate(doc: &CertificateDocument) -> String {
    let n = doc.knot.len();
    let mut out = format!("# superbridge certificate for {}\n", doc.knot.name());
    let _ = writeln!(out, "knot: {}", doc.knot.name());
    let _ = writeln!(out, "parity: {}", Parity::of(n).as_str());
    if let Some(c) = doc.claim {
        let _ = writeln!(out, "claim: {c}");
    }
    if let Some(s) = &doc.source {
        let _ = writeln!(out, "source: {s}");
    }
    out.push_str("vertices:\n");
    push_vertices(&mut out, &doc.knot);
    let join = |v: &[BigInt]| {
        v.iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(" ")
    };
    match &doc.bundle {
        CertificateBundle::Even(u) => {
            let _ = writeln!(out, "u: {}", join(u));
        }
        CertificateBundle::Odd { layout, .. } => {
            let _ = writeln!(out, "layout: {}", layout.as_str());
            out.push_str("U:\n");
            for row in doc.bundle.rows() {
                let _ = writeln!(out, "{}", join(&row));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Degeneracy;

    const SQUARE: &str = "# unit square\n0 0 0\n1 0 0\n\n1 1 0\n0 1 0\n";

    #[test]
    fn coords_round_trip() {
        let p = parse_coords(SQUARE, "square").unwrap();
        assert_eq!(p.len(), 4);
        let again = parse_coords(&write_coords(&p), "square").unwrap();
        assert_eq!(again.vertices(), p.vertices());
        let q = parse_coords("0 0 0\n1/2 0 0\n0.25 1 -3e-1\n", "t").unwrap();
        assert_eq!(q.vertices()[2].to_string(), "(1/4, 1, -3/10)");
    }

    #[test]
    fn coords_errors_carry_lines() {
        assert_eq!(
            parse_coords("0 0 0\n1 0\n", "x"),
            Err(parse_err(2, "expected 3 coordinates, found 2"))
        );
        assert!(matches!(
            parse_coords("# c\n0 0 0\n1 0 x\n", "x"),
            Err(FormatError::Parse { line: 3, .. })
        ));
        assert_eq!(
            parse_coords("0 0 0\n1 0 0\n1 0 0\n0 1 0\n", "x"),
            Err(FormatError::Geometry(GeometryError::DegeneratePolygon(
                Degeneracy::RepeatedVertex(1)
            )))
        );
    }

    #[test]
    fn certificate_round_trip() {
        let text =
            "knot: sq\nparity: even\nclaim: 1\nvertices:\n0 0 0\n1 0 0\n1 1 0\n0 1 0\nu: 1 0 1 0\n";
        let doc = parse_certificate(text).unwrap();
        assert_eq!(
            doc.bundle,
            CertificateBundle::Even(vec![1.into(), 0.into(), 1.into(), 0.into()])
        );
        assert_eq!(parse_certificate(&write_certificate(&doc)).unwrap(), doc);

        let odd =
            "knot: t\nvertices:\n0 0 0\n1 0 0\n0 1 0\nlayout: rotated\nU:\n1 2 3\n4 5 6\n7 8 9\n";
        let doc = parse_certificate(odd).unwrap();
        assert_eq!(doc.bundle.entry(0, 2), Some(&BigInt::from(3)));
        assert_eq!(doc.bundle.entry(2, 0), Some(&BigInt::from(7)));
        assert_eq!(parse_certificate(&write_certificate(&doc)).unwrap(), doc);
    }

    #[test]
    fn certificate_errors() {
        let head = "knot: t\nvertices:\n0 0 0\n1 0 0\n0 1 0\nU:\n";
        assert!(matches!(
            parse_certificate(&format!("{head}1 2 3\n4 5 6\n")),
            Err(FormatError::Parse { .. })
        ));
        assert!(matches!(
            parse_certificate(&format!("{head}1 2 3\n4 5\n7 8 9\n")),
            Err(FormatError::DimensionMismatch(_))
        ));
        assert!(matches!(
            parse_certificate("knot: t\nvertices:\n0 0 0\n1 0 0\n0 1 0\nu: 1 1 1\n"),
            Err(FormatError::DimensionMismatch(_))
        ));
        assert!(matches!(
            parse_certificate("knot: t\nparity: even\nvertices:\n0 0 0\n1 0 0\n0 1 0\nU:\n"),
            Err(FormatError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_certificate("bogus: 1\n"),
            Err(FormatError::Parse { line: 1, .. })
        ));
    }
}
