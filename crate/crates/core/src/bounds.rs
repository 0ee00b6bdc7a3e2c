//! Superbridge index intervals from knot metadata.
//!
//! Lower bounds come from the bridge index (`sb > b`), the Jeon–Jin
//! theorem (`sb >= 4` outside a short exception list) and known exact
//! values; upper bounds from Jin's stick bound `sb <= stick / 2`, certified
//! realizations and known exact values.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Knots that may have superbridge index 3.
pub const JEON_JIN_EXCEPTIONS: [&str; 11] = [
    "3_1", "4_1", "5_2", "6_1", "6_2", "6_3", "7_2", "7_3", "7_4", "8_4", "8_9",
];

pub fn is_jeon_jin_exception(name: &str) -> bool {
    JEON_JIN_EXCEPTIONS.contains(&name)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("{0}: no upper bound available")]
    NoUpperBoundAvailable(String),
    #[error("{name}: lower bound {lo} ({lo_from}) exceeds upper bound {hi} ({hi_from})")]
    InconsistentRecord {
        name: String,
        lo: u32,
        lo_from: &'static str,
        hi: u32,
        hi_from: &'static str,
    },
    #[error("metadata line {line}: {message}")]
    Metadata { line: u64, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct KnotRecord {
    pub name: String,
    pub bridge_index: Option<u32>,
    pub stick_upper: Option<u32>,
    pub is_trivial: bool,
    pub jeon_jin_exception: bool,
    pub certified_upper: Option<u32>,
    pub known_exact: Option<u32>,
    /// Opaque citation tags, space separated.
    pub citation: String,
}

impl KnotRecord {
    pub fn new(name: impl Into<String>) -> Self {
        let name = name.into();
        KnotRecord {
            jeon_jin_exception: is_jeon_jin_exception(&name),
            is_trivial: name == "0_1",
            name,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BoundInterval {
    pub lo: u32,
    pub hi: u32,
}

impl BoundInterval {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }
}

impl fmt::Display for BoundInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact() {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "[{},{}]", self.lo, self.hi)
        }
    }
}

fn lower_with_source(r: &KnotRecord) -> (u32, &'static str) {
    if r.is_trivial {
        return (1, "trivial knot");
    }
    let mut best = (3, "nontrivial knot");
    let bridge = r.bridge_index.unwrap_or(2) + 1;
    if bridge > best.0 {
        best = (bridge, "bridge index");
    }
    if !r.jeon_jin_exception && best.0 < 4 {
        best = (4, "Jeon-Jin");
    }
    if let Some(e) = r.known_exact {
        if e > best.0 {
            best = (e, "known exact value");
        }
    }
    best
}

pub fn lower_bound(r: &KnotRecord) -> u32 {
    lower_with_source(r).0
}

fn upper_with_source(r: &KnotRecord) -> Option<(u32, &'static str)> {
    [
        r.stick_upper.map(|s| (s / 2, "stick number")),
        r.certified_upper.map(|c| (c, "certified realization")),
        r.known_exact.map(|e| (e, "known exact value")),
    ]
    .into_iter()
    .flatten()
    .min_by_key(|b| b.0)
}

pub fn upper_bound(r: &KnotRecord) -> Result<u32, BoundsError> {
    if r.is_trivial {
        return Ok(1);
    }
    upper_with_source(r)
        .map(|b| b.0)
        .ok_or_else(|| BoundsError::NoUpperBoundAvailable(r.name.clone()))
}

pub fn interval(r: &KnotRecord) -> Result<BoundInterval, BoundsError> {
    let (lo, lo_from) = lower_with_source(r);
    let (hi, hi_from) = if r.is_trivial {
        (1, "trivial knot")
    } else {
        upper_with_source(r).ok_or_else(|| BoundsError::NoUpperBoundAvailable(r.name.clone()))?
    };
    if lo > hi {
        return Err(BoundsError::InconsistentRecord {
            name: r.name.clone(),
            lo,
            lo_from,
            hi,
            hi_from,
        });
    }
    Ok(BoundInterval { lo, hi })
}

/// `10_124` → `(10, 0, 124)`, `11a_367` → `(11, 1, 367)`, `12n_60` → `(12, 2, 60)`.
fn name_key(name: &str) -> Option<(u32, u8, u64)> {
    let (head, index) = name.split_once('_')?;
    let (digits, family) = match head.as_bytes().last()? {
        b'a' => (&head[..head.len() - 1], 1),
        b'n' => (&head[..head.len() - 1], 2),
        _ => (head, 0),
    };
    Some((digits.parse().ok()?, family, index.parse().ok()?))
}

/// Standard table order: crossing number, then alternating before
/// non-alternating, then index. Unrecognized names sort last.
pub fn compare_knot_names(a: &str, b: &str) -> Ordering {
    match (name_key(a), name_key(b)) {
        (Some(x), Some(y)) => x.cmp(&y).then_with(|| a.cmp(b)),
        (Some(_), None) => Ordering::Less,
        (None, Some(_)) => Ordering::Greater,
        (None, None) => a.cmp(b),
    }
}

pub fn crossing_number(name: &str) -> Option<u32> {
    name_key(name).map(|k| k.0)
}

#[derive(Debug, Deserialize)]
struct Row {
    name: String,
    bridge_index: Option<u32>,
    stick_upper: Option<u32>,
    trivial_flag: String,
    jeon_jin_flag: String,
    certified_upper: Option<u32>,
    known_exact: Option<u32>,
    #[serde(default)]
    citation: String,
}

fn parse_flag(s: &str, line: u64, field: &str) -> Result<bool, BoundsError> {
    match s.trim() {
        "true" => Ok(true),
        "false" | "" => Ok(false),
        other => Err(BoundsError::Metadata {
            line,
            message: format!("{field}: expected true or false, got {other:?}"),
        }),
    }
}

/// Reads metadata CSV with header
/// `name,bridge_index,stick_upper,trivial_flag,jeon_jin_flag,certified_upper,known_exact,citation`.
pub fn parse_metadata(text: &str) -> Result<Vec<KnotRecord>, BoundsError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| BoundsError::Metadata {
        line: 1,
        message: e.to_string(),
    })?;
    if headers.get(0) != Some("name") {
        return Err(BoundsError::Metadata {
            line: 1,
            message: "missing header row".into(),
        });
    }
    let mut out = Vec::new();
    for row in reader.deserialize::<Row>() {
        let row = row.map_err(|e| BoundsError::Metadata {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = out.len() as u64 + 2;
        let jeon_jin = parse_flag(&row.jeon_jin_flag, line, "jeon_jin_flag")?;
        if jeon_jin != is_jeon_jin_exception(&row.name) {
            return Err(BoundsError::Metadata {
                line,
                message: format!(
                    "{}: jeon_jin_flag disagrees with the exception list",
                    row.name
                ),
            });
        }
        if row.bridge_index == Some(0) {
            return Err(BoundsError::Metadata {
                line,
                message: "bridge_index must be positive".into(),
            });
        }
        if matches!(row.stick_upper, Some(s) if s < 3) {
            return Err(BoundsError::Metadata {
                line,
                message: "stick_upper must be at least 3".into(),
            });
        }
        out.push(KnotRecord {
            is_trivial: parse_flag(&row.trivial_flag, line, "trivial_flag")?,
            jeon_jin_exception: jeon_jin,
            name: row.name,
            bridge_index: row.bridge_index,
            stick_upper: row.stick_upper,
            certified_upper: row.certified_upper,
            known_exact: row.known_exact,
            citation: row.citation,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableSubset {
    All,
    /// Knots with at most 10 crossings.
    Rolfsen,
    /// Knots whose interval is a single value.
    Exact,
}

#[derive(Serialize)]
struct JsonRow<'a> {
    name: &'a str,
    lo: u32,
    hi: u32,
    value: String,
    citation: &'a str,
}

/// Renders intervals sorted by knot name. Text output is one
/// `name value` line per knot, the name padded to 12 columns.
pub fn render_table(
    records: &[KnotRecord],
    format: TableFormat,
    subset: TableSubset,
) -> Result<String, BoundsError> {
    let mut rows = Vec::new();
    for r in records {
        let iv = interval(r)?;
        let keep = match subset {
            TableSubset::All => true,
            TableSubset::Rolfsen => crossing_number(&r.name).is_some_and(|c| c <= 10),
            TableSubset::Exact => iv.is_exact(),
        };
        if keep {
            rows.push((r, iv));
        }
    }
    rows.sort_by(|a, b| compare_knot_names(&a.0.name, &b.0.name));
    let out = match format {
        TableFormat::Text => rows
            .iter()
            .map(|(r, iv)| format!("{:<12}{}\n", r.name, iv))
            .collect(),
        TableFormat::Csv => {
            let mut s = String::from("name,lo,hi,value,citation\n");
            for (r, iv) in &rows {
                s.push_str(&format!(
                    "{},{},{},{},{}\n",
                    r.name,
                    iv.lo,
                    iv.hi,
                    csv_field(&iv.to_string()),
                    r.citation
                ));
            }
            s
        }
        TableFormat::Json => {
            let json: Vec<JsonRow> = rows
                .iter()
                .map(|(r, iv)| JsonRow {
                    name: &r.name,
                    lo: iv.lo,
                    hi: iv.hi,
                    value: iv.to_string(),
                    citation: &r.citation,
                })
                .collect();
            let mut s = serde_json::to_string_pretty(&json).expect("serializable");
            s.push('\n');
            s
        }
    };
    Ok(out)
}

fn csv_field(s: &str) -> String {
    if s.contains(',') {
        format!("\"{s}\"")
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(name: &str) -> KnotRecord {
        KnotRecord::new(name)
    }

    #[test]
    fn lower_bounds() {
        assert_eq!(lower_bound(&rec("0_1")), 1);
        let mut r = rec("5_2");
        r.bridge_index = Some(2);
        assert_eq!(lower_bound(&r), 3);
        let mut r = rec("11n_72");
        r.bridge_index = Some(4);
        assert_eq!(lower_bound(&r), 5);
        assert_eq!(lower_bound(&rec("8_7")), 4);
        assert_eq!(lower_bound(&rec("3_1")), 3);
    }

    #[test]
    fn upper_bounds() {
        let mut r = rec("11n_72");
        r.stick_upper = Some(11);
        assert_eq!(upper_bound(&r), Ok(5));
        let mut r = rec("9_22");
        r.certified_upper = Some(4);
        assert_eq!(upper_bound(&r), Ok(4));
        let mut r = rec("x");
        r.stick_upper = Some(8);
        assert_eq!(upper_bound(&r), Ok(4));
        assert_eq!(
            upper_bound(&rec("9_1")),
            Err(BoundsError::NoUpperBoundAvailable("9_1".into()))
        );
    }

    #[test]
    fn intervals() {
        let mut r = rec("5_2");
        r.bridge_index = Some(2);
        r.stick_upper = Some(9);
        assert_eq!(interval(&r).unwrap().to_string(), "[3,4]");
        let mut r = rec("9_3");
        r.certified_upper = Some(4);
        assert_eq!(interval(&r).unwrap().to_string(), "4");
        let mut r = rec("10_124");
        r.known_exact = Some(5);
        assert_eq!(interval(&r).unwrap(), BoundInterval { lo: 5, hi: 5 });
        let mut r = rec("9_1");
        r.certified_upper = Some(3);
        assert!(matches!(
            interval(&r),
            Err(BoundsError::InconsistentRecord { lo: 4, hi: 3, .. })
        ));
    }

    #[test]
    fn name_order() {
        let mut names = vec!["11n_2", "10_2", "3_1", "11a_10", "10_10", "0_1", "9_3"];
        names.sort_by(|a, b| compare_knot_names(a, b));
        assert_eq!(
            names,
            ["0_1", "3_1", "9_3", "10_2", "10_10", "11a_10", "11n_2"]
        );
    }

    #[test]
    fn empty_and_metadata() {
        assert_eq!(
            render_table(&[], TableFormat::Text, TableSubset::All).unwrap(),
            ""
        );
        let csv = "name,bridge_index,stick_upper,trivial_flag,jeon_jin_flag,certified_upper,known_exact,citation\n\
                   5_2,2,9,false,true,,,a b\n0_1,,,true,false,,1,\n";
        let recs = parse_metadata(csv).unwrap();
        assert_eq!(recs[0].citation, "a b");
        let text = render_table(&recs, TableFormat::Text, TableSubset::All).unwrap();
        assert_eq!(text, "0_1         1\n5_2         [3,4]\n");
        let json = render_table(&recs, TableFormat::Json, TableSubset::Exact).unwrap();
        assert!(json.contains("\"name\": \"0_1\"") && !json.contains("5_2"));
        let bad = "name,bridge_index,stick_upper,trivial_flag,jeon_jin_flag,certified_upper,known_exact,citation\n\
                   8_7,,,false,true,4,,\n";
        assert!(matches!(
            parse_metadata(bad),
            Err(BoundsError::Metadata { line: 2, .. })
        ));
    }
}
