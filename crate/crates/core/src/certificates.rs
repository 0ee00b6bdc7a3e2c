//! Superbridge certificates built on Gordan's alternative.
//!
//! For `n = 2k` edges the superbridge number is `k` exactly when some
//! direction sees the alternating pattern `+ - + - ...`, which is the
//! separating alternative for the matrix `E = [e_1 | -e_2 | ... | -e_2k]`. A
//! nonnegative null combination of `E` therefore certifies `sb <= k - 1`.
//!
//! For `n = 2k + 1` the pattern to exclude is every cyclic shift of
//! `+ + - + - ... + -`. With `s = (0, 0, 1, 0, 1, ..., 0, 1)` the shift-`j`
//! system `E_j` (for `j = 1..n`) has column `i` equal to `(-1)^(s_(i+j)) e_i`,
//! subscripts taken cyclically, and a bundle of null combinations, one per
//! system, certifies `sb <= k - 1`.
//!
//! # Bundle layouts
//!
//! Bundles produced by [`find_certificate`] are [`BundleLayout::Aligned`]:
//! column `j` is a null combination of `E_j` with entry `i` weighting `e_i`.
//!
//! The published bundles use [`BundleLayout::Rotated`]: column `j` has entry
//! `i` weighting edge `e_(i+j)` against the fixed mask
//! `(+, -, +, -, ..., +, -, -)`. Re-indexed so that entry `m` weights `e_m`,
//! column `j` is a null combination of `E_(2-j)` (indices mod `n`). Verification
//! first tries this canonical column-to-system assignment and falls back to
//! any assignment of columns to distinct systems that validates.

use std::fmt;

use num_bigint::BigInt;
use rayon::prelude::*;
use thiserror::Error;

use crate::geometry::{PolygonalKnot, Sign, SignPattern};
use crate::gordan::{
    check_null_combination, gordan_decide, to_rationals, Certificate, GordanMatrix,
    NullCheckFailure,
};
use crate::number::Vec3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error("expected an even number of edges, got {0}")]
    OddEdgeCount(usize),
    #[error("expected an odd number of edges, got {0}")]
    EvenEdgeCount(usize),
    #[error("odd certificates need at least 3 edges, got {0}")]
    TooFewEdges(usize),
    #[error("certificate shape {got} does not match {expected}")]
    DimensionMismatch { expected: String, got: String },
    #[error("invalid certificate: {0}")]
    InvalidCertificate(InvalidCertificate),
}

/// Which check failed, and where.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvalidCertificate {
    /// 1-based column of an odd bundle; `None` for even certificates.
    pub column: Option<usize>,
    /// 1-based shift index `j` of the system the column was checked against.
    pub system: Option<usize>,
    pub failure: NullCheckFailure,
}

impl fmt::Display for InvalidCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.column, self.system) {
            (Some(c), Some(j)) => write!(f, "column {c} against E_{j}: {}", self.failure),
            _ => write!(f, "E·u check: {}", self.failure),
        }
    }
}

/// Per-edge signs of a system's columns.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignMask(Vec<Sign>);

impl SignMask {
    pub fn signs(&self) -> &[Sign] {
        &self.0
    }

    pub fn minus_count(&self) -> usize {
        self.0.iter().filter(|&&s| s == Sign::Minus).count()
    }

    /// The sign pattern a direction must realize for `vᵀE > 0`.
    pub fn pattern(&self) -> SignPattern {
        SignPattern::from_signs(self.0.clone())
    }

    fn apply(&self, edges: &[Vec3]) -> GordanMatrix {
        let cols = edges
            .iter()
            .zip(&self.0)
            .map(|(e, s)| match s {
                Sign::Plus => e.clone(),
                Sign::Minus => -e,
            })
            .collect();
        GordanMatrix::new(cols).expect("polygon has edges")
    }
}

impl fmt::Display for SignMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{}", s.as_char())?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvenSystem {
    matrix: GordanMatrix,
}

impl EvenSystem {
    pub fn matrix(&self) -> &GordanMatrix {
        &self.matrix
    }

    pub fn mask(n: usize) -> SignMask {
        SignMask(
            (0..n)
                .map(|i| if i % 2 == 0 { Sign::Plus } else { Sign::Minus })
                .collect(),
        )
    }
}

pub fn build_even_system(edges: &[Vec3]) -> Result<EvenSystem, CertificateError> {
    let n = edges.len();
    if !n.is_multiple_of(2) {
        return Err(CertificateError::OddEdgeCount(n));
    }
    Ok(EvenSystem {
        matrix: EvenSystem::mask(n).apply(edges),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OddSystem {
    masks: Vec<SignMask>,
    systems: Vec<GordanMatrix>,
}

impl OddSystem {
    pub fn len(&self) -> usize {
        self.systems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.systems.is_empty()
    }

    /// `E_j` for `j` in `1..=n`.
    pub fn system(&self, j: usize) -> &GordanMatrix {
        &self.systems[j - 1]
    }

    pub fn mask(&self, j: usize) -> &SignMask {
        &self.masks[j - 1]
    }

    pub fn masks(&self) -> &[SignMask] {
        &self.masks
    }

    /// Mask of `E_j` for an `n`-gon: entry `i` is `(-1)^(s_(i+j))`.
    pub fn mask_for(n: usize, j: usize) -> SignMask {
        SignMask(
            (1..=n)
                .map(|i| {
                    let m = (i + j - 1) % n + 1;
                    if s_entry(m) == 0 {
                        Sign::Plus
                    } else {
                        Sign::Minus
                    }
                })
                .collect(),
        )
    }
}

/// `s_m` of the base sequence `(0, 0, 1, 0, 1, ..., 0, 1)`, 1-based.
fn s_entry(m: usize) -> u8 {
    if m <= 2 {
        0
    } else {
        (m % 2) as u8
    }
}

pub fn build_odd_systems(edges: &[Vec3]) -> Result<OddSystem, CertificateError> {
    let n = edges.len();
    if n.is_multiple_of(2) {
        return Err(CertificateError::EvenEdgeCount(n));
    }
    if n < 3 {
        return Err(CertificateError::TooFewEdges(n));
    }
    let masks: Vec<SignMask> = (1..=n).map(|j| OddSystem::mask_for(n, j)).collect();
    let systems = masks.iter().map(|m| m.apply(edges)).collect();
    Ok(OddSystem { masks, systems })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BundleLayout {
    /// Column `j`, entry `i` weights `e_i`; column `j` solves `E_j`.
    Aligned,
    /// Column `j`, entry `i` weights `e_(i+j)`; column `j` solves `E_(2-j)`.
    Rotated,
}

impl BundleLayout {
    pub fn as_str(self) -> &'static str {
        match self {
            BundleLayout::Aligned => "aligned",
            BundleLayout::Rotated => "rotated",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "aligned" => Some(BundleLayout::Aligned),
            "rotated" => Some(BundleLayout::Rotated),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CertificateBundle {
    Even(Vec<BigInt>),
    Odd {
        /// `columns[j - 1]` is `u_j`.
        columns: Vec<Vec<BigInt>>,
        layout: BundleLayout,
    },
}

impl CertificateBundle {
    /// Builds an odd bundle from the rows of `U` (entry `(r, c)` is entry `r`
    /// of column `c`).
    pub fn odd_from_rows(rows: &[Vec<BigInt>], layout: BundleLayout) -> Self {
        let n = rows.len();
        let columns = (0..rows.first().map_or(0, Vec::len))
            .map(|c| (0..n).map(|r| rows[r][c].clone()).collect())
            .collect();
        CertificateBundle::Odd { columns, layout }
    }

    pub fn rows(&self) -> Vec<Vec<BigInt>> {
        match self {
            CertificateBundle::Even(u) => vec![u.clone()],
            CertificateBundle::Odd { columns, .. } => {
                let len = columns.first().map_or(0, Vec::len);
                (0..len)
                    .map(|r| columns.iter().map(|c| c[r].clone()).collect())
                    .collect()
            }
        }
    }

    pub fn is_even(&self) -> bool {
        matches!(self, CertificateBundle::Even(_))
    }

    /// Entry `row` of column `col`, both 0-based. Even certificates have a
    /// single column.
    pub fn entry(&self, row: usize, col: usize) -> Option<&BigInt> {
        match self {
            CertificateBundle::Even(u) if col == 0 => u.get(row),
            CertificateBundle::Even(_) => None,
            CertificateBundle::Odd { columns, .. } => columns.get(col)?.get(row),
        }
    }

    pub fn entry_mut(&mut self, row: usize, col: usize) -> Option<&mut BigInt> {
        match self {
            CertificateBundle::Even(u) if col == 0 => u.get_mut(row),
            CertificateBundle::Even(_) => None,
            CertificateBundle::Odd { columns, .. } => columns.get_mut(col)?.get_mut(row),
        }
    }

    /// `(rows, columns)`.
    pub fn shape(&self) -> (usize, usize) {
        match self {
            CertificateBundle::Even(u) => (u.len(), 1),
            CertificateBundle::Odd { columns, .. } => {
                (columns.first().map_or(0, Vec::len), columns.len())
            }
        }
    }

    /// Same bundle with every column in [`BundleLayout::Aligned`] order, so
    /// column `j` solves `E_j`.
    pub fn to_aligned(&self) -> CertificateBundle {
        match self {
            CertificateBundle::Odd {
                columns,
                layout: BundleLayout::Rotated,
            } => {
                let n = columns.len();
                let mut aligned = vec![Vec::new(); n];
                for (c, col) in columns.iter().enumerate() {
                    let j = c + 1;
                    aligned[rotated_system(n, j) - 1] = realign(col, j);
                }
                CertificateBundle::Odd {
                    columns: aligned,
                    layout: BundleLayout::Aligned,
                }
            }
            other => other.clone(),
        }
    }
}

/// Entry `m` of the result weights `e_m`, for a rotated column `j`.
fn realign(column: &[BigInt], j: usize) -> Vec<BigInt> {
    let n = column.len();
    (0..n)
        .map(|m| column[(m + n - j % n) % n].clone())
        .collect()
}

/// System index certified by rotated column `j`: `2 - j` mod `n`, in `1..=n`.
fn rotated_system(n: usize, j: usize) -> usize {
    (2 + n - j % n) % n
        + if (2 + n - j % n).is_multiple_of(n) {
            n
        } else {
            0
        }
}

/// The statement a certificate establishes about one realization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifiedBound {
    pub knot: String,
    pub edges: usize,
    /// `floor(n / 2)`.
    pub jin_bound: usize,
    /// `jin_bound - 1`.
    pub certified_upper: usize,
    /// For odd bundles, the 1-based system index each column was matched to.
    pub assignment: Vec<usize>,
    /// Whether the documented column-to-system assignment was used.
    pub canonical: bool,
}

impl fmt::Display for VerifiedBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "certified sb ≤ {}", self.certified_upper)
    }
}

fn to_check_vec(u: &[BigInt]) -> Vec<crate::number::Rational> {
    to_rationals(u)
}

/// Success certifies `sb(p) <= n/2 - 1`.
pub fn verify_even_certificate(
    p: &PolygonalKnot,
    u: &[BigInt],
) -> Result<VerifiedBound, CertificateError> {
    let edges = p.edges();
    let n = edges.len();
    let system = build_even_system(edges.as_slice())?;
    if u.len() != n {
        return Err(CertificateError::DimensionMismatch {
            expected: format!("vector of length {n}"),
            got: format!("vector of length {}", u.len()),
        });
    }
    let check =
        check_null_combination(system.matrix(), &to_check_vec(u)).expect("length already checked");
    match check {
        Ok(()) => Ok(VerifiedBound {
            knot: p.name().to_string(),
            edges: n,
            jin_bound: n / 2,
            certified_upper: n / 2 - 1,
            assignment: vec![],
            canonical: true,
        }),
        Err(failure) => Err(CertificateError::InvalidCertificate(InvalidCertificate {
            column: None,
            system: None,
            failure,
        })),
    }
}

/// Success certifies `sb(p) <= (n - 1)/2 - 1`.
pub fn verify_odd_bundle(
    p: &PolygonalKnot,
    bundle: &CertificateBundle,
) -> Result<VerifiedBound, CertificateError> {
    let edges = p.edges();
    let n = edges.len();
    let systems = build_odd_systems(edges.as_slice())?;
    let (columns, layout) = match bundle {
        CertificateBundle::Odd { columns, layout } => (columns, *layout),
        CertificateBundle::Even(_) => {
            return Err(CertificateError::DimensionMismatch {
                expected: format!("{n}x{n} matrix"),
                got: "single vector".into(),
            })
        }
    };
    if columns.len() != n || columns.iter().any(|c| c.len() != n) {
        let (r, c) = bundle.shape();
        return Err(CertificateError::DimensionMismatch {
            expected: format!("{n}x{n} matrix"),
            got: format!("{r}x{c} matrix"),
        });
    }

    // interpretation of column c under label l: (vector, system index)
    let interpret = |c: usize, label: usize| -> (Vec<BigInt>, usize) {
        match layout {
            BundleLayout::Aligned => (columns[c].clone(), label),
            BundleLayout::Rotated => (realign(&columns[c], label), rotated_system(n, label)),
        }
    };
    let check = |c: usize, label: usize| -> Result<(), NullCheckFailure> {
        let (w, j) = interpret(c, label);
        check_null_combination(systems.system(j), &to_check_vec(&w)).expect("square bundle")
    };

    let k = (n - 1) / 2;
    let bound = |assignment: Vec<usize>, canonical: bool| VerifiedBound {
        knot: p.name().to_string(),
        edges: n,
        jin_bound: k,
        certified_upper: k - 1,
        assignment,
        canonical,
    };

    let canonical: Vec<Result<(), NullCheckFailure>> =
        (0..n).into_par_iter().map(|c| check(c, c + 1)).collect();
    if canonical.iter().all(Result::is_ok) {
        let assignment = (1..=n).map(|j| interpret(j - 1, j).1).collect();
        return Ok(bound(assignment, true));
    }

    let valid: Vec<Vec<usize>> = (0..n)
        .into_par_iter()
        .map(|c| (1..=n).filter(|&l| check(c, l).is_ok()).collect())
        .collect();
    if let Some(labels) = perfect_matching(&valid, n) {
        let assignment = labels
            .iter()
            .enumerate()
            .map(|(c, &l)| interpret(c, l).1)
            .collect();
        return Ok(bound(assignment, false));
    }

    let (c, failure) = canonical
        .into_iter()
        .enumerate()
        .find_map(|(c, r)| r.err().map(|f| (c, f)))
        .expect("some canonical check failed");
    Err(CertificateError::InvalidCertificate(InvalidCertificate {
        column: Some(c + 1),
        system: Some(interpret(c, c + 1).1),
        failure,
    }))
}

/// Verifies whichever kind of certificate `bundle` is.
pub fn verify_bundle(
    p: &PolygonalKnot,
    bundle: &CertificateBundle,
) -> Result<VerifiedBound, CertificateError> {
    match bundle {
        CertificateBundle::Even(u) => verify_even_certificate(p, u),
        CertificateBundle::Odd { .. } => verify_odd_bundle(p, bundle),
    }
}

/// Kuhn's augmenting paths; `valid[c]` lists labels (1-based) usable by column `c`.
fn perfect_matching(valid: &[Vec<usize>], n: usize) -> Option<Vec<usize>> {
    fn augment(
        c: usize,
        valid: &[Vec<usize>],
        seen: &mut [bool],
        owner: &mut [Option<usize>],
    ) -> bool {
        for &l in &valid[c] {
            if seen[l] {
                continue;
            }
            seen[l] = true;
            if owner[l].is_none_or(|o| augment(o, valid, seen, owner)) {
                owner[l] = Some(c);
                return true;
            }
        }
        false
    }
    let mut owner: Vec<Option<usize>> = vec![None; n + 1];
    for c in 0..valid.len() {
        let mut seen = vec![false; n + 1];
        if !augment(c, valid, &mut seen, &mut owner) {
            return None;
        }
    }
    let mut labels = vec![0; valid.len()];
    for (l, o) in owner.iter().enumerate() {
        if let Some(c) = o {
            labels[*c] = l;
        }
    }
    Some(labels)
}

/// Evidence that the Jin bound is attained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealizedPattern {
    /// Odd case: the 1-based shift `j` whose system is separable.
    pub shift: Option<usize>,
    pub direction: Vec3,
    pub pattern: SignPattern,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FindOutcome {
    Certified(CertificateBundle),
    JinBoundAttained(Box<RealizedPattern>),
}

impl FindOutcome {
    pub fn bundle(&self) -> Option<&CertificateBundle> {
        match self {
            FindOutcome::Certified(b) => Some(b),
            FindOutcome::JinBoundAttained(_) => None,
        }
    }

    pub fn evidence(&self) -> Option<&RealizedPattern> {
        match self {
            FindOutcome::Certified(_) => None,
            FindOutcome::JinBoundAttained(r) => Some(r),
        }
    }
}

/// Searches for a certificate of `sb(p) <= floor(n/2) - 1`.
pub fn find_certificate(p: &PolygonalKnot) -> FindOutcome {
    let edges = p.edges();
    let e = edges.as_slice();
    let n = e.len();
    if n.is_multiple_of(2) {
        let system = build_even_system(e).expect("even");
        match gordan_decide(system.matrix()) {
            Certificate::NullCombination(u) => FindOutcome::Certified(CertificateBundle::Even(u)),
            Certificate::SeparatingDirection(v) => {
                FindOutcome::JinBoundAttained(Box::new(RealizedPattern {
                    shift: None,
                    pattern: EvenSystem::mask(n).pattern(),
                    direction: v,
                }))
            }
        }
    } else {
        let systems = build_odd_systems(e).expect("odd");
        let decisions: Vec<Certificate> = (1..=n)
            .into_par_iter()
            .map(|j| gordan_decide(systems.system(j)))
            .collect();
        if let Some((idx, v)) = decisions
            .iter()
            .enumerate()
            .find_map(|(i, c)| c.separating_direction().map(|v| (i, v)))
        {
            return FindOutcome::JinBoundAttained(Box::new(RealizedPattern {
                shift: Some(idx + 1),
                direction: v.clone(),
                pattern: systems.mask(idx + 1).pattern(),
            }));
        }
        let columns = decisions
            .into_iter()
            .map(|c| match c {
                Certificate::NullCombination(u) => u,
                Certificate::SeparatingDirection(_) => unreachable!(),
            })
            .collect();
        FindOutcome::Certified(CertificateBundle::Odd {
            columns,
            layout: BundleLayout::Aligned,
        })
    }
}
