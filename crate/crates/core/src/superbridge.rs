//! Exact superbridge numbers by enumerating the cells of the great-circle
//! arrangement `{v : v·e_i = 0}` on the direction sphere.
//!
//! Every cell has a vertex of the arrangement on its boundary, and every cell
//! around a vertex `v0` is adjacent to some circle `c` through `v0`. Moving
//! from `v0` along `c` (tangent `±c × v0`) and then slightly off it (`±c`)
//! lands in each such cell. Signs at
//! `v = v0 + ε₁ d + ε₂ s c` with `0 < ε₂ ≪ ε₁ ≪ 1` are resolved
//! lexicographically by the first nonzero of `(v0·e, d·e, s c·e)`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use thiserror::Error;

use crate::certificates::{verify_bundle, CertificateBundle, CertificateError};
use crate::geometry::Direction;
use crate::geometry::{EdgeVectors, GeometryError, IntDirection, PolygonalKnot, Sign, SignPattern};
use crate::number::{rational, Vec3};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SuperbridgeError {
    #[error("edge vectors span fewer than two distinct great circles")]
    DegenerateEdgeSet,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Certificate(#[from] CertificateError),
    #[error("enumerated superbridge number {value} exceeds certified bound {bound}")]
    CertificateConflict { value: usize, bound: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealizablePattern {
    pub pattern: SignPattern,
    pub witness: Direction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertifiedBy {
    Enumeration,
    CertificateCrossCheck,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperbridgeResult {
    pub value: usize,
    pub witness_direction: Direction,
    pub pattern_count: usize,
    pub certified_by: CertifiedBy,
    /// Number of realizable patterns with each descent count.
    pub histogram: BTreeMap<usize, usize>,
}

type Int3 = [BigInt; 3];

fn dot(a: &Int3, b: &Int3) -> BigInt {
    &a[0] * &b[0] + &a[1] * &b[1] + &a[2] * &b[2]
}

fn cross(a: &Int3, b: &Int3) -> Int3 {
    [
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

fn neg(a: &Int3) -> Int3 {
    [-&a[0], -&a[1], -&a[2]]
}

fn sign_of(x: &BigInt) -> Ordering {
    if x.is_zero() {
        Ordering::Equal
    } else if x.is_positive() {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

/// Representative of the line through `v`: first nonzero entry positive.
fn projective(v: &Int3) -> Int3 {
    match v.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => neg(v),
        _ => v.clone(),
    }
}

/// Distinct great-circle normals, in order of first appearance.
fn circles(e: &EdgeVectors) -> Vec<Int3> {
    let ints = e.ints();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for i in 0..ints.len() {
        let c = projective(ints.big(i));
        if seen.insert(c.clone()) {
            out.push(c);
        }
    }
    out
}

struct Probe {
    v0: Int3,
    d: Int3,
    sc: Int3,
}

impl Probe {
    fn symbolic(&self, edges: &[Int3]) -> Vec<Sign> {
        edges
            .iter()
            .map(|e| {
                let s = [&self.v0, &self.d, &self.sc]
                    .iter()
                    .map(|t| sign_of(&dot(t, e)))
                    .find(|s| *s != Ordering::Equal)
                    .expect("perturbation terms span space");
                if s == Ordering::Greater {
                    Sign::Plus
                } else {
                    Sign::Minus
                }
            })
            .collect()
    }

    /// `v0 + 2^-t d + 2^-2t sc`, scaled by `2^2t`, for the first `t >= 10`
    /// at which exact signs agree with `signs`.
    fn witness(&self, edges: &[Int3], signs: &[Sign]) -> Int3 {
        let mut t = 10u32;
        loop {
            let a = BigInt::from(1) << (2 * t);
            let b = BigInt::from(1) << t;
            let v: Int3 = [0, 1, 2].map(|k| &a * &self.v0[k] + &b * &self.d[k] + &self.sc[k]);
            let ok = edges.iter().zip(signs).all(|(e, s)| {
                let d = dot(&v, e);
                match s {
                    Sign::Plus => d.is_positive(),
                    Sign::Minus => d.is_negative(),
                }
            });
            if ok {
                return v;
            }
            t += 1;
        }
    }
}

fn probes(ci: &Int3, cj: &Int3) -> Vec<Probe> {
    let mut out = Vec::with_capacity(16);
    let base = cross(ci, cj);
    for v0 in [base.clone(), neg(&base)] {
        for c in [ci, cj] {
            let tangent = cross(c, &v0);
            for d in [tangent.clone(), neg(&tangent)] {
                for sc in [c.clone(), neg(c)] {
                    out.push(Probe {
                        v0: v0.clone(),
                        d: d.clone(),
                        sc,
                    });
                }
            }
        }
    }
    out
}

fn int_to_vec3(v: &Int3) -> Vec3 {
    let f = |x: &BigInt| crate::number::Rational::from_integer(x.clone());
    Vec3::new(f(&v[0]), f(&v[1]), f(&v[2]))
}

/// All sign patterns realized on open cells, sorted lexicographically
/// (`+` before `-`), each with an exact witness direction.
pub fn realizable_patterns(e: &EdgeVectors) -> Result<Vec<RealizablePattern>, SuperbridgeError> {
    let circles = circles(e);
    if circles.len() < 2 {
        return Err(SuperbridgeError::DegenerateEdgeSet);
    }
    let edges: Vec<Int3> = (0..e.len()).map(|i| e.ints().big(i).clone()).collect();
    let pairs: Vec<(usize, usize)> = (0..circles.len())
        .flat_map(|i| (i + 1..circles.len()).map(move |j| (i, j)))
        .collect();
    let found: Vec<Vec<(Vec<Sign>, Probe)>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let mut local: BTreeMap<Vec<Sign>, Probe> = BTreeMap::new();
            for probe in probes(&circles[i], &circles[j]) {
                let signs = probe.symbolic(&edges);
                local.entry(signs).or_insert(probe);
            }
            local.into_iter().collect()
        })
        .collect();
    let mut merged: BTreeMap<Vec<Sign>, Probe> = BTreeMap::new();
    for (signs, probe) in found.into_iter().flatten() {
        merged.entry(signs).or_insert(probe);
    }
    let merged: Vec<(Vec<Sign>, Probe)> = merged.into_iter().collect();
    Ok(merged
        .into_par_iter()
        .map(|(signs, probe)| {
            let w = probe.witness(&edges, &signs);
            RealizablePattern {
                witness: Direction::new(int_to_vec3(&w)).expect("witness is nonzero"),
                pattern: SignPattern::from_signs(signs),
            }
        })
        .collect())
}

pub fn superbridge_number(p: &PolygonalKnot) -> Result<SuperbridgeResult, SuperbridgeError> {
    let patterns = realizable_patterns(&p.edges())?;
    let mut histogram = BTreeMap::new();
    for rp in &patterns {
        *histogram.entry(rp.pattern.descents()).or_insert(0) += 1;
    }
    let best = patterns
        .iter()
        .max_by_key(|rp| {
            (
                rp.pattern.descents(),
                std::cmp::Reverse(rp.pattern.signs().to_vec()),
            )
        })
        .expect("at least one cell");
    Ok(SuperbridgeResult {
        value: best.pattern.descents(),
        witness_direction: best.witness.clone(),
        pattern_count: patterns.len(),
        certified_by: CertifiedBy::Enumeration,
        histogram,
    })
}

/// Enumerates, then checks the value against a verified certificate.
pub fn superbridge_with_certificate(
    p: &PolygonalKnot,
    bundle: &CertificateBundle,
) -> Result<SuperbridgeResult, SuperbridgeError> {
    let bound = verify_bundle(p, bundle)?;
    let mut result = superbridge_number(p)?;
    if result.value > bound.certified_upper {
        return Err(SuperbridgeError::CertificateConflict {
            value: result.value,
            bound: bound.certified_upper,
        });
    }
    result.certified_by = CertifiedBy::CertificateCrossCheck;
    Ok(result)
}

/// Scale of sampled integer directions.
const SAMPLE_SCALE: f64 = (1u64 << 20) as f64;

/// A generic integer direction drawn from a scaled Gaussian, redrawn until
/// no edge is orthogonal to it.
pub(crate) fn random_generic_direction(e: &EdgeVectors, rng: &mut ChaCha8Rng) -> IntDirection {
    loop {
        let v: [i64; 3] = [0; 3].map(|_| {
            let x: f64 = StandardNormal.sample(rng);
            (x * SAMPLE_SCALE).round() as i64
        });
        if v == [0, 0, 0] {
            continue;
        }
        let dir = IntDirection::from_i64(v);
        if e.descents_for(&dir).is_some() {
            return dir;
        }
    }
}

/// Random generic direction as an exact [`Direction`].
pub fn random_direction(e: &EdgeVectors, rng: &mut ChaCha8Rng) -> Direction {
    let d = random_generic_direction(e, rng);
    let v = d.as_i64().expect("sampled directions are small");
    Direction::new(Vec3::new(rational(v[0]), rational(v[1]), rational(v[2]))).expect("nonzero")
}

/// Max descent count over `samples` random generic directions.
pub fn sampled_lower_bound(p: &PolygonalKnot, samples: usize, seed: u64) -> usize {
    let e = p.edges();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0;
    for _ in 0..samples {
        let dir = random_generic_direction(&e, &mut rng);
        best = best.max(e.descents_for(&dir).expect("generic"));
    }
    best
}

pub fn jin_upper_bound(p: &PolygonalKnot) -> usize {
    p.len() / 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::descent_count;

    fn square() -> PolygonalKnot {
        PolygonalKnot::from_int_vertices("square", &[[0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0]])
            .unwrap()
    }

    fn skew() -> PolygonalKnot {
        PolygonalKnot::from_int_vertices("skew", &[[0, 0, 0], [1, 0, 1], [1, 1, 0], [0, 1, 1]])
            .unwrap()
    }

    #[test]
    fn square_cells() {
        let pats = realizable_patterns(&square().edges()).unwrap();
        assert_eq!(pats.len(), 4);
        for rp in &pats {
            assert_eq!(rp.pattern.descents(), 1);
            assert_eq!(descent_count(&square().edges(), &rp.witness).unwrap(), 1);
        }
        let strings: Vec<String> = pats.iter().map(|r| r.pattern.to_string()).collect();
        assert_eq!(strings, ["++--", "+--+", "-++-", "--++"]);
        assert_eq!(superbridge_number(&square()).unwrap().value, 1);
    }

    #[test]
    fn skew_alternation() {
        let e = skew().edges();
        let pats = realizable_patterns(&e).unwrap();
        let alt = pats
            .iter()
            .find(|r| r.pattern.to_string() == "+-+-")
            .unwrap();
        assert_eq!(sign_pattern_of(&e, &alt.witness), "+-+-");
        let res = superbridge_number(&skew()).unwrap();
        assert_eq!(res.value, 2);
        assert_eq!(res.pattern_count, pats.len());
        assert_eq!(res.histogram.values().sum::<usize>(), pats.len());
    }

    fn sign_pattern_of(e: &EdgeVectors, d: &Direction) -> String {
        crate::geometry::sign_pattern(e, d).unwrap().to_string()
    }

    #[test]
    fn degenerate_edges() {
        let e = EdgeVectors::from_edges(vec![Vec3::from_ints(1, 0, 0), Vec3::from_ints(-1, 0, 0)])
            .unwrap();
        assert_eq!(
            realizable_patterns(&e),
            Err(SuperbridgeError::DegenerateEdgeSet)
        );
    }

    #[test]
    fn sampling_is_deterministic() {
        assert_eq!(sampled_lower_bound(&square(), 50, 7), 1);
        assert_eq!(
            sampled_lower_bound(&skew(), 500, 3),
            sampled_lower_bound(&skew(), 500, 3)
        );
        assert_eq!(jin_upper_bound(&square()), 2);
    }
}
