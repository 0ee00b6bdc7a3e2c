//! Closed polygonal curves with exact rational coordinates, their edge
//! vectors, and critical-point counting for projections to lines.
//!
//! The number of local maxima of the projection of a polygon onto the line
//! spanned by `v` is the number of cyclic `+ -> -` transitions in the sign
//! sequence `v·e_1, ..., v·e_n`. Directions where some `v·e_i` vanishes are
//! rejected rather than perturbed.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::number::{rational, round_half_away, Rational, Vec3};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("degenerate polygon: {0}")]
    DegeneratePolygon(Degeneracy),
    #[error("direction is not generic: v·e_{} = 0", .index + 1)]
    NonGenericDirection { index: usize },
    #[error("direction must be nonzero")]
    ZeroDirection,
    #[error("edge vectors do not close up: sum is {0}")]
    OpenPolygon(String),
    #[error("first three vertices are collinear")]
    CollinearPrefix,
    #[error("significant digits must be at least 1")]
    InvalidDigits,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degeneracy {
    TooFewVertices(usize),
    /// Vertex `i` coincides with vertex `i + 1` (cyclically); 0-based.
    RepeatedVertex(usize),
    /// Edge `i` is the zero vector; 0-based.
    ZeroEdge(usize),
    /// All edges are parallel, so the curve lies in a line.
    Collinear,
}

impl fmt::Display for Degeneracy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degeneracy::TooFewVertices(n) => write!(f, "{n} vertices, need at least 3"),
            Degeneracy::RepeatedVertex(i) => {
                write!(f, "vertex {} repeats the previous vertex", i + 2)
            }
            Degeneracy::ZeroEdge(i) => write!(f, "edge {} is zero", i + 1),
            Degeneracy::Collinear => write!(f, "all edges are parallel"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolygonalKnot {
    name: String,
    vertices: Vec<Vec3>,
    provenance: String,
}

impl PolygonalKnot {
    pub fn new(
        name: impl Into<String>,
        vertices: Vec<Vec3>,
        provenance: impl Into<String>,
    ) -> Result<Self, GeometryError> {
        let n = vertices.len();
        if n < 3 {
            return Err(GeometryError::DegeneratePolygon(
                Degeneracy::TooFewVertices(n),
            ));
        }
        for i in 0..n {
            if vertices[i] == vertices[(i + 1) % n] {
                return Err(GeometryError::DegeneratePolygon(
                    Degeneracy::RepeatedVertex(i),
                ));
            }
        }
        let knot = PolygonalKnot {
            name: name.into(),
            vertices,
            provenance: provenance.into(),
        };
        let edges = knot.raw_edges();
        if !has_non_parallel_pair(&edges) {
            return Err(GeometryError::DegeneratePolygon(Degeneracy::Collinear));
        }
        Ok(knot)
    }

    pub fn from_int_vertices(
        name: impl Into<String>,
        vertices: &[[i64; 3]],
    ) -> Result<Self, GeometryError> {
        let vs = vertices
            .iter()
            .map(|&[x, y, z]| Vec3::from_ints(x, y, z))
            .collect();
        Self::new(name, vs, "")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_provenance(mut self, provenance: impl Into<String>) -> Self {
        self.provenance = provenance.into();
        self
    }

    /// Applies `f` to every vertex. Fails if the image is degenerate.
    pub fn map_vertices(&self, f: impl Fn(&Vec3) -> Vec3) -> Result<Self, GeometryError> {
        let vs = self.vertices.iter().map(f).collect();
        Self::new(self.name.clone(), vs, self.provenance.clone())
    }

    /// The same curve with the vertex list started at index `k`.
    pub fn relabeled(&self, k: usize) -> Self {
        let n = self.vertices.len();
        let mut vs = self.vertices.clone();
        vs.rotate_left(k % n);
        PolygonalKnot {
            vertices: vs,
            ..self.clone()
        }
    }

    /// The same curve traversed backwards.
    pub fn reversed(&self) -> Self {
        let mut vs = self.vertices.clone();
        vs.reverse();
        PolygonalKnot {
            vertices: vs,
            ..self.clone()
        }
    }

    pub fn is_integral(&self) -> bool {
        self.vertices.iter().all(Vec3::is_integral)
    }

    fn raw_edges(&self) -> Vec<Vec3> {
        let n = self.vertices.len();
        (0..n)
            .map(|i| &self.vertices[(i + 1) % n] - &self.vertices[i])
            .collect()
    }

    pub fn edges(&self) -> EdgeVectors {
        EdgeVectors::from_validated(self.raw_edges())
    }
}

fn has_non_parallel_pair(edges: &[Vec3]) -> bool {
    let Some(first) = edges.iter().find(|e| !e.is_zero()) else {
        return false;
    };
    edges.iter().any(|e| !first.cross(e).is_zero())
}

/// `e_i = v_{i+1} - v_i` with indices taken cyclically.
pub fn edge_vectors(p: &PolygonalKnot) -> Result<EdgeVectors, GeometryError> {
    let edges = p.raw_edges();
    if let Some(i) = edges.iter().position(Vec3::is_zero) {
        return Err(GeometryError::DegeneratePolygon(Degeneracy::ZeroEdge(i)));
    }
    if !has_non_parallel_pair(&edges) {
        return Err(GeometryError::DegeneratePolygon(Degeneracy::Collinear));
    }
    Ok(EdgeVectors::from_validated(edges))
}

/// Primitive integer representatives of a list of rational vectors, with an
/// `i64` copy when every entry is small. Signs of dot products are invariant
/// under positive rescaling of each vector, so this is all sign tests need.
#[derive(Debug, Clone)]
pub(crate) struct IntVectors {
    big: Vec<[BigInt; 3]>,
    small: Option<Vec<[i64; 3]>>,
}

const SMALL_LIMIT: i64 = 1 << 60;

fn to_small(v: &[BigInt; 3]) -> Option<[i64; 3]> {
    let mut out = [0i64; 3];
    for (o, x) in out.iter_mut().zip(v) {
        let x = x.to_i64()?;
        if x.abs() >= SMALL_LIMIT {
            return None;
        }
        *o = x;
    }
    Some(out)
}

impl IntVectors {
    pub(crate) fn new(vectors: &[Vec3]) -> Self {
        let big: Vec<[BigInt; 3]> = vectors.iter().map(Vec3::primitive_integer).collect();
        let small = big.iter().map(to_small).collect::<Option<Vec<_>>>();
        IntVectors { big, small }
    }

    pub(crate) fn len(&self) -> usize {
        self.big.len()
    }

    pub(crate) fn big(&self, i: usize) -> &[BigInt; 3] {
        &self.big[i]
    }

    pub(crate) fn dot_sign(&self, i: usize, dir: &IntDirection) -> Ordering {
        if let (Some(small), Some(d)) = (&self.small, &dir.small) {
            let e = small[i];
            let dot = e[0] as i128 * d[0] as i128
                + e[1] as i128 * d[1] as i128
                + e[2] as i128 * d[2] as i128;
            return dot.cmp(&0);
        }
        let e = &self.big[i];
        let d = &dir.big;
        let dot = &e[0] * &d[0] + &e[1] * &d[1] + &e[2] * &d[2];
        dot.sign_cmp()
    }
}

trait SignCmp {
    fn sign_cmp(&self) -> Ordering;
}

impl SignCmp for BigInt {
    fn sign_cmp(&self) -> Ordering {
        if self.is_zero() {
            Ordering::Equal
        } else if self.is_positive() {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }
}

/// Integer form of a direction, used for sign tests.
#[derive(Debug, Clone)]
pub(crate) struct IntDirection {
    big: [BigInt; 3],
    small: Option<[i64; 3]>,
}

impl IntDirection {
    pub(crate) fn from_big(big: [BigInt; 3]) -> Self {
        let small = to_small(&big);
        IntDirection { big, small }
    }

    pub(crate) fn from_i64(v: [i64; 3]) -> Self {
        let big = [BigInt::from(v[0]), BigInt::from(v[1]), BigInt::from(v[2])];
        let small = to_small(&big);
        IntDirection { big, small }
    }

    pub(crate) fn as_i64(&self) -> Option<[i64; 3]> {
        self.small
    }
}

#[derive(Debug, Clone)]
pub struct EdgeVectors {
    edges: Vec<Vec3>,
    ints: IntVectors,
}

impl PartialEq for EdgeVectors {
    fn eq(&self, other: &Self) -> bool {
        self.edges == other.edges
    }
}

impl Eq for EdgeVectors {}

impl EdgeVectors {
    /// Builds a cyclic edge list, checking closure and that no edge is zero.
    pub fn from_edges(edges: Vec<Vec3>) -> Result<Self, GeometryError> {
        if let Some(i) = edges.iter().position(Vec3::is_zero) {
            return Err(GeometryError::DegeneratePolygon(Degeneracy::ZeroEdge(i)));
        }
        let sum = edges.iter().fold(Vec3::zero(), |acc, e| &acc + e);
        if !sum.is_zero() {
            return Err(GeometryError::OpenPolygon(sum.to_string()));
        }
        Ok(Self::from_validated(edges))
    }

    fn from_validated(edges: Vec<Vec3>) -> Self {
        let ints = IntVectors::new(&edges);
        EdgeVectors { edges, ints }
    }

    pub fn as_slice(&self) -> &[Vec3] {
        &self.edges
    }

    pub fn iter(&self) -> impl Iterator<Item = &Vec3> {
        self.edges.iter()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn sum(&self) -> Vec3 {
        self.edges.iter().fold(Vec3::zero(), |acc, e| &acc + e)
    }

    pub(crate) fn ints(&self) -> &IntVectors {
        &self.ints
    }

    pub(crate) fn signs_for(&self, dir: &IntDirection) -> Result<Vec<Sign>, GeometryError> {
        (0..self.ints.len())
            .map(|i| match self.ints.dot_sign(i, dir) {
                Ordering::Greater => Ok(Sign::Plus),
                Ordering::Less => Ok(Sign::Minus),
                Ordering::Equal => Err(GeometryError::NonGenericDirection { index: i }),
            })
            .collect()
    }

    /// Descent count without materializing the pattern; `None` if the
    /// direction is not generic.
    pub(crate) fn descents_for(&self, dir: &IntDirection) -> Option<usize> {
        let n = self.ints.len();
        let first = self.ints.dot_sign(0, dir);
        if first == Ordering::Equal {
            return None;
        }
        let mut prev = first;
        let mut descents = 0;
        for i in 1..n {
            let s = self.ints.dot_sign(i, dir);
            if s == Ordering::Equal {
                return None;
            }
            if prev == Ordering::Greater && s == Ordering::Less {
                descents += 1;
            }
            prev = s;
        }
        if prev == Ordering::Greater && first == Ordering::Less {
            descents += 1;
        }
        Some(descents)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Direction {
    v: Vec3,
}

impl Direction {
    pub fn new(v: Vec3) -> Result<Self, GeometryError> {
        if v.is_zero() {
            return Err(GeometryError::ZeroDirection);
        }
        Ok(Direction { v })
    }

    pub fn from_ints(x: i64, y: i64, z: i64) -> Result<Self, GeometryError> {
        Self::new(Vec3::from_ints(x, y, z))
    }

    pub fn vector(&self) -> &Vec3 {
        &self.v
    }

    pub fn negated(&self) -> Direction {
        Direction { v: -&self.v }
    }

    pub(crate) fn int_form(&self) -> IntDirection {
        IntDirection::from_big(self.v.primitive_integer())
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.v.fmt(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// A cyclic sign sequence together with its number of `+ -> -` transitions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignPattern {
    signs: Vec<Sign>,
    descents: usize,
}

impl SignPattern {
    pub fn from_signs(signs: Vec<Sign>) -> Self {
        let descents = cyclic_transitions(&signs, Sign::Plus, Sign::Minus);
        SignPattern { signs, descents }
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    pub fn descents(&self) -> usize {
        self.descents
    }

    pub fn ascents(&self) -> usize {
        cyclic_transitions(&self.signs, Sign::Minus, Sign::Plus)
    }

    pub fn negated(&self) -> SignPattern {
        SignPattern::from_signs(self.signs.iter().map(|s| s.flip()).collect())
    }
}

impl fmt::Display for SignPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.signs {
            write!(f, "{}", s.as_char())?;
        }
        Ok(())
    }
}

fn cyclic_transitions(signs: &[Sign], from: Sign, to: Sign) -> usize {
    let n = signs.len();
    (0..n)
        .filter(|&i| signs[i] == from && signs[(i + 1) % n] == to)
        .count()
}

pub fn sign_pattern(e: &EdgeVectors, v: &Direction) -> Result<SignPattern, GeometryError> {
    e.signs_for(&v.int_form()).map(SignPattern::from_signs)
}

/// Number of local maxima of the projection onto the line spanned by `v`.
pub fn descent_count(e: &EdgeVectors, v: &Direction) -> Result<usize, GeometryError> {
    sign_pattern(e, v).map(|p| p.descents())
}

/// Output of [`quantize`].
#[derive(Debug, Clone)]
pub struct Quantized {
    pub knot: PolygonalKnot,
    pub scale: Rational,
}

pub const QUANTIZE_WARNING: &str =
    "warning: rounding moved vertices; knot type preservation has not been verified";

/// Scales and rounds coordinates to integers carrying `digits` significant
/// digits relative to the largest absolute coordinate, rounding half away
/// from zero.
pub fn quantize(p: &PolygonalKnot, digits: u32) -> Result<Quantized, GeometryError> {
    if digits == 0 {
        return Err(GeometryError::InvalidDigits);
    }
    let max_abs = p
        .vertices()
        .iter()
        .flat_map(|v| v.0.iter())
        .map(|x| x.abs())
        .max()
        .unwrap_or_else(Rational::zero);
    if max_abs.is_zero() {
        return quantize_with_scale(p, &rational(1));
    }
    let exponent = decimal_exponent(&max_abs);
    let shift = digits as i64 - 1 - exponent;
    let ten = BigInt::from(10);
    let scale = if shift >= 0 {
        Rational::from_integer(num_traits::pow(ten, shift as usize))
    } else {
        Rational::new(BigInt::from(1), num_traits::pow(ten, (-shift) as usize))
    };
    quantize_with_scale(p, &scale)
}

/// `floor(log10(x))` for positive rational `x`, computed exactly.
fn decimal_exponent(x: &Rational) -> i64 {
    let ten = Rational::from_integer(BigInt::from(10));
    let one = rational(1);
    let mut e = 0i64;
    let mut y = x.clone();
    while y >= ten {
        y /= &ten;
        e += 1;
    }
    while y < one {
        y *= &ten;
        e -= 1;
    }
    e
}

/// Multiplies every coordinate by `scale` and rounds. Offsets from the first
/// vertex are rounded and re-added to the rounded first vertex, so edges of
/// the output are exact differences and close up.
pub fn quantize_with_scale(
    p: &PolygonalKnot,
    scale: &Rational,
) -> Result<Quantized, GeometryError> {
    let round_vec = |v: &Vec3| {
        Vec3([
            Rational::from_integer(round_half_away(&(&v.0[0] * scale))),
            Rational::from_integer(round_half_away(&(&v.0[1] * scale))),
            Rational::from_integer(round_half_away(&(&v.0[2] * scale))),
        ])
    };
    let anchor = &p.vertices()[0];
    let base = round_vec(anchor);
    let vertices = p
        .vertices()
        .iter()
        .map(|v| &base + &round_vec(&(v - anchor)))
        .collect();
    let knot = PolygonalKnot::new(p.name(), vertices, p.provenance())?;
    Ok(Quantized {
        knot,
        scale: scale.clone(),
    })
}

/// Floating-point vertex list, for display and corpus comparison only.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproxKnot {
    pub name: String,
    pub vertices: Vec<[f64; 3]>,
}

impl ApproxKnot {
    pub fn from_exact(p: &PolygonalKnot) -> Self {
        ApproxKnot {
            name: p.name().to_string(),
            vertices: p.vertices().iter().map(Vec3::to_f64).collect(),
        }
    }

    /// Largest coordinate difference between corresponding vertices.
    pub fn max_deviation(&self, other: &ApproxKnot) -> f64 {
        if self.vertices.len() != other.vertices.len() {
            return f64::INFINITY;
        }
        self.vertices
            .iter()
            .zip(&other.vertices)
            .flat_map(|(a, b)| (0..3).map(move |c| (a[c] - b[c]).abs()))
            .fold(0.0, f64::max)
    }
}

fn sub3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn unit3(a: [f64; 3]) -> [f64; 3] {
    let n = dot3(a, a).sqrt();
    [a[0] / n, a[1] / n, a[2] / n]
}

/// Moves the curve by a rotation and translation so that the first vertex is
/// at the origin, the second on the positive x-axis and the third in the
/// xy-plane with positive y. Coordinates with magnitude below `tolerance`
/// are snapped to zero.
pub fn normalize_pose(p: &PolygonalKnot, tolerance: f64) -> Result<ApproxKnot, GeometryError> {
    let v = p.vertices();
    if (&v[1] - &v[0]).cross(&(&v[2] - &v[0])).is_zero() {
        return Err(GeometryError::CollinearPrefix);
    }
    let pts: Vec<[f64; 3]> = v.iter().map(Vec3::to_f64).collect();
    let origin = pts[0];
    let x_axis = unit3(sub3(pts[1], origin));
    let w = sub3(pts[2], origin);
    let along = dot3(w, x_axis);
    let y_axis = unit3([
        w[0] - along * x_axis[0],
        w[1] - along * x_axis[1],
        w[2] - along * x_axis[2],
    ]);
    let z_axis = cross3(x_axis, y_axis);
    let snap = |x: f64| if x.abs() < tolerance { 0.0 } else { x };
    let vertices = pts
        .iter()
        .map(|&q| {
            let d = sub3(q, origin);
            [
                snap(dot3(d, x_axis)),
                snap(dot3(d, y_axis)),
                snap(dot3(d, z_axis)),
            ]
        })
        .collect();
    Ok(ApproxKnot {
        name: p.name().to_string(),
        vertices,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::ratio;

    fn square() -> PolygonalKnot {
        PolygonalKnot::from_int_vertices("square", &[[0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0]])
            .unwrap()
    }

    fn skew_quadrilateral() -> PolygonalKnot {
        // edges (1,0,1), (0,1,-1), (-1,0,1), (0,-1,-1)
        PolygonalKnot::from_int_vertices("skew", &[[0, 0, 0], [1, 0, 1], [1, 1, 0], [0, 1, 1]])
            .unwrap()
    }

    #[test]
    fn square_edges() {
        let e = edge_vectors(&square()).unwrap();
        let expected = [[1, 0, 0], [0, 1, 0], [-1, 0, 0], [0, -1, 0]];
        for (edge, want) in e.iter().zip(expected) {
            assert_eq!(*edge, Vec3::from_ints(want[0], want[1], want[2]));
        }
        assert!(e.sum().is_zero());
    }

    #[test]
    fn square_pattern() {
        let e = square().edges();
        let v = Direction::new(Vec3::new(rational(1), ratio(1, 2), rational(0))).unwrap();
        let p = sign_pattern(&e, &v).unwrap();
        assert_eq!(p.to_string(), "++--");
        assert_eq!(p.descents(), 1);
        assert_eq!(descent_count(&e, &v).unwrap(), 1);
    }

    #[test]
    fn skew_quadrilateral_alternates() {
        let e = skew_quadrilateral().edges();
        assert_eq!(e.as_slice()[0], Vec3::from_ints(1, 0, 1));
        assert_eq!(e.as_slice()[3], Vec3::from_ints(0, -1, -1));
        let v = Direction::from_ints(0, 0, 1).unwrap();
        let p = sign_pattern(&e, &v).unwrap();
        assert_eq!(p.to_string(), "+-+-");
        assert_eq!(descent_count(&e, &v).unwrap(), 2);
    }

    #[test]
    fn vertical_direction_is_not_generic_for_square() {
        let e = square().edges();
        let v = Direction::from_ints(0, 0, 1).unwrap();
        assert_eq!(
            descent_count(&e, &v),
            Err(GeometryError::NonGenericDirection { index: 0 })
        );
    }

    #[test]
    fn wraparound_descent_counts() {
        // + at the end and - at the start contributes one descent
        let p = SignPattern::from_signs(vec![Sign::Minus, Sign::Plus, Sign::Plus]);
        assert_eq!(p.descents(), 1);
        assert_eq!(p.ascents(), 1);
        let q = SignPattern::from_signs(vec![Sign::Plus; 5]);
        assert_eq!(q.descents(), 0);
    }

    #[test]
    fn degenerate_inputs() {
        let repeated =
            PolygonalKnot::from_int_vertices("r", &[[0, 0, 0], [1, 0, 0], [1, 0, 0], [0, 1, 0]]);
        assert_eq!(
            repeated,
            Err(GeometryError::DegeneratePolygon(
                Degeneracy::RepeatedVertex(1)
            ))
        );
        let line = PolygonalKnot::from_int_vertices("l", &[[0, 0, 0], [1, 0, 0], [3, 0, 0]]);
        assert_eq!(
            line,
            Err(GeometryError::DegeneratePolygon(Degeneracy::Collinear))
        );
        let two = PolygonalKnot::from_int_vertices("t", &[[0, 0, 0], [1, 0, 0]]);
        assert_eq!(
            two,
            Err(GeometryError::DegeneratePolygon(
                Degeneracy::TooFewVertices(2)
            ))
        );
        let open =
            EdgeVectors::from_edges(vec![Vec3::from_ints(1, 0, 0), Vec3::from_ints(0, 1, 0)]);
        assert!(matches!(open, Err(GeometryError::OpenPolygon(_))));
        assert_eq!(
            Direction::from_ints(0, 0, 0),
            Err(GeometryError::ZeroDirection)
        );
    }

    #[test]
    fn quantize_rounds_to_significant_digits() {
        let p = PolygonalKnot::new(
            "q",
            vec![
                Vec3::zero(),
                Vec3::new(ratio(99963, 100000), rational(0), rational(0)),
                Vec3::new(ratio(1, 2), ratio(7, 10), rational(0)),
            ],
            "",
        )
        .unwrap();
        let q = quantize(&p, 3).unwrap();
        assert_eq!(q.scale, rational(1000));
        assert_eq!(q.knot.vertices()[1], Vec3::from_ints(1000, 0, 0));
        assert_eq!(q.knot.vertices()[2], Vec3::from_ints(500, 700, 0));
    }

    #[test]
    fn quantize_is_identity_on_integers_at_unit_scale() {
        let p = square();
        let q = quantize_with_scale(&p, &rational(1)).unwrap();
        assert_eq!(q.knot, p);
        let big =
            PolygonalKnot::from_int_vertices("b", &[[0, 0, 0], [512, 0, 0], [3, 401, 7]]).unwrap();
        assert_eq!(quantize(&big, 3).unwrap().knot, big);
    }

    #[test]
    fn zero_digits_rejected() {
        assert_eq!(
            quantize(&square(), 0).unwrap_err(),
            GeometryError::InvalidDigits
        );
    }

    #[test]
    fn normalize_fixed_point_and_collinear_prefix() {
        let p = PolygonalKnot::from_int_vertices(
            "n",
            &[[0, 0, 0], [1000, 0, 0], [92, 419, 0], [268, -564, 44]],
        )
        .unwrap();
        let n = normalize_pose(&p, 1e-9).unwrap();
        assert!(n.max_deviation(&ApproxKnot::from_exact(&p)) < 1e-9);

        let c =
            PolygonalKnot::from_int_vertices("c", &[[0, 0, 0], [1, 0, 0], [2, 0, 0], [0, 1, 0]])
                .unwrap();
        assert_eq!(
            normalize_pose(&c, 1e-9),
            Err(GeometryError::CollinearPrefix)
        );
    }
}
