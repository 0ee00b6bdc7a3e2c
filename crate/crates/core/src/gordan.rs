//! Gordan's theorem of the alternative, decided in exact arithmetic.
//!
//! For a matrix `A` with columns `a_1..a_l` exactly one of the following
//! holds: some `v` has `v·a_j > 0` for every column, or some nonzero `u >= 0`
//! has `A u = 0`. [`gordan_decide`] runs a Phase-I simplex on
//! `A u = 0, sum(u) = 1, u >= 0` with Bland's rule. A feasible basis yields
//! the null combination; an infeasible one yields Farkas multipliers whose
//! first three entries, negated, form a strictly separating direction.
//! Either certificate is re-verified before it is returned.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::number::{clear_denominators, Rational, Vec3};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GordanError {
    #[error("matrix must have at least one column")]
    Empty,
    #[error("vector has length {got}, matrix has {expected} columns")]
    DimensionMismatch { expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GordanMatrix {
    columns: Vec<Vec3>,
}

impl GordanMatrix {
    pub fn new(columns: Vec<Vec3>) -> Result<Self, GordanError> {
        if columns.is_empty() {
            return Err(GordanError::Empty);
        }
        Ok(GordanMatrix { columns })
    }

    pub fn from_int_columns(columns: &[[i64; 3]]) -> Result<Self, GordanError> {
        Self::new(
            columns
                .iter()
                .map(|&[x, y, z]| Vec3::from_ints(x, y, z))
                .collect(),
        )
    }

    pub fn columns(&self) -> &[Vec3] {
        &self.columns
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    /// `A u`.
    pub fn apply(&self, u: &[Rational]) -> Result<Vec3, GordanError> {
        self.check_len(u.len())?;
        Ok(self
            .columns
            .iter()
            .zip(u)
            .fold(Vec3::zero(), |acc, (col, x)| &acc + &col.scale(x)))
    }

    /// `vᵀA`.
    pub fn row_products(&self, v: &Vec3) -> Vec<Rational> {
        self.columns.iter().map(|c| v.dot(c)).collect()
    }

    fn check_len(&self, got: usize) -> Result<(), GordanError> {
        if got != self.columns.len() {
            return Err(GordanError::DimensionMismatch {
                expected: self.columns.len(),
                got,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// `v` with `vᵀA > 0` entrywise; primitive integer entries.
    SeparatingDirection(Vec3),
    /// `u >= 0`, `u != 0`, `A u = 0`; integer entries with gcd 1.
    NullCombination(Vec<BigInt>),
}

impl Certificate {
    pub fn is_null_combination(&self) -> bool {
        matches!(self, Certificate::NullCombination(_))
    }

    pub fn null_combination(&self) -> Option<&[BigInt]> {
        match self {
            Certificate::NullCombination(u) => Some(u),
            Certificate::SeparatingDirection(_) => None,
        }
    }

    pub fn separating_direction(&self) -> Option<&Vec3> {
        match self {
            Certificate::SeparatingDirection(v) => Some(v),
            Certificate::NullCombination(_) => None,
        }
    }
}

/// Why a vector fails to be a nonnegative null combination.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NullCheckFailure {
    Negative { index: usize },
    ZeroVector,
    NonzeroProduct(Box<Vec3>),
}

impl fmt::Display for NullCheckFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NullCheckFailure::Negative { index } => {
                write!(f, "entry {} is negative", index + 1)
            }
            NullCheckFailure::ZeroVector => write!(f, "vector is zero"),
            NullCheckFailure::NonzeroProduct(r) => write!(f, "product is {r}, not zero"),
        }
    }
}

/// Checks `u >= 0`, `u != 0`, `A u = 0` exactly, reporting the first failure.
pub fn check_null_combination(
    a: &GordanMatrix,
    u: &[Rational],
) -> Result<Result<(), NullCheckFailure>, GordanError> {
    a.check_len(u.len())?;
    if let Some(index) = u.iter().position(Signed::is_negative) {
        return Ok(Err(NullCheckFailure::Negative { index }));
    }
    if u.iter().all(Zero::is_zero) {
        return Ok(Err(NullCheckFailure::ZeroVector));
    }
    let product = a.apply(u)?;
    if !product.is_zero() {
        return Ok(Err(NullCheckFailure::NonzeroProduct(Box::new(product))));
    }
    Ok(Ok(()))
}

pub fn verify_null_combination(a: &GordanMatrix, u: &[Rational]) -> Result<bool, GordanError> {
    Ok(check_null_combination(a, u)?.is_ok())
}

pub fn verify_separating(a: &GordanMatrix, v: &Vec3) -> bool {
    a.columns.iter().all(|c| v.dot(c).is_positive())
}

pub fn to_rationals(u: &[BigInt]) -> Vec<Rational> {
    u.iter().cloned().map(Rational::from_integer).collect()
}

/// Decides which alternative of Gordan's theorem holds for `a`.
///
/// Panics if the solver produces a certificate that fails its own exact
/// check, which would indicate a bug rather than bad input.
pub fn gordan_decide(a: &GordanMatrix) -> Certificate {
    let rows: Vec<Vec<Rational>> = (0..3)
        .map(|r| a.columns.iter().map(|c| c.0[r].clone()).collect())
        .collect();
    match phase_one(&rows) {
        PhaseOne::Feasible(u) => {
            let cleared = clear_denominators(&u);
            let check = check_null_combination(a, &to_rationals(&cleared))
                .expect("solver returned wrong length");
            assert!(check.is_ok(), "simplex null combination failed: {check:?}");
            Certificate::NullCombination(cleared)
        }
        PhaseOne::Infeasible(y) => {
            let v = Vec3([-&y[0], -&y[1], -&y[2]]);
            let ints = clear_denominators(&v.0);
            let v = Vec3([
                Rational::from_integer(ints[0].clone()),
                Rational::from_integer(ints[1].clone()),
                Rational::from_integer(ints[2].clone()),
            ]);
            assert!(
                verify_separating(a, &v),
                "Farkas direction {v} does not separate"
            );
            Certificate::SeparatingDirection(v)
        }
    }
}

enum PhaseOne {
    /// A point of `{u >= 0 : rows·u = 0, sum u = 1}`.
    Feasible(Vec<Rational>),
    /// Optimal dual multipliers `y` (one per constraint row, the last one for
    /// the normalization row) with `yᵀ[rows; 1] <= 0` and positive objective.
    Infeasible(Vec<Rational>),
}

/// Phase-I simplex for `rows·u = 0, 1ᵀu = 1, u >= 0` with one artificial
/// variable per constraint. Dense tableau, Bland's rule.
fn phase_one(rows: &[Vec<Rational>]) -> PhaseOne {
    let n = rows[0].len();
    let m = rows.len() + 1;
    let width = n + m;

    let mut tableau: Vec<Vec<Rational>> = Vec::with_capacity(m);
    let mut rhs: Vec<Rational> = Vec::with_capacity(m);
    for (r, row) in rows.iter().enumerate() {
        let mut t = row.clone();
        t.resize(width, Rational::zero());
        t[n + r] = Rational::one();
        tableau.push(t);
        rhs.push(Rational::zero());
    }
    let mut last = vec![Rational::one(); n];
    last.resize(width, Rational::zero());
    last[n + m - 1] = Rational::one();
    tableau.push(last);
    rhs.push(Rational::one());

    let mut basis: Vec<usize> = (n..n + m).collect();

    // reduced costs for cost vector (0,..,0,1,..,1)
    let mut reduced: Vec<Rational> = (0..width)
        .map(|j| {
            if j >= n {
                Rational::zero()
            } else {
                -tableau.iter().map(|t| &t[j]).sum::<Rational>()
            }
        })
        .collect();
    let mut objective: Rational = rhs.iter().sum();

    while let Some(enter) = (0..width).find(|&j| reduced[j].is_negative()) {
        let mut leave: Option<(usize, Rational)> = None;
        for r in 0..m {
            if !tableau[r][enter].is_positive() {
                continue;
            }
            let ratio = &rhs[r] / &tableau[r][enter];
            let better = match &leave {
                None => true,
                Some((best, best_ratio)) => {
                    ratio < *best_ratio || (ratio == *best_ratio && basis[r] < basis[*best])
                }
            };
            if better {
                leave = Some((r, ratio));
            }
        }
        // phase-I objective is bounded below by zero
        let (pivot_row, _) = leave.expect("phase-one LP cannot be unbounded");

        let pivot = tableau[pivot_row][enter].clone();
        for x in tableau[pivot_row].iter_mut() {
            *x /= &pivot;
        }
        rhs[pivot_row] /= &pivot;
        let prow = tableau[pivot_row].clone();
        let prhs = rhs[pivot_row].clone();
        for r in 0..m {
            if r == pivot_row || tableau[r][enter].is_zero() {
                continue;
            }
            let factor = tableau[r][enter].clone();
            for (x, p) in tableau[r].iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &factor * p;
                }
            }
            rhs[r] -= &factor * &prhs;
        }
        let factor = reduced[enter].clone();
        for (x, p) in reduced.iter_mut().zip(&prow) {
            if !p.is_zero() {
                *x -= &factor * p;
            }
        }
        objective += &factor * &prhs;
        basis[pivot_row] = enter;
    }

    if objective.is_zero() {
        let mut u = vec![Rational::zero(); n];
        for (r, &b) in basis.iter().enumerate() {
            if b < n {
                u[b] = rhs[r].clone();
            }
        }
        PhaseOne::Feasible(u)
    } else {
        let y = (0..m).map(|r| Rational::one() - &reduced[n + r]).collect();
        PhaseOne::Infeasible(y)
    }
}
