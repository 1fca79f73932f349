//! LDLT decomposition with a proper (diagonal) D in exact rational
//! arithmetic: greedy two-phase pivoting, detection of matrices that would
//! need 2×2 blocks, and the diagonal-split fallback Q = Q̃ + δ·I that
//! restores a proper factorization for Q̃.

use crate::matrix::{Permutation, SymRationalMatrix};
use crate::rational::{rat, Rational};
use num_traits::{Signed, Zero};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PivotStrategy {
    /// No pivoting: always eliminate the leading coordinate.
    None,
    /// Largest positive diagonal entry; once none remain, most negative.
    Phase1,
    /// Phase1, then reorder the easy block so its pivots come smallest-first.
    Phase1Then2,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LdltError {
    ZeroPivot { step: usize },
    NonPositiveDiagonal { index: usize },
    InvalidDelta,
    SplitExhausted { attempts: usize },
}

impl fmt::Display for LdltError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LdltError::ZeroPivot { step } => {
                write!(f, "zero pivot at elimination step {step}")
            }
            LdltError::NonPositiveDiagonal { index } => {
                let i = index + 1;
                write!(f, "diagonal entry ({i},{i}) too small to split")
            }
            LdltError::InvalidDelta => write!(f, "split amount must be nonnegative"),
            LdltError::SplitExhausted { attempts } => {
                write!(f, "no proper factorization after {attempts} diagonal splits")
            }
        }
    }
}

impl std::error::Error for LdltError {}

/// Either a proper factorization or the statement that some remainder had an
/// all-zero diagonal next to a nonzero off-diagonal entry — a 2×2-block
/// situation we detect but never solve.
#[derive(Debug, Clone, PartialEq)]
pub enum Ldlt {
    Factorization(LdltFactorization),
    NeedsBlocks { step: usize },
}

impl Ldlt {
    pub fn needs_blocks(&self) -> bool {
        matches!(self, Ldlt::NeedsBlocks { .. })
    }

    pub fn into_factorization(self) -> Option<LdltFactorization> {
        match self {
            Ldlt::Factorization(f) => Some(f),
            Ldlt::NeedsBlocks { .. } => None,
        }
    }
}

/// permᵀ·Q·perm = L·diag(d)·Lᵀ exactly; L unit lower triangular.
/// `first_difficult` is the first index whose d entry is ≤ 0 (== dim when
/// every entry is positive); coordinates from there on are the difficult
/// ones.
#[derive(Debug, Clone, PartialEq)]
pub struct LdltFactorization {
    pub perm: Permutation,
    pub l: Vec<Vec<Rational>>,
    pub d: Vec<Rational>,
    pub first_difficult: usize,
}

impl LdltFactorization {
    pub fn dim(&self) -> usize {
        self.d.len()
    }

    pub fn difficult_count(&self) -> usize {
        self.d.len() - self.first_difficult
    }

    /// L·diag(d)·Lᵀ; equals permᵀ·Q·perm for a valid factorization.
    pub fn reconstruct(&self) -> SymRationalMatrix {
        SymRationalMatrix::from_fn(self.d.len(), |i, j| {
            let mut s = Rational::zero();
            for m in 0..=i.min(j) {
                s += &self.l[i][m] * &self.d[m] * &self.l[j][m];
            }
            s
        })
    }

    /// Exact sign counts of d: (positive, zero, negative).
    pub fn d_sign_counts(&self) -> (usize, usize, usize) {
        let pos = self.d.iter().filter(|v| v.is_positive()).count();
        let neg = self.d.iter().filter(|v| v.is_negative()).count();
        (pos, self.d.len() - pos - neg, neg)
    }

    pub fn lagrange_expansion(&self) -> LagrangeExpansion {
        let n = self.d.len();
        let mut inner = vec![vec![Rational::zero(); n]; n];
        for i in 0..n {
            for j in i..n {
                inner[i][j] = self.l[j][i].clone();
            }
        }
        LagrangeExpansion {
            outer: self.d.clone(),
            inner,
            first_difficult: self.first_difficult,
        }
    }
}

/// Q[perm·x] = Σ_i outer_i·(x_i + Σ_{j>i} inner[i][j]·x_j)²; inner = Lᵀ, so
/// inner[i][i] = 1 and only entries with j ≥ i are meaningful.
#[derive(Debug, Clone, PartialEq)]
pub struct LagrangeExpansion {
    pub outer: Vec<Rational>,
    pub inner: Vec<Vec<Rational>>,
    pub first_difficult: usize,
}

impl LagrangeExpansion {
    pub fn dim(&self) -> usize {
        self.outer.len()
    }

    /// The i-th linear form Σ_{j≥i} inner[i][j]·x_j.
    pub fn linear_form(&self, i: usize, x: &[Rational]) -> Rational {
        (i..x.len()).fold(Rational::zero(), |acc, j| acc + &self.inner[i][j] * &x[j])
    }

    pub fn evaluate(&self, x: &[Rational]) -> Rational {
        assert_eq!(x.len(), self.dim());
        (0..self.dim()).fold(Rational::zero(), |acc, i| {
            let s = self.linear_form(i, x);
            acc + &self.outer[i] * &s * &s
        })
    }
}

/// One elimination step: move `pivot` to the front, then split off
/// E = Q[pivot][pivot]. Returns (C·E⁻¹, E, B − C·E⁻¹·Cᵀ).
pub fn ldlt_step(
    q: &SymRationalMatrix,
    pivot: usize,
) -> Result<(Vec<Rational>, Rational, SymRationalMatrix), LdltError> {
    let n = q.dim();
    assert!(pivot < n, "pivot index out of range");
    assert!(n >= 2, "a step needs at least two coordinates");
    let t = Permutation::transposition(n, 0, pivot);
    let qt = q.symmetric_permute(&t).expect("same dimension");
    let e = qt.get(0, 0).clone();
    if e.is_zero() {
        return Err(LdltError::ZeroPivot { step: 0 });
    }
    let l_column: Vec<Rational> = (1..n).map(|i| qt.get(i, 0) / &e).collect();
    let remainder = SymRationalMatrix::from_fn(n - 1, |i, j| {
        qt.get(i + 1, j + 1) - qt.get(i + 1, 0) * qt.get(j + 1, 0) / &e
    });
    Ok((l_column, e, remainder))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum PivotRule {
    Leading,
    LargestPositiveThenNegative,
    SmallestNonzero,
}

/// In-place elimination with full symmetric swaps. The already-computed part
/// of L swaps rows along with the working matrix, so the invariant
/// "map-permuted Q = L·diag(d)·Lᵀ so far" holds at every step.
fn decompose_loop(q: &SymRationalMatrix, rule: PivotRule) -> Result<Ldlt, LdltError> {
    let n = q.dim();
    let mut w = q.rows();
    let mut l: Vec<Vec<Rational>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rational::from_integer(1.into()) } else { Rational::zero() }).collect())
        .collect();
    let mut d = vec![Rational::zero(); n];
    let mut map: Vec<usize> = (0..n).collect();

    for k in 0..n {
        let selected = match rule {
            PivotRule::Leading => (!w[k][k].is_zero()).then_some(k),
            PivotRule::LargestPositiveThenNegative => {
                let mut best: Option<usize> = None;
                for i in k..n {
                    if w[i][i].is_positive() && best.is_none_or(|b| w[i][i] > w[b][b]) {
                        best = Some(i);
                    }
                }
                if best.is_none() {
                    for i in k..n {
                        if w[i][i].is_negative() && best.is_none_or(|b| w[i][i] < w[b][b]) {
                            best = Some(i);
                        }
                    }
                }
                best
            }
            PivotRule::SmallestNonzero => {
                let mut best: Option<usize> = None;
                for i in k..n {
                    if !w[i][i].is_zero() && best.is_none_or(|b| w[i][i] < w[b][b]) {
                        best = Some(i);
                    }
                }
                best
            }
        };

        let pivot = match selected {
            Some(p) => p,
            None => {
                let block_zero = (k..n).all(|i| (k..=i).all(|j| w[i][j].is_zero()));
                if block_zero {
                    break; // proper: trailing d entries stay zero
                }
                let diag_zero = (k..n).all(|i| w[i][i].is_zero());
                if diag_zero {
                    return Ok(Ldlt::NeedsBlocks { step: k });
                }
                // only reachable without pivoting: a usable entry exists
                // elsewhere on the diagonal but the rule refuses to move it
                return Err(LdltError::ZeroPivot { step: k });
            }
        };

        if pivot != k {
            w.swap(k, pivot);
            for row in w.iter_mut() {
                row.swap(k, pivot);
            }
            for c in 0..k {
                let tmp = l[k][c].clone();
                l[k][c] = l[pivot][c].clone();
                l[pivot][c] = tmp;
            }
            map.swap(k, pivot);
        }

        let e = w[k][k].clone();
        d[k] = e.clone();
        for i in k + 1..n {
            l[i][k] = &w[i][k] / &e;
        }
        for i in k + 1..n {
            for j in k + 1..=i {
                let v = &w[i][j] - &w[i][k] * &w[j][k] / &e;
                w[j][i] = v.clone();
                w[i][j] = v;
            }
        }
    }

    let first_difficult = d.iter().position(|v| !v.is_positive()).unwrap_or(n);
    Ok(Ldlt::Factorization(LdltFactorization {
        perm: Permutation::from_map(map),
        l,
        d,
        first_difficult,
    }))
}

pub fn ldlt_decompose(q: &SymRationalMatrix, strategy: PivotStrategy) -> Result<Ldlt, LdltError> {
    match strategy {
        PivotStrategy::None => decompose_loop(q, PivotRule::Leading),
        PivotStrategy::Phase1 => decompose_loop(q, PivotRule::LargestPositiveThenNegative),
        PivotStrategy::Phase1Then2 => {
            let ph1 = decompose_loop(q, PivotRule::LargestPositiveThenNegative)?;
            let Ldlt::Factorization(f1) = ph1 else {
                return Ok(ph1);
            };
            let e = f1.first_difficult;
            if e <= 1 {
                return Ok(Ldlt::Factorization(f1));
            }
            // The easy part of the expansion: leading e×e block of
            // L·diag(d_0..d_{e-1}, 0, ..)·Lᵀ. Positive definite, so the
            // smallest-pivot pass below cannot fail.
            let rt = SymRationalMatrix::from_fn(e, |i, j| {
                let mut s = Rational::zero();
                for m in 0..=i.min(j) {
                    s += &f1.l[i][m] * &f1.d[m] * &f1.l[j][m];
                }
                s
            });
            let Ldlt::Factorization(f2) = decompose_loop(&rt, PivotRule::SmallestNonzero)? else {
                return Err(LdltError::ZeroPivot { step: e });
            };
            let mut map2 = f2.perm.map().to_vec();
            map2.extend(e..q.dim());
            let p = f1.perm.compose(&Permutation::from_map(map2));
            let qp = q.symmetric_permute(&p).expect("same dimension");
            // Unpivoted replay: the reordered easy block is positive definite
            // and the tail repeats phase 1's own pivot order, so this cannot
            // dead-end.
            let Ldlt::Factorization(f3) = decompose_loop(&qp, PivotRule::Leading)? else {
                return Err(LdltError::ZeroPivot { step: 0 });
            };
            Ok(Ldlt::Factorization(LdltFactorization { perm: p, ..f3 }))
        }
    }
}

/// Q = Q̃ + δ·I with Q̃ = Q − δ·I. Requires every diagonal entry > δ so that
/// Q̃ keeps a fully positive diagonal.
pub fn diagonal_split(
    q: &SymRationalMatrix,
    delta: &Rational,
) -> Result<(SymRationalMatrix, SymRationalMatrix), LdltError> {
    if delta.is_negative() {
        return Err(LdltError::InvalidDelta);
    }
    let n = q.dim();
    if delta.is_zero() {
        return Ok((q.clone(), SymRationalMatrix::zeros(n)));
    }
    for (i, v) in q.diag().iter().enumerate() {
        if v <= delta {
            return Err(LdltError::NonPositiveDiagonal { index: i });
        }
    }
    let shaved = SymRationalMatrix::identity(n).scale(delta);
    let qtilde = q.sub(&shaved).expect("same dimension");
    Ok((qtilde, shaved))
}

#[derive(Debug, Clone)]
pub struct DiagonalSplit {
    pub delta: Rational,
    pub qtilde: SymRationalMatrix,
    pub nonneg: SymRationalMatrix,
    pub factorization: LdltFactorization,
}

/// Search for a δ whose shaved matrix factors properly: start at half the
/// smallest diagonal entry, halve on failure, at most 8 attempts.
pub fn diagonal_split_schedule(q: &SymRationalMatrix) -> Result<DiagonalSplit, LdltError> {
    let diag = q.diag();
    let mut argmin = 0;
    for i in 1..diag.len() {
        if diag[i] < diag[argmin] {
            argmin = i;
        }
    }
    if !diag[argmin].is_positive() {
        return Err(LdltError::NonPositiveDiagonal { index: argmin });
    }
    let mut delta = &diag[argmin] * rat(1, 2);
    for _ in 0..8 {
        let (qtilde, nonneg) = diagonal_split(q, &delta)?;
        match ldlt_decompose(&qtilde, PivotStrategy::Phase1Then2)? {
            Ldlt::Factorization(factorization) => {
                return Ok(DiagonalSplit {
                    delta,
                    qtilde,
                    nonneg,
                    factorization,
                })
            }
            Ldlt::NeedsBlocks { .. } => delta = &delta * rat(1, 2),
        }
    }
    Err(LdltError::SplitExhausted { attempts: 8 })
}

/// Exact: some factorization exists whose pivots are all positive.
pub fn is_positive_definite(q: &SymRationalMatrix) -> bool {
    matches!(
        ldlt_decompose(q, PivotStrategy::Phase1),
        Ok(Ldlt::Factorization(ref f)) if f.first_difficult == f.dim()
    )
}

/// Exact: some factorization exists whose pivots are all ≥ 0. A block-needing
/// matrix never qualifies — its stuck remainder has a zero diagonal next to a
/// nonzero off-diagonal entry, which no positive semidefinite matrix allows.
pub fn is_positive_semidefinite(q: &SymRationalMatrix) -> bool {
    matches!(
        ldlt_decompose(q, PivotStrategy::Phase1),
        Ok(Ldlt::Factorization(ref f)) if f.d.iter().all(|v| !v.is_negative())
    )
}
