//! Finite search boxes for difficult coordinates. Three routes produce them:
//! slice minimization for positive semidefinite matrices, the
//! one-difficult-coordinate shortcut, and the SPN split Q = S + N with S
//! positive semidefinite and N entrywise nonnegative. Floating point appears
//! only inside iterative solvers; every bound that the enumeration consumes
//! is re-certified in exact arithmetic.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::eigen::jacobi_eigen;
use crate::enumeration::{CoordBound, DifficultBox};
use crate::ldlt::{ldlt_decompose, LdltFactorization, PivotStrategy};
use crate::matrix::{solve_linear, SymRationalMatrix};
use crate::rational::{
    ceil_minus_sqrt, floor_plus_sqrt, floor_sqrt, rat, rationalize, to_f64, Rational,
};

#[derive(Debug, Clone, PartialEq)]
pub enum BoundsError {
    /// The principal submatrix complementary to the slice coordinate is not
    /// positive definite, so the slice program is not a convex QP.
    NotConvexSlice,
    /// The certified lower bound of the slice minimum is ≤ 0; the box formula
    /// breaks down. The solution is kept so callers can extract a witness.
    NonPositiveMinimum { solution: Box<QpSolution> },
    /// The univariate rescue quadratic has leading coefficient ≤ 0.
    NonPositiveLeading { position: usize },
}

impl fmt::Display for BoundsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundsError::NotConvexSlice => write!(f, "slice complement is not positive definite"),
            BoundsError::NonPositiveMinimum { solution } => write!(
                f,
                "certified slice minimum {} is not positive",
                solution.certified_lower
            ),
            BoundsError::NonPositiveLeading { position } => {
                write!(f, "rescue quadratic at position {position} is not convex")
            }
        }
    }
}

impl std::error::Error for BoundsError {}

/// Result of minimizing Q[x] over x ≥ 0 with x_k fixed. `x_star` and `mu` are
/// full-dimension floats (x_star[k] holds the fixed value, mu[k] = 0); the
/// certified lower bound is exact and never exceeds the true slice minimum.
/// When the exact active-set polish certified, `exact_minimizer` is the
/// full-dimension rational point attaining `certified_lower` exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct QpSolution {
    pub x_star: Vec<f64>,
    pub value: f64,
    pub mu: Vec<f64>,
    pub certified_lower: Rational,
    pub exact_minimizer: Option<Vec<Rational>>,
}

/// The slice QP data after fixing x_k = s: minimize x̂ᵀAx̂ + 2bᵀx̂ + c over
/// x̂ ≥ 0, where A is Q without row/column k, b the scaled k-column and c the
/// scaled corner.
struct SliceProblem {
    a: SymRationalMatrix,
    b: Vec<Rational>,
    c: Rational,
    keep: Vec<usize>,
    k: usize,
    dim: usize,
    scale: Rational,
}

fn slice_problem(q: &SymRationalMatrix, k: usize, s: &Rational) -> SliceProblem {
    let n = q.dim();
    assert!(n >= 2 && k < n, "slice coordinate out of range");
    let keep: Vec<usize> = (0..n).filter(|&i| i != k).collect();
    SliceProblem {
        a: q.remove_index(k),
        b: keep.iter().map(|&i| q.get(i, k) * s).collect(),
        c: q.get(k, k) * s * s,
        keep,
        k,
        dim: n,
        scale: s.clone(),
    }
}

impl SliceProblem {
    fn free_dim(&self) -> usize {
        self.keep.len()
    }

    /// Exact objective at a rational free-coordinate point.
    fn objective(&self, x: &[Rational]) -> Rational {
        let m = self.free_dim();
        let mut v = self.c.clone();
        for i in 0..m {
            v += rat(2, 1) * &self.b[i] * &x[i];
            for j in 0..m {
                v += self.a.get(i, j) * &x[i] * &x[j];
            }
        }
        v
    }

    /// Exact gradient 2(Ax + b).
    fn gradient(&self, x: &[Rational]) -> Vec<Rational> {
        let m = self.free_dim();
        (0..m)
            .map(|i| {
                let mut g = self.b[i].clone();
                for j in 0..m {
                    g += self.a.get(i, j) * &x[j];
                }
                g * rat(2, 1)
            })
            .collect()
    }

    fn embed(&self, x: &[Rational]) -> Vec<Rational> {
        let mut full = vec![Rational::zero(); self.dim];
        full[self.k] = self.scale.clone();
        for (pos, &orig) in self.keep.iter().enumerate() {
            full[orig] = x[pos].clone();
        }
        full
    }
}

/// Projected gradient on the float copy of the slice program with step
/// 1/(2λ_max); runs until the iterate moves < 1e-10 or 10⁶ iterations.
fn projected_gradient(prob: &SliceProblem) -> (Vec<f64>, Vec<f64>, f64) {
    let m = prob.free_dim();
    let af = prob.a.to_f64();
    let bf: Vec<f64> = prob.b.iter().map(to_f64).collect();
    let cf = to_f64(&prob.c);
    let lambda_max = jacobi_eigen(&prob.a)
        .map(|e| e.eigenvalues.last().copied().unwrap_or(0.0))
        .unwrap_or(0.0);
    let step = if lambda_max > 1e-12 {
        1.0 / (2.0 * lambda_max)
    } else {
        1.0
    };
    let mut x = vec![0.0; m];
    let grad = |x: &[f64]| -> Vec<f64> {
        (0..m)
            .map(|i| 2.0 * (bf[i] + (0..m).map(|j| af[i][j] * x[j]).sum::<f64>()))
            .collect()
    };
    for _ in 0..1_000_000 {
        let g = grad(&x);
        let next: Vec<f64> = (0..m).map(|i| (x[i] - step * g[i]).max(0.0)).collect();
        let residual = (0..m).map(|i| (next[i] - x[i]).abs()).fold(0.0, f64::max);
        x = next;
        if residual < 1e-10 {
            break;
        }
    }
    let mu: Vec<f64> = grad(&x).into_iter().map(|g| g.max(0.0)).collect();
    let value = cf
        + (0..m)
            .map(|i| x[i] * (2.0 * bf[i] + (0..m).map(|j| af[i][j] * x[j]).sum::<f64>()))
            .sum::<f64>();
    (x, mu, value)
}

/// Exact active-set polish: fix the float-active coordinates to zero, solve
/// the unconstrained KKT system on the rest, and accept only if primal
/// feasibility and multiplier signs verify exactly. Convexity then makes the
/// point a global slice minimizer, so the returned value is the exact f(s).
fn exact_polish(prob: &SliceProblem, xf: &[f64]) -> Option<(Rational, Vec<Rational>)> {
    let m = prob.free_dim();
    let inactive: Vec<usize> = (0..m).filter(|&i| xf[i] > 1e-8).collect();
    let mut x = vec![Rational::zero(); m];
    if !inactive.is_empty() {
        let sub: Vec<Vec<Rational>> = inactive
            .iter()
            .map(|&i| inactive.iter().map(|&j| prob.a.get(i, j).clone()).collect())
            .collect();
        let rhs: Vec<Rational> = inactive.iter().map(|&i| -&prob.b[i]).collect();
        let u = solve_linear(&sub, &rhs)?;
        if u.iter().any(|v| v.is_negative()) {
            return None;
        }
        for (pos, &i) in inactive.iter().enumerate() {
            x[i] = u[pos].clone();
        }
    }
    let g = prob.gradient(&x);
    // Gradient components vanish on the inactive set by construction; the
    // active ones are the multipliers and must be ≥ 0 for KKT.
    if g.iter().any(|v| v.is_negative()) {
        return None;
    }
    Some((prob.objective(&x), x))
}

/// Exact Lagrangian dual value c − ¼(2b − μ)ᵀA⁻¹(2b − μ) at the rationalized,
/// clamped multipliers. Any μ ≥ 0 gives a true lower bound by weak duality;
/// a singular A is usable as long as the system is consistent.
fn exact_dual(prob: &SliceProblem, muf: &[f64]) -> Option<Rational> {
    let m = prob.free_dim();
    let mu: Vec<Rational> = muf
        .iter()
        .map(|&v| {
            let r = rationalize(v, 1_000_000);
            if r.is_negative() {
                Rational::zero()
            } else {
                r
            }
        })
        .collect();
    let rhs: Vec<Rational> = (0..m).map(|i| rat(2, 1) * &prob.b[i] - &mu[i]).collect();
    let rows: Vec<Vec<Rational>> = (0..m)
        .map(|i| (0..m).map(|j| prob.a.get(i, j).clone()).collect())
        .collect();
    let y = solve_linear(&rows, &rhs)?;
    let quad = (0..m).fold(Rational::zero(), |acc, i| acc + &rhs[i] * &y[i]);
    Some(&prob.c - quad / rat(4, 1))
}

fn certify(prob: &SliceProblem, xf: &[f64], muf: &[f64]) -> Option<(Rational, Option<Vec<Rational>>)> {
    if let Some((value, x)) = exact_polish(prob, xf) {
        return Some((value, Some(x)));
    }
    exact_dual(prob, muf).map(|g| (g, None))
}

pub fn qp_min_slice(q: &SymRationalMatrix, k: usize) -> Result<QpSolution, BoundsError> {
    qp_min_slice_scaled(q, k, &Rational::from_integer(BigInt::from(1)))
}

/// Minimize Q[x] over x ≥ 0 with x_k = s. The complement block must be
/// positive definite; the certified lower bound is exact.
pub fn qp_min_slice_scaled(
    q: &SymRationalMatrix,
    k: usize,
    s: &Rational,
) -> Result<QpSolution, BoundsError> {
    let prob = slice_problem(q, k, s);
    if !crate::ldlt::is_positive_definite(&prob.a) {
        return Err(BoundsError::NotConvexSlice);
    }
    let (xf, muf, value) = projected_gradient(&prob);
    let (certified, minimizer) =
        certify(&prob, &xf, &muf).expect("positive definite systems are solvable");
    let mut x_star = vec![0.0; prob.dim];
    let mut mu = vec![0.0; prob.dim];
    x_star[k] = to_f64(s);
    for (pos, &orig) in prob.keep.iter().enumerate() {
        x_star[orig] = xf[pos];
        mu[orig] = muf[pos];
    }
    let solution = QpSolution {
        x_star,
        value,
        mu,
        certified_lower: certified,
        exact_minimizer: minimizer.map(|x| prob.embed(&x)),
    };
    if !solution.certified_lower.is_positive() {
        return Err(BoundsError::NonPositiveMinimum {
            solution: Box::new(solution),
        });
    }
    Ok(solution)
}

/// B_k = ⌊√(λ / f(1))⌋ from the scaling law f(s) = s²·f(1): any x ≥ 0 with
/// Q[x] ≤ λ has x_k ≤ √(λ / f(1)). Positioned for a factorization whose
/// single difficult coordinate is the last one and maps to original index k.
pub fn one_difficult_box(
    q: &SymRationalMatrix,
    k: usize,
    lambda: &Rational,
) -> Result<DifficultBox, BoundsError> {
    let sol = qp_min_slice(q, k)?;
    let bound = if lambda.is_negative() {
        0
    } else {
        let quotient = lambda / &sol.certified_lower;
        floor_sqrt(&quotient)
            .to_u64()
            .expect("difficult bound exceeds u64")
    };
    Ok(DifficultBox::new(
        q.dim() - 1,
        vec![CoordBound::Bounded(bound)],
    ))
}

/// Certified lower bound for min{S[x] : x ≥ 0, x_k = 1} when S is positive
/// semidefinite. `Exact` carries the full-dimension rational minimizer; the
/// value of a PSD slice is always ≥ 0 and is attained (convex quadratic over
/// a polyhedron), so an exact 0 pinpoints a kernel direction.
#[derive(Debug, Clone, PartialEq)]
pub enum SliceBound {
    Exact { value: Rational, minimizer: Vec<Rational> },
    Lower(Rational),
    Unavailable,
}

pub fn psd_slice_bound(s: &SymRationalMatrix, k: usize) -> SliceBound {
    if s.dim() == 1 {
        return SliceBound::Exact {
            value: s.get(0, 0).clone(),
            minimizer: vec![Rational::from_integer(BigInt::from(1))],
        };
    }
    let prob = slice_problem(s, k, &Rational::from_integer(BigInt::from(1)));
    let (xf, muf, _) = projected_gradient(&prob);
    match certify(&prob, &xf, &muf) {
        Some((value, Some(x))) => SliceBound::Exact {
            value,
            minimizer: prob.embed(&x),
        },
        Some((value, None)) => SliceBound::Lower(value),
        None => SliceBound::Unavailable,
    }
}

/// Box bound for original coordinate k of Q = S + N at level λ, via the slice
/// lower bound of the PSD part: Q[x] ≥ S[x] on the nonnegative orthant.
pub fn spn_coordinate_bound(s: &SymRationalMatrix, k: usize, lambda: &Rational) -> CoordBound {
    let lower = match psd_slice_bound(s, k) {
        SliceBound::Exact { value, .. } => value,
        SliceBound::Lower(value) => value,
        SliceBound::Unavailable => return CoordBound::Unbounded,
    };
    if !lower.is_positive() {
        return CoordBound::Unbounded;
    }
    if lambda.is_negative() {
        return CoordBound::Bounded(0);
    }
    let quotient = lambda / lower;
    CoordBound::Bounded(
        floor_sqrt(&quotient)
            .to_u64()
            .expect("difficult bound exceeds u64"),
    )
}

/// An exactly verified split Q = S + N with S positive semidefinite and N
/// entrywise nonnegative; `margin` is the smallest pivot of S's factorization.
#[derive(Debug, Clone, PartialEq)]
pub struct SpnSplit {
    pub s: SymRationalMatrix,
    pub n: SymRationalMatrix,
    pub margin: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SpnOutcome {
    Split(SpnSplit),
    /// The alternating projections stalled away from the PSD cone; no split
    /// was even approximately located.
    NotFound,
    /// Numerics converged but exact verification failed, also after the
    /// margin retry.
    Inconclusive,
}

impl SpnOutcome {
    pub fn into_split(self) -> Option<SpnSplit> {
        match self {
            SpnOutcome::Split(s) => Some(s),
            _ => None,
        }
    }
}

fn verify_split(q: &SymRationalMatrix, n: &SymRationalMatrix) -> Option<SpnSplit> {
    if !n.is_entrywise_nonnegative() {
        return None;
    }
    let s = q.sub(n).ok()?;
    let f = ldlt_decompose(&s, PivotStrategy::Phase1)
        .ok()?
        .into_factorization()?;
    if f.d.iter().any(|v| v.is_negative()) {
        return None;
    }
    let margin = f.d.iter().min().cloned().unwrap_or_else(Rational::zero);
    Some(SpnSplit {
        s,
        n: n.clone(),
        margin,
    })
}

fn matrix_from_floats(m: &[Vec<f64>]) -> SymRationalMatrix {
    SymRationalMatrix::from_fn(m.len(), |i, j| {
        Rational::from_float(m[i][j]).unwrap_or_else(Rational::zero)
    })
}

/// Projection of a symmetric float matrix onto the PSD cone by eigenvalue
/// clamping, together with the Frobenius distance moved.
fn psd_project(m: &[Vec<f64>]) -> Option<(Vec<Vec<f64>>, f64)> {
    let n = m.len();
    let eig = jacobi_eigen(&matrix_from_floats(m)).ok()?;
    let mut proj = vec![vec![0.0; n]; n];
    for (idx, &lam) in eig.eigenvalues.iter().enumerate() {
        if lam <= 0.0 {
            continue;
        }
        let v = &eig.vectors[idx];
        for i in 0..n {
            for j in 0..n {
                proj[i][j] += lam * v[i] * v[j];
            }
        }
    }
    let mut dist = 0.0;
    for i in 0..n {
        for j in 0..n {
            let d = m[i][j] - proj[i][j];
            dist += d * d;
        }
    }
    Some((proj, dist.sqrt()))
}

struct DykstraState {
    x: Vec<Vec<f64>>,
    p: Vec<Vec<f64>>,
    r: Vec<Vec<f64>>,
}

/// One round of alternating projections: project x + p onto {N ≥ 0}
/// (optionally shrunk by 1−10⁻³ toward the −𝟙𝟙ᵀ objective), then reflect
/// through the PSD projection of Q − (y + r). Runs until the iterate moves
/// < 1e-10, the split is numerically feasible, the distance stops improving,
/// or `max_iters`.
fn dykstra_phase(
    qf: &[Vec<f64>],
    state: &mut DykstraState,
    shrink: bool,
    max_iters: usize,
) -> Option<()> {
    let n = qf.len();
    let mut best = f64::INFINITY;
    let mut since_best = 0usize;
    for _ in 0..max_iters {
        let mut y = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                let s1 = state.x[i][j] + state.p[i][j];
                y[i][j] = s1.max(0.0);
                state.p[i][j] = s1 - y[i][j];
                if shrink {
                    y[i][j] *= 1.0 - 1e-3;
                }
            }
        }
        let mut target = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                target[i][j] = qf[i][j] - (y[i][j] + state.r[i][j]);
            }
        }
        let (proj, dist) = psd_project(&target)?;
        let mut movement = 0.0f64;
        let mut min_entry = f64::INFINITY;
        for i in 0..n {
            for j in 0..n {
                let z = qf[i][j] - proj[i][j];
                state.r[i][j] = y[i][j] + state.r[i][j] - z;
                movement = movement.max((z - state.x[i][j]).abs());
                min_entry = min_entry.min(z);
                state.x[i][j] = z;
            }
        }
        if dist < 1e-12 && min_entry > -1e-12 {
            break;
        }
        if movement < 1e-10 {
            break;
        }
        if dist < best - 1e-9 {
            best = dist;
            since_best = 0;
        } else {
            since_best += 1;
            if since_best > 300 {
                break;
            }
        }
    }
    Some(())
}

fn clamp_and_distance(qf: &[Vec<f64>], x: &[Vec<f64>]) -> Option<(Vec<Vec<f64>>, f64)> {
    let n = qf.len();
    let mut cand = x.to_vec();
    for row in &mut cand {
        for v in row.iter_mut() {
            *v = v.max(0.0);
        }
    }
    let mut target = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            target[i][j] = qf[i][j] - cand[i][j];
        }
    }
    let (_, dist) = psd_project(&target)?;
    Some((cand, dist))
}

/// Dykstra alternating projections between {N ≥ 0} and {N : Q − N PSD}. The
/// first phase pulls toward the smallest nonnegative part with a 1−10⁻³
/// shrink per outer iteration; the second restores plain feasibility from
/// that warm start (the shrink otherwise keeps tight instances a fraction
/// short of the PSD cone); the third re-targets Q − 10⁻⁴·I so the candidate
/// sits strictly inside the cone whenever the region has that much interior,
/// which is what lets rationalized verification succeed. Returns the clamped
/// float candidate and its PSD distance.
fn dykstra(q: &SymRationalMatrix) -> Option<(Vec<Vec<f64>>, f64)> {
    let n = q.dim();
    let qf = q.to_f64();
    let reset = |state: &mut DykstraState| {
        state.p = vec![vec![0.0f64; n]; n];
        state.r = vec![vec![0.0f64; n]; n];
    };
    let mut state = DykstraState {
        x: vec![vec![0.0f64; n]; n],
        p: Vec::new(),
        r: Vec::new(),
    };
    reset(&mut state);
    dykstra_phase(&qf, &mut state, true, 10_000)?;
    reset(&mut state);
    dykstra_phase(&qf, &mut state, false, 10_000)?;
    let (boundary, boundary_dist) = clamp_and_distance(&qf, &state.x)?;
    let mut shifted = qf.clone();
    for (i, row) in shifted.iter_mut().enumerate() {
        row[i] -= 1e-4;
    }
    reset(&mut state);
    dykstra_phase(&shifted, &mut state, false, 10_000)?;
    let (interior, interior_dist) = clamp_and_distance(&qf, &state.x)?;
    if interior_dist <= boundary_dist {
        Some((interior, interior_dist))
    } else {
        Some((boundary, boundary_dist))
    }
}

/// Search for a split Q = S + N. Exact fast paths first (Q itself PSD, or Q
/// entrywise nonnegative), then the numeric projections; any returned split
/// is exactly verified, with a 10⁻⁶ diagonal margin retry in between.
pub fn spn_decompose(q: &SymRationalMatrix) -> SpnOutcome {
    if let Some(split) = verify_split(q, &SymRationalMatrix::zeros(q.dim())) {
        return SpnOutcome::Split(split);
    }
    if q.is_entrywise_nonnegative() {
        if let Some(split) = verify_split(q, &q.clone()) {
            return SpnOutcome::Split(split);
        }
    }
    let Some((nf, dist)) = dykstra(q) else {
        return SpnOutcome::NotFound;
    };
    if dist > 1e-6 {
        return SpnOutcome::NotFound;
    }
    let n_rat = SymRationalMatrix::from_fn(q.dim(), |i, j| {
        let v = rationalize(nf[i][j], 1_000_000);
        if v.is_negative() {
            Rational::zero()
        } else {
            v
        }
    });
    if let Some(split) = verify_split(q, &n_rat) {
        return SpnOutcome::Split(split);
    }
    let eps = rat(1, 1_000_000);
    let retry = SymRationalMatrix::from_fn(q.dim(), |i, j| {
        if i == j {
            let v = n_rat.get(i, i) - &eps;
            if v.is_negative() {
                Rational::zero()
            } else {
                v
            }
        } else {
            n_rat.get(i, j).clone()
        }
    });
    if let Some(split) = verify_split(q, &retry) {
        return SpnOutcome::Split(split);
    }
    SpnOutcome::Inconclusive
}

/// Boxes for the difficult (zero-pivot) positions of S's factorization, at
/// level λ. Coordinates whose slice bound is not certifiably positive are
/// marked Unbounded and must be rescued per node.
pub fn spn_box(
    split: &SpnSplit,
    fact: &LdltFactorization,
    lambda: &Rational,
) -> DifficultBox {
    let n = fact.dim();
    let bounds: Vec<CoordBound> = (fact.first_difficult..n)
        .map(|pos| spn_coordinate_bound(&split.s, fact.perm.source(pos), lambda))
        .collect();
    DifficultBox::new(fact.first_difficult, bounds)
}

/// Per-node rescue: with positions > `position` fixed to `tail` (permuted
/// order), every kept term of λ ≥ Q[Px] = Σ Dᵢℓᵢ² + N[Px] that involves
/// x_position alone gives the exact univariate constraint
/// (D + N_kk)·v² + 2(D·c + Σ N_kj·x_j)·v ≤ λ; all dropped terms are ≥ 0
/// because S is PSD and N ≥ 0, so the interval is sound. Returns the
/// inclusive integer range (lo > hi when empty).
pub fn spn_quadratic_box(
    split: &SpnSplit,
    fact: &LdltFactorization,
    lambda: &Rational,
    position: usize,
    tail: &[u64],
) -> Result<(u64, u64), BoundsError> {
    let n = fact.dim();
    assert!(position < n, "position out of range");
    assert_eq!(tail.len(), n - 1 - position, "tail length mismatch");
    let orig = fact.perm.source(position);
    let d = &fact.d[position];
    let a = d + split.n.get(orig, orig);
    if !a.is_positive() {
        return Err(BoundsError::NonPositiveLeading { position });
    }
    let mut inner_sum = Rational::zero();
    let mut cross = Rational::zero();
    for (offset, &xj) in tail.iter().enumerate() {
        let j = position + 1 + offset;
        let xj = Rational::from_integer(BigInt::from(xj));
        inner_sum += &fact.l[j][position] * &xj;
        cross += split.n.get(orig, fact.perm.source(j)) * &xj;
    }
    let b = rat(2, 1) * (d * &inner_sum + cross);
    // a·v² + b·v ≤ λ  ⇔  |v + b/(2a)| ≤ √((b² + 4aλ)/(4a²))
    let t = (&b * &b + rat(4, 1) * &a * lambda) / (rat(4, 1) * &a * &a);
    if t.is_negative() {
        return Ok((1, 0));
    }
    let center = -(&b / (rat(2, 1) * &a));
    let hi = floor_plus_sqrt(&center, &t);
    if hi.is_negative() {
        return Ok((1, 0));
    }
    let lo = ceil_minus_sqrt(&center, &t).max(BigInt::zero());
    Ok((
        lo.to_u64().expect("rescue bound exceeds u64"),
        hi.to_u64().expect("rescue bound exceeds u64"),
    ))
}
