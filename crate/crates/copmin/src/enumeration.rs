//! Depth-first enumeration of nonnegative integer vectors with Q[z] ≤ λ.
//!
//! Coordinates are fixed from the last (outermost) to the first, following
//! the Lagrange expansion of an LDLT factorization. Easy coordinates (all
//! later outer coefficients positive) get exact interval bounds; difficult
//! coordinates take their range from an externally supplied box or from
//! per-node rescue quadratics. All pruning is exact rational arithmetic.

use std::fmt;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering as AtomicOrdering};
use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::ldlt::LagrangeExpansion;
use crate::matrix::{NonnegIntVector, Permutation, SymRationalMatrix};
use crate::rational::{ceil_minus_sqrt, floor_plus_sqrt, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EnumerationError {
    DimensionMismatch { expected: usize, got: usize },
    /// A nonzero vector with Q[z] ≤ 0 was found while minimizing: the form is
    /// not strictly copositive and has no positive minimum.
    ZeroValueFound(NonnegIntVector),
    /// A difficult coordinate is marked Unbounded and no rescue produced a
    /// finite range for it.
    UnboundedCoordinate { position: usize },
    NodeBudgetExceeded { budget: u64 },
    /// Minimization found no vector at all below the starting λ, which
    /// violates the caller's promise that λ₀ is an upper bound for the minimum.
    BelowMinimum,
}

impl fmt::Display for EnumerationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EnumerationError::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            EnumerationError::ZeroValueFound(z) => {
                write!(f, "nonzero vector with nonpositive value found: {z:?}")
            }
            EnumerationError::UnboundedCoordinate { position } => {
                write!(f, "no finite bound for difficult coordinate {position}")
            }
            EnumerationError::NodeBudgetExceeded { budget } => {
                write!(f, "enumeration exceeded the node budget of {budget}")
            }
            EnumerationError::BelowMinimum => {
                write!(f, "no vector found below the starting bound")
            }
        }
    }
}

impl std::error::Error for EnumerationError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoordBound {
    Bounded(u64),
    /// No a-priori bound; the coordinate must be rescued per node.
    Unbounded,
}

/// Upper bounds for the difficult coordinates of a factorization, indexed by
/// permuted position `start..n`. Soundness (every z ≥ 0 with Q[z] ≤ λ stays
/// within the bounds) is the producer's contract, not checked here.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifficultBox {
    start: usize,
    bounds: Vec<CoordBound>,
}

impl DifficultBox {
    pub fn new(start: usize, bounds: Vec<CoordBound>) -> Self {
        DifficultBox { start, bounds }
    }

    /// Box for a factorization with no difficult coordinates.
    pub fn all_easy(dim: usize) -> Self {
        DifficultBox {
            start: dim,
            bounds: Vec::new(),
        }
    }

    pub fn uniform(start: usize, dim: usize, bound: u64) -> Self {
        DifficultBox {
            start,
            bounds: vec![CoordBound::Bounded(bound); dim - start],
        }
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn end(&self) -> usize {
        self.start + self.bounds.len()
    }

    pub fn bound(&self, position: usize) -> CoordBound {
        assert!(
            position >= self.start && position < self.end(),
            "position {position} outside difficult range {}..{}",
            self.start,
            self.end()
        );
        self.bounds[position - self.start]
    }

    pub fn bounds(&self) -> &[CoordBound] {
        &self.bounds
    }

    pub fn is_fully_bounded(&self) -> bool {
        self.bounds.iter().all(|b| matches!(b, CoordBound::Bounded(_)))
    }
}

/// Per-node range for an `Unbounded` difficult coordinate: given the permuted
/// position and the already-fixed outer values x_{pos+1..n} (permuted order),
/// return the inclusive value range, already intersected with ℤ≥0. `lo > hi`
/// means the subtree is empty; `None` means no finite range exists and the
/// search aborts with `UnboundedCoordinate`.
pub type Rescue<'a> = &'a (dyn Fn(usize, &[u64]) -> Option<(u64, u64)> + Sync);

#[derive(Debug, Clone, Copy)]
pub struct EnumerationLimits {
    pub max_nodes: u64,
    pub threads: usize,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        EnumerationLimits {
            max_nodes: 100_000_000,
            threads: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationResult {
    pub lambda: Rational,
    /// Sorted lexicographically, no duplicates, zero vector excluded.
    pub vectors: Vec<NonnegIntVector>,
}

#[derive(Clone, Copy, PartialEq)]
enum Mode {
    /// Collect everything with Q[z] ≤ λ for the fixed λ.
    Fixed,
    /// Shrink λ to every strictly smaller value found; error on values ≤ 0.
    Shrink,
}

struct Search<'a> {
    q: &'a SymRationalMatrix,
    exp: &'a LagrangeExpansion,
    perm: &'a Permutation,
    dbox: &'a DifficultBox,
    rescue: Option<Rescue<'a>>,
    mode: Mode,
    max_nodes: u64,
    max_threads: usize,
    lambda: Mutex<Rational>,
    nodes: AtomicU64,
    aborted: AtomicBool,
}

impl<'a> Search<'a> {
    fn current_lambda(&self) -> Rational {
        self.lambda.lock().unwrap().clone()
    }

    fn charge_node(&self) -> Result<(), EnumerationError> {
        let seen = self.nodes.fetch_add(1, AtomicOrdering::Relaxed);
        if seen >= self.max_nodes {
            self.aborted.store(true, AtomicOrdering::Relaxed);
            return Err(EnumerationError::NodeBudgetExceeded {
                budget: self.max_nodes,
            });
        }
        Ok(())
    }

    /// Inclusive value range for the coordinate at `level` given the already
    /// fixed outer coordinates. `sum` is Σ_{j>level} u_{level,j}·x_j and
    /// `consumed` is Σ_{l>level} A_l·ℓ_l², both exact.
    fn value_range(
        &self,
        level: usize,
        x: &[u64],
        sum: &Rational,
        consumed: &Rational,
    ) -> Result<Option<(u64, u64)>, EnumerationError> {
        if level >= self.exp.first_difficult {
            match self.dbox.bound(level) {
                CoordBound::Bounded(b) => Ok(Some((0, b))),
                CoordBound::Unbounded => {
                    let rescue = self.rescue.ok_or(EnumerationError::UnboundedCoordinate {
                        position: level,
                    })?;
                    match rescue(level, &x[level + 1..]) {
                        Some(range) => Ok(Some(range)),
                        None => Err(EnumerationError::UnboundedCoordinate { position: level }),
                    }
                }
            }
        } else {
            // All remaining outer coefficients are positive, so the remaining
            // budget must be nonnegative and bounds the level's square term:
            // A·(v + sum)² ≤ λ − consumed, i.e. |v + sum| ≤ sqrt(R/A).
            let remaining = self.current_lambda() - consumed;
            if remaining.is_negative() {
                return Ok(None);
            }
            let t = remaining / &self.exp.outer[level];
            let center = -sum;
            let lo = ceil_minus_sqrt(&center, &t);
            let hi = floor_plus_sqrt(&center, &t);
            let lo = lo.max(BigInt::zero());
            if hi < lo {
                return Ok(None);
            }
            let lo = lo.to_u64().expect("enumeration bound exceeds u64");
            let hi = hi.to_u64().expect("enumeration bound exceeds u64");
            Ok(Some((lo, hi)))
        }
    }

    fn dfs(
        &self,
        level: usize,
        x: &mut [u64],
        consumed: &Rational,
        all_zero: bool,
        out: &mut Vec<(Rational, NonnegIntVector)>,
    ) -> Result<(), EnumerationError> {
        if self.aborted.load(AtomicOrdering::Relaxed) && self.mode == Mode::Shrink {
            // Another thread already found a nonpositive value; stop early.
            return Ok(());
        }
        let sum = (level + 1..x.len()).fold(Rational::zero(), |acc, j| {
            acc + &self.exp.inner[level][j] * Rational::from_integer(BigInt::from(x[j]))
        });
        let Some((lo, mut hi)) = self.value_range(level, x, &sum, consumed)? else {
            return Ok(());
        };
        let mut lo = lo;
        if level == 0 && all_zero {
            // Exclude the zero vector structurally at the root of the value range.
            lo = lo.max(1);
        }
        if lo > hi {
            return Ok(());
        }
        let mut v = lo;
        loop {
            self.charge_node()?;
            let ell = Rational::from_integer(BigInt::from(v)) + &sum;
            let term = &self.exp.outer[level] * &ell * &ell;
            let consumed_here = consumed + term;
            x[level] = v;
            if level == 0 {
                self.accept_leaf(x, out)?;
            } else {
                self.dfs(level - 1, x, &consumed_here, all_zero && v == 0, out)?;
            }
            // λ may have shrunk; retighten an easy level's upper end in place.
            if level < self.exp.first_difficult && self.mode == Mode::Shrink {
                if let Some((_, new_hi)) = self.value_range(level, x, &sum, consumed)? {
                    hi = hi.min(new_hi);
                } else {
                    break;
                }
            }
            if v >= hi {
                break;
            }
            v += 1;
        }
        Ok(())
    }

    fn accept_leaf(
        &self,
        x: &[u64],
        out: &mut Vec<(Rational, NonnegIntVector)>,
    ) -> Result<(), EnumerationError> {
        let original = self.perm.apply(x);
        let z = NonnegIntVector::from_u64s(&original);
        let value = self
            .q
            .evaluate_int(&z)
            .expect("leaf dimension matches the matrix");
        if self.mode == Mode::Shrink && !value.is_positive() {
            self.aborted.store(true, AtomicOrdering::Relaxed);
            return Err(EnumerationError::ZeroValueFound(z));
        }
        let mut lambda = self.lambda.lock().unwrap();
        if value > *lambda {
            return Ok(());
        }
        if self.mode == Mode::Shrink && value < *lambda {
            *lambda = value.clone();
        }
        drop(lambda);
        out.push((value, z));
        Ok(())
    }

    /// Candidate values for the outermost coordinate, used to seed the
    /// sequential DFS and to partition work across threads.
    fn root_values(&self) -> Result<Vec<u64>, EnumerationError> {
        let n = self.exp.dim();
        let x = vec![0u64; n];
        let range = self.value_range(n - 1, &x, &Rational::zero(), &Rational::zero())?;
        match range {
            Some((lo, hi)) => {
                let lo = if n == 1 { lo.max(1) } else { lo };
                Ok((lo..=hi).collect())
            }
            None => Ok(Vec::new()),
        }
    }

    fn run(&self) -> Result<Vec<(Rational, NonnegIntVector)>, EnumerationError> {
        let n = self.exp.dim();
        let roots = self.root_values()?;
        let worker = |values: &[u64]| -> Result<Vec<(Rational, NonnegIntVector)>, EnumerationError> {
            let mut out = Vec::new();
            let mut x = vec![0u64; n];
            for &v in values {
                self.charge_node()?;
                let ell = Rational::from_integer(BigInt::from(v));
                let term = &self.exp.outer[n - 1] * &ell * &ell;
                x[n - 1] = v;
                if n == 1 {
                    self.accept_leaf(&x, &mut out)?;
                } else {
                    self.dfs(n - 2, &mut x, &term, v == 0, &mut out)?;
                }
            }
            Ok(out)
        };
        let threads = self.threads_for(roots.len());
        if threads <= 1 {
            return worker(&roots);
        }
        let buckets: Vec<Vec<u64>> = (0..threads)
            .map(|t| roots.iter().copied().skip(t).step_by(threads).collect())
            .collect();
        let results: Vec<Result<Vec<(Rational, NonnegIntVector)>, EnumerationError>> =
            std::thread::scope(|scope| {
                let handles: Vec<_> = buckets
                    .iter()
                    .map(|bucket| scope.spawn(|| worker(bucket)))
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("enumeration worker panicked"))
                    .collect()
            });
        let mut merged = Vec::new();
        for r in results {
            merged.extend(r?);
        }
        Ok(merged)
    }

    fn threads_for(&self, root_count: usize) -> usize {
        self.max_threads.max(1).min(root_count.max(1))
    }
}

fn check_dimensions(
    q: &SymRationalMatrix,
    expansion: &LagrangeExpansion,
    perm: &Permutation,
    dbox: &DifficultBox,
) -> Result<(), EnumerationError> {
    let n = q.dim();
    if expansion.dim() != n || perm.len() != n {
        return Err(EnumerationError::DimensionMismatch {
            expected: n,
            got: if expansion.dim() != n {
                expansion.dim()
            } else {
                perm.len()
            },
        });
    }
    if dbox.start() != expansion.first_difficult || dbox.end() != n {
        return Err(EnumerationError::DimensionMismatch {
            expected: n - expansion.first_difficult,
            got: dbox.bounds().len(),
        });
    }
    Ok(())
}

fn finish(mut pairs: Vec<(Rational, NonnegIntVector)>, lambda: Rational) -> EnumerationResult {
    pairs.retain(|(v, _)| *v <= lambda);
    let mut vectors: Vec<NonnegIntVector> = pairs.into_iter().map(|(_, z)| z).collect();
    vectors.sort();
    vectors.dedup();
    EnumerationResult { lambda, vectors }
}

/// All nonzero z ∈ ℤⁿ≥0 with Q[z] ≤ λ, given a factorization-derived expansion
/// of permᵀ·Q·perm and a box that is sound for λ.
pub fn enumerate_below(
    q: &SymRationalMatrix,
    expansion: &LagrangeExpansion,
    perm: &Permutation,
    lambda: &Rational,
    dbox: &DifficultBox,
    limits: EnumerationLimits,
) -> Result<EnumerationResult, EnumerationError> {
    enumerate_below_rescued(q, expansion, perm, lambda, dbox, None, limits)
}

pub fn enumerate_below_rescued(
    q: &SymRationalMatrix,
    expansion: &LagrangeExpansion,
    perm: &Permutation,
    lambda: &Rational,
    dbox: &DifficultBox,
    rescue: Option<Rescue<'_>>,
    limits: EnumerationLimits,
) -> Result<EnumerationResult, EnumerationError> {
    check_dimensions(q, expansion, perm, dbox)?;
    let search = Search {
        q,
        exp: expansion,
        perm,
        dbox,
        rescue,
        mode: Mode::Fixed,
        max_nodes: limits.max_nodes,
        max_threads: limits.threads,
        lambda: Mutex::new(lambda.clone()),
        nodes: AtomicU64::new(0),
        aborted: AtomicBool::new(false),
    };
    let pairs = search.run()?;
    Ok(finish(pairs, lambda.clone()))
}

/// Minimum of Q over ℤⁿ≥0 \ {0} together with all attaining vectors, starting
/// from the upper bound λ₀ and shrinking in place. The box must be sound for
/// every λ ≤ λ₀; it is not recomputed as λ shrinks, which stays sound because
/// the sublevel sets only get smaller.
pub fn minimize(
    q: &SymRationalMatrix,
    expansion: &LagrangeExpansion,
    perm: &Permutation,
    lambda0: &Rational,
    dbox: &DifficultBox,
    limits: EnumerationLimits,
) -> Result<EnumerationResult, EnumerationError> {
    minimize_rescued(q, expansion, perm, lambda0, dbox, None, limits)
}

pub fn minimize_rescued(
    q: &SymRationalMatrix,
    expansion: &LagrangeExpansion,
    perm: &Permutation,
    lambda0: &Rational,
    dbox: &DifficultBox,
    rescue: Option<Rescue<'_>>,
    limits: EnumerationLimits,
) -> Result<EnumerationResult, EnumerationError> {
    check_dimensions(q, expansion, perm, dbox)?;
    let search = Search {
        q,
        exp: expansion,
        perm,
        dbox,
        rescue,
        mode: Mode::Shrink,
        max_nodes: limits.max_nodes,
        max_threads: limits.threads,
        lambda: Mutex::new(lambda0.clone()),
        nodes: AtomicU64::new(0),
        aborted: AtomicBool::new(false),
    };
    let pairs = search.run()?;
    let lambda = search.current_lambda();
    let result = finish(pairs, lambda);
    if result.vectors.is_empty() {
        return Err(EnumerationError::BelowMinimum);
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::{random_matrix, subset_sum_gadget, MatrixClass, SubsetSumInstance};
    use crate::ldlt::{ldlt_decompose, LdltFactorization, PivotStrategy};
    use crate::matrix::tests::example1;
    use crate::oracle::{brute_force_min, BoxSpec};
    use crate::rational::{rat, rat_int};

    fn vector(parts: &[u64]) -> NonnegIntVector {
        NonnegIntVector::from_u64s(parts)
    }

    fn phase1(q: &SymRationalMatrix) -> LdltFactorization {
        ldlt_decompose(q, PivotStrategy::Phase1)
            .unwrap()
            .into_factorization()
            .expect("factorization exists")
    }

    fn run_below(
        q: &SymRationalMatrix,
        lambda: Rational,
        dbox: &DifficultBox,
        limits: EnumerationLimits,
    ) -> EnumerationResult {
        let f = phase1(q);
        enumerate_below(q, &f.lagrange_expansion(), &f.perm, &lambda, dbox, limits).unwrap()
    }

    fn run_minimize(q: &SymRationalMatrix, lambda0: Rational, dbox: &DifficultBox) -> EnumerationResult {
        let f = phase1(q);
        minimize(
            q,
            &f.lagrange_expansion(),
            &f.perm,
            &lambda0,
            dbox,
            EnumerationLimits::default(),
        )
        .unwrap()
    }

    #[test]
    fn example1_lambda_two_pinned() {
        let q = example1();
        let dbox = DifficultBox::uniform(2, 3, 1);
        let r = run_below(&q, rat_int(2), &dbox, EnumerationLimits::default());
        assert_eq!(r.lambda, rat_int(2));
        assert_eq!(
            r.vectors,
            vec![vector(&[0, 0, 1]), vector(&[0, 1, 0]), vector(&[0, 1, 1])]
        );
    }

    #[test]
    fn example1_lambda_three_pinned() {
        let q = example1();
        let dbox = DifficultBox::uniform(2, 3, 1);
        let r = run_below(&q, rat_int(3), &dbox, EnumerationLimits::default());
        assert_eq!(
            r.vectors,
            vec![
                vector(&[0, 0, 1]),
                vector(&[0, 1, 0]),
                vector(&[0, 1, 1]),
                vector(&[1, 0, 0]),
                vector(&[1, 1, 0]),
            ]
        );
    }

    #[test]
    fn identity_unit_vectors() {
        let q = SymRationalMatrix::identity(3);
        let dbox = DifficultBox::all_easy(3);
        let r = run_below(&q, rat_int(1), &dbox, EnumerationLimits::default());
        assert_eq!(
            r.vectors,
            vec![vector(&[0, 0, 1]), vector(&[0, 1, 0]), vector(&[1, 0, 0])]
        );
        let m = run_minimize(&q, rat_int(1), &dbox);
        assert_eq!(m.lambda, rat_int(1));
        assert_eq!(m.vectors, r.vectors);
    }

    #[test]
    fn minimize_example1() {
        let q = example1();
        let dbox = DifficultBox::uniform(2, 3, 1);
        let r = run_minimize(&q, q.min_diag(), &dbox);
        assert_eq!(r.lambda, rat_int(2));
        assert_eq!(
            r.vectors,
            vec![vector(&[0, 0, 1]), vector(&[0, 1, 0]), vector(&[0, 1, 1])]
        );
    }

    #[test]
    fn minimize_gadget_subset_sum() {
        let inst = SubsetSumInstance::new(vec![1, 2, 3], 3).unwrap();
        let q = subset_sum_gadget(&inst);
        let dbox = DifficultBox::all_easy(4);
        let r = run_minimize(&q, q.min_diag(), &dbox);
        assert_eq!(r.lambda, rat_int(3));
        assert!(r.vectors.contains(&vector(&[0, 0, 1, 1])));
        assert!(r.vectors.contains(&vector(&[1, 1, 0, 1])));
        let (oracle_min, oracle_set) = brute_force_min(&q, &BoxSpec::uniform(4, 5)).unwrap();
        assert_eq!(oracle_min, rat_int(3));
        assert_eq!(r.vectors, oracle_set);
    }

    #[test]
    fn oracle_equality_on_random_positive_definite() {
        for dim in 3..=5usize {
            for seed in 0..6u64 {
                let g = random_matrix(MatrixClass::Psd, dim, 1000 * dim as u64 + seed, 2).unwrap();
                if !crate::ldlt::is_positive_definite(&g.matrix) {
                    continue;
                }
                let dbox = DifficultBox::all_easy(dim);
                let r = run_minimize(&g.matrix, g.matrix.min_diag(), &dbox);
                let mut bounds = vec![10u64; dim];
                for z in &r.vectors {
                    for (i, c) in z.components().iter().enumerate() {
                        bounds[i] = bounds[i].max(c.to_u64().unwrap());
                    }
                }
                let (oracle_min, oracle_set) =
                    brute_force_min(&g.matrix, &BoxSpec::new(bounds)).unwrap();
                assert_eq!(r.lambda, oracle_min, "dim {dim} seed {seed}");
                assert_eq!(r.vectors, oracle_set, "dim {dim} seed {seed}");
            }
        }
    }

    #[test]
    fn permutation_equivariance() {
        let perms = [
            Permutation::from_map(vec![1, 2, 0]),
            Permutation::from_map(vec![2, 0, 1]),
            Permutation::transposition(3, 0, 2),
        ];
        for seed in 0..5u64 {
            let g = random_matrix(MatrixClass::Psd, 3, 777 + seed, 2).unwrap();
            if !crate::ldlt::is_positive_definite(&g.matrix) {
                continue;
            }
            let dbox = DifficultBox::all_easy(3);
            let base = run_minimize(&g.matrix, g.matrix.min_diag(), &dbox);
            for p in &perms {
                let qp = g.matrix.symmetric_permute(p).unwrap();
                let permuted = run_minimize(&qp, qp.min_diag(), &dbox);
                assert_eq!(base.lambda, permuted.lambda);
                let mut mapped: Vec<NonnegIntVector> = permuted
                    .vectors
                    .iter()
                    .map(|z| NonnegIntVector::new(p.apply(z.components())))
                    .collect();
                mapped.sort();
                assert_eq!(base.vectors, mapped);
            }
        }
    }

    #[test]
    fn monotonic_in_lambda() {
        let q = example1();
        let dbox = DifficultBox::uniform(2, 3, 1);
        let small = run_below(&q, rat_int(2), &dbox, EnumerationLimits::default());
        let large = run_below(&q, rat_int(3), &dbox, EnumerationLimits::default());
        for z in &small.vectors {
            assert!(large.vectors.contains(z));
        }
    }

    #[test]
    fn returned_vectors_reevaluate_below_lambda() {
        for seed in 0..8u64 {
            let g = random_matrix(MatrixClass::Psd, 4, 4242 + seed, 3).unwrap();
            if !crate::ldlt::is_positive_definite(&g.matrix) {
                continue;
            }
            let lambda = g.matrix.min_diag() * rat(3, 2);
            let dbox = DifficultBox::all_easy(4);
            let r = run_below(&g.matrix, lambda.clone(), &dbox, EnumerationLimits::default());
            assert!(!r.vectors.is_empty());
            for z in &r.vectors {
                assert!(!z.is_zero());
                assert!(g.matrix.evaluate_int(z).unwrap() <= lambda);
            }
            for w in r.vectors.windows(2) {
                assert!(w[0] < w[1], "sorted without duplicates");
            }
        }
    }

    #[test]
    fn all_difficult_coordinates_filtered_at_leaves() {
        let q = SymRationalMatrix::from_i64_rows(&[&[-1, 0], &[0, -1]]).unwrap();
        let f = phase1(&q);
        assert_eq!(f.first_difficult, 0);
        let dbox = DifficultBox::uniform(0, 2, 2);
        let r = enumerate_below(
            &q,
            &f.lagrange_expansion(),
            &f.perm,
            &rat_int(-4),
            &dbox,
            EnumerationLimits::default(),
        )
        .unwrap();
        assert_eq!(
            r.vectors,
            vec![
                vector(&[0, 2]),
                vector(&[1, 2]),
                vector(&[2, 0]),
                vector(&[2, 1]),
                vector(&[2, 2]),
            ]
        );
    }

    #[test]
    fn zero_value_reported_with_witness() {
        let q = SymRationalMatrix::from_i64_rows(&[&[1, -2], &[-2, 1]]).unwrap();
        let f = phase1(&q);
        assert_eq!(f.first_difficult, 1);
        let err = minimize(
            &q,
            &f.lagrange_expansion(),
            &f.perm,
            &rat_int(1),
            &DifficultBox::uniform(1, 2, 3),
            EnumerationLimits::default(),
        )
        .unwrap_err();
        assert_eq!(err, EnumerationError::ZeroValueFound(vector(&[1, 1])));
    }

    #[test]
    fn unbounded_coordinate_needs_rescue() {
        let q = SymRationalMatrix::from_i64_rows(&[&[1, -2], &[-2, 1]]).unwrap();
        let f = phase1(&q);
        let dbox = DifficultBox::new(1, vec![CoordBound::Unbounded]);
        let err = minimize(
            &q,
            &f.lagrange_expansion(),
            &f.perm,
            &rat_int(1),
            &dbox,
            EnumerationLimits::default(),
        )
        .unwrap_err();
        assert_eq!(err, EnumerationError::UnboundedCoordinate { position: 1 });

        let rescue = |_pos: usize, _tail: &[u64]| Some((0u64, 3u64));
        let err = minimize_rescued(
            &q,
            &f.lagrange_expansion(),
            &f.perm,
            &rat_int(1),
            &dbox,
            Some(&rescue),
            EnumerationLimits::default(),
        )
        .unwrap_err();
        assert_eq!(err, EnumerationError::ZeroValueFound(vector(&[1, 1])));

        let failing = |_pos: usize, _tail: &[u64]| None;
        let err = minimize_rescued(
            &q,
            &f.lagrange_expansion(),
            &f.perm,
            &rat_int(1),
            &dbox,
            Some(&failing),
            EnumerationLimits::default(),
        )
        .unwrap_err();
        assert_eq!(err, EnumerationError::UnboundedCoordinate { position: 1 });
    }

    #[test]
    fn rescue_reproduces_box_result() {
        let q = example1();
        let f = phase1(&q);
        let dbox = DifficultBox::new(2, vec![CoordBound::Unbounded]);
        let rescue = |_pos: usize, _tail: &[u64]| Some((0u64, 1u64));
        let r = enumerate_below_rescued(
            &q,
            &f.lagrange_expansion(),
            &f.perm,
            &rat_int(2),
            &dbox,
            Some(&rescue),
            EnumerationLimits::default(),
        )
        .unwrap();
        assert_eq!(
            r.vectors,
            vec![vector(&[0, 0, 1]), vector(&[0, 1, 0]), vector(&[0, 1, 1])]
        );
    }

    #[test]
    fn node_budget_is_enforced() {
        let q = SymRationalMatrix::identity(3);
        let f = phase1(&q);
        let limits = EnumerationLimits {
            max_nodes: 2,
            threads: 1,
        };
        let err = enumerate_below(
            &q,
            &f.lagrange_expansion(),
            &f.perm,
            &rat_int(1),
            &DifficultBox::all_easy(3),
            limits,
        )
        .unwrap_err();
        assert_eq!(err, EnumerationError::NodeBudgetExceeded { budget: 2 });
    }

    #[test]
    fn threads_match_sequential() {
        let q = example1();
        let dbox = DifficultBox::uniform(2, 3, 1);
        let seq = run_below(&q, rat_int(3), &dbox, EnumerationLimits::default());
        let par = run_below(
            &q,
            rat_int(3),
            &dbox,
            EnumerationLimits {
                max_nodes: 100_000_000,
                threads: 3,
            },
        );
        assert_eq!(seq, par);

        for seed in 0..4u64 {
            let g = random_matrix(MatrixClass::Psd, 4, 99 + seed, 2).unwrap();
            if !crate::ldlt::is_positive_definite(&g.matrix) {
                continue;
            }
            let f = phase1(&g.matrix);
            let lambda0 = g.matrix.min_diag();
            let dbox = DifficultBox::all_easy(4);
            let seq = minimize(
                &g.matrix,
                &f.lagrange_expansion(),
                &f.perm,
                &lambda0,
                &dbox,
                EnumerationLimits::default(),
            )
            .unwrap();
            let par = minimize(
                &g.matrix,
                &f.lagrange_expansion(),
                &f.perm,
                &lambda0,
                &dbox,
                EnumerationLimits {
                    max_nodes: 100_000_000,
                    threads: 2,
                },
            )
            .unwrap();
            assert_eq!(seq, par);
        }
    }

    #[test]
    fn dimension_checks() {
        let q = example1();
        let f = phase1(&q);
        let bad_box = DifficultBox::uniform(1, 3, 1);
        let err = enumerate_below(
            &q,
            &f.lagrange_expansion(),
            &f.perm,
            &rat_int(2),
            &bad_box,
            EnumerationLimits::default(),
        )
        .unwrap_err();
        assert!(matches!(err, EnumerationError::DimensionMismatch { .. }));

        let q2 = SymRationalMatrix::identity(2);
        let f2 = phase1(&q2);
        let err = enumerate_below(
            &q,
            &f2.lagrange_expansion(),
            &f2.perm,
            &rat_int(2),
            &DifficultBox::all_easy(2),
            EnumerationLimits::default(),
        )
        .unwrap_err();
        assert!(matches!(err, EnumerationError::DimensionMismatch { .. }));
    }

    #[test]
    fn below_minimum_is_an_error() {
        let q = SymRationalMatrix::identity(3);
        let f = phase1(&q);
        let err = minimize(
            &q,
            &f.lagrange_expansion(),
            &f.perm,
            &rat(1, 2),
            &DifficultBox::all_easy(3),
            EnumerationLimits::default(),
        )
        .unwrap_err();
        assert_eq!(err, EnumerationError::BelowMinimum);
    }
}
