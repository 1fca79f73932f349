//! The strategy cascade: orchestrates factorization, box construction and
//! enumeration into `min_cop`, plus the three-way copositivity classifier.
//!
//! Order of attack for Q with positive diagonal: positive definite (plain
//! enumeration), exactly positive semidefinite (slice boxes), exactly one
//! difficult coordinate (scaled-slice box), a verified split Q = S + N
//! (PSD-part boxes plus the per-node quadratic rescue), and for matrices
//! whose factorization needs 2×2 blocks, the same split machinery applied to
//! Q − δI. Every returned minimum is exact; `NotApplicable` is a first-class
//! outcome carrying a machine-readable reason.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::bounds::{
    one_difficult_box, psd_slice_bound, spn_box, spn_decompose, spn_quadratic_box, BoundsError,
    QpSolution, SliceBound, SpnOutcome, SpnSplit,
};
use crate::enumeration::{
    enumerate_below_rescued, minimize_rescued, CoordBound, DifficultBox, EnumerationError,
    EnumerationLimits, EnumerationResult,
};
use crate::ldlt::{ldlt_decompose, Ldlt, LdltFactorization, PivotStrategy};
use crate::matrix::{NonnegIntVector, SymRationalMatrix};
use crate::rational::{floor_sqrt, rationalize, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    PositiveDefinite,
    PsdSlice,
    OneDifficult,
    SpnSplit,
    DiagonalSplitThenSpn,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Strategy::PositiveDefinite => "positive-definite",
            Strategy::PsdSlice => "psd-slice",
            Strategy::OneDifficult => "one-difficult",
            Strategy::SpnSplit => "spn-split",
            Strategy::DiagonalSplitThenSpn => "diagonal-split-then-spn",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    StrictlyCopositive,
    NotStrictlyCopositive,
    NotApplicable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NotApplicableReason {
    NeedsBlocksUnresolved,
    SpnNotFound,
    UnboundedCoordinate,
    StrategyNotApplicable,
}

impl fmt::Display for NotApplicableReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            NotApplicableReason::NeedsBlocksUnresolved => "needs-blocks-unresolved",
            NotApplicableReason::SpnNotFound => "spn-not-found",
            NotApplicableReason::UnboundedCoordinate => "unbounded-coordinate",
            NotApplicableReason::StrategyNotApplicable => "strategy-not-applicable",
        };
        f.write_str(name)
    }
}

/// A point with a nonpositive value: either an integer vector found by
/// enumeration (value = Q[z] recomputable exactly) or a rational point from
/// the slice QP.
#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    Integer(NonnegIntVector),
    Real(Vec<Rational>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CopMinResult {
    pub status: SolveStatus,
    /// The copositive minimum; present exactly when strictly copositive —
    /// except when a caller-supplied λ₀ undershoots it, where the status is
    /// still StrictlyCopositive (the empty sublevel set certifies
    /// min > λ₀ > 0) but no minimum or representatives are known.
    pub minimum: Option<Rational>,
    /// All attaining vectors, lexicographically sorted; empty unless strictly
    /// copositive.
    pub representatives: Vec<NonnegIntVector>,
    pub strategy_used: Option<Strategy>,
    pub witness: Option<Witness>,
    pub reason: Option<NotApplicableReason>,
}

impl CopMinResult {
    fn strict(minimum: Option<Rational>, representatives: Vec<NonnegIntVector>, strategy: Strategy) -> Self {
        CopMinResult {
            status: SolveStatus::StrictlyCopositive,
            minimum,
            representatives,
            strategy_used: Some(strategy),
            witness: None,
            reason: None,
        }
    }

    fn not_strict(witness: Witness, strategy: Option<Strategy>) -> Self {
        CopMinResult {
            status: SolveStatus::NotStrictlyCopositive,
            minimum: None,
            representatives: Vec::new(),
            strategy_used: strategy,
            witness: Some(witness),
            reason: None,
        }
    }

    fn not_applicable(reason: NotApplicableReason) -> Self {
        CopMinResult {
            status: SolveStatus::NotApplicable,
            minimum: None,
            representatives: Vec::new(),
            strategy_used: None,
            witness: None,
            reason: Some(reason),
        }
    }

    /// Exact value of the witness point, when there is one.
    pub fn witness_value(&self, q: &SymRationalMatrix) -> Option<Rational> {
        match self.witness.as_ref()? {
            Witness::Integer(z) => q.evaluate_int(z).ok(),
            Witness::Real(x) => q.evaluate_form(x).ok(),
        }
    }
}

/// Solve result plus the per-coordinate search box the solver actually used:
/// component-wise max of the difficult-coordinate bounds (mapped back to
/// original indices) and the components of the returned representatives.
#[derive(Debug, Clone, PartialEq)]
pub struct CopMinReport {
    pub result: CopMinResult,
    pub box_used: Option<Vec<u64>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolverError {
    NodeBudgetExceeded { budget: u64 },
}

impl fmt::Display for SolverError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolverError::NodeBudgetExceeded { budget } => {
                write!(f, "enumeration node budget of {budget} exceeded")
            }
        }
    }
}

impl std::error::Error for SolverError {}

#[derive(Debug, Clone, Default)]
pub struct SolveOptions {
    pub limits: EnumerationLimits,
    /// Restrict the cascade to one strategy; anything else becomes
    /// NotApplicable(strategy-not-applicable).
    pub force: Option<Strategy>,
    /// Starting upper bound λ₀ for the shrinking search; defaults to the
    /// smallest diagonal entry (always an upper bound, the unit vectors being
    /// feasible). Must be positive. A value below the true minimum still
    /// certifies strict copositivity but yields no minimum or
    /// representatives.
    pub lambda: Option<Rational>,
}

/// What the enumeration at the end of a route is asked for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Goal {
    /// Shrink λ to the copositive minimum and return Min_COP.
    Minimize,
    /// Keep λ fixed and return the entire sublevel set.
    Below,
}

pub fn min_cop(q: &SymRationalMatrix) -> Result<CopMinResult, SolverError> {
    min_cop_with(q, &SolveOptions::default())
}

pub fn min_cop_with(
    q: &SymRationalMatrix,
    options: &SolveOptions,
) -> Result<CopMinResult, SolverError> {
    Ok(min_cop_report(q, options)?.result)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    StrictlyCopositive,
    CopositiveNotStrictly,
    NotCopositive,
    Unknown,
}

/// Lemma 1.1 three-way classification. A positive minimum proves strict
/// copositivity; a witness with negative value disproves copositivity; a
/// zero-value witness needs a copositivity certificate on top — an exact
/// split Q = S + N (PSD + nonnegative implies copositive) — to conclude
/// "copositive but not strictly"; otherwise Unknown.
pub fn classify(q: &SymRationalMatrix) -> Classification {
    let Ok(result) = min_cop(q) else {
        return Classification::Unknown;
    };
    match result.status {
        SolveStatus::StrictlyCopositive => Classification::StrictlyCopositive,
        SolveStatus::NotApplicable => Classification::Unknown,
        SolveStatus::NotStrictlyCopositive => {
            let Some(value) = result.witness_value(q) else {
                return Classification::Unknown;
            };
            if value.is_negative() {
                Classification::NotCopositive
            } else if matches!(spn_decompose(q), SpnOutcome::Split(_)) {
                Classification::CopositiveNotStrictly
            } else {
                Classification::Unknown
            }
        }
    }
}

pub fn min_cop_report(
    q: &SymRationalMatrix,
    options: &SolveOptions,
) -> Result<CopMinReport, SolverError> {
    let n = q.dim();
    assert!(n >= 1, "empty matrix");

    // Unit vectors witness any nonpositive diagonal entry; prefer the most
    // negative one so the classifier sees the strongest disproof.
    let min_diag = q.min_diag();
    if !min_diag.is_positive() {
        let k = (0..n)
            .find(|&i| q.get(i, i) == &min_diag)
            .expect("min_diag comes from the diagonal");
        return Ok(plain(CopMinResult::not_strict(
            Witness::Integer(NonnegIntVector::unit(n, k)),
            None,
        )));
    }
    let lambda0 = match &options.lambda {
        Some(l) => {
            assert!(l.is_positive(), "starting bound must be positive");
            l.clone()
        }
        None => min_diag,
    };

    if let Some(forced) = options.force {
        return forced_solve(q, &lambda0, forced, options, Goal::Minimize);
    }
    dispatch(q, &lambda0, options, Goal::Minimize)
}

fn dispatch(
    q: &SymRationalMatrix,
    lambda0: &Rational,
    options: &SolveOptions,
    goal: Goal,
) -> Result<CopMinReport, SolverError> {
    match ldlt_decompose(q, PivotStrategy::Phase1Then2).expect("pivoted LDLT never dead-ends") {
        Ldlt::NeedsBlocks { .. } => diagonal_split_route(q, lambda0, options, goal),
        Ldlt::Factorization(fact) => {
            let difficult = fact.dim() - fact.first_difficult;
            if difficult == 0 {
                return positive_definite_route(q, lambda0, &fact, options, goal);
            }
            if fact.d.iter().all(|v| !v.is_negative()) {
                return psd_slice_route(q, lambda0, &fact, options, goal);
            }
            if difficult == 1 {
                if let Some(report) = one_difficult_route(q, lambda0, &fact, options, goal)? {
                    return Ok(report);
                }
            }
            match spn_decompose(q) {
                SpnOutcome::Split(split) => {
                    split_machinery(q, lambda0, split, Strategy::SpnSplit, options, goal)
                }
                SpnOutcome::NotFound | SpnOutcome::Inconclusive => Ok(plain(
                    CopMinResult::not_applicable(NotApplicableReason::SpnNotFound),
                )),
            }
        }
    }
}

/// Outcome of listing the sublevel set {z ∈ ℤⁿ≥0 \ {0} : Q[z] ≤ bound}.
#[derive(Debug, Clone, PartialEq)]
pub enum ListOutcome {
    /// Q is strictly copositive, so every sublevel set is finite: the exact
    /// list, lexicographically sorted, with its smallest value (None iff
    /// empty).
    Listed {
        minimum: Option<Rational>,
        vectors: Vec<NonnegIntVector>,
        strategy_used: Strategy,
    },
    /// Not strictly copositive or not applicable — the sublevel set is
    /// infinite or undecidable here, and the solve result says why.
    Unresolved(CopMinResult),
}

/// Every nonzero z ≥ 0 with Q[z] ≤ bound. A full solve runs first: only a
/// strictly copositive form has finite sublevel sets, and its strategy is
/// then replayed with the box machinery rebuilt for `bound`.
pub fn list_below(
    q: &SymRationalMatrix,
    bound: &Rational,
    options: &SolveOptions,
) -> Result<ListOutcome, SolverError> {
    let result = min_cop_report(q, options)?.result;
    if result.status != SolveStatus::StrictlyCopositive {
        return Ok(ListOutcome::Unresolved(result));
    }
    let strategy_used = result
        .strategy_used
        .expect("strict results carry their strategy");
    let empty = ListOutcome::Listed {
        minimum: None,
        vectors: Vec::new(),
        strategy_used,
    };
    // Nothing sits at or below a bound under the (positive) minimum.
    if !bound.is_positive() {
        return Ok(empty);
    }
    if let Some(minimum) = &result.minimum {
        if bound < minimum {
            return Ok(empty);
        }
    }
    let report = forced_solve(q, bound, strategy_used, options, Goal::Below)?;
    let r = report.result;
    debug_assert_eq!(r.status, SolveStatus::StrictlyCopositive);
    Ok(ListOutcome::Listed {
        minimum: r.minimum,
        vectors: r.representatives,
        strategy_used,
    })
}

fn plain(result: CopMinResult) -> CopMinReport {
    CopMinReport {
        result,
        box_used: None,
    }
}

fn not_applicable(reason: NotApplicableReason) -> Result<CopMinReport, SolverError> {
    Ok(plain(CopMinResult::not_applicable(reason)))
}

fn forced_solve(
    q: &SymRationalMatrix,
    lambda0: &Rational,
    forced: Strategy,
    options: &SolveOptions,
    goal: Goal,
) -> Result<CopMinReport, SolverError> {
    let fact = ldlt_decompose(q, PivotStrategy::Phase1Then2)
        .expect("pivoted LDLT never dead-ends")
        .into_factorization();
    match forced {
        Strategy::PositiveDefinite => match fact {
            Some(f) if f.first_difficult == f.dim() => {
                positive_definite_route(q, lambda0, &f, options, goal)
            }
            _ => not_applicable(NotApplicableReason::StrategyNotApplicable),
        },
        Strategy::PsdSlice => match fact {
            Some(f) if f.d.iter().all(|v| !v.is_negative()) => {
                psd_slice_route(q, lambda0, &f, options, goal)
            }
            _ => not_applicable(NotApplicableReason::StrategyNotApplicable),
        },
        Strategy::OneDifficult => match fact {
            Some(f) if f.dim() - f.first_difficult == 1 => {
                match one_difficult_route(q, lambda0, &f, options, goal)? {
                    Some(report) => Ok(report),
                    None => not_applicable(NotApplicableReason::StrategyNotApplicable),
                }
            }
            _ => not_applicable(NotApplicableReason::StrategyNotApplicable),
        },
        Strategy::SpnSplit => match spn_decompose(q) {
            SpnOutcome::Split(split) => {
                split_machinery(q, lambda0, split, Strategy::SpnSplit, options, goal)
            }
            _ => not_applicable(NotApplicableReason::SpnNotFound),
        },
        Strategy::DiagonalSplitThenSpn => {
            if fact.is_none() {
                diagonal_split_route(q, lambda0, options, goal)
            } else {
                not_applicable(NotApplicableReason::StrategyNotApplicable)
            }
        }
    }
}

/// All pivots positive: classical enumeration, every coordinate easy.
fn positive_definite_route(
    q: &SymRationalMatrix,
    lambda0: &Rational,
    fact: &LdltFactorization,
    options: &SolveOptions,
    goal: Goal,
) -> Result<CopMinReport, SolverError> {
    let dbox = DifficultBox::all_easy(q.dim());
    run_enumeration(q, lambda0, fact, dbox, None, Strategy::PositiveDefinite, options, goal)
}

/// Exactly PSD: each zero-pivot coordinate gets a slice box. A slice whose
/// exact minimum is 0 pinpoints a rational kernel point in the nonnegative
/// orthant; scaled integral it is a Q[z] = 0 witness, settling the matrix as
/// copositive-but-not-strictly before any enumeration.
fn psd_slice_route(
    q: &SymRationalMatrix,
    lambda0: &Rational,
    fact: &LdltFactorization,
    options: &SolveOptions,
    goal: Goal,
) -> Result<CopMinReport, SolverError> {
    let n = q.dim();
    let mut bounds = Vec::new();
    for position in fact.first_difficult..n {
        let k = fact.perm.source(position);
        let lower = match psd_slice_bound(q, k) {
            SliceBound::Exact { value, minimizer } => {
                if value.is_zero() {
                    let z = integral_kernel_point(&minimizer);
                    debug_assert_eq!(q.evaluate_int(&z).unwrap(), Rational::zero());
                    return Ok(plain(CopMinResult::not_strict(
                        Witness::Integer(z),
                        Some(Strategy::PsdSlice),
                    )));
                }
                value
            }
            SliceBound::Lower(value) => value,
            SliceBound::Unavailable => {
                return not_applicable(NotApplicableReason::UnboundedCoordinate)
            }
        };
        if !lower.is_positive() {
            return not_applicable(NotApplicableReason::UnboundedCoordinate);
        }
        let quotient = lambda0 / lower;
        bounds.push(CoordBound::Bounded(
            floor_sqrt(&quotient)
                .to_u64()
                .expect("slice bound exceeds u64"),
        ));
    }
    let dbox = DifficultBox::new(fact.first_difficult, bounds);
    run_enumeration(q, lambda0, fact, dbox, None, Strategy::PsdSlice, options, goal)
}

/// One negative pivot, necessarily last: the complement block is positive
/// definite, so the slice QP at the difficult coordinate is convex and its
/// certified minimum yields the box via the quadratic scaling law. A
/// certified nonpositive slice minimum instead produces a real witness; if
/// neither works out, fall through (None) to the split machinery.
fn one_difficult_route(
    q: &SymRationalMatrix,
    lambda0: &Rational,
    fact: &LdltFactorization,
    options: &SolveOptions,
    goal: Goal,
) -> Result<Option<CopMinReport>, SolverError> {
    let n = q.dim();
    let k = fact.perm.source(n - 1);
    match one_difficult_box(q, k, lambda0) {
        Ok(positioned) => {
            // The box is positioned at the last index; line it up with this
            // factorization's permutation (difficult position is n−1 either
            // way, so only the bound matters).
            let dbox = DifficultBox::new(n - 1, vec![positioned.bound(n - 1)]);
            run_enumeration(q, lambda0, fact, dbox, None, Strategy::OneDifficult, options, goal)
                .map(Some)
        }
        Err(BoundsError::NonPositiveMinimum { solution }) => {
            Ok(real_witness(q, &solution).map(|w| {
                plain(CopMinResult::not_strict(w, Some(Strategy::OneDifficult)))
            }))
        }
        Err(BoundsError::NotConvexSlice) | Err(BoundsError::NonPositiveLeading { .. }) => Ok(None),
    }
}

/// Exact rational point with Q[x] ≤ 0 extracted from a nonpositive slice
/// minimum: the polish minimizer when the certificate was exact, otherwise
/// the rationalized float minimizer re-checked against Q.
fn real_witness(q: &SymRationalMatrix, solution: &QpSolution) -> Option<Witness> {
    if let Some(x) = &solution.exact_minimizer {
        debug_assert_eq!(q.evaluate_form(x).unwrap(), solution.certified_lower);
        return Some(Witness::Real(x.clone()));
    }
    let x: Vec<Rational> = solution
        .x_star
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
    if q.evaluate_form(&x).ok()?.is_positive() {
        return None;
    }
    Some(Witness::Real(x))
}

/// Scale a nonnegative rational kernel point to the integer lattice.
fn integral_kernel_point(x: &[Rational]) -> NonnegIntVector {
    let scale = x
        .iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    NonnegIntVector::new(
        x.iter()
            .map(|v| (v * Rational::from_integer(scale.clone())).to_integer())
            .collect(),
    )
}

/// NeedsBlocks: Q itself has no LDLT, but Q − δI might. A split S′ + N′ of
/// Q̃ = Q − δI turns into the split S′ + (N′ + δI) of Q itself, which feeds
/// the ordinary machinery; only S′'s factorization is ever enumerated on.
/// When Q̃ does not split, Q itself gets one direct chance. Blocks count as
/// unresolved only if no shifted factorization exists at all; a resolved
/// shift whose split search fails reports spn-not-found, like any other
/// matrix outside the split classes.
fn diagonal_split_route(
    q: &SymRationalMatrix,
    lambda0: &Rational,
    options: &SolveOptions,
    goal: Goal,
) -> Result<CopMinReport, SolverError> {
    let schedule = crate::ldlt::diagonal_split_schedule(q);
    if let Ok(ds) = &schedule {
        if let SpnOutcome::Split(split) = spn_decompose(&ds.qtilde) {
            let n = q.dim();
            let delta_eye = SymRationalMatrix::from_fn(n, |i, j| {
                if i == j {
                    ds.delta.clone()
                } else {
                    Rational::zero()
                }
            });
            let lifted = SpnSplit {
                s: split.s.clone(),
                n: split.n.add(&delta_eye).expect("same dimension"),
                margin: split.margin.clone(),
            };
            debug_assert_eq!(lifted.s.add(&lifted.n).unwrap(), *q);
            return split_machinery(q, lambda0, lifted, Strategy::DiagonalSplitThenSpn, options, goal);
        }
    }
    if let SpnOutcome::Split(split) = spn_decompose(q) {
        return split_machinery(q, lambda0, split, Strategy::SpnSplit, options, goal);
    }
    if schedule.is_ok() {
        not_applicable(NotApplicableReason::SpnNotFound)
    } else {
        not_applicable(NotApplicableReason::NeedsBlocksUnresolved)
    }
}

/// The heavyweight path: enumerate on the expansion of the PSD part S.
/// Pruning on S alone is sound (N ≥ 0 keeps every sublevel set of Q inside
/// the matching sublevel set of S) and leaves are re-evaluated exactly
/// against Q. Difficult coordinates take static slice boxes where certified,
/// and the per-node quadratic rescue — sound at any position precisely
/// because S is PSD — where not.
fn split_machinery(
    q: &SymRationalMatrix,
    lambda0: &Rational,
    split: SpnSplit,
    strategy: Strategy,
    options: &SolveOptions,
    goal: Goal,
) -> Result<CopMinReport, SolverError> {
    let fact = ldlt_decompose(&split.s, PivotStrategy::Phase1)
        .ok()
        .and_then(|d| d.into_factorization())
        .expect("verified PSD parts always factorize");
    let dbox = spn_box(&split, &fact, lambda0);
    let rescue = |position: usize, tail: &[u64]| {
        spn_quadratic_box(&split, &fact, lambda0, position, tail).ok()
    };
    run_enumeration(q, lambda0, &fact, dbox, Some(&rescue), strategy, options, goal)
}

#[allow(clippy::too_many_arguments)]
fn run_enumeration(
    q: &SymRationalMatrix,
    lambda0: &Rational,
    fact: &LdltFactorization,
    dbox: DifficultBox,
    rescue: Option<crate::enumeration::Rescue<'_>>,
    strategy: Strategy,
    options: &SolveOptions,
    goal: Goal,
) -> Result<CopMinReport, SolverError> {
    let expansion = fact.lagrange_expansion();
    let outcome = match goal {
        Goal::Minimize => {
            minimize_rescued(q, &expansion, &fact.perm, lambda0, &dbox, rescue, options.limits)
        }
        Goal::Below => {
            enumerate_below_rescued(q, &expansion, &fact.perm, lambda0, &dbox, rescue, options.limits)
        }
    };
    match outcome {
        Ok(EnumerationResult { lambda, vectors }) => {
            let minimum = match goal {
                Goal::Minimize => Some(lambda),
                // A fixed bound lists a whole sublevel set; its smallest
                // value is recomputed exactly (None when the set is empty).
                Goal::Below => vectors
                    .iter()
                    .map(|z| q.evaluate_int(z).expect("dimensions already checked"))
                    .min(),
            };
            let box_used = used_box(q.dim(), fact, &dbox, &vectors);
            Ok(CopMinReport {
                result: CopMinResult::strict(minimum, vectors, strategy),
                box_used: Some(box_used),
            })
        }
        Err(EnumerationError::ZeroValueFound(z)) => Ok(plain(CopMinResult::not_strict(
            Witness::Integer(z),
            Some(strategy),
        ))),
        Err(EnumerationError::UnboundedCoordinate { .. }) => {
            not_applicable(NotApplicableReason::UnboundedCoordinate)
        }
        Err(EnumerationError::NodeBudgetExceeded { budget }) => {
            Err(SolverError::NodeBudgetExceeded { budget })
        }
        Err(EnumerationError::BelowMinimum) => {
            // Only a caller-supplied λ₀ can undershoot: the default (smallest
            // diagonal entry) is attained by a unit vector. The empty
            // sublevel set still settles the question — min > λ₀ > 0.
            Ok(plain(CopMinResult::strict(None, Vec::new(), strategy)))
        }
        Err(EnumerationError::DimensionMismatch { .. }) => {
            unreachable!("box and expansion are built from the same factorization")
        }
    }
}

fn used_box(
    n: usize,
    fact: &LdltFactorization,
    dbox: &DifficultBox,
    representatives: &[NonnegIntVector],
) -> Vec<u64> {
    let mut out = vec![0u64; n];
    for position in dbox.start()..dbox.end() {
        if let CoordBound::Bounded(b) = dbox.bound(position) {
            out[fact.perm.source(position)] = b;
        }
    }
    for rep in representatives {
        for (i, c) in rep.components().iter().enumerate() {
            let c = c.to_u64().expect("representative component exceeds u64");
            out[i] = out[i].max(c);
        }
    }
    out
}
