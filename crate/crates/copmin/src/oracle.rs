//! Independent brute-force references: direct box enumeration of the
//! copositive minimum and a bitmask subset-sum solver. Deliberately naive —
//! these exist to cross-check the clever paths, so they share no code with
//! them.

use crate::gadgets::SubsetSumInstance;
use crate::matrix::{NonnegIntVector, SymRationalMatrix};
use crate::rational::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::fmt;

pub const BOX_POINT_GUARD: u128 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    BoxTooLarge { points: u128 },
    DimensionMismatch { expected: usize, got: usize },
    EmptyBox,
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::BoxTooLarge { points } => {
                write!(f, "box holds {} lattice points, over the {} guard", points, BOX_POINT_GUARD)
            }
            OracleError::DimensionMismatch { expected, got } => {
                write!(f, "box has {got} bounds for a {expected}-dimensional matrix")
            }
            OracleError::EmptyBox => write!(f, "box contains no nonzero vector"),
        }
    }
}

impl std::error::Error for OracleError {}

/// Inclusive per-coordinate upper bounds 0 ≤ z_i ≤ bounds[i].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxSpec(Vec<u64>);

impl BoxSpec {
    pub fn new(bounds: Vec<u64>) -> Self {
        BoxSpec(bounds)
    }

    pub fn uniform(dim: usize, bound: u64) -> Self {
        BoxSpec(vec![bound; dim])
    }

    pub fn bounds(&self) -> &[u64] {
        &self.0
    }

    pub fn point_count(&self) -> u128 {
        self.0
            .iter()
            .fold(1u128, |acc, &b| acc.saturating_mul(b as u128 + 1))
    }
}

/// Exhaustive exact minimum of Q[z] over nonzero z in the box, with every
/// argmin, sorted. The quadratic form is evaluated in integer arithmetic
/// after clearing denominators once.
pub fn brute_force_min(
    q: &SymRationalMatrix,
    spec: &BoxSpec,
) -> Result<(Rational, Vec<NonnegIntVector>), OracleError> {
    let n = q.dim();
    if spec.bounds().len() != n {
        return Err(OracleError::DimensionMismatch { expected: n, got: spec.bounds().len() });
    }
    if spec.bounds().iter().all(|&b| b == 0) {
        return Err(OracleError::EmptyBox);
    }
    let points = spec.point_count();
    if points > BOX_POINT_GUARD {
        return Err(OracleError::BoxTooLarge { points });
    }

    let mut scale = BigInt::one();
    for row in q.rows() {
        for v in row {
            scale = scale.lcm(v.denom());
        }
    }
    let scaled: Vec<Vec<BigInt>> = q
        .rows()
        .iter()
        .map(|row| row.iter().map(|v| v.numer() * &scale / v.denom()).collect())
        .collect();

    let mut z = vec![0u64; n];
    let mut best: Option<BigInt> = None;
    let mut argmins: Vec<NonnegIntVector> = Vec::new();
    'outer: loop {
        // advance the odometer (last coordinate fastest)
        let mut k = n;
        loop {
            if k == 0 {
                break 'outer;
            }
            k -= 1;
            if z[k] < spec.bounds()[k] {
                z[k] += 1;
                for t in z.iter_mut().skip(k + 1) {
                    *t = 0;
                }
                break;
            }
        }

        let mut value = BigInt::zero();
        for i in 0..n {
            if z[i] == 0 {
                continue;
            }
            let zi = BigInt::from(z[i]);
            value += &scaled[i][i] * &zi * &zi;
            for j in i + 1..n {
                if z[j] != 0 {
                    value += &scaled[i][j] * &zi * BigInt::from(2 * z[j]);
                }
            }
        }

        match &best {
            Some(b) if value > *b => {}
            Some(b) if value == *b => argmins.push(NonnegIntVector::from_u64s(&z)),
            _ => {
                best = Some(value);
                argmins.clear();
                argmins.push(NonnegIntVector::from_u64s(&z));
            }
        }
    }

    let minimum = Rational::new(best.expect("at least one nonzero point"), scale);
    argmins.sort();
    Ok((minimum, argmins))
}

/// Lexicographically-first solution in mask order (first weight = low bit).
pub fn subset_sum_brute(inst: &SubsetSumInstance) -> Option<Vec<u8>> {
    let n = inst.n();
    assert!(n <= 25, "mask enumeration is capped at 25 weights");
    let target = inst.target() as u128;
    for mask in 1u32..(1u32 << n) {
        let mut sum: u128 = 0;
        for (i, &w) in inst.weights().iter().enumerate() {
            if mask >> i & 1 == 1 {
                sum += w as u128;
            }
        }
        if sum == target {
            return Some((0..n).map(|i| (mask >> i & 1) as u8).collect());
        }
    }
    None
}
