//! Named example matrices, the subset-sum reduction gadget, and seeded
//! random-instance generators for the test classes (positive semidefinite,
//! SPN, SPN with at least two negative eigenvalues).

use crate::eigen;
use crate::matrix::SymRationalMatrix;
use crate::rational::{rat_int, Rational};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GadgetError {
    InvalidInstance { reason: &'static str },
    GenerationFailed { attempts: usize },
}

impl fmt::Display for GadgetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GadgetError::InvalidInstance { reason } => write!(f, "invalid instance: {reason}"),
            GadgetError::GenerationFailed { attempts } => {
                write!(f, "no matching matrix after {attempts} attempts")
            }
        }
    }
}

impl std::error::Error for GadgetError {}

/// Decide whether some x ∈ {0,1}ⁿ has aᵀx = s.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetSumInstance {
    a: Vec<u64>,
    s: u64,
}

impl SubsetSumInstance {
    pub fn new(a: Vec<u64>, s: u64) -> Result<Self, GadgetError> {
        if a.is_empty() {
            return Err(GadgetError::InvalidInstance { reason: "empty weight vector" });
        }
        if a.contains(&0) {
            return Err(GadgetError::InvalidInstance { reason: "weights must be positive" });
        }
        if s == 0 {
            return Err(GadgetError::InvalidInstance { reason: "target must be positive" });
        }
        Ok(SubsetSumInstance { a, s })
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn weights(&self) -> &[u64] {
        &self.a
    }

    pub fn target(&self) -> u64 {
        self.s
    }
}

/// The reduction matrix
///   Q := n·(a,−s)(a,−s)ᵀ + (2Iₙ, −𝟙; −𝟙ᵀ, n),
/// an (n+1)×(n+1) integer matrix. On binary x with last coordinate 1,
/// Q[(x,1)] = n·(aᵀx − s)² + n, so the instance is solvable exactly when the
/// copositive minimum reaches n.
pub fn subset_sum_gadget(inst: &SubsetSumInstance) -> SymRationalMatrix {
    let n = inst.n();
    let big_n = BigInt::from(n as u64);
    let a: Vec<BigInt> = inst.a.iter().map(|&v| BigInt::from(v)).collect();
    let s = BigInt::from(inst.s);
    SymRationalMatrix::from_fn(n + 1, |i, j| {
        let v = if i < n && j < n {
            let base = &big_n * &a[i] * &a[j];
            if i == j {
                base + BigInt::from(2u8)
            } else {
                base
            }
        } else if i == n && j == n {
            &big_n * &s * &s + &big_n
        } else {
            let k = i.min(j);
            -(&big_n * &a[k] * &s) - BigInt::from(1u8)
        };
        Rational::from_integer(v)
    })
}

/// Verifies the factor identity Q = HᵀH + diag(Iₙ, 0) with
/// H = (√n·aᵀ, −√n·s; −Iₙ, 𝟙) — the square roots cancel, so the check is
/// exact rational arithmetic.
pub fn gadget_h_identity_check(inst: &SubsetSumInstance) -> bool {
    let n = inst.n();
    let big_n = rat_int(n as i64);
    let av: Vec<Rational> = inst
        .a
        .iter()
        .map(|&v| Rational::from_integer(BigInt::from(v)))
        .collect();
    let s = Rational::from_integer(BigInt::from(inst.s));
    let coeff = |i: usize| -> Rational {
        if i < n {
            av[i].clone()
        } else {
            -s.clone()
        }
    };
    let hth = SymRationalMatrix::from_fn(n + 1, |i, j| {
        // first row of H contributes n·c_i·c_j, the block (−Iₙ, 𝟙) the rest
        let mut v = &big_n * coeff(i) * coeff(j);
        if i < n && j < n {
            if i == j {
                v += rat_int(1);
            }
        } else if i == n && j == n {
            v += rat_int(n as i64);
        } else {
            v -= rat_int(1);
        }
        v
    });
    let correction = SymRationalMatrix::from_fn(n + 1, |i, j| {
        if i == j && i < n {
            rat_int(1)
        } else {
            rat_int(0)
        }
    });
    hth.add(&correction).expect("same dimension") == subset_sum_gadget(inst)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PaperMatrix {
    Example1,
    Blocks4,
    Horn,
}

impl FromStr for PaperMatrix {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "example1" => Ok(PaperMatrix::Example1),
            "blocks4" => Ok(PaperMatrix::Blocks4),
            "horn" => Ok(PaperMatrix::Horn),
            other => Err(format!("unknown matrix name `{other}`")),
        }
    }
}

pub fn paper_matrix(name: PaperMatrix) -> SymRationalMatrix {
    let rows: &[&[i64]] = match name {
        PaperMatrix::Example1 => &[&[3, -1, 3], &[-1, 2, -1], &[3, -1, 2]],
        PaperMatrix::Blocks4 => &[
            &[8, -2, -8, 0],
            &[-2, 1, 0, 8],
            &[-8, 0, 24, 16],
            &[0, 8, 16, 32],
        ],
        // circulant on (1, −1, 1, 1, −1): copositive, not SPN
        PaperMatrix::Horn => &[
            &[1, -1, 1, 1, -1],
            &[-1, 1, -1, 1, 1],
            &[1, -1, 1, -1, 1],
            &[1, 1, -1, 1, -1],
            &[-1, 1, 1, -1, 1],
        ],
    };
    SymRationalMatrix::from_i64_rows(rows).expect("fixed matrices are symmetric")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixClass {
    Psd,
    Spn,
    SpnTwoNeg,
}

impl FromStr for MatrixClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "psd" => Ok(MatrixClass::Psd),
            "spn" => Ok(MatrixClass::Spn),
            "spn2neg" => Ok(MatrixClass::SpnTwoNeg),
            other => Err(format!("unknown matrix class `{other}`")),
        }
    }
}

impl fmt::Display for MatrixClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MatrixClass::Psd => "psd",
            MatrixClass::Spn => "spn",
            MatrixClass::SpnTwoNeg => "spn2neg",
        })
    }
}

/// A generated matrix plus its construction certificate
/// matrix = psd_part + nonneg_part, with psd_part a Gram matrix and
/// nonneg_part entrywise ≥ 0.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedMatrix {
    pub matrix: SymRationalMatrix,
    pub psd_part: SymRationalMatrix,
    pub nonneg_part: SymRationalMatrix,
}

fn integer_factor(rng: &mut ChaCha8Rng, rows: usize, cols: usize, range: i64) -> Vec<Vec<i64>> {
    (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(-range..=range)).collect())
        .collect()
}

fn gram(b: &[Vec<i64>]) -> SymRationalMatrix {
    SymRationalMatrix::from_fn(b.len(), |i, j| {
        rat_int(b[i].iter().zip(&b[j]).map(|(x, y)| x * y).sum())
    })
}

/// Deterministic in (class, dim, seed, range).
pub fn random_matrix(
    class: MatrixClass,
    dim: usize,
    seed: u64,
    range: i64,
) -> Result<GeneratedMatrix, GadgetError> {
    assert!(dim >= 2, "need dimension at least 2");
    assert!(range >= 1, "need a positive entry range");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match class {
        MatrixClass::Psd => {
            let s = gram(&integer_factor(&mut rng, dim, dim, range));
            Ok(GeneratedMatrix {
                matrix: s.clone(),
                psd_part: s,
                nonneg_part: SymRationalMatrix::zeros(dim),
            })
        }
        MatrixClass::Spn => {
            let s = gram(&integer_factor(&mut rng, dim, dim, range));
            let noise =
                SymRationalMatrix::from_fn(dim, |_, _| rat_int(rng.gen_range(0..=range)));
            Ok(GeneratedMatrix {
                matrix: s.add(&noise).expect("same dimension"),
                psd_part: s,
                nonneg_part: noise,
            })
        }
        MatrixClass::SpnTwoNeg => {
            // rank-deficient Gram part plus a hollow noise with large
            // off-diagonal entries, rejected until two eigenvalues go negative
            let attempts = 1000;
            for _ in 0..attempts {
                let s = gram(&integer_factor(&mut rng, dim, dim - 2, range));
                let noise = SymRationalMatrix::from_fn(dim, |i, j| {
                    if i == j {
                        rat_int(0)
                    } else {
                        rat_int(rng.gen_range(range..=3 * range))
                    }
                });
                let q = s.add(&noise).expect("same dimension");
                match eigen::inertia_of(&q) {
                    Ok(inertia) if inertia.negative >= 2 => {
                        return Ok(GeneratedMatrix {
                            matrix: q,
                            psd_part: s,
                            nonneg_part: noise,
                        })
                    }
                    _ => continue,
                }
            }
            Err(GadgetError::GenerationFailed { attempts })
        }
    }
}

/// Random symmetric rational matrix with entries p/q, |p| ≤ 9, 1 ≤ q ≤ 4.
pub fn random_symmetric_rational<R: Rng>(rng: &mut R, dim: usize) -> SymRationalMatrix {
    SymRationalMatrix::from_fn(dim, |_, _| {
        Rational::new(
            BigInt::from(rng.gen_range(-9i64..=9)),
            BigInt::from(rng.gen_range(1i64..=4)),
        )
    })
}
