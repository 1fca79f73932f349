//! Symmetric rational matrices, nonnegative integer vectors, permutations,
//! and the plain-text / JSON matrix formats.

use crate::rational::Rational;
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatrixError {
    ZeroSize,
    /// 1-based positions of the offending entry pair.
    NotSymmetric { i: usize, j: usize },
    DimensionMismatch { expected: usize, got: usize },
    /// 1-based line; col counts whitespace-separated tokens on the line.
    Parse { line: usize, col: usize, msg: String },
}

impl fmt::Display for MatrixError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixError::ZeroSize => write!(f, "matrix dimension must be at least 1"),
            MatrixError::NotSymmetric { i, j } => {
                write!(f, "not symmetric: entries ({i},{j}) and ({j},{i}) differ")
            }
            MatrixError::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            MatrixError::Parse { line, col, msg } => {
                write!(f, "parse error at line {line}, entry {col}: {msg}")
            }
        }
    }
}

impl std::error::Error for MatrixError {}

// -- nonnegative integer vectors ---------------------------------------------

/// Candidate vector for the copositive minimum: componentwise >= 0, ordered
/// lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct NonnegIntVector(Vec<BigInt>);

impl NonnegIntVector {
    pub fn new(components: Vec<BigInt>) -> Self {
        assert!(
            components.iter().all(|c| !c.is_negative()),
            "NonnegIntVector requires nonnegative components"
        );
        NonnegIntVector(components)
    }

    pub fn from_u64s(components: &[u64]) -> Self {
        NonnegIntVector(components.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = vec![BigInt::zero(); dim];
        v[i] = BigInt::from(1);
        NonnegIntVector(v)
    }

    pub fn components(&self) -> &[BigInt] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn to_rationals(&self) -> Vec<Rational> {
        self.0
            .iter()
            .map(|c| Rational::from_integer(c.clone()))
            .collect()
    }
}

impl fmt::Display for NonnegIntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

// -- permutations -------------------------------------------------------------

/// Permutation stored as `map[i] = source index of position i`; applying it to
/// a matrix yields `result[i][j] = Q[map[i]][map[j]]`, i.e. P^T Q P for the
/// permutation matrix P with P e_j = e_{map[j]}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            map: (0..n).collect(),
        }
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut map: Vec<usize> = (0..n).collect();
        map.swap(a, b);
        Permutation { map }
    }

    pub fn from_map(map: Vec<usize>) -> Self {
        let n = map.len();
        let mut seen = vec![false; n];
        for &m in &map {
            assert!(m < n && !seen[m], "invalid permutation map");
            seen[m] = true;
        }
        Permutation { map }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &m)| i == m)
    }

    /// sigma(i): the source index placed at position i.
    pub fn source(&self, i: usize) -> usize {
        self.map[i]
    }

    /// Matrix product self * inner: (self ∘ inner)(i) = self(inner(i)).
    pub fn compose(&self, inner: &Permutation) -> Permutation {
        assert_eq!(self.map.len(), inner.map.len());
        Permutation {
            map: inner.map.iter().map(|&i| self.map[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.map.len()];
        for (i, &m) in self.map.iter().enumerate() {
            inv[m] = i;
        }
        Permutation { map: inv }
    }

    /// Push-forward P y: position map[j] of the result receives y[j].
    pub fn apply<T: Clone>(&self, y: &[T]) -> Vec<T> {
        assert_eq!(y.len(), self.map.len());
        let mut out: Vec<T> = y.to_vec();
        for (j, &m) in self.map.iter().enumerate() {
            out[m] = y[j].clone();
        }
        out
    }

    /// Pull-back P^T z: position j of the result reads z[map[j]].
    pub fn pull<T: Clone>(&self, z: &[T]) -> Vec<T> {
        assert_eq!(z.len(), self.map.len());
        self.map.iter().map(|&m| z[m].clone()).collect()
    }
}

// -- symmetric rational matrices ----------------------------------------------

#[derive(Clone, PartialEq, Eq)]
pub struct SymRationalMatrix {
    dim: usize,
    data: Vec<Rational>, // row-major, dim * dim, symmetric
}

impl fmt::Debug for SymRationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymRationalMatrix[{}]{{", self.dim)?;
        for i in 0..self.dim {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.dim {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "}}")
    }
}

impl SymRationalMatrix {
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, MatrixError> {
        let dim = rows.len();
        if dim == 0 {
            return Err(MatrixError::ZeroSize);
        }
        for row in &rows {
            if row.len() != dim {
                return Err(MatrixError::DimensionMismatch {
                    expected: dim,
                    got: row.len(),
                });
            }
        }
        for i in 0..dim {
            for j in (i + 1)..dim {
                if rows[i][j] != rows[j][i] {
                    return Err(MatrixError::NotSymmetric { i: i + 1, j: j + 1 });
                }
            }
        }
        Ok(SymRationalMatrix {
            dim,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self, MatrixError> {
        let converted = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&v| Rational::from_integer(BigInt::from(v)))
                    .collect()
            })
            .collect();
        SymRationalMatrix::from_rows(converted)
    }

    /// f is consulted for i <= j only; the result is symmetric by construction.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        assert!(dim > 0);
        let mut m = SymRationalMatrix::zeros(dim);
        for i in 0..dim {
            for j in i..dim {
                let v = f(i, j);
                m.set_sym(i, j, v);
            }
        }
        m
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0);
        SymRationalMatrix {
            dim,
            data: vec![Rational::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = SymRationalMatrix::zeros(dim);
        for i in 0..dim {
            m.set_sym(i, i, Rational::from_integer(BigInt::from(1)));
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.dim + j]
    }

    pub fn set_sym(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.dim + j] = v.clone();
        self.data[j * self.dim + i] = v;
    }

    pub fn rows(&self) -> Vec<Vec<Rational>> {
        (0..self.dim)
            .map(|i| self.data[i * self.dim..(i + 1) * self.dim].to_vec())
            .collect()
    }

    pub fn diag(&self) -> Vec<Rational> {
        (0..self.dim).map(|i| self.get(i, i).clone()).collect()
    }

    pub fn min_diag(&self) -> Rational {
        self.diag().into_iter().min().expect("dim >= 1")
    }

    pub fn is_entrywise_nonnegative(&self) -> bool {
        self.data.iter().all(|v| !v.is_negative())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    /// x^T Q x, exact.
    pub fn evaluate_form(&self, x: &[Rational]) -> Result<Rational, MatrixError> {
        if x.len() != self.dim {
            return Err(MatrixError::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        let mut acc = Rational::zero();
        for i in 0..self.dim {
            if x[i].is_zero() {
                continue;
            }
            let mut row = Rational::zero();
            for j in 0..self.dim {
                if !x[j].is_zero() {
                    row += self.get(i, j) * &x[j];
                }
            }
            acc += &x[i] * row;
        }
        Ok(acc)
    }

    pub fn evaluate_int(&self, z: &NonnegIntVector) -> Result<Rational, MatrixError> {
        self.evaluate_form(&z.to_rationals())
    }

    /// P^T Q P for the permutation: result[i][j] = Q[p(i)][p(j)].
    pub fn symmetric_permute(&self, p: &Permutation) -> Result<Self, MatrixError> {
        if p.len() != self.dim {
            return Err(MatrixError::DimensionMismatch {
                expected: self.dim,
                got: p.len(),
            });
        }
        Ok(SymRationalMatrix::from_fn(self.dim, |i, j| {
            self.get(p.source(i), p.source(j)).clone()
        }))
    }

    /// Leading k x k principal block, 1 <= k <= dim.
    pub fn leading_block(&self, k: usize) -> Self {
        assert!(k >= 1 && k <= self.dim);
        SymRationalMatrix::from_fn(k, |i, j| self.get(i, j).clone())
    }

    /// Principal submatrix with row/column `remove` deleted (dim >= 2).
    pub fn remove_index(&self, remove: usize) -> Self {
        assert!(self.dim >= 2 && remove < self.dim);
        let keep: Vec<usize> = (0..self.dim).filter(|&i| i != remove).collect();
        SymRationalMatrix::from_fn(self.dim - 1, |i, j| self.get(keep[i], keep[j]).clone())
    }

    pub fn add(&self, other: &Self) -> Result<Self, MatrixError> {
        if other.dim != self.dim {
            return Err(MatrixError::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        Ok(SymRationalMatrix::from_fn(self.dim, |i, j| {
            self.get(i, j) + other.get(i, j)
        }))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, MatrixError> {
        if other.dim != self.dim {
            return Err(MatrixError::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        Ok(SymRationalMatrix::from_fn(self.dim, |i, j| {
            self.get(i, j) - other.get(i, j)
        }))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        SymRationalMatrix::from_fn(self.dim, |i, j| self.get(i, j) * c)
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|j| self.get(i, j).to_f64().unwrap_or(f64::NAN))
                    .collect()
            })
            .collect()
    }

    pub fn frobenius_f64(&self) -> f64 {
        self.data
            .iter()
            .map(|v| {
                let x = v.to_f64().unwrap_or(0.0);
                x * x
            })
            .sum::<f64>()
            .sqrt()
    }

    // -- text / JSON formats --------------------------------------------------

    /// First line the dimension, then one row per line; entries are `p/q` or a
    /// bare integer when the denominator is 1.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.dim);
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim).map(|j| self.get(i, j).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn parse_text(input: &str) -> Result<Self, MatrixError> {
        let mut lines = input
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (dim_line_no, dim_line) = lines.next().ok_or(MatrixError::Parse {
            line: 1,
            col: 1,
            msg: "empty input".into(),
        })?;
        let dim: usize = dim_line
            .trim()
            .parse()
            .map_err(|_| MatrixError::Parse {
                line: dim_line_no + 1,
                col: 1,
                msg: format!("expected dimension, found {:?}", dim_line.trim()),
            })?;
        if dim == 0 {
            return Err(MatrixError::ZeroSize);
        }
        let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(dim);
        for _ in 0..dim {
            let (line_no, line) = lines.next().ok_or(MatrixError::Parse {
                line: dim_line_no + 2 + rows.len(),
                col: 1,
                msg: format!("expected {dim} rows, found {}", rows.len()),
            })?;
            let mut row = Vec::with_capacity(dim);
            for (col, tok) in line.split_whitespace().enumerate() {
                let v: Rational = tok.parse().map_err(|_| MatrixError::Parse {
                    line: line_no + 1,
                    col: col + 1,
                    msg: format!("invalid rational {tok:?}"),
                })?;
                row.push(v);
            }
            if row.len() != dim {
                return Err(MatrixError::Parse {
                    line: line_no + 1,
                    col: row.len() + 1,
                    msg: format!("expected {dim} entries, found {}", row.len()),
                });
            }
            rows.push(row);
        }
        if let Some((line_no, _)) = lines.next() {
            return Err(MatrixError::Parse {
                line: line_no + 1,
                col: 1,
                msg: "trailing content after matrix rows".into(),
            });
        }
        SymRationalMatrix::from_rows(rows)
    }

    /// `{"matrix": [["3","-1"],["-1","2"]]}` with every entry a rational string.
    pub fn parse_json(input: &str) -> Result<Self, MatrixError> {
        #[derive(serde::Deserialize)]
        struct JsonMatrix {
            matrix: Vec<Vec<String>>,
        }
        let parsed: JsonMatrix = serde_json::from_str(input).map_err(|e| MatrixError::Parse {
            line: e.line(),
            col: e.column(),
            msg: e.to_string(),
        })?;
        if parsed.matrix.is_empty() {
            return Err(MatrixError::ZeroSize);
        }
        let mut rows = Vec::with_capacity(parsed.matrix.len());
        for (i, row) in parsed.matrix.iter().enumerate() {
            let mut out = Vec::with_capacity(row.len());
            for (j, tok) in row.iter().enumerate() {
                let v: Rational = tok.parse().map_err(|_| MatrixError::Parse {
                    line: i + 1,
                    col: j + 1,
                    msg: format!("invalid rational {tok:?}"),
                })?;
                out.push(v);
            }
            rows.push(out);
        }
        SymRationalMatrix::from_rows(rows)
    }

    /// Auto-detects JSON (input starting with `{`) vs the plain-text format.
    pub fn parse_str(input: &str) -> Result<Self, MatrixError> {
        if input.trim_start().starts_with('{') {
            SymRationalMatrix::parse_json(input)
        } else {
            SymRationalMatrix::parse_text(input)
        }
    }
}

// -- exact linear algebra helpers ----------------------------------------------

/// Any exact solution of A x = b (free variables set to 0), or None when the
/// system is inconsistent. Plain fraction-preserving Gauss-Jordan.
pub fn solve_linear(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let m = a.len();
    assert_eq!(m, b.len());
    let n = if m == 0 { 0 } else { a[0].len() };
    let mut aug: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            assert_eq!(row.len(), n);
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&row| !aug[row][c].is_zero()) else {
            continue;
        };
        aug.swap(r, p);
        let piv = aug[r][c].clone();
        for x in c..=n {
            aug[r][x] = &aug[r][x] / &piv;
        }
        for row in 0..m {
            if row != r && !aug[row][c].is_zero() {
                let f = aug[row][c].clone();
                for x in c..=n {
                    let v = &aug[row][x] - &f * &aug[r][x];
                    aug[row][x] = v;
                }
            }
        }
        pivots.push((r, c));
        r += 1;
    }
    for row in r..m {
        if !aug[row][n].is_zero() {
            return None;
        }
    }
    let mut x = vec![Rational::zero(); n];
    for &(row, col) in &pivots {
        x[col] = aug[row][n].clone();
    }
    Some(x)
}
