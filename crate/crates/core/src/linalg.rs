//! Exact sparse linear algebra over the rationals.
//!
//! Everything here works with arbitrary precision integers, so there are no
//! tolerances anywhere: a rank is a rank. Pivoting always picks the lowest
//! available index, which makes every derived basis reproducible.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `n / d`. Panics if `d == 0`.
pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Renders a rational as `"a"` or `"a/b"`.
pub fn rational_to_string(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `"a"` or `"a/b"` (optionally signed) into a rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        None => s.parse::<BigInt>().map(Rational::from_integer).map_err(|_| bad()),
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
    }
}

/// A sparse matrix with exact rational entries. Only nonzero entries are stored.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Rational>,
}

impl fmt::Debug for SparseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SparseMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| rational_to_string(&self.get(r, c))).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_dense(rows: &[Vec<Rational>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged dense matrix");
            for (c, x) in row.iter().enumerate() {
                m.set(r, c, x.clone());
            }
        }
        m
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let dense: Vec<Vec<Rational>> = rows.iter().map(|row| row.iter().map(|&x| rat(x)).collect()).collect();
        Self::from_dense(&dense)
    }

    /// Builds a matrix from column vectors, each of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<Rational>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (r, x) in col.iter().enumerate() {
                m.set(r, c, x.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of bounds");
        self.entries.get(&(r, c)).cloned().unwrap_or_else(Rational::zero)
    }

    /// Sets an entry; storing zero removes it.
    pub fn set(&mut self, r: usize, c: usize, x: Rational) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of bounds");
        if x.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), x);
        }
    }

    pub fn add_to(&mut self, r: usize, c: usize, x: &Rational) {
        let v = self.get(r, c) + x;
        self.set(r, c, v);
    }

    /// Nonzero entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        self.entries.iter().map(|(&(r, c), x)| (r, c, x))
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && self.entries.len() == self.rows
            && self.entries.iter().all(|(&(r, c), x)| r == c && x.is_one())
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        let mut out = vec![vec![Rational::zero(); self.cols]; self.rows];
        for (&(r, c), x) in &self.entries {
            out[r][c] = x.clone();
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for (&(r, c), x) in &self.entries {
            t.entries.insert((c, r), x.clone());
        }
        t
    }

    pub fn column(&self, c: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.rows];
        for (&(r, cc), x) in &self.entries {
            if cc == c {
                v[r] = x.clone();
            }
        }
        v
    }

    pub fn columns(&self) -> Vec<Vec<Rational>> {
        let mut out = vec![vec![Rational::zero(); self.rows]; self.cols];
        for (&(r, c), x) in &self.entries {
            out[c][r] = x.clone();
        }
        out
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut by_row: Vec<Vec<(usize, &Rational)>> = vec![Vec::new(); other.rows];
        for (&(r, c), x) in &other.entries {
            by_row[r].push((c, x));
        }
        let mut out = SparseMatrix::zeros(self.rows, other.cols);
        for (&(r, k), a) in &self.entries {
            for &(c, b) in &by_row[k] {
                out.add_to(r, c, &(a * b));
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        let mut out = vec![Rational::zero(); self.rows];
        for (&(r, c), x) in &self.entries {
            if !v[c].is_zero() {
                out[r] += x * &v[c];
            }
        }
        out
    }

    pub fn scale(&self, s: &Rational) -> SparseMatrix {
        let mut out = SparseMatrix::zeros(self.rows, self.cols);
        if !s.is_zero() {
            for (&k, x) in &self.entries {
                out.entries.insert(k, x * s);
            }
        }
        out
    }

    pub fn add(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (&(r, c), x) in &other.entries {
            out.add_to(r, c, x);
        }
        out
    }

    pub fn sub(&self, other: &SparseMatrix) -> SparseMatrix {
        self.add(&other.scale(&-Rational::one()))
    }

    /// Places `other`'s columns to the right of `self`'s.
    pub fn hstack(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let mut out = self.clone();
        out.cols += other.cols;
        for (&(r, c), x) in &other.entries {
            out.entries.insert((r, c + self.cols), x.clone());
        }
        out
    }

    /// Places `other`'s rows below `self`'s.
    pub fn vstack(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut out = self.clone();
        out.rows += other.rows;
        for (&(r, c), x) in &other.entries {
            out.entries.insert((r + self.rows, c), x.clone());
        }
        out
    }

    /// The submatrix on the given rows and columns, in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> SparseMatrix {
        let row_pos: BTreeMap<usize, usize> = rows.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let col_pos: BTreeMap<usize, usize> = cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut out = SparseMatrix::zeros(rows.len(), cols.len());
        for (&(r, c), x) in &self.entries {
            if let (Some(&i), Some(&j)) = (row_pos.get(&r), col_pos.get(&c)) {
                out.entries.insert((i, j), x.clone());
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        rref(self).1.len()
    }
}

/// A subspace of `Q^ambient_dim`, stored as the columns of a full-column-rank matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceBasis {
    ambient_dim: usize,
    basis: SparseMatrix,
}

impl SubspaceBasis {
    pub fn zero(ambient_dim: usize) -> Self {
        SubspaceBasis {
            ambient_dim,
            basis: SparseMatrix::zeros(ambient_dim, 0),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        SubspaceBasis {
            ambient_dim,
            basis: SparseMatrix::identity(ambient_dim),
        }
    }

    /// The span of arbitrary vectors; dependent vectors are dropped
    /// (earlier vectors are kept in preference to later ones).
    pub fn span(ambient_dim: usize, vectors: &[Vec<Rational>]) -> Self {
        image(&SparseMatrix::from_columns(ambient_dim, vectors))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn matrix(&self) -> &SparseMatrix {
        &self.basis
    }

    pub fn vectors(&self) -> Vec<Vec<Rational>> {
        self.basis.columns()
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        solve(&self.basis, v).is_some()
    }

    /// The sum of two subspaces of the same ambient space.
    pub fn sum(&self, other: &SubspaceBasis) -> SubspaceBasis {
        assert_eq!(self.ambient_dim, other.ambient_dim);
        image(&self.basis.hstack(&other.basis))
    }
}

/// Reduced row echelon form together with the pivot columns (increasing).
pub fn rref(m: &SparseMatrix) -> (SparseMatrix, Vec<usize>) {
    let mut rows: Vec<BTreeMap<usize, Rational>> = vec![BTreeMap::new(); m.rows];
    for (&(r, c), x) in &m.entries {
        rows[r].insert(c, x.clone());
    }

    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..m.cols {
        if next == m.rows {
            break;
        }
        let Some(found) = (next..m.rows).find(|&r| rows[r].contains_key(&col)) else {
            continue;
        };
        rows.swap(next, found);

        let inv = rows[next][&col].recip();
        if !inv.is_one() {
            for x in rows[next].values_mut() {
                *x *= &inv;
            }
        }
        let pivot_row = rows[next].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == next {
                continue;
            }
            let Some(factor) = row.get(&col).cloned() else {
                continue;
            };
            for (&c, x) in &pivot_row {
                let updated = row.get(&c).cloned().unwrap_or_else(Rational::zero) - &factor * x;
                if updated.is_zero() {
                    row.remove(&c);
                } else {
                    row.insert(c, updated);
                }
            }
        }
        pivots.push(col);
        next += 1;
    }

    let mut out = SparseMatrix::zeros(m.rows, m.cols);
    for (r, row) in rows.into_iter().enumerate() {
        for (c, x) in row {
            out.entries.insert((r, c), x);
        }
    }
    (out, pivots)
}

/// A basis of `{v : m v = 0}`, one vector per free column.
pub fn kernel(m: &SparseMatrix) -> SubspaceBasis {
    let (r, pivots) = rref(m);
    let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivot_set.contains(c)).collect();

    let mut basis = SparseMatrix::zeros(m.cols, free.len());
    for (k, &f) in free.iter().enumerate() {
        basis.set(f, k, Rational::one());
        for (row, &p) in pivots.iter().enumerate() {
            let x = r.get(row, f);
            if !x.is_zero() {
                basis.set(p, k, -x);
            }
        }
    }
    SubspaceBasis {
        ambient_dim: m.cols,
        basis,
    }
}

/// A basis of the column space: the pivot columns of `m` itself.
pub fn image(m: &SparseMatrix) -> SubspaceBasis {
    let (_, pivots) = rref(m);
    let all_rows: Vec<usize> = (0..m.rows).collect();
    SubspaceBasis {
        ambient_dim: m.rows,
        basis: m.submatrix(&all_rows, &pivots),
    }
}

/// `dim(total) - dim(sub)` and a complement of `sub` inside `total`.
///
/// The complement is drawn from the reduced echelon basis of `total`, scanning
/// it in order, so lower coordinates are preferred.
pub fn quotient_dim(sub: &SubspaceBasis, total: &SubspaceBasis) -> Result<(usize, SubspaceBasis)> {
    if sub.ambient_dim != total.ambient_dim {
        return Err(Error::NotASubspace(format!(
            "ambient dimensions differ ({} vs {})",
            sub.ambient_dim, total.ambient_dim
        )));
    }
    for (i, v) in sub.vectors().iter().enumerate() {
        if !total.contains(v) {
            return Err(Error::NotASubspace(format!(
                "basis vector {i} of the subspace is not in the total space"
            )));
        }
    }

    let (echelon, pivots) = rref(&total.basis.transpose());
    let candidates: Vec<Vec<Rational>> = (0..pivots.len())
        .map(|r| (0..total.ambient_dim).map(|c| echelon.get(r, c)).collect())
        .collect();

    let mut current = sub.basis.clone();
    let mut rank = sub.dim();
    let mut chosen = Vec::new();
    for v in candidates {
        let trial = current.hstack(&SparseMatrix::from_columns(total.ambient_dim, std::slice::from_ref(&v)));
        let trial_rank = trial.rank();
        if trial_rank > rank {
            current = trial;
            rank = trial_rank;
            chosen.push(v);
        }
    }
    let complement = SubspaceBasis {
        ambient_dim: total.ambient_dim,
        basis: SparseMatrix::from_columns(total.ambient_dim, &chosen),
    };
    Ok((total.dim() - sub.dim(), complement))
}

/// Some `x` with `m x = b`, with every free variable set to zero; `None` if inconsistent.
pub fn solve(m: &SparseMatrix, b: &[Rational]) -> Option<Vec<Rational>> {
    assert_eq!(m.rows, b.len(), "right-hand side length mismatch");
    let augmented = m.hstack(&SparseMatrix::from_columns(m.rows, &[b.to_vec()]));
    let (r, pivots) = rref(&augmented);
    if pivots.last() == Some(&m.cols) {
        return None;
    }
    let mut x = vec![Rational::zero(); m.cols];
    for (row, &p) in pivots.iter().enumerate() {
        x[p] = r.get(row, m.cols);
    }
    Some(x)
}

/// Exact inverse of a square matrix, or `None` if singular.
pub fn inverse(m: &SparseMatrix) -> Option<SparseMatrix> {
    assert_eq!(m.rows, m.cols, "inverse of a non-square matrix");
    let n = m.rows;
    let (r, pivots) = rref(&m.hstack(&SparseMatrix::identity(n)));
    if !pivots.iter().copied().take(n).eq(0..n) {
        return None;
    }
    let rows: Vec<usize> = (0..n).collect();
    let cols: Vec<usize> = (n..2 * n).collect();
    Some(r.submatrix(&rows, &cols))
}

/// Largest absolute numerator or denominator in bits, used to report coefficient growth.
pub fn max_bits(m: &SparseMatrix) -> u64 {
    m.entries()
        .map(|(_, _, x)| x.numer().abs().bits().max(x.denom().bits()))
        .max()
        .unwrap_or(0)
}
