//! Dense matrices over an exact field with an involution.

use std::fmt::Debug;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Arithmetic of a field with a conjugation, supplied by a context value.
///
/// Elements do not carry their context; the context decides how they multiply.
pub trait Field {
    type Elem: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn sub(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn neg(&self, x: &Self::Elem) -> Self::Elem;
    fn conj(&self, x: &Self::Elem) -> Self::Elem;
    /// `None` exactly when `x` is zero.
    fn inv(&self, x: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, x: &Self::Elem) -> bool;
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Matrix<E> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<E>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("rows have different lengths".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_columns(cols: &[Vec<E>]) -> Result<Self> {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        if cols.iter().any(|col| col.len() != r) {
            return Err(Error::Dimension("columns have different lengths".into()));
        }
        Ok(Matrix::from_fn(r, c, |i, j| cols[j][i].clone()))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<E> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<E>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<E>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &E)> {
        self.data
            .iter()
            .enumerate()
            .map(move |(k, e)| (k / self.cols, k % self.cols, e))
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map<F: Clone>(&self, f: impl Fn(&E) -> F) -> Matrix<F> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Principal submatrix on the given index set.
    pub fn submatrix(&self, idx: &[usize]) -> Self {
        Matrix::from_fn(idx.len(), idx.len(), |i, j| {
            self.get(idx[i], idx[j]).clone()
        })
    }
}

impl<E: Serialize + Clone> Serialize for Matrix<E> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.rows))?;
        for i in 0..self.rows {
            seq.serialize_element(self.row(i))?;
        }
        seq.end()
    }
}

pub fn identity<F: Field>(f: &F, n: usize) -> Matrix<F::Elem> {
    Matrix::from_fn(n, n, |i, j| if i == j { f.one() } else { f.zero() })
}

pub fn mat_mul<F: Field>(
    f: &F,
    a: &Matrix<F::Elem>,
    b: &Matrix<F::Elem>,
) -> Result<Matrix<F::Elem>> {
    if a.cols != b.rows {
        return Err(Error::Dimension(format!(
            "cannot multiply {}x{} by {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    Ok(Matrix::from_fn(a.rows, b.cols, |i, j| {
        let mut acc = f.zero();
        for k in 0..a.cols {
            let (x, y) = (a.get(i, k), b.get(k, j));
            if !f.is_zero(x) && !f.is_zero(y) {
                acc = f.add(&acc, &f.mul(x, y));
            }
        }
        acc
    }))
}

pub fn conj<F: Field>(f: &F, a: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    a.map(|x| f.conj(x))
}

/// Conjugate transpose.
pub fn adjoint<F: Field>(f: &F, a: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    conj(f, &a.transpose())
}

pub fn scale<F: Field>(f: &F, c: &F::Elem, a: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    a.map(|x| f.mul(c, x))
}

/// `Pᵀ · G · P̄`, the Gram matrix of the columns of `P` for a form that is
/// linear in the first argument and conjugate-linear in the second.
pub fn congruence<F: Field>(
    f: &F,
    g: &Matrix<F::Elem>,
    p: &Matrix<F::Elem>,
) -> Result<Matrix<F::Elem>> {
    mat_mul(f, &mat_mul(f, &p.transpose(), g)?, &conj(f, p))
}

/// Row-reduces `[a | b]` to solve `a · x = b`; `Err(SingularMatrix)` if `a` is singular.
pub fn solve<F: Field>(f: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Result<Matrix<F::Elem>> {
    let n = a.rows;
    if !a.is_square() || b.rows != n {
        return Err(Error::Dimension("solve needs a square system".into()));
    }
    let m = b.cols;
    let mut aug: Vec<Vec<F::Elem>> = (0..n)
        .map(|i| a.row(i).iter().chain(b.row(i)).cloned().collect())
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .find(|&r| !f.is_zero(&aug[r][col]))
            .ok_or(Error::SingularMatrix)?;
        aug.swap(col, piv);
        let inv = f.inv(&aug[col][col]).ok_or(Error::SingularMatrix)?;
        for x in aug[col].iter_mut().skip(col) {
            *x = f.mul(&inv, x);
        }
        for r in 0..n {
            if r == col || f.is_zero(&aug[r][col]) {
                continue;
            }
            let factor = aug[r][col].clone();
            for c in col..n + m {
                let t = f.mul(&factor, &aug[col][c]);
                aug[r][c] = f.sub(&aug[r][c], &t);
            }
        }
    }
    Ok(Matrix::from_fn(n, m, |i, j| aug[i][n + j].clone()))
}

pub fn inverse<F: Field>(f: &F, a: &Matrix<F::Elem>) -> Result<Matrix<F::Elem>> {
    solve(f, a, &identity(f, a.rows))
}

pub fn det<F: Field>(f: &F, a: &Matrix<F::Elem>) -> Result<F::Elem> {
    if !a.is_square() {
        return Err(Error::Dimension(
            "determinant of a non-square matrix".into(),
        ));
    }
    let n = a.rows;
    let mut m: Vec<Vec<F::Elem>> = a.to_rows();
    let mut acc = f.one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !f.is_zero(&m[r][col])) else {
            return Ok(f.zero());
        };
        if piv != col {
            m.swap(col, piv);
            acc = f.neg(&acc);
        }
        let pivot = m[col][col].clone();
        acc = f.mul(&acc, &pivot);
        let inv = f.inv(&pivot).expect("nonzero pivot");
        for r in col + 1..n {
            if f.is_zero(&m[r][col]) {
                continue;
            }
            let factor = f.mul(&m[r][col], &inv);
            for c in col..n {
                let t = f.mul(&factor, &m[col][c]);
                m[r][c] = f.sub(&m[r][c], &t);
            }
        }
    }
    Ok(acc)
}

/// Checks `a[j][i] = conj(a[i][j])`, reporting the first offending position.
pub fn check_hermitian<F: Field>(f: &F, a: &Matrix<F::Elem>) -> Result<()> {
    if !a.is_square() {
        return Err(Error::Dimension("Hermitian matrix must be square".into()));
    }
    for i in 0..a.rows {
        for j in i..a.cols {
            if *a.get(j, i) != f.conj(a.get(i, j)) {
                return Err(Error::HermitianViolation { row: j, col: i });
            }
        }
    }
    Ok(())
}
