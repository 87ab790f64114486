//! Dense exact matrices: arithmetic, powers, Gauss–Jordan elimination,
//! kernels, determinants, and Krylov-based minimal polynomials and
//! annihilators.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::poly::Polynomial;

/// Dimension cap for dense exact linear algebra.
pub const MAX_DIM: usize = 64;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<FieldElement>,
}

/// Binary matrix operation selector for the dispatch entry point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatOp {
    Add,
    Sub,
    Mul,
}

/// Checked matrix arithmetic with dimension and field validation.
pub fn mat_arith(a: &Matrix, b: &Matrix, op: MatOp) -> Result<Matrix> {
    if a.field != b.field {
        return Err(Error::FieldMismatch(
            a.field.to_string(),
            b.field.to_string(),
        ));
    }
    match op {
        MatOp::Add | MatOp::Sub => {
            if (a.rows, a.cols) != (b.rows, b.cols) {
                return Err(Error::DimensionMismatch(format!(
                    "{}x{} vs {}x{}",
                    a.rows, a.cols, b.rows, b.cols
                )));
            }
            Ok(if op == MatOp::Add { a + b } else { a - b })
        }
        MatOp::Mul => {
            if a.cols != b.rows {
                return Err(Error::DimensionMismatch(format!(
                    "{}x{} times {}x{}",
                    a.rows, a.cols, b.rows, b.cols
                )));
            }
            Ok(a * b)
        }
    }
}

/// `a^t` with binary exponentiation; negative powers require an invertible
/// matrix.
pub fn mat_pow(a: &Matrix, t: i64) -> Result<Matrix> {
    a.square_check()?;
    if t >= 0 {
        Ok(a.pow_u64(t as u64))
    } else {
        let inv = a.inverse()?;
        Ok(inv.pow_u64(t.unsigned_abs()))
    }
}

impl Matrix {
    pub fn from_rows(field: &Field, rows: Vec<Vec<FieldElement>>) -> Result<Matrix> {
        let r = rows.len();
        if r == 0 {
            return Err(Error::DimensionMismatch("matrix needs at least one row".into()));
        }
        let c = rows[0].len();
        if c == 0 {
            return Err(Error::DimensionMismatch(
                "matrix needs at least one column".into(),
            ));
        }
        if r > MAX_DIM || c > MAX_DIM {
            return Err(Error::DimensionMismatch(format!(
                "dimension {r}x{c} exceeds the cap of {MAX_DIM}"
            )));
        }
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch("ragged rows".into()));
            }
            for e in row {
                if e.field() != field {
                    return Err(Error::FieldMismatch(
                        field.to_string(),
                        e.field().to_string(),
                    ));
                }
                entries.push(e);
            }
        }
        Ok(Matrix {
            field: field.clone(),
            rows: r,
            cols: c,
            entries,
        })
    }

    pub fn from_fn(
        field: &Field,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> FieldElement,
    ) -> Matrix {
        let entries = (0..rows * cols)
            .map(|k| f(k / cols, k % cols))
            .collect();
        Matrix {
            field: field.clone(),
            rows,
            cols,
            entries,
        }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(field: &Field, cols: &[Vec<FieldElement>]) -> Matrix {
        let n = cols[0].len();
        Matrix::from_fn(field, n, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn from_int_rows(field: &Field, rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            field,
            rows.iter()
                .map(|r| r.iter().map(|&v| field.int(v)).collect())
                .collect(),
        )
        .expect("literal matrix")
    }

    pub fn zero(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(field, rows, cols, |_, _| field.zero())
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        Matrix::from_fn(field, n, n, |i, j| if i == j { field.one() } else { field.zero() })
    }

    /// Companion matrix of a monic polynomial: ones on the subdiagonal and
    /// the negated coefficients in the last column.
    pub fn companion(f: &Polynomial) -> Matrix {
        assert!(f.is_monic(), "companion matrix needs a monic polynomial");
        let d = f.degree().expect("nonzero");
        assert!(d >= 1, "companion matrix needs degree >= 1");
        let field = f.field();
        Matrix::from_fn(field, d, d, |i, j| {
            if j + 1 == d {
                -&f.coeff(i)
            } else if i == j + 1 {
                field.one()
            } else {
                field.zero()
            }
        })
    }

    /// Block-diagonal assembly of square blocks.
    pub fn block_diag(field: &Field, blocks: &[Matrix]) -> Matrix {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let mut m = Matrix::zero(field, n, n);
        let mut off = 0;
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.set(off + i, off + j, b.get(i, j).clone());
                }
            }
            off += b.rows;
        }
        m
    }

    pub fn field(&self) -> &Field {
        &self.field
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

    fn square_check(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!(
                "{}x{} matrix is not square",
                self.rows, self.cols
            )))
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &FieldElement {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<FieldElement> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Matrix::identity(&self.field, self.rows)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(FieldElement::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(&self.field, self.cols, self.rows, |i, j| {
            self.get(j, i).clone()
        })
    }

    /// Matrix–vector product (panics on dimension mismatch).
    pub fn matvec(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(v.len(), self.cols, "matvec dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = self.field.zero();
                for (j, x) in v.iter().enumerate() {
                    if !x.is_zero() {
                        acc = &acc + &(self.get(i, j) * x);
                    }
                }
                acc
            })
            .collect()
    }

    /// Checked matrix–vector product.
    pub fn apply(&self, v: &[FieldElement]) -> Result<Vec<FieldElement>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok(self.matvec(v))
    }

    /// `A^e` for a nonnegative exponent (checked square).
    pub fn pow_checked(&self, e: u64) -> Result<Matrix> {
        self.square_check()?;
        Ok(self.pow_u64(e))
    }

    fn pow_u64(&self, mut t: u64) -> Matrix {
        let mut acc = Matrix::identity(&self.field, self.rows);
        let mut base = self.clone();
        while t > 0 {
            if t & 1 == 1 {
                acc = &acc * &base;
            }
            if t > 1 {
                base = &base * &base;
            }
            t >>= 1;
        }
        acc
    }

    /// Reduced row echelon form; returns the reduced matrix and the pivot
    /// columns in increasing order.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            // first nonzero pivot in column c at or below row r
            let Some(pr) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = m.get(r, c).inv().expect("pivot nonzero");
            m.scale_row(r, &inv);
            for i in 0..m.rows {
                if i != r && !m.get(i, c).is_zero() {
                    let t = m.get(i, c).clone();
                    m.sub_scaled_row(i, r, &t);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, r: usize, s: &FieldElement) {
        for j in 0..self.cols {
            let v = self.get(r, j) * s;
            self.set(r, j, v);
        }
    }

    /// row_i -= s * row_r
    fn sub_scaled_row(&mut self, i: usize, r: usize, s: &FieldElement) {
        for j in 0..self.cols {
            let v = self.get(i, j) - &(self.get(r, j) * s);
            self.set(i, j, v);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Canonical kernel basis derived from the reduced row echelon form:
    /// one vector per free column, free columns in increasing order.
    pub fn kernel_basis(&self) -> Vec<Vec<FieldElement>> {
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivots.binary_search(&free).is_ok() {
                continue;
            }
            let mut v = vec![self.field.zero(); self.cols];
            v[free] = self.field.one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -r.get(row, free);
            }
            basis.push(v);
        }
        basis
    }

    pub fn inverse(&self) -> Result<Matrix> {
        self.square_check()?;
        let n = self.rows;
        // eliminate on [self | I]
        let mut aug = Matrix::from_fn(&self.field, n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else if j - n == i {
                self.field.one()
            } else {
                self.field.zero()
            }
        });
        // every column must produce a pivot on the diagonal, or the matrix
        // is singular
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| !aug.get(i, c).is_zero()) else {
                return Err(Error::SingularMatrix);
            };
            aug.swap_rows(c, pr);
            let inv = aug.get(c, c).inv()?;
            aug.scale_row(c, &inv);
            for i in 0..n {
                if i != c && !aug.get(i, c).is_zero() {
                    let t = aug.get(i, c).clone();
                    aug.sub_scaled_row(i, c, &t);
                }
            }
        }
        Ok(Matrix::from_fn(&self.field, n, n, |i, j| {
            aug.get(i, j + n).clone()
        }))
    }

    pub fn det(&self) -> Result<FieldElement> {
        self.square_check()?;
        let n = self.rows;
        let mut m = self.clone();
        let mut det = self.field.one();
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return Ok(self.field.zero());
            };
            if pr != c {
                m.swap_rows(c, pr);
                det = -&det;
            }
            let pivot = m.get(c, c).clone();
            det = &det * &pivot;
            let inv = pivot.inv()?;
            for i in c + 1..n {
                if !m.get(i, c).is_zero() {
                    let t = m.get(i, c) * &inv;
                    m.sub_scaled_row(i, c, &t);
                }
            }
        }
        Ok(det)
    }

    /// One solution of `self * x = rhs` if the system is consistent
    /// (free variables set to zero).
    pub fn solve(&self, rhs: &[FieldElement]) -> Option<Vec<FieldElement>> {
        assert_eq!(rhs.len(), self.rows, "solve dimension mismatch");
        let aug = Matrix::from_fn(&self.field, self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                rhs[i].clone()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(row, self.cols).clone();
        }
        Some(x)
    }

    /// Monic annihilator of a vector under this matrix: the least-degree
    /// monic `f` with `f(A)v = 0`, found by Gaussian elimination on the
    /// Krylov sequence `v, Av, A^2 v, ...`. The zero vector yields 1.
    pub fn krylov_annihilator(&self, v: &[FieldElement]) -> Result<Polynomial> {
        self.square_check()?;
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against dimension {}",
                v.len(),
                self.rows
            )));
        }
        let n = self.rows;
        // echelon rows: (pivot column, normalized vector, expansion in powers)
        let mut echelon: Vec<(usize, Vec<FieldElement>, Vec<FieldElement>)> = Vec::new();
        let mut raw = v.to_vec();
        for k in 0..=n {
            let mut w = raw.clone();
            let mut rep = vec![self.field.zero(); k + 1];
            rep[k] = self.field.one();
            for (pivot, evec, erep) in &echelon {
                let c = w[*pivot].clone();
                if c.is_zero() {
                    continue;
                }
                for (wi, ei) in w.iter_mut().zip(evec) {
                    *wi = &*wi - &(&c * ei);
                }
                for (ri, si) in rep.iter_mut().zip(erep) {
                    *ri = &*ri - &(&c * si);
                }
            }
            if w.iter().all(FieldElement::is_zero) {
                return Ok(Polynomial::from_coeffs(&self.field, rep).monic());
            }
            let pivot = w.iter().position(|e| !e.is_zero()).unwrap();
            let inv = w[pivot].inv()?;
            for wi in w.iter_mut() {
                *wi = &*wi * &inv;
            }
            let mut rep_norm = rep;
            for ri in rep_norm.iter_mut() {
                *ri = &*ri * &inv;
            }
            rep_norm.resize(n + 1, self.field.zero());
            echelon.push((pivot, w, rep_norm));
            raw = self.matvec(&raw);
        }
        unreachable!("a vector in dimension n has an annihilator of degree <= n")
    }

    /// Minimal polynomial: least-degree monic `m` with `m(A) = 0`, the lcm
    /// of the annihilators of the standard basis vectors.
    pub fn minimal_polynomial(&self) -> Result<Polynomial> {
        self.square_check()?;
        let n = self.rows;
        let mut m = Polynomial::one(&self.field);
        for i in 0..n {
            let mut e = vec![self.field.zero(); n];
            e[i] = self.field.one();
            let ann = self.krylov_annihilator(&e)?;
            m = m.lcm(&ann);
            if m.degree() == Some(n) {
                break;
            }
        }
        Ok(m)
    }

    /// `f(A) v` by Horner's scheme on vectors: deg(f) matrix-vector
    /// products, no matrix powers materialized.
    pub fn poly_apply(&self, f: &Polynomial, v: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(v.len(), self.cols, "poly_apply dimension mismatch");
        let mut acc = vec![self.field.zero(); self.rows];
        for c in f.coeffs().iter().rev() {
            acc = self.matvec(&acc);
            if !c.is_zero() {
                for (a, x) in acc.iter_mut().zip(v) {
                    *a = &*a + &(c * x);
                }
            }
        }
        acc
    }

    /// Evaluate a polynomial at this matrix.
    pub fn poly_eval(&self, f: &Polynomial) -> Result<Matrix> {
        self.square_check()?;
        let n = self.rows;
        let mut acc = Matrix::zero(&self.field, n, n);
        for c in f.coeffs().iter().rev() {
            acc = &acc * self;
            for i in 0..n {
                let v = acc.get(i, i) + c;
                acc.set(i, i, v);
            }
        }
        Ok(acc)
    }

    /// JSON array of rows of canonical element encodings.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            (0..self.rows)
                .map(|i| {
                    serde_json::Value::Array(
                        self.row(i).iter().map(FieldElement::to_json).collect(),
                    )
                })
                .collect(),
        )
    }

    pub fn from_json(field: &Field, v: &serde_json::Value) -> Result<Matrix> {
        let arr = v.as_array().ok_or_else(|| {
            Error::InvalidDocument("matrix must be an array of rows".into())
        })?;
        let rows = arr
            .iter()
            .map(|row| {
                let row = row.as_array().ok_or_else(|| {
                    Error::InvalidDocument("matrix rows must be arrays".into())
                })?;
                row.iter().map(|e| field.parse_element(e)).collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_rows(field, rows)
    }
}

impl std::ops::Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        Matrix::from_fn(&self.field, self.rows, self.cols, |i, j| {
            self.get(i, j) + rhs.get(i, j)
        })
    }
}

impl std::ops::Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        Matrix::from_fn(&self.field, self.rows, self.cols, |i, j| {
            self.get(i, j) - rhs.get(i, j)
        })
    }
}

impl std::ops::Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in matrix product");
        Matrix::from_fn(&self.field, self.rows, rhs.cols, |i, j| {
            let mut acc = self.field.zero();
            for k in 0..self.cols {
                let a = self.get(i, k);
                if !a.is_zero() {
                    acc = &acc + &(a * rhs.get(k, j));
                }
            }
            acc
        })
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{} over {}:\n{}", self.rows, self.cols, self.field, self)
    }
}
