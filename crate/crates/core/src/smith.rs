//! Smith normal form of the polynomial matrix `xI - A` over `k[x]`,
//! yielding the invariant factors and the characteristic polynomial.
//!
//! The reduction pivots on the minimal-degree nonzero entry (ties broken by
//! row then column), clears rows and columns by polynomial division, and
//! repairs divisibility by folding offending rows into the pivot row. The
//! accumulated transforms are verified by exact multiplication before the
//! form is returned.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::matrix::Matrix;
use crate::poly::Polynomial;

/// Dense matrix of polynomials over one field.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<Polynomial>,
}

impl PolyMatrix {
    pub fn from_fn(
        field: &Field,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Polynomial,
    ) -> PolyMatrix {
        PolyMatrix {
            field: field.clone(),
            rows,
            cols,
            entries: (0..rows * cols).map(|k| f(k / cols, k % cols)).collect(),
        }
    }

    pub fn identity(field: &Field, n: usize) -> PolyMatrix {
        PolyMatrix::from_fn(field, n, n, |i, j| {
            if i == j {
                Polynomial::one(field)
            } else {
                Polynomial::zero(field)
            }
        })
    }

    /// The characteristic matrix `xI - A`.
    pub fn char_matrix(a: &Matrix) -> PolyMatrix {
        let field = a.field();
        PolyMatrix::from_fn(field, a.rows(), a.cols(), |i, j| {
            let c = Polynomial::constant(-a.get(i, j));
            if i == j {
                &Polynomial::x(field) + &c
            } else {
                c
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Polynomial) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn mul(&self, rhs: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch");
        PolyMatrix::from_fn(&self.field, self.rows, rhs.cols, |i, j| {
            let mut acc = Polynomial::zero(&self.field);
            for k in 0..self.cols {
                let a = self.get(i, k);
                if !a.is_zero() {
                    acc = &acc + &(a * rhs.get(k, j));
                }
            }
            acc
        })
    }

    /// Substitute a scalar for x in every entry.
    pub fn eval_at(&self, at: &FieldElement) -> Matrix {
        Matrix::from_fn(&self.field, self.rows, self.cols, |i, j| {
            self.get(i, j).eval(at)
        })
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows)
            .all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }
}

impl fmt::Debug for PolyMatrix {
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

/// Smith normal form of `xI - A`: `left * (xI - A) * right = diag(factors)`
/// with monic invariant factors in a divisibility chain and unimodular
/// transforms.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub invariant_factors: Vec<Polynomial>,
    pub left_transform: PolyMatrix,
    pub right_transform: PolyMatrix,
    /// Determinants of the transforms (nonzero field constants).
    pub left_det: FieldElement,
    pub right_det: FieldElement,
}

impl SmithForm {
    /// The invariant factors of positive degree, ascending.
    pub fn nontrivial_factors(&self) -> Vec<Polynomial> {
        self.invariant_factors
            .iter()
            .filter(|f| f.degree() > Some(0))
            .cloned()
            .collect()
    }
}

struct SnfWorker {
    m: PolyMatrix,
    left: PolyMatrix,
    right: PolyMatrix,
    left_det: FieldElement,
    right_det: FieldElement,
}

impl SnfWorker {
    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.m.cols {
            self.m.entries.swap(a * self.m.cols + j, b * self.m.cols + j);
        }
        for j in 0..self.left.cols {
            self.left
                .entries
                .swap(a * self.left.cols + j, b * self.left.cols + j);
        }
        self.left_det = -&self.left_det;
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.m.rows {
            self.m.entries.swap(i * self.m.cols + a, i * self.m.cols + b);
        }
        for i in 0..self.right.rows {
            self.right
                .entries
                .swap(i * self.right.cols + a, i * self.right.cols + b);
        }
        self.right_det = -&self.right_det;
    }

    /// row_i -= q * row_k
    fn row_sub(&mut self, i: usize, k: usize, q: &Polynomial) {
        for j in 0..self.m.cols {
            let v = self.m.get(i, j) - &(q * self.m.get(k, j));
            self.m.set(i, j, v);
        }
        for j in 0..self.left.cols {
            let v = self.left.get(i, j) - &(q * self.left.get(k, j));
            self.left.set(i, j, v);
        }
    }

    /// col_j -= q * col_k
    fn col_sub(&mut self, j: usize, k: usize, q: &Polynomial) {
        for i in 0..self.m.rows {
            let v = self.m.get(i, j) - &(q * self.m.get(i, k));
            self.m.set(i, j, v);
        }
        for i in 0..self.right.rows {
            let v = self.right.get(i, j) - &(q * self.right.get(i, k));
            self.right.set(i, j, v);
        }
    }

    /// row_k += row_i
    fn row_add(&mut self, k: usize, i: usize) {
        for j in 0..self.m.cols {
            let v = self.m.get(k, j) + self.m.get(i, j);
            self.m.set(k, j, v);
        }
        for j in 0..self.left.cols {
            let v = self.left.get(k, j) + self.left.get(i, j);
            self.left.set(k, j, v);
        }
    }

    fn scale_row(&mut self, i: usize, s: &FieldElement) {
        for j in 0..self.m.cols {
            let v = self.m.get(i, j).scale(s);
            self.m.set(i, j, v);
        }
        for j in 0..self.left.cols {
            let v = self.left.get(i, j).scale(s);
            self.left.set(i, j, v);
        }
        self.left_det = &self.left_det * s;
    }

    /// Minimal-degree nonzero entry in the trailing submatrix, ties by
    /// (row, col).
    fn find_pivot(&self, k: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, usize)> = None;
        for i in k..self.m.rows {
            for j in k..self.m.cols {
                let e = self.m.get(i, j);
                if let Some(d) = e.degree() {
                    if best.map(|(bd, _, _)| d < bd).unwrap_or(true) {
                        best = Some((d, i, j));
                    }
                }
            }
        }
        best.map(|(_, i, j)| (i, j))
    }
}

/// Smith normal form of `xI - A`.
pub fn smith_normal_form(a: &Matrix) -> Result<SmithForm> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix is not square",
            a.rows(),
            a.cols()
        )));
    }
    let field = a.field().clone();
    let n = a.rows();
    let mut w = SnfWorker {
        m: PolyMatrix::char_matrix(a),
        left: PolyMatrix::identity(&field, n),
        right: PolyMatrix::identity(&field, n),
        left_det: field.one(),
        right_det: field.one(),
    };
    for k in 0..n {
        'pivot: loop {
            let (pi, pj) = w
                .find_pivot(k)
                .expect("xI - A has full rank over k[x]");
            w.swap_rows(k, pi);
            w.swap_cols(k, pj);
            // clear column k and row k by division; remainders shrink the
            // pivot degree, so this terminates
            let mut clean = true;
            for i in 0..n {
                if i != k && !w.m.get(i, k).is_zero() {
                    let (q, r) = w.m.get(i, k).divmod(w.m.get(k, k))?;
                    w.row_sub(i, k, &q);
                    if !r.is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                continue 'pivot;
            }
            for j in 0..n {
                if j != k && !w.m.get(k, j).is_zero() {
                    let (q, r) = w.m.get(k, j).divmod(w.m.get(k, k))?;
                    w.col_sub(j, k, &q);
                    if !r.is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                continue 'pivot;
            }
            // pivot must divide every remaining entry for the chain
            for i in k + 1..n {
                for j in k + 1..n {
                    if !w.m.get(i, j).is_zero()
                        && !w.m.get(i, j).rem(w.m.get(k, k))?.is_zero()
                    {
                        w.row_add(k, i);
                        continue 'pivot;
                    }
                }
            }
            break;
        }
    }
    // normalize the diagonal to monic
    for k in 0..n {
        let lc = w.m.get(k, k).leading_coeff().cloned().expect("nonzero");
        if !lc.is_one() {
            w.scale_row(k, &lc.inv()?);
        }
    }
    let factors: Vec<Polynomial> = (0..n).map(|k| w.m.get(k, k).clone()).collect();
    for i in 0..n.saturating_sub(1) {
        assert!(
            factors[i].divides(&factors[i + 1]),
            "invariant factor chain broken"
        );
    }
    // verify left * (xI - A) * right = diag exactly
    let product = w.left.mul(&PolyMatrix::char_matrix(a)).mul(&w.right);
    assert!(product.is_diagonal(), "SNF verification failed: not diagonal");
    for k in 0..n {
        assert_eq!(
            product.get(k, k),
            &factors[k],
            "SNF verification failed: diagonal mismatch"
        );
    }
    Ok(SmithForm {
        invariant_factors: factors,
        left_transform: w.left,
        right_transform: w.right,
        left_det: w.left_det,
        right_det: w.right_det,
    })
}

/// Characteristic polynomial as the product of the invariant factors of
/// `xI - A`; monic of degree exactly n.
pub fn characteristic_polynomial(a: &Matrix) -> Result<Polynomial> {
    let snf = smith_normal_form(a)?;
    let field = a.field();
    let mut prod = Polynomial::one(field);
    for f in &snf.invariant_factors {
        prod = &prod * f;
    }
    assert_eq!(prod.degree(), Some(a.rows()), "char degree must be n");
    assert!(prod.is_monic());
    Ok(prod)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prng::Prng;

    fn f2() -> Field {
        Field::prime(2).unwrap()
    }

    fn f5() -> Field {
        Field::prime(5).unwrap()
    }

    #[test]
    fn identity_over_f2() {
        let k = f2();
        let snf = smith_normal_form(&Matrix::identity(&k, 2)).unwrap();
        let x1 = Polynomial::from_ints(&k, &[1, 1]);
        assert_eq!(snf.invariant_factors, vec![x1.clone(), x1]);
    }

    #[test]
    fn companion_gives_single_factor() {
        let k = f5();
        let f = Polynomial::from_ints(&k, &[2, 3, 0, 1]); // x^3 + 3x + 2
        let c = Matrix::companion(&f);
        let snf = smith_normal_form(&c).unwrap();
        assert_eq!(
            snf.invariant_factors,
            vec![Polynomial::one(&k), Polynomial::one(&k), f.clone()]
        );
        assert_eq!(snf.nontrivial_factors(), vec![f]);
    }

    #[test]
    fn fibonacci_over_f2() {
        let k = f2();
        let a = Matrix::from_int_rows(&k, &[&[1, 1], &[1, 0]]);
        let snf = smith_normal_form(&a).unwrap();
        assert_eq!(
            snf.invariant_factors,
            vec![Polynomial::one(&k), Polynomial::from_ints(&k, &[1, 1, 1])]
        );
    }

    #[test]
    fn characteristic_examples() {
        let k = f5();
        let id2 = Matrix::identity(&k, 2);
        assert_eq!(
            characteristic_polynomial(&id2).unwrap(),
            Polynomial::from_ints(&k, &[1, -2, 1]) // (x-1)^2
        );
        let d = Matrix::from_int_rows(&k, &[&[1, 0], &[0, 2]]);
        assert_eq!(
            characteristic_polynomial(&d).unwrap(),
            Polynomial::from_ints(&k, &[2, 2, 1]) // (x-1)(x-2) = x^2+2x+2 mod 5
        );
        let f = Polynomial::from_ints(&k, &[1, 4, 0, 2, 1]);
        assert_eq!(characteristic_polynomial(&Matrix::companion(&f)).unwrap(), f);
    }

    #[test]
    fn minimal_divides_characteristic_same_irreducibles() {
        let mut rng = Prng::new(17);
        for k in [f2(), Field::prime(3).unwrap(), f5()] {
            let q = k.order().unwrap();
            for _ in 0..25 {
                let n = 1 + rng.below(8) as usize;
                let a = Matrix::from_fn(&k, n, n, |_, _| {
                    k.element_from_index(rng.below(q)).unwrap()
                });
                let m = a.minimal_polynomial().unwrap();
                let c = characteristic_polynomial(&a).unwrap();
                assert!(m.divides(&c), "m_A must divide char_A");
                let mf = crate::factor::factor(&m, 0).unwrap();
                let cf = crate::factor::factor(&c, 0).unwrap();
                let msupp: Vec<_> = mf.factors.iter().map(|(g, _)| g.clone()).collect();
                let csupp: Vec<_> = cf.factors.iter().map(|(g, _)| g.clone()).collect();
                assert_eq!(msupp, csupp, "same irreducible support");
                // largest invariant factor equals the minimal polynomial
                let snf = smith_normal_form(&a).unwrap();
                assert_eq!(snf.invariant_factors.last().unwrap(), &m);
            }
        }
    }

    #[test]
    fn transforms_are_unimodular() {
        let mut rng = Prng::new(8);
        let k = f5();
        for _ in 0..20 {
            let n = 1 + rng.below(4) as usize;
            let a = Matrix::from_fn(&k, n, n, |_, _| {
                k.element_from_index(rng.below(5)).unwrap()
            });
            let snf = smith_normal_form(&a).unwrap();
            assert!(!snf.left_det.is_zero());
            assert!(!snf.right_det.is_zero());
            // spot-check: det of the evaluated transform at x = 2 matches
            // the tracked constant
            let at = k.int(2);
            assert_eq!(snf.left_transform.eval_at(&at).det().unwrap(), snf.left_det);
            assert_eq!(
                snf.right_transform.eval_at(&at).det().unwrap(),
                snf.right_det
            );
        }
    }

    #[test]
    fn rational_matrix_snf() {
        let q = Field::rational();
        let a = Matrix::from_int_rows(&q, &[&[0, 1], &[-1, 0]]);
        let snf = smith_normal_form(&a).unwrap();
        assert_eq!(
            snf.nontrivial_factors(),
            vec![Polynomial::from_ints(&q, &[1, 0, 1])]
        );
    }
}
