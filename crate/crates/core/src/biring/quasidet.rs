//! Quasideterminants and the inverses built from them.
//!
//! For a square matrix with inverse `b`, the `(i, j)` quasideterminant is
//! `(b[j][i])^{-1}`. Entries of the inverse are therefore computed as inverted
//! quasideterminants. When the minor obtained by deleting row `i` and column
//! `j` is singular, the quasideterminant does not exist; for an invertible
//! matrix this happens exactly when the matching inverse entry is zero, so the
//! entry is set to zero and the finished inverse is checked against `δ`.

use std::collections::HashMap;

use super::{BiMatrix, Product};
use crate::algebra::Element;
use crate::error::{Error, Result};

const PIVOT_REL_TOL: f64 = 1e-10;
const CHECK_REL_TOL: f64 = 1e-8;

fn singular(product: Product) -> Error {
    Error::Singular(product.name())
}

type Memo = HashMap<(Vec<usize>, Vec<usize>), Option<BiMatrix>>;

/// Shared state for inverting minors of one matrix.
struct Inverter<'a> {
    a: &'a BiMatrix,
    product: Product,
    pivot_tol: f64,
    memo: Memo,
}

impl<'a> Inverter<'a> {
    fn new(a: &'a BiMatrix, product: Product) -> Self {
        Self {
            a,
            product,
            pivot_tol: PIVOT_REL_TOL * (1.0 + a.max_norm()),
            memo: HashMap::new(),
        }
    }

    /// Quasideterminant of the minor on `rows x cols` at original cell `(p, r)`.
    /// `None` when the inner minor is singular.
    fn quasidet(&mut self, rows: &[usize], cols: &[usize], p: usize, r: usize) -> Option<Element> {
        let a = self.a;
        let apr = a.get(p, r).clone();
        if rows.len() == 1 {
            return Some(apr);
        }
        let inner_rows: Vec<usize> = rows.iter().copied().filter(|&x| x != p).collect();
        let inner_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != r).collect();
        let m_inv = self.inverse(&inner_rows, &inner_cols)?;
        let row = a.minor(&[p], &inner_cols).expect("in range");
        let col = a.minor(&inner_rows, &[r]).expect("in range");
        let correction = match self.product {
            Product::Rc => row.rc_mul(&m_inv).and_then(|x| x.rc_mul(&col)),
            Product::Cr => col.cr_mul(&m_inv).and_then(|x| x.cr_mul(&row)),
        }
        .expect("conformable shapes");
        Some(&apr - correction.get(0, 0))
    }

    /// Inverse of the minor on `rows x cols` under the chosen product.
    fn inverse(&mut self, rows: &[usize], cols: &[usize]) -> Option<BiMatrix> {
        let key = (rows.to_vec(), cols.to_vec());
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        let result = self.inverse_uncached(rows, cols);
        self.memo.insert(key, result.clone());
        result
    }

    fn inverse_uncached(&mut self, rows: &[usize], cols: &[usize]) -> Option<BiMatrix> {
        let n = rows.len();
        let alg = self.a.algebra().clone();
        let mut inv = BiMatrix::zeros(&alg, n, n);
        for (li, &p) in rows.iter().enumerate() {
            for (lj, &r) in cols.iter().enumerate() {
                match self.quasidet(rows, cols, p, r) {
                    // inner minor singular: this inverse entry vanishes if the minor is invertible
                    None => {}
                    Some(q) if q.norm() <= self.pivot_tol => return None,
                    Some(q) => inv.set(lj, li, q.inv().ok()?),
                }
            }
        }
        let minor = self.a.minor(rows, cols).expect("in range");
        if check_inverse(&minor, &inv, self.product) {
            Some(inv)
        } else {
            None
        }
    }
}

fn check_inverse(a: &BiMatrix, inv: &BiMatrix, product: Product) -> bool {
    let n = a.rows();
    let d = BiMatrix::identity(a.algebra(), n);
    let tol = CHECK_REL_TOL * (1.0 + n as f64 * a.max_norm() * inv.max_norm());
    let left = product.apply(a, inv).map(|m| m.max_diff(&d));
    let right = product.apply(inv, a).map(|m| m.max_diff(&d));
    matches!((left, right), (Ok(l), Ok(r)) if l <= tol && r <= tol)
}

fn require_square(a: &BiMatrix) -> Result<()> {
    if a.is_square() {
        Ok(())
    } else {
        Err(Error::ShapeMismatch(format!(
            "square matrix required, got {}x{}",
            a.rows(),
            a.cols()
        )))
    }
}

/// The `(i, j)` quasideterminant under the given product.
pub fn quasidet(a: &BiMatrix, i: usize, j: usize, product: Product) -> Result<Element> {
    require_square(a)?;
    if i >= a.rows() || j >= a.cols() {
        return Err(Error::InvalidArgument(format!(
            "cell ({i}, {j}) out of range"
        )));
    }
    let all: Vec<usize> = (0..a.rows()).collect();
    Inverter::new(a, product)
        .quasidet(&all, &all, i, j)
        .ok_or(Error::QuasideterminantUndefined { row: i, col: j })
}

/// `a[i][j] - a[i][·j] rc (minor)^{-1} rc a[·i][j]`.
pub fn quasidet_rc(a: &BiMatrix, i: usize, j: usize) -> Result<Element> {
    quasidet(a, i, j, Product::Rc)
}

/// `a[i][j] - a[·i][j] cr (minor)^{-1} cr a[i][·j]`.
pub fn quasidet_cr(a: &BiMatrix, i: usize, j: usize) -> Result<Element> {
    quasidet(a, i, j, Product::Cr)
}

/// All `n x n` quasideterminants, `None` where undefined.
pub fn quasidet_matrix(a: &BiMatrix, product: Product) -> Result<Vec<Vec<Option<Element>>>> {
    require_square(a)?;
    let all: Vec<usize> = (0..a.rows()).collect();
    let mut inv = Inverter::new(a, product);
    Ok(all
        .iter()
        .map(|&i| {
            all.iter()
                .map(|&j| inv.quasidet(&all, &all, i, j))
                .collect()
        })
        .collect())
}

/// Inverse under the given product.
pub fn inverse(a: &BiMatrix, product: Product) -> Result<BiMatrix> {
    require_square(a)?;
    let all: Vec<usize> = (0..a.rows()).collect();
    Inverter::new(a, product)
        .inverse(&all, &all)
        .ok_or_else(|| singular(product))
}

pub fn rc_inv(a: &BiMatrix) -> Result<BiMatrix> {
    inverse(a, Product::Rc)
}

pub fn cr_inv(a: &BiMatrix) -> Result<BiMatrix> {
    inverse(a, Product::Cr)
}

pub fn is_rc_singular(a: &BiMatrix) -> bool {
    rc_inv(a).is_err()
}

pub fn is_cr_singular(a: &BiMatrix) -> bool {
    cr_inv(a).is_err()
}

/// Solves `a rc x = b` for a column `x`.
pub fn solve_rc(a: &BiMatrix, b: &BiMatrix) -> Result<BiMatrix> {
    if b.cols() != 1 || b.rows() != a.rows() {
        return Err(Error::ShapeMismatch(format!(
            "right-hand side must be a {}x1 column, got {}x{}",
            a.rows(),
            b.rows(),
            b.cols()
        )));
    }
    rc_inv(a)?.rc_mul(b)
}
