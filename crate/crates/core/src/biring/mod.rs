//! Matrices over a division algebra with two products.
//!
//! The row-column product is the usual contraction `(a rc b)[i][j] = Σ a[i][k] b[k][j]`.
//! The column-row product is its transpose dual,
//! `(a cr b)[i][j] = Σ a[k][j] b[i][k]`, so that
//! `(a rc b)^T = a^T cr b^T`. Both share the identity matrix.

mod eigen;
mod quasidet;
mod rank;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, Element, ElementData};
use crate::error::{Error, Result};

pub use eigen::{eigen_offdiag, elliptic_eigen_sample, verify_eigen_rc};
pub use quasidet::{
    cr_inv, inverse, is_cr_singular, is_rc_singular, quasidet, quasidet_cr, quasidet_matrix,
    quasidet_rc, rc_inv, solve_rc,
};
pub use rank::{rc_rank, BorderedCell, MinorSelector, RankInfo};

/// Which of the two matrix products.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Product {
    Rc,
    Cr,
}

impl Product {
    pub fn apply(self, a: &BiMatrix, b: &BiMatrix) -> Result<BiMatrix> {
        match self {
            Product::Rc => a.rc_mul(b),
            Product::Cr => a.cr_mul(b),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Product::Rc => "rc",
            Product::Cr => "cr",
        }
    }
}

/// Rectangular matrix of elements of one algebra, stored row-major.
#[derive(Clone)]
pub struct BiMatrix {
    alg: Algebra,
    rows: usize,
    cols: usize,
    entries: Vec<Element>,
}

impl BiMatrix {
    pub fn from_vec(rows: usize, cols: usize, entries: Vec<Element>) -> Result<Self> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        let alg = entries[0].algebra().clone();
        if let Some(bad) = entries.iter().find(|e| !e.algebra().same_as(&alg)) {
            return Err(Error::AlgebraMismatch {
                left: alg.tag().into(),
                right: bad.algebra().tag().into(),
            });
        }
        Ok(Self {
            alg,
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(rows: Vec<Vec<Element>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        Self::from_vec(r, c, rows.into_iter().flatten().collect())
    }

    /// Builds from real numbers embedded as scalars.
    pub fn from_reals(alg: &Algebra, rows: &[&[f64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| alg.scalar(v)).collect())
                .collect(),
        )
    }

    pub fn from_fn(
        alg: &Algebra,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Element,
    ) -> Result<Self> {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        let m = Self::from_vec(rows, cols, entries)?;
        if !m.alg.same_as(alg) {
            return Err(Error::AlgebraMismatch {
                left: alg.tag().into(),
                right: m.alg.tag().into(),
            });
        }
        Ok(m)
    }

    /// The Kronecker matrix δ.
    pub fn identity(alg: &Algebra, n: usize) -> Self {
        Self::from_fn(
            alg,
            n,
            n,
            |i, j| if i == j { alg.one() } else { alg.zero() },
        )
        .expect("n > 0")
    }

    pub fn zeros(alg: &Algebra, rows: usize, cols: usize) -> Self {
        Self::from_fn(alg, rows, cols, |_, _| alg.zero()).expect("nonempty shape")
    }

    pub fn column(entries: Vec<Element>) -> Result<Self> {
        Self::from_vec(entries.len(), 1, entries)
    }

    pub fn row(entries: Vec<Element>) -> Result<Self> {
        Self::from_vec(1, entries.len(), entries)
    }

    pub fn diag(entries: Vec<Element>) -> Result<Self> {
        let n = entries.len();
        let alg = entries
            .first()
            .ok_or_else(|| Error::ShapeMismatch("empty diagonal".into()))?
            .algebra()
            .clone();
        Self::from_fn(&alg, n, n, |i, j| {
            if i == j {
                entries[i].clone()
            } else {
                alg.zero()
            }
        })
    }

    pub fn random<R: rand::Rng + ?Sized>(
        alg: &Algebra,
        rows: usize,
        cols: usize,
        rng: &mut R,
        scale: f64,
    ) -> Self {
        Self::from_fn(alg, rows, cols, |_, _| alg.random_element(rng, scale)).expect("nonempty")
    }

    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
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

    pub fn get(&self, i: usize, j: usize) -> &Element {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Element) {
        assert!(value.algebra().same_as(&self.alg), "algebra mismatch");
        self.entries[i * self.cols + j] = value;
    }

    pub fn entries(&self) -> &[Element] {
        &self.entries
    }

    /// Entries in row-major order, consuming the matrix.
    pub fn into_entries(self) -> Vec<Element> {
        self.entries
    }

    pub fn transpose(&self) -> BiMatrix {
        BiMatrix::from_fn(&self.alg, self.cols, self.rows, |i, j| {
            self.get(j, i).clone()
        })
        .expect("nonempty")
    }

    fn check_same_shape(&self, other: &BiMatrix) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if !self.alg.same_as(&other.alg) {
            return Err(Error::AlgebraMismatch {
                left: self.alg.tag().into(),
                right: other.alg.tag().into(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &BiMatrix) -> Result<BiMatrix> {
        self.check_same_shape(other)?;
        Ok(self.zip(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &BiMatrix) -> Result<BiMatrix> {
        self.check_same_shape(other)?;
        Ok(self.zip(other, |a, b| a - b))
    }

    fn zip(&self, other: &BiMatrix, f: impl Fn(&Element, &Element) -> Element) -> BiMatrix {
        BiMatrix {
            alg: self.alg.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    pub fn map(&self, f: impl Fn(&Element) -> Element) -> BiMatrix {
        BiMatrix {
            alg: self.alg.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, s: f64) -> BiMatrix {
        self.map(|e| e.scale(s))
    }

    /// Multiplies every entry by `c` on the left.
    pub fn left_scale(&self, c: &Element) -> BiMatrix {
        self.map(|e| c * e)
    }

    /// Multiplies every entry by `c` on the right.
    pub fn right_scale(&self, c: &Element) -> BiMatrix {
        self.map(|e| e * c)
    }

    /// Row-column product `(a rc b)[i][j] = Σ_k a[i][k] b[k][j]`.
    pub fn rc_mul(&self, other: &BiMatrix) -> Result<BiMatrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "rc product needs cols(a) = rows(b): {}x{} rc {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        self.check_algebra(other)?;
        BiMatrix::from_fn(&self.alg, self.rows, other.cols, |i, j| {
            let mut acc = self.alg.zero();
            for k in 0..self.cols {
                acc += &(self.get(i, k) * other.get(k, j));
            }
            acc
        })
    }

    /// Column-row product `(a cr b)[i][j] = Σ_k a[k][j] b[i][k]`.
    ///
    /// Needs `rows(a) = cols(b)`; the result is `rows(b) x cols(a)`.
    pub fn cr_mul(&self, other: &BiMatrix) -> Result<BiMatrix> {
        if self.rows != other.cols {
            return Err(Error::ShapeMismatch(format!(
                "cr product needs rows(a) = cols(b): {}x{} cr {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        self.check_algebra(other)?;
        BiMatrix::from_fn(&self.alg, other.rows, self.cols, |i, j| {
            let mut acc = self.alg.zero();
            for k in 0..self.rows {
                acc += &(self.get(k, j) * other.get(i, k));
            }
            acc
        })
    }

    fn check_algebra(&self, other: &BiMatrix) -> Result<()> {
        if self.alg.same_as(&other.alg) {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch {
                left: self.alg.tag().into(),
                right: other.alg.tag().into(),
            })
        }
    }

    /// Hadamard inverse: `(H a)[i][j] = (a[j][i])^{-1}`.
    pub fn hadamard_inv(&self) -> Result<BiMatrix> {
        let mut entries = Vec::with_capacity(self.entries.len());
        for i in 0..self.cols {
            for j in 0..self.rows {
                let inv = self
                    .get(j, i)
                    .inv()
                    .map_err(|_| Error::HadamardUndefined { row: j, col: i })?;
                entries.push(inv);
            }
        }
        BiMatrix::from_vec(self.cols, self.rows, entries)
    }

    fn pow_with(&self, n: usize, product: Product) -> Result<BiMatrix> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch(format!(
                "power of a non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let mut acc = BiMatrix::identity(&self.alg, self.rows);
        for _ in 0..n {
            acc = product.apply(&acc, self)?;
        }
        Ok(acc)
    }

    /// `a^0 = δ`, `a^n = a^{n-1} rc a`.
    pub fn rc_pow(&self, n: usize) -> Result<BiMatrix> {
        self.pow_with(n, Product::Rc)
    }

    /// `a^0 = δ`, `a^n = a^{n-1} cr a`.
    pub fn cr_pow(&self, n: usize) -> Result<BiMatrix> {
        self.pow_with(n, Product::Cr)
    }

    pub fn pow(&self, n: usize, product: Product) -> Result<BiMatrix> {
        self.pow_with(n, product)
    }

    /// Largest entry norm.
    pub fn max_norm(&self) -> f64 {
        self.entries.iter().map(Element::norm).fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &BiMatrix, tol: f64) -> bool {
        self.shape() == other.shape()
            && self.alg.same_as(&other.alg)
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|(a, b)| (a - b).norm() <= tol)
    }

    /// Largest entry norm of `self - other`; infinite on shape mismatch.
    pub fn max_diff(&self, other: &BiMatrix) -> f64 {
        if self.shape() != other.shape() {
            return f64::INFINITY;
        }
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Submatrix on the given (sorted) row and column index sets.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> Result<BiMatrix> {
        if rows.iter().any(|&r| r >= self.rows) || cols.iter().any(|&c| c >= self.cols) {
            return Err(Error::InvalidArgument("minor index out of range".into()));
        }
        BiMatrix::from_fn(&self.alg, rows.len(), cols.len(), |i, j| {
            self.get(rows[i], cols[j]).clone()
        })
    }

    /// Deletes row `i` and column `j`.
    pub fn without(&self, i: usize, j: usize) -> Result<BiMatrix> {
        let rows: Vec<usize> = (0..self.rows).filter(|&r| r != i).collect();
        let cols: Vec<usize> = (0..self.cols).filter(|&c| c != j).collect();
        self.minor(&rows, &cols)
    }

    pub fn to_data(&self) -> MatrixData {
        MatrixData {
            algebra: self.alg.tag().to_string(),
            entries: (0..self.rows)
                .map(|i| (0..self.cols).map(|j| self.get(i, j).to_data()).collect())
                .collect(),
        }
    }
}

impl fmt::Debug for BiMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiMatrix<{}>[", self.alg.tag())?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

/// Data form `{"algebra": "<tag>", "entries": [[elem, …], …]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixData {
    pub algebra: String,
    pub entries: Vec<Vec<ElementData>>,
}

impl TryFrom<MatrixData> for BiMatrix {
    type Error = Error;
    fn try_from(data: MatrixData) -> Result<Self> {
        let alg = Algebra::from_tag(&data.algebra)?;
        let rows = data
            .entries
            .into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|e| {
                        if e.algebra != alg.tag() {
                            return Err(Error::AlgebraMismatch {
                                left: alg.tag().into(),
                                right: e.algebra,
                            });
                        }
                        Element::try_from(e)
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        BiMatrix::from_rows(rows)
    }
}

impl Serialize for BiMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_data().serialize(s)
    }
}

impl<'de> Deserialize<'de> for BiMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        BiMatrix::try_from(MatrixData::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}
