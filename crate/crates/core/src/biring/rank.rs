//! Rank through major minors.

use serde::Serialize;

use super::quasidet::rc_inv;
use super::BiMatrix;
use crate::algebra::Element;
use crate::error::{Error, Result};

/// Sorted row and column index sets of a square minor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinorSelector {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl MinorSelector {
    pub fn new(rows: Vec<usize>, cols: Vec<usize>, shape: (usize, usize)) -> Result<Self> {
        let ok = |set: &[usize], bound: usize| {
            set.windows(2).all(|w| w[0] < w[1]) && set.iter().all(|&x| x < bound)
        };
        if !ok(&rows, shape.0) || !ok(&cols, shape.1) {
            return Err(Error::InvalidArgument(
                "minor index sets must be sorted, distinct and in range".into(),
            ));
        }
        Ok(Self { rows, cols })
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }
}

/// Quasideterminant of the major minor bordered by row `row` and column `col`.
#[derive(Debug, Clone)]
pub struct BorderedCell {
    pub row: usize,
    pub col: usize,
    pub value: Element,
}

#[derive(Debug, Clone)]
pub struct RankInfo {
    pub rank: usize,
    /// `None` for the zero matrix.
    pub major: Option<MinorSelector>,
    pub bordered: Vec<BorderedCell>,
    /// For every row `p` outside the major minor, a row vector `λ` with
    /// `λ[p] = -1` and `λ rc a = 0`.
    pub dependencies: Vec<(usize, BiMatrix)>,
}

impl RankInfo {
    pub fn max_bordered(&self) -> f64 {
        self.bordered
            .iter()
            .map(|c| c.value.norm())
            .fold(0.0, f64::max)
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(pos) = (0..k).rev().find(|&p| idx[p] < n - k + p) else {
            return out;
        };
        idx[pos] += 1;
        for q in pos + 1..k {
            idx[q] = idx[q - 1] + 1;
        }
    }
}

/// Largest `k` with an rc-nonsingular `k x k` minor, plus the first such minor
/// in lexicographic order of (rows, cols).
pub fn rc_rank(a: &BiMatrix) -> RankInfo {
    let (m, n) = a.shape();
    for k in (1..=m.min(n)).rev() {
        for rows in combinations(m, k) {
            for cols in combinations(n, k) {
                let minor = a.minor(&rows, &cols).expect("in range");
                if let Ok(inv) = rc_inv(&minor) {
                    let major = MinorSelector { rows, cols };
                    return border(a, major, &inv);
                }
            }
        }
    }
    RankInfo {
        rank: 0,
        major: None,
        bordered: Vec::new(),
        dependencies: Vec::new(),
    }
}

fn border(a: &BiMatrix, major: MinorSelector, inv: &BiMatrix) -> RankInfo {
    let (m, n) = a.shape();
    let alg = a.algebra();
    let mut bordered = Vec::new();
    let mut dependencies = Vec::new();
    for p in (0..m).filter(|p| !major.rows.contains(p)) {
        // λ_S = a[p, T] rc M^{-1}
        let lambda_s = a
            .minor(&[p], &major.cols)
            .and_then(|r| r.rc_mul(inv))
            .expect("conformable");
        for r in (0..n).filter(|r| !major.cols.contains(r)) {
            let col = a.minor(&major.rows, &[r]).expect("in range");
            let corr = lambda_s.rc_mul(&col).expect("conformable");
            bordered.push(BorderedCell {
                row: p,
                col: r,
                value: a.get(p, r) - corr.get(0, 0),
            });
        }
        let mut lambda = BiMatrix::zeros(alg, 1, m);
        for (li, &s) in major.rows.iter().enumerate() {
            lambda.set(0, s, lambda_s.get(0, li).clone());
        }
        lambda.set(0, p, -alg.one());
        dependencies.push((p, lambda));
    }
    RankInfo {
        rank: major.size(),
        major: Some(major),
        bordered,
        dependencies,
    }
}
