//! Eigenvalue utilities for the two structured families with known roots.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::quasidet::is_rc_singular;
use super::BiMatrix;
use crate::algebra::{Algebra, Element};
use crate::error::{Error, Result};
use crate::report::Report;

/// Checks `a rc v = b v` (scalar acting from the left) and whether `a - bδ`
/// is rc-singular.
pub fn verify_eigen_rc(a: &BiMatrix, b: &Element, v: &BiMatrix) -> Result<Report> {
    let n = a.rows();
    if !a.is_square() || v.shape() != (n, 1) {
        return Err(Error::ShapeMismatch(format!(
            "need square a and an {n}x1 column, got {:?} and {:?}",
            a.shape(),
            v.shape()
        )));
    }
    if v.max_norm() == 0.0 {
        return Err(Error::InvalidArgument("eigenvector must be nonzero".into()));
    }
    let lhs = a.rc_mul(v)?;
    let rhs = v.left_scale(b);
    let residual = lhs.max_diff(&rhs);
    let shifted = a.sub(&BiMatrix::identity(a.algebra(), n).left_scale(b))?;
    let singular = is_rc_singular(&shifted);
    let tol = 1e-9 * (1.0 + a.max_norm() * v.max_norm());
    Ok(Report::new(residual <= tol, residual)
        .metric("shifted_singular", if singular { 1.0 } else { 0.0 })
        .witness(json!({ "eigenvalue": b.to_string() })))
}

/// Roots `b = f` and `b = -f` for the matrix `[[0, f], [f, 0]]`.
pub fn eigen_offdiag(f: &Element) -> Result<[Element; 2]> {
    if f.is_zero(0.0) {
        return Err(Error::InvalidArgument(
            "off-diagonal entry must be nonzero".into(),
        ));
    }
    Ok([f.clone(), -f])
}

/// A unit pure quaternion, drawn uniformly on the sphere by rejection.
/// Every such `b` satisfies `b² = -1`, a root of the elliptic system.
pub fn elliptic_eigen_sample(seed: u64) -> Element {
    let alg = Algebra::quaternion();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let v: [f64; 3] = [
            rng.gen_range(-1.0..=1.0),
            rng.gen_range(-1.0..=1.0),
            rng.gen_range(-1.0..=1.0),
        ];
        let r2: f64 = v.iter().map(|c| c * c).sum();
        if r2 > 1e-4 && r2 <= 1.0 {
            let r = r2.sqrt();
            return alg
                .element(&[0.0, v[0] / r, v[1] / r, v[2] / r])
                .expect("quaternion has four coefficients");
        }
    }
}
