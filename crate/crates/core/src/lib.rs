//! Calculus and linear algebra over the real, complex and quaternion division algebras.
//!
//! Elements live in [`algebra`], matrices with the two products in [`biring`],
//! noncommutative polynomials and their derivatives in [`tensor`], power series in
//! [`series`], and differential forms and linear systems in [`diffeq`].

pub mod algebra;
pub mod biring;
pub mod diffeq;
pub mod error;
pub mod report;
pub mod series;
pub mod tensor;

pub use algebra::{Algebra, AlgebraDesc, Element, ElementData};
pub use biring::{BiMatrix, Product};
pub use error::{Error, Result};
pub use report::Report;
pub use series::SeriesParams;
