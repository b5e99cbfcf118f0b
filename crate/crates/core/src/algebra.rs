//! Finite-dimensional associative unital real algebras and their elements.
//!
//! An algebra is described by a table of structure constants over a named
//! basis whose first vector is the unit. The real numbers, the complex
//! numbers and the quaternions ship as built-ins; other tables can be
//! registered through [`AlgebraDesc::new`].

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use once_cell::sync::Lazy;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Default tolerance used when comparing elements.
pub const DEFAULT_TOL: f64 = 1e-9;

pub(crate) type Coeffs = SmallVec<[f64; 4]>;

/// Structure-constant description of an algebra.
#[derive(Debug, Clone)]
pub struct AlgebraDesc {
    tag: String,
    dim: usize,
    basis_names: Vec<String>,
    /// `structure[(i * dim + j) * dim + k]` is the `e_k` coefficient of `e_i e_j`.
    structure: Vec<f64>,
    products: Vec<(usize, usize, usize, f64)>,
    conj_inverse: bool,
}

impl AlgebraDesc {
    /// Builds a description from a structure-constant table indexed `[i][j][k]`.
    ///
    /// Fails unless basis vector 0 is a two-sided unit and the product is
    /// associative on all basis triples.
    pub fn new(tag: &str, basis_names: &[&str], structure: Vec<Vec<Vec<f64>>>) -> Result<Self> {
        let dim = basis_names.len();
        if dim == 0 {
            return Err(Error::InvalidAlgebra("empty basis".into()));
        }
        if structure.len() != dim
            || structure
                .iter()
                .any(|row| row.len() != dim || row.iter().any(|c| c.len() != dim))
        {
            return Err(Error::InvalidAlgebra(format!(
                "structure table must be {dim}x{dim}x{dim}"
            )));
        }
        let flat: Vec<f64> = structure.into_iter().flatten().flatten().collect();
        let desc = Self::from_flat(tag, basis_names, flat, false);
        desc.validate()?;
        Ok(desc)
    }

    fn from_flat(tag: &str, basis_names: &[&str], structure: Vec<f64>, conj_inverse: bool) -> Self {
        let dim = basis_names.len();
        let mut products = Vec::new();
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    let c = structure[(i * dim + j) * dim + k];
                    if c != 0.0 {
                        products.push((i, j, k, c));
                    }
                }
            }
        }
        Self {
            tag: tag.to_string(),
            dim,
            basis_names: basis_names.iter().map(|s| s.to_string()).collect(),
            structure,
            products,
            conj_inverse,
        }
    }

    fn basis_product(&self, i: usize, j: usize) -> Vec<f64> {
        (0..self.dim)
            .map(|k| self.structure[(i * self.dim + j) * self.dim + k])
            .collect()
    }

    fn mul_coeffs(&self, a: &[f64], b: &[f64]) -> Coeffs {
        let mut out: Coeffs = SmallVec::from_elem(0.0, self.dim);
        for &(i, j, k, c) in &self.products {
            out[k] += c * a[i] * b[j];
        }
        out
    }

    fn validate(&self) -> Result<()> {
        let d = self.dim;
        for i in 0..d {
            let mut unit = vec![0.0; d];
            unit[i] = 1.0;
            if self.basis_product(0, i) != unit || self.basis_product(i, 0) != unit {
                return Err(Error::InvalidAlgebra(format!(
                    "e_0 is not a unit for e_{i}"
                )));
            }
        }
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let ij = self.basis_product(i, j);
                    let jk = self.basis_product(j, k);
                    let mut e_k = vec![0.0; d];
                    e_k[k] = 1.0;
                    let mut e_i = vec![0.0; d];
                    e_i[i] = 1.0;
                    let left = self.mul_coeffs(&ij, &e_k);
                    let right = self.mul_coeffs(&e_i, &jk);
                    if left.iter().zip(&right).any(|(l, r)| (l - r).abs() > 1e-12) {
                        return Err(Error::InvalidAlgebra(format!(
                            "product is not associative on (e_{i}, e_{j}, e_{k})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    /// Coefficients of `e_i e_j`.
    pub fn structure_constants(&self, i: usize, j: usize) -> Vec<f64> {
        self.basis_product(i, j)
    }
}

impl PartialEq for AlgebraDesc {
    fn eq(&self, other: &Self) -> bool {
        self.tag == other.tag && self.dim == other.dim && self.structure == other.structure
    }
}

/// Shared handle to an algebra description.
#[derive(Debug, Clone)]
pub struct Algebra(Arc<AlgebraDesc>);

static REAL: Lazy<Algebra> = Lazy::new(|| {
    Algebra(Arc::new(AlgebraDesc::from_flat(
        "real",
        &["1"],
        vec![1.0],
        true,
    )))
});

static COMPLEX: Lazy<Algebra> = Lazy::new(|| {
    #[rustfmt::skip]
    let table = vec![
        1.0, 0.0,   0.0, 1.0,
        0.0, 1.0,  -1.0, 0.0,
    ];
    Algebra(Arc::new(AlgebraDesc::from_flat(
        "complex",
        &["1", "i"],
        table,
        true,
    )))
});

static QUATERNION: Lazy<Algebra> = Lazy::new(|| {
    // (i, j) -> (sign, k) for the basis 1, i, j, k.
    let rule = |i: usize, j: usize| -> (f64, usize) {
        match (i, j) {
            (0, j) => (1.0, j),
            (i, 0) => (1.0, i),
            (i, j) if i == j => (-1.0, 0),
            (1, 2) => (1.0, 3),
            (2, 3) => (1.0, 1),
            (3, 1) => (1.0, 2),
            (2, 1) => (-1.0, 3),
            (3, 2) => (-1.0, 1),
            (1, 3) => (-1.0, 2),
            _ => unreachable!(),
        }
    };
    let mut table = vec![0.0; 64];
    for i in 0..4 {
        for j in 0..4 {
            let (s, k) = rule(i, j);
            table[(i * 4 + j) * 4 + k] = s;
        }
    }
    Algebra(Arc::new(AlgebraDesc::from_flat(
        "quaternion",
        &["1", "i", "j", "k"],
        table,
        true,
    )))
});

impl Algebra {
    pub fn real() -> Self {
        REAL.clone()
    }

    pub fn complex() -> Self {
        COMPLEX.clone()
    }

    pub fn quaternion() -> Self {
        QUATERNION.clone()
    }

    /// Looks up a built-in algebra by tag (`real`, `complex`, `quaternion`).
    pub fn from_tag(tag: &str) -> Result<Self> {
        match tag {
            "real" | "R" => Ok(Self::real()),
            "complex" | "C" => Ok(Self::complex()),
            "quaternion" | "H" => Ok(Self::quaternion()),
            other => Err(Error::UnknownAlgebra(other.to_string())),
        }
    }

    pub fn from_desc(desc: AlgebraDesc) -> Self {
        Self(Arc::new(desc))
    }

    pub fn desc(&self) -> &AlgebraDesc {
        &self.0
    }

    pub fn tag(&self) -> &str {
        &self.0.tag
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    pub fn same_as(&self, other: &Algebra) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }

    pub fn element(&self, coeffs: &[f64]) -> Result<Element> {
        if coeffs.len() != self.dim() {
            return Err(Error::CoefficientCount {
                expected: self.dim(),
                got: coeffs.len(),
            });
        }
        Ok(Element {
            alg: self.clone(),
            coeffs: SmallVec::from_slice(coeffs),
        })
    }

    pub fn zero(&self) -> Element {
        Element {
            alg: self.clone(),
            coeffs: SmallVec::from_elem(0.0, self.dim()),
        }
    }

    pub fn one(&self) -> Element {
        self.basis(0)
    }

    /// Real multiple of the unit.
    pub fn scalar(&self, value: f64) -> Element {
        let mut e = self.zero();
        e.coeffs[0] = value;
        e
    }

    /// Basis vector `e_i`.
    ///
    /// Panics if `i >= dim`.
    pub fn basis(&self, i: usize) -> Element {
        let mut e = self.zero();
        e.coeffs[i] = 1.0;
        e
    }

    /// Basis vector looked up by its name (`"i"`, `"k"`, ...).
    pub fn basis_named(&self, name: &str) -> Option<Element> {
        self.0
            .basis_names
            .iter()
            .position(|n| n == name)
            .map(|i| self.basis(i))
    }

    /// Element with every coefficient drawn uniformly from `[-scale, scale]`.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R, scale: f64) -> Element {
        let coeffs = (0..self.dim())
            .map(|_| rng.gen_range(-scale..=scale))
            .collect();
        Element {
            alg: self.clone(),
            coeffs,
        }
    }

    /// Deterministic random element for a seed.
    pub fn random_element_seeded(&self, seed: u64, scale: f64) -> Element {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.random_element(&mut rng, scale)
    }

    /// Parses the text form, e.g. `"1 - 2i + 0.5k"`, `"i"`, `"-3"`.
    pub fn parse(&self, text: &str) -> Result<Element> {
        parse_element(self, text)
    }
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

/// A value `x = x^i e_i` of an algebra.
#[derive(Clone)]
pub struct Element {
    alg: Algebra,
    coeffs: Coeffs,
}

impl Element {
    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    fn check_same(&self, other: &Element) -> Result<()> {
        if self.alg.same_as(&other.alg) {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch {
                left: self.alg.tag().to_string(),
                right: other.alg.tag().to_string(),
            })
        }
    }

    fn expect_same(&self, other: &Element) {
        if let Err(e) = self.check_same(other) {
            panic!("{e}");
        }
    }

    pub fn checked_mul(&self, other: &Element) -> Result<Element> {
        self.check_same(other)?;
        Ok(Element {
            alg: self.alg.clone(),
            coeffs: self.alg.0.mul_coeffs(&self.coeffs, &other.coeffs),
        })
    }

    pub fn checked_add(&self, other: &Element) -> Result<Element> {
        self.check_same(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn checked_sub(&self, other: &Element) -> Result<Element> {
        self.check_same(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    fn zip_with(&self, other: &Element, f: impl Fn(f64, f64) -> f64) -> Element {
        Element {
            alg: self.alg.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Element {
        Element {
            alg: self.alg.clone(),
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// Keeps the real part and negates every other coordinate.
    pub fn conj(&self) -> Element {
        let mut coeffs = self.coeffs.clone();
        for c in coeffs.iter_mut().skip(1) {
            *c = -*c;
        }
        Element {
            alg: self.alg.clone(),
            coeffs,
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.norm() <= tol
    }

    /// Real part, the coefficient of the unit.
    pub fn re(&self) -> f64 {
        self.coeffs[0]
    }

    /// Multiplicative inverse.
    ///
    /// Uses `conj(a) / |a|^2` for the built-in composition algebras and a
    /// linear solve of `L(a) y = 1` otherwise.
    pub fn inv(&self) -> Result<Element> {
        let n2 = self.norm_sqr();
        if n2 == 0.0 || !n2.is_finite() {
            return Err(Error::NotInvertible);
        }
        if self.alg.0.conj_inverse {
            return Ok(self.conj().scale(1.0 / n2));
        }
        let lm = self.left_matrix();
        let mut rhs = DVector::zeros(self.dim());
        rhs[0] = 1.0;
        let sol = lm.lu().solve(&rhs).ok_or(Error::NotInvertible)?;
        let candidate = Element {
            alg: self.alg.clone(),
            coeffs: sol.iter().copied().collect(),
        };
        let check = &candidate * self;
        if (&check - &self.alg.one()).norm() > 1e-9 {
            return Err(Error::NotInvertible);
        }
        Ok(candidate)
    }

    /// `ab - ba`.
    pub fn commutator(&self, other: &Element) -> Element {
        &(self * other) - &(other * self)
    }

    /// Whether `self` commutes with `b` up to `tol`.
    pub fn in_centralizer(&self, b: &Element, tol: f64) -> bool {
        self.commutator(b).norm() <= tol
    }

    /// Matrix of `x -> self * x` on coefficient vectors.
    pub fn left_matrix(&self) -> DMatrix<f64> {
        let d = self.dim();
        DMatrix::from_fn(d, d, |row, col| {
            let prod = self * &self.alg.basis(col);
            prod.coeffs[row]
        })
    }

    /// Matrix of `x -> x * self` on coefficient vectors.
    pub fn right_matrix(&self) -> DMatrix<f64> {
        let d = self.dim();
        DMatrix::from_fn(d, d, |row, col| {
            let prod = &self.alg.basis(col) * self;
            prod.coeffs[row]
        })
    }

    pub fn approx_eq(&self, other: &Element, tol: f64) -> bool {
        self.alg.same_as(&other.alg) && (self - other).norm() <= tol
    }

    /// Integer power by repeated multiplication; `x^0 = 1`.
    pub fn powi(&self, n: u32) -> Element {
        let mut acc = self.alg.one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn to_data(&self) -> ElementData {
        ElementData {
            algebra: self.alg.tag().to_string(),
            coeffs: self.coeffs.to_vec(),
        }
    }
}

impl PartialEq for Element {
    /// Exact coefficient equality; use [`Element::approx_eq`] for tolerant checks.
    fn eq(&self, other: &Self) -> bool {
        self.alg.same_as(&other.alg) && self.coeffs == other.coeffs
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Element> for &Element {
            type Output = Element;
            fn $method(self, rhs: &Element) -> Element {
                self.expect_same(rhs);
                self.$checked(rhs).expect("same algebra")
            }
        }
        impl $trait<Element> for Element {
            type Output = Element;
            fn $method(self, rhs: Element) -> Element {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Element> for Element {
            type Output = Element;
            fn $method(self, rhs: &Element) -> Element {
                (&self).$method(rhs)
            }
        }
        impl $trait<Element> for &Element {
            type Output = Element;
            fn $method(self, rhs: Element) -> Element {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Mul<f64> for &Element {
    type Output = Element;
    fn mul(self, rhs: f64) -> Element {
        self.scale(rhs)
    }
}

impl Mul<f64> for Element {
    type Output = Element;
    fn mul(self, rhs: f64) -> Element {
        self.scale(rhs)
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.scale(-1.0)
    }
}

impl Neg for Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.scale(-1.0)
    }
}

impl AddAssign<&Element> for Element {
    fn add_assign(&mut self, rhs: &Element) {
        self.expect_same(rhs);
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl SubAssign<&Element> for Element {
    fn sub_assign(&mut self, rhs: &Element) {
        self.expect_same(rhs);
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
    }
}

/// Rounds to 12 significant digits and prints the shortest decimal form.
pub fn fmt_sig12(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let rounded: f64 = format!("{v:.11e}").parse().unwrap_or(v);
    format!("{rounded}")
}

impl fmt::Display for Element {
    /// Text form `w + xi + yj + zk`, 12 significant digits.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = &self.alg.0.basis_names;
        if self.coeffs.iter().all(|&c| c == 0.0) {
            return write!(f, "0");
        }
        let mut first = true;
        for (idx, &c) in self.coeffs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let suffix = if idx == 0 { "" } else { names[idx].as_str() };
            let mag = fmt_sig12(c.abs());
            if first {
                if c < 0.0 {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {} ", if c < 0.0 { '-' } else { '+' })?;
            }
            write!(f, "{mag}{suffix}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.alg.tag(), self)
    }
}

/// Data form `{"algebra": "<tag>", "coeffs": [..]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElementData {
    pub algebra: String,
    pub coeffs: Vec<f64>,
}

impl TryFrom<ElementData> for Element {
    type Error = Error;
    fn try_from(data: ElementData) -> Result<Self> {
        Algebra::from_tag(&data.algebra)?.element(&data.coeffs)
    }
}

impl From<Element> for ElementData {
    fn from(e: Element) -> Self {
        e.to_data()
    }
}

impl Serialize for Element {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_data().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Element {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let data = ElementData::deserialize(d)?;
        Element::try_from(data).map_err(serde::de::Error::custom)
    }
}

fn parse_element(alg: &Algebra, text: &str) -> Result<Element> {
    let names = &alg.0.basis_names;
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::Parse("empty element".into()));
    }
    let mut out = alg.zero();
    // Split into signed terms at '+'/'-' that are not part of an exponent.
    let bytes: Vec<char> = compact.chars().collect();
    let mut terms = Vec::new();
    let mut start = 0;
    for idx in 1..bytes.len() {
        let c = bytes[idx];
        if (c == '+' || c == '-') && !matches!(bytes[idx - 1], 'e' | 'E') {
            terms.push(bytes[start..idx].iter().collect::<String>());
            start = idx;
        }
    }
    terms.push(bytes[start..].iter().collect::<String>());
    for term in terms {
        let (sign, body) = match term.strip_prefix('-') {
            Some(rest) => (-1.0, rest),
            None => (1.0, term.strip_prefix('+').unwrap_or(&term)),
        };
        let (idx, number) = names
            .iter()
            .enumerate()
            .skip(1)
            .find(|(_, n)| body.ends_with(n.as_str()))
            .map(|(i, n)| (i, &body[..body.len() - n.len()]))
            .unwrap_or((0, body));
        let number = number.strip_suffix('*').unwrap_or(number);
        let value = if number.is_empty() {
            1.0
        } else {
            number
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad coefficient in `{term}`")))?
        };
        out.coeffs[idx] += sign * value;
    }
    Ok(out)
}
