//! Noncommutative polynomials as sums of tensor monomials.
//!
//! A pure term `a_0 ⊗ a_1 ⊗ … ⊗ a_n` acts on `x` as `a_0 x a_1 x … x a_n`.
//! Derivatives keep the same coefficient words and relabel gaps: a gap is
//! either filled with `x` or with one of the derivative's arguments.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, Element, ElementData};
use crate::biring::BiMatrix;
use crate::error::{Error, Result};

/// Content of one gap between coefficients.
///
/// `Arg(j)` is zero-based: `Arg(0)` is the first argument of the multilinear map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gap {
    X,
    Arg(usize),
}

impl fmt::Display for Gap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gap::X => write!(f, "x"),
            Gap::Arg(j) => write!(f, "h{}", j + 1),
        }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - k + i {
            c[i] += 1;
            for m in i + 1..k {
                c[m] = c[m - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Gap labelings indexing the terms of an order-`k` derivative of `x^n`.
///
/// Each labeling places `Arg(0..k)` into `k` distinct gaps in any order and
/// `X` elsewhere. Labelings are ordered lexicographically by the chosen
/// positions, then by the argument permutation. There are `n!/(n-k)!` of them.
pub fn so_set(k: usize, n: usize) -> Result<Vec<Vec<Gap>>> {
    if k > n {
        return Err(Error::InvalidArgument(format!(
            "derivative order {k} exceeds {n} gaps"
        )));
    }
    let mut out = Vec::new();
    let mut positions: Vec<usize> = (0..k).collect();
    loop {
        let mut perm: Vec<usize> = (0..k).collect();
        loop {
            let mut labels = vec![Gap::X; n];
            for (slot, &pos) in positions.iter().enumerate() {
                labels[pos] = Gap::Arg(perm[slot]);
            }
            out.push(labels);
            if !next_permutation(&mut perm) {
                break;
            }
        }
        if k == 0 || !next_combination(&mut positions, n) {
            break;
        }
    }
    Ok(out)
}

fn eval_word(coeffs: &[Element], gaps: &[Gap], args: &[Element], x: &Element) -> Element {
    let mut acc = coeffs[0].clone();
    for (gap, c) in gaps.iter().zip(&coeffs[1..]) {
        let filler = match gap {
            Gap::X => x,
            Gap::Arg(j) => &args[*j],
        };
        acc = &(&acc * filler) * c;
    }
    acc
}

fn check_algebra(alg: &Algebra, e: &Element) -> Result<()> {
    if alg.same_as(e.algebra()) {
        Ok(())
    } else {
        Err(Error::AlgebraMismatch {
            left: alg.tag().to_string(),
            right: e.algebra().tag().to_string(),
        })
    }
}

/// Homogeneous tensor of a fixed order: a sum of pure terms with `order + 1` coefficients.
#[derive(Debug, Clone)]
pub struct Tensor {
    alg: Algebra,
    order: usize,
    terms: Vec<Vec<Element>>,
}

impl Tensor {
    pub fn new(alg: &Algebra, order: usize, terms: Vec<Vec<Element>>) -> Result<Self> {
        for term in &terms {
            if term.len() != order + 1 {
                return Err(Error::InvalidArgument(format!(
                    "order-{order} term needs {} coefficients, got {}",
                    order + 1,
                    term.len()
                )));
            }
            for e in term {
                check_algebra(alg, e)?;
            }
        }
        Ok(Self {
            alg: alg.clone(),
            order,
            terms,
        })
    }

    /// A single pure term `c_0 ⊗ … ⊗ c_n`.
    pub fn pure(coeffs: Vec<Element>) -> Result<Self> {
        let first = coeffs
            .first()
            .ok_or_else(|| Error::InvalidArgument("pure term needs a coefficient".into()))?;
        let alg = first.algebra().clone();
        let order = coeffs.len() - 1;
        Self::new(&alg, order, vec![coeffs])
    }

    pub fn zero(alg: &Algebra, order: usize) -> Self {
        Self {
            alg: alg.clone(),
            order,
            terms: Vec::new(),
        }
    }

    /// `x^n`, i.e. `1 ⊗ 1 ⊗ … ⊗ 1` with `n + 1` units.
    pub fn power(alg: &Algebra, n: usize) -> Self {
        Self {
            alg: alg.clone(),
            order: n,
            terms: vec![vec![alg.one(); n + 1]],
        }
    }

    pub fn constant(a: Element) -> Self {
        Self {
            alg: a.algebra().clone(),
            order: 0,
            terms: vec![vec![a]],
        }
    }

    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn terms(&self) -> &[Vec<Element>] {
        &self.terms
    }

    pub fn add(&self, other: &Tensor) -> Result<Tensor> {
        if !self.alg.same_as(&other.alg) {
            return Err(Error::AlgebraMismatch {
                left: self.alg.tag().into(),
                right: other.alg.tag().into(),
            });
        }
        if self.order != other.order {
            return Err(Error::InvalidArgument(format!(
                "cannot add tensors of orders {} and {}",
                self.order, other.order
            )));
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(Tensor {
            alg: self.alg.clone(),
            order: self.order,
            terms,
        })
    }

    /// Multiplies every term by a real scalar (applied to the leading coefficient).
    pub fn scale(&self, s: f64) -> Tensor {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut t = t.clone();
                t[0] = t[0].scale(s);
                t
            })
            .collect();
        Tensor {
            alg: self.alg.clone(),
            order: self.order,
            terms,
        }
    }

    /// Star product: fuses the last coefficient of each left term with the
    /// first coefficient of each right term.
    pub fn star(&self, other: &Tensor) -> Result<Tensor> {
        if !self.alg.same_as(&other.alg) {
            return Err(Error::AlgebraMismatch {
                left: self.alg.tag().into(),
                right: other.alg.tag().into(),
            });
        }
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let mut t = Vec::with_capacity(a.len() + b.len() - 1);
                t.extend_from_slice(&a[..a.len() - 1]);
                t.push(&a[a.len() - 1] * &b[0]);
                t.extend_from_slice(&b[1..]);
                terms.push(t);
            }
        }
        Ok(Tensor {
            alg: self.alg.clone(),
            order: self.order + other.order,
            terms,
        })
    }

    /// `Σ a_0 x a_1 x … x a_n` over all terms.
    pub fn eval(&self, x: &Element) -> Element {
        let gaps = vec![Gap::X; self.order];
        let mut acc = self.alg.zero();
        for t in &self.terms {
            acc += &eval_word(t, &gaps, &[], x);
        }
        acc
    }

    /// Order-`k` derivative: one slot term per term and per labeling in `so_set(k, n)`.
    ///
    /// For `k` above the order the derivative is the zero map.
    pub fn derivative(&self, k: usize) -> SlotTensor {
        if k > self.order {
            return SlotTensor::zero(&self.alg, k);
        }
        let labelings = so_set(k, self.order).expect("k <= order");
        let mut terms = Vec::with_capacity(self.terms.len() * labelings.len());
        for t in &self.terms {
            for gaps in &labelings {
                terms.push(SlotTerm {
                    coeffs: t.clone(),
                    gaps: gaps.clone(),
                });
            }
        }
        SlotTensor {
            alg: self.alg.clone(),
            order: self.order,
            arg_slots: k,
            terms,
        }
    }

    pub fn to_data(&self) -> TensorData {
        TensorData {
            order: self.order,
            terms: self
                .terms
                .iter()
                .map(|t| t.iter().map(Element::to_data).collect())
                .collect(),
        }
    }

    pub fn from_data(alg: &Algebra, data: &TensorData) -> Result<Self> {
        let terms = data
            .terms
            .iter()
            .map(|t| {
                t.iter()
                    .map(|e| Element::try_from(e.clone()))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(alg, data.order, terms)
    }
}

/// Fixture form `{"order": n, "terms": [[elem, …], …]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TensorData {
    pub order: usize,
    pub terms: Vec<Vec<ElementData>>,
}

/// One word of a [`SlotTensor`]: coefficients interleaved with labeled gaps.
#[derive(Debug, Clone)]
pub struct SlotTerm {
    pub coeffs: Vec<Element>,
    pub gaps: Vec<Gap>,
}

/// Multilinear-map-valued polynomial: every term has the same number of gaps,
/// of which exactly `arg_slots` carry distinct argument labels.
#[derive(Debug, Clone)]
pub struct SlotTensor {
    alg: Algebra,
    order: usize,
    arg_slots: usize,
    terms: Vec<SlotTerm>,
}

impl SlotTensor {
    pub fn new(alg: &Algebra, arg_slots: usize, terms: Vec<SlotTerm>) -> Result<Self> {
        let order = terms.first().map_or(arg_slots, |t| t.gaps.len());
        for t in &terms {
            if t.gaps.len() != order || t.coeffs.len() != order + 1 {
                return Err(Error::InvalidArgument(
                    "slot terms must share the number of gaps".into(),
                ));
            }
            let mut seen = vec![false; arg_slots];
            for g in &t.gaps {
                if let Gap::Arg(j) = *g {
                    if j >= arg_slots || seen[j] {
                        return Err(Error::InvalidArgument(format!(
                            "argument label {} is out of range or repeated",
                            j + 1
                        )));
                    }
                    seen[j] = true;
                }
            }
            if seen.iter().any(|s| !s) {
                return Err(Error::InvalidArgument(
                    "every argument must appear exactly once per term".into(),
                ));
            }
            for e in &t.coeffs {
                check_algebra(alg, e)?;
            }
        }
        Ok(Self {
            alg: alg.clone(),
            order,
            arg_slots,
            terms,
        })
    }

    /// Single-term helper, e.g. `x ⊗ 1` acting on `h` is `word(&[1, 1, 1], &[X, Arg(0)])`.
    pub fn word(coeffs: Vec<Element>, gaps: Vec<Gap>) -> Result<Self> {
        let alg = coeffs
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty word".into()))?
            .algebra()
            .clone();
        let arg_slots = gaps.iter().filter(|g| matches!(g, Gap::Arg(_))).count();
        Self::new(&alg, arg_slots, vec![SlotTerm { coeffs, gaps }])
    }

    pub fn zero(alg: &Algebra, arg_slots: usize) -> Self {
        Self {
            alg: alg.clone(),
            order: arg_slots,
            arg_slots,
            terms: Vec::new(),
        }
    }

    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn arg_slots(&self) -> usize {
        self.arg_slots
    }

    pub fn x_gaps(&self) -> usize {
        self.order - self.arg_slots
    }

    pub fn terms(&self) -> &[SlotTerm] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sum of two slot tensors with the same number of arguments.
    ///
    /// The number of `x` gaps may differ between the summands; the result then
    /// no longer has a single order, which [`SlotTensor::order`] reports as the
    /// maximum.
    pub fn add(&self, other: &SlotTensor) -> Result<SlotTensor> {
        if !self.alg.same_as(&other.alg) {
            return Err(Error::AlgebraMismatch {
                left: self.alg.tag().into(),
                right: other.alg.tag().into(),
            });
        }
        if self.arg_slots != other.arg_slots {
            return Err(Error::ArityMismatch {
                expected: self.arg_slots,
                got: other.arg_slots,
            });
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(SlotTensor {
            alg: self.alg.clone(),
            order: self.order.max(other.order),
            arg_slots: self.arg_slots,
            terms,
        })
    }

    pub fn scale(&self, s: f64) -> SlotTensor {
        let mut out = self.clone();
        for t in &mut out.terms {
            t.coeffs[0] = t.coeffs[0].scale(s);
        }
        out
    }

    /// Substitutes `args[j]` into `Arg(j)` gaps and `x` into `X` gaps.
    pub fn eval(&self, args: &[Element], x: &Element) -> Result<Element> {
        if args.len() != self.arg_slots {
            return Err(Error::ArityMismatch {
                expected: self.arg_slots,
                got: args.len(),
            });
        }
        check_algebra(&self.alg, x)?;
        for a in args {
            check_algebra(&self.alg, a)?;
        }
        let mut acc = self.alg.zero();
        for t in &self.terms {
            acc += &eval_word(&t.coeffs, &t.gaps, args, x);
        }
        Ok(acc)
    }

    /// Differentiates once more in `x`: each `X` gap in turn becomes the new
    /// argument `Arg(arg_slots)`.
    pub fn derivative(&self) -> SlotTensor {
        let new_arg = Gap::Arg(self.arg_slots);
        let mut terms = Vec::new();
        for t in &self.terms {
            for (pos, g) in t.gaps.iter().enumerate() {
                if *g == Gap::X {
                    let mut gaps = t.gaps.clone();
                    gaps[pos] = new_arg;
                    terms.push(SlotTerm {
                        coeffs: t.coeffs.clone(),
                        gaps,
                    });
                }
            }
        }
        SlotTensor {
            alg: self.alg.clone(),
            order: self.order.max(self.arg_slots + 1),
            arg_slots: self.arg_slots + 1,
            terms,
        }
    }
}

impl fmt::Display for SlotTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, t) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({})", t.coeffs[0])?;
            for (g, c) in t.gaps.iter().zip(&t.coeffs[1..]) {
                write!(f, " {g} ({c})")?;
            }
        }
        Ok(())
    }
}

/// `a_0 + a_1∘x + … + a_n∘x^n` stored as homogeneous components of ascending order.
#[derive(Debug, Clone)]
pub struct TensorPolynomial {
    alg: Algebra,
    components: Vec<Tensor>,
}

impl TensorPolynomial {
    /// Merges components of equal order; the result is sorted by order.
    pub fn new(alg: &Algebra, components: Vec<Tensor>) -> Result<Self> {
        let mut merged: Vec<Tensor> = Vec::new();
        for c in components {
            if !alg.same_as(c.algebra()) {
                return Err(Error::AlgebraMismatch {
                    left: alg.tag().into(),
                    right: c.algebra().tag().into(),
                });
            }
            match merged.iter_mut().find(|m| m.order == c.order) {
                Some(m) => *m = m.add(&c)?,
                None => merged.push(c),
            }
        }
        merged.sort_by_key(|t| t.order);
        Ok(Self {
            alg: alg.clone(),
            components: merged,
        })
    }

    pub fn components(&self) -> &[Tensor] {
        &self.components
    }

    pub fn degree(&self) -> Option<usize> {
        self.components.last().map(|t| t.order)
    }

    pub fn eval(&self, x: &Element) -> Element {
        let mut acc = self.alg.zero();
        for c in &self.components {
            acc += &c.eval(x);
        }
        acc
    }

    /// Order-`k` derivative as a single slot tensor (components of degree below `k` vanish).
    pub fn derivative(&self, k: usize) -> SlotTensor {
        let mut out = SlotTensor::zero(&self.alg, k);
        for c in &self.components {
            if c.order >= k {
                out = out.add(&c.derivative(k)).expect("same arity");
            }
        }
        out
    }

    /// Product via pairwise star products of the components.
    pub fn product(&self, other: &TensorPolynomial) -> Result<TensorPolynomial> {
        let mut parts = Vec::new();
        for a in &self.components {
            for b in &other.components {
                parts.push(a.star(b)?);
            }
        }
        TensorPolynomial::new(&self.alg, parts)
    }
}

const PROBE_RANDOM: usize = 20;
const PROBE_SEED: u64 = 0x5eed_7e45;

/// Deterministic probe tuples of `inputs` elements: every basis tuple when
/// `inputs <= 3` and `dim <= 4`, then seeded random tuples.
pub fn probe_tuples(alg: &Algebra, inputs: usize) -> Vec<Vec<Element>> {
    let dim = alg.dim();
    let mut out = Vec::new();
    if inputs <= 3 && dim <= 4 {
        let total = dim.pow(inputs as u32);
        for mut code in 0..total {
            let mut tuple = Vec::with_capacity(inputs);
            for _ in 0..inputs {
                tuple.push(alg.basis(code % dim));
                code /= dim;
            }
            out.push(tuple);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(PROBE_SEED);
    for _ in 0..PROBE_RANDOM {
        out.push(
            (0..inputs)
                .map(|_| alg.random_element(&mut rng, 1.0))
                .collect(),
        );
    }
    out
}

/// Extensional equality of tensors over the probe set.
pub fn tensors_agree(a: &Tensor, b: &Tensor, tol: f64) -> bool {
    a.algebra().same_as(b.algebra())
        && probe_tuples(a.algebra(), 1)
            .iter()
            .all(|p| a.eval(&p[0]).approx_eq(&b.eval(&p[0]), tol))
}

/// Extensional equality of slot tensors over the probe set (arguments, then `x`).
pub fn slot_tensors_agree(a: &SlotTensor, b: &SlotTensor, tol: f64) -> bool {
    if !a.algebra().same_as(b.algebra()) || a.arg_slots() != b.arg_slots() {
        return false;
    }
    let k = a.arg_slots();
    probe_tuples(a.algebra(), k + 1).iter().all(|p| {
        let (args, x) = p.split_at(k);
        match (a.eval(args, &x[0]), b.eval(args, &x[0])) {
            (Ok(u), Ok(v)) => u.approx_eq(&v, tol),
            _ => false,
        }
    })
}

/// Matrix whose entries are tensors of one common order.
#[derive(Debug, Clone)]
pub struct TensorMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Tensor>,
}

impl TensorMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Tensor>) -> Result<Self> {
        if entries.len() != rows * cols || rows == 0 || cols == 0 {
            return Err(Error::ShapeMismatch(format!(
                "{rows}x{cols} tensor matrix needs {} entries",
                rows * cols
            )));
        }
        let order = entries[0].order();
        if entries.iter().any(|t| t.order() != order) {
            return Err(Error::InvalidArgument(
                "entries must share one order".into(),
            ));
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    /// Entry `(i, j)` is `a_ij ⊗ b_ij`.
    pub fn linear_from(a: &BiMatrix, b: &BiMatrix) -> Result<Self> {
        if a.shape() != b.shape() {
            return Err(Error::ShapeMismatch(
                "coefficient matrices differ in shape".into(),
            ));
        }
        let (rows, cols) = a.shape();
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(Tensor::pure(vec![
                    a.get(i, j).clone(),
                    b.get(i, j).clone(),
                ])?);
            }
        }
        Self::new(rows, cols, entries)
    }

    pub fn order(&self) -> usize {
        self.entries[0].order()
    }

    pub fn get(&self, i: usize, j: usize) -> &Tensor {
        &self.entries[i * self.cols + j]
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    /// Row-column product with entry products given by the star product.
    pub fn rc_star(&self, other: &TensorMatrix) -> Result<TensorMatrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} rc {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let alg = self.entries[0].algebra().clone();
        let order = self.order() + other.order();
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Tensor::zero(&alg, order);
                for k in 0..self.cols {
                    acc = acc.add(&self.get(i, k).star(other.get(k, j))?)?;
                }
                entries.push(acc);
            }
        }
        Self::new(self.rows, other.cols, entries)
    }

    /// `n`-th rc-power; requires a square matrix and `n >= 1`.
    pub fn rc_star_pow(&self, n: usize) -> Result<TensorMatrix> {
        if self.rows != self.cols || n == 0 {
            return Err(Error::InvalidArgument(
                "rc_star_pow needs a square matrix and n >= 1".into(),
            ));
        }
        let mut acc = self.clone();
        for _ in 1..n {
            acc = acc.rc_star(self)?;
        }
        Ok(acc)
    }

    /// Entrywise evaluation at `x`.
    pub fn eval(&self, x: &Element) -> BiMatrix {
        let vals = self.entries.iter().map(|t| t.eval(x)).collect();
        BiMatrix::from_vec(self.rows, self.cols, vals).expect("shape checked at construction")
    }
}
