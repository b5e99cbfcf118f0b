//! Power-series maps on elements and matrices: exponent, quasiexponent,
//! hyperbolic and circular functions, and the two matrix exponentials.

use serde::{Deserialize, Serialize};

use crate::algebra::Element;
use crate::biring::{BiMatrix, Product};
use crate::error::{Error, Result};

/// Truncation control shared by every series in this module.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesParams {
    pub rel_tol: f64,
    pub max_terms: usize,
}

impl Default for SeriesParams {
    fn default() -> Self {
        Self {
            rel_tol: 1e-14,
            max_terms: 64,
        }
    }
}

impl SeriesParams {
    pub fn new(rel_tol: f64, max_terms: usize) -> Result<Self> {
        if rel_tol.is_nan() || rel_tol <= 0.0 || max_terms == 0 {
            return Err(Error::InvalidArgument(format!(
                "series parameters need rel_tol > 0 and max_terms >= 1, got {rel_tol} and {max_terms}"
            )));
        }
        Ok(Self { rel_tol, max_terms })
    }
}

/// Stops once `need` consecutive terms are negligible against the partial sum.
struct Stopper {
    rel_tol: f64,
    need: usize,
    hits: usize,
}

impl Stopper {
    fn new(p: &SeriesParams, need: usize) -> Self {
        Self {
            rel_tol: p.rel_tol,
            need,
            hits: 0,
        }
    }

    fn settled(&mut self, term: f64, partial: f64) -> bool {
        if term <= self.rel_tol * (1.0 + partial) {
            self.hits += 1;
        } else {
            self.hits = 0;
        }
        self.hits >= self.need
    }
}

/// Sums `Σ term(n)` where each term is produced from the previous one.
fn sum_elements(
    first: Element,
    p: &SeriesParams,
    need: usize,
    mut step: impl FnMut(usize, &Element) -> Element,
) -> Result<Element> {
    let mut stop = Stopper::new(p, need);
    let mut term = first;
    let mut sum = term.clone();
    for n in 1..p.max_terms {
        term = step(n, &term);
        sum += &term;
        if stop.settled(term.norm(), sum.norm()) {
            return Ok(sum);
        }
    }
    Err(Error::SeriesBudgetExceeded(p.max_terms))
}

/// `e^x = Σ xⁿ/n!`.
pub fn exp_el(x: &Element, p: &SeriesParams) -> Result<Element> {
    sum_elements(x.algebra().one(), p, 1, |n, t| {
        (t * x).scale(1.0 / n as f64)
    })
}

/// `e^{at} = Σ aⁿtⁿ/n!`, summed in `t` directly.
pub fn exp_at(a: &Element, t: f64, p: &SeriesParams) -> Result<Element> {
    sum_elements(a.algebra().one(), p, 1, |n, term| {
        (term * a).scale(t / n as f64)
    })
}

/// Odd part of the exponent: `Σ x^{2n+1}/(2n+1)!`.
pub fn sinh_el(x: &Element, p: &SeriesParams) -> Result<Element> {
    let x2 = x * x;
    sum_elements(x.clone(), p, 2, |n, t| {
        (t * &x2).scale(1.0 / ((2 * n) * (2 * n + 1)) as f64)
    })
}

/// Even part of the exponent: `Σ x^{2n}/(2n)!`.
pub fn cosh_el(x: &Element, p: &SeriesParams) -> Result<Element> {
    let x2 = x * x;
    sum_elements(x.algebra().one(), p, 2, |n, t| {
        (t * &x2).scale(1.0 / ((2 * n - 1) * (2 * n)) as f64)
    })
}

/// `Σ (-1)ⁿ x^{2n+1}/(2n+1)!`.
pub fn sin_el(x: &Element, p: &SeriesParams) -> Result<Element> {
    let x2 = x * x;
    sum_elements(x.clone(), p, 2, |n, t| {
        (t * &x2).scale(-1.0 / ((2 * n) * (2 * n + 1)) as f64)
    })
}

/// `Σ (-1)ⁿ x^{2n}/(2n)!`.
pub fn cos_el(x: &Element, p: &SeriesParams) -> Result<Element> {
    let x2 = x * x;
    sum_elements(x.algebra().one(), p, 2, |n, t| {
        (t * &x2).scale(-1.0 / ((2 * n - 1) * (2 * n)) as f64)
    })
}

/// Degree-`N` part of the quasiexponent before division by `N!`: the sum over
/// all words of length `N` holding each `c_j` exactly once and `x` elsewhere.
///
/// `table[S]` holds the sum over words of the current length that use exactly
/// the arguments in bit set `S`.
struct WordTable {
    cs: Vec<Element>,
    x: Element,
    table: Vec<Element>,
    len: usize,
}

impl WordTable {
    fn new(cs: &[Element], x: &Element) -> Self {
        let alg = x.algebra();
        let mut table = vec![alg.zero(); 1 << cs.len()];
        table[0] = alg.one();
        Self {
            cs: cs.to_vec(),
            x: x.clone(),
            table,
            len: 0,
        }
    }

    fn grow(&mut self) {
        let alg = self.x.algebra().clone();
        let mut next = vec![alg.zero(); self.table.len()];
        for (s, slot) in next.iter_mut().enumerate() {
            let mut acc = &self.table[s] * &self.x;
            for (j, c) in self.cs.iter().enumerate() {
                if s & (1 << j) != 0 {
                    acc += &(&self.table[s & !(1 << j)] * c);
                }
            }
            *slot = acc;
        }
        self.table = next;
        self.len += 1;
    }

    fn full(&self) -> &Element {
        self.table.last().expect("nonempty table")
    }
}

/// Degree-`degree` term `(1/N!) Σ_{σ ∈ SO(n,N)} word` of the quasiexponent.
pub fn quasiexp_degree(cs: &[Element], x: &Element, degree: usize) -> Result<Element> {
    check_args(cs, x)?;
    let mut words = WordTable::new(cs, x);
    let mut fact = 1.0;
    while words.len < degree {
        words.grow();
        fact *= words.len as f64;
    }
    Ok(words.full().scale(1.0 / fact))
}

fn check_args(cs: &[Element], x: &Element) -> Result<()> {
    if cs.is_empty() {
        return Err(Error::InvalidArgument(
            "quasiexponent needs at least one argument".into(),
        ));
    }
    if cs.len() > 16 {
        return Err(Error::InvalidArgument(
            "too many quasiexponent arguments".into(),
        ));
    }
    if let Some(c) = cs.iter().find(|c| !c.algebra().same_as(x.algebra())) {
        return Err(Error::AlgebraMismatch {
            left: x.algebra().tag().into(),
            right: c.algebra().tag().into(),
        });
    }
    Ok(())
}

/// `e[c₁..cₙ]^x`: the `n`-th derivative of the exponent at `x` applied to the
/// directions `c₁..cₙ`.
pub fn quasiexp(cs: &[Element], x: &Element, p: &SeriesParams) -> Result<Element> {
    check_args(cs, x)?;
    let n = cs.len();
    let mut words = WordTable::new(cs, x);
    let mut fact = 1.0;
    while words.len < n {
        words.grow();
        fact *= words.len as f64;
    }
    let mut sum = words.full().scale(1.0 / fact);
    let mut stop = Stopper::new(p, 2);
    for _ in 1..p.max_terms {
        words.grow();
        fact *= words.len as f64;
        let term = words.full().scale(1.0 / fact);
        sum += &term;
        if stop.settled(term.norm(), sum.norm()) {
            return Ok(sum);
        }
    }
    Err(Error::SeriesBudgetExceeded(p.max_terms))
}

/// Partial sums `S_n = Σ_{m=0}^{n} a^m c a^{n-m}`, built as `S_n = a S_{n-1} + c aⁿ`.
struct SandwichSums {
    a: Element,
    c: Element,
    power: Element,
    sum: Element,
    n: usize,
}

impl SandwichSums {
    fn new(c: &Element, a: &Element) -> Self {
        Self {
            a: a.clone(),
            c: c.clone(),
            power: a.algebra().one(),
            sum: c.clone(),
            n: 0,
        }
    }

    fn advance(&mut self) {
        self.power = &self.power * &self.a;
        self.sum = &(&self.a * &self.sum) + &(&self.c * &self.power);
        self.n += 1;
    }
}

/// `e[c]^{at} = Σ tⁿ/(n+1)! Σ_{m=0}^{n} a^m c a^{n-m}`.
pub fn quasiexp_at(c: &Element, a: &Element, t: f64, p: &SeriesParams) -> Result<Element> {
    check_args(std::slice::from_ref(c), a)?;
    let mut s = SandwichSums::new(c, a);
    let mut coef = 1.0;
    let mut total = c.clone();
    let mut stop = Stopper::new(p, 2);
    for _ in 1..p.max_terms {
        s.advance();
        coef *= t / (s.n + 1) as f64;
        let term = s.sum.scale(coef);
        total += &term;
        if stop.settled(term.norm(), total.norm()) {
            return Ok(total);
        }
    }
    Err(Error::SeriesBudgetExceeded(p.max_terms))
}

/// Time derivative of `e[c]^{at}`:
/// `Σ (n+1) tⁿ/(n+2)! Σ_{m=0}^{n+1} a^m c a^{n+1-m}`.
pub fn quasiexp_at_dt(c: &Element, a: &Element, t: f64, p: &SeriesParams) -> Result<Element> {
    quasiexp_at_dt_weighted(c, a, t, p, |n| (n + 1) as f64)
}

/// The same series with the weight `(n+1)` dropped. It agrees with the true
/// derivative only at `t = 0`; kept for comparison.
pub fn quasiexp_at_dt_unweighted(
    c: &Element,
    a: &Element,
    t: f64,
    p: &SeriesParams,
) -> Result<Element> {
    quasiexp_at_dt_weighted(c, a, t, p, |_| 1.0)
}

fn quasiexp_at_dt_weighted(
    c: &Element,
    a: &Element,
    t: f64,
    p: &SeriesParams,
    weight: impl Fn(usize) -> f64,
) -> Result<Element> {
    check_args(std::slice::from_ref(c), a)?;
    let mut s = SandwichSums::new(c, a);
    s.advance();
    // coef_n = tⁿ/(n+2)!
    let mut coef = 0.5;
    let mut total = s.sum.scale(coef * weight(0));
    let mut stop = Stopper::new(p, 2);
    for n in 1..p.max_terms {
        s.advance();
        coef *= t / (n + 2) as f64;
        let term = s.sum.scale(coef * weight(n));
        total += &term;
        if stop.settled(term.norm(), total.norm()) {
            return Ok(total);
        }
    }
    Err(Error::SeriesBudgetExceeded(p.max_terms))
}

fn mexp(x: &BiMatrix, product: Product, p: &SeriesParams) -> Result<BiMatrix> {
    if !x.is_square() {
        return Err(Error::ShapeMismatch(format!(
            "matrix exponential of a non-square {}x{} matrix",
            x.rows(),
            x.cols()
        )));
    }
    let mut term = BiMatrix::identity(x.algebra(), x.rows());
    let mut sum = term.clone();
    let mut stop = Stopper::new(p, 1);
    for n in 1..p.max_terms {
        term = product.apply(&term, x)?.scale(1.0 / n as f64);
        sum = sum.add(&term)?;
        if stop.settled(term.max_norm(), sum.max_norm()) {
            return Ok(sum);
        }
    }
    Err(Error::SeriesBudgetExceeded(p.max_terms))
}

/// `Σ x^{n rc}/n!`.
pub fn mexp_rc(x: &BiMatrix, p: &SeriesParams) -> Result<BiMatrix> {
    mexp(x, Product::Rc, p)
}

/// `Σ x^{n cr}/n!`.
pub fn mexp_cr(x: &BiMatrix, p: &SeriesParams) -> Result<BiMatrix> {
    mexp(x, Product::Cr, p)
}

pub fn mexp_with(x: &BiMatrix, product: Product, p: &SeriesParams) -> Result<BiMatrix> {
    mexp(x, product, p)
}
