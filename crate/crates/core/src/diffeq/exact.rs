//! Two-variable forms `M(x, y) ∘ dx + N(x, y) ∘ dy` and exactness.

use std::fmt;
use std::sync::Arc;

use serde_json::json;

use super::{fd, probe_rng, random, FD_TOL, WITNESS_MIN};
use crate::algebra::{Algebra, Element};
use crate::error::{Error, Result};
use crate::report::Report;

const EXACT_TOL: f64 = 1e-5;
const LINEARITY_PROBES: usize = 8;
const LINEARITY_SEED: u64 = 0x11_7e_a5;

type Eval = dyn Fn(&Element, &Element, &Element) -> Element + Send + Sync;

/// Factor of a word in a [`BiForm`].
#[derive(Debug, Clone)]
pub enum Factor {
    Const(Element),
    X,
    Y,
    /// The direction the form acts on.
    D,
}

/// `(x, y, d) ↦ M(x, y) ∘ d`, linear in `d`.
#[derive(Clone)]
pub struct BiForm {
    alg: Algebra,
    eval: Arc<Eval>,
}

impl BiForm {
    /// Wraps an evaluator after checking linearity in `d` at seeded probes.
    pub fn new(
        alg: &Algebra,
        f: impl Fn(&Element, &Element, &Element) -> Element + Send + Sync + 'static,
    ) -> Result<Self> {
        let mut rng = probe_rng(LINEARITY_SEED);
        for _ in 0..LINEARITY_PROBES {
            let x = random(alg, &mut rng);
            let y = random(alg, &mut rng);
            let d1 = random(alg, &mut rng);
            let d2 = random(alg, &mut rng);
            let s = 1.0 + rand::Rng::gen::<f64>(&mut rng);
            let f1 = f(&x, &y, &d1);
            let f2 = f(&x, &y, &d2);
            let scale = 1.0 + f1.norm() + f2.norm();
            let additive = (&f(&x, &y, &(&d1 + &d2)) - &(&f1 + &f2)).norm();
            let homogeneous = (&f(&x, &y, &d1.scale(s)) - &f1.scale(s)).norm();
            if additive > 1e-9 * scale || homogeneous > 1e-9 * scale * s {
                return Err(Error::InvalidArgument(
                    "form is not linear in its direction".into(),
                ));
            }
        }
        Ok(Self {
            alg: alg.clone(),
            eval: Arc::new(f),
        })
    }

    /// Sum of words, each a product of factors containing `D` exactly once.
    pub fn words(alg: &Algebra, words: Vec<Vec<Factor>>) -> Result<Self> {
        for w in &words {
            let ds = w.iter().filter(|f| matches!(f, Factor::D)).count();
            if ds != 1 {
                return Err(Error::InvalidArgument(format!(
                    "each word needs exactly one direction factor, found {ds}"
                )));
            }
            for f in w {
                if let Factor::Const(c) = f {
                    if !c.algebra().same_as(alg) {
                        return Err(Error::AlgebraMismatch {
                            left: alg.tag().into(),
                            right: c.algebra().tag().into(),
                        });
                    }
                }
            }
        }
        let one = alg.one();
        Self::new(alg, move |x, y, d| {
            let mut acc = x.algebra().zero();
            for w in &words {
                let mut term = one.clone();
                for f in w {
                    let v = match f {
                        Factor::Const(c) => c,
                        Factor::X => x,
                        Factor::Y => y,
                        Factor::D => d,
                    };
                    term = &term * v;
                }
                acc += &term;
            }
            acc
        })
    }

    pub fn zero(alg: &Algebra) -> Self {
        Self::words(alg, Vec::new()).expect("empty form is linear")
    }

    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }

    pub fn eval(&self, x: &Element, y: &Element, d: &Element) -> Element {
        (self.eval)(x, y, d)
    }
}

impl fmt::Debug for BiForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiForm<{}>", self.alg.tag())
    }
}

/// Checks the three symmetry conditions for `M ∘ dx + N ∘ dy`:
/// `∂M/∂x` and `∂N/∂y` symmetric, and `∂M/∂y ∘ (dx, dy) = ∂N/∂x ∘ (dy, dx)`.
pub fn exactness_check(m: &BiForm, n: &BiForm, probes: usize, seed: u64) -> Report {
    let alg = m.algebra();
    let mut rng = probe_rng(seed);
    let mut worst = [0.0_f64; 3];
    let mut witness = None;
    const NAMES: [&str; 3] = ["dM/dx symmetric", "dN/dy symmetric", "dM/dy = dN/dx"];
    for _ in 0..probes {
        let x = random(alg, &mut rng);
        let y = random(alg, &mut rng);
        let [dx1, dx2, dy1, dy2] = std::array::from_fn(|_| random(alg, &mut rng));
        // ∂M/∂x ∘ (a, b): derivative in x along b of M(·, y) ∘ a
        let mx = |a: &Element, b: &Element| fd::directional(|x| m.eval(x, &y, a), &x, b);
        let ny = |a: &Element, b: &Element| fd::directional(|y| n.eval(&x, y, a), &y, b);
        let c1 = (&mx(&dx1, &dx2) - &mx(&dx2, &dx1)).norm();
        let c2 = (&ny(&dy1, &dy2) - &ny(&dy2, &dy1)).norm();
        let my = fd::directional(|y| m.eval(&x, y, &dx1), &y, &dy1);
        let nx = fd::directional(|x| n.eval(x, &y, &dy1), &x, &dx1);
        let c3 = (&my - &nx).norm();
        for (k, c) in [c1, c2, c3].into_iter().enumerate() {
            if c > WITNESS_MIN && witness.is_none() {
                witness = Some(json!({
                    "condition": NAMES[k],
                    "x": x.to_string(),
                    "y": y.to_string(),
                    "dx": [dx1.to_string(), dx2.to_string()],
                    "dy": [dy1.to_string(), dy2.to_string()],
                    "violation": c,
                }));
            }
            worst[k] = worst[k].max(c);
        }
    }
    let total = worst.iter().copied().fold(0.0, f64::max);
    let exact = total <= EXACT_TOL;
    let mut r = Report::new(exact, total)
        .metric("dm_dx_asymmetry", worst[0])
        .metric("dn_dy_asymmetry", worst[1])
        .metric("cross_mismatch", worst[2])
        .metric("probes", probes as f64);
    match witness {
        Some(w) if !exact => r = r.witness(w),
        _ if !exact => r = r.note("violation above tolerance but below the witness threshold"),
        _ => {}
    }
    r
}

/// Checks `∂u/∂x ∘ dx = M ∘ dx` and `∂u/∂y ∘ dy = N ∘ dy` at seeded probes.
pub fn implicit_solution_check(
    u: impl Fn(&Element, &Element) -> Element,
    m: &BiForm,
    n: &BiForm,
    probes: usize,
    seed: u64,
) -> Report {
    let alg = m.algebra();
    let mut rng = probe_rng(seed);
    let (mut wx, mut wy) = (0.0_f64, 0.0_f64);
    let mut witness = None;
    for _ in 0..probes {
        let [x, y, dx, dy] = std::array::from_fn(|_| random(alg, &mut rng));
        let ux = fd::directional(|x| u(x, &y), &x, &dx);
        let uy = fd::directional(|y| u(&x, y), &y, &dy);
        let ex = (&ux - &m.eval(&x, &y, &dx)).norm();
        let ey = (&uy - &n.eval(&x, &y, &dy)).norm();
        if ex.max(ey) > FD_TOL && witness.is_none() {
            witness = Some(json!({
                "x": x.to_string(),
                "y": y.to_string(),
                "x_residual": ex,
                "y_residual": ey,
            }));
        }
        wx = wx.max(ex);
        wy = wy.max(ey);
    }
    let worst = wx.max(wy);
    let mut r = Report::new(worst <= FD_TOL, worst)
        .metric("x_residual", wx)
        .metric("y_residual", wy);
    if let Some(w) = witness {
        r = r.witness(w);
    }
    r
}
