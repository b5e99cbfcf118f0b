//! One-variable differential forms `g(x) ∘ h` and their integrability.

use serde_json::json;

use super::{fd, probe_rng, random, FD_TOL, WITNESS_MIN};
use crate::algebra::{Algebra, Element};
use crate::error::{Error, Result};
use crate::report::Report;
use crate::tensor::{Gap, SlotTensor, Tensor};

const SYMMETRY_TOL: f64 = 1e-9;

/// A linear-map-valued polynomial `x ↦ (h ↦ g(x) ∘ h)`.
#[derive(Debug, Clone)]
pub struct FormPoly {
    alg: Algebra,
    components: Vec<SlotTensor>,
}

impl FormPoly {
    pub fn new(alg: &Algebra, components: Vec<SlotTensor>) -> Result<Self> {
        for c in &components {
            if c.arg_slots() != 1 {
                return Err(Error::ArityMismatch {
                    expected: 1,
                    got: c.arg_slots(),
                });
            }
            if !c.algebra().same_as(alg) {
                return Err(Error::AlgebraMismatch {
                    left: alg.tag().into(),
                    right: c.algebra().tag().into(),
                });
            }
        }
        Ok(Self {
            alg: alg.clone(),
            components,
        })
    }

    pub fn zero(alg: &Algebra) -> Self {
        Self {
            alg: alg.clone(),
            components: Vec::new(),
        }
    }

    /// The differential of a homogeneous polynomial, `dy/dx` for `y = t ∘ x^n`.
    pub fn differential(t: &Tensor) -> Self {
        Self {
            alg: t.algebra().clone(),
            components: vec![t.derivative(1)],
        }
    }

    /// Adds the single word `c₀ g₁ c₁ … gₙ cₙ` with exactly one argument gap.
    pub fn with_word(self, coeffs: Vec<Element>, gaps: Vec<Gap>) -> Result<Self> {
        let mut components = self.components;
        components.push(SlotTensor::word(coeffs, gaps)?);
        Self::new(&self.alg, components)
    }

    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }

    pub fn components(&self) -> &[SlotTensor] {
        &self.components
    }

    /// `g(x) ∘ h`.
    pub fn eval(&self, x: &Element, h: &Element) -> Result<Element> {
        let mut acc = self.alg.zero();
        for c in &self.components {
            acc += &c.eval(std::slice::from_ref(h), x)?;
        }
        Ok(acc)
    }

    /// `dg(x) ∘ (h₁, h₂)`: `h₁` is the original argument, `h₂` the new direction.
    pub fn derivative(&self) -> SlotTensor {
        self.components
            .iter()
            .map(SlotTensor::derivative)
            .fold(SlotTensor::zero(&self.alg, 2), |acc, d| {
                acc.add(&d).expect("same algebra and arity")
            })
    }
}

/// Tests symmetry of `dg ∘ (h₁, h₂)` at seeded random points.
pub fn integrability_check(g: &FormPoly, probes: usize, seed: u64) -> Report {
    let dg = g.derivative();
    let alg = g.algebra();
    let mut rng = probe_rng(seed);
    let mut worst = 0.0_f64;
    let mut witness = None;
    for _ in 0..probes {
        let x = random(alg, &mut rng);
        let h1 = random(alg, &mut rng);
        let h2 = random(alg, &mut rng);
        let fwd = dg.eval(&[h1.clone(), h2.clone()], &x).expect("arity 2");
        let bwd = dg.eval(&[h2.clone(), h1.clone()], &x).expect("arity 2");
        let v = (&fwd - &bwd).norm();
        if v > WITNESS_MIN && witness.is_none() {
            witness = Some(json!({
                "x": x.to_string(),
                "h1": h1.to_string(),
                "h2": h2.to_string(),
                "dg(h1,h2)": fwd.to_string(),
                "dg(h2,h1)": bwd.to_string(),
                "violation": v,
            }));
        }
        worst = worst.max(v);
    }
    let integrable = worst <= SYMMETRY_TOL;
    let mut r = Report::new(integrable, worst)
        .metric("max_violation", worst)
        .metric("probes", probes as f64);
    match witness {
        Some(w) if !integrable => r = r.witness(w),
        _ if !integrable => r = r.note("violation above tolerance but below the witness threshold"),
        _ => {}
    }
    r
}

/// Max over `(x, h)` pairs of `‖FD of y at x along h − dy(x, h)‖`.
pub fn derivative_residual(
    y: impl Fn(&Element) -> Element,
    dy: impl Fn(&Element, &Element) -> Element,
    pairs: &[(Element, Element)],
) -> Report {
    let mut worst = 0.0_f64;
    let mut at = None;
    for (x, h) in pairs {
        let v = (&fd::directional(&y, x, h) - &dy(x, h)).norm();
        if v > worst {
            worst = v;
            at = Some((x, h));
        }
    }
    let mut r = Report::new(worst <= FD_TOL, worst).metric("pairs", pairs.len() as f64);
    if worst > FD_TOL {
        if let Some((x, h)) = at {
            r = r.witness(json!({ "x": x.to_string(), "h": h.to_string(), "residual": worst }));
        }
    }
    r
}

/// Checks `dy/dx = g` on every combination of `points` and `dirs`.
pub fn antiderivative_residual(
    y: impl Fn(&Element) -> Element,
    g: &FormPoly,
    points: &[Element],
    dirs: &[Element],
) -> Report {
    let pairs: Vec<(Element, Element)> = points
        .iter()
        .flat_map(|x| dirs.iter().map(move |h| (x.clone(), h.clone())))
        .collect();
    derivative_residual(y, |x, h| g.eval(x, h).expect("one argument"), &pairs)
}

/// [`antiderivative_residual`] on `probes` seeded random points and directions.
pub fn sample_antiderivative(
    y: impl Fn(&Element) -> Element,
    g: &FormPoly,
    probes: usize,
    seed: u64,
) -> Report {
    let mut rng = probe_rng(seed);
    let alg = g.algebra();
    let points: Vec<Element> = (0..probes).map(|_| random(alg, &mut rng)).collect();
    let dirs: Vec<Element> = (0..probes).map(|_| random(alg, &mut rng)).collect();
    let pairs: Vec<(Element, Element)> = points.into_iter().zip(dirs).collect();
    derivative_residual(y, |x, h| g.eval(x, h).expect("one argument"), &pairs)
}
