//! Differential forms, exact equations and homogeneous linear systems.

mod exact;
mod forms;
mod ode;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Algebra, Element};

pub use exact::{exactness_check, implicit_solution_check, BiForm, Factor};
pub use forms::{
    antiderivative_residual, derivative_residual, integrability_check, sample_antiderivative,
    FormPoly,
};
pub use ode::{
    closed_form_solution, curve_distance, eigen_solution, eigen_solution_check, elliptic_family,
    elliptic_ode, example_951_curve, rk4_integrate, solution_residual, state_distance,
    successive_powers, LinearOde, OdeForm, Provenance, Side, SolutionCurve,
};

/// Default number of random probes for probabilistic checks.
pub const DEFAULT_PROBES: usize = 32;
/// Tolerance for finite-difference comparisons.
pub const FD_TOL: f64 = 1e-6;
/// A negative verdict needs a witness at least this large.
pub const WITNESS_MIN: f64 = 1e-3;

pub(crate) fn probe_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub(crate) fn random(alg: &Algebra, rng: &mut ChaCha8Rng) -> Element {
    alg.random_element(rng, 1.0)
}

/// Central finite differences.
pub mod fd {
    use crate::algebra::Element;

    /// `1e-5 · (1 + ‖x‖)`.
    pub fn step(x: &Element) -> f64 {
        1e-5 * (1.0 + x.norm())
    }

    /// Derivative of `f` at `x` along `h`.
    pub fn directional(f: impl Fn(&Element) -> Element, x: &Element, h: &Element) -> Element {
        let s = step(x);
        let hs = h.scale(s);
        (&f(&(x + &hs)) - &f(&(x - &hs))).scale(0.5 / s)
    }

    /// Mixed second derivative of `f` at `x` along `h1` and `h2`.
    pub fn second_directional(
        f: impl Fn(&Element) -> Element,
        x: &Element,
        h1: &Element,
        h2: &Element,
    ) -> Element {
        let s = 1e-4 * (1.0 + x.norm());
        let (a, b) = (h1.scale(s), h2.scale(s));
        let pp = f(&(&(x + &a) + &b));
        let pm = f(&(&(x + &a) - &b));
        let mp = f(&(&(x - &a) + &b));
        let mm = f(&(&(x - &a) - &b));
        (&(&pp - &pm) - &(&mp - &mm)).scale(0.25 / (s * s))
    }

    /// Derivative of a real-parameter curve.
    pub fn time(f: impl Fn(f64) -> Element, t: f64) -> Element {
        let s = 1e-5 * (1.0 + t.abs());
        (&f(t + s) - &f(t - s)).scale(0.5 / s)
    }
}
