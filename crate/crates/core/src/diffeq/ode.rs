//! Homogeneous linear systems `ẋ = a ∘ x` in the four product arrangements.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::FD_TOL;
use crate::algebra::{Algebra, Element, DEFAULT_TOL};
use crate::biring::{BiMatrix, Product};
use crate::error::{Error, Result};
use crate::report::Report;
use crate::series::{exp_at, mexp_with, SeriesParams};

/// Where the unknown sits and which product joins it to `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OdeForm {
    /// `ẋ = a rc x`, `x` a column.
    RcLeft,
    /// `ẋ = x cr a`, `x` a column.
    CrRight,
    /// `ẋ = a cr x`, `x` a row.
    CrLeft,
    /// `ẋ = x rc a`, `x` a row.
    RcRight,
}

impl OdeForm {
    pub const ALL: [OdeForm; 4] = [
        OdeForm::RcLeft,
        OdeForm::CrRight,
        OdeForm::CrLeft,
        OdeForm::RcRight,
    ];

    pub fn product(self) -> Product {
        match self {
            OdeForm::RcLeft | OdeForm::RcRight => Product::Rc,
            OdeForm::CrLeft | OdeForm::CrRight => Product::Cr,
        }
    }

    fn is_column(self) -> bool {
        matches!(self, OdeForm::RcLeft | OdeForm::CrRight)
    }

    fn matrix_on_left(self) -> bool {
        matches!(self, OdeForm::RcLeft | OdeForm::CrLeft)
    }

    pub fn name(self) -> &'static str {
        match self {
            OdeForm::RcLeft => "rc_left",
            OdeForm::CrRight => "cr_right",
            OdeForm::CrLeft => "cr_left",
            OdeForm::RcRight => "rc_right",
        }
    }
}

#[derive(Debug, Clone)]
pub struct LinearOde {
    a: BiMatrix,
    form: OdeForm,
    init: Vec<Element>,
}

impl LinearOde {
    pub fn new(a: BiMatrix, form: OdeForm, init: Vec<Element>) -> Result<Self> {
        if !a.is_square() || init.len() != a.rows() {
            return Err(Error::ShapeMismatch(format!(
                "need a square matrix and a matching initial vector, got {}x{} and {}",
                a.rows(),
                a.cols(),
                init.len()
            )));
        }
        if let Some(bad) = init.iter().find(|e| !e.algebra().same_as(a.algebra())) {
            return Err(Error::AlgebraMismatch {
                left: a.algebra().tag().into(),
                right: bad.algebra().tag().into(),
            });
        }
        Ok(Self { a, form, init })
    }

    pub fn matrix(&self) -> &BiMatrix {
        &self.a
    }

    pub fn form(&self) -> OdeForm {
        self.form
    }

    pub fn init(&self) -> &[Element] {
        &self.init
    }

    pub fn dim(&self) -> usize {
        self.init.len()
    }

    pub fn algebra(&self) -> &Algebra {
        self.a.algebra()
    }

    fn shape_state(&self, x: &[Element]) -> BiMatrix {
        let v = x.to_vec();
        if self.form.is_column() {
            BiMatrix::column(v)
        } else {
            BiMatrix::row(v)
        }
        .expect("nonempty state")
    }

    /// Combines a square matrix with the state in this form's arrangement.
    fn join(&self, m: &BiMatrix, x: &[Element]) -> Vec<Element> {
        let state = self.shape_state(x);
        let p = self.form.product();
        let out = if self.form.matrix_on_left() {
            p.apply(m, &state)
        } else {
            p.apply(&state, m)
        };
        out.expect("conformable").into_entries()
    }

    /// Right-hand side `a ∘ x` or `x ∘ a`.
    pub fn rhs(&self, x: &[Element]) -> Vec<Element> {
        self.join(&self.a, x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    ClosedForm,
    Eigen,
    Rk4,
    User,
}

type CurveFn = dyn Fn(f64) -> Result<Vec<Element>> + Send + Sync;

/// `t ↦ x(t)` with where it came from and where it is meant to be used.
#[derive(Clone)]
pub struct SolutionCurve {
    provenance: Provenance,
    interval: (f64, f64),
    eval: Arc<CurveFn>,
}

impl SolutionCurve {
    pub fn new(
        provenance: Provenance,
        interval: (f64, f64),
        f: impl Fn(f64) -> Result<Vec<Element>> + Send + Sync + 'static,
    ) -> Self {
        Self {
            provenance,
            interval,
            eval: Arc::new(f),
        }
    }

    /// A curve given by the caller, valid everywhere.
    pub fn user(f: impl Fn(f64) -> Vec<Element> + Send + Sync + 'static) -> Self {
        Self::new(
            Provenance::User,
            (f64::NEG_INFINITY, f64::INFINITY),
            move |t| Ok(f(t)),
        )
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn interval(&self) -> (f64, f64) {
        self.interval
    }

    pub fn at(&self, t: f64) -> Result<Vec<Element>> {
        (self.eval)(t)
    }
}

impl fmt::Debug for SolutionCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SolutionCurve")
            .field("provenance", &self.provenance)
            .field("interval", &self.interval)
            .finish()
    }
}

/// `x(t)` from the matrix exponential of `t a` joined with the initial value.
pub fn closed_form_solution(ode: &LinearOde, p: &SeriesParams) -> SolutionCurve {
    let ode = ode.clone();
    let p = *p;
    SolutionCurve::new(
        Provenance::ClosedForm,
        (f64::NEG_INFINITY, f64::INFINITY),
        move |t| {
            let e = mexp_with(&ode.a.scale(t), ode.form.product(), &p)?;
            Ok(ode.join(&e, &ode.init))
        },
    )
}

/// `[a⁰, a¹, …, aⁿ]` under the form's product.
pub fn successive_powers(ode: &LinearOde, n: usize) -> Vec<BiMatrix> {
    let product = ode.form.product();
    let mut out = vec![BiMatrix::identity(ode.algebra(), ode.dim())];
    for _ in 0..n {
        let next = product
            .apply(out.last().expect("nonempty"), &ode.a)
            .expect("square");
        out.push(next);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// `xⁱ = e^{bt} cⁱ`.
    Left,
    /// `xⁱ = cⁱ e^{bt}`.
    Right,
}

/// Componentwise `e^{bt} cⁱ` or `cⁱ e^{bt}`.
pub fn eigen_solution(b: &Element, c: &[Element], side: Side, p: &SeriesParams) -> SolutionCurve {
    let b = b.clone();
    let c = c.to_vec();
    let p = *p;
    SolutionCurve::new(
        Provenance::Eigen,
        (f64::NEG_INFINITY, f64::INFINITY),
        move |t| {
            let e = exp_at(&b, t, &p)?;
            Ok(c.iter()
                .map(|ci| match side {
                    Side::Left => &e * ci,
                    Side::Right => ci * &e,
                })
                .collect())
        },
    )
}

/// Residual of the eigen curve through `ode.init()`, plus whether the
/// sufficient commutation conditions hold (entries of `a`, or of `c`, commute
/// with `b`).
pub fn eigen_solution_check(
    ode: &LinearOde,
    b: &Element,
    side: Side,
    ts: &[f64],
    p: &SeriesParams,
) -> Report {
    let curve = eigen_solution(b, &ode.init, side, p);
    let res = solution_residual(ode, &curve, ts);
    let a_commutes = ode
        .a
        .entries()
        .iter()
        .all(|e| e.in_centralizer(b, DEFAULT_TOL));
    let c_commutes = ode.init.iter().all(|e| e.in_centralizer(b, DEFAULT_TOL));
    let met = a_commutes || c_commutes;
    let mut r = Report::new(res.verdict, res.residual)
        .metric("a_in_centralizer", a_commutes as u8 as f64)
        .metric("c_in_centralizer", c_commutes as u8 as f64);
    if !met {
        r = r.note("conditions not met");
    }
    r
}

/// Max over `ts` of `‖FD of the curve − rhs(curve)‖` and of the initial-value
/// mismatch at `t = 0`.
pub fn solution_residual(ode: &LinearOde, curve: &SolutionCurve, ts: &[f64]) -> Report {
    let mut worst = 0.0_f64;
    let mut worst_t = f64::NAN;
    let mut failure = None;
    for &t in ts {
        match step_residual(ode, curve, t) {
            Ok(v) => {
                if v > worst || worst_t.is_nan() {
                    worst = worst.max(v);
                    worst_t = t;
                }
            }
            Err(e) => {
                failure = Some(e.to_string());
                worst = f64::INFINITY;
                worst_t = t;
                break;
            }
        }
    }
    let init_gap = match curve.at(0.0) {
        Ok(x0) => max_gap(&x0, &ode.init),
        Err(_) => f64::INFINITY,
    };
    let mut r = Report::new(worst <= FD_TOL, worst)
        .metric("worst_t", worst_t)
        .metric("initial_gap", init_gap);
    if let Some(msg) = failure {
        r = r.note(msg);
    }
    r
}

fn step_residual(ode: &LinearOde, curve: &SolutionCurve, t: f64) -> Result<f64> {
    let n = ode.dim();
    let s = 1e-5 * (1.0 + t.abs());
    let plus = curve.at(t + s)?;
    let minus = curve.at(t - s)?;
    let here = curve.at(t)?;
    if plus.len() != n || here.len() != n {
        return Err(Error::ArityMismatch {
            expected: n,
            got: here.len(),
        });
    }
    let rhs = ode.rhs(&here);
    Ok((0..n)
        .map(|i| (&(&plus[i] - &minus[i]).scale(0.5 / s) - &rhs[i]).norm())
        .fold(0.0, f64::max))
}

fn max_gap(a: &[Element], b: &[Element]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn axpy(x: &[Element], k: &[Element], s: f64) -> Vec<Element> {
    x.iter().zip(k).map(|(xi, ki)| xi + &ki.scale(s)).collect()
}

fn rk4_step(ode: &LinearOde, x: &[Element], h: f64) -> Vec<Element> {
    let k1 = ode.rhs(x);
    let k2 = ode.rhs(&axpy(x, &k1, h / 2.0));
    let k3 = ode.rhs(&axpy(x, &k2, h / 2.0));
    let k4 = ode.rhs(&axpy(x, &k3, h));
    x.iter()
        .enumerate()
        .map(|(i, xi)| {
            let mut inc = &k1[i] + &k4[i];
            inc += &(&k2[i] + &k3[i]).scale(2.0);
            xi + &inc.scale(h / 6.0)
        })
        .collect()
}

/// Classical Runge–Kutta on `[0, t_end]` with `steps` equal steps. Between grid
/// points the curve takes one partial step from the grid point below.
pub fn rk4_integrate(ode: &LinearOde, t_end: f64, steps: usize) -> Result<SolutionCurve> {
    if steps == 0 || !t_end.is_finite() || t_end == 0.0 {
        return Err(Error::InvalidArgument(
            "rk4 needs at least one step and a finite nonzero end time".into(),
        ));
    }
    let h = t_end / steps as f64;
    let mut grid = Vec::with_capacity(steps + 1);
    grid.push(ode.init.clone());
    for _ in 0..steps {
        let next = rk4_step(ode, grid.last().expect("nonempty"), h);
        grid.push(next);
    }
    let ode = ode.clone();
    let interval = if t_end > 0.0 {
        (0.0, t_end)
    } else {
        (t_end, 0.0)
    };
    Ok(SolutionCurve::new(Provenance::Rk4, interval, move |t| {
        let pos = (t / h).floor().clamp(0.0, steps as f64) as usize;
        let base = pos as f64 * h;
        let offset = t - base;
        if offset == 0.0 {
            Ok(grid[pos].clone())
        } else {
            Ok(rk4_step(&ode, &grid[pos], offset))
        }
    }))
}

/// `ẋ¹ = x², ẋ² = −x¹` over the quaternions with `x(0) = (0, 1)`.
pub fn elliptic_ode() -> LinearOde {
    let alg = Algebra::quaternion();
    let a = BiMatrix::from_reals(&alg, &[&[0.0, 1.0], &[-1.0, 0.0]]).expect("2x2");
    LinearOde::new(a, OdeForm::RcLeft, vec![alg.zero(), alg.one()]).expect("valid system")
}

/// `x¹ = ½(−i+j)(e^{it} − e^{jt})`, `x² = ½(−i+j)(i e^{it} − j e^{jt})`.
pub fn example_951_curve(p: &SeriesParams) -> SolutionCurve {
    let alg = Algebra::quaternion();
    let (i, j) = (alg.basis(1), alg.basis(2));
    let lead = (&j - &i).scale(0.5);
    let p = *p;
    SolutionCurve::new(
        Provenance::User,
        (f64::NEG_INFINITY, f64::INFINITY),
        move |t| {
            let ei = exp_at(&i, t, &p)?;
            let ej = exp_at(&j, t, &p)?;
            let x1 = &lead * &(&ei - &ej);
            let x2 = &lead * &(&(&i * &ei) - &(&j * &ej));
            Ok(vec![x1, x2])
        },
    )
}

/// Three-exponential family through `(0, 1)` with free left factor `C`:
/// `x¹ = C₁e^{it} + C₂e^{jt} + C₃e^{kt}`, `x² = C₁ie^{it} + C₂je^{jt} + C₃ke^{kt}`,
/// `C₁ = C`, `C₂ = ½(−(j−k) + C(−1+i+j+k))`, `C₃ = ½((j−k) − C(1+i+j+k))`.
pub fn elliptic_family(c: &Element, p: &SeriesParams) -> Result<SolutionCurve> {
    let alg = Algebra::quaternion();
    if !c.algebra().same_as(&alg) {
        return Err(Error::AlgebraMismatch {
            left: alg.tag().into(),
            right: c.algebra().tag().into(),
        });
    }
    let (one, i, j, k) = (alg.one(), alg.basis(1), alg.basis(2), alg.basis(3));
    let jk = &j - &k;
    let s = &(&i + &j) + &k;
    let c1 = c.clone();
    let c2 = (&-&jk + &(c * &(&s - &one))).scale(0.5);
    let c3 = (&jk - &(c * &(&s + &one))).scale(0.5);
    let units = [i, j, k];
    let coefs = [c1, c2, c3];
    let p = *p;
    Ok(SolutionCurve::new(
        Provenance::User,
        (f64::NEG_INFINITY, f64::INFINITY),
        move |t| {
            let mut x1 = alg.zero();
            let mut x2 = alg.zero();
            for (u, cu) in units.iter().zip(&coefs) {
                let e = exp_at(u, t, &p)?;
                x1 += &(cu * &e);
                x2 += &(&(cu * u) * &e);
            }
            Ok(vec![x1, x2])
        },
    ))
}

/// Largest componentwise difference between two curves over `ts`.
pub fn curve_distance(a: &SolutionCurve, b: &SolutionCurve, ts: &[f64]) -> Result<f64> {
    let mut worst = 0.0_f64;
    for &t in ts {
        worst = worst.max(max_gap(&a.at(t)?, &b.at(t)?));
    }
    Ok(worst)
}

/// Euclidean norm of the difference of two states.
pub fn state_distance(a: &[Element], b: &[Element]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

impl Serialize for SolutionCurve {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        json!({ "provenance": self.provenance, "interval": [self.interval.0, self.interval.1] })
            .serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p() -> SeriesParams {
        SeriesParams::default()
    }

    const TS: [f64; 4] = [0.0, 0.5, 1.0, 2.0];

    fn hyperbolic(alg: &Algebra) -> LinearOde {
        let a = BiMatrix::from_reals(alg, &[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        LinearOde::new(a, OdeForm::RcLeft, vec![alg.zero(), alg.one()]).unwrap()
    }

    #[test]
    fn validation() {
        let alg = Algebra::real();
        let a = BiMatrix::identity(&alg, 2);
        assert!(LinearOde::new(a.clone(), OdeForm::RcLeft, vec![alg.one()]).is_err());
        let c = Algebra::complex();
        assert!(LinearOde::new(a, OdeForm::RcLeft, vec![c.one(), c.one()]).is_err());
        assert!(rk4_integrate(&hyperbolic(&alg), 1.0, 0).is_err());
    }

    #[test]
    fn hyperbolic_closed_form() {
        let alg = Algebra::real();
        let ode = hyperbolic(&alg);
        let curve = closed_form_solution(&ode, &p());
        let x = curve.at(1.0).unwrap();
        assert!((x[0].re() - 1.1752011936438014).abs() < 1e-13);
        assert!((x[1].re() - 1.5430806348152437).abs() < 1e-13);
        assert_eq!(curve.at(0.0).unwrap(), ode.init().to_vec());
        assert!(solution_residual(&ode, &curve, &TS).verdict);
        let rk = rk4_integrate(&ode, 1.0, 1000).unwrap();
        let y = rk.at(1.0).unwrap();
        assert!((y[0].re() - 1f64.sinh()).abs() < 1e-9);
        assert!((y[1].re() - 1f64.cosh()).abs() < 1e-9);
    }

    #[test]
    fn quaternion_offdiag_closed_form() {
        let alg = Algebra::quaternion();
        let i = alg.basis(1);
        let a = BiMatrix::from_rows(vec![
            vec![alg.zero(), i.clone()],
            vec![i.clone(), alg.zero()],
        ])
        .unwrap();
        let ode = LinearOde::new(a, OdeForm::RcLeft, vec![alg.zero(), alg.one()]).unwrap();
        let curve = closed_form_solution(&ode, &p());
        for t in TS {
            let x = curve.at(t).unwrap();
            // sinh(ti) = i sin t, cosh(ti) = cos t
            assert!(x[0].approx_eq(&i.scale(t.sin()), 1e-12));
            assert!(x[1].approx_eq(&alg.scalar(t.cos()), 1e-12));
        }
    }

    #[test]
    fn zero_matrix_is_constant() {
        let alg = Algebra::quaternion();
        let init = vec![alg.basis(1), alg.basis(3)];
        for form in OdeForm::ALL {
            let ode = LinearOde::new(BiMatrix::zeros(&alg, 2, 2), form, init.clone()).unwrap();
            assert_eq!(closed_form_solution(&ode, &p()).at(3.0).unwrap(), init);
            assert_eq!(rk4_integrate(&ode, 1.0, 10).unwrap().at(0.7).unwrap(), init);
        }
    }

    #[test]
    fn four_forms_match_rk4() {
        let alg = Algebra::quaternion();
        let mut rng = ChaCha8Rng::seed_from_u64(30);
        for form in OdeForm::ALL {
            let a = BiMatrix::random(&alg, 2, 2, &mut rng, 0.5);
            let init = vec![
                alg.random_element(&mut rng, 1.0),
                alg.random_element(&mut rng, 1.0),
            ];
            let ode = LinearOde::new(a, form, init).unwrap();
            let cf = closed_form_solution(&ode, &p());
            let rk = rk4_integrate(&ode, 1.0, 2000).unwrap();
            let ts: Vec<f64> = (0..=10).map(|k| k as f64 / 10.0).collect();
            assert!(curve_distance(&cf, &rk, &ts).unwrap() < 1e-9, "{form:?}");
            assert!(solution_residual(&ode, &cf, &ts).verdict);
        }
    }

    #[test]
    fn forms_differ_over_quaternions() {
        let alg = Algebra::quaternion();
        let (i, j) = (alg.basis(1), alg.basis(2));
        let a = BiMatrix::from_rows(vec![vec![i.clone(), j.clone()], vec![j, i.clone()]]).unwrap();
        let x = vec![alg.basis(3), alg.one()];
        let rhs: Vec<Vec<Element>> = OdeForm::ALL
            .iter()
            .map(|&f| LinearOde::new(a.clone(), f, x.clone()).unwrap().rhs(&x))
            .collect();
        // a rc x as a column is Σ a[i][j] x_j; x cr a as a column is Σ x_j a[i][j]
        assert!(rhs[0][0].approx_eq(&(&(&i * &x[0]) + &(&alg.basis(2) * &x[1])), 0.0));
        assert!(rhs[1][0].approx_eq(&(&(&x[0] * &i) + &(&x[1] * &alg.basis(2))), 0.0));
        assert!(!rhs[0][0].approx_eq(&rhs[1][0], 1e-3));
    }

    #[test]
    fn powers_follow_the_form() {
        let alg = Algebra::quaternion();
        let f = alg.parse("1 + j").unwrap();
        let a = BiMatrix::from_rows(vec![
            vec![alg.zero(), f.clone()],
            vec![f.clone(), alg.zero()],
        ])
        .unwrap();
        let ode = LinearOde::new(a.clone(), OdeForm::RcLeft, vec![alg.zero(), alg.one()]).unwrap();
        let pw = successive_powers(&ode, 3);
        assert_eq!(pw.len(), 4);
        assert!(pw[0].approx_eq(&BiMatrix::identity(&alg, 2), 0.0));
        let f2 = &f * &f;
        assert!(pw[2].approx_eq(
            &BiMatrix::diag(vec![f2.clone(), f2.clone()]).unwrap(),
            1e-14
        ));
        let f3 = &f2 * &f;
        let want =
            BiMatrix::from_rows(vec![vec![alg.zero(), f3.clone()], vec![f3, alg.zero()]]).unwrap();
        assert!(pw[3].approx_eq(&want, 1e-14));
        assert_eq!(successive_powers(&ode, 0).len(), 1);
    }

    #[test]
    fn eigen_curves() {
        let alg = Algebra::quaternion();
        let f = alg.parse("0.3 + i - 0.5k").unwrap();
        let a = BiMatrix::from_rows(vec![
            vec![alg.zero(), f.clone()],
            vec![f.clone(), alg.zero()],
        ])
        .unwrap();
        let ode = LinearOde::new(a, OdeForm::RcLeft, vec![alg.one(), -alg.one()]).unwrap();
        let r = eigen_solution_check(&ode, &-&f, Side::Left, &TS, &p());
        assert!(r.verdict && r.notes.is_empty());
        let zero = eigen_solution(&alg.zero(), ode.init(), Side::Left, &p());
        assert_eq!(zero.at(1.3).unwrap(), ode.init().to_vec());

        // conditions fail and so does the curve
        let (i, j) = (alg.basis(1), alg.basis(2));
        let a =
            BiMatrix::from_rows(vec![vec![j.clone(), alg.zero()], vec![alg.zero(), j]]).unwrap();
        let ode = LinearOde::new(a, OdeForm::RcLeft, vec![alg.basis(3), alg.one()]).unwrap();
        let r = eigen_solution_check(&ode, &i, Side::Left, &TS, &p());
        assert!(!r.verdict);
        assert_eq!(r.notes, vec!["conditions not met".to_string()]);
    }

    #[test]
    fn elliptic_curves_coincide_with_sin_cos() {
        let ode = elliptic_ode();
        let alg = ode.algebra().clone();
        let sc = SolutionCurve::user(move |t: f64| vec![alg.scalar(t.sin()), alg.scalar(t.cos())]);
        let ex = example_951_curve(&p());
        assert!(solution_residual(&ode, &ex, &TS).verdict);
        assert_eq!(
            solution_residual(&ode, &ex, &TS).metrics["initial_gap"],
            0.0
        );
        assert!(curve_distance(&ex, &sc, &TS).unwrap() < 1e-12);
        let q = Algebra::quaternion();
        for c in ["0", "1", "i", "2 - j + 0.5k"] {
            let fam = elliptic_family(&q.parse(c).unwrap(), &p()).unwrap();
            let r = solution_residual(&ode, &fam, &TS);
            assert!(r.verdict && r.metrics["initial_gap"] < 1e-15, "{c}");
            assert!(curve_distance(&fam, &sc, &TS).unwrap() < 1e-12, "{c}");
        }
        let wrong = SolutionCurve::user(|t: f64| {
            let r = Algebra::quaternion();
            vec![r.scalar(t.sin()), r.scalar(t.sin())]
        });
        assert!(solution_residual(&ode, &wrong, &TS).residual > 0.1);
    }
}
