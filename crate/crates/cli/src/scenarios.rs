use ncalc::biring::{eigen_offdiag, is_rc_singular, quasidet_matrix, rc_inv, rc_rank, solve_rc};
use ncalc::diffeq::{
    closed_form_solution, curve_distance, eigen_solution_check, elliptic_family, elliptic_ode,
    exactness_check, example_951_curve, fd, implicit_solution_check, integrability_check,
    rk4_integrate, solution_residual, state_distance, BiForm, Factor, FormPoly, LinearOde, OdeForm,
    Side, SolutionCurve,
};
use ncalc::series::{cosh_el, exp_at, exp_el, quasiexp, quasiexp_degree, sinh_el};
use ncalc::tensor::{Gap, Tensor};
use ncalc::{Algebra, BiMatrix, Element, Product, Report};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::{CliError, Options, Scenario};

type Out = Result<Report, CliError>;

static REGISTRY: &[Scenario] = &[
    Scenario {
        name: "quasidet-2x2",
        description: "2x2 quasideterminants and inverse against closed forms",
        anchor: "Theorem 3.3.6",
        options: &["algebra"],
        expected: true,
        run: quasidet_2x2,
    },
    Scenario {
        name: "solve-quaternion-system",
        description: "rc-linear systems over the quaternions",
        anchor: "Theorem 5.4.7",
        options: &[],
        expected: true,
        run: solve_system,
    },
    Scenario {
        name: "rank-demo",
        description: "rank, major minor and vanishing bordered quasideterminants",
        anchor: "Theorem 5.5.3",
        options: &[],
        expected: true,
        run: rank_demo,
    },
    Scenario {
        name: "eigen-offdiag",
        description: "roots f and -f of [[0,f],[f,0]] and the eigen solutions",
        anchor: "Section 9.4",
        options: &[],
        expected: true,
        run: eigen_demo,
    },
    Scenario {
        name: "integrability-x2",
        description: "g = x(x)1 + 1(x)x is integrable",
        anchor: "Example 6.5.2",
        options: &["algebra"],
        expected: true,
        run: integrability_x2,
    },
    Scenario {
        name: "integrability-3xx",
        description: "g = 3 x(x)x: integrable over C, not over H",
        anchor: "Example 6.5.3",
        options: &["algebra"],
        expected: false,
        run: integrability_3xx,
    },
    Scenario {
        name: "exact-723",
        description: "exact equation with potential x + xy + y",
        anchor: "Example 7.2.3",
        options: &[],
        expected: true,
        run: exact_723,
    },
    Scenario {
        name: "exact-724",
        description: "3x^2 dx + dx y + x dy is not exact",
        anchor: "Example 7.2.4",
        options: &[],
        expected: false,
        run: exact_724,
    },
    Scenario {
        name: "exact-725",
        description: "dx y + dy x is not exact (argument order)",
        anchor: "Example 7.2.5",
        options: &[],
        expected: false,
        run: exact_725,
    },
    Scenario {
        name: "separable-712",
        description: "x^2 + y^2 = C solves the separated equation",
        anchor: "Example 7.1.2",
        options: &[],
        expected: true,
        run: separable_712,
    },
    Scenario {
        name: "exp-properties",
        description: "exponent of sums and conjugation identities",
        anchor: "Theorems 8.2.1, 8.2.2",
        options: &[],
        expected: true,
        run: exp_properties,
    },
    Scenario {
        name: "quasiexp-demo",
        description: "quasiexponent series, special cases and dy/dx(1) = y",
        anchor: "Theorems 8.3.2, 8.3.6",
        options: &[],
        expected: true,
        run: quasiexp_demo,
    },
    Scenario {
        name: "euler-hyperbolic",
        description: "sinh and cosh from the exponent over R and the hyperbolic system",
        anchor: "Eq. (9.4.10)",
        options: &[],
        expected: true,
        run: euler_hyperbolic,
    },
    Scenario {
        name: "euler-quaternion",
        description: "sinh(tf), cosh(tf) over H: Euler split, commutation, derivatives",
        anchor: "Eq. (9.4.25)",
        options: &[],
        expected: true,
        run: euler_quaternion,
    },
    Scenario {
        name: "elliptic-nonunique",
        description: "two solutions of the elliptic H system through (0, 1)",
        anchor: "Example 9.5.1, Section 9.9",
        options: &[],
        expected: false,
        run: elliptic_nonunique,
    },
    Scenario {
        name: "elliptic-family",
        description: "three-exponential family with parameter --c",
        anchor: "Example 9.5.2",
        options: &["c"],
        expected: true,
        run: elliptic_family_scenario,
    },
    Scenario {
        name: "ode-forms-cross-check",
        description: "closed form vs RK4 for all four product forms",
        anchor: "Sections 9.3, 9.6, 9.7, 9.8",
        options: &[],
        expected: true,
        run: ode_forms,
    },
];

pub fn registry() -> &'static [Scenario] {
    REGISTRY
}

fn rng(o: &Options) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(o.seed)
}

fn quaternion() -> Algebra {
    Algebra::quaternion()
}

fn random_nonzero_matrix(alg: &Algebra, n: usize, rng: &mut ChaCha8Rng) -> BiMatrix {
    loop {
        let a = BiMatrix::random(alg, n, n, rng, 1.0);
        if a.entries().iter().all(|e| e.norm() > 0.05) {
            return a;
        }
    }
}

fn quasidet_2x2(o: &Options) -> Out {
    let alg = o.algebra_or("quaternion")?;
    let mut rng = rng(o);
    let (mut q_err, mut inv_err, mut res) = (0.0_f64, 0.0_f64, 0.0_f64);
    for _ in 0..o.probes {
        let a = random_nonzero_matrix(&alg, 2, &mut rng);
        let g = |i: usize, j: usize| a.get(i, j).clone();
        let inv = |e: Element| e.inv().expect("nonzero entry");
        let closed = [
            [
                &g(0, 0) - &(&(&g(0, 1) * &inv(g(1, 1))) * &g(1, 0)),
                &g(0, 1) - &(&(&g(0, 0) * &inv(g(1, 0))) * &g(1, 1)),
            ],
            [
                &g(1, 0) - &(&(&g(1, 1) * &inv(g(0, 1))) * &g(0, 0)),
                &g(1, 1) - &(&(&g(1, 0) * &inv(g(0, 0))) * &g(0, 1)),
            ],
        ];
        let q = quasidet_matrix(&a, Product::Rc)?;
        let b = rc_inv(&a)?;
        for i in 0..2 {
            for j in 0..2 {
                let qij = q[i][j].clone().expect("defined for nonzero entries");
                q_err = q_err.max((&qij - &closed[i][j]).norm());
                inv_err = inv_err.max((b.get(j, i) - &inv(closed[i][j].clone())).norm());
            }
        }
        let d = BiMatrix::identity(&alg, 2);
        res = res.max(a.rc_mul(&b)?.max_diff(&d));
    }
    let worst = q_err.max(inv_err).max(res);
    Ok(Report::new(worst <= 1e-9, worst)
        .metric("quasidet_error", q_err)
        .metric("inverse_error", inv_err)
        .metric("product_residual", res))
}

fn solve_system(o: &Options) -> Out {
    let alg = quaternion();
    let (one, i, j, k) = (alg.one(), alg.basis(1), alg.basis(2), alg.basis(3));
    let a = BiMatrix::diag(vec![i, j.clone()])?;
    let b = BiMatrix::column(vec![k, one])?;
    let x = solve_rc(&a, &b)?;
    let want = BiMatrix::column(vec![j.clone(), -&j])?;
    let example_err = x.max_diff(&want);
    let mut rng = rng(o);
    let mut worst = 0.0_f64;
    for _ in 0..o.probes {
        let a = BiMatrix::random(&alg, 3, 3, &mut rng, 1.0);
        let b = BiMatrix::random(&alg, 3, 1, &mut rng, 1.0);
        let x = solve_rc(&a, &b)?;
        let r = a.rc_mul(&x)?.max_diff(&b) / (1.0 + b.max_norm());
        worst = worst.max(r);
    }
    let ok = example_err <= 1e-12 && worst <= 1e-8;
    Ok(Report::new(ok, worst.max(example_err))
        .metric("example_error", example_err)
        .metric("relative_residual", worst)
        .witness(json!({ "x": [x.get(0, 0).to_string(), x.get(1, 0).to_string()] })))
}

fn rank_demo(o: &Options) -> Out {
    let alg = quaternion();
    let (i, j) = (alg.basis(1), alg.basis(2));
    let demo = BiMatrix::from_rows(vec![vec![i.clone(), i], vec![j.clone(), j]])?;
    let info = rc_rank(&demo);
    let mut mismatches = usize::from(info.rank != 1);
    let mut bordered = info.max_bordered();
    let mut dependency = 0.0_f64;
    for (_, lambda) in &info.dependencies {
        dependency = dependency.max(lambda.rc_mul(&demo)?.max_norm());
    }
    let mut rng = rng(o);
    for n in 0..o.probes {
        let r = 1 + n % 2;
        let u = BiMatrix::random(&alg, 3, r, &mut rng, 1.0);
        let v = BiMatrix::random(&alg, r, 3, &mut rng, 1.0);
        let a = u.rc_mul(&v)?;
        let info = rc_rank(&a);
        mismatches += usize::from(info.rank != r);
        bordered = bordered.max(info.max_bordered());
        for (_, lambda) in &info.dependencies {
            dependency = dependency.max(lambda.rc_mul(&a)?.max_norm());
        }
    }
    let ok = mismatches == 0 && bordered <= 1e-8 && dependency <= 1e-8;
    Ok(Report::new(ok, bordered.max(dependency))
        .metric("rank_mismatches", mismatches as f64)
        .metric("max_bordered", bordered)
        .metric("max_dependency_residual", dependency)
        .witness(json!({ "demo_rank": info.rank, "major": info.major })))
}

fn offdiag(f: &Element) -> Result<BiMatrix, CliError> {
    let z = f.algebra().zero();
    Ok(BiMatrix::from_rows(vec![
        vec![z.clone(), f.clone()],
        vec![f.clone(), z],
    ])?)
}

fn eigen_demo(o: &Options) -> Out {
    let alg = quaternion();
    let ts = [0.0, 0.5, 1.0, 2.0];
    let mut non_singular = 0usize;
    let mut worst = 0.0_f64;
    for text in ["1", "i", "1 + j"] {
        let f = alg.parse(text)?;
        let a = offdiag(&f)?;
        let roots = eigen_offdiag(&f)?;
        for (b, sign) in roots.iter().zip([1.0, -1.0]) {
            let shifted = a.sub(&BiMatrix::identity(&alg, 2).left_scale(b))?;
            non_singular += usize::from(!is_rc_singular(&shifted));
            let init = vec![alg.one(), alg.scalar(sign)];
            let ode = LinearOde::new(a.clone(), OdeForm::RcLeft, init)?;
            let r = eigen_solution_check(&ode, b, Side::Left, &ts, &o.series);
            worst = worst.max(r.residual);
        }
    }
    let ok = non_singular == 0 && worst <= 1e-6;
    Ok(Report::new(ok, worst)
        .metric("nonsingular_shifts", non_singular as f64)
        .metric("max_solution_residual", worst))
}

fn sandwich_form(alg: &Algebra, scale: f64, gaps: &[&[Gap]]) -> Result<FormPoly, CliError> {
    let mut g = FormPoly::zero(alg);
    for w in gaps {
        let mut coeffs = vec![alg.one(); w.len() + 1];
        coeffs[0] = alg.scalar(scale);
        g = g.with_word(coeffs, w.to_vec())?;
    }
    Ok(g)
}

fn integrability_x2(o: &Options) -> Out {
    let alg = o.algebra_or("quaternion")?;
    let g = sandwich_form(&alg, 1.0, &[&[Gap::X, Gap::Arg(0)], &[Gap::Arg(0), Gap::X]])?;
    Ok(integrability_check(&g, o.probes, o.seed))
}

fn integrability_3xx(o: &Options) -> Out {
    let alg = o.algebra_or("quaternion")?;
    let g = sandwich_form(&alg, 3.0, &[&[Gap::X, Gap::Arg(0), Gap::X]])?;
    Ok(integrability_check(&g, o.probes, o.seed))
}

fn exact_723(o: &Options) -> Out {
    use Factor::{D, X, Y};
    let alg = quaternion();
    let m = BiForm::words(&alg, vec![vec![D], vec![D, Y]])?;
    let n = BiForm::words(&alg, vec![vec![X, D], vec![D]])?;
    let ex = exactness_check(&m, &n, o.probes, o.seed);
    let u = |x: &Element, y: &Element| &(x + &(x * y)) + y;
    let sol = implicit_solution_check(u, &m, &n, o.probes, o.seed);
    Ok(
        Report::new(ex.verdict && sol.verdict, ex.residual.max(sol.residual))
            .metric("exactness_violation", ex.residual)
            .metric("potential_residual", sol.residual),
    )
}

fn exact_724(o: &Options) -> Out {
    use Factor::{Const, D, X, Y};
    let alg = quaternion();
    let m = BiForm::words(
        &alg,
        vec![vec![Const(alg.scalar(3.0)), X, X, D], vec![D, Y]],
    )?;
    let n = BiForm::words(&alg, vec![vec![X, D]])?;
    Ok(exactness_check(&m, &n, o.probes, o.seed))
}

fn exact_725(o: &Options) -> Out {
    use Factor::{D, X, Y};
    let alg = quaternion();
    let m = BiForm::words(&alg, vec![vec![D, Y]])?;
    let n = BiForm::words(&alg, vec![vec![D, X]])?;
    Ok(exactness_check(&m, &n, o.probes, o.seed))
}

fn separable_712(o: &Options) -> Out {
    use Factor::{D, X, Y};
    let alg = quaternion();
    let m = BiForm::words(&alg, vec![vec![D, X], vec![X, D]])?;
    let n = BiForm::words(&alg, vec![vec![D, Y], vec![Y, D]])?;
    let u = |x: &Element, y: &Element| &(x * x) + &(y * y);
    Ok(implicit_solution_check(u, &m, &n, o.probes, o.seed))
}

fn exp_properties(o: &Options) -> Out {
    let alg = quaternion();
    let p = &o.series;
    let mut rng = rng(o);
    let (mut commuting, mut conj) = (0.0_f64, 0.0_f64);
    for _ in 0..o.probes {
        let a = alg.random_element(&mut rng, 1.0);
        let b = &a.scale(-0.7) + &alg.scalar(0.3);
        let lhs = exp_el(&(&a + &b), p)?;
        let rhs = &exp_el(&a, p)? * &exp_el(&b, p)?;
        commuting = commuting.max((&lhs - &rhs).norm());
        let x = alg.random_element(&mut rng, 1.0);
        let l = &a * &exp_el(&(&x * &a), p)?;
        let r = &exp_el(&(&a * &x), p)? * &a;
        conj = conj.max((&l - &r).norm());
    }
    let (i, j) = (alg.basis(1), alg.basis(2));
    let gap = (&exp_el(&(&i + &j), p)? - &(&exp_el(&i, p)? * &exp_el(&j, p)?)).norm();
    let ok = commuting <= 1e-10 && conj <= 1e-10 && gap > 1e-3;
    Ok(Report::new(ok, commuting.max(conj))
        .metric("commuting_sum_error", commuting)
        .metric("noncommuting_gap", gap)
        .metric("conjugation_error", conj))
}

fn quasiexp_demo(o: &Options) -> Out {
    let alg = quaternion();
    let p = &o.series;
    let mut rng = rng(o);
    let (mut zero_err, mut central_err, mut ode_err, mut series_err) =
        (0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64);
    for _ in 0..o.probes {
        let c = alg.random_element(&mut rng, 1.0);
        let x = alg.random_element(&mut rng, 1.0);
        zero_err = zero_err.max((&quasiexp(std::slice::from_ref(&c), &alg.zero(), p)? - &c).norm());
        let s = alg.scalar(c.re());
        let central =
            (&quasiexp(std::slice::from_ref(&s), &x, p)? - &(&s * &exp_el(&x, p)?)).norm();
        central_err = central_err.max(central);
        let y = |x: &Element| quasiexp(std::slice::from_ref(&c), x, p).expect("series converges");
        ode_err = ode_err.max((&fd::directional(y, &x, &alg.one()) - &y(&x)).norm());
        let mut fact = 1.0;
        for degree in 1..=5 {
            fact *= degree as f64;
            let words = Tensor::power(&alg, degree)
                .derivative(1)
                .eval(std::slice::from_ref(&c), &x)?
                .scale(1.0 / fact);
            series_err = series_err
                .max((&quasiexp_degree(std::slice::from_ref(&c), &x, degree)? - &words).norm());
        }
    }
    let ok = zero_err <= 1e-14 && central_err <= 1e-10 && ode_err <= 1e-6 && series_err <= 1e-12;
    Ok(Report::new(ok, ode_err)
        .metric("value_at_zero_error", zero_err)
        .metric("central_factor_error", central_err)
        .metric("derivative_along_one_error", ode_err)
        .metric("degree_term_error", series_err))
}

const EULER_TS: [f64; 4] = [0.1, 0.5, 1.0, 2.0];

fn euler_hyperbolic(o: &Options) -> Out {
    let r = Algebra::real();
    let p = &o.series;
    let mut worst = 0.0_f64;
    for t in EULER_TS {
        let x = r.scalar(t);
        let e = exp_el(&x, p)?;
        let em = exp_el(&-&x, p)?;
        let sh = sinh_el(&x, p)?;
        let ch = cosh_el(&x, p)?;
        worst = worst.max((&sh - &(&e - &em).scale(0.5)).norm());
        worst = worst.max((&ch - &(&e + &em).scale(0.5)).norm());
        worst = worst
            .max((sh.re() - t.sinh()).abs())
            .max((ch.re() - t.cosh()).abs());
    }
    let a = BiMatrix::from_reals(&r, &[&[0.0, 1.0], &[1.0, 0.0]])?;
    let ode = LinearOde::new(a, OdeForm::RcLeft, vec![r.zero(), r.one()])?;
    let curve = closed_form_solution(&ode, p);
    let mut ode_err = 0.0_f64;
    for t in EULER_TS {
        let x = curve.at(t)?;
        ode_err = ode_err.max(
            (x[0].re() - t.sinh())
                .abs()
                .max((x[1].re() - t.cosh()).abs()),
        );
    }
    let max_error = worst.max(ode_err);
    Ok(Report::new(max_error <= 1e-10, max_error)
        .metric("max_error", max_error)
        .metric("euler_error", worst)
        .metric("ode_error", ode_err))
}

fn euler_quaternion(o: &Options) -> Out {
    let alg = quaternion();
    let p = &o.series;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let fs = [
        alg.basis(1),
        alg.element(&[0.0, s, s, 0.0])?,
        alg.basis(3).scale(2.0),
    ];
    let (mut euler, mut comm, mut deriv) = (0.0_f64, 0.0_f64, 0.0_f64);
    for f in &fs {
        let sh = |t: f64| sinh_el(&f.scale(t), p).expect("series converges");
        let ch = |t: f64| cosh_el(&f.scale(t), p).expect("series converges");
        for t in EULER_TS {
            let e = exp_at(f, t, p)?;
            let em = exp_at(f, -t, p)?;
            euler = euler.max((&sh(t) - &(&e - &em).scale(0.5)).norm());
            euler = euler.max((&ch(t) - &(&e + &em).scale(0.5)).norm());
            comm = comm.max((&(&sh(t) * f) - &(f * &sh(t))).norm());
            comm = comm.max((&(&ch(t) * f) - &(f * &ch(t))).norm());
            deriv = deriv.max((&fd::time(sh, t) - &(f * &ch(t))).norm());
            deriv = deriv.max((&fd::time(ch, t) - &(f * &sh(t))).norm());
        }
    }
    let ok = euler <= 1e-10 && comm <= 1e-10 && deriv <= 1e-6;
    Ok(Report::new(ok, euler.max(comm))
        .metric("euler_error", euler)
        .metric("commutation_error", comm)
        .metric("derivative_error", deriv))
}

const ODE_TS: [f64; 4] = [0.0, 0.5, 1.0, 1.5];

fn elliptic_nonunique(o: &Options) -> Out {
    let ode = elliptic_ode();
    let rk = rk4_integrate(&ode, 2.0, 20_000)?;
    let ex = example_951_curve(&o.series);
    let rk_res = solution_residual(&ode, &rk, &ODE_TS);
    let ex_res = solution_residual(&ode, &ex, &ODE_TS);
    let distance = state_distance(&rk.at(1.0)?, &ex.at(1.0)?);
    let init_gap = rk_res.metrics["initial_gap"].max(ex_res.metrics["initial_gap"]);
    let ok = rk_res.verdict && ex_res.verdict && init_gap == 0.0 && distance > 0.1;
    let mut r = Report::new(ok, rk_res.residual.max(ex_res.residual))
        .metric("rk4_residual", rk_res.residual)
        .metric("example_residual", ex_res.residual)
        .metric("initial_gap", init_gap)
        .metric("distance_at_1", distance)
        .witness(json!({
            "rk4_at_1": rk.at(1.0)?.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "example_at_1": ex.at(1.0)?.iter().map(ToString::to_string).collect::<Vec<_>>(),
        }));
    if distance <= 0.1 {
        r = r.note(
            "both curves solve the system from (0, 1) but coincide: (-i+j)(i-j) = 2, \
             so the example curve is exactly (sin t, cos t)",
        );
    }
    Ok(r)
}

fn elliptic_family_scenario(o: &Options) -> Out {
    let alg = quaternion();
    let c = alg.parse(o.c.as_deref().unwrap_or("1"))?;
    let ode = elliptic_ode();
    let fam = elliptic_family(&c, &o.series)?;
    let res = solution_residual(&ode, &fam, &ODE_TS);
    let sc = SolutionCurve::user(move |t: f64| vec![alg.scalar(t.sin()), alg.scalar(t.cos())]);
    let distance = state_distance(&fam.at(1.0)?, &sc.at(1.0)?);
    let init_gap = res.metrics["initial_gap"];
    Ok(Report::new(res.verdict && init_gap <= 1e-12, res.residual)
        .metric("initial_gap", init_gap)
        .metric("distance_from_sin_cos_at_1", distance)
        .witness(json!({ "c": c.to_string() })))
}

fn ode_forms(o: &Options) -> Out {
    let alg = quaternion();
    let mut rng = rng(o);
    let ts: Vec<f64> = (0..=10).map(|k| k as f64 / 10.0).collect();
    let (mut diff, mut res) = (0.0_f64, 0.0_f64);
    let per_form = o.probes.clamp(1, 20);
    for form in OdeForm::ALL {
        for _ in 0..per_form {
            let a = BiMatrix::random(&alg, 2, 2, &mut rng, 0.5);
            let init = vec![
                alg.random_element(&mut rng, 1.0),
                alg.random_element(&mut rng, 1.0),
            ];
            let ode = LinearOde::new(a, form, init)?;
            let cf = closed_form_solution(&ode, &o.series);
            let rk = rk4_integrate(&ode, 1.0, 10_000)?;
            diff = diff.max(curve_distance(&cf, &rk, &ts)?);
            res = res.max(solution_residual(&ode, &cf, &ts).residual);
        }
    }
    Ok(Report::new(diff <= 1e-6 && res <= 1e-6, diff.max(res))
        .metric("closed_form_vs_rk4", diff)
        .metric("closed_form_residual", res)
        .metric("systems", (per_form * 4) as f64))
}
