//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any outcome differs from the recorded expectation.

use std::process::ExitCode;
use std::time::Instant;

use nalgebra::{Complex, DMatrix};
use ncalc::biring::{cr_inv, quasidet_cr, quasidet_matrix, quasidet_rc, rc_inv, rc_rank};
use ncalc::diffeq::{
    closed_form_solution, curve_distance, elliptic_family, elliptic_ode, exactness_check,
    example_951_curve, fd, implicit_solution_check, integrability_check, rk4_integrate,
    sample_antiderivative, solution_residual, state_distance, BiForm, Factor, FormPoly, LinearOde,
    OdeForm,
};
use ncalc::series::{cosh_el, exp_at, exp_el, quasiexp, sinh_el};
use ncalc::tensor::{slot_tensors_agree, so_set, Gap, SlotTensor, Tensor};
use ncalc::{Algebra, BiMatrix, Element, Product, SeriesParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn p() -> SeriesParams {
    SeriesParams::default()
}

fn one_word(alg: &Algebra, gaps: Vec<Gap>) -> SlotTensor {
    SlotTensor::word(vec![alg.one(); gaps.len() + 1], gaps).unwrap()
}

fn sandwich(alg: &Algebra, scale: f64, words: &[&[Gap]]) -> FormPoly {
    let mut g = FormPoly::zero(alg);
    for w in words {
        let mut coeffs = vec![alg.one(); w.len() + 1];
        coeffs[0] = alg.scalar(scale);
        g = g.with_word(coeffs, w.to_vec()).unwrap();
    }
    g
}

fn to_complex(e: &Element) -> Complex<f64> {
    let c = e.coeffs();
    Complex::new(c[0], c.get(1).copied().unwrap_or(0.0))
}

fn classical(a: &BiMatrix) -> DMatrix<Complex<f64>> {
    DMatrix::from_fn(a.rows(), a.cols(), |i, j| to_complex(a.get(i, j)))
}

// 1
fn quasidet_closed_forms() -> Outcome {
    let mut rng = rng(1);
    let (mut closed_err, mut inv_err, mut classical_err) = (0.0_f64, 0.0_f64, 0.0_f64);
    for alg in [Algebra::real(), Algebra::complex(), Algebra::quaternion()] {
        let mut done = 0;
        while done < 200 {
            let a = BiMatrix::random(&alg, 2, 2, &mut rng, 1.0);
            if a.entries().iter().any(|e| e.norm() < 0.1) {
                continue;
            }
            let g = |i: usize, j: usize| a.get(i, j).clone();
            let inv = |e: &Element| e.inv().unwrap();
            let closed = [
                [
                    &g(0, 0) - &(&(&g(0, 1) * &inv(&g(1, 1))) * &g(1, 0)),
                    &g(0, 1) - &(&(&g(0, 0) * &inv(&g(1, 0))) * &g(1, 1)),
                ],
                [
                    &g(1, 0) - &(&(&g(1, 1) * &inv(&g(0, 1))) * &g(0, 0)),
                    &g(1, 1) - &(&(&g(1, 0) * &inv(&g(0, 0))) * &g(0, 1)),
                ],
            ];
            if closed.iter().flatten().any(|q| q.norm() < 0.05) {
                continue;
            }
            done += 1;
            let q = quasidet_matrix(&a, Product::Rc).unwrap();
            let b = rc_inv(&a).unwrap();
            for i in 0..2 {
                for j in 0..2 {
                    let qij = q[i][j].as_ref().unwrap();
                    let scale = 1.0 + closed[i][j].norm();
                    closed_err = closed_err.max((qij - &closed[i][j]).norm() / scale);
                    let want = inv(&closed[i][j]);
                    inv_err = inv_err.max((b.get(j, i) - &want).norm() / (1.0 + want.norm()));
                }
            }
            if alg.dim() <= 2 {
                let c = classical(&a).try_inverse().unwrap();
                for i in 0..2 {
                    for j in 0..2 {
                        let d = (to_complex(b.get(i, j)) - c[(i, j)]).norm();
                        classical_err = classical_err.max(d);
                    }
                }
            }
        }
    }
    let pass = closed_err <= 1e-9 && inv_err <= 1e-9 && classical_err <= 1e-9;
    outcome(
        pass,
        format!(
            "600 matrices over R, C, H; closed form {closed_err:.1e}, inverse {inv_err:.1e}, \
             classical inverse {classical_err:.1e} (tol 1e-9)"
        ),
    )
}

// 2
fn duality_suite() -> Outcome {
    let alg = Algebra::quaternion();
    let mut rng = rng(2);
    let mut worst = [0.0_f64; 5];
    for m in 0..100 {
        let n = 2 + m % 2;
        let a = BiMatrix::random(&alg, n, n, &mut rng, 1.0);
        let b = BiMatrix::random(&alg, n, n, &mut rng, 1.0);
        let (at, bt) = (a.transpose(), b.transpose());
        let d = [
            a.rc_mul(&b)
                .unwrap()
                .transpose()
                .max_diff(&at.cr_mul(&bt).unwrap()),
            a.cr_mul(&b)
                .unwrap()
                .transpose()
                .max_diff(&at.rc_mul(&bt).unwrap()),
            a.rc_pow(3)
                .unwrap()
                .transpose()
                .max_diff(&at.cr_pow(3).unwrap()),
            rc_inv(&a)
                .unwrap()
                .transpose()
                .max_diff(&cr_inv(&at).unwrap()),
            (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .map(|(i, j)| {
                    let l = quasidet_rc(&a, i, j).unwrap();
                    let r = quasidet_cr(&at, j, i).unwrap();
                    (&l - &r).norm()
                })
                .fold(0.0, f64::max),
        ];
        for (w, v) in worst.iter_mut().zip(d) {
            *w = w.max(v);
        }
    }
    let max = worst.iter().copied().fold(0.0, f64::max);
    outcome(
        max <= 1e-10,
        format!(
            "100 H matrices (2x2, 3x3); rc/cr {:.1e}, cr/rc {:.1e}, powers {:.1e}, \
             inverses {:.1e}, quasideterminants {:.1e} (tol 1e-10)",
            worst[0], worst[1], worst[2], worst[3], worst[4]
        ),
    )
}

// 3
fn tensor_engine() -> Outcome {
    let alg = Algebra::quaternion();
    let sq = Tensor::power(&alg, 2).derivative(1);
    let sq_want = one_word(&alg, vec![Gap::X, Gap::Arg(0)])
        .add(&one_word(&alg, vec![Gap::Arg(0), Gap::X]))
        .unwrap();
    let cube = Tensor::power(&alg, 3).derivative(1);
    let cube_want = one_word(&alg, vec![Gap::X, Gap::X, Gap::Arg(0)])
        .add(&one_word(&alg, vec![Gap::X, Gap::Arg(0), Gap::X]))
        .unwrap()
        .add(&one_word(&alg, vec![Gap::Arg(0), Gap::X, Gap::X]))
        .unwrap();
    let words_ok =
        slot_tensors_agree(&sq, &sq_want, 1e-12) && slot_tensors_agree(&cube, &cube_want, 1e-12);

    let mut rng = rng(3);
    let mut asym = 0.0_f64;
    for n in 2..=5 {
        for _ in 0..8 {
            let coeffs: Vec<Element> = (0..=n).map(|_| alg.random_element(&mut rng, 1.0)).collect();
            let d2 = Tensor::pure(coeffs).unwrap().derivative(2);
            let x = alg.random_element(&mut rng, 1.0);
            let h1 = alg.random_element(&mut rng, 1.0);
            let h2 = alg.random_element(&mut rng, 1.0);
            let a = d2.eval(&[h1.clone(), h2.clone()], &x).unwrap();
            let b = d2.eval(&[h2, h1], &x).unwrap();
            asym = asym.max((&a - &b).norm());
        }
    }

    let mut counts_ok = true;
    for n in 0..=7usize {
        for k in 0..=n {
            let want: usize = ((n - k + 1)..=n).product();
            counts_ok &= so_set(k, n).unwrap().len() == want;
            counts_ok &= Tensor::power(&alg, n).derivative(k).terms().len() == want;
        }
    }
    outcome(
        words_ok && asym <= 1e-9 && counts_ok,
        format!(
            "dx^2, dx^3 word match {words_ok}; second-derivative asymmetry {asym:.1e} \
             (tol 1e-9); SO(k,n) counts for n <= 7 {counts_ok}"
        ),
    )
}

// 4
fn integrability() -> Outcome {
    let h = Algebra::quaternion();
    let c = Algebra::complex();
    let x2 = |alg: &Algebra| sandwich(alg, 1.0, &[&[Gap::X, Gap::Arg(0)], &[Gap::Arg(0), Gap::X]]);
    let xx3 = |alg: &Algebra| sandwich(alg, 3.0, &[&[Gap::X, Gap::Arg(0), Gap::X]]);
    let ex2 = integrability_check(&x2(&h), 32, 4);
    let ex3h = integrability_check(&xx3(&h), 32, 4);
    let ex3c = integrability_check(&xx3(&c), 32, 4);
    let witness = ex3h
        .witness
        .as_ref()
        .and_then(|w| w["violation"].as_f64())
        .unwrap_or(0.0);
    let square = sample_antiderivative(|x| x * x, &x2(&h), 32, 4);
    let cube = sample_antiderivative(|x| &(x * x) * x, &xx3(&h), 32, 4);
    let pass = ex2.verdict
        && !ex3h.verdict
        && witness > 1e-3
        && ex3c.verdict
        && square.residual <= 1e-6
        && cube.residual > 1e-2;
    outcome(
        pass,
        format!(
            "x(x)1+1(x)x integrable {}; 3x(x)x over H integrable {} (witness {witness:.2}), \
             over C {}; y = x^2 residual {:.1e}; y = x^3 residual {:.2}",
            ex2.verdict, ex3h.verdict, ex3c.verdict, square.residual, cube.residual
        ),
    )
}

// 5
fn exact_equations() -> Outcome {
    use Factor::{Const, D, X, Y};
    let alg = Algebra::quaternion();
    let w = |words| BiForm::words(&alg, words).unwrap();
    let m723 = w(vec![vec![D], vec![D, Y]]);
    let n723 = w(vec![vec![X, D], vec![D]]);
    let e723 = exactness_check(&m723, &n723, 32, 5);
    let u723 = implicit_solution_check(|x, y| &(x + &(x * y)) + y, &m723, &n723, 32, 5);
    let e724 = exactness_check(
        &w(vec![vec![Const(alg.scalar(3.0)), X, X, D], vec![D, Y]]),
        &w(vec![vec![X, D]]),
        32,
        5,
    );
    let e725 = exactness_check(&w(vec![vec![D, Y]]), &w(vec![vec![D, X]]), 32, 5);
    let m712 = w(vec![vec![D, X], vec![X, D]]);
    let n712 = w(vec![vec![D, Y], vec![Y, D]]);
    let u712 = implicit_solution_check(|x, y| &(x * x) + &(y * y), &m712, &n712, 32, 5);
    let pass = e723.verdict && u723.verdict && !e724.verdict && !e725.verdict && u712.verdict;
    outcome(
        pass,
        format!(
            "dx + dx y + x dy + dy exact {} potential {:.1e}; 3x^2 dx + dx y + x dy exact {}; \
             dx y + dy x exact {}; x^2 + y^2 potential {:.1e} (tol 1e-5)",
            e723.verdict, u723.residual, e724.verdict, e725.verdict, u712.residual
        ),
    )
}

// 6
fn exponent_properties() -> Outcome {
    let alg = Algebra::quaternion();
    let p = p();
    let mut rng = rng(6);
    let (mut sum_err, mut conj_err, mut ode_err) = (0.0_f64, 0.0_f64, 0.0_f64);
    for _ in 0..32 {
        let a = alg.random_element(&mut rng, 1.0);
        let b = &a.scale(rng.gen_range(-1.0..1.0)) + &alg.scalar(rng.gen_range(-1.0..1.0));
        let lhs = exp_el(&(&a + &b), &p).unwrap();
        let rhs = &exp_el(&a, &p).unwrap() * &exp_el(&b, &p).unwrap();
        sum_err = sum_err.max((&lhs - &rhs).norm());
        let x = alg.random_element(&mut rng, 1.0);
        let l = &a * &exp_el(&(&x * &a), &p).unwrap();
        let r = &exp_el(&(&a * &x), &p).unwrap() * &a;
        conj_err = conj_err.max((&l - &r).norm());
        let c = alg.random_element(&mut rng, 1.0);
        let y = |z: &Element| quasiexp(std::slice::from_ref(&c), z, &p).unwrap();
        ode_err = ode_err.max((&fd::directional(y, &x, &alg.one()) - &y(&x)).norm());
    }
    let (i, j) = (alg.basis(1), alg.basis(2));
    let gap = (&exp_el(&(&i + &j), &p).unwrap()
        - &(&exp_el(&i, &p).unwrap() * &exp_el(&j, &p).unwrap()))
        .norm();
    let pass = sum_err <= 1e-10 && gap > 1e-3 && conj_err <= 1e-10 && ode_err <= 1e-6;
    outcome(
        pass,
        format!(
            "commuting sums {sum_err:.1e}; e^(i+j) vs e^i e^j gap {gap:.3}; \
             a e^(xa) = e^(ax) a {conj_err:.1e}; quasiexp dy/dx(1) = y {ode_err:.1e}"
        ),
    )
}

// 7
fn euler_formulas() -> Outcome {
    let p = p();
    let ts = [0.1, 0.5, 1.0, 2.0];
    let r = Algebra::real();
    let mut real_err = 0.0_f64;
    let hyper = BiMatrix::from_reals(&r, &[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
    let ode = LinearOde::new(hyper, OdeForm::RcLeft, vec![r.zero(), r.one()]).unwrap();
    let curve = closed_form_solution(&ode, &p);
    for t in ts {
        let x = r.scalar(t);
        let (e, em) = (exp_el(&x, &p).unwrap(), exp_el(&-&x, &p).unwrap());
        let (sh, ch) = (sinh_el(&x, &p).unwrap(), cosh_el(&x, &p).unwrap());
        real_err = real_err
            .max((&sh - &(&e - &em).scale(0.5)).norm())
            .max((&ch - &(&e + &em).scale(0.5)).norm())
            .max((sh.re() - t.sinh()).abs())
            .max((ch.re() - t.cosh()).abs());
        let s = curve.at(t).unwrap();
        real_err = real_err
            .max((s[0].re() - t.sinh()).abs())
            .max((s[1].re() - t.cosh()).abs());
    }
    let h = Algebra::quaternion();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let fs = [
        h.basis(1),
        h.element(&[0.0, s, s, 0.0]).unwrap(),
        h.basis(3).scale(2.0),
    ];
    let (mut euler, mut comm) = (0.0_f64, 0.0_f64);
    for f in &fs {
        for t in ts {
            let (e, em) = (exp_at(f, t, &p).unwrap(), exp_at(f, -t, &p).unwrap());
            let sh = sinh_el(&f.scale(t), &p).unwrap();
            let ch = cosh_el(&f.scale(t), &p).unwrap();
            euler = euler
                .max((&sh - &(&e - &em).scale(0.5)).norm())
                .max((&ch - &(&e + &em).scale(0.5)).norm());
            comm = comm
                .max(sh.commutator(f).norm())
                .max(ch.commutator(f).norm());
        }
    }
    let pass = real_err <= 1e-10 && euler <= 1e-10 && comm <= 1e-10;
    outcome(
        pass,
        format!("over R {real_err:.1e}; over H {euler:.1e}; commutation {comm:.1e} (tol 1e-10)"),
    )
}

// 8
fn ode_cross_check() -> Outcome {
    let alg = Algebra::quaternion();
    let p = p();
    let mut rng = rng(8);
    let ts: Vec<f64> = (0..=10).map(|k| k as f64 / 10.0).collect();
    let (mut diff, mut res) = (0.0_f64, 0.0_f64);
    for form in OdeForm::ALL {
        for _ in 0..20 {
            let a = BiMatrix::random(&alg, 2, 2, &mut rng, 1.0);
            let init = vec![
                alg.random_element(&mut rng, 1.0),
                alg.random_element(&mut rng, 1.0),
            ];
            let ode = LinearOde::new(a, form, init).unwrap();
            let cf = closed_form_solution(&ode, &p);
            let rk = rk4_integrate(&ode, 1.0, 10_000).unwrap();
            diff = diff.max(curve_distance(&cf, &rk, &ts).unwrap());
            res = res.max(solution_residual(&ode, &cf, &ts).residual);
        }
    }
    outcome(
        diff <= 1e-6 && res <= 1e-6,
        format!("80 systems; closed form vs RK4 {diff:.1e}; residual {res:.1e} (tol 1e-6)"),
    )
}

// 9: residual parts and the separation at t = 1 are reported apart.
fn non_uniqueness() -> (Outcome, Outcome) {
    let p = p();
    let ode = elliptic_ode();
    let ts = [0.0, 0.25, 0.5, 1.0, 1.5];
    let rk = rk4_integrate(&ode, 2.0, 20_000).unwrap();
    let ex = example_951_curve(&p);
    let rk_res = solution_residual(&ode, &rk, &ts).residual;
    let ex_res = solution_residual(&ode, &ex, &ts).residual;
    let exact_init = rk.at(0.0).unwrap() == ode.init() && ex.at(0.0).unwrap() == ode.init();
    let h = Algebra::quaternion();
    let mut fam_res = 0.0_f64;
    for c in [h.zero(), h.one(), h.basis(1)] {
        let fam = elliptic_family(&c, &p).unwrap();
        fam_res = fam_res.max(solution_residual(&ode, &fam, &ts).residual);
    }
    let solved = outcome(
        rk_res <= 1e-6 && ex_res <= 1e-6 && exact_init && fam_res <= 1e-6,
        format!(
            "RK4 residual {rk_res:.1e}, example residual {ex_res:.1e}, exact initial value \
             {exact_init}, family residual for C in {{0, 1, i}} {fam_res:.1e} (tol 1e-6)"
        ),
    );
    let d = state_distance(&rk.at(1.0).unwrap(), &ex.at(1.0).unwrap());
    let separated = outcome(
        d > 0.1,
        format!("distance between the two curves at t = 1 is {d:.1e} (need > 0.1)"),
    );
    (solved, separated)
}

// 10
fn rank_singularity() -> Outcome {
    let h = Algebra::quaternion();
    let mut rng = rng(10);
    let (mut bordered, mut wrong) = (0.0_f64, 0usize);
    for m in 0..50 {
        let r = 1 + m % 2;
        let u = BiMatrix::random(&h, 3, r, &mut rng, 1.0);
        let v = BiMatrix::random(&h, r, 3, &mut rng, 1.0);
        let info = rc_rank(&u.rc_mul(&v).unwrap());
        wrong += usize::from(info.rank != r);
        bordered = bordered.max(info.max_bordered());
    }
    let mut classical_wrong = 0usize;
    for m in 0..50 {
        let alg = if m % 2 == 0 {
            Algebra::real()
        } else {
            Algebra::complex()
        };
        let (rows, cols) = [(2, 2), (3, 3), (3, 4), (4, 3)][m % 4];
        let r = 1 + rng.gen_range(0..rows.min(cols));
        let u = BiMatrix::random(&alg, rows, r, &mut rng, 1.0);
        let v = BiMatrix::random(&alg, r, cols, &mut rng, 1.0);
        let a = u.rc_mul(&v).unwrap();
        let want = classical(&a).svd(false, false).rank(1e-9);
        classical_wrong += usize::from(rc_rank(&a).rank != want);
    }
    outcome(
        bordered <= 1e-8 && wrong == 0 && classical_wrong == 0,
        format!(
            "50 H rank-1/rank-2 3x3: max bordered {bordered:.1e} (tol 1e-8), rank mismatches \
             {wrong}; 50 R/C matrices vs SVD rank: mismatches {classical_wrong}"
        ),
    )
}

fn main() -> ExitCode {
    let start = Instant::now();
    let (solved, separated) = non_uniqueness();
    // (label, outcome, expected pass)
    let rows: Vec<(&str, Outcome, bool)> = vec![
        ("1", quasidet_closed_forms(), true),
        ("2", duality_suite(), true),
        ("3", tensor_engine(), true),
        ("4", integrability(), true),
        ("5", exact_equations(), true),
        ("6", exponent_properties(), true),
        ("7", euler_formulas(), true),
        ("8", ode_cross_check(), true),
        ("9 (solutions)", solved, true),
        ("9 (non-uniqueness)", separated, false),
        ("10", rank_singularity(), true),
    ];
    let mut unexpected = 0;
    for (label, o, expected) in &rows {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        let known = if !o.pass && !expected {
            " [known: the example curve equals (sin t, cos t)]"
        } else {
            ""
        };
        println!("{tag} criterion {label}: {}{known}", o.detail);
        if o.pass != *expected {
            unexpected += 1;
        }
    }
    println!(
        "acceptance: {} of {} pass, {unexpected} unexpected, {:.1}s",
        rows.iter().filter(|r| r.1.pass).count(),
        rows.len(),
        start.elapsed().as_secs_f64()
    );
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
