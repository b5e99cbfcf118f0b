use ncalc::biring::{eigen_offdiag, is_rc_singular, verify_eigen_rc};
use ncalc::diffeq::{
    closed_form_solution, curve_distance, eigen_solution_check, elliptic_family, elliptic_ode,
    example_951_curve, rk4_integrate, solution_residual, successive_powers, LinearOde, OdeForm,
    Side, SolutionCurve,
};
use ncalc::{Algebra, BiMatrix, SeriesParams};

const TS: [f64; 5] = [0.0, 0.3, 0.7, 1.0, 1.6];

fn offdiag(f: &ncalc::Element) -> BiMatrix {
    let z = f.algebra().zero();
    BiMatrix::from_rows(vec![vec![z.clone(), f.clone()], vec![f.clone(), z]]).unwrap()
}

#[test]
fn offdiag_roots_make_shifted_matrix_singular() {
    let alg = Algebra::quaternion();
    for text in ["1", "i", "1 + j", "0.5 - k"] {
        let f = alg.parse(text).unwrap();
        let a = offdiag(&f);
        for (b, s) in eigen_offdiag(&f).unwrap().iter().zip([1.0, -1.0]) {
            let shifted = a.sub(&BiMatrix::identity(&alg, 2).left_scale(b)).unwrap();
            assert!(is_rc_singular(&shifted));
            let v = BiMatrix::column(vec![alg.one(), alg.scalar(s)]).unwrap();
            assert!(verify_eigen_rc(&a, b, &v).unwrap().verdict);
        }
    }
}

#[test]
fn eigen_curves_follow_centralizer_conditions() {
    let alg = Algebra::quaternion();
    let p = SeriesParams::default();
    let f = alg.parse("i").unwrap();
    let ode = LinearOde::new(offdiag(&f), OdeForm::RcLeft, vec![alg.one(), alg.one()]).unwrap();
    let ok = eigen_solution_check(&ode, &f, Side::Left, &TS, &p);
    assert!(ok.verdict);
    assert_eq!(ok.metrics["a_in_centralizer"], 1.0);

    // (j, j) is not carried along by e^{it} on the right: j anticommutes with i.
    let j = alg.parse("j").unwrap();
    let ode = LinearOde::new(offdiag(&f), OdeForm::RcLeft, vec![j.clone(), j]).unwrap();
    let r = eigen_solution_check(&ode, &f, Side::Right, &TS, &p);
    assert!(!r.verdict);
    assert_eq!(r.metrics["c_in_centralizer"], 0.0);

    // Neither a nor c commutes with b.
    let a = offdiag(&alg.parse("j").unwrap());
    let ode = LinearOde::new(a, OdeForm::RcLeft, vec![alg.parse("k").unwrap(), alg.one()]).unwrap();
    let r = eigen_solution_check(&ode, &f, Side::Left, &TS, &p);
    assert!(!r.verdict);
    assert!(r.notes.iter().any(|n| n.contains("conditions not met")));
}

#[test]
fn closed_form_matches_power_series_and_rk4() {
    let alg = Algebra::quaternion();
    let p = SeriesParams::default();
    let a = BiMatrix::from_rows(vec![
        vec![alg.parse("0.2 + i").unwrap(), alg.parse("j").unwrap()],
        vec![alg.parse("-k").unwrap(), alg.parse("0.1 - 0.5j").unwrap()],
    ])
    .unwrap();
    let init = vec![alg.parse("1 + k").unwrap(), alg.parse("i").unwrap()];
    for form in OdeForm::ALL {
        let ode = LinearOde::new(a.clone(), form, init.clone()).unwrap();
        let cf = closed_form_solution(&ode, &p);
        assert!(solution_residual(&ode, &cf, &TS).verdict);
        let rk = rk4_integrate(&ode, 2.0, 20_000).unwrap();
        assert!(
            curve_distance(&cf, &rk, &TS).unwrap() <= 1e-6,
            "{}",
            form.name()
        );
        let d = successive_powers(&ode, 2);
        assert!(d[1].approx_eq(&a, 0.0));
        assert!(d[2].approx_eq(&form.product().apply(&a, &a).unwrap(), 1e-12));
    }
}

#[test]
fn elliptic_system_solutions_coincide() {
    let alg = Algebra::quaternion();
    let p = SeriesParams::default();
    let ode = elliptic_ode();
    let sc = SolutionCurve::user(move |t| vec![alg.scalar(t.sin()), alg.scalar(t.cos())]);
    let ex = example_951_curve(&p);
    assert!(solution_residual(&ode, &ex, &TS).verdict);
    assert!(curve_distance(&ex, &sc, &TS).unwrap() <= 1e-12);
    let h = Algebra::quaternion();
    for c in ["0", "1", "i", "2 - j + 0.5k"] {
        let fam = elliptic_family(&h.parse(c).unwrap(), &p).unwrap();
        assert!(solution_residual(&ode, &fam, &TS).verdict, "C = {c}");
        assert_eq!(fam.at(0.0).unwrap(), ode.init());
        assert!(curve_distance(&fam, &sc, &TS).unwrap() <= 1e-12, "C = {c}");
    }
}
