//! Acceptance gate for the whole crate: one test per headline guarantee,
//! each printing a single PASS line on success. Tolerances here are the
//! contract; the unit tests inside the modules go further but nothing here
//! may be loosened.

use ndarray::{Array1, Array2};
use num_rational::BigRational;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use spinqec::codes::{
    alt_qutrit_distance5, build_multiqudit_code, build_xyz_code, build_z_code, coeff_distance5,
    perturbed_qutrit_code, CodeFamily,
};
use spinqec::kl::{
    ladder_identity_residual, verify_full_kl, verify_ladder_identity, verify_z_kl, ErrorSet,
    KlMode,
};
use spinqec::pulse::{default_input_levels, synthesize_decoder, synthesize_encoder};
use spinqec::resources::{emit_comparison, qudit_dim};
use spinqec::sim::{
    advantage_window, crossover_grid, dephasing_channel, fit_log_slope, lindblad_rk4, log_grid,
    sweep_gain, sweep_gates,
};
use spinqec::spin::{rat, Amplitude, HalfInt, SpinOperator, SpinSpace, C64};

/// One mirror pair of a codeword: positive level as 2m, then the shared
/// squared amplitude p/q exactly as printed in the reference tables.
type Pair = (i32, i64, i64);

/// Asserts a family against its table: levels are the tabulated 2m values
/// times `stretch`, repeated over `sites` identical spins, with the exact
/// amplitude on both mirror partners. Zero tolerance; amplitudes compare as
/// reduced rationals.
fn assert_family(code: &CodeFamily, stretch: i32, sites: usize, table: &[&[Pair]]) {
    assert_eq!(code.codewords.len(), table.len(), "{}", code.describe());
    for (cw, pairs) in code.codewords.iter().zip(table) {
        assert_eq!(cw.terms.len(), 2 * pairs.len(), "codeword {} of {}", cw.label, code.describe());
        for &(twice, p, q) in *pairs {
            let amp = Amplitude::sqrt_frac(p, q);
            for sign in [-1, 1] {
                let m = HalfInt::from_twice(sign * twice * stretch);
                let tuple = vec![m; sites];
                assert_eq!(
                    cw.amplitude_at(&tuple),
                    Some(&amp),
                    "codeword {} level 2m = {} of {}",
                    cw.label,
                    sign * twice * stretch,
                    code.describe()
                );
            }
        }
    }
}

const QUTRIT_D3: &[&[Pair]] = &[
    &[(5, 10, 20)],
    &[(3, 6, 20), (7, 4, 20)],
    &[(1, 7, 20), (9, 3, 20)],
];

const QUQUART_D3: &[&[Pair]] = &[
    &[(7, 14, 28)],
    &[(5, 8, 28), (9, 6, 28)],
    &[(3, 9, 28), (11, 5, 28)],
    &[(1, 10, 28), (13, 4, 28)],
];

const QUTRIT_D5: &[&[Pair]] = &[
    &[(5, 5, 16), (15, 3, 16)],
    &[(1, 5423, 42400), (9, 7203, 42400), (11, 6517, 42400), (19, 2057, 42400)],
    &[(3, 3294, 22800), (7, 3749, 22800), (13, 2771, 22800), (17, 1586, 22800)],
];

const QUTRIT_D5_ALT: &[&[Pair]] = &[
    &[(5, 3, 10), (15, 1, 5)],
    &[(1, 1152, 9225), (9, 133, 1025), (11, 399, 2050), (19, 468, 9225)],
    &[(3, 1081, 7700), (7, 252, 1650), (13, 441, 3300), (17, 282, 3850)],
];

#[test]
fn coefficient_tables_reproduce_exactly() {
    let z31 = build_z_code(3, 1).unwrap();
    assert_eq!(z31.spin.two_s(), 9);
    assert_family(&z31, 1, 1, QUTRIT_D3);

    let z41 = build_z_code(4, 1).unwrap();
    assert_eq!(z41.spin.two_s(), 13);
    assert_family(&z41, 1, 1, QUQUART_D3);

    let z32 = build_z_code(3, 2).unwrap();
    assert_eq!(z32.spin.two_s(), 19);
    assert_family(&z32, 1, 1, QUTRIT_D5);

    let xyz31 = build_xyz_code(3, 1).unwrap();
    assert_eq!(xyz31.spin.two_s(), 29);
    assert_family(&xyz31, 3, 1, QUTRIT_D3);

    let xyz32 = build_xyz_code(3, 2).unwrap();
    assert_eq!(xyz32.spin.two_s(), 99);
    assert_family(&xyz32, 5, 1, QUTRIT_D5);

    let multi31 = build_multiqudit_code(3, 1).unwrap();
    assert_eq!((multi31.spin.two_s(), multi31.spec.n_qudits), (9, 3));
    assert_family(&multi31, 1, 3, QUTRIT_D3);

    let multi32 = build_multiqudit_code(3, 2).unwrap();
    assert_eq!((multi32.spin.two_s(), multi32.spec.n_qudits), (19, 5));
    assert_family(&multi32, 1, 5, QUTRIT_D5);

    let alt = alt_qutrit_distance5();
    assert_eq!(alt.spin.two_s(), 19);
    assert_family(&alt, 1, 1, QUTRIT_D5_ALT);

    // the closed-form coefficient polynomials specialize to the tabulated
    // instance: codeword 1 of the d = 3 distance-5 family
    let (a, b, c, d) = coeff_distance5(3, 1).unwrap();
    assert_eq!(a.square(), rat(7203, 42400));
    let mut squares: Vec<BigRational> =
        vec![a.square(), b.square(), c.square(), d.square()];
    squares.sort();
    let mut expected: Vec<BigRational> = vec![
        rat(7203, 42400),
        rat(5423, 42400),
        rat(6517, 42400),
        rat(2057, 42400),
    ];
    expected.sort();
    assert_eq!(squares, expected);

    println!("PASS coefficient tables: 8 families reproduced coefficient-for-coefficient, a1^2 = 7203/42400");
}

#[test]
fn kl_certification_sweeps_and_counterexample() {
    for d in 2..=8 {
        for t in 1..=2 {
            let code = build_z_code(d, t).unwrap();
            let report = verify_z_kl(&code, t);
            assert_eq!(report.mode, KlMode::Exact, "{}", code.describe());
            assert!(report.passed(), "{} failed exact certification", code.describe());
        }
    }
    for d in 2..=6 {
        for t in 1..=2 {
            let code = build_xyz_code(d, t).unwrap();
            let report = verify_full_kl(&code, &ErrorSet::xyz_words(t), 1e-12).unwrap();
            assert_eq!(report.mode, KlMode::Numeric, "{}", code.describe());
            assert!(report.passed(), "{} failed numeric certification", code.describe());
        }
    }

    let broken = verify_z_kl(&perturbed_qutrit_code(), 1);
    assert!(!broken.passed());
    let row = broken.moments.iter().find(|r| r.n == 2).unwrap();
    assert!(!row.equal);
    assert_eq!(row.values, vec!["25/4", "33/4", "25/4"]);

    println!("PASS certification: 14 diagonal families exact, 10 full families at 1e-12, perturbed family rejected at 33/4 vs 25/4");
}

fn random_state(rng: &mut ChaCha8Rng, dim: usize) -> Array1<C64> {
    let mut v: Array1<C64> = Array1::zeros(dim);
    for x in v.iter_mut() {
        *x = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    }
    let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    v.mapv(|c| c / norm)
}

#[test]
fn ladder_identity_holds_everywhere() {
    let families = [
        build_z_code(3, 1).unwrap(),
        build_z_code(4, 1).unwrap(),
        build_z_code(3, 2).unwrap(),
        build_xyz_code(3, 1).unwrap(),
        build_xyz_code(3, 2).unwrap(),
        alt_qutrit_distance5(),
    ];
    for code in &families {
        let report = verify_ladder_identity(code, 1e-12).unwrap();
        assert!(report.passed(), "{}", code.describe());
    }

    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for two_s in [9, 13, 19, 29, 99] {
        let space = SpinSpace::new(two_s);
        for _ in 0..100 {
            let state = random_state(&mut rng, space.dim());
            let residual = ladder_identity_residual(&space, &state);
            assert!(residual <= 1e-12, "spin {two_s}/2: residual {residual:.3e}");
        }
    }

    println!("PASS ladder identity: all tabulated codewords and 100 random states per spin space within 1e-12");
}

fn norm_diff(a: &Array1<C64>, b: &Array1<C64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

#[test]
fn pulse_round_trip_recovers_logical_states() {
    let code = build_z_code(3, 1).unwrap();
    let space = code.spin;
    let dim = space.dim();
    let inputs = default_input_levels(&code);
    let encoder = synthesize_encoder(&code, &inputs).unwrap();
    let decoder = synthesize_decoder(&code).unwrap();
    let branches = decoder.ancilla.clone().unwrap().branches;

    let basis = |m: HalfInt| {
        let mut e: Array1<C64> = Array1::zeros(dim);
        e[space.index_of(m).unwrap()] = C64::new(1.0, 0.0);
        e
    };

    // each input level must land exactly on its codeword
    for (k, cw) in code.codewords.iter().enumerate() {
        let image = encoder.apply(&basis(inputs[k])).unwrap();
        let target = cw.to_dense(&space).unwrap();
        let diff = norm_diff(&image, &target);
        assert!(diff <= 1e-12, "codeword {k}: {diff:.3e}");
    }

    let sz = SpinOperator::sz(space);
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..100 {
        let coeffs = random_state(&mut rng, 3);
        let mut psi: Array1<C64> = Array1::zeros(dim);
        for (k, c) in coeffs.iter().enumerate() {
            psi[space.index_of(inputs[k]).unwrap()] = *c;
        }
        let encoded = encoder.apply(&psi).unwrap();

        // no-error branch: decode, project onto branch 0, relabel to inputs
        let decoded = decoder.apply(&encoded).unwrap();
        let mut expected: Array1<C64> = Array1::zeros(dim);
        for (k, c) in coeffs.iter().enumerate() {
            expected[space.index_of(branches[0][k]).unwrap()] = *c;
        }
        let diff = norm_diff(&decoded, &expected);
        assert!(diff <= 1e-12, "error-free branch: {diff:.3e}");

        // injected first-order error: the S_Z image decodes into branch 1
        // with the same logical coefficients
        let mut errored = sz.apply(&encoded);
        let norm = errored.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        errored.mapv_inplace(|c| c / norm);
        let decoded_err = decoder.apply(&errored).unwrap();
        let mut expected_err: Array1<C64> = Array1::zeros(dim);
        for (k, c) in coeffs.iter().enumerate() {
            expected_err[space.index_of(branches[1][k]).unwrap()] = *c;
        }
        let diff_err = norm_diff(&decoded_err, &expected_err);
        assert!(diff_err <= 1e-12, "injected-error branch: {diff_err:.3e}");
    }

    println!("PASS pulse round trip: encoder hits all codewords and 100 random states survive both branches within 1e-12");
}

#[test]
fn error_scaling_exponents_and_gain_ordering() {
    let grid = log_grid(1e-4, 1e-2, 10);
    let d3 = sweep_gain(&build_z_code(3, 1).unwrap(), &grid).unwrap();
    let d5 = sweep_gain(&build_z_code(3, 2).unwrap(), &grid).unwrap();

    let unc: Vec<f64> = d3.iter().map(|r| r.e_uncorrected).collect();
    let cor3: Vec<f64> = d3.iter().map(|r| r.e_corrected).collect();
    let cor5: Vec<f64> = d5.iter().map(|r| r.e_corrected).collect();
    let s1 = fit_log_slope(&grid, &unc);
    let s2 = fit_log_slope(&grid, &cor3);
    let s3 = fit_log_slope(&grid, &cor5);
    assert!((s1 - 1.0).abs() <= 0.15, "uncorrected slope {s1:.3}");
    assert!((s2 - 2.0).abs() <= 0.15, "distance-3 slope {s2:.3}");
    assert!((s3 - 3.0).abs() <= 0.15, "distance-5 slope {s3:.3}");

    let mut early_points = 0;
    for (a, b) in d3.iter().zip(&d5) {
        if a.t_over_t2 <= 1e-3 * (1.0 + 1e-9) {
            assert!(
                b.gain > a.gain,
                "t/T2 = {:.3e}: distance-5 gain {:.3} not above distance-3 gain {:.3}",
                a.t_over_t2,
                b.gain,
                a.gain
            );
            early_points += 1;
        }
    }
    assert!(early_points >= 3, "too few early grid points: {early_points}");

    println!(
        "PASS scaling: slopes {s1:.3}/{s2:.3}/{s3:.3} vs 1/2/3 within 0.15, distance-5 gain above distance-3 at all {early_points} points below 1e-3"
    );
}

#[test]
fn gate_imperfection_crossover_windows() {
    let code = build_z_code(3, 1).unwrap();
    let grid = crossover_grid();
    let good = advantage_window(&sweep_gates(&code, &grid, 1e-3, 1e-4).unwrap());
    let bad = advantage_window(&sweep_gates(&code, &grid, 5e-3, 1e-4).unwrap());
    assert!(good > 0, "no advantage window at infidelity 1e-3");
    assert!(bad < good, "window did not shrink: {bad} vs {good}");

    println!("PASS crossover: {good} advantageous grid points at infidelity 1e-3, {bad} at 5e-3");
}

fn random_density(rng: &mut ChaCha8Rng, dim: usize) -> Array2<C64> {
    let mut a: Array2<C64> = Array2::zeros((dim, dim));
    for x in a.iter_mut() {
        *x = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    }
    let mut rho: Array2<C64> = Array2::zeros((dim, dim));
    for i in 0..dim {
        for j in 0..dim {
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..dim {
                acc += a[[i, k]] * a[[j, k]].conj();
            }
            rho[[i, j]] = acc;
        }
    }
    let tr: f64 = (0..dim).map(|i| rho[[i, i]].re).sum();
    rho.mapv(|c| c / tr)
}

#[test]
fn dephasing_channel_matches_the_rk4_oracle() {
    let space = SpinSpace::new(9);
    let gamma = 1.0f64;
    let collapse = [SpinOperator::sz(space).matrix().mapv(|c| c * gamma.sqrt())];
    let mut rng = ChaCha8Rng::seed_from_u64(71);
    let mut checked = 0;
    for &t in &[0.01, 0.1] {
        for _ in 0..10 {
            let rho = random_density(&mut rng, space.dim());
            let exact = dephasing_channel(&rho, &space, gamma, t);
            let integrated = lindblad_rk4(&rho, &collapse, None, t, t / 256.0).unwrap();
            let dev = exact
                .iter()
                .zip(integrated.iter())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0f64, f64::max);
            assert!(dev <= 1e-8, "γt = {t}: deviation {dev:.3e}");
            checked += 1;
        }
    }
    assert_eq!(checked, 20);

    println!("PASS channel oracle: analytic dephasing within 1e-8 of RK4 on 20 random density matrices");
}

#[test]
fn resource_dimensions_and_separation_trend() {
    assert_eq!(qudit_dim(3, 1).unwrap(), 30);
    assert_eq!(qudit_dim(3, 2).unwrap(), 100);
    for d in 2..=6 {
        for t in 1..=2 {
            let code = build_xyz_code(d, t).unwrap();
            assert_eq!(
                qudit_dim(d, t).unwrap(),
                u64::from(code.spin.two_s()) + 1,
                "d = {d}, t = {t}"
            );
        }
    }

    let d_values: Vec<u32> = (2..=8).collect();
    let rows = emit_comparison(&d_values, &[3], None).unwrap();
    for pair in rows.windows(2) {
        assert!(
            pair[1].log2_separation() > pair[0].log2_separation(),
            "separation fell from d = {} to d = {}",
            pair[0].d,
            pair[1].d
        );
    }

    println!("PASS resources: dims 30/100 confirmed, formula matches every builder spin, qubit-over-qudit separation strictly grows over d = 2..8");
}
