use approx::assert_abs_diff_eq;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use proptest::prelude::*;
use qbarcode::statecloud::{
    build_cloud, build_ssh_hamiltonian, expectation, ground_state, ground_states, phi_map, random_phase_unitary,
    random_unitary, ssh_observables, trace_distance, DegeneracyPolicy, DensityMatrix, HermitianMatrix, Model,
    QuantumState, StateCloud, DEFAULT_GAP_TOL,
};
use qbarcode::Error;

/// Ground state of the hopping chain (a, b, a) on four sites. The lowest
/// level lies in the reflection-odd sector (x, y, -y, -x) with
/// `E = -(b + sqrt(b^2 + 4a^2)) / 2` and `y = E x / a`.
fn four_site_oracle(lambda: f64) -> (f64, [f64; 4]) {
    let a = 1.0 - lambda;
    let b = 1.0 + lambda;
    let e = -(b + (b * b + 4.0 * a * a).sqrt()) / 2.0;
    let (x, y) = (a, e);
    let norm = (2.0 * (x * x + y * y)).sqrt();
    let (x, y) = (x / norm, y / norm);
    (e, [x, y, -y, -x])
}

fn oracle_phi(lambda: f64) -> Vec<f64> {
    let (_, [x, y, _, _]) = four_site_oracle(lambda);
    vec![x * x, y * y, y * y, x * x, 2.0 * x * y, 0.0, -2.0 * y * y, 0.0, 2.0 * x * y, 0.0]
}

fn grid() -> Vec<f64> {
    (0..21).map(|i| -1.0 + 0.1 * i as f64).collect()
}

#[test]
fn ground_state_matches_closed_form() {
    for &lambda in &[-0.9, -0.5, -0.2, 0.0, 0.3, 0.5, 0.95] {
        let h = build_ssh_hamiltonian(lambda, 1.0, 1.0, 4).unwrap();
        let psi = ground_state(&h, DEFAULT_GAP_TOL).unwrap();
        let (e, v) = four_site_oracle(lambda);
        assert_abs_diff_eq!(psi.energy().unwrap(), e, epsilon = 1e-12);
        for (z, want) in psi.amplitudes().iter().zip(v) {
            assert_abs_diff_eq!(z.re, want, epsilon = 1e-10);
            assert_abs_diff_eq!(z.im, 0.0, epsilon = 1e-12);
        }
    }
}

#[test]
fn golden_ratio_point() {
    let h = build_ssh_hamiltonian(0.0, 1.0, 1.0, 4).unwrap();
    let psi = ground_state(&h, DEFAULT_GAP_TOL).unwrap();
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    assert_abs_diff_eq!(psi.energy().unwrap(), -phi, epsilon = 1e-12);
    let expected = [0.3717, -0.6015, 0.6015, -0.3717];
    for (z, want) in psi.amplitudes().iter().zip(expected) {
        assert_abs_diff_eq!(z.re, want, epsilon = 1e-4);
    }
}

#[test]
fn cloud_matches_closed_form_expectations() {
    let model = Model::ssh(4);
    let cloud = build_cloud(&grid()[1..], &model, &ssh_observables(4).unwrap(), DEFAULT_GAP_TOL).unwrap();
    for (point, &lambda) in cloud.points().iter().zip(cloud.params()) {
        for (got, want) in point.iter().zip(oracle_phi(lambda)) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-10);
        }
    }
}

#[test]
fn distance_between_half_points() {
    let model = Model::ssh(4);
    let cloud = build_cloud(&[-0.5, 0.5], &model, &ssh_observables(4).unwrap(), DEFAULT_GAP_TOL).unwrap();
    let d: f64 = cloud.points()[0]
        .iter()
        .zip(&cloud.points()[1])
        .map(|(a, b)| (a - b).powi(2))
        .sum::<f64>()
        .sqrt();
    let want: f64 = oracle_phi(-0.5)
        .iter()
        .zip(oracle_phi(0.5))
        .map(|(a, b)| (a - b).powi(2))
        .sum::<f64>()
        .sqrt();
    assert_abs_diff_eq!(d, want, epsilon = 1e-10);
}

#[test]
fn reflection_symmetry_and_real_correlations() {
    let states = ground_states(&grid(), &Model::ssh(4), DEFAULT_GAP_TOL, DegeneracyPolicy::Continuation).unwrap();
    let obs = ssh_observables(4).unwrap();
    for psi in &states {
        let p = phi_map(psi, &obs).unwrap();
        assert_abs_diff_eq!(p[0], p[3], epsilon = 1e-10);
        assert_abs_diff_eq!(p[1], p[2], epsilon = 1e-10);
        for &im in &[p[5], p[7], p[9]] {
            assert!(im.abs() <= 1e-12, "{im}");
        }
    }
}

#[test]
fn dimerized_endpoint_is_degenerate() {
    let h = build_ssh_hamiltonian(-1.0, 1.0, 1.0, 4).unwrap();
    match ground_state(&h, DEFAULT_GAP_TOL) {
        Err(Error::DegenerateGroundState { .. }) => {}
        other => panic!("{other:?}"),
    }
    let strict = ground_states(&grid(), &Model::ssh(4), DEFAULT_GAP_TOL, DegeneracyPolicy::Strict);
    assert!(matches!(strict, Err(Error::DegenerateGroundState { lambda: Some(l), .. }) if l == -1.0));
}

#[test]
fn continuation_stays_in_the_ground_space() {
    let states = ground_states(&grid(), &Model::ssh(4), DEFAULT_GAP_TOL, DegeneracyPolicy::Continuation).unwrap();
    let h = build_ssh_hamiltonian(-1.0, 1.0, 1.0, 4).unwrap();
    let e0 = h.eigenvalues()[0];
    let psi = &states[0];
    let hv = h.entries() * psi.amplitudes();
    let residual = (hv - psi.amplitudes() * Complex64::new(e0, 0.0)).norm();
    assert!(residual < 1e-10, "{residual}");
}

#[test]
fn ground_state_is_bitwise_deterministic() {
    let h = build_ssh_hamiltonian(0.37, 1.0, 1.0, 4).unwrap();
    let a = ground_state(&h, DEFAULT_GAP_TOL).unwrap();
    let b = ground_state(&h, DEFAULT_GAP_TOL).unwrap();
    assert_eq!(a.amplitudes(), b.amplitudes());
}

#[test]
fn phase_unitary_preserves_densities() {
    let h = build_ssh_hamiltonian(0.2, 1.0, 1.0, 4).unwrap();
    let psi = ground_state(&h, DEFAULT_GAP_TOL).unwrap();
    let u = random_phase_unitary(4, 5);
    let moved = psi.transformed(&u).unwrap();
    let obs = ssh_observables(4).unwrap();
    let before = phi_map(&psi, &obs).unwrap();
    let after = phi_map(&moved, &obs).unwrap();
    for i in 0..4 {
        assert_abs_diff_eq!(before[i], after[i], epsilon = 1e-12);
    }
}

#[test]
fn csv_round_trip_preserves_bits() {
    let cloud = build_cloud(&[-0.5, 0.0, 0.5], &Model::ssh(4), &ssh_observables(4).unwrap(), DEFAULT_GAP_TOL).unwrap();
    let mut buf = Vec::new();
    cloud.write_csv(&mut buf).unwrap();
    let back = StateCloud::read_csv(buf.as_slice()).unwrap();
    assert_eq!(back.points(), cloud.points());
    assert_eq!(back.params(), cloud.params());
}

#[test]
fn csv_reports_malformed_row() {
    let text = "lambda,a,b\n0.0,1.0,2.0\n0.1,oops,2.0\n";
    match StateCloud::read_csv(text.as_bytes()) {
        Err(Error::Csv { row, .. }) => assert_eq!(row, 3),
        other => panic!("{other:?}"),
    }
}

/// A unit-norm observable separates two pure states by twice their trace
/// distance: sigma_z on |0> and |1>.
#[test]
fn unit_norm_observable_reaches_twice_trace_distance() {
    let z = HermitianMatrix::from_diagonal(&[1.0, -1.0]).unwrap();
    let a = QuantumState::basis(2, 0);
    let b = QuantumState::basis(2, 1);
    let gap = (expectation(&a, &z).unwrap() - expectation(&b, &z).unwrap()).abs();
    let d = trace_distance(&DensityMatrix::pure(&a), &DensityMatrix::pure(&b)).unwrap();
    assert_abs_diff_eq!(gap, 2.0, epsilon = 1e-15);
    assert_abs_diff_eq!(d, 1.0, epsilon = 1e-12);
}

fn complex_vec(dim: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), dim)
}

fn state_from(v: &[(f64, f64)]) -> Option<QuantumState> {
    let amps = DVector::from_iterator(v.len(), v.iter().map(|&(r, i)| Complex64::new(r, i)));
    if amps.norm() < 1e-3 {
        return None;
    }
    QuantumState::from_amplitudes(amps).ok()
}

fn hermitian_from(v: &[(f64, f64)], dim: usize) -> HermitianMatrix {
    let m = DMatrix::from_fn(dim, dim, |i, j| Complex64::new(v[i * dim + j].0, v[i * dim + j].1));
    let h = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let op = HermitianMatrix::new(h).unwrap();
    let norm = qbarcode::statecloud::operator_norm(&op);
    op.scaled(1.0 / norm)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn expectation_gap_bounded_by_trace_norm(a in complex_vec(4), b in complex_vec(4), o in complex_vec(16)) {
        let (Some(psi), Some(phi)) = (state_from(&a), state_from(&b)) else { return Ok(()) };
        let op = hermitian_from(&o, 4);
        let gap = (expectation(&psi, &op).unwrap() - expectation(&phi, &op).unwrap()).abs();
        let d = trace_distance(&DensityMatrix::pure(&psi), &DensityMatrix::pure(&phi)).unwrap();
        prop_assert!(gap <= 2.0 * d + 1e-9, "gap {} vs 2 d_tr {}", gap, 2.0 * d);
    }

    #[test]
    fn projector_expectation_gap_bounded_by_trace_distance(
        a in complex_vec(4), b in complex_vec(4), seed in 0u64..1000, rank in 1usize..4,
    ) {
        let (Some(psi), Some(phi)) = (state_from(&a), state_from(&b)) else { return Ok(()) };
        let diag: Vec<f64> = (0..4).map(|i| if i < rank { 1.0 } else { 0.0 }).collect();
        let p = HermitianMatrix::from_diagonal(&diag).unwrap().conjugated_by(&random_unitary(4, seed)).unwrap();
        let gap = (expectation(&psi, &p).unwrap() - expectation(&phi, &p).unwrap()).abs();
        let d = trace_distance(&DensityMatrix::pure(&psi), &DensityMatrix::pure(&phi)).unwrap();
        prop_assert!(gap <= d + 1e-9, "gap {} vs d_tr {}", gap, d);
    }

    #[test]
    fn pure_trace_distance_closed_form(a in complex_vec(3), b in complex_vec(3)) {
        let (Some(psi), Some(phi)) = (state_from(&a), state_from(&b)) else { return Ok(()) };
        let d = trace_distance(&DensityMatrix::pure(&psi), &DensityMatrix::pure(&phi)).unwrap();
        let ov = psi.overlap(&phi).unwrap();
        prop_assert!((d - (1.0 - ov * ov).max(0.0).sqrt()).abs() < 1e-9);
    }

    #[test]
    fn phi_map_is_unitarily_invariant(lambda in -0.95..1.0f64, seed in 0u64..10_000) {
        let h = build_ssh_hamiltonian(lambda, 1.0, 1.0, 4).unwrap();
        let Ok(psi) = ground_state(&h, DEFAULT_GAP_TOL) else { return Ok(()) };
        let u = random_unitary(4, seed);
        let obs = ssh_observables(4).unwrap();
        let plain = phi_map(&psi, &obs).unwrap();
        let moved = phi_map(&psi.transformed(&u).unwrap(), &obs.conjugated_by(&u).unwrap()).unwrap();
        for (x, y) in plain.iter().zip(&moved) {
            prop_assert!((x - y).abs() <= 1e-10, "{} vs {}", x, y);
        }
    }

    #[test]
    fn ssh_hamiltonian_is_hermitian_and_real(lambda in -2.0..2.0f64, v in 0.1..2.0f64, w in -2.0..2.0f64, n in 2usize..9) {
        let h = build_ssh_hamiltonian(lambda, v, w, n).unwrap();
        prop_assert!(h.is_real());
        let m = h.entries();
        prop_assert!((m - m.adjoint()).norm() == 0.0);
    }
}
