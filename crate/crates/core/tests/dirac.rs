use proptest::prelude::*;
use qbarcode::dirac::{
    betti_from_laplacian, boundary_at_scale, dirac_operator, persistent_laplacian, qpe_distribution,
    restricted_boundary, spectrum, DEFAULT_RANK_TOL,
};
use qbarcode::linalg::symmetric_eigenvalues;
use qbarcode::persistence::{betti_oracle, persistent_betti, reduce};
use qbarcode::simplicial::{default_eps_max, vr_filtration};

fn cloud(max_points: usize, ambient: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    (1..=max_points).prop_flat_map(move |n| prop::collection::vec(prop::collection::vec(-1.0..1.0f64, ambient), n))
}

fn square() -> Vec<Vec<f64>> {
    vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]]
}

fn interval() -> impl Strategy<Value = (f64, f64)> {
    (0.0..1.2f64, 0.0..0.6f64).prop_map(|(a, w)| (a, a + w))
}

#[test]
fn square_laplacian_kernel() {
    let k = vr_filtration(&square(), 1.0, 2).unwrap();
    let l = persistent_laplacian(&k, 1, 0.55, 0.65).unwrap();
    assert_eq!(betti_from_laplacian(&l, DEFAULT_RANK_TOL).unwrap(), 1);
    let l = persistent_laplacian(&k, 1, 0.55, 0.75).unwrap();
    assert_eq!(betti_from_laplacian(&l, DEFAULT_RANK_TOL).unwrap(), 0);
}

#[test]
fn components_from_degree_zero_laplacian() {
    let pts = vec![vec![0.0], vec![0.1], vec![5.0], vec![5.1], vec![9.0]];
    let k = vr_filtration(&pts, 0.2, 1).unwrap();
    let l = persistent_laplacian(&k, 0, 0.2, 0.2).unwrap();
    assert_eq!(betti_from_laplacian(&l, DEFAULT_RANK_TOL).unwrap(), 3);
}

#[test]
fn shifted_dirac_spectrum() {
    // isolated point at k = 0 with no edges: D is the single entry +xi
    let k = vr_filtration(&[vec![0.0]], 0.0, 1).unwrap();
    let d0 = dirac_operator(&k, 0, 0.0, 0.0, 0.0).unwrap();
    let d1 = dirac_operator(&k, 0, 0.0, 0.0, 0.7).unwrap();
    let (s0, s1) = (d0.spectrum(), d1.spectrum());
    assert_eq!(s0.len(), s1.len());
    for (a, b) in s0.iter().zip(&s1) {
        assert!((b - a - 0.7).abs() < 1e-12);
    }
}

#[test]
fn qpe_examples() {
    assert!((qpe_distribution(&[3.0], 1, 8, 3).unwrap() - 1.0).abs() <= 1e-12);
    assert!(qpe_distribution(&[2.0], 1, 8, 5).unwrap().abs() <= 1e-12);
    assert!((qpe_distribution(&[0.5], 1, 2, 0).unwrap() - 0.5).abs() <= 1e-12);
    assert!((qpe_distribution(&[3.0, 2.0], 1, 8, 3).unwrap() - 0.5).abs() <= 1e-12);
}

#[test]
fn asymmetric_input_is_rejected() {
    let m = nalgebra::DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
    assert!(spectrum(&m).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn three_way_betti_agreement(points in cloud(7, 3), k in 0usize..=2, (e1, e2) in interval()) {
        let complex = vr_filtration(&points, default_eps_max(&points), 3).unwrap();
        let d = reduce(&complex);
        let bar = persistent_betti(&d, k, e1, e2).unwrap();
        let oracle = betti_oracle(&complex, k, e1, e2).unwrap();
        let lap = betti_from_laplacian(&persistent_laplacian(&complex, k, e1, e2).unwrap(), DEFAULT_RANK_TOL).unwrap();
        prop_assert_eq!(bar, oracle);
        prop_assert_eq!(bar, lap);
    }

    #[test]
    fn dirac_square_contains_laplacian(points in cloud(8, 3), k in 0usize..=1, (e1, e2) in interval()) {
        let complex = vr_filtration(&points, default_eps_max(&points), 2).unwrap();
        let d = dirac_operator(&complex, k, e1, e2, 0.0).unwrap();
        let l = persistent_laplacian(&complex, k, e1, e2).unwrap();
        let mid = d.squared_middle_block();
        prop_assert_eq!(mid.shape(), l.shape());
        prop_assert!((&mid - &l).iter().all(|x| x.abs() <= 1e-10));
        prop_assert!(d.squared_corner_block().iter().all(|x| x.abs() <= 1e-12));
    }

    #[test]
    fn laplacian_is_positive_semidefinite(points in cloud(8, 2), k in 0usize..=1, (e1, e2) in interval()) {
        let complex = vr_filtration(&points, default_eps_max(&points), 2).unwrap();
        let l = persistent_laplacian(&complex, k, e1, e2).unwrap();
        if l.nrows() > 0 {
            prop_assert!(symmetric_eigenvalues(&l)[0] >= -1e-10);
        }
    }

    #[test]
    fn equal_scales_give_combinatorial_laplacian(points in cloud(8, 2), k in 0usize..=1, eps in 0.0..1.2f64) {
        let complex = vr_filtration(&points, default_eps_max(&points), 2).unwrap();
        let l = persistent_laplacian(&complex, k, eps, eps).unwrap();
        let up = boundary_at_scale(&complex, k + 1, eps).unwrap();
        let mut ordinary = &up * up.transpose();
        if k > 0 {
            let down = boundary_at_scale(&complex, k, eps).unwrap();
            ordinary += down.transpose() * &down;
        }
        let a = symmetric_eigenvalues(&l);
        let b = symmetric_eigenvalues(&ordinary);
        prop_assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() <= 1e-10, "{} vs {}", x, y);
        }
    }

    #[test]
    fn restricted_domain_is_orthonormal(points in cloud(7, 2), k in 1usize..=2, (e1, e2) in interval()) {
        let complex = vr_filtration(&points, default_eps_max(&points), 2).unwrap();
        let r = restricted_boundary(&complex, k, e1, e2).unwrap();
        let g = r.domain_basis.transpose() * &r.domain_basis;
        let n = g.nrows();
        prop_assert!((g - nalgebra::DMatrix::<f64>::identity(n, n)).iter().all(|x| x.abs() < 1e-10));
        prop_assert!(r.leakage() < 1e-10);
    }
}
