use std::f64::consts::{PI, SQRT_2};

use nonlocality_core::scenario::moments;
use nonlocality_core::*;
use proptest::prelude::*;

fn unit() -> impl Strategy<Value = [f64; 3]> {
    (-1.0f64..=1.0, 0.0..2.0 * PI).prop_map(|(z, phi)| {
        let r = (1.0 - z * z).sqrt();
        [r * phi.cos(), r * phi.sin(), z]
    })
}

fn ball() -> impl Strategy<Value = [f64; 3]> {
    (unit(), 0.0f64..=1.0).prop_map(|(u, r)| u.map(|c| c * r))
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

proptest! {
    #[test]
    fn singlet_correlator_is_minus_dot(a in unit(), b in unit()) {
        let e = correlator(&singlet(), &QubitObservable::new(a).unwrap(), &QubitObservable::new(b).unwrap()).unwrap();
        prop_assert!((e + dot(a, b)).abs() <= 1e-10);
    }

    #[test]
    fn product_correlator_factorizes(ra in ball(), rb in ball(), a in unit(), b in unit()) {
        let rho = product_state(ra, rb).unwrap();
        let e = correlator(&rho, &QubitObservable::new(a).unwrap(), &QubitObservable::new(b).unwrap()).unwrap();
        prop_assert!((e - dot(ra, a) * dot(rb, b)).abs() <= 1e-12);
        prop_assert!(e.abs() <= 1.0 + 1e-12);
    }

    #[test]
    fn werner_correlators_bounded(v in 0.0f64..=1.0, a in unit(), b in unit()) {
        let rho = DensityMatrix::werner(v).unwrap();
        let e = correlator(&rho, &QubitObservable::new(a).unwrap(), &QubitObservable::new(b).unwrap()).unwrap();
        prop_assert!(e.abs() <= 1.0 + 1e-12);
        prop_assert!((e + v * dot(a, b)).abs() <= 1e-12);
    }

    #[test]
    fn s_operator_identities(theta in 0.0f64..=PI) {
        let sc = canonical_scenario(theta).unwrap();
        let s = sc.s_operator();
        let cx = commutator(&sc.x().matrix(), &sc.x_prime().matrix()).unwrap();
        let cy = commutator(&sc.y().matrix(), &sc.y_prime().matrix()).unwrap();
        let rhs = ComplexMatrix::identity(4).unwrap() * 4.0 + kron(&cx, &cy).unwrap();
        prop_assert!(s.pow(2).max_abs_diff(&rhs) <= 1e-12);
        prop_assert!(s.pow(3).max_abs_diff(&(s * 8.0)) <= 1e-12);
    }

    #[test]
    fn s_spectrum_symmetric_with_tsirelson_top(theta in 0.0f64..=PI) {
        let e = hermitian_eigenvalues(&canonical_scenario(theta).unwrap().s_operator()).unwrap();
        let v = e.eigenvalues();
        prop_assert!((v[0] - 2.0 * SQRT_2).abs() <= 1e-9);
        for i in 0..4 {
            prop_assert!((v[i] + v[3 - i]).abs() <= 1e-9);
        }
    }

    #[test]
    fn singlet_mean_closed_form(theta in 0.0f64..=PI) {
        let m = moments(&singlet(), &canonical_scenario(theta).unwrap().s_operator(), 2).unwrap();
        prop_assert!((m[0] + 2.0 * (theta.cos() + theta.sin())).abs() <= 1e-12);
        prop_assert!((m[1] - 8.0).abs() <= 1e-12);
    }
}

#[test]
fn singlet_covariance_hundred_pairs() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(100);
    for _ in 0..100 {
        let a = nonlocality_core::scenario::random_unit_bloch(&mut rng);
        let b = nonlocality_core::scenario::random_unit_bloch(&mut rng);
        let e = correlator(&singlet(), &QubitObservable::new(a).unwrap(), &QubitObservable::new(b).unwrap()).unwrap();
        assert!((e + dot(a, b)).abs() <= 1e-10);
    }
}

#[test]
fn s_identities_on_fifty_point_grid() {
    for i in 0..50 {
        let theta = PI * i as f64 / 49.0;
        let sc = canonical_scenario(theta).unwrap();
        let s = s_operator(&sc);
        let cx = commutator(&sc.x().matrix(), &sc.x_prime().matrix()).unwrap();
        let cy = commutator(&sc.y().matrix(), &sc.y_prime().matrix()).unwrap();
        let rhs = ComplexMatrix::identity(4).unwrap() * 4.0 + kron(&cx, &cy).unwrap();
        assert!(matmul(&s, &s).unwrap().max_abs_diff(&rhs) <= 1e-12, "θ = {theta}");
    }
}
