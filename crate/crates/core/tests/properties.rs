use mixed3::ambient::{make_flat_cosymplectic, make_pseudosphere, Level};
use mixed3::config::Config;
use mixed3::linalg::{project, signature_of, unit, SignatureMetric, Subspace, Vector};
use mixed3::verifier;
use proptest::prelude::*;

fn vec_of(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-3.0..3.0f64, len)
}

fn metric8() -> SignatureMetric {
    SignatureMetric::split(4, 4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inner_product_symmetric(a in vec_of(8), b in vec_of(8)) {
        let g = metric8();
        let (u, v) = (Vector::from_vec(a), Vector::from_vec(b));
        prop_assert!((g.dot(&u, &v) - g.dot(&v, &u)).abs() < 1e-12);
    }

    #[test]
    fn projection_idempotent_and_orthogonal(a in vec_of(8), b in vec_of(8), c in vec_of(8)) {
        let g = metric8();
        // a non-degenerate 2-plane: one timelike and one spacelike axis, perturbed
        let mut e = unit(8, 0);
        let mut f = unit(8, 5);
        e += Vector::from_vec(b) * 0.05;
        f += Vector::from_vec(c) * 0.05;
        let w = match Subspace::new(vec![e, f], &g) {
            Ok(w) => w,
            Err(_) => return Ok(()),
        };
        let v = Vector::from_vec(a);
        let p = project(&v, &w, &g).unwrap();
        let pp = project(&p, &w, &g).unwrap();
        prop_assert!((&pp - &p).amax() < 1e-9);
        let r = &v - &p;
        for b in w.basis() {
            prop_assert!(g.dot(&r, b).abs() < 1e-9);
        }
    }

    #[test]
    fn coordinate_signature_counts(mask in prop::collection::vec(any::<bool>(), 8)) {
        let g = metric8();
        let axes: Vec<usize> = (0..8).filter(|i| mask[*i]).collect();
        prop_assume!(!axes.is_empty());
        let w = Subspace::coordinate(&axes, &g).unwrap();
        let s = signature_of(&w, &g);
        prop_assert_eq!(s.n_minus, axes.iter().filter(|i| **i < 4).count());
        prop_assert_eq!(s.n_plus, axes.iter().filter(|i| **i >= 4).count());
        prop_assert_eq!(s.n_null, 0);
    }

    #[test]
    fn sphere_samples_on_manifold(seed in any::<u64>()) {
        use rand::SeedableRng;
        let s = make_pseudosphere(1, Level::Positive).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let p = s.random_point(&mut rng);
        prop_assert!(s.constraint_residual(&p) < 1e-12);
        let x = s.random_tangent(&p, &mut rng);
        prop_assert!(s.metric().dot(&x, &p).abs() < 1e-10);
    }
}

#[test]
fn null_vector_has_zero_norm() {
    let g = metric8();
    let v = unit(8, 0) + unit(8, 4);
    assert_eq!(g.dot(&v, &v), 0.0);
}

#[test]
fn ambient_index_counts() {
    assert_eq!(make_pseudosphere(1, Level::Positive).unwrap().metric().index_counts(), (4, 4));
    let c = make_flat_cosymplectic(1, 1).unwrap();
    assert_eq!(c.dim(), 7);
}

#[test]
fn reports_deterministic_for_seed() {
    let cfg = Config::default();
    let ids: Vec<String> = ["C01", "C06", "C09", "C12"].iter().map(|s| s.to_string()).collect();
    let a = verifier::run(&ids, &cfg).unwrap();
    let b = verifier::run(&ids, &cfg).unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.metrics, y.metrics);
        assert_eq!(x.status, y.status);
    }
    let other = verifier::run(&ids[..1].to_vec(), &Config { seed: 7, ..cfg }).unwrap();
    assert_ne!(other[0].metrics, a[0].metrics);
}

#[test]
fn parallel_and_sequential_agree() {
    let par = verifier::run_all(&Config::default()).unwrap();
    let seq = verifier::run_all(&Config { parallel: false, ..Config::default() }).unwrap();
    for (x, y) in par.reports.iter().zip(&seq.reports) {
        assert_eq!(x.metrics, y.metrics, "{}", x.check_id);
    }
}
