use charvar::presentation::evaluate_relator;
use charvar::rep::{project_with_report, random_initial, ProjectionOptions};
use charvar::scalar::CMatrix;
use charvar::{ConjugacyClassSpec, GeneratorTuple, GroupElement, GroupSpec, SurfacePresentation};
use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type C = Complex<f64>;

#[test]
fn genus_two_benchmark() {
    let spec = GroupSpec::su(2);
    let pres = SurfacePresentation::closed(2).unwrap();
    let classes = ConjugacyClassSpec::closed(GroupElement::identity(spec), 1e-12).unwrap();
    let opts = ProjectionOptions::default();
    let mut good = 0;
    let mut iterations = Vec::new();
    for seed in 0..200 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let start = random_initial(pres, &classes, &mut rng).unwrap();
        if let Ok(r) = project_with_report(&start, &classes, &opts) {
            iterations.push(r.iterations);
            if r.point.residual_norm <= 1e-10 && r.iterations <= 60 {
                good += 1;
            }
        }
    }
    iterations.sort_unstable();
    assert!(good >= 190, "{good}/200 converged within 60 iterations; iterations {iterations:?}");
}

/// `A = i sigma_x`, `B = i sigma_y` anticommute, so `A B A^{-1} B^{-1} = -I`.
#[test]
fn minus_identity_commutator_oracle() {
    let spec = GroupSpec::su(2);
    let (o, i) = (C::new(0.0, 0.0), C::new(0.0, 1.0));
    let a = CMatrix::from_row_slice(2, 2, &[o, i, i, o]);
    let b = CMatrix::from_row_slice(2, 2, &[o, C::new(1.0, 0.0), C::new(-1.0, 0.0), o]);
    let a = GroupElement::from_matrix(spec, a, 1e-14).unwrap();
    let b = GroupElement::from_matrix(spec, b, 1e-14).unwrap();
    let comm = &(&(&a * &b) * &a.inverse()) * &b.inverse();
    let minus = GroupElement::scalar(spec, C::new(-1.0, 0.0));
    assert_eq!(comm.matrix(), minus.matrix());

    // The library relator word is a commutator in the other order; it is also -I here.
    let t = GeneratorTuple::new(spec, vec![a], vec![b], vec![]).unwrap();
    assert!((evaluate_relator(&t).matrix() - minus.matrix()).norm() < 1e-15);

    // And the solver finds such points from random starts.
    let pres = SurfacePresentation::closed(1).unwrap();
    let classes = ConjugacyClassSpec::closed(minus.clone(), 1e-12).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let solved = (0..10).any(|_| {
        let start = random_initial(pres, &classes, &mut rng).unwrap();
        project_with_report(&start, &classes, &ProjectionOptions::default())
            .map(|r| (evaluate_relator(&r.point.tuple).matrix() - minus.matrix()).norm() < 1e-9)
            .unwrap_or(false)
    });
    assert!(solved);
}
