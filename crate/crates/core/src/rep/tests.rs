use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::lie::random_element;
use crate::presentation::tests::quaternion_pair;
use crate::presentation::{relator_differential, SurfacePresentation};
use crate::scalar::RMatrix;

fn su2() -> GroupSpec {
    GroupSpec::su(2)
}

fn minus_identity() -> GroupElement<f64> {
    GroupElement::scalar(su2(), Complex::new(-1.0, 0.0))
}

fn solve_closed(genus: usize, target: GroupElement<f64>, seed: u64) -> RepresentationPoint<f64> {
    let pres = SurfacePresentation::closed(genus).unwrap();
    let classes = ConjugacyClassSpec::closed(target, 1e-12).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = random_initial(pres, &classes, &mut rng).unwrap();
    project_to_variety(&start, &classes, &ProjectionOptions::default()).unwrap()
}

#[test]
fn identity_tuple_is_fixed() {
    let pres = SurfacePresentation::closed(2).unwrap();
    let t = GeneratorTuple::<f64>::identity(su2(), pres);
    let report = project_with_report(&t, &ConjugacyClassSpec::trivial(su2()), &ProjectionOptions::default()).unwrap();
    assert_eq!(report.iterations, 0);
    assert_eq!(report.point.tuple, t);
    assert_eq!(report.point.residual_norm, 0.0);
}

#[test]
fn random_genus_two_converges() {
    for seed in 0..10 {
        let p = solve_closed(2, GroupElement::identity(su2()), seed);
        assert!(p.residual_norm <= 1e-12, "seed {seed}: {}", p.residual_norm);
        let direct = relator_residual(&p.tuple, &p.target).unwrap().norm();
        assert!(direct <= 1e-12);
        for s in p.tuple.elements() {
            assert!(s.invariant_defect() <= 1e-12);
        }
    }
}

#[test]
fn minus_identity_target() {
    for seed in 0..5 {
        let p = solve_closed(1, minus_identity(), seed);
        assert!(p.residual_norm <= 1e-12);
    }
    let (a, b) = quaternion_pair();
    let t = GeneratorTuple::new(su2(), vec![a], vec![b], vec![]).unwrap();
    let p = RepresentationPoint::new(t, minus_identity()).unwrap();
    assert!(p.residual_norm < 1e-14);
}

#[test]
fn higher_rank_and_complex_groups_converge() {
    for spec in [GroupSpec::su(3), GroupSpec::slc(2)] {
        let p = solve_closed(2, GroupElement::identity(spec), 3);
        assert!(p.residual_norm <= 1e-12, "{spec}");
    }
}

#[test]
fn projection_is_idempotent() {
    let p = solve_closed(2, GroupElement::identity(su2()), 7);
    let classes = ConjugacyClassSpec::closed(p.target.clone(), 1e-12).unwrap();
    let again = project_to_variety(&p.tuple, &classes, &ProjectionOptions::default()).unwrap();
    assert_eq!(again.tuple, p.tuple);
}

#[test]
fn boundary_generators_stay_in_class() {
    let pres = SurfacePresentation::new(1, 2).unwrap();
    let c1 = torus_element(su2(), 0.7);
    let c2 = torus_element(su2(), 1.9);
    let classes = ConjugacyClassSpec::new(vec![c1, c2], GroupElement::identity(su2()), 1e-12).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let start = random_initial(pres, &classes, &mut rng).unwrap();
    let p = project_to_variety(&start, &classes, &ProjectionOptions::default()).unwrap();
    assert!(p.residual_norm <= 1e-12);
    for k in 0..2 {
        assert!(classes.class_distance(k, p.tuple.c(k)) < 1e-10);
    }
}

#[test]
fn irreducibility_detection() {
    let (a, b) = quaternion_pair();
    let pres = SurfacePresentation::closed(1).unwrap();
    let t = GeneratorTuple::new(su2(), vec![a], vec![b], vec![]).unwrap();
    assert_eq!(commutant_dimension(&t, 1e-9), 1);
    let diag = GeneratorTuple::new(su2(), vec![torus_element(su2(), 0.3)], vec![torus_element(su2(), 1.1)], vec![])
        .unwrap();
    assert_eq!(commutant_dimension(&diag, 1e-9), 2);
    let id = GeneratorTuple::<f64>::identity(su2(), pres);
    assert_eq!(commutant_dimension(&id, 1e-9), 4);
    let p = solve_closed(2, GroupElement::identity(su2()), 1).with_irreducibility(1e-9);
    assert_eq!(p.irreducible, Some(true));
}

#[test]
fn cohomology_dimensions_genus_two() {
    for seed in 0..3 {
        let p = solve_closed(2, GroupElement::identity(su2()), seed);
        let h = cohomology_at(&p, 1e-9, 1e-6).unwrap();
        assert_eq!((h.dim_z1(), h.dim_b1(), h.dim_h1()), (9, 3, 6));
        assert!(h.warnings.is_empty());
        assert!(h.z1_rank.separation() >= 1e6);
        assert!(h.b1_rank.separation() >= 1e6);
        // Orthonormal, b1 inside z1, h1 orthogonal to b1.
        let e = (h.z1.transpose() * &h.z1 - RMatrix::identity(9, 9)).amax();
        assert!(e < 1e-12);
        assert!((&h.b1 - &h.z1 * (h.z1.transpose() * &h.b1)).amax() < 1e-10);
        assert!((h.h1.transpose() * &h.b1).amax() < 1e-12);
        let dpi = relator_differential(&p.tuple).matrix();
        assert!((dpi * &h.z1).amax() < 1e-10);
    }
}

#[test]
fn cohomology_at_central_reducible_point() {
    // Identity tuple: every tangent vector is a cocycle, no coboundaries.
    let pres = SurfacePresentation::closed(2).unwrap();
    let t = GeneratorTuple::<f64>::identity(su2(), pres);
    let p = RepresentationPoint::new(t, GroupElement::identity(su2())).unwrap();
    let h = cohomology_at(&p, 1e-9, 1e-6).unwrap();
    assert_eq!((h.dim_z1(), h.dim_b1(), h.dim_h1()), (12, 0, 12));
}

#[test]
fn cohomology_with_boundary_class() {
    // g = 1, one boundary in the class of diag(i, -i): 2 + 2 + 2 tangent parameters
    // minus 3 relations, minus 3 coboundaries.
    let pres = SurfacePresentation::new(1, 1).unwrap();
    let classes = ConjugacyClassSpec::new(
        vec![torus_element(su2(), std::f64::consts::FRAC_PI_2)],
        GroupElement::identity(su2()),
        1e-12,
    )
    .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let start = random_initial(pres, &classes, &mut rng).unwrap();
    let p = project_to_variety(&start, &classes, &ProjectionOptions::default()).unwrap();
    let h = cohomology_at(&p, 1e-9, 1e-6).unwrap();
    assert_eq!((h.dim_z1(), h.dim_b1(), h.dim_h1()), (5, 3, 2));
}

#[test]
fn cohomology_rejects_off_variety() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let pres = SurfacePresentation::closed(2).unwrap();
    let t = GeneratorTuple::<f64>::random(su2(), pres, &mut rng);
    let p = RepresentationPoint::new(t, GroupElement::identity(su2())).unwrap();
    assert!(matches!(cohomology_at(&p, 1e-9, 1e-6), Err(Error::Precondition(_))));
}

#[test]
fn conjugation_preserves_point_and_dimensions() {
    let p = solve_closed(2, GroupElement::identity(su2()), 9);
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let a = random_element(su2(), &mut rng);
    let q = conjugate_point(&p, &a).unwrap();
    assert!(q.residual_norm <= 1e-12);
    let h = cohomology_at(&q, 1e-9, 1e-6).unwrap();
    assert_eq!(h.dim_h1(), 6);
}

#[test]
fn perturbation_returns_to_variety() {
    let p = solve_closed(2, GroupElement::identity(su2()), 4);
    let classes = ConjugacyClassSpec::trivial(su2());
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut q = p.clone();
    for _ in 0..5 {
        q = perturb_and_reproject(&q, &classes, 0.1, &mut rng, &ProjectionOptions::default()).unwrap();
        assert!(q.residual_norm <= 1e-12);
    }
    assert_ne!(q.tuple, p.tuple);
}

#[test]
fn mismatched_classes_rejected() {
    let pres = SurfacePresentation::new(1, 1).unwrap();
    let classes = ConjugacyClassSpec::<f64>::trivial(su2());
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    assert!(matches!(random_initial(pres, &classes, &mut rng), Err(Error::DimensionMismatch { .. })));
    assert!(ConjugacyClassSpec::closed(torus_element(su2(), 0.4), 1e-12).is_err());
}

#[test]
fn block_diagonal_su4_is_reducible() {
    let spec = GroupSpec::su(4);
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let block = |rng: &mut ChaCha8Rng| {
        let x = random_element(su2(), rng);
        let y = random_element(su2(), rng);
        let mut m = crate::scalar::CMatrix::<f64>::zeros(4, 4);
        m.view_mut((0, 0), (2, 2)).copy_from(x.matrix());
        m.view_mut((2, 2), (2, 2)).copy_from(y.matrix());
        GroupElement::from_matrix(spec, m, 1e-12).unwrap()
    };
    let t = GeneratorTuple::new(spec, vec![block(&mut rng), block(&mut rng)], vec![block(&mut rng), block(&mut rng)], vec![])
        .unwrap();
    assert_eq!(commutant_dimension(&t, 1e-9), 2);
    let p = RepresentationPoint::new(t, GroupElement::identity(spec)).map(|p| p.with_irreducibility(1e-9));
    // The residual may be large; irreducibility does not depend on it.
    if let Ok(p) = p {
        assert_eq!(p.irreducible, Some(false));
    }
}
