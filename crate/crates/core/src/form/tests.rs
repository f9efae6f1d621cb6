use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::lie::{gaussian_algebra, random_element, AlgebraElement, GroupElement};
use crate::linalg::max_principal_sine;
use crate::presentation::{coboundary, GeneratorTuple, SurfacePresentation};
use crate::rep::{
    cohomology_at, conjugate_point, project_to_variety, random_initial, torus_element, ConjugacyClassSpec,
    ProjectionOptions,
};

type C = Complex<f64>;

fn su2() -> GroupSpec {
    GroupSpec::su(2)
}

fn solved(genus: usize, classes: &ConjugacyClassSpec<f64>, seed: u64) -> RepresentationPoint<f64> {
    let pres = SurfacePresentation::new(genus, classes.boundary_count()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = random_initial(pres, classes, &mut rng).unwrap();
    project_to_variety(&start, classes, &ProjectionOptions::default()).unwrap()
}

fn closed_point(genus: usize, seed: u64) -> RepresentationPoint<f64> {
    solved(genus, &ConjugacyClassSpec::trivial(su2()), seed)
}

fn one_boundary(theta: f64) -> ConjugacyClassSpec<f64> {
    ConjugacyClassSpec::new(vec![torus_element(su2(), theta)], GroupElement::identity(su2()), 1e-12).unwrap()
}

fn random_tangent(spec: GroupSpec, n: usize, rng: &mut ChaCha8Rng) -> TangentVector<f64> {
    TangentVector::new((0..n).map(|_| gaussian_algebra(spec, 1.0, rng)).collect())
}

fn random_cocycle(basis: &CohomologyBasis<f64>, rng: &mut ChaCha8Rng) -> TangentVector<f64> {
    let zs = basis.z1_vectors();
    let mut acc = TangentVector::zero(basis.spec, zs[0].len());
    for z in &zs {
        acc = acc.add(&z.scale(rand_distr::Distribution::sample(&rand_distr::StandardNormal, rng)));
    }
    acc
}

fn neg_tr(x: &CMatrix<f64>, y: &CMatrix<f64>) -> C {
    -(x * y).trace()
}

/// Four-position expansion for genus one written out by hand: positions
/// `a, b, a^{-1}, b^{-1}` with transports `I, a, ba, a^{-1}ba`.
fn genus_one_oracle(t: &GeneratorTuple<f64>, u: &TangentVector<f64>, v: &TangentVector<f64>) -> C {
    let a = t.a(0).matrix().clone();
    let b = t.b(0).matrix().clone();
    let ai = t.a(0).inverse().matrix().clone();
    let bi = t.b(0).inverse().matrix().clone();
    let z = |h: &TangentVector<f64>| -> [CMatrix<f64>; 4] {
        let ha = h.components()[0].matrix();
        let hb = h.components()[1].matrix();
        [
            &ai * ha * &a,
            &ai * &bi * hb * &b * &a,
            -(&ai * &bi * ha * &b * &a),
            -(&ai * &bi * &a * hb * &ai * &b * &a),
        ]
    };
    let (z1, z2) = (z(u), z(v));
    let mut acc = C::new(0.0, 0.0);
    for i in 0..4 {
        for j in 0..4 {
            if i < j {
                acc += neg_tr(&z1[i], &z2[j]);
            } else if i > j {
                acc -= neg_tr(&z1[i], &z2[j]);
            }
        }
    }
    acc * 0.5
}

#[test]
fn epsilon_convention() {
    assert_eq!(epsilon(0, 1), 1);
    assert_eq!(epsilon(3, 1), -1);
    assert_eq!(epsilon(2, 2), 0);
}

#[test]
fn genus_one_matches_hand_expansion() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let pres = SurfacePresentation::closed(1).unwrap();
    for _ in 0..20 {
        let t = GeneratorTuple::random(su2(), pres, &mut rng);
        let p = RepresentationPoint { tuple: t.clone(), target: GroupElement::identity(su2()), residual_norm: 0.0, irreducible: None };
        let u = random_tangent(su2(), 2, &mut rng);
        let v = random_tangent(su2(), 2, &mut rng);
        let expect = genus_one_oracle(&t, &u, &v);
        let got = theta_closed(&p, &u, &v).unwrap();
        assert!((got - expect).norm() < 1e-13, "{got} vs {expect}");
        let got2 = theta_with_classes(&p, &u, &v).unwrap();
        assert!((got2 - expect).norm() < 1e-13);
    }
}

#[test]
fn genus_one_identity_single_generator_support() {
    let t = GeneratorTuple::<f64>::identity(su2(), SurfacePresentation::closed(1).unwrap());
    let p = RepresentationPoint::new(t, GroupElement::identity(su2())).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let z = AlgebraElement::zero(su2());
    let u = TangentVector::new(vec![gaussian_algebra(su2(), 1.0, &mut rng), z.clone()]);
    let v = TangentVector::new(vec![gaussian_algebra(su2(), 1.0, &mut rng), z]);
    assert!(theta_closed(&p, &u, &v).unwrap().norm() < 1e-15);
}

#[test]
fn skew_bilinear_and_zero() {
    let p = closed_point(2, 5);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let u = random_tangent(su2(), 4, &mut rng);
    let v = random_tangent(su2(), 4, &mut rng);
    let w = random_tangent(su2(), 4, &mut rng);
    let th = |x: &TangentVector<f64>, y: &TangentVector<f64>| theta_closed(&p, x, y).unwrap();
    assert!(th(&u, &u).norm() < 1e-12);
    assert!((th(&u, &v) + th(&v, &u)).norm() < 1e-12);
    assert_eq!(th(&u, &TangentVector::zero(su2(), 4)), C::new(0.0, 0.0));
    let lin = th(&u.scale(2.0).add(&w), &v) - th(&u, &v) * 2.0 - th(&w, &v);
    assert!(lin.norm() < 1e-12);
    assert!(th(&u, &v).im.abs() < 1e-14);
}

#[test]
fn double_sum_matches_prefix_route() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for genus in 1..4 {
        let pres = SurfacePresentation::closed(genus).unwrap();
        for spec in [su2(), GroupSpec::su(3), GroupSpec::slc(2)] {
            let t = if spec.is_compact() {
                GeneratorTuple::random(spec, pres, &mut rng)
            } else {
                let els = (0..2 * genus).map(|_| crate::lie::exp(&gaussian_algebra(spec, 0.4, &mut rng))).collect();
                GeneratorTuple::from_flat(spec, pres, els).unwrap()
            };
            let p = RepresentationPoint { tuple: t, target: GroupElement::identity(spec), residual_norm: 0.0, irreducible: None };
            let u = random_tangent(spec, 2 * genus, &mut rng);
            let v = random_tangent(spec, 2 * genus, &mut rng);
            let a = theta_closed(&p, &u, &v).unwrap();
            let b = theta_with_classes(&p, &u, &v).unwrap();
            assert!((a - b).norm() <= 1e-13 * a.norm().max(1.0), "{spec} g={genus}");
        }
    }
}

#[test]
fn wrong_length_rejected() {
    let p = closed_point(2, 1);
    let u = TangentVector::zero(su2(), 3);
    assert!(matches!(theta_closed(&p, &u, &u), Err(Error::DimensionMismatch { .. })));
}

#[test]
fn descent_and_kernel_at_closed_points() {
    for (seed, target) in [(0, 1.0), (1, -1.0)] {
        let classes = ConjugacyClassSpec::closed(GroupElement::scalar(su2(), C::new(target, 0.0)), 1e-12).unwrap();
        let p = solved(2, &classes, seed);
        let h = cohomology_at(&p, 1e-9, 1e-6).unwrap();
        assert!(descent_defect(&p, &h).unwrap() < 1e-12);
        let (k, _) = kernel_of_form(&p, &h).unwrap();
        assert_eq!(k.ncols(), 3);
        assert!(max_principal_sine(&k, &h.b1) < 1e-9);
        let om = form_on_cohomology(&p, &h).unwrap();
        assert_eq!(om.dim(), 6);
        assert!(om.skew_defect() < 1e-12);
        assert!(*om.singular_values().last().unwrap() > 1e-3);
    }
}

#[test]
fn descent_perturbation_changes_little() {
    let p = closed_point(2, 4);
    let h = cohomology_at(&p, 1e-9, 1e-6).unwrap();
    let om = form_on_cohomology(&p, &h).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let bs = h.b1_vectors();
    let shifted: Vec<_> = h
        .h1_vectors()
        .iter()
        .map(|v| {
            let mut w = v.clone();
            for b in &bs {
                w = w.add(&b.scale(rand_distr::Distribution::sample(&rand_distr::StandardNormal, &mut rng)));
            }
            w
        })
        .collect();
    let moved = FormContext::new(&p, BoundaryTerm::Symmetric).matrix(&shifted).unwrap();
    assert!((moved - &om.omega).iter().all(|z| z.norm() < 1e-8));
}

#[test]
fn boundary_term_symmetric_is_skew_and_descends() {
    for theta in [FRAC_PI_2, FRAC_PI_3, 1.1] {
        let classes = one_boundary(theta);
        let p = solved(1, &classes, 21);
        let h = cohomology_at(&p, 1e-9, 1e-6).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let u = random_cocycle(&h, &mut rng);
        let v = random_cocycle(&h, &mut rng);
        let a = theta_with_classes(&p, &u, &v).unwrap();
        let b = theta_with_classes(&p, &v, &u).unwrap();
        assert!((a + b).norm() < 1e-10, "theta = {theta}");
        assert!(descent_defect(&p, &h).unwrap() < 1e-10, "theta = {theta}");
        let (k, _) = kernel_of_form(&p, &h).unwrap();
        assert!(max_principal_sine(&k, &h.b1) < 1e-8);
    }
}

#[test]
fn verbatim_boundary_term() {
    // At a quarter turn both conventions coincide.
    let p = solved(1, &one_boundary(FRAC_PI_2), 21);
    let h = cohomology_at(&p, 1e-9, 1e-6).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let u = random_cocycle(&h, &mut rng);
    let v = random_cocycle(&h, &mut rng);
    let s = theta_with_classes_using(&p, &u, &v, BoundaryTerm::Symmetric).unwrap();
    let w = theta_with_classes_using(&p, &u, &v, BoundaryTerm::Verbatim).unwrap();
    assert!((s - w).norm() < 1e-12);
    let back = theta_with_classes_using(&p, &v, &u, BoundaryTerm::Verbatim).unwrap();
    assert!((w + back).norm() < 1e-10);

    // Away from it the literal ordering is not skew.
    let p = solved(1, &one_boundary(FRAC_PI_3), 21);
    let h = cohomology_at(&p, 1e-9, 1e-6).unwrap();
    let u = random_cocycle(&h, &mut rng);
    let v = random_cocycle(&h, &mut rng);
    let w = theta_with_classes_using(&p, &u, &v, BoundaryTerm::Verbatim).unwrap();
    let back = theta_with_classes_using(&p, &v, &u, BoundaryTerm::Verbatim).unwrap();
    assert!((w + back).norm() > 1e-3);
}

#[test]
fn central_class_admits_only_zero_tangent() {
    let t = GeneratorTuple::new(
        su2(),
        vec![GroupElement::identity(su2())],
        vec![GroupElement::identity(su2())],
        vec![GroupElement::scalar(su2(), C::new(-1.0, 0.0))],
    )
    .unwrap();
    let p = RepresentationPoint::new(t, GroupElement::scalar(su2(), C::new(-1.0, 0.0))).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let z = AlgebraElement::zero(su2());
    let u = TangentVector::new(vec![gaussian_algebra(su2(), 1.0, &mut rng), z.clone(), z.clone()]);
    let v = TangentVector::new(vec![z.clone(), gaussian_algebra(su2(), 1.0, &mut rng), z.clone()]);
    assert!(theta_with_classes(&p, &u, &v).is_ok());
    let bad = TangentVector::new(vec![z.clone(), z, gaussian_algebra(su2(), 1.0, &mut rng)]);
    assert!(matches!(theta_with_classes(&p, &u, &bad), Err(Error::NotClassTangent { index: 0, .. })));
}

#[test]
fn conjugation_invariance() {
    let p = closed_point(2, 8);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let a = random_element(su2(), &mut rng);
    let q = conjugate_point(&p, &a).unwrap();
    let u = random_tangent(su2(), 4, &mut rng);
    let v = random_tangent(su2(), 4, &mut rng);
    let x = theta_closed(&p, &u, &v).unwrap();
    let y = theta_closed(&q, &u.conjugate(&a), &v.conjugate(&a)).unwrap();
    assert!((x - y).norm() < 1e-10);
}

#[test]
fn reducible_point_kernel_is_still_coboundaries() {
    // Abelian point: b1 drops to the complement of the torus, but the cup product
    // on H^1 of a closed surface stays nondegenerate.
    let pres = SurfacePresentation::closed(2).unwrap();
    let els = [0.3, 1.2, 0.7, 2.0].iter().map(|&th| torus_element(su2(), th)).collect();
    let t = GeneratorTuple::from_flat(su2(), pres, els).unwrap();
    let p = RepresentationPoint::new(t, GroupElement::identity(su2())).unwrap();
    let h = cohomology_at(&p, 1e-9, 1e-6).unwrap();
    let (k, _) = kernel_of_form(&p, &h).unwrap();
    assert_eq!((h.dim_z1(), h.dim_b1()), (10, 2));
    assert_eq!(k.ncols(), 2);
    assert!(max_principal_sine(&k, &h.b1) < 1e-9);
}

#[test]
fn rotation_of_coboundaries_is_isotropic() {
    let p = closed_point(3, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let x = gaussian_algebra(su2(), 1.0, &mut rng);
    let b = coboundary(&p.tuple, &x);
    let y = gaussian_algebra(su2(), 1.0, &mut rng);
    let c = coboundary(&p.tuple, &y);
    assert!(theta_closed(&p, &b, &c).unwrap().norm() < 1e-12);
}

#[test]
fn fd_exterior_derivative_oracles() {
    let constant = |_: &[f64]| -> Result<CMatrix<f64>> {
        let mut m = CMatrix::zeros(3, 3);
        m[(0, 1)] = C::new(2.0, 0.0);
        m[(1, 0)] = C::new(-2.0, 0.0);
        m[(1, 2)] = C::new(-0.5, 0.0);
        m[(2, 1)] = C::new(0.5, 0.0);
        Ok(m)
    };
    assert_eq!(exterior_derivative_fd(constant, &[0.3, 0.1, -0.2], 1e-3).unwrap(), 0.0);
    // x0 dx1 ^ dx2 has d = dx0 ^ dx1 ^ dx2.
    let form = |x: &[f64]| -> Result<CMatrix<f64>> {
        let mut m = CMatrix::zeros(3, 3);
        m[(1, 2)] = C::new(x[0], 0.0);
        m[(2, 1)] = C::new(-x[0], 0.0);
        Ok(m)
    };
    let v = exterior_derivative_fd(form, &[0.4, 0.0, 1.0], 1e-3).unwrap();
    assert!((v - 1.0).abs() < 1e-10);
}

#[test]
fn closedness_second_order() {
    let p = closed_point(2, 12);
    let h = cohomology_at(&p, 1e-9, 1e-6).unwrap();
    let sweep = closedness_sweep(&p, &h, 1e-3).unwrap();
    assert!(sweep.values[0] <= 1e-4, "{sweep:?}");
    assert!(sweep.min_order() >= 1.8, "{sweep:?}");
}

#[test]
fn chart_origin_is_base_point() {
    let p = closed_point(2, 3);
    let h = cohomology_at(&p, 1e-9, 1e-6).unwrap();
    let chart = ClosednessChart::new(&p, &h).unwrap();
    let cp = chart.evaluate(&[0.0; 6]).unwrap();
    for (x, y) in cp.point.tuple.elements().iter().zip(p.tuple.elements()) {
        assert!((x.matrix() - y.matrix()).norm() < 1e-13);
    }
    let om = chart.omega(&[0.0; 6]).unwrap();
    let direct = form_on_cohomology(&p, &h).unwrap();
    assert!((om - direct.omega).norm() < 1e-10);
}

#[test]
fn closedness_at_identity_is_an_error_not_a_panic() {
    let t = GeneratorTuple::<f64>::identity(su2(), SurfacePresentation::closed(2).unwrap());
    let p = RepresentationPoint::new(t, GroupElement::identity(su2())).unwrap();
    let basis = cohomology_at(&p, 1e-9, 1e-6).unwrap();
    assert_eq!(basis.dim_b1(), 0);
    assert!(closedness_sweep(&p, &basis, 1e-3).is_err());
    // The cup product pairing: nondegenerate on the whole of z1 = h1.
    let s = form_on_cohomology(&p, &basis).unwrap().singular_values();
    assert_eq!(s.len(), 12);
    assert!(s[11] > 0.1 * s[0]);
}
