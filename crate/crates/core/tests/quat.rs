use nearcy::linalg::Field;
use nearcy::quat::*;
use nearcy::scalar::{int, rat, GaussianRational as G};
use nearcy::surd::Surd;
use nearcy::VectorSlot;
use proptest::prelude::*;

fn gauss() -> impl Strategy<Value = G> {
    (-20i64..=20, 1i64..=6, -20i64..=20, 1i64..=6).prop_map(|(a, b, c, d)| G::new(rat(a, b), rat(c, d)))
}

fn quaternion() -> impl Strategy<Value = Quaternion> {
    (gauss(), gauss()).prop_map(|(a, b)| Quaternion::new(a, b))
}

fn algebra_element(group: Group, vals: &[G]) -> QMat<Surd> {
    // rho1, rho2 real; w1, w2, w3, tau complex
    let map = ComponentMap::standard(group);
    let space = &map.space;
    let mut comps = vec![(0, Surd::from(G::real(vals[0].re.clone()))), (1, Surd::from(G::real(vals[1].re.clone())))];
    for (k, name) in ["w1", "w2", "w3", "tau"].iter().enumerate() {
        let i = space.index_of(name).unwrap();
        let z = Surd::from(vals[k + 2].clone());
        comps.push((i, z.clone()));
        comps.push((space.conj_index(i), z.conj()));
    }
    map.evaluate(&VectorSlot::new(space, comps)).unwrap()
}

#[test]
fn quaternion_units() {
    let i = Quaternion::new(G::i(), G::zero());
    let j = Quaternion::<G>::j();
    assert_eq!(i.mul(&j), Quaternion::new(G::zero(), -G::i()));
    assert_eq!(i.mul(&j), j.mul(&i).neg());
    assert_eq!(j.mul(&j), Quaternion::one().neg());
}

#[test]
fn inner_product_examples() {
    let one = [Quaternion::<G>::one(), Quaternion::zero()];
    let two = [Quaternion::<G>::zero(), Quaternion::one()];
    assert_eq!(inner_product(InnerProductKind::Definite, &one, &one), Quaternion::one());
    assert_eq!(inner_product(InnerProductKind::Split, &one, &one), Quaternion::one());
    assert_eq!(inner_product(InnerProductKind::Split, &two, &two), Quaternion::one().neg());
    assert_eq!(inner_product(InnerProductKind::Definite, &two, &two), Quaternion::one());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn associativity(p in quaternion(), q in quaternion(), r in quaternion()) {
        prop_assert_eq!(p.mul(&q).mul(&r), p.mul(&q.mul(&r)));
    }

    #[test]
    fn conjugate_gives_norm(q in quaternion()) {
        let n = q.mul(&q.conj());
        prop_assert_eq!(n.z2.clone(), G::zero());
        prop_assert_eq!(n.z1, G::real(q.z1.norm_sqr() + q.z2.norm_sqr()));
    }

    #[test]
    fn norm_is_multiplicative(p in quaternion(), q in quaternion()) {
        prop_assert_eq!(p.mul(&q).norm_sqr(), p.norm_sqr().mul(&q.norm_sqr()));
        prop_assert_eq!(p.mul(&q).conj(), q.conj().mul(&p.conj()));
    }

    #[test]
    fn involution_is_automorphism(p in quaternion(), q in quaternion()) {
        prop_assert_eq!(p.mul(&q).c_involution(), p.c_involution().mul(&q.c_involution()));
        prop_assert_eq!(p.c_involution().c_involution(), p);
    }

    #[test]
    fn inner_product_is_right_linear(v0 in quaternion(), v1 in quaternion(), w0 in quaternion(), w1 in quaternion(), q in quaternion()) {
        let v = [v0, v1];
        let w = [w0, w1];
        let wq = [w[0].mul(&q), w[1].mul(&q)];
        for kind in [InnerProductKind::Definite, InnerProductKind::Split] {
            prop_assert_eq!(inner_product(kind, &v, &wq), inner_product(kind, &v, &w).mul(&q));
            prop_assert_eq!(inner_product(kind, &w, &v), inner_product(kind, &v, &w).conj());
        }
    }

    #[test]
    fn lie_algebra_closure(a in prop::collection::vec(gauss(), 6), b in prop::collection::vec(gauss(), 6)) {
        for g in [Group::Sp2, Group::Sp11] {
            let x = algebra_element(g, &a);
            let y = algebra_element(g, &b);
            prop_assert!(in_algebra(g, &x));
            prop_assert!(in_algebra(g, &y));
            let xy = qmat_mul(&x, &y);
            let yx = qmat_mul(&y, &x);
            let br: QMat<Surd> = std::array::from_fn(|r| std::array::from_fn(|c| xy[r][c].sub(&yx[r][c])));
            prop_assert!(in_algebra(g, &br));
            // the component map reads the bracket back as generator values
            prop_assert!(ComponentMap::standard(g).read_values(&br).is_ok());
        }
    }
}

#[test]
fn component_maps_are_invertible() {
    for g in [Group::Sp2, Group::Sp11] {
        assert_eq!(ComponentMap::standard(g).rank(), 10);
    }
}

#[test]
fn torsion_coefficient_of_dw3() {
    let sp2 = maurer_cartan_derive(Group::Sp2).unwrap();
    let sp11 = maurer_cartan_derive(Group::Sp11).unwrap();
    let coeff = |mc: &MaurerCartan| mc.d_omega()[2].coefficient(&["wb1", "wb2"]).unwrap();
    assert_eq!(coeff(&sp2), Surd::one());
    assert_eq!(coeff(&sp11), Surd::from(G::from_int(-2)));
}

#[test]
fn structure_equations_close() {
    for g in [Group::Sp2, Group::Sp11] {
        let mc = maurer_cartan_derive(g).unwrap();
        assert!(mc.d_squared_failures().is_empty(), "{g:?}");
        let m = match_displayed_equation(&mc);
        assert!(m.matches, "{g:?}: {:?}", m.diffs);
    }
}

#[test]
fn flipped_tau_is_detected() {
    let mc = maurer_cartan_derive_from(&ComponentMap::standard(Group::Sp2).with_tau_flipped()).unwrap();
    let m = match_displayed_equation(&mc);
    assert!(!m.matches);
    assert!(m.diffs.iter().any(|d| d.starts_with("dw1: w2^taub")), "{:?}", m.diffs);
    assert!(m.diffs.iter().all(|d| !d.starts_with("dw3")));
}

#[test]
fn each_display_matches_only_its_own_normalization() {
    let matches = |g, c: Surd| {
        match_displayed_equation(&maurer_cartan_derive_from(&ComponentMap::scaled(g, &c)).unwrap()).matches
    };
    assert!(matches(Group::Sp2, Surd::inv_sqrt2()));
    assert!(!matches(Group::Sp2, Surd::one()));
    assert!(matches(Group::Sp11, Surd::one()));
    assert!(!matches(Group::Sp11, Surd::inv_sqrt2()));
}

#[test]
fn non_injective_map_is_rejected() {
    let mut map = ComponentMap::standard(Group::Sp2);
    map.phi[1][1].z2 = nearcy::Form::zero(&map.space);
    assert!(matches!(maurer_cartan_derive_from(&map), Err(QuatError::NotInvertible(_))));
}

#[test]
fn involution() {
    for g in [Group::Sp2, Group::Sp11] {
        let r = involution_action(g, 100, 11).unwrap();
        assert!(r.holds(), "{r:?}");
        assert_eq!(r.generator_map["rho1"], "-1*rho1");
        assert_eq!(r.generator_map["w3"], "1*wb3");
    }
}

#[test]
fn identity_frame_is_on_the_fixed_locus() {
    // y = (1, 0, 0) maps to x = (1, 0, 0, 0)
    let map = ComponentMap::standard(Group::Sp2);
    let s = check_fixed_point(&map, &[int(1), int(0), int(0)]).unwrap();
    assert_eq!(s.point, ["1", "0", "0", "0"].map(String::from));
    assert!(s.passed(), "{s:?}");
    let e = fixed_frame(Group::Sp2, &[int(1), int(0), int(0), int(0)]);
    assert_eq!(e[0][0], Quaternion::one());
    assert_eq!(e[1][1], Quaternion::one());
}

#[test]
fn fixed_locus_samples() {
    for g in [Group::Sp2, Group::Sp11] {
        let samples = sample_fixed_locus(g, 100, 2024).unwrap();
        assert_eq!(samples.len(), 100);
        for s in &samples {
            assert!(s.passed(), "{g:?}: {s:?}");
        }
    }
}

#[test]
fn pseudo_sphere_degenerate_parameter() {
    // 1 + y1² − y2² − y3² = 0
    let r = quadric_point(Group::Sp11, &[int(0), int(1), int(0)]);
    assert_eq!(r.unwrap_err(), QuatError::DegenerateSample);
    assert_eq!(sample_fixed_locus(Group::Sp2, 0, 1).unwrap_err(), QuatError::NoSamples);
}

#[test]
fn fixed_locus_is_deterministic() {
    let a = sample_fixed_locus(Group::Sp11, 5, 9).unwrap();
    let b = sample_fixed_locus(Group::Sp11, 5, 9).unwrap();
    let pa: Vec<_> = a.iter().map(|s| s.point.clone()).collect();
    let pb: Vec<_> = b.iter().map(|s| s.point.clone()).collect();
    assert_eq!(pa, pb);
}
