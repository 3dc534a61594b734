use nearcy::curvature::{
    normalize_scalar, twistor_nijenhuis, twistor_space, twistor_structure_equation, twistor_torsion, CurvatureMinus,
};
use nearcy::scalar::{int, rat};
use nearcy::su3::{coframe_forms, trace3, StructureClass, TorsionTensor};
use nearcy::{Form, GaussianRational as G};
use num::rational::BigRational;
use num::Zero;
use proptest::prelude::*;

fn arb_rat() -> impl Strategy<Value = BigRational> {
    (-20i64..=20, 1i64..=7).prop_map(|(n, d)| rat(n, d))
}

fn arb_g() -> impl Strategy<Value = G> {
    (arb_rat(), arb_rat()).prop_map(|(a, b)| G::new(a, b))
}

fn arb_curvature() -> impl Strategy<Value = CurvatureMinus> {
    (arb_g(), arb_g(), [arb_g(), arb_g(), arb_g()], [arb_g(), arb_g(), arb_g()], arb_rat(), arb_rat())
        .prop_map(|(a_cap, b_cap, c, d, a, b)| CurvatureMinus { a_cap, b_cap, c, d, a, b })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn weyl_part_is_trace_free(rm in arb_curvature()) {
        prop_assert!(trace3(&rm.decompose().w_minus).is_zero());
    }

    #[test]
    fn reassembly_is_identity(rm in arb_curvature()) {
        prop_assert_eq!(rm.decompose().reassemble().unwrap(), rm);
    }
}

#[test]
fn zero_input() {
    let d = CurvatureMinus::zero().decompose();
    assert!(d.s.is_zero());
    assert!(d.z.iter().flatten().all(G::is_zero));
    assert!(d.w_minus.iter().flatten().all(G::is_zero));
}

#[test]
fn self_dual_einstein_examples() {
    for s in [int(24), int(-48), rat(5, 3)] {
        let rm = CurvatureMinus::self_dual_einstein(&s);
        assert!(rm.is_self_dual_einstein());
        let d = rm.decompose();
        assert_eq!(d.s, s.clone());
        assert_eq!(G::real(d.s.clone()), &rm.c[1] * &G::from_int(24));
        assert!(d.z.iter().flatten().all(G::is_zero));
        assert!(d.w_minus.iter().flatten().all(G::is_zero));
    }
    let mut rm = CurvatureMinus::self_dual_einstein(&int(24));
    rm.c[0] = G::one();
    assert!(!rm.is_self_dual_einstein());
}

#[test]
fn inconsistent_matrix_is_rejected() {
    let mut m = CurvatureMinus::self_dual_einstein(&int(24)).matrix();
    m[0][0] = G::from_int(5);
    assert!(CurvatureMinus::from_matrix(&m).is_err());
}

#[test]
fn json_shape() {
    let mut rm = CurvatureMinus::zero();
    rm.c[1] = G::one();
    rm.a = int(-1);
    let v = serde_json::to_value(&rm).unwrap();
    assert_eq!(v["a"], "-1");
    assert_eq!(v["C"][1]["re"], "1");
    let back: CurvatureMinus = serde_json::from_value(v).unwrap();
    assert_eq!(back, rm);
}

#[test]
fn twistor_examples() {
    let (n, cls) = twistor_torsion(&int(24));
    assert_eq!(n, twistor_nijenhuis(&int(24)));
    assert_eq!(cls, StructureClass::NearlyKahler { c: int(1) });
    let (n, cls) = twistor_torsion(&int(-48));
    assert_eq!(n[2][2], G::from_int(-2));
    assert_eq!(cls, StructureClass::NearlyCalabiYauStrict);
    let (_, cls) = twistor_torsion(&int(0));
    assert!(matches!(cls, StructureClass::Admissible { .. }));
}

#[test]
fn twistor_third_column_at_negative_scalar() {
    let dw = twistor_structure_equation(&int(-48));
    assert_eq!(dw[2].coefficient(&["wb1", "wb2"]).unwrap(), G::from_int(-2));
    for f in &dw {
        for m in f.terms().keys() {
            let names: Vec<&str> = m.iter().map(|&i| f.space().name(i)).collect();
            let has_w = names.iter().any(|n| n.starts_with('w') && !n.starts_with("wb"));
            let has_wb = names.iter().any(|n| n.starts_with("wb"));
            assert!(!(has_w && has_wb), "mixed term {names:?}");
        }
    }
}

#[test]
fn twistor_trace_and_class_for_many_scalars() {
    for k in -10i64..10 {
        let s = rat(7 * k + 3, 2);
        let (n, cls) = twistor_torsion(&s);
        assert_eq!(trace3(&n), G::real(int(2) + &s / int(24)));
        assert!((0..3).all(|i| (0..3).all(|j| n[i][j] == n[j][i].conj())));
        assert_ne!(cls, StructureClass::Generic);
    }
}

// Oracle: with the connection kept, dΩ computed by Leibniz from the twistor
// equations must lose every connection term and agree with the torsion model.
#[test]
fn twistor_d_omega_matches_torsion_model() {
    for s in [int(24), int(-48), rat(-7, 2)] {
        let dw = twistor_structure_equation(&s);
        let space = twistor_space();
        let w = |i: usize| Form::<G>::generator(&space, &format!("w{i}")).unwrap();
        let wb = |i: usize| Form::<G>::generator(&space, &format!("wb{i}")).unwrap();
        let mut d_omega = Form::zero(&space);
        for i in 0..3 {
            let t = &dw[i].wedge(&wb(i + 1)).unwrap() - &w(i + 1).wedge(&dw[i].conjugate()).unwrap();
            d_omega = &d_omega + &t.scale(&G::new(int(0), rat(1, 2)));
        }
        let (expected, _) = TorsionTensor::with_n(twistor_nijenhuis(&s)).differentials();
        assert_eq!(d_omega.terms().len(), expected.terms().len());
        for (m, c) in d_omega.terms() {
            let names: Vec<&str> = m.iter().map(|&i| space.name(i)).collect();
            assert_eq!(expected.coefficient(&names).unwrap(), *c);
        }
        if s == int(24) {
            // nearly Kähler: dΩ is a multiple of Im Ψ on the coframe
            let (_, psi) = coframe_forms(&space).unwrap();
            assert_eq!(d_omega, psi.imaginary_part().scale(&G::from_int(3)));
        }
    }
}

#[test]
fn normalization() {
    assert_eq!(normalize_scalar(&int(12)), (int(24), rat(1, 2)));
    assert_eq!(normalize_scalar(&int(-96)), (int(-48), int(2)));
    assert_eq!(normalize_scalar(&int(0)).0, int(0));
}
