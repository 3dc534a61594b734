//! Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;

use common::{arb_form, arb_vector, sign};
use nearcy::calibration::{
    lambda_phase, mclean_samples, random_sl_plane, random_su3, rational_phase, su3_witness, Plane3,
};
use nearcy::cartan::{build_admissible_system, build_nearly_cy_system};
use nearcy::curvature::{twistor_torsion, CurvatureMinus};
use nearcy::exterior::hodge_star;
use nearcy::quat::{involution_action, match_displayed_equation, maurer_cartan_derive, sample_fixed_locus, Group};
use nearcy::scalar::{int, rat};
use nearcy::su3::{diag3, identity3, interleaved_volume_form, model_forms, trace3, StructureClass};
use nearcy::{GaussianRational as G, GeneratorSpace};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn zero3() -> [G; 3] {
    [G::zero(), G::zero(), G::zero()]
}

fn nearly_cy_cartan() -> Outcome {
    let sys = build_nearly_cy_system();
    let r = sys.cartan_test(&sys.default_flag().map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    ensure(r.integral_rank == 34, format!("integral rank {}", r.integral_rank))?;
    ensure(r.s == [0, 0, 1, 3, 6, 9, 9], format!("characters {:?}", r.s))?;
    let weighted: usize = r.s[..6].iter().enumerate().map(|(k, s)| (6 - k) * s).sum();
    ensure(weighted == 34 && r.test_lhs == 34, format!("weighted sum {weighted}"))?;
    ensure(r.involutive, "not involutive")?;
    Ok(format!("rank 34, s = {:?}, involutive", r.s))
}

fn admissible_cartan() -> Outcome {
    let sys = build_admissible_system(&G::one(), &zero3()).map_err(|e| e.to_string())?;
    let r = sys.cartan_test(&sys.default_flag().map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    ensure(r.integral_rank == 35, format!("integral rank {}", r.integral_rank))?;
    ensure(r.s == [0, 0, 1, 3, 6, 10, 15], format!("characters {:?}", r.s))?;
    ensure(r.c[3..] == [4, 10, 20], format!("polar ranks {:?}", r.c))?;
    ensure(r.involutive, "a = 1 not involutive")?;
    let zero = build_admissible_system(&G::zero(), &zero3()).map_err(|e| e.to_string())?;
    let z = zero.cartan_test(&zero.default_flag().map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    ensure(z.c[5] <= 17, format!("a = 0: c5 = {}", z.c[5]))?;
    ensure(!z.involutive, "a = 0 reported involutive")?;
    Ok(format!("a = 1: s = {:?}; a = 0: c5 = {}, not involutive", r.s, z.c[5]))
}

fn polar_relation() -> Outcome {
    let sys = build_nearly_cy_system();
    let rel = sys.polar_relation_check().map_err(|e| e.to_string())?;
    ensure(rel.residual_vanishes && rel.holds, "four-term relation does not vanish")?;
    let flag = sys.default_flag().map_err(|e| e.to_string())?;
    let forms = sys.polar_forms(&flag[..5]).map_err(|e| e.to_string())?;
    ensure(forms.len() == 20, format!("{} polar forms", forms.len()))?;
    let rank = sys.polar_rank(&flag[..5]).map_err(|e| e.to_string())?;
    ensure(rank == 19, format!("rank {rank}"))?;
    Ok("relation vanishes, 20 forms of rank 19".into())
}

fn flag_genericity() -> Outcome {
    let sys = build_nearly_cy_system();
    let seeds = 20u64;
    for seed in 0..seeds {
        let flag = sys.random_flag(1000 + seed).map_err(|e| e.to_string())?;
        let r = sys.cartan_test(&flag).map_err(|e| e.to_string())?;
        ensure(r.s == [0, 0, 1, 3, 6, 9, 9], format!("seed {}: {:?}", 1000 + seed, r.s))?;
    }
    Ok(format!("{seeds} random flags give (0,0,1,3,6,9,9)"))
}

fn random_curvature(rng: &mut ChaCha8Rng) -> CurvatureMinus {
    let mut q = || rat(rng.gen_range(-30..=30), rng.gen_range(1..=8));
    let mut g = || G::new(q(), q());
    CurvatureMinus { a_cap: g(), b_cap: g(), c: [g(), g(), g()], d: [g(), g(), g()], a: q(), b: q() }
}

fn curvature() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for k in 0..1000 {
        let rm = random_curvature(&mut rng);
        let d = rm.decompose();
        ensure(trace3(&d.w_minus).is_zero(), format!("input {k}: trace of W- nonzero"))?;
        ensure(d.reassemble().ok() == Some(rm), format!("input {k}: reassembly differs"))?;
    }
    for s in [int(24), int(-48), rat(7, 5)] {
        let rm = CurvatureMinus::self_dual_einstein(&s);
        let d = rm.decompose();
        ensure(d.z.iter().chain(&d.w_minus).flatten().all(G::is_zero), "self-dual Einstein: Z or W- nonzero")?;
        ensure(G::real(d.s.clone()) == &rm.c[1] * &G::from_int(24), "s != 24 C2")?;
    }
    Ok("1000 random inputs, self-dual Einstein cases".into())
}

fn twistor() -> Outcome {
    let (n, class) = twistor_torsion(&int(24));
    ensure(n == identity3(), "s = 24: N != I")?;
    ensure(matches!(class, StructureClass::NearlyKahler { .. }), format!("s = 24: {class:?}"))?;
    let (n, class) = twistor_torsion(&int(-48));
    ensure(n == diag3([G::one(), G::one(), G::from_int(-2)]), "s = -48: N != diag(1,1,-2)")?;
    ensure(class == StructureClass::NearlyCalabiYauStrict, format!("s = -48: {class:?}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..20 {
        let s = rat(rng.gen_range(-500..=500), rng.gen_range(1..=9));
        let (n, _) = twistor_torsion(&s);
        ensure(trace3(&n) == G::real(int(2) + &s / int(24)), format!("trace mismatch at s = {s}"))?;
    }
    Ok("N = I (nearly Kahler), diag(1,1,-2) (strict), trace 2 + s/24 on 20 values".into())
}

fn maurer_cartan() -> Outcome {
    for g in [Group::Sp2, Group::Sp11] {
        let mc = maurer_cartan_derive(g).map_err(|e| e.to_string())?;
        let m = match_displayed_equation(&mc);
        ensure(m.matches, format!("{}: {:?}", g.name(), m.diffs))?;
        let fails = mc.d_squared_failures();
        ensure(fails.is_empty(), format!("{}: d^2 != 0 on {fails:?}", g.name()))?;
    }
    Ok("sp2 and sp11 match term by term, d^2 = 0".into())
}

fn involution() -> Outcome {
    for g in [Group::Sp2, Group::Sp11] {
        let r = involution_action(g, 100, 99).map_err(|e| e.to_string())?;
        ensure(r.holds(), format!("{}: {r:?}", g.name()))?;
    }
    Ok("C*w = conj(w), automorphism on 100 pairs, C*Omega = -Omega, C*Psi = conj(Psi)".into())
}

fn fixed_loci() -> Outcome {
    for g in [Group::Sp2, Group::Sp11] {
        let samples = sample_fixed_locus(g, 100, 31337).map_err(|e| e.to_string())?;
        if let Some(bad) = samples.iter().find(|s| !s.passed()) {
            return Err(format!("{}: {bad:?}", g.name()));
        }
    }
    Ok("100 exact samples on each fixed locus".into())
}

fn calibration() -> Outcome {
    let r3 = Plane3::real_span();
    let l = lambda_phase(&r3).map_err(|e| e.to_string())?;
    ensure(l.exact == Some(G::one()), "lambda(R3) != 1")?;
    let base = r3.image(&diag3([rational_phase(2, 1), rational_phase(1, 3), G::one()])).map_err(|e| e.to_string())?;
    let l0 = lambda_phase(&base).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for k in 0..50 {
        let u = random_su3(&mut rng);
        let l = lambda_phase(&base.image(&u).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        ensure(l.psi == l0.psi && l.volume_sq == l0.volume_sq, format!("rotation {k} changes lambda"))?;
    }
    for s in mclean_samples(50, 13) {
        ensure(s.check.holds, format!("normal identity fails: {:?}", s.check))?;
    }
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let (p, _) = random_sl_plane(&mut rng);
        let w = su3_witness(&p).map_err(|e| e.to_string())?;
        worst = worst.max(w.unitary_residual).max(w.det_residual).max(w.image_residual);
    }
    ensure(worst < 1e-9, format!("witness residual {worst:e}"))?;
    Ok(format!("lambda invariant under 50 rotations, 50 normal identities, witness residual {worst:.1e}"))
}

fn core_properties() -> Outcome {
    let real6 = GeneratorSpace::standard_real(6);
    let cplx = GeneratorSpace::standard_complex(3);
    let mut runner = TestRunner::new(Config { cases: 256, failure_persistence: None, ..Config::default() });
    let pair = (0usize..=3, 0usize..=3).prop_flat_map({
        let s = real6.clone();
        move |(p, q)| (Just(p), Just(q), arb_form(s.clone(), p), arb_form(s.clone(), q))
    });
    runner
        .run(&pair, |(p, q, f, g)| {
            prop_assert_eq!(f.wedge(&g).unwrap(), g.wedge(&f).unwrap().scale(&sign(p * q % 2 == 1)));
            Ok(())
        })
        .map_err(|e| format!("graded antisymmetry: {e}"))?;
    let triple = (1usize..=3).prop_flat_map({
        let s = real6.clone();
        move |p| (Just(p), arb_form(s.clone(), p), arb_form(s.clone(), 2), arb_vector(s.clone()))
    });
    runner
        .run(&triple, |(p, f, g, v)| {
            let lhs = f.wedge(&g).unwrap().interior(&v).unwrap();
            let rhs = &f.interior(&v).unwrap().wedge(&g).unwrap()
                + &f.wedge(&g.interior(&v).unwrap()).unwrap().scale(&sign(p % 2 == 1));
            prop_assert_eq!(lhs, rhs);
            Ok(())
        })
        .map_err(|e| format!("interior antiderivation: {e}"))?;
    runner
        .run(&(arb_form(cplx.clone(), 2), arb_form(cplx.clone(), 1)), |(f, g)| {
            prop_assert_eq!(f.conjugate().conjugate(), f.clone());
            prop_assert_eq!(f.wedge(&g).unwrap().conjugate(), f.conjugate().wedge(&g.conjugate()).unwrap());
            Ok(())
        })
        .map_err(|e| format!("conjugation: {e}"))?;
    let hodge = (0usize..=6).prop_flat_map({
        let s = real6.clone();
        move |k| (Just(k), arb_form(s.clone(), k))
    });
    runner
        .run(&hodge, |(k, f)| {
            prop_assert_eq!(hodge_star(&hodge_star(&f, 6).unwrap(), 6).unwrap(), f.scale(&sign(k * (6 - k) % 2 == 1)));
            Ok(())
        })
        .map_err(|e| format!("hodge star: {e}"))?;
    let m = model_forms(3).map_err(|e| e.to_string())?;
    let vol = interleaved_volume_form(3);
    let cube = m.omega0.wedge(&m.omega0).and_then(|x| x.wedge(&m.omega0)).map_err(|e| e.to_string())?;
    ensure(cube == vol.scale(&G::from_int(6)), "Omega0^3 != 6 vol")?;
    let top = m.psi0_complex.wedge(&m.psi0_complex.conjugate()).map_err(|e| e.to_string())?.scale(&G::i());
    ensure(top == vol.scale(&G::from_int(8)), "i Psi0 ^ conj(Psi0) != 8 vol")?;
    Ok("graded antisymmetry, antiderivation, conjugation, ** = +-1, Omega0^3 = 6 vol, i Psi0^conj(Psi0) = 8 vol".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("nearly-CY Cartan test", nearly_cy_cartan),
        ("admissible Cartan test", admissible_cartan),
        ("polar relation", polar_relation),
        ("flag genericity", flag_genericity),
        ("curvature decomposition", curvature),
        ("twistor torsion", twistor),
        ("Maurer-Cartan equations", maurer_cartan),
        ("real structure", involution),
        ("fixed loci", fixed_loci),
        ("calibration", calibration),
        ("core algebra properties", core_properties),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
