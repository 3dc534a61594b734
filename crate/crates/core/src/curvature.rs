//! The `R₋` block of Riemannian curvature in dimension four, its split into
//! traceless Ricci, anti-self-dual Weyl and scalar parts, and the torsion of
//! the twistor space of a self-dual Einstein 4-manifold.
//!
//! `R₋` maps `(Θ₁, Θ₂, Θ₃)` to `2·(Θ, Σ)·M` where `M` is the 6×3 matrix
//! whose upper block is `W⁻ + (s/12)·I` and lower block is `Z`.

use std::cmp::Ordering;
use std::sync::Arc;

use num::rational::BigRational;
use num::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exterior::{Form, GeneratorSpec};
use crate::scalar::{int, rat, GaussianRational};
use crate::su3::{
    classify_torsion, diag3, omega_space_with, read_torsion, trace3, Mat3, StructureClass, TorsionTensor,
};

type G = GaussianRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurvatureError {
    #[error("matrix is not the representation of any R₋: {0}")]
    NotCurvatureMatrix(String),
}

/// `(R₋)₁ = AΘ₁ − ĀΘ₂ + i·aΘ₃ + BΣ₁ − B̄Σ₂ + i·bΣ₃` and
/// `(R₋)₂ = Σ CₖΘₖ + Σ DₖΣₖ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurvatureMinus {
    #[serde(rename = "A")]
    pub a_cap: G,
    #[serde(rename = "B")]
    pub b_cap: G,
    #[serde(rename = "C")]
    pub c: [G; 3],
    #[serde(rename = "D")]
    pub d: [G; 3],
    #[serde(with = "crate::scalar::rational_string")]
    pub a: BigRational,
    #[serde(with = "crate::scalar::rational_string")]
    pub b: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurvatureDecomposition {
    #[serde(rename = "Z")]
    pub z: Mat3,
    #[serde(rename = "Wminus")]
    pub w_minus: Mat3,
    #[serde(with = "crate::scalar::rational_string")]
    pub s: BigRational,
}

impl CurvatureMinus {
    pub fn zero() -> Self {
        Self {
            a_cap: G::zero(),
            b_cap: G::zero(),
            c: [G::zero(), G::zero(), G::zero()],
            d: [G::zero(), G::zero(), G::zero()],
            a: BigRational::zero(),
            b: BigRational::zero(),
        }
    }

    /// The self-dual Einstein curvature with `C₂ = −a = s/24`.
    pub fn self_dual_einstein(s: &BigRational) -> Self {
        let k = s / int(24);
        Self { c: [G::zero(), G::real(k.clone()), G::zero()], a: -k, ..Self::zero() }
    }

    /// The 6×3 matrix `M` (without the overall factor 2).
    pub fn matrix(&self) -> [[G; 3]; 6] {
        let i = G::i();
        let [c1, c2, c3] = &self.c;
        let [d1, d2, d3] = &self.d;
        [
            [c2.conj(), c1.clone(), &i * &self.a_cap],
            [c1.conj(), c2.clone(), -(&i * &self.a_cap.conj())],
            [c3.conj(), c3.clone(), G::real(-self.a.clone())],
            [d2.conj(), d1.clone(), &i * &self.b_cap],
            [d1.conj(), d2.clone(), -(&i * &self.b_cap.conj())],
            [d3.conj(), d3.clone(), G::real(-self.b.clone())],
        ]
    }

    /// Reads the ten components back from a 6×3 matrix, checking that the
    /// redundant entries agree.
    pub fn from_matrix(m: &[[G; 3]; 6]) -> Result<Self, CurvatureError> {
        let i = G::i();
        let real = |x: &G, what: &str| -> Result<BigRational, CurvatureError> {
            if x.is_real() {
                Ok(-x.re.clone())
            } else {
                Err(CurvatureError::NotCurvatureMatrix(format!("{what} is not real")))
            }
        };
        let out = Self {
            a_cap: -(&i * &m[0][2]),
            b_cap: -(&i * &m[3][2]),
            c: [m[0][1].clone(), m[1][1].clone(), m[2][1].clone()],
            d: [m[3][1].clone(), m[4][1].clone(), m[5][1].clone()],
            a: real(&m[2][2], "entry (3,3)")?,
            b: real(&m[5][2], "entry (6,3)")?,
        };
        if out.matrix() != *m {
            return Err(CurvatureError::NotCurvatureMatrix("conjugate-paired entries disagree".into()));
        }
        Ok(out)
    }

    pub fn scalar_curvature(&self) -> BigRational {
        int(8) * (&self.c[1].re * int(2) - &self.a)
    }

    pub fn decompose(&self) -> CurvatureDecomposition {
        let m = self.matrix();
        let two = G::from_int(2);
        let s = self.scalar_curvature();
        let shift = G::real(&s / int(12));
        let w_minus = std::array::from_fn(|r| {
            std::array::from_fn(|c| {
                let x = &two * &m[r][c];
                if r == c {
                    &x - &shift
                } else {
                    x
                }
            })
        });
        let z = std::array::from_fn(|r| std::array::from_fn(|c| &two * &m[r + 3][c]));
        CurvatureDecomposition { z, w_minus, s }
    }

    /// Self-dual and Einstein: `b = A = B = C₁ = C₃ = D = 0` and
    /// `C₂ = C̄₂ = −a`.
    pub fn is_self_dual_einstein(&self) -> bool {
        self.b.is_zero()
            && self.a_cap.is_zero()
            && self.b_cap.is_zero()
            && self.c[0].is_zero()
            && self.c[2].is_zero()
            && self.d.iter().all(G::is_zero)
            && self.c[1].is_real()
            && self.c[1].re == -self.a.clone()
    }
}

impl CurvatureDecomposition {
    /// The 6×3 matrix `M` rebuilt from `(Z, W⁻, s)`.
    pub fn matrix(&self) -> [[G; 3]; 6] {
        let half = G::from_ratio(1, 2);
        let shift = G::real(&self.s / int(12));
        std::array::from_fn(|r| {
            std::array::from_fn(|c| {
                if r < 3 {
                    let x = if r == c { &self.w_minus[r][c] + &shift } else { self.w_minus[r][c].clone() };
                    &x * &half
                } else {
                    &self.z[r - 3][c] * &half
                }
            })
        })
    }

    pub fn reassemble(&self) -> Result<CurvatureMinus, CurvatureError> {
        CurvatureMinus::from_matrix(&self.matrix())
    }
}

/// The coframe `w, wb` plus the `u(2)` connection `α = [[i·a1, γ], [−γ̄, i·a2]]`.
pub fn twistor_space() -> Arc<crate::exterior::GeneratorSpace> {
    let mut extra = vec![GeneratorSpec::real("a1", false), GeneratorSpec::real("a2", false)];
    extra.extend(GeneratorSpec::pair("gamma", "gammabar", false));
    omega_space_with(&extra)
}

/// `dω = −diag(α, −tr α)∧ω + (ω̄₂∧ω̄₃, ω̄₃∧ω̄₁, (s/24)·ω̄₁∧ω̄₂)`.
pub fn twistor_structure_equation(s: &BigRational) -> [Form<G>; 3] {
    let space = twistor_space();
    let g = |n: &str| Form::<G>::generator(&space, n).expect("twistor generator");
    let w = |i: usize| g(&format!("w{i}"));
    let wb = |i: usize| g(&format!("wb{i}"));
    let alpha = [[g("a1").scale(&G::i()), g("gamma")], [-g("gammabar"), g("a2").scale(&G::i())]];
    let tr = &alpha[0][0] + &alpha[1][1];
    let wedge = |x: &Form<G>, y: &Form<G>| x.wedge(y).expect("same space");
    let mut out: [Form<G>; 3] = std::array::from_fn(|_| Form::zero(&space));
    for i in 0..2 {
        for j in 0..2 {
            out[i] = &out[i] - &wedge(&alpha[i][j], &w(j + 1));
        }
    }
    out[2] = wedge(&tr, &w(3));
    out[0] = &out[0] + &wedge(&wb(2), &wb(3));
    out[1] = &out[1] + &wedge(&wb(3), &wb(1));
    out[2] = &out[2] + &wedge(&wb(1), &wb(2)).scale(&G::real(s / int(24)));
    out
}

/// `N` read off the twistor structure equation, and its classification.
pub fn twistor_torsion(s: &BigRational) -> (Mat3, StructureClass) {
    let dw = twistor_structure_equation(s);
    let (n, s_part) = read_torsion(&dw).expect("coframe generators exist");
    debug_assert!(s_part.iter().flatten().all(G::is_zero));
    let class = classify_torsion(&TorsionTensor::with_n(n.clone()), false);
    (n, class)
}

/// The expected `N = diag(1, 1, s/24)`, for cross-checking.
pub fn twistor_nijenhuis(s: &BigRational) -> Mat3 {
    diag3([G::one(), G::one(), G::real(s / int(24))])
}

pub fn nijenhuis_trace(s: &BigRational) -> G {
    trace3(&twistor_nijenhuis(s))
}

/// Rescales the metric so that `s` becomes 24, −48 or 0. Returns the new
/// scalar curvature and the factor `f` with `s = f · s_new`.
pub fn normalize_scalar(s: &BigRational) -> (BigRational, BigRational) {
    match s.cmp(&BigRational::zero()) {
        Ordering::Greater => (int(24), s / int(24)),
        Ordering::Less => (int(-48), s.abs() / int(48)),
        Ordering::Equal => (BigRational::zero(), rat(1, 1)),
    }
}
