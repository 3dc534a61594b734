//! The flat SU(3) model, the `so(2m) ≅ Λ²` dictionary, and torsion
//! classification of SU(3)-structures.
//!
//! Real coordinates follow `dz_j = dx_j + i·dx_{m+j}` on `dx1..dx{2m}`, with
//! `dx1∧…∧dx{2m}` the positive orientation.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::rational::BigRational;
use num::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exterior::{ExteriorError, Form, GeneratorSpace, GeneratorSpec, StructureEquations};
use crate::linalg::{self, SparseRow};
use crate::scalar::{rat, GaussianRational};

type G = GaussianRational;
pub type Mat3 = [[G; 3]; 3];
pub type Vec3 = [G; 3];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Su3Error {
    #[error("only m = 2 and m = 3 are supported, got {0}")]
    UnsupportedDimension(usize),
    #[error("matrix is not in so(2m): {0}")]
    NotSkew(String),
    #[error("form is not a real 2-form on the complex coordinate space")]
    NotRealTwoForm,
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
}

/// Signature of the permutation `(i j k)` of `{0,1,2}`, zero if an index repeats.
pub fn levi_civita(i: usize, j: usize, k: usize) -> i64 {
    if i == j || j == k || i == k {
        return 0;
    }
    let inversions = (i > j) as usize + (i > k) as usize + (j > k) as usize;
    if inversions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub fn zero3() -> Mat3 {
    std::array::from_fn(|_| std::array::from_fn(|_| G::zero()))
}

pub fn identity3() -> Mat3 {
    std::array::from_fn(|i| std::array::from_fn(|j| if i == j { G::one() } else { G::zero() }))
}

pub fn diag3(d: [G; 3]) -> Mat3 {
    let mut m = zero3();
    for (i, v) in d.into_iter().enumerate() {
        m[i][i] = v;
    }
    m
}

pub fn trace3(m: &Mat3) -> G {
    &(&m[0][0] + &m[1][1]) + &m[2][2]
}

fn is_zero3(m: &Mat3) -> bool {
    m.iter().flatten().all(G::is_zero)
}

fn is_hermitian3(m: &Mat3) -> bool {
    (0..3).all(|i| (0..3).all(|j| m[i][j] == m[j][i].conj()))
}

/// The generator space `w1 w2 w3 wb1 wb2 wb3` of a unitary coframe.
pub fn omega_space() -> Arc<GeneratorSpace> {
    omega_space_with(&[])
}

/// The unitary coframe followed by extra generators.
pub fn omega_space_with(extra: &[GeneratorSpec]) -> Arc<GeneratorSpace> {
    let mut specs: Vec<GeneratorSpec> =
        (1..=3).map(|i| GeneratorSpec { name: format!("w{i}"), conj: format!("wb{i}"), independence: true }).collect();
    specs.extend((1..=3).map(|i| GeneratorSpec { name: format!("wb{i}"), conj: format!("w{i}"), independence: true }));
    specs.extend(extra.iter().cloned());
    GeneratorSpace::new(specs, BTreeMap::new()).expect("coframe space is valid")
}

/// `Ω = (i/2) Σ wᵢ∧w̄ᵢ` and `Ψ = w1∧w2∧w3` on a space containing the coframe.
pub fn coframe_forms(space: &Arc<GeneratorSpace>) -> Result<(Form<G>, Form<G>), ExteriorError> {
    let w = |i: usize| Form::<G>::generator(space, &format!("w{i}"));
    let wb = |i: usize| Form::<G>::generator(space, &format!("wb{i}"));
    let mut omega = Form::zero(space);
    for i in 1..=3 {
        omega = &omega + &w(i)?.wedge(&wb(i)?)?;
    }
    let omega = omega.scale(&G::new(BigRational::zero(), rat(1, 2)));
    let psi = w(1)?.wedge(&w(2)?)?.wedge(&w(3)?)?;
    Ok((omega, psi))
}

/// The flat model `(g₀, Ω₀, Ψ₀)` written on the real space `dx1..dx{2m}`.
#[derive(Clone, Debug)]
pub struct ModelForms {
    pub m: usize,
    /// Gram matrix of `g₀` in the basis dual to `dx1..dx{2m}`.
    pub g0: Vec<Vec<BigRational>>,
    pub omega0: Form<G>,
    pub psi0_complex: Form<G>,
    /// `Im Ψ₀`.
    pub psi0: Form<G>,
    /// `Re Ψ₀`.
    pub phi0: Form<G>,
}

/// Pulls a form on `dz1..dzm, dzbar1..dzbarm` back to `dx1..dx{2m}`.
pub fn complex_to_real(f: &Form<G>, m: usize) -> Result<Form<G>, ExteriorError> {
    let real = GeneratorSpace::standard_real(2 * m);
    let dx = |i: usize| Form::<G>::generator_at(&real, i);
    let mut images = Vec::with_capacity(2 * m);
    for j in 0..m {
        images.push(&dx(j) + &dx(m + j).scale(&G::i()));
    }
    for j in 0..m {
        images.push(&dx(j) - &dx(m + j).scale(&G::i()));
    }
    f.pull_back(&real, &images)
}

/// The flat `(i/2)Σ dz∧dz̄` and `dz1∧…∧dzm` on the complex coordinate space.
pub fn complex_model_forms(m: usize) -> Result<(Form<G>, Form<G>), Su3Error> {
    if !(m == 2 || m == 3) {
        return Err(Su3Error::UnsupportedDimension(m));
    }
    let space = GeneratorSpace::standard_complex(m);
    let mut omega = Form::zero(&space);
    for j in 0..m {
        omega = &omega + &Form::from_terms(&space, [(vec![j, m + j], G::new(BigRational::zero(), rat(1, 2)))]);
    }
    let psi = Form::from_terms(&space, [((0..m).collect::<Vec<_>>(), G::one())]);
    Ok((omega, psi))
}

pub fn model_forms(m: usize) -> Result<ModelForms, Su3Error> {
    let (omega, psi) = complex_model_forms(m)?;
    let omega0 = complex_to_real(&omega, m)?;
    let psi0_complex = complex_to_real(&psi, m)?;
    let n = 2 * m;
    let g0 = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
        .collect();
    Ok(ModelForms { m, g0, psi0: psi0_complex.imaginary_part(), phi0: psi0_complex.real_part(), omega0, psi0_complex })
}

/// `dx1∧…∧dx{2m}`.
pub fn volume_form(m: usize) -> Form<G> {
    let s = GeneratorSpace::standard_real(2 * m);
    Form::from_terms(&s, [((0..2 * m).collect::<Vec<_>>(), G::one())])
}

/// `dx1∧dy1∧…∧dxm∧dym` with `dy_j = dx_{m+j}`.
pub fn interleaved_volume_form(m: usize) -> Form<G> {
    let s = GeneratorSpace::standard_real(2 * m);
    let idx: Vec<usize> = (0..m).flat_map(|j| [j, m + j]).collect();
    Form::from_terms(&s, [(idx, G::one())])
}

/// An element of `so(2m, R)` written in the complex basis as the block
/// matrix `[[A, B̄], [B, Ā]]` with `Aᵗ + Ā = 0` and `Bᵗ + B = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct SkewMatrix {
    pub a: Vec<Vec<G>>,
    pub b: Vec<Vec<G>>,
}

impl SkewMatrix {
    pub fn zero(m: usize) -> Self {
        Self { a: vec![vec![G::zero(); m]; m], b: vec![vec![G::zero(); m]; m] }
    }

    pub fn m(&self) -> usize {
        self.a.len()
    }

    pub fn validate(&self) -> Result<(), Su3Error> {
        let m = self.a.len();
        if !(m == 2 || m == 3) {
            return Err(Su3Error::UnsupportedDimension(m));
        }
        if self.b.len() != m || self.a.iter().chain(&self.b).any(|r| r.len() != m) {
            return Err(Su3Error::NotSkew("blocks must be m×m".into()));
        }
        for i in 0..m {
            for j in 0..m {
                if !(&self.a[j][i] + &self.a[i][j].conj()).is_zero() {
                    return Err(Su3Error::NotSkew(format!("A is not anti-Hermitian at ({i},{j})")));
                }
                if !(&self.b[j][i] + &self.b[i][j]).is_zero() {
                    return Err(Su3Error::NotSkew(format!("B is not skew at ({i},{j})")));
                }
            }
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Self {
        let m = self.m();
        let f =
            |x: &Vec<Vec<G>>, y: &Vec<Vec<G>>| (0..m).map(|i| (0..m).map(|j| &x[i][j] + &y[i][j]).collect()).collect();
        Self { a: f(&self.a, &other.a), b: f(&self.b, &other.b) }
    }

    /// The full `2m × 2m` complex matrix.
    pub fn full(&self) -> Vec<Vec<G>> {
        let m = self.m();
        let mut out = vec![vec![G::zero(); 2 * m]; 2 * m];
        for i in 0..m {
            for j in 0..m {
                out[i][j] = self.a[i][j].clone();
                out[i][m + j] = self.b[i][j].conj();
                out[m + i][j] = self.b[i][j].clone();
                out[m + i][m + j] = self.a[i][j].conj();
            }
        }
        out
    }

    /// Reads the blocks back from a full matrix, checking the block pattern.
    pub fn from_full(h: &[Vec<G>]) -> Result<Self, Su3Error> {
        let n = h.len();
        if !n.is_multiple_of(2) || h.iter().any(|r| r.len() != n) {
            return Err(Su3Error::NotSkew("matrix must be square of even size".into()));
        }
        let m = n / 2;
        let a: Vec<Vec<G>> = (0..m).map(|i| h[i][..m].to_vec()).collect();
        let b: Vec<Vec<G>> = (0..m).map(|i| h[m + i][..m].to_vec()).collect();
        let out = Self { a, b };
        if out.full() != h {
            return Err(Su3Error::NotSkew("blocks are not of the form [[A, conj B], [B, conj A]]".into()));
        }
        out.validate()?;
        Ok(out)
    }
}

/// `H ↦ ½ A_{ij̄} dz̄ᵢ∧dzⱼ + ¼ (B_{ij} dzᵢ∧dzⱼ + B̄_{ij} dz̄ᵢ∧dz̄ⱼ)` on the complex
/// coordinate space.
pub fn matrix_to_two_form(h: &SkewMatrix) -> Result<Form<G>, Su3Error> {
    h.validate()?;
    let m = h.m();
    let space = GeneratorSpace::standard_complex(m);
    let half = G::from_ratio(1, 2);
    let quarter = G::from_ratio(1, 4);
    let mut terms = Vec::new();
    for i in 0..m {
        for j in 0..m {
            terms.push((vec![m + i, j], &half * &h.a[i][j]));
            terms.push((vec![i, j], &quarter * &h.b[i][j]));
            terms.push((vec![m + i, m + j], &quarter * &h.b[i][j].conj()));
        }
    }
    Ok(Form::from_terms(&space, terms))
}

/// Inverse of [`matrix_to_two_form`].
pub fn two_form_to_matrix(f: &Form<G>, m: usize) -> Result<SkewMatrix, Su3Error> {
    if !(m == 2 || m == 3) {
        return Err(Su3Error::UnsupportedDimension(m));
    }
    if !f.space().is_standard_complex(m) {
        return Err(Su3Error::Exterior(ExteriorError::SpaceMismatch));
    }
    if f.degrees().iter().any(|&d| d != 2) || !f.is_real() {
        return Err(Su3Error::NotRealTwoForm);
    }
    let mut h = SkewMatrix::zero(m);
    let two = G::from_int(2);
    for i in 0..m {
        for j in 0..m {
            let mixed = f.coefficient_at(&[m + i, j]);
            h.a[i][j] = &two * &mixed;
            if i != j {
                h.b[i][j] = &two * &f.coefficient_at(&[i, j]);
            }
        }
    }
    h.validate()?;
    if matrix_to_two_form(&h)? != *f {
        return Err(Su3Error::NotRealTwoForm);
    }
    Ok(h)
}

/// Splits `H ∈ so(4)` into its `su(2)₊` part `(A − ½tr A·I, 0)` and its
/// `su(2)₋` part `(½tr A·I, B)`.
pub fn su2_split(h: &SkewMatrix) -> Result<(SkewMatrix, SkewMatrix), Su3Error> {
    h.validate()?;
    if h.m() != 2 {
        return Err(Su3Error::UnsupportedDimension(h.m()));
    }
    let half_trace = (&h.a[0][0] + &h.a[1][1]).scale(&rat(1, 2));
    let mut plus = SkewMatrix::zero(2);
    let mut minus = SkewMatrix::zero(2);
    for i in 0..2 {
        for j in 0..2 {
            plus.a[i][j] = if i == j { &h.a[i][j] - &half_trace } else { h.a[i][j].clone() };
            minus.b[i][j] = h.b[i][j].clone();
        }
        minus.a[i][i] = half_trace.clone();
    }
    Ok((plus, minus))
}

/// The first-order invariants `(N_{ij̄}, S_{ij}, λ_k)` of an SU(3)-structure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TorsionTensor {
    #[serde(rename = "N")]
    pub n: Mat3,
    #[serde(rename = "S")]
    pub s: Mat3,
    #[serde(rename = "lambda")]
    pub lam: Vec3,
}

/// Raw Nijenhuis components `N_{ijk} = −N_{ikj}`.
pub type RawNijenhuis = [[[G; 3]; 3]; 3];

impl TorsionTensor {
    pub fn zero() -> Self {
        Self { n: zero3(), s: zero3(), lam: std::array::from_fn(|_| G::zero()) }
    }

    pub fn with_n(n: Mat3) -> Self {
        Self { n, ..Self::zero() }
    }

    /// `N_{ijk} = ε_{jkl} N_{il̄}`.
    pub fn raw_nijenhuis(&self) -> RawNijenhuis {
        std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                std::array::from_fn(|k| {
                    let mut acc = G::zero();
                    for l in 0..3 {
                        let e = levi_civita(j, k, l);
                        if e != 0 {
                            acc += &self.n[i][l].scale(&BigRational::from_integer(e.into()));
                        }
                    }
                    acc
                })
            })
        })
    }

    /// `N_{ij̄} = ½ ε̄_{jkl} N_{ikl}`.
    pub fn normalize_nijenhuis(raw: &RawNijenhuis) -> Mat3 {
        std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let mut acc = G::zero();
                for k in 0..3 {
                    for l in 0..3 {
                        let e = levi_civita(j, k, l);
                        if e != 0 {
                            acc += &raw[i][k][l].scale(&BigRational::from_integer(e.into()));
                        }
                    }
                }
                acc.scale(&rat(1, 2))
            })
        })
    }

    /// Torsion part of `dωᵢ` (connection terms omitted):
    /// `½ S_{ij} ε̄_{jkl} ωₖ∧ωₗ + ½ N_{ij̄} ε_{jkl} ω̄ₖ∧ω̄ₗ + (i/3)(λₖω̄ₖ + λ̄ₖωₖ)∧ωᵢ`.
    pub fn torsion_forms(&self, space: &Arc<GeneratorSpace>) -> Result<[Form<G>; 3], ExteriorError> {
        let w: Vec<usize> = (1..=3).map(|i| space.index_of(&format!("w{i}"))).collect::<Result<_, _>>()?;
        let wb: Vec<usize> = (1..=3).map(|i| space.index_of(&format!("wb{i}"))).collect::<Result<_, _>>()?;
        let third_i = G::new(BigRational::zero(), rat(1, 3));
        let mut out: Vec<Form<G>> = Vec::with_capacity(3);
        for i in 0..3 {
            let mut terms = Vec::new();
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        let e = levi_civita(j, k, l);
                        if e == 0 {
                            continue;
                        }
                        let e = BigRational::new(e.into(), 2.into());
                        terms.push((vec![w[k], w[l]], self.s[i][j].scale(&e)));
                        terms.push((vec![wb[k], wb[l]], self.n[i][j].scale(&e)));
                    }
                }
            }
            for k in 0..3 {
                terms.push((vec![wb[k], w[i]], &third_i * &self.lam[k]));
                terms.push((vec![w[k], w[i]], &third_i * &self.lam[k].conj()));
            }
            out.push(Form::from_terms(space, terms));
        }
        Ok(out.try_into().expect("three forms"))
    }

    /// Structure equations on [`omega_space`] with the connection set to zero.
    /// The su(3) connection drops out of `dΩ` and `dΨ`, so these suffice to
    /// compute both.
    pub fn structure_equations(&self) -> StructureEquations<G> {
        let space = omega_space();
        let dw = self.torsion_forms(&space).expect("coframe generators exist");
        let mut eq = StructureEquations::new(&space);
        for (i, f) in dw.iter().enumerate() {
            eq.set(i, f.clone());
            eq.set(3 + i, f.conjugate());
        }
        eq
    }

    /// `(dΩ, dΨ)` computed from the structure equations.
    pub fn differentials(&self) -> (Form<G>, Form<G>) {
        let eq = self.structure_equations();
        let (omega, psi) = coframe_forms(eq.space()).expect("coframe generators exist");
        (eq.d(&omega).expect("constant coefficients"), eq.d(&psi).expect("constant coefficients"))
    }
}

/// Reads `(N, S)` off the torsion of `dωᵢ`: the coefficient of `ω̄ₖ∧ω̄ₗ` in
/// `dωᵢ` is `Σⱼ N_{ij̄} ε_{jkl}`, and likewise for `S` with `ωₖ∧ωₗ`.
pub fn read_torsion(dw: &[Form<G>; 3]) -> Result<(Mat3, Mat3), ExteriorError> {
    let mut n = zero3();
    let mut s = zero3();
    for i in 0..3 {
        for j in 0..3 {
            let (k, l) = ((j + 1) % 3 + 1, (j + 2) % 3 + 1);
            n[i][j] = dw[i].coefficient(&[&format!("wb{k}"), &format!("wb{l}")])?;
            s[i][j] = dw[i].coefficient(&[&format!("w{k}"), &format!("w{l}")])?;
        }
    }
    Ok((n, s))
}

/// Classification of an SU(3)-structure by its torsion.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag", content = "witness")]
pub enum StructureClass {
    CalabiYau,
    NearlyKahler {
        #[serde(with = "crate::scalar::rational_string")]
        c: BigRational,
    },
    NearlyCalabiYauStrict,
    /// `dΩ = θ∧Ω + a·ψ` with `θ = u_{ī}ωᵢ + ū_{ī}ω̄ᵢ`.
    Admissible {
        u: Vec3,
        #[serde(with = "crate::scalar::rational_string")]
        a: BigRational,
    },
    Generic,
}

impl StructureClass {
    pub fn tag(&self) -> &'static str {
        match self {
            StructureClass::CalabiYau => "CalabiYau",
            StructureClass::NearlyKahler { .. } => "NearlyKahler",
            StructureClass::NearlyCalabiYauStrict => "NearlyCalabiYauStrict",
            StructureClass::Admissible { .. } => "Admissible",
            StructureClass::Generic => "Generic",
        }
    }

    /// Position in the precedence order, most special first.
    pub fn rank(&self) -> usize {
        match self {
            StructureClass::CalabiYau => 0,
            StructureClass::NearlyKahler { .. } => 1,
            StructureClass::NearlyCalabiYauStrict => 2,
            StructureClass::Admissible { .. } => 3,
            StructureClass::Generic => 4,
        }
    }
}

/// Solves `ε̄_{ljk} S_{il} = u_{j̄} δ_{ik̄} − u_{k̄} δ_{ij̄}` for `u` and returns
/// it with `a = tr N` when the system is consistent and `tr N` is real.
pub fn admissibility_solve(s: &Mat3, n: &Mat3) -> Option<(Vec3, BigRational)> {
    let tr = trace3(n);
    if !tr.is_real() {
        return None;
    }
    let mut rows: Vec<(SparseRow<G>, G)> = Vec::with_capacity(27);
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let mut rhs = G::zero();
                for l in 0..3 {
                    let e = levi_civita(l, j, k);
                    if e != 0 {
                        rhs += &s[i][l].scale(&BigRational::from_integer(e.into()));
                    }
                }
                let mut row = SparseRow::new();
                if i == k {
                    *row.entry(j).or_insert_with(G::zero) += &G::one();
                }
                if i == j {
                    *row.entry(k).or_insert_with(G::zero) -= &G::one();
                }
                row.retain(|_, v| !v.is_zero());
                rows.push((row, rhs));
            }
        }
    }
    let u = linalg::solve(rows, 3)?;
    Some((u.try_into().expect("three unknowns"), tr.re))
}

/// The skew matrix `S` produced by a given `u`.
pub fn admissible_s_from_u(u: &Vec3) -> Mat3 {
    let mut s = zero3();
    s[0][1] = u[2].clone();
    s[0][2] = -&u[1];
    s[1][0] = -&u[2];
    s[1][2] = u[0].clone();
    s[2][0] = u[1].clone();
    s[2][1] = -&u[0];
    s
}

/// Classifies by the precedence CalabiYau, NearlyKahler, NearlyCalabiYauStrict,
/// Admissible, Generic. `mu_present` marks extra torsion of the form
/// `β∧ωᵢ`, which rules out the three most special classes.
///
/// Admissibility does not look at `λ`: the `λ` term has the shape `β∧ωᵢ` and
/// drops out of `dΩ`.
pub fn classify_torsion(t: &TorsionTensor, mu_present: bool) -> StructureClass {
    let lam_zero = t.lam.iter().all(G::is_zero);
    let s_zero = is_zero3(&t.s);
    if !mu_present && lam_zero && s_zero {
        if is_zero3(&t.n) {
            return StructureClass::CalabiYau;
        }
        let c = &t.n[0][0];
        if c.is_real() && !c.is_zero() && t.n == diag3([c.clone(), c.clone(), c.clone()]) {
            return StructureClass::NearlyKahler { c: c.re.clone() };
        }
        if is_hermitian3(&t.n) && trace3(&t.n).is_zero() {
            return StructureClass::NearlyCalabiYauStrict;
        }
    }
    match admissibility_solve(&t.s, &t.n) {
        Some((u, a)) => StructureClass::Admissible { u, a },
        None => StructureClass::Generic,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::hodge_star;

    fn g(a: i64, b: i64) -> G {
        G::from_ints(a, b)
    }

    #[test]
    fn levi_civita_signs() {
        assert_eq!(levi_civita(0, 1, 2), 1);
        assert_eq!(levi_civita(1, 2, 0), 1);
        assert_eq!(levi_civita(1, 0, 2), -1);
        assert_eq!(levi_civita(0, 0, 2), 0);
    }

    #[test]
    fn model_form_shapes() {
        let (omega, psi) = complex_model_forms(3).unwrap();
        assert_eq!(omega.terms().len(), 3);
        assert_eq!(psi.terms().len(), 1);
        let mf = model_forms(3).unwrap();
        assert_eq!(mf.omega0.terms().len(), 3);
        assert!(mf.omega0.is_real() && mf.psi0.is_real() && mf.phi0.is_real());
        assert!(matches!(model_forms(4), Err(Su3Error::UnsupportedDimension(4))));
    }

    #[test]
    fn matrix_form_example() {
        let mut h = SkewMatrix::zero(2);
        h.a[0][0] = G::i();
        h.a[1][1] = G::i();
        let f = matrix_to_two_form(&h).unwrap();
        let (omega, _) = complex_model_forms(2).unwrap();
        assert_eq!(f, -omega);
        assert_eq!(two_form_to_matrix(&f, 2).unwrap(), h);
    }

    #[test]
    fn rejects_non_skew() {
        let mut h = SkewMatrix::zero(2);
        h.a[0][0] = G::one();
        assert!(matches!(matrix_to_two_form(&h), Err(Su3Error::NotSkew(_))));
        let mut h = SkewMatrix::zero(2);
        h.b[0][1] = G::one();
        assert!(matches!(su2_split(&h), Err(Su3Error::NotSkew(_))));
    }

    #[test]
    fn split_pieces_are_eigenforms() {
        let mut h = SkewMatrix::zero(2);
        h.a[0][0] = g(0, 3);
        h.a[1][1] = g(0, -1);
        h.a[0][1] = g(2, 1);
        h.a[1][0] = g(-2, 1);
        h.b[0][1] = g(1, -4);
        h.b[1][0] = g(-1, 4);
        let (plus, minus) = su2_split(&h).unwrap();
        assert_eq!(plus.add(&minus), h);
        let fp = complex_to_real(&matrix_to_two_form(&plus).unwrap(), 2).unwrap();
        let fm = complex_to_real(&matrix_to_two_form(&minus).unwrap(), 2).unwrap();
        assert_eq!(hodge_star(&fp, 4).unwrap(), fp);
        assert_eq!(hodge_star(&fm, 4).unwrap(), -fm);
    }

    #[test]
    fn full_matrix_round_trip() {
        let mut h = SkewMatrix::zero(3);
        h.a[0][1] = g(1, 2);
        h.a[1][0] = g(-1, 2);
        h.b[0][2] = g(0, 5);
        h.b[2][0] = g(0, -5);
        assert_eq!(SkewMatrix::from_full(&h.full()).unwrap(), h);
        let mut bad = h.full();
        bad[0][0] = G::one();
        assert!(SkewMatrix::from_full(&bad).is_err());
    }

    #[test]
    fn raw_nijenhuis_round_trip() {
        let n: Mat3 = std::array::from_fn(|i| std::array::from_fn(|j| g(i as i64 - j as i64, (i * j) as i64)));
        let t = TorsionTensor::with_n(n.clone());
        let raw = t.raw_nijenhuis();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    assert_eq!(raw[i][j][k], -&raw[i][k][j]);
                }
            }
        }
        assert_eq!(TorsionTensor::normalize_nijenhuis(&raw), n);
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify_torsion(&TorsionTensor::zero(), false), StructureClass::CalabiYau);
        assert_eq!(
            classify_torsion(&TorsionTensor::with_n(identity3()), false),
            StructureClass::NearlyKahler { c: BigRational::one() }
        );
        let ncy = TorsionTensor::with_n(diag3([G::one(), G::one(), G::from_int(-2)]));
        assert_eq!(classify_torsion(&ncy, false), StructureClass::NearlyCalabiYauStrict);
        match classify_torsion(&ncy, true) {
            StructureClass::Admissible { a, .. } => assert!(a.is_zero()),
            other => panic!("unexpected {other:?}"),
        }
        let mut generic = TorsionTensor::zero();
        generic.n[0][0] = G::i();
        assert_eq!(classify_torsion(&generic, false), StructureClass::Generic);
    }

    #[test]
    fn admissibility_recovers_u() {
        let u = [g(1, 2), g(0, -3), g(5, 0)];
        let s = admissible_s_from_u(&u);
        let (found, a) = admissibility_solve(&s, &zero3()).unwrap();
        assert_eq!(found, u);
        assert!(a.is_zero());
        let mut random = zero3();
        random[0][0] = G::one();
        random[1][2] = g(2, 1);
        assert_eq!(admissibility_solve(&random, &zero3()), None);
    }

    #[test]
    fn reads_back_torsion() {
        let mut t = TorsionTensor::with_n(diag3([g(1, 0), g(2, 0), g(0, 1)]));
        t.n[0][2] = g(3, -1);
        t.s = admissible_s_from_u(&[g(1, 0), g(0, 1), g(2, 2)]);
        let dw = t.torsion_forms(&omega_space()).unwrap();
        let (n, s) = read_torsion(&dw).unwrap();
        assert_eq!(n, t.n);
        assert_eq!(s, t.s);
    }

    #[test]
    fn torsion_json_shape() {
        let t = TorsionTensor::with_n(identity3());
        let v = serde_json::to_value(&t).unwrap();
        assert!(v.get("N").is_some() && v.get("S").is_some() && v.get("lambda").is_some());
        let back: TorsionTensor = serde_json::from_value(v).unwrap();
        assert_eq!(back, t);
        let c = serde_json::to_value(StructureClass::NearlyKahler { c: BigRational::one() }).unwrap();
        assert_eq!(c["tag"], "NearlyKahler");
        assert_eq!(c["witness"]["c"], "1");
    }
}
