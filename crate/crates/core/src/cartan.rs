//! Cartan's test at a point for constant-coefficient exterior differential
//! systems, with builders for the nearly Calabi–Yau and admissible systems.
//!
//! Bookkeeping used throughout: `c_k` is the rank of the polar equations of
//! the flag prefix `E_k = span(e_1..e_k)`, `s_0 = c_0`, `s_k = c_k − c_{k−1}`
//! for `1 ≤ k ≤ 5`, and `s_6 = (number of fiber generators) − c_5`. The test
//! compares `Σ_{k=0}^{5} (6−k)·s_k = Σ_{k=0}^{5} c_k` with the real rank of
//! the linear equations cutting out the 6-dimensional integral elements.

use std::collections::BTreeMap;
use std::sync::Arc;

use itertools::Itertools;
use num::rational::BigRational;
use num::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::exterior::{
    rank_one_forms, Coefficient, ExteriorError, Form, GeneratorSpace, GeneratorSpec, ParamCoeff, VectorSlot,
};
use crate::linalg::{self, SparseRow};
use crate::scalar::{rat, GaussianRational};
use crate::su3::{coframe_forms, levi_civita, omega_space_with};

type G = GaussianRational;
type F = Form<ParamCoeff>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CartanError {
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
    #[error("base point coordinate {0} must be real")]
    NonRealBasePoint(String),
    #[error("parameter {0} is not real")]
    NonRealParameter(String),
    #[error("generator {0} has no substitution")]
    MissingSubstitution(String),
    #[error("substituted ideal still contains fiber generator {0}")]
    FiberMonomial(String),
    #[error("the integral-element equations are inconsistent")]
    Inconsistent,
    #[error("bad flag: {0}")]
    BadFlag(String),
}

/// An exterior differential system at a point.
#[derive(Clone, Debug)]
pub struct EDSSystem {
    pub name: String,
    pub space: Arc<GeneratorSpace>,
    /// Homogeneous, parameter-free generators of the algebraic ideal.
    pub ideal: Vec<F>,
    /// Each fiber generator as a parameter-affine combination of the
    /// independence generators.
    pub substitution: BTreeMap<usize, F>,
    /// Real parameter symbols, in column order.
    pub params: Vec<String>,
    pub base_point: BTreeMap<String, G>,
}

/// Knobs for perturbing the nearly Calabi–Yau system away from the real one.
#[derive(Clone, Debug, PartialEq)]
pub struct NearlyCyOptions {
    /// Coefficient of `μ∧(Ψ + Ψ̄)` in `dψ`.
    pub mu_coefficient: G,
    /// Factor on the `β`-terms of `dψ`.
    pub beta_scale: G,
}

impl Default for NearlyCyOptions {
    fn default() -> Self {
        Self { mu_coefficient: G::from_ratio(-1, 2), beta_scale: G::one() }
    }
}

fn system_space(admissible: bool) -> Arc<GeneratorSpace> {
    let mut extra = Vec::new();
    for i in 1..=3 {
        for j in 1..=3 {
            extra.push(GeneratorSpec { name: format!("k{i}{j}"), conj: format!("k{j}{i}"), independence: false });
        }
    }
    for i in 1..=3 {
        for j in 1..=3 {
            extra.extend(GeneratorSpec::pair(&format!("b{i}{j}"), &format!("bb{i}{j}"), false));
        }
    }
    extra.push(GeneratorSpec::real("mu", false));
    if admissible {
        for i in 1..=3 {
            extra.extend(GeneratorSpec::pair(&format!("Du{i}"), &format!("Dub{i}"), false));
        }
        extra.push(GeneratorSpec::real("Da", false));
    }
    omega_space_with(&extra)
}

struct Gens<'a>(&'a Arc<GeneratorSpace>);

impl Gens<'_> {
    fn g(&self, name: &str) -> F {
        F::generator(self.0, name).expect("generator exists in the system space")
    }
    fn w(&self, i: usize) -> F {
        self.g(&format!("w{i}"))
    }
    fn wb(&self, i: usize) -> F {
        self.g(&format!("wb{i}"))
    }
    /// `κ_{i j̄}`; its conjugate is `κ_{j ī}`.
    fn k(&self, i: usize, j: usize) -> F {
        self.g(&format!("k{i}{j}"))
    }
    fn b(&self, i: usize, j: usize) -> F {
        self.g(&format!("b{i}{j}"))
    }
    fn bb(&self, i: usize, j: usize) -> F {
        self.g(&format!("bb{i}{j}"))
    }
    fn tr_kappa(&self) -> F {
        &(&self.k(1, 1) + &self.k(2, 2)) + &self.k(3, 3)
    }
    fn psi_pair(&self) -> Result<(F, F), ExteriorError> {
        let (_, psi) = coframe_forms(self.0)?;
        let psi = psi.map_coefficients(|c| ParamCoeff::constant(c.clone()));
        let psib = psi.conjugate();
        Ok((psi, psib))
    }
}

fn w3(a: &F, b: &F, c: &F) -> Result<F, ExteriorError> {
    a.wedge(b)?.wedge(c)
}

fn w4(a: &F, b: &F, c: &F, d: &F) -> Result<F, ExteriorError> {
    a.wedge(b)?.wedge(c)?.wedge(d)
}

fn gi(re: i64, im_num: i64, im_den: i64) -> G {
    G::new(rat(re, 1), rat(im_num, im_den))
}

/// The `κ` part of `dΩ`, shared by both systems.
fn d_omega_kappa(g: &Gens) -> Result<F, ExteriorError> {
    let ih = gi(0, 1, 2);
    let mut out = F::zero(g.0);
    for i in 1..=3 {
        for j in 1..=3 {
            out = &out - &w3(&g.k(i, j), &g.w(j), &g.wb(i))?.scale(&ih);
            out = &out + &w3(&g.k(j, i), &g.wb(j), &g.w(i))?.scale(&ih);
        }
    }
    Ok(out)
}

/// `Σ ε_{ijk} Σ_l [−(i/4) β̄_{il}∧ω_l∧ω̄_j∧ω̄_k + (i/4) β_{il}∧ω̄_l∧ω_j∧ω_k]`.
fn beta_torsion_quartic(g: &Gens) -> Result<F, ExteriorError> {
    let iq = gi(0, 1, 4);
    let mut out = F::zero(g.0);
    for (i, j, k) in (1..=3).cartesian_product(1..=3).cartesian_product(1..=3).map(|((i, j), k)| (i, j, k)) {
        let e = levi_civita(i - 1, j - 1, k - 1);
        if e == 0 {
            continue;
        }
        let c = iq.scale(&rat(e, 1));
        for l in 1..=3 {
            out = &out - &w4(&g.bb(i, l), &g.w(l), &g.wb(j), &g.wb(k))?.scale(&c);
            out = &out + &w4(&g.b(i, l), &g.wb(l), &g.w(j), &g.w(k))?.scale(&c);
        }
    }
    Ok(out)
}

fn complex_param(name: &str) -> ParamCoeff {
    ParamCoeff::from_parts(G::zero(), [(format!("{name}.re"), G::one()), (format!("{name}.im"), G::i())])
}

fn conj_param(name: &str) -> ParamCoeff {
    ParamCoeff::from_parts(G::zero(), [(format!("{name}.re"), G::one()), (format!("{name}.im"), -G::i())])
}

fn push_complex(params: &mut Vec<String>, name: &str) {
    params.push(format!("{name}.re"));
    params.push(format!("{name}.im"));
}

fn linear_form(space: &Arc<GeneratorSpace>, terms: Vec<(ParamCoeff, usize)>) -> F {
    F::from_terms(space, terms.into_iter().map(|(c, i)| (vec![i], c)))
}

/// The fiber substitution: `κ_{i j̄} = A_{ijk} ω̄_k + conj(A_{jik}) ω_k`,
/// `β_{ij} = B_{ijk} ω̄_k + C_{ijk} ω_k`, `μ = b_k ω_k + c.c.`, and for the
/// admissible system `Da = a_k ω_k + c.c.`, `Du_i = U_{ij} ω_j + V_{ij} ω̄_j`.
fn substitution(
    space: &Arc<GeneratorSpace>,
    admissible: bool,
) -> Result<(BTreeMap<usize, F>, Vec<String>), ExteriorError> {
    let w = |i: usize| space.index_of(&format!("w{i}"));
    let wb = |i: usize| space.index_of(&format!("wb{i}"));
    let mut map = BTreeMap::new();
    let mut params = Vec::new();
    for (i, j, k) in (1..=3).cartesian_product(1..=3).cartesian_product(1..=3).map(|((i, j), k)| (i, j, k)) {
        push_complex(&mut params, &format!("A{i}{j}{k}"));
    }
    for (i, j) in (1..=3).cartesian_product(1..=3) {
        let mut terms = Vec::new();
        for k in 1..=3 {
            terms.push((complex_param(&format!("A{i}{j}{k}")), wb(k)?));
            terms.push((conj_param(&format!("A{j}{i}{k}")), w(k)?));
        }
        map.insert(space.index_of(&format!("k{i}{j}"))?, linear_form(space, terms));
    }
    for (i, j) in (1..=3).cartesian_product(1..=3) {
        let mut terms = Vec::new();
        for k in 1..=3 {
            for (letter, target) in [("B", wb(k)?), ("C", w(k)?)] {
                let name = format!("{letter}{i}{j}{k}");
                push_complex(&mut params, &name);
                terms.push((complex_param(&name), target));
            }
        }
        let f = linear_form(space, terms);
        map.insert(space.index_of(&format!("bb{i}{j}"))?, f.conjugate());
        map.insert(space.index_of(&format!("b{i}{j}"))?, f);
    }
    let real_form = |stem: &str, params: &mut Vec<String>| -> Result<F, ExteriorError> {
        let mut terms = Vec::new();
        for k in 1..=3 {
            let name = format!("{stem}{k}");
            push_complex(params, &name);
            terms.push((complex_param(&name), w(k)?));
            terms.push((conj_param(&name), wb(k)?));
        }
        Ok(linear_form(space, terms))
    };
    map.insert(space.index_of("mu")?, real_form("b", &mut params)?);
    if admissible {
        map.insert(space.index_of("Da")?, real_form("a", &mut params)?);
        for i in 1..=3 {
            let mut terms = Vec::new();
            for j in 1..=3 {
                for (letter, target) in [("U", w(j)?), ("V", wb(j)?)] {
                    let name = format!("{letter}{i}{j}");
                    push_complex(&mut params, &name);
                    terms.push((complex_param(&name), target));
                }
            }
            let f = linear_form(space, terms);
            map.insert(space.index_of(&format!("Dub{i}"))?, f.conjugate());
            map.insert(space.index_of(&format!("Du{i}"))?, f);
        }
    }
    Ok((map, params))
}

/// The system `⟨dΩ, dψ⟩` on the SU(3) frame bundle, whose integral manifolds
/// are nearly Calabi–Yau structures.
pub fn build_nearly_cy_system() -> EDSSystem {
    build_nearly_cy_system_with(&NearlyCyOptions::default()).expect("fixed construction")
}

pub fn build_nearly_cy_system_with(opts: &NearlyCyOptions) -> Result<EDSSystem, CartanError> {
    let space = system_space(false);
    let g = Gens(&space);
    let ih = gi(0, 1, 2);
    let mut d_omega = d_omega_kappa(&g)?;
    for (i, j) in (1..=3).cartesian_product(1..=3) {
        d_omega = &d_omega - &w3(&g.b(i, j), &g.wb(j), &g.wb(i))?.scale(&ih);
        d_omega = &d_omega + &w3(&g.bb(i, j), &g.w(j), &g.w(i))?.scale(&ih);
    }
    let (psi, psib) = g.psi_pair()?;
    let mu = g.g("mu");
    let tr = g.tr_kappa();
    let d_psi = &(&mu.wedge(&(&psib + &psi))?.scale(&opts.mu_coefficient) - &tr.wedge(&psib)?.scale(&ih))
        + &tr.wedge(&psi)?.scale(&ih);
    let d_psi = &d_psi + &beta_torsion_quartic(&g)?.scale(&opts.beta_scale);
    let (substitution, params) = substitution(&space, false)?;
    let name = if *opts == NearlyCyOptions::default() { "nearly-cy" } else { "nearly-cy-perturbed" };
    Ok(EDSSystem {
        name: name.into(),
        space,
        ideal: vec![d_omega, d_psi],
        substitution,
        params,
        base_point: BTreeMap::new(),
    })
}

/// The system `⟨Π₃, Π₄⟩` whose integral manifolds are admissible structures,
/// at the point with coordinates `a = a0`, `u = u0`.
pub fn build_admissible_system(a0: &G, u0: &[G; 3]) -> Result<EDSSystem, CartanError> {
    if !a0.is_real() {
        return Err(CartanError::NonRealBasePoint("a".into()));
    }
    let space = system_space(true);
    let g = Gens(&space);
    let ih = gi(0, 1, 2);
    let iq = gi(0, 1, 4);
    let mut pi3 = d_omega_kappa(&g)?;
    for (i, j) in (1..=3).cartesian_product(1..=3) {
        let b = &g.b(i, j) - &g.b(j, i);
        let bb = &g.bb(i, j) - &g.bb(j, i);
        pi3 = &pi3 - &w3(&b, &g.wb(j), &g.wb(i))?.scale(&iq);
        pi3 = &pi3 + &w3(&bb, &g.w(j), &g.w(i))?.scale(&iq);
    }
    let mut theta = F::zero(&space);
    for i in 1..=3 {
        theta = &theta + &g.w(i).scale(&u0[i - 1]);
        theta = &theta + &g.wb(i).scale(&u0[i - 1].conj());
    }
    for j in 1..=3 {
        pi3 = &pi3 - &w3(&theta, &g.w(j), &g.wb(j))?.scale(&ih);
    }
    let (psi, psib) = g.psi_pair()?;
    pi3 = &pi3 - &(&psib - &psi).scale(&(&ih * a0));

    let mut pi4 = F::zero(&space);
    for (i, j) in (1..=3).cartesian_product(1..=3) {
        let du = &g.g(&format!("Du{i}")).wedge(&g.w(i))? + &g.g(&format!("Dub{i}")).wedge(&g.wb(i))?;
        pi4 = &pi4 + &w3(&du, &g.w(j), &g.wb(j))?.scale(&ih);
    }
    let da = &g.g("Da") - &g.tr_kappa().scale(a0);
    pi4 = &pi4 + &da.wedge(&(&psib - &psi))?.scale(&ih);
    pi4 = &pi4 - &g.g("mu").wedge(&(&psib + &psi))?.scale(&a0.scale(&rat(1, 2)));
    pi4 = &pi4 + &beta_torsion_quartic(&g)?.scale(a0);

    let (substitution, params) = substitution(&space, true)?;
    let mut base_point = BTreeMap::new();
    base_point.insert("a".to_string(), a0.clone());
    for (i, u) in u0.iter().enumerate() {
        base_point.insert(format!("u{}", i + 1), u.clone());
    }
    Ok(EDSSystem { name: "admissible".into(), space, ideal: vec![pi3, pi4], substitution, params, base_point })
}

/// The affine equations on the parameters cutting out the 6-dimensional
/// integral elements, split into real rows `row · x = rhs`.
#[derive(Clone, Debug)]
pub struct IntegralElementVariety {
    pub params: Vec<String>,
    pub equations: Vec<(SparseRow<BigRational>, BigRational)>,
    /// Rank of the linear part.
    pub rank: usize,
    pub augmented_rank: usize,
    /// The solution with every free parameter zero, if one exists.
    pub particular: Option<Vec<BigRational>>,
}

impl IntegralElementVariety {
    pub fn is_consistent(&self) -> bool {
        self.rank == self.augmented_rank
    }

    pub fn particular_values(&self) -> Option<BTreeMap<String, G>> {
        let x = self.particular.as_ref()?;
        Some(self.params.iter().zip(x).map(|(p, v)| (p.clone(), G::real(v.clone()))).collect())
    }
}

impl EDSSystem {
    pub fn fiber_dim(&self) -> usize {
        (0..self.space.len()).filter(|&i| !self.space.is_independence(i)).count()
    }

    /// Substituting then conjugating equals conjugating then substituting.
    pub fn substitution_respects_conjugation(&self) -> bool {
        self.substitution.iter().all(|(&g, f)| {
            let c = self.space.conj_index(g);
            self.substitution.get(&c) == Some(&f.conjugate())
        })
    }

    pub fn ideal_is_parameter_free(&self) -> bool {
        self.ideal.iter().all(|f| f.terms().values().all(ParamCoeff::is_constant))
    }

    fn check_substitution(&self) -> Result<(), CartanError> {
        if let Some((p, _)) = self.space.param_conj_table().iter().find(|(p, q)| p != q) {
            return Err(CartanError::NonRealParameter(p.clone()));
        }
        for i in 0..self.space.len() {
            if !self.space.is_independence(i) && !self.substitution.contains_key(&i) {
                return Err(CartanError::MissingSubstitution(self.space.name(i).into()));
            }
        }
        Ok(())
    }

    pub fn integral_element_rank(&self) -> Result<IntegralElementVariety, CartanError> {
        self.check_substitution()?;
        let col: BTreeMap<&str, usize> = self.params.iter().enumerate().map(|(i, p)| (p.as_str(), i)).collect();
        let mut equations = Vec::new();
        for phi in &self.ideal {
            let s = phi.substitute(&self.substitution)?;
            for (mono, c) in s.terms() {
                if let Some(&bad) = mono.iter().find(|&&i| !self.space.is_independence(i)) {
                    return Err(CartanError::FiberMonomial(self.space.name(bad).into()));
                }
                let mut re = SparseRow::new();
                let mut im = SparseRow::new();
                for (p, v) in c.linear() {
                    let j = *col.get(p.as_str()).ok_or_else(|| CartanError::NonRealParameter(p.clone()))?;
                    if !v.re.is_zero() {
                        re.insert(j, v.re.clone());
                    }
                    if !v.im.is_zero() {
                        im.insert(j, v.im.clone());
                    }
                }
                for (row, k) in [(re, -&c.constant.re), (im, -&c.constant.im)] {
                    if !row.is_empty() || !k.is_zero() {
                        equations.push((row, k));
                    }
                }
            }
        }
        let n = self.params.len();
        let rank = linalg::rank(equations.iter().map(|(r, _)| r.clone()));
        let augmented_rank = linalg::rank(equations.iter().map(|(r, k)| {
            let mut r = r.clone();
            if !k.is_zero() {
                r.insert(n, k.clone());
            }
            r
        }));
        let particular = linalg::solve(equations.iter().cloned(), n);
        Ok(IntegralElementVariety { params: self.params.clone(), equations, rank, augmented_rank, particular })
    }

    /// Extends a vector on the independence generators to the integral
    /// element where every parameter takes the given value.
    pub fn lift(&self, v: &VectorSlot, values: &BTreeMap<String, G>) -> Result<VectorSlot, CartanError> {
        let mut comps: Vec<(usize, G)> = v
            .components()
            .iter()
            .filter(|(&i, _)| self.space.is_independence(i))
            .map(|(&i, x)| (i, x.clone()))
            .collect();
        for (&g, f) in &self.substitution {
            let at = f.map_coefficients(|c| c.assign(values));
            let val = at.interior(v)?.coefficient_at(&[]);
            let val = val.as_scalar().ok_or(ExteriorError::ParametricInput)?;
            comps.push((g, val));
        }
        Ok(VectorSlot::new(&self.space, comps))
    }

    /// Basis `e_k` dual to `Re ω_k` and `e_{3+k}` dual to `Im ω_k`, on the
    /// independence generators only.
    pub fn coframe_basis(&self) -> Result<Vec<VectorSlot>, CartanError> {
        let mut out = Vec::with_capacity(6);
        for k in 1..=3 {
            out.push(VectorSlot::from_names(
                &self.space,
                &[(&format!("w{k}"), G::one()), (&format!("wb{k}"), G::one())],
            )?);
        }
        for k in 1..=3 {
            out.push(VectorSlot::from_names(&self.space, &[(&format!("w{k}"), G::i()), (&format!("wb{k}"), -G::i())])?);
        }
        Ok(out)
    }

    /// The coframe basis lifted to the reference integral element (every
    /// free parameter zero).
    pub fn default_flag(&self) -> Result<Vec<VectorSlot>, CartanError> {
        let values = self.integral_element_rank()?.particular_values().ok_or(CartanError::Inconsistent)?;
        self.coframe_basis()?.iter().map(|v| self.lift(v, &values)).collect()
    }

    /// A random rational basis of the reference integral element.
    pub fn random_flag(&self, seed: u64) -> Result<Vec<VectorSlot>, CartanError> {
        let base = self.default_flag()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            let m: Vec<Vec<BigRational>> =
                (0..6).map(|_| (0..6).map(|_| rat(rng.gen_range(-4..=4), rng.gen_range(1..=4))).collect()).collect();
            if linalg::rank_dense(&m) < 6 {
                continue;
            }
            return Ok(m
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(&base)
                        .fold(VectorSlot::new(&self.space, []), |acc, (c, e)| acc.add(&e.scale(&G::real(c.clone()))))
                })
                .collect());
        }
    }

    /// Every `(e_{i_1}∧…∧e_{i_{p−1}}) ⌟ Φ` with indices from the prefix and
    /// `Φ` an ideal generator of degree `p`.
    pub fn polar_forms(&self, prefix: &[VectorSlot]) -> Result<Vec<PolarForm>, CartanError> {
        let mut out = Vec::new();
        for (gen, phi) in self.ideal.iter().enumerate() {
            let Some(p) = phi.pure_degree() else {
                continue;
            };
            if p == 0 || p - 1 > prefix.len() {
                continue;
            }
            for idx in (0..prefix.len()).combinations(p - 1) {
                let vs: Vec<VectorSlot> = idx.iter().map(|&i| prefix[i].clone()).collect();
                let form = phi.interior_all(&vs)?;
                out.push(PolarForm { generator: gen, vectors: idx.iter().map(|i| i + 1).collect(), form });
            }
        }
        Ok(out)
    }

    pub fn polar_rank(&self, prefix: &[VectorSlot]) -> Result<usize, CartanError> {
        let forms: Vec<F> = self.polar_forms(prefix)?.into_iter().map(|p| p.form).collect();
        Ok(rank_one_forms(&forms)?)
    }

    fn check_flag(&self, flag: &[VectorSlot]) -> Result<(), CartanError> {
        if flag.len() != 6 {
            return Err(CartanError::BadFlag(format!("expected 6 vectors, got {}", flag.len())));
        }
        let indep = self.space.independence_indices();
        let rows: Vec<Vec<G>> = flag.iter().map(|v| indep.iter().map(|&i| v.component(i)).collect()).collect();
        if linalg::rank_dense(&rows) < 6 {
            return Err(CartanError::BadFlag("independence condition fails".into()));
        }
        for phi in &self.ideal {
            let Some(p) = phi.pure_degree() else { continue };
            for idx in (0..6).combinations(p) {
                let vs: Vec<VectorSlot> = idx.iter().map(|&i| flag[i].clone()).collect();
                if !phi.interior_all(&vs)?.is_zero() {
                    return Err(CartanError::BadFlag(format!(
                        "not an integral element: generator {} on {:?}",
                        self.ideal.iter().position(|f| f == phi).unwrap_or(0),
                        idx
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn cartan_test(&self, flag: &[VectorSlot]) -> Result<CartanReport, CartanError> {
        self.check_flag(flag)?;
        let variety = self.integral_element_rank()?;
        let mut c = [0usize; 6];
        for (k, ck) in c.iter_mut().enumerate() {
            *ck = self.polar_rank(&flag[..k])?;
        }
        let fiber_dim = self.fiber_dim();
        let mut s = [0usize; 7];
        s[0] = c[0];
        for k in 1..6 {
            s[k] = c[k] - c[k - 1];
        }
        s[6] = fiber_dim - c[5];
        let test_lhs: usize = (0..6).map(|k| (6 - k) * s[k]).sum();
        let test_rhs = variety.rank;
        let mut notes = Vec::new();
        if c[1] == 0 && c[2] > 0 {
            notes.push(format!("first nonzero polar rank is c_2 = {}", c[2]));
        }
        if !variety.is_consistent() {
            notes.push("integral-element equations are inconsistent".into());
        }
        if test_lhs != test_rhs {
            notes.push(format!("weighted character sum {test_lhs} differs from integral-element rank {test_rhs}"));
        }
        let flag = flag
            .iter()
            .map(|v| v.components().iter().map(|(&i, x)| (self.space.name(i).to_string(), x.clone())).collect())
            .collect();
        Ok(CartanReport {
            system: self.name.clone(),
            flag,
            c,
            s,
            integral_rank: variety.rank,
            fiber_dim,
            involutive: test_lhs == test_rhs && variety.is_consistent(),
            test_lhs,
            test_rhs,
            notes,
        })
    }

    /// The four-term relation
    /// `(e₂∧e₄)⌟Φ₁ − (e₁∧e₅)⌟Φ₁ − (e₂∧e₃∧e₅)⌟Φ₂ − (e₁∧e₃∧e₄)⌟Φ₂`
    /// at the default flag, where `Φ₁`, `Φ₂` are the two ideal generators.
    pub fn polar_relation_check(&self) -> Result<PolarRelation, CartanError> {
        if self.ideal.len() != 2 {
            return Err(CartanError::BadFlag("the relation needs two ideal generators".into()));
        }
        let flag = self.default_flag()?;
        let e = |i: usize| flag[i - 1].clone();
        let terms = [
            self.ideal[0].interior_all(&[e(2), e(4)])?,
            self.ideal[0].interior_all(&[e(1), e(5)])?,
            self.ideal[1].interior_all(&[e(2), e(3), e(5)])?,
            self.ideal[1].interior_all(&[e(1), e(3), e(4)])?,
        ];
        let signs = [1, -1, -1, -1];
        let combine = |skip: Option<usize>| {
            terms
                .iter()
                .zip(signs)
                .enumerate()
                .filter(|(i, _)| Some(*i) != skip)
                .fold(F::zero(&self.space), |acc, (_, (t, s))| if s > 0 { &acc + t } else { &acc - t })
        };
        let residual = combine(None);
        let each_term_needed = [0, 1, 2, 3].map(|i| !combine(Some(i)).is_zero());
        Ok(PolarRelation {
            holds: residual.is_zero() && each_term_needed.iter().all(|&b| b),
            residual_vanishes: residual.is_zero(),
            each_term_needed,
            residual,
        })
    }
}

/// One polar equation, labelled by the ideal generator and the 1-based flag
/// indices contracted into it.
#[derive(Clone, Debug)]
pub struct PolarForm {
    pub generator: usize,
    pub vectors: Vec<usize>,
    pub form: F,
}

#[derive(Clone, Debug, Serialize)]
pub struct CartanReport {
    pub system: String,
    /// Flag vectors by generator name.
    pub flag: Vec<BTreeMap<String, G>>,
    pub c: [usize; 6],
    pub s: [usize; 7],
    pub integral_rank: usize,
    pub fiber_dim: usize,
    pub involutive: bool,
    pub test_lhs: usize,
    pub test_rhs: usize,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct PolarRelation {
    pub residual: F,
    pub residual_vanishes: bool,
    /// Dropping term `i` leaves a nonzero form.
    pub each_term_needed: [bool; 4],
    pub holds: bool,
}
