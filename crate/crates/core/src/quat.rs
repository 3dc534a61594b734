//! Quaternions `z1 + j·z2`, the Lie algebras of Sp(2) and Sp(1,1), the
//! Maurer–Cartan derivation of the structure equations of `CP³` and `ΨCP³`,
//! the real structure `C`, and exact sampling of its fixed loci.
//!
//! `j² = −1` and `z·j = j·z̄`, so
//! `(z1 + j z2)(z3 + j z4) = (z1 z3 − z̄2 z4) + j(z2 z3 + z̄1 z4)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exterior::{ExteriorError, Form, GeneratorSpace, GeneratorSpec, StructureEquations, VectorSlot};
use crate::linalg::{self, Field, SparseRow};
use crate::scalar::{int, rat, GaussianRational};
use crate::su3::{coframe_forms, omega_space};
use crate::surd::Surd;

type G = GaussianRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuatError {
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
    #[error("component map is not injective (rank {0} < 10)")]
    NotInvertible(usize),
    #[error("component map does not take values in the Lie algebra of {0:?}")]
    NotInAlgebra(Group),
    #[error("value is outside the span of the component map")]
    OutsideSpan,
    #[error("parametrization denominator vanishes")]
    DegenerateSample,
    #[error("sample count must be at least 1")]
    NoSamples,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Group {
    Sp2,
    Sp11,
}

impl Group {
    /// Signature of the quaternion inner product on `H²`.
    fn sign2(self) -> i64 {
        match self {
            Group::Sp2 => 1,
            Group::Sp11 => -1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Group::Sp2 => "sp2",
            Group::Sp11 => "sp11",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quaternion<S = G> {
    pub z1: S,
    pub z2: S,
}

impl<S: Field> Quaternion<S> {
    pub fn new(z1: S, z2: S) -> Self {
        Self { z1, z2 }
    }

    pub fn zero() -> Self {
        Self::new(S::zero(), S::zero())
    }

    pub fn one() -> Self {
        Self::new(S::one(), S::zero())
    }

    pub fn j() -> Self {
        Self::new(S::zero(), S::one())
    }

    pub fn is_zero(&self) -> bool {
        self.z1.is_zero() && self.z2.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(self.z1.add(&o.z1), self.z2.add(&o.z2))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(self.z1.sub(&o.z1), self.z2.sub(&o.z2))
    }

    pub fn neg(&self) -> Self {
        Self::new(self.z1.neg(), self.z2.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(
            self.z1.mul(&o.z1).sub(&self.z2.conj().mul(&o.z2)),
            self.z2.mul(&o.z1).add(&self.z1.conj().mul(&o.z2)),
        )
    }

    /// Right multiplication by a complex scalar.
    pub fn scale(&self, s: &S) -> Self {
        Self::new(self.z1.mul(s), self.z2.mul(s))
    }

    /// Quaternion conjugate `z̄1 − j z2`.
    pub fn conj(&self) -> Self {
        Self::new(self.z1.conj(), self.z2.neg())
    }

    /// The real structure `z1 + j z2 ↦ z̄1 + j z̄2`.
    pub fn c_involution(&self) -> Self {
        Self::new(self.z1.conj(), self.z2.conj())
    }

    /// `q q̄ = |z1|² + |z2|²`.
    pub fn norm_sqr(&self) -> S {
        self.mul(&self.conj()).z1
    }
}

pub fn random_quaternion(rng: &mut impl Rng) -> Quaternion<G> {
    let mut r = || rat(rng.gen_range(-9..=9), rng.gen_range(1..=5));
    Quaternion::new(G::new(r(), r()), G::new(r(), r()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InnerProductKind {
    Definite,
    Split,
}

/// `⟨(q1, q2), (p1, p2)⟩ = q̄1 p1 ± q̄2 p2`.
pub fn inner_product<S: Field>(
    kind: InnerProductKind,
    v: &[Quaternion<S>; 2],
    w: &[Quaternion<S>; 2],
) -> Quaternion<S> {
    let a = v[0].conj().mul(&w[0]);
    let b = v[1].conj().mul(&w[1]);
    match kind {
        InnerProductKind::Definite => a.add(&b),
        InnerProductKind::Split => a.sub(&b),
    }
}

pub type QMat<S> = [[Quaternion<S>; 2]; 2];

pub fn qmat_mul<S: Field>(a: &QMat<S>, b: &QMat<S>) -> QMat<S> {
    std::array::from_fn(|r| std::array::from_fn(|c| a[r][0].mul(&b[0][c]).add(&a[r][1].mul(&b[1][c]))))
}

/// Whether `X` lies in sp(2) (`X + X̄ᵗ = 0`) or sp(1,1)
/// (`X̄ D + D Xᵗ = 0`, `D = diag(1, −1)`).
pub fn in_algebra<S: Field>(group: Group, x: &QMat<S>) -> bool {
    let d = [1, group.sign2()];
    (0..2).all(|a| {
        (0..2).all(|b| {
            let lhs = x[a][b].conj();
            let lhs = if d[b] < 0 { lhs.neg() } else { lhs };
            let rhs = if d[a] < 0 { x[b][a].neg() } else { x[b][a].clone() };
            lhs.add(&rhs).is_zero()
        })
    })
}

/// `E⁻¹`: `Ēᵗ` for Sp(2) and `D Ēᵗ D` for Sp(1,1).
pub fn group_inverse<S: Field>(group: Group, e: &QMat<S>) -> QMat<S> {
    let d = [1, group.sign2()];
    std::array::from_fn(|r| {
        std::array::from_fn(|c| {
            let x = e[c][r].conj();
            if d[r] * d[c] < 0 {
                x.neg()
            } else {
                x
            }
        })
    })
}

pub fn in_group<S: Field>(group: Group, e: &QMat<S>) -> bool {
    let p = qmat_mul(&group_inverse(group, e), e);
    (0..2).all(|r| (0..2).all(|c| p[r][c] == if r == c { Quaternion::one() } else { Quaternion::zero() }))
}

/// A quaternion-valued form `z1 + j z2`.
#[derive(Clone, Debug, PartialEq)]
pub struct QForm {
    pub z1: Form<Surd>,
    pub z2: Form<Surd>,
}

impl QForm {
    pub fn zero(space: &Arc<GeneratorSpace>) -> Self {
        Self { z1: Form::zero(space), z2: Form::zero(space) }
    }

    pub fn is_zero(&self) -> bool {
        self.z1.is_zero() && self.z2.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        Self { z1: &self.z1 + &o.z1, z2: &self.z2 + &o.z2 }
    }

    pub fn neg(&self) -> Self {
        Self { z1: -&self.z1, z2: -&self.z2 }
    }

    pub fn wedge(&self, o: &Self) -> Result<Self, ExteriorError> {
        let z1 = &self.z1.wedge(&o.z1)? - &self.z2.conjugate().wedge(&o.z2)?;
        let z2 = &self.z2.wedge(&o.z1)? + &self.z1.conjugate().wedge(&o.z2)?;
        Ok(Self { z1, z2 })
    }

    pub fn conj(&self) -> Self {
        Self { z1: self.z1.conjugate(), z2: -&self.z2 }
    }

    pub fn c_involution(&self) -> Self {
        Self { z1: self.z1.conjugate(), z2: self.z2.conjugate() }
    }

    /// Value on a tangent vector.
    pub fn evaluate(&self, v: &VectorSlot<Surd>) -> Result<Quaternion<Surd>, ExteriorError> {
        Ok(Quaternion::new(self.z1.evaluate(std::slice::from_ref(v))?, self.z2.evaluate(std::slice::from_ref(v))?))
    }

    /// `z1, z̄1, z2, z̄2`.
    fn components(&self) -> [Form<Surd>; 4] {
        [self.z1.clone(), self.z1.conjugate(), self.z2.clone(), self.z2.conjugate()]
    }
}

fn quaternion_components(q: &Quaternion<Surd>) -> [Surd; 4] {
    [q.z1.clone(), q.z1.conj(), q.z2.clone(), q.z2.conj()]
}

/// `ρ1, ρ2` real; `ω1, ω2, ω3, τ` complex.
pub fn frame_space() -> Arc<GeneratorSpace> {
    let mut specs = vec![GeneratorSpec::real("rho1", false), GeneratorSpec::real("rho2", false)];
    for i in 1..=3 {
        specs.extend(GeneratorSpec::pair(&format!("w{i}"), &format!("wb{i}"), true));
    }
    specs.extend(GeneratorSpec::pair("tau", "taub", false));
    GeneratorSpace::new(specs, BTreeMap::new()).expect("frame space is valid")
}

/// The Maurer–Cartan form `φ` written in the ten generators.
#[derive(Clone, Debug, PartialEq)]
pub struct ComponentMap {
    pub group: Group,
    pub space: Arc<GeneratorSpace>,
    pub phi: [[QForm; 2]; 2],
}

impl ComponentMap {
    /// `[[iρ1 + jω̄3, −ω̄1/√2 + jω2/√2], [ω1/√2 + jω2/√2, iρ2 + jτ]]` for
    /// Sp(2) and `[[iρ1 + jω̄3, ω̄1 − jω2], [ω1 + jω2, iρ2 + jτ]]` for Sp(1,1).
    pub fn standard(group: Group) -> Self {
        Self::scaled(group, &Self::standard_scale(group))
    }

    /// `1/√2` for Sp(2), `1` for Sp(1,1).
    pub fn standard_scale(group: Group) -> Surd {
        match group {
            Group::Sp2 => Surd::inv_sqrt2(),
            Group::Sp11 => Surd::one(),
        }
    }

    /// The standard shape with off-diagonal entries scaled by `c`.
    pub fn scaled(group: Group, c: &Surd) -> Self {
        let space = frame_space();
        let g = |n: &str| Form::<Surd>::generator(&space, n).expect("frame generator");
        let i = Surd::from(G::i());
        let q = |z1: Form<Surd>, z2: Form<Surd>| QForm { z1, z2 };
        let phi12 = match group {
            Group::Sp2 => q(g("wb1").scale(&c.neg()), g("w2").scale(c)),
            Group::Sp11 => q(g("wb1").scale(c), g("w2").scale(&c.neg())),
        };
        let phi = [
            [q(g("rho1").scale(&i), g("wb3")), phi12],
            [q(g("w1").scale(c), g("w2").scale(c)), q(g("rho2").scale(&i), g("tau"))],
        ];
        Self { group, space, phi }
    }

    /// The same map with `τ` replaced by `−τ`.
    pub fn with_tau_flipped(mut self) -> Self {
        self.phi[1][1].z2 = -&self.phi[1][1].z2;
        self
    }

    /// Whether every value of `φ` lies in the Lie algebra, checked on the
    /// forms themselves.
    pub fn takes_values_in_algebra(&self) -> bool {
        let d = [1, self.group.sign2()];
        (0..2).all(|a| {
            (0..2).all(|b| {
                let lhs = self.phi[a][b].conj();
                let lhs = if d[b] < 0 { lhs.neg() } else { lhs };
                let rhs = if d[a] < 0 { self.phi[b][a].neg() } else { self.phi[b][a].clone() };
                lhs.add(&rhs).is_zero()
            })
        })
    }

    fn component_forms(&self) -> Vec<Form<Surd>> {
        self.phi.iter().flatten().flat_map(QForm::components).collect()
    }

    /// The 16×10 matrix of `(z1, z̄1, z2, z̄2)` of each entry against the
    /// generators.
    fn matrix(&self) -> Vec<SparseRow<Surd>> {
        self.component_forms().iter().map(|f| f.terms().iter().map(|(m, c)| (m[0], c.clone())).collect()).collect()
    }

    /// Rank of the component matrix; 10 means `φ` is a coframe.
    pub fn rank(&self) -> usize {
        linalg::rank(self.matrix())
    }

    fn solve(&self, rhs: &[Surd]) -> Option<Vec<Surd>> {
        let rows = self.matrix().into_iter().zip(rhs.iter().cloned());
        let x = linalg::solve(rows, self.space.len())?;
        Some(x)
    }

    /// Reads the generator combination whose image is the given collection of
    /// component forms, one monomial at a time.
    fn invert_forms(&self, comps: &[Form<Surd>]) -> Result<Vec<Form<Surd>>, QuatError> {
        let mut monomials: Vec<Vec<usize>> = comps.iter().flat_map(|f| f.terms().keys().cloned()).collect();
        monomials.sort();
        monomials.dedup();
        let mut out: Vec<Vec<(Vec<usize>, Surd)>> = vec![Vec::new(); self.space.len()];
        for m in monomials {
            let rhs: Vec<Surd> = comps.iter().map(|f| f.coefficient_at(&m)).collect();
            let x = self.solve(&rhs).ok_or(QuatError::OutsideSpan)?;
            for (g, v) in x.into_iter().enumerate() {
                if !Field::is_zero(&v) {
                    out[g].push((m.clone(), v));
                }
            }
        }
        Ok(out.into_iter().map(|t| Form::from_terms(&self.space, t)).collect())
    }

    /// The values of the ten generators on a tangent vector whose `φ`-value
    /// is `x`.
    pub fn read_values(&self, x: &QMat<Surd>) -> Result<Vec<Surd>, QuatError> {
        let rhs: Vec<Surd> = x.iter().flatten().flat_map(quaternion_components).collect();
        self.solve(&rhs).ok_or(QuatError::OutsideSpan)
    }

    /// `φ(v)` for a vector given by its generator values.
    pub fn evaluate(&self, v: &VectorSlot<Surd>) -> Result<QMat<Surd>, ExteriorError> {
        let mut out: QMat<Surd> = std::array::from_fn(|_| std::array::from_fn(|_| Quaternion::zero()));
        for (r, row) in self.phi.iter().enumerate() {
            for (c, q) in row.iter().enumerate() {
                out[r][c] = q.evaluate(v)?;
            }
        }
        Ok(out)
    }

    fn check(&self) -> Result<(), QuatError> {
        let r = self.rank();
        if r < 10 {
            return Err(QuatError::NotInvertible(r));
        }
        if !self.takes_values_in_algebra() {
            return Err(QuatError::NotInAlgebra(self.group));
        }
        Ok(())
    }
}

/// Differentials of all ten generators from `dφ = −φ∧φ`.
#[derive(Clone, Debug)]
pub struct MaurerCartan {
    pub group: Group,
    pub equations: StructureEquations<Surd>,
}

impl MaurerCartan {
    pub fn d(&self, name: &str) -> Form<Surd> {
        let i = self.equations.space().index_of(name).expect("frame generator");
        self.equations.get(i).cloned().expect("every generator has a differential")
    }

    /// `dω1, dω2, dω3`.
    pub fn d_omega(&self) -> [Form<Surd>; 3] {
        std::array::from_fn(|i| self.d(&format!("w{}", i + 1)))
    }

    /// Generators whose `d²` fails to vanish.
    pub fn d_squared_failures(&self) -> Vec<String> {
        self.equations.d_squared_failures().expect("constant coefficients")
    }
}

pub fn maurer_cartan_derive(group: Group) -> Result<MaurerCartan, QuatError> {
    maurer_cartan_derive_from(&ComponentMap::standard(group))
}

pub fn maurer_cartan_derive_from(map: &ComponentMap) -> Result<MaurerCartan, QuatError> {
    map.check()?;
    let mut comps = Vec::with_capacity(16);
    for a in 0..2 {
        for b in 0..2 {
            let mut acc = QForm::zero(&map.space);
            for c in 0..2 {
                acc = acc.add(&map.phi[a][c].wedge(&map.phi[c][b])?);
            }
            comps.extend(acc.neg().components());
        }
    }
    let dg = map.invert_forms(&comps)?;
    let mut equations = StructureEquations::new(&map.space);
    for (g, f) in dg.into_iter().enumerate() {
        equations.set(g, f);
    }
    Ok(MaurerCartan { group: map.group, equations })
}

/// `dω = −M∧ω + T` with `M = [[i(ρ2−ρ1), −τ̄, 0], [τ, −i(ρ1+ρ2), 0], [0, 0, 2iρ1]]`
/// and `T = (ω̄2∧ω̄3, ω̄3∧ω̄1, t·ω̄1∧ω̄2)`, `t = 1` for Sp(2), `−2` for Sp(1,1).
pub fn displayed_structure_equation(group: Group) -> [Form<Surd>; 3] {
    let space = frame_space();
    let g = |n: &str| Form::<Surd>::generator(&space, n).expect("frame generator");
    let i = Surd::from(G::i());
    let z = Form::zero(&space);
    let m = [
        [(&g("rho2") - &g("rho1")).scale(&i), -g("taub"), z.clone()],
        [g("tau"), (&g("rho1") + &g("rho2")).scale(&i.neg()), z.clone()],
        [z.clone(), z.clone(), g("rho1").scale(&i.add(&i))],
    ];
    let t = match group {
        Group::Sp2 => Surd::one(),
        Group::Sp11 => Surd::from(G::from_int(-2)),
    };
    let w = |k: usize| g(&format!("w{k}"));
    let wb = |k: usize| g(&format!("wb{k}"));
    let torsion = [
        wb(2).wedge(&wb(3)).expect("same space"),
        wb(3).wedge(&wb(1)).expect("same space"),
        wb(1).wedge(&wb(2)).expect("same space").scale(&t),
    ];
    std::array::from_fn(|r| {
        let mut f = torsion[r].clone();
        for (c, mrc) in m[r].iter().enumerate() {
            f = &f - &mrc.wedge(&w(c + 1)).expect("same space");
        }
        f
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct EquationMatch {
    pub group: Group,
    pub matches: bool,
    /// One line per mismatched coefficient.
    pub diffs: Vec<String>,
}

/// Compares derived `dω1..dω3` with the displayed equations term by term.
pub fn match_displayed_equation(mc: &MaurerCartan) -> EquationMatch {
    let expected = displayed_structure_equation(mc.group);
    let derived = mc.d_omega();
    let space = mc.equations.space();
    let mut diffs = Vec::new();
    for (k, (e, d)) in expected.iter().zip(&derived).enumerate() {
        let mut monos: Vec<&Vec<usize>> = e.terms().keys().chain(d.terms().keys()).collect();
        monos.sort();
        monos.dedup();
        for m in monos {
            let (ce, cd) = (e.coefficient_at(m), d.coefficient_at(m));
            if ce != cd {
                let name: Vec<&str> = m.iter().map(|&i| space.name(i)).collect();
                diffs.push(format!("dw{}: {} expected {ce} derived {cd}", k + 1, name.join("^")));
            }
        }
    }
    EquationMatch { group: mc.group, matches: diffs.is_empty(), diffs }
}

#[derive(Clone, Debug, Serialize)]
pub struct InvolutionReport {
    pub group: Group,
    /// `C*ωᵢ = ω̄ᵢ` for `i = 1, 2, 3`.
    pub omega_to_conjugate: bool,
    /// `C(pq) = C(p)C(q)` on the sampled pairs.
    pub automorphism: bool,
    /// `C∘C = id` on the sampled quaternions and on the generators.
    pub squares_to_identity: bool,
    pub omega_reversed: bool,
    pub psi_conjugated: bool,
    pub pairs_checked: usize,
    /// `C*g` for each generator, printed.
    pub generator_map: BTreeMap<String, String>,
}

impl InvolutionReport {
    pub fn holds(&self) -> bool {
        self.omega_to_conjugate
            && self.automorphism
            && self.squares_to_identity
            && self.omega_reversed
            && self.psi_conjugated
    }
}

/// The pullback `C*g` of each generator, from `C*φ = C(φ)`.
pub fn involution_pullback(map: &ComponentMap) -> Result<Vec<Form<Surd>>, QuatError> {
    map.check()?;
    let comps: Vec<Form<Surd>> = map.phi.iter().flatten().flat_map(|q| q.c_involution().components()).collect();
    map.invert_forms(&comps)
}

pub fn involution_action(group: Group, pairs: usize, seed: u64) -> Result<InvolutionReport, QuatError> {
    let map = ComponentMap::standard(group);
    let images = involution_pullback(&map)?;
    let space = &map.space;
    let g = |n: &str| Form::<Surd>::generator(space, n).expect("frame generator");
    let omega_to_conjugate = (1..=3).all(|i| {
        let k = space.index_of(&format!("w{i}")).expect("frame generator");
        images[k] == g(&format!("wb{i}"))
    });
    let twice = images.iter().map(|f| f.pull_back(space, &images)).collect::<Result<Vec<_>, _>>()?;
    let gens_involutive = (0..space.len()).all(|k| twice[k] == Form::generator_at(space, k));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut automorphism = true;
    let mut quaternions_involutive = true;
    for _ in 0..pairs {
        let p = random_quaternion(&mut rng);
        let q = random_quaternion(&mut rng);
        automorphism &= p.mul(&q).c_involution() == p.c_involution().mul(&q.c_involution());
        quaternions_involutive &= p.c_involution().c_involution() == p;
    }

    let (omega, psi) = coframe_forms(space)?;
    let (omega, psi) =
        (omega.map_coefficients(|c| Surd::from(c.clone())), psi.map_coefficients(|c| Surd::from(c.clone())));
    let omega_reversed = omega.pull_back(space, &images)? == -&omega;
    let psi_conjugated = psi.pull_back(space, &images)? == psi.conjugate();

    Ok(InvolutionReport {
        group,
        omega_to_conjugate,
        automorphism,
        squares_to_identity: gens_involutive && quaternions_involutive,
        omega_reversed,
        psi_conjugated,
        pairs_checked: pairs,
        generator_map: images.iter().enumerate().map(|(k, f)| (space.name(k).to_string(), f.to_string())).collect(),
    })
}

/// One point of the fixed locus with the checks made there.
#[derive(Clone, Debug, Serialize)]
pub struct FixedLocusSample {
    /// `(x1, x2, x3, x4)` with `x1²+x2² ± (x3²+x4²) = 1`.
    pub point: [String; 4],
    pub on_quadric: bool,
    pub frame_in_group: bool,
    /// Each tangent vector maps into the Lie algebra and is fixed by `C`.
    pub tangent_in_fixed_algebra: bool,
    /// `ωᵢ(v)` is real for every tangent basis vector `v`.
    pub values_real: bool,
    pub omega_vanishes: bool,
    pub psi_vanishes: bool,
    /// `Re Ψ` on the (oriented) tangent basis, as a float for display.
    pub phi_value: f64,
    pub phi_positive: bool,
}

impl FixedLocusSample {
    pub fn passed(&self) -> bool {
        self.on_quadric
            && self.frame_in_group
            && self.tangent_in_fixed_algebra
            && self.values_real
            && self.omega_vanishes
            && self.psi_vanishes
            && self.phi_positive
    }
}

fn real_q(a: &BigRational, b: &BigRational) -> Quaternion<Surd> {
    Quaternion::new(Surd::from(G::real(a.clone())), Surd::from(G::real(b.clone())))
}

/// A point of `S³` (Sp(2)) or `ΨS³` (Sp(1,1)) from `y ∈ Q³`, together with
/// the three partial derivatives.
///
/// `S³`: inverse stereographic projection `x = (2y, |y|² − 1)/(|y|² + 1)`.
/// `ΨS³`: the line from `(−1, 0, 0, 0)` in direction `(1, y)` meets the
/// quadric again at `t = 2/Q(1, y)`.
pub fn quadric_point(
    group: Group,
    y: &[BigRational; 3],
) -> Result<([BigRational; 4], [[BigRational; 4]; 3]), QuatError> {
    let two = int(2);
    match group {
        Group::Sp2 => {
            let n2: BigRational = y.iter().map(|v| v * v).sum();
            let s = &n2 + int(1);
            let x = [&two * &y[0] / &s, &two * &y[1] / &s, &two * &y[2] / &s, (&n2 - int(1)) / &s];
            let dx = std::array::from_fn(|k| {
                let mut col: [BigRational; 4] = std::array::from_fn(|i| {
                    if i < 3 {
                        let delta = if i == k { &two / &s } else { int(0) };
                        delta - int(4) * &y[i] * &y[k] / (&s * &s)
                    } else {
                        int(0)
                    }
                });
                col[3] = int(4) * &y[k] / (&s * &s);
                col
            });
            Ok((x, dx))
        }
        Group::Sp11 => {
            let q = int(1) + &y[0] * &y[0] - &y[1] * &y[1] - &y[2] * &y[2];
            if q == int(0) {
                return Err(QuatError::DegenerateSample);
            }
            let d = [int(1), y[0].clone(), y[1].clone(), y[2].clone()];
            let x: [BigRational; 4] = std::array::from_fn(|i| {
                let p = if i == 0 { int(-1) } else { int(0) };
                p + &two * &d[i] / &q
            });
            let dq = [&two * &y[0], -(&two * &y[1]), -(&two * &y[2])];
            let dx = std::array::from_fn(|k| {
                std::array::from_fn(|i| {
                    let e = if i == k + 1 { &two / &q } else { int(0) };
                    e - &two * &d[i] * &dq[k] / (&q * &q)
                })
            });
            Ok((x, dx))
        }
    }
}

/// The C-fixed frame `E = (e1, e2)` over `x`: `e1 = (x1 + j x2, x3 + j x4)`
/// and `e2 = (−q̄, p̄)` (Sp(2)) or `(q̄, p̄)` (Sp(1,1)).
pub fn fixed_frame(group: Group, x: &[BigRational; 4]) -> QMat<Surd> {
    let p = real_q(&x[0], &x[1]);
    let q = real_q(&x[2], &x[3]);
    let top = match group {
        Group::Sp2 => q.conj().neg(),
        Group::Sp11 => q.conj(),
    };
    [[p.clone(), top], [q, p.conj()]]
}

/// Checks the fixed locus at the point with parameter `y`.
pub fn check_fixed_point(map: &ComponentMap, y: &[BigRational; 3]) -> Result<FixedLocusSample, QuatError> {
    let group = map.group;
    let (x, dx) = quadric_point(group, y)?;
    let sq = |v: &BigRational| v * v;
    let quad = sq(&x[0]) + sq(&x[1]) + (sq(&x[2]) + sq(&x[3])) * int(group.sign2());
    let e = fixed_frame(group, &x);
    let e_inv = group_inverse(group, &e);
    let mut in_fixed = true;
    let mut values: Vec<[Surd; 3]> = Vec::with_capacity(3);
    for col in &dx {
        // the frame is linear in x
        let de = fixed_frame(group, col);
        let xv = qmat_mul(&e_inv, &de);
        in_fixed &= in_algebra(group, &xv) && xv.iter().flatten().all(|q| q.c_involution() == *q);
        let vals = map.read_values(&xv)?;
        let w: [Surd; 3] =
            std::array::from_fn(|i| vals[map.space.index_of(&format!("w{}", i + 1)).expect("frame generator")].clone());
        values.push(w);
    }
    let values_real = values.iter().flatten().all(Surd::is_real);

    let cspace = omega_space();
    let (omega, psi) = coframe_forms(&cspace)?;
    let omega = omega.map_coefficients(|c| Surd::from(c.clone()));
    let psi = psi.map_coefficients(|c| Surd::from(c.clone()));
    let im_psi = psi.imaginary_part();
    let re_psi = psi.real_part();
    let mut vecs: Vec<VectorSlot<Surd>> = values
        .iter()
        .map(|w| VectorSlot::new(&cspace, (0..3).flat_map(|i| [(i, w[i].clone()), (i + 3, w[i].conj())])))
        .collect();
    let omega_vanishes = (0..3).all(|a| {
        (0..3).all(|b| Field::is_zero(&omega.evaluate(&[vecs[a].clone(), vecs[b].clone()]).expect("same space")))
    });
    let psi_vanishes = Field::is_zero(&im_psi.evaluate(&vecs)?);
    let mut phi = re_psi.evaluate(&vecs)?;
    if phi.real_sign() == Some(std::cmp::Ordering::Less) {
        vecs[2] = vecs[2].scale(&Surd::one().neg());
        phi = re_psi.evaluate(&vecs)?;
    }
    Ok(FixedLocusSample {
        point: std::array::from_fn(|i| crate::scalar::format_rational(&x[i])),
        on_quadric: quad == int(1),
        frame_in_group: in_group(group, &e),
        tangent_in_fixed_algebra: in_fixed,
        values_real,
        omega_vanishes,
        psi_vanishes,
        phi_value: phi.to_f64_pair().0,
        phi_positive: phi.real_sign() == Some(std::cmp::Ordering::Greater),
    })
}

/// `n` seeded samples of the fixed locus. Parameters hitting a vanishing
/// denominator are redrawn.
pub fn sample_fixed_locus(group: Group, n: usize, seed: u64) -> Result<Vec<FixedLocusSample>, QuatError> {
    if n == 0 {
        return Err(QuatError::NoSamples);
    }
    let map = ComponentMap::standard(group);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let y: [BigRational; 3] = std::array::from_fn(|_| rat(rng.gen_range(-12..=12), rng.gen_range(1..=6)));
        match check_fixed_point(&map, &y) {
            Err(QuatError::DegenerateSample) => continue,
            other => out.push(other?),
        }
    }
    Ok(out)
}
