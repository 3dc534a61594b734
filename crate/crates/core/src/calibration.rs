//! Pointwise calibration geometry of `C³ = R⁶` with the flat model
//! `(g₀, Ω₀, Ψ₀)`: Lagrangian and special Lagrangian 3-planes, the phase of a
//! Lagrangian plane, an SU(3) element carrying a special Lagrangian plane to
//! `R³`, and the normal-vector identity `V⌟ψ₀|_E = −*(V⌟Ω₀|_E)`.
//!
//! Real coordinates are `(x1, x2, x3, y1, y2, y3)` with `z_j = x_j + i y_j`.

use std::cmp::Ordering;

use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exterior::{GeneratorSpace, VectorSlot};
use crate::scalar::{format_rational, int, parse_rational, rat, rational_sqrt, GaussianRational};
use crate::su3::{levi_civita, model_forms, ModelForms};

type G = GaussianRational;
pub type RealVec6 = [BigRational; 6];
pub type CMat3 = [[G; 3]; 3];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CalibrationError {
    #[error("basis vectors are linearly dependent")]
    DependentBasis,
    #[error("plane is not Lagrangian")]
    NotLagrangian,
    #[error("plane is not special Lagrangian")]
    NotSpecialLagrangian,
    #[error("vector is not orthogonal to the plane")]
    NotNormal,
    #[error("invalid plane description: {0}")]
    BadInput(String),
}

/// A real 3-plane in `R⁶` given by a basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PlaneJson", into = "PlaneJson")]
pub struct Plane3 {
    basis: [RealVec6; 3],
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PlaneJson {
    pub basis: Vec<Vec<String>>,
}

impl TryFrom<PlaneJson> for Plane3 {
    type Error = CalibrationError;

    fn try_from(j: PlaneJson) -> Result<Self, Self::Error> {
        if j.basis.len() != 3 {
            return Err(CalibrationError::BadInput(format!("expected 3 vectors, got {}", j.basis.len())));
        }
        let mut basis: [RealVec6; 3] = std::array::from_fn(|_| std::array::from_fn(|_| int(0)));
        for (k, v) in j.basis.iter().enumerate() {
            if v.len() != 6 {
                return Err(CalibrationError::BadInput(format!("vector {} has {} components", k + 1, v.len())));
            }
            for (i, s) in v.iter().enumerate() {
                basis[k][i] = parse_rational(s).map_err(|e| CalibrationError::BadInput(e.0))?;
            }
        }
        Plane3::new(basis)
    }
}

impl From<Plane3> for PlaneJson {
    fn from(p: Plane3) -> Self {
        PlaneJson { basis: p.basis.iter().map(|v| v.iter().map(format_rational).collect()).collect() }
    }
}

fn det3<T>(m: &[[T; 3]; 3]) -> T
where
    T: Clone + std::ops::Add<Output = T> + std::ops::Sub<Output = T> + std::ops::Mul<Output = T>,
{
    let p = |a: &T, b: &T, c: &T| a.clone() * b.clone() * c.clone();
    p(&m[0][0], &m[1][1], &m[2][2]) + p(&m[0][1], &m[1][2], &m[2][0]) + p(&m[0][2], &m[1][0], &m[2][1])
        - p(&m[0][2], &m[1][1], &m[2][0])
        - p(&m[0][0], &m[1][2], &m[2][1])
        - p(&m[0][1], &m[1][0], &m[2][2])
}

/// Inverse via the adjugate.
fn inverse3<T>(m: &[[T; 3]; 3], div: impl Fn(T, &T) -> T) -> [[T; 3]; 3]
where
    T: Clone + std::ops::Add<Output = T> + std::ops::Sub<Output = T> + std::ops::Mul<Output = T>,
{
    let d = det3(m);
    std::array::from_fn(|r| {
        std::array::from_fn(|c| {
            // cofactor of (c, r)
            let (r1, r2) = ((c + 1) % 3, (c + 2) % 3);
            let (c1, c2) = ((r + 1) % 3, (r + 2) % 3);
            let cof = m[r1][c1].clone() * m[r2][c2].clone() - m[r1][c2].clone() * m[r2][c1].clone();
            div(cof, &d)
        })
    })
}

pub fn cmat_mul(a: &CMat3, b: &CMat3) -> CMat3 {
    std::array::from_fn(|r| std::array::from_fn(|c| (0..3).map(|k| &a[r][k] * &b[k][c]).fold(G::zero(), |s, x| s + x)))
}

pub fn cmat_identity() -> CMat3 {
    std::array::from_fn(|r| std::array::from_fn(|c| if r == c { G::one() } else { G::zero() }))
}

pub fn cmat_adjoint(a: &CMat3) -> CMat3 {
    std::array::from_fn(|r| std::array::from_fn(|c| a[c][r].conj()))
}

pub fn cmat_det(a: &CMat3) -> G {
    det3(a)
}

/// A random element of SU(3) with Gaussian rational entries: the Cayley
/// transform `(I − K)(I + K)⁻¹` of a skew-Hermitian `K`, with one column
/// rescaled by a unit to make the determinant 1.
pub fn random_su3(rng: &mut impl Rng) -> CMat3 {
    let mut r = || rat(rng.gen_range(-6..=6), rng.gen_range(1..=4));
    let mut k: CMat3 = std::array::from_fn(|_| std::array::from_fn(|_| G::zero()));
    for i in 0..3 {
        k[i][i] = G::new(int(0), r());
        for j in i + 1..3 {
            let z = G::new(r(), r());
            k[j][i] = -z.conj();
            k[i][j] = z;
        }
    }
    let id = cmat_identity();
    let minus: CMat3 = std::array::from_fn(|a| std::array::from_fn(|b| &id[a][b] - &k[a][b]));
    let plus: CMat3 = std::array::from_fn(|a| std::array::from_fn(|b| &id[a][b] + &k[a][b]));
    let inv = inverse3(&plus, |x, d| x * d.inv().expect("I + K is invertible"));
    let mut u = cmat_mul(&minus, &inv);
    let fix = cmat_det(&u).conj();
    for row in u.iter_mut() {
        row[0] = &row[0] * &fix;
    }
    u
}

/// A unit Gaussian rational `((m² − n²) + 2mn·i)/(m² + n²)`.
pub fn rational_phase(m: i64, n: i64) -> G {
    let d = m * m + n * n;
    G::new(rat(m * m - n * n, d), rat(2 * m * n, d))
}

impl Plane3 {
    pub fn new(basis: [RealVec6; 3]) -> Result<Self, CalibrationError> {
        let p = Self { basis };
        if p.gram_det().is_zero() {
            return Err(CalibrationError::DependentBasis);
        }
        Ok(p)
    }

    /// `R³ = span(∂x1, ∂x2, ∂x3)`.
    pub fn real_span() -> Self {
        Self::from_complex(&cmat_identity()).expect("standard basis")
    }

    /// The real span of the columns of a complex 3×3 matrix.
    pub fn from_complex(cols: &CMat3) -> Result<Self, CalibrationError> {
        Self::new(std::array::from_fn(|k| complex_to_real(&std::array::from_fn(|i| cols[i][k].clone()))))
    }

    pub fn basis(&self) -> &[RealVec6; 3] {
        &self.basis
    }

    /// Columns are the basis vectors as elements of `C³`.
    pub fn complex_basis(&self) -> CMat3 {
        std::array::from_fn(|i| std::array::from_fn(|k| G::new(self.basis[k][i].clone(), self.basis[k][i + 3].clone())))
    }

    /// `A·E`.
    pub fn image(&self, a: &CMat3) -> Result<Self, CalibrationError> {
        Self::from_complex(&cmat_mul(a, &self.complex_basis()))
    }

    /// The same plane with basis `b'_k = Σ_j m_jk b_j`.
    pub fn rebased(&self, m: &[[BigRational; 3]; 3]) -> Result<Self, CalibrationError> {
        Self::new(std::array::from_fn(|k| std::array::from_fn(|i| (0..3).map(|j| &m[j][k] * &self.basis[j][i]).sum())))
    }

    pub fn gram(&self) -> [[BigRational; 3]; 3] {
        std::array::from_fn(|a| std::array::from_fn(|b| dot(&self.basis[a], &self.basis[b])))
    }

    pub fn gram_det(&self) -> BigRational {
        det3(&self.gram())
    }

    fn slots(&self) -> Vec<VectorSlot<G>> {
        self.basis.iter().map(slot).collect()
    }
}

fn complex_to_real(v: &[G; 3]) -> RealVec6 {
    std::array::from_fn(|i| if i < 3 { v[i].re.clone() } else { v[i - 3].im.clone() })
}

fn dot(a: &RealVec6, b: &RealVec6) -> BigRational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

fn slot(v: &RealVec6) -> VectorSlot<G> {
    let space = GeneratorSpace::standard_real(6);
    VectorSlot::new(&space, v.iter().enumerate().map(|(i, x)| (i, G::real(x.clone()))))
}

/// `J v` for a real vector `v`, i.e. multiplication by `i` on `C³`.
pub fn complex_structure(v: &RealVec6) -> RealVec6 {
    std::array::from_fn(|i| if i < 3 { -v[i + 3].clone() } else { v[i - 3].clone() })
}

fn model() -> ModelForms {
    model_forms(3).expect("dimension three is supported")
}

pub fn is_lagrangian(e: &Plane3) -> bool {
    let m = model();
    let s = e.slots();
    (0..3).all(|a| (a + 1..3).all(|b| m.omega0.evaluate(&[s[a].clone(), s[b].clone()]).expect("same space").is_zero()))
}

/// `Ψ₀(b1, b2, b3)`.
pub fn psi0_on(e: &Plane3) -> G {
    model().psi0_complex.evaluate(&e.slots()).expect("same space")
}

pub fn is_special_lagrangian(e: &Plane3) -> bool {
    is_lagrangian(e) && psi0_on(e).im.is_zero()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Phase {
    /// `Ψ₀(b1, b2, b3)`.
    pub psi: G,
    /// `det` of the Gram matrix, the square of the volume of the basis.
    #[serde(with = "crate::scalar::rational_string")]
    pub volume_sq: BigRational,
    /// `λ` when the volume is rational.
    pub exact: Option<G>,
    pub re: f64,
    pub im: f64,
}

impl Phase {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// `λ(E) = Ψ₀(b) / vol(b)`; depends on the orientation of the basis.
pub fn lambda_phase(e: &Plane3) -> Result<Phase, CalibrationError> {
    if !is_lagrangian(e) {
        return Err(CalibrationError::NotLagrangian);
    }
    let psi = psi0_on(e);
    let volume_sq = e.gram_det();
    let exact = rational_sqrt(&volume_sq).map(|v| psi.scale(&(BigRational::one() / v)));
    let (re, im) = match &exact {
        Some(l) => l.to_f64_pair(),
        None => {
            let vol = to_f64(&volume_sq).sqrt();
            let (a, b) = psi.to_f64_pair();
            (a / vol, b / vol)
        }
    };
    Ok(Phase { psi, volume_sq, exact, re, im })
}

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    /// Row-major `A` with `A(E) = R³`.
    pub matrix: [[(f64, f64); 3]; 3],
    /// `max |AĀᵗ − I|`.
    pub unitary_residual: f64,
    pub det_residual: f64,
    /// `max |Im(A b_k)|` over the basis.
    pub image_residual: f64,
}

impl Witness {
    pub fn within(&self, tol: f64) -> bool {
        self.unitary_residual < tol && self.det_residual < tol && self.image_residual < tol
    }
}

/// An `A ∈ SU(3)` with `A(E) = R³`, found by orthonormalizing `E`.
pub fn su3_witness(e: &Plane3) -> Result<Witness, CalibrationError> {
    if !is_special_lagrangian(e) {
        return Err(CalibrationError::NotSpecialLagrangian);
    }
    let to_f = to_f64;
    let mut ortho: Vec<[f64; 6]> = Vec::with_capacity(3);
    for b in e.basis() {
        let mut v: [f64; 6] = std::array::from_fn(|i| to_f(&b[i]));
        for u in &ortho {
            let p: f64 = v.iter().zip(u).map(|(x, y)| x * y).sum();
            v.iter_mut().zip(u).for_each(|(x, y)| *x -= p * y);
        }
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        ortho.push(v.map(|x| x / n));
    }
    // columns u_k are a unitary basis of C³ since E is Lagrangian
    let u: [[Complex64; 3]; 3] =
        std::array::from_fn(|i| std::array::from_fn(|k| Complex64::new(ortho[k][i], ortho[k][i + 3])));
    let mut a: [[Complex64; 3]; 3] = std::array::from_fn(|r| std::array::from_fn(|c| u[c][r].conj()));
    // det A = ±1 here; a real sign flip on one row keeps A(E) = R³
    if det3(&a).re < 0.0 {
        a[2] = a[2].map(|z| -z);
    }
    let mut unitary_residual: f64 = 0.0;
    for r in 0..3 {
        for c in 0..3 {
            let s: Complex64 = (0..3).map(|k| a[r][k] * a[c][k].conj()).sum();
            let target = if r == c { 1.0 } else { 0.0 };
            unitary_residual = unitary_residual.max((s - target).norm());
        }
    }
    let det_residual = (det3(&a) - Complex64::new(1.0, 0.0)).norm();
    let mut image_residual: f64 = 0.0;
    for b in e.basis() {
        for row in &a {
            let z: Complex64 = (0..3).map(|k| row[k] * Complex64::new(to_f(&b[k]), to_f(&b[k + 3]))).sum();
            image_residual = image_residual.max(z.im.abs());
        }
    }
    Ok(Witness { matrix: a.map(|row| row.map(|z| (z.re, z.im))), unitary_residual, det_residual, image_residual })
}

/// Both sides of `V⌟ψ₀|_E = −*v`, `v = V⌟Ω₀|_E`, on the basis `b` of `E`
/// oriented so that `φ₀(b) > 0`. 2-forms on `E` are listed by their values
/// on `(b2, b3), (b3, b1), (b1, b2)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McLeanCheck {
    #[serde(serialize_with = "ser_rationals")]
    pub v: [BigRational; 3],
    #[serde(serialize_with = "ser_rationals")]
    pub lhs: [BigRational; 3],
    #[serde(serialize_with = "ser_rationals")]
    pub minus_star_v: [BigRational; 3],
    /// `φ₀(b)`, equal to the volume of `b` on a calibrated plane.
    #[serde(with = "crate::scalar::rational_string")]
    pub volume: BigRational,
    /// `φ₀(b)² = det Gram`.
    pub calibrated: bool,
    pub holds: bool,
}

fn ser_rationals<S: serde::Serializer>(v: &[BigRational; 3], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(3))?;
    for q in v {
        seq.serialize_element(&format_rational(q))?;
    }
    seq.end()
}

pub fn mclean_identity(e: &Plane3, v: &RealVec6) -> Result<McLeanCheck, CalibrationError> {
    if !is_special_lagrangian(e) {
        return Err(CalibrationError::NotSpecialLagrangian);
    }
    if e.basis().iter().any(|b| !dot(b, v).is_zero()) {
        return Err(CalibrationError::NotNormal);
    }
    let m = model();
    let mut s = e.slots();
    let mut volume = m.phi0.evaluate(&s).expect("same space").re;
    let mut gram = e.gram();
    if volume.is_negative() {
        s[2] = s[2].scale(&G::from_int(-1));
        volume = -volume;
        for k in 0..3 {
            if k != 2 {
                gram[k][2] = -gram[k][2].clone();
                gram[2][k] = -gram[2][k].clone();
            }
        }
    }
    let calibrated = &volume * &volume == det3(&gram);
    let vs = slot(v);
    let one_form: [BigRational; 3] =
        std::array::from_fn(|k| m.omega0.evaluate(&[vs.clone(), s[k].clone()]).expect("same space").re);
    let pairs = [(1, 2), (2, 0), (0, 1)];
    let lhs = pairs.map(|(i, j)| m.psi0.evaluate(&[vs.clone(), s[i].clone(), s[j].clone()]).expect("same space").re);
    let ginv = inverse3(&gram, |x, d| x / d);
    let raised: [BigRational; 3] = std::array::from_fn(|k| (0..3).map(|l| &ginv[k][l] * &one_form[l]).sum());
    let minus_star_v = pairs.map(|(i, j)| {
        let sum: BigRational = (0..3).map(|k| &raised[k] * int(levi_civita(i, j, k))).sum();
        -(&volume * sum)
    });
    let holds = calibrated && lhs == minus_star_v;
    Ok(McLeanCheck { v: one_form, lhs, minus_star_v, volume, calibrated, holds })
}

/// A special Lagrangian plane `U·R³` with a mixed, non-orthonormal basis,
/// and a random normal vector `J·U·r`.
pub fn random_sl_plane(rng: &mut impl Rng) -> (Plane3, CMat3) {
    let u = random_su3(rng);
    let base = Plane3::from_complex(&u).expect("unitary columns are independent");
    loop {
        let m: [[BigRational; 3]; 3] =
            std::array::from_fn(|_| std::array::from_fn(|_| rat(rng.gen_range(-4..=4), rng.gen_range(1..=3))));
        if let Ok(p) = base.rebased(&m) {
            return (p, u);
        }
    }
}

pub fn random_normal(e: &Plane3, rng: &mut impl Rng) -> RealVec6 {
    let mut out: RealVec6 = std::array::from_fn(|_| int(0));
    for b in e.basis() {
        let c = rat(rng.gen_range(-5..=5), rng.gen_range(1..=3));
        let jb = complex_structure(b);
        for i in 0..6 {
            out[i] += &c * &jb[i];
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct McLeanSample {
    pub plane: Plane3,
    #[serde(serialize_with = "ser_vec6")]
    pub normal: RealVec6,
    pub check: McLeanCheck,
}

fn ser_vec6<S: serde::Serializer>(v: &RealVec6, s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(format_rational))
}

/// `n` seeded (special Lagrangian plane, normal) pairs with the identity
/// checked on each.
pub fn mclean_samples(n: usize, seed: u64) -> Vec<McLeanSample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let (plane, _) = random_sl_plane(&mut rng);
            let normal = random_normal(&plane, &mut rng);
            let check = mclean_identity(&plane, &normal).expect("sampled plane is special Lagrangian");
            McLeanSample { plane, normal, check }
        })
        .collect()
}

/// Whether `λ` is `±1`, read exactly from `Ψ₀(b)` and the Gram determinant.
pub fn phase_is_real_unit(p: &Phase) -> bool {
    p.psi.im.is_zero() && (&p.psi.re * &p.psi.re).cmp(&p.volume_sq) == Ordering::Equal
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_gram() {
        let g = [[int(2), int(1), int(0)], [int(1), int(2), int(0)], [int(0), int(0), int(1)]];
        let inv = inverse3(&g, |x, d| x / d);
        let prod: [[BigRational; 3]; 3] =
            std::array::from_fn(|r| std::array::from_fn(|c| (0..3).map(|k| &g[r][k] * &inv[k][c]).sum()));
        assert_eq!(prod, std::array::from_fn(|r| std::array::from_fn(|c| if r == c { int(1) } else { int(0) })));
    }

    #[test]
    fn random_su3_is_special_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let u = random_su3(&mut rng);
            assert_eq!(cmat_mul(&u, &cmat_adjoint(&u)), cmat_identity());
            assert_eq!(cmat_det(&u), G::one());
        }
    }
}
