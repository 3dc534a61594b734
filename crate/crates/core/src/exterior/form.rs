use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use super::{Coefficient, ExteriorError, GeneratorSpace, ParamCoeff};
use crate::linalg::{self, Field, SparseRow};
use crate::scalar::GaussianRational;

/// Strictly increasing generator indices.
pub type Monomial = Vec<usize>;

/// Sorts `idx` and returns the sorted tuple together with whether an odd
/// permutation was needed. `None` if an index repeats.
pub fn sort_with_sign(idx: &[usize]) -> Option<(Monomial, bool)> {
    let mut v = idx.to_vec();
    let mut odd = false;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            odd = !odd;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some((v, odd))
    }
}

pub(crate) fn same_space(a: &Arc<GeneratorSpace>, b: &Arc<GeneratorSpace>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// A tangent vector in the basis dual to the generators.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorSlot<S = GaussianRational> {
    space: Arc<GeneratorSpace>,
    components: BTreeMap<usize, S>,
}

impl<S: Field> VectorSlot<S> {
    pub fn new(space: &Arc<GeneratorSpace>, components: impl IntoIterator<Item = (usize, S)>) -> Self {
        let components = components.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        Self { space: space.clone(), components }
    }

    /// The vector dual to generator `i`.
    pub fn basis(space: &Arc<GeneratorSpace>, i: usize) -> Self {
        Self::new(space, [(i, S::one())])
    }

    pub fn from_names(space: &Arc<GeneratorSpace>, comps: &[(&str, S)]) -> Result<Self, ExteriorError> {
        let mut v = BTreeMap::new();
        for (n, c) in comps {
            v.insert(space.index_of(n)?, c.clone());
        }
        Ok(Self::new(space, v))
    }

    pub fn space(&self) -> &Arc<GeneratorSpace> {
        &self.space
    }

    pub fn components(&self) -> &BTreeMap<usize, S> {
        &self.components
    }

    pub fn component(&self, i: usize) -> S {
        self.components.get(&i).cloned().unwrap_or_else(S::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut c = self.components.clone();
        for (i, v) in &other.components {
            let e = c.entry(*i).or_insert_with(S::zero);
            *e = e.add(v);
        }
        Self::new(&self.space, c)
    }

    pub fn scale(&self, s: &S) -> Self {
        Self::new(&self.space, self.components.iter().map(|(i, v)| (*i, v.mul(s))))
    }

    /// The conjugate vector: components conjugated and moved to the paired
    /// generator, so `conj(v) ⌟ conj(f) = conj(v ⌟ f)`.
    pub fn conjugate(&self) -> Self {
        Self::new(&self.space, self.components.iter().map(|(i, v)| (self.space.conj_index(*i), v.conj())))
    }
}

/// An exterior form over a [`GeneratorSpace`], possibly of mixed degree.
#[derive(Clone)]
pub struct Form<C: Coefficient = ParamCoeff> {
    space: Arc<GeneratorSpace>,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coefficient> PartialEq for Form<C> {
    fn eq(&self, other: &Self) -> bool {
        same_space(&self.space, &other.space) && self.terms == other.terms
    }
}

impl<C: Coefficient> Form<C> {
    pub fn zero(space: &Arc<GeneratorSpace>) -> Self {
        Self { space: space.clone(), terms: BTreeMap::new() }
    }

    pub fn scalar(space: &Arc<GeneratorSpace>, c: C) -> Self {
        let mut f = Self::zero(space);
        f.add_term(Vec::new(), c);
        f
    }

    pub fn one(space: &Arc<GeneratorSpace>) -> Self {
        Self::scalar(space, C::one())
    }

    pub fn generator_at(space: &Arc<GeneratorSpace>, i: usize) -> Self {
        let mut f = Self::zero(space);
        f.add_term(vec![i], C::one());
        f
    }

    pub fn generator(space: &Arc<GeneratorSpace>, name: &str) -> Result<Self, ExteriorError> {
        Ok(Self::generator_at(space, space.index_of(name)?))
    }

    /// `c · g₁∧…∧gₖ` from generator names in the given order.
    pub fn monomial(space: &Arc<GeneratorSpace>, names: &[&str], c: C) -> Result<Self, ExteriorError> {
        let idx = names.iter().map(|n| space.index_of(n)).collect::<Result<Vec<_>, _>>()?;
        Ok(Self::from_terms(space, [(idx, c)]))
    }

    /// Builds a form from arbitrary (not necessarily sorted) index tuples.
    pub fn from_terms(space: &Arc<GeneratorSpace>, terms: impl IntoIterator<Item = (Vec<usize>, C)>) -> Self {
        let mut f = Self::zero(space);
        for (idx, c) in terms {
            assert!(idx.iter().all(|&i| i < space.len()), "generator index out of range");
            if let Some((m, odd)) = sort_with_sign(&idx) {
                f.add_term(m, if odd { c.neg() } else { c });
            }
        }
        f
    }

    pub fn space(&self) -> &Arc<GeneratorSpace> {
        &self.space
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, C> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degrees(&self) -> BTreeSet<usize> {
        self.terms.keys().map(Vec::len).collect()
    }

    /// The degree if every term has the same one. The zero form has none.
    pub fn pure_degree(&self) -> Option<usize> {
        let d = self.degrees();
        if d.len() == 1 {
            d.into_iter().next()
        } else {
            None
        }
    }

    pub fn homogeneous_part(&self, k: usize) -> Self {
        Self {
            space: self.space.clone(),
            terms: self.terms.iter().filter(|(m, _)| m.len() == k).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// Coefficient of the monomial named in the given order, sign included.
    pub fn coefficient(&self, names: &[&str]) -> Result<C, ExteriorError> {
        let idx = names.iter().map(|n| self.space.index_of(n)).collect::<Result<Vec<_>, _>>()?;
        Ok(self.coefficient_at(&idx))
    }

    /// Coefficient of `g_{i₁}∧…∧g_{iₖ}` for indices in the given order.
    pub fn coefficient_at(&self, idx: &[usize]) -> C {
        match sort_with_sign(idx) {
            None => C::zero(),
            Some((m, odd)) => {
                let c = self.terms.get(&m).cloned().unwrap_or_else(C::zero);
                if odd {
                    c.neg()
                } else {
                    c
                }
            }
        }
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    fn check_space(&self, other: &Arc<GeneratorSpace>) -> Result<(), ExteriorError> {
        if same_space(&self.space, other) {
            Ok(())
        } else {
            Err(ExteriorError::SpaceMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, ExteriorError> {
        self.check_space(&other.space)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, s: &C::Scalar) -> Self {
        let mut out = Self::zero(&self.space);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.scale(s));
        }
        out
    }

    pub fn try_scale(&self, c: &C) -> Result<Self, ExteriorError> {
        let mut out = Self::zero(&self.space);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v.try_mul(c)?);
        }
        Ok(out)
    }

    pub fn scale_gaussian(&self, g: &GaussianRational) -> Self {
        self.try_scale(&C::from_gaussian(g)).expect("constant scaling never overflows")
    }

    pub fn wedge(&self, other: &Self) -> Result<Self, ExteriorError> {
        self.check_space(&other.space)?;
        let mut out = Self::zero(&self.space);
        let mut idx = Vec::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                idx.clear();
                idx.extend_from_slice(m1);
                idx.extend_from_slice(m2);
                if let Some((m, odd)) = sort_with_sign(&idx) {
                    let c = c1.try_mul(c2)?;
                    out.add_term(m, if odd { c.neg() } else { c });
                }
            }
        }
        Ok(out)
    }

    /// Wedge of a sequence, left to right.
    pub fn wedge_all<'a>(
        space: &Arc<GeneratorSpace>,
        fs: impl IntoIterator<Item = &'a Self>,
    ) -> Result<Self, ExteriorError> {
        let mut acc = Self::one(space);
        for f in fs {
            acc = acc.wedge(f)?;
        }
        Ok(acc)
    }

    /// `v ⌟ f`: contraction into the first slot, so
    /// `v ⌟ (g₁∧…∧gₖ) = Σᵢ (−1)^{i−1} gᵢ(v) g₁∧…ĝᵢ…∧gₖ`.
    pub fn interior(&self, v: &VectorSlot<C::Scalar>) -> Result<Self, ExteriorError> {
        self.check_space(&v.space)?;
        let mut out = Self::zero(&self.space);
        for (m, c) in &self.terms {
            for (pos, g) in m.iter().enumerate() {
                if let Some(x) = v.components.get(g) {
                    let x = if pos % 2 == 1 { x.neg() } else { x.clone() };
                    let mut rest = m.clone();
                    rest.remove(pos);
                    out.add_term(rest, c.scale(&x));
                }
            }
        }
        Ok(out)
    }

    /// `(v₁∧…∧vₖ) ⌟ f`, contracting `v₁` first; equals `f(v₁,…,vₖ,·,…)`.
    pub fn interior_all(&self, vs: &[VectorSlot<C::Scalar>]) -> Result<Self, ExteriorError> {
        let mut f = self.clone();
        for v in vs {
            f = f.interior(v)?;
        }
        Ok(f)
    }

    /// Alternating evaluation of the degree-`vs.len()` part on the vectors.
    pub fn evaluate(&self, vs: &[VectorSlot<C::Scalar>]) -> Result<C, ExteriorError> {
        let f = self.homogeneous_part(vs.len()).interior_all(vs)?;
        Ok(f.terms.get(&Vec::new()).cloned().unwrap_or_else(C::zero))
    }

    pub fn conjugate(&self) -> Self {
        let mut out = Self::zero(&self.space);
        for (m, c) in &self.terms {
            let image: Vec<usize> = m.iter().map(|&i| self.space.conj_index(i)).collect();
            let (sorted, odd) = sort_with_sign(&image).expect("conjugation is a bijection");
            let c = c.conj_in(&self.space);
            out.add_term(sorted, if odd { c.neg() } else { c });
        }
        out
    }

    pub fn is_real(&self) -> bool {
        self.conjugate() == *self
    }

    /// Real part `(f + f̄)/2`.
    pub fn real_part(&self) -> Self {
        (self + &self.conjugate()).scale_gaussian(&GaussianRational::from_ratio(1, 2))
    }

    /// Imaginary part `(f − f̄)/(2i)`.
    pub fn imaginary_part(&self) -> Self {
        (self - &self.conjugate())
            .scale_gaussian(&GaussianRational::new(crate::scalar::int(0), crate::scalar::rat(-1, 2)))
    }

    /// Pulls back along a linear map of generators: generator `i` of this
    /// form's space is replaced by `images[i]`, a form on `target`.
    pub fn pull_back(&self, target: &Arc<GeneratorSpace>, images: &[Self]) -> Result<Self, ExteriorError> {
        assert_eq!(images.len(), self.space.len(), "one image per generator");
        for im in images {
            if !same_space(&im.space, target) {
                return Err(ExteriorError::SpaceMismatch);
            }
        }
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut acc = Self::scalar(target, c.clone());
            for &g in m {
                acc = acc.wedge(&images[g])?;
                if acc.is_zero() {
                    break;
                }
            }
            for (mm, cc) in acc.terms {
                out.add_term(mm, cc);
            }
        }
        Ok(out)
    }

    /// Replaces the listed generators by forms on the same space.
    pub fn substitute(&self, map: &BTreeMap<usize, Self>) -> Result<Self, ExteriorError> {
        let images: Vec<Self> = (0..self.space.len())
            .map(|i| map.get(&i).cloned().unwrap_or_else(|| Self::generator_at(&self.space, i)))
            .collect();
        self.pull_back(&self.space, &images)
    }

    pub fn map_coefficients<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> Form<D> {
        let mut out = Form::<D>::zero(&self.space);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    /// Moves the form onto an equal-length space with the same generator
    /// order, e.g. after renaming.
    pub fn with_space(&self, space: &Arc<GeneratorSpace>) -> Self {
        assert_eq!(space.len(), self.space.len());
        Self { space: space.clone(), terms: self.terms.clone() }
    }
}

impl<C: Coefficient> Add<&Form<C>> for &Form<C> {
    type Output = Form<C>;
    /// Panics when the spaces differ; use [`Form::try_add`] to recover.
    fn add(self, rhs: &Form<C>) -> Form<C> {
        self.try_add(rhs).expect("adding forms on different generator spaces")
    }
}

impl<C: Coefficient> Add for Form<C> {
    type Output = Form<C>;
    fn add(self, rhs: Form<C>) -> Form<C> {
        &self + &rhs
    }
}

impl<C: Coefficient> Neg for &Form<C> {
    type Output = Form<C>;
    fn neg(self) -> Form<C> {
        let mut out = Form::zero(&self.space);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.neg());
        }
        out
    }
}

impl<C: Coefficient> Neg for Form<C> {
    type Output = Form<C>;
    fn neg(self) -> Form<C> {
        -&self
    }
}

impl<C: Coefficient> Sub<&Form<C>> for &Form<C> {
    type Output = Form<C>;
    fn sub(self, rhs: &Form<C>) -> Form<C> {
        self + &(-rhs)
    }
}

impl<C: Coefficient> Sub for Form<C> {
    type Output = Form<C>;
    fn sub(self, rhs: Form<C>) -> Form<C> {
        &self - &rhs
    }
}

impl<C: Coefficient> fmt::Debug for Form<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<C: Coefficient> fmt::Display for Form<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let names: Vec<&str> = m.iter().map(|&i| self.space.name(i)).collect();
                if names.is_empty() {
                    format!("{c:?}")
                } else {
                    format!("{c:?}*{}", names.join("^"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Rank over the scalar field of a set of constant 1-forms.
pub fn rank_one_forms<C: Coefficient>(fs: &[Form<C>]) -> Result<usize, ExteriorError> {
    let mut rows: Vec<SparseRow<C::Scalar>> = Vec::with_capacity(fs.len());
    for f in fs {
        let mut row = SparseRow::new();
        for (m, c) in &f.terms {
            if m.len() != 1 {
                return Err(ExteriorError::NotDegreeOne);
            }
            row.insert(m[0], c.as_scalar().ok_or(ExteriorError::ParametricInput)?);
        }
        rows.push(row);
    }
    Ok(linalg::rank(rows))
}

/// Euclidean Hodge star on `dx1..dx{dim}` with `dx1∧…∧dx{dim}` positive.
pub fn hodge_star<C: Coefficient>(f: &Form<C>, dim: usize) -> Result<Form<C>, ExteriorError> {
    if !(dim == 4 || dim == 6) || !f.space.is_standard_real(dim) {
        return Err(ExteriorError::UnsupportedSpace);
    }
    let mut out = Form::zero(&f.space);
    for (m, c) in &f.terms {
        if c.as_scalar().is_none() {
            return Err(ExteriorError::ParametricInput);
        }
        let rest: Vec<usize> = (0..dim).filter(|i| !m.contains(i)).collect();
        let mut full = m.clone();
        full.extend_from_slice(&rest);
        let (_, odd) = sort_with_sign(&full).expect("complement is disjoint");
        out.add_term(rest, if odd { c.neg() } else { c.clone() });
    }
    Ok(out)
}
