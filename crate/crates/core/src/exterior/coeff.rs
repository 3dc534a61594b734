use std::collections::BTreeMap;
use std::fmt::{self, Debug};

use super::{ExteriorError, GeneratorSpace};
use crate::linalg::Field;
use crate::scalar::GaussianRational;

/// Coefficient ring of a [`Form`](super::Form).
///
/// `Scalar` is the exact field the coefficients live over; vectors fed to
/// interior products and evaluations carry components in it.
pub trait Coefficient: Clone + PartialEq + Debug + Send + Sync + 'static {
    type Scalar: Field + Send + Sync;

    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn try_mul(&self, other: &Self) -> Result<Self, ExteriorError>;
    fn scale(&self, s: &Self::Scalar) -> Self;
    fn from_scalar(s: Self::Scalar) -> Self;
    /// `None` when the coefficient depends on parameters.
    fn as_scalar(&self) -> Option<Self::Scalar>;
    fn conj_in(&self, space: &GeneratorSpace) -> Self;
    fn from_gaussian(g: &GaussianRational) -> Self;

    fn one() -> Self {
        Self::from_scalar(<Self::Scalar as Field>::one())
    }
}

impl Coefficient for GaussianRational {
    type Scalar = GaussianRational;

    fn zero() -> Self {
        GaussianRational::zero()
    }
    fn is_zero(&self) -> bool {
        GaussianRational::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn try_mul(&self, other: &Self) -> Result<Self, ExteriorError> {
        Ok(self * other)
    }
    fn scale(&self, s: &Self) -> Self {
        self * s
    }
    fn from_scalar(s: Self) -> Self {
        s
    }
    fn as_scalar(&self) -> Option<Self> {
        Some(self.clone())
    }
    fn conj_in(&self, _: &GeneratorSpace) -> Self {
        self.conj()
    }
    fn from_gaussian(g: &GaussianRational) -> Self {
        g.clone()
    }
}

/// `constant + Σ linear[p]·p`, affine in the parameter symbols `p`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct ParamCoeff {
    pub constant: GaussianRational,
    linear: BTreeMap<String, GaussianRational>,
}

impl ParamCoeff {
    pub fn constant(c: GaussianRational) -> Self {
        Self { constant: c, linear: BTreeMap::new() }
    }

    pub fn param(name: &str) -> Self {
        Self::param_scaled(name, GaussianRational::one())
    }

    pub fn param_scaled(name: &str, c: GaussianRational) -> Self {
        let mut linear = BTreeMap::new();
        if !c.is_zero() {
            linear.insert(name.to_string(), c);
        }
        Self { constant: GaussianRational::zero(), linear }
    }

    pub fn from_parts(
        constant: GaussianRational,
        linear: impl IntoIterator<Item = (String, GaussianRational)>,
    ) -> Self {
        let mut out = Self::constant(constant);
        for (p, v) in linear {
            out.add_param(&p, &v);
        }
        out
    }

    pub fn linear(&self) -> &BTreeMap<String, GaussianRational> {
        &self.linear
    }

    pub fn is_constant(&self) -> bool {
        self.linear.is_empty()
    }

    fn add_param(&mut self, p: &str, v: &GaussianRational) {
        let entry = self.linear.entry(p.to_string()).or_default();
        *entry += v;
        if entry.is_zero() {
            self.linear.remove(p);
        }
    }

    /// Substitutes values for the listed parameters; unlisted ones stay symbolic.
    pub fn assign(&self, values: &BTreeMap<String, GaussianRational>) -> ParamCoeff {
        let mut out = Self::constant(self.constant.clone());
        for (p, v) in &self.linear {
            match values.get(p) {
                Some(x) => out.constant += &(v * x),
                None => out.add_param(p, v),
            }
        }
        out
    }
}

impl Debug for ParamCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for ParamCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.constant.is_zero() || self.linear.is_empty() {
            parts.push(self.constant.to_string());
        }
        for (p, v) in &self.linear {
            parts.push(format!("{v}*{p}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl From<GaussianRational> for ParamCoeff {
    fn from(g: GaussianRational) -> Self {
        Self::constant(g)
    }
}

impl Coefficient for ParamCoeff {
    type Scalar = GaussianRational;

    fn zero() -> Self {
        Self::default()
    }
    fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.linear.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.constant += &other.constant;
        for (p, v) in &other.linear {
            out.add_param(p, v);
        }
        out
    }
    fn neg(&self) -> Self {
        Self { constant: -&self.constant, linear: self.linear.iter().map(|(p, v)| (p.clone(), -v)).collect() }
    }
    fn try_mul(&self, other: &Self) -> Result<Self, ExteriorError> {
        match (self.is_constant(), other.is_constant()) {
            (_, true) => Ok(self.scale(&other.constant)),
            (true, false) => Ok(other.scale(&self.constant)),
            (false, false) => Err(ExteriorError::AffineOverflow),
        }
    }
    fn scale(&self, s: &GaussianRational) -> Self {
        if s.is_zero() {
            return Self::default();
        }
        Self { constant: &self.constant * s, linear: self.linear.iter().map(|(p, v)| (p.clone(), v * s)).collect() }
    }
    fn from_scalar(s: GaussianRational) -> Self {
        Self::constant(s)
    }
    fn as_scalar(&self) -> Option<GaussianRational> {
        self.is_constant().then(|| self.constant.clone())
    }
    fn conj_in(&self, space: &GeneratorSpace) -> Self {
        let mut out = Self::constant(self.constant.conj());
        for (p, v) in &self.linear {
            out.add_param(space.conj_param(p), &v.conj());
        }
        out
    }
    fn from_gaussian(g: &GaussianRational) -> Self {
        Self::constant(g.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn affine_product_rules() {
        let a = ParamCoeff::param("A");
        let two = ParamCoeff::constant(GaussianRational::from_int(2));
        assert_eq!(a.try_mul(&two).unwrap(), ParamCoeff::param_scaled("A", GaussianRational::from_int(2)));
        assert_eq!(two.try_mul(&a).unwrap(), a.try_mul(&two).unwrap());
        assert_eq!(a.try_mul(&a), Err(ExteriorError::AffineOverflow));
    }

    #[test]
    fn cancellation_removes_entries() {
        let a = ParamCoeff::param("A");
        let z = a.add(&a.neg());
        assert!(z.is_zero());
        assert!(z.linear().is_empty());
    }

    #[test]
    fn assign_values() {
        let c = ParamCoeff::from_parts(GaussianRational::one(), [("x".to_string(), GaussianRational::i())]);
        let mut vals = BTreeMap::new();
        vals.insert("x".to_string(), GaussianRational::from_int(3));
        assert_eq!(c.assign(&vals), ParamCoeff::constant(GaussianRational::from_ints(1, 3)));
    }
}
