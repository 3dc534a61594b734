//! The field `Q(i)(√2)`: numbers `a + b·√2` with Gaussian rational `a`, `b`.

use std::cmp::Ordering;
use std::fmt;

use num::Zero;

use crate::exterior::{Coefficient, ExteriorError, GeneratorSpace};
use crate::linalg::Field;
use crate::scalar::{int, GaussianRational};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Surd {
    pub a: GaussianRational,
    pub b: GaussianRational,
}

impl Surd {
    pub fn new(a: GaussianRational, b: GaussianRational) -> Self {
        Self { a, b }
    }

    pub fn sqrt2() -> Self {
        Self::new(GaussianRational::zero(), GaussianRational::one())
    }

    /// `1/√2 = √2/2`.
    pub fn inv_sqrt2() -> Self {
        Self::new(GaussianRational::zero(), GaussianRational::from_ratio(1, 2))
    }

    pub fn is_real(&self) -> bool {
        self.a.is_real() && self.b.is_real()
    }

    /// The Gaussian rational value when the `√2` part vanishes.
    pub fn as_gaussian(&self) -> Option<GaussianRational> {
        self.b.is_zero().then(|| self.a.clone())
    }

    /// Sign of a real surd, decided exactly.
    pub fn real_sign(&self) -> Option<Ordering> {
        if !self.is_real() {
            return None;
        }
        let (a, b) = (&self.a.re, &self.b.re);
        let sa = a.cmp(&Zero::zero());
        let sb = b.cmp(&Zero::zero());
        Some(match (sa, sb) {
            (x, Ordering::Equal) => x,
            (Ordering::Equal, y) => y,
            (x, y) if x == y => x,
            (x, _) => {
                // a and b·√2 have opposite signs: compare a² with 2b².
                let lhs = a * a;
                let rhs = b * b * int(2);
                match lhs.cmp(&rhs) {
                    Ordering::Greater => x,
                    Ordering::Less => x.reverse(),
                    Ordering::Equal => Ordering::Equal,
                }
            }
        })
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        let (ar, ai) = self.a.to_f64_pair();
        let (br, bi) = self.b.to_f64_pair();
        let r2 = std::f64::consts::SQRT_2;
        (ar + br * r2, ai + bi * r2)
    }
}

impl From<GaussianRational> for Surd {
    fn from(a: GaussianRational) -> Self {
        Self::new(a, GaussianRational::zero())
    }
}

impl fmt::Debug for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "{}*sqrt2", self.b),
            (false, false) => write!(f, "({} + {}*sqrt2)", self.a, self.b),
        }
    }
}

impl Field for Surd {
    fn zero() -> Self {
        Self::default()
    }
    fn one() -> Self {
        GaussianRational::one().into()
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        Self::new(&self.a + &o.a, &self.b + &o.b)
    }
    fn sub(&self, o: &Self) -> Self {
        Self::new(&self.a - &o.a, &self.b - &o.b)
    }
    fn mul(&self, o: &Self) -> Self {
        let two = GaussianRational::from_int(2);
        Self::new(&self.a * &o.a + &two * &(&self.b * &o.b), &self.a * &o.b + &self.b * &o.a)
    }
    fn neg(&self) -> Self {
        Self::new(-&self.a, -&self.b)
    }
    fn inv(&self) -> Option<Self> {
        // (a + b√2)(a − b√2) = a² − 2b², nonzero since √2 is irrational
        // over Q(i).
        if Field::is_zero(self) {
            return None;
        }
        let n = &self.a * &self.a - GaussianRational::from_int(2) * (&self.b * &self.b);
        let ninv = n.inv()?;
        Some(Self::new(&self.a * &ninv, -(&self.b * &ninv)))
    }
    fn conj(&self) -> Self {
        Self::new(self.a.conj(), self.b.conj())
    }
}

impl Coefficient for Surd {
    type Scalar = Surd;

    fn zero() -> Self {
        Self::default()
    }
    fn is_zero(&self) -> bool {
        Field::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        Field::add(self, other)
    }
    fn neg(&self) -> Self {
        Field::neg(self)
    }
    fn try_mul(&self, other: &Self) -> Result<Self, ExteriorError> {
        Ok(Field::mul(self, other))
    }
    fn scale(&self, s: &Self) -> Self {
        Field::mul(self, s)
    }
    fn from_scalar(s: Self) -> Self {
        s
    }
    fn as_scalar(&self) -> Option<Self> {
        Some(self.clone())
    }
    fn conj_in(&self, _: &GeneratorSpace) -> Self {
        Field::conj(self)
    }
    fn from_gaussian(g: &GaussianRational) -> Self {
        g.clone().into()
    }
}
