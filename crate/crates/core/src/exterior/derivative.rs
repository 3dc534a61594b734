use std::collections::BTreeMap;
use std::sync::Arc;

use super::{Coefficient, ExteriorError, Form, GeneratorSpace};

/// Exterior derivative determined by the differentials of the generators,
/// with constant coefficients (as on a Lie algebra or at a point).
#[derive(Clone, Debug)]
pub struct StructureEquations<C: Coefficient> {
    space: Arc<GeneratorSpace>,
    d: BTreeMap<usize, Form<C>>,
}

impl<C: Coefficient> StructureEquations<C> {
    pub fn new(space: &Arc<GeneratorSpace>) -> Self {
        Self { space: space.clone(), d: BTreeMap::new() }
    }

    pub fn set(&mut self, generator: usize, dg: Form<C>) {
        self.d.insert(generator, dg);
    }

    pub fn get(&self, generator: usize) -> Option<&Form<C>> {
        self.d.get(&generator)
    }

    pub fn space(&self) -> &Arc<GeneratorSpace> {
        &self.space
    }

    /// Leibniz rule: `d(g₁∧…∧gₖ) = Σ (−1)^{i−1} g₁∧…∧dgᵢ∧…∧gₖ`.
    pub fn d(&self, f: &Form<C>) -> Result<Form<C>, ExteriorError> {
        let mut out = Form::zero(&self.space);
        for (m, c) in f.terms() {
            for pos in 0..m.len() {
                let dg = self
                    .d
                    .get(&m[pos])
                    .ok_or_else(|| ExteriorError::MissingDifferential(self.space.name(m[pos]).to_string()))?;
                let mut acc = Form::scalar(&self.space, c.clone());
                for &g in &m[..pos] {
                    acc = acc.wedge(&Form::generator_at(&self.space, g))?;
                }
                acc = acc.wedge(dg)?;
                for &g in &m[pos + 1..] {
                    acc = acc.wedge(&Form::generator_at(&self.space, g))?;
                }
                if pos % 2 == 1 {
                    acc = -acc;
                }
                out = out.try_add(&acc)?;
            }
        }
        Ok(out)
    }

    /// Generators whose `d(dg)` fails to vanish.
    pub fn d_squared_failures(&self) -> Result<Vec<String>, ExteriorError> {
        let mut bad = Vec::new();
        for (g, dg) in &self.d {
            if !self.d(dg)?.is_zero() {
                bad.push(self.space.name(*g).to_string());
            }
        }
        Ok(bad)
    }
}
