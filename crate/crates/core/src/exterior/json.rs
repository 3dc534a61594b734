//! JSON exchange format for parameter-affine forms.
//!
//! ```json
//! {"generators":[{"name":"w1","conj":"w1bar","independence":true}, ...],
//!  "terms":[{"indices":[0,3],"coeff":{"re":"1/2","im":"0","params":{"A":{"re":"1","im":"0"}}}}],
//!  "param_conj":{"A":"Abar","Abar":"A"}}
//! ```
//!
//! `param_conj` may be omitted, in which case every parameter is real.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{ExteriorError, Form, GeneratorSpace, GeneratorSpec, ParamCoeff};
use crate::scalar::{format_rational, parse_rational, GaussianRational};

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct GeneratorJson {
    pub name: String,
    pub conj: String,
    pub independence: bool,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct CoeffJson {
    pub re: String,
    pub im: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, GaussianRational>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct TermJson {
    pub indices: Vec<usize>,
    pub coeff: CoeffJson,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct FormJson {
    pub generators: Vec<GeneratorJson>,
    pub terms: Vec<TermJson>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub param_conj: BTreeMap<String, String>,
}

impl FormJson {
    pub fn from_form(f: &Form<ParamCoeff>) -> Self {
        let space = f.space();
        FormJson {
            generators: space
                .specs()
                .into_iter()
                .map(|s| GeneratorJson { name: s.name, conj: s.conj, independence: s.independence })
                .collect(),
            terms: f
                .terms()
                .iter()
                .map(|(m, c)| TermJson {
                    indices: m.clone(),
                    coeff: CoeffJson {
                        re: format_rational(&c.constant.re),
                        im: format_rational(&c.constant.im),
                        params: c.linear().clone(),
                    },
                })
                .collect(),
            param_conj: space.param_conj_table().clone(),
        }
    }

    pub fn space(&self) -> Result<Arc<GeneratorSpace>, ExteriorError> {
        GeneratorSpace::new(
            self.generators
                .iter()
                .map(|g| GeneratorSpec { name: g.name.clone(), conj: g.conj.clone(), independence: g.independence })
                .collect(),
            self.param_conj.clone(),
        )
    }

    /// Builds the form on a freshly constructed space.
    pub fn to_form(&self) -> Result<Form<ParamCoeff>, ExteriorError> {
        let space = self.space()?;
        self.to_form_on(&space)
    }

    /// Builds the form on an existing space, which must match the declared generators.
    pub fn to_form_on(&self, space: &Arc<GeneratorSpace>) -> Result<Form<ParamCoeff>, ExteriorError> {
        if **space != *self.space()? {
            return Err(ExteriorError::SpaceMismatch);
        }
        let mut terms = Vec::new();
        for t in &self.terms {
            if t.indices.iter().any(|&i| i >= space.len()) {
                return Err(ExteriorError::Json(format!("index out of range in {:?}", t.indices)));
            }
            let parse = |s: &str| parse_rational(s).map_err(|e| ExteriorError::Json(e.to_string()));
            let constant = GaussianRational::new(parse(&t.coeff.re)?, parse(&t.coeff.im)?);
            let coeff = ParamCoeff::from_parts(constant, t.coeff.params.clone());
            terms.push((t.indices.clone(), coeff));
        }
        Ok(Form::from_terms(space, terms))
    }
}

pub fn form_to_json(f: &Form<ParamCoeff>) -> String {
    serde_json::to_string(&FormJson::from_form(f)).expect("form JSON is always serialisable")
}

pub fn form_from_json(s: &str) -> Result<Form<ParamCoeff>, ExteriorError> {
    let parsed: FormJson = serde_json::from_str(s).map_err(|e| ExteriorError::Json(e.to_string()))?;
    parsed.to_form()
}
