use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use super::ExteriorError;

/// Named 1-form generators with a conjugation pairing.
///
/// A self-paired generator is real. Parameter symbols appearing in
/// coefficients are real unless `param_conj` pairs them with another symbol.
#[derive(Clone, Debug)]
pub struct GeneratorSpace {
    names: Vec<String>,
    conj: Vec<usize>,
    independence: Vec<bool>,
    param_conj: BTreeMap<String, String>,
    index: HashMap<String, usize>,
}

impl PartialEq for GeneratorSpace {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names
            && self.conj == other.conj
            && self.independence == other.independence
            && self.param_conj == other.param_conj
    }
}

impl Eq for GeneratorSpace {}

/// One generator as supplied to [`GeneratorSpace::new`]: its name, the name
/// of its conjugate, and whether it is an independence form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub name: String,
    pub conj: String,
    pub independence: bool,
}

impl GeneratorSpec {
    pub fn real(name: &str, independence: bool) -> Self {
        Self { name: name.into(), conj: name.into(), independence }
    }

    pub fn pair(name: &str, conj: &str, independence: bool) -> [Self; 2] {
        [
            Self { name: name.into(), conj: conj.into(), independence },
            Self { name: conj.into(), conj: name.into(), independence },
        ]
    }
}

impl GeneratorSpace {
    pub fn new(specs: Vec<GeneratorSpec>, param_conj: BTreeMap<String, String>) -> Result<Arc<Self>, ExteriorError> {
        let mut index = HashMap::new();
        for (i, s) in specs.iter().enumerate() {
            if index.insert(s.name.clone(), i).is_some() {
                return Err(ExteriorError::InvalidSpace(format!("duplicate generator {}", s.name)));
            }
        }
        let mut conj = Vec::with_capacity(specs.len());
        for s in &specs {
            let j = *index.get(&s.conj).ok_or_else(|| {
                ExteriorError::InvalidSpace(format!("conjugate {} of {} is not a generator", s.conj, s.name))
            })?;
            conj.push(j);
        }
        for (i, &j) in conj.iter().enumerate() {
            if conj[j] != i {
                return Err(ExteriorError::InvalidSpace(format!(
                    "conjugation is not an involution at {}",
                    specs[i].name
                )));
            }
            if specs[i].independence != specs[j].independence {
                return Err(ExteriorError::InvalidSpace(format!(
                    "independence set not closed under conjugation at {}",
                    specs[i].name
                )));
            }
        }
        for (p, q) in &param_conj {
            match param_conj.get(q) {
                Some(back) if back == p => {}
                None if p == q => {}
                _ => {
                    return Err(ExteriorError::InvalidSpace(format!(
                        "parameter conjugation is not an involution at {p}"
                    )))
                }
            }
        }
        Ok(Arc::new(Self {
            names: specs.iter().map(|s| s.name.clone()).collect(),
            independence: specs.iter().map(|s| s.independence).collect(),
            conj,
            param_conj,
            index,
        }))
    }

    /// `dx1, ..., dx{n}`, all real and all independence forms.
    pub fn standard_real(n: usize) -> Arc<Self> {
        let specs = (1..=n).map(|i| GeneratorSpec::real(&format!("dx{i}"), true)).collect();
        Self::new(specs, BTreeMap::new()).expect("standard space is valid")
    }

    /// `dz1..dz{m}, dzbar1..dzbar{m}` with the obvious pairing.
    pub fn standard_complex(m: usize) -> Arc<Self> {
        let mut specs: Vec<GeneratorSpec> = (1..=m)
            .map(|i| GeneratorSpec { name: format!("dz{i}"), conj: format!("dzbar{i}"), independence: true })
            .collect();
        specs.extend((1..=m).map(|i| GeneratorSpec {
            name: format!("dzbar{i}"),
            conj: format!("dz{i}"),
            independence: true,
        }));
        Self::new(specs, BTreeMap::new()).expect("standard space is valid")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Result<usize, ExteriorError> {
        self.index.get(name).copied().ok_or_else(|| ExteriorError::UnknownGenerator(name.to_string()))
    }

    pub fn conj_index(&self, i: usize) -> usize {
        self.conj[i]
    }

    pub fn is_real(&self, i: usize) -> bool {
        self.conj[i] == i
    }

    pub fn is_independence(&self, i: usize) -> bool {
        self.independence[i]
    }

    pub fn independence_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.independence[i]).collect()
    }

    pub fn conj_param<'a>(&'a self, p: &'a str) -> &'a str {
        self.param_conj.get(p).map(String::as_str).unwrap_or(p)
    }

    pub fn param_conj_table(&self) -> &BTreeMap<String, String> {
        &self.param_conj
    }

    pub fn specs(&self) -> Vec<GeneratorSpec> {
        (0..self.len())
            .map(|i| GeneratorSpec {
                name: self.names[i].clone(),
                conj: self.names[self.conj[i]].clone(),
                independence: self.independence[i],
            })
            .collect()
    }

    /// `dz1..dzm, dzbar1..dzbarm` as built by [`GeneratorSpace::standard_complex`].
    pub fn is_standard_complex(&self, m: usize) -> bool {
        self.len() == 2 * m
            && (0..m).all(|i| {
                self.names[i] == format!("dz{}", i + 1)
                    && self.names[m + i] == format!("dzbar{}", i + 1)
                    && self.conj[i] == m + i
            })
    }

    /// The standard real space `dx1..dx{n}` is recognised by name and
    /// pairing, so spaces built independently still qualify.
    pub fn is_standard_real(&self, n: usize) -> bool {
        self.len() == n && (0..n).all(|i| self.names[i] == format!("dx{}", i + 1) && self.conj[i] == i)
    }
}
