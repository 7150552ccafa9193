//! Experiment configuration: TOML schema, validation, and construction of
//! groups, generator sets and varieties from it.

use std::collections::HashSet;

use growthlab::escape::prime_power;
use growthlab::field::Field;
use growthlab::varieties::{
    conjugacy_class_variety, diagonal_torus, hyperplane, nonregular_locus, point_variety, whole_group, VarietySpec,
};
use growthlab::{make_field, make_group, Embedding, Error, Family, GenSet, GroupSpec, Matrix};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub group: GroupConfig,
    #[serde(default)]
    pub generators: GeneratorConfig,
    #[serde(default)]
    pub budgets: Budgets,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_output")]
    pub output: String,
    #[serde(default)]
    pub varieties: Vec<VarietyConfig>,
    #[serde(default)]
    pub experiments: Vec<Experiment>,
}

fn default_output() -> String {
    "reports".into()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupConfig {
    pub family: String,
    pub rank: u32,
    pub q: u64,
    #[serde(default = "default_embedding")]
    pub embedding: String,
}

fn default_embedding() -> String {
    "usual".into()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorConfig {
    /// "standard", "symmetric" or "whole"; ignored when `matrices` is given.
    #[serde(default = "default_preset")]
    pub preset: String,
    /// Row-major entries; the identity is added if missing.
    #[serde(default)]
    pub matrices: Vec<Vec<i64>>,
}

fn default_preset() -> String {
    "standard".into()
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig { preset: default_preset(), matrices: Vec::new() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Budgets {
    #[serde(default = "default_max_order")]
    pub max_order: u64,
    #[serde(default = "default_max_radius")]
    pub max_radius: u32,
    #[serde(default = "default_wall_clock")]
    pub wall_clock_secs: u64,
    #[serde(default = "default_threads")]
    pub threads: usize,
}

fn default_max_order() -> u64 {
    2_000_000
}
fn default_max_radius() -> u32 {
    1000
}
fn default_wall_clock() -> u64 {
    3600
}
fn default_threads() -> usize {
    1
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            max_order: default_max_order(),
            max_radius: default_max_radius(),
            wall_clock_secs: default_wall_clock(),
            threads: default_threads(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VarietyKind {
    Torus,
    Nonregular,
    Group,
    Class { element: Vec<i64> },
    Point { element: Vec<i64> },
    Hyperplane { coeffs: Vec<i64>, constant: i64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VarietyConfig {
    pub name: String,
    #[serde(flatten)]
    pub kind: VarietyKind,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Experiment {
    Census {
        #[serde(default)]
        varieties: Vec<String>,
    },
    Escape {
        /// Named varieties; when empty, sampled instances are used.
        #[serde(default)]
        varieties: Vec<String>,
        #[serde(default = "default_instances")]
        instances: usize,
    },
    Growth {
        #[serde(default)]
        varieties: Vec<String>,
        radius: Option<u32>,
        /// m for the growth certificate
        certificate_m: Option<u32>,
    },
    Diameter,
    Concentration {
        variety: String,
        radius: Option<u32>,
    },
    NpCheck,
    InvolvedTori {
        #[serde(default = "default_ks")]
        k: Vec<u32>,
        #[serde(default = "default_m")]
        m: u32,
        #[serde(default = "default_fibres")]
        fibre_samples: usize,
    },
    Ledger {
        #[serde(default)]
        varieties: Vec<String>,
    },
}

fn default_instances() -> usize {
    100
}
fn default_ks() -> Vec<u32> {
    vec![1, 2, 3, 4]
}
fn default_m() -> u32 {
    1
}
fn default_fibres() -> usize {
    3
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::Census { .. } => "census",
            Experiment::Escape { .. } => "escape",
            Experiment::Growth { .. } => "growth",
            Experiment::Diameter => "diameter",
            Experiment::Concentration { .. } => "concentration",
            Experiment::NpCheck => "np_check",
            Experiment::InvolvedTori { .. } => "involved_tori",
            Experiment::Ledger { .. } => "ledger",
        }
    }

    fn referenced(&self) -> Vec<&String> {
        match self {
            Experiment::Census { varieties }
            | Experiment::Escape { varieties, .. }
            | Experiment::Growth { varieties, .. }
            | Experiment::Ledger { varieties } => varieties.iter().collect(),
            Experiment::Concentration { variety, .. } => vec![variety],
            _ => Vec::new(),
        }
    }
}

/// A violated invariant, located by a dotted path into the config.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub path: String,
    pub message: String,
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

fn diag(path: impl Into<String>, message: impl Into<String>) -> Diagnostic {
    Diagnostic { path: path.into(), message: message.into() }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<ExperimentConfig, Diagnostic> {
        toml::from_str(text).map_err(|e| diag("<config>", e.message().to_string()))
    }

    pub fn field(&self) -> Result<Field, Error> {
        let (p, k) = prime_power(self.group.q).ok_or(Error::NonPrimeCharacteristic(self.group.q))?;
        make_field(p, k)
    }

    pub fn spec(&self) -> Result<GroupSpec, Error> {
        let family: Family = self.group.family.parse()?;
        let embedding: Embedding = self.group.embedding.parse()?;
        make_group(family, self.group.rank, &self.field()?, embedding)
    }

    pub fn generators(&self, spec: &GroupSpec) -> Result<GenSet, Error> {
        let f = &spec.field;
        if !self.generators.matrices.is_empty() {
            let mats = self
                .generators
                .matrices
                .iter()
                .map(|v| matrix_from(f, spec.n, v))
                .collect::<Result<Vec<_>, _>>()?;
            return Ok(GenSet::new(spec, mats, "explicit")?.with_identity());
        }
        match self.generators.preset.as_str() {
            "standard" => spec.standard_generators(),
            "symmetric" => Ok(spec.standard_generators()?.symmetrized(f)),
            "whole" => {
                let all = growthlab::enumerate::enumerate_group(
                    spec,
                    growthlab::enumerate::EnumMethod::BfsClosure,
                    self.budgets.max_order as usize,
                )?;
                Ok(GenSet::from_trusted(all, "whole group"))
            }
            other => Err(Error::Parse(format!("unknown generator preset '{other}'"))),
        }
    }

    pub fn variety(&self, spec: &GroupSpec, name: &str) -> Result<VarietySpec, Error> {
        let v = self
            .varieties
            .iter()
            .find(|v| v.name == name)
            .ok_or_else(|| Error::Parse(format!("undeclared variety '{name}'")))?;
        let f = &spec.field;
        let mut out = match &v.kind {
            VarietyKind::Torus => diagonal_torus(spec),
            VarietyKind::Nonregular => nonregular_locus(spec),
            VarietyKind::Group => whole_group(spec),
            VarietyKind::Class { element } => conjugacy_class_variety(spec, &matrix_from(f, spec.n, element)?)?,
            VarietyKind::Point { element } => point_variety(f, &matrix_from(f, spec.n, element)?),
            VarietyKind::Hyperplane { coeffs, constant } => {
                let c: Vec<_> = coeffs.iter().map(|&x| f.from_int(x)).collect();
                hyperplane(f, spec.n, &c, f.from_int(*constant))?
            }
        };
        out.label = v.name.clone();
        Ok(out)
    }

    /// Every violated invariant; empty means the config is runnable.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let g = &self.group;
        let family = g.family.parse::<Family>();
        if family.is_err() {
            out.push(diag("group.family", format!("unknown family '{}'; expected one of SL, Sp, SO_odd, SO_even_plus, SU_twisted", g.family)));
        }
        if g.embedding.parse::<Embedding>().is_err() {
            out.push(diag("group.embedding", format!("unknown embedding '{}'; expected usual or block", g.embedding)));
        }
        if prime_power(g.q).is_none() {
            out.push(diag("group.q", format!("q = {} is not a prime power", g.q)));
        }
        if out.is_empty() {
            match self.spec() {
                Ok(_) => {}
                Err(Error::RankTooSmall { family, rank, min }) => {
                    out.push(diag("group.rank", format!("{family} is defined for rank r >= {min}; got r = {rank}")))
                }
                Err(Error::CharacteristicTwoOrthogonal) => out.push(diag(
                    "group.q",
                    format!("{} requires odd characteristic (p != 2); q = {} is even", g.family, g.q),
                )),
                Err(e) => out.push(diag("group", e.to_string())),
            }
        }
        if !self.generators.matrices.is_empty() {
            let n = self.spec().map(|s| s.n).ok();
            for (i, m) in self.generators.matrices.iter().enumerate() {
                if let Some(n) = n {
                    if m.len() != n * n {
                        out.push(diag(format!("generators.matrices[{i}]"), format!("expected {} entries, got {}", n * n, m.len())));
                    }
                }
            }
        } else if !["standard", "symmetric", "whole"].contains(&self.generators.preset.as_str()) {
            out.push(diag("generators.preset", format!("unknown preset '{}'", self.generators.preset)));
        }
        let b = &self.budgets;
        for (name, v) in [
            ("max_order", b.max_order),
            ("max_radius", b.max_radius as u64),
            ("wall_clock_secs", b.wall_clock_secs),
            ("threads", b.threads as u64),
        ] {
            if v == 0 {
                out.push(diag(format!("budgets.{name}"), "must be positive"));
            }
        }
        let mut names = HashSet::new();
        for (i, v) in self.varieties.iter().enumerate() {
            if !names.insert(v.name.as_str()) {
                out.push(diag(format!("varieties[{i}].name"), format!("duplicate variety '{}'", v.name)));
            }
        }
        if self.experiments.is_empty() {
            out.push(diag("experiments", "no experiments declared"));
        }
        for (i, e) in self.experiments.iter().enumerate() {
            for r in e.referenced() {
                if !names.contains(r.as_str()) {
                    out.push(diag(format!("experiments[{i}].varieties"), format!("references undeclared variety '{r}'")));
                }
            }
            if let Experiment::Escape { instances: 0, .. } = e {
                out.push(diag(format!("experiments[{i}].instances"), "must be positive"));
            }
        }
        out
    }
}

pub fn matrix_from(f: &Field, n: usize, v: &[i64]) -> Result<Matrix, Error> {
    let q = f.q() as i64;
    if v.iter().all(|&x| (0..q).contains(&x)) {
        let codes: Vec<u32> = v.iter().map(|&x| x as u32).collect();
        Matrix::from_codes(f, n, &codes)
    } else if f.is_prime_field() {
        Matrix::from_ints(f, n, v)
    } else {
        Err(Error::Parse(format!("entries over F_{q} must be element codes in 0..{q}")))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Catalog {
    pub families: Vec<FamilyEntry>,
    pub embeddings: Vec<&'static str>,
    pub generator_presets: Vec<&'static str>,
    pub varieties: Vec<&'static str>,
    pub experiments: Vec<&'static str>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyEntry {
    pub name: &'static str,
    pub min_rank: u32,
    pub odd_characteristic_only: bool,
}

pub fn list_presets() -> Catalog {
    Catalog {
        families: Family::ALL
            .iter()
            .map(|f| FamilyEntry { name: f.name(), min_rank: f.min_rank(), odd_characteristic_only: f.is_orthogonal() })
            .collect(),
        embeddings: vec!["usual", "block"],
        generator_presets: vec!["standard", "symmetric", "whole"],
        varieties: vec!["torus", "nonregular", "group", "class", "point", "hyperplane"],
        experiments: vec!["census", "escape", "growth", "diameter", "concentration", "np_check", "involved_tori", "ledger"],
    }
}
