//! JSON input files and their conversion into engine values.
//!
//! Expressions inside the files are strings in the polynomial grammar;
//! discrepancies and integers may also be given as JSON numbers.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use charclass::k0::{Atom, AtomTable, K0Class, RelativeClass, StratifiedMap, StratifiedSpace, Stratum, TowerDatum};
use charclass::ring::parse::parse_poly;
use charclass::stringy::{Component, Flavor, ResolutionDatum};
use charclass::Rational;
use num_bigint::BigInt;
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::error::CliError;

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    serde_json::from_str(&text).map_err(|source| CliError::Json { path: path.to_path_buf(), source })
}

/// A number written either as a JSON number or as a string such as `"1/2"`.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Int(i64),
    Text(String),
}

impl Scalar {
    pub fn rational(&self) -> Result<Rational, CliError> {
        match self {
            Scalar::Int(n) => Ok(Rational::from_integer((*n).into())),
            Scalar::Text(s) => parse_poly(s)?
                .as_constant()
                .ok_or_else(|| CliError::Schema(format!("`{s}` is not a number"))),
        }
    }

    pub fn integer(&self) -> Result<BigInt, CliError> {
        let q = self.rational()?;
        if !q.is_integer() {
            return Err(CliError::Schema(format!("{q} is not an integer")));
        }
        Ok(q.to_integer())
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomSpec {
    pub name: String,
    pub dim: u32,
    #[serde(rename = "E")]
    pub e: String,
}

pub fn atom_table(specs: &[AtomSpec]) -> Result<AtomTable, CliError> {
    let mut table = AtomTable::new();
    for a in specs {
        table.insert(Atom::new(&a.name, a.dim, parse_poly(&a.e)?)?)?;
    }
    Ok(table)
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomFile {
    #[serde(default)]
    pub atoms: Vec<AtomSpec>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FlavorSpec {
    Stringy,
    Arc,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentSpec {
    pub name: String,
    pub a: Scalar,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StratumSpec {
    pub subset: Vec<String>,
    pub class: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatumFile {
    pub flavor: FlavorSpec,
    #[serde(default = "one")]
    pub index_r: u32,
    pub components: Vec<ComponentSpec>,
    pub strata: Vec<StratumSpec>,
    #[serde(default)]
    pub atoms: Vec<AtomSpec>,
}

fn one() -> u32 {
    1
}

impl DatumFile {
    pub fn build(&self) -> Result<ResolutionDatum, CliError> {
        let atoms = atom_table(&self.atoms)?;
        let components = self
            .components
            .iter()
            .map(|c| Ok(Component::new(&c.name, c.a.rational()?)))
            .collect::<Result<Vec<_>, CliError>>()?;
        let strata = self
            .strata
            .iter()
            .map(|s| Ok((s.subset.clone(), atoms.parse_class(&s.class)?)))
            .collect::<Result<Vec<_>, CliError>>()?;
        let flavor = match self.flavor {
            FlavorSpec::Stringy => Flavor::Stringy,
            FlavorSpec::Arc => Flavor::Arc,
        };
        Ok(ResolutionDatum::new(flavor, self.index_r, components, strata, atoms)?)
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlowupFile {
    #[serde(default)]
    pub atoms: Vec<AtomSpec>,
    pub x: String,
    pub center: String,
    pub blowup: String,
    pub exceptional: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TowerFile {
    #[serde(default)]
    pub atoms: Vec<AtomSpec>,
    #[serde(default = "one")]
    pub base_level: u32,
    #[serde(default)]
    pub euler: Option<Vec<Scalar>>,
    #[serde(default)]
    pub classes: Option<Vec<String>>,
    /// The last fiber datum repeats at every later level.
    #[serde(default)]
    pub repeat_last: bool,
    pub level: u32,
    /// Euler characteristic (or class) of the set at `level`.
    pub value: Scalar,
}

pub enum TowerInput {
    Euler(TowerDatum, BigInt),
    Classes(TowerDatum, K0Class),
}

impl TowerFile {
    pub fn build(&self) -> Result<TowerInput, CliError> {
        let atoms = atom_table(&self.atoms)?;
        match (&self.euler, &self.classes) {
            (Some(e), None) => {
                let e = e.iter().map(Scalar::integer).collect::<Result<Vec<_>, _>>()?;
                let tower = match (self.repeat_last, e.as_slice()) {
                    (true, [single]) => TowerDatum::constant_euler(self.base_level, single.clone())?,
                    (true, _) => return Err(CliError::Schema("repeat_last needs exactly one fiber datum".into())),
                    (false, _) => TowerDatum::euler(self.base_level, e)?,
                };
                Ok(TowerInput::Euler(tower, self.value.integer()?))
            }
            (None, Some(c)) => {
                let c = c.iter().map(|s| atoms.parse_class(s)).collect::<Result<Vec<_>, _>>()?;
                let tower = match (self.repeat_last, c.as_slice()) {
                    (true, [single]) => TowerDatum::constant_class(self.base_level, single.clone()),
                    (true, _) => return Err(CliError::Schema("repeat_last needs exactly one fiber datum".into())),
                    (false, _) => TowerDatum::classes(self.base_level, c),
                };
                let value = match &self.value {
                    Scalar::Text(s) => atoms.parse_class(s)?,
                    Scalar::Int(n) => K0Class::int(*n),
                };
                Ok(TowerInput::Classes(tower, value))
            }
            _ => Err(CliError::Schema("a tower needs exactly one of `euler` and `classes`".into())),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedStratum {
    pub name: String,
    pub class: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceSpec {
    pub name: String,
    pub strata: Vec<NamedStratum>,
    /// Pairs `[a, b]` meaning stratum `a` lies in the closure of `b`.
    #[serde(default)]
    pub closure: Vec<(String, String)>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssignSpec {
    pub from: String,
    pub to: String,
    pub fiber: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    pub source: String,
    pub target: String,
    pub assign: Vec<AssignSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionSpec {
    pub values: BTreeMap<String, Scalar>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelativeSpec {
    pub fibers: BTreeMap<String, String>,
}

/// A chain of maps `X_0 -> X_1 -> ... -> X_k` and data on `X_0`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PushforwardFile {
    #[serde(default)]
    pub atoms: Vec<AtomSpec>,
    pub spaces: Vec<SpaceSpec>,
    pub maps: Vec<MapSpec>,
    #[serde(default)]
    pub function: Option<FunctionSpec>,
    #[serde(default)]
    pub relative: Option<RelativeSpec>,
}

pub struct PushforwardInput {
    pub atoms: AtomTable,
    pub maps: Vec<StratifiedMap>,
    pub function: Option<charclass::k0::ConstructibleFunction>,
    pub relative: Option<RelativeClass>,
}

impl PushforwardFile {
    pub fn build(&self) -> Result<PushforwardInput, CliError> {
        let atoms = atom_table(&self.atoms)?;
        let mut spaces: BTreeMap<&str, Arc<StratifiedSpace>> = BTreeMap::new();
        for s in &self.spaces {
            let strata = s
                .strata
                .iter()
                .map(|t| Ok(Stratum::new(&t.name, atoms.parse_class(&t.class)?)))
                .collect::<Result<Vec<_>, CliError>>()?;
            let closure: Vec<(&str, &str)> = s.closure.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
            let space = StratifiedSpace::new(strata, &closure)?;
            if spaces.insert(&s.name, Arc::new(space)).is_some() {
                return Err(CliError::Schema(format!("space `{}` defined twice", s.name)));
            }
        }
        let lookup = |name: &str| {
            spaces.get(name).cloned().ok_or_else(|| CliError::Schema(format!("unknown space `{name}`")))
        };
        if self.maps.is_empty() {
            return Err(CliError::Schema("at least one map is required".into()));
        }
        let mut maps = Vec::new();
        for m in &self.maps {
            let assignment = m
                .assign
                .iter()
                .map(|a| Ok((a.from.as_str(), a.to.as_str(), atoms.parse_class(&a.fiber)?)))
                .collect::<Result<Vec<_>, CliError>>()?;
            maps.push(StratifiedMap::new(lookup(&m.source)?, lookup(&m.target)?, &assignment)?);
        }
        let base = maps[0].source().clone();
        let per_stratum = |values: &BTreeMap<String, Scalar>, what: &str| -> Result<Vec<String>, CliError> {
            for name in values.keys() {
                base.index_of(name)?;
            }
            base.strata()
                .iter()
                .map(|s| {
                    values.get(&s.name).map(|_| s.name.clone()).ok_or_else(|| {
                        CliError::Schema(format!("{what} has no entry for stratum `{}`", s.name))
                    })
                })
                .collect()
        };
        let function = match &self.function {
            Some(f) => {
                let names = per_stratum(&f.values, "function")?;
                let values = names.iter().map(|n| f.values[n].integer()).collect::<Result<Vec<_>, _>>()?;
                Some(charclass::k0::ConstructibleFunction::new(base.clone(), values)?)
            }
            None => None,
        };
        let relative = match &self.relative {
            Some(r) => {
                let as_scalars: BTreeMap<String, Scalar> =
                    r.fibers.iter().map(|(k, v)| (k.clone(), Scalar::Text(v.clone()))).collect();
                let names = per_stratum(&as_scalars, "relative class")?;
                let fibers = names.iter().map(|n| atoms.parse_class(&r.fibers[n])).collect::<Result<Vec<_>, _>>()?;
                Some(RelativeClass::new(base.clone(), fibers)?)
            }
            None => None,
        };
        if function.is_none() && relative.is_none() {
            return Err(CliError::Schema("give a `function` or a `relative` class to push forward".into()));
        }
        Ok(PushforwardInput { atoms, maps, function, relative })
    }
}
