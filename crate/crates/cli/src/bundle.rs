//! Operator bundles: a measure space, named matrices, role assignments and
//! parameters, stored as TOML with every rational written as `"p/q"`.
//!
//! ```toml
//! [space]
//! weights = ["1/1", "1/1"]
//!
//! [operators.S]
//! rows = [["1/2", "1/3"], ["1/2", "1/3"]]
//!
//! [roles]
//! S = "S"
//!
//! [params]
//! n0 = 2
//! ```
//!
//! A role missing from `[roles]` falls back to the operator of the same name.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use dominion::{format_rational, parse_rational, MatrixOperator, MeasureSpace, Rational};
use serde::{Deserialize, Serialize};

#[derive(Debug)]
pub struct BundleError {
    pub location: String,
    pub message: String,
}

impl fmt::Display for BundleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.location.is_empty() {
            f.write_str(&self.message)
        } else {
            write!(f, "{}: {}", self.location, self.message)
        }
    }
}

impl std::error::Error for BundleError {}

fn fail(location: impl Into<String>, message: impl fmt::Display) -> BundleError {
    BundleError {
        location: location.into(),
        message: message.to_string(),
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Params {
    pub m: Option<u64>,
    pub k: Option<u64>,
    pub n0: Option<u64>,
    pub epsilon: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorBundle {
    pub weights: Vec<Rational>,
    pub operators: BTreeMap<String, Vec<Vec<Rational>>>,
    pub roles: BTreeMap<String, String>,
    pub params: Params,
}

// On-disk shape; strings stay strings until validated.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBundle {
    space: RawSpace,
    #[serde(default)]
    operators: BTreeMap<String, RawOperator>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    roles: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "RawParams::is_empty")]
    params: RawParams,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpace {
    weights: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOperator {
    rows: Vec<Vec<String>>,
}

#[derive(Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    m: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    n0: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    epsilon: Option<String>,
}

impl RawParams {
    fn is_empty(&self) -> bool {
        self.m.is_none() && self.k.is_none() && self.n0.is_none() && self.epsilon.is_none()
    }
}

fn rational_at(location: String, text: &str) -> Result<Rational, BundleError> {
    parse_rational(text).map_err(|e| fail(location, e))
}

impl OperatorBundle {
    pub fn new(space: &MeasureSpace) -> Self {
        Self {
            weights: space.weights().to_vec(),
            operators: BTreeMap::new(),
            roles: BTreeMap::new(),
            params: Params::default(),
        }
    }

    pub fn with_operator(mut self, name: &str, op: &MatrixOperator) -> Self {
        self.operators.insert(name.to_string(), op.rows());
        self
    }

    pub fn parse(text: &str) -> Result<Self, BundleError> {
        let raw: RawBundle = toml::from_str(text).map_err(|e| fail("", e.to_string().trim_end()))?;
        let weights = raw
            .space
            .weights
            .iter()
            .enumerate()
            .map(|(i, w)| rational_at(format!("space.weights[{i}]"), w))
            .collect::<Result<Vec<_>, _>>()?;
        MeasureSpace::new(weights.clone()).map_err(|e| fail("space.weights", e))?;
        let n = weights.len();

        let mut operators = BTreeMap::new();
        for (name, op) in &raw.operators {
            let here = format!("operators.{name}.rows");
            if op.rows.len() != n {
                return Err(fail(here, format!("{} rows for a space of dimension {n}", op.rows.len())));
            }
            let mut rows = Vec::with_capacity(n);
            for (i, row) in op.rows.iter().enumerate() {
                if row.len() != n {
                    return Err(fail(format!("{here}[{i}]"), format!("{} entries, expected {n}", row.len())));
                }
                let parsed = row
                    .iter()
                    .enumerate()
                    .map(|(j, v)| rational_at(format!("{here}[{i}][{j}]"), v))
                    .collect::<Result<Vec<_>, _>>()?;
                rows.push(parsed);
            }
            operators.insert(name.clone(), rows);
        }
        for (role, target) in &raw.roles {
            if !operators.contains_key(target) {
                return Err(fail(format!("roles.{role}"), format!("no operator named {target:?}")));
            }
        }
        let epsilon = match &raw.params.epsilon {
            Some(e) => Some(rational_at("params.epsilon".into(), e)?),
            None => None,
        };
        Ok(Self {
            weights,
            operators,
            roles: raw.roles,
            params: Params {
                m: raw.params.m,
                k: raw.params.k,
                n0: raw.params.n0,
                epsilon,
            },
        })
    }

    pub fn emit(&self) -> String {
        let strings = |row: &Vec<Rational>| row.iter().map(format_rational).collect();
        let raw = RawBundle {
            space: RawSpace {
                weights: strings(&self.weights),
            },
            operators: self
                .operators
                .iter()
                .map(|(name, rows)| (name.clone(), RawOperator { rows: rows.iter().map(strings).collect() }))
                .collect(),
            roles: self.roles.clone(),
            params: RawParams {
                m: self.params.m,
                k: self.params.k,
                n0: self.params.n0,
                epsilon: self.params.epsilon.as_ref().map(format_rational),
            },
        };
        toml::to_string(&raw).expect("bundles always serialize")
    }

    pub fn load(path: &Path) -> Result<Self, BundleError> {
        let text = std::fs::read_to_string(path).map_err(|e| fail(path.display().to_string(), e))?;
        Self::parse(&text).map_err(|e| BundleError {
            location: if e.location.is_empty() {
                path.display().to_string()
            } else {
                format!("{}: {}", path.display(), e.location)
            },
            message: e.message,
        })
    }

    pub fn space(&self) -> MeasureSpace {
        MeasureSpace::new(self.weights.clone()).expect("validated on parse")
    }

    pub fn role(&self, role: &str) -> Option<MatrixOperator> {
        let name = self.roles.get(role).map(String::as_str).unwrap_or(role);
        let rows = self.operators.get(name)?;
        Some(MatrixOperator::from_rows(&self.space(), rows).expect("validated on parse"))
    }

    pub fn require(&self, role: &str) -> Result<MatrixOperator, BundleError> {
        self.role(role)
            .ok_or_else(|| fail(format!("roles.{role}"), "required role is missing"))
    }

    /// `Z` defaults to the identity.
    pub fn z_or_identity(&self) -> MatrixOperator {
        self.role("Z").unwrap_or_else(|| MatrixOperator::identity(&self.space()))
    }
}
