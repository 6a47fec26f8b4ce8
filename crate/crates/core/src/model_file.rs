//! JSON model files.
//!
//! ```json
//! {
//!   "name": "example",
//!   "convention": "columns-are-images",
//!   "triform": [2, 6, 8, 2],
//!   "c2form": [44, 56],
//!   "tau1": [1, 6, 0, -1],
//!   "tau2": [-1, 0, 8, 1]
//! }
//! ```
//!
//! Matrices are row-major; column `j` holds the image of `H_j`. A model
//! gives either `tau1` and `tau2` or a single `sigma`. Optional fields:
//! `nef` (two generators, default `H1`, `H2`), `ci` (ambient factor
//! dimensions and multidegrees of a complete intersection), `ideal` (ideal
//! files, relative to the model file), and `provenance` (free-form notes
//! keyed by field name).

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::chow::CIData;
use crate::cone_dynamics::{C2Form, CYModel, ConeError, Generators, IntegralClass, LatticeMap, TriForm};
use crate::hilbert_oracle::{IdealFileError, IdealSpec};

pub const CONVENTION: &str = "columns-are-images";

#[derive(Debug, Error)]
pub enum ModelFileError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("malformed model file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("convention must be \"{CONVENTION}\", found {0:?}")]
    Convention(String),
    #[error("model file has no `{0}` field")]
    Missing(&'static str),
    #[error("give either `tau1` and `tau2`, or `sigma` alone")]
    Generators,
    #[error("bad matrix `{field}`: {source}")]
    Matrix {
        field: &'static str,
        source: ConeError,
    },
    #[error("ideal file {path}: {source}")]
    Ideal {
        path: PathBuf,
        source: IdealFileError,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub name: String,
    pub convention: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub triform: Option<[i64; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c2form: Option<[i64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau1: Option<[i64; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau2: Option<[i64; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<[i64; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nef: Option<[[i64; 2]; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ci: Option<CIData>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ideal: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub provenance: BTreeMap<String, String>,
}

fn matrix(field: &'static str, v: [i64; 4]) -> Result<LatticeMap, ModelFileError> {
    LatticeMap::from_i64(v).map_err(|source| ModelFileError::Matrix { field, source })
}

impl ModelFile {
    pub fn parse(text: &str) -> Result<Self, ModelFileError> {
        let file: ModelFile = serde_json::from_str(text)?;
        if file.convention != CONVENTION {
            return Err(ModelFileError::Convention(file.convention));
        }
        Ok(file)
    }

    pub fn load(path: &Path) -> Result<Self, ModelFileError> {
        let text = fs::read_to_string(path).map_err(|source| ModelFileError::Io {
            path: path.to_owned(),
            source,
        })?;
        Self::parse(&text)
    }

    /// JSON with objects indented and arrays kept on one line, plus a
    /// trailing newline; `parse` then `render` is the identity on files
    /// written this way.
    pub fn render(&self) -> String {
        let value = serde_json::to_value(self).expect("model files serialize");
        let mut s = String::new();
        render_value(&value, 0, &mut s);
        s.push('\n');
        s
    }

    pub fn save(&self, path: &Path) -> Result<(), ModelFileError> {
        fs::write(path, self.render()).map_err(|source| ModelFileError::Io {
            path: path.to_owned(),
            source,
        })
    }

    pub fn to_model(&self) -> Result<CYModel, ModelFileError> {
        let triform = TriForm::from_array(self.triform.ok_or(ModelFileError::Missing("triform"))?);
        let c2form = C2Form::from_array(self.c2form.ok_or(ModelFileError::Missing("c2form"))?);
        let generators = match (self.tau1, self.tau2, self.sigma) {
            (Some(t1), Some(t2), None) => Generators::Involutions {
                tau1: matrix("tau1", t1)?,
                tau2: matrix("tau2", t2)?,
            },
            (None, None, Some(s)) => Generators::Sigma(matrix("sigma", s)?),
            _ => return Err(ModelFileError::Generators),
        };
        let nef = match self.nef {
            Some([[a, b], [c, d]]) => [IntegralClass::new(a, b), IntegralClass::new(c, d)],
            None => [IntegralClass::h1(), IntegralClass::h2()],
        };
        Ok(CYModel {
            name: self.name.clone(),
            triform,
            c2form,
            generators,
            nef,
        })
    }

    /// Sum of the listed ideals; paths are relative to `base`.
    pub fn load_ideal(&self, base: &Path) -> Result<Option<IdealSpec>, ModelFileError> {
        let Some(paths) = &self.ideal else {
            return Ok(None);
        };
        let mut acc: Option<IdealSpec> = None;
        for p in paths {
            let path = base.join(p);
            let text = fs::read_to_string(&path).map_err(|source| ModelFileError::Io {
                path: path.clone(),
                source,
            })?;
            let part = IdealSpec::parse(&text).map_err(|source| ModelFileError::Ideal {
                path: path.clone(),
                source,
            })?;
            acc = Some(match acc {
                None => part,
                Some(a) => a
                    .combine(part)
                    .map_err(|source| ModelFileError::Ideal { path, source })?,
            });
        }
        Ok(acc)
    }

    /// Replaces the intersection numbers and tags their origin.
    pub fn set_intersection_data(&mut self, tri: &TriForm, c2: &C2Form, tag: &str) {
        let small = |x: &num_bigint::BigInt| i64::try_from(x).expect("intersection numbers fit in i64");
        self.triform = Some(tri.as_array().map(small));
        self.c2form = Some([small(&c2.c1), small(&c2.c2)]);
        self.provenance.insert("triform".into(), tag.into());
        self.provenance.insert("c2form".into(), tag.into());
    }
}

fn render_value(v: &Value, indent: usize, out: &mut String) {
    match v {
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (i, (k, x)) in map.iter().enumerate() {
                out.push_str(&"  ".repeat(indent + 1));
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                render_value(x, indent + 1, out);
                if i + 1 < map.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str(&"  ".repeat(indent));
            out.push('}');
        }
        Value::Array(items) => {
            out.push('[');
            for (i, x) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                render_value(x, indent, out);
            }
            out.push(']');
        }
        other => out.push_str(&other.to_string()),
    }
}
