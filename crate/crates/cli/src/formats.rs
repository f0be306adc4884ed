//! JSON file formats for spaces, functions, map pairs and oracles.
//!
//! Every distance or function value is a JSON number or the string
//! `"inf"`. Spaces inside other files are either inline objects or paths,
//! resolved relative to the file that mentions them.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use coarse_lip_core::metric::validate_metric_with_tol;
use coarse_lip_core::ml::{lift, LiftedOracle, MlOracle, PerturbedLift};
use coarse_lip_core::{ExtReal, LipFn, MapPair, MetricSpace, Space};
use serde::de::{self, DeserializeOwned, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::CliError;

/// A raw matrix entry: any float, with `"inf"` for `∞`. Range checks are
/// left to metric validation so that they come back as violations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Entry(pub f64);

impl Serialize for Entry {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if self.0 == f64::INFINITY {
            serializer.serialize_str("inf")
        } else {
            serializer.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for Entry {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Entry;
            fn expecting(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
                f.write_str("a number or the string \"inf\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Entry, E> {
                Ok(Entry(v))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Entry, E> {
                Ok(Entry(v as f64))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Entry, E> {
                Ok(Entry(v as f64))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Entry, E> {
                if v == "inf" {
                    Ok(Entry(f64::INFINITY))
                } else {
                    Err(E::invalid_value(de::Unexpected::Str(v), &self))
                }
            }
        }
        deserializer.deserialize_any(V)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceFile {
    pub points: Vec<String>,
    pub d: Vec<Vec<Entry>>,
}

impl SpaceFile {
    pub fn from_space(space: &MetricSpace) -> Self {
        SpaceFile {
            points: space.labels().to_vec(),
            d: space
                .matrix()
                .into_iter()
                .map(|row| row.into_iter().map(|v| Entry(v.to_f64())).collect())
                .collect(),
        }
    }

    pub fn build(&self, tol: f64) -> Result<MetricSpace, coarse_lip_core::Error> {
        let rows: Vec<Vec<f64>> = self.d.iter().map(|row| row.iter().map(|e| e.0).collect()).collect();
        validate_metric_with_tol(self.points.clone(), &rows, tol)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpaceRef {
    Path(PathBuf),
    Inline(SpaceFile),
}

impl SpaceRef {
    fn resolve(&self, base: &Path, tol: f64) -> Result<MetricSpace, CliError> {
        match self {
            SpaceRef::Path(p) => load_space(&base.join(p), tol),
            SpaceRef::Inline(file) => Ok(file.build(tol)?),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionFile {
    pub space: SpaceRef,
    pub values: Vec<ExtReal>,
}

impl FunctionFile {
    pub fn inline(f: &LipFn) -> Self {
        FunctionFile { space: SpaceRef::Inline(SpaceFile::from_space(f.space())), values: f.values().to_vec() }
    }
}

/// Serialized ml-oracle. Spaces may be inline or paths.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum OracleDescriptor {
    Lifted {
        x: SpaceRef,
        y: SpaceRef,
        forward: Vec<usize>,
        backward: Vec<usize>,
    },
    PerturbedLifted {
        x: SpaceRef,
        y: SpaceRef,
        forward: Vec<usize>,
        backward: Vec<usize>,
        perturbation: Vec<f64>,
    },
}

pub enum Oracle {
    Lifted(LiftedOracle),
    Perturbed(PerturbedLift),
}

impl Oracle {
    pub fn as_dyn(&self) -> &dyn MlOracle {
        match self {
            Oracle::Lifted(o) => o,
            Oracle::Perturbed(o) => o,
        }
    }
}

impl OracleDescriptor {
    pub fn lifted(x: &MetricSpace, y: &MetricSpace, pair: &MapPair) -> Self {
        OracleDescriptor::Lifted {
            x: SpaceRef::Inline(SpaceFile::from_space(x)),
            y: SpaceRef::Inline(SpaceFile::from_space(y)),
            forward: pair.forward.clone(),
            backward: pair.backward.clone(),
        }
    }

    pub fn build(&self, base: &Path, tol: f64) -> Result<Oracle, CliError> {
        let (x, y, forward, backward, perturbation) = match self {
            OracleDescriptor::Lifted { x, y, forward, backward } => (x, y, forward, backward, None),
            OracleDescriptor::PerturbedLifted { x, y, forward, backward, perturbation } => {
                (x, y, forward, backward, Some(perturbation))
            }
        };
        let x: Space = Arc::new(x.resolve(base, tol)?);
        let y: Space = Arc::new(y.resolve(base, tol)?);
        let lifted = lift(MapPair::new(forward.clone(), backward.clone()), x, y)?;
        Ok(match perturbation {
            None => Oracle::Lifted(lifted),
            Some(p) => Oracle::Perturbed(lifted.perturbed(p.clone())?),
        })
    }
}

fn base_dir(path: &Path) -> &Path {
    path.parent().unwrap_or(Path::new("."))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

pub fn load_space(path: &Path, tol: f64) -> Result<MetricSpace, CliError> {
    let file: SpaceFile = read_json(path)?;
    file.build(tol).map_err(|source| CliError::InvalidInput { path: path.to_path_buf(), source })
}

pub fn load_function(path: &Path, tol: f64) -> Result<LipFn, CliError> {
    let file: FunctionFile = read_json(path)?;
    let space = Arc::new(file.space.resolve(base_dir(path), tol)?);
    LipFn::with_tol(space, file.values, tol).map_err(|source| CliError::InvalidInput { path: path.to_path_buf(), source })
}

/// Raw values with their space, without the 1-Lipschitz check.
pub fn load_values(path: &Path, tol: f64) -> Result<(Space, Vec<ExtReal>), CliError> {
    let file: FunctionFile = read_json(path)?;
    let space = Arc::new(file.space.resolve(base_dir(path), tol)?);
    Ok((space, file.values))
}

pub fn load_pair(path: &Path) -> Result<MapPair, CliError> {
    read_json(path)
}

pub fn load_oracle(path: &Path, tol: f64) -> Result<Oracle, CliError> {
    let desc: OracleDescriptor = read_json(path)?;
    desc.build(base_dir(path), tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entries_accept_inf_only_as_string() {
        let e: Vec<Entry> = serde_json::from_str(r#"[0, 1.5, "inf", -2]"#).unwrap();
        assert_eq!(e, [Entry(0.0), Entry(1.5), Entry(f64::INFINITY), Entry(-2.0)]);
        assert!(serde_json::from_str::<Entry>(r#""Infinity""#).is_err());
        assert_eq!(serde_json::to_string(&Entry(f64::INFINITY)).unwrap(), r#""inf""#);
    }

    #[test]
    fn space_round_trip() {
        let s = MetricSpace::line(&[0.0, 1.0]).unwrap().disjoint_union(&MetricSpace::line(&[0.0]).unwrap()).unwrap();
        let file = SpaceFile::from_space(&s);
        let text = serde_json::to_string(&file).unwrap();
        let back: SpaceFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back, file);
        assert_eq!(back.build(1e-9).unwrap(), s);
    }

    #[test]
    fn oracle_descriptor_round_trip() {
        let x = MetricSpace::line(&[0.0, 2.0]).unwrap();
        let y = MetricSpace::line(&[0.0, 1.0, 2.0]).unwrap();
        let desc = OracleDescriptor::lifted(&x, &y, &MapPair::new(vec![0, 2], vec![0, 0, 1]));
        let text = serde_json::to_string(&desc).unwrap();
        assert!(text.contains(r#""kind":"lifted""#));
        assert_eq!(serde_json::from_str::<OracleDescriptor>(&text).unwrap(), desc);
        let oracle = desc.build(Path::new("."), 1e-9).unwrap();
        assert_eq!(oracle.as_dyn().epsilon(), 4.0);
    }
}
