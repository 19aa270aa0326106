//! Job specifications.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use primint_core::primitive::{parse_ext, Param};
use primint_core::{ExtReal, Interval2, Params};
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::CliError;

pub const DEFAULT_TOL: f64 = 1e-6;
const PLANE: [Real; 4] = [Real(f64::NEG_INFINITY), Real(f64::INFINITY), Real(f64::NEG_INFINITY), Real(f64::INFINITY)];
pub const DEFAULT_RESOLUTION: usize = 64;

/// A real number on the extended line. Infinities travel through JSON as
/// the strings `"inf"` and `"-inf"`, NaN as `"nan"`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Real(pub f64);

impl Real {
    pub fn ext(self) -> Result<ExtReal, CliError> {
        Ok(ExtReal::new(self.0)?)
    }
}

impl From<f64> for Real {
    fn from(v: f64) -> Self {
        Real(v)
    }
}

impl From<ExtReal> for Real {
    fn from(v: ExtReal) -> Self {
        Real(v.value())
    }
}

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0 {
            v if v.is_finite() => s.serialize_f64(v),
            v if v.is_nan() => s.serialize_str("nan"),
            v if v > 0.0 => s.serialize_str("inf"),
            _ => s.serialize_str("-inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Real;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number or one of \"inf\", \"-inf\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Real, E> {
                Ok(Real(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Real, E> {
                Ok(Real(v as f64))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Real, E> {
                Ok(Real(v as f64))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Real, E> {
                if v.trim() == "nan" {
                    return Ok(Real(f64::NAN));
                }
                parse_ext(v).map(|e| Real(e.value())).map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Num(Real),
    Text(String),
}

pub type ParamMap = BTreeMap<String, ParamValue>;

pub fn to_params(map: &ParamMap) -> Params {
    let mut p = Params::new();
    for (k, v) in map {
        p.0.insert(
            k.clone(),
            match v {
                ParamValue::Num(r) => Param::Num(r.0),
                ParamValue::Text(s) => Param::Text(s.clone()),
            },
        );
    }
    p
}

/// A catalog entry, optionally with parameters, or a grid file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FnRef {
    Name(String),
    Catalog {
        name: String,
        #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
        params: ParamMap,
    },
    File {
        file: PathBuf,
    },
}

impl FnRef {
    pub fn catalog(name: &str) -> Self {
        FnRef::Name(name.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MapKind {
    Straight,
    Swapped,
}

/// `(u, v) -> (alpha u + gamma1, beta v + gamma2)`, or with `u` and `v`
/// exchanged on the right for `swapped`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MapSpec {
    pub kind: MapKind,
    pub alpha: f64,
    pub beta: f64,
    #[serde(default)]
    pub gamma1: f64,
    #[serde(default)]
    pub gamma2: f64,
}

/// One invocation. Which fields are read depends on `command`; unused
/// fields are ignored. `params` applies to a bare-name reference in
/// `primitive` (or in `bv` when there is no primitive).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub primitive: Option<FnRef>,
    /// Second operand of `product`, `lattice` and `order`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub other: Option<FnRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bv: Option<FnRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel: Option<FnRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<ParamMap>,
    /// `[a, b, c, d]` for `[a,b] x [c,d]`, oriented.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interval: Option<[Real; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<[Real; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shift: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<MapSpec>,
    /// Step-function size for `mollify`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    /// `lattice`: `join` or `meet`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub op: Option<String>,
    /// `improper`: `xpowy` or `arctanxy`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub example: Option<String>,
    /// `improper`: `dyfirst` or `dxfirst`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<String>,
    /// `ndcorner`: one `[lo, hi]` pair per axis.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limits: Option<Vec<[Real; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub suite: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Where to write a computed primitive (`.csv` or `.json`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

impl JobSpec {
    pub fn new(command: &str) -> Self {
        JobSpec { command: command.to_string(), ..JobSpec::default() }
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn tol(&self) -> f64 {
        self.tol.unwrap_or(DEFAULT_TOL)
    }

    pub fn resolution(&self) -> usize {
        self.resolution.unwrap_or(DEFAULT_RESOLUTION)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    /// The spec with defaults filled in, as echoed in reports.
    pub fn resolved(&self) -> JobSpec {
        JobSpec { tol: Some(self.tol()), resolution: Some(self.resolution()), seed: Some(self.seed()), ..self.clone() }
    }

    pub fn check(&self) -> Result<(), CliError> {
        if !(self.tol() > 0.0) {
            return Err(CliError::usage(format!("tol must be positive, got {}", self.tol())));
        }
        if self.resolution() < 2 {
            return Err(CliError::usage(format!("resolution must be at least 2, got {}", self.resolution())));
        }
        for r in [&self.primitive, &self.other, &self.bv, &self.kernel].into_iter().flatten() {
            if let FnRef::File { file } = r {
                if !file.is_file() {
                    return Err(CliError::io(file, "no such file"));
                }
            }
        }
        Ok(())
    }

    pub fn interval(&self) -> Result<Interval2, CliError> {
        let o = self.oriented()?;
        Ok(o.interval)
    }

    /// The job interval, or the whole extended plane when none is given.
    pub fn oriented(&self) -> Result<primint_core::OrientedInterval, CliError> {
        let [a, b, c, d] = self.interval.unwrap_or(PLANE);
        Ok(primint_core::make_interval(a.ext()?, b.ext()?, c.ext()?, d.ext()?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinities_round_trip_as_strings() {
        let v = serde_json::to_string(&[Real(f64::INFINITY), Real(-f64::INFINITY), Real(0.5)]).unwrap();
        assert_eq!(v, r#"["inf","-inf",0.5]"#);
        let back: [Real; 3] = serde_json::from_str(&v).unwrap();
        assert_eq!(back[0].0, f64::INFINITY);
        assert_eq!(back[1].0, f64::NEG_INFINITY);
        assert!(serde_json::from_str::<Real>(r#""wide""#).is_err());
    }

    #[test]
    fn references_parse_in_all_forms() {
        let s = JobSpec::from_json(
            r#"{"command":"integrate","primitive":"gauss","bv":{"name":"quadrantIndicator","params":{"x":1,"y":"inf"}},
                "other":{"file":"f.csv"},"interval":[0,"inf",0,"inf"]}"#,
        )
        .unwrap();
        assert_eq!(s.primitive, Some(FnRef::Name("gauss".into())));
        assert!(matches!(s.bv, Some(FnRef::Catalog { .. })));
        assert!(matches!(s.other, Some(FnRef::File { .. })));
        assert!(JobSpec::from_json(r#"{"command":"norm","bogus":1}"#).is_err());
    }
}
