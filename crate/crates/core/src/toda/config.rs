use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::{build_bcn, build_dn, BcnParams, DnParams, ModelKind, ModelSpec};
use crate::error::{Error, Result};
use crate::ring::{Coeff, Generator, Param, RingElement};

pub const DEFAULT_C0: i64 = 16;
pub const DEFAULT_C1: i64 = -16;

/// `{"model": "bcn"|"dn", "N": int, "params": {name: rational-or-float}}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub model: ModelKind,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(default)]
    pub params: BTreeMap<String, serde_json::Value>,
}

/// A number is taken at its exact binary value; a string may be `"p/q"` or an integer.
pub fn parse_value(v: &serde_json::Value) -> Result<Coeff> {
    match v {
        serde_json::Value::Number(num) => {
            if let Some(i) = num.as_i64() {
                return Ok(BigRational::from_integer(BigInt::from(i)));
            }
            let f = num.as_f64().ok_or_else(|| Error::Config(format!("not a number: {num}")))?;
            BigRational::from_float(f).ok_or_else(|| Error::Config(format!("not finite: {f}")))
        }
        serde_json::Value::String(s) => {
            let s = s.trim();
            let (n, d) = match s.split_once('/') {
                Some((n, d)) => (n.trim(), d.trim()),
                None => (s, "1"),
            };
            let n: BigInt = n.parse().map_err(|_| Error::Config(format!("bad rational: {s}")))?;
            let d: BigInt = d.parse().map_err(|_| Error::Config(format!("bad rational: {s}")))?;
            if d == BigInt::from(0) {
                return Err(Error::Config(format!("zero denominator in {s}")));
            }
            Ok(BigRational::new(n, d))
        }
        other => Err(Error::Config(format!("parameter value must be a number or string, got {other}"))),
    }
}

impl ModelConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Parameter values, validated against the model.
    pub fn values(&self) -> Result<BTreeMap<Param, Coeff>> {
        let allowed: &[Param] = match self.model {
            ModelKind::Bcn => &[
                Param::Theta1,
                Param::Alpha1,
                Param::Beta1,
                Param::ThetaN,
                Param::AlphaN,
                Param::BetaN,
            ],
            ModelKind::Dn => &[Param::C0, Param::C1],
        };
        let mut out = BTreeMap::new();
        for (name, v) in &self.params {
            let p = Param::from_name(name)
                .filter(|p| allowed.contains(p))
                .ok_or_else(|| Error::Config(format!("unknown parameter `{name}` for model {}", self.model)))?;
            out.insert(p, parse_value(v)?);
        }
        Ok(out)
    }

    /// Builds the model; parameters not given stay symbolic.
    pub fn build(&self) -> Result<ModelSpec> {
        self.build_with(|p| RingElement::gen(Generator::Param(p)))
    }

    /// Builds the model with missing parameters filled in: `BC_N` constants
    /// default to 0, `c_0` to 16 and `c_1` to -16. With `c_1 > 0` most
    /// initial data in the unit box run off to infinity in finite time.
    pub fn build_numeric(&self) -> Result<ModelSpec> {
        self.build_with(|p| match p {
            Param::C0 => RingElement::int(DEFAULT_C0),
            Param::C1 => RingElement::int(DEFAULT_C1),
            _ => RingElement::zero(),
        })
    }

    fn build_with(&self, missing: impl Fn(Param) -> RingElement) -> Result<ModelSpec> {
        let values = self.values()?;
        let get = |p: Param| {
            values
                .get(&p)
                .map(|c| RingElement::constant(c.clone()))
                .unwrap_or_else(|| missing(p))
        };
        let spec = match self.model {
            ModelKind::Bcn => build_bcn(
                self.n,
                BcnParams {
                    theta_1: get(Param::Theta1),
                    alpha_1: get(Param::Alpha1),
                    beta_1: get(Param::Beta1),
                    theta_n: get(Param::ThetaN),
                    alpha_n: get(Param::AlphaN),
                    beta_n: get(Param::BetaN),
                },
            ),
            ModelKind::Dn => build_dn(
                self.n,
                DnParams {
                    c_0: get(Param::C0),
                    c_1: get(Param::C1),
                },
            ),
        };
        spec.map_err(|e| match e {
            Error::InvalidModel(m) => Error::Config(m),
            other => other,
        })
    }
}
