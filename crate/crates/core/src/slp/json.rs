//! JSON encoding: `{num_vars, nodes: [{id, op, in, coef}], output}`.

use serde::{Deserialize, Serialize};
use serde_json::Number;

use super::{Op, SlpNode, SlpProgram};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SlpNodeJson {
    pub id: Number,
    pub op: String,
    #[serde(rename = "in")]
    pub inputs: [Number; 2],
    pub coef: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SlpJson {
    pub num_vars: usize,
    pub nodes: Vec<SlpNodeJson>,
    pub output: Number,
}

fn index(n: &Number, what: &str) -> Result<usize> {
    n.as_u64()
        .map(|v| v as usize)
        .ok_or_else(|| Error::MalformedSlp(format!("{what} must be a non-negative integer, got {n}")))
}

impl TryFrom<SlpJson> for SlpProgram<f64> {
    type Error = Error;

    fn try_from(raw: SlpJson) -> Result<Self> {
        let nodes = raw
            .nodes
            .iter()
            .map(|n| {
                let op = Op::parse(&n.op).ok_or_else(|| Error::MalformedSlp(format!("unknown op '{}'", n.op)))?;
                let second = if op == Op::Pow { "exponent" } else { "operand" };
                Ok(SlpNode {
                    id: index(&n.id, "id")?,
                    op,
                    inputs: [index(&n.inputs[0], "operand")?, index(&n.inputs[1], second)?],
                    coef: n.coef,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        SlpProgram::new(raw.num_vars, nodes, index(&raw.output, "output")?)
    }
}

impl From<&SlpProgram<f64>> for SlpJson {
    fn from(p: &SlpProgram<f64>) -> Self {
        SlpJson {
            num_vars: p.num_vars(),
            output: Number::from(p.output() as u64),
            nodes: p
                .nodes()
                .iter()
                .map(|n| SlpNodeJson {
                    id: Number::from(n.id as u64),
                    op: n.op.as_str().to_string(),
                    inputs: [Number::from(n.inputs[0] as u64), Number::from(n.inputs[1] as u64)],
                    coef: n.coef,
                })
                .collect(),
        }
    }
}

impl Serialize for SlpProgram<f64> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SlpJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for SlpProgram<f64> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = SlpJson::deserialize(d)?;
        SlpProgram::try_from(raw).map_err(serde::de::Error::custom)
    }
}

impl SlpProgram<f64> {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: SlpJson = serde_json::from_str(text)?;
        SlpProgram::try_from(raw)
    }
}
