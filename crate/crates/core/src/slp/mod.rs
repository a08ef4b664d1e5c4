//! Straight-line programs.
//!
//! A program over `m` inputs addresses values by id: `0` is the constant one,
//! `1..=m` are the inputs, and node `k` of the node list has id `m + 1 + k`.
//! Every node computes `coef * (a op b)` from two earlier ids, except `pow`,
//! whose second slot is an integer exponent literal.

mod ad;
mod json;

pub use ad::{EvalTape, ForwardGradientTable, OpCount};
pub use json::{SlpJson, SlpNodeJson};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Node operation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Op {
    Add,
    Sub,
    Mul,
    Pow,
}

impl Op {
    pub fn as_str(self) -> &'static str {
        match self {
            Op::Add => "add",
            Op::Sub => "sub",
            Op::Mul => "mul",
            Op::Pow => "pow",
        }
    }

    pub fn parse(s: &str) -> Option<Op> {
        match s {
            "add" => Some(Op::Add),
            "sub" => Some(Op::Sub),
            "mul" => Some(Op::Mul),
            "pow" => Some(Op::Pow),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SlpNode<T> {
    pub id: usize,
    pub op: Op,
    /// Operand ids; for [`Op::Pow`] the second slot holds the exponent.
    pub inputs: [usize; 2],
    pub coef: T,
}

impl<T> SlpNode<T> {
    /// Exponent of a `pow` node.
    pub fn exponent(&self) -> Option<u32> {
        (self.op == Op::Pow).then_some(self.inputs[1] as u32)
    }
}

/// A validated straight-line program.
#[derive(Clone, Debug, PartialEq)]
pub struct SlpProgram<T> {
    num_vars: usize,
    nodes: Vec<SlpNode<T>>,
    output: usize,
}

/// Result of [`SlpProgram::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub num_vars: usize,
    pub node_count: usize,
    /// Formal degree of every id `0..=m+N`.
    pub degrees: Vec<u32>,
    pub output_degree: u32,
    /// False as soon as some add/sub on the output's cone of influence mixes degrees.
    pub homogeneous: bool,
    /// Ids of add/sub nodes whose operands have different degrees.
    pub heterogeneous_nodes: Vec<usize>,
}

impl<T: Scalar> SlpProgram<T> {
    /// Checks topological order, reference bounds, exponents and coefficients.
    pub fn new(num_vars: usize, nodes: Vec<SlpNode<T>>, output: usize) -> Result<Self> {
        if num_vars == 0 {
            return Err(Error::MalformedSlp("program needs at least one input".into()));
        }
        for (k, node) in nodes.iter().enumerate() {
            let expected = num_vars + 1 + k;
            if node.id != expected {
                return Err(Error::MalformedSlp(format!(
                    "node {k} has id {} (expected {expected}; ids must be contiguous)",
                    node.id
                )));
            }
            let [a, b] = node.inputs;
            if a >= node.id {
                return Err(Error::MalformedSlp(format!(
                    "node {} references id {a} which is not defined before it",
                    node.id
                )));
            }
            match node.op {
                Op::Pow => {
                    if b < 1 || b > u32::MAX as usize {
                        return Err(Error::MalformedSlp(format!(
                            "pow node {} has exponent {b}; exponent must be >= 1",
                            node.id
                        )));
                    }
                }
                _ => {
                    if b >= node.id {
                        return Err(Error::MalformedSlp(format!(
                            "node {} references id {b} which is not defined before it",
                            node.id
                        )));
                    }
                }
            }
            if !node.coef.is_finite_value() {
                return Err(Error::MalformedSlp(format!("node {} has a non-finite coefficient", node.id)));
            }
        }
        let total = num_vars + nodes.len();
        if output > total {
            return Err(Error::MalformedSlp(format!("output id {output} exceeds last id {total}")));
        }
        Ok(SlpProgram { num_vars, nodes, output })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn nodes(&self) -> &[SlpNode<T>] {
        &self.nodes
    }

    pub fn output(&self) -> usize {
        self.output
    }

    /// Number of operation nodes `N`.
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Number of addressable values `m + N + 1` (constant, inputs, nodes).
    pub fn total_ids(&self) -> usize {
        self.num_vars + self.nodes.len() + 1
    }

    /// Structural report with formal degrees of every node.
    pub fn validate(&self) -> Result<ValidationReport> {
        let m = self.num_vars;
        let mut degrees = vec![0u32; self.total_ids()];
        let mut homog = vec![true; self.total_ids()];
        for d in degrees.iter_mut().skip(1).take(m) {
            *d = 1;
        }
        let mut heterogeneous_nodes = Vec::new();
        for node in &self.nodes {
            let [a, b] = node.inputs;
            let (deg, ok) = match node.op {
                Op::Add | Op::Sub => {
                    let same = degrees[a] == degrees[b];
                    if !same {
                        heterogeneous_nodes.push(node.id);
                    }
                    (degrees[a].max(degrees[b]), same && homog[a] && homog[b])
                }
                Op::Mul => (degrees[a].saturating_add(degrees[b]), homog[a] && homog[b]),
                Op::Pow => (degrees[a].saturating_mul(b as u32), homog[a]),
            };
            degrees[node.id] = deg;
            homog[node.id] = ok;
        }
        Ok(ValidationReport {
            num_vars: m,
            node_count: self.nodes.len(),
            output_degree: degrees[self.output],
            homogeneous: homog[self.output],
            heterogeneous_nodes,
            degrees,
        })
    }

    /// Output degree and homogeneity flag.
    pub fn degree(&self) -> (u32, bool) {
        let report = self.validate().expect("constructed programs are valid");
        (report.output_degree, report.homogeneous)
    }

    /// Converts coefficients to another scalar type through `f64`.
    pub fn cast<U: Scalar>(&self) -> SlpProgram<U> {
        SlpProgram {
            num_vars: self.num_vars,
            output: self.output,
            nodes: self
                .nodes
                .iter()
                .map(|n| SlpNode { id: n.id, op: n.op, inputs: n.inputs, coef: U::from_f64_lossy(n.coef.to_f64_lossy()) })
                .collect(),
        }
    }
}

/// Incremental program construction. Ids are assigned in push order.
#[derive(Clone, Debug)]
pub struct SlpBuilder<T> {
    num_vars: usize,
    nodes: Vec<SlpNode<T>>,
}

impl<T: Scalar> SlpBuilder<T> {
    pub const ONE: usize = 0;

    pub fn new(num_vars: usize) -> Self {
        SlpBuilder { num_vars, nodes: Vec::new() }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// Id of input `i` (0-based).
    pub fn var(&self, i: usize) -> usize {
        assert!(i < self.num_vars, "input index out of range");
        i + 1
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn push(&mut self, op: Op, a: usize, b: usize, coef: T) -> usize {
        let id = self.num_vars + 1 + self.nodes.len();
        self.nodes.push(SlpNode { id, op, inputs: [a, b], coef });
        id
    }

    pub fn add(&mut self, a: usize, b: usize) -> usize {
        self.push(Op::Add, a, b, T::one())
    }

    pub fn sub(&mut self, a: usize, b: usize) -> usize {
        self.push(Op::Sub, a, b, T::one())
    }

    pub fn mul(&mut self, a: usize, b: usize) -> usize {
        self.push(Op::Mul, a, b, T::one())
    }

    /// `coef * a`, encoded as `mul(a, 1)`.
    pub fn scale(&mut self, a: usize, coef: T) -> usize {
        self.push(Op::Mul, a, Self::ONE, coef)
    }

    /// The constant `c`, encoded as `mul(1, 1)` with coefficient `c`.
    pub fn constant(&mut self, c: T) -> usize {
        self.push(Op::Mul, Self::ONE, Self::ONE, c)
    }

    pub fn pow(&mut self, a: usize, exponent: u32, coef: T) -> usize {
        self.push(Op::Pow, a, exponent as usize, coef)
    }

    pub fn finish(self, output: usize) -> Result<SlpProgram<T>> {
        SlpProgram::new(self.num_vars, self.nodes, output)
    }
}

/// The three-variable example `x1^2 - x2^2 - x3^2` in its five-node form.
pub fn lorentz_example<T: Scalar>() -> SlpProgram<T> {
    let mut b = SlpBuilder::new(3);
    let s1 = b.push(Op::Mul, 1, 1, T::one());
    let s2 = b.push(Op::Mul, 2, 2, -T::one());
    let s3 = b.push(Op::Mul, 3, 3, -T::one());
    let t = b.add(s1, s2);
    let out = b.add(s3, t);
    b.finish(out).expect("well-formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lorentz_example_validates() {
        let p = lorentz_example::<f64>();
        let report = p.validate().unwrap();
        assert_eq!(report.node_count, 5);
        assert_eq!(report.output_degree, 2);
        assert!(report.homogeneous);
        assert_eq!(p.nodes()[0].id, 4);
        assert_eq!(p.output(), 8);
    }

    #[test]
    fn identity_program() {
        let p = SlpProgram::<f64>::new(1, vec![], 1).unwrap();
        assert_eq!(p.degree(), (1, true));
        assert_eq!(p.node_count(), 0);
    }

    #[test]
    fn dangling_reference_rejected() {
        let node = SlpNode { id: 2, op: Op::Add, inputs: [1, 2 + 7], coef: 1.0 };
        assert!(matches!(SlpProgram::new(1, vec![node], 2), Err(Error::MalformedSlp(_))));
    }

    #[test]
    fn id_gap_rejected() {
        let node = SlpNode { id: 5, op: Op::Add, inputs: [1, 1], coef: 1.0 };
        assert!(matches!(SlpProgram::new(2, vec![node], 5), Err(Error::MalformedSlp(_))));
    }

    #[test]
    fn zero_exponent_rejected() {
        let node = SlpNode { id: 2, op: Op::Pow, inputs: [1, 0], coef: 1.0 };
        assert!(SlpProgram::new(1, vec![node], 2).is_err());
    }

    #[test]
    fn non_finite_coef_rejected() {
        let node = SlpNode { id: 2, op: Op::Mul, inputs: [1, 1], coef: f64::NAN };
        assert!(SlpProgram::new(1, vec![node], 2).is_err());
    }

    #[test]
    fn pow_exponent_may_exceed_node_ids() {
        let node = SlpNode { id: 2, op: Op::Pow, inputs: [1, 7], coef: 1.0 };
        let p = SlpProgram::new(1, vec![node], 2).unwrap();
        assert_eq!(p.degree(), (7, true));
    }

    #[test]
    fn heterogeneous_sum_flagged() {
        // x1^2 + x1
        let mut b = SlpBuilder::<f64>::new(1);
        let sq = b.mul(1, 1);
        let out = b.add(sq, 1);
        let p = b.finish(out).unwrap();
        let report = p.validate().unwrap();
        assert_eq!(report.output_degree, 2);
        assert!(!report.homogeneous);
        assert_eq!(report.heterogeneous_nodes, vec![out]);
    }
}
