//! Problem files.
//!
//! ```text
//! { "c": [..], "b": [..],
//!   "a": [[..], ..]  or  {"rows": r, "cols": n, "triplets": [[i, j, v], ..]},
//!   "blocks": [ {"kind": "LP", "dim": 3},
//!               {"kind": "SOC", "dim": 4},
//!               {"kind": "ENTR", "dim": 4},
//!               {"kind": "HB", "dim": 3, "format": "straight_line", "poly": {..}, "direction": [..]},
//!               {"kind": "HB", "dim": 3, "format": "monomial", "poly": [{"exponents": [..], "coef": c}, ..], "direction": [..]},
//!               {"kind": "HB", "dim": 3, "format": "determinant", "matrices": [H0, H1, ..], "direction": [..]},
//!               {"kind": "DET", "dim": 3, "matrices": [H0, H1, ..], "interior": [..]} ] }
//! ```
//!
//! Rows of `A` stack in block order. A determinant-format HB block becomes a
//! DET block with the direction as its interior point.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::barriers::{Block, DetPencil, DirectSum};
use crate::cone::HyperbolicCone;
use crate::error::{Error, Result};
use crate::ipm::{DomainDrivenProblem, SolveResult};
use crate::monomial::{MonomialJson, MonomialPoly};
use crate::slp::{SlpJson, SlpProgram};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProblemJson {
    pub c: Vec<f64>,
    pub a: MatrixJson,
    pub b: Vec<f64>,
    pub blocks: Vec<BlockJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixJson {
    Dense(Vec<Vec<f64>>),
    Sparse { rows: usize, cols: usize, triplets: Vec<(usize, usize, f64)> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HbFormat {
    StraightLine,
    Monomial,
    Determinant,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum BlockJson {
    #[serde(rename = "LP")]
    Lp { dim: usize },
    #[serde(rename = "SOC")]
    Soc { dim: usize },
    #[serde(rename = "ENTR")]
    Entr { dim: usize },
    #[serde(rename = "HB")]
    Hb {
        dim: usize,
        format: HbFormat,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        poly: Option<Value>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        matrices: Option<Vec<Vec<Vec<f64>>>>,
        direction: Vec<f64>,
    },
    #[serde(rename = "DET")]
    Det { dim: usize, matrices: Vec<Vec<Vec<f64>>>, interior: Vec<f64> },
}

fn square(rows: &[Vec<f64>], what: &str) -> Result<DMatrix<f64>> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::MalformedInput(format!("{what} is not square")));
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

fn pencil(matrices: &[Vec<Vec<f64>>], interior: Vec<f64>) -> Result<DetPencil> {
    let (h0, hs) = matrices.split_first().ok_or_else(|| Error::MalformedInput("pencil needs H0 and at least one H_i".into()))?;
    let hs = hs.iter().enumerate().map(|(i, h)| square(h, &format!("H{}", i + 1))).collect::<Result<Vec<_>>>()?;
    DetPencil::new(Some(square(h0, "H0")?), hs, interior)
}

fn rows_of(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

impl BlockJson {
    fn dim(&self) -> usize {
        match self {
            BlockJson::Lp { dim } | BlockJson::Soc { dim } | BlockJson::Entr { dim } => *dim,
            BlockJson::Hb { dim, .. } | BlockJson::Det { dim, .. } => *dim,
        }
    }

    pub fn to_block(&self) -> Result<Block> {
        let block = match self {
            BlockJson::Lp { dim } => Block::Lp { dim: *dim },
            BlockJson::Soc { dim } => {
                if *dim < 2 {
                    return Err(Error::MalformedInput("SOC block needs dim >= 2".into()));
                }
                Block::Soc { dim: *dim }
            }
            BlockJson::Entr { dim } => {
                if dim % 2 != 0 {
                    return Err(Error::MalformedInput("ENTR block dim must be even (pairs u, t)".into()));
                }
                Block::Entr { pairs: dim / 2 }
            }
            BlockJson::Hb { format: HbFormat::Determinant, matrices, direction, .. } => {
                let m = matrices.as_ref().ok_or_else(|| Error::MalformedInput("determinant HB block needs matrices".into()))?;
                Block::Det(pencil(m, direction.clone())?)
            }
            BlockJson::Hb { format, poly, direction, .. } => {
                let poly = poly.as_ref().ok_or_else(|| Error::MalformedInput("HB block needs a poly".into()))?;
                let program = match format {
                    HbFormat::StraightLine => SlpProgram::try_from(serde_json::from_value::<SlpJson>(poly.clone())?)?,
                    _ => {
                        let terms: Vec<MonomialJson> = serde_json::from_value(poly.clone())?;
                        MonomialPoly::from_json_terms(direction.len(), &terms)?.to_slp()?
                    }
                };
                Block::Hb(HyperbolicCone::new(program, direction.clone())?)
            }
            BlockJson::Det { matrices, interior, .. } => Block::Det(pencil(matrices, interior.clone())?),
        };
        if block.dim() != self.dim() {
            return Err(Error::Dimension(format!(
                "{} block declares dim {} but its payload has dimension {}",
                block.kind().as_str(),
                self.dim(),
                block.dim()
            )));
        }
        Ok(block)
    }

    pub fn from_block(block: &Block) -> Self {
        match block {
            Block::Lp { dim } => BlockJson::Lp { dim: *dim },
            Block::Soc { dim } => BlockJson::Soc { dim: *dim },
            Block::Entr { pairs } => BlockJson::Entr { dim: 2 * pairs },
            Block::Hb(cone) => BlockJson::Hb {
                dim: cone.dim(),
                format: HbFormat::StraightLine,
                poly: Some(serde_json::to_value(SlpJson::from(cone.program())).expect("serializable")),
                matrices: None,
                direction: cone.direction().to_vec(),
            },
            Block::Det(p) => BlockJson::Det {
                dim: p.hs().len(),
                matrices: std::iter::once(p.h0()).chain(p.hs()).map(rows_of).collect(),
                interior: p.interior().to_vec(),
            },
        }
    }
}

impl MatrixJson {
    pub fn to_matrix(&self) -> Result<DMatrix<f64>> {
        match self {
            MatrixJson::Dense(rows) => {
                let r = rows.len();
                let n = rows.first().map_or(0, |row| row.len());
                if rows.iter().any(|row| row.len() != n) {
                    return Err(Error::MalformedInput("ragged rows in A".into()));
                }
                Ok(DMatrix::from_fn(r, n, |i, j| rows[i][j]))
            }
            MatrixJson::Sparse { rows, cols, triplets } => {
                let mut a = DMatrix::zeros(*rows, *cols);
                for &(i, j, v) in triplets {
                    if i >= *rows || j >= *cols {
                        return Err(Error::MalformedInput(format!("triplet ({i}, {j}) outside {rows}x{cols}")));
                    }
                    a[(i, j)] += v;
                }
                Ok(a)
            }
        }
    }

    /// Triplets when at most a third of the entries are nonzero.
    pub fn from_matrix(a: &DMatrix<f64>) -> Self {
        let nnz = a.iter().filter(|v| **v != 0.0).count();
        if 3 * nnz <= a.len() {
            let mut triplets = Vec::with_capacity(nnz);
            for i in 0..a.nrows() {
                for j in 0..a.ncols() {
                    if a[(i, j)] != 0.0 {
                        triplets.push((i, j, a[(i, j)]));
                    }
                }
            }
            MatrixJson::Sparse { rows: a.nrows(), cols: a.ncols(), triplets }
        } else {
            MatrixJson::Dense(rows_of(a))
        }
    }
}

impl ProblemJson {
    pub fn to_problem(&self) -> Result<DomainDrivenProblem> {
        let blocks = self.blocks.iter().map(BlockJson::to_block).collect::<Result<Vec<_>>>()?;
        DomainDrivenProblem::new(
            DVector::from_column_slice(&self.c),
            self.a.to_matrix()?,
            DVector::from_column_slice(&self.b),
            DirectSum::new(blocks),
        )
    }

    pub fn from_problem(p: &DomainDrivenProblem) -> Self {
        ProblemJson {
            c: p.c().as_slice().to_vec(),
            a: MatrixJson::from_matrix(p.a()),
            b: p.b().as_slice().to_vec(),
            blocks: p.blocks().blocks().iter().map(BlockJson::from_block).collect(),
        }
    }
}

pub fn read_problem(text: &str) -> Result<DomainDrivenProblem> {
    serde_json::from_str::<ProblemJson>(text)?.to_problem()
}

pub fn write_problem(p: &DomainDrivenProblem) -> String {
    serde_json::to_string_pretty(&ProblemJson::from_problem(p)).expect("serializable")
}

pub fn write_result(r: &SolveResult) -> String {
    serde_json::to_string_pretty(r).expect("serializable")
}
