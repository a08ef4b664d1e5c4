use nalgebra::{DMatrix, DVector};

use crate::barriers::DirectSum;
use crate::error::{Error, Result};

/// `inf <c, x>` subject to `A x + b` in the direct sum of the block sets.
#[derive(Clone, Debug)]
pub struct DomainDrivenProblem {
    c: DVector<f64>,
    a: DMatrix<f64>,
    b: DVector<f64>,
    blocks: DirectSum,
}

impl DomainDrivenProblem {
    pub fn new(c: DVector<f64>, a: DMatrix<f64>, b: DVector<f64>, blocks: DirectSum) -> Result<Self> {
        let (rows, n) = a.shape();
        if c.len() != n {
            return Err(Error::Dimension(format!("c has length {}, A has {n} columns", c.len())));
        }
        if rows != blocks.dim() || b.len() != rows {
            return Err(Error::Dimension(format!(
                "A has {rows} rows, b has {} entries, blocks cover {}",
                b.len(),
                blocks.dim()
            )));
        }
        if n == 0 {
            return Err(Error::Dimension("no variables".into()));
        }
        if a.iter().chain(b.iter()).chain(c.iter()).any(|v| !v.is_finite()) {
            return Err(Error::MalformedInput("non-finite problem data".into()));
        }
        let sv = a.clone().svd(false, false).singular_values;
        let smax = sv.max();
        if !(smax > 0.0) || sv.min() <= 1e-12 * smax * (rows.max(n) as f64) {
            return Err(Error::RankDeficient);
        }
        Ok(DomainDrivenProblem { c, a, b, blocks })
    }

    pub fn c(&self) -> &DVector<f64> {
        &self.c
    }

    pub fn a(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn b(&self) -> &DVector<f64> {
        &self.b
    }

    pub fn blocks(&self) -> &DirectSum {
        &self.blocks
    }

    pub fn num_vars(&self) -> usize {
        self.a.ncols()
    }

    /// Embedding dimension of `A x`.
    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    /// Canonical interior point of the shifted domain: block interior points minus `b`.
    pub fn z0(&self) -> DVector<f64> {
        DVector::from_vec(self.blocks.interior_point()) - &self.b
    }
}
