//! Explicit monomial representation, used as the ground-truth oracle for
//! straight-line programs and as an input format.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::slp::{SlpBuilder, SlpProgram};

#[derive(Clone, Debug, PartialEq)]
pub struct Monomial<T> {
    pub exponents: Vec<u32>,
    pub coef: T,
}

/// Sum of monomials over `num_vars` variables. Exponent vectors are unique.
#[derive(Clone, Debug, PartialEq)]
pub struct MonomialPoly<T> {
    num_vars: usize,
    terms: Vec<Monomial<T>>,
}

fn pow<T: Scalar>(x: &T, e: u32) -> T {
    (0..e).fold(T::one(), |acc, _| acc * x.clone())
}

impl<T: Scalar> MonomialPoly<T> {
    /// Merges repeated exponent vectors and drops zero coefficients.
    pub fn new(num_vars: usize, terms: Vec<Monomial<T>>) -> Result<Self> {
        let mut merged: BTreeMap<Vec<u32>, T> = BTreeMap::new();
        for t in terms {
            if t.exponents.len() != num_vars {
                return Err(Error::MalformedInput(format!(
                    "exponent vector of length {} for {num_vars} variables",
                    t.exponents.len()
                )));
            }
            if !t.coef.is_finite_value() {
                return Err(Error::MalformedInput("non-finite coefficient".into()));
            }
            let slot = merged.entry(t.exponents).or_insert_with(T::zero);
            *slot = slot.clone() + t.coef;
        }
        let terms = merged
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(exponents, coef)| Monomial { exponents, coef })
            .collect();
        Ok(MonomialPoly { num_vars, terms })
    }

    /// Builds from rows `[e_1, ..., e_m, coef]`.
    pub fn from_rows(num_vars: usize, rows: &[Vec<f64>]) -> Result<Self> {
        let terms = rows
            .iter()
            .map(|row| {
                if row.len() != num_vars + 1 {
                    return Err(Error::MalformedInput(format!("row of length {} (expected {})", row.len(), num_vars + 1)));
                }
                let exponents = row[..num_vars]
                    .iter()
                    .map(|&e| {
                        if e < 0.0 || e.fract() != 0.0 || e > u32::MAX as f64 {
                            Err(Error::MalformedInput(format!("exponent {e} is not a non-negative integer")))
                        } else {
                            Ok(e as u32)
                        }
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Monomial { exponents, coef: T::from_f64_lossy(row[num_vars]) })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(num_vars, terms)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn terms(&self) -> &[Monomial<T>] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Maximum total degree and whether all terms share it.
    pub fn degree(&self) -> (u32, bool) {
        let degs: Vec<u32> = self.terms.iter().map(|t| t.exponents.iter().sum()).collect();
        let max = degs.iter().copied().max().unwrap_or(0);
        (max, degs.iter().all(|&d| d == max))
    }

    fn check(&self, x: &[T]) -> Result<()> {
        if x.len() != self.num_vars {
            return Err(Error::Dimension(format!("expected {} inputs, got {}", self.num_vars, x.len())));
        }
        if x.iter().any(|v| !v.is_finite_value()) {
            return Err(Error::MalformedInput("non-finite input".into()));
        }
        Ok(())
    }

    pub fn eval(&self, x: &[T]) -> Result<T> {
        self.check(x)?;
        Ok(self.terms.iter().fold(T::zero(), |acc, t| {
            acc + t
                .exponents
                .iter()
                .zip(x)
                .fold(t.coef.clone(), |p, (&e, xi)| p * pow(xi, e))
        }))
    }

    pub fn gradient(&self, x: &[T]) -> Result<Vec<T>> {
        self.check(x)?;
        let m = self.num_vars;
        let mut g = vec![T::zero(); m];
        for t in &self.terms {
            for (j, gj) in g.iter_mut().enumerate() {
                let ej = t.exponents[j];
                if ej == 0 {
                    continue;
                }
                let mut p = t.coef.clone() * T::from_usize(ej as usize);
                for (i, xi) in x.iter().enumerate() {
                    let e = if i == j { ej - 1 } else { t.exponents[i] };
                    p = p * pow(xi, e);
                }
                *gj = gj.clone() + p;
            }
        }
        Ok(g)
    }

    pub fn hessian(&self, x: &[T]) -> Result<DMatrix<T>> {
        self.check(x)?;
        let m = self.num_vars;
        let mut h = DMatrix::from_element(m, m, T::zero());
        for t in &self.terms {
            for j in 0..m {
                for k in j..m {
                    let mut exps = t.exponents.clone();
                    let mut c = t.coef.clone();
                    if exps[j] == 0 {
                        continue;
                    }
                    c = c * T::from_usize(exps[j] as usize);
                    exps[j] -= 1;
                    if exps[k] == 0 {
                        continue;
                    }
                    c = c * T::from_usize(exps[k] as usize);
                    exps[k] -= 1;
                    let p = exps.iter().zip(x).fold(c, |p, (&e, xi)| p * pow(xi, e));
                    h[(j, k)] = h[(j, k)].clone() + p.clone();
                    if j != k {
                        h[(k, j)] = h[(k, j)].clone() + p;
                    }
                }
            }
        }
        Ok(h)
    }

    /// Sum-of-products program: each term is a chain of multiplications of
    /// input or `pow` factors; terms are chained by additions.
    pub fn to_slp(&self) -> Result<SlpProgram<T>> {
        if self.terms.is_empty() {
            return Err(Error::MalformedInput("empty term list".into()));
        }
        let mut b = SlpBuilder::new(self.num_vars);
        let mut acc: Option<usize> = None;
        for t in &self.terms {
            let factors: Vec<(usize, u32)> = t
                .exponents
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| (i + 1, e))
                .collect();
            let is_one = t.coef == T::one();
            let term = match factors.as_slice() {
                [] => b.constant(t.coef.clone()),
                [(v, 1)] if is_one => *v,
                [(v, 1)] => b.scale(*v, t.coef.clone()),
                [(v, e)] => b.pow(*v, *e, t.coef.clone()),
                _ => {
                    let n = factors.len();
                    let lift = |b: &mut SlpBuilder<T>, (v, e): (usize, u32)| if e == 1 { v } else { b.pow(v, e, T::one()) };
                    let mut prod = lift(&mut b, factors[0]);
                    for (idx, &f) in factors.iter().enumerate().skip(1) {
                        let rhs = lift(&mut b, f);
                        let coef = if idx + 1 == n { t.coef.clone() } else { T::one() };
                        prod = b.push(crate::slp::Op::Mul, prod, rhs, coef);
                    }
                    prod
                }
            };
            acc = Some(match acc {
                None => term,
                Some(a) => b.add(a, term),
            });
        }
        b.finish(acc.expect("non-empty"))
    }
}

/// Free-function form of [`MonomialPoly::to_slp`].
pub fn mono_to_slp<T: Scalar>(poly: &MonomialPoly<T>) -> Result<SlpProgram<T>> {
    poly.to_slp()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MonomialJson {
    pub exponents: Vec<i64>,
    pub coef: f64,
}

impl MonomialPoly<f64> {
    pub fn to_json(&self) -> String {
        let list: Vec<MonomialJson> = self
            .terms
            .iter()
            .map(|t| MonomialJson { exponents: t.exponents.iter().map(|&e| e as i64).collect(), coef: t.coef })
            .collect();
        serde_json::to_string_pretty(&list).expect("serializable")
    }

    pub fn from_json_terms(num_vars: usize, list: &[MonomialJson]) -> Result<Self> {
        let terms = list
            .iter()
            .map(|t| {
                let exponents = t
                    .exponents
                    .iter()
                    .map(|&e| u32::try_from(e).map_err(|_| Error::MalformedInput(format!("negative exponent {e}"))))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Monomial { exponents, coef: t.coef })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(num_vars, terms)
    }

    /// Parses a JSON list of `{exponents, coef}`; the variable count is the
    /// common exponent-vector length.
    pub fn from_json(text: &str) -> Result<Self> {
        let list: Vec<MonomialJson> = serde_json::from_str(text)?;
        let m = list.first().map(|t| t.exponents.len()).ok_or_else(|| Error::MalformedInput("empty term list".into()))?;
        Self::from_json_terms(m, &list)
    }
}
