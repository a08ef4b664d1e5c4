//! Forward evaluation, reverse-mode gradients and batched Hessians.

use nalgebra::DMatrix;

use super::{Op, SlpProgram};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Values of every id from one forward pass.
#[derive(Clone, Debug, PartialEq)]
pub struct EvalTape<T> {
    values: Vec<T>,
    num_vars: usize,
}

impl<T: Scalar> EvalTape<T> {
    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn inputs(&self) -> &[T] {
        &self.values[1..=self.num_vars]
    }

    pub fn value_of(&self, id: usize) -> &T {
        &self.values[id]
    }
}

/// Forward-mode gradients of every id, one row of width `m` per id.
#[derive(Clone, Debug, PartialEq)]
pub struct ForwardGradientTable<T> {
    rows: Vec<T>,
    width: usize,
}

impl<T: Scalar> ForwardGradientTable<T> {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.rows.len() / self.width.max(1)
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn row(&self, id: usize) -> &[T] {
        &self.rows[id * self.width..(id + 1) * self.width]
    }
}

/// Operation counts collected by the instrumented sweeps.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OpCount {
    /// Scalar multiplications and additions.
    pub scalar: usize,
    /// Passes over width-`m` rows, each forming a combination of at most two rows.
    pub rows: usize,
}

trait Counter {
    fn scalar(&mut self, n: usize);
    fn rows(&mut self, n: usize);
}

impl Counter for () {
    #[inline(always)]
    fn scalar(&mut self, _: usize) {}
    #[inline(always)]
    fn rows(&mut self, _: usize) {}
}

impl Counter for OpCount {
    fn scalar(&mut self, n: usize) {
        self.scalar += n;
    }
    fn rows(&mut self, n: usize) {
        self.rows += n;
    }
}

/// Square-and-multiply power with operation counting.
fn powi<T: Scalar, C: Counter>(base: &T, mut exp: u32, counter: &mut C) -> T {
    let mut acc = T::one();
    let mut sq = base.clone();
    let mut first = true;
    while exp > 0 {
        if exp & 1 == 1 {
            if first {
                acc = sq.clone();
                first = false;
            } else {
                acc = acc * sq.clone();
                counter.scalar(1);
            }
        }
        exp >>= 1;
        if exp > 0 {
            sq = sq.clone() * sq;
            counter.scalar(1);
        }
    }
    acc
}

fn check_finite<T: Scalar>(v: &T, node: usize) -> Result<()> {
    if v.is_finite_value() {
        Ok(())
    } else {
        Err(Error::NonFiniteIntermediate { node })
    }
}

impl<T: Scalar> SlpProgram<T> {
    fn check_input(&self, x: &[T]) -> Result<()> {
        if x.len() != self.num_vars {
            return Err(Error::Dimension(format!("expected {} inputs, got {}", self.num_vars, x.len())));
        }
        for (i, v) in x.iter().enumerate() {
            check_finite(v, i + 1)?;
        }
        Ok(())
    }

    fn forward<C: Counter>(&self, x: &[T], counter: &mut C) -> Result<EvalTape<T>> {
        self.check_input(x)?;
        let mut values = Vec::with_capacity(self.total_ids());
        values.push(T::one());
        values.extend_from_slice(x);
        for node in &self.nodes {
            let [a, b] = node.inputs;
            let raw = match node.op {
                Op::Add => values[a].clone() + values[b].clone(),
                Op::Sub => values[a].clone() - values[b].clone(),
                Op::Mul => values[a].clone() * values[b].clone(),
                Op::Pow => {
                    let v = powi(&values[a], b as u32, counter);
                    counter.scalar(1);
                    values.push(node.coef.clone() * v);
                    check_finite(&values[node.id], node.id)?;
                    continue;
                }
            };
            counter.scalar(2);
            let v = node.coef.clone() * raw;
            check_finite(&v, node.id)?;
            values.push(v);
        }
        Ok(EvalTape { values, num_vars: self.num_vars })
    }

    /// Value at `x` together with the tape of all intermediate values.
    pub fn eval(&self, x: &[T]) -> Result<(T, EvalTape<T>)> {
        let tape = self.forward(x, &mut ())?;
        Ok((tape.values[self.output].clone(), tape))
    }

    pub fn value(&self, x: &[T]) -> Result<T> {
        Ok(self.eval(x)?.0)
    }

    fn check_tape(&self, tape: &EvalTape<T>) -> Result<()> {
        if tape.values.len() != self.total_ids() || tape.num_vars != self.num_vars {
            return Err(Error::Dimension("tape does not belong to this program".into()));
        }
        Ok(())
    }

    fn reverse<C: Counter>(&self, tape: &EvalTape<T>, counter: &mut C) -> Result<Vec<T>> {
        self.check_tape(tape)?;
        let f = &tape.values;
        let mut adj = vec![T::zero(); self.total_ids()];
        adj[self.output] = T::one();
        for node in self.nodes.iter().rev() {
            let delta = adj[node.id].clone();
            check_finite(&delta, node.id)?;
            let t = node.coef.clone() * delta;
            counter.scalar(1);
            let [u, v] = node.inputs;
            match node.op {
                Op::Add => {
                    adj[u] = adj[u].clone() + t.clone();
                    adj[v] = adj[v].clone() + t;
                    counter.scalar(2);
                }
                Op::Sub => {
                    adj[u] = adj[u].clone() + t.clone();
                    adj[v] = adj[v].clone() - t;
                    counter.scalar(2);
                }
                Op::Mul => {
                    let du = t.clone() * f[v].clone();
                    let dv = t * f[u].clone();
                    adj[u] = adj[u].clone() + du;
                    adj[v] = adj[v].clone() + dv;
                    counter.scalar(4);
                }
                Op::Pow => {
                    let p = v as u32;
                    let dp = if p == 1 { T::one() } else { powi(&f[u], p - 1, counter) };
                    adj[u] = adj[u].clone() + t * T::from_usize(p as usize) * dp;
                    counter.scalar(3);
                }
            }
        }
        let grad = adj[1..=self.num_vars].to_vec();
        for (i, g) in grad.iter().enumerate() {
            check_finite(g, i + 1)?;
        }
        Ok(grad)
    }

    /// Reverse-mode gradient using a precomputed tape.
    pub fn gradient_with_tape(&self, tape: &EvalTape<T>) -> Result<Vec<T>> {
        self.reverse(tape, &mut ())
    }

    pub fn gradient(&self, x: &[T]) -> Result<Vec<T>> {
        let tape = self.forward(x, &mut ())?;
        self.reverse(&tape, &mut ())
    }

    /// Gradient with operation counts for the forward and reverse sweeps.
    pub fn gradient_counted(&self, x: &[T]) -> Result<(Vec<T>, OpCount, OpCount)> {
        let mut fwd = OpCount::default();
        let mut rev = OpCount::default();
        let tape = self.forward(x, &mut fwd)?;
        let g = self.reverse(&tape, &mut rev)?;
        Ok((g, fwd, rev))
    }

    fn forward_table<C: Counter>(&self, tape: &EvalTape<T>, counter: &mut C) -> Result<ForwardGradientTable<T>> {
        self.check_tape(tape)?;
        let m = self.num_vars;
        let f = &tape.values;
        let mut rows = vec![T::zero(); self.total_ids() * m];
        for i in 0..m {
            rows[(i + 1) * m + i] = T::one();
        }
        for node in &self.nodes {
            let k = node.id;
            let [u, v] = node.inputs;
            let (head, tail) = rows.split_at_mut(k * m);
            let out = &mut tail[..m];
            let gu = &head[u * m..(u + 1) * m];
            let alpha = &node.coef;
            match node.op {
                Op::Add | Op::Sub => {
                    let gv = &head[v * m..(v + 1) * m];
                    for j in 0..m {
                        let s = if node.op == Op::Add {
                            gu[j].clone() + gv[j].clone()
                        } else {
                            gu[j].clone() - gv[j].clone()
                        };
                        out[j] = alpha.clone() * s;
                    }
                }
                Op::Mul => {
                    let gv = &head[v * m..(v + 1) * m];
                    let a = alpha.clone() * f[v].clone();
                    let b = alpha.clone() * f[u].clone();
                    for j in 0..m {
                        out[j] = a.clone() * gu[j].clone() + b.clone() * gv[j].clone();
                    }
                }
                Op::Pow => {
                    let p = v as u32;
                    let dp = if p == 1 { T::one() } else { powi(&f[u], p - 1, &mut ()) };
                    let c = alpha.clone() * T::from_usize(p as usize) * dp;
                    for j in 0..m {
                        out[j] = c.clone() * gu[j].clone();
                    }
                }
            }
            counter.rows(1);
            for o in out.iter() {
                check_finite(o, k)?;
            }
        }
        Ok(ForwardGradientTable { rows, width: m })
    }

    /// Forward-mode gradients of all intermediate values.
    pub fn forward_gradients(&self, tape: &EvalTape<T>) -> Result<ForwardGradientTable<T>> {
        self.forward_table(tape, &mut ())
    }

    /// Reverse sweep carrying scalar adjoints and their gradients (width-`m` rows)
    /// simultaneously; the rows of the inputs form the Hessian.
    fn batched_reverse<C: Counter>(
        &self,
        tape: &EvalTape<T>,
        table: &ForwardGradientTable<T>,
        counter: &mut C,
    ) -> Result<DMatrix<T>> {
        let m = self.num_vars;
        let f = &tape.values;
        let g = |id: usize| table.row(id);
        let mut adj = vec![T::zero(); self.total_ids()];
        let mut dadj = vec![T::zero(); self.total_ids() * m];
        adj[self.output] = T::one();
        for node in self.nodes.iter().rev() {
            let k = node.id;
            let delta = adj[k].clone();
            check_finite(&delta, k)?;
            let [u, v] = node.inputs;
            let alpha = node.coef.clone();
            let (head, tail) = dadj.split_at_mut(k * m);
            let dk = &tail[..m];
            match node.op {
                Op::Add | Op::Sub => {
                    let sign_v = if node.op == Op::Add { alpha.clone() } else { -alpha.clone() };
                    adj[u] = adj[u].clone() + alpha.clone() * delta.clone();
                    adj[v] = adj[v].clone() + sign_v.clone() * delta;
                    for j in 0..m {
                        head[u * m + j] = head[u * m + j].clone() + alpha.clone() * dk[j].clone();
                    }
                    for j in 0..m {
                        head[v * m + j] = head[v * m + j].clone() + sign_v.clone() * dk[j].clone();
                    }
                    counter.rows(2);
                }
                Op::Mul => {
                    let t = alpha.clone() * delta;
                    adj[u] = adj[u].clone() + t.clone() * f[v].clone();
                    adj[v] = adj[v].clone() + t.clone() * f[u].clone();
                    let av = alpha.clone() * f[v].clone();
                    let au = alpha.clone() * f[u].clone();
                    let (gu, gv) = (g(u), g(v));
                    for j in 0..m {
                        head[u * m + j] = head[u * m + j].clone() + av.clone() * dk[j].clone() + t.clone() * gv[j].clone();
                    }
                    for j in 0..m {
                        head[v * m + j] = head[v * m + j].clone() + au.clone() * dk[j].clone() + t.clone() * gu[j].clone();
                    }
                    counter.rows(2);
                }
                Op::Pow => {
                    let p = v as u32;
                    let pf = T::from_usize(p as usize);
                    let (d1, d2) = match p {
                        1 => (T::one(), T::zero()),
                        2 => (f[u].clone(), T::one()),
                        _ => {
                            let lower = powi(&f[u], p - 2, &mut ());
                            (lower.clone() * f[u].clone(), lower)
                        }
                    };
                    let c1 = alpha.clone() * pf.clone() * d1;
                    let c2 = alpha * pf * T::from_usize(p as usize - 1) * d2 * delta.clone();
                    adj[u] = adj[u].clone() + c1.clone() * delta;
                    let gu = g(u);
                    for j in 0..m {
                        head[u * m + j] = head[u * m + j].clone() + c1.clone() * dk[j].clone() + c2.clone() * gu[j].clone();
                    }
                    counter.rows(1);
                }
            }
        }
        let two = T::from_usize(2);
        let mut h = DMatrix::from_fn(m, m, |i, j| dadj[(i + 1) * m + j].clone());
        for i in 0..m {
            for j in (i + 1)..m {
                let s = (h[(i, j)].clone() + h[(j, i)].clone()) / two.clone();
                h[(i, j)] = s.clone();
                h[(j, i)] = s;
            }
        }
        for (idx, v) in h.iter().enumerate() {
            check_finite(v, idx / m.max(1) + 1)?;
        }
        Ok(h)
    }

    /// Symmetric Hessian from one forward-mode sweep and one batched reverse sweep.
    pub fn hessian_with_tape(&self, tape: &EvalTape<T>) -> Result<DMatrix<T>> {
        let table = self.forward_table(tape, &mut ())?;
        self.batched_reverse(tape, &table, &mut ())
    }

    pub fn hessian(&self, x: &[T]) -> Result<DMatrix<T>> {
        let tape = self.forward(x, &mut ())?;
        self.hessian_with_tape(&tape)
    }

    /// Hessian with the count of width-`m` row passes (forward table plus reverse sweep).
    pub fn hessian_counted(&self, x: &[T]) -> Result<(DMatrix<T>, OpCount)> {
        let mut count = OpCount::default();
        let tape = self.forward(x, &mut ())?;
        let table = self.forward_table(&tape, &mut count)?;
        let h = self.batched_reverse(&tape, &table, &mut count)?;
        Ok((h, count))
    }

    /// Value, gradient and Hessian from one shared tape.
    pub fn value_gradient_hessian(&self, x: &[T]) -> Result<(T, Vec<T>, DMatrix<T>)> {
        let tape = self.forward(x, &mut ())?;
        let g = self.reverse(&tape, &mut ())?;
        let h = self.hessian_with_tape(&tape)?;
        Ok((tape.values[self.output].clone(), g, h))
    }
}
