//! Constructors for hyperbolic polynomial families as straight-line programs.

use crate::error::{Error, Result};
use crate::monomial::{Monomial, MonomialPoly};
use crate::scalar::Scalar;
use crate::slp::{Op, SlpBuilder, SlpProgram};

/// Sizes of the dynamic-programming table behind an ESP program.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EspStats {
    /// Populated cells `(i, k')`.
    pub cells: usize,
    /// Cells with `k' >= 2`; each owns one multiplication node.
    pub mul_nodes: usize,
    /// Cells with `k' < i`; each owns one addition node.
    pub add_nodes: usize,
}

/// Emits `e_k` of the values at `inputs` into `b`, returning the output id.
///
/// Column `i` only fills rows that can still reach `e_k` after the remaining
/// `n - i` columns, so no node is created that the output does not use.
fn esp_into<T: Scalar>(b: &mut SlpBuilder<T>, inputs: &[usize], k: usize) -> (usize, EspStats) {
    let n = inputs.len();
    let mut stats = EspStats::default();
    let mut prev: Vec<Option<usize>> = vec![None; k + 1];
    prev[0] = Some(SlpBuilder::<T>::ONE);
    for i in 1..=n {
        let xi = inputs[i - 1];
        let lo = 1.max(k.saturating_sub(n - i));
        let hi = k.min(i);
        let mut cur: Vec<Option<usize>> = vec![None; k + 1];
        cur[0] = Some(SlpBuilder::<T>::ONE);
        for kk in lo..=hi {
            stats.cells += 1;
            let term = if kk == 1 {
                xi
            } else {
                stats.mul_nodes += 1;
                let lower = prev[kk - 1].expect("reachable cell");
                b.mul(xi, lower)
            };
            let value = if kk < i {
                stats.add_nodes += 1;
                let same = prev[kk].expect("reachable cell");
                b.add(same, term)
            } else {
                term
            };
            cur[kk] = Some(value);
        }
        prev = cur;
    }
    (prev[k].expect("e_k populated"), stats)
}

/// Elementary symmetric polynomial `e_k` in `n` variables.
pub fn esp<T: Scalar>(n: usize, k: usize) -> Result<SlpProgram<T>> {
    esp_with_stats(n, k).map(|(p, _)| p)
}

pub fn esp_with_stats<T: Scalar>(n: usize, k: usize) -> Result<(SlpProgram<T>, EspStats)> {
    if k < 1 || k > n {
        return Err(Error::InvalidParams(format!("esp needs 1 <= k <= n (got n={n}, k={k})")));
    }
    let mut b = SlpBuilder::new(n);
    let inputs: Vec<usize> = (0..n).map(|i| b.var(i)).collect();
    let (out, stats) = esp_into(&mut b, &inputs, k);
    Ok((b.finish(out)?, stats))
}

/// Basis generating polynomial of the Vamos matroid: `e_4` of eight variables
/// minus the five circuit-hyperplanes built from the pairs
/// `{1,2}, {3,4}, {5,6}, {7,8}`.
pub fn vamos<T: Scalar>() -> SlpProgram<T> {
    const EXCLUDED: [[usize; 4]; 5] = [[1, 2, 3, 4], [1, 2, 5, 6], [1, 2, 7, 8], [3, 4, 5, 6], [5, 6, 7, 8]];
    let mut b = SlpBuilder::new(8);
    let inputs: Vec<usize> = (0..8).map(|i| b.var(i)).collect();
    let (e4, _) = esp_into(&mut b, &inputs, 4);
    let mut acc = e4;
    for set in EXCLUDED {
        let p01 = b.mul(set[0], set[1]);
        let p012 = b.mul(p01, set[2]);
        let quartic = b.mul(p012, set[3]);
        acc = b.sub(acc, quartic);
    }
    b.finish(acc).expect("well-formed")
}

/// Vamos-like basis generating polynomial on `2m` variables:
/// `e_4 - sum_{k=2..m} y_1 y_k - sum_{k=2..m-1} y_k y_{k+1}` with `y_k = x_{2k-1} x_{2k}`.
pub fn vamos_like<T: Scalar>(m: usize) -> Result<SlpProgram<T>> {
    if m < 4 {
        return Err(Error::InvalidParams(format!("vamos_like needs m >= 4 (got {m})")));
    }
    let mut b = SlpBuilder::new(2 * m);
    let inputs: Vec<usize> = (0..2 * m).map(|i| b.var(i)).collect();
    let (e4, _) = esp_into(&mut b, &inputs, 4);
    let y: Vec<usize> = (0..m).map(|k| b.mul(inputs[2 * k], inputs[2 * k + 1])).collect();
    let mut corr = b.mul(y[0], y[1]);
    for k in 2..m {
        let t = b.mul(y[0], y[k]);
        corr = b.add(corr, t);
    }
    for k in 1..m - 1 {
        let t = b.mul(y[k], y[k + 1]);
        corr = b.add(corr, t);
    }
    let out = b.sub(e4, corr);
    b.finish(out)
}

/// Row-major `l x m` matrix; row `j` holds the coefficients of linear form `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearFormMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> LinearFormMatrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let cols = rows.first().map(Vec::len).unwrap_or(0);
        if rows.is_empty() || cols == 0 {
            return Err(Error::InvalidParams("linear form matrix must be non-empty".into()));
        }
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged linear form matrix".into()));
        }
        Ok(LinearFormMatrix { rows: rows.len(), cols, data: rows.into_iter().flatten().collect() })
    }

    pub fn identity(m: usize) -> Self {
        let rows = (0..m)
            .map(|i| (0..m).map(|j| if i == j { T::one() } else { T::zero() }).collect())
            .collect();
        Self::from_rows(rows).expect("non-empty")
    }

    pub fn num_forms(&self) -> usize {
        self.rows
    }

    pub fn num_vars(&self) -> usize {
        self.cols
    }

    pub fn row(&self, j: usize) -> &[T] {
        &self.data[j * self.cols..(j + 1) * self.cols]
    }

    /// Value of form `j` at `x`.
    pub fn apply(&self, j: usize, x: &[T]) -> T {
        self.row(j).iter().zip(x).fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }

    fn check_rows(&self) -> Result<()> {
        for j in 0..self.rows {
            if self.row(j).iter().all(|c| c.is_zero()) {
                return Err(Error::ZeroRow(j));
            }
        }
        Ok(())
    }
}

/// `sum_i scale * coefs[i] * x_i` from scaled-variable nodes and chained additions.
fn linear_form_into<T: Scalar>(b: &mut SlpBuilder<T>, coefs: &[T], scale: &T) -> usize {
    let mut acc: Option<usize> = None;
    for (i, c) in coefs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let c = c.clone() * scale.clone();
        let v = b.var(i);
        let term = if c == T::one() { v } else { b.scale(v, c) };
        acc = Some(match acc {
            None => term,
            Some(a) => b.add(a, term),
        });
    }
    acc.expect("row checked non-zero")
}

/// Product of the linear forms given by the rows of `forms`.
pub fn product_of_linear_forms<T: Scalar>(forms: &LinearFormMatrix<T>) -> Result<SlpProgram<T>> {
    forms.check_rows()?;
    let mut b = SlpBuilder::new(forms.num_vars());
    let mut acc: Option<usize> = None;
    for j in 0..forms.num_forms() {
        let l = linear_form_into(&mut b, forms.row(j), &T::one());
        acc = Some(match acc {
            None => l,
            Some(a) => b.mul(a, l),
        });
    }
    b.finish(acc.expect("at least one form"))
}

/// `e_k(l_1(x)/l_1(e), ..., l_L(x)/l_L(e))`, hyperbolic in direction `e`.
pub fn compose_esp_with_linear_forms<T: Scalar>(
    k: usize,
    forms: &LinearFormMatrix<T>,
    e: &[T],
) -> Result<SlpProgram<T>> {
    let l = forms.num_forms();
    if k < 1 || k > l {
        return Err(Error::InvalidParams(format!("need 1 <= k <= number of forms (k={k}, forms={l})")));
    }
    if e.len() != forms.num_vars() {
        return Err(Error::Dimension(format!("direction has length {}, forms have {} variables", e.len(), forms.num_vars())));
    }
    forms.check_rows()?;
    let mut b = SlpBuilder::new(forms.num_vars());
    let mut inputs = Vec::with_capacity(l);
    for j in 0..l {
        let at_e = forms.apply(j, e);
        let size: f64 = forms
            .row(j)
            .iter()
            .zip(e)
            .map(|(a, b)| (a.to_f64_lossy() * b.to_f64_lossy()).abs())
            .sum();
        if at_e.is_zero() || at_e.to_f64_lossy().abs() <= 1e-14 * size {
            return Err(Error::VanishingOnDirection(j));
        }
        let scale = T::one() / at_e;
        inputs.push(linear_form_into(&mut b, forms.row(j), &scale));
    }
    let (out, _) = esp_into(&mut b, &inputs, k);
    b.finish(out)
}

#[derive(Clone, Debug)]
enum Tangent<T> {
    Zero,
    Const(T),
    Node(usize),
}

struct TangentBuilder<T> {
    b: SlpBuilder<T>,
}

impl<T: Scalar> TangentBuilder<T> {
    fn as_node(&mut self, t: &Tangent<T>) -> Option<usize> {
        match t {
            Tangent::Zero => None,
            Tangent::Const(c) => Some(self.b.constant(c.clone())),
            Tangent::Node(id) => Some(*id),
        }
    }

    /// `ca * a + cb * b`.
    fn combine(&mut self, a: &Tangent<T>, ca: T, b: &Tangent<T>, cb: T) -> Tangent<T> {
        use Tangent::*;
        match (a, b) {
            (Zero, Zero) => Zero,
            (Const(x), Const(y)) => {
                let v = ca * x.clone() + cb * y.clone();
                if v.is_zero() {
                    Zero
                } else {
                    Const(v)
                }
            }
            (Zero, Const(y)) => Const(cb * y.clone()),
            (Const(x), Zero) => Const(ca * x.clone()),
            (Node(x), Zero) => self.scaled(*x, ca),
            (Zero, Node(y)) => self.scaled(*y, cb),
            _ => {
                let x = self.as_node(a).expect("non-zero");
                let y = self.as_node(b).expect("non-zero");
                if ca == cb {
                    Node(self.b.push(Op::Add, x, y, ca))
                } else if ca == -cb.clone() {
                    Node(self.b.push(Op::Sub, x, y, ca))
                } else {
                    let sx = self.b.scale(x, ca);
                    let sy = self.b.scale(y, cb);
                    Node(self.b.add(sx, sy))
                }
            }
        }
    }

    fn scaled(&mut self, id: usize, c: T) -> Tangent<T> {
        if c == T::one() {
            Tangent::Node(id)
        } else {
            Tangent::Node(self.b.scale(id, c))
        }
    }

    /// `coef * t * value(id)`.
    fn times_value(&mut self, t: &Tangent<T>, id: usize, coef: T) -> Tangent<T> {
        match t {
            Tangent::Zero => Tangent::Zero,
            Tangent::Const(c) if id == SlpBuilder::<T>::ONE => Tangent::Const(coef * c.clone()),
            Tangent::Const(c) => Tangent::Node(self.b.scale(id, coef * c.clone())),
            Tangent::Node(a) => Tangent::Node(self.b.push(Op::Mul, *a, id, coef)),
        }
    }
}

/// Directional derivative `Dp(x)[e]` as a new program, emitted by forward-mode
/// tangent propagation with input tangents `e`.
pub fn directional_derivative<T: Scalar>(program: &SlpProgram<T>, e: &[T]) -> Result<SlpProgram<T>> {
    let m = program.num_vars();
    if e.len() != m {
        return Err(Error::Dimension(format!("direction has length {}, program has {m} inputs", e.len())));
    }
    let (deg, homogeneous) = program.degree();
    if !homogeneous {
        return Err(Error::NotHomogeneous);
    }
    if deg < 2 {
        return Err(Error::DegreeTooLow(deg));
    }
    let mut tb = TangentBuilder { b: SlpBuilder::new(m) };
    for node in program.nodes() {
        tb.b.push(node.op, node.inputs[0], node.inputs[1], node.coef.clone());
    }
    let mut tangent: Vec<Tangent<T>> = Vec::with_capacity(program.total_ids());
    tangent.push(Tangent::Zero);
    for ei in e {
        tangent.push(if ei.is_zero() { Tangent::Zero } else { Tangent::Const(ei.clone()) });
    }
    for node in program.nodes() {
        let [u, v] = node.inputs;
        let alpha = node.coef.clone();
        let t = match node.op {
            Op::Add => {
                let (tu, tv) = (tangent[u].clone(), tangent[v].clone());
                tb.combine(&tu, alpha.clone(), &tv, alpha)
            }
            Op::Sub => {
                let (tu, tv) = (tangent[u].clone(), tangent[v].clone());
                tb.combine(&tu, alpha.clone(), &tv, -alpha)
            }
            Op::Mul => {
                let (tu, tv) = (tangent[u].clone(), tangent[v].clone());
                let left = tb.times_value(&tu, v, alpha.clone());
                let right = tb.times_value(&tv, u, alpha);
                tb.combine(&left, T::one(), &right, T::one())
            }
            Op::Pow => {
                let p = v as u32;
                let tu = tangent[u].clone();
                match p {
                    1 => tb.combine(&tu, alpha, &Tangent::Zero, T::zero()),
                    2 => tb.times_value(&tu, u, alpha * T::from_usize(2)),
                    _ => {
                        let w = tb.b.pow(u, p - 1, alpha * T::from_usize(p as usize));
                        tb.times_value(&tu, w, T::one())
                    }
                }
            }
        };
        tangent.push(t);
    }
    let out = match &tangent[program.output()] {
        Tangent::Zero => tb.b.constant(T::zero()),
        other => {
            let o = other.clone();
            tb.as_node(&o).expect("non-zero")
        }
    };
    tb.b.finish(out)
}

/// Undirected multigraph whose edges are the polynomial's variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

impl SimpleGraph {
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if edges.iter().any(|&(a, b)| a >= vertices || b >= vertices) {
            return Err(Error::InvalidParams("edge endpoint out of range".into()));
        }
        Ok(SimpleGraph { vertices, edges })
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect();
        SimpleGraph { vertices: n, edges }
    }

    fn connected_with(&self, allowed: impl Fn(usize) -> bool) -> bool {
        if self.vertices == 0 {
            return true;
        }
        let mut dsu = Dsu::new(self.vertices);
        for (idx, &(a, b)) in self.edges.iter().enumerate() {
            if allowed(idx) {
                dsu.union(a, b);
            }
        }
        let root = dsu.find(0);
        (1..self.vertices).all(|v| dsu.find(v) == root)
    }

    pub fn is_connected(&self) -> bool {
        self.connected_with(|_| true)
    }
}

#[derive(Clone)]
struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect() }
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

pub const MAX_SPANNING_TREE_EDGES: usize = 24;

/// Spanning-tree generating polynomial `sum_T prod_{e in T} x_e`.
pub fn spanning_tree_poly<T: Scalar>(g: &SimpleGraph) -> Result<MonomialPoly<T>> {
    if g.vertices < 2 || g.edges.is_empty() {
        return Err(Error::InvalidParams("graph needs at least two vertices and one edge".into()));
    }
    if g.edges.len() > MAX_SPANNING_TREE_EDGES {
        return Err(Error::TooLarge(format!("{} edges (limit {MAX_SPANNING_TREE_EDGES})", g.edges.len())));
    }
    if !g.is_connected() {
        return Err(Error::DisconnectedGraph);
    }
    let mut trees: Vec<Vec<usize>> = Vec::new();
    let mut chosen = Vec::new();
    let mut excluded = vec![false; g.edges.len()];
    enumerate_trees(g, 0, &mut chosen, &mut excluded, Dsu::new(g.vertices), &mut trees);
    let m = g.edges.len();
    let terms = trees
        .into_iter()
        .map(|tree| {
            let mut exponents = vec![0u32; m];
            for e in tree {
                exponents[e] = 1;
            }
            Monomial { exponents, coef: T::one() }
        })
        .collect();
    MonomialPoly::new(m, terms)
}

fn enumerate_trees(
    g: &SimpleGraph,
    idx: usize,
    chosen: &mut Vec<usize>,
    excluded: &mut Vec<bool>,
    dsu: Dsu,
    out: &mut Vec<Vec<usize>>,
) {
    if chosen.len() == g.vertices - 1 {
        out.push(chosen.clone());
        return;
    }
    if idx == g.edges.len() || g.edges.len() - idx < g.vertices - 1 - chosen.len() {
        return;
    }
    let (a, b) = g.edges[idx];
    let mut with = dsu.clone();
    if with.union(a, b) {
        chosen.push(idx);
        enumerate_trees(g, idx + 1, chosen, excluded, with, out);
        chosen.pop();
    }
    excluded[idx] = true;
    if g.connected_with(|e| !excluded[e]) {
        enumerate_trees(g, idx + 1, chosen, excluded, dsu, out);
    }
    excluded[idx] = false;
}

/// Lorentz form `x_1^2 - x_2^2 - ... - x_m^2`, hyperbolic in direction `e_1`.
pub fn lorentz<T: Scalar>(m: usize) -> Result<SlpProgram<T>> {
    if m < 2 {
        return Err(Error::InvalidParams(format!("lorentz needs m >= 2 (got {m})")));
    }
    let mut b = SlpBuilder::new(m);
    let x0 = b.var(0);
    let mut acc = b.mul(x0, x0);
    for i in 1..m {
        let xi = b.var(i);
        let sq = b.push(Op::Mul, xi, xi, -T::one());
        acc = b.add(acc, sq);
    }
    b.finish(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;
    use num_rational::BigRational;
    use num_traits::{FromPrimitive, ToPrimitive};

    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        if n < k {
            return vec![];
        }
        let mut out = subsets(n - 1, k);
        for mut s in subsets(n - 1, k - 1) {
            s.push(n - 1);
            out.push(s);
        }
        out
    }

    fn esp_oracle(x: &[f64], k: usize) -> f64 {
        subsets(x.len(), k).iter().map(|s| s.iter().map(|&i| x[i]).product::<f64>()).sum()
    }

    fn sample(n: usize, seed: u64) -> Vec<f64> {
        (0..n).map(|i| (((i as u64 * 7919 + seed * 104729) % 1000) as f64) / 500.0 - 0.9).collect()
    }

    #[test]
    fn esp_matches_subset_enumeration() {
        for n in 1..=8 {
            for k in 1..=n {
                let p: SlpProgram<f64> = esp(n, k).unwrap();
                let x = sample(n, (n * 10 + k) as u64);
                let want = esp_oracle(&x, k);
                assert!((p.value(&x).unwrap() - want).abs() <= 1e-12 * (1.0 + want.abs()), "n={n} k={k}");
                let (deg, hom) = p.degree();
                assert_eq!((deg, hom), (k as u32, true));
            }
        }
    }

    #[test]
    fn esp_exact_binomial() {
        let p: SlpProgram<BigRational> = esp(20, 5).unwrap();
        let ones = vec![BigRational::from_u32(1).unwrap(); 20];
        assert_eq!(p.value(&ones).unwrap(), BigRational::from_u32(15504).unwrap());
    }

    #[test]
    fn esp_table_counts() {
        for (n, k) in [(5, 2), (10, 3), (30, 30), (50, 1), (100, 10)] {
            let (p, st) = esp_with_stats::<f64>(n, k).unwrap();
            assert_eq!(st.mul_nodes + st.add_nodes, p.node_count());
            assert_eq!(st.cells, st.mul_nodes + (n - k + 1));
            assert_eq!(st.mul_nodes - (k - 1), st.add_nodes - (n - k));
            assert!(p.node_count() <= 2 * n * k);
        }
    }

    #[test]
    fn esp_rejects_bad_params() {
        assert!(matches!(esp::<f64>(3, 0), Err(Error::InvalidParams(_))));
        assert!(matches!(esp::<f64>(3, 4), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn lorentz_matches_closed_form() {
        let p = lorentz::<f64>(4).unwrap();
        assert_eq!(p.value(&[3.0, 1.0, 2.0, 0.5]).unwrap(), 9.0 - 1.0 - 4.0 - 0.25);
        assert_eq!(lorentz::<f64>(3).unwrap().value(&[2.0, 1.0, 1.0]).unwrap(), 2.0);
        assert!(lorentz::<f64>(1).is_err());
    }

    #[test]
    fn vamos_values() {
        let p: SlpProgram<BigRational> = vamos();
        let ones = vec![BigRational::from_u32(1).unwrap(); 8];
        assert_eq!(p.value(&ones).unwrap(), BigRational::from_u32(65).unwrap());
        let g = p.gradient(&ones).unwrap();
        // x7 lies in circuit-hyperplanes {1,2,7,8} and {5,6,7,8}.
        assert_eq!(g[6], BigRational::from_u32(33).unwrap());
        assert_eq!(g[0], BigRational::from_u32(32).unwrap());
    }

    #[test]
    fn vamos_like_four_is_vamos() {
        let a: SlpProgram<f64> = vamos();
        let b: SlpProgram<f64> = vamos_like(4).unwrap();
        for seed in 0..5 {
            let x = sample(8, seed);
            assert!((a.value(&x).unwrap() - b.value(&x).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn vamos_like_monomial_count() {
        let p: SlpProgram<f64> = vamos_like(10).unwrap();
        let ones = vec![1.0; 20];
        assert_eq!(p.value(&ones).unwrap(), 4845.0 - 17.0);
        assert!(matches!(vamos_like::<f64>(3), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn product_of_forms_matches_direct() {
        let rows = vec![vec![1.0, 2.0, 0.0], vec![0.0, -1.0, 3.0], vec![0.5, 0.5, 0.5]];
        let forms = LinearFormMatrix::from_rows(rows).unwrap();
        let p = product_of_linear_forms(&forms).unwrap();
        let x = [0.3, -1.2, 2.0];
        let want: f64 = (0..3).map(|j| forms.apply(j, &x)).product();
        assert!((p.value(&x).unwrap() - want).abs() < 1e-12);
        let z = LinearFormMatrix::from_rows(vec![vec![1.0, 0.0], vec![0.0, 0.0]]).unwrap();
        assert_eq!(product_of_linear_forms(&z).unwrap_err(), Error::ZeroRow(1));
    }

    #[test]
    fn directional_derivative_matches_gradient() {
        let programs: Vec<SlpProgram<f64>> =
            vec![esp(6, 3).unwrap(), vamos(), crate::slp::lorentz_example(), {
                let poly = MonomialPoly::from_rows(2, &[vec![3.0, 0.0, 1.0], vec![1.0, 2.0, -2.0]]).unwrap();
                poly.to_slp().unwrap()
            }];
        for p in programs {
            let m = p.num_vars();
            let e: Vec<f64> = (0..m).map(|i| if i % 3 == 1 { 0.0 } else { 1.0 + 0.25 * i as f64 }).collect();
            let d = directional_derivative(&p, &e).unwrap();
            let (deg, hom) = p.degree();
            assert_eq!(d.degree(), (deg - 1, hom));
            for seed in 0..4 {
                let x = sample(m, seed);
                let g = p.gradient(&x).unwrap();
                let want: f64 = g.iter().zip(&e).map(|(a, b)| a * b).sum();
                let got = d.value(&x).unwrap();
                assert!((got - want).abs() <= 1e-10 * (1.0 + want.abs()), "{got} vs {want}");
            }
            assert!(d.node_count() <= 5 * p.node_count() + m + 1);
        }
    }

    #[test]
    fn directional_derivative_preconditions() {
        let lin = {
            let mut b = SlpBuilder::<f64>::new(2);
            let s = b.add(1, 2);
            b.finish(s).unwrap()
        };
        assert_eq!(directional_derivative(&lin, &[1.0, 1.0]).unwrap_err(), Error::DegreeTooLow(1));
        let het = MonomialPoly::from_rows(2, &[vec![2.0, 0.0, 1.0], vec![1.0, 0.0, 1.0]]).unwrap().to_slp().unwrap();
        assert_eq!(directional_derivative(&het, &[1.0, 1.0]).unwrap_err(), Error::NotHomogeneous);
    }

    #[test]
    fn composition_matches_direct() {
        let rows = vec![vec![1.0, 0.5, -0.2], vec![0.3, 1.0, 0.0], vec![-0.4, 0.2, 1.0], vec![1.0, 1.0, 1.0]];
        let forms = LinearFormMatrix::from_rows(rows).unwrap();
        let e = [1.0, 1.0, 1.0];
        let p = compose_esp_with_linear_forms(2, &forms, &e).unwrap();
        let x = [0.7, -0.1, 1.9];
        let ys: Vec<f64> = (0..4).map(|j| forms.apply(j, &x) / forms.apply(j, &e)).collect();
        assert!((p.value(&x).unwrap() - esp_oracle(&ys, 2)).abs() < 1e-12);
        assert!((p.value(&e).unwrap() - 6.0).abs() < 1e-12);
        let bad = LinearFormMatrix::from_rows(vec![vec![1.0, -1.0, 0.0], vec![1.0, 0.0, 0.0]]).unwrap();
        assert_eq!(compose_esp_with_linear_forms(1, &bad, &e).unwrap_err(), Error::VanishingOnDirection(0));
        assert!(matches!(compose_esp_with_linear_forms(5, &forms, &e), Err(Error::InvalidParams(_))));
    }

    fn kirchhoff(g: &SimpleGraph, w: &[f64]) -> f64 {
        let n = g.vertices;
        let mut l = DMatrix::<f64>::zeros(n, n);
        for (&(a, b), &we) in g.edges.iter().zip(w) {
            if a == b {
                continue;
            }
            l[(a, a)] += we;
            l[(b, b)] += we;
            l[(a, b)] -= we;
            l[(b, a)] -= we;
        }
        l.view((1, 1), (n - 1, n - 1)).into_owned().determinant()
    }

    #[test]
    fn spanning_trees_match_matrix_tree_theorem() {
        let graphs = vec![
            SimpleGraph::complete(4),
            SimpleGraph::complete(5),
            SimpleGraph::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (0, 1)]).unwrap(),
        ];
        for g in graphs {
            let p: MonomialPoly<f64> = spanning_tree_poly(&g).unwrap();
            let ones = vec![1.0; g.edges.len()];
            assert!((p.eval(&ones).unwrap() - kirchhoff(&g, &ones)).abs() < 1e-9);
            let w: Vec<f64> = (0..g.edges.len()).map(|i| 0.5 + 0.37 * i as f64).collect();
            assert!((p.eval(&w).unwrap() - kirchhoff(&g, &w)).abs() < 1e-9 * kirchhoff(&g, &w));
            assert_eq!(p.degree(), (g.vertices as u32 - 1, true));
        }
        assert_eq!(spanning_tree_poly::<f64>(&SimpleGraph::complete(4)).unwrap().len(), 16);
        assert_eq!(spanning_tree_poly::<f64>(&SimpleGraph::complete(5)).unwrap().len(), 125);
    }

    #[test]
    fn spanning_tree_errors() {
        let g = SimpleGraph::new(4, vec![(0, 1), (2, 3)]).unwrap();
        assert_eq!(spanning_tree_poly::<f64>(&g).unwrap_err(), Error::DisconnectedGraph);
        assert!(matches!(spanning_tree_poly::<f64>(&SimpleGraph::complete(8)), Err(Error::TooLarge(_))));
    }

    #[test]
    fn exact_rational_builders_agree_with_f64() {
        let p: SlpProgram<BigRational> = vamos_like(5).unwrap();
        let x: Vec<BigRational> = (1..=10).map(|i| BigRational::new(i.into(), 7.into())).collect();
        let exact = p.value(&x).unwrap().to_f64().unwrap();
        let xf: Vec<f64> = (1..=10).map(|i| i as f64 / 7.0).collect();
        let approx = vamos_like::<f64>(5).unwrap().value(&xf).unwrap();
        assert!((exact - approx).abs() < 1e-12 * exact.abs());
    }

    #[test]
    fn directional_derivative_examples() {
        let d = directional_derivative(&esp::<f64>(5, 3).unwrap(), &[1.0; 5]).unwrap();
        assert!((d.value(&[1.0; 5]).unwrap() - 30.0).abs() < 1e-12);
        let mut b = SlpBuilder::<f64>::new(2);
        let (x1, x2) = (b.var(0), b.var(1));
        let out = b.mul(x1, x2);
        let d = directional_derivative(&b.finish(out).unwrap(), &[1.0, 1.0]).unwrap();
        for x in [[0.3, -1.2], [2.0, 5.0]] {
            assert!((d.value(&x).unwrap() - (x[0] + x[1])).abs() < 1e-12);
        }
    }

    #[test]
    fn spanning_tree_small_graphs() {
        let triangle: MonomialPoly<f64> = spanning_tree_poly(&SimpleGraph::complete(3)).unwrap();
        assert_eq!(triangle.len(), 3);
        let path = SimpleGraph::new(4, vec![(0, 1), (1, 2), (1, 3)]).unwrap();
        let tree: MonomialPoly<f64> = spanning_tree_poly(&path).unwrap();
        assert_eq!(tree.len(), 1);
        assert_eq!(tree.terms()[0].exponents, vec![1, 1, 1]);
    }
}
