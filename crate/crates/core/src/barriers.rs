//! Block barriers and their direct sum.
//!
//! Every block is evaluated in its own coordinates `v = z + b`, where `b` is the
//! block's shift. The solver's domain is the direct sum of `S_j - b_j`.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cone::{BarrierEval, HyperbolicCone};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum BlockKind {
    Hb,
    Lp,
    Soc,
    Entr,
    Det,
}

impl BlockKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BlockKind::Hb => "HB",
            BlockKind::Lp => "LP",
            BlockKind::Soc => "SOC",
            BlockKind::Entr => "ENTR",
            BlockKind::Det => "DET",
        }
    }
}

/// Affine matrix pencil `M(v) = H_0 + sum_i v_i H_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct DetPencil {
    h0: DMatrix<f64>,
    hs: Vec<DMatrix<f64>>,
    interior: Vec<f64>,
    homogeneous: bool,
}

impl DetPencil {
    /// `h0 = None` gives the conic pencil. `interior` must make `M` positive definite.
    pub fn new(h0: Option<DMatrix<f64>>, hs: Vec<DMatrix<f64>>, interior: Vec<f64>) -> Result<Self> {
        let size = hs.first().map(|h| h.nrows()).ok_or_else(|| Error::InvalidParams("empty pencil".into()))?;
        let h0 = h0.unwrap_or_else(|| DMatrix::zeros(size, size));
        for h in std::iter::once(&h0).chain(&hs) {
            if h.nrows() != size || h.ncols() != size {
                return Err(Error::Dimension("pencil matrices must share one square size".into()));
            }
            if (h - h.transpose()).amax() > 1e-12 * (1.0 + h.amax()) {
                return Err(Error::InvalidParams("pencil matrices must be symmetric".into()));
            }
        }
        if interior.len() != hs.len() {
            return Err(Error::Dimension("interior point length differs from pencil size".into()));
        }
        let homogeneous = h0.iter().all(|&v| v == 0.0);
        let pencil = DetPencil { h0, hs, interior, homogeneous };
        if pencil.matrix(&pencil.interior, 1.0).cholesky().is_none() {
            return Err(Error::InvalidParams("pencil is not positive definite at the interior point".into()));
        }
        Ok(pencil)
    }

    pub fn size(&self) -> usize {
        self.h0.nrows()
    }

    pub fn h0(&self) -> &DMatrix<f64> {
        &self.h0
    }

    pub fn hs(&self) -> &[DMatrix<f64>] {
        &self.hs
    }

    pub fn interior(&self) -> &[f64] {
        &self.interior
    }

    /// `s H_0 + sum_i v_i H_i`.
    fn matrix(&self, v: &[f64], s: f64) -> DMatrix<f64> {
        let mut m = &self.h0 * s;
        for (h, &vi) in self.hs.iter().zip(v) {
            m += h * vi;
        }
        m
    }
}

/// One constraint block.
#[derive(Clone, Debug)]
pub enum Block {
    /// Hyperbolicity cone of an SLP polynomial.
    Hb(HyperbolicCone<f64>),
    /// Nonnegative orthant.
    Lp { dim: usize },
    /// `{(t, u) : t >= |u|}`.
    Soc { dim: usize },
    /// Pairs `(u, t)` with `t >= u ln u`, laid out `u_1, t_1, u_2, t_2, ...`.
    Entr { pairs: usize },
    /// `{v : H_0 + sum v_i H_i psd}`.
    Det(DetPencil),
}

impl Block {
    pub fn kind(&self) -> BlockKind {
        match self {
            Block::Hb(_) => BlockKind::Hb,
            Block::Lp { .. } => BlockKind::Lp,
            Block::Soc { .. } => BlockKind::Soc,
            Block::Entr { .. } => BlockKind::Entr,
            Block::Det(_) => BlockKind::Det,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Block::Hb(c) => c.dim(),
            Block::Lp { dim } | Block::Soc { dim } => *dim,
            Block::Entr { pairs } => 2 * pairs,
            Block::Det(p) => p.hs.len(),
        }
    }

    pub fn theta(&self) -> f64 {
        match self {
            Block::Hb(c) => c.degree() as f64,
            Block::Lp { dim } => *dim as f64,
            Block::Soc { .. } => 2.0,
            Block::Entr { pairs } => 2.0 * *pairs as f64,
            Block::Det(p) => p.size() as f64,
        }
    }

    /// Closed convex cone (as opposed to a general convex set).
    pub fn is_conic(&self) -> bool {
        match self {
            Block::Entr { .. } => false,
            Block::Det(p) => p.homogeneous,
            _ => true,
        }
    }

    pub fn interior_point(&self) -> Vec<f64> {
        match self {
            Block::Hb(c) => c.direction().to_vec(),
            Block::Lp { dim } => vec![1.0; *dim],
            Block::Soc { dim } => {
                let mut v = vec![0.0; *dim];
                v[0] = 1.0;
                v
            }
            Block::Entr { pairs } => vec![1.0; 2 * pairs],
            Block::Det(p) => p.interior.clone(),
        }
    }

    fn check_len(&self, v: &[f64]) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::Dimension(format!("{} block expects {} entries, got {}", self.kind().as_str(), self.dim(), v.len())));
        }
        Ok(())
    }

    /// Barrier value and derivatives at `v` (block coordinates).
    pub fn eval(&self, v: &[f64]) -> Result<BarrierEval<f64>> {
        self.check_len(v)?;
        match self {
            Block::Hb(c) => c.barrier_unchecked(v),
            Block::Lp { .. } => lp_barrier(v),
            Block::Soc { .. } => soc_barrier(v),
            Block::Entr { .. } => entr_barrier(v),
            Block::Det(p) => det_barrier(p, v),
        }
    }

    /// Full interior test. HB blocks use the eigenvalues relative to `anchor`,
    /// a known interior point; the rest their barrier domain.
    pub fn contains_interior(&self, v: &[f64], anchor: &[f64]) -> Result<bool> {
        self.check_len(v)?;
        self.check_len(anchor)?;
        match self {
            Block::Hb(c) => c.is_interior_from(v, anchor),
            _ => Ok(self.eval(v).is_ok()),
        }
    }

    /// Largest `alpha` with `(q + alpha dq) / (s + alpha ds)` still in the block
    /// interior, or `+inf`. Conic blocks ignore `s` and `ds`.
    pub fn max_step(&self, q: &[f64], dq: &[f64], s: f64, ds: f64) -> Result<f64> {
        self.check_len(q)?;
        self.check_len(dq)?;
        match self {
            Block::Hb(c) => c.max_step_to_boundary(q, dq),
            Block::Lp { .. } => Ok(q
                .iter()
                .zip(dq)
                .filter(|(_, &d)| d < 0.0)
                .map(|(&x, &d)| -x / d)
                .fold(f64::INFINITY, f64::min)),
            Block::Soc { .. } => Ok(soc_step(q, dq)),
            Block::Entr { .. } => Ok(entr_step(q, dq, s, ds)),
            Block::Det(p) => det_step(p, q, dq, s, ds),
        }
    }

    /// Support function `sup_{v in S} <y, v>` of the block set.
    pub fn support(&self, y: &[f64]) -> Result<f64> {
        self.check_len(y)?;
        match self {
            Block::Entr { .. } => {
                let mut total = 0.0;
                for pair in y.chunks(2) {
                    let (yu, yt) = (pair[0], pair[1]);
                    if yt < 0.0 {
                        total += -yt * (yu / -yt - 1.0).exp();
                    } else if yt == 0.0 && yu <= 0.0 {
                        continue;
                    } else {
                        return Err(Error::UnboundedSupport);
                    }
                }
                Ok(total)
            }
            Block::Det(p) if !p.homogeneous => Err(Error::UnboundedSupport),
            // The barrier keeps y in the negative dual cone, where the support is 0.
            _ => Ok(0.0),
        }
    }

    /// `delta*(y | S - b) = delta*(y | S) - <b, y>`.
    pub fn gap_contribution(&self, y: &[f64], shift: &[f64]) -> Result<f64> {
        let by: f64 = shift.iter().zip(y).map(|(a, b)| a * b).sum();
        Ok(self.support(y)? - by)
    }
}

pub fn lp_barrier(v: &[f64]) -> Result<BarrierEval<f64>> {
    if let Some(i) = v.iter().position(|&x| !(x > 0.0)) {
        return Err(Error::outside(None, format!("LP entry {i} is not positive")));
    }
    Ok(BarrierEval {
        value: -v.iter().map(|x| x.ln()).sum::<f64>(),
        gradient: DVector::from_iterator(v.len(), v.iter().map(|x| -1.0 / x)),
        hessian: DMatrix::from_diagonal(&DVector::from_iterator(v.len(), v.iter().map(|x| 1.0 / (x * x)))),
    })
}

pub fn soc_barrier(v: &[f64]) -> Result<BarrierEval<f64>> {
    let n = v.len();
    let t = v[0];
    let s = t * t - v[1..].iter().map(|u| u * u).sum::<f64>();
    if !(t > 0.0 && s > 0.0) {
        return Err(Error::outside(None, "SOC point not in the interior"));
    }
    let jv = DVector::from_iterator(n, v.iter().enumerate().map(|(i, &x)| if i == 0 { x } else { -x }));
    let mut j = DMatrix::identity(n, n) * -1.0;
    j[(0, 0)] = 1.0;
    Ok(BarrierEval {
        value: -s.ln(),
        gradient: &jv * (-2.0 / s),
        hessian: j * (-2.0 / s) + &jv * jv.transpose() * (4.0 / (s * s)),
    })
}

pub fn entr_barrier(v: &[f64]) -> Result<BarrierEval<f64>> {
    let n = v.len();
    let mut value = 0.0;
    let mut g = DVector::zeros(n);
    let mut h = DMatrix::zeros(n, n);
    for (p, pair) in v.chunks(2).enumerate() {
        let (u, t) = (pair[0], pair[1]);
        if !(u > 0.0) {
            return Err(Error::outside(None, format!("entropy pair {p}: u <= 0")));
        }
        let phi = t - u * u.ln();
        if !(phi > 0.0) {
            return Err(Error::outside(None, format!("entropy pair {p}: t <= u ln u")));
        }
        let phi_u = -(u.ln() + 1.0);
        let (iu, it) = (2 * p, 2 * p + 1);
        value += -phi.ln() - u.ln();
        g[iu] = -phi_u / phi - 1.0 / u;
        g[it] = -1.0 / phi;
        h[(iu, iu)] = phi_u * phi_u / (phi * phi) + 1.0 / (u * phi) + 1.0 / (u * u);
        h[(iu, it)] = phi_u / (phi * phi);
        h[(it, iu)] = h[(iu, it)];
        h[(it, it)] = 1.0 / (phi * phi);
    }
    Ok(BarrierEval { value, gradient: g, hessian: h })
}

pub fn det_barrier(p: &DetPencil, v: &[f64]) -> Result<BarrierEval<f64>> {
    let m = p.matrix(v, 1.0);
    let chol = m.cholesky().ok_or_else(|| Error::outside(None, "pencil not positive definite"))?;
    let l = chol.l();
    let value = -2.0 * l.diagonal().iter().map(|d| d.ln()).sum::<f64>();
    // W_i = L^{-1} H_i L^{-T}
    let ws: Vec<DMatrix<f64>> = p
        .hs
        .iter()
        .map(|h| {
            let a = l.solve_lower_triangular(h).expect("non-singular factor");
            l.solve_lower_triangular(&a.transpose()).expect("non-singular factor")
        })
        .collect();
    let k = ws.len();
    let gradient = DVector::from_iterator(k, ws.iter().map(|w| -w.trace()));
    let mut hessian = DMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..=i {
            let val = ws[i].dot(&ws[j]);
            hessian[(i, j)] = val;
            hessian[(j, i)] = val;
        }
    }
    Ok(BarrierEval { value, gradient, hessian })
}

/// First positive root of `(t + a dt)^2 - |u + a du|^2`.
fn soc_step(q: &[f64], dq: &[f64]) -> f64 {
    let qa = dq[0] * dq[0] - dq[1..].iter().map(|x| x * x).sum::<f64>();
    let qb = 2.0 * (q[0] * dq[0] - q[1..].iter().zip(&dq[1..]).map(|(a, b)| a * b).sum::<f64>());
    let qc = q[0] * q[0] - q[1..].iter().map(|x| x * x).sum::<f64>();
    smallest_positive_root(qa, qb, qc)
}

fn smallest_positive_root(a: f64, b: f64, c: f64) -> f64 {
    let scale = a.abs().max(b.abs()).max(c.abs());
    if scale == 0.0 {
        return f64::INFINITY;
    }
    if a.abs() <= 1e-15 * scale {
        return if b < 0.0 { -c / b } else { f64::INFINITY };
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return f64::INFINITY;
    }
    let sq = disc.sqrt();
    // Numerically stable pair.
    let qq = -0.5 * (b + b.signum() * sq);
    let mut roots = vec![];
    if qq != 0.0 {
        roots.push(qq / a);
        roots.push(c / qq);
    } else {
        roots.push(0.0);
    }
    roots.into_iter().filter(|&r| r > 0.0).fold(f64::INFINITY, f64::min)
}

fn entr_step(q: &[f64], dq: &[f64], s: f64, ds: f64) -> f64 {
    let mut best = f64::INFINITY;
    for (pq, pd) in q.chunks(2).zip(dq.chunks(2)) {
        best = best.min(entr_pair_step(pq[0], pq[1], pd[0], pd[1], s, ds));
    }
    best
}

/// Perspective test `q_t - q_u ln(q_u / s) > 0`, `q_u > 0`, `s > 0` is concave in
/// the step along a line, so its feasible set is an interval found by bisection.
fn entr_pair_step(qu: f64, qt: f64, du: f64, dt: f64, s: f64, ds: f64) -> f64 {
    let inside = |a: f64| {
        let (u, t, w) = (qu + a * du, qt + a * dt, s + a * ds);
        u > 0.0 && w > 0.0 && t - u * (u / w).ln() > 0.0
    };
    let mut hi = 1.0;
    while inside(hi) {
        hi *= 2.0;
        if hi > 1e12 {
            return f64::INFINITY;
        }
    }
    let mut lo = 0.0;
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if inside(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-14 * hi {
            break;
        }
    }
    lo
}

fn det_step(p: &DetPencil, q: &[f64], dq: &[f64], s: f64, ds: f64) -> Result<f64> {
    let (s, ds) = if p.homogeneous { (1.0, 0.0) } else { (s, ds) };
    let m = p.matrix(q, s);
    let dm = p.matrix(dq, ds);
    let chol = m.cholesky().ok_or_else(|| Error::outside(None, "pencil not positive definite"))?;
    let l = chol.l();
    let a = l.solve_lower_triangular(&dm).expect("non-singular factor");
    let w = l.solve_lower_triangular(&a.transpose()).expect("non-singular factor");
    let w = (&w + w.transpose()) * 0.5;
    if w.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteDirection);
    }
    let lam_min = w.symmetric_eigenvalues().min();
    Ok(if lam_min < 0.0 { -1.0 / lam_min } else { f64::INFINITY })
}

/// Ordered blocks partitioning one vector.
#[derive(Clone, Debug)]
pub struct DirectSum {
    blocks: Vec<Block>,
    offsets: Vec<usize>,
}

/// Direct-sum barrier with a block-diagonal Hessian.
#[derive(Clone, Debug)]
pub struct DirectSumEval {
    pub value: f64,
    pub gradient: DVector<f64>,
    pub hessians: Vec<DMatrix<f64>>,
}

impl DirectSumEval {
    pub fn dense_hessian(&self) -> DMatrix<f64> {
        let n = self.gradient.len();
        let mut h = DMatrix::zeros(n, n);
        let mut off = 0;
        for b in &self.hessians {
            let k = b.nrows();
            h.view_mut((off, off), (k, k)).copy_from(b);
            off += k;
        }
        h
    }

    /// `H v` using the block structure.
    pub fn hessian_mul(&self, v: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(v.len());
        let mut off = 0;
        for b in &self.hessians {
            let k = b.nrows();
            out.rows_mut(off, k).copy_from(&(b * v.rows(off, k)));
            off += k;
        }
        out
    }
}

impl DirectSum {
    pub fn new(blocks: Vec<Block>) -> Self {
        let mut offsets = Vec::with_capacity(blocks.len() + 1);
        let mut off = 0;
        for b in &blocks {
            offsets.push(off);
            off += b.dim();
        }
        offsets.push(off);
        DirectSum { blocks, offsets }
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn dim(&self) -> usize {
        *self.offsets.last().expect("non-empty offsets")
    }

    pub fn theta(&self) -> f64 {
        self.blocks.iter().map(Block::theta).sum()
    }

    pub fn range(&self, j: usize) -> std::ops::Range<usize> {
        self.offsets[j]..self.offsets[j + 1]
    }

    pub fn interior_point(&self) -> Vec<f64> {
        self.blocks.iter().flat_map(Block::interior_point).collect()
    }

    fn check_len(&self, v: &[f64]) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::Dimension(format!("direct sum expects {} entries, got {}", self.dim(), v.len())));
        }
        Ok(())
    }

    pub fn eval(&self, v: &[f64]) -> Result<DirectSumEval> {
        self.check_len(v)?;
        let evals: Vec<Result<BarrierEval<f64>>> = self
            .blocks
            .par_iter()
            .enumerate()
            .map(|(j, b)| b.eval(&v[self.range(j)]).map_err(|e| e.in_block(j)))
            .collect();
        let mut value = 0.0;
        let mut gradient = DVector::zeros(self.dim());
        let mut hessians = Vec::with_capacity(self.blocks.len());
        for (j, ev) in evals.into_iter().enumerate() {
            let ev = ev?;
            value += ev.value;
            gradient.rows_mut(self.offsets[j], ev.gradient.len()).copy_from(&ev.gradient);
            hessians.push(ev.hessian);
        }
        Ok(DirectSumEval { value, gradient, hessians })
    }

    /// Index of the first block whose slice is not interior, if any.
    pub fn first_exterior_block(&self, v: &[f64], anchor: &[f64]) -> Result<Option<usize>> {
        self.check_len(v)?;
        self.check_len(anchor)?;
        for (j, b) in self.blocks.iter().enumerate() {
            if !b.contains_interior(&v[self.range(j)], &anchor[self.range(j)])? {
                return Ok(Some(j));
            }
        }
        Ok(None)
    }

    /// Minimum block step; see [`Block::max_step`].
    pub fn max_step(&self, q: &[f64], dq: &[f64], s: f64, ds: f64) -> Result<f64> {
        self.check_len(q)?;
        self.check_len(dq)?;
        let steps: Vec<Result<f64>> = self
            .blocks
            .par_iter()
            .enumerate()
            .map(|(j, b)| b.max_step(&q[self.range(j)], &dq[self.range(j)], s, ds).map_err(|e| e.in_block(j)))
            .collect();
        steps.into_iter().try_fold(f64::INFINITY, |acc, s| s.map(|s| acc.min(s)))
    }

    /// Sum of block gap contributions; `UnboundedSupport` if any block reports it.
    pub fn gap_contribution(&self, y: &[f64], shift: &[f64]) -> Result<f64> {
        let mut total = 0.0;
        for (j, b) in self.blocks.iter().enumerate() {
            let r = self.range(j);
            total += b.gap_contribution(&y[r.clone()], &shift[r])?;
        }
        Ok(total)
    }
}

/// The 2x2 pencil with `det = x1^2 - x2^2 - x3^2`.
pub fn soc_pencil() -> DetPencil {
    let h1 = DMatrix::identity(2, 2);
    let h2 = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
    let h3 = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
    DetPencil::new(None, vec![h1, h2, h3], vec![1.0, 0.0, 0.0]).expect("valid pencil")
}
