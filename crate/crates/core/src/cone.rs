//! Hyperbolicity cones: eigenvalues, membership, boundary steps and the log barrier.

use nalgebra::{DMatrix, DVector, Schur};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{dot, lit, norm2, Real};
use crate::slp::SlpProgram;

/// Default realness tolerance, relative to the largest root magnitude.
pub const TOL_IMAG: f64 = 1e-7;
/// Realness tolerance where only the real parts matter. Clustered roots of
/// multiplicity `m` smear into a disc of radius about `eps^(1/m)`.
const CLUSTER_TOL_IMAG: f64 = 1e-1;
const REFIT_TOL: f64 = 1e-6;
const MAX_REFITS: usize = 8;

/// `Lambda_+(p, e)` for a homogeneous program `p` with `p(e) > 0`.
#[derive(Clone, Debug)]
pub struct HyperbolicCone<T> {
    program: SlpProgram<T>,
    e: Vec<T>,
    degree: u32,
    p_at_e: T,
}

/// Eigenvalues sorted non-increasing, with the imaginary residue seen while extracting them.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum<T> {
    pub eigenvalues: Vec<T>,
    pub residue: f64,
}

impl<T: Real> Spectrum<T> {
    pub fn min(&self) -> T {
        *self.eigenvalues.last().expect("degree >= 1")
    }

    pub fn max(&self) -> T {
        self.eigenvalues[0]
    }
}

/// Value, gradient and Hessian of a barrier at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct BarrierEval<T: Real> {
    pub value: T,
    pub gradient: DVector<T>,
    pub hessian: DMatrix<T>,
}

/// Outcome of the randomized hyperbolicity check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HyperbolicityReport {
    pub trials: usize,
    pub passed: bool,
    pub max_residue: f64,
    /// Line with the largest residue, if any line failed.
    pub worst_point: Option<Vec<f64>>,
    /// Lines that could not be evaluated reliably (ill-conditioned refits).
    pub skipped: usize,
}

struct Roots<T> {
    re: Vec<T>,
    residue: f64,
}

impl<T: Real> HyperbolicCone<T> {
    pub fn new(program: SlpProgram<T>, e: Vec<T>) -> Result<Self> {
        if e.len() != program.num_vars() {
            return Err(Error::Dimension(format!(
                "direction has length {}, program has {} inputs",
                e.len(),
                program.num_vars()
            )));
        }
        let (degree, homogeneous) = program.degree();
        if !homogeneous {
            return Err(Error::NotHomogeneous);
        }
        if degree == 0 {
            return Err(Error::DegreeTooLow(0));
        }
        let p_at_e = program.value(&e)?;
        if !(p_at_e > T::zero()) {
            return Err(Error::InvalidDirection(p_at_e.to_f64_lossy()));
        }
        Ok(HyperbolicCone { program, e, degree, p_at_e })
    }

    pub fn program(&self) -> &SlpProgram<T> {
        &self.program
    }

    pub fn direction(&self) -> &[T] {
        &self.e
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn p_at_e(&self) -> T {
        self.p_at_e
    }

    pub fn dim(&self) -> usize {
        self.program.num_vars()
    }

    fn check_len(&self, x: &[T]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::Dimension(format!("point has length {}, cone has dimension {}", x.len(), self.dim())));
        }
        Ok(())
    }

    /// `q(s) = p(y - s d)` sampled at Chebyshev nodes on `[-r, r]`, as Chebyshev
    /// coefficients in `u = s / r`.
    fn chebyshev_fit(&self, y: &[T], d: &[T], r: T) -> Result<Vec<T>> {
        let n = self.degree as usize;
        let n1 = n + 1;
        let pi = T::pi();
        let point = |u: T| -> Vec<T> { y.iter().zip(d).map(|(&yi, &di)| yi - r * u * di).collect() };
        let mut vals = Vec::with_capacity(n1);
        for j in 0..n1 {
            let theta = pi * lit::<T>((2 * j + 1) as f64) / lit::<T>((2 * n1) as f64);
            vals.push(self.program.value(&point(theta.cos()))?);
        }
        let mut a = vec![T::zero(); n1];
        for (k, ak) in a.iter_mut().enumerate() {
            let mut acc = T::zero();
            for (j, &v) in vals.iter().enumerate() {
                let theta = pi * lit::<T>((2 * j + 1) as f64) / lit::<T>((2 * n1) as f64);
                acc += v * (lit::<T>(k as f64) * theta).cos();
            }
            *ak = acc * lit::<T>(2.0) / lit::<T>(n1 as f64);
        }
        a[0] /= lit::<T>(2.0);
        // Refit check at the interval endpoints, which are not sample nodes.
        // Cancellation in p makes rounding scale with |point|^deg, not with |q|.
        let reach = norm2(y) + r.abs() * norm2(d);
        let homogeneous = self.p_at_e.abs() / norm2(&self.e).powi(n as i32) * reach.powi(n as i32);
        let size = a.iter().fold(T::zero(), |acc, &c| acc + c.abs()).max(homogeneous);
        let mut residual = 0.0f64;
        for u in [T::one(), -T::one()] {
            let series = a
                .iter()
                .enumerate()
                .fold(T::zero(), |acc, (k, &c)| acc + if k % 2 == 1 { c * u } else { c });
            let direct = self.program.value(&point(u))?;
            let rel = ((series - direct).abs() / size.max(lit::<T>(1e-300))).to_f64_lossy();
            residual = residual.max(rel);
        }
        if !(residual <= REFIT_TOL) {
            return Err(Error::IllConditioned(residual));
        }
        Ok(a)
    }

    /// Roots of `p(x - t d)` for a hyperbolicity direction `d` with `p(d) = p_d > 0`.
    fn relative_roots(&self, x: &[T], d: &[T], p_d: T) -> Result<Roots<T>> {
        let deg = self.degree as usize;
        if x.iter().chain(d).any(|v| !v.is_finite_value()) {
            return Err(Error::MalformedInput("non-finite point".into()));
        }
        let grad_d = self.program.gradient(d)?;
        let center = dot(&grad_d, x) / (lit::<T>(deg as f64) * p_d);
        let y: Vec<T> = x.iter().zip(d).map(|(&xi, &di)| xi - center * di).collect();
        let ny = norm2(&y);
        let nd = norm2(d);
        let nx = norm2(x).max(center.abs() * nd);
        if ny <= lit::<T>(64.0) * T::default_epsilon() * nx || ny == T::zero() {
            return Ok(Roots { re: vec![center; deg], residue: 0.0 });
        }
        let mut r = ny / nd;
        let mut last: Option<Roots<T>> = None;
        for _ in 0..MAX_REFITS {
            let a = self.chebyshev_fit(&y, d, r)?;
            let amax = a.iter().fold(T::zero(), |acc, &c| acc.max(c.abs()));
            let mut n = deg;
            while n > 0 && a[n].abs() <= lit::<T>(1e-13) * amax {
                n -= 1;
            }
            if n < deg {
                // Lost roots lie far outside the sampling interval.
                r *= lit::<T>(16.0);
                continue;
            }
            let (re, im) = colleague_roots(&a[..=n])?;
            let smax = re
                .iter()
                .zip(&im)
                .fold(T::zero(), |acc, (&a, &b)| acc.max((a * a + b * b).sqrt()))
                * r;
            let mut lam: Vec<T> = re.iter().map(|&u| center + r * u).collect();
            lam.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
            let scale = lam.iter().fold(T::zero(), |acc, &v| acc.max(v.abs())).max(smax);
            let imax = im.iter().fold(T::zero(), |acc, &v| acc.max(v.abs())) * r;
            let residue = if scale > T::zero() { (imax / scale).to_f64_lossy() } else { 0.0 };
            let roots = Roots { re: lam, residue };
            let ratio = smax / r;
            if smax > T::zero() && (ratio > lit::<T>(4.0) || ratio < lit::<T>(0.25)) {
                r = smax;
                last = Some(roots);
                continue;
            }
            return Ok(roots);
        }
        last.ok_or(Error::IllConditioned(f64::INFINITY))
    }

    /// Coefficients `c_0..c_d` of `t -> p(x + t dir)`, ascending in `t`.
    pub fn restrict_univariate(&self, x: &[T], dir: &[T]) -> Result<Vec<T>> {
        self.check_len(x)?;
        self.check_len(dir)?;
        let deg = self.degree as usize;
        let nd = norm2(dir);
        let nx = norm2(x);
        if nd == T::zero() {
            let mut c = vec![T::zero(); deg + 1];
            c[0] = self.program.value(x)?;
            return Ok(c);
        }
        let r = if nx > T::zero() { nx / nd } else { T::one() };
        let neg: Vec<T> = dir.iter().map(|&v| -v).collect();
        let a = self.chebyshev_fit(x, &neg, r)?;
        // Chebyshev to monomial in u = t / r.
        let mut mono = vec![T::zero(); deg + 1];
        let mut t_prev = vec![T::zero(); deg + 1];
        let mut t_cur = vec![T::zero(); deg + 1];
        t_prev[0] = T::one();
        for (k, &ak) in a.iter().enumerate() {
            let basis = if k == 0 {
                t_prev.clone()
            } else if k == 1 {
                t_cur[1] = T::one();
                t_cur.clone()
            } else {
                let mut next = vec![T::zero(); deg + 1];
                for i in 0..deg {
                    next[i + 1] += lit::<T>(2.0) * t_cur[i];
                }
                for i in 0..=deg {
                    next[i] -= t_prev[i];
                }
                t_prev = std::mem::replace(&mut t_cur, next);
                t_cur.clone()
            };
            for i in 0..=deg {
                mono[i] += ak * basis[i];
            }
        }
        let mut scale = T::one();
        for c in mono.iter_mut() {
            *c /= scale;
            scale *= r;
        }
        Ok(mono)
    }

    fn spectrum_with_tol(&self, x: &[T], tol_imag: f64) -> Result<Spectrum<T>> {
        self.check_len(x)?;
        let roots = self.relative_roots(x, &self.e, self.p_at_e)?;
        if roots.residue > tol_imag {
            return Err(Error::NonRealRoots { residue: roots.residue });
        }
        Ok(Spectrum { eigenvalues: roots.re, residue: roots.residue })
    }

    /// Roots of `p(x - t e)`, sorted non-increasing.
    pub fn eigenvalues(&self, x: &[T]) -> Result<Spectrum<T>> {
        self.spectrum_with_tol(x, TOL_IMAG)
    }

    /// Interior test using a known interior point `anchor` as the direction.
    /// Near the boundary the eigenvalues relative to `e` cluster at zero, while
    /// relative to a nearby interior point they stay well separated. The smallest
    /// real part must exceed the imaginary smear of the computed roots.
    pub fn is_interior_from(&self, x: &[T], anchor: &[T]) -> Result<bool> {
        self.check_len(x)?;
        self.check_len(anchor)?;
        let pa = self.program.value(anchor)?;
        if !(pa > T::zero()) {
            return Err(Error::outside(None, "anchor has p <= 0"));
        }
        let roots = self.relative_roots(x, anchor, pa)?;
        if roots.residue > CLUSTER_TOL_IMAG {
            return Err(Error::NonRealRoots { residue: roots.residue });
        }
        let lmax = roots.re.iter().fold(T::zero(), |acc, &v| acc.max(v.abs()));
        let lmin = *roots.re.last().expect("degree >= 1");
        Ok(lmin > lit::<T>(roots.residue) * lmax)
    }

    pub fn is_interior(&self, x: &[T]) -> Result<bool> {
        self.is_interior_from(x, &self.e)
    }

    pub fn membership(&self, x: &[T], tol: T) -> Result<bool> {
        Ok(self.eigenvalues(x)?.min() >= -tol)
    }

    /// Smallest positive `t` with `p(z + t dz) = 0`, or `+inf`.
    ///
    /// With `z` interior it is a hyperbolicity direction, and the roots are
    /// `t = -1 / mu` for the negative eigenvalues `mu` of `dz` relative to `z`.
    pub fn max_step_to_boundary(&self, z: &[T], dz: &[T]) -> Result<T> {
        self.check_len(z)?;
        self.check_len(dz)?;
        if dz.iter().all(|v| v.is_zero()) {
            return Ok(T::max_value().unwrap_or_else(|| lit(f64::MAX)));
        }
        let pz = self.program.value(z)?;
        if !(pz > T::zero()) {
            return Err(Error::outside(None, "p(z) <= 0"));
        }
        let roots = self.relative_roots(dz, z, pz)?;
        // Clustered roots smear into complex pairs; their real parts stay within
        // the smear, which is subtracted to keep the step conservative.
        if roots.residue > CLUSTER_TOL_IMAG {
            return Err(Error::NonRealRoots { residue: roots.residue });
        }
        let lmax = roots.re.iter().fold(T::zero(), |acc, &v| acc.max(v.abs()));
        let mu_min = *roots.re.last().expect("degree >= 1") - lit::<T>(roots.residue) * lmax;
        if mu_min >= T::zero() {
            Ok(T::max_value().unwrap_or_else(|| lit(f64::MAX)))
        } else {
            Ok(-T::one() / mu_min)
        }
    }

    /// `-ln p(x)` with derivatives, checking `p(x) > 0` only.
    pub fn barrier_unchecked(&self, x: &[T]) -> Result<BarrierEval<T>> {
        self.check_len(x)?;
        let (p, g, h) = self.program.value_gradient_hessian(x)?;
        if !(p > T::zero()) {
            return Err(Error::outside(None, "p(x) <= 0"));
        }
        let g = DVector::from_vec(g);
        let hessian = &g * g.transpose() / (p * p) - h / p;
        Ok(BarrierEval { value: -p.ln(), gradient: -g / p, hessian })
    }

    /// `-ln p(x)` with derivatives after a full membership test.
    pub fn barrier(&self, x: &[T]) -> Result<BarrierEval<T>> {
        if !self.is_interior(x)? {
            return Err(Error::outside(None, "point not in the cone interior"));
        }
        self.barrier_unchecked(x)
    }

    /// Samples random lines `x - t e` and reports the largest imaginary residue.
    pub fn check_hyperbolicity(&self, trials: usize, seed: u64) -> HyperbolicityReport {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut report = HyperbolicityReport { trials, passed: true, max_residue: 0.0, worst_point: None, skipped: 0 };
        for _ in 0..trials {
            let x: Vec<T> = (0..self.dim())
                .map(|_| lit::<T>(StandardNormal.sample(&mut rng)))
                .collect();
            match self.relative_roots(&x, &self.e, self.p_at_e) {
                Ok(roots) => {
                    if roots.residue > report.max_residue {
                        report.max_residue = roots.residue;
                        if roots.residue > TOL_IMAG {
                            report.worst_point = Some(x.iter().map(|v| v.to_f64_lossy()).collect());
                        }
                    }
                }
                Err(_) => report.skipped += 1,
            }
        }
        report.passed = report.max_residue <= TOL_IMAG && report.skipped == 0;
        report
    }
}

/// Roots of `sum_k a_k T_k(u)` (leading coefficient non-zero) from the colleague matrix.
fn colleague_roots<T: Real>(a: &[T]) -> Result<(Vec<T>, Vec<T>)> {
    let n = a.len() - 1;
    if n == 0 {
        return Ok((vec![], vec![]));
    }
    if n == 1 {
        return Ok((vec![-a[0] / a[1]], vec![T::zero()]));
    }
    let half = lit::<T>(0.5);
    let mut c = DMatrix::<T>::zeros(n, n);
    c[(0, 1)] = T::one();
    for j in 1..n - 1 {
        c[(j, j - 1)] = half;
        c[(j, j + 1)] = half;
    }
    c[(n - 1, n - 2)] += half;
    for j in 0..n {
        c[(n - 1, j)] -= a[j] / (lit::<T>(2.0) * a[n]);
    }
    let schur = Schur::try_new(c, T::default_epsilon(), 100_000).ok_or(Error::IllConditioned(f64::INFINITY))?;
    let ev = schur.complex_eigenvalues();
    Ok((ev.iter().map(|z| z.re).collect(), ev.iter().map(|z| z.im).collect()))
}
