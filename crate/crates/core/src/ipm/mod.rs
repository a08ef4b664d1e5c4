//! Infeasible-start primal-dual path following in the domain-driven form.
//!
//! The state is `(xbar, tau, y)` with `xbar = tau x` and `z = (A xbar + z0) / tau`.
//! Starting from `x = 0`, `tau = 1`, `y = y0 = Phi'(z0)` the path equations are
//!
//! ```text
//! (b) A^T y - A^T y0 + (tau - 1) c = 0
//! (c) tau y = mu Phi'(z)
//! (d) <c, x> + <y, z> / tau = -xi theta mu / tau^2 - y_tau0 / tau
//! ```
//!
//! with `y_tau0 = -<y0, z0> - xi theta`, so `mu = 1` at the start.
//!
//! Along this path `tau` grows in proportion to `mu` on solvable instances, so
//! the iteration drives `mu` up; `mu / tau^2` plays the role of the usual
//! barrier parameter and tends to zero.

mod problem;

use std::time::Instant;

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use serde::{Deserialize, Serialize};

use crate::barriers::DirectSumEval;
use crate::error::{Error, Result};

pub use problem::DomainDrivenProblem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
    NumericalFailure,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Optimal => "Optimal",
            Status::Infeasible => "Infeasible",
            Status::Unbounded => "Unbounded",
            Status::IterationLimit => "IterationLimit",
            Status::NumericalFailure => "NumericalFailure",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Status::Optimal => 0,
            Status::Infeasible => 2,
            Status::Unbounded => 3,
            Status::IterationLimit => 4,
            Status::NumericalFailure => 5,
        }
    }
}

impl std::str::FromStr for Status {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "optimal" => Ok(Status::Optimal),
            "infeasible" => Ok(Status::Infeasible),
            "unbounded" => Ok(Status::Unbounded),
            "iterationlimit" => Ok(Status::IterationLimit),
            "numericalfailure" => Ok(Status::NumericalFailure),
            _ => Err(Error::InvalidParams(format!("unknown status {s}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Settings {
    pub tol: f64,
    pub xi: f64,
    pub max_iter: usize,
    /// Fraction to the boundary.
    pub eta: f64,
    pub sigma_min: f64,
    pub sigma_max: f64,
    /// Proximity threshold for the corrector loop.
    pub beta: f64,
    pub max_correctors: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            tol: 1e-8,
            xi: 2.0,
            max_iter: 200,
            eta: 0.99,
            sigma_min: 0.1,
            sigma_max: 0.5,
            beta: 0.25,
            max_correctors: 5,
        }
    }
}

impl Settings {
    pub fn validate(&self) -> Result<()> {
        let ok = self.tol > 0.0
            && self.xi > 1.0
            && self.eta > 0.0
            && self.eta < 1.0
            && self.sigma_min > 0.0
            && self.sigma_min <= self.sigma_max
            && self.sigma_max < 1.0
            && self.beta > 0.0
            && self.max_iter > 0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParams("solver settings out of range".into()))
        }
    }
}

/// Solver state. `xbar = tau x`.
#[derive(Clone, Debug, PartialEq)]
pub struct Iterate {
    pub xbar: DVector<f64>,
    pub tau: f64,
    pub y: DVector<f64>,
}

impl Iterate {
    pub fn x(&self) -> DVector<f64> {
        &self.xbar / self.tau
    }

    pub fn step(&self, d: &Direction, alpha: f64) -> Iterate {
        Iterate { xbar: &self.xbar + &d.dxbar * alpha, tau: self.tau + alpha * d.dtau, y: &self.y + &d.dy * alpha }
    }
}

/// Newton direction for the path equations at target `mu_target`.
#[derive(Clone, Debug)]
pub struct Direction {
    pub dxbar: DVector<f64>,
    pub dtau: f64,
    pub dy: DVector<f64>,
    /// `dx` with `dxbar = tau dx + dtau x`.
    pub dx: DVector<f64>,
    /// `(A dxbar - dtau z) / tau`, the induced change of `z`.
    pub dz: DVector<f64>,
    /// Local norm of `(dz, tau dy / mu)` at `z`.
    pub proximity: f64,
    pub mu_target: f64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    /// `|z0| / (tau (1 + |b|))`.
    pub primal: f64,
    /// `|A^T y - A^T y0 + (tau - 1) c| / (tau (1 + |c|))`.
    pub dual: f64,
    /// `|A^T (y / tau) + c| / (1 + |c|)`.
    pub dual_infeasibility: f64,
    /// Relative duality gap; the proxy `theta xi mu / tau^2` when a support is unbounded.
    pub gap: f64,
    pub gap_is_proxy: bool,
}

impl Residuals {
    pub fn max(&self) -> f64 {
        self.primal.max(self.dual).max(self.dual_infeasibility).max(self.gap.abs())
    }
}

/// One predictor phase. `mu`, `tau` and the residuals are taken at the
/// re-centered iterate the predictor starts from.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct IterationLog {
    pub iter: usize,
    pub mu: f64,
    pub tau: f64,
    pub primal: f64,
    pub dual: f64,
    pub dual_infeasibility: f64,
    pub gap: f64,
    pub objective: f64,
    pub sigma: f64,
    pub alpha_predictor: f64,
    pub alpha_corrector: f64,
    pub correctors: usize,
    pub proximity: f64,
    /// Centrality right after the predictor step.
    pub centrality: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub status: Status,
    pub x: Vec<f64>,
    /// Dual estimate `y / tau`.
    pub y: Vec<f64>,
    pub objective: f64,
    pub gap: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub dual_infeasibility: f64,
    pub iterations: usize,
    pub wall_time: f64,
    pub tau: f64,
    pub mu: f64,
    pub message: String,
    #[serde(skip)]
    pub log: Vec<IterationLog>,
}

impl SolveResult {
    pub fn max_residual(&self) -> f64 {
        self.primal_residual.max(self.dual_residual).max(self.dual_infeasibility).max(self.gap.abs())
    }
}

/// Writes the iteration log as CSV.
pub fn write_log_csv<W: std::io::Write>(log: &[IterationLog], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in log {
        w.serialize(row).map_err(|e| Error::Io(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

/// Normal matrix `A^T H A` factored at one point, reused for every target.
pub struct NewtonSystem {
    z: DVector<f64>,
    eval: DirectSumEval,
    ha: DMatrix<f64>,
    normal: DMatrix<f64>,
    chol: Cholesky<f64, Dyn>,
}

impl NewtonSystem {
    pub fn eval(&self) -> &DirectSumEval {
        &self.eval
    }

    pub fn normal_matrix(&self) -> &DMatrix<f64> {
        &self.normal
    }

    /// `M^{-1} r` with two steps of iterative refinement.
    fn solve(&self, r: &DVector<f64>) -> DVector<f64> {
        let mut x = self.chol.solve(r);
        let rn = r.norm().max(f64::MIN_POSITIVE);
        for _ in 0..2 {
            let res = r - &self.normal * &x;
            if res.norm() <= 1e-10 * rn {
                break;
            }
            x += self.chol.solve(&res);
        }
        x
    }
}

/// One solve of a [`DomainDrivenProblem`].
pub struct Solver<'a> {
    problem: &'a DomainDrivenProblem,
    settings: Settings,
    z0: DVector<f64>,
    y0: DVector<f64>,
    at_y0: DVector<f64>,
    y_tau0: f64,
    theta: f64,
    /// `A^T y0 + c`.
    g: DVector<f64>,
    /// Factor of `A^T A`, used to keep `dy` on the linear dual equation.
    ata: Cholesky<f64, Dyn>,
}

impl<'a> Solver<'a> {
    pub fn new(problem: &'a DomainDrivenProblem, settings: Settings) -> Result<Self> {
        settings.validate()?;
        let z0 = problem.z0();
        let ev = problem.blocks().eval((&z0 + problem.b()).as_slice())?;
        let y0 = ev.gradient;
        let theta = problem.blocks().theta();
        let y_tau0 = -y0.dot(&z0) - settings.xi * theta;
        let at_y0 = problem.a().tr_mul(&y0);
        let g = &at_y0 + problem.c();
        let ata = factor(&problem.a().tr_mul(problem.a()))?;
        Ok(Solver { problem, settings, z0, y0, at_y0, y_tau0, theta, g, ata })
    }

    pub fn settings(&self) -> &Settings {
        &self.settings
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn z0(&self) -> &DVector<f64> {
        &self.z0
    }

    pub fn y0(&self) -> &DVector<f64> {
        &self.y0
    }

    pub fn y_tau0(&self) -> f64 {
        self.y_tau0
    }

    pub fn initial_iterate(&self) -> Iterate {
        Iterate { xbar: DVector::zeros(self.problem.num_vars()), tau: 1.0, y: self.y0.clone() }
    }

    pub fn z(&self, it: &Iterate) -> DVector<f64> {
        (self.problem.a() * &it.xbar + &self.z0) / it.tau
    }

    fn eval_at(&self, z: &DVector<f64>) -> Result<DirectSumEval> {
        self.problem.blocks().eval((z + self.problem.b()).as_slice())
    }

    /// Solves the path equation (d) for `mu`.
    pub fn mu_of(&self, it: &Iterate) -> Result<f64> {
        let z = self.z(it);
        let tau = it.tau;
        let mu = -(tau * self.problem.c().dot(&it.xbar) + tau * it.y.dot(&z) + tau * self.y_tau0)
            / (self.theta * self.settings.xi);
        if !(mu > 0.0) || !mu.is_finite() {
            return Err(Error::NonPositiveMu(mu));
        }
        Ok(mu)
    }

    /// `R = -(tau y - mu Phi'(z))`.
    pub fn central_residual(&self, it: &Iterate, mu: f64) -> Result<DVector<f64>> {
        let ev = self.eval_at(&self.z(it))?;
        Ok(-(&it.y * it.tau - ev.gradient * mu))
    }

    /// `A^T y - A^T y0 + (tau - 1) c`.
    pub fn dual_linear_residual(&self, it: &Iterate) -> DVector<f64> {
        self.problem.a().tr_mul(&it.y) - &self.at_y0 + self.problem.c() * (it.tau - 1.0)
    }

    pub fn system(&self, it: &Iterate) -> Result<NewtonSystem> {
        let z = self.z(it);
        let eval = self.eval_at(&z)?;
        let a = self.problem.a();
        let mut ha = DMatrix::zeros(a.nrows(), a.ncols());
        for (j, h) in eval.hessians.iter().enumerate() {
            let r = self.problem.blocks().range(j);
            let rows = a.rows(r.start, r.len());
            ha.rows_mut(r.start, r.len()).copy_from(&(h * rows));
        }
        let mut normal = a.tr_mul(&ha);
        normal = (&normal + normal.transpose()) * 0.5;
        let chol = factor(&normal)?;
        Ok(NewtonSystem { z, eval, ha, normal, chol })
    }

    /// Newton direction of the path equations with target `mu_target`.
    pub fn direction(&self, it: &Iterate, sys: &NewtonSystem, mu_target: f64) -> Result<Direction> {
        let a = self.problem.a();
        let c = self.problem.c();
        let tau = it.tau;
        let mt = mu_target;
        let z = &sys.z;
        let r = -(&it.y * tau - &sys.eval.gradient * mt);
        let r_b = self.dual_linear_residual(it);
        let r_d = it.y.dot(&self.z0) + tau * self.y_tau0 + self.g.dot(&it.xbar) + self.settings.xi * self.theta * mt;
        let hz = sys.eval.hessian_mul(z);
        let u = sys.solve(&(-(&r_b * tau) - a.tr_mul(&r))) * (tau / mt);
        let v = sys.solve(&(a.tr_mul(&it.y) - c * tau + a.tr_mul(&hz) * (mt / tau))) * (tau / mt);
        let dy_u = (&r + &sys.ha * &u * (mt / tau)) / tau;
        let dy_v = (-&it.y + (&sys.ha * &v - &hz) * (mt / tau)) / tau;
        let denom = dy_v.dot(&self.z0) + self.y_tau0 + self.g.dot(&v);
        let dtau = (-r_d - dy_u.dot(&self.z0) - self.g.dot(&u)) / denom;
        let dxbar = &u + &v * dtau;
        let mut dy = &dy_u + &dy_v * dtau;
        // Rounding in the normal solves leaves drift in A^T dy + dtau c = -r_b;
        // remove it with the orthogonal projection through A^T A.
        let drift = a.tr_mul(&dy) + c * dtau + &r_b;
        dy -= a * self.ata.solve(&drift);
        let x = &it.xbar / tau;
        let dx = (&dxbar - &x * dtau) / tau;
        let dz = (a * &dxbar - z * dtau) / tau;
        let proximity = self.local_norm(&sys.eval, &dz, &(&dy * (tau / mt)))?;
        let finite = dtau.is_finite() && dxbar.iter().chain(dy.iter()).all(|v| v.is_finite());
        if !finite {
            return Err(Error::NonFiniteDirection);
        }
        Ok(Direction { dxbar, dtau, dy, dx, dz, proximity, mu_target })
    }

    /// Newton direction of the path equations at fixed `tau`, with the target
    /// `mu` as the extra unknown. Holding `tau` keeps the corrector away from
    /// the spurious solutions at `tau -> 0`, where `Phi'(z)` decays like `tau`.
    pub fn recenter_direction(&self, it: &Iterate, sys: &NewtonSystem) -> Result<Direction> {
        let a = self.problem.a();
        let tau = it.tau;
        let mt = self.mu_of(it)?;
        let grad = &sys.eval.gradient;
        let r = -(&it.y * tau - grad * mt);
        let r_b = self.dual_linear_residual(it);
        let r_d = it.y.dot(&self.z0) + tau * self.y_tau0 + self.g.dot(&it.xbar) + self.settings.xi * self.theta * mt;
        let u = sys.solve(&(-(&r_b * tau) - a.tr_mul(&r))) * (tau / mt);
        let w = -sys.solve(&a.tr_mul(grad)) * (tau / mt);
        let dy_u = (&r + &sys.ha * &u * (mt / tau)) / tau;
        let dy_w = (grad + &sys.ha * &w * (mt / tau)) / tau;
        let denom = dy_w.dot(&self.z0) + self.g.dot(&w) + self.settings.xi * self.theta;
        let dmu = -(r_d + dy_u.dot(&self.z0) + self.g.dot(&u)) / denom;
        let dxbar = &u + &w * dmu;
        let mut dy = &dy_u + &dy_w * dmu;
        let drift = a.tr_mul(&dy) + &r_b;
        dy -= a * self.ata.solve(&drift);
        let dx = &dxbar / tau;
        let dz = a * &dxbar / tau;
        let proximity = self.local_norm(&sys.eval, &dz, &(&dy * (tau / mt)))?;
        let finite = dmu.is_finite() && dxbar.iter().chain(dy.iter()).all(|v| v.is_finite());
        if !finite {
            return Err(Error::NonFiniteDirection);
        }
        Ok(Direction { dxbar, dtau: 0.0, dy, dx, dz, proximity, mu_target: mt + dmu })
    }

    pub fn corrector_direction(&self, it: &Iterate) -> Result<Direction> {
        let sys = self.system(it)?;
        self.direction(it, &sys, self.mu_of(it)?)
    }

    pub fn predictor_direction(&self, it: &Iterate, sigma: f64) -> Result<Direction> {
        let sys = self.system(it)?;
        self.direction(it, &sys, self.mu_of(it)? / sigma)
    }

    /// Centrality `|tau y / mu - Phi'(z)|` in the dual local norm, with `mu` from (d).
    pub fn centrality(&self, it: &Iterate) -> Result<f64> {
        let mu = self.mu_of(it)?;
        let ev = self.eval_at(&self.z(it))?;
        let r = &it.y * (it.tau / mu) - &ev.gradient;
        Ok(self.dual_norm_sq(&ev, &r)?.sqrt())
    }

    /// `sqrt(|p|_H^2 + |q|_{H^-1}^2)` with `H = Phi''(z)`.
    fn local_norm(&self, ev: &DirectSumEval, p: &DVector<f64>, q: &DVector<f64>) -> Result<f64> {
        let primal = p.dot(&ev.hessian_mul(p)).max(0.0);
        Ok((primal + self.dual_norm_sq(ev, q)?).sqrt())
    }

    fn dual_norm_sq(&self, ev: &DirectSumEval, q: &DVector<f64>) -> Result<f64> {
        let mut total = 0.0;
        for (j, h) in ev.hessians.iter().enumerate() {
            let range = self.problem.blocks().range(j);
            let qj = q.rows(range.start, range.len()).into_owned();
            if h.iter().any(|v| !v.is_finite()) {
                return Err(Error::SingularNormalMatrix);
            }
            let w = match h.clone().cholesky() {
                Some(ch) => ch.solve(&qj),
                None => {
                    let shift = 1e-12 * h.diagonal().amax().max(f64::MIN_POSITIVE);
                    let mut reg = h.clone();
                    for i in 0..reg.nrows() {
                        reg[(i, i)] += shift;
                    }
                    reg.cholesky().ok_or(Error::SingularNormalMatrix)?.solve(&qj)
                }
            };
            total += qj.dot(&w);
        }
        Ok(total.max(0.0))
    }

    /// Largest step keeping `z` interior and `tau > 0`, before the fraction-to-boundary factor.
    pub fn boundary_step(&self, it: &Iterate, d: &Direction) -> Result<f64> {
        let a = self.problem.a();
        let b = self.problem.b();
        let w = a * &it.xbar + &self.z0 + b * it.tau;
        let dw = a * &d.dxbar + b * d.dtau;
        // An unresolved spectrum leaves the boundary to the backtracking search.
        let t_z = match self.problem.blocks().max_step(w.as_slice(), dw.as_slice(), it.tau, d.dtau) {
            Err(Error::NonRealRoots { .. }) => 1.0,
            other => other?,
        };
        let t_tau = if d.dtau < 0.0 { -it.tau / d.dtau } else { f64::INFINITY };
        Ok(t_z.min(t_tau))
    }

    /// Norm of the path equations (b), (c), (d) at a fixed target `mu_target`,
    /// the merit of the corrector line search.
    pub fn newton_residual(&self, it: &Iterate, mu_target: f64) -> Result<f64> {
        let ev = self.eval_at(&self.z(it))?;
        let r = &it.y * it.tau - &ev.gradient * mu_target;
        let r_b = self.dual_linear_residual(it);
        let r_d = it.y.dot(&self.z0)
            + it.tau * self.y_tau0
            + self.g.dot(&it.xbar)
            + self.settings.xi * self.theta * mu_target;
        Ok((r.norm_squared() + r_b.norm_squared() + r_d * r_d).sqrt())
    }

    /// Fraction-to-boundary step, halved until the trial point is interior and,
    /// for a corrector, the Newton residual at its target does not increase.
    /// The residual alone can also be shrunk by collapsing `tau` and `y`, so a
    /// corrector may not leave the predictor neighbourhood either.
    pub fn line_search(&self, it: &Iterate, d: &Direction, corrector: bool) -> Result<f64> {
        let mut alpha = (self.settings.eta * self.boundary_step(it, d)?).min(1.0);
        let (m0, c0) = if corrector {
            (self.newton_residual(it, d.mu_target)?, self.centrality(it)?.max(PREDICTOR_CENTRALITY))
        } else {
            (0.0, 0.0)
        };
        loop {
            if alpha < 1e-12 {
                return Err(Error::StepTooSmall);
            }
            let trial = it.step(d, alpha);
            let ok = trial.tau > 0.0
                && self.eval_at(&self.z(&trial)).is_ok()
                && self.mu_of(&trial).is_ok()
                && (!corrector
                    || self
                        .newton_residual(&trial, d.mu_target)
                        .map(|m| m <= m0 * (1.0 + 1e-12))
                        .unwrap_or(false)
                        && self.centrality(&trial).map(|c| c <= c0).unwrap_or(false))
                && self.assert_interior(it, &trial).is_ok();
            if ok {
                return Ok(alpha);
            }
            alpha *= 0.5;
        }
    }

    /// Fraction-to-boundary step, halved until the trial point is interior and
    /// the centrality decreases.
    pub fn recenter_search(&self, it: &Iterate, d: &Direction) -> Result<f64> {
        let mut alpha = (self.settings.eta * self.boundary_step(it, d)?).min(1.0);
        let c0 = self.centrality(it)?;
        loop {
            if alpha < 1e-12 {
                return Err(Error::StepTooSmall);
            }
            let trial = it.step(d, alpha);
            if self.centrality(&trial).map(|c| c < c0).unwrap_or(false) && self.assert_interior(it, &trial).is_ok() {
                return Ok(alpha);
            }
            alpha *= 0.5;
        }
    }

    pub fn residuals(&self, it: &Iterate) -> Result<Residuals> {
        let p = self.problem;
        let tau = it.tau;
        let cn = 1.0 + p.c().norm();
        let primal = self.z0.norm() / (tau * (1.0 + p.b().norm()));
        let r_b = self.dual_linear_residual(it);
        let dual = r_b.norm() / (tau * cn);
        let dual_infeasibility = (&r_b + &self.g).norm() / (tau * cn);
        let x = it.x();
        let cx = p.c().dot(&x);
        let y_tilde = &it.y / tau;
        let (gap, gap_is_proxy) = match p.blocks().gap_contribution(y_tilde.as_slice(), p.b().as_slice()) {
            Ok(s) => ((cx + s) / (1.0 + cx.abs()), false),
            Err(_) => {
                let mu = self.mu_of(it)?;
                (self.theta * self.settings.xi * mu / (tau * tau) / (1.0 + cx.abs()), true)
            }
        };
        Ok(Residuals { primal, dual, dual_infeasibility, gap, gap_is_proxy })
    }

    fn result(&self, it: &Iterate, status: Status, iterations: usize, start: Instant, log: Vec<IterationLog>, message: String) -> SolveResult {
        let res = self.residuals(it).unwrap_or_default();
        let x = it.x();
        SolveResult {
            status,
            objective: self.problem.c().dot(&x),
            x: x.as_slice().to_vec(),
            y: (&it.y / it.tau).as_slice().to_vec(),
            gap: res.gap,
            primal_residual: res.primal,
            dual_residual: res.dual,
            dual_infeasibility: res.dual_infeasibility,
            iterations,
            wall_time: start.elapsed().as_secs_f64(),
            tau: it.tau,
            mu: self.mu_of(it).unwrap_or(f64::NAN),
            message,
            log,
        }
    }

    /// Interior check of the full block sets at an accepted iterate, with the
    /// previous iterate as the hyperbolicity direction.
    fn assert_interior(&self, prev: &Iterate, it: &Iterate) -> Result<()> {
        let b = self.problem.b();
        let v = self.z(it) + b;
        let anchor = self.z(prev) + b;
        match self.problem.blocks().first_exterior_block(v.as_slice(), anchor.as_slice())? {
            None => Ok(()),
            Some(j) => Err(Error::outside(Some(j), "accepted iterate left the block interior")),
        }
    }

    /// Alternates corrector and predictor phases. Stopping tests run on the
    /// re-centered iterate, where `y / tau` is an accurate dual estimate.
    pub fn solve(&self) -> SolveResult {
        let start = Instant::now();
        let mut it = self.initial_iterate();
        let mut log = Vec::new();
        let mut sigma = self.settings.sigma_max;
        let mut iter = 0;
        loop {
            let corrected = match self.correct(&mut it) {
                Ok(c) => c,
                Err(e) => return self.result(&it, Status::NumericalFailure, iter, start, log, e.to_string()),
            };
            let res = match self.residuals(&it) {
                Ok(r) => r,
                Err(e) => return self.result(&it, Status::NumericalFailure, iter, start, log, e.to_string()),
            };
            if res.max() <= self.settings.tol {
                return self.result(&it, Status::Optimal, iter, start, log, String::new());
            }
            if let Some((status, why)) = self.classify(&it, &res) {
                return self.result(&it, status, iter, start, log, why);
            }
            if iter >= self.settings.max_iter {
                return self.result(&it, Status::IterationLimit, iter, start, log, String::new());
            }
            iter += 1;
            match self.predict(&mut it, &corrected, &res, &mut sigma, iter) {
                Ok(entry) => log.push(entry),
                Err(e) => return self.result(&it, Status::NumericalFailure, iter, start, log, e.to_string()),
            }
        }
    }

    /// Corrector steps until the proximity is at most `beta`, or the per-phase limit.
    ///
    /// Re-centering at fixed `tau` comes first. Past the largest `tau` on the
    /// path, as on unbounded instances, it stalls, and the fixed-target Newton
    /// step of the full path equations takes over.
    fn correct(&self, it: &mut Iterate) -> Result<Corrected> {
        let mut correctors = 0;
        let mut alpha = 0.0;
        let mut sys = self.system(it)?;
        loop {
            let (d, fixed_tau) = match self.recenter_direction(it, &sys) {
                Ok(d) => (d, true),
                Err(Error::NonFiniteDirection) => (self.direction(it, &sys, self.mu_of(it)?)?, false),
                Err(e) => return Err(e),
            };
            let proximity = d.proximity;
            if proximity <= self.settings.beta || correctors == self.settings.max_correctors {
                return Ok(Corrected { sys, correctors, alpha, proximity });
            }
            let step = if fixed_tau {
                match self.recenter_search(it, &d) {
                    Ok(a) => Ok((d, a)),
                    Err(Error::StepTooSmall) => {
                        let full = self.direction(it, &sys, self.mu_of(it)?)?;
                        self.line_search(it, &full, true).map(|a| (full, a))
                    }
                    Err(e) => Err(e),
                }
            } else {
                self.line_search(it, &d, true).map(|a| (d, a))
            };
            let (d, a) = match step {
                Ok(s) => s,
                // Rounding stalls the merit; keep the iterate reached so far.
                Err(Error::StepTooSmall) if correctors > 0 => {
                    return Ok(Corrected { sys, correctors, alpha, proximity });
                }
                Err(e) => return Err(e),
            };
            alpha = a;
            let prev = std::mem::replace(it, it.step(&d, alpha));
            self.assert_interior(&prev, it)?;
            sys = self.system(it)?;
            correctors += 1;
        }
    }

    fn predict(&self, it: &mut Iterate, corrected: &Corrected, res: &Residuals, sigma: &mut f64, iter: usize) -> Result<IterationLog> {
        let mu = self.mu_of(it)?;
        let objective = self.problem.c().dot(&it.x());
        let tau = it.tau;
        let (alpha_pred, used_sigma, centrality) = self.predictor(it, &corrected.sys, mu, sigma)?;
        Ok(IterationLog {
            iter,
            mu,
            tau,
            primal: res.primal,
            dual: res.dual,
            dual_infeasibility: res.dual_infeasibility,
            gap: res.gap,
            objective,
            sigma: used_sigma,
            alpha_predictor: alpha_pred,
            alpha_corrector: corrected.alpha,
            correctors: corrected.correctors,
            proximity: corrected.proximity,
            centrality,
        })
    }

    /// Tries targets `mu / sigma` over the admissible range of `sigma`. Each
    /// step is shortened until the centrality stays below the predictor bound;
    /// the candidate reaching the largest `mu` wins.
    fn predictor(&self, it: &mut Iterate, sys: &NewtonSystem, mu: f64, sigma: &mut f64) -> Result<(f64, f64, f64)> {
        let (lo, hi) = (self.settings.sigma_min, self.settings.sigma_max);
        let mut candidates = vec![lo];
        while *candidates.last().expect("non-empty") < hi {
            let next = (candidates.last().expect("non-empty") * 2.0).min(hi);
            candidates.push(next);
        }
        // The bound never drops below where the correctors left the iterate.
        let bound = PREDICTOR_CENTRALITY.max(2.0 * self.centrality(it)?);
        let mut best: Option<(Iterate, f64, f64, f64, f64)> = None;
        for &s in &candidates {
            let Ok(d) = self.direction(it, sys, mu / s) else { continue };
            let Ok(mut alpha) = self.line_search(it, &d, false) else { continue };
            for _ in 0..12 {
                let trial = it.step(&d, alpha);
                if let Ok(cen) = self.centrality(&trial) {
                    if cen <= bound {
                        let score = self.mu_of(&trial)?;
                        if best.as_ref().is_none_or(|b| score > b.4) {
                            best = Some((trial, alpha, s, cen, score));
                        }
                        break;
                    }
                }
                alpha *= 0.6;
            }
        }
        let (trial, alpha, s, cen, _) = best.ok_or(Error::StepTooSmall)?;
        let prev = std::mem::replace(it, trial);
        self.assert_interior(&prev, it)?;
        *sigma = s;
        Ok((alpha, s, cen))
    }

    /// Infeasibility and unboundedness detection.
    ///
    /// On a solvable instance `tau` grows in proportion to `mu`. When `tau / mu`
    /// collapses below `tol` the path has no limit and the iterate is tested as
    /// a certificate: `y / tau` as a Farkas ray (`A^T y ~ 0` with negative
    /// support on the domain) or `x` as an improving primal ray.
    fn classify(&self, it: &Iterate, _res: &Residuals) -> Option<(Status, String)> {
        let tol = self.settings.tol;
        let mu = self.mu_of(it).ok()?;
        let ratio = it.tau / mu;
        if ratio > tol {
            return None;
        }
        let p = self.problem;
        let y = &it.y / it.tau;
        let yn = y.norm();
        let farkas = p.a().tr_mul(&y).norm() / yn;
        if let Ok(support) = p.blocks().gap_contribution(y.as_slice(), p.b().as_slice()) {
            if farkas <= tol * (1.0 + p.c().norm()) && support <= -tol.sqrt() * yn {
                return Some((
                    Status::Infeasible,
                    format!("tau/mu = {ratio:.3e}; Farkas ray |A^T y|/|y| = {farkas:.3e}, support = {support:.3e}"),
                ));
            }
        }
        let x = it.x();
        let cx = p.c().dot(&x);
        let ray = (self.z0.norm() / it.tau + p.b().norm()) / ((1.0 + p.b().norm()) * cx.abs());
        if cx <= -1.0 / tol && ray <= tol {
            return Some((
                Status::Unbounded,
                format!("tau/mu = {ratio:.3e}; objective {cx:.3e} along a ray with residual {ray:.3e}"),
            ));
        }
        None
    }
}

struct Corrected {
    sys: NewtonSystem,
    correctors: usize,
    alpha: f64,
    proximity: f64,
}

/// Largest centrality accepted right after a predictor step.
const PREDICTOR_CENTRALITY: f64 = 10.0;

fn factor(m: &DMatrix<f64>) -> Result<Cholesky<f64, Dyn>> {
    if let Some(ch) = m.clone().cholesky() {
        return Ok(ch);
    }
    let scale = m.diagonal().amax().max(f64::MIN_POSITIVE);
    let mut reg = 1e-14 * scale;
    for _ in 0..8 {
        let shifted = m + DMatrix::identity(m.nrows(), m.ncols()) * reg;
        if let Some(ch) = shifted.cholesky() {
            return Ok(ch);
        }
        reg *= 100.0;
    }
    Err(Error::SingularNormalMatrix)
}

/// Solves with default diagnostics; see [`Solver::solve`].
pub fn solve(problem: &DomainDrivenProblem, settings: &Settings) -> SolveResult {
    match Solver::new(problem, settings.clone()) {
        Ok(s) => s.solve(),
        Err(e) => SolveResult {
            status: Status::NumericalFailure,
            x: vec![0.0; problem.num_vars()],
            y: vec![0.0; problem.dim()],
            objective: 0.0,
            gap: f64::NAN,
            primal_residual: f64::NAN,
            dual_residual: f64::NAN,
            dual_infeasibility: f64::NAN,
            iterations: 0,
            wall_time: 0.0,
            tau: 1.0,
            mu: f64::NAN,
            message: e.to_string(),
            log: vec![],
        },
    }
}
