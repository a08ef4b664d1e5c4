//! Seeded benchmark instances and the suite runner.
//!
//! Randomness comes from `ChaCha8Rng::seed_from_u64(seed)`; normal variates use
//! the ziggurat sampler of `rand_distr::Normal`. Both are platform independent,
//! so a `(family, params, seed)` triple always yields the same problem file.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::barriers::{Block, DirectSum};
use crate::builders::{esp, lorentz, vamos_like};
use crate::cone::HyperbolicCone;
use crate::error::{Error, Result};
use crate::ipm::{solve, DomainDrivenProblem, Settings, Status};
use crate::slp::SlpProgram;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn normal(mean: f64, std: f64) -> Normal<f64> {
    Normal::new(mean, std).expect("finite parameters")
}

/// Distribution of the entries of the entropy constraint matrix.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Entries {
    #[default]
    ZeroOne,
    Pm1,
}

impl std::str::FromStr for Entries {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "01" | "zero-one" => Ok(Entries::ZeroOne),
            "pm1" => Ok(Entries::Pm1),
            _ => Err(Error::InvalidParams(format!("unknown entry distribution {s} (use 01 or pm1)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    #[serde(alias = "+")]
    Plus,
    #[serde(alias = "-")]
    Minus,
}

impl std::str::FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+" | "plus" => Ok(Sign::Plus),
            "-" | "minus" => Ok(Sign::Minus),
            _ => Err(Error::InvalidParams(format!("unknown sign {s} (use plus or minus)"))),
        }
    }
}

/// Hyperbolic polynomial of a projection instance, with its direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "poly", rename_all = "kebab-case")]
pub enum PolySpec {
    Esp { n: usize, k: usize },
    VamosLike { m: usize },
    Lorentz { m: usize },
}

impl PolySpec {
    pub fn cone(&self) -> Result<HyperbolicCone<f64>> {
        let (program, e): (SlpProgram<f64>, Vec<f64>) = match *self {
            PolySpec::Esp { n, k } => (esp(n, k)?, vec![1.0; n]),
            PolySpec::VamosLike { m } => (vamos_like(m)?, vec![1.0; 2 * m]),
            PolySpec::Lorentz { m } => {
                let mut e = vec![0.0; m];
                if let Some(first) = e.first_mut() {
                    *first = 1.0;
                }
                (lorentz(m)?, e)
            }
        };
        HyperbolicCone::new(program, e)
    }

    fn label(&self) -> String {
        match *self {
            PolySpec::Esp { n, k } => format!("esp({n},{k})"),
            PolySpec::VamosLike { m } => format!("vamos_like({m})"),
            PolySpec::Lorentz { m } => format!("lorentz({m})"),
        }
    }
}

fn problem(c: Vec<f64>, a: DMatrix<f64>, b: Vec<f64>, blocks: Vec<Block>) -> Result<DomainDrivenProblem> {
    DomainDrivenProblem::new(DVector::from_vec(c), a, DVector::from_vec(b), DirectSum::new(blocks))
}

/// `min sum_i x_i ln x_i` subject to `A x + 1` in the hyperbolicity cone and `x >= gamma`.
///
/// Variables are `(x, t)`; each pair `(x_i, t_i)` lies in the entropy epigraph
/// `t_i >= x_i ln x_i` and the objective is `sum_i t_i`. `A` has `cone.dim()` rows
/// and `dim` columns with i.i.d. entries.
pub fn gen_entropy(cone: HyperbolicCone<f64>, dim: usize, gamma: f64, entries: Entries, seed: u64) -> Result<DomainDrivenProblem> {
    if dim == 0 || !gamma.is_finite() {
        return Err(Error::InvalidParams("entropy instance needs dim >= 1 and a finite gamma".into()));
    }
    let mut r = rng(seed);
    let rows = cone.dim();
    let a_hb = DMatrix::from_fn(rows, dim, |_, _| match entries {
        Entries::ZeroOne => f64::from(u8::from(r.random_bool(0.5))),
        Entries::Pm1 => {
            if r.random_bool(0.5) {
                1.0
            } else {
                -1.0
            }
        }
    });
    entropy_problem(cone, a_hb, gamma)
}

fn entropy_problem(cone: HyperbolicCone<f64>, a_hb: DMatrix<f64>, gamma: f64) -> Result<DomainDrivenProblem> {
    let (rows, dim) = a_hb.shape();
    let n = 2 * dim;
    let total = 2 * dim + rows + dim;
    let mut a = DMatrix::zeros(total, n);
    let mut b = vec![0.0; total];
    for i in 0..dim {
        a[(2 * i, i)] = 1.0;
        a[(2 * i + 1, dim + i)] = 1.0;
    }
    a.view_mut((2 * dim, 0), (rows, dim)).copy_from(&a_hb);
    b[2 * dim..2 * dim + rows].fill(1.0);
    for i in 0..dim {
        a[(2 * dim + rows + i, i)] = 1.0;
        b[2 * dim + rows + i] = -gamma;
    }
    let mut c = vec![0.0; n];
    c[dim..].fill(1.0);
    problem(c, a, b, vec![Block::Entr { pairs: dim }, Block::Hb(cone), Block::Lp { dim }])
}

/// Entropy instance over `esp(n, k)`.
pub fn gen_entropy_hb(n: usize, k: usize, gamma: f64, dim: usize, entries: Entries, seed: u64) -> Result<DomainDrivenProblem> {
    gen_entropy(PolySpec::Esp { n, k }.cone()?, dim, gamma, entries, seed)
}

/// Entropy instance with `A = -J`, so `A x + 1 = (1 - sum x) 1`. The constraint
/// forces `sum x <= 1`, which contradicts `x >= gamma` once `gamma dim > 1`.
pub fn gen_entropy_infeasible(n: usize, k: usize, gamma: f64, dim: usize) -> Result<DomainDrivenProblem> {
    if dim == 0 {
        return Err(Error::InvalidParams("entropy instance needs dim >= 1".into()));
    }
    entropy_problem(PolySpec::Esp { n, k }.cone()?, DMatrix::from_element(n, dim, -1.0), gamma)
}

/// `min t` subject to `||x - c|| <= t` and `x` in the hyperbolicity cone, with
/// `c ~ N(0, 0.5^2)` unless a center is given.
pub fn gen_projection(poly: PolySpec, seed: u64, center: Option<Vec<f64>>) -> Result<DomainDrivenProblem> {
    let cone = poly.cone()?;
    let m = cone.dim();
    let center = match center {
        Some(c) if c.len() != m => return Err(Error::Dimension(format!("center has length {}, cone has {m} variables", c.len()))),
        Some(c) => c,
        None => {
            let mut r = rng(seed);
            let dist = normal(0.0, 0.5);
            (0..m).map(|_| dist.sample(&mut r)).collect()
        }
    };
    let n = m + 1;
    let mut a = DMatrix::zeros(n + m, n);
    let mut b = vec![0.0; n + m];
    a[(0, 0)] = 1.0;
    for i in 0..m {
        a[(1 + i, 1 + i)] = 1.0;
        b[1 + i] = -center[i];
        a[(n + i, 1 + i)] = 1.0;
    }
    let mut c = vec![0.0; n];
    c[0] = 1.0;
    problem(c, a, b, vec![Block::Soc { dim: n }, Block::Hb(cone)])
}

/// `max f^T x` over `x` in the cone of `esp(n, k)` with `sum x = n`, with `f ~ N(0, 1)`.
///
/// The slice is parametrized as `x = 1 + B w` with columns `e_i - e_n`, and the
/// objective is negated for minimization (dropping the constant `f^T 1`).
pub fn gen_esp_slice(n: usize, k: usize, seed: u64) -> Result<DomainDrivenProblem> {
    if k < 2 || k > n {
        return Err(Error::InvalidParams(format!("esp slice needs 2 <= k <= n (got n={n}, k={k})")));
    }
    let cone = PolySpec::Esp { n, k }.cone()?;
    let mut r = rng(seed);
    let f: Vec<f64> = (0..n).map(|_| normal(0.0, 1.0).sample(&mut r)).collect();
    let a = DMatrix::from_fn(n, n - 1, |i, j| {
        if i == j {
            1.0
        } else if i == n - 1 {
            -1.0
        } else {
            0.0
        }
    });
    let c = (0..n - 1).map(|j| f[n - 1] - f[j]).collect();
    problem(c, a, vec![1.0; n], vec![Block::Hb(cone)])
}

/// `min sum (x +- y)` with `x` in the cone of `esp(n, k1)` and `y` in the cone of
/// `esp(n, k2)`. The plus sign has optimum 0; the minus sign is unbounded along `y = t 1`.
pub fn gen_unbounded_pair(n: usize, k1: usize, k2: usize, sign: Sign) -> Result<DomainDrivenProblem> {
    let p1 = PolySpec::Esp { n, k: k1 }.cone()?;
    let p2 = PolySpec::Esp { n, k: k2 }.cone()?;
    let s = match sign {
        Sign::Plus => 1.0,
        Sign::Minus => -1.0,
    };
    let c = (0..2 * n).map(|i| if i < n { 1.0 } else { s }).collect();
    problem(c, DMatrix::identity(2 * n, 2 * n), vec![0.0; 2 * n], vec![Block::Hb(p1), Block::Hb(p2)])
}

fn default_dim() -> usize {
    10
}

/// One benchmark family with its parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Family {
    EntropyHb {
        n: usize,
        k: usize,
        gamma: f64,
        #[serde(default = "default_dim")]
        dim: usize,
        #[serde(default)]
        entries: Entries,
    },
    EntropyInfeasible {
        n: usize,
        k: usize,
        gamma: f64,
        #[serde(default = "default_dim")]
        dim: usize,
    },
    VamosEntropy {
        m: usize,
        gamma: f64,
        #[serde(default = "default_dim")]
        dim: usize,
        #[serde(default)]
        entries: Entries,
    },
    Projection {
        #[serde(flatten)]
        poly: PolySpec,
    },
    EspSlice {
        n: usize,
        k: usize,
    },
    UnboundedPair {
        n: usize,
        k1: usize,
        k2: usize,
        sign: Sign,
    },
}

impl Family {
    pub fn generate(&self, seed: u64) -> Result<DomainDrivenProblem> {
        match self {
            Family::EntropyHb { n, k, gamma, dim, entries } => gen_entropy_hb(*n, *k, *gamma, *dim, *entries, seed),
            Family::EntropyInfeasible { n, k, gamma, dim } => gen_entropy_infeasible(*n, *k, *gamma, *dim),
            Family::VamosEntropy { m, gamma, dim, entries } => {
                gen_entropy(PolySpec::VamosLike { m: *m }.cone()?, *dim, *gamma, *entries, seed)
            }
            Family::Projection { poly } => gen_projection(*poly, seed, None),
            Family::EspSlice { n, k } => gen_esp_slice(*n, *k, seed),
            Family::UnboundedPair { n, k1, k2, sign } => gen_unbounded_pair(*n, *k1, *k2, *sign),
        }
    }

    /// Status known by construction, if any.
    ///
    /// Signed entropy instances may or may not be feasible, so they carry no
    /// expectation; any certified outcome counts for them.
    pub fn expected(&self) -> Option<Status> {
        match self {
            Family::EntropyHb { entries: Entries::Pm1, .. } | Family::VamosEntropy { entries: Entries::Pm1, .. } => None,
            Family::EntropyInfeasible { gamma, dim, .. } if *gamma * *dim as f64 > 1.0 => Some(Status::Infeasible),
            Family::UnboundedPair { sign: Sign::Minus, .. } => Some(Status::Unbounded),
            _ => Some(Status::Optimal),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::EntropyHb { .. } => "entropy-hb",
            Family::EntropyInfeasible { .. } => "entropy-infeasible",
            Family::VamosEntropy { .. } => "vamos-entropy",
            Family::Projection { .. } => "projection",
            Family::EspSlice { .. } => "esp-slice",
            Family::UnboundedPair { .. } => "unbounded-pair",
        }
    }

    /// Parameters without the seed.
    pub fn params(&self) -> String {
        match self {
            Family::EntropyHb { n, k, gamma, dim, entries } => format!("n={n} k={k} gamma={gamma} dim={dim} entries={}", entries_str(*entries)),
            Family::EntropyInfeasible { n, k, gamma, dim } => format!("n={n} k={k} gamma={gamma} dim={dim}"),
            Family::VamosEntropy { m, gamma, dim, entries } => format!("m={m} gamma={gamma} dim={dim} entries={}", entries_str(*entries)),
            Family::Projection { poly } => poly.label(),
            Family::EspSlice { n, k } => format!("n={n} k={k}"),
            Family::UnboundedPair { n, k1, k2, sign } => {
                format!("n={n} k1={k1} k2={k2} sign={}", if *sign == Sign::Plus { "+" } else { "-" })
            }
        }
    }
}

fn entries_str(e: Entries) -> &'static str {
    match e {
        Entries::ZeroOne => "01",
        Entries::Pm1 => "pm1",
    }
}

fn one() -> usize {
    1
}

/// A family run over `repetitions` consecutive seeds starting at `seed`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceSpec {
    #[serde(flatten)]
    pub family: Family,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "one")]
    pub repetitions: usize,
}

/// Suite file: optional solver settings and a list of specs.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Suite {
    #[serde(default)]
    pub settings: Settings,
    pub instances: Vec<InstanceSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub id: String,
    pub family: String,
    pub params: String,
    pub seed: u64,
    pub expected: String,
    pub status: String,
    pub matches_expected: bool,
    pub iterations: usize,
    pub wall_time: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub gap: f64,
    pub objective: f64,
    pub message: String,
}

fn run_one(family: &Family, seed: u64, settings: &Settings) -> RunRecord {
    let expected = family.expected();
    let mut rec = RunRecord {
        id: format!("{}/{}/seed={seed}", family.name(), family.params()),
        family: family.name().to_string(),
        params: family.params(),
        seed,
        expected: expected.map_or("any", |s| s.as_str()).to_string(),
        status: String::new(),
        matches_expected: false,
        iterations: 0,
        wall_time: 0.0,
        primal_residual: f64::NAN,
        dual_residual: f64::NAN,
        gap: f64::NAN,
        objective: f64::NAN,
        message: String::new(),
    };
    let start = Instant::now();
    match family.generate(seed) {
        Ok(p) => {
            let r = solve(&p, settings);
            rec.status = r.status.as_str().to_string();
            rec.matches_expected = match expected {
                Some(e) => r.status == e,
                None => matches!(r.status, Status::Optimal | Status::Infeasible | Status::Unbounded),
            };
            rec.iterations = r.iterations;
            rec.primal_residual = r.primal_residual;
            rec.dual_residual = r.dual_residual;
            rec.gap = r.gap;
            rec.objective = r.objective;
            rec.message = r.message;
        }
        Err(e) => {
            rec.status = "GenerationError".to_string();
            rec.message = e.to_string();
        }
    }
    rec.wall_time = start.elapsed().as_secs_f64();
    rec
}

/// Runs every repetition of every spec in parallel. Records come back in spec
/// order; failures are recorded rather than raised.
pub fn run_suite(specs: &[InstanceSpec], settings: &Settings) -> Vec<RunRecord> {
    let jobs: Vec<(&Family, u64)> = specs
        .iter()
        .flat_map(|s| (0..s.repetitions as u64).map(move |r| (&s.family, s.seed + r)))
        .collect();
    jobs.par_iter().map(|(f, seed)| run_one(f, *seed, settings)).collect()
}

pub fn write_csv<W: std::io::Write>(records: &[RunRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

/// Mean and sample standard deviation.
pub fn mean_std(v: &[f64]) -> (f64, f64) {
    if v.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    if v.len() < 2 {
        return (mean, 0.0);
    }
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

#[derive(Clone, Debug, PartialEq)]
pub struct Aggregate {
    pub family: String,
    pub params: String,
    pub runs: usize,
    pub as_expected: usize,
    pub iterations: (f64, f64),
    pub wall_time: (f64, f64),
}

/// Groups records with identical family and parameters.
pub fn aggregate(records: &[RunRecord]) -> Vec<Aggregate> {
    let mut groups: BTreeMap<(&str, &str), Vec<&RunRecord>> = BTreeMap::new();
    for r in records {
        groups.entry((&r.family, &r.params)).or_default().push(r);
    }
    groups
        .into_iter()
        .map(|((family, params), rs)| {
            let iters: Vec<f64> = rs.iter().map(|r| r.iterations as f64).collect();
            let times: Vec<f64> = rs.iter().map(|r| r.wall_time).collect();
            Aggregate {
                family: family.to_string(),
                params: params.to_string(),
                runs: rs.len(),
                as_expected: rs.iter().filter(|r| r.matches_expected).count(),
                iterations: mean_std(&iters),
                wall_time: mean_std(&times),
            }
        })
        .collect()
}

/// Markdown table of mean ± std per family and parameters.
pub fn markdown_table(records: &[RunRecord], with_time: bool) -> String {
    let mut out = String::from("| family | params | runs | as expected | iterations |");
    out.push_str(if with_time { " time (s) |\n|---|---|---|---|---|---|\n" } else { "\n|---|---|---|---|---|\n" });
    for g in aggregate(records) {
        let _ = write!(
            out,
            "| {} | {} | {} | {}/{} | {:.1}±{:.1} |",
            g.family, g.params, g.runs, g.as_expected, g.runs, g.iterations.0, g.iterations.1
        );
        if with_time {
            let _ = write!(out, " {:.3}±{:.3} |", g.wall_time.0, g.wall_time.1);
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::write_problem;

    #[test]
    fn regeneration_is_byte_identical() {
        let fams = [
            Family::EntropyHb { n: 6, k: 3, gamma: 0.5, dim: 4, entries: Entries::Pm1 },
            Family::Projection { poly: PolySpec::Esp { n: 6, k: 3 } },
            Family::EspSlice { n: 5, k: 3 },
        ];
        for f in &fams {
            assert_eq!(write_problem(&f.generate(7).unwrap()), write_problem(&f.generate(7).unwrap()));
            assert_ne!(write_problem(&f.generate(7).unwrap()), write_problem(&f.generate(8).unwrap()));
        }
    }

    #[test]
    fn entropy_entries_follow_distribution() {
        let p = gen_entropy_hb(8, 3, 0.5, 5, Entries::ZeroOne, 1).unwrap();
        let hb = p.a().view((10, 0), (8, 5));
        assert!(hb.iter().all(|v| *v == 0.0 || *v == 1.0));
        let p = gen_entropy_hb(8, 3, 0.5, 5, Entries::Pm1, 1).unwrap();
        assert!(p.a().view((10, 0), (8, 5)).iter().all(|v| v.abs() == 1.0));
        assert_eq!(p.blocks().dim(), 10 + 8 + 5);
    }

    #[test]
    fn projection_of_lorentz_is_analytic() {
        let p = gen_projection(PolySpec::Lorentz { m: 3 }, 0, Some(vec![0.0, 2.0, 0.0])).unwrap();
        let r = solve(&p, &Settings::default());
        assert_eq!(r.status, Status::Optimal);
        for (got, want) in r.x[1..].iter().zip([1.0, 1.0, 0.0]) {
            assert!((got - want).abs() < 1e-6, "{:?}", r.x);
        }
        assert!((r.objective - 2f64.sqrt()).abs() < 1e-6);
    }

    #[test]
    fn slice_with_full_degree_hits_a_vertex() {
        let n = 5;
        let seed = 3;
        let p = gen_esp_slice(n, n, seed).unwrap();
        let r = solve(&p, &Settings::default());
        assert_eq!(r.status, Status::Optimal);
        let mut rr = rng(seed);
        let f: Vec<f64> = (0..n).map(|_| normal(0.0, 1.0).sample(&mut rr)).collect();
        let fmax = f.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let f_sum: f64 = f.iter().sum();
        // -c^T w = f^T x - f^T 1 at the vertex x = n e_i
        assert!((-r.objective - (n as f64 * fmax - f_sum)).abs() < 1e-6, "{} vs {}", -r.objective, n as f64 * fmax - f_sum);
        assert!(gen_esp_slice(4, 1, 0).is_err());
    }

    #[test]
    fn expected_statuses_are_met_on_small_instances() {
        let specs = vec![
            InstanceSpec { family: Family::UnboundedPair { n: 6, k1: 3, k2: 2, sign: Sign::Plus }, seed: 0, repetitions: 1 },
            InstanceSpec { family: Family::UnboundedPair { n: 6, k1: 3, k2: 2, sign: Sign::Minus }, seed: 0, repetitions: 1 },
            InstanceSpec { family: Family::EntropyInfeasible { n: 5, k: 2, gamma: 0.5, dim: 4 }, seed: 0, repetitions: 1 },
            InstanceSpec { family: Family::EntropyHb { n: 6, k: 3, gamma: 0.5, dim: 4, entries: Entries::ZeroOne }, seed: 0, repetitions: 2 },
        ];
        let recs = run_suite(&specs, &Settings::default());
        assert_eq!(recs.len(), 5);
        for r in &recs {
            assert!(r.matches_expected, "{} -> {} ({})", r.id, r.status, r.message);
        }
    }

    #[test]
    fn suite_is_deterministic_and_tabulates() {
        assert!(run_suite(&[], &Settings::default()).is_empty());
        let specs = vec![InstanceSpec { family: Family::Projection { poly: PolySpec::Esp { n: 6, k: 3 } }, seed: 0, repetitions: 3 }];
        let strip = |mut v: Vec<RunRecord>| {
            v.iter_mut().for_each(|r| r.wall_time = 0.0);
            v
        };
        let a = strip(run_suite(&specs, &Settings::default()));
        let b = strip(run_suite(&specs, &Settings::default()));
        assert_eq!(markdown_table(&a, false), markdown_table(&b, false));
        let table = markdown_table(&a, true);
        assert!(table.contains("| projection | esp(6,3) | 3 | 3/3 |"), "{table}");
        let mut csv = Vec::new();
        write_csv(&a, &mut csv).unwrap();
        assert_eq!(String::from_utf8(csv).unwrap().lines().count(), 4);
    }

    #[test]
    fn suite_file_parses() {
        let text = r#"{"instances": [
            {"family": "projection", "poly": "esp", "n": 20, "k": 5, "repetitions": 10},
            {"family": "entropy-hb", "n": 20, "k": 5, "gamma": 0.5, "entries": "pm1"},
            {"family": "unbounded-pair", "n": 20, "k1": 10, "k2": 5, "sign": "minus"}
        ]}"#;
        let suite: Suite = serde_json::from_str(text).unwrap();
        assert_eq!(suite.instances[0].family, Family::Projection { poly: PolySpec::Esp { n: 20, k: 5 } });
        assert_eq!(suite.instances[0].repetitions, 10);
        assert_eq!(suite.instances[1].family.params(), "n=20 k=5 gamma=0.5 dim=10 entries=pm1");
        assert_eq!(suite.instances[2].family.expected(), Some(Status::Unbounded));
        assert_eq!(suite.settings, Settings::default());
    }

    #[test]
    fn mean_std_is_sample_statistics() {
        let (m, s) = mean_std(&[8.0, 9.0, 10.0]);
        assert_eq!(m, 9.0);
        assert_eq!(s, 1.0);
        assert_eq!(mean_std(&[4.0]), (4.0, 0.0));
    }
}
