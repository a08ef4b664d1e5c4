//! Acceptance criteria, one PASS/FAIL line each.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use hyposolve::barriers::{soc_pencil, Block, DirectSum};
use hyposolve::bench::{gen_entropy_hb, gen_projection, gen_unbounded_pair, Entries, PolySpec, Sign};
use hyposolve::builders::{
    compose_esp_with_linear_forms, directional_derivative, esp, esp_with_stats, lorentz, product_of_linear_forms,
    spanning_tree_poly, vamos, vamos_like, LinearFormMatrix, SimpleGraph,
};
use hyposolve::cone::HyperbolicCone;
use hyposolve::ipm::{solve, DomainDrivenProblem, Settings, Solver, Status};
use hyposolve::{mono_to_slp, Monomial, Poly, Slp};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn normal_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| StandardNormal.sample(rng)).collect()
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn squarefree(n: usize, vars: &[usize], coef: f64) -> Monomial<f64> {
    let mut exponents = vec![0; n];
    for &v in vars {
        exponents[v] += 1;
    }
    Monomial { exponents, coef }
}

fn esp_mono(n: usize, k: usize) -> Poly {
    Poly::new(n, subsets(n, k).iter().map(|s| squarefree(n, s, 1.0)).collect()).unwrap()
}

fn vamos_mono() -> Poly {
    let excluded = [[0, 1, 2, 3], [0, 1, 4, 5], [0, 1, 6, 7], [2, 3, 4, 5], [4, 5, 6, 7]];
    let mut terms: Vec<_> = subsets(8, 4).iter().map(|s| squarefree(8, s, 1.0)).collect();
    terms.extend(excluded.iter().map(|s| squarefree(8, s, -1.0)));
    Poly::new(8, terms).unwrap()
}

fn vamos_like_mono(m: usize) -> Poly {
    let n = 2 * m;
    let pair = |a: usize, b: usize| squarefree(n, &[2 * a, 2 * a + 1, 2 * b, 2 * b + 1], -1.0);
    let mut terms: Vec<_> = subsets(n, 4).iter().map(|s| squarefree(n, s, 1.0)).collect();
    terms.extend((1..m).map(|k| pair(0, k)));
    terms.extend((1..m - 1).map(|k| pair(k, k + 1)));
    Poly::new(n, terms).unwrap()
}

fn linprod_mono(rows: &[Vec<f64>]) -> Poly {
    let n = rows[0].len();
    let mut acc: BTreeMap<Vec<u32>, f64> = BTreeMap::from([(vec![0; n], 1.0)]);
    for row in rows {
        let mut next = BTreeMap::new();
        for (e, c) in &acc {
            for (j, a) in row.iter().enumerate() {
                let mut e2 = e.clone();
                e2[j] += 1;
                *next.entry(e2).or_insert(0.0) += c * a;
            }
        }
        acc = next;
    }
    Poly::new(n, acc.into_iter().map(|(exponents, coef)| Monomial { exponents, coef }).collect()).unwrap()
}

/// The same polynomial with absolute coefficients, giving the rounding scale at `|x|`.
fn abs_poly(p: &Poly) -> Poly {
    let terms = p.terms().iter().map(|t| Monomial { exponents: t.exponents.clone(), coef: t.coef.abs() }).collect();
    Poly::new(p.num_vars(), terms).unwrap()
}

fn c1_ad_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut cases: Vec<(String, Slp, Poly)> = Vec::new();
    for n in [4, 8, 12] {
        for k in 1..=6.min(n) {
            cases.push((format!("esp({n},{k})"), esp(n, k).unwrap(), esp_mono(n, k)));
        }
    }
    cases.push(("vamos".into(), vamos(), vamos_mono()));
    for m in 4..=6 {
        cases.push((format!("vamos_like({m})"), vamos_like(m).unwrap(), vamos_like_mono(m)));
    }
    for (l, m) in [(2, 3), (4, 4), (6, 6), (6, 3)] {
        let rows: Vec<Vec<f64>> = (0..l).map(|_| normal_vec(&mut rng, m)).collect();
        let slp = product_of_linear_forms(&LinearFormMatrix::from_rows(rows.clone()).unwrap()).unwrap();
        cases.push((format!("linprod({l},{m})"), slp, linprod_mono(&rows)));
    }
    let mut worst = 0.0f64;
    let mut worst_case = String::new();
    for (name, slp, mono) in &cases {
        let abs = abs_poly(mono);
        for _ in 0..100 {
            let x = normal_vec(&mut rng, slp.num_vars());
            let ax: Vec<f64> = x.iter().map(|v| v.abs()).collect();
            let (v, g, h) = slp.value_gradient_hessian(&x).unwrap();
            let errs = [
                (v - mono.eval(&x).unwrap()).abs() / abs.eval(&ax).unwrap().max(f64::MIN_POSITIVE),
                max_diff(&g, &mono.gradient(&x).unwrap()) / inf_norm(&abs.gradient(&ax).unwrap()).max(f64::MIN_POSITIVE),
                (h - mono.hessian(&x).unwrap()).amax() / abs.hessian(&ax).unwrap().amax().max(f64::MIN_POSITIVE),
            ];
            for e in errs {
                if e > worst {
                    worst = e;
                    worst_case = name.clone();
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst <= 1e-10 && secs < 60.0,
        format!("{} programs x 100 points, worst relative error {worst:.1e} ({worst_case}), {secs:.1} s", cases.len()),
    )
}

fn random_builder(rng: &mut ChaCha8Rng, i: usize) -> (String, Slp) {
    match i % 7 {
        0 => {
            let n = rng.random_range(2..=9);
            let k = rng.random_range(1..=n);
            (format!("esp({n},{k})"), esp(n, k).unwrap())
        }
        1 => {
            let m = rng.random_range(4..=6);
            (format!("vamos_like({m})"), vamos_like(m).unwrap())
        }
        2 => {
            let (l, m) = (rng.random_range(1..=5), rng.random_range(1..=5));
            let rows = (0..l).map(|_| normal_vec(rng, m)).collect();
            (format!("linprod({l},{m})"), product_of_linear_forms(&LinearFormMatrix::from_rows(rows).unwrap()).unwrap())
        }
        3 => {
            let (l, m) = (rng.random_range(2..=6), rng.random_range(2..=4));
            let k = rng.random_range(1..=l);
            let rows = (0..l).map(|_| normal_vec(rng, m).iter().map(|v| v.abs() + 0.1).collect()).collect();
            let e = vec![1.0; m];
            (format!("compose({k},{l},{m})"), compose_esp_with_linear_forms(k, &LinearFormMatrix::from_rows(rows).unwrap(), &e).unwrap())
        }
        4 => {
            let n = rng.random_range(3..=8);
            let k = rng.random_range(2..=n);
            (format!("dirderiv esp({n},{k})"), directional_derivative(&esp(n, k).unwrap(), &vec![1.0; n]).unwrap())
        }
        5 => {
            let m = rng.random_range(2..=6);
            (format!("lorentz({m})"), lorentz(m).unwrap())
        }
        _ => {
            let n = rng.random_range(3..=5);
            (format!("spantree(K{n})"), mono_to_slp(&spanning_tree_poly::<f64>(&SimpleGraph::complete(n)).unwrap()).unwrap())
        }
    }
}

fn c2_finite_differences() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut worst_g, mut worst_h) = (0.0f64, 0.0f64);
    for i in 0..50 {
        let (_, slp) = random_builder(&mut rng, i);
        let x = normal_vec(&mut rng, slp.num_vars());
        let g = slp.gradient(&x).unwrap();
        let h = slp.hessian(&x).unwrap();
        let m = x.len();
        let mut gfd = vec![0.0; m];
        let mut hfd = DMatrix::zeros(m, m);
        for j in 0..m {
            let step = 1e-5 * (1.0 + x[j].abs());
            let (mut xp, mut xm) = (x.clone(), x.clone());
            xp[j] += step;
            xm[j] -= step;
            gfd[j] = (slp.value(&xp).unwrap() - slp.value(&xm).unwrap()) / (2.0 * step);
            let (gp, gm) = (slp.gradient(&xp).unwrap(), slp.gradient(&xm).unwrap());
            for r in 0..m {
                hfd[(r, j)] = (gp[r] - gm[r]) / (2.0 * step);
            }
        }
        let eg = max_diff(&g, &gfd) / inf_norm(&g).max(1.0);
        let eh = (&h - &hfd).amax() / h.amax().max(1.0);
        worst_g = worst_g.max(eg);
        worst_h = worst_h.max(eh);
    }
    outcome(
        worst_g <= 1e-6 && worst_h <= 1e-4,
        format!("50 random programs, worst gradient {worst_g:.1e}, worst Hessian {worst_h:.1e}"),
    )
}

fn c3_complexity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut worst_g, mut worst_h) = (0.0f64, 0.0f64);
    for i in 0..70 {
        let (_, slp) = random_builder(&mut rng, i);
        let n_nodes = slp.node_count() as f64;
        let x = normal_vec(&mut rng, slp.num_vars());
        let (_, _, rev) = slp.gradient_counted(&x).unwrap();
        let (_, hc) = slp.hessian_counted(&x).unwrap();
        worst_g = worst_g.max(rev.scalar as f64 / n_nodes);
        worst_h = worst_h.max(hc.rows as f64 / n_nodes);
    }
    for slp in [vamos(), esp(100, 10).unwrap()] {
        let x = normal_vec(&mut rng, slp.num_vars());
        let n_nodes = slp.node_count() as f64;
        worst_g = worst_g.max(slp.gradient_counted(&x).unwrap().2.scalar as f64 / n_nodes);
        worst_h = worst_h.max(slp.hessian_counted(&x).unwrap().1.rows as f64 / n_nodes);
    }
    let mut worst_esp = 0.0f64;
    for n in [10, 50, 100, 250, 500] {
        for k in [1, 2, 5, n / 4, n / 2, n] {
            let (p, _) = esp_with_stats::<f64>(n, k.max(1)).unwrap();
            worst_esp = worst_esp.max(p.node_count() as f64 / (n * k.max(1)) as f64);
        }
    }
    outcome(
        worst_g <= 6.0 && worst_h <= 6.0 && worst_esp <= 4.0,
        format!("gradient ops/N <= {worst_g:.2}, Hessian row ops/N <= {worst_h:.2}, esp nodes/(nk) <= {worst_esp:.2}"),
    )
}

fn random_interior(block: &Block, rng: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let v: Vec<f64> = match block {
            Block::Lp { dim } => (0..*dim).map(|_| rng.random_range(0.05..5.0)).collect(),
            Block::Soc { dim } => {
                let tail = normal_vec(rng, dim - 1);
                let r = tail.iter().map(|t| t * t).sum::<f64>().sqrt();
                std::iter::once(r + rng.random_range(0.05..2.0)).chain(tail).collect()
            }
            Block::Entr { pairs } => (0..*pairs)
                .flat_map(|_| {
                    let x: f64 = rng.random_range(0.05..5.0);
                    [x, x * x.ln() + rng.random_range(0.05..2.0)]
                })
                .collect(),
            _ => {
                let e = block.interior_point();
                let scale = rng.random_range(0.5..2.0);
                let z = normal_vec(rng, e.len());
                e.iter().zip(z).map(|(a, b)| scale * a + 0.3 * b).collect()
            }
        };
        if block.contains_interior(&v, &block.interior_point()).unwrap_or(false) {
            return v;
        }
    }
}

fn c4_barrier_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let hb = |p: Slp, e: Vec<f64>| Block::Hb(HyperbolicCone::new(p, e).unwrap());
    let blocks = [
        ("LP", Block::Lp { dim: 5 }),
        ("SOC", Block::Soc { dim: 4 }),
        ("HB esp(6,3)", hb(esp(6, 3).unwrap(), vec![1.0; 6])),
        ("HB vamos", hb(vamos(), vec![1.0; 8])),
        ("DET", Block::Det(soc_pencil())),
        ("ENTR", Block::Entr { pairs: 3 }),
    ];
    let (mut worst_lh, mut worst_hx, mut worst_psd) = (0.0f64, 0.0f64, 0.0f64);
    let mut notes = Vec::new();
    for (name, block) in &blocks {
        for _ in 0..100 {
            let v = random_interior(block, &mut rng);
            let ev = block.eval(&v).unwrap();
            let h = &ev.hessian;
            let eig = h.clone().symmetric_eigenvalues();
            let min_eig = eig.iter().cloned().fold(f64::INFINITY, f64::min);
            worst_psd = worst_psd.max(-min_eig / h.norm().max(f64::MIN_POSITIVE));
            if block.is_conic() {
                let x = DVector::from_column_slice(&v);
                let lh = (ev.gradient.dot(&x) + block.theta()).abs();
                let hx = (h * &x + &ev.gradient).amax() / ev.gradient.amax().max(1.0);
                worst_lh = worst_lh.max(lh);
                worst_hx = worst_hx.max(hx);
            }
        }
        if !block.is_conic() {
            notes.push(*name);
        }
    }
    outcome(
        worst_lh <= 1e-9 && worst_hx <= 1e-8 && worst_psd <= 1e-8,
        format!(
            "|<g,x> + theta| <= {worst_lh:.1e}, |Hx + g| <= {worst_hx:.1e}, PSD slack {worst_psd:.1e}; homogeneity identities skipped for non-conic {}",
            notes.join(", ")
        ),
    )
}

fn c5_analytic_projection() -> Outcome {
    let start = Instant::now();
    let p = gen_projection(PolySpec::Lorentz { m: 3 }, 0, Some(vec![0.0, 2.0, 0.0])).unwrap();
    let r = solve(&p, &Settings::default());
    let secs = start.elapsed().as_secs_f64();
    let err = r.x[1..].iter().zip([1.0, 1.0, 0.0]).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    outcome(
        r.status == Status::Optimal && err <= 1e-6 && r.max_residual() <= 1e-8 && secs < 5.0,
        format!(
            "{} in {} iterations, |x - (1,1,0)| = {err:.1e}, max residual {:.1e}, {secs:.2} s",
            r.status.as_str(),
            r.iterations,
            r.max_residual()
        ),
    )
}

fn c6_benchmark_iterations() -> Outcome {
    let settings = Settings::default();
    let mut ok = true;
    let mut slowest = 0.0f64;
    let mut run = |p: &DomainDrivenProblem| {
        let start = Instant::now();
        let r = solve(p, &settings);
        slowest = slowest.max(start.elapsed().as_secs_f64());
        r
    };
    let proj: Vec<_> = (1..=10)
        .map(|seed| run(&gen_projection(PolySpec::Esp { n: 20, k: 5 }, seed, None).unwrap()))
        .collect();
    let proj_ok = proj.iter().all(|r| r.status == Status::Optimal);
    let mean = proj.iter().map(|r| r.iterations as f64).sum::<f64>() / proj.len() as f64;
    ok &= proj_ok && (5.0..=30.0).contains(&mean);
    let ent = run(&gen_entropy_hb(20, 5, 0.5, 10, Entries::ZeroOne, 1).unwrap());
    ok &= ent.status == Status::Optimal && (6..=40).contains(&ent.iterations);
    let plus = run(&gen_unbounded_pair(20, 10, 5, Sign::Plus).unwrap());
    let minus = run(&gen_unbounded_pair(20, 10, 5, Sign::Minus).unwrap());
    ok &= plus.status == Status::Optimal && minus.status == Status::Unbounded;
    ok &= slowest < 60.0;
    outcome(
        ok,
        format!(
            "projection esp(20,5) {}/10 Optimal, mean {mean:.1} iterations; entropy-hb {} in {}; unbounded-pair + {} in {}, - {} in {}; slowest {slowest:.2} s",
            proj.iter().filter(|r| r.status == Status::Optimal).count(),
            ent.status.as_str(),
            ent.iterations,
            plus.status.as_str(),
            plus.iterations,
            minus.status.as_str(),
            minus.iterations
        ),
    )
}

fn c7_scaling() -> Outcome {
    let start = Instant::now();
    let p = gen_projection(PolySpec::Esp { n: 100, k: 10 }, 1, None).unwrap();
    let r = solve(&p, &Settings::default());
    let secs = start.elapsed().as_secs_f64();
    outcome(
        r.status == Status::Optimal && r.iterations <= 200 && r.max_residual() <= 1e-8 && secs < 600.0,
        format!("esp(100,10) {} in {} iterations, max residual {:.1e}, {secs:.1} s", r.status.as_str(), r.iterations, r.max_residual()),
    )
}

fn c8_certificates() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut cases: Vec<(String, Slp, Vec<f64>)> = vec![
        ("esp(6,3)".into(), esp(6, 3).unwrap(), vec![1.0; 6]),
        ("esp(10,10)".into(), esp(10, 10).unwrap(), vec![1.0; 10]),
        ("vamos".into(), vamos(), vec![1.0; 8]),
        ("vamos_like(6)".into(), vamos_like(6).unwrap(), vec![1.0; 12]),
        ("lorentz(5)".into(), lorentz(5).unwrap(), vec![1.0, 0.0, 0.0, 0.0, 0.0]),
        (
            "spantree(K4)".into(),
            mono_to_slp(&spanning_tree_poly::<f64>(&SimpleGraph::complete(4)).unwrap()).unwrap(),
            vec![1.0; 6],
        ),
        ("dirderiv esp(6,4)".into(), directional_derivative(&esp(6, 4).unwrap(), &[1.0; 6]).unwrap(), vec![1.0; 6]),
    ];
    let rows: Vec<Vec<f64>> = (0..5).map(|_| normal_vec(&mut rng, 3)).collect();
    let e = vec![1.0, 0.0, 0.0];
    let rows: Vec<Vec<f64>> = rows
        .into_iter()
        .map(|mut r| {
            r[0] = r[0].abs() + 0.5;
            r
        })
        .collect();
    cases.push(("linprod(5,3)".into(), product_of_linear_forms(&LinearFormMatrix::from_rows(rows.clone()).unwrap()).unwrap(), e.clone()));
    cases.push(("compose(3,5,3)".into(), compose_esp_with_linear_forms(3, &LinearFormMatrix::from_rows(rows).unwrap(), &e).unwrap(), e));
    let mut failed = Vec::new();
    let mut worst = 0.0f64;
    for (name, slp, e) in cases.iter() {
        let report = HyperbolicCone::new(slp.clone(), e.clone()).unwrap().check_hyperbolicity(200, 8);
        worst = worst.max(report.max_residue);
        if !report.passed {
            failed.push(name.clone());
        }
    }
    let sq = Poly::new(2, vec![Monomial { exponents: vec![2, 0], coef: 1.0 }, Monomial { exponents: vec![0, 2], coef: 1.0 }]).unwrap();
    let sq_report = HyperbolicCone::new(mono_to_slp(&sq).unwrap(), vec![1.0, 0.0]).unwrap().check_hyperbolicity(200, 8);
    outcome(
        failed.is_empty() && !sq_report.passed,
        format!(
            "{} builders pass (worst residue {worst:.1e}){}; x1^2 + x2^2 {} with residue {:.2}",
            cases.len() - failed.len(),
            if failed.is_empty() { String::new() } else { format!(", failed: {}", failed.join(", ")) },
            if sq_report.passed { "passes" } else { "fails" },
            sq_report.max_residue
        ),
    )
}

fn lp3() -> DomainDrivenProblem {
    let rows = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [-1.0, -1.0, -1.0]];
    let a = DMatrix::from_fn(4, 3, |i, j| rows[i][j]);
    let blocks = DirectSum::new(vec![Block::Lp { dim: 4 }]);
    DomainDrivenProblem::new(DVector::from_column_slice(&[1.0, 2.0, 3.0]), a, DVector::from_column_slice(&[0.0, 0.0, 0.0, 3.0]), blocks)
        .unwrap()
}

fn c9_corrector_contract() -> Outcome {
    let settings = Settings::default();
    let problems = [
        lp3(),
        gen_projection(PolySpec::Lorentz { m: 3 }, 0, Some(vec![0.0, 2.0, 0.0])).unwrap(),
        gen_projection(PolySpec::Esp { n: 6, k: 3 }, 1, None).unwrap(),
        gen_entropy_hb(6, 3, 0.5, 4, Entries::ZeroOne, 1).unwrap(),
    ];
    let mut worst_zero = 0.0f64;
    for p in &problems {
        let s = Solver::new(p, settings.clone()).unwrap();
        let it = s.initial_iterate();
        let d = s.corrector_direction(&it).unwrap();
        let r = s.recenter_direction(&it, &s.system(&it).unwrap()).unwrap();
        for v in [d.dxbar.amax(), d.dy.amax(), d.dtau.abs(), r.dxbar.amax(), r.dy.amax()] {
            worst_zero = worst_zero.max(v);
        }
    }
    let p = lp3();
    let s = Solver::new(&p, settings).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst_ratio = 0.0f64;
    for _ in 0..20 {
        let mut it = s.initial_iterate();
        for v in it.xbar.iter_mut() {
            *v = rng.random_range(-0.03..0.03);
        }
        let mu = s.mu_of(&it).unwrap();
        for _ in 0..2 {
            let before = s.newton_residual(&it, mu).unwrap();
            if before < 1e-12 {
                break;
            }
            let next = it.step(&s.corrector_direction(&it).unwrap(), 1.0);
            worst_ratio = worst_ratio.max(s.newton_residual(&next, mu).unwrap() / before);
            it = next;
        }
    }
    outcome(
        worst_zero <= 1e-10 && worst_ratio <= 0.5,
        format!("largest direction entry at central points {worst_zero:.1e}; worst residual ratio per corrector step {worst_ratio:.2e}"),
    )
}

fn c10_determinantal() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let det = Block::Det(soc_pencil());
    let hb = HyperbolicCone::new(lorentz(3).unwrap(), vec![1.0, 0.0, 0.0]).unwrap();
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let v = random_interior(&Block::Soc { dim: 3 }, &mut rng);
        let a = det.eval(&v).unwrap();
        let b = hb.barrier(&v).unwrap();
        let errs = [
            (a.value - b.value).abs() / b.value.abs().max(1.0),
            (&a.gradient - &b.gradient).amax() / b.gradient.amax().max(1.0),
            (&a.hessian - &b.hessian).amax() / b.hessian.amax().max(1.0),
        ];
        worst = errs.iter().fold(worst, |m, e| m.max(*e));
    }
    outcome(worst <= 1e-9, format!("100 interior points, worst relative difference {worst:.1e}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("AD oracle equivalence", c1_ad_oracle),
        ("finite differences", c2_finite_differences),
        ("complexity counts", c3_complexity),
        ("barrier identities", c4_barrier_identities),
        ("analytic SOC projection", c5_analytic_projection),
        ("benchmark iteration counts", c6_benchmark_iterations),
        ("esp(100,10) scaling", c7_scaling),
        ("hyperbolicity certificates", c8_certificates),
        ("corrector contract", c9_corrector_contract),
        ("determinantal cross-check", c10_determinantal),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        if !o.pass {
            failures += 1;
        }
        println!("{} criterion {:2} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
