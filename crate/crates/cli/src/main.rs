use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use hyposolve::bench::{self, Entries, Family, PolySpec, Sign, Suite};
use hyposolve::builders::{self, LinearFormMatrix, SimpleGraph};
use hyposolve::cone::HyperbolicCone;
use hyposolve::format;
use hyposolve::ipm::{self, Settings};
use hyposolve::{mono_to_slp, Slp};

/// Hyperbolic programming over straight-line-program polynomials.
#[derive(Parser)]
#[command(name = "hyposolve", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a problem file and print the result as JSON.
    Solve(SolveArgs),
    /// Build a polynomial and write it as SLP JSON.
    Poly(PolyArgs),
    /// Validate an SLP and test hyperbolicity in a direction.
    Check(CheckArgs),
    /// Generate a benchmark instance.
    Gen(GenArgs),
    /// Run a benchmark suite.
    Bench(BenchArgs),
}

#[derive(Args)]
struct SolveArgs {
    problem: PathBuf,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long)]
    xi: Option<f64>,
    /// Write the iteration log as CSV.
    #[arg(long)]
    log: Option<PathBuf>,
    /// Write the result JSON here instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct PolyArgs {
    #[command(subcommand)]
    family: PolyFamily,
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum PolyFamily {
    /// Elementary symmetric polynomial e_k in n variables.
    Esp {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// Vamos matroid basis generating polynomial.
    Vamos,
    /// Vamos-like polynomial in 2m variables.
    VamosLike {
        #[arg(long)]
        m: usize,
    },
    /// Lorentz form x1^2 - x2^2 - ... - xm^2.
    Lorentz {
        #[arg(long)]
        m: usize,
    },
    /// Product of linear forms, rows separated by ';'.
    Linprod {
        #[arg(long)]
        forms: String,
    },
    /// e_k of normalized linear forms, hyperbolic in direction `dir`.
    Compose {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        forms: String,
        #[arg(long)]
        dir: String,
    },
    /// Directional derivative of an SLP file in direction `dir`.
    Dirderiv {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        dir: String,
    },
    /// Spanning tree polynomial of a graph given as "0-1,1-2,..." or of K_n.
    Spantree {
        #[arg(long)]
        vertices: Option<usize>,
        #[arg(long)]
        edges: Option<String>,
        #[arg(long, conflicts_with_all = ["vertices", "edges"])]
        complete: Option<usize>,
    },
}

#[derive(Args)]
struct CheckArgs {
    slp: PathBuf,
    /// Hyperbolicity direction, comma separated.
    #[arg(long)]
    dir: String,
    #[arg(long, default_value_t = 200)]
    lines: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Print JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct GenArgs {
    #[command(subcommand)]
    family: GenFamily,
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GenFamily {
    /// min sum x ln x subject to an esp(n,k) cone constraint and x >= gamma.
    EntropyHb {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        gamma: f64,
        #[arg(long, default_value_t = 10)]
        dim: usize,
        #[arg(long, default_value = "01")]
        entries: Entries,
    },
    /// Entropy instance that is infeasible when gamma * dim > 1.
    EntropyInfeasible {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        gamma: f64,
        #[arg(long, default_value_t = 10)]
        dim: usize,
    },
    /// Entropy instance over a Vamos-like cone.
    VamosEntropy {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        gamma: f64,
        #[arg(long, default_value_t = 10)]
        dim: usize,
        #[arg(long, default_value = "01")]
        entries: Entries,
    },
    /// Euclidean projection of a random point onto a hyperbolicity cone.
    Projection {
        /// esp, vamos-like or lorentz.
        #[arg(long)]
        poly: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        /// Fixed point to project instead of a random one.
        #[arg(long)]
        center: Option<String>,
    },
    /// Linear objective over the slice of the esp cone through 1.
    EspSlice {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// Direct sum of two esp cones with objective sum (x +- y).
    UnboundedPair {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k1: usize,
        #[arg(long)]
        k2: usize,
        #[arg(long, allow_hyphen_values = true)]
        sign: Sign,
    },
}

#[derive(Args)]
struct BenchArgs {
    suite: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
    /// Omit wall times from the printed table.
    #[arg(long)]
    no_time: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = match cli.command {
        Command::Solve(a) => solve(a),
        Command::Poly(a) => poly(a).map(|_| 0),
        Command::Check(a) => check(a),
        Command::Gen(a) => gen(a).map(|_| 0),
        Command::Bench(a) => run_bench(a),
    };
    match run {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write_or_print(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => out(&format!("{text}\n")),
    }
}

/// Writes to stdout, treating a closed pipe as success.
fn out(text: &str) -> Result<()> {
    match std::io::stdout().write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn parse_vector(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().with_context(|| format!("bad number {t:?}")))
        .collect()
}

fn parse_matrix(s: &str) -> Result<Vec<Vec<f64>>> {
    s.split(';').map(parse_vector).collect()
}

fn parse_edges(s: &str) -> Result<Vec<(usize, usize)>> {
    s.split(',')
        .map(|t| {
            let (a, b) = t.trim().split_once('-').with_context(|| format!("bad edge {t:?}, expected a-b"))?;
            Ok((a.trim().parse()?, b.trim().parse()?))
        })
        .collect()
}

fn solve(a: SolveArgs) -> Result<u8> {
    let problem = format::read_problem(&read(&a.problem)?)?;
    let mut settings = Settings::default();
    if let Some(t) = a.tol {
        settings.tol = t;
    }
    if let Some(m) = a.max_iter {
        settings.max_iter = m;
    }
    if let Some(x) = a.xi {
        settings.xi = x;
    }
    let r = ipm::solve(&problem, &settings);
    if let Some(path) = &a.log {
        let f = fs::File::create(path).with_context(|| format!("writing {}", path.display()))?;
        ipm::write_log_csv(&r.log, f)?;
    }
    eprintln!(
        "{} after {} iterations, objective {:.10e}, max residual {:.2e}{}",
        r.status.as_str(),
        r.iterations,
        r.objective,
        r.max_residual(),
        if r.message.is_empty() { String::new() } else { format!(" ({})", r.message) }
    );
    write_or_print(a.output.as_deref(), &format::write_result(&r))?;
    Ok(r.status.exit_code() as u8)
}

fn poly(a: PolyArgs) -> Result<()> {
    let program: Slp = match a.family {
        PolyFamily::Esp { n, k } => builders::esp(n, k)?,
        PolyFamily::Vamos => builders::vamos(),
        PolyFamily::VamosLike { m } => builders::vamos_like(m)?,
        PolyFamily::Lorentz { m } => builders::lorentz(m)?,
        PolyFamily::Linprod { forms } => {
            builders::product_of_linear_forms(&LinearFormMatrix::from_rows(parse_matrix(&forms)?)?)?
        }
        PolyFamily::Compose { k, forms, dir } => builders::compose_esp_with_linear_forms(
            k,
            &LinearFormMatrix::from_rows(parse_matrix(&forms)?)?,
            &parse_vector(&dir)?,
        )?,
        PolyFamily::Dirderiv { input, dir } => {
            let base = Slp::from_json(&read(&input)?)?;
            builders::directional_derivative(&base, &parse_vector(&dir)?)?
        }
        PolyFamily::Spantree { vertices, edges, complete } => {
            let graph = match (complete, vertices, edges) {
                (Some(n), _, _) => SimpleGraph::complete(n),
                (None, Some(v), Some(e)) => SimpleGraph::new(v, parse_edges(&e)?)?,
                _ => bail!("spantree needs --complete N or both --vertices and --edges"),
            };
            mono_to_slp(&builders::spanning_tree_poly::<f64>(&graph)?)?
        }
    };
    write_or_print(a.output.as_deref(), &program.to_json())
}

fn check(a: CheckArgs) -> Result<u8> {
    let program = Slp::from_json(&read(&a.slp)?)?;
    let v = program.validate()?;
    let dir = parse_vector(&a.dir)?;
    let cone = HyperbolicCone::new(program, dir);
    let report = cone.as_ref().ok().map(|c| c.check_hyperbolicity(a.lines, a.seed));
    let passed = v.homogeneous && report.as_ref().is_some_and(|r| r.passed);
    if a.json {
        let report_json = serde_json::json!({
            "num_vars": v.num_vars,
            "node_count": v.node_count,
            "degree": v.output_degree,
            "homogeneous": v.homogeneous,
            "p_at_dir": cone.as_ref().ok().map(|c| c.p_at_e()),
            "direction_error": cone.as_ref().err().map(|e| e.to_string()),
            "hyperbolicity": report,
            "passed": passed,
        });
        out(&format!("{}\n", serde_json::to_string_pretty(&report_json)?))?;
    } else {
        let mut text = format!(
            "variables   {}\nnodes       {}\ndegree      {}\nhomogeneous {}\n",
            v.num_vars, v.node_count, v.output_degree, v.homogeneous
        );
        match (&cone, &report) {
            (Ok(c), Some(r)) => text.push_str(&format!(
                "p(dir)      {:.6e}\nlines       {} ({} skipped)\nmax residue {:.3e}\n",
                c.p_at_e(),
                r.trials,
                r.skipped,
                r.max_residue
            )),
            (Err(e), _) => text.push_str(&format!("direction   rejected: {e}\n")),
            _ => {}
        }
        text.push_str(if passed { "PASS\n" } else { "FAIL\n" });
        out(&text)?;
    }
    Ok(if passed { 0 } else { 1 })
}

fn projection_poly(poly: &str, n: Option<usize>, k: Option<usize>, m: Option<usize>) -> Result<PolySpec> {
    let need = |v: Option<usize>, name: &str| v.with_context(|| format!("--poly {poly} needs --{name}"));
    Ok(match poly {
        "esp" => PolySpec::Esp { n: need(n, "n")?, k: need(k, "k")? },
        "vamos-like" => PolySpec::VamosLike { m: need(m, "m")? },
        "lorentz" => PolySpec::Lorentz { m: need(m, "m")? },
        _ => bail!("unknown projection polynomial {poly} (use esp, vamos-like or lorentz)"),
    })
}

fn gen(a: GenArgs) -> Result<()> {
    let problem = match a.family {
        GenFamily::EntropyHb { n, k, gamma, dim, entries } => Family::EntropyHb { n, k, gamma, dim, entries }.generate(a.seed)?,
        GenFamily::EntropyInfeasible { n, k, gamma, dim } => Family::EntropyInfeasible { n, k, gamma, dim }.generate(a.seed)?,
        GenFamily::VamosEntropy { m, gamma, dim, entries } => Family::VamosEntropy { m, gamma, dim, entries }.generate(a.seed)?,
        GenFamily::Projection { poly, n, k, m, center } => {
            let spec = projection_poly(&poly, n, k, m)?;
            let center = center.as_deref().map(parse_vector).transpose()?;
            bench::gen_projection(spec, a.seed, center)?
        }
        GenFamily::EspSlice { n, k } => Family::EspSlice { n, k }.generate(a.seed)?,
        GenFamily::UnboundedPair { n, k1, k2, sign } => Family::UnboundedPair { n, k1, k2, sign }.generate(a.seed)?,
    };
    write_or_print(a.output.as_deref(), &format::write_problem(&problem))
}

fn run_bench(a: BenchArgs) -> Result<u8> {
    let suite: Suite = serde_json::from_str(&read(&a.suite)?).context("parsing suite")?;
    let records = bench::run_suite(&suite.instances, &suite.settings);
    let f = fs::File::create(&a.output).with_context(|| format!("writing {}", a.output.display()))?;
    bench::write_csv(&records, f)?;
    out(&bench::markdown_table(&records, !a.no_time))?;
    let misses = records.iter().filter(|r| !r.matches_expected).count();
    if misses > 0 {
        eprintln!("{misses} of {} runs did not reach the expected status", records.len());
        return Ok(1);
    }
    Ok(0)
}
