//! `superbethe`: command-line access to the verification workflows.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use superbethe::bethe::{
    cancellation_pairs, pair_residue_check, pole_freeness_check, solve, BAESolution, BAESystem,
    SolveConfig,
};
use superbethe::certificate::{all_passed, Certificate, Method};
use superbethe::diagrams::SkewShape;
use superbethe::duality::grading_path_transform;
use superbethe::dvf::{tableau_terms, transfer_tableau_sum, BetheData};
use superbethe::superalgebra::{enumerate_gradings, Grading};
use superbethe::verify::{
    giambelli_identity, grading_seed, hirota_suite, jacobi_trudi_identity, random_data,
    restricted_suite, sampler_for_box, series_consistency, shape_label, tsystem_grid,
    vanishing_suite, SignFault,
};
use superbethe::{Error, Result};

const SCHEMA: u32 = 1;

/// Algebras of the default verification suite, as `(r, s)`.
const DEFAULT_SUITE: [(i64, i64); 4] = [(0, 0), (1, 0), (0, 1), (1, 1)];

#[derive(Parser)]
#[command(
    name = "superbethe",
    version,
    about = "Analytic Bethe ansatz for sl(r+1|s+1) in any grading"
)]
struct Cli {
    /// Seed for every random choice in the run.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write JSON here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Algebra {
    #[arg(long, allow_hyphen_values = true)]
    r: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    s: Option<i64>,
    /// Sign string such as `+-+`.
    #[arg(long, allow_hyphen_values = true)]
    grading: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Backend {
    Exact,
    Float,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    /// Tableau sum against the column determinant.
    Jt,
    /// Tableau sum against the row determinant.
    Dual,
    Series,
    Tsystem,
    Vanishing,
    Restricted,
    /// Everything above.
    All,
}

#[derive(Subcommand)]
enum Command {
    /// List all gradings of sl(r+1|s+1) with their Dynkin diagrams.
    Gradings {
        #[arg(long, allow_hyphen_values = true)]
        r: i64,
        #[arg(long, allow_hyphen_values = true)]
        s: i64,
        /// Write the diagrams as DOT.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Dynkin diagram of one grading (distinguished if only r, s are given).
    Dynkin {
        #[command(flatten)]
        algebra: Algebra,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Admissible tableaux of a skew shape with their signed terms.
    Tableaux {
        #[command(flatten)]
        algebra: Algebra,
        /// `mu` or `mu/lambda`, parts separated by commas.
        #[arg(long)]
        shape: String,
        /// Write the pole-sharing graph of the terms as DOT.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Transfer function of a shape for random roots.
    Transfer {
        #[command(flatten)]
        algebra: Algebra,
        #[arg(long)]
        shape: String,
        /// Roots per color, comma separated (default 2 each).
        #[arg(long)]
        roots: Option<String>,
        #[arg(long, default_value_t = 2)]
        sites: usize,
        #[arg(long, value_enum, default_value_t = Backend::Exact)]
        backend: Backend,
        /// Evaluation point for the float backend.
        #[arg(long, default_value_t = 0.37, allow_hyphen_values = true)]
        at: f64,
    },
    /// Certify identities; exit status 1 if any certificate fails.
    Verify {
        #[arg(value_enum, default_value_t = Kind::All)]
        kind: Kind,
        #[command(flatten)]
        algebra: Algebra,
        #[arg(long)]
        shape: Option<String>,
        /// Box size for shapes and range for the bilinear relation.
        #[arg(long, default_value_t = 3)]
        max: usize,
        #[arg(long, value_enum, default_value_t = Backend::Exact)]
        backend: Backend,
        /// Flips the sign of the tableau with this index on the tableau side.
        #[arg(long, hide = true)]
        inject_sign_fault: Option<usize>,
    },
    /// Solve Bethe equations given as JSON and check pole-freeness.
    SolveBae {
        /// Input file; standard input if absent.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 64)]
        seeds: usize,
    },
    /// Apply particle-hole steps along a path of odd roots.
    ParticleHole {
        #[arg(long)]
        input: Option<PathBuf>,
        /// Odd root indices, comma separated.
        #[arg(long, default_value = "")]
        path: String,
        /// Which solution of a solve-bae output to use.
        #[arg(long, default_value_t = 0)]
        solution: usize,
        /// Bound on the dual equation defects.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = 1e-6)]
        match_tol: f64,
    },
}

/// A finished command: its JSON and whether every certificate passed.
struct Report {
    json: Value,
    passed: bool,
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn to_value<T: Serialize>(v: &T) -> Result<Value> {
    Ok(serde_json::to_value(v)?)
}

fn parse_list(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| usage(format!("not a count: {t:?}"))))
        .collect()
}

impl Algebra {
    fn single(&self) -> Result<Grading> {
        match (&self.grading, self.r, self.s) {
            (Some(text), _, _) => {
                let g = Grading::parse(text)?;
                if self.r.is_some_and(|r| r != g.r()) || self.s.is_some_and(|s| s != g.s()) {
                    return Err(usage("--grading disagrees with --r/--s"));
                }
                Ok(g)
            }
            (None, Some(r), Some(s)) => Grading::distinguished(r, s),
            _ => Err(usage("give --grading or both --r and --s")),
        }
    }

    fn many(&self) -> Result<Vec<Grading>> {
        match (&self.grading, self.r, self.s) {
            (Some(_), _, _) => Ok(vec![self.single()?]),
            (None, Some(r), Some(s)) => enumerate_gradings(r, s),
            (None, None, None) => Ok(DEFAULT_SUITE
                .iter()
                .flat_map(|&(r, s)| enumerate_gradings(r, s).expect("suite ranks are valid"))
                .collect()),
            _ => Err(usage("give both --r and --s")),
        }
    }
}

fn signs(g: &Grading) -> String {
    g.signs()
        .iter()
        .map(|&x| if x > 0 { '+' } else { '-' })
        .collect()
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn read_input(path: &Option<PathBuf>) -> Result<Value> {
    let text = match path {
        Some(p) => fs::read_to_string(p).map_err(|e| usage(format!("{}: {e}", p.display())))?,
        None => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| usage(e.to_string()))?;
            s
        }
    };
    Ok(serde_json::from_str(&text)?)
}

fn cmd_gradings(r: i64, s: i64, dot: &Option<PathBuf>) -> Result<Report> {
    let gradings = enumerate_gradings(r, s)?;
    let records = gradings
        .iter()
        .map(|g| {
            Ok(json!({
                "signs": signs(g),
                "grading": to_value(g)?,
                "distinguished": g.is_distinguished(),
                "odd_roots": g.odd_roots(),
                "dynkin": to_value(&g.dynkin_graph())?,
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    if let Some(path) = dot {
        let text: String = gradings.iter().map(|g| g.dynkin_graph().to_dot()).collect();
        write_text(path, &text)?;
    }
    Ok(Report {
        json: json!({"r": r, "s": s, "count": records.len(), "gradings": records}),
        passed: true,
    })
}

fn cmd_dynkin(algebra: &Algebra, dot: &Option<PathBuf>) -> Result<Report> {
    let g = algebra.single()?;
    let graph = g.dynkin_graph();
    if let Some(path) = dot {
        write_text(path, &graph.to_dot())?;
    }
    Ok(Report {
        json: json!({"signs": signs(&g), "dynkin": to_value(&graph)?}),
        passed: true,
    })
}

fn cmd_tableaux(algebra: &Algebra, shape: &str, dot: &Option<PathBuf>) -> Result<Report> {
    let g = algebra.single()?;
    let sh = SkewShape::parse(shape)?;
    let terms = tableau_terms(&g, &sh)?;
    let records: Vec<Value> = terms
        .iter()
        .map(|(t, term)| {
            json!({
                "rows": t.to_string(),
                "sign": term.sign,
                "term": term.to_string(),
            })
        })
        .collect();
    if let Some(path) = dot {
        let empty = BetheData::<Complex64>::empty(g.clone());
        write_text(path, &cancellation_pairs(&empty, &sh, 1)?.to_dot())?;
    }
    Ok(Report {
        json: json!({
            "signs": signs(&g),
            "shape": shape_label(&sh),
            "count": records.len(),
            "tableaux": records,
        }),
        passed: true,
    })
}

fn cmd_transfer(
    seed: u64,
    algebra: &Algebra,
    shape: &str,
    roots: &Option<String>,
    sites: usize,
    backend: Backend,
    at: f64,
) -> Result<Report> {
    use rand::SeedableRng;
    let g = algebra.single()?;
    let sh = SkewShape::parse(shape)?;
    let counts = match roots {
        Some(text) => parse_list(text)?,
        None => vec![2; g.rank()],
    };
    if counts.len() != g.rank() {
        return Err(usage(format!("--roots needs {} counts", g.rank())));
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(grading_seed(seed, &g));
    let d = BetheData::random_exact(&g, &counts, sites, &mut rng)?;
    let value = match backend {
        Backend::Exact => {
            json!({"backend": "exact", "function": to_value(&transfer_tableau_sum(&d, &sh)?)?})
        }
        Backend::Float => {
            let dc = d.to_complex();
            let u = Complex64::new(at, 0.0);
            let v = tableau_terms(&g, &sh)?
                .iter()
                .try_fold(Complex64::new(0.0, 0.0), |acc, (_, t)| {
                    Ok::<_, Error>(acc + t.eval(&dc, &u)?)
                })?;
            json!({"backend": "float", "at": at, "value": to_value(&v)?})
        }
    };
    Ok(Report {
        json: json!({
            "signs": signs(&g),
            "shape": shape_label(&sh),
            "data": to_value(&d)?,
            "transfer": value,
        }),
        passed: true,
    })
}

fn verify_grading(
    g: &Grading,
    seed: u64,
    kind: Kind,
    shapes: &[SkewShape],
    max: usize,
    fault: Option<SignFault>,
) -> Result<Vec<Certificate>> {
    let d = random_data(g, grading_seed(seed, g))?;
    let mut certs = Vec::new();
    let wants = |k: Kind| kind == k || kind == Kind::All;
    if wants(Kind::Jt) || wants(Kind::Dual) {
        let rows = shapes.iter().map(|s| s.mu().len()).max().unwrap_or(0);
        let cols = shapes.iter().map(|s| s.mu().part(1)).max().unwrap_or(0);
        let mut sampler = sampler_for_box(d.clone(), rows, cols);
        for sh in shapes {
            if wants(Kind::Jt) {
                certs.push(jacobi_trudi_identity(&mut sampler, sh, fault)?);
            }
            if wants(Kind::Dual) {
                certs.push(giambelli_identity(&mut sampler, sh, fault)?);
            }
        }
    }
    if wants(Kind::Series) {
        let mut sampler = sampler_for_box(d.clone(), max, max);
        certs.extend(series_consistency(&mut sampler, max, max)?);
    }
    if wants(Kind::Tsystem) || wants(Kind::Vanishing) || wants(Kind::Restricted) {
        let grid = tsystem_grid(d, max)?;
        if wants(Kind::Tsystem) {
            certs.extend(hirota_suite(&grid, max)?);
        }
        if wants(Kind::Vanishing) {
            certs.extend(vanishing_suite(&grid)?);
        }
        if wants(Kind::Restricted) {
            certs.extend(restricted_suite(&grid)?);
        }
    }
    Ok(certs)
}

fn cmd_verify(
    seed: u64,
    kind: Kind,
    algebra: &Algebra,
    shape: &Option<String>,
    max: usize,
    backend: Backend,
    fault: Option<usize>,
) -> Result<Report> {
    if backend == Backend::Float {
        return Err(usage(
            "verify certifies exact identities; use --backend exact",
        ));
    }
    if max == 0 {
        return Err(usage("--max must be positive"));
    }
    let shapes = match shape {
        Some(text) => vec![SkewShape::parse(text)?],
        None => SkewShape::all_in_box(max, max),
    };
    let fault = fault.map(|tableau| SignFault { tableau });
    let mut cases = Vec::new();
    let mut passed = true;
    for g in algebra.many()? {
        let certs = verify_grading(&g, seed, kind, &shapes, max, fault)?;
        let ok = all_passed(&certs);
        passed &= ok;
        cases.push(json!({
            "signs": signs(&g),
            "passed": ok,
            "failed": certs.iter().filter(|c| !c.passed).count(),
            "certificates": to_value(&certs)?,
        }));
    }
    Ok(Report {
        json: json!({
            "kind": to_value(&kind_name(kind))?,
            "seed": seed,
            "passed": passed,
            "cases": cases,
        }),
        passed,
    })
}

fn kind_name(kind: Kind) -> &'static str {
    match kind {
        Kind::Jt => "jt",
        Kind::Dual => "dual",
        Kind::Series => "series",
        Kind::Tsystem => "tsystem",
        Kind::Vanishing => "vanishing",
        Kind::Restricted => "restricted",
        Kind::All => "all",
    }
}

fn numeric(name: String, value: std::result::Result<f64, Error>, tol: f64) -> Certificate {
    match value {
        Ok(v) => Certificate::new(name, Method::Numeric, v < tol).with_defect(v),
        Err(e) => Certificate::new(name, Method::Numeric, false).with_detail(e.to_string()),
    }
}

fn solution_checks(sys: &BAESystem, sol: &BAESolution, tol: f64) -> Result<Vec<Certificate>> {
    let mut certs = vec![
        Certificate::new("residual", Method::Numeric, sol.residual < tol).with_defect(sol.residual),
    ];
    if !sol.collided.is_empty() {
        return Ok(certs);
    }
    let d = sol.data(sys)?;
    for b in 1..=sys.grading.rank() {
        certs.push(numeric(
            format!("pair_residue b={b}"),
            pair_residue_check(&d, b),
            1e-9,
        ));
    }
    for a in 1..=3 {
        certs.push(numeric(
            format!("pole_freeness a={a}"),
            pole_freeness_check(&d, a),
            1e-8,
        ));
    }
    Ok(certs)
}

fn cmd_solve(seed: u64, input: &Option<PathBuf>, tol: f64, seeds: usize) -> Result<Report> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(usage("--tol must be positive"));
    }
    let sys: BAESystem = serde_json::from_value(read_input(input)?)?;
    let cfg = SolveConfig {
        seeds,
        seed,
        tol,
        ..SolveConfig::default()
    };
    let report = solve(&sys, &cfg)?;
    let mut passed = true;
    let mut solutions = Vec::new();
    for sol in &report.solutions {
        let certs = solution_checks(&sys, sol, tol)?;
        passed &= all_passed(&certs);
        let mut v = to_value(sol)?;
        v["certificates"] = to_value(&certs)?;
        solutions.push(v);
    }
    Ok(Report {
        json: json!({
            "system": to_value(&sys)?,
            "config": to_value(&cfg)?,
            "passed": passed,
            "solutions": solutions,
            "seeds": to_value(&report.seeds)?,
        }),
        passed,
    })
}

fn cmd_particle_hole(
    input: &Option<PathBuf>,
    path: &str,
    index: usize,
    tol: f64,
    match_tol: f64,
) -> Result<Report> {
    let v = read_input(input)?;
    let sys: BAESystem = serde_json::from_value(
        v.get("system")
            .cloned()
            .ok_or_else(|| usage("input needs a \"system\""))?,
    )?;
    let sol_value = match (v.get("solution"), v.get("solutions")) {
        (Some(s), _) => s.clone(),
        (None, Some(list)) => list
            .get(index)
            .cloned()
            .ok_or_else(|| usage(format!("no solution with index {index}")))?,
        _ => return Err(usage("input needs \"solution\" or \"solutions\"")),
    };
    let sol: BAESolution = serde_json::from_value(sol_value)?;
    let steps = parse_list(path)?;
    let result = grading_path_transform(&sys, &sol, &steps, match_tol)?;
    let certs: Vec<Certificate> = result
        .steps
        .iter()
        .map(|s| {
            let m = s.verification.max();
            Certificate::new(format!("dual_bae b={}", s.b), Method::Numeric, m < tol).with_defect(m)
        })
        .collect();
    let passed = all_passed(&certs);
    Ok(Report {
        json: json!({
            "path": steps,
            "final_signs": signs(&result.system.grading),
            "passed": passed,
            "certificates": to_value(&certs)?,
            "result": to_value(&result)?,
        }),
        passed,
    })
}

fn run(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::Gradings { r, s, dot } => cmd_gradings(*r, *s, dot),
        Command::Dynkin { algebra, dot } => cmd_dynkin(algebra, dot),
        Command::Tableaux {
            algebra,
            shape,
            dot,
        } => cmd_tableaux(algebra, shape, dot),
        Command::Transfer {
            algebra,
            shape,
            roots,
            sites,
            backend,
            at,
        } => cmd_transfer(cli.seed, algebra, shape, roots, *sites, *backend, *at),
        Command::Verify {
            kind,
            algebra,
            shape,
            max,
            backend,
            inject_sign_fault,
        } => cmd_verify(
            cli.seed,
            *kind,
            algebra,
            shape,
            *max,
            *backend,
            *inject_sign_fault,
        ),
        Command::SolveBae { input, tol, seeds } => cmd_solve(cli.seed, input, *tol, *seeds),
        Command::ParticleHole {
            input,
            path,
            solution,
            tol,
            match_tol,
        } => cmd_particle_hole(input, path, *solution, *tol, *match_tol),
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Gradings { .. } => "gradings",
        Command::Dynkin { .. } => "dynkin",
        Command::Tableaux { .. } => "tableaux",
        Command::Transfer { .. } => "transfer",
        Command::Verify { .. } => "verify",
        Command::SolveBae { .. } => "solve-bae",
        Command::ParticleHole { .. } => "particle-hole",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let mut doc = serde_json::Map::new();
    doc.insert("schema".into(), json!(SCHEMA));
    doc.insert("command".into(), json!(command_name(&cli.command)));
    if let Value::Object(body) = report.json {
        doc.extend(body);
    }
    let mut text =
        serde_json::to_string_pretty(&Value::Object(doc)).expect("json values serialize");
    text.push('\n');
    let written = match &cli.out {
        Some(path) => fs::write(path, &text).map_err(|e| e.to_string()),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
