//! Batch command-line front end: every computation route exposed as a
//! subcommand that emits machine-readable CSV or JSON tables.
//!
//! All flags can also come from a TOML file via --config; explicit flags
//! override file values. Identical job specifications (including the seed)
//! produce byte-identical output.

use crate::closedform;
use crate::error::Error;
use crate::gap::{factorization_check, gap_probability};
use crate::geometry::GapGeometry;
use crate::mc::{dump_samples, empirical_gap, Ensemble};
use crate::ode::gauss::integrate_gauss;
use crate::ode::jacobi::{integrate_jacobi, JacobiFamily};
use crate::ode::series::small_s_recursion;
use crate::ode::SolverConfig;
use crate::orthopoly::{OrthonormalBasis, WeightSpec};
use crate::painleve::pv::{integrate_pv, map_pv, pv_seed_from_closedform};
use crate::painleve::pvi::{integrate_pvi, map_pvi, pvi_seed_from_closedform};
use crate::painleve::BranchChoice;
use crate::quadrature::QuadratureRule;
use crate::scaling::{edge_scaling_deviation, j2h_deviation};
use clap::{Args, Parser, Subcommand};
use std::io::Write;
use std::path::PathBuf;

const EXIT_OK: i32 = 0;
const EXIT_USAGE: i32 = 1;
const EXIT_DOMAIN: i32 = 2;
const EXIT_NUMERICAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "rmt-gaps", about = "Gap probabilities for finite Gaussian and Jacobi unitary ensembles", disable_help_subcommand = true)]
struct Cli {
    /// TOML file holding default values for every flag (flags override it).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output format: csv or json.
    #[arg(long, global = true)]
    format: Option<String>,
    /// Write the table to this path instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Args, Debug, Default, Clone)]
struct CommonArgs {
    /// hermite or jacobi.
    #[arg(long)]
    ensemble: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<f64>,
    #[arg(long = "N", visible_alias = "n")]
    n: Option<usize>,
    /// exterior, jacobi-exterior, or interior.
    #[arg(long)]
    geometry: Option<String>,
    /// Inclusive grid start:stop:count.
    #[arg(long = "s-grid")]
    s_grid: Option<String>,
    /// Single gap parameter (alternative to --s-grid).
    #[arg(long)]
    s: Option<f64>,
    #[arg(long = "quad-order")]
    quad_order: Option<usize>,
    #[arg(long = "rel-tol")]
    rel_tol: Option<f64>,
    #[arg(long = "abs-tol")]
    abs_tol: Option<f64>,
    /// Painleve branch sign (+1 or -1).
    #[arg(long, allow_hyphen_values = true)]
    eps1: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    samples: Option<usize>,
    /// Write sampled spectra to this path (mc only).
    #[arg(long)]
    dump: Option<PathBuf>,
    /// Comma-separated N values (edge-scaling only).
    #[arg(long = "N-list")]
    n_list: Option<String>,
    /// Comma-separated alpha values (j2h only).
    #[arg(long = "alpha-list")]
    alpha_list: Option<String>,
    /// Inclusive t grid start:stop:count (edge-scaling / j2h).
    #[arg(long = "t-grid", allow_hyphen_values = true)]
    t_grid: Option<String>,
    /// Series truncation order (series only).
    #[arg(long)]
    terms: Option<usize>,
}

#[derive(Subcommand, Debug, Clone)]
enum Command {
    /// Gap probability by the Gram-determinant route.
    GapProb(CommonArgs),
    /// Gap probability and resolvent values by the coupled ODE route.
    OdeSolve(CommonArgs),
    /// Seed a Painleve transcendent from closed forms and compare the maps.
    PainleveCheck(CommonArgs),
    /// Exact small-gap series coefficients.
    Series(CommonArgs),
    /// Edge-scaling deviations against the soft-edge law.
    EdgeScaling(CommonArgs),
    /// Jacobi-to-Hermite limit deviations.
    J2h(CommonArgs),
    /// Monte Carlo estimate from the matrix models.
    Mc(CommonArgs),
    /// Both sides of the even/odd factorization identity.
    FactorCheck(CommonArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::GapProb(_) => "gap-prob",
            Command::OdeSolve(_) => "ode-solve",
            Command::PainleveCheck(_) => "painleve-check",
            Command::Series(_) => "series",
            Command::EdgeScaling(_) => "edge-scaling",
            Command::J2h(_) => "j2h",
            Command::Mc(_) => "mc",
            Command::FactorCheck(_) => "factor-check",
        }
    }

    fn args(&self) -> &CommonArgs {
        match self {
            Command::GapProb(a)
            | Command::OdeSolve(a)
            | Command::PainleveCheck(a)
            | Command::Series(a)
            | Command::EdgeScaling(a)
            | Command::J2h(a)
            | Command::Mc(a)
            | Command::FactorCheck(a) => a,
        }
    }
}

/// Fully resolved job: command plus every parameter after the file/flag merge.
#[derive(Debug, Clone)]
struct JobSpec {
    command: String,
    args: CommonArgs,
    format: String,
    out: Option<PathBuf>,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Domain(String),
    Numerical(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Domain(_) => EXIT_DOMAIN,
            CliError::Numerical(_) => EXIT_NUMERICAL,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Domain(m) | CliError::Numerical(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::StepUnderflow { .. } | Error::PoleTruncation { .. } | Error::BranchViolation { .. } | Error::NonConvergence { .. } => {
                CliError::Numerical(e.to_string())
            }
            _ => CliError::Domain(e.to_string()),
        }
    }
}

/// A rectangular result table; NaN cells are preserved in CSV and become
/// null in JSON, with the diagnostics column explaining any failed row.
struct Table {
    columns: Vec<&'static str>,
    rows: Vec<(Vec<f64>, String)>,
    /// Extra non-numeric columns rendered verbatim (used by `series`).
    text_columns: Vec<&'static str>,
    text_rows: Vec<Vec<String>>,
}

impl Table {
    fn numeric(columns: Vec<&'static str>) -> Table {
        Table { columns, rows: Vec::new(), text_columns: Vec::new(), text_rows: Vec::new() }
    }

    fn push(&mut self, values: Vec<f64>, diag: impl Into<String>) {
        self.rows.push((values, diag.into()));
    }

    fn render_csv(&self) -> String {
        let mut s = String::new();
        let mut headers: Vec<&str> = self.columns.to_vec();
        headers.extend(self.text_columns.iter());
        headers.push("diag");
        s.push_str(&headers.join(","));
        s.push('\n');
        for (i, (values, diag)) in self.rows.iter().enumerate() {
            let mut cells: Vec<String> = values.iter().map(|v| format!("{v}")).collect();
            if let Some(texts) = self.text_rows.get(i) {
                cells.extend(texts.iter().cloned());
            }
            cells.push(diag.clone());
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    fn render_json(&self) -> String {
        let mut records = Vec::new();
        for (i, (values, diag)) in self.rows.iter().enumerate() {
            let mut map = serde_json::Map::new();
            for (c, v) in self.columns.iter().zip(values) {
                let val = if v.is_finite() {
                    serde_json::json!(v)
                } else {
                    serde_json::Value::Null
                };
                map.insert((*c).to_string(), val);
            }
            if let Some(texts) = self.text_rows.get(i) {
                for (c, t) in self.text_columns.iter().zip(texts) {
                    map.insert((*c).to_string(), serde_json::json!(t));
                }
            }
            map.insert("diag".to_string(), if diag.is_empty() { serde_json::Value::Null } else { serde_json::json!(diag) });
            records.push(serde_json::Value::Object(map));
        }
        let mut text = serde_json::to_string_pretty(&records).expect("json rendering");
        text.push('\n');
        text
    }
}

fn parse_grid(text: &str, what: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::Usage(format!("{what} must be start:stop:count, got {text}")));
    }
    let start: f64 = parts[0].parse().map_err(|_| CliError::Usage(format!("bad {what} start {}", parts[0])))?;
    let stop: f64 = parts[1].parse().map_err(|_| CliError::Usage(format!("bad {what} stop {}", parts[1])))?;
    let count: usize = parts[2].parse().map_err(|_| CliError::Usage(format!("bad {what} count {}", parts[2])))?;
    if count < 2 || !(start < stop) {
        return Err(CliError::Usage(format!("{what} needs start < stop and count >= 2")));
    }
    Ok((0..count).map(|i| start + (stop - start) * i as f64 / (count - 1) as f64).collect())
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>, CliError> {
    text.split(',')
        .map(|p| p.trim().parse::<T>().map_err(|_| CliError::Usage(format!("bad {what} entry {p}"))))
        .collect()
}

fn merge_config(cli: Cli) -> Result<JobSpec, CliError> {
    let mut file_table: Option<toml::Table> = None;
    if let Some(path) = &cli.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        let table: toml::Table = text.parse().map_err(|e| CliError::Usage(format!("bad TOML: {e}")))?;
        file_table = Some(table);
    }
    let file = file_table.unwrap_or_default();
    let get_str = |key: &str| file.get(key).and_then(|v| v.as_str()).map(|s| s.to_string());
    let get_f64 = |key: &str| file.get(key).and_then(|v| v.as_float().or_else(|| v.as_integer().map(|i| i as f64)));
    let get_usize = |key: &str| file.get(key).and_then(|v| v.as_integer()).map(|i| i as usize);
    let get_u64 = |key: &str| file.get(key).and_then(|v| v.as_integer()).map(|i| i as u64);

    let command_name = match &cli.command {
        Some(c) => c.name().to_string(),
        None => get_str("command").ok_or_else(|| CliError::Usage("no subcommand given and no `command` in config".into()))?,
    };
    let base = cli.command.as_ref().map(|c| c.args().clone()).unwrap_or_default();
    let args = CommonArgs {
        ensemble: base.ensemble.or_else(|| get_str("ensemble")),
        alpha: base.alpha.or_else(|| get_f64("alpha")),
        beta: base.beta.or_else(|| get_f64("beta")),
        n: base.n.or_else(|| get_usize("N")).or_else(|| get_usize("n")),
        geometry: base.geometry.or_else(|| get_str("geometry")),
        s_grid: base.s_grid.or_else(|| get_str("s_grid")),
        s: base.s.or_else(|| get_f64("s")),
        quad_order: base.quad_order.or_else(|| get_usize("quad_order")),
        rel_tol: base.rel_tol.or_else(|| get_f64("rel_tol")),
        abs_tol: base.abs_tol.or_else(|| get_f64("abs_tol")),
        eps1: base.eps1.or_else(|| get_f64("eps1")),
        seed: base.seed.or_else(|| get_u64("seed")),
        samples: base.samples.or_else(|| get_usize("samples")),
        dump: base.dump.or_else(|| get_str("dump").map(PathBuf::from)),
        n_list: base.n_list.or_else(|| get_str("N_list")).or_else(|| get_str("n_list")),
        alpha_list: base.alpha_list.or_else(|| get_str("alpha_list")),
        t_grid: base.t_grid.or_else(|| get_str("t_grid")),
        terms: base.terms.or_else(|| get_usize("terms")),
    };
    let format = cli.format.or_else(|| get_str("format")).unwrap_or_else(|| "csv".to_string());
    if format != "csv" && format != "json" {
        return Err(CliError::Usage(format!("format must be csv or json, got {format}")));
    }
    let out = cli.out.or_else(|| get_str("out").map(PathBuf::from));
    Ok(JobSpec { command: command_name, args, format, out })
}

struct Problem {
    weight: WeightSpec,
    n: usize,
}

fn resolve_problem(args: &CommonArgs) -> Result<Problem, CliError> {
    let ensemble = args.ensemble.as_deref().unwrap_or("hermite");
    let weight = match ensemble {
        "hermite" => WeightSpec::Hermite,
        "jacobi" => WeightSpec::Jacobi { alpha: args.alpha.unwrap_or(0.0), beta: args.beta.unwrap_or(args.alpha.unwrap_or(0.0)) },
        other => return Err(CliError::Usage(format!("unknown ensemble {other}"))),
    };
    weight.validate().map_err(CliError::from)?;
    let n = args.n.ok_or_else(|| CliError::Usage("--N is required".into()))?;
    Ok(Problem { weight, n })
}

fn resolve_geometry(args: &CommonArgs, weight: &WeightSpec, s: f64) -> Result<GapGeometry, CliError> {
    let name = args.geometry.as_deref().unwrap_or(match weight {
        WeightSpec::Hermite => "exterior",
        WeightSpec::Jacobi { .. } => "jacobi-exterior",
    });
    let geometry = match name {
        "exterior" => GapGeometry::ExteriorSym { s },
        "jacobi-exterior" => GapGeometry::JacobiExteriorSym { s },
        "interior" => GapGeometry::InteriorSym { s },
        other => return Err(CliError::Usage(format!("unknown geometry {other}"))),
    };
    geometry.validate_for(weight).map_err(CliError::from)?;
    Ok(geometry)
}

fn resolve_grid(args: &CommonArgs) -> Result<Vec<f64>, CliError> {
    match (&args.s_grid, args.s) {
        (Some(g), _) => parse_grid(g, "--s-grid"),
        (None, Some(s)) => Ok(vec![s]),
        (None, None) => Err(CliError::Usage("one of --s or --s-grid is required".into())),
    }
}

fn solver_config(args: &CommonArgs) -> Result<SolverConfig, CliError> {
    let mut cfg = SolverConfig::default();
    if let Some(r) = args.rel_tol {
        cfg.rel_tol = r;
    }
    if let Some(a) = args.abs_tol {
        cfg.abs_tol = a;
    }
    cfg.validate().map_err(CliError::from)?;
    Ok(cfg)
}

fn run_gap_prob(args: &CommonArgs) -> Result<Table, CliError> {
    let problem = resolve_problem(args)?;
    let grid = resolve_grid(args)?;
    let basis = OrthonormalBasis::new(problem.weight, problem.n).map_err(CliError::from)?;
    let quad = QuadratureRule::legendre(args.quad_order.unwrap_or(200).max(2 * problem.n)).map_err(CliError::from)?;
    let mut table = Table::numeric(vec!["s", "E2", "ln_E2", "est_error"]);
    use rayon::prelude::*;
    let rows: Vec<(Vec<f64>, String)> = grid
        .par_iter()
        .map(|&s| match resolve_geometry(args, &problem.weight, s).map(|g| gap_probability(&basis, &g, &quad)) {
            Ok(Ok(r)) => (vec![s, r.value, r.ln_value, r.est_error], String::new()),
            Ok(Err(e)) => (vec![s, f64::NAN, f64::NAN, f64::NAN], e.to_string()),
            Err(e) => (vec![s, f64::NAN, f64::NAN, f64::NAN], e.message().to_string()),
        })
        .collect();
    for (values, diag) in rows {
        table.push(values, diag);
    }
    Ok(table)
}

fn run_ode_solve(args: &CommonArgs) -> Result<Table, CliError> {
    let problem = resolve_problem(args)?;
    let grid = resolve_grid(args)?;
    let cfg = solver_config(args)?;
    let mut table = Table::numeric(vec!["s", "E2", "ln_E2", "R", "Rtilde", "sigma"]);
    match problem.weight {
        WeightSpec::Hermite => {
            let traj = integrate_gauss(problem.n, &grid, &cfg).map_err(CliError::from)?;
            for t in traj {
                let diag = if t.clamped { "separatrix contraction floor; ln_E2 is an upper bound" } else { "" };
                table.push(vec![t.s, t.e2(), t.ln_e2, t.r, t.r_tilde, f64::NAN], diag);
            }
        }
        WeightSpec::Jacobi { .. } => {
            let family = match args.geometry.as_deref().unwrap_or("jacobi-exterior") {
                "jacobi-exterior" => JacobiFamily::End,
                "interior" => JacobiFamily::Interior,
                other => return Err(CliError::Usage(format!("geometry {other} not available on the ODE route"))),
            };
            let traj = integrate_jacobi(problem.n, &problem.weight, family, &grid, &cfg).map_err(CliError::from)?;
            for t in traj {
                let diag = if t.clamped { "separatrix contraction floor; ln_E2 is an upper bound" } else { "" };
                table.push(vec![t.s, t.e2(), t.ln_e2, t.r_mean(), f64::NAN, t.sigma], diag);
            }
        }
    }
    Ok(table)
}

fn run_painleve_check(args: &CommonArgs) -> Result<Table, CliError> {
    let problem = resolve_problem(args)?;
    let grid = resolve_grid(args)?;
    let cfg = solver_config(args)?;
    if problem.n > 2 {
        return Err(CliError::Domain("painleve-check seeds from closed forms and needs N in {1, 2}".into()));
    }
    let mid = grid[grid.len() / 2];
    match problem.weight {
        WeightSpec::Hermite => {
            let eps1 = args.eps1.unwrap_or(-1.0);
            let branch = BranchChoice::new(eps1, 0.0).map_err(CliError::from)?;
            let (w0, w0p) = pv_seed_from_closedform(problem.n, mid, eps1).map_err(CliError::from)?;
            let traj = integrate_pv(problem.n, &branch, mid, w0, w0p, &grid, &cfg).map_err(CliError::from)?;
            let mapped = map_pv(&traj, problem.n, &branch).map_err(CliError::from)?;
            let mut table = Table::numeric(vec!["s", "w", "R", "Rtilde", "h", "dev_R"]);
            for m in &mapped {
                let cf = closedform::gue_closed(problem.n, m.s).map_err(CliError::from)?;
                table.push(
                    vec![
                        m.s,
                        traj.w[traj.s.iter().position(|&x| x == m.s).unwrap()],
                        m.r,
                        m.r_tilde,
                        m.h,
                        (m.r - cf.r_diag.unwrap()).abs(),
                    ],
                    "",
                );
            }
            if let Some((at, why)) = &traj.truncated {
                table.push(vec![*at, f64::NAN, f64::NAN, f64::NAN, f64::NAN, f64::NAN], why.clone());
            }
            Ok(table)
        }
        WeightSpec::Jacobi { alpha, beta } => {
            if alpha != beta {
                return Err(CliError::Domain("painleve-check on the Jacobi side needs alpha = beta".into()));
            }
            let eps1 = args.eps1.unwrap_or(-1.0);
            let alpha1 = -(problem.n as f64 + alpha);
            let (w0, w0p, k1) = pvi_seed_from_closedform(problem.n, alpha, mid, eps1).map_err(CliError::from)?;
            let traj = integrate_pvi(alpha1, k1, eps1, mid, w0, w0p, &grid, &cfg).map_err(CliError::from)?;
            let mapped = map_pvi(&traj, alpha1, k1, eps1).map_err(CliError::from)?;
            let mut table = Table::numeric(vec!["s", "w", "sigma", "H", "y", "dev_sigma"]);
            for m in &mapped {
                let cf = closedform::jue_end_closed(problem.n, alpha, alpha, m.s).map_err(CliError::from)?;
                table.push(
                    vec![
                        m.s,
                        traj.w[traj.s.iter().position(|&x| x == m.s).unwrap()],
                        m.sigma,
                        m.h,
                        m.y,
                        (m.sigma - cf.sigma.unwrap()).abs(),
                    ],
                    "",
                );
            }
            if let Some((at, why)) = &traj.truncated {
                table.push(vec![*at, f64::NAN, f64::NAN, f64::NAN, f64::NAN, f64::NAN], why.clone());
            }
            Ok(table)
        }
    }
}

fn run_series(args: &CommonArgs) -> Result<Table, CliError> {
    let n = args.n.ok_or_else(|| CliError::Usage("--N is required".into()))?;
    let terms = args.terms.unwrap_or(7);
    let coeffs = small_s_recursion(n, terms).map_err(CliError::from)?;
    let mut table = Table::numeric(vec!["power", "value"]);
    table.text_columns = vec!["rational"];
    for (i, c) in coeffs.iter().enumerate() {
        let power = 2.0 * i as f64 - 1.0;
        table.push(vec![power, crate::ode::series::rational_to_f64(c)], "");
        table.text_rows.push(vec![format!("{}/{}", c.numer(), c.denom())]);
    }
    Ok(table)
}

fn run_edge_scaling(args: &CommonArgs) -> Result<Table, CliError> {
    let n_list: Vec<usize> = match &args.n_list {
        Some(text) => parse_list(text, "--N-list")?,
        None => vec![20, 50, 100],
    };
    let t_grid = match &args.t_grid {
        Some(g) => parse_grid(g, "--t-grid")?,
        None => parse_grid("-2:4:13", "--t-grid")?,
    };
    let report = edge_scaling_deviation(&n_list, &t_grid).map_err(CliError::from)?;
    let mut table = Table::numeric(vec!["N", "sup_deviation", "fitted_decay_order"]);
    for (p, d) in report.parameters.iter().zip(&report.deviations) {
        table.push(vec![*p, *d, report.fitted_decay_order], "");
    }
    Ok(table)
}

fn run_j2h(args: &CommonArgs) -> Result<Table, CliError> {
    let n = args.n.ok_or_else(|| CliError::Usage("--N is required".into()))?;
    let alpha_list: Vec<f64> = match &args.alpha_list {
        Some(text) => parse_list(text, "--alpha-list")?,
        None => vec![10.0, 40.0, 160.0],
    };
    let t_grid = match &args.t_grid {
        Some(g) => parse_grid(g, "--t-grid")?,
        None => parse_grid("0.3:1.2:9", "--t-grid")?,
    };
    let family = match args.geometry.as_deref().unwrap_or("jacobi-exterior") {
        "jacobi-exterior" | "end" => JacobiFamily::End,
        "interior" => JacobiFamily::Interior,
        other => return Err(CliError::Usage(format!("unknown geometry {other}"))),
    };
    let report = j2h_deviation(&alpha_list, &t_grid, n, family).map_err(CliError::from)?;
    let mut table = Table::numeric(vec!["alpha", "sup_deviation", "fitted_decay_order"]);
    for (p, d) in report.parameters.iter().zip(&report.deviations) {
        table.push(vec![*p, *d, report.fitted_decay_order], "");
    }
    Ok(table)
}

fn run_mc(args: &CommonArgs) -> Result<Table, CliError> {
    let problem = resolve_problem(args)?;
    let ensemble = match problem.weight {
        WeightSpec::Hermite => Ensemble::Gue { n: problem.n },
        WeightSpec::Jacobi { alpha, beta } => {
            if alpha.fract() != 0.0 || beta.fract() != 0.0 || alpha < 0.0 || beta < 0.0 {
                return Err(CliError::Domain(
                    "the matrix model realizes integer alpha, beta >= 0 only; use deterministic routes otherwise".into(),
                ));
            }
            Ensemble::Jue { n: problem.n, m1: problem.n + alpha as usize, m2: problem.n + beta as usize }
        }
    };
    let samples = args.samples.unwrap_or(100_000);
    let seed = args.seed.unwrap_or(1);
    if let Some(path) = &args.dump {
        let mut file = std::fs::File::create(path).map_err(|e| CliError::Usage(format!("cannot open dump file: {e}")))?;
        dump_samples(&mut file, &ensemble, samples.min(10_000), seed).map_err(CliError::from)?;
    }
    let grid = resolve_grid(args)?;
    let mut table = Table::numeric(vec!["s", "p_hat", "stderr", "n_samples", "seed"]);
    for &s in &grid {
        let geometry = resolve_geometry(args, &problem.weight, s)?;
        match empirical_gap(&ensemble, &geometry, samples, seed) {
            Ok(est) => table.push(vec![s, est.p_hat, est.stderr, est.n_samples as f64, est.seed as f64], ""),
            Err(e) => table.push(vec![s, f64::NAN, f64::NAN, f64::NAN, f64::NAN], e.to_string()),
        }
    }
    Ok(table)
}

fn run_factor_check(args: &CommonArgs) -> Result<Table, CliError> {
    let problem = resolve_problem(args)?;
    let grid = resolve_grid(args)?;
    let quad = QuadratureRule::legendre(args.quad_order.unwrap_or(200).max(2 * problem.n)).map_err(CliError::from)?;
    let mut table = Table::numeric(vec!["s", "lhs", "rhs", "abs_diff"]);
    for &s in &grid {
        let geometry = resolve_geometry(args, &problem.weight, s)?;
        match factorization_check(problem.n, &problem.weight, &geometry, &quad) {
            Ok(f) => table.push(vec![s, f.lhs, f.rhs, f.abs_diff], ""),
            Err(e) => table.push(vec![s, f64::NAN, f64::NAN, f64::NAN], e.to_string()),
        }
    }
    Ok(table)
}

fn configure_threads() {
    if let Ok(text) = std::env::var("RMT_GAPS_THREADS") {
        if let Ok(k) = text.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
        }
    }
}

fn dispatch(job: &JobSpec) -> Result<Table, CliError> {
    match job.command.as_str() {
        "gap-prob" => run_gap_prob(&job.args),
        "ode-solve" => run_ode_solve(&job.args),
        "painleve-check" => run_painleve_check(&job.args),
        "series" => run_series(&job.args),
        "edge-scaling" => run_edge_scaling(&job.args),
        "j2h" => run_j2h(&job.args),
        "mc" => run_mc(&job.args),
        "factor-check" => run_factor_check(&job.args),
        other => Err(CliError::Usage(format!("unknown command {other}"))),
    }
}

/// Testable entry point: parse argv (without the binary name), run the job,
/// write the table to `out`, and return the process exit code.
pub fn run(argv: &[&str], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    configure_threads();
    let mut full = vec!["rmt-gaps"];
    full.extend(argv);
    let cli = match Cli::try_parse_from(&full) {
        Ok(c) => c,
        Err(e) => {
            // clap help/version output is not an error.
            if e.use_stderr() {
                let _ = writeln!(err, "{e}");
                return EXIT_USAGE;
            }
            let _ = write!(out, "{e}");
            return EXIT_OK;
        }
    };
    let job = match merge_config(cli) {
        Ok(j) => j,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message());
            return e.exit_code();
        }
    };
    match dispatch(&job) {
        Ok(table) => {
            let text = if job.format == "json" { table.render_json() } else { table.render_csv() };
            if let Some(path) = &job.out {
                if let Err(e) = std::fs::write(path, &text) {
                    let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
                    return EXIT_USAGE;
                }
            } else {
                let _ = out.write_all(text.as_bytes());
            }
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message());
            e.exit_code()
        }
    }
}

pub fn main() -> i32 {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let refs: Vec<&str> = args.iter().map(|s| s.as_str()).collect();
    let mut stdout = std::io::stdout();
    let mut stderr = std::io::stderr();
    run(&refs, &mut stdout, &mut stderr)
}
