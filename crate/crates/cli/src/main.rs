//! `angspec`: eigenvalue bounds and spectra of the angular Dirac operator,
//! comparison with reference tables, and the block-matrix verification suite.

mod ranges;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use angspec_core::angular::AngularParams;
use angspec_core::blockmat::suite::DEFAULT_SEED;
use angspec_core::fixtures::fixture;
use angspec_core::report::{
    assemble_table, bounds_rows, fixture_ks, sweep_row, table_checks_for_k, verify_generated,
    verify_json, N0Policy, SweepParam, SweepSpec, VerifyReport, BOUND_ROW_CSV_HEADER,
    SWEEP_CSV_HEADER, TABLE_CSV_HEADER,
};
use angspec_core::solver::{solve_indexed, Method, ShootingConfig, Spectrum, SPECTRUM_CSV_HEADER};

// Aliases keep clap from treating the parsed lists as repeated flags.
type IntList = Vec<i32>;
type IndexList = Vec<u32>;

const EXIT_USAGE: u8 = 2;
const EXIT_SOLVER: u8 = 3;
const EXIT_TABLE: u8 = 4;
const EXIT_VERIFY: u8 = 5;

#[derive(Parser)]
#[command(
    name = "angspec",
    version,
    about = "Eigenvalue bounds and spectra of the Kerr-Newman angular Dirac operator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form eigenvalue bounds.
    Bounds(BoundsArgs),
    /// Numerical eigenvalues with continuation indices.
    Spectrum(SpectrumArgs),
    /// Recompute a reference table and compare cell by cell.
    Table(TableArgs),
    /// Randomised check of the block-matrix theorems.
    Verify(VerifyArgs),
    /// Bounds along a one-parameter family, for plotting.
    Sweep(SweepArgs),
}

#[derive(Args, Clone)]
struct ParamArgs {
    #[arg(long, allow_hyphen_values = true)]
    am: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    aomega: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    m: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    omega: Option<f64>,
}

impl ParamArgs {
    /// Parameters for wave number `k`, either from the products or from `a, m, ω` (a defaults to 1).
    fn params(&self, k: i32) -> Result<AngularParams, String> {
        let products = self.am.is_some() || self.aomega.is_some();
        let separate = self.a.is_some() || self.m.is_some() || self.omega.is_some();
        if products && separate {
            return Err("give either --am/--aomega or --a/--m/--omega, not both".into());
        }
        let p = if products {
            AngularParams::from_products(self.am.unwrap_or(0.0), self.aomega.unwrap_or(0.0), k)
        } else {
            AngularParams::new(
                self.a.unwrap_or(1.0),
                self.m.unwrap_or(0.0),
                self.omega.unwrap_or(0.0),
                k,
            )
        };
        if ![p.a, p.m, p.omega].iter().all(|v| v.is_finite()) {
            return Err("parameters must be finite".into());
        }
        Ok(p)
    }
}

#[derive(Args)]
struct BoundsArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Wave numbers: an integer, a range like -5..4, or a comma list.
    #[arg(long, allow_hyphen_values = true, default_value = "0", value_parser = ranges::parse_int_list)]
    k: IntList,
    /// Indices: N means 1..N.
    #[arg(long, default_value = "1", value_parser = ranges::parse_index_list)]
    n: IndexList,
    /// Index shift: `auto` or a nonnegative integer.
    #[arg(long, default_value = "auto")]
    n0: String,
    #[arg(long)]
    unverified_refinements: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Shooting,
    Galerkin,
    Both,
}

#[derive(Args)]
struct SpectrumArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, allow_hyphen_values = true, default_value = "0", value_parser = ranges::parse_int_list)]
    k: IntList,
    /// |n| selection: N means ±1..±N.
    #[arg(long, default_value = "3", value_parser = ranges::parse_index_list)]
    n: IndexList,
    #[arg(long, value_enum, default_value_t = MethodArg::Shooting)]
    method: MethodArg,
    /// Root-finding tolerance of the shooting method.
    #[arg(long)]
    eig_tol: Option<f64>,
}

#[derive(Args)]
struct TableArgs {
    /// Table number, 1 to 4.
    #[arg(value_parser = clap::value_parser!(u8).range(1..=4))]
    table: u8,
    /// Skip the solver columns.
    #[arg(long)]
    bounds_only: bool,
    #[arg(long)]
    unverified_refinements: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 100)]
    instances: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Block sizes `n1,n2`; default random square blocks up to --max-dim.
    #[arg(long, value_parser = parse_dims)]
    dims: Option<(usize, usize)>,
    #[arg(long, default_value_t = 8)]
    max_dim: usize,
    /// Check this instance (JSON) instead of generated ones.
    #[arg(long)]
    fixture: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ParamName {
    A,
    K,
    Omega,
    M,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_enum)]
    param: ParamName,
    #[arg(long, allow_hyphen_values = true)]
    from: f64,
    #[arg(long, allow_hyphen_values = true)]
    to: f64,
    /// Number of sample points.
    #[arg(long, default_value_t = 101)]
    steps: usize,
    #[arg(long, allow_hyphen_values = true, default_value_t = 1.0)]
    a: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    m: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    omega: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
    k: i32,
    /// Add the eigenvalue of smallest modulus.
    #[arg(long)]
    solver: bool,
}

fn parse_dims(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected n1,n2")?;
    let a: usize = a
        .trim()
        .parse()
        .map_err(|_| format!("bad dimension {a:?}"))?;
    let b: usize = b
        .trim()
        .parse()
        .map_err(|_| format!("bad dimension {b:?}"))?;
    if a == 0 || b == 0 {
        return Err("dimensions must be positive".into());
    }
    Ok((a, b))
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

struct Output {
    command: &'static str,
    params: Value,
    csv_header: &'static str,
    csv_rows: Vec<String>,
    json_rows: Vec<Value>,
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("rows serialise")
}

fn emit(cli: &Cli, o: Output) -> Result<(), Failure> {
    let text = match cli.format {
        Format::Csv => {
            let mut s = String::from(o.csv_header);
            s.push('\n');
            for r in &o.csv_rows {
                s.push_str(r);
                s.push('\n');
            }
            s
        }
        Format::Json => {
            let doc = json!({
                "version": env!("CARGO_PKG_VERSION"),
                "command": o.command,
                "params": o.params,
                "rows": o.json_rows,
            });
            let mut s = serde_json::to_string_pretty(&doc).expect("json");
            s.push('\n');
            s
        }
    };
    match &cli.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| fail(EXIT_USAGE, format!("{}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .map_err(|e| fail(1, e.to_string()))
        }
    }
}

fn cmd_bounds(cli: &Cli, a: &BoundsArgs) -> Result<(), Failure> {
    let policy = match a.n0.as_str() {
        "auto" => N0Policy::Auto,
        s => N0Policy::Fixed(s.parse().map_err(|_| {
            fail(
                EXIT_USAGE,
                format!("--n0: expected auto or an integer, got {s}"),
            )
        })?),
    };
    let p = a.params.params(0).map_err(|e| fail(EXIT_USAGE, e))?;
    let n_max = *a.n.iter().max().expect("nonempty");
    let rows = bounds_rows(
        p.am(),
        p.aomega(),
        &a.k,
        n_max,
        policy,
        a.unverified_refinements,
    )
    .map_err(|e| fail(EXIT_SOLVER, e.to_string()))?;
    let rows: Vec<_> = rows
        .into_iter()
        .filter(|r| a.n.contains(&r.set.n))
        .collect();
    emit(
        cli,
        Output {
            command: "bounds",
            params: json!({"am": p.am(), "aomega": p.aomega(), "k": a.k, "n": a.n, "n0": a.n0,
                           "unverified_refinements": a.unverified_refinements}),
            csv_header: BOUND_ROW_CSV_HEADER,
            csv_rows: rows.iter().map(|r| r.csv_row()).collect(),
            json_rows: rows.iter().map(to_value).collect(),
        },
    )
}

fn cmd_spectrum(cli: &Cli, a: &SpectrumArgs) -> Result<(), Failure> {
    let mut cfg = ShootingConfig::default();
    if let Some(t) = a.eig_tol {
        if !(t > 0.0) {
            return Err(fail(EXIT_USAGE, "--eig-tol must be positive"));
        }
        cfg.eig_tol = t;
    }
    let params: Vec<AngularParams> =
        a.k.iter()
            .map(|&k| a.params.params(k))
            .collect::<Result<_, _>>()
            .map_err(|e| fail(EXIT_USAGE, e))?;
    let n_max = *a.n.iter().max().expect("nonempty");
    let keep = |n: Option<i32>| n.is_some_and(|n| a.n.contains(&n.unsigned_abs()));

    let solve = |p: &AngularParams, m: Method| -> Result<Spectrum, Failure> {
        let mut s = solve_indexed(p, n_max, &cfg, m)
            .map_err(|e| fail(EXIT_SOLVER, format!("k = {}: {e}", p.k)))?;
        s.entries.retain(|e| keep(e.n));
        Ok(s.without_samples())
    };
    let results: Vec<(Spectrum, Option<Spectrum>)> = params
        .par_iter()
        .map(|p| match a.method {
            MethodArg::Shooting => Ok((solve(p, Method::Shooting)?, None)),
            MethodArg::Galerkin => Ok((solve(p, Method::Galerkin)?, None)),
            MethodArg::Both => Ok((
                solve(p, Method::Shooting)?,
                Some(solve(p, Method::Galerkin)?),
            )),
        })
        .collect::<Result<_, Failure>>()?;

    let mut csv_rows = Vec::new();
    let mut json_rows = Vec::new();
    for (s, g) in &results {
        let base = s.csv_rows();
        for (e, row) in s.entries.iter().zip(base) {
            let mut v = to_value(e);
            v["k"] = json!(s.params.k);
            v["am"] = json!(s.params.am());
            v["aomega"] = json!(s.params.aomega());
            v["m_plus"] = json!(s.m_plus);
            v["m_minus"] = json!(s.m_minus);
            match g {
                Some(g) => {
                    let other = e.n.and_then(|n| g.lambda(n));
                    let diff = other.map(|o| (o - e.lambda).abs());
                    v["lambda_galerkin"] = json!(other);
                    v["agreement"] = json!(diff);
                    csv_rows.push(format!(
                        "{row},{},{}",
                        other.map(|o| format!("{o:.12}")).unwrap_or_default(),
                        diff.map(|d| format!("{d:.3e}")).unwrap_or_default()
                    ));
                }
                None => csv_rows.push(row),
            }
            json_rows.push(v);
        }
    }
    let header = if a.method == MethodArg::Both {
        "k,am,aomega,n,lambda,residual,symmetry_defect,lambda_galerkin,agreement"
    } else {
        SPECTRUM_CSV_HEADER
    };
    let p0 = params[0];
    emit(
        cli,
        Output {
            command: "spectrum",
            params: json!({"a": p0.a, "m": p0.m, "omega": p0.omega, "am": p0.am(), "aomega": p0.aomega(),
                           "k": a.k, "n": a.n, "method": method_name(a.method)}),
            csv_header: header,
            csv_rows,
            json_rows,
        },
    )
}

fn method_name(m: MethodArg) -> &'static str {
    match m {
        MethodArg::Shooting => "shooting",
        MethodArg::Galerkin => "galerkin",
        MethodArg::Both => "both",
    }
}

fn cmd_table(cli: &Cli, a: &TableArgs) -> Result<(), Failure> {
    let f = fixture(a.table).ok_or_else(|| fail(EXIT_USAGE, format!("no table {}", a.table)))?;
    let cfg = ShootingConfig::default();
    let start = Instant::now();
    let parts: Vec<_> = fixture_ks(&f)
        .par_iter()
        .map(|&k| table_checks_for_k(&f, k, &cfg, !a.bounds_only, a.unverified_refinements))
        .collect::<Result<_, _>>()
        .map_err(|e| fail(EXIT_SOLVER, e.to_string()))?;
    let report = assemble_table(&f, parts.into_iter().flatten().collect());
    emit(
        cli,
        Output {
            command: "table",
            params: json!({"table": a.table, "am": f.am, "aomega": f.aomega, "provenance": f.provenance,
                           "bounds_only": a.bounds_only, "unverified_refinements": a.unverified_refinements}),
            csv_header: TABLE_CSV_HEADER,
            csv_rows: report.checks.iter().map(|c| c.csv_row()).collect(),
            json_rows: report.checks.iter().map(to_value).collect(),
        },
    )?;
    eprintln!(
        "table {}: {} cells, {} failed ({} bound/enclosure); {:.2} s",
        a.table,
        report.checks.len(),
        report.failures(),
        report.hard_failures(),
        start.elapsed().as_secs_f64()
    );
    if report.hard_failures() > 0 {
        return Err(fail(
            EXIT_TABLE,
            format!(
                "table {}: {} bound or enclosure cells failed",
                a.table,
                report.hard_failures()
            ),
        ));
    }
    Ok(())
}

fn cmd_verify(cli: &Cli, a: &VerifyArgs) -> Result<(), Failure> {
    let start = Instant::now();
    let reports = match &a.fixture {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| fail(EXIT_USAGE, format!("{}: {e}", path.display())))?;
            vec![verify_json(a.seed, &text)]
        }
        None => {
            if a.instances == 0 {
                return Err(fail(EXIT_USAGE, "--instances must be at least 1"));
            }
            (0..a.instances)
                .into_par_iter()
                .map(|i| verify_generated(a.seed, i, a.dims, a.max_dim))
                .collect()
        }
    };
    let report = VerifyReport::new(a.seed, reports);
    let rows: Vec<(usize, usize, usize, &str, bool, &str)> = report
        .reports
        .iter()
        .flat_map(|r| {
            r.checks
                .iter()
                .map(move |c| (r.index, r.n1, r.n2, c.name, c.pass, c.detail.as_str()))
        })
        .collect();
    emit(
        cli,
        Output {
            command: "verify",
            params: json!({"instances": report.instances, "seed": a.seed, "dims": a.dims, "max_dim": a.max_dim,
                           "fixture": a.fixture}),
            csv_header: "instance,n1,n2,check,status,detail",
            csv_rows: rows
                .iter()
                .map(|(i, n1, n2, name, pass, detail)| {
                    format!(
                        "{i},{n1},{n2},{name},{},\"{}\"",
                        if *pass { "PASS" } else { "FAIL" },
                        detail.replace('"', "'")
                    )
                })
                .collect(),
            json_rows: report.reports.iter().map(to_value).collect(),
        },
    )?;
    for line in report.lines() {
        eprintln!("{line}");
    }
    eprintln!("{:.2} s", start.elapsed().as_secs_f64());
    if !report.pass() {
        return Err(fail(
            EXIT_VERIFY,
            format!("{} of {} instances failed", report.failed, report.instances),
        ));
    }
    Ok(())
}

fn cmd_sweep(cli: &Cli, a: &SweepArgs) -> Result<(), Failure> {
    if !(a.from.is_finite() && a.to.is_finite()) {
        return Err(fail(EXIT_USAGE, "--from and --to must be finite"));
    }
    let param = match a.param {
        ParamName::A => SweepParam::A,
        ParamName::K => SweepParam::K,
        ParamName::Omega => SweepParam::Omega,
        ParamName::M => SweepParam::M,
    };
    let spec = SweepSpec {
        param,
        from: a.from,
        to: a.to,
        steps: a.steps,
        base: AngularParams::new(a.a, a.m, a.omega, a.k),
    };
    let mut rows = spec
        .points()
        .par_iter()
        .map(|(v, p)| sweep_row(*v, p, a.solver))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| fail(EXIT_SOLVER, e.to_string()))?;
    rows.sort_by(|x, y| x.value.total_cmp(&y.value));
    emit(
        cli,
        Output {
            command: "sweep",
            params: json!({"param": param.name(), "from": a.from, "to": a.to, "steps": a.steps,
                           "a": a.a, "m": a.m, "omega": a.omega, "k": a.k, "solver": a.solver}),
            csv_header: SWEEP_CSV_HEADER,
            csv_rows: rows.iter().map(|r| r.csv_row()).collect(),
            json_rows: rows.iter().map(to_value).collect(),
        },
    )
}

fn init_threads() {
    if let Some(n) = std::env::var("ANGSPEC_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        // a second initialisation only fails if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global();
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_threads();
    let r = match &cli.command {
        Command::Bounds(a) => cmd_bounds(&cli, a),
        Command::Spectrum(a) => cmd_spectrum(&cli, a),
        Command::Table(a) => cmd_table(&cli, a),
        Command::Verify(a) => cmd_verify(&cli, a),
        Command::Sweep(a) => cmd_sweep(&cli, a),
    };
    match r {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("angspec: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
