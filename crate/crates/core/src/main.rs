use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;

use monogenic_cst::ck::{psi_basis, CkBox, Truncation, DEFAULT_TOLERANCE};
use monogenic_cst::quadrature::{hermite_selftest, QuadratureRule};
use monogenic_cst::spectral::{cst_spectral, GridSpec, SampledField, SpacetimeField};
use monogenic_cst::torus::{torus_cst, TorusCoefficients};
use monogenic_cst::verify::{hermite_indices, run_all, MomentumSign, Suite, VerificationReport, VerifyConfig};
use monogenic_cst::{CstError, GaussianPolynomial};

#[derive(Parser)]
#[command(name = "monogenic-cst", version, about = "Coherent state transform onto monogenic functions")]
struct Cli {
    /// Override the tolerance of every check (verify) or of series truncation (basis).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Seed for randomised checks.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Sign in p_j = ±i d/dx_j.
    #[arg(long, global = true, value_enum)]
    momentum_sign: Option<SignArg>,
    /// Record per-check wall-clock time in reports.
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum SignArg {
    Plus,
    Minus,
}

#[derive(Clone, Copy, ValueEnum)]
enum Space {
    Rm,
    Torus,
}

#[derive(Subcommand)]
enum Command {
    /// Apply the transform to a sampled field, Gaussian polynomial or torus modes.
    Transform(TransformArgs),
    /// Write the orthogonal basis series and sampled slices.
    Basis(BasisArgs),
    /// Run a verification suite and print its report.
    Verify(VerifyArgs),
    /// Print a Gauss-Hermite rule or check its moments.
    Quadrature(QuadratureArgs),
}

#[derive(Args)]
struct TransformArgs {
    #[arg(long, value_enum)]
    space: Space,
    /// Expected dimension of the input.
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    input: PathBuf,
    /// x0 slices as start:end:count.
    #[arg(long, default_value = "0:0:1", allow_hyphen_values = true)]
    x0: String,
    /// Output directory for field.json and field.csv (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Points per axis when sampling a polynomial or torus input.
    #[arg(long)]
    grid: Option<usize>,
    /// Half-width of the sampling box for polynomial input.
    #[arg(long, default_value_t = 8.0)]
    half_width: f64,
}

#[derive(Args)]
struct BasisArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    kmax: u32,
    #[arg(long)]
    out: Option<PathBuf>,
    /// x0 slices as start:end:count.
    #[arg(long, default_value = "0:0:1", allow_hyphen_values = true)]
    x0: String,
    /// Points per axis of the sampling grid.
    #[arg(long, default_value_t = 64)]
    grid: usize,
    #[arg(long, default_value_t = 8.0)]
    half_width: f64,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name, or "all".
    suite: String,
    /// JSON file with suite parameters; flags take precedence.
    #[arg(long)]
    params: Option<PathBuf>,
    /// Dimension(s) to cover.
    #[arg(long)]
    m: Vec<usize>,
    #[arg(long)]
    kmax: Option<u32>,
    /// Series order for the generalized-Hermite suite.
    #[arg(long)]
    order: Option<usize>,
    #[arg(long)]
    hermite_nodes: Option<usize>,
    /// Write the report here as well as deciding the exit code.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct QuadratureArgs {
    #[arg(long, default_value_t = 64)]
    hermite_nodes: usize,
    /// Compare the even moments against their closed form.
    #[arg(long)]
    selftest: bool,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Verification,
}

impl From<CstError> for Failure {
    fn from(e: CstError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(format!("i/o error: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Transform(a) => transform(cli, a),
        Command::Basis(a) => basis(cli, a),
        Command::Verify(a) => verify(cli, a),
        Command::Quadrature(a) => quadrature(cli, a),
    }
}

fn parse_x0(spec: &str) -> Result<Vec<f64>, Failure> {
    let bad = || Failure::Usage(format!("--x0 expects start:end:count, got {spec:?}"));
    let parts: Vec<&str> = spec.split(':').collect();
    let [a, b, n] = parts.as_slice() else {
        return Err(bad());
    };
    let a: f64 = a.trim().parse().map_err(|_| bad())?;
    let b: f64 = b.trim().parse().map_err(|_| bad())?;
    let n: usize = n.trim().parse().map_err(|_| bad())?;
    match n {
        0 => Err(bad()),
        1 => Ok(vec![a]),
        _ => Ok((0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()),
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Failure::Usage(format!("{}: invalid JSON: {e}", path.display())))?;
    from_value(path, value)
}

fn from_value<T: DeserializeOwned>(path: &Path, value: serde_json::Value) -> Result<T, Failure> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let field = e.path().to_string();
        Failure::Usage(format!("{}: field `{field}`: {}", path.display(), e.inner()))
    })
}

fn to_json(v: &impl Serialize) -> Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| Failure::Usage(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn field_csv(field: &SpacetimeField) -> Result<String, Failure> {
    let mut buf = Vec::new();
    field.write_csv(&mut buf)?;
    Ok(String::from_utf8(buf).expect("csv is ascii"))
}

fn emit_field(cli: &Cli, field: &SpacetimeField, out: Option<&Path>, stem: &str) -> Result<(), Failure> {
    for w in &field.warnings {
        eprintln!("warning: {w}");
    }
    match out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            fs::write(dir.join(format!("{stem}.json")), to_json(field)?)?;
            fs::write(dir.join(format!("{stem}.csv")), field_csv(field)?)?;
        }
        None => {
            let text = match cli.format {
                Format::Json => to_json(field)?,
                Format::Csv => field_csv(field)?,
            };
            io::stdout().write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

fn check_dim(expected: Option<usize>, got: usize) -> Result<(), Failure> {
    match expected {
        Some(m) if m != got => Err(Failure::Usage(format!("--m {m} but the input has m = {got}"))),
        _ => Ok(()),
    }
}

fn transform(cli: &Cli, a: &TransformArgs) -> Result<(), Failure> {
    let x0 = parse_x0(&a.x0)?;
    let field = match a.space {
        Space::Rm => {
            let text = fs::read_to_string(&a.input)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", a.input.display())))?;
            let value: serde_json::Value = serde_json::from_str(&text)
                .map_err(|e| Failure::Usage(format!("{}: invalid JSON: {e}", a.input.display())))?;
            let sampled: SampledField = if value.get("grid").is_some() {
                from_value(&a.input, value)?
            } else {
                let p: GaussianPolynomial = from_value(&a.input, value)?;
                let grid = GridSpec::new(p.dim(), a.half_width, a.grid.unwrap_or(128))?;
                SampledField::from_gaussian_poly(grid, &p)?
            };
            check_dim(a.m, sampled.grid().m)?;
            cst_spectral(&sampled, &x0)?
        }
        Space::Torus => {
            let coeffs: TorusCoefficients = read_json(&a.input)?;
            check_dim(a.m, coeffs.dim())?;
            torus_cst(&coeffs).sample(a.grid.unwrap_or(64), &x0)?
        }
    };
    emit_field(cli, &field, a.out.as_deref(), "field")
}

fn basis(cli: &Cli, a: &BasisArgs) -> Result<(), Failure> {
    let x0 = parse_x0(&a.x0)?;
    let x0_max = x0.iter().fold(1.0f64, |acc, t| acc.max(t.abs()));
    let bbox = CkBox::new(x0_max, a.half_width)?;
    let grid = GridSpec::new(a.m, a.half_width, a.grid)?;
    let tol = cli.tol.unwrap_or(DEFAULT_TOLERANCE);
    let mut entries = Vec::new();
    for k in hermite_indices(a.m, a.kmax) {
        let series = psi_basis(&k, Truncation::Tolerance(tol), bbox)?;
        if let Some(dir) = &a.out {
            let stem = format!("psi_{}", k.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("_"));
            emit_field(cli, &series.sample(grid, &x0)?, Some(dir), &stem)?;
        }
        entries.push(serde_json::json!({ "k": k, "series": series }));
    }
    let text = to_json(&entries)?;
    match &a.out {
        Some(dir) => fs::write(dir.join("basis.json"), text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn verify(cli: &Cli, a: &VerifyArgs) -> Result<(), Failure> {
    let mut cfg: VerifyConfig = match &a.params {
        Some(p) => read_json(p)?,
        None => VerifyConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if cli.tol.is_some() {
        cfg.tol = cli.tol;
    }
    if cli.timings {
        cfg.timings = true;
    }
    if let Some(s) = cli.momentum_sign {
        cfg.momentum_sign = match s {
            SignArg::Plus => MomentumSign::Plus,
            SignArg::Minus => MomentumSign::Minus,
        };
    }
    if !a.m.is_empty() {
        cfg.m = Some(a.m.clone());
    }
    cfg.kmax = a.kmax.or(cfg.kmax);
    cfg.order = a.order.or(cfg.order);
    if let Some(n) = a.hermite_nodes {
        cfg.hermite_nodes = n;
    }
    let report = if a.suite == "all" {
        run_all(&cfg)?
    } else {
        let suite = Suite::from_name(&a.suite).ok_or_else(|| {
            let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
            Failure::Usage(format!("unknown suite {:?}; expected one of {} or all", a.suite, names.join(", ")))
        })?;
        suite.run(&cfg)?
    };
    let text = match cli.format {
        Format::Json => to_json(&report)?,
        Format::Csv => report_csv(&report),
    };
    if let Some(p) = &a.out {
        fs::write(p, &text)?;
    }
    io::stdout().write_all(text.as_bytes())?;
    for c in report.failures() {
        eprintln!("FAIL {}: deviation {:e} > {:e}", c.name, c.deviation, c.tolerance);
    }
    if report.passed {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn report_csv(r: &VerificationReport) -> String {
    let mut s = String::from(
        "name,computed_re,computed_im,reference_re,reference_im,deviation,tolerance,comparison,scale,passed\n",
    );
    for c in &r.checks {
        let cmp = match c.comparison {
            monogenic_cst::verify::Comparison::Abs => "abs",
            monogenic_cst::verify::Comparison::Rel => "rel",
        };
        s.push_str(&format!(
            "{},{:e},{:e},{:e},{:e},{:e},{:e},{},{:e},{}\n",
            csv_field(&c.name),
            c.computed.re,
            c.computed.im,
            c.reference.re,
            c.reference.im,
            c.deviation,
            c.tolerance,
            cmp,
            c.scale,
            c.passed
        ));
    }
    s
}

fn quadrature(cli: &Cli, a: &QuadratureArgs) -> Result<(), Failure> {
    let rule = QuadratureRule::gauss_hermite(a.hermite_nodes)?;
    if !a.selftest {
        io::stdout().write_all(to_json(&rule)?.as_bytes())?;
        return Ok(());
    }
    let tol = cli.tol.unwrap_or(1e-13);
    let table = hermite_selftest(&rule);
    let worst = table.iter().map(|c| c.relative_error).fold(0.0, f64::max);
    let out = serde_json::json!({
        "hermite_nodes": a.hermite_nodes,
        "tolerance": tol,
        "max_relative_error": worst,
        "passed": worst <= tol,
        "moments": table,
    });
    io::stdout().write_all(to_json(&out)?.as_bytes())?;
    if worst <= tol {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}
