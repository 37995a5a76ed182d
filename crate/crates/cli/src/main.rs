//! `qrg`: command-line front end for the square-graph geometry.
//!
//! Exit codes: 0 ok, 1 invariant failure, 2 schema or admissibility error,
//! 3 non-symmetric metric, 4 solver failure, 5 quadrature non-convergence.

mod model_file;

use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use qrg_core::engine::{qlc_solve, Connection, SolverOptions};
use qrg_core::model::family::{
    eigenvalues4, family_coefficients, multiset_distance, sigma_expected_eigenvalues, FamilyFields,
};
use qrg_core::model::scan::{action_scan, spectrum_scan, write_action_csv, write_spectrum_csv, Grid, ScanAxis};
use qrg_core::model::{
    expectation, partition_integral, MetricValues, Observable, QuadratureRule, QuadratureSpec, Signature,
};
use qrg_core::par::ExecMode;
use qrg_core::{make_phase, Complex64, ExactComplex, Field, QrgError, Tolerance};

use model_file::{load_model, Model, ModelMetric};

#[derive(Parser)]
#[command(name = "qrg", version, about = "Quantum Riemannian geometry on the Z2 x Z2 square graph")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check metric invariants, the Levi-Civita family and its braiding.
    Check {
        #[arg(long)]
        model: PathBuf,
        /// Recompute in exact rational arithmetic (needs q = ±1).
        #[arg(long)]
        exact: bool,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Search numerically for quantum Levi-Civita connections.
    Solve {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value_t = 32)]
        seeds: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Also verify the family members at q = ±1 exactly.
        #[arg(long)]
        exact: bool,
        #[arg(long)]
        deterministic: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write an action or Laplacian spectrum scan as CSV.
    Scan(ScanArgs),
    /// Evaluate the functional integral and expectation values.
    Integrate(IntegrateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Quantity {
    Action,
    Spectrum,
}

#[derive(Clone, Copy, ValueEnum)]
enum AxisArg {
    K,
    L,
}

#[derive(Clone, Copy, ValueEnum)]
enum SignatureArg {
    Euclidean,
    Minkowski,
}

impl From<SignatureArg> for Signature {
    fn from(s: SignatureArg) -> Self {
        match s {
            SignatureArg::Euclidean => Signature::Euclidean,
            SignatureArg::Minkowski => Signature::Minkowski,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum RuleArg {
    Contour,
    GaussLegendre,
    Tanh,
}

#[derive(Args)]
struct Couplings {
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    k0: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    l0: f64,
    #[arg(long, value_enum, default_value = "euclidean")]
    signature: SignatureArg,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(value_enum)]
    quantity: Quantity,
    /// start:stop:step, inside (-1, 1).
    #[arg(long, allow_hyphen_values = true)]
    grid: String,
    /// Grid for l in action scans; defaults to --grid.
    #[arg(long, allow_hyphen_values = true)]
    grid_l: Option<String>,
    /// Axis scanned in spectrum mode.
    #[arg(long, value_enum, default_value = "l")]
    axis: AxisArg,
    /// The other fluctuation in spectrum mode.
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    fixed: f64,
    /// q = e^{iθ} in spectrum mode.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    theta: f64,
    #[command(flatten)]
    couplings: Couplings,
    #[arg(long)]
    deterministic: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct IntegrateArgs {
    #[command(flatten)]
    couplings: Couplings,
    #[arg(long, value_enum, default_value = "contour")]
    rule: RuleArg,
    /// Nodes per axis on the first pass.
    #[arg(long, default_value_t = 51)]
    points: usize,
    #[arg(long, default_value_t = 4)]
    refinements: usize,
    #[arg(long, default_value_t = 1e-4)]
    target: f64,
    /// Observables among 1, k, l, k2, l2, action; repeat for several.
    #[arg(long = "observable")]
    observables: Vec<String>,
    #[arg(long)]
    deterministic: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// A failure with its exit code.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<QrgError> for Failure {
    fn from(e: QrgError) -> Self {
        let code = match &e {
            QrgError::NonSymmetricMetric(_) => 3,
            QrgError::SolverFailure { .. } => 4,
            QrgError::Convergence(_) | QrgError::IllConditionedNormalization(_) => 5,
            QrgError::InvalidInput(_)
            | QrgError::DegenerateMetric(_)
            | QrgError::Signature(_)
            | QrgError::Admissibility(_)
            | QrgError::ExactUnavailable(_)
            | QrgError::RegimeMismatch { .. }
            | QrgError::Io(_) => 2,
            QrgError::NotBimoduleConnection(_) => 1,
        };
        let message = match e {
            QrgError::NonSymmetricMetric(m) => format!(
                "metric is not edge-symmetric ({m}); Levi-Civita connections are only solved \
                 in the symmetric case, where a does not depend on i and b does not depend on j"
            ),
            other => other.to_string(),
        };
        Failure { code, message }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::new(2, e.to_string())
    }
}

fn mode(deterministic: bool) -> ExecMode {
    if deterministic {
        ExecMode::Deterministic
    } else {
        ExecMode::Parallel
    }
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn write_json(path: &Option<PathBuf>, v: &serde_json::Value) -> Result<(), Failure> {
    let mut w = output(path)?;
    serde_json::to_writer_pretty(&mut w, v).map_err(|e| Failure::new(2, e.to_string()))?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAILED"
    }
}

fn fmt_c(z: Complex64) -> String {
    format!("{:.6}{:+.6}i", z.re, z.im)
}

fn cmd_check(path: &Path, exact: bool, tol: f64) -> Result<(), Failure> {
    let model = load_model(path)?;
    let mut report = String::new();
    let mut all = true;
    let _ = writeln!(
        report,
        "model    Z2xZ2, {} signature, q = e^(i {})",
        model.signature.name(),
        model.q.theta()
    );

    let g = model.metric.metric()?;
    let c = g.checks(tol);
    let symmetric = g.is_symmetric();
    all &= c.all() && symmetric;
    let _ = writeln!(
        report,
        "metric   central {}, quantum symmetric {}, real {}, edge-symmetric {}",
        mark(c.central),
        mark(c.quantum_symmetric),
        mark(c.real),
        mark(symmetric)
    );

    let ModelMetric::Values(v) = model.metric else {
        let _ = writeln!(report, "family   skipped: the Levi-Civita family needs an edge-symmetric metric");
        print!("{report}");
        return Err(Failure::new(1, "invariant failure"));
    };

    if exact {
        all &= check_exact(&model, &v, &mut report)?;
    } else {
        all &= check_float(&model, &v, tol, &mut report)?;
    }
    let _ = writeln!(report, "result   {}", if all { "all checks pass" } else { "invariant failure" });
    print!("{report}");
    if all {
        Ok(())
    } else {
        Err(Failure::new(1, "invariant failure"))
    }
}

fn check_float(model: &Model, v: &MetricValues, tol: f64, report: &mut String) -> Result<bool, Failure> {
    let q = model.q.value();
    let fields = FamilyFields::<Complex64>::new(v, &q)?;
    let n = Connection::new(family_coefficients(&fields), Tolerance::default().eq)?;
    let g = v.metric::<Complex64>()?;
    let (t, ng, ct) = (n.torsion_residual(), n.nabla_g(&g).max_abs(), n.cotorsion(&g).max_abs());
    let real = n.reality_defect();
    let mut ok = t <= tol && ng <= tol && ct <= tol && real <= tol;
    let _ = writeln!(
        report,
        "family   torsion {t:.1e} {}, ∇g {ng:.1e} {}, cotorsion {ct:.1e} {}",
        mark(t <= tol),
        mark(ng <= tol),
        mark(ct <= tol)
    );
    let _ = writeln!(report, "reality  defect {real:.1e} {}", mark(real <= tol));
    let mats = n.sigma().matrices();
    let want = sigma_expected_eigenvalues(&fields);
    for (x, label) in ["00", "01", "10", "11"].iter().enumerate() {
        let ev = eigenvalues4(&mats[x]);
        let d = multiset_distance(&ev, &want[x]);
        ok &= d < 1e-9;
        let shown: Vec<String> = ev.iter().map(|z| fmt_c(*z)).collect();
        let _ = writeln!(report, "sigma    site {label}: [{}] {}", shown.join(", "), mark(d < 1e-9));
    }
    Ok(ok)
}

fn check_exact(model: &Model, v: &MetricValues, report: &mut String) -> Result<bool, Failure> {
    let sign = model.q.exact_sign().ok_or_else(|| {
        QrgError::ExactUnavailable(format!("--exact needs q = ±1, got theta = {}", model.q.theta()))
    })?;
    let q = ExactComplex::from_i64(sign);
    let fields = FamilyFields::<ExactComplex>::new(v, &q)?;
    let n = Connection::new(family_coefficients(&fields), 0.0)?;
    let g = v.metric::<ExactComplex>()?;
    let t = n.torsion_residual() == 0.0;
    let ng = n.nabla_g(&g).is_zero();
    let ct = n.cotorsion(&g).near_zero(0.0);
    let real = n.is_real(0.0);
    let _ = writeln!(
        report,
        "family   exact at q = {sign}: torsion zero {}, ∇g zero {}, cotorsion zero {}",
        mark(t),
        mark(ng),
        mark(ct)
    );
    let _ = writeln!(report, "reality  exact {}", mark(real));
    Ok(t && ng && ct && real)
}

fn cmd_solve(
    path: &Path,
    seeds: usize,
    tol: f64,
    exact: bool,
    deterministic: bool,
    out: &Option<PathBuf>,
) -> Result<(), Failure> {
    let model = load_model(path)?;
    let g = model.metric.metric()?;
    let opts = SolverOptions {
        seeds,
        tol,
        exact,
        mode: mode(deterministic),
        ..SolverOptions::default()
    };
    let rep = qlc_solve(&g, &opts)?;
    let mut doc = serde_json::to_value(&rep).map_err(|e| Failure::new(2, e.to_string()))?;
    if exact {
        let ModelMetric::Values(v) = model.metric else {
            unreachable!("qlc_solve rejects non-symmetric metrics");
        };
        let mut rows = Vec::new();
        for sign in [1, -1] {
            let fields = FamilyFields::<ExactComplex>::new(&v, &ExactComplex::from_i64(sign))?;
            let n = Connection::new(family_coefficients(&fields), 0.0)?;
            let ge = v.metric::<ExactComplex>()?;
            rows.push(json!({
                "q": sign,
                "torsion_zero": n.torsion_residual() == 0.0,
                "nabla_g_zero": n.nabla_g(&ge).is_zero(),
            }));
        }
        doc["exact_family"] = serde_json::Value::Array(rows);
    }
    write_json(out, &doc)
}

fn cmd_scan(a: &ScanArgs) -> Result<(), Failure> {
    let sig: Signature = a.couplings.signature.into();
    let m = mode(a.deterministic);
    let xs = Grid::parse(&a.grid)?.fluctuations()?;
    let mut w = output(&a.out)?;
    match a.quantity {
        Quantity::Action => {
            let ls = match &a.grid_l {
                Some(s) => Grid::parse(s)?.fluctuations()?,
                None => xs.clone(),
            };
            let rows = action_scan(&xs, &ls, a.couplings.k0, a.couplings.l0, sig, m)?;
            write_action_csv(&rows, &mut w)?;
        }
        Quantity::Spectrum => {
            let axis = match a.axis {
                AxisArg::K => ScanAxis::K,
                AxisArg::L => ScanAxis::L,
            };
            let q = make_phase(a.theta)?;
            let rows = spectrum_scan(axis, &xs, a.fixed, a.couplings.k0, a.couplings.l0, sig, q, m)?;
            write_spectrum_csv(axis, &rows, &mut w)?;
        }
    }
    w.flush()?;
    Ok(())
}

fn cmd_integrate(a: &IntegrateArgs) -> Result<(), Failure> {
    let sig: Signature = a.couplings.signature.into();
    let spec = QuadratureSpec {
        rule: match a.rule {
            RuleArg::Contour => QuadratureRule::Contour,
            RuleArg::GaussLegendre => QuadratureRule::GaussLegendre,
            RuleArg::Tanh => QuadratureRule::Tanh,
        },
        points: a.points,
        refinements: a.refinements,
        target_rel_error: a.target,
        mode: mode(a.deterministic),
    };
    let observables = a
        .observables
        .iter()
        .map(|s| {
            Observable::parse(s)
                .ok_or_else(|| Failure::new(2, format!("unknown observable `{s}` (use 1, k, l, k2, l2, action)")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let (k0, l0) = (a.couplings.k0, a.couplings.l0);
    let z = partition_integral(&spec, k0, l0, sig)?;
    let mut ex = serde_json::Map::new();
    for o in &observables {
        let r = expectation(o, &spec, k0, l0, sig)?;
        ex.insert(o.name(), serde_json::to_value(&r).map_err(|e| Failure::new(2, e.to_string()))?);
    }
    let doc = json!({
        "partition": z,
        "expectations": ex,
    });
    write_json(&a.out, &doc)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Check { model, exact, tol } => cmd_check(&model, exact, tol),
        Command::Solve {
            model,
            seeds,
            tol,
            exact,
            deterministic,
            out,
        } => cmd_solve(&model, seeds, tol, exact, deterministic, &out),
        Command::Scan(a) => cmd_scan(&a),
        Command::Integrate(a) => cmd_integrate(&a),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
