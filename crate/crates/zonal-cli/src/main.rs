//! Command-line front end for the `zonal` library.
//!
//! One verb per invocation; results go to standard output (or `--out`) as
//! plain values, JSON coefficient documents, or CSV tables.  Tabular output
//! always echoes the sampling seed in a `# seed=` header so runs are
//! reproducible byte for byte.  Exit codes: 0 on success, 1 when a
//! mathematical precondition is violated (the message names the failed
//! hypothesis), 2 on argument errors.

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use std::error::Error;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use zonal::analysis::{
    alpha_route_lambda, alpha_route_power_limit, dual_route_lambda, dual_route_power_limit,
};
use zonal::coeffs::{expand_refined, CoeffSeq};
use zonal::derivative::{decompose_on_descent, radial_derivative, DECOMPOSITION_SCALE};
use zonal::jacobi::{deriv_triple, eval_dr, eval_r, weight_mass, JacobiParams};
use zonal::kernels::{symmetric_eigenvalues, ZonalKernel};
use zonal::quad::Quadrature;
use zonal::spaces::Space;

#[derive(Parser)]
#[command(
    name = "zonal",
    version,
    about = "Construct, validate, evaluate, and differentiate zonal positive definite kernels",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the normalized Jacobi polynomial R_n (R_n(1) = 1) at a point.
    #[command(allow_negative_numbers = true)]
    JacobiEval {
        /// First weight exponent; must be greater than -1.
        #[arg(long)]
        alpha: f64,
        /// Second weight exponent; must be greater than -1.
        #[arg(long)]
        beta: f64,
        /// Polynomial degree.
        #[arg(long)]
        n: usize,
        /// Evaluation point in [-1, 1].
        #[arg(long)]
        t: f64,
    },
    /// Re-expand a coefficient document at new weight exponents.
    #[command(allow_negative_numbers = true)]
    Expand {
        /// Input coefficient or kernel document.
        #[arg(long)]
        coeffs: PathBuf,
        /// Target first exponent.
        #[arg(long)]
        alpha: f64,
        /// Target second exponent.
        #[arg(long)]
        beta: f64,
        /// Write the resulting document here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply an index-raising transform to a coefficient document.
    Lift {
        /// Input coefficient or kernel document.
        #[arg(long)]
        coeffs: PathBuf,
        /// Which exponent to raise by one.
        #[arg(long, value_enum)]
        kind: LiftKind,
        /// Write the resulting document here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report whether a coefficient document is positive definite.
    PdCheck {
        /// Input coefficient or kernel document.
        #[arg(long)]
        coeffs: PathBuf,
    },
    /// Evaluate a kernel's radial part at one node or on a uniform grid.
    #[command(allow_negative_numbers = true)]
    #[command(group(ArgGroup::new("nodes").required(true).args(["t", "points"])))]
    KernelEval {
        /// Space descriptor: sphere:d, rp:d, cp:d, hp:d, or cayley.
        #[arg(long, value_parser = parse_space)]
        space: Space,
        /// Input coefficient or kernel document.
        #[arg(long)]
        coeffs: PathBuf,
        /// Single evaluation node in [-1, 1].
        #[arg(long)]
        t: Option<f64>,
        /// Number of uniform grid nodes over [-1, 1] (at least 2).
        #[arg(long)]
        points: Option<usize>,
        /// Seed echoed in table headers.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Table layout.
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Write the table here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the Gram matrix of a kernel over sampled points, with spectrum summary.
    Gram {
        /// Space descriptor: sphere:d, rp:d, cp:d, hp:d, or cayley.
        #[arg(long, value_parser = parse_space)]
        space: Space,
        /// Input coefficient or kernel document.
        #[arg(long)]
        coeffs: PathBuf,
        /// Number of points to sample on the space.
        #[arg(long)]
        points: usize,
        /// Sampling seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Table layout.
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Write the table here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a derivative of a kernel's radial part.
    #[command(allow_negative_numbers = true)]
    #[command(group(ArgGroup::new("nodes").required(true).args(["t", "points"])))]
    Derive {
        /// Space descriptor: sphere:d, rp:d, cp:d, hp:d, or cayley.
        #[arg(long, value_parser = parse_space)]
        space: Space,
        /// Input coefficient or kernel document.
        #[arg(long)]
        coeffs: PathBuf,
        /// Derivative order; limited by the space's guaranteed smoothness.
        #[arg(long)]
        order: u32,
        /// Single evaluation node in the open interval (-1, 1).
        #[arg(long)]
        t: Option<f64>,
        /// Number of uniform interior grid nodes (endpoints excluded).
        #[arg(long)]
        points: Option<usize>,
        /// Seed echoed in table headers.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Table layout.
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Write the table here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the guaranteed derivative order of kernels on a space.
    Order {
        /// Space descriptor: sphere:d, rp:d, cp:d, hp:d, or cayley.
        #[arg(long, value_parser = parse_space)]
        space: Space,
    },
    /// Run a built-in verification suite and print pass/fail lines.
    Verify {
        /// Which suite to run.
        #[arg(long, value_enum)]
        suite: Suite,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum LiftKind {
    /// Raise the first exponent by one.
    Alpha,
    /// Raise the second exponent by one.
    Beta,
    /// Raise both exponents by one.
    Both,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    /// Comma-separated rows with `#` comment headers.
    Csv,
    /// Labeled `key=value` rows with `#` comment headers.
    Text,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Suite {
    Jacobi,
    Transforms,
    Decomposition,
    Gram,
    Lambdas,
    All,
}

fn parse_space(text: &str) -> Result<Space, String> {
    text.parse::<Space>().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

type CliResult = Result<(), Box<dyn Error>>;

fn run(command: Command) -> CliResult {
    match command {
        Command::JacobiEval { alpha, beta, n, t } => {
            let params = JacobiParams::new(alpha, beta)?;
            println!("{}", eval_r(params, n, t)?);
            Ok(())
        }
        Command::Expand {
            coeffs,
            alpha,
            beta,
            out,
        } => {
            let c = read_coeffs(&coeffs)?;
            let target = JacobiParams::new(alpha, beta)?;
            emit(out.as_ref(), &c.reexpand(target)?.to_json_string())
        }
        Command::Lift { coeffs, kind, out } => {
            let c = read_coeffs(&coeffs)?;
            let lifted = match kind {
                LiftKind::Alpha => c.lift_alpha(),
                LiftKind::Beta => c.lift_beta(),
                LiftKind::Both => c.lift_both(),
            };
            emit(out.as_ref(), &lifted.to_json_string())
        }
        Command::PdCheck { coeffs } => {
            let report = read_coeffs(&coeffs)?.pd_check();
            let index = match report.first_negative_index {
                Some(i) => i.to_string(),
                None => "none".to_string(),
            };
            println!(
                "is_pd={} index={} total_mass={}",
                report.is_pd, index, report.total_mass
            );
            Ok(())
        }
        Command::KernelEval {
            space,
            coeffs,
            t,
            points,
            seed,
            format,
            out,
        } => {
            let kernel = ZonalKernel::new(space, read_coeffs(&coeffs)?)?;
            if let Some(t) = t {
                println!("{}", kernel.eval_radial(t)?);
                return Ok(());
            }
            let n = grid_size(points)?;
            let mut table = String::new();
            let _ = writeln!(table, "# seed={seed}");
            let _ = writeln!(table, "# space={space} nodes={n}");
            if format == Format::Csv {
                table.push_str("t,value\n");
            }
            for i in 0..n {
                let t = -1.0 + 2.0 * i as f64 / (n - 1) as f64;
                let v = kernel.eval_radial(t)?;
                match format {
                    Format::Csv => {
                        let _ = writeln!(table, "{t},{v}");
                    }
                    Format::Text => {
                        let _ = writeln!(table, "t={t} value={v}");
                    }
                }
            }
            emit(out.as_ref(), &table)
        }
        Command::Gram {
            space,
            coeffs,
            points,
            seed,
            format,
            out,
        } => {
            let kernel = ZonalKernel::new(space, read_coeffs(&coeffs)?)?;
            let pts = space.sample_points(points, seed)?;
            let gram = kernel.gram(&pts)?;
            let eigs = symmetric_eigenvalues(&gram);
            let trace: f64 = (0..points).map(|i| gram[(i, i)]).sum();
            let sep = if format == Format::Csv { "," } else { " " };
            let mut table = String::new();
            let _ = writeln!(table, "# seed={seed}");
            let _ = writeln!(table, "# space={space} points={points}");
            for i in 0..points {
                let row: Vec<String> = (0..points).map(|j| gram[(i, j)].to_string()).collect();
                let _ = writeln!(table, "{}", row.join(sep));
            }
            let _ = writeln!(table, "# trace={trace}");
            let _ = writeln!(table, "# min_eigenvalue={}", eigs[0]);
            let _ = writeln!(table, "# max_eigenvalue={}", eigs[points - 1]);
            emit(out.as_ref(), &table)
        }
        Command::Derive {
            space,
            coeffs,
            order,
            t,
            points,
            seed,
            format,
            out,
        } => {
            let kernel = ZonalKernel::new(space, read_coeffs(&coeffs)?)?;
            let derivative = kernel.differentiate(order)?;
            if let Some(t) = t {
                let sample = derivative.eval(t)?;
                if sample.near_endpoint {
                    eprintln!("note: node within 1e-6 of an endpoint; the weight (1-t^2)^-order amplifies roundoff");
                }
                println!("{}", sample.value);
                return Ok(());
            }
            let n = grid_size(points)?;
            let mut table = String::new();
            let _ = writeln!(table, "# seed={seed}");
            let _ = writeln!(table, "# space={space} order={order} nodes={n}");
            if format == Format::Csv {
                table.push_str("t,value,near_endpoint\n");
            }
            for i in 0..n {
                let t = -1.0 + 2.0 * (i + 1) as f64 / (n + 1) as f64;
                let sample = derivative.eval(t)?;
                match format {
                    Format::Csv => {
                        let _ = writeln!(table, "{t},{},{}", sample.value, sample.near_endpoint);
                    }
                    Format::Text => {
                        let _ = writeln!(
                            table,
                            "t={t} value={} near_endpoint={}",
                            sample.value, sample.near_endpoint
                        );
                    }
                }
            }
            emit(out.as_ref(), &table)
        }
        Command::Order { space } => {
            println!("{}", space.smoothness_order()?);
            Ok(())
        }
        Command::Verify { suite } => verify(suite),
    }
}

/// Read a coefficient document, accepting either a bare coefficient file or a
/// kernel file (recognized by its `space` field).
fn read_coeffs(path: &PathBuf) -> Result<CoeffSeq, Box<dyn Error>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    if value.get("space").is_some() {
        Ok(ZonalKernel::from_json_str(&text)?.coeffs().clone())
    } else {
        Ok(CoeffSeq::from_json_str(&text)?)
    }
}

fn emit(out: Option<&PathBuf>, text: &str) -> CliResult {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| format!("cannot write {}: {e}", path.display()).into()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn grid_size(points: Option<usize>) -> Result<usize, Box<dyn Error>> {
    let n = points.expect("clap guarantees one of --t/--points");
    if n < 2 {
        return Err("--points must be at least 2".into());
    }
    Ok(n)
}

// ---------------------------------------------------------------------------
// Verification suites
// ---------------------------------------------------------------------------

struct Check {
    ok: bool,
    line: String,
}

fn check(list: &mut Vec<Check>, ok: bool, line: String) {
    list.push(Check { ok, line });
}

fn verify(suite: Suite) -> CliResult {
    let mut checks = Vec::new();
    if matches!(suite, Suite::Jacobi | Suite::All) {
        verify_jacobi(&mut checks);
    }
    if matches!(suite, Suite::Transforms | Suite::All) {
        verify_transforms(&mut checks);
    }
    if matches!(suite, Suite::Decomposition | Suite::All) {
        verify_decomposition(&mut checks);
    }
    if matches!(suite, Suite::Gram | Suite::All) {
        verify_gram(&mut checks);
    }
    if matches!(suite, Suite::Lambdas | Suite::All) {
        verify_lambdas(&mut checks);
    }
    let mut failed = 0usize;
    for c in &checks {
        println!("{} {}", if c.ok { "ok" } else { "FAIL" }, c.line);
        failed += usize::from(!c.ok);
    }
    if failed > 0 {
        return Err(format!("{failed} of {} checks failed", checks.len()).into());
    }
    Ok(())
}

fn verify_pairs() -> Vec<JacobiParams> {
    [(0.0, 0.0), (0.5, -0.5), (1.0, 0.0), (2.5, 1.5)]
        .iter()
        .map(|&(a, b)| JacobiParams::new(a, b).unwrap())
        .collect()
}

fn interior_grid(count: usize) -> Vec<f64> {
    (0..count)
        .map(|i| -0.98 + 1.96 * i as f64 / (count - 1) as f64)
        .collect()
}

fn verify_jacobi(checks: &mut Vec<Check>) {
    let nodes = interior_grid(21);
    let mut worst = 0.0f64;
    for &params in &verify_pairs() {
        for n in 1..=30usize {
            let triple = deriv_triple(params, n).unwrap();
            for &t in &nodes {
                let lhs = (1.0 - t * t) * eval_dr(params, n, t).unwrap();
                let rhs = triple.a * eval_r(params, n - 1, t).unwrap()
                    + triple.b * eval_r(params, n, t).unwrap()
                    + triple.c * eval_r(params, n + 1, t).unwrap();
                worst = worst.max((lhs - rhs).abs() / (1.0 + lhs.abs()));
            }
        }
    }
    check(
        checks,
        worst <= 1e-10,
        format!("jacobi three-term derivative identity: worst residual {worst:.3e} (tol 1e-10)"),
    );

    let mut endpoint = 0.0f64;
    for &params in &verify_pairs() {
        for n in 0..=30usize {
            endpoint = endpoint.max((eval_r(params, n, 1.0).unwrap() - 1.0).abs());
        }
    }
    check(
        checks,
        endpoint == 0.0,
        format!("jacobi normalization at the right endpoint: worst deviation {endpoint:.3e} (exact)"),
    );

    let mut mass_gap = 0.0f64;
    for &params in &verify_pairs() {
        let quad = Quadrature::gauss_jacobi(params, 20).unwrap();
        mass_gap = mass_gap.max((quad.integrate(|_| 1.0) - weight_mass(params)).abs());
    }
    check(
        checks,
        mass_gap <= 1e-12,
        format!("jacobi weight mass vs quadrature: worst gap {mass_gap:.3e} (tol 1e-12)"),
    );
}

fn verify_transforms(checks: &mut Vec<Check>) {
    let degree = 12usize;
    let values: Vec<f64> = (0..=degree).map(|n| ((n + 1) as f64).powi(-2)).collect();
    let mut worst_lift = 0.0f64;
    let mut worst_comp = 0.0f64;
    for &params in &verify_pairs() {
        let c = CoeffSeq::new(params, values.clone()).unwrap();
        let (al, be) = (params.alpha(), params.beta());
        let lifts = [
            (c.lift_alpha(), JacobiParams::new(al + 1.0, be).unwrap()),
            (c.lift_beta(), JacobiParams::new(al, be + 1.0).unwrap()),
            (c.lift_both(), JacobiParams::new(al + 1.0, be + 1.0).unwrap()),
        ];
        for (lifted, target) in lifts {
            let oracle = expand_refined(|t| c.eval(t).unwrap(), target, degree, degree).unwrap();
            for (x, y) in lifted.values().iter().zip(oracle.values()) {
                worst_lift = worst_lift.max((x - y).abs());
            }
        }
        let composed = c.lift_alpha().lift_beta();
        for (x, y) in c.lift_both().values().iter().zip(composed.values()) {
            worst_comp = worst_comp.max((x - y).abs());
        }
    }
    check(
        checks,
        worst_lift <= 1e-10,
        format!("transform lifts vs quadrature re-expansion: worst gap {worst_lift:.3e} (tol 1e-10)"),
    );
    check(
        checks,
        worst_comp <= 1e-12,
        format!("transform double raise vs composed single raises: worst gap {worst_comp:.3e} (tol 1e-12)"),
    );

    let base = JacobiParams::new(0.5, 0.5).unwrap();
    let up = JacobiParams::new(2.5, 2.5).unwrap();
    let c = CoeffSeq::new(base, values.clone()).unwrap();
    let round = c.reexpand(up).unwrap().reexpand(base).unwrap();
    let mut worst_round = 0.0f64;
    for (x, y) in c.values().iter().zip(round.values()) {
        worst_round = worst_round.max((x - y).abs());
    }
    check(
        checks,
        worst_round <= 1e-10,
        format!("transform integer re-expansion round trip: worst gap {worst_round:.3e} (tol 1e-10)"),
    );
}

fn verify_decomposition(checks: &mut Vec<Check>) {
    let spaces = [
        Space::Sphere(5),
        Space::RealProjective(4),
        Space::ComplexProjective(6),
        Space::QuaternionicProjective(8),
        Space::Cayley,
    ];
    let nodes = interior_grid(41);
    let mut worst = 0.0f64;
    let mut min_coeff = f64::INFINITY;
    for space in spaces {
        let params = space.jacobi_params().unwrap();
        let values: Vec<f64> = (0..=10).map(|n| ((n + 1) as f64).powi(-3)).collect();
        let c = CoeffSeq::new(params, values).unwrap();
        let d = decompose_on_descent(space, &c).unwrap();
        let mut max_oracle = 0.0f64;
        let mut max_err = 0.0f64;
        for &t in &nodes {
            let oracle = (1.0 - t * t) * radial_derivative(d.source(), t).unwrap();
            max_oracle = max_oracle.max(oracle.abs());
            max_err = max_err.max((d.difference(t).unwrap() - oracle).abs());
        }
        worst = worst.max(max_err / (1.0 + max_oracle));
        for half in [d.f1(), d.f2()] {
            for &v in half.values() {
                min_coeff = min_coeff.min(v);
            }
        }
    }
    check(
        checks,
        worst <= 1e-10,
        format!("decomposition split identity on five spaces: worst residual {worst:.3e} (tol 1e-10)"),
    );
    check(
        checks,
        min_coeff >= -1e-12,
        format!("decomposition split halves nonnegative: minimum coefficient {min_coeff:.3e} (floor -1e-12)"),
    );

    // Calibrate the proportionality constant of each route by least squares
    // against the termwise derivative oracle.
    for (label, space) in [
        ("single-raise route (rp:4)", Space::RealProjective(4)),
        ("double-raise route (sphere:5)", Space::Sphere(5)),
    ] {
        let params = space.jacobi_params().unwrap();
        let values: Vec<f64> = (0..=10).map(|n| ((n + 1) as f64).powi(-3)).collect();
        let c = CoeffSeq::new(params, values).unwrap();
        let d = decompose_on_descent(space, &c).unwrap();
        let mut num = 0.0f64;
        let mut den = 0.0f64;
        for &t in &nodes {
            let oracle = (1.0 - t * t) * radial_derivative(d.source(), t).unwrap();
            let raw = d.f1().eval(t).unwrap() - d.f2().eval(t).unwrap();
            num += oracle * raw;
            den += raw * raw;
        }
        let fitted = num / den;
        check(
            checks,
            (fitted - DECOMPOSITION_SCALE).abs() <= 1e-9,
            format!(
                "decomposition calibrated scale, {label}: {fitted} (expected {DECOMPOSITION_SCALE})"
            ),
        );
    }
}

fn verify_gram(checks: &mut Vec<Check>) {
    let mut worst_scaled = f64::INFINITY;
    let mut all_psd = true;
    for space in [Space::Sphere(3), Space::RealProjective(3)] {
        let params = space.jacobi_params().unwrap();
        let c = CoeffSeq::new(params, vec![1.0, 0.5, 0.25, 0.125]).unwrap();
        let kernel = ZonalKernel::new(space, c).unwrap();
        for seed in 0..2u64 {
            let pts = space.sample_points(16, seed).unwrap();
            let gram = kernel.gram(&pts).unwrap();
            let trace: f64 = (0..16).map(|i| gram[(i, i)]).sum();
            let scaled = symmetric_eigenvalues(&gram)[0] / (trace / 16.0);
            worst_scaled = worst_scaled.min(scaled);
            all_psd &= scaled >= -1e-8;
        }
    }
    check(
        checks,
        all_psd,
        format!("gram matrices of pd kernels are PSD: worst scaled eigenvalue {worst_scaled:.3e} (floor -1e-8)"),
    );

    let space = Space::Sphere(2);
    let params = space.jacobi_params().unwrap();
    let bad = ZonalKernel::new(space, CoeffSeq::new(params, vec![1.0, 0.4, -0.5]).unwrap()).unwrap();
    let mut indefinite = 0usize;
    for seed in 0..5u64 {
        let pts = space.sample_points(30, seed).unwrap();
        let gram = bad.gram(&pts).unwrap();
        let trace: f64 = (0..30).map(|i| gram[(i, i)]).sum();
        if symmetric_eigenvalues(&gram)[0] < -1e-8 * trace / 30.0 {
            indefinite += 1;
        }
    }
    check(
        checks,
        indefinite >= 1,
        format!("gram negative control is caught: indefinite in {indefinite}/5 seeds (expect >= 1)"),
    );
}

fn verify_lambdas(checks: &mut Vec<Check>) {
    let pairs = verify_pairs();
    let n_max = 10_000usize;
    let mut monotone = true;
    let mut gap_single = 0.0f64;
    let mut gap_double = 0.0f64;
    for &params in &pairs {
        let mut prev_a = -1.0f64;
        let mut prev_d = -1.0f64;
        for n in 1..=n_max {
            let a = alpha_route_lambda(params, n).unwrap();
            let d = dual_route_lambda(params, n).unwrap();
            monotone &= a > prev_a && a < 1.0 && d > prev_d && d < 1.0;
            prev_a = a;
            prev_d = d;
        }
        let power = n_max as f64;
        gap_single = gap_single.max((prev_a.powf(power) - alpha_route_power_limit(params)).abs());
        gap_double = gap_double.max((prev_d.powf(power) - dual_route_power_limit(params)).abs());
    }
    check(
        checks,
        monotone,
        format!("lambda sequences strictly increasing and below one for n <= {n_max}: {monotone}"),
    );
    check(
        checks,
        gap_single <= 2e-3,
        format!("lambda single-raise power limit: measured |lambda^n - limit| {gap_single:.3e} (tol 2e-3)"),
    );
    check(
        checks,
        gap_double <= 2e-3,
        format!("lambda double-raise power limit: measured |lambda^n - limit| {gap_double:.3e} (tol 2e-3)"),
    );
}
