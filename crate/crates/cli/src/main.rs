//! `latmon`: lattice sums, monotonicity certificates, dimension bounds and
//! inequality fuzzing from the command line.
//!
//! Exit codes: 0 all assertions hold, 1 a mathematical assertion failed,
//! 2 usage or domain error, 3 internal accuracy failure.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod report;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use latmon_core::bounds::{self, BoundaryCondition, CltSource, ConstantsRegistry, Ns2dVariant, PhysicalParams, QCurve};
use latmon_core::latsum::{self, LatticeSumQuery, Method, MethodResult};
use latmon_core::monotone::{self, Condition};
use latmon_core::orthofam;
use latmon_core::{Error, Tolerance};

use report::{Record, RunReport};

const TOL_ENV: &str = "LATMON_DEFAULT_TOL";

#[derive(Parser)]
#[command(name = "latmon", version, about = "Lattice sums, monotonicity certificates and attractor-dimension bounds")]
struct Cli {
    /// Emit JSON (the default).
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// Emit CSV: a header row and one row per result record.
    #[arg(long, global = true)]
    csv: bool,
    /// Directory for shell-table cache files.
    #[arg(long, global = true, value_name = "DIR")]
    cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate I_p(m) by one or all methods and cross-check them.
    Latsum {
        #[arg(long)]
        dim: u32,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        m: f64,
        #[arg(long, value_enum, default_value = "all")]
        method: MethodArg,
        /// Absolute tolerance; falls back to $LATMON_DEFAULT_TOL, then 1e-12.
        #[arg(long)]
        tol: Option<f64>,
        /// Also report dI/dm.
        #[arg(long)]
        derivative: bool,
    },
    /// Scan a monotonicity condition on a log-spaced grid.
    Certify {
        #[arg(long, value_enum)]
        condition: ConditionArg,
        #[arg(long, default_value_t = 1e-3)]
        y_min: f64,
        #[arg(long, default_value_t = 100.0)]
        y_max: f64,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long)]
        refine: bool,
    },
    /// Attractor-dimension bounds for 2D Navier–Stokes and the damped α-models.
    Dimbound {
        #[arg(long, value_enum)]
        model: ModelArg,
        #[arg(long)]
        nu: Option<f64>,
        #[arg(long)]
        area: Option<f64>,
        #[arg(long)]
        f_norm: Option<f64>,
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        g_norm: Option<f64>,
        #[arg(long)]
        curl_g_norm: Option<f64>,
        #[arg(long, value_enum, default_value = "no-boundary")]
        bc: BcArg,
        /// Lieb–Thirring constant: fhjn, dll, hlw, lt, or a positive number.
        #[arg(long, default_value = "fhjn")]
        clt: String,
        /// Ladyzhenskaya constant; defaults to 16/(27π).
        #[arg(long)]
        clad: Option<f64>,
        /// Print q(n) for the integers around each root.
        #[arg(long)]
        q_table: bool,
    },
    /// Randomized checks of the L^p bounds on the torus.
    Fuzz {
        #[arg(long, value_enum)]
        check: CheckArg,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Family size.
        #[arg(long, default_value_t = 4)]
        n: usize,
        /// Shift in m²(u, v) + (∇u, ∇v).
        #[arg(long, default_value_t = 1.0)]
        m: f64,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, default_value_t = 4.0)]
        q: f64,
        /// Largest wavevector norm.
        #[arg(long, default_value_t = 8)]
        modes: u32,
        /// Filter parameter for the α check.
        #[arg(long, default_value_t = 0.25)]
        alpha: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Direct,
    Theta,
    Bessel,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConditionArg {
    Condmon,
    Suff3,
    Mono3,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Ns2d,
    Alpha2d,
    Alpha3d,
}

#[derive(Clone, Copy, ValueEnum)]
enum BcArg {
    NoBoundary,
    Proper,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckArg {
    Liebd2,
    Gagnir,
    Alpha,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Domain(_) | Error::MissingParameter(_) | Error::Precondition(_) | Error::Aliasing(_) => 2,
            Error::Accuracy(_) | Error::Cutoff(_) | Error::Capacity(_) | Error::RankDeficient(_) | Error::Cache(_) => 3,
        };
        Self { code, message: e.to_string() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = match &cli.command {
        Command::Latsum { dim, p, m, method, tol, derivative } => {
            cmd_latsum(&cli, *dim, *p, *m, *method, *tol, *derivative)
        }
        Command::Certify { condition, y_min, y_max, samples, refine } => {
            cmd_certify(*condition, *y_min, *y_max, *samples, *refine)
        }
        Command::Dimbound { .. } => cmd_dimbound(&cli.command),
        Command::Fuzz { .. } => cmd_fuzz(&cli.command),
    };
    match result {
        Ok((mut report, code)) => {
            report.wall_time_s = start.elapsed().as_secs_f64();
            let mut out = io::stdout().lock();
            let written = if cli.csv {
                report.write_csv(&mut out).map_err(|e| e.to_string())
            } else {
                report.write_json(&mut out).map_err(|e| e.to_string())
            };
            if let Err(e) = written.and_then(|_| out.flush().map_err(|e| e.to_string())) {
                eprintln!("error: writing report: {e}");
                return ExitCode::from(3);
            }
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

type Outcome = Result<(RunReport, u8), Failure>;

fn assertion_code(report: &RunReport) -> u8 {
    if report.all_pass() {
        0
    } else {
        1
    }
}

fn tolerance(flag: Option<f64>) -> Result<Tolerance, Failure> {
    let raw = match flag {
        Some(t) => t,
        None => match std::env::var(TOL_ENV) {
            Ok(s) => s.trim().parse().map_err(|_| Failure::usage(format!("{TOL_ENV}={s:?} is not a number")))?,
            Err(_) => return Ok(Tolerance::default()),
        },
    };
    if !(raw > 0.0) {
        return Err(Failure::usage(format!("tolerance must be positive, got {raw}")));
    }
    Ok(Tolerance::absolute(raw)?)
}

fn cmd_latsum(cli: &Cli, dim: u32, p: f64, m: f64, method: MethodArg, tol: Option<f64>, derivative: bool) -> Outcome {
    let tol = tolerance(tol)?;
    let q = LatticeSumQuery::new(dim, p, m, tol)?;
    let mut report = RunReport::new("latsum");
    report.param("dim", dim);
    report.param("p", p);
    report.param("m", m);
    report.param("tol", tol);
    let methods: Vec<Method> = match method {
        MethodArg::Direct => vec![Method::Direct],
        MethodArg::Theta => vec![Method::ThetaIntegral],
        MethodArg::Bessel => vec![Method::BesselSeries],
        MethodArg::All if dim == 2 => Method::ALL.to_vec(),
        MethodArg::All => vec![Method::Direct, Method::ThetaIntegral],
    };
    report.param("methods", methods.iter().map(|m| m.name()).collect::<Vec<_>>());

    let mut results: Vec<MethodResult> = Vec::new();
    for meth in &methods {
        eprintln!("evaluating {} ...", meth.name());
        let r = latsum::evaluate_cached(&q, *meth, cli.cache_dir.as_deref())?;
        report.push(
            Record::new("method", meth.name(), r.value)
                .error_bound(r.error_bound)
                .detail(format!("{:?} bound, {} terms", r.bound_kind, r.terms_used).to_lowercase()),
        );
        results.push(r);
    }
    let mut agree = true;
    for i in 0..results.len() {
        for j in i + 1..results.len() {
            let (a, b) = (&results[i], &results[j]);
            let delta = (a.value - b.value).abs();
            let allowed = a.error_bound + b.error_bound + 2.0 * tol.allowance(a.value);
            let ok = delta <= allowed;
            agree &= ok;
            report.push(
                Record::new("delta", format!("{}-{}", a.method.name(), b.method.name()), delta)
                    .reference(allowed)
                    .pass(ok),
            );
        }
    }
    let limit = latsum::limit_value(dim, p)?;
    let value = results[0].value;
    report.push(Record::new("bound", "below_limit", value).reference(limit).pass(value < limit));
    if derivative && m > 0.0 {
        let d = latsum::derivative_dm(&q)?;
        report.push(Record::new("derivative", "dI_dm", d).reference(0.0).pass(d > 0.0));
    }
    if !agree {
        let f = Failure { code: 3, message: "methods disagree beyond their error bounds".into() };
        eprintln!("error: {}", f.message);
        return Ok((report, f.code));
    }
    let code = assertion_code(&report);
    Ok((report, code))
}

fn cmd_certify(condition: ConditionArg, y_min: f64, y_max: f64, samples: usize, refine: bool) -> Outcome {
    let cond = match condition {
        ConditionArg::Condmon => Condition::Condmon2d,
        ConditionArg::Suff3 => Condition::Suff3_3d,
        ConditionArg::Mono3 => Condition::Mono3_3d,
    };
    if !(y_min > 0.0 && y_min < y_max) {
        return Err(Failure::usage(format!("need 0 < y-min < y-max, got [{y_min}, {y_max}]")));
    }
    let mut report = RunReport::new("certify");
    report.param("condition", cond.name());
    report.param("y_min", y_min);
    report.param("y_max", y_max);
    report.param("samples", samples);
    report.param("refine", refine);
    eprintln!("scanning {} on {samples} points ...", cond.name());
    let cert = monotone::certify(cond, y_min, y_max, samples, refine)?;
    report.push(
        Record::new("check", "min_value", cert.min_value.value())
            .reference(0.0)
            .pass(cert.min_value.is_positive())
            .detail(format!("ln|min| = {:.17e}", cert.min_value.ln_abs())),
    );
    report.push(Record::new("check", "min_location", cert.min_location));
    report.push(Record::new("check", "violations", cert.violations.len() as f64).reference(0.0).pass(cert.holds()));
    for (name, v) in &cert.named_constants {
        report.push(Record::new("constant", name.as_str(), *v));
    }
    for y in &cert.violations {
        report.push(Record::new("violation", "y", *y).pass(false));
    }
    let code = assertion_code(&report);
    Ok((report, code))
}

fn parse_clt(s: &str) -> Result<f64, Failure> {
    if let Some(src) = CltSource::parse(s) {
        return Ok(src.clt());
    }
    let v: f64 = s
        .parse()
        .map_err(|_| Failure::usage(format!("--clt must be fhjn, dll, hlw, lt or a number, got {s:?}")))?;
    if !(v > 0.0) || !v.is_finite() {
        return Err(Failure::usage(format!("--clt must be positive, got {v}")));
    }
    Ok(v)
}

fn q_table(report: &mut RunReport, label: &str, curve: &QCurve) {
    let centre = curve.root().floor() as i64;
    for n in (centre - 5).max(0)..=centre + 5 {
        report.push(Record::new("q_table", format!("{label}({n})"), curve.eval(n as f64)));
    }
}

fn cmd_dimbound(cmd: &Command) -> Outcome {
    let Command::Dimbound { model, nu, area, f_norm, gamma, alpha, g_norm, curl_g_norm, bc, clt, clad, q_table: table } = cmd
    else {
        unreachable!()
    };
    let reg = ConstantsRegistry::default();
    reg.check()?;
    let mut report = RunReport::new("dimbound");
    match model {
        ModelArg::Ns2d => {
            let params = PhysicalParams { nu: *nu, area: *area, f_l2: *f_norm, ..Default::default() };
            let clt = parse_clt(clt)?;
            let clad = clad.unwrap_or(reg.clad_upper);
            report.param("model", "ns2d");
            report.param("params", params);
            if clt < reg.clt_lower {
                report.warn(format!("c_LT = {clt} is below the semiclassical value 1/(2π)"));
            }
            let g = bounds::grashof(&params)?;
            report.push(Record::new("constant", "grashof", g));
            report.push(Record::new("constant", "clt", clt));
            report.push(Record::new("constant", "clad", clad));
            let li_yau = bounds::dim_bound_ns2d(&params, clt, Ns2dVariant::LiYau)?;
            let no_li_yau = bounds::dim_bound_ns2d(&params, clt, Ns2dVariant::NoLiYau)?;
            let pre_lt = bounds::dim_bound_ns2d(&params, clad, Ns2dVariant::PreLt)?;
            report.push(Record::new("bound", "li_yau", li_yau));
            report.push(Record::new("bound", "no_li_yau", no_li_yau));
            report.push(Record::new("bound", "pre_lt", pre_lt));
            if clt >= reg.clt_lower {
                report.push(Record::new("check", "li_yau_below_no_li_yau", li_yau).reference(no_li_yau).pass(li_yau < no_li_yau));
            }
            let (_, lambda1) = bounds::stokes_lower_bounds(1, area.unwrap_or(f64::NAN), 2)?;
            report.push(Record::new("bound", "stokes_lambda1", lambda1));
            report.push(Record::new("constant", "crossover_grashof", bounds::crossover_grashof(clt, clad)));
            let lt = QCurve::lieb_thirring(&params, clt)?;
            let lad = QCurve::ladyzhenskaya(&params, clad)?;
            for (label, curve) in [("q_lt", &lt), ("q_lad", &lad)] {
                match bounds::n_lifschitz_scan(curve) {
                    Ok(l) => report.push(
                        Record::new("check", format!("{label}_n_lifschitz"), l.n_l)
                            .reference(l.n_star)
                            .pass(l.within_root)
                            .detail(format!("n = {}", l.n)),
                    ),
                    Err(e) => report.warn(format!("{label}: {e}")),
                }
                if *table {
                    q_table(&mut report, label, curve);
                }
            }
        }
        ModelArg::Alpha2d | ModelArg::Alpha3d => {
            let dim = if matches!(model, ModelArg::Alpha2d) { 2 } else { 3 };
            let bc = match bc {
                BcArg::NoBoundary => BoundaryCondition::NoBoundary,
                BcArg::Proper => BoundaryCondition::ProperDomain,
            };
            let params = PhysicalParams { gamma: *gamma, alpha: *alpha, g_l2: *g_norm, curl_g_l2: *curl_g_norm, ..Default::default() };
            report.param("model", if dim == 2 { "alpha2d" } else { "alpha3d" });
            report.param("bc", bc);
            report.param("params", params);
            let b = bounds::dim_bound_alpha(dim, bc, &params)?;
            if b.degenerate_min {
                report.warn("only one of --g-norm and --curl-g-norm given; the minimum uses the available term");
            }
            report.push(Record::new("bound", format!("alpha{dim}d"), b.value));
        }
    }
    let code = assertion_code(&report);
    Ok((report, code))
}

fn cmd_fuzz(cmd: &Command) -> Outcome {
    let Command::Fuzz { check, trials, seed, n, m, p, q, modes, alpha } = cmd else { unreachable!() };
    if *trials == 0 {
        return Err(Failure::usage("--trials must be at least 1"));
    }
    let mut report = RunReport::new("fuzz");
    report.param("trials", trials);
    report.param("seed", seed);
    report.param("modes", modes);
    report.seeds = vec![*seed];
    let (name, summary, bound) = match check {
        CheckArg::Liebd2 => {
            report.param("check", "liebd2");
            report.param("n", n);
            report.param("m", m);
            report.param("p", p);
            let s = orthofam::fuzz_liebd2(*n, *m, *p, *modes, *seed, *trials)?;
            let first = orthofam::check_liebd2(&orthofam::random_ortho_family(*n, *m, *modes, *seed)?, *p)?;
            report.push(Record::new("check", "first_trial_lhs", first.lhs).reference(first.rhs).pass(first.holds));
            (format!("liebd2_p{p}"), s, 1.0)
        }
        CheckArg::Gagnir => {
            report.param("check", "gagnir");
            report.param("q", q);
            let s = orthofam::fuzz_gagnir(*q, *modes, *seed, *trials)?;
            let c = bounds::gagnir_constant(*q, bounds::Space::Torus)?;
            report.push(Record::new("constant", "gagnir_constant", c));
            (format!("gagnir_q{q}"), s, c)
        }
        CheckArg::Alpha => {
            report.param("check", "alpha");
            report.param("n", n);
            report.param("alpha", alpha);
            let s = orthofam::fuzz_alpha(*n, *alpha, *modes, *seed, *trials)?;
            (format!("alpha_n{n}"), s, 1.0)
        }
    };
    report.push(Record::new("check", "passes", summary.passes as f64).reference(summary.trials as f64).pass(summary.all_pass()));
    report.push(Record::new("check", "max_ratio", summary.max_ratio).reference(bound).detail(name));
    if let Some(s) = summary.first_failing_seed {
        report.push(Record::new("check", "first_failing_seed", s as f64).pass(false));
    }
    let code = assertion_code(&report);
    Ok((report, code))
}
