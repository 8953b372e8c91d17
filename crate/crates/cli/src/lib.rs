//! Command-line front end for `rppa-core`: print schedules, run the solvers,
//! execute the certification suites and regenerate the bound tables.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use thiserror::Error;

use rppa_core::bounds::{upper_bound, upper_bound_gd, Measure};
use rppa_core::certify::{
    default_sweep_schedules, gd_upper_bound_sweep, run_suite, upper_bound_sweep, worst_instance,
    worst_instance_gd_huber, CheckSummary, Suite, SweepReport, SweepRow,
};
use rppa_core::prox::{catalog, SmoothInstance};
use rppa_core::schedule::{silver_constants, Schedule, ScheduleKind, ScheduleRecord};
use rppa_core::solver::{gd_measures, measures, run_gd, run_rppa, MeasureReport, Method, Trace};
use rppa_core::tables::{table1, table4, Table1Row, Table4Row};
use rppa_core::Vector;

pub mod parse;

use parse::{parse_instance, parse_schedule, parse_vector};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] rppa_core::Error),

    #[error("cannot read {path}: {source}")]
    Input { path: String, source: std::io::Error },

    #[error("cannot write {path}: {source}")]
    Output { path: String, source: std::io::Error },
}

impl CliError {
    /// 2 for invalid input, 3 for numeric or I/O failure during execution.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Input { .. } => 2,
            CliError::Core(rppa_core::Error::NonFinite { .. } | rppa_core::Error::LeftLinearBranch { .. }) => 3,
            CliError::Core(_) => 2,
            CliError::Output { .. } => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Rppa,
    Gd,
}

/// Worst-case instance to build for `run`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Worst {
    /// Objective residual over squared initial distance.
    Fval,
    /// Gradient norm over initial distance.
    Gdnorm,
    /// Squared gradient norm over initial objective gap.
    Gdsq,
}

impl Worst {
    fn measure(self) -> Measure {
        match self {
            Worst::Fval => Measure::FvalOverDistSq,
            Worst::Gdnorm => Measure::SubgradOverDist,
            Worst::Gdsq => Measure::SubgradSqOverFval,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableKind {
    Table1,
    Table4,
}

#[derive(Debug, Parser)]
#[command(
    name = "rppa-lab",
    version,
    about = "Relaxed proximal point and long-step gradient descent lab"
)]
pub struct Cli {
    /// Output format; defaults to csv for `table` and text otherwise.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write the output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print a stepsize schedule.
    Schedule(ScheduleArgs),
    /// Run RPPA or GD and report the performance measures.
    Run(RunArgs),
    /// Run a certification suite.
    Certify(CertifyArgs),
    /// Check every upper bound on the catalog instances.
    Sweep(SweepArgs),
    /// Regenerate a bound table.
    Table(TableArgs),
}

#[derive(Debug, Args)]
pub struct ScheduleArgs {
    /// constant, tv, silver, right_silver, left_silver or explicit.
    pub kind: String,
    /// `<alpha> <N>` for constant, `<N>` for tv, `<m>` for the silver
    /// family, the steps for explicit.
    pub params: Vec<String>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Schedule kind, as for `schedule`.
    pub kind: String,
    /// Schedule parameters, as for `schedule`.
    pub params: Vec<String>,

    #[arg(long, value_enum, default_value_t = MethodArg::Rppa)]
    pub method: MethodArg,

    /// Catalog spec such as `huber:eta=1,L=1`, or a path to an instance JSON file.
    #[arg(long, conflicts_with = "worst")]
    pub instance: Option<String>,

    /// Build the worst-case instance for this measure.
    #[arg(long, value_enum)]
    pub worst: Option<Worst>,

    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub lambda: f64,

    /// Smoothness constant of the GD worst-case instance.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub lipschitz: f64,

    /// Starting point as comma-separated coordinates; defaults to e1.
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<String>,

    /// Dimension of catalog instances; defaults to the length of `--x0`, else 2.
    #[arg(long)]
    pub dim: Option<usize>,

    /// Write the iterate trace as JSON lines to this file.
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    /// identities, schedules, lemmas, tightness, certificates, sweep or all.
    pub suite: String,

    #[arg(long, env = "RPPA_LAB_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Proximal parameters to sweep, comma-separated.
    #[arg(long, value_delimiter = ',', default_values_t = [0.1, 1.0, 10.0])]
    pub lambda: Vec<f64>,

    /// Dimension of the catalog instances.
    #[arg(long, default_value_t = 3)]
    pub dim: usize,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    pub which: TableKind,

    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub lambda: f64,
}

/// Rendered output of a command and the number of violations it found.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub body: String,
    pub violations: usize,
}

impl Report {
    fn clean(body: String) -> Self {
        Report { body, violations: 0 }
    }

    /// 0 when clean, 1 when any check or bound was violated.
    pub fn exit_code(&self) -> i32 {
        i32::from(self.violations > 0)
    }
}

/// Executes `cli` and renders its output.
pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    let default = match cli.command {
        Command::Table(_) => Format::Csv,
        _ => Format::Text,
    };
    let format = cli.format.unwrap_or(default);
    match &cli.command {
        Command::Schedule(a) => cmd_schedule(a, format),
        Command::Run(a) => cmd_run(a, format),
        Command::Certify(a) => cmd_certify(a, format),
        Command::Sweep(a) => cmd_sweep(a, format),
        Command::Table(a) => cmd_table(a, format),
    }
}

fn check_positive(name: &str, v: f64) -> Result<(), CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "`{name}` must be positive and finite, got {v}"
        )))
    }
}

fn json_body(v: Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("values serialize");
    s.push('\n');
    s
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("values serialize")
}

fn opt6(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".to_string(), |v| format!("{v:.6}"))
}

fn opt_full(v: Option<f64>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

/// Extra constant printed under a schedule: `T_m` for the one-sided silver
/// schedules, the total `A_{N-1}` otherwise.
fn footer_constant(s: &Schedule) -> (&'static str, f64) {
    match s.kind() {
        ScheduleKind::RightSilver { m } | ScheduleKind::LeftSilver { m } => ("T_m", silver_constants(m).t_m),
        _ => ("A_(N-1)", s.total()),
    }
}

fn cmd_schedule(a: &ScheduleArgs, format: Format) -> Result<Report, CliError> {
    let s = parse_schedule(&a.kind, &a.params)?;
    let (name, value) = footer_constant(&s);
    let body = match format {
        Format::Text => {
            let mut out = String::new();
            for alpha in s.steps() {
                writeln!(out, "{alpha:.6}").unwrap();
            }
            writeln!(out, "# N={} total={:.6}", s.len(), s.total()).unwrap();
            writeln!(out, "# {name}={value:.6}").unwrap();
            out
        }
        Format::Csv => {
            let mut out = String::from("k,alpha,partial_sum\n");
            for (k, (alpha, sum)) in s.steps().iter().zip(s.partial_sums()).enumerate() {
                writeln!(out, "{k},{alpha},{sum}").unwrap();
            }
            out
        }
        Format::Json => {
            let mut v = to_value(&ScheduleRecord::from(s.clone()));
            v["total"] = json!(s.total());
            v[name] = json!(value);
            json_body(v)
        }
    };
    Ok(Report::clean(body))
}

fn run_trace(
    a: &RunArgs,
    schedule: &Schedule,
    x0: Option<Vector>,
) -> Result<(String, Trace, MeasureReport, f64), CliError> {
    match a.method {
        MethodArg::Rppa => {
            let (inst, default_x0) = match (a.worst, &a.instance) {
                (Some(w), _) => worst_instance(schedule, a.lambda, w.measure())?,
                (None, Some(spec)) => {
                    let dim = a.dim.or(x0.as_ref().map(Vector::dim)).unwrap_or(2);
                    let inst = parse_instance(spec, dim)?;
                    let e1 = Vector::unit(inst.dim(), 0);
                    (inst, e1)
                }
                (None, None) => return Err(CliError::Usage("`run` needs --instance or --worst".into())),
            };
            let x0 = x0.unwrap_or(default_x0);
            let trace = run_rppa(&inst, a.lambda, schedule, &x0)?;
            let report = measures(&trace, &inst)?;
            Ok((inst.label(), trace, report, a.lambda))
        }
        MethodArg::Gd => {
            let (inst, default_x0) = match (a.worst, &a.instance) {
                (Some(w), _) => {
                    let m = match schedule.kind() {
                        ScheduleKind::Silver { m } => m,
                        _ => return Err(CliError::Usage("GD worst cases need a `silver <m>` schedule".into())),
                    };
                    worst_instance_gd_huber(m, a.lipschitz, w.measure())?
                }
                (None, Some(spec)) => {
                    let dim = a.dim.or(x0.as_ref().map(Vector::dim)).unwrap_or(2);
                    let inst = SmoothInstance::try_from(&parse_instance(spec, dim)?)?;
                    let e1 = Vector::unit(inst.dim(), 0);
                    (inst, e1)
                }
                (None, None) => return Err(CliError::Usage("`run` needs --instance or --worst".into())),
            };
            let x0 = x0.unwrap_or(default_x0);
            let trace = run_gd(&inst, schedule, &x0)?;
            let report = gd_measures(&trace, &inst)?;
            Ok((inst.label(), trace, report, inst.lipschitz()))
        }
    }
}

fn cmd_run(a: &RunArgs, format: Format) -> Result<Report, CliError> {
    check_positive("lambda", a.lambda)?;
    check_positive("lipschitz", a.lipschitz)?;
    let schedule = parse_schedule(&a.kind, &a.params)?;
    let x0 = a.x0.as_deref().map(parse_vector).transpose()?;
    let (label, trace, report, scale) = run_trace(a, &schedule, x0)?;

    if let Some(path) = &a.trace {
        let err = |source| CliError::Output {
            path: path.display().to_string(),
            source,
        };
        let file = std::fs::File::create(path).map_err(err)?;
        trace.write_json_lines(std::io::BufWriter::new(file)).map_err(err)?;
    }

    let (method, scale_name) = match trace.method {
        Method::Rppa => ("rppa", "lambda"),
        Method::Gd => ("gd", "L"),
    };
    let bound = |m: Measure| match trace.method {
        Method::Rppa => upper_bound(&schedule, scale, m).ok(),
        Method::Gd => upper_bound_gd(&schedule, scale, m).ok(),
    };
    let body = match format {
        Format::Text => {
            let mut out = String::new();
            writeln!(out, "method {method}").unwrap();
            writeln!(out, "instance {label}").unwrap();
            writeln!(out, "schedule {}", schedule.label()).unwrap();
            writeln!(out, "{scale_name} {scale:.6}").unwrap();
            writeln!(out, "steps {}", trace.steps()).unwrap();
            writeln!(out, "fval_residual {:.6}", report.fval_residual).unwrap();
            writeln!(out, "subgrad_norm {:.6}", report.subgrad_norm).unwrap();
            writeln!(out, "composite {}", opt6(report.composite)).unwrap();
            writeln!(out, "init_dist_sq {:.6}", report.init_dist_sq).unwrap();
            writeln!(out, "init_fval_gap {:.6}", report.init_fval_gap).unwrap();
            for m in Measure::ALL {
                writeln!(out, "{m} ratio={} bound={}", opt6(report.ratio(m)), opt6(bound(m))).unwrap();
            }
            out
        }
        Format::Csv => {
            let mut header = format!("method,instance,schedule,scale,{}", MeasureReport::CSV_HEADER);
            let mut row = format!("{method},{label},{},{scale},{}", schedule.label(), report.csv_row());
            for m in Measure::ALL {
                write!(header, ",ratio_{m},bound_{m}").unwrap();
                write!(row, ",{},{}", opt_full(report.ratio(m)), opt_full(bound(m))).unwrap();
            }
            format!("{header}\n{row}\n")
        }
        Format::Json => {
            let mut ratios = Map::new();
            let mut bounds = Map::new();
            for m in Measure::ALL {
                ratios.insert(m.name().into(), json!(report.ratio(m)));
                bounds.insert(m.name().into(), json!(bound(m)));
            }
            json_body(json!({
                "method": method,
                "instance": label,
                "schedule": ScheduleRecord::from(schedule.clone()),
                scale_name: scale,
                "steps": trace.steps(),
                "report": report,
                "ratios": ratios,
                "bounds": bounds,
            }))
        }
    };
    Ok(Report::clean(body))
}

fn cmd_certify(a: &CertifyArgs, format: Format) -> Result<Report, CliError> {
    let suite: Suite = a.suite.parse()?;
    let checks = run_suite(suite, a.seed)?;
    let failed = checks.iter().filter(|c| !c.passed()).count();
    let body = match format {
        Format::Text => {
            let mut out = format!("# suite={} seed={}\n", a.suite, a.seed);
            for c in &checks {
                writeln!(out, "{c}").unwrap();
            }
            writeln!(out, "# checks={} failed={failed}", checks.len()).unwrap();
            out
        }
        Format::Csv => {
            let mut out = String::from("id,checked,violations,metric,worst,passed\n");
            for c in &checks {
                writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    c.id,
                    c.checked,
                    c.violations,
                    c.metric,
                    c.worst,
                    c.passed()
                )
                .unwrap();
            }
            out
        }
        Format::Json => {
            let rows: Vec<Value> = checks.iter().map(check_json).collect();
            json_body(json!({ "suite": a.suite, "seed": a.seed, "failed": failed, "checks": rows }))
        }
    };
    Ok(Report {
        body,
        violations: failed,
    })
}

fn check_json(c: &CheckSummary) -> Value {
    let mut v = to_value(c);
    v["passed"] = json!(c.passed());
    v
}

fn cmd_sweep(a: &SweepArgs, format: Format) -> Result<Report, CliError> {
    for &l in &a.lambda {
        check_positive("lambda", l)?;
    }
    let instances = catalog(a.dim);
    let rppa = upper_bound_sweep(&instances, &default_sweep_schedules(), &a.lambda)?;
    let smooth: Vec<SmoothInstance> = instances
        .iter()
        .filter_map(|i| SmoothInstance::try_from(i).ok())
        .collect();
    let gd = gd_upper_bound_sweep(&smooth, &[1, 2, 3, 4])?;
    let rows: Vec<&SweepRow> = rppa.rows.iter().chain(&gd.rows).collect();
    let violations = violations(&rppa) + violations(&gd);
    let body = match format {
        Format::Text => {
            let mut out = format!("# rows={} violations={violations}\n", rows.len());
            for r in rows.iter().filter(|r| !r.ok()) {
                writeln!(
                    out,
                    "VIOLATION {} {} scale={} start={} {} achieved={:.6} bound={:.6}",
                    r.instance, r.schedule, r.scale, r.start, r.measure, r.achieved, r.bound
                )
                .unwrap();
            }
            out
        }
        Format::Csv => {
            let mut out = format!("{}\n", SweepRow::CSV_HEADER);
            for r in &rows {
                writeln!(out, "{}", r.csv_row()).unwrap();
            }
            out
        }
        Format::Json => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|r| {
                    let mut v = to_value(r);
                    v["ok"] = json!(r.ok());
                    v
                })
                .collect();
            json_body(json!({ "violations": violations, "rows": rows }))
        }
    };
    Ok(Report { body, violations })
}

fn violations(r: &SweepReport) -> usize {
    r.violations().len()
}

fn cmd_table(a: &TableArgs, format: Format) -> Result<Report, CliError> {
    check_positive("lambda", a.lambda)?;
    let body = match a.which {
        TableKind::Table1 => {
            let rows = table1(a.lambda)?;
            match format {
                Format::Csv => csv_table(Table1Row::CSV_HEADER, rows.iter().map(Table1Row::csv_row)),
                Format::Json => json_body(to_value(&rows)),
                Format::Text => csv_table(
                    Table1Row::CSV_HEADER,
                    rows.iter().map(|r| {
                        format!(
                            "{},{},{},{:.6},{}",
                            r.measure,
                            r.schedule,
                            r.n,
                            r.upper_bound,
                            opt6(r.lower_bound)
                        )
                    }),
                ),
            }
        }
        TableKind::Table4 => {
            let rows = table4(a.lambda)?;
            match format {
                Format::Csv => csv_table(Table4Row::CSV_HEADER, rows.iter().map(Table4Row::csv_row)),
                Format::Json => json_body(to_value(&rows)),
                Format::Text => csv_table(
                    Table4Row::CSV_HEADER,
                    rows.iter().map(|r| {
                        format!(
                            "{},{},{:.6},{:.6},{},{}",
                            r.m,
                            r.n,
                            r.achieved,
                            r.bound,
                            opt6(r.external),
                            r.source
                        )
                    }),
                ),
            }
        }
    };
    Ok(Report::clean(body))
}

fn csv_table(header: &str, rows: impl Iterator<Item = String>) -> String {
    let mut out = format!("{header}\n");
    for r in rows {
        out.push_str(&r);
        out.push('\n');
    }
    out
}
