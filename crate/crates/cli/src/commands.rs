//! Subcommand implementations. Each returns a [`Report`] whose status is the
//! process exit code.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use gram_core::regression::{design_rank, regression_report};
use gram_core::verify::{find_suite, SUITES};
use gram_core::{
    distance_det, distance_projection, distance_qr, householder_qr, minor_sum_log,
    orthogonal_minor_vector, Dataset, DenseMatrix, DistanceResult, Error, LogDet, Vector,
};

use crate::csv_input::{CellMode, CsvTable};
use crate::output::{ExitStatus, Format, Report, Value};

#[derive(Debug, Parser)]
#[command(
    name = "gramdet",
    version,
    about = "Distances, regression loss values and correlation from Gram determinants"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Distance from a vector to the column space of a matrix, three ways.
    Dist(DistArgs),
    /// Sum of squared maximal minors against the Gram determinant.
    GramCheck(GramCheckArgs),
    /// Loss value and multiple correlation of a dataset.
    Regress(RegressArgs),
    /// Run the seeded property suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct DistArgs {
    /// m x n matrix CSV (complex cells allowed).
    #[arg(long)]
    pub matrix: PathBuf,
    /// m x 1 vector CSV (complex cells allowed).
    #[arg(long)]
    pub vector: PathBuf,
}

#[derive(Debug, Args)]
pub struct GramCheckArgs {
    /// (n+1) x n matrix CSV (complex cells allowed).
    #[arg(long)]
    pub matrix: PathBuf,
}

#[derive(Debug, Args)]
pub struct RegressArgs {
    /// Real-valued CSV with one column per variable.
    #[arg(long)]
    pub data: PathBuf,
    /// Label of the target column; every other column is a regressor.
    #[arg(long)]
    pub target: String,
    /// Also report the regression coefficients.
    #[arg(long, conflicts_with = "no_solve")]
    pub coefficients: bool,
    /// Report only determinant-based numbers; never solve for coefficients.
    #[arg(long)]
    pub no_solve: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 500, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    /// Override a suite tolerance, as `suite=value`. May be repeated.
    #[arg(long = "tol", value_parser = parse_override)]
    pub tolerances: Vec<(String, f64)>,
}

fn parse_override(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s.split_once('=').ok_or("expected suite=value")?;
    if find_suite(name).is_none() {
        return Err(format!("unknown suite {name:?}"));
    }
    let value: f64 = value.parse().map_err(|e| format!("{e}"))?;
    if !(value.is_finite() && value >= 0.0) {
        return Err("tolerance must be finite and nonnegative".into());
    }
    Ok((name.to_owned(), value))
}

pub fn run(cli: &Cli) -> Report {
    match &cli.command {
        Command::Dist(a) => cmd_dist(a),
        Command::GramCheck(a) => cmd_gram_check(a),
        Command::Regress(a) => cmd_regress(a),
        Command::Verify(a) => cmd_verify(a),
    }
}

fn status_for(e: &Error) -> ExitStatus {
    match e {
        Error::RankDeficient { .. } | Error::NotPositiveDefinite { .. } => {
            ExitStatus::RankDeficient
        }
        Error::ZeroVariance => ExitStatus::ZeroVariance,
        _ => ExitStatus::InputError,
    }
}

fn rel(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

fn log_mag(d: &LogDet) -> Value {
    Value::Num(d.log_mag())
}

pub fn cmd_dist(args: &DistArgs) -> Report {
    let mut report = Report::new("dist");
    report.input("matrix", args.matrix.display().to_string());
    report.input("vector", args.vector.display().to_string());
    let loaded = CsvTable::read(&args.matrix, CellMode::Complex)
        .and_then(|t| t.to_matrix())
        .and_then(|a| {
            Ok((
                a,
                CsvTable::read(&args.vector, CellMode::Complex)?.to_vector()?,
            ))
        });
    let (a, b) = match loaded {
        Ok(ab) => ab,
        Err(e) => {
            report.fail(ExitStatus::InputError, e.to_string());
            return report;
        }
    };
    report.input("rows", Value::Int(a.rows() as u64));
    report.input("cols", Value::Int(a.cols() as u64));

    // The QR route needs no rank assumption; run it first so its shape
    // errors take precedence.
    let qr = match distance_qr(&a, &b) {
        Ok(r) => r,
        Err(e) => {
            report.fail(ExitStatus::InputError, e.to_string());
            return report;
        }
    };
    let det = distance_det(&a, &b);
    let proj = distance_projection(&a, &b);
    let mut values: Vec<(&str, Option<f64>)> = Vec::new();
    for (name, r) in [("det_ratio", &det), ("projection", &proj)] {
        match r {
            Ok(r) => values.push((name, Some(r.value))),
            Err(e) => {
                report.fail(status_for(e), format!("{name}: {e}"));
                values.push((name, None));
            }
        }
    }
    values.push(("qr_coordinate", Some(qr.value)));
    for (name, v) in &values {
        report.result(*name, *v);
    }
    let gram_source: &DistanceResult = det.as_ref().unwrap_or(&qr);
    report.result("gram_logdet_a", log_mag(&gram_source.gram_logdet_a));
    report.result("gram_logdet_ab", log_mag(&gram_source.gram_logdet_ab));
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            let dev = match (values[i].1, values[j].1) {
                (Some(x), Some(y)) => Value::Num(rel(x, y)),
                _ => Value::Null,
            };
            report.deviation(format!("{}_vs_{}", values[i].0, values[j].0), dev);
        }
    }
    report
}

pub fn cmd_gram_check(args: &GramCheckArgs) -> Report {
    let mut report = Report::new("gram-check");
    report.input("matrix", args.matrix.display().to_string());
    let a = match CsvTable::read(&args.matrix, CellMode::Complex).and_then(|t| t.to_matrix()) {
        Ok(a) => a,
        Err(e) => {
            report.fail(ExitStatus::InputError, e.to_string());
            return report;
        }
    };
    report.input("rows", Value::Int(a.rows() as u64));
    report.input("cols", Value::Int(a.cols() as u64));
    if let Err(e) = gram_check(&a, &mut report) {
        report.fail(status_for(&e), e.to_string());
    }
    report
}

fn gram_check(a: &DenseMatrix, report: &mut Report) -> gram_core::Result<()> {
    let minors_log = minor_sum_log(a)?;
    let gram = householder_qr(a, true)?.gram_logdet();
    let b = orthogonal_minor_vector(a)?;
    let minors = LogDet::positive(minors_log).magnitude()?;
    let gram_value = gram.magnitude()?;
    report.result("minor_sum", minors);
    report.result("gram_det", gram_value);
    report.result("minor_sum_log", minors_log);
    report.result("gram_logdet", gram.log_mag());
    report.result(
        "orthogonal_minor_vector",
        Value::List(b.as_slice().iter().map(|&z| Value::Complex(z)).collect()),
    );
    let residual = a.conj_transpose().mul_vec(&b)?.norm();
    report.result("orthogonality_residual", residual);
    report.deviation("minor_sum_vs_gram_det", rel(minors, gram_value));
    let scale = a.frobenius_norm() * b.norm();
    report.deviation(
        "orthogonality_relative",
        if scale == 0.0 { 0.0 } else { residual / scale },
    );
    report.deviation(
        "minor_vector_norm_vs_minor_sum",
        rel(b.norm().powi(2), minors),
    );
    Ok(())
}

fn load_dataset(args: &RegressArgs) -> Result<Dataset, String> {
    let table = CsvTable::read(&args.data, CellMode::Real).map_err(|e| e.to_string())?;
    let target = table
        .column_index(&args.target)
        .map_err(|e| e.to_string())?;
    let regressors: Vec<usize> = (0..table.col_count()).filter(|&j| j != target).collect();
    if regressors.is_empty() {
        return Err("dataset needs at least one regressor column".into());
    }
    let m = table.row_count();
    let x = DenseMatrix::from_fn(m, regressors.len(), |i, j| table.rows[i][regressors[j]])
        .map_err(|e| e.to_string())?;
    let y =
        Vector::new(table.rows.iter().map(|r| r[target]).collect()).map_err(|e| e.to_string())?;
    let mut names: Vec<String> = regressors
        .iter()
        .map(|&j| table.header[j].clone())
        .collect();
    names.push(args.target.clone());
    Dataset::new(x, y, names).map_err(|e| e.to_string())
}

pub fn cmd_regress(args: &RegressArgs) -> Report {
    let mut report = Report::new("regress");
    report.input("data", args.data.display().to_string());
    report.input("target", args.target.as_str());
    report.input("solve", Value::Bool(!args.no_solve));
    let d = match load_dataset(args) {
        Ok(d) => d,
        Err(e) => {
            report.fail(ExitStatus::InputError, e);
            return report;
        }
    };
    report.input("samples", Value::Int(d.samples() as u64));
    report.input(
        "regressors",
        Value::List(
            d.names()[..d.regressors()]
                .iter()
                .map(|n| n.as_str().into())
                .collect(),
        ),
    );
    let rank = design_rank(&d);
    report.result("design_rank", Value::Int(rank as u64));
    report.result("rank_full", Value::Bool(rank == d.regressors() + 1));

    let r = match regression_report(&d, !args.no_solve) {
        Ok(r) => r,
        Err(e) => {
            report.fail(status_for(&e), e.to_string());
            return report;
        }
    };
    report.result("loss_value", r.loss_value);
    report.result("mean_squared_loss", r.mean_squared_loss);
    report.result("correlation_det", r.correlation);
    if !args.no_solve {
        report.result("correlation_projection", r.correlation_projection);
        report.result("projection_undefined", Value::Bool(r.projection_undefined));
        report.result("loss_value_residual", r.loss_value_residual);
    }
    if args.coefficients {
        if let Some(a) = &r.coefficients {
            report.result(
                "coefficients",
                Value::List(a.iter().map(|&v| Value::Num(v)).collect()),
            );
            let mut labels = vec![Value::from("intercept")];
            labels.extend(
                d.names()[..d.regressors()]
                    .iter()
                    .map(|n| Value::from(n.as_str())),
            );
            report.result("coefficient_labels", Value::List(labels));
        }
    }
    let mut methods = vec![
        ("loss_value", r.methods.loss_value),
        ("correlation_det", r.methods.correlation),
    ];
    if let Some(m) = r.methods.correlation_projection {
        methods.push(("correlation_projection", m));
    }
    if let (true, Some(m)) = (args.coefficients, r.methods.coefficients) {
        methods.push(("coefficients", m));
    }
    report.result(
        "methods",
        Value::List(
            methods
                .iter()
                .map(|(k, v)| Value::Text(format!("{k}={v}")))
                .collect(),
        ),
    );
    if !args.no_solve {
        report.deviation(
            "correlation_det_vs_projection",
            r.correlation_projection.map(|p| (p - r.correlation).abs()),
        );
        report.deviation(
            "loss_det_vs_residual",
            r.loss_value_residual.map(|l| rel(l, r.loss_value)),
        );
        if r.projection_undefined {
            report.deviation(
                "correlation_note",
                "projection is zero; definition undefined, determinant formula gives 0",
            );
        }
    }
    report
}

pub fn cmd_verify(args: &VerifyArgs) -> Report {
    let mut report = Report::new("verify");
    report.input("seed", Value::Int(args.seed));
    report.input("trials", Value::Int(args.trials));
    let trials = args.trials as usize;
    let mut failed = Vec::new();
    for suite in SUITES {
        let tolerance = args
            .tolerances
            .iter()
            .rev()
            .find(|(name, _)| name == suite.name)
            .map_or(suite.tolerance, |(_, t)| *t);
        let outcome = suite.with_tolerance(tolerance).run(args.seed, trials);
        report.result(
            suite.name,
            Value::List(vec![
                Value::Int(outcome.passed as u64),
                Value::Int(outcome.trials as u64),
                Value::Num(outcome.tolerance),
            ]),
        );
        report.deviation(suite.name, outcome.max_deviation);
        if !outcome.ok() {
            failed.push(suite.name);
        }
    }
    report.result(
        "suites_passed",
        Value::Int((SUITES.len() - failed.len()) as u64),
    );
    report.result("suites_total", Value::Int(SUITES.len() as u64));
    for name in failed {
        report.fail(
            ExitStatus::VerificationFailed,
            format!("suite {name} failed"),
        );
    }
    report
}
