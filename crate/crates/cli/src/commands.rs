//! The four subcommands: solve, scan, compare-tables, verify.

use std::collections::BTreeMap;
use std::path::Path;

use deltasolve::expr::PotentialExpr;
use deltasolve::oracle::{self, ExactRecurrence, ExpandedRecurrence};
use deltasolve::problem::{DifferenceProblem, SideData};
use deltasolve::reference::{self, ReferenceColumn};
use deltasolve::relaxation::{self, RelaxationSpec};
use deltasolve::schrodinger::{self, LambdaClass, SchrodingerSpec};
use deltasolve::sequence::Sequence;
use deltasolve::verify;

use crate::table::{ascii_plot, Cell, ColumnKind, Table};
use crate::{CompareArgs, ScanArgs, SolveArgs, VerifyArgs};

/// Failure classes map to exit codes: validation 2, numerical 3,
/// verification 1.
pub enum CliError {
    Validation(String),
    Numerical(String),
    VerifyFailed(usize),
}

fn validation(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

fn numerical(e: deltasolve::Error) -> CliError {
    CliError::Numerical(e.to_string())
}

/// Flat key=value defaults file; '#' starts a comment, flags override.
fn read_config(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| validation(format!("cannot read config {}: {e}", path.display())))?;
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(validation(format!(
                "config {} line {}: expected key=value",
                path.display(),
                lineno + 1
            )));
        };
        map.insert(key.trim().to_owned(), value.trim().to_owned());
    }
    Ok(map)
}

fn merge<T: Clone + std::str::FromStr>(
    flag: &Option<T>,
    config: &BTreeMap<String, String>,
    key: &str,
) -> Result<Option<T>, CliError> {
    if let Some(v) = flag {
        return Ok(Some(v.clone()));
    }
    match config.get(key) {
        None => Ok(None),
        Some(raw) => raw
            .parse::<T>()
            .map(Some)
            .map_err(|_| validation(format!("config key {key}: cannot parse {raw:?}"))),
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum OracleMode {
    Off,
    On,
    Exact,
}

fn parse_oracle(text: Option<String>) -> Result<OracleMode, CliError> {
    match text.as_deref() {
        None | Some("off") => Ok(OracleMode::Off),
        Some("on") => Ok(OracleMode::On),
        Some("exact") => Ok(OracleMode::Exact),
        Some(other) => Err(validation(format!(
            "--oracle must be on, off, or exact (got {other})"
        ))),
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum OutputMode {
    Csv,
    Pretty,
}

fn parse_output(text: Option<String>) -> Result<OutputMode, CliError> {
    match text.as_deref() {
        None | Some("csv") => Ok(OutputMode::Csv),
        Some("pretty") => Ok(OutputMode::Pretty),
        Some(other) => Err(validation(format!(
            "--output must be csv or pretty (got {other})"
        ))),
    }
}

fn parse_precision(p: Option<usize>) -> Result<usize, CliError> {
    let p = p.unwrap_or(6);
    if (1..=17).contains(&p) {
        Ok(p)
    } else {
        Err(validation(format!(
            "--precision must be in 1..=17 (got {p})"
        )))
    }
}

fn parse_expr(text: &str) -> Result<PotentialExpr, CliError> {
    PotentialExpr::parse(text).map_err(|e| validation(format!("--q {text:?}: {e}")))
}

fn parse_number_list(text: &str, what: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|piece| {
            piece
                .trim()
                .parse::<f64>()
                .map_err(|_| validation(format!("{what}: cannot parse {piece:?} as a number")))
        })
        .collect()
}

fn emit(table: &Table, mode: OutputMode) {
    match mode {
        OutputMode::Csv => print!("{}", table.to_csv()),
        OutputMode::Pretty => print!("{}", table.to_pretty()),
    }
}

fn rational_forcing_checked(expr: &PotentialExpr) -> Result<oracle::RationalSeq, CliError> {
    // probe a couple of points so an irrational forcing fails fast as a
    // configuration error instead of mid-run
    for n in [0, 1] {
        if let Err(e) = expr.eval_rational(n) {
            return Err(validation(format!(
                "--oracle exact needs a rational forcing; q = {expr} fails: {e}"
            )));
        }
    }
    Ok(oracle::rational_forcing(expr))
}

pub fn cmd_solve(args: SolveArgs) -> Result<(), CliError> {
    let config = match &args.config {
        Some(path) => read_config(path)?,
        None => BTreeMap::new(),
    };
    let problem = merge(&args.problem, &config, "problem")?.unwrap_or_else(|| "hydrogen".into());
    let oracle_mode = parse_oracle(merge(&args.oracle, &config, "oracle")?)?;
    let output = parse_output(merge(&args.output, &config, "output")?)?;
    let precision = parse_precision(merge(&args.precision, &config, "precision")?)?;
    let plot = args.plot || config.get("plot").is_some_and(|v| v == "true");
    let lambda = merge(&args.lambda, &config, "lambda")?;
    let q_text = merge(&args.q, &config, "q")?;
    let n_max = merge(&args.n_max, &config, "n-max")?;

    match problem.as_str() {
        "hydrogen" | "coulomb" => {
            let lambda = lambda.unwrap_or(1.0);
            let b = merge(&args.b, &config, "b")?.unwrap_or(25);
            let q_text = q_text.unwrap_or_else(|| "1/sqrt(n)".into());
            let expr = parse_expr(&q_text)?;
            let q = Sequence::from_expr(&expr);
            let spec = if problem == "hydrogen" {
                let a = merge(&args.coulomb_a, &config, "A")?.unwrap_or(1.0);
                SchrodingerSpec::hydrogen(a, q, b, lambda)
            } else {
                let l = merge(&args.angular_l, &config, "l")?.unwrap_or(2);
                SchrodingerSpec::coulomb(l, q, b, lambda)
            }
            .map_err(|e| validation(e.to_string()))?;
            if oracle_mode == OracleMode::Exact {
                return Err(validation(
                    "--oracle exact applies to relaxation and custom problems only \
                     (the oscillatory seed sin(theta) is irrational)",
                ));
            }
            solve_schrodinger(&spec, oracle_mode, output, precision, plot)
        }
        "relaxation" => {
            let lambda = lambda.unwrap_or(0.0625);
            let n_max = n_max.unwrap_or(13);
            let q_text = q_text.unwrap_or_else(|| "1/(n+1)".into());
            let expr = parse_expr(&q_text)?;
            let spec = RelaxationSpec::new(lambda, Sequence::from_expr(&expr), n_max)
                .map_err(|e| validation(e.to_string()))?;
            let solution = relaxation::assembled_solution(&spec).map_err(numerical)?;
            let rec = oracle::expand(
                &DifferenceProblem::unshifted(
                    vec![-lambda, 0.0, 0.0, 0.0],
                    Sequence::from_expr(&expr),
                    SideData::Initial(vec![1.0; 4]),
                )
                .map_err(numerical)?,
            );
            let oracle_values = oracle_column(
                oracle_mode,
                &rec,
                &expr,
                &[-lambda, 0.0, 0.0, 0.0],
                &[1.0; 4],
                n_max,
            )?;
            print_solution_table(
                "x_closed",
                0,
                &solution.values,
                oracle_values.as_deref(),
                &rec.defects(&solution.values).map_err(numerical)?,
                output,
                precision,
                plot,
            );
            Ok(())
        }
        "custom" => {
            let coeffs_text = merge(&args.coeffs, &config, "coeffs")?
                .ok_or_else(|| validation("--problem custom requires --coeffs r_0,...,r_{N-1}"))?;
            let coefficients = parse_number_list(&coeffs_text, "--coeffs")?;
            let seeds_text = merge(&args.seeds, &config, "seeds")?
                .ok_or_else(|| validation("--problem custom requires --seeds x(0),...,x(N-1)"))?;
            let seeds = parse_number_list(&seeds_text, "--seeds")?;
            if seeds.len() != coefficients.len() {
                return Err(validation(format!(
                    "--seeds needs {} values for an order-{} equation, got {}",
                    coefficients.len(),
                    coefficients.len(),
                    seeds.len()
                )));
            }
            let n_max = n_max.unwrap_or(13);
            let q_text = q_text.unwrap_or_else(|| "0".into());
            let expr = parse_expr(&q_text)?;
            let problem = DifferenceProblem::unshifted(
                coefficients.clone(),
                Sequence::from_expr(&expr),
                SideData::Initial(seeds.clone()),
            )
            .map_err(|e| validation(e.to_string()))?;
            let solution = deltasolve::vop::solve(&problem, n_max).map_err(numerical)?;
            let rec = oracle::expand(&problem);
            let oracle_values =
                oracle_column(oracle_mode, &rec, &expr, &coefficients, &seeds, n_max)?;
            print_solution_table(
                "x_closed",
                0,
                &solution.values,
                oracle_values.as_deref(),
                &rec.defects(&solution.values).map_err(numerical)?,
                output,
                precision,
                plot,
            );
            Ok(())
        }
        other => Err(validation(format!(
            "--problem must be hydrogen, coulomb, relaxation, or custom (got {other})"
        ))),
    }
}

fn oracle_column(
    mode: OracleMode,
    rec: &ExpandedRecurrence,
    expr: &PotentialExpr,
    coefficients: &[f64],
    seeds: &[f64],
    n_max: usize,
) -> Result<Option<Vec<f64>>, CliError> {
    match mode {
        OracleMode::Off => Ok(None),
        OracleMode::On => Ok(Some(rec.run(seeds, n_max).map_err(numerical)?.values)),
        OracleMode::Exact => {
            let forcing = rational_forcing_checked(expr)?;
            let exact =
                ExactRecurrence::from_unshifted(coefficients, forcing).map_err(numerical)?;
            Ok(Some(exact.run_f64(seeds, n_max).map_err(numerical)?))
        }
    }
}

fn solve_schrodinger(
    spec: &SchrodingerSpec,
    oracle_mode: OracleMode,
    output: OutputMode,
    precision: usize,
    plot: bool,
) -> Result<(), CliError> {
    // parameter check up front: the sum representation needs 0 < lambda < 4
    let LambdaClass::Oscillatory { theta } = schrodinger::classify_lambda(spec.lambda) else {
        return Err(validation(format!(
            "lambda = {} is outside the oscillatory range (0, 4)",
            spec.lambda
        )));
    };
    let solution = schrodinger::sum_representation_solve(spec).map_err(numerical)?;
    let b = spec.b as usize;

    let oracle_values: Option<Vec<f64>> = match oracle_mode {
        OracleMode::Off => None,
        OracleMode::On | OracleMode::Exact => {
            // independent route: three-term stepping instead of the sum
            let spec_for_potential = spec.clone();
            let potential = Sequence::from_fallible("V", move |n| {
                schrodinger::effective_potential(&spec_for_potential, n)
            });
            let rec = ExpandedRecurrence::second_order_with_potential(spec.lambda, potential);
            Some(rec.run(&[0.0, theta.sin()], b).map_err(numerical)?.values)
        }
    };

    // per-row defect of the recurrence at n (defined for 1 <= n <= b-1)
    let mut defects: Vec<Option<f64>> = vec![None; b + 1];
    for n in 1..b {
        let v = &solution.values;
        let vn = schrodinger::effective_potential(spec, n as i64).map_err(numerical)?;
        let predicted = (2.0 - spec.lambda + vn) * v[n] - v[n - 1];
        defects[n] = Some((v[n + 1] - predicted).abs() / 1.0_f64.max(v[n + 1].abs()));
    }

    print_solution_table(
        "x_sum",
        1,
        &solution.values,
        oracle_values.as_deref(),
        &defects,
        output,
        precision,
        plot,
    );
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn print_solution_table(
    value_header: &'static str,
    first_row: usize,
    values: &[f64],
    oracle_values: Option<&[f64]>,
    defects: &[Option<f64>],
    output: OutputMode,
    precision: usize,
    plot: bool,
) {
    let mut headers = vec!["n", value_header];
    let mut kinds = vec![ColumnKind::Integer, ColumnKind::Fixed];
    if oracle_values.is_some() {
        headers.push("x_oracle");
        kinds.push(ColumnKind::Fixed);
    }
    headers.push("residual");
    kinds.push(ColumnKind::Scientific);

    let mut table = Table::new(headers, kinds, precision);
    for n in first_row..values.len() {
        let mut row = vec![Cell::Int(n as i64), Cell::Num(values[n])];
        if let Some(oracle_vals) = oracle_values {
            row.push(Cell::Num(oracle_vals[n]));
        }
        row.push(match defects.get(n) {
            Some(Some(d)) => Cell::Num(*d),
            _ => Cell::Empty,
        });
        table.push(row);
    }
    emit(&table, output);
    if plot {
        print!("{}", ascii_plot(&values[first_row..], precision));
    }
}

pub fn cmd_scan(args: ScanArgs) -> Result<(), CliError> {
    let config = match &args.config {
        Some(path) => read_config(path)?,
        None => BTreeMap::new(),
    };
    let problem = merge(&args.problem, &config, "problem")?.unwrap_or_else(|| "hydrogen".into());
    let output = parse_output(merge(&args.output, &config, "output")?)?;
    let precision = parse_precision(merge(&args.precision, &config, "precision")?)?;
    let b = merge(&args.b, &config, "b")?.unwrap_or(25);
    let resolution = merge(&args.resolution, &config, "resolution")?.unwrap_or(256);
    let lambda_min = merge(&args.lambda_min, &config, "lambda-min")?;
    let lambda_max = merge(&args.lambda_max, &config, "lambda-max")?;
    let q_text = merge(&args.q, &config, "q")?.unwrap_or_else(|| "1/sqrt(n)".into());
    let expr = parse_expr(&q_text)?;
    let q = Sequence::from_expr(&expr);

    let spec = match problem.as_str() {
        "hydrogen" => {
            let a = merge(&args.coulomb_a, &config, "A")?.unwrap_or(1.0);
            SchrodingerSpec::hydrogen(a, q, b, 1.0)
        }
        "coulomb" => {
            let l = merge(&args.angular_l, &config, "l")?.unwrap_or(2);
            SchrodingerSpec::coulomb(l, q, b, 1.0)
        }
        other => {
            return Err(validation(format!(
                "scan supports --problem hydrogen or coulomb (got {other})"
            )))
        }
    }
    .map_err(|e| validation(e.to_string()))?;

    let hits = schrodinger::eigenvalue_scan(&spec, resolution).map_err(numerical)?;
    let mut table = Table::new(
        vec!["k", "lambda", "theta", "abs_xb"],
        vec![
            ColumnKind::Integer,
            ColumnKind::Fixed,
            ColumnKind::Fixed,
            ColumnKind::Scientific,
        ],
        precision,
    );
    let mut k = 0_i64;
    for hit in hits {
        if lambda_min.is_some_and(|lo| hit.lambda < lo)
            || lambda_max.is_some_and(|hi| hit.lambda > hi)
        {
            continue;
        }
        k += 1;
        table.push(vec![
            Cell::Int(k),
            Cell::Num(hit.lambda),
            Cell::Num(hit.theta),
            Cell::Num(hit.boundary_value),
        ]);
    }
    emit(&table, output);
    Ok(())
}

struct TableConfig {
    lambda: f64,
    q_text: &'static str,
    reference: &'static ReferenceColumn,
}

const TABLE_CONFIGS: [TableConfig; 4] = [
    TableConfig {
        lambda: 0.0625,
        q_text: "1/(n+1)",
        reference: &reference::TABLE3_INVERSE,
    },
    TableConfig {
        lambda: 0.0625,
        q_text: "1/sqrt(n+1)",
        reference: &reference::TABLE3_INVERSE_SQRT,
    },
    TableConfig {
        lambda: 0.1296,
        q_text: "1/(n+1)",
        reference: &reference::TABLE4_INVERSE,
    },
    TableConfig {
        lambda: 0.1296,
        q_text: "1/sqrt(n+1)",
        reference: &reference::TABLE4_INVERSE_SQRT,
    },
];

pub fn cmd_compare_tables(args: CompareArgs) -> Result<(), CliError> {
    let config = match &args.config {
        Some(path) => read_config(path)?,
        None => BTreeMap::new(),
    };
    let output = parse_output(merge(&args.output, &config, "output")?)?;
    let precision = parse_precision(merge(&args.precision, &config, "precision")?)?;
    let n_max = merge(&args.n_max, &config, "n-max")?.unwrap_or(13);
    let lambda_flag = merge(&args.lambda, &config, "lambda")?;
    let q_flag = merge(&args.q, &config, "q")?;

    let mut table = Table::new(
        vec![
            "lambda",
            "q",
            "n",
            "x_closed",
            "x_oracle",
            "x_reference",
            "dev_closed_oracle",
            "dev_reference_oracle",
        ],
        vec![
            ColumnKind::Fixed,
            ColumnKind::Fixed, // q is text; kind unused
            ColumnKind::Integer,
            ColumnKind::Fixed,
            ColumnKind::Fixed,
            ColumnKind::Fixed,
            ColumnKind::Scientific,
            ColumnKind::Scientific,
        ],
        precision,
    );

    let mut run_one =
        |lambda: f64, q_text: &str, reference: Option<&ReferenceColumn>| -> Result<(), CliError> {
            let expr = parse_expr(q_text)?;
            let spec = RelaxationSpec::new(lambda, Sequence::from_expr(&expr), n_max)
                .map_err(|e| validation(e.to_string()))?;
            let report = relaxation::table_compare(&spec, reference).map_err(numerical)?;
            for row in &report.rows {
                table.push(vec![
                    Cell::Num(lambda),
                    Cell::Text(q_text.to_owned()),
                    Cell::Int(row.n),
                    Cell::Num(row.closed),
                    Cell::Num(row.oracle),
                    row.reference.map_or(Cell::Empty, Cell::Num),
                    Cell::Num(row.closed_abs_dev),
                    row.reference_abs_dev.map_or(Cell::Empty, Cell::Num),
                ]);
            }
            Ok(())
        };

    match (lambda_flag, q_flag) {
        (None, None) => {
            for cfg in &TABLE_CONFIGS {
                run_one(cfg.lambda, cfg.q_text, Some(cfg.reference))?;
            }
        }
        (lambda, q) => {
            let lambda = lambda.unwrap_or(0.0625);
            let q_text = q.unwrap_or_else(|| "1/(n+1)".into());
            let reference = TABLE_CONFIGS
                .iter()
                .find(|cfg| cfg.lambda == lambda && cfg.q_text == q_text)
                .map(|cfg| cfg.reference);
            run_one(lambda, &q_text, reference)?;
        }
    }
    emit(&table, output);
    Ok(())
}

pub fn cmd_verify(args: VerifyArgs) -> Result<(), CliError> {
    let reports = verify::run(args.group.as_deref());
    if reports.is_empty() {
        return Err(validation(format!(
            "no property group matches {:?}; available: {}",
            args.group.unwrap_or_default(),
            verify::group_names().join(", ")
        )));
    }
    let mut failed = 0;
    for report in &reports {
        println!(
            "{} {}: {}",
            if report.passed { "ok  " } else { "FAIL" },
            report.group,
            report.detail
        );
        if !report.passed {
            failed += 1;
        }
    }
    println!(
        "{} of {} property groups passed",
        reports.len() - failed,
        reports.len()
    );
    if failed > 0 {
        return Err(CliError::VerifyFailed(failed));
    }
    Ok(())
}
