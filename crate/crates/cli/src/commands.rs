use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use absfef::absolute::{activating_unitary, classify, is_absolute_fef, is_absolutely_separable_2q};
use absfef::bloch::bloch_extract;
use absfef::fef::{fef_lower_bound, fef_two_qubit_closed_form};
use absfef::matcore::{BasisKind, ComplexMatrix};
use absfef::reproduce::{self, FixtureCheck, ReproduceOptions};
use absfef::states::{fixture_unitary, FixtureId};
use absfef::witness::{decompose, evaluate, pullback, teleportation_witness};
use absfef::{purity_bounds, DensityMatrix, FefOptions, Label};
use serde_json::{json, Value};

use crate::error::{CliError, CliResult, Exit};
use crate::input::{build_family, read_state, read_unitary, set_param, FamilyParams};
use crate::output::{emit, fmt_f64, matrix_json, to_json_string};

/// Options shared by every command.
#[derive(Debug, Clone, Copy)]
pub struct Global {
    pub seed: u64,
    pub restarts: Option<usize>,
    pub tol: f64,
    pub json: bool,
}

impl Global {
    pub fn fef_options(&self, d: usize) -> CliResult<FefOptions> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(CliError::domain(format!(
                "--tol {} must be positive",
                self.tol
            )));
        }
        let mut opts = FefOptions::for_dim(d).with_seed(self.seed);
        if let Some(r) = self.restarts {
            if r == 0 {
                return Err(CliError::domain("--restarts must be at least 1"));
            }
            opts = opts.with_restarts(r);
        }
        opts.tol = self.tol;
        Ok(opts)
    }
}

fn emit_report(report: &Value, g: &Global) -> CliResult<Exit> {
    emit(report, g.json).map_err(|e| CliError::io(format!("cannot write output: {e}")))?;
    Ok(Exit::Success)
}

/// The state named on the command line: a family or a state file.
pub struct StateSource {
    pub family: Option<String>,
    pub input: Option<PathBuf>,
    pub params: FamilyParams,
}

impl StateSource {
    fn load(&self) -> CliResult<Option<(DensityMatrix, String)>> {
        match (&self.family, &self.input) {
            (Some(_), Some(_)) => Err(CliError::parse(
                "give either a family or an input file, not both",
            )),
            (Some(f), None) => Ok(Some((
                build_family(f, &self.params)?,
                format!("family {f}"),
            ))),
            (None, Some(p)) => Ok(Some((read_state(p)?, format!("file {}", p.display())))),
            (None, None) => Ok(None),
        }
    }
}

// ---------------------------------------------------------------- analyze

pub fn analyze(source: &StateSource, g: &Global) -> CliResult<Exit> {
    let (rho, label) = source
        .load()?
        .ok_or_else(|| CliError::parse("analyze needs --family NAME or --input FILE"))?;
    let report = analysis_report(&rho, &label, g)?;
    emit_report(&report, g)
}

fn analysis_report(rho: &DensityMatrix, source: &str, g: &Global) -> CliResult<Value> {
    let spectrum = rho.spectrum();
    let mut report = json!({
        "source": source,
        "dims": [rho.dim_a(), rho.dim_b()],
        "spectrum": spectrum.eigenvalues(),
        "purity": rho.purity(),
        "lambda_max": spectrum.lambda_max(),
    });
    let obj = report.as_object_mut().expect("object literal");
    if rho.dim_a() != rho.dim_b() {
        obj.insert(
            "note".into(),
            json!("unequal local dimensions: FEF quantities are undefined for this split"),
        );
        return Ok(report);
    }
    let d = rho.dim_a();
    let member = is_absolute_fef(rho)?;
    let lower = fef_lower_bound(rho)?;
    obj.insert("threshold".into(), json!(member.threshold));
    obj.insert("absolute".into(), json!(member.absolute));
    obj.insert("max_global_fef".into(), json!(member.lambda_max));

    if d <= 3 {
        let opts = g.fef_options(d)?;
        let class = classify(rho, &opts)?;
        obj.insert("label".into(), json!(class.label));
        obj.insert("boundary".into(), json!(class.boundary));
        let mut fef = json!({
            "value": class.fef_value,
            "lower_bound": lower,
            "restarts": class.fef_restarts,
            "seed": opts.seed,
            "tol": opts.tol,
            "converged": class.fef_converged,
        });
        if d == 2 {
            fef["closed_form"] = json!(fef_two_qubit_closed_form(rho)?);
        }
        obj.insert("fef".into(), fef);
        obj.insert(
            "teleportation_useful".into(),
            json!(class.teleportation_useful),
        );
        obj.insert("k_copy_nonlocal".into(), json!(class.k_copy_verdict()));
    } else {
        // No optimizer here; the label is still decided whenever the
        // spectrum or the canonical overlap settles it.
        let label = if lower > member.threshold + absfef::BOUNDARY_TOL {
            Some(Label::Useful)
        } else if member.absolute {
            Some(Label::Absolute)
        } else {
            None
        };
        obj.insert("label".into(), json!(label));
        obj.insert("boundary".into(), json!(member.boundary));
        obj.insert(
            "fef".into(),
            json!({ "value": null, "lower_bound": lower, "note": "optimizer supports d = 2, 3" }),
        );
    }

    if d == 2 {
        let b = bloch_extract(rho)?;
        obj.insert("bloch".into(), json!({ "a": b.a, "b": b.b, "t": b.t }));
        let eig: Vec<f64> = spectrum.eigenvalues().iter().map(|l| l.max(0.0)).collect();
        obj.insert(
            "absolutely_separable".into(),
            json!(is_absolutely_separable_2q(&eig)?),
        );
    }
    Ok(report)
}

// ---------------------------------------------------------------- witness

pub struct WitnessArgs {
    pub state: StateSource,
    pub unitary: Option<PathBuf>,
    pub fixture: Option<FixtureId>,
    pub basis: Option<BasisKind>,
}

fn local_dim_of(u: &ComplexMatrix) -> CliResult<usize> {
    let n = u.nrows();
    let d = (n as f64).sqrt().round() as usize;
    if d < 2 || d * d != n {
        return Err(CliError::parse(format!(
            "unitary is {n}x{n}; a d⊗d witness needs a d²×d² unitary with d ≥ 2"
        )));
    }
    Ok(d)
}

pub fn witness(args: &WitnessArgs, g: &Global) -> CliResult<Exit> {
    let state = args.state.load()?;
    let (u, origin) = match (&args.unitary, args.fixture) {
        (Some(_), Some(_)) => {
            return Err(CliError::parse(
                "give either --unitary or --fixture-unitary, not both",
            ))
        }
        (Some(path), None) => (read_unitary(path)?, format!("file {}", path.display())),
        (None, Some(id)) => (fixture_unitary(id).matrix, format!("fixture {id:?}")),
        (None, None) => {
            let (rho, _) = state.as_ref().ok_or_else(|| {
                CliError::parse("witness needs --unitary, --fixture-unitary or a state")
            })?;
            let member = is_absolute_fef(rho)?;
            if member.absolute {
                return Err(CliError::new(
                    Exit::NoWitness,
                    format!(
                        "no detecting witness exists: lambda_max = {} <= 1/d = {}",
                        fmt_f64(member.lambda_max),
                        fmt_f64(member.threshold)
                    ),
                ));
            }
            (
                activating_unitary(rho)?,
                "activating unitary of the state".to_string(),
            )
        }
    };
    let d = local_dim_of(&u)?;
    let s = pullback(&teleportation_witness(d)?, &u)?;
    let kind = args.basis.unwrap_or(if d == 2 {
        BasisKind::Pauli
    } else {
        BasisKind::GellMann
    });
    if kind.local_dim() != d {
        return Err(CliError::parse(format!(
            "basis {kind} acts on dimension {}, witness has d = {d}",
            kind.local_dim()
        )));
    }
    let dec = decompose(s.matrix(), kind)?;
    let terms: Vec<Value> = dec
        .terms(1e-12)
        .into_iter()
        .map(|t| json!({ "left": t.left, "right": t.right, "coefficient": t.coefficient }))
        .collect();

    let mut report = json!({
        "d": d,
        "unitary_source": origin,
        "unitary": matrix_json(&u),
        "witness": matrix_json(s.matrix()),
        "decomposition": { "basis": kind.to_string(), "terms": terms },
    });
    if let Some((rho, source)) = &state {
        let value = evaluate(&s, rho)?;
        report["state"] = json!(source);
        report["expectation"] = json!(value);
        report["detects"] = json!(value < 0.0);
    }
    emit_report(&report, g)
}

// ---------------------------------------------------------------- scan

pub struct ScanArgs {
    pub family: String,
    pub param: String,
    pub range: String,
    pub output: Option<PathBuf>,
    pub params: FamilyParams,
}

pub const CSV_HEADER: &str = "param,lambda_max,fef_lower_bound,fef,label,boundary";

/// "start:stop:step" grid, endpoints included when the step divides the span.
pub fn parse_range(s: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let [start, stop, step] = parts.as_slice() else {
        return Err(CliError::parse(format!(
            "range {s:?} must look like start:stop:step"
        )));
    };
    let num =
        |x: &str| crate::input::parse_real(x).map_err(|e| CliError::parse(format!("range: {e}")));
    let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
    if step.is_nan() || step <= 0.0 || stop < start {
        return Err(CliError::parse(format!(
            "range {s:?} needs step > 0 and stop >= start"
        )));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    if n >= 1_000_000 {
        return Err(CliError::parse(format!("range {s:?} has too many points")));
    }
    Ok((0..=n).map(|k| start + k as f64 * step).collect())
}

struct Row {
    param: f64,
    lambda_max: f64,
    lower: f64,
    fef: f64,
    label: Label,
    boundary: bool,
}

fn scan_point(args: &ScanArgs, value: f64, g: &Global) -> CliResult<Row> {
    let mut params = args.params.clone();
    set_param(&mut params, &args.param, value)?;
    let rho = build_family(&args.family, &params)?;
    let d = rho.local_dim()?;
    let class = classify(&rho, &g.fef_options(d)?)?;
    Ok(Row {
        param: value,
        lambda_max: class.lambda_max,
        lower: fef_lower_bound(&rho)?,
        fef: class.fef_value,
        label: class.label,
        boundary: class.boundary,
    })
}

/// Evaluates the grid on worker threads; rows come back in grid order.
fn scan_rows(args: &ScanArgs, grid: &[f64], g: &Global) -> CliResult<Vec<Row>> {
    let workers = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(grid.len().max(1));
    let chunk = grid.len().div_ceil(workers).max(1);
    let results: Vec<CliResult<Vec<Row>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = grid
            .chunks(chunk)
            .map(|part| scope.spawn(move || part.iter().map(|&v| scan_point(args, v, g)).collect()))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("scan worker panicked"))
            .collect()
    });
    let mut rows = Vec::with_capacity(grid.len());
    for r in results {
        rows.extend(r?);
    }
    Ok(rows)
}

fn write_csv(out: &mut dyn Write, rows: &[Row]) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            fmt_f64(r.param),
            fmt_f64(r.lambda_max),
            fmt_f64(r.lower),
            fmt_f64(r.fef),
            r.label,
            r.boundary
        )?;
    }
    out.flush()
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display())))
}

pub fn scan(args: &ScanArgs, g: &Global) -> CliResult<Exit> {
    let grid = parse_range(&args.range)?;
    let mut sink = args.output.as_deref().map(create).transpose()?;
    let rows = scan_rows(args, &grid, g)?;
    match sink.as_mut() {
        Some(file) => {
            let path = args.output.as_ref().expect("sink implies a path");
            write_csv(file, &rows)
                .map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display())))?;
            let summary = json!({ "rows": rows.len(), "output": path.display().to_string() });
            emit_report(&summary, g)
        }
        None if g.json => {
            let list: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "param": r.param, "lambda_max": r.lambda_max, "fef_lower_bound": r.lower,
                        "fef": r.fef, "label": r.label, "boundary": r.boundary,
                    })
                })
                .collect();
            emit_report(&Value::Array(list), g)
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            write_csv(&mut stdout, &rows)
                .map_err(|e| CliError::io(format!("cannot write output: {e}")))?;
            Ok(Exit::Success)
        }
    }
}

// ---------------------------------------------------------------- bounds

pub fn bounds(d: usize, grid: usize, g: &Global) -> CliResult<Exit> {
    let b = purity_bounds(d, grid, g.seed)?;
    let report = json!({
        "d": b.d,
        "max_purity_absolute": {
            "value": b.max_purity_absolute,
            "numeric": b.max_purity_numeric,
            "spectrum": b.max_spectrum,
            "attained": b.max_attained,
        },
        "min_purity_nonabsolute": {
            "value": b.min_purity_nonabsolute,
            "numeric": b.min_purity_numeric,
            "sequence": b.min_sequence.iter().map(|(e, f)| json!({"epsilon": e, "purity": f})).collect::<Vec<_>>(),
            "spectrum": b.min_spectrum,
            "attained": b.min_attained,
        },
    });
    emit_report(&report, g)
}

// ---------------------------------------------------------------- reproduce

fn table(checks: &[FixtureCheck]) -> String {
    let width = checks
        .iter()
        .map(|c| c.name.chars().count())
        .max()
        .unwrap_or(0);
    let mut out = format!(
        "{:<width$}  {:>24}  {:>24}  {:>24}  {:>9}  result\n",
        "fixture", "expected", "computed", "|delta|", "tol"
    );
    for c in checks {
        let pad = width - c.name.chars().count();
        out.push_str(&format!(
            "{}{}  {:>24}  {:>24}  {:>24}  {:>9.1e}  {}\n",
            c.name,
            " ".repeat(pad),
            fmt_f64(c.expected),
            fmt_f64(c.computed),
            fmt_f64(c.delta),
            c.tolerance,
            if c.passed { "PASS" } else { "FAIL" }
        ));
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    out.push_str(&format!(
        "{} of {} fixtures passed\n",
        checks.len() - failed,
        checks.len()
    ));
    out
}

pub fn reproduce(g: &Global) -> CliResult<Exit> {
    if let Some(0) = g.restarts {
        return Err(CliError::domain("--restarts must be at least 1"));
    }
    let opts = ReproduceOptions {
        seed: g.seed,
        restarts: g.restarts,
        tol: g.tol,
    };
    let checks = reproduce::run(&opts)?;
    let failed = checks.iter().filter(|c| !c.passed).count();
    let text = if g.json {
        to_json_string(&json!({
            "passed": failed == 0,
            "total": checks.len(),
            "failed": failed,
            "checks": checks,
        })) + "\n"
    } else {
        table(&checks)
    };
    let mut stdout = std::io::stdout().lock();
    stdout
        .write_all(text.as_bytes())
        .and_then(|_| stdout.flush())
        .map_err(|e| CliError::io(format!("cannot write output: {e}")))?;
    Ok(if failed == 0 {
        Exit::Success
    } else {
        Exit::FixtureFailure
    })
}
