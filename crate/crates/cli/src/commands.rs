use std::path::Path;

use gaussfid::fidelity::{
    angular_distance, bounds_report, bures_distance, chernoff_bound, fidelity_limit_sweep,
    fidelity_report, fidelity_trace_bounds, s_overlap, ChernoffArgmin,
};
use gaussfid::fock::{
    build_fock_pair, build_fock_with, purity_fock, recipe_of_state, s_overlap_fock,
    trace_distance, uhlmann_fidelity, FockDensityMatrix, OracleConfig, StateRecipe,
};
use gaussfid::symplectic::{purity, validate_cm_with, williamson};
use gaussfid::GaussianState;

use crate::args::{Cli, Command, Format, RunConfig};
use crate::error::{CliError, EXIT_NUMERICAL, EXIT_OK, EXIT_VALIDATION};
use crate::report::{to_json, Report, Section, Value, SCHEMA, VERSION};
use crate::state_file::{parse_state, read_state_file};

/// Largest Gaussian-vs-Fock difference reported as agreement.
pub const AGREEMENT: f64 = 1e-6;

/// What a finished invocation prints and returns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Execution {
    report: Report,
    code: i32,
    /// Printed to stderr next to a report with a non-zero code.
    message: Option<String>,
}

impl Execution {
    fn ok(report: Report) -> Self {
        Execution {
            report,
            code: EXIT_OK,
            message: None,
        }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let command = cli.command.name();
    let inputs: Vec<String> = cli.command.inputs().iter().map(|p| p.display().to_string()).collect();
    let format = cli.options.format;
    let result = RunConfig::from_cli(cli).and_then(|config| execute(&cli.command, &config, inputs.clone()));
    match result {
        Ok(exec) => Outcome {
            code: exec.code,
            stdout: match format {
                Format::Human => exec.report.to_human(),
                Format::Json => exec.report.to_json(),
            },
            stderr: exec.message.map(|m| format!("error: {m}\n")).unwrap_or_default(),
        },
        Err(err) => {
            let stdout = match format {
                Format::Human => String::new(),
                Format::Json => to_json(
                    &Section::new()
                        .with("schema", SCHEMA)
                        .with("version", VERSION)
                        .with("command", command)
                        .with("inputs", Value::Texts(inputs))
                        .with(
                            "error",
                            Section::new()
                                .with("kind", err.kind())
                                .with("code", err.exit_code() as usize)
                                .with("message", err.to_string()),
                        ),
                ),
            };
            Outcome {
                code: err.exit_code(),
                stdout,
                stderr: format!("error: {err}\n"),
            }
        }
    }
}

fn execute(command: &Command, config: &RunConfig, inputs: Vec<String>) -> Result<Execution, CliError> {
    let report = |result: Section, verify: Option<Section>| Report {
        command: command.name(),
        inputs: inputs.clone(),
        result,
        verify,
    };
    let tol = config.tolerances;
    let load_pair = |a: &Path, b: &Path| -> Result<(GaussianState, GaussianState), CliError> {
        Ok((parse_state(a, tol)?, parse_state(b, tol)?))
    };
    let oracle = Oracle(config.oracle);

    match command {
        Command::Validate { state } => validate(state, config).map(|(result, code, message)| Execution {
            report: report(result, None),
            code,
            message,
        }),
        Command::Williamson { state } => {
            let state = parse_state(state, tol)?;
            let w = williamson(state.cov())?;
            let symp = w.symplectic_residual();
            let recon = w.reconstruction_residual(state.cov().matrix());
            let within = symp <= tol.symplectic && recon <= tol.reconstruction;
            let s = w.symplectic();
            let result = Section::new()
                .with("modes", state.modes())
                .with("spectrum", w.spectrum().to_vec())
                .with(
                    "symplectic",
                    Value::Matrix(s.row_iter().map(|r| r.iter().copied().collect()).collect()),
                )
                .with("symplectic_residual", symp)
                .with("reconstruction_residual", recon)
                .with("within_tolerance", within);
            let code = if within { EXIT_OK } else { EXIT_NUMERICAL };
            Ok(Execution {
                report: report(result, None),
                code,
                message: (!within).then(|| {
                    format!(
                        "Williamson residuals {symp:e} / {recon:e} exceed {:e} / {:e}",
                        tol.symplectic, tol.reconstruction
                    )
                }),
            })
        }
        Command::Purity { state } => {
            let state = parse_state(state, tol)?;
            let p = purity(state.cov());
            let result = Section::new()
                .with("modes", state.modes())
                .with("purity", p)
                .with("pure", state.is_pure())
                .with("spectrum", state.cov().spectrum().to_vec());
            let verify = if config.verify {
                let rho = oracle.single(&state)?;
                Some(
                    oracle_header(&[&rho])
                        .with("comparisons", Value::Rows(vec![compare("purity", p, purity_fock(&rho))])),
                )
            } else {
                None
            };
            Ok(Execution::ok(report(result, verify)))
        }
        Command::Overlap { pair, .. } => {
            let (a, b) = load_pair(&pair.rho0, &pair.rho1)?;
            let s = config.schedule[0];
            let o = s_overlap(&a, &b, s)?;
            let result = Section::new()
                .with("s", s)
                .with("value", o.value)
                .with("pi_term", o.pi_term)
                .with("sigma_det", o.sigma_det)
                .with("quad_form", o.quad_form)
                .with("underflow", o.underflow);
            let verify = if config.verify {
                let (rho, sigma) = oracle.pair(&a, &b)?;
                let fock = s_overlap_fock(&rho, &sigma, s)?;
                Some(oracle_header(&[&rho, &sigma]).with("comparisons", Value::Rows(vec![compare("overlap", o.value, fock)])))
            } else {
                None
            };
            Ok(Execution::ok(report(result, verify)))
        }
        Command::Bhattacharyya { pair } => {
            let (a, b) = load_pair(&pair.rho0, &pair.rho1)?;
            let value = s_overlap(&a, &b, 0.5)?.value;
            let result = Section::new().with("bhattacharyya", value).with("helstrom_upper", value / 2.0);
            let verify = if config.verify {
                let (rho, sigma) = oracle.pair(&a, &b)?;
                let fock = s_overlap_fock(&rho, &sigma, 0.5)?;
                Some(oracle_header(&[&rho, &sigma]).with("comparisons", Value::Rows(vec![compare("bhattacharyya", value, fock)])))
            } else {
                None
            };
            Ok(Execution::ok(report(result, verify)))
        }
        Command::Chernoff { pair } => {
            let (a, b) = load_pair(&pair.rho0, &pair.rho1)?;
            let c = chernoff_bound(&a, &b)?;
            let (kind, s) = argmin_parts(&c.argmin);
            let result = Section::new()
                .with("chernoff", c.value)
                .with("argmin", kind)
                .with("s", s)
                .with("evaluations", c.evaluations.len())
                .with("helstrom_upper", c.value / 2.0);
            let verify = if config.verify {
                let (rho, sigma) = oracle.pair(&a, &b)?;
                let fock = match s {
                    Some(s) => s_overlap_fock(&rho, &sigma, s)?,
                    None => uhlmann_fidelity(&rho, &sigma)?,
                };
                Some(oracle_header(&[&rho, &sigma]).with("comparisons", Value::Rows(vec![compare("chernoff", c.value, fock)])))
            } else {
                None
            };
            Ok(Execution::ok(report(result, verify)))
        }
        Command::Fidelity { pair } => {
            let (a, b) = load_pair(&pair.rho0, &pair.rho1)?;
            let f = fidelity_report(&a, &b)?;
            let window = fidelity_trace_bounds(f.value.clamp(0.0, 1.0), a.is_pure(), b.is_pure())?;
            let result = Section::new()
                .with("fidelity", f.value)
                .with("sigma_det", f.sigma_det)
                .with("quad_form", f.quad_form)
                .with("underflow", f.underflow)
                .with("bures_distance", bures_distance(f.value.clamp(0.0, 1.0))?)
                .with("angular_distance", angular_distance(f.value.clamp(0.0, 1.0))?)
                .with(
                    "trace_distance_bounds",
                    Section::new()
                        .with("lower", window.lower)
                        .with("upper", window.upper)
                        .with("exact", window.exact),
                );
            let verify = if config.verify {
                let (rho, sigma) = oracle.pair(&a, &b)?;
                let fock = uhlmann_fidelity(&rho, &sigma)?;
                Some(
                    oracle_header(&[&rho, &sigma])
                        .with("trace_distance", trace_distance(&rho, &sigma)?)
                        .with("comparisons", Value::Rows(vec![compare("fidelity", f.value, fock)])),
                )
            } else {
                None
            };
            Ok(Execution::ok(report(result, verify)))
        }
        Command::LimitSweep { pair, .. } => {
            let (a, b) = load_pair(&pair.rho0, &pair.rho1)?;
            let sweep = fidelity_limit_sweep(&a, &b, &config.schedule)?;
            let rows = sweep
                .points
                .iter()
                .map(|p| Section::new().with("s", p.s).with("overlap", p.value).with("deviation", p.deviation))
                .collect();
            let result = Section::new()
                .with("fidelity", sweep.fidelity)
                .with("points", Value::Rows(rows))
                .with("extrapolated", sweep.extrapolated)
                .with("deviations_decreasing", sweep.deviations_decreasing());
            let verify = if config.verify {
                let (rho, sigma) = oracle.pair(&a, &b)?;
                let mut rows = vec![compare("fidelity", sweep.fidelity, uhlmann_fidelity(&rho, &sigma)?)];
                for p in &sweep.points {
                    rows.push(compare(&format!("overlap s={}", p.s), p.value, s_overlap_fock(&rho, &sigma, p.s)?));
                }
                Some(oracle_header(&[&rho, &sigma]).with("comparisons", Value::Rows(rows)))
            } else {
                None
            };
            Ok(Execution::ok(report(result, verify)))
        }
        Command::Bounds { pair } => {
            let (a, b) = load_pair(&pair.rho0, &pair.rho1)?;
            let fock = if config.verify { Some(oracle.pair(&a, &b)?) } else { None };
            let d = match &fock {
                Some((rho, sigma)) => Some(trace_distance(rho, sigma)?),
                None => None,
            };
            let r = bounds_report(&a, &b, d)?;
            let (kind, s) = argmin_parts(&r.chernoff.argmin);
            let mut result = Section::new()
                .with("fidelity", r.fidelity)
                .with("sqrt_fidelity", r.fidelity.map(f64::sqrt))
                .with("bhattacharyya", r.bhattacharyya)
                .with("chernoff", r.chernoff.value)
                .with("chernoff_argmin", kind)
                .with("chernoff_s", s)
                .with("helstrom_upper_chernoff", r.helstrom_upper_chernoff)
                .with("helstrom_upper_bhattacharyya", r.helstrom_upper_bhattacharyya)
                .with("chernoff_margin", r.chernoff_margin)
                .with("fidelity_margin", r.fidelity_margin)
                .with("chain_holds", r.chain_holds());
            if let Some(fvg) = r.fvg {
                result.push(
                    "fuchs_van_de_graaf",
                    Section::new()
                        .with("trace_distance", fvg.trace_distance)
                        .with("lower", fvg.lower)
                        .with("upper", fvg.upper)
                        .with("lower_holds", fvg.lower_holds)
                        .with("upper_holds", fvg.upper_holds)
                        .with("equality_holds", fvg.equality_holds)
                        .with("holds", r.fvg_holds()),
                );
            }
            let verify = match &fock {
                Some((rho, sigma)) => {
                    let mut rows = Vec::new();
                    if let Some(f) = r.fidelity {
                        rows.push(compare("fidelity", f, uhlmann_fidelity(rho, sigma)?));
                    }
                    rows.push(compare("bhattacharyya", r.bhattacharyya, s_overlap_fock(rho, sigma, 0.5)?));
                    Some(oracle_header(&[rho, sigma]).with("comparisons", Value::Rows(rows)))
                }
                None => None,
            };
            Ok(Execution::ok(report(result, verify)))
        }
    }
}

/// The `validate` command reports rejected matrices instead of failing on them.
fn validate(path: &Path, config: &RunConfig) -> Result<(Section, i32, Option<String>), CliError> {
    let file = read_state_file(path)?;
    let invalid = |source| CliError::Invalid {
        path: path.to_owned(),
        source,
    };
    let tol = config.tolerances;
    let v = validate_cm_with(&file.cov_matrix(), &tol).map_err(invalid)?;
    let rejection = v.rejection(&tol);
    // the mean can still be rejected (non-finite entries)
    let rejection = match rejection {
        Some(e) => Some(e),
        None => file.to_state(tol).err(),
    };
    let result = Section::new()
        .with("label", file.label.clone())
        .with("modes", v.modes)
        .with("symmetric", v.symmetric)
        .with("max_asymmetry", v.max_asymmetry)
        .with("positive_definite", v.positive_definite)
        .with("min_eigenvalue", v.min_eigenvalue)
        .with("physical", v.physical)
        .with("min_symplectic_eigenvalue", v.min_symplectic_eigenvalue)
        .with("pure", v.pure)
        .with("purity_deviation", v.purity_deviation)
        .with("valid", rejection.is_none())
        .with("reason", rejection.as_ref().map(ToString::to_string));
    Ok(match rejection {
        Some(e) => (result, EXIT_VALIDATION, Some(invalid(e).to_string())),
        None => (result, EXIT_OK, None),
    })
}

fn argmin_parts(argmin: &ChernoffArgmin) -> (&'static str, Option<f64>) {
    match argmin {
        ChernoffArgmin::Interior(s) => ("interior", Some(*s)),
        ChernoffArgmin::Endpoint(s) => ("endpoint", Some(*s)),
        ChernoffArgmin::LimitAtOne => ("limit s->1", None),
        ChernoffArgmin::LimitAtZero => ("limit s->0", None),
    }
}

fn compare(quantity: &str, gaussian: f64, fock: f64) -> Section {
    let delta = (gaussian - fock).abs();
    Section::new()
        .with("quantity", quantity)
        .with("gaussian", gaussian)
        .with("fock", fock)
        .with("delta", delta)
        .with("agrees", delta <= AGREEMENT)
}

fn oracle_header(states: &[&FockDensityMatrix]) -> Section {
    Section::new()
        .with("cutoff", states[0].cutoff())
        .with("trace_deficit", states.iter().map(|r| r.trace_deficit()).collect::<Vec<_>>())
        .with("tolerance", AGREEMENT)
}

struct Oracle(OracleConfig);

impl Oracle {
    fn recipe(&self, state: &GaussianState) -> Result<StateRecipe, CliError> {
        if state.modes() > 2 {
            return Err(CliError::Unverifiable(format!(
                "the Fock oracle handles one or two modes, got {}",
                state.modes()
            )));
        }
        recipe_of_state(state).map_err(|e| CliError::Unverifiable(e.to_string()))
    }

    fn single(&self, state: &GaussianState) -> Result<FockDensityMatrix, CliError> {
        Ok(build_fock_with(&self.recipe(state)?, &self.0)?)
    }

    fn pair(&self, a: &GaussianState, b: &GaussianState) -> Result<(FockDensityMatrix, FockDensityMatrix), CliError> {
        let (ra, rb) = (self.recipe(a)?, self.recipe(b)?);
        Ok(build_fock_pair(&ra, &rb, &self.0)?)
    }
}
