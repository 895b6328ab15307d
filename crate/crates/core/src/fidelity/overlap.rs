use nalgebra::{Cholesky, DMatrix, DVector, SymmetricEigen};

use super::scalar::{g_p, lambda_p};
use crate::error::{Error, Result};
use crate::linalg::symmetrize;
use crate::symplectic::{williamson, GaussianState};

/// Largest accepted condition number of `Σ_s`.
pub const CONDITION_LIMIT: f64 = 1e12;

/// Quadratic forms above this value make the overlap exactly zero.
pub const UNDERFLOW_QUAD_FORM: f64 = 1400.0;

/// The s-overlap `C_s` together with the ingredients of its closed form.
#[derive(Debug, Clone, PartialEq)]
pub struct OverlapReport {
    pub s: f64,
    pub value: f64,
    /// `Π_s = 2ⁿ ∏ G_s(ν⁰_i) G_{1−s}(ν¹_i)`.
    pub pi_term: f64,
    pub sigma: DMatrix<f64>,
    pub sigma_det: f64,
    /// `dᵀ Σ_s⁻¹ d`.
    pub quad_form: f64,
    /// `x̄₀ − x̄₁`.
    pub d: DVector<f64>,
    /// Set when the exponential was flushed to zero.
    pub underflow: bool,
}

pub(crate) fn check_pair(rho0: &GaussianState, rho1: &GaussianState) -> Result<()> {
    if rho0.modes() != rho1.modes() {
        return Err(Error::Dimension(format!(
            "mode counts differ: {} vs {}",
            rho0.modes(),
            rho1.modes()
        )));
    }
    Ok(())
}

fn check_exponent(s: f64) -> Result<()> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::Domain {
            function: "s_overlap",
            argument: s,
            reason: "s must lie in the open interval (0, 1)",
        });
    }
    Ok(())
}

/// `Λ_p(V)_*` and `∏ G_p(ν_i)` for one state; pure states short-circuit to `(V, 1)`.
fn spectral_terms(state: &GaussianState, p: f64) -> Result<(DMatrix<f64>, f64)> {
    let cov = state.cov();
    if cov.is_pure() {
        return Ok((cov.matrix().clone(), 1.0));
    }
    let tol = cov.tolerances();
    let decomposition = williamson(cov)?;
    let mut lambdas = Vec::with_capacity(decomposition.spectrum().len());
    let mut g_product = 1.0;
    for &nu in decomposition.spectrum() {
        let nu = tol.clamp_eigenvalue(nu);
        lambdas.push(lambda_p(nu, p)?);
        g_product *= g_p(nu, p)?;
    }
    let s = decomposition.symplectic();
    let diag = DMatrix::from_diagonal(&DVector::from_iterator(
        2 * lambdas.len(),
        lambdas.iter().flat_map(|&l| [l, l]),
    ));
    Ok((symmetrize(&(s * diag * s.transpose())), g_product))
}

/// `Π det(Σ)^{-1/2} exp(−dᵀΣ⁻¹d/2)` with conditioning and underflow guards.
pub(crate) fn assemble(
    s: f64,
    sigma: DMatrix<f64>,
    pi_term: f64,
    d: DVector<f64>,
) -> Result<OverlapReport> {
    let eigenvalues = SymmetricEigen::new(sigma.clone()).eigenvalues;
    let min = eigenvalues.min();
    let max = eigenvalues.max();
    if !(min > 0.0) || max / min > CONDITION_LIMIT {
        return Err(Error::IllConditioned {
            condition: if min > 0.0 { max / min } else { f64::INFINITY },
            limit: CONDITION_LIMIT,
        });
    }
    let chol = Cholesky::new(sigma.clone()).ok_or(Error::IllConditioned {
        condition: max / min,
        limit: CONDITION_LIMIT,
    })?;
    let log_det: f64 = 2.0 * chol.l_dirty().diagonal().iter().map(|x| x.ln()).sum::<f64>();
    let solved = chol.solve(&d);
    let quad_form = d.dot(&solved);
    let underflow = quad_form > UNDERFLOW_QUAD_FORM;
    let value = if underflow {
        0.0
    } else {
        (pi_term.ln() - 0.5 * log_det - 0.5 * quad_form).exp()
    };
    Ok(OverlapReport {
        s,
        value,
        pi_term,
        sigma,
        sigma_det: log_det.exp(),
        quad_form,
        d,
        underflow,
    })
}

/// Gaussian s-overlap `C_s(ρ₀, ρ₁) = Tr(ρ₀ˢ ρ₁^{1−s})` for `0 < s < 1`.
pub fn s_overlap(rho0: &GaussianState, rho1: &GaussianState, s: f64) -> Result<OverlapReport> {
    check_pair(rho0, rho1)?;
    check_exponent(s)?;
    let (a0, g0) = spectral_terms(rho0, s)?;
    let (a1, g1) = spectral_terms(rho1, 1.0 - s)?;
    let n = rho0.modes() as i32;
    let pi_term = 2f64.powi(n) * g0 * g1;
    assemble(s, a0 + a1, pi_term, rho0.mean() - rho1.mean())
}

/// Bhattacharyya term `B = C_{1/2}`.
pub fn bhattacharyya(rho0: &GaussianState, rho1: &GaussianState) -> Result<f64> {
    Ok(s_overlap(rho0, rho1, 0.5)?.value)
}

/// Closed-form fidelity when at least one of the states is pure:
/// `F = 2ⁿ det(V₀+V₁)^{-1/2} exp(−dᵀ(V₀+V₁)⁻¹d/2)`.
pub fn fidelity_mixed_pure(rho0: &GaussianState, rho1: &GaussianState) -> Result<f64> {
    Ok(fidelity_report(rho0, rho1)?.value)
}

/// Same as [`fidelity_mixed_pure`] but keeps the intermediate terms; `s` is reported as 1.
pub fn fidelity_report(rho0: &GaussianState, rho1: &GaussianState) -> Result<OverlapReport> {
    check_pair(rho0, rho1)?;
    if !rho0.is_pure() && !rho1.is_pure() {
        return Err(Error::PurityRequired);
    }
    let sigma = rho0.cov().matrix() + rho1.cov().matrix();
    let pi_term = 2f64.powi(rho0.modes() as i32);
    assemble(1.0, sigma, pi_term, rho0.mean() - rho1.mean())
}

/// `s = 1 − 10^{−k}` for `k = 1..=6`.
pub fn default_schedule() -> Vec<f64> {
    schedule_from_exponents(1..=6)
}

pub fn schedule_from_exponents(ks: impl IntoIterator<Item = u32>) -> Vec<f64> {
    ks.into_iter().map(|k| 1.0 - 10f64.powi(-(k as i32))).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub s: f64,
    pub value: f64,
    /// `|C_s − F|`.
    pub deviation: f64,
}

/// `C_s` along a schedule approaching 1 from below, next to the closed-form fidelity.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitSweep {
    pub fidelity: f64,
    pub points: Vec<SweepPoint>,
    /// Linear extrapolation to `s = 1` through the last two points.
    pub extrapolated: f64,
}

impl LimitSweep {
    pub fn last_value(&self) -> f64 {
        self.points.last().map_or(f64::NAN, |p| p.value)
    }

    pub fn deviations_decreasing(&self) -> bool {
        self.points.windows(2).all(|w| w[1].deviation < w[0].deviation)
    }
}

pub fn fidelity_limit_sweep(
    rho0: &GaussianState,
    rho1: &GaussianState,
    schedule: &[f64],
) -> Result<LimitSweep> {
    check_pair(rho0, rho1)?;
    if !rho1.is_pure() {
        return Err(Error::PurityRequired);
    }
    if schedule.is_empty() {
        return Err(Error::Schedule("schedule is empty".into()));
    }
    if let Some(bad) = schedule.iter().find(|s| !(**s > 0.0 && **s < 1.0)) {
        return Err(Error::Schedule(format!("{bad} is outside (0, 1)")));
    }
    if schedule.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Schedule("values must be strictly increasing".into()));
    }

    let fidelity = fidelity_mixed_pure(rho0, rho1)?;
    let mut points = Vec::with_capacity(schedule.len());
    for &s in schedule {
        let value = s_overlap(rho0, rho1, s)?.value;
        points.push(SweepPoint {
            s,
            value,
            deviation: (value - fidelity).abs(),
        });
    }
    let extrapolated = match points.as_slice() {
        [.., a, b] => b.value + (b.value - a.value) * (1.0 - b.s) / (b.s - a.s),
        [only] => only.value,
        [] => unreachable!(),
    };
    Ok(LimitSweep {
        fidelity,
        points,
        extrapolated,
    })
}
