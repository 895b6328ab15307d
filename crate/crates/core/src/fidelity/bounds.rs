use super::chernoff::{chernoff_bound, ChernoffResult};
use super::overlap::{bhattacharyya, check_pair, fidelity_mixed_pure};
use super::scalar::fidelity_bounds_from_trace;
use crate::error::{Error, Result};
use crate::symplectic::GaussianState;

/// Slack used for the `C ≤ B ≤ √F` chain.
pub const CHAIN_SLACK: f64 = 1e-10;
/// Slack used for the Fuchs–van de Graaf checks against a trace distance.
pub const FVG_SLACK: f64 = 1e-8;

/// Fuchs–van de Graaf window on the fidelity implied by a trace distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FvgCheck {
    pub trace_distance: f64,
    /// `(1 − D)²`, or `1 − D` when a state is pure.
    pub lower: f64,
    /// `1 − D²`.
    pub upper: f64,
    /// Consistency of the fidelity with the window; `None` without a fidelity.
    pub lower_holds: Option<bool>,
    pub upper_holds: Option<bool>,
    /// `|F − (1 − D²)| ≤ slack` when both states are pure.
    pub equality_holds: Option<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundsReport {
    /// Only available when at least one state is pure.
    pub fidelity: Option<f64>,
    pub bhattacharyya: f64,
    pub chernoff: ChernoffResult,
    /// Single-shot error bounds `C/2` and `B/2`.
    pub helstrom_upper_chernoff: f64,
    pub helstrom_upper_bhattacharyya: f64,
    /// `B − C`.
    pub chernoff_margin: f64,
    /// `√F − B`.
    pub fidelity_margin: Option<f64>,
    pub fvg: Option<FvgCheck>,
}

impl BoundsReport {
    pub fn chain_holds(&self) -> bool {
        self.chernoff_margin >= -CHAIN_SLACK
            && self.fidelity_margin.is_none_or(|m| m >= -CHAIN_SLACK)
    }

    pub fn fvg_holds(&self) -> Option<bool> {
        let fvg = self.fvg?;
        Some(
            fvg.lower_holds.unwrap_or(true)
                && fvg.upper_holds.unwrap_or(true)
                && fvg.equality_holds.unwrap_or(true),
        )
    }
}

/// Aggregate fidelity, Bhattacharyya and Chernoff terms with the inequality margins.
///
/// `trace_distance` is typically supplied by the Fock oracle; without it the
/// Fuchs–van de Graaf section is omitted.
pub fn bounds_report(
    rho0: &GaussianState,
    rho1: &GaussianState,
    trace_distance: Option<f64>,
) -> Result<BoundsReport> {
    check_pair(rho0, rho1)?;
    let fidelity = match fidelity_mixed_pure(rho0, rho1) {
        Ok(f) => Some(f),
        Err(Error::PurityRequired) => None,
        Err(e) => return Err(e),
    };
    let b = bhattacharyya(rho0, rho1)?;
    let chernoff = chernoff_bound(rho0, rho1)?;
    let c = chernoff.value;

    let (pure0, pure1) = (rho0.is_pure(), rho1.is_pure());
    let fvg = match trace_distance {
        Some(d) => {
            let window = fidelity_bounds_from_trace(d, pure0, pure1)?;
            Some(FvgCheck {
                trace_distance: d,
                lower: window.lower,
                upper: window.upper,
                lower_holds: fidelity.map(|f| window.lower - FVG_SLACK <= f),
                upper_holds: fidelity.map(|f| f <= window.upper + FVG_SLACK),
                equality_holds: fidelity
                    .filter(|_| window.exact)
                    .map(|f| (f - window.upper).abs() <= FVG_SLACK),
            })
        }
        None => None,
    };

    Ok(BoundsReport {
        fidelity,
        bhattacharyya: b,
        helstrom_upper_chernoff: c / 2.0,
        helstrom_upper_bhattacharyya: b / 2.0,
        chernoff_margin: b - c,
        fidelity_margin: fidelity.map(|f| f.sqrt() - b),
        chernoff,
        fvg,
    })
}
