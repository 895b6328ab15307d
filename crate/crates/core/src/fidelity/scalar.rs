//! Scalar functions of the symplectic eigenvalues and the classical
//! conversions between fidelity and trace distance.

use crate::error::{Error, Result};

fn check_spectral_args(function: &'static str, x: f64, p: f64) -> Result<()> {
    if !(x >= 1.0) || !x.is_finite() {
        return Err(Error::Domain {
            function,
            argument: x,
            reason: "argument must be finite and >= 1",
        });
    }
    if !(p > 0.0) || !p.is_finite() {
        return Err(Error::Domain {
            function,
            argument: p,
            reason: "exponent must be finite and > 0",
        });
    }
    Ok(())
}

/// `t^p` and `1 - t^p` for `t = (x-1)/(x+1)`, without cancellation for large `x`.
fn ratio_powers(x: f64, p: f64) -> (f64, f64) {
    let log_t = (-2.0 / (x + 1.0)).ln_1p();
    let scaled = p * log_t;
    (scaled.exp(), -scaled.exp_m1())
}

/// `G_p(x) = 2^p / ((x+1)^p − (x−1)^p)`.
pub fn g_p(x: f64, p: f64) -> Result<f64> {
    check_spectral_args("G_p", x, p)?;
    if x == 1.0 || p == 1.0 {
        return Ok(1.0);
    }
    let (_, one_minus) = ratio_powers(x, p);
    Ok((2.0 / (x + 1.0)).powf(p) / one_minus)
}

/// `Λ_p(x) = ((x+1)^p + (x−1)^p) / ((x+1)^p − (x−1)^p)`.
pub fn lambda_p(x: f64, p: f64) -> Result<f64> {
    check_spectral_args("Λ_p", x, p)?;
    if x == 1.0 {
        return Ok(1.0);
    }
    if p == 1.0 {
        return Ok(x);
    }
    let (tp, one_minus) = ratio_powers(x, p);
    Ok((1.0 + tp) / one_minus)
}

fn check_unit(function: &'static str, value: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&value) {
        return Err(Error::Domain {
            function,
            argument: value,
            reason: "value must lie in [0, 1]",
        });
    }
    Ok(())
}

/// Minimum error probability `(1 − D)/2` for two equiprobable states.
pub fn helstrom_error(trace_distance: f64) -> Result<f64> {
    check_unit("helstrom_error", trace_distance)?;
    Ok((1.0 - trace_distance) / 2.0)
}

/// Range of trace distances compatible with a fidelity value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceDistanceBounds {
    pub lower: f64,
    pub upper: f64,
    /// Both states pure: `lower == upper == √(1 − F)`.
    pub exact: bool,
}

/// Range of fidelities compatible with a trace distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FidelityBounds {
    pub lower: f64,
    pub upper: f64,
    pub exact: bool,
}

/// Fuchs–van de Graaf: `(1 − D)² ≤ F ≤ 1 − D²`, tightened to `1 − D ≤ F`
/// when one state is pure and to `F = 1 − D²` when both are.
pub fn fidelity_trace_bounds(fidelity: f64, pure0: bool, pure1: bool) -> Result<TraceDistanceBounds> {
    check_unit("fidelity_trace_bounds", fidelity)?;
    let upper = (1.0 - fidelity).sqrt();
    Ok(match (pure0, pure1) {
        (true, true) => TraceDistanceBounds {
            lower: upper,
            upper,
            exact: true,
        },
        (true, false) | (false, true) => TraceDistanceBounds {
            lower: 1.0 - fidelity,
            upper,
            exact: false,
        },
        (false, false) => TraceDistanceBounds {
            lower: 1.0 - fidelity.sqrt(),
            upper,
            exact: false,
        },
    })
}

pub fn fidelity_bounds_from_trace(
    trace_distance: f64,
    pure0: bool,
    pure1: bool,
) -> Result<FidelityBounds> {
    check_unit("fidelity_bounds_from_trace", trace_distance)?;
    let d = trace_distance;
    let upper = 1.0 - d * d;
    Ok(match (pure0, pure1) {
        (true, true) => FidelityBounds {
            lower: upper,
            upper,
            exact: true,
        },
        (true, false) | (false, true) => FidelityBounds {
            lower: 1.0 - d,
            upper,
            exact: false,
        },
        (false, false) => FidelityBounds {
            lower: (1.0 - d) * (1.0 - d),
            upper,
            exact: false,
        },
    })
}

/// `√(2 − 2√F)`.
pub fn bures_distance(fidelity: f64) -> Result<f64> {
    check_unit("bures_distance", fidelity)?;
    Ok((2.0 - 2.0 * fidelity.sqrt()).max(0.0).sqrt())
}

/// `arccos √F`.
pub fn angular_distance(fidelity: f64) -> Result<f64> {
    check_unit("angular_distance", fidelity)?;
    Ok(fidelity.sqrt().acos())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, SQRT_2};

    // Textbook form, used as an independent check on the stable evaluation.
    fn g_direct(x: f64, p: f64) -> f64 {
        2f64.powf(p) / ((x + 1.0).powf(p) - (x - 1.0).powf(p))
    }

    fn lambda_direct(x: f64, p: f64) -> f64 {
        ((x + 1.0).powf(p) + (x - 1.0).powf(p)) / ((x + 1.0).powf(p) - (x - 1.0).powf(p))
    }

    #[test]
    fn g_examples() {
        assert_eq!(g_p(1.0, 0.3).unwrap(), 1.0);
        for x in [1.0, 1.5, 3.0, 40.0] {
            assert_eq!(g_p(x, 1.0).unwrap(), 1.0);
        }
        assert_abs_diff_eq!(g_p(3.0, 0.5).unwrap(), SQRT_2 / (2.0 - SQRT_2), epsilon = 1e-14);
        assert_abs_diff_eq!(g_p(3.0, 0.5).unwrap(), 2.414213562373095, epsilon = 1e-14);
    }

    #[test]
    fn lambda_examples() {
        for p in [0.1, 0.5, 0.9] {
            assert_eq!(lambda_p(1.0, p).unwrap(), 1.0);
        }
        for x in [1.0, 2.5, 7.0] {
            assert_eq!(lambda_p(x, 1.0).unwrap(), x);
        }
        assert_abs_diff_eq!(
            lambda_p(3.0, 0.5).unwrap(),
            (2.0 + SQRT_2) / (2.0 - SQRT_2),
            epsilon = 1e-13
        );
        assert_abs_diff_eq!(lambda_p(3.0, 0.5).unwrap(), 5.82842712474619, epsilon = 1e-13);
    }

    #[test]
    fn stable_forms_match_direct_evaluation() {
        for &x in &[1.001, 1.3, 2.0, 5.0, 25.0] {
            for &p in &[0.05, 0.25, 0.5, 0.75, 0.99, 2.0] {
                let g = g_p(x, p).unwrap();
                let l = lambda_p(x, p).unwrap();
                assert!((g - g_direct(x, p)).abs() <= 1e-12 * g.abs().max(1.0), "G {x} {p}");
                assert!((l - lambda_direct(x, p)).abs() <= 1e-12 * l.abs().max(1.0), "Λ {x} {p}");
            }
        }
    }

    #[test]
    fn domain_errors() {
        assert!(g_p(0.99, 0.5).is_err());
        assert!(g_p(2.0, 0.0).is_err());
        assert!(lambda_p(f64::NAN, 0.5).is_err());
        assert!(lambda_p(2.0, -1.0).is_err());
    }

    #[test]
    fn helstrom_examples() {
        assert_eq!(helstrom_error(1.0).unwrap(), 0.0);
        assert_eq!(helstrom_error(0.0).unwrap(), 0.5);
        assert_abs_diff_eq!(helstrom_error(0.6).unwrap(), 0.2, epsilon = 1e-15);
        assert!(helstrom_error(1.2).is_err());
        assert!(helstrom_error(-0.1).is_err());
    }

    #[test]
    fn trace_bounds_examples() {
        let b = fidelity_trace_bounds(1.0, false, false).unwrap();
        assert_eq!((b.lower, b.upper), (0.0, 0.0));
        let both = fidelity_trace_bounds(0.75, true, true).unwrap();
        assert!(both.exact);
        assert_eq!(both.lower, 0.5);
        assert_eq!(both.upper, 0.5);
        let one = fidelity_trace_bounds(0.5, false, true).unwrap();
        assert_eq!(one.lower, 0.5);
        assert_abs_diff_eq!(one.upper, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-15);
        assert!(fidelity_trace_bounds(1.5, true, true).is_err());

        let f = fidelity_bounds_from_trace(0.5, false, false).unwrap();
        assert_eq!((f.lower, f.upper), (0.25, 0.75));
        let f = fidelity_bounds_from_trace(0.5, true, false).unwrap();
        assert_eq!((f.lower, f.upper), (0.5, 0.75));
    }

    #[test]
    fn distance_examples() {
        assert_eq!(bures_distance(1.0).unwrap(), 0.0);
        assert_eq!(angular_distance(1.0).unwrap(), 0.0);
        assert_abs_diff_eq!(bures_distance(0.0).unwrap(), SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(angular_distance(0.0).unwrap(), FRAC_PI_2, epsilon = 1e-15);
        assert_abs_diff_eq!(bures_distance(0.25).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(angular_distance(0.25).unwrap(), FRAC_PI_3, epsilon = 1e-15);
        assert!(bures_distance(-0.5).is_err());
    }
}
