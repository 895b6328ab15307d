use super::overlap::{check_pair, fidelity_mixed_pure, s_overlap};
use crate::error::Result;
use crate::symplectic::GaussianState;

const GRID_POINTS: usize = 33;
const GRID_MARGIN: f64 = 1e-4;
const REFINE_WIDTH: f64 = 1e-6;

/// Where the infimum of `C_s` was found.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChernoffArgmin {
    /// Interior minimizer located by grid search plus golden-section refinement.
    Interior(f64),
    /// The grid minimum sat on an endpoint and neither state is pure.
    Endpoint(f64),
    /// `ρ₁` is pure: the infimum is the limit `s → 1⁻`, equal to the fidelity.
    LimitAtOne,
    /// `ρ₀` is pure: the infimum is the limit `s → 0⁺`, equal to the fidelity.
    LimitAtZero,
}

impl ChernoffArgmin {
    pub fn is_boundary_limit(&self) -> bool {
        matches!(self, ChernoffArgmin::LimitAtOne | ChernoffArgmin::LimitAtZero)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChernoffResult {
    pub value: f64,
    pub argmin: ChernoffArgmin,
    /// Every `(s, C_s)` evaluated during the search, in evaluation order.
    pub evaluations: Vec<(f64, f64)>,
}

/// Chebyshev–Lobatto nodes on `[GRID_MARGIN, 1 − GRID_MARGIN]`; the middle node is exactly 1/2.
pub fn chernoff_grid() -> Vec<f64> {
    let (a, b) = (GRID_MARGIN, 1.0 - GRID_MARGIN);
    let last = (GRID_POINTS - 1) as f64;
    (0..GRID_POINTS)
        .map(|k| {
            if 2 * k == GRID_POINTS - 1 {
                0.5
            } else {
                let c = (std::f64::consts::PI * k as f64 / last).cos();
                a + (b - a) * (1.0 - c) / 2.0
            }
        })
        .collect()
}

/// Chernoff term `C = inf_{0<s<1} C_s`.
///
/// When a state is pure `C_s` is monotone and the infimum is the boundary
/// limit, which equals the closed-form fidelity. Otherwise `C_s` is
/// scanned on [`chernoff_grid`] and the best node refined by golden section.
pub fn chernoff_bound(rho0: &GaussianState, rho1: &GaussianState) -> Result<ChernoffResult> {
    check_pair(rho0, rho1)?;
    if rho1.is_pure() || rho0.is_pure() {
        let argmin = if rho1.is_pure() {
            ChernoffArgmin::LimitAtOne
        } else {
            ChernoffArgmin::LimitAtZero
        };
        return Ok(ChernoffResult {
            value: fidelity_mixed_pure(rho0, rho1)?,
            argmin,
            evaluations: Vec::new(),
        });
    }

    let mut evaluations = Vec::with_capacity(GRID_POINTS + 40);
    let mut eval = |s: f64| -> Result<f64> {
        let value = s_overlap(rho0, rho1, s)?.value;
        evaluations.push((s, value));
        Ok(value)
    };

    let grid = chernoff_grid();
    let mut values = Vec::with_capacity(grid.len());
    for &s in &grid {
        values.push(eval(s)?);
    }
    // ties resolve to the smaller s
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v < values[best] {
            best = i;
        }
    }
    if best == 0 || best == grid.len() - 1 {
        return Ok(ChernoffResult {
            value: values[best],
            argmin: ChernoffArgmin::Endpoint(grid[best]),
            evaluations,
        });
    }

    let (s_ref, v_ref) = golden_section(&mut eval, grid[best - 1], grid[best + 1])?;
    let (s_star, value) = if v_ref < values[best] {
        (s_ref, v_ref)
    } else {
        (grid[best], values[best])
    };
    Ok(ChernoffResult {
        value,
        argmin: ChernoffArgmin::Interior(s_star),
        evaluations,
    })
}

fn golden_section<F>(f: &mut F, mut lo: f64, mut hi: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while hi - lo >= REFINE_WIDTH {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = f(x2)?;
        }
    }
    Ok(if f1 <= f2 { (x1, f1) } else { (x2, f2) })
}
