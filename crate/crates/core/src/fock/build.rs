use faer::{c64, Mat};

use super::operators::{displacement, squeeze, BeamSplitter};
use super::recipe::{ModeRecipe, StateRecipe};
use super::FockDensityMatrix;
use crate::error::{Error, Result};

/// Pure components whose weight falls below this are dropped.
///
/// `ρ^s` amplifies small eigenvalues, so the floor sits far below the
/// 1e-6 comparison target even after raising to the power 0.2.
pub const COLUMN_FLOOR: f64 = 1e-40;

/// Hard per-mode cutoff limit for two-mode states.
pub const TWO_MODE_CAP: usize = 64;

const MIN_CUTOFF: usize = 4;

/// Adaptive cutoff policy: double the cutoff until the trace deficit is at
/// most `eps_trunc` and the top-level population is below `top_population`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    pub start_cutoff: usize,
    pub eps_trunc: f64,
    pub top_population: f64,
    /// Largest cutoff per mode; two-mode builds also respect [`TWO_MODE_CAP`].
    pub cap: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            start_cutoff: 16,
            eps_trunc: 1e-10,
            top_population: 1e-12,
            cap: 256,
        }
    }
}

impl OracleConfig {
    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    fn effective_cap(&self, modes: usize) -> usize {
        if modes == 2 {
            self.cap.min(TWO_MODE_CAP)
        } else {
            self.cap
        }
    }

    fn accepts(&self, rho: &FockDensityMatrix) -> bool {
        rho.trace_deficit() <= self.eps_trunc && rho.top_population() < self.top_population
    }
}

/// Build with the adaptive policy, starting at `cutoff` levels.
pub fn build_fock(recipe: &StateRecipe, cutoff: usize, eps_trunc: f64) -> Result<FockDensityMatrix> {
    build_fock_with(
        recipe,
        &OracleConfig {
            start_cutoff: cutoff,
            eps_trunc,
            ..OracleConfig::default()
        },
    )
}

pub fn build_fock_with(recipe: &StateRecipe, config: &OracleConfig) -> Result<FockDensityMatrix> {
    recipe.validate()?;
    check_cutoff(config.start_cutoff)?;
    if !(config.eps_trunc > 0.0) {
        return Err(Error::Domain {
            function: "build_fock",
            argument: config.eps_trunc,
            reason: "truncation tolerance must be positive",
        });
    }
    let cap = config.effective_cap(recipe.mode_count());
    let mut cutoff = config.start_cutoff.min(cap);
    loop {
        let rho = build_fock_at(recipe, cutoff)?;
        if config.accepts(&rho) {
            return Ok(rho);
        }
        if cutoff >= cap {
            return Err(Error::Truncation {
                cutoff: 2 * cutoff,
                cap,
                deficit: rho.trace_deficit(),
            });
        }
        cutoff = (2 * cutoff).min(cap);
    }
}

/// Build two states on a common cutoff, each satisfying the adaptive policy.
pub fn build_fock_pair(
    a: &StateRecipe,
    b: &StateRecipe,
    config: &OracleConfig,
) -> Result<(FockDensityMatrix, FockDensityMatrix)> {
    if a.mode_count() != b.mode_count() {
        return Err(Error::Dimension(format!(
            "recipes have {} and {} modes",
            a.mode_count(),
            b.mode_count()
        )));
    }
    let rho = build_fock_with(a, config)?;
    let sigma = build_fock_with(b, config)?;
    let c = rho.cutoff().max(sigma.cutoff());
    let rho = if rho.cutoff() == c { rho } else { build_fock_at(a, c)? };
    let sigma = if sigma.cutoff() == c {
        sigma
    } else {
        build_fock_at(b, c)?
    };
    Ok((rho, sigma))
}

/// Build at a fixed cutoff, without adaptivity or acceptance checks.
pub fn build_fock_at(recipe: &StateRecipe, cutoff: usize) -> Result<FockDensityMatrix> {
    recipe.validate()?;
    check_cutoff(cutoff)?;
    let factor = match recipe.modes.as_slice() {
        [m] => mode_factor(m, cutoff),
        [a, b] => two_mode_factor(a, b, recipe.beam_splitter, cutoff),
        _ => unreachable!("validated mode count"),
    };
    Ok(FockDensityMatrix::from_factor(
        recipe.mode_count(),
        cutoff,
        factor,
    ))
}

fn check_cutoff(cutoff: usize) -> Result<()> {
    if cutoff < MIN_CUTOFF {
        return Err(Error::Dimension(format!(
            "cutoff {cutoff} is below the minimum of {MIN_CUTOFF}"
        )));
    }
    Ok(())
}

/// Thermal weights `p_k = n̄^k/(n̄+1)^{k+1}` for `k < limit`, above the floor.
fn thermal_weights(nbar: f64, limit: usize) -> Vec<f64> {
    if nbar == 0.0 {
        return vec![1.0];
    }
    let log_first = -nbar.ln_1p();
    let log_ratio = nbar.ln() - nbar.ln_1p();
    (0..limit)
        .map(|k| (log_first + k as f64 * log_ratio).exp())
        .take_while(|&p| p >= COLUMN_FLOOR)
        .collect()
}

/// Columns `√p_k D S |k⟩` restricted to `rows` levels. The product runs
/// over extra intermediate levels covering the spread of `D`.
fn mode_factor(m: &ModeRecipe, rows: usize) -> Mat<c64> {
    let spread = 10.0 * m.displacement.norm() * ((2 * rows + 1) as f64).sqrt();
    let work = rows + spread.ceil() as usize + 16;
    let weights = thermal_weights(m.thermal, work);
    let d = displacement(m.displacement, work);
    let s = squeeze(m.squeeze_r, m.squeeze_theta, work, weights.len());
    let mut x = d.submatrix(0, 0, rows, work) * s;
    for (k, p) in weights.iter().enumerate() {
        let w = p.sqrt();
        for i in 0..rows {
            x[(i, k)] *= w;
        }
    }
    drop_light_columns(x)
}

fn drop_light_columns(x: Mat<c64>) -> Mat<c64> {
    let keep: Vec<usize> = (0..x.ncols())
        .filter(|&j| x.col(j).squared_norm_l2() >= COLUMN_FLOOR)
        .collect();
    if keep.len() == x.ncols() {
        return x;
    }
    Mat::from_fn(x.nrows(), keep.len(), |i, j| x[(i, keep[j])])
}

fn two_mode_factor(a: &ModeRecipe, b: &ModeRecipe, phi: Option<f64>, c: usize) -> Mat<c64> {
    // The beam splitter feeds |j, N−j⟩ with N ≤ 2c − 2 into the c × c block,
    // so each mode needs 2c − 1 levels beforehand.
    let rows = match phi {
        Some(_) => 2 * c - 1,
        None => c,
    };
    let xa = mode_factor(a, rows);
    let xb = mode_factor(b, rows);
    let pairs: Vec<(usize, usize)> = (0..xa.ncols())
        .flat_map(|k| (0..xb.ncols()).map(move |l| (k, l)))
        .filter(|&(k, l)| xa.col(k).squared_norm_l2() * xb.col(l).squared_norm_l2() >= COLUMN_FLOOR)
        .collect();
    let d = c * c;
    let mut out = Mat::<c64>::zeros(d, pairs.len());
    match phi {
        Some(phi) => {
            let bs = BeamSplitter::new(phi, c);
            let mut buf = vec![c64::new(0.0, 0.0); d];
            let cols_a: Vec<Vec<c64>> = (0..xa.ncols())
                .map(|k| (0..rows).map(|i| xa[(i, k)]).collect())
                .collect();
            let cols_b: Vec<Vec<c64>> = (0..xb.ncols())
                .map(|l| (0..rows).map(|i| xb[(i, l)]).collect())
                .collect();
            for (col, &(k, l)) in pairs.iter().enumerate() {
                bs.apply_product(&cols_a[k], &cols_b[l], &mut buf);
                for (i, v) in buf.iter().enumerate() {
                    out[(i, col)] = *v;
                }
            }
        }
        None => {
            for (col, &(k, l)) in pairs.iter().enumerate() {
                for i in 0..c {
                    for j in 0..c {
                        out[(i * c + j, col)] = xa[(i, k)] * xb[(j, l)];
                    }
                }
            }
        }
    }
    drop_light_columns(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn vacuum_is_exact() {
        let rho = build_fock(&StateRecipe::vacuum(1), 4, 1e-10).unwrap();
        assert_eq!(rho.cutoff(), 4);
        assert_eq!(rho.trace_deficit(), 0.0);
        let m = rho.matrix();
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i == 0 && j == 0 { 1.0 } else { 0.0 };
                assert_eq!(m[(i, j)], c64::new(expected, 0.0));
            }
        }
    }

    #[test]
    fn thermal_populations_are_geometric() {
        let rho = build_fock(&StateRecipe::single(ModeRecipe::thermal(1.0)), 16, 1e-10).unwrap();
        let diag = rho.diagonal();
        for (k, p) in diag.iter().enumerate() {
            assert_abs_diff_eq!(*p, 0.5f64.powi(k as i32 + 1), epsilon = 1e-15);
        }
        assert!(rho.trace_deficit() <= 1e-10);
        assert!(rho.top_population() < 1e-12);
    }

    #[test]
    fn coherent_populations_are_poissonian() {
        let rho = build_fock(
            &StateRecipe::single(ModeRecipe::coherent(c64::new(1.0, 0.0))),
            16,
            1e-10,
        )
        .unwrap();
        let mut fact = 1.0;
        for (k, p) in rho.diagonal().iter().enumerate() {
            if k > 0 {
                fact *= k as f64;
            }
            assert_abs_diff_eq!(*p, (-1.0f64).exp() / fact, epsilon = 1e-15);
        }
    }

    #[test]
    fn cap_exceeded_is_truncation_error() {
        let hot = StateRecipe::single(ModeRecipe::thermal(50.0));
        let err = build_fock_with(&hot, &OracleConfig::default().with_cap(64)).unwrap_err();
        assert!(matches!(err, Error::Truncation { cap: 64, .. }));
        assert!(err.is_numerical_guard());
    }

    #[test]
    fn rejects_small_cutoff() {
        assert!(matches!(
            build_fock(&StateRecipe::vacuum(1), 3, 1e-10),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn two_mode_product_without_beam_splitter() {
        let r = StateRecipe::product(ModeRecipe::thermal(1.0), ModeRecipe::VACUUM);
        let rho = build_fock_at(&r, 8).unwrap();
        let diag = rho.diagonal();
        for i in 0..8 {
            assert_abs_diff_eq!(diag[i * 8], 0.5f64.powi(i as i32 + 1), epsilon = 1e-15);
            assert_eq!(diag[i * 8 + 1], 0.0);
        }
    }

    #[test]
    fn beam_splitter_splits_coherent_amplitude() {
        // B(φ)(|α⟩ ⊗ |0⟩) = |α cos φ⟩ ⊗ |−α sin φ⟩
        let (alpha, phi) = (0.8, 0.6);
        let r = StateRecipe::product(ModeRecipe::coherent(c64::new(alpha, 0.0)), ModeRecipe::VACUUM)
            .with_beam_splitter(phi);
        let rho = build_fock_at(&r, 16).unwrap();
        let expected = StateRecipe::product(
            ModeRecipe::coherent(c64::new(alpha * phi.cos(), 0.0)),
            ModeRecipe::coherent(c64::new(-alpha * phi.sin(), 0.0)),
        );
        let sigma = build_fock_at(&expected, 16).unwrap();
        let (x, y) = (rho.factor(), sigma.factor());
        let overlap: c64 = (0..256).map(|i| x[(i, 0)].conj() * y[(i, 0)]).sum();
        assert_abs_diff_eq!(overlap.norm(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn pair_shares_cutoff() {
        let (rho, sigma) = build_fock_pair(
            &StateRecipe::single(ModeRecipe::thermal(2.0)),
            &StateRecipe::vacuum(1),
            &OracleConfig::default(),
        )
        .unwrap();
        assert_eq!(rho.cutoff(), sigma.cutoff());
        assert!(rho.cutoff() > 16);
    }
}
