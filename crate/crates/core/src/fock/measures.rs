use faer::{c64, Mat, Side};

use super::FockDensityMatrix;
use crate::error::{Error, Result};

fn check_pair(rho: &FockDensityMatrix, sigma: &FockDensityMatrix) -> Result<()> {
    if rho.modes() != sigma.modes() || rho.cutoff() != sigma.cutoff() {
        return Err(Error::Dimension(format!(
            "density matrices differ: {} mode(s) at cutoff {} vs {} mode(s) at cutoff {}",
            rho.modes(),
            rho.cutoff(),
            sigma.modes(),
            sigma.cutoff()
        )));
    }
    Ok(())
}

/// `U_ρ† U_σ` between the two eigenbases.
fn basis_overlap(rho: &FockDensityMatrix, sigma: &FockDensityMatrix) -> Mat<c64> {
    rho.spectrum().vectors.adjoint() * &sigma.spectrum().vectors
}

/// Uhlmann fidelity `(Tr √(√ρ σ √ρ))²`, computed as the squared nuclear
/// norm of `√ρ √σ`.
pub fn uhlmann_fidelity(rho: &FockDensityMatrix, sigma: &FockDensityMatrix) -> Result<f64> {
    check_pair(rho, sigma)?;
    let (a, b) = (rho.spectrum(), sigma.spectrum());
    if a.values.is_empty() || b.values.is_empty() {
        return Ok(0.0);
    }
    let mut core = basis_overlap(rho, sigma);
    for i in 0..core.nrows() {
        for j in 0..core.ncols() {
            core[(i, j)] *= (a.values[i] * b.values[j]).sqrt();
        }
    }
    let nuclear = if core.nrows() == 1 || core.ncols() == 1 {
        core.squared_norm_l2().sqrt()
    } else {
        core.singular_values()
            .map_err(|e| Error::Backend(format!("{e:?}")))?
            .iter()
            .sum()
    };
    Ok(nuclear * nuclear)
}

/// `Tr(ρ^s σ^{1−s})` for `0 < s < 1`, from the two spectral decompositions.
pub fn s_overlap_fock(rho: &FockDensityMatrix, sigma: &FockDensityMatrix, s: f64) -> Result<f64> {
    check_pair(rho, sigma)?;
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::Domain {
            function: "s_overlap_fock",
            argument: s,
            reason: "s must lie strictly between 0 and 1",
        });
    }
    let (a, b) = (rho.spectrum(), sigma.spectrum());
    let overlap = basis_overlap(rho, sigma);
    let left: Vec<f64> = a.values.iter().map(|l| l.powf(s)).collect();
    let right: Vec<f64> = b.values.iter().map(|m| m.powf(1.0 - s)).collect();
    let mut total = 0.0;
    for (j, r) in right.iter().enumerate() {
        let column: f64 = left
            .iter()
            .enumerate()
            .map(|(i, l)| l * overlap[(i, j)].norm_sqr())
            .sum();
        total += r * column;
    }
    Ok(total)
}

/// `½ ‖ρ − σ‖₁` from the eigenvalues of the difference.
pub fn trace_distance(rho: &FockDensityMatrix, sigma: &FockDensityMatrix) -> Result<f64> {
    check_pair(rho, sigma)?;
    let diff = rho.matrix() - sigma.matrix();
    let eig = diff
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::Backend(format!("{e:?}")))?;
    Ok(0.5 * eig.iter().map(|e| e.abs()).sum::<f64>())
}

/// `Tr ρ²`.
pub fn purity_fock(rho: &FockDensityMatrix) -> f64 {
    rho.eigenvalues().iter().map(|l| l * l).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{build_fock_at, ModeRecipe, StateRecipe};
    use approx::assert_abs_diff_eq;

    fn thermal(nbar: f64, cutoff: usize) -> FockDensityMatrix {
        build_fock_at(&StateRecipe::single(ModeRecipe::thermal(nbar)), cutoff).unwrap()
    }

    #[test]
    fn identical_vacua() {
        let vac = FockDensityMatrix::number_state(0, 8).unwrap();
        assert_abs_diff_eq!(uhlmann_fidelity(&vac, &vac).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s_overlap_fock(&vac, &vac, 0.5).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(trace_distance(&vac, &vac).unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(purity_fock(&vac), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn orthogonal_number_states() {
        let zero = FockDensityMatrix::number_state(0, 8).unwrap();
        let one = FockDensityMatrix::number_state(1, 8).unwrap();
        assert_eq!(uhlmann_fidelity(&zero, &one).unwrap(), 0.0);
        assert_abs_diff_eq!(trace_distance(&zero, &one).unwrap(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn thermal_vs_vacuum() {
        let rho = thermal(1.0, 64);
        let vac = FockDensityMatrix::number_state(0, 64).unwrap();
        let f = uhlmann_fidelity(&rho, &vac).unwrap();
        assert_abs_diff_eq!(f, 0.5, epsilon = 1e-10);
        assert_abs_diff_eq!(
            s_overlap_fock(&rho, &vac, 0.5).unwrap(),
            0.5f64.sqrt(),
            epsilon = 1e-12
        );
        for s in [0.25, 0.75] {
            assert_abs_diff_eq!(
                s_overlap_fock(&rho, &vac, s).unwrap(),
                2f64.powf(-s),
                epsilon = 1e-12
            );
        }
        let d = trace_distance(&rho, &vac).unwrap();
        assert!(1.0 - d <= f + 1e-12 && f <= 1.0 - d * d + 1e-12);
        assert_abs_diff_eq!(purity_fock(&rho), 1.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn mixed_mixed_fidelity_of_commuting_states() {
        // diagonal states: F = (Σ √(p_k q_k))²
        let (a, b) = (thermal(0.5, 64), thermal(1.5, 64));
        let p = |n: f64, k: i32| n.powi(k) / (n + 1.0).powi(k + 1);
        let expected: f64 = (0..64).map(|k| (p(0.5, k) * p(1.5, k)).sqrt()).sum();
        assert_abs_diff_eq!(
            uhlmann_fidelity(&a, &b).unwrap(),
            expected * expected,
            epsilon = 1e-12
        );
    }

    #[test]
    fn rejects_mismatched_cutoffs_and_bad_s() {
        let a = FockDensityMatrix::number_state(0, 8).unwrap();
        let b = FockDensityMatrix::number_state(0, 16).unwrap();
        assert!(matches!(uhlmann_fidelity(&a, &b), Err(Error::Dimension(_))));
        assert!(matches!(
            s_overlap_fock(&a, &a, 1.0),
            Err(Error::Domain { .. })
        ));
    }
}
