//! Moment-level description of Gaussian states.
//!
//! Conventions: quadratures are ordered `(q₁, p₁, …, q_n, p_n)`, the
//! commutator is `[x̂, x̂ᵀ] = 2iΩ` and the vacuum covariance matrix is the
//! identity (shot-noise units). Under the other common convention (vacuum
//! `I/2`) every determinant in this crate changes by a power of two, so
//! inputs must be rescaled before use.

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::linalg::{
    check_even_square, check_finite, max_abs_diff, sorted_symmetric_eigen, spd_sqrt,
    symmetrize,
};
use crate::tolerance::Tolerances;

/// The symplectic form `Ω = ⊕ [[0, 1], [-1, 0]]` on `n` modes.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticForm {
    modes: usize,
    matrix: DMatrix<f64>,
}

impl SymplecticForm {
    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.matrix
    }
}

pub fn omega(n: usize) -> Result<SymplecticForm> {
    if n == 0 {
        return Err(Error::InvalidModeCount(n));
    }
    Ok(SymplecticForm {
        modes: n,
        matrix: omega_matrix(n),
    })
}

pub(crate) fn omega_matrix(n: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        m[(2 * i, 2 * i + 1)] = 1.0;
        m[(2 * i + 1, 2 * i)] = -1.0;
    }
    m
}

/// Outcome of [`is_symplectic`]: the residual `‖SΩSᵀ − Ω‖_max` is always reported.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymplecticCheck {
    pub holds: bool,
    pub residual: f64,
}

pub fn is_symplectic(s: &DMatrix<f64>, tol: f64) -> Result<SymplecticCheck> {
    let n = check_even_square(s)?;
    let om = omega_matrix(n);
    let residual = max_abs_diff(&(s * &om * s.transpose()), &om);
    Ok(SymplecticCheck {
        holds: residual <= tol,
        residual,
    })
}

/// Diagnostic summary of a candidate covariance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub modes: usize,
    pub symmetric: bool,
    pub max_asymmetry: f64,
    pub positive_definite: bool,
    pub min_eigenvalue: f64,
    pub physical: bool,
    /// `None` when the matrix is not positive definite.
    pub min_symplectic_eigenvalue: Option<f64>,
    pub pure: bool,
    /// `|√det V − 1|`, `None` when the matrix is not positive definite.
    pub purity_deviation: Option<f64>,
}

impl ValidationReport {
    /// The matching error when the matrix cannot be accepted as a physical CM.
    pub fn rejection(&self, tol: &Tolerances) -> Option<Error> {
        if !self.symmetric {
            return Some(Error::Asymmetric {
                max_asymmetry: self.max_asymmetry,
                tolerance: tol.symmetry,
            });
        }
        if !self.positive_definite {
            return Some(Error::NotPositiveDefinite {
                eigenvalue: self.min_eigenvalue,
            });
        }
        if !self.physical {
            return Some(Error::Unphysical {
                eigenvalue: self.min_symplectic_eigenvalue.unwrap_or(f64::NAN),
            });
        }
        None
    }
}

pub fn validate_cm(v: &DMatrix<f64>) -> Result<ValidationReport> {
    validate_cm_with(v, &Tolerances::default())
}

pub fn validate_cm_with(v: &DMatrix<f64>, tol: &Tolerances) -> Result<ValidationReport> {
    Ok(inspect(v, tol)?.0)
}

/// Validation plus the symmetrized matrix and its raw spectrum.
fn inspect(
    v: &DMatrix<f64>,
    tol: &Tolerances,
) -> Result<(ValidationReport, DMatrix<f64>, Option<Vec<f64>>)> {
    let modes = check_even_square(v)?;
    check_finite(v)?;
    let max_asymmetry = max_abs_diff(v, &v.transpose());
    let sym = symmetrize(v);
    let (eigenvalues, _) = sorted_symmetric_eigen(&sym);
    let min_eigenvalue = eigenvalues[0];
    let positive_definite = min_eigenvalue > 0.0;

    let spectrum = if positive_definite {
        Some(spectrum_of_spd(&sym)?)
    } else {
        None
    };
    let min_nu = spectrum.as_ref().map(|s| s[s.len() - 1]);
    let symmetric = max_asymmetry <= tol.symmetry;
    let physical =
        symmetric && positive_definite && min_nu.is_some_and(|nu| nu >= 1.0 - tol.heisenberg);
    let pure = physical
        && spectrum
            .as_ref()
            .is_some_and(|s| s.iter().all(|nu| (nu - 1.0).abs() <= tol.pure));
    let purity_deviation = spectrum
        .as_ref()
        .map(|s| (s.iter().product::<f64>() - 1.0).abs());

    let report = ValidationReport {
        modes,
        symmetric,
        max_asymmetry,
        positive_definite,
        min_eigenvalue,
        physical,
        min_symplectic_eigenvalue: min_nu,
        pure,
        purity_deviation,
    };
    Ok((report, sym, spectrum))
}

/// A validated covariance matrix: symmetric, positive definite and obeying
/// the uncertainty principle.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    matrix: DMatrix<f64>,
    spectrum: Vec<f64>,
    pure: bool,
    tol: Tolerances,
}

impl CovarianceMatrix {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        Self::with_tolerances(matrix, Tolerances::default())
    }

    pub fn with_tolerances(matrix: DMatrix<f64>, tol: Tolerances) -> Result<Self> {
        let (report, sym, spectrum) = inspect(&matrix, &tol)?;
        if let Some(err) = report.rejection(&tol) {
            return Err(err);
        }
        Ok(CovarianceMatrix {
            matrix: sym,
            spectrum: spectrum.expect("positive definite matrices carry a spectrum"),
            pure: report.pure,
            tol,
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidModeCount(0));
        }
        Self::new(DMatrix::identity(2 * n, 2 * n))
    }

    pub fn modes(&self) -> usize {
        self.matrix.nrows() / 2
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Symplectic eigenvalues, sorted descending, without clamping.
    pub fn spectrum(&self) -> &[f64] {
        &self.spectrum
    }

    pub fn is_pure(&self) -> bool {
        self.pure
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    pub fn determinant(&self) -> f64 {
        self.matrix.clone().determinant()
    }

    pub fn report(&self) -> ValidationReport {
        validate_cm_with(&self.matrix, &self.tol).expect("already validated")
    }

    /// `S V Sᵀ`, revalidated with the same tolerances.
    pub fn congruence(&self, s: &DMatrix<f64>) -> Result<Self> {
        if s.nrows() != self.matrix.nrows() || s.ncols() != self.matrix.ncols() {
            return Err(Error::Dimension(format!(
                "symplectic matrix is {}x{}, covariance matrix is {}x{}",
                s.nrows(),
                s.ncols(),
                self.matrix.nrows(),
                self.matrix.ncols()
            )));
        }
        Self::with_tolerances(symmetrize(&(s * &self.matrix * s.transpose())), self.tol)
    }
}

/// Moment-level Gaussian state: displacement vector and covariance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    mean: DVector<f64>,
    cov: CovarianceMatrix,
}

impl GaussianState {
    pub fn new(mean: DVector<f64>, cov: CovarianceMatrix) -> Result<Self> {
        if mean.len() != cov.matrix.nrows() {
            return Err(Error::Dimension(format!(
                "mean has length {}, covariance matrix is {}x{}",
                mean.len(),
                cov.matrix.nrows(),
                cov.matrix.ncols()
            )));
        }
        if let Some(i) = mean.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite {
                row: i,
                col: 0,
                value: mean[i],
            });
        }
        Ok(GaussianState { mean, cov })
    }

    pub fn from_parts(mean: Vec<f64>, cov: DMatrix<f64>) -> Result<Self> {
        let cov = CovarianceMatrix::new(cov)?;
        Self::new(DVector::from_vec(mean), cov)
    }

    pub fn vacuum(n: usize) -> Result<Self> {
        let cov = CovarianceMatrix::identity(n)?;
        Self::new(DVector::zeros(2 * n), cov)
    }

    /// Single-mode thermal state with mean occupation `nbar`.
    pub fn thermal(nbar: f64) -> Result<Self> {
        if !(nbar >= 0.0) || !nbar.is_finite() {
            return Err(Error::Domain {
                function: "thermal",
                argument: nbar,
                reason: "occupation must be finite and non-negative",
            });
        }
        let v = 2.0 * nbar + 1.0;
        Self::from_parts(vec![0.0, 0.0], DMatrix::from_diagonal_element(2, 2, v))
    }

    /// Single-mode coherent state `|α⟩`, mean `(2 Re α, 2 Im α)`.
    pub fn coherent(re: f64, im: f64) -> Result<Self> {
        Self::from_parts(vec![2.0 * re, 2.0 * im], DMatrix::identity(2, 2))
    }

    pub fn modes(&self) -> usize {
        self.cov.modes()
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &CovarianceMatrix {
        &self.cov
    }

    pub fn is_pure(&self) -> bool {
        self.cov.is_pure()
    }

    /// Apply the Gaussian unitary with symplectic `s`: `x̄ ↦ S x̄`, `V ↦ S V Sᵀ`.
    pub fn transform(&self, s: &DMatrix<f64>) -> Result<Self> {
        let cov = self.cov.congruence(s)?;
        Self::new(s * &self.mean, cov)
    }

    /// Displace by `delta` in quadrature space.
    pub fn displace(&self, delta: &DVector<f64>) -> Result<Self> {
        Self::new(&self.mean + delta, self.cov.clone())
    }

    /// Product state `self ⊗ other` (direct sum of moments).
    pub fn tensor(&self, other: &GaussianState) -> Result<Self> {
        let a = self.mean.len();
        let b = other.mean.len();
        let mut mean = DVector::zeros(a + b);
        mean.rows_mut(0, a).copy_from(&self.mean);
        mean.rows_mut(a, b).copy_from(&other.mean);
        let mut cov = DMatrix::zeros(a + b, a + b);
        cov.view_mut((0, 0), (a, a)).copy_from(self.cov.matrix());
        cov.view_mut((a, a), (b, b)).copy_from(other.cov.matrix());
        let cov = CovarianceMatrix::with_tolerances(cov, self.cov.tol)?;
        Self::new(mean, cov)
    }
}

/// `V = S W Sᵀ` with `S` symplectic and `W = ⊕ ν_i I₂`.
#[derive(Debug, Clone, PartialEq)]
pub struct WilliamsonDecomposition {
    symplectic: DMatrix<f64>,
    spectrum: Vec<f64>,
}

impl WilliamsonDecomposition {
    /// Decompose a symmetric positive-definite matrix.
    ///
    /// `R = V^{1/2}` is taken spectrally, the antisymmetric `A = R Ω R` is
    /// brought to `⊕ ν_i J` by a real orthogonal `O` (read off the Hermitian
    /// eigenvectors of `iA`), and `S = R O (⊕ ν_i^{-1/2} I₂)`.
    pub fn of_matrix(v: &DMatrix<f64>) -> Result<Self> {
        let n = check_even_square(v)?;
        check_finite(v)?;
        let root = spd_sqrt(&symmetrize(v))?;
        let a = &root * omega_matrix(n) * &root;
        let eig = SymmetricEigen::new(a.map(|x| Complex::new(0.0, x)));
        let order = descending_order(eig.eigenvalues.as_slice());

        let sqrt2 = std::f64::consts::SQRT_2;
        let mut orth = DMatrix::zeros(2 * n, 2 * n);
        let mut spectrum = Vec::with_capacity(n);
        for (mode, &idx) in order.iter().take(n).enumerate() {
            let nu = eig.eigenvalues[idx];
            let u = eig.eigenvectors.column(idx);
            for row in 0..2 * n {
                orth[(row, 2 * mode)] = sqrt2 * u[row].im;
                orth[(row, 2 * mode + 1)] = sqrt2 * u[row].re;
            }
            spectrum.push(nu);
        }
        let scale = DMatrix::from_diagonal(&DVector::from_iterator(
            2 * n,
            spectrum.iter().flat_map(|nu| {
                let f = nu.sqrt().recip();
                [f, f]
            }),
        ));
        Ok(WilliamsonDecomposition {
            symplectic: root * orth * scale,
            spectrum,
        })
    }

    pub fn symplectic(&self) -> &DMatrix<f64> {
        &self.symplectic
    }

    /// Symplectic eigenvalues, sorted descending.
    pub fn spectrum(&self) -> &[f64] {
        &self.spectrum
    }

    pub fn williamson_form(&self) -> DMatrix<f64> {
        block_diagonal(&self.spectrum)
    }

    pub fn reconstruct(&self) -> DMatrix<f64> {
        &self.symplectic * self.williamson_form() * self.symplectic.transpose()
    }

    pub fn symplectic_residual(&self) -> f64 {
        let n = self.spectrum.len();
        let om = omega_matrix(n);
        max_abs_diff(&(&self.symplectic * &om * self.symplectic.transpose()), &om)
    }

    pub fn reconstruction_residual(&self, v: &DMatrix<f64>) -> f64 {
        max_abs_diff(&self.reconstruct(), v)
    }
}

fn block_diagonal(values: &[f64]) -> DMatrix<f64> {
    DMatrix::from_diagonal(&DVector::from_iterator(
        2 * values.len(),
        values.iter().flat_map(|&x| [x, x]),
    ))
}

/// Indices sorted by value descending; equal values keep index order.
fn descending_order(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[j].total_cmp(&values[i]));
    order
}

pub fn williamson(v: &CovarianceMatrix) -> Result<WilliamsonDecomposition> {
    WilliamsonDecomposition::of_matrix(&v.matrix)
}

pub fn symplectic_spectrum(v: &CovarianceMatrix) -> Vec<f64> {
    v.spectrum.clone()
}

/// Symplectic eigenvalues of a symmetric positive-definite matrix: the
/// positive eigenvalues of the Hermitian `i V^{1/2} Ω V^{1/2}`, which
/// coincide with the moduli of the eigenvalues of `iΩV`.
pub fn spectrum_of_matrix(v: &DMatrix<f64>) -> Result<Vec<f64>> {
    check_even_square(v)?;
    check_finite(v)?;
    spectrum_of_spd(&symmetrize(v))
}

fn spectrum_of_spd(v: &DMatrix<f64>) -> Result<Vec<f64>> {
    let n = v.nrows() / 2;
    let root = spd_sqrt(v)?;
    let a = &root * omega_matrix(n) * &root;
    let values = a.map(|x| Complex::new(0.0, x)).symmetric_eigenvalues();
    let order = descending_order(values.as_slice());
    Ok(order.iter().take(n).map(|&i| values[i]).collect())
}

/// `f(V)_* = S (⊕ f(ν_i) I₂) Sᵀ`, with `ν_i` clamped per the Heisenberg tolerance.
pub fn symplectic_action<F>(f: F, v: &CovarianceMatrix) -> Result<DMatrix<f64>>
where
    F: Fn(f64) -> f64,
{
    let decomposition = williamson(v)?;
    let mut values = Vec::with_capacity(decomposition.spectrum.len());
    for &nu in &decomposition.spectrum {
        let fx = f(v.tol.clamp_eigenvalue(nu));
        if !fx.is_finite() {
            return Err(Error::Evaluation { eigenvalue: nu });
        }
        values.push(fx);
    }
    let s = &decomposition.symplectic;
    Ok(symmetrize(&(s * block_diagonal(&values) * s.transpose())))
}

/// `Tr ρ² = 1 / √det V = ∏ 1/ν_i`.
pub fn purity(v: &CovarianceMatrix) -> f64 {
    v.spectrum
        .iter()
        .map(|&nu| v.tol.clamp_eigenvalue(nu).recip())
        .product()
}

/// Symplectic image of the squeezer `exp(r/2 (e^{iθ} a†² − e^{−iθ} a²))`:
/// stretches the quadrature at angle `θ/2` by `e^r`.
pub fn squeezer(r: f64, theta: f64) -> DMatrix<f64> {
    let (ch, sh) = (r.cosh(), r.sinh());
    let (c, s) = (theta.cos(), theta.sin());
    DMatrix::from_row_slice(2, 2, &[ch + sh * c, sh * s, sh * s, ch - sh * c])
}

/// Symplectic image of the phase rotation `exp(iφ a†a)`.
pub fn phase_rotation(phi: f64) -> DMatrix<f64> {
    let (c, s) = (phi.cos(), phi.sin());
    DMatrix::from_row_slice(2, 2, &[c, -s, s, c])
}

/// Symplectic image of the beam splitter `exp(φ (a†b − a b†))` on two modes.
pub fn beam_splitter(phi: f64) -> DMatrix<f64> {
    let (c, s) = (phi.cos(), phi.sin());
    DMatrix::from_row_slice(
        4,
        4,
        &[
            c, 0.0, s, 0.0, //
            0.0, c, 0.0, s, //
            -s, 0.0, c, 0.0, //
            0.0, -s, 0.0, c,
        ],
    )
}

/// Embed a single-mode (2×2) or two-mode (4×4) symplectic acting on
/// consecutive modes starting at `first_mode` into `n` modes.
pub fn embed(n: usize, first_mode: usize, block: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let size = block.nrows();
    if block.ncols() != size || !size.is_multiple_of(2) || 2 * first_mode + size > 2 * n {
        return Err(Error::Dimension(format!(
            "cannot embed a {}x{} block at mode {first_mode} of {n}",
            block.nrows(),
            block.ncols()
        )));
    }
    let mut m = DMatrix::identity(2 * n, 2 * n);
    m.view_mut((2 * first_mode, 2 * first_mode), (size, size))
        .copy_from(block);
    Ok(m)
}

#[cfg(test)]
pub(crate) fn relative_max_error(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    max_abs_diff(a, b) / crate::linalg::max_abs(b).max(1.0)
}
