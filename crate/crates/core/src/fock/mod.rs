//! Truncated Fock-space oracle for one and two modes.
//!
//! Density matrices are kept in factored form `ρ = X X†`, where each column
//! of `X` is a weighted pure component (a displaced, squeezed number state
//! with its thermal weight). The spectrum is taken from the singular values
//! of `X`, which keeps tiny eigenvalues accurate to working precision
//! relative to themselves. Fractional powers such as `ρ^0.2` depend on
//! exactly those eigenvalues.

mod build;
mod measures;
pub mod operators;
mod recipe;

use std::sync::OnceLock;

use faer::{c64, Mat, Side};

use crate::error::{Error, Result};

pub use build::{
    build_fock, build_fock_at, build_fock_pair, build_fock_with, OracleConfig, COLUMN_FLOOR,
    TWO_MODE_CAP,
};
pub use measures::{purity_fock, s_overlap_fock, trace_distance, uhlmann_fidelity};
pub use recipe::{moments_of, recipe_of_state, ModeRecipe, StateRecipe};

/// Largest tolerated `|ρ − ρ†|` entry for matrices supplied directly.
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;
/// Eigenvalues in `[−NEGATIVE_CLIP, 0)` are clipped to zero; anything lower is an error.
pub const NEGATIVE_CLIP: f64 = 1e-10;

#[derive(Debug, Clone)]
pub(crate) struct Spectrum {
    /// Positive eigenvalues, descending.
    pub values: Vec<f64>,
    /// Matching orthonormal eigenvectors as columns.
    pub vectors: Mat<c64>,
}

/// Density operator on `cutoff` Fock levels per mode. Two-mode states use
/// the index `i_a · cutoff + i_b`.
#[derive(Debug, Clone)]
pub struct FockDensityMatrix {
    modes: usize,
    cutoff: usize,
    factor: Mat<c64>,
    trace_deficit: f64,
    matrix: OnceLock<Mat<c64>>,
    spectrum: OnceLock<Spectrum>,
}

impl FockDensityMatrix {
    pub(crate) fn from_factor(modes: usize, cutoff: usize, factor: Mat<c64>) -> Self {
        let trace = factor.squared_norm_l2();
        FockDensityMatrix {
            modes,
            cutoff,
            factor,
            trace_deficit: (1.0 - trace).max(0.0),
            matrix: OnceLock::new(),
            spectrum: OnceLock::new(),
        }
    }

    /// Wrap an explicit density matrix of dimension `cutoff^modes`.
    ///
    /// The matrix must be Hermitian within [`HERMITIAN_TOLERANCE`]; eigenvalues
    /// down to `−NEGATIVE_CLIP` are clipped to zero.
    pub fn from_matrix(modes: usize, cutoff: usize, matrix: Mat<c64>) -> Result<Self> {
        if !(1..=2).contains(&modes) {
            return Err(Error::Dimension(format!(
                "the Fock oracle supports one or two modes, got {modes}"
            )));
        }
        let d = cutoff.pow(modes as u32);
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::Dimension(format!(
                "expected a {d}x{d} matrix for {modes} mode(s) at cutoff {cutoff}, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let mut deviation = 0.0f64;
        for i in 0..d {
            for j in 0..=i {
                let (a, b) = (matrix[(i, j)], matrix[(j, i)]);
                if !(a.re.is_finite() && a.im.is_finite()) {
                    return Err(Error::NonFinite {
                        row: i,
                        col: j,
                        value: if a.re.is_finite() { a.im } else { a.re },
                    });
                }
                deviation = deviation.max((a - b.conj()).norm());
            }
        }
        if deviation > HERMITIAN_TOLERANCE {
            return Err(Error::NotHermitian { deviation });
        }
        let eig = matrix
            .self_adjoint_eigen(Side::Lower)
            .map_err(|e| Error::Backend(format!("{e:?}")))?;
        let s = eig.S().column_vector();
        let u = eig.U();
        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by(|&a, &b| s[b].re.total_cmp(&s[a].re));
        if let Some(&last) = order.last() {
            if s[last].re < -NEGATIVE_CLIP {
                return Err(Error::NegativeEigenvalue {
                    eigenvalue: s[last].re,
                });
            }
        }
        let kept: Vec<usize> = order.into_iter().filter(|&k| s[k].re > 0.0).collect();
        let values: Vec<f64> = kept.iter().map(|&k| s[k].re).collect();
        let vectors = Mat::from_fn(d, kept.len(), |i, j| u[(i, kept[j])]);
        let factor = Mat::from_fn(d, kept.len(), |i, j| vectors[(i, j)] * values[j].sqrt());
        let trace: f64 = (0..d).map(|i| matrix[(i, i)].re).sum();
        let out = FockDensityMatrix {
            modes,
            cutoff,
            factor,
            trace_deficit: (1.0 - trace).max(0.0),
            matrix: OnceLock::new(),
            spectrum: OnceLock::new(),
        };
        let _ = out.matrix.set(matrix);
        let _ = out.spectrum.set(Spectrum { values, vectors });
        Ok(out)
    }

    /// Pure state `|ψ⟩⟨ψ|` from amplitudes of length `cutoff^modes`.
    pub fn pure(modes: usize, cutoff: usize, amplitudes: &[c64]) -> Result<Self> {
        let d = cutoff.pow(modes as u32);
        if !(1..=2).contains(&modes) || amplitudes.len() != d {
            return Err(Error::Dimension(format!(
                "expected {d} amplitudes for {modes} mode(s) at cutoff {cutoff}, got {}",
                amplitudes.len()
            )));
        }
        Ok(Self::from_factor(
            modes,
            cutoff,
            Mat::from_fn(d, 1, |i, _| amplitudes[i]),
        ))
    }

    /// Number state `|k⟩⟨k|` of a single mode.
    pub fn number_state(k: usize, cutoff: usize) -> Result<Self> {
        if k >= cutoff {
            return Err(Error::Dimension(format!(
                "level {k} does not fit in cutoff {cutoff}"
            )));
        }
        let mut amps = vec![c64::new(0.0, 0.0); cutoff];
        amps[k] = c64::new(1.0, 0.0);
        Self::pure(1, cutoff, &amps)
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dimension(&self) -> usize {
        self.factor.nrows()
    }

    /// `1 − Tr ρ`, clamped at zero.
    pub fn trace_deficit(&self) -> f64 {
        self.trace_deficit
    }

    pub fn trace(&self) -> f64 {
        self.diagonal().iter().sum()
    }

    /// `ρ = X X†` with one column per retained pure component.
    pub fn factor(&self) -> &Mat<c64> {
        &self.factor
    }

    pub fn matrix(&self) -> &Mat<c64> {
        self.matrix.get_or_init(|| {
            let spec = self.spectrum();
            let scaled = Mat::from_fn(spec.vectors.nrows(), spec.vectors.ncols(), |i, j| {
                spec.vectors[(i, j)] * spec.values[j]
            });
            let mut m = &scaled * spec.vectors.adjoint();
            // exact Hermitian symmetry
            let d = m.nrows();
            for i in 0..d {
                m[(i, i)] = c64::new(m[(i, i)].re, 0.0);
                for j in 0..i {
                    let avg = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
                    m[(i, j)] = avg;
                    m[(j, i)] = avg.conj();
                }
            }
            m
        })
    }

    /// Diagonal of `ρ` (Fock populations).
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.factor.nrows())
            .map(|i| {
                (0..self.factor.ncols())
                    .map(|j| self.factor[(i, j)].norm_sqr())
                    .sum()
            })
            .collect()
    }

    /// Largest marginal population of the top level `cutoff − 1` over the modes.
    pub fn top_population(&self) -> f64 {
        let diag = self.diagonal();
        let c = self.cutoff;
        match self.modes {
            1 => diag[c - 1],
            _ => {
                let a: f64 = (0..c).map(|j| diag[(c - 1) * c + j]).sum();
                let b: f64 = (0..c).map(|i| diag[i * c + c - 1]).sum();
                a.max(b)
            }
        }
    }

    /// Eigenvalues in descending order, zeros omitted.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.spectrum().values
    }

    pub(crate) fn spectrum(&self) -> &Spectrum {
        self.spectrum.get_or_init(|| spectrum_of_factor(&self.factor))
    }
}

fn spectrum_of_factor(x: &Mat<c64>) -> Spectrum {
    let d = x.nrows();
    if x.ncols() == 0 {
        return Spectrum {
            values: Vec::new(),
            vectors: Mat::zeros(d, 0),
        };
    }
    if x.ncols() == 1 {
        let norm = x.squared_norm_l2();
        if norm == 0.0 {
            return Spectrum {
                values: Vec::new(),
                vectors: Mat::zeros(d, 0),
            };
        }
        let scale = 1.0 / norm.sqrt();
        return Spectrum {
            values: vec![norm],
            vectors: Mat::from_fn(d, 1, |i, _| x[(i, 0)] * scale),
        };
    }
    // fall back to the dense eigensolver if the SVD does not converge
    match x.thin_svd() {
        Ok(svd) => {
            let s = svd.S().column_vector();
            let u = svd.U();
            let mut order: Vec<usize> = (0..s.nrows()).filter(|&k| s[k].re > 0.0).collect();
            order.sort_by(|&a, &b| s[b].re.total_cmp(&s[a].re));
            Spectrum {
                values: order.iter().map(|&k| s[k].re * s[k].re).collect(),
                vectors: Mat::from_fn(d, order.len(), |i, j| u[(i, order[j])]),
            }
        }
        Err(_) => {
            let rho = x * x.adjoint();
            let eig = rho
                .self_adjoint_eigen(Side::Lower)
                .expect("Hermitian eigensolver converges");
            let s = eig.S().column_vector();
            let u = eig.U();
            let mut order: Vec<usize> = (0..d).filter(|&k| s[k].re > 0.0).collect();
            order.sort_by(|&a, &b| s[b].re.total_cmp(&s[a].re));
            Spectrum {
                values: order.iter().map(|&k| s[k].re).collect(),
                vectors: Mat::from_fn(d, order.len(), |i, j| u[(i, order[j])]),
            }
        }
    }
}
