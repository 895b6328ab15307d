//! Seeded random states, symplectic matrices and Fock recipes for property
//! tests and verification batches.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::fock::{ModeRecipe, StateRecipe};
use crate::symplectic::{
    beam_splitter, embed, phase_rotation, squeezer, CovarianceMatrix, GaussianState,
};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Product of random phase rotations, squeezers (`|r| ≤ max_squeeze`) and
/// nearest-neighbour beam splitters, three layers deep.
pub fn random_symplectic(rng: &mut SampleRng, n: usize, max_squeeze: f64) -> DMatrix<f64> {
    let mut s = DMatrix::identity(2 * n, 2 * n);
    for _ in 0..3 {
        for mode in 0..n {
            let rot = phase_rotation(rng.random_range(0.0..2.0 * PI));
            let sq = squeezer(
                rng.random_range(0.0..=max_squeeze),
                rng.random_range(0.0..2.0 * PI),
            );
            s = embed(n, mode, &(sq * rot)).expect("mode in range") * s;
        }
        for mode in 0..n.saturating_sub(1) {
            let bs = beam_splitter(rng.random_range(0.0..FRAC_PI_2));
            s = embed(n, mode, &bs).expect("modes in range") * s;
        }
    }
    s
}

/// `n` symplectic eigenvalues drawn uniformly from `[1, max_nu]`.
pub fn random_spectrum(rng: &mut SampleRng, n: usize, max_nu: f64) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(1.0..=max_nu)).collect()
}

pub fn williamson_form(spectrum: &[f64]) -> DMatrix<f64> {
    DMatrix::from_diagonal(&DVector::from_iterator(
        2 * spectrum.len(),
        spectrum.iter().flat_map(|&x| [x, x]),
    ))
}

/// A covariance matrix built as `S W Sᵀ`, returned with its factors.
#[derive(Debug, Clone)]
pub struct SampledCovariance {
    pub symplectic: DMatrix<f64>,
    pub spectrum: Vec<f64>,
    pub matrix: DMatrix<f64>,
}

pub fn random_covariance(
    rng: &mut SampleRng,
    n: usize,
    max_squeeze: f64,
    max_nu: f64,
) -> SampledCovariance {
    let symplectic = random_symplectic(rng, n, max_squeeze);
    let spectrum = random_spectrum(rng, n, max_nu);
    let w = williamson_form(&spectrum);
    let m = &symplectic * w * symplectic.transpose();
    let matrix = (&m + m.transpose()) * 0.5;
    SampledCovariance {
        symplectic,
        spectrum,
        matrix,
    }
}

/// Random physical state; pure states have `V = S Sᵀ`.
pub fn random_state(rng: &mut SampleRng, n: usize, pure: bool) -> Result<GaussianState> {
    let sampled = if pure {
        let symplectic = random_symplectic(rng, n, 0.6);
        let m = &symplectic * symplectic.transpose();
        (m.clone() + m.transpose()) * 0.5
    } else {
        random_covariance(rng, n, 0.6, 4.0).matrix
    };
    let mean = DVector::from_iterator(2 * n, (0..2 * n).map(|_| rng.random_range(-1.5..1.5)));
    GaussianState::new(mean, CovarianceMatrix::new(sampled)?)
}

/// Per-mode bounds for random recipes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecipeBox {
    pub max_thermal: f64,
    pub max_squeeze: f64,
    pub max_displacement: f64,
}

impl RecipeBox {
    /// `n̄ ≤ 2`, `r ≤ 0.8`, `|α| ≤ 1.5`.
    pub const SINGLE_MODE: RecipeBox = RecipeBox {
        max_thermal: 2.0,
        max_squeeze: 0.8,
        max_displacement: 1.5,
    };

    /// Reduced box for two modes, sized so the product Fock space stays
    /// within 32 levels per mode at a 1e-10 trace deficit.
    pub const TWO_MODE: RecipeBox = RecipeBox {
        max_thermal: 0.2,
        max_squeeze: 0.2,
        max_displacement: 0.5,
    };
}

/// Random recipe inside `bounds`; `pure` forces zero thermal occupation.
pub fn random_recipe(
    rng: &mut SampleRng,
    modes: usize,
    bounds: &RecipeBox,
    pure: bool,
) -> StateRecipe {
    let mode_recipes = (0..modes)
        .map(|_| {
            let thermal = if pure {
                0.0
            } else {
                rng.random_range(0.0..=bounds.max_thermal)
            };
            let radius = bounds.max_displacement * rng.random_range(0.0f64..=1.0).sqrt();
            ModeRecipe {
                thermal,
                squeeze_r: rng.random_range(0.0..=bounds.max_squeeze),
                squeeze_theta: rng.random_range(0.0..2.0 * PI),
                displacement: Complex64::from_polar(radius, rng.random_range(0.0..2.0 * PI)),
            }
        })
        .collect();
    let beam_splitter = (modes == 2).then(|| rng.random_range(0.0..FRAC_PI_2));
    StateRecipe {
        modes: mode_recipes,
        beam_splitter,
    }
}
