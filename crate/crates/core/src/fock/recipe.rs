use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::symplectic::{beam_splitter, squeezer, CovarianceMatrix, GaussianState};

/// Preparation of one mode: thermal core, then squeezing `S(r, θ)`, then
/// displacement `D(α)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeRecipe {
    pub thermal: f64,
    pub squeeze_r: f64,
    pub squeeze_theta: f64,
    pub displacement: Complex64,
}

impl ModeRecipe {
    pub const VACUUM: ModeRecipe = ModeRecipe {
        thermal: 0.0,
        squeeze_r: 0.0,
        squeeze_theta: 0.0,
        displacement: Complex64::new(0.0, 0.0),
    };

    pub fn thermal(nbar: f64) -> Self {
        ModeRecipe {
            thermal: nbar,
            ..Self::VACUUM
        }
    }

    pub fn coherent(alpha: Complex64) -> Self {
        ModeRecipe {
            displacement: alpha,
            ..Self::VACUUM
        }
    }

    pub fn squeezed(r: f64, theta: f64) -> Self {
        ModeRecipe {
            squeeze_r: r,
            squeeze_theta: theta,
            ..Self::VACUUM
        }
    }

    pub fn is_pure(&self) -> bool {
        self.thermal == 0.0
    }

    fn validate(&self) -> Result<()> {
        let finite = self.thermal.is_finite()
            && self.squeeze_r.is_finite()
            && self.squeeze_theta.is_finite()
            && self.displacement.re.is_finite()
            && self.displacement.im.is_finite();
        if !finite {
            return Err(Error::Recipe("parameters must be finite".into()));
        }
        if self.thermal < 0.0 {
            return Err(Error::Recipe(format!(
                "thermal occupation {} is negative",
                self.thermal
            )));
        }
        if self.squeeze_r < 0.0 {
            return Err(Error::Recipe(format!(
                "squeezing magnitude {} is negative; encode the direction in θ",
                self.squeeze_r
            )));
        }
        Ok(())
    }
}

/// One or two prepared modes, optionally mixed on a beam splitter
/// `exp(φ (a†b − a b†))` after the single-mode stages.
#[derive(Debug, Clone, PartialEq)]
pub struct StateRecipe {
    pub modes: Vec<ModeRecipe>,
    pub beam_splitter: Option<f64>,
}

impl StateRecipe {
    pub fn single(mode: ModeRecipe) -> Self {
        StateRecipe {
            modes: vec![mode],
            beam_splitter: None,
        }
    }

    pub fn product(a: ModeRecipe, b: ModeRecipe) -> Self {
        StateRecipe {
            modes: vec![a, b],
            beam_splitter: None,
        }
    }

    pub fn vacuum(modes: usize) -> Self {
        StateRecipe {
            modes: vec![ModeRecipe::VACUUM; modes],
            beam_splitter: None,
        }
    }

    pub fn with_beam_splitter(mut self, phi: f64) -> Self {
        self.beam_splitter = Some(phi);
        self
    }

    pub fn mode_count(&self) -> usize {
        self.modes.len()
    }

    pub fn is_pure(&self) -> bool {
        self.modes.iter().all(ModeRecipe::is_pure)
    }

    pub fn validate(&self) -> Result<()> {
        if self.modes.is_empty() || self.modes.len() > 2 {
            return Err(Error::Recipe(format!(
                "the Fock oracle supports one or two modes, got {}",
                self.modes.len()
            )));
        }
        for m in &self.modes {
            m.validate()?;
        }
        match self.beam_splitter {
            Some(phi) if self.modes.len() != 2 => Err(Error::Recipe(format!(
                "beam splitter angle {phi} given for a single mode"
            ))),
            Some(phi) if !phi.is_finite() => {
                Err(Error::Recipe("beam splitter angle must be finite".into()))
            }
            _ => Ok(()),
        }
    }
}

/// Moment-level image of a recipe, with the same operation order as the
/// Fock construction.
pub fn moments_of(recipe: &StateRecipe) -> Result<GaussianState> {
    recipe.validate()?;
    let n = recipe.modes.len();
    let mut cov = DMatrix::zeros(2 * n, 2 * n);
    let mut mean = DVector::zeros(2 * n);
    for (k, m) in recipe.modes.iter().enumerate() {
        let s = squeezer(m.squeeze_r, m.squeeze_theta);
        let block = &s * (2.0 * m.thermal + 1.0) * s.transpose();
        cov.view_mut((2 * k, 2 * k), (2, 2)).copy_from(&block);
        mean[2 * k] = 2.0 * m.displacement.re;
        mean[2 * k + 1] = 2.0 * m.displacement.im;
    }
    if let Some(phi) = recipe.beam_splitter {
        let b = beam_splitter(phi);
        cov = &b * cov * b.transpose();
        mean = &b * mean;
    }
    let cov = (&cov + cov.transpose()) * 0.5;
    GaussianState::new(mean, CovarianceMatrix::new(cov)?)
}

/// Largest off-diagonal block entry, relative to the covariance scale, that
/// still counts as a product state.
const PRODUCT_TOLERANCE: f64 = 1e-12;

/// Recover a recipe reproducing a one-mode state, or a two-mode product state.
pub fn recipe_of_state(state: &GaussianState) -> Result<StateRecipe> {
    let v = state.cov().matrix();
    let mean = state.mean();
    match state.modes() {
        1 => Ok(StateRecipe::single(mode_recipe_of(
            &v.clone_owned(),
            mean[0],
            mean[1],
        ))),
        2 => {
            let scale = v.amax().max(1.0);
            let coupling = v.view((0, 2), (2, 2)).amax();
            if coupling > PRODUCT_TOLERANCE * scale {
                return Err(Error::Recipe(format!(
                    "two-mode state has inter-mode correlations (max {coupling:e}); only product states map to a recipe"
                )));
            }
            let a = mode_recipe_of(&v.view((0, 0), (2, 2)).clone_owned(), mean[0], mean[1]);
            let b = mode_recipe_of(&v.view((2, 2), (2, 2)).clone_owned(), mean[2], mean[3]);
            Ok(StateRecipe::product(a, b))
        }
        n => Err(Error::Recipe(format!(
            "the Fock oracle supports one or two modes, got {n}"
        ))),
    }
}

fn mode_recipe_of(v: &DMatrix<f64>, mq: f64, mp: f64) -> ModeRecipe {
    let (a, b, c) = (v[(0, 0)], v[(0, 1)], v[(1, 1)]);
    let nu = (a * c - b * b).max(1.0).sqrt();
    // V/ν = cosh 2r I + sinh 2r [[cos θ, sin θ], [sin θ, −cos θ]]
    let split = (((a - c) / (2.0 * nu)).powi(2) + (b / nu).powi(2)).sqrt();
    let r = 0.5 * split.asinh();
    let theta = if split > 0.0 { b.atan2((a - c) / 2.0) } else { 0.0 };
    ModeRecipe {
        thermal: (nu - 1.0) / 2.0,
        squeeze_r: r,
        squeeze_theta: theta,
        displacement: Complex64::new(mq / 2.0, mp / 2.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn vacuum_moments() {
        let g = moments_of(&StateRecipe::vacuum(1)).unwrap();
        assert_eq!(g.mean().as_slice(), &[0.0, 0.0]);
        assert_eq!(g.cov().matrix(), &DMatrix::<f64>::identity(2, 2));
    }

    #[test]
    fn coherent_moments() {
        let g = moments_of(&StateRecipe::single(ModeRecipe::coherent(Complex64::new(1.0, 0.0))))
            .unwrap();
        assert_eq!(g.mean().as_slice(), &[2.0, 0.0]);
        assert_eq!(g.cov().matrix(), &DMatrix::<f64>::identity(2, 2));
    }

    #[test]
    fn squeezed_moments() {
        let g = moments_of(&StateRecipe::single(ModeRecipe::squeezed(0.3, 0.0))).unwrap();
        let v = g.cov().matrix();
        assert_abs_diff_eq!(v[(0, 0)], 0.6f64.exp(), epsilon = 1e-14);
        assert_abs_diff_eq!(v[(1, 1)], (-0.6f64).exp(), epsilon = 1e-14);
        assert_abs_diff_eq!(v[(0, 1)], 0.0, epsilon = 1e-15);
    }

    #[test]
    fn thermal_moments() {
        let g = moments_of(&StateRecipe::single(ModeRecipe::thermal(1.0))).unwrap();
        assert_eq!(g.cov().matrix(), &DMatrix::from_diagonal_element(2, 2, 3.0));
    }

    #[test]
    fn rejects_bad_recipes() {
        assert!(matches!(
            moments_of(&StateRecipe::single(ModeRecipe::thermal(-0.1))),
            Err(Error::Recipe(_))
        ));
        assert!(matches!(
            moments_of(&StateRecipe::vacuum(3)),
            Err(Error::Recipe(_))
        ));
        assert!(matches!(
            moments_of(&StateRecipe::vacuum(1).with_beam_splitter(0.3)),
            Err(Error::Recipe(_))
        ));
    }

    #[test]
    fn recipe_round_trip() {
        let original = ModeRecipe {
            thermal: 0.7,
            squeeze_r: 0.45,
            squeeze_theta: 1.1,
            displacement: Complex64::new(-0.3, 0.8),
        };
        let g = moments_of(&StateRecipe::single(original)).unwrap();
        let back = recipe_of_state(&g).unwrap();
        let h = moments_of(&back).unwrap();
        assert!((g.cov().matrix() - h.cov().matrix()).amax() < 1e-12);
        assert!((g.mean() - h.mean()).amax() < 1e-14);
        assert_abs_diff_eq!(back.modes[0].thermal, 0.7, epsilon = 1e-12);
        assert_abs_diff_eq!(back.modes[0].squeeze_r, 0.45, epsilon = 1e-12);
    }

    #[test]
    fn correlated_two_mode_state_has_no_recipe() {
        let r = StateRecipe::product(ModeRecipe::squeezed(0.3, 0.0), ModeRecipe::VACUUM)
            .with_beam_splitter(0.4);
        let g = moments_of(&r).unwrap();
        assert!(matches!(recipe_of_state(&g), Err(Error::Recipe(_))));
        let product = moments_of(&StateRecipe::product(
            ModeRecipe::thermal(1.0),
            ModeRecipe::coherent(Complex64::new(0.5, 0.0)),
        ))
        .unwrap();
        let back = recipe_of_state(&product).unwrap();
        assert_abs_diff_eq!(back.modes[0].thermal, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(back.modes[1].displacement.re, 0.5, epsilon = 1e-15);
    }
}
