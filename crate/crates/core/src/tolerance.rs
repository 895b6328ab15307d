/// Numerical tolerances used by validation and the Williamson decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Max-norm residual allowed for `S Ω Sᵀ = Ω`.
    pub symplectic: f64,
    /// Max-norm residual allowed for `S W Sᵀ = V`.
    pub reconstruction: f64,
    /// Symplectic eigenvalues in `[1 - heisenberg, 1)` are accepted and clamped to 1.
    pub heisenberg: f64,
    /// A state is pure when every `|ν_i - 1| <= pure`.
    pub pure: f64,
    /// Asymmetry up to this size is repaired by symmetrization.
    pub symmetry: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            symplectic: 1e-8,
            reconstruction: 1e-8,
            heisenberg: 1e-9,
            pure: 1e-9,
            symmetry: 1e-10,
        }
    }
}

impl Tolerances {
    /// Snap symplectic eigenvalues within the Heisenberg window below 1 or
    /// the purity window above it onto exactly 1.
    pub fn clamp_eigenvalue(&self, nu: f64) -> f64 {
        if nu >= 1.0 - self.heisenberg && nu <= 1.0 + self.pure {
            1.0
        } else {
            nu
        }
    }
}
