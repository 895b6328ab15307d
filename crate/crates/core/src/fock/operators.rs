//! Number-basis matrix elements of the Gaussian unitaries.
//!
//! Displacement elements come from the Laguerre three-term recurrence run
//! along each diagonal, which is stable where the textbook row recursion
//! loses all digits beyond a few hundred levels. The squeezer is the
//! exponential of the truncated generator, split into its two parity
//! sectors; each sector generator is tridiagonal, so one real symmetric
//! eigendecomposition per sector gives the exponential. The truncated space
//! is padded well beyond the requested block so boundary reflections never
//! reach it. The beam splitter conserves total photon number and is
//! exponentiated exactly on each fixed-number block.

use std::f64::consts::FRAC_PI_2;

use faer::{c64, Mat, Side};
use nalgebra::DMatrix;

/// `⟨j|D(α)|k⟩` for `j, k < m`.
pub fn displacement(alpha: c64, m: usize) -> Mat<c64> {
    let mut d = Mat::<c64>::zeros(m, m);
    if alpha == c64::new(0.0, 0.0) {
        for i in 0..m {
            d[(i, i)] = c64::new(1.0, 0.0);
        }
        return d;
    }
    let x = alpha.norm_sqr();
    let (log_abs, arg) = (alpha.norm().ln(), alpha.arg());
    let mut log_fact = 0.0;
    for off in 0..m {
        if off > 0 {
            log_fact += (off as f64).ln();
        }
        // f_n = ⟨n+off|D|n⟩ = √(n!/(n+off)!) α^off e^{−x/2} L_n^{(off)}(x)
        let len = m - off;
        let k = off as f64;
        let f0 = c64::from_polar(
            (k * log_abs - 0.5 * x - 0.5 * log_fact).exp(),
            k * arg,
        );
        let mut prev = f0;
        let mut cur = f0 * (1.0 + k - x) / (k + 1.0).sqrt();
        let sign = if off % 2 == 0 { 1.0 } else { -1.0 };
        for n in 0..len {
            let f = match n {
                0 => f0,
                1 => cur,
                _ => {
                    let nf = (n - 1) as f64;
                    let next = ((2.0 * nf + 1.0 + k - x) * cur - (nf * (nf + k)).sqrt() * prev)
                        / ((nf + 1.0) * (nf + k + 1.0)).sqrt();
                    prev = cur;
                    cur = next;
                    next
                }
            };
            d[(n + off, n)] = f;
            if off > 0 {
                d[(n, n + off)] = f.conj() * sign;
            }
        }
    }
    d
}

/// `⟨j|S(r,θ)|k⟩` for `S(r,θ) = exp(r/2 (e^{iθ} a†² − e^{−iθ} a²))`,
/// `j < rows`, `k < cols`.
pub fn squeeze(r: f64, theta: f64, rows: usize, cols: usize) -> Mat<c64> {
    let mut s = Mat::<c64>::zeros(rows, cols);
    if r == 0.0 {
        for i in 0..rows.min(cols) {
            s[(i, i)] = c64::new(1.0, 0.0);
        }
        return s;
    }
    let needed = rows.max(cols);
    let padding = 0.5 * (1.0 + (2.0 * r).exp()) + 1.0;
    let size = ((needed as f64) * padding).ceil() as usize + 8;
    for parity in 0..2 {
        let levels: Vec<usize> = (parity..size).step_by(2).collect();
        let n = levels.len();
        // S(r,0) = D Q e^{−iΛ} Qᵀ D⁻¹ with D = diag(i^j) and Q Λ Qᵀ the
        // symmetric tridiagonal matrix of off-diagonal ½ r √((l+1)(l+2)).
        let j = Mat::<f64>::from_fn(n, n, |a, b| {
            if a == b + 1 {
                0.5 * r * (((levels[b] + 1) * (levels[b] + 2)) as f64).sqrt()
            } else if b == a + 1 {
                0.5 * r * (((levels[a] + 1) * (levels[a] + 2)) as f64).sqrt()
            } else {
                0.0
            }
        });
        let eig = j
            .self_adjoint_eigen(Side::Lower)
            .expect("symmetric tridiagonal eigensolver converges");
        let lambda = eig.S().column_vector();
        let q = eig.U();
        let out_rows: Vec<usize> = (0..n).filter(|&a| levels[a] < rows).collect();
        let out_cols: Vec<usize> = (0..n).filter(|&b| levels[b] < cols).collect();
        let left = Mat::<c64>::from_fn(out_rows.len(), n, |a, m| {
            q[(out_rows[a], m)] * c64::from_polar(1.0, -lambda[m])
        });
        let right = Mat::<c64>::from_fn(n, out_cols.len(), |m, b| {
            c64::new(q[(out_cols[b], m)], 0.0)
        });
        let block = left * right;
        for (a, &ia) in out_rows.iter().enumerate() {
            for (b, &ib) in out_cols.iter().enumerate() {
                // i^{a−b} from D, then e^{i(l_a − l_b)θ/2} rotates S(r,0) to S(r,θ)
                let diff = (ia as f64) - (ib as f64);
                let value = (c64::from_polar(1.0, diff * FRAC_PI_2) * block[(a, b)]).re;
                s[(levels[ia], levels[ib])] = c64::from_polar(value, diff * theta);
            }
        }
    }
    s
}

/// Orthogonal block of `exp(φ (a†b − a b†))` on the span of `|j, N−j⟩`,
/// `j = 0..=N`.
pub fn beam_splitter_block(phi: f64, total: usize) -> DMatrix<f64> {
    let size = total + 1;
    let mut g = DMatrix::<f64>::zeros(size, size);
    for j in 0..total {
        let t = phi * (((j + 1) * (total - j)) as f64).sqrt();
        g[(j + 1, j)] = t;
        g[(j, j + 1)] = -t;
    }
    g.exp()
}

/// Apply the beam splitter to a two-mode vector stored as `v[i·c + j]`
/// (`i` indexes mode a, `j` mode b), cropping to `c` levels per mode.
///
/// Components with total photon number above `2c − 2` cannot land inside the
/// cropped space and are ignored; the input must cover the full `c × c` block.
pub(crate) struct BeamSplitter {
    blocks: Vec<DMatrix<f64>>,
    cutoff: usize,
}

impl BeamSplitter {
    pub fn new(phi: f64, cutoff: usize) -> Self {
        let blocks = (0..=2 * cutoff.saturating_sub(1))
            .map(|n| beam_splitter_block(phi, n))
            .collect();
        BeamSplitter { blocks, cutoff }
    }

    /// `x` and `y` are single-mode amplitudes with at least `c` entries; the
    /// product state `x ⊗ y` is transformed and cropped.
    pub fn apply_product(&self, x: &[c64], y: &[c64], out: &mut [c64]) {
        let c = self.cutoff;
        for (total, block) in self.blocks.iter().enumerate() {
            let input: Vec<c64> = (0..=total)
                .map(|j| match (x.get(j), y.get(total - j)) {
                    (Some(a), Some(b)) => a * b,
                    _ => c64::new(0.0, 0.0),
                })
                .collect();
            let out_lo = total.saturating_sub(c - 1);
            let out_hi = total.min(c - 1);
            for i in out_lo..=out_hi {
                let mut acc = c64::new(0.0, 0.0);
                for (j, a) in input.iter().enumerate() {
                    acc += *a * block[(i, j)];
                }
                out[i * c + (total - i)] = acc;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn factorial(k: usize) -> f64 {
        (1..=k).map(|i| i as f64).product()
    }

    #[test]
    fn coherent_column_is_poissonian() {
        let alpha = c64::new(0.6, -0.8);
        let d = displacement(alpha, 30);
        for k in 0..30 {
            let expected =
                (-alpha.norm_sqr()).exp() * alpha.norm_sqr().powi(k as i32) / factorial(k);
            assert_abs_diff_eq!(d[(k, 0)].norm_sqr(), expected, epsilon = 1e-15);
        }
    }

    #[test]
    fn displacement_is_unitary_on_low_block() {
        let d = displacement(c64::new(1.2, 0.7), 160);
        let g = d.adjoint() * &d;
        for i in 0..40 {
            for j in 0..40 {
                let target = if i == j { 1.0 } else { 0.0 };
                assert!((g[(i, j)] - c64::new(target, 0.0)).norm() < 1e-12, "({i},{j})");
            }
        }
    }

    #[test]
    fn squeezed_vacuum_column() {
        let (r, theta) = (0.7, 0.4);
        let s = squeeze(r, theta, 40, 1);
        let phase = c64::from_polar(1.0, theta);
        for k in 0..20 {
            let expected = (phase * r.tanh()).powi(k as i32) * factorial(2 * k).sqrt()
                / (2f64.powi(k as i32) * factorial(k) * r.cosh().sqrt());
            assert!((s[(2 * k, 0)] - expected).norm() < 1e-14, "k={k}");
            assert_eq!(s[(2 * k + 1, 0)], c64::new(0.0, 0.0));
        }
    }

    #[test]
    fn squeeze_is_unitary_on_low_block() {
        let s = squeeze(0.8, 2.3, 800, 60);
        let g = s.adjoint() * &s;
        for i in 0..60 {
            for j in 0..60 {
                let target = if i == j { 1.0 } else { 0.0 };
                assert!((g[(i, j)] - c64::new(target, 0.0)).norm() < 1e-12, "({i},{j})");
            }
        }
    }

    #[test]
    fn displacement_row_zero_at_high_levels() {
        // ⟨0|D(α)|n⟩ = e^{−|α|²/2} (−α*)^n / √n!
        let alpha = c64::from_polar(1.5, 0.7);
        let d = displacement(alpha, 1024);
        let mut log_fact = 0.0;
        for n in 0..300 {
            if n > 0 {
                log_fact += (n as f64).ln();
            }
            let expected = c64::from_polar(
                (n as f64 * 1.5f64.ln() - 1.125 - 0.5 * log_fact).exp(),
                n as f64 * (std::f64::consts::PI - 0.7),
            );
            let got = d[(0, n)];
            assert!((got - expected).norm() <= 1e-11 * expected.norm(), "n={n}");
        }
        let g = d.adjoint() * &d;
        for i in 0..600 {
            assert!((g[(i, i)].re - 1.0).abs() < 1e-11, "i={i}");
        }
    }

    #[test]
    fn squeeze_row_zero_at_high_levels() {
        // ⟨0|S(r,θ)|2k⟩ = (−e^{−iθ} tanh r)^k √((2k)!)/(2^k k!) / √cosh r
        let (r, theta) = (0.8f64, 2.3f64);
        let s = squeeze(r, theta, 1, 600);
        let mut log_term = -0.5 * r.cosh().ln();
        for k in 0..300usize {
            if k > 0 {
                let kf = k as f64;
                log_term += r.tanh().ln() + 0.5 * ((2.0 * kf - 1.0) / (2.0 * kf)).ln();
            }
            let expected = c64::from_polar(
                log_term.exp(),
                k as f64 * (std::f64::consts::PI - theta),
            );
            // the eigen route is accurate in absolute rather than relative terms
            let got = s[(0, 2 * k)];
            assert!((got - expected).norm() <= 1e-13, "k={k}");
            assert_eq!(s[(0, 2 * k + 1)], c64::new(0.0, 0.0));
        }
    }

    #[test]
    fn beam_splitter_moves_single_photon() {
        let phi = 0.3;
        let b = beam_splitter_block(phi, 1);
        // |1,0⟩ → cos φ |1,0⟩ − sin φ |0,1⟩ in the (|0,1⟩, |1,0⟩) basis
        assert_abs_diff_eq!(b[(1, 1)], phi.cos(), epsilon = 1e-15);
        assert_abs_diff_eq!(b[(0, 1)], -phi.sin(), epsilon = 1e-15);
        let o = b.transpose() * &b;
        assert!((o - DMatrix::identity(2, 2)).amax() < 1e-15);
    }
}
