//! Complex heat kernels behind the exact `σ = 1` solution.
//!
//! At `σ = 1` the symbol is `r²(A₀+A₁)` and `exp(−tA) = Σ_j P_j e^{−y_j r² t}`
//! with constant spectral projectors `P_j`, so each component is a heat flow
//! with complex diffusivity `y_j`.

use std::f64::consts::PI;

use crate::asymptotics::constant_eigenvectors;
use crate::error::{Error, Result};
use crate::evolve::grid::Grid;
use crate::linalg::{inverse, re, Complex64, Mat3};
use crate::spectrum::{y_constants, YKind};

fn check_y(y: Complex64, t: f64) -> Result<()> {
    if !(y.re > 0.0) {
        return Err(Error::invalid(format!("kernel needs Re y > 0, got {y}")));
    }
    if !(t > 0.0) {
        return Err(Error::invalid(format!("kernel needs t > 0, got {t}")));
    }
    Ok(())
}

/// `(4πyt)^{−n/2} exp(−|x|²/(4yt))` on the principal branch, `n = x.len()`.
pub fn closed_form_sigma1(y: Complex64, t: f64, x: &[f64]) -> Result<Complex64> {
    check_y(y, t)?;
    let n = x.len() as f64;
    let x2: f64 = x.iter().map(|v| v * v).sum();
    let tau = y * t;
    Ok((tau * (4.0 * PI)).powf(-0.5 * n) * (-re(x2) / (tau * 4.0)).exp())
}

/// `(K₀, K₁) = ((G_y − G_ȳ)/2, (G_y + G_ȳ)/2)`; `K₁` is real, `K₀` imaginary.
pub fn kernel_pair(y: Complex64, t: f64, x: &[f64]) -> Result<(Complex64, Complex64)> {
    let g = closed_form_sigma1(y, t, x)?;
    let gb = closed_form_sigma1(y.conj(), t, x)?;
    Ok(((g - gb) * 0.5, (g + gb) * 0.5))
}

/// Heat flow with diffusivity `y` applied to `amplitude·exp(−|x−c|²/(2w²))`.
pub fn gaussian_response(
    y: Complex64,
    t: f64,
    amplitude: f64,
    width: f64,
    center: &[f64],
    x: &[f64],
) -> Result<Complex64> {
    if t == 0.0 {
        let d2: f64 = x.iter().zip(center).map(|(a, b)| (a - b) * (a - b)).sum();
        return Ok(re(amplitude * (-d2 / (2.0 * width * width)).exp()));
    }
    check_y(y, t)?;
    let n = x.len() as f64;
    let w2 = width * width;
    let var = re(w2) + y * (2.0 * t);
    let d2: f64 = x.iter().zip(center).map(|(a, b)| (a - b) * (a - b)).sum();
    Ok((re(w2) / var).powf(0.5 * n) * amplitude * (-re(d2) / (var * 2.0)).exp())
}

/// Spectral projectors of `A₀+A₁`, ordered as the critical constants.
pub fn critical_projectors() -> Result<[Mat3; 3]> {
    let v = constant_eigenvectors(YKind::Critical)?;
    let vi = inverse(&v).ok_or_else(|| Error::Degenerate("critical eigenvectors".into()))?;
    let proj = |j: usize| v.column(j) * vi.row(j);
    Ok([proj(0), proj(1), proj(2)])
}

/// Exact state fields at time `t` for `σ = 1` and Gaussian state data
/// `amplitudes·exp(−|x−c|²/(2w²))`, sampled on the grid nodes.
pub fn sigma1_gaussian_state(
    grid: &Grid,
    amplitudes: [f64; 3],
    width: f64,
    center: &[f64],
    t: f64,
) -> Result<[Vec<f64>; 3]> {
    let n = grid.dim();
    if center.len() != n {
        return Err(Error::GridMismatch("center dimension differs from grid".into()));
    }
    let ys = y_constants(YKind::Critical).values;
    let projectors = critical_projectors()?;
    let amp = nalgebra::Vector3::new(re(amplitudes[0]), re(amplitudes[1]), re(amplitudes[2]));
    let coeffs: Vec<nalgebra::Vector3<Complex64>> = projectors.iter().map(|p| p * amp).collect();
    let mut out: [Vec<f64>; 3] = Default::default();
    for comp in out.iter_mut() {
        comp.reserve(grid.len());
    }
    for flat in 0..grid.len() {
        let x = grid.position(flat);
        let mut acc = [Complex64::new(0.0, 0.0); 3];
        for (j, y) in ys.iter().enumerate() {
            let g = gaussian_response(*y, t, 1.0, width, center, &x[..n])?;
            for (a, slot) in acc.iter_mut().enumerate() {
                *slot += coeffs[j][a] * g;
            }
        }
        for (a, comp) in out.iter_mut().enumerate() {
            comp.push(acc[a].re);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn peak_value_for_real_diffusivity() {
        let g = closed_form_sigma1(re(0.7), 2.0, &[0.0]).unwrap();
        assert!((g - re((4.0 * PI * 1.4f64).powf(-0.5))).norm() < 1e-15);
    }

    #[test]
    fn real_critical_root_gives_positive_kernel() {
        let y4 = y_constants(YKind::Critical).values[0];
        for x in [0.0, 0.5, 3.0] {
            let g = closed_form_sigma1(y4, 1.0, &[x]).unwrap();
            assert_eq!(g.im, 0.0);
            assert!(g.re > 0.0);
        }
    }

    #[test]
    fn unit_mass_for_real_diffusivity() {
        let h = 0.01;
        let mass: f64 = (-4000..=4000)
            .map(|i| closed_form_sigma1(re(0.5), 1.0, &[i as f64 * h]).unwrap().re * h)
            .sum();
        assert!((mass - 1.0).abs() < 1e-10);
        let mass2: f64 = (-400..=400)
            .flat_map(|i| (-400..=400).map(move |j| (i, j)))
            .map(|(i, j)| {
                closed_form_sigma1(re(0.5), 1.0, &[i as f64 * 0.02, j as f64 * 0.02])
                    .unwrap()
                    .re
                    * 4e-4
            })
            .sum();
        assert!((mass2 - 1.0).abs() < 1e-8);
    }

    #[test]
    fn rejects_non_dissipative_diffusivity() {
        assert!(closed_form_sigma1(Complex64::new(0.0, 1.0), 1.0, &[0.0]).is_err());
        assert!(closed_form_sigma1(re(1.0), 0.0, &[0.0]).is_err());
    }

    #[test]
    fn kernel_pair_recombines() {
        let y5 = y_constants(YKind::Critical).values[1];
        let (k0, k1) = kernel_pair(y5, 0.8, &[0.3]).unwrap();
        let g = closed_form_sigma1(y5, 0.8, &[0.3]).unwrap();
        assert!((k0 + k1 - g).norm() < 1e-15);
        assert!(k1.im.abs() < 1e-15);
        assert!(k0.re.abs() < 1e-15);
    }

    #[test]
    fn gaussian_response_matches_quadrature() {
        let y = y_constants(YKind::Critical).values[1];
        let (t, w, x0) = (0.6, 0.8, 0.4);
        let h = 0.005;
        let conv: Complex64 = (-4000..=4000)
            .map(|i| {
                let s = i as f64 * h;
                closed_form_sigma1(y, t, &[x0 - s]).unwrap() * (-(s * s) / (2.0 * w * w)).exp() * h
            })
            .sum();
        let closed = gaussian_response(y, t, 1.0, w, &[0.0], &[x0]).unwrap();
        assert!((conv - closed).norm() < 1e-9, "{conv} vs {closed}");
    }

    #[test]
    fn projectors_sum_to_identity() {
        let p = critical_projectors().unwrap();
        let sum = p[0] + p[1] + p[2];
        assert!(crate::linalg::max_abs(&(sum - Mat3::identity())) < 1e-13);
    }
}
