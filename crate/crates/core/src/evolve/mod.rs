//! Evolution of initial data: per-mode propagators, FFT evolution on periodic
//! grids, the exact `σ = 1` kernels and the scalar third-order route.

pub mod grid;
pub mod kernel;
pub mod propagator;
pub mod scalar;

use rayon::prelude::*;

pub use grid::Grid;
pub use kernel::{closed_form_sigma1, gaussian_response, kernel_pair, sigma1_gaussian_state};
pub use propagator::{
    expm_oracle, expm_pade, propagate_mode, propagator_matrix, propagator_with_route,
    PropagatorMethod, PropagatorOptions, Route,
};
pub use scalar::{scalar_roots, scalar_route};

use crate::error::{Error, Result};
use crate::linalg::Complex64;
use crate::model::{physical_from_state, state_from_physical, ModelParams, PhysicalTriple, StateVector};
use propagator::apply_real;

/// The Fourier-side state `ŵ` on a grid's frequency lattice at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralState {
    pub grid: Grid,
    pub fields: [Vec<Complex64>; 3],
    pub t: f64,
}

impl SpectralState {
    pub fn new(grid: Grid, fields: [Vec<Complex64>; 3], t: f64) -> Result<Self> {
        for f in &fields {
            grid.check_len(f.len(), "spectral component")?;
        }
        Ok(SpectralState { grid, fields, t })
    }

    pub fn zeros(grid: Grid) -> Self {
        let z = vec![Complex64::new(0.0, 0.0); grid.len()];
        SpectralState {
            grid,
            fields: [z.clone(), z.clone(), z],
            t: 0.0,
        }
    }

    /// Transform of real state fields `(w1, w2, w3)` given on the nodes.
    pub fn from_state_fields(grid: Grid, fields: &[Vec<f64>; 3]) -> Result<Self> {
        let f = [
            grid.forward_real(&fields[0])?,
            grid.forward_real(&fields[1])?,
            grid.forward_real(&fields[2])?,
        ];
        Ok(SpectralState { grid, fields: f, t: 0.0 })
    }

    pub fn mode(&self, k: usize) -> StateVector {
        StateVector::new(self.fields[0][k], self.fields[1][k], self.fields[2][k])
    }

    /// Inverse transform; returns the real parts and the largest imaginary
    /// residue relative to the largest real magnitude.
    pub fn to_state_fields(&self) -> ([Vec<f64>; 3], f64) {
        let mut out: [Vec<f64>; 3] = Default::default();
        let mut imag = 0.0f64;
        let mut real = 0.0f64;
        for (slot, f) in out.iter_mut().zip(&self.fields) {
            let x = self.grid.inverse(f.clone());
            imag = x.iter().map(|z| z.im.abs()).fold(imag, f64::max);
            real = x.iter().map(|z| z.re.abs()).fold(real, f64::max);
            *slot = x.into_iter().map(|z| z.re).collect();
        }
        let residue = if real > 0.0 { imag / real } else { imag };
        (out, residue)
    }
}

/// Physical fields `(u, u_t, θ)` on the grid nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalFields {
    pub grid: Grid,
    pub u: Vec<f64>,
    pub ut: Vec<f64>,
    pub theta: Vec<f64>,
}

impl PhysicalFields {
    pub fn new(grid: Grid, u: Vec<f64>, ut: Vec<f64>, theta: Vec<f64>) -> Result<Self> {
        grid.check_len(u.len(), "u")?;
        grid.check_len(ut.len(), "u_t")?;
        grid.check_len(theta.len(), "theta")?;
        Ok(PhysicalFields { grid, u, ut, theta })
    }

    pub fn zeros(grid: Grid) -> Self {
        let z = vec![0.0; grid.len()];
        PhysicalFields {
            grid,
            u: z.clone(),
            ut: z.clone(),
            theta: z,
        }
    }
}

/// Result of [`evolve_grid`] with the relative imaginary residue that was
/// discarded when returning to real fields.
#[derive(Debug, Clone, PartialEq)]
pub struct GridEvolution {
    pub fields: PhysicalFields,
    pub imag_residue: f64,
}

fn check_params(grid: &Grid, params: &ModelParams) -> Result<()> {
    if grid.dim() != params.dim() {
        return Err(Error::GridMismatch(format!(
            "grid dimension {} differs from model dimension {}",
            grid.dim(),
            params.dim()
        )));
    }
    Ok(())
}

/// Applies `exp(−t·A(|ξ_k|;σ))` to every lattice mode.
pub fn evolve_spectral(
    state: &SpectralState,
    params: &ModelParams,
    t: f64,
    opts: &PropagatorOptions,
) -> Result<SpectralState> {
    check_params(&state.grid, params)?;
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::invalid(format!("time must be finite and >= 0, got {t}")));
    }
    opts.validate()?;
    let grid = state.grid;
    let modes: Vec<StateVector> = (0..grid.len())
        .into_par_iter()
        .map(|k| {
            let p = propagator_matrix(grid.magnitude(k), params, t, opts);
            apply_real(&p, &state.mode(k))
        })
        .collect();
    Ok(split_modes(grid, modes, state.t + t))
}

fn split_modes(grid: Grid, modes: Vec<StateVector>, t: f64) -> SpectralState {
    let mut fields: [Vec<Complex64>; 3] = Default::default();
    for f in fields.iter_mut() {
        f.reserve(modes.len());
    }
    for m in modes {
        fields[0].push(m.w1);
        fields[1].push(m.w2);
        fields[2].push(m.w3);
    }
    SpectralState { grid, fields, t }
}

/// Evolves physical data `(u₀, u₁, θ₀)` to time `t`.
///
/// At `ξ = 0` the state carries no information on `û`, which is rebuilt from
/// `û_tt = 0` (`σ > 0`) or `û_tt + û_t = 0` (`σ = 0`).
pub fn evolve_grid(
    data: &PhysicalFields,
    params: &ModelParams,
    t: f64,
    opts: &PropagatorOptions,
) -> Result<GridEvolution> {
    let grid = data.grid;
    check_params(&grid, params)?;
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::invalid(format!("time must be finite and >= 0, got {t}")));
    }
    opts.validate()?;
    let uh = grid.forward_real(&data.u)?;
    let uth = grid.forward_real(&data.ut)?;
    let thh = grid.forward_real(&data.theta)?;
    let friction = params.sigma() == 0.0;
    let modes: Vec<PhysicalTriple> = (0..grid.len())
        .into_par_iter()
        .map(|k| {
            let r = grid.magnitude(k);
            let p0 = PhysicalTriple::new(uh[k], uth[k], thh[k]);
            if r == 0.0 {
                let (gain, rate) = if friction {
                    (1.0 - (-t).exp(), (-t).exp())
                } else {
                    (t, 1.0)
                };
                return PhysicalTriple::new(p0.u_hat + p0.ut_hat * gain, p0.ut_hat * rate, p0.theta_hat);
            }
            let w = propagate_mode(&state_from_physical(&p0, r), r, params, t, opts);
            physical_from_state(&w, r).expect("nonzero frequency")
        })
        .collect();
    let mut residue = 0.0f64;
    let mut back = |f: Vec<Complex64>| {
        let x = grid.inverse(f);
        let real = x.iter().map(|z| z.re.abs()).fold(0.0, f64::max);
        let imag = x.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        residue = residue.max(if real > 0.0 { imag / real } else { imag });
        x.into_iter().map(|z| z.re).collect::<Vec<f64>>()
    };
    let u = back(modes.iter().map(|m| m.u_hat).collect());
    let ut = back(modes.iter().map(|m| m.ut_hat).collect());
    let theta = back(modes.iter().map(|m| m.theta_hat).collect());
    if residue > 1e-10 {
        log::warn!("imaginary residue {residue:e} after inverse transform");
    }
    Ok(GridEvolution {
        fields: PhysicalFields { grid, u, ut, theta },
        imag_residue: residue,
    })
}

/// State fields `(u_t+|D|²u, u_t−|D|²u, θ)` of physical fields.
pub fn physical_to_state(data: &PhysicalFields) -> Result<SpectralState> {
    let grid = data.grid;
    let uh = grid.forward_real(&data.u)?;
    let uth = grid.forward_real(&data.ut)?;
    let thh = grid.forward_real(&data.theta)?;
    let modes = (0..grid.len())
        .map(|k| {
            state_from_physical(&PhysicalTriple::new(uh[k], uth[k], thh[k]), grid.magnitude(k))
        })
        .collect();
    Ok(split_modes(grid, modes, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn grid1(m: usize, l: f64) -> Grid {
        Grid::new(1, m, l).unwrap()
    }

    #[test]
    fn zero_data_stays_zero() {
        let g = grid1(64, 10.0);
        let p = ModelParams::new(0.5, 1).unwrap();
        let out = evolve_grid(&PhysicalFields::zeros(g), &p, 3.0, &PropagatorOptions::default()).unwrap();
        assert!(out.fields.u.iter().chain(&out.fields.ut).chain(&out.fields.theta).all(|v| *v == 0.0));
    }

    #[test]
    fn single_cosine_mode_matches_one_propagator_call() {
        let l = 8.0;
        let g = grid1(32, l);
        let p = ModelParams::new(1.5, 1).unwrap();
        let k = 2.0 * PI / l;
        let u0: Vec<f64> = g.positions().iter().map(|x| (k * x[0]).cos()).collect();
        let data = PhysicalFields::new(g, u0, vec![0.0; 32], vec![0.0; 32]).unwrap();
        let t = 0.9;
        let out = evolve_grid(&data, &p, t, &PropagatorOptions::default()).unwrap();
        let w = propagate_mode(
            &state_from_physical(&PhysicalTriple::from_real(1.0, 0.0, 0.0), k),
            k,
            &p,
            t,
            &PropagatorOptions::default(),
        );
        let phys = physical_from_state(&w, k).unwrap();
        for (j, x) in g.positions().iter().enumerate() {
            let c = (k * x[0]).cos();
            assert!((out.fields.u[j] - phys.u_hat.re * c).abs() < 1e-12);
            assert!((out.fields.ut[j] - phys.ut_hat.re * c).abs() < 1e-12);
            assert!((out.fields.theta[j] - phys.theta_hat.re * c).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_mode_of_velocity_under_friction() {
        let g = grid1(16, 4.0);
        let p = ModelParams::new(0.0, 1).unwrap();
        let data = PhysicalFields::new(g, vec![0.5; 16], vec![2.0; 16], vec![-1.0; 16]).unwrap();
        let t = 1.0;
        let out = evolve_grid(&data, &p, t, &PropagatorOptions::default()).unwrap();
        let e = (-t).exp();
        for j in 0..16 {
            assert!((out.fields.ut[j] - 2.0 * e).abs() < 1e-13);
            assert!((out.fields.u[j] - (0.5 + 2.0 * (1.0 - e))).abs() < 1e-13);
            assert!((out.fields.theta[j] + 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn mismatched_dimension_rejected() {
        let g = grid1(16, 4.0);
        let p = ModelParams::new(0.0, 2).unwrap();
        assert!(matches!(
            evolve_grid(&PhysicalFields::zeros(g), &p, 1.0, &PropagatorOptions::default()),
            Err(Error::GridMismatch(_))
        ));
        assert!(PhysicalFields::new(g, vec![0.0; 3], vec![0.0; 16], vec![0.0; 16]).is_err());
    }

    #[test]
    fn spectral_evolution_round_trips_time() {
        let g = grid1(64, 20.0);
        let p = ModelParams::new(1.0, 1).unwrap();
        let f: Vec<f64> = g.positions().iter().map(|x| (-x[0] * x[0]).exp()).collect();
        let s0 = SpectralState::from_state_fields(g, &[f.clone(), f.clone(), f]).unwrap();
        let o = PropagatorOptions::default();
        let a = evolve_spectral(&evolve_spectral(&s0, &p, 0.3, &o).unwrap(), &p, 0.4, &o).unwrap();
        let b = evolve_spectral(&s0, &p, 0.7, &o).unwrap();
        assert!((a.t - 0.7).abs() < 1e-15);
        for c in 0..3 {
            for (x, y) in a.fields[c].iter().zip(&b.fields[c]) {
                assert!((x - y).norm() < 1e-12);
            }
        }
    }
}
