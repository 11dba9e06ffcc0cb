//! Primitive-variable mirror of a conserved field, built once per RHS
//! evaluation so the sweeps read plain slices.

use crate::field::ConservedField;
use crate::gas::{GasModel, PrimitiveState, StateError};

/// SoA primitive storage over the padded grid: density, three velocity
/// components (zero when inactive), pressure, temperature.
pub struct PrimField {
    ndim: usize,
    pub rho: Vec<f64>,
    pub vel: [Vec<f64>; 3],
    pub p: Vec<f64>,
    pub t: Vec<f64>,
}

impl PrimField {
    /// Converts every padded cell; ghosts must already be filled. The
    /// first invalid cell aborts with its location.
    pub fn build(f: &ConservedField, gas: &GasModel) -> Result<Self, StateError> {
        let grid = f.grid();
        let ncells = grid.padded_cells();
        let ndim = grid.ndim();
        let gamma1 = gas.gamma() - 1.0;
        let inv_r = 1.0 / gas.r_specific();
        let rho_in = f.comp(0);
        let e_in = f.comp(1 + ndim);
        let mut rho = vec![0.0; ncells];
        let mut vel = [vec![0.0; ncells], vec![0.0; ncells], vec![0.0; ncells]];
        let mut p = vec![0.0; ncells];
        let mut t = vec![0.0; ncells];

        let mut bad: Option<usize> = None;
        match ndim {
            1 => {
                let mx = f.comp(1);
                for i in 0..ncells {
                    let r = rho_in[i];
                    let inv = 1.0 / r;
                    let u = mx[i] * inv;
                    let internal = e_in[i] - 0.5 * mx[i] * u;
                    if !(r > 0.0 && internal > 0.0) {
                        bad = Some(i);
                        break;
                    }
                    rho[i] = r;
                    vel[0][i] = u;
                    let pres = gamma1 * internal;
                    p[i] = pres;
                    t[i] = pres * inv * inv_r;
                }
            }
            2 => {
                let mx = f.comp(1);
                let my = f.comp(2);
                for i in 0..ncells {
                    let r = rho_in[i];
                    let inv = 1.0 / r;
                    let u = mx[i] * inv;
                    let v = my[i] * inv;
                    let internal = e_in[i] - 0.5 * (mx[i] * u + my[i] * v);
                    if !(r > 0.0 && internal > 0.0) {
                        bad = Some(i);
                        break;
                    }
                    rho[i] = r;
                    vel[0][i] = u;
                    vel[1][i] = v;
                    let pres = gamma1 * internal;
                    p[i] = pres;
                    t[i] = pres * inv * inv_r;
                }
            }
            _ => {
                let mx = f.comp(1);
                let my = f.comp(2);
                let mz = f.comp(3);
                for i in 0..ncells {
                    let r = rho_in[i];
                    let inv = 1.0 / r;
                    let u = mx[i] * inv;
                    let v = my[i] * inv;
                    let w = mz[i] * inv;
                    let internal = e_in[i] - 0.5 * (mx[i] * u + my[i] * v + mz[i] * w);
                    if !(r > 0.0 && internal > 0.0) {
                        bad = Some(i);
                        break;
                    }
                    rho[i] = r;
                    vel[0][i] = u;
                    vel[1][i] = v;
                    vel[2][i] = w;
                    let pres = gamma1 * internal;
                    p[i] = pres;
                    t[i] = pres * inv * inv_r;
                }
            }
        }
        if let Some(i) = bad {
            return Err(flat_index_error(f, i));
        }
        Ok(Self { ndim, rho, vel, p, t })
    }

    #[inline(always)]
    pub fn state_at(&self, idx: usize) -> PrimitiveState {
        PrimitiveState {
            density: self.rho[idx],
            velocity: [self.vel[0][idx], self.vel[1][idx], self.vel[2][idx]],
            pressure: self.p[idx],
            temperature: self.t[idx],
        }
    }

    /// Slice view of one reconstruction component: 0 = density,
    /// 1..=ndim = velocity, ndim + 1 = pressure.
    #[inline(always)]
    pub fn comp(&self, c: usize) -> &[f64] {
        if c == 0 {
            &self.rho
        } else if c <= self.ndim {
            &self.vel[c - 1]
        } else {
            &self.p
        }
    }
}

/// Builds the diagnostic error for an invalid padded cell.
pub(super) fn flat_index_error(f: &ConservedField, i: usize) -> StateError {
    let grid = f.grid();
    let ndim = grid.ndim();
    let px = grid.padded(0);
    let py = grid.padded(1);
    let g = grid.ghost() as isize;
    let ix = (i % px) as isize - g;
    let iy = ((i / px) % py) as isize - if ndim >= 2 { g } else { 0 };
    let iz = (i / (px * py)) as isize - if ndim >= 3 { g } else { 0 };
    let mut momentum = [0.0; 3];
    for d in 0..ndim {
        momentum[d] = f.comp(1 + d)[i];
    }
    let r = f.comp(0)[i];
    if r > 0.0 {
        StateError::NonPositiveInternalEnergy {
            energy: f.comp(1 + ndim)[i]
                - 0.5 * momentum.iter().map(|m| m * m).sum::<f64>() / r,
            density: r,
            momentum,
            context: format!("({ix},{iy},{iz})"),
        }
    } else {
        StateError::NonPositiveDensity { density: r, context: format!("({ix},{iy},{iz})") }
    }
}
