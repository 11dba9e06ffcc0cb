//! Conserved-variable field storage on a ghost-padded grid.
//!
//! Layout is component-major (all of rho, then each momentum, then rho E),
//! x fastest within a component, so dimension sweeps read contiguous or
//! regularly strided memory.

use crate::gas::{primitive_from_conserved, ConservedState, GasModel, PrimitiveState, StateError};
use crate::grid::CartesianGrid;

/// Cell-averaged conserved variables plus the simulation clock.
#[derive(Clone, Debug)]
pub struct ConservedField {
    grid: CartesianGrid,
    data: Vec<f64>,
    pub time: f64,
}

impl ConservedField {
    /// Allocates a zero field (ghosts included) at time zero.
    pub fn zeros(grid: CartesianGrid) -> Self {
        let len = grid.ncomp() * grid.padded_cells();
        Self { grid, data: vec![0.0; len], time: 0.0 }
    }

    pub fn grid(&self) -> &CartesianGrid {
        &self.grid
    }

    pub fn ncomp(&self) -> usize {
        self.grid.ncomp()
    }

    /// Raw storage slice of one component, ghosts included.
    pub fn comp(&self, c: usize) -> &[f64] {
        let stride = self.grid.padded_cells();
        &self.data[c * stride..(c + 1) * stride]
    }

    pub fn comp_mut(&mut self, c: usize) -> &mut [f64] {
        let stride = self.grid.padded_cells();
        &mut self.data[c * stride..(c + 1) * stride]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    /// Mutable per-component slices, useful for disjoint writes.
    pub fn comps_mut(&mut self) -> Vec<&mut [f64]> {
        let stride = self.grid.padded_cells();
        self.data.chunks_exact_mut(stride).collect()
    }

    #[inline(always)]
    pub fn get(&self, c: usize, ix: isize, iy: isize, iz: isize) -> f64 {
        self.data[c * self.grid.padded_cells() + self.grid.index(ix, iy, iz)]
    }

    #[inline(always)]
    pub fn set(&mut self, c: usize, ix: isize, iy: isize, iz: isize, v: f64) {
        let idx = c * self.grid.padded_cells() + self.grid.index(ix, iy, iz);
        self.data[idx] = v;
    }

    /// Conserved state at a (possibly ghost) cell.
    pub fn state(&self, ix: isize, iy: isize, iz: isize) -> ConservedState {
        let ndim = self.grid.ndim();
        let mut momentum = [0.0; 3];
        for d in 0..ndim {
            momentum[d] = self.get(1 + d, ix, iy, iz);
        }
        ConservedState {
            density: self.get(0, ix, iy, iz),
            momentum,
            total_energy: self.get(1 + ndim, ix, iy, iz),
        }
    }

    pub fn set_state(&mut self, ix: isize, iy: isize, iz: isize, s: &ConservedState) {
        let ndim = self.grid.ndim();
        self.set(0, ix, iy, iz, s.density);
        for d in 0..ndim {
            self.set(1 + d, ix, iy, iz, s.momentum[d]);
        }
        self.set(1 + ndim, ix, iy, iz, s.total_energy);
    }

    /// Primitive state at a cell, with the cell coordinates attached to any
    /// failure so blow-ups are locatable.
    pub fn primitive_at(
        &self,
        gas: &GasModel,
        ix: isize,
        iy: isize,
        iz: isize,
    ) -> Result<PrimitiveState, StateError> {
        primitive_from_conserved(&self.state(ix, iy, iz), gas).map_err(|e| attach_cell(e, ix, iy, iz))
    }

    /// Visits every interior cell index (ix, iy, iz).
    pub fn for_each_interior(&self, mut f: impl FnMut(isize, isize, isize)) {
        for iz in 0..self.grid.n(2) as isize {
            for iy in 0..self.grid.n(1) as isize {
                for ix in 0..self.grid.n(0) as isize {
                    f(ix, iy, iz);
                }
            }
        }
    }

    /// Totals of each conserved component over the interior, times cell
    /// volume. Neumaier-compensated summation in a fixed order, so the
    /// totals resolve conservation drift far below the rounding noise of a
    /// naive sum and stay bit-reproducible.
    pub fn conserved_totals(&self) -> Vec<f64> {
        let vol = self.grid.cell_volume();
        let mut totals = vec![0.0; self.ncomp()];
        for (c, t) in totals.iter_mut().enumerate() {
            let mut sum = 0.0f64;
            let mut comp = 0.0f64;
            self.for_each_interior(|ix, iy, iz| {
                let v = self.get(c, ix, iy, iz);
                let new = sum + v;
                comp += if sum.abs() >= v.abs() { (sum - new) + v } else { (v - new) + sum };
                sum = new;
            });
            *t = (sum + comp) * vol;
        }
        totals
    }

    /// Checks every interior cell for positive density and internal energy
    /// (rho E - |m|^2 / (2 rho) > 0, tested without divisions).
    pub fn validate_interior(&self, gas: &GasModel) -> Result<(), StateError> {
        let _ = gas;
        let grid = &self.grid;
        let ndim = grid.ndim();
        let nx = grid.n(0);
        let stride = grid.padded_cells();
        let data = &self.data;
        for iz in 0..grid.n(2) as isize {
            for iy in 0..grid.n(1) as isize {
                let base = grid.index(0, iy, iz);
                for i in base..base + nx {
                    let rho = data[i];
                    let mut m2 = 0.0;
                    for d in 0..ndim {
                        let m = data[(1 + d) * stride + i];
                        m2 += m * m;
                    }
                    let e = data[(1 + ndim) * stride + i];
                    if !(rho > 0.0 && rho * e - 0.5 * m2 > 0.0) {
                        return Err(crate::field::flat_error(self, i));
                    }
                }
            }
        }
        Ok(())
    }

    /// Extracts an interior scalar: one conserved component, or a derived
    /// velocity component (momentum / density), x fastest.
    pub fn interior_scalar(&self, which: FieldScalar) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.grid.interior_cells());
        self.for_each_interior(|ix, iy, iz| {
            let v = match which {
                FieldScalar::Conserved(c) => self.get(c, ix, iy, iz),
                FieldScalar::Velocity(d) => self.get(1 + d, ix, iy, iz) / self.get(0, ix, iy, iz),
            };
            out.push(v);
        });
        out
    }
}

/// Scalar views over a conserved field.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FieldScalar {
    /// Raw conserved component index (0 = density, last = total energy).
    Conserved(usize),
    /// Velocity component `d` derived as momentum/density.
    Velocity(usize),
}

/// Diagnostic error for an invalid cell addressed by flat padded index.
pub(crate) fn flat_error(f: &ConservedField, i: usize) -> StateError {
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
            energy: f.comp(1 + ndim)[i] - 0.5 * momentum.iter().map(|m| m * m).sum::<f64>() / r,
            density: r,
            momentum,
            context: format!("({ix},{iy},{iz})"),
        }
    } else {
        StateError::NonPositiveDensity { density: r, context: format!("({ix},{iy},{iz})") }
    }
}

fn attach_cell(e: StateError, ix: isize, iy: isize, iz: isize) -> StateError {
    let ctx = format!("({ix},{iy},{iz})");
    match e {
        StateError::NonPositiveDensity { density, .. } => {
            StateError::NonPositiveDensity { density, context: ctx }
        }
        StateError::NonPositiveInternalEnergy { energy, density, momentum, .. } => {
            StateError::NonPositiveInternalEnergy { energy, density, momentum, context: ctx }
        }
        StateError::NonPositivePressure { pressure, .. } => {
            StateError::NonPositivePressure { pressure, context: ctx }
        }
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gas::GasModel;
    use crate::grid::CartesianGrid;

    #[test]
    fn component_layout_round_trip() {
        let grid = CartesianGrid::periodic_cube(2, 4, 0.0, 1.0, 2).unwrap();
        let mut f = ConservedField::zeros(grid);
        let s = ConservedState { density: 1.5, momentum: [2.0, -1.0, 0.0], total_energy: 9.0 };
        f.set_state(1, 2, 0, &s);
        assert_eq!(f.state(1, 2, 0), s);
        assert_eq!(f.get(0, 1, 2, 0), 1.5);
        assert_eq!(f.get(2, 1, 2, 0), -1.0);
    }

    #[test]
    fn totals_scale_with_volume() {
        let grid = CartesianGrid::periodic_cube(1, 8, 0.0, 2.0, 2).unwrap();
        let mut f = ConservedField::zeros(grid);
        for i in 0..8 {
            f.set(0, i, 0, 0, 1.0 + i as f64);
        }
        let totals = f.conserved_totals();
        // sum 1..=8 = 36, dx = 0.25
        assert!((totals[0] - 9.0).abs() < 1e-14);
    }

    #[test]
    fn validation_reports_cell() {
        let gas = GasModel::from_gamma_cp(1.4, 1173.0, 0.71).unwrap();
        let grid = CartesianGrid::periodic_cube(1, 4, 0.0, 1.0, 2).unwrap();
        let mut f = ConservedField::zeros(grid);
        for i in 0..4 {
            f.set_state(i, 0, 0, &ConservedState { density: 1.0, momentum: [0.0; 3], total_energy: 2.5 });
        }
        f.set(0, 2, 0, 0, -1.0);
        let err = f.validate_interior(&gas).unwrap_err();
        assert!(err.to_string().contains("(2,0,0)"), "{err}");
    }
}
