//! Diffusive tendency: conservative divergence of the viscous/conductive
//! face fluxes, second-order centered in every configuration.

use super::prim::PrimField;
use super::IntegrateError;
use crate::field::ConservedField;
use crate::flux::{viscous_flux, ViscousFaceStencil};
use crate::gas::{GasModel, TransportCoeffs};
use crate::grid::Boundary;
use rayon::prelude::*;

pub(super) fn diffusive_rhs(
    f: &ConservedField,
    prim: &PrimField,
    coeffs: &TransportCoeffs,
    gas: &GasModel,
    tend: &mut [f64],
) -> Result<(), IntegrateError> {
    let grid = f.grid().clone();
    let ndim = grid.ndim();
    let dx = [grid.dx(0), grid.dx(1), grid.dx(2)];
    let stride_field = grid.padded_cells();

    for d in 0..ndim {
        let periodic = matches!(grid.boundary(d), Boundary::Periodic);
        let n = grid.n(d);
        let faces = n + 1;
        let tdims: Vec<usize> = (0..ndim).filter(|&t| t != d).collect();
        let (ta, tb) = (
            *tdims.first().unwrap_or(&((d + 1) % 3)),
            *tdims.get(1).unwrap_or(&((d + 2) % 3)),
        );
        let na = if tdims.is_empty() { 1 } else { grid.n(ta) } as isize;
        let nb = if tdims.len() < 2 { 1 } else { grid.n(tb) } as isize;
        let strides = [1usize, grid.padded(0), grid.padded(0) * grid.padded(1)];
        let stride_d = strides[d];
        let cell_at = |i: isize, a: isize, b: isize| -> usize {
            let mut co = [0isize; 3];
            co[d] = i;
            co[ta] = a;
            co[tb] = b;
            grid.index(co[0], co[1], co[2])
        };

        let nlines = (na * nb) as usize;
        let mut flux: Vec<[f64; 4]> = vec![[0.0; 4]; nlines * faces];
        let lines: Vec<usize> = (0..nlines).collect();
        lines.par_iter().zip(flux.par_chunks_mut(faces)).for_each(|(&line, fl)| {
            let a = line as isize % na;
            let b = line as isize / na;
            let solved = if periodic { n } else { faces };
            for fidx in 0..solved {
                let i = fidx as isize;
                let left = prim.state_at(cell_at(i - 1, a, b));
                let right = prim.state_at(cell_at(i, a, b));
                let mut stencil = ViscousFaceStencil {
                    axis: d,
                    left,
                    right,
                    transverse: [[left; 4]; 2],
                    tangent_axes: [ta, tb],
                    n_transverse: tdims.len(),
                };
                for (t, &td) in tdims.iter().enumerate() {
                    let (da, db) = if td == ta { (1isize, 0isize) } else { (0, 1) };
                    stencil.transverse[t] = [
                        prim.state_at(cell_at(i - 1, a - da, b - db)),
                        prim.state_at(cell_at(i - 1, a + da, b + db)),
                        prim.state_at(cell_at(i, a - da, b - db)),
                        prim.state_at(cell_at(i, a + da, b + db)),
                    ];
                }
                let fv = viscous_flux(&stencil, &dx, coeffs, gas);
                fl[fidx] = [fv.momentum[0], fv.momentum[1], fv.momentum[2], fv.energy];
            }
            if periodic {
                fl[n] = fl[0];
            }
        });

        // apply: tendency += +(F[i+1] - F[i]) / dx
        let inv_dx = 1.0 / dx[d];
        for b in 0..nb {
            for a in 0..na {
                let line = (b * na + a) as usize;
                let fl = &flux[line * faces..(line + 1) * faces];
                let base = cell_at(0, a, b);
                for i in 0..n {
                    let idx = base + i * stride_d;
                    for dd in 0..ndim {
                        tend[(1 + dd) * stride_field + idx] += (fl[i + 1][dd] - fl[i][dd]) * inv_dx;
                    }
                    tend[(1 + ndim) * stride_field + idx] += (fl[i + 1][3] - fl[i][3]) * inv_dx;
                }
            }
        }
    }
    Ok(())
}
