//! Characteristic-space reconstruction: the conserved stencil is projected
//! onto the eigenvectors of the Roe-averaged flux Jacobian face by face,
//! each field is reconstructed one-dimensionally, and the face values are
//! projected back.

use super::hyperbolic::{LineScratch, Sweep};
use super::{IntegrateError, SchemeConfig};
use crate::gas::{GasModel, PrimitiveState};
use crate::grid::CartesianGrid;
use crate::integrator::PrimField;

/// Left and right eigenvector matrices (rows of `l`, columns of `r`) of
/// the Euler flux Jacobian along `axis` at the Roe average of two states,
/// compressed to the active component set [rho, momenta.., rho E]. Wave
/// order: u-c, entropy, shears (active transverse dims), u+c.
pub fn roe_eigensystem(
    left: &PrimitiveState,
    right: &PrimitiveState,
    axis: usize,
    gas: &GasModel,
    ndim: usize,
) -> ([[f64; 5]; 5], [[f64; 5]; 5]) {
    let gamma = gas.gamma();
    let wl = left.density.sqrt();
    let wr = right.density.sqrt();
    let inv = 1.0 / (wl + wr);
    // Inactive dimensions carry no momentum in the conserved vector, so
    // their velocity components are masked out of the averages.
    let mut u = [0.0; 3];
    let mut q2 = 0.0;
    for d in 0..ndim {
        u[d] = (wl * left.velocity[d] + wr * right.velocity[d]) * inv;
        q2 += u[d] * u[d];
    }
    let ke = |s: &PrimitiveState| -> f64 {
        0.5 * s.density * (0..ndim).map(|d| s.velocity[d] * s.velocity[d]).sum::<f64>()
    };
    let el = left.pressure / (gamma - 1.0) + ke(left);
    let er = right.pressure / (gamma - 1.0) + ke(right);
    let hl = (el + left.pressure) / left.density;
    let hr = (er + right.pressure) / right.density;
    let h = (wl * hl + wr * hr) * inv;
    let c2 = (gamma - 1.0) * (h - 0.5 * q2);
    let c = c2.sqrt();
    let b1 = (gamma - 1.0) / c2;
    let b2 = 0.5 * b1 * q2;

    // transverse dims in ascending order
    let tdims: Vec<usize> = (0..ndim).filter(|&t| t != axis).collect();
    let un = u[axis];

    // full-space columns: [rho, m_axis, m_t.., rho E] mapped back to the
    // storage order [rho, m_0.., m_{ndim-1}, rho E]
    let ncomp = ndim + 2;
    let mut l = [[0.0; 5]; 5];
    let mut r = [[0.0; 5]; 5];

    let ecol = ncomp - 1;
    let ut = [
        if !tdims.is_empty() { u[tdims[0]] } else { 0.0 },
        if tdims.len() > 1 { u[tdims[1]] } else { 0.0 },
    ];

    // rows of l / columns of r carry coefficients on (rho, m_axis,
    // m_t1, m_t2, E); write them through the storage-order mapping
    fn put_l(
        l: &mut [[f64; 5]; 5],
        w: usize,
        axis: usize,
        tdims: &[usize],
        ecol: usize,
        rho_c: f64,
        mn: f64,
        mt: [f64; 2],
        e: f64,
    ) {
        l[w][0] = rho_c;
        l[w][1 + axis] = mn;
        for (t, &td) in tdims.iter().enumerate() {
            l[w][1 + td] = mt[t];
        }
        l[w][ecol] = e;
    }

    // wave 0: u - c
    put_l(&mut l, 0, axis, &tdims, ecol, 0.5 * (b2 + un / c), -0.5 * (b1 * un + 1.0 / c),
        [-0.5 * b1 * ut[0], -0.5 * b1 * ut[1]], 0.5 * b1);
    // wave 1: entropy
    put_l(&mut l, 1, axis, &tdims, ecol, 1.0 - b2, b1 * un, [b1 * ut[0], b1 * ut[1]], -b1);
    // shear waves
    for (t, &td) in tdims.iter().enumerate() {
        let w = 2 + t;
        l[w][0] = -ut[t];
        l[w][1 + td] = 1.0;
    }
    // wave ncomp-1: u + c
    put_l(&mut l, ncomp - 1, axis, &tdims, ecol, 0.5 * (b2 - un / c), 0.5 * (-b1 * un + 1.0 / c),
        [-0.5 * b1 * ut[0], -0.5 * b1 * ut[1]], 0.5 * b1);

    fn put_r(
        r: &mut [[f64; 5]; 5],
        w: usize,
        axis: usize,
        tdims: &[usize],
        ecol: usize,
        rho_c: f64,
        mn: f64,
        mt: [f64; 2],
        e: f64,
    ) {
        r[0][w] = rho_c;
        r[1 + axis][w] = mn;
        for (t, &td) in tdims.iter().enumerate() {
            r[1 + td][w] = mt[t];
        }
        r[ecol][w] = e;
    }

    put_r(&mut r, 0, axis, &tdims, ecol, 1.0, un - c, ut, h - un * c);
    put_r(&mut r, 1, axis, &tdims, ecol, 1.0, un, ut, 0.5 * q2);
    for (t, &td) in tdims.iter().enumerate() {
        let w = 2 + t;
        r[1 + td][w] = 1.0;
        r[ecol][w] = ut[t];
    }
    put_r(&mut r, ncomp - 1, axis, &tdims, ecol, 1.0, un + c, ut, h + un * c);

    (l, r)
}

/// Fills the scratch face arrays with physical (primitive-component) face
/// states obtained by characteristic-space reconstruction of the gathered
/// conserved line. Returns the number of scalar kernel calls.
#[allow(clippy::too_many_arguments)]
pub(super) fn char_face_states(
    scr: &mut LineScratch,
    cfg: &SchemeConfig,
    gas: &GasModel,
    prim: &PrimField,
    sweep: &Sweep,
    grid: &CartesianGrid,
    a: isize,
    b: isize,
) -> Result<u64, IntegrateError> {
    let ndim = grid.ndim();
    let ncomp = ndim + 2;
    let h = cfg.reconstruction.half_width() as isize;
    let width = cfg.reconstruction.width();
    let n = sweep.n as isize;
    let gamma1 = gas.gamma() - 1.0;
    let mut calls = 0u64;

    // char window for the two cells adjacent to each face
    let mut wbuf = vec![[0.0f64; 8]; ncomp];
    for fidx in 0..=(n as usize) {
        let fface = fidx as isize;
        let cl_idx = sweep.cell_index(grid, fface - 1, a, b);
        let cr_idx = sweep.cell_index(grid, fface, a, b);
        let pl = prim.state_at(cl_idx);
        let pr = prim.state_at(cr_idx);
        let (lmat, rmat) = roe_eigensystem(&pl, &pr, sweep.d, gas, ndim);

        // project cells f-1-h .. f+h (2h+2 of them); line coordinate of
        // cell i is i + h + 1
        let ncells = (2 * h + 2) as usize;
        for w in 0..ncomp {
            for j in 0..ncells {
                let cell = fface - 1 - h + j as isize;
                let li = (cell + h + 1) as usize;
                let mut acc = 0.0;
                for c in 0..ncomp {
                    acc += lmat[w][c] * scr.cons[c][li];
                }
                wbuf[w][j] = acc;
            }
        }
        // left state: cell f-1's stencil (first `width` entries), right
        // state: cell f's stencil (shifted by one)
        let mut char_l = [0.0f64; 5];
        let mut char_r = [0.0f64; 5];
        for w in 0..ncomp {
            char_l[w] = cfg.reconstruction.face_pair(&wbuf[w][..width], &cfg.weno).left;
            char_r[w] = cfg.reconstruction.face_pair(&wbuf[w][1..width + 1], &cfg.weno).right;
            calls += 2;
        }
        // back to conserved, then primitive components
        for (side, ch) in [(0usize, &char_l), (1, &char_r)] {
            let mut cons = [0.0f64; 5];
            for (row, cv) in cons.iter_mut().enumerate().take(ncomp) {
                let mut acc = 0.0;
                for w in 0..ncomp {
                    acc += rmat[row][w] * ch[w];
                }
                *cv = acc;
            }
            let rho = cons[0];
            if !(rho > 0.0) {
                return Err(IntegrateError::State {
                    stage: 0,
                    source: crate::gas::StateError::NonPositiveDensity {
                        density: rho,
                        context: format!("face {fidx} of a characteristic sweep along dim {}", sweep.d),
                    },
                });
            }
            let mut ke = 0.0;
            for dd in 0..ndim {
                let v = cons[1 + dd] / rho;
                ke += v * v;
                if side == 0 {
                    scr.face_l[1 + dd][fidx] = v;
                } else {
                    scr.face_r[1 + dd][fidx] = v;
                }
            }
            let internal = cons[ncomp - 1] - 0.5 * rho * ke;
            if !(internal > 0.0) {
                return Err(IntegrateError::State {
                    stage: 0,
                    source: crate::gas::StateError::NonPositiveInternalEnergy {
                        energy: internal,
                        density: rho,
                        momentum: [cons[1], cons[2], cons[3]],
                        context: format!("face {fidx} of a characteristic sweep along dim {}", sweep.d),
                    },
                });
            }
            let p = gamma1 * internal;
            if side == 0 {
                scr.face_l[0][fidx] = rho;
                scr.face_l[1 + ndim][fidx] = p;
            } else {
                scr.face_r[0][fidx] = rho;
                scr.face_r[1 + ndim][fidx] = p;
            }
        }
    }
    Ok(calls)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gas::primitive_from_rho_u_p;

    #[test]
    fn eigensystem_inverse_pair() {
        let gas = GasModel::from_gamma_cp(1.4, 1173.0, 0.71).unwrap();
        for ndim in 1..=3 {
            for axis in 0..ndim {
                let l_state = primitive_from_rho_u_p(1.3, [0.4, -0.2, 0.7], 2.1, &gas);
                let r_state = primitive_from_rho_u_p(0.6, [-0.1, 0.5, -0.3], 1.4, &gas);
                let (l, r) = roe_eigensystem(&l_state, &r_state, axis, &gas, ndim);
                let ncomp = ndim + 2;
                for i in 0..ncomp {
                    for j in 0..ncomp {
                        let mut acc = 0.0;
                        for k in 0..ncomp {
                            acc += l[i][k] * r[k][j];
                        }
                        let want = if i == j { 1.0 } else { 0.0 };
                        assert!(
                            (acc - want).abs() < 1e-12,
                            "ndim {ndim} axis {axis}: (L R)[{i}][{j}] = {acc}"
                        );
                    }
                }
            }
        }
    }
}
