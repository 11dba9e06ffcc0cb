//! Error norms, convergence-rate fitting, turbulence diagnostics and
//! cross-resolution field comparison.

use crate::field::{ConservedField, FieldScalar};
use crate::spectral;
use rustfft::num_complex::Complex;
use thiserror::Error;

#[derive(Error, Debug, PartialEq)]
pub enum AnalysisError {
    #[error("grids do not match: {0}")]
    GridMismatch(String),
    #[error("need at least two samples to fit an order")]
    TooFewSamples,
    #[error("resolutions must be strictly increasing")]
    UnorderedSamples,
    #[error("errors must be positive to fit a slope, got {0}")]
    NonPositiveError(f64),
    #[error("resolution {fine} not divisible by coarsening factor {factor}")]
    BadFactor { fine: usize, factor: usize },
}

/// (resolution, error) pairs and the least-squares slope of
/// log(error) against log(1/N).
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport {
    pub samples: Vec<(usize, f64)>,
    pub fitted_order: f64,
    /// RMS residual of the fit in log space.
    pub fit_residual: f64,
}

/// Fits the convergence order of (N, error) samples.
pub fn fit_order(samples: &[(usize, f64)]) -> Result<ConvergenceReport, AnalysisError> {
    if samples.len() < 2 {
        return Err(AnalysisError::TooFewSamples);
    }
    for w in samples.windows(2) {
        if w[1].0 <= w[0].0 {
            return Err(AnalysisError::UnorderedSamples);
        }
    }
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .map(|&(n, e)| {
            if e > 0.0 {
                Ok(((n as f64).ln(), e.ln()))
            } else {
                Err(AnalysisError::NonPositiveError(e))
            }
        })
        .collect::<Result<_, _>>()?;
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let intercept = (sy - slope * sx) / n;
    let residual = (pts
        .iter()
        .map(|p| {
            let r = p.1 - (slope * p.0 + intercept);
            r * r
        })
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(ConvergenceReport { samples: samples.to_vec(), fitted_order: -slope, fit_residual: residual })
}

/// Mean absolute difference of two equally sized scalar fields.
pub fn l1_error(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "fields must have equal size");
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).abs()).sum::<f64>() / a.len() as f64
}

/// L1 error of a derived scalar between two fields on identical grids.
pub fn l1_error_fields(
    a: &ConservedField,
    b: &ConservedField,
    which: FieldScalar,
) -> Result<f64, AnalysisError> {
    if a.grid().ndim() != b.grid().ndim()
        || (0..3).any(|d| a.grid().n(d) != b.grid().n(d))
        || (0..a.grid().ndim()).any(|d| {
            (a.grid().lo(d) - b.grid().lo(d)).abs() > 1e-12
                || (a.grid().hi(d) - b.grid().hi(d)).abs() > 1e-12
        })
    {
        return Err(AnalysisError::GridMismatch(format!(
            "{:?} cells vs {:?}",
            (0..3).map(|d| a.grid().n(d)).collect::<Vec<_>>(),
            (0..3).map(|d| b.grid().n(d)).collect::<Vec<_>>()
        )));
    }
    Ok(l1_error(&a.interior_scalar(which), &b.interior_scalar(which)))
}

/// Conservative restriction of an interior scalar: each coarse cell is the
/// mean of its factor^ndim fine children. `nf` are the fine interior
/// counts (inactive dims 1).
pub fn coarsen_scalar(fine: &[f64], nf: [usize; 3], ndim: usize, factor: usize) -> Result<Vec<f64>, AnalysisError> {
    for d in 0..ndim {
        if nf[d] % factor != 0 {
            return Err(AnalysisError::BadFactor { fine: nf[d], factor });
        }
    }
    let nc = [
        if ndim >= 1 { nf[0] / factor } else { 1 },
        if ndim >= 2 { nf[1] / factor } else { 1 },
        if ndim >= 3 { nf[2] / factor } else { 1 },
    ];
    let fz = if ndim >= 3 { factor } else { 1 };
    let fy = if ndim >= 2 { factor } else { 1 };
    let inv = 1.0 / (factor.pow(ndim as u32)) as f64;
    let mut out = vec![0.0; nc[0] * nc[1] * nc[2]];
    for cz in 0..nc[2] {
        for cy in 0..nc[1] {
            for cx in 0..nc[0] {
                let mut acc = 0.0;
                for jz in 0..fz {
                    for jy in 0..fy {
                        for jx in 0..factor {
                            let ix = cx * factor + jx;
                            let iy = cy * fy + jy;
                            let iz = cz * fz + jz;
                            acc += fine[(iz * nf[1] + iy) * nf[0] + ix];
                        }
                    }
                }
                out[(cz * nc[1] + cy) * nc[0] + cx] = acc * inv;
            }
        }
    }
    Ok(out)
}

/// Conservative restriction of a whole field onto a factor-coarser grid of
/// the same extent and boundaries; ghosts are refilled.
pub fn coarsen_field(fine: &ConservedField, factor: usize) -> Result<ConservedField, AnalysisError> {
    let grid = fine.grid();
    let ndim = grid.ndim();
    let nf = [grid.n(0), grid.n(1), grid.n(2)];
    let nc = [
        nf[0] / factor.max(1),
        if ndim >= 2 { nf[1] / factor } else { 1 },
        if ndim >= 3 { nf[2] / factor } else { 1 },
    ];
    for d in 0..ndim {
        if nf[d] % factor != 0 {
            return Err(AnalysisError::BadFactor { fine: nf[d], factor });
        }
    }
    let coarse_grid = crate::grid::CartesianGrid::new(
        ndim,
        nc,
        [grid.lo(0), grid.lo(1), grid.lo(2)],
        [grid.hi(0), grid.hi(1), grid.hi(2)],
        grid.ghost(),
        [grid.boundary(0), grid.boundary(1), grid.boundary(2)],
    )
    .expect("coarse grid parameters derive from a valid fine grid");
    let mut out = ConservedField::zeros(coarse_grid);
    out.time = fine.time;
    for c in 0..grid.ncomp() {
        let data = coarsen_scalar(&fine.interior_scalar(FieldScalar::Conserved(c)), nf, ndim, factor)?;
        let mut i = 0;
        for iz in 0..out.grid().n(2) as isize {
            for iy in 0..out.grid().n(1) as isize {
                for ix in 0..out.grid().n(0) as isize {
                    out.set(c, ix, iy, iz, data[i]);
                    i += 1;
                }
            }
        }
    }
    crate::integrator::fill_ghosts(&mut out);
    Ok(out)
}

/// Volume average of u.u/2 over the interior.
pub fn kinetic_energy(f: &ConservedField) -> f64 {
    let ndim = f.grid().ndim();
    let mut acc = 0.0;
    f.for_each_interior(|ix, iy, iz| {
        let rho = f.get(0, ix, iy, iz);
        let mut q2 = 0.0;
        for d in 0..ndim {
            let u = f.get(1 + d, ix, iy, iz) / rho;
            q2 += u * u;
        }
        acc += 0.5 * q2;
    });
    acc / f.grid().interior_cells() as f64
}

/// Interior velocity components as flat scalars (x fastest).
pub fn velocity_components(f: &ConservedField) -> Vec<Vec<f64>> {
    (0..f.grid().ndim()).map(|d| f.interior_scalar(FieldScalar::Velocity(d))).collect()
}

/// Vorticity via spectral differentiation on a periodic cube: exact for
/// band-limited fields. Returns the three components for ndim = 3 or the
/// single z component for ndim = 2.
pub fn vorticity_spectral(f: &ConservedField) -> Vec<Vec<f64>> {
    let grid = f.grid();
    let ndim = grid.ndim();
    let n = grid.n(0);
    let length = grid.hi(0) - grid.lo(0);
    let scale = 2.0 * std::f64::consts::PI / length;
    match ndim {
        3 => {
            let u: Vec<Vec<Complex<f64>>> = (0..3)
                .map(|d| spectral::forward_real(&f.interior_scalar(FieldScalar::Velocity(d)), n))
                .collect();
            let mut w: [Vec<Complex<f64>>; 3] = [
                vec![Complex::default(); n * n * n],
                vec![Complex::default(); n * n * n],
                vec![Complex::default(); n * n * n],
            ];
            for iz in 0..n {
                let kz = spectral::wavenumber(iz, n) as f64 * scale;
                for iy in 0..n {
                    let ky = spectral::wavenumber(iy, n) as f64 * scale;
                    for ix in 0..n {
                        let kx = spectral::wavenumber(ix, n) as f64 * scale;
                        let i = (iz * n + iy) * n + ix;
                        let im = Complex::new(0.0, 1.0);
                        // omega = i k x u
                        w[0][i] = im * (ky * u[2][i] - kz * u[1][i]);
                        w[1][i] = im * (kz * u[0][i] - kx * u[2][i]);
                        w[2][i] = im * (kx * u[1][i] - ky * u[0][i]);
                    }
                }
            }
            let [wx, wy, wz] = w;
            vec![
                spectral::inverse_to_real(wx, n),
                spectral::inverse_to_real(wy, n),
                spectral::inverse_to_real(wz, n),
            ]
        }
        2 => {
            let ux = f.interior_scalar(FieldScalar::Velocity(0));
            let uy = f.interior_scalar(FieldScalar::Velocity(1));
            let mut su: Vec<Complex<f64>> = ux.iter().map(|&v| Complex::new(v, 0.0)).collect();
            let mut sv: Vec<Complex<f64>> = uy.iter().map(|&v| Complex::new(v, 0.0)).collect();
            spectral::fft2_inplace(&mut su, n, false);
            spectral::fft2_inplace(&mut sv, n, false);
            let mut w = vec![Complex::default(); n * n];
            for iy in 0..n {
                let ky = spectral::wavenumber(iy, n) as f64 * scale;
                for ix in 0..n {
                    let kx = spectral::wavenumber(ix, n) as f64 * scale;
                    let i = iy * n + ix;
                    w[i] = Complex::new(0.0, 1.0) * (kx * sv[i] - ky * su[i]);
                }
            }
            spectral::fft2_inplace(&mut w, n, true);
            vec![w.into_iter().map(|c| c.re).collect()]
        }
        _ => vec![vec![0.0; n]],
    }
}

/// Volume average of omega.omega.
pub fn enstrophy(f: &ConservedField) -> f64 {
    let w = vorticity_spectral(f);
    let cells = f.grid().interior_cells() as f64;
    w.iter().map(|c| c.iter().map(|v| v * v).sum::<f64>()).sum::<f64>() / cells
}

/// Shell-binned spectral energy density: shells k = 0..n/2 with modes
/// accumulated by rounded |k|. Corner modes beyond the Nyquist sphere fold
/// into the top shell, so the shell sum always equals the volume-averaged
/// (1/2) sum of squares of the input (discrete Parseval).
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumBins {
    pub values: Vec<f64>,
}

impl SpectrumBins {
    pub fn shells(&self) -> usize {
        self.values.len()
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Shell with the largest energy.
    pub fn argmax(&self) -> usize {
        self.values
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .map(|(k, _)| k)
            .unwrap_or(0)
    }
}

/// Shell spectrum of a set of scalar components on an n^3 periodic cube:
/// (1/2) |q_hat|^2 summed over components, binned over integer shells.
pub fn shell_spectrum(components: &[&[f64]], n: usize) -> SpectrumBins {
    let kmax = n / 2;
    let mut values = vec![0.0; kmax + 1];
    for comp in components {
        let spec = spectral::forward_real(comp, n);
        for iz in 0..n {
            let kz = spectral::wavenumber(iz, n) as f64;
            for iy in 0..n {
                let ky = spectral::wavenumber(iy, n) as f64;
                for ix in 0..n {
                    let kx = spectral::wavenumber(ix, n) as f64;
                    let kmag = (kx * kx + ky * ky + kz * kz).sqrt();
                    let shell = (kmag.round() as usize).min(kmax);
                    values[shell] += 0.5 * spec[(iz * n + iy) * n + ix].norm_sqr();
                }
            }
        }
    }
    SpectrumBins { values }
}

/// Largest |k . u_hat| over all modes of a 3D periodic velocity field;
/// zero (to rounding) for solenoidal fields.
pub fn max_spectral_divergence(f: &ConservedField) -> f64 {
    let n = f.grid().n(0);
    let v = velocity_components(f);
    let spec: Vec<Vec<Complex<f64>>> =
        v.iter().map(|c| spectral::forward_real(c, n)).collect();
    let mut max_div: f64 = 0.0;
    for iz in 0..n {
        let kz = spectral::wavenumber(iz, n) as f64;
        for iy in 0..n {
            let ky = spectral::wavenumber(iy, n) as f64;
            for ix in 0..n {
                let kx = spectral::wavenumber(ix, n) as f64;
                let i = (iz * n + iy) * n + ix;
                let div = spec[0][i] * kx + spec[1][i] * ky + spec[2][i] * kz;
                max_div = max_div.max(div.norm());
            }
        }
    }
    max_div
}

/// Shell spectrum of the velocity field of a 3D run.
pub fn velocity_shell_spectrum(f: &ConservedField) -> SpectrumBins {
    let v = velocity_components(f);
    let refs: Vec<&[f64]> = v.iter().map(|c| c.as_slice()).collect();
    shell_spectrum(&refs, f.grid().n(0))
}

/// Shell spectrum of the vorticity field of a 3D run.
pub fn vorticity_shell_spectrum(f: &ConservedField) -> SpectrumBins {
    let w = vorticity_spectral(f);
    let refs: Vec<&[f64]> = w.iter().map(|c| c.as_slice()).collect();
    shell_spectrum(&refs, f.grid().n(0))
}

/// Time series of volume-averaged turbulence diagnostics.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TurbulenceSeries {
    /// Times in eddy-turnover units.
    pub times: Vec<f64>,
    pub kinetic_energy: Vec<f64>,
    pub enstrophy: Vec<f64>,
}

impl TurbulenceSeries {
    pub fn push(&mut self, t_over_tau: f64, ke: f64, ens: f64) {
        if let Some(&last) = self.times.last() {
            assert!(t_over_tau > last, "sample times must increase");
        }
        self.times.push(t_over_tau);
        self.kinetic_energy.push(ke);
        self.enstrophy.push(ens);
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cases::{standard_gas, HitMasterField, HitParams};
    use crate::gas::{conserved_from_primitive, primitive_from_rho_u_p};
    use crate::grid::CartesianGrid;

    #[test]
    fn l1_basics() {
        let a = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(l1_error(&a, &a), 0.0);
        let b = [1.5, 2.5, 3.5, 4.5];
        assert!((l1_error(&a, &b) - 0.5).abs() < 1e-15);
        let mut c = a;
        c[2] += 2.0;
        assert!((l1_error(&a, &c) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn coarsen_examples() {
        let fine = [1.0, 3.0, 5.0, 7.0];
        let coarse = coarsen_scalar(&fine, [4, 1, 1], 1, 2).unwrap();
        assert_eq!(coarse, vec![2.0, 6.0]);
        // integral preserved: sum * dx matches
        let sum_f: f64 = fine.iter().sum::<f64>() * 0.25;
        let sum_c: f64 = coarse.iter().sum::<f64>() * 0.5;
        assert!((sum_f - sum_c).abs() < 1e-14);
        let uniform = vec![3.3; 16];
        let c = coarsen_scalar(&uniform, [4, 4, 1], 2, 2).unwrap();
        assert!(c.iter().all(|&v| (v - 3.3).abs() < 1e-15));
        assert!(coarsen_scalar(&fine, [4, 1, 1], 1, 3).is_err());
    }

    #[test]
    fn fit_order_examples() {
        let r = fit_order(&[(64, 1e-2), (128, 2.5e-3), (256, 6.25e-4)]).unwrap();
        assert!((r.fitted_order - 2.0).abs() < 1e-12);
        assert!(r.fit_residual < 1e-12);
        let r = fit_order(&[(64, 1.0), (128, 0.5)]).unwrap();
        assert!((r.fitted_order - 1.0).abs() < 1e-12);
        // scale invariance: multiplying all errors leaves the slope alone
        let r2 = fit_order(&[(64, 7.0), (128, 3.5)]).unwrap();
        assert!((r2.fitted_order - r.fitted_order).abs() < 1e-12);
        assert!(fit_order(&[(64, 1.0)]).is_err());
        assert!(fit_order(&[(64, 1.0), (32, 0.5)]).is_err());
        assert!(fit_order(&[(64, 1.0), (128, 0.0)]).is_err());
    }

    fn uniform_flow_field(n: usize, vel: [f64; 3]) -> crate::field::ConservedField {
        let gas = standard_gas();
        let grid = CartesianGrid::periodic_cube(3, n, 0.0, 2.0 * std::f64::consts::PI, 2).unwrap();
        let mut f = crate::field::ConservedField::zeros(grid);
        let s = conserved_from_primitive(&primitive_from_rho_u_p(1.2, vel, 1.0e5, &gas), &gas).unwrap();
        f.for_each_interior(|ix, iy, iz| {
            // closure needs mutable capture; set below instead
            let _ = (ix, iy, iz);
        });
        for iz in 0..n as isize {
            for iy in 0..n as isize {
                for ix in 0..n as isize {
                    f.set_state(ix, iy, iz, &s);
                }
            }
        }
        crate::integrator::fill_ghosts(&mut f);
        f
    }

    #[test]
    fn kinetic_energy_uniform() {
        let f = uniform_flow_field(8, [3.0, 4.0, 0.0]);
        assert!((kinetic_energy(&f) - 12.5).abs() < 1e-10);
        assert!(enstrophy(&f) < 1e-18);
    }

    #[test]
    fn vorticity_single_mode() {
        // u = (0, sin x, 0) -> omega = (0, 0, cos x)
        let gas = standard_gas();
        let n = 16;
        let grid = CartesianGrid::periodic_cube(3, n, 0.0, 2.0 * std::f64::consts::PI, 2).unwrap();
        let mut f = crate::field::ConservedField::zeros(grid);
        for iz in 0..n as isize {
            for iy in 0..n as isize {
                for ix in 0..n as isize {
                    let x = f.grid().cell_center(0, ix);
                    let s = conserved_from_primitive(
                        &primitive_from_rho_u_p(1.0, [0.0, x.sin(), 0.0], 1.0e5, &gas),
                        &gas,
                    )
                    .unwrap();
                    f.set_state(ix, iy, iz, &s);
                }
            }
        }
        crate::integrator::fill_ghosts(&mut f);
        let w = vorticity_spectral(&f);
        let mut i = 0;
        for _iz in 0..n {
            for _iy in 0..n {
                for ix in 0..n {
                    let x = f.grid().cell_center(0, ix as isize);
                    assert!((w[2][i] - x.cos()).abs() < 1e-12, "wz({x}) = {}", w[2][i]);
                    assert!(w[0][i].abs() < 1e-12 && w[1][i].abs() < 1e-12);
                    i += 1;
                }
            }
        }
        // curl is divergence-free to spectral precision
        let refs: Vec<&[f64]> = w.iter().map(|c| c.as_slice()).collect();
        let spec: Vec<Vec<rustfft::num_complex::Complex<f64>>> =
            refs.iter().map(|c| crate::spectral::forward_real(c, n)).collect();
        for iz in 0..n {
            for iy in 0..n {
                for ix in 0..n {
                    let kx = crate::spectral::wavenumber(ix, n) as f64;
                    let ky = crate::spectral::wavenumber(iy, n) as f64;
                    let kz = crate::spectral::wavenumber(iz, n) as f64;
                    let i = (iz * n + iy) * n + ix;
                    let div = spec[0][i] * kx + spec[1][i] * ky + spec[2][i] * kz;
                    assert!(div.norm() < 1e-12);
                }
            }
        }
        // enstrophy of a unit cosine mode: mean cos^2 = 1/2
        assert!((enstrophy(&f) - 0.5).abs() < 1e-12);
        // Parseval cross-check against the shell spectrum of omega
        let bins = vorticity_shell_spectrum(&f);
        assert!((bins.total() - 0.25).abs() < 1e-12, "total {}", bins.total());
        assert_eq!(bins.argmax(), 1);
    }

    #[test]
    fn shell_spectrum_single_mode_and_parseval() {
        let n = 16;
        let mut field = vec![0.0; n * n * n];
        for iz in 0..n {
            for iy in 0..n {
                for ix in 0..n {
                    let x = 2.0 * std::f64::consts::PI * ix as f64 / n as f64;
                    field[(iz * n + iy) * n + ix] = (5.0 * x).sin();
                }
            }
        }
        let bins = shell_spectrum(&[&field], n);
        assert_eq!(bins.shells(), n / 2 + 1);
        assert_eq!(bins.argmax(), 5);
        let off_shell: f64 = bins.values.iter().enumerate().filter(|(k, _)| *k != 5).map(|(_, v)| v).sum();
        assert!(off_shell < 1e-12);
        // Parseval on a deterministic pseudo-random field
        let mut state = 1u64;
        let rand_field: Vec<f64> = (0..n * n * n)
            .map(|_| {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
            })
            .collect();
        let bins = shell_spectrum(&[&rand_field], n);
        let mean_half_sq = 0.5 * rand_field.iter().map(|v| v * v).sum::<f64>() / rand_field.len() as f64;
        assert!((bins.total() - mean_half_sq).abs() < 1e-10 * mean_half_sq);
    }

    #[test]
    fn hit_initial_spectrum_peaks_at_k0_and_is_solenoidal() {
        let gas = standard_gas();
        let params = HitParams { master_n: 64, ..Default::default() };
        let master = HitMasterField::generate(64, 4, params.seed).unwrap();
        let init = crate::cases::init_hit(64, &params, &gas, 4, &master).unwrap();
        let f = &init.field;
        let bins = velocity_shell_spectrum(f);
        assert_eq!(bins.argmax(), 4, "spectrum {:?}", &bins.values[..10]);
        // spectral divergence of the initial velocity
        let v = velocity_components(f);
        let n = 64;
        let spec: Vec<Vec<rustfft::num_complex::Complex<f64>>> =
            v.iter().map(|c| crate::spectral::forward_real(c, n)).collect();
        let mut max_div: f64 = 0.0;
        for iz in 0..n {
            for iy in 0..n {
                for ix in 0..n {
                    let kx = crate::spectral::wavenumber(ix, n) as f64;
                    let ky = crate::spectral::wavenumber(iy, n) as f64;
                    let kz = crate::spectral::wavenumber(iz, n) as f64;
                    let i = (iz * n + iy) * n + ix;
                    let div = spec[0][i] * kx + spec[1][i] * ky + spec[2][i] * kz;
                    max_div = max_div.max(div.norm());
                }
            }
        }
        let kmax = (n / 2) as f64;
        assert!(max_div < 1e-10 * kmax * init.u_rms0, "max divergence {max_div}");
        // kinetic energy equals 3 u_rms^2 / 2
        let ke = kinetic_energy(f);
        assert!((ke - 1.5 * init.u_rms0 * init.u_rms0).abs() < 1e-10 * ke);
        // realized shell spectrum tracks the target shape within a factor
        // of two over 2 <= k <= 2 k0
        let target = |k: f64| k.powi(4) * (-2.0 * (k / 4.0) * (k / 4.0)).exp();
        let band: Vec<usize> = (2..=8).collect();
        let norm_got: f64 = band.iter().map(|&k| bins.values[k]).sum();
        let norm_want: f64 = band.iter().map(|&k| target(k as f64)).sum();
        for &k in &band {
            let got = bins.values[k] / norm_got;
            let want = target(k as f64) / norm_want;
            let ratio = got / want;
            assert!((0.5..=2.0).contains(&ratio), "shell {k}: ratio {ratio}");
        }
        // re-projection changes nothing: the field is already solenoidal
        let mut rms_change: f64 = 0.0;
        let mut reproj = spec.clone();
        for iz in 0..n {
            for iy in 0..n {
                for ix in 0..n {
                    let kx = crate::spectral::wavenumber(ix, n) as f64;
                    let ky = crate::spectral::wavenumber(iy, n) as f64;
                    let kz = crate::spectral::wavenumber(iz, n) as f64;
                    let k2 = kx * kx + ky * ky + kz * kz;
                    if k2 == 0.0 {
                        continue;
                    }
                    let i = (iz * n + iy) * n + ix;
                    let dot = (reproj[0][i] * kx + reproj[1][i] * ky + reproj[2][i] * kz) / k2;
                    reproj[0][i] -= dot * kx;
                    reproj[1][i] -= dot * ky;
                    reproj[2][i] -= dot * kz;
                }
            }
        }
        for c in 0..3 {
            for i in 0..n * n * n {
                rms_change = rms_change.max((reproj[c][i] - spec[c][i]).norm());
            }
        }
        assert!(rms_change < 1e-13 * init.u_rms0, "reprojection changed {rms_change}");
    }

    #[test]
    fn turbulence_series_ordering() {
        let mut s = TurbulenceSeries::default();
        s.push(0.0, 1.0, 2.0);
        s.push(0.5, 0.9, 1.9);
        assert_eq!(s.len(), 2);
    }
}
