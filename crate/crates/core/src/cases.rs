//! Initial conditions and physical parameters of the three benchmark
//! problems: an advected smooth vortex, the shock/entropy-wave interaction
//! tube, and decaying compressible isotropic turbulence.

use crate::field::ConservedField;
use crate::gas::{
    conserved_from_primitive, primitive_from_rho_u_p, GasModel, PrimitiveState, TransportCoeffs,
};
use crate::grid::{Boundary, CartesianGrid};
use crate::spectral;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rustfft::num_complex::Complex;
use thiserror::Error;

#[derive(Error, Debug)]
pub enum CaseError {
    #[error("grid error: {0}")]
    Grid(#[from] crate::grid::GridError),
    #[error("state error: {0}")]
    State(#[from] crate::gas::StateError),
    #[error("{0}")]
    Invalid(String),
}

/// The single gas used by every benchmark: gamma = 1.4, cp = 1173 J/(kg K),
/// Pr = 0.71. Only cp is documented for the turbulence case; the gas
/// constant follows as cp (gamma - 1) / gamma and is reused everywhere for
/// internal consistency.
pub fn standard_gas() -> GasModel {
    GasModel::from_gamma_cp(1.4, 1173.0, 0.71).expect("reference gas parameters are valid")
}

/// How cell values are produced from the analytic initial condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InitQuadrature {
    /// Point values at cell centres (consistent with midpoint quadrature).
    CellCenter,
    /// Tensor-product 3-point Gauss cell averages of the conserved
    /// variables (preserves the design order of the Gauss flux quadrature
    /// on smooth data).
    Gauss3,
}

// ---------------------------------------------------------------- vortex

/// Gaussian vortex superimposed on a uniform diagonal stream.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VortexParams {
    /// Domain side, m.
    pub side: f64,
    /// Vortex strength Gamma, m^2/s.
    pub strength: f64,
    /// Vortex radius, m.
    pub radius: f64,
    /// Background velocity along x and y, m/s.
    pub u0: f64,
    /// Uniform temperature, K.
    pub t_ref: f64,
    /// Far-field pressure, Pa.
    pub p_ref: f64,
}

impl Default for VortexParams {
    fn default() -> Self {
        Self {
            side: 0.01,
            strength: 0.11,
            radius: 0.001,
            u0: 100.0,
            t_ref: 300.0,
            p_ref: 101_320.0,
        }
    }
}

/// Analytic vortex state at a point. The vortex sits at the domain centre;
/// its stream function is `Gamma exp(-r^2 / (2 R^2))` and the pressure
/// deficit uses the ambient sound speed at (t_ref, p_ref).
pub fn vortex_primitive(x: f64, y: f64, p: &VortexParams, gas: &GasModel) -> PrimitiveState {
    let xc = 0.5 * p.side;
    let yc = 0.5 * p.side;
    let dx = x - xc;
    let dy = y - yc;
    let r2 = dx * dx + dy * dy;
    let rv2 = p.radius * p.radius;
    let psi_factor = p.strength / rv2 * (-0.5 * r2 / rv2).exp();
    let u = p.u0 - dy * psi_factor;
    let v = p.u0 + dx * psi_factor;
    let c_ref = (gas.gamma() * gas.r_specific() * p.t_ref).sqrt();
    let mach_term = p.strength / (c_ref * p.radius);
    let pres = p.p_ref * (-0.5 * gas.gamma() * mach_term * mach_term * (-r2 / rv2).exp()).exp();
    let rho = pres / (gas.r_specific() * p.t_ref);
    PrimitiveState { density: rho, velocity: [u, v, 0.0], pressure: pres, temperature: p.t_ref }
}

/// Initializes the 2D periodic vortex field at resolution n x n.
pub fn init_vortex(
    n: usize,
    params: &VortexParams,
    gas: &GasModel,
    ghost: usize,
    quad: InitQuadrature,
) -> Result<ConservedField, CaseError> {
    let grid = CartesianGrid::periodic_cube(2, n, 0.0, params.side, ghost)?;
    let mut f = ConservedField::zeros(grid);
    fill_analytic_2d(&mut f, quad, |x, y| {
        conserved_from_primitive(&vortex_primitive(x, y, params, gas), gas)
            .expect("vortex state valid")
    });
    crate::integrator::fill_ghosts(&mut f);
    Ok(f)
}

fn fill_analytic_2d(
    f: &mut ConservedField,
    quad: InitQuadrature,
    state_at: impl Fn(f64, f64) -> crate::gas::ConservedState,
) {
    let grid = f.grid().clone();
    let (dx, dy) = (grid.dx(0), grid.dx(1));
    // 3-point Gauss nodes/weights on [-1/2, 1/2]
    let gx = 0.5 * (0.6f64).sqrt();
    let nodes = [-gx, 0.0, gx];
    let wts = [5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0];
    for iy in 0..grid.n(1) as isize {
        for ix in 0..grid.n(0) as isize {
            let xc = grid.cell_center(0, ix);
            let yc = grid.cell_center(1, iy);
            let state = match quad {
                InitQuadrature::CellCenter => state_at(xc, yc),
                InitQuadrature::Gauss3 => {
                    let mut acc = [0.0f64; 5];
                    for (nx, wx) in nodes.iter().zip(wts.iter()) {
                        for (ny, wy) in nodes.iter().zip(wts.iter()) {
                            let s = state_at(xc + nx * dx, yc + ny * dy);
                            let w = wx * wy;
                            acc[0] += w * s.density;
                            acc[1] += w * s.momentum[0];
                            acc[2] += w * s.momentum[1];
                            acc[3] += w * s.momentum[2];
                            acc[4] += w * s.total_energy;
                        }
                    }
                    crate::gas::ConservedState {
                        density: acc[0],
                        momentum: [acc[1], acc[2], acc[3]],
                        total_energy: acc[4],
                    }
                }
            };
            f.set_state(ix, iy, 0, &state);
        }
    }
}

// ------------------------------------------------------------- Shu-Osher

/// Shock running into a sinusoidal entropy field on [0, 10].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShuOsherParams {
    pub domain: (f64, f64),
    pub jump_position: f64,
    /// Post-shock state (density, velocity, pressure).
    pub left_state: (f64, f64, f64),
    /// Pre-shock density rho(x) = 1 + amplitude sin(wavenumber x).
    pub amplitude: f64,
    pub wavenumber: f64,
    pub t_end: f64,
}

impl Default for ShuOsherParams {
    fn default() -> Self {
        Self {
            domain: (0.0, 10.0),
            jump_position: 1.0,
            left_state: (3.857143, 2.629369, 10.3333),
            amplitude: 0.2,
            wavenumber: 5.0,
            t_end: 1.2,
        }
    }
}

/// Analytic initial state at a point.
pub fn shu_osher_primitive(x: f64, p: &ShuOsherParams, gas: &GasModel) -> PrimitiveState {
    if x <= p.jump_position {
        let (rho, u, pres) = p.left_state;
        primitive_from_rho_u_p(rho, [u, 0.0, 0.0], pres, gas)
    } else {
        let rho = 1.0 + p.amplitude * (p.wavenumber * x).sin();
        primitive_from_rho_u_p(rho, [0.0; 3], 1.0, gas)
    }
}

/// Initializes the 1D field, Dirichlet inflow on the left and zero-gradient
/// outflow on the right. Cell values are point evaluations at the centres
/// in every quadrature mode (the profile is discontinuous).
pub fn init_shu_osher(
    n: usize,
    params: &ShuOsherParams,
    gas: &GasModel,
    ghost: usize,
) -> Result<ConservedField, CaseError> {
    let (rho, u, pres) = params.left_state;
    let left =
        conserved_from_primitive(&primitive_from_rho_u_p(rho, [u, 0.0, 0.0], pres, gas), gas)?;
    let grid = CartesianGrid::new(
        1,
        [n, 1, 1],
        [params.domain.0, 0.0, 0.0],
        [params.domain.1, 1.0, 1.0],
        ghost,
        [Boundary::InflowOutflow { left }, Boundary::Periodic, Boundary::Periodic],
    )?;
    let mut f = ConservedField::zeros(grid);
    for ix in 0..f.grid().n(0) as isize {
        let x = f.grid().cell_center(0, ix);
        let s = conserved_from_primitive(&shu_osher_primitive(x, params, gas), gas)?;
        f.set_state(ix, 0, 0, &s);
    }
    crate::integrator::fill_ghosts(&mut f);
    Ok(f)
}

// ------------------------------------------------------------------ HIT

/// Decaying compressible homogeneous isotropic turbulence on [0, 2 pi)^3.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HitParams {
    /// Initial turbulent Mach number.
    pub mach_t0: f64,
    /// Taylor-scale Reynolds number fixing the (constant) viscosity.
    pub reynolds0: f64,
    /// Most energetic wavenumber of the initial spectrum.
    pub k0: usize,
    /// Initial temperature, K.
    pub t0: f64,
    /// Initial pressure, Pa.
    pub p0: f64,
    /// RNG seed of the master field.
    pub seed: u64,
    /// Resolution the master field is generated at; coarser runs receive a
    /// Fourier truncation of the same realization.
    pub master_n: usize,
}

impl Default for HitParams {
    fn default() -> Self {
        Self {
            mach_t0: 0.6,
            reynolds0: 100.0,
            k0: 4,
            t0: 1200.0,
            p0: 101_325.0,
            seed: 42,
            master_n: 128,
        }
    }
}

impl HitParams {
    /// Integral length scale 2 / k0, m.
    pub fn psi0(&self) -> f64 {
        2.0 / self.k0 as f64
    }
}

/// Everything a HIT run needs besides the scheme: the initial field, the
/// constant transport coefficients, and the derived reference scales.
pub struct HitInit {
    pub field: ConservedField,
    pub coeffs: TransportCoeffs,
    /// Eddy turnover time psi0 / u_rms0, s: the simulation clock.
    pub tau_eddy: f64,
    pub u_rms0: f64,
    pub c0: f64,
    pub rho0: f64,
}

/// A solenoidal random velocity realization at its generation resolution.
pub struct HitMasterField {
    pub n: usize,
    pub velocity: [Vec<f64>; 3],
}

impl HitMasterField {
    /// Generates the master realization (unscaled amplitudes).
    pub fn generate(n: usize, k0: usize, seed: u64) -> Result<Self, CaseError> {
        let velocity = solenoidal_spectrum_field(n, k0, seed)?;
        Ok(Self { n, velocity })
    }

    /// Fourier truncation onto an n^3 grid (n <= master n).
    pub fn restrict(&self, n: usize) -> Result<[Vec<f64>; 3], CaseError> {
        if n == self.n {
            return Ok(self.velocity.clone());
        }
        if n > self.n {
            return Err(CaseError::Invalid(format!(
                "requested resolution {n} exceeds the master field resolution {}",
                self.n
            )));
        }
        if n % 2 != 0 {
            return Err(CaseError::Invalid("restriction requires an even resolution".into()));
        }
        let nm = self.n;
        let mut out: [Vec<f64>; 3] = Default::default();
        for (c, out_c) in out.iter_mut().enumerate() {
            let spec = spectral::forward_real(&self.velocity[c], nm);
            let mut coarse = vec![Complex::default(); n * n * n];
            let half = (n / 2) as i64;
            for iz in 0..n {
                let kz = spectral::wavenumber(iz, n);
                for iy in 0..n {
                    let ky = spectral::wavenumber(iy, n);
                    for ix in 0..n {
                        let kx = spectral::wavenumber(ix, n);
                        if kx.abs() >= half || ky.abs() >= half || kz.abs() >= half {
                            continue;
                        }
                        let src = (wrap(kz, nm) * nm + wrap(ky, nm)) * nm + wrap(kx, nm);
                        coarse[(iz * n + iy) * n + ix] = spec[src];
                    }
                }
            }
            *out_c = spectral::inverse_to_real(coarse, n);
        }
        Ok(out)
    }
}

fn wrap(k: i64, n: usize) -> usize {
    k.rem_euclid(n as i64) as usize
}

/// Constructs a zero-mean solenoidal Gaussian random field in wavenumber
/// space whose expected shell spectrum follows k^4 exp(-2 (k/k0)^2):
/// independent complex Gaussian modes, Hermitian-symmetrized for a real
/// field, amplitude-shaped per mode and projected onto the divergence-free
/// subspace. Amplitudes are arbitrary up to the caller's rescaling.
pub fn solenoidal_spectrum_field(
    n: usize,
    k0: usize,
    seed: u64,
) -> Result<[Vec<f64>; 3], CaseError> {
    if k0 == 0 {
        return Err(CaseError::Invalid("k0 must be at least 1".into()));
    }
    if n < 4 * k0 {
        return Err(CaseError::Invalid(format!(
            "resolution {n} too coarse for peak wavenumber {k0} (need n >= 4 k0)"
        )));
    }
    let total = n * n * n;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let inv_k0 = 1.0 / k0 as f64;
    let half = (n / 2) as i64;

    let mut spec: [Vec<Complex<f64>>; 3] = [
        vec![Complex::default(); total],
        vec![Complex::default(); total],
        vec![Complex::default(); total],
    ];
    // Fixed traversal order keeps the realization bit-identical per seed.
    for comp in spec.iter_mut() {
        for iz in 0..n {
            let kz = spectral::wavenumber(iz, n);
            for iy in 0..n {
                let ky = spectral::wavenumber(iy, n);
                for ix in 0..n {
                    let kx = spectral::wavenumber(ix, n);
                    let (g1, g2) = gaussian_pair(&mut rng);
                    let kmag =
                        ((kx * kx + ky * ky + kz * kz) as f64).sqrt();
                    let on_nyquist = kx.abs() >= half || ky.abs() >= half || kz.abs() >= half;
                    let sigma = if kmag == 0.0 || on_nyquist || kmag >= half as f64 {
                        0.0
                    } else {
                        kmag * (-(kmag * inv_k0) * (kmag * inv_k0)).exp()
                    };
                    comp[(iz * n + iy) * n + ix] = Complex::new(g1, g2) * sigma;
                }
            }
        }
    }

    // Hermitian symmetrization: u(-k) = conj(u(k)).
    for comp in spec.iter_mut() {
        for iz in 0..n {
            for iy in 0..n {
                for ix in 0..n {
                    let i = (iz * n + iy) * n + ix;
                    let j = (conj_idx(iz, n) * n + conj_idx(iy, n)) * n + conj_idx(ix, n);
                    if i < j {
                        let avg = 0.5 * (comp[i] + comp[j].conj());
                        comp[i] = avg;
                        comp[j] = avg.conj();
                    } else if i == j {
                        comp[i] = Complex::new(comp[i].re, 0.0);
                    }
                }
            }
        }
    }

    // Divergence-free projection P = I - k k^T / |k|^2.
    for iz in 0..n {
        let kz = spectral::wavenumber(iz, n) as f64;
        for iy in 0..n {
            let ky = spectral::wavenumber(iy, n) as f64;
            for ix in 0..n {
                let kx = spectral::wavenumber(ix, n) as f64;
                let k2 = kx * kx + ky * ky + kz * kz;
                if k2 == 0.0 {
                    continue;
                }
                let i = (iz * n + iy) * n + ix;
                let dot = (spec[0][i] * kx + spec[1][i] * ky + spec[2][i] * kz) / k2;
                spec[0][i] -= dot * kx;
                spec[1][i] -= dot * ky;
                spec[2][i] -= dot * kz;
            }
        }
    }

    let [sx, sy, sz] = spec;
    Ok([
        spectral::inverse_to_real(sx, n),
        spectral::inverse_to_real(sy, n),
        spectral::inverse_to_real(sz, n),
    ])
}

fn conj_idx(m: usize, n: usize) -> usize {
    (n - m) % n
}

// Box-Muller on the ChaCha stream.
fn gaussian_pair(rng: &mut ChaCha12Rng) -> (f64, f64) {
    let u1 = ((rng.next_u64() >> 11) as f64 + 0.5) / (1u64 << 53) as f64;
    let u2 = ((rng.next_u64() >> 11) as f64 + 0.5) / (1u64 << 53) as f64;
    let r = (-2.0 * u1.ln()).sqrt();
    let th = 2.0 * std::f64::consts::PI * u2;
    (r * th.cos(), r * th.sin())
}

/// Builds the HIT initial field at resolution `n` from the master
/// realization, rescaled so the realized u_rms matches M_t0 c0 / sqrt(3),
/// with uniform temperature and pressure. Returns the field, the constant
/// transport coefficients and the eddy-turnover clock.
pub fn init_hit(
    n: usize,
    params: &HitParams,
    gas: &GasModel,
    ghost: usize,
    master: &HitMasterField,
) -> Result<HitInit, CaseError> {
    if n / 2 <= params.k0 {
        return Err(CaseError::Invalid(format!(
            "resolution {n} cannot contain the peak wavenumber {}",
            params.k0
        )));
    }
    let mut vel = master.restrict(n)?;
    let total = (n * n * n) as f64;

    let c0 = hit_sound_speed(params, gas);
    let u_rms0 = params.mach_t0 * c0 / 3.0f64.sqrt();
    let sum_sq: f64 = vel.iter().map(|c| c.iter().map(|v| v * v).sum::<f64>()).sum();
    let realized = (sum_sq / (3.0 * total)).sqrt();
    if realized == 0.0 {
        return Err(CaseError::Invalid("master field has zero energy".into()));
    }
    let scale = u_rms0 / realized;
    for c in vel.iter_mut() {
        for v in c.iter_mut() {
            *v *= scale;
        }
    }

    let rho0 = params.p0 / (gas.r_specific() * params.t0);
    let psi0 = params.psi0();
    let eta0 = rho0 * psi0 * u_rms0 / params.reynolds0;
    let lambda0 = eta0 * gas.cp() / gas.prandtl();
    let tau_eddy = psi0 / u_rms0;

    let grid = CartesianGrid::periodic_cube(3, n, 0.0, 2.0 * std::f64::consts::PI, ghost)?;
    let mut f = ConservedField::zeros(grid);
    let e_internal = params.p0 / (gas.gamma() - 1.0);
    for iz in 0..n as isize {
        for iy in 0..n as isize {
            for ix in 0..n as isize {
                let i = (iz as usize * n + iy as usize) * n + ix as usize;
                let (u, v, w) = (vel[0][i], vel[1][i], vel[2][i]);
                let ke = 0.5 * rho0 * (u * u + v * v + w * w);
                f.set(0, ix, iy, iz, rho0);
                f.set(1, ix, iy, iz, rho0 * u);
                f.set(2, ix, iy, iz, rho0 * v);
                f.set(3, ix, iy, iz, rho0 * w);
                f.set(4, ix, iy, iz, e_internal + ke);
            }
        }
    }
    crate::integrator::fill_ghosts(&mut f);
    Ok(HitInit {
        field: f,
        coeffs: TransportCoeffs {
            shear_viscosity: eta0,
            bulk_viscosity: 0.0,
            conductivity: lambda0,
        },
        tau_eddy,
        u_rms0,
        c0,
        rho0,
    })
}

/// Sound speed of the uniform HIT initial state, m/s.
pub fn hit_sound_speed(params: &HitParams, gas: &GasModel) -> f64 {
    (gas.gamma() * gas.r_specific() * params.t0).sqrt()
}
