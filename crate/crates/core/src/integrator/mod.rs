//! Method-of-lines finite-volume update: ghost fill, dimension-by-dimension
//! face reconstruction, face-flux quadrature at two accuracy levels,
//! diffusive terms, SSP-RK3 time stepping and CFL control.

mod characteristic;
mod diffusive;
mod hyperbolic;
mod prim;

pub use prim::PrimField;

use crate::field::ConservedField;
use crate::flux::FluxError;
use crate::gas::{GasModel, StateError, TransportCoeffs};
use crate::grid::Boundary;
use crate::reconstruct::{Reconstruction, WenoParams};
use thiserror::Error;

/// Face-flux quadrature rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quadrature {
    /// One flux per face at the face centre; the classic second-order
    /// volume integration.
    Midpoint,
    /// Tensor-product 2-point Gauss rule per face with point values
    /// de-averaged by the configured 1D scheme; fourth-order volume
    /// integration. In 1D a face is a point and this degenerates to
    /// midpoint.
    Gauss2,
}

impl Quadrature {
    pub fn name(&self) -> &'static str {
        match self {
            Quadrature::Midpoint => "midpoint",
            Quadrature::Gauss2 => "gauss2",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "midpoint" => Some(Quadrature::Midpoint),
            "gauss2" | "gauss" => Some(Quadrature::Gauss2),
            _ => None,
        }
    }
}

/// Variable set handed to the 1D reconstruction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReconVariables {
    /// Component-wise primitive variables (density, velocity, pressure).
    Primitive,
    /// Conserved variables projected onto local Roe-average characteristic
    /// fields, face by face.
    Characteristic,
}

impl ReconVariables {
    pub fn name(&self) -> &'static str {
        match self {
            ReconVariables::Primitive => "primitive",
            ReconVariables::Characteristic => "characteristic",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "primitive" => Some(ReconVariables::Primitive),
            "characteristic" => Some(ReconVariables::Characteristic),
            _ => None,
        }
    }
}

/// Approximate Riemann solver choice; HLLC is the default, Rusanov kept as
/// a cross-check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RiemannSolver {
    Hllc,
    Rusanov,
}

impl RiemannSolver {
    #[inline]
    pub fn solve(
        &self,
        left: &crate::gas::PrimitiveState,
        right: &crate::gas::PrimitiveState,
        axis: usize,
        gas: &GasModel,
    ) -> Result<crate::flux::FluxVector, FluxError> {
        match self {
            RiemannSolver::Hllc => crate::flux::hllc_flux(left, right, axis, gas),
            RiemannSolver::Rusanov => crate::flux::rusanov_flux(left, right, axis, gas),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            RiemannSolver::Hllc => "hllc",
            RiemannSolver::Rusanov => "rusanov",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "hllc" => Some(RiemannSolver::Hllc),
            "rusanov" | "llf" => Some(RiemannSolver::Rusanov),
            _ => None,
        }
    }
}

/// The experiment's independent variable: which reconstruction, which
/// quadrature, and how.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SchemeConfig {
    pub reconstruction: Reconstruction,
    pub quadrature: Quadrature,
    pub weno: WenoParams,
    pub variables: ReconVariables,
    pub riemann: RiemannSolver,
}

impl SchemeConfig {
    pub fn new(reconstruction: Reconstruction, quadrature: Quadrature) -> Self {
        Self {
            reconstruction,
            quadrature,
            weno: WenoParams::default(),
            variables: ReconVariables::Primitive,
            riemann: RiemannSolver::Hllc,
        }
    }

    /// Effective quadrature after the 1D degeneration.
    pub fn effective_quadrature(&self, ndim: usize) -> Quadrature {
        if ndim == 1 {
            Quadrature::Midpoint
        } else {
            self.quadrature
        }
    }
}

/// Work done during one step (all stages summed).
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct StepStats {
    pub dt: f64,
    pub riemann_solves: u64,
    pub reconstruction_calls: u64,
    pub wall_time: f64,
}

/// Operation counters threaded through the RHS evaluations.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct OpCounters {
    pub riemann_solves: u64,
    pub reconstruction_calls: u64,
}

impl OpCounters {
    fn add(&mut self, other: OpCounters) {
        self.riemann_solves += other.riemann_solves;
        self.reconstruction_calls += other.reconstruction_calls;
    }
}

#[derive(Error, Debug)]
pub enum IntegrateError {
    #[error("invalid state at RK stage {stage}: {source}")]
    State { stage: usize, source: StateError },
    #[error("flux evaluation failed along dim {dim}: {source}")]
    Flux { dim: usize, source: FluxError },
    #[error("step guard exceeded: {steps} steps without reaching t_end (dt collapse?)")]
    MaxSteps { steps: usize },
    #[error("configuration error: {0}")]
    Config(String),
}

/// Fills the ghost layers from the boundary tags. Dimensions are processed
/// in order over the full padded extent, so edge/corner ghost regions end
/// up consistent for periodic boundaries.
pub fn fill_ghosts(f: &mut ConservedField) {
    let grid = f.grid().clone();
    let g = grid.ghost() as isize;
    let ncomp = grid.ncomp();
    let ndim = grid.ndim();
    for d in 0..ndim {
        let n = grid.n(d) as isize;
        // Full padded range in the other two dims.
        let (pa, pb) = match d {
            0 => (grid.padded(1), grid.padded(2)),
            1 => (grid.padded(0), grid.padded(2)),
            _ => (grid.padded(0), grid.padded(1)),
        };
        let ga = match d {
            0 => {
                if ndim >= 2 {
                    g
                } else {
                    0
                }
            }
            _ => g,
        };
        let gb = if ndim >= 3 { g } else { 0 };
        match grid.boundary(d) {
            Boundary::Periodic => {
                for b in 0..pb as isize {
                    for a in 0..pa as isize {
                        for k in 0..g {
                            for c in 0..ncomp {
                                let src_lo = cell_value(f, c, d, n - g + k, a - ga, b - gb);
                                set_cell_value(f, c, d, -g + k, a - ga, b - gb, src_lo);
                                let src_hi = cell_value(f, c, d, k, a - ga, b - gb);
                                set_cell_value(f, c, d, n + k, a - ga, b - gb, src_hi);
                            }
                        }
                    }
                }
            }
            Boundary::InflowOutflow { left } => {
                let fixed = [
                    left.density,
                    left.momentum[0],
                    left.momentum[1],
                    left.momentum[2],
                    left.total_energy,
                ];
                for b in 0..pb as isize {
                    for a in 0..pa as isize {
                        for k in 0..g {
                            for c in 0..ncomp {
                                let v = comp_of_state(&fixed, c, ndim);
                                set_cell_value(f, c, d, -g + k, a - ga, b - gb, v);
                                let edge = cell_value(f, c, d, n - 1, a - ga, b - gb);
                                set_cell_value(f, c, d, n + k, a - ga, b - gb, edge);
                            }
                        }
                    }
                }
            }
        }
    }
}

fn comp_of_state(s: &[f64; 5], c: usize, ndim: usize) -> f64 {
    if c == 0 {
        s[0]
    } else if c <= ndim {
        s[c]
    } else {
        s[4]
    }
}

// Accessors that address a cell by (position along d, transverse a, b)
// where the transverse dims are the remaining ones in ascending order.
fn coords_of(d: usize, i: isize, a: isize, b: isize) -> (isize, isize, isize) {
    match d {
        0 => (i, a, b),
        1 => (a, i, b),
        _ => (a, b, i),
    }
}

fn cell_value(f: &ConservedField, c: usize, d: usize, i: isize, a: isize, b: isize) -> f64 {
    let (x, y, z) = coords_of(d, i, a, b);
    f.get(c, x, y, z)
}

fn set_cell_value(f: &mut ConservedField, c: usize, d: usize, i: isize, a: isize, b: isize, v: f64) {
    let (x, y, z) = coords_of(d, i, a, b);
    f.set(c, x, y, z, v);
}

/// CFL-limited time step: `cfl * min(dx / (|u_d| + c))`, further limited by
/// the diffusive bound `dx^2 rho / (2 ndim max(eta, lambda/cv))` when
/// transport is active.
pub fn stable_dt(
    f: &ConservedField,
    cfl: f64,
    coeffs: &TransportCoeffs,
    gas: &GasModel,
) -> Result<f64, IntegrateError> {
    let grid = f.grid();
    let ndim = grid.ndim();
    let gamma = gas.gamma();
    let nx = grid.n(0);
    let stride = grid.padded_cells();
    let data = f.data();
    let dx = [grid.dx(0), grid.dx(1), grid.dx(2)];
    // Track max((|u_d| + c) / dx_d) so the hot loop has one division.
    let mut max_rate: f64 = 0.0;
    let mut min_rho = f64::MAX;
    for iz in 0..grid.n(2) as isize {
        for iy in 0..grid.n(1) as isize {
            let base = grid.index(0, iy, iz);
            for i in base..base + nx {
                let rho = data[i];
                let inv = 1.0 / rho;
                let mut m2 = 0.0;
                for d in 0..ndim {
                    let m = data[(1 + d) * stride + i];
                    m2 += m * m;
                }
                let e = data[(1 + ndim) * stride + i];
                let internal = e - 0.5 * m2 * inv;
                if !(rho > 0.0 && internal > 0.0) {
                    return Err(IntegrateError::State {
                        stage: 0,
                        source: crate::field::flat_error(f, i),
                    });
                }
                let c = (gamma * (gamma - 1.0) * internal * inv).sqrt();
                for d in 0..ndim {
                    let u = data[(1 + d) * stride + i].abs() * inv;
                    let rate = (u + c) / dx[d];
                    if rate > max_rate {
                        max_rate = rate;
                    }
                }
                if rho < min_rho {
                    min_rho = rho;
                }
            }
        }
    }
    let mut dt = cfl / max_rate;
    let diff = coeffs.shear_viscosity.max(coeffs.conductivity / gas.cv());
    if diff > 0.0 {
        let dx_min = (0..ndim).map(|d| dx[d]).fold(f64::MAX, f64::min);
        let bound = dx_min * dx_min * min_rho / (2.0 * ndim as f64 * diff);
        dt = dt.min(bound);
    }
    Ok(dt)
}

/// Hyperbolic tendency with the configured quadrature. Ghosts must be
/// filled. The tendency buffer matches the field layout; ghost entries are
/// zeroed.
pub fn hyperbolic_rhs(
    f: &ConservedField,
    cfg: &SchemeConfig,
    gas: &GasModel,
    tend: &mut [f64],
    counters: &mut OpCounters,
) -> Result<(), IntegrateError> {
    validate_config(f, cfg)?;
    let prim = PrimField::build(f, gas).map_err(|e| IntegrateError::State { stage: 0, source: e })?;
    tend.fill(0.0);
    match cfg.effective_quadrature(f.grid().ndim()) {
        Quadrature::Midpoint => hyperbolic::midpoint_rhs(f, &prim, cfg, gas, tend, counters),
        Quadrature::Gauss2 => hyperbolic::gauss2_rhs(f, &prim, cfg, gas, tend, counters),
    }
}

/// Midpoint-quadrature hyperbolic tendency (allocating wrapper).
pub fn hyperbolic_rhs_midpoint(
    f: &ConservedField,
    cfg: &SchemeConfig,
    gas: &GasModel,
) -> Result<(Vec<f64>, OpCounters), IntegrateError> {
    let mut cfg = *cfg;
    cfg.quadrature = Quadrature::Midpoint;
    let mut tend = vec![0.0; f.data().len()];
    let mut counters = OpCounters::default();
    hyperbolic_rhs(f, &cfg, gas, &mut tend, &mut counters)?;
    Ok((tend, counters))
}

/// Gauss-quadrature hyperbolic tendency (allocating wrapper).
pub fn hyperbolic_rhs_gauss2(
    f: &ConservedField,
    cfg: &SchemeConfig,
    gas: &GasModel,
) -> Result<(Vec<f64>, OpCounters), IntegrateError> {
    let mut cfg = *cfg;
    cfg.quadrature = Quadrature::Gauss2;
    let mut tend = vec![0.0; f.data().len()];
    let mut counters = OpCounters::default();
    hyperbolic_rhs(f, &cfg, gas, &mut tend, &mut counters)?;
    Ok((tend, counters))
}

/// Diffusive tendency from conservative centered-difference divergence of
/// the viscous flux. Ghosts must be filled; `tend` is accumulated into.
pub fn diffusive_rhs(
    f: &ConservedField,
    coeffs: &TransportCoeffs,
    gas: &GasModel,
    tend: &mut [f64],
) -> Result<(), IntegrateError> {
    if coeffs.is_inviscid() {
        return Ok(());
    }
    let prim = PrimField::build(f, gas).map_err(|e| IntegrateError::State { stage: 0, source: e })?;
    diffusive::diffusive_rhs(f, &prim, coeffs, gas, tend)
}

/// Allocating wrapper around [`diffusive_rhs`].
pub fn diffusive_rhs_alloc(
    f: &ConservedField,
    coeffs: &TransportCoeffs,
    gas: &GasModel,
) -> Result<Vec<f64>, IntegrateError> {
    let mut tend = vec![0.0; f.data().len()];
    diffusive_rhs(f, coeffs, gas, &mut tend)?;
    Ok(tend)
}

fn validate_config(f: &ConservedField, cfg: &SchemeConfig) -> Result<(), IntegrateError> {
    let need = cfg.reconstruction.required_ghost();
    if f.grid().ghost() < need {
        return Err(IntegrateError::Config(format!(
            "ghost width {} below the {} required by {}",
            f.grid().ghost(),
            need,
            cfg.reconstruction.name()
        )));
    }
    Ok(())
}

fn total_rhs(
    f: &ConservedField,
    cfg: &SchemeConfig,
    gas: &GasModel,
    coeffs: &TransportCoeffs,
    tend: &mut [f64],
    counters: &mut OpCounters,
) -> Result<(), IntegrateError> {
    hyperbolic_rhs(f, cfg, gas, tend, counters)?;
    if !coeffs.is_inviscid() {
        let prim =
            PrimField::build(f, gas).map_err(|e| IntegrateError::State { stage: 0, source: e })?;
        diffusive::diffusive_rhs(f, &prim, coeffs, gas, tend)?;
    }
    Ok(())
}

/// One Shu-Osher SSP-RK3 step. Ghosts are refilled and interior states
/// validated after every stage; an invalid state aborts with the stage and
/// cell in the error.
pub fn ssp_rk3_step(
    f: &mut ConservedField,
    dt: f64,
    cfg: &SchemeConfig,
    gas: &GasModel,
    coeffs: &TransportCoeffs,
) -> Result<StepStats, IntegrateError> {
    let start = std::time::Instant::now();
    let mut counters = OpCounters::default();
    let grid = f.grid().clone();
    let ncomp = grid.ncomp();
    let stride = grid.padded_cells();
    let mut tend = vec![0.0; f.data().len()];

    fill_ghosts(f);
    let u0: Vec<f64> = f.data().to_vec();

    // stage 1: u1 = u0 + dt L(u0)
    total_rhs(f, cfg, gas, coeffs, &mut tend, &mut counters)?;
    apply_interior(&grid, ncomp, stride, f.data_mut(), |row, base| {
        for i in 0..row.len() {
            row[i] = u0[base + i] + dt * tend[base + i];
        }
    });
    stage_check(f, gas, 1)?;
    fill_ghosts(f);

    // stage 2: u2 = 3/4 u0 + 1/4 (u1 + dt L(u1))
    total_rhs(f, cfg, gas, coeffs, &mut tend, &mut counters)?;
    apply_interior(&grid, ncomp, stride, f.data_mut(), |row, base| {
        for i in 0..row.len() {
            row[i] = 0.75 * u0[base + i] + 0.25 * (row[i] + dt * tend[base + i]);
        }
    });
    stage_check(f, gas, 2)?;
    fill_ghosts(f);

    // stage 3: u = 1/3 u0 + 2/3 (u2 + dt L(u2))
    total_rhs(f, cfg, gas, coeffs, &mut tend, &mut counters)?;
    apply_interior(&grid, ncomp, stride, f.data_mut(), |row, base| {
        for i in 0..row.len() {
            row[i] = (u0[base + i] + 2.0 * (row[i] + dt * tend[base + i])) / 3.0;
        }
    });
    stage_check(f, gas, 3)?;
    fill_ghosts(f);

    f.time += dt;
    Ok(StepStats {
        dt,
        riemann_solves: counters.riemann_solves,
        reconstruction_calls: counters.reconstruction_calls,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

// Applies a row-wise update to every interior x-row of every component;
// the closure receives the mutable row and its flat base index.
fn apply_interior(
    grid: &crate::grid::CartesianGrid,
    ncomp: usize,
    stride: usize,
    data: &mut [f64],
    op: impl Fn(&mut [f64], usize),
) {
    let nx = grid.n(0);
    for iz in 0..grid.n(2) as isize {
        for iy in 0..grid.n(1) as isize {
            let row = grid.index(0, iy, iz);
            for c in 0..ncomp {
                let base = c * stride + row;
                op(&mut data[base..base + nx], base);
            }
        }
    }
}

fn stage_check(f: &ConservedField, gas: &GasModel, stage: usize) -> Result<(), IntegrateError> {
    f.validate_interior(gas).map_err(|e| IntegrateError::State { stage, source: e })
}

/// Limits for [`advance_to_time`].
#[derive(Clone, Copy, Debug)]
pub struct AdvanceControl {
    pub cfl: f64,
    pub max_steps: usize,
}

impl Default for AdvanceControl {
    fn default() -> Self {
        Self { cfl: 0.5, max_steps: 2_000_000 }
    }
}

/// Advances to `t_end` exactly (the final step is clamped), invoking the
/// observer after every accepted step.
pub fn advance_to_time(
    f: &mut ConservedField,
    t_end: f64,
    cfg: &SchemeConfig,
    gas: &GasModel,
    coeffs: &TransportCoeffs,
    ctl: &AdvanceControl,
    mut observer: impl FnMut(&ConservedField, &StepStats),
) -> Result<Vec<StepStats>, IntegrateError> {
    let mut stats = Vec::new();
    if t_end < f.time {
        return Err(IntegrateError::Config(format!(
            "t_end {} precedes current time {}",
            t_end, f.time
        )));
    }
    let scale = t_end.abs().max(1.0);
    while f.time < t_end - 1e-14 * scale {
        if stats.len() >= ctl.max_steps {
            return Err(IntegrateError::MaxSteps { steps: stats.len() });
        }
        let mut dt = stable_dt(f, ctl.cfl, coeffs, gas)?;
        if f.time + dt >= t_end - 1e-14 * scale {
            dt = t_end - f.time;
        }
        let s = ssp_rk3_step(f, dt, cfg, gas, coeffs)?;
        if (f.time - t_end).abs() <= 1e-14 * scale {
            f.time = t_end;
        }
        observer(f, &s);
        stats.push(s);
    }
    Ok(stats)
}

/// Fixed-dt advance used by temporal-order studies.
pub fn advance_fixed_dt(
    f: &mut ConservedField,
    dt: f64,
    steps: usize,
    cfg: &SchemeConfig,
    gas: &GasModel,
    coeffs: &TransportCoeffs,
) -> Result<Vec<StepStats>, IntegrateError> {
    let mut stats = Vec::with_capacity(steps);
    for _ in 0..steps {
        stats.push(ssp_rk3_step(f, dt, cfg, gas, coeffs)?);
    }
    Ok(stats)
}
