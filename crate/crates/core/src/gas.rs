//! Ideal-gas model, primitive/conserved state vectors and the conversions
//! between them.

use thiserror::Error;

/// Calorically perfect ideal gas: `p = rho * R * T`, `e = p / ((gamma-1) rho)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GasModel {
    gamma: f64,
    r_specific: f64,
    cp: f64,
    cv: f64,
    prandtl: f64,
}

#[derive(Error, Debug, Clone, PartialEq)]
pub enum StateError {
    #[error("non-positive density {density} (cell {context})")]
    NonPositiveDensity { density: f64, context: String },
    #[error("non-positive internal energy {energy} for density {density}, momentum {momentum:?} (cell {context})")]
    NonPositiveInternalEnergy {
        energy: f64,
        density: f64,
        momentum: [f64; 3],
        context: String,
    },
    #[error("non-positive pressure {pressure} (cell {context})")]
    NonPositivePressure { pressure: f64, context: String },
    #[error("invalid gas model: {0}")]
    InvalidGas(String),
}

impl GasModel {
    /// Builds a gas from `gamma`, `cp` and the Prandtl number; `cv` and the
    /// specific gas constant follow from the ideal-gas relations.
    pub fn from_gamma_cp(gamma: f64, cp: f64, prandtl: f64) -> Result<Self, StateError> {
        if !(gamma > 1.0) {
            return Err(StateError::InvalidGas(format!("gamma must exceed 1, got {gamma}")));
        }
        if !(cp > 0.0) {
            return Err(StateError::InvalidGas(format!("cp must be positive, got {cp}")));
        }
        if !(prandtl > 0.0) {
            return Err(StateError::InvalidGas(format!(
                "Prandtl number must be positive, got {prandtl}"
            )));
        }
        let cv = cp / gamma;
        Ok(Self { gamma, r_specific: cp - cv, cp, cv, prandtl })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Specific gas constant R in J/(kg K).
    pub fn r_specific(&self) -> f64 {
        self.r_specific
    }

    pub fn cp(&self) -> f64 {
        self.cp
    }

    pub fn cv(&self) -> f64 {
        self.cv
    }

    pub fn prandtl(&self) -> f64 {
        self.prandtl
    }
}

/// Density, velocity, pressure, temperature at a point/cell.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PrimitiveState {
    pub density: f64,
    /// Velocity components; unused dimensions are zero.
    pub velocity: [f64; 3],
    pub pressure: f64,
    pub temperature: f64,
}

/// Cell-averaged conserved variables: density, momentum density, total
/// energy density `rho E` with `E = e + u.u/2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConservedState {
    pub density: f64,
    pub momentum: [f64; 3],
    pub total_energy: f64,
}

/// Constant transport coefficients. With all three zero the system reduces
/// to the Euler equations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransportCoeffs {
    /// Shear viscosity, Pa s.
    pub shear_viscosity: f64,
    /// Bulk viscosity, Pa s.
    pub bulk_viscosity: f64,
    /// Thermal conductivity, W/(m K).
    pub conductivity: f64,
}

impl TransportCoeffs {
    pub const INVISCID: Self = Self {
        shear_viscosity: 0.0,
        bulk_viscosity: 0.0,
        conductivity: 0.0,
    };

    pub fn is_inviscid(&self) -> bool {
        self.shear_viscosity == 0.0 && self.bulk_viscosity == 0.0 && self.conductivity == 0.0
    }
}

/// Conserved -> primitive. Hard-fails on non-positive density or derived
/// internal energy; degenerate states are a solver blow-up, not something
/// to clip over.
pub fn primitive_from_conserved(
    c: &ConservedState,
    gas: &GasModel,
) -> Result<PrimitiveState, StateError> {
    if !(c.density > 0.0) {
        return Err(StateError::NonPositiveDensity { density: c.density, context: String::new() });
    }
    let inv_rho = 1.0 / c.density;
    let velocity = [c.momentum[0] * inv_rho, c.momentum[1] * inv_rho, c.momentum[2] * inv_rho];
    let kinetic = 0.5
        * (c.momentum[0] * velocity[0] + c.momentum[1] * velocity[1] + c.momentum[2] * velocity[2]);
    let internal = c.total_energy - kinetic;
    if !(internal > 0.0) {
        return Err(StateError::NonPositiveInternalEnergy {
            energy: internal,
            density: c.density,
            momentum: c.momentum,
            context: String::new(),
        });
    }
    let pressure = (gas.gamma() - 1.0) * internal;
    let temperature = pressure * inv_rho / gas.r_specific();
    Ok(PrimitiveState { density: c.density, velocity, pressure, temperature })
}

/// Primitive -> conserved; exact inverse of [`primitive_from_conserved`].
pub fn conserved_from_primitive(
    p: &PrimitiveState,
    gas: &GasModel,
) -> Result<ConservedState, StateError> {
    if !(p.density > 0.0) {
        return Err(StateError::NonPositiveDensity { density: p.density, context: String::new() });
    }
    if !(p.pressure > 0.0) {
        return Err(StateError::NonPositivePressure { pressure: p.pressure, context: String::new() });
    }
    let momentum = [
        p.density * p.velocity[0],
        p.density * p.velocity[1],
        p.density * p.velocity[2],
    ];
    let kinetic = 0.5
        * p.density
        * (p.velocity[0] * p.velocity[0]
            + p.velocity[1] * p.velocity[1]
            + p.velocity[2] * p.velocity[2]);
    let total_energy = p.pressure / (gas.gamma() - 1.0) + kinetic;
    Ok(ConservedState { density: p.density, momentum, total_energy })
}

/// Builds a primitive state from density, velocity and pressure, deriving
/// the temperature from the EOS.
pub fn primitive_from_rho_u_p(density: f64, velocity: [f64; 3], pressure: f64, gas: &GasModel) -> PrimitiveState {
    PrimitiveState {
        density,
        velocity,
        pressure,
        temperature: pressure / (density * gas.r_specific()),
    }
}

/// Speed of sound `c = sqrt(gamma p / rho)`.
pub fn sound_speed(p: &PrimitiveState, gas: &GasModel) -> f64 {
    (gas.gamma() * p.pressure / p.density).sqrt()
}
