//! Uniform Cartesian grid with ghost layers.

use crate::gas::ConservedState;
use thiserror::Error;

/// Boundary treatment for one dimension.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Boundary {
    /// Ghost cells wrap around the interior.
    Periodic,
    /// Fixed state on the left, zero-gradient outflow on the right.
    InflowOutflow { left: ConservedState },
}

#[derive(Error, Debug, Clone, PartialEq)]
pub enum GridError {
    #[error("ndim must be 1..=3, got {0}")]
    BadNdim(usize),
    #[error("dimension {dim}: need at least one cell, got {n}")]
    BadCellCount { dim: usize, n: usize },
    #[error("dimension {dim}: domain_hi {hi} must exceed domain_lo {lo}")]
    BadExtent { dim: usize, lo: f64, hi: f64 },
    #[error("ghost width must be at least 1")]
    BadGhost,
}

/// Uniform Cartesian grid. Inactive dimensions have one cell, no ghosts and
/// zero extent contribution.
#[derive(Clone, Debug, PartialEq)]
pub struct CartesianGrid {
    ndim: usize,
    n: [usize; 3],
    lo: [f64; 3],
    hi: [f64; 3],
    ghost: usize,
    boundary: [Boundary; 3],
}

impl CartesianGrid {
    pub fn new(
        ndim: usize,
        n: [usize; 3],
        lo: [f64; 3],
        hi: [f64; 3],
        ghost: usize,
        boundary: [Boundary; 3],
    ) -> Result<Self, GridError> {
        if !(1..=3).contains(&ndim) {
            return Err(GridError::BadNdim(ndim));
        }
        if ghost == 0 {
            return Err(GridError::BadGhost);
        }
        let mut n = n;
        let mut lo = lo;
        let mut hi = hi;
        for d in ndim..3 {
            n[d] = 1;
            lo[d] = 0.0;
            hi[d] = 1.0;
        }
        for d in 0..ndim {
            if n[d] < 1 {
                return Err(GridError::BadCellCount { dim: d, n: n[d] });
            }
            if !(hi[d] > lo[d]) {
                return Err(GridError::BadExtent { dim: d, lo: lo[d], hi: hi[d] });
            }
        }
        Ok(Self { ndim, n, lo, hi, ghost, boundary })
    }

    /// Periodic cube `[lo, hi)^ndim` with `n` cells per dimension.
    pub fn periodic_cube(ndim: usize, n: usize, lo: f64, hi: f64, ghost: usize) -> Result<Self, GridError> {
        Self::new(
            ndim,
            [n; 3],
            [lo; 3],
            [hi; 3],
            ghost,
            [Boundary::Periodic; 3],
        )
    }

    pub fn ndim(&self) -> usize {
        self.ndim
    }

    /// Interior cell count along dimension `d` (1 for inactive dims).
    pub fn n(&self, d: usize) -> usize {
        self.n[d]
    }

    pub fn ghost(&self) -> usize {
        self.ghost
    }

    pub fn boundary(&self, d: usize) -> Boundary {
        self.boundary[d]
    }

    pub fn lo(&self, d: usize) -> f64 {
        self.lo[d]
    }

    pub fn hi(&self, d: usize) -> f64 {
        self.hi[d]
    }

    pub fn dx(&self, d: usize) -> f64 {
        (self.hi[d] - self.lo[d]) / self.n[d] as f64
    }

    /// Volume of one cell (product of active dx).
    pub fn cell_volume(&self) -> f64 {
        (0..self.ndim).map(|d| self.dx(d)).product()
    }

    /// Coordinate of the center of interior cell `i` along `d` (i may be a
    /// ghost index, i.e. negative or >= n).
    pub fn cell_center(&self, d: usize, i: isize) -> f64 {
        self.lo[d] + (i as f64 + 0.5) * self.dx(d)
    }

    /// Number of interior cells.
    pub fn interior_cells(&self) -> usize {
        self.n.iter().product()
    }

    /// Padded extent along `d`, including ghosts on active dimensions.
    pub fn padded(&self, d: usize) -> usize {
        if d < self.ndim {
            self.n[d] + 2 * self.ghost
        } else {
            1
        }
    }

    /// Total storage cells per component, ghosts included.
    pub fn padded_cells(&self) -> usize {
        (0..3).map(|d| self.padded(d)).product()
    }

    /// Conserved components carried on this grid (rho, ndim momenta, rho E).
    pub fn ncomp(&self) -> usize {
        self.ndim + 2
    }

    /// Flattened storage index of the (possibly ghost) cell at interior
    /// coordinates `(ix, iy, iz)`; x fastest.
    #[inline(always)]
    pub fn index(&self, ix: isize, iy: isize, iz: isize) -> usize {
        let g = self.ghost as isize;
        let px = self.padded(0) as isize;
        let py = self.padded(1) as isize;
        let x = ix + g;
        let y = if self.ndim >= 2 { iy + g } else { iy };
        let z = if self.ndim >= 3 { iz + g } else { iz };
        debug_assert!(x >= 0 && x < px && y >= 0 && y < py);
        ((z * py + y) * px + x) as usize
    }
}
