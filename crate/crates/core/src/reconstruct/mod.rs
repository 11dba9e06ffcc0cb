//! One-dimensional reconstruction kernels: cell averages in, face values out.
//!
//! Every kernel maps a window of `2r-1` (WENO) or 5 (PPM) consecutive cell
//! averages centred on cell `i` to the pair of values that cell contributes
//! to its two faces: the left state of face `i+1/2` and the right state of
//! face `i-1/2`. Interior-point evaluation (needed to de-average face data
//! at Gauss nodes) goes through the same nonlinear weighting with linear
//! weights re-derived for the evaluation point.

mod linear;
mod ppm;
#[cfg(test)]
mod tests;
mod weno;

pub use linear::{optimal_point_weights, substencil_point_coeffs, PointEvalTable};
pub use ppm::{ppm_face_values, ppm_face_values_unlimited, ppm_point_value};
pub use weno::{
    gauss_tables, point_values_lanes, smoothness_indicators, weno_face_values, weno_point_value,
    wenoz_weights, GaussNode,
};

#[inline(always)]
fn line_loop<const W: usize>(
    kernel: impl Fn(&[f64; W]) -> FacePair,
    line: &[f64],
    n: usize,
    left: &mut [f64],
    right: &mut [f64],
) {
    debug_assert!(line.len() >= n + 1 + W);
    debug_assert!(left.len() >= n + 1 && right.len() >= n + 1);
    for (j, win) in line.windows(W).take(n + 2).enumerate() {
        let w: &[f64; W] = win.try_into().unwrap();
        let pair = kernel(w);
        // window start j covers cell j - 1
        if j >= 1 {
            right[j - 1] = pair.right;
        }
        if j <= n {
            left[j] = pair.left;
        }
    }
}

/// Number of substencils `r`; the scheme order is `2r - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WenoOrder {
    R2,
    R3,
    R4,
}

impl WenoOrder {
    pub fn r(&self) -> usize {
        match self {
            WenoOrder::R2 => 2,
            WenoOrder::R3 => 3,
            WenoOrder::R4 => 4,
        }
    }

    /// Formal order of accuracy, `2r - 1`.
    pub fn order(&self) -> usize {
        2 * self.r() - 1
    }

    /// Stencil width, `2r - 1` cells.
    pub fn width(&self) -> usize {
        2 * self.r() - 1
    }

    /// Cells on each side of the centre cell, `r - 1`.
    pub fn half_width(&self) -> usize {
        self.r() - 1
    }
}

/// WENO-Z parameters: `epsilon` guards the division in the weight ratio and
/// `a` controls the adaptation rate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WenoParams {
    pub epsilon: f64,
    pub a: i32,
}

impl Default for WenoParams {
    fn default() -> Self {
        Self { epsilon: 1e-40, a: 2 }
    }
}

/// The two values a cell contributes to its faces: `left` is the left state
/// of face `i+1/2`, `right` the right state of face `i-1/2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FacePair {
    pub left: f64,
    pub right: f64,
}

/// Face-reconstruction scheme selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reconstruction {
    Ppm,
    WenoZ3,
    WenoZ5,
    WenoZ7,
}

impl Reconstruction {
    pub fn weno_order(&self) -> Option<WenoOrder> {
        match self {
            Reconstruction::Ppm => None,
            Reconstruction::WenoZ3 => Some(WenoOrder::R2),
            Reconstruction::WenoZ5 => Some(WenoOrder::R3),
            Reconstruction::WenoZ7 => Some(WenoOrder::R4),
        }
    }

    /// Cells needed on each side of the centre cell.
    pub fn half_width(&self) -> usize {
        match self {
            Reconstruction::Ppm => 2,
            Reconstruction::WenoZ3 => 1,
            Reconstruction::WenoZ5 => 2,
            Reconstruction::WenoZ7 => 3,
        }
    }

    pub fn width(&self) -> usize {
        2 * self.half_width() + 1
    }

    /// Ghost layers a field must carry so that the cells adjacent to every
    /// interior face (including the first ghost cell) have full stencils.
    pub fn required_ghost(&self) -> usize {
        self.half_width() + 1
    }

    /// Both face contributions of the centre cell.
    #[inline]
    pub fn face_pair(&self, window: &[f64], params: &WenoParams) -> FacePair {
        match self {
            Reconstruction::Ppm => ppm_face_values(window),
            Reconstruction::WenoZ3 => weno_face_values(window, WenoOrder::R2, params),
            Reconstruction::WenoZ5 => weno_face_values(window, WenoOrder::R3, params),
            Reconstruction::WenoZ7 => weno_face_values(window, WenoOrder::R4, params),
        }
    }

    /// Reconstructs a whole line of cells at once: windows slide over
    /// `line`, producing per-face states for faces `0..=n` (cell `j - 1`
    /// under window start `j`). Dispatches once per line so the inner loop
    /// is monomorphic over the stencil width.
    pub fn face_pairs_line(
        &self,
        line: &[f64],
        params: &WenoParams,
        n: usize,
        left: &mut [f64],
        right: &mut [f64],
    ) {
        match self {
            Reconstruction::Ppm => line_loop::<5>(|w| ppm::ppm_face_values(w), line, n, left, right),
            Reconstruction::WenoZ3 => {
                line_loop::<3>(|w| weno::face_pair_r2(w, params), line, n, left, right)
            }
            Reconstruction::WenoZ5 => {
                line_loop::<5>(|w| weno::face_pair_r3(w, params), line, n, left, right)
            }
            Reconstruction::WenoZ7 => {
                line_loop::<7>(|w| weno::face_pair_r4(w, params), line, n, left, right)
            }
        }
    }

    /// Reconstructed value at cell-local coordinate `xi` in `(-1/2, 1/2)`,
    /// pre-derived tables for the two 2-point Gauss nodes.
    #[inline]
    pub fn point_value(&self, window: &[f64], params: &WenoParams, node: GaussNode) -> f64 {
        match self {
            Reconstruction::Ppm => ppm_point_value(window, node.xi()),
            Reconstruction::WenoZ3 => weno_point_value(window, WenoOrder::R2, params, node),
            Reconstruction::WenoZ5 => weno_point_value(window, WenoOrder::R3, params, node),
            Reconstruction::WenoZ7 => weno_point_value(window, WenoOrder::R4, params, node),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Reconstruction::Ppm => "ppm",
            Reconstruction::WenoZ3 => "weno-z3",
            Reconstruction::WenoZ5 => "weno-z5",
            Reconstruction::WenoZ7 => "weno-z7",
        }
    }

    /// Scalar kernel invocations per [`Reconstruction::face_pairs_line`]
    /// call (one per window position).
    pub fn line_call_count(&self, n: usize) -> u64 {
        (n + 2) as u64
    }

    /// Lane variant of [`Reconstruction::face_pairs_line`]: each line entry
    /// carries all `L` components of a cell. Returns false for schemes
    /// without a lane path (the caller falls back to the scalar sweep).
    pub fn face_pairs_line_lanes<const L: usize>(
        &self,
        line: &[[f64; L]],
        params: &WenoParams,
        n: usize,
        left: &mut [[f64; L]],
        right: &mut [[f64; L]],
    ) -> bool {
        let Some(order) = self.weno_order() else {
            return false;
        };
        let width = order.width();
        debug_assert!(line.len() >= n + 1 + width);
        for (j, win) in line.windows(width).take(n + 2).enumerate() {
            let (l, r) = weno::face_pair_lanes(order, win, params);
            if j >= 1 {
                right[j - 1] = r;
            }
            if j <= n {
                left[j] = l;
            }
        }
        true
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "ppm" => Some(Reconstruction::Ppm),
            "weno-z3" | "wenoz3" | "z3" => Some(Reconstruction::WenoZ3),
            "weno-z5" | "wenoz5" | "z5" => Some(Reconstruction::WenoZ5),
            "weno-z7" | "wenoz7" | "z7" => Some(Reconstruction::WenoZ7),
            _ => None,
        }
    }
}
