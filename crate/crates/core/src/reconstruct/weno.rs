//! WENO-Z kernels at orders 3, 5 and 7.
//!
//! Smoothness indicators follow Jiang-Shu (r = 2, 3) and Balsara-Shu
//! (r = 4, stated there as integer quadratic forms scaled by 1/240, which
//! puts all three orders on the same normalization: beta of unit-slope
//! linear data is exactly 1). The nonlinear weights use the global
//! indicator tau = |beta_0 - beta_{r-1}|:
//!
//!   alpha_k = d_k * (1 + tau / (beta_k + eps))^a,  omega_k = alpha_k / sum
//!
//! Both face values of a cell share one set of indicators; the left face
//! is the mirror image of the right, so its weights read the same betas in
//! reverse order.

use super::linear::{gauss_point_table, PointEvalTable};
use super::{FacePair, WenoOrder, WenoParams};

/// Smoothness indicators `beta_0..beta_{r-1}` of the window. Entries past
/// `r` are zero.
pub fn smoothness_indicators(window: &[f64], order: WenoOrder) -> [f64; 4] {
    assert_eq!(window.len(), order.width(), "stencil width must equal 2r-1");
    match order {
        WenoOrder::R2 => {
            let b = beta_r2(window.try_into().unwrap());
            [b[0], b[1], 0.0, 0.0]
        }
        WenoOrder::R3 => {
            let b = beta_r3(window.try_into().unwrap());
            [b[0], b[1], b[2], 0.0]
        }
        WenoOrder::R4 => beta_r4(window.try_into().unwrap()),
    }
}

/// Global roughness indicator tau = |beta_0 - beta_{r-1}|. Invariant under
/// stencil reversal, so both faces of a cell share one value.
#[inline(always)]
fn global_indicator(beta: &[f64], r: usize) -> f64 {
    (beta[0] - beta[r - 1]).abs()
}

/// WENO-Z nonlinear weights from the indicators. The result is a convex
/// combination: all entries non-negative, summing to one.
pub fn wenoz_weights(beta: &[f64], order: WenoOrder, params: &WenoParams) -> [f64; 4] {
    let r = order.r();
    assert!(beta.len() >= r);
    let d: [f64; 4] = match order {
        WenoOrder::R2 => [D_R2[0], D_R2[1], 0.0, 0.0],
        WenoOrder::R3 => [D_R3[0], D_R3[1], D_R3[2], 0.0],
        WenoOrder::R4 => D_R4,
    };
    let tau = global_indicator(beta, r);
    let mut alpha = [0.0; 4];
    let mut sum = 0.0;
    for k in 0..r {
        let a = d[k] * pow_a(1.0 + tau / (beta[k] + params.epsilon), params.a);
        alpha[k] = a;
        sum += a;
    }
    let inv = 1.0 / sum;
    for a in alpha.iter_mut().take(r) {
        *a *= inv;
    }
    alpha
}

/// WENO-Z reconstruction of both face values of the centre cell.
#[inline]
pub fn weno_face_values(window: &[f64], order: WenoOrder, params: &WenoParams) -> FacePair {
    assert_eq!(window.len(), order.width(), "stencil width must equal 2r-1");
    match order {
        WenoOrder::R2 => face_pair_r2(window.try_into().unwrap(), params),
        WenoOrder::R3 => face_pair_r3(window.try_into().unwrap(), params),
        WenoOrder::R4 => face_pair_r4(window.try_into().unwrap(), params),
    }
}

/// Gauss-node selector for interior-point evaluation on the 2-point rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GaussNode {
    /// xi = -1/(2 sqrt(3))
    Minus,
    /// xi = +1/(2 sqrt(3))
    Plus,
}

impl GaussNode {
    pub fn xi(&self) -> f64 {
        let g = 0.5 / 3.0f64.sqrt();
        match self {
            GaussNode::Minus => -g,
            GaussNode::Plus => g,
        }
    }

    pub const BOTH: [GaussNode; 2] = [GaussNode::Minus, GaussNode::Plus];
}

/// WENO-Z value at a Gauss node inside the centre cell: same indicators,
/// linear weights and substencil values re-derived for the node.
#[inline]
pub fn weno_point_value(window: &[f64], order: WenoOrder, params: &WenoParams, node: GaussNode) -> f64 {
    let table = gauss_point_table(order, node);
    weno_point_with_table(window, order, params, table)
}

pub(super) fn weno_point_with_table(
    window: &[f64],
    order: WenoOrder,
    params: &WenoParams,
    table: &PointEvalTable,
) -> f64 {
    let beta = smoothness_indicators(window, order);
    let r = order.r();
    let tau = global_indicator(&beta, r);
    let mut alpha = [0.0; 4];
    let mut sum = 0.0;
    for k in 0..r {
        let a = table.d[k] * pow_a(1.0 + tau / (beta[k] + params.epsilon), params.a);
        alpha[k] = a;
        sum += a;
    }
    let inv = 1.0 / sum;
    let mut value = 0.0;
    for k in 0..r {
        let mut p = 0.0;
        for (j, &w) in window.iter().enumerate() {
            p += table.coeff[k][j] * w;
        }
        value += alpha[k] * inv * p;
    }
    value
}

// The adaptation exponent is an integer >= 1 and almost always 2; powi
// with a runtime exponent compiles to a loop, so square directly.
#[inline(always)]
fn pow_a(x: f64, a: i32) -> f64 {
    if a == 2 {
        x * x
    } else {
        x.powi(a)
    }
}

// Optimal weights of the right face, leftmost substencil first.
const D_R2: [f64; 2] = [1.0 / 3.0, 2.0 / 3.0];
const D_R3: [f64; 3] = [0.1, 0.6, 0.3];
const D_R4: [f64; 4] = [1.0 / 35.0, 12.0 / 35.0, 18.0 / 35.0, 4.0 / 35.0];

#[inline(always)]
fn beta_r2(w: &[f64; 3]) -> [f64; 2] {
    let d0 = w[1] - w[0];
    let d1 = w[2] - w[1];
    [d0 * d0, d1 * d1]
}

#[inline(always)]
fn beta_r3(w: &[f64; 5]) -> [f64; 3] {
    const C1: f64 = 13.0 / 12.0;
    let b0 = {
        let a = w[0] - 2.0 * w[1] + w[2];
        let b = w[0] - 4.0 * w[1] + 3.0 * w[2];
        C1 * a * a + 0.25 * b * b
    };
    let b1 = {
        let a = w[1] - 2.0 * w[2] + w[3];
        let b = w[1] - w[3];
        C1 * a * a + 0.25 * b * b
    };
    let b2 = {
        let a = w[2] - 2.0 * w[3] + w[4];
        let b = 3.0 * w[2] - 4.0 * w[3] + w[4];
        C1 * a * a + 0.25 * b * b
    };
    [b0, b1, b2]
}

#[inline(always)]
fn beta_r4(w: &[f64; 7]) -> [f64; 4] {
    const S: f64 = 1.0 / 240.0;
    let b0 = w[0] * (547.0 * w[0] - 3882.0 * w[1] + 4642.0 * w[2] - 1854.0 * w[3])
        + w[1] * (7043.0 * w[1] - 17246.0 * w[2] + 7042.0 * w[3])
        + w[2] * (11003.0 * w[2] - 9402.0 * w[3])
        + 2107.0 * w[3] * w[3];
    let b1 = w[1] * (267.0 * w[1] - 1642.0 * w[2] + 1602.0 * w[3] - 494.0 * w[4])
        + w[2] * (2843.0 * w[2] - 5966.0 * w[3] + 1922.0 * w[4])
        + w[3] * (3443.0 * w[3] - 2522.0 * w[4])
        + 547.0 * w[4] * w[4];
    let b2 = w[2] * (547.0 * w[2] - 2522.0 * w[3] + 1922.0 * w[4] - 494.0 * w[5])
        + w[3] * (3443.0 * w[3] - 5966.0 * w[4] + 1602.0 * w[5])
        + w[4] * (2843.0 * w[4] - 1642.0 * w[5])
        + 267.0 * w[5] * w[5];
    let b3 = w[3] * (2107.0 * w[3] - 9402.0 * w[4] + 7042.0 * w[5] - 1854.0 * w[6])
        + w[4] * (11003.0 * w[4] - 17246.0 * w[5] + 4642.0 * w[6])
        + w[5] * (7043.0 * w[5] - 3882.0 * w[6])
        + 547.0 * w[6] * w[6];
    [S * b0, S * b1, S * b2, S * b3]
}

// Amplification factors (1 + tau/(beta_k + eps))^a; shared between the two
// faces of a cell since the mirrored beta set is just the reversal.
#[inline(always)]
fn amplifications<const R: usize>(beta: &[f64; R], tau: f64, params: &WenoParams) -> [f64; R] {
    let mut t = [0.0; R];
    for k in 0..R {
        t[k] = pow_a(1.0 + tau / (beta[k] + params.epsilon), params.a);
    }
    t
}

#[inline(always)]
fn combine<const R: usize>(t: &[f64; R], d: &[f64; R], p: &[f64; R]) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for k in 0..R {
        let a = d[k] * t[k];
        num += a * p[k];
        den += a;
    }
    num / den
}

#[inline(always)]
fn interps_right_r2(w: &[f64; 3]) -> [f64; 2] {
    [0.5 * (-w[0] + 3.0 * w[1]), 0.5 * (w[1] + w[2])]
}

#[inline(always)]
fn interps_left_r2(w: &[f64; 3]) -> [f64; 2] {
    [0.5 * (-w[2] + 3.0 * w[1]), 0.5 * (w[1] + w[0])]
}

#[inline(always)]
fn interps_right_r3(w: &[f64; 5]) -> [f64; 3] {
    const SIXTH: f64 = 1.0 / 6.0;
    [
        SIXTH * (2.0 * w[0] - 7.0 * w[1] + 11.0 * w[2]),
        SIXTH * (-w[1] + 5.0 * w[2] + 2.0 * w[3]),
        SIXTH * (2.0 * w[2] + 5.0 * w[3] - w[4]),
    ]
}

#[inline(always)]
fn interps_left_r3(w: &[f64; 5]) -> [f64; 3] {
    const SIXTH: f64 = 1.0 / 6.0;
    [
        SIXTH * (2.0 * w[4] - 7.0 * w[3] + 11.0 * w[2]),
        SIXTH * (-w[3] + 5.0 * w[2] + 2.0 * w[1]),
        SIXTH * (2.0 * w[2] + 5.0 * w[1] - w[0]),
    ]
}

#[inline(always)]
fn interps_right_r4(w: &[f64; 7]) -> [f64; 4] {
    const TW: f64 = 1.0 / 12.0;
    [
        TW * (-3.0 * w[0] + 13.0 * w[1] - 23.0 * w[2] + 25.0 * w[3]),
        TW * (w[1] - 5.0 * w[2] + 13.0 * w[3] + 3.0 * w[4]),
        TW * (-w[2] + 7.0 * w[3] + 7.0 * w[4] - w[5]),
        TW * (3.0 * w[3] + 13.0 * w[4] - 5.0 * w[5] + w[6]),
    ]
}

#[inline(always)]
fn interps_left_r4(w: &[f64; 7]) -> [f64; 4] {
    const TW: f64 = 1.0 / 12.0;
    [
        TW * (-3.0 * w[6] + 13.0 * w[5] - 23.0 * w[4] + 25.0 * w[3]),
        TW * (w[5] - 5.0 * w[4] + 13.0 * w[3] + 3.0 * w[2]),
        TW * (-w[4] + 7.0 * w[3] + 7.0 * w[2] - w[1]),
        TW * (3.0 * w[3] + 13.0 * w[2] - 5.0 * w[1] + w[0]),
    ]
}

/// Substencil face interpolants of the centre cell, leftmost substencil
/// first: `.0` toward face i+1/2, `.1` toward face i-1/2.
#[allow(dead_code)] // gated by the table tests
pub(crate) fn substencil_face_values(window: &[f64], order: WenoOrder) -> ([f64; 4], [f64; 4]) {
    let mut right = [0.0; 4];
    let mut left = [0.0; 4];
    match order {
        WenoOrder::R2 => {
            let w = window.try_into().unwrap();
            right[..2].copy_from_slice(&interps_right_r2(w));
            left[..2].copy_from_slice(&interps_left_r2(w));
        }
        WenoOrder::R3 => {
            let w = window.try_into().unwrap();
            right[..3].copy_from_slice(&interps_right_r3(w));
            left[..3].copy_from_slice(&interps_left_r3(w));
        }
        WenoOrder::R4 => {
            let w = window.try_into().unwrap();
            right = interps_right_r4(w);
            left = interps_left_r4(w);
        }
    }
    (right, left)
}

#[inline(always)]
pub(super) fn face_pair_r2(w: &[f64; 3], params: &WenoParams) -> FacePair {
    let beta = beta_r2(w);
    let tau = global_indicator(&beta, 2);
    let t = amplifications(&beta, tau, params);
    let left = combine(&t, &D_R2, &interps_right_r2(w));
    let right = combine(&[t[1], t[0]], &D_R2, &interps_left_r2(w));
    FacePair { left, right }
}

#[inline(always)]
pub(super) fn face_pair_r3(w: &[f64; 5], params: &WenoParams) -> FacePair {
    let beta = beta_r3(w);
    let tau = global_indicator(&beta, 3);
    let t = amplifications(&beta, tau, params);
    let left = combine(&t, &D_R3, &interps_right_r3(w));
    let right = combine(&[t[2], t[1], t[0]], &D_R3, &interps_left_r3(w));
    FacePair { left, right }
}

#[inline(always)]
pub(super) fn face_pair_r4(w: &[f64; 7], params: &WenoParams) -> FacePair {
    let beta = beta_r4(w);
    let tau = global_indicator(&beta, 4);
    let t = amplifications(&beta, tau, params);
    let left = combine(&t, &D_R4, &interps_right_r4(w));
    let right = combine(&[t[3], t[2], t[1], t[0]], &D_R4, &interps_left_r4(w));
    FacePair { left, right }
}

#[cfg(test)]
pub(crate) fn optimal_face_weights(order: WenoOrder) -> [f64; 4] {
    match order {
        WenoOrder::R2 => [D_R2[0], D_R2[1], 0.0, 0.0],
        WenoOrder::R3 => [D_R3[0], D_R3[1], D_R3[2], 0.0],
        WenoOrder::R4 => D_R4,
    }
}

/// Classic WENO-JS weights; retained only as a baseline for tests that
/// check the Z weights behave differently at critical points.
#[cfg(test)]
pub(crate) fn wenojs_weights(beta: &[f64], order: WenoOrder, params: &WenoParams) -> [f64; 4] {
    let r = order.r();
    let d = optimal_face_weights(order);
    let mut alpha = [0.0; 4];
    let mut sum = 0.0;
    for k in 0..r {
        alpha[k] = d[k] / (beta[k] + params.epsilon).powi(params.a);
        sum += alpha[k];
    }
    for a in alpha.iter_mut().take(r) {
        *a /= sum;
    }
    alpha
}

// ---- lane kernels: the same arithmetic on L components at once ----
//
// Dimension sweeps reconstruct every flow component over the same window
// positions; doing them together in fixed-size lanes lets the compiler
// vectorize the divisions and square terms across components. Each lane is
// arithmetically identical to the scalar path.

#[inline(always)]
fn lane_sub<const L: usize>(a: &[f64; L], b: &[f64; L]) -> [f64; L] {
    let mut o = [0.0; L];
    for l in 0..L {
        o[l] = a[l] - b[l];
    }
    o
}

#[inline(always)]
fn beta_r3_lanes<const L: usize>(w: &[[f64; L]; 5]) -> [[f64; L]; 3] {
    const C1: f64 = 13.0 / 12.0;
    let mut out = [[0.0; L]; 3];
    for l in 0..L {
        let a = w[0][l] - 2.0 * w[1][l] + w[2][l];
        let b = w[0][l] - 4.0 * w[1][l] + 3.0 * w[2][l];
        out[0][l] = C1 * a * a + 0.25 * b * b;
        let a = w[1][l] - 2.0 * w[2][l] + w[3][l];
        let b = w[1][l] - w[3][l];
        out[1][l] = C1 * a * a + 0.25 * b * b;
        let a = w[2][l] - 2.0 * w[3][l] + w[4][l];
        let b = 3.0 * w[2][l] - 4.0 * w[3][l] + w[4][l];
        out[2][l] = C1 * a * a + 0.25 * b * b;
    }
    out
}

#[inline(always)]
fn beta_r2_lanes<const L: usize>(w: &[[f64; L]; 3]) -> [[f64; L]; 2] {
    let d0 = lane_sub(&w[1], &w[0]);
    let d1 = lane_sub(&w[2], &w[1]);
    let mut out = [[0.0; L]; 2];
    for l in 0..L {
        out[0][l] = d0[l] * d0[l];
        out[1][l] = d1[l] * d1[l];
    }
    out
}

#[inline(always)]
fn beta_r4_lanes<const L: usize>(w: &[[f64; L]; 7]) -> [[f64; L]; 4] {
    const S: f64 = 1.0 / 240.0;
    let mut out = [[0.0; L]; 4];
    for l in 0..L {
        let b0 = w[0][l] * (547.0 * w[0][l] - 3882.0 * w[1][l] + 4642.0 * w[2][l] - 1854.0 * w[3][l])
            + w[1][l] * (7043.0 * w[1][l] - 17246.0 * w[2][l] + 7042.0 * w[3][l])
            + w[2][l] * (11003.0 * w[2][l] - 9402.0 * w[3][l])
            + 2107.0 * w[3][l] * w[3][l];
        let b1 = w[1][l] * (267.0 * w[1][l] - 1642.0 * w[2][l] + 1602.0 * w[3][l] - 494.0 * w[4][l])
            + w[2][l] * (2843.0 * w[2][l] - 5966.0 * w[3][l] + 1922.0 * w[4][l])
            + w[3][l] * (3443.0 * w[3][l] - 2522.0 * w[4][l])
            + 547.0 * w[4][l] * w[4][l];
        let b2 = w[2][l] * (547.0 * w[2][l] - 2522.0 * w[3][l] + 1922.0 * w[4][l] - 494.0 * w[5][l])
            + w[3][l] * (3443.0 * w[3][l] - 5966.0 * w[4][l] + 1602.0 * w[5][l])
            + w[4][l] * (2843.0 * w[4][l] - 1642.0 * w[5][l])
            + 267.0 * w[5][l] * w[5][l];
        let b3 = w[3][l] * (2107.0 * w[3][l] - 9402.0 * w[4][l] + 7042.0 * w[5][l] - 1854.0 * w[6][l])
            + w[4][l] * (11003.0 * w[4][l] - 17246.0 * w[5][l] + 4642.0 * w[6][l])
            + w[5][l] * (7043.0 * w[5][l] - 3882.0 * w[6][l])
            + 547.0 * w[6][l] * w[6][l];
        out[0][l] = S * b0;
        out[1][l] = S * b1;
        out[2][l] = S * b2;
        out[3][l] = S * b3;
    }
    out
}

#[inline(always)]
fn amplifications_lanes<const L: usize, const R: usize>(
    beta: &[[f64; L]; R],
    tau: &[f64; L],
    params: &WenoParams,
) -> [[f64; L]; R] {
    let mut t = [[0.0; L]; R];
    for k in 0..R {
        for l in 0..L {
            let x = 1.0 + tau[l] / (beta[k][l] + params.epsilon);
            t[k][l] = if params.a == 2 { x * x } else { x.powi(params.a) };
        }
    }
    t
}

#[inline(always)]
fn combine_lanes<const L: usize, const R: usize>(
    t: &[[f64; L]; R],
    d: &[f64; R],
    p: &[[f64; L]; R],
) -> [f64; L] {
    let mut num = [0.0; L];
    let mut den = [0.0; L];
    for k in 0..R {
        for l in 0..L {
            let a = d[k] * t[k][l];
            num[l] += a * p[k][l];
            den[l] += a;
        }
    }
    let mut out = [0.0; L];
    for l in 0..L {
        out[l] = num[l] / den[l];
    }
    out
}

/// Lane variant of the fused face-pair kernel: `(left, right)` face states
/// of the centre cell for all L components of the window.
#[inline(always)]
pub fn face_pair_lanes<const L: usize>(
    order: WenoOrder,
    w: &[[f64; L]],
    params: &WenoParams,
) -> ([f64; L], [f64; L]) {
    match order {
        WenoOrder::R2 => {
            let w: &[[f64; L]; 3] = w.try_into().unwrap();
            let beta = beta_r2_lanes(w);
            let mut tau = [0.0; L];
            for l in 0..L {
                tau[l] = (beta[0][l] - beta[1][l]).abs();
            }
            let t = amplifications_lanes(&beta, &tau, params);
            let mut pr = [[0.0; L]; 2];
            let mut pl = [[0.0; L]; 2];
            for l in 0..L {
                pr[0][l] = 0.5 * (-w[0][l] + 3.0 * w[1][l]);
                pr[1][l] = 0.5 * (w[1][l] + w[2][l]);
                pl[0][l] = 0.5 * (-w[2][l] + 3.0 * w[1][l]);
                pl[1][l] = 0.5 * (w[1][l] + w[0][l]);
            }
            let left = combine_lanes(&t, &D_R2, &pr);
            let right = combine_lanes(&[t[1], t[0]], &D_R2, &pl);
            (left, right)
        }
        WenoOrder::R3 => {
            let w: &[[f64; L]; 5] = w.try_into().unwrap();
            let beta = beta_r3_lanes(w);
            let mut tau = [0.0; L];
            for l in 0..L {
                tau[l] = (beta[0][l] - beta[2][l]).abs();
            }
            let t = amplifications_lanes(&beta, &tau, params);
            const SIXTH: f64 = 1.0 / 6.0;
            let mut pr = [[0.0; L]; 3];
            let mut pl = [[0.0; L]; 3];
            for l in 0..L {
                pr[0][l] = SIXTH * (2.0 * w[0][l] - 7.0 * w[1][l] + 11.0 * w[2][l]);
                pr[1][l] = SIXTH * (-w[1][l] + 5.0 * w[2][l] + 2.0 * w[3][l]);
                pr[2][l] = SIXTH * (2.0 * w[2][l] + 5.0 * w[3][l] - w[4][l]);
                pl[0][l] = SIXTH * (2.0 * w[4][l] - 7.0 * w[3][l] + 11.0 * w[2][l]);
                pl[1][l] = SIXTH * (-w[3][l] + 5.0 * w[2][l] + 2.0 * w[1][l]);
                pl[2][l] = SIXTH * (2.0 * w[2][l] + 5.0 * w[1][l] - w[0][l]);
            }
            let left = combine_lanes(&t, &D_R3, &pr);
            let right = combine_lanes(&[t[2], t[1], t[0]], &D_R3, &pl);
            (left, right)
        }
        WenoOrder::R4 => {
            let w: &[[f64; L]; 7] = w.try_into().unwrap();
            let beta = beta_r4_lanes(w);
            let mut tau = [0.0; L];
            for l in 0..L {
                tau[l] = (beta[0][l] - beta[3][l]).abs();
            }
            let t = amplifications_lanes(&beta, &tau, params);
            const TW: f64 = 1.0 / 12.0;
            let mut pr = [[0.0; L]; 4];
            let mut pl = [[0.0; L]; 4];
            for l in 0..L {
                pr[0][l] = TW * (-3.0 * w[0][l] + 13.0 * w[1][l] - 23.0 * w[2][l] + 25.0 * w[3][l]);
                pr[1][l] = TW * (w[1][l] - 5.0 * w[2][l] + 13.0 * w[3][l] + 3.0 * w[4][l]);
                pr[2][l] = TW * (-w[2][l] + 7.0 * w[3][l] + 7.0 * w[4][l] - w[5][l]);
                pr[3][l] = TW * (3.0 * w[3][l] + 13.0 * w[4][l] - 5.0 * w[5][l] + w[6][l]);
                pl[0][l] = TW * (-3.0 * w[6][l] + 13.0 * w[5][l] - 23.0 * w[4][l] + 25.0 * w[3][l]);
                pl[1][l] = TW * (w[5][l] - 5.0 * w[4][l] + 13.0 * w[3][l] + 3.0 * w[2][l]);
                pl[2][l] = TW * (-w[4][l] + 7.0 * w[3][l] + 7.0 * w[2][l] - w[1][l]);
                pl[3][l] = TW * (3.0 * w[3][l] + 13.0 * w[2][l] - 5.0 * w[1][l] + w[0][l]);
            }
            let left = combine_lanes(&t, &D_R4, &pr);
            let right = combine_lanes(&[t[3], t[2], t[1], t[0]], &D_R4, &pl);
            (left, right)
        }
    }
}

/// Lane variant of the Gauss-node evaluation: one set of indicators per
/// window serves both nodes.
#[inline(always)]
pub fn point_values_lanes<const L: usize>(
    order: WenoOrder,
    w: &[[f64; L]],
    params: &WenoParams,
    tables: [&PointEvalTable; 2],
) -> [[f64; L]; 2] {
    let r = order.r();
    let width = order.width();
    // betas and tau per lane
    let mut beta = [[0.0; L]; 4];
    match order {
        WenoOrder::R2 => {
            let wf: &[[f64; L]; 3] = w.try_into().unwrap();
            let b = beta_r2_lanes(wf);
            beta[0] = b[0];
            beta[1] = b[1];
        }
        WenoOrder::R3 => {
            let wf: &[[f64; L]; 5] = w.try_into().unwrap();
            let b = beta_r3_lanes(wf);
            beta[..3].copy_from_slice(&b);
        }
        WenoOrder::R4 => {
            let wf: &[[f64; L]; 7] = w.try_into().unwrap();
            beta = beta_r4_lanes(wf);
        }
    }
    let mut tau = [0.0; L];
    for l in 0..L {
        tau[l] = (beta[0][l] - beta[r - 1][l]).abs();
    }
    let mut out = [[0.0; L]; 2];
    for (ni, table) in tables.iter().enumerate() {
        let mut num = [0.0; L];
        let mut den = [0.0; L];
        for k in 0..r {
            // substencil value at the node for every lane
            let mut p = [0.0; L];
            for (j, wj) in w.iter().enumerate().take(width) {
                let c = table.coeff[k][j];
                if c != 0.0 {
                    for l in 0..L {
                        p[l] += c * wj[l];
                    }
                }
            }
            for l in 0..L {
                let x = 1.0 + tau[l] / (beta[k][l] + params.epsilon);
                let t = if params.a == 2 { x * x } else { x.powi(params.a) };
                let a = table.d[k] * t;
                num[l] += a * p[l];
                den[l] += a;
            }
        }
        for l in 0..L {
            out[ni][l] = num[l] / den[l];
        }
    }
    out
}

/// Public handle to the cached Gauss tables for the lane paths.
pub fn gauss_tables(order: WenoOrder) -> [&'static PointEvalTable; 2] {
    [gauss_point_table(order, GaussNode::Minus), gauss_point_table(order, GaussNode::Plus)]
}
