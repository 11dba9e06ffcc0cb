//! Polynomial-from-cell-averages machinery.
//!
//! Derives, from first principles, the coefficient row that evaluates a
//! substencil's reconstruction polynomial at an arbitrary point inside the
//! centre cell, and the linear weights that make the convex combination of
//! substencils match the full-stencil reconstruction there. Face-value
//! coefficient tables are hardcoded in the kernels; this module covers the
//! interior points needed by Gauss quadrature de-averaging, and doubles as
//! the independent oracle for the hardcoded tables in tests.
//!
//! Cells are unit width, centred on integer offsets relative to the centre
//! cell; coordinates are in cell units.

use super::weno::GaussNode;
use super::WenoOrder;
use std::sync::OnceLock;

/// Average of x^m over the unit cell centred at offset `j`.
pub(crate) fn avg_monomial(j: f64, m: usize) -> f64 {
    let hi = j + 0.5;
    let lo = j - 0.5;
    (hi.powi(m as i32 + 1) - lo.powi(m as i32 + 1)) / (m as f64 + 1.0)
}

/// Solves `a x = b` in place (partial pivoting); panics on singularity.
pub(crate) fn solve_dense(a: &mut [Vec<f64>], b: &mut [f64]) {
    let n = b.len();
    for col in 0..n {
        let mut piv = col;
        for row in col + 1..n {
            if a[row][col].abs() > a[piv][col].abs() {
                piv = row;
            }
        }
        assert!(a[piv][col].abs() > 1e-13, "singular system in table derivation");
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = 1.0 / a[col][col];
        for row in 0..n {
            if row == col {
                continue;
            }
            let f = a[row][col] * inv;
            if f == 0.0 {
                continue;
            }
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    for i in 0..n {
        b[i] /= a[i][i];
    }
}

/// Coefficient row `c` such that `sum_j c[j] * qbar[j]` is the value at
/// `xi` of the degree-(n-1) polynomial whose cell averages over the cells
/// at offsets `leftmost..leftmost+n` match `qbar`.
pub fn substencil_point_coeffs(n: usize, leftmost: i32, xi: f64) -> Vec<f64> {
    // Row c solves V^T c = e where V[j][m] = avg of x^m over cell j and
    // e[m] = xi^m.
    let mut vt: Vec<Vec<f64>> = (0..n)
        .map(|m| (0..n).map(|j| avg_monomial((leftmost + j as i32) as f64, m)).collect())
        .collect();
    let mut e: Vec<f64> = (0..n).map(|m| xi.powi(m as i32)).collect();
    solve_dense(&mut vt, &mut e);
    e
}

/// Linear weights combining the `r` substencil values at `xi` into the
/// full-stencil reconstruction value there. Solved from exactness on
/// monomial data up to degree 2r-2 and verified against every degree.
pub fn optimal_point_weights(order: WenoOrder, xi: f64) -> [f64; 4] {
    let r = order.r();
    let width = order.width();
    // m-th row: substencil k evaluated at xi on data = averages of x^m.
    let rows = width; // m = 0..2r-2
    let mut eval = vec![vec![0.0; r]; rows];
    for k in 0..r {
        let leftmost = k as i32 - (r as i32 - 1);
        let coeffs = substencil_point_coeffs(r, leftmost, xi);
        for m in 0..rows {
            let mut v = 0.0;
            for (j, c) in coeffs.iter().enumerate() {
                v += c * avg_monomial((leftmost + j as i32) as f64, m);
            }
            eval[m][k] = v;
        }
    }
    // Degrees below r are exact for every substencil and only restate
    // sum-to-one; the binding equations are the degrees r..2r-2.
    let mut a: Vec<Vec<f64>> = Vec::with_capacity(r);
    let mut b: Vec<f64> = Vec::with_capacity(r);
    a.push(vec![1.0; r]);
    b.push(1.0);
    for m in r..width {
        a.push(eval[m].clone());
        b.push(xi.powi(m as i32));
    }
    solve_dense(&mut a, &mut b);
    let mut d = [0.0; 4];
    d[..r].copy_from_slice(&b);
    for m in 0..rows {
        let got: f64 = (0..r).map(|k| d[k] * eval[m][k]).sum();
        let want = xi.powi(m as i32);
        assert!(
            (got - want).abs() < 1e-9 * (1.0 + want.abs()),
            "inconsistent linear weights at xi={xi}, degree {m}: {got} vs {want}"
        );
    }
    d
}

/// Pre-derived evaluation table for one (order, point) pair.
#[derive(Clone, Debug)]
pub struct PointEvalTable {
    /// `coeff[k][j]`: contribution of window cell `j` to substencil `k`'s
    /// value at the point. Window-indexed over all 2r-1 cells.
    pub coeff: [[f64; 7]; 4],
    /// Linear weights at the point.
    pub d: [f64; 4],
}

fn build_table(order: WenoOrder, xi: f64) -> PointEvalTable {
    let r = order.r();
    let mut coeff = [[0.0; 7]; 4];
    for k in 0..r {
        let leftmost = k as i32 - (r as i32 - 1);
        let c = substencil_point_coeffs(r, leftmost, xi);
        for (j, v) in c.iter().enumerate() {
            // window index of substencil cell j
            coeff[k][k + j] = *v;
        }
    }
    let d = optimal_point_weights(order, xi);
    for (k, dk) in d.iter().enumerate().take(r) {
        assert!(
            *dk > 0.0,
            "linear weight d[{k}] = {dk} not positive at xi={xi}; the nonlinear \
             combination would lose convexity"
        );
    }
    PointEvalTable { coeff, d }
}

/// Cached tables for the two Gauss nodes of each order.
pub(super) fn gauss_point_table(order: WenoOrder, node: GaussNode) -> &'static PointEvalTable {
    static TABLES: OnceLock<Vec<PointEvalTable>> = OnceLock::new();
    let all = TABLES.get_or_init(|| {
        let mut v = Vec::with_capacity(6);
        for order in [WenoOrder::R2, WenoOrder::R3, WenoOrder::R4] {
            for node in GaussNode::BOTH {
                v.push(build_table(order, node.xi()));
            }
        }
        v
    });
    let oi = match order {
        WenoOrder::R2 => 0,
        WenoOrder::R3 => 1,
        WenoOrder::R4 => 2,
    };
    let ni = match node {
        GaussNode::Minus => 0,
        GaussNode::Plus => 1,
    };
    &all[oi * 2 + ni]
}

// ---- polynomial helpers for the test oracles ----

/// Coefficients (constant first) of the degree-(n-1) polynomial matching
/// the given cell averages at offsets `leftmost..`.
#[allow(dead_code)] // test oracles
pub(crate) fn poly_from_averages(leftmost: i32, qbar: &[f64]) -> Vec<f64> {
    let n = qbar.len();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|j| (0..n).map(|m| avg_monomial((leftmost + j as i32) as f64, m)).collect())
        .collect();
    let mut b = qbar.to_vec();
    solve_dense(&mut v, &mut b);
    b
}

#[allow(dead_code)] // test oracles
pub(crate) fn poly_derivative(p: &[f64]) -> Vec<f64> {
    if p.len() <= 1 {
        return vec![0.0];
    }
    p.iter().enumerate().skip(1).map(|(m, c)| m as f64 * c).collect()
}

#[allow(dead_code)] // test oracles
pub(crate) fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Integral over the centre cell [-1/2, 1/2].
#[allow(dead_code)] // test oracles
pub(crate) fn poly_integrate_cell(p: &[f64]) -> f64 {
    p.iter()
        .enumerate()
        .map(|(m, c)| c * (0.5f64.powi(m as i32 + 1) - (-0.5f64).powi(m as i32 + 1)) / (m as f64 + 1.0))
        .sum()
}

#[allow(dead_code)] // test oracles
pub(crate) fn poly_eval(p: &[f64], x: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, c| acc * x + c)
}
