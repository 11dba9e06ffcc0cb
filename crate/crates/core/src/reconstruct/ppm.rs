//! Piecewise parabolic reconstruction: 4th-order interface interpolation
//! with the Colella-Woodward monotonization.

use super::FacePair;

/// Unlimited 4th-order interface values from a 5-cell window.
pub fn ppm_face_values_unlimited(window: &[f64]) -> FacePair {
    let w: &[f64; 5] = window.try_into().expect("PPM needs a 5-cell stencil");
    const C7: f64 = 7.0 / 12.0;
    const C1: f64 = 1.0 / 12.0;
    let right_face = C7 * (w[2] + w[3]) - C1 * (w[1] + w[4]);
    let left_face = C7 * (w[1] + w[2]) - C1 * (w[0] + w[3]);
    FacePair { left: right_face, right: left_face }
}

/// Limited parabola endpoints for the centre cell.
pub fn ppm_face_values(window: &[f64]) -> FacePair {
    let w: &[f64; 5] = window.try_into().expect("PPM needs a 5-cell stencil");
    let (ql, qr) = limited_endpoints(w);
    FacePair { left: qr, right: ql }
}

/// Limited parabola evaluated at cell-local coordinate `xi` in [-1/2, 1/2].
pub fn ppm_point_value(window: &[f64], xi: f64) -> f64 {
    let w: &[f64; 5] = window.try_into().expect("PPM needs a 5-cell stencil");
    let (ql, qr) = limited_endpoints(w);
    let q = w[2];
    let s = xi + 0.5;
    let dq = qr - ql;
    let q6 = 6.0 * (q - 0.5 * (ql + qr));
    ql + s * (dq + q6 * (1.0 - s))
}

// Monotonized central difference of van Leer type.
#[inline]
fn limited_slope(qm: f64, q0: f64, qp: f64) -> f64 {
    if (qp - q0) * (q0 - qm) <= 0.0 {
        return 0.0;
    }
    let d = 0.5 * (qp - qm);
    let bound = (2.0 * (qp - q0).abs()).min(2.0 * (q0 - qm).abs());
    d.signum() * d.abs().min(bound)
}

// Interface values from monotonized slopes (reduces to the plain 4th-order
// formula where the data is smooth and monotone), then Colella-Woodward
// parabola limiting: collapse at local extrema, otherwise pull an endpoint
// in when the parabola would overshoot inside the cell.
#[inline]
fn limited_endpoints(w: &[f64; 5]) -> (f64, f64) {
    let s1 = limited_slope(w[0], w[1], w[2]);
    let s2 = limited_slope(w[1], w[2], w[3]);
    let s3 = limited_slope(w[2], w[3], w[4]);
    let mut ql = w[1] + 0.5 * (w[2] - w[1]) - (s2 - s1) / 6.0;
    let mut qr = w[2] + 0.5 * (w[3] - w[2]) - (s3 - s2) / 6.0;
    let q = w[2];
    if (qr - q) * (q - ql) <= 0.0 {
        return (q, q);
    }
    let dq = qr - ql;
    let q6 = 6.0 * (q - 0.5 * (ql + qr));
    if dq * q6 > dq * dq {
        ql = 3.0 * q - 2.0 * qr;
    } else if -(dq * dq) > dq * q6 {
        qr = 3.0 * q - 2.0 * ql;
    }
    (ql, qr)
}
