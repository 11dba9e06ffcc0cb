//! Complex FFT helpers on periodic cubes, with a per-size plan registry.
//!
//! Forward transforms carry the 1/N^d normalization so that the sum of
//! |q_hat|^2 over all modes equals the volume average of q^2 (discrete
//! Parseval in mean form).

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

type Plans = Mutex<HashMap<(usize, bool), Arc<dyn Fft<f64>>>>;

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    static REGISTRY: OnceLock<Plans> = OnceLock::new();
    let registry = REGISTRY.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = registry.lock().unwrap();
    map.entry((n, inverse))
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            if inverse {
                planner.plan_fft_inverse(n)
            } else {
                planner.plan_fft_forward(n)
            }
        })
        .clone()
}

/// Signed integer wavenumber of FFT bin `m` on an n-point grid.
#[inline]
pub fn wavenumber(m: usize, n: usize) -> i64 {
    if m as i64 <= n as i64 / 2 {
        m as i64
    } else {
        m as i64 - n as i64
    }
}

/// In-place FFT along every axis of an n^3 cube (x fastest). `inverse`
/// performs the unnormalized synthesis; the forward analysis divides by
/// n^3 so the pair is an identity.
pub fn fft3_inplace(data: &mut [Complex<f64>], n: usize, inverse: bool) {
    assert_eq!(data.len(), n * n * n);
    let fft = plan(n, inverse);
    let mut scratch = vec![Complex::default(); fft.get_inplace_scratch_len()];
    // x lines are contiguous
    for line in data.chunks_exact_mut(n) {
        fft.process_with_scratch(line, &mut scratch);
    }
    // y and z lines are gathered into a buffer
    let mut buf = vec![Complex::default(); n];
    for iz in 0..n {
        for ix in 0..n {
            for (iy, b) in buf.iter_mut().enumerate() {
                *b = data[(iz * n + iy) * n + ix];
            }
            fft.process_with_scratch(&mut buf, &mut scratch);
            for (iy, b) in buf.iter().enumerate() {
                data[(iz * n + iy) * n + ix] = *b;
            }
        }
    }
    for iy in 0..n {
        for ix in 0..n {
            for (iz, b) in buf.iter_mut().enumerate() {
                *b = data[(iz * n + iy) * n + ix];
            }
            fft.process_with_scratch(&mut buf, &mut scratch);
            for (iz, b) in buf.iter().enumerate() {
                data[(iz * n + iy) * n + ix] = *b;
            }
        }
    }
    if !inverse {
        let scale = 1.0 / (n * n * n) as f64;
        for v in data.iter_mut() {
            *v *= scale;
        }
    }
}

/// Forward transform of a real scalar field on an n^3 cube.
pub fn forward_real(field: &[f64], n: usize) -> Vec<Complex<f64>> {
    assert_eq!(field.len(), n * n * n);
    let mut data: Vec<Complex<f64>> = field.iter().map(|&v| Complex::new(v, 0.0)).collect();
    fft3_inplace(&mut data, n, false);
    data
}

/// Inverse transform, returning the real parts (the imaginary residue of a
/// Hermitian spectrum is rounding noise).
pub fn inverse_to_real(mut spectrum: Vec<Complex<f64>>, n: usize) -> Vec<f64> {
    fft3_inplace(&mut spectrum, n, true);
    spectrum.into_iter().map(|c| c.re).collect()
}

/// 2D variant on an n^2 grid (x fastest), forward-normalized like the cube.
pub fn fft2_inplace(data: &mut [Complex<f64>], n: usize, inverse: bool) {
    assert_eq!(data.len(), n * n);
    let fft = plan(n, inverse);
    let mut scratch = vec![Complex::default(); fft.get_inplace_scratch_len()];
    for line in data.chunks_exact_mut(n) {
        fft.process_with_scratch(line, &mut scratch);
    }
    let mut buf = vec![Complex::default(); n];
    for ix in 0..n {
        for (iy, b) in buf.iter_mut().enumerate() {
            *b = data[iy * n + ix];
        }
        fft.process_with_scratch(&mut buf, &mut scratch);
        for (iy, b) in buf.iter().enumerate() {
            data[iy * n + ix] = *b;
        }
    }
    if !inverse {
        let scale = 1.0 / (n * n) as f64;
        for v in data.iter_mut() {
            *v *= scale;
        }
    }
}
