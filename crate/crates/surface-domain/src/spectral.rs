use num_complex::Complex64;
use rustfft::FftPlanner;

/// Derivative of a periodic sequence sampled on n uniform points of a period
/// of length `period`, via FFT. Exact for trigonometric polynomials resolved
/// by the grid.
pub fn spectral_derivative(values: &[Complex64], period: f64) -> Vec<Complex64> {
    let n = values.len();
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(n);
    let ifft = planner.plan_fft_inverse(n);
    let mut buf = values.to_vec();
    fft.process(&mut buf);
    let scale = 2.0 * std::f64::consts::PI / period;
    for (k, v) in buf.iter_mut().enumerate() {
        // signed frequency; the Nyquist mode of an even grid differentiates to 0
        let kk = if 2 * k < n {
            k as f64
        } else if 2 * k == n {
            0.0
        } else {
            k as f64 - n as f64
        };
        *v *= Complex64::new(0.0, kk * scale);
    }
    ifft.process(&mut buf);
    for v in buf.iter_mut() {
        *v /= n as f64;
    }
    buf
}

/// Values of the antiderivative F(x_j) = integral_0^{x_j} g of a periodic
/// sequence sampled on n uniform points, via FFT: the mean contributes the
/// linear part, the oscillatory part is divided by ik. Exact for resolved
/// trigonometric polynomials.
pub fn spectral_antiderivative(values: &[Complex64], period: f64) -> Vec<Complex64> {
    let n = values.len();
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(n);
    let ifft = planner.plan_fft_inverse(n);
    let mut buf = values.to_vec();
    fft.process(&mut buf);
    let mean = buf[0] / n as f64;
    let scale = 2.0 * std::f64::consts::PI / period;
    buf[0] = Complex64::new(0.0, 0.0);
    for (k, v) in buf.iter_mut().enumerate().skip(1) {
        let kk = if 2 * k < n {
            k as f64
        } else if 2 * k == n {
            // Nyquist: its centered derivative convention integrates to 0
            0.0
        } else {
            k as f64 - n as f64
        };
        if kk == 0.0 {
            *v = Complex64::new(0.0, 0.0);
        } else {
            *v /= Complex64::new(0.0, kk * scale);
        }
    }
    ifft.process(&mut buf);
    let osc: Vec<Complex64> = buf.iter().map(|v| v / n as f64).collect();
    (0..n)
        .map(|j| {
            let x = period * j as f64 / n as f64;
            osc[j] - osc[0] + mean * x
        })
        .collect()
}

/// Dense spectral differentiation matrix (row-major n x n) on a uniform
/// periodic grid, for sections twisted by a boundary phase e^{2 pi i eps}:
/// column k is the derivative of the k-th twisted delta sequence.
pub fn spectral_derivative_matrix(n: usize, period: f64, eps: f64) -> Vec<Complex64> {
    // Conjugate by the phase ramp: d/dx on twisted sections equals
    // P (d/dx + 2 pi i eps / period) P^-1 on periodic ones, with
    // P = diag(e^{2 pi i eps x_j / period}).
    let mut cols = vec![Complex64::new(0.0, 0.0); n * n];
    let k0 = 2.0 * std::f64::consts::PI * eps / period;
    for k in 0..n {
        let mut e = vec![Complex64::new(0.0, 0.0); n];
        e[k] = Complex64::new(1.0, 0.0);
        let mut de = spectral_derivative(&e, period);
        for (j, v) in de.iter_mut().enumerate() {
            let phase = Complex64::from_polar(1.0, k0 * period * ((j as f64 - k as f64) / n as f64));
            *v = *v * phase + if j == k { Complex64::new(0.0, k0) } else { Complex64::new(0.0, 0.0) };
        }
        // de currently approximates derivative of periodic delta conjugated;
        // assemble column k
        for j in 0..n {
            cols[j * n + k] = de[j];
        }
    }
    cols
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_of_plane_wave_is_exact() {
        let n = 32;
        let period = 2.0 * std::f64::consts::PI;
        let vals: Vec<Complex64> = (0..n)
            .map(|j| {
                let x = period * j as f64 / n as f64;
                Complex64::new((3.0 * x).cos(), 0.0)
            })
            .collect();
        let d = spectral_derivative(&vals, period);
        for (j, v) in d.iter().enumerate() {
            let x = period * j as f64 / n as f64;
            assert!((v.re + 3.0 * (3.0 * x).sin()).abs() < 1e-12);
            assert!(v.im.abs() < 1e-12);
        }
    }

    #[test]
    fn twisted_matrix_reproduces_twisted_wave() {
        let n = 24;
        let period = 2.0 * std::f64::consts::PI;
        let eps = 0.5;
        let m = spectral_derivative_matrix(n, period, eps);
        // psi(x) = e^{i (q + eps) x * (2 pi / period)} is a twisted section
        let q = -2.0;
        let kk = (q + eps) * 2.0 * std::f64::consts::PI / period;
        let psi: Vec<Complex64> = (0..n)
            .map(|j| Complex64::from_polar(1.0, kk * period * j as f64 / n as f64))
            .collect();
        for j in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..n {
                acc += m[j * n + k] * psi[k];
            }
            let expect = Complex64::new(0.0, kk) * psi[j];
            assert!(
                (acc - expect).norm() < 1e-10,
                "row {j}: {acc} vs {expect}"
            );
        }
    }
}

#[cfg(test)]
mod antiderivative_tests {
    use super::*;

    #[test]
    fn antiderivative_of_trig_plus_mean() {
        let n = 32;
        let period = 2.0 * std::f64::consts::PI;
        // g = 3 + cos(2x): F = 3x + sin(2x)/2
        let vals: Vec<Complex64> = (0..n)
            .map(|j| {
                let x = period * j as f64 / n as f64;
                Complex64::new(3.0 + (2.0 * x).cos(), 0.0)
            })
            .collect();
        let f = spectral_antiderivative(&vals, period);
        for (j, v) in f.iter().enumerate() {
            let x = period * j as f64 / n as f64;
            let expect = 3.0 * x + (2.0 * x).sin() / 2.0;
            assert!((v.re - expect).abs() < 1e-12, "at {x}: {} vs {expect}", v.re);
            assert!(v.im.abs() < 1e-12);
        }
    }
}
