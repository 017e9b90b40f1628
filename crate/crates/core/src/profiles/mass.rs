//! FFT sliding dot products for distance profiles.

use std::borrow::Cow;
use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::series::{
    constancy_threshold, constant_mismatch_distance, correlation_to_distance, exact_moments,
    SubseqStats,
};

/// A series transformed once so that many queries can be answered with one
/// forward and one inverse transform each.
pub(crate) struct MassContext<'a> {
    stats: Cow<'a, SubseqStats>,
    len: usize,
    fft_len: usize,
    spectrum: Vec<Complex<f64>>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl<'a> MassContext<'a> {
    pub(crate) fn new(values: &[f64], stats: Cow<'a, SubseqStats>) -> Self {
        let len = values.len();
        let fft_len = len.next_power_of_two();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(fft_len);
        let inverse = planner.plan_fft_inverse(fft_len);

        // The global offset does not change any z-normalized distance but
        // inflates the transform's rounding error.
        let offset = values.iter().sum::<f64>() / len as f64;
        let mut spectrum: Vec<Complex<f64>> = values
            .iter()
            .map(|&v| Complex::new(v - offset, 0.0))
            .chain(std::iter::repeat(Complex::new(0.0, 0.0)))
            .take(fft_len)
            .collect();
        forward.process(&mut spectrum);
        MassContext {
            stats,
            len,
            fft_len,
            spectrum,
            forward,
            inverse,
        }
    }

    /// Distances from `query` (length `m`) to every window.
    pub(crate) fn distances(&self, query: &[f64]) -> Vec<f64> {
        let m = self.stats.m();
        let count = self.stats.len();
        let (mean_q, m2_q) = exact_moments(query);
        let sd_q = (m2_q / m as f64).sqrt();
        let threshold = self.stats.threshold().max(constancy_threshold(query));
        let mask = self.stats.constant_mask();

        if sd_q < threshold {
            let mismatch = constant_mismatch_distance(m);
            return mask.iter().map(|&c| if c { 0.0 } else { mismatch }).collect();
        }

        let mut buf = vec![Complex::new(0.0, 0.0); self.fft_len];
        for (k, &q) in query.iter().enumerate() {
            buf[m - 1 - k] = Complex::new(q - mean_q, 0.0);
        }
        self.forward.process(&mut buf);
        for (b, s) in buf.iter_mut().zip(&self.spectrum) {
            *b *= s;
        }
        self.inverse.process(&mut buf);
        let scale = 1.0 / self.fft_len as f64;
        debug_assert!(self.len >= m);

        let stds = self.stats.stds();
        (0..count)
            .map(|i| {
                if mask[i] {
                    return constant_mismatch_distance(m);
                }
                let cov = buf[i + m - 1].re * scale;
                let rho = cov / (m as f64 * sd_q * stds[i]);
                correlation_to_distance(rho, m)
            })
            .collect()
    }
}
