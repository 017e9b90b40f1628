//! Time series container, rolling window statistics and the z-normalized
//! Euclidean distance.

use crate::error::{Error, Result};

/// Relative constancy threshold: a window is constant when its population
/// standard deviation is below `CONSTANCY_REL * max(1, max|sample|)`.
pub const CONSTANCY_REL: f64 = 1e-8;

/// Windows between two exact recomputations of the rolling statistics.
const STATS_REFRESH: usize = 1024;

/// A finite, real-valued time series.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    values: Vec<f64>,
}

impl TimeSeries {
    /// Wraps `values`, rejecting NaN and infinities.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteInput { index });
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The length-`m` subsequence starting at `start`.
    pub fn subsequence(&self, start: usize, m: usize) -> &[f64] {
        &self.values[start..start + m]
    }

    /// Number of length-`m` windows, or zero when `m > n`.
    pub fn window_count(&self, m: usize) -> usize {
        (self.len() + 1).saturating_sub(m)
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

impl TryFrom<Vec<f64>> for TimeSeries {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

/// Absolute constancy threshold for a collection of samples.
pub fn constancy_threshold(values: &[f64]) -> f64 {
    let scale = values.iter().fold(1.0_f64, |acc, v| acc.max(v.abs()));
    CONSTANCY_REL * scale
}

pub(crate) fn check_window(m: usize, n: usize) -> Result<()> {
    if m < 2 {
        return Err(Error::WindowTooSmall { m });
    }
    if m > n {
        return Err(Error::WindowTooLarge { m, n });
    }
    Ok(())
}

/// Per-window mean and population standard deviation for every length-`m`
/// window of a series.
#[derive(Debug, Clone, PartialEq)]
pub struct SubseqStats {
    m: usize,
    means: Vec<f64>,
    stds: Vec<f64>,
    constant_mask: Vec<bool>,
    threshold: f64,
}

impl SubseqStats {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }

    pub fn stds(&self) -> &[f64] {
        &self.stds
    }

    pub fn constant_mask(&self) -> &[bool] {
        &self.constant_mask
    }

    /// Absolute standard-deviation threshold below which a window is constant.
    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn len(&self) -> usize {
        self.means.len()
    }

    pub fn is_empty(&self) -> bool {
        self.means.is_empty()
    }
}

/// Rolling mean and population standard deviation of every length-`m`
/// window of `series`.
pub fn compute_stats(series: &TimeSeries, m: usize) -> Result<SubseqStats> {
    check_window(m, series.len())?;
    let threshold = constancy_threshold(series.values());
    Ok(stats_with_threshold(series.values(), m, threshold))
}

/// Same as [`compute_stats`] on a raw slice with an externally chosen
/// constancy threshold. The caller guarantees `2 <= m <= values.len()`.
pub(crate) fn stats_with_threshold(values: &[f64], m: usize, threshold: f64) -> SubseqStats {
    let count = values.len() + 1 - m;
    let mut means = Vec::with_capacity(count);
    let mut m2s = Vec::with_capacity(count);
    let inv_m = 1.0 / m as f64;

    let (mut mean, mut m2) = (0.0, 0.0);
    for i in 0..count {
        if i % STATS_REFRESH == 0 {
            (mean, m2) = exact_moments(&values[i..i + m]);
        } else {
            // Sliding Welford update: drop values[i-1], add values[i+m-1].
            let outgoing = values[i - 1];
            let incoming = values[i + m - 1];
            let prev_mean = mean;
            mean += (incoming - outgoing) * inv_m;
            m2 += (incoming - outgoing) * (incoming - mean + outgoing - prev_mean);
            if m2 < 0.0 {
                m2 = 0.0;
            }
        }
        means.push(mean);
        m2s.push(m2);
    }

    let stds: Vec<f64> = m2s.iter().map(|&s| (s * inv_m).max(0.0).sqrt()).collect();
    let constant_mask = stds.iter().map(|&s| s < threshold).collect();
    SubseqStats {
        m,
        means,
        stds,
        constant_mask,
        threshold,
    }
}

/// Mean and sum of squared deviations by the two-pass method.
pub(crate) fn exact_moments(window: &[f64]) -> (f64, f64) {
    let n = window.len() as f64;
    let mean = window.iter().sum::<f64>() / n;
    let mut correction = 0.0;
    let mut m2 = 0.0;
    for &x in window {
        let d = x - mean;
        correction += d;
        m2 += d * d;
    }
    let mean = mean + correction / n;
    let m2 = (m2 - correction * correction / n).max(0.0);
    (mean, m2)
}

/// Largest possible z-normalized distance between two length-`m` windows.
pub fn max_distance(m: usize) -> f64 {
    2.0 * (m as f64).sqrt()
}

/// Distance assigned when exactly one window is constant.
pub fn constant_mismatch_distance(m: usize) -> f64 {
    (2.0 * m as f64).sqrt()
}

/// Converts a Pearson correlation into the z-normalized Euclidean distance.
#[inline]
pub(crate) fn correlation_to_distance(rho: f64, m: usize) -> f64 {
    let rho = rho.clamp(-1.0, 1.0);
    (2.0 * m as f64 * (1.0 - rho)).max(0.0).sqrt().min(max_distance(m))
}

/// Euclidean distance between the z-normalized copies of `a` and `b`.
///
/// Two constant windows are at distance 0; a constant and a non-constant
/// window are at `sqrt(2m)`. Constancy is judged against
/// `1e-8 * max(1, max|a|, max|b|)`.
pub fn znorm_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    let m = a.len();
    if m < 2 {
        return Err(Error::WindowTooSmall { m });
    }
    let threshold = constancy_threshold(a).max(constancy_threshold(b));
    Ok(znorm_distance_unchecked(a, b, threshold))
}

pub(crate) fn znorm_distance_unchecked(a: &[f64], b: &[f64], threshold: f64) -> f64 {
    let m = a.len();
    let (mean_a, m2_a) = exact_moments(a);
    let (mean_b, m2_b) = exact_moments(b);
    let sd_a = (m2_a / m as f64).sqrt();
    let sd_b = (m2_b / m as f64).sqrt();
    match (sd_a < threshold, sd_b < threshold) {
        (true, true) => return 0.0,
        (true, false) | (false, true) => return constant_mismatch_distance(m),
        (false, false) => {}
    }
    let mut sum = 0.0;
    for (&x, &y) in a.iter().zip(b) {
        let d = (x - mean_a) / sd_a - (y - mean_b) / sd_b;
        sum += d * d;
    }
    sum.sqrt().min(max_distance(m))
}
