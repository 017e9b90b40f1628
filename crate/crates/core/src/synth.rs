//! Seeded synthetic series generators.
//!
//! Random walks use unit-variance Gaussian increments and noise is i.i.d.
//! standard normal. The ECG-like generators compose Gaussian bumps into
//! beat morphologies; they stand in for recorded ECG corpora in
//! experiments.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::dict_join::Region;

/// `n` i.i.d. standard normal samples.
pub fn white_noise<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

/// Cumulative sum of `n` standard normal increments.
pub fn random_walk<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let mut acc = 0.0;
    (0..n)
        .map(|_| {
            acc += rng.sample::<f64, _>(StandardNormal);
            acc
        })
        .collect()
}

/// Heartbeat morphologies for the ECG-like generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Beat {
    Normal,
    /// Premature ventricular contraction: no P wave, wide inverted complex.
    Ventricular,
    /// Bundle branch block: notched, widened R wave.
    BundleBranch,
    /// Fast rhythm: compressed normal morphology with a raised T wave.
    Tachycardia,
}

fn bump(t: f64, center: f64, width: f64, amplitude: f64) -> f64 {
    let z = (t - center) / width;
    amplitude * (-0.5 * z * z).exp()
}

impl Beat {
    /// Beat amplitude at phase `t` in `[0, 1)`.
    pub fn shape(self, t: f64) -> f64 {
        match self {
            Beat::Normal => {
                bump(t, 0.20, 0.025, 0.15)
                    + bump(t, 0.36, 0.010, -0.10)
                    + bump(t, 0.40, 0.012, 1.00)
                    + bump(t, 0.44, 0.012, -0.25)
                    + bump(t, 0.70, 0.050, 0.30)
            }
            Beat::Ventricular => {
                bump(t, 0.38, 0.040, 0.45) + bump(t, 0.48, 0.060, -1.10) + bump(t, 0.75, 0.070, 0.35)
            }
            Beat::BundleBranch => {
                bump(t, 0.18, 0.025, 0.12)
                    + bump(t, 0.38, 0.018, 0.80)
                    + bump(t, 0.46, 0.018, 0.70)
                    + bump(t, 0.52, 0.015, -0.30)
                    + bump(t, 0.78, 0.050, -0.20)
            }
            Beat::Tachycardia => {
                bump(t, 0.12, 0.030, 0.10)
                    + bump(t, 0.30, 0.015, 0.90)
                    + bump(t, 0.34, 0.015, -0.30)
                    + bump(t, 0.55, 0.060, 0.45)
            }
        }
    }

    /// One clean beat sampled at `len` points.
    pub fn render(self, len: usize) -> Vec<f64> {
        (0..len).map(|i| self.shape(i as f64 / len as f64)).collect()
    }
}

/// Parameters of the ECG-like generator.
#[derive(Debug, Clone)]
pub struct EcgParams {
    /// Mean beat length in samples.
    pub period: usize,
    /// Maximum absolute deviation of each beat length from `period`.
    pub jitter: usize,
    /// Relative per-beat amplitude variation (uniform in `1 +/- amp_jitter`).
    pub amp_jitter: f64,
    /// Standard deviation of additive Gaussian noise.
    pub noise: f64,
}

impl Default for EcgParams {
    fn default() -> Self {
        EcgParams {
            period: 100,
            jitter: 3,
            amp_jitter: 0.05,
            noise: 0.01,
        }
    }
}

fn beat_length<R: Rng + ?Sized>(p: &EcgParams, rng: &mut R) -> usize {
    if p.jitter == 0 {
        p.period
    } else {
        let lo = p.period.saturating_sub(p.jitter).max(2);
        rng.random_range(lo..=p.period + p.jitter)
    }
}

fn push_beat<R: Rng + ?Sized>(out: &mut Vec<f64>, beat: Beat, len: usize, p: &EcgParams, rng: &mut R) {
    let gain = if p.amp_jitter > 0.0 {
        1.0 + rng.random_range(-p.amp_jitter..=p.amp_jitter)
    } else {
        1.0
    };
    for i in 0..len {
        let noise: f64 = rng.sample(StandardNormal);
        out.push(gain * beat.shape(i as f64 / len as f64) + p.noise * noise);
    }
}

/// Quasi-periodic normal-rhythm series of exactly `n` samples.
pub fn ecg_like<R: Rng + ?Sized>(n: usize, p: &EcgParams, rng: &mut R) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + p.period + p.jitter);
    while out.len() < n {
        let len = beat_length(p, rng);
        push_beat(&mut out, Beat::Normal, len, p, rng);
    }
    out.truncate(n);
    out
}

/// Normal-rhythm series with `anomalies` ventricular beats planted at random
/// beat positions, at least two beats apart and away from both ends.
/// Returns the series and the sample regions of the planted beats.
pub fn ecg_with_anomalies<R: Rng + ?Sized>(
    n: usize,
    anomalies: usize,
    p: &EcgParams,
    rng: &mut R,
) -> (Vec<f64>, Vec<Region>) {
    let beats = n / p.period;
    let mut slots: Vec<usize> = (2..beats.saturating_sub(2)).collect();
    slots.shuffle(rng);
    let mut chosen: Vec<usize> = Vec::new();
    for s in slots {
        if chosen.len() == anomalies {
            break;
        }
        if chosen.iter().all(|&c| c.abs_diff(s) > 2) {
            chosen.push(s);
        }
    }

    let mut out = Vec::with_capacity(n + p.period + p.jitter);
    let mut regions = Vec::new();
    let mut beat_index = 0;
    while out.len() < n {
        let len = beat_length(p, rng);
        let start = out.len();
        if chosen.contains(&beat_index) {
            push_beat(&mut out, Beat::Ventricular, len, p, rng);
            regions.push(Region {
                start,
                end: (start + len).min(n),
            });
        } else {
            push_beat(&mut out, Beat::Normal, len, p, rng);
        }
        beat_index += 1;
    }
    out.truncate(n);
    regions.retain(|r| r.start < r.end);
    (out, regions)
}

/// Shapes used by the template experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Template {
    Sine,
    Ramp,
    VShape,
    Crown,
}

impl Template {
    pub const ALL: [Template; 4] = [Template::Sine, Template::Ramp, Template::VShape, Template::Crown];

    fn shape(self, t: f64) -> f64 {
        match self {
            Template::Sine => (2.0 * std::f64::consts::PI * t).sin(),
            Template::Ramp => {
                if t < 0.7 {
                    (3.0 * t).min(1.0)
                } else {
                    0.0
                }
            }
            Template::VShape => (2.0 * t - 1.0).abs(),
            Template::Crown => {
                bump(t, 0.2, 0.06, 0.7) + bump(t, 0.5, 0.06, 1.0) + bump(t, 0.8, 0.06, 0.7)
            }
        }
    }

    /// Zero-mean, unit-variance rendering of length `len`.
    pub fn render(self, len: usize) -> Vec<f64> {
        let raw: Vec<f64> = (0..len).map(|i| self.shape(i as f64 / len as f64)).collect();
        standardize(&raw)
    }
}

fn standardize(x: &[f64]) -> Vec<f64> {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let sd = (x.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n).sqrt();
    x.iter().map(|v| (v - mean) / sd).collect()
}

/// Each template in `order` repeated `reps` times back to back.
pub fn template_blocks(order: &[Template], len: usize, reps: usize) -> Vec<f64> {
    order
        .iter()
        .flat_map(|t| {
            let shape = t.render(len);
            std::iter::repeat_n(shape, reps).flatten()
        })
        .collect()
}

/// A background template repeated `background_reps` times with instances of
/// every other template (between `min_inserts` and `max_inserts` of each,
/// inclusive) inserted at random boundaries, plus Gaussian noise.
pub fn template_mixture<R: Rng + ?Sized>(
    background: Template,
    len: usize,
    background_reps: usize,
    inserts: (usize, usize),
    noise: f64,
    rng: &mut R,
) -> Vec<f64> {
    let mut pieces: Vec<Template> = vec![background; background_reps];
    for t in Template::ALL.into_iter().filter(|&t| t != background) {
        let count = rng.random_range(inserts.0..=inserts.1);
        for _ in 0..count {
            // never at the very start, so the series opens with background
            let at = rng.random_range(1..=pieces.len());
            pieces.insert(at, t);
        }
    }
    let rendered: Vec<Vec<f64>> = Template::ALL.iter().map(|t| t.render(len)).collect();
    let idx = |t: Template| Template::ALL.iter().position(|&x| x == t).unwrap();
    pieces
        .into_iter()
        .flat_map(|t| rendered[idx(t)].clone())
        .map(|v| v + noise * rng.sample::<f64, _>(StandardNormal))
        .collect()
}

/// Four consecutive strictly periodic regimes, one per [`Beat`] kind, each
/// lasting a random number of beats in `beats`, with additive noise.
/// Returns the series and each regime's clean one-beat template.
pub fn regime_series<R: Rng + ?Sized>(
    period: usize,
    beats: (usize, usize),
    noise: f64,
    rng: &mut R,
) -> (Vec<f64>, Vec<Vec<f64>>) {
    let mut kinds = [Beat::BundleBranch, Beat::Ventricular, Beat::Normal, Beat::Tachycardia];
    kinds[1..].shuffle(rng);
    let mut out = Vec::new();
    let mut templates = Vec::new();
    for kind in kinds {
        let shape = kind.render(period);
        let count = rng.random_range(beats.0..=beats.1);
        for _ in 0..count {
            out.extend(shape.iter().map(|v| v + noise * rng.sample::<f64, _>(StandardNormal)));
        }
        templates.push(shape);
    }
    (out, templates)
}
