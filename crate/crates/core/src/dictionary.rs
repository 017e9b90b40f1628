//! Greedy dictionary learning.
//!
//! The learner repeatedly picks the window whose self-join distance,
//! reduced by its distance to the dictionary so far, is smallest. Windows
//! within `floor(m/2)` of an earlier pick are never picked again. Each pick
//! is stored with `floor(k*m)` samples of surrounding context, and
//! overlapping or touching picks are merged into one segment.

use rand::Rng;

use crate::dict_join::join_dictionary;
use crate::error::{Error, Result};
use crate::profiles::{exclusion_zone, self_join, MassContext, MatrixProfile};
use crate::series::{check_window, compute_stats, TimeSeries};

pub const DEFAULT_CONTEXT_FACTOR: f64 = 1.5;
pub const DEFAULT_MAX_ITERATIONS: usize = 1_000_000;

/// A contiguous run of source samples stored verbatim.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub start: usize,
    pub values: Vec<f64>,
}

impl Segment {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn end(&self) -> usize {
        self.start + self.values.len()
    }
}

/// Learned dictionary: merged segments of the source series.
#[derive(Debug, Clone, PartialEq)]
pub struct Dictionary {
    pub(crate) segments: Vec<Segment>,
    pub(crate) m: usize,
    pub(crate) k: f64,
    pub(crate) source_length: usize,
    pub core_starts: Vec<usize>,
    pub(crate) e_max: Option<f64>,
}

impl Dictionary {
    /// Builds a dictionary after checking the structural invariants:
    /// sorted, non-overlapping, finite segments inside the source range.
    /// Segments shorter than `m` are accepted here and rejected at join time.
    pub fn new(
        segments: Vec<Segment>,
        m: usize,
        k: f64,
        source_length: usize,
        core_starts: Vec<usize>,
        e_max: Option<f64>,
    ) -> Result<Self> {
        if m < 2 {
            return Err(Error::WindowTooSmall { m });
        }
        if !(k.is_finite() && k >= 0.0) {
            return Err(Error::Schema(format!("context factor {k} must be finite and >= 0")));
        }
        if let Some(e) = e_max {
            if !(e.is_finite() && e >= 0.0) {
                return Err(Error::Schema(format!("e_max {e} must be finite and >= 0")));
            }
        }
        let mut prev_end = 0;
        for (n, seg) in segments.iter().enumerate() {
            if seg.is_empty() {
                return Err(Error::Schema(format!("segment {n} is empty")));
            }
            if n > 0 && seg.start < prev_end {
                return Err(Error::Schema(format!(
                    "segment {n} starting at {} overlaps or precedes the previous segment ending at {prev_end}",
                    seg.start
                )));
            }
            let end = seg.start.checked_add(seg.len()).filter(|&e| e <= source_length);
            let Some(end) = end else {
                return Err(Error::Schema(format!(
                    "segment {n} starting at {} with length {} exceeds source length {source_length}",
                    seg.start,
                    seg.len()
                )));
            };
            if seg.values.iter().any(|v| !v.is_finite()) {
                return Err(Error::Schema(format!("segment {n} contains a non-finite value")));
            }
            prev_end = end;
        }
        if let Some(&c) = core_starts.iter().find(|&&c| c >= source_length) {
            return Err(Error::Schema(format!("core start {c} outside source length {source_length}")));
        }
        Ok(Dictionary {
            segments,
            m,
            k,
            source_length,
            core_starts,
            e_max,
        })
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn source_length(&self) -> usize {
        self.source_length
    }

    pub fn e_max(&self) -> Option<f64> {
        self.e_max
    }

    pub fn set_e_max(&mut self, e_max: Option<f64>) {
        self.e_max = e_max;
    }

    pub fn stored_samples(&self) -> usize {
        self.segments.iter().map(Segment::len).sum()
    }

    /// `1 - stored / source_length`.
    pub fn space_saving(&self) -> f64 {
        1.0 - self.stored_samples() as f64 / self.source_length as f64
    }

    /// Every length-`m` window of every segment, with its source start.
    pub fn windows(&self) -> impl Iterator<Item = (usize, &[f64])> + '_ {
        let m = self.m;
        self.segments.iter().flat_map(move |seg| {
            seg.values
                .windows(m)
                .enumerate()
                .map(move |(off, w)| (seg.start + off, w))
        })
    }
}

/// When the greedy loop stops.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StopRule {
    /// Stop once the space saving factor drops to this value or below.
    SpaceSaving(f64),
    /// Stop once at least this many samples are stored.
    SampleBudget(usize),
    /// Stop once every source window is within this distance of a core.
    ErrorTarget(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LearnConfig {
    pub m: usize,
    pub k: f64,
    pub stop: StopRule,
    pub max_iterations: usize,
}

impl LearnConfig {
    pub fn new(m: usize, stop: StopRule) -> Self {
        LearnConfig {
            m,
            k: DEFAULT_CONTEXT_FACTOR,
            stop,
            max_iterations: DEFAULT_MAX_ITERATIONS,
        }
    }

    pub fn with_k(mut self, k: f64) -> Self {
        self.k = k;
        self
    }

    pub fn with_max_iterations(mut self, cap: usize) -> Self {
        self.max_iterations = cap;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.m < 2 {
            return Err(Error::WindowTooSmall { m: self.m });
        }
        if !(self.k.is_finite() && self.k >= 0.0) {
            return Err(Error::InvalidConfig(format!("context factor {} must be >= 0", self.k)));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidConfig("max_iterations must be positive".into()));
        }
        match self.stop {
            StopRule::SpaceSaving(s) if !(0.0..1.0).contains(&s) => Err(Error::InvalidConfig(
                format!("space saving target {s} must lie in [0, 1)"),
            )),
            StopRule::SampleBudget(0) => {
                Err(Error::InvalidConfig("sample budget must be positive".into()))
            }
            StopRule::ErrorTarget(e) if !(e.is_finite() && e >= 0.0) => Err(Error::InvalidConfig(
                format!("error target {e} must be finite and >= 0"),
            )),
            _ => Ok(()),
        }
    }
}

/// Union of half-open intervals; touching intervals are joined.
pub fn merge_intervals(intervals: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut sorted: Vec<(usize, usize)> = intervals.iter().copied().filter(|(s, e)| s < e).collect();
    sorted.sort_unstable();
    let mut out: Vec<(usize, usize)> = Vec::with_capacity(sorted.len());
    for (s, e) in sorted {
        match out.last_mut() {
            Some(last) if s <= last.1 => last.1 = last.1.max(e),
            _ => out.push((s, e)),
        }
    }
    out
}

/// Merges `intervals` over `series` and copies their samples verbatim.
pub fn merge_segments(series: &TimeSeries, intervals: &[(usize, usize)]) -> Vec<Segment> {
    merge_intervals(intervals)
        .into_iter()
        .map(|(s, e)| Segment {
            start: s,
            values: series.values()[s..e].to_vec(),
        })
        .collect()
}

/// Incremental state of dictionary learning over one source series.
///
/// [`learn_dictionary`] drives it with the greedy rule; experiments can
/// drive it one pick at a time or with random picks.
pub struct DictionaryLearner<'a> {
    series: &'a TimeSeries,
    m: usize,
    k: f64,
    self_profile: Vec<f64>,
    merged: Option<Vec<f64>>,
    blocked: Vec<bool>,
    available: usize,
    cores: Vec<usize>,
    intervals: Vec<(usize, usize)>,
    stored: usize,
    mass: MassContext<'static>,
}

impl<'a> DictionaryLearner<'a> {
    pub fn new(series: &'a TimeSeries, m: usize, k: f64) -> Result<Self> {
        let profile = self_join(series, m)?;
        Self::with_profile(series, &profile, k)
    }

    /// Reuses a precomputed self-join of `series`.
    pub fn with_profile(series: &'a TimeSeries, profile: &MatrixProfile, k: f64) -> Result<Self> {
        let m = profile.m();
        let n = series.len();
        check_window(m, n)?;
        if n < 2 * m {
            return Err(Error::SeriesTooShort { n, required: 2 * m });
        }
        if profile.len() != series.window_count(m) {
            return Err(Error::LengthMismatch {
                expected: series.window_count(m),
                found: profile.len(),
            });
        }
        if !(k.is_finite() && k >= 0.0) {
            return Err(Error::InvalidConfig(format!("context factor {k} must be >= 0")));
        }
        let count = profile.len();
        Ok(DictionaryLearner {
            series,
            m,
            k,
            self_profile: profile.values().to_vec(),
            merged: None,
            blocked: vec![false; count],
            available: count,
            cores: Vec::new(),
            intervals: Vec::new(),
            stored: 0,
            mass: MassContext::new(
                series.values(),
                std::borrow::Cow::Owned(compute_stats(series, m)?),
            ),
        })
    }

    pub fn cores(&self) -> &[usize] {
        &self.cores
    }

    pub fn stored_samples(&self) -> usize {
        self.stored
    }

    pub fn space_saving(&self) -> f64 {
        1.0 - self.stored as f64 / self.series.len() as f64
    }

    pub fn fully_covered(&self) -> bool {
        self.stored == self.series.len()
    }

    /// Elementwise minimum distance from every source window to the cores
    /// picked before the last [`refresh_profile`](Self::refresh_profile).
    pub fn merged_profile(&self) -> Option<&[f64]> {
        self.merged.as_deref()
    }

    /// Picks the next core greedily; `None` when every window is excluded.
    pub fn add_greedy(&mut self) -> Option<usize> {
        let mut best: Option<(f64, usize)> = None;
        for (j, &p) in self.self_profile.iter().enumerate() {
            if self.blocked[j] {
                continue;
            }
            let score = match &self.merged {
                Some(s) => p - s[j],
                None => p,
            };
            if best.is_none_or(|(b, _)| score < b) {
                best = Some((score, j));
            }
        }
        let (_, j) = best?;
        self.add_core(j);
        Some(j)
    }

    /// Picks a uniformly random admissible core.
    pub fn add_random<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Option<usize> {
        if self.available == 0 {
            return None;
        }
        let target = rng.random_range(0..self.available);
        let j = self
            .blocked
            .iter()
            .enumerate()
            .filter(|(_, &b)| !b)
            .nth(target)
            .map(|(j, _)| j)?;
        self.add_core(j);
        Some(j)
    }

    fn add_core(&mut self, j: usize) {
        let ez = exclusion_zone(self.m);
        let count = self.blocked.len();
        for b in &mut self.blocked[j.saturating_sub(ez)..(j + ez + 1).min(count)] {
            if !*b {
                *b = true;
                self.available -= 1;
            }
        }
        let context = (self.k * self.m as f64).floor() as usize;
        let before = context / 2;
        let after = context - before;
        let n = self.series.len();
        self.cores.push(j);
        self.intervals
            .push((j.saturating_sub(before), (j + self.m + after).min(n)));
        self.intervals = merge_intervals(&self.intervals);
        self.stored = self.intervals.iter().map(|(s, e)| e - s).sum();
    }

    /// Folds the distance profile of the most recent core into the merged
    /// profile.
    pub fn refresh_profile(&mut self) {
        let Some(&j) = self.cores.last() else {
            return;
        };
        let fresh = self.mass.distances(self.series.subsequence(j, self.m));
        match &mut self.merged {
            None => self.merged = Some(fresh),
            Some(s) => {
                for (a, b) in s.iter_mut().zip(fresh) {
                    *a = a.min(b);
                }
            }
        }
    }

    pub fn max_merged(&self) -> f64 {
        self.merged
            .as_ref()
            .map(|s| s.iter().copied().fold(f64::NEG_INFINITY, f64::max))
            .unwrap_or(f64::INFINITY)
    }

    /// Snapshot of the current picks as a dictionary (without `e_max`).
    pub fn dictionary(&self) -> Dictionary {
        Dictionary {
            segments: merge_segments(self.series, &self.intervals),
            m: self.m,
            k: self.k,
            source_length: self.series.len(),
            core_starts: self.cores.clone(),
            e_max: None,
        }
    }
}

enum Picker<'r, R: Rng + ?Sized> {
    Greedy,
    Random(&'r mut R),
}

fn run<R: Rng + ?Sized>(
    mut learner: DictionaryLearner<'_>,
    cfg: &LearnConfig,
    mut picker: Picker<'_, R>,
) -> Result<Dictionary> {
    let n = learner.series.len();
    let needs_profile = matches!(picker, Picker::Greedy) || matches!(cfg.stop, StopRule::ErrorTarget(_));
    let finish = |learner: &DictionaryLearner<'_>| -> Result<Dictionary> {
        let mut d = learner.dictionary();
        d.e_max = Some(compute_e_max(&d, learner.series)?);
        Ok(d)
    };

    let mut iterations = 0;
    loop {
        let picked = match &mut picker {
            Picker::Greedy => learner.add_greedy(),
            Picker::Random(rng) => learner.add_random(*rng),
        };
        if picked.is_none() {
            let partial = finish(&learner)?;
            // Merged context can cover windows that no core profile does.
            if let (StopRule::ErrorTarget(target), Some(e)) = (cfg.stop, partial.e_max) {
                if e <= target {
                    return Ok(partial);
                }
            }
            return Err(Error::NoProgress {
                partial: Box::new(partial),
            });
        }
        iterations += 1;

        let stored = learner.stored_samples();
        let stop = match cfg.stop {
            StopRule::SampleBudget(budget) => stored >= budget,
            StopRule::SpaceSaving(target) => stored as f64 >= (1.0 - target) * n as f64,
            StopRule::ErrorTarget(target) => {
                learner.refresh_profile();
                learner.max_merged() <= target
            }
        };
        if stop || learner.fully_covered() {
            return finish(&learner);
        }
        if iterations >= cfg.max_iterations {
            return Err(Error::IterationCapExceeded { iterations });
        }
        if needs_profile && !matches!(cfg.stop, StopRule::ErrorTarget(_)) {
            learner.refresh_profile();
        }
    }
}

/// Learns a dictionary for `series` with the greedy rule and certifies its
/// maximum approximation error.
pub fn learn_dictionary(series: &TimeSeries, cfg: &LearnConfig) -> Result<Dictionary> {
    cfg.validate()?;
    let learner = DictionaryLearner::new(series, cfg.m, cfg.k)?;
    run::<rand::rngs::ThreadRng>(learner, cfg, Picker::Greedy)
}

/// As [`learn_dictionary`], reusing a precomputed self-join of `series`.
pub fn learn_dictionary_with_profile(
    series: &TimeSeries,
    profile: &MatrixProfile,
    cfg: &LearnConfig,
) -> Result<Dictionary> {
    cfg.validate()?;
    if profile.m() != cfg.m {
        return Err(Error::WindowMismatch {
            dictionary: profile.m(),
            requested: cfg.m,
        });
    }
    let learner = DictionaryLearner::with_profile(series, profile, cfg.k)?;
    run::<rand::rngs::ThreadRng>(learner, cfg, Picker::Greedy)
}

/// Baseline that picks admissible cores uniformly at random, with the same
/// exclusion, context, merging and stop rules as the greedy learner.
pub fn learn_random_baseline<R: Rng + ?Sized>(
    series: &TimeSeries,
    cfg: &LearnConfig,
    rng: &mut R,
) -> Result<Dictionary> {
    cfg.validate()?;
    let learner = DictionaryLearner::new(series, cfg.m, cfg.k)?;
    run(learner, cfg, Picker::Random(rng))
}

/// Largest distance from any source window to its nearest dictionary window.
pub fn compute_e_max(dictionary: &Dictionary, series: &TimeSeries) -> Result<f64> {
    if dictionary.source_length != series.len() {
        return Err(Error::SourceMismatch {
            expected: dictionary.source_length,
            found: series.len(),
        });
    }
    let profile = join_dictionary(series, dictionary, dictionary.m)?;
    Ok(profile
        .values()
        .iter()
        .copied()
        .fold(0.0, f64::max))
}
