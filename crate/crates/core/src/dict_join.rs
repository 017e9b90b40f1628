//! Joins against a dictionary and the anomaly-detection consumers built on
//! top of them.

use crate::dictionary::Dictionary;
use crate::error::{Error, Result};
use crate::profiles::{ab_join_prepared, exclusion_zone, JoinKind, MatrixProfile, Prepared, NO_NEIGHBOR};
use crate::series::{constancy_threshold, TimeSeries};

/// Approximate AB-join of `query` against the windows of `dictionary`.
///
/// Each segment is joined exactly and the results are merged by elementwise
/// minimum; neighbor indices are reported in source coordinates. Every
/// entry is at least the exact AB-join value against the source series and
/// at most that value plus the dictionary's `e_max`.
pub fn join_dictionary(query: &TimeSeries, dictionary: &Dictionary, m: usize) -> Result<MatrixProfile> {
    if m != dictionary.m() {
        return Err(Error::WindowMismatch {
            dictionary: dictionary.m(),
            requested: m,
        });
    }
    if dictionary.segments().is_empty() {
        return Err(Error::EmptyDictionary);
    }
    if let Some(seg) = dictionary.segments().iter().find(|s| s.len() < m) {
        return Err(Error::SegmentTooShort {
            start: seg.start,
            length: seg.len(),
            m,
        });
    }
    if query.len() < m {
        return Err(Error::SeriesTooShort {
            n: query.len(),
            required: m,
        });
    }

    // One threshold for the whole dictionary, so a dictionary holding the
    // entire source reproduces the exact join bit for bit.
    let threshold = dictionary
        .segments()
        .iter()
        .map(|s| constancy_threshold(&s.values))
        .fold(0.0, f64::max);
    let a = Prepared::new(query.values(), m, constancy_threshold(query.values()));
    let count = query.window_count(m);
    let mut values = vec![f64::INFINITY; count];
    let mut indices = vec![NO_NEIGHBOR; count];
    for seg in dictionary.segments() {
        let b = Prepared::new(&seg.values, m, threshold);
        let part = ab_join_prepared(&a, &b);
        let (v, idx) = part.into_parts();
        for i in 0..count {
            // segments are sorted, so strict < keeps the lowest source index
            if v[i] < values[i] {
                values[i] = v[i];
                indices[i] = seg.start + idx[i];
            }
        }
    }
    MatrixProfile::new(values, indices, JoinKind::AbJoin, m)
}

/// A ranked discord candidate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Discord {
    pub start: usize,
    pub score: f64,
    /// The approximate top discord is provably the exact one, up to its
    /// trivial-match zone.
    pub certified: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnomalyReport {
    pub scores: MatrixProfile,
    pub discords: Vec<Discord>,
    pub e_max_used: Option<f64>,
}

/// Top `top_k` non-overlapping maxima of `profile`, in descending order.
///
/// Candidates closer than `floor(m/2)` to an earlier pick are skipped. The
/// first discord is certified when it leads the best non-overlapping
/// runner-up by more than `e_max`; later ranks are never certified.
pub fn find_discords(profile: &MatrixProfile, e_max: Option<f64>, top_k: usize) -> Result<Vec<Discord>> {
    if profile.is_empty() {
        return Err(Error::EmptyProfile);
    }
    if let Some(e) = e_max {
        if !(e.is_finite() && e >= 0.0) {
            return Err(Error::InvalidConfig(format!("e_max {e} must be finite and >= 0")));
        }
    }
    let zone = exclusion_zone(profile.m());
    let values = profile.values();
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));

    let picks_needed = top_k.max(2);
    let mut picks: Vec<usize> = Vec::with_capacity(picks_needed);
    for i in order {
        if picks.len() == picks_needed {
            break;
        }
        if picks.iter().all(|&p| p.abs_diff(i) > zone) {
            picks.push(i);
        }
    }

    let certified = match (e_max, picks.get(1)) {
        (Some(e), Some(&runner_up)) => values[picks[0]] - values[runner_up] > e,
        _ => false,
    };
    Ok(picks
        .into_iter()
        .take(top_k)
        .enumerate()
        .map(|(rank, start)| Discord {
            start,
            score: values[start],
            certified: rank == 0 && certified,
        })
        .collect())
}

/// Scores `query` against `dictionary` and ranks its discords.
pub fn detect_anomalies(query: &TimeSeries, dictionary: &Dictionary, top_k: usize) -> Result<AnomalyReport> {
    let scores = join_dictionary(query, dictionary, dictionary.m())?;
    let discords = find_discords(&scores, dictionary.e_max(), top_k)?;
    Ok(AnomalyReport {
        scores,
        discords,
        e_max_used: dictionary.e_max(),
    })
}

/// Mann-Whitney AUC: the probability that a random positive outscores a
/// random negative, ties counting one half.
pub fn auc_score(scores: &[f64], labels: &[bool]) -> Result<f64> {
    if scores.len() != labels.len() {
        return Err(Error::LengthMismatch {
            expected: scores.len(),
            found: labels.len(),
        });
    }
    let positives = labels.iter().filter(|&&l| l).count();
    let negatives = labels.len() - positives;
    if positives == 0 || negatives == 0 {
        return Err(Error::DegenerateLabels);
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));

    // sum of midranks of the positives
    let mut rank_sum = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]].total_cmp(&scores[order[i]]).is_eq() {
            j += 1;
        }
        let midrank = (i + j) as f64 / 2.0 + 1.0;
        rank_sum += midrank * order[i..=j].iter().filter(|&&k| labels[k]).count() as f64;
        i = j + 1;
    }
    let p = positives as f64;
    Ok((rank_sum - p * (p + 1.0) / 2.0) / (p * negatives as f64))
}

/// A labeled region `[start, end)` of sample indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Region {
    pub start: usize,
    pub end: usize,
}

/// Sorts regions and merges overlapping or touching ones.
pub fn normalize_regions(regions: &[Region]) -> Vec<Region> {
    let intervals: Vec<(usize, usize)> = regions.iter().map(|r| (r.start, r.end)).collect();
    crate::dictionary::merge_intervals(&intervals)
        .into_iter()
        .map(|(start, end)| Region { start, end })
        .collect()
}

/// Per-window labels: window `i` is positive when at least half of it lies
/// inside one labeled region.
pub fn window_labels(regions: &[Region], n: usize, m: usize) -> Vec<bool> {
    let regions = normalize_regions(regions);
    (0..(n + 1).saturating_sub(m))
        .map(|i| {
            regions.iter().any(|r| {
                let overlap = (i + m).min(r.end).saturating_sub(i.max(r.start));
                2 * overlap >= m
            })
        })
        .collect()
}
