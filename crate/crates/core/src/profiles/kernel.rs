//! Streaming-covariance join kernels.
//!
//! Rows are processed in fixed-size blocks. Each block starts from directly
//! computed covariances and then advances with the centered update
//! `cov[i+1][j+1] = cov[i][j] + df_a[i] * dg_b[j] + df_b[j] * dg_a[i]`,
//! which never forms the large `sum(a*b) - m*mu_a*mu_b` difference.
//! Block boundaries do not depend on the thread count, and all reductions
//! are exact max-with-lowest-index selections, so results are bit-identical
//! for any degree of parallelism.

use rayon::prelude::*;

use crate::series::{correlation_to_distance, exact_moments, stats_with_threshold, SubseqStats};

use super::NO_NEIGHBOR;

/// Rows per independently seeded block.
const ROW_BLOCK: usize = 1024;
const LANES: usize = 8;

/// Window statistics and streaming-update terms for one series.
pub(crate) struct Prepared<'a> {
    values: &'a [f64],
    m: usize,
    means: Vec<f64>,
    inv_norm: Vec<f64>,
    constant: Vec<bool>,
    df: Vec<f64>,
    dg: Vec<f64>,
}

impl<'a> Prepared<'a> {
    /// Caller guarantees `2 <= m <= values.len()`.
    pub(crate) fn new(values: &'a [f64], m: usize, threshold: f64) -> Self {
        let stats = stats_with_threshold(values, m, threshold);
        Self::from_stats(values, &stats)
    }

    pub(crate) fn from_stats(values: &'a [f64], stats: &SubseqStats) -> Self {
        let m = stats.m();
        let count = stats.len();
        let means = stats.means().to_vec();
        let constant = stats.constant_mask().to_vec();
        let sqrt_m = (m as f64).sqrt();
        let inv_norm = stats
            .stds()
            .iter()
            .zip(&constant)
            .map(|(&sd, &c)| if c { 0.0 } else { 1.0 / (sd * sqrt_m) })
            .collect();
        let steps = count.saturating_sub(1);
        let mut df = Vec::with_capacity(steps);
        let mut dg = Vec::with_capacity(steps);
        for i in 0..steps {
            let incoming = values[i + m];
            let outgoing = values[i];
            df.push(0.5 * (incoming - outgoing));
            dg.push((incoming - means[i + 1]) + (outgoing - means[i]));
        }
        Prepared {
            values,
            m,
            means,
            inv_norm,
            constant,
            df,
            dg,
        }
    }

    pub(crate) fn windows(&self) -> usize {
        self.means.len()
    }

    pub(crate) fn is_constant(&self, i: usize) -> bool {
        self.constant[i]
    }

    pub(crate) fn m(&self) -> usize {
        self.m
    }

    fn window(&self, i: usize) -> &[f64] {
        &self.values[i..i + self.m]
    }

    fn centered(&self, i: usize) -> Vec<f64> {
        let mu = self.means[i];
        self.values[i..i + self.m].iter().map(|x| x - mu).collect()
    }

    fn cov_with(&self, centered: &[f64], j: usize) -> f64 {
        let mu = self.means[j];
        let window = &self.values[j..j + self.m];
        dot_centered(centered, window, mu)
    }
}

#[inline]
fn dot_centered(centered: &[f64], window: &[f64], mu: f64) -> f64 {
    let mut acc = [0.0; 4];
    let chunks = centered.chunks_exact(4).zip(window.chunks_exact(4));
    for (c, w) in chunks {
        for l in 0..4 {
            acc[l] += c[l] * (w[l] - mu);
        }
    }
    let tail = centered.len() - centered.len() % 4;
    let mut sum = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    for k in tail..centered.len() {
        sum += centered[k] * (window[k] - mu);
    }
    sum
}

/// Best (largest) candidate with the lowest index on ties.
#[derive(Clone, Copy)]
struct Best {
    score: f64,
    index: usize,
}

impl Best {
    const NONE: Best = Best {
        score: f64::NEG_INFINITY,
        index: NO_NEIGHBOR,
    };

    #[inline]
    fn offer(&mut self, score: f64, index: usize) {
        if score > self.score || (score == self.score && index < self.index) {
            self.score = score;
            self.index = index;
        }
    }
}

/// Lane-parallel argmax of `cov[j] * inv[j]` over `j in range`.
fn row_argmax(cov: &[f64], inv: &[f64], start: usize) -> Best {
    let mut best = [f64::NEG_INFINITY; LANES];
    let mut idx = [NO_NEIGHBOR; LANES];
    let cov = &cov[start..];
    let inv = &inv[start..];
    let full = cov.len() - cov.len() % LANES;
    for (chunk, (c, w)) in cov[..full]
        .chunks_exact(LANES)
        .zip(inv[..full].chunks_exact(LANES))
        .enumerate()
    {
        let base = start + chunk * LANES;
        for l in 0..LANES {
            let r = c[l] * w[l];
            let better = r > best[l];
            best[l] = if better { r } else { best[l] };
            idx[l] = if better { base + l } else { idx[l] };
        }
    }
    let mut out = Best::NONE;
    for l in 0..LANES {
        if idx[l] != NO_NEIGHBOR {
            out.offer(best[l], idx[l]);
        }
    }
    for k in full..cov.len() {
        out.offer(cov[k] * inv[k], start + k);
    }
    out
}

/// Nearest neighbor of every window of `a` among all windows of `b`.
/// Returns correlations and indices; constant windows follow the
/// constant-window convention.
pub(crate) fn ab_join(a: &Prepared, b: &Prepared) -> (Vec<f64>, Vec<usize>) {
    let na = a.windows();
    let nb = b.windows();
    let starts: Vec<usize> = (0..na).step_by(ROW_BLOCK).collect();
    let parts: Vec<Vec<Best>> = starts
        .par_iter()
        .map(|&s| ab_block(a, b, s, (s + ROW_BLOCK).min(na)))
        .collect();

    let first_constant_b = (0..nb).find(|&j| b.is_constant(j));
    let mut rho = Vec::with_capacity(na);
    let mut index = Vec::with_capacity(na);
    for (i, best) in parts.into_iter().flatten().enumerate() {
        if a.is_constant(i) {
            match first_constant_b {
                Some(j) => {
                    rho.push(1.0);
                    index.push(j);
                }
                None => {
                    rho.push(0.0);
                    index.push(0);
                }
            }
        } else {
            rho.push(best.score * a.inv_norm[i]);
            index.push(best.index);
        }
    }
    (rho, index)
}

fn ab_block(a: &Prepared, b: &Prepared, start: usize, end: usize) -> Vec<Best> {
    let nb = b.windows();
    let mut prev = vec![0.0; nb];
    let mut cur = vec![0.0; nb];
    let mut out = Vec::with_capacity(end - start);

    let seed = a.centered(start);
    let first_b = b.centered(0);
    for (j, c) in cur.iter_mut().enumerate() {
        *c = b.cov_with(&seed, j);
    }
    for i in start..end {
        if i > start {
            std::mem::swap(&mut prev, &mut cur);
            cur[0] = a.cov_with(&first_b, i);
            let dfa = a.df[i - 1];
            let dga = a.dg[i - 1];
            let (head, tail) = (&prev[..nb - 1], &mut cur[1..]);
            for (((c, &p), &dgb), &dfb) in tail.iter_mut().zip(head).zip(&b.dg).zip(&b.df) {
                *c = p + dfa * dgb + dfb * dga;
            }
        }
        if a.is_constant(i) {
            out.push(Best::NONE);
        } else {
            out.push(row_argmax(&cur, &b.inv_norm, 0));
        }
    }
    out
}

struct Accumulator {
    score: Vec<f64>,
    index: Vec<usize>,
}

impl Accumulator {
    fn new(n: usize) -> Self {
        Accumulator {
            score: vec![f64::NEG_INFINITY; n],
            index: vec![NO_NEIGHBOR; n],
        }
    }

    fn merge(mut self, other: Accumulator) -> Accumulator {
        for k in 0..self.score.len() {
            let (s, i) = (other.score[k], other.index[k]);
            if s > self.score[k] || (s == self.score[k] && i < self.index[k]) {
                self.score[k] = s;
                self.index[k] = i;
            }
        }
        self
    }
}

/// Self-join nearest neighbors excluding `|i - j| <= exclusion`.
/// Returns correlations (or `-inf` when no candidate exists) and indices.
pub(crate) fn self_join(p: &Prepared, exclusion: usize) -> (Vec<f64>, Vec<usize>) {
    let n = p.windows();
    let starts: Vec<usize> = (0..n).step_by(ROW_BLOCK).collect();
    let acc = starts
        .par_iter()
        .fold(
            || Accumulator::new(n),
            |mut acc, &s| {
                self_block(p, s, (s + ROW_BLOCK).min(n), exclusion, &mut acc);
                acc
            },
        )
        .reduce(|| Accumulator::new(n), Accumulator::merge);

    let constants: Vec<usize> = (0..n).filter(|&j| p.is_constant(j)).collect();
    let mut rho = acc.score;
    let mut index = acc.index;
    for i in 0..n {
        if !p.is_constant(i) {
            continue;
        }
        let allowed = |j: usize| j.abs_diff(i) > exclusion;
        if let Some(&j) = constants.iter().find(|&&j| allowed(j)) {
            rho[i] = 1.0;
            index[i] = j;
        } else if let Some(j) = (0..n).find(|&j| allowed(j)) {
            rho[i] = 0.0;
            index[i] = j;
        } else {
            rho[i] = f64::NEG_INFINITY;
            index[i] = NO_NEIGHBOR;
        }
    }
    (rho, index)
}

fn self_block(p: &Prepared, start: usize, end: usize, exclusion: usize, acc: &mut Accumulator) {
    let n = p.windows();
    let first = |i: usize| i + exclusion + 1;
    if first(start) >= n {
        return;
    }
    let mut prev = vec![0.0; n];
    let mut cur = vec![0.0; n];
    let mut rbuf = vec![0.0; n];

    let seed = p.centered(start);
    for j in first(start)..n {
        cur[j] = p.cov_with(&seed, j);
    }
    for i in start..end {
        let lo = first(i);
        if lo >= n {
            break;
        }
        if i > start {
            std::mem::swap(&mut prev, &mut cur);
            let dfa = p.df[i - 1];
            let dga = p.dg[i - 1];
            let head = &prev[lo - 1..n - 1];
            let dg = &p.dg[lo - 1..n - 1];
            let df = &p.df[lo - 1..n - 1];
            for (((c, &q), &dgb), &dfb) in cur[lo..].iter_mut().zip(head).zip(dg).zip(df) {
                *c = q + dfa * dgb + dfb * dga;
            }
        }
        let inv_i = p.inv_norm[i];
        for ((r, &c), &w) in rbuf[lo..].iter_mut().zip(&cur[lo..]).zip(&p.inv_norm[lo..]) {
            *r = c * w * inv_i;
        }
        // column candidates: row i offers itself to every j in [lo, n)
        let scores = &mut acc.score[lo..];
        let indices = &mut acc.index[lo..];
        for ((s, ix), &r) in scores.iter_mut().zip(indices.iter_mut()).zip(&rbuf[lo..]) {
            let better = r > *s;
            *s = if better { r } else { *s };
            *ix = if better { i } else { *ix };
        }
        let best = argmax_from(&rbuf, lo);
        if best.index != NO_NEIGHBOR {
            let (s, ix) = (acc.score[i], acc.index[i]);
            if best.score > s || (best.score == s && best.index < ix) {
                acc.score[i] = best.score;
                acc.index[i] = best.index;
            }
        }
    }
}

/// Lane-parallel argmax of `data[start..]`, lowest index on ties.
fn argmax_from(data: &[f64], start: usize) -> Best {
    let data = &data[start..];
    let mut best = [f64::NEG_INFINITY; LANES];
    let mut idx = [NO_NEIGHBOR; LANES];
    let full = data.len() - data.len() % LANES;
    for (chunk, c) in data[..full].chunks_exact(LANES).enumerate() {
        let base = start + chunk * LANES;
        for l in 0..LANES {
            let better = c[l] > best[l];
            best[l] = if better { c[l] } else { best[l] };
            idx[l] = if better { base + l } else { idx[l] };
        }
    }
    let mut out = Best::NONE;
    for l in 0..LANES {
        if idx[l] != NO_NEIGHBOR {
            out.offer(best[l], idx[l]);
        }
    }
    for (k, &v) in data.iter().enumerate().skip(full) {
        out.offer(v, start + k);
    }
    out
}

/// Correlations above this are converted by direct evaluation instead of
/// `sqrt(2m(1 - rho))`, which loses most significant digits as `rho -> 1`.
const REFINE_ABOVE: f64 = 1.0 - 1e-4;

/// Converts kernel correlations into distances, mapping missing
/// neighbors to `+inf`.
pub(crate) fn to_distances(a: &Prepared, b: &Prepared, rho: &[f64], index: &[usize]) -> Vec<f64> {
    let m = a.m;
    rho.iter()
        .zip(index)
        .enumerate()
        .map(|(i, (&r, &j))| {
            if j == NO_NEIGHBOR {
                f64::INFINITY
            } else if r > REFINE_ABOVE && !a.is_constant(i) && !b.is_constant(j) {
                direct_distance(a.window(i), b.window(j))
            } else {
                correlation_to_distance(r, m)
            }
        })
        .collect()
}

fn direct_distance(a: &[f64], b: &[f64]) -> f64 {
    let m = a.len() as f64;
    let (mean_a, m2_a) = exact_moments(a);
    let (mean_b, m2_b) = exact_moments(b);
    let (sd_a, sd_b) = ((m2_a / m).sqrt(), (m2_b / m).sqrt());
    let sum: f64 = a
        .iter()
        .zip(b)
        .map(|(&x, &y)| {
            let d = (x - mean_a) / sd_a - (y - mean_b) / sd_b;
            d * d
        })
        .sum();
    sum.sqrt().min(2.0 * m.sqrt())
}
