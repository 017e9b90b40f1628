//! Distance profiles and exact matrix profiles.
//!
//! Self-joins exclude trivial matches `|i - j| <= floor(m/2)`; AB-joins have
//! no exclusion. Ties between equally near neighbors resolve to the lowest
//! start index.

mod kernel;
mod mass;

pub(crate) use kernel::Prepared;
pub(crate) use mass::MassContext;

use crate::error::{Error, Result};
use crate::series::{
    check_window, compute_stats, constancy_threshold, znorm_distance, SubseqStats, TimeSeries,
};

/// Index value marking "no neighbor".
pub const NO_NEIGHBOR: usize = usize::MAX;

/// Half-width of the trivial-match exclusion zone for window length `m`.
pub fn exclusion_zone(m: usize) -> usize {
    m / 2
}

/// Distances from one query to every window of a series.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceProfile {
    pub values: Vec<f64>,
    /// Start index of the query when it was taken from the target series.
    pub query_origin: Option<usize>,
}

impl DistanceProfile {
    pub fn with_origin(mut self, origin: usize) -> Self {
        self.query_origin = Some(origin);
        self
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JoinKind {
    SelfJoin,
    AbJoin,
}

impl JoinKind {
    pub fn as_str(self) -> &'static str {
        match self {
            JoinKind::SelfJoin => "self-join",
            JoinKind::AbJoin => "ab-join",
        }
    }
}

impl std::str::FromStr for JoinKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "self-join" => Ok(JoinKind::SelfJoin),
            "ab-join" => Ok(JoinKind::AbJoin),
            other => Err(Error::Schema(format!("unknown join kind `{other}`"))),
        }
    }
}

/// Nearest-neighbor distance and index for every window of a series.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixProfile {
    values: Vec<f64>,
    indices: Vec<usize>,
    kind: JoinKind,
    m: usize,
}

impl MatrixProfile {
    pub fn new(values: Vec<f64>, indices: Vec<usize>, kind: JoinKind, m: usize) -> Result<Self> {
        if values.len() != indices.len() {
            return Err(Error::LengthMismatch {
                expected: values.len(),
                found: indices.len(),
            });
        }
        if m < 2 {
            return Err(Error::WindowTooSmall { m });
        }
        Ok(MatrixProfile {
            values,
            indices,
            kind,
            m,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn neighbor(&self, i: usize) -> Option<usize> {
        match self.indices[i] {
            NO_NEIGHBOR => None,
            j => Some(j),
        }
    }

    pub fn kind(&self) -> JoinKind {
        self.kind
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_parts(self) -> (Vec<f64>, Vec<usize>) {
        (self.values, self.indices)
    }
}

fn check_query(query: &[f64], stats: &SubseqStats, series: &TimeSeries) -> Result<()> {
    if query.len() != stats.m() {
        return Err(Error::LengthMismatch {
            expected: stats.m(),
            found: query.len(),
        });
    }
    if stats.len() != series.window_count(stats.m()) {
        return Err(Error::LengthMismatch {
            expected: series.window_count(stats.m()),
            found: stats.len(),
        });
    }
    Ok(())
}

/// Distance profile by direct evaluation of every window, O(n*m).
pub fn distance_profile_naive(
    series: &TimeSeries,
    query: &[f64],
    stats: &SubseqStats,
) -> Result<DistanceProfile> {
    check_query(query, stats, series)?;
    let m = stats.m();
    let values = (0..stats.len())
        .map(|i| znorm_distance(query, series.subsequence(i, m)))
        .collect::<Result<Vec<_>>>()?;
    Ok(DistanceProfile {
        values,
        query_origin: None,
    })
}

/// Distance profile through an FFT sliding dot product, O(n log n).
pub fn distance_profile_mass(
    series: &TimeSeries,
    query: &[f64],
    stats: &SubseqStats,
) -> Result<DistanceProfile> {
    check_query(query, stats, series)?;
    let ctx = MassContext::new(series.values(), std::borrow::Cow::Borrowed(stats));
    Ok(DistanceProfile {
        values: ctx.distances(query),
        query_origin: None,
    })
}

/// Exact self-join matrix profile with a `floor(m/2)` exclusion zone.
///
/// Windows that have no admissible neighbor (possible only when
/// `n == 2m` with even `m`) get `+inf` and [`NO_NEIGHBOR`].
pub fn self_join(series: &TimeSeries, m: usize) -> Result<MatrixProfile> {
    let n = series.len();
    check_window(m, n)?;
    if n < 2 * m {
        return Err(Error::SeriesTooShort { n, required: 2 * m });
    }
    let stats = compute_stats(series, m)?;
    let prepared = Prepared::from_stats(series.values(), &stats);
    let (rho, indices) = kernel::self_join(&prepared, exclusion_zone(m));
    let values = kernel::to_distances(&prepared, &prepared, &rho, &indices);
    MatrixProfile::new(values, indices, JoinKind::SelfJoin, m)
}

/// Exact AB-join: nearest neighbor in `target` of every window of `query`.
pub fn ab_join(query: &TimeSeries, target: &TimeSeries, m: usize) -> Result<MatrixProfile> {
    for s in [query, target] {
        if m < 2 {
            return Err(Error::WindowTooSmall { m });
        }
        if s.len() < m {
            return Err(Error::SeriesTooShort {
                n: s.len(),
                required: m,
            });
        }
    }
    let a = Prepared::new(query.values(), m, constancy_threshold(query.values()));
    let b = Prepared::new(target.values(), m, constancy_threshold(target.values()));
    Ok(ab_join_prepared(&a, &b))
}

pub(crate) fn ab_join_prepared(a: &Prepared, b: &Prepared) -> MatrixProfile {
    let m = a.m();
    let (rho, indices) = kernel::ab_join(a, b);
    let values = kernel::to_distances(a, b, &rho, &indices);
    MatrixProfile {
        values,
        indices,
        kind: JoinKind::AbJoin,
        m,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gaussian(n: usize, rng: &mut ChaCha8Rng) -> TimeSeries {
        TimeSeries::new(synth::white_noise(n, rng)).unwrap()
    }

    /// O(n^2 m) double loop with the same exclusion, tie and constant rules.
    fn brute_join(a: &TimeSeries, b: &TimeSeries, m: usize, exclusion: Option<usize>) -> Vec<f64> {
        let threshold = constancy_threshold(a.values()).max(constancy_threshold(b.values()));
        (0..a.window_count(m))
            .map(|i| {
                (0..b.window_count(m))
                    .filter(|&j| exclusion.is_none_or(|e| j.abs_diff(i) > e))
                    .map(|j| {
                        crate::series::znorm_distance_unchecked(
                            a.subsequence(i, m),
                            b.subsequence(j, m),
                            threshold,
                        )
                    })
                    .fold(f64::INFINITY, f64::min)
            })
            .collect()
    }

    #[test]
    fn naive_profile_self_match_and_constant_series() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let t = gaussian(200, &mut rng);
        let stats = compute_stats(&t, 16).unwrap();
        let q = t.subsequence(7, 16).to_vec();
        let p = distance_profile_naive(&t, &q, &stats).unwrap().with_origin(7);
        assert_eq!(p.values[7], 0.0);
        assert_eq!(p.query_origin, Some(7));

        let flat = TimeSeries::new(vec![3.0; 100]).unwrap();
        let stats = compute_stats(&flat, 16).unwrap();
        let p = distance_profile_naive(&flat, &q, &stats).unwrap();
        assert!(p.values.iter().all(|&v| v == 32f64.sqrt()));
        let p = distance_profile_mass(&flat, &q, &stats).unwrap();
        assert!(p.values.iter().all(|&v| v == 32f64.sqrt()));
    }

    #[test]
    fn naive_profile_equals_direct_distance() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let t = gaussian(1024, &mut rng);
        let q = synth::white_noise(32, &mut rng);
        let stats = compute_stats(&t, 32).unwrap();
        let p = distance_profile_naive(&t, &q, &stats).unwrap();
        for (i, &v) in p.values.iter().enumerate() {
            assert_eq!(v, znorm_distance(&q, t.subsequence(i, 32)).unwrap());
        }
    }

    #[test]
    fn query_length_mismatch() {
        let t = TimeSeries::new((0..50).map(|x| (x as f64).sin()).collect()).unwrap();
        let stats = compute_stats(&t, 8).unwrap();
        assert!(matches!(
            distance_profile_mass(&t, &[1.0, 2.0], &stats),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn mass_self_match_and_periodicity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let t = gaussian(200, &mut rng);
        let stats = compute_stats(&t, 16).unwrap();
        let p = distance_profile_mass(&t, t.subsequence(7, 16), &stats).unwrap();
        assert!(p.values[7] <= 1e-6);

        let sine: Vec<f64> = (0..1024)
            .map(|i| (2.0 * std::f64::consts::PI * i as f64 / 64.0).sin())
            .collect();
        let t = TimeSeries::new(sine).unwrap();
        let stats = compute_stats(&t, 64).unwrap();
        let p = distance_profile_mass(&t, t.subsequence(0, 64), &stats).unwrap();
        for k in (0..p.len()).step_by(64) {
            assert!(p.values[k] < 1e-6, "minimum at {k} is {}", p.values[k]);
        }
    }

    #[test]
    fn mass_matches_naive_randomized() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut worst: f64 = 0.0;
        for _ in 0..100 {
            let n = rng.random_range(128..=4096);
            let m = rng.random_range(8..=128);
            let t = if rng.random_bool(0.5) {
                gaussian(n, &mut rng)
            } else {
                TimeSeries::new(synth::random_walk(n, &mut rng)).unwrap()
            };
            let q = synth::white_noise(m, &mut rng);
            let stats = compute_stats(&t, m).unwrap();
            let a = distance_profile_mass(&t, &q, &stats).unwrap();
            let b = distance_profile_naive(&t, &q, &stats).unwrap();
            for (x, y) in a.values.iter().zip(&b.values) {
                worst = worst.max((x - y).abs());
            }
        }
        assert!(worst < 1e-5, "max deviation {worst}");
    }

    #[test]
    fn self_join_on_repeated_random_walk() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let half = synth::random_walk(512, &mut rng);
        let mut values = half.clone();
        values.extend_from_slice(&half);
        let t = TimeSeries::new(values).unwrap();
        let mp = self_join(&t, 64).unwrap();
        for i in 0..=(512 - 64) {
            assert!(mp.values()[i] <= 1e-5, "window {i}: {}", mp.values()[i]);
            assert_eq!(mp.indices()[i], i + 512);
        }
    }

    #[test]
    fn self_join_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let t = gaussian(256, &mut rng);
        let mp = self_join(&t, 16).unwrap();
        let brute = brute_join(&t, &t, 16, Some(8));
        for (i, (x, y)) in mp.values().iter().zip(&brute).enumerate() {
            assert!((x - y).abs() < 1e-5, "{i}: {x} vs {y}");
            let j = mp.indices()[i];
            assert!(j.abs_diff(i) > 8);
        }
    }

    #[test]
    fn self_join_noise_is_less_compressible_than_random_walk() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let noise = gaussian(4096, &mut rng);
        let walk = TimeSeries::new(synth::random_walk(4096, &mut rng)).unwrap();
        let mean = |t: &TimeSeries| {
            let mp = self_join(t, 64).unwrap();
            mp.values().iter().sum::<f64>() / mp.len() as f64
        };
        assert!(mean(&noise) > mean(&walk));
    }

    #[test]
    fn self_join_requires_two_windows_of_data() {
        let t = TimeSeries::new(vec![0.0, 1.0, 2.0, 0.5, 0.2]).unwrap();
        assert!(matches!(self_join(&t, 3), Err(Error::SeriesTooShort { n: 5, required: 6 })));
    }

    #[test]
    fn self_join_without_admissible_neighbor() {
        // n = 2m with even m: the middle window sees only trivial matches.
        let t = TimeSeries::new(vec![0.0, 2.0, 1.0, 3.0, 1.5, 0.2, 4.0, 2.2]).unwrap();
        let mp = self_join(&t, 4).unwrap();
        assert_eq!(mp.neighbor(2), None);
        assert!(mp.values()[2].is_infinite());
        assert!(mp.neighbor(0).is_some());
    }

    #[test]
    fn self_join_constant_windows() {
        let mut values = vec![1.0; 40];
        values.extend((0..40).map(|i| ((i * 7) % 11) as f64));
        let t = TimeSeries::new(values).unwrap();
        let mp = self_join(&t, 8).unwrap();
        let brute = brute_join(&t, &t, 8, Some(4));
        for (i, (x, y)) in mp.values().iter().zip(&brute).enumerate() {
            assert!((x - y).abs() < 1e-5, "{i}: {x} vs {y}");
        }
        assert_eq!(mp.values()[0], 0.0);
        assert_eq!(mp.indices()[0], 5);
    }

    #[test]
    fn ab_join_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let a = gaussian(300, &mut rng);
        let b = gaussian(200, &mut rng);
        let mp = ab_join(&a, &b, 20).unwrap();
        let brute = brute_join(&a, &b, 20, None);
        for (x, y) in mp.values().iter().zip(&brute) {
            assert!((x - y).abs() < 1e-5);
        }

        let copy = TimeSeries::new(a.values().to_vec()).unwrap();
        let mp = ab_join(&a, &copy, 20).unwrap();
        assert!(mp.values().iter().all(|&v| v < 1e-5));
        assert!(mp.indices().iter().enumerate().all(|(i, &j)| i == j));
    }

    #[test]
    fn ab_join_reveals_planted_window() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let period: Vec<f64> = (0..50)
            .map(|i| (2.0 * std::f64::consts::PI * i as f64 / 50.0).sin())
            .collect();
        let b: Vec<f64> = period.iter().cycle().take(1000).copied().collect();
        let mut a: Vec<f64> = period.iter().cycle().take(600).copied().collect();
        for (k, v) in a[300..320].iter_mut().enumerate() {
            *v += 3.0 * (k as f64 / 3.0).sin() + 0.01 * rng.random::<f64>();
        }
        let mp = ab_join(
            &TimeSeries::new(a).unwrap(),
            &TimeSeries::new(b).unwrap(),
            25,
        )
        .unwrap();
        let argmax = (0..mp.len())
            .max_by(|&x, &y| mp.values()[x].total_cmp(&mp.values()[y]))
            .unwrap();
        assert!((300 - 25..320).contains(&argmax), "argmax {argmax}");
    }

    #[test]
    fn ab_join_errors() {
        let a = TimeSeries::new(vec![1.0, 2.0, 3.0]).unwrap();
        let b = TimeSeries::new(vec![1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        assert!(matches!(ab_join(&a, &b, 4), Err(Error::SeriesTooShort { .. })));
    }

    #[test]
    fn profile_values_match_recorded_neighbors() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let a = TimeSeries::new(synth::random_walk(700, &mut rng)).unwrap();
        let b = TimeSeries::new(synth::random_walk(500, &mut rng)).unwrap();
        let m = 32;
        for mp in [ab_join(&a, &b, m).unwrap(), self_join(&a, m).unwrap()] {
            let target = if mp.kind() == JoinKind::SelfJoin { &a } else { &b };
            for i in 0..mp.len() {
                let j = mp.neighbor(i).unwrap();
                let d = znorm_distance(a.subsequence(i, m), target.subsequence(j, m)).unwrap();
                assert!((d - mp.values()[i]).abs() < 1e-6);
                if mp.kind() == JoinKind::SelfJoin {
                    assert!(j.abs_diff(i) > exclusion_zone(m));
                }
            }
        }
    }

    #[test]
    fn ab_join_never_increases_when_target_grows() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = TimeSeries::new(synth::random_walk(400, &mut rng)).unwrap();
        let mut b = synth::random_walk(300, &mut rng);
        let before = ab_join(&a, &TimeSeries::new(b.clone()).unwrap(), 24).unwrap();
        b.extend(synth::random_walk(200, &mut rng));
        let after = ab_join(&a, &TimeSeries::new(b).unwrap(), 24).unwrap();
        for (x, y) in after.values().iter().zip(before.values()) {
            assert!(*x <= y + 1e-9);
        }
    }

    #[test]
    fn results_do_not_depend_on_thread_count() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let a = TimeSeries::new(synth::random_walk(5000, &mut rng)).unwrap();
        let b = TimeSeries::new(synth::random_walk(3000, &mut rng)).unwrap();
        let run = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            pool.install(|| (self_join(&a, 50).unwrap(), ab_join(&a, &b, 50).unwrap()))
        };
        let one = run(1);
        let four = run(4);
        assert_eq!(one.0.values(), four.0.values());
        assert_eq!(one.0.indices(), four.0.indices());
        assert_eq!(one.1.values(), four.1.values());
        assert_eq!(one.1.indices(), four.1.indices());
    }
}
