//! Accuracy and runtime sweep of dictionary joins against the exact join.

use std::time::Instant;

use crate::dict_join::join_dictionary;
use crate::dictionary::{learn_dictionary_with_profile, LearnConfig, StopRule};
use crate::error::Result;
use crate::profiles::{ab_join, self_join};
use crate::series::TimeSeries;

pub const BENCH_COLUMNS: &str =
    "space_saving,e_max,mean_err,max_err,learn_seconds,join_seconds,exact_join_seconds,speedup";

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    /// Achieved space saving of the learned dictionary.
    pub space_saving: f64,
    pub e_max: f64,
    /// Mean of `approx - exact` over all windows of the query series.
    pub mean_err: f64,
    pub max_err: f64,
    /// Self-join of the source (shared by all rows) plus the greedy loop.
    pub learn_seconds: f64,
    pub join_seconds: f64,
    pub exact_join_seconds: f64,
    pub speedup: f64,
}

impl BenchRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{:?},{:?},{:?},{:?},{:.6},{:.6},{:.6},{:.3}",
            self.space_saving,
            self.e_max,
            self.mean_err,
            self.max_err,
            self.learn_seconds,
            self.join_seconds,
            self.exact_join_seconds,
            self.speedup
        )
    }
}

/// Learns one dictionary from `source` per target space saving and compares
/// its join of `query` with the exact AB-join.
pub fn run_bench(
    query: &TimeSeries,
    source: &TimeSeries,
    m: usize,
    k: f64,
    space_savings: &[f64],
) -> Result<Vec<BenchRow>> {
    let clock = Instant::now();
    let exact = ab_join(query, source, m)?;
    let exact_join_seconds = clock.elapsed().as_secs_f64();

    let clock = Instant::now();
    let profile = self_join(source, m)?;
    let self_join_seconds = clock.elapsed().as_secs_f64();

    let mut rows = Vec::with_capacity(space_savings.len());
    for &target in space_savings {
        let cfg = LearnConfig::new(m, StopRule::SpaceSaving(target)).with_k(k);
        let clock = Instant::now();
        let dictionary = learn_dictionary_with_profile(source, &profile, &cfg)?;
        let learn_seconds = self_join_seconds + clock.elapsed().as_secs_f64();

        let clock = Instant::now();
        let approx = join_dictionary(query, &dictionary, m)?;
        let join_seconds = clock.elapsed().as_secs_f64();

        let errors: Vec<f64> = approx
            .values()
            .iter()
            .zip(exact.values())
            .map(|(a, e)| a - e)
            .collect();
        rows.push(BenchRow {
            space_saving: dictionary.space_saving(),
            e_max: dictionary.e_max().unwrap_or(f64::NAN),
            mean_err: errors.iter().sum::<f64>() / errors.len() as f64,
            max_err: errors.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            learn_seconds,
            join_seconds,
            exact_join_seconds,
            speedup: exact_join_seconds / join_seconds,
        });
    }
    Ok(rows)
}
