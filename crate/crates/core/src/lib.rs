//! Exact and dictionary-approximated matrix profiles.
//!
//! A dictionary is a small set of verbatim segments of a source series,
//! chosen greedily so that every source window has a close match among
//! the dictionary windows. Joining against the dictionary instead of the
//! full source never underestimates a nearest-neighbor distance and
//! overestimates it by at most the dictionary's certified `e_max`.

pub mod bench;
pub mod dict_join;
pub mod dictionary;
pub mod error;
pub mod io;
pub mod profiles;
pub mod series;
pub mod synth;

pub use dict_join::{
    auc_score, detect_anomalies, find_discords, join_dictionary, window_labels, AnomalyReport, Discord,
    Region,
};
pub use dictionary::{
    compute_e_max, learn_dictionary, learn_dictionary_with_profile, learn_random_baseline, merge_segments,
    Dictionary, DictionaryLearner, LearnConfig, Segment, StopRule,
};
pub use error::{Error, ErrorClass, Result};
pub use profiles::{
    ab_join, distance_profile_mass, distance_profile_naive, self_join, DistanceProfile, JoinKind,
    MatrixProfile, NO_NEIGHBOR,
};
pub use series::{compute_stats, znorm_distance, SubseqStats, TimeSeries};
