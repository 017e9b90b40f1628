use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use dictjoin::bench::{run_bench, BENCH_COLUMNS};
use dictjoin::io::{self, SeriesFormat};
use dictjoin::synth::{self, EcgParams};
use dictjoin::{
    ab_join, auc_score, detect_anomalies, join_dictionary, learn_dictionary, self_join, window_labels, Error,
    ErrorClass, LearnConfig, StopRule, TimeSeries,
};

const EXIT_USAGE: u8 = 1;
const EXIT_DATA: u8 = 2;
const EXIT_CONTRACT: u8 = 3;

#[derive(Parser)]
#[command(name = "dictjoin", version, about = "Exact and dictionary-approximated matrix profiles")]
struct Cli {
    /// Worker threads for the join kernels (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    /// Seed for every random choice made by a command.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Self-join matrix profile of a series.
    SelfJoin {
        #[arg(long, short)]
        input: PathBuf,
        #[arg(short, long = "window", value_parser = window_length)]
        m: usize,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Learn a dictionary from a source series.
    Learn {
        #[arg(long, short)]
        input: PathBuf,
        #[arg(short, long = "window", value_parser = window_length)]
        m: usize,
        /// Context factor: k*m samples are stored around each core.
        #[arg(short, long, default_value_t = dictjoin::dictionary::DEFAULT_CONTEXT_FACTOR)]
        k: f64,
        #[command(flatten)]
        stop: StopArgs,
        #[arg(long, default_value_t = dictjoin::dictionary::DEFAULT_MAX_ITERATIONS)]
        max_iterations: usize,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Approximate AB-join of a series against a dictionary.
    Join {
        #[arg(long, short)]
        input: PathBuf,
        #[arg(long, short)]
        dictionary: PathBuf,
        /// Defaults to the dictionary's window length.
        #[arg(short, long = "window", value_parser = window_length)]
        m: Option<usize>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Exact AB-join of two series.
    ExactJoin {
        #[arg(long, short)]
        query: PathBuf,
        #[arg(long, short)]
        target: PathBuf,
        #[arg(short, long = "window", value_parser = window_length)]
        m: usize,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Rank discords of a series against a dictionary.
    Detect {
        #[arg(long, short)]
        input: PathBuf,
        #[arg(long, short)]
        dictionary: PathBuf,
        /// Anomalous regions; adds an AUC line to the report.
        #[arg(long, short)]
        labels: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        top_k: usize,
        /// Also write the per-window scores as a profile file.
        #[arg(long)]
        scores: Option<PathBuf>,
    },
    /// Accuracy and runtime of dictionary joins at several space savings.
    Bench {
        /// Query series; a random walk of `--n-query` samples when omitted.
        #[arg(long, short)]
        query: Option<PathBuf>,
        /// Source series; a random walk of `--n-target` samples when omitted.
        #[arg(long, short)]
        target: Option<PathBuf>,
        #[arg(long, default_value_t = 1 << 14)]
        n_query: usize,
        #[arg(long, default_value_t = 1 << 14)]
        n_target: usize,
        #[arg(short, long = "window", value_parser = window_length)]
        m: usize,
        #[arg(short, long, default_value_t = dictjoin::dictionary::DEFAULT_CONTEXT_FACTOR)]
        k: f64,
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.5, 0.9, 0.99])]
        space_savings: Vec<f64>,
    },
    /// Write a seeded synthetic series.
    Generate {
        #[arg(value_enum)]
        kind: SeriesKind,
        #[arg(short, long)]
        n: usize,
        #[arg(long, short)]
        output: PathBuf,
        /// Anomalous regions of an `ecg-anomalies` series.
        #[arg(long)]
        labels: Option<PathBuf>,
        /// Planted anomalies for `ecg-anomalies`.
        #[arg(long, default_value_t = 3)]
        anomalies: usize,
        #[arg(long)]
        binary: bool,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct StopArgs {
    /// Stop once the space saving falls to this fraction.
    #[arg(long)]
    space_saving: Option<f64>,
    /// Stop once this many samples are stored.
    #[arg(long)]
    sample_budget: Option<usize>,
    /// Stop once every window is within this distance of a core.
    #[arg(long)]
    error_target: Option<f64>,
}

impl StopArgs {
    fn rule(&self) -> StopRule {
        match (self.space_saving, self.sample_budget, self.error_target) {
            (Some(s), _, _) => StopRule::SpaceSaving(s),
            (_, Some(b), _) => StopRule::SampleBudget(b),
            (_, _, Some(e)) => StopRule::ErrorTarget(e),
            _ => unreachable!("clap enforces exactly one stop rule"),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SeriesKind {
    RandomWalk,
    Noise,
    Ecg,
    EcgAnomalies,
}

fn window_length(s: &str) -> Result<usize, String> {
    let m: usize = s.parse().map_err(|e| format!("{e}"))?;
    if m < 2 {
        return Err("window length must be at least 2".into());
    }
    Ok(m)
}

fn emit(output: Option<&Path>, text: &str) -> dictjoin::Result<()> {
    match output {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run(cli: Cli) -> dictjoin::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    match cli.command {
        Command::SelfJoin { input, m, output } => {
            let series = io::read_series(&input)?;
            let profile = self_join(&series, m)?;
            emit(output.as_deref(), &io::profile_to_text(&profile))
        }
        Command::Learn {
            input,
            m,
            k,
            stop,
            max_iterations,
            output,
        } => {
            let series = io::read_series(&input)?;
            let cfg = LearnConfig::new(m, stop.rule())
                .with_k(k)
                .with_max_iterations(max_iterations);
            let dictionary = learn_dictionary(&series, &cfg)?;
            eprintln!(
                "learned {} cores in {} segments, space saving {:.4}, e_max {:.6}",
                dictionary.core_starts.len(),
                dictionary.segments().len(),
                dictionary.space_saving(),
                dictionary.e_max().unwrap_or(f64::NAN)
            );
            emit(output.as_deref(), &io::dictionary_to_json(&dictionary))
        }
        Command::Join {
            input,
            dictionary,
            m,
            output,
        } => {
            let series = io::read_series(&input)?;
            let dictionary = io::read_dictionary(&dictionary)?;
            let profile = join_dictionary(&series, &dictionary, m.unwrap_or(dictionary.m()))?;
            emit(output.as_deref(), &io::profile_to_text(&profile))
        }
        Command::ExactJoin {
            query,
            target,
            m,
            output,
        } => {
            let a = io::read_series(&query)?;
            let b = io::read_series(&target)?;
            let profile = ab_join(&a, &b, m)?;
            emit(output.as_deref(), &io::profile_to_text(&profile))
        }
        Command::Detect {
            input,
            dictionary,
            labels,
            top_k,
            scores,
        } => {
            let series = io::read_series(&input)?;
            let dictionary = io::read_dictionary(&dictionary)?;
            let report = detect_anomalies(&series, &dictionary, top_k)?;
            if let Some(path) = scores {
                io::write_profile(path, &report.scores)?;
            }
            let mut out = String::from("rank,start,score,certified\n");
            for (rank, d) in report.discords.iter().enumerate() {
                out.push_str(&format!("{},{},{:?},{}\n", rank + 1, d.start, d.score, d.certified));
            }
            if let Some(path) = labels {
                let regions = io::read_labels(path, Some(series.len()))?;
                let flags = window_labels(&regions, series.len(), dictionary.m());
                let auc = auc_score(report.scores.values(), &flags)?;
                out.push_str(&format!("# auc={auc:?}\n"));
            }
            emit(None, &out)
        }
        Command::Bench {
            query,
            target,
            n_query,
            n_target,
            m,
            k,
            space_savings,
        } => {
            let mut load = |path: Option<PathBuf>, n: usize| -> dictjoin::Result<TimeSeries> {
                match path {
                    Some(p) => io::read_series(p),
                    None => TimeSeries::new(synth::random_walk(n, &mut rng)),
                }
            };
            let a = load(query, n_query)?;
            let b = load(target, n_target)?;
            eprintln!("bench: n_query={} n_target={} m={m}", a.len(), b.len());
            let rows = run_bench(&a, &b, m, k, &space_savings)?;
            let mut out = format!("{BENCH_COLUMNS}\n");
            for row in rows {
                out.push_str(&row.to_csv());
                out.push('\n');
            }
            emit(None, &out)
        }
        Command::Generate {
            kind,
            n,
            output,
            labels,
            anomalies,
            binary,
        } => {
            let params = EcgParams::default();
            let (values, regions) = match kind {
                SeriesKind::RandomWalk => (synth::random_walk(n, &mut rng), None),
                SeriesKind::Noise => (synth::white_noise(n, &mut rng), None),
                SeriesKind::Ecg => (synth::ecg_like(n, &params, &mut rng), None),
                SeriesKind::EcgAnomalies => {
                    let (v, r) = synth::ecg_with_anomalies(n, anomalies, &params, &mut rng);
                    (v, Some(r))
                }
            };
            let series = TimeSeries::new(values)?;
            let format = if binary { SeriesFormat::Binary } else { SeriesFormat::Text };
            io::write_series(&output, &series, format)?;
            match (labels, regions) {
                (Some(path), Some(regions)) => io::write_labels(path, &regions),
                (Some(_), None) => Err(Error::InvalidConfig(
                    "labels are only produced for ecg-anomalies".into(),
                )),
                _ => Ok(()),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e.class() {
                ErrorClass::Data => ExitCode::from(EXIT_DATA),
                ErrorClass::Contract => ExitCode::from(EXIT_CONTRACT),
            }
        }
    }
}
