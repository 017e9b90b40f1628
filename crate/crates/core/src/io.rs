//! File formats for series, dictionaries, matrix profiles and label files.
//!
//! Text formats write reals with the shortest representation that parses
//! back to the same value. Series may also be stored in a little-endian
//! binary form: the magic `MPD1`, a `u64` sample count, then the samples
//! as `f64`.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dict_join::{normalize_regions, Region};
use crate::dictionary::{Dictionary, Segment};
use crate::error::{Error, Result};
use crate::profiles::{JoinKind, MatrixProfile, NO_NEIGHBOR};
use crate::series::TimeSeries;

pub const SERIES_MAGIC: &[u8; 4] = b"MPD1";
pub const DICTIONARY_FORMAT_VERSION: u32 = 1;
pub const PROFILE_COLUMNS: &str = "window_start,distance,nn_index";
pub const LABEL_COLUMNS: &str = "start,end";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesFormat {
    Text,
    Binary,
}

fn text(bytes: &[u8]) -> Result<&str> {
    std::str::from_utf8(bytes).map_err(|e| {
        let line = bytes[..e.valid_up_to()].iter().filter(|&&b| b == b'\n').count() + 1;
        Error::parse(line, "invalid UTF-8")
    })
}

fn parse_real(s: &str, line: usize, field: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::parse_field(line, field, format!("`{}` is not a number", s.trim())))
}

fn parse_index(s: &str, line: usize, field: &str) -> Result<usize> {
    s.trim()
        .parse::<usize>()
        .map_err(|_| Error::parse_field(line, field, format!("`{}` is not an index", s.trim())))
}

// ---- series ----

pub fn series_to_text(series: &TimeSeries) -> String {
    let mut out = format!("# n={}\n", series.len());
    for v in series.values() {
        out.push_str(&format!("{v:?}\n"));
    }
    out
}

pub fn series_to_binary(series: &TimeSeries) -> Vec<u8> {
    let mut out = Vec::with_capacity(12 + 8 * series.len());
    out.extend_from_slice(SERIES_MAGIC);
    out.extend_from_slice(&(series.len() as u64).to_le_bytes());
    for v in series.values() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

/// Parses either series form; the binary form is recognized by its magic.
pub fn parse_series(bytes: &[u8]) -> Result<TimeSeries> {
    if bytes.starts_with(SERIES_MAGIC) {
        parse_series_binary(bytes)
    } else {
        parse_series_text(text(bytes)?)
    }
}

fn parse_series_binary(bytes: &[u8]) -> Result<TimeSeries> {
    let header: [u8; 8] = bytes
        .get(4..12)
        .and_then(|b| b.try_into().ok())
        .ok_or_else(|| Error::parse(0, "truncated binary header"))?;
    let count = u64::from_le_bytes(header);
    let body = &bytes[12..];
    if !body.len().is_multiple_of(8) || (body.len() / 8) as u64 != count {
        return Err(Error::parse(
            0,
            format!("header declares {count} samples but the body holds {} bytes", body.len()),
        ));
    }
    let values: Vec<f64> = body
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    finish_series(values)
}

fn parse_series_text(s: &str) -> Result<TimeSeries> {
    let mut declared: Option<(usize, usize)> = None;
    let mut values = Vec::new();
    for (i, raw) in s.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('#') {
            if let Some(n) = comment.trim().strip_prefix("n=") {
                if declared.is_some() || !values.is_empty() {
                    return Err(Error::parse(line, "the `# n=` header must come first"));
                }
                declared = Some((parse_index(n, line, "n")?, line));
            }
            continue;
        }
        let v = parse_real(trimmed, line, "sample")?;
        if !v.is_finite() {
            return Err(Error::parse_field(line, "sample", "non-finite sample"));
        }
        values.push(v);
    }
    if let Some((n, line)) = declared {
        if n != values.len() {
            return Err(Error::parse(
                line,
                format!("header declares {n} samples but {} were found", values.len()),
            ));
        }
    }
    finish_series(values)
}

fn finish_series(values: Vec<f64>) -> Result<TimeSeries> {
    if values.is_empty() {
        return Err(Error::parse(0, "series contains no samples"));
    }
    TimeSeries::new(values)
}

pub fn read_series(path: impl AsRef<Path>) -> Result<TimeSeries> {
    parse_series(&fs::read(path)?)
}

pub fn write_series(path: impl AsRef<Path>, series: &TimeSeries, format: SeriesFormat) -> Result<()> {
    match format {
        SeriesFormat::Text => fs::write(path, series_to_text(series))?,
        SeriesFormat::Binary => fs::write(path, series_to_binary(series))?,
    }
    Ok(())
}

// ---- dictionary ----

#[derive(Serialize, Deserialize)]
struct SegmentDoc {
    start: usize,
    length: usize,
    values: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct DictionaryDoc {
    format_version: u32,
    m: usize,
    k: f64,
    source_length: usize,
    space_saving: f64,
    e_max: Option<f64>,
    core_starts: Vec<usize>,
    segments: Vec<SegmentDoc>,
}

const DICTIONARY_FIELDS: [&str; 8] = [
    "format_version",
    "m",
    "k",
    "source_length",
    "space_saving",
    "e_max",
    "core_starts",
    "segments",
];
const SEGMENT_FIELDS: [&str; 3] = ["start", "length", "values"];

pub fn dictionary_to_json(dictionary: &Dictionary) -> String {
    let doc = DictionaryDoc {
        format_version: DICTIONARY_FORMAT_VERSION,
        m: dictionary.m(),
        k: dictionary.k(),
        source_length: dictionary.source_length(),
        space_saving: dictionary.space_saving(),
        e_max: dictionary.e_max(),
        core_starts: dictionary.core_starts.clone(),
        segments: dictionary
            .segments()
            .iter()
            .map(|s| SegmentDoc {
                start: s.start,
                length: s.len(),
                values: s.values.clone(),
            })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("dictionary values are finite");
    out.push('\n');
    out
}

fn json_error(e: serde_json::Error) -> Error {
    Error::parse(e.line(), e.to_string())
}

fn unknown_fields(obj: &serde_json::Map<String, serde_json::Value>, known: &[&str]) -> Vec<String> {
    let known: BTreeSet<&str> = known.iter().copied().collect();
    obj.keys().filter(|k| !known.contains(k.as_str())).cloned().collect()
}

pub fn parse_dictionary(bytes: &[u8]) -> Result<Dictionary> {
    let value: serde_json::Value = serde_json::from_slice(bytes).map_err(json_error)?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Schema("dictionary document must be an object".into()))?;
    match obj.get("format_version").map(|v| v.as_u64()) {
        None => return Err(Error::Schema("missing `format_version`".into())),
        Some(Some(v)) if v == DICTIONARY_FORMAT_VERSION as u64 => {}
        Some(v) => {
            return Err(Error::Version {
                message: format!(
                    "format_version {} is not supported (expected {DICTIONARY_FORMAT_VERSION})",
                    v.map_or_else(|| obj["format_version"].to_string(), |v| v.to_string())
                ),
            })
        }
    }
    let mut unknown = unknown_fields(obj, &DICTIONARY_FIELDS);
    if let Some(segs) = obj.get("segments").and_then(|s| s.as_array()) {
        for seg in segs.iter().filter_map(|s| s.as_object()) {
            unknown.extend(unknown_fields(seg, &SEGMENT_FIELDS).into_iter().map(|f| format!("segments[].{f}")));
        }
    }
    if !unknown.is_empty() {
        return Err(Error::Version {
            message: format!(
                "fields {unknown:?} are not part of format_version {DICTIONARY_FORMAT_VERSION}"
            ),
        });
    }

    let doc: DictionaryDoc = serde_json::from_value(value).map_err(|e| Error::Schema(e.to_string()))?;
    let mut segments = Vec::with_capacity(doc.segments.len());
    for (n, s) in doc.segments.into_iter().enumerate() {
        if s.length != s.values.len() {
            return Err(Error::Schema(format!(
                "segment {n} declares length {} but holds {} values",
                s.length,
                s.values.len()
            )));
        }
        segments.push(Segment {
            start: s.start,
            values: s.values,
        });
    }
    if doc.source_length == 0 {
        return Err(Error::Schema("source_length must be positive".into()));
    }
    let dictionary = Dictionary::new(segments, doc.m, doc.k, doc.source_length, doc.core_starts, doc.e_max)
        .map_err(|e| match e {
            Error::WindowTooSmall { m } => Error::Schema(format!("window length {m} is below 2")),
            other => other,
        })?;
    let recomputed = dictionary.space_saving();
    let gap = (recomputed - doc.space_saving).abs();
    if gap.is_nan() || gap > 1e-12 {
        return Err(Error::Schema(format!(
            "stored space_saving {} does not match {recomputed} recomputed from segments",
            doc.space_saving
        )));
    }
    Ok(dictionary)
}

pub fn read_dictionary(path: impl AsRef<Path>) -> Result<Dictionary> {
    parse_dictionary(&fs::read(path)?)
}

pub fn write_dictionary(path: impl AsRef<Path>, dictionary: &Dictionary) -> Result<()> {
    fs::write(path, dictionary_to_json(dictionary))?;
    Ok(())
}

// ---- matrix profile ----

/// CSV with a `# kind=...,m=...` metadata line, a column header and one
/// row per window. A missing neighbor is written as `-1`.
pub fn profile_to_text(profile: &MatrixProfile) -> String {
    let mut out = format!(
        "# kind={},m={}\n{PROFILE_COLUMNS}\n",
        profile.kind().as_str(),
        profile.m()
    );
    for (i, (&d, &j)) in profile.values().iter().zip(profile.indices()).enumerate() {
        if j == NO_NEIGHBOR {
            out.push_str(&format!("{i},{d:?},-1\n"));
        } else {
            out.push_str(&format!("{i},{d:?},{j}\n"));
        }
    }
    out
}

fn parse_profile_meta(line: &str, number: usize) -> Result<(JoinKind, usize)> {
    let body = line
        .strip_prefix('#')
        .ok_or_else(|| Error::parse(number, "expected `# kind=...,m=...`"))?;
    let mut kind = None;
    let mut m = None;
    for part in body.split(',') {
        let (key, value) = part
            .trim()
            .split_once('=')
            .ok_or_else(|| Error::parse(number, format!("`{}` is not key=value", part.trim())))?;
        match key.trim() {
            "kind" => kind = Some(value.trim().parse::<JoinKind>().map_err(|e| Error::parse_field(number, "kind", e.to_string()))?),
            "m" => m = Some(parse_index(value, number, "m")?),
            other => return Err(Error::parse_field(number, other, "unknown key")),
        }
    }
    match (kind, m) {
        (Some(k), Some(m)) => Ok((k, m)),
        _ => Err(Error::parse(number, "metadata needs both `kind` and `m`")),
    }
}

pub fn parse_profile(bytes: &[u8]) -> Result<MatrixProfile> {
    let s = text(bytes)?;
    let mut lines = s.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end_matches('\r')));
    let (n1, meta) = lines.next().ok_or_else(|| Error::parse(1, "empty profile file"))?;
    let (kind, m) = parse_profile_meta(meta, n1)?;
    let (n2, header) = lines.next().ok_or_else(|| Error::parse(2, "missing column header"))?;
    if header.trim() != PROFILE_COLUMNS {
        return Err(Error::parse(n2, format!("expected header `{PROFILE_COLUMNS}`")));
    }
    let mut values = Vec::new();
    let mut indices = Vec::new();
    for (line, row) in lines {
        if row.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = row.split(',').collect();
        if fields.len() != 3 {
            return Err(Error::parse(line, format!("expected 3 columns, found {}", fields.len())));
        }
        let start = parse_index(fields[0], line, "window_start")?;
        if start != values.len() {
            return Err(Error::parse_field(
                line,
                "window_start",
                format!("expected {}, found {start}", values.len()),
            ));
        }
        let d = parse_real(fields[1], line, "distance")?;
        if d.is_nan() || d < 0.0 {
            return Err(Error::parse_field(line, "distance", "distance must be >= 0"));
        }
        let j = match fields[2].trim() {
            "-1" => NO_NEIGHBOR,
            other => parse_index(other, line, "nn_index")?,
        };
        values.push(d);
        indices.push(j);
    }
    MatrixProfile::new(values, indices, kind, m).map_err(|e| Error::parse_field(1, "m", e.to_string()))
}

pub fn read_profile(path: impl AsRef<Path>) -> Result<MatrixProfile> {
    parse_profile(&fs::read(path)?)
}

pub fn write_profile(path: impl AsRef<Path>, profile: &MatrixProfile) -> Result<()> {
    fs::write(path, profile_to_text(profile))?;
    Ok(())
}

// ---- labels ----

pub fn labels_to_text(regions: &[Region]) -> String {
    let mut out = format!("{LABEL_COLUMNS}\n");
    for r in regions {
        out.push_str(&format!("{},{}\n", r.start, r.end));
    }
    out
}

/// Parses half-open anomalous regions and normalizes them (sorted, merged).
/// With `n` given, every region must lie within `[0, n)`.
pub fn parse_labels(bytes: &[u8], n: Option<usize>) -> Result<Vec<Region>> {
    let s = text(bytes)?;
    let mut regions = Vec::new();
    for (i, raw) in s.lines().enumerate() {
        let line = i + 1;
        let row = raw.trim();
        if row.is_empty() || row.starts_with('#') || (regions.is_empty() && row == LABEL_COLUMNS) {
            continue;
        }
        let (a, b) = row
            .split_once(',')
            .ok_or_else(|| Error::parse(line, "expected `start,end`"))?;
        let start = parse_index(a, line, "start")?;
        let end = parse_index(b, line, "end")?;
        if start >= end {
            return Err(Error::parse_field(line, "end", format!("end {end} must exceed start {start}")));
        }
        if let Some(n) = n {
            if end > n {
                return Err(Error::parse_field(line, "end", format!("end {end} exceeds series length {n}")));
            }
        }
        regions.push(Region { start, end });
    }
    Ok(normalize_regions(&regions))
}

pub fn read_labels(path: impl AsRef<Path>, n: Option<usize>) -> Result<Vec<Region>> {
    parse_labels(&fs::read(path)?, n)
}

pub fn write_labels(path: impl AsRef<Path>, regions: &[Region]) -> Result<()> {
    fs::write(path, labels_to_text(regions))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::{ab_join, self_join};
    use crate::synth;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_series(rng: &mut ChaCha8Rng) -> TimeSeries {
        let n = rng.random_range(1..200);
        let scale = 10f64.powi(rng.random_range(-6..7));
        let values = (0..n).map(|_| scale * rng.random_range(-1.0..1.0)).collect();
        TimeSeries::new(values).unwrap()
    }

    fn random_dictionary(rng: &mut ChaCha8Rng) -> Dictionary {
        let m = rng.random_range(2..10);
        let mut segments = Vec::new();
        let mut pos = rng.random_range(0..20);
        for _ in 0..rng.random_range(0..6) {
            let len = rng.random_range(m..3 * m);
            segments.push(Segment {
                start: pos,
                values: (0..len).map(|_| rng.random_range(-5.0..5.0)).collect(),
            });
            pos += len + rng.random_range(0..10);
        }
        let source_length = pos + rng.random_range(1..20);
        let cores = (0..segments.len()).map(|_| rng.random_range(0..source_length)).collect();
        let e_max = rng.random_bool(0.5).then(|| rng.random_range(0.0..3.0));
        Dictionary::new(segments, m, rng.random_range(0.0..3.0), source_length, cores, e_max).unwrap()
    }

    fn random_profile(rng: &mut ChaCha8Rng) -> MatrixProfile {
        let n = rng.random_range(0..100);
        let values = (0..n)
            .map(|_| if rng.random_bool(0.05) { f64::INFINITY } else { rng.random_range(0.0..20.0) })
            .collect();
        let indices = (0..n)
            .map(|_| if rng.random_bool(0.05) { NO_NEIGHBOR } else { rng.random_range(0..1000) })
            .collect();
        let kind = if rng.random_bool(0.5) { JoinKind::SelfJoin } else { JoinKind::AbJoin };
        MatrixProfile::new(values, indices, kind, rng.random_range(2..64)).unwrap()
    }

    fn random_labels(rng: &mut ChaCha8Rng) -> Vec<Region> {
        let mut regions: Vec<Region> = (0..rng.random_range(0..8))
            .map(|_| {
                let start = rng.random_range(0..1000);
                Region { start, end: start + rng.random_range(1..50) }
            })
            .collect();
        regions = normalize_regions(&regions);
        regions
    }

    /// Flips, inserts, deletes or truncates bytes.
    fn corrupt(bytes: &[u8], rng: &mut ChaCha8Rng) -> Vec<u8> {
        let mut out = bytes.to_vec();
        for _ in 0..rng.random_range(1..4) {
            if out.is_empty() {
                out.push(rng.random());
                continue;
            }
            let at = rng.random_range(0..out.len());
            match rng.random_range(0..4) {
                0 => out[at] = rng.random(),
                1 => out.insert(at, rng.random()),
                2 => {
                    out.remove(at);
                }
                _ => out.truncate(at),
            }
        }
        out
    }

    #[test]
    fn binary_series_round_trip_example() {
        let t = TimeSeries::new(vec![1.0, -2.5, 3.25]).unwrap();
        assert_eq!(parse_series(&series_to_binary(&t)).unwrap(), t);
    }

    #[test]
    fn series_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let t = random_series(&mut rng);
            let bin = parse_series(&series_to_binary(&t)).unwrap();
            assert!(bin.values().iter().zip(t.values()).all(|(a, b)| a.to_bits() == b.to_bits()));
            let txt = parse_series(series_to_text(&t).as_bytes()).unwrap();
            assert_eq!(txt.len(), t.len());
            assert!(txt.values().iter().zip(t.values()).all(|(a, b)| (a - b).abs() <= 1e-12 * b.abs().max(1.0)));
        }
    }

    #[test]
    fn series_errors() {
        assert!(matches!(parse_series(b""), Err(Error::Parse { .. })));
        assert!(matches!(parse_series(b"# n=2\n1.0\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_series(b"1.0\nabc\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_series(b"1.0\nNaN\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_series(b"MPD1\x05\0\0\0\0\0\0\0"), Err(Error::Parse { .. })));
        let plain = parse_series(b"1\n\n2.5\n").unwrap();
        assert_eq!(plain.values(), &[1.0, 2.5]);
    }

    #[test]
    fn dictionary_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..1000 {
            let d = random_dictionary(&mut rng);
            let back = parse_dictionary(dictionary_to_json(&d).as_bytes()).unwrap();
            assert_eq!(back, d);
        }
    }

    #[test]
    fn learned_dictionary_round_trips() {
        let t = TimeSeries::new(synth::random_walk(1500, &mut ChaCha8Rng::seed_from_u64(3))).unwrap();
        let cfg = crate::dictionary::LearnConfig::new(30, crate::dictionary::StopRule::SpaceSaving(0.8));
        let d = crate::dictionary::learn_dictionary(&t, &cfg).unwrap();
        let back = parse_dictionary(dictionary_to_json(&d).as_bytes()).unwrap();
        assert_eq!(back, d);
    }

    fn sample_doc() -> serde_json::Value {
        serde_json::json!({
            "format_version": 1,
            "m": 3,
            "k": 1.5,
            "source_length": 20,
            "space_saving": 0.5,
            "e_max": null,
            "core_starts": [0, 10],
            "segments": [
                {"start": 0, "length": 5, "values": [1.0, 2.0, 3.0, 4.0, 5.0]},
                {"start": 10, "length": 5, "values": [1.0, 2.0, 3.0, 4.0, 5.0]}
            ]
        })
    }

    fn load(v: &serde_json::Value) -> Result<Dictionary> {
        parse_dictionary(v.to_string().as_bytes())
    }

    #[test]
    fn dictionary_schema_checks() {
        assert!(load(&sample_doc()).is_ok());

        let mut overlap = sample_doc();
        overlap["segments"][1]["start"] = 3.into();
        assert!(matches!(load(&overlap), Err(Error::Schema(_))));

        let mut saving = sample_doc();
        saving["space_saving"] = 0.4.into();
        assert!(matches!(load(&saving), Err(Error::Schema(_))));

        let mut length = sample_doc();
        length["segments"][0]["length"] = 4.into();
        assert!(matches!(load(&length), Err(Error::Schema(_))));

        let mut future = sample_doc();
        future["checksum"] = "abc".into();
        assert!(matches!(load(&future), Err(Error::Version { .. })));

        let mut nested = sample_doc();
        nested["segments"][0]["weight"] = 1.into();
        assert!(matches!(load(&nested), Err(Error::Version { .. })));

        let mut version = sample_doc();
        version["format_version"] = 2.into();
        assert!(matches!(load(&version), Err(Error::Version { .. })));

        assert!(matches!(parse_dictionary(b"{\"m\": "), Err(Error::Parse { .. })));
    }

    #[test]
    fn profile_row_count() {
        let t = TimeSeries::new((0..10).map(|i| ((i * i) % 7) as f64).collect()).unwrap();
        let p = ab_join(&t, &t, 4).unwrap();
        let text = profile_to_text(&p);
        assert_eq!(text.lines().count(), 2 + 7);
        assert_eq!(parse_profile(text.as_bytes()).unwrap(), p);
    }

    #[test]
    fn profile_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..1000 {
            let p = random_profile(&mut rng);
            assert_eq!(parse_profile(profile_to_text(&p).as_bytes()).unwrap(), p);
        }
        let t = TimeSeries::new(synth::white_noise(64, &mut rng)).unwrap();
        let p = self_join(&t, 8).unwrap();
        assert_eq!(parse_profile(profile_to_text(&p).as_bytes()).unwrap(), p);
    }

    #[test]
    fn label_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let r = random_labels(&mut rng);
            assert_eq!(parse_labels(labels_to_text(&r).as_bytes(), None).unwrap(), r);
        }
    }

    #[test]
    fn labels_are_normalized_and_checked() {
        let r = parse_labels(b"start,end\n10,20\n15,30\n40,41\n", Some(50)).unwrap();
        assert_eq!(r, vec![Region { start: 10, end: 30 }, Region { start: 40, end: 41 }]);
        assert!(matches!(parse_labels(b"5,5\n", None), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_labels(b"5,60\n", Some(50)), Err(Error::Parse { .. })));
    }

    #[test]
    fn corrupted_inputs_give_structured_errors() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..1000 {
            let t = random_series(&mut rng);
            let _ = parse_series(&corrupt(&series_to_binary(&t), &mut rng));
            let _ = parse_series(&corrupt(series_to_text(&t).as_bytes(), &mut rng));
            let d = random_dictionary(&mut rng);
            let _ = parse_dictionary(&corrupt(dictionary_to_json(&d).as_bytes(), &mut rng));
            let p = random_profile(&mut rng);
            let _ = parse_profile(&corrupt(profile_to_text(&p).as_bytes(), &mut rng));
            let l = random_labels(&mut rng);
            let _ = parse_labels(&corrupt(labels_to_text(&l).as_bytes(), &mut rng), Some(1100));
        }
    }

    #[test]
    fn files_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let t = TimeSeries::new(vec![0.1, 0.2, 0.30000000000000004]).unwrap();
        for (name, fmt) in [("a.bin", SeriesFormat::Binary), ("a.txt", SeriesFormat::Text)] {
            let path = dir.path().join(name);
            write_series(&path, &t, fmt).unwrap();
            assert_eq!(read_series(&path).unwrap(), t);
        }
        assert!(matches!(read_series(dir.path().join("missing")), Err(Error::Io(_))));
    }
}
