//! File-format helpers shared by the subcommands: line-delimited JSON
//! records, the probability CSV, and the JSON model/threshold dumps.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use valuekit::annotate::{AnnotationMatrix, AnnotationRecord};
use valuekit::circle::{ValueProfile, ValueType, VALUE_COUNT};
use valuekit::classifier::{FeatureSpace, ModelWeights, ThresholdSet};
use valuekit::corpus::{parse_posts, ParseOutcome};
use valuekit::error::{Error, Result};
use valuekit::soft::{SoftLabelRecord, SoftLabelTable};

pub fn read_posts(path: &Path) -> Result<ParseOutcome> {
    let file = File::open(path)?;
    parse_posts(BufReader::new(file))
}

pub fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let file = File::open(path)?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record = serde_json::from_str(&line)
            .map_err(|e| Error::Parse { line: i + 1, message: e.to_string() })?;
        out.push(record);
    }
    Ok(out)
}

pub fn write_jsonl<T: Serialize>(path: &Path, items: &[T]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for item in items {
        serde_json::to_writer(&mut w, item).map_err(|e| Error::Input(e.to_string()))?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_string(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text)?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Input(e.to_string()))?;
    std::fs::write(path, text + "\n")?;
    Ok(())
}

pub fn read_annotation_matrix(path: &Path, runs_per_cell: usize) -> Result<AnnotationMatrix> {
    let records: Vec<AnnotationRecord> = read_jsonl(path)?;
    AnnotationMatrix::from_records(records, runs_per_cell)
}

pub fn read_soft_table(path: &Path) -> Result<SoftLabelTable> {
    let records: Vec<SoftLabelRecord> = read_jsonl(path)?;
    SoftLabelTable::from_records(records)
}

/// Expert record: per-rater binary labels for one (post, value).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExpertRecord {
    pub post_id: String,
    pub value: ValueType,
    pub labels: Vec<u8>,
}

pub type ExpertLabels = BTreeMap<(String, ValueType), Vec<u8>>;

pub fn read_expert(path: &Path) -> Result<ExpertLabels> {
    let records: Vec<ExpertRecord> = read_jsonl(path)?;
    let mut out = ExpertLabels::new();
    for r in records {
        if r.labels.is_empty() || r.labels.iter().any(|l| *l > 1) {
            return Err(Error::Input(format!(
                "expert labels for {}/{} must be a nonempty 0/1 list",
                r.post_id, r.value
            )));
        }
        out.insert((r.post_id, r.value), r.labels);
    }
    Ok(out)
}

/// Probability CSV: header `post_id` then the ten value columns.
pub fn write_probas(path: &Path, ids: &[String], profiles: &[ValueProfile]) -> Result<()> {
    let mut w = csv::Writer::from_writer(BufWriter::new(File::create(path)?));
    let mut header = vec!["post_id".to_string()];
    header.extend(ValueType::ALL.iter().map(|v| v.name().to_string()));
    w.write_record(&header)?;
    for (id, profile) in ids.iter().zip(profiles) {
        let mut row = vec![id.clone()];
        row.extend(profile.weights().iter().map(|p| format!("{p:.6}")));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_probas(path: &Path) -> Result<(Vec<String>, Vec<ValueProfile>)> {
    let mut r = csv::Reader::from_reader(BufReader::new(File::open(path)?));
    let headers = r.headers()?.clone();
    if headers.len() != 1 + VALUE_COUNT || headers.get(0) != Some("post_id") {
        return Err(Error::Input(format!(
            "probability CSV must have header post_id plus {VALUE_COUNT} value columns"
        )));
    }
    // map CSV columns onto circle order
    let mut column_of = [0usize; VALUE_COUNT];
    for (i, name) in headers.iter().enumerate().skip(1) {
        let value: ValueType = name.parse()?;
        column_of[value.circle_index()] = i;
    }
    let mut ids = Vec::new();
    let mut profiles = Vec::new();
    for (lineno, record) in r.records().enumerate() {
        let record = record?;
        let mut weights = [0.0; VALUE_COUNT];
        for v in 0..VALUE_COUNT {
            let raw = record.get(column_of[v]).unwrap_or_default();
            weights[v] = raw.parse().map_err(|_| Error::Parse {
                line: lineno + 2,
                message: format!("bad probability `{raw}`"),
            })?;
            if !(0.0..=1.0).contains(&weights[v]) {
                return Err(Error::Parse {
                    line: lineno + 2,
                    message: format!("probability {} outside [0,1]", weights[v]),
                });
            }
        }
        ids.push(record.get(0).unwrap_or_default().to_string());
        profiles.push(ValueProfile::new(weights)?);
    }
    if ids.is_empty() {
        return Err(Error::Input(format!("no probability rows in {}", path.display())));
    }
    Ok((ids, profiles))
}

/// JSON model dump with the embedded feature space and training config.
#[derive(Debug, Serialize, Deserialize)]
pub struct ModelFile {
    pub format_version: u32,
    pub feature_space: FeatureSpace,
    pub model: ModelWeights,
}

pub fn write_model(path: &Path, feature_space: &FeatureSpace, model: &ModelWeights) -> Result<()> {
    let file = ModelFile {
        format_version: 1,
        feature_space: feature_space.clone(),
        model: model.clone(),
    };
    write_json(path, &file)
}

pub fn read_model(path: &Path) -> Result<ModelFile> {
    let text = std::fs::read_to_string(path)?;
    let file: ModelFile =
        serde_json::from_str(&text).map_err(|e| Error::Input(format!("bad model file: {e}")))?;
    if file.format_version != 1 {
        return Err(Error::Input(format!(
            "unsupported model format version {}",
            file.format_version
        )));
    }
    Ok(file)
}

pub fn write_thresholds(path: &Path, set: &ThresholdSet) -> Result<()> {
    write_json(path, set)
}

pub fn read_thresholds(path: &Path) -> Result<ThresholdSet> {
    let text = std::fs::read_to_string(path)?;
    let set: ThresholdSet = serde_json::from_str(&text)
        .map_err(|e| Error::Input(format!("bad thresholds file: {e}")))?;
    set.validate()?;
    Ok(set)
}

/// Join probability rows with a binary reference from soft labels, strictly:
/// both sides must cover exactly the same posts, and every post needs all
/// ten reference cells. Returns rows sorted by post id.
pub fn join_reference(
    ids: &[String],
    profiles: &[ValueProfile],
    soft: &SoftLabelTable,
) -> Result<(Vec<String>, Vec<ValueProfile>, Vec<[u8; VALUE_COUNT]>)> {
    let binary = soft.binarized();
    let mut reference_posts: BTreeMap<String, [Option<u8>; VALUE_COUNT]> = BTreeMap::new();
    for ((post_id, value), label) in &binary {
        reference_posts.entry(post_id.clone()).or_insert([None; VALUE_COUNT])
            [value.circle_index()] = Some(*label);
    }

    let mut prob_by_id: BTreeMap<&String, &ValueProfile> = BTreeMap::new();
    for (id, profile) in ids.iter().zip(profiles) {
        if prob_by_id.insert(id, profile).is_some() {
            return Err(Error::Input(format!("duplicate post id `{id}` in probabilities")));
        }
    }

    let only_probas: Vec<&String> =
        prob_by_id.keys().filter(|id| !reference_posts.contains_key(**id)).copied().collect();
    let only_reference: Vec<&String> =
        reference_posts.keys().filter(|id| !prob_by_id.contains_key(id)).collect();
    if !only_probas.is_empty() || !only_reference.is_empty() {
        let clip = |v: &[&String]| -> Vec<String> {
            v.iter().take(5).map(|s| (*s).clone()).collect()
        };
        return Err(Error::Alignment(format!(
            "{} probability-only posts (e.g. {:?}), {} reference-only posts (e.g. {:?})",
            only_probas.len(),
            clip(&only_probas),
            only_reference.len(),
            clip(&only_reference),
        )));
    }

    let mut out_ids = Vec::new();
    let mut out_profiles = Vec::new();
    let mut out_reference = Vec::new();
    for (id, cells) in &reference_posts {
        let mut row = [0u8; VALUE_COUNT];
        for (v, cell) in cells.iter().enumerate() {
            row[v] = cell.ok_or_else(|| {
                Error::Input(format!(
                    "post `{id}` is missing a reference label for {}",
                    ValueType::ALL[v]
                ))
            })?;
        }
        out_ids.push(id.clone());
        out_profiles.push(prob_by_id[id].clone());
        out_reference.push(row);
    }
    Ok((out_ids, out_profiles, out_reference))
}
