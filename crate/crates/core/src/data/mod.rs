//! Dataset loading, validation, and serialization.
//!
//! Datasets are JSONL files (one record per line) in one of four schemas.
//! Records are immutable after load; every transform returns a new dataset.

mod pairs;
mod transform;

pub use pairs::{binarize_similarity_scores, make_similarity_pairs, LabeledPair, ScoreRow};
pub use transform::{shuffle, sort, split};

use std::fmt;
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DataError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: missing or mistyped field `{field}`")]
    Schema { line: usize, field: String },
    #[error("line {line}: invalid JSON: {message}")]
    Json { line: usize, message: String },
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("field `{0}` missing from at least one record")]
    MissingField(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("similarity score {score} for pair ({id_1}, {id_2}) outside [0, 1]")]
    OutOfRangeScore {
        id_1: String,
        id_2: String,
        score: f64,
    },
}

/// The four record schemas used by the datasets this crate manages.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Schema {
    CodeClassification,
    ParallelismLabel,
    SimilarityPairs,
    Qa,
}

impl Schema {
    pub fn name(&self) -> &'static str {
        match self {
            Schema::CodeClassification => "code_classification",
            Schema::ParallelismLabel => "parallelism_label",
            Schema::SimilarityPairs => "similarity_pairs",
            Schema::Qa => "qa",
        }
    }
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Schema {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "code_classification" | "classification" => Ok(Schema::CodeClassification),
            "parallelism_label" | "parallelism" => Ok(Schema::ParallelismLabel),
            "similarity_pairs" | "similarity" => Ok(Schema::SimilarityPairs),
            "qa" | "openmp_qa" => Ok(Schema::Qa),
            other => Err(format!("unrecognized schema: {other}")),
        }
    }
}

pub const QA_CATEGORIES: [&str; 4] = ["Basics", "Examples", "Compilers", "Benchmarks"];

/// One dataset row: a JSON object with schema-defined required keys.
/// Extra fields are preserved verbatim.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Record {
    pub fields: Map<String, Value>,
}

impl Record {
    pub fn get(&self, key: &str) -> Option<&Value> {
        self.fields.get(key)
    }

    pub fn get_str(&self, key: &str) -> Option<&str> {
        self.fields.get(key).and_then(Value::as_str)
    }

    pub fn get_int(&self, key: &str) -> Option<i64> {
        self.fields.get(key).and_then(Value::as_i64)
    }

    /// Record identity string, used for provenance and error reporting.
    pub fn id_string(&self) -> String {
        match self.fields.get("id") {
            Some(Value::String(s)) => s.clone(),
            Some(v) => v.to_string(),
            None => String::new(),
        }
    }
}

/// An ordered collection of schema-validated records.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub schema: Schema,
    pub records: Vec<Record>,
    pub provenance: String,
}

impl Dataset {
    pub fn new(schema: Schema, records: Vec<Record>, provenance: impl Into<String>) -> Self {
        Self {
            schema,
            records,
            provenance: provenance.into(),
        }
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

fn check_field(map: &Map<String, Value>, key: &str, pred: impl Fn(&Value) -> bool) -> bool {
    map.get(key).is_some_and(pred)
}

fn is_scalar(v: &Value) -> bool {
    v.is_string() || v.is_number()
}

fn is_binary(v: &Value) -> bool {
    matches!(v.as_i64(), Some(0) | Some(1))
}

/// Validate one record against a schema. Returns the offending field on error.
pub fn validate_record(schema: Schema, record: &Record) -> Result<(), String> {
    let map = &record.fields;
    let required: &[(&str, fn(&Value) -> bool)] = match schema {
        Schema::CodeClassification => &[
            ("id", is_scalar),
            ("code", Value::is_string),
            ("problem_label", |v| v.as_i64().is_some()),
        ],
        Schema::ParallelismLabel => &[
            ("id", is_scalar),
            ("code", Value::is_string),
            ("parallelizable", is_binary),
        ],
        Schema::SimilarityPairs => &[
            ("id", is_scalar),
            ("code_1", Value::is_string),
            ("code_2", Value::is_string),
            ("label", is_binary),
        ],
        Schema::Qa => &[
            ("id", is_scalar),
            ("category", |v| {
                v.as_str().is_some_and(|s| QA_CATEGORIES.contains(&s))
            }),
            ("question", Value::is_string),
            ("reference_answer", Value::is_string),
        ],
    };
    for (key, pred) in required {
        if !check_field(map, key, pred) {
            return Err((*key).to_string());
        }
    }
    if schema == Schema::ParallelismLabel {
        if let Some(directive) = map.get("directive") {
            if !directive.is_string() && !directive.is_null() {
                return Err("directive".to_string());
            }
        }
    }
    Ok(())
}

/// Load a JSONL dataset, validating every record against `schema`.
/// Blank lines are not permitted; records keep file order.
pub fn load(path: impl AsRef<Path>, schema: Schema) -> Result<Dataset, DataError> {
    let path = path.as_ref();
    let file = fs::File::open(path)?;
    let reader = BufReader::new(file);
    let mut records = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Map<String, Value> =
            serde_json::from_str(&line).map_err(|e| DataError::Json {
                line: line_no,
                message: e.to_string(),
            })?;
        let record = Record { fields };
        validate_record(schema, &record).map_err(|field| DataError::Schema {
            line: line_no,
            field,
        })?;
        records.push(record);
    }
    Ok(Dataset::new(schema, records, path.display().to_string()))
}

#[derive(Debug, Serialize, Deserialize)]
struct DatasetMeta {
    schema: String,
    record_count: usize,
    provenance: String,
}

/// Write a dataset as JSONL plus a `<stem>.meta.json` sidecar carrying the
/// schema name, record count, and provenance.
pub fn save(dataset: &Dataset, path: impl AsRef<Path>) -> Result<(), DataError> {
    let path = path.as_ref();
    let mut out = Vec::new();
    for record in &dataset.records {
        serde_json::to_writer(&mut out, record).expect("records serialize");
        out.push(b'\n');
    }
    fs::write(path, out)?;

    let meta = DatasetMeta {
        schema: dataset.schema.name().to_string(),
        record_count: dataset.records.len(),
        provenance: dataset.provenance.clone(),
    };
    let mut meta_path = path.to_path_buf();
    meta_path.set_extension("meta.json");
    let mut file = fs::File::create(meta_path)?;
    serde_json::to_writer_pretty(&mut file, &meta).expect("meta serializes");
    file.write_all(b"\n")?;
    Ok(())
}

/// Summary statistics for a dataset: record count plus per-schema histograms.
pub fn stats(dataset: &Dataset) -> Value {
    use std::collections::BTreeMap;
    let mut out = Map::new();
    out.insert("schema".into(), Value::String(dataset.schema.name().into()));
    out.insert("records".into(), Value::from(dataset.records.len()));
    match dataset.schema {
        Schema::Qa => {
            let mut histogram: BTreeMap<&str, usize> = BTreeMap::new();
            for cat in QA_CATEGORIES {
                histogram.insert(cat, 0);
            }
            for r in &dataset.records {
                if let Some(cat) = r.get_str("category") {
                    *histogram.entry(cat).or_default() += 1;
                }
            }
            let categories: Map<String, Value> = histogram
                .into_iter()
                .map(|(k, v)| (k.to_string(), Value::from(v)))
                .collect();
            out.insert("categories".into(), Value::Object(categories));
        }
        Schema::ParallelismLabel => {
            let positives = dataset
                .records
                .iter()
                .filter(|r| r.get_int("parallelizable") == Some(1))
                .count();
            out.insert("parallelizable".into(), Value::from(positives));
            out.insert(
                "not_parallelizable".into(),
                Value::from(dataset.records.len() - positives),
            );
        }
        Schema::SimilarityPairs => {
            let positives = dataset
                .records
                .iter()
                .filter(|r| r.get_int("label") == Some(1))
                .count();
            out.insert("positive_pairs".into(), Value::from(positives));
            out.insert(
                "negative_pairs".into(),
                Value::from(dataset.records.len() - positives),
            );
        }
        Schema::CodeClassification => {
            let distinct: std::collections::BTreeSet<i64> = dataset
                .records
                .iter()
                .filter_map(|r| r.get_int("problem_label"))
                .collect();
            out.insert("distinct_labels".into(), Value::from(distinct.len()));
        }
    }
    Value::Object(out)
}

#[cfg(test)]
pub(crate) fn record_from_json(json: Value) -> Record {
    match json {
        Value::Object(fields) => Record { fields },
        _ => panic!("record fixtures must be JSON objects"),
    }
}
