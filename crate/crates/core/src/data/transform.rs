//! Deterministic dataset transforms: split, shuffle, sort.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::rng::SplitMix64;

use super::{DataError, Dataset};

/// Train/valid/test fractions plus the seed that drives the assignment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub partition: (f64, f64, f64),
    pub seed: u64,
}

impl SplitSpec {
    pub fn new(train: f64, valid: f64, test: f64, seed: u64) -> Self {
        Self {
            partition: (train, valid, test),
            seed,
        }
    }

    fn validate(&self) -> Result<(), DataError> {
        let (a, b, c) = self.partition;
        for f in [a, b, c] {
            if !(0.0..=1.0).contains(&f) || f.is_nan() {
                return Err(DataError::InvalidPartition(format!(
                    "fraction {f} outside [0, 1]"
                )));
            }
        }
        if a + b + c > 1.0 + 1e-9 {
            return Err(DataError::InvalidPartition(format!(
                "fractions sum to {} > 1",
                a + b + c
            )));
        }
        Ok(())
    }
}

/// Partition a dataset into train/valid/test.
///
/// Train and valid take `floor(N * fraction)` records. When the fractions sum
/// to 1 the test split absorbs the remainder (so the three splits reassemble
/// the dataset); otherwise test also takes its floor and leftover records are
/// dropped. Record assignment is a seeded permutation, but each split keeps
/// the records in their original relative order.
pub fn split(ds: &Dataset, spec: &SplitSpec) -> Result<(Dataset, Dataset, Dataset), DataError> {
    spec.validate()?;
    let n = ds.records.len();
    let (f_train, f_valid, f_test) = spec.partition;

    let n_train = (n as f64 * f_train).floor() as usize;
    let n_valid = (n as f64 * f_valid).floor() as usize;
    let n_test = if f_train + f_valid + f_test >= 1.0 - 1e-9 {
        n - n_train - n_valid
    } else {
        (n as f64 * f_test).floor() as usize
    };

    let mut indices: Vec<usize> = (0..n).collect();
    SplitMix64::new(spec.seed).shuffle(&mut indices);

    let take = |range: std::ops::Range<usize>, tag: &str| {
        let mut chosen: Vec<usize> = indices[range].to_vec();
        chosen.sort_unstable();
        Dataset::new(
            ds.schema,
            chosen.iter().map(|&i| ds.records[i].clone()).collect(),
            format!("{}#{tag}", ds.provenance),
        )
    };

    Ok((
        take(0..n_train, "train"),
        take(n_train..n_train + n_valid, "valid"),
        take(n_train + n_valid..n_train + n_valid + n_test, "test"),
    ))
}

/// Seeded Fisher-Yates permutation of the records.
pub fn shuffle(ds: &Dataset, seed: u64) -> Dataset {
    let mut records = ds.records.clone();
    SplitMix64::new(seed).shuffle(&mut records);
    Dataset::new(ds.schema, records, format!("{}#shuffled", ds.provenance))
}

/// Stable sort by one field. Every record must carry the field.
pub fn sort(ds: &Dataset, key: &str, ascending: bool) -> Result<Dataset, DataError> {
    if ds.records.iter().any(|r| r.get(key).is_none()) {
        return Err(DataError::MissingField(key.to_string()));
    }
    let mut records = ds.records.clone();
    records.sort_by(|a, b| {
        let ord = compare_values(a.get(key).unwrap(), b.get(key).unwrap());
        if ascending {
            ord
        } else {
            ord.reverse()
        }
    });
    Ok(Dataset::new(
        ds.schema,
        records,
        format!("{}#sorted", ds.provenance),
    ))
}

fn type_rank(v: &Value) -> u8 {
    match v {
        Value::Null => 0,
        Value::Bool(_) => 1,
        Value::Number(_) => 2,
        Value::String(_) => 3,
        Value::Array(_) => 4,
        Value::Object(_) => 5,
    }
}

fn compare_values(a: &Value, b: &Value) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    match (a, b) {
        (Value::Number(x), Value::Number(y)) => x
            .as_f64()
            .unwrap_or(f64::NAN)
            .partial_cmp(&y.as_f64().unwrap_or(f64::NAN))
            .unwrap_or(Ordering::Equal),
        (Value::String(x), Value::String(y)) => x.cmp(y),
        (Value::Bool(x), Value::Bool(y)) => x.cmp(y),
        _ => type_rank(a).cmp(&type_rank(b)),
    }
}
