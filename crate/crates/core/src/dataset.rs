// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Tabular input, train-only min-max scaling and stratified repeated folds.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::rng::Stream;
use crate::{Error, Result};

/// Samples-by-features matrix with binary labels.
///
/// Values are stored row-major. Construction rejects NaN/Inf, ragged rows,
/// duplicate column names and labels outside `{0, 1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    names: Vec<String>,
    values: Vec<f64>,
    labels: Vec<u8>,
    n_samples: usize,
    n_features: usize,
}

impl Dataset {
    pub fn new(names: Vec<String>, rows: Vec<Vec<f64>>, labels: Vec<u8>) -> Result<Self> {
        let n_features = names.len();
        let n_samples = rows.len();
        if n_features == 0 {
            return Err(Error::Dataset("no feature columns".into()));
        }
        let mut seen = BTreeSet::new();
        for name in &names {
            if !seen.insert(name.as_str()) {
                return Err(Error::Dataset(format!("duplicate column name `{name}`")));
            }
        }
        if labels.len() != n_samples {
            return Err(Error::LengthMismatch {
                expected: n_samples,
                got: labels.len(),
            });
        }
        if let Some(bad) = labels.iter().find(|&&l| l > 1) {
            return Err(Error::Dataset(format!("label {bad} is not binary")));
        }
        let mut values = Vec::with_capacity(n_samples * n_features);
        for (r, row) in rows.into_iter().enumerate() {
            if row.len() != n_features {
                return Err(Error::LengthMismatch {
                    expected: n_features,
                    got: row.len(),
                });
            }
            for (c, v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::NonFinite {
                        row: r,
                        column: names[c].clone(),
                    });
                }
            }
            values.extend(row);
        }
        Ok(Self {
            names,
            values,
            labels,
            n_samples,
            n_features,
        })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.values[r * self.n_features..(r + 1) * self.n_features]
    }

    pub fn value(&self, r: usize, c: usize) -> f64 {
        self.values[r * self.n_features + c]
    }

    /// Column `c` restricted to `rows`, in the order given.
    pub fn column(&self, c: usize, rows: &[usize]) -> Vec<f64> {
        rows.iter().map(|&r| self.value(r, c)).collect()
    }

    pub fn labels_at(&self, rows: &[usize]) -> Vec<u8> {
        rows.iter().map(|&r| self.labels[r]).collect()
    }

    pub fn all_rows(&self) -> Vec<usize> {
        (0..self.n_samples).collect()
    }

    /// New dataset keeping only `columns`, in the given order.
    pub fn select_columns(&self, columns: &[usize]) -> Result<Self> {
        if let Some(&c) = columns.iter().find(|&&c| c >= self.n_features) {
            return Err(Error::InvalidArgument(format!("column {c} out of range")));
        }
        let names = columns.iter().map(|&c| self.names[c].clone()).collect();
        let rows = (0..self.n_samples)
            .map(|r| columns.iter().map(|&c| self.value(r, c)).collect())
            .collect();
        Self::new(names, rows, self.labels.clone())
    }
}

/// Per-column `(min, max)` fitted on a training partition, mapping values
/// into `[-1, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scaling {
    pub ranges: Vec<(f64, f64)>,
}

pub fn fit_scaler(ds: &Dataset, rows: &[usize]) -> Result<Scaling> {
    if rows.is_empty() {
        return Err(Error::EmptyRows);
    }
    let ranges = (0..ds.n_features())
        .map(|c| {
            rows.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &r| {
                let v = ds.value(r, c);
                (lo.min(v), hi.max(v))
            })
        })
        .collect();
    Ok(Scaling { ranges })
}

impl Scaling {
    pub fn len(&self) -> usize {
        self.ranges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranges.is_empty()
    }

    pub fn is_constant(&self, c: usize) -> bool {
        let (lo, hi) = self.ranges[c];
        hi <= lo
    }

    /// `2 (v - min) / (max - min) - 1`, clipped to `[-1, 1]`; constant
    /// columns map to 0.
    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.ranges.len() {
            return Err(Error::LengthMismatch {
                expected: self.ranges.len(),
                got: x.len(),
            });
        }
        Ok(x.iter()
            .zip(&self.ranges)
            .map(|(&v, &(lo, hi))| {
                if hi <= lo {
                    0.0
                } else {
                    (2.0 * (v - lo) / (hi - lo) - 1.0).clamp(-1.0, 1.0)
                }
            })
            .collect())
    }

    /// Inverse of [`apply`](Self::apply) for unclipped values. Constant
    /// columns return their single observed value.
    pub fn invert(&self, scaled: &[f64]) -> Result<Vec<f64>> {
        if scaled.len() != self.ranges.len() {
            return Err(Error::LengthMismatch {
                expected: self.ranges.len(),
                got: scaled.len(),
            });
        }
        Ok(scaled
            .iter()
            .zip(&self.ranges)
            .map(
                |(&s, &(lo, hi))| {
                    if hi <= lo {
                        lo
                    } else {
                        lo + (s + 1.0) * (hi - lo) / 2.0
                    }
                },
            )
            .collect())
    }
}

/// Repeated stratified k-fold plan. `assignments[repeat][split]` holds the
/// sorted test indices of that split; training rows are the complement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldPlan {
    pub n_splits: usize,
    pub n_repeats: usize,
    pub seed: u64,
    pub n_samples: usize,
    pub assignments: Vec<Vec<Vec<usize>>>,
}

impl FoldPlan {
    pub fn test_rows(&self, repeat: usize, split: usize) -> &[usize] {
        &self.assignments[repeat][split]
    }

    pub fn train_rows(&self, repeat: usize, split: usize) -> Vec<usize> {
        let test = self.test_rows(repeat, split);
        (0..self.n_samples).filter(|i| test.binary_search(i).is_err()).collect()
    }
}

pub fn make_folds(ds: &Dataset, n_splits: usize, n_repeats: usize, seed: u64) -> Result<FoldPlan> {
    make_folds_from_labels(ds.labels(), n_splits, n_repeats, seed)
}

/// Classes are shuffled independently and dealt round-robin; the dealing
/// offset carries over from one class to the next so split sizes differ by
/// at most one.
pub fn make_folds_from_labels(labels: &[u8], n_splits: usize, n_repeats: usize, seed: u64) -> Result<FoldPlan> {
    if n_splits < 2 {
        return Err(Error::InvalidArgument("n_splits must be at least 2".into()));
    }
    if n_repeats < 1 {
        return Err(Error::InvalidArgument("n_repeats must be at least 1".into()));
    }
    let mut classes: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
    for (i, &l) in labels.iter().enumerate() {
        classes[usize::from(l)].push(i);
    }
    for (class, members) in classes.iter().enumerate() {
        if members.len() < n_splits {
            return Err(Error::ClassTooSmall {
                class: class as u8,
                count: members.len(),
                splits: n_splits,
            });
        }
    }

    let mut stream = Stream::new(seed);
    let mut assignments = Vec::with_capacity(n_repeats);
    for _ in 0..n_repeats {
        let mut splits = alloc::vec![Vec::new(); n_splits];
        let mut cursor = 0;
        for members in &classes {
            let mut order = members.clone();
            stream.shuffle(&mut order);
            for idx in order {
                splits[cursor % n_splits].push(idx);
                cursor += 1;
            }
        }
        for split in &mut splits {
            split.sort_unstable();
        }
        assignments.push(splits);
    }
    Ok(FoldPlan {
        n_splits,
        n_repeats,
        seed,
        n_samples: labels.len(),
        assignments,
    })
}
