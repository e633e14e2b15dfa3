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

//! File formats: CSV datasets and feature tables, JSON artifacts and the
//! binary statevector dump.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use cdfx_core::dataset::{Dataset, FoldPlan};
use cdfx_core::extract::FeatureRecord;
use cdfx_core::infometrics::MIMatrix;
use cdfx_core::simulate::{Complex64, Statevector};
use cdfx_core::topology::{Assignment, GaResult, HardwareGraph};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A dataset together with the original label strings; `labels[k]` is the
/// string mapped to class `k`.
#[derive(Debug, Clone)]
pub struct LoadedTable {
    pub dataset: Dataset,
    pub labels: [String; 2],
}

/// Reads a delimiter-separated file with a header row.
///
/// Every column except `label_column` must be numeric. The label column
/// must hold exactly two distinct values, mapped to 0 and 1 in sorted
/// string order.
pub fn load_csv(path: &Path, label_column: &str, delimiter: u8) -> Result<LoadedTable> {
    let table_err = |message: String| Error::Table {
        path: path.to_path_buf(),
        message,
    };
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .has_headers(true)
        .from_reader(file);
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let header: Vec<String> = reader
        .headers()
        .map_err(csv_err)?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    let mut seen = BTreeSet::new();
    for h in &header {
        if !seen.insert(h.as_str()) {
            return Err(table_err(format!("duplicate column name `{h}`")));
        }
    }
    let label_idx = header
        .iter()
        .position(|h| h == label_column)
        .ok_or_else(|| table_err(format!("label column `{label_column}` not found")))?;
    let names: Vec<String> = header
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != label_idx)
        .map(|(_, h)| h.clone())
        .collect();

    let mut rows = Vec::new();
    let mut raw_labels = Vec::new();
    for (r, record) in reader.records().enumerate() {
        let record = record.map_err(csv_err)?;
        let mut row = Vec::with_capacity(names.len());
        for (c, cell) in record.iter().enumerate() {
            let cell = cell.trim();
            if c == label_idx {
                raw_labels.push(cell.to_string());
                continue;
            }
            let v: f64 = cell.parse().map_err(|_| Error::NonNumeric {
                path: path.to_path_buf(),
                row: r,
                column: header[c].clone(),
                value: cell.to_string(),
            })?;
            row.push(v);
        }
        rows.push(row);
    }
    let distinct: BTreeSet<&str> = raw_labels.iter().map(String::as_str).collect();
    if distinct.len() != 2 {
        return Err(table_err(format!(
            "label column `{label_column}` must hold exactly two distinct values, found {}",
            distinct.len()
        )));
    }
    let mut it = distinct.into_iter();
    let labels = [it.next().unwrap().to_string(), it.next().unwrap().to_string()];
    let y = raw_labels.iter().map(|l| u8::from(*l == labels[1])).collect();
    let dataset = Dataset::new(names, rows, y).map_err(|e| match e {
        cdfx_core::Error::NonFinite { row, column } => {
            table_err(format!("non-finite value at row {row}, column `{column}`"))
        }
        other => Error::Core(other),
    })?;
    Ok(LoadedTable { dataset, labels })
}

/// Column names of a delimiter-separated file, without reading the body.
pub fn csv_header(path: &Path, delimiter: u8) -> Result<Vec<String>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new().delimiter(delimiter).from_reader(file);
    Ok(reader
        .headers()
        .map_err(|source| Error::Csv {
            path: path.to_path_buf(),
            source,
        })?
        .iter()
        .map(|h| h.trim().to_string())
        .collect())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, value).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })?;
    w.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let mut text = String::new();
    File::open(path)
        .and_then(|mut f| f.read_to_string(&mut text))
        .map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })
}

/// `{"n_qubits": N, "edges": [[i, j], ...]}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub n_qubits: usize,
    pub edges: Vec<[usize; 2]>,
}

impl GraphFile {
    pub fn from_graph(g: &HardwareGraph) -> Self {
        Self {
            n_qubits: g.n_qubits(),
            edges: g.edges().iter().map(|&(a, b)| [a, b]).collect(),
        }
    }

    pub fn to_graph(&self) -> Result<HardwareGraph> {
        let edges: Vec<(usize, usize)> = self.edges.iter().map(|e| (e[0], e[1])).collect();
        Ok(HardwareGraph::new(self.n_qubits, &edges)?)
    }
}

pub fn read_graph(path: &Path) -> Result<HardwareGraph> {
    read_json::<GraphFile>(path)?.to_graph()
}

/// Full NMI matrix as nested rows, with the feature names it covers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MiFile {
    pub features: Vec<String>,
    pub bins: usize,
    pub values: Vec<Vec<f64>>,
}

impl MiFile {
    pub fn new(features: Vec<String>, m: &MIMatrix) -> Self {
        Self {
            features,
            bins: m.bins,
            values: m.values.chunks(m.n).map(<[f64]>::to_vec).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<MIMatrix> {
        let n = self.values.len();
        if self.features.len() != n {
            return Err(Error::Config(format!(
                "MI file names {} features but holds {n} rows",
                self.features.len()
            )));
        }
        Ok(MIMatrix::from_values(n, self.bins, self.values.concat())?)
    }
}

/// Permutation (`permutation[q]` is the feature on qubit `q`), its fitness
/// and the best-so-far history.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssignFile {
    pub permutation: Vec<usize>,
    pub fitness: f64,
    pub history: Vec<f64>,
    #[serde(default)]
    pub features: Vec<String>,
}

impl AssignFile {
    pub fn from_result(res: &GaResult, features: Vec<String>) -> Self {
        Self {
            permutation: res.assignment.map.clone(),
            fitness: res.fitness,
            history: res.history.clone(),
            features,
        }
    }

    pub fn assignment(&self) -> Result<Assignment> {
        Ok(Assignment::new(self.permutation.clone())?)
    }
}

pub fn write_fold_plan(path: &Path, plan: &FoldPlan) -> Result<()> {
    write_json(path, plan)
}

/// Writes `sample_id`, the record columns and optional trailing label.
pub fn write_feature_table(path: &Path, records: &[FeatureRecord], labels: Option<&[u8]>) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = csv::Writer::from_writer(BufWriter::new(file));
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut header = vec!["sample_id".to_string()];
    if let Some(first) = records.first() {
        header.extend(first.entries.iter().map(|e| e.name.clone()));
    }
    if labels.is_some() {
        header.push("label".into());
    }
    w.write_record(&header).map_err(csv_err)?;
    for rec in records {
        let mut row = vec![rec.sample_id.to_string()];
        row.extend(rec.entries.iter().map(|e| e.value.to_string()));
        if let Some(labels) = labels {
            row.push(labels[rec.sample_id].to_string());
        }
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Binary dump: little-endian `u64` qubit count, then `2^n` pairs of
/// little-endian `f64` (real, imaginary).
pub fn write_statevector(path: &Path, state: &Statevector) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    let mut put = |bytes: &[u8]| w.write_all(bytes).map_err(|e| Error::io(path, e));
    put(&(state.n_qubits() as u64).to_le_bytes())?;
    for a in state.amplitudes() {
        put(&a.re.to_le_bytes())?;
        put(&a.im.to_le_bytes())?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_statevector(path: &Path) -> Result<Statevector> {
    let mut bytes = Vec::new();
    File::open(path)
        .and_then(|mut f| f.read_to_end(&mut bytes))
        .map_err(|e| Error::io(path, e))?;
    let bad = |message: &str| Error::Table {
        path: path.to_path_buf(),
        message: message.into(),
    };
    if bytes.len() < 8 {
        return Err(bad("truncated statevector header"));
    }
    let n = u64::from_le_bytes(bytes[..8].try_into().unwrap()) as usize;
    if n == 0 || n > 40 || bytes.len() != 8 + 16 * (1usize << n) {
        return Err(bad("statevector size does not match its header"));
    }
    Ok(Statevector::from_amplitudes(parse_amplitudes(&bytes[8..]))?)
}

fn parse_amplitudes(body: &[u8]) -> Vec<Complex64> {
    body.chunks_exact(16)
        .map(|c| {
            Complex64::new(
                f64::from_le_bytes(c[..8].try_into().unwrap()),
                f64::from_le_bytes(c[8..].try_into().unwrap()),
            )
        })
        .collect()
}

/// Resolves `p` against `base` unless it is absolute.
pub fn resolve(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}
