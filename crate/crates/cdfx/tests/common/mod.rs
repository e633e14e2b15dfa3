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

#![allow(dead_code)]

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use cdfx::RunConfig;
use cdfx_core::rng::Stream;

pub fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data")
}

pub fn write_csv(path: &Path, names: &[String], rows: &[Vec<f64>], labels: &[&str]) {
    let mut s = names.join(",");
    s.push_str(",label\n");
    for (r, l) in rows.iter().zip(labels) {
        for v in r {
            write!(s, "{v},").unwrap();
        }
        s.push_str(l);
        s.push('\n');
    }
    std::fs::write(path, s).unwrap();
}

/// `n_features` uniform columns in [-1, 1]; the label is the sign parity of
/// columns 0 and 1.
pub fn parity_dataset(path: &Path, n_features: usize, n_samples: usize, seed: u64) -> (Vec<Vec<f64>>, Vec<u8>) {
    let mut s = Stream::new(seed);
    let names: Vec<String> = (0..n_features).map(|i| format!("x{i}")).collect();
    let mut rows = Vec::new();
    let mut y = Vec::new();
    for _ in 0..n_samples {
        let row: Vec<f64> = (0..n_features).map(|_| 2.0 * s.uniform() - 1.0).collect();
        y.push(u8::from(row[0] * row[1] > 0.0));
        rows.push(row);
    }
    let labels: Vec<&str> = y.iter().map(|&v| if v == 1 { "same" } else { "flip" }).collect();
    write_csv(path, &names, &rows, &labels);
    (rows, y)
}

/// Wide table: a few label-driven columns among noise, shaped like a
/// descriptor matrix.
pub fn wide_dataset(path: &Path, n_features: usize, n_samples: usize, seed: u64) {
    let mut s = Stream::new(seed);
    let names: Vec<String> = (0..n_features).map(|i| format!("d{i}")).collect();
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for i in 0..n_samples {
        let y = (i % 3 == 0) as u8;
        let row: Vec<f64> = (0..n_features)
            .map(|c| {
                let noise = 2.0 * s.uniform() - 1.0;
                if c % 10 == 0 {
                    f64::from(y) + 0.5 * noise
                } else {
                    noise
                }
            })
            .collect();
        rows.push(row);
        labels.push(if y == 1 { "toxic" } else { "clean" });
    }
    write_csv(path, &names, &rows, &labels);
}

pub fn config(dir: &Path, body: &str) -> RunConfig {
    let path = dir.join("config.toml");
    std::fs::write(&path, body).unwrap();
    RunConfig::from_file(&path, None).unwrap()
}

/// Bundled 8-feature example with outputs redirected to `out`.
pub fn synthetic_config(out: &Path, seed: Option<u64>) -> RunConfig {
    let mut cfg = RunConfig::from_file(&data_dir().join("synthetic.toml"), seed).unwrap();
    cfg.output_dir = out.to_path_buf();
    cfg
}

pub fn read_table(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(str::to_string).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(str::to_string).collect())
        .collect();
    (header, rows)
}

pub fn column(header: &[String], rows: &[Vec<String>], name: &str) -> Vec<f64> {
    let c = header
        .iter()
        .position(|h| h == name)
        .unwrap_or_else(|| panic!("no column {name}"));
    rows.iter().map(|r| r[c].parse().unwrap()).collect()
}

/// `|mean_1 - mean_0| / pooled standard deviation`.
pub fn standardized_separation(values: &[f64], labels: &[u8]) -> f64 {
    let mut sums = [0.0; 2];
    let mut counts = [0usize; 2];
    for (&v, &y) in values.iter().zip(labels) {
        sums[y as usize] += v;
        counts[y as usize] += 1;
    }
    let means = [sums[0] / counts[0] as f64, sums[1] / counts[1] as f64];
    let mut ss = 0.0;
    for (&v, &y) in values.iter().zip(labels) {
        ss += (v - means[y as usize]).powi(2);
    }
    let sd = (ss / (values.len() - 2) as f64).sqrt();
    (means[1] - means[0]).abs() / sd
}
