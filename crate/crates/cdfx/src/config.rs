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

//! Run configuration. The TOML file is parsed into [`RawConfig`], whose
//! optional fields are then resolved against defaults and the dataset
//! header into a validated [`RunConfig`].

use std::path::{Path, PathBuf};

use cdfx_core::encode::{EvolutionMode, Profile, Schedule};
use cdfx_core::topology::GaConfig;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io;

/// Largest default qubit count when `quantum.qubits` is not given.
pub const DEFAULT_QUBIT_CAP: usize = 16;
pub const DEFAULT_SHOTS: u64 = 8192;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub seed: Option<u64>,
    pub output_dir: Option<PathBuf>,
    pub dataset: RawDataset,
    #[serde(default)]
    pub quantum: RawQuantum,
    #[serde(default)]
    pub graph: RawGraph,
    #[serde(default)]
    pub mi: RawMi,
    #[serde(default)]
    pub ga: RawGa,
    #[serde(default)]
    pub schedule: RawSchedule,
    #[serde(default)]
    pub extraction: RawExtraction,
    #[serde(default)]
    pub folds: RawFolds,
    #[serde(default)]
    pub cache: RawCache,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawDataset {
    pub path: PathBuf,
    pub label: String,
    pub delimiter: Option<char>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawQuantum {
    pub qubits: Option<usize>,
    pub dynamics: Option<Vec<usize>>,
    pub assignment: Option<AssignmentMethod>,
    pub max_qubits: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawGraph {
    pub kind: Option<GraphKind>,
    pub rows: Option<usize>,
    pub cols: Option<usize>,
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawMi {
    pub bins: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawGa {
    pub population_size: Option<usize>,
    pub n_generations: Option<usize>,
    pub tournament_size: Option<usize>,
    pub crossover_rate: Option<f64>,
    pub mutation_rate: Option<f64>,
    pub elitism_count: Option<usize>,
    pub seed: Option<u64>,
    pub lambda2: Option<f64>,
    pub lambda3: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSchedule {
    pub total_time: Option<f64>,
    pub profile: Option<Profile>,
    pub steps: Option<usize>,
    pub mode: Option<EvolutionMode>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawExtraction {
    pub mode: Option<ExtractionMode>,
    pub shots: Option<u64>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawFolds {
    pub splits: Option<usize>,
    pub repeats: Option<usize>,
    pub seed: Option<u64>,
    /// `[repeat, split]` whose test rows are withheld from fitting.
    pub holdout: Option<[usize; 2]>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawCache {
    pub mi: Option<PathBuf>,
    pub assign: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AssignmentMethod {
    #[default]
    Ga,
    Identity,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphKind {
    #[default]
    Ring,
    HeavyHex,
    File,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtractionMode {
    #[default]
    Exact,
    Shots,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GraphSource {
    Ring,
    HeavyHex { rows: usize, cols: usize },
    File { path: PathBuf },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Extraction {
    pub mode: ExtractionMode,
    pub shots: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Folds {
    pub splits: usize,
    pub repeats: usize,
    pub seed: u64,
    pub holdout: Option<[usize; 2]>,
}

/// Fully resolved configuration. Paths are absolute or relative to the
/// working directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub seed: u64,
    pub output_dir: PathBuf,
    pub dataset: PathBuf,
    pub label: String,
    pub delimiter: u8,
    pub qubits: usize,
    pub max_qubits: usize,
    pub dynamics: Vec<usize>,
    pub assignment: AssignmentMethod,
    pub graph: GraphSource,
    pub bins: Option<usize>,
    pub ga: GaConfig,
    pub schedule: Schedule,
    pub mode: EvolutionMode,
    pub extraction: Extraction,
    pub folds: Folds,
    pub cache_mi: Option<PathBuf>,
    pub cache_assign: Option<PathBuf>,
}

impl RunConfig {
    /// Reads, resolves and validates a TOML file. Relative paths are taken
    /// from the file's directory.
    pub fn from_file(path: &Path, seed_override: Option<u64>) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::from_toml(&text, base, seed_override)
    }

    pub fn from_toml(text: &str, base: &Path, seed_override: Option<u64>) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        raw.resolve(base, seed_override)
    }

    pub fn graph_qubits(&self) -> Result<usize> {
        Ok(match &self.graph {
            GraphSource::Ring => self.qubits,
            GraphSource::HeavyHex { rows, cols } => cdfx_core::topology::heavy_hex_patch(*rows, *cols)?.n_qubits(),
            GraphSource::File { path } => io::read_graph(path)?.n_qubits(),
        })
    }
}

impl RawConfig {
    /// Fills defaults and checks the combination. A seed override replaces
    /// the global seed and every stage seed derived from it.
    pub fn resolve(self, base: &Path, seed_override: Option<u64>) -> Result<RunConfig> {
        let bad = |msg: String| Err(Error::Config(msg));
        let seed = seed_override.or(self.seed).unwrap_or(0);
        let stage_seed = |own: Option<u64>| {
            if seed_override.is_some() {
                seed
            } else {
                own.unwrap_or(seed)
            }
        };

        let dataset = io::resolve(base, &self.dataset.path);
        if !dataset.is_file() {
            return bad(format!("dataset `{}` does not exist", dataset.display()));
        }
        if self.dataset.label.is_empty() {
            return bad("dataset.label must name the label column".into());
        }
        let delimiter = self.dataset.delimiter.unwrap_or(',');
        if !delimiter.is_ascii() {
            return bad(format!("delimiter `{delimiter}` must be a single ASCII character"));
        }
        let delimiter = delimiter as u8;
        let header = io::csv_header(&dataset, delimiter)?;
        if !header.contains(&self.dataset.label) {
            return bad(format!("label column `{}` not found in dataset", self.dataset.label));
        }
        let n_features = header.len() - 1;

        let qubits = self.quantum.qubits.unwrap_or(n_features.min(DEFAULT_QUBIT_CAP));
        if qubits < 3 {
            return bad(format!("quantum.qubits must be at least 3, got {qubits}"));
        }
        if qubits > n_features {
            return bad(format!(
                "quantum.qubits = {qubits} exceeds the {n_features} dataset features"
            ));
        }
        let dynamics = self.quantum.dynamics.unwrap_or_else(|| vec![2]);
        if dynamics.is_empty() {
            return bad("quantum.dynamics must list at least one interaction order".into());
        }
        for (i, &k) in dynamics.iter().enumerate() {
            if !(2..=3).contains(&k) {
                return bad(format!("quantum.dynamics entries must be 2 or 3, got {k}"));
            }
            if dynamics[..i].contains(&k) {
                return bad(format!("quantum.dynamics lists {k} twice"));
            }
        }

        let graph = match self.graph.kind.unwrap_or_default() {
            GraphKind::Ring => GraphSource::Ring,
            GraphKind::HeavyHex => match (self.graph.rows, self.graph.cols) {
                (Some(rows), Some(cols)) => GraphSource::HeavyHex { rows, cols },
                _ => return bad("graph.kind = \"heavy_hex\" needs graph.rows and graph.cols".into()),
            },
            GraphKind::File => match &self.graph.path {
                Some(p) => {
                    let p = io::resolve(base, p);
                    if !p.is_file() {
                        return bad(format!("graph file `{}` does not exist", p.display()));
                    }
                    GraphSource::File { path: p }
                }
                None => return bad("graph.kind = \"file\" needs graph.path".into()),
            },
        };

        let d = GaConfig::default();
        let g = self.ga;
        let ga = GaConfig {
            population_size: g.population_size.unwrap_or(d.population_size),
            n_generations: g.n_generations.unwrap_or(d.n_generations),
            tournament_size: g.tournament_size.unwrap_or(d.tournament_size),
            crossover_rate: g.crossover_rate.unwrap_or(d.crossover_rate),
            mutation_rate: g.mutation_rate.unwrap_or(d.mutation_rate),
            elitism_count: g.elitism_count.unwrap_or(d.elitism_count),
            seed: stage_seed(g.seed),
            lambda2: g.lambda2.unwrap_or(d.lambda2),
            lambda3: g.lambda3.unwrap_or(d.lambda3),
        };
        ga.validate().map_err(|e| Error::Config(format!("ga: {e}")))?;

        let sd = Schedule::default();
        let schedule = Schedule::new(
            self.schedule.total_time.unwrap_or(sd.total_time),
            self.schedule.profile.unwrap_or(sd.profile),
            self.schedule.steps.unwrap_or(sd.n_steps),
        )
        .map_err(|e| Error::Config(format!("schedule: {e}")))?;

        let extraction = Extraction {
            mode: self.extraction.mode.unwrap_or_default(),
            shots: self.extraction.shots.unwrap_or(DEFAULT_SHOTS),
            seed: stage_seed(self.extraction.seed),
        };
        if extraction.shots == 0 {
            return bad("extraction.shots must be positive".into());
        }

        let folds = Folds {
            splits: self.folds.splits.unwrap_or(5),
            repeats: self.folds.repeats.unwrap_or(5),
            seed: stage_seed(self.folds.seed),
            holdout: self.folds.holdout,
        };
        if folds.splits < 2 || folds.repeats == 0 {
            return bad("folds.splits must be at least 2 and folds.repeats positive".into());
        }
        if let Some([r, s]) = folds.holdout {
            if r >= folds.repeats || s >= folds.splits {
                return bad(format!("folds.holdout [{r}, {s}] is out of range"));
            }
        }

        let cached = |p: &Option<PathBuf>, what: &str| -> Result<Option<PathBuf>> {
            match p {
                None => Ok(None),
                Some(p) => {
                    let p = io::resolve(base, p);
                    if !p.is_file() {
                        return Err(Error::Config(format!("cached {what} `{}` does not exist", p.display())));
                    }
                    Ok(Some(p))
                }
            }
        };
        let cache_mi = cached(&self.cache.mi, "MI matrix")?;
        let cache_assign = cached(&self.cache.assign, "assignment")?;

        let cfg = RunConfig {
            seed,
            output_dir: io::resolve(base, &self.output_dir.unwrap_or_else(|| PathBuf::from("out"))),
            dataset,
            label: self.dataset.label,
            delimiter,
            qubits,
            max_qubits: self
                .quantum
                .max_qubits
                .unwrap_or(cdfx_core::simulate::DEFAULT_MAX_QUBITS),
            dynamics,
            assignment: self.quantum.assignment.unwrap_or_default(),
            graph,
            bins: self.mi.bins,
            ga,
            schedule,
            mode: self.schedule.mode.unwrap_or_default(),
            extraction,
            folds,
            cache_mi,
            cache_assign,
        };
        let available = cfg.graph_qubits()?;
        if qubits > available {
            return bad(format!(
                "quantum.qubits = {qubits} exceeds the {available} qubits of the graph"
            ));
        }
        Ok(cfg)
    }
}
