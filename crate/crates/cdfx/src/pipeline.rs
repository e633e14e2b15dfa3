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

//! Stage orchestration: ingest, folds, select, scale, MI, embed, then the
//! per-sample encode/simulate/extract fan-out and export.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use cdfx_core::dataset::{fit_scaler, make_folds, Dataset, FoldPlan, Scaling};
use cdfx_core::encode::{encode_hamiltonian, trotter_sequence, ZPolynomial};
use cdfx_core::extract::{
    concat_features, descriptors, feature_map, Dynamics, FeatureRecord, Measured, ObservableSet, SourcePlan,
};
use cdfx_core::infometrics::{default_bins, hyper_coeff, mi_matrix, select_features, HyperCoeffs, MIMatrix};
use cdfx_core::rng::Stream;
use cdfx_core::simulate::{ShotTable, Statevector};
use cdfx_core::topology::{ga_optimize, heavy_hex_patch, Assignment, HardwareGraph};
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::{AssignmentMethod, ExtractionMode, GraphSource, RunConfig};
use crate::error::{Error, Result};
use crate::io::{self, AssignFile, LoadedTable, MiFile};

pub const MI_FILE: &str = "mi.json";
pub const ASSIGN_FILE: &str = "assign.json";
pub const FOLDS_FILE: &str = "foldplan.json";
pub const FEATURES_FILE: &str = "features.csv";
pub const COMBINED_FILE: &str = "combined.csv";
pub const MANIFEST_FILE: &str = "manifest.json";

/// Descriptor tag for interaction order `k`.
pub fn dynamics_tag(k: usize) -> String {
    format!("k{k}")
}

/// Everything fitted before the per-sample stage.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub table: LoadedTable,
    pub folds: FoldPlan,
    pub train_rows: Vec<usize>,
    /// Dataset columns encoded on qubits, ascending.
    pub selected: Vec<usize>,
    pub features: Dataset,
    pub scaler: Scaling,
    pub mi: MIMatrix,
    pub graph: HardwareGraph,
    pub assign: AssignFile,
    pub assignment: Assignment,
    pub coeffs: Vec<HyperCoeffs>,
    pub observables: ObservableSet,
    pub plan: SourcePlan,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StageStatus {
    pub name: String,
    pub status: String,
}

/// Records stage outcomes and tags errors with the failing stage.
#[derive(Debug, Default)]
pub struct Tracker {
    pub stages: Vec<StageStatus>,
}

impl Tracker {
    pub fn stage<T>(&mut self, name: &'static str, f: impl FnOnce() -> Result<T>) -> Result<T> {
        match f() {
            Ok(v) => {
                self.stages.push(StageStatus {
                    name: name.into(),
                    status: "ok".into(),
                });
                Ok(v)
            }
            Err(e) => {
                self.stages.push(StageStatus {
                    name: name.into(),
                    status: "failed".into(),
                });
                Err(Error::Stage {
                    stage: name,
                    source: Box::new(e),
                })
            }
        }
    }

    pub fn failed_stage(&self) -> Option<&str> {
        self.stages
            .iter()
            .find(|s| s.status == "failed")
            .map(|s| s.name.as_str())
    }
}

/// Builds the configured graph, truncated to `cfg.qubits` by a connected
/// breadth-first subgraph when it is larger.
pub fn build_graph(cfg: &RunConfig) -> Result<HardwareGraph> {
    let g = match &cfg.graph {
        GraphSource::Ring => HardwareGraph::ring(cfg.qubits)?,
        GraphSource::HeavyHex { rows, cols } => heavy_hex_patch(*rows, *cols)?,
        GraphSource::File { path } => io::read_graph(path)?,
    };
    if g.n_qubits() > cfg.qubits {
        Ok(g.connected_subgraph(cfg.qubits)?)
    } else if g.n_qubits() < cfg.qubits {
        Err(Error::Config(format!(
            "graph has {} qubits, fewer than the {} requested",
            g.n_qubits(),
            cfg.qubits
        )))
    } else {
        Ok(g)
    }
}

/// Coefficient tables for every mapped edge, plus every mapped triplet when
/// `with_triples`.
pub fn coefficients(
    g: &HardwareGraph,
    assignment: &Assignment,
    m: &MIMatrix,
    with_triples: bool,
) -> Result<Vec<HyperCoeffs>> {
    let mut pairs = HyperCoeffs::new(2);
    for &(a, b) in g.edges() {
        let s = [assignment.feature(a), assignment.feature(b)];
        pairs.insert(&s, hyper_coeff(&s, m)?);
    }
    let mut out = vec![pairs];
    if with_triples {
        let mut triples = HyperCoeffs::new(3);
        for t in g.triplets() {
            let s = [
                assignment.feature(t[0]),
                assignment.feature(t[1]),
                assignment.feature(t[2]),
            ];
            triples.insert(&s, hyper_coeff(&s, m)?);
        }
        out.push(triples);
    }
    Ok(out)
}

/// Runs every stage up to and including the assignment.
pub fn prepare(cfg: &RunConfig, tracker: &mut Tracker) -> Result<Prepared> {
    let table = tracker.stage("ingest", || io::load_csv(&cfg.dataset, &cfg.label, cfg.delimiter))?;
    let ds = &table.dataset;
    let (folds, train_rows) = tracker.stage("folds", || {
        let f = &cfg.folds;
        let plan = make_folds(ds, f.splits, f.repeats, f.seed)?;
        let train = match f.holdout {
            Some([r, s]) => plan.train_rows(r, s),
            None => ds.all_rows(),
        };
        Ok((plan, train))
    })?;
    let bins = cfg.bins.unwrap_or_else(|| default_bins(train_rows.len()));

    let selected = tracker.stage("select", || {
        let mut cols = if ds.n_features() > cfg.qubits {
            select_features(ds, &train_rows, cfg.qubits, bins)?
        } else {
            (0..ds.n_features()).collect()
        };
        cols.sort_unstable();
        Ok(cols)
    })?;
    let features = ds.select_columns(&selected)?;
    let scaler = tracker.stage("scale", || Ok(fit_scaler(&features, &train_rows)?))?;

    let mi = tracker.stage("mi", || match &cfg.cache_mi {
        Some(path) => {
            let file: MiFile = io::read_json(path)?;
            if file.features != features.names() {
                return Err(Error::Config(format!(
                    "cached MI matrix `{}` covers features {:?}, expected {:?}",
                    path.display(),
                    file.features,
                    features.names()
                )));
            }
            file.to_matrix()
        }
        None => Ok(mi_matrix(&features, &train_rows, bins)?),
    })?;

    let graph = tracker.stage("graph", || build_graph(cfg))?;
    let with_triples = cfg.dynamics.contains(&3);
    let assign = tracker.stage("embed", || {
        if let Some(path) = &cfg.cache_assign {
            let file: AssignFile = io::read_json(path)?;
            if file.permutation.len() != cfg.qubits {
                return Err(Error::Config(format!(
                    "cached assignment `{}` has {} entries, expected {}",
                    path.display(),
                    file.permutation.len(),
                    cfg.qubits
                )));
            }
            return Ok(file);
        }
        let names = features.names().to_vec();
        match cfg.assignment {
            AssignmentMethod::Ga => {
                let res = ga_optimize(&graph, &mi, &cfg.ga)?;
                Ok(AssignFile::from_result(&res, names))
            }
            AssignmentMethod::Identity => {
                let a = Assignment::identity(cfg.qubits);
                let f = cdfx_core::topology::fitness(&a.map, &graph, &mi, cfg.ga.weights())?;
                Ok(AssignFile {
                    permutation: a.map,
                    fitness: f,
                    history: vec![f],
                    features: names,
                })
            }
        }
    })?;
    let assignment = assign.assignment()?;
    let coeffs = tracker.stage("coefficients", || coefficients(&graph, &assignment, &mi, with_triples))?;
    let observables = ObservableSet::closed_chain(cfg.qubits)?;
    let plan = SourcePlan::for_dynamics(cfg.dynamics.len());
    Ok(Prepared {
        table,
        folds,
        train_rows,
        selected,
        features,
        scaler,
        mi,
        graph,
        assign,
        assignment,
        coeffs,
        observables,
        plan,
    })
}

impl Prepared {
    /// Scaled encoded features of one sample, indexed by feature.
    pub fn scaled(&self, sample: usize) -> Result<Vec<f64>> {
        Ok(self.scaler.apply(self.features.row(sample))?)
    }

    /// One Z polynomial per configured dynamics.
    pub fn hamiltonians(&self, cfg: &RunConfig, sample: usize) -> Result<Vec<ZPolynomial>> {
        let x = self.scaled(sample)?;
        cfg.dynamics
            .iter()
            .map(|&k| Ok(encode_hamiltonian(&x, &self.graph, &self.coeffs, &self.assignment, k)?))
            .collect()
    }

    /// Final state of the evolution driven by `hz`.
    pub fn evolve(&self, cfg: &RunConfig, hz: &ZPolynomial) -> Result<Statevector> {
        let seq = trotter_sequence(hz, &cfg.schedule, cfg.mode)?;
        let mut state = Statevector::plus_state_with_budget(cfg.qubits, cfg.max_qubits)?;
        state.run_sequence(&seq)?;
        Ok(state)
    }

    /// Shot table for dynamics `d` of `sample`, from a stream derived from
    /// the extraction seed.
    pub fn sample_shots(&self, cfg: &RunConfig, state: &Statevector, sample: usize, d: usize) -> Result<ShotTable> {
        let index = (sample * cfg.dynamics.len() + d) as u64;
        let mut stream = Stream::derived(cfg.extraction.seed, index);
        Ok(state.sample_with(cfg.extraction.shots, &mut stream)?)
    }

    pub fn sample_features(&self, cfg: &RunConfig, sample: usize) -> Result<FeatureRecord> {
        let tags: Vec<String> = cfg.dynamics.iter().map(|&k| dynamics_tag(k)).collect();
        let states = self
            .hamiltonians(cfg, sample)?
            .iter()
            .map(|hz| self.evolve(cfg, hz))
            .collect::<Result<Vec<_>>>()?;
        let record = match cfg.extraction.mode {
            ExtractionMode::Exact => {
                let dyns: Vec<Dynamics<'_>> = tags
                    .iter()
                    .zip(&states)
                    .map(|(t, s)| Dynamics {
                        tag: t,
                        measured: Measured::Exact(s),
                    })
                    .collect();
                feature_map(sample, &dyns, &self.observables, self.plan)?
            }
            ExtractionMode::Shots => {
                let tables = states
                    .iter()
                    .enumerate()
                    .map(|(d, s)| self.sample_shots(cfg, s, sample, d))
                    .collect::<Result<Vec<_>>>()?;
                let dyns: Vec<Dynamics<'_>> = tags
                    .iter()
                    .zip(&tables)
                    .map(|(t, s)| Dynamics {
                        tag: t,
                        measured: Measured::Shots(s),
                    })
                    .collect();
                feature_map(sample, &dyns, &self.observables, self.plan)?
            }
        };
        Ok(record)
    }

    /// Quantum records for every sample, computed in parallel and returned
    /// in sample order.
    pub fn extract_all(&self, cfg: &RunConfig) -> Result<Vec<FeatureRecord>> {
        (0..self.features.n_samples())
            .into_par_iter()
            .map(|s| self.sample_features(cfg, s))
            .collect()
    }

    /// Classical block (raw values of every dataset column) followed by
    /// the quantum record.
    pub fn combine(&self, quantum: &[FeatureRecord]) -> Result<Vec<FeatureRecord>> {
        let ds = &self.table.dataset;
        quantum
            .iter()
            .map(|q| Ok(concat_features(ds.names(), ds.row(q.sample_id), q)?))
            .collect()
    }

    pub fn descriptor_names(&self, cfg: &RunConfig) -> Result<Vec<String>> {
        let tags: Vec<String> = cfg.dynamics.iter().map(|&k| dynamics_tag(k)).collect();
        let tags: Vec<&str> = tags.iter().map(String::as_str).collect();
        Ok(descriptors(&self.observables, &tags, self.plan)?
            .into_iter()
            .map(|(n, _)| n)
            .collect())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DatasetInfo {
    pub path: PathBuf,
    pub n_samples: usize,
    pub n_features: usize,
    pub label_values: [String; 2],
}

#[derive(Debug, Clone, Serialize)]
pub struct DynamicsInfo {
    pub tag: String,
    pub order: usize,
}

/// Sidecar describing a run; written on success and on failure.
#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub status: String,
    pub failed_stage: Option<String>,
    pub error: Option<String>,
    pub stages: Vec<StageStatus>,
    pub config_hash: String,
    pub seed: u64,
    pub config: RunConfig,
    pub dataset: Option<DatasetInfo>,
    /// `all` or `holdout r/s`.
    pub train_rows: String,
    pub n_train: Option<usize>,
    pub selected_features: Vec<String>,
    pub graph: Option<GraphInfo>,
    pub dynamics: Vec<DynamicsInfo>,
    pub plan: SourcePlan,
    pub observables: Vec<String>,
    pub feature_columns: Vec<String>,
    pub outputs: BTreeMap<String, String>,
    /// SHA-256 over the output digests in file-name order.
    pub digest: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GraphInfo {
    pub n_qubits: usize,
    pub n_edges: usize,
    pub n_triplets: usize,
}

pub fn config_hash(cfg: &RunConfig) -> String {
    let bytes = serde_json::to_vec(cfg).expect("config serializes");
    hex::encode(Sha256::digest(bytes))
}

pub fn file_digest(path: &Path) -> Result<String> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(hex::encode(Sha256::digest(bytes)))
}

/// Paths of one run's artifacts.
#[derive(Debug, Clone)]
pub struct Artifacts {
    pub dir: PathBuf,
    pub manifest: Manifest,
}

impl Artifacts {
    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }
}

/// Runs the whole pipeline and writes its artifacts to `cfg.output_dir`.
/// On failure the manifest is still written, flagged `failed`.
pub fn run(cfg: &RunConfig) -> Result<Artifacts> {
    let dir = cfg.output_dir.clone();
    fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    let mut manifest = Manifest {
        status: "running".into(),
        failed_stage: None,
        error: None,
        stages: Vec::new(),
        config_hash: config_hash(cfg),
        seed: cfg.seed,
        config: cfg.clone(),
        dataset: None,
        train_rows: match cfg.folds.holdout {
            Some([r, s]) => format!("holdout {r}/{s}"),
            None => "all".into(),
        },
        n_train: None,
        selected_features: Vec::new(),
        graph: None,
        dynamics: cfg
            .dynamics
            .iter()
            .map(|&k| DynamicsInfo {
                tag: dynamics_tag(k),
                order: k,
            })
            .collect(),
        plan: SourcePlan::for_dynamics(cfg.dynamics.len()),
        observables: Vec::new(),
        feature_columns: Vec::new(),
        outputs: BTreeMap::new(),
        digest: None,
    };
    let mut tracker = Tracker::default();
    let result = run_stages(cfg, &dir, &mut tracker, &mut manifest);
    manifest.stages = tracker.stages;
    match &result {
        Ok(()) => manifest.status = "complete".into(),
        Err(e) => {
            manifest.status = "failed".into();
            manifest.failed_stage = manifest
                .stages
                .iter()
                .find(|s| s.status == "failed")
                .map(|s| s.name.clone());
            manifest.error = Some(error_chain(e));
        }
    }
    io::write_json(&dir.join(MANIFEST_FILE), &manifest)?;
    result.map(|()| Artifacts { dir, manifest })
}

fn run_stages(cfg: &RunConfig, dir: &Path, tracker: &mut Tracker, manifest: &mut Manifest) -> Result<()> {
    let prep = prepare(cfg, tracker)?;
    let ds = &prep.table.dataset;
    manifest.dataset = Some(DatasetInfo {
        path: cfg.dataset.clone(),
        n_samples: ds.n_samples(),
        n_features: ds.n_features(),
        label_values: prep.table.labels.clone(),
    });
    manifest.n_train = Some(prep.train_rows.len());
    manifest.selected_features = prep.features.names().to_vec();
    manifest.graph = Some(GraphInfo {
        n_qubits: prep.graph.n_qubits(),
        n_edges: prep.graph.edges().len(),
        n_triplets: prep.graph.triplets().len(),
    });
    manifest.observables = prep.descriptor_names(cfg)?;

    let mut written = Vec::new();
    tracker.stage("write-intermediate", || {
        io::write_fold_plan(&dir.join(FOLDS_FILE), &prep.folds)?;
        io::write_json(
            &dir.join(MI_FILE),
            &MiFile::new(prep.features.names().to_vec(), &prep.mi),
        )?;
        io::write_json(&dir.join(ASSIGN_FILE), &prep.assign)?;
        written.extend([FOLDS_FILE, MI_FILE, ASSIGN_FILE]);
        Ok(())
    })?;
    let quantum = tracker.stage("simulate", || prep.extract_all(cfg))?;
    let combined = tracker.stage("combine", || prep.combine(&quantum))?;
    tracker.stage("export", || {
        io::write_feature_table(&dir.join(FEATURES_FILE), &quantum, None)?;
        io::write_feature_table(&dir.join(COMBINED_FILE), &combined, Some(ds.labels()))?;
        written.extend([FEATURES_FILE, COMBINED_FILE]);
        Ok(())
    })?;
    manifest.feature_columns = combined
        .first()
        .map(|r| r.names().iter().map(|s| s.to_string()).collect())
        .unwrap_or_default();

    let mut outputs = BTreeMap::new();
    for name in written {
        outputs.insert(name.to_string(), file_digest(&dir.join(name))?);
    }
    let mut h = Sha256::new();
    for (name, digest) in &outputs {
        h.update(name.as_bytes());
        h.update(digest.as_bytes());
    }
    manifest.digest = Some(hex::encode(h.finalize()));
    manifest.outputs = outputs;
    Ok(())
}

fn error_chain(e: &Error) -> String {
    let mut msg = e.to_string();
    let mut src = std::error::Error::source(e);
    while let Some(s) = src {
        let next = s.to_string();
        if !msg.contains(&next) {
            msg.push_str(": ");
            msg.push_str(&next);
        }
        src = s.source();
    }
    msg
}
