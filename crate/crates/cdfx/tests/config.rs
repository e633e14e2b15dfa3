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

mod common;

use cdfx::config::{AssignmentMethod, ExtractionMode, GraphSource, RunConfig, DEFAULT_SHOTS};
use cdfx_core::encode::{EvolutionMode, Profile};

fn with_data(n_features: usize) -> tempfile::TempDir {
    let tmp = tempfile::tempdir().unwrap();
    common::wide_dataset(&tmp.path().join("d.csv"), n_features, 30, 1);
    tmp
}

fn parse(dir: &std::path::Path, body: &str) -> cdfx::Result<RunConfig> {
    RunConfig::from_toml(body, dir, None)
}

const MINIMAL: &str = "[dataset]\npath = \"d.csv\"\nlabel = \"label\"\n";

#[test]
fn minimal_config_takes_defaults() {
    let tmp = with_data(8);
    let cfg = parse(tmp.path(), MINIMAL).unwrap();
    assert_eq!(cfg.dynamics, [2]);
    assert_eq!(cfg.graph, GraphSource::Ring);
    assert_eq!(cfg.mode, EvolutionMode::Impulse);
    assert_eq!(cfg.extraction.mode, ExtractionMode::Exact);
    assert_eq!(cfg.extraction.shots, DEFAULT_SHOTS);
    assert_eq!(cfg.assignment, AssignmentMethod::Ga);
    assert_eq!(cfg.qubits, 8);
    assert_eq!(cfg.schedule.profile, Profile::Sin2);
    assert_eq!(cfg.ga.population_size, 200);
    assert_eq!(cfg.dataset, tmp.path().join("d.csv"));
    assert_eq!(cfg.folds.holdout, None);
}

#[test]
fn wide_data_defaults_to_the_qubit_cap() {
    let tmp = with_data(40);
    assert_eq!(
        parse(tmp.path(), MINIMAL).unwrap().qubits,
        cdfx::config::DEFAULT_QUBIT_CAP
    );
}

#[test]
fn order_four_is_rejected_by_name() {
    let tmp = with_data(8);
    let err = parse(tmp.path(), &format!("{MINIMAL}[quantum]\ndynamics = [4]\n"))
        .unwrap_err()
        .to_string();
    assert!(err.contains("quantum.dynamics") && err.contains('4'), "{err}");
}

#[test]
fn unknown_keys_are_named() {
    let tmp = with_data(8);
    let err = parse(tmp.path(), &format!("{MINIMAL}[quantum]\nqbits = 4\n"))
        .unwrap_err()
        .to_string();
    assert!(err.contains("qbits"), "{err}");
    let err = parse(tmp.path(), &format!("colour = 1\n{MINIMAL}"))
        .unwrap_err()
        .to_string();
    assert!(err.contains("colour"), "{err}");
}

#[test]
fn ring_of_156_is_valid() {
    let tmp = with_data(156);
    let cfg = parse(
        tmp.path(),
        &format!("{MINIMAL}[quantum]\nqubits = 156\n[graph]\nkind = \"ring\"\n"),
    )
    .unwrap();
    assert_eq!(cfg.qubits, 156);
    assert_eq!(cfg.graph_qubits().unwrap(), 156);
}

#[test]
fn device_file_graph_is_valid() {
    let tmp = with_data(156);
    let device = common::data_dir().join("heron_r2_156.json");
    let body = format!(
        "{MINIMAL}[quantum]\nqubits = 156\n[graph]\nkind = \"file\"\npath = \"{}\"\n",
        device.display()
    );
    assert_eq!(parse(tmp.path(), &body).unwrap().graph_qubits().unwrap(), 156);
}

#[test]
fn constraint_violations() {
    let tmp = with_data(8);
    let bad = |extra: &str, needle: &str| {
        let err = parse(tmp.path(), &format!("{MINIMAL}{extra}")).unwrap_err().to_string();
        assert!(err.contains(needle), "{extra}: {err}");
    };
    bad("[quantum]\nqubits = 9\n", "exceeds");
    bad("[quantum]\nqubits = 2\n", "at least 3");
    bad("[quantum]\ndynamics = [2, 2]\n", "twice");
    bad("[quantum]\ndynamics = []\n", "at least one");
    bad("[graph]\nkind = \"heavy_hex\"\n", "graph.rows");
    std::fs::write(
        tmp.path().join("small.json"),
        r#"{"n_qubits": 4, "edges": [[0, 1], [1, 2], [2, 3]]}"#,
    )
    .unwrap();
    bad(
        "[graph]\nkind = \"file\"\npath = \"small.json\"\n",
        "4 qubits of the graph",
    );
    bad("[graph]\nkind = \"file\"\npath = \"missing.json\"\n", "does not exist");
    bad("[ga]\nmutation_rate = 1.5\n", "mutation_rate");
    bad("[schedule]\ntotal_time = 0.0\n", "schedule");
    bad("[folds]\nholdout = [5, 0]\n", "holdout");
    bad("[cache]\nmi = \"nope.json\"\n", "does not exist");
    bad("[extraction]\nshots = 0\n", "shots");
    let err = parse(tmp.path(), "[dataset]\npath = \"x.csv\"\nlabel = \"label\"\n").unwrap_err();
    assert!(err.to_string().contains("does not exist"));
    let err = parse(tmp.path(), "[dataset]\npath = \"d.csv\"\nlabel = \"target\"\n").unwrap_err();
    assert!(err.to_string().contains("target"));
}

#[test]
fn heavy_hex_patch_larger_than_budget_is_valid() {
    let tmp = with_data(8);
    let cfg = parse(
        tmp.path(),
        &format!("{MINIMAL}[graph]\nkind = \"heavy_hex\"\nrows = 1\ncols = 1\n"),
    )
    .unwrap();
    assert_eq!(cfg.graph, GraphSource::HeavyHex { rows: 1, cols: 1 });
    assert_eq!(cfg.graph_qubits().unwrap(), 12);
}

#[test]
fn seed_override_reaches_every_stage() {
    let tmp = with_data(8);
    let body = format!("seed = 3\n{MINIMAL}[ga]\nseed = 11\n[extraction]\nseed = 12\n");
    let cfg = parse(tmp.path(), &body).unwrap();
    assert_eq!(
        (cfg.seed, cfg.ga.seed, cfg.extraction.seed, cfg.folds.seed),
        (3, 11, 12, 3)
    );
    let cfg = RunConfig::from_toml(&body, tmp.path(), Some(40)).unwrap();
    assert_eq!(
        (cfg.seed, cfg.ga.seed, cfg.extraction.seed, cfg.folds.seed),
        (40, 40, 40, 40)
    );
}

#[test]
fn bundled_example_parses() {
    let cfg = RunConfig::from_file(&common::data_dir().join("synthetic.toml"), None).unwrap();
    assert_eq!(cfg.dynamics, [2, 3]);
    assert_eq!(cfg.qubits, 8);
}
