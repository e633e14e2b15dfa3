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

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use cdfx::io::{AssignFile, MiFile};
use cdfx::pipeline::{ASSIGN_FILE, FEATURES_FILE, MI_FILE};

fn cdfx(args: &[&str]) -> Output {
    let out = Command::new(env!("CARGO_BIN_EXE_cdfx")).args(args).output().unwrap();
    assert!(
        out.status.success(),
        "cdfx {args:?} failed:\n{}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn run_then_extract_from_cached_artifacts() {
    let tmp = tempfile::tempdir().unwrap();
    let config = common::data_dir().join("synthetic.toml");
    let out = tmp.path().join("run");
    let stdout = String::from_utf8(cdfx(&["run", "-c", p(&config), "--out", p(&out)]).stdout).unwrap();
    assert!(stdout.contains("digest"));
    let features = tmp.path().join("features.csv");
    cdfx(&[
        "extract",
        "-c",
        p(&config),
        "--mi",
        p(&out.join(MI_FILE)),
        "--assign",
        p(&out.join(ASSIGN_FILE)),
        "--out",
        p(&features),
    ]);
    assert_eq!(fs::read(features).unwrap(), fs::read(out.join(FEATURES_FILE)).unwrap());
}

#[test]
fn seed_flag_overrides_config() {
    let config = common::data_dir().join("synthetic.toml");
    let stdout = cdfx(&["validate", "-c", p(&config), "--seed", "21"]).stdout;
    let v: serde_json::Value = serde_json::from_slice(&stdout).unwrap();
    assert_eq!(v["seed"], 21);
    assert_eq!(v["ga"]["seed"], 21);
    assert_eq!(v["extraction"]["seed"], 21);
}

#[test]
fn mi_graph_and_embed_stages() {
    let tmp = tempfile::tempdir().unwrap();
    let data = common::data_dir().join("synthetic_8x200.csv");
    let mi = tmp.path().join("mi.json");
    cdfx(&[
        "mi",
        "--data",
        p(&data),
        "--label",
        "label",
        "--select",
        "6",
        "--out",
        p(&mi),
    ]);
    let file: MiFile = cdfx::io::read_json(&mi).unwrap();
    assert_eq!(file.features.len(), 6);
    assert_eq!(file.to_matrix().unwrap().n, 6);

    let graph = tmp.path().join("g.json");
    let stdout = String::from_utf8(cdfx(&["graph", "--heavy-hex", "1x1", "--out", p(&graph)]).stdout).unwrap();
    assert!(stdout.starts_with("12 qubits"), "{stdout}");

    let ga = tmp.path().join("ga.toml");
    fs::write(&ga, "population_size = 40\nn_generations = 40\n").unwrap();
    let run = |name: &str, seed: &str| {
        let out = tmp.path().join(name);
        cdfx(&[
            "embed",
            "--graph",
            p(&graph),
            "--mi",
            p(&mi),
            "--ga",
            p(&ga),
            "--out",
            p(&out),
            "--seed",
            seed,
        ]);
        cdfx::io::read_json::<AssignFile>(&out).unwrap()
    };
    let (a, b) = (run("a.json", "7"), run("b.json", "7"));
    assert_eq!(a, b);
    assert_eq!(a.permutation.len(), 6);
    assert_eq!(a.history.len(), 41);
    assert!(a.history.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn encode_dumps() {
    let tmp = tempfile::tempdir().unwrap();
    let config = common::data_dir().join("synthetic.toml");
    let (terms, state, shots) = (
        tmp.path().join("terms.json"),
        tmp.path().join("state.bin"),
        tmp.path().join("shots.json"),
    );
    cdfx(&[
        "encode",
        "-c",
        p(&config),
        "--sample",
        "3",
        "--dump-terms",
        p(&terms),
        "--dump-state",
        p(&state),
        "--dump-shots",
        p(&shots),
    ]);
    let v: serde_json::Value = serde_json::from_slice(&fs::read(&terms).unwrap()).unwrap();
    assert_eq!(v["sample"], 3);
    assert_eq!(v["scaled"].as_array().unwrap().len(), 8);
    assert_eq!(v["dynamics"].as_array().unwrap().len(), 2);
    assert!(v["dynamics"][0]["alpha"].as_f64().unwrap() < 0.0);
    let sv = cdfx::io::read_statevector(&state).unwrap();
    assert_eq!(sv.n_qubits(), 8);
    assert!((sv.norm_sqr() - 1.0).abs() < 1e-12);
    let table: cdfx_core::simulate::ShotTable = cdfx::io::read_json(&shots).unwrap();
    assert_eq!(table.shots, 8192);
    assert_eq!(table.counts.values().sum::<u64>(), 8192);
}

#[test]
fn bad_config_exits_nonzero() {
    let tmp = tempfile::tempdir().unwrap();
    let config = tmp.path().join("c.toml");
    fs::write(&config, "[dataset]\npath = \"missing.csv\"\nlabel = \"y\"\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_cdfx"))
        .args(["run", "-c", p(&config)])
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("does not exist"));
}
