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

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use cdfx::config::RunConfig;
use cdfx::io::{self, AssignFile, GraphFile, MiFile};
use cdfx::pipeline::{self, Tracker};
use cdfx_core::encode::{alpha, trotter_sequence, Rotation, ZPolynomial};
use cdfx_core::infometrics::{default_bins, mi_matrix, select_features};
use cdfx_core::topology::{ga_optimize, heavy_hex_patch, GaConfig, HardwareGraph};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "cdfx", version, about = "Counterdiabatic quantum feature extraction")]
struct Cli {
    /// Overrides every seed in the configuration.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline described by a config file.
    Run {
        #[arg(short, long)]
        config: PathBuf,
        /// Output directory, replacing `output_dir` from the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the resolved configuration as JSON.
    Validate {
        #[arg(short, long)]
        config: PathBuf,
    },
    /// Normalized MI matrix over all rows of a dataset.
    Mi {
        #[command(flatten)]
        data: DataArgs,
        /// Keep the N features most informative about the label.
        #[arg(long)]
        select: Option<usize>,
        #[arg(long)]
        bins: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Assign features to qubits with the genetic algorithm.
    Embed {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        mi: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// TOML file of GA settings (the `[ga]` table keys).
        #[arg(long)]
        ga: Option<PathBuf>,
    },
    /// Inspect the encoding of one sample.
    Encode {
        #[arg(short, long)]
        config: PathBuf,
        #[arg(long, default_value_t = 0)]
        sample: usize,
        /// Write Hamiltonian terms, alpha and the rotation sequence as JSON.
        #[arg(long)]
        dump_terms: Option<PathBuf>,
        /// Write the final state of the first dynamics as a binary dump.
        #[arg(long)]
        dump_state: Option<PathBuf>,
        /// Write a shot table of the first dynamics as JSON.
        #[arg(long)]
        dump_shots: Option<PathBuf>,
    },
    /// Quantum features from cached MI and assignment files.
    Extract {
        #[arg(short, long)]
        config: PathBuf,
        #[arg(long)]
        mi: PathBuf,
        #[arg(long)]
        assign: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write a coupling graph file.
    Graph {
        #[arg(long, conflicts_with = "heavy_hex")]
        ring: Option<usize>,
        /// Patch size as ROWSxCOLS.
        #[arg(long)]
        heavy_hex: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct DataArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    label: String,
    #[arg(long, default_value_t = ',')]
    delimiter: char,
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config, out } => {
            let mut cfg = RunConfig::from_file(&config, cli.seed)?;
            if let Some(out) = out {
                cfg.output_dir = out;
            }
            let art = pipeline::run(&cfg)?;
            println!(
                "wrote {} (digest {})",
                art.dir.display(),
                art.manifest.digest.as_deref().unwrap_or("-")
            );
        }
        Command::Validate { config } => {
            let cfg = RunConfig::from_file(&config, cli.seed)?;
            println!("{}", serde_json::to_string_pretty(&cfg)?);
        }
        Command::Mi {
            data,
            select,
            bins,
            out,
        } => {
            let table = load(&data)?;
            let ds = &table.dataset;
            let rows = ds.all_rows();
            let bins = bins.unwrap_or_else(|| default_bins(rows.len()));
            let ds = match select {
                Some(k) => {
                    let mut cols = select_features(ds, &rows, k, bins)?;
                    cols.sort_unstable();
                    ds.select_columns(&cols)?
                }
                None => ds.clone(),
            };
            let m = mi_matrix(&ds, &rows, bins)?;
            io::write_json(&out, &MiFile::new(ds.names().to_vec(), &m))?;
            println!("{} features, {} bins", m.n, m.bins);
        }
        Command::Embed { graph, mi, out, ga } => {
            let file: MiFile = io::read_json(&mi)?;
            let m = file.to_matrix()?;
            let mut g = io::read_graph(&graph)?;
            if g.n_qubits() > m.n {
                g = g.connected_subgraph(m.n)?;
            }
            let mut cfg: GaConfig = match ga {
                Some(p) => {
                    let text = std::fs::read_to_string(&p).with_context(|| p.display().to_string())?;
                    toml::from_str(&text).with_context(|| p.display().to_string())?
                }
                None => GaConfig::default(),
            };
            if let Some(seed) = cli.seed {
                cfg.seed = seed;
            }
            let res = ga_optimize(&g, &m, &cfg)?;
            io::write_json(&out, &AssignFile::from_result(&res, file.features))?;
            println!("fitness {}", res.fitness);
        }
        Command::Encode {
            config,
            sample,
            dump_terms,
            dump_state,
            dump_shots,
        } => encode(&config, cli.seed, sample, dump_terms, dump_state, dump_shots)?,
        Command::Extract {
            config,
            mi,
            assign,
            out,
        } => {
            let mut cfg = RunConfig::from_file(&config, cli.seed)?;
            cfg.cache_mi = Some(mi);
            cfg.cache_assign = Some(assign);
            let prep = pipeline::prepare(&cfg, &mut Tracker::default())?;
            let records = prep.extract_all(&cfg)?;
            io::write_feature_table(&out, &records, None)?;
            println!("{} samples", records.len());
        }
        Command::Graph { ring, heavy_hex, out } => {
            let g = match (ring, heavy_hex) {
                (Some(n), None) => HardwareGraph::ring(n)?,
                (None, Some(shape)) => {
                    let (r, c) = shape
                        .split_once('x')
                        .context("heavy-hex shape must look like ROWSxCOLS")?;
                    heavy_hex_patch(r.parse()?, c.parse()?)?
                }
                _ => bail!("pass exactly one of --ring or --heavy-hex"),
            };
            io::write_json(&out, &GraphFile::from_graph(&g))?;
            println!(
                "{} qubits, {} edges, {} triplets",
                g.n_qubits(),
                g.edges().len(),
                g.triplets().len()
            );
        }
    }
    Ok(())
}

fn load(data: &DataArgs) -> Result<io::LoadedTable> {
    if !data.delimiter.is_ascii() {
        bail!("delimiter must be a single ASCII character");
    }
    Ok(io::load_csv(&data.data, &data.label, data.delimiter as u8)?)
}

#[derive(Serialize)]
struct DynamicsDump {
    order: usize,
    /// At the midpoint of the schedule; absent when the polynomial is empty.
    alpha: Option<f64>,
    hamiltonian: ZPolynomial,
    sequence: Vec<Rotation>,
}

#[derive(Serialize)]
struct TermsDump {
    sample: usize,
    scaled: Vec<f64>,
    dynamics: Vec<DynamicsDump>,
}

fn encode(
    config: &Path,
    seed: Option<u64>,
    sample: usize,
    dump_terms: Option<PathBuf>,
    dump_state: Option<PathBuf>,
    dump_shots: Option<PathBuf>,
) -> Result<()> {
    let cfg = RunConfig::from_file(config, seed)?;
    let prep = pipeline::prepare(&cfg, &mut Tracker::default())?;
    if sample >= prep.features.n_samples() {
        bail!("sample {sample} out of range ({} samples)", prep.features.n_samples());
    }
    let hams = prep.hamiltonians(&cfg, sample)?;
    let mut dynamics = Vec::new();
    for (&k, hz) in cfg.dynamics.iter().zip(&hams) {
        let sequence = trotter_sequence(hz, &cfg.schedule, cfg.mode)?;
        println!("K={k}: {} terms, {} rotations", hz.terms().len(), sequence.len());
        dynamics.push(DynamicsDump {
            order: k,
            alpha: alpha(hz, &cfg.schedule, cfg.schedule.total_time / 2.0).ok(),
            hamiltonian: hz.clone(),
            sequence,
        });
    }
    if let Some(p) = dump_terms {
        let dump = TermsDump {
            sample,
            scaled: prep.scaled(sample)?,
            dynamics,
        };
        io::write_json(&p, &dump)?;
    }
    if dump_state.is_some() || dump_shots.is_some() {
        let state = prep.evolve(&cfg, &hams[0])?;
        if let Some(p) = dump_state {
            io::write_statevector(&p, &state)?;
        }
        if let Some(p) = dump_shots {
            io::write_json(&p, &prep.sample_shots(&cfg, &state, sample, 0)?)?;
        }
    }
    Ok(())
}
