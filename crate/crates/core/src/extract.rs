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

//! Z-string expectations and the closed-chain feature map.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::simulate::{parse_bitstring, ShotTable, Statevector};
use crate::{Error, Result};

/// Where expectation values are read from.
#[derive(Debug, Clone, Copy)]
pub enum Measured<'a> {
    Exact(&'a Statevector),
    Shots(&'a ShotTable),
}

impl Measured<'_> {
    pub fn n_qubits(&self) -> Option<usize> {
        match self {
            Measured::Exact(s) => Some(s.n_qubits()),
            Measured::Shots(t) => t.counts.keys().next().map(|k| k.chars().count()),
        }
    }

    pub fn expect_z(&self, support: &[usize]) -> Result<f64> {
        match self {
            Measured::Exact(s) => expect_z(s, support),
            Measured::Shots(t) => expect_z_shots(t, support),
        }
    }
}

fn support_mask(support: &[usize], n: usize) -> Result<usize> {
    if support.is_empty() {
        return Err(Error::InvalidArgument("empty observable support".into()));
    }
    let mut mask = 0usize;
    for &q in support {
        if q >= n {
            return Err(Error::InvalidArgument(format!("qubit {q} out of range for {n} qubits")));
        }
        mask |= 1 << q;
    }
    Ok(mask)
}

/// `sum_b |amp_b|^2 (-1)^{parity(b & S)}`, returned as
/// `(p_even - p_odd) / (p_even + p_odd)` so the value lies in `[-1, 1]`.
pub fn expect_z(state: &Statevector, support: &[usize]) -> Result<f64> {
    let mask = support_mask(support, state.n_qubits())?;
    let (mut even, mut odd) = (0.0, 0.0);
    for (b, a) in state.amplitudes().iter().enumerate() {
        if (b & mask).count_ones() % 2 == 0 {
            even += a.norm_sqr();
        } else {
            odd += a.norm_sqr();
        }
    }
    Ok(parity_ratio(even, odd))
}

/// Empirical counterpart of [`expect_z`].
pub fn expect_z_shots(table: &ShotTable, support: &[usize]) -> Result<f64> {
    let n = table
        .counts
        .keys()
        .next()
        .map(|k| k.chars().count())
        .ok_or_else(|| Error::InvalidArgument("empty shot table".into()))?;
    let mask = support_mask(support, n)?;
    let (mut even, mut odd) = (0u64, 0u64);
    for (bits, &c) in &table.counts {
        if (parse_bitstring(bits)? & mask).count_ones() % 2 == 0 {
            even += c;
        } else {
            odd += c;
        }
    }
    Ok(parity_ratio(even as f64, odd as f64))
}

fn parity_ratio(even: f64, odd: f64) -> f64 {
    let v = (even - odd) / (even + odd);
    debug_assert!((-1.0..=1.0).contains(&v), "expectation {v} outside [-1, 1]");
    v
}

/// Single sites, nearest-neighbor pairs and triples on the ring `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObservableSet {
    pub n: usize,
    pub singles: Vec<usize>,
    pub pairs: Vec<[usize; 2]>,
    pub triples: Vec<[usize; 3]>,
}

impl ObservableSet {
    /// All three orders on the closed chain; needs `n >= 3`.
    pub fn closed_chain(n: usize) -> Result<Self> {
        Self::closed_chain_with(n, [true, true, true])
    }

    /// `active[k]` switches on the `(k+1)`-body block.
    pub fn closed_chain_with(n: usize, active: [bool; 3]) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidArgument(format!(
                "closed chain needs at least 3 qubits, got {n}"
            )));
        }
        Ok(Self {
            n,
            singles: if active[0] { (0..n).collect() } else { Vec::new() },
            pairs: if active[1] {
                (0..n).map(|i| [i, (i + 1) % n]).collect()
            } else {
                Vec::new()
            },
            triples: if active[2] {
                (0..n).map(|i| [i, (i + 1) % n, (i + 2) % n]).collect()
            } else {
                Vec::new()
            },
        })
    }

    pub fn len(&self) -> usize {
        self.singles.len() + self.pairs.len() + self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Which dynamics feeds each observable order, as indices into the list of
/// measured states handed to [`feature_map`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourcePlan {
    pub singles: usize,
    pub pairs: usize,
    pub triples: usize,
}

impl SourcePlan {
    /// Every order from the one state.
    pub fn single() -> Self {
        Self {
            singles: 0,
            pairs: 0,
            triples: 0,
        }
    }

    /// Singles and pairs from the first state, triples from the second.
    pub fn dual() -> Self {
        Self {
            singles: 0,
            pairs: 0,
            triples: 1,
        }
    }

    /// Plan for `count` dynamics: lower orders from the first, triples from
    /// the last.
    pub fn for_dynamics(count: usize) -> Self {
        Self {
            singles: 0,
            pairs: 0,
            triples: count.saturating_sub(1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureEntry {
    pub name: String,
    pub value: f64,
    /// Producing block, e.g. `q2:k2` or `classical`.
    pub block: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureRecord {
    pub sample_id: usize,
    pub entries: Vec<FeatureEntry>,
}

impl FeatureRecord {
    pub fn names(&self) -> Vec<&str> {
        self.entries.iter().map(|e| e.name.as_str()).collect()
    }

    pub fn values(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.value).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// A measured state together with the tag used in descriptors (`k2`, `k3`).
#[derive(Debug, Clone, Copy)]
pub struct Dynamics<'a> {
    pub tag: &'a str,
    pub measured: Measured<'a>,
}

/// Descriptor names for `obs` under `plan`, in feature order.
pub fn descriptors(obs: &ObservableSet, tags: &[&str], plan: SourcePlan) -> Result<Vec<(String, String)>> {
    let tag = |idx: usize, what: &str| {
        tags.get(idx)
            .copied()
            .ok_or_else(|| Error::MissingState(format!("{what} (dynamics #{idx})")))
    };
    let mut out = Vec::with_capacity(obs.len());
    if !obs.singles.is_empty() {
        let t = tag(plan.singles, "one-body block")?;
        for &i in &obs.singles {
            out.push((format!("q1_{i}_{t}"), format!("q1:{t}")));
        }
    }
    if !obs.pairs.is_empty() {
        let t = tag(plan.pairs, "two-body block")?;
        for [i, j] in &obs.pairs {
            out.push((format!("q2_{i}_{j}_{t}"), format!("q2:{t}")));
        }
    }
    if !obs.triples.is_empty() {
        let t = tag(plan.triples, "three-body block")?;
        for [i, j, k] in &obs.triples {
            out.push((format!("q3_{i}_{j}_{k}_{t}"), format!("q3:{t}")));
        }
    }
    Ok(out)
}

/// Evaluates every observable of `obs` on the state chosen by `plan`.
/// Output order: singles ascending, then pairs, then triples.
pub fn feature_map(
    sample_id: usize,
    states: &[Dynamics<'_>],
    obs: &ObservableSet,
    plan: SourcePlan,
) -> Result<FeatureRecord> {
    for d in states {
        if let Some(n) = d.measured.n_qubits() {
            if n != obs.n {
                return Err(Error::LengthMismatch {
                    expected: obs.n,
                    got: n,
                });
            }
        }
    }
    let tags: Vec<&str> = states.iter().map(|d| d.tag).collect();
    let names = descriptors(obs, &tags, plan)?;
    let supports = obs
        .singles
        .iter()
        .map(|&i| (plan.singles, alloc::vec![i]))
        .chain(obs.pairs.iter().map(|p| (plan.pairs, p.to_vec())))
        .chain(obs.triples.iter().map(|t| (plan.triples, t.to_vec())));
    let mut entries = Vec::with_capacity(names.len());
    for ((name, block), (src, support)) in names.into_iter().zip(supports) {
        let value = states[src].measured.expect_z(&support)?;
        entries.push(FeatureEntry { name, value, block });
    }
    Ok(FeatureRecord { sample_id, entries })
}

/// Prefix applied to classical column names in combined records.
pub const CLASSICAL_PREFIX: &str = "c_";

/// Classical block first (names prefixed `c_`), quantum entries after.
pub fn concat_features(
    classical_names: &[String],
    classical: &[f64],
    quantum: &FeatureRecord,
) -> Result<FeatureRecord> {
    if classical_names.len() != classical.len() {
        return Err(Error::LengthMismatch {
            expected: classical_names.len(),
            got: classical.len(),
        });
    }
    let mut entries: Vec<FeatureEntry> = classical_names
        .iter()
        .zip(classical)
        .map(|(n, &v)| FeatureEntry {
            name: format!("{CLASSICAL_PREFIX}{n}"),
            value: v,
            block: "classical".into(),
        })
        .collect();
    entries.extend(quantum.entries.iter().cloned());
    let mut seen = BTreeSet::new();
    for e in &entries {
        if !seen.insert(e.name.as_str()) {
            return Err(Error::NameCollision(e.name.clone()));
        }
    }
    Ok(FeatureRecord {
        sample_id: quantum.sample_id,
        entries,
    })
}
