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

//! Exhaustive permutation search and planted MI structures.

#![allow(dead_code)]

use cdfx_core::infometrics::MIMatrix;
use cdfx_core::rng::Stream;
use cdfx_core::topology::{fitness, FitnessWeights, HardwareGraph};

/// Visits every permutation of `0..n` (Heap's algorithm).
pub fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut counters = vec![0usize; n];
    f(&perm);
    let mut i = 1;
    while i < n {
        if counters[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(counters[i], i);
            }
            f(&perm);
            counters[i] += 1;
            i = 1;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
}

/// Maximum fitness over all `n!` assignments.
pub fn exhaustive_max(g: &HardwareGraph, m: &MIMatrix, w: FitnessWeights) -> f64 {
    let mut best = f64::NEG_INFINITY;
    let mut visited = 0usize;
    for_each_permutation(g.n_qubits(), |p| {
        visited += 1;
        best = best.max(fitness(p, g, m, w).unwrap());
    });
    assert_eq!(visited, (1..=g.n_qubits()).product::<usize>());
    best
}

/// Two scrambled feature communities of four: strong NMI inside a
/// community, weak across, with small seeded noise.
pub fn planted_blocks(seed: u64) -> MIMatrix {
    let n = 8;
    let mut stream = Stream::new(seed);
    let mut features: Vec<usize> = (0..n).collect();
    stream.shuffle(&mut features);
    let mut community = vec![0usize; n];
    for (rank, &f) in features.iter().enumerate() {
        community[f] = rank / 4;
    }
    let mut values = vec![0.0; n * n];
    for a in 0..n {
        values[a * n + a] = 1.0;
        for b in a + 1..n {
            let base = if community[a] == community[b] { 0.7 } else { 0.05 };
            let v = base + 0.1 * stream.uniform();
            values[a * n + b] = v;
            values[b * n + a] = v;
        }
    }
    MIMatrix::from_values(n, 8, values).unwrap()
}

/// Random symmetric matrix with unit diagonal.
pub fn random_matrix(n: usize, seed: u64) -> MIMatrix {
    let mut s = Stream::new(seed);
    let mut values = vec![0.0; n * n];
    for a in 0..n {
        values[a * n + a] = 1.0;
        for b in a + 1..n {
            let v = s.uniform();
            values[a * n + b] = v;
            values[b * n + a] = v;
        }
    }
    MIMatrix::from_values(n, 8, values).unwrap()
}
