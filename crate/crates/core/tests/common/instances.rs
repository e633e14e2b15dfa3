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

//! Random spin-glass instances for oracle tests.

#![allow(dead_code)]

use cdfx_core::encode::{encode_hamiltonian, ZPolynomial};
use cdfx_core::infometrics::HyperCoeffs;
use cdfx_core::rng::Stream;
use cdfx_core::topology::{Assignment, HardwareGraph};

/// Connected random graph on `n` qubits: a spanning path plus random chords.
pub fn random_graph(n: usize, stream: &mut Stream) -> HardwareGraph {
    let mut edges: Vec<(usize, usize)> = (1..n).map(|q| (stream.below(q), q)).collect();
    for a in 0..n {
        for b in a + 1..n {
            if !edges.contains(&(a, b)) && stream.bernoulli(0.25) {
                edges.push((a, b));
            }
        }
    }
    HardwareGraph::new(n, &edges).unwrap()
}

/// Encoding Hamiltonian of order `k` with random fields in `[-1, 1]`,
/// couplings in `[0, 1]` and a random assignment.
pub fn random_instance(n: usize, k: usize, stream: &mut Stream) -> (HardwareGraph, ZPolynomial) {
    let g = random_graph(n, stream);
    let x: Vec<f64> = (0..n).map(|_| 2.0 * stream.uniform() - 1.0).collect();
    let mut map: Vec<usize> = (0..n).collect();
    stream.shuffle(&mut map);
    let assignment = Assignment::new(map).unwrap();
    let mut c2 = HyperCoeffs::new(2);
    for &(a, b) in g.edges() {
        c2.insert(&[assignment.feature(a), assignment.feature(b)], stream.uniform());
    }
    let mut c3 = HyperCoeffs::new(3);
    for t in g.triplets() {
        c3.insert(
            &[
                assignment.feature(t[0]),
                assignment.feature(t[1]),
                assignment.feature(t[2]),
            ],
            stream.uniform(),
        );
    }
    let hz = encode_hamiltonian(&x, &g, &[c2, c3], &assignment, k).unwrap();
    (g, hz)
}

pub fn terms_of(hz: &ZPolynomial) -> Vec<(Vec<usize>, f64)> {
    hz.terms().iter().map(|t| (t.support.clone(), t.coeff)).collect()
}
