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

//! Core algorithms for counterdiabatic quantum feature extraction.
//!
//! Classical samples are encoded into k-local Z Hamiltonians whose fields are
//! the scaled feature values and whose couplings are mutual-information
//! coefficients placed on the edges and triplets of a hardware graph. The
//! Hamiltonian drives a first-order counterdiabatic evolution that is
//! simulated exactly on a statevector, and the resulting 1-, 2- and 3-body Z
//! expectations along a closed chain form the quantum feature map.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the pipeline
//! and the command line live in the `cdfx` companion crate.
//!
//! Module map:
//!
//! - [`dataset`]: validated tabular data, min-max scaling, stratified folds.
//! - [`infometrics`]: histogram mutual information, NMI matrices, `c_S`
//!   coefficients and label-driven feature selection.
//! - [`topology`]: hardware graphs, triplet enumeration and the genetic
//!   algorithm that assigns features to qubits.
//! - [`pauli`]: sparse Pauli-word algebra used to evaluate the
//!   counterdiabatic coefficient symbolically.
//! - [`encode`]: encoding Hamiltonian, schedule, counterdiabatic terms and
//!   Trotter sequences.
//! - [`simulate`]: statevector, Pauli rotations and shot sampling.
//! - [`extract`]: Z-string expectations and feature records.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod dataset;
pub mod encode;
pub mod error;
pub mod extract;
pub mod infometrics;
pub mod pauli;
pub mod rng;
pub mod simulate;
pub mod topology;

pub use error::{Error, Result};
