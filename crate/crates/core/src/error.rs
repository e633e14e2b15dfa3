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

use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid dataset: {0}")]
    Dataset(String),
    #[error("non-finite value at row {row}, column `{column}`")]
    NonFinite { row: usize, column: String },
    #[error("empty row subset")]
    EmptyRows,
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("class {class} has {count} members, fewer than {splits} splits")]
    ClassTooSmall { class: u8, count: usize, splits: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("bins ({bins}) exceed sample count ({samples})")]
    TooManyBins { bins: usize, samples: usize },
    #[error("invalid graph: {0}")]
    Graph(String),
    #[error("missing coefficient for feature subset {0:?}")]
    MissingCoefficient(alloc::vec::Vec<usize>),
    #[error("time {t} outside schedule [0, {total}]")]
    TimeOutOfRange { t: f64, total: f64 },
    #[error("degenerate counterdiabatic coefficient: {0}")]
    DegenerateAlpha(String),
    #[error("{qubits} qubits exceed the amplitude budget of {budget} amplitudes")]
    MemoryBudget { qubits: usize, budget: usize },
    #[error("invalid Pauli word: {0}")]
    PauliWord(String),
    #[error("missing state for {0}")]
    MissingState(String),
    #[error("descriptor collision: `{0}`")]
    NameCollision(String),
}
