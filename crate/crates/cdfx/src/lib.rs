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

//! File formats, configuration and pipeline orchestration on top of
//! `cdfx-core`.
//!
//! | module | contents |
//! |---|---|
//! | [`io`] | CSV datasets, JSON artifacts, feature tables, statevector dumps |
//! | [`config`] | TOML run configuration and its validation |
//! | [`pipeline`] | stage orchestration, manifest, parallel extraction |

#![forbid(unsafe_code)]

pub mod config;
pub mod error;
pub mod io;
pub mod pipeline;

pub use config::RunConfig;
pub use error::{Error, Result};
pub use pipeline::{prepare, run, Artifacts, Manifest, Prepared, Tracker};
