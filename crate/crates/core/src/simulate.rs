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

//! Dense statevector simulation of Pauli-word rotations.
//!
//! Amplitude index bit `q` is qubit `q` (qubit 0 is the least significant
//! bit). Shot bitstrings are written with character `q` holding qubit `q`,
//! matching the Pauli-word string form.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

pub use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::encode::Rotation;
use crate::pauli::PauliWord;
use crate::rng::Stream;
use crate::{Error, Result};

/// Default amplitude budget: `2^24` amplitudes (256 MiB).
pub const DEFAULT_MAX_QUBITS: usize = 24;

#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl Statevector {
    /// `|+>^n` under the default budget.
    pub fn plus_state(n: usize) -> Result<Self> {
        Self::plus_state_with_budget(n, DEFAULT_MAX_QUBITS)
    }

    pub fn plus_state_with_budget(n: usize, max_qubits: usize) -> Result<Self> {
        check_budget(n, max_qubits)?;
        let dim = 1usize << n;
        let a = 1.0 / libm::sqrt(dim as f64);
        Ok(Self {
            n_qubits: n,
            amps: vec![Complex64::new(a, 0.0); dim],
        })
    }

    /// Computational basis state `|index>`.
    pub fn basis(n: usize, index: usize) -> Result<Self> {
        check_budget(n, DEFAULT_MAX_QUBITS)?;
        let dim = 1usize << n;
        if index >= dim {
            return Err(Error::InvalidArgument(alloc::format!(
                "basis index {index} out of range"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits: n, amps })
    }

    /// Wraps raw amplitudes; the length must be a power of two.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let dim = amps.len();
        if dim == 0 || !dim.is_power_of_two() {
            return Err(Error::InvalidArgument(alloc::format!("{dim} is not a power of two")));
        }
        Ok(Self {
            n_qubits: dim.trailing_zeros() as usize,
            amps,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `|<self|other>|^2`.
    pub fn fidelity(&self, other: &Self) -> f64 {
        let overlap: Complex64 = self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum();
        overlap.norm_sqr()
    }

    /// `state <- exp(-i theta P) state = cos(theta) state - i sin(theta) P state`.
    ///
    /// `P|b> = i^{#Y} (-1)^{|b & z|} |b ^ x>`, so amplitudes are updated in
    /// place in pairs `(b, b ^ x)`, or one by one when `P` is diagonal. The
    /// identity word applies the global phase `exp(-i theta)`.
    pub fn apply_pauli_rotation(&mut self, word: &PauliWord, theta: f64) -> Result<()> {
        if word.n_qubits() != self.n_qubits {
            return Err(Error::LengthMismatch {
                expected: self.n_qubits,
                got: word.n_qubits(),
            });
        }
        if theta == 0.0 {
            return Ok(());
        }
        let x = low_mask(word.x_bits());
        let z = low_mask(word.z_bits());
        let ny = (x & z).count_ones();
        let base = match ny % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        let phase = |b: usize| if (b & z).count_ones() % 2 == 1 { -base } else { base };
        let (c, s) = (libm::cos(theta), libm::sin(theta));
        let minus_is = Complex64::new(0.0, -s);

        if x == 0 {
            for (b, amp) in self.amps.iter_mut().enumerate() {
                *amp *= Complex64::new(c, 0.0) + minus_is * phase(b);
            }
            return Ok(());
        }
        let top = 1usize << (usize::BITS - 1 - x.leading_zeros());
        for b in 0..self.amps.len() {
            // visit each pair once, from the member with the top x bit clear
            if b & top != 0 {
                continue;
            }
            let partner = b ^ x;
            let (u, v) = (self.amps[b], self.amps[partner]);
            // (P psi)[partner] = phase(b) psi[b], (P psi)[b] = phase(partner) psi[partner]
            self.amps[b] = u * c + minus_is * phase(partner) * v;
            self.amps[partner] = v * c + minus_is * phase(b) * u;
        }
        Ok(())
    }

    /// Applies `seq` in order.
    ///
    /// Consecutive diagonal rotations commute, so each such run is fused
    /// into one phase pass with its words in canonical order; reordering
    /// commuting diagonal words inside a run then yields bit-identical
    /// states.
    pub fn run_sequence(&mut self, seq: &[Rotation]) -> Result<()> {
        let mut k = 0;
        while k < seq.len() {
            let word = &seq[k].term.word;
            if word.n_qubits() != self.n_qubits {
                return Err(Error::LengthMismatch {
                    expected: self.n_qubits,
                    got: word.n_qubits(),
                });
            }
            if low_mask(word.x_bits()) != 0 {
                self.apply_pauli_rotation(word, seq[k].angle)?;
                k += 1;
                continue;
            }
            let end = seq[k..]
                .iter()
                .position(|r| r.term.word.n_qubits() != self.n_qubits || low_mask(r.term.word.x_bits()) != 0)
                .map_or(seq.len(), |p| k + p);
            self.apply_diagonal_run(&seq[k..end]);
            k = end;
        }
        Ok(())
    }

    fn apply_diagonal_run(&mut self, run: &[Rotation]) {
        let mut run: Vec<(usize, f64)> = run
            .iter()
            .filter(|r| r.angle != 0.0)
            .map(|r| (low_mask(r.term.word.z_bits()), r.angle))
            .collect();
        if run.is_empty() {
            return;
        }
        run.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
        for (b, amp) in self.amps.iter_mut().enumerate() {
            let phi: f64 = run
                .iter()
                .map(|&(z, theta)| if (b & z).count_ones() % 2 == 1 { -theta } else { theta })
                .sum();
            *amp *= Complex64::new(libm::cos(phi), -libm::sin(phi));
        }
    }

    /// Multinomial draw of `shots` outcomes from `|amp|^2` via inverse-CDF
    /// sampling on a seeded stream.
    pub fn sample(&self, shots: u64, seed: u64) -> Result<ShotTable> {
        self.sample_with(shots, &mut Stream::new(seed))
    }

    pub fn sample_with(&self, shots: u64, stream: &mut Stream) -> Result<ShotTable> {
        if shots == 0 {
            return Err(Error::InvalidArgument("shots must be at least 1".into()));
        }
        let mut cdf = Vec::with_capacity(self.amps.len());
        let mut acc = 0.0;
        for a in &self.amps {
            acc += a.norm_sqr();
            cdf.push(acc);
        }
        let total = acc;
        let mut hits: BTreeMap<usize, u64> = BTreeMap::new();
        for _ in 0..shots {
            let u = stream.uniform() * total;
            let mut idx = cdf.partition_point(|&p| p <= u);
            if idx >= cdf.len() {
                idx = cdf.len() - 1;
            }
            // skip zero-probability entries sharing the same cumulative value
            while self.amps[idx].norm_sqr() == 0.0 && idx + 1 < cdf.len() {
                idx += 1;
            }
            *hits.entry(idx).or_default() += 1;
        }
        let counts = hits
            .into_iter()
            .map(|(idx, c)| (bitstring(idx, self.n_qubits), c))
            .collect();
        Ok(ShotTable { shots, counts })
    }
}

fn check_budget(n: usize, max_qubits: usize) -> Result<()> {
    let cap = max_qubits.min(usize::BITS as usize - 2);
    if n == 0 || n > cap {
        return Err(Error::MemoryBudget {
            qubits: n,
            budget: 1usize << cap,
        });
    }
    Ok(())
}

fn low_mask(chunks: &[u64]) -> usize {
    chunks[0] as usize
}

/// Character `q` is qubit `q`.
pub fn bitstring(index: usize, n: usize) -> String {
    (0..n).map(|q| if index >> q & 1 == 1 { '1' } else { '0' }).collect()
}

pub fn parse_bitstring(s: &str) -> Result<usize> {
    let mut idx = 0usize;
    for (q, ch) in s.chars().enumerate() {
        match ch {
            '0' => {}
            '1' => idx |= 1 << q,
            _ => return Err(Error::InvalidArgument(alloc::format!("bad bitstring `{s}`"))),
        }
    }
    Ok(idx)
}

/// Measurement counts keyed by bitstring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShotTable {
    pub shots: u64,
    pub counts: BTreeMap<String, u64>,
}
