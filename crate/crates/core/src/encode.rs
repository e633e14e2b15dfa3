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

//! Encoding Hamiltonian, adiabatic schedule and first-order counterdiabatic
//! terms.
//!
//! The driven Hamiltonian is `H_ad(t) = A(t) H_mix + B(t) H_z` with mixer
//! `H_mix = -sum_i X_i` (ground state `|+>^n`), `A = 1 - lambda` and
//! `B = lambda`. The gauge potential is `i alpha [H_ad, dH_ad/dt]`; for a Z
//! polynomial it expands into words with a single `Y`:
//!
//! ```text
//! A(t) = -2 alpha (A B' - A' B) sum_S c_S sum_{j in S} Y_j prod_{i in S \ j} Z_i
//! ```
//!
//! `alpha` minimizes the action `Tr[(dH_ad/dt + alpha [H_ad, K])^2]` with
//! `K = [H_ad, dH_ad/dt]`, giving `alpha = Tr(K^2) / Tr([H_ad, K]^2)`. The
//! traces are evaluated in the Pauli algebra, so no matrix is ever formed.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::infometrics::HyperCoeffs;
use crate::pauli::{Pauli, PauliSum, PauliWord};
use crate::topology::{Assignment, HardwareGraph};
use crate::{Error, Result};

/// Coefficients below this magnitude are dropped from encoded Hamiltonians.
pub const COEFF_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZTerm {
    pub support: Vec<usize>,
    pub coeff: f64,
}

/// Diagonal k-local Hamiltonian `sum_S c_S prod_{i in S} Z_i`.
///
/// Supports are sorted, unique and nonempty. Terms are kept ordered by
/// support size, then lexicographically.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZPolynomial {
    pub n_qubits: usize,
    terms: Vec<ZTerm>,
}

impl ZPolynomial {
    /// Merges repeated supports and sorts; rejects empty or out-of-range
    /// supports.
    pub fn new(n_qubits: usize, terms: Vec<ZTerm>) -> Result<Self> {
        let mut merged: alloc::collections::BTreeMap<(usize, Vec<usize>), f64> = Default::default();
        for t in terms {
            let mut s = t.support;
            s.sort_unstable();
            if s.is_empty() {
                return Err(Error::InvalidArgument("empty Z support".into()));
            }
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidArgument(format!("repeated qubit in support {s:?}")));
            }
            if s[s.len() - 1] >= n_qubits {
                return Err(Error::InvalidArgument(format!("support {s:?} out of range")));
            }
            if !t.coeff.is_finite() {
                return Err(Error::InvalidArgument(format!("non-finite coefficient on {s:?}")));
            }
            *merged.entry((s.len(), s)).or_insert(0.0) += t.coeff;
        }
        let terms = merged
            .into_iter()
            .map(|((_, support), coeff)| ZTerm { support, coeff })
            .collect();
        Ok(Self { n_qubits, terms })
    }

    pub fn terms(&self) -> &[ZTerm] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn to_pauli_sum(&self) -> PauliSum {
        let mut out = PauliSum::new();
        for t in &self.terms {
            out.add_real(z_word(self.n_qubits, &t.support), t.coeff);
        }
        out
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            n_qubits: self.n_qubits,
            terms: self
                .terms
                .iter()
                .map(|t| ZTerm {
                    support: t.support.clone(),
                    coeff: t.coeff * s,
                })
                .collect(),
        }
    }
}

fn z_word(n: usize, support: &[usize]) -> PauliWord {
    let mut w = PauliWord::identity(n);
    for &q in support {
        w.set(q, Pauli::Z);
    }
    w
}

/// Interpolation profile `lambda(t)` with `lambda(0) = 0`, `lambda(T) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    /// `sin^2(pi t / 2T)`
    #[default]
    Sin2,
    /// `t / T`
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub total_time: f64,
    pub profile: Profile,
    pub n_steps: usize,
}

impl Default for Schedule {
    fn default() -> Self {
        Self {
            total_time: 1.0,
            profile: Profile::Sin2,
            n_steps: 1,
        }
    }
}

impl Schedule {
    pub fn new(total_time: f64, profile: Profile, n_steps: usize) -> Result<Self> {
        let s = Self {
            total_time,
            profile,
            n_steps,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.total_time.is_finite() && self.total_time > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "total time must be positive, got {}",
                self.total_time
            )));
        }
        if self.n_steps < 1 {
            return Err(Error::InvalidArgument("n_steps must be at least 1".into()));
        }
        Ok(())
    }

    pub fn dt(&self) -> f64 {
        self.total_time / self.n_steps as f64
    }

    pub fn lambda(&self, t: f64) -> f64 {
        let s = t / self.total_time;
        match self.profile {
            Profile::Sin2 => {
                let v = libm::sin(PI * s / 2.0);
                v * v
            }
            Profile::Linear => s,
        }
    }

    pub fn lambda_dot(&self, t: f64) -> f64 {
        let s = t / self.total_time;
        match self.profile {
            Profile::Sin2 => PI / (2.0 * self.total_time) * libm::sin(PI * s),
            Profile::Linear => 1.0 / self.total_time,
        }
    }

    /// Mixer weight `A(t) = 1 - lambda(t)`.
    pub fn a(&self, t: f64) -> f64 {
        1.0 - self.lambda(t)
    }

    /// Problem weight `B(t) = lambda(t)`.
    pub fn b(&self, t: f64) -> f64 {
        self.lambda(t)
    }

    /// `A B' - A' B`, which reduces to `lambda'(t)`.
    pub fn cd_prefactor(&self, t: f64) -> f64 {
        let (a, b) = (self.a(t), self.b(t));
        let ld = self.lambda_dot(t);
        a * ld - (-ld) * b
    }

    fn check_time(&self, t: f64) -> Result<()> {
        if !(0.0..=self.total_time).contains(&t) {
            return Err(Error::TimeOutOfRange {
                t,
                total: self.total_time,
            });
        }
        Ok(())
    }
}

/// Real-coefficient Pauli term.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PauliTerm {
    pub coeff: f64,
    pub word: PauliWord,
}

/// `H(x) = sum_i x_{pi(i)} Z_i + sum_{k=2}^{K} sum_{S in G^(k)} c_S prod Z`.
///
/// `x` is indexed by feature, `assignment` maps qubits to features, and the
/// order-`k` interaction sets are the graph edges (`k = 2`) and triplets
/// (`k = 3`). `coeffs` must carry every mapped feature subset of each order
/// up to `k`. Terms with `|coeff| < 1e-12` are dropped.
pub fn encode_hamiltonian(
    x: &[f64],
    g: &HardwareGraph,
    coeffs: &[HyperCoeffs],
    assignment: &Assignment,
    k: usize,
) -> Result<ZPolynomial> {
    if !(2..=3).contains(&k) {
        return Err(Error::InvalidArgument(format!(
            "interaction order K must be 2 or 3, got {k}"
        )));
    }
    let n = g.n_qubits();
    if assignment.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: assignment.len(),
        });
    }
    if x.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: x.len(),
        });
    }
    let table = |order: usize| {
        coeffs
            .iter()
            .find(|c| c.order == order)
            .ok_or_else(|| Error::InvalidArgument(format!("no coefficients supplied for order {order}")))
    };

    let mut terms = Vec::new();
    for q in 0..n {
        terms.push(ZTerm {
            support: alloc::vec![q],
            coeff: x[assignment.feature(q)],
        });
    }
    let pairs = table(2)?;
    for &(a, b) in g.edges() {
        let features = [assignment.feature(a), assignment.feature(b)];
        let c = pairs
            .get(&features)
            .ok_or_else(|| Error::MissingCoefficient(features.to_vec()))?;
        terms.push(ZTerm {
            support: alloc::vec![a, b],
            coeff: c,
        });
    }
    if k == 3 {
        let triples = table(3)?;
        for t in g.triplets() {
            let features = [
                assignment.feature(t[0]),
                assignment.feature(t[1]),
                assignment.feature(t[2]),
            ];
            let c = triples
                .get(&features)
                .ok_or_else(|| Error::MissingCoefficient(features.to_vec()))?;
            terms.push(ZTerm {
                support: t.to_vec(),
                coeff: c,
            });
        }
    }
    terms.retain(|t| libm::fabs(t.coeff) >= COEFF_EPS);
    ZPolynomial::new(n, terms)
}

/// `-sum_i X_i`.
pub fn mixer(n: usize) -> PauliSum {
    let mut out = PauliSum::new();
    for q in 0..n {
        let mut w = PauliWord::identity(n);
        w.set(q, Pauli::X);
        out.add_real(w, -1.0);
    }
    out
}

/// `H_ad(t) = A(t) H_mix + B(t) H_z`.
pub fn adiabatic_hamiltonian(hz: &ZPolynomial, sched: &Schedule, t: f64) -> PauliSum {
    mixer(hz.n_qubits)
        .scaled(sched.a(t))
        .plus(&hz.to_pauli_sum().scaled(sched.b(t)))
}

/// `dH_ad/dt = A'(t) H_mix + B'(t) H_z`.
pub fn adiabatic_derivative(hz: &ZPolynomial, sched: &Schedule, t: f64) -> PauliSum {
    let ld = sched.lambda_dot(t);
    mixer(hz.n_qubits).scaled(-ld).plus(&hz.to_pauli_sum().scaled(ld))
}

/// Variational coefficient `alpha(t) = Tr(K^2) / Tr(L^2)`, with
/// `K = [H_ad, dH_ad/dt]` and `L = [H_ad, K]`.
///
/// `K` equals `(A B' - A' B) [H_mix, H_z]`; the scalar prefactor cancels in
/// the ratio, so it is dropped and `alpha` stays defined at the schedule
/// endpoints where the prefactor vanishes.
pub fn alpha(hz: &ZPolynomial, sched: &Schedule, t: f64) -> Result<f64> {
    sched.check_time(t)?;
    if hz.is_empty() {
        return Err(Error::DegenerateAlpha("encoding Hamiltonian has no terms".into()));
    }
    let h_ad = adiabatic_hamiltonian(hz, sched, t);
    let k = mixer(hz.n_qubits).commutator(&hz.to_pauli_sum());
    let l = h_ad.commutator(&k);
    let num = k.normalized_trace_of_square().re;
    let den = l.normalized_trace_of_square().re;
    if den.is_nan() || den <= 0.0 || !num.is_finite() {
        return Err(Error::DegenerateAlpha(format!("Tr(K^2) = {num}, Tr(L^2) = {den}")));
    }
    Ok(num / den)
}

/// Counterdiabatic terms at time `t`, computing `alpha` from `hz`.
pub fn cd_terms(hz: &ZPolynomial, sched: &Schedule, t: f64) -> Result<Vec<PauliTerm>> {
    sched.check_time(t)?;
    if hz.is_empty() {
        return Ok(Vec::new());
    }
    let a = alpha(hz, sched, t)?;
    cd_terms_with_alpha(hz, sched, t, a)
}

/// Counterdiabatic terms with a caller-fixed `alpha`. Each Z term of
/// support size `m` yields `m` words, in term order and then by the
/// position of the `Y`.
pub fn cd_terms_with_alpha(hz: &ZPolynomial, sched: &Schedule, t: f64, alpha: f64) -> Result<Vec<PauliTerm>> {
    sched.check_time(t)?;
    let scale = -2.0 * alpha * sched.cd_prefactor(t);
    let mut out = Vec::new();
    for term in hz.terms() {
        for &j in &term.support {
            let mut w = z_word(hz.n_qubits, &term.support);
            w.set(j, Pauli::Y);
            out.push(PauliTerm {
                coeff: scale * term.coeff,
                word: w,
            });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvolutionMode {
    /// Single step of counterdiabatic terms only, evaluated at `T/2`.
    #[default]
    Impulse,
    /// `n_steps` steps of mixer, Z polynomial and counterdiabatic terms.
    Full,
}

/// One factor `exp(-i angle P)` of the Trotter product.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rotation {
    pub term: PauliTerm,
    pub angle: f64,
}

/// Ordered rotations approximating `prod_j exp(-i dt (H_ad + A)(j dt))`.
///
/// Impulse mode uses a single step of length `T` holding only the
/// counterdiabatic terms at `t = T/2`. Full mode runs steps `j = 1..N` at
/// `t = j dt`, each step applying the mixer X fields (ascending qubit), the
/// Z-polynomial terms (term order) and the counterdiabatic terms; zero
/// coefficients are kept so every step has the same length.
pub fn trotter_sequence(hz: &ZPolynomial, sched: &Schedule, mode: EvolutionMode) -> Result<Vec<Rotation>> {
    sched.validate()?;
    let rot = |term: PauliTerm, dt: f64| Rotation {
        angle: dt * term.coeff,
        term,
    };
    match mode {
        EvolutionMode::Impulse => {
            let dt = sched.total_time;
            let t_mid = sched.total_time / 2.0;
            Ok(cd_terms(hz, sched, t_mid)?.into_iter().map(|p| rot(p, dt)).collect())
        }
        EvolutionMode::Full => {
            let dt = sched.dt();
            let n = hz.n_qubits;
            let mut out = Vec::new();
            for step in 1..=sched.n_steps {
                let t = (step as f64 * dt).min(sched.total_time);
                let (a, b) = (sched.a(t), sched.b(t));
                for q in 0..n {
                    let mut w = PauliWord::identity(n);
                    w.set(q, Pauli::X);
                    out.push(rot(PauliTerm { coeff: -a, word: w }, dt));
                }
                for term in hz.terms() {
                    out.push(rot(
                        PauliTerm {
                            coeff: b * term.coeff,
                            word: z_word(n, &term.support),
                        },
                        dt,
                    ));
                }
                out.extend(cd_terms(hz, sched, t)?.into_iter().map(|p| rot(p, dt)));
            }
            Ok(out)
        }
    }
}
