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

//! Sparse Pauli-word algebra over an arbitrary number of qubits.
//!
//! A word is stored as X and Z bitmasks and denotes the Hermitian operator
//! `i^{|x & z|} X^x Z^z`, so a qubit with both bits set carries `Y = iXZ`.
//! Character `k` of the string form acts on qubit `k`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(Self::I),
            'X' => Some(Self::X),
            'Y' => Some(Self::Y),
            'Z' => Some(Self::Z),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Self::I => 'I',
            Self::X => 'X',
            Self::Y => 'Y',
            Self::Z => 'Z',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PauliWord {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
}

fn chunks(n: usize) -> usize {
    n.div_ceil(64).max(1)
}

impl PauliWord {
    pub fn identity(n: usize) -> Self {
        Self {
            n,
            x: vec![0; chunks(n)],
            z: vec![0; chunks(n)],
        }
    }

    /// Word with the given single-qubit factors; unlisted qubits are `I`.
    pub fn from_factors(n: usize, factors: &[(usize, Pauli)]) -> Result<Self> {
        let mut w = Self::identity(n);
        for &(q, p) in factors {
            if q >= n {
                return Err(Error::PauliWord(format!("qubit {q} out of range for {n} qubits")));
            }
            w.set(q, p);
        }
        Ok(w)
    }

    pub fn parse(s: &str) -> Result<Self> {
        let n = s.chars().count();
        let mut w = Self::identity(n);
        for (q, c) in s.chars().enumerate() {
            let p = Pauli::from_char(c).ok_or_else(|| Error::PauliWord(format!("bad letter `{c}` in `{s}`")))?;
            w.set(q, p);
        }
        Ok(w)
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn set(&mut self, q: usize, p: Pauli) {
        let (c, b) = (q / 64, 1u64 << (q % 64));
        let (xb, zb) = match p {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        };
        if xb {
            self.x[c] |= b;
        } else {
            self.x[c] &= !b;
        }
        if zb {
            self.z[c] |= b;
        } else {
            self.z[c] &= !b;
        }
    }

    pub fn get(&self, q: usize) -> Pauli {
        let (c, b) = (q / 64, 1u64 << (q % 64));
        match (self.x[c] & b != 0, self.z[c] & b != 0) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn x_bits(&self) -> &[u64] {
        &self.x
    }

    pub fn z_bits(&self) -> &[u64] {
        &self.z
    }

    pub fn is_identity(&self) -> bool {
        self.x.iter().chain(&self.z).all(|&c| c == 0)
    }

    pub fn count(&self, p: Pauli) -> usize {
        (0..self.n).filter(|&q| self.get(q) == p).count()
    }

    fn y_count(&self) -> u32 {
        self.x.iter().zip(&self.z).map(|(x, z)| (x & z).count_ones()).sum()
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        let overlap: u32 = (0..self.x.len())
            .map(|c| (self.x[c] & other.z[c]).count_ones() + (self.z[c] & other.x[c]).count_ones())
            .sum();
        overlap.is_multiple_of(2)
    }

    /// `self * other = i^phase * word`.
    pub fn mul(&self, other: &Self) -> (u32, Self) {
        debug_assert_eq!(self.n, other.n);
        let x: Vec<u64> = self.x.iter().zip(&other.x).map(|(a, b)| a ^ b).collect();
        let z: Vec<u64> = self.z.iter().zip(&other.z).map(|(a, b)| a ^ b).collect();
        let cross: u32 = self.z.iter().zip(&other.x).map(|(a, b)| (a & b).count_ones()).sum();
        let word = Self { n: self.n, x, z };
        let phase = (self.y_count() + other.y_count() + 2 * cross + 4 - word.y_count() % 4) % 4;
        (phase, word)
    }
}

impl fmt::Display for PauliWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.n {
            write!(f, "{}", self.get(q).as_char())?;
        }
        Ok(())
    }
}

impl PauliWord {
    pub fn label(&self) -> String {
        format!("{self}")
    }
}

fn i_pow(phase: u32) -> Complex64 {
    match phase % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Linear combination of Pauli words with complex coefficients.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PauliSum {
    terms: BTreeMap<PauliWord, Complex64>,
}

impl PauliSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, word: PauliWord, coeff: Complex64) {
        *self.terms.entry(word).or_insert(Complex64::new(0.0, 0.0)) += coeff;
    }

    pub fn add_real(&mut self, word: PauliWord, coeff: f64) {
        self.add(word, Complex64::new(coeff, 0.0));
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), c * s)).collect(),
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add(w.clone(), *c);
        }
        out
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PauliWord, &Complex64)> {
        self.terms.iter()
    }

    pub fn coeff(&self, word: &PauliWord) -> Complex64 {
        self.terms.get(word).copied().unwrap_or_default()
    }

    /// `[self, other]`; only anticommuting word pairs contribute, each as
    /// `2 a b P Q`.
    pub fn commutator(&self, other: &Self) -> Self {
        let mut out = Self::new();
        for (p, a) in &self.terms {
            for (q, b) in &other.terms {
                if p.commutes_with(q) {
                    continue;
                }
                let (phase, w) = p.mul(q);
                out.add(w, a * b * i_pow(phase) * 2.0);
            }
        }
        out
    }

    /// `Tr(S^2) / 2^n`. Distinct words are trace-orthogonal and square to
    /// the identity, so this is the sum of squared coefficients.
    pub fn normalized_trace_of_square(&self) -> Complex64 {
        self.terms.values().map(|c| c * c).sum()
    }
}

impl serde::Serialize for PauliWord {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> core::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for PauliWord {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> core::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Self::parse(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let w = PauliWord::parse("IXYZ").unwrap();
        assert_eq!(w.get(0), Pauli::I);
        assert_eq!(w.get(2), Pauli::Y);
        assert_eq!(w.label(), "IXYZ");
        assert!(PauliWord::parse("IXQ").is_err());
    }

    #[test]
    fn single_qubit_products() {
        let x = PauliWord::parse("X").unwrap();
        let y = PauliWord::parse("Y").unwrap();
        let z = PauliWord::parse("Z").unwrap();
        // XY = iZ, YZ = iX, ZX = iY, YX = -iZ
        assert_eq!(x.mul(&y), (1, z.clone()));
        assert_eq!(y.mul(&z), (1, x.clone()));
        assert_eq!(z.mul(&x), (1, y.clone()));
        assert_eq!(y.mul(&x), (3, z.clone()));
        assert_eq!(y.mul(&y), (0, PauliWord::identity(1)));
        assert!(!x.commutes_with(&z));
        assert!(PauliWord::parse("XX")
            .unwrap()
            .commutes_with(&PauliWord::parse("ZZ").unwrap()));
    }

    #[test]
    fn wide_words_cross_chunks() {
        let mut a = PauliWord::identity(130);
        a.set(3, Pauli::X);
        a.set(100, Pauli::Z);
        let mut b = PauliWord::identity(130);
        b.set(100, Pauli::X);
        let (phase, w) = a.mul(&b);
        // (X_3 Z_100)(X_100) = X_3 (Z X)_100 = i X_3 Y_100
        assert_eq!(phase, 1);
        assert_eq!(w.get(100), Pauli::Y);
        assert_eq!(w.get(3), Pauli::X);
    }

    #[test]
    fn commutator_of_x_and_z() {
        let mut a = PauliSum::new();
        a.add_real(PauliWord::parse("X").unwrap(), 1.0);
        let mut b = PauliSum::new();
        b.add_real(PauliWord::parse("Z").unwrap(), 1.0);
        let c = a.commutator(&b);
        // [X, Z] = -2i Y
        assert_eq!(c.coeff(&PauliWord::parse("Y").unwrap()), Complex64::new(0.0, -2.0));
        assert_eq!(c.len(), 1);
    }
}
