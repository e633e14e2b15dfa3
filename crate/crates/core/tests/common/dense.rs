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

//! Dense-matrix reference implementations used as test oracles.
//!
//! Nothing here touches the crate's Pauli algebra or simulator: operators
//! are built from explicit 2x2 matrices and Kronecker products with qubit 0
//! as the least significant index bit.

#![allow(dead_code)]

use num_complex::Complex64;

pub type C = Complex64;

#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    pub dim: usize,
    pub data: Vec<C>,
}

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

impl Mat {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![c(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = c(1.0, 0.0);
        }
        m
    }

    pub fn at(&self, r: usize, col: usize) -> C {
        self.data[r * self.dim + col]
    }

    pub fn matmul(&self, o: &Mat) -> Mat {
        let d = self.dim;
        let mut out = Mat::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self.data[i * d + k];
                if a == c(0.0, 0.0) {
                    continue;
                }
                for j in 0..d {
                    out.data[i * d + j] += a * o.data[k * d + j];
                }
            }
        }
        out
    }

    pub fn add(&self, o: &Mat) -> Mat {
        Mat {
            dim: self.dim,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &Mat) -> Mat {
        Mat {
            dim: self.dim,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: C) -> Mat {
        Mat {
            dim: self.dim,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn commutator(&self, o: &Mat) -> Mat {
        self.matmul(o).sub(&o.matmul(self))
    }

    pub fn trace(&self) -> C {
        (0..self.dim).map(|i| self.at(i, i)).sum()
    }

    pub fn dagger(&self) -> Mat {
        let d = self.dim;
        let mut out = Mat::zeros(d);
        for i in 0..d {
            for j in 0..d {
                out.data[j * d + i] = self.data[i * d + j].conj();
            }
        }
        out
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    pub fn apply(&self, v: &[C]) -> Vec<C> {
        let d = self.dim;
        (0..d)
            .map(|i| (0..d).map(|j| self.data[i * d + j] * v[j]).sum())
            .collect()
    }

    pub fn kron(&self, o: &Mat) -> Mat {
        let (a, b) = (self.dim, o.dim);
        let d = a * b;
        let mut out = Mat::zeros(d);
        for i in 0..a {
            for j in 0..a {
                let s = self.data[i * a + j];
                for k in 0..b {
                    for l in 0..b {
                        out.data[(i * b + k) * d + (j * b + l)] = s * o.data[k * b + l];
                    }
                }
            }
        }
        out
    }

    /// Matrix exponential by scaling and squaring of a Taylor series.
    pub fn expm(&self) -> Mat {
        let norm = self.frobenius();
        let mut squarings = 0;
        let mut scale = 1.0;
        while norm * scale > 0.25 {
            scale *= 0.5;
            squarings += 1;
        }
        let a = self.scale(c(scale, 0.0));
        let mut term = Mat::identity(self.dim);
        let mut sum = Mat::identity(self.dim);
        for k in 1..30 {
            term = term.matmul(&a).scale(c(1.0 / k as f64, 0.0));
            sum = sum.add(&term);
        }
        for _ in 0..squarings {
            sum = sum.matmul(&sum);
        }
        sum
    }
}

pub fn single(letter: char) -> Mat {
    let z = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let data = match letter {
        'I' => vec![one, z, z, one],
        'X' => vec![z, one, one, z],
        'Y' => vec![z, c(0.0, -1.0), c(0.0, 1.0), z],
        'Z' => vec![one, z, z, -one],
        _ => panic!("bad letter {letter}"),
    };
    Mat { dim: 2, data }
}

/// Character `q` of `word` acts on qubit `q`.
pub fn pauli(word: &str) -> Mat {
    let letters: Vec<char> = word.chars().collect();
    let mut m = Mat::identity(1);
    for &ch in letters.iter().rev() {
        m = m.kron(&single(ch));
    }
    m
}

pub fn on_qubits(n: usize, letters: &[(usize, char)]) -> Mat {
    let mut w: Vec<char> = vec!['I'; n];
    for &(q, ch) in letters {
        w[q] = ch;
    }
    pauli(&w.into_iter().collect::<String>())
}

/// `sum_S c_S prod_{i in S} Z_i`.
pub fn z_poly(n: usize, terms: &[(Vec<usize>, f64)]) -> Mat {
    let mut m = Mat::zeros(1 << n);
    for (support, coeff) in terms {
        let letters: Vec<(usize, char)> = support.iter().map(|&q| (q, 'Z')).collect();
        m = m.add(&on_qubits(n, &letters).scale(c(*coeff, 0.0)));
    }
    m
}

/// `-sum_i X_i`.
pub fn mixer(n: usize) -> Mat {
    let mut m = Mat::zeros(1 << n);
    for q in 0..n {
        m = m.sub(&on_qubits(n, &[(q, 'X')]));
    }
    m
}

pub fn plus_state(n: usize) -> Vec<C> {
    let d = 1 << n;
    vec![c(1.0 / (d as f64).sqrt(), 0.0); d]
}

pub fn fidelity(a: &[C], b: &[C]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<C>().norm_sqr()
}

/// `<psi| M |psi>`.
pub fn expectation(m: &Mat, psi: &[C]) -> C {
    let mv = m.apply(psi);
    psi.iter().zip(&mv).map(|(a, b)| a.conj() * b).sum()
}

/// Schedule `lambda = sin^2(pi t / 2T)` written out independently.
pub fn sin2_schedule(t: f64, total: f64) -> (f64, f64, f64, f64) {
    let lam = (std::f64::consts::PI * t / (2.0 * total)).sin().powi(2);
    let lam_dot = std::f64::consts::PI / (2.0 * total) * (std::f64::consts::PI * t / total).sin();
    // (A, B, A', B')
    (1.0 - lam, lam, -lam_dot, lam_dot)
}

/// `(H_ad, dH_ad/dt)` at `t`.
pub fn adiabatic_pair(n: usize, terms: &[(Vec<usize>, f64)], t: f64, total: f64) -> (Mat, Mat) {
    let (a, b, ad, bd) = sin2_schedule(t, total);
    let hx = mixer(n);
    let hz = z_poly(n, terms);
    (
        hx.scale(c(a, 0.0)).add(&hz.scale(c(b, 0.0))),
        hx.scale(c(ad, 0.0)).add(&hz.scale(c(bd, 0.0))),
    )
}

/// Action-minimizing coefficient `Tr(K^2) / Tr([H, K]^2)`.
pub fn alpha(h: &Mat, dh: &Mat) -> f64 {
    let k = h.commutator(dh);
    let l = h.commutator(&k);
    (k.matmul(&k).trace() / l.matmul(&l).trace()).re
}

/// Brute-force minimizer of `Tr[(dH + alpha [H, K])^2]` over a grid, used
/// to confirm the closed-form ratio is the optimum.
pub fn alpha_by_scan(h: &Mat, dh: &Mat, lo: f64, hi: f64, steps: usize) -> f64 {
    let k = h.commutator(dh);
    let l = h.commutator(&k);
    let action = |a: f64| {
        let g = dh.add(&l.scale(c(a, 0.0)));
        g.matmul(&g).trace().re
    };
    let mut best = (lo, action(lo));
    for s in 1..=steps {
        let a = lo + (hi - lo) * s as f64 / steps as f64;
        let v = action(a);
        if v < best.1 {
            best = (a, v);
        }
    }
    best.0
}
