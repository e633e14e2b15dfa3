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

//! Histogram mutual information with equal-frequency bins.
//!
//! Entropies are computed from the sorted multiset of nonzero cell counts,
//! so `I(a, b)` and `I(b, a)` are bit-identical: transposing the joint
//! histogram does not change that multiset. All logarithms are natural.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::{Error, Result};

/// `min(16, floor(sqrt(n_samples)))`, never below 2.
pub fn default_bins(n_samples: usize) -> usize {
    let root = libm::floor(libm::sqrt(n_samples as f64)) as usize;
    root.clamp(2, 16)
}

/// Equal-frequency bin labels for `values`.
///
/// Cut points sit at the sorted values of ranks `floor(k n / bins)` for
/// `k = 1..bins`; a value's label is the number of cut points it reaches.
/// Tied values always share a label, so a constant column lands in one bin.
pub fn quantile_bins(values: &[f64], bins: usize) -> Result<Vec<usize>> {
    check_bins(values.len(), bins)?;
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let n = values.len();
    let cuts: Vec<f64> = (1..bins).map(|k| sorted[k * n / bins]).collect();
    Ok(values.iter().map(|v| cuts.partition_point(|c| c <= v)).collect())
}

fn check_bins(n: usize, bins: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 samples, got {n}")));
    }
    if bins < 2 {
        return Err(Error::InvalidArgument(format!("bins must be at least 2, got {bins}")));
    }
    if bins > n {
        return Err(Error::TooManyBins { bins, samples: n });
    }
    Ok(())
}

fn entropy_of_counts(mut counts: Vec<usize>, total: usize) -> f64 {
    counts.retain(|&c| c > 0);
    counts.sort_unstable();
    let total = total as f64;
    let h: f64 = counts
        .iter()
        .map(|&c| {
            let p = c as f64 / total;
            -p * libm::log(p)
        })
        .sum();
    h.max(0.0)
}

fn marginal_entropy(labels: &[usize]) -> f64 {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &l in labels {
        *counts.entry(l).or_default() += 1;
    }
    entropy_of_counts(counts.into_values().collect(), labels.len())
}

fn joint_entropy(a: &[usize], b: &[usize]) -> f64 {
    let mut counts: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (&x, &y) in a.iter().zip(b) {
        *counts.entry((x, y)).or_default() += 1;
    }
    entropy_of_counts(counts.into_values().collect(), a.len())
}

/// Mutual information of two already-discretized columns,
/// `H(a) + H(b) - H(a, b)`, clamped at zero.
pub fn discrete_mutual_info(a: &[usize], b: &[usize]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    Ok(discrete_parts(a, b).0)
}

/// Returns `(I, H(a), H(b))`.
fn discrete_parts(a: &[usize], b: &[usize]) -> (f64, f64, f64) {
    let ha = marginal_entropy(a);
    let hb = marginal_entropy(b);
    let hab = joint_entropy(a, b);
    ((ha + hb - hab).max(0.0), ha, hb)
}

fn nmi_from_parts(i: f64, ha: f64, hb: f64) -> f64 {
    if ha <= 0.0 || hb <= 0.0 {
        return 0.0;
    }
    (i / libm::sqrt(ha * hb)).clamp(0.0, 1.0)
}

/// Discretized-column NMI: `I / sqrt(H(a) H(b))`, 0 when either entropy is 0.
pub fn discrete_normalized_mi(a: &[usize], b: &[usize]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    let (i, ha, hb) = discrete_parts(a, b);
    Ok(nmi_from_parts(i, ha, hb))
}

fn binned_pair(a: &[f64], b: &[f64], bins: usize) -> Result<(Vec<usize>, Vec<usize>)> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    Ok((quantile_bins(a, bins)?, quantile_bins(b, bins)?))
}

/// Mutual information in nats between two real columns under
/// equal-frequency binning.
pub fn mutual_info(a: &[f64], b: &[f64], bins: usize) -> Result<f64> {
    let (ba, bb) = binned_pair(a, b, bins)?;
    Ok(discrete_parts(&ba, &bb).0)
}

/// `I(a, b) / sqrt(H(a) H(b))` in `[0, 1]`.
pub fn normalized_mi(a: &[f64], b: &[f64], bins: usize) -> Result<f64> {
    let (ba, bb) = binned_pair(a, b, bins)?;
    let (i, ha, hb) = discrete_parts(&ba, &bb);
    Ok(nmi_from_parts(i, ha, hb))
}

/// Symmetric NMI matrix with unit diagonal, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MIMatrix {
    pub n: usize,
    pub bins: usize,
    pub values: Vec<f64>,
}

impl MIMatrix {
    /// Builds a matrix from a full row-major table, checking the invariants.
    pub fn from_values(n: usize, bins: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != n * n {
            return Err(Error::LengthMismatch {
                expected: n * n,
                got: values.len(),
            });
        }
        for a in 0..n {
            for b in 0..n {
                let v = values[a * n + b];
                if !(0.0..=1.0).contains(&v) || v != values[b * n + a] {
                    return Err(Error::InvalidArgument(format!(
                        "entry ({a}, {b}) = {v} breaks symmetry or range"
                    )));
                }
            }
            if values[a * n + a] != 1.0 {
                return Err(Error::InvalidArgument(format!("diagonal entry {a} is not 1")));
            }
        }
        Ok(Self { n, bins, values })
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.values[a * self.n + b]
    }

    /// Copy restricted to `features`, reindexed to `0..features.len()`.
    pub fn submatrix(&self, features: &[usize]) -> Self {
        let m = features.len();
        let mut values = Vec::with_capacity(m * m);
        for &a in features {
            for &b in features {
                values.push(self.get(a, b));
            }
        }
        Self {
            n: m,
            bins: self.bins,
            values,
        }
    }
}

/// Discretizes every column once over `rows`, then fills the pairwise NMI
/// table. Each pair is an independent pure computation.
pub fn mi_matrix(ds: &Dataset, rows: &[usize], bins: usize) -> Result<MIMatrix> {
    let binned = binned_columns(ds, rows, bins)?;
    let n = binned.len();
    let mut values = alloc::vec![0.0; n * n];
    for a in 0..n {
        values[a * n + a] = 1.0;
        for b in (a + 1)..n {
            let v = pair_nmi(&binned, a, b);
            values[a * n + b] = v;
            values[b * n + a] = v;
        }
    }
    Ok(MIMatrix { n, bins, values })
}

/// Equal-frequency labels for every column of `ds` over `rows`.
pub fn binned_columns(ds: &Dataset, rows: &[usize], bins: usize) -> Result<Vec<Vec<usize>>> {
    (0..ds.n_features())
        .map(|c| quantile_bins(&ds.column(c, rows), bins))
        .collect()
}

/// NMI of columns `a` and `b` from [`binned_columns`] output.
pub fn pair_nmi(binned: &[Vec<usize>], a: usize, b: usize) -> f64 {
    let (i, ha, hb) = discrete_parts(&binned[a], &binned[b]);
    nmi_from_parts(i, ha, hb)
}

/// `c_S`: mean of the pairwise matrix entries over all unordered pairs in `S`.
pub fn hyper_coeff(subset: &[usize], m: &MIMatrix) -> Result<f64> {
    if subset.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "subset needs at least 2 indices, got {}",
            subset.len()
        )));
    }
    if let Some(&bad) = subset.iter().find(|&&i| i >= m.n) {
        return Err(Error::InvalidArgument(format!("feature index {bad} out of range")));
    }
    Ok(pair_mean(subset, m))
}

pub(crate) fn pair_mean(subset: &[usize], m: &MIMatrix) -> f64 {
    let mut sorted: Vec<usize> = subset.to_vec();
    sorted.sort_unstable();
    let mut sum = 0.0;
    let mut pairs = 0usize;
    for (k, &a) in sorted.iter().enumerate() {
        for &b in &sorted[k + 1..] {
            sum += m.get(a, b);
            pairs += 1;
        }
    }
    sum / pairs as f64
}

/// `c_S` coefficients of one interaction order, keyed by sorted feature
/// subsets.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct HyperCoeffs {
    pub order: usize,
    pub coeffs: BTreeMap<Vec<usize>, f64>,
}

impl HyperCoeffs {
    pub fn new(order: usize) -> Self {
        Self {
            order,
            coeffs: BTreeMap::new(),
        }
    }

    /// Coefficients for every subset in `subsets` (each of size `order`).
    pub fn from_subsets<'a, I>(order: usize, subsets: I, m: &MIMatrix) -> Result<Self>
    where
        I: IntoIterator<Item = &'a [usize]>,
    {
        let mut out = Self::new(order);
        for s in subsets {
            if s.len() != order {
                return Err(Error::InvalidArgument(format!(
                    "subset {s:?} does not have order {order}"
                )));
            }
            let c = hyper_coeff(s, m)?;
            out.insert(s, c);
        }
        Ok(out)
    }

    pub fn insert(&mut self, subset: &[usize], value: f64) {
        let mut key = subset.to_vec();
        key.sort_unstable();
        self.coeffs.insert(key, value);
    }

    pub fn get(&self, subset: &[usize]) -> Option<f64> {
        let mut key = subset.to_vec();
        key.sort_unstable();
        self.coeffs.get(&key).copied()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }
}

/// Ranks features by `I(feature, label)` over `rows` and returns the top
/// `target_count` indices, best first. Ties go to the lower column index.
pub fn select_features(ds: &Dataset, rows: &[usize], target_count: usize, bins: usize) -> Result<Vec<usize>> {
    if target_count == 0 {
        return Err(Error::InvalidArgument("target_count must be positive".into()));
    }
    if target_count > ds.n_features() {
        return Err(Error::InvalidArgument(format!(
            "target_count {target_count} exceeds {} features",
            ds.n_features()
        )));
    }
    let labels: Vec<usize> = ds.labels_at(rows).into_iter().map(usize::from).collect();
    let mut scored: Vec<(usize, f64)> = (0..ds.n_features())
        .map(|c| {
            let binned = quantile_bins(&ds.column(c, rows), bins)?;
            Ok((c, discrete_parts(&binned, &labels).0))
        })
        .collect::<Result<_>>()?;
    scored.sort_by(|x, y| y.1.total_cmp(&x.1).then(x.0.cmp(&y.0)));
    Ok(scored.into_iter().take(target_count).map(|(c, _)| c).collect())
}
