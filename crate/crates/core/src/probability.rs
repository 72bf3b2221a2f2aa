//! Entropy, spectra, probability matrices and their classical mutual
//! information.
//!
//! Every information value in the crate is computed in nats. [`LogBase`]
//! converts at the reporting boundary; all quantities handled here are
//! linear in the logarithm, so conversion is a single rescale.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::permutation::Permutation;
use crate::tolerance::{EPS, INPUT_SUM_GATE, SAMPLE_TIE_GAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum LogBase {
    #[default]
    #[serde(rename = "e")]
    E,
    #[serde(rename = "2")]
    Two,
}

impl LogBase {
    /// Rescales a value measured in nats into this base.
    pub fn from_nats(self, nats: f64) -> f64 {
        match self {
            LogBase::E => nats,
            LogBase::Two => nats / std::f64::consts::LN_2,
        }
    }

    pub fn entropy_term(self, x: f64) -> Result<f64> {
        entropy_term(x).map(|v| self.from_nats(v))
    }

    pub fn binary_entropy(self, x: f64) -> Result<f64> {
        binary_entropy(x).map(|v| self.from_nats(v))
    }

    pub fn label(self) -> &'static str {
        match self {
            LogBase::E => "e",
            LogBase::Two => "2",
        }
    }
}

/// `-x ln x` without domain checks; zero at the origin.
#[inline]
pub(crate) fn xlogx_neg(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.ln()
    }
}

fn check_probability(x: f64) -> Result<f64> {
    if !x.is_finite() || !(-EPS..=1.0 + EPS).contains(&x) {
        return Err(Error::Domain { value: x });
    }
    Ok(x.clamp(0.0, 1.0))
}

/// `H(x) = -x ln x`, with `H(0) = 0`.
pub fn entropy_term(x: f64) -> Result<f64> {
    check_probability(x).map(xlogx_neg)
}

/// `h(x) = H(x) + H(1 - x)`.
pub fn binary_entropy(x: f64) -> Result<f64> {
    let x = check_probability(x)?;
    Ok(xlogx_neg(x) + xlogx_neg(1.0 - x))
}

/// Shannon entropy of a probability vector, in nats.
pub fn shannon_entropy(p: &[f64]) -> f64 {
    p.iter().map(|&x| xlogx_neg(x)).sum()
}

/// A descending, unit-sum probability vector.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Spectrum {
    values: Vec<f64>,
}

impl Spectrum {
    /// Validates an already sorted spectrum.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidSpectrum(format!(
                "need at least two values, got {}",
                values.len()
            )));
        }
        for (k, &v) in values.iter().enumerate() {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidSpectrum(format!("entry {} is {v}", k + 1)));
            }
        }
        if let Some(k) = values.windows(2).position(|w| w[0] < w[1]) {
            return Err(Error::InvalidSpectrum(format!(
                "entries {} and {} are not in non-increasing order",
                k + 1,
                k + 2
            )));
        }
        let total: f64 = values.iter().sum();
        if (total - 1.0).abs() > EPS {
            return Err(Error::InvalidSpectrum(format!("sum is {total}, not 1")));
        }
        Ok(Spectrum { values })
    }

    /// Sorts descending, checks the sum against `gate`, then renormalises exactly.
    pub fn normalized(mut values: Vec<f64>, gate: f64) -> Result<Self> {
        if let Some(k) = values.iter().position(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidSpectrum(format!(
                "entry {} is {}",
                k + 1,
                values[k]
            )));
        }
        let total: f64 = values.iter().sum();
        if (total - 1.0).abs() > gate {
            return Err(Error::InvalidSpectrum(format!("sum is {total}, not 1")));
        }
        values.sort_by(|a, b| b.total_cmp(a));
        for v in &mut values {
            *v /= total;
        }
        // Absorb the last rounding residue into the largest entry.
        let residue = 1.0 - values.iter().sum::<f64>();
        values[0] += residue;
        Spectrum::new(values)
    }

    /// Parses a comma-separated list using the user-input gate.
    pub fn parse(text: &str) -> Result<Self> {
        let values = text
            .split(',')
            .map(|tok| {
                let t = tok.trim();
                t.parse::<f64>().map_err(|_| {
                    Error::InvalidInput(format!("cannot parse {t:?} as a probability"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::normalized(values, INPUT_SUM_GATE)
    }

    pub fn uniform(dim: usize) -> Result<Self> {
        Spectrum::new(vec![1.0 / dim as f64; dim])
            .or_else(|_| Spectrum::normalized(vec![1.0 / dim as f64; dim], INPUT_SUM_GATE))
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn entropy(&self) -> f64 {
        shannon_entropy(&self.values)
    }

    /// True when every adjacent pair differs by more than `gap`.
    pub fn is_strictly_ordered(&self, gap: f64) -> bool {
        self.values.windows(2).all(|w| w[0] - w[1] > gap) && self.values[self.dim() - 1] > gap
    }
}

/// Row and column sums of a probability matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Marginals {
    pub rows: Vec<f64>,
    pub cols: Vec<f64>,
}

/// An `m x n` arrangement of probabilities, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbMatrix {
    m: usize,
    n: usize,
    entries: Vec<f64>,
}

impl ProbMatrix {
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if m == 0 || n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::ShapeMismatch("ragged or empty rows".into()));
        }
        Self::from_flat(m, n, rows.concat())
    }

    pub fn from_flat(m: usize, n: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != m * n {
            return Err(Error::DimensionMismatch {
                expected: m * n,
                actual: entries.len(),
            });
        }
        if let Some(&v) = entries.iter().find(|v| !v.is_finite() || **v < -EPS) {
            return Err(Error::Domain { value: v });
        }
        let total: f64 = entries.iter().sum();
        if (total - 1.0).abs() > EPS {
            return Err(Error::InvalidInput(format!(
                "matrix entries sum to {total}"
            )));
        }
        Ok(ProbMatrix { m, n, entries })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.n).map(<[f64]>::to_vec).collect()
    }

    pub fn transpose(&self) -> ProbMatrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.n {
            for i in 0..self.m {
                entries.push(self.get(i, j));
            }
        }
        ProbMatrix {
            m: self.n,
            n: self.m,
            entries,
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.n {
            self.entries.swap(a * self.n + j, b * self.n + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        for i in 0..self.m {
            self.entries.swap(i * self.n + a, i * self.n + b);
        }
    }

    /// Swaps the entries at two flat (row-major) positions.
    pub fn swap_entries(&mut self, p: usize, q: usize) {
        self.entries.swap(p, q);
    }
}

/// Places `s.values[perm(k)]` at flat position `k`.
pub fn arrange(s: &Spectrum, perm: &Permutation, m: usize, n: usize) -> Result<ProbMatrix> {
    if s.dim() != m * n {
        return Err(Error::DimensionMismatch {
            expected: m * n,
            actual: s.dim(),
        });
    }
    if perm.len() != m * n {
        return Err(Error::InvalidPermutation {
            len: m * n,
            detail: format!("permutation has degree {}", perm.len()),
        });
    }
    let entries = (0..m * n).map(|k| s.values[perm.apply(k)]).collect();
    Ok(ProbMatrix { m, n, entries })
}

pub fn marginals(p: &ProbMatrix) -> Marginals {
    let mut rows = vec![0.0; p.m];
    let mut cols = vec![0.0; p.n];
    for (i, row) in rows.iter_mut().enumerate() {
        for (j, col) in cols.iter_mut().enumerate() {
            let v = p.get(i, j);
            *row += v;
            *col += v;
        }
    }
    Marginals { rows, cols }
}

/// Classical mutual information `ΣH(r_i) + ΣH(c_j) - ΣH(p_ij)`, in nats.
pub fn cmi(p: &ProbMatrix) -> f64 {
    let mg = marginals(p);
    shannon_entropy(&mg.rows) + shannon_entropy(&mg.cols) - shannon_entropy(&p.entries)
}

/// Independent random stream for sub-task `index` of a run seeded with `seed`.
pub fn substream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Draws a point uniformly from the probability simplex and sorts it
/// descending. Draws containing adjacent entries closer than
/// [`SAMPLE_TIE_GAP`] are discarded and redrawn from the same stream.
pub fn sample_spectrum<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<Spectrum> {
    if dim < 2 {
        return Err(Error::InvalidInput(format!(
            "spectrum dimension must be at least 2, got {dim}"
        )));
    }
    let mut values = vec![0.0; dim];
    loop {
        let mut total = 0.0;
        for v in values.iter_mut() {
            let x: f64 = Exp1.sample(rng);
            *v = x;
            total += x;
        }
        for v in values.iter_mut() {
            *v /= total;
        }
        values.sort_by(|a, b| b.total_cmp(a));
        let residue = 1.0 - values.iter().sum::<f64>();
        values[0] += residue;
        let tied = values.windows(2).any(|w| w[0] - w[1] < SAMPLE_TIE_GAP)
            || values[dim - 1] < SAMPLE_TIE_GAP;
        if !tied {
            return Ok(Spectrum { values });
        }
    }
}
