//! Brute-force extrema over all classes, Monte Carlo censuses of which
//! classes are realised as extrema, and the certificate chain behind the
//! unique `2 x 3` maximum.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classes::{standard_form_sets, varpi, ClassTable};
use crate::error::{Error, Result};
use crate::order::{
    symbolic_matrix_majorises, titrate_check, Certificate, RelationKind, RelationVerdict,
    TranspositionContext,
};
use crate::probability::{sample_spectrum, substream, xlogx_neg, LogBase, Spectrum};
use crate::symbolic::Arrangement;
use crate::tolerance::EPS;

/// Samples per census chunk; each chunk draws from its own random stream.
pub const CHUNK_SIZE: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtremaReport {
    pub m: usize,
    pub n: usize,
    pub spectrum: Vec<f64>,
    pub log_base: LogBase,
    pub argmax_classes: Vec<usize>,
    pub argmin_classes: Vec<usize>,
    pub max_value: f64,
    pub min_value: f64,
}

impl ExtremaReport {
    /// The same report with values expressed in `base`.
    pub fn in_base(mut self, base: LogBase) -> Self {
        let nats = |v: f64, from: LogBase| match from {
            LogBase::E => v,
            LogBase::Two => v * std::f64::consts::LN_2,
        };
        self.max_value = base.from_nats(nats(self.max_value, self.log_base));
        self.min_value = base.from_nats(nats(self.min_value, self.log_base));
        self.log_base = base;
        self
    }
}

/// Evaluates every class of a table at once from a lookup of subset-sum
/// entropies: a class value is the sum of its `m + n` marginal terms.
#[derive(Debug, Clone)]
pub struct ClassEvaluator {
    dim: usize,
    terms: usize,
    masks: Vec<u16>,
    index: Vec<u16>,
}

impl ClassEvaluator {
    pub fn new(table: &ClassTable) -> Self {
        let (m, n) = (table.m(), table.n());
        let mut slot: HashMap<u16, u16> = HashMap::new();
        let mut masks = Vec::new();
        let mut index = Vec::with_capacity(table.len() * (m + n));
        for c in table.classes() {
            let a = &c.canonical;
            let ms = (0..m)
                .map(|i| a.row_mask(i))
                .chain((0..n).map(|j| a.col_mask(j)));
            for mask in ms {
                let k = *slot.entry(mask).or_insert_with(|| {
                    masks.push(mask);
                    (masks.len() - 1) as u16
                });
                index.push(k);
            }
        }
        ClassEvaluator {
            dim: m * n,
            terms: m + n,
            masks,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.index.len() / self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    /// Writes the CMI of every class (in nats, class `k + 1` at slot `k`).
    pub fn evaluate(&self, spectrum: &[f64], scratch: &mut Vec<f64>, out: &mut Vec<f64>) {
        debug_assert_eq!(spectrum.len(), self.dim);
        scratch.clear();
        scratch.extend(self.masks.iter().map(|&mask| {
            let mut s = 0.0;
            let mut bits = mask;
            while bits != 0 {
                s += spectrum[bits.trailing_zeros() as usize];
                bits &= bits - 1;
            }
            xlogx_neg(s)
        }));
        let base: f64 = spectrum.iter().map(|&x| xlogx_neg(x)).sum();
        out.clear();
        out.extend(
            self.index
                .chunks_exact(self.terms)
                .map(|row| row.iter().map(|&k| scratch[k as usize]).sum::<f64>() - base),
        );
    }
}

/// Indices (1-based) within [`EPS`] of the maximum and of the minimum.
fn extremal_sets(values: &[f64]) -> (f64, f64, Vec<usize>, Vec<usize>) {
    let (mut hi, mut lo) = (f64::NEG_INFINITY, f64::INFINITY);
    for &v in values {
        hi = hi.max(v);
        lo = lo.min(v);
    }
    let mut argmax = Vec::new();
    let mut argmin = Vec::new();
    for (k, &v) in values.iter().enumerate() {
        if v >= hi - EPS {
            argmax.push(k + 1);
        }
        if v <= lo + EPS {
            argmin.push(k + 1);
        }
    }
    (hi, lo, argmax, argmin)
}

/// Evaluates the CMI of every class at `s` and reports the extremal classes.
pub fn brute_force_extrema(table: &ClassTable, s: &Spectrum) -> Result<ExtremaReport> {
    let dim = table.m() * table.n();
    if s.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: s.dim(),
        });
    }
    let eval = ClassEvaluator::new(table);
    let (mut scratch, mut values) = (Vec::new(), Vec::new());
    eval.evaluate(s.values(), &mut scratch, &mut values);
    let (max_value, min_value, argmax_classes, argmin_classes) = extremal_sets(&values);
    Ok(ExtremaReport {
        m: table.m(),
        n: table.n(),
        spectrum: s.values().to_vec(),
        log_base: LogBase::E,
        argmax_classes,
        argmin_classes,
        max_value,
        min_value,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusConfig {
    pub m: usize,
    pub n: usize,
    pub samples: u64,
    pub seed: u64,
    /// Size of the worker pool (results do not depend on it).
    pub workers: usize,
    /// Resumable progress file, rewritten after every batch of chunks.
    pub checkpoint: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassHits {
    pub class: usize,
    pub hits: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvergencePoint {
    pub samples: u64,
    pub n_max_classes: usize,
    pub n_min_classes: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusReport {
    pub m: usize,
    pub n: usize,
    pub samples: u64,
    pub seed: u64,
    pub workers: usize,
    pub chunk_size: u64,
    /// Classes realised as a maximum, with the number of samples where they were.
    pub realized_max_classes: Vec<ClassHits>,
    pub realized_min_classes: Vec<ClassHits>,
    /// Samples in which more than one class was within tolerance of the extremum.
    pub max_tie_events: u64,
    pub min_tie_events: u64,
    pub convergence: Vec<ConvergencePoint>,
}

impl CensusReport {
    pub fn max_classes(&self) -> Vec<usize> {
        self.realized_max_classes.iter().map(|h| h.class).collect()
    }

    pub fn min_classes(&self) -> Vec<usize> {
        self.realized_min_classes.iter().map(|h| h.class).collect()
    }

    /// Convergence curve as CSV with header `samples,n_max_classes,n_min_classes`.
    pub fn convergence_csv(&self) -> String {
        let mut out = String::from("samples,n_max_classes,n_min_classes\n");
        for p in &self.convergence {
            out.push_str(&format!(
                "{},{},{}\n",
                p.samples, p.n_max_classes, p.n_min_classes
            ));
        }
        out
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
struct Tally {
    max_hits: BTreeMap<usize, u64>,
    min_hits: BTreeMap<usize, u64>,
    max_ties: u64,
    min_ties: u64,
}

impl Tally {
    fn absorb(&mut self, other: &Tally) {
        for (&k, &v) in &other.max_hits {
            *self.max_hits.entry(k).or_default() += v;
        }
        for (&k, &v) in &other.min_hits {
            *self.min_hits.entry(k).or_default() += v;
        }
        self.max_ties += other.max_ties;
        self.min_ties += other.min_ties;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Checkpoint {
    version: u32,
    m: usize,
    n: usize,
    samples: u64,
    seed: u64,
    chunk_size: u64,
    chunks_done: u64,
    tally: Tally,
    convergence: Vec<ConvergencePoint>,
}

const CHECKPOINT_VERSION: u32 = 1;

fn run_chunk(
    eval: &ClassEvaluator,
    dim: usize,
    seed: u64,
    chunk: u64,
    count: u64,
) -> Result<Tally> {
    let mut rng = substream(seed, chunk);
    let mut tally = Tally::default();
    let (mut scratch, mut values) = (Vec::new(), Vec::new());
    for _ in 0..count {
        let s = sample_spectrum(dim, &mut rng)?;
        eval.evaluate(s.values(), &mut scratch, &mut values);
        let (_, _, argmax, argmin) = extremal_sets(&values);
        if argmax.len() > 1 {
            tally.max_ties += 1;
        }
        if argmin.len() > 1 {
            tally.min_ties += 1;
        }
        for k in argmax {
            *tally.max_hits.entry(k).or_default() += 1;
        }
        for k in argmin {
            *tally.min_hits.entry(k).or_default() += 1;
        }
    }
    Ok(tally)
}

fn load_checkpoint(path: &Path, cfg: &CensusConfig) -> Result<Option<Checkpoint>> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let cp: Checkpoint = serde_json::from_str(&text)
        .map_err(|e| Error::CheckpointMismatch(format!("unreadable checkpoint: {e}")))?;
    let expected = (
        CHECKPOINT_VERSION,
        cfg.m,
        cfg.n,
        cfg.samples,
        cfg.seed,
        CHUNK_SIZE,
    );
    let found = (cp.version, cp.m, cp.n, cp.samples, cp.seed, cp.chunk_size);
    if expected != found {
        return Err(Error::CheckpointMismatch(format!(
            "checkpoint is for (version, m, n, samples, seed, chunk) = {found:?}, run is {expected:?}"
        )));
    }
    Ok(Some(cp))
}

fn save_checkpoint(path: &Path, cp: &Checkpoint) -> Result<()> {
    let tmp = path.with_extension("tmp");
    let text = serde_json::to_string(cp).map_err(|e| Error::Io(e.to_string()))?;
    fs::write(&tmp, text)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

fn hits(map: &BTreeMap<usize, u64>) -> Vec<ClassHits> {
    map.iter()
        .map(|(&class, &hits)| ClassHits { class, hits })
        .collect()
}

/// Samples `cfg.samples` spectra and records which classes are extremal.
///
/// Chunk `k` of [`CHUNK_SIZE`] samples is drawn from stream `k` of the
/// seed, and chunks are folded in index order, so the report is the same
/// for every worker count.
pub fn census(table: &ClassTable, cfg: &CensusConfig) -> Result<CensusReport> {
    if cfg.samples == 0 {
        return Err(Error::InvalidInput(
            "census needs at least one sample".into(),
        ));
    }
    if (table.m(), table.n()) != (cfg.m, cfg.n) {
        return Err(Error::ShapeMismatch(
            "class table does not match the census shape".into(),
        ));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers.max(1))
        .build()
        .map_err(|e| Error::InvalidInput(format!("worker pool: {e}")))?;
    let eval = ClassEvaluator::new(table);
    let dim = cfg.m * cfg.n;
    let chunks = cfg.samples.div_ceil(CHUNK_SIZE);
    let mut cp = match &cfg.checkpoint {
        Some(p) => load_checkpoint(p, cfg)?,
        None => None,
    }
    .unwrap_or(Checkpoint {
        version: CHECKPOINT_VERSION,
        m: cfg.m,
        n: cfg.n,
        samples: cfg.samples,
        seed: cfg.seed,
        chunk_size: CHUNK_SIZE,
        chunks_done: 0,
        tally: Tally::default(),
        convergence: Vec::new(),
    });
    let batch = 4 * cfg.workers.max(1) as u64;
    while cp.chunks_done < chunks {
        let end = (cp.chunks_done + batch).min(chunks);
        let results: Vec<Result<Tally>> = pool.install(|| {
            (cp.chunks_done..end)
                .into_par_iter()
                .map(|k| {
                    let count = CHUNK_SIZE.min(cfg.samples - k * CHUNK_SIZE);
                    run_chunk(&eval, dim, cfg.seed, k, count)
                })
                .collect()
        });
        for (k, r) in (cp.chunks_done..end).zip(results) {
            cp.tally.absorb(&r?);
            cp.convergence.push(ConvergencePoint {
                samples: (k * CHUNK_SIZE + CHUNK_SIZE).min(cfg.samples),
                n_max_classes: cp.tally.max_hits.len(),
                n_min_classes: cp.tally.min_hits.len(),
            });
        }
        cp.chunks_done = end;
        if let Some(p) = &cfg.checkpoint {
            save_checkpoint(p, &cp)?;
        }
    }
    Ok(CensusReport {
        m: cfg.m,
        n: cfg.n,
        samples: cfg.samples,
        seed: cfg.seed,
        workers: cfg.workers,
        chunk_size: CHUNK_SIZE,
        realized_max_classes: hits(&cp.tally.max_hits),
        realized_min_classes: hits(&cp.tally.min_hits),
        max_tie_events: cp.tally.max_ties,
        min_tie_events: cp.tally.min_ties,
        convergence: cp.convergence,
    })
}

/// One link in the argument that class 48 is the unique maximum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainStep {
    pub name: String,
    pub from: usize,
    pub to: usize,
    pub verdict: RelationVerdict,
}

fn transposition_step(
    table: &ClassTable,
    name: &str,
    rep: &str,
    p: usize,
    q: usize,
) -> Result<ChainStep> {
    let a = Arrangement::parse(rep)?;
    let ctx = TranspositionContext::symbolic(&a, p, q)?;
    let mut verdict = titrate_check(&ctx)?;
    let image = a.swapped(p, q);
    let to = table.classify(&image)?.index;
    verdict.certificate.push(
        "image",
        format!("{image} in class {to} ({})", table.get(to)?.canonical),
    );
    Ok(ChainStep {
        name: name.into(),
        from: table.classify(&a)?.index,
        to,
        verdict,
    })
}

fn majorisation_step(
    table: &ClassTable,
    name: &str,
    a: &Arrangement,
    b: &Arrangement,
) -> Result<ChainStep> {
    let verdict = match symbolic_matrix_majorises(a, b) {
        Some(certificate) => RelationVerdict {
            kind: RelationKind::ProvenForward,
            certificate,
        },
        None => {
            let mut c = Certificate::new();
            c.push("majorisation", format!("{a} > {b} not provable"));
            RelationVerdict::inconclusive(c)
        }
    };
    Ok(ChainStep {
        name: name.into(),
        from: table.classify(a)?.index,
        to: table.classify(b)?.index,
        verdict,
    })
}

fn pos(i: usize, j: usize) -> usize {
    (i - 1) * 3 + (j - 1)
}

/// The four transposition certificates `Y₁ ⊳ Y₂ ⊳ X`, `Y₄ ⊳ Y₃ ⊳ X`, then
/// the majorisation reductions: every rows-sorted non-standard class is
/// majorised by a standard one, each hexagon's major element majorises its
/// members, and every standard-form class and its `ϖ` image majorise `X`.
pub fn verify_theorem_chain(table: &ClassTable) -> Result<Vec<ChainStep>> {
    if (table.m(), table.n()) != (2, 3) {
        return Err(Error::ShapeMismatch(
            "the chain is stated for 2x3 classes".into(),
        ));
    }
    let mut steps = vec![
        transposition_step(table, "(i) Y1 |> Y2", "abf|edc", pos(1, 2), pos(2, 3))?,
        transposition_step(table, "(ii) Y2 |> X", "acf|edb", pos(1, 1), pos(2, 3))?,
        transposition_step(table, "(iii) Y4 |> Y3", "aef|dcb", pos(2, 1), pos(1, 2))?,
        transposition_step(table, "(iv) Y3 |> X", "adf|ecb", pos(2, 1), pos(1, 3))?,
    ];
    let forms = standard_form_sets(table)?;
    let x = table.get(48)?.canonical.clone();
    for &k in &forms.minzoneup {
        let b = table.get(k)?.canonical.clone();
        let witness = forms
            .minz
            .iter()
            .map(|&j| table.get(j).map(|c| c.canonical.clone()))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .find(|a| symbolic_matrix_majorises(a, &b).is_some())
            .unwrap_or_else(|| table.get(forms.minz[0]).unwrap().canonical.clone());
        steps.push(majorisation_step(
            table,
            &format!("minima: {k} is majorised"),
            &witness,
            &b,
        )?);
    }
    for h in crate::classes::honeycomb(table)? {
        let major = table.get(h.major)?.canonical.clone();
        for &k in h.members.iter().filter(|&&k| k != h.major) {
            let b = table.get(k)?.canonical.clone();
            steps.push(majorisation_step(
                table,
                &format!("hexagon {}", h.major),
                &major,
                &b,
            )?);
        }
    }
    for &k in &forms.minz {
        let a = table.get(k)?.canonical.clone();
        steps.push(majorisation_step(
            table,
            "maxima: standard form > X",
            &a,
            &x,
        )?);
        steps.push(majorisation_step(
            table,
            "maxima: varpi(standard form) > X",
            &varpi(&a)?,
            &x,
        )?);
    }
    Ok(steps)
}
