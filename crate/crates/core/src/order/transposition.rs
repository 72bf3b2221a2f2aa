//! A single transposition `τ` exchanging two entries `α > β` of a matrix,
//! with the row/column sums it touches.

use crate::error::{Error, Result};
use crate::probability::{ProbMatrix, Spectrum};
use crate::symbolic::{symbol_char, Arrangement, SymbolicSum};

use super::{identric_unchecked, prove_le, Certificate, RelationKind, RelationVerdict};

/// The sums of `P` and `P^τ` that depend on the two exchanged entries.
///
/// When `α` and `β` share a row the row sums do not move and the `r_*`
/// fields hold that unchanged sum (and likewise for columns).
#[derive(Debug, Clone, PartialEq)]
pub struct TranspositionContext<T> {
    pub alpha: T,
    pub beta: T,
    /// Flat positions of `α` and `β` in `P`.
    pub alpha_pos: usize,
    pub beta_pos: usize,
    pub r_alpha: T,
    pub r_beta: T,
    pub c_alpha: T,
    pub c_beta: T,
    pub r_alpha_tau: T,
    pub r_beta_tau: T,
    pub c_alpha_tau: T,
    pub c_beta_tau: T,
    pub same_row: bool,
    pub same_col: bool,
}

fn check_positions(len: usize, p: usize, q: usize) -> Result<()> {
    if p >= len || q >= len || p == q {
        return Err(Error::InvalidInput(format!(
            "transposition needs two distinct positions below {len}, got {p} and {q}"
        )));
    }
    Ok(())
}

impl TranspositionContext<SymbolicSum> {
    /// Context for exchanging the symbols at flat positions `p` and `q`;
    /// `α` is whichever of the two ranks higher in the alphabet.
    pub fn symbolic(arr: &Arrangement, p: usize, q: usize) -> Result<Self> {
        check_positions(arr.cells().len(), p, q)?;
        let (pa, pb) = if arr.cells()[p] < arr.cells()[q] {
            (p, q)
        } else {
            (q, p)
        };
        let (a, b) = (arr.cells()[pa], arr.cells()[pb]);
        let n = arr.n();
        let (ra, ca, rb, cb) = (pa / n, pa % n, pb / n, pb % n);
        let (same_row, same_col) = (ra == rb, ca == cb);
        let r_alpha = arr.row_sum(ra);
        let r_beta = arr.row_sum(rb);
        let c_alpha = arr.col_sum(ca);
        let c_beta = arr.col_sum(cb);
        let swap_in = |s: &SymbolicSum, out, inn| s.minus_symbol(out).with_symbol(inn);
        let (r_alpha_tau, r_beta_tau) = if same_row {
            (r_alpha.clone(), r_beta.clone())
        } else {
            (swap_in(&r_alpha, a, b), swap_in(&r_beta, b, a))
        };
        let (c_alpha_tau, c_beta_tau) = if same_col {
            (c_alpha.clone(), c_beta.clone())
        } else {
            (swap_in(&c_alpha, a, b), swap_in(&c_beta, b, a))
        };
        Ok(TranspositionContext {
            alpha: SymbolicSum::single(a),
            beta: SymbolicSum::single(b),
            alpha_pos: pa,
            beta_pos: pb,
            r_alpha,
            r_beta,
            c_alpha,
            c_beta,
            r_alpha_tau,
            r_beta_tau,
            c_alpha_tau,
            c_beta_tau,
            same_row,
            same_col,
        })
    }

    /// Substitutes a spectrum for the symbols.
    pub fn instantiate(&self, s: &Spectrum) -> TranspositionContext<f64> {
        let v = s.values();
        let e = |x: &SymbolicSum| x.evaluate(v);
        TranspositionContext {
            alpha: e(&self.alpha),
            beta: e(&self.beta),
            alpha_pos: self.alpha_pos,
            beta_pos: self.beta_pos,
            r_alpha: e(&self.r_alpha),
            r_beta: e(&self.r_beta),
            c_alpha: e(&self.c_alpha),
            c_beta: e(&self.c_beta),
            r_alpha_tau: e(&self.r_alpha_tau),
            r_beta_tau: e(&self.r_beta_tau),
            c_alpha_tau: e(&self.c_alpha_tau),
            c_beta_tau: e(&self.c_beta_tau),
            same_row: self.same_row,
            same_col: self.same_col,
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidInput(format!("malformed context: {what}")));
        if self.alpha.len() != 1 || self.beta.len() != 1 {
            return bad("alpha and beta must be single symbols");
        }
        let (a, b) = (self.alpha.terms()[0], self.beta.terms()[0]);
        if a > b {
            return bad("alpha must rank above beta");
        }
        if !self.r_alpha.terms().contains(&a) || !self.c_alpha.terms().contains(&a) {
            return bad("alpha sums must contain alpha");
        }
        if !self.r_beta.terms().contains(&b) || !self.c_beta.terms().contains(&b) {
            return bad("beta sums must contain beta");
        }
        if a != b
            && !self.same_row
            && self.r_alpha_tau != self.r_alpha.minus_symbol(a).with_symbol(b)
        {
            return bad("r_alpha^tau is not r_alpha - alpha + beta");
        }
        if a != b
            && !self.same_col
            && self.c_alpha_tau != self.c_alpha.minus_symbol(a).with_symbol(b)
        {
            return bad("c_alpha^tau is not c_alpha - alpha + beta");
        }
        Ok(())
    }
}

impl TranspositionContext<f64> {
    /// Context for exchanging the entries at flat positions `p` and `q`;
    /// `α` is the larger value (`p` on ties).
    pub fn numeric(mat: &ProbMatrix, p: usize, q: usize) -> Result<Self> {
        let e = mat.entries();
        check_positions(e.len(), p, q)?;
        let (pa, pb) = if e[p] >= e[q] { (p, q) } else { (q, p) };
        let n = mat.n();
        let (ra, ca, rb, cb) = (pa / n, pa % n, pb / n, pb % n);
        let row = |i: usize| (0..n).map(|j| mat.get(i, j)).sum::<f64>();
        let col = |j: usize| (0..mat.m()).map(|i| mat.get(i, j)).sum::<f64>();
        let (alpha, beta) = (e[pa], e[pb]);
        let (same_row, same_col) = (ra == rb, ca == cb);
        let (r_alpha, r_beta, c_alpha, c_beta) = (row(ra), row(rb), col(ca), col(cb));
        let t = alpha - beta;
        Ok(TranspositionContext {
            alpha,
            beta,
            alpha_pos: pa,
            beta_pos: pb,
            r_alpha,
            r_beta,
            c_alpha,
            c_beta,
            r_alpha_tau: if same_row { r_alpha } else { r_alpha - t },
            r_beta_tau: if same_row { r_beta } else { r_beta + t },
            c_alpha_tau: if same_col { c_alpha } else { c_alpha - t },
            c_beta_tau: if same_col { c_beta } else { c_beta + t },
            same_row,
            same_col,
        })
    }
}

/// `I(P^τ) - I(P)` in nats via the identric-mean product
/// `(α-β) ln[μ(r_α^τ,r_α) μ(c_α^τ,c_α) / (μ(r_β,r_β^τ) μ(c_β,c_β^τ))]`.
///
/// Factors for a shared row (or column) are omitted.
pub fn cmi_diff_transposition(ctx: &TranspositionContext<f64>) -> Result<f64> {
    let t = ctx.alpha - ctx.beta;
    if t < 0.0 {
        return Err(Error::InvalidInput(
            "alpha must not be smaller than beta".into(),
        ));
    }
    let sums = [
        ctx.r_alpha,
        ctx.r_beta,
        ctx.c_alpha,
        ctx.c_beta,
        ctx.r_alpha_tau,
        ctx.r_beta_tau,
        ctx.c_alpha_tau,
        ctx.c_beta_tau,
    ];
    if let Some(&bad) = sums
        .iter()
        .find(|x| !x.is_finite() || **x < -1e-12 || **x > 1.0 + 1e-12)
    {
        return Err(Error::Domain { value: bad });
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let ln_mu = |x: f64, y: f64| identric_unchecked(x.max(0.0), y.max(0.0)).ln();
    let mut log_ratio = 0.0;
    if !ctx.same_row {
        log_ratio += ln_mu(ctx.r_alpha_tau, ctx.r_alpha) - ln_mu(ctx.r_beta, ctx.r_beta_tau);
    }
    if !ctx.same_col {
        log_ratio += ln_mu(ctx.c_alpha_tau, ctx.c_alpha) - ln_mu(ctx.c_beta, ctx.c_beta_tau);
    }
    Ok(t * log_ratio)
}

/// One side of the decision: shows `μ(low₁)μ(low₂) <= μ(high₁)μ(high₂)` for
/// equal increments, where `low` are the candidate minima.
fn dominated_pair(
    low: [(&str, &SymbolicSum); 2],
    high: [(&str, &SymbolicSum); 2],
    cert: &mut Certificate,
) -> bool {
    // Crucifix rule: a low sum is the a-priori minimum of all four and the
    // low pair's total is bounded by the high pair's total.
    let all = [low[0], low[1], high[0], high[1]];
    for (name, candidate) in low {
        let proofs: Option<Vec<Certificate>> = all
            .iter()
            .filter(|(other, _)| *other != name)
            .map(|(_, s)| prove_le(candidate, s))
            .collect();
        let Some(proofs) = proofs else { continue };
        let low_total = low[0].1.plus(low[1].1);
        let high_total = high[0].1.plus(high[1].1);
        let Some(bound) = prove_le(&low_total, &high_total) else {
            continue;
        };
        cert.push("minimum", format!("{name}={candidate}"));
        for p in &proofs {
            cert.nest(p);
        }
        cert.push(
            "sum-bound",
            format!("{}+{} <= {}+{}", low[0].0, low[1].0, high[0].0, high[1].0),
        );
        cert.nest(&bound);
        cert.push("rule", "crucifix (concave increasing mean, product bound)");
        return true;
    }
    // Monotone rule: each low sum is dominated by a distinct high sum.
    for (h0, h1) in [(high[0], high[1]), (high[1], high[0])] {
        if let (Some(p0), Some(p1)) = (prove_le(low[0].1, h0.1), prove_le(low[1].1, h1.1)) {
            cert.push(
                "match",
                format!("{} <= {}, {} <= {}", low[0].0, h0.0, low[1].0, h1.0),
            );
            cert.nest(&p0);
            cert.nest(&p1);
            cert.push(
                "rule",
                "monotone (identric mean increasing in its first argument)",
            );
            return true;
        }
    }
    false
}

/// Decides `P ⊳ P^τ` (forward) or `P ⊲ P^τ` (reverse) for one transposition.
pub fn titrate_check(ctx: &TranspositionContext<SymbolicSum>) -> Result<RelationVerdict> {
    ctx.validate()?;
    let (a, b) = (ctx.alpha.terms()[0], ctx.beta.terms()[0]);
    let mut cert = Certificate::new();
    cert.push(
        "transposition",
        format!("alpha={} beta={}", symbol_char(a), symbol_char(b)),
    );
    if a == b {
        cert.push("degenerate", "alpha equals beta; no a-priori direction");
        return Ok(RelationVerdict::inconclusive(cert));
    }
    if ctx.same_row || ctx.same_col {
        // Only one pair of marginals moves: P ⊳ P^τ iff c_β <= c_α^τ (columns)
        // or r_β <= r_α^τ (rows), by monotonicity of the identric mean.
        let (label, beta_sum, alpha_tau) = if ctx.same_row {
            ("same-row", &ctx.c_beta, &ctx.c_alpha_tau)
        } else {
            ("same-col", &ctx.r_beta, &ctx.r_alpha_tau)
        };
        let axis = if ctx.same_row { "c" } else { "r" };
        cert.push(
            label,
            format!("{axis}_alpha^tau={alpha_tau} {axis}_beta={beta_sum}"),
        );
        if let Some(p) = prove_le(beta_sum, alpha_tau) {
            cert.nest(&p);
            cert.push("verdict", "P |> P^tau");
            return Ok(RelationVerdict {
                kind: RelationKind::ProvenForward,
                certificate: cert,
            });
        }
        if let Some(p) = prove_le(alpha_tau, beta_sum) {
            cert.nest(&p);
            cert.push("verdict", "P^tau |> P");
            return Ok(RelationVerdict {
                kind: RelationKind::ProvenReverse,
                certificate: cert,
            });
        }
        cert.push("inconclusive", "marginals not comparable a priori");
        return Ok(RelationVerdict::inconclusive(cert));
    }
    cert.push(
        "sums",
        format!(
            "r_alpha^tau={} c_alpha^tau={} r_beta={} c_beta={}",
            ctx.r_alpha_tau, ctx.c_alpha_tau, ctx.r_beta, ctx.c_beta
        ),
    );
    let beta_side = [("c_beta", &ctx.c_beta), ("r_beta", &ctx.r_beta)];
    let alpha_side = [
        ("r_alpha^tau", &ctx.r_alpha_tau),
        ("c_alpha^tau", &ctx.c_alpha_tau),
    ];
    for (kind, low, high, verdict) in [
        (
            RelationKind::ProvenForward,
            beta_side,
            alpha_side,
            "P |> P^tau",
        ),
        (
            RelationKind::ProvenReverse,
            alpha_side,
            beta_side,
            "P^tau |> P",
        ),
    ] {
        let mut attempt = cert.clone();
        if dominated_pair(low, high, &mut attempt) {
            attempt.push("verdict", verdict);
            return Ok(RelationVerdict {
                kind,
                certificate: attempt,
            });
        }
    }
    cert.push(
        "inconclusive",
        "neither minimum/sum-bound nor monotone matching applies",
    );
    Ok(RelationVerdict::inconclusive(cert))
}
