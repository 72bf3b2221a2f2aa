//! Majorisation, the entropic relation `⊳`, and the identric-mean
//! machinery used to decide it for single transpositions.
//!
//! `P ⊳ Q` means `I(P) <= I(Q)` follows from the ordering of the entries
//! alone. The symbolic prover here is sound and deliberately incomplete: it
//! knows only cancellation of common terms and injective dominance matching
//! of the residue (every symbol is strictly positive). It never uses the
//! unit-sum constraint.

mod derive;
mod transposition;

pub use derive::{derive_relation, RelationSearch, RuleSet};
pub use transposition::{cmi_diff_transposition, titrate_check, TranspositionContext};

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::probability::{marginals, ProbMatrix};
use crate::symbolic::{symbol_char, Arrangement, Symbol, SymbolicSum};
use crate::tolerance::EPS;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RelationKind {
    /// The left operand is provably no larger (sums) / no more informative (matrices).
    ProvenForward,
    ProvenReverse,
    Inconclusive,
}

impl fmt::Display for RelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RelationKind::ProvenForward => "PROVEN-FORWARD",
            RelationKind::ProvenReverse => "PROVEN-REVERSE",
            RelationKind::Inconclusive => "INCONCLUSIVE",
        })
    }
}

/// Plain-text derivation trace: one `rule: detail` entry per line.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct Certificate {
    lines: Vec<String>,
}

impl Certificate {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends `rule: detail`, or just `rule` when the detail is empty.
    pub fn push(&mut self, rule: &str, detail: impl fmt::Display) {
        let detail = detail.to_string();
        if detail.is_empty() {
            self.lines.push(rule.to_string());
        } else {
            self.lines.push(format!("{rule}: {detail}"));
        }
    }

    /// Appends another certificate's lines, indented one level.
    pub fn nest(&mut self, other: &Certificate) {
        self.lines
            .extend(other.lines.iter().map(|l| format!("  {l}")));
    }

    pub fn lines(&self) -> &[String] {
        &self.lines
    }

    pub fn render(&self) -> String {
        let mut out = self.lines.join("\n");
        out.push('\n');
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationVerdict {
    pub kind: RelationKind,
    pub certificate: Certificate,
}

impl RelationVerdict {
    pub fn inconclusive(certificate: Certificate) -> Self {
        RelationVerdict {
            kind: RelationKind::Inconclusive,
            certificate,
        }
    }

    pub fn is_forward(&self) -> bool {
        self.kind == RelationKind::ProvenForward
    }
}

fn word(symbols: &[Symbol]) -> String {
    if symbols.is_empty() {
        return "none".into();
    }
    symbols
        .iter()
        .map(|&s| symbol_char(s).to_string())
        .collect::<Vec<_>>()
        .join("+")
}

/// Tries to show `s <= t` a priori. On success returns the trace lines
/// (cancelled terms, matched pairs, positive residue).
pub(crate) fn prove_le(s: &SymbolicSum, t: &SymbolicSum) -> Option<Certificate> {
    let (common, left, right) = s.cancel(t);
    if left.len() > right.len() {
        return None;
    }
    // Both residues are sorted largest-first; the k-th largest of the right
    // residue must strictly exceed the k-th largest of the left.
    if left.iter().zip(&right).any(|(&l, &r)| r >= l) {
        return None;
    }
    let mut cert = Certificate::new();
    cert.push("compare", format!("{s} <= {t}"));
    if !common.is_empty() {
        cert.push("cancel", word(&common));
    }
    if !left.is_empty() {
        let pairs: Vec<String> = left
            .iter()
            .zip(&right)
            .map(|(&l, &r)| format!("{}<{}", symbol_char(l), symbol_char(r)))
            .collect();
        cert.push("dominate", pairs.join(", "));
    }
    let residue = &right[left.len()..];
    if !residue.is_empty() {
        cert.push("residue", format!("{} > 0", word(residue)));
    }
    if left.is_empty() && residue.is_empty() {
        cert.push("identical", "both sides cancel completely");
    }
    Some(cert)
}

/// Decides `S <= T` (forward) or `S >= T` (reverse) from the symbol order.
pub fn symbolic_sum_compare(s: &SymbolicSum, t: &SymbolicSum) -> RelationVerdict {
    if let Some(certificate) = prove_le(s, t) {
        return RelationVerdict {
            kind: RelationKind::ProvenForward,
            certificate,
        };
    }
    if let Some(certificate) = prove_le(t, s) {
        return RelationVerdict {
            kind: RelationKind::ProvenReverse,
            certificate,
        };
    }
    let mut cert = Certificate::new();
    cert.push("compare", format!("{s} ? {t}"));
    cert.push("inconclusive", "no dominance matching in either direction");
    RelationVerdict::inconclusive(cert)
}

/// Descending prefix-sum dominance `u ≻ v`, within [`EPS`].
pub fn vector_majorises(u: &[f64], v: &[f64]) -> Result<bool> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch {
            expected: u.len(),
            actual: v.len(),
        });
    }
    if let Some(&x) = u.iter().chain(v).find(|x| !x.is_finite() || **x < -EPS) {
        return Err(Error::Domain { value: x });
    }
    let (su, sv): (f64, f64) = (u.iter().sum(), v.iter().sum());
    if (su - sv).abs() > EPS {
        return Err(Error::InvalidInput(format!(
            "majorisation needs equal totals, got {su} and {sv}"
        )));
    }
    let mut a = u.to_vec();
    let mut b = v.to_vec();
    a.sort_by(|x, y| y.total_cmp(x));
    b.sort_by(|x, y| y.total_cmp(x));
    let (mut pa, mut pb) = (0.0, 0.0);
    for (x, y) in a.iter().zip(&b) {
        pa += x;
        pb += y;
        if pa < pb - EPS {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Row sums and column sums of `m1` both majorise those of `m2`.
pub fn matrix_majorises(m1: &ProbMatrix, m2: &ProbMatrix) -> Result<bool> {
    if m1.m() != m2.m() || m1.n() != m2.n() {
        return Err(Error::ShapeMismatch(format!(
            "{}x{} vs {}x{}",
            m1.m(),
            m1.n(),
            m2.m(),
            m2.n()
        )));
    }
    let (a, b) = (marginals(m1), marginals(m2));
    Ok(vector_majorises(&a.rows, &b.rows)? && vector_majorises(&a.cols, &b.cols)?)
}

fn combinations(len: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, len: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..len {
            cur.push(i);
            rec(i + 1, len, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, len, k, &mut Vec::new(), &mut out);
    out
}

fn subset_sum(parts: &[SymbolicSum], idx: &[usize]) -> SymbolicSum {
    idx.iter()
        .fold(SymbolicSum::default(), |acc, &i| acc.plus(&parts[i]))
}

fn list(parts: &[SymbolicSum]) -> String {
    parts
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

/// A-priori vector majorisation of symbolic sums.
///
/// For every `k` and every `k`-subset of `v` there must be a `k`-subset of
/// `u` whose sum provably dominates it; then the top-`k` sum of `u` dominates
/// the top-`k` sum of `v` for every admissible spectrum.
pub fn symbolic_vector_majorises(u: &[SymbolicSum], v: &[SymbolicSum]) -> Option<Certificate> {
    if u.len() != v.len() {
        return None;
    }
    let all = |p: &[SymbolicSum]| p.iter().fold(SymbolicSum::default(), |a, s| a.plus(s));
    if all(u) != all(v) {
        return None;
    }
    let mut cert = Certificate::new();
    let mut su = u.to_vec();
    let mut sv = v.to_vec();
    su.sort();
    sv.sort();
    if su == sv {
        cert.push(
            "same-sums",
            format!("[{}] equals [{}] up to order", list(u), list(v)),
        );
        return Some(cert);
    }
    cert.push("vector", format!("[{}] > [{}]", list(u), list(v)));
    let len = u.len();
    let subsets: Vec<Vec<Vec<usize>>> = (0..=len).map(|k| combinations(len, k)).collect();
    for (k, level) in subsets.iter().enumerate().take(len).skip(1) {
        for t_idx in level {
            let t_sum = subset_sum(v, t_idx);
            let witness = level
                .iter()
                .find(|s_idx| prove_le(&t_sum, &subset_sum(u, s_idx)).is_some())?;
            let lhs: Vec<SymbolicSum> = t_idx.iter().map(|&i| v[i].clone()).collect();
            let rhs: Vec<SymbolicSum> = witness.iter().map(|&i| u[i].clone()).collect();
            cert.push(
                &format!("k={k}"),
                format!("{{{}}} <= {{{}}}", list(&lhs), list(&rhs)),
            );
        }
    }
    Some(cert)
}

/// A-priori matrix majorisation `a ≻ b` (rows and columns).
pub fn symbolic_matrix_majorises(a: &Arrangement, b: &Arrangement) -> Option<Certificate> {
    if a.m() != b.m() || a.n() != b.n() {
        return None;
    }
    let rows = symbolic_vector_majorises(&a.row_sums(), &b.row_sums())?;
    let cols = symbolic_vector_majorises(&a.col_sums(), &b.col_sums())?;
    let mut cert = Certificate::new();
    cert.push("majorisation", format!("{a} > {b}"));
    cert.push("rows", "");
    cert.nest(&rows);
    cert.push("cols", "");
    cert.nest(&cols);
    Some(cert)
}

/// Identric mean `e^{-1} (y^y / x^x)^{1/(y-x)}`, the Lagrangian mean of
/// `H(x) = -x ln x`.
pub fn identric_mean(x: f64, y: f64) -> Result<f64> {
    for v in [x, y] {
        if !v.is_finite() || v <= 0.0 || v > 1.0 + EPS {
            return Err(Error::Domain { value: v });
        }
    }
    Ok(identric_unchecked(x, y))
}

/// Identric mean extended by continuity to `x = 0` (`μ(0, y) = y / e`).
pub(crate) fn identric_unchecked(x: f64, y: f64) -> f64 {
    if x == y {
        return x;
    }
    let (lo, hi) = if x < y { (x, y) } else { (y, x) };
    let mid = 0.5 * (lo + hi);
    let gap = hi - lo;
    if gap < 1e-3 * mid {
        // Central-difference series of u ln u about the midpoint:
        // ln μ = ln m - r²/6 - r⁴/20 - r⁶/42 with r = (hi - lo) / (2m).
        let r = 0.5 * gap / mid;
        let r2 = r * r;
        return mid * (-(r2 / 6.0) - r2 * r2 / 20.0 - r2 * r2 * r2 / 42.0).exp();
    }
    let lo_term = if lo > 0.0 { lo * lo.ln() } else { 0.0 };
    ((hi * hi.ln() - lo_term) / gap - 1.0).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sum(t: &str) -> SymbolicSum {
        SymbolicSum::parse(t, 6).unwrap()
    }

    #[test]
    fn sum_compare_examples() {
        assert_eq!(
            symbolic_sum_compare(&sum("b+f"), &sum("a+e")).kind,
            RelationKind::ProvenForward
        );
        let v = symbolic_sum_compare(&sum("b+f+b+d+e"), &sum("b+e+b+c+f"));
        assert_eq!(v.kind, RelationKind::ProvenForward);
        assert_eq!(
            v.certificate.render(),
            "compare: b+b+d+e+f <= b+b+c+e+f\ncancel: b+b+e+f\ndominate: d<c\n"
        );
        assert_eq!(
            symbolic_sum_compare(&sum("a+d"), &sum("b+c")).kind,
            RelationKind::Inconclusive
        );
        assert_eq!(
            symbolic_sum_compare(&sum("a+e"), &sum("b+f")).kind,
            RelationKind::ProvenReverse
        );
        // positive residue
        assert_eq!(
            symbolic_sum_compare(&sum("c+f"), &sum("a+c+f")).kind,
            RelationKind::ProvenForward
        );
        // more residual terms on the left than the right can never be matched
        assert_eq!(
            symbolic_sum_compare(&sum("e+f"), &sum("a")).kind,
            RelationKind::Inconclusive
        );
    }

    #[test]
    fn vector_majorisation_examples() {
        assert!(vector_majorises(&[1.0, 0.0], &[0.5, 0.5]).unwrap());
        assert!(!vector_majorises(&[0.5, 0.5], &[1.0, 0.0]).unwrap());
        assert!(vector_majorises(&[0.3, 0.3, 0.4], &[0.3, 0.3, 0.4]).unwrap());
        assert!(vector_majorises(&[0.5, 0.3, 0.2], &[0.4, 0.4, 0.2]).unwrap());
        assert!(vector_majorises(&[0.5, 0.5], &[0.5, 0.3, 0.2]).is_err());
        assert!(vector_majorises(&[0.6, 0.5], &[0.5, 0.5]).is_err());
    }

    #[test]
    fn matrix_majorisation_examples() {
        use crate::probability::Spectrum;
        let s = Spectrum::new(vec![0.30, 0.25, 0.20, 0.15, 0.07, 0.03]).unwrap();
        let c1 = Arrangement::parse("abc|def")
            .unwrap()
            .instantiate(&s)
            .unwrap();
        let c6 = Arrangement::parse("abc|fed")
            .unwrap()
            .instantiate(&s)
            .unwrap();
        let x = Arrangement::parse("ade|fcb")
            .unwrap()
            .instantiate(&s)
            .unwrap();
        assert!(matrix_majorises(&c1, &c1).unwrap());
        assert!(matrix_majorises(&c1, &c6).unwrap());
        assert!(!matrix_majorises(&x, &c1).unwrap());
        assert!(matrix_majorises(&c1, &c1.transpose()).is_err());
    }

    #[test]
    fn symbolic_majorisation_of_fiducial_over_x() {
        let c1 = Arrangement::parse("abc|def").unwrap();
        let x = Arrangement::parse("ade|fcb").unwrap();
        assert!(symbolic_matrix_majorises(&c1, &x).is_some());
        assert!(symbolic_matrix_majorises(&x, &c1).is_none());
        // the two vertical pairs of the class-43 hexagon are incomparable
        let p = Arrangement::parse("ade|bfc").unwrap();
        let q = Arrangement::parse("ade|cbf").unwrap();
        assert!(symbolic_matrix_majorises(&p, &q).is_none());
        assert!(symbolic_matrix_majorises(&q, &p).is_none());
    }

    #[test]
    fn identric_examples() {
        assert_eq!(identric_mean(0.3, 0.3).unwrap(), 0.3);
        // bisection oracle on -(1 + ln μ) = secant slope, 40 digits
        assert!((identric_mean(0.25, 0.75).unwrap() - 0.477_889_412_376_738).abs() < 1e-15);
        assert!((identric_mean(0.75, 0.25).unwrap() - 0.477_889_412_376_738).abs() < 1e-15);
        assert!(identric_mean(0.0, 0.5).is_err());
        assert!(identric_mean(-0.1, 0.5).is_err());
        assert!(identric_mean(0.5, 1.5).is_err());
    }

    #[test]
    fn identric_series_branch_is_continuous() {
        // straddle the switch between the series and the closed form
        for &x in &[1e-6, 0.01, 0.2, 0.7] {
            let below = identric_unchecked(x, x * (1.0 + 0.999e-3));
            let above = identric_unchecked(x, x * (1.0 + 1.001e-3));
            let slope = (above - below) / (x * 0.002e-3);
            assert!((slope - 0.5).abs() < 1e-3, "x={x} slope={slope}");
        }
    }
}
