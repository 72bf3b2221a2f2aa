//! Symbolic arrangements over an ordered alphabet `a > b > c > ...`.
//!
//! A symbol is its rank: `0` is the largest unknown, `1` the next, and so
//! on. Only the ordering of the unknowns is known, together with the facts
//! that every unknown is strictly positive.

use std::fmt;

use crate::error::{Error, Result};
use crate::permutation::Permutation;
use crate::probability::{ProbMatrix, Spectrum};

pub type Symbol = u8;

/// Largest supported alphabet (matrices with at most 12 cells).
pub const MAX_SYMBOLS: usize = 12;

pub fn symbol_char(s: Symbol) -> char {
    (b'a' + s) as char
}

pub fn parse_symbol(c: char) -> Result<Symbol> {
    if c.is_ascii_lowercase() && ((c as u8 - b'a') as usize) < MAX_SYMBOLS {
        Ok(c as u8 - b'a')
    } else {
        Err(Error::UnknownSymbol(c))
    }
}

/// A multiset of symbols, kept sorted from largest (`a`) to smallest.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct SymbolicSum {
    terms: Vec<Symbol>,
}

impl SymbolicSum {
    pub fn new(mut terms: Vec<Symbol>) -> Self {
        terms.sort_unstable();
        SymbolicSum { terms }
    }

    pub fn single(s: Symbol) -> Self {
        SymbolicSum { terms: vec![s] }
    }

    /// Parses `"b+c+f"`; rejects letters beyond `alphabet` symbols.
    pub fn parse(text: &str, alphabet: usize) -> Result<Self> {
        let mut terms = Vec::new();
        for tok in text.split('+') {
            let tok = tok.trim();
            let mut chars = tok.chars();
            let c = chars
                .next()
                .ok_or_else(|| Error::InvalidInput(format!("empty term in {text:?}")))?;
            if chars.next().is_some() {
                return Err(Error::InvalidInput(format!("bad term {tok:?}")));
            }
            let s = parse_symbol(c)?;
            if s as usize >= alphabet {
                return Err(Error::UnknownSymbol(c));
            }
            terms.push(s);
        }
        Ok(Self::new(terms))
    }

    pub fn terms(&self) -> &[Symbol] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn plus(&self, other: &SymbolicSum) -> SymbolicSum {
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        Self::new(terms)
    }

    /// Removes one occurrence of `s`; panics if absent.
    pub fn minus_symbol(&self, s: Symbol) -> SymbolicSum {
        let mut terms = self.terms.clone();
        let k = terms
            .iter()
            .position(|&t| t == s)
            .expect("symbol not present in sum");
        terms.remove(k);
        SymbolicSum { terms }
    }

    pub fn with_symbol(&self, s: Symbol) -> SymbolicSum {
        let mut terms = self.terms.clone();
        terms.push(s);
        Self::new(terms)
    }

    /// Splits two sums into (common, residual of self, residual of other).
    pub fn cancel(&self, other: &SymbolicSum) -> (Vec<Symbol>, Vec<Symbol>, Vec<Symbol>) {
        let (mut i, mut j) = (0, 0);
        let (mut common, mut left, mut right) = (Vec::new(), Vec::new(), Vec::new());
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Equal => {
                    common.push(a[i]);
                    i += 1;
                    j += 1;
                }
                std::cmp::Ordering::Less => {
                    left.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    right.push(b[j]);
                    j += 1;
                }
            }
        }
        left.extend_from_slice(&a[i..]);
        right.extend_from_slice(&b[j..]);
        (common, left, right)
    }

    pub fn evaluate(&self, spectrum: &[f64]) -> f64 {
        self.terms.iter().map(|&s| spectrum[s as usize]).sum()
    }
}

impl fmt::Display for SymbolicSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, &s) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str("+")?;
            }
            write!(f, "{}", symbol_char(s))?;
        }
        Ok(())
    }
}

/// An `m x n` matrix of distinct symbols, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arrangement {
    m: usize,
    n: usize,
    cells: Vec<Symbol>,
}

impl Arrangement {
    pub fn new(m: usize, n: usize, cells: Vec<Symbol>) -> Result<Self> {
        if m == 0 || n == 0 || cells.len() != m * n {
            return Err(Error::DimensionMismatch {
                expected: m * n,
                actual: cells.len(),
            });
        }
        if m * n > MAX_SYMBOLS {
            return Err(Error::UnsupportedShape {
                m,
                n,
                reason: format!("at most {MAX_SYMBOLS} cells are supported"),
            });
        }
        let mut seen = [false; MAX_SYMBOLS];
        for &c in &cells {
            if c as usize >= m * n {
                return Err(Error::UnknownSymbol(symbol_char(c)));
            }
            if std::mem::replace(&mut seen[c as usize], true) {
                return Err(Error::InvalidInput(format!(
                    "symbol '{}' appears twice",
                    symbol_char(c)
                )));
            }
        }
        Ok(Arrangement { m, n, cells })
    }

    /// The fiducial arrangement `a b c / d e f ...` (row-major alphabet order).
    pub fn fiducial(m: usize, n: usize) -> Self {
        Arrangement {
            m,
            n,
            cells: (0..(m * n) as Symbol).collect(),
        }
    }

    /// Parses rows separated by `|`, e.g. `"ade|fcb"`.
    pub fn parse(text: &str) -> Result<Self> {
        let rows: Vec<&str> = text.trim().split('|').collect();
        let m = rows.len();
        let n = rows[0].chars().count();
        if rows.iter().any(|r| r.chars().count() != n) {
            return Err(Error::ShapeMismatch(format!("ragged rows in {text:?}")));
        }
        let cells = rows
            .iter()
            .flat_map(|r| r.chars())
            .map(parse_symbol)
            .collect::<Result<Vec<_>>>()?;
        Self::new(m, n, cells)
    }

    /// Places symbol `k` at flat position `perm(k)` of the fiducial matrix.
    ///
    /// This is how the `(2,3)` class table labels its representatives.
    pub fn from_position_permutation(m: usize, n: usize, perm: &Permutation) -> Result<Self> {
        if perm.len() != m * n {
            return Err(Error::InvalidPermutation {
                len: m * n,
                detail: format!("degree {}", perm.len()),
            });
        }
        let mut cells = vec![0; m * n];
        for k in 0..m * n {
            cells[perm.apply(k)] = k as Symbol;
        }
        Self::new(m, n, cells)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cells(&self) -> &[Symbol] {
        &self.cells
    }

    pub fn get(&self, i: usize, j: usize) -> Symbol {
        self.cells[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[Symbol] {
        &self.cells[i * self.n..(i + 1) * self.n]
    }

    pub fn row_sum(&self, i: usize) -> SymbolicSum {
        SymbolicSum::new(self.row(i).to_vec())
    }

    pub fn col_sum(&self, j: usize) -> SymbolicSum {
        SymbolicSum::new((0..self.m).map(|i| self.get(i, j)).collect())
    }

    pub fn row_sums(&self) -> Vec<SymbolicSum> {
        (0..self.m).map(|i| self.row_sum(i)).collect()
    }

    pub fn col_sums(&self) -> Vec<SymbolicSum> {
        (0..self.n).map(|j| self.col_sum(j)).collect()
    }

    /// Bitmask of the symbols in row `i`.
    pub fn row_mask(&self, i: usize) -> u16 {
        self.row(i).iter().fold(0, |acc, &s| acc | (1 << s))
    }

    pub fn col_mask(&self, j: usize) -> u16 {
        (0..self.m).fold(0, |acc, i| acc | (1 << self.get(i, j)))
    }

    /// Exchanges the symbols at two flat positions.
    pub fn swapped(&self, p: usize, q: usize) -> Arrangement {
        let mut out = self.clone();
        out.cells.swap(p, q);
        out
    }

    pub fn transpose(&self) -> Arrangement {
        let mut cells = Vec::with_capacity(self.cells.len());
        for j in 0..self.n {
            for i in 0..self.m {
                cells.push(self.get(i, j));
            }
        }
        Arrangement {
            m: self.n,
            n: self.m,
            cells,
        }
    }

    /// Relabels every symbol through `f`, which must be a bijection of the alphabet.
    pub fn relabel(&self, f: impl Fn(Symbol) -> Symbol) -> Arrangement {
        Arrangement {
            m: self.m,
            n: self.n,
            cells: self.cells.iter().map(|&s| f(s)).collect(),
        }
    }

    /// Substitutes the spectrum values for the symbols.
    pub fn instantiate(&self, s: &Spectrum) -> Result<ProbMatrix> {
        if s.dim() != self.cells.len() {
            return Err(Error::DimensionMismatch {
                expected: self.cells.len(),
                actual: s.dim(),
            });
        }
        let v = s.values();
        ProbMatrix::from_flat(
            self.m,
            self.n,
            self.cells.iter().map(|&c| v[c as usize]).collect(),
        )
    }

    /// Flattened form without separators, e.g. `"adefcb"`.
    pub fn word(&self) -> String {
        self.cells.iter().map(|&s| symbol_char(s)).collect()
    }
}

impl fmt::Display for Arrangement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.m {
            if i > 0 {
                f.write_str("|")?;
            }
            for &s in self.row(i) {
                write!(f, "{}", symbol_char(s))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let x = Arrangement::parse("ade|fcb").unwrap();
        assert_eq!(x.to_string(), "ade|fcb");
        assert_eq!(x.row_sum(0).to_string(), "a+d+e");
        assert_eq!(x.col_sum(0).to_string(), "a+f");
        assert_eq!(x.col_sum(2).to_string(), "b+e");
        assert!(Arrangement::parse("ade|fcc").is_err());
        assert!(Arrangement::parse("ade|fc").is_err());
        assert!(Arrangement::parse("adz|fcb").is_err());
    }

    #[test]
    fn label_convention_matches_table() {
        let p = Permutation::from_cycles("(264)(35)", 6).unwrap();
        let x = Arrangement::from_position_permutation(2, 3, &p).unwrap();
        assert_eq!(x.to_string(), "ade|fcb");
    }

    #[test]
    fn cancellation() {
        let s = SymbolicSum::parse("b+f+b+d+e", 6).unwrap();
        let t = SymbolicSum::parse("b+e+b+c+f", 6).unwrap();
        let (common, l, r) = s.cancel(&t);
        assert_eq!(common, vec![1, 1, 4, 5]);
        assert_eq!(l, vec![3]);
        assert_eq!(r, vec![2]);
        assert!(SymbolicSum::parse("a+g", 6).is_err());
    }
}
