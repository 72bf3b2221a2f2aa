//! Permutations of `{1, .., N}` in one-line and cycle notation.
//!
//! Internally a permutation stores 0-based images; parsing and display use
//! the usual 1-based conventions.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(len: usize) -> Self {
        Permutation {
            images: (0..len).collect(),
        }
    }

    /// Builds a permutation from 0-based images, checking bijectivity.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let len = images.len();
        let mut seen = vec![false; len];
        for &i in &images {
            if i >= len {
                return Err(Error::InvalidPermutation {
                    len,
                    detail: format!("image {} out of range", i + 1),
                });
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidPermutation {
                    len,
                    detail: format!("image {} repeated", i + 1),
                });
            }
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation from 1-based one-line notation, e.g. `[1, 4, 5, 6, 3, 2]`.
    pub fn from_one_line(one_based: &[usize]) -> Result<Self> {
        let len = one_based.len();
        let images = one_based
            .iter()
            .map(|&v| {
                v.checked_sub(1).ok_or_else(|| Error::InvalidPermutation {
                    len,
                    detail: "zero is not a valid point".into(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_images(images)
    }

    /// Parses cycle notation such as `()`, `(264)(35)` or `(2,6,4)(3,5)`.
    ///
    /// Points without separators are read one digit at a time, which is only
    /// unambiguous for degrees up to 9.
    pub fn from_cycles(text: &str, len: usize) -> Result<Self> {
        let bad = |detail: String| Error::InvalidPermutation { len, detail };
        let mut images: Vec<usize> = (0..len).collect();
        let mut seen = vec![false; len];
        let mut rest = text.trim();
        while !rest.is_empty() {
            let open = rest
                .strip_prefix('(')
                .ok_or_else(|| bad(format!("expected '(' in {text:?}")))?;
            let close = open
                .find(')')
                .ok_or_else(|| bad(format!("unbalanced cycle in {text:?}")))?;
            let body = open[..close].trim();
            rest = open[close + 1..].trim_start();
            let points: Vec<usize> = if body.is_empty() {
                Vec::new()
            } else if body.contains(',') || body.contains(' ') {
                body.split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|t| !t.is_empty())
                    .map(|t| {
                        t.parse::<usize>()
                            .map_err(|_| bad(format!("bad point {t:?}")))
                    })
                    .collect::<Result<_>>()?
            } else {
                body.chars()
                    .map(|c| {
                        c.to_digit(10)
                            .map(|d| d as usize)
                            .ok_or_else(|| bad(format!("bad point {c:?}")))
                    })
                    .collect::<Result<_>>()?
            };
            for &p in &points {
                if p == 0 || p > len {
                    return Err(bad(format!("point {p} out of range")));
                }
                if std::mem::replace(&mut seen[p - 1], true) {
                    return Err(bad(format!("point {p} repeated")));
                }
            }
            for (i, &p) in points.iter().enumerate() {
                let next = points[(i + 1) % points.len()];
                images[p - 1] = next - 1;
            }
        }
        Ok(Permutation { images })
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// 0-based image of `k`.
    pub fn apply(&self, k: usize) -> usize {
        self.images[k]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (k, &v) in self.images.iter().enumerate() {
            inv[v] = k;
        }
        Permutation { images: inv }
    }

    /// `self ∘ other`, i.e. `other` is applied first.
    pub fn compose(&self, other: &Permutation) -> Self {
        assert_eq!(self.len(), other.len(), "degree mismatch in compose");
        Permutation {
            images: other.images.iter().map(|&k| self.images[k]).collect(),
        }
    }

    /// The transposition swapping 0-based points `i` and `j`.
    pub fn transposition(len: usize, i: usize, j: usize) -> Self {
        let mut p = Self::identity(len);
        p.images.swap(i, j);
        p
    }

    /// Disjoint cycles of length at least two, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen[start] || self.images[start] == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut k = self.images[start];
            while k != start {
                seen[k] = true;
                cycle.push(k);
                k = self.images[k];
            }
            out.push(cycle);
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        let sep = if self.len() > 9 { "," } else { "" };
        for c in cycles {
            let pts: Vec<String> = c.iter().map(|k| (k + 1).to_string()).collect();
            write!(f, "({})", pts.join(sep))?;
        }
        Ok(())
    }
}
