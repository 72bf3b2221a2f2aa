//! CMI-invariant classes of arrangements.
//!
//! Row swaps, column swaps and (for square shapes) transposition leave the
//! mutual information unchanged. Each class is represented by its
//! lexicographically least arrangement: the largest symbol sits at the top
//! left, the top row increases in symbol rank (decreases in value) and the
//! first column does too.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::order::symbolic_matrix_majorises;
use crate::permutation::Permutation;
use crate::probability::ProbMatrix;
use crate::symbolic::{Arrangement, Symbol, MAX_SYMBOLS};
use crate::tolerance::EPS;

const R23_DATA: &str = include_str!("../data/r2x3_v1.tsv");

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatrixClass {
    /// 1-based position in lexicographic order.
    pub index: usize,
    #[serde(serialize_with = "as_text")]
    pub canonical: Arrangement,
    /// Cycle notation of the permutation placing symbol `k` at position `σ(k)`.
    pub cycle_label: String,
}

fn as_text<S: serde::Serializer>(a: &Arrangement, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&a.to_string())
}

#[derive(Debug, Clone)]
pub struct ClassTable {
    m: usize,
    n: usize,
    classes: Vec<MatrixClass>,
    lookup: HashMap<Arrangement, usize>,
}

impl ClassTable {
    fn from_canonicals(m: usize, n: usize, mut reps: Vec<Arrangement>) -> Self {
        reps.sort();
        reps.dedup();
        let classes: Vec<MatrixClass> = reps
            .into_iter()
            .enumerate()
            .map(|(k, canonical)| MatrixClass {
                index: k + 1,
                cycle_label: cycle_label(&canonical).to_string(),
                canonical,
            })
            .collect();
        let lookup = classes
            .iter()
            .map(|c| (c.canonical.clone(), c.index))
            .collect();
        ClassTable {
            m,
            n,
            classes,
            lookup,
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[MatrixClass] {
        &self.classes
    }

    pub fn get(&self, index: usize) -> Result<&MatrixClass> {
        if index == 0 || index > self.classes.len() {
            return Err(Error::ClassIndex {
                index,
                count: self.classes.len(),
            });
        }
        Ok(&self.classes[index - 1])
    }

    /// The class containing `a` (any member of the orbit).
    pub fn classify(&self, a: &Arrangement) -> Result<&MatrixClass> {
        if a.m() != self.m || a.n() != self.n {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} arrangement for a {}x{} table",
                a.m(),
                a.n(),
                self.m,
                self.n
            )));
        }
        let c = canonical_form(a);
        let index = self.lookup[&c];
        Ok(&self.classes[index - 1])
    }

    /// Class of a numeric matrix whose entries are distinct within [`EPS`].
    pub fn classify_numeric(&self, p: &ProbMatrix) -> Result<&MatrixClass> {
        self.classify(&rank_arrangement(p)?)
    }
}

/// The permutation `σ` with `cells[σ(k)] = k`.
pub fn cycle_label(a: &Arrangement) -> Permutation {
    let mut images = vec![0; a.cells().len()];
    for (pos, &s) in a.cells().iter().enumerate() {
        images[s as usize] = pos;
    }
    Permutation::from_images(images).expect("arrangement cells are a bijection")
}

fn canonical_rows_cols(a: &Arrangement) -> Arrangement {
    let (m, n) = (a.m(), a.n());
    let top = (0..m).find(|&i| a.row(i).contains(&0)).unwrap();
    let mut cols: Vec<usize> = (0..n).collect();
    cols.sort_by_key(|&j| a.get(top, j));
    let mut rows: Vec<usize> = (0..m).collect();
    rows.sort_by_key(|&i| a.get(i, cols[0]));
    let cells = rows
        .iter()
        .flat_map(|&i| cols.iter().map(move |&j| a.get(i, j)))
        .collect();
    Arrangement::new(m, n, cells).unwrap()
}

/// Lexicographically least member of the orbit of `a`.
pub fn canonical_form(a: &Arrangement) -> Arrangement {
    let c = canonical_rows_cols(a);
    if a.m() == a.n() {
        let t = canonical_rows_cols(&a.transpose());
        if t < c {
            return t;
        }
    }
    c
}

/// Replaces each entry by its rank (0 for the largest).
pub fn rank_arrangement(p: &ProbMatrix) -> Result<Arrangement> {
    let e = p.entries();
    let mut order: Vec<usize> = (0..e.len()).collect();
    order.sort_by(|&x, &y| e[y].total_cmp(&e[x]).then(x.cmp(&y)));
    for w in order.windows(2) {
        if e[w[0]] - e[w[1]] <= EPS {
            return Err(Error::Tie {
                first: w[0],
                second: w[1],
                a: e[w[0]],
                b: e[w[1]],
            });
        }
    }
    let mut cells = vec![0; e.len()];
    for (rank, &pos) in order.iter().enumerate() {
        cells[pos] = rank as Symbol;
    }
    Arrangement::new(p.m(), p.n(), cells)
}

fn check_shape(m: usize, n: usize) -> Result<()> {
    if m < 2 || m > n {
        return Err(Error::UnsupportedShape {
            m,
            n,
            reason: "expected 2 <= m <= n".into(),
        });
    }
    if m * n > MAX_SYMBOLS {
        return Err(Error::UnsupportedShape {
            m,
            n,
            reason: format!("at most {MAX_SYMBOLS} cells are supported"),
        });
    }
    Ok(())
}

fn subsets(pool: &[Symbol], k: usize) -> Vec<Vec<Symbol>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in 0..pool.len() {
        for mut rest in subsets(&pool[i + 1..], k - 1) {
            rest.insert(0, pool[i]);
            out.push(rest);
        }
    }
    out
}

fn permutations(items: &mut Vec<Symbol>, k: usize, out: &mut Vec<Vec<Symbol>>) {
    if k == items.len() {
        out.push(items.clone());
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, out);
        items.swap(k, i);
    }
}

/// Every class of `m x n` arrangements, in lexicographic order.
///
/// Candidates are built directly in row/column normal form (top row and
/// first column increasing); square shapes then keep only the candidates
/// that are also least under transposition.
pub fn enumerate_classes(m: usize, n: usize) -> Result<ClassTable> {
    check_shape(m, n)?;
    let all: Vec<Symbol> = (1..(m * n) as Symbol).collect();
    let mut reps = Vec::new();
    for top in subsets(&all, n - 1) {
        let rest: Vec<Symbol> = all.iter().copied().filter(|s| !top.contains(s)).collect();
        for first_col in subsets(&rest, m - 1) {
            let mut inner: Vec<Symbol> = rest
                .iter()
                .copied()
                .filter(|s| !first_col.contains(s))
                .collect();
            let mut fills = Vec::new();
            permutations(&mut inner, 0, &mut fills);
            for fill in fills {
                let mut cells = Vec::with_capacity(m * n);
                cells.push(0);
                cells.extend_from_slice(&top);
                for i in 0..m - 1 {
                    cells.push(first_col[i]);
                    cells.extend_from_slice(&fill[i * (n - 1)..(i + 1) * (n - 1)]);
                }
                let a = Arrangement::new(m, n, cells)?;
                if m != n || canonical_form(&a) == a {
                    reps.push(a);
                }
            }
        }
    }
    Ok(ClassTable::from_canonicals(m, n, reps))
}

/// One row of the embedded `2 x 3` table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableEntry {
    pub index: usize,
    pub arrangement: Arrangement,
    pub cycle_label: String,
}

/// Parses the embedded `2 x 3` table as shipped.
pub fn r23_entries() -> Result<Vec<TableEntry>> {
    let mut out = Vec::new();
    for line in R23_DATA.lines() {
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let [index, arr, label] = fields[..] else {
            return Err(Error::InvalidInput(format!("bad table line {line:?}")));
        };
        let index = index
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad index in {line:?}")))?;
        out.push(TableEntry {
            index,
            arrangement: Arrangement::parse(arr)?,
            cycle_label: label.to_string(),
        });
    }
    Ok(out)
}

/// The 60 classes of `2 x 3` arrangements, from the embedded table.
///
/// The table is checked against [`enumerate_classes`] and against its own
/// cycle labels; a mismatch is reported as an error.
pub fn r23_table() -> Result<ClassTable> {
    let entries = r23_entries()?;
    let enumerated = enumerate_classes(2, 3)?;
    if entries.len() != enumerated.len() {
        return Err(Error::InvalidInput(format!(
            "embedded table has {} entries, enumeration has {}",
            entries.len(),
            enumerated.len()
        )));
    }
    for (e, c) in entries.iter().zip(enumerated.classes()) {
        let from_label = Permutation::from_cycles(&e.cycle_label, 6)
            .and_then(|p| Arrangement::from_position_permutation(2, 3, &p))?;
        if e.index != c.index || e.arrangement != c.canonical || from_label != e.arrangement {
            return Err(Error::InvalidInput(format!(
                "embedded entry {} ({}, {}) disagrees with enumeration ({}, {})",
                e.index, e.arrangement, e.cycle_label, c.canonical, c.cycle_label
            )));
        }
    }
    let reps = entries.into_iter().map(|e| e.arrangement).collect();
    let mut table = ClassTable::from_canonicals(2, 3, reps);
    for (c, e) in table.classes.iter_mut().zip(r23_entries()?) {
        c.cycle_label = e.cycle_label;
    }
    Ok(table)
}

fn require_2x3(a: &Arrangement) -> Result<()> {
    if (a.m(), a.n()) != (2, 3) {
        return Err(Error::ShapeMismatch(format!(
            "expected a 2x3 arrangement, got {}x{}",
            a.m(),
            a.n()
        )));
    }
    Ok(())
}

/// Exchanges the bottom-left and bottom-right entries of a `2 x 3` arrangement.
pub fn varpi(a: &Arrangement) -> Result<Arrangement> {
    require_2x3(a)?;
    Ok(a.swapped(3, 5))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StandardForms {
    /// Rows and columns both decreasing.
    pub minz: Vec<usize>,
    /// Rows decreasing but not in standard form.
    pub minzoneup: Vec<usize>,
    /// `ϖ` applied to `minzoneup`.
    pub maxima_candidates: Vec<usize>,
}

fn increasing(v: &[Symbol]) -> bool {
    v.windows(2).all(|w| w[0] < w[1])
}

pub fn standard_form_sets(table: &ClassTable) -> Result<StandardForms> {
    let probe = &table.get(1)?.canonical;
    require_2x3(probe)?;
    let mut minz = Vec::new();
    let mut minzoneup = Vec::new();
    for c in table.classes() {
        let a = &c.canonical;
        let rows_sorted = increasing(a.row(0)) && increasing(a.row(1));
        if !rows_sorted {
            continue;
        }
        if (0..3).all(|j| a.get(0, j) < a.get(1, j)) {
            minz.push(c.index);
        } else {
            minzoneup.push(c.index);
        }
    }
    let maxima_candidates = minzoneup
        .iter()
        .map(|&k| Ok(table.classify(&varpi(&table.get(k)?.canonical)?)?.index))
        .collect::<Result<Vec<_>>>()?;
    Ok(StandardForms {
        minz,
        minzoneup,
        maxima_candidates,
    })
}

/// `ω = (16)(25)(34)`, the longest element of the symmetric group on six points.
fn omega() -> Permutation {
    Permutation::from_images(vec![5, 4, 3, 2, 1, 0]).unwrap()
}

/// Conjugates the class label by `ω` and returns the resulting class.
pub fn involution_xi(table: &ClassTable, index: usize) -> Result<&MatrixClass> {
    let c = table.get(index)?;
    require_2x3(&c.canonical)?;
    let w = omega();
    let sigma = cycle_label(&c.canonical);
    let conj = w.compose(&sigma).compose(&w);
    table.classify(&Arrangement::from_position_permutation(2, 3, &conj)?)
}

pub type XiOrbits = (Vec<usize>, Vec<(usize, usize)>);

/// Fixed points and swapped pairs `(i, j)` with `i < j` of `ξ`.
pub fn xi_orbits(table: &ClassTable) -> Result<XiOrbits> {
    let mut fixed = Vec::new();
    let mut pairs = Vec::new();
    for c in table.classes() {
        let image = involution_xi(table, c.index)?.index;
        if image == c.index {
            fixed.push(c.index);
        } else if c.index < image {
            pairs.push((c.index, image));
        }
    }
    Ok((fixed, pairs))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Majorisation,
    Entropic,
    Xi,
}

impl EdgeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EdgeKind::Majorisation => "majorisation",
            EdgeKind::Entropic => "entropic",
            EdgeKind::Xi => "xi",
        }
    }
}

/// A directed edge between class indices. Majorisation and entropic edges
/// point from the lower-CMI class to the higher; `xi` edges are undirected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct ClassEdge {
    pub from: usize,
    pub to: usize,
    pub kind: EdgeKind,
}

/// One hexagon: six bottom-row permutations of a fixed top row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Hexagon {
    /// The member whose bottom row decreases in value.
    pub major: usize,
    pub members: Vec<usize>,
    pub edges: Vec<ClassEdge>,
}

fn inversions(v: &[Symbol]) -> usize {
    let mut k = 0;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if v[i] > v[j] {
                k += 1;
            }
        }
    }
    k
}

/// The ten hexagons of bottom-row permutations, with the Bruhat-cover
/// majorisation edges inside each. Every edge is checked by the symbolic
/// majorisation prover.
pub fn honeycomb(table: &ClassTable) -> Result<Vec<Hexagon>> {
    let forms = standard_form_sets(table)?;
    let mut majors: Vec<usize> = forms.minz.iter().chain(&forms.minzoneup).copied().collect();
    majors.sort_unstable();
    let mut out = Vec::new();
    for major in majors {
        let base = table.get(major)?.canonical.clone();
        let bottom: Vec<Symbol> = base.row(1).to_vec();
        let mut orders = Vec::new();
        permutations(&mut bottom.clone(), 0, &mut orders);
        orders.sort();
        let mut members = Vec::new();
        let mut edges = Vec::new();
        for order in &orders {
            let mut cells = base.row(0).to_vec();
            cells.extend_from_slice(order);
            let a = Arrangement::new(2, 3, cells.clone())?;
            members.push(table.classify(&a)?.index);
            for i in 0..3 {
                for j in i + 1..3 {
                    let mut next = order.clone();
                    next.swap(i, j);
                    if inversions(&next) != inversions(order) + 1 {
                        continue;
                    }
                    let mut cells_b = base.row(0).to_vec();
                    cells_b.extend_from_slice(&next);
                    let b = Arrangement::new(2, 3, cells_b)?;
                    if symbolic_matrix_majorises(&a, &b).is_none() {
                        return Err(Error::InvalidInput(format!(
                            "hexagon edge {a} > {b} could not be certified"
                        )));
                    }
                    edges.push(ClassEdge {
                        from: table.classify(&a)?.index,
                        to: table.classify(&b)?.index,
                        kind: EdgeKind::Majorisation,
                    });
                }
            }
        }
        members.sort_unstable();
        edges.sort();
        out.push(Hexagon {
            major,
            members,
            edges,
        });
    }
    Ok(out)
}

/// Honeycomb edges plus one `xi` edge per swapped pair.
pub fn honeycomb_edges(table: &ClassTable) -> Result<Vec<ClassEdge>> {
    let mut edges: Vec<ClassEdge> = honeycomb(table)?
        .into_iter()
        .flat_map(|h| h.edges)
        .collect();
    let (_, pairs) = xi_orbits(table)?;
    edges.extend(pairs.into_iter().map(|(from, to)| ClassEdge {
        from,
        to,
        kind: EdgeKind::Xi,
    }));
    edges.sort();
    Ok(edges)
}

/// Version tag written into every DOT export.
pub const DOT_FORMAT_VERSION: u32 = 1;

/// Renders a class graph in DOT. Nodes are named by class index and
/// labelled with their arrangement; only classes touched by an edge (or
/// listed in `nodes`) are emitted.
pub fn to_dot(
    name: &str,
    table: &ClassTable,
    nodes: &[usize],
    edges: &[ClassEdge],
) -> Result<String> {
    let mut ids: Vec<usize> = nodes
        .iter()
        .copied()
        .chain(edges.iter().flat_map(|e| [e.from, e.to]))
        .collect();
    ids.sort_unstable();
    ids.dedup();
    let mut out = String::new();
    writeln!(
        out,
        "// spectral-cmi class graph, format version {DOT_FORMAT_VERSION}"
    )
    .unwrap();
    writeln!(out, "digraph {name} {{").unwrap();
    writeln!(out, "  node [shape=box, fontname=\"monospace\"];").unwrap();
    for id in ids {
        writeln!(out, "  {id} [label=\"{}\"];", table.get(id)?.canonical).unwrap();
    }
    for e in edges {
        let extra = if e.kind == EdgeKind::Xi {
            ", dir=both, style=dashed"
        } else {
            ""
        };
        writeln!(
            out,
            "  {} -> {} [kind={}{extra}];",
            e.from,
            e.to,
            e.kind.as_str()
        )
        .unwrap();
    }
    out.push_str("}\n");
    Ok(out)
}
