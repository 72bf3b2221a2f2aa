//! Two-qubit T-states: t-vectors, the information functionals of a fixed
//! spectrum, their gaps, separability tests, and the total order of the
//! three `2 x 2` classes.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::permutation::Permutation;
use crate::probability::{binary_entropy, cmi, shannon_entropy, LogBase, ProbMatrix};
use crate::tolerance::{EPS, GEOMETRY_SLACK};

const LN2: f64 = std::f64::consts::LN_2;

/// A sorted two-qubit spectrum `a >= b >= c >= d >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Qubit2Spectrum {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Qubit2Spectrum {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let v = [a, b, c, d];
        if let Some(&x) = v.iter().find(|x| !x.is_finite() || **x < -EPS) {
            return Err(Error::Domain { value: x });
        }
        if v.windows(2).any(|w| w[0] < w[1] - EPS) {
            return Err(Error::InvalidSpectrum(format!(
                "{v:?} is not sorted descending"
            )));
        }
        let total: f64 = v.iter().sum();
        if (total - 1.0).abs() > EPS {
            return Err(Error::InvalidSpectrum(format!("{v:?} sums to {total}")));
        }
        Ok(Qubit2Spectrum { a, b, c, d })
    }

    /// From `(a, b, c)` with `d = 1 - a - b - c`.
    pub fn from_abc(a: f64, b: f64, c: f64) -> Result<Self> {
        Self::new(a, b, c, 1.0 - a - b - c)
    }

    /// Sorts four eigenvalues descending, clearing negatives within the
    /// geometry slack.
    pub fn from_unsorted(mut v: [f64; 4]) -> Result<Self> {
        for x in v.iter_mut() {
            if *x < 0.0 && *x >= -GEOMETRY_SLACK {
                *x = 0.0;
            }
        }
        v.sort_by(|x, y| y.total_cmp(x));
        Self::new(v[0], v[1], v[2], v[3])
    }

    pub fn values(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }
}

/// Diagonal correlation triple `(t11, t22, t33)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TVector {
    pub t11: f64,
    pub t22: f64,
    pub t33: f64,
}

impl TVector {
    pub fn new(t11: f64, t22: f64, t33: f64) -> Self {
        TVector { t11, t22, t33 }
    }

    pub fn l1_norm(&self) -> f64 {
        self.t11.abs() + self.t22.abs() + self.t33.abs()
    }

    pub fn in_tetrahedron(&self) -> bool {
        spectrum_from_tvector(self).in_tetrahedron
    }

    /// Inside both the Bell tetrahedron and its reflection.
    pub fn in_octahedron(&self) -> bool {
        self.in_tetrahedron() && self.l1_norm() <= 1.0 + GEOMETRY_SLACK
    }
}

/// The t-vector of the maximal-QMI Bell-diagonal state with spectrum `s`.
pub fn tvector_from_spectrum(s: &Qubit2Spectrum) -> TVector {
    let Qubit2Spectrum { a, b, c, d } = *s;
    TVector::new(a - b + c - d, -a + b + c - d, a + b - c - d)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InducedSpectrum {
    /// `(a, b, c, d)` in the order of the inverse map (not sorted).
    pub values: [f64; 4],
    pub in_tetrahedron: bool,
}

/// Inverse of [`tvector_from_spectrum`]; points outside the tetrahedron
/// are flagged rather than rejected.
pub fn spectrum_from_tvector(t: &TVector) -> InducedSpectrum {
    let (u, v, w) = (t.t11, t.t22, t.t33);
    let values = [
        (1.0 + u - v + w) / 4.0,
        (1.0 - u + v + w) / 4.0,
        (1.0 + u + v - w) / 4.0,
        (1.0 - u - v - w) / 4.0,
    ];
    InducedSpectrum {
        values,
        in_tetrahedron: values.iter().all(|&x| x >= -GEOMETRY_SLACK),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Informations {
    pub i_max_qmi: f64,
    pub i_min: f64,
    pub i_max_class: f64,
    pub gamma_max: f64,
    pub gamma_min: f64,
    /// Every eigenvalue is at most 1/2, so the maximal-QMI state is separable.
    pub max_qmi_is_separable: bool,
}

fn h(x: f64) -> f64 {
    binary_entropy(x.clamp(0.0, 1.0)).expect("clamped into the domain")
}

/// The five functionals of a sorted spectrum, in `base`.
pub fn qubit2_informations(s: &Qubit2Spectrum, base: LogBase) -> Informations {
    let Qubit2Spectrum { a, b, c, .. } = *s;
    let big_h = shannon_entropy(&s.values());
    let (hab, hac, hbc) = (h(a + b), h(a + c), h(b + c));
    let f = |v: f64| base.from_nats(v);
    Informations {
        i_max_qmi: f(2.0 * LN2 - big_h),
        i_min: f(hab + hac - big_h),
        i_max_class: f(hac + hbc - big_h),
        gamma_max: f(2.0 * LN2 - hac - hbc),
        gamma_min: f(2.0 * LN2 - hab - hac),
        max_qmi_is_separable: a <= 0.5 + EPS,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Separability {
    pub separable_tstate: bool,
    pub absolutely_separable: bool,
    pub mems_concurrence: f64,
}

pub fn separability_classifiers(s: &Qubit2Spectrum) -> Separability {
    let Qubit2Spectrum { a, b, c, d } = *s;
    let root = 2.0 * (b * d).sqrt();
    Separability {
        separable_tstate: a <= 0.5 + EPS,
        absolutely_separable: a <= c + root + EPS,
        mems_concurrence: (a - c - root).max(0.0),
    }
}

/// Normalisation of the classical Bloch components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum BlochNormalization {
    /// With the factor 1/4 on every component.
    #[default]
    AsPrinted,
    /// Without it (the usual `ρ = (I + r·σ ⊗ I + ...)/4` convention).
    Conventional,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlochClassical {
    pub ra_z: f64,
    pub rb_z: f64,
    pub t_z: f64,
}

/// z-components of the diagonal state `diag(λ_{τ(1)}, ..., λ_{τ(4)})`.
pub fn bloch_classical(
    s: &Qubit2Spectrum,
    tau: &Permutation,
    norm: BlochNormalization,
) -> Result<BlochClassical> {
    if tau.len() != 4 {
        return Err(Error::InvalidPermutation {
            len: 4,
            detail: format!("degree {}", tau.len()),
        });
    }
    let v = s.values();
    let l: Vec<f64> = (0..4).map(|k| v[tau.apply(k)]).collect();
    let scale = match norm {
        BlochNormalization::AsPrinted => 0.25,
        BlochNormalization::Conventional => 1.0,
    };
    Ok(BlochClassical {
        ra_z: scale * (l[0] + l[1] - l[2] - l[3]),
        rb_z: scale * (l[0] - l[1] + l[2] - l[3]),
        t_z: scale * (l[0] - l[1] - l[2] + l[3]),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TotalOrder2x2 {
    /// CMI of `[[a,b],[c,d]]`, `[[a,b],[d,c]]`, `[[a,d],[c,b]]` in nats.
    pub cmi: [f64; 3],
    pub chain_holds: bool,
    /// `|a+d-1/2|`, `|a+c-1/2|`, `|a+b-1/2|`.
    pub distances: [f64; 3],
    pub distance_chain_holds: bool,
}

/// Evaluates the three `2 x 2` classes and checks their strict ordering.
pub fn verify_total_order_2x2(s: &Qubit2Spectrum) -> Result<TotalOrder2x2> {
    let Qubit2Spectrum { a, b, c, d } = *s;
    if !(a > b && b > c && c > d && d > 0.0) {
        return Err(Error::Degenerate(format!(
            "({a}, {b}, {c}, {d}) is not strictly ordered and positive"
        )));
    }
    let m = |x: [f64; 4]| ProbMatrix::from_flat(2, 2, x.to_vec()).map(|p| cmi(&p));
    let values = [m([a, b, c, d])?, m([a, b, d, c])?, m([a, d, c, b])?];
    let distances = [
        (a + d - 0.5).abs(),
        (a + c - 0.5).abs(),
        (a + b - 0.5).abs(),
    ];
    Ok(TotalOrder2x2 {
        cmi: values,
        chain_holds: values[0] < values[1] && values[1] < values[2],
        distances,
        distance_chain_holds: distances[0] < distances[1] && distances[1] < distances[2],
    })
}

/// `(a, b, c)` of the five corners of the fundamental domain.
pub const DOMAIN_VERTICES: [(f64, f64, f64); 5] = [
    (0.5, 0.5, 0.0),
    (0.25, 0.25, 0.25),
    (1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0),
    (0.5, 0.25, 0.25),
    (0.5, 1.0 / 6.0, 1.0 / 6.0),
];

/// Vertex `V_k` (1-based) as a spectrum.
pub fn domain_vertex(k: usize) -> Result<Qubit2Spectrum> {
    let &(a, b, c) = DOMAIN_VERTICES
        .get(k.wrapping_sub(1))
        .ok_or_else(|| Error::InvalidInput(format!("no vertex V{k}")))?;
    Qubit2Spectrum::from_abc(a, b, c)
}

/// Lattice points `(i, j, k) / steps` of the sorted chamber with `a <= 1/2`.
/// A multiple of 12 for `steps` puts all five vertices on the lattice.
pub fn domain_grid(steps: usize) -> Vec<Qubit2Spectrum> {
    let mut out = Vec::new();
    let s = steps as f64;
    for i in 0..=steps / 2 {
        for j in 0..=i {
            for k in 0..=j {
                let Some(l) = steps.checked_sub(i + j + k) else {
                    continue;
                };
                if l > k {
                    continue;
                }
                let (a, b, c) = (i as f64 / s, j as f64 / s, k as f64 / s);
                out.push(Qubit2Spectrum {
                    a,
                    b,
                    c,
                    d: l as f64 / s,
                });
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanFunction {
    GammaMax,
    GammaMin,
    IMaxQmi,
    IMin,
    IMaxClass,
}

impl ScanFunction {
    pub const ALL: [ScanFunction; 5] = [
        ScanFunction::GammaMax,
        ScanFunction::GammaMin,
        ScanFunction::IMaxQmi,
        ScanFunction::IMin,
        ScanFunction::IMaxClass,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScanFunction::GammaMax => "gamma-max",
            ScanFunction::GammaMin => "gamma-min",
            ScanFunction::IMaxQmi => "i-max-qmi",
            ScanFunction::IMin => "i-min",
            ScanFunction::IMaxClass => "i-max-class",
        }
    }

    pub fn select(self, i: &Informations) -> f64 {
        match self {
            ScanFunction::GammaMax => i.gamma_max,
            ScanFunction::GammaMin => i.gamma_min,
            ScanFunction::IMaxQmi => i.i_max_qmi,
            ScanFunction::IMin => i.i_min,
            ScanFunction::IMaxClass => i.i_max_class,
        }
    }
}

impl fmt::Display for ScanFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScanFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.replace('_', "-").to_ascii_lowercase();
        Self::ALL
            .into_iter()
            .find(|f| f.name() == key)
            .ok_or_else(|| Error::InvalidInput(format!("unknown function {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridRecord {
    pub t11: f64,
    pub t22: f64,
    pub t33: f64,
    pub value: f64,
}

/// Evaluates `function` on the `resolution³` lattice of `[-1, 1]³`,
/// keeping the points of the octahedron. Each point's eigenvalues are
/// sorted before evaluation. Records come in row-major lattice order.
pub fn octahedron_scan(
    function: ScanFunction,
    resolution: usize,
    base: LogBase,
) -> Result<Vec<GridRecord>> {
    if resolution < 2 {
        return Err(Error::InvalidInput(format!(
            "resolution must be at least 2, got {resolution}"
        )));
    }
    let coord = |i: usize| -1.0 + 2.0 * i as f64 / (resolution - 1) as f64;
    let slabs: Vec<Vec<GridRecord>> = (0..resolution)
        .into_par_iter()
        .map(|i| {
            let mut slab = Vec::new();
            for j in 0..resolution {
                for k in 0..resolution {
                    let t = TVector::new(coord(i), coord(j), coord(k));
                    if t.l1_norm() > 1.0 + GEOMETRY_SLACK {
                        continue;
                    }
                    let induced = spectrum_from_tvector(&t);
                    let Ok(s) = Qubit2Spectrum::from_unsorted(induced.values) else {
                        continue;
                    };
                    let value = function.select(&qubit2_informations(&s, base));
                    slab.push(GridRecord {
                        t11: t.t11,
                        t22: t.t22,
                        t33: t.t33,
                        value,
                    });
                }
            }
            slab
        })
        .collect();
    Ok(slabs.into_iter().flatten().collect())
}

/// CSV with header `t11,t22,t33,value` and 17 significant digits.
pub fn grid_csv(records: &[GridRecord]) -> String {
    let mut out = String::from("t11,t22,t33,value\n");
    for r in records {
        out.push_str(&format!(
            "{:.16e},{:.16e},{:.16e},{:.16e}\n",
            r.t11, r.t22, r.t33, r.value
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() < tol
    }

    #[test]
    fn tvector_round_trip() {
        let pure = Qubit2Spectrum::new(1.0, 0.0, 0.0, 0.0).unwrap();
        assert_eq!(tvector_from_spectrum(&pure), TVector::new(1.0, -1.0, 1.0));
        let mixed = Qubit2Spectrum::new(0.25, 0.25, 0.25, 0.25).unwrap();
        assert_eq!(tvector_from_spectrum(&mixed), TVector::new(0.0, 0.0, 0.0));
        let s = Qubit2Spectrum::new(0.4, 0.3, 0.2, 0.1).unwrap();
        let back = spectrum_from_tvector(&tvector_from_spectrum(&s));
        for (x, y) in back.values.iter().zip(s.values()) {
            assert!(close(*x, y, 1e-14));
        }
        let outside = spectrum_from_tvector(&TVector::new(1.0, 1.0, 1.0));
        assert!(!outside.in_tetrahedron);
        assert!(close(outside.values[3], -0.5, 1e-15));
    }

    #[test]
    fn vertex_values() {
        let v4 = domain_vertex(4).unwrap();
        let i = qubit2_informations(&v4, LogBase::E);
        assert!(close(i.gamma_max, 0.75 * 3f64.ln() - LN2, 1e-12));
        assert!(close(i.gamma_max, 0.130_812_035_941_136_96, 1e-15));
        let v1 = qubit2_informations(&domain_vertex(1).unwrap(), LogBase::E);
        assert!(close(v1.gamma_min, LN2, 1e-12));
        let v2 = qubit2_informations(&domain_vertex(2).unwrap(), LogBase::E);
        for x in [
            v2.i_max_qmi,
            v2.i_min,
            v2.i_max_class,
            v2.gamma_max,
            v2.gamma_min,
        ] {
            assert!(x.abs() < 1e-12);
        }
        assert!(close(i.gamma_max, i.i_max_qmi - i.i_max_class, 1e-12));
        assert!(close(i.gamma_min, i.i_max_qmi - i.i_min, 1e-12));
        assert!(domain_vertex(6).is_err());
    }

    #[test]
    fn separability_examples() {
        let mixed = separability_classifiers(&Qubit2Spectrum::new(0.25, 0.25, 0.25, 0.25).unwrap());
        assert_eq!(
            (mixed.separable_tstate, mixed.absolutely_separable),
            (true, true)
        );
        assert_eq!(mixed.mems_concurrence, 0.0);
        let pure = separability_classifiers(&Qubit2Spectrum::new(1.0, 0.0, 0.0, 0.0).unwrap());
        assert_eq!(
            (pure.separable_tstate, pure.absolutely_separable),
            (false, false)
        );
        assert_eq!(pure.mems_concurrence, 1.0);
        let v4 = separability_classifiers(&Qubit2Spectrum::new(0.5, 0.25, 0.25, 0.0).unwrap());
        assert_eq!(
            (v4.separable_tstate, v4.absolutely_separable),
            (true, false)
        );
        assert!(close(v4.mems_concurrence, 0.25, 1e-15));
    }

    #[test]
    fn bloch_components() {
        let s = Qubit2Spectrum::new(0.4, 0.3, 0.2, 0.1).unwrap();
        let id =
            bloch_classical(&s, &Permutation::identity(4), BlochNormalization::AsPrinted).unwrap();
        assert!(close(id.ra_z, (0.4 + 0.3 - 0.2 - 0.1) / 4.0, 1e-15));
        assert!(close(id.rb_z, (0.4 - 0.3 + 0.2 - 0.1) / 4.0, 1e-15));
        assert!(close(id.t_z, (0.4 - 0.3 - 0.2 + 0.1) / 4.0, 1e-15));
        let tau = Permutation::from_cycles("(24)", 4).unwrap();
        let sw = bloch_classical(&s, &tau, BlochNormalization::AsPrinted).unwrap();
        assert!(close(sw.ra_z, (0.4 + 0.1 - 0.2 - 0.3) / 4.0, 1e-15));
        let conv = bloch_classical(&s, &tau, BlochNormalization::Conventional).unwrap();
        assert!(close(conv.ra_z, 4.0 * sw.ra_z, 1e-15));
        let u = Qubit2Spectrum::new(0.25, 0.25, 0.25, 0.25).unwrap();
        let z = bloch_classical(&u, &tau, BlochNormalization::AsPrinted).unwrap();
        assert_eq!((z.ra_z, z.rb_z, z.t_z), (0.0, 0.0, 0.0));
    }

    #[test]
    fn two_by_two_chain() {
        let s = Qubit2Spectrum::new(0.4, 0.3, 0.2, 0.1).unwrap();
        let o = verify_total_order_2x2(&s).unwrap();
        assert!(o.chain_holds && o.distance_chain_holds);
        let i = qubit2_informations(&s, LogBase::E);
        assert!(close(i.i_min, o.cmi[0], 1e-12));
        assert!(close(i.i_max_class, o.cmi[2], 1e-12));
        assert!(verify_total_order_2x2(&Qubit2Spectrum::new(0.4, 0.3, 0.3, 0.0).unwrap()).is_err());
    }

    #[test]
    fn scan_landmarks() {
        let recs = octahedron_scan(ScanFunction::GammaMin, 5, LogBase::E).unwrap();
        let at = |t: (f64, f64, f64)| {
            recs.iter()
                .find(|r| (r.t11, r.t22, r.t33) == t)
                .map(|r| r.value)
                .unwrap()
        };
        assert!(close(at((1.0, 0.0, 0.0)), LN2, 1e-12));
        assert!(close(at((0.0, 0.0, -1.0)), LN2, 1e-12));
        assert!(at((0.0, 0.0, 0.0)).abs() < 1e-15);
        let gm = octahedron_scan(ScanFunction::GammaMax, 5, LogBase::E).unwrap();
        let mid = gm
            .iter()
            .find(|r| (r.t11, r.t22, r.t33) == (0.5, -0.5, 0.0))
            .unwrap();
        assert!(close(mid.value, 0.75 * 3f64.ln() - LN2, 1e-12));
        assert!(octahedron_scan(ScanFunction::GammaMax, 1, LogBase::E).is_err());
        assert!(grid_csv(&gm).starts_with("t11,t22,t33,value\n"));
    }

    #[test]
    fn domain_grid_contains_vertices() {
        let g = domain_grid(12);
        for k in 1..=5 {
            let v = domain_vertex(k).unwrap();
            assert!(g.iter().any(|p| close(p.a, v.a, 1e-15)
                && close(p.b, v.b, 1e-15)
                && close(p.c, v.c, 1e-15)));
        }
        assert!(g
            .iter()
            .all(|p| p.a <= 0.5 && p.a >= p.b && p.b >= p.c && p.c >= p.d));
    }

    #[test]
    fn function_names() {
        assert_eq!(
            "gamma-max".parse::<ScanFunction>().unwrap(),
            ScanFunction::GammaMax
        );
        assert_eq!(
            "i_max_class".parse::<ScanFunction>().unwrap(),
            ScanFunction::IMaxClass
        );
        assert!("gamma".parse::<ScanFunction>().is_err());
    }
}
