//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails. Numeric arguments select a subset,
//! e.g. `cargo test --test acceptance -- 6 7`.

use std::collections::BTreeSet;
use std::sync::OnceLock;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::Rng;

use spectral_cmi::classes::{
    enumerate_classes, honeycomb, r23_entries, r23_table, xi_orbits, ClassTable,
};
use spectral_cmi::cli;
use spectral_cmi::extrema::{census, verify_theorem_chain, CensusConfig, CensusReport};
use spectral_cmi::order::{
    cmi_diff_transposition, identric_mean, matrix_majorises, symbolic_matrix_majorises,
    titrate_check, RelationKind, TranspositionContext,
};
use spectral_cmi::probability::{cmi, sample_spectrum, substream, LogBase, ProbMatrix};
use spectral_cmi::qubit2::{
    domain_grid, domain_vertex, octahedron_scan, qubit2_informations, verify_total_order_2x2,
    Qubit2Spectrum, ScanFunction,
};
use spectral_cmi::symbolic::Arrangement;
use spectral_cmi::tolerance::EPS;

const LN2: f64 = std::f64::consts::LN_2;
const MINZ: [usize; 5] = [1, 7, 13, 25, 31];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn workers() -> usize {
    std::thread::available_parallelism().map_or(1, |p| p.get())
}

fn run_census(m: usize, n: usize, samples: u64, seed: u64) -> CensusReport {
    let table = enumerate_classes(m, n).expect("enumeration");
    let cfg = CensusConfig {
        m,
        n,
        samples,
        seed,
        workers: workers(),
        checkpoint: None,
    };
    census(&table, &cfg).expect("census")
}

fn census_2x3() -> &'static (CensusReport, f64) {
    static CELL: OnceLock<(CensusReport, f64)> = OnceLock::new();
    CELL.get_or_init(|| {
        let start = Instant::now();
        let r = run_census(2, 3, 1_000_000, 2024);
        (r, start.elapsed().as_secs_f64())
    })
}

fn table() -> &'static ClassTable {
    static CELL: OnceLock<ClassTable> = OnceLock::new();
    CELL.get_or_init(|| r23_table().expect("embedded table"))
}

fn c1_unique_maximum() -> Outcome {
    let (r, secs) = census_2x3();
    let pass = r.max_classes() == vec![48]
        && r.realized_max_classes[0].hits == 1_000_000
        && r.max_tie_events == 0;
    outcome(
        pass,
        format!(
            "argmax {:?} in {} of 1000000 samples, {} tie events, {secs:.1}s",
            r.max_classes(),
            r.realized_max_classes.first().map_or(0, |h| h.hits),
            r.max_tie_events
        ),
    )
}

fn c2_minima() -> Outcome {
    let (r, _) = census_2x3();
    let subset = r.min_classes().iter().all(|k| MINZ.contains(k));
    let at_1e5 = r
        .convergence
        .iter()
        .find(|p| p.samples == 100_000)
        .map_or(0, |p| p.n_min_classes);
    outcome(
        subset && r.min_classes() == MINZ.to_vec() && at_1e5 == 5 && r.min_tie_events == 0,
        format!(
            "argmin union {:?}, {} classes realised by 100000 samples, hits {:?}",
            r.min_classes(),
            at_1e5,
            r.realized_min_classes
                .iter()
                .map(|h| h.hits)
                .collect::<Vec<_>>()
        ),
    )
}

fn c3_census_counts() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (m, n, want_max, want_min) in [(2, 4, 2, 14), (2, 5, 6, 42), (3, 3, 18, 18)] {
        let start = Instant::now();
        let r = run_census(m, n, 1_000_000, 7);
        let (nmax, nmin) = (r.realized_max_classes.len(), r.realized_min_classes.len());
        let half = r.convergence.iter().find(|p| p.samples == 500_000).unwrap();
        let stable = half.n_max_classes == nmax && half.n_min_classes == nmin;
        let ok = nmax == want_max && nmin == want_min && stable;
        pass &= ok;
        parts.push(format!(
            "({m},{n}) {nmax}/{nmin} (want {want_max}/{want_min}, at half {}/{}, ties {}/{}, {:.0}s)",
            half.n_max_classes,
            half.n_min_classes,
            r.max_tie_events,
            r.min_tie_events,
            start.elapsed().as_secs_f64()
        ));
    }
    outcome(pass, parts.join("; "))
}

fn c4_gamma_extrema() -> Outcome {
    let closed = 0.75 * 3f64.ln() - LN2;
    let v4 = qubit2_informations(&domain_vertex(4).unwrap(), LogBase::E);
    let v1 = qubit2_informations(&domain_vertex(1).unwrap(), LogBase::E);
    let v2 = qubit2_informations(&domain_vertex(2).unwrap(), LogBase::E);
    let mut pass = (v4.gamma_max - closed).abs() < 1e-12
        && (v1.gamma_min - LN2).abs() < 1e-12
        && v2.gamma_min.abs() < 1e-12;

    let gmax = octahedron_scan(ScanFunction::GammaMax, 201, LogBase::E).unwrap();
    let top = gmax
        .iter()
        .map(|r| r.value)
        .fold(f64::NEG_INFINITY, f64::max);
    pass &= (top - closed).abs() < 1e-12;

    let gmin = octahedron_scan(ScanFunction::GammaMin, 201, LogBase::E).unwrap();
    let top_min = gmin
        .iter()
        .map(|r| r.value)
        .fold(f64::NEG_INFINITY, f64::max);
    let argmax: BTreeSet<(i64, i64, i64)> = gmin
        .iter()
        .filter(|r| r.value >= top_min - 1e-12)
        .map(|r| {
            (
                r.t11.round() as i64,
                r.t22.round() as i64,
                r.t33.round() as i64,
            )
        })
        .collect();
    let on_vertices = gmin.iter().filter(|r| r.value >= top_min - 1e-12).all(|r| {
        r.t11.abs() + r.t22.abs() + r.t33.abs() == 1.0
            && [r.t11, r.t22, r.t33]
                .iter()
                .filter(|x| x.abs() == 1.0)
                .count()
                == 1
    });
    let center = gmin
        .iter()
        .find(|r| (r.t11, r.t22, r.t33) == (0.0, 0.0, 0.0))
        .map_or(f64::NAN, |r| r.value);
    pass &=
        (top_min - LN2).abs() < 1e-12 && argmax.len() == 6 && on_vertices && center.abs() < 1e-15;

    let mut locus_ok = true;
    let mut zero_points = 0;
    let mut gmin_zero_ok = true;
    for s in domain_grid(240) {
        let i = qubit2_informations(&s, LogBase::E);
        let on_line = (s.a - s.b).abs() < 1e-6 && (s.a + s.c - 0.5).abs() < 1e-6;
        if (i.gamma_max < 1e-10) != on_line {
            locus_ok = false;
        }
        zero_points += usize::from(on_line);
        let near_v2 = [s.a, s.b, s.c, s.d].iter().all(|x| (x - 0.25).abs() < 1e-6);
        if i.gamma_min < 1e-10 && !near_v2 {
            gmin_zero_ok = false;
        }
    }
    pass &= locus_ok && gmin_zero_ok;
    outcome(
        pass,
        format!(
            "gamma_max(V4)={:.15}, grid-201 max {:.15}; gamma_min max {:.15} at {} vertices, center {:.1e}; zero locus exact on {} grid points: {}",
            v4.gamma_max,
            top,
            top_min,
            argmax.len(),
            center,
            zero_points,
            locus_ok && gmin_zero_ok
        ),
    )
}

fn c5_chain_certificates() -> Outcome {
    let start = Instant::now();
    let steps = verify_theorem_chain(table()).unwrap();
    let elapsed = start.elapsed();
    let golden = [
        include_str!("golden/chain_step_i.txt"),
        include_str!("golden/chain_step_ii.txt"),
        include_str!("golden/chain_step_iii.txt"),
        include_str!("golden/chain_step_iv.txt"),
    ];
    let traces_match = steps
        .iter()
        .zip(golden)
        .all(|(s, g)| s.verdict.certificate.render() == g);
    let proven = steps.iter().filter(|s| s.verdict.is_forward()).count();
    let ends: Vec<(usize, usize)> = steps[..4].iter().map(|s| (s.from, s.to)).collect();
    let pass = traces_match
        && proven == steps.len()
        && ends == vec![(24, 42), (42, 48), (60, 54), (54, 48)]
        && elapsed.as_millis() < 1000;
    outcome(
        pass,
        format!(
            "{proven}/{} steps proven, golden traces match: {traces_match}, {:.1}ms",
            steps.len(),
            elapsed.as_secs_f64() * 1e3
        ),
    )
}

fn c6_identric() -> Outcome {
    let mut rng = substream(606, 0);
    let inv_e = (-1f64).exp();
    let (mut bounds, mut slope, mut curve) = (0, 0, 0);
    for _ in 0..100_000 {
        let x: f64 = rng.random_range(1e-3..0.9);
        let t: f64 = rng.random_range(1e-3..(1.0 - 1.001 * x));
        let psi = |x: f64| identric_mean(x, x + t).unwrap();
        let ratio = (psi(x) - x) / t;
        if !(inv_e < ratio && ratio < 0.5) {
            bounds += 1;
        }
        let h = 1e-3 * x;
        if psi(x + h) - psi(x) <= 0.0 {
            slope += 1;
        }
        if psi(x + h) - 2.0 * psi(x) + psi(x - h) >= 0.0 {
            curve += 1;
        }
    }
    let mut worst: f64 = 0.0;
    for k in 0..10_000u64 {
        let mut r = substream(607, k);
        let s = sample_spectrum(6, &mut r).unwrap();
        let mut cells: Vec<u8> = (0..6).collect();
        cells.shuffle(&mut r);
        let p = Arrangement::new(2, 3, cells)
            .unwrap()
            .instantiate(&s)
            .unwrap();
        let a = r.random_range(0..6);
        let b = (a + r.random_range(1..6)) % 6;
        let ctx = TranspositionContext::numeric(&p, a, b).unwrap();
        let mut q = p.clone();
        q.swap_entries(a, b);
        worst = worst.max((cmi_diff_transposition(&ctx).unwrap() - (cmi(&q) - cmi(&p))).abs());
    }
    outcome(
        bounds + slope + curve == 0 && worst < 1e-10,
        format!(
            "bound/slope/concavity violations {bounds}/{slope}/{curve} over 100000; identity max error {worst:.1e} over 10000 contexts"
        ),
    )
}

fn c7_order_consistency() -> Outcome {
    let t = table();
    let spectra: Vec<_> = (0..1000u64)
        .map(|k| sample_spectrum(6, &mut substream(707, k)).unwrap())
        .collect();
    let mut maj_checked = 0u64;
    let mut maj_bad = 0u64;
    let mut numeric_against_lex = 0u64;
    for s in &spectra {
        let ms: Vec<ProbMatrix> = t
            .classes()
            .iter()
            .map(|c| c.canonical.instantiate(s).unwrap())
            .collect();
        let values: Vec<f64> = ms.iter().map(cmi).collect();
        for i in 0..60 {
            for j in 0..60 {
                if i != j && matrix_majorises(&ms[i], &ms[j]).unwrap() {
                    maj_checked += 1;
                    if values[i] > values[j] + EPS {
                        maj_bad += 1;
                    }
                    if i > j {
                        numeric_against_lex += 1;
                    }
                }
            }
        }
    }
    let mut forward = 0;
    let mut titrate_bad = 0;
    for c in t.classes() {
        for p in 0..6 {
            for q in p + 1..6 {
                let ctx = TranspositionContext::symbolic(&c.canonical, p, q).unwrap();
                if titrate_check(&ctx).unwrap().kind != RelationKind::ProvenForward {
                    continue;
                }
                forward += 1;
                let image = c.canonical.swapped(p, q);
                for s in &spectra {
                    let before = cmi(&c.canonical.instantiate(s).unwrap());
                    let after = cmi(&image.instantiate(s).unwrap());
                    if before > after + EPS {
                        titrate_bad += 1;
                    }
                }
            }
        }
    }
    let mut lex_bad = 0;
    for (i, a) in t.classes().iter().enumerate() {
        for b in &t.classes()[..i] {
            if symbolic_matrix_majorises(&a.canonical, &b.canonical).is_some() {
                lex_bad += 1;
            }
        }
    }
    outcome(
        maj_bad == 0 && titrate_bad == 0 && lex_bad == 0,
        format!(
            "{maj_checked} numeric majorisations, {maj_bad} CMI violations; {forward} transposition certificates, {titrate_bad} violations; \
             a-priori majorisations against lexicographic order: {lex_bad}; \
             numeric majorisations against it: {numeric_against_lex} (reported, not asserted)"
        ),
    )
}

fn c8_tables() -> Outcome {
    let counts: Vec<usize> = [(2, 2), (2, 3), (2, 4), (2, 5), (3, 3)]
        .iter()
        .map(|&(m, n)| enumerate_classes(m, n).unwrap().len())
        .collect();
    let enumerated = enumerate_classes(2, 3).unwrap();
    let entries = r23_entries().unwrap();
    let table_ok = entries.len() == 60
        && entries.iter().zip(enumerated.classes()).all(|(e, c)| {
            e.index == c.index && e.arrangement == c.canonical && e.cycle_label == c.cycle_label
        });
    let (fixed, pairs) = xi_orbits(table()).unwrap();
    let hexes = honeycomb(table()).unwrap();
    let mut bruhat_ok = hexes.len() == 10;
    for h in &hexes {
        let major = &table().get(h.major).unwrap().canonical;
        let top = major.row(0).to_vec();
        let (u, v, w) = (major.get(1, 0), major.get(1, 1), major.get(1, 2));
        let id = |bottom: [u8; 3]| {
            let mut cells = top.clone();
            cells.extend_from_slice(&bottom);
            table()
                .classify(&Arrangement::new(2, 3, cells).unwrap())
                .unwrap()
                .index
        };
        let (uvw, uwv, vuw, vwu, wuv, wvu) = (
            id([u, v, w]),
            id([u, w, v]),
            id([v, u, w]),
            id([v, w, u]),
            id([w, u, v]),
            id([w, v, u]),
        );
        let mut want: Vec<(usize, usize)> = vec![
            (uvw, uwv),
            (uvw, vuw),
            (uwv, vwu),
            (uwv, wuv),
            (vuw, vwu),
            (vuw, wuv),
            (vwu, wvu),
            (wuv, wvu),
        ];
        want.sort_unstable();
        let mut got: Vec<(usize, usize)> = h.edges.iter().map(|e| (e.from, e.to)).collect();
        got.sort_unstable();
        bruhat_ok &= h.members.len() == 6 && got == want && uvw == h.major;
    }
    let pass = counts == vec![3, 60, 840, 15120, 5040]
        && table_ok
        && fixed.len() == 16
        && pairs.len() == 22
        && bruhat_ok;
    outcome(
        pass,
        format!(
            "counts {counts:?}; embedded table matches enumeration: {table_ok}; xi fixes {} and swaps {} pairs; {} hexagons with the bottom-row Bruhat pattern: {bruhat_ok}",
            fixed.len(),
            pairs.len(),
            hexes.len()
        ),
    )
}

fn c9_two_by_two() -> Outcome {
    let (mut chain_bad, mut distance_bad) = (0, 0);
    let mut worst: f64 = 0.0;
    for k in 0..100_000u64 {
        let s = sample_spectrum(4, &mut substream(909, k)).unwrap();
        let v = s.values();
        let q = Qubit2Spectrum::new(v[0], v[1], v[2], v[3]).unwrap();
        let o = verify_total_order_2x2(&q).unwrap();
        chain_bad += usize::from(!o.chain_holds);
        distance_bad += usize::from(!o.distance_chain_holds);
        let i = qubit2_informations(&q, LogBase::E);
        worst = worst
            .max((i.i_min - o.cmi[0]).abs())
            .max((i.i_max_class - o.cmi[2]).abs());
    }
    outcome(
        chain_bad == 0 && distance_bad == 0 && worst < 1e-12,
        format!(
            "CMI chain failures {chain_bad}, distance chain failures {distance_bad} over 100000; endpoint agreement {worst:.1e}"
        ),
    )
}

fn c10_determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let runs: [&[&str]; 4] = [
        &[
            "census",
            "--m",
            "2",
            "--n",
            "4",
            "--samples",
            "30000",
            "--seed",
            "3",
            "--workers",
            "2",
        ],
        &[
            "census",
            "--samples",
            "30000",
            "--seed",
            "9",
            "--format",
            "csv",
        ],
        &["qubit2-scan", "--function", "gamma-min", "--grid", "41"],
        &["honeycomb"],
    ];
    let mut identical = 0;
    for (k, args) in runs.iter().enumerate() {
        let mut bytes = Vec::new();
        for rep in 0..2 {
            let path = dir.path().join(format!("run{k}_{rep}.out"));
            let mut full = vec!["spectral-cmi".to_string()];
            full.extend(args.iter().map(|s| s.to_string()));
            full.extend(["--output".to_string(), path.display().to_string()]);
            let code = cli::run(full, &mut std::io::sink(), &mut std::io::sink());
            assert_eq!(code, 0, "{args:?}");
            bytes.push(std::fs::read(&path).unwrap());
        }
        identical += usize::from(bytes[0] == bytes[1] && !bytes[0].is_empty());
    }
    let a = run_census(2, 3, 30_000, 5);
    let mut cfg = CensusConfig {
        m: 2,
        n: 3,
        samples: 30_000,
        seed: 5,
        workers: 3,
        checkpoint: None,
    };
    let b = census(&r23_table().unwrap(), &cfg).unwrap();
    cfg.workers = 1;
    let c = census(&r23_table().unwrap(), &cfg).unwrap();
    let workers_agree = a.realized_max_classes == b.realized_max_classes
        && a.realized_min_classes == b.realized_min_classes
        && b.realized_min_classes == c.realized_min_classes
        && a.convergence == c.convergence;
    outcome(
        identical == runs.len() && workers_agree,
        format!(
            "{identical}/{} reruns byte-identical; realised sets independent of worker count: {workers_agree}",
            runs.len()
        ),
    )
}

fn main() {
    type Check = fn() -> Outcome;
    let criteria: [(&str, Check); 10] = [
        ("unique 2x3 maximum", c1_unique_maximum),
        ("2x3 minima", c2_minima),
        ("census class counts", c3_census_counts),
        ("two-qubit gap extrema", c4_gamma_extrema),
        ("proof-chain certificates", c5_chain_certificates),
        ("identric mean", c6_identric),
        ("order consistency", c7_order_consistency),
        ("class tables", c8_tables),
        ("2x2 total order", c9_two_by_two),
        ("determinism", c10_determinism),
    ];
    let only: Vec<usize> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let mut failed = 0;
    let mut ran = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        if !only.is_empty() && !only.contains(&(k + 1)) {
            continue;
        }
        ran += 1;
        let start = Instant::now();
        let o = check();
        failed += usize::from(!o.pass);
        println!(
            "[{}] criterion {:>2} {name}: {} [{:.1}s]",
            if o.pass { "PASS" } else { "FAIL" },
            k + 1,
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {}/{ran} criteria passed", ran - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
