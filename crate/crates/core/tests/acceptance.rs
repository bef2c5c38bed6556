//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines are always printed. The
//! process exits nonzero if a criterion fails that is not listed in
//! `KNOWN_FAILURES`, or if a listed one starts passing.

use std::panic::{self, AssertUnwindSafe};
use std::time::Instant;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use colorcode::anyons::{
    color_code_bosons, color_code_theory, condense, find_isomorphism, toric_code_theory, Census,
    PauliLabel, VACUUM,
};
use colorcode::lattice::{dual_triangular, link_lattice};
use colorcode::models::{color_code_h, perturbed_h, tfim_h, toric_code_h, toric_code_with_holes_h, Couplings};
use colorcode::observables::{
    corner_point, holes_ground_state, holes_witness, ising_magnetization_sq, magnetization_crossing,
    DEFAULT_THRESHOLD,
};
use colorcode::pauli::stabilizer_degeneracy;
use colorcode::spectra::{apply, dense_matrix, StateVector};
use colorcode::transform::{
    ising_sector_equivalence, structurally_equal, transform_h_ising, verify_group_image,
    FrameSpec, SectorRoute,
};
use colorcode::{build_hex_torus, Color, ColorLattice, OperatorSum, PauliString, TorusSpec};

/// Criteria expected to fail, with the reason recorded in the printed line.
const KNOWN_FAILURES: &[(usize, &str)] = &[(
    7,
    "the stated fusion rule for distinct colors and distinct labels predicts a boson, \
     but every such pair fuses to a fermion in any theory consistent with the other rules",
)];

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Outcome { passed, detail: detail.into() }
    }
}

fn torus(l1: usize, l2: usize) -> ColorLattice {
    build_hex_torus(TorusSpec::new(l1, l2).unwrap()).unwrap()
}

fn random_couplings(rng: &mut ChaCha8Rng) -> Couplings {
    Couplings::new(rng.random(), rng.random(), rng.random()).unwrap()
}

fn degeneracy() -> Outcome {
    let lat = torus(3, 3);
    let cc = stabilizer_degeneracy(&color_code_h(&lat).generators(), lat.n_qubits()).unwrap();
    let tri = link_lattice(&lat, Color::Red);
    let tc = stabilizer_degeneracy(&toric_code_h(&tri).unwrap().generators(), tri.n_sites()).unwrap();
    Outcome::new(cc == 16 && tc == 4, format!("color code {cc} (want 16), red-link toric code {tc} (want 4)"))
}

fn decoupling() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let lattices = [torus(3, 3), torus(6, 6)];
    let mut bad = Vec::new();
    for trial in 0..20 {
        let j = random_couplings(&mut rng);
        for lat in &lattices {
            let d = transform_h_ising(&perturbed_h(lat, j).unwrap()).unwrap();
            let mut ok = d.constant == -(lat.plaquettes().len() as f64);
            for c in Color::ALL {
                let expect = tfim_h(&dual_triangular(lat, c), j.get(c)).unwrap();
                ok &= structurally_equal(&d.tfims[c.index()], &expect);
            }
            if !ok {
                bad.push(format!("trial {trial} on {:?}", lat.spec()));
            }
        }
    }
    Outcome::new(bad.is_empty(), format!("20 coupling triples x 2 tori; mismatches: {bad:?}"))
}

fn spectral_equivalence() -> Outcome {
    let lat = torus(3, 3);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut details = Vec::new();
    let mut passed = true;
    for _ in 0..3 {
        let j = random_couplings(&mut rng);
        let r = ising_sector_equivalence(&lat, j, SectorRoute::Dense, 1e-9).unwrap();
        passed &= r.passed() && r.multiplicity_factor_log2.is_some();
        details.push(format!(
            "dense dim {}: {} distinct values, max dev {:.1e}, ratio {}",
            r.dimension_a,
            r.compared,
            r.max_deviation,
            r.multiplicity_factor_log2.map_or("not uniform".into(), |k| format!("2^{k}"))
        ));
    }
    let j = Couplings::new(0.2, 0.5, 0.8).unwrap();
    let r = ising_sector_equivalence(&lat, j, SectorRoute::MatrixFree { k: 30 }, 1e-7).unwrap();
    passed &= r.passed() && r.compared == 30;
    details.push(format!(
        "matrix-free on 2^18: {} lowest, max dev {:.1e}",
        r.compared, r.max_deviation
    ));
    Outcome::new(passed, details.join("; "))
}

fn red_frame() -> Outcome {
    let j = Couplings::new(1.0, 0.0, 0.0).unwrap();
    let mut ok = true;
    for lat in [torus(3, 3), torus(3, 6)] {
        let gens = perturbed_h(&lat, j).unwrap().generators();
        let target = toric_code_h(&link_lattice(&lat, Color::Red)).unwrap().generators();
        ok &= verify_group_image(&gens, &FrameSpec::red(&lat), &target).unwrap();
    }
    Outcome::new(ok, "image span equals toric code span on (3,3) and (3,6)")
}

fn green_frame() -> Outcome {
    let j = Couplings::new(0.0, 1.0, 1.0).unwrap();
    let mut ok = true;
    for lat in [torus(3, 3), torus(3, 6)] {
        let gens = perturbed_h(&lat, j).unwrap().generators();
        let target = toric_code_with_holes_h(&lat).unwrap().generators();
        ok &= verify_group_image(&gens, &FrameSpec::green(&lat), &target).unwrap();
    }
    let lat = torus(3, 3);
    let v = holes_ground_state(&lat, 11).unwrap();
    let w = holes_witness(&v, &lat).unwrap();
    let red_dev = w
        .iter()
        .filter(|x| x.color == Color::Red)
        .map(|x| (x.value - 1.0).abs())
        .fold(0.0, f64::max);
    let blue_max = w.iter().filter(|x| x.color == Color::Blue).map(|x| x.value.abs()).fold(0.0, f64::max);
    let witness_ok = red_dev < 1e-9 && blue_max < 1e-9;
    Outcome::new(
        ok && witness_ok,
        format!("group images {ok}; red cells |1 - v| <= {red_dev:.1e}, blue cells |v| <= {blue_max:.1e}"),
    )
}

fn table_corners() -> Outcome {
    let rows: [([bool; 3], &str); 8] = [
        ([true, true, true], "Trivial"),
        ([false, false, false], "Topological Color Code"),
        ([true, false, false], "Toric Code (red)"),
        ([false, true, false], "Toric Code (green)"),
        ([false, false, true], "Toric Code (blue)"),
        ([true, true, false], "Partially Topological"),
        ([true, false, true], "Partially Topological"),
        ([false, true, true], "Partially Topological"),
    ];
    let lat = torus(3, 3);
    let mut bad = Vec::new();
    for (corner, label) in rows {
        let p = corner_point(&lat, corner, DEFAULT_THRESHOLD).unwrap();
        let values_ok = corner
            .iter()
            .zip(p.s)
            .all(|(&on, s)| (s - if on { 1.0 } else { 0.0 }).abs() < 1e-9);
        if !values_ok || p.label.to_string() != label {
            bad.push(format!("{corner:?}: s = {:?}, label {}", p.s, p.label));
        }
    }
    Outcome::new(bad.is_empty(), format!("8 corners; mismatches: {bad:?}"))
}

fn anyon_calculus() -> Outcome {
    let cc = color_code_theory();
    let bosons = color_code_bosons();
    let find = |c: Color, l: PauliLabel| bosons.iter().find(|b| b.0 == c && b.1 == l).unwrap().2;
    // Per fusion case: (pairs, matches).
    let mut fusion = [(0, 0); 4];
    let mut braid_ok = 0;
    for &(u, a, x) in &bosons {
        for &(v, b, y) in &bosons {
            let (case, expect) = match (u == v, a == b) {
                (true, true) => (0, VACUUM),
                (true, false) => (1, find(u, a.third(b))),
                (false, true) => (2, find(u.third(v), a)),
                (false, false) => (3, find(u.third(v), a.third(b))),
            };
            fusion[case].0 += 1;
            if cc.fuse(x, y) == expect {
                fusion[case].1 += 1;
            }
            let want = if u == v || a == b { 1 } else { -1 };
            if cc.braid(x, y) == want {
                braid_ok += 1;
            }
        }
    }
    let census = cc.classify();
    let census_ok = census == Census { bosons: 9, fermions: 6, vacuum: 1 };
    let r = condense(&cc, &[cc.parse("r_x").unwrap()]).unwrap();
    let tc = toric_code_theory();
    let to_tc = find_isomorphism(&r.quotient, &tc).is_some();
    let m = condense(&tc, &[tc.parse("m").unwrap()]).unwrap();
    let trivial = m.quotient.size() == 1;
    let fusion_ok = fusion.iter().all(|(n, k)| n == k);
    let passed = fusion_ok && braid_ok == 81 && census_ok && to_tc && trivial;
    Outcome::new(
        passed,
        format!(
            "fusion matches per case (same color/label, same color, same label, neither): {}/{}, {}/{}, {}/{}, {}/{}; \
             braiding {braid_ok}/81; census {}/{}/{}; r_x quotient ~ toric code {to_tc}; m quotient trivial {trivial}",
            fusion[0].1, fusion[0].0, fusion[1].1, fusion[1].0, fusion[2].1, fusion[2].0, fusion[3].1,
            fusion[3].0, census.bosons, census.fermions, census.vacuum
        ),
    )
}

fn critical_behavior() -> Outcome {
    let grid: Vec<f64> = (0..=20).map(|k| k as f64 / 20.0).collect();
    let mut monotone = true;
    let mut worst_drop: f64 = 0.0;
    let tori = [torus(3, 3), torus(3, 6), torus(6, 6)];
    for lat in &tori {
        for c in Color::ALL {
            let tri = dual_triangular(lat, c);
            let m: Vec<f64> = grid.iter().map(|&j| ising_magnetization_sq(&tri, j).unwrap().value).collect();
            for w in m.windows(2) {
                worst_drop = worst_drop.max(w[0] - w[1]);
                monotone &= w[1] >= w[0] - 1e-10;
            }
        }
    }
    let duals: Vec<_> = tori.iter().map(|l| dual_triangular(l, Color::Red)).collect();
    let first = magnetization_crossing(&duals[0], &duals[1], 0.01, 0.99, 49, 1e-6).unwrap();
    let second = magnetization_crossing(&duals[1], &duals[2], 0.01, 0.99, 49, 1e-6).unwrap();
    let crossings_ok = match (first, second) {
        (Some(a), Some(b)) => {
            let inside = |x: f64| 0.05 < x && x < 0.45;
            inside(a) && inside(b) && (b - 0.17).abs() < (a - 0.17).abs()
        }
        _ => false,
    };
    let show = |x: Option<f64>| x.map_or("none".into(), |x| format!("{x:.4}"));
    let (first, second) = (show(first), show(second));
    Outcome::new(
        monotone && crossings_ok,
        format!(
            "monotone on 21-point grid for 9 duals: {monotone} (largest drop {worst_drop:.1e}); \
             crossings 3/6 sites {first}, 6/12 sites {second}"
        ),
    )
}

/// Matrix of one Pauli letter with qubit 0 as the least significant bit.
fn letter_matrix(c: char) -> DMatrix<Complex64> {
    let (o, i) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 1.0));
    let one = Complex64::new(1.0, 0.0);
    match c {
        'I' => DMatrix::from_row_slice(2, 2, &[one, o, o, one]),
        'X' => DMatrix::from_row_slice(2, 2, &[o, one, one, o]),
        'Y' => DMatrix::from_row_slice(2, 2, &[o, -i, i, o]),
        'Z' => DMatrix::from_row_slice(2, 2, &[one, o, o, -one]),
        _ => unreachable!(),
    }
}

fn kron_oracle(terms: &[(f64, String)], n: usize) -> DMatrix<Complex64> {
    let dim = 1 << n;
    let mut total = DMatrix::zeros(dim, dim);
    for (c, letters) in terms {
        // Qubit 0 is the leftmost letter and the lowest index bit, so it is
        // the rightmost Kronecker factor.
        let mut m = DMatrix::from_element(1, 1, Complex64::new(1.0, 0.0));
        for ch in letters.chars().rev() {
            m = m.kronecker(&letter_matrix(ch));
        }
        total += m * Complex64::new(*c, 0.0);
    }
    total
}

fn oracle_equivalence() -> Outcome {
    let n = 10;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let n_terms = rng.random_range(1..12);
        let terms: Vec<(f64, String)> = (0..n_terms)
            .map(|_| {
                let letters: String = (0..n).map(|_| ['I', 'X', 'Y', 'Z'][rng.random_range(0..4)]).collect();
                (rng.random_range(-1.0..1.0), letters)
            })
            .collect();
        let h = OperatorSum::from_terms(
            n,
            terms.iter().map(|(c, s)| (*c, format!("+{s}").parse::<PauliString>().unwrap())),
        )
        .unwrap();
        let oracle = kron_oracle(&terms, n);
        let dense = dense_matrix(&h).unwrap();
        worst = worst.max((&dense - &oracle).iter().map(|z| z.norm()).fold(0.0, f64::max));
        let amps: Vec<Complex64> =
            (0..1 << n).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
        let v = StateVector::new(n, amps.clone()).unwrap();
        let hv = apply(&h, &v).unwrap();
        let expect = &oracle * nalgebra::DVector::from_vec(amps);
        worst = worst.max(
            hv.amplitudes().iter().zip(expect.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max),
        );
    }
    Outcome::new(worst < 1e-12, format!("50 random 10-qubit sums; max deviation {worst:.1e}"))
}

type Criterion = (usize, &'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 9] = [
        (1, "degeneracy", degeneracy),
        (2, "decoupling", decoupling),
        (3, "spectral equivalence", spectral_equivalence),
        (4, "red frame", red_frame),
        (5, "green frame and holes", green_frame),
        (6, "corner table", table_corners),
        (7, "anyon calculus", anyon_calculus),
        (8, "critical behavior", critical_behavior),
        (9, "apply vs dense oracle", oracle_equivalence),
    ];
    // Panic messages are reported in the criterion line instead.
    panic::set_hook(Box::new(|_| {}));
    let mut unexpected = Vec::new();
    for (id, name, run) in criteria {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run))
            .unwrap_or_else(|e| {
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                Outcome::new(false, format!("panicked: {msg}"))
            });
        let secs = start.elapsed().as_secs_f64();
        let known = KNOWN_FAILURES.iter().find(|(k, _)| *k == id);
        let status = if outcome.passed { "PASS" } else { "FAIL" };
        let note = match (outcome.passed, known) {
            (false, Some((_, why))) => format!(" [known failure: {why}]"),
            _ => String::new(),
        };
        println!("criterion {id} ({name}): {status} in {secs:.2}s -- {}{note}", outcome.detail);
        if outcome.passed == known.is_some() {
            unexpected.push(id);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected acceptance results for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
