//! Sweep observables against brute-force computations on the physical qubits.

use colorcode::lattice::{build_hex_torus, dual_triangular, Color, ColorLattice, TorusSpec};
use colorcode::models::{perturbed_h, Couplings};
use colorcode::observables::{
    build_string, corner_ground_state, decoupled_point, string_order, ColorString,
    DEFAULT_THRESHOLD,
};
use colorcode::spectra::{dense_x_symmetric_matrix, symmetric_spectrum, XOrbits};
use colorcode::transform::z_stabilizer_commutant;

fn torus(l1: usize, l2: usize) -> ColorLattice {
    build_hex_torus(TorusSpec::new(l1, l2).unwrap()).unwrap()
}

/// Spectrum of the perturbed model in the sector fixed by every `X` string
/// that commutes with the plaquette `Z` checks.
fn physical_sector_spectrum(lat: &ColorLattice, j: [f64; 3]) -> Vec<f64> {
    let h = perturbed_h(lat, Couplings::new(j[0], j[1], j[2]).unwrap()).unwrap().hamiltonian;
    let gens: Vec<usize> = z_stabilizer_commutant(lat).into_iter().map(|m| m as usize).collect();
    let orbits = XOrbits::new(lat.n_qubits(), &gens).unwrap();
    let m = dense_x_symmetric_matrix(&h, &orbits).unwrap();
    symmetric_spectrum(m, lat.n_qubits()).eigenvalues
}

#[test]
fn decoupled_energy_and_gap_match_physical_spectrum() {
    let lat = torus(3, 3);
    let duals = Color::ALL.map(|c| dual_triangular(&lat, c));
    let n_p = lat.plaquettes().len();
    for j in [[0.0, 0.0, 0.0], [0.3, 0.1, 0.7], [0.5, 0.5, 0.5], [0.9, 0.2, 0.4], [1.0, 1.0, 1.0]] {
        let spec = physical_sector_spectrum(&lat, j);
        let p = decoupled_point(&duals, n_p, Couplings::new(j[0], j[1], j[2]).unwrap(), DEFAULT_THRESHOLD)
            .unwrap();
        let e0 = spec[0];
        let e1 = spec.iter().copied().find(|&e| e - e0 > 1e-9).unwrap_or(e0);
        let degenerate = spec[1] - e0 < 1e-9;
        let expected_gap = if degenerate { 0.0 } else { e1 - e0 };
        assert!((p.energy.unwrap() - e0).abs() < 1e-9, "{j:?}: energy {} vs {e0}", p.energy.unwrap());
        assert!((p.gap.unwrap() - expected_gap).abs() < 1e-8, "{j:?}: gap {} vs {expected_gap}", p.gap.unwrap());
    }
}

/// Every color-`c` edge joining plaquettes `a` and `b`.
fn parallel_edges(lat: &ColorLattice, c: Color, a: usize, b: usize) -> Vec<usize> {
    lat.edges_of(c)
        .filter(|&e| {
            let (x, y) = lat.edge(e).plaquettes;
            (x, y) == (a, b) || (x, y) == (b, a)
        })
        .collect()
}

/// Every path of one or two color-`c` edges from `a` to `b`.
fn short_paths(lat: &ColorLattice, c: Color, a: usize, b: usize) -> Vec<Vec<usize>> {
    let mut paths: Vec<Vec<usize>> = parallel_edges(lat, c, a, b).into_iter().map(|e| vec![e]).collect();
    for mid in lat.plaquettes_of(c) {
        for e1 in parallel_edges(lat, c, a, mid) {
            for e2 in parallel_edges(lat, c, mid, b) {
                paths.push(vec![e1, e2]);
            }
        }
    }
    paths
}

#[test]
fn string_order_is_path_independent_at_corners() {
    let lat = torus(3, 3);
    for bits in 0..8u8 {
        let corner = [bits & 1 != 0, bits & 2 != 0, bits & 4 != 0];
        let v = corner_ground_state(&lat, corner, 7).unwrap();
        for c in Color::ALL {
            let expected = if corner[c.index()] { 1.0 } else { 0.0 };
            let ps: Vec<usize> = lat.plaquettes_of(c).collect();
            for (i, &a) in ps.iter().enumerate() {
                for &b in &ps[i + 1..] {
                    let reference = string_order(&v, &build_string(&lat, c, a, b).unwrap()).unwrap();
                    assert!((reference.abs() - expected).abs() < 1e-10);
                    let paths = short_paths(&lat, c, a, b);
                    assert!(paths.len() > 3, "3x3 dual graphs have parallel bonds");
                    for path in paths {
                        let s = ColorString::from_path(&lat, c, a, &path).unwrap();
                        assert_eq!(s.to, b);
                        let value = string_order(&v, &s).unwrap();
                        assert!(
                            (value - reference).abs() < 1e-10,
                            "corner {corner:?} {c} path {path:?}: {value} vs {reference}"
                        );
                    }
                }
            }
        }
    }
}
