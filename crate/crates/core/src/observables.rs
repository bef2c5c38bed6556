//! Color string operators, string order parameters, dual Ising correlators
//! and the corner phase classification.

use std::collections::VecDeque;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{dual_triangular, link_lattice, Color, ColorLattice, SiteOrigin, TriangularLattice};
use crate::models::{perturbed_h, tfim_h, toric_code_with_holes_h, Couplings};
use crate::pauli::PauliString;
use crate::spectra::{
    dense_z_sector_matrix, low_lying_with, pauli_expectation, stabilizer_ground_state,
    symmetric_spectrum, LowLyingOptions, Sector, ZSector,
};

/// Product of `X` over the qubits of a path of color-`c` edges between two
/// color-`c` plaquettes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ColorString {
    pub color: Color,
    pub from: usize,
    pub to: usize,
    /// Plaquettes visited, `from` first and `to` last.
    pub plaquettes: Vec<usize>,
    pub edges: Vec<usize>,
    pub operator: PauliString,
}

impl ColorString {
    /// String along an explicit edge path starting at plaquette `from`.
    pub fn from_path(lat: &ColorLattice, c: Color, from: usize, edges: &[usize]) -> Result<Self> {
        if lat.plaquette(from).color != c || edges.is_empty() {
            return Err(Error::StringEndpoints { i: from, j: from, color: c });
        }
        let mut plaquettes = vec![from];
        let mut at = from;
        let mut operator = PauliString::identity(lat.n_qubits());
        for &e in edges {
            let edge = lat.edge(e);
            if edge.color != c {
                return Err(Error::Invalid(format!("edge {e} is {}, not {c}", edge.color)));
            }
            at = match edge.plaquettes {
                (a, b) if a == at => b,
                (a, b) if b == at => a,
                _ => return Err(Error::Invalid(format!("edge {e} does not touch plaquette {at}"))),
            };
            plaquettes.push(at);
            operator = operator * PauliString::x_on(lat.n_qubits(), [edge.qubits.0, edge.qubits.1]);
        }
        Ok(ColorString { color: c, from, to: at, plaquettes, edges: edges.to_vec(), operator })
    }
}

/// Shortest string from plaquette `i` to plaquette `j` in the color-`c` dual
/// graph. Breadth-first search visits neighbors by site index, then edge
/// index, so the choice is deterministic.
pub fn build_string(lat: &ColorLattice, c: Color, i: usize, j: usize) -> Result<ColorString> {
    let n_p = lat.plaquettes().len();
    if i == j || i >= n_p || j >= n_p || lat.plaquette(i).color != c || lat.plaquette(j).color != c {
        return Err(Error::StringEndpoints { i, j, color: c });
    }
    let tri = dual_triangular(lat, c);
    let site = |p| tri.site_of(SiteOrigin::Plaquette(p)).expect("plaquette of the dual color");
    let (start, goal) = (site(i), site(j));
    let adj = tri.adjacency();
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; tri.n_sites()];
    let mut seen = vec![false; tri.n_sites()];
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        if x == goal {
            break;
        }
        for &(y, e) in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                parent[y] = Some((x, e));
                queue.push_back(y);
            }
        }
    }
    let mut edges = Vec::new();
    let mut at = goal;
    while let Some((prev, e)) = parent[at] {
        edges.push(e);
        at = prev;
    }
    if at != start {
        return Err(Error::StringEndpoints { i, j, color: c });
    }
    edges.reverse();
    ColorString::from_path(lat, c, i, &edges)
}

/// `<v|S|v>` for a real state on the lattice's qubits.
pub fn string_order(v: &[f64], s: &ColorString) -> Result<f64> {
    pauli_expectation(v, &s.operator)
}

/// The lexicographically first pair of color-`c` plaquettes at maximal dual
/// graph distance, with that distance.
pub fn farthest_pair(tri: &TriangularLattice) -> (usize, usize, usize) {
    let mut best = (0, 0, 0);
    for a in 0..tri.n_sites() {
        for (b, &d) in tri.distances_from(a).iter().enumerate() {
            if d != usize::MAX && d > best.2 {
                best = (a, b, d);
            }
        }
    }
    best
}

/// Color string between the farthest pair of color-`c` plaquettes.
pub fn farthest_string(lat: &ColorLattice, c: Color) -> Result<ColorString> {
    let tri = dual_triangular(lat, c);
    let (a, b, _) = farthest_pair(&tri);
    let p = |s: usize| match tri.sites[s] {
        SiteOrigin::Plaquette(p) => p,
        SiteOrigin::Edge(_) => unreachable!("dual lattices have plaquette sites"),
    };
    build_string(lat, c, p(a), p(b))
}

/// Sector-basis states of a parity sector, ascending.
fn sector_states(n: usize, sector: &ZSector) -> Vec<usize> {
    (0..1usize << n).filter(|&s| sector.allows(s)).collect()
}

/// Number of Ising sites up to which sector spectra are computed densely.
const TFIM_DENSE_SITES: usize = 10;

/// Ground-state data of a TFIM in both sectors of the global `prod Zbar`.
#[derive(Clone, Debug, Serialize)]
pub struct TfimSolution {
    pub n_sites: usize,
    pub j: f64,
    pub even_ground: f64,
    pub even_first_excited: f64,
    pub odd_ground: f64,
    /// Even-sector ground vector(s) in the full `2^n` space.
    #[serde(skip)]
    pub ground_vectors: Vec<Vec<f64>>,
}

impl TfimSolution {
    /// Excitation gap inside the even sector.
    pub fn even_gap(&self) -> f64 {
        self.even_first_excited - self.even_ground
    }

    /// Cost of moving to the odd sector.
    pub fn parity_gap(&self) -> f64 {
        self.odd_ground - self.even_ground
    }
}

fn parity_sector(n: usize, sign: i8) -> ZSector {
    ZSector::new(vec![((1usize << n) - 1, sign)])
}

/// Solves the TFIM on a dual lattice in the even and odd parity sectors.
pub fn solve_tfim(tri: &TriangularLattice, j: f64) -> Result<TfimSolution> {
    let h = tfim_h(tri, j)?;
    let n = tri.n_sites();
    let even = parity_sector(n, 1);
    let odd = parity_sector(n, -1);
    if n <= TFIM_DENSE_SITES {
        let e = symmetric_spectrum(dense_z_sector_matrix(&h, &even)?, n);
        let o = symmetric_spectrum(dense_z_sector_matrix(&h, &odd)?, n);
        let states = sector_states(n, &even);
        let ground_vectors = e
            .ground_vectors
            .iter()
            .map(|w| {
                let mut full = vec![0.0; 1 << n];
                for (&s, &a) in states.iter().zip(w) {
                    full[s] = a;
                }
                full
            })
            .collect();
        return Ok(TfimSolution {
            n_sites: n,
            j,
            even_ground: e.eigenvalues[0],
            even_first_excited: e.eigenvalues.get(1).copied().unwrap_or(f64::INFINITY),
            odd_ground: o.eigenvalues[0],
            ground_vectors,
        });
    }
    let solve = |sector: ZSector, k: usize| {
        low_lying_with(
            &h,
            &LowLyingOptions { k, tol: 1e-9, sector: Some(Sector::Z(sector)), ..Default::default() },
        )
    };
    let e = solve(even, 2)?;
    let o = solve(odd, 1)?;
    Ok(TfimSolution {
        n_sites: n,
        j,
        even_ground: e.eigenvalues[0],
        even_first_excited: e.eigenvalues[1],
        odd_ground: o.eigenvalues[0],
        ground_vectors: e.ground_vectors,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MagnetizationSq {
    /// `<Xbar_a Xbar_b>` averaged over the even-sector ground space.
    pub value: f64,
    pub sites: (usize, usize),
    pub distance: usize,
}

/// `<Xbar_a Xbar_b>` in the even-parity TFIM ground state for the farthest
/// site pair. The flip-symmetric correlator stands in for `M^2`.
pub fn ising_magnetization_sq(tri: &TriangularLattice, j: f64) -> Result<MagnetizationSq> {
    let sol = solve_tfim(tri, j)?;
    magnetization_from(tri, &sol)
}

fn magnetization_from(tri: &TriangularLattice, sol: &TfimSolution) -> Result<MagnetizationSq> {
    let (a, b, distance) = farthest_pair(tri);
    let op = PauliString::x_on(tri.n_sites(), [a, b]);
    let mut sum = 0.0;
    for v in &sol.ground_vectors {
        sum += pauli_expectation(v, &op)?;
    }
    Ok(MagnetizationSq { value: sum / sol.ground_vectors.len() as f64, sites: (a, b), distance })
}

/// Coupling in `(lo, hi)` where `<XbarXbar>` of `small` and `large` cross,
/// located on a scan of `steps` intervals and refined by bisection to `tol`.
/// `None` without a sign change.
pub fn magnetization_crossing(
    small: &TriangularLattice,
    large: &TriangularLattice,
    lo: f64,
    hi: f64,
    steps: usize,
    tol: f64,
) -> Result<Option<f64>> {
    let diff = |j: f64| -> Result<f64> {
        Ok(ising_magnetization_sq(small, j)?.value - ising_magnetization_sq(large, j)?.value)
    };
    let mut a = lo;
    let mut fa = diff(a)?;
    for k in 1..=steps {
        let b = lo + (hi - lo) * k as f64 / steps as f64;
        let fb = diff(b)?;
        if fa == 0.0 {
            return Ok(Some(a));
        }
        if fa.signum() != fb.signum() {
            let (mut l, mut r, mut fl) = (a, b, fa);
            while r - l > tol {
                let m = 0.5 * (l + r);
                let fm = diff(m)?;
                if fm.signum() == fl.signum() {
                    l = m;
                    fl = fm;
                } else {
                    r = m;
                }
            }
            return Ok(Some(0.5 * (l + r)));
        }
        a = b;
        fa = fb;
    }
    Ok(None)
}

/// Phase labels of the eight corner regions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PhaseLabel {
    Trivial,
    ColorCode,
    /// Toric code whose string order is carried by this color.
    ToricCode(Color),
    /// Two ordered colors; the field names the color without string order.
    PartiallyTopological(Color),
}

impl PhaseLabel {
    /// Label with the colors involved spelled out, e.g. `Partially Topological (rg)`.
    pub fn detail(&self) -> String {
        match self {
            PhaseLabel::PartiallyTopological(missing) => {
                let pair: String =
                    Color::ALL.iter().filter(|c| *c != missing).map(|c| c.letter()).collect();
                format!("{self} ({pair})")
            }
            _ => self.to_string(),
        }
    }
}

impl fmt::Display for PhaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhaseLabel::Trivial => f.write_str("Trivial"),
            PhaseLabel::ColorCode => f.write_str("Topological Color Code"),
            PhaseLabel::ToricCode(c) => write!(f, "Toric Code ({c})"),
            PhaseLabel::PartiallyTopological(_) => f.write_str("Partially Topological"),
        }
    }
}

impl Serialize for PhaseLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

pub const DEFAULT_THRESHOLD: f64 = 0.5;

/// Thresholds each string order parameter to 0/1 and looks up the phase.
pub fn classify_phase(s: [f64; 3], threshold: f64) -> PhaseLabel {
    let on: Vec<Color> = Color::ALL.into_iter().filter(|c| s[c.index()] > threshold).collect();
    match on.as_slice() {
        [] => PhaseLabel::ColorCode,
        [c] => PhaseLabel::ToricCode(*c),
        [a, b] => PhaseLabel::PartiallyTopological(a.third(*b)),
        _ => PhaseLabel::Trivial,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PhasePoint {
    pub j: [f64; 3],
    /// String order parameters, or their dual `<XbarXbar>` surrogates.
    pub s: [f64; 3],
    pub energy: Option<f64>,
    pub gap: Option<f64>,
    pub label: PhaseLabel,
    /// Dual-graph distance of the correlated pair, per color.
    pub distance: Option<[usize; 3]>,
    pub error: Option<String>,
}

/// Everything a sweep needs from one color's TFIM at one coupling.
#[derive(Clone, Debug, Serialize)]
pub struct ColorSolve {
    pub j: f64,
    pub even_ground: f64,
    pub even_gap: f64,
    pub parity_gap: f64,
    pub magnetization: MagnetizationSq,
}

pub fn solve_color(tri: &TriangularLattice, j: f64) -> Result<ColorSolve> {
    let sol = solve_tfim(tri, j)?;
    Ok(ColorSolve {
        j,
        even_ground: sol.even_ground,
        even_gap: sol.even_gap(),
        parity_gap: sol.parity_gap(),
        magnetization: magnetization_from(tri, &sol)?,
    })
}

/// Sweep point from the three decoupled TFIMs, indexed by color. Energy is
/// `-P` plus the even-sector TFIM ground energies; the gap is the cheaper of
/// one even-sector excitation and moving all three colors to the odd sector
/// together (the parities of the three colors are tied to each other).
pub fn assemble_point(solves: [&ColorSolve; 3], n_plaquettes: usize, threshold: f64) -> PhasePoint {
    let s = solves.map(|x| x.magnetization.value);
    let energy = -(n_plaquettes as f64) + solves.iter().map(|x| x.even_ground).sum::<f64>();
    let even_gap = solves.iter().map(|x| x.even_gap).fold(f64::INFINITY, f64::min);
    let parity_gap: f64 = solves.iter().map(|x| x.parity_gap).sum();
    PhasePoint {
        j: solves.map(|x| x.j),
        s,
        energy: Some(energy),
        gap: Some(even_gap.min(parity_gap)),
        label: classify_phase(s, threshold),
        distance: Some(solves.map(|x| x.magnetization.distance)),
        error: None,
    }
}

pub fn decoupled_point(
    duals: &[TriangularLattice; 3],
    n_plaquettes: usize,
    j: Couplings,
    threshold: f64,
) -> Result<PhasePoint> {
    let mut solves = Vec::with_capacity(3);
    for c in Color::ALL {
        solves.push(solve_color(&duals[c.index()], j.get(c))?);
    }
    Ok(assemble_point([&solves[0], &solves[1], &solves[2]], n_plaquettes, threshold))
}

/// Couplings of a corner of the unit cube.
pub fn corner_couplings(corner: [bool; 3]) -> Couplings {
    let f = |b: bool| if b { 1.0 } else { 0.0 };
    Couplings::new(f(corner[0]), f(corner[1]), f(corner[2])).expect("corners are in range")
}

/// A ground state of the perturbed model at a corner, where it is a
/// commuting stabilizer Hamiltonian.
pub fn corner_ground_state(lat: &ColorLattice, corner: [bool; 3], seed: u64) -> Result<Vec<f64>> {
    let m = perturbed_h(lat, corner_couplings(corner))?;
    stabilizer_ground_state(&m.generators(), lat.n_qubits(), seed)
}

/// Exact string order parameters and label at a corner.
pub fn corner_point(lat: &ColorLattice, corner: [bool; 3], threshold: f64) -> Result<PhasePoint> {
    let v = corner_ground_state(lat, corner, 0xc0de)?;
    let m = perturbed_h(lat, corner_couplings(corner))?;
    let mut s = [0.0; 3];
    let mut distance = [0; 3];
    for c in Color::ALL {
        let string = farthest_string(lat, c)?;
        s[c.index()] = string_order(&v, &string)?;
        distance[c.index()] = string.edges.len();
    }
    let hv = crate::spectra::apply_real(&m.hamiltonian, &v)?;
    let energy = v.iter().zip(&hv).map(|(a, b)| a * b).sum();
    Ok(PhasePoint {
        j: corner_couplings(corner).as_array(),
        s,
        energy: Some(energy),
        gap: None,
        label: classify_phase(s, threshold),
        distance: Some(distance),
        error: None,
    })
}

/// A ground state of the green-link model with holes.
pub fn holes_ground_state(lat: &ColorLattice, seed: u64) -> Result<Vec<f64>> {
    let m = toric_code_with_holes_h(lat)?;
    stabilizer_ground_state(&m.generators(), m.n_qubits(), seed)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HoleWitness {
    pub plaquette: usize,
    pub color: Color,
    pub value: f64,
}

/// `<Zhat Zhat Zhat>` on the three green links bounding each red and blue
/// hexagon, for a state on the green-link qubits.
pub fn holes_witness(v: &[f64], lat: &ColorLattice) -> Result<Vec<HoleWitness>> {
    let tri = link_lattice(lat, Color::Green);
    let n = tri.n_sites();
    let mut out = Vec::new();
    for cell in &tri.cells {
        let color = lat.plaquette(cell.plaquette).color;
        if color == Color::Green {
            continue;
        }
        let op = PauliString::z_on(n, cell.sites.iter().copied());
        out.push(HoleWitness { plaquette: cell.plaquette, color, value: pauli_expectation(v, &op)? });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_hex_torus, TorusSpec};
    use crate::models::plaquette_z;
    use crate::pauli::commutes;

    fn torus(l1: usize, l2: usize) -> ColorLattice {
        build_hex_torus(TorusSpec::new(l1, l2).unwrap()).unwrap()
    }

    #[test]
    fn strings_anticommute_only_at_endpoints() {
        for lat in [torus(3, 3), torus(3, 6)] {
            for c in Color::ALL {
                let ps: Vec<usize> = lat.plaquettes_of(c).collect();
                for &i in &ps {
                    for &j in &ps {
                        if i == j {
                            assert!(build_string(&lat, c, i, j).is_err());
                            continue;
                        }
                        let s = build_string(&lat, c, i, j).unwrap();
                        assert_eq!(s.operator.weight() as usize, 2 * s.edges.len());
                        let hits: Vec<usize> = (0..lat.plaquettes().len())
                            .filter(|&p| !commutes(&s.operator, &plaquette_z(&lat, p)).unwrap())
                            .collect();
                        let mut ends = vec![i, j];
                        ends.sort_unstable();
                        assert_eq!(hits, ends);
                    }
                }
            }
        }
    }

    #[test]
    fn endpoint_color_is_checked() {
        let lat = torus(3, 3);
        let r = lat.plaquettes_of(Color::Red).next().unwrap();
        let g = lat.plaquettes_of(Color::Green).next().unwrap();
        assert!(matches!(build_string(&lat, Color::Red, r, g), Err(Error::StringEndpoints { .. })));
    }

    #[test]
    fn classification_table() {
        let cases = [
            ([1.0, 1.0, 1.0], "Trivial"),
            ([0.0, 0.0, 0.0], "Topological Color Code"),
            ([1.0, 0.0, 0.0], "Toric Code (red)"),
            ([0.0, 1.0, 0.0], "Toric Code (green)"),
            ([0.0, 0.0, 1.0], "Toric Code (blue)"),
            ([1.0, 1.0, 0.0], "Partially Topological"),
            ([1.0, 0.0, 1.0], "Partially Topological"),
            ([0.0, 1.0, 1.0], "Partially Topological"),
        ];
        for (s, label) in cases {
            assert_eq!(classify_phase(s, DEFAULT_THRESHOLD).to_string(), label);
        }
        assert_eq!(classify_phase([1.0, 1.0, 0.0], 0.5).detail(), "Partially Topological (rg)");
    }

    #[test]
    fn magnetization_limits() {
        let lat = torus(3, 6);
        let tri = dual_triangular(&lat, Color::Green);
        assert!(ising_magnetization_sq(&tri, 0.0).unwrap().value.abs() < 1e-12);
        assert!((ising_magnetization_sq(&tri, 1.0).unwrap().value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tfim_sector_energies_match_full_spectrum() {
        let lat = torus(3, 3);
        let tri = dual_triangular(&lat, Color::Red);
        let sol = solve_tfim(&tri, 0.4).unwrap();
        let full = crate::spectra::full_spectrum(&tfim_h(&tri, 0.4).unwrap()).unwrap();
        assert!((sol.even_ground.min(sol.odd_ground) - full.eigenvalues[0]).abs() < 1e-12);
    }

    #[test]
    fn holes_witness_pattern() {
        let lat = torus(3, 3);
        let v = holes_ground_state(&lat, 3).unwrap();
        for w in holes_witness(&v, &lat).unwrap() {
            match w.color {
                Color::Red => assert!((w.value - 1.0).abs() < 1e-9),
                _ => assert!(w.value.abs() < 1e-9),
            }
        }
    }
}
