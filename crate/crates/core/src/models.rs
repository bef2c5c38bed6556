//! Hamiltonians of the color code family as [`OperatorSum`]s.
//!
//! All minus signs live in coefficients; generator groups hold bare
//! `+1`-signed strings. Terms whose weight is exactly zero (Ising terms at
//! `J_c = 0`, plaquette `Z` terms at `J_c = 1`) are dropped, together with
//! their group.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{CellKind, Color, ColorLattice, TriangularKind, TriangularLattice};
use crate::pauli::{OperatorSum, PauliString};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Couplings {
    pub j_r: f64,
    pub j_g: f64,
    pub j_b: f64,
}

impl Couplings {
    pub fn new(j_r: f64, j_g: f64, j_b: f64) -> Result<Self> {
        let c = Couplings { j_r, j_g, j_b };
        c.check()?;
        Ok(c)
    }

    pub fn check(&self) -> Result<()> {
        for (name, value) in [("J_r", self.j_r), ("J_g", self.j_g), ("J_b", self.j_b)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::CouplingOutOfRange { name, value });
            }
        }
        Ok(())
    }

    pub fn get(&self, c: Color) -> f64 {
        match c {
            Color::Red => self.j_r,
            Color::Green => self.j_g,
            Color::Blue => self.j_b,
        }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.j_r, self.j_g, self.j_b]
    }
}

/// Named family of generators sharing one coefficient in the Hamiltonian.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeneratorGroup {
    pub name: String,
    pub coefficient: f64,
    pub ops: Vec<PauliString>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModelBundle {
    pub hamiltonian: OperatorSum,
    pub groups: Vec<GeneratorGroup>,
    #[serde(skip)]
    pub lattice: Option<ColorLattice>,
    pub couplings: Option<Couplings>,
}

impl ModelBundle {
    pub fn n_qubits(&self) -> usize {
        self.hamiltonian.n_qubits()
    }

    pub fn group(&self, name: &str) -> Option<&GeneratorGroup> {
        self.groups.iter().find(|g| g.name == name)
    }

    /// All generators, group by group.
    pub fn generators(&self) -> Vec<PauliString> {
        self.groups.iter().flat_map(|g| g.ops.iter().copied()).collect()
    }

    /// Rebuilds the Hamiltonian as the weighted sum of the groups.
    pub fn sum_of_groups(&self) -> OperatorSum {
        let mut h = OperatorSum::new(self.n_qubits());
        for g in &self.groups {
            for &op in &g.ops {
                h.push(g.coefficient, op).expect("group strings are hermitian");
            }
        }
        h
    }
}

fn group_name(kind: &str, c: Color) -> String {
    format!("{kind}_{}", c.letter())
}

pub fn plaquette_x(lat: &ColorLattice, p: usize) -> PauliString {
    PauliString::x_on(lat.n_qubits(), lat.plaquette(p).qubits.iter().copied())
}

pub fn plaquette_z(lat: &ColorLattice, p: usize) -> PauliString {
    PauliString::z_on(lat.n_qubits(), lat.plaquette(p).qubits.iter().copied())
}

pub fn edge_xx(lat: &ColorLattice, e: usize) -> PauliString {
    let (i, j) = lat.edge(e).qubits;
    PauliString::x_on(lat.n_qubits(), [i, j])
}

/// `H_CC = -sum_p B^z_p - sum_p B^x_p`.
pub fn color_code_h(lat: &ColorLattice) -> ModelBundle {
    let bundle = perturbed_h(lat, Couplings { j_r: 0.0, j_g: 0.0, j_b: 0.0 })
        .expect("zero couplings are in range");
    ModelBundle { couplings: None, ..bundle }
}

/// `H = -sum_p B^x_p - sum_c (1 - J_c) sum_{p in c} B^z_p - sum_c J_c sum_{<ij> in c} X_i X_j`.
///
/// Term order: all `B^x` by plaquette, all surviving `B^z` by plaquette, then
/// surviving edge terms by edge index.
pub fn perturbed_h(lat: &ColorLattice, j: Couplings) -> Result<ModelBundle> {
    j.check()?;
    let n = lat.n_qubits();
    let mut h = OperatorSum::new(n);
    let mut groups = Vec::new();

    for p in 0..lat.plaquettes().len() {
        h.push(-1.0, plaquette_x(lat, p))?;
    }
    for c in Color::ALL {
        groups.push(GeneratorGroup {
            name: group_name("x", c),
            coefficient: -1.0,
            ops: lat.plaquettes_of(c).map(|p| plaquette_x(lat, p)).collect(),
        });
    }

    for (p, plaq) in lat.plaquettes().iter().enumerate() {
        let w = 1.0 - j.get(plaq.color);
        if w != 0.0 {
            h.push(-w, plaquette_z(lat, p))?;
        }
    }
    for c in Color::ALL {
        let w = 1.0 - j.get(c);
        if w != 0.0 {
            groups.push(GeneratorGroup {
                name: group_name("z", c),
                coefficient: -w,
                ops: lat.plaquettes_of(c).map(|p| plaquette_z(lat, p)).collect(),
            });
        }
    }

    for (e, edge) in lat.edges().iter().enumerate() {
        let w = j.get(edge.color);
        if w != 0.0 {
            h.push(-w, edge_xx(lat, e))?;
        }
    }
    for c in Color::ALL {
        let w = j.get(c);
        if w != 0.0 {
            groups.push(GeneratorGroup {
                name: group_name("ising", c),
                coefficient: -w,
                ops: lat.edges_of(c).map(|e| edge_xx(lat, e)).collect(),
            });
        }
    }

    Ok(ModelBundle { hamiltonian: h, groups, lattice: Some(lat.clone()), couplings: Some(j) })
}

/// Toric code on a link lattice: six-body `X` on six-site cells, three-body
/// `Z` on three-site cells.
pub fn toric_code_h(tri: &TriangularLattice) -> Result<ModelBundle> {
    if !matches!(tri.kind, TriangularKind::Link(_)) {
        return Err(Error::MalformedLattice(
            "toric code needs a link lattice, got a dual lattice".into(),
        ));
    }
    let n = tri.n_sites();
    if n > crate::pauli::MAX_QUBITS {
        return Err(Error::TooManyQubits(n));
    }
    let mut vertex = Vec::new();
    let mut plaquette = Vec::new();
    for cell in &tri.cells {
        match (cell.kind, cell.sites.len()) {
            (CellKind::Six, 6) => vertex.push(PauliString::x_on(n, cell.sites.iter().copied())),
            (CellKind::Three, 3) => plaquette.push(PauliString::z_on(n, cell.sites.iter().copied())),
            (kind, len) => {
                return Err(Error::MalformedLattice(format!(
                    "{kind:?} cell at plaquette {} has {len} sites",
                    cell.plaquette
                )))
            }
        }
    }
    let mut h = OperatorSum::new(n);
    for &op in vertex.iter().chain(&plaquette) {
        h.push(-1.0, op)?;
    }
    Ok(ModelBundle {
        hamiltonian: h,
        groups: vec![
            GeneratorGroup { name: "vertex".into(), coefficient: -1.0, ops: vertex },
            GeneratorGroup { name: "plaquette".into(), coefficient: -1.0, ops: plaquette },
        ],
        lattice: None,
        couplings: None,
    })
}

/// `-j sum_bonds XX - (1 - j) sum_sites Z` on a dual lattice, sites first.
/// Zero-weight families are omitted.
pub fn tfim_h(tri: &TriangularLattice, j: f64) -> Result<OperatorSum> {
    if !matches!(tri.kind, TriangularKind::Dual(_)) {
        return Err(Error::MalformedLattice("TFIM needs a dual lattice".into()));
    }
    if !(0.0..=1.0).contains(&j) {
        return Err(Error::CouplingOutOfRange { name: "J", value: j });
    }
    let n = tri.n_sites();
    let mut h = OperatorSum::new(n);
    if j != 1.0 {
        for s in 0..n {
            h.push(-(1.0 - j), PauliString::z_on(n, [s]))?;
        }
    }
    if j != 0.0 {
        for b in &tri.bonds {
            h.push(-j, PauliString::x_on(n, [b.sites.0, b.sites.1]))?;
        }
    }
    Ok(h)
}

/// Green-link model with holes: six-body `X` on green hexagons, three-body
/// `Z` on red hexagons only, and `XX` between the green links at the two ends
/// of every blue edge.
pub fn toric_code_with_holes_h(lat: &ColorLattice) -> Result<ModelBundle> {
    let tri = crate::lattice::link_lattice(lat, Color::Green);
    let n = tri.n_sites();
    if n > crate::pauli::MAX_QUBITS {
        return Err(Error::TooManyQubits(n));
    }
    let mut six = Vec::new();
    let mut three = Vec::new();
    for cell in &tri.cells {
        match (cell.kind, lat.plaquette(cell.plaquette).color) {
            (CellKind::Six, _) => six.push(PauliString::x_on(n, cell.sites.iter().copied())),
            (CellKind::Three, Color::Red) => {
                three.push(PauliString::z_on(n, cell.sites.iter().copied()))
            }
            _ => {}
        }
    }
    let ising: Vec<PauliString> = tri
        .bonds
        .iter()
        .filter(|b| lat.edge(b.edge).color == Color::Blue)
        .map(|b| PauliString::x_on(n, [b.sites.0, b.sites.1]))
        .collect();
    let mut h = OperatorSum::new(n);
    for &op in six.iter().chain(&three).chain(&ising) {
        h.push(-1.0, op)?;
    }
    Ok(ModelBundle {
        hamiltonian: h,
        groups: vec![
            GeneratorGroup { name: "x_g".into(), coefficient: -1.0, ops: six },
            GeneratorGroup { name: "z_r".into(), coefficient: -1.0, ops: three },
            GeneratorGroup { name: "ising_b".into(), coefficient: -1.0, ops: ising },
        ],
        lattice: Some(lat.clone()),
        couplings: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_hex_torus, dual_triangular, link_lattice, TorusSpec};
    use crate::pauli::{commutes, stabilizer_degeneracy};

    fn torus(l1: usize, l2: usize) -> ColorLattice {
        build_hex_torus(TorusSpec::new(l1, l2).unwrap()).unwrap()
    }

    fn all_commute(ops: &[PauliString]) -> bool {
        ops.iter().all(|a| ops.iter().all(|b| commutes(a, b).unwrap()))
    }

    #[test]
    fn color_code_counts_and_degeneracy() {
        let lat = torus(3, 3);
        let m = color_code_h(&lat);
        assert_eq!(m.hamiltonian.len(), 18);
        assert!(m.hamiltonian.terms().iter().all(|t| t.coeff == -1.0));
        let gens = m.generators();
        assert!(all_commute(&gens));
        assert_eq!(stabilizer_degeneracy(&gens, 18).unwrap(), 16);
    }

    #[test]
    fn zero_couplings_reproduce_color_code() {
        let lat = torus(3, 3);
        let a = perturbed_h(&lat, Couplings::new(0.0, 0.0, 0.0).unwrap()).unwrap();
        assert_eq!(a.hamiltonian, color_code_h(&lat).hamiltonian);
    }

    #[test]
    fn red_corner_term_set() {
        let lat = torus(3, 3);
        let m = perturbed_h(&lat, Couplings::new(1.0, 0.0, 0.0).unwrap()).unwrap();
        let names: Vec<&str> = m.groups.iter().map(|g| g.name.as_str()).collect();
        assert_eq!(names, ["x_r", "x_g", "x_b", "z_g", "z_b", "ising_r"]);
        assert_eq!(m.hamiltonian.len(), 9 + 6 + 9);
        assert_eq!(m.sum_of_groups().sorted_terms(), m.hamiltonian.sorted_terms());
    }

    #[test]
    fn green_blue_corner_term_set() {
        let lat = torus(3, 3);
        let m = perturbed_h(&lat, Couplings::new(0.0, 1.0, 1.0).unwrap()).unwrap();
        let names: Vec<&str> = m.groups.iter().map(|g| g.name.as_str()).collect();
        assert_eq!(names, ["x_r", "x_g", "x_b", "z_r", "ising_g", "ising_b"]);
    }

    #[test]
    fn plaquette_x_commutes_with_everything() {
        let lat = torus(3, 3);
        let m = perturbed_h(&lat, Couplings::new(0.3, 0.6, 0.9).unwrap()).unwrap();
        for p in 0..9 {
            let bx = plaquette_x(&lat, p);
            assert!(m.hamiltonian.terms().iter().all(|t| commutes(&bx, &t.op).unwrap()));
        }
        assert_eq!(m.sum_of_groups().sorted_terms(), m.hamiltonian.sorted_terms());
    }

    #[test]
    fn couplings_out_of_range() {
        assert!(Couplings::new(1.2, 0.0, 0.0).is_err());
        assert!(Couplings::new(0.0, f64::NAN, 0.0).is_err());
    }

    #[test]
    fn red_link_toric_code() {
        let lat = torus(3, 3);
        let tc = toric_code_h(&link_lattice(&lat, Color::Red)).unwrap();
        assert!(tc.group("vertex").unwrap().ops.iter().all(|p| p.weight() == 6));
        assert!(tc.group("plaquette").unwrap().ops.iter().all(|p| p.weight() == 3));
        let gens = tc.generators();
        assert!(all_commute(&gens));
        assert_eq!(stabilizer_degeneracy(&gens, 9).unwrap(), 4);
        assert!(toric_code_h(&dual_triangular(&lat, Color::Red)).is_err());
    }

    #[test]
    fn tfim_limits() {
        let lat = torus(3, 3);
        let tri = dual_triangular(&lat, Color::Red);
        let h0 = tfim_h(&tri, 0.0).unwrap();
        assert_eq!(h0.len(), 3);
        let h1 = tfim_h(&tri, 1.0).unwrap();
        assert_eq!(h1.len(), 9);
        assert!(h1.terms().iter().all(|t| t.op.weight() == 2 && t.coeff == -1.0));
        assert_eq!(tfim_h(&tri, 0.5).unwrap().len(), 12);
    }

    #[test]
    fn holes_model_structure() {
        let lat = torus(3, 3);
        let m = toric_code_with_holes_h(&lat).unwrap();
        assert_eq!(m.group("z_r").unwrap().ops.len(), 3);
        assert_eq!(m.group("x_g").unwrap().ops.len(), 3);
        assert_eq!(m.group("ising_b").unwrap().ops.len(), 9);
        assert!(all_commute(&m.generators()));
    }
}
