//! Three-colorable honeycomb tori and the triangular lattices derived from them.
//!
//! # Indexing
//!
//! A torus of `l1 x l2` unit cells has cells `(a, b)` with `0 <= a < l1`,
//! `0 <= b < l2` and linear cell index `a * l2 + b`. Each cell carries
//!
//! * two qubits (honeycomb vertices), sublattice `A` with index `2 * cell` and
//!   `B` with index `2 * cell + 1`;
//! * one hexagonal plaquette with index `cell`, whose vertices in cyclic order
//!   are `A(a,b), B(a,b), A(a+1,b), B(a+1,b-1), A(a+1,b-1), B(a,b-1)`;
//! * three edges with index `3 * cell + dir`, all starting at `A(a,b)` and
//!   ending at `B(a,b)` (dir 0), `B(a-1,b)` (dir 1) or `B(a,b-1)` (dir 2).
//!
//! Plaquette colors follow `(a + 2b) mod 3` with `0 = red`, `1 = green`,
//! `2 = blue`. Neighboring hexagons differ by one of the offsets `±(1,0)`,
//! `±(0,1)`, `±(1,-1)`, none of which is `0 mod 3`, so the coloring is proper
//! whenever both dimensions are multiples of three.
//!
//! An edge lies on the boundary of two hexagons of different colors and joins
//! two hexagons of the remaining color at its endpoints; the edge carries that
//! remaining color.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Color {
    #[serde(rename = "r")]
    Red,
    #[serde(rename = "g")]
    Green,
    #[serde(rename = "b")]
    Blue,
}

impl Color {
    pub const ALL: [Color; 3] = [Color::Red, Color::Green, Color::Blue];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Color {
        Color::ALL[i % 3]
    }

    pub fn letter(self) -> char {
        match self {
            Color::Red => 'r',
            Color::Green => 'g',
            Color::Blue => 'b',
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Color::Red => "red",
            Color::Green => "green",
            Color::Blue => "blue",
        }
    }

    /// The color different from both `self` and `other`.
    pub fn third(self, other: Color) -> Color {
        debug_assert_ne!(self, other);
        Color::from_index(3 - self.index() - other.index())
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Color {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "r" | "red" => Ok(Color::Red),
            "g" | "green" => Ok(Color::Green),
            "b" | "blue" => Ok(Color::Blue),
            _ => Err(Error::Invalid(format!("unknown color {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusSpec {
    pub l1: usize,
    pub l2: usize,
}

impl TorusSpec {
    pub fn new(l1: usize, l2: usize) -> Result<Self> {
        let spec = TorusSpec { l1, l2 };
        spec.check()?;
        Ok(spec)
    }

    pub fn check(&self) -> Result<()> {
        for (name, l) in [("l1", self.l1), ("l2", self.l2)] {
            if l < 3 || l % 3 != 0 {
                return Err(Error::InvalidTorus {
                    l1: self.l1,
                    l2: self.l2,
                    reason: format!(
                        "{name} = {l} is not a positive multiple of 3; a periodic \
                         three-coloring of the hexagons requires both dimensions \
                         to be multiples of 3"
                    ),
                });
            }
        }
        Ok(())
    }

    pub fn cells(&self) -> usize {
        self.l1 * self.l2
    }
}

impl fmt::Display for TorusSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.l1, self.l2)
    }
}

impl std::str::FromStr for TorusSpec {
    type Err = Error;

    /// Parses `"L1xL2"`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Invalid(format!("lattice must look like L1xL2, got {s:?}"));
        let (a, b) = s.split_once(['x', 'X']).ok_or_else(bad)?;
        let l1 = a.trim().parse().map_err(|_| bad())?;
        let l2 = b.trim().parse().map_err(|_| bad())?;
        TorusSpec::new(l1, l2)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sublattice {
    A,
    B,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Qubit {
    pub cell: (usize, usize),
    pub sublattice: Sublattice,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Plaquette {
    pub cell: (usize, usize),
    pub color: Color,
    /// Vertices in cyclic order (six for a well-formed lattice).
    pub qubits: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub cell: (usize, usize),
    pub dir: u8,
    pub color: Color,
    pub qubits: (usize, usize),
    /// The two same-colored plaquettes this edge connects (one at each endpoint).
    pub plaquettes: (usize, usize),
    /// The two plaquettes whose boundary contains this edge.
    pub boundary_of: (usize, usize),
}

/// A honeycomb torus with colored plaquettes and edges.
///
/// Lattices are immutable once built; the fault-injection helpers return
/// modified copies and exist so validation can be exercised.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ColorLattice {
    spec: TorusSpec,
    qubits: Vec<Qubit>,
    plaquettes: Vec<Plaquette>,
    edges: Vec<Edge>,
    /// Per qubit, its plaquettes indexed by color.
    qubit_plaquettes: Vec<[usize; 3]>,
    /// Per qubit, its edges indexed by color.
    qubit_edges: Vec<[usize; 3]>,
}

pub fn build_hex_torus(spec: TorusSpec) -> Result<ColorLattice> {
    spec.check()?;
    let TorusSpec { l1, l2 } = spec;
    let cell = |a: isize, b: isize| -> usize {
        let a = a.rem_euclid(l1 as isize) as usize;
        let b = b.rem_euclid(l2 as isize) as usize;
        a * l2 + b
    };
    let qa = |a: isize, b: isize| 2 * cell(a, b);
    let qb = |a: isize, b: isize| 2 * cell(a, b) + 1;

    let mut qubits = Vec::with_capacity(2 * spec.cells());
    let mut plaquettes = Vec::with_capacity(spec.cells());
    for a in 0..l1 {
        for b in 0..l2 {
            qubits.push(Qubit { cell: (a, b), sublattice: Sublattice::A });
            qubits.push(Qubit { cell: (a, b), sublattice: Sublattice::B });
            let (ai, bi) = (a as isize, b as isize);
            plaquettes.push(Plaquette {
                cell: (a, b),
                color: Color::from_index((a + 2 * b) % 3),
                qubits: vec![
                    qa(ai, bi),
                    qb(ai, bi),
                    qa(ai + 1, bi),
                    qb(ai + 1, bi - 1),
                    qa(ai + 1, bi - 1),
                    qb(ai, bi - 1),
                ],
            });
        }
    }

    let n = qubits.len();
    let mut containing: Vec<Vec<usize>> = vec![Vec::with_capacity(3); n];
    for (p, plaq) in plaquettes.iter().enumerate() {
        for &q in &plaq.qubits {
            containing[q].push(p);
        }
    }
    let mut qubit_plaquettes = vec![[usize::MAX; 3]; n];
    for (q, ps) in containing.iter().enumerate() {
        for &p in ps {
            qubit_plaquettes[q][plaquettes[p].color.index()] = p;
        }
    }

    let mut edges = Vec::with_capacity(3 * spec.cells());
    for a in 0..l1 {
        for b in 0..l2 {
            let (ai, bi) = (a as isize, b as isize);
            let i = qa(ai, bi);
            for (dir, j) in [qb(ai, bi), qb(ai - 1, bi), qb(ai, bi - 1)].into_iter().enumerate() {
                let shared: Vec<usize> = containing[i]
                    .iter()
                    .copied()
                    .filter(|p| containing[j].contains(p))
                    .collect();
                if shared.len() != 2 {
                    return Err(Error::MalformedLattice(format!(
                        "edge ({i},{j}) lies on {} plaquettes",
                        shared.len()
                    )));
                }
                let (c0, c1) = (plaquettes[shared[0]].color, plaquettes[shared[1]].color);
                if c0 == c1 {
                    return Err(Error::MalformedLattice(format!(
                        "adjacent plaquettes {} and {} share color {c0}",
                        shared[0], shared[1]
                    )));
                }
                let color = c0.third(c1);
                edges.push(Edge {
                    cell: (a, b),
                    dir: dir as u8,
                    color,
                    qubits: (i, j),
                    plaquettes: (
                        qubit_plaquettes[i][color.index()],
                        qubit_plaquettes[j][color.index()],
                    ),
                    boundary_of: (shared[0], shared[1]),
                });
            }
        }
    }

    let mut qubit_edges = vec![[usize::MAX; 3]; n];
    for (e, edge) in edges.iter().enumerate() {
        qubit_edges[edge.qubits.0][edge.color.index()] = e;
        qubit_edges[edge.qubits.1][edge.color.index()] = e;
    }

    Ok(ColorLattice {
        spec,
        qubits,
        plaquettes,
        edges,
        qubit_plaquettes,
        qubit_edges,
    })
}

impl ColorLattice {
    pub fn spec(&self) -> TorusSpec {
        self.spec
    }

    pub fn n_qubits(&self) -> usize {
        self.qubits.len()
    }

    pub fn qubits(&self) -> &[Qubit] {
        &self.qubits
    }

    pub fn plaquettes(&self) -> &[Plaquette] {
        &self.plaquettes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn plaquette(&self, p: usize) -> &Plaquette {
        &self.plaquettes[p]
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn plaquettes_of(&self, color: Color) -> impl Iterator<Item = usize> + '_ {
        self.plaquettes
            .iter()
            .enumerate()
            .filter(move |(_, p)| p.color == color)
            .map(|(i, _)| i)
    }

    pub fn edges_of(&self, color: Color) -> impl Iterator<Item = usize> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter(move |(_, e)| e.color == color)
            .map(|(i, _)| i)
    }

    /// Plaquette of the given color containing qubit `q`.
    pub fn qubit_plaquette(&self, q: usize, color: Color) -> usize {
        self.qubit_plaquettes[q][color.index()]
    }

    /// Edge of the given color incident to qubit `q`.
    pub fn qubit_edge(&self, q: usize, color: Color) -> usize {
        self.qubit_edges[q][color.index()]
    }

    /// Edges of `color` with both endpoints on plaquette `p`.
    pub fn boundary_edges(&self, p: usize, color: Color) -> Vec<usize> {
        let verts = &self.plaquettes[p].qubits;
        let mut out: Vec<usize> = verts
            .iter()
            .map(|&q| self.qubit_edges[q][color.index()])
            .filter(|&e| {
                let (i, j) = self.edges[e].qubits;
                verts.contains(&i) && verts.contains(&j)
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Edges of `color` touching plaquette `p` at one of its vertices, in vertex order.
    pub fn corner_edges(&self, p: usize, color: Color) -> Vec<usize> {
        self.plaquettes[p]
            .qubits
            .iter()
            .map(|&q| self.qubit_edges[q][color.index()])
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("lattice serializes")
    }

    /// Copy of this lattice with edge `e` relabelled to `color` (fault injection).
    pub fn with_recolored_edge(&self, e: usize, color: Color) -> ColorLattice {
        let mut lat = self.clone();
        lat.edges[e].color = color;
        lat
    }

    /// Copy of this lattice with qubit `q` removed from plaquette `p` (fault injection).
    pub fn with_removed_incidence(&self, p: usize, q: usize) -> ColorLattice {
        let mut lat = self.clone();
        lat.plaquettes[p].qubits.retain(|&x| x != q);
        lat
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Default)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    fn push(&mut self, name: &str, failures: Vec<String>) {
        let passed = failures.is_empty();
        let detail = if passed {
            "ok".to_string()
        } else {
            let mut d = failures.iter().take(5).cloned().collect::<Vec<_>>().join("; ");
            if failures.len() > 5 {
                d.push_str(&format!(" (+{} more)", failures.len() - 5));
            }
            d
        };
        self.checks.push(Check { name: name.to_string(), passed, detail });
    }
}

/// Re-derives every incidence from the raw plaquette and edge tables and
/// checks the lattice invariants. Failures are reported, never raised.
pub fn validate_lattice(lat: &ColorLattice) -> ValidationReport {
    let mut report = ValidationReport::default();
    let n = lat.qubits.len();
    let mut containing: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut bad_index = Vec::new();
    for (p, plaq) in lat.plaquettes.iter().enumerate() {
        for &q in &plaq.qubits {
            if q < n {
                containing[q].push(p);
            } else {
                bad_index.push(format!("plaquette {p} lists qubit {q}"));
            }
        }
    }
    report.push("incidence indices in range", bad_index);

    let degree = containing
        .iter()
        .enumerate()
        .filter(|(_, ps)| ps.len() != 3)
        .map(|(q, ps)| format!("qubit {q} lies on {} plaquettes", ps.len()))
        .collect();
    report.push("qubit plaquette-degree = 3", degree);

    let distinct = containing
        .iter()
        .enumerate()
        .filter(|(_, ps)| {
            let mut cs: Vec<Color> = ps.iter().map(|&p| lat.plaquettes[p].color).collect();
            cs.sort();
            cs != Color::ALL
        })
        .map(|(q, _)| format!("qubit {q} does not see one plaquette of each color"))
        .collect();
    report.push("qubit plaquette colors distinct", distinct);

    let mut mismatch = Vec::new();
    for (e, edge) in lat.edges.iter().enumerate() {
        let (i, j) = edge.qubits;
        if i >= n || j >= n {
            mismatch.push(format!("edge {e} has out-of-range endpoint"));
            continue;
        }
        let only_i: Vec<usize> = containing[i].iter().copied().filter(|p| !containing[j].contains(p)).collect();
        let only_j: Vec<usize> = containing[j].iter().copied().filter(|p| !containing[i].contains(p)).collect();
        let ends_ok = only_i.len() == 1
            && only_j.len() == 1
            && lat.plaquettes[only_i[0]].color == edge.color
            && lat.plaquettes[only_j[0]].color == edge.color;
        if !ends_ok {
            mismatch.push(format!("edge {e}: edge color mismatch with its endpoint plaquettes"));
        } else if (only_i[0], only_j[0]) != edge.plaquettes {
            mismatch.push(format!("edge {e}: stored plaquette pair is stale"));
        }
    }
    report.push("edge color mismatch", mismatch);

    let e_count = lat.edges.len();
    let p_count = lat.plaquettes.len();
    let mut counts = Vec::new();
    if 2 * e_count != 3 * n {
        counts.push(format!("E = {e_count} but 3N/2 = {}", 3 * n / 2));
    }
    for c in Color::ALL {
        let ec = lat.edges.iter().filter(|e| e.color == c).count();
        let pc = lat.plaquettes.iter().filter(|p| p.color == c).count();
        if 3 * ec != e_count {
            counts.push(format!("{ec} {c} edges, expected {}", e_count / 3));
        }
        if 3 * pc != p_count {
            counts.push(format!("{pc} {c} plaquettes, expected {}", p_count / 3));
        }
    }
    report.push("per-color counts", counts);

    for c in Color::ALL {
        let sites: Vec<usize> = lat.plaquettes_of(c).collect();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); p_count];
        for edge in lat.edges.iter().filter(|e| e.color == c) {
            let (a, b) = edge.plaquettes;
            if a < p_count && b < p_count {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        let mut failures = Vec::new();
        if let Some(&start) = sites.first() {
            let mut seen = vec![false; p_count];
            seen[start] = true;
            let mut queue = VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                for &y in &adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        queue.push_back(y);
                    }
                }
            }
            let unreached = sites.iter().filter(|&&s| !seen[s]).count();
            if unreached > 0 {
                failures.push(format!("{unreached} {c} plaquettes unreachable"));
            }
        }
        report.push(&format!("{c} dual graph connected"), failures);
    }
    report
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TriangularKind {
    /// Sites are the plaquettes of one color, bonds the edges of that color.
    Dual(Color),
    /// Sites are the edges of one color.
    Link(Color),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SiteOrigin {
    Plaquette(usize),
    Edge(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Bond {
    pub sites: (usize, usize),
    /// Honeycomb edge this bond comes from.
    pub edge: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CellKind {
    /// The three same-colored boundary links of a hexagon of another color.
    Three,
    /// The six links touching the corners of a hexagon of the link color.
    Six,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Cell {
    pub kind: CellKind,
    pub plaquette: usize,
    pub sites: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TriangularLattice {
    pub kind: TriangularKind,
    /// Source object for each site, sorted by source index.
    pub sites: Vec<SiteOrigin>,
    pub bonds: Vec<Bond>,
    /// Empty for dual lattices.
    pub cells: Vec<Cell>,
}

impl TriangularLattice {
    pub fn n_sites(&self) -> usize {
        self.sites.len()
    }

    pub fn color(&self) -> Color {
        match self.kind {
            TriangularKind::Dual(c) | TriangularKind::Link(c) => c,
        }
    }

    pub fn site_of(&self, origin: SiteOrigin) -> Option<usize> {
        self.sites.binary_search_by_key(&key(origin), |&s| key(s)).ok()
    }

    /// Bond multiplicity counted per site.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.sites.len()];
        for b in &self.bonds {
            deg[b.sites.0] += 1;
            deg[b.sites.1] += 1;
        }
        deg
    }

    /// Adjacency lists sorted by (neighbor, edge); parallel bonds appear once per edge.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.sites.len()];
        for b in &self.bonds {
            adj[b.sites.0].push((b.sites.1, b.edge));
            adj[b.sites.1].push((b.sites.0, b.edge));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// Breadth-first graph distances from `from`; `usize::MAX` if unreachable.
    pub fn distances_from(&self, from: usize) -> Vec<usize> {
        let adj = self.adjacency();
        let mut dist = vec![usize::MAX; self.sites.len()];
        dist[from] = 0;
        let mut queue = VecDeque::from([from]);
        while let Some(x) = queue.pop_front() {
            for &(y, _) in &adj[x] {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    pub fn cells_of(&self, kind: CellKind) -> impl Iterator<Item = &Cell> {
        self.cells.iter().filter(move |c| c.kind == kind)
    }
}

fn key(origin: SiteOrigin) -> (u8, usize) {
    match origin {
        SiteOrigin::Plaquette(p) => (0, p),
        SiteOrigin::Edge(e) => (1, e),
    }
}

/// Triangular (multi)graph whose sites are the `color` plaquettes and whose
/// bonds are the `color` edges joining them. Parallel bonds are kept.
pub fn dual_triangular(lat: &ColorLattice, color: Color) -> TriangularLattice {
    let plaqs: Vec<usize> = lat.plaquettes_of(color).collect();
    let mut index = vec![usize::MAX; lat.plaquettes.len()];
    for (s, &p) in plaqs.iter().enumerate() {
        index[p] = s;
    }
    let bonds = lat
        .edges_of(color)
        .map(|e| {
            let (a, b) = lat.edges[e].plaquettes;
            Bond { sites: (index[a], index[b]), edge: e }
        })
        .collect();
    TriangularLattice {
        kind: TriangularKind::Dual(color),
        sites: plaqs.into_iter().map(SiteOrigin::Plaquette).collect(),
        bonds,
        cells: Vec::new(),
    }
}

/// Lattice of `color` links: one site per `color` edge. Hexagons of the other
/// two colors become three-site cells (their boundary links) and `color`
/// hexagons become six-site cells (the links at their corners). Bonds join the
/// two links at the endpoints of every edge of another color.
pub fn link_lattice(lat: &ColorLattice, color: Color) -> TriangularLattice {
    let links: Vec<usize> = lat.edges_of(color).collect();
    let mut index = vec![usize::MAX; lat.edges.len()];
    for (s, &e) in links.iter().enumerate() {
        index[e] = s;
    }
    let mut cells = Vec::with_capacity(lat.plaquettes.len());
    for (p, plaq) in lat.plaquettes.iter().enumerate() {
        if plaq.color == color {
            cells.push(Cell {
                kind: CellKind::Six,
                plaquette: p,
                sites: lat.corner_edges(p, color).into_iter().map(|e| index[e]).collect(),
            });
        } else {
            cells.push(Cell {
                kind: CellKind::Three,
                plaquette: p,
                sites: lat.boundary_edges(p, color).into_iter().map(|e| index[e]).collect(),
            });
        }
    }
    let bonds = lat
        .edges
        .iter()
        .enumerate()
        .filter(|(_, e)| e.color != color)
        .map(|(e, edge)| {
            let (i, j) = edge.qubits;
            Bond {
                sites: (
                    index[lat.qubit_edge(i, color)],
                    index[lat.qubit_edge(j, color)],
                ),
                edge: e,
            }
        })
        .collect();
    TriangularLattice {
        kind: TriangularKind::Link(color),
        sites: links.into_iter().map(SiteOrigin::Edge).collect(),
        bonds,
        cells,
    }
}
