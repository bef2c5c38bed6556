//! Basis changes of the perturbed color code as rewrite maps on generator
//! shapes, plus the checks that the rewritten models are equivalent.
//!
//! A frame recognizes three term shapes on the honeycomb: a plaquette `X`
//! string, a plaquette `Z` string, and an edge `XX`. Anything else is
//! rejected rather than guessed.
//!
//! * Ising frame: `B^x_p -> 1`, `B^z_p -> Zbar_p`, and a color-`c` edge
//!   `X_i X_j -> Xbar_p Xbar_q` for the two `c` plaquettes at its ends. Ising
//!   qubits are numbered by plaquette.
//! * Red frame (red-link qubits): red `XX` and green/blue `B^x` are trivial,
//!   red `B^x` becomes `X` on its six corner links, green/blue `B^z` becomes
//!   `Z` on its three boundary links.
//! * Green frame (green-link qubits): green `XX` and red/blue `B^x` are
//!   trivial, green `B^x` becomes six-body `X`, red `B^z` three-body `Z`, and
//!   a blue edge `XX` becomes `XX` on the green links at its two ends.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2::{self, BitMatrix};
use crate::lattice::{dual_triangular, link_lattice, Color, ColorLattice, SiteOrigin};
use crate::models::{perturbed_h, tfim_h, Couplings, ModelBundle};
use crate::pauli::{OperatorSum, PauliString};
use crate::spectra::{
    self, clusters, dense_x_symmetric_matrix, dense_z_sector_matrix, full_spectrum_with_limit,
    low_lying_with, symmetric_spectrum, LowLyingOptions, Sector, XOrbits, ZSector,
    CLUSTER_TOLERANCE, DENSE_LIMIT_LOG2, ITERATIVE_LIMIT_LOG2,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FrameKind {
    Ising,
    Red,
    Green,
    /// Every term maps to itself; a reference point for the group checks.
    Identity,
}

impl FrameKind {
    fn name(self) -> &'static str {
        match self {
            FrameKind::Ising => "ising",
            FrameKind::Red => "red",
            FrameKind::Green => "green",
            FrameKind::Identity => "identity",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Shape {
    PlaquetteX(usize),
    PlaquetteZ(usize),
    EdgeXX(usize),
}

#[derive(Clone, Debug)]
pub struct FrameSpec {
    kind: FrameKind,
    lattice: Option<ColorLattice>,
    shapes: HashMap<(u128, u128), Shape>,
    /// Ising frame: plaquette -> Ising qubit. Link frames: edge -> link
    /// qubit, `usize::MAX` for edges of other colors.
    target_index: Vec<usize>,
    n_source: usize,
    n_target: usize,
}

impl FrameSpec {
    fn on_lattice(kind: FrameKind, lat: &ColorLattice) -> FrameSpec {
        let n = lat.n_qubits();
        let mut shapes = HashMap::new();
        for (p, plaq) in lat.plaquettes().iter().enumerate() {
            let mask = plaq.qubits.iter().fold(0u128, |m, &q| m | 1 << q);
            shapes.entry((mask, 0)).or_insert(Shape::PlaquetteX(p));
            shapes.entry((0, mask)).or_insert(Shape::PlaquetteZ(p));
        }
        for (e, edge) in lat.edges().iter().enumerate() {
            let mask = (1u128 << edge.qubits.0) | (1u128 << edge.qubits.1);
            shapes.entry((mask, 0)).or_insert(Shape::EdgeXX(e));
        }
        let (target_index, n_target) = match kind {
            FrameKind::Ising => ((0..lat.plaquettes().len()).collect(), lat.plaquettes().len()),
            FrameKind::Red | FrameKind::Green => {
                let c = if kind == FrameKind::Red { Color::Red } else { Color::Green };
                let tri = link_lattice(lat, c);
                let mut index = vec![usize::MAX; lat.edges().len()];
                for (s, origin) in tri.sites.iter().enumerate() {
                    if let SiteOrigin::Edge(e) = origin {
                        index[*e] = s;
                    }
                }
                (index, tri.n_sites())
            }
            FrameKind::Identity => ((0..n).collect(), n),
        };
        FrameSpec { kind, lattice: Some(lat.clone()), shapes, target_index, n_source: n, n_target }
    }

    pub fn ising(lat: &ColorLattice) -> FrameSpec {
        FrameSpec::on_lattice(FrameKind::Ising, lat)
    }

    pub fn red(lat: &ColorLattice) -> FrameSpec {
        FrameSpec::on_lattice(FrameKind::Red, lat)
    }

    pub fn green(lat: &ColorLattice) -> FrameSpec {
        FrameSpec::on_lattice(FrameKind::Green, lat)
    }

    pub fn identity(n: usize) -> FrameSpec {
        FrameSpec {
            kind: FrameKind::Identity,
            lattice: None,
            shapes: HashMap::new(),
            target_index: (0..n).collect(),
            n_source: n,
            n_target: n,
        }
    }

    pub fn kind(&self) -> FrameKind {
        self.kind
    }

    pub fn n_source(&self) -> usize {
        self.n_source
    }

    pub fn n_target(&self) -> usize {
        self.n_target
    }

    /// Source object (plaquette, edge or qubit) to target qubit; unmapped
    /// entries are `usize::MAX`.
    pub fn target_index(&self) -> &[usize] {
        &self.target_index
    }

    fn lattice(&self) -> &ColorLattice {
        self.lattice.as_ref().expect("lattice frames carry their lattice")
    }

    fn link(&self, e: usize) -> usize {
        self.target_index[e]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RewriteResult {
    pub image: OperatorSum,
    /// Weight of the identity produced by terms that become trivial.
    pub constant: f64,
}

impl RewriteResult {
    fn trivial(n: usize, weight: f64) -> Self {
        RewriteResult { image: OperatorSum::new(n), constant: weight }
    }

    fn single(n: usize, weight: f64, op: PauliString) -> Self {
        let mut image = OperatorSum::new(n);
        image.push(weight, op).expect("images are hermitian");
        RewriteResult { image, constant: 0.0 }
    }

    pub fn is_trivial(&self) -> bool {
        self.image.is_empty()
    }
}

fn unsupported(term: &PauliString, frame: &FrameSpec, reason: impl Into<String>) -> Error {
    Error::UnsupportedTerm { term: term.to_string(), frame: frame.kind.name(), reason: reason.into() }
}

/// Image of a single term. The string's sign is carried into the result.
pub fn rewrite(term: &PauliString, frame: &FrameSpec) -> Result<RewriteResult> {
    if term.n_qubits() != frame.n_source {
        return Err(Error::SizeMismatch { left: frame.n_source, right: term.n_qubits() });
    }
    let sign = match term.sign_phase() {
        0 => 1.0,
        2 => -1.0,
        _ => return Err(unsupported(term, frame, "not hermitian")),
    };
    let nt = frame.n_target;
    if frame.kind == FrameKind::Identity {
        return Ok(RewriteResult::single(nt, sign, term.unsigned()));
    }
    let shape = *frame
        .shapes
        .get(&(term.x_mask(), term.z_mask()))
        .ok_or_else(|| unsupported(term, frame, "not a plaquette or edge generator"))?;
    let lat = frame.lattice();
    let result = match (frame.kind, shape) {
        (FrameKind::Ising, Shape::PlaquetteX(_)) => RewriteResult::trivial(nt, sign),
        (FrameKind::Ising, Shape::PlaquetteZ(p)) => {
            RewriteResult::single(nt, sign, PauliString::z_on(nt, [frame.target_index[p]]))
        }
        (FrameKind::Ising, Shape::EdgeXX(e)) => {
            let (a, b) = lat.edge(e).plaquettes;
            let op = PauliString::x_on(nt, [frame.target_index[a], frame.target_index[b]]);
            RewriteResult::single(nt, sign, op)
        }
        (FrameKind::Red | FrameKind::Green, shape) => {
            let own = if frame.kind == FrameKind::Red { Color::Red } else { Color::Green };
            rewrite_link(term, frame, shape, own, sign)?
        }
        (FrameKind::Identity, _) => unreachable!("handled above"),
    };
    Ok(result)
}

fn rewrite_link(
    term: &PauliString,
    frame: &FrameSpec,
    shape: Shape,
    own: Color,
    sign: f64,
) -> Result<RewriteResult> {
    let lat = frame.lattice();
    let nt = frame.n_target;
    let links = |edges: Vec<usize>| edges.into_iter().map(|e| frame.link(e)).collect::<Vec<_>>();
    match shape {
        Shape::EdgeXX(e) => {
            let c = lat.edge(e).color;
            if c == own {
                return Ok(RewriteResult::trivial(nt, sign));
            }
            // Only blue edges carry Ising terms in the green-frame model.
            if own == Color::Green && c == Color::Blue {
                let (i, j) = lat.edge(e).qubits;
                let (a, b) = (frame.link(lat.qubit_edge(i, own)), frame.link(lat.qubit_edge(j, own)));
                return Ok(RewriteResult::single(nt, sign, PauliString::x_on(nt, [a, b])));
            }
            Err(unsupported(term, frame, format!("{c} edge term has no image")))
        }
        Shape::PlaquetteX(p) => {
            if lat.plaquette(p).color == own {
                let op = PauliString::x_on(nt, links(lat.corner_edges(p, own)));
                Ok(RewriteResult::single(nt, sign, op))
            } else {
                Ok(RewriteResult::trivial(nt, sign))
            }
        }
        Shape::PlaquetteZ(p) => {
            let c = lat.plaquette(p).color;
            let allowed = match own {
                Color::Red => c != Color::Red,
                _ => c == Color::Red,
            };
            if !allowed {
                return Err(unsupported(term, frame, format!("{c} plaquette Z term has no image")));
            }
            let op = PauliString::z_on(nt, links(lat.boundary_edges(p, own)));
            Ok(RewriteResult::single(nt, sign, op))
        }
    }
}

fn expect_kind(frame: &FrameSpec, kind: FrameKind) -> Result<()> {
    if frame.kind != kind {
        return Err(Error::Invalid(format!(
            "expected a {} frame, got {}",
            kind.name(),
            frame.kind.name()
        )));
    }
    Ok(())
}

pub fn rewrite_ising(term: &PauliString, frame: &FrameSpec) -> Result<RewriteResult> {
    expect_kind(frame, FrameKind::Ising)?;
    rewrite(term, frame)
}

pub fn rewrite_red(term: &PauliString, frame: &FrameSpec) -> Result<RewriteResult> {
    expect_kind(frame, FrameKind::Red)?;
    rewrite(term, frame)
}

pub fn rewrite_green(term: &PauliString, frame: &FrameSpec) -> Result<RewriteResult> {
    expect_kind(frame, FrameKind::Green)?;
    rewrite(term, frame)
}

/// Term-by-term image of a sum.
pub fn rewrite_sum(h: &OperatorSum, frame: &FrameSpec) -> Result<RewriteResult> {
    let mut out = RewriteResult::trivial(frame.n_target, 0.0);
    for t in h.terms() {
        if t.op.is_identity() {
            out.constant += t.coeff;
            continue;
        }
        let r = rewrite(&t.op, frame)?;
        out.constant += t.coeff * r.constant;
        out.image.extend(&r.image.scaled(t.coeff))?;
    }
    Ok(out)
}

/// The Ising-frame image split into one transverse-field Ising model per
/// color, each on the sites of that color's dual lattice.
#[derive(Clone, Debug, Serialize)]
pub struct IsingDecomposition {
    pub constant: f64,
    /// Indexed by [`Color::index`].
    pub tfims: Vec<OperatorSum>,
}

pub fn transform_h_ising(m: &ModelBundle) -> Result<IsingDecomposition> {
    let lat = m
        .lattice
        .as_ref()
        .ok_or_else(|| Error::Invalid("model carries no honeycomb lattice".into()))?;
    let frame = FrameSpec::ising(lat);
    let image = rewrite_sum(&m.hamiltonian, &frame)?;

    let mut site = vec![0usize; lat.plaquettes().len()];
    let mut tfims = Vec::new();
    for c in Color::ALL {
        let tri = dual_triangular(lat, c);
        for (s, origin) in tri.sites.iter().enumerate() {
            if let SiteOrigin::Plaquette(p) = origin {
                site[*p] = s;
            }
        }
        tfims.push(OperatorSum::new(tri.n_sites()));
    }
    for t in image.image.terms() {
        let support: Vec<usize> = (0..lat.plaquettes().len())
            .filter(|&p| (t.op.support() >> p) & 1 == 1)
            .collect();
        let color = lat.plaquette(support[0]).color;
        if support.iter().any(|&p| lat.plaquette(p).color != color) {
            return Err(Error::CrossColorTerm(t.op.to_string()));
        }
        let target = &mut tfims[color.index()];
        let op = t.op.relabel(&site, target.n_qubits())?;
        target.push(t.coeff, op)?;
    }
    Ok(IsingDecomposition { constant: image.constant, tfims })
}

/// Same multiset of `(coefficient, string)` terms, order ignored.
pub fn structurally_equal(a: &OperatorSum, b: &OperatorSum) -> bool {
    a.n_qubits() == b.n_qubits() && a.sorted_terms() == b.sorted_terms()
}

/// Whether the nontrivial images of `source_gens` generate the same group
/// (as GF(2) spans, signs ignored) as `target_gens`.
pub fn verify_group_image(
    source_gens: &[PauliString],
    frame: &FrameSpec,
    target_gens: &[PauliString],
) -> Result<bool> {
    let images = group_images(source_gens, frame)?;
    Ok(gf2::same_pauli_span(&images, target_gens))
}

/// Nontrivial images of the given generators, in order.
pub fn group_images(source_gens: &[PauliString], frame: &FrameSpec) -> Result<Vec<PauliString>> {
    let mut images = Vec::new();
    for g in source_gens {
        let r = rewrite(g, frame)?;
        images.extend(r.image.terms().iter().map(|t| t.op));
    }
    Ok(images)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EquivalenceMode {
    /// Complete spectra of both operators.
    Full,
    /// Only the lowest eigenvalues of each side; the last cluster of each
    /// list may be cut short and is left out of the comparison.
    LowLying,
    /// Complete spectra inside matching symmetry sectors.
    SectorFull,
    /// Lowest eigenvalues inside matching symmetry sectors, compared one by one.
    SectorLowLying,
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceReport {
    pub mode: EquivalenceMode,
    pub dimension_a: usize,
    pub dimension_b: usize,
    pub compared: usize,
    pub tolerance: f64,
    pub max_deviation: f64,
    pub distinct_match: bool,
    pub uniform_multiplicity: bool,
    /// `log2` of the common ratio `mult_a / mult_b`, when uniform.
    pub multiplicity_factor_log2: Option<i32>,
    pub eigenvalues_a: Vec<f64>,
    /// Already shifted.
    pub eigenvalues_b: Vec<f64>,
    pub note: String,
}

impl EquivalenceReport {
    pub fn passed(&self) -> bool {
        self.distinct_match && self.uniform_multiplicity
    }

    /// JSON with eigenvalue lists cut to `max_listed` entries.
    pub fn to_json(&self, max_listed: usize) -> serde_json::Value {
        let mut r = self.clone();
        r.eigenvalues_a.truncate(max_listed);
        r.eigenvalues_b.truncate(max_listed);
        let mut v = serde_json::to_value(&r).expect("report serializes");
        v["passed"] = serde_json::Value::Bool(self.passed());
        v
    }
}

fn ratio_log2(a: usize, b: usize) -> Option<i32> {
    let pow = |q: usize| q.is_power_of_two().then(|| q.trailing_zeros() as i32);
    if a >= b && a % b == 0 {
        pow(a / b)
    } else if b % a == 0 {
        pow(b / a).map(|k| -k)
    } else {
        None
    }
}

/// Compares ascending eigenvalue lists by distinct values and multiplicity
/// ratios. With `complete == false` the last cluster of each side is dropped.
pub fn compare_spectra(
    mode: EquivalenceMode,
    a: &[f64],
    b_shifted: &[f64],
    tol: f64,
    complete: bool,
) -> EquivalenceReport {
    let mut ca = clusters(a, CLUSTER_TOLERANCE);
    let mut cb = clusters(b_shifted, CLUSTER_TOLERANCE);
    if !complete {
        ca.pop();
        cb.pop();
        let n = ca.len().min(cb.len());
        ca.truncate(n);
        cb.truncate(n);
    }
    let same_count = ca.len() == cb.len() && !ca.is_empty();
    let max_deviation = ca
        .iter()
        .zip(&cb)
        .map(|(x, y)| (x.value - y.value).abs())
        .fold(0.0, f64::max);
    let ratios: Vec<Option<i32>> =
        ca.iter().zip(&cb).map(|(x, y)| ratio_log2(x.multiplicity, y.multiplicity)).collect();
    let uniform = same_count && ratios.iter().all(|r| r.is_some() && *r == ratios[0]);
    EquivalenceReport {
        mode,
        dimension_a: a.len(),
        dimension_b: b_shifted.len(),
        compared: ca.len(),
        tolerance: tol,
        max_deviation,
        distinct_match: same_count && max_deviation <= tol,
        uniform_multiplicity: uniform,
        multiplicity_factor_log2: if uniform { ratios[0] } else { None },
        eigenvalues_a: a.to_vec(),
        eigenvalues_b: b_shifted.to_vec(),
        note: String::new(),
    }
}

#[derive(Clone, Debug)]
pub struct EquivalenceOptions {
    pub dense_limit_log2: u32,
    /// Eigenvalues per side when falling back to the iterative solver.
    pub k: usize,
    pub tol: f64,
}

impl Default for EquivalenceOptions {
    fn default() -> Self {
        EquivalenceOptions { dense_limit_log2: DENSE_LIMIT_LOG2, k: 24, tol: 1e-9 }
    }
}

/// Whether the spectrum of `h_a` equals that of `h_b + shift`, distinct
/// values within tolerance and multiplicities in a common power-of-two ratio.
pub fn verify_spectral_equivalence(
    h_a: &OperatorSum,
    h_b: &OperatorSum,
    shift: f64,
) -> Result<EquivalenceReport> {
    verify_spectral_equivalence_with(h_a, h_b, shift, &EquivalenceOptions::default())
}

pub fn verify_spectral_equivalence_with(
    h_a: &OperatorSum,
    h_b: &OperatorSum,
    shift: f64,
    opts: &EquivalenceOptions,
) -> Result<EquivalenceReport> {
    let limit = opts.dense_limit_log2.min(DENSE_LIMIT_LOG2) as usize;
    if h_a.n_qubits() <= limit && h_b.n_qubits() <= limit {
        let a = full_spectrum_with_limit(h_a, opts.dense_limit_log2)?.eigenvalues;
        let b: Vec<f64> = full_spectrum_with_limit(h_b, opts.dense_limit_log2)?
            .eigenvalues
            .into_iter()
            .map(|e| e + shift)
            .collect();
        return Ok(compare_spectra(EquivalenceMode::Full, &a, &b, opts.tol, true));
    }
    let lowest = |h: &OperatorSum| -> Result<Vec<f64>> {
        if h.n_qubits() <= limit {
            let mut e = full_spectrum_with_limit(h, opts.dense_limit_log2)?.eigenvalues;
            e.truncate(opts.k);
            Ok(e)
        } else {
            Ok(spectra::low_lying(h, opts.k, 1e-9)?.eigenvalues)
        }
    };
    let a = lowest(h_a)?;
    let b: Vec<f64> = lowest(h_b)?.into_iter().map(|e| e + shift).collect();
    let mut report = compare_spectra(EquivalenceMode::LowLying, &a, &b, opts.tol, false);
    report.note = format!(
        "dimension beyond 2^{}: only the {} lowest eigenvalues per side were compared",
        limit, opts.k
    );
    Ok(report)
}

/// Group of `X` strings commuting with every plaquette `Z` stabilizer, as
/// qubit masks (a basis of the kernel of the plaquette incidence matrix).
pub fn z_stabilizer_commutant(lat: &ColorLattice) -> Vec<u128> {
    let n = lat.n_qubits();
    let rows = lat.plaquettes().iter().map(|p| p.qubits.iter().fold(0u128, |m, &q| m | 1 << q));
    BitMatrix::from_masks(n, rows)
        .kernel()
        .into_iter()
        .map(|v| v.into_iter().fold(0u128, |m, q| m | 1 << q))
        .collect()
}

/// Relations among the plaquette `Z` stabilizers: sets of plaquettes whose
/// `B^z` multiply to the identity, as plaquette masks.
pub fn plaquette_relations(lat: &ColorLattice) -> Vec<u128> {
    let np = lat.plaquettes().len();
    let mut m = BitMatrix::new(np);
    for q in 0..lat.n_qubits() {
        m.push_row(Color::ALL.map(|c| lat.qubit_plaquette(q, c)));
    }
    m.kernel()
        .into_iter()
        .map(|v| v.into_iter().fold(0u128, |acc, p| acc | 1 << p))
        .collect()
}

/// `constant + sum_c tfim_h(dual_c, J_c)` on one register of Ising qubits
/// numbered by plaquette, built from the model constructors.
pub fn combined_tfim(lat: &ColorLattice, j: Couplings) -> Result<OperatorSum> {
    let np = lat.plaquettes().len();
    let mut h = OperatorSum::new(np);
    h.add_identity(-(np as f64));
    for c in Color::ALL {
        let tri = dual_triangular(lat, c);
        let map: Vec<usize> = tri
            .sites
            .iter()
            .map(|o| match o {
                SiteOrigin::Plaquette(p) => *p,
                SiteOrigin::Edge(_) => unreachable!("dual lattices have plaquette sites"),
            })
            .collect();
        for t in tfim_h(&tri, j.get(c))?.terms() {
            h.push(t.coeff, t.op.relabel(&map, np)?)?;
        }
    }
    Ok(h)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SectorRoute {
    /// Both sides diagonalized densely inside their sectors.
    Dense,
    /// Physical side by the matrix-free solver on `2^N` amplitudes, compared
    /// on the `k` lowest eigenvalues.
    MatrixFree { k: usize },
}

/// Spectral equivalence of the perturbed model and its Ising image.
///
/// The Ising-basis states span the physical states on which every `X` string
/// commuting with all `B^z` acts as `+1` (uniform superpositions over orbits
/// of that group). On the Ising side the relations among the `B^z` become
/// constraints `prod Zbar = +1`. Inside these matching sectors the spectra
/// must agree with multiplicity ratio one.
pub fn ising_sector_equivalence(
    lat: &ColorLattice,
    j: Couplings,
    route: SectorRoute,
    tol: f64,
) -> Result<EquivalenceReport> {
    let h = perturbed_h(lat, j)?.hamiltonian;
    let n = lat.n_qubits();
    if n >= usize::BITS as usize {
        return Err(Error::TooManyQubits(n));
    }
    let flips: Vec<usize> = z_stabilizer_commutant(lat).into_iter().map(|m| m as usize).collect();
    let orbits = XOrbits::new(n, &flips)?;
    let constraints = ZSector::new(
        plaquette_relations(lat).into_iter().map(|m| (m as usize, 1)).collect(),
    );
    let ising = combined_tfim(lat, j)?;
    let ising_spectrum = symmetric_spectrum(dense_z_sector_matrix(&ising, &constraints)?, ising.n_qubits());

    let mut report = match route {
        SectorRoute::Dense => {
            let phys = symmetric_spectrum(dense_x_symmetric_matrix(&h, &orbits)?, n);
            compare_spectra(
                EquivalenceMode::SectorFull,
                &phys.eigenvalues,
                &ising_spectrum.eigenvalues,
                tol,
                true,
            )
        }
        SectorRoute::MatrixFree { k } => {
            spectra::check_dimension(n, ITERATIVE_LIMIT_LOG2, "matrix-free sector solve")?;
            let opts = LowLyingOptions {
                k,
                tol: 1e-9,
                sector: Some(Sector::x_symmetric(orbits.clone())),
                ..Default::default()
            };
            let phys = low_lying_with(&h, &opts)?;
            let k = phys.eigenvalues.len().min(ising_spectrum.eigenvalues.len());
            let a = &phys.eigenvalues[..k];
            let b = &ising_spectrum.eigenvalues[..k];
            let max_deviation = a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            EquivalenceReport {
                mode: EquivalenceMode::SectorLowLying,
                dimension_a: orbits.n_classes(),
                dimension_b: ising_spectrum.dimension,
                compared: k,
                tolerance: tol,
                max_deviation,
                distinct_match: max_deviation <= tol,
                uniform_multiplicity: true,
                multiplicity_factor_log2: Some(0),
                eigenvalues_a: a.to_vec(),
                eigenvalues_b: b.to_vec(),
                note: String::new(),
            }
        }
    };
    report.note = format!(
        "physical sector: {} flip generators, {} orbits of 2^{n} states; Ising sector: {} constraints, dimension {}",
        orbits.rank(),
        orbits.n_classes(),
        constraints.constraints().len(),
        ising_spectrum.dimension
    ) + if report.note.is_empty() { "" } else { "; " }
        + &report.note;
    Ok(report)
}
