//! Abelian anyon theories over `F_2^k`: fusion is vector addition, braiding
//! is `M(u, v) = (-1)^{u^T B v}` for a symmetric form `B`, and the spin `theta`
//! is a quadratic refinement of `M`.
//!
//! The color code theory uses the basis `(r_x, r_z, g_x, g_z)` with
//! `c_y = c_x + c_z` and `b_a = r_a + g_a`. Its braiding form is not written
//! down by hand: [`derive_color_code_braiding`] solves for it from the boson
//! braiding rule (same color or same Pauli label braid trivially, all other
//! boson pairs pick up `-1`).

use std::fmt::{self, Write as _};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2;
use crate::lattice::Color;

/// An anyon, as a vector in `F_2^rank`.
pub type Anyon = usize;

pub const VACUUM: Anyon = 0;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnyonTheory {
    name: String,
    rank: usize,
    /// Row `i` of `B` as a bit mask.
    braiding: Vec<u32>,
    /// `theta` for every element, `+1` or `-1`.
    spin: Vec<i8>,
    labels: Vec<String>,
}

impl AnyonTheory {
    /// Theory whose spins are generated from the basis spins by
    /// `theta(u + v) = theta(u) theta(v) M(u, v)`.
    pub fn from_basis(
        name: &str,
        braiding: Vec<u32>,
        basis_spin: &[i8],
        labels: Vec<String>,
    ) -> Result<Self> {
        let rank = braiding.len();
        if basis_spin.len() != rank {
            return Err(Error::Invalid("one spin per basis anyon".into()));
        }
        let mut spin = vec![1i8; 1 << rank];
        for u in 1..1usize << rank {
            let i = u.trailing_zeros() as usize;
            let rest = u & (u - 1);
            let m = if (braiding[i] as usize & rest).count_ones() % 2 == 1 { -1 } else { 1 };
            spin[u] = spin[rest] * basis_spin[i] * m;
        }
        AnyonTheory::from_tables(name, braiding, spin, labels)
    }

    /// Theory from explicit tables; checks symmetry of `B`, `theta(0) = 1`
    /// and the quadratic refinement identity on every pair.
    pub fn from_tables(
        name: &str,
        braiding: Vec<u32>,
        spin: Vec<i8>,
        labels: Vec<String>,
    ) -> Result<Self> {
        let rank = braiding.len();
        let size = 1usize << rank;
        if spin.len() != size || labels.len() != size {
            return Err(Error::Invalid(format!("rank {rank} needs {size} spins and labels")));
        }
        let t = AnyonTheory { name: name.to_string(), rank, braiding, spin, labels };
        for i in 0..rank {
            for j in 0..rank {
                if t.form(1 << i, 1 << j) != t.form(1 << j, 1 << i) {
                    return Err(Error::Invalid("braiding form is not symmetric".into()));
                }
            }
        }
        if t.spin[0] != 1 {
            return Err(Error::Invalid("vacuum must be a boson".into()));
        }
        for u in 0..size {
            for v in 0..size {
                if t.spin[u ^ v] != t.spin[u] * t.spin[v] * t.braid(u, v) {
                    return Err(Error::Invalid(format!(
                        "spin is not a quadratic refinement at ({}, {})",
                        t.labels[u], t.labels[v]
                    )));
                }
            }
        }
        Ok(t)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn size(&self) -> usize {
        1 << self.rank
    }

    pub fn anyons(&self) -> impl Iterator<Item = Anyon> {
        0..self.size()
    }

    fn form(&self, u: Anyon, v: Anyon) -> bool {
        let mut acc = 0u32;
        for i in 0..self.rank {
            if (u >> i) & 1 == 1 {
                acc ^= (self.braiding[i] as usize & v).count_ones() & 1;
            }
        }
        acc == 1
    }

    pub fn fuse(&self, a: Anyon, b: Anyon) -> Anyon {
        a ^ b
    }

    /// Monodromy `M(a, b)`, `+1` or `-1`.
    pub fn braid(&self, a: Anyon, b: Anyon) -> i8 {
        if self.form(a, b) {
            -1
        } else {
            1
        }
    }

    pub fn spin(&self, a: Anyon) -> i8 {
        self.spin[a]
    }

    pub fn is_boson(&self, a: Anyon) -> bool {
        a != VACUUM && self.spin[a] == 1
    }

    pub fn is_fermion(&self, a: Anyon) -> bool {
        self.spin[a] == -1
    }

    pub fn label(&self, a: Anyon) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Accepts `1`, `vacuum` or any label of the theory; a quotient class
    /// label also matches each of its `=`-separated members.
    pub fn parse(&self, label: &str) -> Result<Anyon> {
        let label = label.trim();
        if label == "1" || label.eq_ignore_ascii_case("vacuum") {
            return Ok(VACUUM);
        }
        let norm = |s: &str| s.split_whitespace().collect::<Vec<_>>().join(" ");
        let wanted = norm(label);
        self.labels
            .iter()
            .position(|l| norm(l) == wanted || l.split('=').any(|m| norm(m) == wanted))
            .ok_or_else(|| Error::UnknownAnyon(label.to_string()))
    }

    pub fn classify(&self) -> Census {
        let mut c = Census { bosons: 0, fermions: 0, vacuum: 0 };
        for a in self.anyons() {
            if a == VACUUM {
                c.vacuum += 1;
            } else if self.spin[a] == 1 {
                c.bosons += 1;
            } else {
                c.fermions += 1;
            }
        }
        c
    }

    pub fn fusion_table(&self) -> Vec<Vec<Anyon>> {
        self.anyons().map(|a| self.anyons().map(|b| self.fuse(a, b)).collect()).collect()
    }

    pub fn braiding_table(&self) -> Vec<Vec<i8>> {
        self.anyons().map(|a| self.anyons().map(|b| self.braid(a, b)).collect()).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let name = |a: Anyon| self.labels[a].clone();
        serde_json::json!({
            "name": self.name,
            "anyons": self.anyons().map(|a| serde_json::json!({
                "label": name(a),
                "spin": self.spin[a],
            })).collect::<Vec<_>>(),
            "fusion": self.fusion_table().iter()
                .map(|row| row.iter().map(|&c| name(c)).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "braiding": self.braiding_table(),
        })
    }

    /// Spin list, fusion table and braiding table as aligned text.
    pub fn tables_text(&self) -> String {
        let width = self.labels.iter().map(String::len).max().unwrap_or(1).max(2);
        let mut out = String::new();
        let noun = if self.size() == 1 { "anyon" } else { "anyons" };
        let _ = writeln!(out, "{} ({} {noun})", self.name, self.size());
        let c = self.classify();
        let _ = writeln!(out, "census: {} bosons, {} fermions, {} vacuum", c.bosons, c.fermions, c.vacuum);
        let _ = writeln!(out, "\nspins:");
        for a in self.anyons() {
            let _ = writeln!(out, "  {:>width$}  {:+}", self.labels[a], self.spin[a]);
        }
        let header = |out: &mut String| {
            let _ = write!(out, "{:>width$} |", "");
            for b in self.anyons() {
                let _ = write!(out, " {:>width$}", self.labels[b]);
            }
            out.push('\n');
        };
        let _ = writeln!(out, "\nfusion:");
        header(&mut out);
        for a in self.anyons() {
            let _ = write!(out, "{:>width$} |", self.labels[a]);
            for b in self.anyons() {
                let _ = write!(out, " {:>width$}", self.labels[self.fuse(a, b)]);
            }
            out.push('\n');
        }
        let _ = writeln!(out, "\nbraiding:");
        header(&mut out);
        for a in self.anyons() {
            let _ = write!(out, "{:>width$} |", self.labels[a]);
            for b in self.anyons() {
                let _ = write!(out, " {:>width$}", if self.braid(a, b) == 1 { "+1" } else { "-1" });
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Census {
    pub bosons: usize,
    pub fermions: usize,
    pub vacuum: usize,
}

/// `{1, e, m, f}` with `e = (1,0)`, `m = (0,1)`.
pub fn toric_code_theory() -> AnyonTheory {
    let labels = ["1", "e", "m", "f"].map(String::from).to_vec();
    AnyonTheory::from_basis("toric code", vec![0b10, 0b01], &[1, 1], labels)
        .expect("toric code tables are consistent")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum PauliLabel {
    X,
    Y,
    Z,
}

impl PauliLabel {
    pub const ALL: [PauliLabel; 3] = [PauliLabel::X, PauliLabel::Y, PauliLabel::Z];

    pub fn letter(self) -> char {
        match self {
            PauliLabel::X => 'x',
            PauliLabel::Y => 'y',
            PauliLabel::Z => 'z',
        }
    }

    pub fn third(self, other: PauliLabel) -> PauliLabel {
        PauliLabel::ALL
            .into_iter()
            .find(|&p| p != self && p != other)
            .expect("labels differ")
    }
}

impl fmt::Display for PauliLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// The boson `c_a` of the color code theory as a vector over
/// `(r_x, r_z, g_x, g_z)`.
pub fn color_code_boson(color: Color, label: PauliLabel) -> Anyon {
    let pauli = |base: usize| match label {
        PauliLabel::X => 1 << base,
        PauliLabel::Z => 1 << (base + 1),
        PauliLabel::Y => 0b11 << base,
    };
    match color {
        Color::Red => pauli(0),
        Color::Green => pauli(2),
        Color::Blue => pauli(0) | pauli(2),
    }
}

pub fn boson_label(color: Color, label: PauliLabel) -> String {
    format!("{}_{}", color.letter(), label)
}

/// The nine color code bosons with their labels.
pub fn color_code_bosons() -> Vec<(Color, PauliLabel, Anyon)> {
    Color::ALL
        .into_iter()
        .flat_map(|c| PauliLabel::ALL.into_iter().map(move |p| (c, p, color_code_boson(c, p))))
        .collect()
}

/// Solves for the symmetric, zero-diagonal form `B` on `(r_x, r_z, g_x, g_z)`
/// from the boson rule `M(u_a, v_b) = -1` iff `u != v` and `a != b`, imposed
/// on all 81 ordered boson pairs. Fails unless the solution is unique.
pub fn derive_color_code_braiding() -> Result<Vec<u32>> {
    // Unknowns B_ij for i < j, numbered in row order.
    let pairs: Vec<(usize, usize)> =
        (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))).collect();
    let bosons = color_code_bosons();
    let mut rows = Vec::new();
    for &(cu, a, u) in &bosons {
        for &(cv, b, v) in &bosons {
            let mut coeffs = 0u64;
            for (k, &(i, j)) in pairs.iter().enumerate() {
                let term = ((u >> i) & (v >> j) & 1) ^ ((u >> j) & (v >> i) & 1);
                coeffs |= (term as u64) << k;
            }
            rows.push((coeffs, cu != cv && a != b));
        }
    }
    let (x, rank) = gf2::solve(&rows, pairs.len())
        .ok_or_else(|| Error::Invalid("boson braiding rule is inconsistent".into()))?;
    if rank != pairs.len() {
        return Err(Error::Invalid(format!(
            "boson braiding rule fixes only {rank} of {} form entries",
            pairs.len()
        )));
    }
    let mut b = vec![0u32; 4];
    for (k, &(i, j)) in pairs.iter().enumerate() {
        if x[k] {
            b[i] |= 1 << j;
            b[j] |= 1 << i;
        }
    }
    Ok(b)
}

/// The 16-anyon color code theory. Non-boson labels name a fermion as the
/// fusion `r_a g_b` of a red and a green boson with `a != b`.
pub fn color_code_theory() -> AnyonTheory {
    let braiding = derive_color_code_braiding().expect("boson braiding rule is solvable");
    let mut labels = vec![String::new(); 16];
    labels[VACUUM] = "1".into();
    for (c, p, a) in color_code_bosons() {
        labels[a] = boson_label(c, p);
    }
    for a in PauliLabel::ALL {
        for b in PauliLabel::ALL {
            if a != b {
                let f = color_code_boson(Color::Red, a) ^ color_code_boson(Color::Green, b);
                labels[f] = format!("r_{a} g_{b}");
            }
        }
    }
    debug_assert!(labels.iter().all(|l| !l.is_empty()));
    AnyonTheory::from_basis("color code", braiding, &[1, 1, 1, 1], labels)
        .expect("derived color code tables are consistent")
}

#[derive(Clone, Debug, Serialize)]
pub struct CondensationResult {
    /// Fusion closure of the condensed generators, vacuum included.
    pub algebra: Vec<Anyon>,
    pub confined: Vec<Anyon>,
    /// Deconfined anyons grouped into classes identified by the condensate.
    pub classes: Vec<Vec<Anyon>>,
    /// For every anyon of the parent theory, its quotient anyon if deconfined.
    pub class_map: Vec<Option<Anyon>>,
    pub quotient: AnyonTheory,
}

impl CondensationResult {
    pub fn describe(&self, parent: &AnyonTheory) -> String {
        let names = |xs: &[Anyon]| {
            xs.iter().map(|&a| parent.label(a).to_string()).collect::<Vec<_>>().join(", ")
        };
        let mut out = String::new();
        let _ = writeln!(out, "condensate: {{{}}}", names(&self.algebra));
        let _ = writeln!(out, "confined:   {{{}}}", names(&self.confined));
        let _ = writeln!(out, "classes:");
        for class in &self.classes {
            let _ = writeln!(out, "  {{{}}}", names(class));
        }
        out.push('\n');
        out.push_str(&self.quotient.tables_text());
        out
    }

    pub fn to_json(&self, parent: &AnyonTheory) -> serde_json::Value {
        let names = |xs: &[Anyon]| xs.iter().map(|&a| parent.label(a).to_string()).collect::<Vec<_>>();
        serde_json::json!({
            "parent": parent.name(),
            "algebra": names(&self.algebra),
            "confined": names(&self.confined),
            "classes": self.classes.iter().map(|c| names(c)).collect::<Vec<_>>(),
            "quotient": self.quotient.to_json(),
        })
    }
}

/// Condenses the bosons generated by `generators`: anyons braiding
/// nontrivially with the condensate are confined and the rest are identified
/// modulo the condensate. Inherited spins and braiding are checked to be
/// constant on classes.
pub fn condense(t: &AnyonTheory, generators: &[Anyon]) -> Result<CondensationResult> {
    for &g in generators {
        if g >= t.size() {
            return Err(Error::UnknownAnyon(format!("#{g}")));
        }
        if g != VACUUM && !t.is_boson(g) {
            return Err(Error::NotBoson { label: t.label(g).to_string() });
        }
    }
    let mut algebra = vec![VACUUM];
    for &g in generators {
        if !algebra.contains(&g) {
            let shifted: Vec<Anyon> = algebra.iter().map(|&a| a ^ g).collect();
            algebra.extend(shifted);
        }
    }
    algebra.sort_unstable();
    if let Some(&bad) = algebra.iter().find(|&&a| t.spin(a) != 1) {
        return Err(Error::NotBoson { label: t.label(bad).to_string() });
    }

    let (confined, deconfined): (Vec<Anyon>, Vec<Anyon>) =
        t.anyons().partition(|&a| algebra.iter().any(|&c| t.braid(a, c) == -1));

    let mut class_of = vec![usize::MAX; t.size()];
    let mut classes: Vec<Vec<Anyon>> = Vec::new();
    for &d in &deconfined {
        if class_of[d] != usize::MAX {
            continue;
        }
        let mut members: Vec<Anyon> = algebra.iter().map(|&c| d ^ c).collect();
        members.sort_unstable();
        for &m in &members {
            class_of[m] = classes.len();
        }
        classes.push(members);
    }
    for class in &classes {
        if class.iter().any(|&m| t.spin(m) != t.spin(class[0])) {
            return Err(Error::InconsistentQuotient { what: "spin" });
        }
    }
    for a in &classes {
        for b in &classes {
            let m = t.braid(a[0], b[0]);
            if a.iter().any(|&x| b.iter().any(|&y| t.braid(x, y) != m)) {
                return Err(Error::InconsistentQuotient { what: "braiding" });
            }
        }
    }

    // Basis of the quotient: class representatives independent modulo the condensate.
    let mut span: Vec<Anyon> = algebra.clone();
    let mut basis: Vec<Anyon> = Vec::new();
    for class in &classes {
        let r = class[0];
        if !span.contains(&r) {
            let shifted: Vec<Anyon> = span.iter().map(|&a| a ^ r).collect();
            span.extend(shifted);
            basis.push(r);
        }
    }
    if 1usize << basis.len() != classes.len() {
        return Err(Error::InconsistentQuotient { what: "fusion" });
    }
    let combine = |w: usize| -> Anyon {
        basis.iter().enumerate().filter(|(i, _)| (w >> i) & 1 == 1).fold(0, |acc, (_, &b)| acc ^ b)
    };
    let class_to_w: Vec<usize> = {
        let mut table = vec![usize::MAX; classes.len()];
        for w in 0..classes.len() {
            table[class_of[combine(w)]] = w;
        }
        table
    };
    let labels: Vec<String> = (0..classes.len())
        .map(|w| {
            let class = &classes[class_of[combine(w)]];
            class.iter().map(|&a| t.label(a)).collect::<Vec<_>>().join("=")
        })
        .collect();
    let spin: Vec<i8> = (0..classes.len()).map(|w| t.spin(combine(w))).collect();
    let braiding: Vec<u32> = basis
        .iter()
        .map(|&bi| {
            basis
                .iter()
                .enumerate()
                .filter(|(_, &bj)| t.braid(bi, bj) == -1)
                .fold(0u32, |acc, (j, _)| acc | (1 << j))
        })
        .collect();
    let quotient =
        AnyonTheory::from_tables(&format!("{} / condensate", t.name()), braiding, spin, labels)?;
    let class_map = (0..t.size())
        .map(|a| (class_of[a] != usize::MAX).then(|| class_to_w[class_of[a]]))
        .collect();
    Ok(CondensationResult { algebra, confined, classes, class_map, quotient })
}

/// A fusion-preserving bijection `a -> b` that also preserves spins and
/// braiding, if one exists. Every fusion-preserving bijection is linear, so
/// the search runs over images of a basis.
pub fn find_isomorphism(a: &AnyonTheory, b: &AnyonTheory) -> Option<Vec<Anyon>> {
    if a.rank() != b.rank() {
        return None;
    }
    let rank = a.rank();
    let mut images = Vec::with_capacity(rank);
    search(a, b, &mut images, rank)
}

fn search(a: &AnyonTheory, b: &AnyonTheory, images: &mut Vec<Anyon>, rank: usize) -> Option<Vec<Anyon>> {
    if images.len() == rank {
        let map: Vec<Anyon> = (0..a.size())
            .map(|u| (0..rank).filter(|i| (u >> i) & 1 == 1).fold(0, |acc, i| acc ^ images[i]))
            .collect();
        let mut seen = vec![false; b.size()];
        for &m in &map {
            if std::mem::replace(&mut seen[m], true) {
                return None;
            }
        }
        let ok = a.anyons().all(|u| {
            a.spin(u) == b.spin(map[u]) && a.anyons().all(|v| a.braid(u, v) == b.braid(map[u], map[v]))
        });
        return ok.then_some(map);
    }
    for img in 1..b.size() {
        images.push(img);
        if let Some(map) = search(a, b, images, rank) {
            return Some(map);
        }
        images.pop();
    }
    None
}
