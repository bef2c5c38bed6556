//! Pauli strings in the symplectic bit-mask representation.
//!
//! A [`PauliString`] on `n` qubits stores `i^phase * X^x * Z^z`, where
//! `X^x = prod_q X_q^{x_q}` and likewise for `Z`. With this convention
//! `Y = i X Z`, so a `Y` factor contributes one unit of phase. Qubit `q` maps
//! to bit `q` of the masks and of computational basis indices.
//!
//! The text form is a sign prefix (`+`, `-`, `+i`, `-i`) followed by one
//! letter per qubit, qubit 0 first: `"+XIZZY"`. The prefix is the overall
//! factor in front of the product of hermitian single-qubit Paulis.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{self, BitMatrix};

pub const MAX_QUBITS: usize = 128;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: u8,
    phase: u8,
    x: u128,
    z: u128,
}

fn mask(n: usize) -> u128 {
    if n == 128 {
        u128::MAX
    } else {
        (1u128 << n) - 1
    }
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        assert!(n <= MAX_QUBITS, "at most {MAX_QUBITS} qubits");
        PauliString { n: n as u8, phase: 0, x: 0, z: 0 }
    }

    /// `i^phase X^x Z^z`; bits beyond `n` are rejected.
    pub fn from_masks(n: usize, x: u128, z: u128, phase: u8) -> Result<Self> {
        if n > MAX_QUBITS {
            return Err(Error::TooManyQubits(n));
        }
        if (x | z) & !mask(n) != 0 {
            return Err(Error::Invalid(format!("mask bits beyond qubit {n}")));
        }
        Ok(PauliString { n: n as u8, phase: phase % 4, x, z })
    }

    pub fn x_on(n: usize, qubits: impl IntoIterator<Item = usize>) -> Self {
        let mut p = Self::identity(n);
        for q in qubits {
            assert!(q < n);
            p.x ^= 1 << q;
        }
        p
    }

    pub fn z_on(n: usize, qubits: impl IntoIterator<Item = usize>) -> Self {
        let mut p = Self::identity(n);
        for q in qubits {
            assert!(q < n);
            p.z ^= 1 << q;
        }
        p
    }

    pub fn n_qubits(&self) -> usize {
        self.n as usize
    }

    pub fn x_mask(&self) -> u128 {
        self.x
    }

    pub fn z_mask(&self) -> u128 {
        self.z
    }

    /// Exponent `k` of the raw `i^k X^x Z^z` form.
    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn y_count(&self) -> u32 {
        (self.x & self.z).count_ones()
    }

    /// Exponent of the overall factor in front of the hermitian letters.
    pub fn sign_phase(&self) -> u8 {
        ((self.phase as u32 + 4 - self.y_count() % 4) % 4) as u8
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    pub fn weight(&self) -> u32 {
        (self.x | self.z).count_ones()
    }

    pub fn support(&self) -> u128 {
        self.x | self.z
    }

    pub fn is_hermitian(&self) -> bool {
        self.sign_phase() % 2 == 0
    }

    /// Matrix elements in the computational basis are real.
    pub fn is_real(&self) -> bool {
        self.phase % 2 == 0
    }

    pub fn negated(mut self) -> Self {
        self.phase = (self.phase + 2) % 4;
        self
    }

    /// Same letters with sign `+`.
    pub fn unsigned(mut self) -> Self {
        self.phase = (self.y_count() % 4) as u8;
        self
    }

    pub fn letter(&self, q: usize) -> char {
        match ((self.x >> q) & 1, (self.z >> q) & 1) {
            (0, 0) => 'I',
            (1, 0) => 'X',
            (0, 1) => 'Z',
            _ => 'Y',
        }
    }

    /// Symplectic row `(x | z)` over GF(2), `2n` bits.
    pub fn symplectic(&self) -> (u128, u128) {
        (self.x, self.z)
    }

    /// Image under a qubit relabelling `q -> map[q]` onto `n_target` qubits.
    pub fn relabel(&self, map: &[usize], n_target: usize) -> Result<Self> {
        let mut out = PauliString::identity(n_target);
        out.phase = self.phase;
        for q in 0..self.n as usize {
            let bit = 1u128 << q;
            if (self.x | self.z) & bit == 0 {
                continue;
            }
            let t = *map.get(q).ok_or_else(|| Error::Invalid(format!("no image for qubit {q}")))?;
            if t >= n_target {
                return Err(Error::Invalid(format!("qubit {q} maps outside {n_target} qubits")));
            }
            if self.x & bit != 0 {
                out.x |= 1 << t;
            }
            if self.z & bit != 0 {
                out.z |= 1 << t;
            }
        }
        Ok(out)
    }

    fn check_size(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            Err(Error::SizeMismatch { left: self.n as usize, right: other.n as usize })
        } else {
            Ok(())
        }
    }
}

/// Group product `p * q` with exact phase.
pub fn multiply(p: &PauliString, q: &PauliString) -> Result<PauliString> {
    p.check_size(q)?;
    // X^x1 Z^z1 X^x2 Z^z2 = (-1)^{z1.x2} X^{x1+x2} Z^{z1+z2}
    let swap = (p.z & q.x).count_ones() % 2;
    Ok(PauliString {
        n: p.n,
        phase: ((p.phase as u32 + q.phase as u32 + 2 * swap) % 4) as u8,
        x: p.x ^ q.x,
        z: p.z ^ q.z,
    })
}

/// `true` iff the symplectic form `x_p.z_q + z_p.x_q` vanishes over GF(2).
pub fn commutes(p: &PauliString, q: &PauliString) -> Result<bool> {
    p.check_size(q)?;
    Ok(symplectic_product(p, q) == 0)
}

pub(crate) fn symplectic_product(p: &PauliString, q: &PauliString) -> u32 {
    ((p.x & q.z).count_ones() + (p.z & q.x).count_ones()) % 2
}

impl std::ops::Mul for PauliString {
    type Output = PauliString;

    fn mul(self, rhs: PauliString) -> PauliString {
        multiply(&self, &rhs).expect("qubit counts match")
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(["+", "+i", "-", "-i"][self.sign_phase() as usize])?;
        for q in 0..self.n as usize {
            write!(f, "{}", self.letter(q))?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let err = |reason: &str| Error::ParsePauli { text: text.to_string(), reason: reason.to_string() };
        let s = text.trim();
        let (sign, letters) = if let Some(rest) = s.strip_prefix("+i") {
            (1, rest)
        } else if let Some(rest) = s.strip_prefix("-i") {
            (3, rest)
        } else if let Some(rest) = s.strip_prefix('+') {
            (0, rest)
        } else if let Some(rest) = s.strip_prefix('-') {
            (2, rest)
        } else {
            (0, s)
        };
        let n = letters.chars().count();
        if n > MAX_QUBITS {
            return Err(err("more than 128 qubits"));
        }
        let mut p = PauliString::identity(n);
        for (q, c) in letters.chars().enumerate() {
            match c {
                'I' | '_' | '.' => {}
                'X' => p.x |= 1 << q,
                'Z' => p.z |= 1 << q,
                'Y' => {
                    p.x |= 1 << q;
                    p.z |= 1 << q;
                }
                _ => return Err(err(&format!("unexpected character {c:?}"))),
            }
        }
        p.phase = ((sign + p.y_count()) % 4) as u8;
        Ok(p)
    }
}

impl Serialize for PauliString {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl PartialOrd for PauliString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PauliString {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.n, self.x, self.z, self.phase).cmp(&(other.n, other.x, other.z, other.phase))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub coeff: f64,
    pub op: PauliString,
}

/// Real-weighted sum of hermitian Pauli strings on a fixed number of qubits.
///
/// Terms are kept in insertion order; [`OperatorSum::normalized`] merges
/// duplicates and drops negligible coefficients.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorSum {
    n: usize,
    terms: Vec<Term>,
}

pub const DROP_TOLERANCE: f64 = 1e-12;

impl OperatorSum {
    pub fn new(n: usize) -> Self {
        assert!(n <= MAX_QUBITS);
        OperatorSum { n, terms: Vec::new() }
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (f64, PauliString)>) -> Result<Self> {
        let mut sum = OperatorSum::new(n);
        for (c, p) in terms {
            sum.push(c, p)?;
        }
        Ok(sum)
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Appends `coeff * op`. The string's sign is folded into the coefficient.
    pub fn push(&mut self, coeff: f64, op: PauliString) -> Result<()> {
        if op.n_qubits() != self.n {
            return Err(Error::SizeMismatch { left: self.n, right: op.n_qubits() });
        }
        if !coeff.is_finite() {
            return Err(Error::Invalid(format!("non-finite coefficient {coeff}")));
        }
        let coeff = match op.sign_phase() {
            0 => coeff,
            2 => -coeff,
            _ => return Err(Error::Invalid(format!("{op} is not hermitian"))),
        };
        self.terms.push(Term { coeff, op: op.unsigned() });
        Ok(())
    }

    pub fn add_identity(&mut self, coeff: f64) {
        self.terms.push(Term { coeff, op: PauliString::identity(self.n) });
    }

    pub fn extend(&mut self, other: &OperatorSum) -> Result<()> {
        if other.n != self.n {
            return Err(Error::SizeMismatch { left: self.n, right: other.n });
        }
        self.terms.extend_from_slice(&other.terms);
        Ok(())
    }

    pub fn scaled(&self, factor: f64) -> OperatorSum {
        OperatorSum {
            n: self.n,
            terms: self.terms.iter().map(|t| Term { coeff: t.coeff * factor, op: t.op }).collect(),
        }
    }

    /// Duplicates merged, |coefficient| below 1e-12 dropped, sorted by string.
    pub fn normalized(&self) -> OperatorSum {
        let mut terms = self.terms.clone();
        terms.sort_by_key(|t| t.op);
        let mut out: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            match out.last_mut() {
                Some(last) if last.op == t.op => last.coeff += t.coeff,
                _ => out.push(t),
            }
        }
        out.retain(|t| t.coeff.abs() >= DROP_TOLERANCE);
        OperatorSum { n: self.n, terms: out }
    }

    /// Terms sorted by string then coefficient, without merging duplicates.
    pub fn sorted_terms(&self) -> Vec<Term> {
        let mut terms = self.terms.clone();
        terms.sort_by(|a, b| a.op.cmp(&b.op).then(a.coeff.total_cmp(&b.coeff)));
        terms
    }

    /// Coefficient of the identity after merging.
    pub fn identity_coefficient(&self) -> f64 {
        self.terms.iter().filter(|t| t.op.is_identity()).map(|t| t.coeff).sum()
    }

    pub fn is_real(&self) -> bool {
        self.terms.iter().all(|t| t.op.is_real())
    }

    pub fn is_hermitian(&self) -> bool {
        self.terms.iter().all(|t| t.op.is_hermitian() && t.coeff.is_finite())
    }

    /// Upper bound on the operator norm.
    pub fn norm_bound(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff.abs()).sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("operator sum serializes")
    }
}

/// Rank over GF(2) of the `(x | z)` rows.
pub fn gf2_rank(gens: &[PauliString]) -> usize {
    if gens.is_empty() {
        return 0;
    }
    BitMatrix::from_paulis(gens).rank()
}

/// Ground-space degeneracy `2^(n - rank)` of a commuting stabilizer set.
///
/// Fails if two generators anticommute or if the generated group contains
/// `-I` (then no state is stabilized by every generator).
pub fn stabilizer_degeneracy(gens: &[PauliString], n: usize) -> Result<u128> {
    for g in gens {
        if g.n_qubits() != n {
            return Err(Error::SizeMismatch { left: n, right: g.n_qubits() });
        }
    }
    for (i, a) in gens.iter().enumerate() {
        for (j, b) in gens.iter().enumerate().skip(i + 1) {
            if symplectic_product(a, b) != 0 {
                return Err(Error::NonCommuting(i, j));
            }
        }
    }
    let rank = independent_generators(gens)?.len();
    Ok(1u128 << (n - rank))
}

/// Reduces a commuting set to independent generators, tracking signs so that
/// a dependent generator equal to `-I` times the product of others is caught.
pub fn independent_generators(gens: &[PauliString]) -> Result<Vec<PauliString>> {
    let mut pivots: Vec<(usize, PauliString)> = Vec::new();
    for g in gens {
        let mut r = *g;
        for (bit, p) in &pivots {
            if gf2::bit_of(&r, *bit) {
                r = multiply(p, &r)?;
            }
        }
        match gf2::lowest_bit(&r) {
            Some(bit) => {
                for (_, p) in pivots.iter_mut() {
                    if gf2::bit_of(p, bit) {
                        *p = multiply(&r, p)?;
                    }
                }
                pivots.push((bit, r));
            }
            None => {
                if r.phase() != 0 {
                    return Err(Error::MinusIdentity);
                }
            }
        }
    }
    Ok(pivots.into_iter().map(|(_, p)| p).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn x_times_z_is_minus_i_y() {
        // XZ = -iY, so X*Z carries sign -i in front of Y.
        let xz = multiply(&p("X"), &p("Z")).unwrap();
        assert_eq!(xz, p("-iY"));
        assert_eq!(multiply(&xz, &p("+iI")).unwrap(), p("Y"));
        assert_eq!(multiply(&p("Z"), &p("X")).unwrap(), p("+iY"));
    }

    #[test]
    fn single_overlap_product() {
        let r = multiply(&p("XXI"), &p("IZZ")).unwrap();
        assert_eq!(r.unsigned(), p("XYZ"));
        assert_eq!(r, p("-iXYZ"));
    }

    #[test]
    fn hermitian_squares_to_identity() {
        for s in ["XXXXXX", "ZIZIZY", "-YYI", "IIII"] {
            let a = p(s);
            let sq = multiply(&a, &a).unwrap();
            assert!(sq.is_identity());
            assert_eq!(sq.phase(), 0, "{s}");
        }
    }

    #[test]
    fn text_round_trip() {
        for s in ["+XIZZY", "-YY", "+iZ", "-iXYZ", "+"] {
            assert_eq!(p(s).to_string(), s);
        }
        assert!("XQ".parse::<PauliString>().is_err());
    }

    #[test]
    fn size_mismatch_rejected() {
        assert!(multiply(&p("X"), &p("XX")).is_err());
        assert!(commutes(&p("X"), &p("XX")).is_err());
    }

    #[test]
    fn disjoint_supports_commute() {
        assert!(commutes(&p("XI"), &p("IZ")).unwrap());
        assert!(!commutes(&p("XI"), &p("ZI")).unwrap());
        assert!(commutes(&p("XX"), &p("ZZ")).unwrap());
    }

    #[test]
    fn normalization_merges_and_drops() {
        let mut h = OperatorSum::new(2);
        h.push(1.0, p("XX")).unwrap();
        h.push(0.5, p("-XX")).unwrap();
        h.push(1e-14, p("ZI")).unwrap();
        h.push(2.0, p("ZZ")).unwrap();
        let n = h.normalized();
        assert_eq!(n.len(), 2);
        assert_eq!(n.terms()[0].op, p("ZZ"));
        assert_eq!(n.terms()[1].coeff, 0.5);
        assert!(h.push(1.0, p("+iX")).is_err());
        assert!(h.push(f64::NAN, p("XI")).is_err());
    }

    #[test]
    fn rank_examples() {
        assert_eq!(gf2_rank(&[]), 0);
        assert_eq!(gf2_rank(&[p("XI"), p("XI")]), 1);
        assert_eq!(gf2_rank(&[p("XI"), p("IX"), p("XX"), p("ZZ")]), 3);
    }

    #[test]
    fn degeneracy_examples() {
        let zs: Vec<_> = (0..18).map(|q| PauliString::z_on(18, [q])).collect();
        assert_eq!(stabilizer_degeneracy(&zs, 18).unwrap(), 1);
        assert_eq!(stabilizer_degeneracy(&[p("ZZI"), p("IZZ")], 3).unwrap(), 2);
        assert!(matches!(
            stabilizer_degeneracy(&[p("XI"), p("ZI")], 2),
            Err(Error::NonCommuting(0, 1))
        ));
        // ZZ * XX = -YY, so the Bell state fixes -YY and nothing fixes +YY.
        assert!(matches!(
            stabilizer_degeneracy(&[p("ZZ"), p("XX"), p("YY")], 2),
            Err(Error::MinusIdentity)
        ));
        assert_eq!(stabilizer_degeneracy(&[p("ZZ"), p("XX"), p("-YY")], 2).unwrap(), 1);
    }

    fn arb_pauli(n: usize) -> impl Strategy<Value = PauliString> {
        (any::<u128>(), any::<u128>(), 0u8..4)
            .prop_map(move |(x, z, ph)| PauliString::from_masks(n, x & mask(n), z & mask(n), ph).unwrap())
    }

    proptest! {
        #[test]
        fn multiplication_is_associative(a in arb_pauli(12), b in arb_pauli(12), c in arb_pauli(12)) {
            prop_assert_eq!((a * b) * c, a * (b * c));
        }

        #[test]
        fn commutation_matches_product_order(a in arb_pauli(20), b in arb_pauli(20)) {
            let ab = a * b;
            let ba = b * a;
            prop_assert_eq!((ab.x_mask(), ab.z_mask()), (ba.x_mask(), ba.z_mask()));
            let same = ab.phase() == ba.phase();
            prop_assert_eq!(commutes(&a, &b).unwrap(), same);
            if !same {
                prop_assert_eq!(ab, ba.negated());
            }
        }

        #[test]
        fn symplectic_form_is_bilinear(a in arb_pauli(16), b in arb_pauli(16), c in arb_pauli(16)) {
            let lhs = symplectic_product(&(a * b), &c);
            let rhs = (symplectic_product(&a, &c) + symplectic_product(&b, &c)) % 2;
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn text_form_round_trips(a in arb_pauli(30)) {
            let back: PauliString = a.to_string().parse().unwrap();
            prop_assert_eq!(back, a);
        }

        #[test]
        fn degeneracy_times_rank_is_dimension(zs in proptest::collection::vec(any::<u16>(), 0..10)) {
            let gens: Vec<_> = zs.iter().map(|&m| PauliString::from_masks(16, 0, m as u128, 0).unwrap()).collect();
            let deg = stabilizer_degeneracy(&gens, 16).unwrap();
            prop_assert_eq!(deg << gf2_rank(&gens), 1u128 << 16);
        }
    }
}
