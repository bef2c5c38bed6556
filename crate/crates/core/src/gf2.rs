//! Dense linear algebra over GF(2).

use crate::pauli::PauliString;

/// Row-major bit matrix with `cols` columns packed into 64-bit words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    cols: usize,
    words: usize,
    rows: Vec<Vec<u64>>,
}

impl BitMatrix {
    pub fn new(cols: usize) -> Self {
        BitMatrix { cols, words: cols.div_ceil(64).max(1), rows: Vec::new() }
    }

    /// Rows `(x | z)`, with x bits in columns `0..n` and z bits in `n..2n`.
    pub fn from_paulis(paulis: &[PauliString]) -> Self {
        let n = paulis.first().map_or(0, |p| p.n_qubits());
        let mut m = BitMatrix::new(2 * n);
        for p in paulis {
            assert_eq!(p.n_qubits(), n, "mixed qubit counts");
            let mut row = vec![0u64; m.words];
            for q in 0..n {
                if (p.x_mask() >> q) & 1 == 1 {
                    set(&mut row, q);
                }
                if (p.z_mask() >> q) & 1 == 1 {
                    set(&mut row, n + q);
                }
            }
            m.rows.push(row);
        }
        m
    }

    /// Rows given as bit masks over at most 128 columns.
    pub fn from_masks(cols: usize, masks: impl IntoIterator<Item = u128>) -> Self {
        assert!(cols <= 128);
        let mut m = BitMatrix::new(cols);
        for mask in masks {
            let mut row = vec![0u64; m.words];
            row[0] = mask as u64;
            if m.words > 1 {
                row[1] = (mask >> 64) as u64;
            }
            m.rows.push(row);
        }
        m
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        get(&self.rows[r], c)
    }

    pub fn push_row(&mut self, bits: impl IntoIterator<Item = usize>) {
        let mut row = vec![0u64; self.words];
        for c in bits {
            assert!(c < self.cols);
            row[c / 64] ^= 1 << (c % 64);
        }
        self.rows.push(row);
    }

    /// Reduced row echelon form; returns the pivot columns.
    pub fn reduce(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            let Some(found) = (r..self.rows.len()).find(|&i| get(&self.rows[i], c)) else {
                continue;
            };
            self.rows.swap(r, found);
            let pivot = self.rows[r].clone();
            for (i, row) in self.rows.iter_mut().enumerate() {
                if i != r && get(row, c) {
                    xor_into(row, &pivot);
                }
            }
            pivots.push(c);
            r += 1;
            if r == self.rows.len() {
                break;
            }
        }
        self.rows.truncate(r);
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().reduce().len()
    }

    /// Whether `row` (given as set column indices) lies in the row span.
    pub fn spans(&self, row: &[usize]) -> bool {
        let mut m = self.clone();
        let base = m.rank();
        m.push_row(row.iter().copied());
        m.rank() == base
    }

    /// Whether the row spans of `self` and `other` coincide.
    pub fn same_span(&self, other: &BitMatrix) -> bool {
        if self.cols != other.cols {
            return false;
        }
        let ra = self.rank();
        let rb = other.rank();
        if ra != rb {
            return false;
        }
        let mut both = self.clone();
        both.rows.extend(other.rows.iter().cloned());
        both.rank() == ra
    }

    /// Basis of the null space `{v : M v = 0}`, each vector as set column indices.
    pub fn kernel(&self) -> Vec<Vec<usize>> {
        let mut m = self.clone();
        let pivots = m.reduce();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![f];
                for (r, &pc) in pivots.iter().enumerate() {
                    if get(&m.rows[r], f) {
                        v.push(pc);
                    }
                }
                v.sort_unstable();
                v
            })
            .collect()
    }

    /// Rows as `u128` masks; only valid for at most 128 columns.
    pub fn row_masks(&self) -> Vec<u128> {
        assert!(self.cols <= 128);
        self.rows
            .iter()
            .map(|r| r[0] as u128 | r.get(1).map_or(0, |&w| (w as u128) << 64))
            .collect()
    }
}

fn get(row: &[u64], c: usize) -> bool {
    (row[c / 64] >> (c % 64)) & 1 == 1
}

fn set(row: &mut [u64], c: usize) {
    row[c / 64] |= 1 << (c % 64);
}

fn xor_into(row: &mut [u64], other: &[u64]) {
    for (a, b) in row.iter_mut().zip(other) {
        *a ^= b;
    }
}

/// Bit `b` of the symplectic vector: `b < 128` reads the x mask, otherwise z.
pub(crate) fn bit_of(p: &PauliString, b: usize) -> bool {
    if b < 128 {
        (p.x_mask() >> b) & 1 == 1
    } else {
        (p.z_mask() >> (b - 128)) & 1 == 1
    }
}

pub(crate) fn lowest_bit(p: &PauliString) -> Option<usize> {
    if p.x_mask() != 0 {
        Some(p.x_mask().trailing_zeros() as usize)
    } else if p.z_mask() != 0 {
        Some(128 + p.z_mask().trailing_zeros() as usize)
    } else {
        None
    }
}

/// GF(2) span equality of two Pauli sets, ignoring signs.
pub fn same_pauli_span(a: &[PauliString], b: &[PauliString]) -> bool {
    match (a.first(), b.first()) {
        (None, None) => true,
        (None, Some(_)) => b.iter().all(|p| p.is_identity()),
        (Some(_), None) => a.iter().all(|p| p.is_identity()),
        (Some(pa), Some(pb)) => {
            pa.n_qubits() == pb.n_qubits()
                && BitMatrix::from_paulis(a).same_span(&BitMatrix::from_paulis(b))
        }
    }
}

/// One solution of the linear system with rows `(coefficients, rhs)` in at
/// most 64 unknowns, with free unknowns set to zero, together with the rank.
/// `None` if the system is inconsistent.
pub fn solve(rows: &[(u64, bool)], n_vars: usize) -> Option<(Vec<bool>, usize)> {
    assert!(n_vars <= 64);
    let mut pivots: Vec<(usize, u64, bool)> = Vec::new();
    for &(mut a, mut b) in rows {
        for &(bit, pa, pb) in &pivots {
            if (a >> bit) & 1 == 1 {
                a ^= pa;
                b ^= pb;
            }
        }
        if a == 0 {
            if b {
                return None;
            }
            continue;
        }
        let bit = a.trailing_zeros() as usize;
        for (_, pa, pb) in pivots.iter_mut() {
            if (*pa >> bit) & 1 == 1 {
                *pa ^= a;
                *pb ^= b;
            }
        }
        pivots.push((bit, a, b));
    }
    let mut x = vec![false; n_vars];
    for &(bit, _, b) in &pivots {
        x[bit] = b;
    }
    Some((x, pivots.len()))
}

/// Parity of `popcount(a & b)`.
pub fn dot(a: u128, b: u128) -> bool {
    (a & b).count_ones() % 2 == 1
}
