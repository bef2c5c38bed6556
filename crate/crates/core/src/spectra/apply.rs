use num_complex::Complex64;
use rayon::prelude::*;

use super::{check_dimension, StateVector, ITERATIVE_LIMIT_LOG2};
use crate::error::{Error, Result};
use crate::pauli::OperatorSum;

const CHUNK: usize = 1 << 12;

/// Terms grouped by `X` mask. A term `c * i^k X^x Z^z` sends `|s>` to
/// `c * i^k * (-1)^{|z & s|} |s ^ x>`, so row `r` collects `s = r ^ x`.
#[derive(Clone, Debug)]
pub struct CompiledOperator<T> {
    n: usize,
    groups: Vec<(usize, Vec<(usize, T)>)>,
}

fn i_pow(k: u8) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

fn group<T: Copy>(h: &OperatorSum, coeff: impl Fn(f64, u8) -> T) -> Vec<(usize, Vec<(usize, T)>)> {
    let mut groups: Vec<(usize, Vec<(usize, T)>)> = Vec::new();
    for t in h.terms() {
        let x = t.op.x_mask() as usize;
        let entry = (t.op.z_mask() as usize, coeff(t.coeff, t.op.phase()));
        match groups.iter_mut().find(|(gx, _)| *gx == x) {
            Some((_, terms)) => terms.push(entry),
            None => groups.push((x, vec![entry])),
        }
    }
    groups
}

impl CompiledOperator<f64> {
    /// Real fast path; fails unless every term has a real matrix.
    pub fn real(h: &OperatorSum) -> Result<Self> {
        check_dimension(h.n_qubits(), ITERATIVE_LIMIT_LOG2, "matrix-free apply")?;
        if !h.is_real() {
            return Err(Error::NotReal);
        }
        let groups = group(h, |c, k| if k % 4 == 2 { -c } else { c });
        Ok(CompiledOperator { n: h.n_qubits(), groups })
    }

    pub fn apply_into(&self, v: &[f64], out: &mut [f64]) {
        let dim = 1usize << self.n;
        assert!(v.len() == dim && out.len() == dim);
        out.par_chunks_mut(CHUNK).enumerate().for_each(|(ci, chunk)| {
            let base = ci * CHUNK;
            for (off, o) in chunk.iter_mut().enumerate() {
                let r = base + off;
                let mut acc = 0.0;
                for (x, terms) in &self.groups {
                    let s = r ^ x;
                    let vs = v[s];
                    if vs == 0.0 {
                        continue;
                    }
                    let mut d = 0.0;
                    for &(z, c) in terms {
                        if (z & s).count_ones() & 1 == 1 {
                            d -= c;
                        } else {
                            d += c;
                        }
                    }
                    acc += d * vs;
                }
                *o = acc;
            }
        });
    }
}

impl CompiledOperator<Complex64> {
    pub fn complex(h: &OperatorSum) -> Result<Self> {
        check_dimension(h.n_qubits(), ITERATIVE_LIMIT_LOG2, "matrix-free apply")?;
        let groups = group(h, |c, k| i_pow(k) * c);
        Ok(CompiledOperator { n: h.n_qubits(), groups })
    }

    pub fn apply_into(&self, v: &[Complex64], out: &mut [Complex64]) {
        let dim = 1usize << self.n;
        assert!(v.len() == dim && out.len() == dim);
        out.par_chunks_mut(CHUNK).enumerate().for_each(|(ci, chunk)| {
            let base = ci * CHUNK;
            for (off, o) in chunk.iter_mut().enumerate() {
                let r = base + off;
                let mut acc = Complex64::new(0.0, 0.0);
                for (x, terms) in &self.groups {
                    let s = r ^ x;
                    let mut d = Complex64::new(0.0, 0.0);
                    for &(z, c) in terms {
                        if (z & s).count_ones() & 1 == 1 {
                            d -= c;
                        } else {
                            d += c;
                        }
                    }
                    acc += d * v[s];
                }
                *o = acc;
            }
        });
    }
}

impl<T> CompiledOperator<T> {
    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn dimension(&self) -> usize {
        1 << self.n
    }
}

/// `h |v>` without forming a matrix.
pub fn apply(h: &OperatorSum, v: &StateVector) -> Result<StateVector> {
    if h.n_qubits() != v.n_qubits() {
        return Err(Error::SizeMismatch { left: h.n_qubits(), right: v.n_qubits() });
    }
    let op = CompiledOperator::complex(h)?;
    let mut out = vec![Complex64::new(0.0, 0.0); v.dimension()];
    op.apply_into(v.amplitudes(), &mut out);
    StateVector::new(v.n_qubits(), out)
}

/// Real fast path of [`apply`].
pub fn apply_real(h: &OperatorSum, v: &[f64]) -> Result<Vec<f64>> {
    let op = CompiledOperator::real(h)?;
    if v.len() != op.dimension() {
        return Err(Error::SizeMismatch { left: op.dimension(), right: v.len() });
    }
    let mut out = vec![0.0; v.len()];
    op.apply_into(v, &mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::dense_matrix;
    use rand::{Rng, SeedableRng};

    #[test]
    fn identity_and_single_flip() {
        let mut h = OperatorSum::new(3);
        h.add_identity(1.0);
        let v = StateVector::basis(3, 5).unwrap();
        assert_eq!(apply(&h, &v).unwrap(), v);

        let h = OperatorSum::from_terms(3, [(1.0, "+XII".parse().unwrap())]).unwrap();
        let out = apply(&h, &StateVector::basis(3, 0).unwrap()).unwrap();
        assert_eq!(out, StateVector::basis(3, 1).unwrap());
    }

    #[test]
    fn y_acts_with_imaginary_phase() {
        // Y|0> = i|1>.
        let h = OperatorSum::from_terms(1, [(1.0, "+Y".parse().unwrap())]).unwrap();
        let out = apply(&h, &StateVector::basis(1, 0).unwrap()).unwrap();
        assert_eq!(out.amplitudes()[1], Complex64::new(0.0, 1.0));
        assert!(CompiledOperator::real(&h).is_err());
    }

    #[test]
    fn real_and_complex_paths_agree_with_dense() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let n = 6;
        let mut h = OperatorSum::new(n);
        for _ in 0..15 {
            let x: u128 = rng.random_range(0..64);
            let z: u128 = rng.random_range(0..64);
            let p = crate::pauli::PauliString::from_masks(n, x, z, 0).unwrap();
            let p = if p.is_hermitian() { p } else { p.unsigned() };
            h.push(rng.random_range(-1.0..1.0), p).unwrap();
        }
        let v: Vec<f64> = (0..64).map(|_| rng.random_range(-1.0..1.0)).collect();
        let m = dense_matrix(&h).unwrap();
        let sv = StateVector::from_real(n, &v).unwrap();
        let out = apply(&h, &sv).unwrap();
        for r in 0..64 {
            let expect: Complex64 = (0..64).map(|c| m[(r, c)] * v[c]).sum();
            assert!((expect - out.amplitudes()[r]).norm() < 1e-12);
        }
    }
}
