use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::sector::{XOrbits, ZSector};
use super::{check_dimension, clusters, Method, SpectrumResult, CLUSTER_TOLERANCE, DENSE_LIMIT_LOG2};
use crate::error::{Error, Result};
use crate::pauli::OperatorSum;

/// Full `2^n x 2^n` matrix of `h` in the computational basis.
pub fn dense_matrix(h: &OperatorSum) -> Result<DMatrix<Complex64>> {
    let dim = check_dimension(h.n_qubits(), DENSE_LIMIT_LOG2, "dense matrix")?;
    let mut m = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
    for t in h.terms() {
        let x = t.op.x_mask() as usize;
        let z = t.op.z_mask() as usize;
        let c = t.coeff
            * match t.op.phase() {
                0 => Complex64::new(1.0, 0.0),
                1 => Complex64::new(0.0, 1.0),
                2 => Complex64::new(-1.0, 0.0),
                _ => Complex64::new(0.0, -1.0),
            };
        for col in 0..dim {
            let sign = if (z & col).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
            m[(col ^ x, col)] += c * sign;
        }
    }
    Ok(m)
}

pub fn dense_real_matrix(h: &OperatorSum) -> Result<DMatrix<f64>> {
    if !h.is_real() {
        return Err(Error::NotReal);
    }
    let dim = check_dimension(h.n_qubits(), DENSE_LIMIT_LOG2, "dense matrix")?;
    let mut m = DMatrix::zeros(dim, dim);
    for t in h.terms() {
        let x = t.op.x_mask() as usize;
        let z = t.op.z_mask() as usize;
        let c = if t.op.phase() == 2 { -t.coeff } else { t.coeff };
        for col in 0..dim {
            let sign = if (z & col).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
            m[(col ^ x, col)] += c * sign;
        }
    }
    Ok(m)
}

/// `h` restricted to the computational basis states allowed by `sector`,
/// in ascending index order. `h` must preserve the sector.
pub fn dense_z_sector_matrix(h: &OperatorSum, sector: &ZSector) -> Result<DMatrix<f64>> {
    if !h.is_real() {
        return Err(Error::NotReal);
    }
    let dim = check_dimension(h.n_qubits(), super::ITERATIVE_LIMIT_LOG2, "sector matrix")?;
    let states: Vec<usize> = (0..dim).filter(|&s| sector.allows(s)).collect();
    check_dimension(
        states.len().next_power_of_two().trailing_zeros() as usize,
        DENSE_LIMIT_LOG2,
        "dense sector matrix",
    )?;
    let mut index = vec![usize::MAX; dim];
    for (i, &s) in states.iter().enumerate() {
        index[s] = i;
    }
    let mut m = DMatrix::zeros(states.len(), states.len());
    for t in h.terms() {
        let x = t.op.x_mask() as usize;
        let z = t.op.z_mask() as usize;
        let c = if t.op.phase() == 2 { -t.coeff } else { t.coeff };
        for (col, &s) in states.iter().enumerate() {
            let row = index[s ^ x];
            if row == usize::MAX {
                return Err(Error::InvalidSector(format!("{} leaves the sector", t.op)));
            }
            let sign = if (z & s).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
            m[(row, col)] += c * sign;
        }
    }
    Ok(m)
}

/// `h` in the orthonormal basis of uniform superpositions over the orbits of
/// `orbits`. Requires `h` to commute with every flip in the group; the
/// resulting matrix is checked for symmetry.
///
/// With `|C> = K^{-1/2} sum_{s in C} |s>` and all orbits of size `K`,
/// `<C'|h|C> = sum_{s in C} <r'|h|s>` for any representative `r'` of `C'`.
pub fn dense_x_symmetric_matrix(h: &OperatorSum, orbits: &XOrbits) -> Result<DMatrix<f64>> {
    if !h.is_real() {
        return Err(Error::NotReal);
    }
    if h.n_qubits() != orbits.n_qubits() {
        return Err(Error::SizeMismatch { left: h.n_qubits(), right: orbits.n_qubits() });
    }
    let classes = orbits.n_classes();
    check_dimension(classes.trailing_zeros() as usize, DENSE_LIMIT_LOG2, "dense orbit matrix")?;
    let mut m = DMatrix::zeros(classes, classes);
    for row in 0..classes {
        let rep = orbits.representative(row);
        for t in h.terms() {
            let s = rep ^ t.op.x_mask() as usize;
            let z = t.op.z_mask() as usize;
            let c = if t.op.phase() == 2 { -t.coeff } else { t.coeff };
            let sign = if (z & s).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
            m[(row, orbits.class_of(s))] += c * sign;
        }
    }
    let asym = (&m - m.transpose()).amax();
    if asym > 1e-10 {
        return Err(Error::InvalidSector(format!(
            "operator does not commute with the flip group (asymmetry {asym:e})"
        )));
    }
    Ok(m)
}

/// Spectrum of a real symmetric matrix, eigenvectors of the lowest cluster kept.
pub fn symmetric_spectrum(m: DMatrix<f64>, n_qubits: usize) -> SpectrumResult {
    let dim = m.nrows();
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let clusters = clusters(&eigenvalues, CLUSTER_TOLERANCE);
    let ground = clusters.first().map_or(0, |c| c.multiplicity);
    let ground_vectors = order[..ground]
        .iter()
        .map(|&i| eig.eigenvectors.column(i).iter().copied().collect())
        .collect();
    SpectrumResult {
        n_qubits,
        dimension: dim,
        eigenvalues,
        clusters,
        ground_vectors,
        method: Method::Dense,
        iterations: 1,
        residuals: Vec::new(),
    }
}

/// All eigenvalues by dense diagonalization, up to the default limit `2^14`.
pub fn full_spectrum(h: &OperatorSum) -> Result<SpectrumResult> {
    full_spectrum_with_limit(h, DENSE_LIMIT_LOG2)
}

/// As [`full_spectrum`] with a caller-chosen limit on `log2(dimension)`.
/// Beyond it the error suggests [`super::low_lying`].
pub fn full_spectrum_with_limit(h: &OperatorSum, limit_log2: u32) -> Result<SpectrumResult> {
    let n = h.n_qubits();
    check_dimension(n, limit_log2.min(DENSE_LIMIT_LOG2), "full_spectrum (use low_lying)")?;
    if h.is_real() {
        return Ok(symmetric_spectrum(dense_real_matrix(h)?, n));
    }
    let m = dense_matrix(h)?;
    let dim = m.nrows();
    let eig = SymmetricEigen::new(m);
    let mut eigenvalues: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    eigenvalues.sort_by(f64::total_cmp);
    let clusters = clusters(&eigenvalues, CLUSTER_TOLERANCE);
    Ok(SpectrumResult {
        n_qubits: n,
        dimension: dim,
        eigenvalues,
        clusters,
        ground_vectors: Vec::new(),
        method: Method::Dense,
        iterations: 1,
        residuals: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::PauliString;

    #[test]
    fn free_spins() {
        let h = OperatorSum::from_terms(
            3,
            (0..3).map(|q| (-1.0, PauliString::z_on(3, [q]))),
        )
        .unwrap();
        let s = full_spectrum(&h).unwrap();
        assert_eq!(s.eigenvalues.len(), 8);
        let expect = [-3.0, -1.0, -1.0, -1.0, 1.0, 1.0, 1.0, 3.0];
        for (a, b) in s.eigenvalues.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12);
        }
        let mult: Vec<usize> = s.clusters.iter().map(|c| c.multiplicity).collect();
        assert_eq!(mult, [1, 3, 3, 1]);
    }

    #[test]
    fn trace_equals_identity_weight() {
        let mut h = OperatorSum::from_terms(
            4,
            [(0.7, "+XZIY".parse().unwrap()), (-0.2, "+ZZXX".parse().unwrap())],
        )
        .unwrap();
        h.add_identity(1.5);
        let s = full_spectrum(&h).unwrap();
        let trace: f64 = s.eigenvalues.iter().sum();
        assert!((trace - 16.0 * 1.5).abs() < 1e-10);
    }

    #[test]
    fn dimension_limit() {
        let h = OperatorSum::new(15);
        assert!(matches!(full_spectrum(&h), Err(Error::DimensionOverflow { .. })));
        let h = OperatorSum::new(9);
        assert!(full_spectrum_with_limit(&h, 8).is_err());
    }

    #[test]
    fn z_sector_restriction() {
        // -XX - ZI - IZ preserves the parity ZZ.
        let h = OperatorSum::from_terms(
            2,
            [
                (-1.0, "+XX".parse().unwrap()),
                (-1.0, "+ZI".parse().unwrap()),
                (-1.0, "+IZ".parse().unwrap()),
            ],
        )
        .unwrap();
        let even = dense_z_sector_matrix(&h, &ZSector::new(vec![(0b11, 1)])).unwrap();
        let odd = dense_z_sector_matrix(&h, &ZSector::new(vec![(0b11, -1)])).unwrap();
        let mut all: Vec<f64> = symmetric_spectrum(even, 2)
            .eigenvalues
            .into_iter()
            .chain(symmetric_spectrum(odd, 2).eigenvalues)
            .collect();
        all.sort_by(f64::total_cmp);
        let full = full_spectrum(&h).unwrap().eigenvalues;
        for (a, b) in all.iter().zip(&full) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
