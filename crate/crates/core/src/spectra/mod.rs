//! Exact diagonalization: matrix-free application of Pauli sums, dense
//! spectra for small systems, a restarted block Krylov solver for low-lying
//! states of larger ones, symmetry sectors and expectation values.

mod apply;
mod dense;
mod krylov;
mod sector;

pub use apply::{apply, apply_real, CompiledOperator};
pub use dense::{
    dense_matrix, dense_real_matrix, dense_x_symmetric_matrix, dense_z_sector_matrix,
    full_spectrum, full_spectrum_with_limit, symmetric_spectrum,
};
pub use krylov::{low_lying, low_lying_with, LowLyingOptions};
pub use sector::{Sector, XOrbits, ZSector};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::pauli::{OperatorSum, PauliString};

/// Largest `log2(dimension)` handled by dense diagonalization by default.
pub const DENSE_LIMIT_LOG2: u32 = 14;
/// Largest `log2(dimension)` handled by the matrix-free solver.
pub const ITERATIVE_LIMIT_LOG2: u32 = 20;
/// Eigenvalues closer than this are reported as one degenerate cluster.
pub const CLUSTER_TOLERANCE: f64 = 1e-8;

pub(crate) fn check_dimension(n: usize, limit_log2: u32, method: &'static str) -> Result<usize> {
    if n > limit_log2 as usize {
        return Err(Error::DimensionOverflow { n, limit_log2, method });
    }
    Ok(1usize << n)
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn new(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        let dim = check_dimension(n, ITERATIVE_LIMIT_LOG2, "state vector")?;
        if amps.len() != dim {
            return Err(Error::Invalid(format!(
                "state of {n} qubits needs {dim} amplitudes, got {}",
                amps.len()
            )));
        }
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::Invalid("non-finite amplitude".into()));
        }
        Ok(StateVector { n, amps })
    }

    pub fn from_real(n: usize, amps: &[f64]) -> Result<Self> {
        StateVector::new(n, amps.iter().map(|&a| Complex64::new(a, 0.0)).collect())
    }

    /// Computational basis state `|index>`; bit `q` of `index` is qubit `q`.
    pub fn basis(n: usize, index: usize) -> Result<Self> {
        let dim = check_dimension(n, ITERATIVE_LIMIT_LOG2, "state vector")?;
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n, amps })
    }

    /// `|+ + ... +>`.
    pub fn plus(n: usize) -> Result<Self> {
        let dim = check_dimension(n, ITERATIVE_LIMIT_LOG2, "state vector")?;
        let a = 1.0 / (dim as f64).sqrt();
        Ok(StateVector { n, amps: vec![Complex64::new(a, 0.0); dim] })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn dimension(&self) -> usize {
        self.amps.len()
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalized(mut self) -> Result<Self> {
        let norm = self.norm();
        if norm == 0.0 {
            return Err(Error::Invalid("cannot normalize the zero vector".into()));
        }
        self.amps.iter_mut().for_each(|a| *a /= norm);
        Ok(self)
    }

    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    /// Real parts, if every imaginary part vanishes.
    pub fn as_real(&self) -> Option<Vec<f64>> {
        self.amps.iter().map(|a| (a.im == 0.0).then_some(a.re)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Cluster {
    pub value: f64,
    pub multiplicity: usize,
}

/// Groups ascending values whose consecutive gaps are at most `tol`.
pub fn clusters(sorted: &[f64], tol: f64) -> Vec<Cluster> {
    let mut out: Vec<(f64, usize, f64)> = Vec::new();
    for &e in sorted {
        match out.last_mut() {
            Some((sum, count, last)) if e - *last <= tol => {
                *sum += e;
                *count += 1;
                *last = e;
            }
            _ => out.push((e, 1, e)),
        }
    }
    out.into_iter()
        .map(|(sum, count, _)| Cluster { value: sum / count as f64, multiplicity: count })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Dense,
    BlockKrylov,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumResult {
    pub n_qubits: usize,
    /// Dimension of the space actually diagonalized (a sector may be smaller than `2^n`).
    pub dimension: usize,
    pub eigenvalues: Vec<f64>,
    pub clusters: Vec<Cluster>,
    /// Orthonormal eigenvectors spanning the lowest cluster, in the full `2^n` space.
    #[serde(skip)]
    pub ground_vectors: Vec<Vec<f64>>,
    pub method: Method,
    pub iterations: usize,
    pub residuals: Vec<f64>,
}

impl SpectrumResult {
    pub fn ground_energy(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn ground_degeneracy(&self) -> usize {
        self.clusters.first().map_or(0, |c| c.multiplicity)
    }

    /// Rows `index,eigenvalue,multiplicity` with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,eigenvalue,multiplicity\n");
        let mut i = 0;
        for c in &self.clusters {
            for _ in 0..c.multiplicity {
                out.push_str(&format!("{i},{:.15e},{}\n", self.eigenvalues[i], c.multiplicity));
                i += 1;
            }
        }
        out
    }
}

/// `<v|O|v> / <v|v>`. The imaginary part must vanish to within 1e-10.
pub fn expectation(v: &StateVector, o: &OperatorSum) -> Result<f64> {
    if v.n_qubits() != o.n_qubits() {
        return Err(Error::SizeMismatch { left: v.n_qubits(), right: o.n_qubits() });
    }
    let norm_sq = v.norm().powi(2);
    if norm_sq == 0.0 {
        return Err(Error::Invalid("expectation in the zero vector".into()));
    }
    if (norm_sq - 1.0).abs() > 1e-10 {
        log::warn!("expectation: state has norm^2 {norm_sq}, normalizing");
    }
    let ov = apply(o, v)?;
    let value = v.inner(&ov) / norm_sq;
    if value.im.abs() > 1e-10 {
        return Err(Error::NonHermitian(value.im));
    }
    Ok(value.re)
}

/// `<v|P|v> / <v|v>` for a real vector and a single real Pauli string.
pub fn pauli_expectation(v: &[f64], p: &PauliString) -> Result<f64> {
    let n = p.n_qubits();
    let dim = check_dimension(n, ITERATIVE_LIMIT_LOG2, "expectation")?;
    if v.len() != dim {
        return Err(Error::SizeMismatch { left: dim, right: v.len() });
    }
    if !p.is_real() {
        return Err(Error::NotReal);
    }
    let mut h = OperatorSum::new(n);
    h.push(1.0, *p)?;
    let pv = apply_real(&h, v)?;
    let norm_sq: f64 = v.iter().map(|a| a * a).sum();
    Ok(v.iter().zip(&pv).map(|(a, b)| a * b).sum::<f64>() / norm_sq)
}

/// A normalized state in the joint `+1` eigenspace of commuting real
/// generators: `prod_g (1 + g) / 2` applied to a seeded random vector.
pub fn stabilizer_ground_state(gens: &[PauliString], n: usize, seed: u64) -> Result<Vec<f64>> {
    use rand::{Rng, SeedableRng};
    let dim = check_dimension(n, ITERATIVE_LIMIT_LOG2, "stabilizer state")?;
    crate::pauli::stabilizer_degeneracy(gens, n)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
    for g in gens {
        let mut h = OperatorSum::new(n);
        h.push(1.0, *g)?;
        let gv = apply_real(&h, &v)?;
        v.iter_mut().zip(&gv).for_each(|(a, b)| *a = 0.5 * (*a + b));
    }
    let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    if norm < 1e-12 {
        return Err(Error::Invalid("random start vector has no weight in the code space".into()));
    }
    v.iter_mut().for_each(|a| *a /= norm);
    Ok(v)
}
