//! Restarted block Krylov solver with full reorthogonalization.
//!
//! Each cycle grows an orthonormal basis from the current block by repeated
//! application of `H`, solves the projected eigenproblem and restarts from the
//! lowest Ritz vectors. Blocks wider than the wanted count let degenerate
//! clusters converge together.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use super::apply::CompiledOperator;
use super::sector::Sector;
use super::{clusters, Method, SpectrumResult, CLUSTER_TOLERANCE};
use crate::error::{Error, Result};
use crate::pauli::OperatorSum;

const CHUNK: usize = 1 << 13;

#[derive(Clone, Debug)]
pub struct LowLyingOptions {
    pub k: usize,
    /// Bound on `||H v - lambda v||` for every returned pair.
    pub tol: f64,
    pub max_restarts: usize,
    pub seed: u64,
    /// Block width; defaults to `k + 2`.
    pub block: Option<usize>,
    /// Basis size per cycle; defaults to `max(3 * block, 48)`.
    pub krylov_dim: Option<usize>,
    /// Vectors placed at the front of the first block.
    pub start: Vec<Vec<f64>>,
    pub sector: Option<Sector>,
}

impl Default for LowLyingOptions {
    fn default() -> Self {
        LowLyingOptions {
            k: 1,
            tol: 1e-8,
            max_restarts: 300,
            seed: 0x5eed,
            block: None,
            krylov_dim: None,
            start: Vec::new(),
            sector: None,
        }
    }
}

impl LowLyingOptions {
    pub fn new(k: usize) -> Self {
        LowLyingOptions { k, ..Default::default() }
    }
}

/// The `k` lowest eigenpairs of a real Hamiltonian, matrix-free.
pub fn low_lying(h: &OperatorSum, k: usize, tol: f64) -> Result<SpectrumResult> {
    low_lying_with(h, &LowLyingOptions { k, tol, ..Default::default() })
}

pub fn low_lying_with(h: &OperatorSum, opts: &LowLyingOptions) -> Result<SpectrumResult> {
    if opts.k == 0 {
        return Err(Error::Invalid("low_lying needs k >= 1".into()));
    }
    let op = CompiledOperator::real(h)?;
    let n = h.n_qubits();
    let dim = op.dimension();
    for s in &opts.start {
        if s.len() != dim {
            return Err(Error::SizeMismatch { left: dim, right: s.len() });
        }
    }
    let project = |v: &mut [f64]| {
        if let Some(s) = &opts.sector {
            s.project(v);
        }
    };
    let space = opts.sector.as_ref().map_or(dim, |s| s.dimension(n));
    if space == 0 {
        return Err(Error::InvalidSector("sector is empty".into()));
    }
    let k = opts.k.min(space);
    let b = opts.block.unwrap_or(k + 2).clamp(k, space);
    let m = opts.krylov_dim.unwrap_or((3 * b).max(48)).clamp(b, space);

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(opts.seed);
    let random_vec = |rng: &mut rand_chacha::ChaCha8Rng| -> Vec<f64> {
        let mut v: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
        project(&mut v);
        v
    };
    let mut block: Vec<Vec<f64>> = opts
        .start
        .iter()
        .take(b)
        .map(|s| {
            let mut v = s.clone();
            project(&mut v);
            v
        })
        .collect();
    while block.len() < b {
        block.push(random_vec(&mut rng));
    }

    let mut last_residuals = Vec::new();
    for cycle in 1..=opts.max_restarts {
        let mut basis = Basis::default();
        let mut frontier = basis.extend(block, m, &op, &project);
        while basis.len() < b.min(m) && cycle == 1 {
            // Start vectors collapsed (e.g. duplicates); top up with random ones.
            let extra = (0..b - basis.len()).map(|_| random_vec(&mut rng)).collect();
            let added = basis.extend(extra, m, &op, &project);
            if added.is_empty() {
                break;
            }
            frontier.extend(added);
        }
        if basis.len() == 0 {
            return Err(Error::Invalid("no start vector survived the sector projection".into()));
        }
        while basis.len() < m && !frontier.is_empty() {
            let candidates = frontier
                .iter()
                .map(|&i| {
                    let mut w = basis.images[i].clone();
                    project(&mut w);
                    w
                })
                .collect();
            frontier = basis.extend(candidates, m, &op, &project);
        }

        let len = basis.len();
        let t = DMatrix::from_fn(len, len, |i, j| basis.t[i.max(j)][i.min(j)]);
        let eig = SymmetricEigen::new(t);
        let mut order: Vec<usize> = (0..len).collect();
        order.sort_by(|&a, &c| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[c]));
        let nr = b.min(len);
        let thetas: Vec<f64> = order[..nr].iter().map(|&i| eig.eigenvalues[i]).collect();
        let coeffs: Vec<Vec<f64>> = order[..nr]
            .iter()
            .map(|&i| eig.eigenvectors.column(i).iter().copied().collect())
            .collect();
        let ritz = combine(&basis.vectors, &coeffs);
        let ritz_images = combine(&basis.images, &coeffs);
        let k_eff = k.min(nr);
        let residuals: Vec<f64> = ritz[..k_eff]
            .iter()
            .zip(&ritz_images)
            .zip(&thetas)
            .map(|((x, ax), &theta)| residual_norm(x, ax, theta))
            .collect();

        if residuals[..k_eff].iter().all(|&r| r <= opts.tol) {
            let eigenvalues = thetas[..k_eff].to_vec();
            let clusters = clusters(&eigenvalues, CLUSTER_TOLERANCE);
            let ground = clusters[0].multiplicity;
            return Ok(SpectrumResult {
                n_qubits: n,
                dimension: space,
                eigenvalues,
                clusters,
                ground_vectors: ritz.into_iter().take(ground).collect(),
                method: Method::BlockKrylov,
                iterations: cycle,
                residuals,
            });
        }
        last_residuals = residuals;
        block = ritz;
    }
    Err(Error::NoConvergence {
        iterations: opts.max_restarts,
        worst_residual: last_residuals.iter().copied().fold(0.0, f64::max),
        residuals: last_residuals,
    })
}

/// Orthonormal basis, its images under `H` and the projected matrix
/// `t[j][i] = <v_i | H v_j>` for `i <= j`.
#[derive(Default)]
struct Basis {
    vectors: Vec<Vec<f64>>,
    images: Vec<Vec<f64>>,
    t: Vec<Vec<f64>>,
}

impl Basis {
    fn len(&self) -> usize {
        self.vectors.len()
    }

    /// Orthonormalizes and appends candidates until `limit` vectors are held;
    /// returns the indices of the vectors added.
    fn extend(
        &mut self,
        candidates: Vec<Vec<f64>>,
        limit: usize,
        op: &CompiledOperator<f64>,
        project: &impl Fn(&mut [f64]),
    ) -> Vec<usize> {
        let mut added = Vec::new();
        for mut w in candidates {
            if self.len() >= limit {
                break;
            }
            let before = norm(&w);
            if before == 0.0 {
                continue;
            }
            for _ in 0..2 {
                let c = dots(&self.vectors, &w);
                subtract(&self.vectors, &c, &mut w);
            }
            let after = norm(&w);
            if after <= 1e-10 * before {
                continue;
            }
            w.par_iter_mut().for_each(|a| *a /= after);
            let mut aw = vec![0.0; w.len()];
            op.apply_into(&w, &mut aw);
            project(&mut aw);
            self.vectors.push(w);
            let column = dots(&self.vectors, &aw);
            self.images.push(aw);
            self.t.push(column);
            added.push(self.len() - 1);
        }
        added
    }
}

/// Chunked dot products of `w` with every vector; partial sums are combined
/// in chunk order so results do not depend on thread scheduling.
fn dots(vectors: &[Vec<f64>], w: &[f64]) -> Vec<f64> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let partials: Vec<Vec<f64>> = w
        .par_chunks(CHUNK)
        .enumerate()
        .map(|(ci, wc)| {
            let base = ci * CHUNK;
            vectors
                .iter()
                .map(|v| v[base..base + wc.len()].iter().zip(wc).map(|(a, b)| a * b).sum())
                .collect()
        })
        .collect();
    let mut out = vec![0.0; vectors.len()];
    for p in partials {
        out.iter_mut().zip(p).for_each(|(o, x)| *o += x);
    }
    out
}

fn subtract(vectors: &[Vec<f64>], coeffs: &[f64], w: &mut [f64]) {
    w.par_chunks_mut(CHUNK).enumerate().for_each(|(ci, wc)| {
        let base = ci * CHUNK;
        for (v, &c) in vectors.iter().zip(coeffs) {
            for (a, b) in wc.iter_mut().zip(&v[base..]) {
                *a -= c * b;
            }
        }
    });
}

fn norm(v: &[f64]) -> f64 {
    let partials: Vec<f64> =
        v.par_chunks(CHUNK).map(|c| c.iter().map(|a| a * a).sum()).collect();
    partials.iter().sum::<f64>().sqrt()
}

/// `out[i] = sum_j coeffs[i][j] * vectors[j]`.
fn combine(vectors: &[Vec<f64>], coeffs: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let dim = vectors.first().map_or(0, Vec::len);
    let mut out = vec![vec![0.0; dim]; coeffs.len()];
    for (o, c) in out.iter_mut().zip(coeffs) {
        o.par_chunks_mut(CHUNK).enumerate().for_each(|(ci, oc)| {
            let base = ci * CHUNK;
            for (v, &y) in vectors.iter().zip(c) {
                for (a, b) in oc.iter_mut().zip(&v[base..]) {
                    *a += y * b;
                }
            }
        });
    }
    out
}

fn residual_norm(x: &[f64], ax: &[f64], theta: f64) -> f64 {
    let partials: Vec<f64> = x
        .par_chunks(CHUNK)
        .zip(ax.par_chunks(CHUNK))
        .map(|(xc, ac)| xc.iter().zip(ac).map(|(a, b)| (b - theta * a).powi(2)).sum())
        .collect();
    partials.iter().sum::<f64>().sqrt()
}
