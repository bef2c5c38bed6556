use criterion::{black_box, criterion_group, criterion_main, Criterion};

use colorcode::gf2::BitMatrix;
use colorcode::lattice::{build_hex_torus, dual_triangular, Color, ColorLattice, TorusSpec};
use colorcode::models::{perturbed_h, tfim_h, Couplings};
use colorcode::observables::decoupled_point;
use colorcode::spectra::{apply_real, low_lying, CompiledOperator};

fn torus(l1: usize, l2: usize) -> ColorLattice {
    build_hex_torus(TorusSpec::new(l1, l2).unwrap()).unwrap()
}

fn apply_kernel(c: &mut Criterion) {
    let lat = torus(3, 3);
    let h = perturbed_h(&lat, Couplings::new(0.3, 0.5, 0.7).unwrap()).unwrap().hamiltonian;
    let dim = 1usize << lat.n_qubits();
    let v: Vec<f64> = (0..dim).map(|i| ((i * 2654435761) % 1000) as f64 / 1000.0).collect();
    let op = CompiledOperator::real(&h).unwrap();
    let mut out = vec![0.0; dim];
    c.bench_function("apply 3x3 compiled", |b| b.iter(|| op.apply_into(black_box(&v), &mut out)));
    c.bench_function("apply 3x3 uncompiled", |b| b.iter(|| apply_real(&h, black_box(&v)).unwrap()));
}

fn low_lying_kernel(c: &mut Criterion) {
    let tri = dual_triangular(&torus(6, 6), Color::Red);
    let h = tfim_h(&tri, 0.3).unwrap();
    let mut g = c.benchmark_group("low_lying");
    g.sample_size(10);
    g.bench_function("12-site TFIM k=4", |b| b.iter(|| low_lying(&h, 4, 1e-9).unwrap()));
    g.finish();
}

fn gf2_rank(c: &mut Criterion) {
    let lat = torus(6, 6);
    let rows = lat.plaquettes().iter().map(|p| p.qubits.iter().fold(0u128, |m, &q| m | 1 << q));
    let m = BitMatrix::from_masks(lat.n_qubits(), rows);
    c.bench_function("gf2 rank 6x6 incidence", |b| b.iter(|| black_box(&m).rank()));
}

fn sweep_point(c: &mut Criterion) {
    let mut g = c.benchmark_group("sweep point");
    g.sample_size(10);
    for (l1, l2) in [(3, 3), (3, 6), (6, 6)] {
        let lat = torus(l1, l2);
        let duals = Color::ALL.map(|col| dual_triangular(&lat, col));
        let j = Couplings::new(0.2, 0.4, 0.6).unwrap();
        g.bench_function(format!("{l1}x{l2}"), |b| {
            b.iter(|| decoupled_point(&duals, lat.plaquettes().len(), j, 0.5).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, apply_kernel, low_lying_kernel, gf2_rank, sweep_point);
criterion_main!(benches);
