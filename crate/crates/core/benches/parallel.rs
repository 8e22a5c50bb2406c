use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use spinlift::blade::BladeMask;
use spinlift::pauli::{self, GeneratorSet, IndexSet};
use spinlift::spin;
use spinlift::{Complex64, Exec, Multivector, Signature};

const EXECS: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn dense(sig: Signature, salt: u32) -> Multivector {
    let terms = (0..sig.dim() as u32).map(|m| {
        let x = (m.wrapping_mul(2654435761).wrapping_add(salt) % 2000) as f64 / 1000.0 - 1.0;
        (BladeMask(m), Complex64::new(x, 0.0))
    });
    Multivector::from_terms(sig, terms).unwrap()
}

fn products(c: &mut Criterion) {
    let mut group = c.benchmark_group("dense_product");
    group.sample_size(10);
    for (p, q) in [(4, 4), (5, 5)] {
        let sig = Signature::real(p, q).unwrap();
        let (u, v) = (dense(sig, 1), dense(sig, 2));
        for (name, exec) in EXECS {
            group.bench_with_input(BenchmarkId::new(name, sig.n()), &exec, |b, &exec| {
                b.iter(|| u.try_mul_with(&v, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn intertwiner_sums(c: &mut Criterion) {
    let mut group = c.benchmark_group("intertwiner_sum");
    group.sample_size(10);
    for (p, q) in [(3, 3), (4, 4)] {
        let sig = Signature::real(p, q).unwrap();
        let t = spin::random_versor(sig, 5, 3).unwrap();
        let inv = t.inverse().unwrap();
        let betas = GeneratorSet::new(
            sig,
            (1..=sig.n()).map(|a| &(&t * &Multivector::basis(sig, a)) * &inv).collect(),
        )
        .unwrap();
        let gammas = GeneratorSet::standard(sig);
        let f = Multivector::one(sig);
        for (name, exec) in EXECS {
            group.bench_with_input(BenchmarkId::new(name, sig.n()), &exec, |b, &exec| {
                b.iter(|| pauli::intertwiner_sum_with(&betas, &gammas, &f, IndexSet::All, false, exec))
            });
        }
    }
    group.finish();
}

fn batch_lifts(c: &mut Criterion) {
    let mut group = c.benchmark_group("batch_lift");
    group.sample_size(10);
    let sig = Signature::real(2, 3).unwrap();
    let matrices: Vec<_> = (0..32)
        .map(|seed| spin::project(&spin::random_versor(sig, 4, seed).unwrap()).unwrap())
        .collect();
    for (name, exec) in EXECS {
        group.bench_with_input(BenchmarkId::new(name, matrices.len()), &exec, |b, &exec| {
            b.iter(|| spin::lift_all(exec, &matrices))
        });
    }
    group.finish();
}

criterion_group!(benches, products, intertwiner_sums, batch_lifts);
criterion_main!(benches);
