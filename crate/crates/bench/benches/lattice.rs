use criterion::{black_box, criterion_group, criterion_main, Criterion};
use oscover_core::{adjunction_genus, intersect, lin_equiv, HalfPeriod, PicClass};

fn pairing(c: &mut Criterion) {
    let d = PicClass::pulled_back(13, 3, HalfPeriod::ORIGIN, [1, 0, 0, 0], [0, 5, 5, 5]);
    let e = PicClass::c0_strict();
    c.bench_function("intersect", |b| {
        b.iter(|| intersect(black_box(&d), black_box(&e)))
    });
    c.bench_function("adjunction_genus", |b| {
        b.iter(|| adjunction_genus(black_box(&d)))
    });
    c.bench_function("lin_equiv", |b| {
        b.iter(|| lin_equiv(black_box(&d), black_box(&e)))
    });
}

criterion_group!(benches, pairing);
criterion_main!(benches);
