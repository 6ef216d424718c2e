use cauchy_bench::{complex, paraboloid_cap, spatial, triangle_homotopy, unit_disk, unit_square};
use cauchy_core::expr::parse;
use cauchy_core::geometry::Solid3D;
use cauchy_core::theorems::{
    cauchy_via_green, divergence_check, gauss_volume, goursat_certify, homotopy_invariance, rectangle_identity,
};
use cauchy_core::{EvalEnv, Mode, QuadSpec};
use criterion::{black_box, criterion_group, criterion_main, Criterion};

fn expressions(c: &mut Criterion) {
    let text = "exp(z)*sin(z^2)/(z-3) + sqrt(z+4)";
    c.bench_function("parse", |b| b.iter(|| parse(black_box(text), Mode::Complex).unwrap()));
    let e = complex(text);
    let env = EvalEnv::complex(cauchy_core::Complex64::new(0.3, 0.4));
    c.bench_function("eval", |b| b.iter(|| e.eval(black_box(&env)).unwrap()));
    c.bench_function("diff", |b| b.iter(|| e.diff(cauchy_core::Var::Z).unwrap()));
}

fn planar_engines(c: &mut Criterion) {
    let q = QuadSpec::default();
    let f = complex("exp(z)");
    c.bench_function("rectangle_identity", |b| b.iter(|| rectangle_identity(&f, &unit_square(), &q, 1e-10)));
    c.bench_function("cauchy_via_green", |b| b.iter(|| cauchy_via_green(&f, &unit_disk(), &q, 1e-10)));
    let h = triangle_homotopy();
    let eps: Vec<f64> = (0..=10).map(|k| k as f64 / 10.0).collect();
    let cube = complex("z^3");
    c.bench_function("homotopy_invariance", |b| b.iter(|| homotopy_invariance(&cube, &h, &eps, &q, 1e-9)));
    c.bench_function("goursat_certify", |b| {
        b.iter(|| goursat_certify(&f, &unit_square(), 1e-10, 12, &q).unwrap())
    });
}

fn solid_engines(c: &mut Criterion) {
    let q = QuadSpec::default();
    let field = [spatial("x^2"), spatial("x*y"), spatial("y*z")];
    c.bench_function("divergence_box", |b| b.iter(|| divergence_check(&field, &Solid3D::unit_box(), &q, 1e-9)));
    let cap = paraboloid_cap();
    c.bench_function("gauss_volume_cap", |b| b.iter(|| gauss_volume(&cap, &q, 1e-6)));
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(20);
    targets = expressions, planar_engines, solid_engines
}
criterion_main!(benches);
