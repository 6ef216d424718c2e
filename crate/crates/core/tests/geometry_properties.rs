use cauchy_core::geometry::{Homotopy, Path, Region2D};
use cauchy_core::quad::contour_integral_with;
use cauchy_core::{Expr, Mode, QuadSpec, Var};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn curve() -> Path {
    let t = |s: &str| Expr::parse(s, Mode::Param(Var::T)).unwrap();
    let seg = cauchy_core::geometry::CurveSegment::new(t("t^2"), t("sin(3*t)"), 0.0, 1.0).unwrap();
    let tail = Path::line(c(1.0, 3f64.sin()), c(2.0, 0.0));
    Path::new(vec![cauchy_core::geometry::Segment::Curve(seg)])
        .unwrap()
        .concat(&tail)
        .unwrap()
}

#[test]
fn tangents_match_finite_differences() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let paths = [
        curve(),
        Path::circle(c(0.3, -0.2), 1.5).unwrap(),
        Path::polyline(&[c(0.0, 0.0), c(1.0, 2.0), c(-1.0, 0.5)]).unwrap(),
    ];
    for p in &paths {
        let joints = p.breakpoints();
        let mut tested = 0;
        while tested < 100 {
            let t: f64 = rng.gen_range(0.001..0.999);
            let h = 1e-6;
            if joints.iter().any(|j| (j - t).abs() < 2.0 * h) {
                continue;
            }
            let exact = p.tangent_at(t).unwrap();
            let fd = (p.point_at(t + h).unwrap() - p.point_at(t - h).unwrap()) / (2.0 * h);
            assert!((exact - fd).norm() <= 1e-6 * (1.0 + exact.norm()), "t = {t}");
            tested += 1;
        }
        assert_eq!(p.point_at(0.0).unwrap(), p.start());
        assert_eq!(p.point_at(1.0).unwrap(), p.end());
    }
}

#[test]
fn boundaries_enclose_positive_area() {
    let q = QuadSpec::new(16, 32, 64).unwrap();
    let y = |s: &str| Expr::parse(s, Mode::Param(Var::Y)).unwrap();
    let regions = [
        Region2D::rectangle(-1.0, 2.0, 0.5, 1.5).unwrap(),
        Region2D::disk(c(1.0, -1.0), 0.75).unwrap(),
        Region2D::polygon(vec![c(0.0, 0.0), c(2.0, 0.0), c(1.5, 1.0), c(0.5, 1.5)]).unwrap(),
        Region2D::x_convex(0.0, 1.0, y("y^2-1"), y("1+y")).unwrap(),
    ];
    for r in &regions {
        let b = r.boundary();
        assert!(b.is_closed());
        // (1/2) closed-integral (x dy - y dx) = (1/2) im closed-integral conj(z) dz
        let twice = contour_integral_with(&b, &q, |z| Ok(z.conj())).unwrap().im;
        assert!((twice / 2.0 - r.area()).abs() <= 1e-9, "{r:?}");
    }
}

#[test]
fn homotopy_endpoints_are_pinned() {
    let base = Path::line(c(0.0, 0.0), c(1.0, 0.0));
    let target = Path::polyline(&[c(0.0, 0.0), c(0.0, 1.0), c(1.0, 0.0)]).unwrap();
    let h = Homotopy::new(base, target).unwrap();
    for k in 0..=10 {
        let eps = k as f64 / 10.0;
        assert!((h.at(0.0, eps).unwrap() - c(0.0, 0.0)).norm() <= 1e-12);
        assert!((h.at(1.0, eps).unwrap() - c(1.0, 0.0)).norm() <= 1e-12);
    }
}
