use cauchy_core::expr::{BinOp, Constant, Func, Node};
use cauchy_core::{EvalEnv, Expr, Mode, Var};
use num_complex::Complex64;
use proptest::prelude::*;

fn leaf(vars: &'static [Var]) -> impl Strategy<Value = Node> {
    prop_oneof![
        (0u32..1000, 0u32..4).prop_map(|(m, e)| Node::Num(m as f64 / 10f64.powi(e as i32))),
        prop_oneof![Just(Constant::I), Just(Constant::Pi), Just(Constant::E)].prop_map(Node::Const),
        proptest::sample::select(vars).prop_map(Node::Var),
    ]
}

fn tree(vars: &'static [Var]) -> impl Strategy<Value = Node> {
    leaf(vars).prop_recursive(5, 48, 2, |inner| {
        let op = prop_oneof![
            Just(BinOp::Add),
            Just(BinOp::Sub),
            Just(BinOp::Mul),
            Just(BinOp::Div),
            Just(BinOp::Pow)
        ];
        prop_oneof![
            inner.clone().prop_map(|a| Node::Neg(Box::new(a))),
            (op, inner.clone(), inner.clone()).prop_map(|(op, a, b)| Node::binary(op, a, b)),
            (proptest::sample::select(Func::ALL.to_vec()), inner).prop_map(|(f, a)| Node::call(f, a)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn print_then_parse_rebuilds_the_tree(root in tree(&[Var::Z])) {
        let e = Expr::new(Mode::Complex, root).unwrap();
        let text = e.to_string();
        let back = Expr::parse(&text, Mode::Complex).unwrap();
        prop_assert_eq!(back, e, "{}", text);
    }

    #[test]
    fn spatial_round_trip(root in tree(&[Var::X, Var::Y, Var::Z])) {
        let e = Expr::new(Mode::Spatial, root).unwrap();
        let back = Expr::parse(&e.to_string(), Mode::Spatial).unwrap();
        prop_assert_eq!(back, e);
    }
}

#[test]
fn precedence_suite() {
    let val = |s: &str| Expr::parse(s, Mode::Constant).unwrap().eval(&EvalEnv::empty()).unwrap();
    assert_eq!(val("1+2*i^2"), Complex64::new(-1.0, 0.0));
    assert_eq!(val("2^3^2").re, 512.0);
    assert_eq!(val("-2^2").re, -4.0);
    assert_eq!(val("(-2)^2").re, 4.0);
    assert_eq!(val("2*-3").re, -6.0);
    assert_eq!(val("8/2/2").re, 2.0);
    assert_eq!(val("1-2-3").re, -4.0);
}

fn fd_check(src: &str, mode: Mode, var: Var, env_at: impl Fn(f64) -> EvalEnv, at: f64) {
    let e = Expr::parse(src, mode).unwrap();
    let exact = e.diff(var).unwrap().eval(&env_at(at)).unwrap();
    let h = 1e-6 * (1.0 + at.abs());
    let fd = (e.eval(&env_at(at + h)).unwrap() - e.eval(&env_at(at - h)).unwrap()) / (2.0 * h);
    assert!(
        (exact - fd).norm() <= 1e-6 * (1.0 + exact.norm()),
        "{src} d/{var} at {at}: {exact} vs {fd}"
    );
}

#[test]
fn symbolic_derivatives_match_finite_differences() {
    let smooth = [
        "z^3-2*z+1", "exp(z)*sin(z)", "1/(z-3)", "log(z+2)", "sqrt(z+4)", "cos(z^2)",
        "z^z", "exp(-z^2/2)", "(z+1)/(z^2+5)", "2^z",
    ];
    // real-axis samples stay away from the log/sqrt cuts and the poles
    for src in smooth {
        for at in [-0.7, 0.1, 0.9, 1.6] {
            let z0 = Complex64::new(0.0, 0.3);
            fd_check(src, Mode::Complex, Var::Z, |t| EvalEnv::complex(z0 + t), at);
        }
    }
    let planar = ["x^2*y-3*y", "exp(x)*cos(y)", "sqrt(x^2+y^2+1)", "log(1+x^2)*sin(y)", "re(exp(x+i*y))"];
    for src in planar {
        for at in [-0.5, 0.4, 1.3] {
            fd_check(src, Mode::Planar, Var::X, |t| EvalEnv::planar(t, 0.7), at);
            fd_check(src, Mode::Planar, Var::Y, |t| EvalEnv::planar(0.2, t), at);
        }
    }
}
