use super::*;
use crate::Error;
use proptest::prelude::*;

fn no_params() -> ParamSet {
    ParamSet::new()
}

#[test]
fn bare_variable() {
    assert_eq!(*parse("r").unwrap().ast(), Node::Var);
}

#[test]
fn schwarzschild_coefficient() {
    let e = parse("1 - 2*m/r").unwrap();
    let p = ParamSet::new().with("m", 1.0).unwrap();
    assert!((e.eval(10.0, &p).unwrap() - 0.8).abs() < 1e-15);
}

#[test]
fn neck_profile_value() {
    let e = parse("r + 1.5*exp(-4*(r-3)^2)").unwrap();
    assert!((e.eval(3.0, &no_params()).unwrap() - 4.5).abs() < 1e-15);
}

#[test]
fn square_derivatives() {
    let v = parse("r^2").unwrap().eval_d2(3.0, &no_params()).unwrap();
    assert_eq!((v.value, v.d1, v.d2), (9.0, 6.0, 2.0));
}

#[test]
fn exponential_derivatives() {
    let v = parse("exp(-r)").unwrap().eval_d2(0.0, &no_params()).unwrap();
    assert_eq!((v.value, v.d1, v.d2), (1.0, -1.0, 1.0));
}

#[test]
fn root_coefficient_against_finite_differences() {
    let e = parse("sqrt(1-2/r)").unwrap();
    let v = e.eval_d2(4.0, &no_params()).unwrap();
    assert!((v.value - 0.5f64.sqrt()).abs() < 1e-15);
    assert!((v.d1 - 0.0883883476483184).abs() < 1e-14);
    // Second difference with each first difference formed without cancellation.
    let (r, h) = (4.0f64, 1e-5);
    let u = |r: f64| 1.0 - 2.0 / r;
    let up = 2.0 * h / (r * (r + h)) / (u(r + h).sqrt() + u(r).sqrt());
    let down = 2.0 * h / (r * (r - h)) / (u(r).sqrt() + u(r - h).sqrt());
    let fd2 = (up - down) / (h * h);
    assert!((v.d2 - fd2).abs() < 1e-6, "{} vs {}", v.d2, fd2);
}

#[test]
fn precedence_and_associativity() {
    let cases = [
        ("2^3^2", 512.0),
        ("-2^2", -4.0),
        ("2^-1", 0.5),
        ("8/4/2", 1.0),
        ("1-2-3", -4.0),
        ("2*3+4*5", 26.0),
        ("-(1+2)*3", -9.0),
        ("pow(2, 10)", 1024.0),
        ("max(1, min(3, 2))", 2.0),
        (".5e1 + 1E-1", 5.1),
        ("pi", std::f64::consts::PI),
    ];
    for (text, want) in cases {
        let got = parse(text).unwrap().eval(1.0, &no_params()).unwrap();
        assert!((got - want).abs() < 1e-12, "{text}: {got}");
    }
}

#[test]
fn syntax_errors_report_offsets() {
    let cases = [("1 +", 3), ("(r", 2), ("r r", 2), ("2 * * r", 4), ("sqrt r", 5), ("r $ 1", 2), ("pow(r)", 5)];
    for (text, offset) in cases {
        match parse(text) {
            Err(Error::Syntax { offset: o, expected }) => {
                assert_eq!(o, offset, "{text}");
                assert!(!expected.is_empty());
            }
            other => panic!("{text}: {other:?}"),
        }
    }
    assert!(matches!(parse("   "), Err(Error::Syntax { offset: 0, .. })));
    assert!(matches!(parse("1e999"), Err(Error::Syntax { offset: 0, .. })));
}

#[test]
fn unknown_function_is_rejected() {
    match parse("r + foo(r)") {
        Err(Error::UnknownIdentifier { name, offset }) => {
            assert_eq!(name, "foo");
            assert_eq!(offset, 4);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn unbound_parameter_is_reported() {
    let e = parse("1 - 2*m/r").unwrap();
    assert_eq!(e.params().collect::<Vec<_>>(), vec!["m"]);
    assert!(matches!(e.check_params(&no_params()), Err(Error::UnknownIdentifier { offset: 6, .. })));
    assert!(e.eval(3.0, &no_params()).is_err());
}

#[test]
fn duplicate_parameters_are_rejected() {
    assert!(ParamSet::new().with("m", 1.0).unwrap().with("m", 2.0).is_err());
}

#[test]
fn domain_violations() {
    for text in ["log(r - 2)", "sqrt(1 - 2*r)", "1/(r - 1)", "(-r)^0.5"] {
        assert!(matches!(parse(text).unwrap().eval(1.0, &no_params()), Err(Error::Eval(_))), "{text}");
    }
}

#[test]
fn ties_are_flagged() {
    let e = parse("max(r, 2 - r)").unwrap();
    assert!(e.eval_d2(1.0, &no_params()).unwrap().non_smooth);
    assert!(!e.eval_d2(1.5, &no_params()).unwrap().non_smooth);
}

#[test]
fn bind_removes_parameters() {
    let e = parse("a*r + b").unwrap();
    let p = ParamSet::new().with("a", 2.0).unwrap().with("b", 1.0).unwrap();
    let bound = e.bind(&p).unwrap();
    assert_eq!(bound.params().count(), 0);
    assert_eq!(bound.eval(3.0, &no_params()).unwrap(), 7.0);
}

#[test]
fn expressions_are_shareable_across_threads() {
    let e = std::sync::Arc::new(parse("r^3 - tanh(r)").unwrap());
    let handles: Vec<_> = (0..4)
        .map(|i| {
            let e = e.clone();
            std::thread::spawn(move || e.eval(i as f64, &ParamSet::new()).unwrap())
        })
        .collect();
    for (i, h) in handles.into_iter().enumerate() {
        let x = i as f64;
        assert_eq!(h.join().unwrap(), x.powi(3) - x.tanh());
    }
}

fn any_node() -> impl Strategy<Value = Node> {
    let leaf = prop_oneof![
        (0.0f64..1e6).prop_map(Node::Const),
        Just(Node::Var),
        Just(Node::Pi),
        prop::sample::select(vec!["m", "a0", "k_2"]).prop_map(|s| Node::Param(s.to_string())),
    ];
    leaf.prop_recursive(5, 48, 3, |inner| {
        let binop = prop::sample::select(vec![BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div, BinOp::Pow]);
        let func = prop::sample::select(vec![
            Func::Sqrt,
            Func::Exp,
            Func::Log,
            Func::Sin,
            Func::Cos,
            Func::Tanh,
            Func::Pow,
            Func::Min,
            Func::Max,
        ]);
        prop_oneof![
            inner.clone().prop_map(|n| Node::Neg(Box::new(n))),
            (binop, inner.clone(), inner.clone()).prop_map(|(op, l, r)| Node::Binary(op, Box::new(l), Box::new(r))),
            (func, prop::collection::vec(inner, 2)).prop_map(|(f, mut args)| {
                args.truncate(f.arity());
                Node::Call(f, args)
            }),
        ]
    })
}

/// Expressions that are smooth and well-defined for r in [0.5, 3].
fn smooth_node() -> impl Strategy<Value = Node> {
    let leaf = prop_oneof![(0.25f64..2.0).prop_map(Node::Const), Just(Node::Var), Just(Node::Var)];
    leaf.prop_recursive(3, 16, 2, |inner| {
        let pos = |n: Node| {
            Node::Binary(
                BinOp::Add,
                Box::new(Node::Const(1.0)),
                Box::new(Node::Binary(BinOp::Pow, Box::new(n), Box::new(Node::Const(2.0)))),
            )
        };
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Node::Binary(BinOp::Add, Box::new(l), Box::new(r))),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Node::Binary(BinOp::Sub, Box::new(l), Box::new(r))),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Node::Binary(BinOp::Mul, Box::new(l), Box::new(r))),
            (inner.clone(), inner.clone()).prop_map(move |(l, r)| Node::Binary(
                BinOp::Div,
                Box::new(l),
                Box::new(pos(r))
            )),
            inner.clone().prop_map(move |n| Node::Call(Func::Sqrt, vec![pos(n)])),
            inner.clone().prop_map(move |n| Node::Call(Func::Log, vec![pos(n)])),
            inner.clone().prop_map(|n| Node::Call(Func::Sin, vec![n])),
            inner.clone().prop_map(|n| Node::Call(Func::Cos, vec![n])),
            inner.clone().prop_map(|n| Node::Call(Func::Tanh, vec![n])),
            inner.clone().prop_map(|n| Node::Call(Func::Exp, vec![Node::Call(Func::Sin, vec![n])])),
            inner.prop_map(|n| Node::Binary(BinOp::Pow, Box::new(n), Box::new(Node::Const(3.0)))),
        ]
    })
}

proptest! {
    #[test]
    fn print_parse_round_trip(node in any_node()) {
        let text = node.to_string();
        let first = parse(&text).unwrap();
        let again = parse(&first.to_string()).unwrap();
        prop_assert_eq!(first.ast(), &node, "printed as {}", text);
        prop_assert_eq!(again.ast(), first.ast());
    }

    #[test]
    fn derivatives_match_finite_differences(node in smooth_node(), seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let e = parse(&node.to_string()).unwrap();
        let p = ParamSet::new();
        let f = |r: f64| e.eval(r, &p).unwrap();
        let d1 = |r: f64| e.eval_d2(r, &p).unwrap().d1;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let h = 1e-5;
        for _ in 0..100 {
            let r: f64 = rng.gen_range(0.5..3.0);
            let v = e.eval_d2(r, &p).unwrap();
            let fd1 = (f(r + h) - f(r - h)) / (2.0 * h);
            let fd2 = (d1(r + h) - d1(r - h)) / (2.0 * h);
            let scale = 1.0 + v.value.abs() + v.d1.abs() + v.d2.abs();
            prop_assert!((v.d1 - fd1).abs() <= 1e-5 * scale, "{}: d1 {} vs {}", e, v.d1, fd1);
            prop_assert!((v.d2 - fd2).abs() <= 1e-5 * scale, "{}: d2 {} vs {}", e, v.d2, fd2);
        }
    }
}
