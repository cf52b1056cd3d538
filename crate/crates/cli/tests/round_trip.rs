use adic_cli::dsl::ast::{Expr, Name, Span, Stmt};
use adic_cli::dsl::parse;
use proptest::prelude::*;

fn var() -> impl Strategy<Value = Expr> {
    prop::sample::select(vec!["x", "y", "z1", "w_2"])
        .prop_map(|v| Expr::Var(Name { text: v.to_string(), span: Span::default() }))
}

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        var(),
        (0u32..1000).prop_map(|n| Expr::Int(n.to_string(), Span::default())),
        (0u32..100, 1u32..100).prop_map(|(p, q)| Expr::Frac(p.to_string(), q.to_string(), Span::default())),
    ]
}

fn expr() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(5, 48, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
            inner.clone().prop_map(|a| Expr::Neg(Box::new(a), Span::default())),
            (inner, 0u32..12).prop_map(|(a, e)| Expr::Pow(Box::new(a), e, Span::default())),
        ]
    })
}

proptest! {
    #[test]
    fn printed_expressions_parse_back(gens in prop::collection::vec(expr(), 1..4)) {
        let printed: Vec<String> = gens.iter().map(|g| g.to_string()).collect();
        let src = format!("ideal a = <{}>;", printed.join(", "));
        let script = parse(&src).map_err(|e| TestCaseError::fail(format!("{src}: {e}")))?;
        let Stmt::Ideal(decl) = &script.stmts[0] else { panic!("not an ideal") };
        prop_assert_eq!(&decl.gens, &gens);
        prop_assert_eq!(script.to_string(), format!("{src}\n"));
    }

    #[test]
    fn whitespace_and_comments_do_not_change_the_tree(g in expr(), pad in "[ \t]{0,3}") {
        let plain = format!("ideal a = <{g}>;");
        let noisy = format!("# header\n{pad}ideal{pad} a = <{pad}{g}{pad}> ;{pad}# trailing\n");
        prop_assert_eq!(parse(&plain).unwrap(), parse(&noisy).unwrap());
    }
}
