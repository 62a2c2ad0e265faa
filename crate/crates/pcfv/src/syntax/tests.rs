use super::*;
use proptest::prelude::*;

fn comp(s: &str) -> Computation {
    parse_computation(s).unwrap()
}
fn val(s: &str) -> Value {
    parse_value(s).unwrap()
}

#[test]
fn numerals_desugar() {
    assert_eq!(comp("return 2"), Computation::Ret(Value::numeral(2)));
    assert_eq!(val("2"), Value::Suc(Box::new(Value::Suc(Box::new(Value::Zero)))));
}

#[test]
fn lambda_parses_with_binder() {
    let v = val("fn x : nat => return x");
    match v {
        Value::Lam { param, param_ty, body } => {
            assert_eq!(param, "x");
            assert_eq!(param_ty, Ty::Nat);
            assert_eq!(*body, Computation::Ret(Value::Var("x".into())));
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn case_sum_parses() {
    let t = comp("case inl star of { inl x => return x | inr y => return y }");
    match t {
        Computation::CaseSum { scrutinee, left_name, right_name, .. } => {
            assert_eq!(scrutinee, Value::Inl(Box::new(Value::Star)));
            assert_eq!(left_name, "x");
            assert_eq!(right_name, "y");
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn print_examples() {
    assert_eq!(print_computation(&Computation::Ret(Value::Zero)), "return 0");
    let lam = Value::Lam {
        param: "x".into(),
        param_ty: Ty::Nat,
        body: Box::new(Computation::Ret(Value::Var("x".into()))),
    };
    assert_eq!(print_value(&lam), "fn x : nat => return x");
}

#[test]
fn ty_precedence() {
    assert_eq!(parse_ty("nat -> nat -> nat").unwrap(), parse_ty("nat -> (nat -> nat)").unwrap());
    assert_eq!(parse_ty("nat * 1 + 0").unwrap(), parse_ty("(nat * 1) + 0").unwrap());
    assert_eq!(parse_ty("nat + 1 -> 0").unwrap(), parse_ty("(nat + 1) -> 0").unwrap());
    assert_eq!(print_ty(&parse_ty("(nat -> nat) -> nat").unwrap()), "(nat -> nat) -> nat");
}

#[test]
fn parenthesised_application() {
    let t = comp("(fn x : nat => return x) 5");
    assert!(matches!(t, Computation::App(Value::Lam { .. }, _)));
}

#[test]
fn hole_round_trips() {
    let t = comp("let y = [.] in return 0");
    assert_eq!(count_holes(&t), 1);
    assert_eq!(parse_computation(&print_computation(&t)).unwrap(), t);
}

#[test]
fn comments_and_errors() {
    assert_eq!(comp("return 1 # trailing comment"), comp("return 1"));
    let err = parse_computation("return (fn x nat => return x)").unwrap_err();
    assert_eq!(err.line, 1);
    assert!(err.col > 1);
    assert!(parse_computation("fst").is_err());
    assert!(parse_computation("x").is_err(), "a bare value is not a computation");
}

#[test]
fn free_vars() {
    let t = comp("let y = return x in return fn z : nat => return y");
    let fv = free_vars_computation(&t);
    assert_eq!(fv.into_iter().collect::<Vec<_>>(), vec!["x".to_string()]);
}

fn ident_strategy() -> impl Strategy<Value = String> {
    prop::sample::select(vec!["x", "y", "z", "f", "g", "u", "w"]).prop_map(str::to_string)
}

fn ty_strategy() -> impl Strategy<Value = Ty> {
    let leaf = prop::sample::select(vec![Ty::Zero, Ty::One, Ty::Nat]);
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Ty::sum(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Ty::prod(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Ty::arrow(a, b)),
        ]
    })
}

// Well-formed (not necessarily well-typed) terms of depth <= 6, exercising
// every grammar production.
fn value_strategy(depth: u32) -> BoxedStrategy<Value> {
    if depth == 0 {
        return prop_oneof![
            ident_strategy().prop_map(Value::Var),
            Just(Value::Star),
            (0u32..4).prop_map(Value::numeral),
        ]
        .boxed();
    }
    prop_oneof![
        ident_strategy().prop_map(Value::Var),
        Just(Value::Star),
        (0u32..4).prop_map(Value::numeral),
        value_strategy(depth - 1).prop_map(|v| Value::Inl(Box::new(v))),
        value_strategy(depth - 1).prop_map(|v| Value::Inr(Box::new(v))),
        value_strategy(depth - 1).prop_map(|v| Value::Suc(Box::new(v))),
        (value_strategy(depth - 1), value_strategy(depth - 1))
            .prop_map(|(a, b)| Value::Pair(Box::new(a), Box::new(b))),
        (ident_strategy(), ty_strategy(), comp_strategy(depth - 1)).prop_map(|(param, param_ty, body)| {
            Value::Lam { param, param_ty, body: Box::new(body) }
        }),
        (ident_strategy(), ident_strategy(), ty_strategy(), ty_strategy(), comp_strategy(depth - 1))
            .prop_map(|(fname, param, param_ty, ret_ty, body)| Value::Rec {
                fname,
                param,
                param_ty,
                ret_ty,
                body: Box::new(body)
            }),
    ]
    .boxed()
}

fn comp_strategy(depth: u32) -> BoxedStrategy<Computation> {
    let d = depth.saturating_sub(1);
    prop_oneof![
        value_strategy(d).prop_map(Computation::Ret),
        value_strategy(d).prop_map(Computation::Proj1),
        value_strategy(d).prop_map(Computation::Proj2),
        value_strategy(d).prop_map(Computation::Absurd),
        (value_strategy(d), value_strategy(d)).prop_map(|(f, a)| Computation::App(f, a)),
        (value_strategy(d), ident_strategy(), comp_strategy_inner(d), ident_strategy(), comp_strategy_inner(d))
            .prop_map(|(scrutinee, left_name, left, right_name, right)| Computation::CaseSum {
                scrutinee,
                left_name,
                left: Box::new(left),
                right_name,
                right: Box::new(right)
            }),
        (value_strategy(d), comp_strategy_inner(d), ident_strategy(), comp_strategy_inner(d)).prop_map(
            |(scrutinee, zero, succ_name, succ)| Computation::CaseNat {
                scrutinee,
                zero: Box::new(zero),
                succ_name,
                succ: Box::new(succ)
            }
        ),
        (ident_strategy(), comp_strategy_inner(d), comp_strategy_inner(d)).prop_map(|(name, bound, body)| {
            Computation::Let { name, bound: Box::new(bound), body: Box::new(body) }
        }),
    ]
    .boxed()
}

fn comp_strategy_inner(depth: u32) -> BoxedStrategy<Computation> {
    if depth == 0 {
        value_strategy(0).prop_map(Computation::Ret).boxed()
    } else {
        comp_strategy(depth).boxed()
    }
}

proptest! {
    #[test]
    fn roundtrip_computations(t in comp_strategy(6)) {
        let printed = print_computation(&t);
        let reparsed = parse_computation(&printed).unwrap();
        prop_assert_eq!(&reparsed, &t, "printed as {}", printed);
        // Printing a normal form is idempotent.
        prop_assert_eq!(print_computation(&reparsed), printed);
    }

    #[test]
    fn roundtrip_values(v in value_strategy(6)) {
        let printed = print_value(&v);
        prop_assert_eq!(parse_value(&printed).unwrap(), v.clone(), "printed as {}", printed);
    }

    #[test]
    fn roundtrip_types(t in ty_strategy()) {
        prop_assert_eq!(parse_ty(&print_ty(&t)).unwrap(), t);
    }

    #[test]
    fn printed_free_vars_match(t in comp_strategy(5)) {
        let printed = print_computation(&t);
        let reparsed = parse_computation(&printed).unwrap();
        prop_assert_eq!(free_vars_computation(&reparsed), free_vars_computation(&t));
    }
}
