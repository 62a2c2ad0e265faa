//! The two typing judgments, value and computation, as a syntax-directed
//! checker.
//!
//! Binders are annotated, so most types synthesise. The forms that do not
//! determine their own type — `inl`/`inr` (the other summand is not written)
//! and `absurd` (its rule concludes any type) — are handled by inference over
//! partial types: a branch join merges what each branch knows, holes filling
//! in from the other side. There are no unification variables, only holes;
//! a term whose type still has holes at the end needs an expected type from
//! the caller.

use crate::syntax::{Computation, Ty, Value};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum TypeError {
    #[error("unbound variable `{0}`")]
    Unbound(String),
    #[error("rule {rule}: expected {expected}, found {found} in `{subterm}`")]
    Mismatch { rule: &'static str, expected: String, found: String, subterm: String },
    #[error("rule {rule}: the type of `{subterm}` is not determined (best guess {partial}); supply an expected type")]
    NeedsExpected { rule: &'static str, subterm: String, partial: String },
    #[error("the hole `[.]` is not a computation; check it as a context instead")]
    HoleInTerm,
}

/// Ordered typing context; lookup returns the rightmost binding, so
/// shadowing behaves like substitution does.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TyCtx {
    bindings: Vec<(String, Ty)>,
}

impl TyCtx {
    pub fn empty() -> TyCtx {
        TyCtx::default()
    }

    pub fn of(bindings: impl IntoIterator<Item = (String, Ty)>) -> TyCtx {
        TyCtx { bindings: bindings.into_iter().collect() }
    }

    pub fn lookup(&self, name: &str) -> Option<&Ty> {
        self.bindings.iter().rev().find(|(x, _)| x == name).map(|(_, t)| t)
    }

    pub fn extended(&self, name: impl Into<String>, ty: Ty) -> TyCtx {
        let mut next = self.clone();
        next.bindings.push((name.into(), ty));
        next
    }

    pub fn bindings(&self) -> &[(String, Ty)] {
        &self.bindings
    }
}

/// A type with holes for the positions a term does not determine.
#[derive(Debug, Clone, PartialEq, Eq)]
enum PTy {
    Hole,
    Zero,
    One,
    Nat,
    Sum(Box<PTy>, Box<PTy>),
    Prod(Box<PTy>, Box<PTy>),
    Arrow(Box<PTy>, Box<PTy>),
}

impl PTy {
    fn of(ty: &Ty) -> PTy {
        match ty {
            Ty::Zero => PTy::Zero,
            Ty::One => PTy::One,
            Ty::Nat => PTy::Nat,
            Ty::Sum(a, b) => PTy::Sum(Box::new(PTy::of(a)), Box::new(PTy::of(b))),
            Ty::Prod(a, b) => PTy::Prod(Box::new(PTy::of(a)), Box::new(PTy::of(b))),
            Ty::Arrow(a, b) => PTy::Arrow(Box::new(PTy::of(a)), Box::new(PTy::of(b))),
        }
    }

    fn ground(&self) -> Option<Ty> {
        match self {
            PTy::Hole => None,
            PTy::Zero => Some(Ty::Zero),
            PTy::One => Some(Ty::One),
            PTy::Nat => Some(Ty::Nat),
            PTy::Sum(a, b) => Some(Ty::sum(a.ground()?, b.ground()?)),
            PTy::Prod(a, b) => Some(Ty::prod(a.ground()?, b.ground()?)),
            PTy::Arrow(a, b) => Some(Ty::arrow(a.ground()?, b.ground()?)),
        }
    }

    /// Least common refinement; `None` on conflict.
    fn merge(&self, other: &PTy) -> Option<PTy> {
        match (self, other) {
            (PTy::Hole, t) | (t, PTy::Hole) => Some(t.clone()),
            (PTy::Zero, PTy::Zero) | (PTy::One, PTy::One) | (PTy::Nat, PTy::Nat) => Some(self.clone()),
            (PTy::Sum(a1, b1), PTy::Sum(a2, b2)) => {
                Some(PTy::Sum(Box::new(a1.merge(a2)?), Box::new(b1.merge(b2)?)))
            }
            (PTy::Prod(a1, b1), PTy::Prod(a2, b2)) => {
                Some(PTy::Prod(Box::new(a1.merge(a2)?), Box::new(b1.merge(b2)?)))
            }
            (PTy::Arrow(a1, b1), PTy::Arrow(a2, b2)) => {
                Some(PTy::Arrow(Box::new(a1.merge(a2)?), Box::new(b1.merge(b2)?)))
            }
            _ => None,
        }
    }
}

impl std::fmt::Display for PTy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PTy::Hole => write!(f, "?"),
            PTy::Zero => write!(f, "0"),
            PTy::One => write!(f, "1"),
            PTy::Nat => write!(f, "nat"),
            PTy::Sum(a, b) => write!(f, "({a} + {b})"),
            PTy::Prod(a, b) => write!(f, "({a} * {b})"),
            PTy::Arrow(a, b) => write!(f, "({a} -> {b})"),
        }
    }
}

fn merged(
    rule: &'static str,
    want: &PTy,
    found: &PTy,
    subterm: impl Fn() -> String,
) -> Result<PTy, TypeError> {
    want.merge(found).ok_or_else(|| TypeError::Mismatch {
        rule,
        expected: want.to_string(),
        found: found.to_string(),
        subterm: subterm(),
    })
}

fn infer_value(ctx: &TyCtx, v: &Value, want: &PTy) -> Result<PTy, TypeError> {
    match v {
        Value::Var(x) => {
            let ty = ctx.lookup(x).ok_or_else(|| TypeError::Unbound(x.clone()))?;
            merged("var", want, &PTy::of(ty), || x.clone())
        }
        Value::Star => merged("unit", want, &PTy::One, || v.to_string()),
        Value::Zero => merged("zero", want, &PTy::Nat, || v.to_string()),
        Value::Suc(w) => {
            infer_value(ctx, w, &PTy::Nat)?;
            merged("suc", want, &PTy::Nat, || v.to_string())
        }
        Value::Inl(w) => {
            let shape = merged("inl", want, &PTy::Sum(Box::new(PTy::Hole), Box::new(PTy::Hole)), || {
                v.to_string()
            })?;
            let PTy::Sum(a, b) = shape else { unreachable!() };
            let a = infer_value(ctx, w, &a)?;
            Ok(PTy::Sum(Box::new(a), b))
        }
        Value::Inr(w) => {
            let shape = merged("inr", want, &PTy::Sum(Box::new(PTy::Hole), Box::new(PTy::Hole)), || {
                v.to_string()
            })?;
            let PTy::Sum(a, b) = shape else { unreachable!() };
            let b = infer_value(ctx, w, &b)?;
            Ok(PTy::Sum(a, Box::new(b)))
        }
        Value::Pair(l, r) => {
            let shape = merged("pair", want, &PTy::Prod(Box::new(PTy::Hole), Box::new(PTy::Hole)), || {
                v.to_string()
            })?;
            let PTy::Prod(a, b) = shape else { unreachable!() };
            let a = infer_value(ctx, l, &a)?;
            let b = infer_value(ctx, r, &b)?;
            Ok(PTy::Prod(Box::new(a), Box::new(b)))
        }
        Value::Lam { param, param_ty, body } => {
            let shape = merged(
                "lam",
                want,
                &PTy::Arrow(Box::new(PTy::of(param_ty)), Box::new(PTy::Hole)),
                || v.to_string(),
            )?;
            let PTy::Arrow(_, cod) = shape else { unreachable!() };
            let inner = ctx.extended(param.clone(), param_ty.clone());
            let cod = infer_comp(&inner, body, &cod)?;
            Ok(PTy::Arrow(Box::new(PTy::of(param_ty)), Box::new(cod)))
        }
        Value::Rec { fname, param, param_ty, ret_ty, body } => {
            let fn_ty = Ty::arrow(param_ty.clone(), ret_ty.clone());
            let inner = ctx
                .extended(fname.clone(), fn_ty.clone())
                .extended(param.clone(), param_ty.clone());
            infer_comp(&inner, body, &PTy::of(ret_ty))?;
            merged("rec", want, &PTy::of(&fn_ty), || v.to_string())
        }
    }
}

fn infer_comp(ctx: &TyCtx, t: &Computation, want: &PTy) -> Result<PTy, TypeError> {
    match t {
        Computation::Ret(v) => infer_value(ctx, v, want),
        Computation::Proj1(v) => {
            let shape = PTy::Prod(Box::new(want.clone()), Box::new(PTy::Hole));
            match infer_value(ctx, v, &shape)? {
                PTy::Prod(a, _) => Ok(*a),
                _ => unreachable!(),
            }
        }
        Computation::Proj2(v) => {
            let shape = PTy::Prod(Box::new(PTy::Hole), Box::new(want.clone()));
            match infer_value(ctx, v, &shape)? {
                PTy::Prod(_, b) => Ok(*b),
                _ => unreachable!(),
            }
        }
        Computation::App(f, a) => {
            let shape = PTy::Arrow(Box::new(PTy::Hole), Box::new(want.clone()));
            let PTy::Arrow(dom, cod) = infer_value(ctx, f, &shape)? else { unreachable!() };
            infer_value(ctx, a, &dom)?;
            Ok(*cod)
        }
        Computation::CaseSum { scrutinee, left_name, left, right_name, right } => {
            let shape = PTy::Sum(Box::new(PTy::Hole), Box::new(PTy::Hole));
            let PTy::Sum(a, b) = infer_value(ctx, scrutinee, &shape)? else { unreachable!() };
            let (Some(a), Some(b)) = (a.ground(), b.ground()) else {
                return Err(TypeError::NeedsExpected {
                    rule: "case-sum",
                    subterm: scrutinee.to_string(),
                    partial: format!("({a} + {b})"),
                });
            };
            let lctx = ctx.extended(left_name.clone(), a);
            let rctx = ctx.extended(right_name.clone(), b);
            let lt = infer_comp(&lctx, left, want)?;
            let rt = infer_comp(&rctx, right, &lt)?;
            merged("case-sum", &lt, &rt, || t.to_string())
        }
        Computation::CaseNat { scrutinee, zero, succ_name, succ } => {
            infer_value(ctx, scrutinee, &PTy::Nat)?;
            let sctx = ctx.extended(succ_name.clone(), Ty::Nat);
            let zt = infer_comp(ctx, zero, want)?;
            let st = infer_comp(&sctx, succ, &zt)?;
            merged("case-nat", &zt, &st, || t.to_string())
        }
        Computation::Let { name, bound, body } => {
            let bound_ty = infer_comp(ctx, bound, &PTy::Hole)?;
            let Some(bound_ty) = bound_ty.ground() else {
                return Err(TypeError::NeedsExpected {
                    rule: "let",
                    subterm: bound.to_string(),
                    partial: bound_ty.to_string(),
                });
            };
            let inner = ctx.extended(name.clone(), bound_ty);
            infer_comp(&inner, body, want)
        }
        Computation::Absurd(v) => {
            infer_value(ctx, v, &PTy::Zero)?;
            Ok(want.clone())
        }
        Computation::Hole => Err(TypeError::HoleInTerm),
    }
}

/// Synthesise the type of a value: `Γ ⊢v v : τ`.
pub fn check_value(ctx: &TyCtx, v: &Value) -> Result<Ty, TypeError> {
    check_value_expecting(ctx, v, None)
}

/// Check a value against an expected type, or synthesise when `None`.
pub fn check_value_expecting(ctx: &TyCtx, v: &Value, expected: Option<&Ty>) -> Result<Ty, TypeError> {
    let want = expected.map(PTy::of).unwrap_or(PTy::Hole);
    let got = infer_value(ctx, v, &want)?;
    got.ground().ok_or_else(|| TypeError::NeedsExpected {
        rule: "value",
        subterm: v.to_string(),
        partial: got.to_string(),
    })
}

/// Synthesise the type of a computation: `Γ ⊢c t : τ`.
pub fn check_comp(ctx: &TyCtx, t: &Computation) -> Result<Ty, TypeError> {
    check_comp_expecting(ctx, t, None)
}

/// Check a computation against an expected type, or synthesise when `None`.
/// `absurd v` alone cannot synthesise; give it an expected type.
pub fn check_comp_expecting(ctx: &TyCtx, t: &Computation, expected: Option<&Ty>) -> Result<Ty, TypeError> {
    let want = expected.map(PTy::of).unwrap_or(PTy::Hole);
    let got = infer_comp(ctx, t, &want)?;
    got.ground().ok_or_else(|| TypeError::NeedsExpected {
        rule: "computation",
        subterm: t.to_string(),
        partial: got.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_computation, parse_ty, parse_value};

    fn ty(s: &str) -> Ty {
        parse_ty(s).unwrap()
    }

    #[test]
    fn rec_rule() {
        let v = parse_value("rec f (x : nat) : nat => f x").unwrap();
        assert_eq!(check_value(&TyCtx::empty(), &v).unwrap(), ty("nat -> nat"));
    }

    #[test]
    fn pairing_rule() {
        let v = parse_value("(star, star)").unwrap();
        assert_eq!(check_value(&TyCtx::empty(), &v).unwrap(), ty("1 * 1"));
    }

    #[test]
    fn suc_requires_nat() {
        let v = parse_value("suc star").unwrap();
        assert!(matches!(
            check_value(&TyCtx::empty(), &v),
            Err(TypeError::Mismatch { rule: "unit", .. })
        ));
    }

    #[test]
    fn let_then_suc() {
        let t = parse_computation("let y = return x in return suc y").unwrap();
        let ctx = TyCtx::of([("x".to_string(), Ty::Nat)]);
        assert_eq!(check_comp(&ctx, &t).unwrap(), Ty::Nat);
    }

    #[test]
    fn absurd_takes_any_requested_type() {
        let t = parse_computation("absurd x").unwrap();
        let ctx = TyCtx::of([("x".to_string(), Ty::Zero)]);
        for want in ["nat", "1", "nat -> nat", "0 + 1"] {
            let want = ty(want);
            assert_eq!(check_comp_expecting(&ctx, &t, Some(&want)).unwrap(), want);
        }
        assert!(matches!(check_comp(&ctx, &t), Err(TypeError::NeedsExpected { .. })));
    }

    #[test]
    fn application_argument_mismatch() {
        let t = parse_computation("(fn x : nat => return x) star").unwrap();
        assert!(check_comp(&TyCtx::empty(), &t).is_err());
    }

    // Branch joins fill each other's holes: the truncation computation for a
    // sum type relies on this.
    #[test]
    fn branch_join_infers_sum() {
        let ctx = TyCtx::of([("s".to_string(), ty("nat + 1"))]);
        let t = parse_computation(
            "case s of { inl y => return inl suc y | inr z => return inr z }",
        )
        .unwrap();
        assert_eq!(check_comp(&ctx, &t).unwrap(), ty("nat + 1"));
        // And in let-bound position, where no expected type is available.
        let seq = parse_computation(
            "let m = case s of { inl y => return inl suc y | inr z => return inr z } in return m",
        )
        .unwrap();
        assert_eq!(check_comp(&ctx, &seq).unwrap(), ty("nat + 1"));
    }

    // One positive and one negative instance per rule.
    #[test]
    fn per_rule_suite() {
        let empty = TyCtx::empty();
        let nat_ctx = TyCtx::of([("n".to_string(), Ty::Nat)]);
        let sum_ctx = TyCtx::of([("s".to_string(), ty("nat + 1"))]);
        let pair_ctx = TyCtx::of([("p".to_string(), ty("nat * 1"))]);
        let zero_ctx = TyCtx::of([("z".to_string(), Ty::Zero)]);

        // var
        assert_eq!(check_value(&nat_ctx, &parse_value("n").unwrap()).unwrap(), Ty::Nat);
        assert!(check_value(&empty, &parse_value("n").unwrap()).is_err());
        // unit
        assert_eq!(check_value(&empty, &parse_value("star").unwrap()).unwrap(), Ty::One);
        assert!(check_value_expecting(&empty, &parse_value("star").unwrap(), Some(&Ty::Nat)).is_err());
        // inl / inr
        let sum = ty("1 + nat");
        assert_eq!(
            check_value_expecting(&empty, &parse_value("inl star").unwrap(), Some(&sum)).unwrap(),
            sum
        );
        assert!(check_value_expecting(&empty, &parse_value("inr star").unwrap(), Some(&sum)).is_err());
        assert!(check_value(&empty, &parse_value("inl star").unwrap()).is_err(), "underdetermined");
        // pair
        assert_eq!(check_value(&nat_ctx, &parse_value("(n, star)").unwrap()).unwrap(), ty("nat * 1"));
        assert!(
            check_value_expecting(&nat_ctx, &parse_value("(n, star)").unwrap(), Some(&ty("1 * 1"))).is_err()
        );
        // zero / suc
        assert_eq!(check_value(&empty, &parse_value("0").unwrap()).unwrap(), Ty::Nat);
        assert!(check_value(&nat_ctx, &parse_value("suc (n, n)").unwrap()).is_err());
        // lam
        assert_eq!(
            check_value(&empty, &parse_value("fn x : 1 => return 3").unwrap()).unwrap(),
            ty("1 -> nat")
        );
        assert!(check_value(&empty, &parse_value("fn x : 1 => return y").unwrap()).is_err());
        // rec: body must return the annotated type
        assert!(check_value(&empty, &parse_value("rec f (x : nat) : nat => return star").unwrap()).is_err());
        // ret
        assert_eq!(check_comp(&empty, &parse_computation("return 2").unwrap()).unwrap(), Ty::Nat);
        // case-sum
        let cs = parse_computation("case s of { inl x => return x | inr y => return 0 }").unwrap();
        assert_eq!(check_comp(&sum_ctx, &cs).unwrap(), Ty::Nat);
        let cs_bad = parse_computation("case s of { inl x => return x | inr y => return y }").unwrap();
        assert!(check_comp(&sum_ctx, &cs_bad).is_err());
        // proj1 / proj2
        assert_eq!(check_comp(&pair_ctx, &parse_computation("fst p").unwrap()).unwrap(), Ty::Nat);
        assert!(check_comp(&nat_ctx, &parse_computation("fst n").unwrap()).is_err());
        assert_eq!(check_comp(&pair_ctx, &parse_computation("snd p").unwrap()).unwrap(), Ty::One);
        assert!(check_comp(&nat_ctx, &parse_computation("snd n").unwrap()).is_err());
        // app
        assert_eq!(
            check_comp(&empty, &parse_computation("(fn x : nat => return x) 4").unwrap()).unwrap(),
            Ty::Nat
        );
        assert!(check_comp(&nat_ctx, &parse_computation("n n").unwrap()).is_err());
        // case-nat
        let cn = parse_computation("case n of { zero => return 0 | suc m => return m }").unwrap();
        assert_eq!(check_comp(&nat_ctx, &cn).unwrap(), Ty::Nat);
        let cn_bad = parse_computation("case star of { zero => return 0 | suc m => return m }").unwrap();
        assert!(check_comp(&empty, &cn_bad).is_err());
        // let
        assert!(check_comp(&nat_ctx, &parse_computation("let y = return n in n y").unwrap()).is_err());
        // absurd
        assert_eq!(
            check_comp_expecting(&zero_ctx, &parse_computation("absurd z").unwrap(), Some(&Ty::Nat)).unwrap(),
            Ty::Nat
        );
        assert!(check_comp_expecting(&nat_ctx, &parse_computation("absurd n").unwrap(), Some(&Ty::Nat)).is_err());
    }

    #[test]
    fn absurd_in_branch_synthesises_from_sibling() {
        let ctx = TyCtx::of([("s".to_string(), ty("0 + nat"))]);
        let t = parse_computation("case s of { inl x => absurd x | inr y => return y }").unwrap();
        assert_eq!(check_comp(&ctx, &t).unwrap(), Ty::Nat);
    }

    // Substitution preserves typing: if Γ,x:τ ⊢c t : τ' and Γ ⊢v v : τ then
    // Γ ⊢c t[v/x] : τ'.
    #[test]
    fn substitution_lemma_samples() {
        let cases = [
            ("let y = return x in return suc y", "nat", "3", "nat"),
            ("case x of { zero => return star | suc y => return star }", "nat", "0", "1"),
            ("x 2", "nat -> nat", "fn w : nat => return suc w", "nat"),
            ("fst x", "nat * 1", "(4, star)", "nat"),
        ];
        for (body, xty, v, want) in cases {
            let t = parse_computation(body).unwrap();
            let xty = ty(xty);
            let v = parse_value(v).unwrap();
            let want = ty(want);
            let ctx = TyCtx::of([("x".to_string(), xty.clone())]);
            assert_eq!(check_comp(&ctx, &t).unwrap(), want);
            assert_eq!(check_value(&TyCtx::empty(), &v).unwrap(), xty);
            let substituted = crate::opsem::subst1(&t, "x", &v);
            assert_eq!(check_comp(&TyCtx::empty(), &substituted).unwrap(), want, "after substitution");
        }
    }

    #[test]
    fn shadowing_lookup_is_rightmost() {
        let ctx = TyCtx::of([("x".to_string(), Ty::Nat), ("x".to_string(), Ty::One)]);
        assert_eq!(ctx.lookup("x"), Some(&Ty::One));
    }
}
