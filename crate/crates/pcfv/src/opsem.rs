//! Capture-avoiding substitution and the fueled big-step evaluator.
//!
//! The evaluator consumes one fuel unit per derivation-rule application and
//! mirrors the substitution-based rules literally; it is the oracle all
//! table-building in this crate runs on. Running out of fuel is a resource
//! bound, never a divergence claim.

use crate::syntax::{free_vars_value, Computation, Ty, Value};
use crate::typing::{check_comp_expecting, TyCtx, TypeError};
use std::collections::BTreeMap;
use thiserror::Error;

/// Simultaneous substitution of values for variables.
pub type Subst = BTreeMap<String, Value>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("stuck at `{0}`: evaluating an ill-typed or open computation")]
    Stuck(String),
}

/// Outcome of a fueled run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EvalOutcome {
    Converged { value: Value, steps: u64 },
    Exhausted { fuel: u64 },
}

impl EvalOutcome {
    pub fn converged(&self) -> Option<&Value> {
        match self {
            EvalOutcome::Converged { value, .. } => Some(value),
            EvalOutcome::Exhausted { .. } => None,
        }
    }
}

fn fresh_name(base: &str, avoid: &dyn Fn(&str) -> bool) -> String {
    if !avoid(base) {
        return base.to_string();
    }
    for k in 0.. {
        let cand = format!("{base}_{k}");
        if !avoid(&cand) {
            return cand;
        }
    }
    unreachable!()
}

fn needs_rename(name: &str, sub: &Subst) -> bool {
    sub.values().any(|v| free_vars_value(v).contains(name))
}

/// Substitute under one binder: drop the bound name from the substitution and
/// α-rename it when it would capture a free variable of a substituted value.
fn under_binder(name: &str, body: &Computation, sub: &Subst) -> (String, Computation) {
    let mut inner: Subst = sub.clone();
    inner.remove(name);
    if inner.is_empty() {
        return (name.to_string(), body.clone());
    }
    if needs_rename(name, &inner) {
        let body_fv = crate::syntax::free_vars_computation(body);
        let avoid = |cand: &str| {
            body_fv.contains(cand)
                || inner.contains_key(cand)
                || inner.values().any(|v| free_vars_value(v).contains(cand))
        };
        let fresh = fresh_name(name, &avoid);
        let mut rename = Subst::new();
        rename.insert(name.to_string(), Value::Var(fresh.clone()));
        let renamed = subst_comp(body, &rename);
        (fresh, subst_comp(&renamed, &inner))
    } else {
        (name.to_string(), subst_comp(body, &inner))
    }
}

fn under_two_binders(a: &str, b: &str, body: &Computation, sub: &Subst) -> (String, String, Computation) {
    // Peel one binder at a time; encode the intermediate as a Let so we can
    // reuse `under_binder` for the outer name.
    let mut inner: Subst = sub.clone();
    inner.remove(a);
    inner.remove(b);
    if inner.is_empty() {
        return (a.to_string(), b.to_string(), body.clone());
    }
    let shell = Computation::Let {
        name: b.to_string(),
        bound: Box::new(Computation::Hole),
        body: Box::new(body.clone()),
    };
    let (a2, shell2) = under_binder(a, &shell, &inner);
    match shell2 {
        Computation::Let { name, body, .. } => (a2, name, *body),
        _ => unreachable!(),
    }
}

/// Apply a simultaneous substitution to a value.
pub fn subst_value(v: &Value, sub: &Subst) -> Value {
    if sub.is_empty() {
        return v.clone();
    }
    match v {
        Value::Var(x) => sub.get(x).cloned().unwrap_or_else(|| v.clone()),
        Value::Star | Value::Zero => v.clone(),
        Value::Inl(w) => Value::Inl(Box::new(subst_value(w, sub))),
        Value::Inr(w) => Value::Inr(Box::new(subst_value(w, sub))),
        Value::Suc(w) => Value::Suc(Box::new(subst_value(w, sub))),
        Value::Pair(a, b) => Value::Pair(Box::new(subst_value(a, sub)), Box::new(subst_value(b, sub))),
        Value::Lam { param, param_ty, body } => {
            let (param, body) = under_binder(param, body, sub);
            Value::Lam { param, param_ty: param_ty.clone(), body: Box::new(body) }
        }
        Value::Rec { fname, param, param_ty, ret_ty, body } => {
            let (fname, param, body) = under_two_binders(fname, param, body, sub);
            Value::Rec { fname, param, param_ty: param_ty.clone(), ret_ty: ret_ty.clone(), body: Box::new(body) }
        }
    }
}

/// Apply a simultaneous substitution to a computation.
pub fn subst_comp(t: &Computation, sub: &Subst) -> Computation {
    if sub.is_empty() {
        return t.clone();
    }
    match t {
        Computation::Ret(v) => Computation::Ret(subst_value(v, sub)),
        Computation::Proj1(v) => Computation::Proj1(subst_value(v, sub)),
        Computation::Proj2(v) => Computation::Proj2(subst_value(v, sub)),
        Computation::Absurd(v) => Computation::Absurd(subst_value(v, sub)),
        Computation::App(f, a) => Computation::App(subst_value(f, sub), subst_value(a, sub)),
        Computation::CaseSum { scrutinee, left_name, left, right_name, right } => {
            let scrutinee = subst_value(scrutinee, sub);
            let (left_name, left) = under_binder(left_name, left, sub);
            let (right_name, right) = under_binder(right_name, right, sub);
            Computation::CaseSum {
                scrutinee,
                left_name,
                left: Box::new(left),
                right_name,
                right: Box::new(right),
            }
        }
        Computation::CaseNat { scrutinee, zero, succ_name, succ } => {
            let scrutinee = subst_value(scrutinee, sub);
            let zero = subst_comp(zero, sub);
            let (succ_name, succ) = under_binder(succ_name, succ, sub);
            Computation::CaseNat { scrutinee, zero: Box::new(zero), succ_name, succ: Box::new(succ) }
        }
        Computation::Let { name, bound, body } => {
            let bound = subst_comp(bound, sub);
            let (name, body) = under_binder(name, body, sub);
            Computation::Let { name, bound: Box::new(bound), body: Box::new(body) }
        }
        Computation::Hole => Computation::Hole,
    }
}

/// Substitute a single value.
pub fn subst1(t: &Computation, name: &str, v: &Value) -> Computation {
    let mut sub = Subst::new();
    sub.insert(name.to_string(), v.clone());
    subst_comp(t, &sub)
}

struct Machine {
    remaining: u64,
}

enum Stepped {
    Value(Value),
    OutOfFuel,
}

impl Machine {
    fn run(&mut self, t: &Computation) -> Result<Stepped, EvalError> {
        // Tail-call style loop: every rule except `let` is a tail rule.
        let mut cur = t.clone();
        loop {
            if self.remaining == 0 {
                return Ok(Stepped::OutOfFuel);
            }
            self.remaining -= 1;
            match cur {
                Computation::Ret(v) => return Ok(Stepped::Value(v)),
                Computation::Proj1(Value::Pair(a, _)) => return Ok(Stepped::Value(*a)),
                Computation::Proj2(Value::Pair(_, b)) => return Ok(Stepped::Value(*b)),
                Computation::CaseSum { scrutinee: Value::Inl(v), left_name, left, .. } => {
                    cur = subst1(&left, &left_name, &v);
                }
                Computation::CaseSum { scrutinee: Value::Inr(v), right_name, right, .. } => {
                    cur = subst1(&right, &right_name, &v);
                }
                Computation::CaseNat { scrutinee: Value::Zero, zero, .. } => {
                    cur = *zero;
                }
                Computation::CaseNat { scrutinee: Value::Suc(v), succ_name, succ, .. } => {
                    cur = subst1(&succ, &succ_name, &v);
                }
                Computation::App(Value::Lam { param, body, .. }, arg) => {
                    cur = subst1(&body, &param, &arg);
                }
                Computation::App(rec @ Value::Rec { .. }, arg) => {
                    let Value::Rec { ref fname, ref param, ref body, .. } = rec else { unreachable!() };
                    let mut sub = Subst::new();
                    sub.insert(fname.clone(), rec.clone());
                    sub.insert(param.clone(), arg);
                    cur = subst_comp(body, &sub);
                }
                Computation::Let { name, bound, body } => {
                    match self.run(&bound)? {
                        Stepped::Value(v) => cur = subst1(&body, &name, &v),
                        Stepped::OutOfFuel => return Ok(Stepped::OutOfFuel),
                    }
                }
                other => return Err(EvalError::Stuck(other.to_string())),
            }
        }
    }
}

/// Evaluate a closed computation with the given fuel.
///
/// Deterministic, and monotone in fuel: a converged run converges to the same
/// value at any larger fuel.
pub fn eval(t: &Computation, fuel: u64) -> Result<EvalOutcome, EvalError> {
    let mut m = Machine { remaining: fuel };
    match m.run(t)? {
        Stepped::Value(value) => Ok(EvalOutcome::Converged { value, steps: fuel - m.remaining }),
        Stepped::OutOfFuel => Ok(EvalOutcome::Exhausted { fuel }),
    }
}

/// A computation with exactly one hole, together with the declared typing
/// interface of the hole. Plugging is literal: binders of the context capture
/// free variables of the plugged term, as contextual equivalence demands.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Context {
    pub body: Computation,
    pub hole_ctx: TyCtx,
    pub hole_ty: Ty,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ContextError {
    #[error("context has {0} holes, expected exactly one")]
    HoleCount(usize),
    #[error("context body: {0}")]
    Body(#[from] TypeError),
}

impl Context {
    pub fn new(body: Computation, hole_ctx: TyCtx, hole_ty: Ty) -> Result<Context, ContextError> {
        let holes = crate::syntax::count_holes(&body);
        if holes != 1 {
            return Err(ContextError::HoleCount(holes));
        }
        Ok(Context { body, hole_ctx, hole_ty })
    }

    /// The identity context `[.]`.
    pub fn identity(hole_ctx: TyCtx, hole_ty: Ty) -> Context {
        Context { body: Computation::Hole, hole_ctx, hole_ty }
    }
}

/// Replace the hole of `ctx` with `t`, capture-permitting.
pub fn plug(ctx: &Context, t: &Computation) -> Computation {
    fn go(c: &Computation, t: &Computation) -> Computation {
        match c {
            Computation::Hole => t.clone(),
            Computation::Ret(v) => Computation::Ret(go_value(v, t)),
            Computation::Proj1(v) => Computation::Proj1(go_value(v, t)),
            Computation::Proj2(v) => Computation::Proj2(go_value(v, t)),
            Computation::Absurd(v) => Computation::Absurd(go_value(v, t)),
            Computation::App(f, a) => Computation::App(go_value(f, t), go_value(a, t)),
            Computation::CaseSum { scrutinee, left_name, left, right_name, right } => {
                Computation::CaseSum {
                    scrutinee: go_value(scrutinee, t),
                    left_name: left_name.clone(),
                    left: Box::new(go(left, t)),
                    right_name: right_name.clone(),
                    right: Box::new(go(right, t)),
                }
            }
            Computation::CaseNat { scrutinee, zero, succ_name, succ } => Computation::CaseNat {
                scrutinee: go_value(scrutinee, t),
                zero: Box::new(go(zero, t)),
                succ_name: succ_name.clone(),
                succ: Box::new(go(succ, t)),
            },
            Computation::Let { name, bound, body } => Computation::Let {
                name: name.clone(),
                bound: Box::new(go(bound, t)),
                body: Box::new(go(body, t)),
            },
        }
    }
    fn go_value(v: &Value, t: &Computation) -> Value {
        match v {
            Value::Var(_) | Value::Star | Value::Zero => v.clone(),
            Value::Inl(w) => Value::Inl(Box::new(go_value(w, t))),
            Value::Inr(w) => Value::Inr(Box::new(go_value(w, t))),
            Value::Suc(w) => Value::Suc(Box::new(go_value(w, t))),
            Value::Pair(a, b) => Value::Pair(Box::new(go_value(a, t)), Box::new(go_value(b, t))),
            Value::Lam { param, param_ty, body } => Value::Lam {
                param: param.clone(),
                param_ty: param_ty.clone(),
                body: Box::new(go(body, t)),
            },
            Value::Rec { fname, param, param_ty, ret_ty, body } => Value::Rec {
                fname: fname.clone(),
                param: param.clone(),
                param_ty: param_ty.clone(),
                ret_ty: ret_ty.clone(),
                body: Box::new(go(body, t)),
            },
        }
    }
    go(&ctx.body, t)
}

/// Typecheck a context: the body must typecheck when the hole is filled by a
/// probe term that uses every declared hole binding at its declared type and
/// produces the hole type. Because plugging is capture-permitting, the probe's
/// variables must be bound by the context itself for the check to pass.
pub fn check_context(ctx: &Context, expected: Option<&Ty>) -> Result<Ty, TypeError> {
    let mut probe = crate::truncation::diverge(ctx.hole_ty.clone());
    for (i, (x, ty)) in ctx.hole_ctx.bindings().iter().enumerate().rev() {
        // `let _pi = (fn w : ty => return w) x in ...` forces `x : ty`.
        let force = Computation::App(
            Value::Lam {
                param: "w".into(),
                param_ty: ty.clone(),
                body: Box::new(Computation::Ret(Value::Var("w".into()))),
            },
            Value::Var(x.clone()),
        );
        probe = Computation::let_in(format!("_probe{i}"), force, probe);
    }
    let plugged = plug(ctx, &probe);
    check_comp_expecting(&TyCtx::empty(), &plugged, expected)
}
