//! Bases: the inputs tabulation ranges over.
//!
//! At order <= 1 (and feasible size) a basis is exact: every point of the
//! truncated type, each with its canonical realizer. At higher order exact
//! enumeration would require deciding definability, so the basis is seeded
//! from a bounded-exhaustive enumeration of closed values instead, tabulated
//! and deduplicated; the `exact` flag records which regime produced it.

use super::enumerate::{enumerate_points, point_count, realize, ENUMERATION_CAP};
use super::point::Point;
use super::tabulate::canonicalize_value;
use super::{diverge, TruncError};
use crate::syntax::{Computation, Ty, Value};
use std::collections::BTreeMap;
use std::rc::Rc;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasisParams {
    pub level: u32,
    pub fuel: u64,
    pub budget: usize,
}

impl BasisParams {
    pub fn new(level: u32, fuel: u64, budget: usize) -> BasisParams {
        BasisParams { level, fuel, budget }
    }
}

/// An ordered list of (point, representative closed value) pairs for one type
/// at one level.
#[derive(Debug, Clone)]
pub struct Basis {
    pub ty: Ty,
    pub level: u32,
    pub exact: bool,
    pub id: String,
    pub entries: Vec<(Point, Value)>,
}

impl Basis {
    pub fn points(&self) -> impl Iterator<Item = &Point> {
        self.entries.iter().map(|(p, _)| p)
    }

    pub fn position(&self, p: &Point) -> Option<usize> {
        self.entries.iter().position(|(q, _)| q == p)
    }
}

/// Memoises bases per type for a fixed (level, fuel, budget) configuration.
pub struct BasisRegistry {
    pub params: BasisParams,
    cache: BTreeMap<Ty, Rc<Basis>>,
}

impl BasisRegistry {
    pub fn new(params: BasisParams) -> BasisRegistry {
        BasisRegistry { params, cache: BTreeMap::new() }
    }

    pub fn level(&self) -> u32 {
        self.params.level
    }

    pub fn fuel(&self) -> u64 {
        self.params.fuel
    }

    pub fn basis(&mut self, ty: &Ty) -> Result<Rc<Basis>, TruncError> {
        if let Some(b) = self.cache.get(ty) {
            return Ok(b.clone());
        }
        let built = Rc::new(self.build(ty)?);
        self.cache.insert(ty.clone(), built.clone());
        Ok(built)
    }

    fn build(&mut self, ty: &Ty) -> Result<Basis, TruncError> {
        let n = self.params.level;
        if ty.order() <= 1 && point_count(ty, n) <= ENUMERATION_CAP {
            let points = enumerate_points(ty, n)?;
            let mut entries = Vec::with_capacity(points.len());
            for p in points {
                let v = realize(&p, ty, n)?;
                entries.push((p, v));
            }
            return Ok(Basis {
                ty: ty.clone(),
                level: n,
                exact: true,
                id: format!("{ty}@{n}"),
                entries,
            });
        }
        // Budget regime: enumerate candidate closed values, tabulate each,
        // keep one representative per distinct observed point.
        let budget = self.params.budget;
        let mut candidates = Vec::new();
        gen_values(ty, n, budget, &mut candidates);
        let mut seen: BTreeMap<Point, Value> = BTreeMap::new();
        for v in candidates {
            let p = canonicalize_value(&v, ty, self)?;
            seen.entry(p).or_insert(v);
        }
        let entries: Vec<(Point, Value)> = seen.into_iter().collect();
        Ok(Basis {
            ty: ty.clone(),
            level: n,
            exact: false,
            id: format!("{ty}@{n}~b{budget}"),
            entries,
        })
    }
}

/// Node-count size with the diverging gadget counted as one generator leaf.
fn gen_values(ty: &Ty, n: u32, budget: usize, out: &mut Vec<Value>) {
    if budget == 0 {
        return;
    }
    match ty {
        Ty::Zero => {}
        Ty::One => out.push(Value::Star),
        Ty::Nat => {
            for k in 0..=n.min(budget.saturating_sub(1) as u32) {
                out.push(Value::numeral(k));
            }
        }
        Ty::Sum(a, b) => {
            let mut inner = Vec::new();
            gen_values(a, n, budget - 1, &mut inner);
            out.extend(inner.into_iter().map(|v| Value::Inl(Box::new(v))));
            let mut inner = Vec::new();
            gen_values(b, n, budget - 1, &mut inner);
            out.extend(inner.into_iter().map(|v| Value::Inr(Box::new(v))));
        }
        Ty::Prod(a, b) => {
            let mut left = Vec::new();
            gen_values(a, n, budget.saturating_sub(2), &mut left);
            for l in left {
                let used = 1 + size_value(&l);
                let mut right = Vec::new();
                gen_values(b, n, budget.saturating_sub(used), &mut right);
                for r in right {
                    out.push(Value::Pair(Box::new(l.clone()), Box::new(r)));
                }
            }
        }
        Ty::Arrow(a, b) => {
            let ctx = vec![("g0".to_string(), (**a).clone())];
            let mut bodies = Vec::new();
            gen_comps(&ctx, b, n, budget - 1, &mut bodies);
            out.extend(bodies.into_iter().map(|body| Value::Lam {
                param: "g0".into(),
                param_ty: (**a).clone(),
                body: Box::new(body),
            }));
        }
    }
}

fn gen_comps(ctx: &[(String, Ty)], ty: &Ty, n: u32, budget: usize, out: &mut Vec<Computation>) {
    if budget == 0 {
        return;
    }
    // The diverging leaf.
    out.push(diverge(ty.clone()));
    // return v
    let mut vals = Vec::new();
    gen_open_values(ctx, ty, n, budget.saturating_sub(1), &mut vals);
    out.extend(vals.into_iter().map(Computation::Ret));
    // Eliminations driven by context variables.
    for (x, xty) in ctx {
        match xty {
            Ty::Arrow(dom, cod) => {
                // Direct application, and application sequenced into a body.
                let mut args = Vec::new();
                gen_open_values(ctx, dom, n, budget.saturating_sub(2), &mut args);
                for arg in args {
                    let app = Computation::App(Value::Var(x.clone()), arg.clone());
                    if **cod == *ty {
                        out.push(app.clone());
                    }
                    let used = 2 + size_value(&arg);
                    if budget > used + 1 {
                        let name = format!("g{}", ctx.len());
                        let mut inner_ctx = ctx.to_vec();
                        inner_ctx.push((name.clone(), (**cod).clone()));
                        let mut bodies = Vec::new();
                        gen_comps(&inner_ctx, ty, n, budget - used - 1, &mut bodies);
                        out.extend(bodies.into_iter().map(|body| Computation::let_in(name.clone(), app.clone(), body)));
                    }
                }
            }
            Ty::Nat => {
                if budget >= 4 {
                    let name = format!("g{}", ctx.len());
                    let mut inner_ctx = ctx.to_vec();
                    inner_ctx.push((name.clone(), Ty::Nat));
                    let mut zeros = Vec::new();
                    gen_comps(ctx, ty, n, (budget - 2) / 2, &mut zeros);
                    let mut sucs = Vec::new();
                    gen_comps(&inner_ctx, ty, n, (budget - 2) / 2, &mut sucs);
                    for z in &zeros {
                        for s in &sucs {
                            out.push(Computation::CaseNat {
                                scrutinee: Value::Var(x.clone()),
                                zero: Box::new(z.clone()),
                                succ_name: name.clone(),
                                succ: Box::new(s.clone()),
                            });
                        }
                    }
                }
            }
            Ty::Sum(l, r) => {
                if budget >= 4 {
                    let ln = format!("g{}", ctx.len());
                    let rn = format!("g{}'", ctx.len());
                    let mut lctx = ctx.to_vec();
                    lctx.push((ln.clone(), (**l).clone()));
                    let mut rctx = ctx.to_vec();
                    rctx.push((rn.clone(), (**r).clone()));
                    let mut lefts = Vec::new();
                    gen_comps(&lctx, ty, n, (budget - 2) / 2, &mut lefts);
                    let mut rights = Vec::new();
                    gen_comps(&rctx, ty, n, (budget - 2) / 2, &mut rights);
                    for lc in &lefts {
                        for rc in &rights {
                            out.push(Computation::CaseSum {
                                scrutinee: Value::Var(x.clone()),
                                left_name: ln.clone(),
                                left: Box::new(lc.clone()),
                                right_name: rn.clone(),
                                right: Box::new(rc.clone()),
                            });
                        }
                    }
                }
            }
            Ty::Prod(l, _) => {
                if budget >= 3 {
                    let name = format!("g{}", ctx.len());
                    let mut inner_ctx = ctx.to_vec();
                    inner_ctx.push((name.clone(), (**l).clone()));
                    let mut bodies = Vec::new();
                    gen_comps(&inner_ctx, ty, n, budget - 2, &mut bodies);
                    out.extend(bodies.into_iter().map(|body| {
                        Computation::let_in(name.clone(), Computation::Proj1(Value::Var(x.clone())), body)
                    }));
                }
            }
            Ty::Zero => out.push(Computation::Absurd(Value::Var(x.clone()))),
            Ty::One => {}
        }
    }
}

fn gen_open_values(ctx: &[(String, Ty)], ty: &Ty, n: u32, budget: usize, out: &mut Vec<Value>) {
    for (x, xty) in ctx {
        if xty == ty {
            out.push(Value::Var(x.clone()));
        }
    }
    gen_values(ty, n, budget, out);
}

fn size_value(v: &Value) -> usize {
    match v {
        Value::Var(_) | Value::Star | Value::Zero => 1,
        Value::Inl(w) | Value::Inr(w) | Value::Suc(w) => 1 + size_value(w),
        Value::Pair(a, b) => 1 + size_value(a) + size_value(b),
        Value::Lam { body, .. } => 1 + size_comp(body),
        Value::Rec { body, .. } => 1 + size_comp(body),
    }
}

fn size_comp(t: &Computation) -> usize {
    match t {
        Computation::Ret(v) | Computation::Proj1(v) | Computation::Proj2(v) | Computation::Absurd(v) => {
            1 + size_value(v)
        }
        Computation::App(f, a) => 1 + size_value(f) + size_value(a),
        Computation::CaseSum { scrutinee, left, right, .. } => {
            1 + size_value(scrutinee) + size_comp(left) + size_comp(right)
        }
        Computation::CaseNat { scrutinee, zero, succ, .. } => {
            1 + size_value(scrutinee) + size_comp(zero) + size_comp(succ)
        }
        Computation::Let { bound, body, .. } => 1 + size_comp(bound) + size_comp(body),
        Computation::Hole => 1,
    }
}
