//! Exact point enumeration and syntactic realizers for the order <= 1 regime,
//! where every Kleisli table between point sets is definable by dispatching
//! on the ground input.

use super::point::{Entry, Point, Table};
use super::{diverge, psi_applied, TruncError};
use crate::syntax::{Computation, Ty, Value};

/// Hard cap on materialised point sets; enumeration errors loudly above it.
pub const ENUMERATION_CAP: u128 = 1 << 20;

/// Number of points of the truncated type, saturating.
pub fn point_count(ty: &Ty, n: u32) -> u128 {
    match ty {
        Ty::Zero => 0,
        Ty::One => 1,
        Ty::Nat => (n as u128) + 1,
        Ty::Sum(a, b) => point_count(a, n).saturating_add(point_count(b, n)),
        Ty::Prod(a, b) => point_count(a, n).saturating_mul(point_count(b, n)),
        Ty::Arrow(a, b) => {
            let dom = point_count(a, n);
            let options = point_count(b, n).saturating_add(1);
            let mut acc: u128 = 1;
            for _ in 0..dom.min(256) {
                acc = acc.saturating_mul(options);
                if acc >= u128::MAX / 2 {
                    return u128::MAX;
                }
            }
            if dom > 256 {
                u128::MAX
            } else {
                acc
            }
        }
    }
}

fn basis_id_exact(ty: &Ty, n: u32) -> String {
    format!("{ty}@{n}")
}

/// All points of the truncated type in canonical order. Requires order <= 1.
pub fn enumerate_points(ty: &Ty, n: u32) -> Result<Vec<Point>, TruncError> {
    if ty.order() > 1 {
        return Err(TruncError::OrderTooHigh { ty: ty.to_string(), order: ty.order() });
    }
    let count = point_count(ty, n);
    if count > ENUMERATION_CAP {
        return Err(TruncError::TooManyPoints { ty: ty.to_string(), count, cap: ENUMERATION_CAP });
    }
    Ok(enumerate_unchecked(ty, n))
}

fn enumerate_unchecked(ty: &Ty, n: u32) -> Vec<Point> {
    match ty {
        Ty::Zero => vec![],
        Ty::One => vec![Point::Unit],
        Ty::Nat => (0..=n).map(Point::Nat).collect(),
        Ty::Sum(a, b) => {
            let mut out: Vec<Point> = enumerate_unchecked(a, n)
                .into_iter()
                .map(|p| Point::Inl(Box::new(p)))
                .collect();
            out.extend(enumerate_unchecked(b, n).into_iter().map(|p| Point::Inr(Box::new(p))));
            out
        }
        Ty::Prod(a, b) => {
            let left = enumerate_unchecked(a, n);
            let right = enumerate_unchecked(b, n);
            let mut out = Vec::with_capacity(left.len() * right.len());
            for l in &left {
                for r in &right {
                    out.push(Point::Pair(Box::new(l.clone()), Box::new(r.clone())));
                }
            }
            out
        }
        Ty::Arrow(a, b) => {
            let dom = enumerate_unchecked(a, n);
            let mut options: Vec<Entry> = vec![Entry::Bottom];
            options.extend(enumerate_unchecked(b, n).into_iter().map(Entry::Converged));
            // Odometer with the last key fastest: lexicographic ascending.
            let mut out = Vec::new();
            let mut idx = vec![0usize; dom.len()];
            loop {
                let entries: Vec<(Vec<Point>, Entry)> = dom
                    .iter()
                    .zip(&idx)
                    .map(|(p, &i)| (vec![p.clone()], options[i].clone()))
                    .collect();
                out.push(Point::Fun(Box::new(Table {
                    level: n,
                    in_tys: vec![(**a).clone()],
                    out_ty: (**b).clone(),
                    basis_id: basis_id_exact(a, n),
                    entries,
                })));
                let mut pos = idx.len();
                loop {
                    if pos == 0 {
                        return out;
                    }
                    pos -= 1;
                    idx[pos] += 1;
                    if idx[pos] < options.len() {
                        break;
                    }
                    idx[pos] = 0;
                }
            }
        }
    }
}

/// A closed value whose tabulation at level `n` reproduces `p`.
///
/// Ground points realize structurally; function points realize as a decision
/// tree on the ground argument with a diverging leaf per `Bottom` entry, each
/// leaf post-composed with the codomain truncation.
pub fn realize(p: &Point, ty: &Ty, n: u32) -> Result<Value, TruncError> {
    if ty.order() > 1 {
        return Err(TruncError::OrderTooHigh { ty: ty.to_string(), order: ty.order() });
    }
    realize_unchecked(p, ty, n)
}

fn realize_unchecked(p: &Point, ty: &Ty, n: u32) -> Result<Value, TruncError> {
    match (p, ty) {
        (Point::Unit, Ty::One) => Ok(Value::Star),
        (Point::Nat(k), Ty::Nat) => Ok(Value::numeral(*k)),
        (Point::Inl(q), Ty::Sum(a, _)) => Ok(Value::Inl(Box::new(realize_unchecked(q, a, n)?))),
        (Point::Inr(q), Ty::Sum(_, b)) => Ok(Value::Inr(Box::new(realize_unchecked(q, b, n)?))),
        (Point::Pair(l, r), Ty::Prod(a, b)) => Ok(Value::Pair(
            Box::new(realize_unchecked(l, a, n)?),
            Box::new(realize_unchecked(r, b, n)?),
        )),
        (Point::Fun(table), Ty::Arrow(a, b)) => {
            let counter = std::cell::Cell::new(0usize);
            let dom: Vec<&Point> = table.entries.iter().map(|(k, _)| &k[0]).collect();
            let lookup = |q: &Point| -> Result<Computation, TruncError> {
                let idx = dom
                    .iter()
                    .position(|d| *d == q)
                    .ok_or_else(|| TruncError::Internal(format!("point {} missing from table", q.brief())))?;
                match &table.entries[idx].1 {
                    Entry::Bottom => Ok(diverge((**b).clone())),
                    Entry::Exhausted => Err(TruncError::ExhaustedInRealizer),
                    Entry::Converged(out) => {
                        let out_v = realize_unchecked(out, b, n)?;
                        Ok(psi_applied(b, n, &out_v))
                    }
                }
            };
            let body = dispatch(Value::Var("x".into()), a, b, n, &counter, &lookup)?;
            Ok(Value::Lam { param: "x".into(), param_ty: (**a).clone(), body: Box::new(body) })
        }
        _ => Err(TruncError::Internal(format!("point {} does not inhabit {}", p.brief(), ty))),
    }
}

/// Build the ground-dispatch decision tree over `scrut : arg_ty`, invoking
/// `leaf` with the identified argument point.
fn dispatch(
    scrut: Value,
    arg_ty: &Ty,
    out_ty: &Ty,
    n: u32,
    counter: &std::cell::Cell<usize>,
    leaf: &dyn Fn(&Point) -> Result<Computation, TruncError>,
) -> Result<Computation, TruncError> {
    let fresh = || {
        let k = counter.get();
        counter.set(k + 1);
        format!("d{k}")
    };
    match arg_ty {
        Ty::Zero => Ok(Computation::Absurd(scrut)),
        Ty::One => leaf(&Point::Unit),
        Ty::Nat => peel_nat(scrut, 0, n, out_ty, counter, leaf),
        Ty::Sum(a, b) => {
            let ln = fresh();
            let rn = fresh();
            let left = dispatch(Value::Var(ln.clone()), a, out_ty, n, counter, &|p| {
                leaf(&Point::Inl(Box::new(p.clone())))
            })?;
            let right = dispatch(Value::Var(rn.clone()), b, out_ty, n, counter, &|p| {
                leaf(&Point::Inr(Box::new(p.clone())))
            })?;
            Ok(Computation::CaseSum {
                scrutinee: scrut,
                left_name: ln,
                left: Box::new(left),
                right_name: rn,
                right: Box::new(right),
            })
        }
        Ty::Prod(a, b) => {
            let fst = fresh();
            let snd = fresh();
            let inner = dispatch(Value::Var(fst.clone()), a, out_ty, n, counter, &|pl| {
                let pl = pl.clone();
                dispatch(Value::Var(snd.clone()), b, out_ty, n, counter, &|pr| {
                    leaf(&Point::Pair(Box::new(pl.clone()), Box::new(pr.clone())))
                })
            })?;
            Ok(Computation::let_in(
                fst.clone(),
                Computation::Proj1(scrut.clone()),
                Computation::let_in(snd, Computation::Proj2(scrut), inner),
            ))
        }
        Ty::Arrow(..) => Err(TruncError::OrderTooHigh { ty: arg_ty.to_string(), order: arg_ty.order() }),
    }
}

/// Peel up to n sucs off a nat scrutinee; anything deeper is outside the
/// level and diverges.
fn peel_nat(
    scrut: Value,
    depth: u32,
    n: u32,
    out_ty: &Ty,
    counter: &std::cell::Cell<usize>,
    leaf: &dyn Fn(&Point) -> Result<Computation, TruncError>,
) -> Result<Computation, TruncError> {
    if depth > n {
        return Ok(diverge(out_ty.clone()));
    }
    let k = counter.get();
    counter.set(k + 1);
    let name = format!("d{k}");
    Ok(Computation::CaseNat {
        scrutinee: scrut,
        zero: Box::new(leaf(&Point::Nat(depth))?),
        succ_name: name.clone(),
        succ: Box::new(peel_nat(Value::Var(name), depth + 1, n, out_ty, counter, leaf)?),
    })
}
