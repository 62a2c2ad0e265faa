//! Tabulation: the observable content of a term at a finite level.
//!
//! For each tuple of basis representatives for the context, the term is run
//! through the evaluator with its result observed through the level-n
//! truncation. Function results are read back by applying them to basis
//! representatives, each application again truncation-wrapped and fueled.

use super::basis::BasisRegistry;
use super::point::{Entry, Point, Table};
use super::{psi_applied, TruncError};
use crate::opsem::{eval, subst_comp, EvalOutcome, Subst};
use crate::syntax::{Computation, Ty, Value};
use crate::typing::{check_comp_expecting, TyCtx};

/// Observe a closed computation of type `ty` at the registry's level: run
/// `let y = t in psi[y/x]` and canonicalize the result.
pub fn observe_closed(t: &Computation, ty: &Ty, reg: &mut BasisRegistry) -> Result<Entry, TruncError> {
    let wrapped = Computation::let_in(
        "y0",
        t.clone(),
        psi_applied(ty, reg.level(), &Value::Var("y0".into())),
    );
    match eval(&wrapped, reg.fuel())? {
        EvalOutcome::Exhausted { .. } => Ok(Entry::Exhausted),
        EvalOutcome::Converged { value, .. } => Ok(Entry::Converged(canonicalize_value(&value, ty, reg)?)),
    }
}

/// Canonicalize an already-truncated closed value into a point. Ground values
/// read back structurally; functions are probed on every basis point of the
/// argument type.
pub fn canonicalize_value(v: &Value, ty: &Ty, reg: &mut BasisRegistry) -> Result<Point, TruncError> {
    match ty {
        Ty::Zero => Err(TruncError::Internal("a closed value of type 0 cannot exist".into())),
        Ty::One => Ok(Point::Unit),
        Ty::Nat => {
            let k = v
                .as_numeral()
                .ok_or_else(|| TruncError::Internal(format!("non-numeral nat value {v}")))?;
            if k > reg.level() {
                return Err(TruncError::Internal(format!(
                    "numeral {k} above level {}: truncation wrapper missing",
                    reg.level()
                )));
            }
            Ok(Point::Nat(k))
        }
        Ty::Sum(a, b) => match v {
            Value::Inl(w) => Ok(Point::Inl(Box::new(canonicalize_value(w, a, reg)?))),
            Value::Inr(w) => Ok(Point::Inr(Box::new(canonicalize_value(w, b, reg)?))),
            other => Err(TruncError::Internal(format!("non-injection sum value {other}"))),
        },
        Ty::Prod(a, b) => match v {
            Value::Pair(l, r) => Ok(Point::Pair(
                Box::new(canonicalize_value(l, a, reg)?),
                Box::new(canonicalize_value(r, b, reg)?),
            )),
            other => Err(TruncError::Internal(format!("non-pair product value {other}"))),
        },
        Ty::Arrow(a, b) => {
            let basis = reg.basis(a)?;
            let mut entries = Vec::with_capacity(basis.entries.len());
            for (p, rep) in basis.entries.clone() {
                let app = Computation::App(v.clone(), rep);
                let entry = observe_closed(&app, b, reg)?;
                entries.push((vec![p], entry));
            }
            Ok(Point::Fun(Box::new(Table {
                level: reg.level(),
                in_tys: vec![(**a).clone()],
                out_ty: (**b).clone(),
                basis_id: basis.id.clone(),
                entries,
            })))
        }
    }
}

/// Tabulate `ctx ⊢c t : out_ty` over all tuples of basis representatives.
pub fn tabulate(
    ctx: &TyCtx,
    t: &Computation,
    out_ty: &Ty,
    reg: &mut BasisRegistry,
) -> Result<Table, TruncError> {
    check_comp_expecting(ctx, t, Some(out_ty))?;
    let bindings = ctx.bindings().to_vec();
    let mut bases = Vec::with_capacity(bindings.len());
    for (_, ty) in &bindings {
        bases.push(reg.basis(ty)?);
    }
    let mut basis_id = String::from("[");
    for (i, b) in bases.iter().enumerate() {
        if i > 0 {
            basis_id.push(';');
        }
        basis_id.push_str(&b.id);
    }
    basis_id.push(']');

    let mut entries = Vec::new();
    let sizes: Vec<usize> = bases.iter().map(|b| b.entries.len()).collect();
    if sizes.iter().any(|&s| s == 0) && !sizes.is_empty() {
        // A context with an empty basis (type 0) has no rows.
        return Ok(Table {
            level: reg.level(),
            in_tys: bindings.iter().map(|(_, ty)| ty.clone()).collect(),
            out_ty: out_ty.clone(),
            basis_id,
            entries,
        });
    }
    let mut idx = vec![0usize; bindings.len()];
    loop {
        let mut sub = Subst::new();
        let mut key = Vec::with_capacity(bindings.len());
        for (slot, (name, _)) in bindings.iter().enumerate() {
            let (p, rep) = &bases[slot].entries[idx[slot]];
            sub.insert(name.clone(), rep.clone());
            key.push(p.clone());
        }
        let closed = subst_comp(t, &sub);
        let entry = observe_closed(&closed, out_ty, reg)?;
        entries.push((key, entry));
        // Odometer, last position fastest: canonical lexicographic order.
        let mut pos = idx.len();
        loop {
            if pos == 0 {
                return Ok(Table {
                    level: reg.level(),
                    in_tys: bindings.iter().map(|(_, ty)| ty.clone()).collect(),
                    out_ty: out_ty.clone(),
                    basis_id,
                    entries,
                });
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < sizes[pos] {
                break;
            }
            idx[pos] = 0;
        }
    }
}
