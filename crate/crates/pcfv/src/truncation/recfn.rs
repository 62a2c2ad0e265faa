//! Bridge from `rec` terms to table functionals: unfolding a recursive
//! definition once against a candidate table gives the monotone functional
//! whose Kleene fixed point the evaluator's own semantics must agree with.

use super::basis::BasisRegistry;
use super::enumerate::realize;
use super::point::{Entry, Point, Table};
use super::tabulate::observe_closed;
use super::TruncError;
use crate::finmodel::{FnTable, Lifted};
use crate::opsem::{subst_comp, Subst};
use crate::syntax::{Computation, Ty, Value};

/// Convert a single-input tabulation into a plain function table.
/// `Exhausted` is folded into `Bot`: inside a Kleene iteration the candidate
/// tables contain genuine diverging leaves, and a fuel miss on them is the
/// approximation's honest bottom. The final fix-vs-direct comparison is what
/// validates this reading for a given corpus and fuel.
pub fn table_to_fn_table(t: &Table) -> Result<FnTable<Point, Point>, TruncError> {
    if t.in_tys.len() != 1 {
        return Err(TruncError::Internal(format!(
            "expected a single-input table, got {} inputs",
            t.in_tys.len()
        )));
    }
    Ok(FnTable {
        entries: t
            .entries
            .iter()
            .map(|(k, e)| {
                let out = match e {
                    Entry::Bottom | Entry::Exhausted => Lifted::Bot,
                    Entry::Converged(p) => Lifted::Val(p.clone()),
                };
                (k[0].clone(), out)
            })
            .collect(),
    })
}

/// The one-step unfolding functional of a `rec` value at the registry level.
pub struct RecFunctional {
    fname: String,
    param: String,
    arg_ty: Ty,
    ret_ty: Ty,
    body: Computation,
}

impl RecFunctional {
    /// The domain keys: basis points of the argument type.
    pub fn keys(&self, reg: &mut BasisRegistry) -> Result<Vec<Point>, TruncError> {
        Ok(reg.basis(&self.arg_ty)?.points().cloned().collect())
    }

    pub fn fn_ty(&self) -> Ty {
        Ty::arrow(self.arg_ty.clone(), self.ret_ty.clone())
    }

    /// Apply the functional to a candidate table: realize the table as a
    /// value, substitute it for the recursive name, and tabulate the body.
    pub fn apply(
        &self,
        table: &FnTable<Point, Point>,
        reg: &mut BasisRegistry,
    ) -> Result<FnTable<Point, Point>, TruncError> {
        let n = reg.level();
        let fn_ty = self.fn_ty();
        let as_table = Table {
            level: n,
            in_tys: vec![self.arg_ty.clone()],
            out_ty: self.ret_ty.clone(),
            basis_id: reg.basis(&self.arg_ty)?.id.clone(),
            entries: table
                .entries
                .iter()
                .map(|(k, v)| {
                    let e = match v {
                        Lifted::Bot => Entry::Bottom,
                        Lifted::Val(p) => Entry::Converged(p.clone()),
                    };
                    (vec![k.clone()], e)
                })
                .collect(),
        };
        let candidate = realize(&Point::Fun(Box::new(as_table)), &fn_ty, n)?;
        let basis = reg.basis(&self.arg_ty)?;
        let mut entries = Vec::with_capacity(basis.entries.len());
        for (p, rep) in basis.entries.clone() {
            let mut sub = Subst::new();
            sub.insert(self.fname.clone(), candidate.clone());
            sub.insert(self.param.clone(), rep);
            let closed = subst_comp(&self.body, &sub);
            let out = match observe_closed(&closed, &self.ret_ty, reg)? {
                Entry::Converged(q) => Lifted::Val(q),
                Entry::Bottom | Entry::Exhausted => Lifted::Bot,
            };
            entries.push((p, out));
        }
        Ok(FnTable { entries })
    }
}

/// Build the functional of a `rec` value. The function type must be in the
/// exact regime, since candidate tables have to be realized syntactically.
pub fn rec_functional(rec: &Value) -> Result<RecFunctional, TruncError> {
    match rec {
        Value::Rec { fname, param, param_ty, ret_ty, body } => {
            let fn_ty = Ty::arrow(param_ty.clone(), ret_ty.clone());
            if fn_ty.order() > 1 {
                return Err(TruncError::OrderTooHigh { ty: fn_ty.to_string(), order: fn_ty.order() });
            }
            Ok(RecFunctional {
                fname: fname.clone(),
                param: param.clone(),
                arg_ty: param_ty.clone(),
                ret_ty: ret_ty.clone(),
                body: (**body).clone(),
            })
        }
        other => Err(TruncError::Internal(format!("not a rec value: {other}"))),
    }
}
