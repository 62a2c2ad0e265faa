//! Finite truncations of types and everything built on them: the truncation
//! computations `psi`, canonical points of a truncated type, syntactic
//! realizers, tabulation of terms against finite bases, the equivalence /
//! distinguishing-context engine, and the approximation-chain checks.
//!
//! The truncated denotation of a term is computed operationally: run the term
//! with the reference evaluator and observe the result through `psi`-wrapping
//! at level `n`. Nothing infinite is ever materialised; fuel exhaustion is
//! reported as `Exhausted`, never silently read as divergence.

mod basis;
mod chain;
mod enumerate;
mod equiv;
mod point;
mod recfn;
mod tabulate;

pub use basis::{Basis, BasisParams, BasisRegistry};
pub use chain::{approx_chain_check, ChainReport, ChainViolation};
pub use enumerate::{enumerate_points, point_count, realize};
pub use equiv::{equiv, equiv_closed, Verdict};
pub use point::{Entry, Point, Table};
pub use recfn::{rec_functional, table_to_fn_table, RecFunctional};
pub use tabulate::{canonicalize_value, observe_closed, tabulate};

use crate::syntax::{Computation, Ty, Value};
use crate::typing::TypeError;
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum TruncError {
    #[error("type {ty} has order {order}; exact enumeration needs order <= 1 — use basis() instead")]
    OrderTooHigh { ty: String, order: usize },
    #[error("type {ty} has {count} points at this level, above the enumeration cap {cap}")]
    TooManyPoints { ty: String, count: u128, cap: u128 },
    #[error("cannot realize a table containing an Exhausted entry (only analytic tables realize)")]
    ExhaustedInRealizer,
    #[error("type error: {0}")]
    Type(#[from] TypeError),
    #[error("evaluator: {0}")]
    Eval(#[from] crate::opsem::EvalError),
    #[error("internal invariant broken: {0}")]
    Internal(String),
}

/// The canonical diverging computation at any type:
/// `(rec f (x : 1) : ty => f x) star`.
pub fn diverge(ty: Ty) -> Computation {
    Computation::App(
        Value::Rec {
            fname: "f".into(),
            param: "x".into(),
            param_ty: Ty::One,
            ret_ty: ty,
            body: Box::new(Computation::App(Value::Var("f".into()), Value::Var("x".into()))),
        },
        Value::Star,
    )
}

/// The free variable the `psi` computations are stated over.
pub const PSI_VAR: &str = "x";

/// The truncation computation `x : ty ⊢c psi(ty, n) : ty`.
///
/// At `nat` it is "if x <= n then x else diverge", spelled out as n+1 nested
/// case-peels that rebuild the numeral. At `0` and `1` it returns `x`. Sums
/// re-inject the truncated summand, products truncate componentwise, and an
/// arrow truncates the argument, applies, and truncates the result.
pub fn psi(ty: &Ty, n: u32) -> Computation {
    match ty {
        Ty::Zero | Ty::One => Computation::Ret(Value::Var(PSI_VAR.into())),
        Ty::Nat => psi_nat(Value::Var(PSI_VAR.into()), 0, n),
        Ty::Arrow(a, b) => {
            let arg_trunc = rename_psi(&psi(a, n), "u");
            let res_trunc = rename_psi(&psi(b, n), "w");
            let body = Computation::let_in(
                "v",
                arg_trunc,
                Computation::let_in(
                    "w",
                    Computation::App(Value::Var(PSI_VAR.into()), Value::Var("v".into())),
                    res_trunc,
                ),
            );
            Computation::Ret(Value::Lam { param: "u".into(), param_ty: (**a).clone(), body: Box::new(body) })
        }
        Ty::Sum(a, b) => Computation::CaseSum {
            scrutinee: Value::Var(PSI_VAR.into()),
            left_name: "y".into(),
            left: Box::new(Computation::let_in(
                "y'",
                rename_psi(&psi(a, n), "y"),
                Computation::Ret(Value::Inl(Box::new(Value::Var("y'".into())))),
            )),
            right_name: "z".into(),
            right: Box::new(Computation::let_in(
                "z'",
                rename_psi(&psi(b, n), "z"),
                Computation::Ret(Value::Inr(Box::new(Value::Var("z'".into())))),
            )),
        },
        Ty::Prod(a, b) => Computation::let_in(
            "y",
            Computation::Proj1(Value::Var(PSI_VAR.into())),
            Computation::let_in(
                "z",
                Computation::Proj2(Value::Var(PSI_VAR.into())),
                Computation::let_in(
                    "y'",
                    rename_psi(&psi(a, n), "y"),
                    Computation::let_in(
                        "z'",
                        rename_psi(&psi(b, n), "z"),
                        Computation::Ret(Value::Pair(
                            Box::new(Value::Var("y'".into())),
                            Box::new(Value::Var("z'".into())),
                        )),
                    ),
                ),
            ),
        ),
    }
}

/// `psi(ty, n)[v / x]`: the truncation applied to a concrete value.
pub fn psi_applied(ty: &Ty, n: u32, v: &Value) -> Computation {
    crate::opsem::subst1(&psi(ty, n), PSI_VAR, v)
}

fn rename_psi(p: &Computation, to: &str) -> Computation {
    crate::opsem::subst1(p, PSI_VAR, &Value::Var(to.into()))
}

fn psi_nat(scrut: Value, depth: u32, n: u32) -> Computation {
    // depth case-peels already done; rebuild the numeral or give up past n.
    if depth > n {
        return diverge(Ty::Nat);
    }
    let peeled = format!("x{}", depth + 1);
    Computation::CaseNat {
        scrutinee: scrut,
        zero: Box::new(Computation::Ret(Value::numeral(depth))),
        succ_name: peeled.clone(),
        succ: Box::new(psi_nat(Value::Var(peeled), depth + 1, n)),
    }
}
