//! Entry-by-entry comparison of tabulations, descending into function
//! structure, with distinguishing contexts synthesised from the basis
//! representatives along the differing path and re-verified by evaluation.

use super::basis::BasisRegistry;
use super::point::{Entry, Point};
use super::{diverge, psi_applied, TruncError};
use crate::opsem::{eval, plug, Context, EvalOutcome};
use crate::syntax::{Computation, Ty, Value};
use crate::typing::TyCtx;

/// Result of an equivalence probe. `NoDifferenceFound` is relative to the
/// search parameters, never a proof; `CandidateDifferent` records a
/// convergence-versus-fuel-exhaustion asymmetry that only more fuel could
/// settle, so it is reported unconfirmed.
#[derive(Debug, Clone)]
pub enum Verdict {
    ConfirmedDifferent {
        witness: Context,
        observation_left: Value,
        observation_right: Value,
    },
    CandidateDifferent {
        entry_path: String,
    },
    NoDifferenceFound {
        level: u32,
        fuel: u64,
        budget: usize,
    },
}

impl Verdict {
    /// Process exit code used by the CLI.
    pub fn code(&self) -> i32 {
        match self {
            Verdict::NoDifferenceFound { .. } => 0,
            Verdict::ConfirmedDifferent { .. } => 4,
            Verdict::CandidateDifferent { .. } => 5,
        }
    }
}

#[derive(Debug, Clone)]
enum Step {
    /// Apply to a basis representative of the argument type, then truncate
    /// the output, mirroring what tabulation did to descend here.
    Arg { arg_ty: Ty, out_ty: Ty, point: Point },
    Fst,
    Snd,
    /// Descend into the stated summand; anything else diverges.
    Case { left: bool },
}

#[derive(Debug, Clone, Copy)]
enum Leaf {
    /// Distinct numerals: observe the value itself.
    NatDiff,
    /// Distinct injection tags: observe 0 for inl, 1 for inr.
    TagDiff,
}

#[derive(Debug, Clone)]
struct GroundDiff {
    /// Context variables bound to the row's representatives.
    row: Vec<(String, Value)>,
    steps: Vec<Step>,
    leaf: Leaf,
}

enum Diff {
    Ground(GroundDiff),
    Candidate(String),
}

/// Compare two computations under a shared context at the registry's level.
pub fn equiv(
    t_left: &Computation,
    t_right: &Computation,
    ctx: &TyCtx,
    ty: &Ty,
    reg: &mut BasisRegistry,
) -> Result<Verdict, TruncError> {
    let left = super::tabulate(ctx, t_left, ty, reg)?;
    let right = super::tabulate(ctx, t_right, ty, reg)?;
    let bindings = ctx.bindings().to_vec();
    let mut diffs = Vec::new();
    for ((key_l, entry_l), (key_r, entry_r)) in left.entries.iter().zip(right.entries.iter()) {
        debug_assert_eq!(key_l, key_r);
        let mut row = Vec::new();
        for ((name, bty), p) in bindings.iter().zip(key_l.iter()) {
            let rep = rep_for(reg, bty, p)?;
            row.push((name.clone(), rep));
        }
        let path = if key_l.is_empty() {
            "entry".to_string()
        } else {
            format!("row[{}]", key_l.iter().map(Point::brief).collect::<Vec<_>>().join(","))
        };
        compare_entries(entry_l, entry_r, ty, &row, &mut Vec::new(), &path, &mut diffs);
    }

    for d in &diffs {
        if let Diff::Ground(g) = d {
            if let Some(v) = verify_witness(t_left, t_right, ty, g, reg)? {
                return Ok(v);
            }
        }
    }
    for d in &diffs {
        if let Diff::Candidate(path) = d {
            return Ok(Verdict::CandidateDifferent { entry_path: path.clone() });
        }
    }
    Ok(Verdict::NoDifferenceFound {
        level: reg.level(),
        fuel: reg.fuel(),
        budget: reg.params.budget,
    })
}

/// Equivalence of closed computations.
pub fn equiv_closed(
    t_left: &Computation,
    t_right: &Computation,
    ty: &Ty,
    reg: &mut BasisRegistry,
) -> Result<Verdict, TruncError> {
    equiv(t_left, t_right, &TyCtx::empty(), ty, reg)
}

fn rep_for(reg: &mut BasisRegistry, ty: &Ty, p: &Point) -> Result<Value, TruncError> {
    reg.basis(ty)?
        .entries
        .iter()
        .find(|(q, _)| q == p)
        .map(|(_, v)| v.clone())
        .ok_or_else(|| TruncError::Internal(format!("point {} missing from basis of {ty}", p.brief())))
}

fn compare_entries(
    l: &Entry,
    r: &Entry,
    ty: &Ty,
    row: &[(String, Value)],
    steps: &mut Vec<Step>,
    path: &str,
    diffs: &mut Vec<Diff>,
) {
    match (l, r) {
        (Entry::Exhausted, Entry::Exhausted) | (Entry::Bottom, Entry::Bottom) => {}
        (Entry::Converged(p), Entry::Converged(q)) => compare_points(p, q, ty, row, steps, path, diffs),
        _ => diffs.push(Diff::Candidate(format!("{path}: {} vs {}", l.brief(), r.brief()))),
    }
}

fn compare_points(
    p: &Point,
    q: &Point,
    ty: &Ty,
    row: &[(String, Value)],
    steps: &mut Vec<Step>,
    path: &str,
    diffs: &mut Vec<Diff>,
) {
    if p == q {
        return;
    }
    match (p, q, ty) {
        (Point::Nat(a), Point::Nat(b), Ty::Nat) if a != b => {
            diffs.push(Diff::Ground(GroundDiff { row: row.to_vec(), steps: steps.clone(), leaf: Leaf::NatDiff }));
        }
        (Point::Inl(a), Point::Inl(b), Ty::Sum(tl, _)) => {
            steps.push(Step::Case { left: true });
            compare_points(a, b, tl, row, steps, &format!("{path}.inl"), diffs);
            steps.pop();
        }
        (Point::Inr(a), Point::Inr(b), Ty::Sum(_, tr)) => {
            steps.push(Step::Case { left: false });
            compare_points(a, b, tr, row, steps, &format!("{path}.inr"), diffs);
            steps.pop();
        }
        (Point::Inl(_), Point::Inr(_), Ty::Sum(..)) | (Point::Inr(_), Point::Inl(_), Ty::Sum(..)) => {
            diffs.push(Diff::Ground(GroundDiff { row: row.to_vec(), steps: steps.clone(), leaf: Leaf::TagDiff }));
        }
        (Point::Pair(a1, a2), Point::Pair(b1, b2), Ty::Prod(tl, tr)) => {
            if a1 != b1 {
                steps.push(Step::Fst);
                compare_points(a1, b1, tl, row, steps, &format!("{path}.fst"), diffs);
                steps.pop();
            }
            if a2 != b2 {
                steps.push(Step::Snd);
                compare_points(a2, b2, tr, row, steps, &format!("{path}.snd"), diffs);
                steps.pop();
            }
        }
        (Point::Fun(tp), Point::Fun(tq), Ty::Arrow(ta, tb)) => {
            for ((key_l, el), (key_r, er)) in tp.entries.iter().zip(tq.entries.iter()) {
                debug_assert_eq!(key_l, key_r);
                if el == er {
                    continue;
                }
                steps.push(Step::Arg {
                    arg_ty: (**ta).clone(),
                    out_ty: (**tb).clone(),
                    point: key_l[0].clone(),
                });
                compare_entries(el, er, tb, row, steps, &format!("{path}({})", key_l[0].brief()), diffs);
                steps.pop();
            }
        }
        _ => diffs.push(Diff::Candidate(format!("{path}: incomparable points"))),
    }
}

/// Observation chain from variable `var` (holding the value at the current
/// path position) down to a ground nat observation. Each Arg step replays
/// exactly what tabulation did to descend: apply to the representative, then
/// truncate the output. Binder names never clash with anything the plugged
/// term can see, because the hole sits above the whole chain.
fn build_obs_resolved(
    steps: &[(Step, Option<Value>)],
    leaf: Leaf,
    var: &str,
    depth: usize,
    n: u32,
) -> Computation {
    let Some(((step, rep), rest)) = steps.split_first() else {
        return match leaf {
            Leaf::NatDiff => Computation::Ret(Value::Var(var.into())),
            Leaf::TagDiff => Computation::CaseSum {
                scrutinee: Value::Var(var.into()),
                left_name: "u".into(),
                left: Box::new(Computation::Ret(Value::numeral(0))),
                right_name: "u".into(),
                right: Box::new(Computation::Ret(Value::numeral(1))),
            },
        };
    };
    let next = format!("c{}", depth + 1);
    match step {
        Step::Arg { out_ty, .. } => {
            let raw = format!("z{}", depth + 1);
            let inner = build_obs_resolved(rest, leaf, &next, depth + 1, n);
            Computation::let_in(
                raw.clone(),
                Computation::App(Value::Var(var.into()), rep.clone().expect("resolved rep")),
                Computation::let_in(next, psi_applied(out_ty, n, &Value::Var(raw)), inner),
            )
        }
        Step::Fst => {
            let inner = build_obs_resolved(rest, leaf, &next, depth + 1, n);
            Computation::let_in(next, Computation::Proj1(Value::Var(var.into())), inner)
        }
        Step::Snd => {
            let inner = build_obs_resolved(rest, leaf, &next, depth + 1, n);
            Computation::let_in(next, Computation::Proj2(Value::Var(var.into())), inner)
        }
        Step::Case { left } => {
            let inner = build_obs_resolved(rest, leaf, &next, depth + 1, n);
            if *left {
                Computation::CaseSum {
                    scrutinee: Value::Var(var.into()),
                    left_name: next,
                    left: Box::new(inner),
                    right_name: "miss".into(),
                    right: Box::new(diverge(Ty::Nat)),
                }
            } else {
                Computation::CaseSum {
                    scrutinee: Value::Var(var.into()),
                    left_name: "miss".into(),
                    left: Box::new(diverge(Ty::Nat)),
                    right_name: next,
                    right: Box::new(inner),
                }
            }
        }
    }
}

/// Assemble the distinguishing context along the diff path and verify it by
/// running both plugged programs; `None` when verification cannot certify a
/// genuine difference.
fn verify_witness(
    t_left: &Computation,
    t_right: &Computation,
    ty: &Ty,
    diff: &GroundDiff,
    reg: &mut BasisRegistry,
) -> Result<Option<Verdict>, TruncError> {
    let n = reg.level();
    let mut resolved = Vec::with_capacity(diff.steps.len());
    for s in &diff.steps {
        let rep = match s {
            Step::Arg { arg_ty, point, .. } => Some(rep_for(reg, arg_ty, point)?),
            _ => None,
        };
        resolved.push((s.clone(), rep));
    }

    let obs = build_obs_resolved(&resolved, diff.leaf, "c0", 0, n);
    // let h = [.] in let c0 = psi[h] in <observations>
    let body = Computation::let_in(
        "h",
        Computation::Hole,
        Computation::let_in("c0", psi_applied(ty, n, &Value::Var("h".into())), obs),
    );
    let mut ctx_body = body;
    let mut hole_ctx = TyCtx::empty();
    for (name, rep) in diff.row.iter().rev() {
        ctx_body = Computation::let_in(name.clone(), Computation::Ret(rep.clone()), ctx_body);
    }
    for (name, rep) in &diff.row {
        let rep_ty = crate::typing::check_value(&TyCtx::empty(), rep)?;
        hole_ctx = hole_ctx.extended(name.clone(), rep_ty);
    }
    let witness = Context::new(ctx_body, hole_ctx, ty.clone())
        .map_err(|e| TruncError::Internal(format!("witness context: {e}")))?;

    let verify_fuel = reg
        .fuel()
        .saturating_mul(resolved.len() as u64 + 2)
        .saturating_add(10_000);
    let left_run = eval(&plug(&witness, t_left), verify_fuel)?;
    let right_run = eval(&plug(&witness, t_right), verify_fuel)?;
    match (left_run, right_run) {
        (EvalOutcome::Converged { value: lv, .. }, EvalOutcome::Converged { value: rv, .. })
            if lv != rv =>
        {
            Ok(Some(Verdict::ConfirmedDifferent {
                witness,
                observation_left: lv,
                observation_right: rv,
            }))
        }
        _ => Ok(None),
    }
}
