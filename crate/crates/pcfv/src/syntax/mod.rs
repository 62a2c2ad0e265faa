//! Abstract syntax, concrete grammar, parser and printer for the
//! fine-grained call-by-value calculus.
//!
//! The calculus keeps values and computations syntactically apart: a value is
//! inert data (a variable, unit, an injection, a pair, a numeral, a function),
//! while a computation is something that runs (`return v`, case analysis,
//! projection, application, sequencing with `let`). Numerals in source text
//! desugar to iterated `suc` applied to `zero`.

mod ast;
mod parse;
mod print;

pub use ast::{Computation, Term, Ty, Value};
pub use parse::{parse_computation, parse_term, parse_ty, parse_value, ParseError};
pub use print::{print_computation, print_ty, print_value};

use std::collections::BTreeSet;

/// Free variables of a value.
pub fn free_vars_value(v: &Value) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    collect_value(v, &mut Vec::new(), &mut out);
    out
}

/// Free variables of a computation.
pub fn free_vars_computation(t: &Computation) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    collect_comp(t, &mut Vec::new(), &mut out);
    out
}

fn record(name: &str, bound: &[String], out: &mut BTreeSet<String>) {
    if !bound.iter().any(|b| b == name) {
        out.insert(name.to_string());
    }
}

fn collect_value(v: &Value, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
    match v {
        Value::Var(x) => record(x, bound, out),
        Value::Star | Value::Zero => {}
        Value::Inl(w) | Value::Inr(w) | Value::Suc(w) => collect_value(w, bound, out),
        Value::Pair(a, b) => {
            collect_value(a, bound, out);
            collect_value(b, bound, out);
        }
        Value::Lam { param, body, .. } => {
            bound.push(param.clone());
            collect_comp(body, bound, out);
            bound.pop();
        }
        Value::Rec { fname, param, body, .. } => {
            bound.push(fname.clone());
            bound.push(param.clone());
            collect_comp(body, bound, out);
            bound.pop();
            bound.pop();
        }
    }
}

fn collect_comp(t: &Computation, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
    match t {
        Computation::Ret(v) | Computation::Proj1(v) | Computation::Proj2(v) | Computation::Absurd(v) => {
            collect_value(v, bound, out)
        }
        Computation::App(f, a) => {
            collect_value(f, bound, out);
            collect_value(a, bound, out);
        }
        Computation::CaseSum { scrutinee, left_name, left, right_name, right } => {
            collect_value(scrutinee, bound, out);
            bound.push(left_name.clone());
            collect_comp(left, bound, out);
            bound.pop();
            bound.push(right_name.clone());
            collect_comp(right, bound, out);
            bound.pop();
        }
        Computation::CaseNat { scrutinee, zero, succ_name, succ } => {
            collect_value(scrutinee, bound, out);
            collect_comp(zero, bound, out);
            bound.push(succ_name.clone());
            collect_comp(succ, bound, out);
            bound.pop();
        }
        Computation::Let { name, bound: b, body } => {
            collect_comp(b, bound, out);
            bound.push(name.clone());
            collect_comp(body, bound, out);
            bound.pop();
        }
        Computation::Hole => {}
    }
}

/// Number of hole occurrences in a computation. A context must have exactly one.
pub fn count_holes(t: &Computation) -> usize {
    fn in_value(v: &Value) -> usize {
        match v {
            Value::Var(_) | Value::Star | Value::Zero => 0,
            Value::Inl(w) | Value::Inr(w) | Value::Suc(w) => in_value(w),
            Value::Pair(a, b) => in_value(a) + in_value(b),
            Value::Lam { body, .. } => count_holes(body),
            Value::Rec { body, .. } => count_holes(body),
        }
    }
    match t {
        Computation::Hole => 1,
        Computation::Ret(v)
        | Computation::Proj1(v)
        | Computation::Proj2(v)
        | Computation::Absurd(v) => in_value(v),
        Computation::App(f, a) => in_value(f) + in_value(a),
        Computation::CaseSum { scrutinee, left, right, .. } => {
            in_value(scrutinee) + count_holes(left) + count_holes(right)
        }
        Computation::CaseNat { scrutinee, zero, succ, .. } => {
            in_value(scrutinee) + count_holes(zero) + count_holes(succ)
        }
        Computation::Let { bound, body, .. } => count_holes(bound) + count_holes(body),
    }
}

#[cfg(test)]
mod tests;
