//! Single-line printer. `parse(print(t))` is structurally `t`, and printing
//! is a function of the tree alone, so `print . parse . print = print`.

use super::ast::{Computation, Ty, Value};

/// Precedence climbing for types: arrow < sum < prod, all right-associative.
fn ty_prec(t: &Ty, prec: u8, out: &mut String) {
    let (level, l, r, op) = match t {
        Ty::Zero => {
            out.push('0');
            return;
        }
        Ty::One => {
            out.push('1');
            return;
        }
        Ty::Nat => {
            out.push_str("nat");
            return;
        }
        Ty::Arrow(a, b) => (0, a, b, " -> "),
        Ty::Sum(a, b) => (1, a, b, " + "),
        Ty::Prod(a, b) => (2, a, b, " * "),
    };
    let need_parens = prec > level;
    if need_parens {
        out.push('(');
    }
    ty_prec(l, level + 1, out);
    out.push_str(op);
    ty_prec(r, level, out);
    if need_parens {
        out.push(')');
    }
}

pub fn print_ty(t: &Ty) -> String {
    let mut out = String::new();
    ty_prec(t, 0, &mut out);
    out
}

fn is_binder(v: &Value) -> bool {
    matches!(v, Value::Lam { .. } | Value::Rec { .. })
}

fn value(v: &Value, out: &mut String) {
    if let Some(k) = v.as_numeral() {
        out.push_str(&k.to_string());
        return;
    }
    match v {
        Value::Var(x) => out.push_str(x),
        Value::Star => out.push_str("star"),
        Value::Zero => out.push('0'),
        Value::Inl(w) => prefix_arg("inl", w, out),
        Value::Inr(w) => prefix_arg("inr", w, out),
        Value::Suc(w) => prefix_arg("suc", w, out),
        Value::Pair(a, b) => {
            out.push('(');
            value(a, out);
            out.push_str(", ");
            value(b, out);
            out.push(')');
        }
        Value::Lam { param, param_ty, body } => {
            out.push_str("fn ");
            out.push_str(param);
            out.push_str(" : ");
            out.push_str(&print_ty(param_ty));
            out.push_str(" => ");
            comp(body, out);
        }
        Value::Rec { fname, param, param_ty, ret_ty, body } => {
            out.push_str("rec ");
            out.push_str(fname);
            out.push_str(" (");
            out.push_str(param);
            out.push_str(" : ");
            out.push_str(&print_ty(param_ty));
            out.push_str(") : ");
            out.push_str(&print_ty(ret_ty));
            out.push_str(" => ");
            comp(body, out);
        }
    }
}

fn prefix_arg(kw: &str, w: &Value, out: &mut String) {
    out.push_str(kw);
    out.push(' ');
    atom_value(w, out);
}

/// Print a value, parenthesising binders so the surrounding form stays
/// readable; the parens are grouping and never change the parse.
fn atom_value(v: &Value, out: &mut String) {
    if is_binder(v) {
        out.push('(');
        value(v, out);
        out.push(')');
    } else {
        value(v, out);
    }
}

fn comp(t: &Computation, out: &mut String) {
    match t {
        Computation::Ret(v) => {
            out.push_str("return ");
            value(v, out);
        }
        Computation::Proj1(v) => {
            out.push_str("fst ");
            atom_value(v, out);
        }
        Computation::Proj2(v) => {
            out.push_str("snd ");
            atom_value(v, out);
        }
        Computation::Absurd(v) => {
            out.push_str("absurd ");
            atom_value(v, out);
        }
        Computation::App(f, a) => {
            atom_value(f, out);
            out.push(' ');
            atom_value(a, out);
        }
        Computation::CaseSum { scrutinee, left_name, left, right_name, right } => {
            out.push_str("case ");
            atom_value(scrutinee, out);
            out.push_str(" of { inl ");
            out.push_str(left_name);
            out.push_str(" => ");
            comp(left, out);
            out.push_str(" | inr ");
            out.push_str(right_name);
            out.push_str(" => ");
            comp(right, out);
            out.push_str(" }");
        }
        Computation::CaseNat { scrutinee, zero, succ_name, succ } => {
            out.push_str("case ");
            atom_value(scrutinee, out);
            out.push_str(" of { zero => ");
            comp(zero, out);
            out.push_str(" | suc ");
            out.push_str(succ_name);
            out.push_str(" => ");
            comp(succ, out);
            out.push_str(" }");
        }
        Computation::Let { name, bound, body } => {
            out.push_str("let ");
            out.push_str(name);
            out.push_str(" = ");
            comp(bound, out);
            out.push_str(" in ");
            comp(body, out);
        }
        Computation::Hole => out.push_str("[.]"),
    }
}

pub fn print_value(v: &Value) -> String {
    let mut out = String::new();
    value(v, &mut out);
    out
}

pub fn print_computation(t: &Computation) -> String {
    let mut out = String::new();
    comp(t, &mut out);
    out
}
