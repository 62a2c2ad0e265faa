use serde::{Deserialize, Serialize};

/// Types of the calculus.
///
/// `Arrow` is right-associative in the concrete syntax, `Prod` binds tighter
/// than `Sum`, and both binary connectives associate to the right.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Ty {
    Zero,
    One,
    Nat,
    Sum(Box<Ty>, Box<Ty>),
    Prod(Box<Ty>, Box<Ty>),
    Arrow(Box<Ty>, Box<Ty>),
}

impl Ty {
    pub fn sum(a: Ty, b: Ty) -> Ty {
        Ty::Sum(Box::new(a), Box::new(b))
    }
    pub fn prod(a: Ty, b: Ty) -> Ty {
        Ty::Prod(Box::new(a), Box::new(b))
    }
    pub fn arrow(a: Ty, b: Ty) -> Ty {
        Ty::Arrow(Box::new(a), Box::new(b))
    }

    /// Height of the type tree. `nat` has depth 1, `nat -> nat` depth 2.
    pub fn depth(&self) -> usize {
        match self {
            Ty::Zero | Ty::One | Ty::Nat => 1,
            Ty::Sum(a, b) | Ty::Prod(a, b) | Ty::Arrow(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// Type order: ground types are order 0, an arrow raises the order of its
    /// domain by one. Exact point enumeration is available at order <= 1.
    pub fn order(&self) -> usize {
        match self {
            Ty::Zero | Ty::One | Ty::Nat => 0,
            Ty::Sum(a, b) | Ty::Prod(a, b) => a.order().max(b.order()),
            Ty::Arrow(a, b) => (a.order() + 1).max(b.order()),
        }
    }

    /// A type is ground if it contains no arrows.
    pub fn is_ground(&self) -> bool {
        self.order() == 0
    }
}

impl std::fmt::Display for Ty {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&super::print_ty(self))
    }
}

/// Values: the inert half of the fine-grained syntax.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Value {
    Var(String),
    Star,
    Inl(Box<Value>),
    Inr(Box<Value>),
    Pair(Box<Value>, Box<Value>),
    Zero,
    Suc(Box<Value>),
    Lam {
        param: String,
        param_ty: Ty,
        body: Box<Computation>,
    },
    Rec {
        fname: String,
        param: String,
        param_ty: Ty,
        ret_ty: Ty,
        body: Box<Computation>,
    },
}

impl Value {
    /// Build the numeral `suc^k zero`.
    pub fn numeral(k: u32) -> Value {
        let mut v = Value::Zero;
        for _ in 0..k {
            v = Value::Suc(Box::new(v));
        }
        v
    }

    /// If this value is a closed numeral, return it.
    pub fn as_numeral(&self) -> Option<u32> {
        let mut k = 0;
        let mut cur = self;
        loop {
            match cur {
                Value::Zero => return Some(k),
                Value::Suc(v) => {
                    k += 1;
                    cur = v;
                }
                _ => return None,
            }
        }
    }
}

impl std::fmt::Display for Value {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&super::print_value(self))
    }
}

/// Computations: the running half of the fine-grained syntax.
///
/// `Hole` is the distinguished context hole `[.]`; it is not typable on its
/// own and only appears inside [`crate::opsem::Context`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Computation {
    Ret(Value),
    CaseSum {
        scrutinee: Value,
        left_name: String,
        left: Box<Computation>,
        right_name: String,
        right: Box<Computation>,
    },
    Proj1(Value),
    Proj2(Value),
    App(Value, Value),
    CaseNat {
        scrutinee: Value,
        zero: Box<Computation>,
        succ_name: String,
        succ: Box<Computation>,
    },
    Let {
        name: String,
        bound: Box<Computation>,
        body: Box<Computation>,
    },
    Absurd(Value),
    Hole,
}

impl Computation {
    pub fn ret(v: Value) -> Computation {
        Computation::Ret(v)
    }
    pub fn let_in(name: impl Into<String>, bound: Computation, body: Computation) -> Computation {
        Computation::Let { name: name.into(), bound: Box::new(bound), body: Box::new(body) }
    }
    pub fn app(f: Value, a: Value) -> Computation {
        Computation::App(f, a)
    }
}

impl std::fmt::Display for Computation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&super::print_computation(self))
    }
}

/// Either kind of term, as produced by the top-level parser.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Value(Value),
    Computation(Computation),
}
