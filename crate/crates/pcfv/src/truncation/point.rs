//! Canonical elements of truncated types and the tables that carry them.

use crate::syntax::Ty;
use serde::Serialize;

/// A canonical element of a truncated type.
///
/// The derived `Ord` is the canonical order used everywhere: numerals
/// ascending, left summand before right, pairs lexicographically, and
/// function points lexicographically by their entry vector (with the variant
/// order of [`Entry`] putting `Bottom` first).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Point {
    Unit,
    Nat(u32),
    Inl(Box<Point>),
    Inr(Box<Point>),
    Pair(Box<Point>, Box<Point>),
    Fun(Box<Table>),
}

impl Point {
    /// Compact display used in reports and JSON paths.
    pub fn brief(&self) -> String {
        match self {
            Point::Unit => "*".to_string(),
            Point::Nat(k) => k.to_string(),
            Point::Inl(p) => format!("inl {}", p.brief()),
            Point::Inr(p) => format!("inr {}", p.brief()),
            Point::Pair(a, b) => format!("({}, {})", a.brief(), b.brief()),
            Point::Fun(t) => {
                let cells: Vec<String> = t
                    .entries
                    .iter()
                    .map(|(k, e)| {
                        let key = k.iter().map(Point::brief).collect::<Vec<_>>().join(",");
                        format!("{}->{}", key, e.brief())
                    })
                    .collect();
                format!("{{{}}}", cells.join(", "))
            }
        }
    }
}

/// One observed output: converged to a point, analytically bottom, or out of
/// fuel. Tabulating arbitrary terms only ever produces `Converged` or
/// `Exhausted`; `Bottom` appears in analytically constructed tables (basis
/// realizers and enumerated points), where the diverging leaf is literal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Entry {
    Bottom,
    Exhausted,
    Converged(Point),
}

impl Entry {
    pub fn brief(&self) -> String {
        match self {
            Entry::Bottom => "_|_".to_string(),
            Entry::Exhausted => "?".to_string(),
            Entry::Converged(p) => p.brief(),
        }
    }

    pub fn converged(&self) -> Option<&Point> {
        match self {
            Entry::Converged(p) => Some(p),
            _ => None,
        }
    }
}

/// A finite map from tuples of input points to observed outputs, keyed
/// exactly by the basis points of the input types, in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Table {
    pub level: u32,
    pub in_tys: Vec<Ty>,
    pub out_ty: Ty,
    pub basis_id: String,
    pub entries: Vec<(Vec<Point>, Entry)>,
}

impl Table {
    /// The single entry of a closed tabulation (empty context).
    pub fn sole_entry(&self) -> Option<&Entry> {
        if self.in_tys.is_empty() && self.entries.len() == 1 {
            Some(&self.entries[0].1)
        } else {
            None
        }
    }

    /// True if no `Exhausted` appears anywhere, including nested tables.
    pub fn fully_resolved(&self) -> bool {
        self.entries.iter().all(|(_, e)| entry_resolved(e))
    }

    /// True if no `Exhausted` and no `Bottom` appears anywhere: every entry
    /// is a certified convergence.
    pub fn fully_converged(&self) -> bool {
        self.entries.iter().all(|(_, e)| match e {
            Entry::Converged(p) => point_resolved(p, false),
            _ => false,
        })
    }
}

fn entry_resolved(e: &Entry) -> bool {
    match e {
        Entry::Exhausted => false,
        Entry::Bottom => true,
        Entry::Converged(p) => point_resolved(p, true),
    }
}

fn point_resolved(p: &Point, allow_bottom: bool) -> bool {
    match p {
        Point::Unit | Point::Nat(_) => true,
        Point::Inl(q) | Point::Inr(q) => point_resolved(q, allow_bottom),
        Point::Pair(a, b) => point_resolved(a, allow_bottom) && point_resolved(b, allow_bottom),
        Point::Fun(t) => t.entries.iter().all(|(_, e)| match e {
            Entry::Exhausted => false,
            Entry::Bottom => allow_bottom,
            Entry::Converged(q) => point_resolved(q, allow_bottom),
        }),
    }
}
