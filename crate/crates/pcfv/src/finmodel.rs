//! The abstract recursion engine on finite tables: an explicit lifting monad
//! over finite point sets, Kleisli composition, least fixed points by Kleene
//! iteration with stabilization detection, and idempotent splitting.
//!
//! Everything here is generic table algebra. The bridge that turns a `rec`
//! term into a monotone table functional lives in the truncation module.

use thiserror::Error;

/// The lifting of a point set: flat order with `Bot` below everything.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Lifted<P> {
    Bot,
    Val(P),
}

impl<P> Lifted<P> {
    pub fn val(&self) -> Option<&P> {
        match self {
            Lifted::Bot => None,
            Lifted::Val(p) => Some(p),
        }
    }
}

/// Monad unit.
pub fn unit<P>(p: P) -> Lifted<P> {
    Lifted::Val(p)
}

/// Monad bind; `bind(Bot, _) = Bot`.
pub fn bind<P, Q>(l: Lifted<P>, k: impl FnOnce(P) -> Lifted<Q>) -> Lifted<Q> {
    match l {
        Lifted::Bot => Lifted::Bot,
        Lifted::Val(p) => k(p),
    }
}

/// `x ⊑ y` in the flat order.
pub fn lifted_leq<P: PartialEq>(x: &Lifted<P>, y: &Lifted<P>) -> bool {
    match (x, y) {
        (Lifted::Bot, _) => true,
        (Lifted::Val(p), Lifted::Val(q)) => p == q,
        (Lifted::Val(_), Lifted::Bot) => false,
    }
}

/// A total finite map `A -> Lifted<B>`, keyed in a fixed order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FnTable<A, B> {
    pub entries: Vec<(A, Lifted<B>)>,
}

impl<A: Clone + Eq, B: Clone + Eq> FnTable<A, B> {
    pub fn all_bot(keys: &[A]) -> FnTable<A, B> {
        FnTable { entries: keys.iter().map(|k| (k.clone(), Lifted::Bot)).collect() }
    }

    pub fn lookup(&self, key: &A) -> Option<&Lifted<B>> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    /// Pointwise flat order; tables must share their key sequence.
    pub fn leq(&self, other: &FnTable<A, B>) -> bool {
        self.entries.len() == other.entries.len()
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|((k1, v1), (k2, v2))| k1 == k2 && lifted_leq(v1, v2))
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum TableError {
    #[error("composition: value at key #{0} is outside the outer table's domain")]
    OutsideDomain(usize),
    #[error("idempotence required: h;h differs from h at key #{0}")]
    NotIdempotent(usize),
}

/// Kleisli composition `f† ∘ g`: feed each converged output of `g` through
/// `f`, with `Bot` absorbing.
pub fn kleisli_compose<A, B, C>(f: &FnTable<B, C>, g: &FnTable<A, B>) -> Result<FnTable<A, C>, TableError>
where
    A: Clone + Eq,
    B: Clone + Eq,
    C: Clone + Eq,
{
    let mut entries = Vec::with_capacity(g.entries.len());
    for (i, (a, e)) in g.entries.iter().enumerate() {
        let out = match e {
            Lifted::Bot => Lifted::Bot,
            Lifted::Val(b) => f.lookup(b).ok_or(TableError::OutsideDomain(i))?.clone(),
        };
        entries.push((a.clone(), out));
    }
    Ok(FnTable { entries })
}

#[derive(Debug, Clone, Error)]
pub enum FixError<E> {
    #[error("the functional failed: {0}")]
    Phi(E),
    #[error("monotonicity violated at key #{key_index}: {prev} then {next} — the functional is not a chain map")]
    Monotonicity { key_index: usize, prev: String, next: String },
    #[error("no stabilization within {iterations} iterations: lattice height exceeded")]
    NoStabilization { iterations: usize },
}

/// Least fixed point of a monotone table functional by Kleene iteration from
/// the all-`Bot` table, returning the first repeated table and the number of
/// applications of the functional. Monotonicity is asserted at every step,
/// not assumed: each iterate must dominate the previous one.
pub fn fix<A, B, E>(
    keys: &[A],
    mut phi: impl FnMut(&FnTable<A, B>) -> Result<FnTable<A, B>, E>,
) -> Result<(FnTable<A, B>, usize), FixError<E>>
where
    A: Clone + Eq + std::fmt::Debug,
    B: Clone + Eq + std::fmt::Debug,
{
    let mut current: FnTable<A, B> = FnTable::all_bot(keys);
    let max_iters = keys.len() + 2;
    for iteration in 1..=max_iters {
        let next = phi(&current).map_err(FixError::Phi)?;
        for (i, ((_, prev), (_, new))) in current.entries.iter().zip(&next.entries).enumerate() {
            if !lifted_leq(prev, new) {
                return Err(FixError::Monotonicity {
                    key_index: i,
                    prev: format!("{prev:?}"),
                    next: format!("{new:?}"),
                });
            }
        }
        if next == current {
            return Ok((current, iteration));
        }
        current = next;
    }
    Err(FixError::NoStabilization { iterations: max_iters })
}

/// The points fixed by an idempotent Kleisli endomorphism: the carrier of the
/// split subobject.
pub fn idempotent_split<A: Clone + Eq>(h: &FnTable<A, A>) -> Result<Vec<A>, TableError> {
    let composed = kleisli_compose(h, h)?;
    for (i, (e1, e2)) in composed.entries.iter().zip(&h.entries).enumerate() {
        if e1 != e2 {
            return Err(TableError::NotIdempotent(i));
        }
    }
    Ok(h
        .entries
        .iter()
        .filter_map(|(a, e)| match e {
            Lifted::Val(b) if a == b => Some(a.clone()),
            _ => None,
        })
        .collect())
}
