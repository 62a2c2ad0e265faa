//! Checks that the truncations behave as an ascending chain of idempotents:
//! above the ambient level they fix every point, below it they only lose
//! information along the flat order.

use super::basis::{BasisParams, BasisRegistry};
use super::enumerate::{enumerate_points, realize};
use super::point::{Entry, Point};
use super::tabulate::observe_closed;
use super::{psi_applied, TruncError};
use crate::syntax::{Computation, Ty, Value};

#[derive(Debug, Clone)]
pub struct ChainViolation {
    pub point: String,
    pub m: u32,
    pub detail: String,
}

#[derive(Debug, Clone, Default)]
pub struct ChainReport {
    pub checked_points: usize,
    pub violations: Vec<ChainViolation>,
}

impl ChainReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// For every point `p` of the truncated type: levels `m` in `n..=n+3` must
/// fix the realizer of `p` exactly (observed at level m), and levels `m < n`
/// must produce an entrywise refinement of `p` (equal or Exhausted).
pub fn approx_chain_check(ty: &Ty, n: u32, fuel: u64) -> Result<ChainReport, TruncError> {
    let mut report = ChainReport::default();
    let points = enumerate_points(ty, n)?;
    report.checked_points = points.len();
    for p in &points {
        let r = realize(p, ty, n)?;
        for m in 0..=(n + 3) {
            let obs_level = m.max(n);
            let mut reg = BasisRegistry::new(BasisParams::new(obs_level, fuel, 8));
            let baseline = match observe_closed(&Computation::Ret(r.clone()), ty, &mut reg)? {
                Entry::Converged(base) => base,
                other => {
                    report.violations.push(ChainViolation {
                        point: p.brief(),
                        m,
                        detail: format!("baseline observation failed: {}", other.brief()),
                    });
                    continue;
                }
            };
            let image = observe_closed(&truncate_value(ty, m, &r), ty, &mut reg)?;
            if m >= n {
                match &image {
                    Entry::Converged(q) if *q == baseline => {}
                    other => report.violations.push(ChainViolation {
                        point: p.brief(),
                        m,
                        detail: format!(
                            "psi at level {m} moved the point: {} vs baseline {}",
                            other.brief(),
                            baseline.brief()
                        ),
                    }),
                }
            } else {
                match &image {
                    Entry::Exhausted => {}
                    Entry::Converged(q) => {
                        if !refines(q, &baseline) {
                            report.violations.push(ChainViolation {
                                point: p.brief(),
                                m,
                                detail: format!(
                                    "psi at level {m} is not a refinement: {} vs {}",
                                    q.brief(),
                                    baseline.brief()
                                ),
                            });
                        }
                    }
                    Entry::Bottom => {}
                }
            }
        }
    }
    Ok(report)
}

fn truncate_value(ty: &Ty, m: u32, v: &Value) -> Computation {
    psi_applied(ty, m, v)
}

/// `q` refines toward `p`: every observation of `q` is either Exhausted or
/// agrees with `p`. Domains may differ in size (observation levels differ);
/// comparison is over `q`'s keys, which embed into `p`'s.
fn refines(q: &Point, p: &Point) -> bool {
    match (q, p) {
        (Point::Unit, Point::Unit) => true,
        (Point::Nat(a), Point::Nat(b)) => a == b,
        (Point::Inl(a), Point::Inl(b)) | (Point::Inr(a), Point::Inr(b)) => refines(a, b),
        (Point::Pair(a1, a2), Point::Pair(b1, b2)) => refines(a1, b1) && refines(a2, b2),
        (Point::Fun(tq), Point::Fun(tp)) => tq.entries.iter().all(|(key, eq)| {
            match eq {
                Entry::Exhausted | Entry::Bottom => true,
                Entry::Converged(a) => tp
                    .entries
                    .iter()
                    .find(|(kp, _)| kp == key)
                    .map(|(_, ep)| match ep {
                        Entry::Converged(b) => refines(a, b),
                        _ => false,
                    })
                    .unwrap_or(false),
            }
        }),
        _ => false,
    }
}
