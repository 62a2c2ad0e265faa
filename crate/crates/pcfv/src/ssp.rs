//! Finite systems of partial partitions and their category: axiom checking,
//! closure generation, morphisms, the lifting construction and Kleisli
//! composition of partial maps.
//!
//! A partial partition of a carrier is a set of disjoint non-empty subsets;
//! a system is a set of such partitions containing the one-block partition
//! and the empty partition, closed under refining one block by another
//! partition and under merging two blocks. These encode which ground
//! observations a finite type admits; the closure rules mirror post- and
//! pre-composition of observations.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

pub type Atom = String;
pub type Block = BTreeSet<Atom>;

/// A set of disjoint non-empty blocks, canonically ordered.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PartialPartition(pub BTreeSet<Block>);

impl PartialPartition {
    pub fn empty() -> PartialPartition {
        PartialPartition(BTreeSet::new())
    }

    pub fn of(blocks: impl IntoIterator<Item = Block>) -> PartialPartition {
        PartialPartition(blocks.into_iter().collect())
    }

    /// The union of the blocks: the domain this partition observes.
    pub fn support(&self) -> Block {
        self.0.iter().flatten().cloned().collect()
    }

    /// Valid over the carrier: blocks non-empty, pairwise disjoint, within.
    pub fn is_valid_over(&self, carrier: &Block) -> bool {
        let mut seen = Block::new();
        for block in &self.0 {
            if block.is_empty() || !block.is_subset(carrier) {
                return false;
            }
            if block.iter().any(|a| seen.contains(a)) {
                return false;
            }
            seen.extend(block.iter().cloned());
        }
        true
    }
}

impl std::fmt::Display for PartialPartition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (i, block) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{{{}}}", block.iter().cloned().collect::<Vec<_>>().join(","))?;
        }
        write!(f, "}}")
    }
}

/// A finite carrier with a system of partial partitions satisfying the three
/// axioms. Construct via [`SspObject::new`] (which checks) or [`closure`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SspObject {
    pub carrier: Block,
    pub system: BTreeSet<PartialPartition>,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum AxiomViolation {
    #[error("partition {partition} is not a valid partial partition of the carrier")]
    Malformed { partition: String },
    #[error("axiom 1: the system must contain {missing}")]
    MissingFloor { missing: String },
    #[error("axiom 2 (refinement): refining {p} at block {block} by {q} gives {result}, which is missing")]
    RefinementEscapes { p: String, q: String, block: String, result: String },
    #[error("axiom 3 (merge): merging {u} and {v} in {p} gives {result}, which is missing")]
    MergeEscapes { p: String, u: String, v: String, result: String },
}

/// Refine one block of `p` by all blocks of `q`, dropping empty pieces.
pub fn refine_at(p: &PartialPartition, block: &Block, q: &PartialPartition) -> PartialPartition {
    let mut out: BTreeSet<Block> = p.0.iter().filter(|b| *b != block).cloned().collect();
    for v in &q.0 {
        let piece: Block = block.intersection(v).cloned().collect();
        if !piece.is_empty() {
            out.insert(piece);
        }
    }
    PartialPartition(out)
}

/// Merge two blocks of `p` into one.
pub fn merge_at(p: &PartialPartition, u: &Block, v: &Block) -> PartialPartition {
    let mut out: BTreeSet<Block> = p.0.iter().filter(|b| *b != u && *b != v).cloned().collect();
    out.insert(u.union(v).cloned().collect());
    PartialPartition(out)
}

/// Check the three axioms for a candidate system, reporting the first
/// violation with witnesses.
pub fn check_axioms(carrier: &Block, system: &BTreeSet<PartialPartition>) -> Result<(), AxiomViolation> {
    for p in system {
        if !p.is_valid_over(carrier) {
            return Err(AxiomViolation::Malformed { partition: p.to_string() });
        }
    }
    let one_block = PartialPartition::of([carrier.clone()]);
    if !carrier.is_empty() && !system.contains(&one_block) {
        return Err(AxiomViolation::MissingFloor { missing: one_block.to_string() });
    }
    if !system.contains(&PartialPartition::empty()) {
        return Err(AxiomViolation::MissingFloor { missing: "{}".to_string() });
    }
    for p in system {
        for u in &p.0 {
            for q in system {
                let refined = refine_at(p, u, q);
                if !system.contains(&refined) {
                    return Err(AxiomViolation::RefinementEscapes {
                        p: p.to_string(),
                        q: q.to_string(),
                        block: format!("{{{}}}", u.iter().cloned().collect::<Vec<_>>().join(",")),
                        result: refined.to_string(),
                    });
                }
            }
            for v in &p.0 {
                let merged = merge_at(p, u, v);
                if !system.contains(&merged) {
                    return Err(AxiomViolation::MergeEscapes {
                        p: p.to_string(),
                        u: format!("{u:?}"),
                        v: format!("{v:?}"),
                        result: merged.to_string(),
                    });
                }
            }
        }
    }
    Ok(())
}

impl SspObject {
    pub fn new(carrier: Block, system: BTreeSet<PartialPartition>) -> Result<SspObject, AxiomViolation> {
        check_axioms(&carrier, &system)?;
        Ok(SspObject { carrier, system })
    }

    /// The minimal system: only the floor demanded by axiom 1.
    pub fn minimal(carrier: Block) -> SspObject {
        closure(carrier, &[])
    }

    /// The full system: every partial partition of the carrier.
    pub fn full(carrier: Block) -> SspObject {
        let system = all_partial_partitions(&carrier).into_iter().collect();
        SspObject { carrier, system }
    }

    /// Semidecidable subsets: the unions of partitions in the system.
    pub fn semidecidable_subsets(&self) -> BTreeSet<Block> {
        self.system.iter().map(|p| p.support()).collect()
    }
}

/// Least system over `carrier` containing the generators, computed by
/// saturation under the merge and refinement rules (merge first per round;
/// the rules are closure rules, so the order cannot change the result).
pub fn closure(carrier: Block, generators: &[PartialPartition]) -> SspObject {
    let mut system: BTreeSet<PartialPartition> = BTreeSet::new();
    system.insert(PartialPartition::empty());
    if !carrier.is_empty() {
        system.insert(PartialPartition::of([carrier.clone()]));
    }
    for g in generators {
        assert!(g.is_valid_over(&carrier), "generator {g} invalid over the carrier");
        system.insert(g.clone());
    }
    loop {
        let mut fresh: Vec<PartialPartition> = Vec::new();
        for p in &system {
            for u in &p.0 {
                for v in &p.0 {
                    let merged = merge_at(p, u, v);
                    if !system.contains(&merged) {
                        fresh.push(merged);
                    }
                }
            }
        }
        for p in &system {
            for u in &p.0 {
                for q in &system {
                    let refined = refine_at(p, u, q);
                    if !system.contains(&refined) {
                        fresh.push(refined);
                    }
                }
            }
        }
        if fresh.is_empty() {
            return SspObject { carrier, system };
        }
        system.extend(fresh);
    }
}

/// Every partial partition of a finite carrier.
pub fn all_partial_partitions(carrier: &Block) -> Vec<PartialPartition> {
    let atoms: Vec<&Atom> = carrier.iter().collect();
    let mut out = Vec::new();
    for mask in 0u32..(1 << atoms.len()) {
        let subset: Vec<&Atom> = atoms
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, a)| *a)
            .collect();
        for partition in set_partitions(&subset) {
            out.push(PartialPartition(
                partition
                    .into_iter()
                    .map(|block| block.into_iter().cloned().collect())
                    .collect(),
            ));
        }
    }
    out.sort();
    out.dedup();
    out
}

fn set_partitions<'a>(items: &[&'a Atom]) -> Vec<Vec<Vec<&'a Atom>>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let (first, rest) = items.split_first().unwrap();
    let mut out = Vec::new();
    for sub in set_partitions(rest) {
        for i in 0..sub.len() {
            let mut with = sub.clone();
            with[i].push(first);
            out.push(with);
        }
        let mut alone = sub;
        alone.push(vec![first]);
        out.push(alone);
    }
    out
}

/// A partial map between carriers; an absent key means undefined. Total maps
/// are morphisms of the category, partial ones are Kleisli arrows into the
/// lifting.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SspMorphism {
    pub map: BTreeMap<Atom, Atom>,
}

impl SspMorphism {
    pub fn of(pairs: impl IntoIterator<Item = (Atom, Atom)>) -> SspMorphism {
        SspMorphism { map: pairs.into_iter().collect() }
    }

    pub fn identity(carrier: &Block) -> SspMorphism {
        SspMorphism { map: carrier.iter().map(|a| (a.clone(), a.clone())).collect() }
    }

    pub fn domain(&self) -> Block {
        self.map.keys().cloned().collect()
    }

    pub fn is_total_on(&self, carrier: &Block) -> bool {
        carrier.iter().all(|a| self.map.contains_key(a))
    }

    /// Preimage of a set of atoms, within the domain of definition.
    pub fn preimage(&self, of: &Block) -> Block {
        self.map
            .iter()
            .filter(|(_, b)| of.contains(*b))
            .map(|(a, _)| a.clone())
            .collect()
    }

    /// Pull a target partition back to the source: non-empty preimages of
    /// its blocks.
    pub fn pull_partition(&self, p: &PartialPartition) -> PartialPartition {
        PartialPartition(
            p.0.iter()
                .map(|block| self.preimage(block))
                .filter(|pre| !pre.is_empty())
                .collect(),
        )
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum MorphismViolation {
    #[error("map sends {atom} to {to}, which is not in the target carrier")]
    OutsideTarget { atom: Atom, to: Atom },
    #[error("map is defined on {atom}, which is not in the source carrier")]
    OutsideSource { atom: Atom },
    #[error("a total morphism is required but {atom} has no image")]
    NotTotal { atom: Atom },
    #[error("preimage of {partition} is {pulled}, which is not in the source system")]
    PreimageEscapes { partition: String, pulled: String },
    #[error("endpoint mismatch when composing")]
    EndpointMismatch,
}

fn check_map_bounds(f: &SspMorphism, src: &SspObject, tgt: &SspObject) -> Result<(), MorphismViolation> {
    for (a, b) in &f.map {
        if !src.carrier.contains(a) {
            return Err(MorphismViolation::OutsideSource { atom: a.clone() });
        }
        if !tgt.carrier.contains(b) {
            return Err(MorphismViolation::OutsideTarget { atom: a.clone(), to: b.clone() });
        }
    }
    Ok(())
}

/// Check a total morphism: every target partition pulls back into the source
/// system.
pub fn check_morphism(f: &SspMorphism, src: &SspObject, tgt: &SspObject) -> Result<(), MorphismViolation> {
    check_map_bounds(f, src, tgt)?;
    if let Some(a) = src.carrier.iter().find(|a| !f.map.contains_key(*a)) {
        return Err(MorphismViolation::NotTotal { atom: a.clone() });
    }
    check_pullbacks(f, src, tgt)
}

/// Check a Kleisli arrow (partial map): the pullback condition over the
/// target system; the domain of definition is then automatically a
/// semidecidable subset (it is the pullback of the one-block partition).
pub fn check_kleisli(f: &SspMorphism, src: &SspObject, tgt: &SspObject) -> Result<(), MorphismViolation> {
    check_map_bounds(f, src, tgt)?;
    check_pullbacks(f, src, tgt)
}

fn check_pullbacks(f: &SspMorphism, src: &SspObject, tgt: &SspObject) -> Result<(), MorphismViolation> {
    for p in &tgt.system {
        let pulled = f.pull_partition(p);
        if !src.system.contains(&pulled) {
            return Err(MorphismViolation::PreimageEscapes {
                partition: p.to_string(),
                pulled: pulled.to_string(),
            });
        }
    }
    Ok(())
}

/// The lifting: one fresh bottom atom, and one extra partition consisting of
/// the whole lifted carrier as a single block.
pub fn lift_ssp(o: &SspObject) -> (SspObject, Atom) {
    let mut bottom = "_bot".to_string();
    while o.carrier.contains(&bottom) {
        bottom.push('_');
    }
    let mut carrier = o.carrier.clone();
    carrier.insert(bottom.clone());
    let mut system = o.system.clone();
    system.insert(PartialPartition::of([carrier.clone()]));
    (SspObject { carrier, system }, bottom)
}

/// Kleisli composition of partial maps: defined where both stages are.
pub fn kleisli_compose_ssp(g: &SspMorphism, f: &SspMorphism) -> SspMorphism {
    SspMorphism {
        map: f
            .map
            .iter()
            .filter_map(|(a, b)| g.map.get(b).map(|c| (a.clone(), c.clone())))
            .collect(),
    }
}

/// JSON form: `{"carrier": [...], "system": [[["a"],["b"]], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SspJson {
    pub carrier: Vec<Atom>,
    pub system: Vec<Vec<Vec<Atom>>>,
}

impl SspJson {
    pub fn to_parts(&self) -> (Block, BTreeSet<PartialPartition>) {
        let carrier: Block = self.carrier.iter().cloned().collect();
        let system = self
            .system
            .iter()
            .map(|p| PartialPartition(p.iter().map(|b| b.iter().cloned().collect()).collect()))
            .collect();
        (carrier, system)
    }

    pub fn from_object(o: &SspObject) -> SspJson {
        SspJson {
            carrier: o.carrier.iter().cloned().collect(),
            system: o
                .system
                .iter()
                .map(|p| p.0.iter().map(|b| b.iter().cloned().collect()).collect())
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atoms(names: &[&str]) -> Block {
        names.iter().map(|s| s.to_string()).collect()
    }
    fn part(blocks: &[&[&str]]) -> PartialPartition {
        PartialPartition(blocks.iter().map(|b| atoms(b)).collect())
    }

    #[test]
    fn minimal_two_atom_system_passes() {
        let carrier = atoms(&["a", "b"]);
        let system: BTreeSet<_> = [PartialPartition::empty(), part(&[&["a", "b"]])].into();
        assert!(check_axioms(&carrier, &system).is_ok());
    }

    #[test]
    fn full_two_atom_system_passes() {
        let o = SspObject::full(atoms(&["a", "b"]));
        assert_eq!(o.system.len(), 5);
        assert!(check_axioms(&o.carrier, &o.system).is_ok());
    }

    #[test]
    fn missing_empty_partition_fails_axiom_one() {
        let carrier = atoms(&["a", "b"]);
        let system: BTreeSet<_> = [part(&[&["a", "b"]])].into();
        assert!(matches!(
            check_axioms(&carrier, &system),
            Err(AxiomViolation::MissingFloor { .. })
        ));
    }

    #[test]
    fn closure_of_discrete_partition_is_full() {
        let o = closure(atoms(&["a", "b"]), &[part(&[&["a"], &["b"]])]);
        assert_eq!(o.system.len(), 5, "all 5 partial partitions of a 2-atom carrier");
        assert!(check_axioms(&o.carrier, &o.system).is_ok());
    }

    #[test]
    fn closure_floor_only() {
        let o = closure(atoms(&["a", "b"]), &[]);
        let expect: BTreeSet<_> = [PartialPartition::empty(), part(&[&["a", "b"]])].into();
        assert_eq!(o.system, expect);
    }

    #[test]
    fn closure_three_atoms_split() {
        let o = closure(atoms(&["a", "b", "c"]), &[part(&[&["a"], &["b", "c"]])]);
        let expect: BTreeSet<_> = [
            PartialPartition::empty(),
            part(&[&["a"]]),
            part(&[&["b", "c"]]),
            part(&[&["a", "b", "c"]]),
            part(&[&["a"], &["b", "c"]]),
        ]
        .into();
        assert_eq!(o.system, expect);
    }

    // Deleting a block is derivable: refining by the empty partition.
    #[test]
    fn refinement_by_empty_deletes() {
        let p = part(&[&["a"], &["b"]]);
        let block = atoms(&["a"]);
        assert_eq!(refine_at(&p, &block, &PartialPartition::empty()), part(&[&["b"]]));
    }

    #[test]
    fn identity_and_constant_morphisms() {
        for o in [
            SspObject::full(atoms(&["a", "b"])),
            SspObject::minimal(atoms(&["a", "b"])),
            SspObject::full(atoms(&["a", "b", "c"])),
        ] {
            let id = SspMorphism::identity(&o.carrier);
            assert!(check_morphism(&id, &o, &o).is_ok());
        }
        // Any constant function between any objects is a morphism.
        let sizes: Vec<SspObject> = vec![
            SspObject::full(atoms(&["a"])),
            SspObject::minimal(atoms(&["a", "b"])),
            SspObject::full(atoms(&["a", "b"])),
            SspObject::full(atoms(&["a", "b", "c"])),
        ];
        for src in &sizes {
            for tgt in &sizes {
                for target_atom in &tgt.carrier {
                    let f = SspMorphism {
                        map: src.carrier.iter().map(|a| (a.clone(), target_atom.clone())).collect(),
                    };
                    assert!(
                        check_morphism(&f, src, tgt).is_ok(),
                        "constant at {target_atom} from {:?}",
                        src.carrier
                    );
                }
            }
        }
    }

    #[test]
    fn non_morphism_into_full_target() {
        let full = SspObject::full(atoms(&["a", "b"]));
        let minimal = SspObject::minimal(atoms(&["a", "b"]));
        let id = SspMorphism::identity(&atoms(&["a", "b"]));
        assert!(check_morphism(&id, &full, &minimal).is_ok());
        let err = check_morphism(&id, &minimal, &full).unwrap_err();
        assert!(matches!(err, MorphismViolation::PreimageEscapes { .. }));
    }

    #[test]
    fn lift_adds_bottom_and_one_partition() {
        let o = SspObject::minimal(atoms(&["a"]));
        let (lifted, bottom) = lift_ssp(&o);
        assert_eq!(bottom, "_bot");
        assert_eq!(lifted.carrier, atoms(&["a", "_bot"]));
        let expect: BTreeSet<_> =
            [PartialPartition::empty(), part(&[&["a"]]), part(&[&["a", "_bot"]])].into();
        assert_eq!(lifted.system, expect);
        assert!(check_axioms(&lifted.carrier, &lifted.system).is_ok());
    }

    #[test]
    fn kleisli_composition() {
        let f = SspMorphism::of([("a".to_string(), "x".to_string())]); // partial: b undefined
        let g = SspMorphism::of([("x".to_string(), "u".to_string())]);
        let gf = kleisli_compose_ssp(&g, &f);
        assert_eq!(gf, SspMorphism::of([("a".to_string(), "u".to_string())]));
        // Composing with identity preserves.
        let id = SspMorphism::identity(&atoms(&["x"]));
        assert_eq!(kleisli_compose_ssp(&id, &f), f);
        // Everywhere-undefined stays everywhere-undefined.
        let nowhere = SspMorphism { map: BTreeMap::new() };
        assert_eq!(kleisli_compose_ssp(&g, &nowhere), nowhere);
        assert_eq!(kleisli_compose_ssp(&nowhere, &f), SspMorphism { map: BTreeMap::new() });
    }

    // Oracle: recompute the axioms from their statement with fresh code, and
    // compare verdicts over every candidate system on a 2-atom carrier.
    fn oracle_check(carrier: &Block, system: &BTreeSet<PartialPartition>) -> bool {
        let valid = system.iter().all(|p| {
            let total: usize = p.0.iter().map(|b| b.len()).sum();
            let distinct: BTreeSet<&Atom> = p.0.iter().flatten().collect();
            p.0.iter().all(|b| !b.is_empty() && b.is_subset(carrier)) && distinct.len() == total
        });
        if !valid {
            return false;
        }
        let has_floor = system.contains(&PartialPartition::empty())
            && (carrier.is_empty() || system.contains(&PartialPartition::of([carrier.clone()])));
        if !has_floor {
            return false;
        }
        for p in system {
            for q in system {
                for u in &p.0 {
                    let mut refined: BTreeSet<Block> = p.0.clone();
                    refined.remove(u);
                    for v in &q.0 {
                        let piece: Block = u.intersection(v).cloned().collect();
                        if !piece.is_empty() {
                            refined.insert(piece);
                        }
                    }
                    if !system.contains(&PartialPartition(refined)) {
                        return false;
                    }
                }
            }
            for u in &p.0 {
                for v in &p.0 {
                    let mut merged: BTreeSet<Block> = p.0.clone();
                    merged.remove(u);
                    merged.remove(v);
                    merged.insert(u.union(v).cloned().collect());
                    if !system.contains(&PartialPartition(merged)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    #[test]
    fn checker_agrees_with_oracle_two_atoms_exhaustive() {
        let carrier = atoms(&["a", "b"]);
        let parts = all_partial_partitions(&carrier);
        assert_eq!(parts.len(), 5);
        for mask in 0u32..(1 << parts.len()) {
            let system: BTreeSet<PartialPartition> = parts
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, p)| p.clone())
                .collect();
            assert_eq!(
                check_axioms(&carrier, &system).is_ok(),
                oracle_check(&carrier, &system),
                "disagreement on mask {mask}"
            );
        }
    }

    // Closure is idempotent and monotone in the generators (2-atom carrier,
    // all generator sets).
    #[test]
    fn closure_idempotent_and_monotone() {
        let carrier = atoms(&["a", "b"]);
        let parts = all_partial_partitions(&carrier);
        let mut closures = Vec::new();
        for mask in 0u32..(1 << parts.len()) {
            let gens: Vec<PartialPartition> = parts
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, p)| p.clone())
                .collect();
            let o = closure(carrier.clone(), &gens);
            assert!(check_axioms(&o.carrier, &o.system).is_ok());
            let again = closure(carrier.clone(), &o.system.iter().cloned().collect::<Vec<_>>());
            assert_eq!(o.system, again.system, "closure not idempotent");
            closures.push((mask, o.system));
        }
        for (m1, s1) in &closures {
            for (m2, s2) in &closures {
                if m1 & m2 == *m1 {
                    assert!(s1.is_subset(s2), "closure not monotone: {m1:#b} vs {m2:#b}");
                }
            }
        }
    }
}
