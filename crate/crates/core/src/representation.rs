//! The irreducible-class poset and enumeration of every equivalence class
//! through its nonempty closed subsets.
//!
//! The class of `M` is recovered from the closure of its support by folding
//! [`meet_men`] over the members' representatives. A set is closed when it
//! contains every element dominating one of its members.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use thiserror::Error;

use crate::fixed_edge::stable_pair_optima;
use crate::instance::{EdgeId, Instance};
use crate::lattice::{meet_men, MatchingClass};
use crate::matching::{Matching, MatchingError, Signature};
use crate::solver::{blocks, man_optimal, NoSolution};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepresentationError {
    #[error("closed set is empty")]
    EmptySet,
    #[error("set is not closed: element {missing} dominates a member but is absent")]
    NotClosed { missing: usize },
    #[error("element index {0} out of range")]
    UnknownElement(usize),
    #[error("edge ({man}, {woman}) of the matching is not a stable pair")]
    NotStable { man: String, woman: String },
    #[error(transparent)]
    Matching(#[from] MatchingError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IrreducibleElement {
    pub class: MatchingClass,
    /// Stable pairs whose man-optimal matching falls in this class, ascending.
    pub witnesses: Vec<EdgeId>,
}

/// Irreducible classes sorted by signature, with the full dominance relation.
#[derive(Debug, Clone)]
pub struct IrreduciblePoset {
    elements: Vec<IrreducibleElement>,
    /// Row `i` has bit `j` set when element `i` strictly dominates element `j`.
    above: Vec<Vec<u64>>,
    edge_element: Vec<Option<usize>>,
}

fn bit(row: &[u64], j: usize) -> bool {
    row[j / 64] >> (j % 64) & 1 == 1
}

impl IrreduciblePoset {
    fn build(inst: &Instance, optima: Vec<(EdgeId, Matching)>) -> Self {
        let mut grouped: BTreeMap<Signature, IrreducibleElement> = BTreeMap::new();
        for (e, m) in optima {
            grouped
                .entry(m.signature(inst))
                .or_insert_with(|| IrreducibleElement {
                    class: MatchingClass::of(inst, m),
                    witnesses: Vec::new(),
                })
                .witnesses
                .push(e);
        }
        let elements: Vec<IrreducibleElement> = grouped.into_values().collect();
        let n = elements.len();
        let words = n.div_ceil(64);
        let above = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut row = vec![0u64; words];
                let si = &elements[i].class.signature;
                for (j, other) in elements.iter().enumerate() {
                    if i != j && si.dominates(&other.class.signature) {
                        row[j / 64] |= 1 << (j % 64);
                    }
                }
                row
            })
            .collect();
        let mut edge_element = vec![None; inst.edge_count()];
        for (k, el) in elements.iter().enumerate() {
            for &e in &el.witnesses {
                edge_element[e] = Some(k);
            }
        }
        IrreduciblePoset {
            elements,
            above,
            edge_element,
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[IrreducibleElement] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &IrreducibleElement {
        &self.elements[i]
    }

    /// Element `i` strictly dominates element `j`.
    pub fn strictly_above(&self, i: usize, j: usize) -> bool {
        bit(&self.above[i], j)
    }

    /// The element whose class is `M(m, w)` for edge `e`, if `e` is a stable pair.
    pub fn element_of_edge(&self, e: EdgeId) -> Option<usize> {
        self.edge_element.get(e).copied().flatten()
    }

    pub fn index_of(&self, sig: &Signature) -> Option<usize> {
        self.elements
            .binary_search_by(|el| el.class.signature.cmp(sig))
            .ok()
    }

    /// Pairs `(i, j)` where `i` dominates `j` with nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if self.strictly_above(i, j)
                    && !(0..n).any(|k| self.strictly_above(i, k) && self.strictly_above(k, j))
                {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Element indices ordered so that every element comes after all elements
    /// dominating it.
    pub fn linear_extension(&self) -> Vec<usize> {
        let dominators: Vec<usize> = (0..self.len())
            .map(|j| (0..self.len()).filter(|&i| self.strictly_above(i, j)).count())
            .collect();
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&j| (dominators[j], j));
        order
    }
}

pub fn irreducible_classes(inst: &Instance) -> Result<IrreduciblePoset, NoSolution> {
    man_optimal(inst)?;
    Ok(IrreduciblePoset::build(inst, stable_pair_optima(inst)))
}

/// A set of poset elements closed upward under dominance. Members are sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClosedSet {
    members: Vec<usize>,
}

impl ClosedSet {
    /// Validates closedness.
    pub fn new(poset: &IrreduciblePoset, mut members: Vec<usize>) -> Result<Self, RepresentationError> {
        members.sort_unstable();
        members.dedup();
        if let Some(&bad) = members.iter().find(|&&i| i >= poset.len()) {
            return Err(RepresentationError::UnknownElement(bad));
        }
        let mut inside = vec![false; poset.len()];
        for &i in &members {
            inside[i] = true;
        }
        for &j in &members {
            if let Some(missing) = (0..poset.len()).find(|&i| !inside[i] && poset.strictly_above(i, j)) {
                return Err(RepresentationError::NotClosed { missing });
            }
        }
        Ok(ClosedSet { members })
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// The poset elements `M(m, w)` for the edges of a strongly stable matching.
pub fn support(inst: &Instance, matching: &Matching, poset: &IrreduciblePoset) -> Result<Vec<usize>, RepresentationError> {
    matching.check_against(inst)?;
    let mut out = Vec::new();
    for e in matching.edge_ids(inst) {
        match poset.element_of_edge(e) {
            Some(k) => out.push(k),
            None => {
                let edge = inst.edge(e);
                return Err(RepresentationError::NotStable {
                    man: inst.man_id(edge.man).into(),
                    woman: inst.woman_id(edge.woman).into(),
                });
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// The smallest closed superset of `set`. Indices out of range are dropped.
pub fn closure(poset: &IrreduciblePoset, set: &[usize]) -> ClosedSet {
    let mut inside = vec![false; poset.len()];
    for &j in set.iter().filter(|&&j| j < poset.len()) {
        inside[j] = true;
        for (i, flag) in inside.iter_mut().enumerate() {
            if poset.strictly_above(i, j) {
                *flag = true;
            }
        }
    }
    ClosedSet {
        members: (0..poset.len()).filter(|&i| inside[i]).collect(),
    }
}

pub fn class_of_closed_set(
    inst: &Instance,
    poset: &IrreduciblePoset,
    set: &ClosedSet,
) -> Result<MatchingClass, RepresentationError> {
    let checked = ClosedSet::new(poset, set.members.clone())?;
    let (&first, rest) = checked.members.split_first().ok_or(RepresentationError::EmptySet)?;
    let mut acc = poset.element(first).class.representative.clone();
    for &i in rest {
        acc = meet_men(inst, &acc, &poset.element(i).class.representative)?;
    }
    Ok(MatchingClass::of(inst, acc))
}

/// Lazily yields every nonempty closed subset, each exactly once.
///
/// Elements are decided one at a time along a linear extension from the top;
/// an element may join only if all its dominators already have, and leaving
/// it out is always possible, so every branch ends in a distinct closed set.
pub struct ClosedSets<'a> {
    poset: &'a IrreduciblePoset,
    order: Vec<usize>,
    inside: Vec<bool>,
    /// Decision per depth: `true` once the include branch has been taken.
    stack: Vec<bool>,
    started: bool,
}

impl<'a> ClosedSets<'a> {
    pub fn new(poset: &'a IrreduciblePoset) -> Self {
        ClosedSets {
            poset,
            order: poset.linear_extension(),
            inside: vec![false; poset.len()],
            stack: Vec::new(),
            started: false,
        }
    }

    fn can_include(&self, j: usize) -> bool {
        (0..self.poset.len()).all(|i| !self.poset.strictly_above(i, j) || self.inside[i])
    }

    /// Descends from the current depth, preferring inclusion, to a full leaf.
    fn descend(&mut self) {
        while self.stack.len() < self.order.len() {
            let j = self.order[self.stack.len()];
            let take = self.can_include(j);
            self.inside[j] = take;
            self.stack.push(take);
        }
    }

    /// Moves to the next leaf; `false` when exhausted.
    fn advance(&mut self) -> bool {
        while let Some(took) = self.stack.pop() {
            let j = self.order[self.stack.len()];
            if took {
                self.inside[j] = false;
                self.stack.push(false);
                self.descend();
                return true;
            }
        }
        false
    }

    fn current(&self) -> ClosedSet {
        ClosedSet {
            members: (0..self.poset.len()).filter(|&i| self.inside[i]).collect(),
        }
    }
}

impl Iterator for ClosedSets<'_> {
    type Item = ClosedSet;

    fn next(&mut self) -> Option<ClosedSet> {
        loop {
            if !self.started {
                self.started = true;
                self.descend();
            } else if !self.advance() {
                return None;
            }
            let set = self.current();
            if !set.is_empty() {
                return Some(set);
            }
        }
    }
}

pub fn closed_sets(poset: &IrreduciblePoset) -> ClosedSets<'_> {
    ClosedSets::new(poset)
}

/// Every equivalence class, sorted by signature.
///
/// With no stable pair at all the only strongly stable matching is empty, and
/// that single class is returned.
pub fn enumerate_classes(inst: &Instance) -> Result<Vec<MatchingClass>, NoSolution> {
    let poset = irreducible_classes(inst)?;
    if poset.is_empty() {
        return Ok(vec![MatchingClass::of(inst, man_optimal(inst)?)]);
    }
    let mut out: Vec<MatchingClass> = closed_sets(&poset)
        .map(|s| class_of_closed_set(inst, &poset, &s).expect("enumerated sets are closed"))
        .collect();
    out.sort_by(|a, b| a.signature.cmp(&b.signature));
    Ok(out)
}

/// Up to `limit` strongly stable matchings with the class's signature, ordered
/// by the partner sequence of the men.
pub fn expand_class(inst: &Instance, class: &MatchingClass, limit: usize) -> Vec<Matching> {
    struct Search<'a> {
        inst: &'a Instance,
        ranks: &'a [Option<u32>],
        partner: Vec<Option<usize>>,
        used: Vec<bool>,
        limit: usize,
        out: Vec<Matching>,
    }

    impl Search<'_> {
        fn go(&mut self, m: usize) {
            if self.out.len() >= self.limit {
                return;
            }
            if m == self.partner.len() {
                let matching = Matching::from_man_partners(self.inst.women_count(), self.partner.clone());
                if (0..self.inst.edge_count()).all(|e| !blocks(self.inst, &matching, e)) {
                    self.out.push(matching);
                }
                return;
            }
            let Some(rank) = self.ranks[m] else {
                self.go(m + 1);
                return;
            };
            let Some(tie) = self.inst.man_ties(m).get(rank as usize - 1) else {
                return;
            };
            for &e in tie {
                let w = self.inst.edge(e).woman;
                if self.used[w] {
                    continue;
                }
                self.used[w] = true;
                self.partner[m] = Some(w);
                self.go(m + 1);
                self.partner[m] = None;
                self.used[w] = false;
            }
        }
    }

    if limit == 0 || class.signature.ranks().len() != inst.men_count() {
        return Vec::new();
    }
    let mut s = Search {
        inst,
        ranks: class.signature.ranks(),
        partner: vec![None; inst.men_count()],
        used: vec![false; inst.women_count()],
        limit,
        out: Vec::new(),
    };
    s.go(0);
    s.out
}

/// `<man>=<rank> ...` over men sorted by id, `-` for unmatched.
pub fn format_signature(inst: &Instance, sig: &Signature) -> String {
    let mut men: Vec<usize> = (0..inst.men_count()).collect();
    men.sort_by(|&a, &b| inst.man_id(a).cmp(inst.man_id(b)));
    let parts: Vec<String> = men
        .into_iter()
        .map(|m| match sig.ranks()[m] {
            Some(r) => format!("{}={}", inst.man_id(m), r),
            None => format!("{}=-", inst.man_id(m)),
        })
        .collect();
    parts.join(" ")
}

/// `class <k>: ...` per element, then `cover <i> -> <j>` per covering pair.
pub fn format_poset(inst: &Instance, poset: &IrreduciblePoset) -> String {
    let mut out = String::new();
    for (k, el) in poset.elements().iter().enumerate() {
        let _ = writeln!(out, "class {}: {}", k, format_signature(inst, &el.class.signature));
    }
    for (i, j) in poset.covers() {
        let _ = writeln!(out, "cover {} -> {}", i, j);
    }
    out
}
