//! Rotations: the steps of a maximal sequence, and the poset they form.
//!
//! A rotation takes one class to a class directly below it. Rotations are
//! identified by their source and target classes. One rotation is found per
//! non-top irreducible class `X`: it leads from the meet of the irreducibles
//! strictly dominating `X` down to `X`. Rotation `a` precedes `b` when every
//! class in which `b` has been applied also has `a` applied.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use thiserror::Error;

use crate::instance::Instance;
use crate::lattice::{meet_men, sym_diff_cycles, AltCycle, CycleError, CycleKind, MatchingClass};
use crate::matching::{rank_cmp, Matching, MatchingError, Signature};
use crate::maxseq::MaximalSequence;
use crate::representation::{class_of_closed_set, closed_sets, irreducible_classes, IrreduciblePoset};
use crate::solver::NoSolution;

/// Above this many classes the order is computed over irreducible classes
/// only and flagged as approximate.
pub const DEFAULT_CLASS_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RotationError {
    #[error(transparent)]
    NoSolution(#[from] NoSolution),
    #[error("step {step}: {source}")]
    Cycle {
        step: usize,
        #[source]
        source: CycleError,
    },
    #[error("step {step}: cycle through `{man}` is not men-worse, women-better")]
    WrongDirection { step: usize, man: String },
    #[error("step {step}: no man changes rank")]
    Empty { step: usize },
    #[error(transparent)]
    Matching(#[from] MatchingError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rotation {
    pub source: Signature,
    pub target: Signature,
    pub cycles: Vec<AltCycle>,
    /// Man index to (rank before, rank after); after is always worse.
    pub moved_men: BTreeMap<usize, (u32, u32)>,
}

impl Rotation {
    /// The rotation `from ⊕ to`, where `to` must lie directly below `from`.
    /// `step` only labels errors.
    pub fn between(inst: &Instance, from: &Matching, to: &Matching, step: usize) -> Result<Self, RotationError> {
        let cycles = sym_diff_cycles(inst, from, to).map_err(|source| RotationError::Cycle { step, source })?;
        let mut moved_men = BTreeMap::new();
        for cycle in &cycles {
            if cycle.kind != CycleKind::MenWorseWomenBetter {
                return Err(RotationError::WrongDirection {
                    step,
                    man: inst.man_id(cycle.men[0]).into(),
                });
            }
            for (m, before, after) in cycle.man_moves(inst) {
                moved_men.insert(m, (before, after));
            }
        }
        if moved_men.is_empty() {
            return Err(RotationError::Empty { step });
        }
        Ok(Rotation {
            source: from.signature(inst),
            target: to.signature(inst),
            cycles,
            moved_men,
        })
    }

    /// Applies the rank changes to a signature.
    pub fn apply(&self, sig: &Signature) -> Signature {
        let mut ranks = sig.0.clone();
        for (&m, &(_, after)) in &self.moved_men {
            ranks[m] = Some(after);
        }
        Signature(ranks)
    }
}

/// One rotation per consecutive pair of the sequence.
pub fn extract_rotations(inst: &Instance, seq: &MaximalSequence) -> Result<Vec<Rotation>, RotationError> {
    seq.matchings
        .windows(2)
        .enumerate()
        .map(|(i, pair)| Rotation::between(inst, &pair[0], &pair[1], i + 1))
        .collect()
}

/// Every man moved by `rho` is at or below his rank after `rho` in `class`.
pub fn applied(rho: &Rotation, class: &MatchingClass) -> bool {
    applied_to(rho, &class.signature)
}

fn applied_to(rho: &Rotation, sig: &Signature) -> bool {
    rho.moved_men
        .iter()
        .all(|(&m, &(_, after))| rank_cmp(sig.ranks()[m], Some(after)).is_ge())
}

#[derive(Debug, Clone)]
pub struct RotationPoset {
    rotations: Vec<Rotation>,
    /// `precedes[i][j]`: `i <= j`, reflexive.
    precedes: Vec<Vec<bool>>,
    approximate: bool,
}

impl RotationPoset {
    pub fn len(&self) -> usize {
        self.rotations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rotations.is_empty()
    }

    /// Listed along a linear extension of the order.
    pub fn rotations(&self) -> &[Rotation] {
        &self.rotations
    }

    pub fn precedes(&self, i: usize, j: usize) -> bool {
        self.precedes[i][j]
    }

    /// The order was computed over irreducible classes only.
    pub fn is_approximate(&self) -> bool {
        self.approximate
    }

    /// Pairs `(i, j)`, `i` strictly before `j` with nothing between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let strict = |i: usize, j: usize| i != j && self.precedes[i][j];
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if strict(i, j) && !(0..n).any(|k| strict(i, k) && strict(k, j)) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Contains every predecessor of each member.
    pub fn is_closed(&self, set: &[usize]) -> bool {
        let mut inside = vec![false; self.len()];
        for &j in set {
            inside[j] = true;
        }
        set.iter()
            .all(|&j| (0..self.len()).all(|i| !self.precedes[i][j] || inside[i]))
    }

    /// All closed subsets, the empty one included.
    pub fn closed_subsets(&self) -> Vec<Vec<usize>> {
        fn go(p: &RotationPoset, j: usize, inside: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
            if j == p.len() {
                out.push((0..p.len()).filter(|&i| inside[i]).collect());
                return;
            }
            go(p, j + 1, inside, out);
            if (0..j).all(|i| !p.precedes[i][j] || inside[i]) {
                inside[j] = true;
                go(p, j + 1, inside, out);
                inside[j] = false;
            }
        }
        let mut out = Vec::new();
        go(self, 0, &mut vec![false; self.len()], &mut out);
        out
    }

    /// Indices of the rotations applied in `class`, ascending.
    pub fn applied_set(&self, class: &MatchingClass) -> Vec<usize> {
        (0..self.len()).filter(|&i| applied(&self.rotations[i], class)).collect()
    }

    /// Applies the listed rotations to `start` in the given order.
    pub fn replay(&self, start: &Signature, order: &[usize]) -> Signature {
        order
            .iter()
            .fold(start.clone(), |sig, &i| self.rotations[i].apply(&sig))
    }

    /// The rotation with these source and target classes.
    pub fn index_of(&self, source: &Signature, target: &Signature) -> Option<usize> {
        self.rotations
            .iter()
            .position(|r| &r.source == source && &r.target == target)
    }
}

pub fn rotation_poset(inst: &Instance) -> Result<RotationPoset, RotationError> {
    rotation_poset_with_cap(inst, DEFAULT_CLASS_CAP)
}

/// As [`rotation_poset`], computing the exact order only when there are at
/// most `class_cap` classes.
pub fn rotation_poset_with_cap(inst: &Instance, class_cap: usize) -> Result<RotationPoset, RotationError> {
    let poset = irreducible_classes(inst)?;
    let mut rotations = Vec::new();
    for x in 0..poset.len() {
        let dominators: Vec<usize> = (0..poset.len()).filter(|&i| poset.strictly_above(i, x)).collect();
        let Some((&first, rest)) = dominators.split_first() else {
            continue;
        };
        let mut upper = poset.element(first).class.representative.clone();
        for &i in rest {
            upper = meet_men(inst, &upper, &poset.element(i).class.representative)?;
        }
        let lower = meet_men(inst, &upper, &poset.element(x).class.representative)?;
        rotations.push(Rotation::between(inst, &upper, &lower, rotations.len() + 1)?);
    }
    rotations.sort_by(|a, b| (&a.source, &a.target).cmp(&(&b.source, &b.target)));
    rotations.dedup_by(|a, b| a.source == b.source && a.target == b.target);

    let (classes, approximate) = order_classes(inst, &poset, class_cap);
    let applied_rows: Vec<Vec<bool>> = rotations
        .par_iter()
        .map(|r| classes.iter().map(|sig| applied_to(r, sig)).collect())
        .collect();

    let count = |i: usize| applied_rows[i].iter().filter(|&&a| a).count();
    let mut order: Vec<usize> = (0..rotations.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(count(i)));
    let rotations: Vec<Rotation> = order.iter().map(|&i| rotations[i].clone()).collect();
    let rows: Vec<&Vec<bool>> = order.iter().map(|&i| &applied_rows[i]).collect();
    let precedes = rows
        .par_iter()
        .map(|row_i| {
            rows.iter()
                .map(|row_j| row_j.iter().zip(row_i.iter()).all(|(&j, &i)| !j || i))
                .collect()
        })
        .collect();
    Ok(RotationPoset {
        rotations,
        precedes,
        approximate,
    })
}

fn order_classes(inst: &Instance, poset: &IrreduciblePoset, cap: usize) -> (Vec<Signature>, bool) {
    let sets: Vec<_> = closed_sets(poset).take(cap.saturating_add(1)).collect();
    if sets.len() <= cap {
        let classes = sets
            .iter()
            .map(|s| {
                class_of_closed_set(inst, poset, s)
                    .expect("enumerated sets are closed")
                    .signature
            })
            .collect();
        (classes, false)
    } else {
        let classes = poset.elements().iter().map(|el| el.class.signature.clone()).collect();
        (classes, true)
    }
}

/// `rotation <k>: <man> <before> <after> ...` per rotation with men sorted by
/// id, then `prec <i> <= <j>` per covering pair, then `approximate order` if
/// the order is approximate.
pub fn format_rotations(inst: &Instance, poset: &RotationPoset) -> String {
    let mut out = String::new();
    for (k, r) in poset.rotations().iter().enumerate() {
        let mut men: Vec<(&str, u32, u32)> = r
            .moved_men
            .iter()
            .map(|(&m, &(b, a))| (inst.man_id(m), b, a))
            .collect();
        men.sort();
        let _ = write!(out, "rotation {}:", k);
        for (id, b, a) in men {
            let _ = write!(out, " {} {} {}", id, b, a);
        }
        out.push('\n');
    }
    for (i, j) in poset.covers() {
        let _ = writeln!(out, "prec {} <= {}", i, j);
    }
    if poset.is_approximate() {
        out.push_str("approximate order\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::parse_instance;
    use crate::maxseq::maximal_sequence;
    use crate::representation::enumerate_classes;
    use crate::solver::{man_optimal, woman_optimal};

    const F1: &str = "men: m1\nwomen: w1\nm1: w1\nw1: m1\n";
    const F2: &str = "men: m1 m2\nwomen: w1 w2\nm1: w1 w2\nm2: w2 w1\nw1: m2 m1\nw2: m1 m2\n";
    const F4: &str =
        "men: m1 m2\nwomen: w1 w2\nm1: (w1 w2)\nm2: (w1 w2)\nw1: (m1 m2)\nw2: (m1 m2)\n";
    const F6: &str = "men: m1 m2 m3 m4\nwomen: w1 w2 w3 w4\n\
        m1: w1 w2\nm2: w2 w1\nm3: w3 w4\nm4: w4 w3\n\
        w1: m2 m1\nw2: m1 m2\nw3: m4 m3\nw4: m3 m4\n";

    #[test]
    fn extracted_from_sequences() {
        let f1 = parse_instance(F1).unwrap();
        assert!(extract_rotations(&f1, &maximal_sequence(&f1).unwrap()).unwrap().is_empty());

        let f2 = parse_instance(F2).unwrap();
        let rots = extract_rotations(&f2, &maximal_sequence(&f2).unwrap()).unwrap();
        assert_eq!(rots.len(), 1);
        assert_eq!(rots[0].cycles.len(), 1);
        assert_eq!(rots[0].cycles[0].men.len(), 2);
        assert_eq!(rots[0].moved_men, BTreeMap::from([(0, (1, 2)), (1, (1, 2))]));

        let f6 = parse_instance(F6).unwrap();
        let rots = extract_rotations(&f6, &maximal_sequence(&f6).unwrap()).unwrap();
        assert_eq!(rots.len(), 2);
        let mut moved: Vec<Vec<usize>> = rots.iter().map(|r| r.moved_men.keys().copied().collect()).collect();
        moved.sort();
        assert_eq!(moved, vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn poset_examples() {
        let f2 = parse_instance(F2).unwrap();
        let p = rotation_poset(&f2).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.closed_subsets().len(), 2);
        assert!(!p.is_approximate());

        let f6 = parse_instance(F6).unwrap();
        let p = rotation_poset(&f6).unwrap();
        assert_eq!(p.len(), 2);
        assert!(!p.precedes(0, 1) && !p.precedes(1, 0));
        assert_eq!(p.closed_subsets().len(), 4);

        let f4 = parse_instance(F4).unwrap();
        let p = rotation_poset(&f4).unwrap();
        assert!(p.is_empty());
        assert_eq!(p.closed_subsets(), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn applied_examples() {
        let f2 = parse_instance(F2).unwrap();
        let p = rotation_poset(&f2).unwrap();
        let rho = &p.rotations()[0];
        let ma = MatchingClass::of(&f2, man_optimal(&f2).unwrap());
        let mb = MatchingClass::of(&f2, woman_optimal(&f2).unwrap());
        assert!(applied(rho, &mb));
        assert!(!applied(rho, &ma));
    }

    #[test]
    fn replay_reaches_bottom() {
        let f6 = parse_instance(F6).unwrap();
        let p = rotation_poset(&f6).unwrap();
        let top = man_optimal(&f6).unwrap().signature(&f6);
        let bottom = woman_optimal(&f6).unwrap().signature(&f6);
        assert_eq!(p.replay(&top, &[0, 1]), bottom);
        assert_eq!(p.replay(&top, &[1, 0]), bottom);
        let classes = enumerate_classes(&f6).unwrap();
        let mut sets: Vec<Vec<usize>> = classes.iter().map(|c| p.applied_set(c)).collect();
        sets.sort();
        let mut closed = p.closed_subsets();
        closed.sort();
        assert_eq!(sets, closed);
    }

    #[test]
    fn format_example() {
        let f2 = parse_instance(F2).unwrap();
        let p = rotation_poset(&f2).unwrap();
        assert_eq!(format_rotations(&f2, &p), "rotation 0: m1 1 2 m2 1 2\n");
    }
}
