//! Strongly stable matchings forced to contain a given edge.
//!
//! For an edge `(m, w)` the auxiliary instance drops `(m, w)` and every edge
//! that would either block a matching containing it or be blocked by it. Its
//! strongly stable matchings, extended by `(m, w)`, are then either all
//! strongly stable in the original instance or none are, and the man-optimal
//! one extends to the man-optimal strongly stable `(m, w)`-matching.

use rayon::prelude::*;
use thiserror::Error;

use crate::instance::{EdgeId, Instance};
use crate::matching::{rank_cmp, Matching};
use crate::solver::{is_strongly_stable, man_optimal, woman_optimal};

/// Which construction rule removed an edge, in application order. `Rival*`
/// rules scan the fixed woman's list, `Alternative*` rules the fixed man's.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RemovalRule {
    /// The fixed edge itself.
    Fixed = 1,
    /// `(m', w)` where `w` strictly prefers `m` to `m'`.
    RivalBelow = 2,
    /// `(m', w)` with `m' =_w m`, plus every edge `m'` ranks strictly below `w`.
    RivalTied = 3,
    /// `(m', w)` with `m' ≻_w m`, plus every edge `m'` ranks weakly below `w`.
    RivalAbove = 4,
    /// `(m, w')` where `m` strictly prefers `w` to `w'`.
    AlternativeBelow = 5,
    /// `(m, w')` with `w' =_m w`, plus every edge `w'` ranks strictly below `m`.
    AlternativeTied = 6,
    /// `(m, w')` with `w' ≻_m w`, plus every edge `w'` ranks weakly below `m`.
    AlternativeAbove = 7,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum FixedEdgeError {
    #[error("edge id {0} is not an edge of the instance")]
    NotAnEdge(EdgeId),
    #[error("no strongly stable matching contains the edge")]
    NoSolution,
}

#[derive(Debug, Clone)]
pub struct AuxiliaryInstance<'a> {
    pub base: &'a Instance,
    pub fixed_edge: EdgeId,
    /// Same vertices as `base`, with the removed edges gone.
    pub reduced: Instance,
    /// Per base edge, the first rule that removed it.
    pub removed_by: Vec<Option<RemovalRule>>,
}

pub fn build_auxiliary(inst: &Instance, e: EdgeId) -> Result<AuxiliaryInstance<'_>, FixedEdgeError> {
    if e >= inst.edge_count() {
        return Err(FixedEdgeError::NotAnEdge(e));
    }
    let fixed = inst.edge(e);
    let (m, w) = (fixed.man, fixed.woman);
    let mut removed_by: Vec<Option<RemovalRule>> = vec![None; inst.edge_count()];
    let mut remove = |id: EdgeId, rule: RemovalRule| {
        removed_by[id].get_or_insert(rule);
    };

    remove(e, RemovalRule::Fixed);

    // Rivals of m on w's list.
    for rival in inst.woman_edges(w).filter(|&x| x != e) {
        let r = inst.edge(rival);
        if r.woman_rank > fixed.woman_rank {
            remove(rival, RemovalRule::RivalBelow);
        } else if r.woman_rank == fixed.woman_rank {
            remove(rival, RemovalRule::RivalTied);
            for other in inst.man_edges(r.man) {
                if inst.edge(other).man_rank > r.man_rank {
                    remove(other, RemovalRule::RivalTied);
                }
            }
        } else {
            remove(rival, RemovalRule::RivalAbove);
            for other in inst.man_edges(r.man) {
                if inst.edge(other).man_rank >= r.man_rank {
                    remove(other, RemovalRule::RivalAbove);
                }
            }
        }
    }

    // Alternatives to w on m's list.
    for alt in inst.man_edges(m).filter(|&x| x != e) {
        let a = inst.edge(alt);
        if a.man_rank > fixed.man_rank {
            remove(alt, RemovalRule::AlternativeBelow);
        } else if a.man_rank == fixed.man_rank {
            remove(alt, RemovalRule::AlternativeTied);
            for other in inst.woman_edges(a.woman) {
                if inst.edge(other).woman_rank > a.woman_rank {
                    remove(other, RemovalRule::AlternativeTied);
                }
            }
        } else {
            remove(alt, RemovalRule::AlternativeAbove);
            for other in inst.woman_edges(a.woman) {
                if inst.edge(other).woman_rank >= a.woman_rank {
                    remove(other, RemovalRule::AlternativeAbove);
                }
            }
        }
    }

    let reduced = inst.restrict(|id| removed_by[id].is_none());
    Ok(AuxiliaryInstance {
        base: inst,
        fixed_edge: e,
        reduced,
        removed_by,
    })
}

impl AuxiliaryInstance<'_> {
    /// Adds the fixed edge to a matching of the reduced instance, as a matching
    /// of the base instance.
    pub fn extend(&self, reduced_matching: &Matching) -> Matching {
        let fixed = self.base.edge(self.fixed_edge);
        Matching::from_pairs(
            self.base,
            reduced_matching
                .pairs()
                .chain(std::iter::once((fixed.man, fixed.woman))),
        )
        .expect("reduced matching avoids the fixed endpoints")
    }
}

/// The man-optimal strongly stable matching containing `e`.
pub fn optimal_with_edge(inst: &Instance, e: EdgeId) -> Result<Matching, FixedEdgeError> {
    let aux = build_auxiliary(inst, e)?;
    let reduced = man_optimal(&aux.reduced).map_err(|_| FixedEdgeError::NoSolution)?;
    let extended = aux.extend(&reduced);
    if is_strongly_stable(inst, &extended) {
        Ok(extended)
    } else {
        Err(FixedEdgeError::NoSolution)
    }
}

/// Edges contained in at least one strongly stable matching, ascending.
pub fn stable_pairs(inst: &Instance) -> Vec<EdgeId> {
    stable_pair_optima(inst).into_iter().map(|(e, _)| e).collect()
}

/// Every stable pair with its man-optimal strongly stable matching, ascending
/// by edge.
///
/// Only edges ranked between the man-optimal and woman-optimal partners on
/// both sides are tested; no other edge can appear in a strongly stable
/// matching.
pub fn stable_pair_optima(inst: &Instance) -> Vec<(EdgeId, Matching)> {
    let (Ok(top), Ok(bottom)) = (man_optimal(inst), woman_optimal(inst)) else {
        return Vec::new();
    };
    let within = |e: EdgeId| {
        let edge = inst.edge(e);
        let (m, w) = (edge.man, edge.woman);
        let man_ok = rank_cmp(top.man_rank(inst, m), Some(edge.man_rank)).is_le()
            && rank_cmp(Some(edge.man_rank), bottom.man_rank(inst, m)).is_le();
        let woman_ok = rank_cmp(bottom.woman_rank(inst, w), Some(edge.woman_rank)).is_le()
            && rank_cmp(Some(edge.woman_rank), top.woman_rank(inst, w)).is_le();
        man_ok && woman_ok
    };
    (0..inst.edge_count())
        .into_par_iter()
        .filter(|&e| within(e))
        .filter_map(|e| optimal_with_edge(inst, e).ok().map(|m| (e, m)))
        .collect()
}
