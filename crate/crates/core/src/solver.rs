//! Strong stability: the blocking-edge test and the man-optimal solver.
//!
//! The solver is proposal based. Every free man proposes to his whole current
//! top tie, and each proposal deletes the edges a woman ranks strictly below the
//! proposer. Once nobody is free, the engagement graph either matches every man
//! who still has a list, or it has a critical set: men reachable by alternating
//! paths from an unmatched man. Their women cannot keep their current tail, so
//! those edges are deleted and proposals resume. A deleted edge never belongs to
//! a strongly stable matching.

use thiserror::Error;

use crate::bipartite::BipartiteMatching;
use crate::instance::{EdgeId, Instance};
use crate::matching::{Matching, MatchingError};

/// The instance admits no strongly stable matching.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("no strongly stable matching exists")]
pub struct NoSolution;

/// Edges blocking a matching, in increasing edge id.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BlockingReport {
    pub edges: Vec<EdgeId>,
}

impl BlockingReport {
    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// `(m, w)` outside the matching blocks when one endpoint is unmatched or
/// strictly prefers the other, and the other endpoint is unmatched or weakly
/// prefers the first.
pub fn blocks(inst: &Instance, matching: &Matching, e: EdgeId) -> bool {
    let edge = inst.edge(e);
    if matching.contains(edge.man, edge.woman) {
        return false;
    }
    let (man_strict, man_weak) = match matching.man_rank(inst, edge.man) {
        None => (true, true),
        Some(r) => (edge.man_rank < r, edge.man_rank <= r),
    };
    let (woman_strict, woman_weak) = match matching.woman_rank(inst, edge.woman) {
        None => (true, true),
        Some(r) => (edge.woman_rank < r, edge.woman_rank <= r),
    };
    (man_strict && woman_weak) || (woman_strict && man_weak)
}

pub fn blocking_edges(inst: &Instance, matching: &Matching) -> Result<BlockingReport, MatchingError> {
    matching.check_against(inst)?;
    Ok(BlockingReport {
        edges: (0..inst.edge_count())
            .filter(|&e| blocks(inst, matching, e))
            .collect(),
    })
}

pub fn is_strongly_stable(inst: &Instance, matching: &Matching) -> bool {
    blocking_edges(inst, matching).is_ok_and(|r| r.is_empty())
}

/// A strongly stable matching in which every man has the best partner he has
/// in any strongly stable matching.
pub fn man_optimal(inst: &Instance) -> Result<Matching, NoSolution> {
    let mut run = Proposals::new(inst);
    let matching = run.solve()?;
    let report = blocking_edges(inst, &matching).expect("solver output uses instance edges");
    assert!(
        report.is_empty(),
        "solver produced a blocked matching ({} blocking edges)",
        report.edges.len()
    );
    Ok(matching)
}

/// The man-optimal matching of the role-swapped instance, mapped back.
pub fn woman_optimal(inst: &Instance) -> Result<Matching, NoSolution> {
    man_optimal(&inst.swapped()).map(|m| m.swapped())
}

struct Proposals<'a> {
    inst: &'a Instance,
    alive: Vec<bool>,
    /// Index of each man's current top tie among his ties.
    head: Vec<usize>,
    /// Live edges remaining in that tie; 0 means the man is free.
    head_live: Vec<usize>,
    exhausted: Vec<bool>,
    /// Number of ties of each woman not yet cut from the bottom.
    tail: Vec<usize>,
    proposed_to: Vec<bool>,
    free: Vec<usize>,
}

impl<'a> Proposals<'a> {
    fn new(inst: &'a Instance) -> Self {
        let men = inst.men_count();
        Proposals {
            inst,
            alive: vec![true; inst.edge_count()],
            head: vec![0; men],
            head_live: vec![0; men],
            exhausted: vec![false; men],
            tail: (0..inst.women_count()).map(|w| inst.woman_ties(w).len()).collect(),
            proposed_to: vec![false; inst.women_count()],
            free: (0..men).rev().collect(),
        }
    }

    fn delete(&mut self, e: EdgeId) {
        if !self.alive[e] {
            return;
        }
        self.alive[e] = false;
        let edge = self.inst.edge(e);
        let m = edge.man;
        if !self.exhausted[m] && self.head_live[m] > 0 && edge.man_rank as usize == self.head[m] + 1 {
            self.head_live[m] -= 1;
            if self.head_live[m] == 0 {
                self.head[m] += 1;
                self.free.push(m);
            }
        }
    }

    /// Cuts every tie of `w` ranked strictly worse than `rank`.
    fn cut_below(&mut self, w: usize, rank: u32) {
        let inst = self.inst;
        while self.tail[w] > rank as usize {
            self.tail[w] -= 1;
            for &e in &inst.woman_ties(w)[self.tail[w]] {
                self.delete(e);
            }
        }
    }

    /// Cuts the worst tie of `w` that still has a live edge.
    fn cut_tail(&mut self, w: usize) {
        let inst = self.inst;
        while self.tail[w] > 0 {
            self.tail[w] -= 1;
            let tie = &inst.woman_ties(w)[self.tail[w]];
            if tie.iter().any(|&e| self.alive[e]) {
                for &e in tie {
                    self.delete(e);
                }
                return;
            }
        }
    }

    fn propose_all(&mut self) {
        let inst = self.inst;
        while let Some(m) = self.free.pop() {
            let ties = inst.man_ties(m);
            while self.head[m] < ties.len() && !ties[self.head[m]].iter().any(|&e| self.alive[e]) {
                self.head[m] += 1;
            }
            if self.head[m] == ties.len() {
                self.exhausted[m] = true;
                continue;
            }
            let tie = &ties[self.head[m]];
            self.head_live[m] = tie.iter().filter(|&&e| self.alive[e]).count();
            for &e in tie {
                if !self.alive[e] {
                    continue;
                }
                let edge = inst.edge(e);
                self.proposed_to[edge.woman] = true;
                self.cut_below(edge.woman, edge.woman_rank);
            }
        }
    }

    fn engagement_graph(&self) -> Vec<Vec<usize>> {
        (0..self.inst.men_count())
            .map(|m| {
                if self.exhausted[m] {
                    return Vec::new();
                }
                self.inst.man_ties(m)[self.head[m]]
                    .iter()
                    .filter(|&&e| self.alive[e])
                    .map(|&e| self.inst.edge(e).woman)
                    .collect()
            })
            .collect()
    }

    fn solve(&mut self) -> Result<Matching, NoSolution> {
        let men = self.inst.men_count();
        let mut bm = BipartiteMatching::new(men, self.inst.women_count());
        loop {
            self.propose_all();
            let graph = self.engagement_graph();
            bm.retain_edges(&graph);
            bm.maximize(&graph);
            let (_, critical_women) =
                bm.alternating_reach(&graph, (0..men).filter(|&m| !self.exhausted[m]));
            let targets: Vec<usize> = critical_women
                .iter()
                .enumerate()
                .filter_map(|(w, &c)| c.then_some(w))
                .collect();
            if targets.is_empty() {
                break;
            }
            for w in targets {
                self.cut_tail(w);
            }
        }
        // A woman who ever received a proposal is matched in every strongly
        // stable matching, if one exists.
        if (0..self.inst.women_count()).any(|w| self.proposed_to[w] && bm.mate_right[w].is_none()) {
            return Err(NoSolution);
        }
        Ok(Matching::from_man_partners(self.inst.women_count(), bm.mate_left))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::parse_instance;

    const F0: &str = "men:\nwomen:\n";
    const F1: &str = "men: m1\nwomen: w1\nm1: w1\nw1: m1\n";
    const F2: &str = "men: m1 m2\nwomen: w1 w2\nm1: w1 w2\nm2: w2 w1\nw1: m2 m1\nw2: m1 m2\n";
    const F3: &str = "men: m1 m2\nwomen: w1\nm1: w1\nm2: w1\nw1: (m1 m2)\n";
    const F4: &str =
        "men: m1 m2\nwomen: w1 w2\nm1: (w1 w2)\nm2: (w1 w2)\nw1: (m1 m2)\nw2: (m1 m2)\n";

    fn pairs(inst: &Instance, m: &Matching) -> Vec<(String, String)> {
        m.pairs()
            .map(|(a, b)| (inst.man_id(a).to_string(), inst.woman_id(b).to_string()))
            .collect()
    }

    fn p(list: &[(&str, &str)]) -> Vec<(String, String)> {
        list.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
    }

    #[test]
    fn blocking_examples() {
        let f1 = parse_instance(F1).unwrap();
        assert_eq!(blocking_edges(&f1, &Matching::empty(&f1)).unwrap().edges, vec![0]);

        let f2 = parse_instance(F2).unwrap();
        let ma = Matching::from_pairs(&f2, [(0, 0), (1, 1)]).unwrap();
        assert!(blocking_edges(&f2, &ma).unwrap().is_empty());

        let f3 = parse_instance(F3).unwrap();
        let m = Matching::from_pairs(&f3, [(0, 0)]).unwrap();
        let report = blocking_edges(&f3, &m).unwrap();
        assert_eq!(report.edges, vec![f3.edge_between(1, 0).unwrap()]);
    }

    #[test]
    fn blocking_rejects_foreign_matching() {
        let f2 = parse_instance(F2).unwrap();
        let f1 = parse_instance(F1).unwrap();
        let ma = Matching::from_pairs(&f2, [(0, 0), (1, 1)]).unwrap();
        assert!(blocking_edges(&f1, &ma).is_err());
    }

    #[test]
    fn man_optimal_examples() {
        let f0 = parse_instance(F0).unwrap();
        assert!(man_optimal(&f0).unwrap().is_empty());
        let f2 = parse_instance(F2).unwrap();
        assert_eq!(pairs(&f2, &man_optimal(&f2).unwrap()), p(&[("m1", "w1"), ("m2", "w2")]));
        let f3 = parse_instance(F3).unwrap();
        assert_eq!(man_optimal(&f3), Err(NoSolution));
        let f4 = parse_instance(F4).unwrap();
        let m = man_optimal(&f4).unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(m.signature(&f4).ranks(), &[Some(1), Some(1)]);
    }

    #[test]
    fn woman_optimal_examples() {
        let f2 = parse_instance(F2).unwrap();
        assert_eq!(pairs(&f2, &woman_optimal(&f2).unwrap()), p(&[("m1", "w2"), ("m2", "w1")]));
        let f1 = parse_instance(F1).unwrap();
        assert_eq!(pairs(&f1, &woman_optimal(&f1).unwrap()), p(&[("m1", "w1")]));
        let f3 = parse_instance(F3).unwrap();
        assert_eq!(woman_optimal(&f3), Err(NoSolution));
    }
}
