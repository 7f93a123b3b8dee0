//! Maximal sequences `M₀ ≻ M₁ ≻ … ≻ M_z` of strongly stable matchings, from
//! the man-optimal to the woman-optimal class, each step a strict successor.
//!
//! The state keeps three edge sets over the current matching `M`:
//!
//! * `E_d`, the dependency graph. Matched edges point woman → man, all others
//!   man → woman. If a vertex changes rank in a successor, so does everything
//!   it reaches.
//! * `E_c ⊆ E_d`, candidate edges: for men in a closed component (no edge
//!   leaving it), the best edges they could take when moving down.
//! * `E'`, the pool of edges not yet promoted.
//!
//! A partial matching `M'` over `E_c` is grown by augmenting paths ending at a
//! free woman of maximal level. Whenever it is perfect on a closed component,
//! the component is re-matched and emitted.

use std::fmt::Write as _;

use thiserror::Error;

use crate::instance::{EdgeId, Instance};
use crate::matching::{format_matching, rank_cmp, Matching};
use crate::scc::Components;
use crate::solver::{is_strongly_stable, man_optimal, woman_optimal, NoSolution};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SequenceError {
    #[error(transparent)]
    NoSolution(#[from] NoSolution),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

/// Order in which vertices are scanned whenever several qualify.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    #[default]
    Ascending,
    Descending,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SequenceOptions {
    pub tie_break: TieBreak,
    /// Re-check the state invariants after every step; violations are errors.
    pub audit: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaximalSequence {
    pub matchings: Vec<Matching>,
}

impl MaximalSequence {
    /// Number of steps `z`.
    pub fn steps(&self) -> usize {
        self.matchings.len().saturating_sub(1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Stage {
    Grow,
    Emit,
}

/// Resumable state of the sequence computation.
#[derive(Debug, Clone)]
pub struct SuccessorState<'a> {
    inst: &'a Instance,
    opts: SequenceOptions,
    man_mate: Vec<Option<usize>>,
    woman_mate: Vec<Option<usize>>,
    target: Matching,
    target_rank: Vec<Option<u32>>,
    in_ed: Vec<bool>,
    in_ec: Vec<bool>,
    in_pool: Vec<bool>,
    level: Vec<Option<u32>>,
    /// `M'`, by side.
    sub_man: Vec<Option<usize>>,
    sub_woman: Vec<Option<usize>>,
    /// First tie of each man that may still hold pool edges.
    pool_head: Vec<usize>,
    scc: Option<(Components, Vec<bool>)>,
    phase: u32,
    stage: Stage,
    phase_changes: u64,
    changes: u64,
    emitted: usize,
    /// Audit only: `l(m)` snapshot taken after the previous emission.
    floor_snapshot: Option<Vec<Option<u32>>>,
}

impl<'a> SuccessorState<'a> {
    pub fn new(inst: &'a Instance, opts: SequenceOptions) -> Result<Self, SequenceError> {
        let start = man_optimal(inst)?;
        let target = woman_optimal(inst)?;
        let men = inst.men_count();
        let women = inst.women_count();
        let edges = inst.edge_count();
        let mut st = SuccessorState {
            inst,
            opts,
            man_mate: (0..men).map(|m| start.man_partner(m)).collect(),
            woman_mate: (0..women).map(|w| start.woman_partner(w)).collect(),
            target_rank: (0..men).map(|m| target.man_rank(inst, m)).collect(),
            target,
            in_ed: vec![false; edges],
            in_ec: vec![false; edges],
            in_pool: vec![true; edges],
            level: vec![None; edges],
            sub_man: vec![None; men],
            sub_woman: vec![None; women],
            pool_head: vec![0; men],
            scc: None,
            phase: 1,
            stage: Stage::Grow,
            phase_changes: 0,
            changes: 0,
            emitted: 0,
            floor_snapshot: None,
        };
        for m in 0..men {
            let Some(w) = st.man_mate[m] else { continue };
            let e = st.edge(m, w);
            st.in_ed[e] = true;
            st.in_pool[e] = false;
            if st.is_done(m) {
                st.add_candidate_raw(e);
                st.set_sub(m, w);
            }
        }
        for w in 0..women {
            if let Some(m) = st.woman_mate[w] {
                st.prune_pool_at_woman(w, inst.woman_rank(w, m).expect("matched edge"));
            }
        }
        for m in 0..men {
            st.prune_pool_at_man(m);
        }
        st.floor_snapshot = st.opts.audit.then(|| st.floors());
        Ok(st)
    }

    pub fn current(&self) -> Matching {
        Matching::from_man_partners(self.inst.women_count(), self.man_mate.clone())
    }

    pub fn target(&self) -> &Matching {
        &self.target
    }

    pub fn phase(&self) -> u32 {
        self.phase
    }

    /// Every man already has his rank in the woman-optimal matching.
    pub fn finished(&self) -> bool {
        (0..self.inst.men_count()).all(|m| self.is_done(m))
    }

    fn edge(&self, m: usize, w: usize) -> EdgeId {
        self.inst.edge_between(m, w).expect("matched pair is an edge")
    }

    fn man_rank(&self, m: usize) -> Option<u32> {
        self.man_mate[m].map(|w| self.inst.man_rank(m, w).expect("matched edge"))
    }

    fn woman_rank(&self, w: usize) -> Option<u32> {
        self.woman_mate[w].map(|m| self.inst.woman_rank(w, m).expect("matched edge"))
    }

    fn is_done(&self, m: usize) -> bool {
        self.man_rank(m) == self.target_rank[m]
    }

    fn order(&self, n: usize) -> Box<dyn Iterator<Item = usize>> {
        match self.opts.tie_break {
            TieBreak::Ascending => Box::new(0..n),
            TieBreak::Descending => Box::new((0..n).rev()),
        }
    }

    fn touch(&mut self) {
        self.changes += 1;
    }

    fn set_sub(&mut self, m: usize, w: usize) {
        self.sub_man[m] = Some(w);
        self.sub_woman[w] = Some(m);
    }

    fn add_candidate_raw(&mut self, e: EdgeId) {
        self.in_ec[e] = true;
        self.level[e].get_or_insert(self.phase);
    }

    fn drop_candidate(&mut self, e: EdgeId) {
        if !self.in_ec[e] {
            return;
        }
        self.in_ec[e] = false;
        let edge = self.inst.edge(e);
        if self.sub_man[edge.man] == Some(edge.woman) {
            self.sub_man[edge.man] = None;
            self.sub_woman[edge.woman] = None;
        }
        self.touch();
    }

    fn drop_pool(&mut self, e: EdgeId) {
        if self.in_pool[e] {
            self.in_pool[e] = false;
            self.touch();
        }
    }

    /// Drops pool edges `w` ranks strictly below `rank`.
    fn prune_pool_at_woman(&mut self, w: usize, rank: u32) {
        let inst = self.inst;
        for e in inst.woman_edges(w) {
            if inst.edge(e).woman_rank > rank {
                self.drop_pool(e);
            }
        }
    }

    /// Drops pool edges `m` ranks strictly above his partner.
    fn prune_pool_at_man(&mut self, m: usize) {
        let Some(rank) = self.man_rank(m) else { return };
        let inst = self.inst;
        for e in inst.man_edges(m) {
            if inst.edge(e).man_rank < rank {
                self.drop_pool(e);
            }
        }
    }

    fn candidate_degree(&self, m: usize) -> usize {
        self.inst.man_edges(m).filter(|&e| self.in_ec[e]).count()
    }

    /// Best rank among `w`'s candidate edges.
    fn candidate_rank_at(&self, w: usize) -> Option<u32> {
        self.inst
            .woman_edges(w)
            .filter(|&e| self.in_ec[e])
            .map(|e| self.inst.edge(e).woman_rank)
            .min()
    }

    fn woman_level(&self, w: usize) -> Option<u32> {
        self.inst
            .woman_edges(w)
            .filter(|&e| self.in_ec[e])
            .filter_map(|e| self.level[e])
            .min()
    }

    /// `l(m)`: best rank over the man's pool and candidate edges.
    fn floor(&self, m: usize) -> Option<u32> {
        self.inst
            .man_edges(m)
            .filter(|&e| self.in_pool[e] || self.in_ec[e])
            .map(|e| self.inst.edge(e).man_rank)
            .min()
    }

    /// Whether a man moving down to rank `floor` or below forces the woman of
    /// `e` to change rank. She must weakly prefer him to her partner, and
    /// strictly so when the edge sits exactly at the floor below his own tie.
    fn is_dependency(&self, e: EdgeId, floor: u32) -> bool {
        let edge = self.inst.edge(e);
        let Some(own) = self.man_rank(edge.man) else { return false };
        if edge.man_rank < own || edge.man_rank > floor {
            return false;
        }
        match rank_cmp(Some(edge.woman_rank), self.woman_rank(edge.woman)) {
            std::cmp::Ordering::Less => true,
            std::cmp::Ordering::Equal => edge.man_rank < floor || edge.man_rank == own,
            std::cmp::Ordering::Greater => false,
        }
    }

    fn floors(&self) -> Vec<Option<u32>> {
        (0..self.inst.men_count()).map(|m| self.floor(m)).collect()
    }

    fn graph(&self) -> Vec<Vec<usize>> {
        let men = self.inst.men_count();
        let mut adj = vec![Vec::new(); men + self.inst.women_count()];
        for (e, edge) in self.inst.edges().iter().enumerate() {
            if !self.in_ed[e] {
                continue;
            }
            if self.man_mate[edge.man] == Some(edge.woman) {
                adj[men + edge.woman].push(edge.man);
            } else {
                adj[edge.man].push(men + edge.woman);
            }
        }
        adj
    }

    fn components(&mut self) -> &(Components, Vec<bool>) {
        if self.scc.is_none() {
            let adj = self.graph();
            let comps = Components::compute(&adj);
            let closed = comps.out_degrees(&adj).into_iter().map(|d| d == 0).collect();
            self.scc = Some((comps, closed));
        }
        self.scc.as_ref().expect("just computed")
    }

    fn invalidate(&mut self) {
        self.scc = None;
    }

    fn closed_man(&mut self, m: usize) -> bool {
        let (comps, closed) = self.components();
        closed[comps.comp[m]]
    }

    /// The pool's best tie for `m`, or `None` when his pool is empty.
    fn top_pool_tie(&mut self, m: usize) -> Option<Vec<EdgeId>> {
        let ties = self.inst.man_ties(m);
        while self.pool_head[m] < ties.len() {
            let tie: Vec<EdgeId> = ties[self.pool_head[m]]
                .iter()
                .copied()
                .filter(|&e| self.in_pool[e])
                .collect();
            if !tie.is_empty() {
                return Some(tie);
            }
            self.pool_head[m] += 1;
        }
        None
    }

    /// Men without candidate edges in closed components take their next pool
    /// tie into `E_d`, and into `E_c` when the component stays closed.
    fn promote(&mut self) -> Result<(), SequenceError> {
        loop {
            let men = self.inst.men_count();
            let mut pick = None;
            for m in self.order(men) {
                if !self.is_done(m) && self.candidate_degree(m) == 0 && self.closed_man(m) {
                    pick = Some(m);
                    break;
                }
            }
            let Some(m) = pick else { return Ok(()) };
            let tie = self.top_pool_tie(m).ok_or_else(|| {
                SequenceError::Invariant(format!(
                    "man `{}` must move but has no edges left",
                    self.inst.man_id(m)
                ))
            })?;
            let floor = self.inst.edge(tie[0]).man_rank;
            let inst = self.inst;
            for e in inst.man_edges(m) {
                if !self.in_ed[e] && self.is_dependency(e, floor) {
                    self.in_ed[e] = true;
                    self.touch();
                    self.invalidate();
                }
            }
            if !self.closed_man(m) {
                continue;
            }
            let my_rank = self.man_rank(m);
            for &e in &tie {
                let edge = self.inst.edge(e);
                let w = edge.woman;
                let woman_better = rank_cmp(Some(edge.woman_rank), self.woman_rank(w)).is_lt();
                let man_worse = rank_cmp(my_rank, Some(edge.man_rank)).is_lt();
                if !(woman_better && man_worse) {
                    continue;
                }
                match self.candidate_rank_at(w) {
                    Some(r) if r < edge.woman_rank => continue,
                    Some(r) if r > edge.woman_rank => {
                        let inst = self.inst;
                        for other in inst.woman_edges(w) {
                            self.drop_candidate(other);
                        }
                    }
                    _ => {}
                }
                self.add_candidate_raw(e);
                self.touch();
            }
            for &e in &tie {
                self.drop_pool(e);
            }
            self.audit()?;
        }
    }

    /// Grows `M'` from free men in closed components, deleting the candidate
    /// edges of `N(Z)` whenever no augmenting path exists.
    fn augment(&mut self) -> Result<(), SequenceError> {
        loop {
            let men = self.inst.men_count();
            let mut pick = None;
            for m in self.order(men) {
                if !self.is_done(m)
                    && self.sub_man[m].is_none()
                    && self.candidate_degree(m) > 0
                    && self.closed_man(m)
                {
                    pick = Some(m);
                    break;
                }
            }
            let Some(start) = pick else { return Ok(()) };
            self.augment_from(start);
            self.audit()?;
        }
    }

    fn augment_from(&mut self, start: usize) {
        let inst = self.inst;
        let women = inst.women_count();
        let mut seen_man = vec![false; inst.men_count()];
        // Man through which each woman was first reached.
        let mut via: Vec<Option<usize>> = vec![None; women];
        let mut reached = Vec::new();
        let mut free_women = Vec::new();
        let mut queue = std::collections::VecDeque::from([start]);
        seen_man[start] = true;
        while let Some(m) = queue.pop_front() {
            for e in inst.man_edges(m) {
                if !self.in_ec[e] {
                    continue;
                }
                let w = inst.edge(e).woman;
                if via[w].is_some() || self.sub_man[m] == Some(w) {
                    continue;
                }
                via[w] = Some(m);
                reached.push(w);
                match self.sub_woman[w] {
                    None => free_women.push(w),
                    Some(next) if !seen_man[next] => {
                        seen_man[next] = true;
                        queue.push_back(next);
                    }
                    Some(_) => {}
                }
            }
        }

        if free_women.is_empty() {
            for w in reached {
                let Some(cut) = self.candidate_rank_at(w) else { continue };
                for e in inst.woman_edges(w) {
                    if self.in_ec[e] {
                        self.drop_candidate(e);
                    }
                    if inst.edge(e).woman_rank >= cut {
                        self.drop_pool(e);
                    }
                }
            }
            return;
        }

        let key = |w: usize| self.woman_level(w).unwrap_or(0);
        let target = match self.opts.tie_break {
            TieBreak::Ascending => free_women
                .iter()
                .copied()
                .max_by(|&a, &b| key(a).cmp(&key(b)).then(b.cmp(&a))),
            TieBreak::Descending => free_women
                .iter()
                .copied()
                .max_by(|&a, &b| key(a).cmp(&key(b)).then(a.cmp(&b))),
        }
        .expect("nonempty");
        let mut w = target;
        loop {
            let m = via[w].expect("reached woman has a predecessor");
            let previous = self.sub_man[m];
            self.set_sub(m, w);
            match previous {
                Some(prev) => {
                    self.sub_woman[prev] = None;
                    w = prev;
                }
                None => break,
            }
        }
        self.touch();
    }

    /// A closed component on which `M'` is perfect, as its vertex list.
    fn emittable(&mut self) -> Option<Vec<usize>> {
        let men = self.inst.men_count();
        let n = men + self.inst.women_count();
        let order: Vec<usize> = self.order(n).collect();
        let sub_man = self.sub_man.clone();
        let sub_woman = self.sub_woman.clone();
        let (comps, closed) = self.components();
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); comps.count];
        for v in 0..n {
            members[comps.comp[v]].push(v);
        }
        let mut checked = vec![false; comps.count];
        for v in order {
            let c = comps.comp[v];
            if checked[c] {
                continue;
            }
            checked[c] = true;
            if !closed[c] || members[c].len() < 2 {
                continue;
            }
            let perfect = members[c].iter().all(|&x| {
                let mate = if x < men {
                    sub_man[x].map(|w| men + w)
                } else {
                    sub_woman[x - men]
                };
                mate.is_some_and(|y| comps.comp[y] == c)
            });
            if perfect {
                return Some(std::mem::take(&mut members[c]));
            }
        }
        None
    }

    fn emit(&mut self, component: &[usize]) -> Result<Matching, SequenceError> {
        let inst = self.inst;
        let men = inst.men_count();
        let before = self.current();
        let mut in_s_man = vec![false; men];
        let mut in_s_woman = vec![false; inst.women_count()];
        for &v in component {
            if v < men {
                in_s_man[v] = true;
            } else {
                in_s_woman[v - men] = true;
            }
        }
        for m in (0..men).filter(|&m| in_s_man[m]) {
            let w = self.sub_man[m].expect("perfect on component");
            self.man_mate[m] = Some(w);
            self.woman_mate[w] = Some(m);
        }
        let next = self.current();
        if !is_strongly_stable(inst, &next) {
            return Err(SequenceError::Invariant(format!(
                "emitted matching {} is blocked",
                self.emitted + 1
            )));
        }
        if self.opts.audit {
            self.audit_emission(&before, &next, &in_s_man, &in_s_woman)?;
        }

        for m in (0..men).filter(|&m| in_s_man[m]) {
            let w = self.sub_man[m].take().expect("perfect on component");
            self.sub_woman[w] = None;
        }
        for (e, edge) in inst.edges().iter().enumerate() {
            let (m, w) = (edge.man, edge.woman);
            if in_s_man[m] || in_s_woman[w] {
                self.in_ec[e] = false;
            }
            if in_s_man[m] {
                // Moving men restart from their new tie; settled men keep only
                // their matched edge, so they stay sinks.
                self.in_ed[e] = if self.is_done(m) {
                    self.man_mate[m] == Some(w)
                } else {
                    Some(edge.man_rank) == self.man_rank(m)
                        && rank_cmp(Some(edge.woman_rank), self.woman_rank(w)).is_le()
                };
            } else if in_s_woman[w] && self.in_ed[e] {
                let floor = self.floor(m).unwrap_or(u32::MAX);
                self.in_ed[e] = self.is_dependency(e, floor);
            }
        }
        for m in (0..men).filter(|&m| in_s_man[m]) {
            if self.is_done(m) {
                let w = self.man_mate[m].expect("done men in a component are matched");
                let e = self.edge(m, w);
                self.add_candidate_raw(e);
                self.set_sub(m, w);
            }
            self.prune_pool_at_man(m);
        }
        for w in (0..inst.women_count()).filter(|&w| in_s_woman[w]) {
            if let Some(r) = self.woman_rank(w) {
                self.prune_pool_at_woman(w, r);
            }
        }
        self.invalidate();
        self.touch();
        self.emitted += 1;
        if self.opts.audit {
            self.floor_snapshot = Some(self.floors());
        }
        self.audit()?;
        Ok(next)
    }

    fn audit_emission(
        &mut self,
        before: &Matching,
        next: &Matching,
        in_s_man: &[bool],
        in_s_woman: &[bool],
    ) -> Result<(), SequenceError> {
        let inst = self.inst;
        for m in 0..inst.men_count() {
            let moved = before.man_rank(inst, m) != next.man_rank(inst, m);
            if moved != in_s_man[m] {
                return Err(SequenceError::Invariant(format!(
                    "man `{}` {} the emitted component but {} rank",
                    inst.man_id(m),
                    if in_s_man[m] { "is in" } else { "is outside" },
                    if moved { "changed" } else { "kept" }
                )));
            }
            if moved {
                let floor = self.floor_snapshot.as_ref().and_then(|f| f[m]);
                let now = next.man_rank(inst, m);
                if rank_cmp(now, floor).is_lt() {
                    return Err(SequenceError::Invariant(format!(
                        "man `{}` moved above his recorded floor",
                        inst.man_id(m)
                    )));
                }
            }
        }
        for w in 0..inst.women_count() {
            let moved = before.woman_rank(inst, w) != next.woman_rank(inst, w);
            if moved != in_s_woman[w] {
                return Err(SequenceError::Invariant(format!(
                    "woman `{}` disagrees with the emitted component",
                    inst.woman_id(w)
                )));
            }
        }
        Ok(())
    }

    fn audit(&mut self) -> Result<(), SequenceError> {
        if !self.opts.audit {
            return Ok(());
        }
        let inst = self.inst;
        let fail = |msg: String| Err(SequenceError::Invariant(msg));
        for (e, edge) in inst.edges().iter().enumerate() {
            if self.in_ec[e] && !self.in_ed[e] {
                return fail(format!("candidate edge {e} missing from the dependency graph"));
            }
            if !self.in_ed[e] || self.man_mate[edge.man] == Some(edge.woman) {
                continue;
            }
            if rank_cmp(Some(edge.man_rank), self.man_rank(edge.man)).is_lt()
                || rank_cmp(Some(edge.woman_rank), self.woman_rank(edge.woman)).is_gt()
            {
                return fail(format!("dependency edge {e} violates the rank bounds"));
            }
            if let Some(floor) = self.floor(edge.man) {
                if edge.man_rank > floor {
                    return fail(format!("dependency edge {e} lies below its man's floor"));
                }
            }
        }
        let men = inst.men_count();
        let comp = self.components().0.comp.clone();
        for (e, edge) in inst.edges().iter().enumerate() {
            let settled = self.is_done(edge.man) && self.man_mate[edge.man] == Some(edge.woman);
            if self.in_ec[e] && !settled && comp[edge.man] != comp[men + edge.woman] {
                return fail(format!("candidate edge {e} crosses components"));
            }
        }
        for w in 0..inst.women_count() {
            let ranks: Vec<u32> = inst
                .woman_edges(w)
                .filter(|&e| self.in_ec[e])
                .map(|e| inst.edge(e).woman_rank)
                .collect();
            if ranks.windows(2).any(|p| p[0] != p[1]) {
                return fail(format!("woman `{}` has candidate edges of mixed rank", inst.woman_id(w)));
            }
        }
        for m in 0..men {
            let levels: Vec<u32> = inst
                .man_edges(m)
                .filter(|&e| self.in_ec[e])
                .filter_map(|e| self.level[e])
                .collect();
            if levels.windows(2).any(|p| p[0] != p[1]) {
                return fail(format!("man `{}` has candidate edges of mixed level", inst.man_id(m)));
            }
        }
        self.audit_level_maximal()
    }

    /// No alternating path over `E_c` leads from a free woman to a woman of
    /// lower level.
    fn audit_level_maximal(&self) -> Result<(), SequenceError> {
        let inst = self.inst;
        for w0 in 0..inst.women_count() {
            if self.sub_woman[w0].is_some() {
                continue;
            }
            let Some(top) = self.woman_level(w0) else { continue };
            let mut seen = vec![false; inst.women_count()];
            seen[w0] = true;
            let mut stack = vec![w0];
            while let Some(w) = stack.pop() {
                for e in inst.woman_edges(w) {
                    if !self.in_ec[e] || self.sub_woman[w] == Some(inst.edge(e).man) {
                        continue;
                    }
                    let Some(next) = self.sub_man[inst.edge(e).man] else { continue };
                    if seen[next] {
                        continue;
                    }
                    seen[next] = true;
                    if self.woman_level(next).is_some_and(|l| l < top) {
                        return Err(SequenceError::Invariant(format!(
                            "matching over candidates is not level-maximal at `{}`",
                            inst.woman_id(next)
                        )));
                    }
                    stack.push(next);
                }
            }
        }
        Ok(())
    }
}

/// Runs the state until it emits the next matching of the sequence, or returns
/// `None` once the woman-optimal class has been reached.
pub fn strict_successor(state: &mut SuccessorState<'_>) -> Result<Option<Matching>, SequenceError> {
    loop {
        match state.stage {
            Stage::Grow => {
                state.promote()?;
                state.augment()?;
                state.stage = Stage::Emit;
            }
            Stage::Emit => {
                if let Some(component) = state.emittable() {
                    return state.emit(&component).map(Some);
                }
                if state.finished() {
                    return Ok(None);
                }
                if state.changes == state.phase_changes {
                    return Err(SequenceError::Invariant(format!(
                        "phase {} made no progress",
                        state.phase
                    )));
                }
                state.phase_changes = state.changes;
                state.phase += 1;
                state.stage = Stage::Grow;
            }
        }
    }
}

pub fn maximal_sequence(inst: &Instance) -> Result<MaximalSequence, SequenceError> {
    maximal_sequence_with(inst, SequenceOptions::default())
}

pub fn maximal_sequence_with(inst: &Instance, opts: SequenceOptions) -> Result<MaximalSequence, SequenceError> {
    let mut state = SuccessorState::new(inst, opts)?;
    let mut matchings = vec![state.current()];
    while let Some(next) = strict_successor(&mut state)? {
        let prev = matchings.last().expect("starts nonempty");
        if !prev.signature(inst).strictly_dominates(&next.signature(inst)) {
            return Err(SequenceError::Invariant(format!(
                "step {} does not strictly descend",
                matchings.len()
            )));
        }
        matchings.push(next);
    }
    let last = matchings.last().expect("starts nonempty");
    if last.signature(inst) != state.target().signature(inst) {
        return Err(SequenceError::Invariant(
            "sequence stopped short of the woman-optimal class".into(),
        ));
    }
    Ok(MaximalSequence { matchings })
}

/// Some class differs from both the man-optimal and the woman-optimal class.
pub fn has_intermediate(inst: &Instance) -> Result<bool, SequenceError> {
    Ok(maximal_sequence(inst)?.steps() >= 2)
}

/// Matching blocks separated by blank lines.
pub fn format_sequence(inst: &Instance, seq: &MaximalSequence) -> String {
    let mut out = String::new();
    for (i, m) in seq.matchings.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let _ = write!(out, "{}", format_matching(inst, m));
    }
    out
}
