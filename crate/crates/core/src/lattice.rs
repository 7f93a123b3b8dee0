//! Dominance, equivalence and the man-better / man-worse combinations of
//! strongly stable matchings, plus classification of the alternating cycles in
//! a symmetric difference.

use std::cmp::Ordering;

use thiserror::Error;

use crate::instance::Instance;
use crate::matching::{rank_cmp, Matching, MatchingError, Signature};

/// An equivalence class of strongly stable matchings: all members give every
/// man a partner of the same rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingClass {
    pub representative: Matching,
    pub signature: Signature,
}

impl MatchingClass {
    pub fn of(inst: &Instance, representative: Matching) -> Self {
        let signature = representative.signature(inst);
        MatchingClass {
            representative,
            signature,
        }
    }
}

/// Every man weakly prefers his partner in `a` to his partner in `b`.
pub fn dominates(inst: &Instance, a: &Matching, b: &Matching) -> bool {
    a.signature(inst).dominates(&b.signature(inst))
}

/// Every man is indifferent between his partners in `a` and `b`.
pub fn equivalent(inst: &Instance, a: &Matching, b: &Matching) -> bool {
    a.signature(inst) == b.signature(inst)
}

fn combine(
    inst: &Instance,
    a: &Matching,
    b: &Matching,
    take_a: impl Fn(Ordering) -> bool,
) -> Result<Matching, MatchingError> {
    a.check_against(inst)?;
    b.check_against(inst)?;
    let pairs = (0..inst.men_count()).filter_map(|m| {
        let ord = rank_cmp(a.man_rank(inst, m), b.man_rank(inst, m));
        let w = if take_a(ord) { a.man_partner(m) } else { b.man_partner(m) };
        w.map(|w| (m, w))
    });
    Matching::from_pairs(inst, pairs)
}

/// Each man keeps the partner he weakly prefers; ties go to `a`.
///
/// For strongly stable inputs the result is a strongly stable matching
/// dominating both. Inputs that are not strongly stable may collide on a woman,
/// which is reported as [`MatchingError::VertexReused`].
pub fn join_men(inst: &Instance, a: &Matching, b: &Matching) -> Result<Matching, MatchingError> {
    combine(inst, a, b, |ord| ord != Ordering::Greater)
}

/// Each man keeps the partner he likes less; ties go to `a`. Dominated by both
/// inputs.
pub fn meet_men(inst: &Instance, a: &Matching, b: &Matching) -> Result<Matching, MatchingError> {
    combine(inst, a, b, |ord| ord != Ordering::Less)
}

/// How the vertices of one alternating cycle fare when moving from the first
/// matching to the second.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CycleKind {
    Indifferent,
    MenWorseWomenBetter,
    MenBetterWomenWorse,
}

/// One cycle of `from ⊕ to`. `(men[i], women[i])` is an edge of `from` and
/// `(men[i + 1], women[i])` an edge of `to`, indices taken cyclically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AltCycle {
    pub men: Vec<usize>,
    pub women: Vec<usize>,
    pub kind: CycleKind,
}

impl AltCycle {
    /// `(man, rank before, rank after)` for each man on the cycle.
    pub fn man_moves(&self, inst: &Instance) -> Vec<(usize, u32, u32)> {
        let k = self.men.len();
        (0..k)
            .map(|i| {
                let m = self.men[i];
                let before = inst.man_rank(m, self.women[i]).expect("cycle edge");
                let after = inst.man_rank(m, self.women[(i + k - 1) % k]).expect("cycle edge");
                (m, before, after)
            })
            .collect()
    }

    /// `(woman, rank before, rank after)` for each woman on the cycle.
    pub fn woman_moves(&self, inst: &Instance) -> Vec<(usize, u32, u32)> {
        let k = self.men.len();
        (0..k)
            .map(|i| {
                let w = self.women[i];
                let before = inst.woman_rank(w, self.men[i]).expect("cycle edge");
                let after = inst.woman_rank(w, self.men[(i + 1) % k]).expect("cycle edge");
                (w, before, after)
            })
            .collect()
    }

    /// Whether every position satisfies `kind`.
    pub fn satisfies(&self, inst: &Instance, kind: CycleKind) -> bool {
        let men = self.man_moves(inst);
        let women = self.woman_moves(inst);
        let (man_ok, woman_ok): (fn(u32, u32) -> bool, fn(u32, u32) -> bool) = match kind {
            CycleKind::Indifferent => (|b, a| a == b, |b, a| a == b),
            CycleKind::MenWorseWomenBetter => (|b, a| a > b, |b, a| a < b),
            CycleKind::MenBetterWomenWorse => (|b, a| a < b, |b, a| a > b),
        };
        men.iter().all(|&(_, b, a)| man_ok(b, a)) && women.iter().all(|&(_, b, a)| woman_ok(b, a))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycleError {
    #[error("`{0}` is matched in only one of the two matchings")]
    Path(String),
    #[error("cycle through `{0}` fits none of the three cycle kinds")]
    Mixed(String),
    #[error(transparent)]
    Matching(#[from] MatchingError),
}

/// Decomposes `from ⊕ to` into alternating cycles and classifies each one.
/// Cycles are listed by their smallest man, each starting at that man.
pub fn sym_diff_cycles(inst: &Instance, from: &Matching, to: &Matching) -> Result<Vec<AltCycle>, CycleError> {
    from.check_against(inst)?;
    to.check_against(inst)?;
    for m in 0..inst.men_count() {
        if from.man_partner(m).is_some() != to.man_partner(m).is_some() {
            return Err(CycleError::Path(inst.man_id(m).into()));
        }
    }
    for w in 0..inst.women_count() {
        if from.woman_partner(w).is_some() != to.woman_partner(w).is_some() {
            return Err(CycleError::Path(inst.woman_id(w).into()));
        }
    }
    let mut seen = vec![false; inst.men_count()];
    let mut cycles = Vec::new();
    for start in 0..inst.men_count() {
        if seen[start] || from.man_partner(start) == to.man_partner(start) {
            continue;
        }
        let mut men = Vec::new();
        let mut women = Vec::new();
        let mut m = start;
        loop {
            seen[m] = true;
            let w = from.man_partner(m).expect("matched in both");
            men.push(m);
            women.push(w);
            m = to.woman_partner(w).expect("matched in both");
            if m == start {
                break;
            }
        }
        let mut cycle = AltCycle {
            men,
            women,
            kind: CycleKind::Indifferent,
        };
        cycle.kind = [
            CycleKind::Indifferent,
            CycleKind::MenWorseWomenBetter,
            CycleKind::MenBetterWomenWorse,
        ]
        .into_iter()
        .find(|&k| cycle.satisfies(inst, k))
        .ok_or_else(|| CycleError::Mixed(inst.man_id(start).into()))?;
        cycles.push(cycle);
    }
    Ok(cycles)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::parse_instance;

    const F2: &str = "men: m1 m2\nwomen: w1 w2\nm1: w1 w2\nm2: w2 w1\nw1: m2 m1\nw2: m1 m2\n";
    const F4: &str =
        "men: m1 m2\nwomen: w1 w2\nm1: (w1 w2)\nm2: (w1 w2)\nw1: (m1 m2)\nw2: (m1 m2)\n";
    const F6: &str = "men: m1 m2 m3 m4\nwomen: w1 w2 w3 w4\n\
        m1: w1 w2\nm2: w2 w1\nm3: w3 w4\nm4: w4 w3\n\
        w1: m2 m1\nw2: m1 m2\nw3: m4 m3\nw4: m3 m4\n";

    fn f2() -> (Instance, Matching, Matching) {
        let inst = parse_instance(F2).unwrap();
        let ma = Matching::from_pairs(&inst, [(0, 0), (1, 1)]).unwrap();
        let mb = Matching::from_pairs(&inst, [(0, 1), (1, 0)]).unwrap();
        (inst, ma, mb)
    }

    #[test]
    fn dominance_and_equivalence() {
        let (inst, ma, mb) = f2();
        assert!(dominates(&inst, &ma, &mb));
        assert!(!dominates(&inst, &mb, &ma));
        assert!(dominates(&inst, &ma, &ma));
        assert!(!equivalent(&inst, &ma, &mb));
        assert!(equivalent(&inst, &mb, &mb));

        let f4 = parse_instance(F4).unwrap();
        let x = Matching::from_pairs(&f4, [(0, 0), (1, 1)]).unwrap();
        let y = Matching::from_pairs(&f4, [(0, 1), (1, 0)]).unwrap();
        assert!(dominates(&f4, &x, &y) && dominates(&f4, &y, &x));
        assert!(equivalent(&f4, &x, &y));
    }

    #[test]
    fn join_and_meet_on_f2() {
        let (inst, ma, mb) = f2();
        assert_eq!(join_men(&inst, &ma, &mb).unwrap(), ma);
        assert_eq!(join_men(&inst, &mb, &ma).unwrap(), ma);
        assert_eq!(meet_men(&inst, &ma, &mb).unwrap(), mb);
        assert_eq!(join_men(&inst, &mb, &mb).unwrap(), mb);
        assert_eq!(meet_men(&inst, &ma, &ma).unwrap(), ma);
    }

    #[test]
    fn join_and_meet_on_product() {
        let inst = parse_instance(F6).unwrap();
        let top = Matching::from_pairs(&inst, [(0, 0), (1, 1), (2, 2), (3, 3)]).unwrap();
        let left = Matching::from_pairs(&inst, [(0, 1), (1, 0), (2, 2), (3, 3)]).unwrap();
        let right = Matching::from_pairs(&inst, [(0, 0), (1, 1), (2, 3), (3, 2)]).unwrap();
        let bottom = Matching::from_pairs(&inst, [(0, 1), (1, 0), (2, 3), (3, 2)]).unwrap();
        assert_eq!(join_men(&inst, &left, &right).unwrap(), top);
        assert_eq!(meet_men(&inst, &left, &right).unwrap(), bottom);
    }

    #[test]
    fn cycles() {
        let (inst, ma, mb) = f2();
        assert!(sym_diff_cycles(&inst, &ma, &ma).unwrap().is_empty());
        let c = sym_diff_cycles(&inst, &mb, &ma).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].kind, CycleKind::MenBetterWomenWorse);
        assert_eq!(c[0].men, vec![0, 1]);
        let c = sym_diff_cycles(&inst, &ma, &mb).unwrap();
        assert_eq!(c[0].kind, CycleKind::MenWorseWomenBetter);
        assert_eq!(c[0].man_moves(&inst), vec![(0, 1, 2), (1, 1, 2)]);

        let f4 = parse_instance(F4).unwrap();
        let x = Matching::from_pairs(&f4, [(0, 0), (1, 1)]).unwrap();
        let y = Matching::from_pairs(&f4, [(0, 1), (1, 0)]).unwrap();
        let c = sym_diff_cycles(&f4, &x, &y).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].kind, CycleKind::Indifferent);
    }

    #[test]
    fn cycle_errors() {
        let (inst, ma, _) = f2();
        let half = Matching::from_pairs(&inst, [(0, 0)]).unwrap();
        assert!(matches!(sym_diff_cycles(&inst, &ma, &half), Err(CycleError::Path(_))));
        // m1 better off, m2 worse off on the same cycle
        let mixed = parse_instance(
            "men: m1 m2\nwomen: w1 w2\nm1: w1 w2\nm2: w1 w2\nw1: m1 m2\nw2: m1 m2\n",
        )
        .unwrap();
        let a = Matching::from_pairs(&mixed, [(0, 0), (1, 1)]).unwrap();
        let b = Matching::from_pairs(&mixed, [(0, 1), (1, 0)]).unwrap();
        assert!(matches!(sym_diff_cycles(&mixed, &a, &b), Err(CycleError::Mixed(_))));
    }
}
