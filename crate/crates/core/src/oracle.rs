//! Exhaustive ground truth for small instances: every matching is enumerated
//! and filtered by the blocking-edge test.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::instance::Instance;
use crate::lattice::MatchingClass;
use crate::matching::{Matching, Signature};
use crate::solver::blocks;

pub const DEFAULT_CAP: u64 = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("refusing to enumerate more than {cap} matchings")]
pub struct CapExceeded {
    pub cap: u64,
}

#[derive(Debug, Clone)]
pub struct OracleResult {
    /// All strongly stable matchings, sorted by signature then pairs.
    pub all_stable: Vec<Matching>,
    /// One class per distinct signature, sorted by signature.
    pub classes: Vec<MatchingClass>,
    /// `order[i][j]`: class `i` dominates class `j`.
    pub order: Vec<Vec<bool>>,
    /// Number of matchings enumerated, stable or not.
    pub enumerated: u64,
}

impl OracleResult {
    pub fn class_index(&self, sig: &Signature) -> Option<usize> {
        self.classes
            .binary_search_by(|c| c.signature.cmp(sig))
            .ok()
    }

    /// Union of edges over all strongly stable matchings, as `(man, woman)`.
    pub fn stable_pairs(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<_> = self.all_stable.iter().flat_map(|m| m.pairs()).collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

pub fn oracle_enumerate(inst: &Instance, cap: u64) -> Result<OracleResult, CapExceeded> {
    let order: Vec<usize> = (0..inst.men_count()).collect();
    oracle_enumerate_in_order(inst, cap, &order)
}

/// As [`oracle_enumerate`], branching over men in the given order.
pub fn oracle_enumerate_in_order(
    inst: &Instance,
    cap: u64,
    men_order: &[usize],
) -> Result<OracleResult, CapExceeded> {
    struct Search<'a> {
        inst: &'a Instance,
        order: &'a [usize],
        partner: Vec<Option<usize>>,
        woman_used: Vec<bool>,
        count: u64,
        cap: u64,
        stable: Vec<Matching>,
    }

    impl Search<'_> {
        fn go(&mut self, i: usize) -> Result<(), CapExceeded> {
            if i == self.order.len() {
                self.count += 1;
                if self.count > self.cap {
                    return Err(CapExceeded { cap: self.cap });
                }
                let m = Matching::from_man_partners(self.inst.women_count(), self.partner.clone());
                if (0..self.inst.edge_count()).all(|e| !blocks(self.inst, &m, e)) {
                    self.stable.push(m);
                }
                return Ok(());
            }
            let man = self.order[i];
            self.go(i + 1)?;
            for e in self.inst.man_edges(man) {
                let w = self.inst.edge(e).woman;
                if self.woman_used[w] {
                    continue;
                }
                self.woman_used[w] = true;
                self.partner[man] = Some(w);
                self.go(i + 1)?;
                self.partner[man] = None;
                self.woman_used[w] = false;
            }
            Ok(())
        }
    }

    assert_eq!(men_order.len(), inst.men_count(), "order must list every man");
    let mut s = Search {
        inst,
        order: men_order,
        partner: vec![None; inst.men_count()],
        woman_used: vec![false; inst.women_count()],
        count: 0,
        cap,
        stable: Vec::new(),
    };
    s.go(0)?;

    let mut stable = s.stable;
    stable.sort_by_cached_key(|m| (m.signature(inst), m.pairs().collect::<Vec<_>>()));
    let mut grouped: BTreeMap<Signature, Matching> = BTreeMap::new();
    for m in &stable {
        grouped.entry(m.signature(inst)).or_insert_with(|| m.clone());
    }
    let classes: Vec<MatchingClass> = grouped
        .into_iter()
        .map(|(signature, representative)| MatchingClass {
            representative,
            signature,
        })
        .collect();
    let order = classes
        .iter()
        .map(|a| classes.iter().map(|b| a.signature.dominates(&b.signature)).collect())
        .collect();
    Ok(OracleResult {
        all_stable: stable,
        classes,
        order,
        enumerated: s.count,
    })
}
