//! Matchings over an [`Instance`] and the rank signatures used to compare them.

use std::cmp::Ordering;
use std::fmt::Write as _;

use thiserror::Error;

use crate::instance::{EdgeId, Instance};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchingError {
    #[error("`{0}` and `{1}` are not adjacent")]
    NotAnEdge(String, String),
    #[error("vertex `{0}` is matched twice")]
    VertexReused(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("line {0}: expected `<man> <woman>`")]
    MalformedLine(usize),
    #[error("matching does not belong to this instance")]
    SizeMismatch,
}

/// A set of vertex-disjoint edges, stored as partner arrays.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matching {
    man_partner: Vec<Option<usize>>,
    woman_partner: Vec<Option<usize>>,
}

impl Matching {
    pub fn empty(inst: &Instance) -> Self {
        Matching {
            man_partner: vec![None; inst.men_count()],
            woman_partner: vec![None; inst.women_count()],
        }
    }

    /// Builds a matching from `(man, woman)` index pairs, checking adjacency and
    /// disjointness.
    pub fn from_pairs(
        inst: &Instance,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, MatchingError> {
        let mut out = Matching::empty(inst);
        for (m, w) in pairs {
            if m >= inst.men_count() || w >= inst.women_count() {
                return Err(MatchingError::SizeMismatch);
            }
            if inst.edge_between(m, w).is_none() {
                return Err(MatchingError::NotAnEdge(
                    inst.man_id(m).into(),
                    inst.woman_id(w).into(),
                ));
            }
            if out.man_partner[m].is_some() {
                return Err(MatchingError::VertexReused(inst.man_id(m).into()));
            }
            if out.woman_partner[w].is_some() {
                return Err(MatchingError::VertexReused(inst.woman_id(w).into()));
            }
            out.man_partner[m] = Some(w);
            out.woman_partner[w] = Some(m);
        }
        Ok(out)
    }

    pub fn from_edges(
        inst: &Instance,
        edges: impl IntoIterator<Item = EdgeId>,
    ) -> Result<Self, MatchingError> {
        Self::from_pairs(
            inst,
            edges.into_iter().map(|e| {
                let e = inst.edge(e);
                (e.man, e.woman)
            }),
        )
    }

    /// Builds from a man-indexed partner array without any checks beyond
    /// disjointness. Used internally where adjacency holds by construction.
    pub(crate) fn from_man_partners(women: usize, man_partner: Vec<Option<usize>>) -> Self {
        let mut woman_partner = vec![None; women];
        for (m, w) in man_partner.iter().enumerate() {
            if let Some(w) = *w {
                assert!(woman_partner[w].is_none(), "woman matched twice");
                woman_partner[w] = Some(m);
            }
        }
        Matching {
            man_partner,
            woman_partner,
        }
    }

    /// Checks that this matching fits `inst` and only uses its edges.
    pub fn check_against(&self, inst: &Instance) -> Result<(), MatchingError> {
        if self.man_partner.len() != inst.men_count()
            || self.woman_partner.len() != inst.women_count()
        {
            return Err(MatchingError::SizeMismatch);
        }
        for (m, w) in self.pairs() {
            if inst.edge_between(m, w).is_none() {
                return Err(MatchingError::NotAnEdge(
                    inst.man_id(m).into(),
                    inst.woman_id(w).into(),
                ));
            }
        }
        Ok(())
    }

    pub fn man_partner(&self, m: usize) -> Option<usize> {
        self.man_partner[m]
    }

    pub fn woman_partner(&self, w: usize) -> Option<usize> {
        self.woman_partner[w]
    }

    pub fn contains(&self, m: usize, w: usize) -> bool {
        self.man_partner[m] == Some(w)
    }

    /// Pairs in increasing man index.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.man_partner
            .iter()
            .enumerate()
            .filter_map(|(m, w)| w.map(|w| (m, w)))
    }

    pub fn edge_ids<'a>(&'a self, inst: &'a Instance) -> impl Iterator<Item = EdgeId> + 'a {
        self.pairs()
            .map(|(m, w)| inst.edge_between(m, w).expect("matching edge"))
    }

    pub fn len(&self) -> usize {
        self.man_partner.iter().flatten().count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Rank of the man's partner on his list, `None` when unmatched.
    pub fn man_rank(&self, inst: &Instance, m: usize) -> Option<u32> {
        self.man_partner[m].map(|w| inst.man_rank(m, w).expect("matching edge"))
    }

    pub fn woman_rank(&self, inst: &Instance, w: usize) -> Option<u32> {
        self.woman_partner[w].map(|m| inst.woman_rank(w, m).expect("matching edge"))
    }

    pub fn signature(&self, inst: &Instance) -> Signature {
        Signature((0..inst.men_count()).map(|m| self.man_rank(inst, m)).collect())
    }

    /// The same matching seen from the role-swapped instance.
    pub fn swapped(&self) -> Matching {
        Matching {
            man_partner: self.woman_partner.clone(),
            woman_partner: self.man_partner.clone(),
        }
    }
}

/// Per-man partner rank (`None` = unmatched). Two strongly stable matchings are
/// equivalent exactly when their signatures are equal.
///
/// The derived order is lexicographic with smaller ranks first, which lists the
/// man-better class of a comparable pair first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature(pub Vec<Option<u32>>);

impl Signature {
    pub fn ranks(&self) -> &[Option<u32>] {
        &self.0
    }

    /// Every man weakly prefers `self` to `other`. Unmatched ranks below every
    /// list entry.
    pub fn dominates(&self, other: &Signature) -> bool {
        self.0
            .iter()
            .zip(&other.0)
            .all(|(a, b)| rank_cmp(*a, *b) != Ordering::Greater)
    }

    pub fn strictly_dominates(&self, other: &Signature) -> bool {
        self != other && self.dominates(other)
    }
}

/// Compares ranks with `None` (unmatched) worst. `Less` means better.
pub fn rank_cmp(a: Option<u32>, b: Option<u32>) -> Ordering {
    match (a, b) {
        (Some(x), Some(y)) => x.cmp(&y),
        (Some(_), None) => Ordering::Less,
        (None, Some(_)) => Ordering::Greater,
        (None, None) => Ordering::Equal,
    }
}

/// Matching file text: one `<man> <woman>` line per pair, sorted by man id.
pub fn format_matching(inst: &Instance, m: &Matching) -> String {
    let mut pairs: Vec<(&str, &str)> = m
        .pairs()
        .map(|(a, b)| (inst.man_id(a), inst.woman_id(b)))
        .collect();
    pairs.sort();
    let mut out = String::new();
    for (a, b) in pairs {
        writeln!(out, "{a} {b}").unwrap();
    }
    out
}

/// Literal marker written when no strongly stable matching exists.
pub const NO_MATCHING: &str = "NONE";

/// Parses matching file text. Returns `Ok(None)` for the `NONE` marker.
pub fn parse_matching(inst: &Instance, text: &str) -> Result<Option<Matching>, MatchingError> {
    let mut pairs = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line_no = n + 1;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        if t == NO_MATCHING {
            return Ok(None);
        }
        let mut it = t.split_whitespace();
        let (Some(a), Some(b), None) = (it.next(), it.next(), it.next()) else {
            return Err(MatchingError::MalformedLine(line_no));
        };
        let m = inst
            .man_index(a)
            .ok_or_else(|| MatchingError::UnknownVertex(a.into()))?;
        let w = inst
            .woman_index(b)
            .ok_or_else(|| MatchingError::UnknownVertex(b.into()))?;
        pairs.push((m, w));
    }
    Matching::from_pairs(inst, pairs).map(Some)
}
