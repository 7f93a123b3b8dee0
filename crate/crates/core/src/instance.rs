//! Preference instances: two disjoint vertex sets (men and women), each vertex
//! holding a list of ties ordered best to worst.
//!
//! Internally every vertex is an index in declaration order and every mutual
//! pair is an [`EdgeId`]. Ranks are 1-based tie positions.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Index into [`Instance::edges`].
pub type EdgeId = usize;

/// One acceptable pair together with the rank each endpoint gives the other.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub man: usize,
    pub woman: usize,
    /// Rank of the woman on the man's list.
    pub man_rank: u32,
    /// Rank of the man on the woman's list.
    pub woman_rank: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    men: Vec<String>,
    women: Vec<String>,
    edges: Vec<Edge>,
    /// `men_ties[m][k]` holds the edges of the (k+1)-th tie of man `m`.
    men_ties: Vec<Vec<Vec<EdgeId>>>,
    women_ties: Vec<Vec<Vec<EdgeId>>>,
    lookup: HashMap<(usize, usize), EdgeId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("`{vertex}` appears more than once in the list of `{owner}`")]
    DuplicateInList { owner: String, vertex: String },
    #[error("asymmetric edge: `{from}` lists `{to}` but `{to}` does not list `{from}`")]
    AsymmetricEdge { from: String, to: String },
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("`{owner}` lists `{vertex}`, which is on the same side")]
    SameSide { owner: String, vertex: String },
    #[error("malformed tie: {0}")]
    MalformedTie(String),
    #[error("vertex `{0}` declared more than once")]
    DuplicateDeclaration(String),
    #[error("`{0}:` header given more than once")]
    DuplicateHeader(&'static str),
    #[error("missing `{0}:` header")]
    MissingHeader(&'static str),
    #[error("preference list for `{0}` given more than once")]
    DuplicateList(String),
    #[error("expected `<id>: <entries>`, got `{0}`")]
    MalformedLine(String),
}

impl Instance {
    /// Builds an instance from vertex names and per-vertex tie lists given as
    /// opposite-side indices. Validation mirrors the text parser except that
    /// errors carry no line information (line 0).
    pub fn from_lists(
        men: Vec<String>,
        women: Vec<String>,
        men_prefs: Vec<Vec<Vec<usize>>>,
        women_prefs: Vec<Vec<Vec<usize>>>,
    ) -> Result<Self, ParseError> {
        let err = |kind| ParseError { line: 0, kind };
        let mut seen = HashSet::new();
        for id in men.iter().chain(women.iter()) {
            if !seen.insert(id.as_str()) {
                return Err(err(ParseErrorKind::DuplicateDeclaration(id.clone())));
            }
        }
        assert_eq!(men_prefs.len(), men.len(), "one list per man");
        assert_eq!(women_prefs.len(), women.len(), "one list per woman");
        check_lists(&men, &women, &men_prefs).map_err(err)?;
        check_lists(&women, &men, &women_prefs).map_err(err)?;

        let mut women_rank: HashMap<(usize, usize), u32> = HashMap::new();
        for (w, ties) in women_prefs.iter().enumerate() {
            for (k, tie) in ties.iter().enumerate() {
                for &m in tie {
                    women_rank.insert((m, w), k as u32 + 1);
                }
            }
        }
        for (m, ties) in men_prefs.iter().enumerate() {
            for tie in ties {
                for &w in tie {
                    if !women_rank.contains_key(&(m, w)) {
                        return Err(err(ParseErrorKind::AsymmetricEdge {
                            from: men[m].clone(),
                            to: women[w].clone(),
                        }));
                    }
                }
            }
        }

        let mut edges = Vec::with_capacity(women_rank.len());
        let mut lookup = HashMap::with_capacity(women_rank.len());
        let mut men_ties = Vec::with_capacity(men.len());
        for (m, ties) in men_prefs.iter().enumerate() {
            let mut out = Vec::with_capacity(ties.len());
            for (k, tie) in ties.iter().enumerate() {
                let mut ids = Vec::with_capacity(tie.len());
                for &w in tie {
                    let id = edges.len();
                    edges.push(Edge {
                        man: m,
                        woman: w,
                        man_rank: k as u32 + 1,
                        woman_rank: women_rank[&(m, w)],
                    });
                    lookup.insert((m, w), id);
                    ids.push(id);
                }
                out.push(ids);
            }
            men_ties.push(out);
        }
        if edges.len() != women_rank.len() {
            // Some woman lists a man who does not list her back.
            let (&(m, w), _) = women_rank
                .iter()
                .filter(|(k, _)| !lookup.contains_key(*k))
                .min()
                .expect("missing edge");
            return Err(err(ParseErrorKind::AsymmetricEdge {
                from: women[w].clone(),
                to: men[m].clone(),
            }));
        }
        let women_ties = women_prefs
            .iter()
            .enumerate()
            .map(|(w, ties)| {
                ties.iter()
                    .map(|tie| tie.iter().map(|&m| lookup[&(m, w)]).collect())
                    .collect()
            })
            .collect();

        Ok(Instance {
            men,
            women,
            edges,
            men_ties,
            women_ties,
            lookup,
        })
    }

    pub fn men_count(&self) -> usize {
        self.men.len()
    }

    pub fn women_count(&self) -> usize {
        self.women.len()
    }

    pub fn man_id(&self, m: usize) -> &str {
        &self.men[m]
    }

    pub fn woman_id(&self, w: usize) -> &str {
        &self.women[w]
    }

    pub fn man_index(&self, id: &str) -> Option<usize> {
        self.men.iter().position(|x| x == id)
    }

    pub fn woman_index(&self, id: &str) -> Option<usize> {
        self.women.iter().position(|x| x == id)
    }

    pub fn men_ids(&self) -> &[String] {
        &self.men
    }

    pub fn women_ids(&self) -> &[String] {
        &self.women
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, id: EdgeId) -> Edge {
        self.edges[id]
    }

    pub fn edge_between(&self, man: usize, woman: usize) -> Option<EdgeId> {
        self.lookup.get(&(man, woman)).copied()
    }

    /// Ties of man `m` as edge ids, best first.
    pub fn man_ties(&self, m: usize) -> &[Vec<EdgeId>] {
        &self.men_ties[m]
    }

    /// Ties of woman `w` as edge ids, best first.
    pub fn woman_ties(&self, w: usize) -> &[Vec<EdgeId>] {
        &self.women_ties[w]
    }

    /// All edges of man `m` in list order.
    pub fn man_edges(&self, m: usize) -> impl Iterator<Item = EdgeId> + '_ {
        self.men_ties[m].iter().flatten().copied()
    }

    pub fn woman_edges(&self, w: usize) -> impl Iterator<Item = EdgeId> + '_ {
        self.women_ties[w].iter().flatten().copied()
    }

    /// Rank man `m` gives woman `w`, if they are adjacent.
    pub fn man_rank(&self, m: usize, w: usize) -> Option<u32> {
        self.edge_between(m, w).map(|e| self.edges[e].man_rank)
    }

    /// Rank woman `w` gives man `m`, if they are adjacent.
    pub fn woman_rank(&self, w: usize, m: usize) -> Option<u32> {
        self.edge_between(m, w).map(|e| self.edges[e].woman_rank)
    }

    /// Tie lists of man `m` as woman indices.
    pub fn man_prefs(&self, m: usize) -> Vec<Vec<usize>> {
        self.men_ties[m]
            .iter()
            .map(|t| t.iter().map(|&e| self.edges[e].woman).collect())
            .collect()
    }

    pub fn woman_prefs(&self, w: usize) -> Vec<Vec<usize>> {
        self.women_ties[w]
            .iter()
            .map(|t| t.iter().map(|&e| self.edges[e].man).collect())
            .collect()
    }

    /// The same instance with the roles of men and women exchanged.
    pub fn swapped(&self) -> Instance {
        let men_prefs = (0..self.women_count()).map(|w| self.woman_prefs(w)).collect();
        let women_prefs = (0..self.men_count()).map(|m| self.man_prefs(m)).collect();
        Instance::from_lists(self.women.clone(), self.men.clone(), men_prefs, women_prefs)
            .expect("swapping a valid instance stays valid")
    }

    /// Sub-instance keeping only edges accepted by `keep`. Surviving entries
    /// keep their relative order and tie grouping; emptied ties disappear, so
    /// ranks are renumbered.
    pub fn restrict(&self, keep: impl Fn(EdgeId) -> bool) -> Instance {
        let filter = |ties: &Vec<Vec<EdgeId>>, other: fn(&Edge) -> usize| -> Vec<Vec<usize>> {
            ties.iter()
                .map(|t| {
                    t.iter()
                        .filter(|&&e| keep(e))
                        .map(|&e| other(&self.edges[e]))
                        .collect::<Vec<_>>()
                })
                .filter(|t: &Vec<usize>| !t.is_empty())
                .collect()
        };
        let men_prefs = self.men_ties.iter().map(|t| filter(t, |e| e.woman)).collect();
        let women_prefs = self.women_ties.iter().map(|t| filter(t, |e| e.man)).collect();
        Instance::from_lists(self.men.clone(), self.women.clone(), men_prefs, women_prefs)
            .expect("restricting a valid instance stays valid")
    }
}

fn check_lists(
    owners: &[String],
    others: &[String],
    prefs: &[Vec<Vec<usize>>],
) -> Result<(), ParseErrorKind> {
    for (v, ties) in prefs.iter().enumerate() {
        let mut seen = HashSet::new();
        for tie in ties {
            if tie.is_empty() {
                return Err(ParseErrorKind::MalformedTie(format!(
                    "empty tie in the list of `{}`",
                    owners[v]
                )));
            }
            for &u in tie {
                if u >= others.len() {
                    return Err(ParseErrorKind::UnknownVertex(format!("#{u}")));
                }
                if !seen.insert(u) {
                    return Err(ParseErrorKind::DuplicateInList {
                        owner: owners[v].clone(),
                        vertex: others[u].clone(),
                    });
                }
            }
        }
    }
    Ok(())
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Side {
    Man,
    Woman,
}

enum Token<'a> {
    Open,
    Close,
    Id(&'a str),
}

fn tokenize(s: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in s.char_indices() {
        let special = c == '(' || c == ')';
        if c.is_whitespace() || special {
            if let Some(b) = start.take() {
                out.push(Token::Id(&s[b..i]));
            }
            if c == '(' {
                out.push(Token::Open);
            } else if c == ')' {
                out.push(Token::Close);
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(b) = start {
        out.push(Token::Id(&s[b..]));
    }
    out
}

/// Parses the line-oriented instance format.
///
/// ```text
/// # comment
/// men: m1 m2
/// women: w1 w2
/// m1: w1 w2
/// m2: (w1 w2)
/// w1: m2 m1
/// w2: m1 m2
/// ```
pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut men: Option<Vec<String>> = None;
    let mut women: Option<Vec<String>> = None;
    let mut index: HashMap<String, (Side, usize)> = HashMap::new();
    // (line, side, owner, ties of (line-local) ids)
    let mut lists: Vec<(usize, Side, usize, Vec<Vec<usize>>)> = Vec::new();
    let mut has_list: HashSet<(Side, usize)> = HashSet::new();

    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let err = |kind| ParseError { line, kind };
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (head, rest) = trimmed
            .split_once(':')
            .ok_or_else(|| err(ParseErrorKind::MalformedLine(trimmed.to_string())))?;
        let head = head.trim();
        if head == "men" || head == "women" {
            let (slot, side, name) = if head == "men" {
                (&mut men, Side::Man, "men")
            } else {
                (&mut women, Side::Woman, "women")
            };
            if slot.is_some() {
                return Err(err(ParseErrorKind::DuplicateHeader(name)));
            }
            let mut ids = Vec::new();
            for tok in rest.split_whitespace() {
                if tok.contains(['(', ')', ':']) {
                    return Err(err(ParseErrorKind::MalformedLine(trimmed.to_string())));
                }
                if index.insert(tok.to_string(), (side, ids.len())).is_some() {
                    return Err(err(ParseErrorKind::DuplicateDeclaration(tok.to_string())));
                }
                ids.push(tok.to_string());
            }
            *slot = Some(ids);
            continue;
        }
        if men.is_none() {
            return Err(err(ParseErrorKind::MissingHeader("men")));
        }
        if women.is_none() {
            return Err(err(ParseErrorKind::MissingHeader("women")));
        }
        if head.is_empty() || head.contains(char::is_whitespace) {
            return Err(err(ParseErrorKind::MalformedLine(trimmed.to_string())));
        }
        let &(side, owner) = index
            .get(head)
            .ok_or_else(|| err(ParseErrorKind::UnknownVertex(head.to_string())))?;
        if !has_list.insert((side, owner)) {
            return Err(err(ParseErrorKind::DuplicateList(head.to_string())));
        }

        let mut ties: Vec<Vec<usize>> = Vec::new();
        let mut open: Option<Vec<usize>> = None;
        let mut seen = HashSet::new();
        for tok in tokenize(rest) {
            match tok {
                Token::Open => {
                    if open.is_some() {
                        return Err(err(ParseErrorKind::MalformedTie("nested `(`".into())));
                    }
                    open = Some(Vec::new());
                }
                Token::Close => match open.take() {
                    None => {
                        return Err(err(ParseErrorKind::MalformedTie("unmatched `)`".into())))
                    }
                    Some(t) if t.is_empty() => {
                        return Err(err(ParseErrorKind::MalformedTie("empty `()`".into())))
                    }
                    Some(t) => ties.push(t),
                },
                Token::Id(id) => {
                    let &(other_side, u) = index
                        .get(id)
                        .ok_or_else(|| err(ParseErrorKind::UnknownVertex(id.to_string())))?;
                    if other_side == side {
                        return Err(err(ParseErrorKind::SameSide {
                            owner: head.to_string(),
                            vertex: id.to_string(),
                        }));
                    }
                    if !seen.insert(u) {
                        return Err(err(ParseErrorKind::DuplicateInList {
                            owner: head.to_string(),
                            vertex: id.to_string(),
                        }));
                    }
                    match open.as_mut() {
                        Some(t) => t.push(u),
                        None => ties.push(vec![u]),
                    }
                }
            }
        }
        if open.is_some() {
            return Err(err(ParseErrorKind::MalformedTie("unclosed `(`".into())));
        }
        lists.push((line, side, owner, ties));
    }

    let men = men.ok_or(ParseError {
        line: text.lines().count(),
        kind: ParseErrorKind::MissingHeader("men"),
    })?;
    let women = women.ok_or(ParseError {
        line: text.lines().count(),
        kind: ParseErrorKind::MissingHeader("women"),
    })?;

    // Edge symmetry, reported at the first line with a one-sided listing.
    let mut listed: HashSet<(Side, usize, usize)> = HashSet::new();
    for (_, side, owner, ties) in &lists {
        for &u in ties.iter().flatten() {
            listed.insert((*side, *owner, u));
        }
    }
    for (line, side, owner, ties) in &lists {
        let back = if *side == Side::Man { Side::Woman } else { Side::Man };
        for &u in ties.iter().flatten() {
            if !listed.contains(&(back, u, *owner)) {
                let (from, to) = match side {
                    Side::Man => (&men[*owner], &women[u]),
                    Side::Woman => (&women[*owner], &men[u]),
                };
                return Err(ParseError {
                    line: *line,
                    kind: ParseErrorKind::AsymmetricEdge {
                        from: from.clone(),
                        to: to.clone(),
                    },
                });
            }
        }
    }

    let mut men_prefs = vec![Vec::new(); men.len()];
    let mut women_prefs = vec![Vec::new(); women.len()];
    for (_, side, owner, ties) in lists {
        match side {
            Side::Man => men_prefs[owner] = ties,
            Side::Woman => women_prefs[owner] = ties,
        }
    }
    Instance::from_lists(men, women, men_prefs, women_prefs)
}

/// Canonical text form: headers, then one line per man and per woman in
/// declaration order. Singleton ties are bare ids, larger ties parenthesised.
pub fn serialize_instance(inst: &Instance) -> String {
    inst.to_string()
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn write_list(
            f: &mut fmt::Formatter<'_>,
            owner: &str,
            ties: Vec<Vec<usize>>,
            names: &[String],
        ) -> fmt::Result {
            write!(f, "{owner}:")?;
            for tie in ties {
                if tie.len() == 1 {
                    write!(f, " {}", names[tie[0]])?;
                } else {
                    let inner: Vec<&str> = tie.iter().map(|&u| names[u].as_str()).collect();
                    write!(f, " ({})", inner.join(" "))?;
                }
            }
            writeln!(f)
        }
        writeln!(f, "men:{}", prefixed(&self.men))?;
        writeln!(f, "women:{}", prefixed(&self.women))?;
        for m in 0..self.men_count() {
            write_list(f, &self.men[m], self.man_prefs(m), &self.women)?;
        }
        for w in 0..self.women_count() {
            write_list(f, &self.women[w], self.woman_prefs(w), &self.men)?;
        }
        Ok(())
    }
}

fn prefixed(ids: &[String]) -> String {
    ids.iter().map(|s| format!(" {s}")).collect()
}

impl FromStr for Instance {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_instance(s)
    }
}

/// Parameters for [`generate_random`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenParams {
    pub men: usize,
    pub women: usize,
    /// Probability that a given man-woman pair is an edge.
    pub edge_density: f64,
    /// Probability that a list entry joins the tie of the entry before it.
    pub tie_rate: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{name} must lie in [0, 1], got {value}")]
pub struct GenParamsError {
    pub name: &'static str,
    pub value: f64,
}

impl GenParams {
    pub fn validate(&self) -> Result<(), GenParamsError> {
        for (name, value) in [("edge_density", self.edge_density), ("tie_rate", self.tie_rate)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(GenParamsError { name, value });
            }
        }
        Ok(())
    }
}

/// Seeded random instance. Vertices are named `m1..` and `w1..`.
///
/// # Panics
/// If the probabilities are outside `[0, 1]`; check with [`GenParams::validate`].
pub fn generate_random(p: &GenParams) -> Instance {
    p.validate().expect("invalid generator parameters");
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut men_adj = vec![Vec::new(); p.men];
    let mut women_adj = vec![Vec::new(); p.women];
    for (m, adj) in men_adj.iter_mut().enumerate() {
        for (w, wadj) in women_adj.iter_mut().enumerate() {
            if rng.gen_bool(p.edge_density) {
                adj.push(w);
                wadj.push(m);
            }
        }
    }
    let mut into_ties = |mut adj: Vec<usize>| -> Vec<Vec<usize>> {
        adj.shuffle(&mut rng);
        let mut ties: Vec<Vec<usize>> = Vec::new();
        for u in adj {
            match ties.last_mut() {
                Some(t) if rng.gen_bool(p.tie_rate) => t.push(u),
                _ => ties.push(vec![u]),
            }
        }
        ties
    };
    let men_prefs: Vec<_> = men_adj.into_iter().map(&mut into_ties).collect();
    let women_prefs: Vec<_> = women_adj.into_iter().map(&mut into_ties).collect();
    Instance::from_lists(
        (1..=p.men).map(|i| format!("m{i}")).collect(),
        (1..=p.women).map(|i| format!("w{i}")).collect(),
        men_prefs,
        women_prefs,
    )
    .expect("generated lists are symmetric")
}
