#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use strongstable::{generate_random, GenParams, Instance};

pub const DENSITIES: [f64; 3] = [0.3, 0.6, 1.0];
pub const TIE_RATES: [f64; 3] = [0.0, 0.3, 0.7];

/// Seeded instances with 1..=6 men and 1..=6 women over every density and
/// tie-rate combination.
pub fn corpus(per_combo: u64) -> Vec<(String, Instance)> {
    let mut out = Vec::new();
    for (di, &d) in DENSITIES.iter().enumerate() {
        for (ti, &t) in TIE_RATES.iter().enumerate() {
            for k in 0..per_combo {
                let seed = 1_000 * (3 * di as u64 + ti as u64) + k;
                let params = GenParams {
                    men: 1 + (k as usize % 6),
                    women: 1 + ((k as usize / 6 + k as usize) % 6),
                    edge_density: d,
                    tie_rate: t,
                    seed,
                };
                out.push((format!("d={d} t={t} seed={seed}"), generate_random(&params)));
            }
        }
    }
    out
}

/// Anti-correlated instances with 2..=6 vertices per side; these have many
/// more classes than uniform ones.
pub fn chain_corpus(per_setting: u64) -> Vec<(String, Instance)> {
    let settings = [(1000, 0.1, 0.8), (1000, 0.3, 1.0), (6, 0.3, 1.0), (3, 0.2, 1.0)];
    let mut out = Vec::new();
    for (levels, noise, density) in settings {
        for k in 0..per_setting {
            let n = 2 + (k as usize % 5);
            let seed = 7_000 + k;
            out.push((
                format!("anti levels={levels} noise={noise} density={density} seed={seed}"),
                anti_correlated(n, levels, noise, density, seed),
            ));
        }
    }
    out
}

/// Complete-ish instances where men and women rank each other in roughly
/// opposite orders, which gives long chains of classes. `levels` controls how
/// coarse the ranks are (small values give many ties).
pub fn anti_correlated(n: usize, levels: u32, noise: f64, density: f64, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let score: Vec<Vec<f64>> = (0..n).map(|_| (0..n).map(|_| rng.gen()).collect()).collect();
    let present: Vec<Vec<bool>> = (0..n).map(|_| (0..n).map(|_| rng.gen_bool(density)).collect()).collect();
    let bucket = |keys: Vec<(u32, usize)>| -> Vec<Vec<usize>> {
        let mut keys = keys;
        keys.sort();
        let mut ties: Vec<Vec<usize>> = Vec::new();
        let mut last = None;
        for (k, j) in keys {
            if last == Some(k) {
                ties.last_mut().unwrap().push(j);
            } else {
                ties.push(vec![j]);
                last = Some(k);
            }
        }
        ties
    };
    let mut men = Vec::new();
    for i in 0..n {
        let keys = (0..n)
            .filter(|&j| present[i][j])
            .map(|j| (((score[i][j] + noise * rng.gen::<f64>()) * levels as f64) as u32, j))
            .collect();
        men.push(bucket(keys));
    }
    let mut women = Vec::new();
    for j in 0..n {
        let keys = (0..n)
            .filter(|&i| present[i][j])
            .map(|i| (((1.0 - score[i][j] + noise * rng.gen::<f64>()) * levels as f64) as u32, i))
            .collect();
        women.push(bucket(keys));
    }
    Instance::from_lists(
        (1..=n).map(|i| format!("m{i}")).collect(),
        (1..=n).map(|i| format!("w{i}")).collect(),
        men,
        women,
    )
    .unwrap()
}

/// Textbook stable marriage for strict lists, used as an independent oracle.
pub struct Classical {
    /// `men[m]` is m's list of women, best first.
    pub men: Vec<Vec<usize>>,
    pub women: Vec<Vec<usize>>,
    woman_rank: Vec<BTreeMap<usize, usize>>,
}

/// Partner of each man, `None` when unmatched.
pub type Marriage = Vec<Option<usize>>;

/// A classical rotation as man -> (woman before, woman after).
pub type ClassicalRotation = BTreeMap<usize, (usize, usize)>;

impl Classical {
    /// `None` if some list has a tie.
    pub fn from_instance(inst: &Instance) -> Option<Self> {
        let strict = |ties: &[Vec<usize>]| ties.iter().all(|t| t.len() == 1);
        let mut men = Vec::new();
        for m in 0..inst.men_count() {
            let ties: Vec<Vec<usize>> = inst
                .man_ties(m)
                .iter()
                .map(|t| t.iter().map(|&e| inst.edge(e).woman).collect())
                .collect();
            if !strict(&ties) {
                return None;
            }
            men.push(ties.into_iter().flatten().collect::<Vec<_>>());
        }
        let mut women = Vec::new();
        for w in 0..inst.women_count() {
            let ties: Vec<Vec<usize>> = inst
                .woman_ties(w)
                .iter()
                .map(|t| t.iter().map(|&e| inst.edge(e).man).collect())
                .collect();
            if !strict(&ties) {
                return None;
            }
            women.push(ties.into_iter().flatten().collect::<Vec<_>>());
        }
        let woman_rank = women
            .iter()
            .map(|l: &Vec<usize>| l.iter().enumerate().map(|(r, &m)| (m, r)).collect())
            .collect();
        Some(Classical { men, women, woman_rank })
    }

    fn prefers(&self, w: usize, a: usize, b: usize) -> bool {
        self.woman_rank[w][&a] < self.woman_rank[w][&b]
    }

    /// Men-proposing deferred acceptance.
    pub fn man_optimal(&self) -> Marriage {
        let mut next = vec![0usize; self.men.len()];
        let mut holds: Vec<Option<usize>> = vec![None; self.women.len()];
        let mut free: VecDeque<usize> = (0..self.men.len()).collect();
        while let Some(m) = free.pop_front() {
            let Some(&w) = self.men[m].get(next[m]) else {
                continue;
            };
            next[m] += 1;
            match holds[w] {
                None => holds[w] = Some(m),
                Some(h) if self.prefers(w, m, h) => {
                    holds[w] = Some(m);
                    free.push_back(h);
                }
                Some(_) => free.push_back(m),
            }
        }
        let mut out = vec![None; self.men.len()];
        for (w, h) in holds.iter().enumerate() {
            if let Some(m) = h {
                out[*m] = Some(w);
            }
        }
        out
    }

    fn woman_partners(&self, marriage: &Marriage) -> Vec<Option<usize>> {
        let mut out = vec![None; self.women.len()];
        for (m, w) in marriage.iter().enumerate() {
            if let Some(w) = w {
                out[*w] = Some(m);
            }
        }
        out
    }

    /// Rotations exposed in a stable marriage.
    pub fn exposed(&self, marriage: &Marriage) -> Vec<ClassicalRotation> {
        let wp = self.woman_partners(marriage);
        let n = self.men.len();
        // s(m): first woman after M(m) who prefers m to her partner; a free
        // woman prefers anyone and ends the chain.
        let s: Vec<Option<usize>> = (0..n)
            .map(|m| {
                let cur = marriage[m]?;
                let pos = self.men[m].iter().position(|&w| w == cur)?;
                self.men[m][pos + 1..]
                    .iter()
                    .copied()
                    .find(|&w| wp[w].is_none_or(|h| self.prefers(w, m, h)))
            })
            .collect();
        let next = |m: usize| s[m].and_then(|w| wp[w]);
        let mut found = Vec::new();
        let mut state = vec![0u8; n];
        for start in 0..n {
            if state[start] != 0 {
                continue;
            }
            let mut path = Vec::new();
            let mut m = start;
            loop {
                if state[m] == 2 {
                    break;
                }
                if state[m] == 1 {
                    let at = path.iter().position(|&x| x == m).unwrap();
                    let cycle: ClassicalRotation = path[at..]
                        .iter()
                        .map(|&x: &usize| (x, (marriage[x].unwrap(), s[x].unwrap())))
                        .collect();
                    found.push(cycle);
                    break;
                }
                state[m] = 1;
                path.push(m);
                match next(m) {
                    Some(n2) => m = n2,
                    None => break,
                }
            }
            for &x in &path {
                state[x] = 2;
            }
        }
        found
    }

    pub fn eliminate(&self, marriage: &Marriage, rho: &ClassicalRotation) -> Marriage {
        let mut out = marriage.clone();
        for (&m, &(_, after)) in rho {
            out[m] = Some(after);
        }
        out
    }

    /// Every stable marriage and every rotation, by search from the
    /// man-optimal marriage.
    pub fn all(&self) -> (BTreeSet<Marriage>, BTreeSet<ClassicalRotation>) {
        let mut seen = BTreeSet::new();
        let mut rotations = BTreeSet::new();
        let mut queue = VecDeque::from([self.man_optimal()]);
        while let Some(m) = queue.pop_front() {
            if !seen.insert(m.clone()) {
                continue;
            }
            for rho in self.exposed(&m) {
                queue.push_back(self.eliminate(&m, &rho));
                rotations.insert(rho);
            }
        }
        (seen, rotations)
    }

    /// The rank-change view of a rotation: man -> (rank before, rank after),
    /// 1-based.
    pub fn rank_moves(&self, rho: &ClassicalRotation) -> BTreeMap<usize, (u32, u32)> {
        let rank = |m: usize, w: usize| self.men[m].iter().position(|&x| x == w).unwrap() as u32 + 1;
        rho.iter()
            .map(|(&m, &(b, a))| (m, (rank(m, b), rank(m, a))))
            .collect()
    }
}

/// Uniformly random linear extension of a precedence relation.
pub fn random_linear_extension(n: usize, precedes: impl Fn(usize, usize) -> bool, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut placed = vec![false; n];
    let mut out = Vec::new();
    while out.len() < n {
        let ready: Vec<usize> = (0..n)
            .filter(|&j| !placed[j] && (0..n).all(|i| i == j || !precedes(i, j) || placed[i]))
            .collect();
        let j = ready[rng.gen_range(0..ready.len())];
        placed[j] = true;
        out.push(j);
    }
    out
}
