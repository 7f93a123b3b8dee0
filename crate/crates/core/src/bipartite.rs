//! Maximum bipartite matching (Hopcroft-Karp) and alternating reachability.

use std::collections::VecDeque;

const NIL: usize = usize::MAX;

/// Matching state between `left` vertices `0..n_left` and right vertices
/// `0..n_right`.
#[derive(Debug, Clone)]
pub(crate) struct BipartiteMatching {
    pub mate_left: Vec<Option<usize>>,
    pub mate_right: Vec<Option<usize>>,
}

impl BipartiteMatching {
    pub fn new(n_left: usize, n_right: usize) -> Self {
        BipartiteMatching {
            mate_left: vec![None; n_left],
            mate_right: vec![None; n_right],
        }
    }

    #[cfg(test)]
    pub fn size(&self) -> usize {
        self.mate_left.iter().flatten().count()
    }

    /// Drops pairs whose edge is no longer present in `adj`.
    pub fn retain_edges(&mut self, adj: &[Vec<usize>]) {
        for l in 0..self.mate_left.len() {
            if let Some(r) = self.mate_left[l] {
                if !adj[l].contains(&r) {
                    self.mate_left[l] = None;
                    self.mate_right[r] = None;
                }
            }
        }
    }

    /// Grows the current matching to a maximum one (Hopcroft-Karp phases).
    pub fn maximize(&mut self, adj: &[Vec<usize>]) {
        let n = self.mate_left.len();
        let mut dist = vec![0usize; n];
        loop {
            // BFS layering from free left vertices.
            let mut queue = VecDeque::new();
            for l in 0..n {
                if self.mate_left[l].is_none() {
                    dist[l] = 0;
                    queue.push_back(l);
                } else {
                    dist[l] = NIL;
                }
            }
            let mut found = false;
            while let Some(l) = queue.pop_front() {
                for &r in &adj[l] {
                    match self.mate_right[r] {
                        None => found = true,
                        Some(l2) if dist[l2] == NIL => {
                            dist[l2] = dist[l] + 1;
                            queue.push_back(l2);
                        }
                        Some(_) => {}
                    }
                }
            }
            if !found {
                return;
            }
            let mut next = vec![0usize; n];
            for l in 0..n {
                if self.mate_left[l].is_none() {
                    self.augment(l, adj, &mut dist, &mut next);
                }
            }
        }
    }

    // Iterative layered DFS, so deep augmenting paths do not overflow the stack.
    fn augment(&mut self, root: usize, adj: &[Vec<usize>], dist: &mut [usize], next: &mut [usize]) -> bool {
        let mut stack: Vec<(usize, usize)> = vec![(root, NIL)];
        // stack of (left vertex, right vertex used to reach it)
        while let Some(&(l, _)) = stack.last() {
            if next[l] >= adj[l].len() {
                dist[l] = NIL;
                stack.pop();
                continue;
            }
            let r = adj[l][next[l]];
            next[l] += 1;
            match self.mate_right[r] {
                None => {
                    // Flip the path: each stacked left vertex takes the right
                    // vertex that led to its successor.
                    let mut right = r;
                    while let Some((lv, via)) = stack.pop() {
                        self.mate_left[lv] = Some(right);
                        self.mate_right[right] = Some(lv);
                        right = via;
                    }
                    return true;
                }
                Some(l2) if dist[l2] != NIL && dist[l2] == dist[l] + 1 => {
                    stack.push((l2, r));
                }
                Some(_) => {}
            }
        }
        false
    }

    /// Left vertices reachable from free left vertices in `sources` by
    /// alternating paths, and the right vertices adjacent to them.
    pub fn alternating_reach(
        &self,
        adj: &[Vec<usize>],
        sources: impl IntoIterator<Item = usize>,
    ) -> (Vec<bool>, Vec<bool>) {
        let mut left = vec![false; self.mate_left.len()];
        let mut right = vec![false; self.mate_right.len()];
        let mut queue = VecDeque::new();
        for s in sources {
            if self.mate_left[s].is_none() && !left[s] {
                left[s] = true;
                queue.push_back(s);
            }
        }
        while let Some(l) = queue.pop_front() {
            for &r in &adj[l] {
                if right[r] {
                    continue;
                }
                right[r] = true;
                if let Some(l2) = self.mate_right[r] {
                    if !left[l2] {
                        left[l2] = true;
                        queue.push_back(l2);
                    }
                }
            }
        }
        (left, right)
    }
}
