//! Tarjan's strongly connected components, iterative.

/// Component partition of a directed graph.
#[derive(Debug, Clone)]
pub(crate) struct Components {
    /// Component index per vertex. Indices are in reverse topological order:
    /// every edge between components goes from a higher to a lower index.
    pub comp: Vec<usize>,
    pub count: usize,
}

impl Components {
    pub fn compute(adj: &[Vec<usize>]) -> Self {
        let n = adj.len();
        const UNSEEN: usize = usize::MAX;
        let mut index = vec![UNSEEN; n];
        let mut low = vec![0usize; n];
        let mut on_stack = vec![false; n];
        let mut stack = Vec::new();
        let mut comp = vec![UNSEEN; n];
        let mut count = 0;
        let mut counter = 0;
        let mut call: Vec<(usize, usize)> = Vec::new();

        for root in 0..n {
            if index[root] != UNSEEN {
                continue;
            }
            call.push((root, 0));
            index[root] = counter;
            low[root] = counter;
            counter += 1;
            stack.push(root);
            on_stack[root] = true;

            while let Some(&mut (v, ref mut pos)) = call.last_mut() {
                if *pos < adj[v].len() {
                    let w = adj[v][*pos];
                    *pos += 1;
                    if index[w] == UNSEEN {
                        index[w] = counter;
                        low[w] = counter;
                        counter += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        call.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                    continue;
                }
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        comp[w] = count;
                        if w == v {
                            break;
                        }
                    }
                    count += 1;
                }
            }
        }
        Components { comp, count }
    }

    /// Number of edges leaving each component.
    pub fn out_degrees(&self, adj: &[Vec<usize>]) -> Vec<usize> {
        let mut out = vec![0; self.count];
        for (v, targets) in adj.iter().enumerate() {
            for &w in targets {
                if self.comp[v] != self.comp[w] {
                    out[self.comp[v]] += 1;
                }
            }
        }
        out
    }
}
