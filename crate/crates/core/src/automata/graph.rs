use std::collections::VecDeque;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use super::index::Priority;

/// Strongly connected component id of every vertex.
pub(crate) fn components(n: usize, edges: impl Iterator<Item = (usize, usize)>) -> Vec<usize> {
    let mut g: DiGraph<(), ()> = DiGraph::with_capacity(n, 0);
    for _ in 0..n {
        g.add_node(());
    }
    for (u, v) in edges {
        g.add_edge(NodeIndex::new(u), NodeIndex::new(v), ());
    }
    let mut id = vec![0; n];
    for (c, comp) in tarjan_scc(&g).into_iter().enumerate() {
        for v in comp {
            id[v.index()] = c;
        }
    }
    id
}

/// A finite graph with priority-labelled edges.
pub(crate) struct PriorityGraph {
    pub n: usize,
    pub edges: Vec<(usize, Priority, usize)>,
}

/// A path from an initial vertex followed by a cycle, both as edge ids.
pub(crate) struct Lasso {
    pub stem: Vec<usize>,
    pub cycle: Vec<usize>,
}

impl PriorityGraph {
    fn out_lists(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n];
        for (i, &(u, _, _)) in self.edges.iter().enumerate() {
            out[u].push(i);
        }
        out
    }

    fn bfs(&self, out: &[Vec<usize>], from: &[usize], keep: impl Fn(usize) -> bool) -> Vec<Option<usize>> {
        // parent edge per vertex; sources get usize::MAX
        let mut parent = vec![None; self.n];
        let mut queue = VecDeque::new();
        for &s in from {
            if parent[s].is_none() {
                parent[s] = Some(usize::MAX);
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            for &e in &out[u] {
                let v = self.edges[e].2;
                if keep(e) && parent[v].is_none() {
                    parent[v] = Some(e);
                    queue.push_back(v);
                }
            }
        }
        parent
    }

    fn path_to(&self, parent: &[Option<usize>], mut v: usize) -> Vec<usize> {
        let mut path = Vec::new();
        while let Some(e) = parent[v] {
            if e == usize::MAX {
                break;
            }
            path.push(e);
            v = self.edges[e].0;
        }
        path.reverse();
        path
    }

    /// A reachable cycle whose largest priority is even, if any.
    pub fn accepting_lasso(&self, initial: &[usize]) -> Option<Lasso> {
        let out = self.out_lists();
        let reach = self.bfs(&out, initial, |_| true);
        let mut evens: Vec<Priority> = self
            .edges
            .iter()
            .filter(|&&(u, k, _)| k % 2 == 0 && reach[u].is_some())
            .map(|&(_, k, _)| k)
            .collect();
        evens.sort_unstable();
        evens.dedup();
        for &m in evens.iter().rev() {
            let low = |e: usize| self.edges[e].1 <= m && reach[self.edges[e].0].is_some();
            let comp = components(
                self.n,
                (0..self.edges.len()).filter(|&e| low(e)).map(|e| (self.edges[e].0, self.edges[e].2)),
            );
            let hit = (0..self.edges.len()).find(|&e| {
                let (u, k, v) = self.edges[e];
                k == m && reach[u].is_some() && comp[u] == comp[v]
            });
            if let Some(e) = hit {
                let (u, _, v) = self.edges[e];
                let back = self.bfs(&out, &[v], |f| low(f) && comp[self.edges[f].0] == comp[u]);
                let mut cycle = vec![e];
                cycle.extend(self.path_to(&back, u));
                return Some(Lasso { stem: self.path_to(&reach, u), cycle });
            }
        }
        None
    }

    /// Vertices from which some accepting lasso starts.
    pub fn live_vertices(&self) -> Vec<bool> {
        let mut good = vec![false; self.n];
        let mut evens: Vec<Priority> = self.edges.iter().map(|e| e.1).filter(|k| k % 2 == 0).collect();
        evens.sort_unstable();
        evens.dedup();
        for &m in &evens {
            let comp = components(
                self.n,
                self.edges.iter().filter(|e| e.1 <= m).map(|e| (e.0, e.2)),
            );
            for &(u, k, v) in &self.edges {
                if k == m && comp[u] == comp[v] {
                    good[u] = true;
                }
            }
        }
        let mut rev = vec![Vec::new(); self.n];
        for &(u, _, v) in &self.edges {
            rev[v].push(u);
        }
        let mut stack: Vec<usize> = (0..self.n).filter(|&v| good[v]).collect();
        while let Some(v) = stack.pop() {
            for &u in &rev[v] {
                if !good[u] {
                    good[u] = true;
                    stack.push(u);
                }
            }
        }
        good
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_even_cycle_behind_odd_one() {
        // 0 -1-> 0, 0 -0-> 1, 1 -2-> 1
        let g = PriorityGraph { n: 2, edges: vec![(0, 1, 0), (0, 0, 1), (1, 2, 1)] };
        let l = g.accepting_lasso(&[0]).unwrap();
        assert_eq!(l.stem, vec![1]);
        assert_eq!(l.cycle, vec![2]);
        assert_eq!(g.live_vertices(), vec![true, true]);
    }

    #[test]
    fn odd_dominated_cycle_rejects() {
        let g = PriorityGraph { n: 2, edges: vec![(0, 2, 1), (1, 3, 0)] };
        assert!(g.accepting_lasso(&[0]).is_none());
        assert_eq!(g.live_vertices(), vec![false, false]);
    }
}
