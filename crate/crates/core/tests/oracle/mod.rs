//! Brute-force reference implementations used by the acceptance suite. They
//! share no code with the library beyond its data accessors.

#![allow(dead_code)]

use gamequant::automata::{Alphabet, IndexKind, ParityIndex, Priority, UpWord, WordAutomaton};
use gamequant::wilke::{Homomorphism, WilkeAlgebra};
use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Nodes reachable from `start` along `edges` (including `start`).
fn reach(n: usize, edges: &[(usize, usize)], start: &[usize]) -> Vec<bool> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
    }
    let mut seen = vec![false; n];
    let mut stack: Vec<usize> = start.to_vec();
    for &s in start {
        seen[s] = true;
    }
    while let Some(v) = stack.pop() {
        for &u in &adj[v] {
            if !seen[u] {
                seen[u] = true;
                stack.push(u);
            }
        }
    }
    seen
}

/// Acceptance of `u v^ω` by a (possibly nondeterministic) parity automaton,
/// by searching the product of the automaton with the lasso for a good
/// cycle (strong) or a good run prefix followed by any infinite run (weak).
pub fn lasso_accepts(d: &WordAutomaton, w: &UpWord<usize>) -> bool {
    let len = w.prefix().len() + w.period().len();
    let letter = |i: usize| if i < w.prefix().len() { w.prefix()[i] } else { w.period()[i - w.prefix().len()] };
    let next = |i: usize| if i + 1 < len { i + 1 } else { w.prefix().len() };
    let nq = d.num_states();
    let node = |q: usize, i: usize| q * len + i;
    let n = nq * len;
    let mut edges: Vec<(usize, usize, Priority)> = Vec::new();
    for q in 0..nq {
        for i in 0..len {
            for &(k, q2) in d.succ(q, letter(i)) {
                edges.push((node(q, i), node(q2, next(i)), k));
            }
        }
    }
    let init: Vec<usize> = d.initial().iter().map(|&q| node(q, 0)).collect();
    let all: Vec<(usize, usize)> = edges.iter().map(|&(a, b, _)| (a, b)).collect();
    let reachable = reach(n, &all, &init);
    let index = d.index();
    for p in index.priorities().filter(|p| p % 2 == 0) {
        let low: Vec<(usize, usize)> = edges.iter().filter(|e| e.2 <= p).map(|&(a, b, _)| (a, b)).collect();
        match index.kind {
            IndexKind::Strong => {
                let mut g: DiGraph<(), ()> = DiGraph::new();
                let ids: Vec<NodeIndex> = (0..n).map(|_| g.add_node(())).collect();
                for &(a, b) in &low {
                    g.add_edge(ids[a], ids[b], ());
                }
                let mut comp = vec![0; n];
                for (c, scc) in tarjan_scc(&g).into_iter().enumerate() {
                    for v in scc {
                        comp[v.index()] = c;
                    }
                }
                if edges.iter().any(|&(a, b, k)| k == p && reachable[a] && comp[a] == comp[b]) {
                    return true;
                }
            }
            IndexKind::Weak => {
                let from_init = reach(n, &low, &init);
                // nodes with an infinite run using priorities ≤ p
                let mut alive = vec![true; n];
                let mut out_deg = vec![0usize; n];
                let mut preds = vec![Vec::new(); n];
                for &(a, b) in &low {
                    out_deg[a] += 1;
                    preds[b].push(a);
                }
                let mut dead: Vec<usize> = (0..n).filter(|&v| out_deg[v] == 0).collect();
                for &v in &dead {
                    alive[v] = false;
                }
                while let Some(v) = dead.pop() {
                    for &u in &preds[v] {
                        out_deg[u] -= 1;
                        if out_deg[u] == 0 && alive[u] {
                            alive[u] = false;
                            dead.push(u);
                        }
                    }
                }
                if edges.iter().any(|&(a, b, k)| k == p && from_init[a] && alive[b]) {
                    return true;
                }
            }
        }
    }
    false
}

/// All `(prefix, period)` pairs over `k` letters with total length at most `max`.
pub fn up_words(k: usize, max: usize) -> Vec<UpWord<usize>> {
    let words = |len: usize| -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for _ in 0..len {
            out = out.into_iter().flat_map(|w| (0..k).map(move |a| [w.clone(), vec![a]].concat())).collect();
        }
        out
    };
    let mut out = Vec::new();
    for total in 1..=max {
        for per in 1..=total {
            for u in words(total - per) {
                for v in words(per) {
                    out.push(UpWord::new(u.clone(), v).unwrap());
                }
            }
        }
    }
    out
}

pub fn random_up(rng: &mut ChaCha8Rng, k: usize, max_prefix: usize, max_period: usize) -> UpWord<usize> {
    let pre = (0..rng.gen_range(0..=max_prefix)).map(|_| rng.gen_range(0..k)).collect();
    let per = (0..rng.gen_range(1..=max_period)).map(|_| rng.gen_range(0..k)).collect();
    UpWord::new(pre, per).unwrap()
}

/// A complete automaton with `branching` successors per state and letter.
pub fn random_automaton(rng: &mut ChaCha8Rng, al: &Alphabet, states: usize, index: ParityIndex, branching: usize) -> WordAutomaton {
    let mut d = WordAutomaton::new(al.clone(), index, states);
    for q in 0..states {
        for a in 0..al.len() {
            for _ in 0..rng.gen_range(1..=branching) {
                d.add_transition(q, a, rng.gen_range(index.lo..=index.hi), rng.gen_range(0..states)).unwrap();
            }
        }
    }
    d
}

// ---- games

/// A game on at most 8 positions with edge priorities: `edges[e] = (from,
/// priority, to)` and bit `v` of `owner_ii` set when Player II moves at `v`.
pub struct SmallGame {
    pub n: usize,
    pub owner_ii: u8,
    pub edges: Vec<(usize, Priority, usize)>,
}

impl SmallGame {
    fn closure(&self, kept: u32, max_prio: Priority) -> [u8; 8] {
        let mut r = [0u8; 8];
        for (v, rv) in r.iter_mut().enumerate().take(self.n) {
            *rv = 1 << v;
        }
        for (e, &(a, k, b)) in self.edges.iter().enumerate() {
            if kept >> e & 1 == 1 && k <= max_prio {
                r[a] |= 1 << b;
            }
        }
        for m in 0..self.n {
            for i in 0..self.n {
                if r[i] >> m & 1 == 1 {
                    r[i] |= r[m];
                }
            }
        }
        r
    }

    /// Positions from which the edge set `kept` contains no reachable cycle
    /// whose largest priority has the parity of `bad`.
    pub fn safe_positions(&self, kept: u32, bad: Priority) -> u8 {
        let all = self.closure(kept, Priority::MAX);
        let mut by_prio: Vec<Option<[u8; 8]>> = Vec::new();
        let mut doomed = 0u8;
        for (e, &(a, k, b)) in self.edges.iter().enumerate() {
            if kept >> e & 1 == 0 || k % 2 != bad % 2 || doomed >> a & 1 == 1 {
                continue;
            }
            if by_prio.len() <= k as usize {
                by_prio.resize(k as usize + 1, None);
            }
            let low = *by_prio[k as usize].get_or_insert_with(|| self.closure(kept, k));
            if low[b] >> a & 1 == 1 {
                doomed |= 1 << a;
            }
        }
        (0..self.n).filter(|&v| all[v] & doomed == 0).fold(0, |m, v| m | 1 << v)
    }

    /// Edges left when `player_ii`'s side plays `choice` (an edge per own position).
    pub fn restrict(&self, player_ii: bool, choice: &[usize]) -> u32 {
        let mut kept = 0u32;
        for (e, &(a, _, _)) in self.edges.iter().enumerate() {
            let mine = (self.owner_ii >> a & 1 == 1) == player_ii;
            if !mine || choice[a] == e {
                kept |= 1 << e;
            }
        }
        kept
    }

    /// Positions won by `player_ii`'s side with some positional strategy.
    pub fn positional_winners(&self, player_ii: bool) -> u8 {
        let out: Vec<Vec<usize>> =
            (0..self.n).map(|v| (0..self.edges.len()).filter(|&e| self.edges[e].0 == v).collect()).collect();
        let mine: Vec<usize> = (0..self.n).filter(|&v| (self.owner_ii >> v & 1 == 1) == player_ii).collect();
        let bad = if player_ii { 1 } else { 0 };
        let mut pick = vec![0usize; mine.len()];
        let mut choice = vec![usize::MAX; self.n];
        let mut won = 0u8;
        loop {
            for (i, &v) in mine.iter().enumerate() {
                choice[v] = out[v][pick[i]];
            }
            won |= self.safe_positions(self.restrict(player_ii, &choice), bad);
            let mut i = 0;
            loop {
                if i == mine.len() {
                    return won;
                }
                pick[i] += 1;
                if pick[i] < out[mine[i]].len() {
                    break;
                }
                pick[i] = 0;
                i += 1;
            }
        }
    }
}

// ---- algebras

pub fn mul1(s: &WilkeAlgebra, a: Option<usize>, b: Option<usize>) -> Option<usize> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(a), Some(b)) => Some(s.mul(a, b)),
    }
}

/// Infinite product `⊙` of a stream over `T₊¹` with infinitely many
/// non-neutral letters.
pub fn omega_product(s: &WilkeAlgebra, t: &UpWord<Option<usize>>) -> Option<usize> {
    let u = t.prefix().iter().fold(None, |acc, &x| mul1(s, acc, x));
    let v = t.period().iter().fold(None, |acc, &x| mul1(s, acc, x))?;
    let o = s.omega(v);
    Some(match u {
        None => o,
        Some(u) => s.mixed(u, o),
    })
}

/// Image of an ultimately periodic word.
pub fn eval(h: &Homomorphism, w: &UpWord<usize>) -> usize {
    let stream = w.map(|&a| Some(h.letters[a]));
    omega_product(&h.algebra, &stream).unwrap()
}

/// Checks the Wilke axioms by exhausting all tuples; returns the first violation.
pub fn axiom_violation(s: &WilkeAlgebra) -> Option<String> {
    let (n, m) = (s.fin_len(), s.inf_len());
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if s.mul(s.mul(a, b), c) != s.mul(a, s.mul(b, c)) {
                    return Some(format!("(ab)c != a(bc) at {a} {b} {c}"));
                }
            }
            for t in 0..m {
                if s.mixed(s.mul(a, b), t) != s.mixed(a, s.mixed(b, t)) {
                    return Some(format!("(ab)t != a(bt) at {a} {b} {t}"));
                }
            }
            if s.omega(s.mul(a, b)) != s.mixed(a, s.omega(s.mul(b, a))) {
                return Some(format!("(ab)^ω != a(ba)^ω at {a} {b}"));
            }
        }
        let mut p = a;
        for k in 1..=n + 1 {
            if s.omega(p) != s.omega(a) {
                return Some(format!("(a^{k})^ω != a^ω at {a}"));
            }
            p = s.mul(p, a);
        }
    }
    None
}

/// Whether `s_{i+1} ⋯ s_j` is idempotent for some `i < j`.
pub fn has_idempotent_infix(s: &WilkeAlgebra, word: &[usize]) -> bool {
    for i in 0..word.len() {
        let mut p: Option<usize> = None;
        for &x in &word[i + 1..] {
            let q = mul1(s, p, Some(x)).unwrap();
            if s.mul(q, q) == q {
                return true;
            }
            p = Some(q);
        }
    }
    false
}
