//! Determinization of parity automata.
//!
//! A nondeterministic parity automaton is first turned into a Büchi automaton
//! with accepting transitions (guess the even priority that dominates from
//! some point on), which is then determinized with Safra trees whose nodes
//! carry age-ordered names. The priority of a step is derived from the oldest
//! node that was removed or that flashed, which yields a parity condition
//! directly.

use std::collections::{HashMap, VecDeque};

use super::automaton::WordAutomaton;
use super::graph::components;
use super::index::{ParityIndex, Priority};
use super::reduce::{normalize_priorities, reduce, trim};
use crate::error::{Error, Result};

/// Upper bound on the number of states built before giving up.
pub const STATE_LIMIT: usize = 200_000;

/// A Büchi automaton with accepting transitions, stored per letter.
pub(crate) struct Nba {
    pub n: usize,
    pub letters: usize,
    pub initial: Vec<u32>,
    /// `succ[q * letters + a]`: successors with an acceptance flag.
    pub succ: Vec<Vec<(u32, bool)>>,
}

impl Nba {
    /// Guess-the-dominating-priority construction. State `q * levels` is `q`
    /// before the guess, `q * levels + l` commits to priority `2(l-1)`.
    pub fn from_parity(a: &WordAutomaton) -> Nba {
        let hi = a.index().hi;
        let evens: Vec<Priority> = (0..=hi).filter(|k| k % 2 == 0).collect();
        let levels = evens.len() + 1;
        let letters = a.alphabet().len();
        let n = a.num_states() * levels;
        let mut succ = vec![Vec::new(); n * letters];
        for (q, x, k, to) in a.transitions() {
            let wait = &mut succ[(q * levels) * letters + x];
            wait.push(((to * levels) as u32, false));
            for l in 1..levels {
                wait.push(((to * levels + l) as u32, false));
            }
            for (l, &m) in evens.iter().enumerate() {
                if k <= m {
                    succ[(q * levels + l + 1) * letters + x].push(((to * levels + l + 1) as u32, k == m));
                }
            }
        }
        let mut nba = Nba {
            n,
            letters,
            initial: a.initial().iter().map(|&q| (q * levels) as u32).collect(),
            succ,
        };
        nba.drop_dead();
        nba
    }

    /// Removes successors from which no accepting cycle is reachable.
    fn drop_dead(&mut self) {
        let mut edges = Vec::new();
        for q in 0..self.n {
            for x in 0..self.letters {
                for &(to, acc) in &self.succ[q * self.letters + x] {
                    edges.push((q, to as usize, acc));
                }
            }
        }
        let comp = components(self.n, edges.iter().map(|e| (e.0, e.1)));
        let mut live = vec![false; self.n];
        for &(u, v, acc) in &edges {
            if acc && comp[u] == comp[v] {
                live[u] = true;
            }
        }
        let mut rev = vec![Vec::new(); self.n];
        for &(u, v, _) in &edges {
            rev[v].push(u);
        }
        let mut stack: Vec<usize> = (0..self.n).filter(|&q| live[q]).collect();
        while let Some(v) = stack.pop() {
            for &u in &rev[v] {
                if !live[u] {
                    live[u] = true;
                    stack.push(u);
                }
            }
        }
        for list in self.succ.iter_mut() {
            list.retain(|&(to, _)| live[to as usize]);
        }
        self.initial.retain(|&q| live[q as usize]);
    }
}

#[derive(Clone)]
struct Node {
    name: u32,
    label: Vec<u32>,
    children: Vec<usize>,
}

/// Safra tree in preorder, encoded as `name, |label|, label.., #children`.
pub(crate) type TreeKey = Vec<u32>;

pub(crate) fn initial_tree(initial: &[u32]) -> TreeKey {
    let mut label = initial.to_vec();
    label.sort_unstable();
    label.dedup();
    if label.is_empty() {
        return Vec::new();
    }
    let mut key = vec![1, label.len() as u32];
    key.extend(label);
    key.push(0);
    key
}

fn decode(key: &[u32]) -> Vec<Node> {
    fn go(key: &[u32], pos: &mut usize, arena: &mut Vec<Node>) -> usize {
        let name = key[*pos];
        let len = key[*pos + 1] as usize;
        let label = key[*pos + 2..*pos + 2 + len].to_vec();
        let kids = key[*pos + 2 + len] as usize;
        *pos += 3 + len;
        let me = arena.len();
        arena.push(Node { name, label, children: Vec::new() });
        for _ in 0..kids {
            let c = go(key, pos, arena);
            arena[me].children.push(c);
        }
        me
    }
    let mut arena = Vec::new();
    if !key.is_empty() {
        let mut pos = 0;
        go(key, &mut pos, &mut arena);
    }
    arena
}

fn encode(arena: &[Node], v: usize, rename: &HashMap<u32, u32>, out: &mut Vec<u32>) {
    let node = &arena[v];
    out.push(rename[&node.name]);
    out.push(node.label.len() as u32);
    out.extend_from_slice(&node.label);
    out.push(node.children.len() as u32);
    for &c in &node.children {
        encode(arena, c, rename, out);
    }
}

fn intersect(a: &[u32], b: &[u32]) -> Vec<u32> {
    let (mut i, mut j, mut out) = (0, 0, Vec::new());
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn minus(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut j = 0;
    let mut out = Vec::new();
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if j >= b.len() || b[j] != x {
            out.push(x);
        }
    }
    out
}

fn union_into(acc: &mut Vec<u32>, b: &[u32]) {
    acc.extend_from_slice(b);
    acc.sort_unstable();
    acc.dedup();
}

/// Largest priority a step can emit for an NBA with `n` states.
pub(crate) fn max_priority(n: usize) -> Priority {
    4 * n.max(1) as Priority + 1
}

/// One Safra step. `moves(q, out)` pushes the successors of NBA state `q`
/// under the current letter. Returns the next tree and a max-parity priority.
pub(crate) fn safra_step(key: &[u32], n: usize, mut moves: impl FnMut(u32, &mut Vec<(u32, bool)>)) -> (TreeKey, Priority) {
    let top = max_priority(n);
    if key.is_empty() {
        return (Vec::new(), 1);
    }
    let mut arena = decode(key);
    let original = arena.len();
    let mut next_name = arena.iter().map(|v| v.name).max().unwrap() + 1;
    let mut buf = Vec::new();
    for v in 0..original {
        let mut all = Vec::new();
        let mut acc = Vec::new();
        for &q in &arena[v].label {
            buf.clear();
            moves(q, &mut buf);
            for &(to, good) in &buf {
                all.push(to);
                if good {
                    acc.push(to);
                }
            }
        }
        all.sort_unstable();
        all.dedup();
        acc.sort_unstable();
        acc.dedup();
        arena[v].label = all;
        if !acc.is_empty() {
            let c = arena.len();
            arena.push(Node { name: next_name, label: acc, children: Vec::new() });
            next_name += 1;
            arena[v].children.push(c);
        }
    }

    // older siblings keep their states; children stay inside their parent
    fn settle(arena: &mut Vec<Node>, v: usize, allowed: &[u32]) {
        let label = intersect(&arena[v].label, allowed);
        arena[v].label = label;
        let mut taken: Vec<u32> = Vec::new();
        for i in 0..arena[v].children.len() {
            let c = arena[v].children[i];
            let room = minus(&arena[v].label, &taken);
            settle(arena, c, &room);
            let cl = arena[c].label.clone();
            union_into(&mut taken, &cl);
        }
    }
    let everything = arena[0].label.clone();
    settle(&mut arena, 0, &everything);

    let mut red: Option<u32> = None;
    let mut green: Option<u32> = None;
    fn kill(arena: &[Node], v: usize, red: &mut Option<u32>) {
        *red = Some(red.map_or(arena[v].name, |r| r.min(arena[v].name)));
        for &c in &arena[v].children {
            kill(arena, c, red);
        }
    }
    fn prune(arena: &mut Vec<Node>, v: usize, red: &mut Option<u32>, green: &mut Option<u32>) {
        let kids = std::mem::take(&mut arena[v].children);
        let mut kept = Vec::new();
        for c in kids {
            if arena[c].label.is_empty() {
                kill(arena, c, red);
            } else {
                kept.push(c);
            }
        }
        let covered: usize = kept.iter().map(|&c| arena[c].label.len()).sum();
        if !kept.is_empty() && covered == arena[v].label.len() {
            for &c in &kept {
                kill(arena, c, red);
            }
            let name = arena[v].name;
            *green = Some(green.map_or(name, |g| g.min(name)));
            return;
        }
        arena[v].children = kept;
        for i in 0..arena[v].children.len() {
            let c = arena[v].children[i];
            prune(arena, c, red, green);
        }
    }
    if arena[0].label.is_empty() {
        return (Vec::new(), 1);
    }
    prune(&mut arena, 0, &mut red, &mut green);

    let prio_min = match (red, green) {
        (None, None) => None,
        (Some(r), None) => Some(2 * r - 1),
        (None, Some(g)) => Some(2 * g),
        (Some(r), Some(g)) => Some(if g < r { 2 * g } else { 2 * r - 1 }),
    };
    let priority = match prio_min {
        None => 1,
        Some(p) => top + 1 - p,
    };

    let mut names = Vec::new();
    fn collect(arena: &[Node], v: usize, names: &mut Vec<u32>) {
        names.push(arena[v].name);
        for &c in &arena[v].children {
            collect(arena, c, names);
        }
    }
    collect(&arena, 0, &mut names);
    names.sort_unstable();
    let rename: HashMap<u32, u32> = names.iter().enumerate().map(|(i, &x)| (x, i as u32 + 1)).collect();
    let mut out = Vec::new();
    encode(&arena, 0, &rename, &mut out);
    (out, priority)
}

/// Safra construction over an explicit NBA; states are trees reachable from
/// the initial one.
pub(crate) fn determinize_nba(nba: &Nba, alphabet: &super::alphabet::Alphabet, limit: usize) -> Result<WordAutomaton> {
    let mut index: HashMap<TreeKey, usize> = HashMap::new();
    let mut trees: Vec<TreeKey> = Vec::new();
    let mut queue = VecDeque::new();
    let start = initial_tree(&nba.initial);
    index.insert(start.clone(), 0);
    trees.push(start);
    queue.push_back(0);
    let mut trans = Vec::new();
    while let Some(s) = queue.pop_front() {
        for x in 0..nba.letters {
            let (next, k) = safra_step(&trees[s], nba.n, |q, out| {
                out.extend_from_slice(&nba.succ[q as usize * nba.letters + x]);
            });
            let t = match index.get(&next) {
                Some(&t) => t,
                None => {
                    let t = trees.len();
                    if t >= limit {
                        return Err(Error::TooLarge("determinization".into()));
                    }
                    index.insert(next.clone(), t);
                    trees.push(next);
                    queue.push_back(t);
                    t
                }
            };
            trans.push((s, x, k, t));
        }
    }
    let mut d = WordAutomaton::new(alphabet.clone(), ParityIndex::strong(1, max_priority(nba.n)), trees.len());
    for (s, x, k, t) in trans {
        d.add_transition(s, x, k, t)?;
    }
    Ok(d)
}

/// An equivalent deterministic parity automaton.
pub fn determinize(a: &WordAutomaton) -> Result<WordAutomaton> {
    determinize_with_limit(a, STATE_LIMIT)
}

/// [`determinize`] failing with [`Error::TooLarge`] once `limit` trees exist.
pub fn determinize_with_limit(a: &WordAutomaton, limit: usize) -> Result<WordAutomaton> {
    if a.is_deterministic() {
        return Ok(a.to_strong());
    }
    let base = trim(&normalize_priorities(&a.prune_unreachable()));
    let nba = Nba::from_parity(&base);
    let d = determinize_nba(&nba, a.alphabet(), limit)?;
    Ok(reduce(&d))
}
