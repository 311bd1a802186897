use std::collections::HashMap;

use super::alphabet::{Alphabet, Symbol};
use super::graph::PriorityGraph;
use super::index::{IndexKind, ParityIndex, Priority};
use super::word::UpWord;
use crate::error::{Error, Result};

pub type State = usize;

/// A parity automaton on ω-words with priorities on transitions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordAutomaton {
    alphabet: Alphabet,
    index: ParityIndex,
    names: Vec<String>,
    initial: Vec<State>,
    delta: Vec<Vec<(Priority, State)>>,
}

impl WordAutomaton {
    /// An automaton with `states` states named `q0, q1, ...`, no transitions
    /// and initial state `q0`.
    pub fn new(alphabet: Alphabet, index: ParityIndex, states: usize) -> Self {
        let states = states.max(1);
        WordAutomaton {
            names: (0..states).map(|i| format!("q{i}")).collect(),
            delta: vec![Vec::new(); states * alphabet.len()],
            alphabet,
            index,
            initial: vec![0],
        }
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.names.len() {
            return Err(Error::invalid("wrong number of state names"));
        }
        self.names = names;
        Ok(self)
    }

    pub fn set_initial(&mut self, initial: Vec<State>) {
        let mut initial = initial;
        initial.sort_unstable();
        initial.dedup();
        self.initial = initial;
    }

    pub fn add_transition(&mut self, q: State, a: Symbol, k: Priority, to: State) -> Result<()> {
        if !self.index.contains(k) {
            return Err(Error::invalid(format!("priority {k} outside {}", self.index)));
        }
        if q >= self.names.len() || to >= self.names.len() || a >= self.alphabet.len() {
            return Err(Error::invalid("transition refers to unknown state or letter"));
        }
        let slot = &mut self.delta[q * self.alphabet.len() + a];
        if !slot.contains(&(k, to)) {
            slot.push((k, to));
            slot.sort_unstable();
        }
        Ok(())
    }

    /// Checks the structural invariants: known initial states, priorities in
    /// range and at least one successor for every state and letter.
    pub fn validate(&self) -> Result<()> {
        if self.initial.is_empty() {
            return Err(Error::invalid("no initial state"));
        }
        if self.initial.iter().any(|&q| q >= self.names.len()) {
            return Err(Error::invalid("unknown initial state"));
        }
        for q in 0..self.names.len() {
            for a in 0..self.alphabet.len() {
                let s = self.succ(q, a);
                if s.is_empty() {
                    return Err(Error::invalid(format!(
                        "state {} has no transition on {}",
                        self.names[q],
                        self.alphabet.name(a)
                    )));
                }
                if let Some(&(k, _)) = s.iter().find(|(k, _)| !self.index.contains(*k)) {
                    return Err(Error::invalid(format!("priority {k} outside {}", self.index)));
                }
            }
        }
        Ok(())
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn index(&self) -> ParityIndex {
        self.index
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn initial(&self) -> &[State] {
        &self.initial
    }

    pub fn state_name(&self, q: State) -> &str {
        &self.names[q]
    }

    pub fn state_names(&self) -> &[String] {
        &self.names
    }

    pub fn state_by_name(&self, name: &str) -> Option<State> {
        self.names.iter().position(|n| n == name)
    }

    pub fn succ(&self, q: State, a: Symbol) -> &[(Priority, State)] {
        &self.delta[q * self.alphabet.len() + a]
    }

    /// All transitions as `(q, a, k, q')`.
    pub fn transitions(&self) -> impl Iterator<Item = (State, Symbol, Priority, State)> + '_ {
        let n = self.alphabet.len();
        self.delta.iter().enumerate().flat_map(move |(i, s)| {
            s.iter().map(move |&(k, to)| (i / n, i % n, k, to))
        })
    }

    pub fn is_deterministic(&self) -> bool {
        self.initial.len() == 1 && self.delta.iter().all(|s| s.len() == 1)
    }

    pub fn is_complete(&self) -> bool {
        self.delta.iter().all(|s| !s.is_empty())
    }

    /// The unique transition of a deterministic automaton.
    pub fn step(&self, q: State, a: Symbol) -> (Priority, State) {
        self.delta[q * self.alphabet.len() + a][0]
    }

    pub fn accepts(&self, w: &UpWord<Symbol>) -> bool {
        if self.is_deterministic() {
            dpa_accepts(self, w)
        } else {
            npa_accepts(self, w)
        }
    }

    /// An equivalent automaton with a strong index. Weak automata are
    /// composed with a tracker of the largest priority seen so far.
    pub fn to_strong(&self) -> WordAutomaton {
        if self.index.kind == IndexKind::Strong {
            return self.clone();
        }
        let (lo, hi) = (self.index.lo, self.index.hi);
        let width = (hi - lo + 1) as usize;
        let id = |q: State, m: Priority| q * width + (m - lo) as usize;
        let mut out = WordAutomaton::new(self.alphabet.clone(), ParityIndex::strong(lo, hi), self.num_states() * width);
        let mut names = Vec::with_capacity(out.num_states());
        for q in 0..self.num_states() {
            for m in lo..=hi {
                names.push(format!("{}~{m}", self.names[q]));
            }
        }
        out.names = names;
        for (q, a, k, to) in self.transitions() {
            for m in lo..=hi {
                let s = m.max(k);
                out.add_transition(id(q, m), a, s, id(to, s)).unwrap();
            }
        }
        out.set_initial(self.initial.iter().map(|&q| id(q, lo)).collect());
        out.prune_unreachable()
    }

    /// Restricts to states reachable from the initial ones.
    pub fn prune_unreachable(&self) -> WordAutomaton {
        let n = self.num_states();
        let mut seen = vec![false; n];
        let mut order = Vec::new();
        let mut stack: Vec<State> = self.initial.iter().rev().copied().collect();
        for &q in &self.initial {
            seen[q] = true;
        }
        while let Some(q) = stack.pop() {
            order.push(q);
            for a in 0..self.alphabet.len() {
                for &(_, to) in self.succ(q, a).iter().rev() {
                    if !seen[to] {
                        seen[to] = true;
                        stack.push(to);
                    }
                }
            }
        }
        order.sort_unstable();
        if order.len() == n {
            return self.clone();
        }
        self.restrict(&order)
    }

    /// Sub-automaton on the listed states, renumbered in list order;
    /// transitions leaving the set are dropped.
    pub(crate) fn restrict(&self, keep: &[State]) -> WordAutomaton {
        let map: HashMap<State, State> = keep.iter().enumerate().map(|(i, &q)| (q, i)).collect();
        let mut out = WordAutomaton::new(self.alphabet.clone(), self.index, keep.len());
        out.names = keep.iter().map(|&q| self.names[q].clone()).collect();
        for (i, &q) in keep.iter().enumerate() {
            for a in 0..self.alphabet.len() {
                for &(k, to) in self.succ(q, a) {
                    if let Some(&j) = map.get(&to) {
                        out.delta[i * self.alphabet.len() + a].push((k, j));
                    }
                }
            }
        }
        out.initial = self.initial.iter().filter_map(|q| map.get(q).copied()).collect();
        out
    }

    /// Transitions rewritten by `f`, keeping structure.
    pub(crate) fn map_priorities(&self, index: ParityIndex, f: impl Fn(State, Symbol, Priority, State) -> Priority) -> WordAutomaton {
        let mut out = self.clone();
        out.index = index;
        let n = self.alphabet.len();
        for (i, slot) in out.delta.iter_mut().enumerate() {
            for t in slot.iter_mut() {
                t.0 = f(i / n, i % n, t.0, t.1);
            }
            slot.sort_unstable();
            slot.dedup();
        }
        out
    }

    /// Reads letters of `target` through the coordinates `coords`: a letter
    /// of `target` is mapped to the tuple of the selected coordinates, which
    /// must form this automaton's alphabet.
    pub fn cylinder(&self, target: &Alphabet, coords: &[usize]) -> Result<WordAutomaton> {
        let sub = target.sub_alphabet(coords);
        if sub != self.alphabet {
            return Err(Error::mismatch(format!(
                "{:?} is not the product of the selected factors of {:?}",
                self.alphabet, target
            )));
        }
        let mut out = WordAutomaton::new(target.clone(), self.index, self.num_states());
        out.names = self.names.clone();
        out.initial = self.initial.clone();
        let n = target.len();
        for q in 0..self.num_states() {
            for a in 0..n {
                let b = target.project_symbol(a, coords);
                out.delta[q * n + a] = self.succ(q, b).to_vec();
            }
        }
        Ok(out)
    }

    /// Existential projection onto the coordinates in `keep`.
    pub fn project(&self, keep: &[usize]) -> Result<WordAutomaton> {
        if keep.is_empty() || keep.iter().any(|&i| i >= self.alphabet.arity()) {
            return Err(Error::invalid("bad projection coordinates"));
        }
        let target = self.alphabet.sub_alphabet(keep);
        let mut out = WordAutomaton::new(target.clone(), self.index, self.num_states());
        out.names = self.names.clone();
        out.initial = self.initial.clone();
        let n = target.len();
        for (q, a, k, to) in self.transitions() {
            let b = self.alphabet.project_symbol(a, keep);
            let slot = &mut out.delta[q * n + b];
            if !slot.contains(&(k, to)) {
                slot.push((k, to));
            }
        }
        for slot in out.delta.iter_mut() {
            slot.sort_unstable();
        }
        Ok(out)
    }

    /// Graph on states with priority-labelled edges.
    pub(crate) fn graph(&self) -> PriorityGraph {
        PriorityGraph {
            n: self.num_states(),
            edges: self.transitions().map(|(q, _, k, to)| (q, k, to)).collect(),
        }
    }
}

/// Membership of an ultimately periodic word in `L(C)`.
pub fn index_language_member(index: &ParityIndex, w: &UpWord<Priority>) -> bool {
    index.accepts(w.prefix(), w.period())
}

/// Deterministic automaton over the letters `lo..=hi` accepting `L(C)`.
/// Letters are named by their priority.
pub fn index_condition_automaton(index: &ParityIndex) -> WordAutomaton {
    let alphabet = Alphabet::new(index.priorities().map(|k| k.to_string())).unwrap();
    let mut a = WordAutomaton::new(alphabet, ParityIndex::strong(index.lo, index.hi), 1);
    for k in index.priorities() {
        a.add_transition(0, (k - index.lo) as usize, k, 0).unwrap();
    }
    if index.kind == IndexKind::Weak {
        a.index.kind = IndexKind::Weak;
        return a.to_strong().with_names_sup(index);
    }
    a
}

impl WordAutomaton {
    fn with_names_sup(mut self, index: &ParityIndex) -> WordAutomaton {
        self.names = (0..self.num_states()).map(|i| format!("sup{}", index.lo + i as Priority)).collect();
        self
    }
}

/// Runs a deterministic automaton on a lasso and checks the cycle.
pub fn dpa_accepts(d: &WordAutomaton, w: &UpWord<Symbol>) -> bool {
    debug_assert!(d.is_deterministic());
    let mut q = d.initial[0];
    let mut top = None::<Priority>;
    for &a in w.prefix() {
        let (k, to) = d.step(q, a);
        top = top.max(Some(k));
        q = to;
    }
    // states at period starts repeat after at most |Q| rounds
    let mut seen: HashMap<State, usize> = HashMap::new();
    let mut round_max: Vec<Priority> = Vec::new();
    loop {
        if let Some(&r) = seen.get(&q) {
            let cyc = round_max[r..].iter().copied().max().unwrap();
            let verdict = match d.index.kind {
                IndexKind::Strong => cyc,
                IndexKind::Weak => round_max.iter().copied().max().unwrap().max(top.unwrap_or(0)),
            };
            return verdict % 2 == 0;
        }
        seen.insert(q, round_max.len());
        let mut m = 0;
        for &a in w.period() {
            let (k, to) = d.step(q, a);
            m = m.max(k);
            q = to;
        }
        round_max.push(m);
    }
}

/// Membership for nondeterministic automata via the product of the
/// automaton with the lasso of `w`.
pub fn npa_accepts(n: &WordAutomaton, w: &UpWord<Symbol>) -> bool {
    if n.index.kind == IndexKind::Weak {
        return npa_accepts(&n.to_strong(), w);
    }
    let len = w.lasso_len();
    let id = |q: State, i: usize| q * len + i;
    let mut edges = Vec::new();
    for q in 0..n.num_states() {
        for i in 0..len {
            let a = *w.lasso_letter(i);
            for &(k, to) in n.succ(q, a) {
                edges.push((id(q, i), k, id(to, w.next_pos(i))));
            }
        }
    }
    let g = PriorityGraph { n: n.num_states() * len, edges };
    let init: Vec<usize> = n.initial.iter().map(|&q| id(q, 0)).collect();
    g.accepting_lasso(&init).is_some()
}

/// Complement of a deterministic automaton: every priority moves up by one.
pub fn complement_dpa(d: &WordAutomaton) -> Result<WordAutomaton> {
    if !d.is_deterministic() {
        return Err(Error::NotDeterministic);
    }
    let d = d.to_strong();
    let idx = ParityIndex::strong(d.index.lo + 1, d.index.hi + 1);
    Ok(d.map_priorities(idx, |_, _, k, _| k + 1))
}

/// Existential projection onto the coordinates `keep` of a product alphabet.
pub fn project(n: &WordAutomaton, keep: &[usize]) -> Result<WordAutomaton> {
    n.project(keep)
}

/// Canonical form of an ultimately periodic word.
pub fn up_normalize<T: Clone + Eq>(w: &UpWord<T>) -> UpWord<T> {
    w.canonical()
}
