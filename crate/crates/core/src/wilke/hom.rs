use std::collections::{HashMap, VecDeque};

use super::algebra::{idempotent_power, WilkeAlgebra};
use crate::automata::{Alphabet, ParityIndex, Priority, State, Symbol, UpWord, WordAutomaton};
use crate::error::{Error, Result};

/// A homomorphism from words over an alphabet onto a finite Wilke algebra,
/// with one recognition set per recognized language.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homomorphism {
    pub algebra: WilkeAlgebra,
    pub alphabet: Alphabet,
    /// Image of each letter in `S₊`.
    pub letters: Vec<usize>,
    /// `accepting[i][t]` iff `t ∈ F_i`.
    pub accepting: Vec<Vec<bool>>,
    /// A tag per recognized language.
    pub sources: Vec<String>,
    /// Shortest, lexicographically least word mapped to each `S₊` element.
    pub fin_witness: Vec<Vec<Symbol>>,
    /// A word mapped to each `S_ω` element.
    pub inf_witness: Vec<UpWord<Symbol>>,
}

impl Homomorphism {
    /// Restricts `algebra` to the image of `letters` and records witnesses.
    /// Elements are renumbered in order of discovery (shortlex for `S₊`).
    pub fn new(
        algebra: &WilkeAlgebra,
        alphabet: Alphabet,
        letters: Vec<usize>,
        accepting: Vec<Vec<bool>>,
        sources: Vec<String>,
    ) -> Result<Self> {
        if letters.len() != alphabet.len() || letters.iter().any(|&s| s >= algebra.fin_len()) {
            return Err(Error::invalid("letter map does not match the alphabet"));
        }
        if accepting.len() != sources.len() || accepting.iter().any(|f| f.len() != algebra.inf_len()) {
            return Err(Error::invalid("recognition sets do not match the algebra"));
        }
        let (fin, fin_witness) = shortlex_closure(letters.len(), |a| letters[a], |s, a| algebra.mul(*s, letters[a]));
        let fin_index: HashMap<usize, usize> = fin.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let mut inf: Vec<usize> = Vec::new();
        let mut inf_index: HashMap<usize, usize> = HashMap::new();
        let mut inf_witness = Vec::new();
        for (ti, &t) in fin.iter().enumerate() {
            let o = algebra.omega(t);
            if let std::collections::hash_map::Entry::Vacant(e) = inf_index.entry(o) {
                e.insert(inf.len());
                inf.push(o);
                inf_witness.push(UpWord::periodic(fin_witness[ti].clone()).unwrap());
            }
        }
        for (si, &s) in fin.iter().enumerate() {
            for (ti, &t) in fin.iter().enumerate() {
                let o = algebra.mixed(s, algebra.omega(t));
                if let std::collections::hash_map::Entry::Vacant(e) = inf_index.entry(o) {
                    e.insert(inf.len());
                    inf.push(o);
                    inf_witness.push(UpWord::new(fin_witness[si].clone(), fin_witness[ti].clone()).unwrap());
                }
            }
        }
        let n = fin.len();
        let m = inf.len();
        let mut mul = Vec::with_capacity(n * n);
        for &a in &fin {
            for &b in &fin {
                mul.push(fin_index[&algebra.mul(a, b)]);
            }
        }
        let mut mixed = Vec::with_capacity(n * m);
        for &a in &fin {
            for &t in &inf {
                let v = algebra.mixed(a, t);
                mixed.push(*inf_index.get(&v).ok_or_else(|| Error::Invariant("S_ω image not closed".into()))?);
            }
        }
        let omega = fin.iter().map(|&a| inf_index[&algebra.omega(a)]).collect();
        let restricted = WilkeAlgebra::new(
            fin.iter().map(|&s| algebra.fin_name(s).to_string()).collect(),
            inf.iter().map(|&t| algebra.inf_name(t).to_string()).collect(),
            mul,
            mixed,
            omega,
        )?;
        Ok(Homomorphism {
            algebra: restricted,
            alphabet,
            letters: letters.iter().map(|s| fin_index[s]).collect(),
            accepting: accepting.iter().map(|f| inf.iter().map(|&t| f[t]).collect()).collect(),
            sources,
            fin_witness,
            inf_witness,
        })
    }

    pub fn eval_fin(&self, u: &[Symbol]) -> Result<usize> {
        if u.is_empty() {
            return Err(Error::invalid("empty finite word has no value in S₊"));
        }
        Ok(self.eval_fin1(u).unwrap())
    }

    /// Value in `S₊¹`; the empty word maps to the neutral element.
    pub fn eval_fin1(&self, u: &[Symbol]) -> Option<usize> {
        u.iter().fold(None, |acc, &a| self.algebra.mul1(acc, Some(self.letters[a])))
    }

    pub fn eval_up(&self, w: &UpWord<Symbol>) -> usize {
        let period = self.eval_fin1(w.period()).unwrap();
        self.algebra.mixed1(self.eval_fin1(w.prefix()), self.algebra.omega(period))
    }

    /// Whether `w` belongs to the `i`-th recognized language.
    pub fn recognizes(&self, i: usize, w: &UpWord<Symbol>) -> bool {
        self.accepting[i][self.eval_up(w)]
    }

    /// The stream whose `n`-th letter is the value of `w_{n+1} w_{n+2} ⋯`;
    /// it has the same lasso shape as `w`.
    pub fn lookahead_stream(&self, w: &UpWord<Symbol>) -> UpWord<usize> {
        let vals: Vec<usize> = (0..w.lasso_len()).map(|n| self.eval_up(&w.suffix(n + 1))).collect();
        let p = w.prefix().len();
        UpWord::new(vals[..p].to_vec(), vals[p..].to_vec()).unwrap()
    }
}

/// Breadth-first closure of letter images under right multiplication by
/// letters. Returns the discovered elements and their shortlex-least words.
pub(crate) fn shortlex_closure<K: Clone + Eq + std::hash::Hash>(
    letters: usize,
    image: impl Fn(Symbol) -> K,
    extend: impl Fn(&K, Symbol) -> K,
) -> (Vec<K>, Vec<Vec<Symbol>>) {
    let mut index: HashMap<K, usize> = HashMap::new();
    let mut elems: Vec<K> = Vec::new();
    let mut words: Vec<Vec<Symbol>> = Vec::new();
    let mut queue = VecDeque::new();
    for a in 0..letters {
        let k = image(a);
        if !index.contains_key(&k) {
            index.insert(k.clone(), elems.len());
            queue.push_back(elems.len());
            elems.push(k);
            words.push(vec![a]);
        }
    }
    while let Some(i) = queue.pop_front() {
        for a in 0..letters {
            let k = extend(&elems[i], a);
            if !index.contains_key(&k) {
                index.insert(k.clone(), elems.len());
                queue.push_back(elems.len());
                let mut w = words[i].clone();
                w.push(a);
                elems.push(k);
                words.push(w);
            }
        }
    }
    (elems, words)
}

/// Transition profile: for every state of every automaton, the state reached
/// and the largest priority seen.
type Profile = Vec<(State, Priority)>;

/// The transition-profile algebra recognizing the languages of deterministic
/// automata over a shared alphabet.
pub fn algebra_from_dpas(ds: &[WordAutomaton]) -> Result<Homomorphism> {
    let first = ds.first().ok_or_else(|| Error::invalid("no automata to recognize"))?;
    let alphabet = first.alphabet().clone();
    let mut strong = Vec::with_capacity(ds.len());
    for d in ds {
        if d.alphabet() != &alphabet {
            return Err(Error::mismatch("automata must share an alphabet"));
        }
        if !d.is_deterministic() {
            return Err(Error::NotDeterministic);
        }
        strong.push(d.to_strong());
    }
    let mut offsets = vec![0];
    for d in &strong {
        offsets.push(offsets.last().unwrap() + d.num_states());
    }
    let total = *offsets.last().unwrap();
    let block = |q: usize| offsets.partition_point(|&o| o <= q) - 1;
    let letter_profile = |a: Symbol| -> Profile {
        (0..total)
            .map(|q| {
                let b = block(q);
                let (k, to) = strong[b].step(q - offsets[b], a);
                (to + offsets[b], k)
            })
            .collect()
    };
    let compose = |f: &Profile, g: &Profile| -> Profile {
        f.iter().map(|&(q, k)| (g[q].0, k.max(g[q].1))).collect()
    };
    let letters: Vec<Profile> = (0..alphabet.len()).map(letter_profile).collect();
    let (fin, _) = shortlex_closure(alphabet.len(), |a| letters[a].clone(), |f, a| compose(f, &letters[a]));
    let fin_index: HashMap<&Profile, usize> = fin.iter().enumerate().map(|(i, f)| (f, i)).collect();
    let n = fin.len();

    let omega_of = |f: &Profile| -> Vec<bool> {
        (0..total)
            .map(|q| {
                let mut seen: HashMap<State, usize> = HashMap::new();
                let mut path = Vec::new();
                let mut cur = q;
                while !seen.contains_key(&cur) {
                    seen.insert(cur, path.len());
                    path.push(f[cur].1);
                    cur = f[cur].0;
                }
                path[seen[&cur]..].iter().max().unwrap() % 2 == 0
            })
            .collect()
    };
    let mixed_of = |f: &Profile, v: &[bool]| -> Vec<bool> { f.iter().map(|&(q, _)| v[q]).collect() };
    let mut inf: Vec<Vec<bool>> = Vec::new();
    let mut inf_index: HashMap<Vec<bool>, usize> = HashMap::new();
    let mut add = |v: Vec<bool>, inf: &mut Vec<Vec<bool>>| -> usize {
        *inf_index.entry(v.clone()).or_insert_with(|| {
            inf.push(v);
            inf.len() - 1
        })
    };
    let omega: Vec<usize> = fin.iter().map(|f| add(omega_of(f), &mut inf)).collect();
    for f in &fin {
        for &t in omega.clone().iter() {
            let v = mixed_of(f, &inf[t]);
            add(v, &mut inf);
        }
    }
    let m = inf.len();
    let lookup: HashMap<&Vec<bool>, usize> = inf.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let mut mul = Vec::with_capacity(n * n);
    for f in &fin {
        for g in &fin {
            mul.push(fin_index[&compose(f, g)]);
        }
    }
    let mut mixed = Vec::with_capacity(n * m);
    for f in &fin {
        for v in &inf {
            mixed.push(lookup[&mixed_of(f, v)]);
        }
    }
    let algebra = WilkeAlgebra::new(
        (0..n).map(|i| format!("s{i}")).collect(),
        (0..m).map(|i| format!("o{i}")).collect(),
        mul,
        mixed,
        omega,
    )?;
    let accepting = strong
        .iter()
        .enumerate()
        .map(|(i, d)| inf.iter().map(|v| v[offsets[i] + d.initial()[0]]).collect())
        .collect();
    let sources = (0..ds.len()).map(|i| format!("D{i}")).collect();
    let letter_ids = (0..alphabet.len()).map(|a| fin_index[&letters[a]]).collect();
    Homomorphism::new(&algebra, alphabet, letter_ids, accepting, sources)
}

/// Deterministic automaton accepting exactly the single word `w`.
pub fn singleton_automaton(alphabet: &Alphabet, w: &UpWord<Symbol>) -> WordAutomaton {
    let len = w.lasso_len();
    let mut d = WordAutomaton::new(alphabet.clone(), ParityIndex::strong(0, 1), len + 1);
    for n in 0..len {
        for a in 0..alphabet.len() {
            if a == *w.lasso_letter(n) {
                d.add_transition(n, a, 0, w.next_pos(n)).unwrap();
            } else {
                d.add_transition(n, a, 1, len).unwrap();
            }
        }
    }
    for a in 0..alphabet.len() {
        d.add_transition(len, a, 1, len).unwrap();
    }
    d
}

/// The profile algebra of [`singleton_automaton`]; its lookahead determines
/// the lasso position of `w` at every position.
pub fn lasso_algebra(alphabet: &Alphabet, w: &UpWord<Symbol>) -> Homomorphism {
    algebra_from_dpas(&[singleton_automaton(alphabet, w)]).unwrap()
}

/// Split points `i₀, i₀ + step, i₀ + 2·step, …` such that every block
/// `w_{i+1} ⋯ w_{i+step}` between consecutive ones maps to the idempotent `e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SplitSchedule {
    pub anchor: usize,
    pub e: usize,
    pub step: usize,
}

impl SplitSchedule {
    pub fn is_split_point(&self, i: usize) -> bool {
        i >= self.anchor && (i - self.anchor).is_multiple_of(self.step)
    }
}

/// Schedule whose anchor is the least position `i ≥ r` after which a full
/// copy of the period starts.
pub fn split_schedule(h: &Homomorphism, w: &UpWord<Symbol>, r: usize) -> SplitSchedule {
    let p = w.prefix().len();
    let l = w.period().len();
    let v = h.eval_fin(w.period()).unwrap();
    let (k, e) = idempotent_power(&h.algebra, v);
    // least i >= r with i + 1 >= p and (i + 1 - p) divisible by l
    let lo = r.max(p.saturating_sub(1));
    let anchor = (lo..).find(|&i| i + 1 >= p && (i + 1 - p).is_multiple_of(l)).unwrap();
    SplitSchedule { anchor, e, step: k * l }
}

/// Infinite product of a saturated stream over `S₊¹` (`None` is neutral).
pub fn saturated_product(s: &WilkeAlgebra, t: &UpWord<Option<usize>>) -> Result<usize> {
    let prefix = t.prefix().iter().fold(None, |acc, &x| s.mul1(acc, x));
    let period = t
        .period()
        .iter()
        .fold(None, |acc, &x| s.mul1(acc, x))
        .ok_or_else(|| Error::invalid("stream is not saturated"))?;
    Ok(s.mixed1(prefix, s.omega(period)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::enumerate_up_words;
    use crate::wilke::algebra::check_wilke_axioms;

    fn inf_a() -> WordAutomaton {
        let ab = Alphabet::new(["a", "b"]).unwrap();
        let mut d = WordAutomaton::new(ab, ParityIndex::strong(1, 2), 1);
        d.add_transition(0, 0, 2, 0).unwrap();
        d.add_transition(0, 1, 1, 0).unwrap();
        d
    }

    #[test]
    fn recognizes_infinitely_many_a() {
        let d = inf_a();
        let h = algebra_from_dpas(std::slice::from_ref(&d)).unwrap();
        assert!(check_wilke_axioms(&h.algebra).ok());
        for w in enumerate_up_words(2, 5) {
            assert_eq!(h.recognizes(0, &w), d.accepts(&w), "{w}");
        }
        let ab = |p: &[usize], v: &[usize]| UpWord::new(p.to_vec(), v.to_vec()).unwrap();
        assert!(h.recognizes(0, &ab(&[], &[0, 1])));
        assert!(!h.recognizes(0, &ab(&[0], &[1])));
    }

    #[test]
    fn witnesses_evaluate_back() {
        let h = algebra_from_dpas(&[inf_a()]).unwrap();
        for (s, u) in h.fin_witness.iter().enumerate() {
            assert_eq!(h.eval_fin(u).unwrap(), s);
        }
        for (t, w) in h.inf_witness.iter().enumerate() {
            assert_eq!(h.eval_up(w), t);
        }
    }

    #[test]
    fn all_accepting_is_trivial() {
        let ab = Alphabet::new(["a", "b"]).unwrap();
        let mut d = WordAutomaton::new(ab, ParityIndex::strong(0, 0), 1);
        d.add_transition(0, 0, 0, 0).unwrap();
        d.add_transition(0, 1, 0, 0).unwrap();
        let h = algebra_from_dpas(&[d]).unwrap();
        assert_eq!((h.algebra.fin_len(), h.algebra.inf_len()), (1, 1));
        assert_eq!(h.accepting[0], vec![true]);
    }

    #[test]
    fn lookahead_matches_suffixes() {
        let h = algebra_from_dpas(&[inf_a()]).unwrap();
        let w = UpWord::new(vec![0], vec![1]).unwrap();
        let lk = h.lookahead_stream(&w);
        assert!(!h.accepting[0][*lk.at(0)]);
        for w in enumerate_up_words(2, 4) {
            let lk = h.lookahead_stream(&w);
            for n in 0..12 {
                assert_eq!(*lk.at(n), h.eval_up(&w.suffix(n + 1)));
            }
        }
    }

    #[test]
    fn schedule_blocks_map_to_e() {
        let h = algebra_from_dpas(&[inf_a()]).unwrap();
        for w in enumerate_up_words(2, 4) {
            for r in [0, 3, 7] {
                let sc = split_schedule(&h, &w, r);
                assert!(sc.anchor >= r);
                assert!(h.algebra.is_idempotent(sc.e));
                for k in 0..20 {
                    let i = sc.anchor + k * sc.step;
                    let block: Vec<usize> = (i + 1..=i + sc.step).map(|n| *w.at(n)).collect();
                    assert_eq!(h.eval_fin(&block).unwrap(), sc.e);
                }
            }
        }
    }

    #[test]
    fn saturated_products() {
        let g = WilkeAlgebra::cyclic_group(3);
        let t = UpWord::new(vec![Some(1)], vec![Some(2), None]).unwrap();
        assert_eq!(saturated_product(&g, &t).unwrap(), 0);
        assert!(saturated_product(&g, &UpWord::periodic(vec![None]).unwrap()).is_err());
    }
}
