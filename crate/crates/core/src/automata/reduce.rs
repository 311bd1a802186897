//! Language-preserving clean-ups used between constructions: priority
//! compression along the strongly connected structure, removal of states
//! that cannot reach acceptance, and bisimulation quotients.

use std::collections::HashMap;

use super::automaton::{State, WordAutomaton};
use super::graph::components;
use super::index::{IndexKind, ParityIndex, Priority};

/// Reassigns priorities so that every cycle keeps the parity of its maximum
/// while using as few priorities as possible. Transient transitions get the
/// lowest value.
pub fn normalize_priorities(a: &WordAutomaton) -> WordAutomaton {
    let a = a.to_strong();
    let trans: Vec<(State, usize, Priority, State)> = a.transitions().collect();
    let mut fresh = vec![0 as Priority; trans.len()];
    let all: Vec<usize> = (0..trans.len()).collect();
    assign(a.num_states(), &trans, &all, &mut fresh);
    let key: HashMap<(State, usize, Priority, State), Priority> =
        trans.iter().copied().zip(fresh.iter().copied()).collect();
    let hi = fresh.iter().copied().max().unwrap_or(0);
    a.map_priorities(ParityIndex::strong(0, hi), |q, x, k, to| key[&(q, x, k, to)])
}

fn assign(n: usize, trans: &[(State, usize, Priority, State)], subset: &[usize], out: &mut [Priority]) {
    let comp = components(n, subset.iter().map(|&t| (trans[t].0, trans[t].3)));
    let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
    for &t in subset {
        let (u, _, _, v) = trans[t];
        if comp[u] == comp[v] {
            groups.entry(comp[u]).or_default().push(t);
        } else {
            out[t] = 0;
        }
    }
    for (_, inner) in groups {
        let m = inner.iter().map(|&t| trans[t].2).max().unwrap();
        let rest: Vec<usize> = inner.iter().copied().filter(|&t| trans[t].2 < m).collect();
        let below = if rest.is_empty() {
            None
        } else {
            assign(n, trans, &rest, out);
            rest.iter().map(|&t| out[t]).max()
        };
        let v = match below {
            None => m % 2,
            Some(b) if b % 2 == m % 2 => b,
            Some(b) => b + 1,
        };
        for &t in &inner {
            if trans[t].2 == m {
                out[t] = v;
            }
        }
    }
}

/// Drops states from which no accepting run starts. The result may be
/// incomplete.
pub(crate) fn trim(a: &WordAutomaton) -> WordAutomaton {
    let a = a.to_strong();
    let live = a.graph().live_vertices();
    let keep: Vec<State> = (0..a.num_states()).filter(|&q| live[q]).collect();
    if keep.len() == a.num_states() {
        return a;
    }
    a.restrict(&keep)
}

/// A block together with the blocks reached by each letter and priority.
type Signature = (usize, Vec<(usize, Priority, usize)>);

/// Quotient by the coarsest bisimulation respecting letters and priorities.
/// Works for deterministic and nondeterministic automata alike.
pub fn bisimulation_quotient(a: &WordAutomaton) -> WordAutomaton {
    let n = a.num_states();
    let letters = a.alphabet().len();
    let mut block = vec![0usize; n];
    let mut count = 1;
    loop {
        let mut sigs: HashMap<Signature, usize> = HashMap::new();
        let mut next = vec![0; n];
        for q in 0..n {
            let mut sig = Vec::new();
            for x in 0..letters {
                for &(k, to) in a.succ(q, x) {
                    sig.push((x, k, block[to]));
                }
            }
            sig.sort_unstable();
            sig.dedup();
            let len = sigs.len();
            next[q] = *sigs.entry((block[q], sig)).or_insert(len);
        }
        let c = sigs.len();
        block = next;
        if c == count {
            break;
        }
        count = c;
    }
    if count == n {
        return a.clone();
    }
    // representative per block: the smallest state
    let mut rep = vec![usize::MAX; count];
    for q in 0..n {
        rep[block[q]] = rep[block[q]].min(q);
    }
    let mut order: Vec<usize> = (0..count).collect();
    order.sort_by_key(|&b| rep[b]);
    let mut renum = vec![0; count];
    for (i, &b) in order.iter().enumerate() {
        renum[b] = i;
    }
    let mut out = WordAutomaton::new(a.alphabet().clone(), a.index(), count)
        .with_names(order.iter().map(|&b| a.state_name(rep[b]).to_string()).collect())
        .unwrap();
    for &b in &order {
        let q = rep[b];
        for x in 0..letters {
            for &(k, to) in a.succ(q, x) {
                out.add_transition(renum[b], x, k, renum[block[to]]).unwrap();
            }
        }
    }
    out.set_initial(a.initial().iter().map(|&q| renum[block[q]]).collect());
    out
}

/// Reachability pruning, priority compression and bisimulation quotient.
pub fn reduce(a: &WordAutomaton) -> WordAutomaton {
    let strong = a.prune_unreachable();
    let strong = if strong.index().kind == IndexKind::Weak { strong.to_strong() } else { strong };
    let mut cur = bisimulation_quotient(&normalize_priorities(&strong));
    loop {
        let next = bisimulation_quotient(&normalize_priorities(&cur));
        if next.num_states() == cur.num_states() {
            return next;
        }
        cur = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::alphabet::Alphabet;
    use crate::automata::word::enumerate_up_words;

    #[test]
    fn compresses_priorities_and_merges_states() {
        // two copies of "infinitely many a" with inflated priorities
        let ab = Alphabet::new(["a", "b"]).unwrap();
        let mut d = WordAutomaton::new(ab, ParityIndex::strong(3, 8), 2);
        d.add_transition(0, 0, 8, 1).unwrap();
        d.add_transition(0, 1, 5, 0).unwrap();
        d.add_transition(1, 0, 6, 0).unwrap();
        d.add_transition(1, 1, 3, 1).unwrap();
        let r = reduce(&d);
        assert!(r.num_states() <= 2);
        assert!(r.index().hi <= 2);
        for w in enumerate_up_words(2, 5) {
            assert_eq!(r.accepts(&w), d.accepts(&w));
        }
    }
}
