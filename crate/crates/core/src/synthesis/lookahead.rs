//! Transducers whose output letters are functions of a lookahead value.
//!
//! A letter of type `Vec<L>` is a function `S_ω → L`, indexed by the
//! `S_ω` element of the lookahead homomorphism.

use crate::automata::{State, Symbol, Transducer, UpWord, WordAutomaton};
use crate::error::{Error, Result};
use crate::games::GameVerdict;
use crate::wilke::Homomorphism;

/// A positional move table `(state, x) ↦ y`, indexed by `q * |A_X| + x`.
pub type StrategyLetter = Vec<Symbol>;

/// Function from `S_ω` to `L`.
pub type LookaheadLetter<L> = Vec<L>;

/// Applies a stream of lookahead letters to the lookahead of `w`.
pub fn apply_lookahead<L: Clone + Eq>(
    f: &UpWord<LookaheadLetter<L>>,
    h: &Homomorphism,
    w: &UpWord<Symbol>,
) -> UpWord<L> {
    let lk = h.lookahead_stream(w);
    let p = f.prefix().len().max(lk.prefix().len());
    let l = crate::automata::word::lcm(f.period().len(), lk.period().len());
    let at = |n: usize| f.at(n)[*lk.at(n)].clone();
    UpWord::new((0..p).map(at).collect(), (p..p + l).map(at).collect()).unwrap()
}

/// Transducer `A_W ↠ (S_ω → Σ)` following the lasso positions of `w` and
/// emitting, at position `n`, the constant function with value `σ(n, ·, ·)`.
pub fn lookahead_strategy_transducer(
    w: &UpWord<Symbol>,
    verdict: &GameVerdict,
    h: &Homomorphism,
) -> Result<Transducer<Symbol, LookaheadLetter<StrategyLetter>>> {
    if !verdict.player_ii_wins {
        return Err(Error::invalid("the strategy does not win the game on this parameter"));
    }
    let s = &verdict.strategy;
    if s.lasso_len != w.lasso_len() {
        return Err(Error::mismatch("strategy belongs to a different parameter word"));
    }
    let m = h.algebra.inf_len();
    let inputs: Vec<Symbol> = (0..h.alphabet.len()).collect();
    let (t, _) = Transducer::explore(inputs, 0usize, |&n, _| {
        let letter: StrategyLetter = (0..s.states * s.xs).map(|i| s.get(n, i / s.xs, i % s.xs)).collect();
        Ok((vec![letter; m], w.next_pos(n)))
    })?;
    Ok(t)
}

/// Adds tracking of the state of `d` to a strategy transducer. The result
/// reads `A_W × A_X` and emits functions `S_ω → A_Y`.
pub fn compose_with_state_tracking(
    theta: &Transducer<Symbol, LookaheadLetter<StrategyLetter>>,
    d: &WordAutomaton,
    h: &Homomorphism,
) -> Result<Transducer<Symbol, LookaheadLetter<Symbol>>> {
    let al = d.alphabet();
    if al.arity() != 3 || !d.is_deterministic() {
        return Err(Error::invalid("expected a deterministic automaton over W × X × Y"));
    }
    let wx = al.sub_alphabet(&[0, 1]);
    let nx = al.factor(1).len();
    let m = h.algebra.inf_len();
    let inputs: Vec<Symbol> = (0..wx.len()).collect();
    let start = (theta.initial(), vec![d.initial()[0]; m]);
    let (t, _) = Transducer::explore(inputs, start, |(p, r): &(usize, Vec<State>), &a| {
        let c = wx.decode(a);
        let (wl, x) = (c[0], c[1]);
        let (ell, p2) = theta.step(*p, &wl)?;
        let mut f = Vec::with_capacity(m);
        let mut r2 = Vec::with_capacity(m);
        for (h2, choice) in ell.iter().enumerate().take(m) {
            let hh = h.algebra.mixed(h.letters[wl], h2);
            let q = r[hh];
            let y = choice[q * nx + x];
            let (_, q2) = d.step(q, al.encode(&[wl, x, y]));
            f.push(y);
            r2.push(q2);
        }
        Ok((f, (*p2, r2)))
    })?;
    Ok(t)
}

/// The transducer remembering the value of the prefix read so far: from
/// `v ∈ S₊¹` on `w` it moves to `v·α(w,0)` and emits `h ↦` the least `y`
/// with `v·α(w,1)·h ∈ F_y` (the first letter when there is none).
///
/// `marked` is over `A_W × {0,1}`; `families[y]` is `F_y` over its `S_ω`.
pub fn uniformised_lookahead_transducer(
    marked: &Homomorphism,
    families: &[Vec<bool>],
) -> Result<Transducer<Symbol, LookaheadLetter<Symbol>>> {
    let al = &marked.alphabet;
    if al.arity() != 2 || al.factor(1).len() != 2 {
        return Err(Error::invalid("expected a homomorphism over W × {0,1}"));
    }
    let s = &marked.algebra;
    if families.is_empty() || families.iter().any(|f| f.len() != s.inf_len()) {
        return Err(Error::invalid("recognition sets do not match the algebra"));
    }
    let nw = al.factor(0).len();
    let inputs: Vec<Symbol> = (0..nw).collect();
    let (t, _) = Transducer::explore(inputs, None::<usize>, |&v, &wl| {
        let zero = marked.letters[al.encode(&[wl, 0])];
        let one = marked.letters[al.encode(&[wl, 1])];
        let vm = s.mul1(v, Some(one));
        let f = (0..s.inf_len())
            .map(|hh| {
                let val = s.mixed1(vm, hh);
                families.iter().position(|fy| fy[val]).unwrap_or(0)
            })
            .collect();
        Ok((f, s.mul1(v, Some(zero))))
    })?;
    Ok(t)
}

/// The homomorphism `w ↦ β(w, 0)` over `A_W`, sharing the algebra of the
/// marked homomorphism so that lookahead values index its `S_ω` directly.
/// It need not be onto, so no witnesses are recorded.
pub fn unmarked(marked: &Homomorphism) -> Homomorphism {
    let al = &marked.alphabet;
    Homomorphism {
        algebra: marked.algebra.clone(),
        alphabet: al.factor(0).clone(),
        letters: (0..al.factor(0).len()).map(|a| marked.letters[al.encode(&[a, 0])]).collect(),
        accepting: marked.accepting.clone(),
        sources: marked.sources.clone(),
        fin_witness: Vec::new(),
        inf_witness: Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{enumerate_up_words, Alphabet, ParityIndex};
    use crate::games::decide_game_quantifier_up;
    use crate::wilke::{algebra_from_dpas, lasso_algebra};

    /// `y_n = w_{n+1}` over bits; X is ignored.
    pub(crate) fn shift_spec() -> WordAutomaton {
        let b = Alphabet::numeric(2);
        let al = Alphabet::product(&[b.clone(), b.clone(), b]);
        let mut d = WordAutomaton::new(al.clone(), ParityIndex::strong(0, 1), 4);
        for a in 0..al.len() {
            let c = al.decode(a);
            d.add_transition(0, a, 0, 1 + c[2]).unwrap();
            for e in 0..2 {
                if c[0] == e {
                    d.add_transition(1 + e, a, 0, 1 + c[2]).unwrap();
                } else {
                    d.add_transition(1 + e, a, 1, 3).unwrap();
                }
            }
            d.add_transition(3, a, 1, 3).unwrap();
        }
        d
    }

    #[test]
    fn shift_strategy_through_lookahead() {
        let d = shift_spec();
        let bits = Alphabet::numeric(2);
        let w = UpWord::periodic(vec![0, 1]).unwrap();
        let v = decide_game_quantifier_up(&w, &d).unwrap();
        let h = lasso_algebra(&bits, &w);
        let theta = lookahead_strategy_transducer(&w, &v, &h).unwrap();
        let tau = compose_with_state_tracking(&theta, &d, &h).unwrap();
        let wx = d.alphabet().sub_alphabet(&[0, 1]);
        for x in enumerate_up_words(2, 4) {
            let input = wx.tuple_word(&[&w, &x]);
            let f = tau.apply(&input).unwrap();
            let y = apply_lookahead(&f, &h, &w);
            assert_eq!(y, UpWord::periodic(vec![1, 0]).unwrap());
            assert!(d.accepts(&d.alphabet().tuple_word(&[&w, &x, &y])));
        }
    }

    #[test]
    fn uniformised_indicator_of_future_a() {
        // y_n = 1 iff the suffix after n contains a; F_y recognizes the marked
        // words whose mark sits before some a (y = 1) or before none (y = 0)
        let ab = Alphabet::new(["a", "b"]).unwrap();
        let al = Alphabet::product(&[ab, Alphabet::numeric(2)]);
        // 0 before the mark, 1 after it, 2 an a followed the mark
        let mut d = WordAutomaton::new(al.clone(), ParityIndex::strong(1, 2), 3);
        for c in 0..al.len() {
            let v = al.decode(c);
            let (letter, mark) = (v[0], v[1]);
            d.add_transition(0, c, 1, if mark == 1 { 1 } else { 0 }).unwrap();
            d.add_transition(1, c, 1, if letter == 0 { 2 } else { 1 }).unwrap();
            d.add_transition(2, c, 2, 2).unwrap();
        }
        let hm = algebra_from_dpas(&[d]).unwrap();
        let f1 = hm.accepting[0].clone();
        let f0: Vec<bool> = f1.iter().map(|&b| !b).collect();
        let tau = uniformised_lookahead_transducer(&hm, &[f0, f1]).unwrap();
        let h = unmarked(&hm);
        for w in [vec![], vec![0]].iter().flat_map(|p| {
            [vec![0, 1], vec![1]].into_iter().map(move |v| UpWord::new(p.clone(), v).unwrap())
        }) {
            let f = tau.apply(&w).unwrap();
            let y = apply_lookahead(&f, &h, &w);
            for n in 0..12 {
                let future_a = (n + 1..n + 1 + w.lasso_len() + 1).any(|k| *w.at(k) == 0);
                assert_eq!(*y.at(n) == 1, future_a, "{w} at {n}");
            }
        }
    }

    #[test]
    fn constant_relation_gives_constant_output() {
        let bits = Alphabet::numeric(2);
        let al = Alphabet::product(&[bits.clone(), bits]);
        let mut d = WordAutomaton::new(al.clone(), ParityIndex::strong(0, 0), 1);
        for c in 0..al.len() {
            d.add_transition(0, c, 0, 0).unwrap();
        }
        let hm = algebra_from_dpas(&[d]).unwrap();
        let all = vec![true; hm.algebra.inf_len()];
        let tau = uniformised_lookahead_transducer(&hm, &[all.clone(), all]).unwrap();
        let h = unmarked(&hm);
        let w = UpWord::new(vec![1], vec![0, 1]).unwrap();
        let y = apply_lookahead(&tau.apply(&w).unwrap(), &h, &w);
        assert_eq!(y, UpWord::periodic(vec![0]).unwrap());
    }
}
