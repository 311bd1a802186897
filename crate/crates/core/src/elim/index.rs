use std::fmt;
use std::str::FromStr;

use super::game::{eliminate_game_quantifier_with, EliminationRoute};
use crate::automata::determinize::STATE_LIMIT;
use crate::automata::{
    combine_dpas, complement_dpa, determinize_with_limit, index_condition_automaton, Alphabet, BoolFn, IndexKind, ParityIndex,
    UpWord, WordAutomaton,
};
use crate::error::{Error, Result};

/// Deterministic (`dt`) or nondeterministic (`nd`) automata in the index
/// quantifier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AutomatonKind {
    Deterministic,
    Nondeterministic,
}

impl fmt::Display for AutomatonKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AutomatonKind::Deterministic => "dt",
            AutomatonKind::Nondeterministic => "nd",
        })
    }
}

impl FromStr for AutomatonKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dt" => Ok(AutomatonKind::Deterministic),
            "nd" => Ok(AutomatonKind::Nondeterministic),
            _ => Err(Error::invalid(format!("unknown automaton kind {s:?}, expected dt or nd"))),
        }
    }
}

/// What a nondeterministic index quantifier amounts to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormalizationOutcome {
    AlwaysTrue,
    /// `∀X.φ`
    ForAllPhi,
    /// `∀X.¬φ`
    ForAllNotPhi,
    /// The deterministic quantifier with this index.
    ReduceToDt(ParityIndex),
}

/// Classifies a nondeterministic index. The index is shifted first so that
/// its lowest priority is 0 or 1.
pub fn nd_normalize(c: ParityIndex) -> NormalizationOutcome {
    use NormalizationOutcome::*;
    let c = c.shifted();
    match (c.kind, c.lo, c.hi) {
        (_, 0, 0) => ForAllPhi,
        (_, 1, 1) => ForAllNotPhi,
        (IndexKind::Strong, 0, 1) => ReduceToDt(c),
        (IndexKind::Strong, _, _) => AlwaysTrue,
        (IndexKind::Weak, _, j) if j >= 3 => ReduceToDt(ParityIndex::strong(0, 1)),
        (IndexKind::Weak, _, _) => ReduceToDt(c),
    }
}

/// The one-state automaton accepting every word.
pub fn universal_automaton(alphabet: &Alphabet) -> WordAutomaton {
    let mut a = WordAutomaton::new(alphabet.clone(), ParityIndex::strong(0, 0), 1);
    for x in 0..alphabet.len() {
        a.add_transition(0, x, 0, 0).unwrap();
    }
    a
}

/// Deterministic automaton over `A_W × A_X × A_C` accepting `⟨w, x, k⟩` iff
/// `k ∈ L_C` exactly when `D` accepts `⟨w, x⟩`.
pub fn phi_c_automaton(d: &WordAutomaton, c: ParityIndex) -> Result<WordAutomaton> {
    if !d.is_deterministic() {
        return Err(Error::NotDeterministic);
    }
    let al = d.alphabet();
    if al.arity() != 2 {
        return Err(Error::mismatch("expected an automaton over W × X"));
    }
    let cond = index_condition_automaton(&c);
    let full = Alphabet::product(&[al.factor(0).clone(), al.factor(1).clone(), cond.alphabet().clone()]);
    let parts = [d.cylinder(&full, &[0, 1])?, cond.cylinder(&full, &[2])?];
    combine_dpas(&parts, &BoolFn::xnor())
}

/// `{ w : ∀x. D accepts ⟨w, x⟩ }` when `negate` is false, `{ w : ∀x. D
/// rejects ⟨w, x⟩ }` otherwise.
fn universal_projection(d: &WordAutomaton, negate: bool, limit: usize) -> Result<WordAutomaton> {
    let bad = if negate { d.to_strong() } else { complement_dpa(d)? };
    complement_dpa(&determinize_with_limit(&bad.project(&[0])?, limit)?)
}

/// Deterministic automaton over `A_W` accepting the `w` for which some
/// automaton of the given kind and index recognizes `{ x : D accepts ⟨w, x⟩ }`.
pub fn eliminate_index_quantifier(d: &WordAutomaton, c: ParityIndex, kind: AutomatonKind) -> Result<WordAutomaton> {
    eliminate_index_quantifier_with(d, c, kind, STATE_LIMIT)
}

/// [`eliminate_index_quantifier`] failing with [`Error::TooLarge`] once a
/// determinization exceeds `limit` states.
pub fn eliminate_index_quantifier_with(
    d: &WordAutomaton,
    c: ParityIndex,
    kind: AutomatonKind,
    limit: usize,
) -> Result<WordAutomaton> {
    if !d.is_deterministic() {
        return Err(Error::NotDeterministic);
    }
    match kind {
        AutomatonKind::Deterministic => {
            eliminate_game_quantifier_with(&phi_c_automaton(d, c)?, EliminationRoute::Auto, limit)
        }
        AutomatonKind::Nondeterministic => match nd_normalize(c) {
            NormalizationOutcome::AlwaysTrue => Ok(universal_automaton(d.alphabet().factor(0))),
            NormalizationOutcome::ForAllPhi => universal_projection(d, false, limit),
            NormalizationOutcome::ForAllNotPhi => universal_projection(d, true, limit),
            NormalizationOutcome::ReduceToDt(c) => {
                eliminate_index_quantifier_with(d, c, AutomatonKind::Deterministic, limit)
            }
        },
    }
}

/// Whether the language `{ x : D accepts ⟨·, x⟩ }` over the unit parameter
/// alphabet is recognized by an automaton of the given kind and index.
pub fn decide_index_parameterless(d: &WordAutomaton, c: ParityIndex, kind: AutomatonKind) -> Result<bool> {
    if d.alphabet().arity() != 2 || d.alphabet().factor(0).len() != 1 {
        return Err(Error::mismatch("the parameter alphabet must be the unit alphabet"));
    }
    let e = eliminate_index_quantifier(d, c, kind)?;
    Ok(e.accepts(&UpWord::periodic(vec![0]).unwrap()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{emptiness, enumerate_up_words, index_language_member, Priority};
    use crate::games::decide_game_quantifier_up;
    use crate::wilke::singleton_automaton;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use NormalizationOutcome::*;

    /// Over unit × {a, b}; `inf` selects infinitely many `a`, otherwise
    /// finitely many.
    fn a_language(inf: bool) -> WordAutomaton {
        let al = Alphabet::product(&[Alphabet::unit(), Alphabet::new(["a", "b"]).unwrap()]);
        let (ka, kb) = if inf { (2, 1) } else { (1, 0) };
        let mut d = WordAutomaton::new(al, ParityIndex::strong(0, 2), 1);
        d.add_transition(0, 0, ka, 0).unwrap();
        d.add_transition(0, 1, kb, 0).unwrap();
        d
    }

    fn random_wx(rng: &mut ChaCha8Rng, states: usize, hi: Priority) -> WordAutomaton {
        let b = Alphabet::numeric(2);
        let al = Alphabet::product(&[b.clone(), b]);
        let lo = hi.saturating_sub(1);
        let mut d = WordAutomaton::new(al.clone(), ParityIndex::strong(lo, hi), states);
        for q in 0..states {
            for a in 0..al.len() {
                d.add_transition(q, a, rng.gen_range(lo..=hi), rng.gen_range(0..states)).unwrap();
            }
        }
        d
    }

    #[test]
    fn normalization_table() {
        let s = ParityIndex::strong;
        let w = ParityIndex::weak;
        assert_eq!(nd_normalize(s(0, 0)), ForAllPhi);
        assert_eq!(nd_normalize(w(0, 0)), ForAllPhi);
        assert_eq!(nd_normalize(s(1, 1)), ForAllNotPhi);
        assert_eq!(nd_normalize(w(3, 3)), ForAllNotPhi);
        assert_eq!(nd_normalize(s(1, 2)), AlwaysTrue);
        assert_eq!(nd_normalize(s(0, 2)), AlwaysTrue);
        assert_eq!(nd_normalize(s(3, 6)), AlwaysTrue);
        assert_eq!(nd_normalize(s(0, 1)), ReduceToDt(s(0, 1)));
        assert_eq!(nd_normalize(s(2, 3)), ReduceToDt(s(0, 1)));
        assert_eq!(nd_normalize(w(0, 1)), ReduceToDt(w(0, 1)));
        assert_eq!(nd_normalize(w(1, 2)), ReduceToDt(w(1, 2)));
        assert_eq!(nd_normalize(w(0, 2)), ReduceToDt(w(0, 2)));
        assert_eq!(nd_normalize(w(1, 3)), ReduceToDt(s(0, 1)));
        assert_eq!(nd_normalize(w(0, 4)), ReduceToDt(s(0, 1)));
    }

    #[test]
    fn phi_c_is_pointwise_xnor() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let d = random_wx(&mut rng, 2, 2);
        for c in [ParityIndex::strong(1, 2), ParityIndex::weak(0, 1)] {
            let p = phi_c_automaton(&d, c).unwrap();
            let al = d.alphabet();
            for _ in 0..200 {
                let mut up = |k: usize| {
                    let pre = (0..rng.gen_range(0..3)).map(|_| rng.gen_range(0..k)).collect();
                    let per = (0..rng.gen_range(1..4)).map(|_| rng.gen_range(0..k)).collect();
                    UpWord::new(pre, per).unwrap()
                };
                let (w, x, k) = (up(2), up(2), up(c.size()));
                let prios: UpWord<Priority> = k.map(|&i| c.lo + i as Priority);
                let expect = index_language_member(&c, &prios) == d.accepts(&al.tuple_word(&[&w, &x]));
                assert_eq!(p.accepts(&p.alphabet().tuple_word(&[&w, &x, &k])), expect);
            }
        }
    }

    #[test]
    fn known_indices_of_a_languages() {
        let dt = AutomatonKind::Deterministic;
        let nd = AutomatonKind::Nondeterministic;
        let inf = a_language(true);
        let fin = a_language(false);
        assert!(decide_index_parameterless(&inf, ParityIndex::strong(1, 2), dt).unwrap());
        assert!(!decide_index_parameterless(&inf, ParityIndex::strong(0, 1), dt).unwrap());
        assert!(decide_index_parameterless(&fin, ParityIndex::strong(0, 1), dt).unwrap());
        assert!(!decide_index_parameterless(&fin, ParityIndex::strong(1, 2), dt).unwrap());
        assert!(decide_index_parameterless(&fin, ParityIndex::strong(1, 2), nd).unwrap());
        assert!(decide_index_parameterless(&inf, ParityIndex::strong(3, 4), nd).unwrap());
        assert!(!decide_index_parameterless(&inf, ParityIndex::weak(1, 2), dt).unwrap());
    }

    #[test]
    fn index_elimination_agrees_with_games() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for c in [ParityIndex::strong(0, 1), ParityIndex::strong(1, 2), ParityIndex::weak(0, 1)] {
            let d = random_wx(&mut rng, 1, 2);
            let e = eliminate_index_quantifier(&d, c, AutomatonKind::Deterministic).unwrap();
            let g = phi_c_automaton(&d, c).unwrap();
            for w in enumerate_up_words(2, 3) {
                assert_eq!(e.accepts(&w), decide_game_quantifier_up(&w, &g).unwrap().player_ii_wins, "{c} {w}");
            }
        }
    }

    #[test]
    fn empty_index_means_no_solution() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..4 {
            let d = random_wx(&mut rng, 2, 2);
            let e = eliminate_index_quantifier(&d, ParityIndex::weak(1, 1), AutomatonKind::Nondeterministic).unwrap();
            let all = eliminate_index_quantifier(&d, ParityIndex::strong(0, 0), AutomatonKind::Nondeterministic).unwrap();
            let al = d.alphabet();
            for w in enumerate_up_words(2, 3) {
                let pin = singleton_automaton(al.factor(0), &w).cylinder(al, &[0]).unwrap();
                let some = combine_dpas(&[pin.clone(), d.clone()], &BoolFn::and(2)).unwrap();
                let none = combine_dpas(&[pin, complement_dpa(&d).unwrap()], &BoolFn::and(2)).unwrap();
                assert_eq!(e.accepts(&w), emptiness(&some).is_none(), "{w}");
                assert_eq!(all.accepts(&w), emptiness(&none).is_none(), "{w}");
            }
        }
    }
}
