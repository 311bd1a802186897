use crate::automata::determinize::STATE_LIMIT;
use crate::automata::{complement_dpa, determinize_with_limit, reduce, Alphabet, ParityIndex, Symbol, WordAutomaton};
use crate::error::{Error, Result};

/// Largest strategy alphabet that is built explicitly.
pub const MAX_STRATEGY_LETTERS: usize = 1 << 14;

/// The letters `σ : Q × A_X → A_Y` of a positional strategy for a
/// deterministic automaton over `A_W × A_X × A_Y`. Entry `q * |A_X| + x` of
/// a decoded letter is the answer to `x` in state `q`; the first entry is the
/// most significant digit of the letter's index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrategyAlphabet {
    pub states: usize,
    pub xs: usize,
    pub ys: usize,
    len: usize,
}

impl StrategyAlphabet {
    pub fn new(states: usize, xs: usize, ys: usize) -> Result<Self> {
        let digits = u32::try_from(states * xs).map_err(|_| Error::TooLarge("strategy alphabet".into()))?;
        let len = ys
            .checked_pow(digits)
            .filter(|&n| n <= MAX_STRATEGY_LETTERS)
            .ok_or_else(|| Error::TooLarge(format!("{ys}^{digits} strategy letters")))?;
        Ok(StrategyAlphabet { states, xs, ys, len })
    }

    pub fn for_automaton(d: &WordAutomaton) -> Result<Self> {
        let al = d.alphabet();
        if al.arity() != 3 {
            return Err(Error::mismatch("expected an automaton over W × X × Y"));
        }
        StrategyAlphabet::new(d.num_states(), al.factor(1).len(), al.factor(2).len())
    }

/// Strategy letters for Player I: tables `Q → A_X`, read as strategy
    /// letters with a single input.
    pub fn refutations(states: usize, xs: usize) -> Result<Self> {
        StrategyAlphabet::new(states, 1, xs)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn decode(&self, s: Symbol) -> Vec<Symbol> {
        let m = self.states * self.xs;
        let mut out = vec![0; m];
        let mut r = s;
        for i in (0..m).rev() {
            out[i] = r % self.ys;
            r /= self.ys;
        }
        out
    }

    pub fn encode(&self, table: &[Symbol]) -> Symbol {
        table.iter().fold(0, |acc, &y| acc * self.ys + y)
    }

    /// Letters named by their tables of answer names.
    pub fn alphabet(&self, y: &Alphabet) -> Alphabet {
        Alphabet::new((0..self.len).map(|s| {
            let t: Vec<&str> = self.decode(s).iter().map(|&v| y.name(v)).collect();
            format!("<{}>", t.join("."))
        }))
        .unwrap()
    }
}

/// Which player's positional strategies are projected away. Player I's
/// letters are far fewer, and by determinacy the complement of Player I's winning
/// parameters is the answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum EliminationRoute {
    /// Player II's letters `Q × A_X → A_Y`.
    Strategies,
    /// Player I's letters `Q → A_X`; the result is complemented.
    Refutations,
    /// Refutations within a state budget, then strategies.
    #[default]
    Auto,
}

/// Trees the refutation route may build in either determinization before
/// [`EliminationRoute::Auto`] switches to strategies.
pub const REFUTATION_BUDGET: usize = 100_000;

fn checked_input(d: &WordAutomaton) -> Result<WordAutomaton> {
    if !d.is_deterministic() {
        return Err(Error::NotDeterministic);
    }
    if d.alphabet().arity() != 3 {
        return Err(Error::mismatch("expected an automaton over W × X × Y"));
    }
    Ok(reduce(&d.to_strong()))
}

/// Nondeterministic automaton over `A_W × Σ` guessing, for the letter table
/// `σ`, a consistent play. With `player_ii` the letters are Player II's and
/// the guessed plays are those II loses; otherwise they are Player I's and
/// the guessed plays are those II wins.
fn play_automaton(d: &WordAutomaton, sigma: &StrategyAlphabet, al: &Alphabet, player_ii: bool) -> Result<WordAutomaton> {
    let full = d.alphabet();
    let (nw, nx, ny) = (full.factor(0).len(), full.factor(1).len(), full.factor(2).len());
    let idx = d.index();
    let shift = u32::from(player_ii);
    let mut n = WordAutomaton::new(al.clone(), ParityIndex::strong(idx.lo + shift, idx.hi + shift), d.num_states());
    for s in 0..sigma.len() {
        let table = sigma.decode(s);
        for w in 0..nw {
            let letter = al.encode(&[w, s]);
            for q in 0..d.num_states() {
                let moves: Vec<(Symbol, Symbol)> = if player_ii {
                    (0..nx).map(|x| (x, table[q * nx + x])).collect()
                } else {
                    (0..ny).map(|y| (table[q], y)).collect()
                };
                for (x, y) in moves {
                    let (k, to) = d.step(q, full.encode(&[w, x, y]));
                    if !n.succ(q, letter).contains(&(k + shift, to)) {
                        n.add_transition(q, letter, k + shift, to)?;
                    }
                }
            }
        }
    }
    n.set_initial(d.initial().to_vec());
    Ok(n)
}

fn validity(d: &WordAutomaton, player_ii: bool, limit: usize) -> Result<(WordAutomaton, WordAutomaton, StrategyAlphabet)> {
    let d = checked_input(d)?;
    let full = d.alphabet();
    let sigma = if player_ii {
        StrategyAlphabet::for_automaton(&d)?
    } else {
        StrategyAlphabet::refutations(d.num_states(), full.factor(1).len())?
    };
    let names = sigma.alphabet(if player_ii { full.factor(2) } else { full.factor(1) });
    let al = Alphabet::product(&[full.factor(0).clone(), names]);
    let bad = determinize_with_limit(&play_automaton(&d, &sigma, &al, player_ii)?, limit)?;
    Ok((reduce(&complement_dpa(&bad)?), d, sigma))
}

/// Deterministic automaton over `A_W × Σ` accepting `⟨w, σ⟩` iff the
/// position-indexed strategy `σ` wins `G(w, D)` for Player II. States of
/// `D` are numbered as in `reduce(D)`, which is returned alongside.
pub fn strategy_validity_automaton(d: &WordAutomaton) -> Result<(WordAutomaton, WordAutomaton, StrategyAlphabet)> {
    validity(d, true, STATE_LIMIT)
}

/// Deterministic automaton over `A_W × Π` accepting `⟨w, ρ⟩` iff the
/// position-indexed strategy `ρ : Q → A_X` of Player I wins `G(w, D)`
/// against every answer.
pub fn refutation_validity_automaton(d: &WordAutomaton) -> Result<(WordAutomaton, WordAutomaton, StrategyAlphabet)> {
    validity(d, false, STATE_LIMIT)
}

fn eliminate_via(d: &WordAutomaton, player_ii: bool, limit: usize) -> Result<WordAutomaton> {
    let (valid, _, _) = validity(d, player_ii, limit)?;
    let winners = determinize_with_limit(&valid.project(&[0])?, limit)?;
    if player_ii {
        Ok(winners)
    } else {
        Ok(reduce(&complement_dpa(&winners)?))
    }
}

/// Deterministic automaton over `A_W` accepting the parameters `w` on which
/// Player II wins `G(w, D)`.
pub fn eliminate_game_quantifier(d: &WordAutomaton) -> Result<WordAutomaton> {
    eliminate_game_quantifier_with(d, EliminationRoute::Auto, STATE_LIMIT)
}

/// [`eliminate_game_quantifier`] along a chosen route, failing with
/// [`Error::TooLarge`] once a determinization exceeds `limit` states.
pub fn eliminate_game_quantifier_with(d: &WordAutomaton, route: EliminationRoute, limit: usize) -> Result<WordAutomaton> {
    match route {
        EliminationRoute::Strategies => eliminate_via(d, true, limit),
        EliminationRoute::Refutations => eliminate_via(d, false, limit),
        EliminationRoute::Auto => match eliminate_via(d, false, limit.min(REFUTATION_BUDGET)) {
            Err(Error::TooLarge(_)) => eliminate_via(d, true, limit),
            other => other,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{enumerate_up_words, UpWord};
    use crate::games::decide_game_quantifier_up;
    use crate::synthesis::shift_spec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_spec(rng: &mut ChaCha8Rng, states: usize) -> WordAutomaton {
        let b = Alphabet::numeric(2);
        let al = Alphabet::product(&[b.clone(), b.clone(), b]);
        let mut d = WordAutomaton::new(al.clone(), ParityIndex::strong(0, 2), states);
        for q in 0..states {
            for a in 0..al.len() {
                d.add_transition(q, a, rng.gen_range(0..=2), rng.gen_range(0..states)).unwrap();
            }
        }
        d
    }

    #[test]
    fn strategy_letters_round_trip() {
        let s = StrategyAlphabet::new(3, 2, 2).unwrap();
        assert_eq!(s.len(), 64);
        for k in 0..s.len() {
            assert_eq!(s.encode(&s.decode(k)), k);
        }
        assert_eq!(s.decode(1), vec![0, 0, 0, 0, 0, 1]);
        assert!(StrategyAlphabet::new(20, 2, 2).is_err());
    }

    #[test]
    fn shift_spec_is_always_won() {
        let e = eliminate_game_quantifier(&shift_spec()).unwrap();
        for w in enumerate_up_words(2, 4) {
            assert!(e.accepts(&w));
        }
    }

    #[test]
    fn copy_strategy_is_valid() {
        // y_n = x_n
        let b = Alphabet::numeric(2);
        let al = Alphabet::product(&[b.clone(), b.clone(), b]);
        let mut d = WordAutomaton::new(al.clone(), ParityIndex::strong(0, 1), 2);
        for a in 0..al.len() {
            let c = al.decode(a);
            let to = if c[1] == c[2] { 0 } else { 1 };
            d.add_transition(0, a, if to == 0 { 0 } else { 1 }, to).unwrap();
            d.add_transition(1, a, 1, 1).unwrap();
        }
        let (valid, dd, sigma) = strategy_validity_automaton(&d).unwrap();
        let va = valid.alphabet();
        let good: Vec<Symbol> = (0..dd.num_states()).flat_map(|_| [0, 1]).collect();
        let bad: Vec<Symbol> = (0..dd.num_states()).flat_map(|_| [1, 1]).collect();
        for w in [UpWord::periodic(vec![0]).unwrap(), UpWord::periodic(vec![0, 1]).unwrap()] {
            let s_good = UpWord::periodic(vec![sigma.encode(&good)]).unwrap();
            let s_bad = UpWord::periodic(vec![sigma.encode(&bad)]).unwrap();
            assert!(valid.accepts(&va.tuple_word(&[&w, &s_good])));
            assert!(!valid.accepts(&va.tuple_word(&[&w, &s_bad])));
        }
    }

    #[test]
    fn elimination_agrees_with_finite_games() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..6 {
            let states = rng.gen_range(1..=3);
            let d = random_spec(&mut rng, states);
            let e = eliminate_game_quantifier(&d).unwrap();
            for w in enumerate_up_words(2, 4) {
                let v = decide_game_quantifier_up(&w, &d).unwrap();
                assert_eq!(e.accepts(&w), v.player_ii_wins, "{w}");
            }
        }
    }

    #[test]
    fn both_routes_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..4 {
            let d = random_spec(&mut rng, 2);
            let a = eliminate_game_quantifier_with(&d, EliminationRoute::Strategies, STATE_LIMIT).unwrap();
            let b = eliminate_game_quantifier_with(&d, EliminationRoute::Refutations, STATE_LIMIT).unwrap();
            assert!(crate::automata::equivalent(&a, &b).unwrap().0);
        }
    }

    #[test]
    fn refutation_of_unwinnable_copy() {
        // II must predict x_n before seeing it
        let b = Alphabet::numeric(2);
        let al = Alphabet::product(&[b.clone(), b.clone(), b]);
        let mut d = WordAutomaton::new(al.clone(), ParityIndex::strong(0, 1), 3);
        for a in 0..al.len() {
            let c = al.decode(a);
            d.add_transition(0, a, 0, 1 + c[2]).unwrap();
            for e in 0..2 {
                let ok = c[1] == e;
                d.add_transition(1 + e, a, if ok { 0 } else { 1 }, if ok { 1 + c[2] } else { 0 }).unwrap();
            }
        }
        let (valid, dd, rho) = refutation_validity_automaton(&d).unwrap();
        let e = eliminate_game_quantifier(&d).unwrap();
        for w in enumerate_up_words(2, 3) {
            assert!(!e.accepts(&w));
        }
        // some fixed table contradicts every prediction
        let w = UpWord::periodic(vec![0]).unwrap();
        assert!((0..rho.len()).any(|r| {
            let r = UpWord::periodic(vec![r]).unwrap();
            valid.accepts(&valid.alphabet().tuple_word(&[&w, &r]))
        }));
        assert_eq!(rho.len(), 2usize.pow(dd.num_states() as u32));
    }
}
