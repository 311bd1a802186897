//! The game quantifier on a fixed ultimately periodic parameter word, and
//! its parameterless special case.
//!
//! For `w = u v^ω` and a deterministic automaton `D` over `W × X × Y`, the
//! game where Player I picks `x_n`, Player II answers `y_n` and II wins iff
//! `D` accepts `⟨w, x, y⟩` is played on a finite arena whose positions pair a
//! lasso position of `w` with a state of `D`.

use super::game::{GameSolution, ParityGame, Player};
use super::zielonka::zielonka;
use crate::automata::{Alphabet, State, Symbol, Transducer, UpWord, WordAutomaton};
use crate::automata::transducer::LetterTransducer;
use crate::error::{Error, Result};

/// Player II's positional strategy on a lasso game:
/// `(lasso position, state, x) ↦ y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LassoStrategy {
    pub lasso_len: usize,
    pub states: usize,
    pub xs: usize,
    pub table: Vec<Symbol>,
}

impl LassoStrategy {
    pub fn get(&self, n: usize, q: State, x: Symbol) -> Symbol {
        self.table[(n * self.states + q) * self.xs + x]
    }
}

/// Player I's positional strategy on a lasso game: `(lasso position, state) ↦ x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Refutation {
    pub lasso_len: usize,
    pub states: usize,
    pub table: Vec<Symbol>,
}

impl Refutation {
    pub fn get(&self, n: usize, q: State) -> Symbol {
        self.table[n * self.states + q]
    }
}

/// The finite game for a parameter word, with the bookkeeping needed to read
/// strategies back.
pub struct LassoGame {
    pub game: ParityGame,
    pub word: UpWord<Symbol>,
    pub states: usize,
    pub xs: usize,
    pub ys: usize,
    /// The `y` played along each edge leaving a Player II position.
    pub edge_letter: Vec<Option<Symbol>>,
}

impl LassoGame {
    pub fn position_i(&self, n: usize, q: State) -> usize {
        n * self.states + q
    }

    pub fn position_ii(&self, n: usize, q: State, x: Symbol) -> usize {
        self.word.lasso_len() * self.states + (n * self.states + q) * self.xs + x
    }
}

/// Checks that `d` is deterministic over a product with `arity` factors.
fn check_shape(d: &WordAutomaton, arity: usize) -> Result<WordAutomaton> {
    if !d.alphabet().is_product() || d.alphabet().arity() != arity {
        return Err(Error::mismatch(format!("expected an automaton over a product of {arity} alphabets")));
    }
    if !d.is_deterministic() {
        return Err(Error::NotDeterministic);
    }
    Ok(d.to_strong())
}

/// Builds the lasso game of `w` and `d` (deterministic, over `W × X × Y`).
pub fn build_lasso_game(w: &UpWord<Symbol>, d: &WordAutomaton) -> Result<LassoGame> {
    let d = check_shape(d, 3)?;
    let al = d.alphabet();
    let (nw, nx, ny) = (al.factor(0).len(), al.factor(1).len(), al.factor(2).len());
    if w.iter().take(w.lasso_len()).any(|&a| a >= nw) {
        return Err(Error::mismatch("parameter word uses letters outside W"));
    }
    let len = w.lasso_len();
    let nq = d.num_states();
    let low = d.index().lo;
    let mut g = ParityGame::new();
    for n in 0..len {
        for q in 0..nq {
            g.add_position(format!("{n}:{}", d.state_name(q)), Player::I);
        }
    }
    for n in 0..len {
        for q in 0..nq {
            for x in 0..nx {
                g.add_position(format!("{n}:{}:{}", d.state_name(q), al.factor(1).name(x)), Player::II);
            }
        }
    }
    let mut lg = LassoGame { game: ParityGame::new(), word: w.clone(), states: nq, xs: nx, ys: ny, edge_letter: Vec::new() };
    for n in 0..len {
        let a = *w.lasso_letter(n);
        for q in 0..nq {
            let from = lg.position_i(n, q);
            for x in 0..nx {
                g.add_edge(from, low, lg.position_ii(n, q, x))?;
                lg.edge_letter.push(None);
            }
        }
        for q in 0..nq {
            for x in 0..nx {
                let from = lg.position_ii(n, q, x);
                for y in 0..ny {
                    let (k, to) = d.step(q, al.encode(&[a, x, y]));
                    g.add_edge(from, k, lg.position_i(w.next_pos(n), to))?;
                    lg.edge_letter.push(Some(y));
                }
            }
        }
    }
    g.set_initial(lg.position_i(0, d.initial()[0]));
    lg.game = g;
    Ok(lg)
}

/// Outcome of the game quantifier on a fixed parameter word.
#[derive(Clone, Debug)]
pub struct GameVerdict {
    pub player_ii_wins: bool,
    pub strategy: LassoStrategy,
    pub refutation: Refutation,
    pub solution: GameSolution,
}

/// Decides whether Player II wins the game of `d` on the parameter `w`, and
/// returns positional strategies for both players (moves outside a player's
/// winning region default to the first letter).
pub fn decide_game_quantifier_up(w: &UpWord<Symbol>, d: &WordAutomaton) -> Result<GameVerdict> {
    let lg = build_lasso_game(w, d)?;
    let sol = zielonka(&lg.game);
    let len = w.lasso_len();
    let mut strat = vec![0; len * lg.states * lg.xs];
    let mut refute = vec![0; len * lg.states];
    for n in 0..len {
        for q in 0..lg.states {
            let v = lg.position_i(n, q);
            if sol.winner[v] == Player::I {
                if let Some(e) = sol.strategy[v] {
                    let to = lg.game.edge(e).to;
                    refute[n * lg.states + q] = (to - lg.position_ii(n, q, 0)) % lg.xs;
                }
            }
            for x in 0..lg.xs {
                let v = lg.position_ii(n, q, x);
                if sol.winner[v] == Player::II {
                    if let Some(e) = sol.strategy[v] {
                        strat[(n * lg.states + q) * lg.xs + x] = lg.edge_letter[e].unwrap();
                    }
                }
            }
        }
    }
    Ok(GameVerdict {
        player_ii_wins: sol.winner[lg.game.initial()] == Player::II,
        strategy: LassoStrategy { lasso_len: len, states: lg.states, xs: lg.xs, table: strat },
        refutation: Refutation { lasso_len: len, states: lg.states, table: refute },
        solution: sol,
    })
}

/// Result of parameterless synthesis.
#[derive(Clone, Debug)]
pub enum Realizability {
    /// A transducer `X ↠ Y` all of whose runs satisfy the specification.
    Realizable(Box<LetterTransducer>),
    /// Player I's positional strategy `state ↦ x` defeating every transducer.
    Unrealizable(Vec<Symbol>),
}

/// Synthesis for a deterministic automaton over `X × Y`: a transducer whose
/// outputs always satisfy it, or Player I's refutation.
pub fn buchi_landweber(d: &WordAutomaton) -> Result<Realizability> {
    let d = check_shape(d, 2)?;
    let xa = d.alphabet().factor(0).clone();
    let ya = d.alphabet().factor(1).clone();
    let full = Alphabet::product(&[Alphabet::unit(), xa.clone(), ya.clone()]);
    let lifted = d.cylinder(&full, &[1, 2])?;
    let unit = UpWord::periodic(vec![0]).unwrap();
    let verdict = decide_game_quantifier_up(&unit, &lifted)?;
    if !verdict.player_ii_wins {
        return Ok(Realizability::Unrealizable(verdict.refutation.table));
    }
    let strat = verdict.strategy;
    let inputs: Vec<Symbol> = (0..xa.len()).collect();
    let (machine, keys) = Transducer::explore(inputs, d.initial()[0], |&q, &x| {
        let y = strat.get(0, q, x);
        let (_, to) = d.step(q, d.alphabet().encode(&[x, y]));
        Ok((y, to))
    })?;
    let mut t = LetterTransducer::new(xa, ya, machine);
    t.state_names = keys.iter().map(|&q| d.state_name(q).to_string()).collect();
    Ok(Realizability::Realizable(Box::new(t)))
}

/// Runs a transducer `W × X ↠ Y` (or `X ↠ Y` when `d` is over `X × Y`)
/// against `x` and reports its output and whether `d` accepts the result.
pub fn simulate(
    d: &WordAutomaton,
    w: Option<&UpWord<Symbol>>,
    tau: &LetterTransducer,
    x: &UpWord<Symbol>,
) -> Result<(UpWord<Symbol>, bool)> {
    let al = d.alphabet();
    let input = match w {
        Some(w) => tau.input.tuple_word(&[w, x]),
        None => x.clone(),
    };
    let y = tau.apply(&input)?;
    let word = match w {
        Some(w) => al.tuple_word(&[w, x, &y]),
        None => al.tuple_word(&[x, &y]),
    };
    Ok((y, d.accepts(&word)))
}
