use super::lookahead::{compose_with_state_tracking, lookahead_strategy_transducer, LookaheadLetter};
use super::stages::{elim_neutral_transducer, monoid_to_letter_transducer, Representatives, SafetyDelayed};
use crate::automata::{
    combine_dpas, reduce, Alphabet, BoolFn, LetterTransducer, ParityIndex, Priority, Symbol, Transducer, UpWord,
    WordAutomaton,
};
use crate::error::{Error, Result};
use crate::games::{decide_game_quantifier_up, GameVerdict, Refutation};
use crate::wilke::{algebra_from_dpas, lasso_algebra, ramsey_constant, split_schedule, Homomorphism, SplitSchedule};

/// A specification `f(ψ_1(W,X), …, ψ_m(W,X), γ_1(Y), …, γ_k(Y))` where `Y`
/// occurs only in the `γ`s.
#[derive(Clone, Debug)]
pub struct SeparatelyDependentSpec {
    pub f: BoolFn,
    pub psis: Vec<WordAutomaton>,
    pub gammas: Vec<WordAutomaton>,
    /// Deterministic automaton over `W × X × Y` for the whole formula.
    pub d: WordAutomaton,
    /// Homomorphism recognizing the `γ`s.
    pub beta: Homomorphism,
}

impl SeparatelyDependentSpec {
    /// `f` takes the `ψ` verdicts first, then the `γ` verdicts.
    pub fn new(f: BoolFn, psis: Vec<WordAutomaton>, gammas: Vec<WordAutomaton>) -> Result<Self> {
        if f.arity() != psis.len() + gammas.len() {
            return Err(Error::invalid("boolean function arity does not match the components"));
        }
        let first_psi = psis.first().ok_or_else(|| Error::invalid("at least one ψ is required"))?;
        let first_gamma = gammas.first().ok_or_else(|| Error::invalid("at least one γ is required"))?;
        let wx = first_psi.alphabet().clone();
        if wx.arity() != 2 {
            return Err(Error::mismatch("ψ automata must read W × X"));
        }
        let y = first_gamma.alphabet().clone();
        let full = Alphabet::product(&[wx.factor(0).clone(), wx.factor(1).clone(), y]);
        let mut parts = Vec::new();
        for p in &psis {
            parts.push(p.cylinder(&full, &[0, 1])?);
        }
        for g in &gammas {
            parts.push(g.cylinder(&full, &[2])?);
        }
        let d = reduce(&combine_dpas(&parts, &f)?);
        let beta = algebra_from_dpas(&gammas)?;
        Ok(SeparatelyDependentSpec { f, psis, gammas, d, beta })
    }

    pub fn w_alphabet(&self) -> &Alphabet {
        self.d.alphabet().factor(0)
    }

    pub fn x_alphabet(&self) -> &Alphabet {
        self.d.alphabet().factor(1)
    }

    pub fn y_alphabet(&self) -> &Alphabet {
        self.d.alphabet().factor(2)
    }

    /// Evaluates the formula componentwise (independently of `d`).
    pub fn holds(&self, w: &UpWord<Symbol>, x: &UpWord<Symbol>, y: &UpWord<Symbol>) -> bool {
        let wx = self.psis[0].alphabet().tuple_word(&[w, x]);
        let mut bits: Vec<bool> = self.psis.iter().map(|p| p.accepts(&wx)).collect();
        bits.extend(self.gammas.iter().map(|g| g.accepts(y)));
        self.f.eval(&bits)
    }
}

/// The stages of a successful synthesis run.
#[derive(Clone, Debug)]
pub struct Synthesized {
    pub transducer: LetterTransducer,
    pub verdict: GameVerdict,
    pub alpha: Homomorphism,
    pub r: usize,
    pub schedule: SplitSchedule,
    /// Number of states of the strategy, delayed, neutral-free and letter stages.
    pub stage_sizes: [usize; 4],
}

#[derive(Clone, Debug)]
pub enum SynthesisOutcome {
    Realized(Box<Synthesized>),
    /// Player I wins the game on this parameter, with this positional strategy.
    Unrealizable(Refutation),
}

/// The strategy transducer `W × X ↠ (S_ω → T₊)` for a fixed parameter,
/// with the lookahead homomorphism it expects.
pub fn strategy_transducer(
    spec: &SeparatelyDependentSpec,
    w: &UpWord<Symbol>,
    verdict: &GameVerdict,
) -> Result<(Transducer<Symbol, LookaheadLetter<usize>>, Homomorphism)> {
    let alpha = lasso_algebra(spec.w_alphabet(), w);
    let theta = lookahead_strategy_transducer(w, verdict, &alpha)?;
    let tau_y = compose_with_state_tracking(&theta, &spec.d, &alpha)?;
    let tau_t = tau_y.map_outputs(|f| f.iter().map(|&y| spec.beta.letters[y]).collect::<Vec<usize>>());
    Ok((tau_t, alpha))
}

/// A transducer `W × X ↠ Y` that wins the game of `spec` on the parameter
/// `w` against every `x`, or Player I's refutation.
pub fn synthesize_winning_transducer(spec: &SeparatelyDependentSpec, w: &UpWord<Symbol>) -> Result<SynthesisOutcome> {
    let verdict = decide_game_quantifier_up(w, &spec.d)?;
    if !verdict.player_ii_wins {
        return Ok(SynthesisOutcome::Unrealizable(verdict.refutation));
    }
    let (tau_t, alpha) = strategy_transducer(spec, w, &verdict)?;
    let t = &spec.beta.algebra;
    let r = ramsey_constant(t);
    let schedule = split_schedule(&alpha, w, r);
    let input = spec.d.alphabet().sub_alphabet(&[0, 1]);
    let delayed = SafetyDelayed::new(&tau_t, &alpha, t, w, schedule, input.clone()).build()?;
    let neutral = elim_neutral_transducer(t)?;
    let letters = monoid_to_letter_transducer(&Representatives::of(&spec.beta)?, t)?;
    let stage_sizes = [tau_t.num_states(), delayed.num_states(), neutral.num_states(), letters.num_states()];
    let composed = crate::automata::transducer_compose(&crate::automata::transducer_compose(&delayed, &neutral)?, &letters)?;
    let transducer = LetterTransducer::new(input, spec.y_alphabet().clone(), composed);
    Ok(SynthesisOutcome::Realized(Box::new(Synthesized { transducer, verdict, alpha, r, schedule, stage_sizes })))
}

/// Reads a transducer `A ↠ {lo, …, hi}` (output letters named by their
/// priority) as a deterministic automaton of the given index.
pub fn transducer_to_automaton(t: &LetterTransducer, index: ParityIndex) -> Result<WordAutomaton> {
    let prio: Vec<Priority> = t
        .output
        .names()
        .iter()
        .map(|n| n.parse::<Priority>().map_err(|_| Error::invalid(format!("output letter {n} is not a priority"))))
        .collect::<Result<_>>()?;
    if prio.iter().any(|&k| !index.contains(k)) {
        return Err(Error::invalid("output letters outside the index"));
    }
    let mut a = WordAutomaton::new(t.input.clone(), index, t.machine.num_states());
    for (s, i, &o, to) in t.machine.transitions() {
        a.add_transition(s, t.machine.inputs()[i], prio[o], to)?;
    }
    a.set_initial(vec![t.machine.initial()]);
    Ok(a)
}

/// The shift specification `y_n = w_{n+1}` over bits, ignoring `X`.
pub fn shift_spec() -> WordAutomaton {
    let b = Alphabet::numeric(2);
    let al = Alphabet::product(&[b.clone(), b.clone(), b]);
    // 0 start, 1 + e expects w = e next, 3 failed
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

/// The finite word `0¹ 1 0² 1 ⋯ 0^m 1`.
pub fn staircase_prefix(m: usize) -> Vec<Symbol> {
    (1..=m).flat_map(|k| std::iter::repeat_n(0, k).chain([1])).collect()
}

/// For a transducer `τ : W ↠ Y` (`X` ignored) with `n` states, the first
/// position of the staircase word `0¹10²1⋯0^{n+1}1` where the shift
/// specification is violated, i.e. `y_i ≠ w_{i+1}`. Every such transducer
/// fails: on the block `0^{n+1}` its state repeats before the block ends,
/// so it cannot tell the last `0` of the block from an earlier one.
pub fn shift_counterexample(step: impl Fn(usize, Symbol) -> (Symbol, usize), initial: usize, n: usize) -> Option<usize> {
    let w = staircase_prefix(n + 1);
    let mut q = initial;
    for i in 0..w.len() - 1 {
        let (y, q2) = step(q, w[i]);
        if y != w[i + 1] {
            return Some(i);
        }
        q = q2;
    }
    None
}
