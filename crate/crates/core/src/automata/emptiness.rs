use super::alphabet::Symbol;
use super::automaton::WordAutomaton;
use super::combine::{combine_dpas, BoolFn};
use super::determinize::determinize;
use super::word::UpWord;
use crate::error::{Error, Result};

/// A word accepted by `a`, or `None` if its language is empty.
pub fn emptiness(a: &WordAutomaton) -> Option<UpWord<Symbol>> {
    let a = a.to_strong();
    let trans: Vec<_> = a.transitions().collect();
    let g = a.graph();
    let lasso = g.accepting_lasso(a.initial())?;
    let letters = |ids: &[usize]| ids.iter().map(|&e| trans[e].1).collect::<Vec<Symbol>>();
    Some(UpWord::new(letters(&lasso.stem), letters(&lasso.cycle)).unwrap())
}

/// Language equivalence with a distinguishing word when the answer is no.
pub fn equivalent(a: &WordAutomaton, b: &WordAutomaton) -> Result<(bool, Option<UpWord<Symbol>>)> {
    if a.alphabet() != b.alphabet() {
        return Err(Error::mismatch("automata over different alphabets"));
    }
    let da = determinize(a)?;
    let db = determinize(b)?;
    let diff = combine_dpas(&[da, db], &BoolFn::xor())?;
    Ok(match emptiness(&diff) {
        None => (true, None),
        Some(w) => (false, Some(w)),
    })
}

/// Whether `L(a) ⊆ L(b)`, with a word of `L(a) \ L(b)` otherwise.
pub fn included(a: &WordAutomaton, b: &WordAutomaton) -> Result<(bool, Option<UpWord<Symbol>>)> {
    if a.alphabet() != b.alphabet() {
        return Err(Error::mismatch("automata over different alphabets"));
    }
    let da = determinize(a)?;
    let db = determinize(b)?;
    let f = BoolFn::new(2, |v| v[0] && !v[1]);
    let diff = combine_dpas(&[da, db], &f)?;
    Ok(match emptiness(&diff) {
        None => (true, None),
        Some(w) => (false, Some(w)),
    })
}
