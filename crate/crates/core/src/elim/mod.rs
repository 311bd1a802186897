//! Symbolic elimination of game and index quantifiers.

pub mod game;
pub mod index;

pub use game::{
    eliminate_game_quantifier, eliminate_game_quantifier_with, refutation_validity_automaton, strategy_validity_automaton,
    EliminationRoute, StrategyAlphabet,
};
pub use index::{
    decide_index_parameterless, eliminate_index_quantifier, eliminate_index_quantifier_with, nd_normalize, phi_c_automaton, universal_automaton,
    AutomatonKind, NormalizationOutcome,
};
