//! Finite-memory winning transducers for games on ultimately periodic
//! parameters, via lookahead strategies and delayed outputs.

pub mod lookahead;
pub mod pipeline;
pub mod stages;

pub use lookahead::{
    apply_lookahead, compose_with_state_tracking, lookahead_strategy_transducer, uniformised_lookahead_transducer,
    unmarked, LookaheadLetter, StrategyLetter,
};
pub use pipeline::{
    shift_counterexample, shift_spec, staircase_prefix, strategy_transducer, synthesize_winning_transducer,
    transducer_to_automaton, SeparatelyDependentSpec, SynthesisOutcome, Synthesized,
};
pub use stages::{
    e_splittable_classes, elim_neutral_transducer, is_e_splittable, monoid_to_letter_transducer,
    safety_delayed_transducer, trace_safety_delayed, ClosedSector, DelayedState, OpenSector, Representatives,
    SafetyDelayed, TraceLine,
};
