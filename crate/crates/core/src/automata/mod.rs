//! Alphabets, ultimately periodic words, parity automata and transducers.

pub mod alphabet;
pub mod automaton;
pub mod combine;
pub mod determinize;
pub mod emptiness;
pub(crate) mod graph;
pub mod index;
pub mod reduce;
pub mod transducer;
pub mod word;

pub use alphabet::{Alphabet, Symbol};
pub use automaton::{
    complement_dpa, dpa_accepts, index_condition_automaton, index_language_member, npa_accepts, project,
    up_normalize, State, WordAutomaton,
};
pub use combine::{combine_dpas, combine_dpas_with, BoolFn, CombineMethod};
pub use determinize::{determinize, determinize_with_limit};
pub use emptiness::{emptiness, equivalent, included};
pub use index::{IndexKind, ParityIndex, Priority};
pub use reduce::reduce;
pub use transducer::{transducer_apply, transducer_compose, LetterTransducer, Transducer};
pub use word::{enumerate_up_words, UpWord};
