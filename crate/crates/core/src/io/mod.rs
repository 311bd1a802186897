//! Text documents and Graphviz export.

pub mod dot;
mod lexer;
pub mod text;

pub use dot::{automaton_dot, game_dot, transducer_dot};
pub use text::{
    parse_algebra, parse_alphabet, parse_automaton, parse_document, parse_game, parse_homomorphism, parse_index_literal,
    parse_transducer, parse_upword, print_algebra, print_alphabet, print_automaton, print_document, print_game,
    print_homomorphism, print_index_literal, print_transducer, print_upword, Document, Verdict,
};

/// Version tag written in every document header.
pub const FORMAT_VERSION: &str = "v1";
