//! Parity automata on ω-words, parity games, Wilke algebras, and the
//! elimination and uniformisation of game and index quantifiers.

pub mod automata;
pub mod elim;
pub mod error;
pub mod games;
pub mod io;
pub mod synthesis;
pub mod wilke;

pub use error::{Error, Result};
