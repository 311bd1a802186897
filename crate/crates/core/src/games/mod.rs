//! Finite parity games and the games played on ultimately periodic parameters.

pub mod game;
pub mod lasso;
pub mod zielonka;

pub use game::{check_solution, verify_strategy, Edge, GameSolution, ParityGame, Player};
pub use lasso::{
    build_lasso_game, buchi_landweber, decide_game_quantifier_up, simulate, GameVerdict, LassoGame, LassoStrategy,
    Realizability, Refutation,
};
pub use zielonka::zielonka;
