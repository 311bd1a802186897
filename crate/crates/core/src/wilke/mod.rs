//! Finite Wilke algebras and homomorphisms recognizing ω-regular languages.

pub mod algebra;
pub mod hom;

pub use algebra::{
    check_wilke_axioms, has_idempotent_infix, idempotent_power, ramsey_bound, ramsey_constant, AxiomReport,
    WilkeAlgebra,
};
pub use hom::{
    algebra_from_dpas, lasso_algebra, saturated_product, singleton_automaton, split_schedule, Homomorphism,
    SplitSchedule,
};
