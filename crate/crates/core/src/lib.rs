//! A toolkit for sequential propositional logic with reactive valuations.
//!
//! Propositions are built from constants, atoms, variables, and a single
//! ternary connective, conditional composition: `l <| c |> r` evaluates
//! `c` first and then one of `l` or `r`. Because evaluation has an order,
//! an atom's truth value may depend on which atoms were evaluated before
//! it; families of such valuations (free, repetition-proof, contractive,
//! static, and a few countermodel classes) induce different equalities on
//! terms.
//!
//! The crate provides:
//!
//! * the term language, parser, and printer ([`term`], [`syntax`]);
//! * a convergent rewriting system deciding the base equational theory
//!   ([`rewrite`]);
//! * per-variety canonical forms and decision procedures ([`forms`]);
//! * executable valuation semantics with an exact congruence oracle and an
//!   axiom-soundness checker ([`semantics`]);
//! * the translation to and from Boolean algebra that captures the static
//!   variety ([`ba`]);
//! * finite countermodels establishing the independence of every axiom
//!   whose status is settled ([`independence`]).

pub mod axioms;
pub mod ba;
pub mod error;
pub mod forms;
pub mod gen;
pub mod independence;
pub mod rewrite;
pub mod semantics;
pub mod syntax;
pub mod term;

pub use error::{Error, Result, SourceSpan};
pub use term::{Alphabet, Term};
