//! Translations between conditional-composition terms and Boolean algebra,
//! a truth-table evaluator, and the static-variety equality decision built
//! on them.
//!
//! The outbound translation maps `l <| c |> r` to `(!c | l) & (c | r)`;
//! the inbound one maps `!`, `|`, `&` back to conditionals. Both round-trip
//! up to provable equality on their side, which makes the truth-table check
//! a decision procedure for static equality of arbitrary (open) terms.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::term::Term;

/// Boolean-algebra terms over the same atom/variable namespaces as [`Term`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BATerm {
    True,
    False,
    Atom(String),
    Var(String),
    Not(Box<BATerm>),
    And(Box<BATerm>, Box<BATerm>),
    Or(Box<BATerm>, Box<BATerm>),
}

impl BATerm {
    pub fn atom(name: impl Into<String>) -> BATerm {
        BATerm::Atom(name.into())
    }

    pub fn var(name: impl Into<String>) -> BATerm {
        BATerm::Var(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(x: BATerm) -> BATerm {
        BATerm::Not(Box::new(x))
    }

    pub fn and(l: BATerm, r: BATerm) -> BATerm {
        BATerm::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: BATerm, r: BATerm) -> BATerm {
        BATerm::Or(Box::new(l), Box::new(r))
    }

    /// Atoms and variables, merged into one symbol pool.
    pub fn symbols(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols(&self, out: &mut BTreeSet<String>) {
        match self {
            BATerm::True | BATerm::False => {}
            BATerm::Atom(s) | BATerm::Var(s) => {
                out.insert(s.clone());
            }
            BATerm::Not(x) => x.collect_symbols(out),
            BATerm::And(l, r) | BATerm::Or(l, r) => {
                l.collect_symbols(out);
                r.collect_symbols(out);
            }
        }
    }
}

/// A truth-table row: total map from symbols to truth values.
pub type Assignment = BTreeMap<String, bool>;

/// Translates a term into Boolean algebra, clause by clause.
pub fn to_ba(t: &Term) -> BATerm {
    match t {
        Term::True => BATerm::True,
        Term::False => BATerm::False,
        Term::Atom(a) => BATerm::Atom(a.clone()),
        Term::Var(v) => BATerm::Var(v.clone()),
        Term::Cond(l, c, r) => {
            let c1 = to_ba(c);
            BATerm::and(
                BATerm::or(BATerm::not(c1.clone()), to_ba(l)),
                BATerm::or(c1, to_ba(r)),
            )
        }
    }
}

/// Translates a Boolean-algebra term back into conditionals.
pub fn from_ba(t: &BATerm) -> Term {
    match t {
        BATerm::True => Term::True,
        BATerm::False => Term::False,
        BATerm::Atom(a) => Term::Atom(a.clone()),
        BATerm::Var(v) => Term::Var(v.clone()),
        BATerm::Not(x) => Term::cond(Term::False, from_ba(x), Term::True),
        BATerm::Or(l, r) => Term::cond(Term::True, from_ba(l), from_ba(r)),
        BATerm::And(l, r) => Term::cond(from_ba(r), from_ba(l), Term::False),
    }
}

/// Classical evaluation. The assignment must cover every symbol of `t`.
pub fn ba_eval(t: &BATerm, rho: &Assignment) -> bool {
    match t {
        BATerm::True => true,
        BATerm::False => false,
        BATerm::Atom(s) | BATerm::Var(s) => *rho
            .get(s)
            .unwrap_or_else(|| panic!("assignment is missing symbol `{s}`")),
        BATerm::Not(x) => !ba_eval(x, rho),
        BATerm::And(l, r) => ba_eval(l, rho) && ba_eval(r, rho),
        BATerm::Or(l, r) => ba_eval(l, rho) || ba_eval(r, rho),
    }
}

const TRUTH_TABLE_SYMBOL_LIMIT: usize = 20;

/// Truth-table equality over the union of both terms' symbols.
pub fn ba_equal(s: &BATerm, t: &BATerm) -> Result<bool> {
    let mut symbols = s.symbols();
    symbols.extend(t.symbols());
    let symbols: Vec<String> = symbols.into_iter().collect();
    if symbols.len() > TRUTH_TABLE_SYMBOL_LIMIT {
        return Err(Error::SizeGuard(format!(
            "truth table over {} symbols (limit {})",
            symbols.len(),
            TRUTH_TABLE_SYMBOL_LIMIT
        )));
    }
    for bits in 0u64..(1u64 << symbols.len()) {
        let rho: Assignment = symbols
            .iter()
            .enumerate()
            .map(|(i, sym)| (sym.clone(), bits >> i & 1 == 1))
            .collect();
        if ba_eval(s, &rho) != ba_eval(t, &rho) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Decides static-variety equality of two terms, open terms included:
/// variables are treated as Boolean unknowns.
pub fn decide_st_via_ba(p: &Term, q: &Term) -> Result<bool> {
    ba_equal(&to_ba(p), &to_ba(q))
}
