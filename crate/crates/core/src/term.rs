//! The term language: constants, atoms, variables, and conditional
//! composition `l <| c |> r` (if `c` then `l` else `r`), together with the
//! derived connectives and the termination norm used by the rewriter.
//!
//! Atoms are lowercase identifiers, variables start with an uppercase
//! letter, so the two namespaces are disjoint by construction. Derived
//! syntactic equality (`==`) is node-by-node structural equality.

use std::collections::BTreeSet;
use std::collections::HashMap;

use crate::error::{Error, Result};

/// A term over the conditional-composition signature.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    True,
    False,
    Atom(String),
    Var(String),
    /// `Cond(l, c, r)` is `l <| c |> r`: evaluate `c` first, then `l` or `r`.
    Cond(Box<Term>, Box<Term>, Box<Term>),
}

impl Term {
    pub fn atom(name: impl Into<String>) -> Term {
        Term::Atom(name.into())
    }

    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn cond(left: Term, ante: Term, right: Term) -> Term {
        Term::Cond(Box::new(left), Box::new(ante), Box::new(right))
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Cond(l, c, r) => 1 + l.size() + c.size() + r.size(),
            _ => 1,
        }
    }

    /// Number of atom occurrences, with multiplicity. Evaluating the term
    /// consults a valuation at most this many times.
    pub fn atom_occurrences(&self) -> usize {
        match self {
            Term::Atom(_) => 1,
            Term::Cond(l, c, r) => {
                l.atom_occurrences() + c.atom_occurrences() + r.atom_occurrences()
            }
            _ => 0,
        }
    }

    pub fn is_closed(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Cond(l, c, r) => l.is_closed() && c.is_closed() && r.is_closed(),
            _ => true,
        }
    }

    /// Returns `Err(OpenTerm)` naming the first variable, if any.
    pub fn require_closed(&self) -> Result<()> {
        match self {
            Term::Var(v) => Err(Error::OpenTerm(v.clone())),
            Term::Cond(l, c, r) => {
                l.require_closed()?;
                c.require_closed()?;
                r.require_closed()
            }
            _ => Ok(()),
        }
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Atom(a) => {
                out.insert(a.clone());
            }
            Term::Cond(l, c, r) => {
                l.collect_atoms(out);
                c.collect_atoms(out);
                r.collect_atoms(out);
            }
            _ => {}
        }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Cond(l, c, r) => {
                l.collect_vars(out);
                c.collect_vars(out);
                r.collect_vars(out);
            }
            _ => {}
        }
    }

    /// Capture-free substitution of variables (there are no binders).
    pub fn substitute(&self, map: &HashMap<String, Term>) -> Term {
        match self {
            Term::Var(v) => map.get(v).cloned().unwrap_or_else(|| self.clone()),
            Term::Cond(l, c, r) => {
                Term::cond(l.substitute(map), c.substitute(map), r.substitute(map))
            }
            _ => self.clone(),
        }
    }
}

/// `~x`, defined as `F <| x |> T`.
pub fn negate(t: Term) -> Term {
    Term::cond(Term::False, t, Term::True)
}

/// Sequential composition `x ; y`, defined as `y <| x |> y`: evaluate `x`
/// for its effect on the valuation, then produce `y`.
pub fn seq_compose(x: Term, y: Term) -> Term {
    Term::cond(y.clone(), x, y)
}

/// The eight directed binary connectives. `Left` variants evaluate their
/// left argument first, `Right` variants the right one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Connective {
    LeftAnd,
    RightAnd,
    LeftOr,
    RightOr,
    LeftImp,
    RightImp,
    LeftBiimp,
    RightBiimp,
}

/// Expands a connective to its defining conditional-composition term.
pub fn apply_connective(c: Connective, x: Term, y: Term) -> Term {
    use Connective::*;
    match c {
        LeftAnd => Term::cond(y, x, Term::False),
        RightAnd => Term::cond(x, y, Term::False),
        LeftOr => Term::cond(Term::True, x, y),
        RightOr => Term::cond(Term::True, y, x),
        LeftImp => Term::cond(y, x, Term::True),
        RightImp => {
            let nx = negate(x);
            Term::cond(Term::True, y, nx)
        }
        LeftBiimp => {
            let ny = negate(y.clone());
            Term::cond(y, x, ny)
        }
        RightBiimp => {
            let nx = negate(x.clone());
            Term::cond(x, y, nx)
        }
    }
}

/// Termination norm: leaves weigh 1 and `|l <| c |> r| = 2|c| + max(|l|,|r|)`.
/// Every rewrite step of the normalizer strictly decreases it.
pub fn norm(t: &Term) -> u128 {
    match t {
        Term::Cond(l, c, r) => 2 * norm(c) + norm(l).max(norm(r)),
        _ => 1,
    }
}

fn is_lower_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

/// The ordered, finite, non-empty set of atomic propositions. The order
/// fixes the enumeration `a_1, ..., a_n` that static basic forms and the
/// integer-carrier interpretations rely on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
}

impl Alphabet {
    pub fn new<I, S>(names: I) -> Result<Alphabet>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::InvalidAlphabet("alphabet must be non-empty".into()));
        }
        let mut seen = BTreeSet::new();
        for n in &names {
            if !is_lower_ident(n) {
                return Err(Error::InvalidAlphabet(format!(
                    "`{n}` is not a lowercase identifier"
                )));
            }
            if !seen.insert(n.clone()) {
                return Err(Error::InvalidAlphabet(format!("duplicate atom `{n}`")));
            }
        }
        Ok(Alphabet { names })
    }

    /// Alphabet of the atoms occurring in `terms`, in first-occurrence
    /// order. Falls back to the single atom `a` when no atom occurs, since
    /// an alphabet must be non-empty.
    pub fn from_terms<'a>(terms: impl IntoIterator<Item = &'a Term>) -> Alphabet {
        let mut names: Vec<String> = Vec::new();
        for t in terms {
            collect_in_order(t, &mut names);
        }
        if names.is_empty() {
            names.push("a".to_string());
        }
        Alphabet { names }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Number of atoms; at least 1 by construction.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.names.iter().any(|n| n == name)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Checks that every atom of `t` is declared, reporting the first
    /// offender otherwise.
    pub fn check_term(&self, t: &Term) -> Result<()> {
        match t {
            Term::Atom(a) => {
                if self.contains(a) {
                    Ok(())
                } else {
                    Err(Error::Alphabet {
                        atom: a.clone(),
                        alphabet: self.names.join(", "),
                    })
                }
            }
            Term::Cond(l, c, r) => {
                self.check_term(l)?;
                self.check_term(c)?;
                self.check_term(r)
            }
            _ => Ok(()),
        }
    }
}

impl std::fmt::Display for Alphabet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.names.join(","))
    }
}

fn collect_in_order(t: &Term, out: &mut Vec<String>) {
    match t {
        Term::Atom(a) => {
            if !out.iter().any(|n| n == a) {
                out.push(a.clone());
            }
        }
        Term::Cond(l, c, r) => {
            collect_in_order(l, out);
            collect_in_order(c, out);
            collect_in_order(r, out);
        }
        _ => {}
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> Term {
        Term::atom("a")
    }
    fn b() -> Term {
        Term::atom("b")
    }

    #[test]
    fn cond_constructs_directly() {
        let t = Term::cond(Term::True, a(), Term::False);
        assert_eq!(
            t,
            Term::Cond(
                Box::new(Term::True),
                Box::new(Term::Atom("a".into())),
                Box::new(Term::False)
            )
        );
    }

    #[test]
    fn negation_expands_to_its_definition() {
        assert_eq!(negate(a()), Term::cond(Term::False, a(), Term::True));
        assert_eq!(
            negate(Term::True),
            Term::cond(Term::False, Term::True, Term::True)
        );
    }

    #[test]
    fn seq_compose_expands_to_its_definition() {
        assert_eq!(
            seq_compose(a(), Term::True),
            Term::cond(Term::True, a(), Term::True)
        );
        assert_eq!(seq_compose(Term::True, a()), Term::cond(a(), Term::True, a()));
    }

    #[test]
    fn connective_table() {
        let x = Term::var("X");
        let y = Term::var("Y");
        assert_eq!(
            apply_connective(Connective::LeftOr, x.clone(), y.clone()),
            Term::cond(Term::True, x.clone(), y.clone())
        );
        assert_eq!(
            apply_connective(Connective::RightAnd, x.clone(), y.clone()),
            Term::cond(x.clone(), y.clone(), Term::False)
        );
        // y <| x |> ~y
        assert_eq!(
            apply_connective(Connective::LeftBiimp, x.clone(), y.clone()),
            Term::cond(y.clone(), x.clone(), Term::cond(Term::False, y, Term::True))
        );
    }

    #[test]
    fn norm_examples() {
        assert_eq!(norm(&Term::True), 1);
        assert_eq!(norm(&Term::cond(a(), b(), Term::atom("c"))), 3);
        // Distributing a compound antecedent strictly decreases the norm.
        let inner = Term::cond(Term::True, a(), Term::False);
        let before = Term::cond(Term::True, inner, Term::False);
        assert_eq!(norm(&before), 7);
        let after = Term::cond(
            Term::cond(Term::True, Term::True, Term::False),
            a(),
            Term::cond(Term::True, Term::False, Term::False),
        );
        assert_eq!(norm(&after), 5);
    }

    #[test]
    fn traversals() {
        let t = Term::cond(a(), b(), a());
        assert_eq!(
            t.atoms().into_iter().collect::<Vec<_>>(),
            vec!["a".to_string(), "b".to_string()]
        );
        let open = Term::cond(Term::True, Term::var("X"), Term::False);
        assert!(!open.is_closed());
        assert_eq!(open.require_closed(), Err(Error::OpenTerm("X".into())));
        // `a` and its basic form are distinct terms.
        assert_ne!(Term::cond(Term::True, a(), Term::False), a());
    }

    #[test]
    fn alphabet_rules() {
        assert!(Alphabet::new(Vec::<String>::new()).is_err());
        assert!(Alphabet::new(["a", "a"]).is_err());
        assert!(Alphabet::new(["A"]).is_err());
        let al = Alphabet::new(["b", "a"]).unwrap();
        assert_eq!(al.index_of("a"), Some(1));
        let derived = Alphabet::from_terms([&Term::cond(b(), a(), b())]);
        assert_eq!(derived.names(), &["b".to_string(), "a".to_string()]);
        assert_eq!(Alphabet::from_terms([&Term::True]).names(), &["a".to_string()]);
    }
}
