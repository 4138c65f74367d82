//! Canonical forms for closed terms under the four valuation varieties and
//! the syntactic equality decisions they yield.
//!
//! A basic form is a closed term whose every antecedent is a single atom
//! and whose leaves are constants. Each variety refines this shape:
//!
//! * free (`fr`): any atom-antecedent tree;
//! * repetition-proof (`rp`): where a child of an `a`-node itself starts
//!   with `a`, its two children must coincide;
//! * contractive (`cr`): no child of an `a`-node starts with `a`;
//! * static (`st`): the full binary tree querying `a_1, ..., a_n` level by
//!   level, with `2^n` constant leaves.
//!
//! Every closed term reduces to a canonical representative of each shape,
//! and two closed terms are congruent in a variety exactly when their
//! representatives are syntactically equal (for `rp`/`cr` this needs at
//! least two atoms; with a single atom both collapse to the static case).

use std::fmt;

use crate::error::{Error, Result};
use crate::rewrite::prove_equal_cp;
use crate::term::{Alphabet, Term};

/// The four axiomatized valuation varieties.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variety {
    Fr,
    Rp,
    Cr,
    St,
}

impl Variety {
    pub fn parse(s: &str) -> Result<Variety> {
        match s {
            "fr" => Ok(Variety::Fr),
            "rp" => Ok(Variety::Rp),
            "cr" => Ok(Variety::Cr),
            "st" => Ok(Variety::St),
            _ => Err(Error::InvalidArg(format!(
                "unknown variety `{s}` (expected fr, rp, cr, or st)"
            ))),
        }
    }
}

impl fmt::Display for Variety {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variety::Fr => write!(f, "fr"),
            Variety::Rp => write!(f, "rp"),
            Variety::Cr => write!(f, "cr"),
            Variety::St => write!(f, "st"),
        }
    }
}

/// Root atom of a term, if it is a conditional with an atomic antecedent.
fn root_atom(t: &Term) -> Option<&str> {
    match t {
        Term::Cond(_, c, _) => match &**c {
            Term::Atom(a) => Some(a),
            _ => None,
        },
        _ => None,
    }
}

fn is_bf_free(t: &Term, alphabet: &Alphabet) -> bool {
    match t {
        Term::True | Term::False => true,
        Term::Cond(l, c, r) => match &**c {
            Term::Atom(a) => {
                alphabet.contains(a) && is_bf_free(l, alphabet) && is_bf_free(r, alphabet)
            }
            _ => false,
        },
        _ => false,
    }
}

// In a repetition-proof basic form, a child of an `a`-node that itself
// starts with `a` must be a "tower": both of its children are equal and the
// shared child is again a tower over `a`.
fn is_tower(t: &Term, atom: &str, alphabet: &Alphabet) -> bool {
    match root_atom(t) {
        Some(a) if a == atom => match t {
            Term::Cond(l, _, r) => l == r && is_tower(l, atom, alphabet),
            _ => unreachable!(),
        },
        _ => is_bf_rp(t, alphabet),
    }
}

fn is_bf_rp(t: &Term, alphabet: &Alphabet) -> bool {
    match t {
        Term::True | Term::False => true,
        Term::Cond(l, c, r) => match &**c {
            Term::Atom(a) => {
                alphabet.contains(a) && is_tower(l, a, alphabet) && is_tower(r, a, alphabet)
            }
            _ => false,
        },
        _ => false,
    }
}

fn is_bf_cr(t: &Term, alphabet: &Alphabet) -> bool {
    match t {
        Term::True | Term::False => true,
        Term::Cond(l, c, r) => match &**c {
            Term::Atom(a) => {
                alphabet.contains(a)
                    && root_atom(l) != Some(a)
                    && root_atom(r) != Some(a)
                    && is_bf_cr(l, alphabet)
                    && is_bf_cr(r, alphabet)
            }
            _ => false,
        },
        _ => false,
    }
}

fn is_bf_st(t: &Term, alphabet: &Alphabet, level: usize) -> bool {
    if level == alphabet.len() {
        return matches!(t, Term::True | Term::False);
    }
    match t {
        Term::Cond(l, c, r) => {
            **c == Term::Atom(alphabet.names()[level].clone())
                && is_bf_st(l, alphabet, level + 1)
                && is_bf_st(r, alphabet, level + 1)
        }
        _ => false,
    }
}

/// Membership test for the variety's basic-form set.
pub fn is_basic_form(p: &Term, v: Variety, alphabet: &Alphabet) -> Result<bool> {
    p.require_closed()?;
    Ok(match v {
        Variety::Fr => is_bf_free(p, alphabet),
        Variety::Rp => is_bf_rp(p, alphabet),
        Variety::Cr => is_bf_cr(p, alphabet),
        Variety::St => is_bf_st(p, alphabet, 0),
    })
}

// Builds a basic form provably equal to `v <| c |> w`, assuming all three
// arguments are already basic forms. Compound antecedents distribute over
// their own children; constant antecedents select a branch.
fn graft(v: &Term, c: &Term, w: &Term) -> Term {
    match c {
        Term::True => v.clone(),
        Term::False => w.clone(),
        Term::Cond(c1, a, c2) => Term::cond(graft(v, c1, w), (**a).clone(), graft(v, c2, w)),
        Term::Atom(_) => Term::cond(v.clone(), c.clone(), w.clone()),
        Term::Var(_) => unreachable!("closedness checked by the caller"),
    }
}

fn bf_free(p: &Term) -> Term {
    match p {
        Term::True | Term::False => p.clone(),
        Term::Atom(_) => Term::cond(Term::True, p.clone(), Term::False),
        Term::Cond(l, c, r) => {
            let (l, c, r) = (bf_free(l), bf_free(c), bf_free(r));
            graft(&l, &c, &r)
        }
        Term::Var(_) => unreachable!(),
    }
}

/// The free basic form of a closed term; provably equal to its input.
pub fn to_basic_form(p: &Term) -> Result<Term> {
    p.require_closed()?;
    Ok(bf_free(p))
}

fn rp_of(t: &Term) -> Term {
    match t {
        Term::True | Term::False => t.clone(),
        Term::Cond(l, c, r) => {
            let l = rp_of(l);
            let r = rp_of(r);
            let a = match &**c {
                Term::Atom(a) => a.clone(),
                _ => unreachable!("input is a basic form"),
            };
            // A same-atom left child keeps only its own left branch,
            // duplicated; a same-atom right child its right branch.
            let new_l = match &l {
                Term::Cond(x, c2, _) if **c2 == Term::Atom(a.clone()) => {
                    Term::cond((**x).clone(), Term::Atom(a.clone()), (**x).clone())
                }
                _ => l,
            };
            let new_r = match &r {
                Term::Cond(_, c2, z) if **c2 == Term::Atom(a.clone()) => {
                    Term::cond((**z).clone(), Term::Atom(a.clone()), (**z).clone())
                }
                _ => r,
            };
            Term::cond(new_l, Term::Atom(a), new_r)
        }
        Term::Atom(_) | Term::Var(_) => unreachable!("input is a basic form"),
    }
}

/// The repetition-proof basic form of a closed term.
pub fn to_bf_rp(p: &Term, alphabet: &Alphabet) -> Result<Term> {
    alphabet.check_term(p)?;
    Ok(rp_of(&to_basic_form(p)?))
}

fn cr_of(t: &Term) -> Term {
    match t {
        Term::True | Term::False => t.clone(),
        Term::Cond(l, c, r) => {
            let l = cr_of(l);
            let r = cr_of(r);
            let a = match &**c {
                Term::Atom(a) => a.clone(),
                _ => unreachable!("input is a basic form"),
            };
            // Same-atom children contract to the branch the repeated
            // evaluation would take.
            let new_l = match &l {
                Term::Cond(x, c2, _) if **c2 == Term::Atom(a.clone()) => (**x).clone(),
                _ => l,
            };
            let new_r = match &r {
                Term::Cond(_, c2, z) if **c2 == Term::Atom(a.clone()) => (**z).clone(),
                _ => r,
            };
            Term::cond(new_l, Term::Atom(a), new_r)
        }
        Term::Atom(_) | Term::Var(_) => unreachable!("input is a basic form"),
    }
}

/// The contractive basic form of a closed term.
pub fn to_bf_cr(p: &Term, alphabet: &Alphabet) -> Result<Term> {
    alphabet.check_term(p)?;
    Ok(cr_of(&to_basic_form(p)?))
}

fn full_tree(alphabet: &Alphabet, level: usize, leaf: &Term) -> Term {
    if level == alphabet.len() {
        leaf.clone()
    } else {
        let sub = full_tree(alphabet, level + 1, leaf);
        Term::cond(sub.clone(), Term::Atom(alphabet.names()[level].clone()), sub)
    }
}

// Merges two static basic forms over levels `level..n` under atom index
// `i >= level`: keeps the left subtree where the decisive atom came out
// true and the right one where it came out false.
fn merge_st(p: &Term, i: usize, r: &Term, level: usize, alphabet: &Alphabet) -> Term {
    let atom = Term::Atom(alphabet.names()[level].clone());
    let (Term::Cond(pl, _, pr), Term::Cond(rl, _, rr)) = (p, r) else {
        unreachable!("static basic forms are full trees");
    };
    if i == level {
        Term::cond((**pl).clone(), atom, (**rr).clone())
    } else {
        Term::cond(
            merge_st(pl, i, rl, level + 1, alphabet),
            atom,
            merge_st(pr, i, rr, level + 1, alphabet),
        )
    }
}

fn st_of(t: &Term, alphabet: &Alphabet) -> Term {
    match t {
        Term::True | Term::False => full_tree(alphabet, 0, t),
        Term::Cond(l, c, r) => {
            let a = match &**c {
                Term::Atom(a) => a,
                _ => unreachable!("input is a basic form"),
            };
            let i = alphabet.index_of(a).expect("atom checked against alphabet");
            let lp = st_of(l, alphabet);
            let rp = st_of(r, alphabet);
            merge_st(&lp, i, &rp, 0, alphabet)
        }
        _ => unreachable!(),
    }
}

/// The static basic form: the unique full tree over the alphabet's
/// enumeration whose leaves give the term's classical truth value under the
/// assignment read off the root-to-leaf path (left = true).
pub fn to_bf_st(p: &Term, alphabet: &Alphabet) -> Result<Term> {
    alphabet.check_term(p)?;
    Ok(st_of(&to_basic_form(p)?, alphabet))
}

/// Classical (static) evaluation of a closed term under a per-atom
/// assignment. Used as the independent cross-check on static basic forms.
pub fn static_eval(p: &Term, assignment: &dyn Fn(&str) -> bool) -> bool {
    match p {
        Term::True => true,
        Term::False => false,
        Term::Atom(a) => assignment(a),
        Term::Cond(l, c, r) => {
            if static_eval(c, assignment) {
                static_eval(l, assignment)
            } else {
                static_eval(r, assignment)
            }
        }
        Term::Var(_) => panic!("static_eval on open term"),
    }
}

/// Decides `P = Q` in the given variety by comparing canonical forms.
///
/// The free variety works on open terms; the others require closed terms.
/// With a single-atom alphabet, `rp` and `cr` congruence coincide with
/// static congruence and are routed there.
///
/// ```
/// use seqprop::forms::{decide, Variety};
/// use seqprop::syntax::parse_term;
/// use seqprop::Alphabet;
///
/// let dead = parse_term("F <| a |> F", None).unwrap();
/// let f = parse_term("F", None).unwrap();
/// let al = Alphabet::new(["a"]).unwrap();
/// assert!(!decide(Variety::Fr, &dead, &f, &al).unwrap()); // the read of `a` is observable
/// assert!(decide(Variety::St, &dead, &f, &al).unwrap()); // statically it is not
/// ```
pub fn decide(v: Variety, p: &Term, q: &Term, alphabet: &Alphabet) -> Result<bool> {
    alphabet.check_term(p)?;
    alphabet.check_term(q)?;
    match v {
        Variety::Fr => Ok(prove_equal_cp(p, q)),
        Variety::Rp | Variety::Cr => {
            p.require_closed()?;
            q.require_closed()?;
            if alphabet.len() == 1 {
                return decide(Variety::St, p, q, alphabet);
            }
            if v == Variety::Rp {
                Ok(to_bf_rp(p, alphabet)? == to_bf_rp(q, alphabet)?)
            } else {
                Ok(to_bf_cr(p, alphabet)? == to_bf_cr(q, alphabet)?)
            }
        }
        Variety::St => {
            p.require_closed()?;
            q.require_closed()?;
            Ok(to_bf_st(p, alphabet)? == to_bf_st(q, alphabet)?)
        }
    }
}
