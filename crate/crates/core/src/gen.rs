//! Deterministic generators: exhaustive enumeration of closed terms by
//! size, and seeded random terms for property-style checks.

use rand::Rng;

use crate::term::{Alphabet, Term};

/// All closed terms of exactly `size` nodes, in a fixed order (constants,
/// then atoms in alphabet order, then conditionals by sub-size split).
fn terms_of_size(alphabet: &Alphabet, size: usize, memo: &mut Vec<Option<Vec<Term>>>) -> Vec<Term> {
    if let Some(cached) = &memo[size] {
        return cached.clone();
    }
    let mut out = Vec::new();
    if size == 1 {
        out.push(Term::True);
        out.push(Term::False);
        for a in alphabet.names() {
            out.push(Term::atom(a.clone()));
        }
    } else if size >= 4 {
        let inner = size - 1;
        for sl in 1..=inner - 2 {
            for sc in 1..=inner - sl - 1 {
                let sr = inner - sl - sc;
                let ls = terms_of_size(alphabet, sl, memo);
                let cs = terms_of_size(alphabet, sc, memo);
                let rs = terms_of_size(alphabet, sr, memo);
                for l in &ls {
                    for c in &cs {
                        for r in &rs {
                            out.push(Term::cond(l.clone(), c.clone(), r.clone()));
                        }
                    }
                }
            }
        }
    }
    memo[size] = Some(out.clone());
    out
}

/// Every closed term over `alphabet` with at most `max_size` nodes.
pub fn enumerate_closed_terms(alphabet: &Alphabet, max_size: usize) -> Vec<Term> {
    let mut memo = vec![None; max_size + 1];
    let mut out = Vec::new();
    for s in 1..=max_size {
        out.extend(terms_of_size(alphabet, s, &mut memo));
    }
    out
}

/// Random term of at most `size_budget` nodes. Leaves are drawn from the
/// constants, the alphabet, and `vars` (empty slice for closed terms).
pub fn random_term<R: Rng>(
    rng: &mut R,
    alphabet: &Alphabet,
    vars: &[&str],
    size_budget: usize,
) -> Term {
    if size_budget < 4 || rng.gen_bool(0.25) {
        let leaf_kinds = 2 + alphabet.len() + vars.len();
        let k = rng.gen_range(0..leaf_kinds);
        return match k {
            0 => Term::True,
            1 => Term::False,
            _ if k - 2 < alphabet.len() => Term::atom(alphabet.names()[k - 2].clone()),
            _ => Term::var(vars[k - 2 - alphabet.len()]),
        };
    }
    let inner = size_budget - 1;
    let sl = rng.gen_range(1..=inner - 2);
    let sc = rng.gen_range(1..=inner - sl - 1);
    let sr = inner - sl - sc;
    Term::cond(
        random_term(rng, alphabet, vars, sl),
        random_term(rng, alphabet, vars, sc),
        random_term(rng, alphabet, vars, sr),
    )
}

/// Random closed term whose atom-occurrence count stays within
/// `max_atoms`; regenerates leaves as constants once the budget is spent.
pub fn random_closed_term_bounded<R: Rng>(
    rng: &mut R,
    alphabet: &Alphabet,
    size_budget: usize,
    max_atoms: usize,
) -> Term {
    let t = random_term(rng, alphabet, &[], size_budget);
    let mut remaining = max_atoms;
    fn cap(t: &Term, remaining: &mut usize) -> Term {
        match t {
            Term::Atom(_) => {
                if *remaining > 0 {
                    *remaining -= 1;
                    t.clone()
                } else {
                    Term::False
                }
            }
            Term::Cond(l, c, r) => {
                // Antecedent first: evaluation order charges it first.
                let c2 = cap(c, remaining);
                let l2 = cap(l, remaining);
                let r2 = cap(r, remaining);
                Term::cond(l2, c2, r2)
            }
            _ => t.clone(),
        }
    }
    cap(&t, &mut remaining)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn enumeration_counts() {
        let a = Alphabet::new(["a"]).unwrap();
        assert_eq!(enumerate_closed_terms(&a, 1).len(), 3);
        assert_eq!(enumerate_closed_terms(&a, 5).len(), 3 + 27);
        let ab = Alphabet::new(["a", "b"]).unwrap();
        assert_eq!(enumerate_closed_terms(&ab, 5).len(), 4 + 64);
        assert!(enumerate_closed_terms(&ab, 5).iter().all(|t| t.is_closed()));
    }

    #[test]
    fn random_terms_are_reproducible_and_bounded() {
        let ab = Alphabet::new(["a", "b"]).unwrap();
        let mut r1 = ChaCha8Rng::seed_from_u64(7);
        let mut r2 = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let t1 = random_term(&mut r1, &ab, &["X"], 20);
            let t2 = random_term(&mut r2, &ab, &["X"], 20);
            assert_eq!(t1, t2);
            assert!(t1.size() <= 20);
        }
        let mut r = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let t = random_closed_term_bounded(&mut r, &ab, 15, 3);
            assert!(t.is_closed());
            assert!(t.atom_occurrences() <= 3);
        }
    }
}
