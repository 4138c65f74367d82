//! A convergent four-rule rewriting system for conditional composition and
//! the equality decision it induces.
//!
//! The rules orient the core axioms:
//!
//! ```text
//! R1: x <| T |> y            -> x
//! R2: x <| F |> y            -> y
//! R3: T <| x |> F            -> x
//! R4: x <| (y <| z |> v) |> w -> (x <| y |> w) <| z |> (x <| v |> w)
//! ```
//!
//! Every rule application strictly decreases the [`norm`](crate::term::norm)
//! of the rewritten subterm and never increases the norm of the whole term
//! (the `max` in the norm is not strict in the consequent positions, so
//! only the redex itself is guaranteed to shrink). Together with the seven
//! joinable critical pairs this makes normal forms exist and be unique
//! regardless of strategy. Two terms are provably equal exactly when their
//! normal forms coincide; this is valid on open terms as well.

use std::fmt;

use crate::term::Term;

/// Identifier of one of the four rewrite rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleId {
    R1,
    R2,
    R3,
    R4,
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleId::R1 => write!(f, "R1"),
            RuleId::R2 => write!(f, "R2"),
            RuleId::R3 => write!(f, "R3"),
            RuleId::R4 => write!(f, "R4"),
        }
    }
}

/// One step into a conditional: which child the redex lies under.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Left,
    Ante,
    Right,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Branch::Left => write!(f, "left"),
            Branch::Ante => write!(f, "ante"),
            Branch::Right => write!(f, "right"),
        }
    }
}

/// Root-relative redex position.
pub type Path = Vec<Branch>;

/// The subterm at a root-relative path, if the path exists in `t`.
pub fn subterm_at<'a>(t: &'a Term, path: &[Branch]) -> Option<&'a Term> {
    let mut cur = t;
    for b in path {
        let Term::Cond(l, c, r) = cur else {
            return None;
        };
        cur = match b {
            Branch::Left => l,
            Branch::Ante => c,
            Branch::Right => r,
        };
    }
    Some(cur)
}

fn fmt_path(path: &[Branch]) -> String {
    if path.is_empty() {
        "root".to_string()
    } else {
        path.iter()
            .map(|b| b.to_string())
            .collect::<Vec<_>>()
            .join(".")
    }
}

/// One recorded rewrite step: the rule applied, where, and the whole term
/// afterwards.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub rule: RuleId,
    pub position: Path,
    pub term: Term,
}

/// The full reduction sequence of one normalization.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RewriteTrace {
    pub steps: Vec<TraceStep>,
}

impl RewriteTrace {
    /// Line-oriented serialization: `step <n>: <rule> at <path> => <term>`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (i, step) in self.steps.iter().enumerate() {
            out.push_str(&format!(
                "step {}: {} at {} => {}\n",
                i + 1,
                step.rule,
                fmt_path(&step.position),
                step.term
            ));
        }
        out
    }
}

/// Tries the rules at the root only, in R1..R4 order.
fn root_step(t: &Term) -> Option<(Term, RuleId)> {
    let Term::Cond(l, c, r) = t else { return None };
    match &**c {
        Term::True => return Some(((**l).clone(), RuleId::R1)),
        Term::False => return Some(((**r).clone(), RuleId::R2)),
        _ => {}
    }
    if **l == Term::True && **r == Term::False {
        return Some(((**c).clone(), RuleId::R3));
    }
    if let Term::Cond(y, z, v) = &**c {
        let rebuilt = Term::cond(
            Term::cond((**l).clone(), (**y).clone(), (**r).clone()),
            (**z).clone(),
            Term::cond((**l).clone(), (**v).clone(), (**r).clone()),
        );
        return Some((rebuilt, RuleId::R4));
    }
    None
}

fn with_child_replaced(t: &Term, branch: Branch, new_child: Term) -> Term {
    let Term::Cond(l, c, r) = t else { unreachable!() };
    match branch {
        Branch::Left => Term::cond(new_child, (**c).clone(), (**r).clone()),
        Branch::Ante => Term::cond((**l).clone(), new_child, (**r).clone()),
        Branch::Right => Term::cond((**l).clone(), (**c).clone(), new_child),
    }
}

fn step_at(t: &Term, innermost: bool) -> Option<(Term, RuleId, Path)> {
    if !innermost {
        if let Some((t2, rule)) = root_step(t) {
            return Some((t2, rule, Vec::new()));
        }
    }
    if let Term::Cond(l, c, r) = t {
        for (branch, child) in [
            (Branch::Left, &**l),
            (Branch::Ante, &**c),
            (Branch::Right, &**r),
        ] {
            if let Some((sub, rule, mut path)) = step_at(child, innermost) {
                path.insert(0, branch);
                return Some((with_child_replaced(t, branch, sub), rule, path));
            }
        }
    }
    if innermost {
        if let Some((t2, rule)) = root_step(t) {
            return Some((t2, rule, Vec::new()));
        }
    }
    None
}

/// Applies the first matching rule at the leftmost-innermost redex.
/// Returns `None` when `t` is a normal form.
pub fn rewrite_step(t: &Term) -> Option<(Term, RuleId, Path)> {
    step_at(t, true)
}

fn normalize(t: &Term, innermost: bool) -> (Term, RewriteTrace) {
    let mut cur = t.clone();
    let mut trace = RewriteTrace::default();
    while let Some((next, rule, position)) = step_at(&cur, innermost) {
        trace.steps.push(TraceStep {
            rule,
            position,
            term: next.clone(),
        });
        cur = next;
    }
    (cur, trace)
}

/// Normalizes under the leftmost-innermost strategy (the canonical one).
pub fn normal_form(t: &Term) -> (Term, RewriteTrace) {
    normalize(t, true)
}

/// Normalizes under leftmost-outermost; by confluence the result is
/// identical to [`normal_form`]'s.
pub fn normal_form_outermost(t: &Term) -> (Term, RewriteTrace) {
    normalize(t, false)
}

/// Decides provable equality: true iff the normal forms coincide. Open
/// terms are fine; on closed terms this is congruence under free reactive
/// valuations.
///
/// ```
/// use seqprop::rewrite::prove_equal_cp;
/// use seqprop::syntax::parse_term;
///
/// let double_neg = parse_term("~~X", None).unwrap();
/// let x = parse_term("X", None).unwrap();
/// assert!(prove_equal_cp(&double_neg, &x));
/// ```
pub fn prove_equal_cp(s: &Term, t: &Term) -> bool {
    normal_form(s).0 == normal_form(t).0
}

/// True iff `u` and `v` reduce to the same normal form.
pub fn join(u: &Term, v: &Term) -> bool {
    prove_equal_cp(u, v)
}

/// The seven critical pairs of the rule set, each instantiated with its
/// most general unifier. Pair order follows the overlap enumeration:
/// R4/R1, R4/R2, R4/R3 (antecedent overlaps), R1/R3, R2/R3 (root
/// overlaps), R3/R4, and R4/R4.
pub fn critical_pairs() -> Vec<(Term, Term)> {
    let v = |n: &str| Term::var(n);
    let x1 = || v("X1");
    let y1 = || v("Y1");
    let x2 = || v("X2");
    let y2 = || v("Y2");
    let x3 = || v("X3");
    let x4 = || v("X4");
    let y4 = || v("Y4");
    let z4 = || v("Z4");
    let v4 = || v("V4");
    let w4 = || v("W4");
    // Second copy of R4's variables for the self-overlap.
    let x4p = || v("X4P");
    let y4p = || v("Y4P");
    let z4p = || v("Z4P");
    let v4p = || v("V4P");
    let w4p = || v("W4P");

    vec![
        // R1 inside R4's antecedent: x4 <| (x1 <| T |> y1) |> w4
        (
            Term::cond(x4(), x1(), w4()),
            Term::cond(
                Term::cond(x4(), x1(), w4()),
                Term::True,
                Term::cond(x4(), y1(), w4()),
            ),
        ),
        // R2 inside R4's antecedent: x4 <| (x2 <| F |> y2) |> w4
        (
            Term::cond(x4(), y2(), w4()),
            Term::cond(
                Term::cond(x4(), x2(), w4()),
                Term::False,
                Term::cond(x4(), y2(), w4()),
            ),
        ),
        // R3 inside R4's antecedent: x4 <| (T <| x3 |> F) |> w4
        (
            Term::cond(x4(), x3(), w4()),
            Term::cond(
                Term::cond(x4(), Term::True, w4()),
                x3(),
                Term::cond(x4(), Term::False, w4()),
            ),
        ),
        // R1 and R3 both match T <| T |> F.
        (Term::True, Term::True),
        // R2 and R3 both match T <| F |> F.
        (Term::False, Term::False),
        // R4 under R3: T <| (y4 <| z4 |> v4) |> F
        (
            Term::cond(y4(), z4(), v4()),
            Term::cond(
                Term::cond(Term::True, y4(), Term::False),
                z4(),
                Term::cond(Term::True, v4(), Term::False),
            ),
        ),
        // R4 inside R4's antecedent.
        (
            Term::cond(
                x4(),
                Term::cond(
                    Term::cond(x4p(), y4p(), w4p()),
                    z4p(),
                    Term::cond(x4p(), v4p(), w4p()),
                ),
                w4(),
            ),
            Term::cond(
                Term::cond(x4(), x4p(), w4()),
                Term::cond(y4p(), z4p(), v4p()),
                Term::cond(x4(), w4p(), w4()),
            ),
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_term;
    use crate::term::{apply_connective, negate, norm, seq_compose, Connective, Term};

    fn t(s: &str) -> Term {
        parse_term(s, None).unwrap()
    }

    #[test]
    fn single_steps() {
        let (res, rule, path) = rewrite_step(&t("X <| T |> Y")).unwrap();
        assert_eq!((res, rule, path), (Term::var("X"), RuleId::R1, vec![]));
        let (res, rule, _) = rewrite_step(&t("T <| a |> F")).unwrap();
        assert_eq!((res, rule), (Term::atom("a"), RuleId::R3));
        assert!(rewrite_step(&Term::atom("a")).is_none());
    }

    #[test]
    fn innermost_steps_fire_before_root() {
        // The antecedent redex is rewritten before the root R4 would be.
        let term = t("a <| (T <| b |> F) |> c");
        let (res, rule, path) = rewrite_step(&term).unwrap();
        assert_eq!(rule, RuleId::R3);
        assert_eq!(path, vec![Branch::Ante]);
        assert_eq!(res, t("a <| b |> c"));
    }

    #[test]
    fn normal_forms() {
        assert_eq!(
            normal_form(&t("a <| (b <| c |> d) |> e")).0,
            t("(a <| b |> e) <| c |> (a <| d |> e)")
        );
        assert_eq!(normal_form(&t("T <| (T <| b |> F) |> F")).0, Term::atom("b"));
        assert_eq!(normal_form(&Term::True).0, Term::True);
    }

    #[test]
    fn equality_decision() {
        // ~(x or-right y) = ~x and-right ~y
        let x = || Term::var("X");
        let y = || Term::var("Y");
        let lhs = negate(apply_connective(Connective::RightOr, x(), y()));
        let rhs = apply_connective(Connective::RightAnd, negate(x()), negate(y()));
        assert!(prove_equal_cp(&lhs, &rhs));

        assert!(!prove_equal_cp(&t("F <| a |> F"), &Term::False));
        assert!(prove_equal_cp(&t("(a <| b |> c)"), &t("a <| b |> c")));

        // double negation and sequential associativity
        assert!(prove_equal_cp(&negate(negate(x())), &x()));
        let z = || Term::var("Z");
        assert!(prove_equal_cp(
            &seq_compose(x(), seq_compose(y(), z())),
            &seq_compose(seq_compose(x(), y()), z()),
        ));
    }

    #[test]
    fn critical_pairs_join() {
        let pairs = critical_pairs();
        assert_eq!(pairs.len(), 7);
        for (i, (u, v)) in pairs.iter().enumerate() {
            assert!(join(u, v), "pair {} does not join: {} vs {}", i + 1, u, v);
        }
        assert_eq!(pairs[3], (Term::True, Term::True));
        assert_eq!(
            pairs[5],
            (
                t("Y4 <| Z4 |> V4"),
                t("(T <| Y4 |> F) <| Z4 |> (T <| V4 |> F)")
            )
        );
        assert!(!join(&Term::atom("a"), &Term::atom("b")));
    }

    #[test]
    fn critical_pairs_come_from_their_overlaps() {
        // Each pair's components are the two one-step reducts of the
        // unified overlap term, so both must be provably equal to it and
        // the inner reduct must be the innermost step's result.
        let overlaps = [
            "X4 <| (X1 <| T |> Y1) |> W4",
            "X4 <| (X2 <| F |> Y2) |> W4",
            "X4 <| (T <| X3 |> F) |> W4",
            "T <| T |> F",
            "T <| F |> F",
            "T <| (Y4 <| Z4 |> V4) |> F",
            "X4 <| (X4P <| (Y4P <| Z4P |> V4P) |> W4P) |> W4",
        ];
        for (i, ((u, v), overlap)) in critical_pairs().iter().zip(overlaps).enumerate() {
            let o = t(overlap);
            assert!(prove_equal_cp(&o, u), "pair {} left reduct", i + 1);
            assert!(prove_equal_cp(&o, v), "pair {} right reduct", i + 1);
            // Pairs 1-3 and 7 overlap inside the antecedent; their first
            // component is the innermost step's result.
            if matches!(i, 0 | 1 | 2 | 6) {
                let (stepped, _, path) = rewrite_step(&o).unwrap();
                assert_eq!(&stepped, u, "pair {}", i + 1);
                assert_eq!(path, vec![Branch::Ante]);
            }
        }
    }

    #[test]
    fn traces_decrease_the_norm_and_render() {
        let term = t("T <| (T <| a |> F) |> F");
        let (nf, trace) = normal_form(&term);
        assert_eq!(nf, Term::atom("a"));
        let mut last = norm(&term);
        for step in &trace.steps {
            let n = norm(&step.term);
            assert!(n < last);
            last = n;
        }
        let rendered = trace.render();
        assert_eq!(rendered.lines().count(), trace.steps.len());
        assert!(rendered.starts_with("step 1: R3 at ante => T <| a |> F"));
    }

    // Witness for the doc note above: a step in the non-dominant
    // consequent shrinks the redex but leaves the whole-term norm as is.
    #[test]
    fn norm_is_not_strict_in_consequent_positions() {
        let big = t("(T <| a |> T) <| b |> T"); // norm 5
        let term = Term::cond(t("T <| T |> T"), Term::atom("c"), big.clone());
        let (stepped, rule, pos) = rewrite_step(&term).unwrap();
        assert_eq!(rule, RuleId::R1);
        assert_eq!(pos, vec![Branch::Left]);
        assert_eq!(norm(&stepped), norm(&term));
        assert!(norm(subterm_at(&stepped, &pos).unwrap()) < norm(&t("T <| T |> T")));
    }

    #[test]
    fn traces_replay_step_by_step() {
        // Each recorded entry is exactly what rewrite_step produces from
        // the previous term.
        let term = t("~(a or> (T <| (b <| c |> d) |> F))");
        let (nf, trace) = normal_form(&term);
        let mut cur = term;
        for step in &trace.steps {
            let (next, rule, pos) = rewrite_step(&cur).unwrap();
            assert_eq!(next, step.term);
            assert_eq!(rule, step.rule);
            assert_eq!(pos, step.position);
            cur = next;
        }
        assert_eq!(cur, nf);
        assert!(rewrite_step(&nf).is_none());
    }

    #[test]
    fn strategies_agree_on_examples() {
        for s in [
            "a <| (b <| c |> d) |> e",
            "(T <| (a <| b |> c) |> F) <| (x <| F |> y) |> (T <| T |> F)",
            "~(a or> (b ; c))",
        ] {
            let term = t(s);
            assert_eq!(normal_form(&term).0, normal_form_outermost(&term).0);
        }
    }
}
