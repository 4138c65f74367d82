//! Finite interpretations and countermodel reports establishing that no
//! axiom of the four axiomatizations is derivable from the others.
//!
//! Two backends produce the evidence. Finite interpretations evaluate
//! terms into a small carrier (Booleans or integers) by structural rules
//! that deliberately ignore evaluation order; a report sweeps every
//! instance of every axiom over a closed-term pool. The remaining targets
//! use valuation varieties as countermodels, delegating to the semantic
//! axiom checker and its stored witness valuations.

use std::fmt;

use num_bigint::BigInt;

use crate::axioms::{AxiomId, AxiomSet};
use crate::error::{Error, Result};
use crate::semantics::{check_axiom_soundness, Counterexample, SemVariety, SoundnessOutcome};
use crate::term::{Alphabet, Term};

pub use crate::semantics::statcounter_witness;

/// The five finite interpretations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InterpId {
    Phi1,
    Phi2,
    Phi3,
    Phi4,
    PhiContr,
}

impl fmt::Display for InterpId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            InterpId::Phi1 => "phi1",
            InterpId::Phi2 => "phi2",
            InterpId::Phi3 => "phi3",
            InterpId::Phi4 => "phi4",
            InterpId::PhiContr => "phicontr",
        };
        f.write_str(s)
    }
}

/// A carrier value: Booleans for the first two interpretations, integers
/// (arbitrary precision, since the product rules can grow) for the rest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Bool(bool),
    Int(BigInt),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Bool(true) => write!(f, "T"),
            Value::Bool(false) => write!(f, "F"),
            Value::Int(n) => write!(f, "{n}"),
        }
    }
}

fn int(n: i64) -> Value {
    Value::Int(BigInt::from(n))
}

/// Bottom-up evaluation of a closed term in the interpretation. Atom
/// indices come from the alphabet's enumeration order.
pub fn interpret(m: InterpId, t: &Term, alphabet: &Alphabet) -> Result<Value> {
    t.require_closed()?;
    alphabet.check_term(t)?;
    Ok(eval_interp(m, t, alphabet))
}

fn eval_interp(m: InterpId, t: &Term, alphabet: &Alphabet) -> Value {
    let atom_index = |a: &str| alphabet.index_of(a).expect("atom checked") as i64;
    match (m, t) {
        (InterpId::Phi1 | InterpId::Phi2, Term::True) => Value::Bool(true),
        (InterpId::Phi1 | InterpId::Phi2, Term::False) => Value::Bool(false),
        (InterpId::Phi1 | InterpId::Phi2, Term::Atom(_)) => Value::Bool(true),
        (InterpId::Phi1, Term::Cond(_, c, r)) => {
            let (Value::Bool(cv), Value::Bool(rv)) = (
                eval_interp(m, c, alphabet),
                eval_interp(m, r, alphabet),
            ) else {
                unreachable!()
            };
            Value::Bool(cv || rv)
        }
        (InterpId::Phi2, Term::Cond(l, c, _)) => {
            let (Value::Bool(lv), Value::Bool(cv)) = (
                eval_interp(m, l, alphabet),
                eval_interp(m, c, alphabet),
            ) else {
                unreachable!()
            };
            Value::Bool(lv && cv)
        }
        (InterpId::Phi3, Term::True) => int(0),
        (InterpId::Phi3, Term::False) => int(alphabet.len() as i64 + 1),
        (InterpId::Phi3, Term::Atom(a)) => int(atom_index(a) + 1),
        (InterpId::Phi3, Term::Cond(l, c, r)) => {
            let Value::Int(cv) = eval_interp(m, c, alphabet) else {
                unreachable!()
            };
            if cv <= BigInt::from(1) {
                eval_interp(m, l, alphabet)
            } else {
                eval_interp(m, r, alphabet)
            }
        }
        (InterpId::Phi4 | InterpId::PhiContr, Term::True) => int(1),
        (InterpId::Phi4 | InterpId::PhiContr, Term::False) => int(0),
        (InterpId::Phi4 | InterpId::PhiContr, Term::Atom(a)) => int(atom_index(a) + 2),
        (InterpId::Phi4, Term::Cond(l, c, r)) => {
            let Value::Int(cv) = eval_interp(m, c, alphabet) else {
                unreachable!()
            };
            if cv == BigInt::from(1) {
                eval_interp(m, l, alphabet)
            } else if cv == BigInt::from(0) {
                eval_interp(m, r, alphabet)
            } else {
                let Value::Int(lv) = eval_interp(m, l, alphabet) else {
                    unreachable!()
                };
                Value::Int(lv * cv)
            }
        }
        (InterpId::PhiContr, Term::Cond(l, c, r)) => {
            let (Value::Int(lv), Value::Int(cv), Value::Int(rv)) = (
                eval_interp(m, l, alphabet),
                eval_interp(m, c, alphabet),
                eval_interp(m, r, alphabet),
            ) else {
                unreachable!()
            };
            Value::Int(cv.clone() * lv + (BigInt::from(1) - cv) * rv)
        }
        (_, Term::Var(_)) => unreachable!("closedness checked"),
    }
}

/// A failing axiom instance under a finite interpretation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterpCounterexample {
    pub lhs: Term,
    pub rhs: Term,
    pub lhs_value: Value,
    pub rhs_value: Value,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InstanceOutcome {
    Holds,
    Counterexample(InterpCounterexample),
}

impl InstanceOutcome {
    pub fn holds(&self) -> bool {
        matches!(self, InstanceOutcome::Holds)
    }
}

const INSTANCE_SWEEP_LIMIT: usize = 2_000_000;

// Paper witnesses, checked ahead of the sweep so the reported instance is
// always the canonical one.
fn seed_instance(m: InterpId, axiom: AxiomId, alphabet: &Alphabet) -> Option<Vec<Term>> {
    let a1 = || Term::atom(alphabet.names()[0].clone());
    let t = || Term::True;
    let f = || Term::False;
    let subst: Vec<Term> = match (m, axiom) {
        (InterpId::Phi1, AxiomId::Cp1) => vec![f(), f()],
        (InterpId::Phi2, AxiomId::Cp2) => vec![t(), t()],
        (InterpId::Phi3, AxiomId::Cp3) => vec![a1()],
        (InterpId::Phi4, AxiomId::Cp4) => vec![t(), f(), a1(), t(), t()],
        (InterpId::Phi1, AxiomId::CpStat) => vec![t(), t(), t(), f(), f()],
        (InterpId::Phi4, AxiomId::CpContr) => vec![t(), a1(), f(), t()],
        (InterpId::Phi4, AxiomId::CpCr1) => vec![t(), f(), t()],
        (InterpId::PhiContr, AxiomId::CpContr) => vec![t(), a1(), f(), f()],
        _ => return None,
    };
    Some(subst)
}

/// Substitutes every pool term (closed terms up to `k` nodes, plus every
/// alphabet atom for a schema atom) into the axiom and checks interpreted
/// equality of both sides.
pub fn check_axiom_instances(
    m: InterpId,
    axiom: AxiomId,
    k: usize,
    alphabet: &Alphabet,
) -> Result<InstanceOutcome> {
    let pool = crate::gen::enumerate_closed_terms(alphabet, k);
    let vars = axiom.metavars().len();
    let atoms: Vec<Option<String>> = if axiom.needs_schema_atom() {
        alphabet.names().iter().map(|a| Some(a.clone())).collect()
    } else {
        vec![None]
    };
    let combos = pool.len().pow(vars as u32) * atoms.len();
    if combos > INSTANCE_SWEEP_LIMIT {
        return Err(Error::SizeGuard(format!(
            "{combos} axiom instances to sweep (limit {INSTANCE_SWEEP_LIMIT})"
        )));
    }

    let check = |subst: &[Term], atom: Option<&str>| -> Result<Option<InterpCounterexample>> {
        let (lhs, rhs) = axiom.instantiate(atom, subst)?;
        let lv = interpret(m, &lhs, alphabet)?;
        let rv = interpret(m, &rhs, alphabet)?;
        Ok(if lv != rv {
            Some(InterpCounterexample {
                lhs,
                rhs,
                lhs_value: lv,
                rhs_value: rv,
            })
        } else {
            None
        })
    };

    if let Some(seed) = seed_instance(m, axiom, alphabet) {
        if seed.len() == vars {
            for atom in &atoms {
                if let Some(ce) = check(&seed, atom.as_deref())? {
                    return Ok(InstanceOutcome::Counterexample(ce));
                }
            }
        }
    }
    let mut indices = vec![0usize; vars];
    loop {
        let subst: Vec<Term> = indices.iter().map(|&i| pool[i].clone()).collect();
        for atom in &atoms {
            if let Some(ce) = check(&subst, atom.as_deref())? {
                return Ok(InstanceOutcome::Counterexample(ce));
            }
        }
        // Odometer over the pool.
        let mut j = vars;
        loop {
            if j == 0 {
                return Ok(InstanceOutcome::Holds);
            }
            j -= 1;
            indices[j] += 1;
            if indices[j] < pool.len() {
                break;
            }
            indices[j] = 0;
        }
    }
}

/// Where a target axiom's countermodel comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CounterModel {
    Interpretation(InterpId),
    ValuationVariety(SemVariety),
}

impl fmt::Display for CounterModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CounterModel::Interpretation(m) => write!(f, "{m}"),
            CounterModel::ValuationVariety(v) => write!(f, "valuation variety {v}"),
        }
    }
}

#[derive(Debug, Clone)]
pub enum ReportCounterexample {
    Interpreted(InterpCounterexample),
    Valuation(Counterexample),
}

/// Evidence that `target` is independent within `set`: a model on which
/// every other axiom holds (over the checked instance space) while the
/// target fails.
#[derive(Debug, Clone)]
pub struct IndependenceReport {
    pub set: AxiomSet,
    pub target: AxiomId,
    pub model: CounterModel,
    pub pool_bound: usize,
    /// Per-axiom verdict: true means every checked instance held.
    pub verdicts: Vec<(AxiomId, bool)>,
    pub counterexample: Option<ReportCounterexample>,
}

impl IndependenceReport {
    /// A report establishes independence only if all non-target axioms
    /// held and the target failed.
    pub fn is_valid(&self) -> bool {
        self.counterexample.is_some()
            && self
                .verdicts
                .iter()
                .all(|(ax, ok)| (*ax == self.target) != *ok)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("set {}\n", self.set));
        out.push_str(&format!("target {}\n", self.target));
        out.push_str(&format!("model {}\n", self.model));
        out.push_str(&format!("pool-bound {}\n", self.pool_bound));
        for (ax, ok) in &self.verdicts {
            out.push_str(&format!(
                "axiom {ax}: {}\n",
                if *ok { "holds" } else { "FAILS" }
            ));
        }
        match &self.counterexample {
            Some(ReportCounterexample::Interpreted(ce)) => {
                out.push_str(&format!(
                    "counterexample: {} = {} but {} = {}\n",
                    ce.lhs, ce.lhs_value, ce.rhs, ce.rhs_value
                ));
            }
            Some(ReportCounterexample::Valuation(ce)) => {
                out.push_str(&format!(
                    "counterexample: {} = {} @{} but {} = {} @{}\n",
                    ce.lhs,
                    if ce.lhs_result.0 { "T" } else { "F" },
                    crate::semantics::format_history(&ce.lhs_result.1),
                    ce.rhs,
                    if ce.rhs_result.0 { "T" } else { "F" },
                    crate::semantics::format_history(&ce.rhs_result.1),
                ));
                out.push_str("witness valuation:\n");
                for line in ce.valuation.render().lines() {
                    out.push_str(&format!("  {line}\n"));
                }
            }
            None => out.push_str("counterexample: none found (report invalid)\n"),
        }
        out.push_str(&format!(
            "verdict: {}\n",
            if self.is_valid() { "VALID" } else { "INVALID" }
        ));
        out
    }
}

/// Trials and seed used when a countermodel is a valuation variety.
const VARIETY_TRIALS: usize = 256;
const VARIETY_SEED: u64 = 0x5e9;

fn counter_model_for(target: AxiomId) -> CounterModel {
    match target {
        AxiomId::Cp1 => CounterModel::Interpretation(InterpId::Phi1),
        AxiomId::Cp2 => CounterModel::Interpretation(InterpId::Phi2),
        AxiomId::Cp3 => CounterModel::Interpretation(InterpId::Phi3),
        AxiomId::Cp4 => CounterModel::Interpretation(InterpId::Phi4),
        AxiomId::CpRp1 => CounterModel::ValuationVariety(SemVariety::Rp1),
        AxiomId::CpRp2 => CounterModel::ValuationVariety(SemVariety::Rp2),
        AxiomId::CpCr1 => CounterModel::ValuationVariety(SemVariety::Cr1),
        AxiomId::CpCr2 => CounterModel::ValuationVariety(SemVariety::Cr2),
        AxiomId::CpStat => CounterModel::ValuationVariety(SemVariety::StatCounter),
        AxiomId::CpContr => CounterModel::Interpretation(InterpId::PhiContr),
        AxiomId::Cp5 => unreachable!("cp5 is not part of the four sets"),
    }
}

/// Builds the independence report for `target` within `set`, or refuses
/// when the question is open.
pub fn independence_report(
    set: AxiomSet,
    target: AxiomId,
    k: usize,
    alphabet: &Alphabet,
) -> Result<IndependenceReport> {
    if !set.axioms().contains(&target) {
        return Err(Error::InvalidArg(format!(
            "axiom {target} is not part of {set}"
        )));
    }
    let open = matches!(
        (set, target),
        (AxiomSet::CpCr, AxiomId::Cp4)
            | (AxiomSet::CpSt, AxiomId::Cp1)
            | (AxiomSet::CpSt, AxiomId::Cp4)
    );
    if open {
        return Err(Error::UnresolvedIndependence {
            set: set.to_string(),
            target: target.to_string(),
        });
    }
    let model = counter_model_for(target);
    let mut verdicts = Vec::new();
    let mut counterexample = None;
    for &axiom in set.axioms() {
        match &model {
            CounterModel::Interpretation(m) => {
                match check_axiom_instances(*m, axiom, k, alphabet)? {
                    InstanceOutcome::Holds => verdicts.push((axiom, true)),
                    InstanceOutcome::Counterexample(ce) => {
                        verdicts.push((axiom, false));
                        if axiom == target {
                            counterexample = Some(ReportCounterexample::Interpreted(ce));
                        }
                    }
                }
            }
            CounterModel::ValuationVariety(v) => {
                match check_axiom_soundness(*v, axiom, alphabet, VARIETY_TRIALS, VARIETY_SEED)? {
                    SoundnessOutcome::Holds => verdicts.push((axiom, true)),
                    SoundnessOutcome::Counterexample(ce) => {
                        verdicts.push((axiom, false));
                        if axiom == target {
                            counterexample = Some(ReportCounterexample::Valuation(ce));
                        }
                    }
                }
            }
        }
    }
    Ok(IndependenceReport {
        set,
        target,
        model,
        pool_bound: k,
        verdicts,
        counterexample,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_term;

    fn t(s: &str) -> Term {
        parse_term(s, None).unwrap()
    }
    fn a1() -> Alphabet {
        Alphabet::new(["a1"]).unwrap()
    }

    #[test]
    fn interpretation_examples() {
        let al = a1();
        assert_eq!(
            interpret(InterpId::Phi1, &t("F <| T |> F"), &al).unwrap(),
            Value::Bool(true)
        );
        assert_eq!(
            interpret(InterpId::Phi1, &Term::False, &al).unwrap(),
            Value::Bool(false)
        );
        assert_eq!(interpret(InterpId::Phi3, &t("T <| a1 |> F"), &al).unwrap(), int(0));
        assert_eq!(interpret(InterpId::Phi3, &t("a1"), &al).unwrap(), int(1));
        assert_eq!(
            interpret(InterpId::PhiContr, &t("(T <| a1 |> F) <| a1 |> F"), &al).unwrap(),
            int(4)
        );
        assert_eq!(
            interpret(InterpId::PhiContr, &t("T <| a1 |> F"), &al).unwrap(),
            int(2)
        );
    }

    #[test]
    fn instance_sweeps() {
        let ab = Alphabet::new(["a", "b"]).unwrap();
        assert!(check_axiom_instances(InterpId::Phi1, AxiomId::Cp2, 3, &ab)
            .unwrap()
            .holds());
        match check_axiom_instances(InterpId::Phi1, AxiomId::Cp1, 3, &ab).unwrap() {
            InstanceOutcome::Counterexample(ce) => {
                assert_eq!(ce.lhs, t("F <| T |> F"));
                assert_eq!(ce.rhs, Term::False);
            }
            _ => panic!("expected counterexample"),
        }
        match check_axiom_instances(InterpId::Phi4, AxiomId::Cp4, 2, &a1()).unwrap() {
            InstanceOutcome::Counterexample(ce) => {
                assert_eq!(ce.lhs, t("T <| (F <| a1 |> T) |> T"));
                assert_eq!(ce.lhs_value, int(1));
                assert_eq!(ce.rhs_value, int(2));
            }
            _ => panic!("expected counterexample"),
        }
    }

    #[test]
    fn one_sided_contraction_laws_hold_in_the_interpretations() {
        let ab = Alphabet::new(["a", "b"]).unwrap();
        for m in [InterpId::Phi1, InterpId::Phi2, InterpId::Phi3, InterpId::Phi4] {
            for ax in [AxiomId::CpRp1, AxiomId::CpRp2] {
                assert!(check_axiom_instances(m, ax, 3, &ab).unwrap().holds(), "{m} {ax}");
            }
        }
        for m in [InterpId::Phi1, InterpId::Phi2, InterpId::Phi3] {
            for ax in [AxiomId::CpCr1, AxiomId::CpCr2] {
                assert!(check_axiom_instances(m, ax, 3, &ab).unwrap().holds(), "{m} {ax}");
            }
        }
        // The integer product interpretation breaks contraction instead.
        assert!(!check_axiom_instances(InterpId::Phi4, AxiomId::CpCr1, 3, &ab)
            .unwrap()
            .holds());
    }

    #[test]
    fn phicontr_models_everything_but_contraction() {
        let al = a1();
        for ax in [
            AxiomId::Cp1,
            AxiomId::Cp2,
            AxiomId::Cp3,
            AxiomId::Cp4,
            AxiomId::CpStat,
        ] {
            assert!(check_axiom_instances(InterpId::PhiContr, ax, 3, &al)
                .unwrap()
                .holds());
        }
        assert!(!check_axiom_instances(InterpId::PhiContr, AxiomId::CpContr, 3, &al)
            .unwrap()
            .holds());
    }

    #[test]
    fn reports() {
        let report = independence_report(AxiomSet::Cp, AxiomId::Cp3, 3, &a1()).unwrap();
        assert!(report.is_valid());
        match report.counterexample {
            Some(ReportCounterexample::Interpreted(ce)) => {
                assert_eq!(ce.lhs, t("T <| a1 |> F"));
            }
            _ => panic!("expected interpreted counterexample"),
        }
        let contr = independence_report(AxiomSet::CpSt, AxiomId::CpContr, 2, &a1()).unwrap();
        assert!(contr.is_valid());
        assert!(matches!(
            independence_report(AxiomSet::CpCr, AxiomId::Cp4, 2, &a1()),
            Err(Error::UnresolvedIndependence { .. })
        ));
        assert!(matches!(
            independence_report(AxiomSet::Cp, AxiomId::CpStat, 2, &a1()),
            Err(Error::InvalidArg(_))
        ));
    }
}
