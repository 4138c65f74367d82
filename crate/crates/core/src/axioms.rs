//! The equation schemas of the axiomatizations, as pairs of pattern terms
//! over metavariables `X, Y, Z, U, V, W` (plus a schema atom for the
//! per-atom schemas), and the four named axiom sets.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::term::Term;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AxiomId {
    Cp1,
    Cp2,
    Cp3,
    Cp4,
    CpRp1,
    CpRp2,
    CpCr1,
    CpCr2,
    CpStat,
    CpContr,
    Cp5,
}

pub const ALL_AXIOMS: [AxiomId; 11] = [
    AxiomId::Cp1,
    AxiomId::Cp2,
    AxiomId::Cp3,
    AxiomId::Cp4,
    AxiomId::CpRp1,
    AxiomId::CpRp2,
    AxiomId::CpCr1,
    AxiomId::CpCr2,
    AxiomId::CpStat,
    AxiomId::CpContr,
    AxiomId::Cp5,
];

impl AxiomId {
    pub fn parse(s: &str) -> Result<AxiomId> {
        match s.to_ascii_lowercase().as_str() {
            "cp1" => Ok(AxiomId::Cp1),
            "cp2" => Ok(AxiomId::Cp2),
            "cp3" => Ok(AxiomId::Cp3),
            "cp4" => Ok(AxiomId::Cp4),
            "cprp1" => Ok(AxiomId::CpRp1),
            "cprp2" => Ok(AxiomId::CpRp2),
            "cpcr1" => Ok(AxiomId::CpCr1),
            "cpcr2" => Ok(AxiomId::CpCr2),
            "cpstat" => Ok(AxiomId::CpStat),
            "cpcontr" => Ok(AxiomId::CpContr),
            "cp5" => Ok(AxiomId::Cp5),
            _ => Err(Error::InvalidArg(format!("unknown axiom `{s}`"))),
        }
    }

    /// Metavariables of the schema, in instantiation order.
    pub fn metavars(self) -> &'static [&'static str] {
        use AxiomId::*;
        match self {
            Cp1 | Cp2 => &["X", "Y"],
            Cp3 => &["X"],
            Cp4 | CpStat => &["X", "Y", "Z", "U", "V"],
            CpRp1 | CpRp2 | CpCr1 | CpCr2 => &["X", "Y", "Z"],
            CpContr => &["X", "Y", "Z", "U"],
            Cp5 => &["X", "Y", "Z", "U", "V", "W"],
        }
    }

    /// True for the per-atom schemas, which mention a concrete atom.
    pub fn needs_schema_atom(self) -> bool {
        matches!(
            self,
            AxiomId::CpRp1 | AxiomId::CpRp2 | AxiomId::CpCr1 | AxiomId::CpCr2
        )
    }

    /// Both sides of the schema; `atom` instantiates the schema atom and is
    /// required exactly for the per-atom schemas.
    pub fn schema(self, atom: Option<&str>) -> Result<(Term, Term)> {
        let v = Term::var;
        let c = Term::cond;
        let a = || -> Result<Term> {
            match atom {
                Some(name) => Ok(Term::atom(name)),
                None => Err(Error::InvalidArg(format!(
                    "axiom {self} is an atom schema; an atom must be supplied"
                ))),
            }
        };
        if !self.needs_schema_atom() && atom.is_some() {
            return Err(Error::InvalidArg(format!(
                "axiom {self} takes no schema atom"
            )));
        }
        Ok(match self {
            AxiomId::Cp1 => (c(v("X"), Term::True, v("Y")), v("X")),
            AxiomId::Cp2 => (c(v("X"), Term::False, v("Y")), v("Y")),
            AxiomId::Cp3 => (c(Term::True, v("X"), Term::False), v("X")),
            AxiomId::Cp4 => (
                c(v("X"), c(v("Y"), v("Z"), v("U")), v("V")),
                c(
                    c(v("X"), v("Y"), v("V")),
                    v("Z"),
                    c(v("X"), v("U"), v("V")),
                ),
            ),
            AxiomId::CpRp1 => (
                c(c(v("X"), a()?, v("Y")), a()?, v("Z")),
                c(c(v("X"), a()?, v("X")), a()?, v("Z")),
            ),
            AxiomId::CpRp2 => (
                c(v("X"), a()?, c(v("Y"), a()?, v("Z"))),
                c(v("X"), a()?, c(v("Z"), a()?, v("Z"))),
            ),
            AxiomId::CpCr1 => (
                c(c(v("X"), a()?, v("Y")), a()?, v("Z")),
                c(v("X"), a()?, v("Z")),
            ),
            AxiomId::CpCr2 => (
                c(v("X"), a()?, c(v("Y"), a()?, v("Z"))),
                c(v("X"), a()?, v("Z")),
            ),
            AxiomId::CpStat => (
                c(c(v("X"), v("Y"), v("Z")), v("U"), v("V")),
                c(
                    c(v("X"), v("U"), v("V")),
                    v("Y"),
                    c(v("Z"), v("U"), v("V")),
                ),
            ),
            AxiomId::CpContr => (
                c(c(v("X"), v("Y"), v("Z")), v("Y"), v("U")),
                c(v("X"), v("Y"), v("U")),
            ),
            AxiomId::Cp5 => (
                c(
                    v("X"),
                    v("Y"),
                    c(v("Z"), v("U"), c(v("V"), v("Y"), v("W"))),
                ),
                c(v("X"), v("Y"), c(v("Z"), v("U"), v("W"))),
            ),
        })
    }

    /// Substitutes `terms` (matching [`Self::metavars`] order) and the
    /// schema atom into both sides.
    pub fn instantiate(self, atom: Option<&str>, terms: &[Term]) -> Result<(Term, Term)> {
        let vars = self.metavars();
        if terms.len() != vars.len() {
            return Err(Error::InvalidArg(format!(
                "axiom {self} takes {} instance terms, got {}",
                vars.len(),
                terms.len()
            )));
        }
        let (lhs, rhs) = self.schema(atom)?;
        let map: HashMap<String, Term> = vars
            .iter()
            .map(|v| v.to_string())
            .zip(terms.iter().cloned())
            .collect();
        Ok((lhs.substitute(&map), rhs.substitute(&map)))
    }
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            AxiomId::Cp1 => "CP1",
            AxiomId::Cp2 => "CP2",
            AxiomId::Cp3 => "CP3",
            AxiomId::Cp4 => "CP4",
            AxiomId::CpRp1 => "CPrp1",
            AxiomId::CpRp2 => "CPrp2",
            AxiomId::CpCr1 => "CPcr1",
            AxiomId::CpCr2 => "CPcr2",
            AxiomId::CpStat => "CPstat",
            AxiomId::CpContr => "CPcontr",
            AxiomId::Cp5 => "CP5",
        };
        f.write_str(s)
    }
}

/// The four axiomatizations whose independence structure is established by
/// countermodels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AxiomSet {
    Cp,
    CpRp,
    CpCr,
    CpSt,
}

impl AxiomSet {
    pub fn parse(s: &str) -> Result<AxiomSet> {
        match s.to_ascii_lowercase().as_str() {
            "cp" => Ok(AxiomSet::Cp),
            "cprp" => Ok(AxiomSet::CpRp),
            "cpcr" => Ok(AxiomSet::CpCr),
            "cpst" => Ok(AxiomSet::CpSt),
            _ => Err(Error::InvalidArg(format!(
                "unknown axiom set `{s}` (expected cp, cprp, cpcr, or cpst)"
            ))),
        }
    }

    pub fn axioms(self) -> &'static [AxiomId] {
        use AxiomId::*;
        match self {
            AxiomSet::Cp => &[Cp1, Cp2, Cp3, Cp4],
            AxiomSet::CpRp => &[Cp1, Cp2, Cp3, Cp4, CpRp1, CpRp2],
            AxiomSet::CpCr => &[Cp1, Cp2, Cp3, Cp4, CpCr1, CpCr2],
            AxiomSet::CpSt => &[Cp1, Cp2, Cp3, Cp4, CpStat, CpContr],
        }
    }
}

impl fmt::Display for AxiomSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            AxiomSet::Cp => "CP",
            AxiomSet::CpRp => "CPrp",
            AxiomSet::CpCr => "CPcr",
            AxiomSet::CpSt => "CPst",
        };
        f.write_str(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rewrite::prove_equal_cp;

    #[test]
    fn core_schemas_are_provable_by_rewriting() {
        for ax in [AxiomId::Cp1, AxiomId::Cp2, AxiomId::Cp3, AxiomId::Cp4] {
            let (l, r) = ax.schema(None).unwrap();
            assert!(prove_equal_cp(&l, &r), "{ax}");
        }
    }

    #[test]
    fn schema_atom_handling() {
        assert!(AxiomId::CpRp1.schema(None).is_err());
        assert!(AxiomId::Cp1.schema(Some("a")).is_err());
        let (l, _) = AxiomId::CpCr1.schema(Some("a")).unwrap();
        assert_eq!(l.atoms().len(), 1);
        let (l, r) = AxiomId::Cp5
            .instantiate(None, &vec![Term::True; 6])
            .unwrap();
        assert!(l.is_closed() && r.is_closed());
    }

    #[test]
    fn set_contents() {
        assert_eq!(AxiomSet::Cp.axioms().len(), 4);
        assert_eq!(AxiomSet::CpRp.axioms().len(), 6);
        assert!(AxiomSet::CpSt.axioms().contains(&AxiomId::CpContr));
    }
}
