//! Executable reactive-valuation semantics.
//!
//! A valuation state is identified with its canonical evaluation history:
//! the sequence of atoms consulted so far, normalized by the laws of the
//! valuation variety (e.g. contractive valuations collapse adjacent
//! repeats, static ones forget the history entirely). A [`Valuation`] is a
//! finite table assigning every atom a truth value at every canonical
//! history up to a depth bound; evaluating a term threads the history
//! through the antecedents it visits.
//!
//! Quantification over "all valuations" is done two ways: explicit tables
//! (random or exhaustively enumerated, used by the law checker and the
//! CLI), and an exact symbolic exploration that branches on each table cell
//! a pair of terms actually reads. The latter is a complete case analysis
//! of every lawful valuation restricted to the cells that matter, and backs
//! the congruence oracle.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::axioms::AxiomId;
use crate::error::{Error, Result};
use crate::forms::Variety;
use crate::gen::random_closed_term_bounded;
use crate::term::{Alphabet, Term};

/// An evaluation history: the atoms consulted so far, oldest first.
pub type History = Vec<String>;

/// Valuation varieties with an executable constraint model. The first five
/// are the named classes; the rest are the one-sided and instance-based
/// classes used as countermodels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SemVariety {
    Free,
    Rp,
    Cr,
    St,
    Nr,
    Rp1,
    Rp2,
    Cr1,
    Cr2,
    StatCounter,
}

impl SemVariety {
    pub fn parse(s: &str) -> Result<SemVariety> {
        match s.to_ascii_lowercase().as_str() {
            "free" | "fr" => Ok(SemVariety::Free),
            "rp" => Ok(SemVariety::Rp),
            "cr" => Ok(SemVariety::Cr),
            "st" => Ok(SemVariety::St),
            "nr" => Ok(SemVariety::Nr),
            "rp1" => Ok(SemVariety::Rp1),
            "rp2" => Ok(SemVariety::Rp2),
            "cr1" => Ok(SemVariety::Cr1),
            "cr2" => Ok(SemVariety::Cr2),
            "statcounter" => Ok(SemVariety::StatCounter),
            _ => Err(Error::InvalidArg(format!("unknown valuation variety `{s}`"))),
        }
    }

    /// Canonical representative of a history under the variety's
    /// derivative laws.
    pub fn canonicalize(self, h: &[String]) -> History {
        match self {
            SemVariety::Free | SemVariety::Rp | SemVariety::Rp1 | SemVariety::Rp2 => h.to_vec(),
            SemVariety::Cr | SemVariety::Cr1 | SemVariety::Cr2 | SemVariety::StatCounter => {
                let mut out: History = Vec::with_capacity(h.len());
                for a in h {
                    if out.last() != Some(a) {
                        out.push(a.clone());
                    }
                }
                out
            }
            SemVariety::St => Vec::new(),
            SemVariety::Nr => {
                let mut out: History = Vec::new();
                for a in h {
                    if !out.contains(a) {
                        out.push(a.clone());
                    }
                }
                out
            }
        }
    }

    /// `canonicalize(h ++ [a])` for already-canonical `h`.
    pub fn derive(self, h: &[String], a: &str) -> History {
        match self {
            SemVariety::Free | SemVariety::Rp | SemVariety::Rp1 | SemVariety::Rp2 => {
                let mut out = h.to_vec();
                out.push(a.to_string());
                out
            }
            SemVariety::Cr | SemVariety::Cr1 | SemVariety::Cr2 | SemVariety::StatCounter => {
                if h.last().map(String::as_str) == Some(a) {
                    h.to_vec()
                } else {
                    let mut out = h.to_vec();
                    out.push(a.to_string());
                    out
                }
            }
            SemVariety::St => Vec::new(),
            SemVariety::Nr => {
                if h.iter().any(|x| x == a) {
                    h.to_vec()
                } else {
                    let mut out = h.to_vec();
                    out.push(a.to_string());
                    out
                }
            }
        }
    }

    /// Whether the variety's yield constraints are plain equalities between
    /// cells (as opposed to one-directional implications).
    fn has_cell_classes(self) -> bool {
        !matches!(
            self,
            SemVariety::Rp1 | SemVariety::Rp2 | SemVariety::Cr1 | SemVariety::Cr2
        )
    }
}

impl From<Variety> for SemVariety {
    fn from(v: Variety) -> SemVariety {
        match v {
            Variety::Fr => SemVariety::Free,
            Variety::Rp => SemVariety::Rp,
            Variety::Cr => SemVariety::Cr,
            Variety::St => SemVariety::St,
        }
    }
}

impl fmt::Display for SemVariety {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SemVariety::Free => "free",
            SemVariety::Rp => "rp",
            SemVariety::Cr => "cr",
            SemVariety::St => "st",
            SemVariety::Nr => "nr",
            SemVariety::Rp1 => "rp1",
            SemVariety::Rp2 => "rp2",
            SemVariety::Cr1 => "cr1",
            SemVariety::Cr2 => "cr2",
            SemVariety::StatCounter => "statcounter",
        };
        f.write_str(s)
    }
}

/// One table cell: the yield of `atom` at `history`.
pub type Cell = (History, String);

/// Representative cell under the variety's equality constraints: all cells
/// forced equal to the given one map to the same key.
fn rep_cell(variety: SemVariety, h: &[String], atom: &str) -> Cell {
    match variety {
        SemVariety::Free | SemVariety::Rp1 | SemVariety::Rp2 | SemVariety::Cr1 | SemVariety::Cr2 => {
            (h.to_vec(), atom.to_string())
        }
        // The yield of `a` is unchanged by evaluating `a`.
        SemVariety::Rp | SemVariety::Cr | SemVariety::StatCounter => {
            let mut h = h.to_vec();
            while h.last().map(String::as_str) == Some(atom) {
                h.pop();
            }
            (h, atom.to_string())
        }
        SemVariety::St => (Vec::new(), atom.to_string()),
        // Once an atom has been evaluated its yield is frozen at the value
        // it had just before that evaluation.
        SemVariety::Nr => match h.iter().position(|x| x == atom) {
            Some(i) => (h[..i].to_vec(), atom.to_string()),
            None => (h.to_vec(), atom.to_string()),
        },
    }
}

pub fn format_history(h: &[String]) -> String {
    if h.is_empty() {
        "eps".to_string()
    } else {
        h.join(".")
    }
}

pub fn format_cell(cell: &Cell) -> String {
    format!("{}@{}", cell.1, format_history(&cell.0))
}

/// Marker for the two constant valuations, which yield uniformly and never
/// change state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Special {
    ConstTrue,
    ConstFalse,
}

/// A finite evaluation-tree model of a reactive valuation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Valuation {
    variety: SemVariety,
    alphabet: Alphabet,
    depth: usize,
    special: Option<Special>,
    table: BTreeMap<History, BTreeMap<String, bool>>,
}

/// All canonical histories of length at most `depth`, shortest first, in a
/// fixed order.
fn canonical_histories(variety: SemVariety, alphabet: &Alphabet, depth: usize) -> Vec<History> {
    let mut out: Vec<History> = vec![Vec::new()];
    let mut frontier: Vec<History> = vec![Vec::new()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for h in &frontier {
            for a in alphabet.names() {
                let d = variety.derive(h, a);
                if d.len() == h.len() + 1 {
                    next.push(d);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    out
}

/// Value a cell must take given earlier table entries, or `None` if free.
fn forced_value(
    variety: SemVariety,
    table: &BTreeMap<History, BTreeMap<String, bool>>,
    h: &[String],
    atom: &str,
) -> Option<bool> {
    match variety {
        SemVariety::Free | SemVariety::St => None,
        SemVariety::Rp | SemVariety::Cr | SemVariety::StatCounter => {
            if h.last().map(String::as_str) == Some(atom) {
                Some(table[&h[..h.len() - 1].to_vec()][atom])
            } else {
                None
            }
        }
        SemVariety::Nr => {
            let i = h.iter().position(|x| x == atom)?;
            Some(table[&h[..i].to_vec()][atom])
        }
        SemVariety::Rp1 | SemVariety::Cr1 => {
            if h.last().map(String::as_str) == Some(atom)
                && !table[&h[..h.len() - 1].to_vec()][atom]
            {
                Some(false)
            } else {
                None
            }
        }
        SemVariety::Rp2 | SemVariety::Cr2 => {
            if h.last().map(String::as_str) == Some(atom) && table[&h[..h.len() - 1].to_vec()][atom]
            {
                Some(true)
            } else {
                None
            }
        }
    }
}

fn build_table(
    variety: SemVariety,
    alphabet: &Alphabet,
    depth: usize,
    fill: &mut dyn FnMut(&[String], &str) -> bool,
) -> BTreeMap<History, BTreeMap<String, bool>> {
    let mut table: BTreeMap<History, BTreeMap<String, bool>> = BTreeMap::new();
    for h in canonical_histories(variety, alphabet, depth) {
        let mut row = BTreeMap::new();
        for a in alphabet.names() {
            let v = forced_value(variety, &table, &h, a).unwrap_or_else(|| fill(&h, a));
            row.insert(a.clone(), v);
        }
        table.insert(h, row);
    }
    table
}

const TABLE_CELL_LIMIT: usize = 200_000;
const ENUMERATION_CELL_LIMIT: usize = 16;

impl Valuation {
    /// The valuation that yields true everywhere and never changes.
    pub fn const_true(alphabet: Alphabet) -> Valuation {
        Valuation {
            variety: SemVariety::Free,
            alphabet,
            depth: 0,
            special: Some(Special::ConstTrue),
            table: BTreeMap::new(),
        }
    }

    /// The valuation that yields false everywhere and never changes.
    pub fn const_false(alphabet: Alphabet) -> Valuation {
        Valuation {
            variety: SemVariety::Free,
            alphabet,
            depth: 0,
            special: Some(Special::ConstFalse),
            table: BTreeMap::new(),
        }
    }

    pub fn variety(&self) -> SemVariety {
        self.variety
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn is_special(&self) -> bool {
        self.special.is_some()
    }

    pub fn histories(&self) -> impl Iterator<Item = &History> {
        self.table.keys()
    }

    /// Builds a valuation from explicit `(history, atom) -> bool` entries;
    /// unlisted cells default to false. Entries must sit at canonical
    /// histories within depth, and the finished table must satisfy the
    /// variety's constraints.
    pub fn from_cells(
        variety: SemVariety,
        alphabet: Alphabet,
        depth: usize,
        entries: &[(History, String, bool)],
    ) -> Result<Valuation> {
        let table = build_table(variety, &alphabet, depth, &mut |_, _| false);
        let mut v = Valuation {
            variety,
            alphabet,
            depth,
            special: None,
            table,
        };
        for (h, a, val) in entries {
            if variety.canonicalize(h) != *h {
                return Err(Error::Valuation(format!(
                    "history `{}` is not canonical for variety {variety}",
                    format_history(h)
                )));
            }
            if h.len() > depth {
                return Err(Error::Valuation(format!(
                    "history `{}` exceeds depth {depth}",
                    format_history(h)
                )));
            }
            if !v.alphabet.contains(a) {
                return Err(Error::Valuation(format!("atom `{a}` not in the alphabet")));
            }
            v.table.get_mut(h).unwrap().insert(a.clone(), *val);
        }
        if let Some(msg) = v.constraint_violation() {
            return Err(Error::Valuation(msg));
        }
        Ok(v)
    }

    fn check_depth(&self, h: &[String]) -> Result<()> {
        if h.len() > self.depth {
            Err(Error::DepthExceeded {
                depth: self.depth,
                len: h.len(),
            })
        } else {
            Ok(())
        }
    }

    /// The yield of `atom` at (the canonical form of) `h`.
    pub fn yield_at(&self, h: &[String], atom: &str) -> Result<bool> {
        if let Some(s) = self.special {
            return Ok(s == Special::ConstTrue);
        }
        if !self.alphabet.contains(atom) {
            return Err(Error::Alphabet {
                atom: atom.to_string(),
                alphabet: self.alphabet.names().join(", "),
            });
        }
        let ch = self.variety.canonicalize(h);
        self.check_depth(&ch)?;
        Ok(self.table[&ch][atom])
    }

    /// The state after evaluating `atom` at `h`: the canonical form of
    /// `h ++ [atom]`. Identity for the constant valuations.
    pub fn derive_atom(&self, h: &[String], atom: &str) -> Result<History> {
        if self.special.is_some() {
            return Ok(h.to_vec());
        }
        let ch = self.variety.derive(&self.variety.canonicalize(h), atom);
        self.check_depth(&ch)?;
        Ok(ch)
    }

    /// Evaluates a closed term from state `h`, returning its truth value
    /// and the final state.
    pub fn eval_full(&self, t: &Term, h: &[String]) -> Result<(bool, History)> {
        t.require_closed()?;
        self.eval_rec(t, h)
    }

    fn eval_rec(&self, t: &Term, h: &[String]) -> Result<(bool, History)> {
        match t {
            Term::True => Ok((true, h.to_vec())),
            Term::False => Ok((false, h.to_vec())),
            Term::Atom(a) => Ok((self.yield_at(h, a)?, self.derive_atom(h, a)?)),
            Term::Cond(l, c, r) => {
                let (cv, h1) = self.eval_rec(c, h)?;
                if cv {
                    self.eval_rec(l, &h1)
                } else {
                    self.eval_rec(r, &h1)
                }
            }
            Term::Var(v) => Err(Error::OpenTerm(v.clone())),
        }
    }

    /// The truth value of a closed term at state `h`.
    pub fn eval(&self, t: &Term, h: &[String]) -> Result<bool> {
        Ok(self.eval_full(t, h)?.0)
    }

    /// The state after evaluating a closed term from `h`.
    pub fn derivative(&self, t: &Term, h: &[String]) -> Result<History> {
        Ok(self.eval_full(t, h)?.1)
    }

    fn constraint_violation(&self) -> Option<String> {
        if self.special.is_some() {
            return None;
        }
        for (h, row) in &self.table {
            for a in self.alphabet.names() {
                let here = row[a];
                let next = self.variety.derive(h, a);
                let next_val = if next == *h {
                    Some(here)
                } else {
                    self.table.get(&next).map(|r| r[a])
                };
                let bad = match self.variety {
                    SemVariety::Free | SemVariety::St => false,
                    SemVariety::Rp | SemVariety::Cr | SemVariety::StatCounter | SemVariety::Nr => {
                        // For nr the same step-local rule suffices: the
                        // first evaluation freezes the yield, and deeper
                        // occurrences are handled by canonicalization.
                        matches!(next_val, Some(nv) if nv != here)
                    }
                    SemVariety::Rp1 | SemVariety::Cr1 => {
                        !here && matches!(next_val, Some(true))
                    }
                    SemVariety::Rp2 | SemVariety::Cr2 => {
                        here && matches!(next_val, Some(false))
                    }
                };
                if bad {
                    return Some(format!(
                        "yield of `{a}` at `{}` breaks the {} law",
                        format_history(h),
                        self.variety
                    ));
                }
            }
        }
        // Yield constraints that look across an interleaved atom (nr).
        if self.variety == SemVariety::Nr {
            for h in self.table.keys() {
                for (i, a) in h.iter().enumerate() {
                    if self.table[h][a] != self.table[&h[..i].to_vec()][a] {
                        return Some(format!(
                            "yield of `{a}` at `{}` differs from its pre-evaluation value",
                            format_history(h)
                        ));
                    }
                }
            }
        }
        None
    }

    /// Verifies the variety's constraint equations over the whole table.
    pub fn check_constraints(&self) -> bool {
        self.constraint_violation().is_none()
    }

    /// Instance check used for the contraction-of-evaluations variety:
    /// `Q / d_Q(H) = Q / H` for this particular closed `Q`, at every table
    /// state where both evaluations stay within depth.
    pub fn check_instance_law(&self, q: &Term) -> Result<bool> {
        q.require_closed()?;
        let histories: Vec<History> = self.histories().cloned().collect();
        for h in histories {
            let Ok((v1, h1)) = self.eval_full(q, &h) else {
                continue;
            };
            let Ok((v2, _)) = self.eval_full(q, &h1) else {
                continue;
            };
            if v1 != v2 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Line-oriented serialization; the inverse of [`parse_valuation`].
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("variety {}\n", self.variety));
        out.push_str(&format!("alphabet {}\n", self.alphabet.names().join(" ")));
        out.push_str(&format!("depth {}\n", self.depth));
        if self.special.is_some() {
            return out;
        }
        for h in canonical_histories(self.variety, &self.alphabet, self.depth) {
            let row = &self.table[&h];
            let cells: Vec<String> = self
                .alphabet
                .names()
                .iter()
                .map(|a| format!("{a}={}", u8::from(row[a])))
                .collect();
            out.push_str(&format!("@{} : {}\n", format_history(&h), cells.join(" ")));
        }
        out
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Parses the valuation text format: a `variety`/`alphabet`/`depth` header
/// followed by `@<history> : a=0 b=1 ...` lines. Unlisted cells are false;
/// constraint violations are load errors.
pub fn parse_valuation(text: &str) -> Result<Valuation> {
    let mut variety = None;
    let mut alphabet: Option<Alphabet> = None;
    let mut depth = None;
    let mut entries: Vec<(History, String, bool)> = Vec::new();
    let bad = |msg: String| Error::Valuation(msg);
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("variety ") {
            variety = Some(SemVariety::parse(rest.trim())?);
        } else if let Some(rest) = line.strip_prefix("alphabet ") {
            alphabet = Some(Alphabet::new(rest.split_whitespace())?);
        } else if let Some(rest) = line.strip_prefix("depth ") {
            depth = Some(
                rest.trim()
                    .parse::<usize>()
                    .map_err(|e| bad(format!("bad depth: {e}")))?,
            );
        } else if let Some(rest) = line.strip_prefix('@') {
            let (h_part, cells_part) = rest
                .split_once(':')
                .ok_or_else(|| bad(format!("missing `:` in entry `{line}`")))?;
            let h_part = h_part.trim();
            let history: History = if h_part == "eps" {
                Vec::new()
            } else {
                h_part.split('.').map(str::to_string).collect()
            };
            for cell in cells_part.split_whitespace() {
                let (atom, val) = cell
                    .split_once('=')
                    .ok_or_else(|| bad(format!("bad cell `{cell}`")))?;
                let val = match val {
                    "0" => false,
                    "1" => true,
                    _ => return Err(bad(format!("bad value `{val}` (expected 0 or 1)"))),
                };
                entries.push((history.clone(), atom.to_string(), val));
            }
        } else {
            return Err(bad(format!("unrecognized line `{line}`")));
        }
    }
    let variety = variety.ok_or_else(|| bad("missing `variety` header".into()))?;
    let alphabet = alphabet.ok_or_else(|| bad("missing `alphabet` header".into()))?;
    let depth = depth.ok_or_else(|| bad("missing `depth` header".into()))?;
    Valuation::from_cells(variety, alphabet, depth, &entries)
}

/// Seeded random lawful valuation: free cells are drawn i.i.d., forced
/// cells are propagated.
pub fn random_valuation(
    variety: SemVariety,
    alphabet: &Alphabet,
    depth: usize,
    seed: u64,
) -> Result<Valuation> {
    let histories = canonical_histories(variety, alphabet, depth);
    if histories.len() * alphabet.len() > TABLE_CELL_LIMIT {
        return Err(Error::SizeGuard(format!(
            "valuation table would hold {} cells (limit {TABLE_CELL_LIMIT})",
            histories.len() * alphabet.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let table = build_table(variety, alphabet, depth, &mut |_, _| rng.gen_bool(0.5));
    Ok(Valuation {
        variety,
        alphabet: alphabet.clone(),
        depth,
        special: None,
        table,
    })
}

/// Every lawful valuation table, exactly once. Guarded to small alphabets
/// and depths; prefer the symbolic oracle for anything larger.
pub fn enumerate_valuations(
    variety: SemVariety,
    alphabet: &Alphabet,
    depth: usize,
) -> Result<Vec<Valuation>> {
    if alphabet.len() > 2 || depth > 3 {
        return Err(Error::SizeGuard(format!(
            "valuation enumeration allows at most 2 atoms and depth 3 (got {} atoms, depth {depth})",
            alphabet.len()
        )));
    }
    let histories = canonical_histories(variety, alphabet, depth);
    let cells: Vec<(History, String)> = histories
        .iter()
        .flat_map(|h| alphabet.names().iter().map(|a| (h.clone(), a.clone())))
        .collect();
    if cells.len() > ENUMERATION_CELL_LIMIT {
        return Err(Error::SizeGuard(format!(
            "valuation enumeration over {} cells (limit {ENUMERATION_CELL_LIMIT})",
            cells.len()
        )));
    }
    let mut out = Vec::new();
    let mut table: BTreeMap<History, BTreeMap<String, bool>> = BTreeMap::new();
    fn rec(
        variety: SemVariety,
        alphabet: &Alphabet,
        depth: usize,
        cells: &[(History, String)],
        i: usize,
        table: &mut BTreeMap<History, BTreeMap<String, bool>>,
        out: &mut Vec<Valuation>,
    ) {
        if i == cells.len() {
            out.push(Valuation {
                variety,
                alphabet: alphabet.clone(),
                depth,
                special: None,
                table: table.clone(),
            });
            return;
        }
        let (h, a) = &cells[i];
        table.entry(h.clone()).or_default();
        let choices: Vec<bool> = match forced_value(variety, table, h, a) {
            Some(v) => vec![v],
            None => vec![false, true],
        };
        for v in choices {
            table.get_mut(h).unwrap().insert(a.clone(), v);
            rec(variety, alphabet, depth, cells, i + 1, table, out);
        }
        table.get_mut(h).unwrap().remove(a);
    }
    rec(variety, alphabet, depth, &cells, 0, &mut table, &mut out);
    Ok(out)
}

// ---------------------------------------------------------------------------
// Symbolic (branching) evaluation over the cells a set of terms reads.

struct Explorer<'a> {
    variety: SemVariety,
    sides: Vec<&'a Term>,
    cells: BTreeMap<Cell, bool>,
}

type NeedCell = Cell;

/// Callback invoked once per fully explored branch with the cell
/// assignment and each side's `(value, final state)`. Returning false
/// stops the exploration.
type BranchVisitor<'v> = dyn FnMut(&BTreeMap<Cell, bool>, &[(bool, History)]) -> bool + 'v;

impl Explorer<'_> {
    fn lookup(&self, h: &[String], atom: &str) -> std::result::Result<bool, NeedCell> {
        let key = rep_cell(self.variety, h, atom);
        if let Some(v) = self.cells.get(&key) {
            return Ok(*v);
        }
        if let Some(v) = self.conditional_forcing(h, atom) {
            return Ok(v);
        }
        Err(key)
    }

    // One-sided yield laws: a false (rp1/cr1) or true (rp2/cr2) yield
    // persists across evaluations of the same atom. The predecessor cell
    // has always been read already, because reaching the longer history
    // required evaluating the atom there.
    fn conditional_forcing(&self, h: &[String], atom: &str) -> Option<bool> {
        if self.variety.has_cell_classes() {
            return None;
        }
        if h.last().map(String::as_str) != Some(atom) {
            return None;
        }
        let pred = &h[..h.len() - 1];
        let pred_val = match self.cells.get(&rep_cell(self.variety, pred, atom)) {
            Some(v) => *v,
            None => self.conditional_forcing(pred, atom)?,
        };
        match self.variety {
            SemVariety::Rp1 | SemVariety::Cr1 if !pred_val => Some(false),
            SemVariety::Rp2 | SemVariety::Cr2 if pred_val => Some(true),
            _ => None,
        }
    }

    fn eval_sym(&self, t: &Term, h: &[String]) -> std::result::Result<(bool, History), NeedCell> {
        match t {
            Term::True => Ok((true, h.to_vec())),
            Term::False => Ok((false, h.to_vec())),
            Term::Atom(a) => Ok((self.lookup(h, a)?, self.variety.derive(h, a))),
            Term::Cond(l, c, r) => {
                let (cv, h1) = self.eval_sym(c, h)?;
                if cv {
                    self.eval_sym(l, &h1)
                } else {
                    self.eval_sym(r, &h1)
                }
            }
            Term::Var(_) => unreachable!("explorer inputs are closed"),
        }
    }

    /// Visits every complete branch. `visit` returns false to stop early.
    fn run(&mut self, visit: &mut BranchVisitor) -> bool {
        let mut results = Vec::with_capacity(self.sides.len());
        for i in 0..self.sides.len() {
            let t = self.sides[i];
            match self.eval_sym(t, &[]) {
                Ok(res) => results.push(res),
                Err(cell) => {
                    for v in [false, true] {
                        self.cells.insert(cell.clone(), v);
                        let keep_going = self.run(visit);
                        self.cells.remove(&cell);
                        if !keep_going {
                            return false;
                        }
                    }
                    return true;
                }
            }
        }
        visit(&self.cells, &results)
    }
}

fn oracle_variety(variety: SemVariety) -> Result<()> {
    match variety {
        SemVariety::Free | SemVariety::Rp | SemVariety::Cr | SemVariety::St => Ok(()),
        _ => Err(Error::InvalidArg(format!(
            "the congruence oracle covers the free, rp, cr, and st varieties, not {variety}"
        ))),
    }
}

/// Final valuation states are compared as observations, not raw histories:
/// static valuations carry no state, and over a one-atom alphabet the
/// repetition-proof law makes any trailing evaluations of that atom
/// invisible to every later yield.
fn states_agree(variety: SemVariety, alphabet: &Alphabet, h1: &[String], h2: &[String]) -> bool {
    match variety {
        SemVariety::St => true,
        SemVariety::Rp | SemVariety::Cr if alphabet.len() == 1 => true,
        _ => h1 == h2,
    }
}

/// `P/H = Q/H` for every lawful valuation of the variety, from the empty
/// history. Exact: the exploration covers each assignment of the cells the
/// two terms can read.
pub fn equivalent(variety: SemVariety, p: &Term, q: &Term, alphabet: &Alphabet) -> Result<bool> {
    oracle_variety(variety)?;
    p.require_closed()?;
    q.require_closed()?;
    alphabet.check_term(p)?;
    alphabet.check_term(q)?;
    let mut ex = Explorer {
        variety,
        sides: vec![p, q],
        cells: BTreeMap::new(),
    };
    let mut ok = true;
    ex.run(&mut |_, results| {
        ok = results[0].0 == results[1].0;
        ok
    });
    Ok(ok)
}

/// The brute-force congruence decision: equivalence plus equality of the
/// final valuation states on every lawful valuation.
pub fn congruent_oracle(
    variety: SemVariety,
    p: &Term,
    q: &Term,
    alphabet: &Alphabet,
) -> Result<bool> {
    oracle_variety(variety)?;
    p.require_closed()?;
    q.require_closed()?;
    alphabet.check_term(p)?;
    alphabet.check_term(q)?;
    let mut ex = Explorer {
        variety,
        sides: vec![p, q],
        cells: BTreeMap::new(),
    };
    let mut ok = true;
    ex.run(&mut |_, results| {
        let (pv, ph) = &results[0];
        let (qv, qh) = &results[1];
        ok = pv == qv && states_agree(variety, alphabet, ph, qh);
        ok
    });
    Ok(ok)
}

/// A rendered truth table: one column per relevant cell, one row per
/// assignment, in lexicographic order (false before true, first column most
/// significant).
pub struct TruthTable {
    pub columns: Vec<Cell>,
    pub rows: Vec<(Vec<bool>, bool)>,
}

/// Enumerates the cells a closed term can read under the variety and
/// tabulates its value under every assignment of those cells.
pub fn truth_table(
    variety: SemVariety,
    alphabet: &Alphabet,
    term: &Term,
    max_cells: usize,
) -> Result<TruthTable> {
    if !variety.has_cell_classes() {
        return Err(Error::InvalidArg(format!(
            "truth tables are supported for varieties with unconditional laws, not {variety}"
        )));
    }
    term.require_closed()?;
    alphabet.check_term(term)?;
    let mut ex = Explorer {
        variety,
        sides: vec![term],
        cells: BTreeMap::new(),
    };
    let mut columns: std::collections::BTreeSet<Cell> = Default::default();
    ex.run(&mut |cells, _| {
        columns.extend(cells.keys().cloned());
        true
    });
    let mut columns: Vec<Cell> = columns.into_iter().collect();
    columns.sort_by_key(|(h, a)| {
        (
            h.len(),
            h.clone(),
            alphabet.index_of(a).unwrap_or(usize::MAX),
        )
    });
    if columns.len() > max_cells {
        return Err(Error::SizeGuard(format!(
            "truth table over {} cells (limit {max_cells})",
            columns.len()
        )));
    }
    let n = columns.len();
    let mut rows = Vec::with_capacity(1 << n);
    for bits in 0u64..(1u64 << n) {
        let mut assignment: BTreeMap<Cell, bool> = BTreeMap::new();
        let mut values = Vec::with_capacity(n);
        for (j, cell) in columns.iter().enumerate() {
            let v = bits >> (n - 1 - j) & 1 == 1;
            assignment.insert(cell.clone(), v);
            values.push(v);
        }
        let ex = Explorer {
            variety,
            sides: vec![],
            cells: assignment,
        };
        let (value, _) = ex
            .eval_sym(term, &[])
            .expect("column set covers every readable cell");
        rows.push((values, value));
    }
    Ok(TruthTable { columns, rows })
}

// ---------------------------------------------------------------------------
// Axiom soundness checking.

/// Outcome of an axiom-soundness check.
#[derive(Debug, Clone)]
pub enum SoundnessOutcome {
    Holds,
    Counterexample(Counterexample),
}

impl SoundnessOutcome {
    pub fn holds(&self) -> bool {
        matches!(self, SoundnessOutcome::Holds)
    }
}

/// A failing instance: both sides, a lawful valuation on which they differ,
/// and what each side produced from the empty history.
#[derive(Debug, Clone)]
pub struct Counterexample {
    pub lhs: Term,
    pub rhs: Term,
    pub valuation: Valuation,
    pub lhs_result: (bool, History),
    pub rhs_result: (bool, History),
}

fn cells_to_valuation(
    variety: SemVariety,
    alphabet: &Alphabet,
    cells: &BTreeMap<Cell, bool>,
    min_depth: usize,
) -> Valuation {
    let depth = cells
        .keys()
        .map(|(h, _)| h.len() + 1)
        .chain([min_depth])
        .max()
        .unwrap_or(min_depth);
    let table = build_table(variety, alphabet, depth, &mut |h, a| {
        cells
            .get(&rep_cell(variety, h, a))
            .copied()
            .unwrap_or(false)
    });
    Valuation {
        variety,
        alphabet: alphabet.clone(),
        depth,
        special: None,
        table,
    }
}

/// Checks one instance equation exhaustively over the variety's lawful
/// valuations (restricted to the cells the instance reads), comparing both
/// truth values and final states.
fn instance_sound(
    variety: SemVariety,
    alphabet: &Alphabet,
    lhs: &Term,
    rhs: &Term,
) -> Option<Counterexample> {
    let mut ex = Explorer {
        variety,
        sides: vec![lhs, rhs],
        cells: BTreeMap::new(),
    };
    let mut found: Option<Counterexample> = None;
    ex.run(&mut |cells, results| {
        let (lv, lh) = &results[0];
        let (rv, rh) = &results[1];
        if lv != rv || lh != rh {
            // Deep enough to replay both evaluations against the table.
            let depth = lhs
                .atom_occurrences()
                .max(rhs.atom_occurrences())
                .max(lh.len())
                .max(rh.len());
            found = Some(Counterexample {
                lhs: lhs.clone(),
                rhs: rhs.clone(),
                valuation: cells_to_valuation(variety, alphabet, cells, depth),
                lhs_result: (*lv, lh.clone()),
                rhs_result: (*rv, rh.clone()),
            });
            return false;
        }
        true
    });
    found
}

// Yield-only check against one fixed valuation, from every stored state
// with enough headroom. Used for the instance-constrained variety whose
// lawful members cannot be enumerated.
fn instance_sound_on(valuation: &Valuation, lhs: &Term, rhs: &Term) -> Option<Counterexample> {
    let histories: Vec<History> = valuation.histories().cloned().collect();
    for h in histories {
        let (Ok(l), Ok(r)) = (valuation.eval_full(lhs, &h), valuation.eval_full(rhs, &h)) else {
            continue;
        };
        if l.0 != r.0 {
            return Some(Counterexample {
                lhs: lhs.clone(),
                rhs: rhs.clone(),
                valuation: valuation.clone(),
                lhs_result: l,
                rhs_result: r,
            });
        }
    }
    None
}

const INSTANCE_SIDE_ATOM_LIMIT: usize = 8;

// The minimal failing substitutions of the countermodel varieties, tried
// first so the reported counterexample is always the canonical one.
fn seed_substitution(variety: SemVariety, axiom: AxiomId) -> Option<Vec<Term>> {
    let subst: Vec<Term> = match (variety, axiom) {
        (SemVariety::Rp1, AxiomId::CpRp1) => vec![Term::True, Term::False, Term::False],
        (SemVariety::Rp2, AxiomId::CpRp2) => vec![Term::False, Term::True, Term::False],
        (SemVariety::Cr1, AxiomId::CpCr1) => vec![Term::True, Term::False, Term::True],
        (SemVariety::Cr2, AxiomId::CpCr2) => vec![Term::False, Term::True, Term::False],
        (SemVariety::StatCounter, AxiomId::CpStat) => vec![
            Term::False,
            Term::atom("a"),
            Term::True,
            Term::atom("b"),
            Term::False,
        ],
        _ => return None,
    };
    Some(subst)
}

/// Property check that an axiom schema is sound in a variety: substitutes
/// closed terms (and alphabet atoms for the schema atom), then verifies
/// value and state equality over the variety's valuations. A deterministic
/// sweep of constant substitutions runs first; `trials` seeded random
/// instances follow.
pub fn check_axiom_soundness(
    variety: SemVariety,
    axiom: AxiomId,
    alphabet: &Alphabet,
    trials: usize,
    seed: u64,
) -> Result<SoundnessOutcome> {
    let vars = axiom.metavars();

    // The instance-constrained variety cannot be explored cell by cell;
    // its checks run against the stored witness valuation instead (over
    // its own two-atom alphabet), and on truth values only, since its
    // derivative law is not a history law.
    let statcounter_base = if variety == SemVariety::StatCounter {
        Some(statcounter_witness().0)
    } else {
        None
    };
    let alphabet = match &statcounter_base {
        Some(v) => v.alphabet().clone(),
        None => alphabet.clone(),
    };
    let alphabet = &alphabet;
    let atoms: Vec<Option<String>> = if axiom.needs_schema_atom() {
        alphabet.names().iter().map(|a| Some(a.clone())).collect()
    } else {
        vec![None]
    };
    let check = |subst: &[Term], atom: Option<&str>| -> Result<Option<Counterexample>> {
        let (lhs, rhs) = axiom.instantiate(atom, subst)?;
        Ok(match &statcounter_base {
            Some(v) => instance_sound_on(v, &lhs, &rhs),
            None => instance_sound(variety, alphabet, &lhs, &rhs),
        })
    };

    let mut substitutions: Vec<Vec<Term>> = Vec::new();
    substitutions.extend(seed_substitution(variety, axiom));
    // Constant substitutions, T before F per slot.
    let consts = [Term::True, Term::False];
    for bits in 0..(1usize << vars.len()) {
        substitutions.push(
            (0..vars.len())
                .map(|i| consts[bits >> i & 1].clone())
                .collect(),
        );
    }
    for subst in &substitutions {
        for atom in &atoms {
            if let Some(ce) = check(subst, atom.as_deref())? {
                return Ok(SoundnessOutcome::Counterexample(ce));
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let atom = if axiom.needs_schema_atom() {
            Some(alphabet.names()[rng.gen_range(0..alphabet.len())].clone())
        } else {
            None
        };
        // Resample until the instance reads few enough cells to explore.
        let mut attempts = 0;
        let (lhs, rhs) = loop {
            let budget = if attempts < 10 { 2 } else { 0 };
            let subst: Vec<Term> = (0..vars.len())
                .map(|_| {
                    let atom_budget = rng.gen_range(0..=budget);
                    random_closed_term_bounded(&mut rng, alphabet, 7, atom_budget)
                })
                .collect();
            let (lhs, rhs) = axiom.instantiate(atom.as_deref(), &subst)?;
            if lhs.atom_occurrences().max(rhs.atom_occurrences()) <= INSTANCE_SIDE_ATOM_LIMIT {
                break (lhs, rhs);
            }
            attempts += 1;
        };
        let found = match &statcounter_base {
            Some(v) => instance_sound_on(v, &lhs, &rhs),
            None => instance_sound(variety, alphabet, &lhs, &rhs),
        };
        if let Some(ce) = found {
            return Ok(SoundnessOutcome::Counterexample(ce));
        }
    }
    Ok(SoundnessOutcome::Holds)
}

/// The explicit two-atom valuation witnessing that the permutation law
/// fails in the variety constrained only by contraction of evaluations,
/// together with the failing instance (left evaluates to false, right to
/// true). The table yields true for `b` everywhere and true for `a` exactly
/// at histories that start with `b`.
pub fn statcounter_witness() -> (Valuation, (Term, Term)) {
    let alphabet = Alphabet::new(["a", "b"]).unwrap();
    let depth = 8;
    let table = build_table(SemVariety::StatCounter, &alphabet, depth, &mut |h, a| {
        match a {
            "b" => true,
            _ => h.first().map(String::as_str) == Some("b"),
        }
    });
    let valuation = Valuation {
        variety: SemVariety::StatCounter,
        alphabet,
        depth,
        special: None,
        table,
    };
    let a = || Term::atom("a");
    let b = || Term::atom("b");
    let lhs = Term::cond(Term::cond(Term::False, a(), Term::True), b(), Term::False);
    let rhs = Term::cond(
        Term::cond(Term::False, b(), Term::False),
        a(),
        Term::cond(Term::True, b(), Term::False),
    );
    (valuation, (lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_term;

    fn t(s: &str) -> Term {
        parse_term(s, None).unwrap()
    }
    fn hist(parts: &[&str]) -> History {
        parts.iter().map(|s| s.to_string()).collect()
    }
    fn ab() -> Alphabet {
        Alphabet::new(["a", "b"]).unwrap()
    }

    #[test]
    fn canonicalization() {
        assert_eq!(
            SemVariety::Cr.canonicalize(&hist(&["a", "a", "b", "b", "b", "a"])),
            hist(&["a", "b", "a"])
        );
        assert_eq!(SemVariety::St.canonicalize(&hist(&["a", "b", "a"])), hist(&[]));
        assert_eq!(
            SemVariety::Nr.canonicalize(&hist(&["a", "b", "a", "c", "b"])),
            hist(&["a", "b", "c"])
        );
        assert_eq!(
            SemVariety::Rp.canonicalize(&hist(&["a", "a"])),
            hist(&["a", "a"])
        );
    }

    #[test]
    fn constant_valuations() {
        let v = Valuation::const_true(ab());
        assert!(v.yield_at(&hist(&["a", "b"]), "a").unwrap());
        assert_eq!(v.derive_atom(&hist(&["b"]), "a").unwrap(), hist(&["b"]));
        let f = Valuation::const_false(ab());
        assert!(!f.yield_at(&[], "b").unwrap());
        // The constant valuations are lawful members of every variety.
        assert!(v.check_constraints());
        assert!(f.check_constraints());
    }

    #[test]
    fn table_lookup_and_depth() {
        let v = Valuation::from_cells(
            SemVariety::Free,
            Alphabet::new(["a"]).unwrap(),
            1,
            &[(hist(&[]), "a".into(), true)],
        )
        .unwrap();
        assert!(v.yield_at(&[], "a").unwrap());
        assert!(!v.yield_at(&hist(&["a"]), "a").unwrap());
        assert_eq!(v.derive_atom(&[], "a").unwrap(), hist(&["a"]));
        assert!(matches!(
            v.derive_atom(&hist(&["a"]), "a"),
            Err(Error::DepthExceeded { .. })
        ));
    }

    #[test]
    fn derive_respects_variety() {
        let cr = random_valuation(SemVariety::Cr, &ab(), 3, 1).unwrap();
        assert_eq!(cr.derive_atom(&hist(&["a"]), "a").unwrap(), hist(&["a"]));
        let free = random_valuation(SemVariety::Free, &ab(), 3, 1).unwrap();
        assert_eq!(free.derive_atom(&[], "a").unwrap(), hist(&["a"]));
    }

    #[test]
    fn evaluation_examples() {
        // Antecedent true but the re-read of `a` after its own evaluation
        // comes out false.
        let v = Valuation::from_cells(
            SemVariety::Free,
            ab(),
            2,
            &[
                (hist(&[]), "a".into(), true),
                (hist(&["a"]), "a".into(), false),
                (hist(&["a"]), "b".into(), true),
            ],
        )
        .unwrap();
        assert!(!v.eval(&t("a <| a |> b"), &[]).unwrap());
        assert!(matches!(v.eval(&t("c"), &[]), Err(Error::Alphabet { .. })));
        assert!(matches!(v.eval(&t("X"), &[]), Err(Error::OpenTerm(_))));
        assert_eq!(v.derivative(&t("T <| a |> F"), &[]).unwrap(), hist(&["a"]));

        // A constant antecedent leaves the state alone, so the inner
        // conditional re-reads `a` after its evaluation.
        let w = Valuation::from_cells(
            SemVariety::Free,
            ab(),
            2,
            &[
                (hist(&[]), "a".into(), true),
                (hist(&["a"]), "a".into(), true),
            ],
        )
        .unwrap();
        assert!(w.eval(&t("(a <| T |> b) <| a |> c"), &[]).unwrap());
        assert_eq!(
            w.derivative(&t("(a <| T |> b) <| a |> c"), &[]).unwrap(),
            hist(&["a", "a"])
        );
    }

    #[test]
    fn constraint_checks() {
        // An rp table whose yield of `a` changes across its own evaluation
        // is rejected at load time.
        let rp_bad = Valuation::from_cells(
            SemVariety::Rp,
            Alphabet::new(["a"]).unwrap(),
            1,
            &[(hist(&[]), "a".into(), true)], // @a : a stays 0
        );
        assert!(matches!(rp_bad, Err(Error::Valuation(_))));
        let rp_good = Valuation::from_cells(
            SemVariety::Rp,
            Alphabet::new(["a"]).unwrap(),
            1,
            &[
                (hist(&[]), "a".into(), true),
                (hist(&["a"]), "a".into(), true),
            ],
        )
        .unwrap();
        assert!(rp_good.check_constraints());
    }

    #[test]
    fn enumeration_counts() {
        let a = Alphabet::new(["a"]).unwrap();
        assert_eq!(enumerate_valuations(SemVariety::St, &a, 3).unwrap().len(), 2);
        assert_eq!(enumerate_valuations(SemVariety::Free, &a, 1).unwrap().len(), 4);
        assert_eq!(enumerate_valuations(SemVariety::Rp, &a, 1).unwrap().len(), 2);
        // rp1 at depth 1: free root; false root forces the successor.
        assert_eq!(enumerate_valuations(SemVariety::Rp1, &a, 1).unwrap().len(), 3);
        assert!(enumerate_valuations(SemVariety::Free, &ab(), 3).is_err());
    }

    #[test]
    fn oracle_examples() {
        let faf = t("F <| a |> F");
        assert!(equivalent(SemVariety::Free, &faf, &Term::False, &ab()).unwrap());
        assert!(!congruent_oracle(SemVariety::Free, &faf, &Term::False, &ab()).unwrap());
        let a1 = Alphabet::new(["a"]).unwrap();
        assert!(congruent_oracle(SemVariety::St, &faf, &Term::False, &a1).unwrap());
        assert!(congruent_oracle(SemVariety::Free, &t("T <| a |> F"), &t("T <| a |> F"), &a1).unwrap());
        // One-atom rp collapses to the static decision.
        assert!(congruent_oracle(SemVariety::Rp, &t("T <| a |> T"), &Term::True, &a1).unwrap());
        assert!(!congruent_oracle(SemVariety::Rp, &t("T <| a |> T"), &Term::True, &ab()).unwrap());
    }

    #[test]
    fn soundness_spot_checks() {
        let ab = ab();
        assert!(check_axiom_soundness(SemVariety::Free, AxiomId::Cp4, &ab, 50, 3)
            .unwrap()
            .holds());
        assert!(check_axiom_soundness(SemVariety::Rp, AxiomId::CpRp1, &ab, 50, 3)
            .unwrap()
            .holds());
        match check_axiom_soundness(SemVariety::Rp1, AxiomId::CpRp1, &ab, 0, 0).unwrap() {
            SoundnessOutcome::Counterexample(ce) => {
                assert_eq!(ce.lhs, t("(T <| a |> F) <| a |> F"));
                assert_eq!(ce.rhs, t("(T <| a |> T) <| a |> F"));
                assert!(ce.valuation.yield_at(&[], "a").unwrap());
                assert!(!ce.valuation.yield_at(&hist(&["a"]), "a").unwrap());
                assert!(ce.valuation.check_constraints());
            }
            SoundnessOutcome::Holds => panic!("expected a counterexample"),
        }
        assert!(check_axiom_soundness(SemVariety::Rp1, AxiomId::CpRp2, &ab, 100, 5)
            .unwrap()
            .holds());
        assert!(check_axiom_soundness(SemVariety::Nr, AxiomId::Cp5, &ab, 100, 5)
            .unwrap()
            .holds());
    }

    #[test]
    fn statcounter_witness_behaves() {
        let (v, (lhs, rhs)) = statcounter_witness();
        assert!(!v.eval(&lhs, &[]).unwrap());
        assert!(v.eval(&rhs, &[]).unwrap());
        assert!(v.check_constraints());
        for q in [&lhs, &rhs, &t("F <| a |> T"), &Term::atom("a"), &Term::atom("b")] {
            assert!(v.check_instance_law(q).unwrap(), "law fails for {q}");
        }
    }

    #[test]
    fn valuation_round_trip() {
        let v = random_valuation(SemVariety::Cr, &ab(), 3, 9).unwrap();
        let text = v.render();
        let back = parse_valuation(&text).unwrap();
        assert_eq!(v, back);
        assert!(parse_valuation("variety rp\nalphabet a\ndepth 1\n@a : a=1\n").is_err());
    }

    #[test]
    fn valuation_parser_rejects_malformed_input() {
        let cases = [
            "alphabet a\ndepth 1\n",                            // missing variety
            "variety zz\nalphabet a\ndepth 1\n",                // unknown variety
            "variety free\nalphabet a\ndepth x\n",              // bad depth
            "variety free\nalphabet a\ndepth 1\n@eps a=1\n",    // missing colon
            "variety free\nalphabet a\ndepth 1\n@eps : a=2\n",  // bad value
            "variety free\nalphabet a\ndepth 1\n@eps : b=1\n",  // unknown atom
            "variety free\nalphabet a\ndepth 1\n@a.a.a : a=1\n", // beyond depth
            "variety cr\nalphabet a\ndepth 2\n@a.a : a=1\n",    // non-canonical history
            "variety free\nalphabet a\ndepth 1\nbogus line\n",
        ];
        for text in cases {
            assert!(parse_valuation(text).is_err(), "accepted: {text:?}");
        }
    }

    #[test]
    fn truth_table_matches_reactive_reading() {
        let tt = truth_table(SemVariety::Free, &ab(), &t("a <| a |> b"), 12).unwrap();
        assert_eq!(tt.columns.len(), 3);
        assert_eq!(tt.rows.len(), 8);
        // Row F,F,F -> F; row with a true antecedent and false re-read -> F.
        assert!(!tt.rows[0].1);
        let st = truth_table(SemVariety::St, &ab(), &t("b <| a |> b"), 12).unwrap();
        assert_eq!(st.columns.len(), 2);
        assert_eq!(st.rows.len(), 4);
    }
}
