//! Cohomology tables over log traits and Dedekind bases assembled from the
//! two-row Leray long exact sequences.

mod dedekind;
mod dvr;
mod les;
mod zhat;

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::coefficients::SymbolicModule;
use crate::error::{Error, Result};

pub use dedekind::{dedekind_calculator, DedekindReport};
pub use dvr::dvr_calculator;
pub use les::{leray_two_row, Leray};
pub use zhat::{zhat_cohomology, ZhatInput};

/// A term of a cohomology row: a symbolic module or an opaque symbol such
/// as `H^2_ét(X, F)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Term {
    Module(SymbolicModule),
    Opaque(String),
}

impl Term {
    pub fn zero() -> Self {
        Term::Module(SymbolicModule::zero())
    }

    /// Known to vanish; opaque symbols never are.
    pub fn is_zero(&self) -> bool {
        matches!(self, Term::Module(m) if m.is_zero())
    }

    pub fn order(&self) -> Option<BigInt> {
        match self {
            Term::Module(m) => m.order(),
            Term::Opaque(_) => None,
        }
    }

    pub fn module(&self) -> Option<&SymbolicModule> {
        match self {
            Term::Module(m) => Some(m),
            Term::Opaque(_) => None,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Module(m) => write!(f, "{m}"),
            Term::Opaque(s) => f.write_str(s),
        }
    }
}

impl From<SymbolicModule> for Term {
    fn from(m: SymbolicModule) -> Self {
        Term::Module(m)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tail {
    /// Every degree beyond the listed ones vanishes.
    Zero,
    Unknown,
}

/// Terms in degrees `0..=N` followed by a tail marker.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedModule {
    pub terms: Vec<Term>,
    pub tail: Tail,
}

impl GradedModule {
    pub fn new(terms: Vec<Term>, tail: Tail) -> Self {
        GradedModule { terms, tail }
    }

    pub fn from_modules(ms: Vec<SymbolicModule>) -> Self {
        Self::new(ms.into_iter().map(Term::Module).collect(), Tail::Zero)
    }

    pub fn zero() -> Self {
        Self::new(vec![], Tail::Zero)
    }

    /// Opaque symbols `name^i` for `i ≤ top` with an unknown tail.
    pub fn opaque(name: &str, top: usize) -> Self {
        let terms = (0..=top).map(|i| Term::Opaque(name.replace("{i}", &i.to_string()))).collect();
        Self::new(terms, Tail::Unknown)
    }

    /// The term in degree `i`; `None` when unknown. Negative degrees vanish.
    pub fn get(&self, i: i64) -> Option<Term> {
        if i < 0 {
            return Some(Term::zero());
        }
        match self.terms.get(i as usize) {
            Some(t) => Some(t.clone()),
            None if self.tail == Tail::Zero => Some(Term::zero()),
            None => None,
        }
    }

    /// Highest degree with a term that is not known to vanish.
    pub fn top(&self) -> Option<usize> {
        self.terms.iter().rposition(|t| !t.is_zero())
    }

    pub fn direct_sum(&self, other: &GradedModule) -> Result<GradedModule> {
        let n = self.terms.len().max(other.terms.len());
        let mut terms = Vec::with_capacity(n);
        for i in 0..n {
            let (a, b) = (self.get(i as i64), other.get(i as i64));
            terms.push(match (a, b) {
                (Some(Term::Module(x)), Some(Term::Module(y))) => Term::Module(x.direct_sum(&y)),
                (Some(x), Some(y)) if y.is_zero() => x,
                (Some(x), Some(y)) if x.is_zero() => y,
                _ => return Err(Error::MalformedRows("cannot add opaque or unknown terms".into())),
            });
        }
        let tail = if self.tail == Tail::Zero && other.tail == Tail::Zero { Tail::Zero } else { Tail::Unknown };
        Ok(GradedModule { terms, tail })
    }

    pub fn power(&self, k: usize) -> Result<GradedModule> {
        let mut out = GradedModule::zero();
        for _ in 0..k {
            out = out.direct_sum(self)?;
        }
        Ok(out)
    }
}

impl fmt::Display for GradedModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(|t| t.to_string()).collect();
        let tail = match self.tail {
            Tail::Zero => "0, …",
            Tail::Unknown => "?",
        };
        if parts.is_empty() {
            write!(f, "({tail})")
        } else {
            write!(f, "({}, {tail})", parts.join(", "))
        }
    }
}

/// `0 → sub → H → quot → 0`. When `connecting_known` is false the sequence
/// only bounds `H`: a quotient of `sub` below, a subgroup of `quot` above.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionProblem {
    pub degree: usize,
    pub sub: Term,
    pub quot: Term,
    pub connecting_known: bool,
}

impl ExtensionProblem {
    pub fn order(&self) -> Option<BigInt> {
        if !self.connecting_known {
            return None;
        }
        Some(self.sub.order()? * self.quot.order()?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableEntry {
    Module(SymbolicModule),
    Opaque(String),
    Extension(ExtensionProblem),
    /// A needed row term is unknown.
    Undetermined(String),
}

impl TableEntry {
    pub fn from_term(t: Term) -> Self {
        match t {
            Term::Module(m) => TableEntry::Module(m),
            Term::Opaque(s) => TableEntry::Opaque(s),
        }
    }

    pub fn module(&self) -> Option<&SymbolicModule> {
        match self {
            TableEntry::Module(m) => Some(m),
            _ => None,
        }
    }

    pub fn order(&self) -> Option<BigInt> {
        match self {
            TableEntry::Module(m) => m.order(),
            TableEntry::Extension(e) => e.order(),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, TableEntry::Module(m) if m.is_zero())
    }
}

impl fmt::Display for TableEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableEntry::Module(m) => write!(f, "{m}"),
            TableEntry::Opaque(s) => f.write_str(s),
            TableEntry::Extension(e) if e.connecting_known => write!(f, "ext({}, {})", e.quot, e.sub),
            TableEntry::Extension(e) if e.quot.is_zero() => write!(f, "quotient of {}", e.sub),
            TableEntry::Extension(e) if e.sub.is_zero() => write!(f, "subgroup of {}", e.quot),
            TableEntry::Extension(e) => write!(f, "[{} → · → {}]", e.sub, e.quot),
            TableEntry::Undetermined(why) => write!(f, "? ({why})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Computed,
    Paper,
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "computed" => Ok(Mode::Computed),
            "paper" => Ok(Mode::Paper),
            other => Err(Error::Invalid(format!("unknown mode {other:?}"))),
        }
    }
}

/// A term where the direct computation and the vanishing claim disagree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub degree: usize,
    pub term: String,
    pub computed: SymbolicModule,
    pub paper: SymbolicModule,
}

/// One slot of a long exact sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LesTerm {
    pub label: String,
    pub value: TableEntry,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyTable {
    pub entries: Vec<TableEntry>,
    /// Whether every degree past the listed ones vanishes.
    pub tail: Tail,
    pub mode: Mode,
    pub diagnostics: Vec<Discrepancy>,
    pub lower: GradedModule,
    pub upper: GradedModule,
    pub upper_degree: usize,
    pub sequence: Vec<LesTerm>,
}

impl CohomologyTable {
    pub fn entry(&self, i: usize) -> Option<&TableEntry> {
        self.entries.get(i)
    }

    /// Checks `Π |A_k|^{±1} = 1` over every zero-ended fragment of the long
    /// exact sequence whose terms all have known finite order. Returns the
    /// number of fragments checked.
    pub fn check_exactness(&self) -> Result<usize> {
        check_fragments(&self.sequence)
    }
}

/// Alternating order products over zero-ended finite fragments.
pub fn check_fragments(seq: &[LesTerm]) -> Result<usize> {
    let mut checked = 0;
    let mut frag: Vec<&LesTerm> = Vec::new();
    for t in seq.iter().map(Some).chain(std::iter::once(None)) {
        let zero = t.map_or(true, |t| t.value.is_zero());
        if zero {
            if !frag.is_empty() {
                let orders: Option<Vec<BigInt>> = frag.iter().map(|t| t.value.order()).collect();
                if let Some(orders) = orders {
                    let (mut num, mut den) = (BigInt::one(), BigInt::one());
                    for (k, o) in orders.iter().enumerate() {
                        if k % 2 == 0 {
                            num *= o;
                        } else {
                            den *= o;
                        }
                    }
                    if num != den {
                        let names: Vec<&str> = frag.iter().map(|t| t.label.as_str()).collect();
                        return Err(Error::Invalid(format!("fragment {} is not exact", names.join(" → "))));
                    }
                    checked += 1;
                }
            }
            frag.clear();
        } else {
            frag.push(t.expect("nonzero term"));
        }
    }
    Ok(checked)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(s: &str) -> SymbolicModule {
        s.parse().unwrap()
    }

    fn term(label: &str, s: &str) -> LesTerm {
        LesTerm {
            label: label.into(),
            value: TableEntry::Module(m(s)),
        }
    }

    #[test]
    fn fragments() {
        let seq = vec![term("a", "0"), term("b", "Z/3"), term("c", "Z/9"), term("d", "Z/3"), term("e", "0")];
        assert_eq!(check_fragments(&seq).unwrap(), 1);
        let bad = vec![term("b", "Z/3"), term("c", "Z/3"), term("d", "Z/3")];
        assert!(check_fragments(&bad).is_err());
        let infinite = vec![term("b", "Z"), term("c", "Z")];
        assert_eq!(check_fragments(&infinite).unwrap(), 0);
    }

    #[test]
    fn graded_access() {
        let g = GradedModule::from_modules(vec![m("Z"), m("0"), m("Q/Z")]);
        assert_eq!(g.get(-1), Some(Term::zero()));
        assert_eq!(g.get(7), Some(Term::zero()));
        assert_eq!(g.top(), Some(2));
        let o = GradedModule::opaque("H^{i}_ét", 2);
        assert_eq!(o.get(1), Some(Term::Opaque("H^1_ét".into())));
        assert_eq!(o.get(3), None);
    }
}
