use serde::{Deserialize, Serialize};

use super::{ExtensionProblem, GradedModule, LesTerm, TableEntry, Tail, Term};
use crate::error::{Error, Result};

/// Output of the two-row solver: the abutment by degree and the long exact
/// sequence `… → L^i → H^i → U^{i−q0} → L^{i+1} → …` it was read from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Leray {
    pub entries: Vec<TableEntry>,
    pub tail: Tail,
    pub sequence: Vec<LesTerm>,
}

fn fill(pattern: &str, d: i64) -> String {
    if d < 0 {
        return "0".into();
    }
    pattern.replace("{}", &d.to_string())
}

/// Solves a spectral sequence with nonzero rows `0` (`lower`) and `q0`
/// (`upper`) only. `H^i` is read off where a neighbouring term vanishes or
/// the connecting maps are known to be zero (`connecting_zero`); otherwise an
/// extension problem is reported. `labels` name the lower, abutment and
/// upper terms, with `{}` standing for the degree.
pub fn leray_two_row(
    lower: &GradedModule,
    upper: &GradedModule,
    q0: usize,
    connecting_zero: bool,
    labels: [&str; 3],
) -> Result<Leray> {
    if !(1..=2).contains(&q0) {
        return Err(Error::MalformedRows(format!("upper row must sit in degree 1 or 2, got {q0}")));
    }
    if upper.tail != Tail::Zero {
        return Err(Error::MalformedRows("the upper row needs a known zero tail".into()));
    }
    let q = q0 as i64;
    let utop = upper.top().map_or(-1, |t| t as i64 + q);
    let (top, tail) = match lower.tail {
        Tail::Zero => (lower.top().map_or(-1, |t| t as i64).max(utop) + 1, Tail::Zero),
        Tail::Unknown => (lower.terms.len() as i64 - 1, Tail::Unknown),
    };
    let top = top.max(0);
    let mut entries = Vec::new();
    let mut sequence = Vec::new();
    for i in 0..=top {
        let (li, ui) = (lower.get(i), upper.get(i - q));
        let (lnext, uprev) = (lower.get(i + 1), upper.get(i - 1 - q));
        let entry = match (li.clone(), ui.clone()) {
            (Some(l), Some(u)) => {
                let prev_zero = connecting_zero || l.is_zero() || uprev.as_ref().is_some_and(Term::is_zero);
                let next_zero = connecting_zero || u.is_zero() || lnext.as_ref().is_some_and(Term::is_zero);
                match (prev_zero && next_zero, l.is_zero(), u.is_zero()) {
                    (true, true, _) => TableEntry::from_term(u),
                    (true, _, true) => TableEntry::from_term(l),
                    (known, _, _) => TableEntry::Extension(ExtensionProblem {
                        degree: i as usize,
                        sub: l,
                        quot: u,
                        connecting_known: known,
                    }),
                }
            }
            _ => TableEntry::Undetermined(format!("row term in degree {i} unknown")),
        };
        let as_entry = |t: Option<Term>, why: &str| {
            t.map(TableEntry::from_term)
                .unwrap_or_else(|| TableEntry::Undetermined(why.to_string()))
        };
        sequence.push(LesTerm {
            label: fill(labels[0], i),
            value: as_entry(li, "unknown"),
        });
        sequence.push(LesTerm {
            label: fill(labels[1], i),
            value: entry.clone(),
        });
        sequence.push(LesTerm {
            label: fill(labels[2], i - q),
            value: as_entry(ui, "unknown"),
        });
        entries.push(entry);
    }
    if let Some(t) = lower.get(top + 1) {
        sequence.push(LesTerm {
            label: fill(labels[0], top + 1),
            value: TableEntry::from_term(t),
        });
    }
    Ok(Leray {
        entries,
        tail,
        sequence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::SymbolicModule;

    fn m(s: &str) -> SymbolicModule {
        s.parse().unwrap()
    }

    const LABELS: [&str; 3] = ["L^{}", "H^{}", "U^{}"];

    #[test]
    fn zero_upper_row_copies_lower() {
        let lower = GradedModule::from_modules(vec![m("Z"), m("0"), m("Q/Z")]);
        let l = leray_two_row(&lower, &GradedModule::zero(), 2, false, LABELS).unwrap();
        let got: Vec<_> = l.entries.iter().map(|e| e.module().cloned().unwrap()).collect();
        assert_eq!(got, vec![m("Z"), m("0"), m("Q/Z"), m("0")]);
    }

    #[test]
    fn extension_and_shift() {
        let lower = GradedModule::from_modules(vec![m("Z/3"), m("Z/3")]);
        let upper = GradedModule::from_modules(vec![m("Z/3"), m("Z/3")]);
        let l = leray_two_row(&lower, &upper, 1, false, LABELS).unwrap();
        assert_eq!(l.entries[0], TableEntry::Module(m("Z/3")));
        assert!(matches!(&l.entries[1], TableEntry::Extension(e) if e.connecting_known));
        assert_eq!(l.entries[2], TableEntry::Module(m("Z/3")));
        assert_eq!(l.entries.len(), 4);
        assert!(l.entries[3].is_zero());
        assert!(super::super::check_fragments(&l.sequence).unwrap() >= 2);
    }

    #[test]
    fn unknown_connecting_map() {
        let lower = GradedModule::from_modules(vec![m("Z/2"), m("0"), m("Z/3")]);
        let upper = GradedModule::from_modules(vec![m("Z/3")]);
        let l = leray_two_row(&lower, &upper, 1, false, LABELS).unwrap();
        assert!(matches!(&l.entries[1], TableEntry::Extension(e) if !e.connecting_known));
        let l = leray_two_row(&lower, &upper, 1, true, LABELS).unwrap();
        assert_eq!(l.entries[1], TableEntry::Module(m("Z/3")));
    }

    #[test]
    fn malformed() {
        let g = GradedModule::zero();
        assert!(matches!(leray_two_row(&g, &g, 3, false, LABELS), Err(Error::MalformedRows(_))));
        let o = GradedModule::opaque("x^{i}", 1);
        assert!(matches!(leray_two_row(&g, &o, 1, false, LABELS), Err(Error::MalformedRows(_))));
    }
}
