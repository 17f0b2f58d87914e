use serde::{Deserialize, Serialize};

use super::dvr::{compare, paper_claims_vanishing, point_row, upper_degree, SHOWN_TOP};
use super::{leray_two_row, CohomologyTable, GradedModule, Mode, Term};
use crate::direct_image::{BaseDescription, BaseKind, SheafSpec};
use crate::error::{Error, Result};

/// Kummer log flat cohomology of a Dedekind base against its étale (or
/// classical flat) cohomology, which is kept symbolic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DedekindReport {
    pub table: CohomologyTable,
    /// Degrees where `H^i_ét → H^i_kfl` is an isomorphism.
    pub isomorphic_degrees: Vec<usize>,
    pub iso_all: bool,
    /// Least `d` with an isomorphism in every degree `≥ d`.
    pub iso_from: usize,
    pub summary: String,
}

/// `etale_row` defaults to the opaque symbols `H^i_ét(X, F)`.
pub fn dedekind_calculator(
    base: &BaseDescription,
    f: &SheafSpec,
    etale_row: Option<GradedModule>,
    mode: Mode,
) -> Result<DedekindReport> {
    if base.kind != BaseKind::DedekindWithS {
        return Err(Error::UnsupportedBase("the Dedekind calculator needs a dedekind base".into()));
    }
    let q0 = upper_degree(f);
    let claims_zero = paper_claims_vanishing(f);
    let mut computed = GradedModule::zero();
    let mut diagnostics = Vec::new();
    for x in &base.points {
        let (stalk, row) = point_row(f, base, x)?;
        compare(&row, |u| format!("H^{u}(Γ_{}, {stalk})", x.label), claims_zero, &mut diagnostics);
        computed = computed.direct_sum(&row)?;
    }
    let upper = match mode {
        Mode::Paper if claims_zero => GradedModule::zero(),
        _ => computed,
    };
    let reach = upper.top().map_or(0, |t| t + q0 + 2);
    let lower = etale_row.unwrap_or_else(|| GradedModule::opaque(&format!("H^{{i}}_ét(X, {f})"), reach.max(SHOWN_TOP)));
    let leray = leray_two_row(
        &lower,
        &upper,
        q0,
        false,
        [
            &format!("H^{{}}_ét(X, {f})"),
            &format!("H^{{}}_kfl(X, {f})"),
            &format!("⊕_x H^{{}}(Γ_x, R^{q0}ε_* {f})"),
        ],
    )?;
    let vanishes = |d: i64| upper.get(d).is_some_and(|t: Term| t.is_zero());
    let isomorphic_degrees: Vec<usize> = (0..leray.entries.len())
        .filter(|&i| {
            let i = i as i64 - q0 as i64;
            vanishes(i) && vanishes(i - 1)
        })
        .collect();
    let iso_all = upper.top().is_none();
    let iso_from = if iso_all { 0 } else { reach };
    let summary = if iso_all {
        "H^i_kfl ≅ H^i_ét for all i".to_string()
    } else {
        format!("H^i_kfl ≅ H^i_ét for i ≥ {iso_from}; lower degrees sit in the long exact sequence")
    };
    Ok(DedekindReport {
        table: CohomologyTable {
            entries: leray.entries,
            tail: leray.tail,
            mode,
            diagnostics,
            lower,
            upper,
            upper_degree: q0,
            sequence: leray.sequence,
        },
        isomorphic_degrees,
        iso_all,
        iso_from,
        summary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculators::TableEntry;
    use crate::coefficients::SymbolicModule;
    use crate::direct_image::BasePoint;

    fn base(points: &[(u64, Option<u64>)]) -> BaseDescription {
        let pts = points
            .iter()
            .enumerate()
            .map(|(k, &(p, q))| BasePoint::new(format!("x{k}"), p, q, 1).unwrap())
            .collect();
        BaseDescription::new(BaseKind::DedekindWithS, 0, pts).unwrap()
    }

    #[test]
    fn lattice_all_iso() {
        let b = base(&[(2, Some(2)), (2, Some(2))]);
        for mode in [Mode::Computed, Mode::Paper] {
            let r = dedekind_calculator(&b, &SheafSpec::Lattice { rank: 2 }, None, mode).unwrap();
            assert!(r.iso_all);
            assert!(r.table.diagnostics.is_empty());
            assert!(r.table.entries.iter().all(|e| matches!(e, TableEntry::Opaque(_))));
        }
    }

    #[test]
    fn finite_with_fixed_points() {
        let b = base(&[(2, Some(4))]);
        let f = SheafSpec::cyclic(3, 1).unwrap();
        let r = dedekind_calculator(&b, &f, None, Mode::Computed).unwrap();
        assert!(!r.iso_all);
        assert_eq!(r.iso_from, 4);
        assert_eq!(r.table.upper.terms[0], Term::Module("Z/3".parse::<SymbolicModule>().unwrap()));
        assert_eq!(r.table.diagnostics.len(), 2);
        assert!(r.isomorphic_degrees.contains(&0) && r.isomorphic_degrees.contains(&4));
        assert!(!r.isomorphic_degrees.contains(&2));
        let p = dedekind_calculator(&b, &f, None, Mode::Paper).unwrap();
        assert!(p.iso_all);
    }

    #[test]
    fn l_prime_to_q_minus_one() {
        let b = base(&[(2, Some(2)), (5, Some(5)), (3, Some(3))]);
        let r = dedekind_calculator(&b, &SheafSpec::cyclic(3, 2).unwrap(), None, Mode::Computed).unwrap();
        assert!(r.iso_all);
        assert!(r.table.diagnostics.is_empty());
    }

    #[test]
    fn needs_finite_fields() {
        let b = base(&[(2, None)]);
        let e = dedekind_calculator(&b, &SheafSpec::Lattice { rank: 1 }, None, Mode::Computed).unwrap_err();
        assert!(matches!(e, Error::NonFiniteResidueField(_)));
    }
}
