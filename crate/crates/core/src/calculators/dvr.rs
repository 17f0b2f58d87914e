use super::{
    leray_two_row, zhat_cohomology, CohomologyTable, Discrepancy, GradedModule, Mode, TableEntry, Tail, ZhatInput,
};
use crate::abelian::Homomorphism;
use crate::arith;
use crate::coefficients::{SymbolicModule, ZhatModule};
use crate::direct_image::{higher_direct_image, stalk_on_strict_site, BaseDescription, BasePoint, SheafSpec};
use crate::error::{Error, Result};

/// Tables are shown at least through this degree.
pub(super) const SHOWN_TOP: usize = 4;

/// Degree of the only nonzero higher direct image on a base whose log ranks
/// are at most one.
pub(super) fn upper_degree(f: &SheafSpec) -> usize {
    match f {
        SheafSpec::Lattice { .. } => 2,
        _ => 1,
    }
}

pub(super) fn global_row(f: &SheafSpec, q: u64) -> Result<GradedModule> {
    let input = match f {
        SheafSpec::FiniteLGroup { group, frobenius, .. } => {
            let frob = frobenius.clone().unwrap_or_else(|| Homomorphism::identity(group));
            ZhatInput::Module(ZhatModule::new(group.clone(), frob, 0, q)?)
        }
        other => ZhatInput::Symbolic(other.stalk()),
    };
    zhat_cohomology(&input, q)
}

/// `H^•(Γ_x, R^{q0} ε_fl* F_x)` at a finite-field point.
pub(super) fn point_row(f: &SheafSpec, base: &BaseDescription, x: &BasePoint) -> Result<(SymbolicModule, GradedModule)> {
    let q = x.q.ok_or_else(|| Error::NonFiniteResidueField(x.label.clone()))?;
    if x.log_rank > 1 {
        return Err(Error::Invalid(format!("point {} has log rank {} > 1", x.label, x.log_rank)));
    }
    let q0 = upper_degree(f);
    let stalk = match f {
        SheafSpec::RationalSpace { .. } => SymbolicModule::zero(),
        _ => stalk_on_strict_site(&higher_direct_image(base, f, q0)?, x),
    };
    if stalk.is_zero() {
        return Ok((stalk, GradedModule::zero()));
    }
    let row = match f {
        SheafSpec::FiniteLGroup {
            group,
            frobenius: Some(frob),
            ..
        } => {
            let k = arith::binomial(x.log_rank, q0);
            let zm = ZhatModule::new(group.clone(), frob.clone(), -(q0 as i64), q)?;
            zhat_cohomology(&ZhatInput::Module(zm), q)?.power(k)?
        }
        _ => zhat_cohomology(&ZhatInput::Symbolic(stalk.clone()), q)?,
    };
    Ok((stalk, row))
}

/// The upper row under the claimed vanishing: zero for lattices and constant finite
/// groups, otherwise no claim.
pub(super) fn paper_claims_vanishing(f: &SheafSpec) -> bool {
    match f {
        SheafSpec::Lattice { .. } => true,
        SheafSpec::FiniteLGroup { .. } => f.is_constant(),
        SheafSpec::RationalSpace { .. } => false,
    }
}

pub(super) fn compare(
    row: &GradedModule,
    term: impl Fn(usize) -> String,
    claims_zero: bool,
    out: &mut Vec<Discrepancy>,
) {
    if !claims_zero {
        return;
    }
    for (u, t) in row.terms.iter().enumerate() {
        if let Some(m) = t.module() {
            if !m.is_zero() {
                out.push(Discrepancy {
                    degree: u,
                    term: term(u),
                    computed: m.clone(),
                    paper: SymbolicModule::zero(),
                });
            }
        }
    }
}

pub(super) fn pad(entries: &mut Vec<TableEntry>, tail: Tail) {
    if tail == Tail::Zero {
        while entries.len() <= SHOWN_TOP {
            entries.push(TableEntry::Module(SymbolicModule::zero()));
        }
    }
}

/// `H^•_kfl(X, F)` for `X` the spectrum of a discrete valuation ring with
/// finite residue field of size `q` and characteristic `p`, with the log
/// structure of a uniformizer.
pub fn dvr_calculator(q: u64, p: u64, f: &SheafSpec, mode: Mode) -> Result<CohomologyTable> {
    if arith::prime_power_base(q) != Some(p) {
        return Err(Error::Invalid(format!("q = {q} is not a power of p = {p}")));
    }
    let base = BaseDescription::log_trait(0, p, Some(q))?;
    let x = &base.points[0];
    let q0 = upper_degree(f);
    let lower = global_row(f, q)?;
    let (stalk, computed) = point_row(f, &base, x)?;
    let mut diagnostics = Vec::new();
    let claims_zero = paper_claims_vanishing(f);
    compare(&computed, |u| format!("H^{u}(Ẑ, {stalk})"), claims_zero, &mut diagnostics);
    let upper = match mode {
        Mode::Paper if claims_zero => GradedModule::zero(),
        _ => computed,
    };
    let upper_label = if stalk.is_zero() { "0".to_string() } else { format!("H^{{}}(Ẑ, {stalk})") };
    let leray = leray_two_row(
        &lower,
        &upper,
        q0,
        false,
        [&format!("H^{{}}(Ẑ, {f})"), &format!("H^{{}}_kfl(X, {f})"), &upper_label],
    )?;
    let mut entries = leray.entries;
    pad(&mut entries, leray.tail);
    Ok(CohomologyTable {
        entries,
        tail: leray.tail,
        mode,
        diagnostics,
        lower,
        upper,
        upper_degree: q0,
        sequence: leray.sequence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::{FgAbGroup, IntMatrix};

    fn m(s: &str) -> SymbolicModule {
        s.parse().unwrap()
    }

    fn modules(t: &CohomologyTable) -> Vec<Option<SymbolicModule>> {
        t.entries.iter().map(|e| e.module().cloned()).collect()
    }

    #[test]
    fn lattice_table() {
        for mode in [Mode::Computed, Mode::Paper] {
            let t = dvr_calculator(2, 2, &SheafSpec::Lattice { rank: 1 }, mode).unwrap();
            let want: Vec<_> = ["Z", "0", "Q/Z", "0", "0"].iter().map(|s| Some(m(s))).collect();
            assert_eq!(modules(&t), want);
            assert!(t.diagnostics.is_empty());
        }
    }

    #[test]
    fn lattice_with_nonzero_upper_row() {
        let t = dvr_calculator(4, 2, &SheafSpec::Lattice { rank: 1 }, Mode::Computed).unwrap();
        assert!(matches!(&t.entries[2], TableEntry::Extension(e) if e.connecting_known));
        assert_eq!(t.diagnostics.len(), 1);
        let p = dvr_calculator(4, 2, &SheafSpec::Lattice { rank: 1 }, Mode::Paper).unwrap();
        assert_eq!(p.entries[2], TableEntry::Module(m("Q/Z")));
        assert_eq!(p.diagnostics, t.diagnostics);
    }

    #[test]
    fn finite_tables() {
        let z9 = SheafSpec::cyclic(3, 2).unwrap();
        let t = dvr_calculator(2, 2, &z9, Mode::Computed).unwrap();
        assert_eq!(&modules(&t)[..4], &[Some(m("Z/9")), Some(m("Z/9")), Some(m("0")), Some(m("0"))]);
        assert!(t.diagnostics.is_empty());
        let z3 = SheafSpec::cyclic(3, 1).unwrap();
        let t = dvr_calculator(7, 7, &z3, Mode::Computed).unwrap();
        assert_eq!(t.upper.terms[0].module(), Some(&m("Z/3")));
        assert!(matches!(&t.entries[1], TableEntry::Extension(e) if e.connecting_known));
        assert_eq!(t.entries[2], TableEntry::Module(m("Z/3")));
        assert_eq!(t.diagnostics[0].degree, 0);
        assert_eq!(t.check_exactness().unwrap() > 0, true);
        let p = dvr_calculator(7, 7, &z3, Mode::Paper).unwrap();
        assert_eq!(&modules(&p)[..3], &[Some(m("Z/3")), Some(m("Z/3")), Some(m("0"))]);
    }

    #[test]
    fn l_equals_p() {
        let f = SheafSpec::cyclic(5, 2).unwrap();
        let t = dvr_calculator(25, 5, &f, Mode::Computed).unwrap();
        assert_eq!(&modules(&t)[..3], &[Some(m("Z/25")), Some(m("Z/25")), Some(m("0"))]);
    }

    #[test]
    fn frobenius_action() {
        let g: FgAbGroup = "Z/3+Z/3".parse().unwrap();
        let swap = Homomorphism::new(g.clone(), g.clone(), IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap()).unwrap();
        let f = SheafSpec::finite(3, g, Some(swap)).unwrap();
        let t = dvr_calculator(2, 2, &f, Mode::Paper).unwrap();
        assert_eq!(t.entries[0], TableEntry::Module(m("Z/3")));
        assert!(t.diagnostics.is_empty());
        assert!(t.check_exactness().is_ok());
    }

    #[test]
    fn rational() {
        let t = dvr_calculator(3, 3, &SheafSpec::RationalSpace { dim: 2 }, Mode::Computed).unwrap();
        assert_eq!(t.entries[0], TableEntry::Module(m("Q^2")));
        assert!(t.entries[1..].iter().all(TableEntry::is_zero));
    }
}
