use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::GradedModule;
use crate::abelian::FgAbGroup;
use crate::arith;
use crate::coefficients::{frobenius_kernel_cokernel, CoeffAtom, CoeffKind, SymbolicModule, ZhatModule};
use crate::error::{Error, Result};

/// Input to [`zhat_cohomology`]: a finite module with explicit Frobenius, or
/// a symbolic module with trivial Frobenius and Tate twists on its atoms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZhatInput {
    Module(ZhatModule),
    Symbolic(SymbolicModule),
}

fn cyclic(n: BigInt) -> SymbolicModule {
    SymbolicModule::cyclic(n.to_u64().expect("small cyclic order"), 0)
}

fn module(g: &FgAbGroup) -> Result<SymbolicModule> {
    SymbolicModule::from_group(g)
}

/// `|q^{|w|} − 1|`.
fn q_pow_minus_one(q: u64, w: i64) -> BigInt {
    arith::pow_big(q, w.unsigned_abs() as u32) - BigInt::one()
}

fn atom_rows(a: &CoeffAtom, q: u64) -> Result<[SymbolicModule; 3]> {
    let p = arith::prime_power_base(q).ok_or_else(|| Error::Invalid(format!("q = {q} is not a prime power")))?;
    let w = a.twist;
    let z = SymbolicModule::zero;
    let unsupported = || Error::UnsupportedModule(format!("{a} over a field with {q} elements"));
    Ok(match a.kind {
        CoeffKind::FreeZ if w == 0 => [SymbolicModule::z(), z(), SymbolicModule::q_mod_z()],
        CoeffKind::RationalQ if w == 0 => [SymbolicModule::q(), z(), z()],
        CoeffKind::QmodZ if w == 0 => [SymbolicModule::q_mod_z(), SymbolicModule::q_mod_z(), z()],
        CoeffKind::FreeZ | CoeffKind::RationalQ | CoeffKind::QmodZ => return Err(unsupported()),
        CoeffKind::FiniteCyclic(n) => {
            let zm = ZhatModule::trivial(FgAbGroup::cyclic(n), w, q)?;
            let (h0, h1) = frobenius_kernel_cokernel(&zm)?;
            [module(&h0)?, module(&h1)?, z()]
        }
        CoeffKind::PrimaryDivisible(_) if w == 0 => {
            let m = SymbolicModule::atom(a.kind, 0);
            [m.clone(), m, z()]
        }
        CoeffKind::PrimaryDivisible(l) if l != p => {
            let v = arith::valuation(&q_pow_minus_one(q, w), l);
            [cyclic(arith::pow_big(l, v)), z(), z()]
        }
        CoeffKind::PrimeToP(r) if w == 0 => {
            let m = SymbolicModule::atom(CoeffKind::PrimeToP(r), 0);
            [m.clone(), m, z()]
        }
        CoeffKind::PrimeToP(r) if r == p => {
            let n = q_pow_minus_one(q, w);
            [cyclic(arith::strip_prime(&n, p)), z(), z()]
        }
        CoeffKind::PrimaryDivisible(_) | CoeffKind::PrimeToP(_) => return Err(unsupported()),
    })
}

/// `H^•(Ẑ, M)` for `Ẑ = Gal(k^s/k)`, `k` finite with `q` elements.
pub fn zhat_cohomology(input: &ZhatInput, q: u64) -> Result<GradedModule> {
    let rows = match input {
        ZhatInput::Module(zm) => {
            if zm.q() != q {
                return Err(Error::Invalid(format!("module is defined over q = {}, not {q}", zm.q())));
            }
            let (h0, h1) = frobenius_kernel_cokernel(zm)?;
            let h2 = if zm.group().is_free() && !zm.group().is_zero() {
                SymbolicModule::q_mod_z().power(zm.group().rank())
            } else {
                SymbolicModule::zero()
            };
            vec![module(&h0)?, module(&h1)?, h2]
        }
        ZhatInput::Symbolic(m) => {
            let mut acc = vec![SymbolicModule::zero(); 3];
            for (a, mult) in m.terms() {
                let r = atom_rows(a, q)?;
                for (slot, h) in acc.iter_mut().zip(r) {
                    *slot = slot.direct_sum(&h.power(mult));
                }
            }
            acc
        }
    };
    Ok(GradedModule::from_modules(rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(s: &str) -> SymbolicModule {
        s.parse().unwrap()
    }

    fn sym(s: &str, q: u64) -> Vec<SymbolicModule> {
        let g = zhat_cohomology(&ZhatInput::Symbolic(m(s)), q).unwrap();
        g.terms.iter().map(|t| t.module().unwrap().clone()).collect()
    }

    #[test]
    fn builtins() {
        assert_eq!(sym("Z/5", 3), vec![m("Z/5"), m("Z/5"), m("0")]);
        assert_eq!(sym("Z", 3), vec![m("Z"), m("0"), m("Q/Z")]);
        assert_eq!(sym("Q", 3), vec![m("Q"), m("0"), m("0")]);
        assert_eq!(sym("Q/Z", 3), vec![m("Q/Z"), m("Q/Z"), m("0")]);
        assert_eq!(sym("Q_3/Z_3(-1)", 7), vec![m("Z/3"), m("0"), m("0")]);
        assert_eq!(sym("(Q/Z)^(2')(-1)", 2), vec![m("0"), m("0"), m("0")]);
        assert_eq!(sym("(Q/Z)^(2')(-1)", 16), vec![m("Z/15"), m("0"), m("0")]);
        assert_eq!(sym("(Q/Z)^(3')(-1)", 9), vec![m("Z/8"), m("0"), m("0")]);
        assert!(zhat_cohomology(&ZhatInput::Symbolic(m("Z(-1)")), 3).is_err());
        assert!(zhat_cohomology(&ZhatInput::Symbolic(m("Q_3/Z_3(-1)")), 9).is_err());
    }

    #[test]
    fn divisible_twist_is_colimit_of_finite_levels() {
        // Q_3/Z_3(−1) = colim Z/3^k(−1); the fixed points stabilize
        for k in 1..=3u32 {
            let zm = ZhatModule::trivial(FgAbGroup::cyclic(3u64.pow(k)), -1, 7).unwrap();
            let (h0, _) = frobenius_kernel_cokernel(&zm).unwrap();
            assert_eq!(h0, FgAbGroup::cyclic(3));
        }
    }

    #[test]
    fn finite_orders_agree() {
        for n in 2..=12u64 {
            for w in -2..=2i64 {
                for q in [2u64, 4, 5, 7, 9] {
                    let Ok(g) = zhat_cohomology(&ZhatInput::Symbolic(SymbolicModule::cyclic(n, w)), q) else {
                        continue;
                    };
                    assert_eq!(g.terms[0].order(), g.terms[1].order(), "Z/{n}({w}) q={q}");
                }
            }
        }
    }
}
