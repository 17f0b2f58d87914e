use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::abelian::{FgAbGroup, Homomorphism, IntMatrix};
use crate::arith;
use crate::error::{Error, Result};

/// A module for `Ẑ = Gal(k^s/k)` over a finite field with `q` elements:
/// the group, the action of the arithmetic Frobenius on the untwisted
/// module, and a Tate twist `w` contributing the factor `q^w`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawZhat", into = "RawZhat")]
pub struct ZhatModule {
    group: FgAbGroup,
    frobenius: Homomorphism,
    twist: i64,
    q: u64,
}

#[derive(Serialize, Deserialize)]
struct RawZhat {
    group: FgAbGroup,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    frobenius: Option<IntMatrix>,
    #[serde(default)]
    twist: i64,
    q: u64,
}

impl TryFrom<RawZhat> for ZhatModule {
    type Error = Error;
    fn try_from(r: RawZhat) -> Result<Self> {
        match r.frobenius {
            None => ZhatModule::trivial(r.group, r.twist, r.q),
            Some(m) => {
                let f = Homomorphism::new(r.group.clone(), r.group.clone(), m)?;
                ZhatModule::new(r.group, f, r.twist, r.q)
            }
        }
    }
}

impl From<ZhatModule> for RawZhat {
    fn from(z: ZhatModule) -> Self {
        let id = Homomorphism::identity(&z.group);
        RawZhat {
            frobenius: (z.frobenius != id).then(|| z.frobenius.matrix().clone()),
            group: z.group,
            twist: z.twist,
            q: z.q,
        }
    }
}

impl ZhatModule {
    pub fn new(group: FgAbGroup, frobenius: Homomorphism, twist: i64, q: u64) -> Result<Self> {
        if arith::prime_power_base(q).is_none() {
            return Err(Error::Invalid(format!("q = {q} is not a prime power")));
        }
        if frobenius.source() != &group || frobenius.target() != &group {
            return Err(Error::Invalid("Frobenius must be an endomorphism of the group".into()));
        }
        if !frobenius.is_isomorphism() {
            return Err(Error::Invalid("Frobenius must be an automorphism".into()));
        }
        Ok(ZhatModule {
            group,
            frobenius,
            twist,
            q,
        })
    }

    /// Trivial Frobenius action.
    pub fn trivial(group: FgAbGroup, twist: i64, q: u64) -> Result<Self> {
        let f = Homomorphism::identity(&group);
        Self::new(group, f, twist, q)
    }

    pub fn group(&self) -> &FgAbGroup {
        &self.group
    }

    pub fn frobenius(&self) -> &Homomorphism {
        &self.frobenius
    }

    pub fn twist(&self) -> i64 {
        self.twist
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// The endomorphism `q^w · F − 1` on a finite group.
    pub fn frobenius_minus_one(&self) -> Result<Homomorphism> {
        let e = self
            .group
            .exponent()
            .ok_or_else(|| Error::UnsupportedModule(format!("{} is infinite", self.group)))?;
        let q = BigInt::from(self.q);
        let c = if e.is_one() {
            BigInt::zero()
        } else if self.twist >= 0 {
            q.modpow(&BigInt::from(self.twist), &e)
        } else {
            let qi = arith::mod_inverse(&q, &e).ok_or(Error::NonInvertibleTwist {
                q: self.q,
                twist: self.twist,
            })?;
            qi.modpow(&BigInt::from(-self.twist), &e)
        };
        let scaled = Homomorphism::scalar(&self.group, &c);
        let cf = self.frobenius.then(&scaled)?;
        let minus = Homomorphism::scalar(&self.group, &BigInt::from(-1));
        cf.add(&minus)
    }
}

/// `(H^0, H^1)` of `Ẑ` acting on a finite module, as kernel and cokernel of
/// `q^w·F − 1`. A free module with trivial action and no twist gives `(G, 0)`.
pub fn frobenius_kernel_cokernel(m: &ZhatModule) -> Result<(FgAbGroup, FgAbGroup)> {
    let g = m.group();
    if g.is_free() && !g.is_zero() {
        if m.twist != 0 || m.frobenius != Homomorphism::identity(g) {
            return Err(Error::UnsupportedModule(format!(
                "free module {g} with nontrivial Frobenius or twist {}",
                m.twist
            )));
        }
        return Ok((g.clone(), FgAbGroup::zero()));
    }
    if !g.is_finite() {
        return Err(Error::UnsupportedModule(format!("{g} is neither finite nor free")));
    }
    let e = m.frobenius_minus_one()?;
    Ok((e.kernel(), e.cokernel()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(n: u64, w: i64, q: u64) -> Result<(FgAbGroup, FgAbGroup)> {
        frobenius_kernel_cokernel(&ZhatModule::trivial(FgAbGroup::cyclic(n), w, q).unwrap())
    }

    #[test]
    fn examples() {
        let z9 = FgAbGroup::cyclic(9);
        assert_eq!(run(9, 0, 5).unwrap(), (z9.clone(), z9));
        let z3 = FgAbGroup::cyclic(3);
        assert_eq!(run(9, -1, 7).unwrap(), (z3.clone(), z3));
        assert_eq!(run(9, -1, 2).unwrap(), (FgAbGroup::zero(), FgAbGroup::zero()));
        assert_eq!(
            run(9, -1, 3),
            Err(Error::NonInvertibleTwist { q: 3, twist: -1 })
        );
    }

    #[test]
    fn free_trivial() {
        let m = ZhatModule::trivial(FgAbGroup::free(2), 0, 4).unwrap();
        assert_eq!(frobenius_kernel_cokernel(&m).unwrap(), (FgAbGroup::free(2), FgAbGroup::zero()));
        let m = ZhatModule::trivial(FgAbGroup::free(1), -1, 4).unwrap();
        assert!(frobenius_kernel_cokernel(&m).is_err());
    }

    #[test]
    fn swap_action() {
        // Frobenius swapping two copies of Z/3: fixed points are the diagonal
        let g: FgAbGroup = "Z/3+Z/3".parse().unwrap();
        let f = Homomorphism::new(g.clone(), g.clone(), IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap()).unwrap();
        let m = ZhatModule::new(g, f, 0, 2).unwrap();
        let (h0, h1) = frobenius_kernel_cokernel(&m).unwrap();
        assert_eq!(h0, FgAbGroup::cyclic(3));
        assert_eq!(h1, FgAbGroup::cyclic(3));
    }
}
