use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::IntMatrix;
use super::smith::smith_normal_form;
use crate::arith;
use crate::error::{Error, Result};

/// A finitely generated abelian group `Z^rank ⊕ Z/d_1 ⊕ … ⊕ Z/d_k` with
/// `1 < d_1 | d_2 | … | d_k`.
///
/// Canonical generators are ordered free summands first, then the torsion
/// summands in the order of `torsion`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawGroup", into = "RawGroup")]
pub struct FgAbGroup {
    rank: usize,
    torsion: Vec<BigInt>,
}

#[derive(Serialize, Deserialize)]
struct RawGroup {
    rank: usize,
    #[serde(with = "crate::serde_int::vec")]
    torsion: Vec<BigInt>,
}

impl TryFrom<RawGroup> for FgAbGroup {
    type Error = Error;
    fn try_from(r: RawGroup) -> Result<Self> {
        FgAbGroup::new(r.rank, r.torsion)
    }
}

impl From<FgAbGroup> for RawGroup {
    fn from(g: FgAbGroup) -> Self {
        RawGroup {
            rank: g.rank,
            torsion: g.torsion,
        }
    }
}

impl FgAbGroup {
    /// Builds a group already in normal form; rejects anything else.
    pub fn new(rank: usize, torsion: Vec<BigInt>) -> Result<Self> {
        for d in &torsion {
            if *d < BigInt::from(2) {
                return Err(Error::Invalid(format!("invariant factor {d} must be at least 2")));
            }
        }
        for w in torsion.windows(2) {
            if !w[1].is_multiple_of(&w[0]) {
                return Err(Error::Invalid(format!(
                    "invariant factors {} and {} violate the divisibility chain",
                    w[0], w[1]
                )));
            }
        }
        Ok(FgAbGroup { rank, torsion })
    }

    pub fn zero() -> Self {
        FgAbGroup { rank: 0, torsion: vec![] }
    }

    pub fn free(rank: usize) -> Self {
        FgAbGroup { rank, torsion: vec![] }
    }

    /// `Z/n`; `n = 0` gives `Z` and `n = 1` the zero group.
    pub fn cyclic(n: u64) -> Self {
        Self::from_cyclic_orders(&[BigInt::from(n)])
    }

    /// Normal form of `⊕ Z/n_i`, where an order of 0 stands for `Z`.
    pub fn from_cyclic_orders(orders: &[BigInt]) -> Self {
        let rank = orders.iter().filter(|o| o.is_zero()).count();
        let finite: Vec<BigInt> = orders
            .iter()
            .filter(|o| !o.is_zero())
            .map(|o| o.abs())
            .filter(|o| !o.is_one())
            .collect();
        let sorted_chain = finite.windows(2).all(|w| w[1].is_multiple_of(&w[0]));
        if sorted_chain {
            return FgAbGroup { rank, torsion: finite };
        }
        // merge prime-power parts into a divisibility chain
        let mut parts: BTreeMap<BigInt, Vec<u32>> = BTreeMap::new();
        for o in &finite {
            for (p, e) in arith::factor_big(o) {
                parts.entry(p).or_default().push(e);
            }
        }
        let len = parts.values().map(Vec::len).max().unwrap_or(0);
        let mut torsion = vec![BigInt::one(); len];
        for (p, mut es) in parts {
            es.sort_unstable();
            let off = len - es.len();
            for (i, e) in es.into_iter().enumerate() {
                torsion[off + i] *= num_traits::pow(p.clone(), e as usize);
            }
        }
        FgAbGroup { rank, torsion }
    }

    /// Cokernel of the relation matrix whose rows are relations among
    /// `relations.cols()` generators.
    pub fn from_presentation(relations: &IntMatrix) -> Self {
        let k = relations.cols();
        let s = smith_normal_form(relations);
        let diag = s.nonzero_diagonal();
        let rank = k - diag.len();
        FgAbGroup {
            rank,
            torsion: diag.into_iter().filter(|d| !d.is_one()).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    /// Number of canonical generators.
    pub fn ngens(&self) -> usize {
        self.rank + self.torsion.len()
    }

    /// Order of each canonical generator, 0 meaning infinite.
    pub fn generator_orders(&self) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.rank];
        v.extend(self.torsion.iter().cloned());
        v
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.rank == 0
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// Order of a finite group, `None` if infinite.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.torsion.iter().product())
    }

    /// Smallest `e ≥ 1` with `e·G = 0`, `None` if infinite.
    pub fn exponent(&self) -> Option<BigInt> {
        self.is_finite()
            .then(|| self.torsion.last().cloned().unwrap_or_else(BigInt::one))
    }

    pub fn direct_sum(&self, other: &FgAbGroup) -> FgAbGroup {
        let mut orders = self.generator_orders();
        orders.extend(other.generator_orders());
        Self::from_cyclic_orders(&orders)
    }

    pub fn power(&self, n: usize) -> FgAbGroup {
        let mut torsion = Vec::with_capacity(self.torsion.len() * n);
        for d in &self.torsion {
            torsion.extend(std::iter::repeat(d.clone()).take(n));
        }
        FgAbGroup {
            rank: self.rank * n,
            torsion,
        }
    }

    pub fn tensor(&self, other: &FgAbGroup) -> FgAbGroup {
        let mut orders = Vec::new();
        for a in self.generator_orders() {
            for b in other.generator_orders() {
                orders.push(a.gcd(&b));
            }
        }
        Self::from_cyclic_orders(&orders)
    }

    /// `Hom(self, other)`.
    pub fn hom(&self, other: &FgAbGroup) -> FgAbGroup {
        let mut orders = Vec::new();
        for a in self.generator_orders() {
            for b in other.generator_orders() {
                match (a.is_zero(), b.is_zero()) {
                    (true, _) => orders.push(b.clone()),
                    (false, true) => {}
                    (false, false) => orders.push(a.gcd(&b)),
                }
            }
        }
        Self::from_cyclic_orders(&orders)
    }

    pub fn exterior_power(&self, i: usize) -> Result<FgAbGroup> {
        if !self.is_free() {
            return Err(Error::NonFreeGroup(self.to_string()));
        }
        Ok(FgAbGroup::free(arith::binomial(self.rank, i)))
    }

    /// The subgroup `G[n]` of elements killed by `n ≥ 1`.
    pub fn n_torsion(&self, n: &BigInt) -> FgAbGroup {
        let orders: Vec<BigInt> = self.torsion.iter().map(|d| d.gcd(n)).collect();
        Self::from_cyclic_orders(&orders)
    }

    /// `G/nG`.
    pub fn mod_n(&self, n: &BigInt) -> FgAbGroup {
        let mut orders = vec![n.abs(); self.rank];
        orders.extend(self.torsion.iter().map(|d| d.gcd(n)));
        Self::from_cyclic_orders(&orders)
    }

    /// Torsion subgroup.
    pub fn torsion_subgroup(&self) -> FgAbGroup {
        FgAbGroup {
            rank: 0,
            torsion: self.torsion.clone(),
        }
    }

    /// The `l`-primary part of the torsion subgroup.
    pub fn primary_part(&self, l: u64) -> FgAbGroup {
        let orders: Vec<BigInt> = self
            .torsion
            .iter()
            .map(|d| arith::pow_big(l, arith::valuation(d, l)))
            .collect();
        Self::from_cyclic_orders(&orders)
    }

    /// Torsion with every `p`-primary factor removed.
    pub fn prime_to_part(&self, p: u64) -> FgAbGroup {
        let orders: Vec<BigInt> = self.torsion.iter().map(|d| arith::strip_prime(d, p)).collect();
        Self::from_cyclic_orders(&orders)
    }

    /// `(rank, {l: l-primary part})` over the primes dividing the torsion.
    pub fn torsion_decompose(&self) -> (usize, BTreeMap<u64, FgAbGroup>) {
        let mut out = BTreeMap::new();
        if let Some(e) = self.torsion.last() {
            for (l, _) in arith::factor_big(e) {
                let l = l.to_u64().expect("prime factor fits in 64 bits");
                out.insert(l, self.primary_part(l));
            }
        }
        (self.rank, out)
    }

    /// Reduce a coordinate vector into canonical residues.
    pub fn normalize_element(&self, x: &[BigInt]) -> Vec<BigInt> {
        x.iter()
            .zip(self.generator_orders())
            .map(|(v, o)| arith::reduce(v, &o))
            .collect()
    }

    /// Human notation such as `Z^2 ⊕ Z/2 ⊕ Z/4`.
    pub fn notation(&self, plus: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        let mut i = 0;
        while i < self.torsion.len() {
            let d = &self.torsion[i];
            let mut j = i;
            while j < self.torsion.len() && self.torsion[j] == *d {
                j += 1;
            }
            if j - i == 1 {
                parts.push(format!("Z/{d}"));
            } else {
                parts.push(format!("(Z/{d})^{}", j - i));
            }
            i = j;
        }
        parts.join(plus)
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.notation(" ⊕ "))
    }
}

impl fmt::Debug for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FgAbGroup({self})")
    }
}

impl std::str::FromStr for FgAbGroup {
    type Err = Error;

    /// Parses sums like `Z^2+Z/4`, `Z/2 ⊕ Z/3`, `(Z/2)^3` or `0`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('{') {
            return serde_json::from_str(s)
                .map_err(|e| Error::Invalid(format!("bad group object {s:?}: {e}")));
        }
        let mut orders = Vec::new();
        for term in s.split(['+', '⊕']) {
            let term = term.trim();
            if term.is_empty() {
                return Err(Error::Invalid(format!("empty summand in {s:?}")));
            }
            if term == "0" {
                continue;
            }
            let (base, mult) = match term.rfind('^') {
                Some(k) if !term[k + 1..].contains(')') => {
                    let m: usize = term[k + 1..]
                        .trim()
                        .parse()
                        .map_err(|_| Error::Invalid(format!("bad exponent in {term:?}")))?;
                    (term[..k].trim(), m)
                }
                _ => (term, 1),
            };
            let base = base
                .strip_prefix('(')
                .and_then(|b| b.strip_suffix(')'))
                .unwrap_or(base)
                .trim();
            let order = if base == "Z" {
                BigInt::zero()
            } else if let Some(n) = base.strip_prefix("Z/") {
                let n: BigInt = n
                    .trim()
                    .parse()
                    .map_err(|_| Error::Invalid(format!("bad modulus in {term:?}")))?;
                if n < BigInt::one() {
                    return Err(Error::Invalid(format!("modulus must be positive in {term:?}")));
                }
                n
            } else {
                return Err(Error::Invalid(format!("cannot parse summand {term:?}")));
            };
            orders.extend(std::iter::repeat(order).take(mult));
        }
        Ok(FgAbGroup::from_cyclic_orders(&orders))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> FgAbGroup {
        s.parse().unwrap()
    }

    #[test]
    fn presentation_examples() {
        let d = IntMatrix::diagonal(&[BigInt::from(2), BigInt::from(3)]);
        assert_eq!(FgAbGroup::from_presentation(&d), g("Z/6"));
        assert_eq!(FgAbGroup::from_presentation(&IntMatrix::zeros(0, 2)), g("Z^2"));
        let one = IntMatrix::identity(2);
        assert_eq!(FgAbGroup::from_presentation(&one), FgAbGroup::zero());
    }

    #[test]
    fn tensor_and_hom() {
        assert_eq!(g("Z/6").tensor(&g("Z/4")), g("Z/2"));
        assert_eq!(g("Z/6").hom(&g("Z/4")), g("Z/2"));
        assert_eq!(g("Z").tensor(&g("Z^2+Z/4")), g("Z^2+Z/4"));
        assert_eq!(g("Z/4").hom(&g("Z")), FgAbGroup::zero());
        assert_eq!(g("Z").hom(&g("Z/3")), g("Z/3"));
    }

    #[test]
    fn exterior() {
        assert_eq!(g("Z^3").exterior_power(2).unwrap(), g("Z^3"));
        assert_eq!(g("Z^2").exterior_power(3).unwrap(), FgAbGroup::zero());
        assert!(matches!(g("Z/4").exterior_power(2), Err(Error::NonFreeGroup(_))));
    }

    #[test]
    fn torsion_parts() {
        assert_eq!(g("Z/12").n_torsion(&BigInt::from(4)), g("Z/4"));
        assert_eq!(g("Z^2").n_torsion(&BigInt::from(5)), FgAbGroup::zero());
        let (r, parts) = g("Z+Z/12").torsion_decompose();
        assert_eq!(r, 1);
        assert_eq!(parts[&2], g("Z/4"));
        assert_eq!(parts[&3], g("Z/3"));
    }

    #[test]
    fn normal_form_merges() {
        assert_eq!(g("Z/2+Z/3"), g("Z/6"));
        assert_eq!(g("Z/4+Z/6").torsion(), &[BigInt::from(2), BigInt::from(12)]);
        assert_eq!(g("(Z/2)^3").to_string(), "(Z/2)^3");
        assert_eq!(g("0"), FgAbGroup::zero());
        assert_eq!(g(r#"{"rank": 1, "torsion": [2, 4]}"#), g("Z+Z/2+Z/4"));
        assert!(r#"{"rank": 0, "torsion": [4, 2]}"#.parse::<FgAbGroup>().is_err());
    }
}
