//! Cohomology of finite abelian groups with trivial coefficients: the
//! inhomogeneous standard complex, inflation maps, the cyclic periodicity
//! oracle, and the profinite colimits over prime-to-`p` quotients of `Ẑ^r`.

mod periodic;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::abelian::{induced_map, ChainComplex, FgAbGroup, Homology, Homomorphism, IntMatrix, SparseMatrix};
use crate::arith;
use crate::coefficients::SymbolicModule;
use crate::error::{Error, Result};

pub use periodic::{periodic_cohomology, periodic_complex, periodic_inflation, profinite_colimit_bruteforce, standard_ladder, Colimit};

/// Default cap on the number of generators in the top term of a standard complex.
pub const DEFAULT_SIZE_BOUND: u128 = 1 << 20;

/// `⊕ Z/m_i` with elements encoded as mixed-radix integers, the first
/// factor most significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct FiniteAbelianGroup {
    factors: Vec<u64>,
}

impl TryFrom<Vec<u64>> for FiniteAbelianGroup {
    type Error = Error;
    fn try_from(v: Vec<u64>) -> Result<Self> {
        FiniteAbelianGroup::new(v)
    }
}

impl From<FiniteAbelianGroup> for Vec<u64> {
    fn from(g: FiniteAbelianGroup) -> Self {
        g.factors
    }
}

impl FiniteAbelianGroup {
    pub fn new(factors: Vec<u64>) -> Result<Self> {
        if factors.iter().any(|&m| m == 0) {
            return Err(Error::Invalid("cyclic factors must have positive order".into()));
        }
        let g = FiniteAbelianGroup { factors };
        if g.checked_order().is_none() {
            return Err(Error::Invalid("group order does not fit in 64 bits".into()));
        }
        Ok(g)
    }

    pub fn trivial() -> Self {
        FiniteAbelianGroup { factors: vec![] }
    }

    /// `(Z/m)^r`.
    pub fn homocyclic(m: u64, r: usize) -> Self {
        FiniteAbelianGroup { factors: vec![m; r] }
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    fn checked_order(&self) -> Option<u64> {
        self.factors.iter().try_fold(1u64, |a, &m| a.checked_mul(m))
    }

    pub fn order(&self) -> u64 {
        self.checked_order().expect("checked at construction")
    }

    /// Residues of the element with the given index.
    pub fn element(&self, mut idx: u64) -> Vec<u64> {
        let mut out = vec![0; self.factors.len()];
        for (k, &m) in self.factors.iter().enumerate().rev() {
            out[k] = idx % m;
            idx /= m;
        }
        out
    }

    pub fn index(&self, residues: &[u64]) -> u64 {
        self.factors
            .iter()
            .zip(residues)
            .fold(0, |acc, (&m, &r)| acc * m + r % m)
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let (x, y) = (self.element(a), self.element(b));
        let s: Vec<u64> = x.iter().zip(&y).zip(&self.factors).map(|((u, v), m)| (u + v) % m).collect();
        self.index(&s)
    }

    /// The group in invariant-factor normal form.
    pub fn to_fg(&self) -> FgAbGroup {
        let orders: Vec<BigInt> = self.factors.iter().map(|&m| BigInt::from(m)).collect();
        FgAbGroup::from_cyclic_orders(&orders)
    }

    fn addition_table(&self) -> Vec<u32> {
        let n = self.order() as usize;
        let mut t = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                t[a * n + b] = self.add(a as u64, b as u64) as u32;
            }
        }
        t
    }
}

impl std::fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.factors.iter().map(|m| format!("Z/{m}")).collect();
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

impl std::str::FromStr for FiniteAbelianGroup {
    type Err = Error;
    /// Accepts group notation such as `Z/2+Z/2`, `(Z/6)^2` or `0`.
    fn from_str(s: &str) -> Result<Self> {
        let g: FgAbGroup = s.parse()?;
        if !g.is_finite() {
            return Err(Error::Invalid(format!("{s:?} is not a finite group")));
        }
        let factors = g
            .torsion()
            .iter()
            .map(|d| d.to_u64().ok_or_else(|| Error::Invalid("factor exceeds 64 bits".into())))
            .collect::<Result<Vec<_>>>()?;
        FiniteAbelianGroup::new(factors)
    }
}

/// Layout of `M^N` inside a cochain term: the generators of `M` for tuple `t`.
pub(crate) struct Layout {
    rank: usize,
    torsion: Vec<i64>,
}

impl Layout {
    pub(crate) fn new(m: &FgAbGroup) -> Result<Self> {
        let torsion = m
            .torsion()
            .iter()
            .map(|d| d.to_i64().ok_or_else(|| Error::Invalid("coefficient factor exceeds 64 bits".into())))
            .collect::<Result<Vec<_>>>()?;
        Ok(Layout { rank: m.rank(), torsion })
    }

    pub(crate) fn ngens(&self) -> usize {
        self.rank + self.torsion.len()
    }

    pub(crate) fn order_of(&self, j: usize) -> i64 {
        if j < self.rank {
            0
        } else {
            self.torsion[j - self.rank]
        }
    }

    /// Coordinate of generator `j` of `M` at tuple `t` among `n` tuples.
    pub(crate) fn pos(&self, n: usize, t: usize, j: usize) -> usize {
        if j < self.rank {
            t * self.rank + j
        } else {
            self.rank * n + (j - self.rank) * n + t
        }
    }

    pub(crate) fn orders(&self, n: usize) -> Vec<i64> {
        let mut o = vec![0i64; self.rank * n];
        for &d in &self.torsion {
            o.extend(std::iter::repeat(d).take(n));
        }
        o
    }
}

pub(crate) fn check_size(g_order: u64, degree_max: usize, gens: usize, bound: u128) -> Result<()> {
    let mut needed: u128 = gens.max(1) as u128;
    for _ in 0..degree_max {
        needed = needed.saturating_mul(g_order as u128);
    }
    if needed > bound {
        return Err(Error::SizeBound { needed, bound });
    }
    Ok(())
}

/// Face data of the bar construction: for a target tuple index `t` of
/// length `r + 1`, the source tuple index of face `i`.
pub(crate) struct Faces {
    g: FiniteAbelianGroup,
    n: usize,
    table: Option<Vec<u32>>,
}

impl Faces {
    pub(crate) fn new(g: &FiniteAbelianGroup) -> Self {
        let n = g.order() as usize;
        Faces {
            g: g.clone(),
            n,
            table: (n <= 1 << 12).then(|| g.addition_table()),
        }
    }

    fn add(&self, a: usize, b: usize) -> usize {
        match &self.table {
            Some(t) => t[a * self.n + b] as usize,
            None => self.g.add(a as u64, b as u64) as usize,
        }
    }

    /// Source tuples of faces `0..=r+1` for the `(r+1)`-tuple `t`.
    pub(crate) fn sources(&self, r: usize, t: usize, digits: &mut Vec<usize>, out: &mut Vec<usize>) {
        let n = self.n;
        let len = r + 1;
        digits.clear();
        let mut x = t;
        for _ in 0..len {
            digits.push(x % n);
            x /= n;
        }
        digits.reverse();
        out.clear();
        let pw = n.pow(r as u32);
        out.push(t % pw);
        for i in 1..len {
            let mut idx = 0usize;
            for (k, &h) in digits.iter().enumerate() {
                if k == i {
                    continue;
                }
                let h = if k == i - 1 {
                    self.add(h, digits[i])
                } else {
                    h
                };
                idx = idx * n + h;
            }
            out.push(idx);
        }
        out.push(t / n);
    }
}

/// The standard inhomogeneous cochain complex `Map(G^r, M)` for `r ≤ degree_max`,
/// with `(∂f)(h_1,…,h_{r+1}) = f(h_2,…) + Σ(−1)^i f(…,h_i+h_{i+1},…) + (−1)^{r+1} f(h_1,…,h_r)`.
pub fn standard_complex(
    g: &FiniteAbelianGroup,
    m: &FgAbGroup,
    degree_max: usize,
    bound: u128,
) -> Result<ChainComplex> {
    check_size(g.order(), degree_max, m.ngens(), bound)?;
    let layout = Layout::new(m)?;
    let n = g.order() as usize;
    let faces = Faces::new(g);
    let mut orders = Vec::with_capacity(degree_max + 1);
    let mut diffs = Vec::with_capacity(degree_max);
    for r in 0..=degree_max {
        orders.push(layout.orders(n.pow(r as u32)));
    }
    let (mut digits, mut src) = (Vec::new(), Vec::new());
    for r in 0..degree_max {
        let (ns, nt) = (n.pow(r as u32), n.pow(r as u32 + 1));
        let mut rows: Vec<Vec<(u32, i64)>> = vec![Vec::new(); nt * layout.ngens()];
        for t in 0..nt {
            faces.sources(r, t, &mut digits, &mut src);
            for j in 0..layout.ngens() {
                let row = &mut rows[layout.pos(nt, t, j)];
                for (i, &s) in src.iter().enumerate() {
                    let sign = if i % 2 == 0 { 1 } else { -1 };
                    row.push((layout.pos(ns, s, j) as u32, sign));
                }
            }
        }
        diffs.push(SparseMatrix::from_row_entries(ns * layout.ngens(), rows, &orders[r + 1])?);
    }
    Ok(ChainComplex::new_unchecked(orders, diffs))
}

/// `H^i(G, M)` from the standard complex.
pub fn cohomology_bruteforce(g: &FiniteAbelianGroup, m: &FgAbGroup, i: usize) -> Result<FgAbGroup> {
    cohomology_bruteforce_bounded(g, m, i, DEFAULT_SIZE_BOUND)
}

pub fn cohomology_bruteforce_bounded(
    g: &FiniteAbelianGroup,
    m: &FgAbGroup,
    i: usize,
    bound: u128,
) -> Result<FgAbGroup> {
    standard_complex(g, m, i + 1, bound)?.homology_at(i)
}

/// Cohomology of `Z/m` with trivial coefficients by periodicity:
/// `M`, then `M[m]` in odd and `M/mM` in positive even degrees.
pub fn cohomology_cyclic_closed(m: u64, coeff: &FgAbGroup, i: usize) -> Result<FgAbGroup> {
    if m == 0 {
        return Err(Error::Invalid("cyclic group order must be positive".into()));
    }
    let mb = BigInt::from(m);
    Ok(match i {
        0 => coeff.clone(),
        _ if i % 2 == 1 => coeff.n_torsion(&mb),
        _ => coeff.mod_n(&mb),
    })
}

/// Cohomology of a finite group with coefficients in `Q`.
pub fn cohomology_rational(_g: &FiniteAbelianGroup, i: usize) -> SymbolicModule {
    if i == 0 {
        SymbolicModule::q()
    } else {
        SymbolicModule::zero()
    }
}

/// A homomorphism `G' → G` of finite abelian groups given by the images of
/// the generators of `G'` (one residue vector per factor of `G'`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupMap {
    pub source: FiniteAbelianGroup,
    pub target: FiniteAbelianGroup,
    pub images: Vec<Vec<u64>>,
}

impl GroupMap {
    pub fn new(source: FiniteAbelianGroup, target: FiniteAbelianGroup, images: Vec<Vec<u64>>) -> Result<Self> {
        if images.len() != source.factors().len() || images.iter().any(|v| v.len() != target.factors().len()) {
            return Err(Error::Invalid("generator images have the wrong shape".into()));
        }
        let map = GroupMap { source, target, images };
        map.check_well_defined()?;
        Ok(map)
    }

    /// Reduction `Z/a_1 ⊕ … → Z/b_1 ⊕ …` factorwise, for `b_k | a_k`.
    pub fn reduction(source: FiniteAbelianGroup, target: FiniteAbelianGroup) -> Result<Self> {
        let k = source.factors().len();
        if target.factors().len() != k {
            return Err(Error::Invalid("reduction needs the same number of factors".into()));
        }
        let images = (0..k)
            .map(|i| (0..k).map(|j| u64::from(i == j)).collect())
            .collect();
        Self::new(source, target, images)
    }

    fn check_well_defined(&self) -> Result<()> {
        let t = self.target.factors();
        for (img, &a) in self.images.iter().zip(self.source.factors()) {
            for (&v, &b) in img.iter().zip(t) {
                if (v as u128 * a as u128) % b as u128 != 0 {
                    return Err(Error::IllDefinedMap(format!(
                        "generator of order {a} cannot map to {v} in Z/{b}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn is_surjective(&self) -> bool {
        // cokernel of [images | diag(target)] must vanish
        let t = self.target.factors();
        let mut rows: Vec<Vec<BigInt>> = self
            .images
            .iter()
            .map(|img| img.iter().map(|&v| BigInt::from(v)).collect())
            .collect();
        for (k, &b) in t.iter().enumerate() {
            let mut r = vec![BigInt::zero(); t.len()];
            r[k] = BigInt::from(b);
            rows.push(r);
        }
        let m = IntMatrix::from_rows(&rows).expect("rectangular");
        FgAbGroup::from_presentation(&m).is_zero()
    }

    /// Image of every element of the source, by index.
    fn table(&self) -> Vec<u32> {
        let n = self.source.order();
        (0..n)
            .map(|idx| {
                let x = self.source.element(idx);
                let t = self.target.factors();
                let y: Vec<u64> = (0..t.len())
                    .map(|i| {
                        let mut acc: u128 = 0;
                        for (j, &xj) in x.iter().enumerate() {
                            acc += xj as u128 * self.images[j][i] as u128;
                        }
                        (acc % t[i] as u128) as u64
                    })
                    .collect();
                self.target.index(&y) as u32
            })
            .collect()
    }
}

/// Precomposition `Map(G^i, M) → Map(G'^i, M)` along `π: G' → G`.
fn precompose(
    pi_table: &[u32],
    n_src: usize,
    n_tgt: usize,
    i: usize,
    layout: &Layout,
    f: &[BigInt],
) -> Vec<BigInt> {
    let (ns, nt) = (n_tgt.pow(i as u32), n_src.pow(i as u32));
    let mut out = vec![BigInt::zero(); nt * layout.ngens()];
    for t in 0..nt {
        let mut x = t;
        let mut digits = vec![0usize; i];
        for k in (0..i).rev() {
            digits[k] = x % n_src;
            x /= n_src;
        }
        let s = digits.iter().fold(0usize, |acc, &h| acc * n_tgt + pi_table[h] as usize);
        for j in 0..layout.ngens() {
            let v = &f[layout.pos(ns, s, j)];
            let o = BigInt::from(layout.order_of(j));
            out[layout.pos(nt, t, j)] = arith::reduce(v, &o);
        }
    }
    out
}

/// Inflation `H^i(G, M) → H^i(G', M)` along a surjection `G' ↠ G`.
pub fn inflation(map: &GroupMap, m: &FgAbGroup, i: usize) -> Result<Homomorphism> {
    inflation_bounded(map, m, i, DEFAULT_SIZE_BOUND)
}

pub fn inflation_bounded(map: &GroupMap, m: &FgAbGroup, i: usize, bound: u128) -> Result<Homomorphism> {
    if !map.is_surjective() {
        return Err(Error::NotSurjective(format!("{} → {}", map.source, map.target)));
    }
    let hg = standard_complex(&map.target, m, i + 1, bound)?.homology_data(i)?;
    let hgp = standard_complex(&map.source, m, i + 1, bound)?.homology_data(i)?;
    let layout = Layout::new(m)?;
    let table = map.table();
    let (ns, nt) = (map.source.order() as usize, map.target.order() as usize);
    induced_map(&hg, &hgp, |f| precompose(&table, ns, nt, i, &layout, f))
}

/// Homology of the standard complex of `G` in degree `i`, with lifts.
pub fn cohomology_data(g: &FiniteAbelianGroup, m: &FgAbGroup, i: usize, bound: u128) -> Result<Homology> {
    standard_complex(g, m, i + 1, bound)?.homology_data(i)
}

/// Continuous cohomology of `(Ẑ')^r` (the prime-to-`p` completion, `p = 0`
/// meaning all of `Ẑ`) with trivial torsion coefficients: `M` in degree 0 and
/// `(M')^{binom(r, i)}` for `i ≥ 1`, `M'` the prime-to-`p` part.
pub fn profinite_closed_form(r: usize, m: &SymbolicModule, p: u64, i: usize) -> Result<SymbolicModule> {
    if !m.is_torsion() {
        return Err(Error::NotTorsion(m.to_string()));
    }
    if i == 0 {
        return Ok(m.clone());
    }
    Ok(m.prime_to_p(p)?.power(arith::binomial(r, i)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> FgAbGroup {
        s.parse().unwrap()
    }

    fn fa(s: &str) -> FiniteAbelianGroup {
        s.parse().unwrap()
    }

    #[test]
    fn standard_complex_is_a_complex() {
        for (gs, ms) in [("Z/2", "Z/2"), ("Z/3", "Z"), ("Z/2+Z/2", "Z+Z/2"), ("Z/4", "Z/6")] {
            let c = standard_complex(&fa(gs), &g(ms), 3, DEFAULT_SIZE_BOUND).unwrap();
            c.check().unwrap();
        }
    }

    #[test]
    fn trivial_group() {
        let c = standard_complex(&FiniteAbelianGroup::trivial(), &g("Z/5"), 3, DEFAULT_SIZE_BOUND).unwrap();
        assert_eq!(c.homology_at(0).unwrap(), g("Z/5"));
        assert_eq!(c.homology_at(1).unwrap(), FgAbGroup::zero());
        assert_eq!(c.homology_at(2).unwrap(), FgAbGroup::zero());
    }

    #[test]
    fn small_values() {
        assert_eq!(cohomology_bruteforce(&fa("Z/2"), &g("Z/2"), 1).unwrap(), g("Z/2"));
        assert_eq!(cohomology_bruteforce(&fa("Z/2"), &g("Z"), 2).unwrap(), g("Z/2"));
        assert_eq!(cohomology_bruteforce(&fa("Z/2+Z/2"), &g("Z/2"), 1).unwrap(), g("Z/2+Z/2"));
        assert_eq!(cohomology_bruteforce(&fa("Z/3"), &g("Z"), 1).unwrap(), FgAbGroup::zero());
        let c = standard_complex(&fa("Z/2"), &g("Z"), 1, DEFAULT_SIZE_BOUND).unwrap();
        assert!(c.differential(0).is_zero());
    }

    #[test]
    fn cyclic_closed_examples() {
        assert_eq!(cohomology_cyclic_closed(4, &g("Z/6"), 2).unwrap(), g("Z/2"));
        assert_eq!(cohomology_cyclic_closed(4, &g("Z"), 3).unwrap(), FgAbGroup::zero());
        assert_eq!(cohomology_cyclic_closed(2, &g("Z/4"), 3).unwrap(), g("Z/2"));
    }

    #[test]
    fn size_bound_reported() {
        let e = standard_complex(&fa("Z/6+Z/6"), &g("Z"), 4, DEFAULT_SIZE_BOUND).unwrap_err();
        assert!(matches!(e, Error::SizeBound { .. }));
    }

    #[test]
    fn inflation_examples() {
        let z4 = fa("Z/4");
        let z2 = fa("Z/2");
        let pi = GroupMap::reduction(z4.clone(), z2.clone()).unwrap();
        let h1 = inflation(&pi, &g("Z/2"), 1).unwrap();
        assert!(h1.is_isomorphism());
        let h2 = inflation(&pi, &g("Z/2"), 2).unwrap();
        assert_eq!(h2.source(), &g("Z/2"));
        assert_eq!(h2.target(), &g("Z/2"));
        assert!(h2.is_zero());
        let id = GroupMap::reduction(z2.clone(), z2.clone()).unwrap();
        assert_eq!(inflation(&id, &g("Z/2"), 2).unwrap(), Homomorphism::identity(&g("Z/2")));
        let not_onto = GroupMap::new(z4, z2, vec![vec![0]]).unwrap();
        assert!(matches!(inflation(&not_onto, &g("Z/2"), 1), Err(Error::NotSurjective(_))));
    }

    #[test]
    fn closed_form_examples() {
        let m = |s: &str| s.parse::<SymbolicModule>().unwrap();
        assert_eq!(profinite_closed_form(2, &m("Z/5"), 3, 2).unwrap(), m("Z/5"));
        assert_eq!(profinite_closed_form(1, &m("Z/9"), 3, 1).unwrap(), SymbolicModule::zero());
        assert_eq!(profinite_closed_form(1, &m("Q/Z"), 3, 1).unwrap(), m("(Q/Z)^(3')"));
        assert_eq!(profinite_closed_form(1, &m("Z/9"), 3, 0).unwrap(), m("Z/9"));
        assert!(profinite_closed_form(1, &m("Z"), 3, 1).is_err());
    }
}
