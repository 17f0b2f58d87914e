//! Kummer covers `X_n → X` of a strictly henselian log point with chart
//! `P^gp ≅ Z^r` and residue characteristic `p`, their Čech complexes, and
//! the colimit over the tower.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::abelian::{ChainComplex, FgAbGroup, Homomorphism, SparseMatrix};
use crate::arith;
use crate::coefficients::SymbolicModule;
use crate::cohomology::{self, check_size, FiniteAbelianGroup, GroupMap, Layout};
use crate::error::{Error, Result};

/// Chart rank `r` and residue characteristic `p` (prime or 0).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawModel", into = "RawModel")]
pub struct LogPointModel {
    rank: usize,
    residue_char: u64,
}

#[derive(Serialize, Deserialize)]
struct RawModel {
    rank: usize,
    residue_char: u64,
}

impl TryFrom<RawModel> for LogPointModel {
    type Error = Error;
    fn try_from(r: RawModel) -> Result<Self> {
        LogPointModel::new(r.rank, r.residue_char)
    }
}

impl From<LogPointModel> for RawModel {
    fn from(m: LogPointModel) -> Self {
        RawModel {
            rank: m.rank,
            residue_char: m.residue_char,
        }
    }
}

impl LogPointModel {
    pub fn new(rank: usize, residue_char: u64) -> Result<Self> {
        if residue_char != 0 && !arith::is_prime(residue_char) {
            return Err(Error::Invalid(format!("residue characteristic {residue_char} is neither 0 nor prime")));
        }
        Ok(LogPointModel { rank, residue_char })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn residue_char(&self) -> u64 {
        self.residue_char
    }

    pub fn cover(&self, n: u64) -> Result<KummerCover> {
        KummerCover::new(*self, n)
    }
}

/// The cover obtained by extracting `n`-th roots, `n = m · p^t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KummerCover {
    pub base: LogPointModel,
    pub n: u64,
    pub m: u64,
    pub t: u32,
}

impl KummerCover {
    pub fn new(base: LogPointModel, n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("cover level must be at least 1".into()));
        }
        let p = base.residue_char;
        let (m, t) = if p == 0 {
            (n, 0)
        } else {
            let m = arith::strip_prime_u64(n, p);
            (m, log_p(n / m, p))
        };
        Ok(KummerCover { base, n, m, t })
    }

    /// `H_n(X) ≅ (Z/m)^r`; the `p`-part is connected and has no points.
    pub fn group(&self) -> FiniteAbelianGroup {
        if self.m == 1 {
            FiniteAbelianGroup::trivial()
        } else {
            FiniteAbelianGroup::homocyclic(self.m, self.base.rank)
        }
    }
}

fn log_p(mut x: u64, p: u64) -> u32 {
    let mut t = 0;
    while x > 1 {
        x /= p;
        t += 1;
    }
    t
}

pub fn kummer_group(model: &LogPointModel, n: u64) -> Result<FiniteAbelianGroup> {
    Ok(model.cover(n)?.group())
}

/// Points of `(H_m)^d` as tuples of characters `Γ_n → Z/m`, each given by its
/// values on the `r` generators of `Γ_n = P^{1/n}/P`.
struct Nerve {
    m: u64,
    r: usize,
}

impl Nerve {
    fn chars(&self) -> usize {
        (self.m as usize).pow(self.r as u32)
    }

    fn decode(&self, d: usize, mut idx: usize) -> Vec<Vec<u64>> {
        let mut out = vec![vec![0u64; self.r]; d];
        for slot in (0..d).rev() {
            for k in (0..self.r).rev() {
                out[slot][k] = idx as u64 % self.m;
                idx /= self.m as usize;
            }
        }
        out
    }

    fn encode(&self, h: &[Vec<u64>]) -> usize {
        h.iter()
            .flatten()
            .fold(0usize, |acc, &v| acc * self.m as usize + v as usize)
    }

    /// Incidence of the ring map `d_{d,i}` on the `Γ_n` slots: entry `[k][j]`
    /// is 1 when source slot `j` lands in target slot `k`. Face 0 sends the
    /// chart coordinate into slot 0 and shifts the rest; inner faces
    /// duplicate slot `i−1`; the last face appends the unit.
    fn face(d: usize, i: usize) -> Vec<Vec<u8>> {
        let mut phi = vec![vec![0u8; d - 1]; d];
        for j in 0..d - 1 {
            if i == 0 {
                phi[j + 1][j] = 1;
            } else if i < d {
                let k = if j < i { j } else { j + 1 };
                phi[k][j] = 1;
                if j == i - 1 {
                    phi[j + 1][j] = 1;
                }
            } else {
                phi[j][j] = 1;
            }
        }
        phi
    }

    /// Pullback of a point of `(H_m)^d` along a face: `g_j = Σ_k φ[k][j] h_k`.
    fn pull(&self, phi: &[Vec<u8>], h: &[Vec<u64>]) -> Vec<Vec<u64>> {
        let cols = phi.first().map_or(0, Vec::len);
        (0..cols)
            .map(|j| {
                (0..self.r)
                    .map(|c| {
                        phi.iter()
                            .zip(h)
                            .filter(|(row, _)| row[j] == 1)
                            .map(|(_, hk)| hk[c])
                            .sum::<u64>()
                            % self.m
                    })
                    .collect()
            })
            .collect()
    }
}

fn nerve_complex(cover: &KummerCover, coeff: &FgAbGroup, degree_max: usize) -> Result<ChainComplex> {
    let layout = Layout::new(coeff)?;
    let nerve = Nerve {
        m: cover.m,
        r: if cover.m == 1 { 0 } else { cover.base.rank },
    };
    let npts = |d: usize| nerve.chars().pow(d as u32);
    let orders: Vec<Vec<i64>> = (0..=degree_max).map(|d| layout.orders(npts(d))).collect();
    let mut diffs = Vec::with_capacity(degree_max);
    for d in 1..=degree_max {
        let (ns, nt) = (npts(d - 1), npts(d));
        let faces: Vec<_> = (0..=d).map(|i| Nerve::face(d, i)).collect();
        let mut rows = vec![Vec::new(); nt * layout.ngens()];
        for t in 0..nt {
            let h = nerve.decode(d, t);
            for (i, phi) in faces.iter().enumerate() {
                let s = nerve.encode(&nerve.pull(phi, &h));
                let sign = if i % 2 == 0 { 1 } else { -1 };
                for j in 0..layout.ngens() {
                    rows[layout.pos(nt, t, j)].push((layout.pos(ns, s, j) as u32, sign));
                }
            }
        }
        diffs.push(SparseMatrix::from_row_entries(ns * layout.ngens(), rows, &orders[d])?);
    }
    ChainComplex::new(orders, diffs)
}

/// The Čech complex of `X_n/X` with constant coefficients, degrees
/// `0..=degree_max`, built from the nerve `X_n ×_X … ×_X X_n ≅ X_n × (H_n)^d`
/// and checked against the standard complex of `H_n(X)`.
pub fn cech_complex(
    model: &LogPointModel,
    n: u64,
    coeff: &FgAbGroup,
    degree_max: usize,
    bound: u128,
) -> Result<ChainComplex> {
    let cover = model.cover(n)?;
    let g = cover.group();
    check_size(g.order(), degree_max, coeff.ngens(), bound)?;
    let c = nerve_complex(&cover, coeff, degree_max)?;
    let s = cohomology::standard_complex(&g, coeff, degree_max, bound)?;
    if c != s {
        return Err(Error::Invalid(format!(
            "Čech complex of level {n} differs from the standard complex of {g}"
        )));
    }
    Ok(c)
}

/// `Ȟ^i(X_n/X, M)`.
pub fn cech_cohomology(model: &LogPointModel, n: u64, coeff: &FgAbGroup, i: usize, bound: u128) -> Result<FgAbGroup> {
    cech_complex(model, n, coeff, i + 1, bound)?.homology_at(i)
}

/// `Ȟ^i(X_m/X) → Ȟ^i(X_n/X)` for `n = m·p^t`. On points `H_n → H_m` is
/// multiplication by `p^t`, an automorphism of `(Z/m)^r`.
pub fn cech_cohomology_tower_map(
    model: &LogPointModel,
    m: u64,
    n: u64,
    coeff: &FgAbGroup,
    i: usize,
    bound: u128,
) -> Result<Homomorphism> {
    let p = model.residue_char;
    let bad = Error::BadTower { m, n, p };
    if m == 0 || n == 0 {
        return Err(bad);
    }
    let big = model.cover(n)?;
    if big.m != m {
        return Err(bad);
    }
    let g = big.group();
    let k = g.factors().len();
    let scale: u64 = if p == 0 {
        1
    } else {
        BigInt::from(p)
            .modpow(&BigInt::from(big.t), &BigInt::from(m))
            .try_into()
            .expect("reduced below m")
    };
    let images = (0..k)
        .map(|a| (0..k).map(|b| if a == b { scale } else { 0 }).collect())
        .collect();
    let pi = GroupMap::new(g.clone(), g, images)?;
    cohomology::inflation_bounded(&pi, coeff, i, bound)
}

/// `colim_n Ȟ^i(X_n/X, M) ≅ M'(−i) ⊗ ∧^i Z^r` for torsion `M` and `i ≥ 1`,
/// `M'` the prime-to-`p` part.
pub fn cech_colimit(model: &LogPointModel, coeff: &SymbolicModule, i: usize) -> Result<SymbolicModule> {
    if i == 0 {
        return Err(Error::Invalid("the colimit formula needs degree at least 1".into()));
    }
    if !coeff.is_torsion() {
        return Err(Error::NotTorsion(coeff.to_string()));
    }
    let m = coeff.prime_to_p(model.residue_char)?;
    Ok(m.twist(-(i as i64)).power(arith::binomial(model.rank, i)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::DEFAULT_SIZE_BOUND;

    fn g(s: &str) -> FgAbGroup {
        s.parse().unwrap()
    }

    #[test]
    fn groups() {
        let f = |r, p, n| kummer_group(&LogPointModel::new(r, p).unwrap(), n).unwrap();
        assert_eq!(f(2, 3, 6), FiniteAbelianGroup::homocyclic(2, 2));
        assert_eq!(f(1, 2, 8).order(), 1);
        assert_eq!(f(1, 0, 5), FiniteAbelianGroup::homocyclic(5, 1));
        let c = LogPointModel::new(1, 3).unwrap().cover(18).unwrap();
        assert_eq!((c.m, c.t), (2, 2));
        assert!(LogPointModel::new(1, 4).is_err());
    }

    #[test]
    fn faces_match_bar_formula() {
        // inner face merges two adjacent slots
        assert_eq!(Nerve::face(3, 1), vec![vec![1, 0], vec![1, 0], vec![0, 1]]);
        assert_eq!(Nerve::face(3, 0), vec![vec![0, 0], vec![1, 0], vec![0, 1]]);
        assert_eq!(Nerve::face(3, 3), vec![vec![1, 0], vec![0, 1], vec![0, 0]]);
    }

    #[test]
    fn small_cech_values() {
        let x = LogPointModel::new(1, 0).unwrap();
        assert_eq!(cech_cohomology(&x, 2, &g("Z"), 1, DEFAULT_SIZE_BOUND).unwrap(), FgAbGroup::zero());
        assert_eq!(cech_cohomology(&x, 2, &g("Z"), 2, DEFAULT_SIZE_BOUND).unwrap(), g("Z/2"));
        let y = LogPointModel::new(1, 2).unwrap();
        let c = cech_complex(&y, 2, &g("Z/2"), 4, DEFAULT_SIZE_BOUND).unwrap();
        for d in 0..4 {
            let dense = c.differential(d).to_dense();
            let expect = if d % 2 == 0 { 0 } else { 1 };
            assert_eq!(dense.get(0, 0), &BigInt::from(expect));
        }
        for i in 1..4 {
            assert!(c.homology_at(i).unwrap().is_zero());
        }
    }

    #[test]
    fn tower() {
        let x = LogPointModel::new(1, 3).unwrap();
        let f = cech_cohomology_tower_map(&x, 2, 6, &g("Z"), 2, DEFAULT_SIZE_BOUND).unwrap();
        assert_eq!(f.source(), &g("Z/2"));
        assert!(f.is_isomorphism());
        let id = cech_cohomology_tower_map(&x, 4, 4, &g("Z/4"), 1, DEFAULT_SIZE_BOUND).unwrap();
        assert_eq!(id, Homomorphism::identity(&g("Z/4")));
        assert_eq!(
            cech_cohomology_tower_map(&x, 2, 4, &g("Z"), 1, DEFAULT_SIZE_BOUND),
            Err(Error::BadTower { m: 2, n: 4, p: 3 })
        );
    }

    #[test]
    fn colimit_examples() {
        let m = |s: &str| s.parse::<SymbolicModule>().unwrap();
        let x = LogPointModel::new(1, 3).unwrap();
        assert_eq!(cech_colimit(&x, &m("Z/5"), 1).unwrap(), m("Z/5(-1)"));
        assert_eq!(cech_colimit(&x, &m("Z/9"), 2).unwrap(), SymbolicModule::zero());
        let y = LogPointModel::new(2, 3).unwrap();
        assert_eq!(cech_colimit(&y, &m("Z/2"), 2).unwrap(), m("Z/2(-2)"));
        assert!(cech_colimit(&y, &m("Z/2"), 0).is_err());
    }
}
