//! Small cochain complexes for `⊕ Z/m_j` built from the periodic
//! resolutions of the cyclic factors, and colimits over ladders of levels.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::Layout;
use crate::abelian::{induced_map, ChainComplex, FgAbGroup, Homomorphism, SparseMatrix};
use crate::arith;
use crate::error::{Error, Result};

/// Multi-indices `a ∈ N^r` with `|a| = k`, in lexicographic order.
fn multi_indices(r: usize, k: usize) -> Vec<Vec<usize>> {
    if r == 0 {
        return if k == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for a0 in (0..=k).rev() {
        for mut rest in multi_indices(r - 1, k - a0) {
            rest.insert(0, a0);
            out.push(rest);
        }
    }
    out
}

/// Cochains `Hom(P_1 ⊗ … ⊗ P_r, M)` for the periodic resolutions of `Z/m_j`,
/// degrees `0..=degree_max`. The component `a → a + e_j` is `0` for even
/// `a_j` and `m_j` for odd `a_j`, with the Koszul sign `(−1)^{a_1+…+a_{j−1}}`.
pub fn periodic_complex(factors: &[u64], m: &FgAbGroup, degree_max: usize) -> Result<ChainComplex> {
    if factors.iter().any(|&x| x == 0) {
        return Err(Error::Invalid("cyclic factors must have positive order".into()));
    }
    let layout = Layout::new(m)?;
    let r = factors.len();
    let comps: Vec<Vec<Vec<usize>>> = (0..=degree_max).map(|k| multi_indices(r, k)).collect();
    let orders: Vec<Vec<i64>> = comps.iter().map(|c| layout.orders(c.len())).collect();
    let mut diffs = Vec::with_capacity(degree_max);
    for k in 0..degree_max {
        let index: HashMap<&Vec<usize>, usize> = comps[k].iter().enumerate().map(|(i, a)| (a, i)).collect();
        let (ns, nt) = (comps[k].len(), comps[k + 1].len());
        let mut rows = vec![Vec::new(); nt * layout.ngens()];
        for (t, b) in comps[k + 1].iter().enumerate() {
            let mut sign = 1i64;
            for j in 0..r {
                if b[j] > 0 && (b[j] - 1) % 2 == 1 {
                    let mut a = b.clone();
                    a[j] -= 1;
                    let s = index[&a];
                    let c = sign * factors[j] as i64;
                    for g in 0..layout.ngens() {
                        rows[layout.pos(nt, t, g)].push((layout.pos(ns, s, g) as u32, c));
                    }
                }
                // sign uses the source exponents before slot j, which agree with b
                if b[j] % 2 == 1 {
                    sign = -sign;
                }
            }
        }
        diffs.push(SparseMatrix::from_row_entries(ns * layout.ngens(), rows, &orders[k + 1])?);
    }
    ChainComplex::new(orders, diffs)
}

/// `H^i(⊕ Z/m_j, M)` from the periodic complex.
pub fn periodic_cohomology(factors: &[u64], m: &FgAbGroup, i: usize) -> Result<FgAbGroup> {
    periodic_complex(factors, m, i + 1)?.homology_at(i)
}

/// Inflation `H^i(⊕ Z/m_j, M) → H^i(⊕ Z/m'_j, M)` along the reduction
/// `Z/m'_j ↠ Z/m_j`, for `m_j | m'_j`. On the component `a` it is
/// multiplication by `Π (m'_j/m_j)^{⌊a_j/2⌋}`.
pub fn periodic_inflation(small: &[u64], large: &[u64], m: &FgAbGroup, i: usize) -> Result<Homomorphism> {
    if small.len() != large.len() {
        return Err(Error::Invalid("levels need the same number of factors".into()));
    }
    if small.iter().zip(large).any(|(&a, &b)| a == 0 || b % a != 0) {
        return Err(Error::Invalid("each factor of the smaller level must divide the larger".into()));
    }
    let layout = Layout::new(m)?;
    let comps = multi_indices(small.len(), i);
    let ratios: Vec<BigInt> = small.iter().zip(large).map(|(&a, &b)| BigInt::from(b / a)).collect();
    let scalars: Vec<BigInt> = comps
        .iter()
        .map(|a| {
            a.iter()
                .zip(&ratios)
                .fold(BigInt::one(), |acc, (&aj, q)| acc * num_traits::pow(q.clone(), aj / 2))
        })
        .collect();
    let hs = periodic_complex(small, m, i + 1)?.homology_data(i)?;
    let hl = periodic_complex(large, m, i + 1)?.homology_data(i)?;
    let n = comps.len();
    induced_map(&hs, &hl, |f| {
        let mut out = vec![BigInt::zero(); f.len()];
        for (t, c) in scalars.iter().enumerate() {
            for g in 0..layout.ngens() {
                let p = layout.pos(n, t, g);
                out[p] = arith::reduce(&(&f[p] * c), &BigInt::from(layout.order_of(g)));
            }
        }
        out
    })
}

/// Outcome of a ladder colimit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Colimit {
    pub value: FgAbGroup,
    pub ladder: Vec<u64>,
    /// `|H^i|` at each rung.
    #[serde(with = "crate::serde_int::vec")]
    pub level_orders: Vec<BigInt>,
    /// How stabilization was witnessed: `image-orders` or `divisibility`.
    pub criterion: String,
}

/// `colim_m H^i((Z/m)^r, M)` over a ladder of levels prime to `p`, for a
/// finite `M`. With three or more rungs the images of the last two-but-one and
/// last-but-one rungs in the last must have equal orders; with two rungs the
/// prime-to-`p` exponent `e` of `M` must divide `m_1` and, for `i ≥ 2`, also
/// `m_2/m_1`. The value is the image of the last-but-one rung in the last.
pub fn profinite_colimit_bruteforce(
    r: usize,
    m: &FgAbGroup,
    p: u64,
    i: usize,
    ladder: &[u64],
) -> Result<Colimit> {
    if !m.is_finite() {
        return Err(Error::NotTorsion(m.to_string()));
    }
    if ladder.is_empty() || ladder.iter().any(|&x| x == 0) {
        return Err(Error::Invalid("ladder rungs must be positive".into()));
    }
    if p > 1 && ladder.iter().any(|&x| x % p == 0) {
        return Err(Error::Invalid(format!("ladder rungs must be prime to {p}")));
    }
    if ladder.windows(2).any(|w| w[1] % w[0] != 0) {
        return Err(Error::Invalid("each rung must divide the next".into()));
    }
    let level = |x: u64| vec![x; r];
    let level_orders = ladder
        .iter()
        .map(|&x| Ok(periodic_cohomology(&level(x), m, i)?.order().expect("finite")))
        .collect::<Result<Vec<_>>>()?;
    let n = ladder.len();
    let not_stable = || Error::NotStabilized {
        ladder: ladder.to_vec(),
        degree: i,
    };
    if n == 1 {
        return Err(not_stable());
    }
    let last = level(ladder[n - 1]);
    let prev = level(ladder[n - 2]);
    let value = periodic_inflation(&prev, &last, m, i)?.image();
    let criterion = if n >= 3 {
        let older = periodic_inflation(&level(ladder[n - 3]), &last, m, i)?.image();
        if older.order() != value.order() {
            return Err(not_stable());
        }
        "image-orders"
    } else {
        let e = m.prime_to_part(p).exponent().expect("finite").to_u64();
        let Some(e) = e else { return Err(not_stable()) };
        let ok = ladder[0] % e == 0 && (i <= 1 || (ladder[1] / ladder[0]) % e == 0);
        if !ok {
            return Err(not_stable());
        }
        "divisibility"
    };
    Ok(Colimit {
        value,
        ladder: ladder.to_vec(),
        level_orders,
        criterion: criterion.into(),
    })
}

/// Ladder `e, e^2, …, e^len` for `e` the prime-to-`p` exponent of a finite
/// `M`; when `e = 1` the smallest prime other than `p` is used instead.
pub fn standard_ladder(m: &FgAbGroup, p: u64, len: usize) -> Result<Vec<u64>> {
    if !m.is_finite() {
        return Err(Error::NotTorsion(m.to_string()));
    }
    let e = m.prime_to_part(p).exponent().expect("finite").to_u64();
    let e = match e {
        Some(1) => arith::smallest_prime_avoiding(&[p]),
        Some(e) => e,
        None => return Err(Error::Invalid(format!("exponent of {m} exceeds 64 bits"))),
    };
    let mut out = Vec::with_capacity(len);
    let mut x = 1u64;
    for _ in 0..len {
        x = x
            .checked_mul(e)
            .ok_or_else(|| Error::Invalid(format!("ladder over {e} overflows 64 bits")))?;
        out.push(x);
    }
    Ok(out)
}
